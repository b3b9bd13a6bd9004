"""Sequential and round-parallel Delaunay refinement for planar domains and the flat torus."""

from .domain import PeriodicPointSet, Pslg, local_feature_size, validate_pslg
from .errors import DelrefError, InputError, InvariantViolation, IoError
from .kernels import BACKEND
from .mesh import Mesh
from .model import Candidate, QualityRule
from .refine_par import (flatten, parallel_chew_pps, parallel_chew_pslg, parallel_generic_pps,
                         parallel_generic_pslg, parallel_ruppert_pps, parallel_ruppert_pslg)
from .refine_seq import replay, seq_refine

__version__ = "0.1.0"

__all__ = ["BACKEND", "Candidate", "DelrefError", "InputError", "InvariantViolation", "IoError",
           "Mesh", "PeriodicPointSet", "Pslg", "QualityRule", "flatten", "local_feature_size",
           "parallel_chew_pps", "parallel_chew_pslg", "parallel_generic_pps",
           "parallel_generic_pslg", "parallel_ruppert_pps", "parallel_ruppert_pslg", "replay",
           "seq_refine", "validate_pslg"]
