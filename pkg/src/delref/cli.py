"""Command-line interface.

Exit codes: 0 success, 2 invalid input or configuration, 3 invariant
violation, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass

from . import analysis, io
from .errors import ConfigError, DelrefError, InvalidDomain, InvariantViolation
from .model import SQRT2, QualityRule

log = logging.getLogger("delref")

ALGORITHMS = ("seq-ruppert", "seq-chew", "par-ruppert", "par-chew", "par-generic")
DOMAINS = ("pslg", "periodic")


@dataclass
class JobConfig:
    input: str
    algorithm: str = "seq-ruppert"
    domain_kind: str | None = None
    beta: float = SQRT2
    alpha: float = 3.0
    threads: int = 1
    mis_policy: str = "maximal"
    out: str | None = None
    trace: str | None = None
    svg: str | None = None
    report: str | None = None
    strict_checks: bool = False

    def validate(self) -> "JobConfig":
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}")
        if self.domain_kind is None:
            self.domain_kind = "pslg" if self.input.endswith(".poly") else "periodic"
        if self.domain_kind not in DOMAINS:
            raise ConfigError(f"unknown domain kind {self.domain_kind!r}")
        QualityRule("ruppert", self.beta)
        if not self.alpha > 2:
            raise ConfigError(f"alpha must exceed 2, got {self.alpha}")
        if self.threads < 1:
            raise ConfigError("threads must be positive")
        if self.out is None:
            self.out = os.path.splitext(self.input)[0] + ".mesh"
        return self


def _refine(cfg: JobConfig, domain):
    from . import refine_par as par
    from .refine_seq import seq_refine

    check = cfg.strict_checks
    periodic = cfg.domain_kind == "periodic"
    if cfg.algorithm.startswith("seq-"):
        rule = QualityRule(cfg.algorithm[4:], cfg.beta)
        m, ins = seq_refine(domain, rule, threads=cfg.threads, check=check)
        return m, None, ins.to_json()
    kw = {"threads": cfg.threads, "check": check}
    if cfg.algorithm == "par-chew":
        fn = par.parallel_chew_pps if periodic else par.parallel_chew_pslg
        m, tr = fn(domain, cfg.beta, **kw)
    elif cfg.algorithm == "par-ruppert":
        if periodic:
            m, tr = par.parallel_ruppert_pps(domain, cfg.beta, **kw)
        else:
            m, tr = par.parallel_ruppert_pslg(domain, cfg.beta, alpha=cfg.alpha, **kw)
    else:
        fn = par.parallel_generic_pps if periodic else par.parallel_generic_pslg
        m, tr = fn(domain, QualityRule("ruppert", cfg.beta), cfg.mis_policy, **kw)
    if check:
        for name, found in (("conflict", analysis.check_conflict_lemma(tr)),
                            ("encroach", analysis.check_encroach_ratio(tr))):
            if found:
                raise InvariantViolation(f"{name} check failed: {found[:3]}")
    return m, tr, tr.to_json()


def run(cfg: JobConfig) -> int:
    """Execute a refinement job; returns the process exit status."""
    cfg.validate()
    if cfg.domain_kind == "pslg":
        domain = io.read_poly(cfg.input)
    else:
        domain = io.read_periodic(cfg.input)
    m, tr, trace_doc = _refine(cfg, domain)
    paths = io.write_mesh(cfg.out, m)
    log.info("wrote %s", ", ".join(paths))
    if cfg.trace:
        io.write_json(cfg.trace, trace_doc)
    if cfg.svg:
        io.render_svg(cfg.svg, m, segments=True, poor_beta=cfg.beta)
    if cfg.report:
        q = analysis.quality_report(m)
        if cfg.report.endswith(".json"):
            doc = {"quality": analysis.to_json(q)}
            if tr is not None:
                doc["bounds"] = analysis.to_json(analysis.bound_report(tr))
            io.write_json(cfg.report, doc)
        else:
            text = analysis.to_text(q)
            if tr is not None:
                text += analysis.to_text(analysis.bound_report(tr))
            io._write(cfg.report, text)
    return 0


def _cmd_validate(args) -> int:
    from .domain import Pslg, validate_pslg

    try:
        d = io.read_poly(args.input)
    except InvalidDomain as exc:
        if exc.report is None:
            raise
        for v in exc.report.violations():
            print(" ".join(map(str, v)))
        return exc.exit_code
    assert isinstance(d, Pslg)
    print(f"ok vertices={len(d.vertices)} segments={len(d.segments)}")
    return 0 if validate_pslg(d).ok else 2


def _cmd_report(args) -> int:
    m = io.read_mesh(args.mesh)
    domain = io.read_poly(args.domain) if args.domain else None
    q = analysis.quality_report(m, domain)
    if args.json:
        print(json.dumps(analysis.to_json(q), sort_keys=True))
    else:
        sys.stdout.write(analysis.to_text(q))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="delref", description="Delaunay refinement mesher")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("refine", help="refine a .poly domain or a periodic point file")
    r.add_argument("input")
    r.add_argument("--algo", default="seq-ruppert", choices=ALGORITHMS)
    r.add_argument("--domain", choices=DOMAINS, help="default: pslg for .poly, else periodic")
    r.add_argument("--beta", type=float, default=SQRT2)
    r.add_argument("--alpha", type=float, default=3.0)
    r.add_argument("--threads", type=int, default=1)
    r.add_argument("--mis-policy", default="maximal", choices=("maximal", "any-independent"))
    r.add_argument("-o", "--out", help="output stem for .node/.ele/.poly")
    r.add_argument("--trace", help="write the round trace / insertion log as JSON")
    r.add_argument("--svg", help="render the mesh")
    r.add_argument("--report", help="quality and bound report (.json or key=value text)")
    r.add_argument("--strict-checks", action="store_true")

    v = sub.add_parser("validate", help="check a .poly domain")
    v.add_argument("input")

    q = sub.add_parser("report", help="quality report of a written mesh")
    q.add_argument("mesh", help="mesh stem")
    q.add_argument("--domain", help=".poly file for edge/lfs ratios")
    q.add_argument("--json", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.command == "refine":
            cfg = JobConfig(args.input, args.algo, args.domain, args.beta, args.alpha,
                            args.threads, args.mis_policy, args.out, args.trace, args.svg,
                            args.report, args.strict_checks)
            return run(cfg)
        if args.command == "validate":
            return _cmd_validate(args)
        return _cmd_report(args)
    except DelrefError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
