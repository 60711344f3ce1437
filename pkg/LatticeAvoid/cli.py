"""
Command-line front end for LatticeAvoid.

Each subcommand parses its descriptors, runs one driver, writes the
resulting artifact and prints a single summary line on stdout. The process
exit code tells callers what happened:

- 0: success, every certificate check passed
- 1: unexpected internal error
- 2: invalid input or a failed predicate check
- 3: budget or precision exhausted, or an inconclusive search
- 4: a certified bound was violated (the certificate is still written)
"""

import argparse
import logging
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .avoidance import avoid_point, positive_avoid_point
from .checker import VerifyReport, verify_document
from .config import Var
from .core import certified_reals as cr
from .core.nf_core import IntPolynomial, mahler_measure
from .ideals import quad_canonical, quadratic_field
from .io.certificates import (
    avoidance_document,
    height_document,
    hmin_document,
    hmin_row,
    measure_document,
    write_csv,
    write_json,
)
from .io.descriptors import load_json, parse_field, parse_ideal_task, parse_int, parse_problem
from .sweep import SweepConfig, run_sweep
from .theorems import (
    nonsparse_generator,
    primitive_in_ideal_avoiding,
    principal_generator_quad,
    quad_hmin,
    totally_positive_primitive,
)
from .utils.exceptions import InvalidInput, InvariantViolation, LatticeAvoidError
from .utils.memory_manager import memory_manager

logger = logging.getLogger(__name__)

SUBCOMMANDS = ("avoid", "positive", "hmin", "primitive", "tpositive", "generator", "mahler", "sweep", "verify")

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_BOUND_VIOLATION = 4

Outcome = Tuple[str, int]


@dataclass
class RunConfig:
    """
    Settings for a single command-line run.

    Precision is given in bits: a run at 60 targets interval widths of 2^-60.
    The caps override the matching ``Var`` values only while the run lasts.
    """
    subcommand: str
    options: argparse.Namespace
    precision: int = field(default_factory=lambda: Var.DEFAULT_PRECISION)
    enumeration_budget: int = field(default_factory=lambda: Var.ENUMERATION_BUDGET)
    search_cap: int = field(default_factory=lambda: Var.GENERATOR_CAP)
    verify: bool = False

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise InvalidInput(f"unknown subcommand {self.subcommand!r}")
        if not 10 <= self.precision <= 256:
            raise InvalidInput(f"--precision must lie in [10, 256] bits, got {self.precision}")
        if self.enumeration_budget < 1:
            raise InvalidInput(f"--enum-budget must be positive, got {self.enumeration_budget}")
        if self.search_cap < 1:
            raise InvalidInput(f"--search-cap must be positive, got {self.search_cap}")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        return cls(
            subcommand=args.subcommand,
            options=args,
            precision=args.precision if args.precision is not None else Var.DEFAULT_PRECISION,
            enumeration_budget=args.enum_budget if args.enum_budget is not None else Var.ENUMERATION_BUDGET,
            search_cap=args.search_cap if args.search_cap is not None else Var.GENERATOR_CAP,
            verify=args.verify,
        )

    def overrides(self) -> Dict[str, object]:
        return {
            "DEFAULT_PRECISION": self.precision,
            "ENUMERATION_BUDGET": self.enumeration_budget,
            "GENERATOR_CAP": self.search_cap,
        }

    @contextmanager
    def applied(self):
        """Install the overrides on Var and restore the previous values afterwards."""
        overrides = self.overrides()
        saved = {name: getattr(Var, name) for name in overrides}
        for name, value in overrides.items():
            setattr(Var, name, value)
        try:
            yield self
        finally:
            for name, value in saved.items():
                setattr(Var, name, value)


def _short(x) -> str:
    return cr.to_decimal(x, 12)


def _exit_for(passed: bool, bound_violations: Sequence[str]) -> int:
    if passed:
        return EXIT_OK
    return EXIT_BOUND_VIOLATION if bound_violations else InvariantViolation.exit_code


def _write_and_verify(cfg: RunConfig, doc: dict, out: str) -> Tuple[int, str]:
    """Write a certificate and, with --verify, re-check the file just written."""
    write_json(out, doc)
    code = _exit_for(doc["passed"], _failed_bounds(doc))
    if not cfg.verify:
        return code, ""
    report = verify_document(load_json(out))
    return max(code, _exit_for(report.passed, report.bound_violations)), _verify_note(report)


def _failed_bounds(doc: dict) -> List[str]:
    names = [c["name"] for c in doc.get("checks", []) if c["kind"] == "bound" and not c["passed"]]
    if "avoidance" in doc:
        names += [f"avoidance:{n}" for n in _failed_bounds(doc["avoidance"])]
    return names


def _verify_note(report: VerifyReport) -> str:
    if report.passed:
        return f", verified ({len(report.checks)} checks)"
    return f", verification FAILED {report.failures}"


def _status(doc: dict) -> str:
    if doc["passed"]:
        return "all checks passed"
    return f"FAILED checks {[c['name'] for c in doc['checks'] if not c['passed']]}"


# ---------------------------------------------------------------------------
# Subcommand handlers

def _cmd_avoid(cfg: RunConfig) -> Outcome:
    opts = cfg.options
    problem = parse_problem(load_json(opts.input))
    positive = cfg.subcommand == "positive"
    cert = positive_avoid_point(problem) if positive else avoid_point(problem)
    doc = avoidance_document(cert, problem)
    code, note = _write_and_verify(cfg, doc, opts.out)
    summary = (f"{cfg.subcommand}: z = {list(cert.z)}, |z| = {_short(cert.sup_norm)} <= {_short(cert.bound)}, "
               f"{_status(doc)}{note} -> {opts.out}")
    return summary, code


def _quad_from_options(opts: argparse.Namespace):
    # no triple means the whole ring of integers
    if opts.a is None and opts.b is None and opts.g is None:
        return quad_canonical(opts.D, 1, 0, 1)
    return quad_canonical(opts.D, opts.a, opts.b, opts.g)


def _cmd_hmin(cfg: RunConfig) -> Outcome:
    opts = cfg.options
    report = quad_hmin(_quad_from_options(opts), opts.mode)
    cert = report.certificate
    violations = cert.bound_violations if cert is not None else []
    extra = ["bound-violation"] if violations else []
    out = opts.out or f"hmin.{opts.format}"
    note = ""
    if opts.format == "csv":
        write_csv(out, [hmin_row(report, extra)])
        code = _exit_for(cert is None or cert.passed, violations)
    else:
        code, note = _write_and_verify(cfg, hmin_document(report), out)
    h = "n/a" if report.h_min is None else _short(report.h_min)
    flags = ";".join(list(report.flags) + extra)
    summary = (f"hmin {report.ideal}: h_min = {h}, lower = {_short(report.lower)}, upper = {_short(report.upper)}, "
               f"flags = [{flags}]{note} -> {out}")
    return summary, code


def _cmd_ideal_driver(cfg: RunConfig) -> Outcome:
    opts = cfg.options
    field_, ideal, avoided = parse_ideal_task(load_json(opts.input))
    driver = totally_positive_primitive if cfg.subcommand == "tpositive" else primitive_in_ideal_avoiding
    cert = driver(ideal, avoided)
    doc = height_document(cert, cfg.subcommand, field_, ideal=ideal, avoided=avoided)
    code, note = _write_and_verify(cfg, doc, opts.out)
    summary = (f"{cfg.subcommand}: alpha = {list(cert.element.coords)}, h = {_short(cert.height)} "
               f"<= {_short(cert.bound)}, {_status(doc)}{note} -> {opts.out}")
    return summary, code


def _cmd_generator(cfg: RunConfig) -> Outcome:
    opts = cfg.options
    q = _quad_from_options(opts)
    cert = principal_generator_quad(q, opts.cap or cfg.search_cap)
    doc = height_document(cert, "generator", q.field, ideal=q)
    code, note = _write_and_verify(cfg, doc, opts.out)
    summary = (f"generator {q}: mu = {list(cert.element.coords)}, h = {_short(cert.height)} "
               f"<= {_short(cert.bound)}, {_status(doc)}{note} -> {opts.out}")
    return summary, code


def _coefficients(text: str, name: str) -> List[int]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise InvalidInput(f"{name} needs comma-separated integer coefficients, low degree first")
    return [parse_int(p, name) for p in parts]


def _cmd_mahler(cfg: RunConfig) -> Outcome:
    opts = cfg.options
    if opts.measure is not None:
        f = IntPolynomial(tuple(_coefficients(opts.measure, "--measure")))
        if f.is_zero:
            raise InvalidInput("--measure needs a nonzero polynomial")
        doc = measure_document(f, mahler_measure(f))
        code, note = _write_and_verify(cfg, doc, opts.out)
        return f"mahler: M({f}) = {doc['mahler']['decimal']}{note} -> {opts.out}", code

    if opts.D is not None:
        K = quadratic_field(opts.D)
    else:
        K = parse_field({"generic": {"poly": _coefficients(opts.poly, "--poly")}})
    f, cert = nonsparse_generator(K)
    doc = height_document(cert, "mahler", K)
    code, note = _write_and_verify(cfg, doc, opts.out)
    summary = (f"mahler: f = {f}, M(f) = {_short(cert.mahler)} <= {_short(cert.bound)}, "
               f"{_status(doc)}{note} -> {opts.out}")
    return summary, code


def _cmd_sweep(cfg: RunConfig) -> Outcome:
    opts = cfg.options
    if opts.D_min > opts.D_max:
        logger.warning(f"Empty sweep range [{opts.D_min}, {opts.D_max}]")
    config = SweepConfig(
        d_min=opts.D_min, d_max=opts.D_max, a_max=opts.a_max,
        g_values=tuple(opts.g) if opts.g else None,
        workers=opts.workers or Var.SWEEP_WORKERS,
        verify=cfg.verify, mode=opts.mode,
    )
    result = run_sweep(config, cfg.overrides())
    write_csv(opts.out, result.rows)
    flagged = [r for r in result.rows if "bound-violation" in r["flags"].split(";")]
    summary = f"sweep: {len(result.rows)} rows"
    if cfg.verify:
        report_path = Path(opts.out).with_suffix(".verify.json")
        failed = [v for v in result.verification if not v["passed"]]
        write_json(report_path, {"kind": "sweep-verification", "rows": result.verification,
                                 "passed": not failed})
        summary += f", {len(result.verification) - len(failed)} verified, {len(failed)} failed -> {report_path}"
    violated = bool(flagged or result.bound_violations)
    if violated:
        summary += f", BOUND VIOLATIONS in {max(len(flagged), len(result.bound_violations))} rows"
    return f"{summary} -> {opts.out}", EXIT_BOUND_VIOLATION if violated else EXIT_OK


def _cmd_verify(cfg: RunConfig) -> Outcome:
    doc = load_json(cfg.options.input)
    report = verify_document(doc)
    if report.passed:
        return f"verify {report.kind}: {len(report.checks)} checks passed", EXIT_OK
    return (f"verify {report.kind}: FAILED {report.failures}",
            _exit_for(False, report.bound_violations))


HANDLERS: Dict[str, Callable[[RunConfig], Outcome]] = {
    "avoid": _cmd_avoid,
    "positive": _cmd_avoid,
    "hmin": _cmd_hmin,
    "primitive": _cmd_ideal_driver,
    "tpositive": _cmd_ideal_driver,
    "generator": _cmd_generator,
    "mahler": _cmd_mahler,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
}


# ---------------------------------------------------------------------------
# Argument parsing

def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=None, metavar="BITS",
                        help="target interval width 2^-BITS (10 to 256)")
    common.add_argument("--log-level", default=None,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"])
    common.add_argument("--enum-budget", type=int, default=None, help="lattice points examined per enumeration")
    common.add_argument("--search-cap", type=int, default=None, help="coefficient cap of the generator search")
    common.add_argument("--verify", action="store_true", help="re-check written certificates with the checker")
    return common


def _add_quad_ideal(parser: argparse.ArgumentParser):
    parser.add_argument("--D", type=int, required=True, help="squarefree D of Q(sqrt(D))")
    parser.add_argument("--a", type=int, default=None)
    parser.add_argument("--b", type=int, default=None)
    parser.add_argument("--g", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(prog="latticeavoid",
                                     description="Certified lattice avoidance and small-height elements.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    for name, default_out, text in (("avoid", "avoidance.json", "lattice point avoiding sublattices and P = 0"),
                                    ("positive", "positive.json", "the same inside the nonnegative orthant")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--input", required=True, help="problem descriptor (JSON)")
        p.add_argument("--out", default=default_out)

    p = sub.add_parser("hmin", parents=[common], help="h_min of a quadratic ideal with its bounds")
    _add_quad_ideal(p)
    p.add_argument("--mode", choices=["exact", "bounds"], default="exact")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", default=None)

    for name, default_out, text in (("primitive", "primitive.json", "primitive element of I avoiding ideals"),
                                    ("tpositive", "tpositive.json", "totally positive primitive element")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--input", required=True, help="ideal task descriptor (JSON)")
        p.add_argument("--out", default=default_out)

    p = sub.add_parser("generator", parents=[common], help="generator of a principal quadratic ideal")
    _add_quad_ideal(p)
    p.add_argument("--cap", type=int, default=None, help="box cap for real quadratic fields")
    p.add_argument("--out", default="generator.json")

    p = sub.add_parser("mahler", parents=[common], help="non-sparse generating polynomial or M(f)")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--D", type=int, default=None, help="quadratic field Q(sqrt(D))")
    source.add_argument("--poly", default=None, help="defining polynomial c0,c1,...,1")
    source.add_argument("--measure", default=None, help="evaluate M(f) for f = c0,c1,...,cn")
    p.add_argument("--out", default="mahler.json")

    p = sub.add_parser("sweep", parents=[common], help="h_min sweep over canonical quadratic ideals")
    p.add_argument("--D-min", dest="D_min", type=int, required=True)
    p.add_argument("--D-max", dest="D_max", type=int, required=True)
    p.add_argument("--a-max", dest="a_max", type=int, required=True)
    p.add_argument("--g", type=int, nargs="+", default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--mode", choices=["exact", "bounds"], default="exact")
    p.add_argument("--out", default="sweep.csv")

    p = sub.add_parser("verify", parents=[common], help="re-check a certificate")
    p.add_argument("--input", required=True, help="certificate (JSON)")
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, run one subcommand and return the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    if args.log_level:
        logging.getLogger().setLevel(args.log_level)
    try:
        cfg = RunConfig.from_args(args)
        with cfg.applied():
            memory_manager.checkpoint(f"{cfg.subcommand} start")
            summary, code = HANDLERS[cfg.subcommand](cfg)
            memory_manager.checkpoint(f"{cfg.subcommand} end")
    except LatticeAvoidError as e:
        logger.error(f"{args.subcommand} failed with {type(e).__name__}: {e}")
        print(f"{args.subcommand}: {type(e).__name__}: {e}")
        return e.exit_code
    except Exception as e:
        logger.critical(f"Unexpected error in {args.subcommand}: {e}", exc_info=True)
        print(f"{args.subcommand}: internal error: {e}")
        return EXIT_INTERNAL

    print(summary)
    return code
