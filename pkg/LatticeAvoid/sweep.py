"""
Sweeps of h_min and its bounds over canonical quadratic ideals.

Rows are produced in (D, a, b, g) order no matter how many worker
processes compute them; failures inside a row become flags and never stop
the sweep.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .checker import verify_document
from .config import Var
from .ideals import QuadIdeal, canonical_ideals
from .io.certificates import HMIN_COLUMNS, hmin_document, hmin_row
from .io.descriptors import squarefree_range
from .theorems import quad_hmin
from .utils.exceptions import LatticeAvoidError
from .utils.memory_manager import memory_manager

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepConfig:
    d_min: int
    d_max: int
    a_max: int
    g_values: Optional[Tuple[int, ...]] = None
    workers: int = 1
    verify: bool = False
    mode: str = "exact"


@dataclass
class SweepResult:
    rows: List[Dict[str, str]] = field(default_factory=list)
    verification: List[dict] = field(default_factory=list)

    @property
    def bound_violations(self) -> List[dict]:
        return [v for v in self.verification if v["bound_violations"]]


def _apply_overrides(overrides: Dict[str, object]):
    for name, value in overrides.items():
        setattr(Var, name, value)


def _sweep_row(task: Tuple[int, int, int, int, str, bool]) -> Tuple[Dict[str, str], Optional[dict]]:
    D, a, b, g, mode, verify = task
    q = QuadIdeal(D, a, b, g)
    base = {"D": D, "a": a, "b": b, "g": g}
    try:
        report = quad_hmin(q, mode)
    except LatticeAvoidError as e:
        logger.warning(f"Sweep row {q} failed: {e}")
        row = {c: "" for c in HMIN_COLUMNS}
        row.update({"D": str(D), "a": str(a), "b": str(b), "g": str(g), "flags": type(e).__name__})
        return row, ({**base, "passed": False, "failures": [type(e).__name__], "bound_violations": []}
                     if verify else None)

    flags = []
    if report.certificate is not None and report.certificate.bound_violations:
        flags.append("bound-violation")
    row = hmin_row(report, flags)
    if not verify:
        return row, None
    check = verify_document(hmin_document(report))
    return row, {**base, "passed": check.passed, "failures": check.failures,
                 "bound_violations": check.bound_violations}


class SweepRunner:
    """
    Computes one CSV row per canonical ideal.

    Args:
        config: Ranges, worker count and verification switch
        overrides: Var attributes to reapply inside worker processes
    """

    def __init__(self, config: SweepConfig, overrides: Optional[Dict[str, object]] = None):
        self.config = config
        self.overrides = dict(overrides or {})

    def tasks(self) -> List[Tuple[int, int, int, int, str, bool]]:
        cfg = self.config
        out = []
        for D in squarefree_range(cfg.d_min, cfg.d_max):
            for q in canonical_ideals(D, cfg.a_max, cfg.g_values):
                out.append((q.D, q.a, q.b, q.g, cfg.mode, cfg.verify))
        return out

    def run(self) -> SweepResult:
        tasks = self.tasks()
        workers = max(1, min(self.config.workers, len(tasks) or 1))
        logger.info(f"Sweep over {len(tasks)} canonical ideals with {workers} worker(s)")
        memory_manager.checkpoint("sweep start")
        result = SweepResult()
        if workers == 1:
            outputs = map(_sweep_row, tasks)
            self._collect(outputs, result)
        else:
            with ProcessPoolExecutor(max_workers=workers, initializer=_apply_overrides,
                                     initargs=(self.overrides,)) as pool:
                self._collect(pool.map(_sweep_row, tasks, chunksize=8), result)
        memory_manager.checkpoint("sweep end")
        violations = len(result.bound_violations)
        logger.info(f"Sweep finished: {len(result.rows)} rows" +
                    (f", {violations} with bound violations" if violations else ""))
        return result

    def _collect(self, outputs, result: SweepResult):
        for count, (row, verification) in enumerate(outputs, start=1):
            result.rows.append(row)
            if verification is not None:
                result.verification.append(verification)
            if count % 200 == 0:
                memory_manager.checkpoint("sweep", rows=count)


def run_sweep(config: SweepConfig, overrides: Optional[Dict[str, object]] = None) -> SweepResult:
    return SweepRunner(config, overrides).run()
