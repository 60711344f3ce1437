"""
Certificate and CSV rendering.

Every certified real is written twice: as an exact form that the checker
parses back, and as a 30-digit decimal for people and diffs. JSON is
dumped with sorted keys so identical runs give identical bytes.
"""

import csv
import json
import logging
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Union

from ..avoidance import AvoidanceCertificate, AvoidanceProblem, Check
from ..core import certified_reals as cr
from ..core.certified_reals import IntervalReal, QuadValue
from ..core.nf_core import AlgebraicInteger, IntPolynomial, NumberField
from ..ideals import AnyIdeal
from ..theorems import HeightCertificate, HminReport

logger = logging.getLogger(__name__)

DECIMAL_DIGITS = 30

HMIN_COLUMNS = ["D", "a", "b", "g", "N(I)", "h_min", "lower1", "lower2", "upper", "wd1_baseline", "flags"]


def render_real(x) -> dict:
    return {"exact": cr.exact_form(x), "decimal": cr.to_decimal(x, DECIMAL_DIGITS)}


def to_jsonable(value):
    """Recursively convert certified reals, elements and enums into JSON values."""
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, (Fraction, QuadValue, IntervalReal)):
        return render_real(value)
    if isinstance(value, AlgebraicInteger):
        return list(value.coords)
    if isinstance(value, Check):
        return {"name": value.name, "passed": value.passed, "kind": value.kind}
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    raise TypeError(f"cannot render {type(value).__name__} as JSON")


def problem_document(problem: AvoidanceProblem) -> dict:
    return {
        "omega": {"columns": problem.omega.descriptor(), "complex_pairs": problem.omega.norm_model.complex_pairs},
        "sublattices": [[list(col) for col in sub.matrix] for sub in problem.subs],
        "core": [list(col) for col in problem.core.matrix],
        "predicate": problem.predicate.describe(),
    }


def avoidance_document(cert: AvoidanceCertificate, problem: Optional[AvoidanceProblem] = None) -> dict:
    doc = {
        "kind": cert.bound_name.value,
        "z": list(cert.z),
        "ambient": to_jsonable(list(cert.ambient)),
        "sup_norm": render_real(cert.sup_norm),
        "bound": {"name": cert.bound_name.value, "value": render_real(cert.bound)},
        "xi": list(cert.xi),
        "witness": list(cert.witness),
        "inputs": to_jsonable(cert.inputs),
        "checks": to_jsonable(cert.checks),
        "flags": list(cert.flags),
        "passed": cert.passed,
    }
    if problem is not None:
        doc["problem"] = problem_document(problem)
    return doc


def ideal_descriptor(ideal: AnyIdeal) -> dict:
    return ideal.descriptor()


def height_document(cert: HeightCertificate, driver: str, field: NumberField, ideal: Optional[AnyIdeal] = None,
                    avoided: Sequence[AnyIdeal] = ()) -> dict:
    doc = {
        "kind": "height",
        "driver": driver,
        "field": field.descriptor(),
        "element": list(cert.element.coords),
        "height": render_real(cert.height),
        "mahler": render_real(cert.mahler),
        "bound": {"name": cert.bound_name.value, "value": render_real(cert.bound), "target": cert.bound_target},
        "inputs": to_jsonable(cert.inputs),
        "baselines": to_jsonable(cert.baselines),
        "checks": to_jsonable(cert.checks),
        "flags": list(cert.flags),
        "passed": cert.passed,
    }
    if ideal is not None:
        doc["ideal"] = ideal_descriptor(ideal)
    if avoided:
        doc["avoid"] = [ideal_descriptor(J) for J in avoided]
    if cert.avoidance is not None:
        doc["avoidance"] = avoidance_document(cert.avoidance, cert.problem)
    return doc


def hmin_document(report: HminReport) -> dict:
    q = report.ideal
    bounds = {
        "norm": report.norm,
        "lower": render_real(report.lower),
        "lower_imaginary": None if report.lower_imaginary is None else render_real(report.lower_imaginary),
        "upper": render_real(report.upper),
        "wd1_baseline": render_real(report.baseline),
        "upper_witness": list(report.upper_witness.coords),
        "upper_witness_height": render_real(report.upper_witness_height),
        "examined": report.examined,
        "min_norm": report.min_norm,
        "flags": list(report.flags),
    }
    if report.certificate is None:
        return {"kind": "hmin-bounds", "driver": "hmin", "field": q.field.descriptor(), "ideal": q.descriptor(),
                "bounds": bounds, "passed": True}
    doc = height_document(report.certificate, "hmin", q.field, ideal=q)
    doc["bounds"] = bounds
    return doc


def _decimal(x) -> str:
    return "" if x is None else cr.to_decimal(x, DECIMAL_DIGITS)


def hmin_row(report: HminReport, extra_flags: Iterable[str] = ()) -> dict:
    q = report.ideal
    return {
        "D": str(q.D), "a": str(q.a), "b": str(q.b), "g": str(q.g), "N(I)": str(report.norm),
        "h_min": _decimal(report.h_min),
        "lower1": _decimal(report.lower),
        "lower2": _decimal(report.lower_imaginary),
        "upper": _decimal(report.upper),
        "wd1_baseline": _decimal(report.baseline),
        "flags": ";".join(list(report.flags) + list(extra_flags)),
    }


def write_json(path: Union[str, Path], document: dict):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(document, fh, sort_keys=True, indent=2)
        fh.write("\n")
    logger.info(f"Wrote {path}")


def write_csv(path: Union[str, Path], rows: List[dict], columns: Sequence[str] = HMIN_COLUMNS):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(columns), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    logger.info(f"Wrote {len(rows)} rows to {path}")


def measure_document(f: IntPolynomial, mahler) -> dict:
    """M(f) of a user-supplied polynomial; coefficients low degree first."""
    return {"kind": "mahler-measure", "polynomial": list(f.coeffs), "degree": f.degree,
            "mahler": render_real(mahler), "passed": True}
