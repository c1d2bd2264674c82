import io
import json
from typing import Optional

import pandas as pd

from .engine import TorsionCell, TorsionReport, multiset_by_j

CSV_COLUMNS = ["p", "q", "j", "k", "invariant", "closed_form", "rel_err", "status"]


def _number(value) -> Optional[float]:
    return None if value is None else float(value)


def _checks(checks: dict) -> dict:
    return {
        name: value if isinstance(value, list) else float(value)
        for name, value in checks.items()
    }


def cell_payload(cell: TorsionCell) -> dict:
    return {
        "j": cell.j,
        "k": cell.k,
        "torsion": _number(cell.torsion),
        "invariant": _number(cell.invariant),
        "closed_form": _number(cell.closed_form),
        "abs_err": _number(cell.abs_err),
        "rel_err": _number(cell.rel_err),
        "status": cell.status,
    }


def report_payload(report: TorsionReport) -> dict:
    return {
        "p": report.spec.p,
        "q": report.spec.q,
        "params": {
            "seed": report.seed,
            "by_k": {str(k): params.as_dict() for k, params in sorted(report.params.items())},
        },
        "results": [cell_payload(cell) for cell in report.cells],
        "checks": {str(k): _checks(checks) for k, checks in sorted(report.checks.items())},
    }


def report_json(report: TorsionReport) -> str:
    return json.dumps(report_payload(report), ensure_ascii=False, indent=2)


def multiset_payload(report: TorsionReport) -> dict:
    """Sorted invariants over k for each j, from the ok cells only."""
    return {
        "p": report.spec.p,
        "q": report.spec.q,
        "multisets": {str(j): [float(v) for v in values] for j, values in sorted(multiset_by_j(report).items())},
    }


def report_frame(report: TorsionReport) -> pd.DataFrame:
    rows = [
        {
            "p": report.spec.p,
            "q": report.spec.q,
            "j": cell.j,
            "k": cell.k,
            "invariant": cell.invariant,
            "closed_form": cell.closed_form,
            "rel_err": cell.rel_err,
            "status": cell.status,
        }
        for cell in report.cells
    ]
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def report_csv(report: TorsionReport) -> str:
    buffer = io.StringIO()
    report_frame(report).to_csv(buffer, index=False, float_format="%.17g")
    return buffer.getvalue()


def render(report: TorsionReport, fmt: str = "json", multiset: bool = False) -> str:
    if multiset:
        return json.dumps(multiset_payload(report), ensure_ascii=False, indent=2) + "\n"
    if fmt == "csv":
        return report_csv(report)
    return report_json(report) + "\n"
