import logging
from dataclasses import dataclass, field
from math import gcd, pi, sin
from typing import Callable, Dict, List, Optional, Sequence

from . import conf
from .exceptions import InvalidSpec

logger = logging.getLogger(__name__)

BRANCH_J0 = "j0"
BRANCH_PM1 = "j±1"
BRANCH_MIDDLE = "middle"

DeltaFn = Callable[[int, int, int], float]


def delta(m: int, p: int, q: int) -> float:
    """Δ_m = 4·sin(πm/p)·sin(πqm/p) on the residue of m modulo p."""
    if p < 1:
        raise InvalidSpec(f"p must be positive, got {p}")
    m %= p
    if m == 0:
        return 0.0
    return 4.0 * sin(pi * m / p) * sin(pi * q * m / p)


def branch(p: int, j: int) -> str:
    j %= p
    if j == 0:
        return BRANCH_J0
    if j in (1, p - 1):
        return BRANCH_PM1
    return BRANCH_MIDDLE


@dataclass(frozen=True)
class OracleValue:
    p: int
    q: int
    j: int
    k: int
    value: float
    formula_branch: str

    def as_dict(self) -> dict:
        return {"p": self.p, "q": self.q, "j": self.j, "k": self.k, "value": self.value, "branch": self.formula_branch}


def closed_form_invariant(p: int, q: int, j: int, k: int, delta_fn: DeltaFn = delta) -> OracleValue:
    if p < 3 or not 0 <= j < p or not 1 <= k <= p - 1:
        raise InvalidSpec(f"need p ≥ 3, 0 ≤ j < p, 1 ≤ k < p; got p={p}, j={j}, k={k}")

    def d(m: int) -> float:
        return delta_fn(m % p, p, q)

    kind = branch(p, j)
    if kind == BRANCH_J0:
        value = (-1) ** (p - 1) * p ** -4 * d(k) ** 4
    elif kind == BRANCH_PM1:
        value = (-1) ** (p - 1) * p ** -4 * d(k) ** 2 * d(2 * k) ** 2
    else:
        value = (-1) ** p * d((j - 1) * k) ** 2 * d(j * k) ** 2 * d((j + 1) * k) ** 2
    return OracleValue(p=p, q=q, j=j, k=k, value=float(value), formula_branch=kind)


def oracle_table(p: int, q: int, delta_fn: DeltaFn = delta) -> List[OracleValue]:
    """Closed forms for every j and every k = 1..⌊p/2⌋ coprime to p."""
    if gcd(p, q) != 1:
        raise InvalidSpec(f"p={p} and q={q} are not coprime")
    return [
        closed_form_invariant(p, q, j, k, delta_fn)
        for j in range(p)
        for k in range(1, p // 2 + 1)
        if gcd(k, p) == 1
    ]


def oracle_multisets(p: int, q: int, delta_fn: DeltaFn = delta) -> Dict[int, List[float]]:
    grouped: Dict[int, List[float]] = {}
    for value in oracle_table(p, q, delta_fn):
        grouped.setdefault(value.j, []).append(value.value)
    return {j: sorted(values) for j, values in grouped.items()}


def _is_square(x: int, p: int) -> bool:
    return any((n * n - x) % p == 0 for n in range(p))


def homotopy_equivalent(p: int, q1: int, q2: int) -> bool:
    """L(p, q1) ≃ L(p, q2) iff q1·q2 ≡ ±n² (mod p)."""
    return _is_square(q1 * q2, p) or _is_square(-q1 * q2, p)


def homeomorphic(p: int, q1: int, q2: int) -> bool:
    """L(p, q1) ≅ L(p, q2) iff q2 ≡ ±q1^{±1} (mod p)."""
    inv = pow(q1, -1, p)
    return q2 % p in {q1 % p, -q1 % p, inv, -inv % p}


def multisets_differ(a: Sequence[float], b: Sequence[float], threshold: float = 1e-3) -> bool:
    a, b = sorted(a), sorted(b)
    if len(a) != len(b):
        return True
    return any(abs(x - y) > threshold for x, y in zip(a, b))


@dataclass
class CellVerdict:
    j: int
    k: int
    invariant: float
    expected: float
    abs_err: float
    rel_err: float
    passed: bool


@dataclass
class Verdict:
    p: int
    q: int
    tol: float
    cells: List[CellVerdict] = field(default_factory=list)
    degenerate: List[tuple] = field(default_factory=list)
    failed: List[tuple] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failed and all(c.passed for c in self.cells)

    @property
    def worst(self) -> float:
        return max((c.rel_err for c in self.cells), default=0.0)

    def summary(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "passed": self.passed,
            "cells": len(self.cells),
            "worst_rel_err": self.worst,
            "degenerate": [list(c) for c in self.degenerate],
            "failed": [list(c) for c in self.failed],
        }


def compare(report, tol: Optional[float] = None, floor: Optional[float] = None, delta_fn: DeltaFn = delta) -> Verdict:
    """Per-cell relative error of a TorsionReport against the closed forms."""
    tol = conf.compare_tol() if tol is None else tol
    floor = conf.relative_floor() if floor is None else floor
    spec = report.spec
    verdict = Verdict(p=spec.p, q=spec.q, tol=tol)
    for cell in report.cells:
        if cell.status == "degenerate":
            verdict.degenerate.append((cell.j, cell.k))
            continue
        if cell.status != "ok":
            verdict.failed.append((cell.j, cell.k))
            continue
        expected = closed_form_invariant(spec.p, spec.q, cell.j, cell.k, delta_fn).value
        abs_err = abs(cell.invariant - expected)
        rel_err = abs_err if abs(expected) < floor else abs_err / abs(expected)
        verdict.cells.append(CellVerdict(
            j=cell.j, k=cell.k, invariant=cell.invariant, expected=expected,
            abs_err=abs_err, rel_err=rel_err, passed=rel_err <= tol,
        ))
    if not verdict.passed:
        logger.error("L(%s,%s) fails the closed-form comparison: worst relative error %.3e", spec.p, spec.q, verdict.worst)
    return verdict
