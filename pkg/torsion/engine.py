"""Torsions of the isotypic subcomplexes and the invariants I_{j,1}(L(p, q))."""
import logging
from dataclasses import dataclass, field, replace
from itertools import combinations
from math import gcd
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import conf
from .blocking import BlockComplex, build_context, conjugate_and_split, expected_ranks
from .combinatorics import B, C, LensSpec, Triangulation, build_triangulation
from .exceptions import DegenerateParams, RankDeficient, SingularMinor, TorsionError
from .geometry import GeomParams, Realization, closed_form_volume, random_params, realize
from .jacobians import build_jacobians, tet_angle_jacobian
from .linalg import det, pivoted_columns, rank, singular_values, spectral_norm
from .oracle import closed_form_invariant, delta

logger = logging.getLogger(__name__)

STATUS_OK = "ok"
STATUS_DEGENERATE = "degenerate"
STATUS_FAILED = "failed"


@dataclass(frozen=True)
class PivotSelection:
    C_set: Tuple[int, ...]
    C_bar: Tuple[int, ...]
    D_set: Tuple[int, ...]
    D_bar: Tuple[int, ...]

    def as_dict(self) -> dict:
        return {
            "C_set": list(self.C_set),
            "C_bar": list(self.C_bar),
            "D_set": list(self.D_set),
            "D_bar": list(self.D_bar),
        }


def _complement(chosen: Sequence[int], n: int) -> Tuple[int, ...]:
    chosen = set(int(i) for i in chosen)
    return tuple(i for i in range(n) if i not in chosen)


def _minor_condition(minor: np.ndarray, parent: np.ndarray) -> float:
    """Condition of a minor, measured against the larger of its own and its parent's norm."""
    if minor.size == 0:
        return 1.0
    sv = singular_values(minor)
    top = max(sv[0], spectral_norm(parent))
    return float(top / sv[-1]) if sv[-1] > 0 else float("inf")


def _check_selection(block: BlockComplex, piv: PivotSelection, cond_max: float) -> bool:
    minors = [
        (block.A[np.ix_(piv.C_set, piv.C_set)], block.A),
        (block.B[np.ix_(piv.C_bar, piv.D_set)], block.B),
    ]
    if block.C is not None:
        minors.append((block.C[list(piv.D_bar), :], block.C))
    return all(_minor_condition(minor, parent) <= cond_max for minor, parent in minors)


def select_pivots(
    block: BlockComplex,
    priority: Optional[Tuple[Sequence[int], Sequence[int]]] = None,
    tol: Optional[float] = None,
) -> PivotSelection:
    """Greedy maximal-pivot choice of 𝒞_j (edges) and 𝒟_j (coordinate basis vectors).

    ``priority`` optionally gives preferred orders for the edge and the
    coordinate indices; different orders give different valid selections.
    """
    p = block.p
    rank_c, rank_b, rank_a = expected_ranks(p, block.j)
    measured = block.ranks(tol)
    if measured != (rank_c, rank_b, rank_a):
        raise RankDeficient(
            f"block ranks {measured} differ from the acyclic prediction {(rank_c, rank_b, rank_a)}"
        )
    edge_order, coord_order = priority if priority is not None else (None, None)
    n_edges, n_coords = block.A.shape[0], block.B.shape[1]

    # independent columns of a Hermitian matrix give a nonsingular principal minor
    c_set = tuple(int(i) for i in pivoted_columns(block.A, rank_a, edge_order))
    c_bar = _complement(c_set, n_edges)
    d_set = tuple(int(i) for i in pivoted_columns(block.B[list(c_bar), :], rank_b, coord_order))
    d_bar = _complement(d_set, n_coords)
    if len(c_set) != rank_a or len(d_set) != rank_b:
        raise RankDeficient(f"no nonsingular minor of the predicted size in block {block.j}")
    piv = PivotSelection(c_set, c_bar, d_set, d_bar)
    if not _check_selection(block, piv, 1.0 / (tol or conf.rank_tol())):
        raise RankDeficient(f"selected minors of block {block.j} are numerically singular")
    return piv


def enumerate_pivot_selections(block: BlockComplex, limit: int = 20, cond_max: float = 1e4) -> List[PivotSelection]:
    """Brute-force list of valid, well-conditioned pivot selections."""
    rank_c, rank_b, rank_a = expected_ranks(block.p, block.j)
    n_edges, n_coords = block.A.shape[0], block.B.shape[1]
    found: List[PivotSelection] = []
    for c_set in combinations(range(n_edges), rank_a):
        if _minor_condition(block.A[np.ix_(c_set, c_set)], block.A) > cond_max:
            continue
        c_bar = _complement(c_set, n_edges)
        for d_set in combinations(range(n_coords), rank_b):
            piv = PivotSelection(tuple(c_set), c_bar, tuple(d_set), _complement(d_set, n_coords))
            if _check_selection(block, piv, cond_max):
                found.append(piv)
                if len(found) >= limit:
                    return found
    return found


def _determinants(block: BlockComplex, piv: PivotSelection):
    det_a = det(block.A[np.ix_(piv.C_set, piv.C_set)])
    det_b = det(block.B[np.ix_(piv.C_bar, piv.D_set)])
    det_c = det(block.C[list(piv.D_bar), :]) if block.C is not None else None
    for name, value in (("A", det_a), ("B", det_b), ("C", det_c)):
        if value is not None and (not np.isfinite(value) or abs(value) < 1e-300):
            raise SingularMinor(f"{name}-minor of block {block.j} vanishes")
    return det_a, det_b, det_c


def torsion(block: BlockComplex, piv: PivotSelection) -> float:
    """𝒯_j = p^{−2}|det C_j|^{−2}·|det B_j|²·(det A_j)^{−1}; without C_j for 2 ≤ j ≤ p−2."""
    det_a, det_b, det_c = _determinants(block, piv)
    det_a = complex(det_a)
    if abs(det_a.imag) > 1e-8 * abs(det_a):
        logger.warning("A-minor of block %s has imaginary part %.3e", block.j, det_a.imag)
    value = abs(det_b) ** 2 / det_a.real
    if det_c is not None:
        value /= block.p ** 2 * abs(det_c) ** 2
    return float(value)


def torsion_imaginary_ratio(block: BlockComplex, piv: PivotSelection) -> float:
    det_a = complex(_determinants(block, piv)[0])
    return abs(det_a.imag) / abs(det_a)


def torsion_spread(block: BlockComplex, selections: Sequence[PivotSelection]) -> float:
    values = np.array([abs(torsion(block, piv)) for piv in selections])
    if values.size < 2:
        return 0.0
    return float((values.max() - values.min()) / values.max())


def geometric_factor(real: Realization) -> float:
    """l²_{B0B1}·l²_{C0C1}·Π_m l²_{B_mC_0} / Π_m 6V_{C0C1B_{m+1}B_m}."""
    tri, p = real.tri, real.spec.p
    numerator = real.length(B(0, p), B(1, p)) ** 2 * real.length(C(0, p), C(1, p)) ** 2
    volumes = []
    for m in range(p):
        numerator *= real.length(B(m, p), C(0, p)) ** 2
        volumes.append(6.0 * real.volumes[tri.tet_index(0, m)])
    floor = 6.0 * conf.delta_min() * real.params.scale
    if min(abs(v) for v in volumes) < floor:
        raise DegenerateParams("a bipyramid volume in the invariant's denominator vanishes")
    return numerator / float(np.prod(volumes))


def invariant(torsion_value: float, real: Realization) -> float:
    return torsion_value * geometric_factor(real)


@dataclass
class TorsionCell:
    j: int
    k: int
    status: str
    torsion: Optional[float] = None
    invariant: Optional[float] = None
    closed_form: Optional[float] = None
    abs_err: Optional[float] = None
    rel_err: Optional[float] = None
    pivots: Optional[PivotSelection] = None
    ranks: Optional[Tuple[Optional[int], int, int]] = None
    message: str = ""


@dataclass
class TorsionReport:
    spec: LensSpec
    seed: Optional[int]
    params: Dict[int, GeomParams] = field(default_factory=dict)
    cells: List[TorsionCell] = field(default_factory=list)
    checks: Dict[int, Dict[str, object]] = field(default_factory=dict)

    @property
    def ok_cells(self) -> List[TorsionCell]:
        return [c for c in self.cells if c.status == STATUS_OK]


def multiset_by_j(report: TorsionReport) -> Dict[int, List[float]]:
    """The invariant as a multiset over k for each j (sorted, repeats kept)."""
    grouped: Dict[int, List[float]] = {}
    for cell in report.ok_cells:
        grouped.setdefault(cell.j, []).append(cell.invariant)
    return {j: sorted(values) for j, values in sorted(grouped.items())}


def _relative_error(value: float, expected: float, floor: float) -> Tuple[float, float]:
    abs_err = abs(value - expected)
    if abs(expected) < floor:
        return abs_err, abs_err
    return abs_err, abs_err / abs(expected)


def default_ks(p: int) -> List[int]:
    return list(range(1, p // 2 + 1))


def structural_checks(tri: Triangulation, real: Realization, jac, blocks: List[BlockComplex]) -> Dict[str, object]:
    p = tri.spec.p
    residuals = jac.residuals()
    global_ranks = (rank(jac.C), rank(jac.B), rank(jac.A))
    volume_formula = max(
        abs(real.volumes[tri.tet_index(n, m)] - closed_form_volume(tri.spec, real.params, m, n))
        for n in range(p) for m in range(p)
    ) / real.params.scale
    return {
        "max_defect": float(np.max(np.abs(real.defects))),
        "AB": residuals["AB"],
        "BC": residuals["BC"],
        "A_symmetry": residuals["A_symmetry"],
        "off_block": max((b.residual for b in blocks), default=0.0),
        "hermitian": max((b.hermitian_residual() for b in blocks), default=0.0) / max(np.max(np.abs(jac.A)), 1e-300),
        "volume_formula": float(volume_formula),
        "ranks": list(global_ranks),
        "expected_ranks": [6, 6 * p - 6, p * p - 4 * p + 6],
    }


def checks_pass(checks: Dict[str, object], tol: float) -> bool:
    scalar = ("max_defect", "AB", "BC", "A_symmetry", "off_block", "hermitian", "volume_formula")
    return all(float(checks[name]) <= tol for name in scalar) and checks["ranks"] == checks["expected_ranks"]


def compute_k(
    tri: Triangulation,
    params: GeomParams,
    js: Optional[Sequence[int]] = None,
    residual_tol: Optional[float] = None,
    delta_fn: Callable[[int, int, int], float] = delta,
) -> Tuple[List[TorsionCell], Dict[str, object]]:
    """All requested cells (j, params.k) for one realization."""
    spec, k = tri.spec, params.k
    residual_tol = conf.residual_tol() if residual_tol is None else residual_tol
    js = list(range(spec.p)) if js is None else list(js)

    try:
        real = realize(tri, params)
        jac = build_jacobians(tri, real)
        blocks = conjugate_and_split(build_context(spec.p, k), jac)
        factor = geometric_factor(real)
    except TorsionError as exc:
        raise exc.with_cell(None, k) from exc
    checks = structural_checks(tri, real, jac, blocks)
    healthy = checks_pass(checks, residual_tol)
    if not healthy:
        logger.error("Structural checks failed for %s k=%s: %s", spec, k, checks)

    cells = []
    for j in js:
        block = blocks[j]
        try:
            piv = select_pivots(block)
            value = torsion(block, piv)
        except TorsionError as exc:
            raise exc.with_cell(j, k) from exc
        expected = closed_form_invariant(spec.p, spec.q, j, k, delta_fn=delta_fn).value
        inv = value * factor
        abs_err, rel_err = _relative_error(inv, expected, conf.relative_floor())
        cells.append(TorsionCell(
            j=j,
            k=k,
            status=STATUS_OK if healthy else STATUS_FAILED,
            torsion=value,
            invariant=inv,
            closed_form=expected,
            abs_err=abs_err,
            rel_err=rel_err,
            pivots=piv,
            ranks=block.ranks(),
        ))
    return cells, checks


def compute_all(
    spec: LensSpec,
    params: Optional[GeomParams] = None,
    seed: Optional[int] = 0,
    ks: Optional[Sequence[int]] = None,
    js: Optional[Sequence[int]] = None,
    residual_tol: Optional[float] = None,
    delta_fn: Callable[[int, int, int], float] = delta,
) -> TorsionReport:
    """Torsions and invariants for every requested (j, k).

    Explicit ``params`` are used for every k (their own k is ignored);
    otherwise parameters are drawn from ``seed``.
    """
    tri = build_triangulation(spec)
    ks = default_ks(spec.p) if ks is None else list(ks)
    js = list(range(spec.p)) if js is None else list(js)
    report = TorsionReport(spec=spec, seed=None if params is not None else seed)

    for k in ks:
        if gcd(k, spec.p) != 1:
            logger.warning("Skipping %s k=%s: gcd(k, p) = %s", spec, k, gcd(k, spec.p))
            report.cells.extend(
                TorsionCell(j=j, k=k, status=STATUS_DEGENERATE, message="gcd(k, p) > 1") for j in js
            )
            continue
        cell_params = replace(params, k=k) if params is not None else random_params(spec, k, seed or 0)
        report.params[k] = cell_params
        cells, checks = compute_k(tri, cell_params, js, residual_tol, delta_fn)
        report.cells.extend(cells)
        report.checks[k] = checks
        logger.info("Computed %s k=%s: %s cells", spec, k, len(cells))

    report.cells.sort(key=lambda c: (c.j, c.k))
    return report


def alternative_priorities(block: BlockComplex) -> List[Tuple[List[int], List[int]]]:
    """Edge/coordinate preference orders that steer select_pivots elsewhere."""
    n_edges, n_coords = block.A.shape[0], block.B.shape[1]
    edges, coords = list(range(n_edges)), list(range(n_coords))
    half_e, half_c = n_edges // 2, n_coords // 2
    return [
        (edges[::-1], coords[::-1]),
        (edges[half_e:] + edges[:half_e], coords[half_c:] + coords[:half_c]),
        (edges[1::2] + edges[::2], coords[1::2] + coords[::2]),
    ]


def pivot_spread(block: BlockComplex) -> Tuple[float, int]:
    """Relative spread of |𝒯_j| over the default and the alternative selections."""
    selections = {select_pivots(block)}
    for priority in alternative_priorities(block):
        try:
            selections.add(select_pivots(block, priority))
        except RankDeficient:
            logger.debug("Priority order gave no usable selection in block %s", block.j)
    return torsion_spread(block, sorted(selections, key=lambda s: (s.C_set, s.D_set))), len(selections)


def schlafli_residual(real: Realization) -> float:
    """max over tets of |J·l| and |J − Jᵀ|, relative to |J|·|l|."""
    worst = 0.0
    for t in range(len(real.tri.tets)):
        lengths = real.tet_lengths(t)
        J = tet_angle_jacobian(lengths)
        scale = np.max(np.abs(J)) * np.max(lengths)
        worst = max(worst, np.max(np.abs(J @ lengths)) / scale, np.max(np.abs(J - J.T)) / np.max(np.abs(J)))
    return float(worst)


def diagnose(spec: LensSpec, params: GeomParams, residual_tol: Optional[float] = None) -> Dict[str, object]:
    """Every structural residual of one realization, with the per-block rank table."""
    residual_tol = conf.residual_tol() if residual_tol is None else residual_tol
    ctx = build_context(spec.p, params.k)
    tri = build_triangulation(spec)
    real = realize(tri, params)
    jac = build_jacobians(tri, real)
    blocks = conjugate_and_split(ctx, jac)
    checks = structural_checks(tri, real, jac, blocks)
    checks["schlafli"] = schlafli_residual(real)

    block_rows = []
    spread = 0.0
    for block in blocks:
        value, count = pivot_spread(block)
        spread = max(spread, value)
        block_rows.append({
            "j": block.j,
            "ranks": list(block.ranks()),
            "expected": list(expected_ranks(spec.p, block.j)),
            "selections": count,
            "spread": value,
            "imaginary": torsion_imaginary_ratio(block, select_pivots(block)),
        })
    checks["pivot_spread"] = spread
    checks["blocks"] = block_rows
    checks["passed"] = bool(
        checks_pass(checks, residual_tol)
        and checks["schlafli"] <= residual_tol
        and spread <= residual_tol
        and all(row["ranks"] == row["expected"] for row in block_rows)
    )
    return checks
