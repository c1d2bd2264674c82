"""Fourier change of basis that splits the complex into p isotypic subcomplexes.

Column block n of U2 and U3 spans the ε^{−nk} eigenspace of the deck action on
(dx) and (dl); B and A therefore become block diagonal, and the three pairs of
motion generators land in the blocks j = 0, 1, p−1.
"""
import logging
from dataclasses import dataclass, field
from math import gcd, pi, sqrt
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import conf
from .exceptions import BlockStructureViolation, DegenerateK, InvalidSpec
from .jacobians import JacobianSet
from .linalg import max_abs, rank, spectral_norm

logger = logging.getLogger(__name__)

MOTION_DIM = 6
VERTEX_BLOCK = 6


def carries_motions(p: int, j: int) -> bool:
    return j % p in (0, 1, p - 1)


def expected_ranks(p: int, j: int) -> Tuple[Optional[int], int, int]:
    """(rank C_j, rank B_j, rank A_j) forced by acyclicity; C_j only for j ∈ {0, ±1}."""
    if carries_motions(p, j):
        return 2, 4, p - 2
    return None, 6, p - 4


def _u1() -> np.ndarray:
    h = sqrt(2) / 2
    rot = np.array([[h, 1j * h, 0], [1j * h, h, 0], [0, 0, 1]], dtype=complex)
    u1 = np.zeros((6, 6), dtype=complex)
    u1[:3, :3] = rot
    u1[3:, 3:] = rot
    return u1


@dataclass(frozen=True, eq=False)
class BlockingContext:
    p: int
    k: int
    epsilon: complex
    U1: np.ndarray = field(repr=False)
    H: Tuple[np.ndarray, ...] = field(repr=False)
    U2: np.ndarray = field(repr=False)
    U3: np.ndarray = field(repr=False)

    @property
    def edge_block(self) -> int:
        return self.p + 2


def build_context(p: int, k: int) -> BlockingContext:
    if p < 3 or not 1 <= k <= p - 1:
        raise InvalidSpec(f"need p ≥ 3 and 1 ≤ k ≤ p−1, got p={p}, k={k}")
    if gcd(k, p) != 1:
        raise DegenerateK(f"k={k} is not coprime to p={p}: ε^k is not a primitive root")

    epsilon = np.exp(2j * pi / p)
    u1 = _u1()
    H = tuple(
        u1 @ np.diag([epsilon ** (-m * k), epsilon ** (m * k), 1] * 2)
        for m in range(p)
    )
    size = p + 2
    U2 = np.zeros((VERTEX_BLOCK * p, VERTEX_BLOCK * p), dtype=complex)
    U3 = np.zeros((size * p, size * p), dtype=complex)
    for m in range(p):
        for n in range(p):
            phase = epsilon ** ((m * n * k) % p) / sqrt(p)
            U2[6 * m:6 * m + 6, 6 * n:6 * n + 6] = phase * H[m]
            U3[size * m:size * m + size, size * n:size * n + size] = phase * np.eye(size)
    return BlockingContext(p=p, k=k, epsilon=epsilon, U1=u1, H=H, U2=U2, U3=U3)


@dataclass(frozen=True, eq=False)
class BlockComplex:
    j: int
    A: np.ndarray = field(repr=False)
    B: np.ndarray = field(repr=False)
    C: Optional[np.ndarray] = field(repr=False)
    residual: float = 0.0
    # spectral norms of the undivided A, B, C; block ranks are measured against them
    scales: Tuple[Optional[float], Optional[float], Optional[float]] = (None, None, None)

    @property
    def p(self) -> int:
        return self.A.shape[0] - 2

    @property
    def has_motions(self) -> bool:
        return self.C is not None

    def ranks(self, tol: Optional[float] = None) -> Tuple[Optional[int], int, int]:
        scale_a, scale_b, scale_c = self.scales
        rank_c = rank(self.C, tol, scale_c) if self.C is not None else None
        return rank_c, rank(self.B, tol, scale_b), rank(self.A, tol, scale_a)

    def hermitian_residual(self) -> float:
        return max_abs(self.A - self.A.conj().T)


def _mass_blocks(matrix: np.ndarray, row_size: int, col_size: int, floor: float) -> Dict[int, List[int]]:
    """For each row block, the column blocks whose entries exceed ``floor``."""
    rows, cols = matrix.shape[0] // row_size, matrix.shape[1] // col_size
    found: Dict[int, List[int]] = {}
    for r in range(rows):
        tile = matrix[r * row_size:(r + 1) * row_size]
        found[r] = [
            c for c in range(cols)
            if max_abs(tile[:, c * col_size:(c + 1) * col_size]) > floor
        ]
    return found


def _off_block(matrix: np.ndarray, keep: np.ndarray) -> float:
    scale = max_abs(matrix)
    if scale == 0:
        return 0.0
    return max_abs(np.where(keep, 0, matrix)) / scale


def conjugate_and_split(ctx: BlockingContext, jac: JacobianSet, tol: Optional[float] = None) -> List[BlockComplex]:
    tol = conf.block_tol() if tol is None else tol
    p, size = ctx.p, ctx.edge_block
    C = ctx.U2.conj().T @ jac.C @ ctx.U1
    B = ctx.U3.conj().T @ jac.B @ ctx.U2
    A = ctx.U3.conj().T @ jac.A @ ctx.U3

    # (dl) row block j of B pairs with the single (dx) column block carrying mass
    pairing: Dict[int, int] = {}
    for r, cols in _mass_blocks(B, size, VERTEX_BLOCK, tol * max_abs(B)).items():
        if len(cols) != 1:
            raise BlockStructureViolation(f"row block {r} of B meets column blocks {cols}")
        pairing[r] = cols[0]
    if sorted(pairing.values()) != list(range(p)):
        raise BlockStructureViolation(f"B does not pair (dl) and (dx) blocks one to one: {pairing}")
    dx_to_j = {c: r for r, c in pairing.items()}

    # each motion generator feeds exactly one (dx) block
    motion_cols: Dict[int, List[int]] = {}
    floor = tol * max_abs(C)
    for g in range(MOTION_DIM):
        hits = [
            b for b in range(p)
            if max_abs(C[b * VERTEX_BLOCK:(b + 1) * VERTEX_BLOCK, g]) > floor
        ]
        if len(hits) != 1:
            raise BlockStructureViolation(f"motion generator {g} spreads over (dx) blocks {hits}")
        motion_cols.setdefault(dx_to_j[hits[0]], []).append(g)
    expected = [j for j in range(p) if carries_motions(p, j)]
    if sorted(motion_cols) != expected or any(len(g) != 2 for g in motion_cols.values()):
        raise BlockStructureViolation(f"motion generators land in blocks {motion_cols}, expected j = 0, ±1")

    keep_A = np.zeros(A.shape, dtype=bool)
    keep_B = np.zeros(B.shape, dtype=bool)
    keep_C = np.zeros(C.shape, dtype=bool)
    for j in range(p):
        rows = slice(j * size, (j + 1) * size)
        dx = slice(pairing[j] * VERTEX_BLOCK, (pairing[j] + 1) * VERTEX_BLOCK)
        keep_A[rows, rows] = True
        keep_B[rows, dx] = True
        for g in motion_cols.get(j, ()):
            keep_C[dx, g] = True
    residual = max(_off_block(A, keep_A), _off_block(B, keep_B), _off_block(C, keep_C))
    if residual > tol:
        raise BlockStructureViolation(f"off-block residual {residual:.3e} exceeds {tol:.1e}")

    # C_j carries the 1/√p of the division below
    scales = (spectral_norm(jac.A), spectral_norm(jac.B), spectral_norm(jac.C) / sqrt(p))
    blocks = []
    for j in range(p):
        rows = slice(j * size, (j + 1) * size)
        dx = slice(pairing[j] * VERTEX_BLOCK, (pairing[j] + 1) * VERTEX_BLOCK)
        C_j = None
        if j in motion_cols:
            # the conjugated block is √p·C_j
            C_j = C[dx][:, sorted(motion_cols[j])] / sqrt(p)
        blocks.append(BlockComplex(
            j=j, A=A[rows, rows], B=B[rows, dx], C=C_j, residual=residual, scales=scales,
        ))
    logger.debug("Split complex for p=%s k=%s: off-block residual %.3e", p, ctx.k, residual)
    return blocks
