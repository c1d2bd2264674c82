from typing import Optional

import numpy as np
import scipy.linalg

from . import conf


def singular_values(matrix: np.ndarray) -> np.ndarray:
    if matrix.size == 0:
        return np.zeros(0)
    return scipy.linalg.svdvals(matrix)


def rank(matrix: np.ndarray, tol: Optional[float] = None, reference: Optional[float] = None) -> int:
    """Numerical rank: singular values above tol·σ_max.

    ``reference`` replaces σ_max, for blocks cut out of a larger matrix.
    """
    tol = conf.rank_tol() if tol is None else tol
    sv = singular_values(matrix)
    scale = sv[0] if reference is None and sv.size else reference
    if sv.size == 0 or not scale:
        return 0
    return int(np.sum(sv > tol * scale))


def spectral_norm(matrix: np.ndarray) -> float:
    sv = singular_values(matrix)
    return float(sv[0]) if sv.size else 0.0


def det(matrix: np.ndarray):
    """Determinant through an LU factorization with partial pivoting; 1 for an empty matrix."""
    if matrix.shape[0] == 0:
        return 1.0
    lu, piv = scipy.linalg.lu_factor(matrix, check_finite=True)
    swaps = np.count_nonzero(piv != np.arange(len(piv)))
    return (-1) ** swaps * np.prod(np.diag(lu))


def max_abs(matrix: np.ndarray) -> float:
    return float(np.max(np.abs(matrix))) if matrix.size else 0.0


def relative_product_residual(left: np.ndarray, right: np.ndarray) -> float:
    """‖L·R‖_max / (‖L‖_max·‖R‖_max)."""
    scale = max_abs(left) * max_abs(right)
    if scale == 0:
        return 0.0
    return max_abs(left @ right) / scale


def pivoted_columns(
    matrix: np.ndarray, count: int, priority: Optional[np.ndarray] = None, slack: float = 0.1
) -> np.ndarray:
    """Indices of ``count`` independent columns, chosen greedily.

    Without ``priority`` this is QR with column pivoting (largest residual
    column first). With a priority order, each step takes the first column in
    that order whose residual is within ``slack`` of the largest one, which
    yields a different but still well-conditioned selection.
    """
    if count == 0 or matrix.shape[0] == 0:
        return np.zeros(0, dtype=int)
    if priority is None:
        _, _, perm = scipy.linalg.qr(matrix, mode="economic", pivoting=True)
        return np.sort(perm[:count])

    residual = np.array(matrix, dtype=complex)
    chosen = []
    for _ in range(count):
        norms = np.linalg.norm(residual, axis=0)
        norms[chosen] = 0.0
        best = norms.max()
        if best == 0:
            break
        pick = next(int(c) for c in priority if c not in chosen and norms[c] >= slack * best)
        chosen.append(pick)
        q = residual[:, pick] / norms[pick]
        residual = residual - np.outer(q, q.conj() @ residual)
    return np.sort(np.array(chosen, dtype=int))
