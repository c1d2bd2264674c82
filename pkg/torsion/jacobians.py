"""Matrices of the acyclic complex  e3 --C--> (dx) --B--> (dl) --A--> (dω).

Row and column orders follow the block layout of the triangulation: vertex
coordinates block by block (B_m then C_{m·q_inv}, each as u, v, w) and edges
block by block.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np
import scipy.linalg

from .combinatorics import LOCAL_EDGES, Triangulation
from .exceptions import ZeroLengthEdge
from .geometry import OPPOSITE, Realization, dihedral_angles, tet_from_lengths
from .linalg import max_abs, relative_product_residual

logger = logging.getLogger(__name__)

AXES = ("u", "v", "w")
# (dφ_1, dφ_{p−1}, dφ_0, dx_1, dx_{p−1}, dx_0): rotations about u, v, w, then translations
MOTION_LABELS = ("rot_u", "rot_v", "rot_w", "tr_u", "tr_v", "tr_w")
_UNIT = np.eye(3)


@dataclass(frozen=True)
class MotionBasis:
    """Infinitesimal rigid motions of R^3."""

    labels: Tuple[str, ...] = MOTION_LABELS

    def displacement(self, generator: int, x: np.ndarray) -> np.ndarray:
        if generator < 3:
            return np.cross(_UNIT[generator], x)
        return _UNIT[generator - 3].copy()


@dataclass(frozen=True, eq=False)
class JacobianSet:
    A: np.ndarray = field(repr=False)
    B: np.ndarray = field(repr=False)
    C: np.ndarray = field(repr=False)
    edge_labels: Tuple[str, ...] = field(repr=False)
    coordinate_labels: Tuple[str, ...] = field(repr=False)
    motion_labels: Tuple[str, ...] = MOTION_LABELS

    def residuals(self) -> Dict[str, float]:
        return {
            "AB": relative_product_residual(self.A, self.B),
            "BC": relative_product_residual(self.B, self.C),
            "A_symmetry": max_abs(self.A - self.A.T) / max(max_abs(self.A), 1e-300),
        }


def coordinate_labels(tri: Triangulation) -> Tuple[str, ...]:
    return tuple(f"{v}.{axis}" for v in tri.vertices for axis in AXES)


def matrix_C(real: Realization) -> np.ndarray:
    basis = MotionBasis()
    points = real.points
    C = np.zeros((3 * len(points), 6))
    for g in range(6):
        for i, x in enumerate(points):
            C[3 * i:3 * i + 3, g] = basis.displacement(g, x)
    return C


def matrix_B(real: Realization) -> np.ndarray:
    tri = real.tri
    B = np.zeros((len(tri.edges), 3 * len(tri.vertices)))
    for e, edge in enumerate(tri.edges):
        a, b = tri.vertex_index(edge.a), tri.vertex_index(edge.b)
        diff = real.points[a] - real.points[b]
        length = np.linalg.norm(diff)
        if length <= 1e-14 * max(1.0, max_abs(real.points)):
            raise ZeroLengthEdge(f"edge {edge} has zero length")
        B[e, 3 * a:3 * a + 3] = diff / length
        B[e, 3 * b:3 * b + 3] = -diff / length
    return B


def _angle_gradients(pts: np.ndarray) -> np.ndarray:
    """∂θ_e/∂x for the six dihedral angles of a tet, as a 6×12 matrix."""
    grad = np.zeros((6, 12))
    for slot, ((i, j), (c, d)) in enumerate(zip(LOCAL_EDGES, OPPOSITE)):
        axis = pts[j] - pts[i]
        axis_sq = axis @ axis
        rc, rd = pts[c] - pts[i], pts[d] - pts[i]
        tc, td = (rc @ axis) / axis_sq, (rd @ axis) / axis_sq
        u, v = rc - tc * axis, rd - td * axis
        nu, nv = np.linalg.norm(u), np.linalg.norm(v)
        uh, vh = u / nu, v / nv
        cos_t = uh @ vh
        sin_t = np.linalg.norm(np.cross(uh, vh))
        # moving an opposite vertex across its face plane, away from the other
        gc = -(vh - cos_t * uh) / (nu * sin_t)
        gd = -(uh - cos_t * vh) / (nv * sin_t)
        grad[slot, 3 * c:3 * c + 3] = gc
        grad[slot, 3 * d:3 * d + 3] = gd
        grad[slot, 3 * i:3 * i + 3] = -(1 - tc) * gc - (1 - td) * gd
        grad[slot, 3 * j:3 * j + 3] = -tc * gc - td * gd
    return grad


def _length_gradients(pts: np.ndarray) -> np.ndarray:
    grad = np.zeros((6, 12))
    for slot, (i, j) in enumerate(LOCAL_EDGES):
        diff = pts[i] - pts[j]
        unit = diff / np.linalg.norm(diff)
        grad[slot, 3 * i:3 * i + 3] = unit
        grad[slot, 3 * j:3 * j + 3] = -unit
    return grad


def tet_angle_jacobian(lengths) -> np.ndarray:
    """J[e, e'] = ∂θ_e/∂l_{e'} of a single tet, in canonical edge order.

    θ depends on the vertices only through the lengths, so ∂θ/∂x = J·∂l/∂x,
    and ∂l/∂x has full row rank for a nondegenerate tet.
    """
    pts = tet_from_lengths(lengths)
    dihedral_angles(pts)  # raises DegenerateTet for flat input
    theta_x = _angle_gradients(pts)
    length_x = _length_gradients(pts)
    gram = length_x @ length_x.T
    return scipy.linalg.solve(gram, length_x @ theta_x.T, assume_a="pos").T


def matrix_A(tri: Triangulation, real: Realization) -> np.ndarray:
    """A = ∂ω/∂l with ω_e = −Σ ε_t θ_{t,e}."""
    scatter: List[Tuple[List[int], np.ndarray]] = []
    for t in range(len(tri.tets)):
        idx = list(tri.tet_edges[t])
        block = -np.sign(real.volumes[t]) * tet_angle_jacobian(real.lengths[idx])
        scatter.append((idx, block))
    A = np.zeros((len(tri.edges), len(tri.edges)))
    for idx, block in scatter:
        A[np.ix_(idx, idx)] += block
    return A


def build_jacobians(tri: Triangulation, real: Realization) -> JacobianSet:
    jac = JacobianSet(
        A=matrix_A(tri, real),
        B=matrix_B(real),
        C=matrix_C(real),
        edge_labels=tuple(str(e) for e in tri.edges),
        coordinate_labels=coordinate_labels(tri),
    )
    logger.debug("Jacobians of %s k=%s: %s", tri.spec, real.params.k, jac.residuals())
    return jac
