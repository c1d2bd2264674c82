"""Euclidean realization of the lens-space complex and its metric quantities.

Points live in the right-handed frame (u, v, w); w is the rotation axis of the
deck transformation. Dihedral angles are unsigned interior angles, all
orientation information is carried by the sign of the tet volume.
"""
import logging
from dataclasses import dataclass, field
from math import gcd, isfinite, pi, sqrt
from typing import Optional, Sequence

import numpy as np

from . import conf
from .combinatorics import LOCAL_EDGES, LensSpec, Triangulation
from .exceptions import DegenerateParams, DegenerateTet, InvalidSpec, NotRealizable

logger = logging.getLogger(__name__)

# vertices opposite to each canonical edge, in the same order as LOCAL_EDGES
OPPOSITE = tuple(tuple(v for v in range(4) if v not in e) for e in LOCAL_EDGES)

_DEGENERATE_VOLUME = 1e-12
# seeded draws keep every volume phase at least this far from zero
_SAMPLING_MARGIN = 0.1


@dataclass(frozen=True)
class GeomParams:
    alpha: float
    rho: float
    sigma: float
    s: float
    k: int

    def __post_init__(self):
        for name in ("alpha", "rho", "sigma", "s"):
            if not isfinite(getattr(self, name)):
                raise InvalidSpec(f"{name} must be finite, got {getattr(self, name)}")
        for name in ("rho", "sigma", "s"):
            if not getattr(self, name) > 0:
                raise InvalidSpec(f"{name} must be positive, got {getattr(self, name)}")

    @property
    def scale(self) -> float:
        return self.rho * self.sigma * self.s

    def as_dict(self) -> dict:
        return {"alpha": self.alpha, "rho": self.rho, "sigma": self.sigma, "s": self.s, "k": self.k}


def volume_phases(spec: LensSpec, params: GeomParams) -> np.ndarray:
    """sin(α + π(q−1−2m)k/p) for m = 0..p−1; the orientation-carrying factor."""
    m = np.arange(spec.p)
    return np.sin(params.alpha + pi * (spec.q - 1 - 2 * m) * params.k / spec.p)


def is_nondegenerate(spec: LensSpec, params: GeomParams, floor: Optional[float] = None) -> bool:
    floor = conf.delta_min() if floor is None else floor
    return bool(np.min(np.abs(volume_phases(spec, params))) > floor)


def phase_floor(block_tol: Optional[float] = None) -> float:
    """Smallest |volume phase| a realization may have.

    The off-block residual of the Fourier split grows like eps / min|phase|^2; at
    this floor it stays near half the block tolerance.
    """
    block_tol = conf.block_tol() if block_tol is None else block_tol
    return max(conf.delta_min(), sqrt(2 * float(np.finfo(float).eps) / block_tol))


def random_params(spec: LensSpec, k: int, seed: int = 0, floor: Optional[float] = None) -> GeomParams:
    """Seeded generic parameters: α uniform in (0, π), ρ, σ, s log-uniform in [0.5, 2]."""
    rng = np.random.default_rng([seed, spec.p, spec.q, k])
    rho, sigma, s = np.exp(rng.uniform(np.log(0.5), np.log(2.0), size=3))
    floor = conf.delta_min() if floor is None else floor
    for _ in range(1000):
        alpha = float(rng.uniform(0.0, pi))
        params = GeomParams(alpha=alpha, rho=float(rho), sigma=float(sigma), s=float(s), k=k)
        if is_nondegenerate(spec, params, floor=max(floor, _SAMPLING_MARGIN)):
            return params
    raise DegenerateParams(f"could not draw nondegenerate parameters for {spec}, k={k}")


def closed_form_volume(spec: LensSpec, params: GeomParams, m: int, n: int = 0) -> float:
    """Oriented volume of T(n, m) from the bipyramid formula."""
    p, q, k = spec.p, spec.q, params.k
    alpha = params.alpha + 2 * pi * q * n * k / p
    return (
        (2.0 / 3.0) * params.scale
        * np.sin(pi * k / p) * np.sin(pi * q * k / p)
        * np.sin(alpha + pi * (q - 1 - 2 * m) * k / p)
    )


def vertex_coordinates(tri: Triangulation, params: GeomParams) -> np.ndarray:
    p, q, k = tri.spec.p, tri.spec.q, params.k
    points = np.empty((len(tri.vertices), 3))
    for i, vertex in enumerate(tri.vertices):
        if vertex.kind == "B":
            phi = 2 * pi * vertex.index * k / p
            points[i] = (params.rho * np.cos(phi), params.rho * np.sin(phi), 0.0)
        else:
            phi = params.alpha + 2 * pi * q * vertex.index * k / p
            points[i] = (params.sigma * np.cos(phi), params.sigma * np.sin(phi), params.s)
    return points


def signed_volume(pts: Sequence[Sequence[float]]) -> float:
    pts = np.asarray(pts, dtype=float)
    return float(np.linalg.det(pts[1:] - pts[0]) / 6.0)


def edge_lengths(pts) -> np.ndarray:
    pts = np.asarray(pts, dtype=float)
    return np.array([np.linalg.norm(pts[i] - pts[j]) for i, j in LOCAL_EDGES])


def face_area(a, b, c) -> float:
    a, b, c = (np.asarray(x, dtype=float) for x in (a, b, c))
    return float(np.linalg.norm(np.cross(b - a, c - a)) / 2.0)


def dihedral_angles(pts) -> np.ndarray:
    """Interior dihedral angle at each canonical edge, in (0, π).

    sin θ comes from the volume and the two face areas, cos θ from the face
    normals; both are invariant under reordering the four points.
    """
    pts = np.asarray(pts, dtype=float)
    volume = abs(signed_volume(pts))
    size = max(np.linalg.norm(pts[i] - pts[j]) for i, j in LOCAL_EDGES)
    if volume <= _DEGENERATE_VOLUME * size ** 3:
        raise DegenerateTet(f"tetrahedron volume {volume:.3e} is numerically zero")
    angles = np.empty(6)
    for slot, ((i, j), (c, d)) in enumerate(zip(LOCAL_EDGES, OPPOSITE)):
        axis = pts[j] - pts[i]
        n1 = np.cross(axis, pts[c] - pts[i])
        n2 = np.cross(axis, pts[d] - pts[i])
        norms = np.linalg.norm(n1) * np.linalg.norm(n2)
        sin_theta = 6.0 * np.linalg.norm(axis) * volume / norms
        cos_theta = np.dot(n1, n2) / norms
        angles[slot] = np.arctan2(sin_theta, cos_theta)
    return angles


def cayley_menger(lengths: Sequence[float]) -> float:
    """288·V² of the tet with the given canonical edge lengths."""
    d2 = np.zeros((5, 5))
    d2[0, 1:] = d2[1:, 0] = 1.0
    for (i, j), l in zip(LOCAL_EDGES, lengths):
        d2[i + 1, j + 1] = d2[j + 1, i + 1] = float(l) ** 2
    return float(np.linalg.det(d2))


def tet_from_lengths(lengths: Sequence[float]) -> np.ndarray:
    """Canonical positively oriented embedding: P0 at the origin, P1 on the
    first axis, P2 in the first coordinate plane."""
    l01, l02, l03, l12, l13, l23 = (float(x) for x in lengths)
    if min(l01, l02, l03, l12, l13, l23) <= 0:
        raise NotRealizable("edge lengths must be positive")
    scale = max(l01, l02, l03, l12, l13, l23)
    if cayley_menger(lengths) <= _DEGENERATE_VOLUME * scale ** 6:
        raise NotRealizable(f"Cayley–Menger determinant of {list(lengths)} is not positive")

    x2 = (l01 ** 2 + l02 ** 2 - l12 ** 2) / (2 * l01)
    y2_sq = l02 ** 2 - x2 ** 2
    x3 = (l01 ** 2 + l03 ** 2 - l13 ** 2) / (2 * l01)
    if y2_sq <= 0:
        raise NotRealizable("face (0, 1, 2) violates the triangle inequality")
    y2 = np.sqrt(y2_sq)
    y3 = (l02 ** 2 + l03 ** 2 - l23 ** 2 - 2 * x2 * x3) / (2 * y2)
    z3_sq = l03 ** 2 - x3 ** 2 - y3 ** 2
    if z3_sq <= 0:
        raise NotRealizable(f"lengths {list(lengths)} do not close up into a tetrahedron")
    return np.array([
        [0.0, 0.0, 0.0],
        [l01, 0.0, 0.0],
        [x2, y2, 0.0],
        [x3, y3, np.sqrt(z3_sq)],
    ])


def reduce_angle(x):
    """Representative of x modulo 2π in (−π, π]."""
    return x - 2 * pi * np.ceil((x - pi) / (2 * pi))


@dataclass(frozen=True, eq=False)
class Realization:
    tri: Triangulation
    params: GeomParams
    points: np.ndarray = field(repr=False)
    lengths: np.ndarray = field(repr=False)
    volumes: np.ndarray = field(repr=False)
    angles: np.ndarray = field(repr=False)
    defects: np.ndarray = field(repr=False)

    @property
    def spec(self) -> LensSpec:
        return self.tri.spec

    @property
    def signs(self) -> np.ndarray:
        return np.sign(self.volumes)

    def tet_points(self, t: int) -> np.ndarray:
        return self.points[list(self.tri.tet_vertex_indices(t))]

    def tet_lengths(self, t: int) -> np.ndarray:
        return self.lengths[list(self.tri.tet_edges[t])]

    def length(self, a, b) -> float:
        return float(self.lengths[self.tri.edge_index((a, b))])


def _check_params(tri: Triangulation, params: GeomParams):
    p = tri.spec.p
    if not 1 <= params.k <= p - 1:
        raise InvalidSpec(f"k must satisfy 1 ≤ k ≤ p−1, got k={params.k} for p={p}")
    if gcd(params.k, p) != 1:
        logger.debug("Realizing %s with non-primitive k=%s", tri.spec, params.k)


def defect_angles(real: Realization) -> np.ndarray:
    """ω_e = −Σ_{t ∋ e} ε_t·θ_{t,e}, reduced to (−π, π]."""
    return _defects(real.tri, real.volumes, real.angles)


def _defects(tri: Triangulation, volumes: np.ndarray, angles: np.ndarray) -> np.ndarray:
    signs = np.sign(volumes)
    omega = np.zeros(len(tri.edges))
    for e, incidences in enumerate(tri.edge_tets):
        omega[e] = -sum(signs[t] * angles[t, slot] for t, slot in incidences)
    return reduce_angle(omega)


def realize(tri: Triangulation, params: GeomParams) -> Realization:
    _check_params(tri, params)
    smallest = float(np.min(np.abs(volume_phases(tri.spec, params))))
    phase_min = phase_floor()
    if smallest < phase_min:
        raise DegenerateParams(
            f"smallest volume phase {smallest:.3e} is below {phase_min:.1e}, "
            f"tets are too flat to split reliably (alpha={params.alpha})"
        )
    points = vertex_coordinates(tri, params)

    floor = conf.delta_min() * params.scale
    volumes = np.empty(len(tri.tets))
    angles = np.empty((len(tri.tets), 6))
    for t in range(len(tri.tets)):
        pts = points[list(tri.tet_vertex_indices(t))]
        volumes[t] = signed_volume(pts)
        if abs(volumes[t]) < floor:
            raise DegenerateParams(
                f"{tri.tets[t]} has volume {volumes[t]:.3e} below the floor {floor:.3e} "
                f"(alpha={params.alpha})"
            )
        angles[t] = dihedral_angles(pts)

    lengths = np.array([np.linalg.norm(points[tri.vertex_index(e.a)] - points[tri.vertex_index(e.b)])
                        for e in tri.edges])
    defects = _defects(tri, volumes, angles)
    worst = float(np.max(np.abs(defects)))
    if worst > conf.residual_tol():
        logger.error("Defect angles of %s do not vanish: max |ω| = %.3e", tri.spec, worst)
    else:
        logger.debug("Realized %s k=%s: max |ω| = %.3e", tri.spec, params.k, worst)

    return Realization(
        tri=tri,
        params=params,
        points=points,
        lengths=lengths,
        volumes=volumes,
        angles=angles,
        defects=defects,
    )
