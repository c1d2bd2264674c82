"""Simplicial complex of the universal cover S^3 of the lens space L(p, q).

The cover is the join of two p-cycles B_0..B_{p-1} and C_0..C_{p-1}: one tet
T(n, m) = (C_n, C_{n+1}, B_{m+1}, B_m) per pair of cycle edges. The deck
generator sends B_m -> B_{m+1} and C_n -> C_{n+q_inv}; block m of the
coordinate and length spaces is the image of block 0 under m deck steps.
"""
import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, FrozenSet, List, NamedTuple, Tuple, Union

from .exceptions import InvalidSpec, NotCoprime, UnknownEdge

logger = logging.getLogger(__name__)

# canonical local edge order of a tet with ordered vertices (P0, P1, P2, P3)
LOCAL_EDGES: Tuple[Tuple[int, int], ...] = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
LOCAL_FACES: Tuple[Tuple[int, int, int], ...] = ((1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2))


def mod_inverse(q: int, p: int) -> int:
    if p < 1:
        raise InvalidSpec(f"modulus must be positive, got {p}")
    if gcd(p, q) != 1:
        raise NotCoprime(f"{q} has no inverse modulo {p}: gcd is {gcd(p, q)}")
    return pow(q, -1, p) % p


@dataclass(frozen=True)
class LensSpec:
    p: int
    q: int
    q_inv: int = field(init=False)

    def __post_init__(self):
        if self.p < 3:
            raise InvalidSpec(f"p must be ≥ 3, got {self.p}")
        if not 1 <= self.q < self.p:
            raise InvalidSpec(f"q must satisfy 1 ≤ q < p, got q={self.q} for p={self.p}")
        if gcd(self.p, self.q) != 1:
            raise NotCoprime(f"p={self.p} and q={self.q} are not coprime")
        object.__setattr__(self, "q_inv", mod_inverse(self.q, self.p))

    def __str__(self) -> str:
        return f"L({self.p},{self.q})"


class Vertex(NamedTuple):
    kind: str  # "B" or "C"
    index: int

    def __str__(self) -> str:
        return f"{self.kind}{self.index}"


class Edge(NamedTuple):
    a: Vertex
    b: Vertex

    @property
    def family(self) -> str:
        return self.a.kind + self.b.kind

    @property
    def key(self) -> FrozenSet[Vertex]:
        return frozenset((self.a, self.b))

    def __str__(self) -> str:
        return f"{self.a}{self.b}"


class Tet(NamedTuple):
    n: int
    m: int
    vertices: Tuple[Vertex, Vertex, Vertex, Vertex]

    def __str__(self) -> str:
        return f"T({self.n},{self.m})"


def B(m: int, p: int) -> Vertex:
    return Vertex("B", m % p)


def C(n: int, p: int) -> Vertex:
    return Vertex("C", n % p)


@dataclass(frozen=True)
class Triangulation:
    spec: LensSpec
    vertices: Tuple[Vertex, ...]
    edges: Tuple[Edge, ...]
    tets: Tuple[Tet, ...]
    tet_edges: Tuple[Tuple[int, ...], ...] = field(repr=False)
    edge_tets: Tuple[Tuple[Tuple[int, int], ...], ...] = field(repr=False)
    _vertex_index: Dict[Vertex, int] = field(repr=False, compare=False)
    _edge_index: Dict[FrozenSet[Vertex], int] = field(repr=False, compare=False)

    @property
    def p(self) -> int:
        return self.spec.p

    @property
    def block_size(self) -> int:
        """Edges per block: one B-B edge, p B-C edges, one C-C edge."""
        return self.spec.p + 2

    @property
    def faces(self) -> Tuple[FrozenSet[Vertex], ...]:
        seen: Dict[FrozenSet[Vertex], None] = {}
        for tet in self.tets:
            for face in LOCAL_FACES:
                seen.setdefault(frozenset(tet.vertices[i] for i in face), None)
        return tuple(seen)

    @property
    def face_count(self) -> int:
        return len(self.faces)

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + self.face_count - len(self.tets)

    def vertex_index(self, vertex: Vertex) -> int:
        return self._vertex_index[vertex]

    def edge_index(self, edge: Union[Edge, Tuple[Vertex, Vertex]]) -> int:
        try:
            return self._edge_index[frozenset(edge)]
        except KeyError:
            raise UnknownEdge(f"{edge[0]}{edge[1]} is not an edge of the {self.spec} complex") from None

    def block_vertices(self, m: int) -> Tuple[Vertex, Vertex]:
        p = self.spec.p
        return B(m, p), C(m * self.spec.q_inv, p)

    def block_edges(self, m: int) -> Tuple[Edge, ...]:
        size = self.block_size
        start = (m % self.spec.p) * size
        return self.edges[start:start + size]

    def tet_vertex_indices(self, t: int) -> Tuple[int, ...]:
        return tuple(self._vertex_index[v] for v in self.tets[t].vertices)

    def tet_index(self, n: int, m: int) -> int:
        p = self.spec.p
        return (n % p) * p + (m % p)


def _block_edges(spec: LensSpec, m: int) -> List[Edge]:
    p = spec.p
    c = C(m * spec.q_inv, p)
    edges = [Edge(B(m, p), B(m + 1, p))]
    # B-C slots run relative to m so the deck shift fixes local positions
    edges.extend(Edge(B(m + i, p), c) for i in range(p))
    edges.append(Edge(c, C(c.index + 1, p)))
    return edges


def build_triangulation(spec: LensSpec) -> Triangulation:
    p = spec.p
    if p < 3:
        raise InvalidSpec(f"p must be ≥ 3, got {p}")
    if gcd(p, spec.q) != 1:
        raise NotCoprime(f"p={p} and q={spec.q} are not coprime")

    vertices: List[Vertex] = []
    edges: List[Edge] = []
    for m in range(p):
        b, c = B(m, p), C(m * spec.q_inv, p)
        vertices.extend((b, c))
        edges.extend(_block_edges(spec, m))

    vertex_index = {v: i for i, v in enumerate(vertices)}
    edge_index: Dict[FrozenSet[Vertex], int] = {}
    for i, e in enumerate(edges):
        if e.key in edge_index:
            raise InvalidSpec(f"edge {e} assigned to two blocks")
        edge_index[e.key] = i

    tets: List[Tet] = []
    tet_edges: List[Tuple[int, ...]] = []
    incidences: List[List[Tuple[int, int]]] = [[] for _ in edges]
    for n in range(p):
        for m in range(p):
            tet = Tet(n, m, (C(n, p), C(n + 1, p), B(m + 1, p), B(m, p)))
            t = len(tets)
            local = []
            for slot, (i, j) in enumerate(LOCAL_EDGES):
                e = edge_index[frozenset((tet.vertices[i], tet.vertices[j]))]
                local.append(e)
                incidences[e].append((t, slot))
            tets.append(tet)
            tet_edges.append(tuple(local))

    tri = Triangulation(
        spec=spec,
        vertices=tuple(vertices),
        edges=tuple(edges),
        tets=tuple(tets),
        tet_edges=tuple(tet_edges),
        edge_tets=tuple(tuple(inc) for inc in incidences),
        _vertex_index=vertex_index,
        _edge_index=edge_index,
    )
    logger.debug(
        "Built %s complex: V=%s E=%s F=%s T=%s",
        spec, len(tri.vertices), len(tri.edges), tri.face_count, len(tri.tets),
    )
    return tri


def incident_tets(tri: Triangulation, edge: Union[Edge, Tuple[Vertex, Vertex]]) -> List[Tuple[Tet, int]]:
    """Tets containing ``edge`` with the edge's slot in LOCAL_EDGES."""
    e = tri.edge_index(edge)
    return [(tri.tets[t], slot) for t, slot in tri.edge_tets[e]]


def deck_shift(tri: Triangulation, item: Union[Vertex, Edge], steps: int = 1):
    p, q_inv = tri.spec.p, tri.spec.q_inv
    if isinstance(item, Edge):
        shifted = Edge(deck_shift(tri, item.a, steps), deck_shift(tri, item.b, steps))
        return tri.edges[tri.edge_index(shifted)]
    if item.kind == "B":
        return B(item.index + steps, p)
    return C(item.index + steps * q_inv, p)
