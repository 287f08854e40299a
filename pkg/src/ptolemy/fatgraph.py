"""Once-bordered fatgraphs as combinatorial maps.

A fatgraph is stored through its darts (oriented edges), the edge involution
``inv`` and the vertex permutation ``sigma`` whose cycles list, in
counterclockwise order, the darts pointing *into* each vertex.  The boundary
successor of a dart ``d`` is ``inv[sigma[d]]``: the next dart around the head
of ``d``, reversed so that it points away.  This one convention is used
everywhere in the package.

The tail ``t`` is the dart pointing away from the univalent vertex, so the
univalent vertex is the singleton cycle ``(inv[t],)`` and every boundary walk
starting there begins with ``t`` and ends with ``inv[t]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import (
    Disconnected,
    InvolutionFixedPoint,
    MissingTail,
    NonComposable,
    NotBordered,
    NotTrivalent,
    ParseError,
    TailMove,
)


class FatGraph:
    """Immutable combinatorial map with a distinguished tail dart."""

    __slots__ = ("darts", "inv", "sigma", "tail", "_cache")

    def __init__(self, vertices: Iterable[Sequence[int]], edges: Iterable[Sequence[int]], tail: int):
        inv: Dict[int, int] = {}
        for pair in edges:
            if len(pair) != 2:
                raise ParseError(f"edge {pair!r} must have two darts")
            a, b = pair
            if a == b:
                raise InvolutionFixedPoint(f"dart {a} is its own reverse")
            if a in inv or b in inv:
                raise ParseError(f"dart repeated in edges {pair!r}")
            inv[a] = b
            inv[b] = a
        sigma: Dict[int, int] = {}
        for cyc in vertices:
            cyc = tuple(cyc)
            if not cyc:
                raise ParseError("empty vertex")
            for k, d in enumerate(cyc):
                if d in sigma:
                    raise ParseError(f"dart {d} appears at two vertices")
                sigma[d] = cyc[(k + 1) % len(cyc)]
        if set(sigma) != set(inv):
            missing = set(sigma) ^ set(inv)
            if missing and set(sigma) - set(inv):
                d = min(set(sigma) - set(inv))
                raise InvolutionFixedPoint(f"dart {d} has no reverse")
            raise ParseError(f"darts {sorted(missing)} are not at any vertex")
        if tail not in inv:
            raise MissingTail(f"tail {tail} is not a dart")
        self.darts = tuple(sorted(inv))
        self.inv = inv
        self.sigma = sigma
        self.tail = tail
        self._cache: dict = {}

    # -- structure ---------------------------------------------------------
    def vertices(self) -> List[Tuple[int, ...]]:
        """Vertex cycles, each rotated to start at its smallest dart."""
        if "vertices" not in self._cache:
            seen = set()
            out = []
            for d in self.darts:
                if d in seen:
                    continue
                cyc = [d]
                seen.add(d)
                x = self.sigma[d]
                while x != d:
                    cyc.append(x)
                    seen.add(x)
                    x = self.sigma[x]
                out.append(tuple(cyc))
            self._cache["vertices"] = out
        return self._cache["vertices"]

    def vertex_cycle(self, d: int) -> Tuple[int, ...]:
        """The cycle at the head of ``d``, starting with ``d``."""
        cyc = [d]
        x = self.sigma[d]
        while x != d:
            cyc.append(x)
            x = self.sigma[x]
        return tuple(cyc)

    def head(self, d: int) -> int:
        """Vertex label of the head of ``d``: the smallest dart in its cycle."""
        if "head" not in self._cache:
            self._cache["head"] = {x: cyc[0] for cyc in self.vertices() for x in cyc}
        return self._cache["head"][d]

    def edges(self) -> List[Tuple[int, int]]:
        return [(d, self.inv[d]) for d in self.darts if d < self.inv[d]]

    def edge_of(self, d: int) -> int:
        """Edges are named by their smaller dart id."""
        return min(d, self.inv[d])

    def next(self, d: int) -> int:
        return self.inv[self.sigma[d]]

    @property
    def tail_edge(self) -> int:
        return self.edge_of(self.tail)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FatGraph)
            and self.tail == other.tail
            and self.inv == other.inv
            and self.sigma == other.sigma
        )

    def __hash__(self) -> int:
        return hash((self.tail, tuple(sorted(self.sigma.items()))))

    def __repr__(self) -> str:
        return f"FatGraph(vertices={self.vertices()}, tail={self.tail})"

    # -- boundary ----------------------------------------------------------
    def boundary_cycles(self) -> List[Tuple[int, ...]]:
        if "faces" not in self._cache:
            seen = set()
            faces = []
            for d in self.darts:
                if d in seen:
                    continue
                cyc = [d]
                seen.add(d)
                x = self.next(d)
                while x != d:
                    cyc.append(x)
                    seen.add(x)
                    x = self.next(x)
                faces.append(tuple(cyc))
            self._cache["faces"] = faces
        return self._cache["faces"]

    def boundary_sequence(self) -> Tuple[int, ...]:
        """All darts in order of traversal from the univalent vertex."""
        if "bseq" not in self._cache:
            if len(self.boundary_cycles()) != 1:
                raise NotBordered(f"{len(self.boundary_cycles())} boundary cycles")
            seq = [self.tail]
            x = self.next(self.tail)
            while x != self.tail:
                seq.append(x)
                x = self.next(x)
            self._cache["bseq"] = tuple(seq)
        return self._cache["bseq"]

    def position(self, d: int) -> int:
        if "bpos" not in self._cache:
            self._cache["bpos"] = {x: k for k, x in enumerate(self.boundary_sequence())}
        return self._cache["bpos"][d]

    def preferred(self, d: int) -> int:
        """Preferred orientation of the edge of ``d`` (the earlier dart)."""
        e = self.inv[d]
        return d if self.position(d) < self.position(e) else e

    def genus(self) -> int:
        return validate(self).genus

    def canonical(self) -> Tuple[int, ...]:
        """Encoding invariant under dart relabeling.

        Darts are renumbered by boundary position; since the boundary
        successor and the involution determine ``sigma``, the involution in
        these coordinates is a complete invariant of a bordered fatgraph.
        """
        if "canon" not in self._cache:
            seq = self.boundary_sequence()
            self._cache["canon"] = tuple(self.position(self.inv[d]) for d in seq)
        return self._cache["canon"]

    def relabeled(self, mapping: Dict[int, int]) -> "FatGraph":
        return FatGraph(
            [tuple(mapping[d] for d in cyc) for cyc in self.vertices()],
            [(mapping[a], mapping[b]) for a, b in self.edges()],
            mapping[self.tail],
        )

    def canonical_graph(self) -> "FatGraph":
        """Copy with darts renumbered 1..N by boundary position."""
        return self.relabeled({d: k + 1 for k, d in enumerate(self.boundary_sequence())})


def isomorphism(g: FatGraph, h: FatGraph) -> Dict[int, int]:
    """The unique dart bijection g -> h preserving the fatgraph structure."""
    if g.canonical() != h.canonical():
        raise NonComposable("fatgraphs are not isomorphic")
    return dict(zip(g.boundary_sequence(), h.boundary_sequence()))


def from_canonical(code: Sequence[int]) -> FatGraph:
    """Inverse of :meth:`FatGraph.canonical`; darts are ``1..len(code)``."""
    n = len(code)
    inv = {k + 1: code[k] + 1 for k in range(n)}
    for k in range(n):
        if code[code[k]] != k or code[k] == k:
            raise ParseError("encoding is not a fixed-point-free involution")
    # next(pos k) = pos k+1, and next = inv o sigma, so sigma(k) = inv(k+1)
    sigma = {k + 1: inv[(k + 1) % n + 1] for k in range(n)}
    seen = set()
    cycles = []
    for d in range(1, n + 1):
        if d in seen:
            continue
        cyc = [d]
        seen.add(d)
        x = sigma[d]
        while x != d:
            cyc.append(x)
            seen.add(x)
            x = sigma[x]
        cycles.append(cyc)
    return FatGraph(cycles, [(a, b) for a, b in inv.items() if a < b], 1)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class ValidationReport:
    boundary_cycles: int
    genus: Optional[int]
    vertex_count: int
    edge_count: int
    valences: Tuple[int, ...]
    violations: Tuple[str, ...] = ()

    @property
    def bordered(self) -> bool:
        return self.boundary_cycles == 1

    @property
    def trivalent(self) -> bool:
        return sorted(self.valences) == [1] + [3] * (len(self.valences) - 1)

    @property
    def ok(self) -> bool:
        return self.bordered and not self.violations


def validate(g: FatGraph) -> ValidationReport:
    """Check structure, count boundary cycles and compute the genus.

    Raises on malformed input (fixed points are rejected at construction);
    a boundary count other than one is reported rather than raised.
    """
    for d in g.darts:
        if g.inv[d] == d:
            raise InvolutionFixedPoint(f"dart {d}")
    # connectivity over vertices
    verts = g.vertices()
    adj: Dict[int, set] = {cyc[0]: set() for cyc in verts}
    for a, b in g.edges():
        adj[g.head(a)].add(g.head(b))
        adj[g.head(b)].add(g.head(a))
    start = verts[0][0]
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != len(verts):
        raise Disconnected(f"{len(verts) - len(seen)} vertices unreachable")
    valences = tuple(len(c) for c in verts)
    univalent = [c for c in verts if len(c) == 1]
    if g.vertex_cycle(g.inv[g.tail]) != (g.inv[g.tail],):
        raise MissingTail(f"tail {g.tail} does not leave a univalent vertex")
    violations = []
    if len(univalent) != 1:
        violations.append(f"{len(univalent)} univalent vertices")
    for c in verts:
        if len(c) == 2:
            violations.append(f"bivalent vertex {c}")
    nfaces = len(g.boundary_cycles())
    V, E = len(verts), len(g.edges())
    chi = V - E
    genus = None
    if nfaces == 1:
        twice = 2 - nfaces - chi
        if twice % 2 == 0:
            genus = twice // 2
        else:
            violations.append("non-integral genus")
        if genus is not None and genus < 1:
            violations.append(f"genus {genus} < 1")
    return ValidationReport(nfaces, genus, V, E, valences, tuple(violations))


def require_bordered(g: FatGraph, trivalent: bool = True) -> ValidationReport:
    rep = validate(g)
    if not rep.bordered:
        raise NotBordered(f"{rep.boundary_cycles} boundary cycles")
    if trivalent and not rep.trivalent:
        raise NotTrivalent(f"valences {sorted(rep.valences)}")
    return rep


# ---------------------------------------------------------------------------
# boundary order


@dataclass(frozen=True)
class BoundaryOrder:
    sequence: Tuple[int, ...]
    preferred: Dict[int, int] = field(compare=False)

    def position(self, d: int) -> int:
        return self.sequence.index(d)


def boundary_order(g: FatGraph) -> BoundaryOrder:
    seq = g.boundary_sequence()
    return BoundaryOrder(seq, {e: g.preferred(e) for e, _ in g.edges()})


# ---------------------------------------------------------------------------
# Whitehead moves


def _move_darts(g: FatGraph, e: int):
    h = g.edge_of(e)
    hb = g.inv[h]
    if h == g.tail_edge:
        raise TailMove(f"edge {h} is the tail")
    v = g.vertex_cycle(h)
    u = g.vertex_cycle(hb)
    if len(v) != 3 or len(u) != 3:
        raise NotTrivalent(f"edge {h} joins vertices of valence {len(v)}, {len(u)}")
    if g.head(h) == g.head(hb):
        raise NotBordered(f"edge {h} is a loop")
    return h, hb, v, u


def whitehead_move(g: FatGraph, e: int) -> FatGraph:
    """Collapse edge ``e`` and re-expand the other way.

    With ``v = (h, a1, a2)`` and ``u = (hb, b1, b2)`` the result has
    ``(h, a2, b1)`` and ``(hb, b2, a1)``; every dart keeps its id.
    """
    h, hb, (_, a1, a2), (_, b1, b2) = _move_darts(g, e)
    verts = [c for c in g.vertices() if h not in c and hb not in c]
    verts += [(h, a2, b1), (hb, b2, a1)]
    return FatGraph(verts, g.edges(), g.tail)


@dataclass(frozen=True)
class MoveType:
    kind: int
    forward: bool

    @property
    def direction(self) -> str:
        return "forward" if self.forward else "inverse"

    def __str__(self) -> str:
        return f"{self.kind}{'' if self.forward else '^-1'}"


# corner-visit order (normalized to start at corner 1) -> kind
_KIND = {
    (1, 2, 3, 4): 1,
    (1, 2, 4, 3): 2,
    (1, 4, 3, 2): 3,
    (1, 4, 2, 3): 4,
    (1, 3, 2, 4): 5,
    (1, 3, 4, 2): 6,
}
# kinds whose printed formula starts from the side where the first visited
# corner is a corner of an endpoint of the move edge
_FORWARD_AT_VERTEX = {1, 2, 4}


@dataclass(frozen=True)
class MoveConfiguration:
    """Local picture of a move: outer darts ``alpha`` in ccw order around the
    collapsed vertex, rotated so the boundary visits corner (alpha[0], alpha[1])
    first; ``vertex_corners`` says whether that corner lies at an endpoint of
    the move edge (True) or is crossed by it (False)."""

    edge: int
    alpha: Tuple[int, int, int, int]
    order: Tuple[int, int, int, int]
    vertex_corners: bool
    type: MoveType


def move_configuration(g: FatGraph, e: int) -> MoveConfiguration:
    h, hb, (_, a1, a2), (_, b1, b2) = _move_darts(g, e)
    alpha = (a1, a2, b1, b2)
    # corner k is entered through alpha[k]
    times = [g.position(x) for x in alpha]
    f = min(range(4), key=times.__getitem__)
    by_time = sorted(range(4), key=times.__getitem__)
    order = tuple((k - f) % 4 + 1 for k in by_time)
    at_vertex = f % 2 == 0
    kind = _KIND[order]
    forward = at_vertex == (kind in _FORWARD_AT_VERTEX)
    rot = alpha[f:] + alpha[:f]
    return MoveConfiguration(h, rot, order, at_vertex, MoveType(kind, forward))


def classify_move(g: FatGraph, e: int) -> MoveType:
    """Kind 1-6 from the order in which the boundary visits the four corners
    around the move edge; the inverse move has the same kind."""
    return move_configuration(g, e).type


# ---------------------------------------------------------------------------
# move sequences


@dataclass(frozen=True)
class Step:
    edge: int
    result: FatGraph
    type: MoveType


@dataclass(frozen=True)
class MoveSequence:
    start: FatGraph
    steps: Tuple[Step, ...] = ()

    @classmethod
    def from_edges(cls, start: FatGraph, edges: Iterable[int]) -> "MoveSequence":
        seq = cls(start)
        for e in edges:
            seq = seq.then(e)
        return seq

    @property
    def end(self) -> FatGraph:
        return self.steps[-1].result if self.steps else self.start

    @property
    def edges(self) -> Tuple[int, ...]:
        return tuple(s.edge for s in self.steps)

    def graphs(self) -> List[FatGraph]:
        return [self.start] + [s.result for s in self.steps]

    def __len__(self) -> int:
        return len(self.steps)

    def then(self, e: int) -> "MoveSequence":
        g = self.end
        step = Step(g.edge_of(e), whitehead_move(g, e), classify_move(g, e))
        return MoveSequence(self.start, self.steps + (step,))

    def __add__(self, other: "MoveSequence") -> "MoveSequence":
        """Concatenate; ``other`` may start at an isomorphic copy of our end."""
        if other.start == self.end:
            return MoveSequence(self.start, self.steps + other.steps)
        iso = isomorphism(other.start, self.end)
        # moves never rename darts, so one relabeling serves every step
        seq = self
        for e in other.edges:
            seq = seq.then(iso[e])
        return seq

    def inverse(self) -> "MoveSequence":
        seq = MoveSequence(self.end)
        for e in reversed(self.edges):
            seq = seq.then(e)
        return seq

    def is_loop(self) -> bool:
        return self.start.canonical() == self.end.canonical()


# ---------------------------------------------------------------------------
# .fat text format


def format_fat(g: FatGraph) -> str:
    lines = [f"darts {len(g.darts)}", f"tail {g.tail}"]
    for cyc in sorted(g.vertices(), key=min):
        lines.append("v: " + " ".join(map(str, cyc)))
    for a, b in g.edges():
        lines.append(f"e: {a} {b}")
    return "\n".join(lines) + "\n"


def parse_fat(text: str) -> FatGraph:
    n = tail = None
    verts: List[List[int]] = []
    edges: List[List[int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        try:
            if head == "darts":
                n = int(rest)
            elif head == "tail":
                tail = int(rest)
            elif head.endswith(":") or ":" in line:
                tag, _, body = line.partition(":")
                ids = [int(x) for x in body.split()]
                if tag.strip() == "v":
                    verts.append(ids)
                elif tag.strip() == "e":
                    edges.append(ids)
                else:
                    raise ParseError(f"line {lineno}: unknown record {tag!r}")
            else:
                raise ParseError(f"line {lineno}: cannot parse {raw!r}")
        except ValueError:
            raise ParseError(f"line {lineno}: bad integer in {raw!r}") from None
    if n is None or tail is None:
        raise ParseError("missing 'darts' or 'tail' line")
    g = FatGraph(verts, edges, tail)
    if len(g.darts) != n or set(g.darts) != set(range(1, n + 1)):
        raise ParseError(f"expected darts 1..{n}")
    return g
