"""Abstract markings: a group element on every dart.

A marking satisfies the edge condition ``m(d) m(inv d) = 1`` and the vertex
condition that the product of the inbound values around each trivalent vertex,
in cyclic order, is ``1``.  Values may live in any of the groups below; the
free group gives pi_1-markings and the additive lattice gives H-markings.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import MarkingInvalid, ParseError
from .fatgraph import FatGraph, _move_darts
from .freegroup import IDENTITY, Word, abelianize_word, format_word, parse_word


class FreeGroup:
    """Values are :class:`Word` objects."""

    name = "pi1"
    one = IDENTITY

    def mul(self, a: Word, b: Word) -> Word:
        return a * b

    def inv(self, a: Word) -> Word:
        return ~a

    def __eq__(self, other) -> bool:
        return isinstance(other, FreeGroup)

    def __hash__(self) -> int:
        return hash("pi1")


class Lattice:
    """Additive group Z^n; values are integer tuples."""

    name = "H"

    def __init__(self, n: int):
        self.n = n
        self.one = (0,) * n

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def __eq__(self, other) -> bool:
        return isinstance(other, Lattice) and other.n == self.n

    def __hash__(self) -> int:
        return hash(("H", self.n))


class SL2:
    """SL(2, F_p) with matrices stored as ``(a, b, c, d)``.

    Products of long words collapse to four residues, which makes this a
    cheap faithful-enough witness for long random walks.
    """

    name = "SL2"

    def __init__(self, p: int = 1000003):
        self.p = p
        self.one = (1, 0, 0, 1)

    def mul(self, x, y):
        p = self.p
        a, b, c, d = x
        e, f, g, h = y
        return ((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p)

    def inv(self, x):
        a, b, c, d = x
        p = self.p
        return (d % p, -b % p, -c % p, a % p)

    def random_element(self, rng: random.Random):
        p = self.p
        while True:
            a, b, c = rng.randrange(p), rng.randrange(p), rng.randrange(p)
            if a:
                return (a, b, c, (1 + b * c) * pow(a, -1, p) % p)

    def evaluate(self, w: Word, images: Sequence) -> Tuple[int, int, int, int]:
        out = self.one
        for a in w.letters:
            out = self.mul(out, images[a - 1] if a > 0 else self.inv(images[-a - 1]))
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, SL2) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("SL2", self.p))


FREE = FreeGroup()


@dataclass(frozen=True)
class Marking:
    group: object
    values: Dict[int, object]

    def __getitem__(self, d: int):
        return self.values[d]

    def __eq__(self, other) -> bool:
        return isinstance(other, Marking) and self.group == other.group and self.values == other.values

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.values.items())))

    @property
    def is_pi1(self) -> bool:
        return isinstance(self.group, FreeGroup)

    @property
    def is_h(self) -> bool:
        return isinstance(self.group, Lattice)

    def relabeled(self, mapping: Dict[int, int]) -> "Marking":
        return Marking(self.group, {mapping[d]: v for d, v in self.values.items()})

    def abelianized(self, rank: int) -> "Marking":
        if not self.is_pi1:
            raise MarkingInvalid("only pi_1-markings can be abelianized")
        return Marking(Lattice(rank), {d: abelianize_word(w, rank) for d, w in self.values.items()})

    def mapped(self, group, f) -> "Marking":
        return Marking(group, {d: f(v) for d, v in self.values.items()})


def pi1_marking(values: Dict[int, Word]) -> Marking:
    return Marking(FREE, dict(values))


def h_marking(values: Dict[int, Sequence[int]]) -> Marking:
    vals = {d: tuple(v) for d, v in values.items()}
    n = len(next(iter(vals.values())))
    return Marking(Lattice(n), vals)


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class MarkingReport:
    edge_failures: Tuple[int, ...]
    vertex_failures: Tuple[Tuple[int, ...], ...]
    surjective: Optional[bool] = None
    h_geometric: Optional[bool] = None
    pairing_failures: Tuple[Tuple[int, int], ...] = ()

    @property
    def ok(self) -> bool:
        return (
            not self.edge_failures
            and not self.vertex_failures
            and self.surjective is not False
            and self.h_geometric is not False
        )

    def violations(self) -> List[str]:
        out = [f"edge condition fails on edge {e}" for e in self.edge_failures]
        out += [f"vertex condition fails at {v}" for v in self.vertex_failures]
        if self.surjective is False:
            out.append("values do not generate")
        if self.h_geometric is False:
            out.append(f"pairing differs from the intersection form on {len(self.pairing_failures)} pairs")
        return out


LEVELS = ("edge_vertex", "surjective", "h_geometric")


def verify(g: FatGraph, m: Marking, level: str = "edge_vertex") -> MarkingReport:
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    missing = set(g.darts) - set(m.values)
    if missing:
        raise MarkingInvalid(f"no value on darts {sorted(missing)}")
    grp = m.group
    edge_bad = tuple(a for a, b in g.edges() if grp.mul(m[a], m[b]) != grp.one)
    vert_bad = []
    for cyc in g.vertices():
        if len(cyc) == 1:
            continue
        acc = grp.one
        for d in cyc:
            acc = grp.mul(acc, m[d])
        if acc != grp.one:
            vert_bad.append(cyc)
    surj = geo = None
    pair_bad: Tuple[Tuple[int, int], ...] = ()
    if level in ("surjective", "h_geometric"):
        surj = _spans(g, m)
    if level == "h_geometric":
        pair_bad = tuple(_pairing_failures(g, m))
        geo = not pair_bad
    return MarkingReport(edge_bad, tuple(vert_bad), surj, geo, pair_bad)


def _rank_of_marking(m: Marking) -> int:
    if m.is_h:
        return m.group.n
    return max((w.rank() for w in m.values.values()), default=0)


def _spans(g: FatGraph, m: Marking) -> bool:
    if m.is_h:
        n = m.group.n
        vecs = [m[d] for d in g.darts]
    elif m.is_pi1:
        n = 2 * g.genus()
        vecs = [abelianize_word(m[d], max(n, _rank_of_marking(m))) for d in g.darts]
        if len(vecs[0]) != n:
            return False
    else:
        raise MarkingInvalid("surjectivity is only defined for pi_1- and H-markings")
    return lattice_index(vecs, n) == 1


def lattice_index(vectors: Iterable[Sequence[int]], n: int) -> int:
    """Index of the lattice spanned by ``vectors`` in Z^n (0 if rank < n)."""
    rows = [list(v) for v in vectors if any(v)]
    det = 1
    for col in range(n):
        # Euclid on column ``col`` among remaining rows
        while True:
            nz = [r for r in rows if r[col]]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            for r in nz[1:]:
                q = r[col] // piv[col]
                for k in range(col, n):
                    r[k] -= q * piv[k]
            rows = [r for r in rows if any(r)]
        nz = [r for r in rows if r[col]]
        if not nz:
            return 0
        det *= abs(nz[0][col])
        rows = [r for r in rows if r is not nz[0]]
    return det


def intersection(u: Sequence[int], v: Sequence[int]) -> int:
    """omega(u, v) in the interleaved basis (A_1, B_1, ..., A_g, B_g)."""
    s = 0
    for k in range(0, len(u), 2):
        s += u[k] * v[k + 1] - u[k + 1] * v[k]
    return s


def skew_pairing(g: FatGraph, x: int, y: int) -> int:
    """Combinatorial pairing of darts from their interleaving on the boundary."""
    n = len(g.darts)
    px = g.position(x)

    def rel(d):
        return (g.position(d) - px) % n

    xb, yb = g.inv[x], g.inv[y]
    if y in (x, xb):
        return 0
    ry, rxb, ryb = rel(y), rel(xb), rel(yb)
    if ry < rxb < ryb:
        return -1
    if ryb < rxb < ry:
        return 1
    return 0


def _pairing_failures(g: FatGraph, m: Marking):
    if not m.is_h:
        raise MarkingInvalid("H-geometricity needs an H-marking")
    ds = g.darts
    for i, x in enumerate(ds):
        for y in ds[i + 1:]:
            if skew_pairing(g, x, y) != intersection(m[x], m[y]):
                yield (x, y)


# ---------------------------------------------------------------------------
# transport and solving


def transport(g: FatGraph, m: Marking, e: int) -> Marking:
    """Values on ``whitehead_move(g, e)``; only the move edge changes."""
    h, hb, (_, a1, a2), (_, b1, b2) = _move_darts(g, e)
    grp = m.group
    new = dict(m.values)
    prod = grp.mul(m[a2], m[b1])
    new[h] = grp.inv(prod)
    new[hb] = prod
    return Marking(grp, new)


def solve_marking(g: FatGraph, tree_edges: Iterable[int], known: Dict[int, object], group) -> Marking:
    """Extend values on non-tree darts to the whole graph.

    ``known`` gives one dart of every non-tree edge.  Tree darts are found
    from the leaves towards the tail by the vertex condition; the marking
    is unique because a tree has no cycles.
    """
    tree = {g.edge_of(e) for e in tree_edges}
    vals: Dict[int, object] = {}
    for d, v in known.items():
        vals[d] = v
        vals[g.inv[d]] = group.inv(v)
    # orient the tree from the univalent vertex outward
    root = g.head(g.inv[g.tail])
    parent_in: Dict[int, int] = {}  # vertex -> dart from parent into it
    order = []
    stack = [root]
    seen = {root}
    while stack:
        v = stack.pop()
        order.append(v)
        for d in g.vertex_cycle(v):
            out = g.inv[d]  # leaves v
            if g.edge_of(d) not in tree:
                continue
            w = g.head(out)
            if w not in seen:
                seen.add(w)
                parent_in[w] = out
                stack.append(w)
    if len(seen) != len(g.vertices()):
        raise MarkingInvalid("tree edges do not span the graph")
    for v in reversed(order):
        if v == root:
            continue
        p = parent_in[v]
        cyc = g.vertex_cycle(p)
        acc = group.one
        for d in cyc[1:]:
            if d not in vals:
                raise MarkingInvalid(f"dart {d} unresolved at vertex {cyc}")
            acc = group.mul(acc, vals[d])
        vals[p] = group.inv(acc)
        vals[g.inv[p]] = acc
    return Marking(group, vals)


# ---------------------------------------------------------------------------
# text format


def format_marking(m: Marking) -> str:
    lines = []
    for d in sorted(m.values):
        v = m.values[d]
        body = format_word(v) if m.is_pi1 else " ".join(map(str, v))
        lines.append(f"{d}: {body}".rstrip())
    return "\n".join(lines) + "\n"


def parse_marking(text: str, kind: str = "pi1") -> Marking:
    if kind not in ("pi1", "h"):
        raise ValueError("kind must be 'pi1' or 'h'")
    vals = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, body = line.partition(":")
        if not sep:
            raise ParseError(f"line {lineno}: expected 'dart: value'")
        try:
            d = int(head)
        except ValueError:
            raise ParseError(f"line {lineno}: bad dart {head!r}") from None
        if d in vals:
            raise ParseError(f"line {lineno}: dart {d} given twice")
        if kind == "pi1":
            vals[d] = parse_word(body)
        else:
            try:
                vals[d] = tuple(int(x) for x in body.split())
            except ValueError:
                raise ParseError(f"line {lineno}: bad vector {body!r}") from None
    if not vals:
        raise ParseError("empty marking")
    if kind == "pi1":
        return pi1_marking(vals)
    sizes = {len(v) for v in vals.values()}
    if len(sizes) != 1:
        raise ParseError("H-vectors of different lengths")
    return h_marking(vals)
