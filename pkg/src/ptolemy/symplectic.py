"""Homology bases, the symplectic groupoid representation and identity lifts.

H is identified with Z^{2g} in the interleaved basis (A_1, B_1, ..., A_g, B_g)
with omega(A_i, B_i) = 1.  On the symplectic chord diagram the greedy
generators x_{2i-1}, x_{2i} are the chords of pair i (pair g leftmost) and
the reference marking gives them the classes -A_i and B_i.

A symplectic basis is stored as a 2g x 2g integer matrix whose columns are
the basis vectors in that order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .chorddiag import ChordDiagram, branch_reduce, chord_view, slide_edges, slide_normal_form, symplectic_diagram
from .errors import (
    BasisNotGeometric,
    DegenerateForm,
    IndexOutOfRange,
    MarkingInvalid,
    NotLagrangian,
    NotNormalForm,
    NotPrimitive,
)
from .fatgraph import FatGraph, MoveSequence, whitehead_move
from .freegroup import EndoMap
from .marking import Lattice, Marking, intersection, solve_marking, transport, verify
from .nielsen import greedy, nielsen_of_sequence

Matrix = List[List[int]]


# ---------------------------------------------------------------------------
# integer matrices


def identity_matrix(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a, b) -> Matrix:
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def transpose(a) -> Matrix:
    return [list(r) for r in zip(*a)]


def J(g: int) -> Matrix:
    """Gram matrix of omega in the interleaved basis."""
    m = [[0] * (2 * g) for _ in range(2 * g)]
    for i in range(g):
        m[2 * i][2 * i + 1] = 1
        m[2 * i + 1][2 * i] = -1
    return m


def is_symplectic_matrix(m) -> bool:
    g = len(m) // 2
    return matmul(matmul(transpose(m), J(g)), m) == J(g)


def sp_inverse(m) -> Matrix:
    """Inverse of a symplectic matrix: -J m^T J."""
    g = len(m) // 2
    return [[-x for x in row] for row in matmul(matmul(J(g), transpose(m)), J(g))]


def determinant(m) -> int:
    """Bareiss fraction-free elimination."""
    a = [list(r) for r in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def _solve_unimodular(m, v) -> List[int]:
    """Coordinates of ``v`` in the columns of the integer matrix ``m``."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(v[i])] for i, row in enumerate(m)]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    out = [a[i][n] for i in range(n)]
    if any(x.denominator != 1 for x in out):
        raise ValueError("vector is not in the integral span")
    return [int(x) for x in out]


def matrix_inverse(m) -> Matrix:
    n = len(m)
    cols = [_solve_unimodular(m, [int(i == j) for i in range(n)]) for j in range(n)]
    return transpose(cols)


# ---------------------------------------------------------------------------
# bases


@dataclass(frozen=True)
class GeometricBasis:
    vectors: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        vs = self.vectors
        n = len(vs)
        if n % 2 or any(len(v) != n for v in vs):
            raise BasisNotGeometric(f"need {n} vectors of length {n}")
        for i in range(n):
            for j in range(i):
                if intersection(vs[i], vs[j]) not in (0, 1):
                    raise BasisNotGeometric(f"X_{i + 1}.X_{j + 1} = {intersection(vs[i], vs[j])}")
        if abs(determinant(vs)) != 1:
            raise BasisNotGeometric("vectors do not form a basis of H")

    @property
    def genus(self) -> int:
        return len(self.vectors) // 2

    def intersection_matrix(self) -> Matrix:
        return [[intersection(u, v) for v in self.vectors] for u in self.vectors]


def _sign(k: int) -> int:
    # generator k (1-based) of the symplectic diagram carries -A or +B
    return -1 if k % 2 else 1


def reference_marking(g: FatGraph) -> Marking:
    """H-marking giving the greedy generators the vectors -A_1, B_1, ...

    On the symplectic chord diagram this is the geometric marking that
    realizes the standard basis.
    """
    t = greedy(g)
    n = t.rank
    known = {}
    for k, x in enumerate(t.generators, 1):
        v = [0] * n
        v[k - 1] = _sign(k)
        known[x] = tuple(v)
    return solve_marking(g, t.tree_edges, known, Lattice(n))


def normalize(g: FatGraph) -> MoveSequence:
    """Branch reduction followed by the slide algorithm: a path to S."""
    s1, c = branch_reduce(g)
    s2, _ = slide_normal_form(c)
    return MoveSequence(g, s1.steps + s2.steps)


_NORMALIZERS: Dict[Tuple[int, ...], Tuple[Tuple[int, ...], ...]] = {}


def normalization_matrix(g: FatGraph) -> Matrix:
    """Row k: the class of the k-th generator of S in the generators of ``g``."""
    key = g.canonical()
    if key not in _NORMALIZERS:
        t = greedy(g)
        n = t.rank
        known = {x: tuple(int(j == k) for j in range(n)) for k, x in enumerate(t.generators)}
        m = solve_marking(g, t.tree_edges, known, Lattice(n))
        path = normalize(g)
        for h, step in zip(path.graphs(), path.steps):
            m = transport(h, m, step.edge)
        _NORMALIZERS[key] = tuple(m[x] for x in greedy(path.end).generators)
    return [list(r) for r in _NORMALIZERS[key]]


def geometric_marking(g: FatGraph) -> Marking:
    """The H-marking of ``g`` whose normal form carries the standard basis."""
    t = greedy(g)
    n = t.rank
    inv = matrix_inverse(normalization_matrix(g))
    rows = [[inv[j][k] * _sign(k + 1) for k in range(n)] for j in range(n)]
    known = {x: tuple(rows[j]) for j, x in enumerate(t.generators)}
    return solve_marking(g, t.tree_edges, known, Lattice(n))


def generator_values(g: FatGraph, m: Marking) -> Matrix:
    return [list(m[x]) for x in greedy(g).generators]


def h_basis(g: FatGraph, m: Marking) -> GeometricBasis:
    rep = verify(g, m, "h_geometric")
    if not rep.ok:
        raise MarkingInvalid("; ".join(rep.violations()))
    return GeometricBasis(tuple(tuple(v) for v in generator_values(g, m)))


def symplectic_basis(g: FatGraph, m: Marking) -> Matrix:
    """Columns A_1, B_1, ... read off the normal form of (g, m) with signs fixed."""
    hs = matmul(normalization_matrix(g), generator_values(g, m))
    return transpose([[_sign(k + 1) * x for x in row] for k, row in enumerate(hs)])


def sp_of_move(g: FatGraph, m: Marking, e: int) -> Matrix:
    """Change of symplectic basis across the move: B(G)^{-1} B(G')."""
    x0 = symplectic_basis(g, m)
    x1 = symplectic_basis(whitehead_move(g, e), transport(g, m, e))
    return matmul(sp_inverse(x0), x1)


def sp_of_sequence(s: MoveSequence, m: Marking) -> Matrix:
    mm = m
    for h, step in zip(s.graphs(), s.steps):
        mm = transport(h, mm, step.edge)
    return matmul(sp_inverse(symplectic_basis(s.start, m)), symplectic_basis(s.end, mm))


def rational_symplectic(b) -> List[List[Fraction]]:
    """Symplectic basis (A_1, B_1, ...) from an ordered basis, over Q."""
    xs = [[Fraction(x) for x in v] for v in (b.vectors if isinstance(b, GeometricBasis) else b)]
    out: List[List[Fraction]] = []
    while xs:
        a = xs[0]
        idx = next((i for i in range(1, len(xs)) if intersection(a, xs[i]) != 0), None)
        if idx is None:
            raise DegenerateForm("first vector pairs trivially with all others")
        xs[1], xs[idx] = xs[idx], xs[1]
        w = intersection(a, xs[1])
        bb = [x / w for x in xs[1]]
        rest = []
        for x in xs[2:]:
            xb, xa = intersection(x, bb), intersection(x, a)
            rest.append([xi - xb * ai + xa * bi for xi, ai, bi in zip(x, a, bb)])
        out += [a, bb]
        xs = rest
    return out


def integral(vectors) -> Matrix:
    if any(x.denominator != 1 for v in vectors for x in v):
        raise ValueError("basis is not integral")
    return [[int(x) for x in v] for v in vectors]


# ---------------------------------------------------------------------------
# marked symplectic chord diagrams and elementary slide macros

# slide sequences (endpoint, direction) on one block of four ends
_PAIR_MACROS = {
    "i+": ((2, "right"),),
    "i-": ((2, "left"),),
    "ii+": ((1, "left"),),
    "ii-": ((1, "right"),),
    "iii": ((1, "right"), (3, "left")),
}
# on two adjacent blocks, pair i+1 on the left
_V_MACROS = {
    "v+": ((3, "right"), (6, "right"), (6, "left"), (2, "right"), (1, "right")),
    "v-": ((4, "left"), (1, "left"), (1, "right"), (5, "left"), (6, "left")),
}
# adjacent swap of pairs i, i+1 as a product of the macros above
_SWAP = (("iii", 0), ("iii", 0), ("v-", 0), ("iii", 0), ("iii", 1), ("v-", 0), ("iii", 0), ("iii", 1), ("v-", 0))

KINDS = ("i+", "i-", "ii+", "ii-", "iii", "iv", "v+", "v-")


def elementary_matrix(kind: str, g: int, i: int, j: Optional[int] = None) -> Matrix:
    """Basis change of a macro: the new basis is ``old @ E``."""
    n = 2 * g
    e = identity_matrix(n)
    A, B = 2 * (i - 1), 2 * (i - 1) + 1
    col = lambda c: [row[c] for row in e]  # noqa: E731
    cols = [col(c) for c in range(n)]

    def unit(k):
        return [int(r == k) for r in range(n)]

    def add(u, v, s):
        return [x + s * y for x, y in zip(u, v)]

    if kind in ("i+", "i-"):
        cols[A] = add(unit(A), unit(B), 1 if kind == "i+" else -1)
    elif kind in ("ii+", "ii-"):
        cols[B] = add(unit(B), unit(A), 1 if kind == "ii+" else -1)
    elif kind == "iii":
        cols[A], cols[B] = unit(B), [-x for x in unit(A)]
    elif kind == "iv":
        A2, B2 = 2 * (j - 1), 2 * (j - 1) + 1
        cols[A], cols[A2] = unit(A2), unit(A)
        cols[B], cols[B2] = unit(B2), unit(B)
    elif kind in ("v+", "v-"):
        s = 1 if kind == "v+" else -1
        A1, B1 = 2 * i, 2 * i + 1
        cols[A] = add(unit(A), unit(A1), s)
        cols[B1] = add(unit(B1), unit(B), -s)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return transpose(cols)


@dataclass(frozen=True)
class MarkedSymplecticDiagram:
    diagram: ChordDiagram
    marking: Marking

    @classmethod
    def standard(cls, genus: int) -> "MarkedSymplecticDiagram":
        c = symplectic_diagram(genus)
        return cls(c, reference_marking(c.graph))

    @classmethod
    def from_graph(cls, g: FatGraph, m: Marking) -> "MarkedSymplecticDiagram":
        c = chord_view(g)
        if g.canonical() != symplectic_diagram(g.genus()).graph.canonical():
            raise NotNormalForm("not the symplectic chord diagram")
        return cls(c, m)

    @property
    def genus(self) -> int:
        return self.diagram.genus

    @property
    def graph(self) -> FatGraph:
        return self.diagram.graph

    def basis(self) -> Matrix:
        """Columns A_1, B_1, ...: -H(x_1), H(x_2), ... for the greedy generators."""
        vals = generator_values(self.graph, self.marking)
        return transpose([[_sign(k + 1) * x for x in row] for k, row in enumerate(vals)])

    def coefficients(self, v: Sequence[int]) -> List[int]:
        return _solve_unimodular(self.basis(), v)


def _slide(s: MarkedSymplecticDiagram, k: int, direction: str) -> Tuple[MoveSequence, MarkedSymplecticDiagram]:
    g, m = s.graph, s.marking
    seq = MoveSequence(g)
    for e in slide_edges(s.diagram, k, direction):
        seq = seq.then(e)
        m = transport(g, m, e)
        g = seq.end
    return seq, MarkedSymplecticDiagram(chord_view(g), m)


def _run(s: MarkedSymplecticDiagram, slides, offset: int):
    seq = MoveSequence(s.graph)
    for k, d in slides:
        part, s = _slide(s, k + offset, d)
        seq = MoveSequence(seq.start, seq.steps + part.steps)
    return seq, s


def sp_elementary(s: MarkedSymplecticDiagram, kind: str, i: int, j: Optional[int] = None):
    """Slide macro realizing one of the elementary basis changes on pair ``i``.

    ``iv`` swaps pairs ``i`` and ``j``; ``v+-`` couple pairs ``i`` and ``i+1``.
    """
    g = s.genus
    if s.graph.canonical() != symplectic_diagram(g).graph.canonical():
        raise NotNormalForm("not the symplectic chord diagram")
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    if not 1 <= i <= g:
        raise IndexOutOfRange(f"pair {i} outside 1..{g}")
    if kind in _PAIR_MACROS:
        return _run(s, _PAIR_MACROS[kind], 4 * (g - i))
    if kind in _V_MACROS:
        if i + 1 > g:
            raise IndexOutOfRange(f"pair {i + 1} outside 1..{g}")
        return _run(s, _V_MACROS[kind], 4 * (g - i - 1))
    # iv: transpositions of neighbours, i.e. bubble i up to j and back
    if j is None or not 1 <= j <= g or j == i:
        raise IndexOutOfRange(f"second pair {j!r} invalid")
    lo, hi = min(i, j), max(i, j)
    path = list(range(lo, hi)) + list(range(hi - 2, lo - 1, -1))
    seq = MoveSequence(s.graph)
    for q in path:
        part, s = _adjacent_swap(s, q)
        seq = MoveSequence(seq.start, seq.steps + part.steps)
    return seq, s


def _adjacent_swap(s, q):
    seq = MoveSequence(s.graph)
    for kind, shift in _SWAP:
        part, s = sp_elementary(s, kind, q + shift)
        seq = MoveSequence(seq.start, seq.steps + part.steps)
    return seq, s


class _Driver:
    """Applies macros to a marked symplectic diagram and records the moves."""

    def __init__(self, s: MarkedSymplecticDiagram):
        self.s = s
        self.steps: list = []
        self.start = s.graph

    def apply(self, kind, i, j=None, times=1):
        for _ in range(times):
            seq, self.s = sp_elementary(self.s, kind, i, j)
            self.steps += seq.steps

    def sequence(self) -> MoveSequence:
        return MoveSequence(self.start, tuple(self.steps))

    def coef(self, v) -> List[int]:
        return self.s.coefficients(v)


def _check_primitive(v) -> None:
    if reduce(gcd, (abs(x) for x in v), 0) != 1:
        raise NotPrimitive(f"gcd of {list(v)} is not 1")


def _point(dr: _Driver, v, top: int) -> None:
    """Make B_top equal to ``v`` using only pairs 1..top."""
    _check_primitive(v)
    c = dr.coef(v)
    if any(c[2 * top:]):
        raise ValueError(f"vector leaves the span of pairs 1..{top}")

    def cd(p):
        c = dr.coef(v)
        return c[2 * p - 2], c[2 * p - 1]

    for p in range(1, top + 1):
        while True:
            a, b = cd(p)
            if a >= 0 and b >= 0:
                break
            dr.apply("iii", p)
        # Euclid on (a, b) with ii+ (a -= b) and i+ (b -= a)
        while True:
            a, b = cd(p)
            if a == 0 or b == 0:
                break
            if a >= b:
                dr.apply("ii+", p, times=a // b)
            else:
                dr.apply("i+", p, times=b // a)
        a, b = cd(p)
        if a:
            dr.apply("iii", p, times=3)  # (a, 0) -> (0, a)
    # now v = sum d_p B_p with d_p >= 0; Euclid across pairs with v-
    while True:
        ds = {p: cd(p)[1] for p in range(1, top + 1)}
        live = [p for p, d in ds.items() if d]
        if len(live) == 1:
            break
        piv = min(live, key=lambda p: (ds[p], p))
        other = max((p for p in live if p != piv), key=lambda p: (ds[p], p))
        # bring ``other`` to pair 1 and the pivot to pair 2
        if other != 1:
            if piv == 1:
                piv = other
            dr.apply("iv", other, 1)
        if piv != 2:
            dr.apply("iv", piv, 2)
        d1, d2 = cd(1)[1], cd(2)[1]
        dr.apply("v-", 1, times=d1 // d2)
    (p,) = live
    if ds[p] != 1:  # pragma: no cover - impossible for primitive v
        raise NotPrimitive(f"{list(v)} is {ds[p]} times a basis vector")
    if p != top:
        dr.apply("iv", p, top)


def point_basis(s: MarkedSymplecticDiagram, v: Sequence[int], top: Optional[int] = None):
    """Slides after which the leftmost chord of pairs 1..top carries ``v``.

    With ``top`` omitted this is the leftmost chord of the diagram (B_g).
    """
    dr = _Driver(s)
    _point(dr, list(v), top or s.genus)
    return dr.sequence(), dr.s


# composite macros changing A_p by +-A_q or +-B_q (q = p - 1) with B_p fixed
def _fix_ops(p):
    q = p - 1
    swap = [("iv", q, p)]
    out = []
    for v in ("v+", "v-"):
        core = swap + [(v, q, None)] + swap
        out.append(core)
        out.append([("iii", q, None)] + core + [("iii", q, None)] * 3)
    return out


def _ops_matrix(ops, g):
    m = identity_matrix(2 * g)
    for kind, i, j in ops:
        m = matmul(m, elementary_matrix(kind, g, i, j))
    return m


def _complete_pair(dr: _Driver, a_target, p: int) -> None:
    """With B_p already in place, make A_p equal ``a_target``."""
    g = dr.s.genus
    for q in range(p - 1, 0, -1):
        if not any(dr.coef(a_target)[2 * q - 2: 2 * q]):
            continue
        if q != p - 1:
            dr.apply("iv", q, p - 1)
        ops = [(o, _ops_matrix(o, g)) for o in _fix_ops(p)]
        while True:
            c = dr.coef(a_target)
            A, B = 2 * (p - 2), 2 * (p - 2) + 1
            if c[A] == 0 and c[B] == 0:
                break
            best = None
            for o, mat in ops:
                nc = _solve_unimodular(mat, c)
                score = abs(nc[A]) + abs(nc[B])
                if score < abs(c[A]) + abs(c[B]) and (best is None or score < best[0]):
                    best = (score, o)
            for kind, i, j in best[1]:
                dr.apply(kind, i, j)
        if q != p - 1:
            dr.apply("iv", q, p - 1)
    k = dr.coef(a_target)[2 * p - 1]
    if k > 0:
        dr.apply("i+", p, times=k)
    elif k < 0:
        dr.apply("i-", p, times=-k)


def drive_to_basis(s: MarkedSymplecticDiagram, target) -> Tuple[MoveSequence, MarkedSymplecticDiagram]:
    """Slides taking the marked diagram to one whose basis is ``target``.

    Pairs are fixed from g down to 1: first B_p by pointing, then A_p by
    clearing its components along the remaining pairs and along B_p.
    """
    dr = _Driver(s)
    g = s.genus
    cols = transpose(target)
    for p in range(g, 0, -1):
        _point(dr, cols[2 * p - 1], p)
        _complete_pair(dr, cols[2 * p - 2], p)
    return dr.sequence(), dr.s


# ---------------------------------------------------------------------------
# Lagrangians


@dataclass(frozen=True)
class Lagrangian:
    basis: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        vs = self.basis
        if not vs:
            raise NotLagrangian("empty basis")
        n = len(vs[0])
        if n != 2 * len(vs) or any(len(v) != n for v in vs):
            raise NotLagrangian(f"need {n // 2} vectors of length {n}")
        for u, v in itertools.combinations(vs, 2):
            if intersection(u, v):
                raise NotLagrangian("basis vectors pair nontrivially")
        minors = [determinant([[v[c] for c in cs] for v in vs]) for cs in itertools.combinations(range(n), len(vs))]
        if reduce(gcd, (abs(x) for x in minors), 0) != 1:
            raise NotLagrangian("span is not a direct summand of rank g")

    def contains(self, v) -> bool:
        g = len(self.basis)
        minors = lambda vs: [  # noqa: E731
            determinant([[w[c] for c in cs] for w in vs])
            for cs in itertools.combinations(range(2 * g), g + 1)
        ]
        return not any(minors(list(self.basis) + [list(v)]))


def _echelon_from_right(rows, n):
    """Integer row echelon form with pivots taken from the last column down."""
    rows = [list(r) for r in rows if any(r)]
    out = []
    for col in range(n - 1, -1, -1):
        while True:
            nz = [r for r in rows if r[col]]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            for r in nz[1:]:
                q = r[col] // piv[col]
                for k in range(n):
                    r[k] -= q * piv[k]
            rows = [r for r in rows if any(r)]
        nz = [r for r in rows if r[col]]
        if nz:
            out.append(nz[0])
            rows = [r for r in rows if r is not nz[0]]
    return out


def drive_to_lagrangian(s: MarkedSymplecticDiagram, lag: Lagrangian):
    """Slides after which the B-chords of the marked diagram span ``lag``."""
    dr = _Driver(s)
    g = s.genus
    vecs = [list(v) for v in lag.basis]
    for p in range(g, 0, -1):
        coords = [dr.coef(v)[: 2 * p] for v in vecs]
        ech = _echelon_from_right(coords, 2 * p)
        last = ech[-1]
        d = reduce(gcd, (abs(x) for x in last), 0)
        last = [x // d for x in last] + [0] * (2 * g - 2 * p)
        v = [sum(b[r][k] * last[k] for k in range(2 * g)) for r, b in [(r, dr.s.basis()) for r in range(2 * g)]]
        _point(dr, v, p)
        # keep the part of the Lagrangian inside the remaining pairs
        rest = []
        for w in vecs:
            c = dr.coef(w)
            rest.append(c[: 2 * (p - 1)] + [0] * (2 * g - 2 * (p - 1)))
        basis = dr.s.basis()
        ech = _echelon_from_right([r for r in rest], 2 * g)
        vecs = [[sum(basis[r][k] * row[k] for k in range(2 * g)) for r in range(2 * g)] for row in ech]
    return dr.sequence(), dr.s


# ---------------------------------------------------------------------------
# identity extensions


MODES = ("mc", "torelli", "lagrangian")


def _to_basepoint(g: FatGraph, m: Marking, mode: str, data) -> MoveSequence:
    path = normalize(g)
    if mode == "mc":
        return path
    mm = m
    for h, step in zip(path.graphs(), path.steps):
        mm = transport(h, mm, step.edge)
    s = MarkedSymplecticDiagram(chord_view(path.end), mm)
    if mode == "torelli":
        more, _ = drive_to_basis(s, data)
    else:
        more, _ = drive_to_lagrangian(s, data)
    return MoveSequence(g, path.steps + more.steps)


def _mode_data(mode: str, data, genus: int):
    if mode == "torelli":
        basis = data if isinstance(data, GeometricBasis) else GeometricBasis(tuple(tuple(v) for v in data))
        if basis.genus != genus:
            raise BasisNotGeometric(f"basis has genus {basis.genus}, graph has genus {genus}")
        return transpose(integral(rational_symplectic(basis)))
    if mode == "lagrangian":
        lag = data if isinstance(data, Lagrangian) else Lagrangian(tuple(tuple(v) for v in data))
        if len(lag.basis) != genus:
            raise NotLagrangian(f"Lagrangian has rank {len(lag.basis)}, need {genus}")
        return lag
    return None


def identity_loop(seq: MoveSequence, mode: str = "mc", data=None, marking: Optional[Marking] = None) -> MoveSequence:
    """Closed path at the basepoint: back from the normal form of the start,
    along ``seq``, then to the normal form of its end."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    g0 = seq.start
    info = _mode_data(mode, data, g0.genus())
    m0 = marking or geometric_marking(g0)
    mk = m0
    for h, step in zip(seq.graphs(), seq.steps):
        mk = transport(h, mk, step.edge)
    q0 = _to_basepoint(g0, m0, mode, info)
    qk = _to_basepoint(seq.end, mk, mode, info)
    return q0.inverse() + seq + qk


def identity_extension(seq: MoveSequence, mode: str = "mc", data=None, marking: Optional[Marking] = None) -> EndoMap:
    """Nielsen image of the basepoint loop built from ``seq``."""
    return nielsen_of_sequence(identity_loop(seq, mode, data, marking))
