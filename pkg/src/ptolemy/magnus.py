"""Magnus matrices of Whitehead moves: Fox Jacobians of their Nielsen maps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

from .fatgraph import FatGraph, MoveSequence
from .freegroup import (
    EndoMap,
    GroupRingElement,
    LaurentElement,
    abelianization_matrix,
    abelianize,
    compose_endos,
    format_group_ring,
    format_laurent,
    fox_jacobian,
)
from .nielsen import nielsen_of_move

MODES = ("free", "abelianized")


@dataclass(frozen=True)
class MagnusMatrix:
    entries: Tuple[Tuple[object, ...], ...]
    mode: str = "free"

    @property
    def size(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def _zero(self):
        return GroupRingElement.zero() if self.mode == "free" else LaurentElement.zero(self.size)

    def _one(self):
        return GroupRingElement.one() if self.mode == "free" else LaurentElement.one(self.size)

    def __mul__(self, other: "MagnusMatrix") -> "MagnusMatrix":
        n = self.size
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = self._zero()
                for k in range(n):
                    a = self.entries[i][k]
                    if a:
                        b = other.entries[k][j]
                        if b:
                            acc = acc + a * b
                row.append(acc)
            rows.append(tuple(row))
        return MagnusMatrix(tuple(rows), self.mode)

    def substitute(self, phi: EndoMap) -> "MagnusMatrix":
        """Apply ``phi`` to every entry (through its abelianization if needed)."""
        if self.mode == "free":
            f = lambda x: x.substitute(phi)  # noqa: E731
        else:
            mat = abelianization_matrix(phi)
            f = lambda x: x.substitute(mat)  # noqa: E731
        return MagnusMatrix(tuple(tuple(f(x) for x in row) for row in self.entries), self.mode)

    def is_identity(self) -> bool:
        one, zero = self._one(), self._zero()
        return all(
            x == (one if i == j else zero)
            for i, row in enumerate(self.entries)
            for j, x in enumerate(row)
        )

    def augmentation(self) -> List[List[int]]:
        return [[x.augmentation() for x in row] for row in self.entries]

    def abelianized(self) -> "MagnusMatrix":
        if self.mode != "free":
            return self
        n = self.size
        return MagnusMatrix(tuple(tuple(abelianize(x, n) for x in row) for row in self.entries), "abelianized")

    def to_json(self) -> List[List[str]]:
        fmt = format_group_ring if self.mode == "free" else format_laurent
        return [[fmt(x) for x in row] for row in self.entries]

    @classmethod
    def identity(cls, n: int, mode: str = "free") -> "MagnusMatrix":
        if mode == "free":
            one, zero = GroupRingElement.one(), GroupRingElement.zero()
        else:
            one, zero = LaurentElement.one(n), LaurentElement.zero(n)
        return cls(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)), mode)


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")


def magnus_of_endo(phi: EndoMap, mode: str = "free") -> MagnusMatrix:
    _check_mode(mode)
    m = MagnusMatrix(tuple(tuple(row) for row in fox_jacobian(phi)), "free")
    return m if mode == "free" else m.abelianized()


def magnus_of_move(g: FatGraph, e: int, mode: str = "free") -> MagnusMatrix:
    return magnus_of_endo(nielsen_of_move(g, e), mode)


def magnus_of_sequence(s: MoveSequence, mode: str = "free") -> MagnusMatrix:
    """Chain rule: M(s then W) = N(s)[M(W)] * M(s)."""
    _check_mode(mode)
    n = 2 * s.start.genus()
    acc_endo = EndoMap.identity(n)
    acc = MagnusMatrix.identity(n, mode)
    for g, step in zip(s.graphs(), s.steps):
        phi = nielsen_of_move(g, step.edge)
        acc = magnus_of_endo(phi, mode).substitute(acc_endo) * acc
        acc_endo = compose_endos(acc_endo, phi)
    return acc


def magnus_prefixes(s: MoveSequence, mode: str = "free") -> List[MagnusMatrix]:
    """Magnus matrix of every prefix of ``s`` (the empty prefix first)."""
    _check_mode(mode)
    n = 2 * s.start.genus()
    acc_endo = EndoMap.identity(n)
    out = [MagnusMatrix.identity(n, mode)]
    for g, step in zip(s.graphs(), s.steps):
        phi = nielsen_of_move(g, step.edge)
        out.append(magnus_of_endo(phi, mode).substitute(acc_endo) * out[-1])
        acc_endo = compose_endos(acc_endo, phi)
    return out


# ---------------------------------------------------------------------------
# evaluation in SL(2, F_p)
#
# Long walks make the free-group entries explode, so along them we push
# everything through a representation rho: F -> SL(2, F_p), extended
# linearly to the group ring.  A Magnus matrix becomes a 2n x 2n matrix of
# residues, one 2 x 2 block per entry.


def evaluate_ring(x: GroupRingElement, group, images) -> Tuple[int, int, int, int]:
    p = group.p
    out = [0, 0, 0, 0]
    for w, c in x.terms.items():
        v = group.evaluate(w, images)
        for k in range(4):
            out[k] = (out[k] + c * v[k]) % p
    return tuple(out)


def evaluate_magnus(m: MagnusMatrix, group, images) -> List[List[int]]:
    if m.mode != "free":
        raise ValueError("only free-mode matrices can be evaluated")
    n = m.size
    out = [[0] * (2 * n) for _ in range(2 * n)]
    for i, row in enumerate(m.entries):
        for j, x in enumerate(row):
            a, b, c, d = evaluate_ring(x, group, images)
            out[2 * i][2 * j], out[2 * i][2 * j + 1] = a, b
            out[2 * i + 1][2 * j], out[2 * i + 1][2 * j + 1] = c, d
    return out


def matmul_mod(a, b, p: int) -> List[List[int]]:
    return [[sum(x * y for x, y in zip(row, col)) % p for col in zip(*b)] for row in a]


def identity_mod(n: int) -> List[List[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


class EvaluatedMagnus:
    """Magnus matrix of a growing sequence, evaluated under ``rho``.

    ``images`` gives rho on the generators of the first graph.  After each
    step ``current`` holds rho of the current generators, i.e. of the
    composed Nielsen map, and ``matrix`` the evaluated chain-rule product.
    """

    def __init__(self, group, images):
        self.group = group
        self.current = list(images)
        self.matrix = identity_mod(2 * len(images))

    def push(self, phi: EndoMap) -> None:
        step = evaluate_magnus(magnus_of_endo(phi), self.group, self.current)
        self.matrix = matmul_mod(step, self.matrix, self.group.p)
        self.current = [self.group.evaluate(w, self.current) for w in phi.images]

    def fundamental_defect(self, base) -> bool:
        """True when sum_j M_ij (rho x_j - 1) = rho(phi x_i) - 1 fails for some i."""
        p = self.group.p
        n = len(base)
        for i in range(n):
            acc = [[0, 0], [0, 0]]
            for j in range(n):
                a, b, c, d = base[j]
                xm = ((a - 1) % p, b, c, (d - 1) % p)
                blk = [self.matrix[2 * i + r][2 * j: 2 * j + 2] for r in (0, 1)]
                prod = matmul_mod(blk, [[xm[0], xm[1]], [xm[2], xm[3]]], p)
                acc = [[(acc[r][s] + prod[r][s]) % p for s in (0, 1)] for r in (0, 1)]
            a, b, c, d = self.current[i]
            if acc != [[(a - 1) % p, b % p], [c % p, (d - 1) % p]]:
                return True
        return False
