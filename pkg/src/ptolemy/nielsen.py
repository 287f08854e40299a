"""Greedy generators and the Nielsen representation of Whitehead moves."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Optional, Tuple

from .errors import NonComposable
from .fatgraph import FatGraph, MoveSequence, move_configuration, require_bordered, whitehead_move
from .freegroup import EndoMap, Word, compose_endos
from .marking import FREE, Marking, solve_marking, transport


@dataclass(frozen=True)
class GreedyTree:
    tree_edges: FrozenSet[int]
    generators: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.generators)

    def index(self, d: int) -> Optional[int]:
        """Signed letter of ``d`` if it lies on a generator edge, else None."""
        return self._letters.get(d)

    @property
    def _letters(self) -> Dict[int, int]:
        try:
            return self.__dict__["_letter_cache"]
        except KeyError:
            out = {x: i for i, x in enumerate(self.generators, 1)}
            object.__setattr__(self, "_letter_cache", out)
            return out


def greedy(g: FatGraph) -> GreedyTree:
    """Keep an edge iff its earlier dart is the first arrival at its head."""
    require_bordered(g, trivalent=False)
    first: Dict[int, int] = {}
    for d in g.boundary_sequence():
        first.setdefault(g.head(d), d)
    tree = frozenset(g.edge_of(d) for d in first.values())
    gens = tuple(
        d for d in g.boundary_sequence() if g.preferred(d) == d and g.edge_of(d) not in tree
    )
    return GreedyTree(tree, gens)


def marking_from_generators(g: FatGraph, tree: Optional[GreedyTree] = None) -> Marking:
    """The free marking giving the i-th greedy generator the letter ``i``."""
    tree = tree or greedy(g)
    known = {x: Word.generator(i) for i, x in enumerate(tree.generators, 1)}
    return solve_marking(g, tree.tree_edges, known, FREE)


def express(g: FatGraph, tree: Optional[GreedyTree], d: int) -> Word:
    return marking_from_generators(g, tree)[d]


def boundary_word(g: FatGraph) -> Word:
    """Value of the tail dart under the greedy marking."""
    return marking_from_generators(g)[g.tail]


def nielsen_of_move(g: FatGraph, e: int, check: bool = False) -> EndoMap:
    """New generators written in old letters, via marking transport.

    With ``check`` the result is compared against the closed form for the
    move's kind and an ``AssertionError`` raised on disagreement.
    """
    m = marking_from_generators(g)
    g2 = whitehead_move(g, e)
    m2 = transport(g, m, e)
    phi = EndoMap([m2[x] for x in greedy(g2).generators])
    if check:
        cf = closed_form(g, e)
        if cf is not None:
            assert cf == phi, f"closed form {cf} != transport {phi}"
        else:
            back = closed_form(g2, e)
            assert compose_endos(phi, back).is_identity(), f"inverse closed form fails for {phi}"
    return phi


def closed_form(g: FatGraph, e: int) -> Optional[EndoMap]:
    """Case-by-case formula for forward moves (None for inverse moves).

    Darts ``alpha[0..3]`` point into the collapsed vertex in counterclockwise
    order with the first-visited corner between ``alpha[0]`` and ``alpha[1]``.
    """
    cfg = move_configuration(g, e)
    if not cfg.type.forward:
        return None
    tree = greedy(g)
    n = tree.rank
    m = marking_from_generators(g, tree)
    gens = list(Word.generator(k) for k in range(1, n + 1))
    kind = cfg.type.kind
    al = cfg.alpha

    def gen_index(d):
        return tree.index(d) or tree.index(g.inv[d])

    if kind in (1, 2):
        return EndoMap(gens)
    if kind == 3:
        i, j = gen_index(al[3]), gen_index(al[2])
        gens[i - 1] = Word.generator(j) * Word.generator(i)
        return EndoMap(gens)
    if kind == 4:
        i = gen_index(cfg.edge)
        gens[i - 1] = ~m[al[2]] * Word.generator(i)
        return EndoMap(gens)
    # kinds 5 and 6: the generator on alpha[2] leaves, the move edge joins at j
    i = gen_index(al[2])
    g2 = whitehead_move(g, e)
    j = greedy(g2).index(cfg.edge) or greedy(g2).index(g.inv[cfg.edge])
    out = list(gens)
    for k in range(i, j):
        out[k - 1] = gens[k]
    xi = Word.generator(i)
    if kind == 5:
        out[j - 1] = m[g.inv[al[3]]] * ~xi
    else:
        out[j - 1] = xi * m[al[3]]
    return EndoMap(out)


def nielsen_of_sequence(s: MoveSequence) -> EndoMap:
    """N(W_1 then W_2) = N(W_2) o N(W_1), accumulated by substitution."""
    graphs = s.graphs()
    acc = EndoMap.identity(2 * s.start.genus())
    for step, g in zip(s.steps, graphs):
        acc = compose_endos(acc, nielsen_of_move(g, step.edge))
    return acc


def check_composable(s: MoveSequence) -> None:
    g = s.start
    for step in s.steps:
        if whitehead_move(g, step.edge) != step.result:
            raise NonComposable(f"step on edge {step.edge} does not follow")
        g = step.result
