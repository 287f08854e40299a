import functools
import random
import sys

from hypothesis import HealthCheck, settings

from ptolemy.chorddiag import symplectic_diagram
from ptolemy.errors import PtolemyError
from ptolemy.fatgraph import FatGraph, MoveSequence, from_canonical, validate, whitehead_move

settings.register_profile(
    "repo",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile("repo")


def movable(g):
    return [e for e, _ in g.edges() if e != g.tail_edge]


def random_graph(genus, rng, steps=None):
    """Random bordered trivalent fatgraph: a walk away from the symplectic diagram."""
    g = symplectic_diagram(genus).graph
    for _ in range(steps if steps is not None else 12 * genus + rng.randrange(8)):
        g = whitehead_move(g, rng.choice(movable(g)))
    return g


def random_sequence(g, rng, length):
    s = MoveSequence(g)
    for _ in range(length):
        s = s.then(rng.choice(movable(s.end)))
    return s


def _pairings(items):
    if not items:
        yield []
        return
    a, rest = items[0], items[1:]
    for k, b in enumerate(rest):
        for p in _pairings(rest[:k] + rest[k + 1:]):
            yield [(a, b)] + p


@functools.lru_cache(maxsize=None)
def genus_one_codes():
    """Canonical codes of all genus-1 bordered trivalent fatgraphs, by brute
    force over every edge pairing of three trivalent vertices and a tail."""
    verts = [(1, 2, 3), (4, 5, 6), (7, 8, 9), (10,)]
    codes = set()
    for pairing in _pairings(list(range(1, 11))):
        g = FatGraph(verts, pairing, [b if a == 10 else a for a, b in pairing if 10 in (a, b)][0])
        try:
            rep = validate(g)
        except PtolemyError:
            continue
        if rep.bordered and rep.genus == 1 and rep.trivalent:
            codes.add(g.canonical())
    return frozenset(codes)


@functools.lru_cache(maxsize=None)
def flip_component(genus):
    start = symplectic_diagram(genus).graph.canonical()
    seen = {start}
    todo = [start]
    while todo:
        g = from_canonical(todo.pop())
        for e in movable(g):
            c = whitehead_move(g, e).canonical()
            if c not in seen:
                seen.add(c)
                todo.append(c)
    return frozenset(seen)


def genus_one_graphs():
    return [from_canonical(c) for c in sorted(genus_one_codes())]


def seeded(seed):
    return random.Random(seed)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for k in sorted(results):
            terminalreporter.write_line(results[k])
