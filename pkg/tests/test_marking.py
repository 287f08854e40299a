import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import movable, random_graph, seeded
from ptolemy.chorddiag import symplectic_diagram
from ptolemy.errors import MarkingInvalid, ParseError, TailMove
from ptolemy.fatgraph import isomorphism, move_configuration, whitehead_move
from ptolemy.freegroup import Word, abelianize_word
from ptolemy.marking import (
    SL2,
    Lattice,
    Marking,
    format_marking,
    h_marking,
    intersection,
    lattice_index,
    parse_marking,
    skew_pairing,
    transport,
    verify,
)
from ptolemy.nielsen import greedy, marking_from_generators
from ptolemy.symplectic import geometric_marking, reference_marking

S1 = symplectic_diagram(1).graph

cases = st.tuples(st.integers(1, 3), st.integers(0, 10 ** 6)).map(lambda a: random_graph(a[0], seeded(a[1])))


def test_standard_marking_of_s1():
    m = reference_marking(S1)
    for level in ("edge_vertex", "surjective", "h_geometric"):
        assert verify(S1, m, level).ok
    gens = greedy(S1).generators
    assert [m[x] for x in gens] == [(-1, 0), (0, 1)]
    pi = marking_from_generators(S1)
    assert verify(S1, pi, "surjective").ok


def test_negated_value_breaks_edge_condition():
    m = reference_marking(S1)
    x = greedy(S1).generators[0]
    bad = Marking(m.group, {**m.values, x: tuple(-v for v in m[x])})
    r = verify(S1, bad)
    assert S1.edge_of(x) in r.edge_failures and not r.ok
    assert any("edge" in v for v in r.violations())


def test_verify_rejects_partial_marking():
    m = reference_marking(S1)
    vals = dict(m.values)
    vals.pop(S1.tail)
    with pytest.raises(MarkingInvalid):
        verify(S1, Marking(m.group, vals))


def test_non_spanning_marking():
    m = reference_marking(S1).mapped(Lattice(2), lambda v: tuple(2 * x for x in v))
    r = verify(S1, m, "surjective")
    assert r.surjective is False and not r.ok


def test_lattice_index():
    assert lattice_index([(1, 0), (0, 1)], 2) == 1
    assert lattice_index([(2, 0), (0, 3), (4, 3)], 2) == 6
    assert lattice_index([(1, 1), (2, 2)], 2) == 0


def test_skew_pairing_table_on_s1():
    ds = S1.darts
    for x in ds:
        assert skew_pairing(S1, x, x) == 0
        assert skew_pairing(S1, x, S1.inv[x]) == 0
        for y in ds:
            assert skew_pairing(S1, x, y) == -skew_pairing(S1, y, x)
    m = reference_marking(S1)
    a, b = greedy(S1).generators
    assert skew_pairing(S1, a, b) == intersection(m[a], m[b]) == -1


@given(cases)
def test_geometric_markings_are_h_geometric(g):
    m = geometric_marking(g)
    r = verify(g, m, "h_geometric")
    assert r.ok, r.violations()


@given(cases, st.data())
def test_transport_preserves_conditions(g, data):
    e = data.draw(st.sampled_from(movable(g)))
    h = whitehead_move(g, e)
    for m in (marking_from_generators(g), geometric_marking(g)):
        m2 = transport(g, m, e)
        level = "h_geometric" if m.is_h else "surjective"
        assert verify(h, m2, level).ok
        changed = {d for d in g.darts if m[d] != m2[d]}
        assert changed <= {e, g.inv[e]}
        # moving twice flips the move edge's darts; compare through the isomorphism
        back = whitehead_move(h, e)
        assert transport(h, m2, e).relabeled(isomorphism(back, g)) == m
        assert m2[g.tail] == m[g.tail]


@given(cases, st.data())
def test_transport_commutes_with_abelianization(g, data):
    e = data.draw(st.sampled_from(movable(g)))
    n = 2 * g.genus()
    m = marking_from_generators(g)
    assert transport(g, m, e).abelianized(n) == transport(g, m.abelianized(n), e)


@given(cases, st.data(), st.integers(0, 10 ** 6))
def test_transport_in_sl2(g, data, seed):
    e = data.draw(st.sampled_from(movable(g)))
    grp = SL2()
    rng = seeded(seed)
    imgs = [grp.random_element(rng) for _ in range(2 * g.genus())]
    m = marking_from_generators(g)
    ev = m.mapped(grp, lambda w: grp.evaluate(w, imgs))
    assert verify(g, ev).ok
    lhs = transport(g, ev, e)
    rhs = transport(g, m, e).mapped(grp, lambda w: grp.evaluate(w, imgs))
    assert lhs == rhs


def test_type_one_keeps_values():
    for seed in range(100):
        g = random_graph(2, seeded(seed))
        for e in movable(g):
            t = move_configuration(g, e).type
            if t.kind == 1:
                m = marking_from_generators(g)
                h = whitehead_move(g, e)
                m2 = transport(g, m, e)
                assert [m2[x] for x in greedy(h).generators] == [m[x] for x in greedy(g).generators]
                return
    pytest.fail("no kind-1 move found")


def test_transport_rejects_tail():
    with pytest.raises(TailMove):
        transport(S1, reference_marking(S1), S1.tail)


@given(cases)
def test_marking_text_round_trip(g):
    pi = marking_from_generators(g)
    assert parse_marking(format_marking(pi), "pi1") == pi
    h = geometric_marking(g)
    assert parse_marking(format_marking(h), "h") == h


def test_marking_parse_errors():
    with pytest.raises(ParseError):
        parse_marking("1: 1 2\nx: 3\n", "h")
    with pytest.raises(ParseError):
        parse_marking("1: 1 2\n2: 1\n", "h")
    with pytest.raises(ParseError):
        parse_marking("1: 1\n1: 2\n", "pi1")
    with pytest.raises(ValueError):
        parse_marking("1: 1\n", "weird")


def test_h_marking_constructor():
    m = h_marking({1: [1, 0], 2: [-1, 0]})
    assert m.is_h and not m.is_pi1 and m.group == Lattice(2)
    with pytest.raises(MarkingInvalid):
        m.abelianized(2)
    pi = Marking(marking_from_generators(S1).group, {1: Word([1, 2])})
    assert pi.abelianized(2)[1] == abelianize_word(Word([1, 2]), 2)
