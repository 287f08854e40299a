import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import flip_component, movable, random_graph, random_sequence, seeded
from ptolemy.chorddiag import symplectic_diagram
from ptolemy.errors import TailMove
from ptolemy.fatgraph import MoveSequence, classify_move, from_canonical, whitehead_move
from ptolemy.freegroup import (
    GroupRingElement,
    Word,
    abelianization_matrix,
    abelianize,
    fox_derivative,
)
from ptolemy.magnus import (
    EvaluatedMagnus,
    MagnusMatrix,
    evaluate_magnus,
    magnus_of_endo,
    magnus_of_move,
    magnus_of_sequence,
    magnus_prefixes,
)
from ptolemy.marking import SL2
from ptolemy.nielsen import closed_form, nielsen_of_move, nielsen_of_sequence
from ptolemy.symplectic import determinant

S1 = symplectic_diagram(1).graph
ONE = GroupRingElement.one()
ZERO = GroupRingElement.zero()


def gen(i):
    return GroupRingElement.from_word(Word.generator(i))


def _sweep():
    for code in sorted(flip_component(1) | flip_component(2)):
        g = from_canonical(code)
        for e in movable(g):
            yield g, e


def _moved_row(m):
    rows = [i for i in range(m.size) if any(m[i, j] != (ONE if i == j else ZERO) for j in range(m.size))]
    assert len(rows) <= 1
    return rows[0] if rows else None


def test_identity_for_types_one_and_two():
    for g, e in _sweep():
        if classify_move(g, e).kind in (1, 2):
            assert magnus_of_move(g, e).is_identity()


def test_case_three_matrix():
    n = 0
    for g, e in _sweep():
        t = classify_move(g, e)
        if t.kind != 3 or not t.forward:
            continue
        m = magnus_of_move(g, e)
        w = nielsen_of_move(g, e).images
        r = _moved_row(m)
        j, i = w[r].letters
        assert i == r + 1
        for k in range(m.size):
            want = gen(j) if k == i - 1 else ONE if k == j - 1 else ZERO
            assert m[r, k] == want
        n += 1
    assert n > 0


def test_case_four_matrix():
    seen_generator = False
    for g, e in _sweep():
        t = classify_move(g, e)
        if t.kind != 4 or not t.forward:
            continue
        m = magnus_of_move(g, e)
        r = _moved_row(m)
        prefix = Word(nielsen_of_move(g, e).images[r].letters[:-1])
        if len(prefix) == 1:
            # b on a generator edge: bbar on the diagonal, d(bbar)/dx_j at column j
            j = abs(prefix.letters[0])
            dj = ONE if prefix.letters[0] > 0 else -GroupRingElement.from_word(prefix)
            seen_generator = True
            for k in range(m.size):
                want = GroupRingElement.from_word(prefix) if k == r else dj if k == j - 1 else ZERO
                assert m[r, k] == want
        for k in range(m.size):
            want = fox_derivative(prefix, k + 1, m.size)
            if k == r:
                want = want + GroupRingElement.from_word(prefix)
            assert m[r, k] == want
    assert seen_generator


def test_case_five_and_six_rows_are_fox_gradients():
    kinds = set()
    for g, e in _sweep():
        t = classify_move(g, e)
        if t.kind not in (5, 6) or not t.forward:
            continue
        phi = closed_form(g, e)
        m = magnus_of_move(g, e)
        for i, w in enumerate(phi.images):
            for k in range(m.size):
                assert m[i, k] == fox_derivative(w, k + 1, m.size)
        kinds.add(t.kind)
    assert kinds == {5, 6}


def test_tail_rejected():
    with pytest.raises(TailMove):
        magnus_of_move(S1, S1.tail)


def test_empty_sequence_is_identity():
    assert magnus_of_sequence(MoveSequence(S1)).is_identity()
    assert magnus_of_sequence(MoveSequence(S1), "abelianized").is_identity()
    with pytest.raises(ValueError):
        magnus_of_sequence(MoveSequence(S1), "weird")


@given(st.integers(1, 2), st.integers(0, 10 ** 6))
def test_chain_rule_matches_jacobian(genus, seed):
    rng = seeded(seed)
    s = random_sequence(random_graph(genus, rng), rng, 5)
    phi = nielsen_of_sequence(s)
    assert magnus_of_sequence(s) == magnus_of_endo(phi)
    assert magnus_of_sequence(s, "abelianized") == magnus_of_endo(phi, "abelianized")
    pre = magnus_prefixes(s)
    assert len(pre) == len(s) + 1 and pre[-1] == magnus_of_sequence(s)


@given(st.integers(1, 2), st.integers(0, 10 ** 6))
def test_inverse_product_is_identity(genus, seed):
    rng = seeded(seed)
    s = random_sequence(random_graph(genus, rng), rng, 4)
    phi = nielsen_of_sequence(s)
    back = s.inverse()
    assert (magnus_of_sequence(s) * magnus_of_sequence(back).substitute(phi)).is_identity()
    assert magnus_of_sequence(s + back).is_identity()


@given(st.integers(1, 2), st.integers(0, 10 ** 6))
def test_augmentation_is_abelianization(genus, seed):
    rng = seeded(seed)
    s = random_sequence(random_graph(genus, rng), rng, 4)
    m = magnus_of_sequence(s)
    a = m.augmentation()
    phi = nielsen_of_sequence(s)
    ab = abelianization_matrix(phi)
    assert a == ab
    assert determinant(a) in (1, -1)
    assert m.abelianized() == magnus_of_sequence(s, "abelianized")
    assert m.abelianized().augmentation() == a


def test_stacked_disjoint_type_three_moves():
    for seed in range(200):
        g = random_graph(2, seeded(seed))
        for e in movable(g):
            t = classify_move(g, e)
            if t.kind != 3 or not t.forward:
                continue
            h = whitehead_move(g, e)
            for f in movable(h):
                u = classify_move(h, f)
                if u.kind == 3 and u.forward and f != e:
                    s = MoveSequence.from_edges(g, [e, f])
                    m1, m2 = magnus_of_move(g, e), magnus_of_move(h, f)
                    assert magnus_of_sequence(s) == m2.substitute(nielsen_of_move(g, e)) * m1
                    assert magnus_of_sequence(s) == magnus_of_endo(nielsen_of_sequence(s))
                    return
    pytest.fail("no stacked type-3 pair found")


def test_abelianized_loop_at_genus_one():
    g = S1
    es = movable(g)
    s = MoveSequence.from_edges(g, [es[0], es[1], es[0], es[1], es[0]])
    m = magnus_of_sequence(s, "abelianized")
    phi = nielsen_of_sequence(s)
    assert m == magnus_of_endo(phi).abelianized()
    assert all(abelianize(x, 2).augmentation() == y for row, ar in zip(magnus_of_endo(phi).entries, m.augmentation())
               for x, y in zip(row, ar))


@given(st.integers(1, 2), st.integers(0, 10 ** 6))
def test_evaluated_magnus_agrees(genus, seed):
    rng = seeded(seed)
    s = random_sequence(random_graph(genus, rng), rng, 6)
    grp = SL2()
    base = [grp.random_element(rng) for _ in range(2 * genus)]
    ev = EvaluatedMagnus(grp, base)
    for g, step in zip(s.graphs(), s.steps):
        ev.push(nielsen_of_move(g, step.edge))
        assert not ev.fundamental_defect(base)
    assert ev.matrix == evaluate_magnus(magnus_of_sequence(s), grp, base)


def test_matrix_json_and_identity():
    m = MagnusMatrix.identity(2)
    assert m.to_json() == [["1:", ""], ["", "1:"]]
    assert MagnusMatrix.identity(2, "abelianized").to_json() == [["1", "0"], ["0", "1"]]
    assert (m * m).is_identity()
    assert MagnusMatrix.identity(2, "abelianized").is_identity()
