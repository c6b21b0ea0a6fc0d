import pytest
from hypothesis import given
from hypothesis import strategies as st

from braidloc.braid_rep import (
    EXCEEDS,
    FINITE,
    BraidWord,
    RepSpec,
    central_split,
    check_braid_relations,
    eval_word,
    full_twist,
    probe_image,
    rep_from_r,
    restrict,
)
from braidloc.builtins import load_matrix
from braidloc.cyclo import zeta
from braidloc.matrix import SqMatrix
from strategies import nonzero_cyc

LEVEL2 = load_matrix("builtin:level2")
REP3 = rep_from_r(LEVEL2, 3)


def words(n: int, max_len: int = 6):
    letters = st.sampled_from([x for i in range(1, n) for x in (i, -i)])
    return st.lists(letters, max_size=max_len).map(lambda ls: BraidWord(n, tuple(ls)))


def test_word_parsing_and_validation():
    assert BraidWord.parse(3, "1 2 −1").letters == (1, 2, -1)
    with pytest.raises(ValueError):
        BraidWord(3, (3,))
    with pytest.raises(ValueError):
        BraidWord(3, (0,))
    assert BraidWord(3, (1, -2)).inverse().letters == (2, -1)


def test_full_twist_is_central():
    Z = eval_word(REP3, full_twist(3))
    for g in REP3.generators:
        assert Z @ g == g @ Z


def test_probe_regression_orders():
    assert probe_image(rep_from_r(LEVEL2, 2), 1000) == probe_image(rep_from_r(LEVEL2, 2), 1000)
    assert probe_image(rep_from_r(LEVEL2, 2), 1000).order == 4
    assert probe_image(REP3, 1000).order == 24
    assert probe_image(rep_from_r(LEVEL2, 4), 1000).order == 192
    loc6 = load_matrix("builtin:loc6")
    assert probe_image(rep_from_r(loc6, 2), 1000).order == 3
    assert probe_image(rep_from_r(loc6, 3), 1000).order == 24
    assert probe_image(rep_from_r(load_matrix("builtin:dye4"), 3), 1000).order == 24


@pytest.mark.parametrize("n", [2, 3])
def test_level2_image_is_finite(n):
    assert probe_image(rep_from_r(LEVEL2, n), 10_000).status == FINITE


def test_modular_screen_agrees_with_plain_bfs():
    a = probe_image(REP3, 1000, modular_screen=True)
    b = probe_image(REP3, 1000, modular_screen=False)
    assert a.order == b.order == 24


def test_bound_reports_exceeds():
    res = probe_image(REP3, 10)
    assert res.status == EXCEEDS and res.order is None


def test_probe_rejects_approx():
    rep = rep_from_r(LEVEL2.to_approx(), 2, check=False)
    with pytest.raises(ValueError):
        probe_image(rep, 10)


def test_restrict_and_central_split():
    rep = rep_from_r(load_matrix("builtin:dye4"), 2)
    Z = eval_word(rep, full_twist(2))
    # R = (I + J)/sqrt2 with J^2 = -I, so the full twist R^2 is J and R is
    # scalar on each of its eigenspaces
    pieces = central_split(rep, Z, [zeta(4), -zeta(4)])
    assert [p.dim for p in pieces] == [2, 2]
    for piece in pieces:
        assert probe_image(piece, 100).order == 1
    with pytest.raises(ValueError):
        central_split(rep, Z, [zeta(4)])
    with pytest.raises(ValueError):
        central_split(rep, Z, [zeta(4), zeta(4), -zeta(4)])
    with pytest.raises(ValueError):
        restrict(rep, SqMatrix.zeros(rep.dim))


def test_rep_spec_validation():
    with pytest.raises(ValueError):
        RepSpec(3, [SqMatrix.identity(2)])


@given(words(3), words(3))
def test_eval_is_a_homomorphism(w1, w2):
    assert eval_word(REP3, w1 * w2) == eval_word(REP3, w1) @ eval_word(REP3, w2)


@given(words(3))
def test_word_times_inverse_is_identity(w):
    assert eval_word(REP3, w * w.inverse()).is_identity()


@given(st.permutations([0, 1]), nonzero_cyc(8), st.integers(min_value=0, max_value=1))
def test_probe_invariant_under_order_and_scaling(perm, c, which):
    gens = [REP3.generators[k] for k in perm]
    gens[which] = gens[which].scale(c)
    assert probe_image(RepSpec(3, gens), 1000).order == 24


@given(words(4, 4))
def test_braid_relations_hold_on_words(w):
    rep = rep_from_r(LEVEL2, 4)
    assert check_braid_relations(rep)
    s1s2s1 = BraidWord(4, (1, 2, 1))
    s2s1s2 = BraidWord(4, (2, 1, 2))
    assert eval_word(rep, w * s1s2s1) == eval_word(rep, w * s2s1s2)
