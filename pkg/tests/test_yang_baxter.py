import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from braidloc.braid_rep import check_braid_relations, rep_from_r
from braidloc.builtins import load_matrix
from braidloc.cyclo import CycNum, zeta
from braidloc.matrix import SqMatrix, is_invertible, kron
from braidloc.yang_baxter import (
    ExceedsBound,
    Finite,
    RMatrixSpec,
    check_gybe,
    check_ybe,
    projective_order,
)
from strategies import exact_matrix, nonzero_cyc

DYE4 = load_matrix("builtin:dye4")


def swap(d: int) -> SqMatrix:
    return SqMatrix.permutation([b * d + a for a in range(d) for b in range(d)])


def test_flip_is_a_solution():
    assert check_ybe(swap(3))


def test_generic_matrix_is_not_a_solution():
    A = SqMatrix.from_entries([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1], [1, 0, 0, 1]])
    assert not check_ybe(A)


def test_spec_validates_shapes():
    with pytest.raises(ValueError):
        RMatrixSpec(3, DYE4)
    with pytest.raises(ValueError):
        RMatrixSpec(2, SqMatrix.zeros(4))
    assert RMatrixSpec.infer(DYE4).local_dim == 2


def test_gybe_for_four_by_four_with_shift_one():
    gybe, far = check_gybe(DYE4, 2, 2, 1)
    assert gybe and far


def test_projective_orders():
    assert projective_order(DYE4, 100) == Finite(4)
    assert projective_order(load_matrix("builtin:loc6"), 100) == Finite(3)
    assert projective_order(load_matrix("builtin:level2"), 100) == Finite(4)
    assert projective_order(SqMatrix.identity(3), 5) == Finite(1)
    assert projective_order(load_matrix("builtin:inf9"), 500) == ExceedsBound(500)


def test_projective_order_approx_backend_agrees():
    assert projective_order(DYE4.to_approx(), 100) == Finite(4)


@pytest.mark.parametrize("name", ["dye4", "level2", "loc6", "uqsl2_m"])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_solutions_give_braid_relations(name, n):
    R = load_matrix(f"builtin:{name}")
    assert check_ybe(R)
    assert check_braid_relations(rep_from_r(R, n))


@given(exact_matrix(2, 4))
def test_ybe_invariant_under_local_conjugation(Q):
    assume(is_invertible(Q))
    QQ = kron(Q, Q)
    conj = QQ @ DYE4 @ QQ.inverse()
    assert check_ybe(conj)


@given(nonzero_cyc(8), st.sampled_from(["dye4", "level2", "loc6"]))
def test_projective_order_ignores_scalars(c, name):
    R = load_matrix(f"builtin:{name}")
    assert projective_order(R, 50) == projective_order(R.scale(c), 50)


@given(st.integers(min_value=1, max_value=11))
def test_projective_order_ignores_roots_of_unity(k):
    c = zeta(12, k) * CycNum.sqrt_int(3)
    assert projective_order(DYE4.scale(c), 20) == Finite(4)
