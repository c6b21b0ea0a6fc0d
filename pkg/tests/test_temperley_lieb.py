from fractions import Fraction

import numpy as np
import pytest

from braidloc.builtins import load_matrix
from braidloc.cyclo import zeta
from braidloc.fusion import bratteli, sl2_level
from braidloc.matrix import SqMatrix, annihilator_check
from braidloc.temperley_lieb import (
    Infeasible,
    check_tl_relations,
    common_kernel_dim,
    jones_wenzl,
    multiplicity_solve,
    simple_dims,
    sl2_fp_dimension,
    tl_from_r,
)

LOC6 = load_matrix("builtin:loc6")
Q6 = zeta(6, -1)


@pytest.fixture(scope="module")
def tl5():
    return tl_from_r(LOC6, 5, Q6)


def test_loc6_spectrum():
    assert annihilator_check(LOC6, [-1, Q6])


def test_loop_parameter_and_relations():
    tl = tl_from_r(LOC6, 4, Q6)
    assert tl.delta_inv_sq == Fraction(1, 3)
    assert check_tl_relations(tl)


def test_level2_relations():
    tl = tl_from_r(load_matrix("builtin:level2"), 4, zeta(4))
    assert tl.delta_inv_sq == Fraction(1, 2)
    assert check_tl_relations(tl)


def test_wrong_eigenvalue_rejected():
    with pytest.raises(ValueError):
        tl_from_r(LOC6, 3, zeta(6))


def test_projector_ranks_two_ways(tl5):
    ranks = []
    for k in range(1, 6):
        p = jones_wenzl(tl5, k)
        tr = p.matrix.trace()
        assert tr.is_integer()
        ranks.append(int(tr.as_fraction()))
        assert ranks[-1] == common_kernel_dim(tl5, k)
    assert ranks == [243, 162, 81, 27, 0]


def test_projector_vanishes_first_at_level_five(tl5):
    zero = [k for k in range(2, 6) if jones_wenzl(tl5, k).matrix.is_zero()]
    assert zero == [5]


def test_level_out_of_range(tl5):
    with pytest.raises(ValueError):
        jones_wenzl(tl5, 6)


def test_fp_dimensions_at_ell_six():
    assert [sl2_fp_dimension(6, j) for j in range(5)] == [
        1, sl2_fp_dimension(6, 1), 2, sl2_fp_dimension(6, 1), 1]
    r3 = sl2_fp_dimension(6, 1)
    assert r3 * r3 == 3


def test_simple_dims_small_levels():
    assert simple_dims(6, 1) == {"V1": 1}
    assert simple_dims(6, 2) == {"V0": 1, "V2": 1}
    assert simple_dims(6, 4) == {"V0": 2, "V2": 3, "V4": 1}


@pytest.mark.parametrize("n", range(1, 10))
def test_dimension_identity(n):
    mu = multiplicity_solve(6, n, 3)
    dims = simple_dims(6, n)
    assert sum(mu[k] * dims[k] for k in dims) == 3 ** n


def test_inclusion_recursion():
    brat = bratteli(sl2_level(4), "V1", 9)
    for G, d, d_next in zip(brat.inclusions, brat.dims, brat.dims[1:]):
        assert list(G.T.dot(d)) == list(d_next)


def test_multiplicity_infeasible_cases():
    assert isinstance(multiplicity_solve(5, 4, 3), Infeasible)
    assert isinstance(multiplicity_solve(6, 3, 2), Infeasible)


def test_identity_matrix_has_trivial_tl():
    with pytest.raises(ValueError):
        tl_from_r(SqMatrix.identity(4), 3, -1)
