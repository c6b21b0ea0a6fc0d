import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from braidloc.cyclo import (
    CycNum,
    euler_phi,
    format_literal,
    parse_literal,
    quantum_integer,
    root_of_unity_exponent,
    root_of_unity_order,
    zeta,
)
from strategies import cyc_in, nonzero_cyc


def close(a: complex, b: complex, tol: float = 1e-10) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


# ---- oracles --------------------------------------------------------------

def test_euler_phi_small_values():
    assert [euler_phi(m) for m in range(1, 13)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]


def test_zeta_matches_exponential():
    for m in (3, 5, 8, 12, 24):
        for k in range(m):
            assert close(complex(zeta(m, k)), cmath.exp(2j * math.pi * k / m))


def test_rational_in_cyclotomic_basis_descends_to_conductor_one():
    x = CycNum(12, [Fraction(7, 3)])
    assert x.m == 1 and x.is_rational() and x.as_fraction() == Fraction(7, 3)


def test_sum_of_primitive_cube_roots_is_minus_one():
    assert zeta(3, 1) + zeta(3, 2) == -1


def test_conductor_minimization_of_i_squared():
    i = zeta(4)
    assert (i * i).m == 1
    assert zeta(8, 2) == i


@pytest.mark.parametrize("n", [2, 3, 5, 6, 7, 8, 12, 24])
def test_sqrt_int_squares_back(n):
    r = CycNum.sqrt_int(n)
    assert r * r == n
    assert close(complex(r), math.sqrt(n))


def test_sqrt_int_rejects_nonpositive():
    with pytest.raises(ValueError):
        CycNum.sqrt_int(0)


def test_inverse_and_division():
    x = zeta(5) + 2
    assert x * x.inv() == 1
    assert (3 / x) * x == 3
    with pytest.raises(ZeroDivisionError):
        CycNum.rational(0).inv()


def test_root_of_unity_detection():
    assert root_of_unity_order(zeta(12, 5)) == 12
    assert root_of_unity_order(-zeta(3)) == 6
    assert root_of_unity_order(CycNum.rational(2), limit=100) is None
    assert root_of_unity_exponent(zeta(12, 5)) == (12, 5)


def test_quantum_integers_at_twelfth_root():
    q = zeta(12)
    assert quantum_integer(1, q) == 1
    assert quantum_integer(2, q) == CycNum.sqrt_int(3)
    assert quantum_integer(3, q) == 2
    assert quantum_integer(6, q) == 0


def test_literal_round_trip_and_variables():
    x = parse_literal("1/2+2*z3^1")
    assert x == Fraction(1, 2) + 2 * zeta(3)
    assert parse_literal(format_literal(x)) == x
    q = zeta(16)
    assert parse_literal("q-1", {"q": q}) == q - 1


# ---- properties -----------------------------------------------------------

@given(cyc_in(24), cyc_in(24), cyc_in(24))
def test_field_axioms_in_q_zeta24(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert (x * y).conj() == x.conj() * y.conj()
    assert (x * y).abs2() == x.abs2() * y.abs2()
    assert x + y == y + x and x * y == y * x


@given(nonzero_cyc(24))
def test_inverse_property(x):
    assert x * x.inv() == 1


conductors = st.sampled_from([1, 3, 4, 5, 7, 8, 9, 12, 15, 20, 24, 40, 60, 105, 120])


@given(st.data())
def test_complex_embedding_is_ring_homomorphism(data):
    m1, m2 = data.draw(conductors), data.draw(conductors)
    x, y = data.draw(cyc_in(m1)), data.draw(cyc_in(m2))
    assert close(complex(x + y), complex(x) + complex(y))
    assert close(complex(x * y), complex(x) * complex(y))
    assert close(complex(x.conj()), complex(x).conjugate())
