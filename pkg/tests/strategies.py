"""Hypothesis strategies shared by the property tests."""
from fractions import Fraction

from hypothesis import strategies as st

from braidloc.cyclo import CycNum, euler_phi
from braidloc.matrix import SqMatrix

small_ints = st.integers(min_value=-5, max_value=5)


@st.composite
def cyc_in(draw, m: int) -> CycNum:
    """Element of Q(zeta_m) with small coefficients in the power basis."""
    phi = euler_phi(m)
    coeffs = draw(st.lists(small_ints, min_size=phi, max_size=phi))
    den = draw(st.integers(min_value=1, max_value=4))
    return CycNum._from_field(m, [Fraction(c, den) for c in coeffs])


@st.composite
def exact_matrix(draw, n: int, m: int = 4) -> SqMatrix:
    rows = [[draw(cyc_in(m)) for _ in range(n)] for _ in range(n)]
    return SqMatrix.from_entries(rows, "exact")


@st.composite
def nonzero_cyc(draw, m: int) -> CycNum:
    x = draw(cyc_in(m))
    return x if not x.is_zero() else CycNum.rational(1)
