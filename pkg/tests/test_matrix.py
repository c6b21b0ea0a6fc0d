import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from braidloc.cyclo import CycNum, zeta
from braidloc.matrix import (
    APPROX,
    EXACT,
    BackendMismatch,
    SqMatrix,
    amplify,
    annihilator_check,
    is_invertible,
    is_unitary,
    kron,
    kron_all,
    mod_image,
    place,
    spectrum_multiplicities,
    split_prime,
)
from strategies import exact_matrix


def naive_kron(A: SqMatrix, B: SqMatrix) -> SqMatrix:
    """Quadruple loop: (A (x) B)[i*q+k, j*q+l] = A[i,j] B[k,l]."""
    p, q = A.dim, B.dim
    rows = [[None] * (p * q) for _ in range(p * q)]
    for i in range(p):
        for j in range(p):
            for k in range(q):
                for l in range(q):
                    rows[i * q + k][j * q + l] = A.entry(i, j) * B.entry(k, l)
    return SqMatrix.from_entries(rows, EXACT)


def flip(d: int) -> SqMatrix:
    """Swap of two tensor factors of dimension d."""
    return SqMatrix.permutation([b * d + a for a in range(d) for b in range(d)])


# ---- oracles --------------------------------------------------------------

def test_kron_matches_quadruple_loop():
    A = SqMatrix.from_entries([[1, zeta(3)], [2, -1]])
    B = SqMatrix.from_entries([[zeta(4), 0, 1], [0, 1, 0], [3, 0, -zeta(4)]])
    assert kron(A, B) == naive_kron(A, B)


def test_amplified_flip_acts_as_transposition_of_slots():
    d, n = 2, 3
    P = flip(d)
    for i in (1, 2):
        S = amplify(P, i, n, d)
        for idx in itertools.product(range(d), repeat=n):
            swapped = list(idx)
            swapped[i - 1], swapped[i] = swapped[i], swapped[i - 1]
            col = int(np.ravel_multi_index(idx, (d,) * n))
            row = int(np.ravel_multi_index(tuple(swapped), (d,) * n))
            assert S.entry(row, col) == 1


def test_place_pads_with_identities():
    A = SqMatrix.from_entries([[0, 1], [1, 0]])
    I2 = SqMatrix.identity(2)
    assert place(A, 1, 3, 2) == kron_all([I2, A, I2])


def test_exact_inverse_and_unitarity():
    A = SqMatrix.from_entries([[1, zeta(3)], [0, 2]])
    assert (A @ A.inverse()).is_identity()
    assert not is_unitary(A)
    H = SqMatrix.from_entries([[1, 1], [1, -1]]).scale(CycNum.sqrt_int(2).inv())
    assert is_unitary(H)


def test_is_invertible_detects_singular():
    assert not is_invertible(SqMatrix.from_entries([[1, 2], [2, 4]]))
    assert is_invertible(SqMatrix.from_entries([[1, 2], [3, 4]]))


def test_spectrum_of_diagonal():
    D = SqMatrix.from_entries([[-1, 0, 0], [0, zeta(3), 0], [0, 0, zeta(3)]])
    roots = [-1, zeta(3)]
    assert annihilator_check(D, roots)
    assert spectrum_multiplicities(D, roots) == [1, 2]
    assert not annihilator_check(D, [-1])


def test_projective_normal_form_ignores_scalars():
    A = SqMatrix.from_entries([[0, 2], [zeta(5), 1]])
    assert A.projective_key() == A.scale(3 * zeta(5, 2)).projective_key()


def test_backends_do_not_mix():
    A = SqMatrix.identity(2)
    with pytest.raises(BackendMismatch):
        A @ SqMatrix.identity(2, APPROX)


def test_approx_backend_round_trip():
    A = SqMatrix.from_entries([[zeta(8), 0], [0, 1]])
    B = A.to_approx()
    assert B.backend == APPROX
    assert np.allclose(B.arr, A.to_numpy())
    assert is_unitary(B)


def test_split_prime_reduction_is_a_homomorphism():
    A = SqMatrix.from_entries([[zeta(12), 1], [2, zeta(12, 5)]])
    B = SqMatrix.from_entries([[1, zeta(4)], [zeta(3), 0]])
    m = 12
    P, g = split_prime(m)
    assert (P - 1) % m == 0 and pow(g, m, P) == 1
    lhs = mod_image((A @ B).in_field(m), P, g)
    rhs = (mod_image(A.in_field(m), P, g) @ mod_image(B.in_field(m), P, g)) % P
    assert np.array_equal(lhs, rhs)


def test_json_round_trip():
    A = SqMatrix.from_entries([[zeta(3), 1], [0, CycNum.sqrt_int(2)]])
    assert SqMatrix.from_json(A.to_json()) == A


# ---- properties -----------------------------------------------------------

@given(exact_matrix(2), exact_matrix(2), exact_matrix(2))
def test_kron_associative(A, B, C):
    assert kron(kron(A, B), C) == kron(A, kron(B, C))


@given(exact_matrix(2), exact_matrix(2), exact_matrix(2), exact_matrix(2))
def test_kron_mixed_product(A, B, C, D):
    assert kron(A, B) @ kron(C, D) == kron(A @ C, B @ D)


@given(exact_matrix(4), st.integers(min_value=4, max_value=5), st.data())
def test_far_amplifications_commute(R, n, data):
    i = data.draw(st.integers(min_value=1, max_value=n - 3))
    j = data.draw(st.integers(min_value=i + 2, max_value=n - 1))
    Ri, Rj = amplify(R, i, n, 2), amplify(R, j, n, 2)
    assert Ri @ Rj == Rj @ Ri


@given(st.integers(min_value=0, max_value=7), st.integers(min_value=0, max_value=7),
       st.integers(min_value=0, max_value=1))
def test_unitary_closed_under_kron(a, b, swap):
    A = SqMatrix.from_entries([[zeta(8, a), 0], [0, zeta(8, b)]])
    if swap:
        A = A @ SqMatrix.permutation([1, 0])
    assert is_unitary(A) and is_unitary(kron(A, A))
