"""Yang-Baxter checks and projective order of R-matrices."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrix import (
    SqMatrix,
    is_invertible,
    kron,
    mod_image,
    mod_is_scalar,
    modmul,
    place,
    split_prime,
)


@dataclass(frozen=True)
class RMatrixSpec:
    """An invertible operator on W^{(x) arity}, dim W = local_dim.

    ``arity = 2`` is an ordinary braided vector space; larger arities with a
    ``shift`` describe generalized Yang-Baxter data.
    """

    local_dim: int
    matrix: SqMatrix
    arity: int = 2
    shift: int = 1
    check: bool = True

    def __post_init__(self):
        if self.local_dim < 1:
            raise ValueError("local dimension must be positive")
        if self.arity < 2 or self.shift < 1:
            raise ValueError("need arity >= 2 and shift >= 1")
        if self.matrix.dim != self.local_dim ** self.arity:
            raise ValueError(
                f"matrix dim {self.matrix.dim} is not {self.local_dim}^{self.arity}")
        if self.check and not is_invertible(self.matrix):
            raise ValueError("R-matrix is not invertible")

    @classmethod
    def infer(cls, matrix: SqMatrix, check: bool = True) -> "RMatrixSpec":
        """Ordinary R-matrix with d = sqrt(dim)."""
        d = int(round(matrix.dim ** 0.5))
        if d * d != matrix.dim:
            raise ValueError(f"dim {matrix.dim} is not a perfect square")
        return cls(d, matrix, check=check)


def _as_spec(R: RMatrixSpec | SqMatrix) -> RMatrixSpec:
    return R if isinstance(R, RMatrixSpec) else RMatrixSpec.infer(R, check=False)


def check_ybe(R: RMatrixSpec | SqMatrix) -> bool:
    """(R (x) I)(I (x) R)(R (x) I) == (I (x) R)(R (x) I)(I (x) R)."""
    spec = _as_spec(R)
    if spec.arity != 2:
        raise ValueError("check_ybe needs arity 2; use check_gybe")
    A = spec.matrix
    I = SqMatrix.identity(spec.local_dim, A.backend, A.tol)
    R1, R2 = kron(A, I), kron(I, A)
    return (R1 @ R2 @ R1) == (R2 @ R1 @ R2)


def check_gybe(R: SqMatrix, d: int, k: int, m: int) -> tuple[bool, bool]:
    """Generalized YBE for R on d^k dims with overlap shift m.

    Returns ``(gybe, far_commutation)``. The second entry tests whether the
    copies of R at slot offsets 0 and 2m commute, on the smallest tensor
    power containing both.
    """
    if k < 2 or m < 1:
        raise ValueError("need k >= 2 and m >= 1")
    if R.dim != d ** k:
        raise ValueError(f"dim {R.dim} is not {d}^{k}")
    n = k + m
    R1, R2 = place(R, 0, n, d), place(R, m, n, d)
    gybe = (R1 @ R2 @ R1) == (R2 @ R1 @ R2)
    n_far = 2 * m + k
    F1, F3 = place(R, 0, n_far, d), place(R, 2 * m, n_far, d)
    far = (F1 @ F3) == (F3 @ F1)
    return gybe, far


@dataclass(frozen=True)
class Finite:
    order: int


@dataclass(frozen=True)
class ExceedsBound:
    bound: int


def projective_order(A: SqMatrix, bound: int) -> Finite | ExceedsBound:
    """Smallest k <= bound with A^k a scalar matrix.

    Exact matrices are screened modulo a split prime: A^k scalar implies its
    reduction is scalar, so only candidate exponents are confirmed exactly.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if not A.is_exact:
        P = A
        for k in range(1, bound + 1):
            if P.is_scalar():
                return Finite(k)
            P = P @ A
        return ExceedsBound(bound)
    Pm, g = split_prime(A.m, avoid=A.den)
    a = mod_image(A, Pm, g)
    acc = a.copy()
    for k in range(1, bound + 1):
        if mod_is_scalar(acc) and (A ** k).is_scalar():
            return Finite(k)
        acc = modmul(acc, a, Pm)
    return ExceedsBound(bound)


__all__ = [
    "ExceedsBound",
    "Finite",
    "RMatrixSpec",
    "check_gybe",
    "check_ybe",
    "projective_order",
]
