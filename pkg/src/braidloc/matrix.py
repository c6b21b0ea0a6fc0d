"""Dense square matrices over an exact cyclotomic or an approximate complex backend.

Exact matrices keep one integer array per power-basis coefficient plus a
shared positive denominator: ``A = (1/den) * sum_k num[k] * z_m^k``.
Products go through BLAS in float64 whenever a coefficient bound proves the
result is exact, and fall back to Python integers otherwise.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .cyclo import (
    DEFAULT_TOL,
    CycNum,
    embedding,
    euler_phi,
    field_inv,
    field_mul,
    format_complex,
    format_literal,
    parse_complex,
    parse_literal,
    power_table,
    prime_factors,
)

EXACT = "exact"
APPROX = "approx"

_FLOAT_SAFE = 2 ** 53
_INT64_SAFE = 2 ** 62


class BackendMismatch(ValueError):
    pass


# --------------------------------------------------------------------------
# field tables
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _mul_tensor(m: int) -> np.ndarray:
    """T[t, k, l] = coefficient of z^t in z^(k+l)."""
    phi = euler_phi(m)
    tab = power_table(m)
    T = np.zeros((phi, phi, phi), dtype=np.int64)
    for k in range(phi):
        for l in range(phi):
            T[:, k, l] = tab[(k + l) % m]
    return T


@lru_cache(maxsize=None)
def _mul_bound(m: int) -> int:
    return int(np.abs(_mul_tensor(m)).sum(axis=(1, 2)).max())


@lru_cache(maxsize=None)
def _galois_matrix(m: int, a: int) -> np.ndarray:
    phi = euler_phi(m)
    tab = power_table(m)
    G = np.zeros((phi, phi), dtype=np.int64)
    for k in range(phi):
        G[:, k] = tab[(a * k) % m]
    return G


@lru_cache(maxsize=None)
def _embedding_array(d: int, m: int) -> np.ndarray:
    return np.array(embedding(d, m), dtype=np.int64).astype(object)


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


# --------------------------------------------------------------------------
# integer array kernels
# --------------------------------------------------------------------------

def _maxabs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return int(np.abs(a).max())


def _to_object(a: np.ndarray) -> np.ndarray:
    return a.astype(object) if a.dtype != object else a


def _normalize(num: np.ndarray, den: int) -> tuple[np.ndarray, int]:
    if den < 0:
        num, den = -num, -den
    g = den
    for x in num.flat:
        if x:
            g = math.gcd(g, int(x))
            if g == 1:
                break
    else:
        if not any(num.flat):
            return num, 1
    if g > 1:
        num = num // g
        den //= g
    return num, den


def _contract_planes(mul: np.ndarray, planes: np.ndarray) -> np.ndarray:
    """sum_{k,l} mul[t,k,l] * planes[k,l] -> (phi, ...)."""
    return np.tensordot(mul, planes, axes=([1, 2], [0, 1]))


def _poly_matmul(m: int, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    phi, n = A.shape[0], A.shape[1]
    amax, bmax = _maxabs(A), _maxabs(B)
    if amax == 0 or bmax == 0:
        return np.zeros((phi, n, B.shape[2]), dtype=object)
    if phi == 1:
        bound = n * amax * bmax
        if bound < _FLOAT_SAFE:
            C = A[0].astype(np.float64) @ B[0].astype(np.float64)
            return np.rint(C).astype(np.int64).astype(object)[None]
        return np.asarray(A[0].dot(B[0]), dtype=object)[None]
    mul = _mul_tensor(m)
    bound = _mul_bound(m) * n * amax * bmax
    if bound < _FLOAT_SAFE:
        Af = A.astype(np.float64)
        Bf = B.astype(np.float64)
        T = np.matmul(Af[:, None], Bf[None, :])
        C = _contract_planes(mul.astype(np.float64), T)
        return np.rint(C).astype(np.int64).astype(object)
    if bound < _INT64_SAFE:
        Ai = A.astype(np.int64)
        Bi = B.astype(np.int64)
        T = np.matmul(Ai[:, None], Bi[None, :])
        return _contract_planes(mul, T).astype(object)
    T = np.empty((phi, phi, n, B.shape[2]), dtype=object)
    for k in range(phi):
        for l in range(phi):
            T[k, l] = A[k].dot(B[l])
    return _contract_planes(mul.astype(object), T)


def _lift_planes(num: np.ndarray, d: int, m: int) -> np.ndarray:
    if d == m:
        return num
    return np.tensordot(_embedding_array(d, m), num, axes=([1], [0]))


def _scalar_planes(m: int, c: CycNum) -> tuple[np.ndarray, int]:
    """Integer multiplication-by-c matrix on the power basis of Q(z_m), and its denominator."""
    coeffs = c.in_field(m)
    cd = reduce(_lcm, (x.denominator for x in coeffs), 1)
    cn = np.array([int(x * cd) for x in coeffs], dtype=object)
    Y = np.tensordot(_mul_tensor(m).astype(object), cn, axes=([2], [0]))
    return Y, cd


# --------------------------------------------------------------------------
# SqMatrix
# --------------------------------------------------------------------------

class SqMatrix:
    """Dense square matrix with homogeneous entries (all exact or all approximate)."""

    __slots__ = ("dim", "backend", "m", "num", "den", "arr", "tol")

    def __init__(self):
        raise TypeError("use SqMatrix.exact / SqMatrix.approx / SqMatrix.from_entries")

    # construction ------------------------------------------------------
    @classmethod
    def _exact(cls, m: int, num: np.ndarray, den: int, normalize: bool = True) -> "SqMatrix":
        self = object.__new__(cls)
        num = _to_object(num)
        if normalize:
            num, den = _normalize(num, den)
        self.dim = num.shape[1]
        self.backend = EXACT
        self.m, self.num, self.den = m, num, den
        self.arr = None
        self.tol = DEFAULT_TOL
        return self

    @classmethod
    def exact(cls, m: int, num: Any, den: int = 1) -> "SqMatrix":
        num = np.asarray(num, dtype=object)
        phi = euler_phi(m)
        if num.ndim != 3 or num.shape[0] != phi or num.shape[1] != num.shape[2]:
            raise ValueError(f"expected planes of shape ({phi}, n, n)")
        if den <= 0:
            raise ValueError("denominator must be positive")
        return cls._exact(m, num, den)

    @classmethod
    def approx(cls, arr: Any, tol: float = DEFAULT_TOL) -> "SqMatrix":
        self = object.__new__(cls)
        a = np.array(arr, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("matrix must be square")
        self.dim = a.shape[0]
        self.backend = APPROX
        self.arr = a
        self.tol = tol
        self.m = self.num = self.den = None
        return self

    @classmethod
    def from_entries(cls, rows: Sequence[Sequence[Any]], backend: str | None = None,
                     tol: float = DEFAULT_TOL) -> "SqMatrix":
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        flat = [x for r in rows for x in r]
        if backend is None:
            backend = APPROX if any(isinstance(x, (complex, float)) for x in flat) else EXACT
        if backend == APPROX:
            return cls.approx([[complex(x) for x in r] for r in rows], tol)
        vals = [CycNum.coerce(x) for x in flat]
        m = reduce(_lcm, (v.m for v in vals), 1)
        coeffs = [v.in_field(m) for v in vals]
        den = reduce(_lcm, (c.denominator for cs in coeffs for c in cs), 1)
        phi = euler_phi(m)
        num = np.empty((phi, n, n), dtype=object)
        for idx, cs in enumerate(coeffs):
            i, j = divmod(idx, n)
            for k in range(phi):
                num[k, i, j] = int(cs[k] * den)
        return cls._exact(m, num, den)

    @classmethod
    def identity(cls, n: int, backend: str = EXACT, tol: float = DEFAULT_TOL) -> "SqMatrix":
        if backend == APPROX:
            return cls.approx(np.eye(n), tol)
        return cls._exact(1, np.eye(n, dtype=np.int64)[None], 1, normalize=False)

    @classmethod
    def zeros(cls, n: int, backend: str = EXACT, tol: float = DEFAULT_TOL) -> "SqMatrix":
        if backend == APPROX:
            return cls.approx(np.zeros((n, n)), tol)
        return cls._exact(1, np.zeros((1, n, n), dtype=np.int64), 1, normalize=False)

    @classmethod
    def permutation(cls, perm: Sequence[int]) -> "SqMatrix":
        """Matrix sending basis vector j to basis vector perm[j]."""
        n = len(perm)
        a = np.zeros((1, n, n), dtype=np.int64)
        for j, i in enumerate(perm):
            a[0, i, j] = 1
        return cls._exact(1, a, 1, normalize=False)

    # accessors ---------------------------------------------------------
    @property
    def is_exact(self) -> bool:
        return self.backend == EXACT

    def entry(self, i: int, j: int):
        if self.is_exact:
            return CycNum._from_field(self.m, [Fraction(int(x), self.den) for x in self.num[:, i, j]])
        return complex(self.arr[i, j])

    def rows(self) -> list[list]:
        return [[self.entry(i, j) for j in range(self.dim)] for i in range(self.dim)]

    def to_numpy(self) -> np.ndarray:
        """Complex128 array (exact entries are rounded)."""
        if not self.is_exact:
            return self.arr.copy()
        phi = self.num.shape[0]
        roots = np.exp(2j * np.pi * np.arange(phi) / self.m)
        if _maxabs(self.num) < _FLOAT_SAFE and self.den < _FLOAT_SAFE:
            planes = self.num.astype(np.float64) / self.den
        else:
            planes = np.vectorize(lambda x: float(Fraction(int(x), self.den)), otypes=[float])(self.num)
        return np.tensordot(roots, planes, axes=([0], [0]))

    def to_approx(self, tol: float = DEFAULT_TOL) -> "SqMatrix":
        return SqMatrix.approx(self.to_numpy(), tol)

    def in_field(self, m: int) -> "SqMatrix":
        if m % self.m:
            raise ValueError(f"conductor {self.m} does not divide {m}")
        return SqMatrix._exact(m, _lift_planes(self.num, self.m, m), self.den, normalize=False)

    def minimal_conductor(self) -> "SqMatrix":
        """Re-express in the smallest field containing every entry."""
        if not self.is_exact:
            return self
        m = 1
        for i in range(self.dim):
            for j in range(self.dim):
                if any(self.num[:, i, j]):
                    m = _lcm(m, self.entry(i, j).m)
        if m == self.m:
            return self
        return SqMatrix.from_entries(self.rows(), EXACT)

    # helpers -----------------------------------------------------------
    def _check_pair(self, other: "SqMatrix"):
        if not isinstance(other, SqMatrix):
            raise TypeError("expected SqMatrix")
        if self.backend != other.backend:
            raise BackendMismatch(f"backend mismatch: {self.backend} vs {other.backend}")

    def _common(self, other: "SqMatrix"):
        L = _lcm(self.m, other.m)
        return L, _lift_planes(self.num, self.m, L), _lift_planes(other.num, other.m, L)

    # arithmetic --------------------------------------------------------
    def __matmul__(self, other: "SqMatrix") -> "SqMatrix":
        self._check_pair(other)
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        if not self.is_exact:
            return SqMatrix.approx(self.arr @ other.arr, min(self.tol, other.tol))
        L, a, b = self._common(other)
        return SqMatrix._exact(L, _poly_matmul(L, a, b), self.den * other.den)

    def __add__(self, other: "SqMatrix") -> "SqMatrix":
        self._check_pair(other)
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        if not self.is_exact:
            return SqMatrix.approx(self.arr + other.arr, min(self.tol, other.tol))
        L, a, b = self._common(other)
        if self.den == other.den:
            return SqMatrix._exact(L, a + b, self.den)
        return SqMatrix._exact(L, a * other.den + b * self.den, self.den * other.den)

    def __neg__(self) -> "SqMatrix":
        if not self.is_exact:
            return SqMatrix.approx(-self.arr, self.tol)
        return SqMatrix._exact(self.m, -self.num, self.den, normalize=False)

    def __sub__(self, other: "SqMatrix") -> "SqMatrix":
        return self + (-other)

    def scale(self, c) -> "SqMatrix":
        if not self.is_exact:
            return SqMatrix.approx(self.arr * complex(c), self.tol)
        if isinstance(c, (complex, float)):
            raise BackendMismatch("cannot scale an exact matrix by a float")
        c = CycNum.coerce(c)
        if c.is_rational():
            f = c.as_fraction()
            return SqMatrix._exact(self.m, self.num * f.numerator, self.den * f.denominator) if f else \
                SqMatrix.zeros(self.dim)
        L = _lcm(self.m, c.m)
        Y, cd = _scalar_planes(L, c)
        num = np.tensordot(Y, _lift_planes(self.num, self.m, L), axes=([1], [0]))
        return SqMatrix._exact(L, num, self.den * cd)

    def __mul__(self, c):
        if isinstance(c, SqMatrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def plus_scalar(self, c) -> "SqMatrix":
        """A + c*I."""
        return self + SqMatrix.identity(self.dim, self.backend, self.tol).scale(c)

    def adjoint(self) -> "SqMatrix":
        """Conjugate transpose."""
        if not self.is_exact:
            return SqMatrix.approx(self.arr.conj().T, self.tol)
        if self.m <= 2:
            return SqMatrix._exact(self.m, self.num.transpose(0, 2, 1).copy(), self.den, normalize=False)
        G = _galois_matrix(self.m, -1).astype(object)
        num = np.tensordot(G, self.num, axes=([1], [0])).transpose(0, 2, 1)
        return SqMatrix._exact(self.m, np.ascontiguousarray(num), self.den, normalize=False)

    def transpose(self) -> "SqMatrix":
        if not self.is_exact:
            return SqMatrix.approx(self.arr.T.copy(), self.tol)
        return SqMatrix._exact(self.m, self.num.transpose(0, 2, 1).copy(), self.den, normalize=False)

    def trace(self):
        if not self.is_exact:
            return complex(np.trace(self.arr))
        return CycNum._from_field(self.m, [Fraction(int(np.trace(p)), self.den) for p in self.num])

    def __pow__(self, k: int) -> "SqMatrix":
        if k < 0:
            return self.inverse() ** (-k)
        result = SqMatrix.identity(self.dim, self.backend, self.tol)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def inverse(self) -> "SqMatrix":
        if not self.is_exact:
            return SqMatrix.approx(np.linalg.inv(self.arr), self.tol)
        return _exact_inverse(self)

    # predicates --------------------------------------------------------
    def is_zero(self) -> bool:
        if not self.is_exact:
            return bool(np.abs(self.arr).max(initial=0.0) < self.tol)
        return not any(self.num.flat)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SqMatrix):
            return NotImplemented
        if self.backend != other.backend or self.dim != other.dim:
            return False
        if not self.is_exact:
            return bool(np.abs(self.arr - other.arr).max(initial=0.0) < min(self.tol, other.tol))
        if self.den != other.den:
            return False
        _, a, b = self._common(other)
        return bool(np.array_equal(a, b))

    __hash__ = None

    def is_identity(self) -> bool:
        return self == SqMatrix.identity(self.dim, self.backend, self.tol)

    def is_scalar(self) -> bool:
        """A == A[0,0] * I."""
        if not self.is_exact:
            a = self.arr
            return bool(np.abs(a - a[0, 0] * np.eye(self.dim)).max(initial=0.0) < self.tol)
        for plane in self.num:
            c = plane[0, 0]
            off = plane.copy()
            np.fill_diagonal(off, 0)
            if any(off.flat) or any(x != c for x in np.diagonal(plane)):
                return False
        return True

    def is_monomial(self) -> bool:
        """Exactly one nonzero entry in every row and column."""
        if self.is_exact:
            mask = np.any(self.num != 0, axis=0)
        else:
            mask = np.abs(self.arr) > self.tol
        return bool((mask.sum(axis=0) == 1).all() and (mask.sum(axis=1) == 1).all())

    def first_nonzero(self) -> tuple[int, int] | None:
        if self.is_exact:
            mask = np.any(self.num != 0, axis=0)
        else:
            mask = np.abs(self.arr) > self.tol
        idx = np.flatnonzero(mask)
        if idx.size == 0:
            return None
        return divmod(int(idx[0]), self.dim)

    def projective_normal_form(self) -> "SqMatrix":
        """A divided by its first nonzero entry in row-major order (exact only).

        The conductor is kept, so normal forms within one field compare by
        their integer data.
        """
        if not self.is_exact:
            raise ValueError("projective canonical form requires the exact backend")
        f = self.first_nonzero()
        if f is None:
            return self
        m = self.m
        y = field_inv(m, [Fraction(int(v), self.den) for v in self.num[:, f[0], f[1]]])
        cd = reduce(_lcm, (c.denominator for c in y), 1)
        cn = np.array([int(c * cd) for c in y], dtype=object)
        Y = np.tensordot(_mul_tensor(m).astype(object), cn, axes=([2], [0]))
        return SqMatrix._exact(m, np.tensordot(Y, self.num, axes=([1], [0])), self.den * cd)

    def projective_key(self) -> tuple:
        """Hashable key of the class of A modulo nonzero scalars (exact only)."""
        N = self.projective_normal_form()
        return (N.m, N.den, tuple(int(v) for v in N.num.flat))

    # tensor structure --------------------------------------------------
    def kron(self, other: "SqMatrix") -> "SqMatrix":
        return kron(self, other)

    # serialization -----------------------------------------------------
    def to_json(self) -> dict:
        if self.is_exact:
            entries = [[format_literal(self.entry(i, j)) for j in range(self.dim)] for i in range(self.dim)]
        else:
            entries = [[format_complex(complex(self.arr[i, j])) for j in range(self.dim)]
                       for i in range(self.dim)]
        return {"dim": self.dim, "backend": self.backend, "entries": entries}

    @classmethod
    def from_json(cls, obj: Mapping, variables: Mapping[str, CycNum] | None = None,
                  tol: float = DEFAULT_TOL) -> "SqMatrix":
        backend = obj.get("backend", EXACT)
        if backend not in (EXACT, APPROX):
            raise ValueError(f"unknown backend {backend!r}")
        entries = obj["entries"]
        dim = int(obj.get("dim", len(entries)))
        if len(entries) != dim or any(len(r) != dim for r in entries):
            raise ValueError("entries do not match declared dim")
        if backend == APPROX:
            rows = [[_approx_entry(x) for x in r] for r in entries]
            return cls.approx(rows, tol)
        rows = [[_exact_entry(x, variables) for x in r] for r in entries]
        return cls.from_entries(rows, EXACT)

    def __repr__(self):
        if self.is_exact:
            return f"SqMatrix(dim={self.dim}, exact, conductor={self.m})"
        return f"SqMatrix(dim={self.dim}, approx)"


def _exact_entry(x, variables):
    if isinstance(x, str):
        return parse_literal(x, variables)
    if isinstance(x, int):
        return CycNum.rational(x)
    raise ValueError(f"exact entries must be literal strings or integers, got {x!r}")


def _approx_entry(x):
    if isinstance(x, str):
        return parse_complex(x)
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return complex(x[0], x[1])
    raise ValueError(f"bad approximate entry {x!r}")


def _exact_inverse(A: SqMatrix) -> SqMatrix:
    """Gauss-Jordan over Q(z_m) on coefficient lists."""
    n, m = A.dim, A.m
    phi = euler_phi(m)
    zero = [Fraction(0)] * phi
    one = [Fraction(1)] + [Fraction(0)] * (phi - 1)
    M = [[[Fraction(int(A.num[k, i, j]), A.den) for k in range(phi)] for j in range(n)]
         + [list(one) if i == j else list(zero) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if any(M[r][col])), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        M[col], M[piv] = M[piv], M[col]
        inv = field_inv(m, M[col][col])
        M[col] = [field_mul(m, inv, x) if any(x) else x for x in M[col]]
        for r in range(n):
            if r != col and any(M[r][col]):
                f = M[r][col]
                M[r] = [[a - b for a, b in zip(x, field_mul(m, f, y))] if any(y) else x
                        for x, y in zip(M[r], M[col])]
    den = reduce(_lcm, (c.denominator for i in range(n) for j in range(n) for c in M[i][n + j]), 1)
    num = np.empty((phi, n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            for k, c in enumerate(M[i][n + j]):
                num[k, i, j] = int(c * den)
    return SqMatrix._exact(m, num, den)


# --------------------------------------------------------------------------
# tensor operations
# --------------------------------------------------------------------------

def kron(A: SqMatrix, B: SqMatrix) -> SqMatrix:
    """Kronecker product A (x) B."""
    A._check_pair(B)
    if not A.is_exact:
        return SqMatrix.approx(np.kron(A.arr, B.arr), min(A.tol, B.tol))
    L, a, b = A._common(B)
    den = A.den * B.den
    if A.m == 1:
        num = np.stack([np.kron(A.num[0], bp) for bp in b])
        return SqMatrix._exact(L, num, den, normalize=False)
    if B.m == 1:
        num = np.stack([np.kron(ap, B.num[0]) for ap in a])
        return SqMatrix._exact(L, num, den, normalize=False)
    phi = a.shape[0]
    T = np.empty((phi, phi, A.dim * B.dim, A.dim * B.dim), dtype=object)
    for k in range(phi):
        for l in range(phi):
            T[k, l] = np.kron(a[k], b[l])
    num = _contract_planes(_mul_tensor(L).astype(object), T)
    return SqMatrix._exact(L, num, den)


def kron_all(mats: Iterable[SqMatrix]) -> SqMatrix:
    return reduce(kron, mats)


def amplify(R: SqMatrix, i: int, n: int, d: int) -> SqMatrix:
    """I_d^(i-1) (x) R (x) I_d^(n-i-1): R acting on tensor slots i, i+1 of (C^d)^n."""
    if d < 1 or R.dim != d * d:
        raise ValueError(f"dim(R) = {R.dim} is not {d}^2")
    if n < 2 or not 1 <= i <= n - 1:
        raise ValueError(f"slot index {i} out of range for n = {n}")
    return place(R, i - 1, n, d)


def place(A: SqMatrix, offset: int, n: int, d: int) -> SqMatrix:
    """Put an operator on d^k dims at tensor slots offset..offset+k-1 of (C^d)^n."""
    k = round(math.log(A.dim, d)) if d > 1 else 1
    if d ** k != A.dim:
        raise ValueError(f"dim {A.dim} is not a power of {d}")
    if offset < 0 or offset + k > n:
        raise ValueError("operator does not fit in the ambient tensor power")
    out = A
    if offset:
        out = kron(SqMatrix.identity(d ** offset, A.backend, A.tol), out)
    rest = n - offset - k
    if rest:
        out = kron(out, SqMatrix.identity(d ** rest, A.backend, A.tol))
    return out


# --------------------------------------------------------------------------
# checks
# --------------------------------------------------------------------------

def is_unitary(A: SqMatrix, tol: float | None = None) -> bool:
    """A A* == I; literal in exact mode, max-entry deviation < tol in approx mode."""
    P = A @ A.adjoint()
    if A.is_exact:
        return P.is_identity()
    tol = A.tol if tol is None else tol
    return bool(np.abs(P.arr - np.eye(A.dim)).max(initial=0.0) < tol)


def annihilator_check(A: SqMatrix, roots: Sequence) -> bool:
    """True iff prod_j (A - r_j I) == 0."""
    _check_distinct(roots, A)
    P = SqMatrix.identity(A.dim, A.backend, A.tol)
    for r in roots:
        P = P @ A.plus_scalar(-_coerce_scalar(r, A))
    return P.is_zero()


def spectrum_multiplicities(A: SqMatrix, roots: Sequence) -> list[int]:
    """Multiplicities m_j with tr(A^k) = sum_j m_j r_j^k, k < len(roots).

    Only meaningful when ``annihilator_check(A, roots)`` holds.
    """
    _check_distinct(roots, A)
    r = len(roots)
    traces = []
    P = SqMatrix.identity(A.dim, A.backend, A.tol)
    for _ in range(r):
        traces.append(P.trace())
        P = P @ A
    if not A.is_exact:
        V = np.array([[complex(x) ** k for x in roots] for k in range(r)])
        sol = np.linalg.solve(V, np.array(traces))
        out = [int(round(s.real)) for s in sol]
        if any(abs(s - o) > 1e-6 for s, o in zip(sol, out)):
            raise ValueError("trace system has no integer solution")
        return out
    rts = [CycNum.coerce(x) for x in roots]
    V = [[x ** k for x in rts] for k in range(r)]
    sol = solve_linear(V, traces)
    out = []
    for s in sol:
        if not s.is_integer():
            raise ValueError(f"trace system solution {s} is not an integer")
        out.append(int(s.as_fraction()))
    return out


def solve_linear(A: list[list[CycNum]], b: list[CycNum]) -> list[CycNum]:
    """Exact Gaussian elimination over cyclotomic numbers."""
    n = len(A)
    M = [list(row) + [b[i]] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not M[r][col].is_zero()), None)
        if piv is None:
            raise ZeroDivisionError("singular system (repeated roots?)")
        M[col], M[piv] = M[piv], M[col]
        inv = M[col][col].inv()
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and not M[r][col].is_zero():
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[i][n] for i in range(n)]


def _coerce_scalar(x, A: SqMatrix):
    if A.is_exact:
        return CycNum.coerce(x)
    return complex(x)


def _check_distinct(roots: Sequence, A: SqMatrix):
    vals = [_coerce_scalar(r, A) for r in roots]
    for i in range(len(vals)):
        for j in range(i):
            same = vals[i] == vals[j] if A.is_exact else abs(vals[i] - vals[j]) < A.tol
            if same:
                raise ValueError("roots must be distinct (singular Vandermonde)")


# --------------------------------------------------------------------------
# reduction modulo a prime of Z[z_m]
# --------------------------------------------------------------------------

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def split_prime(m: int, start: int = 2 ** 24, avoid: int = 1) -> tuple[int, int]:
    """A prime P = 1 mod m above ``start`` not dividing ``avoid``, with an element g of order m."""
    m2 = max(m, 1)
    P = start - (start % m2) + 1
    while True:
        if P > start and _is_prime(P) and avoid % P:
            break
        P += m2
    qs = prime_factors(m2)
    h = 2
    while True:
        g = pow(h, (P - 1) // m2, P)
        if all(pow(g, m2 // q, P) != 1 for q in qs):
            return P, g
        h += 1


def mod_image(A: SqMatrix, P: int, g: int) -> np.ndarray:
    """Image of an exact matrix in M_n(F_P) under z_m -> g (g of order m mod P)."""
    if not A.is_exact:
        raise ValueError("modular reduction needs the exact backend")
    if A.den % P == 0:
        raise ZeroDivisionError("prime divides the denominator")
    acc = np.zeros((A.dim, A.dim), dtype=object)
    gk = 1
    for plane in A.num:
        acc = acc + (plane % P) * gk
        gk = gk * g % P
    acc = acc % P
    return (acc * pow(A.den, -1, P) % P).astype(np.int64)


def modmul(a: np.ndarray, b: np.ndarray, P: int) -> np.ndarray:
    n = a.shape[0]
    if n * (P - 1) ** 2 < 2 ** 63:
        return (a @ b) % P
    return ((a.astype(object) @ b.astype(object)) % P).astype(np.int64)


def mod_rank(a: np.ndarray, P: int) -> int:
    """Rank of an integer matrix over F_P."""
    M = [[int(x) % P for x in row] for row in a]
    rows, cols = len(M), len(M[0]) if M else 0
    rank = 0
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if M[r][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][c], -1, P)
        M[rank] = [x * inv % P for x in M[rank]]
        for r in range(rows):
            if r != rank and M[r][c]:
                f = M[r][c]
                M[r] = [(x - f * y) % P for x, y in zip(M[r], M[rank])]
        rank += 1
    return rank


def is_invertible(A: SqMatrix) -> bool:
    """Exact: unitary, or full rank modulo a split prime, or an exact inverse exists."""
    if not A.is_exact:
        return bool(np.linalg.cond(A.arr) < 1.0 / A.tol)
    if is_unitary(A):
        return True
    P, g = split_prime(A.m, avoid=A.den)
    if mod_rank(mod_image(A, P, g), P) == A.dim:
        return True
    try:
        A.inverse()
    except ZeroDivisionError:
        return False
    return True


def mod_is_scalar(a: np.ndarray) -> bool:
    c = a[0, 0]
    off = a.copy()
    np.fill_diagonal(off, 0)
    return not off.any() and bool((np.diagonal(a) == c).all())


__all__ = [
    "APPROX",
    "EXACT",
    "BackendMismatch",
    "SqMatrix",
    "amplify",
    "annihilator_check",
    "is_invertible",
    "is_unitary",
    "kron",
    "kron_all",
    "mod_image",
    "mod_is_scalar",
    "mod_rank",
    "modmul",
    "place",
    "solve_linear",
    "spectrum_multiplicities",
    "split_prime",
]
