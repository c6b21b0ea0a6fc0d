"""Exact arithmetic in cyclotomic fields Q(zeta_m).

Elements are stored in the power basis 1, z, ..., z^(phi(m)-1) modulo the
m-th cyclotomic polynomial, always descended to the smallest conductor
dividing m that contains the value.  That makes the representation
canonical, so ``==`` and ``hash`` are plain coefficient comparisons.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

DEFAULT_TOL = 1e-9

Rational = Union[int, Fraction]


# --------------------------------------------------------------------------
# cyclotomic polynomials and reduction tables
# --------------------------------------------------------------------------

def divisors(m: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= m:
        if m % d == 0:
            small.append(d)
            if d * d != m:
                large.append(m // d)
        d += 1
    return small + large[::-1]


def prime_factors(m: int) -> list[int]:
    out, p = [], 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return out


def euler_phi(m: int) -> int:
    r = m
    for p in prime_factors(m):
        r -= r // p
    return r


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # both low-to-high, den monic
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    assert not any(num), "inexact cyclotomic division"
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise ValueError("conductor must be positive")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in divisors(m)[:-1]:
        poly = _poly_divexact(poly, list(cyclotomic_poly(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def power_table(m: int) -> tuple[tuple[int, ...], ...]:
    """Row s holds the power-basis coefficients of z_m^s, for 0 <= s < m."""
    phi = euler_phi(m)
    cp = cyclotomic_poly(m)
    rows = []
    cur = [0] * phi
    cur[0] = 1
    for _ in range(m):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for j in range(phi):
                cur[j] -= top * cp[j]
    return tuple(rows)


@lru_cache(maxsize=None)
def embedding(d: int, m: int) -> tuple[tuple[int, ...], ...]:
    """Integer matrix (phi(m) x phi(d)) embedding Q(z_d) into Q(z_m), d | m."""
    if m % d:
        raise ValueError(f"{d} does not divide {m}")
    tab = power_table(m)
    step = m // d
    cols = [tab[(j * step) % m] for j in range(euler_phi(d))]
    return tuple(tuple(col[i] for col in cols) for i in range(euler_phi(m)))


@lru_cache(maxsize=None)
def _left_inverse(d: int, m: int):
    """Rows r and inverse of E[r, :] so that y = inv @ x[r] recovers preimages."""
    E = [[Fraction(v) for v in row] for row in embedding(d, m)]
    k = euler_phi(d)
    chosen: list[int] = []
    basis: list[list[Fraction]] = []  # echelon rows
    pivots: list[int] = []
    for r, row in enumerate(E):
        v = list(row)
        for b, p in zip(basis, pivots):
            if v[p]:
                f = v[p] / b[p]
                v = [a - f * c for a, c in zip(v, b)]
        nz = next((j for j, a in enumerate(v) if a), None)
        if nz is not None:
            basis.append(v)
            pivots.append(nz)
            chosen.append(r)
            if len(chosen) == k:
                break
    sub = [E[r] for r in chosen]
    return tuple(chosen), _invert_fraction_matrix(sub)


def _invert_fraction_matrix(a: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(a)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


@lru_cache(maxsize=None)
def units_mod(m: int) -> tuple[int, ...]:
    return tuple(a for a in range(1, m + 1) if math.gcd(a, m) == 1) if m > 1 else (1,)


# --------------------------------------------------------------------------
# coefficient-level helpers inside a fixed field (no conductor changes)
# --------------------------------------------------------------------------

def lift(coeffs: Sequence, d: int, m: int) -> list:
    if d == m:
        return list(coeffs)
    E = embedding(d, m)
    return [sum(e * c for e, c in zip(row, coeffs) if e) for row in E]


def field_mul(m: int, a: Sequence, b: Sequence) -> list:
    phi = len(a)
    tab = power_table(m)
    prod = [0] * (2 * phi - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] += x * y
    out = [0] * phi
    for s, v in enumerate(prod):
        if v:
            row = tab[s % m]
            for t in range(phi):
                if row[t]:
                    out[t] += v * row[t]
    return out


def field_galois(m: int, a: Sequence, k: int) -> list:
    """Apply z -> z^k (k coprime to m)."""
    phi = len(a)
    tab = power_table(m)
    out = [0] * phi
    for j, x in enumerate(a):
        if x:
            row = tab[(j * k) % m]
            for t in range(phi):
                if row[t]:
                    out[t] += x * row[t]
    return out


def field_norm_cofactor(m: int, a: Sequence) -> tuple[list, Fraction]:
    """Return (y, N) with a*y = N rational; y is the product of nontrivial conjugates."""
    y: list = [1] + [0] * (len(a) - 1)
    for k in units_mod(m):
        if k % m == 1 % m:
            continue
        y = field_mul(m, y, field_galois(m, a, k))
    n = field_mul(m, a, y)
    if any(n[1:]):
        raise ArithmeticError("norm computation did not land in Q")
    return y, Fraction(n[0])


def field_inv(m: int, a: Sequence) -> list:
    if not any(a):
        raise ZeroDivisionError("inverse of zero in cyclotomic field")
    y, n = field_norm_cofactor(m, a)
    return [Fraction(v) / n for v in y]


def _descend(m: int, c: Sequence[Fraction]) -> tuple[int, tuple[Fraction, ...]]:
    if m == 1 or not any(c[1:]):
        return 1, (Fraction(c[0]),)
    for d in divisors(m)[:-1]:
        if d == 1:
            continue
        rows, inv = _left_inverse(d, m)
        xr = [c[r] for r in rows]
        y = [sum(iv * x for iv, x in zip(row, xr)) for row in inv]
        if lift(y, d, m) == list(c):
            return d, tuple(y)
    return m, tuple(c)


# --------------------------------------------------------------------------
# CycNum
# --------------------------------------------------------------------------

class CycNum:
    """An element of Q(zeta_m), immutable and canonically reduced."""

    __slots__ = ("m", "c", "_hash")

    def __init__(self, m: int, coeffs: Iterable[Rational] = ()):
        if m < 1:
            raise ValueError("conductor must be >= 1")
        coeffs = [Fraction(x) for x in coeffs]
        if len(coeffs) > m:
            raise ValueError("at most m coefficients may be given for conductor m")
        phi = euler_phi(m)
        tab = power_table(m)
        red = [Fraction(0)] * phi
        for s, x in enumerate(coeffs):
            if x:
                for t, v in enumerate(tab[s]):
                    if v:
                        red[t] += x * v
        self.m, self.c = _descend(m, red)
        self._hash = None

    @classmethod
    def _from_field(cls, m: int, coeffs: Sequence) -> "CycNum":
        obj = cls.__new__(cls)
        obj.m, obj.c = _descend(m, [Fraction(x) for x in coeffs])
        obj._hash = None
        return obj

    # constructors ------------------------------------------------------
    @classmethod
    def zeta(cls, m: int, k: int = 1) -> "CycNum":
        """z_m^k = exp(2 pi i k / m)."""
        c = [0] * m
        c[k % m] = 1
        return cls(m, c)

    @classmethod
    def rational(cls, x: Rational) -> "CycNum":
        return cls(1, [x])

    @classmethod
    def coerce(cls, x) -> "CycNum":
        if isinstance(x, CycNum):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to CycNum")

    @classmethod
    def sqrt_int(cls, n: int) -> "CycNum":
        """Positive square root of a positive integer, via quadratic Gauss sums."""
        if n <= 0:
            raise ValueError("n must be positive")
        out = cls.rational(1)
        sq = 1
        k = n
        for p in prime_factors(n):
            e = 0
            while k % p == 0:
                k //= p
                e += 1
            sq *= p ** (e // 2)
            if e % 2:
                out = out * _sqrt_prime(p)
        return out * sq

    # structure ---------------------------------------------------------
    @property
    def conductor(self) -> int:
        return self.m

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self.c

    def in_field(self, m: int) -> list[Fraction]:
        """Coefficients in Q(z_m); requires conductor | m."""
        if m % self.m:
            raise ValueError(f"conductor {self.m} does not divide {m}")
        return lift(self.c, self.m, m)

    def is_zero(self) -> bool:
        return not any(self.c)

    def is_rational(self) -> bool:
        return self.m == 1

    def as_fraction(self) -> Fraction:
        if self.m != 1:
            raise ValueError(f"{self} is not rational")
        return self.c[0]

    def is_integer(self) -> bool:
        return self.m == 1 and self.c[0].denominator == 1

    # arithmetic --------------------------------------------------------
    def _pair(self, other):
        other = CycNum.coerce(other)
        L = self.m * other.m // math.gcd(self.m, other.m)
        return L, lift(self.c, self.m, L), lift(other.c, other.m, L)

    def __add__(self, other):
        try:
            L, a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        return CycNum._from_field(L, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        obj = CycNum.__new__(CycNum)
        obj.m, obj.c, obj._hash = self.m, tuple(-x for x in self.c), None
        return obj

    def __sub__(self, other):
        try:
            return self + (-CycNum.coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return CycNum.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return CycNum.rational(0)
            obj = CycNum.__new__(CycNum)
            obj.m, obj.c, obj._hash = self.m, tuple(x * other for x in self.c), None
            return obj
        try:
            L, a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        return CycNum._from_field(L, field_mul(L, a, b))

    __rmul__ = __mul__

    def inv(self) -> "CycNum":
        return CycNum._from_field(self.m, field_inv(self.m, self.c))

    def __truediv__(self, other):
        try:
            return self * CycNum.coerce(other).inv()
        except TypeError:
            return NotImplemented

    def __rtruediv__(self, other):
        return CycNum.coerce(other) * self.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        m = self.m
        res: list = [Fraction(1)] + [Fraction(0)] * (len(self.c) - 1)
        base = list(self.c)
        while k:
            if k & 1:
                res = field_mul(m, res, base)
            k >>= 1
            if k:
                base = field_mul(m, base, base)
        return CycNum._from_field(m, res)

    def galois(self, k: int) -> "CycNum":
        if math.gcd(k, self.m) != 1:
            raise ValueError("Galois exponent must be coprime to the conductor")
        return CycNum._from_field(self.m, field_galois(self.m, self.c, k))

    def conj(self) -> "CycNum":
        """Complex conjugation z -> z^-1."""
        return self.galois(-1 % self.m if self.m > 1 else 1)

    def abs2(self) -> "CycNum":
        return self * self.conj()

    def norm(self) -> Fraction:
        return field_norm_cofactor(self.m, self.c)[1] if self.m > 1 else self.c[0]

    # comparison --------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.m == 1 and self.c[0] == other
        if not isinstance(other, CycNum):
            return NotImplemented
        return self.m == other.m and self.c == other.c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.m, self.c)) if self.m > 1 else hash(self.c[0])
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    # conversion --------------------------------------------------------
    def to_complex(self) -> complex:
        re_, im_ = [], []
        for j, x in enumerate(self.c):
            if x:
                ang = 2.0 * math.pi * j / self.m
                fx = float(x)
                re_.append(fx * math.cos(ang))
                im_.append(fx * math.sin(ang))
        return complex(math.fsum(re_), math.fsum(im_))

    __complex__ = to_complex

    def __repr__(self):
        return f"CycNum({format_literal(self)!r})"

    def __str__(self):
        return format_literal(self)


def _sqrt_prime(p: int) -> CycNum:
    if p == 2:
        z = CycNum.zeta(8)
        return z + z.conj()
    # Gauss sum g with g^2 = (-1)^((p-1)/2) p
    g = sum((CycNum.zeta(p, j * j) for j in range(p)), CycNum.rational(0))
    if p % 4 == 1:
        return g
    return g * CycNum.zeta(4, 3)  # -i * (i sqrt p)


def zeta(m: int, k: int = 1) -> CycNum:
    return CycNum.zeta(m, k)


def root_of_unity_order(x: CycNum, limit: int | None = None) -> int | None:
    """Multiplicative order of x if it is a root of unity, else None."""
    if x.is_zero():
        return None
    limit = limit or 2 * x.m
    one = CycNum.rational(1)
    p = x
    for k in range(1, limit + 1):
        if p == one:
            return k
        p = p * x
    return None


def root_of_unity_exponent(x: CycNum) -> tuple[int, int]:
    """Return (N, a) with x = z_N^a, gcd(a, N) = 1."""
    n = root_of_unity_order(x)
    if n is None:
        raise ValueError(f"{x} is not a root of unity")
    for a in range(n):
        if math.gcd(a, n) == 1 and CycNum.zeta(n, a) == x:
            return n, a
    raise AssertionError("unreachable")


def quantum_integer(j: int, qhat: CycNum) -> CycNum:
    """[j] = (q^j - q^-j)/(q - q^-1)."""
    num = qhat ** j - qhat ** (-j)
    den = qhat - qhat.inv()
    return num / den


# --------------------------------------------------------------------------
# literal grammar
# --------------------------------------------------------------------------

_TERM = re.compile(
    r"""\s*(?P<sign>[+\-−])?\s*
        (?P<coef>\d+(?:/\d+)?)?\s*
        (?:(?P<star>\*)?\s*(?P<atom>z(?P<zm>\d+)(?:\^(?P<zk>-?\d+))?|(?P<var>[A-Za-z_]\w*)(?:\^(?P<vk>-?\d+))?))?
        \s*""",
    re.VERBOSE,
)


def parse_literal(text: str, variables: Mapping[str, CycNum] | None = None) -> CycNum:
    """Parse ``rational*zM^K`` terms joined by + and -, e.g. ``1/2*z8^1+1/2*z8^7``.

    Names in ``variables`` may appear in place of a ``zM^K`` atom.
    """
    variables = variables or {}
    s = text.strip()
    if not s:
        raise ValueError("empty literal")
    pos = 0
    total = CycNum.rational(0)
    first = True
    while pos < len(s):
        mt = _TERM.match(s, pos)
        if not mt or mt.end() == pos:
            raise ValueError(f"bad literal {text!r} at offset {pos}")
        if not first and not mt.group("sign"):
            raise ValueError(f"missing operator in {text!r} at offset {pos}")
        if not mt.group("coef") and not mt.group("atom"):
            raise ValueError(f"bad literal {text!r} at offset {pos}")
        if mt.group("star") and not (mt.group("coef") and mt.group("atom")):
            raise ValueError(f"dangling '*' in {text!r}")
        coef = Fraction(mt.group("coef")) if mt.group("coef") else Fraction(1)
        if mt.group("sign") in ("-", "−"):
            coef = -coef
        term = CycNum.rational(coef)
        if mt.group("zm"):
            m = int(mt.group("zm"))
            if m < 1:
                raise ValueError("conductor must be >= 1")
            term = term * CycNum.zeta(m, int(mt.group("zk") or 1))
        elif mt.group("var"):
            name = mt.group("var")
            if name not in variables:
                raise ValueError(f"unknown symbol {name!r} in {text!r}")
            term = term * (variables[name] ** int(mt.group("vk") or 1))
        total = total + term
        pos = mt.end()
        first = False
    return total


def format_literal(x: CycNum) -> str:
    parts = []
    for k, c in enumerate(x.c):
        if not c:
            continue
        mag = abs(c)
        sign = "-" if c < 0 else "+"
        body = str(mag) if k == 0 else f"{mag}*z{x.m}^{k}"
        parts.append((sign, body))
    if not parts:
        return "0"
    head_sign, head = parts[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, body in parts[1:]:
        out += sign + body
    return out


def parse_complex(text: str) -> complex:
    """Decimal ``a+bi`` strings."""
    t = text.strip().replace("−", "-").replace(" ", "")
    if t.endswith("i"):
        t = t[:-1] + "j"
    return complex(t)


def format_complex(z: complex) -> str:
    return f"{z.real!r}{z.imag:+.17g}i"


def isclose(a: complex, b: complex, tol: float = DEFAULT_TOL) -> bool:
    return abs(complex(a) - complex(b)) < tol


__all__ = [
    "CycNum",
    "DEFAULT_TOL",
    "cyclotomic_poly",
    "euler_phi",
    "format_literal",
    "parse_literal",
    "parse_complex",
    "format_complex",
    "power_table",
    "quantum_integer",
    "root_of_unity_order",
    "root_of_unity_exponent",
    "zeta",
]

