"""Extraspecial-type algebras ES(omega, n-1), Gaussian braid representations,
and their local form on (C^p)^(x)n.

Monomial operators (a permutation times p-th roots of unity) are kept as
index arrays, which makes the relation checks cheap even at p^4 dims.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

import numpy as np

from .braid_rep import RepSpec, central_split, check_braid_relations, eval_word, full_twist
from .cyclo import CycNum, power_table, root_of_unity_exponent, zeta
from .matrix import SqMatrix, is_unitary
from .yang_baxter import Finite, RMatrixSpec, check_ybe, projective_order


def _is_odd_prime(p: int) -> bool:
    return p > 2 and all(p % f for f in range(2, int(p ** 0.5) + 1))


@dataclass(frozen=True)
class MonomialOp:
    """Sends basis vector j to z_p^phase[j] * e_{perm[j]}."""

    p: int
    perm: np.ndarray
    phase: np.ndarray

    @classmethod
    def identity(cls, p: int, dim: int) -> "MonomialOp":
        return cls(p, np.arange(dim), np.zeros(dim, dtype=np.int64))

    @property
    def dim(self) -> int:
        return len(self.perm)

    def __matmul__(self, other: "MonomialOp") -> "MonomialOp":
        return MonomialOp(self.p, self.perm[other.perm],
                          (other.phase + self.phase[other.perm]) % self.p)

    def __pow__(self, k: int) -> "MonomialOp":
        if k < 0:
            raise ValueError("negative powers are not supported")
        out, base = MonomialOp.identity(self.p, self.dim), self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def scaled(self, k: int) -> "MonomialOp":
        """Multiply by z_p^k."""
        return MonomialOp(self.p, self.perm, (self.phase + k) % self.p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MonomialOp):
            return NotImplemented
        return (self.p == other.p and np.array_equal(self.perm, other.perm)
                and np.array_equal(self.phase, other.phase))

    __hash__ = None

    def is_identity(self) -> bool:
        return bool((self.perm == np.arange(self.dim)).all() and not self.phase.any())

    def trace(self) -> CycNum:
        fixed = np.flatnonzero(self.perm == np.arange(self.dim))
        counts = np.bincount(self.phase[fixed] % self.p, minlength=self.p)
        return sum((CycNum.zeta(self.p, k) * int(c) for k, c in enumerate(counts) if c),
                   CycNum.rational(0))

    def planes(self, coeff_exp: int = 0) -> np.ndarray:
        """Integer power-basis planes over Q(z_p) of z_p^coeff_exp * self."""
        tab = np.array(power_table(self.p), dtype=np.int64)
        out = np.zeros((self.p - 1, self.dim, self.dim), dtype=np.int64)
        cols = np.arange(self.dim)
        out[:, self.perm, cols] = tab[(self.phase + coeff_exp) % self.p].T
        return out

    def to_matrix(self) -> SqMatrix:
        return SqMatrix.exact(self.p, self.planes(), 1)


def _monomial_sum(ops: list[MonomialOp], coeff_exps: list[int]) -> SqMatrix:
    total = sum(op.planes(c) for op, c in zip(ops, coeff_exps))
    return SqMatrix.exact(ops[0].p, total, 1)


def check_es_relations(ops: list[MonomialOp], p: int, omega_exponent: int) -> dict[str, bool]:
    """u^p = 1; u_i u_{i+1} = omega^-2 u_{i+1} u_i; far commutation."""
    w2 = (-2 * omega_exponent) % p
    return {
        "order_p": all((u ** p).is_identity() for u in ops),
        "adjacent": all(ops[i] @ ops[i + 1] == (ops[i + 1] @ ops[i]).scaled(w2)
                        for i in range(len(ops) - 1)),
        "far_commute": all(ops[i] @ ops[j] == ops[j] @ ops[i]
                           for i in range(len(ops)) for j in range(i + 2, len(ops))),
    }


@dataclass
class ESRep:
    """Left-regular representation of ES(omega, n-1) on normal-form monomials
    u_1^a_1 ... u_{n-1}^a_{n-1}, omega = z_p^omega_exponent."""

    p: int
    omega_exponent: int
    n: int
    ops: list[MonomialOp] = field(repr=False)

    @property
    def omega(self) -> CycNum:
        return zeta(self.p, self.omega_exponent)

    @property
    def dim(self) -> int:
        return self.p ** (self.n - 1)

    @cached_property
    def u(self) -> list[SqMatrix]:
        return [op.to_matrix() for op in self.ops]

    def relations(self) -> dict[str, bool]:
        return check_es_relations(self.ops, self.p, self.omega_exponent)


def es_rep(p: int, n: int, omega_exponent: int = 1) -> ESRep:
    """u_i . m(a) = omega^(2 a_{i-1}) m(a + e_i): moving u_i left past u_{i-1}^a
    costs omega^(2a), everything else commutes."""
    if not _is_odd_prime(p):
        raise ValueError(f"p = {p} is not an odd prime")
    if n < 2:
        raise ValueError("need n >= 2")
    if omega_exponent % p == 0:
        raise ValueError("omega must be a primitive p-th root of unity")
    k = n - 1
    exps = np.array(list(product(range(p), repeat=k)), dtype=np.int64)  # row r = exponents a_1..a_k
    weights = p ** np.arange(k - 1, -1, -1)
    ops = []
    for i in range(k):
        shifted = exps.copy()
        shifted[:, i] = (shifted[:, i] + 1) % p
        perm = shifted @ weights
        phase = (2 * omega_exponent * exps[:, i - 1]) % p if i > 0 else np.zeros(len(exps), np.int64)
        ops.append(MonomialOp(p, perm, phase))
    rep = ESRep(p, omega_exponent, n, ops)
    rel = rep.relations()
    if not all(rel.values()):
        raise AssertionError(f"ES relations failed: {rel}")
    return rep


def gauss_sum(p: int, omega_exponent: int = 1) -> CycNum:
    return sum((zeta(p, omega_exponent * j * j) for j in range(p)), CycNum.rational(0))


def auto_zeta(p: int, omega_exponent: int = 1) -> CycNum:
    """conj(g)/p with g the quadratic Gauss sum; |g|^2 = p makes it a unit multiple of 1/sqrt(p)."""
    return gauss_sum(p, omega_exponent).conj() / p


def _resolve_zeta(p: int, omega_exponent: int, zeta_value) -> CycNum:
    if zeta_value is None:
        return auto_zeta(p, omega_exponent)
    z = CycNum.coerce(zeta_value)
    if not z.abs2() * p == 1:
        raise ValueError("normalization must satisfy |zeta|^2 = 1/p")
    return z


def gaussian_sum(op: MonomialOp, omega_exponent: int) -> SqMatrix:
    """sum_j omega^(j^2) op^j."""
    p = op.p
    powers, acc = [], MonomialOp.identity(p, op.dim)
    for _ in range(p):
        powers.append(acc)
        acc = acc @ op
    return _monomial_sum(powers, [(omega_exponent * j * j) % p for j in range(p)])


def gaussian_rep(es: ESRep, zeta_value=None) -> RepSpec:
    """gamma_n(sigma_i) = zeta sum_j omega^(j^2) u_i^j on the regular representation."""
    z = _resolve_zeta(es.p, es.omega_exponent, zeta_value)
    gens = [gaussian_sum(op, es.omega_exponent).scale(z) for op in es.ops]
    for g in gens:
        if not is_unitary(g):
            raise AssertionError("Gaussian generator is not unitary")
    rep = RepSpec(es.n, gens)
    if not check_braid_relations(rep):
        raise AssertionError("Gaussian generators violate the braid relations")
    return rep


def local_u_op(p: int, omega_exponent: int = 1) -> MonomialOp:
    """U(b_i (x) b_j) = omega^(i-j) b_{i+1} (x) b_{j+1}, basis index i*p + j."""
    i, j = np.divmod(np.arange(p * p), p)
    perm = ((i + 1) % p) * p + (j + 1) % p
    phase = (omega_exponent * (i - j)) % p
    return MonomialOp(p, perm, phase)


def local_u(p: int, omega_exponent: int = 1) -> SqMatrix:
    if not _is_odd_prime(p):
        raise ValueError(f"p = {p} is not an odd prime")
    U = local_u_op(p, omega_exponent)
    if not (U ** p).is_identity():
        raise AssertionError("U^p != I")
    M = U.to_matrix()
    if not is_unitary(M):
        raise AssertionError("U is not unitary")
    return M


def place_monomial(op: MonomialOp, offset: int, n: int, d: int) -> MonomialOp:
    """I^(offset) (x) op (x) I^(rest) for an operator on d^k dims."""
    k = round(np.log(op.dim) / np.log(d))
    left, right = d ** offset, d ** (n - offset - k)
    idx = np.arange(d ** n)
    a, rem = np.divmod(idx, op.dim * right)
    b, c = np.divmod(rem, right)
    perm = (a * op.dim + op.perm[b]) * right + c
    return MonomialOp(op.p, perm, op.phase[b].copy())


def local_u_ops(p: int, n: int, omega_exponent: int = 1) -> list[MonomialOp]:
    U = local_u_op(p, omega_exponent)
    return [place_monomial(U, i, n, p) for i in range(n - 1)]


def local_r(p: int, zeta_value=None, omega_exponent: int = 1) -> RMatrixSpec:
    """R = zeta sum_j omega^(j^2) U^j on C^p (x) C^p."""
    if not _is_odd_prime(p):
        raise ValueError(f"p = {p} is not an odd prime")
    z = _resolve_zeta(p, omega_exponent, zeta_value)
    R = gaussian_sum(local_u_op(p, omega_exponent), omega_exponent).scale(z)
    rel = check_es_relations(local_u_ops(p, 4, omega_exponent), p, omega_exponent)
    if not all(rel.values()):
        raise AssertionError(f"local U fails the ES relations: {rel}")
    if not is_unitary(R):
        raise AssertionError("local R is not unitary")
    spec = RMatrixSpec(p, R, check=False)
    if not check_ybe(spec):
        raise AssertionError("local R fails the Yang-Baxter equation")
    return spec


def trace_criterion(p: int, omega_exponent: int = 1) -> bool:
    """Tr(U_1^a U_2^b) = 0 on (C^p)^(x)3 for (a, b) != (0, 0) and Tr(I) = p^3,
    and Tr(U^a) = 0 on C^p (x) C^p for a != 0.

    The trace form is then nondegenerate on the p^2 normal-form monomials, so
    u_i -> U_i is injective on ES(omega, 2).
    """
    U1, U2 = local_u_ops(p, 3, omega_exponent)
    for a in range(p):
        for b in range(p):
            t = ((U1 ** a) @ (U2 ** b)).trace()
            if not t == (p ** 3 if a == b == 0 else 0):
                return False
    U = local_u_op(p, omega_exponent)
    return all((U ** a).trace() == (p * p if a == 0 else 0) for a in range(p))


def normalizes(rep: RepSpec, es: ESRep) -> bool:
    """gamma(sigma_i) u_j gamma(sigma_i)^-1 is monomial for all i, j."""
    for g in rep.generators:
        ginv = g.adjoint()
        for u in es.u:
            if not (g @ u @ ginv).is_monomial():
                return False
    return True


def split_by_full_twist(rep: RepSpec) -> list[RepSpec]:
    """Restrict to the eigenspaces of the image of the central full twist.

    On the Gaussian representation the full twist of B_3 acts as the
    symplectic -I, so the pieces are the even and odd Weil summands.
    """
    Z = eval_word(rep, full_twist(rep.n))
    k = projective_order(Z, 4 * rep.dim)
    if not isinstance(k, Finite):
        raise ValueError("full twist has no finite projective order")
    if k.order == 1:
        return [rep]
    c = (Z ** k.order).entry(0, 0)
    N, a = root_of_unity_exponent(c)
    # eigenvalues are lam * z_k^j with lam^k = c
    lam = zeta(N * k.order, a)
    candidates = [lam * zeta(k.order, j) for j in range(k.order)]
    return central_split(rep, Z, candidates)


__all__ = [
    "ESRep",
    "MonomialOp",
    "auto_zeta",
    "check_es_relations",
    "es_rep",
    "gauss_sum",
    "gaussian_rep",
    "gaussian_sum",
    "local_r",
    "local_u",
    "local_u_op",
    "local_u_ops",
    "normalizes",
    "place_monomial",
    "split_by_full_twist",
    "trace_criterion",
]
