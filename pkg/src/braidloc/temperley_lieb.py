"""Temperley-Lieb images of R-matrices, Jones-Wenzl projectors, and the
dimension and multiplicity arithmetic of the simple quotient modules."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cyclo import CycNum, quantum_integer, root_of_unity_exponent, zeta
from .fusion import bratteli, sl2_level
from .matrix import SqMatrix, amplify
from .yang_baxter import RMatrixSpec


@dataclass(frozen=True)
class TLImage:
    """Idempotents E_1..E_{n-1} with E_i E_{i+-1} E_i = delta_inv_sq E_i."""

    n: int
    d: int
    q_ev: CycNum
    delta_inv_sq: CycNum
    E: tuple[SqMatrix, ...]


def tl_from_r(R: RMatrixSpec | SqMatrix, n: int, q_ev) -> TLImage:
    """E_i = (R_i + I) / (q_ev + 1), for R with spectrum in {-1, q_ev}."""
    spec = R if isinstance(R, RMatrixSpec) else RMatrixSpec.infer(R, check=False)
    q = CycNum.coerce(q_ev)
    if (q + 1).is_zero():
        raise ValueError("q_ev = -1 makes E undefined")
    local = spec.matrix.plus_scalar(1).scale((q + 1).inv())
    if not (local @ local) == local:
        raise ValueError("E = (R + I)/(q_ev + 1) is not idempotent; spectrum of R is not {-1, q_ev}")
    delta_inv_sq = q / ((q + 1) * (q + 1))
    E = tuple(amplify(local, i, n, spec.local_dim) for i in range(1, n))
    return TLImage(n, spec.local_dim, q, delta_inv_sq, E)


def check_tl_relations(tl: TLImage) -> bool:
    E = tl.E
    for e in E:
        if not (e @ e) == e:
            return False
    for i in range(len(E) - 1):
        a, b = E[i], E[i + 1]
        if not (a @ b @ a) == a.scale(tl.delta_inv_sq):
            return False
        if not (b @ a @ b) == b.scale(tl.delta_inv_sq):
            return False
    for i in range(len(E)):
        for j in range(i + 2, len(E)):
            if not (E[i] @ E[j]) == (E[j] @ E[i]):
                return False
    return True


@dataclass(frozen=True)
class JWProjector:
    level: int
    matrix: SqMatrix


def working_root(tl: TLImage) -> CycNum:
    """A square root of q_ev (both signs give the same recursion)."""
    N, a = root_of_unity_exponent(tl.q_ev)
    return zeta(2 * N, a)


def jones_wenzl(tl: TLImage, k: int, qhat: CycNum | None = None) -> JWProjector:
    """p_k by Wenzl's recursion p_{j+1} = p_j - ([j][2]/[j+1]) p_j E_j p_j, p_1 = I.

    The [2] factor converts the idempotents E_j to the loop-normalized
    generators [2] E_j.
    """
    if not 1 <= k <= tl.n:
        raise ValueError(f"level {k} outside 1..{tl.n}")
    qhat = working_root(tl) if qhat is None else CycNum.coerce(qhat)
    two = quantum_integer(2, qhat)
    if not two * two * tl.delta_inv_sq == 1:
        raise ValueError("[2]^2 at the working root does not match the loop parameter")
    dim = tl.d ** tl.n
    p = SqMatrix.identity(dim)
    for j in range(1, k):
        nxt = quantum_integer(j + 1, qhat)
        if nxt.is_zero():
            raise ZeroDivisionError(f"quantum integer [{j + 1}] vanishes")
        coeff = quantum_integer(j, qhat) * two / nxt
        p = p - (p @ tl.E[j - 1] @ p).scale(coeff)
    if not (p @ p) == p:
        raise AssertionError(f"p_{k} is not idempotent")
    for i in range(k - 1):
        if not (tl.E[i] @ p).is_zero():
            raise AssertionError(f"E_{i + 1} p_{k} != 0")
    return JWProjector(k, p)


def common_kernel_dim(tl: TLImage, k: int, tol: float = 1e-8) -> int:
    """Numerical dim of the joint kernel of E_1..E_{k-1}; equals rank p_k."""
    if k == 1:
        return tl.d ** tl.n
    stack = np.vstack([e.to_numpy() for e in tl.E[:k - 1]])
    s = np.linalg.svd(stack, compute_uv=False)
    return int((s < tol).sum() + stack.shape[1] - len(s))


def sl2_fp_dimension(ell: int, j: int) -> CycNum:
    """FP dimension of V_j at q = exp(pi i / ell), the quantum integer [j+1]."""
    return quantum_integer(j + 1, zeta(2 * ell, 1))


def simple_dims(ell: int, n: int) -> dict[str, int]:
    """Dimensions of the simple modules at level n, by Bratteli path counting."""
    if ell < 3 or n < 1:
        raise ValueError("need ell >= 3 and n >= 1")
    return bratteli(sl2_level(ell - 2), "V1", n).dims_at(n)


@dataclass(frozen=True)
class Infeasible:
    reason: str


def multiplicity_solve(ell: int, n: int, m: int) -> dict[str, int] | Infeasible:
    """The only multiplicity vector proportional to FP dimensions with <mu, d> = m^n."""
    if m < 1:
        raise ValueError("m must be >= 1")
    dims = simple_dims(ell, n)
    fp = {lab: sl2_fp_dimension(ell, int(lab[1:])) for lab in dims}
    pairing = CycNum.rational(0)
    for lab, d in dims.items():
        pairing = pairing + fp[lab] * d
    scale = CycNum.rational(m ** n) / pairing
    out = {}
    for lab in dims:
        mu = scale * fp[lab]
        if not mu.is_rational():
            return Infeasible(f"multiplicity of {lab} is irrational")
        f = mu.as_fraction()
        if f.denominator != 1 or f <= 0:
            return Infeasible(f"multiplicity of {lab} is {f}, not a positive integer")
        out[lab] = int(f)
    if sum(out[lab] * d for lab, d in dims.items()) != m ** n:
        raise AssertionError("pairing identity failed")
    return out


__all__ = [
    "Infeasible",
    "JWProjector",
    "TLImage",
    "check_tl_relations",
    "common_kernel_dim",
    "jones_wenzl",
    "multiplicity_solve",
    "simple_dims",
    "sl2_fp_dimension",
    "tl_from_r",
    "working_root",
]
