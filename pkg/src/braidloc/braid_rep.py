"""Braid group representations: words, evaluation, relations and finite-image probes."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import reduce
from typing import Sequence

import numpy as np

from .cyclo import CycNum
from .matrix import (
    EXACT,
    SqMatrix,
    amplify,
    is_unitary,
    mod_image,
    split_prime,
)
from .yang_baxter import RMatrixSpec, check_ybe

FINITE = "Finite"
EXCEEDS = "ExceedsBound"


@dataclass(frozen=True)
class BraidWord:
    """Word in sigma_1..sigma_{n-1}; letter +i is sigma_i, -i its inverse."""

    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if self.strands < 2:
            raise ValueError("a braid needs at least 2 strands")
        object.__setattr__(self, "letters", tuple(int(x) for x in self.letters))
        for x in self.letters:
            if x == 0 or abs(x) > self.strands - 1:
                raise ValueError(f"letter {x} out of range for {self.strands} strands")

    @classmethod
    def parse(cls, strands: int, text: str) -> "BraidWord":
        """Whitespace-separated signed integers, e.g. ``"1 2 -1"``."""
        return cls(strands, tuple(int(t.replace("−", "-")) for t in text.split()))

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if self.strands != other.strands:
            raise ValueError("strand counts differ")
        return BraidWord(self.strands, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strands, tuple(-x for x in reversed(self.letters)))


@dataclass
class RepSpec:
    """Images of sigma_1..sigma_{n-1}."""

    n: int
    generators: list[SqMatrix]
    _inverses: dict[int, SqMatrix] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if len(self.generators) != self.n - 1:
            raise ValueError(f"need {self.n - 1} generators, got {len(self.generators)}")
        dims = {g.dim for g in self.generators}
        backends = {g.backend for g in self.generators}
        if len(dims) > 1 or len(backends) > 1:
            raise ValueError("generators must share dimension and backend")

    @property
    def dim(self) -> int:
        return self.generators[0].dim

    @property
    def backend(self) -> str:
        return self.generators[0].backend

    def inverse_of(self, i: int) -> SqMatrix:
        """Image of sigma_i^{-1} (1-based)."""
        if i not in self._inverses:
            g = self.generators[i - 1]
            self._inverses[i] = g.adjoint() if is_unitary(g) else g.inverse()
        return self._inverses[i]


def rep_from_r(R: RMatrixSpec | SqMatrix, n: int, check: bool = True) -> RepSpec:
    """sigma_i -> I^(i-1) (x) R (x) I^(n-i-1) on W^(x)n."""
    spec = R if isinstance(R, RMatrixSpec) else RMatrixSpec.infer(R, check=check)
    if check and not check_ybe(spec):
        raise ValueError("matrix does not satisfy the Yang-Baxter equation")
    d = spec.local_dim
    gens = [amplify(spec.matrix, i, n, d) for i in range(1, n)]
    rep = RepSpec(n, gens)
    if n >= 2 and is_unitary(spec.matrix):
        for i, g in enumerate(gens, start=1):
            rep._inverses[i] = g.adjoint()
    return rep


def eval_word(rep: RepSpec, w: BraidWord) -> SqMatrix:
    if w.strands != rep.n:
        raise ValueError(f"word on {w.strands} strands, representation on {rep.n}")
    first = rep.generators[0]
    out = SqMatrix.identity(rep.dim, rep.backend, first.tol)
    for x in w.letters:
        out = out @ (rep.generators[x - 1] if x > 0 else rep.inverse_of(-x))
    return out


def check_braid_relations(rep: RepSpec) -> bool:
    """Far commutation and the braid relation for every applicable pair."""
    g = rep.generators
    for i in range(len(g)):
        for j in range(i + 2, len(g)):
            if not (g[i] @ g[j]) == (g[j] @ g[i]):
                return False
    for i in range(len(g) - 1):
        a, b = g[i], g[i + 1]
        if not (a @ b @ a) == (b @ a @ b):
            return False
    return True


def full_twist(n: int) -> BraidWord:
    """(sigma_1 ... sigma_{n-1})^n, central in B_n."""
    return BraidWord(n, tuple(range(1, n)) * n)


def _column_basis(P: SqMatrix) -> tuple[list[list[CycNum]], list[int]]:
    """Reduced basis of the column space of P: vector s has a 1 at pivots[s]
    and zeros at the other pivots."""
    rows = [[P.entry(i, j) for i in range(P.dim)] for j in range(P.dim)]  # columns of P
    basis, pivots = [], []
    for v in rows:
        for b, piv in zip(basis, pivots):
            if not v[piv].is_zero():
                c = v[piv]
                v = [x - c * y for x, y in zip(v, b)]
        piv = next((i for i, x in enumerate(v) if not x.is_zero()), None)
        if piv is None:
            continue
        inv = v[piv].inv()
        v = [x * inv for x in v]
        for k, b in enumerate(basis):
            if not b[piv].is_zero():
                c = b[piv]
                basis[k] = [x - c * y for x, y in zip(b, v)]
        basis.append(v)
        pivots.append(piv)
    return basis, pivots


def restrict(rep: RepSpec, P: SqMatrix) -> RepSpec:
    """The subrepresentation on the image of P, which must be invariant."""
    if rep.backend != EXACT:
        raise ValueError("restriction needs the exact backend")
    basis, pivots = _column_basis(P)
    if not basis:
        raise ValueError("projector has zero image")
    gens = []
    for g in rep.generators:
        rows = [[g.entry(i, j) for j in range(g.dim)] for i in range(g.dim)]
        images = [[sum((r[j] * b[j] for j in range(g.dim) if not b[j].is_zero()), CycNum.rational(0))
                   for r in rows] for b in basis]
        coords = [[img[piv] for piv in pivots] for img in images]
        for img, cs in zip(images, coords):
            rebuilt = [sum((c * b[i] for c, b in zip(cs, basis)), CycNum.rational(0))
                       for i in range(g.dim)]
            if rebuilt != img:
                raise ValueError("image of the projector is not invariant")
        k = len(basis)
        gens.append(SqMatrix.from_entries([[coords[s][r] for s in range(k)] for r in range(k)], EXACT))
    return RepSpec(rep.n, gens)


def central_split(rep: RepSpec, Z: SqMatrix, eigenvalues: Sequence) -> list[RepSpec]:
    """Restrictions of rep to the eigenspaces of a central, diagonalizable Z.

    Eigenspace projectors are the Lagrange interpolants prod_{mu != lam} (Z - mu)/(lam - mu).
    """
    lams = [CycNum.coerce(x) for x in eigenvalues]
    if len(set(lams)) != len(lams):
        raise ValueError("eigenvalues must be distinct")
    annihilator = SqMatrix.identity(Z.dim)
    for mu in lams:
        annihilator = annihilator @ Z.plus_scalar(-mu)
    if not annihilator.is_zero():
        raise ValueError("eigenvalue list does not cover the spectrum of Z")
    out = []
    for lam in lams:
        P = SqMatrix.identity(Z.dim)
        for mu in lams:
            if mu != lam:
                P = (P @ Z.plus_scalar(-mu)).scale((lam - mu).inv())
        if not P.is_zero():
            out.append(restrict(rep, P))
    return out


@dataclass(frozen=True)
class ProbeResult:
    status: str
    order: int | None
    elements_explored: int


def _common_field(gens: Sequence[SqMatrix]) -> list[SqMatrix]:
    L = reduce(lambda a, b: a * b // np.gcd(a, b), (g.m for g in gens), 1)
    return [g.in_field(int(L)) for g in gens]


def _mod_normalize(batch: np.ndarray, P: int) -> np.ndarray:
    flat = batch.reshape(batch.shape[0], -1)
    first = np.argmax(flat != 0, axis=1)
    lead = flat[np.arange(flat.shape[0]), first]
    inv = np.array([pow(int(x), -1, P) for x in lead], dtype=np.int64)
    return (flat * inv[:, None]) % P


def _modular_count(gens: Sequence[SqMatrix], bound: int) -> int | None:
    """Size of the projective image modulo a split prime, or None past ``bound``."""
    m = gens[0].m
    den = reduce(lambda a, b: a * b, (g.den for g in gens), 1)
    P, root = split_prime(m, avoid=den)
    images = [mod_image(g, P, root) for g in gens]
    n = gens[0].dim
    start = np.eye(n, dtype=np.int64).reshape(1, -1)
    seen = {start.tobytes()}
    frontier = start
    while frontier.shape[0]:
        new = []
        mats = frontier.reshape(-1, n, n)
        for a in images:
            prod = _mod_normalize(np.matmul(mats, a) % P, P)
            for row in prod:
                key = row.tobytes()
                if key not in seen:
                    seen.add(key)
                    new.append(row)
                    if len(seen) > bound:
                        return None
        frontier = np.array(new, dtype=np.int64).reshape(len(new), n * n)
    return len(seen)


def probe_image(rep: RepSpec, bound: int, modular_screen: bool = True) -> ProbeResult:
    """Order of the group generated by the generator images modulo scalars.

    BFS over projective normal forms. With ``modular_screen`` the closure is
    first grown modulo a split prime; reduction can only merge classes, so an
    overflow there already certifies ExceedsBound.
    """
    if rep.backend != "exact":
        raise ValueError("probe_image needs the exact backend (canonical hashing)")
    if bound < 1:
        raise ValueError("bound must be >= 1")
    gens = _common_field(rep.generators)
    if modular_screen:
        count = _modular_count(gens, bound)
        if count is None:
            return ProbeResult(EXCEEDS, None, bound + 1)
    ident = SqMatrix.identity(rep.dim).in_field(gens[0].m)
    seen = {ident.projective_key()}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = (x @ g).projective_normal_form()
            key = (y.m, y.den, tuple(int(v) for v in y.num.flat))
            if key not in seen:
                seen.add(key)
                queue.append(y)
                if len(seen) > bound:
                    return ProbeResult(EXCEEDS, None, len(seen))
    return ProbeResult(FINITE, len(seen), len(seen))


__all__ = [
    "BraidWord",
    "ProbeResult",
    "RepSpec",
    "central_split",
    "check_braid_relations",
    "full_twist",
    "eval_word",
    "probe_image",
    "rep_from_r",
    "restrict",
]
