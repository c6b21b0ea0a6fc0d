"""Fusion rings, Bratteli diagrams, Perron-Frobenius data and the
combinatorial localization test.

Convention: ``N[X][Z, Y]`` is the multiplicity of Z in X (x) Y. Inclusion
matrices of the Bratteli diagram are ``G_n[Y, Z] = N[X][Z, Y]`` for Y at
level n and Z at level n+1, so that ``d_{n+1} = G_n^T d_n``.
"""
from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np


class ReducibleError(ValueError):
    """The fusion graph of the object is not strongly connected."""


@dataclass(frozen=True)
class FusionRing:
    labels: tuple[str, ...]
    N: Mapping[str, np.ndarray]
    unit: int = 0
    aliases: Mapping[str, str] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        r = len(self.labels)
        if len(set(self.labels)) != r:
            raise ValueError("labels must be distinct")
        if not 0 <= self.unit < r:
            raise ValueError("unit index out of range")
        fixed = {}
        for key, mat in self.N.items():
            lab = self.resolve(key)
            a = np.asarray(mat)
            if a.shape != (r, r):
                raise ValueError(f"N[{lab}] has shape {a.shape}, expected ({r}, {r})")
            if not np.issubdtype(a.dtype, np.integer):
                if not np.all(a == np.round(a)):
                    raise ValueError(f"N[{lab}] has non-integer entries")
            a = a.astype(np.int64)
            if (a < 0).any():
                raise ValueError(f"N[{lab}] has negative entries")
            if not np.array_equal(a @ a.T, a.T @ a):
                raise ValueError(f"N[{lab}] is not normal")
            a.setflags(write=False)
            fixed[lab] = a
        u = self.labels[self.unit]
        if u in fixed and not np.array_equal(fixed[u], np.eye(r, dtype=np.int64)):
            raise ValueError("fusion matrix of the unit must be the identity")
        fixed.setdefault(u, np.eye(r, dtype=np.int64))
        object.__setattr__(self, "N", fixed)
        object.__setattr__(self, "aliases", dict(self.aliases))

    @property
    def rank(self) -> int:
        return len(self.labels)

    def resolve(self, label: str) -> str:
        if label in self.labels:
            return label
        if label in self.aliases:
            return self.aliases[label]
        raise KeyError(f"unknown object {label!r}")

    def index(self, label: str) -> int:
        return self.labels.index(self.resolve(label))

    def fusion_matrix(self, label: str) -> np.ndarray:
        lab = self.resolve(label)
        if lab not in self.N:
            raise KeyError(f"fusion matrix of {lab!r} is not part of this ring's data")
        return self.N[lab]

    def relabel(self, perm: Sequence[int]) -> "FusionRing":
        """Ring with label ``i`` moved to position ``perm[i]``."""
        r = self.rank
        inv = [0] * r
        for i, j in enumerate(perm):
            inv[j] = i
        labels = tuple(self.labels[inv[j]] for j in range(r))
        N = {k: v[np.ix_(inv, inv)] for k, v in self.N.items()}
        return FusionRing(labels, N, perm[self.unit], self.aliases, self.name)

    def dimensions(self) -> np.ndarray:
        """FP dimension vector (unit = 1) from the sum of the known fusion matrices."""
        A = sum(self.N.values())
        vec, _ = _perron(A.astype(np.float64))
        return vec / vec[self.unit]

    def to_json(self) -> dict:
        return {"labels": list(self.labels), "unit": self.labels[self.unit],
                "N": {k: v.tolist() for k, v in self.N.items()}}

    @classmethod
    def from_json(cls, obj: Mapping) -> "FusionRing":
        labels = tuple(obj["labels"])
        unit = obj.get("unit", 0)
        unit = labels.index(unit) if isinstance(unit, str) else int(unit)
        N = {k: np.array(v, dtype=np.int64) for k, v in obj["N"].items()}
        return cls(labels, N, unit, obj.get("aliases", {}), obj.get("name", ""))

    @classmethod
    def load(cls, path: str | Path) -> "FusionRing":
        return cls.from_json(json.loads(Path(path).read_text()))


def _from_rules(labels: Sequence[str], rules: Mapping[str, Mapping[str, Sequence[str]]],
                **kw) -> FusionRing:
    """rules[X][Y] = list of Z (with repetition) in X (x) Y."""
    idx = {lab: i for i, lab in enumerate(labels)}
    N = {}
    for x, row in rules.items():
        a = np.zeros((len(labels), len(labels)), dtype=np.int64)
        for y, zs in row.items():
            for z in zs:
                a[idx[z], idx[y]] += 1
        N[x] = a
    return FusionRing(tuple(labels), N, **kw)


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

_SL2_ALIASES = {
    1: {"1": "V0", "X": "V1"},
    2: {"1": "V0", "X": "V1", "Z": "V2"},
    3: {"1": "V0", "X": "V1", "Y": "V2", "Z": "V3"},
    4: {"1": "V0", "X": "V1", "Y": "V2", "X'": "V3", "Z": "V4"},
}


def sl2_level(k: int) -> FusionRing:
    """Truncated Clebsch-Gordan ring of su(2) at level k (objects V0..Vk)."""
    if k < 1:
        raise ValueError("level must be >= 1")
    labels = [f"V{a}" for a in range(k + 1)]
    N = {}
    for a in range(k + 1):
        m = np.zeros((k + 1, k + 1), dtype=np.int64)
        for b in range(k + 1):
            for c in range(abs(a - b), min(a + b, 2 * k - a - b) + 1, 2):
                m[c, b] += 1
        N[labels[a]] = m
    return FusionRing(tuple(labels), N, 0, _SL2_ALIASES.get(k, {"1": "V0", "X": "V1"}),
                      f"sl2_level({k})")


def fibonacci() -> FusionRing:
    return _from_rules(["1", "Y"], {"Y": {"1": ["Y"], "Y": ["1", "Y"]}}, name="fibonacci")


def ising() -> FusionRing:
    return _from_rules(
        ["1", "X", "Z"],
        {"X": {"1": ["X"], "X": ["1", "Z"], "Z": ["X"]},
         "Z": {"1": ["Z"], "X": ["X"], "Z": ["1"]}},
        name="ising")


def _odd_n(N: int) -> int:
    if N < 3 or N % 2 == 0:
        raise ValueError(f"N = {N} must be odd and >= 3")
    return (N - 1) // 2


def so_level1_odd(N: int) -> FusionRing:
    """SO(N) level 1, N odd: Ising rules on (0, eps, lam1)."""
    _odd_n(N)
    return _from_rules(
        ["0", "eps", "lam1"],
        {"eps": {"0": ["eps"], "eps": ["0", "lam1"], "lam1": ["eps"]},
         "lam1": {"0": ["lam1"], "eps": ["eps"], "lam1": ["0"]}},
        aliases={"X": "eps"}, name=f"so_level1_odd({N})")


def so_level1_even(N: int) -> FusionRing:
    """SO(N) level 1, N = 2r even: four invertibles forming Z4 (r odd) or Z2 x Z2 (r even)."""
    if N < 4 or N % 2:
        raise ValueError(f"N = {N} must be even and >= 4")
    r = N // 2
    labels = ["0", "lam1", "lam_r-1", "lam_r"]
    # group elements: 0 -> 0, lam1 -> 2, spinors -> 1, 3 in Z4; or pairs in Z2 x Z2
    if r % 2:
        elem = {"0": 0, "lam1": 2, "lam_r-1": 3, "lam_r": 1}
        op = lambda a, b: (a + b) % 4
    else:
        elem = {"0": (0, 0), "lam1": (1, 1), "lam_r-1": (1, 0), "lam_r": (0, 1)}
        op = lambda a, b: ((a[0] + b[0]) % 2, (a[1] + b[1]) % 2)
    back = {v: k for k, v in elem.items()}
    rules = {x: {y: [back[op(elem[x], elem[y])]] for y in labels} for x in labels}
    return _from_rules(labels, rules, aliases={"X": "lam_r-1"}, name=f"so_level1_even({N})")


def so_level2_odd(N: int) -> FusionRing:
    """SO(N) level 2, N = 2r+1: only the spin object's fusion matrix is built."""
    r = _odd_n(N)
    gammas = [f"gamma{i}" for i in range(1, r + 1)]
    labels = ["0", "2lam1", *gammas, "eps", "eps'"]
    rule = {"0": ["eps"], "2lam1": ["eps'"], "eps": ["0", *gammas], "eps'": ["2lam1", *gammas]}
    rule.update({g: ["eps", "eps'"] for g in gammas})
    return _from_rules(labels, {"eps": rule}, aliases={"X": "eps"}, name=f"so_level2_odd({N})")


CATALOG = {
    "sl2_level": sl2_level,
    "fibonacci": fibonacci,
    "ising": ising,
    "so_level1_odd": so_level1_odd,
    "so_level1_even": so_level1_even,
    "so_level2_odd": so_level2_odd,
}


def catalog(name: str, *params: int) -> FusionRing:
    if name == "so_level2_even":
        raise ValueError("so_level2_even is not supported: its fusion rules are incomplete")
    if name not in CATALOG:
        raise ValueError(f"unknown catalog ring {name!r}; known: {', '.join(CATALOG)}")
    return CATALOG[name](*params)


# ---------------------------------------------------------------------------
# exact integer linear algebra
# ---------------------------------------------------------------------------

def int_det(a: np.ndarray) -> int:
    """Determinant of an integer matrix by fraction-free (Bareiss) elimination."""
    M = [[int(x) for x in row] for row in a]
    n = len(M)
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1] if n else 1


def is_integer_eigenvalue(a: np.ndarray, c: int) -> bool:
    return int_det(a - c * np.eye(a.shape[0], dtype=np.int64)) == 0


def rational_kernel_vector(a: np.ndarray) -> list[Fraction] | None:
    """A nonzero rational vector v with a v = 0 when the kernel is one-dimensional."""
    n = a.shape[1]
    M = [[Fraction(int(x)) for x in row] for row in a]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        return None
    v = [Fraction(0)] * n
    v[free[0]] = Fraction(1)
    for row, c in zip(M, pivots):
        v[c] = -row[free[0]]
    return v


# ---------------------------------------------------------------------------
# Perron-Frobenius
# ---------------------------------------------------------------------------

def _perron(A: np.ndarray, tol: float = 1e-12, max_iter: int = 100000) -> tuple[np.ndarray, float]:
    """FP eigenvector and eigenvalue of a nonnegative irreducible matrix.

    Iterates with A + I, which is primitive, so the iteration converges even
    for periodic A; the positive iterate stays positive.
    """
    n = A.shape[0]
    B = A + np.eye(n)
    v = np.ones(n) / n
    lam = 0.0
    for _ in range(max_iter):
        w = B @ v
        new = w.sum()
        w /= new
        if np.abs(w - v).max() < tol and abs(new - lam) < tol * max(1.0, new):
            v, lam = w, new
            break
        v, lam = w, new
    return v, lam - 1.0


def _strongly_connected(adj: np.ndarray) -> bool:
    n = adj.shape[0]
    for mat in (adj, adj.T):
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in np.flatnonzero(mat[u]):
                if v not in seen:
                    seen.add(int(v))
                    stack.append(int(v))
        if len(seen) != n:
            return False
    return True


def generated_labels(ring: FusionRing, X: str) -> list[int]:
    """Indices reachable from the unit by repeatedly fusing with X."""
    A = ring.fusion_matrix(X)
    seen = {ring.unit}
    queue = deque([ring.unit])
    while queue:
        y = queue.popleft()
        for z in np.flatnonzero(A[:, y]):
            if int(z) not in seen:
                seen.add(int(z))
                queue.append(int(z))
    return sorted(seen)


def _restricted(ring: FusionRing, X: str) -> tuple[list[int], np.ndarray]:
    S = generated_labels(ring, X)
    A = ring.fusion_matrix(X)[np.ix_(S, S)]
    if not _strongly_connected(A > 0):
        raise ReducibleError(f"{ring.resolve(X)} does not generate a connected fusion graph")
    return S, A


@dataclass(frozen=True)
class FPDim:
    value: float
    square_integer: bool
    square: int | None


def fpdim(ring: FusionRing, X: str) -> FPDim:
    """FP dimension of X, with an exact verdict on whether its square is an integer.

    The candidate c = round(value^2) is certified by det(N_X^2 - c I) = 0.
    """
    _, A = _restricted(ring, X)
    _, lam = _perron(A.astype(np.float64))
    c = round(lam * lam)
    ok = abs(lam * lam - c) < 1e-6 and is_integer_eigenvalue(A @ A, c)
    return FPDim(float(lam), ok, c if ok else None)


@dataclass(frozen=True)
class PeriodData:
    period: int
    parts: list[list[str]]
    blocks: list[np.ndarray]


def _levels_from_unit(ring: FusionRing, S: list[int], A: np.ndarray) -> dict[int, int]:
    pos = {s: i for i, s in enumerate(S)}
    start = pos[ring.unit]
    level = {start: 0}
    queue = deque([start])
    while queue:
        y = queue.popleft()
        for z in np.flatnonzero(A[:, y]):
            if int(z) not in level:
                level[int(z)] = level[y] + 1
                queue.append(int(z))
    return level


def period_and_blocks(ring: FusionRing, X: str) -> PeriodData:
    """Period of N_X, the residue classes of path length from the unit, and
    the primitive diagonal blocks of (N_X^T)^p."""
    S, A = _restricted(ring, X)
    level = _levels_from_unit(ring, S, A)
    p = 0
    for y in range(len(S)):
        for z in np.flatnonzero(A[:, y]):
            p = math.gcd(p, level[y] + 1 - level[int(z)])
    p = abs(p) or 1
    parts_idx = [[i for i in range(len(S)) if level[i] % p == r] for r in range(p)]
    G = np.linalg.matrix_power(A.T.astype(object), p).astype(np.int64)
    blocks = [G[np.ix_(part, part)] for part in parts_idx]
    parts = [[ring.labels[S[i]] for i in part] for part in parts_idx]
    return PeriodData(p, parts, blocks)


@dataclass(frozen=True)
class BratteliData:
    base: str
    levels: list[list[str]]
    inclusions: list[np.ndarray]
    dims: list[np.ndarray]
    period: int
    depth: int | None

    def dims_at(self, n: int) -> dict[str, int]:
        return {lab: int(v) for lab, v in zip(self.levels[n - 1], self.dims[n - 1])}


def bratteli(ring: FusionRing, X: str, L: int = 12) -> BratteliData:
    """Levels 1..L of the Bratteli diagram of the tower End(X^n)."""
    if L < 1:
        raise ValueError("depth must be >= 1")
    A = ring.fusion_matrix(X)
    x = ring.index(X)
    levels = [[x]]
    dims = [np.array([1], dtype=object)]
    incl = []
    for _ in range(L - 1):
        cur = levels[-1]
        nxt = sorted({int(z) for y in cur for z in np.flatnonzero(A[:, y])})
        G = A[np.ix_(nxt, cur)].T.astype(object)
        d = G.T.dot(dims[-1])
        full = A[:, cur].astype(object).dot(dims[-1])
        if any(full[i] for i in range(ring.rank) if i not in nxt) or list(full[nxt]) != list(d):
            raise AssertionError("inclusion recursion d_{n+1} = G_n^T d_n violated")
        levels.append(nxt)
        incl.append(G)
        dims.append(d)
    p, depth = 1, None
    for per in range(1, L):
        hit = next((k for k in range(L - per)
                    if all(levels[j] == levels[j + per] for j in range(k, L - per))), None)
        if hit is not None:
            p, depth = per, hit + 1
            break
    names = [[ring.labels[i] for i in lev] for lev in levels]
    return BratteliData(ring.resolve(X), names, incl, dims, p, depth)


@dataclass(frozen=True)
class LocalizationReport:
    object: str
    fpdim: float
    fpdim_sq_integer: bool
    fpdim_sq: int | None
    period: int
    parts: list[list[str]]
    blocks: list[np.ndarray]
    lambdas: list[float]
    lambda_integral: list[bool]
    candidate_vectors: list[list[Fraction] | None]
    verdict: str
    m: int | None = None
    a_vectors: list[list[int]] | None = None

    def to_json(self) -> dict:
        return {
            "object": self.object,
            "fpdim": self.fpdim,
            "fpdim_sq_integer": self.fpdim_sq_integer,
            "fpdim_sq": self.fpdim_sq,
            "period": self.period,
            "parts": self.parts,
            "blocks": [b.tolist() for b in self.blocks],
            "lambdas": self.lambdas,
            "lambda_integral": self.lambda_integral,
            "candidate_vectors": [None if v is None else [str(x) for x in v]
                                  for v in self.candidate_vectors],
            "verdict": self.verdict,
            "m": self.m,
            "a_vectors": self.a_vectors,
        }


OBSTRUCTED = "Obstructed"
PASSES = "NecessaryConditionsPass"


def _block_lambda(B: np.ndarray) -> tuple[float, bool, int]:
    _, lam = _perron(B.astype(np.float64))
    c = round(lam)
    ok = abs(lam - c) < 1e-6 and is_integer_eigenvalue(B, c)
    return float(lam), bool(ok), c


def _primitive_integer(v: list[Fraction]) -> list[Fraction]:
    den = reduce(lambda a, b: a * b // math.gcd(a, b), (x.denominator for x in v), 1)
    ints = [int(x * den) for x in v]
    g = reduce(math.gcd, ints, 0) or 1
    if sum(ints) < 0:
        g = -g
    return [Fraction(x, g) for x in ints]


def localization_sequence(brat: BratteliData, parts: list[list[str]],
                          vectors: list[list[Fraction]], m: int) -> list[list[int]] | None:
    """a_n = s_n u restricted to level n, with s_n fixed by m^n = <a_n, d_n>.

    Returns None unless every a_n is a positive integer vector satisfying
    m a_n = G_n a_{n+1}.
    """
    lookup = {}
    for part, vec in zip(parts, vectors):
        for lab, x in zip(part, vec):
            lookup[lab] = x
    out = []
    for n, (lev, d) in enumerate(zip(brat.levels, brat.dims), start=1):
        u = [lookup[lab] for lab in lev]
        pair = sum(x * int(y) for x, y in zip(u, d))
        if pair <= 0:
            return None
        s = Fraction(m ** n) / pair
        a = [s * x for x in u]
        if any(x.denominator != 1 or x <= 0 for x in a):
            return None
        out.append([int(x) for x in a])
    for n, G in enumerate(brat.inclusions):
        lhs = [m * x for x in out[n]]
        rhs = list(G.dot(np.array(out[n + 1], dtype=object)))
        if lhs != rhs:
            return None
    return out


def localization_obstruction(ring: FusionRing, X: str, L: int = 12) -> LocalizationReport:
    """Necessary conditions for a combinatorial localization of X's tensor powers."""
    fp = fpdim(ring, X)
    pd = period_and_blocks(ring, X)
    lambdas, integral, vectors = [], [], []
    for B in pd.blocks:
        lam, ok, c = _block_lambda(B)
        lambdas.append(lam)
        integral.append(bool(ok))
        v = rational_kernel_vector(B - c * np.eye(B.shape[0], dtype=np.int64)) if ok else None
        vectors.append(_primitive_integer(v) if v is not None else None)
    passes = fp.square_integer and all(integral)
    m = seq = None
    if passes:
        root = math.isqrt(fp.square)
        m = root if root * root == fp.square else fp.square
        if all(v is not None for v in vectors):
            seq = localization_sequence(bratteli(ring, X, L), pd.parts, vectors, m)
    return LocalizationReport(
        object=ring.resolve(X), fpdim=fp.value, fpdim_sq_integer=fp.square_integer,
        fpdim_sq=fp.square, period=pd.period, parts=pd.parts, blocks=pd.blocks,
        lambdas=lambdas, lambda_integral=integral, candidate_vectors=vectors,
        verdict=PASSES if passes else OBSTRUCTED, m=m, a_vectors=seq)


__all__ = [
    "CATALOG",
    "BratteliData",
    "FPDim",
    "FusionRing",
    "LocalizationReport",
    "OBSTRUCTED",
    "PASSES",
    "PeriodData",
    "ReducibleError",
    "bratteli",
    "catalog",
    "fibonacci",
    "fpdim",
    "generated_labels",
    "int_det",
    "ising",
    "localization_obstruction",
    "localization_sequence",
    "period_and_blocks",
    "sl2_level",
    "so_level1_even",
    "so_level1_odd",
    "so_level2_odd",
]
