"""Exact and approximate polynomial degree of boolean functions.

Monomials are bit masks over the input positions, laid out like input
codes (position ``i`` of ``n`` is bit ``n - i``), so monomial ``S`` is 1 on
input ``x`` exactly when ``S & x == S``.

Degree feasibility is a linear program over the coefficients of all
monomials of size at most ``d``: equalities for a representing polynomial,
a band ``|p(x) - F(x)| <= eps`` for an approximating one.  Small instances
are solved in exact rationals, larger ones with HiGHS and a margin.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

import numpy as np
from scipy.optimize import linprog

from . import exactlp
from .functions import FunctionError, PartialFunction, truth_table_function
from .measures import measure_report

COEF_TOL = 1e-12
FLOAT_MARGIN = 1e-7
EXACT_MAX_N = 4
EXACT_MAX_DOMAIN = 64
THIRD = Fraction(1, 3)


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class MultilinearPolynomial:
    """Real multilinear polynomial ``sum_S c_S prod_{i in S} x_i``."""

    n: int
    coefficients: Mapping[int, float | Fraction]

    def __post_init__(self):
        clean = {int(S): c for S, c in self.coefficients.items() if c != 0}
        if any(S < 0 or S >> self.n for S in clean):
            raise ValueError("monomial mask outside the n input positions")
        object.__setattr__(self, "coefficients", dict(sorted(clean.items())))

    def __call__(self, x) -> float | Fraction:
        code = int(x, 2) if isinstance(x, str) else int(x)
        return sum((c for S, c in self.coefficients.items() if S & code == S), Fraction(0))

    def evaluate_all(self, codes) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        out = np.zeros(len(codes))
        for S, c in self.coefficients.items():
            out += float(c) * ((codes & S) == S)
        return out

    def degree(self, tol: float = COEF_TOL) -> int:
        sizes = [_popcount(S) for S, c in self.coefficients.items() if abs(c) > tol]
        return max(sizes, default=0)

    def monomial(self, S: int) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.n + 1) if (S >> (self.n - i)) & 1)

    def to_pairs(self) -> list[tuple[int, float | Fraction]]:
        """``(subset bitmask, coefficient)`` pairs in increasing mask order."""
        return list(self.coefficients.items())

    @classmethod
    def from_pairs(cls, n: int, pairs) -> "MultilinearPolynomial":
        coef: dict[int, float | Fraction] = {}
        for S, c in pairs:
            coef[S] = coef.get(S, 0) + c
        return cls(n, coef)

    def one_minus(self) -> "MultilinearPolynomial":
        coef = {S: -c for S, c in self.coefficients.items()}
        coef[0] = coef.get(0, 0) + 1
        return MultilinearPolynomial(self.n, coef)

    def __str__(self):
        if not self.coefficients:
            return "0"
        parts = []
        for S, c in self.coefficients.items():
            mono = "".join(f"x{i}" for i in self.monomial(S))
            parts.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(parts)


@dataclass
class DegreeCertificate:
    kind: str
    degree: int
    epsilon: Fraction | float
    witness: MultilinearPolynomial
    max_violation: float
    exact: bool
    notes: list[str] = field(default_factory=list)

    def verify(self, F: PartialFunction) -> bool:
        """Re-evaluate the witness at every domain point, independently of the solver."""
        if self.exact:
            worst = max((abs(self.witness(x) - z) for x, z in zip(F.domain, F.outputs)),
                        default=Fraction(0))
            bound = 0 if self.kind == "representing" else Fraction(self.epsilon)
            return worst <= bound
        vals = self.witness.evaluate_all(F.domain)
        worst = float(np.max(np.abs(vals - F.output_array), initial=0.0))
        bound = 1e-9 if self.kind == "representing" else float(self.epsilon) + FLOAT_MARGIN
        return worst <= bound


def _require_boolean(F: PartialFunction):
    if not F.is_boolean:
        raise FunctionError("polynomial degrees need a boolean function (m = 1)")


def mobius_coefficients(values: np.ndarray, n: int) -> np.ndarray:
    """Subset (Moebius) transform of a table indexed by input code."""
    c = np.array(values, dtype=np.int64)
    for k in range(n):
        bit = 1 << k
        idx = np.arange(1 << n)
        hi = idx[(idx & bit) != 0]
        c[hi] -= c[hi ^ bit]
    return c


def mobius_interpolate(F: PartialFunction) -> MultilinearPolynomial:
    """The unique multilinear polynomial equal to ``F`` on ``{0,1}^n``."""
    _require_boolean(F)
    if not F.is_total:
        raise FunctionError("Moebius interpolation needs a total function; use lp_degree")
    table = np.zeros(1 << F.n, dtype=np.int64)
    table[F.code_array] = F.output_array
    c = mobius_coefficients(table, F.n)
    nz = np.flatnonzero(c)
    return MultilinearPolynomial(F.n, {int(S): int(c[S]) for S in nz})


def degree(F: PartialFunction) -> int:
    return mobius_interpolate(F).degree()


# -- LP machinery ------------------------------------------------------------

def _monomials(n: int, d: int) -> list[int]:
    return sorted((S for S in range(1 << n) if _popcount(S) <= d), key=lambda S: (_popcount(S), S))


def _design(F: PartialFunction, monos: list[int]) -> np.ndarray:
    codes = F.code_array[:, None]
    S = np.array(monos, dtype=np.int64)[None, :]
    return ((codes & S) == S).astype(np.int64)


def _use_exact(F: PartialFunction) -> bool:
    return F.n <= EXACT_MAX_N and len(F) <= EXACT_MAX_DOMAIN


def _represent(F: PartialFunction, d: int, exact: bool):
    monos = _monomials(F.n, d)
    A = _design(F, monos)
    if exact:
        z = exactlp.solve_exact(A.tolist(), list(F.outputs))
        if z is None:
            return None
        return MultilinearPolynomial(F.n, dict(zip(monos, z)))
    sol, *_ = np.linalg.lstsq(A.astype(float), F.output_array.astype(float), rcond=None)
    if np.max(np.abs(A @ sol - F.output_array), initial=0.0) > 1e-9:
        return None
    return MultilinearPolynomial(F.n, {S: float(c) for S, c in zip(monos, sol) if abs(c) > COEF_TOL})


def _approx_exact(F: PartialFunction, d: int, eps: Fraction):
    """Chebyshev fit in rationals; returns the witness when ``t* <= eps``.

    With ``t = 1 - s`` the band reads ``A c + s <= 1 + F`` and
    ``-A c + s <= 1 - F``; ``c = 0, s = 0`` is feasible, and the
    simplex stops once ``s`` reaches ``1 - eps``.
    """
    monos = _monomials(F.n, d)
    A = _design(F, monos).tolist()
    k = len(monos)
    rows, rhs = [], []
    for row, z in zip(A, F.outputs):
        neg = [-v for v in row]
        rows.append(row + neg + [1])
        rhs.append(1 + z)
        rows.append(neg + row + [1])
        rhs.append(1 - z)
    res = exactlp.maximize([0] * (2 * k) + [1], rows, rhs, target=1 - eps)
    if res.value < 1 - eps:
        return None, 1 - res.value
    coef = [res.solution[j] - res.solution[k + j] for j in range(k)]
    return MultilinearPolynomial(F.n, dict(zip(monos, coef))), 1 - res.value


def _approx_float(F: PartialFunction, d: int, eps: float):
    monos = _monomials(F.n, d)
    A = _design(F, monos).astype(float)
    k = len(monos)
    f = F.output_array.astype(float)
    ones = np.ones((len(F), 1))
    A_ub = np.vstack([np.hstack([A, -ones]), np.hstack([-A, -ones])])
    b_ub = np.concatenate([f, -f])
    cost = np.zeros(k + 1)
    cost[-1] = 1.0
    bounds = [(None, None)] * k + [(0, None)]
    res = linprog(cost, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if res.status != 0:
        raise RuntimeError(f"LP solver failed: {res.message}")
    t = float(res.x[-1])
    if t > eps + FLOAT_MARGIN:
        return None, t
    coef = {S: float(c) for S, c in zip(monos, res.x[:k]) if abs(c) > COEF_TOL}
    return MultilinearPolynomial(F.n, coef), t


def _max_violation(F: PartialFunction, p: MultilinearPolynomial, exact: bool) -> float:
    if exact:
        return float(max((abs(p(x) - z) for x, z in zip(F.domain, F.outputs)), default=0))
    return float(np.max(np.abs(p.evaluate_all(F.domain) - F.output_array), initial=0.0))


def lp_degree(F: PartialFunction, kind: str = "approximating", epsilon=THIRD,
              exact: bool | None = None, upper: int | None = None) -> DegreeCertificate:
    """Minimal degree of a representing or ``epsilon``-approximating polynomial.

    Binary search over ``d`` in ``[0, upper]`` (default ``n``); feasibility
    is monotone in ``d``.  ``exact`` defaults to rationals for ``n <= 4``
    and ``|S| <= 64``.
    """
    _require_boolean(F)
    if kind not in ("representing", "approximating"):
        raise ValueError(f"unknown kind {kind!r}")
    exact = _use_exact(F) if exact is None else exact
    if kind == "approximating":
        eps = Fraction(epsilon).limit_denominator(10**12) if exact else float(epsilon)
        if not 0 < eps < 0.5:
            raise ValueError("epsilon must lie in (0, 1/2)")
    else:
        eps = 0

    def attempt(d):
        if kind == "representing":
            return _represent(F, d, exact)
        if exact:
            return _approx_exact(F, d, eps)[0]
        return _approx_float(F, d, eps)[0]

    lo, hi = 0, F.n if upper is None else upper
    witness = attempt(hi)
    if witness is None:
        raise RuntimeError(f"no {kind} polynomial at degree {hi}; solver fault")
    while lo < hi:
        mid = (lo + hi) // 2
        p = attempt(mid)
        if p is None:
            lo = mid + 1
        else:
            hi, witness = mid, p
    cert = DegreeCertificate(kind, hi, eps, witness, _max_violation(F, witness, exact), exact)
    if not cert.verify(F):
        raise RuntimeError(f"{kind} witness at degree {hi} fails re-verification")
    return cert


def representing_degree(F: PartialFunction) -> int:
    return lp_degree(F, "representing").degree


def approximate_degree(F: PartialFunction, epsilon=THIRD) -> int:
    """``adeg_eps(F)``; total functions on up to 4 bits are cached by NPN class."""
    _require_boolean(F)
    if F.is_total and F.n <= 4:
        table = 0
        for code, z in zip(F.domain, F.outputs):
            table |= z << code
        return _adeg_class(F.n, npn_canonical(F.n, table), Fraction(epsilon).limit_denominator(10**12))
    return lp_degree(F, "approximating", epsilon).degree


# -- NPN classes (input permutation, input negation, output negation) --------

@lru_cache(maxsize=None)
def _npn_maps(n: int) -> np.ndarray:
    codes = np.arange(1 << n)
    bits = (codes[:, None] >> np.arange(n)) & 1
    maps = []
    for perm in itertools.permutations(range(n)):
        permuted = (bits[:, list(perm)] << np.arange(n)).sum(axis=1)
        for neg in range(1 << n):
            maps.append(permuted ^ neg)
    return np.array(maps)


def npn_canonical(n: int, table: int) -> int:
    """Smallest truth table (bit ``code`` = F(code)) in the NPN class of ``table``."""
    size = 1 << n
    vals = (table >> np.arange(size)) & 1
    images = vals[_npn_maps(n)]
    weights = 1 << np.arange(size, dtype=np.int64)
    packed = images @ weights
    flipped = (1 - images) @ weights
    return int(min(packed.min(), flipped.min()))


@lru_cache(maxsize=None)
def _adeg_class(n: int, table: int, eps: Fraction) -> int:
    return lp_degree(truth_table_function(n, table), "approximating", eps).degree


# -- symmetric functions ------------------------------------------------------

@dataclass
class SymmetricReduction:
    profile: tuple[int, ...]
    degree: int
    approximate_degree: int
    epsilon: Fraction


def symmetric_profile(F: PartialFunction) -> tuple[int, ...]:
    """``g(k) = F(x)`` for ``|x| = k``; error if ``F`` is not symmetric."""
    _require_boolean(F)
    if not F.is_total:
        raise FunctionError("symmetric reduction needs a total function")
    profile: dict[int, int] = {}
    for code, z in zip(F.domain, F.outputs):
        k = _popcount(code)
        if profile.setdefault(k, z) != z:
            raise FunctionError(f"function is not symmetric: weight {k} has both outputs")
    return tuple(profile[k] for k in range(F.n + 1))


def _univariate_design(n: int, d: int) -> list[list[int]]:
    return [[math.comb(k, j) for j in range(d + 1)] for k in range(n + 1)]


def univariate_degree(profile) -> int:
    """Degree of the interpolant of ``profile`` on ``0..n`` (binomial basis)."""
    diffs = list(profile)
    deg = 0
    for j in range(len(profile)):
        if diffs[0] != 0:
            deg = j
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
    return deg


def univariate_approx_degree(profile, epsilon=THIRD) -> int:
    """Least ``d`` with some ``q`` of degree ``d`` within ``epsilon`` of ``profile`` on ``0..n``."""
    n = len(profile) - 1
    eps = Fraction(epsilon).limit_denominator(10**12)
    for d in range(n + 1):
        B = _univariate_design(n, d)
        rows, rhs = [], []
        for row, g in zip(B, profile):
            neg = [-v for v in row]
            rows.append(row + neg + [1])
            rhs.append(1 + g)
            rows.append(neg + row + [1])
            rhs.append(1 - g)
        res = exactlp.maximize([0] * (2 * (d + 1)) + [1], rows, rhs, target=1 - eps)
        if res.value >= 1 - eps:
            return d
    raise RuntimeError("no approximating univariate polynomial; solver fault")


def symmetric_reduce(F: PartialFunction, epsilon=THIRD) -> SymmetricReduction:
    profile = symmetric_profile(F)
    eps = Fraction(epsilon).limit_denominator(10**12)
    return SymmetricReduction(profile, univariate_degree(profile),
                              univariate_approx_degree(profile, eps), eps)


# -- corollaries and chains ---------------------------------------------------

def query_lower_bounds_from_degree(F: PartialFunction, epsilon=THIRD) -> tuple[float, float]:
    """``(deg(F)/2, adeg(F)/2)``: exact and bounded-error query lower bounds."""
    d = degree(F) if F.is_total else representing_degree(F)
    a = approximate_degree(F, epsilon)
    return d / 2, a / 2


@dataclass
class ChainCheck:
    bs: int
    adeg: int
    deg: int
    holds: bool
    flagged: list[str] = field(default_factory=list)


def degree_chain(F: PartialFunction, bs: int | None = None, adeg: int | None = None,
                 deg: int | None = None) -> ChainCheck:
    """``sqrt(bs/6) <= adeg <= deg <= bs^3``.

    The left inequality is reported in ``flagged`` rather than failing,
    since its constant differs between sources.
    """
    bs = measure_report(F).bs if bs is None else bs
    deg = (degree(F) if F.is_total else representing_degree(F)) if deg is None else deg
    adeg = approximate_degree(F) if adeg is None else adeg
    holds = adeg <= deg <= bs ** 3
    flagged = []
    if 6 * adeg * adeg < bs:
        flagged.append(f"6*adeg^2 = {6 * adeg * adeg} < bs = {bs}")
    return ChainCheck(bs, adeg, deg, holds, flagged)
