"""Adversary matrices and the bounds computed from them.

Matrices are indexed by the canonical domain order of a
:class:`~querybounds.functions.PartialFunction`.  ``Gamma_i`` keeps the
entries of pairs that differ in input bit ``i``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .functions import FunctionError, PartialFunction, differing_mask, to_bits
from .measures import measure_report
from .spectral import StreamingMatrix, spectral_norm

SYM_TOL = 1e-12
DENSE_LIMIT = 4096


class InvalidGammaError(ValueError):
    pass


class DegenerateGammaError(ValueError):
    """Every ``Gamma_i`` is zero, so the spectral ratio is undefined."""


class WeightSchemeError(ValueError):
    def __init__(self, message: str, triple=None):
        super().__init__(message if triple is None else f"{message} at {triple}")
        self.triple = triple


def bit_masks(F: PartialFunction) -> np.ndarray:
    """Boolean array ``D[i-1, a, b]``: inputs ``a`` and ``b`` differ in bit ``i``."""
    B = F.bits.astype(bool)
    return B.T[:, :, None] != B.T[:, None, :]


class AdversaryMatrix:
    """Symmetric nonnegative ``Gamma`` that vanishes on output-agreeing pairs."""

    def __init__(self, F: PartialFunction, entries, provenance: str = ""):
        G = np.array(entries, dtype=float)
        d = len(F)
        if G.shape != (d, d):
            raise InvalidGammaError(f"matrix shape {G.shape} does not match |S|={d}")
        if not np.all(np.isfinite(G)):
            raise InvalidGammaError("entries must be finite")
        if np.any(G < 0):
            raise InvalidGammaError("entries must be nonnegative")
        if np.max(np.abs(G - G.T), initial=0.0) > SYM_TOL * max(1.0, np.max(G, initial=0.0)):
            raise InvalidGammaError("matrix is not symmetric")
        G = 0.5 * (G + G.T)
        same = ~differing_mask(F)
        if np.all(same):
            raise InvalidGammaError("function has no pairs with different outputs")
        if np.any(G[same] != 0):
            a, b = np.argwhere((G != 0) & same)[0]
            raise InvalidGammaError(
                f"nonzero entry on output-agreeing pair ({to_bits(F.domain[a], F.n)}, "
                f"{to_bits(F.domain[b], F.n)})")
        if not np.any(G > 0):
            raise InvalidGammaError("adversary matrix has no positive entry")
        G.setflags(write=False)
        self.F = F
        self.entries = G
        self.provenance = provenance

    def __repr__(self):
        return f"<AdversaryMatrix {self.provenance or '?'} on {self.F.name or 'F'} |S|={len(self.F)}>"

    @property
    def shape(self):
        return self.entries.shape

    def masked(self, i: int) -> np.ndarray:
        return mask(self, i).entries

    def scaled(self, factor: float) -> "AdversaryMatrix":
        return AdversaryMatrix(self.F, self.entries * factor, self.provenance)


class StreamingAdversaryMatrix:
    """Adversary matrix given by a vectorised entry rule, for large domains.

    ``entry(rows, cols)`` maps broadcast index arrays to entries.  Rows are
    generated in chunks during each product, and every chunk is checked
    against the zero pattern and sign constraints; symmetry is checked on
    the diagonal chunks.
    """

    def __init__(self, F: PartialFunction, entry: Callable[[np.ndarray, np.ndarray], np.ndarray],
                 provenance: str = "", chunk: int = 256):
        self.F = F
        self.entry = entry
        self.provenance = provenance
        self.chunk = chunk
        self._out = F.output_array
        self._bits = F.bits

    def __repr__(self):
        return f"<StreamingAdversaryMatrix {self.provenance or '?'} |S|={len(self.F)}>"

    @property
    def shape(self):
        return (len(self.F), len(self.F))

    def _checked(self, rows, cols):
        block = np.asarray(self.entry(rows, cols), dtype=float)
        if np.any(block < 0) or not np.all(np.isfinite(block)):
            raise InvalidGammaError("streamed entries must be finite and nonnegative")
        if np.any(block[self._out[rows] == self._out[cols]] != 0):
            raise InvalidGammaError("streamed entry nonzero on an output-agreeing pair")
        return block

    def operator(self, i: int | None = None) -> StreamingMatrix:
        """``Gamma`` (``i=None``) or ``Gamma_i`` as a matrix-free operator."""
        if i is None:
            rule = self._checked
        else:
            col = self._bits[:, i - 1]

            def rule(rows, cols):
                return np.where(col[rows] != col[cols], self._checked(rows, cols), 0.0)
        return StreamingMatrix(len(self.F), rule, self.chunk)

    def check_symmetry(self, rng: np.random.Generator, samples: int = 4) -> None:
        d = len(self.F)
        for _ in range(samples):
            r = rng.integers(0, d, min(d, self.chunk))
            c = rng.integers(0, d, min(d, self.chunk))
            a = self._checked(r[:, None], c[None, :])
            b = self._checked(c[:, None], r[None, :]).T
            if np.max(np.abs(a - b)) > SYM_TOL * max(1.0, a.max(initial=0.0)):
                raise InvalidGammaError("streamed matrix is not symmetric")

    def dense(self) -> AdversaryMatrix:
        idx = np.arange(len(self.F))
        return AdversaryMatrix(self.F, self.entry(idx[:, None], idx[None, :]), self.provenance)


def uniform_entry(F: PartialFunction):
    """Entry rule of :func:`uniform_gamma` for the streaming path."""
    out = F.output_array
    return lambda rows, cols: (out[rows] != out[cols]).astype(float)


def make_gamma(F: PartialFunction, entry, provenance: str = ""):
    """Dense matrix up to ``DENSE_LIMIT`` inputs, streaming beyond."""
    G = StreamingAdversaryMatrix(F, entry, provenance)
    return G.dense() if len(F) <= DENSE_LIMIT else G


@dataclass(frozen=True)
class MaskedMatrix:
    index: int
    entries: np.ndarray


def mask(G: AdversaryMatrix, i: int) -> MaskedMatrix:
    """``Gamma_i``: entries of pairs that differ in input bit ``i`` (1-based)."""
    n = G.F.n
    if not 1 <= i <= n:
        raise IndexError(f"bit index {i} outside [1, {n}]")
    col = G.F.bits[:, i - 1]
    keep = col[:, None] != col[None, :]
    return MaskedMatrix(i, np.where(keep, G.entries, 0.0))


@dataclass
class SpectralResult:
    value: float
    vector: np.ndarray
    index_norms: np.ndarray
    bound: float
    iterations: int
    residual: float
    index_iterations: list[int] = field(default_factory=list)

    @property
    def max_index_norm(self) -> float:
        return float(self.index_norms.max())


def spectral_result(G) -> SpectralResult:
    """Eigenpair of ``Gamma`` and the norms of all ``Gamma_i`` (dense or streaming)."""
    streaming = isinstance(G, StreamingAdversaryMatrix)
    top = spectral_norm(G.operator() if streaming else G.entries)
    norms, its = [], []
    for i in range(1, G.F.n + 1):
        Gi = G.operator(i) if streaming else mask(G, i).entries
        if not streaming and not Gi.any():
            norms.append(0.0)
            its.append(0)
            continue
        pair = spectral_norm(Gi)
        norms.append(pair.value)
        its.append(pair.iterations)
    norms_arr = np.array(norms)
    if not np.any(norms_arr > 0):
        raise DegenerateGammaError("all masked matrices Gamma_i are zero")
    return SpectralResult(top.value, top.vector, norms_arr, top.value / norms_arr.max(),
                          top.iterations, top.residual, its)


def spectral_bound(F: PartialFunction, G) -> float:
    """``lambda(Gamma) / max_i lambda(Gamma_i)``."""
    _check_same(F, G)
    return spectral_result(G).bound


def _check_same(F: PartialFunction, G: AdversaryMatrix):
    if G.F != F:
        raise InvalidGammaError("adversary matrix belongs to a different function")


def fast_bound(entries: np.ndarray, masks: np.ndarray) -> float:
    """Spectral ratio via dense LAPACK, for inner loops of searches."""
    lam = float(np.linalg.eigvalsh(entries)[-1])
    lam_i = max(float(np.linalg.eigvalsh(entries * m)[-1]) for m in masks)
    return lam / lam_i if lam_i > 0 else 0.0


# -- constructions ----------------------------------------------------------

def search_gamma(F: PartialFunction) -> AdversaryMatrix:
    """``Gamma[x, y] = 1 / |F(x) - F(y)|`` on distinct outputs."""
    z = F.output_array.astype(float)
    diff = np.abs(z[:, None] - z[None, :])
    with np.errstate(divide="ignore"):
        G = np.where(diff > 0, 1.0 / np.where(diff > 0, diff, 1.0), 0.0)
    return AdversaryMatrix(F, G, "search-weights")


def uniform_gamma(F: PartialFunction) -> AdversaryMatrix:
    """Weight 1 on every pair with different outputs."""
    return AdversaryMatrix(F, differing_mask(F).astype(float), "uniform")


def random_gamma(F: PartialFunction, rng: np.random.Generator, low: float = 0.5,
                 high: float = 1.5) -> AdversaryMatrix:
    """Independent uniform weights on all differing pairs."""
    d = len(F)
    U = np.triu(rng.uniform(low, high, (d, d)), 1)
    return AdversaryMatrix(F, (U + U.T) * differing_mask(F), "random")


def bs_gamma(F: PartialFunction) -> AdversaryMatrix:
    """Star on an input of maximum block sensitivity and its block flips.

    ``lambda = sqrt(k)`` and, the blocks being disjoint, each ``Gamma_i`` has
    at most one edge, so the ratio is exactly ``sqrt(bs(F))``.
    """
    rep = measure_report(F)
    if rep.bs == 0:
        raise InvalidGammaError("block sensitivity is 0; no star matrix exists")
    center = F.index(rep.witness_input)
    x = F.domain[center]
    G = np.zeros((len(F), len(F)))
    for block in rep.witness_blocks:
        flip = 0
        for i in block:
            flip |= 1 << (F.n - i)
        other = F.index(x ^ flip)
        G[center, other] = G[other, center] = 1.0
    return AdversaryMatrix(F, G, f"bs-star@{rep.witness_input}")


# -- unweighted method (relations) -----------------------------------------

def _relation_indices(F: PartialFunction, R: Iterable) -> list[tuple[int, int]]:
    if not F.is_boolean:
        raise FunctionError("the unweighted method needs a boolean function")
    pairs = []
    for x, y in R:
        a, b = F.index(x), F.index(y)
        if F.outputs[a] != 0 or F.outputs[b] != 1:
            raise ValueError(f"relation pair ({x}, {y}) is not in F^-1(0) x F^-1(1)")
        pairs.append((a, b))
    if not pairs:
        raise ValueError("relation is empty")
    return sorted(set(pairs))


def full_relation(F: PartialFunction) -> list[tuple[str, str]]:
    zeros = [F.inputs[k] for k in F.preimage(0)]
    ones = [F.inputs[k] for k in F.preimage(1)]
    return [(x, y) for x in zeros for y in ones]


def neighbor_relation(F: PartialFunction) -> list[tuple[str, str]]:
    """Pairs ``(x, y)``, ``F(x) = 0``, ``F(y) = 1``, at Hamming distance 1."""
    ones = {F.domain[k] for k in F.preimage(1)}
    out = []
    for k in F.preimage(0):
        x = F.domain[k]
        for i in range(F.n):
            y = x ^ (1 << i)
            if y in ones:
                out.append((to_bits(x, F.n), to_bits(y, F.n)))
    return sorted(out)


def star_relation(n: int) -> list[tuple[str, str]]:
    """``{0^n} x {e_1, ..., e_n}`` for OR_n."""
    return [("0" * n, to_bits(1 << (n - i), n)) for i in range(1, n + 1)]


@dataclass(frozen=True)
class UnweightedResult:
    value: float
    m: int
    m_prime: int
    ell: int
    ell_prime: int


def unweighted_quantities(F: PartialFunction, R: Iterable, A: Sequence | None = None,
                          B: Sequence | None = None) -> UnweightedResult:
    """The four counts of the unweighted method and ``sqrt(m m' / (l l'))``.

    Rows range over ``A`` and columns over ``B`` (default: the inputs that
    occur in ``R``); an element with no partner is an error.
    """
    pairs = _relation_indices(F, R)
    rows = sorted({a for a, _ in pairs}) if A is None else sorted(F.index(x) for x in A)
    cols = sorted({b for _, b in pairs}) if B is None else sorted(F.index(y) for y in B)
    row_deg = {a: 0 for a in rows}
    col_deg = {b: 0 for b in cols}
    for a, b in pairs:
        if a not in row_deg or b not in col_deg:
            raise ValueError("relation leaves the given sets A x B")
        row_deg[a] += 1
        col_deg[b] += 1
    m, m_prime = min(row_deg.values()), min(col_deg.values())
    if m == 0 or m_prime == 0:
        raise ValueError("relation has an empty row or column")
    bits = F.bits
    ell = ell_prime = 0
    for i in range(F.n):
        rc: dict[int, int] = {}
        cc: dict[int, int] = {}
        for a, b in pairs:
            if bits[a, i] != bits[b, i]:
                rc[a] = rc.get(a, 0) + 1
                cc[b] = cc.get(b, 0) + 1
        ell = max(ell, max(rc.values(), default=0))
        ell_prime = max(ell_prime, max(cc.values(), default=0))
    return UnweightedResult(math.sqrt(m * m_prime / (ell * ell_prime)), m, m_prime, ell, ell_prime)


def unweighted_bound(F: PartialFunction, R: Iterable, A=None, B=None) -> float:
    return unweighted_quantities(F, R, A, B).value


def relation_to_gamma(F: PartialFunction, R: Iterable) -> AdversaryMatrix:
    """``Gamma[x, y] = 1 / (d_x d_y)`` on the symmetrised relation, ``d_x = sqrt(deg x)``."""
    pairs = _relation_indices(F, R)
    deg = np.zeros(len(F))
    for a, b in pairs:
        deg[a] += 1
        deg[b] += 1
    d = np.sqrt(deg)
    G = np.zeros((len(F), len(F)))
    for a, b in pairs:
        G[a, b] = G[b, a] = 1.0 / (d[a] * d[b])
    return AdversaryMatrix(F, G, "relation")


def relation_factors(F: PartialFunction, R: Iterable, i: int):
    """``(Gamma_i, M, N)`` with ``Gamma_i = M o N`` as in the unweighted proof.

    ``M[x, y] = 1/d_x`` and ``N[x, y] = 1/d_y`` on the symmetrised relation
    restricted to pairs differing in bit ``i``.
    """
    G = relation_to_gamma(F, R)
    Gi = mask(G, i).entries
    support = Gi > 0
    deg = (G.entries > 0).sum(axis=1)
    d = np.sqrt(deg)
    with np.errstate(divide="ignore"):
        inv = np.where(d > 0, 1.0 / np.where(d > 0, d, 1.0), 0.0)
    M = np.where(support, inv[:, None], 0.0)
    N = np.where(support, inv[None, :], 0.0)
    return Gi, M, N


def mathias_bound(G: np.ndarray, M: np.ndarray, N: np.ndarray, atol: float = 1e-12) -> float:
    """``max_{G[x,y] > 0} r_x(M) c_y(N)``, an upper bound on ``lambda(G)``."""
    G, M, N = (np.asarray(a, dtype=float) for a in (G, M, N))
    if np.any(G < 0) or np.any(M < 0) or np.any(N < 0):
        raise ValueError("factors must be nonnegative")
    if np.max(np.abs(G - G.T), initial=0.0) > atol:
        raise ValueError("G must be symmetric")
    if np.max(np.abs(G - M * N), initial=0.0) > atol:
        raise ValueError("G is not the entrywise product of M and N")
    r = np.sqrt((M ** 2).sum(axis=1))
    c = np.sqrt((N ** 2).sum(axis=0))
    pos = G > 0
    if not pos.any():
        return 0.0
    return float(np.max((r[:, None] * c[None, :])[pos]))


# -- weighted method --------------------------------------------------------

@dataclass
class WeightScheme:
    """Pair weights ``w[a, b]`` and triple weights ``wp[a, b, i-1]``."""

    F: PartialFunction
    w: np.ndarray
    wp: np.ndarray

    @property
    def wt(self) -> np.ndarray:
        return self.w.sum(axis=1)

    @property
    def v(self) -> np.ndarray:
        """``v[a, i-1] = sum_b wp[a, b, i-1]``."""
        return self.wp.sum(axis=1)

    def check(self, rtol: float = 1e-12) -> None:
        F, w, wp = self.F, self.w, self.wp
        d, n = len(F), F.n
        if w.shape != (d, d) or wp.shape != (d, d, n):
            raise WeightSchemeError("weight arrays have the wrong shape")
        if np.any(w < 0) or np.any(wp < 0):
            raise WeightSchemeError("weights must be nonnegative")
        if np.max(np.abs(w - w.T), initial=0.0) > rtol * max(1.0, w.max(initial=0.0)):
            raise WeightSchemeError("w is not symmetric")
        same = ~differing_mask(F)
        if np.any(w[same] != 0):
            a, b = np.argwhere((w != 0) & same)[0]
            raise WeightSchemeError("w nonzero on equal outputs", (F.inputs[a], F.inputs[b]))
        D = np.moveaxis(bit_masks(F), 0, -1)  # [a, b, i]
        bad = (wp != 0) & ~(D & ~same[:, :, None])
        if bad.any():
            a, b, i = np.argwhere(bad)[0]
            raise WeightSchemeError("w' nonzero where x_i = y_i or F(x) = F(y)",
                                    (F.inputs[a], F.inputs[b], int(i) + 1))
        prod = wp * np.transpose(wp, (1, 0, 2))
        need = (w ** 2)[:, :, None] * (D & (w > 0)[:, :, None])
        viol = prod < need * (1 - rtol)
        if viol.any():
            a, b, i = np.argwhere(viol)[0]
            raise WeightSchemeError("w'(x,y,i) w'(y,x,i) < w(x,y)^2",
                                    (F.inputs[a], F.inputs[b], int(i) + 1))


def gamma_to_scheme(F: PartialFunction, G: AdversaryMatrix,
                    t: Callable[[int], np.ndarray] | None = None,
                    delta: np.ndarray | None = None) -> WeightScheme:
    """``w = Gamma[x,y] delta_x delta_y`` with ``w' = w`` or the ``sqrt(t)`` split.

    ``t(i)`` returns an ``|S| x |S|`` array of ratios ``t(x, y, i)``; the
    split is ``w'(x,y,i) = w(x,y) sqrt(t(x,y,i))``, which meets the product
    constraint with equality when ``t(x,y,i) t(y,x,i) = 1``.
    """
    _check_same(F, G)
    if delta is None:
        delta = spectral_norm(G.entries).vector
    w = G.entries * np.outer(delta, delta)
    D = bit_masks(F)
    wp = np.zeros((len(F), len(F), F.n))
    for i in range(F.n):
        if t is None:
            wp[:, :, i] = np.where(D[i], w, 0.0)
        else:
            ti = np.asarray(t(i + 1), dtype=float)
            wp[:, :, i] = np.where(D[i] & (w > 0), w * np.sqrt(np.where(D[i], ti, 1.0)), 0.0)
    scheme = WeightScheme(F, w, wp)
    scheme.check()
    return scheme


def search_t(F: PartialFunction) -> Callable[[int], np.ndarray]:
    """``t(x, y, i) = (|F(x) - i| + 1) / (|F(y) - i| + 1)`` for ordered search."""
    z = F.output_array.astype(float)

    def t(i: int) -> np.ndarray:
        a = np.abs(z - i) + 1.0
        return a[:, None] / a[None, :]

    return t


def weighted_bound(F: PartialFunction, scheme: WeightScheme) -> float:
    """``min sqrt(wt(x) wt(y) / (v(x,i) v(y,i)))`` over ``w > 0``, ``x_i != y_i``."""
    if scheme.F != F:
        raise WeightSchemeError("weight scheme belongs to a different function")
    scheme.check()
    wt, v = scheme.wt, scheme.v
    D = bit_masks(F)
    best = math.inf
    for i in range(F.n):
        sel = D[i] & (scheme.w > 0)
        if not sel.any():
            continue
        a, b = np.nonzero(sel)
        vals = wt[a] * wt[b] / (v[a, i] * v[b, i])
        best = min(best, float(np.sqrt(vals.min())))
    if best == math.inf:
        raise WeightSchemeError("no pair has positive weight")
    return best


# -- minimax (dual) ---------------------------------------------------------

@dataclass
class ProbabilitySchedule:
    """``p[a, i]``: probability that input ``a`` queries bit ``i`` (column 0 = no query)."""

    F: PartialFunction
    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.shape != (len(self.F), self.F.n + 1):
            raise ValueError(f"schedule shape {p.shape} != ({len(self.F)}, {self.F.n + 1})")
        if np.any(p < 0):
            raise ValueError("probabilities must be nonnegative")
        if np.max(np.abs(p.sum(axis=1) - 1.0), initial=0.0) > 1e-9:
            raise ValueError("each row must sum to 1")
        self.p = p

    @classmethod
    def random(cls, F: PartialFunction, rng: np.random.Generator,
               with_idle: bool = False) -> "ProbabilitySchedule":
        p = rng.dirichlet(np.ones(F.n + 1), size=len(F))
        if not with_idle:
            p[:, 0] = 0.0
            p /= p.sum(axis=1, keepdims=True)
        return cls(F, p)

    @classmethod
    def uniform(cls, F: PartialFunction) -> "ProbabilitySchedule":
        p = np.zeros((len(F), F.n + 1))
        p[:, 1:] = 1.0 / F.n
        return cls(F, p)


def or_schedule(F: PartialFunction) -> ProbabilitySchedule:
    """Uniform queries on ``0^n``; a point mass on the one set bit of ``e_i``.

    Inputs of larger weight query their first set bit.
    """
    p = np.zeros((len(F), F.n + 1))
    for a, x in enumerate(F.inputs):
        ones = [i + 1 for i, ch in enumerate(x) if ch == "1"]
        if ones:
            p[a, ones[0]] = 1.0
        else:
            p[a, 1:] = 1.0 / F.n
    return ProbabilitySchedule(F, p)


def minimax_value(F: PartialFunction, schedule: ProbabilitySchedule) -> float:
    """``max over F(x) != F(y) of 1 / sum_{i: x_i != y_i} sqrt(p_x(i) p_y(i))``.

    Returns ``math.inf`` when some differing pair has zero overlap.
    """
    if schedule.F != F:
        raise ValueError("schedule belongs to a different function")
    q = np.sqrt(schedule.p[:, 1:])
    D = bit_masks(F)
    overlap = np.zeros((len(F), len(F)))
    for i in range(F.n):
        overlap += np.outer(q[:, i], q[:, i]) * D[i]
    diff = differing_mask(F)
    if not diff.any():
        return 0.0
    vals = overlap[diff]
    if np.any(vals <= 0):
        return math.inf
    return float(1.0 / vals.min())


# -- limits and cost-weighted bound ------------------------------------------

def certificate_limit(F: PartialFunction) -> float:
    """Ceiling on any spectral bound: ``min(sqrt(C0 n), sqrt(C1 n))``, and ``sqrt(C0 C1)`` if total."""
    if not F.is_boolean:
        raise FunctionError("certificate limit needs a boolean function")
    rep = measure_report(F)
    c0, c1 = rep.C_z(0), rep.C_z(1)
    lim = min(math.sqrt(c0 * F.n), math.sqrt(c1 * F.n))
    if F.is_total:
        lim = min(lim, math.sqrt(c0 * c1))
    return lim


def adv_alpha(F: PartialFunction, G: AdversaryMatrix, alpha: Sequence[float]) -> float:
    """``min_i alpha_i lambda(Gamma) / lambda(Gamma_i)`` over ``i`` with ``lambda(Gamma_i) > 0``."""
    _check_same(F, G)
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (F.n,) or np.any(alpha <= 0):
        raise ValueError("alpha must hold one positive cost per input bit")
    res = spectral_result(G)
    live = res.index_norms > 0
    return float(np.min(alpha[live] * res.value / res.index_norms[live]))


# -- triplet text format ----------------------------------------------------

def write_gamma(G: AdversaryMatrix) -> str:
    F = G.F
    lines = [f"# adversary matrix for {F.name or 'F'}; n={F.n} size={len(F)}; "
             "indices follow the canonical domain order", f"size {len(F)}"]
    E = G.entries
    for a in range(len(F)):
        for b in range(a + 1, len(F)):
            if E[a, b] != 0:
                lines.append(f"{a} {b} {E[a, b]:.17g}")
    return "\n".join(lines) + "\n"


def read_gamma(F: PartialFunction, text: str, provenance: str = "file") -> AdversaryMatrix:
    d = len(F)
    G = np.zeros((d, d))
    set_from: dict[tuple[int, int], float] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0].strip()
        if not s:
            continue
        parts = s.split()
        if parts[0] == "size":
            if int(parts[1]) != d:
                raise InvalidGammaError(f"line {lineno}: size {parts[1]} != |S|={d}")
            continue
        if len(parts) != 3:
            raise InvalidGammaError(f"line {lineno}: expected 'row col value'")
        try:
            a, b, val = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError:
            raise InvalidGammaError(f"line {lineno}: malformed triplet {s!r}") from None
        if not (0 <= a < d and 0 <= b < d):
            raise InvalidGammaError(f"line {lineno}: index out of range")
        key = (min(a, b), max(a, b))
        if key in set_from and set_from[key] != val:
            raise InvalidGammaError(f"line {lineno}: conflicting value for pair {key}")
        set_from[key] = val
        G[a, b] = G[b, a] = val
    return AdversaryMatrix(F, G, provenance)
