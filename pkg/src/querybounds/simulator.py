"""State-vector simulation of query algorithms, with the adversary bookkeeping.

The basis is ``|i; z>`` with ``i`` in ``0..n`` (``0`` means no query) and
``z`` a workspace value; the flat index is ``i * W + z``.  For the bit-flip
oracle the target bit ``b`` is the top bit of ``z``.

Step ``t`` of a run is the state after ``U_t``.  The query that follows
step ``t`` is applied to that state, so ``beta[t]`` and the inner-product
change from ``t`` to ``t + 1`` both refer to query ``t + 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .adversary import AdversaryMatrix, spectral_result
from .functions import PartialFunction, to_bits

UNITARY_TOL = 1e-9
NORM_TOL = 1e-9
CHECK_TOL = 1e-6


class SimulationError(RuntimeError):
    pass


class InequalityViolation(AssertionError):
    """An inequality that must hold on every run failed; a bug, not bad input."""


@dataclass
class QuantumState:
    n: int
    workspace_dim: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != ((self.n + 1) * self.workspace_dim,):
            raise SimulationError("amplitude vector does not match (n + 1) * workspace_dim")

    @classmethod
    def basis(cls, n: int, workspace_dim: int, i: int = 0, z: int = 0) -> "QuantumState":
        amps = np.zeros((n + 1) * workspace_dim, dtype=complex)
        amps[i * workspace_dim + z] = 1.0
        return cls(n, workspace_dim, amps)

    @classmethod
    def random(cls, n: int, workspace_dim: int, rng: np.random.Generator) -> "QuantumState":
        d = (n + 1) * workspace_dim
        v = rng.normal(size=d) + 1j * rng.normal(size=d)
        return cls(n, workspace_dim, v / np.linalg.norm(v))

    @property
    def dim(self) -> int:
        return len(self.amplitudes)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def blocks(self) -> np.ndarray:
        """Amplitudes reshaped to ``(n + 1, W)``."""
        return self.amplitudes.reshape(self.n + 1, self.workspace_dim)

    def query_weights(self) -> np.ndarray:
        """``beta_i = ||P_i psi||`` for ``i = 0..n``."""
        return np.linalg.norm(self.blocks(), axis=1)

    def inner(self, other: "QuantumState") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


def _bits(x, n: int) -> np.ndarray:
    s = x if isinstance(x, str) else to_bits(int(x), n)
    if len(s) != n:
        raise SimulationError(f"input {s!r} does not have length {n}")
    return np.array([int(ch) for ch in s])


def apply_phase_oracle(state: QuantumState, x) -> QuantumState:
    """``|i; z> -> (-1)^{x_i} |i; z>`` for ``i >= 1``, identity on ``i = 0``."""
    signs = np.concatenate([[1.0], 1.0 - 2.0 * _bits(x, state.n)])
    out = state.blocks() * signs[:, None]
    return QuantumState(state.n, state.workspace_dim, out.ravel())


def apply_flip_oracle(state: QuantumState, x) -> QuantumState:
    """``|i, b; z> -> |i, b XOR x_i; z>`` for ``i >= 1``; ``b`` is the top workspace bit."""
    W = state.workspace_dim
    if W % 2:
        raise SimulationError("bit-flip oracle needs an even workspace (target bit)")
    half = W // 2
    blocks = state.blocks().copy()
    for i, xi in enumerate(_bits(x, state.n), start=1):
        if xi:
            blocks[i] = np.concatenate([blocks[i, half:], blocks[i, :half]])
    return QuantumState(state.n, W, blocks.ravel())


def hadamard_target(state: QuantumState) -> QuantumState:
    """Hadamard on the target bit (top workspace bit)."""
    half = state.workspace_dim // 2
    blocks = state.blocks()
    lo, hi = blocks[:, :half], blocks[:, half:]
    out = np.concatenate([lo + hi, lo - hi], axis=1) / math.sqrt(2)
    return QuantumState(state.n, state.workspace_dim, out.ravel())


def phase_via_flip(state: QuantumState, x) -> QuantumState:
    """``H_b O'_x H_b``; on states with ``b = 1`` this equals the phase oracle."""
    return hadamard_target(apply_flip_oracle(hadamard_target(state), x))


def with_target_one(state: QuantumState) -> QuantumState:
    """``psi (x) |1>_b``: doubles the workspace with the new top bit set."""
    W = state.workspace_dim
    blocks = np.concatenate([np.zeros_like(state.blocks()), state.blocks()], axis=1)
    return QuantumState(state.n, 2 * W, blocks.ravel())


ORACLES = {"phase": apply_phase_oracle, "flip": apply_flip_oracle}


def is_unitary(U: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    return bool(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0])), initial=0.0) <= tol)


@dataclass
class QueryAlgorithm:
    """``U_T O U_{T-1} ... O U_0`` applied to ``|0; 0>``, then a basis measurement.

    ``outcome[k]`` is the output value announced when basis state ``k`` is
    observed.
    """

    n: int
    workspace_dim: int
    unitaries: list[np.ndarray]
    oracle: str
    outcome: np.ndarray
    name: str = ""

    def __post_init__(self):
        if self.oracle not in ORACLES:
            raise SimulationError(f"unknown oracle convention {self.oracle!r}")
        if not self.unitaries:
            raise SimulationError("an algorithm needs at least U_0")
        d = (self.n + 1) * self.workspace_dim
        for t, U in enumerate(self.unitaries):
            if U.shape != (d, d):
                raise SimulationError(f"U_{t} has shape {U.shape}, expected {(d, d)}")
            if not is_unitary(U):
                raise SimulationError(f"U_{t} is not unitary within {UNITARY_TOL}")
        self.outcome = np.asarray(self.outcome, dtype=np.int64)
        if self.outcome.shape != (d,):
            raise SimulationError("outcome map must give one value per basis state")

    @property
    def T(self) -> int:
        return len(self.unitaries) - 1

    @property
    def dim(self) -> int:
        return (self.n + 1) * self.workspace_dim


@dataclass
class RunTrace:
    """States of one run: ``states[t]`` after ``U_t``, ``queried[t]`` after query ``t + 1``."""

    x: str
    states: list[QuantumState]
    queried: list[QuantumState]
    beta: np.ndarray
    outcome_probabilities: dict[int, float]

    @property
    def final(self) -> QuantumState:
        return self.states[-1]

    def success(self, value: int) -> float:
        return self.outcome_probabilities.get(value, 0.0)


def run(alg: QueryAlgorithm, x) -> RunTrace:
    xs = x if isinstance(x, str) else to_bits(int(x), alg.n)
    oracle = ORACLES[alg.oracle]
    start = QuantumState.basis(alg.n, alg.workspace_dim)
    states = [QuantumState(alg.n, alg.workspace_dim, alg.unitaries[0] @ start.amplitudes)]
    queried = []
    betas = []
    for U in alg.unitaries[1:]:
        cur = states[-1]
        betas.append(cur.query_weights())
        after = oracle(cur, xs)
        queried.append(after)
        states.append(QuantumState(alg.n, alg.workspace_dim, U @ after.amplitudes))
    for t, s in enumerate(states):
        if abs(s.norm() - 1.0) > NORM_TOL:
            raise SimulationError(f"norm drifted to {s.norm()} at step {t}")
    probs = np.abs(states[-1].amplitudes) ** 2
    dist: dict[int, float] = {}
    for k in np.flatnonzero(probs > 0):
        z = int(alg.outcome[k])
        dist[z] = dist.get(z, 0.0) + float(probs[k])
    beta = np.array(betas) if betas else np.zeros((0, alg.n + 1))
    return RunTrace(xs, states, queried, beta, dist)


def run_all(alg: QueryAlgorithm, F: PartialFunction) -> list[RunTrace]:
    if F.n != alg.n:
        raise SimulationError("algorithm and function disagree on n")
    return [run(alg, x) for x in F.inputs]


@dataclass
class SuccessReport:
    per_input: dict[str, float]
    minimum: float
    distributions: dict[str, dict[int, float]]


def success_probability(alg: QueryAlgorithm, F: PartialFunction,
                        traces: Sequence[RunTrace] | None = None) -> SuccessReport:
    traces = run_all(alg, F) if traces is None else traces
    per = {tr.x: tr.success(z) for tr, z in zip(traces, F.outputs)}
    return SuccessReport(per, min(per.values(), default=1.0),
                         {tr.x: dict(sorted(tr.outcome_probabilities.items())) for tr in traces})


def inner_product_trace(alg: QueryAlgorithm, x, y) -> list[complex]:
    """``<psi_x^t | psi_y^t>`` for ``t = 0..T``."""
    a, b = run(alg, x), run(alg, y)
    return [s.inner(r) for s, r in zip(a.states, b.states)]


@dataclass
class StepCheck:
    step: int
    change: float
    bound: float

    @property
    def margin(self) -> float:
        return self.bound - self.change


def overlap_checks(a: RunTrace, b: RunTrace, tol: float = 1e-9) -> list[StepCheck]:
    """Per query, the inner-product change against ``2 sum_{x_i != y_i} beta_x,i beta_y,i``.

    Also confirms that the unitary after each query leaves the inner
    product unchanged to ``1e-12``.
    """
    differ = np.array([0] + [int(p != q) for p, q in zip(a.x, b.x)], dtype=bool)
    out = []
    for t in range(len(a.queried)):
        before = a.states[t].inner(b.states[t])
        after = a.queried[t].inner(b.queried[t])
        nxt = a.states[t + 1].inner(b.states[t + 1])
        if abs(nxt - after) > 1e-12:
            raise InequalityViolation(f"unitary step {t + 1} changed an inner product by {abs(nxt - after):.3g}")
        bound = 2.0 * float(np.sum(a.beta[t][differ] * b.beta[t][differ]))
        change = abs(after - before)
        if change > bound + tol:
            raise InequalityViolation(f"query {t + 1}: change {change:.6g} exceeds overlap bound {bound:.6g}")
        out.append(StepCheck(t, change, bound))
    return out


def progress_measure(G: AdversaryMatrix, delta: np.ndarray, states: Sequence[QuantumState]) -> float:
    """``W = sum Gamma[x,y] delta_x delta_y <psi_x|psi_y>`` over one state per domain input."""
    if len(states) != len(G.F):
        raise SimulationError("need one state per domain input, in domain order")
    Psi = np.array([s.amplitudes for s in states])
    gram = Psi.conj() @ Psi.T
    W = np.sum(G.entries * np.outer(delta, delta) * gram)
    if abs(W.imag) > 1e-9:
        raise InequalityViolation(f"progress measure has imaginary part {W.imag:.3g}")
    return float(W.real)


@dataclass
class DropReport:
    weights: list[float]
    drops: list[float]
    bound: float
    initial_gap: float

    @property
    def margins(self) -> list[float]:
        return [self.bound - d for d in self.drops]


def verify_drop_bound(G: AdversaryMatrix, alg: QueryAlgorithm, F: PartialFunction,
                      traces: Sequence[RunTrace] | None = None) -> DropReport:
    """``W^t`` for every step; each query may lower it by at most ``2 max_i lambda(Gamma_i)``."""
    if G.F != F:
        raise SimulationError("adversary matrix belongs to a different function")
    traces = run_all(alg, F) if traces is None else traces
    res = spectral_result(G)
    weights = [progress_measure(G, res.vector, [tr.states[t] for tr in traces])
               for t in range(alg.T + 1)]
    gap = abs(weights[0] - res.value)
    if gap > CHECK_TOL:
        raise InequalityViolation(f"W^0 = {weights[0]:.9g} differs from lambda = {res.value:.9g}")
    bound = 2.0 * res.max_index_norm
    drops = [abs(weights[t] - weights[t + 1]) for t in range(alg.T)]
    for t, d in enumerate(drops):
        if d > bound + CHECK_TOL:
            raise InequalityViolation(f"query {t + 1}: weight drop {d:.9g} exceeds {bound:.9g}")
    return DropReport(weights, drops, bound, gap)


def epsilon_prime(eps: float) -> float:
    return 2.0 * math.sqrt(eps * (1.0 - eps))


@dataclass
class DistinguishabilityReport:
    epsilon: float
    threshold: float
    checked: list[tuple[str, str, float]]
    skipped: list[tuple[str, str]]
    notes: list[str] = field(default_factory=list)


def check_distinguishability(alg: QueryAlgorithm, F: PartialFunction, eps: float,
                             traces: Sequence[RunTrace] | None = None) -> DistinguishabilityReport:
    """Final ``|<psi_x|psi_y>| <= 2 sqrt(eps (1 - eps))`` on pairs both solved with error ``<= eps``.

    Pairs where either run errs more than ``eps`` are skipped and listed.
    Only this direction is checked; no distinguishing measurement is built.
    """
    traces = run_all(alg, F) if traces is None else traces
    succ = [tr.success(z) for tr, z in zip(traces, F.outputs)]
    thr = epsilon_prime(eps)
    checked, skipped = [], []
    for a in range(len(F)):
        for b in range(a + 1, len(F)):
            if F.outputs[a] == F.outputs[b]:
                continue
            pair = (traces[a].x, traces[b].x)
            if succ[a] < 1 - eps - 1e-12 or succ[b] < 1 - eps - 1e-12:
                skipped.append(pair)
                continue
            ip = abs(traces[a].final.inner(traces[b].final))
            if ip > thr + CHECK_TOL:
                raise InequalityViolation(f"pair {pair}: |<psi_x|psi_y>| = {ip:.9g} > {thr:.9g}")
            checked.append((*pair, ip))
    notes = ["only the 'only if' direction is verified; no measurement is constructed"]
    return DistinguishabilityReport(eps, thr, checked, skipped, notes)


# -- trace dump -------------------------------------------------------------

def dump_trace(trace: RunTrace, digits: int = 12) -> str:
    """One ``step t`` header per state, then ``index re im`` per basis state."""
    lines = [f"# input {trace.x}"]
    for t, s in enumerate(trace.states):
        lines.append(f"step {t}")
        for k, a in enumerate(s.amplitudes):
            lines.append(f"{k} {a.real:.{digits}f} {a.imag:.{digits}f}")
    return "\n".join(lines) + "\n"


def load_trace(text: str) -> list[np.ndarray]:
    steps: list[list[complex]] = []
    for raw in text.splitlines():
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        if s.startswith("step"):
            steps.append([])
            continue
        _, re, im = s.split()
        steps[-1].append(complex(float(re), float(im)))
    return [np.array(v) for v in steps]
