"""Heuristic search for adversary matrices with a large spectral ratio.

Two stages, both working on the log-weights of the pairs with different
outputs.  First a sequence of L-BFGS runs on a smoothed surrogate of
``log lambda(Gamma) - max_i log lambda(Gamma_i)``; each eigenvalue maximum is
replaced by a log-sum-exp over the spectrum whose temperature shrinks from
stage to stage.  Then plain coordinate moves: one entry and its mirror are
multiplied by a factor, and the move is kept when the exact ratio grows by
more than ``1e-12``.

The coordinate stage alone stalls well below the optimum on functions such
as sorted4, which is why the smoothed stage runs first.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .adversary import AdversaryMatrix, bit_masks, fast_bound, spectral_bound
from .functions import PartialFunction, differing_mask

DEFAULT_BUDGET = 100_000
BETAS = (10.0, 30.0, 100.0, 300.0, 1e3, 3e3, 1e4, 3e4, 1e5, 3e5, 1e6)
COARSE_FACTORS = (2.0, 1.1, 1 / 1.1, 0.5)
FINE_STEPS = (1.01, 1.001, 1.0001)
IMPROVE_TOL = 1e-12
# the ratio is scale-free, so log-weights can be boxed to keep exp() finite
THETA_BOX = 40.0


@dataclass
class SearchStats:
    evaluations: int = 0
    accepted: int = 0
    smoothed_value: float = 0.0
    final_value: float = 0.0


class _Budget(Exception):
    pass


class _Problem:
    def __init__(self, F: PartialFunction, budget: int):
        self.F = F
        upper = np.triu(differing_mask(F), 1)
        self.rows, self.cols = np.nonzero(upper)
        self.masks = bit_masks(F).astype(float)
        self.dim = len(F)
        self.budget = budget
        self.stats = SearchStats()

    def matrix(self, theta: np.ndarray) -> np.ndarray:
        G = np.zeros((self.dim, self.dim))
        G[self.rows, self.cols] = np.exp(theta)
        return G + G.T

    def _charge(self):
        if self.stats.evaluations >= self.budget:
            raise _Budget
        self.stats.evaluations += 1

    def ratio(self, theta: np.ndarray) -> float:
        self._charge()
        return fast_bound(self.matrix(theta), self.masks)

    @staticmethod
    def _soft_log_lambda(A: np.ndarray, beta: float):
        # log(lambda) plus a log-sum-exp correction over the relative spectrum
        w, V = np.linalg.eigh(A)
        lam = w[-1]
        if lam <= 0:
            return -np.inf, np.zeros_like(A)
        z = np.exp(beta * (w - lam) / lam)
        s = z.sum()
        grad = (V * (z / s)) @ V.T / lam
        return np.log(lam) + np.log(s) / beta, grad

    def smoothed(self, theta: np.ndarray, beta: float):
        """Negated surrogate and its gradient in ``theta``."""
        self._charge()
        G = self.matrix(theta)
        top, g_top = self._soft_log_lambda(G, beta)
        vals, grads = [], []
        for M in self.masks:
            if not M.any():
                continue
            v, g = self._soft_log_lambda(G * M, beta)
            vals.append(v)
            grads.append(g * M)
        vals = np.array(vals)
        live = np.isfinite(vals)
        vals, grads = vals[live], [g for g, ok in zip(grads, live) if ok]
        peak = vals.max()
        z = np.exp(beta * (vals - peak))
        obj = top - (peak + np.log(z.sum()) / beta)
        z /= z.sum()
        g = g_top - sum(zi * gi for zi, gi in zip(z, grads))
        g_theta = 2.0 * g[self.rows, self.cols] * np.exp(theta)
        return -obj, -g_theta


def _initial_theta(problem: _Problem, G0: AdversaryMatrix, rng: np.random.Generator) -> np.ndarray:
    vals = G0.entries[problem.rows, problem.cols]
    pos = vals[vals > 0]
    floor = (pos.mean() if pos.size else 1.0) * 1e-2
    theta = np.log(np.where(vals > 0, vals, floor))
    return theta + rng.uniform(-1e-3, 1e-3, theta.shape)


def _smooth_stage(problem: _Problem, theta: np.ndarray) -> np.ndarray:
    box = [(-THETA_BOX, THETA_BOX)] * len(theta)
    theta = np.clip(theta, -THETA_BOX, THETA_BOX)
    for beta in BETAS:
        try:
            res = minimize(problem.smoothed, theta, args=(beta,), jac=True, method="L-BFGS-B",
                           bounds=box, options={"maxiter": 5000, "ftol": 1e-15, "gtol": 1e-12})
            cand = res.x
        except (_Budget, np.linalg.LinAlgError):
            break
        if np.all(np.isfinite(cand)):
            theta = np.clip(cand - cand.max(), -THETA_BOX, THETA_BOX)
    return theta


def _coordinate_stage(problem: _Problem, theta: np.ndarray, best: float,
                      factors_list) -> tuple[np.ndarray, float]:
    """Scan entries in order, first improving move wins, repeat until stuck."""
    try:
        for factors in factors_list:
            steps = [np.log(f) for f in factors]
            improved = True
            while improved:
                improved = False
                for k in range(len(theta)):
                    for step in steps:
                        trial = theta.copy()
                        trial[k] += step
                        val = problem.ratio(trial)
                        if val > best + IMPROVE_TOL:
                            theta, best, improved = trial, val, True
                            problem.stats.accepted += 1
                            break
    except _Budget:
        pass
    return theta, best


def improve_gamma(F: PartialFunction, G0: AdversaryMatrix, budget: int = DEFAULT_BUDGET,
                  seed: int = 0, smooth: bool = True,
                  stats: SearchStats | None = None) -> AdversaryMatrix:
    """Local search for a better adversary matrix, never worse than ``G0``.

    ``budget`` caps the number of objective evaluations; when it runs out
    the best matrix so far is returned.  Results are deterministic given
    ``seed``.
    """
    if G0.F != F:
        raise ValueError("starting matrix belongs to a different function")
    problem = _Problem(F, budget)
    if len(problem.rows) == 0:
        raise ValueError("function has no differing pairs; no adversary matrix exists")
    rng = np.random.default_rng(seed)
    theta = _initial_theta(problem, G0, rng)
    if smooth:
        theta = _smooth_stage(problem, theta)
    try:
        best = problem.ratio(theta)
    except _Budget:
        best = -np.inf
    problem.stats.smoothed_value = float(best)
    theta, best = _coordinate_stage(
        problem, theta, best, [COARSE_FACTORS] + [(f, 1 / f) for f in FINE_STEPS])

    base = spectral_bound(F, G0)
    result = G0
    if np.isfinite(best):
        cand = AdversaryMatrix(F, problem.matrix(theta), f"local-search(seed={seed})")
        if spectral_bound(F, cand) > base:
            result = cand
    problem.stats.final_value = spectral_bound(F, result)
    if stats is not None:
        stats.__dict__.update(problem.stats.__dict__)
    return result
