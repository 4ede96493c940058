"""Perron eigenpairs of symmetric nonnegative matrices by power iteration.

The iteration starts from the all-ones vector, which has a positive
component along the Perron vector of any nonnegative matrix.  Bipartite
matrices (every adversary matrix of a boolean function) also carry the
eigenvalue ``-lambda`` and make plain iteration oscillate; when that is
detected the matrix is shifted by ``c I`` with ``c`` half the current
estimate of ``lambda``, which moves ``-lambda`` away from the top while
shrinking the gap to the next eigenvalue as little as possible.

Anything with ``shape`` and ``matvec`` can stand in for a dense matrix,
which is how large domains are handled without storing ``|S|^2`` entries.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.sparse.csgraph import connected_components

REL_TOL = 1e-9
MAX_ITER = 100_000
DENSE_POWER_STEPS = 5_000


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, value: float, residual: float, iterations: int):
        super().__init__(message)
        self.value = value
        self.residual = residual
        self.iterations = iterations


@dataclass(frozen=True)
class Eigenpair:
    value: float
    vector: np.ndarray
    iterations: int
    residual: float
    method: str

    @property
    def shifted(self) -> bool:
        return self.method == "power+shift"


def _matvec(A) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(A, np.ndarray):
        return lambda v: A @ v
    return A.matvec


def power_iteration(A, tol: float = REL_TOL, max_iter: int = MAX_ITER) -> Eigenpair:
    """Plain power iteration from the all-ones vector, with the shift fallback."""
    dim = A.shape[0]
    mv = _matvec(A)
    x = np.full(dim, 1.0 / np.sqrt(dim))
    shift = 0.0
    prev = None
    it = 0
    lam = 0.0
    res = np.inf
    while it < max_iter:
        it += 1
        y = mv(x)
        lam = float(x @ y)
        res = float(np.linalg.norm(y - lam * x))
        if res <= tol * max(1.0, abs(lam)):
            break
        if shift:
            y = y + shift * x
        norm = float(np.linalg.norm(y))
        if norm == 0.0:
            # a nonnegative matrix that kills a positive vector is zero
            lam, res = 0.0, 0.0
            break
        x_new = y / norm
        if (not shift and prev is not None and it > 8
                and np.linalg.norm(x_new - prev) < 0.1 * np.linalg.norm(x_new - x)):
            # two-cycle: the -lambda component does not decay, however small
            shift = 0.5 * norm
            x_new = x + x_new
            x_new /= np.linalg.norm(x_new)
        prev = x
        x = x_new
    else:
        raise ConvergenceError(
            f"power iteration did not converge in {max_iter} steps (residual {res:.3g})",
            lam, res, it)
    x = np.abs(x)
    x /= np.linalg.norm(x)
    return Eigenpair(max(lam, 0.0), x, it, res, "power+shift" if shift else "power")


def _dense_pair(A: np.ndarray, iterations: int) -> Eigenpair:
    w, V = np.linalg.eigh(A)
    v = V[:, -1]
    v = np.clip(v if v.sum() >= 0 else -v, 0.0, None)
    v /= np.linalg.norm(v)
    lam = float(w[-1])
    res = float(np.linalg.norm(A @ v - lam * v))
    return Eigenpair(max(lam, 0.0), v, iterations, res, "eigh")


def spectral_norm(A, tol: float = REL_TOL, max_iter: int = MAX_ITER,
                  dense_steps: int = DENSE_POWER_STEPS) -> Eigenpair:
    """Largest eigenvalue and a nonnegative unit eigenvector of ``A``.

    ``A`` must be symmetric with nonnegative entries, so the largest
    eigenvalue equals the spectral norm.  Power iteration stops when
    ``||A v - lambda v|| <= tol * max(1, lambda)``.

    Dense matrices are split into irreducible diagonal blocks first, so the
    Perron value of each block is simple.  A block that still misses the
    tolerance after ``dense_steps`` steps is finished with LAPACK; optimized
    adversary matrices often have a second eigenvalue within ``1e-5`` of the
    first, which would take power iteration around a million steps.
    Matrix-free operators use power iteration only, up to ``max_iter``.
    """
    dim = A.shape[0]
    if dim == 0:
        raise ValueError("empty matrix")
    if not isinstance(A, np.ndarray):
        return power_iteration(A, tol, max_iter)
    count, labels = connected_components(A != 0, directed=False)
    best = None
    total_its = 0
    for c in range(count):
        idx = np.flatnonzero(labels == c)
        if len(idx) < 2:
            continue
        block = A[np.ix_(idx, idx)]
        try:
            pair = power_iteration(block, tol, min(max_iter, dense_steps))
        except ConvergenceError as err:
            pair = _dense_pair(block, err.iterations)
        total_its += pair.iterations
        if best is None or pair.value > best[1].value:
            best = (idx, pair)
    if best is None:
        # zero matrix: any unit vector is an eigenvector for 0
        return Eigenpair(0.0, np.full(dim, 1.0 / np.sqrt(dim)), 0, 0.0, "zero")
    idx, pair = best
    vec = np.zeros(dim)
    vec[idx] = pair.vector
    return Eigenpair(pair.value, vec, total_its, pair.residual, pair.method)


def largest_eigenvalue(A) -> float:
    """Dense LAPACK evaluation of ``lambda(A)``; used inside search loops."""
    if not isinstance(A, np.ndarray):
        return spectral_norm(A).value
    if A.shape[0] == 0:
        return 0.0
    return float(np.linalg.eigvalsh(A)[-1])


class StreamingMatrix:
    """Symmetric matrix given by a vectorised entry function.

    ``entry(rows, cols)`` receives broadcastable index arrays and returns
    the entries; rows are materialised ``chunk`` at a time during ``matvec``.
    """

    def __init__(self, dim: int, entry: Callable[[np.ndarray, np.ndarray], np.ndarray],
                 chunk: int = 256):
        self.shape = (dim, dim)
        self.entry = entry
        self.chunk = chunk
        self._cols = np.arange(dim)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        dim = self.shape[0]
        out = np.empty(dim)
        for start in range(0, dim, self.chunk):
            rows = np.arange(start, min(dim, start + self.chunk))
            block = self.entry(rows[:, None], self._cols[None, :])
            out[start:start + len(rows)] = block @ v
        return out

    def dense(self) -> np.ndarray:
        return np.asarray(self.entry(self._cols[:, None], self._cols[None, :]), dtype=float)


def charpoly_largest_root(A: np.ndarray, lo: float | None = None, hi: float | None = None,
                          tol: float = 1e-13) -> float:
    """Largest real root of ``det(A - t I)`` by bisection on a Sturm-free bracket.

    Independent of any iterative eigen-solver: ``det`` is evaluated by LU,
    and the bracket ``[max row-sum lower bound, max row sum]`` is scanned
    downward until a sign change isolates the top root.
    """
    A = np.asarray(A, dtype=float)
    d = A.shape[0]
    eye = np.eye(d)
    hi = float(np.abs(A).sum(axis=1).max()) + 1.0 if hi is None else hi
    lo = -hi if lo is None else lo

    def f(t):
        return np.linalg.det(A - t * eye)

    # above the top root det(A - tI) has sign (-1)^d; scan down for the first change
    steps = 4000
    grid = np.linspace(hi, lo, steps)
    ref = np.sign(f(hi))
    top = None
    for a, b in zip(grid, grid[1:]):
        if np.sign(f(b)) != ref:
            top = (b, a)
            break
    if top is None:
        raise ValueError("no sign change found; refine the bracket")
    a, b = top
    fa = f(a)
    while b - a > tol * max(1.0, abs(b)):
        mid = 0.5 * (a + b)
        fm = f(mid)
        if np.sign(fm) == np.sign(fa):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)
