"""Builtin query algorithms as explicit unitaries."""
from __future__ import annotations

import math

import numpy as np
from scipy.stats import unitary_group

from .simulator import QueryAlgorithm


def parity2() -> QueryAlgorithm:
    """One phase query decides ``x1 XOR x2``; no workspace, so the space is 3-dimensional."""
    r = 1 / math.sqrt(2)
    # U0 sends |0> to (|1> + |2>)/sqrt 2
    U0 = np.array([[0, 0, 1], [r, r, 0], [r, -r, 0]], dtype=complex)
    U1 = np.array([[1, 0, 0], [0, r, r], [0, r, -r]], dtype=complex)
    return QueryAlgorithm(2, 1, [U0, U1], "phase", np.array([0, 0, 1]), "parity2")


def grover4() -> QueryAlgorithm:
    """One Grover iteration on four positions; exact when exactly one bit is set.

    The outcome is the measured position ``i`` (``0`` for the idle slot).
    """
    n = 4
    u = np.zeros(n + 1)
    u[1:] = 0.5
    # U0: any unitary with U0|0> = u; a reflection swapping |0> and u works
    w = u - np.eye(n + 1)[0]
    U0 = np.eye(n + 1) - 2 * np.outer(w, w) / (w @ w)
    D = np.eye(n + 1)
    D[1:, 1:] = 2 * np.outer(u[1:], u[1:]) - np.eye(n)
    return QueryAlgorithm(n, 1, [U0.astype(complex), D.astype(complex)], "phase",
                          np.arange(n + 1), "grover4")


def _permutation(mapping: dict[int, int], dim: int) -> np.ndarray:
    """Permutation matrix extending an injective partial map on basis indices."""
    free_src = [k for k in range(dim) if k not in mapping]
    used = set(mapping.values())
    if len(used) != len(mapping):
        raise ValueError("partial map is not injective")
    free_dst = [k for k in range(dim) if k not in used]
    full = dict(mapping)
    full.update(zip(free_src, free_dst))
    P = np.zeros((dim, dim), dtype=complex)
    for src, dst in full.items():
        P[dst, src] = 1.0
    return P


def _binary_search_mid(n: int, answers: list[int]) -> tuple[int, int]:
    lo, hi = 1, n
    for a in answers:
        mid = (lo + hi) // 2
        if a:
            hi = mid
        else:
            lo = mid + 1
    return lo, hi


def ordered_search_binary(n: int) -> QueryAlgorithm:
    """Classical binary search for the leftmost 1, one index per query.

    Workspace: target bit ``b`` (top) and a history register holding the
    answers so far, bit ``t`` for query ``t + 1``.  Each unitary is a
    permutation that files the last answer into the history and loads the
    next index to query.  Uses ``ceil(log2 n)`` bit-flip queries.
    """
    if n < 2:
        raise ValueError("ordered search needs n >= 2")
    T = math.ceil(math.log2(n))
    H = 1 << T
    W = 2 * H
    dim = (n + 1) * W

    def index(i, b, h):
        return i * W + b * H + h

    def next_query(answers):
        lo, hi = _binary_search_mid(n, answers)
        return (lo + hi) // 2 if lo < hi else lo

    unitaries = [_permutation({index(0, 0, 0): index(next_query([]), 0, 0)}, dim)]
    for t in range(1, T + 1):
        mapping = {}
        for h in range(1 << (t - 1)):
            answers = [(h >> k) & 1 for k in range(t - 1)]
            i = next_query(answers)
            for b in (0, 1):
                h2 = h | (b << (t - 1))
                target = next_query(answers + [b]) if t < T else 0
                mapping[index(i, b, h)] = index(target, 0, h2)
        unitaries.append(_permutation(mapping, dim))
    outcome = np.zeros(dim, dtype=np.int64)
    for h in range(H):
        lo, _ = _binary_search_mid(n, [(h >> k) & 1 for k in range(T)])
        outcome[index(0, 0, h)] = lo
    return QueryAlgorithm(n, W, unitaries, "flip", outcome, f"ordered-search-bs{n}")


def idle(n: int, workspace_dim: int = 1, outcome_value: int = 0) -> QueryAlgorithm:
    """Zero queries; always announces ``outcome_value``."""
    d = (n + 1) * workspace_dim
    return QueryAlgorithm(n, workspace_dim, [np.eye(d, dtype=complex)], "phase",
                          np.full(d, outcome_value), f"idle{n}")


def random_algorithm(n: int, T: int, rng: np.random.Generator, workspace_dim: int = 2,
                     oracle: str = "phase", outcomes: int = 2) -> QueryAlgorithm:
    """Haar-random unitaries; basis state ``k`` announces ``k mod outcomes``."""
    d = (n + 1) * workspace_dim
    Us = [unitary_group.rvs(d, random_state=rng) for _ in range(T + 1)]
    return QueryAlgorithm(n, workspace_dim, Us, oracle, np.arange(d) % outcomes, f"random{n}x{T}")


BUILTIN_ALGORITHMS = {
    "parity2": parity2,
    "grover4": grover4,
    "ordered-search-bs4": lambda: ordered_search_binary(4),
    "ordered-search-bs8": lambda: ordered_search_binary(8),
}
