"""Pure-Python combinatorial kernels (fallback for the compiled ``_ckernels``).

Masks are integers over ``n`` bit positions.  Both backends enumerate in
the same order, so they return identical witnesses, not just equal sizes.
"""
from __future__ import annotations

BACKEND = "python"


def popcount(v: int) -> int:
    return bin(v).count("1")


def minimal_masks(masks) -> list[int]:
    """Inclusion-minimal distinct masks, sorted by ``(popcount, value)``."""
    uniq = sorted(set(int(m) for m in masks), key=lambda v: (popcount(v), v))
    kept: list[int] = []
    for m in uniq:
        if not any((k & m) == k for k in kept):
            kept.append(m)
    return kept


def min_hitting_set(masks, n: int) -> tuple[int, int]:
    """Smallest set of positions meeting every mask.

    Returns ``(size, mask)``; among minimum sets the numerically smallest
    mask wins.  An empty family is hit by the empty set.
    """
    fam = minimal_masks(masks)
    if not fam:
        return 0, 0
    if 0 in fam:
        raise ValueError("the empty mask cannot be hit")
    full = (1 << n) - 1
    for k in range(1, n + 1):
        c = (1 << k) - 1
        while c <= full:
            if all(c & m for m in fam):
                return k, c
            # next k-subset in increasing numeric order (Gosper)
            low = c & -c
            r = c + low
            c = (((r ^ c) >> 2) // low) | r
    raise ValueError("no hitting set exists")


def max_disjoint_blocks(masks, n: int) -> tuple[int, list[int]]:
    """Maximum number of pairwise-disjoint masks, with a witness family.

    Only inclusion-minimal masks are used (a block containing a smaller
    sensitive block can always be swapped for it).
    """
    fam = minimal_masks(masks)
    if not fam:
        return 0, []
    sizes = [popcount(m) for m in fam]
    best: list[int] = []

    def dfs(start: int, used: int, chosen: list[int]):
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
        free = n - popcount(used)
        for j in range(start, len(fam)):
            if len(chosen) + free // sizes[j] <= len(best):
                break
            m = fam[j]
            if m & used == 0:
                chosen.append(m)
                dfs(j + 1, used | m, chosen)
                chosen.pop()

    dfs(0, 0, [])
    return len(best), best


def measure_all(codes, outputs, n: int) -> tuple[list[int], list[int], list[int]]:
    """Certificate size, block sensitivity and sensitivity for every input."""
    codes = [int(c) for c in codes]
    outputs = [int(z) for z in outputs]
    cert, bs, sens = [], [], []
    for x, zx in zip(codes, outputs):
        masks = [x ^ y for y, zy in zip(codes, outputs) if zy != zx]
        cert.append(min_hitting_set(masks, n)[0])
        bs.append(max_disjoint_blocks(masks, n)[0])
        sens.append(sum(1 for m in set(masks) if m & (m - 1) == 0))
    return cert, bs, sens
