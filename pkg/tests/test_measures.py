"""Measures against definition-level brute force on small functions."""
import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from querybounds.functions import (
    make_and, make_and_or, make_majority, make_or, make_ordered_search, make_parity,
    make_search_promise, make_sorted4, truth_table_function)
from querybounds.measures import (
    block_sensitivity, blocks_are_disjoint, boolean_certificates, certificate,
    certificate_complexity, measure_report, sensitive_blocks, sensitivity)

from conftest import partial_functions


def flip(x: str, block) -> str:
    return "".join(("1" if c == "0" else "0") if i + 1 in block else c for i, c in enumerate(x))


def oracle_C(F, x):
    # smallest position set P such that agreeing with x on P forces F(x)
    for k in range(F.n + 1):
        for P in itertools.combinations(range(F.n), k):
            if all(F(y) == F(x) for y in F.inputs if all(y[p] == x[p] for p in P)):
                return k
    raise AssertionError("unreachable")


def oracle_bs(F, x):
    blocks = []
    for k in range(1, F.n + 1):
        for B in itertools.combinations(range(1, F.n + 1), k):
            y = flip(x, B)
            if y in F and F(y) != F(x):
                blocks.append(frozenset(B))

    def pack(avail, used):
        best = 0
        for j, B in enumerate(avail):
            if not (B & used):
                best = max(best, 1 + pack(avail[j + 1:], used | B))
        return best
    return pack(blocks, frozenset())


def oracle_s(F, x):
    return sum(1 for i in range(1, F.n + 1) if flip(x, (i,)) in F and F(flip(x, (i,))) != F(x))


@pytest.mark.parametrize("F, C, bs, s", [
    (make_or(4), 4, 4, 4),
    (make_and(3), 3, 3, 3),
    (make_parity(4), 4, 4, 4),
    (make_majority(5), 3, 3, 3),
    (make_and_or(2), 2, 2, 2),
    (make_search_promise(4), 1, 1, 0),
])
def test_known_values(F, C, bs, s):
    r = measure_report(F)
    assert (r.C, r.bs, r.s) == (C, bs, s)


def test_or_certificates_by_output():
    assert boolean_certificates(make_or(5)) == (5, 1)
    assert boolean_certificates(make_and(5)) == (1, 5)


def test_ordered_search_partial_domain():
    F = make_ordered_search(8)
    r = measure_report(F)
    # neighbours in the chain differ in exactly one bit; at most two of them
    assert r.s == 2 and r.bs == 2
    assert r.notes


@settings(max_examples=60, deadline=None)
@given(partial_functions(max_n=4, max_m=2))
def test_against_oracle(F):
    r = measure_report(F)
    for x in F.inputs:
        assert r.certificate[x] == oracle_C(F, x)
        assert r.block_sensitivity[x] == oracle_bs(F, x)
        assert r.sensitivity[x] == oracle_s(F, x)


@settings(max_examples=60, deadline=None)
@given(partial_functions(max_n=5, max_m=2))
def test_witnesses_are_valid(F):
    for x in F.inputs:
        P = certificate(F, x)
        assert len(P) == certificate_complexity(F, x)
        assert all(F(y) == F(x) for y in F.inputs if all(y[p - 1] == x[p - 1] for p in P))
        blocks = sensitive_blocks(F, x)
        assert blocks_are_disjoint(blocks)
        assert len(blocks) == block_sensitivity(F, x)
        for B in blocks:
            y = flip(x, B)
            assert y in F and F(y) != F(x)
        assert sensitivity(F, x) <= block_sensitivity(F, x) <= certificate_complexity(F, x)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_exhaustive_chain(n):
    for table in range(1 << (1 << n)):
        r = measure_report(truth_table_function(n, table))
        assert r.s <= r.bs <= r.C
        assert r.C <= max(1, r.bs_z(0)) * max(1, r.bs_z(1)) or r.C == 0
        assert r.C <= r.bs ** 2


@settings(max_examples=40, deadline=None)
@given(partial_functions(max_n=4, max_m=2, min_size=2), st.data())
def test_restriction_is_monotone(F, data):
    keep = data.draw(st.sets(st.sampled_from(F.inputs), min_size=1))
    R = F.restrict(keep)
    rf, rr = measure_report(F), measure_report(R)
    for x in R.inputs:
        assert rr.certificate[x] <= rf.certificate[x]
        assert rr.block_sensitivity[x] <= rf.block_sensitivity[x]


def test_sorted4_measures():
    F = make_sorted4()
    C0, C1 = boolean_certificates(F)
    r = measure_report(F)
    assert r.bs == oracle_bs(F, r.witness_input)
    assert (C0, C1) == (max(oracle_C(F, x) for x in F.inputs if F(x) == 0),
                        max(oracle_C(F, x) for x in F.inputs if F(x) == 1))
