import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from querybounds.functions import (
    BUILTINS, FunctionError, PartialFunction, bit_of, compose, constant, differing_mask,
    differing_pairs, from_predicate, make_and, make_and_or, make_builtin, make_majority,
    make_or, make_ordered_search, make_parity, make_search_promise, make_sorted4,
    make_threshold, to_bits, truth_table_function)

from conftest import partial_functions


def all_strings(n):
    return ["".join(b) for b in itertools.product("01", repeat=n)]


class TestBitConventions:
    def test_x1_is_leftmost(self):
        assert bit_of(int("100", 2), 1, 3) == 1
        assert bit_of(int("100", 2), 3, 3) == 0
        assert to_bits(1, 3) == "001"

    def test_domain_order_is_increasing_code(self):
        F = PartialFunction.from_table(2, 1, {"11": 1, "00": 0, "10": 1})
        assert F.inputs == ["00", "10", "11"]
        assert F.index("10") == 1
        assert F.bits.tolist() == [[0, 0], [1, 0], [1, 1]]


class TestBuiltins:
    @pytest.mark.parametrize("n", [1, 2, 3, 5])
    def test_predicates(self, n):
        for x in all_strings(n):
            w = x.count("1")
            assert make_or(n)(x) == int(w > 0)
            assert make_and(n)(x) == int(w == n)
            assert make_parity(n)(x) == w % 2
            assert make_majority(n)(x) == int(2 * w > n)
            for t in range(n + 2):
                assert make_threshold(n, t)(x) == int(w >= t)

    def test_sorted4(self):
        F = make_sorted4()
        ones = {x for x in all_strings(4) if F(x)}
        expected = {x for x in all_strings(4) if list(x) == sorted(x) or list(x) == sorted(x, reverse=True)}
        assert ones == expected
        assert len(ones) == 8

    @pytest.mark.parametrize("n", [1, 2, 4, 7, 16])
    def test_ordered_search(self, n):
        F = make_ordered_search(n)
        assert len(F) == n
        for x in F.inputs:
            assert x.endswith("1") and "10" not in x
            assert F(x) == x.index("1") + 1

    def test_search_promise(self):
        F = make_search_promise(4)
        assert F.inputs == ["0001", "0010", "0100", "1000"]
        assert [F(x) for x in ["1000", "0100", "0010", "0001"]] == [1, 2, 3, 4]

    def test_make_builtin_matches_factories(self):
        assert make_builtin("threshold", 5, t=2) == make_threshold(5, 2)
        assert make_builtin("sorted4") == make_sorted4()
        assert make_builtin("and-or", 4) == make_and_or(2)
        assert set(BUILTINS) >= {"or", "and", "parity", "ordered-search", "sorted4"}

    @pytest.mark.parametrize("args", [("nope", 3, None), ("or", None, None), ("threshold", 4, None),
                                      ("threshold", 4, 9), ("and-or", 5, None), ("or", 0, None),
                                      ("or", 21, None), ("sorted4", 5, None)])
    def test_make_builtin_rejects(self, args):
        with pytest.raises(FunctionError):
            make_builtin(*args)


class TestValidation:
    def test_duplicate_input(self):
        with pytest.raises(FunctionError, match="duplicate"):
            PartialFunction.from_table(2, 1, [("01", 0), ("01", 1)])

    def test_wrong_width(self):
        with pytest.raises(FunctionError):
            PartialFunction.from_table(2, 1, {"011": 0})
        with pytest.raises(FunctionError):
            PartialFunction.from_table(2, 1, {"01": "10"})

    def test_m_bounds(self):
        with pytest.raises(FunctionError):
            PartialFunction(2, 3, (0,), (0,))

    def test_outside_domain(self):
        F = make_search_promise(3)
        with pytest.raises(FunctionError, match="outside"):
            F("000")
        assert "000" not in F and "001" in F


class TestComposition:
    def test_and_or_matches_predicate(self):
        H = make_and_or(2)
        assert H.is_total and H.n == 4
        for x in all_strings(4):
            assert H(x) == int(("1" in x[:2]) and ("1" in x[2:]))

    def test_associativity(self):
        f = make_parity(2)
        g = make_and(2)
        h = make_or(2)
        left = compose(compose(f, [g, f]), [h, h, g, h])
        right = compose(f, [compose(g, [h, h]), compose(f, [g, h])])
        assert left.n == right.n == 8
        assert left.domain == right.domain and left.outputs == right.outputs

    def test_partial_inner_restricts_domain(self):
        S = make_search_promise(2)
        sel = PartialFunction.from_table(2, 1, {"01": 0, "10": 1})
        H = compose(make_or(2), [sel, sel])
        assert len(H) == 4
        for x in H.inputs:
            assert H(x) == int(x[:2] == "10" or x[2:] == "10")
        with pytest.raises(FunctionError):
            compose(make_or(2), [S])

    def test_too_wide(self):
        with pytest.raises(FunctionError):
            compose(make_or(2), [make_or(11), make_or(11)])


@given(partial_functions())
def test_differing_pairs_match_mask(F):
    mask = differing_mask(F)
    pairs = {(F.index(x), F.index(y)) for x, y in differing_pairs(F)}
    assert np.array_equal(mask, mask.T)
    assert pairs == {(a, b) for a, b in zip(*np.nonzero(np.triu(mask, 1)))}


@given(partial_functions(), st.data())
def test_restrict_keeps_values(F, data):
    keep = data.draw(st.sets(st.sampled_from(F.inputs)))
    R = F.restrict(keep)
    assert set(R.inputs) == keep
    assert all(R(x) == F(x) for x in keep)


@given(st.integers(1, 3), st.data())
def test_truth_table_roundtrip(n, data):
    table = data.draw(st.integers(0, (1 << (1 << n)) - 1))
    F = truth_table_function(n, table)
    G = from_predicate(n, lambda s: (table >> int(s, 2)) & 1)
    assert F == G
    assert F.negate().negate() == F


def test_constant():
    F = constant(3, 1)
    assert set(F.outputs) == {1} and F.is_total
    assert not differing_mask(F).any()
