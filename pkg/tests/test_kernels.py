import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from querybounds import _pykernels, kernels

ck = pytest.importorskip("querybounds._ckernels")

mask_lists = st.integers(1, 10).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.integers(1, (1 << n) - 1), max_size=30)))


def popcount(v):
    return bin(v).count("1")


@settings(max_examples=200, deadline=None)
@given(mask_lists)
def test_hitting_set_agrees(args):
    n, masks = args
    kp, mp = _pykernels.min_hitting_set(masks, n)
    kc, mc = ck.min_hitting_set(masks, n)
    assert kp == kc
    for m in (mp, mc):
        assert popcount(m) == kp
        assert all(m & b for b in masks)


@settings(max_examples=200, deadline=None)
@given(mask_lists)
def test_disjoint_blocks_agree(args):
    n, masks = args
    kp, bp = _pykernels.max_disjoint_blocks(masks, n)
    kc, bc = ck.max_disjoint_blocks(masks, n)
    assert kp == kc == len(bp) == len(bc)
    for blocks in (bp, bc):
        used = 0
        for b in blocks:
            assert not used & b
            assert any(m & b == m for m in masks)  # each block contains a sensitive mask
            used |= b


@pytest.mark.parametrize("n", [3, 5, 8])
def test_measure_all_agrees(n):
    rng = np.random.default_rng(n)
    codes = np.sort(rng.choice(1 << n, size=min(1 << n, 40), replace=False))
    outs = rng.integers(0, 3, size=len(codes))
    py = _pykernels.measure_all(codes.tolist(), outs.tolist(), n)
    cy = ck.measure_all(codes, outs, n)
    assert [list(map(int, a)) for a in py] == [list(map(int, a)) for a in cy]


def test_empty_family():
    assert ck.min_hitting_set([], 4)[0] == _pykernels.min_hitting_set([], 4)[0] == 0
    assert ck.max_disjoint_blocks([], 4)[0] == 0


def test_dispatch_reports_backend():
    assert kernels.BACKEND in ("cython", "python")
    # widths above 62 bits always go through Python integers
    big = [1 << 70, (1 << 70) | 1]
    assert kernels.min_hitting_set(big, 80)[0] == 1


def test_env_switch_selects_fallback():
    import os
    import subprocess
    import sys
    env = dict(os.environ, QUERYBOUNDS_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import querybounds.kernels as k; print(k.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
