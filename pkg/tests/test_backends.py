"""Compiled kernels against the pure-python fallback, value for value.

The extension is built with FP contraction off, so results are required to
be bit-identical, not merely close: every assertion here is exact equality.
"""

import math

import numpy as np
import pytest

from phasest import _purepy

_kernels = pytest.importorskip("phasest._kernels")

from conftest import random_density


def cases(n=12, seed=402):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        d = random_density(rng)
        ctrl = float(rng.uniform(0.0, 2.0 * math.pi))
        k = int(rng.integers(1, 12))
        sym = float(rng.choice([1.0, 1.0, 0.8, 0.5]))
        vis = float(rng.choice([1.0, 1.0, 0.9, 0.4]))
        out.append((d.coeffs, ctrl, k, sym, vis))
    return out


def test_bayes_update_identical():
    for c, ctrl, k, sym, vis in cases():
        for outcome in (1, -1):
            a = _purepy.bayes_update(c, outcome, ctrl, k, sym, vis)
            b = _kernels.bayes_update(c, outcome, ctrl, k, sym, vis)
            if a is None or b is None:
                assert a is None and b is None
                continue
            ca, pa = a
            cb, pb = b
            assert pa == pb
            assert ca.shape == cb.shape
            assert np.array_equal(ca, cb)


def test_gain_values_identical():
    for c, ctrl, k, sym, vis in cases(20):
        assert _purepy.sharpness_gain_at(c, ctrl, k, sym, vis) == _kernels.sharpness_gain_at(
            c, ctrl, k, sym, vis
        )
        assert _purepy.entropy_gain_at(c, ctrl, k, sym, vis) == _kernels.entropy_gain_at(
            c, ctrl, k, sym, vis
        )


def test_entropy_prepare_identical():
    for c, _ctrl, k, sym, vis in cases(20):
        a = _purepy.entropy_prepare(c, k, sym, vis)
        b = _kernels.entropy_prepare(c, k, sym, vis)
        if a is None or b is None:
            assert a is None and b is None
            continue
        assert a[0] == b[0]
        assert np.array_equal(np.asarray(a[1]), np.asarray(b[1]))


def test_opt_ctrl_identical():
    for c, _ctrl, k, sym, vis in cases(16):
        for kind in (_purepy.SHARPNESS, _purepy.ENTROPY):
            a = _purepy.opt_ctrl(kind, c, k, sym, vis, math.pi)
            b = _kernels.opt_ctrl(kind, c, k, sym, vis, math.pi)
            assert a == b


def test_argmax_selection_identical():
    rng = np.random.default_rng(77)
    for trial in range(8):
        d = random_density(rng)
        L = int(rng.integers(5, 120))
        ks = np.arange(1, L + 1, dtype=np.int64)
        ts = ks.astype(np.float64) if trial % 2 == 0 else np.ones(L)
        syms = np.ones(L)
        viss = np.ones(L)
        for kind in (_purepy.SHARPNESS, _purepy.ENTROPY):
            a = _purepy.rate_argmax_brute(d.coeffs, ks, ts, syms, viss, kind, math.pi)
            b = _kernels.rate_argmax_brute(d.coeffs, ks, ts, syms, viss, kind, math.pi)
            assert a == b
            a = _purepy.rate_argmax_fib(d.coeffs, ks, ts, syms, viss, kind, math.pi)
            b = _kernels.rate_argmax_fib(d.coeffs, ks, ts, syms, viss, kind, math.pi)
            assert a == b


def test_constants_agree():
    assert _kernels.SHARPNESS == _purepy.SHARPNESS
    assert _kernels.ENTROPY == _purepy.ENTROPY
