import numpy as np
import pytest

from papnlab.gf2n import field_new
from papnlab.identities import apn_fourth_moment, apn_third_moment
from papnlab.spectral import (
    e_factor,
    e_matrix,
    fwht,
    iter_walsh_columns,
    moment,
    moment_streaming,
    twisted_moment,
    verify_walsh_diff,
    walsh_full,
    walsh_naive,
)
from papnlab.vbf import VBF, from_power, random_vbf


def test_fwht_involution(rng):
    v = rng.integers(-5, 5, size=(3, 32))
    assert np.array_equal(fwht(fwht(v)), 32 * v)


@pytest.mark.parametrize("n", [1, 2])
def test_fast_equals_naive_exhaustive(n):
    spec = field_new(n)
    q = spec.size
    for idx in range(q**q):
        table = [(idx // q**i) % q for i in range(q)]
        F = VBF(spec, table)
        assert np.array_equal(walsh_full(F).w, walsh_naive(F).w)


@pytest.mark.parametrize("n", [3, 4])
def test_fast_equals_naive_random(n, rng):
    spec = field_new(n)
    for _ in range(40):
        F = random_vbf(spec, rng)
        assert np.array_equal(walsh_full(F).w, walsh_naive(F).w)


@pytest.mark.parametrize("n", [3, 5, 7])
def test_gold_moments(n):
    W = walsh_full(from_power(field_new(n), 3))
    assert moment(W, 3).value == apn_third_moment(n)
    assert moment(W, 4).value == apn_fourth_moment(n)


def test_frozen_moment_values():
    W = walsh_full(from_power(field_new(3), 3))
    assert moment(W, 3).value == 1408
    assert moment(W, 4).value == 11264


@pytest.mark.parametrize("n", [2, 4, 6])
def test_parseval(n, rng):
    F = random_vbf(field_new(n), rng)
    W = walsh_full(F)
    assert np.all((W.w.astype(np.int64) ** 2).sum(axis=0) == 1 << (2 * n))
    assert moment(W, 2).value == 1 << (3 * n)


def test_streaming_equals_full(rng):
    spec = field_new(6)
    F = random_vbf(spec, rng)
    W = walsh_full(F)
    for k in (2, 3, 4):
        assert moment_streaming(F, k, chunk=5).value == moment(W, k).value
    for k in (2, 3):
        tw = twisted_moment(W, k, 7, 11, spec)
        assert moment_streaming(F, k, twist=(7, 11), chunk=9).value == tw.value
    blocks = np.concatenate([blk for _, blk in iter_walsh_columns(F, chunk=7)])
    assert np.array_equal(blocks.T, W.w)


def test_moment_order_checked():
    W = walsh_full(from_power(field_new(3), 3))
    with pytest.raises(ValueError):
        moment(W, 5)
    with pytest.raises(ValueError):
        twisted_moment(W, 4, 0, 0, field_new(3))


def test_e_factor_matches_matrix():
    spec = field_new(3)
    E = e_matrix(spec, 3, 5, 6)
    for a in range(8):
        for b in range(8):
            assert E[a, b] == e_factor(spec, a, b, 3, 5, 6)
            assert E[a, b] in (-2, 0, 2)


def test_walsh_diff(rng):
    spec = field_new(5)
    F = random_vbf(spec, rng)
    for x0, eps in [(0, 1), (3, 17), (31, 31)]:
        assert verify_walsh_diff(F, x0, eps)


def test_moment_json():
    W = walsh_full(from_power(field_new(3), 3))
    assert twisted_moment(W, 3, 0, 1, field_new(3)).to_json() == {
        "k": 3, "twist": ["0x0", "0x1"], "value": str(twisted_moment(W, 3, 0, 1, field_new(3)).value)
    }
