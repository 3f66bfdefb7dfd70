import itertools

import numpy as np
import pytest

from papnlab import differential as dif
from papnlab.gf2n import field_new
from papnlab.vbf import VBF, from_expression, from_power, random_vbf


def _brute_x0_apn(F, x0):
    """Straight from the definition, pure Python."""
    q = F.spec.size
    for a in range(1, q):
        target = F(x0 ^ a) ^ F(x0)
        sols = {x for x in range(q) if F(x ^ a) ^ F(x) == target}
        if sols != {x0, x0 ^ a}:
            return False
    return True


def test_ddt_matches_naive(rng):
    for n in (1, 3, 5):
        F = random_vbf(field_new(n), rng)
        assert np.array_equal(dif.ddt(F).counts, dif.ddt_naive(F).counts)


def test_x0_tests_agree_exhaustive_n2():
    spec = field_new(2)
    for table in itertools.product(range(4), repeat=4):
        F = VBF(spec, table)
        for x0 in range(4):
            r = dif.is_x0_apn_rodier(F, x0)
            assert r == dif.is_x0_apn_derivative(F, x0) == _brute_x0_apn(F, x0)


@pytest.mark.parametrize("n", [3, 4])
def test_x0_tests_agree_random(n, rng):
    spec = field_new(n)
    for _ in range(150):
        F = random_vbf(spec, rng)
        # sparse random modifications of an APN map make positive verdicts common
        G = from_power(spec, 3)
        for x0 in range(spec.size):
            for H in (F, G):
                assert dif.is_x0_apn_rodier(H, x0) == dif.is_x0_apn_derivative(H, x0)


def test_witnesses_are_genuine(rng):
    spec = field_new(4)
    F = random_vbf(spec, rng)
    rep = dif.papn_set(F)
    for x0, (u, v) in rep.rodier_witness.items():
        assert len({x0, u, v}) == 3 and F(x0) ^ F(u) ^ F(v) ^ F(x0 ^ u ^ v) == 0
    for x0, (a, x) in rep.derivative_witness.items():
        assert a and x not in (x0, x0 ^ a)
        assert F(x ^ a) ^ F(x) == F(x0 ^ a) ^ F(x0)
    assert set(rep.papn_points) == {x for x in range(16) if x not in rep.rodier_witness}


def test_apn_implies_papn_everywhere():
    for n in (3, 5):
        F = from_power(field_new(n), 3)
        assert dif.is_apn(F)
        assert all(dif.papn_set(F).verdicts)


def test_x7_plus_x6_spectrum_and_points():
    F = from_expression(field_new(3), "x^7 + x^6")
    assert str(dif.spectrum(F)) == "{0^31, 2^22, 4^3}"
    assert dif.differential_uniformity(F) == 4
    assert dif.papn_set(F).papn_points == [1, 3, 5, 7]


@pytest.mark.parametrize("n", [4, 6])
def test_inverse_weak_and_nowhere_papn(n):
    F = from_power(field_new(n), (1 << n) - 2)
    assert dif.is_weakly_apn(F)
    assert not any(dif.papn_set(F).verdicts)


def test_inverse_n4_images():
    F = from_power(field_new(4), 14)
    assert set(dif.derivative_images(F)[1:]) == {7}


def test_x7_n11_images():
    # every nonzero-direction derivative of x^7 over GF(2^11) takes 870 values
    F = from_power(field_new(11), 7)
    assert set(dif.derivative_images(F)[1:].tolist()) == {870}
    assert dif.is_weakly_apn(F)
    assert dif.is_x0_apn_rodier(F, 0)


def test_weak_apn_needs_n2():
    with pytest.raises(ValueError):
        dif.is_weakly_apn(from_power(field_new(1), 1))


def _brute_t(F, x, y):
    q = F.spec.size
    return sum(
        1
        for u in range(q)
        for v in range(q)
        if len({u, v, x}) == 3 and F(u) ^ F(v) ^ F(u ^ v ^ x) ^ y == 0
    )


def test_counts_against_brute_force(rng):
    spec = field_new(3)
    F = random_vbf(spec, rng)
    for x in range(8):
        for y in range(8):
            assert dif.t_size(F, x, y) == _brute_t(F, x, y)
            assert dif.s_size(F, x, y) == sum(F(u) ^ F(u ^ x) == y for u in range(8))
    want = sum(F(u) ^ F(v) ^ F(u ^ v) == 0 for u in range(8) for v in range(8))
    assert dif.quadruple_pair_count(F) == want


@pytest.mark.parametrize("n", [4, 5, 6])
def test_power_map_verdict_constant_off_zero(n):
    spec = field_new(n)
    for m in range(1, spec.size):
        v = dif.papn_set(from_power(spec, m)).verdicts
        assert len(set(v[1:])) == 1


def test_report_json():
    F = from_expression(field_new(3), "x^7 + x^6")
    doc = dif.papn_set(F).to_json()
    assert doc["verdicts"] == [False, True, False, True, False, True, False, True]
    assert sorted(doc["failures"]) == ["0x0", "0x2", "0x4", "0x6"]
