import math

import numpy as np
import pytest

from conftest import P, all_patterns
from inducedrate.channel import (
    PauliDist,
    dist_from_total_p,
    hashing_bound,
    parse_channel,
    pattern_prob,
    pattern_probs,
    skewed_dist,
    skewed_params,
)


def test_skewed_noiseless():
    assert skewed_dist(0, 0).as_tuple() == (1, 0, 0, 0)


def test_skewed_all_y():
    d = skewed_dist(1, 1)
    assert d.p_Y == 1 and d.p_I == d.p_X == d.p_Z == 0


def test_skewed_example():
    d = skewed_dist(0.09, 0.01)
    assert d.p_I == pytest.approx(0.9009, abs=1e-15)
    assert d.p_X == pytest.approx(0.0891, abs=1e-15)
    assert d.p_Z == pytest.approx(0.0091, abs=1e-15)
    assert d.p_Y == pytest.approx(0.0009, abs=1e-15)


@pytest.mark.parametrize("q", [(-0.1, 0.2), (0.5, 1.2)])
def test_skewed_rejects_out_of_range(q):
    with pytest.raises(ValueError):
        skewed_dist(*q)


@pytest.mark.parametrize("q_x", np.linspace(0, 1, 7))
@pytest.mark.parametrize("q_z", np.linspace(0, 1, 5))
def test_skewed_sums_to_one(q_x, q_z):
    assert abs(sum(skewed_dist(q_x, q_z).as_tuple()) - 1.0) <= 1e-15


def test_total_p_zero_is_noiseless():
    for eta in (0.5, 1, 9):
        assert dist_from_total_p(0.0, eta).is_noiseless()


def test_total_p_eta9():
    q_x, q_z = skewed_params(0.25, 9.0)
    # smaller root of 9 q^2 - 10 q + 0.25 = 0, checked by re-substitution below
    assert q_z == pytest.approx((10 - math.sqrt(91)) / 18, abs=1e-15)
    assert q_x == pytest.approx(9 * (10 - math.sqrt(91)) / 18, abs=1e-15)
    assert (1 - q_x) * (1 - q_z) == pytest.approx(0.75, abs=1e-15)
    assert 1 - dist_from_total_p(0.25, 9.0).p_I == pytest.approx(0.25, abs=1e-12)


def test_total_p_symmetric():
    q_x, q_z = skewed_params(0.19, 1.0)
    assert q_x == pytest.approx(0.1, abs=1e-15)
    assert q_z == pytest.approx(0.1, abs=1e-15)


@pytest.mark.parametrize("eta", [1.0, 3.0, 9.0])
def test_total_p_inverts(eta):
    for p in np.linspace(0, 0.5, 51):
        d = dist_from_total_p(p, eta)
        assert 1 - d.p_I == pytest.approx(p, abs=1e-12)
        assert d.p_X + d.p_Y == pytest.approx(eta * (d.p_Z + d.p_Y), abs=1e-12)


def test_total_p_smaller_root_valid_up_to_one():
    # discriminant >= (1 - eta)^2, and the smaller root keeps both q in [0, 1] for p < 1
    for eta in (0.1, 1.0, 9.0, 50.0):
        for p in (0.5, 0.9, 0.999999):
            q_x, q_z = skewed_params(p, eta)
            assert 0 <= q_x <= 1 and 0 <= q_z <= 1


@pytest.mark.parametrize("p,eta", [(1.0, 9.0), (-0.1, 9.0), (0.1, 0.0), (0.1, -2.0)])
def test_total_p_bad_input(p, eta):
    with pytest.raises(ValueError):
        dist_from_total_p(p, eta)


def test_pattern_prob_examples():
    d = skewed_dist(0.09, 0.01)
    assert pattern_prob(d, P("III")) == pytest.approx(d.p_I**3, rel=1e-15)
    assert pattern_prob(d, P("Y")) == d.p_Y
    assert pattern_prob(PauliDist(0.9009, 0.0891, 0.0009, 0.0091), P("XIZ")) == pytest.approx(
        0.0891 * 0.9009 * 0.0091, rel=1e-15
    )


@pytest.mark.parametrize("n", range(0, 7))
def test_pattern_probs_normalised(n):
    d = PauliDist(0.6, 0.2, 0.05, 0.15)
    assert pattern_probs(d, n).sum() == pytest.approx(1.0, abs=1e-10)


def test_pattern_probs_layout():
    d = PauliDist(0.6, 0.2, 0.05, 0.15)
    table = pattern_probs(d, 3)
    for e in all_patterns(3):
        assert table[e.bits] == pytest.approx(pattern_prob(d, e), rel=1e-14)


def test_hashing_bound_examples():
    assert hashing_bound(PauliDist(1, 0, 0, 0)) == 1.0
    assert hashing_bound(PauliDist(0.25, 0.25, 0.25, 0.25)) == pytest.approx(-1.0, abs=1e-15)
    # first hashing-bound point of the eta=9 sweep
    assert hashing_bound(dist_from_total_p(0.249677777777778, 9)) == pytest.approx(0.0504004990623609, abs=1e-9)


def test_hashing_bound_permutation_invariant():
    import itertools

    base = (0.2, 0.05, 0.15)
    ref = hashing_bound(PauliDist(0.6, *base))
    for perm in itertools.permutations(base):
        assert abs(hashing_bound(PauliDist(0.6, *perm)) - ref) <= 1e-15


def test_dist_validation():
    with pytest.raises(ValueError):
        PauliDist(0.5, 0.5, 0.5, -0.5)
    with pytest.raises(ValueError):
        PauliDist(0.5, 0.2, 0.2, 0.2)


class TestParseChannel:
    def test_explicit(self):
        spec = parse_channel("0.7,0.1,0.1,0.1")
        assert not spec.is_family
        assert spec.at() == PauliDist(0.7, 0.1, 0.1, 0.1)

    def test_skewed_family(self):
        spec = parse_channel("skewed:eta=9")
        assert spec.is_family and spec.eta == 9.0
        assert spec.at(0.25) == dist_from_total_p(0.25, 9.0)

    def test_skewed_point(self):
        spec = parse_channel("skewed:eta=9,p=0.25")
        assert spec.at() == dist_from_total_p(0.25, 9.0)

    @pytest.mark.parametrize("text", ["skewed:p=0.2", "skewed:eta=9,q=1", "0.5,0.5", "a,b,c,d"])
    def test_bad(self, text):
        with pytest.raises(ValueError):
            parse_channel(text)
