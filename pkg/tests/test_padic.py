"""padic unit tests: naive-loop oracles, frozen small values, valuation laws."""

import math
import random

import pytest

from mgl.errors import DomainError, PrecisionError, ResourceError
from mgl.padic import (
    INFINITY,
    ModulusContext,
    delta_exact,
    delta_mod,
    epsilon,
    gamma_mod,
    geo_sum,
    lambda_mod,
    mu_mod,
    residue_valuation,
    split,
    valuation_with_retry,
    weighted_sum,
)


def naive_geo(a, count, m):
    return sum(pow(a, i, m) for i in range(count)) % m


def naive_weighted(a, count, m):
    return sum(i * pow(a, i, m) for i in range(1, count)) % m


def vp(x, p):
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


class TestSplit:
    def test_examples(self):
        s = split(54, 3)
        assert (s.valuation, s.unit) == (3, 2)
        s = split(-27, 3)
        assert (s.valuation, s.unit) == (3, -1)
        s = split(20, 5)
        assert (s.valuation, s.unit) == (1, 4)

    def test_zero_is_infinite(self):
        s = split(0, 7)
        assert s.infinite and s.valuation == INFINITY
        assert s.valuation > 10**100

    def test_reconstruction(self):
        rng = random.Random(11)
        for _ in range(200):
            p = rng.choice([2, 3, 5, 7, 11])
            x = rng.randint(-(10**6), 10**6) or 1
            s = split(x, p)
            assert x == p**s.valuation * s.unit
            assert s.unit % p != 0


class TestGeoWeightedOracle:
    def test_trivial(self):
        assert geo_sum(7, 0, ModulusContext(10)) == 0
        assert geo_sum(2, 10, 1024) == 1023
        assert weighted_sum(5, 0, 1000) == 0
        assert weighted_sum(5, 1, 1000) == 0
        assert weighted_sum(2, 2, 1000) == 2

    def test_frozen(self):
        assert geo_sum(7, 7, 10**9) == 137257
        assert weighted_sum(3, 4, 10**6) == 102

    def test_against_naive(self):
        rng = random.Random(20240817)
        for _ in range(1000):
            a = rng.randint(-50, 50)
            count = rng.randint(0, 10**4)
            m = rng.randint(2, 10**9)
            assert geo_sum(a, count, m) == naive_geo(a, count, m)
            assert weighted_sum(a, count, m) == naive_weighted(a, count, m)

    def test_huge_count(self):
        # closed forms at a = 1: S(t) = t, W(t) = t(t-1)/2
        t = 10**30 + 7
        m = 999999937
        assert geo_sum(1, t, m) == t % m
        assert weighted_sum(1, t, m) == (t * (t - 1) // 2) % m

    def test_negative_count_rejected(self):
        with pytest.raises(DomainError):
            geo_sum(2, -1, 100)


class TestAuxIntegers:
    def test_delta_small(self):
        assert delta_mod(2, 10**6) == 2
        assert delta_exact(2) == 2
        assert delta_exact(3) == 42
        assert delta_exact(7) == 4804002

    def test_delta_exact_matches_loop(self):
        for a in range(2, 60):
            loop = (a - 1) * sum(i * a**i for i in range(1, a))
            assert delta_exact(a) == loop

    def test_delta_mod_7_at_3_12(self):
        assert vp(delta_exact(7), 3) == 3
        assert delta_mod(7, 3**12) == 4804002 % 3**12

    def test_lomismo(self):
        rng = random.Random(3)
        for _ in range(80):
            a = rng.randint(2, 200)
            m = rng.randint(2, 10**12)
            assert delta_mod(a, m) == a * gamma_mod(a, m) % m

    def test_gamma_small(self):
        assert gamma_mod(2, 1000) == 1

    def test_mu_convention_and_small(self):
        for a in (-1, 0, 1):
            assert mu_mod(a, 10**9) == 0
        assert mu_mod(2, 10**9) == 34
        # direct check at a = -2: a**6 - a*(1+a+a**2+a**3)
        assert mu_mod(-2, 10**9) == ((-2) ** 6 - (-2) * (1 - 2 + 4 - 8)) % 10**9

    def test_domain_errors(self):
        for f in (delta_mod, gamma_mod, lambda_mod):
            with pytest.raises(DomainError):
                f(1, 100)
            with pytest.raises(DomainError):
                f(0, 100)

    def test_lambda_small(self):
        assert lambda_mod(2, 10**9) == 2

    def test_lambda_bound(self):
        with pytest.raises(ResourceError):
            lambda_mod(10**4 + 1, 100)

    def test_lambda_valuation_laws(self):
        # v_2(lambda_a) = 3*v_2(a-1) - 2
        for a in (3, 5, 9):
            expect = 3 * vp(a - 1, 2) - 2
            v = valuation_with_retry(lambda c: lambda_mod(a, c), 2, expect)
            assert v == expect
        # v_5(lambda_6) >= 3
        assert lambda_mod(6, 5**3) == 0

    def test_lambda_matches_naive(self):
        for a in (2, 3, 4):
            d = delta_exact(a)
            naive = (a - 1) * sum(i * a**i for i in range(1, d))
            m = 10**9 + 7
            assert lambda_mod(a, m) == naive % m


class TestEpsilon:
    def test_examples(self):
        assert epsilon(7, 34) == 3
        assert epsilon(4, 6) == 1
        assert epsilon(-2, 7) == 3

    def test_domain(self):
        with pytest.raises(DomainError):
            epsilon(1, 5)
        with pytest.raises(DomainError):
            epsilon(5, 1)


class TestValuationReadoff:
    def test_exact_below_precision(self):
        assert residue_valuation(18, 3, 4) == 2
        assert residue_valuation(1, 3, 4) == 0

    def test_at_least_precision(self):
        assert residue_valuation(0, 3, 4) is None

    def test_retry_raises_for_true_zero(self):
        with pytest.raises(PrecisionError):
            valuation_with_retry(lambda c: 0, 3, 1, max_doublings=3)

    def test_retry_recovers_underestimate(self):
        # true valuation 12, expected only 1: first precision 5 reads zero
        target = 3**12 * 2

        def fn(ctx):
            return target % ctx.modulus

        assert valuation_with_retry(fn, 3, 1) == 12


class TestValuationLaws:
    """The three laws the engine's exponent bookkeeping rests on."""

    def test_vp_gamma_p_gt_3(self):
        rng = random.Random(99)
        checked = 0
        while checked < 100:
            p = rng.choice([5, 7, 11, 13, 17])
            e = rng.randint(1, 3)
            u = rng.randint(1, 40)
            if u % p == 0:
                continue
            a = 1 + p**e * u
            expect = 3 * e
            got = valuation_with_retry(
                lambda c, a=a: (a - 1) * gamma_mod(a, c) % c.modulus, p, expect
            )
            assert got == expect, (a, p)
            checked += 1

    def test_v2_gamma_odd_a(self):
        rng = random.Random(7)
        for _ in range(60):
            a = 2 * rng.randint(1, 5000) + 1
            if a == 1:
                continue
            expect = 3 * vp(a - 1, 2) - 1
            got = valuation_with_retry(
                lambda c, a=a: (a - 1) * gamma_mod(a, c) % c.modulus, 2, expect
            )
            assert got == expect, a

    def test_v3_equals_4_when_7_mod_9(self):
        # a = 7 mod 9: valuation 4 via gamma when a != 25 mod 27, via mu else
        cases = [7, 16, 34, 43, 61, 70, 97]
        via_mu = [25, 52, 79, 106, 133]
        for a in cases:
            assert a % 9 == 7 and a % 27 != 25
            got = valuation_with_retry(
                lambda c, a=a: (a - 1) * gamma_mod(a, c) % c.modulus, 3, 4
            )
            assert got == 4, a
        for a in via_mu:
            assert a % 27 == 25
            got = valuation_with_retry(
                lambda c, a=a: (a - 1) * mu_mod(a, c) % c.modulus, 3, 4
            )
            assert got == 4, a
