import math
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from regretbounds.analytic import psi, std_normal_survival
from regretbounds.errors import DomainError
from regretbounds.tails import (
    DOMINANCE_SLACK,
    BinomialTailQuery,
    GaussianTailQuery,
    binomial_tail_corollary,
    binomial_tail_exact,
    binomial_tail_lower,
    corollary_exact,
    evaluate_binomial,
    evaluate_gaussian,
    gaussian_tail_lower,
)


def exact_tail_fraction(n, k):
    return Fraction(sum(math.comb(n, j) for j in range(max(k, 0), n + 1)), 2**n)


def enumerate_tail(n, k):
    return Fraction(sum(1 for bits in product((0, 1), repeat=n) if sum(bits) >= k), 2**n)


def test_gaussian_tail_examples():
    assert gaussian_tail_lower(GaussianTailQuery(0, 1)) == 0.5
    assert gaussian_tail_lower(GaussianTailQuery(0, 1)) == std_normal_survival(0)
    v = gaussian_tail_lower(GaussianTailQuery(1, 1))
    assert v == pytest.approx(math.exp(-0.5) / (math.sqrt(2 * math.pi) + 2), rel=1e-15)
    assert v == pytest.approx(0.13458635209097554, rel=1e-13)
    assert v < std_normal_survival(1)
    assert gaussian_tail_lower(GaussianTailQuery(2, 2)) == gaussian_tail_lower(GaussianTailQuery(1, 1))


@pytest.mark.parametrize("x,sigma", [(-0.1, 1.0), (1.0, 0.0), (1.0, -2.0), (math.inf, 1.0)])
def test_gaussian_tail_domain(x, sigma):
    with pytest.raises(DomainError):
        gaussian_tail_lower(GaussianTailQuery(x, sigma))


def test_gaussian_tail_dominance_grid():
    for sigma in (0.5, 1.0, 3.0):
        for z in np.linspace(0, 8, 801):
            res = evaluate_gaussian(GaussianTailQuery(z * sigma, sigma))
            assert not res.violations()


@given(st.floats(0, 50), st.floats(0.01, 100))
def test_gaussian_tail_scale_invariance(z, scale):
    a = gaussian_tail_lower(GaussianTailQuery(z, 1.0))
    b = gaussian_tail_lower(GaussianTailQuery(z * scale, scale))
    assert b == pytest.approx(a, rel=1e-12, abs=1e-300)


def test_binomial_exact_examples():
    assert binomial_tail_exact(1, 1) == 0.5
    assert binomial_tail_exact(4, 3) == pytest.approx(5 / 16, rel=1e-15)
    assert enumerate_tail(4, 3) == Fraction(5, 16)
    assert binomial_tail_exact(2, 1) == pytest.approx(0.75, rel=1e-15)
    assert binomial_tail_exact(5, 0) == 1.0
    assert binomial_tail_exact(5, -2) == 1.0
    assert binomial_tail_exact(5, 6) == 0.0


def test_binomial_exact_against_rationals():
    for n in range(1, 31):
        for k in range(0, n + 1):
            ref = float(exact_tail_fraction(n, k))
            assert binomial_tail_exact(n, k) == pytest.approx(ref, rel=1e-13), (n, k)


def test_binomial_exact_large_n_stays_normalized():
    n = 100_000
    # Symmetry: P[B >= n/2 + 1] + P[B >= n/2] = 1 for even n.
    assert binomial_tail_exact(n, n // 2 + 1) + binomial_tail_exact(n, n // 2) == pytest.approx(1.0, rel=1e-12)


def test_binomial_lower_examples():
    mills1 = 0.6556795424187985
    mck = binomial_tail_lower(4, 3, "mckay")
    assert mck == pytest.approx(2 * 3 / 16 * mills1, rel=1e-13)
    assert mck == pytest.approx(0.24587982840704943, rel=1e-13)
    stir = binomial_tail_lower(4, 3, "stirling")
    assert stir == pytest.approx(0.13121258885447711, rel=1e-13)
    assert stir <= 0.3125 and mck <= 0.3125
    st33 = binomial_tail_lower(3, 3, "stirling")
    assert st33 == pytest.approx(0.019742370227051476, rel=1e-13)
    assert st33 <= 2**-3


@pytest.mark.parametrize("n,k", [(4, 1), (5, 2), (4, 5), (4, 2.5)])
def test_binomial_lower_domain(n, k):
    with pytest.raises(DomainError):
        binomial_tail_lower(n, k, "mckay")


def test_binomial_lower_unknown_mode():
    with pytest.raises(DomainError):
        binomial_tail_lower(4, 3, "chernoff")


def test_binomial_domain_uses_real_half():
    # n = 5: k = 3 >= 2.5 is allowed, k = 2 is not.
    binomial_tail_lower(5, 3)
    with pytest.raises(DomainError):
        binomial_tail_lower(5, 2)


def test_binomial_dominance_sweep():
    for n in range(1, 61):
        for k in range(math.ceil(n / 2), n + 1):
            res = evaluate_binomial(BinomialTailQuery(n, k=k))
            assert not res.violations(DOMINANCE_SLACK), (n, k, res)


def test_corollary_examples():
    v = binomial_tail_corollary(4, 1)
    ref = math.exp(-1 / 6) * math.exp(-2 * psi(0.25) / 4) / (math.sqrt(2 * math.pi) + 2)
    assert v == pytest.approx(ref, rel=1e-14)
    assert v == pytest.approx(0.11130689494825284, rel=1e-13)
    assert v <= binomial_tail_exact(4, 2) == pytest.approx(0.6875)
    for n in (7, 8):
        assert binomial_tail_corollary(n, 1) <= corollary_exact(n, 1)
    top = binomial_tail_corollary(4, 3)
    assert top <= binomial_tail_exact(4, 4) == 1 / 16


def test_corollary_ceiling_semantics():
    assert BinomialTailQuery(7, t=1).threshold == 4  # ceil(3.5)
    assert BinomialTailQuery(8, t=1.5).threshold == 5  # ceil(4.5)
    assert BinomialTailQuery(8, t=5).threshold == 8
    assert corollary_exact(7, 1) == binomial_tail_exact(7, 4)


@pytest.mark.parametrize("n,t", [(4, 0.5), (4, 3.01), (10, math.nan)])
def test_corollary_domain(n, t):
    with pytest.raises(DomainError):
        binomial_tail_corollary(n, t)


def test_corollary_dominance_sweep():
    for n in range(7, 61):
        t = 1.0
        while t <= n / 2 + 1:
            res = evaluate_binomial(BinomialTailQuery(n, t=t))
            assert not res.violations(), (n, t, res)
            t += 0.5


@given(st.integers(1, 200), st.floats(0, 1))
def test_corollary_dominance_random(n, frac):
    t = 1 + frac * n / 2
    assert binomial_tail_corollary(n, t) <= corollary_exact(n, t) + DOMINANCE_SLACK


def test_query_validation():
    with pytest.raises(DomainError):
        BinomialTailQuery(4)
    with pytest.raises(DomainError):
        BinomialTailQuery(4, k=3, t=1.0)
    with pytest.raises(DomainError):
        BinomialTailQuery(0, k=0)
