"""Weight-vector construction against a high-precision CDF oracle.

The oracle is mpmath's arbitrary-precision error function (50 digits),
fully independent of the library's math.erfc path.
"""

import math

import mpmath as mp
import numpy as np
import pytest

from peaksync import (
    CustomDensity,
    GaussianDensity,
    UniformDensity,
    ValidationError,
    build_weights,
    half_support,
    strip_half_width,
)

mp.mp.dps = 50


def oracle_phi(x: float) -> mp.mpf:
    return 0.5 * mp.erfc(-mp.mpf(x) / mp.sqrt(2))


def oracle_quantile(p: float) -> float:
    """Bisection on the 50-digit standard normal CDF."""
    target = mp.mpf(p)
    lo, hi = mp.mpf(-40), mp.mpf(40)
    for _ in range(200):
        mid = (lo + hi) / 2
        if oracle_phi(mid) < target:
            lo = mid
        else:
            hi = mid
    return float((lo + hi) / 2)


# Frozen from mpmath (50 digits) as documentation of the erfc accuracy
# contract; math.erfc must reproduce them to 1e-14 relative.
PHI_TABLE = {
    -3.5: 0.0002326290790355250363499,
    -2.0: 0.02275013194817920720028,
    -1.0: 0.1586552539314570514148,
    -0.5: 0.3085375387259868963623,
    0.0: 0.5,
    0.3: 0.6179114221889526373065,
    1.0: 0.8413447460685429485852,
    1.5: 0.9331927987311419339955,
    2.5: 0.993790334674223864833,
    4.0: 0.9999683287581668800787,
}


def test_normal_cdf_against_tabulated_values():
    density = GaussianDensity()
    for x, expected in PHI_TABLE.items():
        got = density.cdf(x)
        assert got == pytest.approx(expected, rel=1e-14)


def test_strip_half_width_gaussian():
    # x = Phi^{-1}(0.75), checked against the independent oracle to 1e-10
    x = strip_half_width(0.5, GaussianDensity())
    assert x == pytest.approx(oracle_quantile(0.75), abs=1e-10)
    assert x == pytest.approx(0.674489750196, abs=1e-9)


def test_strip_half_width_uniform_analytic():
    # integral over [-x, x] of 1/2 is x, so a0 = 0.5 gives x = 0.5
    x = strip_half_width(0.5, UniformDensity(half_width=1.0))
    assert x == pytest.approx(0.5, abs=1e-11)


def test_strip_half_width_rejects_bad_a0():
    with pytest.raises(ValidationError):
        strip_half_width(1.0, GaussianDensity())
    with pytest.raises(ValidationError):
        strip_half_width(0.0, GaussianDensity())
    with pytest.raises(ValidationError):
        strip_half_width(-0.2, GaussianDensity())


def test_half_support_gaussian():
    density = GaussianDensity()
    x = strip_half_width(0.5, density)
    # 2*Phi(3x)-1 = 0.95698 < 0.999 while 2*Phi(5x)-1 = 0.99925 >= 0.999
    assert float(2 * oracle_phi(3 * x) - 1) < 0.999
    assert float(2 * oracle_phi(5 * x) - 1) >= 0.999
    assert half_support(x, 1e-3, density) == 2
    # tail mass beyond +-(2n+1)x only drops below 1e-4 at n = 3 (~ +-4.72)
    assert half_support(x, 1e-4, density) == 3


def test_half_support_uniform():
    density = UniformDensity(half_width=1.0)
    x = strip_half_width(0.5, density)
    # +-3x = +-1.5 already covers all mass; +-x covers only half of it
    for tau in (0.4, 0.1, 1e-3, 1e-9):
        assert half_support(x, tau, density) == 1


def test_build_weights_gaussian_tau_1e3():
    w = build_weights(0.5, 1e-3, GaussianDensity())
    assert w.n == 2
    x = mp.mpf(w.strip_half_width_x)
    expected_a1 = float(oracle_phi(3 * x) - oracle_phi(x))
    expected_a2 = float(oracle_phi(5 * x) - oracle_phi(3 * x))
    assert w.weight(0) == 0.5
    assert w.weight(1) == pytest.approx(expected_a1, abs=1e-6)
    assert w.weight(2) == pytest.approx(expected_a2, abs=1e-6)
    # frozen oracle values
    assert w.weight(1) == pytest.approx(0.22848760463080523, abs=1e-6)
    assert w.weight(2) == pytest.approx(0.02113988061759919, abs=1e-6)
    assert w.weight(-1) == w.weight(1)
    assert w.weight(-2) == w.weight(2)


def test_build_weights_gaussian_tau_1e4_structure():
    w = build_weights(0.5, 1e-4, GaussianDensity())
    assert w.n == 3
    boundary = (2 * w.n + 1) * w.strip_half_width_x
    # outermost kept strip ends right where the tail drops below 1e-4
    assert 4.70 <= boundary <= 4.75
    x = mp.mpf(w.strip_half_width_x)
    assert w.weight(3) == pytest.approx(float(oracle_phi(7 * x) - oracle_phi(5 * x)), abs=1e-8)


def test_build_weights_uniform_analytic():
    w = build_weights(0.5, 0.01, UniformDensity(half_width=1.0))
    assert w.n == 1
    np.testing.assert_allclose(w.a, [0.25, 0.5, 0.25], atol=1e-11)


def test_scale_invariance_gaussian():
    """Same (a0, tau) with rescaled densities: identical n and weights."""
    for a0 in (0.3, 0.5, 0.7):
        reference = build_weights(a0, 1e-3, GaussianDensity(sigma=1.0))
        for sigma in (0.5, 2.0, 5.0):
            other = build_weights(a0, 1e-3, GaussianDensity(sigma=sigma))
            assert other.n == reference.n
            np.testing.assert_allclose(other.a, reference.a, atol=1e-9, rtol=0.0)
            assert other.strip_half_width_x == pytest.approx(
                sigma * reference.strip_half_width_x, rel=1e-9
            )


def test_invariants_fuzzed():
    """Symmetry, unimodal decay, mass window over fuzzed (a0, tau)."""
    rng = np.random.default_rng(1234)
    for _ in range(200):
        a0 = float(rng.uniform(0.05, 0.95))
        tau = float(10 ** rng.uniform(-6, -1))
        w = build_weights(a0, tau, GaussianDensity())
        assert np.array_equal(w.a, w.a[::-1])
        half = w.a[w.n:]
        assert np.all(np.diff(half) <= 1e-12)
        assert half[-1] > 0.0
        mass = float(np.sum(w.a))
        assert 1.0 - tau - 1e-9 <= mass <= 1.0 + 1e-12
        assert w.a[w.n] == a0


def test_half_support_is_minimal():
    """(n-1) strips hold strictly less than 1 - tau whenever n >= 1."""
    rng = np.random.default_rng(99)
    density = GaussianDensity()
    for _ in range(100):
        a0 = float(rng.uniform(0.05, 0.95))
        tau = float(10 ** rng.uniform(-6, -1))
        x = strip_half_width(a0, density)
        n = half_support(x, tau, density)
        if n >= 1:
            below = density.central_mass((2 * (n - 1) + 1) * x)
            assert below < 1.0 - tau


def test_custom_density_accepts_valid_cdf():
    # triangular density on [-1, 1]: F(t) piecewise quadratic, symmetric
    def tri_cdf(t: float) -> float:
        if t <= -1.0:
            return 0.0
        if t >= 1.0:
            return 1.0
        if t < 0.0:
            return 0.5 * (1.0 + t) ** 2
        return 1.0 - 0.5 * (1.0 - t) ** 2

    density = CustomDensity(tri_cdf, probe_scale=1.5)
    w = build_weights(0.5, 0.01, density)
    assert w.n >= 1
    assert w.weight(0) == 0.5
    # analytic: central mass 0.5 at x = 1 - 1/sqrt(2)
    assert w.strip_half_width_x == pytest.approx(1.0 - 1.0 / math.sqrt(2.0), abs=1e-9)


def test_custom_density_rejects_asymmetric_cdf():
    with pytest.raises(ValidationError, match="symmetric"):
        CustomDensity(lambda t: min(1.0, max(0.0, 0.3 + t / 4.0)))


def test_custom_density_rejects_decreasing_cdf():
    def bad(t: float) -> float:
        base = 0.5 * (1.0 + math.erf(t / math.sqrt(2.0)))
        return base - 0.05 * math.sin(4.0 * t)

    with pytest.raises(ValidationError, match="non-decreasing"):
        CustomDensity(bad)
