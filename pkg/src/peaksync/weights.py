"""Weight-vector construction from a symmetric unimodal density.

The lag weights ``a_{-n} .. a_n`` are the masses of adjacent equal-width
strips under a symmetric probability density that is non-decreasing left of
zero and non-increasing right of it.  The central strip's half-width ``x``
is fixed by requiring its mass to equal the configured central coefficient
``a0``; the half-support ``n`` is the smallest strip count whose total mass
reaches ``1 - tau``; each remaining coefficient is a CDF difference
``a_j = F((2j+1)x) - F((2j-1)x)``.

The weights depend only on ``(a0, tau)`` and the density's shape, not its
scale: rescaling the density rescales ``x`` by the same factor and leaves
every coefficient (and ``n``) unchanged.

Numerics: the Gaussian CDF is evaluated through the C library's
complementary error function (:func:`math.erfc`, relative error at most a
few ulp, well under 1e-14); quantile inversion is plain bisection on the
CDF to an absolute probability tolerance of 1e-12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from .validation import ValidationError, check_in_open_unit_interval, check_positive

_PROBABILITY_TOL = 1e-12
_MAX_BISECT_ITERATIONS = 200
# Slack for float round-off when checking analytically exact invariants.
_EPS = 1e-9


class Density:
    """A symmetric unimodal probability density, exposed through its CDF."""

    def cdf(self, t: float) -> float:
        raise NotImplementedError

    def central_mass(self, x: float) -> float:
        """Mass of ``[-x, x]``."""
        return self.cdf(x) - self.cdf(-x)


@dataclass(frozen=True)
class GaussianDensity(Density):
    """Normal density with mean 0 and scale ``sigma``."""

    sigma: float = 1.0

    def __post_init__(self) -> None:
        check_positive(self.sigma, "sigma")

    def cdf(self, t: float) -> float:
        return 0.5 * math.erfc(-t / (self.sigma * math.sqrt(2.0)))

    def central_mass(self, x: float) -> float:
        # 1 - erfc keeps full precision when the mass is close to 1.
        return 1.0 - math.erfc(x / (self.sigma * math.sqrt(2.0)))


@dataclass(frozen=True)
class UniformDensity(Density):
    """Uniform density on ``[-half_width, half_width]``."""

    half_width: float = 1.0

    def __post_init__(self) -> None:
        check_positive(self.half_width, "half_width")

    def cdf(self, t: float) -> float:
        h = self.half_width
        if t <= -h:
            return 0.0
        if t >= h:
            return 1.0
        return (t + h) / (2.0 * h)


@dataclass(frozen=True)
class CustomDensity(Density):
    """Caller-supplied CDF, spot-checked for symmetry and monotonicity.

    The callable must satisfy ``F(-t) = 1 - F(t)`` and be non-decreasing;
    both are probed on construction (symmetry at 10 points, monotonicity at
    100 points) over ``[-probe_scale, probe_scale]`` and trusted beyond.
    """

    cdf_fn: Callable[[float], float]
    probe_scale: float = 10.0

    def __post_init__(self) -> None:
        check_positive(self.probe_scale, "probe_scale")
        for t in np.linspace(0.0, self.probe_scale, 10):
            lhs = self.cdf_fn(float(-t))
            rhs = 1.0 - self.cdf_fn(float(t))
            if abs(lhs - rhs) > 1e-9:
                raise ValidationError(
                    f"custom CDF is not symmetric at t={t}: F(-t)={lhs}, 1-F(t)={rhs}"
                )
        probes = np.linspace(-self.probe_scale, self.probe_scale, 100)
        values = [self.cdf_fn(float(t)) for t in probes]
        if any(b < a - 1e-12 for a, b in zip(values, values[1:])):
            raise ValidationError("custom CDF is not non-decreasing")

    def cdf(self, t: float) -> float:
        return float(self.cdf_fn(float(t)))


@dataclass(frozen=True)
class WeightVector:
    """Symmetric lag weights ``a_{-n} .. a_n`` from the strip construction.

    ``a`` stores the coefficients center-aligned: ``a[n + j]`` is the weight
    for lag ``j``.  The center equals the configured ``a0`` exactly; the
    coefficients are symmetric, non-increasing away from the center, and
    their total mass lies in ``[1 - tau, 1]``.
    """

    a: NDArray[np.float64] = field(repr=False)
    n: int
    a0: float
    tau: float
    strip_half_width_x: float

    def __post_init__(self) -> None:
        a = np.asarray(self.a, dtype=np.float64)
        object.__setattr__(self, "a", a)
        if a.ndim != 1 or a.size != 2 * self.n + 1:
            raise ValidationError("weight array must have length 2n+1")
        if a[self.n] != self.a0:
            raise ValidationError("central coefficient must equal a0 exactly")
        if not np.array_equal(a, a[::-1]):
            raise ValidationError("weights must be symmetric about the center")
        half = a[self.n:]
        if np.any(np.diff(half) > _EPS):
            raise ValidationError("weights must be non-increasing away from the center")
        if half[-1] <= 0.0:
            raise ValidationError("outermost weight must be positive")
        mass = float(np.sum(a))
        if mass > 1.0 + _EPS or mass < 1.0 - self.tau - _EPS:
            raise ValidationError(
                f"total mass {mass} outside [1 - tau, 1] for tau={self.tau}"
            )
        a.setflags(write=False)

    def weight(self, j: int) -> float:
        """Coefficient for lag ``j``, ``-n <= j <= n``."""
        if abs(j) > self.n:
            raise ValidationError(f"lag {j} outside [-{self.n}, {self.n}]")
        return float(self.a[self.n + j])

    @property
    def mass(self) -> float:
        return float(np.sum(self.a))


def strip_half_width(a0: float, density: Density) -> float:
    """Half-width ``x`` of the central strip: solves ``F(x) - F(-x) = a0``.

    Bisection on the CDF, bracket grown geometrically from [0, 1], stopped
    at an absolute probability residual of 1e-12 (at most 200 iterations).
    """
    check_in_open_unit_interval(a0, "a0")
    lo, hi = 0.0, 1.0
    while density.central_mass(hi) < a0:
        hi *= 2.0
        if hi > 1e300:
            raise ValidationError("density too diffuse: bracket for x did not close")
    x = hi
    for _ in range(_MAX_BISECT_ITERATIONS):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            x = hi
            break
        residual = density.central_mass(mid) - a0
        if abs(residual) <= _PROBABILITY_TOL:
            x = mid
            break
        if residual < 0.0:
            lo = mid
        else:
            hi = mid
        x = hi
    if x <= 0.0:
        raise ValidationError("strip half-width did not resolve to a positive value")
    return x


def half_support(x: float, tau: float, density: Density) -> int:
    """Smallest ``n`` such that ``[-(2n+1)x, (2n+1)x]`` holds mass >= 1 - tau."""
    check_positive(x, "x")
    check_in_open_unit_interval(tau, "tau")
    n = 0
    while density.central_mass((2 * n + 1) * x) < 1.0 - tau:
        n += 1
        if n > 100_000:
            raise ValidationError(
                "density mass did not reach 1 - tau; is the CDF proper?"
            )
    return n


def build_weights(a0: float, tau: float, density: Density | None = None) -> WeightVector:
    """Construct the full weight vector for ``(a0, tau)`` and ``density``.

    Defaults to the standard Gaussian density.  Every coefficient except the
    (exact) center is a CDF difference between consecutive strip boundaries;
    no quadrature of the density is performed.
    """
    if density is None:
        density = GaussianDensity()
    check_in_open_unit_interval(a0, "a0")
    check_in_open_unit_interval(tau, "tau")
    x = strip_half_width(a0, density)
    n = half_support(x, tau, density)
    a = np.empty(2 * n + 1, dtype=np.float64)
    a[n] = a0
    for j in range(1, n + 1):
        mass = density.cdf((2 * j + 1) * x) - density.cdf((2 * j - 1) * x)
        a[n + j] = mass
        a[n - j] = mass
    return WeightVector(a=a, n=n, a0=float(a0), tau=float(tau), strip_half_width_x=x)


def density_from_name(name: str, scale: float = 1.0) -> Density:
    """Resolve a density by CLI-facing name: ``gaussian`` or ``uniform``."""
    if name == "gaussian":
        return GaussianDensity(sigma=scale)
    if name == "uniform":
        return UniformDensity(half_width=scale)
    raise ValidationError(f"unknown density {name!r} (expected gaussian or uniform)")
