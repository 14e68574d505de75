"""Closed-form radial minimizers of the combined energy and distortion.

The combined-energy minimizer is

    H(t) = t^{-1/c} (1 - mu + (1 + mu) t^{2/c}) / 2,

with ``mu`` fixed by ``H(r) = R``; it is a diffeomorphism iff ``mu >= 0``,
which is the Nitsche-type condition ``R >= cosh(log(r) / c)``. The
distortion minimizer is the inverse of an energy minimizer of the swapped
problem.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import BelowNitsche, DomainError, InconsistentCertificate, InvalidProfile
from .geometry import AnnulusPair, RadialProfile
from .quadrature import composite_gauss

DEFAULT_NODES = 512
FEASIBILITY_SLACK = 1e-12


class Regime(str, enum.Enum):
    ELASTIC = "Elastic"
    NON_ELASTIC = "NonElastic"
    BOUNDARY = "Boundary"


def _check(r, c, name="r"):
    if not (math.isfinite(r) and r > 1):
        raise DomainError(f"{name} must exceed 1, got {r!r}")
    if not (math.isfinite(c) and c > 0):
        raise DomainError(f"c must be positive, got {c!r}")


def nitsche_threshold_energy(r: float, c: float) -> float:
    """Smallest ``R`` admitting a radial combined-energy minimizer.

    Equals ``(1 + r^{2/c}) / (2 r^{1/c}) = cosh(log(r) / c)``.
    """
    _check(r, c)
    k = r ** (1.0 / c)
    return (1.0 + k * k) / (2.0 * k)


def nitsche_threshold_distortion(R: float, c: float) -> float:
    """Smallest ``r`` admitting a radial combined-distortion minimizer."""
    _check(R, c, "R")
    k = R ** (1.0 / c)
    return (1.0 + k * k) / (2.0 * k)


def mu_parameter(r: float, R: float, c: float) -> float:
    """The constant ``mu`` for which the energy extremal satisfies ``H(r) = R``."""
    k = r ** (1.0 / c)
    return (1.0 + k * k - 2.0 * k * R) / (1.0 - k * k)


def energy_profile_values(t, mu: float, c: float):
    """``H`` and ``Hdot`` of the combined-energy extremal with parameter ``mu``."""
    t = np.asarray(t, dtype=float)
    p = t ** (2.0 / c)
    h = 0.5 * t ** (-1.0 / c) * (1.0 - mu + (1.0 + mu) * p)
    hd = 0.5 / c * t ** (-1.0 - 1.0 / c) * (-1.0 + mu + (1.0 + mu) * p)
    return h, hd


def inverse_energy_values(s, mu: float, c: float):
    """``F = H^{-1}`` and ``F'`` for the energy extremal; see ``inverse_profile``."""
    s = np.asarray(s, dtype=float)
    root = np.sqrt(np.maximum(mu * mu - 1.0 + s * s, 0.0))
    f = ((s + root) / (1.0 + mu)) ** c
    with np.errstate(divide="ignore"):
        fd = c * f / root
    return f, fd


def energy_closed_form_value(r: float, R: float, c: float) -> float:
    """Minimal combined energy divided by ``w_a * w_b``."""
    k = r ** (1.0 / c)
    return 2.0 * math.pi * (1.0 - 4.0 * k * R + R * R + k * k * (1.0 + R * R)) / (k * k - 1.0)


@dataclass(frozen=True, eq=False)
class EnergySolution:
    """Radial minimizer of the combined energy.

    ``closed_form_energy`` is per unit ``w_a * w_b``; multiply by the product
    of the actual weights.
    """

    pair: AnnulusPair
    c: float
    mu: float
    profile: RadialProfile
    regime: Regime
    closed_form_energy: float

    def energy(self, w_a: float, w_b: float) -> float:
        return w_a * w_b * self.closed_form_energy

    def values(self, t):
        return energy_profile_values(t, self.mu, self.c)


def _classify(mu: float) -> Regime:
    if mu == 0.0:
        return Regime.BOUNDARY
    return Regime.ELASTIC if mu >= 1.0 else Regime.NON_ELASTIC


def solve_combined_energy(pair: AnnulusPair, c: float, n_nodes: int = DEFAULT_NODES) -> EnergySolution:
    """Radial minimizer of the combined energy for ``A(1, r) -> B(1, R)``.

    Raises
    ------
    BelowNitsche
        If ``R`` is below :func:`nitsche_threshold_energy`.
    """
    r, R = pair.r, pair.R
    _check(r, c)
    mu = mu_parameter(r, R, c)
    if mu < 0:
        threshold = nitsche_threshold_energy(r, c)
        if R < threshold - FEASIBILITY_SLACK:
            raise BelowNitsche(R, threshold, "R")
        mu = 0.0
    t = np.linspace(1.0, r, n_nodes)
    h, hd = energy_profile_values(t, mu, c)
    h[0], h[-1] = 1.0, R
    hd[0] = mu / c
    profile = RadialProfile(t, h, hd, degenerate_start=(mu == 0.0))
    return EnergySolution(pair, c, mu, profile, _classify(mu), energy_closed_form_value(r, R, c))


def inverse_profile(sol: EnergySolution, c: float | None = None, n_nodes: int | None = None) -> RadialProfile:
    """Profile of ``F = H^{-1} : [1, R] -> [1, r]``.

    ``F(s) = ((s + sqrt(mu^2 - 1 + s^2)) / (1 + mu))^c``. The boundary regime
    ``mu = 0`` has an infinite slope at ``s = 1`` and is rejected.
    """
    c = sol.c if c is None else c
    n = n_nodes or sol.profile.n_nodes
    if sol.mu == 0.0:
        raise InvalidProfile("the inverse of the Nitsche-boundary minimizer has infinite slope at s=1")
    s = np.linspace(1.0, sol.pair.R, n)
    f, fd = inverse_energy_values(s, sol.mu, c)
    f[0], f[-1] = 1.0, sol.pair.r
    return RadialProfile(s, f, fd)


@dataclass(frozen=True)
class RegimeVerdict:
    regime: Regime
    margin_min: float
    margin_max: float
    consistent: bool


def elasticity_regime(sol: EnergySolution, c: float | None = None, tol: float = 1e-9) -> RegimeVerdict:
    """Classify via ``mu`` and certify pointwise with ``c t Hdot - H``.

    On the exact extremal ``c t Hdot - H = (mu - 1) t^{-1/c}``, so the sign of
    the margin at every node must agree with the sign of ``mu - 1``.
    """
    c = sol.c if c is None else c
    p = sol.profile
    margin = c * p.t_nodes * p.hdot_values - p.h_values
    lo, hi = float(margin.min()), float(margin.max())
    scale = tol * max(1.0, float(np.max(np.abs(p.h_values))))
    if sol.mu >= 1.0:
        ok = lo >= -scale
    else:
        ok = hi < scale
    if not ok:
        raise InconsistentCertificate(
            f"pointwise margin [{lo:.3e}, {hi:.3e}] contradicts mu={sol.mu:.12g}"
        )
    return RegimeVerdict(sol.regime, lo, hi, True)


def _second_difference(func, t, step):
    # fourth-order five-point stencil evaluated in extended precision; a plain
    # three-point stencil at step 1e-4 has a roundoff floor near 1e-7
    t = np.asarray(t, dtype=np.longdouble)
    h = np.longdouble(step)
    f = [func(t + k * h) for k in (-2, -1, 0, 1, 2)]
    d2 = (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h)
    return np.asarray(d2, dtype=float)


def energy_ode_residual(sol: EnergySolution, w_a: float = None, w_b: float = 1.0, step: float = 1e-4):
    """Residual of ``H'' - (w_b^2 H - w_a^2 t H') / (w_a^2 t^2)`` at interior nodes.

    ``H''`` is a finite-difference second derivative of the closed form at
    ``step``; only nodes at least two steps inside ``[1, r]`` are used.
    """
    w_a = sol.c * w_b if w_a is None else w_a
    t = sol.profile.t_nodes[1:-1]
    t = t[(t - 2 * step > 1.0) & (t + 2 * step < sol.pair.r)]
    mu, c = np.longdouble(sol.mu), np.longdouble(sol.c)

    def h(x):
        return 0.5 * x ** (-1 / c) * (1 - mu + (1 + mu) * x ** (2 / c))

    h2 = _second_difference(h, t, step)
    h0, hd0 = sol.values(t)
    return h2 - (w_b**2 * h0 - w_a**2 * t * hd0) / (w_a**2 * t**2)


@dataclass(frozen=True, eq=False)
class DistortionSolution:
    """Radial minimizer of the combined distortion ``K[w_b, w_a]``.

    ``closed_form_distortion`` is per unit ``w_a * w_b``, like the energy.
    """

    pair: AnnulusPair
    c: float
    nu: float
    profile: RadialProfile
    closed_form_distortion: float
    nu_printed_variants: dict = field(default_factory=dict)

    def values(self, t):
        return inverse_energy_values(t, self.nu, self.c)

    def distortion(self, w_a: float, w_b: float) -> float:
        return w_a * w_b * self.closed_form_distortion


def _distortion_end(nu, r, c):
    return ((r + math.sqrt(nu * nu - 1.0 + r * r)) / (1.0 + nu)) ** c


def solve_combined_distortion(pair: AnnulusPair, c: float, n_nodes: int = DEFAULT_NODES) -> DistortionSolution:
    """Radial minimizer of the combined distortion.

    ``nu`` is found by root finding on ``H(r) = R``; the two printed closed
    forms are evaluated for comparison only. The equality case of the
    threshold has an infinite slope on the inner circle and is rejected.
    """
    r, R = pair.r, pair.R
    _check(R, c, "R")
    _check(r, c)
    threshold = nitsche_threshold_distortion(R, c)
    if r <= threshold:
        raise BelowNitsche(r, threshold, "r")
    target = R

    def g(nu):
        return _distortion_end(nu, r, c) - target

    lo = 0.0
    if g(lo) <= 0:
        raise BelowNitsche(r, threshold, "r")
    hi = 1.0
    while g(hi) > 0:
        hi *= 2.0
        if hi > 1e300:
            raise DomainError("could not bracket nu")
    nu = brentq(g, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=500)
    t = np.linspace(1.0, r, n_nodes)
    h, hd = inverse_energy_values(t, nu, c)
    h[0] = 1.0
    profile = RadialProfile(t, h, hd)
    kR, kr = R ** (1.0 / c), r ** (1.0 / c)
    variants = {
        "printed": (1.0 + kr * kr - 2.0 * kR * r) / (1.0 - kR * kR),
        "swapped_radii": (1.0 + kR * kR - 2.0 * kR * r) / (1.0 - kR * kR),
    }

    def integrand(x):
        hh, dd = inverse_energy_values(x, nu, c)
        # (w_b^2 Hdot^2 + w_a^2 H^2/t^2) t^2 / (Hdot H), per unit w_a w_b
        return 2.0 * math.pi * (x * x * dd / (c * hh) + c * hh / dd)

    value = composite_gauss(integrand, 1.0, r, panels=64, order=16)
    return DistortionSolution(pair, c, nu, profile, value, variants)


def distortion_ode_residual(sol: DistortionSolution, step: float = 1e-4):
    """Residual of the distortion Euler-Lagrange equation at interior nodes."""
    c = sol.c
    t = sol.profile.t_nodes[1:-1]
    t = t[(t - 2 * step > 1.0) & (t + 2 * step < sol.pair.r)]
    nu, cl = np.longdouble(sol.nu), np.longdouble(c)

    def h(x):
        return ((x + np.sqrt(nu * nu - 1 + x * x)) / (1 + nu)) ** cl

    h2 = _second_difference(h, t, step)
    h0, hd0 = sol.values(t)
    return h2 - hd0**2 * (h0 - t * hd0 / c**2) / h0**2
