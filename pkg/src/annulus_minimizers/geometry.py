"""Domain types for maps between annuli and their discrete derivatives.

A radial map is stored as a sampled profile ``H`` on ``[1, r]``; a general
map is stored on a polar grid as modulus ``rho`` and unwrapped argument
``theta_map``. All containers are frozen after construction.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .errors import (
    ClassViolation,
    DomainError,
    InvalidMap,
    InvalidProfile,
    NonPositiveJacobian,
    OutOfDomain,
)

PROFILE_TOL = 1e-10
DEFAULT_GRID = 256
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Weights:
    """Positive weights of the anisotropic energies.

    ``w_a`` multiplies the normal derivative, ``w_b`` the tangential one;
    ``alpha`` and ``beta`` mix energy and distortion in the total energy.
    """

    w_a: float = 1.0
    w_b: float = 1.0
    alpha: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        for name in ("w_a", "w_b", "alpha", "beta"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be a positive finite number, got {v!r}")

    @property
    def c(self) -> float:
        return self.w_a / self.w_b

    @property
    def gamma(self) -> float:
        return self.alpha / self.beta

    def swapped(self) -> "Weights":
        """Weights with the normal/tangential roles exchanged."""
        return Weights(self.w_b, self.w_a, self.alpha, self.beta)

    @classmethod
    def from_ratios(cls, c: float, gamma: float = 1.0) -> "Weights":
        """Normalized weights ``w_a = c, w_b = 1, alpha = gamma, beta = 1``."""
        return cls(w_a=c, w_b=1.0, alpha=gamma, beta=1.0)


@dataclass(frozen=True)
class AnnulusPair:
    """Domain annulus ``A(1, r)`` and target annulus ``B(1, R)``."""

    r: float
    R: float

    def __post_init__(self):
        if not (math.isfinite(self.r) and self.r > 1):
            raise DomainError(f"r must exceed 1, got {self.r!r}")
        if not (math.isfinite(self.R) and self.R > 1):
            raise DomainError(f"R must exceed 1, got {self.R!r}")

    def swapped(self) -> "AnnulusPair":
        return AnnulusPair(self.R, self.r)


def _monotone_slopes(t, h, d):
    # Fritsch-Carlson limiter; leaves slopes untouched on well-resolved data
    d = d.copy()
    delta = np.diff(h) / np.diff(t)
    for i, dk in enumerate(delta):
        a = d[i] / dk
        b = d[i + 1] / dk
        s = a * a + b * b
        if s > 9.0:
            tau = 3.0 / math.sqrt(s)
            d[i] = tau * a * dk
            d[i + 1] = tau * b * dk
    return d


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """Strictly increasing samples of ``H : [1, r] -> [1, R]``.

    Parameters
    ----------
    t_nodes, h_values, hdot_values : array_like
        Nodes, values and derivatives. Nodes start at 1; values start at 1.
    degenerate_start : bool
        Permit ``hdot_values[0] == 0``. Needed for the Nitsche-boundary
        minimizer, whose slope vanishes on the inner circle.
    """

    t_nodes: np.ndarray
    h_values: np.ndarray
    hdot_values: np.ndarray
    degenerate_start: bool = False

    def __post_init__(self):
        t = np.array(self.t_nodes, dtype=float)
        h = np.array(self.h_values, dtype=float)
        d = np.array(self.hdot_values, dtype=float)
        if t.ndim != 1 or t.shape != h.shape or t.shape != d.shape or t.size < 2:
            raise InvalidProfile("t, H and Hdot must be 1-D arrays of equal length >= 2")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(h)) and np.all(np.isfinite(d))):
            raise InvalidProfile("profile samples must be finite")
        if abs(t[0] - 1.0) > PROFILE_TOL:
            raise InvalidProfile(f"first node must be 1, got {t[0]!r}")
        if np.any(np.diff(t) <= 0):
            raise InvalidProfile("t nodes must be strictly increasing")
        if abs(h[0] - 1.0) > PROFILE_TOL:
            raise InvalidProfile(f"H(1) must be 1, got {h[0]!r}")
        if np.any(np.diff(h) <= 0):
            raise InvalidProfile("H must be strictly increasing")
        if self.degenerate_start:
            if d[0] < 0 or np.any(d[1:] <= 0):
                raise InvalidProfile("Hdot must be positive away from t=1")
        elif np.any(d <= 0):
            i = int(np.argmin(d))
            raise InvalidProfile(f"Hdot must be positive; Hdot({t[i]:.6g}) = {d[i]:.3e}")
        t[0] = 1.0
        h[0] = 1.0
        for arr in (t, h, d):
            arr.setflags(write=False)
        object.__setattr__(self, "t_nodes", t)
        object.__setattr__(self, "h_values", h)
        object.__setattr__(self, "hdot_values", d)

    @property
    def r(self) -> float:
        return float(self.t_nodes[-1])

    @property
    def R(self) -> float:
        return float(self.h_values[-1])

    @property
    def n_nodes(self) -> int:
        return int(self.t_nodes.size)

    @cached_property
    def _spline(self) -> CubicHermiteSpline:
        slopes = _monotone_slopes(self.t_nodes, self.h_values, self.hdot_values)
        return CubicHermiteSpline(self.t_nodes, self.h_values, slopes, extrapolate=False)

    def __call__(self, t):
        """Vectorized ``(H, Hdot)`` of the interpolant; no range checks."""
        sp = self._spline
        t = np.clip(t, self.t_nodes[0], self.t_nodes[-1])
        return sp(t), sp(t, 1)

    def inverse_samples(self, n_nodes: int | None = None, tol: float = 1e-12):
        """Samples ``(s, F(s), F'(s))`` of the inverse on ``[1, R]``."""
        from scipy.optimize import brentq

        n = n_nodes or self.n_nodes
        s = np.linspace(1.0, self.R, n)
        f = np.empty(n)
        f[0], f[-1] = 1.0, self.r
        nodes = self.t_nodes
        idx = np.searchsorted(self.h_values, s[1:-1])
        for k, (sv, j) in enumerate(zip(s[1:-1], idx), start=1):
            lo, hi = nodes[j - 1], nodes[j]
            f[k] = brentq(lambda x: float(self._spline(x)) - sv, lo, hi, xtol=tol * hi, rtol=1e-15)
        _, hd = self(f)
        return s, f, 1.0 / hd

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "H", "Hdot"])
        for row in zip(self.t_nodes, self.h_values, self.hdot_values):
            writer.writerow([repr(float(v)) for v in row])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_csv(cls, path_or_text) -> "RadialProfile":
        text = _read_text(path_or_text)
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or [c.strip() for c in rows[0]] != ["t", "H", "Hdot"]:
            raise InvalidProfile("profile CSV must start with header t,H,Hdot")
        data = np.array([[float(v) for v in row] for row in rows[1:] if row], dtype=float)
        if data.ndim != 2 or data.shape[1] != 3:
            raise InvalidProfile("profile CSV rows must have three columns")
        return cls(data[:, 0], data[:, 1], data[:, 2], degenerate_start=bool(data[0, 2] == 0.0))

    @classmethod
    def from_function(cls, func: Callable, dfunc: Callable, r: float, n_nodes: int = 512, **kw) -> "RadialProfile":
        """Sample an analytic profile and its derivative on a uniform grid."""
        t = np.linspace(1.0, r, n_nodes)
        return cls(t, func(t), dfunc(t), **kw)


def _read_text(path_or_text) -> str:
    if isinstance(path_or_text, Path):
        return path_or_text.read_text()
    s = str(path_or_text)
    if "\n" in s or s.lstrip().startswith(("{", "[")):
        return s
    try:
        return Path(s).read_text()
    except OSError:
        return s


def eval_profile(profile: RadialProfile, t: float):
    """Evaluate ``(H(t), Hdot(t))`` of the shape-preserving interpolant.

    Raises
    ------
    OutOfDomain
        If ``t`` lies outside ``[1, r]``.
    """
    t = float(t)
    if not (1.0 - 1e-14 <= t <= profile.r * (1 + 1e-14)):
        raise OutOfDomain(f"t={t!r} outside [1, {profile.r!r}]")
    j = np.searchsorted(profile.t_nodes, t)
    if j < profile.n_nodes and profile.t_nodes[j] == t:
        return float(profile.h_values[j]), float(profile.hdot_values[j])
    h, hd = profile(t)
    return float(h), float(hd)


@dataclass(frozen=True, eq=False)
class DerivativeField:
    """Pointwise first-order quantities of a grid map.

    Besides the five squared norms and the Jacobian, the raw partials are
    kept because the free-Lagrangian densities need them.
    """

    h_n_sq: np.ndarray
    h_t_sq: np.ndarray
    grad_rho_sq: np.ndarray
    rho_sq_grad_theta_sq: np.ndarray
    jac: np.ndarray
    rho_t: np.ndarray
    rho_theta: np.ndarray
    theta_t: np.ndarray
    theta_theta: np.ndarray


@dataclass(frozen=True, eq=False)
class PolarGridMap:
    """A degree-one map of ``A(1, r)`` onto ``B(1, R)`` sampled on a polar grid.

    ``rho`` and ``theta_map`` have shape ``(n_t, n_theta)``; row ``i`` is the
    circle ``t = t_i`` and column ``j`` the ray ``theta = 2 pi j / n_theta``.
    ``theta_map`` is unwrapped: the column after the last is understood as the
    first one shifted by ``2 pi``. ``rotation`` is a constant added to every
    argument; it is kept apart from ``theta_map`` so that rotating a map
    leaves all discrete derivatives bit-for-bit unchanged.
    """

    r: float
    R: float
    rho: np.ndarray
    theta_map: np.ndarray
    check_jacobian: bool = field(default=True, repr=False)
    rotation: float = 0.0

    def __post_init__(self):
        rho = np.array(self.rho, dtype=float)
        th = np.array(self.theta_map, dtype=float)
        if rho.ndim != 2 or rho.shape != th.shape:
            raise InvalidMap("rho and theta must be 2-D arrays of equal shape")
        n_t, n_theta = rho.shape
        if n_t < 3 or n_theta < 3:
            raise InvalidMap("grid needs at least 3 nodes in each direction")
        if not (np.all(np.isfinite(rho)) and np.all(np.isfinite(th))):
            raise InvalidMap("grid values must be finite")
        AnnulusPair(self.r, self.R)
        if np.max(np.abs(rho[0] - 1.0)) > 1e-12:
            raise ClassViolation("inner circle must map onto |w| = 1")
        if np.max(np.abs(rho[-1] - self.R)) > 1e-12 * self.R:
            raise ClassViolation("outer circle must map onto |w| = R")
        steps = np.diff(np.concatenate([th, th[:, :1] + TWO_PI], axis=1), axis=1)
        if np.any(np.abs(steps) >= math.pi):
            i, j = np.unravel_index(np.argmax(np.abs(steps)), steps.shape)
            raise ClassViolation(f"argument is not a continuous degree-one unwrap at row {i}, column {j}")
        for arr in (rho, th):
            arr.setflags(write=False)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "theta_map", th)
        if self.check_jacobian:
            differentiate_grid(self)

    @property
    def n_t(self) -> int:
        return self.rho.shape[0]

    @property
    def n_theta(self) -> int:
        return self.rho.shape[1]

    @property
    def t(self) -> np.ndarray:
        return np.linspace(1.0, self.r, self.n_t)

    @property
    def theta(self) -> np.ndarray:
        return TWO_PI * np.arange(self.n_theta) / self.n_theta

    @property
    def dt(self) -> float:
        return (self.r - 1.0) / (self.n_t - 1)

    @property
    def dtheta(self) -> float:
        return TWO_PI / self.n_theta

    @property
    def theta_values(self) -> np.ndarray:
        """Arguments including the rotation offset."""
        return self.theta_map + self.rotation

    @cached_property
    def derivatives(self) -> DerivativeField:
        return differentiate_grid(self)

    def to_json(self, path=None) -> str:
        payload = {
            "n_t": self.n_t,
            "n_theta": self.n_theta,
            "r": self.r,
            "R": self.R,
            "rho": self.rho.ravel().tolist(),
            "theta": self.theta_values.ravel().tolist(),
        }
        text = json.dumps(payload)
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_json(cls, path_or_text) -> "PolarGridMap":
        try:
            d = json.loads(_read_text(path_or_text))
            n_t, n_theta = int(d["n_t"]), int(d["n_theta"])
            rho = np.asarray(d["rho"], dtype=float).reshape(n_t, n_theta)
            th = np.asarray(d["theta"], dtype=float).reshape(n_t, n_theta)
            r, R = float(d["r"]), float(d["R"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidMap(f"malformed map file: {exc}") from exc
        return cls(r, R, rho, th)


def differentiate_grid(gmap: PolarGridMap) -> DerivativeField:
    """Second-order finite differences of a grid map.

    Central differences in ``theta`` (periodic, with the ``2 pi`` shift of the
    unwrapped argument) and in ``t``; one-sided second-order stencils on the
    boundary circles.

    Raises
    ------
    NonPositiveJacobian
        At the first node where ``J <= 0``.
    """
    rho, th = gmap.rho, gmap.theta_map
    t = gmap.t
    dth = gmap.dtheta
    rho_t = np.gradient(rho, t, axis=0, edge_order=2)
    theta_t = np.gradient(th, t, axis=0, edge_order=2)
    rho_theta = (np.roll(rho, -1, axis=1) - np.roll(rho, 1, axis=1)) / (2.0 * dth)
    nxt = np.roll(th, -1, axis=1)
    nxt[:, -1] += TWO_PI
    prv = np.roll(th, 1, axis=1)
    prv[:, 0] -= TWO_PI
    theta_theta = (nxt - prv) / (2.0 * dth)

    tt = t[:, None]
    h_n_sq = rho_t**2 + rho**2 * theta_t**2
    h_t_sq = (rho_theta**2 + rho**2 * theta_theta**2) / tt**2
    grad_rho_sq = rho_t**2 + rho_theta**2 / tt**2
    rho_sq_grad_theta_sq = rho**2 * (theta_t**2 + theta_theta**2 / tt**2)
    jac = (rho / tt) * (rho_t * theta_theta - rho_theta * theta_t)
    if np.any(jac <= 0):
        i, j = np.unravel_index(np.argmin(jac), jac.shape)
        raise NonPositiveJacobian((i, j), float(t[i]), float(gmap.theta[j]), float(jac[i, j]))
    fields = [h_n_sq, h_t_sq, grad_rho_sq, rho_sq_grad_theta_sq, jac, rho_t, rho_theta, theta_t, theta_theta]
    for arr in fields:
        arr.setflags(write=False)
    return DerivativeField(*fields)


def radial_lift(profile: RadialProfile, n_theta: int = DEFAULT_GRID, n_t: int | None = None) -> PolarGridMap:
    """Sample ``h(t e^{i theta}) = H(t) e^{i theta}`` on a polar grid.

    With ``n_t`` omitted the profile nodes are used as grid rows and must be
    uniform; otherwise the interpolant is resampled on ``n_t`` rows.
    """
    if profile.degenerate_start or np.any(profile.hdot_values <= 0):
        raise InvalidProfile("cannot lift a profile with a non-positive slope")
    if n_t is None:
        t = profile.t_nodes
        steps = np.diff(t)
        if np.max(np.abs(steps - steps.mean())) > 1e-9 * steps.mean():
            raise InvalidProfile("profile nodes are not uniform; pass n_t to resample")
        h = profile.h_values
    else:
        t = np.linspace(1.0, profile.r, n_t)
        h, _ = profile(t)
        h[0], h[-1] = 1.0, profile.R
    theta = TWO_PI * np.arange(n_theta) / n_theta
    rho = np.repeat(np.asarray(h, dtype=float)[:, None], n_theta, axis=1)
    th = np.repeat(theta[None, :], len(t), axis=0)
    return PolarGridMap(profile.r, profile.R, rho, th)


def map_from_functions(rho_fn, theta_fn, r: float, R: float, n_t: int = DEFAULT_GRID, n_theta: int = DEFAULT_GRID) -> PolarGridMap:
    """Sample ``rho(t, theta)`` and unwrapped ``Theta(t, theta)`` on the grid."""
    t = np.linspace(1.0, r, n_t)[:, None]
    theta = (TWO_PI * np.arange(n_theta) / n_theta)[None, :]
    rho = np.broadcast_to(rho_fn(t, theta), (n_t, n_theta)).copy()
    th = np.broadcast_to(theta_fn(t, theta), (n_t, n_theta)).copy()
    rho[0] = 1.0
    rho[-1] = R
    return PolarGridMap(r, R, rho, th)
