"""Radial minimizers of the total combined energy by shooting.

The Euler-Lagrange equation of

    2 pi int_1^r (alpha t + beta t^2 / (H Hdot)) (w_a^2 Hdot^2 + w_b^2 H^2 / t^2) dt

is the second-order equation

    H'' = H'^2 (H - c^2 t H') (t + gamma H H') / (t H (H + c^2 gamma t H'^3)),

with ``c = w_a / w_b`` and ``gamma = alpha / beta``. It is integrated from
``H(1) = 1``, ``H'(1) = q`` in logarithmic variables (see ``_kernel_py``),
which keeps the right-hand side regular and allows integration towards
``t -> 0`` as well. The slope ``q`` hitting ``H(r) = R`` is found by a
bracketing root finder, using that ``q -> H_q(r)`` is strictly increasing.

The elasticity function ``Phi = t H' / H`` regarded as a function of
``s = H / t`` satisfies the reduced first-order equation

    Phi'(s) = -Phi (c^2 Phi^2 - 1)(1 + gamma s^2 Phi^2) / (s (Phi - 1)(1 + c^2 gamma s^2 Phi^3)),

which is singular where ``Phi = 1``. Curves of ``Phi`` are therefore
extracted parametrically from trajectories of the full equation.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from . import kernels
from .errors import (
    BracketFailure,
    DomainError,
    NegativeSlope,
    PreconditionUnmet,
    SingularStart,
    StepFailure,
)
from .geometry import AnnulusPair, RadialProfile

RTOL = 1e-10
ATOL = 1e-10
SHOOT_TOL = 1e-8
SHOOT_NODES = 1025
BALANCE_TOL = 1e-6
SIGN_TOL = 1e-8
MAX_EXPANSIONS = 40
TAU_CAP = 60.0


class CaseLabel(str, enum.Enum):
    BALANCED = "Balanced"
    EXPANDING = "Expanding"
    CONTRACTING = "Contracting"


class Concavity(str, enum.Enum):
    CONCAVITY = "ConcavityCase"
    CONVEXITY = "ConvexityCase"
    BALANCED = "Balanced"
    NEITHER = "Neither"


def _check_params(q, c, gamma):
    for name, v in (("q", q), ("c", c), ("gamma", gamma)):
        if not (math.isfinite(v) and v > 0):
            raise DomainError(f"{name} must be positive and finite, got {v!r}")


def second_derivative(t, h, hd, c: float, gamma: float):
    """Right-hand side ``H''`` of the Euler-Lagrange equation."""
    c2 = c * c
    num = hd * hd * (h - c2 * t * hd) * (t + gamma * h * hd)
    den = t * h * (h + c2 * gamma * t * hd**3)
    return num / den


def _raise_for(status, q, tau):
    if status == kernels.STEP_FAILURE or status == kernels.MAX_STEPS:
        raise StepFailure(f"adaptive control failed for q={q!r} near t={math.exp(tau):.6g}")
    if status == kernels.NEGATIVE_SLOPE:
        raise NegativeSlope(f"H' <= 0 reached for q={q!r} near t={math.exp(tau):.6g}")


@dataclass(frozen=True)
class Trajectory:
    """Samples of an Euler-Lagrange trajectory at prescribed abscissae.

    ``k_range`` is the observed range of ``c t H'/H - 1`` over all accepted
    steps; its sign never changes along an exact trajectory.
    """

    t: np.ndarray
    h: np.ndarray
    hdot: np.ndarray
    hddot: np.ndarray
    k_range: tuple
    n_steps: int

    @property
    def constant_sign_consistent(self) -> bool:
        lo, hi = self.k_range
        return not (lo < -SIGN_TOL and hi > SIGN_TOL)


def trajectory(q: float, c: float, gamma: float, t_samples, rtol: float = RTOL, atol: float = ATOL) -> Trajectory:
    """Integrate from ``t = 1`` and sample at ``t_samples`` (monotone, one side of 1)."""
    _check_params(q, c, gamma)
    t = np.asarray(t_samples, dtype=float)
    tau = np.log(t)
    tau_end = float(tau[-1]) if tau.size else 0.0
    u, phi, tau_f, _, _, status, n, kmin, kmax = kernels.integrate(q, c, gamma, tau_end, tau, rtol, atol)
    _raise_for(status, q, tau_f)
    h = np.exp(u)
    hd = h * phi / t
    hdd = second_derivative(t, h, hd, c, gamma)
    return Trajectory(t, h, hd, hdd, (kmin, kmax), n)


def integrate_el_ode(
    q: float,
    c: float,
    gamma: float,
    t_max: float,
    n_nodes: int = SHOOT_NODES,
    rtol: float = RTOL,
    atol: float = ATOL,
) -> RadialProfile:
    """Solve the Euler-Lagrange equation with ``H(1) = 1``, ``H'(1) = q`` on ``[1, t_max]``.

    Returns the solution sampled on ``n_nodes`` uniform nodes.

    Raises
    ------
    StepFailure
        If the step-size controller cannot meet the tolerance.
    NegativeSlope
        If ``H'`` stops being positive; this cannot happen for valid input.
    """
    if not (math.isfinite(t_max) and t_max > 1.0):
        raise DomainError(f"t_max must exceed 1, got {t_max!r}")
    tr = trajectory(q, c, gamma, np.linspace(1.0, t_max, n_nodes), rtol, atol)
    den = tr.t * tr.h * (tr.h + c * c * gamma * tr.t * tr.hdot**3)
    if np.any(den <= 0):
        raise NegativeSlope("denominator of the Euler-Lagrange equation vanished")
    return RadialProfile(tr.t, tr.h, tr.hdot)


def end_value(q: float, c: float, gamma: float, r: float, rtol: float = RTOL, atol: float = ATOL) -> float:
    """``H_q(r)``."""
    _check_params(q, c, gamma)
    _, _, tau, u, _, status, _, _, _ = kernels.integrate(q, c, gamma, math.log(r), (), rtol, atol)
    _raise_for(status, q, tau)
    return math.exp(u)


def el_residual(profile: RadialProfile, c: float, gamma: float) -> np.ndarray:
    """Residual of the Euler-Lagrange equation at the interior nodes.

    ``H''`` is taken by fourth-order differences of the stored slopes:
    central in the interior, one-sided biased next to the ends. Nodes must
    be uniform.
    """
    t, h, d = profile.t_nodes, profile.h_values, profile.hdot_values
    n = t.size
    if n < 3:
        return np.zeros(0)
    dt = (t[-1] - t[0]) / (n - 1)
    hdd = np.empty(n - 2)
    hdd[:] = (d[2:] - d[:-2]) / (2.0 * dt)
    if n >= 5:
        hdd[1:-1] = (-d[4:] + 8.0 * d[3:-1] - 8.0 * d[1:-3] + d[:-4]) / (12.0 * dt)
        hdd[0] = (-3.0 * d[0] - 10.0 * d[1] + 18.0 * d[2] - 6.0 * d[3] + d[4]) / (12.0 * dt)
        hdd[-1] = (3.0 * d[-1] + 10.0 * d[-2] - 18.0 * d[-3] + 6.0 * d[-4] - d[-5]) / (12.0 * dt)
    return hdd - second_derivative(t[1:-1], h[1:-1], d[1:-1], c, gamma)


# ---------------------------------------------------------------------------
# Case analysis


def case_label(q: float, c: float, tol: float = BALANCE_TOL) -> CaseLabel:
    """Sign of ``c q - 1``, with a relative band for the balanced case."""
    if abs(c * q - 1.0) <= tol:
        return CaseLabel.BALANCED
    return CaseLabel.EXPANDING if c * q > 1.0 else CaseLabel.CONTRACTING


@dataclass(frozen=True)
class CaseReport:
    label: CaseLabel
    s_trend: str
    predicted_trend: str
    end_value: float
    balanced_end: float
    consistent: bool


def case_classify(q: float, c: float, gamma: float = 1.0, r: float = 2.0, n_nodes: int = 257) -> CaseReport:
    """Classify ``q`` against ``1/c`` and confirm on the integrated profile.

    Case 1 (``q = 1/c``): ``H = t^{1/c}``; Case 2 (``q > 1/c``): ``H / t^{1/c}``
    increases and ``H(r) > r^{1/c}``; Case 3 (``q < 1/c``): the reverse.
    """
    label = case_label(q, c)
    tr = trajectory(q, c, gamma, np.linspace(1.0, r, n_nodes))
    ratio = tr.h / tr.t ** (1.0 / c)
    steps = np.diff(ratio)
    scale = 1e-9 * float(np.max(np.abs(ratio)))
    if np.all(np.abs(steps) <= scale):
        trend = "constant"
    elif np.all(steps > 0):
        trend = "increasing"
    elif np.all(steps < 0):
        trend = "decreasing"
    else:
        trend = "mixed"
    predicted = {
        CaseLabel.BALANCED: "constant",
        CaseLabel.EXPANDING: "increasing",
        CaseLabel.CONTRACTING: "decreasing",
    }[label]
    balanced_end = r ** (1.0 / c)
    end = float(tr.h[-1])
    if label is CaseLabel.EXPANDING:
        end_ok = end > balanced_end
    elif label is CaseLabel.CONTRACTING:
        end_ok = end < balanced_end
    else:
        end_ok = abs(end - balanced_end) <= 1e-6 * balanced_end
    return CaseReport(label, trend, predicted, end, balanced_end, trend == predicted and end_ok)


# ---------------------------------------------------------------------------
# Shooting


@dataclass(frozen=True, eq=False)
class ShootResult:
    """Radial minimizer of the total combined energy.

    ``sign_margin`` holds ``c^2 t H' - H`` at the nodes; its sign is the sign
    of ``-H''``.
    """

    pair: AnnulusPair
    c: float
    gamma: float
    q: float
    profile: RadialProfile
    hddot: np.ndarray
    case_label: CaseLabel
    concavity: Concavity
    ode_residual_sup: float
    sign_margin: np.ndarray
    constant_sign_consistent: bool
    end_error: float

    def to_json(self, path=None) -> str:
        p = self.profile
        payload = {
            "q": self.q,
            "case": self.case_label.value,
            "concavity": self.concavity.value,
            "residual_sup": self.ode_residual_sup,
            "r": self.pair.r,
            "R": self.pair.R,
            "c": self.c,
            "gamma": self.gamma,
            "end_error": self.end_error,
            "profile": {
                "t": p.t_nodes.tolist(),
                "H": p.h_values.tolist(),
                "Hdot": p.hdot_values.tolist(),
            },
        }
        text = json.dumps(payload, indent=1)
        if path is not None:
            Path(path).write_text(text)
        return text


def concavity_verdict(margin, c: float, label: CaseLabel, tol: float = SIGN_TOL) -> Concavity:
    if label is CaseLabel.BALANCED:
        return Concavity.BALANCED
    scale = tol
    if c <= 1.0 and np.all(margin >= -scale):
        return Concavity.CONCAVITY
    if c >= 1.0 and np.all(margin <= scale):
        return Concavity.CONVEXITY
    return Concavity.NEITHER


def _bracket(f, c, R):
    lo = min(1.0 / c, 1.0) / 16.0
    hi = max(1.0 / c, 1.0) * 16.0
    flo, fhi = f(lo), f(hi)
    n = 0
    while flo > 0:
        lo *= 0.5
        flo = f(lo)
        n += 1
        if n > MAX_EXPANSIONS:
            raise BracketFailure(f"cannot reach R={R!r} from below")
    n = 0
    while fhi < 0:
        hi *= 2.0
        fhi = f(hi)
        n += 1
        if n > MAX_EXPANSIONS:
            raise BracketFailure(f"cannot reach R={R!r} from above")
    return lo, hi


def shoot(
    pair: AnnulusPair,
    c: float,
    gamma: float = 1.0,
    tol: float = SHOOT_TOL,
    n_nodes: int = SHOOT_NODES,
    rtol: float = RTOL,
    atol: float = ATOL,
) -> ShootResult:
    """Find ``q`` with ``H_q(r) = R`` and return the sampled minimizer.

    Raises
    ------
    BracketFailure
        If the slope bracket cannot be expanded around ``R``.
    """
    r, R = pair.r, pair.R
    _check_params(1.0, c, gamma)
    if not (tol > 0):
        raise DomainError("tol must be positive")
    log_r, log_R = math.log(r), math.log(R)

    def f(q):
        _, _, tau, u, _, status, _, _, _ = kernels.integrate(q, c, gamma, log_r, (), rtol, atol)
        _raise_for(status, q, tau)
        return u - log_R

    lo, hi = _bracket(f, c, R)
    q = brentq(f, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=300)
    end_error = abs(math.exp(f(q) + log_R) - R) / R
    if end_error > tol:
        raise BracketFailure(f"root finder stalled with relative end error {end_error:.3e}")
    tr = trajectory(q, c, gamma, np.linspace(1.0, r, n_nodes), rtol, atol)
    h = tr.h.copy()
    h[0] = 1.0
    profile = RadialProfile(tr.t, h, tr.hdot)
    label = case_label(q, c)
    margin = c * c * tr.t * tr.hdot - tr.h
    verdict = concavity_verdict(margin, c, label)
    residual = el_residual(profile, c, gamma)
    res_sup = float(np.max(np.abs(residual))) if residual.size else 0.0
    return ShootResult(
        pair, c, gamma, q, profile, tr.hddot, label, verdict, res_sup, margin,
        tr.constant_sign_consistent, end_error,
    )


def shooting_monotone(r: float, c: float, gamma: float, qs) -> bool:
    """Whether ``q -> H_q(r)`` is strictly increasing on the given slopes."""
    ends = [end_value(q, c, gamma, r) for q in sorted(qs)]
    return bool(np.all(np.diff(ends) > 0))


# ---------------------------------------------------------------------------
# Bounds of the concavity proposition


@dataclass(frozen=True)
class BoundCheck:
    name: str
    lhs: float
    rhs: float
    satisfied: bool


@dataclass(frozen=True)
class BoundReport:
    checks: list
    alarms: list

    @property
    def all_satisfied(self) -> bool:
        return all(c.satisfied for c in self.checks)


def propo_bounds_check(result: ShootResult, c: float | None = None) -> BoundReport:
    """Evaluate the three printed consequences of the concavity condition.

    The bounds are ``r <= log(q c^2) / log(1/c^2 - 1)``,
    ``r^{1/c^2} <= R <= r q c^2`` and ``r < 1 / (1 - c^2 + c^2 / R)``. A bound
    that fails on a certified instance is reported as an alarm.

    Raises
    ------
    PreconditionUnmet
        If ``c >= 1`` or the concavity certificate fails. The hypothesis
        ``q > 1/c^2`` of the first two bounds is recorded, not enforced.
    """
    c = result.c if c is None else c
    if not c < 1.0:
        raise PreconditionUnmet("the bounds assume c < 1")
    if np.any(result.sign_margin < -SIGN_TOL):
        raise PreconditionUnmet("the concavity condition c^2 t H' >= H fails on [1, r]")
    r, R, q = result.pair.r, result.pair.R, result.q
    c2 = c * c
    checks = []
    denom = math.log(1.0 / c2 - 1.0) if c2 < 1.0 and 1.0 / c2 - 1.0 > 0 else float("nan")
    rhs1 = math.log(q * c2) / denom if q * c2 > 0 and denom not in (0.0,) else float("nan")
    checks.append(BoundCheck("r <= log(q c^2)/log(1/c^2 - 1)", r, rhs1, bool(r <= rhs1)))
    checks.append(BoundCheck("r^(1/c^2) <= R", r ** (1.0 / c2), R, bool(r ** (1.0 / c2) <= R)))
    checks.append(BoundCheck("R <= r q c^2", R, r * q * c2, bool(R <= r * q * c2)))
    rhs3 = 1.0 / (1.0 - c2 + c2 / R)
    checks.append(BoundCheck("r < 1/(1 - c^2 + c^2/R)", r, rhs3, bool(r < rhs3)))
    alarms = []
    if not q > 1.0 / c2:
        alarms.append(f"hypothesis q > 1/c^2 fails (q={q:.8g}, 1/c^2={1.0 / c2:.8g})")
    for chk in checks:
        if not chk.satisfied:
            alarms.append(f"violated on a certified instance: {chk.name} ({chk.lhs:.8g} vs {chk.rhs:.8g})")
    return BoundReport(checks, alarms)


# ---------------------------------------------------------------------------
# Phi curves


def reduced_equation_rhs(s, phi, c: float, gamma: float):
    """Right-hand side of the reduced equation for ``Phi(s)``; singular at ``Phi = 1``."""
    c2 = c * c
    return -phi * (c2 * phi * phi - 1.0) * (1.0 + s * s * gamma * phi * phi) / (
        s * (phi - 1.0) * (1.0 + c2 * gamma * s * s * phi**3)
    )


def v_form_rhs(s, v, c: float):
    """Right-hand side of the equation for ``V(s) = s Phi(s)`` with ``gamma = 1``."""
    c2 = c * c
    return v * v * (-s + c2 * v) * (1.0 + s * v) / (s * (s - v) * (s + c2 * v**3))


@dataclass(frozen=True, eq=False)
class PhiCurve:
    """Samples of ``Phi_q`` on increasing ``s``.

    ``maximal_interval_hint`` is ``(left, right)`` where ``left`` is the
    detected endpoint at which ``Phi`` reaches 1 (the singular line of the
    reduced equation) or ``0.0``, and ``right`` is ``math.inf``.
    """

    q: float
    c: float
    gamma: float
    s_nodes: np.ndarray
    phi_values: np.ndarray
    maximal_interval_hint: tuple

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "phi"])
        for s, p in zip(self.s_nodes, self.phi_values):
            w.writerow([repr(float(s)), repr(float(p))])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    def __call__(self, s):
        return np.interp(s, self.s_nodes, self.phi_values)

    def expected_shape(self) -> str:
        q, c = self.q, self.c
        if abs(c * q - 1.0) <= BALANCE_TOL:
            return "constant"
        if q < 1.0:
            return "decreasing"
        if q < 1.0 / c:
            return "increasing"
        return "decreasing"

    def limit(self) -> float:
        """The limit of ``Phi`` as ``s -> inf`` for this class of ``q``."""
        return 0.0 if self.q < 1.0 else 1.0 / self.c

    def shape_ok(self) -> bool:
        """Whether the samples follow the monotone shape of their class."""
        p = self.phi_values
        d = np.diff(p)
        shape = self.expected_shape()
        q, c = self.q, self.c
        if shape == "constant":
            return bool(np.all(np.abs(p - q) <= 1e-8 * q))
        if q < 1.0:
            return bool(np.all(d < 0) and np.all((p > 0) & (p < 1)))
        if shape == "increasing":
            return bool(np.all(d > 0) and np.all(p < 1.0 / c))
        return bool(np.all(d < 0) and np.all(p > 1.0 / c))


def _sample(q, c, gamma, tau_f, n_points, rtol, atol):
    if tau_f == 0.0:
        return np.zeros(0), np.zeros(0), np.zeros(0)
    taus = np.linspace(0.0, tau_f, n_points)[1:]
    taus[-1] = tau_f
    u, phi, tau_g, _, _, status, _, _, _ = kernels.integrate(q, c, gamma, tau_f, taus, rtol, atol)
    if status != kernels.OK:
        _raise_for(status, q, tau_g)
    return taus, np.exp(u - taus), phi


def _run_to(q, c, gamma, direction, s_stop, n_points, rtol, atol):
    out = kernels.integrate(q, c, gamma, direction * TAU_CAP, (), rtol, atol, s_stop)
    tau_f, status = out[2], out[5]
    if status not in (kernels.OK, kernels.STOPPED):
        _raise_for(status, q, tau_f)
    return _sample(q, c, gamma, tau_f, n_points, rtol, atol)


def _cut_branch(q, c, gamma, taus, s, p, n_points, rtol, atol, below):
    # keep the part before Phi first crosses 1; resample it finely
    keep = p < 1.0 if below else p > 1.0
    if np.all(keep):
        return s, p, 0.0
    cut = int(np.argmin(keep))
    taus, s, p = _sample(q, c, gamma, taus[cut], n_points, rtol, atol)
    keep = p < 1.0 if below else p > 1.0
    cut = int(np.argmin(keep)) if not np.all(keep) else len(p)
    left = float(np.min(s[:cut])) if cut else 1.0
    return s[:cut], p[:cut], left


def phi_curve(
    q: float,
    c: float,
    gamma: float = 1.0,
    s_range: tuple = (0.05, 50.0),
    n_points: int = 2001,
    rtol: float = RTOL,
    atol: float = ATOL,
) -> PhiCurve:
    """Extract ``Phi_q`` on ``s_range`` from trajectories of the full equation.

    The trajectory through ``t = 1`` is followed in both directions of ``t``
    until ``s = H/t`` leaves ``s_range``. For ``q < 1`` the branch ends
    where ``Phi`` reaches 1, which is the left end ``a(q)`` of its maximal
    interval; the returned hint records it.

    Raises
    ------
    SingularStart
        If ``q == 1``, where the reduced equation is singular.
    """
    _check_params(q, c, gamma)
    if q == 1.0:
        raise SingularStart("the reduced equation is singular at Phi = 1; q = 1 is not admissible")
    s_lo, s_hi = s_range
    if not (0 < s_lo < 1.0 < s_hi):
        raise DomainError("s_range must straddle 1 with a positive left end")
    # ds/dtau = s (phi - 1): with phi < 1 forward time lowers s
    up = -1.0 if q < 1.0 else 1.0
    _, s_a, p_a = _run_to(q, c, gamma, up, s_hi, n_points, rtol, atol)
    tb, s_b, p_b = _run_to(q, c, gamma, -up, s_lo, n_points, rtol, atol)
    s_b, p_b, left = _cut_branch(q, c, gamma, tb, s_b, p_b, n_points, rtol, atol, below=q < 1.0)
    s = np.concatenate([s_b[::-1], [1.0], s_a])
    p = np.concatenate([p_b[::-1], [q], p_a])
    inside = (s >= s_lo * (1 - 1e-12)) & (s <= s_hi * (1 + 1e-12))
    s, p = s[inside], p[inside]
    order = np.argsort(s, kind="stable")
    s, p = s[order], p[order]
    uniq = np.concatenate([[True], np.diff(s) > 0])
    return PhiCurve(q, c, gamma, s[uniq], p[uniq], (left, math.inf))


def phi_at(q: float, c: float, gamma: float, s: float, rtol: float = RTOL, atol: float = ATOL) -> float:
    """``Phi_q(s)`` on the branch through ``(1, q)``; ``nan`` outside its interval."""
    _check_params(q, c, gamma)
    if s == 1.0:
        return float(q)
    if abs(c * q - 1.0) == 0.0:
        return float(q)
    up = -1.0 if q < 1.0 else 1.0
    direction = up if s > 1.0 else -up
    out = kernels.integrate(q, c, gamma, direction * TAU_CAP, (), rtol, atol, s)
    tau_f, phi, status = out[2], out[4], out[5]
    if status != kernels.STOPPED:
        if status not in (kernels.OK,):
            _raise_for(status, q, tau_f)
        return float("nan")
    if q != 1.0 and (phi - 1.0) * (q - 1.0) <= 0.0:
        return float("nan")
    return float(phi)


@dataclass(frozen=True)
class LimitSequence:
    name: str
    qs: tuple
    values: tuple
    limit: float
    monotone: bool
    final_gap: float
    converging: bool


@dataclass(frozen=True)
class LimitReport:
    c: float
    gamma: float
    s_probe: float
    sequences: list
    q_monotone: bool
    notes: list = field(default_factory=list)

    @property
    def all_ok(self) -> bool:
        return self.q_monotone and all(seq.monotone and seq.converging for seq in self.sequences)


def _sequence(name, qs, c, gamma, s, limit):
    vals = tuple(phi_at(q, c, gamma, s) for q in qs)
    arr = np.array(vals)
    d = np.diff(arr)
    monotone = bool(np.all(d > 0) or np.all(d < 0))
    if math.isinf(limit):
        gap = float("inf")
        converging = bool(np.all(d > 0))
    elif math.isnan(limit):
        # no claimed limit: report the Cauchy gap of the last two terms
        gap = float(abs(d[-1]))
        converging = bool(np.all(np.abs(np.diff(d)) >= 0) and np.all(np.diff(np.abs(d)) < 0))
    else:
        gaps = np.abs(arr - limit)
        gap = float(gaps[-1])
        converging = bool(np.all(np.diff(gaps) < 0))
    return LimitSequence(name, tuple(qs), vals, limit, monotone, gap, converging)


def phi_limit_suite(c: float, gamma: float = 1.0, s_probe: float = 2.0, sequences: dict | None = None) -> LimitReport:
    """Probe the limits of ``Phi_q(s_probe)`` along sequences of ``q``.

    Default sequences: ``q -> inf`` (growth), ``q -> 1/c`` from above and
    below (limit ``1/c``), ``q -> 0`` (limit 0) and ``q -> 1`` from below,
    for which no limit is assumed and only the Cauchy gap is reported. Also
    checks that ``q -> Phi_q(s_probe)`` is increasing,
    i.e. that integral curves do not cross.
    """
    inv = 1.0 / c
    if sequences is None:
        sequences = {
            "q_to_infinity": ((4.0, 16.0, 64.0), math.inf),
            "q_down_to_1/c": ((inv + 0.1, inv + 0.01, inv + 0.001), inv),
            "q_down_to_0": ((0.1, 0.01, 0.001), 0.0),
            "q_up_to_1": ((0.9, 0.99, 0.999), math.nan),
        }
        if inv > 1.0:
            sequences["q_up_to_1/c"] = ((inv - 0.1 * (inv - 1), inv - 0.01 * (inv - 1), inv - 0.001 * (inv - 1)), inv)
    seqs = []
    notes = []
    all_q = []
    for name, (qs, limit) in sequences.items():
        seq = _sequence(name, qs, c, gamma, s_probe, limit)
        if any(math.isnan(v) for v in seq.values):
            notes.append(f"{name}: s={s_probe} lies outside the maximal interval of some curve")
        seqs.append(seq)
        all_q.extend(q for q, v in zip(seq.qs, seq.values) if math.isfinite(v) and q != 1.0)
    qs = sorted(set(all_q))
    vals = np.array([phi_at(q, c, gamma, s_probe) for q in qs])
    q_monotone = bool(np.all(np.diff(vals) > 0))
    return LimitReport(c, gamma, s_probe, seqs, q_monotone, notes)


# ---------------------------------------------------------------------------
# Smooth evaluation of a shot profile and of its inverse


class DenseSolution:
    """Quintic Hermite interpolant of ``H`` through ``(H, H', H'')`` at the nodes.

    The second derivatives come from the differential equation, so the
    interpolant is ``C^2`` and accurate to ``O(dt^6)``. The inverse
    ``F = H^{-1}`` is interpolated the same way from ``(t, 1/H', -H''/H'^3)``
    on the nodes ``s_i = H(t_i)``.
    """

    def __init__(self, t, h, hd, hdd):
        from scipy.interpolate import BPoly

        self.t = np.asarray(t, dtype=float)
        self.r = float(self.t[-1])
        self.R = float(h[-1])
        self._h = BPoly.from_derivatives(self.t, np.column_stack([h, hd, hdd]))
        self._hd = self._h.derivative()
        self._hdd = self._h.derivative(2)
        s = np.asarray(h, dtype=float)
        self._f = BPoly.from_derivatives(s, np.column_stack([self.t, 1.0 / hd, -hdd / hd**3]))
        self._fd = self._f.derivative()

    @classmethod
    def from_shoot(cls, res: "ShootResult") -> "DenseSolution":
        p = res.profile
        return cls(p.t_nodes, p.h_values, p.hdot_values, res.hddot)

    def __call__(self, t):
        """``(H, H', H'')`` at ``t``."""
        t = np.clip(t, 1.0, self.r)
        return self._h(t), self._hd(t), self._hdd(t)

    def inverse(self, s):
        """``(F, F')`` at ``s``."""
        s = np.clip(s, 1.0, self.R)
        return self._f(s), self._fd(s)
