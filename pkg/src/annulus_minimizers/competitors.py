"""Non-radial competitors for empirical minimality tests.

A competitor perturbs the radial lift of a profile ``H`` by

    rho(t, theta)   = H(t) + eps_r * phi(t) * cos(m (theta - theta0))
    Theta(t, theta) = theta + eps_a * psi(t) * sin(m (theta - theta0)) + twist * log(t) / log(r)

with bumps ``phi = psi = sin(pi k (t - 1) / (r - 1))`` that vanish on both
boundary circles, so the circles go to the circles and the map stays in
the admissible class. The phase ``theta0`` comes from the seed. When a node
has ``J <= 0`` or leaves the closed target annulus, all amplitudes are
halved and the map rebuilt, at most twenty times.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .closed_form import solve_combined_distortion, solve_combined_energy
from .energy import grid_energy_report, radial_combined_energy, radial_distortion, radial_total_energy
from .errors import AnnulusError, CannotSatisfyJacobian, DomainError, InvalidMap
from .geometry import AnnulusPair, PolarGridMap, RadialProfile, Weights
from .ode_shooting import DenseSolution, shoot

TWO_PI = 2.0 * math.pi
MAX_HALVINGS = 20
EPS_GRID_CONSTANT = 10.0
MASK64 = (1 << 64) - 1


class SplitMix64:
    """Counter-based 64-bit generator (Steele, Lea and Flood).

    The state advances by the golden-ratio increment ``0x9E3779B97F4A7C15``
    and each output is mixed with the multipliers ``0xBF58476D1CE4E5B9`` and
    ``0x94D049BB133111EB``. Floats use the top 53 bits, so sequences are
    reproducible in any language with 64-bit unsigned arithmetic.
    """

    def __init__(self, seed: int):
        self.state = int(seed) & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform float in ``[0, 1)``."""
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def integer(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``."""
        return lo + int(self.random() * (hi - lo + 1))


@dataclass(frozen=True)
class PerturbationSpec:
    """Parameters of one competitor."""

    base: RadialProfile
    eps_radial: float = 0.0
    eps_angular: float = 0.0
    mode_t: int = 1
    mode_theta: int = 1
    seed: int = 0
    twist: float = 0.0

    def __post_init__(self):
        if int(self.mode_t) < 1 or int(self.mode_theta) < 1:
            raise DomainError("mode_t and mode_theta must be positive integers")
        for name in ("eps_radial", "eps_angular", "twist"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")

    @property
    def phase(self) -> float:
        return TWO_PI * SplitMix64(self.seed).random()

    def damped(self, factor: float) -> "PerturbationSpec":
        return dataclasses.replace(
            self,
            eps_radial=self.eps_radial * factor,
            eps_angular=self.eps_angular * factor,
            twist=self.twist * factor,
        )


@dataclass(frozen=True)
class Competitor:
    """A generated map together with the amplitudes actually used."""

    map: PolarGridMap
    spec: PerturbationSpec
    halvings: int


def _sample(spec: PerturbationSpec, n_t: int, n_theta: int, radial_values=None, outer=None):
    base = spec.base
    r, R = base.r, base.R if outer is None else outer
    t = np.linspace(1.0, r, n_t)
    if radial_values is None:
        h, _ = base(t)
    else:
        h = np.asarray(radial_values(t), dtype=float)
    h = np.asarray(h, dtype=float).copy()
    h[0], h[-1] = 1.0, R
    theta = TWO_PI * np.arange(n_theta) / n_theta
    bump = np.sin(math.pi * spec.mode_t * (t - 1.0) / (r - 1.0))
    bump[0] = bump[-1] = 0.0
    arg = spec.mode_theta * (theta - spec.phase)
    rho = h[:, None] + spec.eps_radial * bump[:, None] * np.cos(arg)[None, :]
    th = theta[None, :] + spec.eps_angular * bump[:, None] * np.sin(arg)[None, :]
    th = th + spec.twist * (np.log(t) / math.log(r))[:, None]
    return rho, th


def generate_competitor(
    spec: PerturbationSpec, n_t: int = 256, n_theta: int = 256, radial_values=None, outer=None
) -> Competitor:
    """Build a competitor, halving the amplitudes until it is admissible.

    ``radial_values`` optionally replaces the profile interpolant by a more
    accurate evaluator of ``H``. ``outer`` overrides the target radius, which
    otherwise is the last profile value; a shot profile reaches it only to
    the shooting tolerance.

    Raises
    ------
    CannotSatisfyJacobian
        If the map is still invalid after twenty halvings.
    """
    R = spec.base.R if outer is None else float(outer)
    current = spec
    for k in range(MAX_HALVINGS + 1):
        rho, th = _sample(current, n_t, n_theta, radial_values, R)
        if rho.min() >= 1.0 and rho.max() <= R:
            try:
                gmap = PolarGridMap(spec.base.r, R, rho, th)
            except InvalidMap:
                pass
            else:
                return Competitor(gmap, current, k)
        current = current.damped(0.5)
    raise CannotSatisfyJacobian(
        f"no admissible map after {MAX_HALVINGS} halvings "
        f"(eps_radial={spec.eps_radial!r}, eps_angular={spec.eps_angular!r}, twist={spec.twist!r})"
    )


def make_competitor(spec: PerturbationSpec, n_t: int = 256, n_theta: int = 256) -> PolarGridMap:
    """Admissible competitor map for ``spec``; see :func:`generate_competitor`."""
    return generate_competitor(spec, n_t, n_theta).map


def rotate(gmap: PolarGridMap, phi0: float) -> PolarGridMap:
    """Post-compose with the rotation ``w -> e^{i phi0} w``.

    The sampled arguments are untouched and the offset is carried in
    ``rotation``, so every derivative and energy is unchanged bit for bit.
    """
    return dataclasses.replace(gmap, rotation=gmap.rotation + float(phi0))


# ---------------------------------------------------------------------------
# Sweeps


FUNCTIONALS = ("energy", "distortion", "total")


@dataclass
class SweepInstance:
    """A minimization problem with a computable radial minimizer.

    ``functional`` is ``"energy"`` (combined energy), ``"distortion"``
    (combined distortion ``K[w_b, w_a]``) or ``"total"``. The weights are
    ``w_a = c, w_b = 1, alpha = gamma, beta = 1``.
    """

    functional: str
    pair: AnnulusPair
    c: float
    gamma: float = 1.0
    profile: RadialProfile = field(init=False, repr=False)
    minimum: float = field(init=False)
    radial_values: object = field(init=False, repr=False, default=None)

    def __post_init__(self):
        if self.functional not in FUNCTIONALS:
            raise DomainError(f"functional must be one of {FUNCTIONALS}, got {self.functional!r}")
        w = self.weights
        if self.functional == "energy":
            sol = solve_combined_energy(self.pair, self.c)
            self.profile = sol.profile
            self.minimum = radial_combined_energy(sol.profile, w)

            def values(t, sol=sol):
                return sol.values(t)[0]

            self.radial_values = values
        elif self.functional == "distortion":
            sol = solve_combined_distortion(self.pair, self.c)
            self.profile = sol.profile
            self.minimum = radial_distortion(sol.profile, w)

            def values(t, sol=sol):
                return sol.values(t)[0]

            self.radial_values = values
        else:
            res = shoot(self.pair, self.c, self.gamma)
            self.profile = res.profile
            self.minimum = radial_total_energy(res.profile, w)
            dense = DenseSolution.from_shoot(res)

            def values(t, dense=dense):
                return dense(t)[0]

            self.radial_values = values

    @property
    def weights(self) -> Weights:
        return Weights.from_ratios(self.c, self.gamma)

    def evaluate(self, gmap: PolarGridMap) -> float:
        """The functional of this instance on a grid map."""
        w = self.weights
        if self.functional == "energy":
            return grid_energy_report(gmap, w).combined_energy
        if self.functional == "distortion":
            return grid_energy_report(gmap, w.swapped()).combined_distortion
        return grid_energy_report(gmap, w).total_hnht

    def lift(self, n_t: int = 256, n_theta: int = 256) -> PolarGridMap:
        """Radial lift of the minimizer, sampled like the competitors."""
        rho, th = _sample(PerturbationSpec(self.profile), n_t, n_theta, self.radial_values, self.pair.R)
        return PolarGridMap(self.pair.r, self.pair.R, rho, th)


@dataclass(frozen=True)
class DominanceRow:
    index: int
    eps_r: float
    eps_a: float
    mode: int
    energy: float
    gap: float
    mode_t: int = 1
    twist: float = 0.0
    halvings: int = 0
    error: str = ""


@dataclass
class DominanceTable:
    """Competitor values against the radial minimum.

    ``gap`` is relative: ``value / minimum - 1``. ``lift_gap`` is the same
    quantity for the minimizer's own lift on the grid, and
    ``eps_grid = 10 * dt^2`` is the discretization allowance.
    """

    instance: dict
    rows: list
    minimum: float
    lift_gap: float
    eps_grid: float
    seed: int
    grid: tuple

    @property
    def min_gap(self) -> float:
        gaps = [row.gap for row in self.rows if math.isfinite(row.gap)]
        return min(gaps) if gaps else math.nan

    @property
    def n_failed(self) -> int:
        return sum(1 for row in self.rows if row.error)

    @property
    def passed(self) -> bool:
        return bool(self.min_gap >= -self.eps_grid and self.lift_gap <= self.eps_grid)

    def summary(self) -> dict:
        return {
            **self.instance,
            "n": len(self.rows),
            "n_failed": self.n_failed,
            "seed": self.seed,
            "grid": list(self.grid),
            "minimum": self.minimum,
            "min_gap": self.min_gap,
            "lift_gap": self.lift_gap,
            "eps_grid": self.eps_grid,
            "passed": self.passed,
        }

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["index", "eps_r", "eps_a", "mode", "energy", "gap"])
        for row in self.rows:
            writer.writerow([row.index, repr(row.eps_r), repr(row.eps_a), row.mode, repr(row.energy), repr(row.gap)])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text


def random_spec(base: RadialProfile, rng: SplitMix64) -> PerturbationSpec:
    """Draw perturbation parameters; amplitudes scale with the target width."""
    width = base.R - 1.0
    return PerturbationSpec(
        base=base,
        eps_radial=rng.uniform(0.0, 0.25) * width,
        eps_angular=rng.uniform(0.0, 0.25),
        mode_t=rng.integer(1, 3),
        mode_theta=rng.integer(1, 4),
        seed=rng.next_u64(),
        twist=rng.uniform(-0.3, 0.3),
    )


def competitor_sweep(instance: SweepInstance, n: int = 50, seed: int = 7, n_t: int = 256, n_theta: int = 256) -> DominanceTable:
    """Evaluate ``n`` seeded competitors of the instance's radial minimizer.

    Generation failures are recorded in the row (``energy`` and ``gap`` NaN)
    and do not stop the sweep.
    """
    rng = SplitMix64(seed)
    minimum = instance.minimum
    rows = []
    for index in range(n):
        spec = random_spec(instance.profile, rng)
        try:
            comp = generate_competitor(spec, n_t, n_theta, instance.radial_values, instance.pair.R)
            value = instance.evaluate(comp.map)
            used = comp.spec
            rows.append(DominanceRow(index, used.eps_radial, used.eps_angular, used.mode_theta, value,
                                     value / minimum - 1.0, used.mode_t, used.twist, comp.halvings))
        except AnnulusError as exc:
            rows.append(DominanceRow(index, spec.eps_radial, spec.eps_angular, spec.mode_theta, math.nan, math.nan,
                                     spec.mode_t, spec.twist, 0, f"{type(exc).__name__}: {exc}"))
    lift_gap = instance.evaluate(instance.lift(n_t, n_theta)) / minimum - 1.0
    dt = (instance.pair.r - 1.0) / (n_t - 1)
    info = {"functional": instance.functional, "r": instance.pair.r, "R": instance.pair.R,
            "c": instance.c, "gamma": instance.gamma}
    return DominanceTable(info, rows, minimum, lift_gap, EPS_GRID_CONSTANT * dt * dt, seed, (n_t, n_theta))
