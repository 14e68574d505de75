import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from annulus_minimizers.closed_form import Regime, solve_combined_energy
from annulus_minimizers.competitors import PerturbationSpec, SweepInstance, generate_competitor
from annulus_minimizers.errors import CertificateUnavailable, ClassViolation, RegimeMismatch
from annulus_minimizers.geometry import AnnulusPair, PolarGridMap, Weights, map_from_functions, radial_lift
from annulus_minimizers.lagrangians import (
    FreeLagrangianSpec,
    Kind,
    TotalBound,
    certified_c_scan,
    energy_bound_predicted,
    fl_integral,
    gradient_bounds,
    lemma_checks,
    lift_dense,
    pointwise_ineq_general,
    verify_energy_lower_bound,
    verify_total_lower_bound,
)


@pytest.fixture(scope="module")
def inst23():
    return SweepInstance("energy", AnnulusPair(2.0, 3.0), 1.0)


@pytest.fixture(scope="module")
def twisted(inst23):
    spec = PerturbationSpec(inst23.profile, 0.2, 0.1, 2, 3, seed=5, twist=0.4)
    return generate_competitor(spec, 129, 128, inst23.radial_values).map


class TestFreeLagrangians:
    def test_pullback_of_one_is_target_area(self, twisted):
        res = fl_integral(FreeLagrangianSpec(Kind.PULLBACK, lambda s: 1.0 + 0 * s), twisted)
        assert res.predicted == pytest.approx(math.pi * 8.0, rel=1e-13)
        assert res.relative_gap < 1e-3

    def test_radial_of_one(self, twisted):
        res = fl_integral(FreeLagrangianSpec(Kind.RADIAL, lambda s: 1.0 + 0 * s), twisted)
        assert res.predicted == pytest.approx(2 * math.pi * 2.0, rel=1e-13)
        assert res.relative_gap < 1e-3

    def test_angular_map_independent(self, inst23, twisted):
        spec = FreeLagrangianSpec(Kind.ANGULAR, lambda t: 1.0 + 0 * t)
        lift = inst23.lift(129, 128)
        a, b = fl_integral(spec, lift), fl_integral(spec, twisted)
        assert a.computed == pytest.approx(b.computed, rel=1e-12)
        assert a.computed == pytest.approx(2 * math.pi, rel=1e-12)
        assert a.notes

    def test_two_variable_with_partials(self, twisted):
        spec = FreeLagrangianSpec(
            Kind.TWO_VARIABLE, lambda t, s: t * s * s, partials=(lambda t, s: s * s, lambda t, s: 2 * t * s)
        )
        res = fl_integral(spec, twisted)
        assert res.predicted == pytest.approx(2 * math.pi * (2 * 9 - 1), rel=1e-14)
        assert res.relative_gap < 1e-3

    def test_radial_function(self, twisted):
        res = fl_integral(FreeLagrangianSpec(Kind.RADIAL_FUNCTION, lambda t: 1.0 / t), twisted)
        assert res.predicted == pytest.approx(2 * math.pi, rel=1e-13)
        assert res.relative_gap < 1e-12

    def test_class_violation(self):
        m = map_from_functions(lambda t, th: t + 0 * th, lambda t, th: th + 0 * t, 2.0, 2.0, 9, 8)
        bad = PolarGridMap(m.r, m.R, m.rho, m.theta_map)
        rho = m.rho.copy()
        rho[-1, 2] = 1.9
        object.__setattr__(bad, "rho", rho)
        with pytest.raises(ClassViolation):
            fl_integral(FreeLagrangianSpec(Kind.RADIAL, lambda s: s), bad)


class TestPointwise:
    def test_worked_example(self):
        m = pointwise_ineq_general(1.0, 2.0, Weights(2.0, 1.0), 1.0, 1.0)
        assert m.direct == 9.0
        assert m.difference == pytest.approx(9.0, abs=1e-13)

    def test_equality_locus(self):
        w = Weights(1.3, 0.7)
        x, p, q = 2.0, 0.9, 1.1
        y = p * w.w_b * x / (q * w.w_a)
        assert pointwise_ineq_general(x, y, w, p, q).direct == pytest.approx(0.0, abs=1e-28)

    @given(st.floats(0, 10), st.floats(0, 10), st.floats(0.1, 5), st.floats(0.1, 5), st.floats(-5, 5), st.floats(-5, 5))
    def test_identity(self, x, y, a, b, p, q):
        m = pointwise_ineq_general(x, y, Weights(a, b), p, q)
        assert m.direct >= 0
        scale = (a * a + b * b * (1 + p * p) + a * a * q * q + 2 * abs(p * q) * a * b) * (x * x + y * y) + 1.0
        assert abs(m.direct - m.difference) <= 1e-12 * scale

    def test_gradient_lemma(self, twisted):
        g_rho, g_theta = gradient_bounds(twisted)
        assert g_rho.min() >= 0 and g_theta.min() >= -1e-12


class TestEnergyBound:
    def test_predicted_equals_minimum_elastic(self, energy_23):
        assert energy_bound_predicted(energy_23, Weights()) == pytest.approx(52 * math.pi / 3, rel=1e-12)

    def test_predicted_equals_minimum_non_elastic(self):
        k = 4.0
        R = (1 + k * k - 0.5 * (1 - k * k)) / (2 * k)
        sol = solve_combined_energy(AnnulusPair(2.0, R), 0.5)
        w = Weights(0.5, 1.0)
        assert energy_bound_predicted(sol, w) == pytest.approx(sol.energy(0.5, 1.0), rel=1e-12)

    def test_lift_is_equality(self, energy_23):
        lift = radial_lift(energy_23.profile, 128, 257)
        cert = verify_energy_lower_bound(lift, energy_23, Weights(), Regime.ELASTIC)
        assert abs(cert.integral_gap_relative) < 1e-3
        assert cert.equality_deviation < 1e-6
        json.loads(cert.to_json())

    def test_competitor_dominates(self, energy_23, twisted):
        cert = verify_energy_lower_bound(twisted, energy_23, Weights())
        assert cert.pointwise_margin_min >= -1e-9
        assert cert.functional_grid > cert.minimum

    def test_non_elastic_twist(self):
        k = 4.0
        R = (1 + k * k - 0.5 * (1 - k * k)) / (2 * k)
        inst = SweepInstance("energy", AnnulusPair(2.0, R), 0.5)
        sol = solve_combined_energy(AnnulusPair(2.0, R), 0.5)
        comp = generate_competitor(PerturbationSpec(inst.profile, 0.1, 0.1, 1, 2, seed=3, twist=0.5), 129, 128,
                                   inst.radial_values).map
        cert = verify_energy_lower_bound(comp, sol, Weights(0.5, 1.0), Regime.NON_ELASTIC)
        assert cert.pointwise_margin_min >= -1e-9
        assert cert.integral_gap_relative > 0

    def test_regime_mismatch(self, energy_23):
        lift = radial_lift(energy_23.profile, 16, 33)
        with pytest.raises(RegimeMismatch):
            verify_energy_lower_bound(lift, energy_23, Weights(), Regime.NON_ELASTIC)
        with pytest.raises(RegimeMismatch):
            verify_energy_lower_bound(lift, energy_23, Weights(0.5, 1.0))


class TestTotalBound:
    def test_predicted_equals_minimum(self, shoot_concave):
        from annulus_minimizers.energy import radial_total_energy

        w = Weights.from_ratios(0.9)
        tb = TotalBound(shoot_concave, w)
        assert tb.predicted() == pytest.approx(radial_total_energy(shoot_concave.profile, w), rel=1e-9)

    def test_lemma_checks(self, shoot_concave):
        lc = lemma_checks(TotalBound(shoot_concave, Weights.from_ratios(0.9)), 64)
        assert lc.q_t_max <= 1e-8
        assert lc.trichotomy_ok
        assert lc.g_t_fd_agreement < 1e-6

    def test_balanced(self, shoot_balanced):
        lift = lift_dense(shoot_balanced, 129, 64)
        cert = verify_total_lower_bound(lift, shoot_balanced, Weights.from_ratios(0.5))
        assert cert.bound_predicted == pytest.approx(cert.minimum, rel=1e-8)
        assert cert.equality_deviation < 1e-8

    def test_neither_is_unavailable(self, shoot_convex):
        with pytest.raises(CertificateUnavailable):
            verify_total_lower_bound(None, shoot_convex, Weights.from_ratios(0.5))

    def test_c_scan(self):
        scan = dict(certified_c_scan(2.0, 3.0, [0.6, 0.9]))
        assert scan[0.9] == "ConcavityCase"
