import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from annulus_minimizers import _kernel_py, kernels
from annulus_minimizers.energy import radial_total_energy
from annulus_minimizers.errors import DomainError, PreconditionUnmet, SingularStart
from annulus_minimizers.geometry import AnnulusPair, RadialProfile, Weights
from annulus_minimizers.ode_shooting import (
    CaseLabel,
    Concavity,
    DenseSolution,
    case_classify,
    end_value,
    integrate_el_ode,
    phi_at,
    phi_curve,
    phi_limit_suite,
    propo_bounds_check,
    reduced_equation_rhs,
    second_derivative,
    shoot,
    shooting_monotone,
    trajectory,
    v_form_rhs,
)


def symbolic_second_derivative():
    """``H''`` from the Euler-Lagrange equation of the total energy, by sympy."""
    t, c, g = sp.symbols("t c gamma", positive=True)
    H = sp.Function("H")
    h, hd = H(t), H(t).diff(t)
    lag = (g * t + t**2 / (h * hd)) * (c**2 * hd**2 + h**2 / t**2)
    eq = sp.euler_equations(lag, h, t)[0].lhs
    y0, y1, y2 = sp.symbols("y0 y1 y2")
    eq = eq.subs(H(t).diff(t, 2), y2).subs(hd, y1).subs(h, y0)
    sol = sp.solve(sp.Eq(eq, 0), y2)
    assert len(sol) == 1
    return sp.lambdify((t, y0, y1, c, g), sol[0], "math")


SYMBOLIC_HDD = symbolic_second_derivative()


class TestEquation:
    @given(
        st.floats(1.0, 4.0), st.floats(0.5, 10.0), st.floats(0.1, 5.0), st.floats(0.2, 3.0), st.floats(0.1, 5.0)
    )
    def test_matches_symbolic_euler_lagrange(self, t, h, hd, c, g):
        expect = SYMBOLIC_HDD(t, h, hd, c, g)
        got = second_derivative(t, h, hd, c, g)
        assert got == pytest.approx(expect, rel=1e-9, abs=1e-12)

    def test_balanced_power_is_exact(self):
        t = np.linspace(1.0, 3.0, 7)
        c = 0.5
        assert np.allclose(second_derivative(t, t**2, 2 * t, c, 1.0), 2.0, rtol=1e-14)


def solve_ivp_end(q, c, g, r):
    sol = solve_ivp(
        lambda t, y: [y[1], second_derivative(t, y[0], y[1], c, g)],
        (1.0, r), [1.0, q], method="DOP853", rtol=1e-12, atol=1e-13,
    )
    return sol.y[0, -1], sol.y[1, -1]


class TestIntegrator:
    @pytest.mark.parametrize("q,c,g", [(2.2597, 0.9, 1.0), (0.65, 0.5, 1.0), (3.0, 1.3, 0.4), (1.1, 2.0, 3.0)])
    def test_against_solve_ivp(self, q, c, g):
        h, hd = solve_ivp_end(q, c, g, 2.0)
        tr = trajectory(q, c, g, [1.0, 1.5, 2.0])
        assert tr.h[-1] == pytest.approx(h, rel=1e-8)
        assert tr.hdot[-1] == pytest.approx(hd, rel=1e-8)

    def test_backends_bit_identical(self):
        if kernels.BACKEND != "compiled":
            pytest.skip("compiled extension not built")
        out = np.linspace(0.0, math.log(2.0), 33)[1:]
        a = _kernel_py.integrate(2.2597, 0.9, 1.0, math.log(2.0), out)
        b = kernels.integrate(2.2597, 0.9, 1.0, math.log(2.0), out)
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
        assert a[2:] == b[2:] or all(np.array_equal(x, y) for x, y in zip(a[2:], b[2:]))

    def test_integrate_el_ode_profile(self):
        p = integrate_el_ode(2.0, 0.5, 1.0, 2.0, 65)
        assert isinstance(p, RadialProfile)
        assert np.max(np.abs(p.h_values - p.t_nodes**2)) < 1e-12

    def test_domain(self):
        with pytest.raises(DomainError):
            integrate_el_ode(1.0, 0.5, 1.0, 0.5)
        with pytest.raises(DomainError):
            end_value(-1.0, 0.5, 1.0, 2.0)

    @given(st.floats(0.2, 3.0), st.floats(0.3, 2.0))
    def test_shooting_map_monotone(self, q, c):
        assert shooting_monotone(2.0, c, 1.0, [q, q * 1.05, q * 1.1])


class TestCases:
    @pytest.mark.parametrize("q,label", [(2.0, CaseLabel.BALANCED), (3.0, CaseLabel.EXPANDING), (1.5, CaseLabel.CONTRACTING)])
    def test_classify(self, q, label):
        rep = case_classify(q, 0.5)
        assert rep.label is label
        assert rep.consistent


class TestShoot:
    def test_balanced(self, shoot_balanced):
        res = shoot_balanced
        assert res.q == pytest.approx(2.0, abs=1e-4)
        p = res.profile
        assert np.max(np.abs(p.h_values - p.t_nodes**2)) <= 1e-6
        assert res.ode_residual_sup <= 1e-6
        assert res.concavity is Concavity.BALANCED

    def test_convex_instance(self, shoot_convex):
        res = shoot_convex
        assert res.q < 1.0
        assert np.min(res.hddot) >= -1e-8
        assert res.concavity is Concavity.NEITHER

    def test_concave_instance(self, shoot_concave):
        res = shoot_concave
        assert res.concavity is Concavity.CONCAVITY
        assert np.min(res.sign_margin) >= -1e-8
        assert res.end_error < 1e-12

    def test_convexity_via_inverse(self, shoot_concave):
        dual = shoot(AnnulusPair(3.0, 2.0), 1.0 / 0.9, 1.0)
        assert dual.concavity is Concavity.CONVEXITY
        w = Weights.from_ratios(0.9)
        wd = Weights(w.w_b, w.w_a, w.beta, w.alpha)
        # the inverse of a minimizer minimizes the swapped problem with the same value
        a = radial_total_energy(shoot_concave.profile, w)
        b = radial_total_energy(dual.profile, Weights.from_ratios(1 / 0.9))
        assert b * 0.81 == pytest.approx(radial_total_energy(dual.profile, wd), rel=1e-12)
        assert a == pytest.approx(radial_total_energy(dual.profile, wd), rel=1e-8)

    def test_json(self, shoot_balanced):
        import json

        d = json.loads(shoot_balanced.to_json())
        assert d["case"] == "Balanced" and len(d["profile"]["t"]) == shoot_balanced.profile.n_nodes

    def test_propo_bounds(self, shoot_concave):
        rep = propo_bounds_check(shoot_concave)
        names = {c.name: c for c in rep.checks}
        last = names["r < 1/(1 - c^2 + c^2/R)"]
        assert last.satisfied and last.rhs == pytest.approx(2.1739, abs=1e-4)
        assert names["R <= r q c^2"].satisfied

    def test_propo_requires_concavity(self, shoot_convex):
        with pytest.raises(PreconditionUnmet):
            propo_bounds_check(shoot(AnnulusPair(3.0, 2.0), 1.0 / 0.9, 1.0))


class TestDense:
    def test_interpolant(self, shoot_concave):
        dense = DenseSolution.from_shoot(shoot_concave)
        t = np.array([1.0137, 1.5, 1.9876])
        tr = trajectory(shoot_concave.q, 0.9, 1.0, t)
        h, hd, hdd = dense(t)
        assert np.max(np.abs(h - tr.h)) < 1e-9
        assert np.max(np.abs(hd - tr.hdot)) < 1e-8
        f, _ = dense.inverse(h)
        assert np.max(np.abs(f - t)) < 1e-12


class TestPhi:
    def test_reduced_equation_oracle(self):
        # Phi along the full-equation trajectory agrees with a direct solve of the reduced equation
        for q in (0.1, 1.3, 3.0):
            sol = solve_ivp(lambda s, y: reduced_equation_rhs(s, y, 0.5, 1.0), (1.0, 20.0), [q],
                            method="DOP853", rtol=1e-12, atol=1e-14)
            assert phi_at(q, 0.5, 1.0, 20.0) == pytest.approx(sol.y[0, -1], rel=1e-7)

    def test_v_form_agrees(self):
        s, phi = 3.0, 0.4
        v = s * phi
        dv = v_form_rhs(s, v, 0.5)
        assert dv == pytest.approx(phi + s * reduced_equation_rhs(s, phi, 0.5, 1.0), rel=1e-12)

    def test_stationary(self):
        curve = phi_curve(2.0, 0.5)
        assert np.allclose(curve.phi_values, 2.0, rtol=1e-10)
        assert curve.expected_shape() == "constant" and curve.shape_ok()

    @pytest.mark.parametrize("q,shape", [(0.1, "decreasing"), (1.3, "increasing"), (3.0, "decreasing")])
    def test_shapes(self, q, shape):
        curve = phi_curve(q, 0.5)
        assert curve.expected_shape() == shape
        assert curve.shape_ok()

    def test_left_end_for_small_q(self):
        curve = phi_curve(0.5, 0.5)
        left = curve.maximal_interval_hint[0]
        assert 0.05 < left < 1.0
        assert curve.phi_values[0] == pytest.approx(1.0, abs=2e-2)

    def test_singular(self):
        with pytest.raises(SingularStart):
            phi_curve(1.0, 0.5)

    def test_outside_interval(self):
        left = phi_curve(0.5, 0.5).maximal_interval_hint[0]
        assert math.isnan(phi_at(0.5, 0.5, 1.0, left * 0.5))

    def test_limit_suite(self):
        rep = phi_limit_suite(0.5)
        assert rep.all_ok
        by = {s.name: s for s in rep.sequences}
        assert by["q_down_to_1/c"].final_gap < 1e-2
        assert by["q_down_to_0"].final_gap < 1e-2

    def test_csv(self):
        text = phi_curve(3.0, 0.5, n_points=11).to_csv()
        assert text.splitlines()[0] == "s,phi"
