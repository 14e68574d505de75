import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from annulus_minimizers.errors import (
    ClassViolation,
    DomainError,
    InvalidMap,
    InvalidProfile,
    NonPositiveJacobian,
    OutOfDomain,
)
from annulus_minimizers.geometry import (
    AnnulusPair,
    PolarGridMap,
    RadialProfile,
    Weights,
    eval_profile,
    map_from_functions,
    radial_lift,
)


def power_profile(k, r=2.0, n=129):
    return RadialProfile.from_function(lambda t: t**k, lambda t: k * t ** (k - 1), r, n)


class TestWeights:
    def test_ratios(self):
        w = Weights(0.5, 2.0, 3.0, 1.5)
        assert w.c == 0.25
        assert w.gamma == 2.0
        assert w.swapped() == Weights(2.0, 0.5, 3.0, 1.5)

    def test_from_ratios(self):
        assert Weights.from_ratios(0.9, 2.0) == Weights(0.9, 1.0, 2.0, 1.0)

    @pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
    def test_rejects_non_positive(self, bad):
        with pytest.raises(DomainError):
            Weights(w_a=bad)


class TestAnnulusPair:
    @pytest.mark.parametrize("r,R", [(1.0, 2.0), (2.0, 0.5), (math.inf, 2.0)])
    def test_rejects(self, r, R):
        with pytest.raises(DomainError):
            AnnulusPair(r, R)

    def test_swapped(self):
        assert AnnulusPair(2.0, 3.0).swapped() == AnnulusPair(3.0, 2.0)


class TestRadialProfile:
    def test_interpolant_matches_nodes(self):
        p = power_profile(2.0)
        h, hd = p(p.t_nodes)
        assert np.allclose(h, p.h_values, rtol=0, atol=1e-15)
        assert np.allclose(hd, p.hdot_values, rtol=0, atol=1e-12)

    def test_interpolant_accuracy_between_nodes(self):
        p = power_profile(3.0, n=257)
        t = np.linspace(1.0, 2.0, 1001)
        h, _ = p(t)
        assert np.max(np.abs(h - t**3)) < 1e-8

    def test_csv_round_trip(self):
        p = power_profile(1.5)
        q = RadialProfile.from_csv(p.to_csv())
        assert np.array_equal(p.t_nodes, q.t_nodes)
        assert np.array_equal(p.h_values, q.h_values)
        assert np.array_equal(p.hdot_values, q.hdot_values)

    def test_csv_file_round_trip(self, tmp_path):
        p = power_profile(1.5)
        path = tmp_path / "p.csv"
        p.to_csv(path)
        assert np.array_equal(RadialProfile.from_csv(path).h_values, p.h_values)

    def test_bad_header(self):
        with pytest.raises(InvalidProfile):
            RadialProfile.from_csv("x,y,z\n1,1,1\n2,2,1\n")

    @pytest.mark.parametrize(
        "t,h,d",
        [
            ([1.0, 2.0], [1.0, 0.5], [1.0, 1.0]),
            ([1.0, 2.0], [1.0, 2.0], [1.0, 0.0]),
            ([1.1, 2.0], [1.0, 2.0], [1.0, 1.0]),
            ([1.0, 2.0], [1.5, 2.0], [1.0, 1.0]),
            ([1.0, 1.0], [1.0, 2.0], [1.0, 1.0]),
        ],
    )
    def test_invariants(self, t, h, d):
        with pytest.raises(InvalidProfile):
            RadialProfile(t, h, d)

    def test_degenerate_start_allowed_when_flagged(self):
        p = RadialProfile([1.0, 1.5, 2.0], [1.0, 1.2, 2.0], [0.0, 1.0, 2.0], degenerate_start=True)
        assert p.hdot_values[0] == 0.0

    def test_inverse_samples(self):
        p = power_profile(2.0, n=257)
        s, f, fd = p.inverse_samples(65)
        assert np.max(np.abs(f - np.sqrt(s))) < 1e-9
        assert np.max(np.abs(fd - 0.5 / np.sqrt(s))) < 1e-6

    def test_eval_profile_domain(self):
        p = power_profile(2.0)
        assert eval_profile(p, 2.0) == (4.0, 4.0)
        with pytest.raises(OutOfDomain):
            eval_profile(p, 2.5)


class TestGridMap:
    def test_identity_derivatives(self):
        p = power_profile(1.0)
        m = radial_lift(p, 64)
        d = m.derivatives
        assert np.allclose(d.jac, 1.0, atol=1e-12)
        assert np.allclose(d.h_n_sq, 1.0, atol=1e-12)
        assert np.allclose(d.h_t_sq, 1.0, atol=1e-12)

    def test_second_order_convergence(self):
        errs = []
        for n in (65, 129, 257):
            m = map_from_functions(lambda t, th: t**2 + 0 * th, lambda t, th: th + 0.3 * np.log(t), 2.0, 4.0, n, 32)
            t = m.t[:, None]
            exact = (2 * t) ** 2 + t**4 * (0.3 / t) ** 2
            errs.append(np.max(np.abs(m.derivatives.h_n_sq - exact)))
        assert errs[0] / errs[1] > 3.5 and errs[1] / errs[2] > 3.5

    def test_nonpositive_jacobian_reports_node(self):
        p = power_profile(1.0)
        m = radial_lift(p, 32)
        th = m.theta_map.copy()
        th[10, 5] -= 0.5
        with pytest.raises(NonPositiveJacobian) as exc:
            PolarGridMap(m.r, m.R, m.rho, th)
        assert exc.value.node[0] == 10
        assert exc.value.t == pytest.approx(m.t[10])

    def test_boundary_class(self):
        p = power_profile(1.0)
        m = radial_lift(p, 32)
        rho = m.rho.copy()
        rho[0, 3] = 1.01
        with pytest.raises(ClassViolation):
            PolarGridMap(m.r, m.R, rho, m.theta_map)

    def test_winding(self):
        p = power_profile(1.0)
        m = radial_lift(p, 32)
        with pytest.raises(ClassViolation):
            PolarGridMap(m.r, m.R, m.rho, 2.0 * m.theta_map)

    def test_shape_mismatch(self):
        with pytest.raises(InvalidMap):
            PolarGridMap(2.0, 2.0, np.ones((4, 4)), np.zeros((4, 5)))

    def test_json_round_trip(self):
        m = radial_lift(power_profile(2.0, n=33), 16)
        m2 = PolarGridMap.from_json(m.to_json())
        assert np.array_equal(m.rho, m2.rho)
        assert np.array_equal(m.theta_map, m2.theta_map)

    def test_malformed_json(self):
        with pytest.raises(InvalidMap):
            PolarGridMap.from_json('{"n_t": 3')

    @given(st.floats(0.5, 3.0), st.floats(1.2, 3.0))
    def test_lift_jacobian_is_radial(self, k, r):
        p = RadialProfile.from_function(lambda t: t**k, lambda t: k * t ** (k - 1), r, 65)
        m = radial_lift(p, 16)
        t = m.t[:, None]
        exact = k * t ** (2 * k - 2)
        assert np.max(np.abs(m.derivatives.jac - exact) / exact) < 5e-3
