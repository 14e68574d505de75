import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from annulus_minimizers.energy import (
    duality_check,
    grid_energy_report,
    grid_integral,
    invert_profile,
    radial_combined_energy,
    radial_distortion,
    radial_report,
    radial_total_energy,
)
from annulus_minimizers.errors import InversionFailure
from annulus_minimizers.geometry import RadialProfile, Weights, map_from_functions, radial_lift


def power(k, r=2.0, n=257):
    return RadialProfile.from_function(lambda t: t**k, lambda t: k * t ** (k - 1), r, n)


class TestRadial:
    def test_identity(self):
        p = power(1.0)
        rep = radial_report(p, Weights())
        assert rep.combined_energy == pytest.approx(6 * math.pi, rel=1e-13)
        assert rep.combined_distortion == pytest.approx(6 * math.pi, rel=1e-13)
        assert rep.total_hnht == pytest.approx(12 * math.pi, rel=1e-13)

    def test_square_map(self):
        # t -> t^2 on [1, 2]: energy 2 pi int (4 t^3 + t^3) dt = 75 pi / 2
        p = power(2.0)
        assert radial_combined_energy(p, Weights()) == pytest.approx(37.5 * math.pi, rel=1e-12)
        # distortion 2 pi int (t^2 2t / t^2 + t^2 / 2t) dt = 2 pi (3 + 3/4) = 7.5 pi
        assert radial_distortion(p, Weights()) == pytest.approx(7.5 * math.pi, rel=1e-12)

    def test_total_is_combination(self):
        p = power(1.7)
        w = Weights(0.8, 1.3, 2.0, 0.5)
        e = radial_combined_energy(p, w)
        k = radial_distortion(p, w.swapped())
        assert radial_total_energy(p, w) == pytest.approx(2.0 * e + 0.5 * k, rel=1e-13)

    def test_zero_end_slope_is_infinite(self):
        p = RadialProfile([1.0, 1.5, 2.0], [1.0, 1.2, 2.0], [0.0, 1.0, 2.0], degenerate_start=True)
        assert math.isinf(radial_distortion(p, Weights()))


class TestGrid:
    def test_lift_converges_to_radial(self, energy_23):
        w = Weights()
        exact = 52 * math.pi / 3
        errs = []
        for n in (65, 129, 257):
            m = radial_lift(energy_23.profile, 64, n)
            errs.append(abs(grid_energy_report(m, w).combined_energy - exact))
        assert errs[0] / errs[1] > 3.5 and errs[1] / errs[2] > 3.5
        assert errs[-1] / exact < 1e-5

    def test_grid_integral_of_one_is_area(self):
        m = radial_lift(power(1.0, 3.0, 65), 16)
        assert grid_integral(m, np.ones(m.rho.shape)) == pytest.approx(8 * math.pi, rel=1e-13)

    def test_dual_total_equals_hnht_for_radial(self):
        m = radial_lift(power(1.5, 2.0, 129), 32)
        rep = grid_energy_report(m, Weights(1.0, 1.0, 1.0, 1.0))
        assert rep.total_dual == pytest.approx(rep.total_hnht, rel=1e-12)

    def test_grad_distortion_differs_for_twist(self):
        m = map_from_functions(
            lambda t, th: t + 0.2 * (t - 1) * (2 - t) * np.cos(th), lambda t, th: th + 0.5 * np.log(t), 2.0, 2.0, 129, 32
        )
        rep = grid_energy_report(m, Weights(0.5, 1.0))
        assert abs(rep.grad_distortion - rep.combined_distortion) > 1e-3


class TestDuality:
    def test_inverse_profile(self):
        inv = invert_profile(power(2.0, n=513))
        assert np.max(np.abs(inv.h_values - np.sqrt(inv.t_nodes))) < 1e-10

    def test_rejects_non_monotone(self):
        p = RadialProfile([1.0, 1.5, 2.0], [1.0, 1.2, 2.0], [0.0, 1.0, 2.0], degenerate_start=True)
        with pytest.raises(InversionFailure):
            invert_profile(p)

    @given(st.floats(0.3, 3.0), st.floats(1.2, 3.0), st.floats(0.3, 3.0), st.floats(0.3, 3.0))
    def test_energy_of_inverse_is_distortion(self, k, r, wa, wb):
        rep = duality_check(power(k, r, 513), Weights(wa, wb))
        assert rep.relative_gap < 1e-7
