"""Pure-Python Euler-Lagrange integrator; reference for the compiled kernel.

The radial Euler-Lagrange equation of the total combined energy is
integrated in logarithmic variables ``tau = log t``, ``u = log H`` and
``phi = t H' / H``:

    u'   = phi
    phi' = phi (1 - c^2 phi^2) (1 + gamma s^2 phi^2) / (1 + c^2 gamma s^2 phi^3),
    s    = exp(u - tau) = H / t.

The right-hand side is smooth for ``phi > 0``; ``phi = 0`` and
``phi = 1/c`` are equilibria. The stepper is the Dormand-Prince 5(4) pair
with the usual PI-free step-size controller. The compiled module in
``_kernel.pyx`` mirrors this file operation by operation, so both produce the
same step sequence.
"""

import math

import numpy as np

OK, STOPPED, STEP_FAILURE, NEGATIVE_SLOPE, MAX_STEPS = 0, 1, 2, 3, 4

A21 = 1.0 / 5.0
A31, A32 = 3.0 / 40.0, 9.0 / 40.0
A41, A42, A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
A51, A52, A53, A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
A61, A62, A63, A64, A65 = 9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0
B1, B3, B4, B5, B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
E1, E3, E4, E5, E6, E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)
C2, C3, C4, C5 = 0.2, 0.3, 0.8, 8.0 / 9.0


def rhs(tau, u, phi, c2, gamma):
    """Derivatives ``(u', phi')`` in logarithmic variables."""
    s = math.exp(u - tau)
    gs2 = gamma * s * s
    return phi, phi * (1.0 - c2 * phi * phi) * (1.0 + gs2 * phi * phi) / (1.0 + c2 * gs2 * phi * phi * phi)


def step(tau, u, phi, h, c2, gamma, k1u, k1p):
    """One Dormand-Prince step; returns the new state, error estimate and last stage."""
    k2u, k2p = rhs(tau + C2 * h, u + h * A21 * k1u, phi + h * A21 * k1p, c2, gamma)
    k3u, k3p = rhs(tau + C3 * h, u + h * (A31 * k1u + A32 * k2u), phi + h * (A31 * k1p + A32 * k2p), c2, gamma)
    k4u, k4p = rhs(
        tau + C4 * h,
        u + h * (A41 * k1u + A42 * k2u + A43 * k3u),
        phi + h * (A41 * k1p + A42 * k2p + A43 * k3p),
        c2,
        gamma,
    )
    k5u, k5p = rhs(
        tau + C5 * h,
        u + h * (A51 * k1u + A52 * k2u + A53 * k3u + A54 * k4u),
        phi + h * (A51 * k1p + A52 * k2p + A53 * k3p + A54 * k4p),
        c2,
        gamma,
    )
    k6u, k6p = rhs(
        tau + h,
        u + h * (A61 * k1u + A62 * k2u + A63 * k3u + A64 * k4u + A65 * k5u),
        phi + h * (A61 * k1p + A62 * k2p + A63 * k3p + A64 * k4p + A65 * k5p),
        c2,
        gamma,
    )
    un = u + h * (B1 * k1u + B3 * k3u + B4 * k4u + B5 * k5u + B6 * k6u)
    pn = phi + h * (B1 * k1p + B3 * k3p + B4 * k4p + B5 * k5p + B6 * k6p)
    k7u, k7p = rhs(tau + h, un, pn, c2, gamma)
    eu = h * (E1 * k1u + E3 * k3u + E4 * k4u + E5 * k5u + E6 * k6u + E7 * k7u)
    ep = h * (E1 * k1p + E3 * k3p + E4 * k4p + E5 * k5p + E6 * k6p + E7 * k7p)
    return un, pn, eu, ep, k7u, k7p


def _locate_stop(tau, u, phi, h, c2, gamma, k1u, k1p, s_stop, side):
    lo, hi = 0.0, h
    un, pn = u, phi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        un, pn, _, _, _, _ = step(tau, u, phi, mid, c2, gamma, k1u, k1p)
        g = (un - (tau + mid)) - math.log(s_stop)
        if g == 0.0:
            return tau + mid, un, pn
        if (g > 0.0) == (side > 0.0):
            lo = mid
        else:
            hi = mid
        if abs(hi - lo) <= 1e-15 * max(1.0, abs(tau)):
            break
    mid = 0.5 * (lo + hi)
    un, pn, _, _, _, _ = step(tau, u, phi, mid, c2, gamma, k1u, k1p)
    return tau + mid, un, pn


def integrate(q, c, gamma, tau_end, tau_out, rtol=1e-10, atol=1e-10, s_stop=0.0, max_steps=1_000_000):
    """Integrate from ``tau = 0`` (``H = 1``, ``H' = q``) towards ``tau_end``.

    Parameters
    ----------
    tau_out : array_like
        Output abscissae, ordered in the direction of integration and lying
        between 0 and ``tau_end``. Steps are shortened to land on them.
    s_stop : float
        When positive, stop as soon as ``H / t`` crosses this value.

    Returns
    -------
    tuple
        ``(u_out, phi_out, tau, u, phi, status, n_steps, k_min, k_max)`` where
        ``k = c phi - 1`` is tracked over all accepted states.
    """
    c2 = c * c
    tau_out = np.asarray(tau_out, dtype=float)
    n_out = tau_out.shape[0]
    u_out = np.full(n_out, np.nan)
    phi_out = np.full(n_out, np.nan)
    direction = 1.0 if tau_end >= 0.0 else -1.0
    tau, u, phi = 0.0, 0.0, float(q)
    k = c * phi - 1.0
    k_min = k_max = k
    j = 0
    while j < n_out and tau_out[j] == 0.0:
        u_out[j], phi_out[j] = u, phi
        j += 1
    if tau_end == 0.0:
        return u_out, phi_out, tau, u, phi, OK, 0, k_min, k_max
    if phi <= 0.0:
        return u_out, phi_out, tau, u, phi, NEGATIVE_SLOPE, 0, k_min, k_max
    log_stop = math.log(s_stop) if s_stop > 0.0 else 0.0
    side = (u - tau) - log_stop
    h_nat = direction * min(1e-2, abs(tau_end))
    k1u, k1p = rhs(tau, u, phi, c2, gamma)
    n_steps = 0
    status = OK
    while True:
        if n_steps >= max_steps:
            status = MAX_STEPS
            break
        target = tau_out[j] if j < n_out else tau_end
        h = h_nat
        hit = False
        if direction * (tau + h - target) >= 0.0:
            h = target - tau
            hit = True
        un, pn, eu, ep, k7u, k7p = step(tau, u, phi, h, c2, gamma, k1u, k1p)
        su = atol + rtol * max(abs(u), abs(un))
        sp = atol + rtol * max(abs(phi), abs(pn))
        err = math.sqrt(0.5 * ((eu / su) ** 2 + (ep / sp) ** 2))
        if not (err <= 1.0):
            # rejected, or non-finite stages
            if err > 1.0 and math.isfinite(err):
                h_nat = h * max(0.2, 0.9 * err**-0.2)
            else:
                h_nat = h * 0.2
            if abs(h_nat) < 1e-14 * max(1.0, abs(tau)):
                status = STEP_FAILURE
                break
            continue
        n_steps += 1
        if s_stop > 0.0:
            g = (un - (tau + h)) - log_stop
            if g == 0.0 or (g > 0.0) != (side > 0.0):
                tau, u, phi = _locate_stop(tau, u, phi, h, c2, gamma, k1u, k1p, s_stop, side)
                status = STOPPED
                break
        tau = target if hit else tau + h
        u, phi = un, pn
        if phi <= 0.0:
            status = NEGATIVE_SLOPE
            break
        k1u, k1p = k7u, k7p
        k = c * phi - 1.0
        if k < k_min:
            k_min = k
        if k > k_max:
            k_max = k
        if not hit:
            h_nat = h * (5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err**-0.2)))
            continue
        while j < n_out and tau_out[j] == tau:
            u_out[j], phi_out[j] = u, phi
            j += 1
        if tau == tau_end:
            break
    return u_out, phi_out, tau, u, phi, status, n_steps, k_min, k_max
