# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled Euler-Lagrange integrator.

Operation-for-operation mirror of ``_kernel_py``; see that module for the
equations. No fast-math flags are used, so results agree with the pure
Python version to the last bit on IEEE hardware.
"""

from libc.math cimport exp, log, sqrt, fabs, isfinite, pow

import numpy as np

cdef int OK = 0
cdef int STOPPED = 1
cdef int STEP_FAILURE = 2
cdef int NEGATIVE_SLOPE = 3
cdef int MAX_STEPS = 4

cdef double A21 = 1.0 / 5.0
cdef double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0
cdef double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0
cdef double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0, A53 = 64448.0 / 6561.0, A54 = -212.0 / 729.0
cdef double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0, A63 = 46732.0 / 5247.0, A64 = 49.0 / 176.0, A65 = -5103.0 / 18656.0
cdef double B1 = 35.0 / 384.0, B3 = 500.0 / 1113.0, B4 = 125.0 / 192.0, B5 = -2187.0 / 6784.0, B6 = 11.0 / 84.0
cdef double E1 = 71.0 / 57600.0, E3 = -71.0 / 16695.0, E4 = 71.0 / 1920.0
cdef double E5 = -17253.0 / 339200.0, E6 = 22.0 / 525.0, E7 = -1.0 / 40.0
cdef double C2 = 0.2, C3 = 0.3, C4 = 0.8, C5 = 8.0 / 9.0


cdef struct StepOut:
    double un, pn, eu, ep, k7u, k7p


cdef inline void _rhs(double tau, double u, double phi, double c2, double gamma, double* du, double* dp) nogil:
    cdef double s = exp(u - tau)
    cdef double gs2 = gamma * s * s
    du[0] = phi
    dp[0] = phi * (1.0 - c2 * phi * phi) * (1.0 + gs2 * phi * phi) / (1.0 + c2 * gs2 * phi * phi * phi)


cdef StepOut _step(double tau, double u, double phi, double h, double c2, double gamma,
                   double k1u, double k1p) nogil:
    cdef double k2u, k2p, k3u, k3p, k4u, k4p, k5u, k5p, k6u, k6p
    cdef StepOut o
    _rhs(tau + C2 * h, u + h * A21 * k1u, phi + h * A21 * k1p, c2, gamma, &k2u, &k2p)
    _rhs(tau + C3 * h, u + h * (A31 * k1u + A32 * k2u), phi + h * (A31 * k1p + A32 * k2p), c2, gamma, &k3u, &k3p)
    _rhs(tau + C4 * h,
         u + h * (A41 * k1u + A42 * k2u + A43 * k3u),
         phi + h * (A41 * k1p + A42 * k2p + A43 * k3p), c2, gamma, &k4u, &k4p)
    _rhs(tau + C5 * h,
         u + h * (A51 * k1u + A52 * k2u + A53 * k3u + A54 * k4u),
         phi + h * (A51 * k1p + A52 * k2p + A53 * k3p + A54 * k4p), c2, gamma, &k5u, &k5p)
    _rhs(tau + h,
         u + h * (A61 * k1u + A62 * k2u + A63 * k3u + A64 * k4u + A65 * k5u),
         phi + h * (A61 * k1p + A62 * k2p + A63 * k3p + A64 * k4p + A65 * k5p), c2, gamma, &k6u, &k6p)
    o.un = u + h * (B1 * k1u + B3 * k3u + B4 * k4u + B5 * k5u + B6 * k6u)
    o.pn = phi + h * (B1 * k1p + B3 * k3p + B4 * k4p + B5 * k5p + B6 * k6p)
    _rhs(tau + h, o.un, o.pn, c2, gamma, &o.k7u, &o.k7p)
    o.eu = h * (E1 * k1u + E3 * k3u + E4 * k4u + E5 * k5u + E6 * k6u + E7 * o.k7u)
    o.ep = h * (E1 * k1p + E3 * k3p + E4 * k4p + E5 * k5p + E6 * k6p + E7 * o.k7p)
    return o


def rhs(double tau, double u, double phi, double c2, double gamma):
    """Derivatives ``(u', phi')`` in logarithmic variables."""
    cdef double du, dp
    _rhs(tau, u, phi, c2, gamma, &du, &dp)
    return du, dp


def step(double tau, double u, double phi, double h, double c2, double gamma, double k1u, double k1p):
    """One Dormand-Prince step; returns the new state, error estimate and last stage."""
    cdef StepOut o = _step(tau, u, phi, h, c2, gamma, k1u, k1p)
    return o.un, o.pn, o.eu, o.ep, o.k7u, o.k7p


cdef void _locate_stop(double tau, double u, double phi, double h, double c2, double gamma,
                       double k1u, double k1p, double s_stop, double side,
                       double* tau_o, double* u_o, double* p_o) nogil:
    cdef double lo = 0.0, hi = h, mid, g
    cdef StepOut o
    cdef int it
    for it in range(200):
        mid = 0.5 * (lo + hi)
        o = _step(tau, u, phi, mid, c2, gamma, k1u, k1p)
        g = (o.un - (tau + mid)) - log(s_stop)
        if g == 0.0:
            tau_o[0] = tau + mid
            u_o[0] = o.un
            p_o[0] = o.pn
            return
        if (g > 0.0) == (side > 0.0):
            lo = mid
        else:
            hi = mid
        if fabs(hi - lo) <= 1e-15 * max(1.0, fabs(tau)):
            break
    mid = 0.5 * (lo + hi)
    o = _step(tau, u, phi, mid, c2, gamma, k1u, k1p)
    tau_o[0] = tau + mid
    u_o[0] = o.un
    p_o[0] = o.pn


def integrate(double q, double c, double gamma, double tau_end, tau_out, double rtol=1e-10,
              double atol=1e-10, double s_stop=0.0, long max_steps=1_000_000):
    """Integrate from ``tau = 0`` (``H = 1``, ``H' = q``) towards ``tau_end``.

    Same contract and return tuple as ``_kernel_py.integrate``.
    """
    cdef double c2 = c * c
    cdef double[::1] out_tau = np.ascontiguousarray(tau_out, dtype=float)
    cdef Py_ssize_t n_out = out_tau.shape[0]
    u_arr = np.full(n_out, np.nan)
    p_arr = np.full(n_out, np.nan)
    cdef double[::1] u_out = u_arr
    cdef double[::1] phi_out = p_arr
    cdef double direction = 1.0 if tau_end >= 0.0 else -1.0
    cdef double tau = 0.0, u = 0.0, phi = q
    cdef double k = c * phi - 1.0
    cdef double k_min = k, k_max = k
    cdef Py_ssize_t j = 0
    cdef double log_stop, side, h_nat, h, target, su, sp, err, g
    cdef double k1u, k1p
    cdef bint hit
    cdef long n_steps = 0
    cdef int status = OK
    cdef StepOut o
    while j < n_out and out_tau[j] == 0.0:
        u_out[j] = u
        phi_out[j] = phi
        j += 1
    if tau_end == 0.0:
        return u_arr, p_arr, tau, u, phi, OK, 0, k_min, k_max
    if phi <= 0.0:
        return u_arr, p_arr, tau, u, phi, NEGATIVE_SLOPE, 0, k_min, k_max
    log_stop = log(s_stop) if s_stop > 0.0 else 0.0
    side = (u - tau) - log_stop
    h_nat = direction * min(1e-2, fabs(tau_end))
    _rhs(tau, u, phi, c2, gamma, &k1u, &k1p)
    with nogil:
        while True:
            if n_steps >= max_steps:
                status = MAX_STEPS
                break
            target = out_tau[j] if j < n_out else tau_end
            h = h_nat
            hit = False
            if direction * (tau + h - target) >= 0.0:
                h = target - tau
                hit = True
            o = _step(tau, u, phi, h, c2, gamma, k1u, k1p)
            su = atol + rtol * max(fabs(u), fabs(o.un))
            sp = atol + rtol * max(fabs(phi), fabs(o.pn))
            err = sqrt(0.5 * ((o.eu / su) ** 2 + (o.ep / sp) ** 2))
            if not (err <= 1.0):
                if err > 1.0 and isfinite(err):
                    h_nat = h * max(0.2, 0.9 * pow(err, -0.2))
                else:
                    h_nat = h * 0.2
                if fabs(h_nat) < 1e-14 * max(1.0, fabs(tau)):
                    status = STEP_FAILURE
                    break
                continue
            n_steps += 1
            if s_stop > 0.0:
                g = (o.un - (tau + h)) - log_stop
                if g == 0.0 or (g > 0.0) != (side > 0.0):
                    _locate_stop(tau, u, phi, h, c2, gamma, k1u, k1p, s_stop, side, &tau, &u, &phi)
                    status = STOPPED
                    break
            tau = target if hit else tau + h
            u = o.un
            phi = o.pn
            if phi <= 0.0:
                status = NEGATIVE_SLOPE
                break
            k1u = o.k7u
            k1p = o.k7p
            k = c * phi - 1.0
            if k < k_min:
                k_min = k
            if k > k_max:
                k_max = k
            if not hit:
                if err == 0.0:
                    h_nat = h * 5.0
                else:
                    h_nat = h * min(5.0, max(0.2, 0.9 * pow(err, -0.2)))
                continue
            while j < n_out and out_tau[j] == tau:
                u_out[j] = u
                phi_out[j] = phi
                j += 1
            if tau == tau_end:
                break
    return u_arr, p_arr, tau, u, phi, status, n_steps, k_min, k_max
