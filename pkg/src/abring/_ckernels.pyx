# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled closed-form amplitude kernel.

Same contract as :func:`abring._pykernels.closed_form`. Four trig calls per
point (e^{2ik} comes from squaring e^{ik}) and a single complex division.
The loop runs without the GIL so sweep chunks can be evaluated from worker
threads.
"""
from libc.math cimport cos, sin, sqrt, NAN


cdef inline double _abs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


def closed_form(double[::1] gamma, double[::1] phi, double[::1] k,
                double complex[::1] r_left, double complex[::1] t_left,
                double complex[::1] t_right, double[::1] det_m,
                double[::1] chi_abs):
    cdef Py_ssize_t n = gamma.shape[0]
    cdef Py_ssize_t i
    cdef double g, g2, ck, sk, c2p, s2p, xp, xm
    cdef double complex e1, e2, q, num, den, inv, w
    if not (phi.shape[0] == n and k.shape[0] == n and r_left.shape[0] == n
            and t_left.shape[0] == n and t_right.shape[0] == n
            and det_m.shape[0] == n and chi_abs.shape[0] == n):
        raise ValueError("all kernel arrays must share one length")
    with nogil:
        for i in range(n):
            g = gamma[i]
            g2 = g * g
            ck = cos(k[i])
            sk = sin(k[i])
            c2p = cos(2.0 * phi[i])
            s2p = sin(2.0 * phi[i])
            xp = 2.0 * ck * c2p + g * s2p
            xm = 2.0 * ck * c2p - g * s2p
            e1 = ck + 1j * sk
            e2 = (ck * ck - sk * sk) + 2j * ck * sk
            q = e1 * (e2 + 1.0 + g2)
            # q - conj(q), purely imaginary
            num = 2j * q.imag
            w = e2.conjugate() + 1.0 + g2
            den = e2 * (xp * xm) - w * w
            chi_abs[i] = sqrt(_abs2(den))
            inv = 1.0 / den
            r_left[i] = (_abs2(e2 + 1.0 + g2) - xp * xm) * inv
            t_left[i] = num * xm * inv
            t_right[i] = num * xp * inv
            if xp != 0.0:
                det_m[i] = xm / xp
            else:
                det_m[i] = NAN
