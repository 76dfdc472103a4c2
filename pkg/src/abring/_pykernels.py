"""Pure-numpy fallback for the closed-form amplitude kernel."""
import numpy as np


def closed_form(gamma, phi, k, r_left, t_left, t_right, det_m, chi_abs):
    g2 = gamma * gamma
    ck = np.cos(k)
    c2p = np.cos(2.0 * phi)
    s2p = np.sin(2.0 * phi)
    xp = 2.0 * ck * c2p + gamma * s2p
    xm = 2.0 * ck * c2p - gamma * s2p
    e2 = np.cos(2.0 * k) + 1j * np.sin(2.0 * k)
    q = (np.cos(k) + 1j * np.sin(k)) * (e2 + 1.0 + g2)
    num = 2j * q.imag
    w = e2.conjugate() + 1.0 + g2
    den = e2 * (xp * xm) - w * w
    with np.errstate(divide="ignore", invalid="ignore"):
        chi_abs[...] = np.abs(den)
        r_left[...] = (np.abs(e2 + 1.0 + g2) ** 2 - xp * xm) / den
        t_left[...] = num * xm / den
        t_right[...] = num * xp / den
        det_m[...] = np.where(xp != 0.0, xm / np.where(xp != 0.0, xp, 1.0), np.nan)
