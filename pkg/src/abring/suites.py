"""Numerical verification suites exposed through ``abring verify``.

Each suite returns a JSON-serialisable dict with a boolean ``passed`` and
the measured worst-case deviations.
"""
import math

import numpy as np

from .eigensystem import (
    Branch,
    bethe_state,
    biorthogonality_report,
    build_hamiltonian,
    eigen_coefficients,
    residual,
    singular_state,
)
from .equivalence import verify_equivalence
from .params import ModelParams, chi_of, eta_of, locus_distance, singularity_locus, xi_pair
from .scattering import (
    det_transfer,
    oracle_amplitudes,
    scattering_amplitudes,
    transfer_matrix,
)

SEED = 20140901


def _random_params(rng, n, gamma=(0.0, 1.5), k=(0.2, math.pi - 0.2), min_distance=1e-3):
    out = []
    while len(out) < n:
        p = ModelParams(rng.uniform(*gamma), rng.uniform(0.0, math.pi / 2), rng.uniform(*k))
        if locus_distance(p) > min_distance:
            out.append(p)
    return out


def suite_uniform(count=100):
    ks = [k for k in np.linspace(0.1, math.pi - 0.1, count + 20) if abs(k - math.pi / 2) >= 0.05][:count]
    dt = dr = 0.0
    for k in ks:
        a = scattering_amplitudes(ModelParams(0.0, 0.0, k))
        dt, dr = max(dt, abs(a.t_left - 1)), max(dr, abs(a.r_left))
    return {"passed": bool(dt < 1e-12 and dr < 1e-12), "max_t_dev": dt, "max_r": dr, "points": len(ks)}


def suite_unitarity(count=500, seed=SEED):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for p in _random_params(rng, count, gamma=(0.0, 0.0)):
        a = scattering_amplitudes(p)
        for r, t in ((a.r_left, a.t_left), (a.r_right, a.t_right)):
            worst = max(worst, abs(abs(r) ** 2 + abs(t) ** 2 - 1.0))
    return {"passed": bool(worst < 1e-10), "max_deviation": worst, "points": count}


def suite_det(size=50):
    worst_ratio = worst_matrix = 0.0
    used = 0
    for g in np.linspace(0.02, 1.5, size):
        for phi in np.linspace(0.0, math.pi / 2, size, endpoint=False):
            if abs(g * math.sin(2 * phi)) <= 1e-3:
                continue
            p = ModelParams(g, phi, math.pi / 2)
            used += 1
            worst_ratio = max(worst_ratio, abs(det_transfer(p) + 1))
            worst_matrix = max(worst_matrix, abs(transfer_matrix(p).det + 1))
    return {"passed": bool(max(worst_ratio, worst_matrix) < 1e-12),
            "max_ratio_dev": worst_ratio, "max_matrix_dev": worst_matrix, "points": used}


def suite_locus(count=100):
    worst = 0.0
    for g in np.linspace(1.0 / count, 1.0, count):
        for phi_c in singularity_locus(float(g)):
            eta = eta_of(g, math.pi / 2)
            xp, xm = xi_pair(g, phi_c, math.pi / 2)
            worst = max(worst, abs(chi_of(eta, xp, xm, math.pi / 2)))
    return {"passed": bool(worst < 1e-12), "max_abs_chi": worst, "points": count}


def suite_oracle(count=1000, seed=SEED):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for p in _random_params(rng, count):
        a, b = scattering_amplitudes(p).as_array(), oracle_amplitudes(p).as_array()
        worst = max(worst, float(np.max(np.abs(a - b))))
    return {"passed": bool(worst < 1e-10), "max_difference": worst, "points": count}


def suite_residuals(count=20, n=60, seed=SEED):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for p in _random_params(rng, count, gamma=(0.05, 1.5), min_distance=1e-2):
        p = p.replace(n_sites=n)
        alpha = rng.normal(size=2) + 1j * rng.normal(size=2)
        coeffs = eigen_coefficients(p, alpha[0], alpha[1])
        for br in (Branch.PSI1, Branch.PSI2, Branch.BAR1, Branch.BAR2):
            h = build_hamiltonian(n, p.gamma, p.phi, dagger=br.barred)
            worst = max(worst, residual(h, bethe_state(p, coeffs, br), 2 * math.cos(p.k)))
    worst_singular = 0.0
    for g in (1.0, math.sin(math.pi / 4)):
        phi_c = singularity_locus(g)[0]
        for sign in (1, -1):
            for barred in (False, True):
                st = singular_state(sign, barred, n, g, phi_c)
                h = build_hamiltonian(n, g, phi_c, dagger=barred)
                worst_singular = max(worst_singular, residual(h, st, 0.0))
    return {"passed": bool(max(worst, worst_singular) < 1e-10),
            "max_bethe_residual": worst, "max_singular_residual": worst_singular}


def suite_biorthogonality(count=20, seed=SEED):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for p in _random_params(rng, count, gamma=(0.05, 1.5), min_distance=1e-2):
        coeffs = eigen_coefficients(p, *(rng.normal(size=2) + 1j * rng.normal(size=2)))
        worst = max(worst, biorthogonality_report(p, coeffs, 4).spinor_identity_error)
    p = ModelParams(0.5, 0.3, 1.2)
    coeffs = eigen_coefficients(p, 1 / math.sqrt(2), 1 / math.sqrt(2))
    off200 = biorthogonality_report(p, coeffs, 200).offdiag
    off400 = biorthogonality_report(p, coeffs, 400).offdiag
    return {"passed": bool(worst < 1e-12 and off400 < 0.6 * off200),
            "max_spinor_identity_error": worst, "offdiag_200": off200, "offdiag_400": off400}


def suite_equivalence(n=20, gammas=(0.0, 0.5, 1.0, 1.5)):
    reports = {str(g): verify_equivalence(n, g).__dict__ for g in gammas}
    passed = all(max(r.values()) < 1e-12 for r in reports.values())
    return {"passed": bool(passed), "n": n, "reports": reports}


SUITES = {
    "uniform": suite_uniform,
    "unitarity": suite_unitarity,
    "det": suite_det,
    "locus": suite_locus,
    "oracle": suite_oracle,
    "residuals": suite_residuals,
    "biorthogonality": suite_biorthogonality,
    "equivalence": suite_equivalence,
}


def run_suite(name: str, **kwargs) -> dict:
    if name == "all":
        return {key: fn() for key, fn in SUITES.items()}
    return {name: SUITES[name](**kwargs)}
