"""Transfer matrix, exact scattering amplitudes and transmission-phase analysis.

Plane waves on the leads are written as::

    psi(j) = A- e^{ikj} + B- e^{-ikj}    (j <= -1)
    psi(j) = B+ e^{ikj} + A+ e^{-ikj}    (j >= 1)

so (A-, A+) are incoming and (B-, B+) outgoing. The transfer matrix maps
(A-, B-) on the left to (B+, A+) on the right.
"""
import cmath
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import kernels
from .eigensystem import build_hamiltonian, site_index
from .errors import (
    DegenerateDivision,
    DivisionByZero,
    InvalidCriticalPoint,
    InvalidParameter,
    SingularSystem,
    SingularTransmission,
)
from .params import (
    DEFAULT_TOL,
    CriticalPoint,
    Kind,
    ModelParams,
    classify,
    derived_quantities,
    dispersion,
)

POLE_TOL = 1e-13
DEGENERATE_TOL = 1e-14
ORACLE_COND_LIMIT = 1e13
LAPSE_THRESHOLD = math.pi / 4
PLATEAU_WINDOW = 8
TRUST_RADIUS = 0.1


def wrap_phase(x):
    """Reduce angles to (-pi, pi]."""
    y = np.asarray(x, dtype=float)
    out = np.pi - np.mod(np.pi - y, 2 * np.pi)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class TransferMatrix:
    m11: complex
    m12: complex
    m21: complex
    m22: complex
    det: complex

    @classmethod
    def from_array(cls, m) -> "TransferMatrix":
        m = np.asarray(m, dtype=complex)
        return cls(complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1]),
                   complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]))

    def as_array(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])


@dataclass(frozen=True)
class ScatteringAmplitudes:
    r_left: complex
    t_left: complex
    r_right: complex
    t_right: complex

    def magnitude(self, name: str = "t_left") -> float:
        return abs(getattr(self, name))

    def phase(self, name: str = "t_left") -> float:
        return cmath.phase(getattr(self, name))

    def as_array(self) -> np.ndarray:
        return np.array([self.r_left, self.t_left, self.r_right, self.t_right])


@dataclass(frozen=True)
class ApproxAmplitude:
    rho: complex
    omega: float
    t_approx: complex
    critical_point: CriticalPoint
    extrapolated: bool = False


@dataclass
class PhaseProfile:
    """Transmission phase and magnitude of t_left along a flux grid.

    ``lapse_events`` holds abrupt phase jumps at transmission maxima,
    ``node_events`` the pi jumps where t_left passes through zero. Each
    event is ``(phi, jump)`` with the jump measured between the phase
    plateaus on either side. ``gaps`` lists fluxes where the amplitude is
    singular and no phase exists.
    """

    phi_samples: np.ndarray
    omega_samples: np.ndarray
    magnitude_samples: np.ndarray
    lapse_events: List[Tuple[float, float]] = field(default_factory=list)
    node_events: List[Tuple[float, float]] = field(default_factory=list)
    gaps: List[float] = field(default_factory=list)

    def excursion(self, phi_ref: float) -> float:
        """max over samples of wrap(Omega(phi) - Omega(phi_ref))."""
        i = int(np.argmin(np.abs(self.phi_samples - phi_ref)))
        diffs = wrap_phase(self.omega_samples - self.omega_samples[i])
        return float(np.nanmax(diffs))


# --- transfer matrix ---------------------------------------------------------

def singular_transfer_matrix(p: ModelParams) -> TransferMatrix:
    """Limit of M on the singular locus: +-[[0, -i], [i, 0]].

    The sign is sign(sin 2phi * sin k); it is + for k = pi/2 and
    phi in (0, pi/2).
    """
    s = math.copysign(1.0, math.sin(2.0 * p.phi) * math.sin(p.k))
    return TransferMatrix(0j, -1j * s, 1j * s, 0j, -1 + 0j)


def modified_transfer_matrix(p: ModelParams) -> Tuple[np.ndarray, complex]:
    """Return (M~, prefactor) with prefactor * M = M~."""
    d = derived_quantities(p)
    a = d.rotation_numerator
    chi = d.chi
    mt = np.array([[-d.chi_abs ** 2, chi * a], [-chi * a, chi * chi]])
    prefactor = (d.eta - d.eta.conjugate()) * d.xi_plus * chi
    return mt, prefactor


def transfer_matrix(p: ModelParams, tol: float = DEFAULT_TOL) -> TransferMatrix:
    if classify(p, tol).kind is Kind.SINGULAR:
        return singular_transfer_matrix(p)
    mt, prefactor = modified_transfer_matrix(p)
    if abs(prefactor) < DEGENERATE_TOL:
        raise DegenerateDivision(
            f"(eta - eta*) xi+ chi = {prefactor!r} vanishes at {p}; "
            "too close to a removable singular surface"
        )
    return TransferMatrix.from_array(mt / prefactor)


def det_transfer(p: ModelParams) -> complex:
    """det M = xi- / xi+.

    xi+ below DEGENERATE_TOL counts as zero: at a float k = pi/2, cos k is
    only rounding noise and the quotient would be meaningless.
    """
    d = derived_quantities(p)
    if abs(d.xi_plus) < DEGENERATE_TOL:
        raise DivisionByZero(f"xi+ = 0 at {p}")
    return complex(d.xi_minus / d.xi_plus)


def transfer_from_amplitudes(amp: ScatteringAmplitudes) -> TransferMatrix:
    """Build M from left- and right-incidence amplitudes.

    Left incidence: (A-, B-) = (1, r_L) -> (B+, A+) = (t_L, 0).
    Right incidence: (A-, B-) = (0, t_R) -> (B+, A+) = (r_R, 1).
    """
    x = np.array([[1.0, 0.0], [amp.r_left, amp.t_right]])
    y = np.array([[amp.t_left, amp.r_right], [0.0, 1.0]])
    return TransferMatrix.from_array(y @ np.linalg.inv(x))


# --- exact amplitudes --------------------------------------------------------

def amplitude_grid(gamma, phi, k, tol: float = POLE_TOL, backend: Optional[str] = None):
    """Vectorised closed-form amplitudes.

    Returns ``(KernelOutput, ok)`` where ``ok`` is False wherever the shared
    denominator is below ``tol``; amplitudes there are set to nan.
    """
    out = kernels.closed_form(gamma, phi, k, backend=backend)
    ok = out.chi_abs >= tol
    if not ok.all():
        for arr in (out.r_left, out.t_left, out.r_right, out.t_right):
            arr[~ok] = np.nan
    return out, ok


def scattering_amplitudes(p: ModelParams, tol: float = POLE_TOL,
                          backend: Optional[str] = None) -> ScatteringAmplitudes:
    out, ok = amplitude_grid(p.gamma, p.phi, p.k, tol=tol, backend=backend)
    if not ok[0]:
        raise SingularTransmission(
            f"|denominator| = {out.chi_abs[0]:.3e} < {tol:g} at {p}: no bounded scattering solution"
        )
    return ScatteringAmplitudes(complex(out.r_left[0]), complex(out.t_left[0]),
                                complex(out.r_right[0]), complex(out.t_right[0]))


def oracle_amplitudes(p: ModelParams) -> ScatteringAmplitudes:
    """Amplitudes from a direct solve of the lattice equations.

    Unknowns are (B-, B+, psi(+), psi(-)); the equations are the rows of a
    small lattice Hamiltonian at sites -1, +, -, +1 with plane waves on the
    leads. Independent of the closed forms.
    """
    h = build_hamiltonian(2, p.gamma, p.phi).entries
    idx = site_index(2)
    e = dispersion(p.k)
    k = p.k
    unknown = {"+": 2, "-": 3}

    def lead_terms(site, incoming):
        # returns (constant, coefficient vector) for psi(site)
        coef = np.zeros(4, dtype=complex)
        a_minus, a_plus = incoming
        if site in ("+", "-"):
            coef[unknown[site]] = 1.0
            return 0j, coef
        if site < 0:
            coef[0] = cmath.exp(-1j * k * site)
            return a_minus * cmath.exp(1j * k * site), coef
        coef[1] = cmath.exp(1j * k * site)
        return a_plus * cmath.exp(-1j * k * site), coef

    solutions = []
    for incoming in ((1.0, 0.0), (0.0, 1.0)):
        mat = np.zeros((4, 4), dtype=complex)
        rhs = np.zeros(4, dtype=complex)
        for row, s in enumerate((-1, "+", "-", 1)):
            for b in idx:
                hsb = h[idx[s], idx[b]] - (e if b == s else 0.0)
                if hsb == 0:
                    continue
                const, coef = lead_terms(b, incoming)
                mat[row] += hsb * coef
                rhs[row] -= hsb * const
        if np.linalg.cond(mat) > ORACLE_COND_LIMIT:
            raise SingularSystem(f"lattice system is rank deficient at {p}")
        solutions.append(np.linalg.solve(mat, rhs))
    left, right = solutions
    return ScatteringAmplitudes(r_left=complex(left[0]), t_left=complex(left[1]),
                                r_right=complex(right[1]), t_right=complex(right[0]))


# --- near-singularity approximation -----------------------------------------

def approx_amplitude(p: ModelParams, cp: CriticalPoint, tol: float = DEFAULT_TOL) -> ApproxAmplitude:
    """Leading-order t_left near a critical point (k_c, phi_c, gamma_c)."""
    k_c, phi_c, gamma_c = cp
    if not (gamma_c > 0.0 and abs(math.cos(k_c)) <= tol
            and abs(math.sin(2.0 * phi_c) ** 2 - gamma_c ** 2) <= tol):
        raise InvalidCriticalPoint(f"{cp} is not on the singular locus")
    s2 = math.sin(2.0 * phi_c)
    assert s2 != 0.0
    dphi = p.phi - phi_c
    dk = p.k - k_c
    rho = complex(
        math.sin(4.0 * phi_c) * dphi + 2.0 * math.cos(4.0 * phi_c) * dphi ** 2 - (p.gamma - gamma_c),
        (2.0 - gamma_c ** 2) * dk,
    )
    omega = wrap_phase(cmath.phase(rho) - math.pi / 2)
    sign = math.copysign(1.0, gamma_c * s2)
    t_approx = gamma_c ** 2 / abs(rho) * sign * cmath.exp(1j * omega) if rho != 0 else complex("nan")
    extrapolated = max(abs(dphi), abs(p.gamma - gamma_c), abs(dk)) > TRUST_RADIUS
    return ApproxAmplitude(rho, omega, t_approx, CriticalPoint(k_c, phi_c, gamma_c), extrapolated)


# --- phase lapse analysis ----------------------------------------------------

def _events(phi, omega, mag, threshold, plateau):
    steps = wrap_phase(np.diff(omega))
    big = np.abs(steps) > threshold
    big &= np.isfinite(steps)
    lapses, nodes = [], []
    n = len(phi)
    i = 0
    runs = []
    while i < len(steps):
        if big[i]:
            j = i
            while j + 1 < len(steps) and big[j + 1]:
                j += 1
            runs.append((i, j))
            i = j + 1
        else:
            i += 1
    for r, (i0, i1) in enumerate(runs):
        lo_limit = runs[r - 1][1] + 1 if r > 0 else 0
        hi_limit = runs[r + 1][0] if r + 1 < len(runs) else n - 1
        lo = max(i0 - plateau, lo_limit)
        hi = min(i1 + 1 + plateau, hi_limit)
        seg = steps[lo:hi]
        jump = float(np.nansum(seg))
        at = i0 + int(np.argmax(np.abs(steps[i0:i1 + 1])))
        where = 0.5 * (phi[at] + phi[at + 1])
        inner = np.nanmax(mag[i0:i1 + 2])
        outer = np.nanmax([mag[lo], mag[hi]])
        (lapses if inner >= outer else nodes).append((float(where), jump))
    return lapses, nodes


def phase_profile(k: float, gamma: float, phi_range: Tuple[float, float], n: int,
                  threshold: float = LAPSE_THRESHOLD, plateau: int = PLATEAU_WINDOW,
                  backend: Optional[str] = None) -> PhaseProfile:
    """Sample Arg(t_left), |t_left| on a uniform flux grid and locate lapses.

    Adjacent-sample phase steps above ``threshold`` (after removing 2pi
    wraps) mark an abrupt change; consecutive marked steps form one event.
    The jump size is the summed phase change from ``plateau`` samples before
    the event to ``plateau`` samples after it.
    """
    lo, hi = phi_range
    if n < 3 or not lo < hi:
        raise InvalidParameter("phase_profile needs n >= 3 and lo < hi")
    phi = np.linspace(lo, hi, n)
    out, ok = amplitude_grid(gamma, phi, k, backend=backend)
    t = out.t_left
    omega = np.angle(t)
    mag = np.abs(t)
    omega[~ok] = np.nan
    mag[~ok] = np.nan
    lapses, nodes = _events(phi, omega, mag, threshold, plateau)
    return PhaseProfile(phi, omega, mag, lapses, nodes, [float(x) for x in phi[~ok]])


def max_phase_shift(k: float, gamma: float, n: int = 10_000,
                    backend: Optional[str] = None) -> float:
    """Maximal flux-driven phase shift max_phi [Omega(phi) - Omega(pi/4)].

    Omega is sampled on ``n`` points over [0, pi/2]; differences are taken
    modulo 2pi into (-pi, pi]. Singular samples are skipped; nan if the
    reference point itself is singular.
    """
    phi = np.linspace(0.0, math.pi / 2, n)
    out, ok = amplitude_grid(gamma, np.append(phi, math.pi / 4), k, backend=backend)
    if not ok[-1]:
        return float("nan")
    omega = np.angle(out.t_left)
    diffs = wrap_phase(omega[:-1][ok[:-1]] - omega[-1])
    return float(np.max(diffs)) if diffs.size else float("nan")
