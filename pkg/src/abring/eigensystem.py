"""Finite-lattice Hamiltonians and exact Bethe-ansatz eigenstates.

Sites are ordered ``-N, ..., -1, '+', '-', 1, ..., N``. The leads are hard
truncated at +-N; those two end sites are excluded from residual checks.
"""
import cmath
import enum
import json
import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from .errors import InvalidParameter, SingularConstruction
from .params import DEFAULT_TOL, DerivedQuantities, ModelParams, derived_quantities, dispersion

CENTER = ("+", "-")
SQRT_HALF = 1.0 / math.sqrt(2.0)


def site_labels(n: int) -> list:
    return list(range(-n, 0)) + list(CENTER) + list(range(1, n + 1))


def site_index(n: int) -> Dict:
    return {label: i for i, label in enumerate(site_labels(n))}


def parity_matrix(n: int) -> np.ndarray:
    """Permutation j -> -j; the two center sites stay put."""
    idx = site_index(n)
    p = np.zeros((2 * n + 2, 2 * n + 2))
    for label, i in idx.items():
        image = label if label in CENTER else -label
        p[idx[image], i] = 1.0
    return p


@dataclass(frozen=True, eq=False)
class HamiltonianMatrix:
    n_sites: int
    entries: np.ndarray
    flux: float
    gamma: float
    dagger: bool = False

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, pair):
        a, b = pair
        idx = site_index(self.n_sites)
        return self.entries[idx[a], idx[b]]


def _lead_chain(h, idx, n):
    for j in range(1, n):
        h[idx[j], idx[j + 1]] = h[idx[j + 1], idx[j]] = 1.0
        h[idx[-j], idx[-j - 1]] = h[idx[-j - 1], idx[-j]] = 1.0


def build_hamiltonian(n: int, gamma: float, phi: float, dagger: bool = False) -> HamiltonianMatrix:
    """Interferometer Hamiltonian (or its adjoint) on 2N + 2 sites."""
    if n < 2:
        raise InvalidParameter("need N >= 2")
    idx = site_index(n)
    h = np.zeros((2 * n + 2, 2 * n + 2), dtype=complex)
    _lead_chain(h, idx, n)
    for sigma, c in ((1, "+"), (-1, "-")):
        h[idx[-1], idx[c]] = SQRT_HALF * cmath.exp(-1j * sigma * phi)
        h[idx[1], idx[c]] = SQRT_HALF * cmath.exp(1j * sigma * phi)
        h[idx[c], idx[-1]] = h[idx[-1], idx[c]].conjugate()
        h[idx[c], idx[1]] = h[idx[1], idx[c]].conjugate()
        h[idx[c], idx[c]] = 1j * gamma * sigma
    if dagger:
        h = h.conj().T.copy()
    h.setflags(write=False)
    return HamiltonianMatrix(n, h, phi, gamma, dagger)


class Branch(enum.Enum):
    PSI1 = "psi1"
    PSI2 = "psi2"
    BAR1 = "bar1"
    BAR2 = "bar2"
    SINGULAR_PLUS = "singular_plus"
    SINGULAR_MINUS = "singular_minus"
    BAR_SINGULAR_PLUS = "bar_singular_plus"
    BAR_SINGULAR_MINUS = "bar_singular_minus"

    @property
    def barred(self) -> bool:
        return self.value.startswith("bar")


class Role(enum.Enum):
    INCOMING = "incoming"
    OUTGOING = "outgoing"


@dataclass(frozen=True)
class SpinorPair:
    minus: complex
    plus: complex
    role: Role

    def __post_init__(self):
        if not (cmath.isfinite(self.minus) and cmath.isfinite(self.plus)):
            raise InvalidParameter("spinor entries must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.minus, self.plus])


def beta_coefficients(d: DerivedQuantities, a_minus: complex, a_plus: complex) -> Tuple[complex, complex]:
    """Outgoing spinor (B-, B+) produced by the incoming spinor (A-, A+).

    B_+- = [(|eta|^2 - xi+ xi-) A_+- + 2i Im(eta) xi_-+ A_-+] / chi.
    """
    a = d.rotation_numerator
    two_i_im = 2j * d.eta.imag
    b_minus = (a * a_minus + two_i_im * d.xi_plus * a_plus) / d.chi
    b_plus = (a * a_plus + two_i_im * d.xi_minus * a_minus) / d.chi
    return b_minus, b_plus


def lambda_coefficient(d: DerivedQuantities, alpha_minus: complex, alpha_plus: complex,
                       sigma: int, sigma_prime: int) -> float:
    """Lambda_{sigma sigma'} entering C = |chi| / sqrt(2|chi|^2 + Lambda).

    The printed expression lacks the operator between its two bracketed
    terms; a ``+`` reproduces the directly normalised C coefficients.
    """
    im = d.eta.imag
    alpha = {1: alpha_plus, -1: alpha_minus}
    w_same = abs(alpha[sigma_prime]) ** 2
    w_other = abs(alpha[-sigma_prime]) ** 2
    cross = (alpha_minus * alpha_plus.conjugate()).imag
    return 4.0 * im * (d.xi_plus - d.xi_minus) * (
        im * (d.xi_plus * w_same - d.xi_minus * w_other)
        + sigma * d.rotation_numerator * cross
    )


@dataclass(frozen=True)
class EigenPairCoefficients:
    alpha_minus: complex
    alpha_plus: complex
    beta1_minus: complex
    beta1_plus: complex
    beta2_minus: complex
    beta2_plus: complex
    c1: float
    c2: float
    c1_bar: float
    c2_bar: float
    # barred partners: beta-bar(phi) = beta(-phi)
    beta1_bar_minus: complex = 0j
    beta1_bar_plus: complex = 0j
    beta2_bar_minus: complex = 0j
    beta2_bar_plus: complex = 0j

    def incoming(self, branch: Branch) -> Tuple[complex, complex]:
        if branch in (Branch.PSI1, Branch.BAR1):
            return self.alpha_minus, self.alpha_plus
        return -self.alpha_plus.conjugate(), self.alpha_minus.conjugate()

    def outgoing(self, branch: Branch) -> Tuple[complex, complex]:
        return {
            Branch.PSI1: (self.beta1_minus, self.beta1_plus),
            Branch.PSI2: (self.beta2_minus, self.beta2_plus),
            Branch.BAR1: (self.beta1_bar_minus, self.beta1_bar_plus),
            Branch.BAR2: (self.beta2_bar_minus, self.beta2_bar_plus),
        }[branch]

    def norm(self, branch: Branch) -> float:
        return {Branch.PSI1: self.c1, Branch.PSI2: self.c2,
                Branch.BAR1: self.c1_bar, Branch.BAR2: self.c2_bar}[branch]


def _normalise(b_minus, b_plus):
    # plane-wave normalisation of a state with |A|^2 = 1
    return 1.0 / math.sqrt(1.0 + abs(b_minus) ** 2 + abs(b_plus) ** 2)


def eigen_coefficients(p: ModelParams, alpha_minus: complex = 1.0, alpha_plus: complex = 0.0,
                       tol: float = DEFAULT_TOL) -> EigenPairCoefficients:
    """beta and C coefficients of the two degenerate states and their partners.

    ``alpha`` is normalised to unit length. C coefficients come from the
    normalisation <psi|psi> = 1 (window-averaged plane waves).
    """
    norm = math.hypot(abs(alpha_minus), abs(alpha_plus))
    if norm == 0.0:
        raise InvalidParameter("alpha must be nonzero")
    am, ap = complex(alpha_minus) / norm, complex(alpha_plus) / norm
    d = derived_quantities(p)
    dbar = derived_quantities(p.replace(phi=-p.phi))
    if d.chi_abs < tol:
        raise SingularConstruction(f"|chi| = {d.chi_abs:.3e} < {tol:g} at {p}")
    b1 = beta_coefficients(d, am, ap)
    b2 = beta_coefficients(d, -ap.conjugate(), am.conjugate())
    bb1 = beta_coefficients(dbar, am, ap)
    bb2 = beta_coefficients(dbar, -ap.conjugate(), am.conjugate())
    return EigenPairCoefficients(
        alpha_minus=am, alpha_plus=ap,
        beta1_minus=b1[0], beta1_plus=b1[1],
        beta2_minus=b2[0], beta2_plus=b2[1],
        c1=_normalise(*b1), c2=_normalise(*b2),
        c1_bar=_normalise(*bb1), c2_bar=_normalise(*bb2),
        beta1_bar_minus=bb1[0], beta1_bar_plus=bb1[1],
        beta2_bar_minus=bb2[0], beta2_bar_plus=bb2[1],
    )


@dataclass(frozen=True, eq=False)
class LatticeState:
    amplitudes: np.ndarray
    n_sites: int
    wavenumber: float
    branch: Branch

    def __post_init__(self):
        if self.amplitudes.shape != (2 * self.n_sites + 2,):
            raise InvalidParameter("amplitude count must be 2N + 2")

    def __getitem__(self, label):
        return self.amplitudes[site_index(self.n_sites)[label]]

    def to_records(self) -> list:
        return [
            {"site": label, "re": float(z.real), "im": float(z.imag)}
            for label, z in zip(site_labels(self.n_sites), self.amplitudes)
        ]

    def to_json(self) -> str:
        return json.dumps(self.to_records())


def _fill_leads(n, k, a_minus, a_plus, b_minus, b_plus, scale):
    j = np.arange(1, n + 1)
    left = a_minus * np.exp(-1j * k * j) + b_minus * np.exp(1j * k * j)   # sites -j
    right = b_plus * np.exp(1j * k * j) + a_plus * np.exp(-1j * k * j)
    psi = np.zeros(2 * n + 2, dtype=complex)
    psi[:n] = scale * left[::-1]
    psi[n + 2:] = scale * right
    return psi


def complete_center(h: HamiltonianMatrix, psi: np.ndarray, energy: float, tol: float = 1e-14) -> np.ndarray:
    """Fill psi(+), psi(-) from the two center-site equations given psi(+-1)."""
    idx = site_index(h.n_sites)
    out = psi.copy()
    for c in CENTER:
        i = idx[c]
        gap = energy - h.entries[i, i]
        if abs(gap) < tol:
            raise SingularConstruction(f"center site {c} equation is degenerate at E={energy}")
        drive = h.entries[i, idx[-1]] * psi[idx[-1]] + h.entries[i, idx[1]] * psi[idx[1]]
        out[i] = drive / gap
    return out


def bethe_state(p: ModelParams, coeffs: EigenPairCoefficients, branch: Branch,
                tol: float = DEFAULT_TOL) -> LatticeState:
    if branch not in (Branch.PSI1, Branch.PSI2, Branch.BAR1, Branch.BAR2):
        raise InvalidParameter(f"{branch} is not a Bethe-state branch; use singular_state")
    if derived_quantities(p).chi_abs < tol:
        raise SingularConstruction(f"chi vanishes at {p}")
    n = p.n_sites
    a_minus, a_plus = coeffs.incoming(branch)
    b_minus, b_plus = coeffs.outgoing(branch)
    scale = coeffs.norm(branch) / math.sqrt(n)
    psi = _fill_leads(n, p.k, a_minus, a_plus, b_minus, b_plus, scale)
    h = build_hamiltonian(n, p.gamma, p.phi, dagger=branch.barred)
    psi = complete_center(h, psi, dispersion(p.k))
    return LatticeState(psi, n, p.k, branch)


def singular_state(sign: int, barred: bool, n: int, gamma: float = 1.0,
                   phi: float = math.pi / 4) -> LatticeState:
    """Lasing (sign=-1) or anti-lasing (sign=+1) state at k = +-pi/2.

    Lead amplitudes are e^{+-i pi j/2} on the left and +-i e^{-+i pi j/2}
    on the right (center factor sign-flipped for the H^dagger partner),
    normalised by 1/sqrt(2N). Center amplitudes use H(gamma, phi), which
    must lie on the locus sin(2 phi) = gamma for the state to be exact.
    """
    if sign not in (1, -1):
        raise InvalidParameter("sign must be +1 or -1")
    k = sign * math.pi / 2
    center = (-1 if barred else 1) * sign * 1j
    # left: e^{ikj} -> A- = 1; right: c e^{-ikj} -> A+ = c
    psi = _fill_leads(n, k, 1.0, center, 0.0, 0.0, 1.0 / math.sqrt(2 * n))
    h = build_hamiltonian(n, gamma, phi, dagger=barred)
    psi = complete_center(h, psi, 0.0)
    if barred:
        branch = Branch.BAR_SINGULAR_PLUS if sign > 0 else Branch.BAR_SINGULAR_MINUS
    else:
        branch = Branch.SINGULAR_PLUS if sign > 0 else Branch.SINGULAR_MINUS
    return LatticeState(psi, n, k, branch)


def spinor_amplitudes(state: LatticeState, k: Optional[float] = None) -> Tuple[SpinorPair, SpinorPair]:
    """Recover (A-, A+) and (B-, B+) from lead samples at |j| = 1, 2."""
    k = state.wavenumber if k is None else k
    basis = lambda j: np.array([[np.exp(1j * k * j), np.exp(-1j * k * j)] for j in j])
    left = np.linalg.solve(basis((-1, -2)), [state[-1], state[-2]])     # (A-, B-)
    right = np.linalg.solve(basis((1, 2)), [state[1], state[2]])        # (B+, A+)
    return (SpinorPair(complex(left[0]), complex(right[1]), Role.INCOMING),
            SpinorPair(complex(left[1]), complex(right[0]), Role.OUTGOING))


def interior_mask(n: int) -> np.ndarray:
    mask = np.ones(2 * n + 2, dtype=bool)
    mask[0] = mask[-1] = False
    return mask


def residual(h: HamiltonianMatrix, state: LatticeState, energy: float,
             include_boundary: bool = False) -> float:
    """max |(H psi - E psi)_j| over sites, excluding j = +-N by default."""
    if h.dimension != state.amplitudes.shape[0]:
        raise InvalidParameter("Hamiltonian and state dimensions differ")
    r = h.entries @ state.amplitudes - energy * state.amplitudes
    if not include_boundary:
        r = r[interior_mask(h.n_sites)]
    return float(np.max(np.abs(r)))


def inner(bra: LatticeState, ket: LatticeState) -> complex:
    return complex(np.vdot(bra.amplitudes, ket.amplitudes))


@dataclass(frozen=True)
class BiorthogonalityReport:
    spinor_identity_error: float
    offdiag: float
    diag: Tuple[complex, complex]
    expected_diag: Tuple[float, float]
    offdiag_21: float


def biorthogonality_report(p: ModelParams, coeffs: EigenPairCoefficients,
                           n: Optional[int] = None, tol: float = DEFAULT_TOL) -> BiorthogonalityReport:
    if n is not None:
        p = p.replace(n_sites=n)
    d = derived_quantities(p)
    if d.chi_abs < tol:
        raise SingularConstruction(f"chi vanishes at {p}")
    chi2 = d.chi_abs ** 2
    err = 0.0
    for plain, bar in ((Branch.PSI1, Branch.BAR1), (Branch.PSI2, Branch.BAR2)):
        a = np.array(coeffs.incoming(plain))
        b = np.array(coeffs.outgoing(plain))
        bb = np.array(coeffs.outgoing(bar))
        err = max(err, abs(chi2 * np.vdot(bb, b) - chi2 * np.vdot(a, a)))
    states = {br: bethe_state(p, coeffs, br, tol) for br in (Branch.PSI1, Branch.PSI2, Branch.BAR1, Branch.BAR2)}
    return BiorthogonalityReport(
        spinor_identity_error=float(err),
        offdiag=abs(inner(states[Branch.BAR1], states[Branch.PSI2])),
        diag=(inner(states[Branch.BAR1], states[Branch.PSI1]),
              inner(states[Branch.BAR2], states[Branch.PSI2])),
        expected_diag=(2 * coeffs.c1_bar * coeffs.c1, 2 * coeffs.c2_bar * coeffs.c2),
        offdiag_21=abs(inner(states[Branch.BAR2], states[Branch.PSI1])),
    )
