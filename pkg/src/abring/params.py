"""Model configuration and the derived scalars of the interferometer.

The scattering center is a square plaquette: two lead-end sites -1 and +1
coupled to a gain site (+, potential +i*gamma) and a loss site (-, potential
-i*gamma) with Peierls phases exp(+-i*phi)/sqrt(2). The enclosed flux is
4*phi. Hopping is the energy unit.
"""
import cmath
import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .errors import InvalidParameter

DEFAULT_TOL = 1e-12
QUASI_FACTOR = 100.0
# below this |chi| is rounding noise and theta carries no information
THETA_FLOOR = 1e-14


def _reduce_k(k: float) -> float:
    if -math.pi < k <= math.pi:
        return k
    r = math.fmod(k + math.pi, 2.0 * math.pi)
    if r <= 0.0:
        r += 2.0 * math.pi
    return r - math.pi


@dataclass(frozen=True)
class ModelParams:
    """Physical configuration (gamma, phi, k) plus the lead truncation N.

    ``k`` is stored reduced to (-pi, pi]. ``n_sites`` only matters for the
    finite-lattice operations.
    """

    gamma: float
    phi: float
    k: float
    n_sites: int = 60

    def __post_init__(self):
        for name in ("gamma", "phi", "k"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InvalidParameter(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        object.__setattr__(self, "k", _reduce_k(self.k))
        if int(self.n_sites) != self.n_sites or self.n_sites < 2:
            raise InvalidParameter(f"n_sites must be an integer >= 2, got {self.n_sites!r}")
        object.__setattr__(self, "n_sites", int(self.n_sites))

    @property
    def flux(self) -> float:
        """Total Aharonov-Bohm flux, 4*phi."""
        return 4.0 * self.phi

    def replace(self, **changes) -> "ModelParams":
        fields = dict(gamma=self.gamma, phi=self.phi, k=self.k, n_sites=self.n_sites)
        fields.update(changes)
        return ModelParams(**fields)


class CriticalPoint(NamedTuple):
    k_c: float
    phi_c: float
    gamma_c: float


@dataclass(frozen=True)
class DerivedQuantities:
    eta: complex
    xi_plus: float
    xi_minus: float
    chi: complex
    chi_abs: float
    # None when chi == 0; complex when xi_plus * xi_minus < 0
    theta: Optional[complex]
    n_x: Optional[complex]
    n_y: Optional[complex]
    energy: float

    @property
    def rotation_numerator(self) -> complex:
        """|eta|^2 - xi+ xi-, the scalar shared by the beta coefficients and M~."""
        return abs(self.eta) ** 2 - self.xi_plus * self.xi_minus


class Kind(enum.Enum):
    HERMITIAN = "Hermitian"
    REGULAR = "Regular"
    QUASI_SINGULAR = "QuasiSingular"
    SINGULAR = "Singular"


@dataclass(frozen=True)
class SingularityClass:
    kind: Kind
    distance: float


def dispersion(k: float) -> float:
    """Lead band energy 2 cos k."""
    return 2.0 * math.cos(k)


def eta_of(gamma: float, k: float) -> complex:
    return (cmath.exp(2j * k) + 1.0 + gamma * gamma) * cmath.exp(1j * k)


def xi_pair(gamma: float, phi: float, k: float):
    base = 2.0 * math.cos(k) * math.cos(2.0 * phi)
    shift = gamma * math.sin(2.0 * phi)
    return base + shift, base - shift


def chi_of(eta: complex, xi_plus: float, xi_minus: float, k: float) -> complex:
    return (xi_plus * xi_minus - eta.conjugate() ** 2) * cmath.exp(2j * k)


def derived_quantities(p: ModelParams) -> DerivedQuantities:
    eta = eta_of(p.gamma, p.k)
    xi_plus, xi_minus = xi_pair(p.gamma, p.phi, p.k)
    chi = chi_of(eta, xi_plus, xi_minus, p.k)
    chi_abs = abs(chi)
    product = xi_plus * xi_minus
    # principal branch: imaginary root when the product is negative
    root = cmath.sqrt(complex(product))

    theta = None
    if chi_abs > THETA_FLOOR:
        w = abs(eta) ** 2 - product + 2j * eta.imag * root
        theta = -1j * cmath.log(w / chi_abs)
        if product >= 0.0:
            theta = complex(theta.real, 0.0)

    n_x = n_y = None
    if product != 0.0:
        n_x = (xi_plus + xi_minus) / (2.0 * root)
        n_y = 1j * (xi_plus - xi_minus) / (2.0 * root)

    return DerivedQuantities(
        eta=eta,
        xi_plus=xi_plus,
        xi_minus=xi_minus,
        chi=chi,
        chi_abs=chi_abs,
        theta=theta,
        n_x=n_x,
        n_y=n_y,
        energy=dispersion(p.k),
    )


def locus_distance(p: ModelParams) -> float:
    """sqrt(cos^2 k + (sin^2 2phi - gamma^2)^2); zero exactly on the locus."""
    return math.hypot(math.cos(p.k), math.sin(2.0 * p.phi) ** 2 - p.gamma ** 2)


def classify(p: ModelParams, tol: float = DEFAULT_TOL) -> SingularityClass:
    if not tol > 0.0:
        raise InvalidParameter("tol must be positive")
    distance = locus_distance(p)
    on_locus = (
        abs(math.cos(p.k)) <= tol
        and abs(math.sin(2.0 * p.phi) ** 2 - p.gamma ** 2) <= tol
    )
    if on_locus and p.gamma > tol:
        kind = Kind.SINGULAR
    elif abs(p.gamma) <= tol:
        kind = Kind.HERMITIAN
    elif distance <= QUASI_FACTOR * tol:
        kind = Kind.QUASI_SINGULAR
    else:
        kind = Kind.REGULAR
    return SingularityClass(kind, distance)


def singularity_locus(gamma: float) -> list:
    """Fluxes phi_c in [0, pi/2) with sin^2(2 phi_c) = gamma^2, at k = pi/2."""
    if not 0.0 < gamma <= 1.0:
        raise InvalidParameter(f"no real singular flux for gamma={gamma!r}; need 0 < gamma <= 1")
    half = 0.5 * math.asin(gamma)
    if gamma == 1.0:
        return [math.pi / 4.0]
    return [half, math.pi / 2.0 - half]


def critical_point(gamma: float, branch: int = 0) -> CriticalPoint:
    """Critical point (pi/2, phi_c, gamma) on the chosen locus branch."""
    locus = singularity_locus(gamma)
    return CriticalPoint(math.pi / 2.0, locus[min(branch, len(locus) - 1)], gamma)
