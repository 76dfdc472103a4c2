"""Unitary maps of the phi = pi/4 interferometer onto simpler lattices.

``transform_u1`` rotates the two center sites into an imaginary-hopping
dimer; ``transform_u2`` then splits the lattice into two decoupled chains
ending in on-site potentials +i*gamma and -i*gamma.

Matrix convention: column ``a`` of a map holds the old basis ket ``|a>``
expanded in the new basis, so operators transform as ``U H U^dagger`` and
states as ``U psi``.
"""
import cmath
import math
from dataclasses import dataclass

import numpy as np

from .eigensystem import (
    HamiltonianMatrix,
    LatticeState,
    _lead_chain,
    build_hamiltonian,
    site_index,
)
from .errors import InvalidParameter

SQRT_HALF = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class BasisMap:
    n_sites: int
    matrix: np.ndarray

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def unitarity_error(self) -> float:
        u = self.matrix
        return float(np.max(np.abs(u @ u.conj().T - np.eye(self.dimension))))

    def conjugate(self, h):
        """Express an operator (matrix or HamiltonianMatrix) in the new basis."""
        entries = h.entries if isinstance(h, HamiltonianMatrix) else np.asarray(h)
        return self.matrix @ entries @ self.matrix.conj().T

    def apply(self, psi):
        amps = psi.amplitudes if isinstance(psi, LatticeState) else np.asarray(psi)
        return self.matrix @ amps

    def compose(self, other: "BasisMap") -> "BasisMap":
        """Map that applies ``self`` first, then ``other``."""
        return BasisMap(self.n_sites, other.matrix @ self.matrix)


def _check(n):
    if n < 2:
        raise InvalidParameter("need N >= 2")


def transform_u1(n: int) -> BasisMap:
    _check(n)
    idx = site_index(n)
    u = np.zeros((2 * n + 2, 2 * n + 2), dtype=complex)
    for j in range(1, n + 1):
        u[idx[-j], idx[-j]] = 1.0
        u[idx[j], idx[j]] = -1j
    lo = SQRT_HALF * cmath.exp(-1j * math.pi / 4)
    hi = SQRT_HALF * cmath.exp(1j * math.pi / 4)
    u[idx["+"], idx["+"]] = lo
    u[idx["-"], idx["+"]] = lo
    u[idx["+"], idx["-"]] = hi
    u[idx["-"], idx["-"]] = -hi
    return BasisMap(n, u)


def transform_u2(n: int) -> BasisMap:
    _check(n)
    idx = site_index(n)
    u = np.zeros((2 * n + 2, 2 * n + 2), dtype=complex)
    s = SQRT_HALF
    for j in range(1, n + 1):
        # left site -j -> (|-j> - |j>)/sqrt2, right site j -> (|j> + |-j>)/sqrt2
        u[idx[-j], idx[-j]] = s
        u[idx[j], idx[-j]] = -s
        u[idx[j], idx[j]] = s
        u[idx[-j], idx[j]] = s
    u[idx["+"], idx["+"]] = s
    u[idx["-"], idx["+"]] = -s
    u[idx["+"], idx["-"]] = s
    u[idx["-"], idx["-"]] = s
    return BasisMap(n, u)


def build_dimer(n: int, gamma: float) -> HamiltonianMatrix:
    """Leads coupled to a two-site center with hopping i*gamma."""
    _check(n)
    idx = site_index(n)
    h = np.zeros((2 * n + 2, 2 * n + 2), dtype=complex)
    _lead_chain(h, idx, n)
    h[idx[-1], idx["+"]] = h[idx["+"], idx[-1]] = 1.0
    h[idx[1], idx["-"]] = h[idx["-"], idx[1]] = 1.0
    h[idx["+"], idx["-"]] = h[idx["-"], idx["+"]] = 1j * gamma
    return HamiltonianMatrix(n, h, math.pi / 4, gamma)


def split_blocks(n: int):
    """Index arrays of the two decoupled chains: (-N..-1, +) and (-, 1..N)."""
    return np.arange(0, n + 1), np.arange(n + 1, 2 * n + 2)


def build_split(n: int, gamma: float) -> HamiltonianMatrix:
    """Direct sum H+ (+) H-: chains ending in +i*gamma and -i*gamma."""
    _check(n)
    idx = site_index(n)
    h = np.zeros((2 * n + 2, 2 * n + 2), dtype=complex)
    _lead_chain(h, idx, n)
    h[idx[-1], idx["+"]] = h[idx["+"], idx[-1]] = 1.0
    h[idx[1], idx["-"]] = h[idx["-"], idx[1]] = 1.0
    h[idx["+"], idx["+"]] = 1j * gamma
    h[idx["-"], idx["-"]] = -1j * gamma
    return HamiltonianMatrix(n, h, math.pi / 4, gamma)


@dataclass(frozen=True)
class EquivalenceReport:
    norm1: float
    norm2: float
    cross_block: float
    unitarity_u1: float
    unitarity_u2: float

    def passed(self, tol: float = 1e-12) -> bool:
        return max(self.norm1, self.norm2, self.cross_block,
                   self.unitarity_u1, self.unitarity_u2) < tol


def verify_equivalence(n: int, gamma: float) -> EquivalenceReport:
    u1, u2 = transform_u1(n), transform_u2(n)
    h = build_hamiltonian(n, gamma, math.pi / 4)
    dimer = build_dimer(n, gamma)
    step1 = u1.conjugate(h)
    full = u2.conjugate(step1)
    a, b = split_blocks(n)
    return EquivalenceReport(
        norm1=float(np.max(np.abs(step1 - dimer.entries))),
        norm2=float(np.max(np.abs(u2.conjugate(dimer) - build_split(n, gamma).entries))),
        cross_block=float(max(np.max(np.abs(full[np.ix_(a, b)])), np.max(np.abs(full[np.ix_(b, a)])))),
        unitarity_u1=u1.unitarity_error(),
        unitarity_u2=u2.unitarity_error(),
    )
