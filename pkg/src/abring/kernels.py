"""Backend selection for the closed-form amplitude kernel.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
numpy implementation in ``_pykernels`` is used. Setting ``ABRING_PURE_PYTHON=1``
forces the fallback.
"""
import os
from typing import NamedTuple

import numpy as np

from . import _pykernels
from .errors import InvalidParameter

_BACKENDS = {"python": _pykernels.closed_form}

try:
    from . import _ckernels
except ImportError:  # pragma: no cover - depends on the build
    _ckernels = None
else:
    _BACKENDS["cython"] = _ckernels.closed_form

if os.environ.get("ABRING_PURE_PYTHON") == "1" or "cython" not in _BACKENDS:
    BACKEND = "python"
else:
    BACKEND = "cython"


class KernelOutput(NamedTuple):
    r_left: np.ndarray
    t_left: np.ndarray
    r_right: np.ndarray
    t_right: np.ndarray
    det_m: np.ndarray
    chi_abs: np.ndarray


def available_backends():
    return sorted(_BACKENDS)


def closed_form(gamma, phi, k, backend=None):
    """Evaluate the exact amplitudes on broadcast arrays of (gamma, phi, k).

    Returns a :class:`KernelOutput` of flat arrays. Points on the singular
    surface come back as inf/nan; callers decide how to flag them using
    ``chi_abs``, which is the modulus of the shared denominator.
    """
    name = backend or BACKEND
    if name not in _BACKENDS:
        raise InvalidParameter(f"unknown backend {name!r}; available: {', '.join(available_backends())}")
    fn = _BACKENDS[name]
    g, p, q = np.broadcast_arrays(
        np.asarray(gamma, dtype=float),
        np.asarray(phi, dtype=float),
        np.asarray(k, dtype=float),
    )
    g = np.ascontiguousarray(g.ravel())
    p = np.ascontiguousarray(p.ravel())
    q = np.ascontiguousarray(q.ravel())
    n = g.shape[0]
    r = np.empty(n, dtype=complex)
    tl = np.empty(n, dtype=complex)
    tr = np.empty(n, dtype=complex)
    det = np.empty(n, dtype=float)
    chi = np.empty(n, dtype=float)
    fn(g, p, q, r, tl, tr, det, chi)
    # r_right(phi) = r_left(-phi) = r_left
    return KernelOutput(r, tl, r.copy(), tr, det, chi)
