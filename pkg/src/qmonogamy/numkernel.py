"""Dense linear-algebra primitives used by every other module.

Matrices here never exceed ~100x100, so LAPACK routines from numpy are
called directly and tolerances are kept tight.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import NonFinite, NotAntiHermitian, NotHermitian, NotPSD

HERMITIAN_TOL = 1e-10
CLAMP_TOL = 1e-10
PSD_TOL = 1e-8


class EigResult(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _as_square(h, name: str = "matrix") -> np.ndarray:
    h = np.asarray(h, dtype=np.complex128)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"{name} must be square, got shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise NonFinite(f"{name} contains NaN or Inf")
    return h


def check_hermitian(h, tol: float = HERMITIAN_TOL) -> np.ndarray:
    h = _as_square(h)
    err = np.abs(h - h.conj().T).max(initial=0.0)
    if err > tol:
        raise NotHermitian(f"asymmetry {err:.3e} exceeds {tol:.1e}")
    return h


def hermitian_eig(h) -> EigResult:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Raises
    ------
    NotHermitian
        If ``max|h - h^dagger|`` exceeds ``HERMITIAN_TOL``.
    NonFinite
        If ``h`` has NaN or Inf entries.
    """
    h = check_hermitian(h)
    w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    return EigResult(w[::-1].copy(), v[:, ::-1].copy())


def singular_values(m) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if not np.all(np.isfinite(m)):
        raise NonFinite("matrix contains NaN or Inf")
    if m.size == 0:
        return np.zeros(0)
    return np.linalg.svd(m, compute_uv=False)


def clamp_eigenvalues(w: np.ndarray, tol: float = CLAMP_TOL) -> np.ndarray:
    """Zero out tiny negative eigenvalues; raise on genuinely negative ones."""
    if w.size and w.min() < -PSD_TOL:
        raise NotPSD(f"eigenvalue {w.min():.3e} below -{PSD_TOL:.0e}")
    w = w.copy()
    w[w < 0] = 0.0
    return w


def matrix_sqrt_psd(h) -> np.ndarray:
    w, v = hermitian_eig(h)
    w = clamp_eigenvalues(w)
    return (v * np.sqrt(w)) @ v.conj().T


def unitary_from_generator(a) -> np.ndarray:
    """Return ``exp(a)`` for an anti-Hermitian ``a``.

    ``i*a`` is Hermitian, so the exponential is taken through its
    eigendecomposition rather than a truncated series.
    """
    a = _as_square(a, "generator")
    err = np.abs(a + a.conj().T).max(initial=0.0)
    if err > HERMITIAN_TOL:
        raise NotAntiHermitian(f"a + a^dagger has max entry {err:.3e}")
    h = 1j * a
    w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    return (v * np.exp(-1j * w)) @ v.conj().T
