"""Dense non-Hermitian eigendecomposition with a deterministic contract.

Eigenvalues are sorted by (Re, Im) ascending with ties kept in solver order;
right eigenvectors are normalized to unit 2-norm and their global phase is
fixed by making the largest-magnitude component real and positive.  Per-mode
residuals ||H v - E v||_2 are recorded so callers can gate on accuracy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ConvergenceError(RuntimeError):
    """The QR iteration failed to converge for at least one eigenvalue."""


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition result; column k of ``eigenvectors`` belongs to
    ``eigenvalues[k]``."""

    eigenvalues: np.ndarray   # (dim,) complex
    eigenvectors: np.ndarray  # (dim, dim) complex, unit-norm columns
    residuals: np.ndarray     # (dim,) real, ||H v - E v||_2

    @property
    def dim(self) -> int:
        return self.eigenvalues.size


@dataclass(frozen=True)
class SpectrumStats:
    """Reality bookkeeping of one spectrum at imaginary-part tolerance tol."""

    n_real: int
    n_complex: int
    max_abs_imag: float
    tol: float


def eigendecompose(h: np.ndarray) -> Spectrum:
    """Full spectrum and right eigenvectors of a dense square matrix.

    The solver is the standard balanced Hessenberg / implicitly shifted QR
    route (LAPACK zgeev).  Output ordering and vector phases follow the
    deterministic contract in the module docstring.
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise ValueError("matrix contains NaN or Inf entries")
    try:
        vals, vecs = np.linalg.eig(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - rare in practice
        raise ConvergenceError(f"eigendecomposition failed: {exc}") from exc

    order = np.lexsort((np.arange(vals.size), vals.imag, vals.real))
    vals = vals[order]
    vecs = vecs[:, order]

    # unit norm, then largest-|component| entry rotated to the positive real axis
    vecs = vecs / np.linalg.norm(vecs, axis=0, keepdims=True)
    for k in range(vals.size):
        lead = int(np.argmax(np.abs(vecs[:, k])))
        pivot = vecs[lead, k]
        vecs[:, k] *= np.abs(pivot) / pivot
        if vecs[lead, k].real < 0:  # guard against pivot being numerically zero
            vecs[:, k] = -vecs[:, k]

    residuals = np.linalg.norm(h @ vecs - vecs * vals[np.newaxis, :], axis=0)
    return Spectrum(eigenvalues=vals, eigenvectors=vecs, residuals=residuals)


def spectrum_statistics(spec: Spectrum, tol: float = 1e-8) -> SpectrumStats:
    """Count real vs complex eigenvalues at imaginary-part tolerance tol."""
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    im = np.abs(spec.eigenvalues.imag)
    n_complex = int(np.sum(im > tol))
    return SpectrumStats(n_real=spec.dim - n_complex, n_complex=n_complex,
                         max_abs_imag=float(im.max(initial=0.0)), tol=tol)
