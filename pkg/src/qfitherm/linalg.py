"""Dense complex-matrix kernel: Hermitian eigensolve, seminorm, unitary evolution.

Operators are plain ``numpy`` arrays. ``as_hermitian`` is the single entry
point that validates and symmetrizes them; everything downstream assumes
its output.
"""

from typing import NamedTuple

import numpy as np

MAX_DIM = 64
HERMITIAN_TOL = 1e-12
RECONSTRUCTION_TOL = 1e-10


class LinalgError(ValueError):
    """Invalid operator passed to a linear-algebra routine."""


class EigenSolverError(LinalgError):
    """The Hermitian eigensolver did not converge."""

    def __init__(self, message, matrix):
        super().__init__(message)
        self.matrix = matrix


class SpectralDecomposition(NamedTuple):
    """Ascending eigenvalues and matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(a):
    """Return ``a`` as a square complex128 array, checking the dimension cap."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise LinalgError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] > MAX_DIM:
        raise LinalgError(f"dimension {m.shape[0]} exceeds the cap of {MAX_DIM}")
    return m


def as_hermitian(a, tol=HERMITIAN_TOL):
    """Validate ``a`` as Hermitian and return its exactly symmetrized copy.

    The check is ``max|A - A^dagger| <= tol * max(1, max|A|)``.
    """
    m = as_matrix(a)
    scale = max(1.0, float(np.max(np.abs(m), initial=0.0)))
    err = float(np.max(np.abs(m - m.conj().T), initial=0.0))
    if err > tol * scale:
        raise LinalgError(f"matrix is not Hermitian (max deviation {err:.3e})")
    return 0.5 * (m + m.conj().T)


def herm_eig(a):
    m = as_hermitian(a)
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(f"eigh failed: {exc}", m) from exc
    return SpectralDecomposition(w, v)


def seminorm(a):
    """Spectral spread ``lambda_max - lambda_min``; blind to identity shifts."""
    w = herm_eig(a).eigenvalues
    return float(w[-1] - w[0])


def evolve_unitary(h, angle):
    """``exp(-i * angle * h)`` via the spectral decomposition of ``h``."""
    w, v = herm_eig(h)
    return (v * np.exp(-1j * angle * w)) @ v.conj().T


class DensityCheck(NamedTuple):
    ok: bool
    trace: float
    min_eigenvalue: float
    problems: tuple

    def __bool__(self):
        return self.ok


def validate_density(rho, tol=HERMITIAN_TOL):
    """Check unit trace and positive semidefiniteness, both within ``tol``.

    Returns a ``DensityCheck`` that is truthy iff valid and lists the violated
    conditions otherwise. Non-Hermitian input is reported, not raised.
    """
    try:
        m = as_hermitian(rho)
    except LinalgError as exc:
        return DensityCheck(False, float("nan"), float("nan"), (str(exc),))
    tr = float(np.trace(m).real)
    wmin = float(np.linalg.eigvalsh(m)[0])
    problems = []
    if abs(tr - 1.0) > tol:
        problems.append(f"trace {tr!r} differs from 1 by more than {tol:g}")
    if wmin < -tol:
        problems.append(f"negative eigenvalue {wmin!r}")
    return DensityCheck(not problems, tr, wmin, tuple(problems))


def ket(amplitudes, tol=HERMITIAN_TOL):
    """Complex column-free ket, checked to unit norm within ``tol``."""
    v = np.array(amplitudes, dtype=np.complex128).reshape(-1)
    n = np.linalg.norm(v)
    if abs(n - 1.0) > tol:
        raise LinalgError(f"state is not normalized (norm {n!r})")
    return v


def projector(v):
    v = np.asarray(v, dtype=np.complex128)
    return np.outer(v, v.conj())


def commutator(a, b):
    return a @ b - b @ a


def random_unitary(d, rng):
    """Haar-random unitary from the QR decomposition of a Ginibre matrix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    ph = np.diag(r)
    return q * (ph / np.abs(ph))


def random_hermitian(d, rng):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return 0.5 * (z + z.conj().T)


def random_ket(d, rng):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)
