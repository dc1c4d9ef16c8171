"""Quantum Fisher information and symmetric logarithmic derivatives."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .linalg import (
    LinalgError,
    SpectralDecomposition,
    as_hermitian,
    commutator,
    herm_eig,
    projector,
)
from .states import (
    MeasurementBasis,
    PureUnitaryFamily,
    default_step,
    derivative_rho,
    family_eval,
    measurement_probs,
    richardson_derivative,
    richardson_second_derivative,
    _check_range,
)

SLD_CUTOFF = 1e-10
VANISHING_PROB = 1e-12
VANISHING_SLOPE = 1e-6


class DegenerateSupportError(ValueError):
    """The derivative of rho lives entirely outside the support of rho."""


class SingularOutcomeError(ValueError):
    """An outcome with zero probability has a nonzero first derivative."""


@dataclass(frozen=True, eq=False)
class SLDResult:
    L: np.ndarray
    spectrum: SpectralDecomposition
    seminorm: float
    support_rank: int
    rho: np.ndarray

    @property
    def qfi(self):
        """``tr(L^2 rho)``."""
        return float(np.trace(self.L @ self.L @ self.rho).real)


@dataclass(frozen=True, eq=False)
class QfiSplit:
    """Classical / non-classical split of the QFI of a two-member ensemble."""

    total: float
    classical: float
    nonclassical: float
    omega: complex
    ratio: float
    L: Optional[np.ndarray] = None
    sld_gap: float = 0.0


def qfi_pure(psi, h, t=1.0):
    """``4 t^2 Var(h)`` for the family ``exp(-i lam t h)|psi>``."""
    psi = np.asarray(psi, dtype=complex)
    h = as_hermitian(h)
    hp = h @ psi
    mean = np.vdot(psi, hp).real
    second = np.vdot(hp, hp).real
    return float(4.0 * t * t * max(second - mean * mean, 0.0))


def sld(rho, drho, cutoff=SLD_CUTOFF):
    """Solve ``(L rho + rho L) / 2 = drho`` in the eigenbasis of ``rho``.

    Elements with ``p_j + p_k <= cutoff`` are set to zero, i.e. ``L`` is
    fixed to vanish on the kernel of ``rho``.
    """
    rho = as_hermitian(rho, tol=1e-10)
    drho = as_hermitian(drho, tol=1e-8)
    scale = max(1.0, float(np.abs(drho).max()))
    if abs(np.trace(drho)) > 1e-8 * scale:
        raise LinalgError(f"drho is not traceless (trace {np.trace(drho)!r})")
    w, v = herm_eig(rho)
    d_eig = v.conj().T @ drho @ v
    l_eig = _kernels.sld_eigbasis(w, d_eig, cutoff)
    kept = (w[:, None] + w[None, :]) > cutoff
    if np.abs(d_eig).max() > 1e-12 * scale and np.abs(d_eig[kept]).max(initial=0.0) <= 1e-12 * scale:
        raise DegenerateSupportError("drho is supported only on the kernel of rho")
    L = v @ l_eig @ v.conj().T
    L = 0.5 * (L + L.conj().T)
    spec = herm_eig(L)
    return SLDResult(
        L=L,
        spectrum=spec,
        seminorm=float(spec.eigenvalues[-1] - spec.eigenvalues[0]),
        support_rank=int((w > cutoff).sum()),
        rho=rho,
    )


def family_sld(f, lam, step=None, cutoff=SLD_CUTOFF):
    return sld(family_eval(f, lam), derivative_rho(f, lam, step), cutoff)


def qfi_mixed(f, lam, step=None, cutoff=SLD_CUTOFF):
    """QFI ``tr(L^2 rho)`` from the numerical SLD of any family."""
    return family_sld(f, lam, step, cutoff).qfi


def bloch_vector(rho):
    rho = np.asarray(rho)
    return np.array([2.0 * rho[0, 1].real, -2.0 * rho[0, 1].imag, (rho[0, 0] - rho[1, 1]).real])


def _seven_point(fun, x, h):
    # sixth-order central stencil; deliberately not the Richardson path
    c = (1.0 / 60.0, -3.0 / 20.0, 3.0 / 4.0)
    acc = 0.0
    for k, ck in zip((3, 2, 1), c):
        acc = acc + ck * (np.asarray(fun(x + k * h)) - np.asarray(fun(x - k * h)))
    return acc / h


def qfi_bloch_oracle(f, lam, step=None):
    """Qubit QFI from the Bloch vector ``r(lam)``.

    ``|r'|^2 + (r . r')^2 / (1 - |r|^2)`` for mixed states, ``|r'|^2`` for
    pure ones (``|r| = 1`` within 1e-9).
    """
    if f.dim != 2:
        raise ValueError(f"Bloch-vector QFI needs a qubit, got dimension {f.dim}")
    h = 0.5 * default_step(lam) if step is None else float(step)
    _check_range(f, lam, margin=3 * h)

    def r_of(x):
        return bloch_vector(f.rho(x))

    r = r_of(lam)
    dr = _seven_point(r_of, lam, h)
    rr = float(r @ r)
    if abs(rr - 1.0) <= 1e-9:
        return float(dr @ dr)
    return float(dr @ dr + (r @ dr) ** 2 / (1.0 - rr))


def variance_identity_check(result, rho=None):
    """Compare ``tr(L^2 rho)`` with the spectral variance expression.

    Returns ``(lhs, rhs, residual)`` with
    ``rhs = 1/2 sum (l - l')^2 p_l p_l' + (sum l p_l)^2``.
    """
    rho = result.rho if rho is None else np.asarray(rho)
    lhs = float(np.trace(result.L @ result.L @ rho).real)
    ell, vecs = result.spectrum
    p = np.einsum("ik,ij,jk->k", vecs.conj(), rho, vecs).real
    diff = ell[:, None] - ell[None, :]
    rhs = 0.5 * float(np.sum(diff * diff * np.outer(p, p))) + float(ell @ p) ** 2
    return lhs, rhs, abs(lhs - rhs)


def _fix_phase(v, tol=1e-12):
    idx = np.flatnonzero(np.abs(v) > tol)
    if idx.size:
        a = v[idx[0]]
        v = v * (abs(a) / a)
    return v


def sld_measurement(result, degeneracy_tol=1e-9):
    """Projective measurement in the eigenbasis of the SLD.

    Degenerate eigenspaces get a deterministic basis: the standard basis
    vectors are projected into the block in order and Gram-Schmidt
    orthonormalized. Every vector has its first nonzero component made
    real positive.
    """
    w, v = result.spectrum
    d = w.shape[0]
    tol = degeneracy_tol * max(1.0, float(w[-1] - w[0]))
    cols = []
    start = 0
    while start < d:
        stop = start + 1
        while stop < d and w[stop] - w[stop - 1] <= tol:
            stop += 1
        block = v[:, start:stop]
        if stop - start == 1:
            cols.append(_fix_phase(block[:, 0]))
        else:
            proj = block @ block.conj().T
            found = []
            for k in range(d):
                u = proj[:, k].copy()
                for b in found:
                    u -= np.vdot(b, u) * b
                n = np.linalg.norm(u)
                if n > 1e-8:
                    found.append(u / n)
                if len(found) == stop - start:
                    break
            cols.extend(_fix_phase(b) for b in found)
        start = stop
    return MeasurementBasis(np.stack(cols, axis=1), label="sld")


def _fisher_sum(p, dp, second):
    """``sum (p')^2 / p``; ``second()`` gives ``p''`` and is only called if needed."""
    total = 0.0
    d2p = second() if (np.asarray(p) < VANISHING_PROB).any() else np.zeros(len(p))
    for pm, dpm, d2pm in zip(p, dp, d2p):
        if pm >= VANISHING_PROB:
            total += dpm * dpm / pm
        elif abs(dpm) > VANISHING_SLOPE:
            raise SingularOutcomeError(
                f"outcome probability {pm!r} vanishes with nonzero slope {dpm!r}"
            )
        else:
            # p ~ p''/2 (lam - lam0)^2  =>  (p')^2 / p -> 2 p''
            total += max(2.0 * d2pm, 0.0)
    return total


def classical_fisher(f, basis, lam, step=None):
    """Fisher information of the outcome distribution of a fixed basis.

    Outcomes whose probability vanishes at ``lam`` contribute their smooth
    limit ``2 p''``; a vanishing outcome with a nonzero slope is an error.
    """
    step = default_step(lam) if step is None else float(step)
    _check_range(f, lam, margin=step)

    def probs(x):
        return measurement_probs(f.rho(x), basis).p

    p = probs(lam)
    dp = richardson_derivative(probs, lam, step)
    return float(_fisher_sum(p, dp, lambda: richardson_second_derivative(probs, lam, 10.0 * step)))


def _gauge_fixed(phi, lam):
    ref = np.asarray(phi(lam), dtype=complex)

    def fixed(x):
        v = np.asarray(phi(x), dtype=complex)
        ov = np.vdot(ref, v)
        return v * (abs(ov) / ov) if abs(ov) > 0 else v

    return fixed


def two_level_decompose(p1, phi1, p2, phi2, lam, step=None, check_sld=True):
    """QFI split ``F_Q = F_c + |Omega|^2`` for ``p1|phi1><phi1| + p2|phi2><phi2|``.

    All arguments except ``lam``/``step`` are callables of the parameter.
    The SLD assembled from the ensemble is cross-checked against ``sld``.
    """
    step = default_step(lam) if step is None else float(step)
    a, b = float(p1(lam)), float(p2(lam))
    if abs(a + b - 1.0) > 1e-10:
        raise ValueError(f"ensemble weights sum to {a + b!r}")
    g1, g2 = _gauge_fixed(phi1, lam), _gauge_fixed(phi2, lam)
    v1, v2 = g1(lam), g2(lam)
    if abs(np.vdot(v1, v2)) > 1e-10:
        raise ValueError("ensemble members are not orthogonal")

    def weights(x):
        return np.array([p1(x), p2(x)], dtype=float)

    w = weights(lam)
    dw = richardson_derivative(weights, lam, step)
    f_c = _fisher_sum(w, dw, lambda: richardson_second_derivative(weights, lam, 10.0 * step))
    dv1 = richardson_derivative(g1, lam, step)
    dv2 = richardson_derivative(g2, lam, step)
    omega = complex(2.0 * a * np.vdot(dv1, v2) + 2.0 * b * np.vdot(v1, dv2))
    f_nc = abs(omega) ** 2
    total = f_c + f_nc

    L = np.outer(v1, v2.conj()) * omega
    L = L + L.conj().T
    for wi, dwi, vi in zip(w, dw, (v1, v2)):
        if wi >= VANISHING_PROB:
            L = L + (dwi / wi) * projector(vi)

    gap = 0.0
    if check_sld:
        def rho_of(x):
            return p1(x) * projector(phi1(x)) + p2(x) * projector(phi2(x))

        d = richardson_derivative(rho_of, lam, step)
        ref = sld(rho_of(lam), 0.5 * (d + d.conj().T))
        gap = float(np.linalg.norm(ref.L - L))
        if gap > 1e-6 * max(1.0, float(np.linalg.norm(L))):
            raise ValueError(f"ensemble SLD disagrees with the direct solve (gap {gap:.3e})")
    return QfiSplit(
        total=float(total),
        classical=float(f_c),
        nonclassical=float(f_nc),
        omega=omega,
        ratio=float(f_c / total) if total > 0 else 0.0,
        L=L,
        sld_gap=gap,
    )


def spectral_ensemble(f):
    """Eigen-ensemble ``(p1, phi1, p2, phi2)`` of a qubit family, ascending weights."""
    if f.dim != 2:
        raise ValueError("spectral ensemble is only defined for qubits here")

    def eig(x):
        return herm_eig(f.rho(x))

    return (
        lambda x: eig(x).eigenvalues[0],
        lambda x: eig(x).eigenvectors[:, 0],
        lambda x: eig(x).eigenvalues[1],
        lambda x: eig(x).eigenvectors[:, 1],
    )


def spectral_split(f, lam, step=None):
    """``two_level_decompose`` applied to the eigen-ensemble of a qubit family."""
    return two_level_decompose(*spectral_ensemble(f), lam, step)


def classical_part(rho, drho, cutoff=SLD_CUTOFF):
    """``sum_i (dp_i)^2 / p_i`` over the eigenvalues of ``rho`` (Hellmann-Feynman)."""
    w, v = herm_eig(rho)
    dp = np.einsum("ik,ij,jk->k", v.conj(), drho, v).real
    keep = w > cutoff
    return float(np.sum(dp[keep] ** 2 / w[keep]))


def pure_sld_commutator(f, lam):
    """``2i [rho, t h]``: the SLD of a pure unitary family in closed form."""
    if not isinstance(f, PureUnitaryFamily):
        raise TypeError("closed-form SLD needs a pure unitary family")
    rho = f.rho(lam)
    return 2j * commutator(rho, f.time * f.generator)
