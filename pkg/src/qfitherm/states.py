"""Parametrized state families, measurement bases and outcome statistics."""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from ._kernels import shannon_rows
from .linalg import (
    LinalgError,
    as_hermitian,
    herm_eig,
    ket,
    projector,
    random_unitary,
    validate_density,
)

PROB_CLIP = 1e-12
EPS_ZERO = 1e-15
GRAM_TOL = 1e-10


class FamilyRangeError(ValueError):
    """Parameter outside the validity interval of a state family."""


# --------------------------------------------------------------------------
# families


def commensurate_period(freqs, tol=1e-9, max_denominator=1000):
    """Smallest common period of ``exp(-i lam f_k)`` for all k, or None.

    The distinct gaps ``f_k - f_min`` must be integer multiples of a common
    gap ``g`` (detected by rational approximation); the period is ``2 pi / g``.
    A constant evolution (no nonzero gaps) has no period.
    """
    f = np.sort(np.asarray(freqs, dtype=float))
    gaps = f - f[0]
    scale = max(1.0, float(np.abs(f).max()))
    gaps = gaps[gaps > tol * scale]
    if gaps.size == 0:
        return None
    base = gaps.min()
    denom = 1
    for r in gaps / base:
        frac = Fraction(float(r)).limit_denominator(max_denominator)
        if abs(float(frac) - r) > tol * max(1.0, r):
            return None
        denom = denom * frac.denominator // np.gcd(denom, frac.denominator)
    return 2.0 * np.pi * denom / base


@dataclass(frozen=True, eq=False)
class PureUnitaryFamily:
    """``|psi(lam)> = exp(-i lam t h) |psi>``.

    ``period`` is filled in automatically when the spectrum of ``t*h`` has
    commensurate gaps.
    """

    initial: np.ndarray
    generator: np.ndarray
    time: float = 1.0
    period: Optional[float] = None
    label: str = "pure-unitary"
    interval: tuple = (-np.inf, np.inf)
    _eig: tuple = field(default=None, repr=False)

    def __post_init__(self):
        psi = ket(self.initial)
        h = as_hermitian(self.generator)
        if psi.shape[0] != h.shape[0]:
            raise LinalgError("initial state and generator dimensions differ")
        if self.time < 0:
            raise ValueError("interrogation time must be nonnegative")
        w, v = herm_eig(h)
        object.__setattr__(self, "initial", psi)
        object.__setattr__(self, "generator", h)
        object.__setattr__(self, "_eig", (w, v, v.conj().T @ psi))
        if self.period is None:
            object.__setattr__(self, "period", commensurate_period(self.time * w))

    @property
    def dim(self):
        return self.initial.shape[0]

    @property
    def eigen_coefficients(self):
        """(eigenvalues of h, eigenvectors, amplitudes of psi in that basis)."""
        return self._eig

    def ket(self, lam):
        w, v, c = self._eig
        return v @ (np.exp(-1j * lam * self.time * w) * c)

    def rho(self, lam):
        return projector(self.ket(lam))


@dataclass(frozen=True, eq=False)
class MixedMapFamily:
    """Arbitrary smooth map ``lam -> rho(lam)`` valid on a closed interval."""

    evaluator: Callable[[float], np.ndarray]
    interval: tuple
    label: str = "mixed-map"
    period: Optional[float] = None
    spot_checks: int = 9

    def __post_init__(self):
        lo, hi = self.interval
        if not hi > lo:
            raise ValueError(f"empty validity interval {self.interval}")
        grid = np.linspace(lo, hi, self.spot_checks) if np.isfinite(hi - lo) else [0.0]
        for lam in grid:
            chk = validate_density(self.evaluator(float(lam)), tol=1e-10)
            if not chk:
                raise ValueError(f"{self.label}: invalid density at lam={lam}: {chk.problems}")

    @property
    def dim(self):
        return np.asarray(self.evaluator(float(self.interval[0]))).shape[0]

    def rho(self, lam):
        return as_hermitian(self.evaluator(lam), tol=1e-10)


def _check_range(f, lam, margin=0.0):
    lo, hi = f.interval
    if not (lo <= lam - margin and lam + margin <= hi):
        raise FamilyRangeError(
            f"{f.label}: lam={lam!r} (margin {margin:g}) outside validity interval [{lo}, {hi}]"
        )


def family_eval(f, lam):
    """Density matrix of family ``f`` at parameter ``lam``."""
    _check_range(f, lam)
    return f.rho(lam)


def default_step(lam):
    return 1e-4 * max(1.0, abs(lam))


def richardson_derivative(fun, x, step):
    """Central difference at steps ``step`` and ``step/2`` with one Richardson level.

    Works for scalar- or array-valued ``fun``; error is O(step**4).
    """
    def central(s):
        return (np.asarray(fun(x + s)) - np.asarray(fun(x - s))) / (2.0 * s)

    return (4.0 * central(0.5 * step) - central(step)) / 3.0


def richardson_second_derivative(fun, x, step):
    def central(s):
        return (np.asarray(fun(x + s)) - 2.0 * np.asarray(fun(x)) + np.asarray(fun(x - s))) / (s * s)

    return (4.0 * central(0.5 * step) - central(step)) / 3.0


def derivative_rho(f, lam, step=None):
    """Numerical ``d rho / d lam`` (Hermitian, traceless up to roundoff)."""
    step = default_step(lam) if step is None else float(step)
    _check_range(f, lam, margin=step)
    d = richardson_derivative(f.rho, lam, step)
    return 0.5 * (d + d.conj().T)


def single_qubit_family(p, t=1.0):
    """``exp(-i lam t sigma_z / 2)(sqrt(p)|0> + sqrt(1-p)|1>)``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p!r}")
    return PureUnitaryFamily(
        initial=np.array([np.sqrt(p), np.sqrt(1.0 - p)], dtype=complex),
        generator=SIGMA_Z / 2.0,
        time=t,
        label=f"single-qubit(p={p:g}, t={t:g})",
    )


def quadratic_mixed_rho(lam):
    return 0.5 * np.array([[lam * lam, lam], [lam, 2.0 - lam * lam]], dtype=complex)


def quadratic_mixed_family(delta=1e-3):
    """The qubit map ``rho(lam) = [[lam^2, lam], [lam, 2 - lam^2]] / 2``.

    Positive semidefinite only for ``|lam| <= 1`` (det = lam^2 (1 - lam^2) / 4)
    and pure at the endpoints, so the interval is clipped to ``[delta, 1-delta]``.
    """
    return MixedMapFamily(quadratic_mixed_rho, (delta, 1.0 - delta), label="quadratic-mixed-qubit")


# --------------------------------------------------------------------------
# bases and distributions


@dataclass(frozen=True, eq=False)
class MeasurementBasis:
    """Rank-1 projective measurement; ``vectors[:, m]`` is ``|m>``."""

    vectors: np.ndarray
    label: str = "basis"

    def __post_init__(self):
        v = np.array(self.vectors, dtype=np.complex128)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise LinalgError(f"basis must be a square matrix of columns, got {v.shape}")
        gram_err = np.abs(v.conj().T @ v - np.eye(v.shape[0])).max()
        if gram_err > GRAM_TOL:
            raise LinalgError(f"basis vectors are not orthonormal (Gram error {gram_err:.2e})")
        object.__setattr__(self, "vectors", v)

    @property
    def dim(self):
        return self.vectors.shape[0]

    def __getitem__(self, m):
        return self.vectors[:, m]


@dataclass(frozen=True, eq=False)
class ProbDist:
    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.ndim != 1 or abs(p.sum() - 1.0) > 1e-10 or (p < 0).any():
            raise ValueError(f"not a probability distribution: {p}")
        object.__setattr__(self, "p", p)

    @classmethod
    def from_raw(cls, values, clip=PROB_CLIP):
        """Clip roundoff negatives (down to ``-clip``) to zero and renormalize.

        Entries below ``EPS_ZERO`` in magnitude are treated as exact zeros.
        """
        p = np.asarray(values, dtype=float).copy()
        if (p < -clip).any():
            raise ValueError(f"negative probability {p.min()!r} beyond roundoff")
        p[p < EPS_ZERO] = 0.0
        return cls(p / p.sum())

    def __len__(self):
        return self.p.shape[0]

    def __iter__(self):
        return iter(self.p)

    def entropy(self):
        """Shannon entropy in nats."""
        return float(shannon_rows(self.p[None, :])[0])

    def entropy_bits(self):
        return self.entropy() / np.log(2.0)


def measurement_probs(rho, basis):
    """Outcome distribution ``p_m = <m|rho|m>``."""
    rho = np.asarray(rho)
    if rho.shape != (basis.dim, basis.dim):
        raise LinalgError(f"state of shape {rho.shape} vs basis of dimension {basis.dim}")
    v = basis.vectors
    amps = np.einsum("im,ij,jm->m", v.conj(), rho, v)
    if np.abs(amps.imag).max() > 1e-12 * max(1.0, np.abs(rho).max()):
        raise LinalgError("outcome probabilities have a non-negligible imaginary part")
    return ProbDist.from_raw(amps.real)


def computational_basis(d):
    return MeasurementBasis(np.eye(d), label=f"computational(d={d})")


def pm_basis(p):
    """``{|+_p>, |-_p>}`` with ``|+_p> = sqrt(p)|0> + sqrt(1-p)|1>``."""
    a, b = np.sqrt(p), np.sqrt(1.0 - p)
    return MeasurementBasis(np.array([[a, b], [b, -a]]), label=f"pm_p(p={p:g})")


def phase_basis(phi):
    """``{|+->}`` with ``|+-> = (|0> +- e^{i phi}|1>) / sqrt 2``."""
    e = np.exp(1j * phi)
    return MeasurementBasis(np.array([[1, 1], [e, -e]]) / np.sqrt(2.0), label=f"phase(phi={phi:g})")


def random_basis(d, rng):
    return MeasurementBasis(random_unitary(d, rng), label=f"haar(d={d})")


def nonsld_basis(psi0, psi_perp, q):
    """``{|q>, |qbar>}`` built from a state and an orthogonal partner.

    ``|q> = sqrt(q) psi0 + sqrt(1-q) psi_perp``,
    ``|qbar> = sqrt(1-q) psi0 - sqrt(q) psi_perp``. Only defined on qubits or
    on the span of the two inputs; in higher dimensions the span is completed
    by an orthonormal complement.
    """
    if not 0.0 < q <= 1.0:
        raise ValueError(f"q must lie in (0, 1], got {q!r}")
    a = ket(psi0, tol=1e-10)
    b = ket(psi_perp, tol=1e-10)
    if abs(np.vdot(a, b)) > 1e-10:
        raise LinalgError("psi0 and psi_perp are not orthogonal")
    cols = [np.sqrt(q) * a + np.sqrt(1.0 - q) * b, np.sqrt(1.0 - q) * a - np.sqrt(q) * b]
    d = a.shape[0]
    if d > 2:
        # complement: project the standard basis out of span{a, b}
        span = np.stack([a, b], axis=1)
        comp = np.eye(d) - span @ span.conj().T
        u, s, _ = np.linalg.svd(comp)
        cols.extend(u[:, k] for k in range(d - 2))
    return MeasurementBasis(np.stack(cols, axis=1), label=f"nonsld(q={q:g})")


SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
