"""Hot inner loops, compiled with numba when available.

Every kernel has a pure-numpy twin with an identical signature. The active
backend is chosen once at import time: set ``QFITHERM_DISABLE_JIT=1`` (or run
without numba installed) to use the numpy path. Both paths are always
importable as ``numpy_impl`` / ``numba_impl`` so tests and benchmarks can
compare them directly.
"""

import os
import types

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None


def _env_flag(name):
    return os.environ.get(name, "").strip().lower() in ("1", "true", "yes", "on")


# --------------------------------------------------------------------------
# numpy implementations


def _np_phase_average(coeffs, freqs, lams, weights):
    # rho_jk = sum_n w_n c_j c_k^* exp(-i lam_n (f_j - f_k))
    amps = np.exp(-1j * np.outer(lams, freqs)) * coeffs[None, :]
    return (amps * weights[:, None]).T @ amps.conj()


def _np_shannon_rows(probs):
    p = np.asarray(probs, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0.0, -p * np.log(np.where(p > 0.0, p, 1.0)), 0.0)
    return terms.sum(axis=1)


def _np_lemma_slack_rows(probs):
    p = np.asarray(probs, dtype=np.float64)
    two_log2 = 2.0 * np.log(2.0)
    return _np_shannon_rows(p) + two_log2 * (p * p).sum(axis=1) - two_log2


def _np_sld_eigbasis(evals, drho_eig, cutoff):
    denom = evals[:, None] + evals[None, :]
    keep = denom > cutoff
    out = np.zeros_like(drho_eig)
    out[keep] = 2.0 * drho_eig[keep] / denom[keep]
    return out


numpy_impl = types.SimpleNamespace(
    phase_average=_np_phase_average,
    shannon_rows=_np_shannon_rows,
    lemma_slack_rows=_np_lemma_slack_rows,
    sld_eigbasis=_np_sld_eigbasis,
)


# --------------------------------------------------------------------------
# numba implementations


def _nb_phase_average(coeffs, freqs, lams, weights):
    d = coeffs.shape[0]
    out = np.zeros((d, d), dtype=np.complex128)
    amp = np.empty(d, dtype=np.complex128)
    for n in range(lams.shape[0]):
        lam = lams[n]
        w = weights[n]
        for j in range(d):
            amp[j] = coeffs[j] * np.exp(-1j * lam * freqs[j])
        for j in range(d):
            aj = w * amp[j]
            for k in range(d):
                out[j, k] += aj * np.conj(amp[k])
    return out


def _nb_shannon_rows(probs):
    n, d = probs.shape
    out = np.zeros(n)
    for i in range(n):
        s = 0.0
        for j in range(d):
            x = probs[i, j]
            if x > 0.0:
                s -= x * np.log(x)
        out[i] = s
    return out


def _nb_lemma_slack_rows(probs):
    n, d = probs.shape
    two_log2 = 2.0 * np.log(2.0)
    out = np.zeros(n)
    for i in range(n):
        s = 0.0
        sq = 0.0
        for j in range(d):
            x = probs[i, j]
            if x > 0.0:
                s -= x * np.log(x)
            sq += x * x
        out[i] = s + two_log2 * sq - two_log2
    return out


def _nb_sld_eigbasis(evals, drho_eig, cutoff):
    d = evals.shape[0]
    out = np.zeros((d, d), dtype=np.complex128)
    for j in range(d):
        for k in range(d):
            denom = evals[j] + evals[k]
            if denom > cutoff:
                out[j, k] = 2.0 * drho_eig[j, k] / denom
    return out


if njit is not None:
    numba_impl = types.SimpleNamespace(
        phase_average=njit(cache=True)(_nb_phase_average),
        shannon_rows=njit(cache=True)(_nb_shannon_rows),
        lemma_slack_rows=njit(cache=True)(_nb_lemma_slack_rows),
        sld_eigbasis=njit(cache=True)(_nb_sld_eigbasis),
    )
else:  # pragma: no cover
    numba_impl = None


USE_JIT = numba_impl is not None and not _env_flag("QFITHERM_DISABLE_JIT")
BACKEND = "numba" if USE_JIT else "numpy"
_active = numba_impl if USE_JIT else numpy_impl


def phase_average(coeffs, freqs, lams, weights):
    """Weighted sum of ``|psi(lam)><psi(lam)|`` for a diagonal phase evolution.

    ``coeffs`` are amplitudes in the generator eigenbasis, ``freqs`` the
    eigenvalues of ``t*h``. Returns the accumulated matrix in that eigenbasis.
    """
    return _active.phase_average(
        np.ascontiguousarray(coeffs, dtype=np.complex128),
        np.ascontiguousarray(freqs, dtype=np.float64),
        np.ascontiguousarray(lams, dtype=np.float64),
        np.ascontiguousarray(weights, dtype=np.float64),
    )


def shannon_rows(probs):
    """Shannon entropy (nats) of each row of a 2-D probability array."""
    return _active.shannon_rows(np.ascontiguousarray(np.atleast_2d(probs), dtype=np.float64))


def lemma_slack_rows(probs):
    """Row-wise ``H(p) + 2 log2 sum p^2 - 2 log2``."""
    return _active.lemma_slack_rows(np.ascontiguousarray(np.atleast_2d(probs), dtype=np.float64))


def sld_eigbasis(evals, drho_eig, cutoff):
    """SLD matrix elements ``2 D_jk / (w_j + w_k)`` in the eigenbasis of rho."""
    return _active.sld_eigbasis(
        np.ascontiguousarray(evals, dtype=np.float64),
        np.ascontiguousarray(drho_eig, dtype=np.complex128),
        float(cutoff),
    )
