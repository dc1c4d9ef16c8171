"""Time the numba kernels against their numpy twins.

    python3 benchmarks/bench_kernels.py [--repeat N]

Both backends are imported directly, so QFITHERM_DISABLE_JIT does not
matter here. The first numba call is a warm-up and is excluded.
"""

import argparse
import time

import numpy as np

from qfitherm import _kernels


def _cases(rng):
    d = 6
    coeffs = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    coeffs /= np.linalg.norm(coeffs)
    freqs = rng.integers(0, 7, size=d) / 6.0
    lams = np.linspace(0.0, 12 * np.pi, 4097)
    weights = np.full(lams.size, 1.0 / (lams.size - 1))
    probs = rng.dirichlet(np.ones(16), size=100_000)
    evals = np.sort(rng.dirichlet(np.ones(64)))
    drho = rng.standard_normal((64, 64)) + 1j * rng.standard_normal((64, 64))
    drho = drho + drho.conj().T
    return {
        "phase_average (d=6, 4097 nodes)": ("phase_average", (coeffs, freqs, lams, weights)),
        "shannon_rows (1e5 x 16)": ("shannon_rows", (probs,)),
        "lemma_slack_rows (1e5 x 16)": ("lemma_slack_rows", (probs,)),
        "sld_eigbasis (d=64)": ("sld_eigbasis", (evals, drho, 1e-10)),
    }


def _best(fn, args, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _kernels.numba_impl is None:
        raise SystemExit("numba is not importable; nothing to compare")
    rng = np.random.default_rng(0)
    print(f"{'kernel':36s} {'numpy [ms]':>12s} {'numba [ms]':>12s} {'speedup':>8s}  max|diff|")
    for name, (attr, kargs) in _cases(rng).items():
        fnp = getattr(_kernels.numpy_impl, attr)
        fnb = getattr(_kernels.numba_impl, attr)
        ref, got = fnp(*kargs), fnb(*kargs)  # warm-up / compile
        t_np = _best(fnp, kargs, args.repeat)
        t_nb = _best(fnb, kargs, args.repeat)
        diff = float(np.abs(np.asarray(ref) - np.asarray(got)).max())
        print(f"{name:36s} {1e3 * t_np:12.3f} {1e3 * t_nb:12.3f} {t_np / t_nb:8.1f}  {diff:.1e}")


if __name__ == "__main__":
    main()
