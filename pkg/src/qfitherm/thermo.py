"""Parameter averaging, entropies and the Landauer / QFI heat bounds.

Entropies are in nats throughout. Heat is returned in joules by the
``*_bound`` functions and in units of ``k_B T`` (i.e. as an entropy) by
``memory_cycle``.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.constants import Boltzmann as K_B

from . import _kernels
from .linalg import herm_eig, seminorm, validate_density
from .qfi import qfi_pure
from .states import (
    ProbDist,
    PureUnitaryFamily,
    family_eval,
    measurement_probs,
)

LOG2 = float(np.log(2.0))
CHAIN_TOL = 1e-9
MAX_NODES = 2**20


class AveragingError(RuntimeError):
    """Quadrature did not converge or the averaging interval is undefined."""


class NormalizationError(ValueError):
    """The generator seminorm is not 1."""


@dataclass(frozen=True)
class AveragingSpec:
    """Uniform measure on ``interval``; ``nodes`` trapezoid panels to start."""

    interval: tuple
    nodes: int = 16
    tol: float = 1e-9

    def __post_init__(self):
        lo, hi = self.interval
        if not hi > lo:
            raise ValueError(f"averaging interval {self.interval} is empty")
        k = self.nodes // 16
        if self.nodes < 16 or self.nodes % 16 or k & (k - 1):
            raise ValueError(f"nodes must be 16 times a power of two, got {self.nodes}")

    @classmethod
    def for_family(cls, f, interval=None, **kw):
        """One fundamental period when the family has one, else ``interval``."""
        if interval is None:
            if getattr(f, "period", None) is None:
                raise AveragingError(
                    f"{f.label} has no period; pass an explicit averaging interval"
                )
            interval = (0.0, float(f.period))
        return cls(tuple(float(x) for x in interval), **kw)


def _trapezoid(lo, hi, n):
    lams = np.linspace(lo, hi, n + 1)
    w = np.full(n + 1, 1.0 / n)
    w[0] = w[-1] = 0.5 / n
    return lams, w


def _refine(evaluate, spec):
    n = spec.nodes
    lo, hi = spec.interval
    prev = evaluate(*_trapezoid(lo, hi, n))
    while n < MAX_NODES:
        n *= 2
        cur = evaluate(*_trapezoid(lo, hi, n))
        if np.abs(cur - prev).max() < spec.tol:
            return cur, n
        prev = cur
    raise AveragingError(f"trapezoid average did not converge within {MAX_NODES} panels")


def average_state(f, spec=None):
    """``rho_s``: the uniform parameter average of ``|psi(lam)><psi(lam)|``.

    Composite trapezoid with panel doubling until the entrywise change drops
    below ``spec.tol``. Spectrally accurate over a full period.
    """
    if not isinstance(f, PureUnitaryFamily):
        raise TypeError("average_state expects a pure unitary family")
    spec = AveragingSpec.for_family(f) if spec is None else spec
    w, v, c = f.eigen_coefficients
    freqs = f.time * w

    def evaluate(lams, weights):
        return _kernels.phase_average(c, freqs, lams, weights)

    rho_eig, _ = _refine(evaluate, spec)
    rho = v @ rho_eig @ v.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    chk = validate_density(rho, tol=1e-10)
    if not chk:
        raise AveragingError(f"averaged state is not a density matrix: {chk.problems}")
    return rho


def averaged_probs(f, basis, spec=None):
    """Averaged outcome distribution ``p_m = <m|rho_s|m>``."""
    return measurement_probs(average_state(f, spec), basis)


def averaged_probs_direct(f, basis, spec=None):
    """Same distribution, as the parameter average of per-``lam`` probabilities.

    Independent of ``average_state``; used to check linearity.
    """
    spec = AveragingSpec.for_family(f) if spec is None else spec

    def evaluate(lams, weights):
        rows = np.array([measurement_probs(family_eval(f, x), basis).p for x in lams])
        return weights @ rows

    p, _ = _refine(evaluate, spec)
    return ProbDist.from_raw(p)


def shannon_entropy(p):
    """``-sum p log p`` in nats, with ``0 log 0 = 0``."""
    probs = p.p if isinstance(p, ProbDist) else np.asarray(p, dtype=float)
    return float(_kernels.shannon_rows(probs[None, :])[0])


def von_neumann_entropy(rho):
    w = herm_eig(rho).eigenvalues
    w = w[w > 0.0]
    return float(-(w * np.log(w)).sum()) + 0.0  # no signed zero


def landauer_bound(entropy, temperature):
    """Minimum heat ``k_B T S`` (joules) to erase a memory of entropy ``S`` nats."""
    if temperature <= 0:
        raise ValueError(f"temperature must be positive, got {temperature!r}")
    if entropy < 0:
        raise ValueError(f"entropy must be nonnegative, got {entropy!r}")
    return K_B * temperature * entropy


def qfi_heat_bound(qfi, t, temperature):
    """``k_B T log2 F_Q / t^2`` in joules."""
    if t <= 0:
        raise ValueError(f"interrogation time must be positive, got {t!r}")
    if temperature <= 0:
        raise ValueError(f"temperature must be positive, got {temperature!r}")
    if qfi < 0:
        raise ValueError(f"QFI must be nonnegative, got {qfi!r}")
    return K_B * temperature * LOG2 * qfi / (t * t)


@dataclass(frozen=True)
class BoundReport:
    label: str
    lhs: float
    rhs: float
    tol: float = CHAIN_TOL
    context: dict = field(default_factory=dict)

    @property
    def slack(self):
        return self.lhs - self.rhs

    @property
    def holds(self):
        return self.slack >= -self.tol

    def as_dict(self):
        return {
            "label": self.label,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "holds": self.holds,
            "tol": self.tol,
            "context": dict(self.context),
        }


def normalize_generator(f):
    """Rescale ``(h, t) -> (h / s, s t)`` so that ``seminorm(h) = 1``.

    The family itself and ``F_Q / t^2`` are unchanged.
    """
    s = seminorm(f.generator)
    if s == 0:
        raise NormalizationError("generator is proportional to the identity")
    return PureUnitaryFamily(
        initial=f.initial,
        generator=f.generator / s,
        time=f.time * s,
        period=f.period,
        label=f.label,
    )


def entropy_chain_check(f, basis, spec=None, tol=CHAIN_TOL):
    """Evaluate ``S >= S(rho_s) >= log2 F_Q / t^2`` for a pure unitary family.

    Returns three ``BoundReport``: memory vs von Neumann entropy, von Neumann
    entropy vs QFI term, and the composite. Requires ``seminorm(h) = 1``.
    """
    if not isinstance(f, PureUnitaryFamily):
        raise TypeError("entropy chain needs a pure unitary family")
    s = seminorm(f.generator)
    if abs(s - 1.0) > 1e-9:
        raise NormalizationError(
            f"generator seminorm is {s!r}; rescale h -> h/{s!r} and t -> {s!r}*t "
            "(see normalize_generator)"
        )
    if f.time <= 0:
        raise ValueError("interrogation time must be positive")
    spec = AveragingSpec.for_family(f) if spec is None else spec
    rho_s = average_state(f, spec)
    mem = shannon_entropy(measurement_probs(rho_s, basis))
    vn = von_neumann_entropy(rho_s)
    qterm = LOG2 * qfi_pure(f.initial, f.generator, f.time) / f.time**2
    ctx = {"family": f.label, "basis": basis.label, "t": f.time, "interval": list(spec.interval)}
    return (
        BoundReport("memory_entropy>=vn_entropy", mem, vn, tol, ctx),
        BoundReport("vn_entropy>=log2_qfi", vn, qterm, tol, ctx),
        BoundReport("memory_entropy>=log2_qfi", mem, qterm, tol, ctx),
    )


@dataclass(frozen=True)
class CycleRecord:
    """One measurement / reset / erasure cycle at a fixed parameter value.

    ``heat_bound`` is in units of ``k_B T``. The conditional-unitary reset of
    the system is reversible and contributes ``reset_heat = 0``.
    """

    lam: float
    probs: ProbDist
    entropy: float
    heat_bound: float
    reset_heat: float = 0.0

    @property
    def memory_state(self):
        return np.diag(self.probs.p)

    def heat_joules(self, temperature):
        return landauer_bound(self.entropy, temperature)


def memory_cycle(f, basis, lam):
    probs = measurement_probs(family_eval(f, lam), basis)
    s = shannon_entropy(probs)
    return CycleRecord(lam=float(lam), probs=probs, entropy=s, heat_bound=s)


def average_cycle_bound(f, basis, spec=None):
    """Parameter average of the per-``lam`` Landauer bounds (units of k_B T)."""
    spec = AveragingSpec.for_family(f) if spec is None else spec

    def evaluate(lams, weights):
        return np.array(weights @ np.array([memory_cycle(f, basis, x).entropy for x in lams]))

    val, _ = _refine(evaluate, spec)
    return float(val)
