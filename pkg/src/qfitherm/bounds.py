"""Entropy-vs-QFI inequalities for a fixed parameter value.

Covers the binary-entropy lemma, the SLD-measurement bound
``S >= 4 log2 F_Q / ||L||^2``, its two-level refinement in terms of the
classical QFI share, equality-case classification, and the non-SLD basis
family under which the per-value entropy collapses.
"""

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels
from .qfi import (
    classical_fisher,
    classical_part,
    family_sld,
    qfi_pure,
    sld_measurement,
)
from .states import (
    PureUnitaryFamily,
    derivative_rho,
    family_eval,
    measurement_probs,
    nonsld_basis,
)
from .thermo import LOG2, BoundReport, shannon_entropy

LEMMA_TOL = 1e-10
SLD_BOUND_TOL = 1e-8
TWO_LEVEL_TOL = 1e-9


class EqualityMismatch(RuntimeError):
    """A case classified as an equality case is not tight."""


class EqualityCase(enum.Enum):
    PURE_STATE = "pure-state"
    BALANCED_TWO_LEVEL = "balanced-two-level"


@dataclass(frozen=True, eq=False)
class InequalityCase:
    family: str
    lam: float
    measurement: str
    entropy: float
    qfi: float
    sld_seminorm: float
    report: BoundReport
    dim: int
    purity: float
    classical: Optional[float] = None
    nonclassical: Optional[float] = None
    classical_fisher: Optional[float] = None
    probs: Optional[np.ndarray] = None
    expected_violation: bool = False
    extra: dict = field(default_factory=dict)


def lemma1_check(p, tol=LEMMA_TOL):
    """``H(p) + 2 log2 sum p^2 >= 2 log2``."""
    probs = np.asarray(getattr(p, "p", p), dtype=float)
    two_log2 = 2.0 * LOG2
    lhs = float(_kernels.shannon_rows(probs[None, :])[0] + two_log2 * (probs @ probs))
    return BoundReport("lemma1", lhs, two_log2, tol, {"dim": int(probs.size)})


def lemma1_slacks(probs):
    """Vectorized lemma slack for a batch of distributions (one per row)."""
    return _kernels.lemma_slack_rows(probs)


def is_lemma_equality_point(p, tol=1e-9):
    """Uniform over two outcomes, or deterministic."""
    q = np.sort(np.asarray(p, dtype=float))[::-1]
    if abs(q[0] - 1.0) <= tol:
        return True
    return q.size >= 2 and abs(q[0] - 0.5) <= tol and abs(q[1] - 0.5) <= tol


def generalized_bound(f, lam, step=None, tol=SLD_BOUND_TOL):
    """SLD-measurement entropy against ``4 log2 F_Q / ||L||^2`` at ``lam``."""
    rho = family_eval(f, lam)
    res = family_sld(f, lam, step)
    basis = sld_measurement(res)
    probs = measurement_probs(rho, basis)
    s = shannon_entropy(probs)
    fq = res.qfi
    if res.seminorm <= 1e-12:
        rhs, label = 0.0, "vacuous"
    else:
        rhs, label = 4.0 * LOG2 * fq / res.seminorm**2, "sld_entropy>=qfi_bound"
    f_c = f_nc = None
    if f.dim == 2:
        f_c = classical_part(rho, derivative_rho(f, lam, step))
        f_nc = fq - f_c
    purity = float(np.trace(rho @ rho).real)
    report = BoundReport(label, s, rhs, tol, {"family": f.label, "lam": float(lam)})
    return InequalityCase(
        family=f.label,
        lam=float(lam),
        measurement="sld",
        entropy=s,
        qfi=fq,
        sld_seminorm=res.seminorm,
        report=report,
        dim=rho.shape[0],
        purity=purity,
        classical=f_c,
        nonclassical=f_nc,
        probs=probs.p,
    )


def two_level_rhs(split, p1):
    if not 0.0 < p1 < 1.0:
        raise ValueError(f"two-level weight must lie strictly inside (0, 1), got {p1!r}")
    p2 = 1.0 - p1
    denom = split.total + (1.0 / (4.0 * p1 * p2) - 1.0) * split.classical
    return LOG2 * split.total / denom if denom > 0 else 0.0


def two_level_bound(split, p1, entropy, tol=TWO_LEVEL_TOL):
    """``S >= log2 F_Q / (F_Q + (1/(4 p1 p2) - 1) F_c)``."""
    if abs(split.total - split.classical - split.nonclassical) > 1e-8 * max(1.0, split.total):
        raise ValueError("inconsistent QFI split")
    rhs = two_level_rhs(split, p1)
    return BoundReport("sld_entropy>=two_level_bound", float(entropy), rhs, tol,
                       {"p1": float(p1), "ratio": split.ratio})


def equality_case_detect(case, purity_tol=1e-9, classical_tol=1e-9, slack_tol=1e-6):
    """Classify a case as one of the two known tight families, else None."""
    if case.purity > 1.0 - purity_tol:
        kind = EqualityCase.PURE_STATE
    elif case.dim == 2 and case.classical is not None and case.classical < classical_tol * case.qfi:
        kind = EqualityCase.BALANCED_TWO_LEVEL
    else:
        return None
    if abs(case.report.slack) >= slack_tol:
        raise EqualityMismatch(f"{kind.value} case has slack {case.report.slack!r}")
    return kind


def tangent_state(f, lam):
    """Unit vector along the component of ``d|psi>/d lam`` orthogonal to ``|psi>``.

    Falls back to any orthogonal unit vector when the family is stationary.
    """
    psi = f.ket(lam)
    h = f.generator
    chi = -1j * f.time * (h @ psi - np.vdot(psi, h @ psi) * psi)
    n = np.linalg.norm(chi)
    if n > 1e-12:
        return chi / n
    q, _ = np.linalg.qr(np.column_stack([psi, np.eye(psi.size)]))
    return q[:, 1]


def violation_search(f, lam0, q_grid, tol=SLD_BOUND_TOL):
    """Per-value entropy under the non-SLD bases ``{|q>, |qbar>}`` at ``lam0``.

    As ``q -> 1`` the outcome entropy goes to zero while the classical Fisher
    information stays at the QFI, so the SLD-measurement bound fails for these
    bases. Such cases are flagged ``expected_violation`` rather than treated
    as errors.
    """
    if not isinstance(f, PureUnitaryFamily):
        raise TypeError("violation search is defined for pure unitary families")
    psi0 = f.ket(lam0)
    perp = tangent_state(f, lam0)
    fq = qfi_pure(f.initial, f.generator, f.time)
    res = family_sld(f, lam0)
    rhs = 4.0 * LOG2 * fq / res.seminorm**2 if res.seminorm > 1e-12 else 0.0
    out = []
    for q in q_grid:
        basis = nonsld_basis(psi0, perp, float(q))
        probs = measurement_probs(f.rho(lam0), basis)
        s = shannon_entropy(probs)
        cf = classical_fisher(f, basis, lam0)
        report = BoundReport("nonsld_entropy>=qfi_bound", s, rhs, tol,
                             {"family": f.label, "lam0": float(lam0), "q": float(q)})
        out.append(InequalityCase(
            family=f.label,
            lam=float(lam0),
            measurement=basis.label,
            entropy=s,
            qfi=fq,
            sld_seminorm=res.seminorm,
            report=report,
            dim=f.dim,
            purity=1.0,
            classical_fisher=cf,
            probs=probs.p,
            expected_violation=not report.holds,
            extra={"q": float(q)},
        ))
    return out
