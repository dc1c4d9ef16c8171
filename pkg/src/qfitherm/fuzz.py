"""Random-instance generators and the property suites run by ``qfitherm fuzz``.

Each suite draws its instances from ``numpy.random.default_rng((seed, k))``
with ``k`` the suite's fixed index, so a seed fixes every instance and the
order in which suites run does not matter.
"""

from dataclasses import dataclass, field

import numpy as np

from .bounds import (
    generalized_bound,
    is_lemma_equality_point,
    lemma1_slacks,
    two_level_rhs,
    violation_search,
)
from .linalg import herm_eig, random_hermitian, random_ket, random_unitary
from .qfi import (
    classical_fisher,
    family_sld,
    qfi_bloch_oracle,
    qfi_mixed,
    spectral_split,
    sld_measurement,
)
from .states import (
    MixedMapFamily,
    PureUnitaryFamily,
    derivative_rho,
    family_eval,
    measurement_probs,
    random_basis,
    single_qubit_family,
)
from .thermo import (
    LOG2,
    AveragingSpec,
    average_state,
    entropy_chain_check,
    shannon_entropy,
    von_neumann_entropy,
)

# --------------------------------------------------------------------------
# generators


def random_pure_family(d, rng, max_level=6, t_range=(0.5, 2.0)):
    """Pure unitary family with seminorm-1 generator and a commensurate spectrum.

    Generator eigenvalues are ``k / K`` for integers ``0 <= k <= K`` with both
    ends present, so the family has period ``2 pi K / t`` at most.
    """
    top = int(rng.integers(1, max_level + 1))
    levels = np.concatenate([[0, top], rng.integers(0, top + 1, size=d - 2)]) / top
    u = random_unitary(d, rng)
    h = (u * levels) @ u.conj().T
    t = float(rng.uniform(*t_range))
    return PureUnitaryFamily(random_ket(d, rng), h, t, label=f"random-pure(d={d})")


def random_mixed_qubit_family(rng, interval=(-2.0, 2.0)):
    """Smooth full-rank qubit family via a Bloch vector of radius in [0.05, 0.9]."""
    a, b, c, e, g, k = rng.uniform(-2.0, 2.0, size=6)
    off_t, off_p = rng.uniform(0, 2 * np.pi, size=2)

    def rho(lam):
        radius = 0.05 + 0.85 * (0.5 + 0.5 * np.sin(a * lam + b))
        theta = c * lam + off_t + 0.3 * np.sin(k * lam)
        phi = e * lam * lam + g * lam + off_p
        r = radius * np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
        return 0.5 * np.array([[1 + r[2], r[0] - 1j * r[1]], [r[0] + 1j * r[1], 1 - r[2]]])

    return MixedMapFamily(rho, interval, label="random-mixed-qubit")


def random_mixed_family(d, rng, interval=(-2.0, 2.0)):
    """``U(lam) diag(softmax(a + b lam + c lam^2)) U(lam)^dagger``; full rank."""
    h = random_hermitian(d, rng)
    u0 = random_unitary(d, rng)
    a, b, c = rng.normal(size=(3, d))
    w, v = np.linalg.eigh(h)

    def rho(lam):
        z = a + b * lam + 0.3 * c * lam * lam
        p = np.exp(z - z.max())
        p /= p.sum()
        u = (v * np.exp(-1j * lam * w)) @ v.conj().T @ u0
        return (u * p) @ u.conj().T

    return MixedMapFamily(rho, interval, label=f"random-mixed(d={d})")


def random_distributions(n, d_max, rng):
    """``n`` random distributions of varying support size, zero-padded to ``d_max``."""
    out = np.zeros((n, d_max))
    dims = rng.integers(2, d_max + 1, size=n)
    conc = np.exp(rng.uniform(-3.0, 1.0, size=n))
    for i in range(n):
        x = rng.gamma(conc[i], size=dims[i])
        if rng.random() < 0.2:
            x[rng.random(dims[i]) < 0.5] = 0.0
        if x.sum() == 0.0:
            x[0] = 1.0
        out[i, : dims[i]] = x / x.sum()
    return out


def lemma_equality_points(d_max):
    """Deterministic and uniform-binary distributions for every size."""
    rows = []
    for d in range(2, d_max + 1):
        e = np.zeros(d_max)
        e[d - 1] = 1.0
        rows.append(e)
        b = np.zeros(d_max)
        b[0] = b[d - 1] = 0.5
        rows.append(b)
    return np.array(rows)


# --------------------------------------------------------------------------
# suites


@dataclass
class SuiteResult:
    name: str
    trials: int
    tol: float
    failures: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def passed(self):
        return not self.failures

    def fail(self, trial, **detail):
        self.failures.append({"trial": int(trial), **{k: _plain(v) for k, v in detail.items()}})


def _plain(v):
    if isinstance(v, np.ndarray):
        return [_plain(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def suite_herm_eig(rng, trials, tol=1e-10):
    res = SuiteResult("herm_eig_reconstruction", trials, tol)
    for i in range(trials):
        a = random_hermitian(int(rng.integers(1, 9)), rng)
        dec = herm_eig(a)
        err = np.linalg.norm(dec.reconstruct() - a)
        orth = np.linalg.norm(dec.eigenvectors.conj().T @ dec.eigenvectors - np.eye(a.shape[0]))
        if not (err <= tol and orth <= tol):
            res.fail(i, reconstruction=err, orthogonality=orth)
    return res


def suite_probs_normalization(rng, trials, tol=1e-10):
    res = SuiteResult("probs_normalization", trials, tol)
    for i in range(trials):
        d = int(rng.integers(1, 9))
        w = rng.dirichlet(np.ones(d))
        u = random_unitary(d, rng)
        rho = (u * w) @ u.conj().T
        p = measurement_probs(rho, random_basis(d, rng)).p
        if not abs(p.sum() - 1.0) <= tol:
            res.fail(i, total=p.sum())
    return res


def suite_qfi_oracle(rng, trials, tol=1e-6):
    res = SuiteResult("qfi_mixed_vs_bloch_oracle", trials, tol)
    for i in range(trials):
        f = random_mixed_qubit_family(rng)
        lam = float(rng.uniform(-1.0, 1.0))
        a, b = qfi_mixed(f, lam), qfi_bloch_oracle(f, lam)
        if not abs(a - b) <= tol:
            res.fail(i, lam=lam, qfi_mixed=a, bloch=b)
    return res


def suite_sld_relation(rng, trials, tol=1e-7):
    res = SuiteResult("sld_defining_relation", trials, tol)
    for i in range(trials):
        d = int(rng.integers(2, 4))
        f = random_mixed_qubit_family(rng) if d == 2 else random_mixed_family(d, rng)
        lam = float(rng.uniform(-1.0, 1.0))
        rho, drho = family_eval(f, lam), derivative_rho(f, lam)
        r = family_sld(f, lam)
        resid = np.linalg.norm(0.5 * (r.L @ rho + rho @ r.L) - drho)
        mean = abs(np.trace(r.L @ rho))
        if not (resid <= tol and mean <= 0.1 * tol):
            res.fail(i, d=d, lam=lam, residual=resid, trace_L_rho=mean)
    return res


def suite_sld_saturation(rng, trials, tol=1e-5):
    res = SuiteResult("sld_measurement_saturates_qfi", trials, tol)
    for i in range(trials):
        f = random_mixed_qubit_family(rng)
        lam = float(rng.uniform(-1.0, 1.0))
        r = family_sld(f, lam)
        w = r.spectrum.eigenvalues
        if w[1] - w[0] < 1e-3:
            continue  # nondegenerate SLD only
        cf = classical_fisher(f, sld_measurement(r), lam)
        if not abs(cf - r.qfi) <= tol:
            res.fail(i, lam=lam, classical=cf, qfi=r.qfi)
    return res


def suite_entropy_chain(rng, trials, tol=1e-9, d_max=6):
    res = SuiteResult("entropy_chain", trials, tol)
    for i in range(trials):
        d = int(rng.integers(2, d_max + 1))
        f = random_pure_family(d, rng)
        basis = random_basis(d, rng)
        reports = entropy_chain_check(f, basis, AveragingSpec.for_family(f), tol=tol)
        bad = [rep.as_dict() for rep in reports if not rep.holds]
        if bad:
            res.fail(i, d=d, t=f.time, reports=bad)
    return res


def suite_concavity(rng, trials, tol=1e-9, d_max=6):
    """Averaged-outcome entropy vs average per-value entropy, and vN vs diagonal."""
    res = SuiteResult("entropy_concavity", trials, tol)
    for i in range(trials):
        d = int(rng.integers(2, d_max + 1))
        f = random_pure_family(d, rng)
        spec = AveragingSpec.for_family(f)
        basis = random_basis(d, rng)
        rho_s = average_state(f, spec)
        s_avg = shannon_entropy(measurement_probs(rho_s, basis))
        lams = np.linspace(*spec.interval, 129)[:-1]
        s_each = np.mean([shannon_entropy(measurement_probs(f.rho(x), basis)) for x in lams])
        vn = von_neumann_entropy(rho_s)
        diag = min(shannon_entropy(measurement_probs(rho_s, random_basis(d, rng))) for _ in range(20))
        if not (s_avg >= s_each - tol and diag >= vn - tol):
            res.fail(i, d=d, averaged=s_avg, mean_per_value=s_each, vn=vn, min_diagonal=diag)
    return res


def suite_lemma1(rng, trials, tol=1e-10, d_max=16):
    res = SuiteResult("lemma1", trials, tol)
    probs = np.vstack([random_distributions(trials, d_max, rng), lemma_equality_points(d_max)])
    slack = lemma1_slacks(probs)
    for i in np.flatnonzero(slack < -tol):
        res.fail(i, probs=probs[i], slack=slack[i])
    tight = np.flatnonzero(slack < 1e-10)
    stray = [int(i) for i in tight if not is_lemma_equality_point(probs[i])]
    for i in stray:
        res.fail(i, probs=probs[i], slack=slack[i], reason="tight at a non-equality point")
    res.notes["equality_points_found"] = int(len(tight) - len(stray))
    return res


def suite_sld_bound_mixed(rng, trials, tol=1e-8, per_family=5):
    res = SuiteResult("sld_bound_mixed_qubits", trials, tol)
    for i in range(trials):
        f = random_mixed_qubit_family(rng)
        for lam in rng.uniform(-1.0, 1.0, size=per_family):
            case = generalized_bound(f, float(lam), tol=tol)
            if not case.report.holds:
                res.fail(i, lam=lam, entropy=case.entropy, bound=case.report.rhs)
    return res


def suite_sld_bound_pure(rng, trials, tol=1e-8, d_max=6):
    res = SuiteResult("sld_bound_pure_equality", trials, tol)
    for i in range(trials):
        d = int(rng.integers(2, d_max + 1))
        f = random_pure_family(d, rng)
        lam = float(rng.uniform(-3.0, 3.0))
        case = generalized_bound(f, lam, tol=tol)
        if case.report.label == "vacuous":
            continue
        if not abs(case.report.slack) <= tol:
            res.fail(i, d=d, lam=lam, entropy=case.entropy, bound=case.report.rhs)
    return res


def suite_two_level(rng, trials, tol=1e-9):
    res = SuiteResult("two_level_bound", trials, tol)
    for i in range(trials):
        f = random_mixed_qubit_family(rng)
        lam = float(rng.uniform(-1.0, 1.0))
        case = generalized_bound(f, lam)
        split = spectral_split(f, lam)
        p1 = float(herm_eig(family_eval(f, lam)).eigenvalues[0])
        rhs = two_level_rhs(split, p1)
        if not (rhs <= LOG2 + tol and case.entropy >= rhs - tol):
            res.fail(i, lam=lam, entropy=case.entropy, bound=rhs, split_total=split.total)
    return res


def suite_nonsld_expected(rng, trials, tol=1e-8):
    """Non-SLD collapse: records expected violations, fails only on broken trends."""
    res = SuiteResult("nonsld_collapse", trials, tol)
    f = single_qubit_family(0.5)
    q_grid = np.linspace(0.5, 1.0, 11)
    expected = 0
    for i in range(trials):
        lam0 = float(rng.uniform(-np.pi, np.pi))
        cases = violation_search(f, lam0, q_grid)
        s = np.array([c.entropy for c in cases])
        expected += sum(c.expected_violation for c in cases)
        if not (np.all(np.diff(s) < 0) and cases[-2].classical_fisher > (1 - 1e-6) * cases[-2].qfi):
            res.fail(i, lam0=lam0, entropies=s)
    res.notes["expected_violations"] = int(expected)
    return res


SUITES = (
    (suite_herm_eig, 500),
    (suite_probs_normalization, 500),
    (suite_qfi_oracle, 500),
    (suite_sld_relation, 500),
    (suite_sld_saturation, 200),
    (suite_entropy_chain, 1000),
    (suite_concavity, 500),
    (suite_lemma1, 100_000),
    (suite_sld_bound_mixed, 1000),
    (suite_sld_bound_pure, 200),
    (suite_two_level, 200),
    (suite_nonsld_expected, 20),
)


def run_all(seed=42, trials=None, tol=None):
    """Run every suite. ``trials`` caps the per-suite count; ``tol`` overrides all tolerances."""
    results = []
    for k, (suite, default_trials) in enumerate(SUITES):
        rng = np.random.default_rng((seed, k))
        n = default_trials if trials is None else min(default_trials, trials)
        kw = {} if tol is None else {"tol": tol}
        results.append(suite(rng, n, **kw))
    return results
