import numpy as np
import pytest

from qfitherm.fuzz import random_mixed_family, random_mixed_qubit_family, random_pure_family
from qfitherm.linalg import random_hermitian, random_ket, seminorm
from qfitherm.qfi import (
    DegenerateSupportError,
    SingularOutcomeError,
    classical_fisher,
    classical_part,
    family_sld,
    pure_sld_commutator,
    qfi_bloch_oracle,
    qfi_mixed,
    qfi_pure,
    sld,
    sld_measurement,
    spectral_split,
    two_level_decompose,
    variance_identity_check,
)
from qfitherm.states import (
    SIGMA_X,
    SIGMA_Z,
    MixedMapFamily,
    PureUnitaryFamily,
    computational_basis,
    derivative_rho,
    family_eval,
    measurement_probs,
    phase_basis,
    pm_basis,
    quadratic_mixed_family,
    single_qubit_family,
)

QFI_QUADRATIC_HALF = 7.0 / 3.0
SLD_QUADRATIC_HALF = np.array([[10 / 3, 1 / 3], [1 / 3, -2 / 3]])
CLASSICAL_QUADRATIC_HALF = 16.0 / 39.0
# classical Fisher of {|+_p>} on the p = 0.25 family at lam = 0.7 (closed form)
CF_PM_QUARTER = 0.725821822288104703616


@pytest.mark.parametrize("p", [0.0, 0.1, 0.25, 0.5, 0.8, 1.0])
def test_qfi_pure_single_qubit(p):
    psi = np.array([np.sqrt(p), np.sqrt(1 - p)])
    assert qfi_pure(psi, SIGMA_Z / 2) == pytest.approx(4 * p * (1 - p), abs=1e-15)


def test_qfi_pure_eigenstate_and_superposition():
    assert qfi_pure([1, 0], SIGMA_Z / 2) == 0.0
    assert qfi_pure(np.array([1, 1]) / np.sqrt(2), SIGMA_Z / 2) == pytest.approx(1.0)
    assert qfi_pure(np.array([1, 1]) / np.sqrt(2), SIGMA_Z / 2, t=3.0) == pytest.approx(9.0)


def test_sld_examples():
    res = family_sld(single_qubit_family(0.5), 0.0)
    assert res.seminorm == pytest.approx(2.0, abs=1e-9)
    assert res.support_rank == 1

    r2 = family_sld(quadratic_mixed_family(), 0.5)
    np.testing.assert_allclose(r2.L, SLD_QUADRATIC_HALF, atol=1e-8)
    assert r2.qfi == pytest.approx(QFI_QUADRATIC_HALF, abs=1e-6)

    r3 = sld(np.eye(2) / 2, SIGMA_X / 4)
    np.testing.assert_allclose(r3.L, SIGMA_X / 2, atol=1e-15)


def test_sld_degenerate_support():
    rho = np.diag([1.0, 0.0, 0.0]).astype(complex)
    drho = np.zeros((3, 3), dtype=complex)
    drho[1, 2] = drho[2, 1] = 0.3
    with pytest.raises(DegenerateSupportError):
        sld(rho, drho)


def test_sld_relation_and_mean_random(rng):
    for _ in range(500):
        d = int(rng.integers(2, 4))
        f = random_mixed_qubit_family(rng) if d == 2 else random_mixed_family(d, rng)
        lam = float(rng.uniform(-1, 1))
        rho, drho = family_eval(f, lam), derivative_rho(f, lam)
        r = sld(rho, drho)
        assert np.linalg.norm(0.5 * (r.L @ rho + rho @ r.L) - drho) < 1e-7
        assert abs(np.trace(r.L @ rho)) < 1e-8


def test_sld_relation_on_support_pure(rng):
    f = random_pure_family(4, rng)
    rho, drho = f.rho(0.3), derivative_rho(f, 0.3)
    r = sld(rho, drho)
    np.testing.assert_allclose(0.5 * (r.L @ rho + rho @ r.L), drho, atol=1e-7)


def test_sld_kernel_convention_is_immaterial(rng):
    f = random_pure_family(3, rng)
    lam = 0.7
    rho, drho = f.rho(lam), derivative_rho(f, lam)
    base = sld(rho, drho)
    assert sld(rho, drho, cutoff=1e-6).qfi == pytest.approx(base.qfi, abs=1e-12)
    w, v = np.linalg.eigh(rho)
    kernel = v[:, :2]
    junk = random_hermitian(2, rng)
    other = base.L + kernel @ junk @ kernel.conj().T
    assert np.trace(other @ other @ rho).real == pytest.approx(base.qfi, abs=1e-10)
    # the entropy / QFI inequality holds for the perturbed SLD as well
    from qfitherm.linalg import herm_eig

    ell, vecs = herm_eig(other)
    p = np.einsum("ik,ij,jk->k", vecs.conj(), rho, vecs).real
    s = -np.sum(p[p > 1e-15] * np.log(p[p > 1e-15]))
    assert s >= 4 * np.log(2) * base.qfi / (ell[-1] - ell[0]) ** 2 - 1e-10


def test_qfi_mixed_consistency():
    f = single_qubit_family(0.3, t=1.4)
    assert qfi_mixed(f, 0.2) == pytest.approx(qfi_pure(f.initial, f.generator, 1.4), abs=1e-6)
    assert qfi_mixed(quadratic_mixed_family(), 0.5) == pytest.approx(QFI_QUADRATIC_HALF, abs=1e-6)
    const = MixedMapFamily(lambda lam: np.diag([0.3, 0.7]).astype(complex), (-1, 1))
    assert qfi_mixed(const, 0.0) == pytest.approx(0.0, abs=1e-14)


def test_bloch_oracle_examples():
    assert qfi_bloch_oracle(quadratic_mixed_family(), 0.5) == pytest.approx(QFI_QUADRATIC_HALF, abs=1e-8)
    assert qfi_bloch_oracle(single_qubit_family(0.5), 0.3) == pytest.approx(1.0, abs=1e-8)
    const = MixedMapFamily(lambda lam: np.diag([0.3, 0.7]).astype(complex), (-1, 1))
    assert qfi_bloch_oracle(const, 0.0) == pytest.approx(0.0, abs=1e-14)
    with pytest.raises(ValueError):
        qfi_bloch_oracle(random_pure_family(3, np.random.default_rng(0)), 0.0)


def test_qfi_mixed_matches_bloch_random(rng):
    for _ in range(500):
        f = random_mixed_qubit_family(rng)
        lam = float(rng.uniform(-1, 1))
        assert qfi_mixed(f, lam) == pytest.approx(qfi_bloch_oracle(f, lam), abs=1e-6)


def test_qfi_lambda_independent_for_pure_families(rng):
    for _ in range(20):
        f = random_pure_family(int(rng.integers(2, 6)), rng)
        vals = [qfi_mixed(f, float(lam)) for lam in rng.uniform(-3, 3, 5)]
        assert np.ptp(vals) < 1e-7
        assert vals[0] == pytest.approx(qfi_pure(f.initial, f.generator, f.time), abs=1e-7)


def test_variance_identity():
    r = family_sld(quadratic_mixed_family(), 0.5)
    lhs, rhs, resid = variance_identity_check(r)
    assert lhs == pytest.approx(QFI_QUADRATIC_HALF, abs=1e-6)
    assert rhs == pytest.approx(QFI_QUADRATIC_HALF, abs=1e-6)
    assert resid < 1e-8

    from qfitherm.qfi import SLDResult
    from qfitherm.linalg import herm_eig

    L = np.diag([-1.0, 1.0]).astype(complex)
    uniform = SLDResult(L, herm_eig(L), 2.0, 2, np.eye(2) / 2)
    lhs, rhs, resid = variance_identity_check(uniform)
    assert lhs == pytest.approx(1.0) and rhs == pytest.approx(1.0) and resid < 1e-15


def test_variance_identity_random(rng):
    for _ in range(100):
        f = random_mixed_family(3, rng)
        assert variance_identity_check(family_sld(f, float(rng.uniform(-1, 1))))[2] < 1e-8


def test_sld_measurement_examples():
    from qfitherm.qfi import SLDResult
    from qfitherm.linalg import herm_eig

    res = SLDResult(SIGMA_X, herm_eig(SIGMA_X), 2.0, 2, np.eye(2) / 2)
    b = sld_measurement(res)
    np.testing.assert_allclose(b.vectors, np.array([[1, 1], [-1, 1]]) / np.sqrt(2), atol=1e-15)

    pure = family_sld(single_qubit_family(0.5), 0.0)
    p = measurement_probs(pure.rho, sld_measurement(pure)).p
    np.testing.assert_allclose(p, [0.5, 0.5], atol=1e-10)

    L = np.diag([0.0, 2.0, -2.0]).astype(complex)
    b3 = sld_measurement(SLDResult(L, herm_eig(L), 4.0, 2, np.diag([0.0, 0.5, 0.5])))
    np.testing.assert_allclose(b3[1], [1, 0, 0])


def test_sld_measurement_is_deterministic_in_degenerate_blocks(rng):
    f = random_pure_family(5, rng)
    r = family_sld(f, 0.4)
    b1 = sld_measurement(r)
    # same operator, scrambled eigenvectors inside the degenerate zero block
    w, v = r.spectrum
    zero = np.abs(w) < 1e-9
    block = v[:, zero]
    k = block.shape[1]
    mix = np.linalg.qr(rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k)))[0]
    v2 = v.copy()
    v2[:, zero] = block @ mix
    from qfitherm.qfi import SLDResult
    from qfitherm.linalg import SpectralDecomposition

    r2 = SLDResult(r.L, SpectralDecomposition(w, v2), r.seminorm, r.support_rank, r.rho)
    np.testing.assert_allclose(sld_measurement(r2).vectors, b1.vectors, atol=1e-9)


def test_classical_fisher_examples():
    f = single_qubit_family(0.5)
    for phi, lam in ((0.3, 1.0), (1.0, -0.5)):
        # closed form: dp = -+ sin(phi - lam) / 2 gives exactly 1
        assert classical_fisher(f, phase_basis(phi), lam) == pytest.approx(1.0, abs=1e-8)
    assert classical_fisher(single_qubit_family(0.3), computational_basis(2), 0.4) == pytest.approx(0.0, abs=1e-12)
    g = single_qubit_family(0.25)
    cf = classical_fisher(g, pm_basis(0.25), 0.7)
    assert cf == pytest.approx(CF_PM_QUARTER, abs=1e-8)
    assert cf < 0.75


def test_classical_fisher_vanishing_outcome_limit():
    # outcome probabilities (1, 0) at lam = 0 with a quadratic zero: limit is the QFI
    f = single_qubit_family(0.5)
    assert classical_fisher(f, phase_basis(0.0), 0.0) == pytest.approx(1.0, abs=1e-5)


def test_classical_fisher_singular_outcome():
    def rho(lam):
        a = 0.5 + lam
        return np.diag([a, 1 - a]).astype(complex)

    f = MixedMapFamily(rho, (-0.5, 0.5))
    with pytest.raises(SingularOutcomeError):
        classical_fisher(f, computational_basis(2), -0.5 + 1e-13, step=1e-14)


def test_classical_fisher_sld_basis_saturates(rng):
    n = 0
    while n < 200:
        f = random_mixed_qubit_family(rng)
        lam = float(rng.uniform(-1, 1))
        r = family_sld(f, lam)
        if np.diff(r.spectrum.eigenvalues)[0] < 1e-3:
            continue
        assert classical_fisher(f, sld_measurement(r), lam) == pytest.approx(r.qfi, abs=1e-5)
        n += 1


def _rotating_ensemble(p1, rng):
    h = random_hermitian(2, rng)
    w, v = np.linalg.eigh(h)
    u0 = np.linalg.qr(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))[0]

    def phi(k):
        return lambda lam: ((v * np.exp(-1j * lam * w)) @ v.conj().T @ u0)[:, k]

    return (lambda lam: p1), phi(0), (lambda lam: 1 - p1), phi(1)


def test_two_level_constant_weights(rng):
    ens = _rotating_ensemble(0.3, rng)
    split = two_level_decompose(*ens, 0.4)
    assert split.classical == pytest.approx(0.0, abs=1e-12)
    assert split.total == pytest.approx(split.nonclassical)
    assert split.sld_gap < 1e-6


def test_two_level_pure_member(rng):
    f = single_qubit_family(0.3, t=1.2)
    from qfitherm.bounds import tangent_state

    lam0 = 0.2
    split = two_level_decompose(
        lambda lam: 1.0, f.ket, lambda lam: 0.0,
        lambda lam: tangent_state(f, lam), lam0, check_sld=False,
    )
    assert split.classical == 0.0
    assert split.nonclassical == pytest.approx(qfi_pure(f.initial, f.generator, 1.2), abs=1e-7)


def test_two_level_quadratic_family():
    f = quadratic_mixed_family()
    split = spectral_split(f, 0.5)
    assert split.total == pytest.approx(QFI_QUADRATIC_HALF, abs=1e-6)
    assert split.classical == pytest.approx(CLASSICAL_QUADRATIC_HALF, abs=1e-7)
    assert split.total == split.classical + split.nonclassical
    assert 0 <= split.ratio <= 1
    rho = f.rho(0.5)
    assert classical_part(rho, derivative_rho(f, 0.5)) == pytest.approx(CLASSICAL_QUADRATIC_HALF, abs=1e-8)


def test_two_level_matches_qfi_random(rng):
    for _ in range(100):
        f = random_mixed_qubit_family(rng)
        lam = float(rng.uniform(-1, 1))
        split = spectral_split(f, lam)
        assert split.total == pytest.approx(qfi_mixed(f, lam), abs=1e-6)


def test_two_level_rejects_bad_ensembles():
    a = lambda lam: np.array([1, 0], dtype=complex)
    b = lambda lam: np.array([1, 1], dtype=complex) / np.sqrt(2)
    with pytest.raises(ValueError):
        two_level_decompose(lambda lam: 0.5, a, lambda lam: 0.5, b, 0.0)
    with pytest.raises(ValueError):
        two_level_decompose(lambda lam: 0.5, a, lambda lam: 0.6, a, 0.0)


def test_pure_commutator_sld(rng):
    for _ in range(20):
        d = int(rng.integers(2, 5))
        f = PureUnitaryFamily(random_ket(d, rng), random_hermitian(d, rng), rng.uniform(0.3, 2.0))
        lam = rng.uniform(-2, 2)
        closed = pure_sld_commutator(f, lam)
        np.testing.assert_allclose(family_sld(f, lam).L, closed, atol=1e-7)
        assert seminorm(closed) <= 2 * seminorm(f.time * f.generator) + 1e-9
