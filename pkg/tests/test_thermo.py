import numpy as np
import pytest

from qfitherm.fuzz import random_pure_family
from qfitherm.linalg import random_ket
from qfitherm.states import (
    SIGMA_Z,
    PureUnitaryFamily,
    computational_basis,
    pm_basis,
    random_basis,
    single_qubit_family,
)
from qfitherm.thermo import (
    LOG2,
    AveragingError,
    AveragingSpec,
    NormalizationError,
    average_cycle_bound,
    average_state,
    averaged_probs,
    averaged_probs_direct,
    entropy_chain_check,
    landauer_bound,
    memory_cycle,
    normalize_generator,
    qfi_heat_bound,
    shannon_entropy,
    von_neumann_entropy,
)

LANDAUER_LOG2_300K = 2.87097888507872379450e-21
QFI_HEAT_075_300K = 2.15323416380904284588e-21


@pytest.mark.parametrize("p", [0.0, 0.25, 0.5, 0.9, 1.0])
def test_average_state_single_qubit(p):
    np.testing.assert_allclose(average_state(single_qubit_family(p)), np.diag([p, 1 - p]), atol=1e-12)


def test_average_state_of_eigenstate(rng):
    h = np.diag([0.0, 1.0, 3.0]).astype(complex)
    f = PureUnitaryFamily(np.array([0, 1, 0], dtype=complex), h)
    np.testing.assert_allclose(average_state(f), f.rho(0.0), atol=1e-14)


def test_average_state_balanced():
    rho = average_state(single_qubit_family(0.5))
    np.testing.assert_allclose(rho, np.eye(2) / 2, atol=1e-12)
    assert von_neumann_entropy(rho) == pytest.approx(LOG2, abs=1e-12)


def test_average_state_needs_period_or_interval(rng):
    h = np.diag([0.0, 1.0, np.sqrt(2.0)]).astype(complex)
    f = PureUnitaryFamily(random_ket(3, rng), h)
    assert f.period is None
    with pytest.raises(AveragingError):
        average_state(f)
    rho = average_state(f, AveragingSpec((0.0, 40.0)))
    assert np.trace(rho).real == pytest.approx(1.0)


def test_averaging_spec_validation():
    with pytest.raises(ValueError):
        AveragingSpec((1.0, 0.0))
    with pytest.raises(ValueError):
        AveragingSpec((0.0, 1.0), nodes=24)


def test_averaged_probs_linearity(rng):
    for _ in range(30):
        d = int(rng.integers(2, 6))
        f = random_pure_family(d, rng)
        b = random_basis(d, rng)
        np.testing.assert_allclose(averaged_probs(f, b).p, averaged_probs_direct(f, b).p, atol=1e-9)


def test_entropy_values():
    assert shannon_entropy([0.5, 0.5]) == pytest.approx(LOG2)
    assert shannon_entropy([1.0, 0.0]) == 0.0
    assert shannon_entropy(np.full(4, 0.25)) == pytest.approx(2 * LOG2)
    assert von_neumann_entropy(np.diag([1.0, 0.0])) == 0.0
    assert von_neumann_entropy(np.eye(3) / 3) == pytest.approx(np.log(3))


def test_landauer_and_qfi_heat():
    assert landauer_bound(LOG2, 300.0) == pytest.approx(LANDAUER_LOG2_300K, rel=1e-12)
    assert qfi_heat_bound(0.75, 1.0, 300.0) == pytest.approx(QFI_HEAT_075_300K, rel=1e-12)
    assert landauer_bound(0.3, 600.0) == pytest.approx(2 * landauer_bound(0.3, 300.0), rel=1e-15)
    assert qfi_heat_bound(0.75, 2.0, 300.0) == pytest.approx(qfi_heat_bound(0.75, 1.0, 300.0) / 4, rel=1e-15)
    for bad in ((0.1, 0.0), (-0.1, 300.0)):
        with pytest.raises(ValueError):
            landauer_bound(*bad)
    with pytest.raises(ValueError):
        qfi_heat_bound(1.0, 0.0, 300.0)


def test_entropy_chain_balanced_is_tight():
    f = single_qubit_family(0.5)
    reports = entropy_chain_check(f, computational_basis(2))
    for rep in reports:
        assert rep.holds
        assert rep.lhs == pytest.approx(LOG2, abs=1e-9)
        assert rep.rhs == pytest.approx(LOG2, abs=1e-9)


def test_entropy_chain_eigenstate_is_zero():
    f = single_qubit_family(1.0)
    for rep in entropy_chain_check(f, computational_basis(2)):
        assert abs(rep.lhs) < 1e-12 and abs(rep.rhs) < 1e-12


def test_entropy_chain_requires_unit_seminorm(rng):
    f = PureUnitaryFamily(random_ket(2, rng), SIGMA_Z)
    with pytest.raises(NormalizationError):
        entropy_chain_check(f, computational_basis(2))
    g = normalize_generator(f)
    assert g.time == pytest.approx(2.0)
    np.testing.assert_allclose(g.rho(0.37), f.rho(0.37), atol=1e-14)
    assert all(r.holds for r in entropy_chain_check(g, computational_basis(2)))


def test_entropy_chain_rejects_mixed_family():
    from qfitherm.states import quadratic_mixed_family

    with pytest.raises(TypeError):
        entropy_chain_check(quadratic_mixed_family(), computational_basis(2))


def test_memory_cycle_examples():
    f = single_qubit_family(0.5)
    # at lam = 0 the state is |+>: outcome deterministic in the pm basis, zero heat
    rec = memory_cycle(f, pm_basis(0.5), 0.0)
    assert rec.entropy == 0.0 and rec.heat_bound == 0.0 and rec.reset_heat == 0.0
    np.testing.assert_allclose(rec.memory_state, np.diag([1.0, 0.0]), atol=1e-14)
    rec2 = memory_cycle(f, pm_basis(0.5), np.pi / 2)
    assert rec2.entropy == pytest.approx(LOG2)
    assert rec2.heat_joules(300.0) == pytest.approx(LANDAUER_LOG2_300K, rel=1e-12)


def test_average_cycle_bound_below_averaged_entropy(rng):
    for _ in range(10):
        f = random_pure_family(3, rng)
        b = random_basis(3, rng)
        per_value = average_cycle_bound(f, b)
        assert per_value <= shannon_entropy(averaged_probs(f, b)) + 1e-9
