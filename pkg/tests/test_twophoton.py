"""
Tests for the two-photon interferometer model
"""
import numpy as np
import pytest

from domain.errors import DimensionMismatch, NotUnitary, OutOfRange
from domain.linalg import hermitian_expm
from domain.twophoton import (
    TARGETS,
    MeasurementConfig,
    PolarizationEnsemble,
    TwoPhotonState,
    closed_form_gamma2,
    coincidence_intensity,
    direct_phase,
    flip,
    inner_product,
    partial_trace_ancilla,
    purify,
    recipe,
    rotation_generator,
    rotation_unitary,
    run_fringe,
)
from utils.random_instances import random_unitary

IDENTITY = np.eye(2, dtype=np.complex128)
GRID = [(r, beta, theta) for r in (0.0, 0.5, 1.0) for beta in (0.3, 1.9, 4.0) for theta in (0.0, 0.7)]


def _identity_arms(role="Us"):
    return MeasurementConfig(Us=IDENTITY, Vs=IDENTITY, Ua=IDENTITY, Va=IDENTITY, chi_role=role)


def test_polarization_ensemble():
    ensemble = PolarizationEnsemble(0.5)
    assert ensemble.populations == (0.75, 0.25)
    assert np.allclose(ensemble.rho2().matrix, np.diag([0.25, 0.75]))
    with pytest.raises(OutOfRange):
        PolarizationEnsemble(1.5)


def test_purify_pure_limit():
    assert np.allclose(purify(PolarizationEnsemble(1.0)).amplitudes, [1, 0, 0, 0])


def test_purify_maximally_entangled():
    assert np.allclose(purify(PolarizationEnsemble(0.0)).amplitudes, np.array([1, 0, 0, 1]) / np.sqrt(2))


def test_purify_partial_trace():
    reduced = partial_trace_ancilla(purify(PolarizationEnsemble(0.5)))
    assert np.allclose(reduced, np.diag([0.75, 0.25]))


def test_two_photon_state_validation():
    with pytest.raises(OutOfRange):
        TwoPhotonState(amplitudes=np.array([1, 1, 0, 0], dtype=np.complex128))
    with pytest.raises(DimensionMismatch):
        TwoPhotonState(amplitudes=np.array([1, 0], dtype=np.complex128))


def test_rotation_unitary_identity_at_zero():
    assert np.allclose(rotation_unitary(0.0, 1.2), IDENTITY)


def test_rotation_unitary_circular_polarization():
    image = rotation_unitary(np.pi / 4, 0.0) @ np.array([1.0, 0.0])
    assert abs(image[0]) == pytest.approx(abs(image[1]))
    assert np.angle(image[1] / image[0]) == pytest.approx(-np.pi / 2)


def test_rotation_unitary_is_exponential():
    assert np.allclose(rotation_unitary(0.8, 0.3), hermitian_expm(rotation_generator(0.3), 0.8))


def test_flip_exchanges_polarizations():
    assert np.allclose(flip() @ np.array([1.0, 0.0]), [0.0, 1.0])
    assert np.allclose(flip() @ np.diag([0.75, 0.25]) @ flip().conj().T, np.diag([0.25, 0.75]))


def test_measurement_config_rejects_non_unitary_arm():
    with pytest.raises(NotUnitary):
        MeasurementConfig(Us=2 * IDENTITY, Vs=IDENTITY, Ua=IDENTITY, Va=IDENTITY)


def test_coincidence_intensity_identity_arms():
    state = purify(PolarizationEnsemble(0.3))
    assert coincidence_intensity(state, _identity_arms(), 0.0) == pytest.approx(4.0)
    assert coincidence_intensity(state, _identity_arms(), np.pi) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("role, sign", [("Us", -1), ("Ua", -1), ("Vs", 1), ("Va", 1)])
def test_coincidence_intensity_matches_inner_product(rng, role, sign):
    state = purify(PolarizationEnsemble(0.6))
    arms = {name: random_unitary(2, rng) for name in ("Us", "Vs", "Ua", "Va")}
    config = MeasurementConfig(**arms, chi_role=role)
    z = inner_product(state, config)
    chis = np.linspace(0.0, 2 * np.pi, 11)
    expected = 2 + 2 * np.real(np.exp(sign * 1j * chis) * z)
    assert np.allclose(coincidence_intensity(state, config, chis), expected)
    assert np.all(coincidence_intensity(state, config, chis) >= -1e-12)
    assert np.all(coincidence_intensity(state, config, chis) <= 4 + 1e-12)


@pytest.mark.parametrize("target", TARGETS)
def test_recipes_read_out_direct_traces(target):
    for r, beta, theta in GRID:
        ensemble = PolarizationEnsemble(r)
        z = inner_product(purify(ensemble), recipe(target, beta, theta))
        assert z == pytest.approx(direct_phase(target, ensemble, beta, theta).raw_trace, abs=1e-12)


def test_recipe_rejects_unknown_target():
    with pytest.raises(ValueError):
        recipe("gamma3", 0.1, 0.2)


def test_gamma2_closed_form_is_theta_independent():
    for r, beta, _ in GRID:
        values = [direct_phase("gamma2", PolarizationEnsemble(r), beta, theta).raw_trace for theta in (0.0, 1.0, 2.5)]
        for value in values:
            assert value == pytest.approx(closed_form_gamma2(r, beta), abs=1e-12)


def test_run_fringe_identity_arms():
    scan = run_fringe(purify(PolarizationEnsemble(0.4)), _identity_arms(), samples=16)
    assert scan.visibility == pytest.approx(1.0)
    assert scan.extracted_arg == pytest.approx(0.0, abs=1e-12)
    assert scan.chis.shape == (16,)


def test_run_fringe_flat_for_orthogonal_states():
    config = MeasurementConfig(Us=IDENTITY, Vs=flip(), Ua=IDENTITY, Va=IDENTITY)
    scan = run_fringe(purify(PolarizationEnsemble(1.0)), config)
    assert scan.visibility < 1e-10
    assert scan.extracted_arg is None
    assert np.allclose(scan.intensities, 2.0)


@pytest.mark.parametrize("role", ["Us", "Vs"])
def test_run_fringe_extracts_argument_of_inner_product(rng, role):
    state = purify(PolarizationEnsemble(0.2))
    config = MeasurementConfig(**{name: random_unitary(2, rng) for name in ("Us", "Vs", "Ua", "Va")}, chi_role=role)
    scan = run_fringe(state, config, samples=32)
    z = inner_product(state, config)
    assert scan.coefficient == pytest.approx(z, abs=1e-12)
    assert np.exp(1j * scan.extracted_arg) == pytest.approx(z / abs(z), abs=1e-10)


def test_run_fringe_gamma2_sign():
    for r in (0.0, 0.6):
        for beta in (0.2, 1.2):
            scan = run_fringe(purify(PolarizationEnsemble(r)), recipe("gamma2", beta, 0.9))
            expected = closed_form_gamma2(r, beta)
            assert scan.coefficient.real == pytest.approx(expected, abs=1e-12)
            assert np.cos(scan.extracted_arg) == pytest.approx(np.sign(expected))


def test_run_fringe_gamma2_node():
    scan = run_fringe(purify(PolarizationEnsemble(0.0)), recipe("gamma2", np.pi / 4, 0.0))
    assert scan.extracted_arg is None


def test_gamma1_sign_change():
    state = purify(PolarizationEnsemble(0.5))
    before = run_fringe(state, recipe("gamma1_rho1", 0.4 * np.pi, 0.3))
    after = run_fringe(state, recipe("gamma1_rho1", 0.6 * np.pi, 0.3))
    assert before.extracted_arg == pytest.approx(0.0, abs=1e-10)
    assert abs(after.extracted_arg) == pytest.approx(np.pi, abs=1e-10)


def test_run_fringe_rejects_bad_samples():
    with pytest.raises(OutOfRange):
        run_fringe(purify(PolarizationEnsemble(0.5)), _identity_arms(), samples=12)
    with pytest.raises(OutOfRange):
        run_fringe(purify(PolarizationEnsemble(0.5)), _identity_arms(), samples=4)


def test_run_fringe_shot_noise_is_seeded():
    state = purify(PolarizationEnsemble(0.5))
    config = recipe("gamma1_rho1", 0.7, 0.0)
    first = run_fringe(state, config, mean_pairs=1e4, rng=np.random.default_rng(7))
    second = run_fringe(state, config, mean_pairs=1e4, rng=np.random.default_rng(7))
    assert np.array_equal(first.intensities, second.intensities)
    assert np.all(first.intensities >= 0)
    assert first.coefficient == pytest.approx(inner_product(state, config), abs=0.05)
    with pytest.raises(OutOfRange):
        run_fringe(state, config, mean_pairs=0.0)
