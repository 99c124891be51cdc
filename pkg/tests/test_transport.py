"""
Tests for parallel-transporting paths
"""
import numpy as np
import pytest

from domain.errors import DimensionMismatch, NotUnitary, TooFewSamples
from domain.transport import UnitaryPath, project_parallel, transport_defect, transport_path
from domain.twophoton import rotation_generator, rotation_unitary
from utils.random_instances import random_hermitian, random_unitary

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)


def test_project_parallel_removes_diagonal_operator(rng):
    basis = random_unitary(3, rng)
    J = (basis * np.array([0.3, -1.2, 0.8])) @ basis.conj().T
    assert np.max(np.abs(project_parallel(J, basis))) < 1e-12


def test_project_parallel_keeps_off_diagonal_operator():
    assert np.allclose(project_parallel(SIGMA_X, np.eye(2)), SIGMA_X)


def test_project_parallel_subtracts_diagonal():
    J = np.diag([1.0, 2.0]) + 0.4 * SIGMA_X
    projected = project_parallel(J, np.eye(2))
    assert np.allclose(projected, 0.4 * SIGMA_X)
    assert np.trace(projected) == pytest.approx(0.0)


def test_project_parallel_random_basis(rng):
    basis = random_unitary(4, rng)
    projected = project_parallel(random_hermitian(4, rng), basis)
    diagonal = np.einsum("ik,ij,jk->k", basis.conj(), projected, basis)
    assert np.max(np.abs(diagonal)) < 1e-12


def test_transport_path_zero_generator():
    path = transport_path(lambda s: np.zeros((2, 2)), np.eye(2), 1.0, 8)
    assert len(path) == 9
    assert np.allclose(path.unitaries, np.eye(2))


@pytest.mark.parametrize("beta, theta", [(np.pi / 3, 0.0), (2.0, 1.1), (np.pi, np.pi / 4)])
def test_transport_path_follows_rotation(beta, theta):
    identity = np.eye(2)
    path = transport_path(lambda s: rotation_generator(theta), identity, beta, 256)
    assert np.max(np.abs(path.final - rotation_unitary(beta, theta))) < 1e-10
    assert np.max(np.abs(np.linalg.det(path.unitaries) - 1.0)) < 1e-10
    assert transport_defect(path, identity) < 1e-6


def test_transport_path_general_generator(rng):
    basis = random_unitary(3, rng)
    J0, J1 = 0.25 * random_hermitian(3, rng), 0.25 * random_hermitian(3, rng)
    path = transport_path(lambda s: J0 + np.sin(s) * J1, basis, 1.0, 4096)
    assert transport_defect(path, basis) < 1e-6
    # traceless generator keeps the path in SU(N)
    assert abs(np.linalg.det(path.final) - 1.0) < 1e-9


def test_transport_path_rejects_bad_arguments():
    with pytest.raises(ValueError):
        transport_path(lambda s: SIGMA_X, np.eye(2), 1.0, 0)
    with pytest.raises(ValueError):
        transport_path(lambda s: SIGMA_X, np.eye(2), 0.0, 8)
    with pytest.raises(DimensionMismatch):
        transport_path(lambda s: np.eye(3), np.eye(2), 1.0, 8)


def test_transport_defect_of_phase_rotation():
    path = UnitaryPath.from_function(lambda s: np.diag([np.exp(1j * s), np.exp(-1j * s)]), 1.0, 100)
    assert transport_defect(path, np.eye(2)) == pytest.approx(1.0, abs=1e-9)


def test_transport_defect_of_identity_path():
    path = UnitaryPath.from_function(lambda s: np.eye(2), 1.0, 10)
    assert transport_defect(path, np.eye(2)) == 0.0


def test_transport_defect_needs_two_samples():
    path = UnitaryPath(s=np.zeros(1), unitaries=np.eye(2, dtype=np.complex128)[None])
    with pytest.raises(TooFewSamples):
        transport_defect(path, np.eye(2))


def test_unitary_path_validation():
    s = np.array([0.0, 1.0])
    with pytest.raises(NotUnitary):
        UnitaryPath(s=s, unitaries=np.stack([SIGMA_X, np.eye(2)]).astype(np.complex128))
    with pytest.raises(NotUnitary):
        UnitaryPath(s=s, unitaries=np.stack([np.eye(2), 2 * np.eye(2)]).astype(np.complex128))
    with pytest.raises(ValueError):
        UnitaryPath(s=np.array([0.0, 0.0]), unitaries=np.stack([np.eye(2), np.eye(2)]).astype(np.complex128))
    with pytest.raises(DimensionMismatch):
        UnitaryPath(s=np.array([0.0, 0.5, 1.0]), unitaries=np.stack([np.eye(2), np.eye(2)]).astype(np.complex128))


def test_transported_basis(rng):
    basis = random_unitary(2, rng)
    path = transport_path(lambda s: rotation_generator(0.3), basis, 0.5, 32)
    assert np.allclose(path.transported_basis(basis), path.final @ basis)
    assert np.allclose(path.transported_basis(basis, 0), basis)
