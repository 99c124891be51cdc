"""
Tests for the dense linear-algebra kernel
"""
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from domain.errors import DimensionMismatch, NonFiniteEntries, NotHermitian, NotPSD
from domain.linalg import (
    as_matrix,
    eigen_groups,
    fix_column_phases,
    hermitian_eig,
    hermitian_expm,
    ordered_exp,
    psd_power,
    trace_product,
)
from utils.random_instances import random_density, random_hermitian, random_unitary


def test_as_matrix_rejects_bad_input():
    with pytest.raises(DimensionMismatch):
        as_matrix(np.ones((2, 3)))
    with pytest.raises(DimensionMismatch):
        as_matrix(np.ones(4))
    with pytest.raises(NonFiniteEntries):
        as_matrix([[1.0, np.nan], [0.0, 1.0]])


def test_hermitian_eig_identity():
    spectrum = hermitian_eig(np.eye(2))
    assert np.allclose(spectrum.eigenvalues, [1.0, 1.0])
    V = spectrum.eigenvectors
    assert np.allclose(V.conj().T @ V, np.eye(2), atol=1e-12)


def test_hermitian_eig_diagonal():
    spectrum = hermitian_eig(np.diag([0.2, 0.8]))
    assert np.allclose(spectrum.eigenvalues, [0.2, 0.8])
    assert np.allclose(spectrum.eigenvectors, np.eye(2), atol=1e-12)


def test_hermitian_eig_reconstructs_random_matrix(rng):
    H = random_hermitian(4, rng)
    spectrum = hermitian_eig(H)
    assert np.all(np.diff(spectrum.eigenvalues) >= 0)
    assert np.max(np.abs(spectrum.reconstruct() - H)) < 1e-12


def test_hermitian_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_eig([[1.0, 1.0], [0.0, 1.0]])


def test_fix_column_phases_makes_pivots_positive(rng):
    V = fix_column_phases(random_unitary(5, rng))
    pivots = V[np.argmax(np.abs(V), axis=0), np.arange(5)]
    assert np.allclose(pivots.imag, 0.0, atol=1e-14)
    assert np.all(pivots.real > 0)


def test_eigen_groups_chains_near_degenerate_values():
    groups = eigen_groups([0.1, 0.1 + 1e-12, 0.5, 0.9, 0.9])
    assert [g.tolist() for g in groups] == [[0, 1], [2], [3, 4]]
    assert eigen_groups([]) == []


def test_psd_power_identity():
    assert np.allclose(psd_power(np.eye(3), Fraction(1, 2)), np.eye(3))


def test_psd_power_diagonal_square_root():
    root = psd_power(np.diag([0.64, 0.36]), (1, 2))
    assert np.allclose(root, np.diag([0.8, 0.6]), atol=1e-14)


@pytest.mark.parametrize("l", [1, 2, 3, 5])
def test_psd_power_projector_is_fixed(rng, l):
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    v /= np.linalg.norm(v)
    P = np.outer(v, v.conj())
    assert np.max(np.abs(psd_power(P, Fraction(1, l)) - P)) < 1e-12


def test_psd_power_rejects_negative_spectrum():
    with pytest.raises(NotPSD):
        psd_power(np.diag([1.5, -0.5]), Fraction(1, 2))


def test_psd_power_rejects_non_positive_exponent():
    with pytest.raises(ValueError):
        psd_power(np.eye(2), Fraction(0))


@given(seed=st.integers(0, 2**32 - 1), dim=st.integers(2, 6), l=st.integers(1, 5))
def test_root_power_recovers_density(seed, dim, l):
    rho = random_density(dim, np.random.default_rng(seed))
    root = rho.power((1, l))
    assert np.max(np.abs(np.linalg.matrix_power(root, l) - rho.matrix)) < 1e-10


def test_trace_product_small_cases():
    assert trace_product([np.eye(2)]) == pytest.approx(2.0)
    Z = np.diag([1.0, -1.0])
    assert trace_product([Z, Z]) == pytest.approx(2.0)


def test_trace_product_matches_full_product(rng):
    A, B, C = (random_unitary(4, rng) for _ in range(3))
    assert trace_product([A, B, C]) == pytest.approx(np.trace(A @ B @ C), abs=1e-12)


@given(seed=st.integers(0, 2**32 - 1), dim=st.integers(2, 5), count=st.integers(1, 6))
def test_trace_product_cyclic_invariance(seed, dim, count):
    rng = np.random.default_rng(seed)
    factors = [random_unitary(dim, rng) @ random_hermitian(dim, rng) for _ in range(count)]
    reference = trace_product(factors)
    scale = float(np.prod([np.linalg.norm(F) for F in factors]))
    for shift in range(1, count):
        rotated = factors[shift:] + factors[:shift]
        assert abs(trace_product(rotated) - reference) <= 1e-12 * scale


def test_trace_product_rejects_bad_factors():
    with pytest.raises(DimensionMismatch):
        trace_product([])
    with pytest.raises(DimensionMismatch):
        trace_product([np.eye(2), np.eye(3)])


def test_ordered_exp_zero_generator():
    U = ordered_exp(lambda s: np.zeros((3, 3)), 2.0, 16)
    assert np.allclose(U, np.eye(3))


def test_ordered_exp_constant_generator(rng):
    J = random_hermitian(3, rng)
    U = ordered_exp(lambda s: J, 0.7, 64)
    assert np.max(np.abs(U - hermitian_expm(J, 0.7))) < 1e-12


def test_ordered_exp_commuting_family(rng):
    J0 = random_hermitian(3, rng)
    U = ordered_exp(lambda s: np.cos(s) * J0, 1.5, 2048)
    assert np.max(np.abs(U - hermitian_expm(J0, np.sin(1.5)))) < 1e-5


def test_ordered_exp_rejects_changing_dimension():
    with pytest.raises(DimensionMismatch):
        ordered_exp(lambda s: np.eye(2) if s < 0.5 else np.eye(3), 1.0, 4)
    with pytest.raises(ValueError):
        ordered_exp(lambda s: np.eye(2), 1.0, 0)


def _twisting_generator(s):
    return np.array([[np.cos(3 * s), 1.0 + s - 0.5j * s**2], [1.0 + s + 0.5j * s**2, -np.sin(2 * s)]])


@pytest.mark.parametrize("steps", [1, 16, 256, 2048])
def test_ordered_exp_stays_unitary(steps):
    U = ordered_exp(_twisting_generator, 2.0, steps)
    assert np.max(np.abs(U.conj().T @ U - np.eye(2))) <= 1e-10 * steps
