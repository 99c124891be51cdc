"""
Tests for density operators, the cyclic shift and orthogonal families
"""
import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from domain.errors import NotConnected, NotHermitian, NotPSD, NotUnitary, TraceNotOne
from domain.states import (
    DensityOperator,
    are_orthogonal,
    generate_family,
    interference_profile,
    make_density,
    max_overlap,
    shift_unitary,
)
from domain.twophoton import flip
from utils.random_instances import random_family, random_unitary


def _rotated(diagonal, basis):
    return make_density((basis * np.asarray(diagonal)) @ basis.conj().T)


def test_make_density_maximally_mixed():
    rho = make_density(np.eye(2) / 2)
    assert rho.rank == 2
    assert not rho.is_pure


def test_make_density_pure_state():
    rho = make_density(np.diag([1.0, 0.0]))
    assert rho.rank == 1
    assert rho.is_pure


@pytest.mark.parametrize(
    "matrix, error",
    [
        (np.diag([0.7, 0.4]), TraceNotOne),
        (np.diag([1.5, -0.5]), NotPSD),
        (np.array([[0.5, 0.3], [0.0, 0.5]]), NotHermitian),
    ],
)
def test_make_density_rejects_invalid(matrix, error):
    with pytest.raises(error):
        make_density(matrix)


def test_density_power_is_cached():
    rho = make_density(np.diag([0.64, 0.36]))
    first = rho.power((1, 2))
    assert rho.power((1, 2)) is first
    assert np.allclose(first, np.diag([0.8, 0.6]))


def test_density_json_restores_matrix(rng):
    rho = random_family(3, rng)[1]
    restored = DensityOperator.from_json(rho.to_json())
    assert np.array_equal(restored.matrix, rho.matrix)
    with pytest.raises(ValueError):
        DensityOperator.from_json({**rho.to_json(), "dim": 2})


def test_shift_unitary_qubit():
    U = shift_unitary(np.eye(2))
    assert np.allclose(U, [[0, 1], [1, 0]])
    # <A_2|U_g|A_1> = 1
    assert U[1, 0] == pytest.approx(1.0)


def test_shift_unitary_qutrit_is_cyclic():
    U = shift_unitary(np.eye(3))
    assert np.allclose(U @ np.eye(3)[:, 0], np.eye(3)[:, 1])
    assert np.allclose(np.linalg.matrix_power(U, 3), np.eye(3))


def test_shift_unitary_random_basis(rng):
    U = shift_unitary(random_unitary(4, rng))
    assert np.max(np.abs(np.linalg.matrix_power(U, 4) - np.eye(4))) < 1e-10


def test_shift_unitary_rejects_non_unitary_basis():
    with pytest.raises(NotUnitary):
        shift_unitary(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_generate_family_polarization_pair():
    r = 0.5
    family = generate_family(make_density(np.diag([(1 + r) / 2, (1 - r) / 2])))
    assert len(family) == 2
    assert np.allclose(family[1].matrix, np.diag([0.25, 0.75]))


def test_generate_family_maximally_mixed():
    family = generate_family(make_density(np.eye(3) / 3))
    for member in family.members:
        assert np.allclose(member.matrix, np.eye(3) / 3)


def test_generate_family_cyclic_relabeling(rng):
    basis = random_unitary(3, rng)
    family = generate_family(_rotated([0.2, 0.5, 0.3], basis))
    assert np.allclose(family.eigenvalues, [0.5, 0.3, 0.2])
    in_basis = family.basis.conj().T @ family[1].matrix @ family.basis
    assert np.allclose(in_basis, np.diag([0.2, 0.5, 0.3]), atol=1e-12)
    assert np.allclose(family.weights(1), [0.2, 0.5, 0.3])


def test_generate_family_members_are_shift_conjugates(rng):
    family = random_family(4, rng)
    for n in range(4):
        W = family.shift_power(n)
        assert np.max(np.abs(family[n].matrix - W @ family[0].matrix @ W.conj().T)) < 1e-12


def test_are_orthogonal_flipped_polarization():
    rho1 = make_density(np.diag([0.75, 0.25]))
    F = flip()
    rho2 = make_density(F @ rho1.matrix @ F.conj().T)
    assert are_orthogonal(rho1, rho2, F)


def test_are_orthogonal_identity_is_not():
    rho = make_density(np.diag([0.6, 0.3, 0.1]))
    assert not are_orthogonal(rho, rho, np.eye(3))


def test_are_orthogonal_maximally_mixed_reflection():
    rho = make_density(np.eye(2) / 2)
    U = np.diag([1.0, -1.0])
    assert max_overlap(rho, U) == pytest.approx(1.0)
    assert not are_orthogonal(rho, rho, U)


def test_are_orthogonal_rejects_unconnected_pair():
    rho1 = make_density(np.diag([0.75, 0.25]))
    with pytest.raises(NotConnected):
        are_orthogonal(rho1, rho1, flip())


@given(seed=st.integers(0, 2**32 - 1), dim=st.integers(2, 5))
def test_family_members_pairwise_orthogonal(seed, dim):
    family = random_family(dim, np.random.default_rng(seed))
    for n, m in itertools.permutations(range(dim), 2):
        assert are_orthogonal(family[n], family[m], family.shift_power(m - n))


@pytest.mark.parametrize("diagonal", [[1.0, 0.0, 0.0], [0.7, 0.3, 0.0, 0.0]])
def test_rank_deficient_family_pairwise_orthogonal(diagonal):
    family = generate_family(make_density(np.diag(diagonal)))
    chis = np.linspace(0.0, 2 * np.pi, 64, endpoint=False)
    for n, m in itertools.permutations(range(family.dim), 2):
        W = family.shift_power(m - n)
        assert max_overlap(family[n], W) < 1e-12
        assert are_orthogonal(family[n], family[m], W)
        profile = [interference_profile(family[n], W, chi) for chi in chis]
        assert np.ptp(profile) < 1e-12


@given(seed=st.integers(0, 2**32 - 1), dim=st.integers(3, 5), data=st.data())
def test_random_low_rank_family_pairwise_orthogonal(seed, dim, data):
    rank = data.draw(st.integers(1, dim - 1))
    family = random_family(dim, np.random.default_rng(seed), rank)
    for n, m in itertools.permutations(range(dim), 2):
        assert are_orthogonal(family[n], family[m], family.shift_power(m - n))


def test_degenerate_nonzero_group_still_counts():
    rho = make_density(np.diag([0.5, 0.5, 0.0]))
    swap = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    # any basis of the half-weight plane sees an entry of the swap block >= 1/sqrt(2)
    assert max_overlap(rho, swap) >= 1 / np.sqrt(2) - 1e-12
    assert not are_orthogonal(rho, rho, swap)


def test_interference_profile_identity():
    rho = make_density(np.diag([0.6, 0.4]))
    assert interference_profile(rho, np.eye(2), 0.0) == pytest.approx(4.0)


def test_interference_profile_flat_for_orthogonal_pair():
    rho = make_density(np.diag([0.75, 0.25]))
    for chi in np.linspace(0.0, 2 * np.pi, 9):
        assert interference_profile(rho, flip(), chi) == pytest.approx(2.0, abs=1e-12)


def test_interference_profile_opposite_phases_cancel():
    rho = make_density(np.eye(2) / 2)
    U = np.diag([np.exp(0.5j * np.pi), np.exp(-0.5j * np.pi)])
    assert interference_profile(rho, U, 0.0) == pytest.approx(2.0, abs=1e-12)
