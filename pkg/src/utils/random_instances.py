"""Seeded random states, unitaries and phases for scans and property checks."""

import numpy as np
import numpy.typing as npt

from domain.linalg import ComplexMatrix
from domain.states import DensityOperator, OrthogonalFamily, generate_family, make_density


def complex_gaussian(shape: tuple[int, ...], rng: np.random.Generator) -> npt.NDArray[np.complex128]:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_unitary(dim: int, rng: np.random.Generator) -> ComplexMatrix:
    """Haar-random unitary from the QR decomposition of a complex Gaussian matrix."""
    q, r = np.linalg.qr(complex_gaussian((dim, dim), rng))
    diagonal = np.diag(r)
    return q * (diagonal / np.abs(diagonal))


def random_hermitian(dim: int, rng: np.random.Generator) -> ComplexMatrix:
    G = complex_gaussian((dim, dim), rng)
    return 0.5 * (G + G.conj().T)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> DensityOperator:
    """
    rho = G G^dagger / Tr(G G^dagger) for a complex Gaussian dim x rank matrix G.

    Args:
        dim: Hilbert-space dimension
        rng: Seeded generator
        rank: Number of nonzero eigenvalues, full rank by default
    """
    rank = dim if rank is None else rank
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must lie in [1, {dim}], got {rank}")
    G = complex_gaussian((dim, rank), rng)
    gram = G @ G.conj().T
    return make_density(gram / np.trace(gram).real)


def random_family(dim: int, rng: np.random.Generator, rank: int | None = None) -> OrthogonalFamily:
    return generate_family(random_density(dim, rng, rank))


def random_phases(dim: int, rng: np.random.Generator) -> npt.NDArray[np.complex128]:
    return np.exp(2j * np.pi * rng.random(dim))


def random_special_phases(dim: int, rng: np.random.Generator, product: complex = 1.0) -> npt.NDArray[np.complex128]:
    """Unit-modulus phases whose product equals ``product`` (itself of unit modulus)."""
    phases = random_phases(dim, rng)
    phases[-1] = product / np.prod(phases[:-1])
    return phases


def randomize_eigenphases(rho: DensityOperator, rng: np.random.Generator) -> DensityOperator:
    """Rebuild rho from its eigenvectors multiplied by random phases, mixing within degenerate groups."""
    V = rho.spectrum.eigenvectors.copy()
    for group in rho.spectrum.groups():
        V[:, group] = V[:, group] @ random_unitary(group.size, rng)
    V = V * random_phases(rho.dim, rng)
    return make_density((V * rho.eigenvalues) @ V.conj().T)
