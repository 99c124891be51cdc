"""Density operators, interference-based orthogonality and orthogonal families."""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np
import numpy.typing as npt

from domain.errors import NotConnected, NotHermitian, NotPSD, TraceNotOne
from domain.linalg import (
    HERMITIAN_TOL,
    PSD_TOL,
    ComplexMatrix,
    SpectralDecomposition,
    as_matrix,
    clamp_spectrum,
    hermitian_eig,
    hermiticity_error,
    require_unitary,
    spectral_power,
)

TRACE_TOL = 1e-10
RANK_TOL = 1e-10
ORTHOGONALITY_TOL = 1e-9
CONNECTION_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Validated density matrix with its cached spectral decomposition."""

    matrix: ComplexMatrix
    spectrum: SpectralDecomposition
    rank: int
    _powers: dict[Fraction, ComplexMatrix] = field(
        default_factory=dict, init=False, repr=False, compare=False
    )

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def eigenvalues(self) -> npt.NDArray[np.float64]:
        return self.spectrum.eigenvalues

    @property
    def is_pure(self) -> bool:
        return self.rank == 1

    def power(self, exponent: Fraction | int | tuple[int, int]) -> ComplexMatrix:
        """rho^(p/q) from the cached spectrum; results are memoised per exponent."""
        key = Fraction(*exponent) if isinstance(exponent, tuple) else Fraction(exponent)
        if key not in self._powers:
            self._powers[key] = spectral_power(self.spectrum, key)
        return self._powers[key]

    def to_json(self) -> dict[str, Any]:
        return {
            "dim": self.dim,
            "re": self.matrix.real.tolist(),
            "im": self.matrix.imag.tolist(),
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "DensityOperator":
        matrix = np.asarray(data["re"], dtype=float) + 1j * np.asarray(data["im"], dtype=float)
        if matrix.shape != (data["dim"], data["dim"]):
            raise ValueError(f"Declared dim {data['dim']} does not match matrix shape {matrix.shape}")
        return make_density(matrix)


@dataclass(frozen=True, eq=False)
class OrthogonalFamily:
    """
    N mutually orthogonal density operators generated by the cyclic shift.

    ``members[n]`` carries eigenvalue ``eigenvalues[k]`` on basis column
    ``(k + n) mod N``; ``eigenvalues`` is sorted descending.
    """

    members: tuple[DensityOperator, ...]
    basis: ComplexMatrix
    shift: ComplexMatrix
    eigenvalues: npt.NDArray[np.float64]

    def __len__(self) -> int:
        return len(self.members)

    def __getitem__(self, index: int) -> DensityOperator:
        return self.members[index]

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.eigenvalues > RANK_TOL))

    def weights(self, n: int) -> npt.NDArray[np.float64]:
        """Eigenvalues of member ``n`` listed against the basis columns."""
        return np.roll(clamp_spectrum(self.eigenvalues), n)

    def shift_power(self, power: int) -> ComplexMatrix:
        return np.linalg.matrix_power(self.shift, power % self.dim)


def make_density(matrix: npt.ArrayLike) -> DensityOperator:
    """
    Validate a matrix as a density operator.

    Raises:
        NotHermitian: If max |rho - rho^dagger| > 1e-10
        NotPSD: If an eigenvalue is below -1e-10
        TraceNotOne: If |Tr rho - 1| > 1e-10
    """
    rho = as_matrix(matrix)
    err = hermiticity_error(rho)
    if err > HERMITIAN_TOL:
        raise NotHermitian(f"Density operator must be Hermitian: max |rho - rho^dagger| = {err:.3e}")
    spectrum = hermitian_eig(rho)
    smallest = float(spectrum.eigenvalues[0])
    if smallest < -PSD_TOL:
        raise NotPSD(f"Density operator must be positive semidefinite: min eigenvalue {smallest:.3e}")
    trace = complex(np.trace(rho))
    if abs(trace - 1.0) > TRACE_TOL:
        raise TraceNotOne(f"Density operator must have unit trace: Tr rho = {trace.real:.12g}")
    rank = int(np.count_nonzero(spectrum.eigenvalues > RANK_TOL))
    return DensityOperator(matrix=0.5 * (rho + rho.conj().T), spectrum=spectrum, rank=rank)


def shift_unitary(basis: npt.ArrayLike) -> ComplexMatrix:
    """
    Cyclic shift U_g = sum_n |A_{n+1 mod N}><A_n| over the basis columns.

    Raises:
        NotUnitary: If the basis is not unitary to 1e-10
    """
    V = require_unitary(basis)
    dim = V.shape[0]
    cycle = np.roll(np.eye(dim), 1, axis=0)
    return V @ cycle @ V.conj().T


def generate_family(rho1: DensityOperator) -> OrthogonalFamily:
    """
    Build the N mutually orthogonal operators rho_n = U_g^n rho1 U_g^-n.

    The eigenbasis of ``rho1`` is taken in descending eigenvalue order.
    """
    order = np.arange(rho1.dim)[::-1]
    eigenvalues = rho1.eigenvalues[order]
    basis = rho1.spectrum.eigenvectors[:, order]
    shift = shift_unitary(basis)
    members = tuple(
        make_density((basis * np.roll(eigenvalues, n)) @ basis.conj().T)
        for n in range(rho1.dim)
    )
    return OrthogonalFamily(members=members, basis=basis, shift=shift, eigenvalues=eigenvalues)


def max_overlap(rhoA: DensityOperator, U: npt.ArrayLike) -> float:
    """
    Largest |<A_j|U|A_k>| with j, k in the same nonzero eigenvalue group of rhoA.

    Zero for an orthogonal pair; exposed as a raw diagnostic for nearly
    orthogonal pairs. The kernel of rhoA carries no weight in the
    interference term and is skipped.
    """
    V = rhoA.spectrum.eigenvectors
    W = V.conj().T @ as_matrix(U) @ V
    return max(
        float(np.max(np.abs(W[np.ix_(group, group)])))
        for group in rhoA.spectrum.groups()
        if rhoA.eigenvalues[group[-1]] > RANK_TOL
    )


def are_orthogonal(
    rhoA: DensityOperator,
    rhoB: DensityOperator,
    U: npt.ArrayLike,
    tol: float = ORTHOGONALITY_TOL,
) -> bool:
    """
    Interference orthogonality of rhoA and rhoB = U rhoA U^dagger.

    Raises:
        NotUnitary: If U is not unitary
        NotConnected: If rhoB differs from U rhoA U^dagger by more than 1e-8
    """
    W = require_unitary(U)
    gap = float(np.max(np.abs(rhoB.matrix - W @ rhoA.matrix @ W.conj().T)))
    if gap > CONNECTION_TOL:
        raise NotConnected(f"rhoB is not U rhoA U^dagger: max deviation {gap:.3e}")
    return max_overlap(rhoA, W) <= tol


def interference_profile(rhoA: DensityOperator, U: npt.ArrayLike, chi: float) -> float:
    """Intensity 2 + 2 sum_k lambda_k |<A_k|U|A_k>| cos(chi - arg<A_k|U|A_k>)."""
    W = require_unitary(U)
    V = rhoA.spectrum.eigenvectors
    overlaps = np.einsum("ik,ij,jk->k", V.conj(), W, V)
    weights = rhoA.eigenvalues
    return float(2.0 + 2.0 * np.sum(weights * np.abs(overlaps) * np.cos(chi - np.angle(overlaps))))
