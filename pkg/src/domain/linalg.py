"""Dense complex linear-algebra kernel.

Hermitian eigendecomposition, fractional powers of positive semidefinite
matrices, traces of products and path-ordered exponentials. Everything here
is a pure function on numpy arrays.
"""

from collections.abc import Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import numpy.typing as npt
from scipy.linalg import eigh, expm

from domain.errors import (
    DimensionMismatch,
    NonFiniteEntries,
    NotHermitian,
    NotPSD,
    NotUnitary,
)

ComplexMatrix = npt.NDArray[np.complex128]
Generator = Callable[[float], npt.ArrayLike]

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
DEGENERACY_TOL = 1e-9
UNITARY_TOL = 1e-10
DEFAULT_STEPS = 1024

# eigenvalues this small (relative to max(1, lambda_max)) are roundoff
EIGEN_ZERO_FLOOR = 1e-12


def as_matrix(M: npt.ArrayLike) -> ComplexMatrix:
    """Coerce to a square, finite complex128 matrix."""
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise DimensionMismatch(f"Expected a square N x N matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NonFiniteEntries("Matrix contains NaN or Inf entries")
    return A


def hermiticity_error(M: ComplexMatrix) -> float:
    return float(np.max(np.abs(M - M.conj().T)))


def require_hermitian(M: npt.ArrayLike, tol: float = HERMITIAN_TOL) -> ComplexMatrix:
    A = as_matrix(M)
    err = hermiticity_error(A)
    if err > tol:
        raise NotHermitian(f"max |M - M^dagger| = {err:.3e} exceeds {tol:.1e}")
    return 0.5 * (A + A.conj().T)


def unitarity_error(U: ComplexMatrix) -> float:
    identity = np.eye(U.shape[0])
    return float(np.max(np.abs(U.conj().T @ U - identity)))


def require_unitary(U: npt.ArrayLike, tol: float = UNITARY_TOL) -> ComplexMatrix:
    A = as_matrix(U)
    err = unitarity_error(A)
    if err > tol:
        raise NotUnitary(f"max |U^dagger U - I| = {err:.3e} exceeds {tol:.1e}")
    return A


def fix_column_phases(V: ComplexMatrix) -> ComplexMatrix:
    """Make the largest-magnitude entry of every column real and positive."""
    rows = np.argmax(np.abs(V), axis=0)
    pivots = V[rows, np.arange(V.shape[1])]
    return V * (pivots.conj() / np.abs(pivots))


def eigen_groups(
    eigenvalues: npt.ArrayLike, tol: float = DEGENERACY_TOL
) -> list[npt.NDArray[np.intp]]:
    """
    Partition ascending eigenvalues into degenerate blocks.

    Neighbouring eigenvalues closer than ``tol`` share a block, so a chain of
    near-equal values forms one group.

    Returns:
        List of index arrays, one per eigenspace block, in ascending order
    """
    values = np.asarray(eigenvalues, dtype=float)
    if values.size == 0:
        return []
    breaks = np.flatnonzero(np.diff(values) > tol) + 1
    return np.split(np.arange(values.size), breaks)


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues ascending, eigenvectors as the columns of a unitary matrix."""

    eigenvalues: npt.NDArray[np.float64]
    eigenvectors: ComplexMatrix

    @property
    def dim(self) -> int:
        return int(self.eigenvalues.size)

    def reconstruct(self) -> ComplexMatrix:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T

    def groups(self, tol: float = DEGENERACY_TOL) -> list[npt.NDArray[np.intp]]:
        return eigen_groups(self.eigenvalues, tol)

    def apply(self, func: Callable[[npt.NDArray[np.float64]], npt.ArrayLike]) -> ComplexMatrix:
        """Operator function V f(Lambda) V^dagger."""
        V = self.eigenvectors
        return (V * np.asarray(func(self.eigenvalues))) @ V.conj().T


def hermitian_eig(M: npt.ArrayLike, tol: float = HERMITIAN_TOL) -> SpectralDecomposition:
    """
    Eigendecomposition of a Hermitian matrix.

    Args:
        M: Hermitian matrix (to ``tol`` in max entry)
        tol: Hermiticity tolerance

    Returns:
        SpectralDecomposition with ascending eigenvalues and phase-fixed eigenvectors

    Raises:
        NotHermitian: If max |M - M^dagger| > tol
    """
    H = require_hermitian(M, tol)
    values, vectors = eigh(H)
    return SpectralDecomposition(
        eigenvalues=np.asarray(values, dtype=np.float64),
        eigenvectors=fix_column_phases(np.asarray(vectors, dtype=np.complex128)),
    )


def _as_exponent(exponent: Fraction | int | tuple[int, int]) -> Fraction:
    if isinstance(exponent, tuple):
        exponent = Fraction(*exponent)
    value = Fraction(exponent)
    if value <= 0:
        raise ValueError(f"Exponent must be a positive rational, got {value}")
    return value


def clamp_spectrum(eigenvalues: npt.NDArray[np.float64], tol: float = PSD_TOL) -> npt.NDArray[np.float64]:
    """
    Clamp roundoff in a PSD spectrum.

    Raises:
        NotPSD: If the smallest eigenvalue is below -tol
    """
    smallest = float(np.min(eigenvalues))
    if smallest < -tol:
        raise NotPSD(f"Minimum eigenvalue {smallest:.3e} is below -{tol:.1e}")
    floor = EIGEN_ZERO_FLOOR * max(1.0, float(np.max(eigenvalues)))
    return np.where(eigenvalues <= floor, 0.0, eigenvalues)


def spectral_power(
    spectrum: SpectralDecomposition, exponent: Fraction | int | tuple[int, int]
) -> ComplexMatrix:
    p = _as_exponent(exponent)
    clamped = clamp_spectrum(spectrum.eigenvalues)
    return spectrum.apply(lambda _: clamped ** float(p))


def psd_power(M: npt.ArrayLike, exponent: Fraction | int | tuple[int, int]) -> ComplexMatrix:
    """
    Fractional power M^(p/q) of a positive semidefinite matrix.

    Args:
        M: Positive semidefinite matrix
        exponent: Positive rational, e.g. ``Fraction(1, 3)`` or ``(1, 3)``

    Returns:
        V Lambda^(p/q) V^dagger with the spectrum clamped to [0, inf)

    Raises:
        NotHermitian, NotPSD
    """
    return spectral_power(hermitian_eig(M), exponent)


def trace_product(factors: Sequence[npt.ArrayLike]) -> complex:
    """Tr(F1 F2 ... Fm) for equally sized square factors."""
    if len(factors) == 0:
        raise DimensionMismatch("trace_product needs at least one factor")
    mats = [as_matrix(F) for F in factors]
    dim = mats[0].shape[0]
    if any(F.shape[0] != dim for F in mats):
        raise DimensionMismatch(f"Factor dimensions differ: {[F.shape[0] for F in mats]}")
    if len(mats) == 1:
        return complex(np.trace(mats[0]))
    head = mats[0] if len(mats) == 2 else np.linalg.multi_dot(mats[:-1])
    # Tr(AB) = sum_ij A_ij B_ji
    return complex(np.einsum("ij,ji->", head, mats[-1]))


def hermitian_expm(H: ComplexMatrix, t: float) -> ComplexMatrix:
    """exp(-i t H)."""
    return np.asarray(expm(-1j * t * H), dtype=np.complex128)


def ordered_exp(generator: Generator, s_end: float, steps: int = DEFAULT_STEPS) -> ComplexMatrix:
    """
    Path-ordered exponential P exp(-i int_0^s_end J(s) ds).

    Per-step exponentials are evaluated at step midpoints and multiplied with
    later factors on the left, giving second-order accuracy in the step size.

    Raises:
        DimensionMismatch: If the generator changes dimension along the path
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    h = s_end / steps
    U: ComplexMatrix | None = None
    for i in range(steps):
        J = as_matrix(generator((i + 0.5) * h))
        if U is None:
            U = np.eye(J.shape[0], dtype=np.complex128)
        elif J.shape != U.shape:
            raise DimensionMismatch(
                f"Generator dimension changed from {U.shape[0]} to {J.shape[0]} at s={(i + 0.5) * h}"
            )
        U = hermitian_expm(J, h) @ U
    assert U is not None
    return U
