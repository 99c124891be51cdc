"""Parallel-transporting unitary paths.

A path U(s) parallel transports the basis {|A_k>} when the transported states
U(s)|A_k> accumulate no local phase, i.e. the generator has no diagonal part
in the transported basis.
"""

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from domain.errors import DimensionMismatch, TooFewSamples, NotUnitary
from domain.linalg import (
    DEFAULT_STEPS,
    ComplexMatrix,
    Generator,
    as_matrix,
    hermitian_expm,
    require_hermitian,
    require_unitary,
)

PATH_UNITARY_TOL = 1e-9
PATH_ORIGIN_TOL = 1e-10


def _strip_diagonal(J: ComplexMatrix, basis: ComplexMatrix) -> ComplexMatrix:
    coords = basis.conj().T @ J @ basis
    np.fill_diagonal(coords, 0.0)
    return basis @ coords @ basis.conj().T


@dataclass(frozen=True, eq=False)
class UnitaryPath:
    """Sampled one-parameter family of unitaries starting at the identity."""

    s: npt.NDArray[np.float64]
    unitaries: npt.NDArray[np.complex128]
    generator: Generator | None = None

    def __post_init__(self):
        if self.s.ndim != 1 or self.unitaries.shape[0] != self.s.size:
            raise DimensionMismatch(
                f"{self.s.size} parameters for {self.unitaries.shape[0]} unitaries"
            )
        if np.any(np.diff(self.s) <= 0):
            raise ValueError("Path parameters must be strictly increasing")
        dim = self.unitaries.shape[1]
        identity = np.eye(dim)
        origin_err = float(np.max(np.abs(self.unitaries[0] - identity)))
        if origin_err > PATH_ORIGIN_TOL:
            raise NotUnitary(f"Path must start at the identity: deviation {origin_err:.3e}")
        gram = np.einsum("nji,njk->nik", self.unitaries.conj(), self.unitaries)
        unitary_err = float(np.max(np.abs(gram - identity)))
        if unitary_err > PATH_UNITARY_TOL:
            raise NotUnitary(f"Path sample not unitary: max deviation {unitary_err:.3e}")

    def __len__(self) -> int:
        return int(self.s.size)

    @property
    def dim(self) -> int:
        return int(self.unitaries.shape[1])

    @property
    def final(self) -> ComplexMatrix:
        return self.unitaries[-1]

    def transported_basis(self, basis: npt.ArrayLike, index: int = -1) -> ComplexMatrix:
        return self.unitaries[index] @ as_matrix(basis)

    @classmethod
    def from_function(
        cls, func: Callable[[float], npt.ArrayLike], s_end: float, steps: int = DEFAULT_STEPS
    ) -> "UnitaryPath":
        """Sample a closed-form U(s) on a uniform grid over [0, s_end]."""
        s = np.linspace(0.0, s_end, steps + 1)
        return cls(s=s, unitaries=np.stack([as_matrix(func(x)) for x in s]))


def project_parallel(J: npt.ArrayLike, basis: npt.ArrayLike) -> ComplexMatrix:
    """
    Remove the diagonal of J in the given basis.

    The result satisfies <A_k|J'|A_k> = 0 for every basis column and is
    therefore traceless.

    Raises:
        NotHermitian, NotUnitary
    """
    return _strip_diagonal(require_hermitian(J), require_unitary(basis))


def transport_path(
    generator: Generator,
    basis: npt.ArrayLike,
    s_end: float,
    steps: int = DEFAULT_STEPS,
) -> UnitaryPath:
    """
    Integrate a parallel-transporting path driven by ``generator``.

    Each step projects J(s_mid) off-diagonal in the currently transported
    basis U(s)|A_k>. A half-step predictor supplies the midpoint basis so the
    scheme stays second order.

    Raises:
        DimensionMismatch: If the generator dimension differs from the basis
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    if s_end <= 0:
        raise ValueError(f"s_end must be positive, got {s_end}")
    V = require_unitary(basis)
    dim = V.shape[0]
    h = s_end / steps

    U = np.eye(dim, dtype=np.complex128)
    samples = [U]
    for i in range(steps):
        J = require_hermitian(generator((i + 0.5) * h))
        if J.shape != U.shape:
            raise DimensionMismatch(f"Generator dimension {J.shape[0]} does not match basis dimension {dim}")
        predicted = hermitian_expm(_strip_diagonal(J, U @ V), 0.5 * h) @ U
        U = hermitian_expm(_strip_diagonal(J, predicted @ V), h) @ U
        samples.append(U)

    return UnitaryPath(
        s=np.linspace(0.0, s_end, steps + 1),
        unitaries=np.stack(samples),
        generator=generator,
    )


def transport_defect(path: UnitaryPath, basis: npt.ArrayLike) -> float:
    """
    Largest local phase rate |arg<A_k|U_i^dagger U_{i+1}|A_k>| / ds along the path.

    Zero for perfect parallel transport.

    Raises:
        TooFewSamples: If the path has fewer than two samples
    """
    if len(path) < 2:
        raise TooFewSamples(f"Need at least 2 path samples, got {len(path)}")
    V = require_unitary(basis)
    U = path.unitaries
    steps = np.einsum("nji,njk->nik", U[:-1].conj(), U[1:])
    diagonal = np.einsum("ik,nij,jk->nk", V.conj(), steps, V)
    rates = np.abs(np.angle(diagonal)) / np.diff(path.s)[:, None]
    return float(np.max(rates))
