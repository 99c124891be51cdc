"""Closed-form phase results for qubits and for diagonal and permuting unitaries.

Also holds the Bloch-sphere tools used to relate a transported qubit loop to
the solid angle it encloses.
"""

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np
import numpy.typing as npt

from domain.errors import (
    InvalidSequence,
    NotDiagonalInBasis,
    NotPermuting,
    NotUnitModulus,
    OutOfRange,
    TooFewSamples,
)
from domain.linalg import DEFAULT_STEPS, ComplexMatrix, as_matrix, require_unitary
from domain.phases import PHASE_TOL, PhaseResult, gamma_mixed, phi, principal_arg, validate_sequence
from domain.states import DensityOperator, OrthogonalFamily, make_density
from domain.transport import UnitaryPath, transport_path

UNIT_MODULUS_TOL = 1e-12
STRUCTURE_TOL = 1e-10
REALITY_TOL = 1e-10

DEFAULT_ETAS = tuple(np.linspace(0.0, 1.0, 21))
DEFAULT_ALPHAS = tuple(np.arange(129) * np.pi / 64)
DEFAULT_LAMBDA1S = (0.5, 0.6, 0.75, 0.9, 1.0)

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)


# ---------------------------------------------------------------------------
# Qubit closed forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QubitScanPoint:
    """Closed-form qubit traces Tr(U rho1), Tr(U rho2), Tr(U sqrt(rho1) U sqrt(rho2))."""

    eta: float
    alpha: float
    lambda1: float
    t1: complex
    t2: complex
    t12: complex

    @property
    def lambda2(self) -> float:
        return 1.0 - self.lambda1

    @property
    def traces(self) -> tuple[complex, complex, complex]:
        return self.t1, self.t2, self.t12

    def phases(self, tol: float = PHASE_TOL) -> tuple[PhaseResult, PhaseResult, PhaseResult]:
        return phi(self.t1, tol), phi(self.t2, tol), phi(self.t12, tol)

    def all_indeterminate(self, tol: float = PHASE_TOL) -> bool:
        return not any(phase.is_determinate for phase in self.phases(tol))


def _require_unit_interval(name: str, value: float) -> float:
    if not 0.0 <= value <= 1.0:
        raise OutOfRange(f"{name} must lie in [0, 1], got {value}")
    return float(value)


def qubit_traces(eta: float, alpha: float, lambda1: float) -> QubitScanPoint:
    """
    Traces for rho1 = diag(lambda1, lambda2), rho2 = diag(lambda2, lambda1) and
    an SU(2) unitary with U11 = conj(U22) = eta e^(i alpha).

    Raises:
        OutOfRange: If eta or lambda1 is outside [0, 1]
    """
    eta = _require_unit_interval("eta", eta)
    lambda1 = _require_unit_interval("lambda1", lambda1)
    lambda2 = 1.0 - lambda1
    rotor = np.exp(1j * alpha)
    return QubitScanPoint(
        eta=eta,
        alpha=float(alpha),
        lambda1=lambda1,
        t1=complex(eta * (lambda1 * rotor + lambda2 * rotor.conjugate())),
        t2=complex(eta * (lambda1 * rotor.conjugate() + lambda2 * rotor)),
        t12=complex(2 * eta**2 * np.sqrt(lambda1 * lambda2) * np.cos(2 * alpha) - 1 + eta**2),
    )


def qubit_unitary(eta: float, alpha: float) -> ComplexMatrix:
    """SU(2) matrix [[eta e^(i alpha), s], [-s, eta e^(-i alpha)]] with s = sqrt(1 - eta^2)."""
    eta = _require_unit_interval("eta", eta)
    off = np.sqrt(1.0 - eta**2)
    rotor = eta * np.exp(1j * alpha)
    return np.array([[rotor, off], [-off, np.conj(rotor)]], dtype=np.complex128)


def qubit_pair(lambda1: float) -> tuple[DensityOperator, DensityOperator]:
    lambda1 = _require_unit_interval("lambda1", lambda1)
    lambda2 = 1.0 - lambda1
    return make_density(np.diag([lambda1, lambda2])), make_density(np.diag([lambda2, lambda1]))


def cross_check_qubit_point(
    point: QubitScanPoint, pair: tuple[DensityOperator, DensityOperator] | None = None
) -> float:
    """Largest deviation between the closed-form traces and gamma_mixed on explicit matrices."""
    rho1, rho2 = pair if pair is not None else qubit_pair(point.lambda1)
    U = qubit_unitary(point.eta, point.alpha)
    direct = (
        gamma_mixed(U, [rho1]).raw_trace,
        gamma_mixed(U, [rho2]).raw_trace,
        gamma_mixed(U, [rho1, rho2]).raw_trace,
    )
    return max(abs(a - b) for a, b in zip(direct, point.traces))


def qubit_scan(
    etas: Iterable[float] = DEFAULT_ETAS,
    alphas: Iterable[float] = DEFAULT_ALPHAS,
    lambda1s: Iterable[float] = DEFAULT_LAMBDA1S,
) -> list[QubitScanPoint]:
    """Closed-form traces over the (eta, alpha, lambda1) grid, eta varying slowest."""
    return [
        qubit_traces(eta, alpha, lambda1)
        for eta, alpha, lambda1 in itertools.product(list(etas), list(alphas), list(lambda1s))
    ]


# ---------------------------------------------------------------------------
# Diagonal and permuting unitaries
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class StructuredUnitary:
    """Unitary that is diagonal or cyclically permuting in a given basis."""

    matrix: ComplexMatrix
    phases: npt.NDArray[np.complex128]
    basis: ComplexMatrix
    kind: Literal["diagonal", "permuting"]
    special: bool

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def determinant(self) -> complex:
        return complex(np.linalg.det(self.matrix))


@dataclass(frozen=True)
class PermutationCoefficient:
    """Non-negative weight f of a length-N sequence under a permuting SU(N) unitary."""

    sequence: tuple[int, ...]
    value: float
    raw_trace: complex


def _unit_phases(phases: Sequence[complex]) -> npt.NDArray[np.complex128]:
    values = np.asarray(phases, dtype=np.complex128).ravel()
    if values.size == 0:
        raise NotUnitModulus("At least one phase is required")
    deviation = float(np.max(np.abs(np.abs(values) - 1.0)))
    if deviation > UNIT_MODULUS_TOL:
        raise NotUnitModulus(f"Phases must have unit modulus: max ||z| - 1| = {deviation:.3e}")
    return values


def _resolve_basis(basis: npt.ArrayLike | None, dim: int) -> ComplexMatrix:
    if basis is None:
        return np.eye(dim, dtype=np.complex128)
    V = require_unitary(basis)
    if V.shape[0] != dim:
        raise InvalidSequence(f"{dim} phases given for a basis of dimension {V.shape[0]}")
    return V


def diagonal_unitary(phases: Sequence[complex], basis: npt.ArrayLike | None = None) -> StructuredUnitary:
    """
    U_d = sum_k U_kk |A_k><A_k|.

    Raises:
        NotUnitModulus: If any phase deviates from |z| = 1 by more than 1e-12
    """
    values = _unit_phases(phases)
    V = _resolve_basis(basis, values.size)
    return StructuredUnitary(
        matrix=(V * values) @ V.conj().T,
        phases=values,
        basis=V,
        kind="diagonal",
        special=bool(abs(np.prod(values) - 1.0) <= STRUCTURE_TOL),
    )


def permutation_unitary(phases: Sequence[complex], basis: npt.ArrayLike | None = None) -> StructuredUnitary:
    """
    U_p = U_12 |A_1><A_2| + U_23 |A_2><A_3| + ... + U_N1 |A_N><A_1|.

    ``phases[k]`` is the entry coupling |A_k> to <A_(k+1 mod N)|. The result
    lies in SU(N) exactly when the phase product equals (-1)^(N-1).

    Raises:
        NotUnitModulus
    """
    values = _unit_phases(phases)
    dim = values.size
    V = _resolve_basis(basis, dim)
    pattern = np.zeros((dim, dim), dtype=np.complex128)
    pattern[np.arange(dim), (np.arange(dim) + 1) % dim] = values
    sign = (-1) ** (dim - 1)
    return StructuredUnitary(
        matrix=V @ pattern @ V.conj().T,
        phases=values,
        basis=V,
        kind="permuting",
        special=bool(abs(np.prod(values) - sign) <= STRUCTURE_TOL),
    )


def _in_family_basis(U: npt.ArrayLike, family: OrthogonalFamily) -> ComplexMatrix:
    W = require_unitary(U)
    if W.shape[0] != family.dim:
        raise InvalidSequence(f"Unitary dimension {W.shape[0]} differs from family dimension {family.dim}")
    return family.basis.conj().T @ W @ family.basis


def diagonal_trace(U_d: npt.ArrayLike, family: OrthogonalFamily, sequence: Sequence[int]) -> complex:
    """
    Closed form sum_k U_kk^l (lambda_k(j1) ... lambda_k(jl))^(1/l) of the trace for a diagonal U.

    Each term carries l eigenvalues from distinct members, so the trace
    vanishes whenever l exceeds the rank of the family.

    Raises:
        NotDiagonalInBasis: If U_d has off-diagonal entries above 1e-10 in the family basis
        InvalidSequence, LengthZero
    """
    W = _in_family_basis(U_d, family)
    off_diagonal = float(np.max(np.abs(W - np.diag(np.diag(W)))))
    if off_diagonal > STRUCTURE_TOL:
        raise NotDiagonalInBasis(f"Unitary is not diagonal in the family basis: max off-diagonal {off_diagonal:.3e}")
    indices = validate_sequence(sequence, len(family))
    l = len(indices)
    weights = np.prod([family.weights(j) for j in indices], axis=0) ** (1.0 / l)
    return complex(np.sum(np.diag(W) ** l * weights))


def _permuting_phases(U_p: npt.ArrayLike, family: OrthogonalFamily) -> npt.NDArray[np.complex128]:
    W = _in_family_basis(U_p, family)
    dim = family.dim
    rows = np.arange(dim)
    cols = (rows + 1) % dim
    phases = W[rows, cols]
    residual = W.copy()
    residual[rows, cols] = 0.0
    deviation = max(float(np.max(np.abs(residual))), float(np.max(np.abs(np.abs(phases) - 1.0))))
    if deviation > STRUCTURE_TOL:
        raise NotPermuting(f"Unitary does not cyclically permute the family basis: deviation {deviation:.3e}")
    return phases


def permutation_trace(U_p: npt.ArrayLike, family: OrthogonalFamily, sequence: Sequence[int]) -> complex:
    """
    Trace Tr(U_p rho_j1^(1/l) ... U_p rho_jl^(1/l)) by summing closed walks of the permutation.

    A walk starting at |A_k> visits |A_(k+m)> after m factors and only closes
    when l is a multiple of N; every shorter sequence gives zero.

    Raises:
        NotPermuting, InvalidSequence, LengthZero
    """
    phases = _permuting_phases(U_p, family)
    indices = validate_sequence(sequence, len(family))
    dim, l = family.dim, len(indices)
    if l % dim:
        return 0j
    roots = [family.weights(j) ** (1.0 / l) for j in indices]
    total = 0j
    for k in range(dim):
        term = 1.0 + 0j
        for m, root in enumerate(roots, start=1):
            term *= phases[(k + m - 1) % dim] * root[(k + m) % dim]
        total += term
    return complex(total)


def f_coefficient(U_p: npt.ArrayLike, family: OrthogonalFamily, sequence: Sequence[int]) -> PermutationCoefficient:
    """
    f = (-1)^(N-1) Tr(U_p rho_j1^(1/N) ... U_p rho_jN^(1/N)) for an SU(N) permuting unitary.

    Values in [-1e-10, 0) are clamped to zero.

    Raises:
        NotPermuting: If U_p is not a special permuting unitary, or f is not real and non-negative
        InvalidSequence: If the sequence does not have length N
    """
    phases = _permuting_phases(U_p, family)
    dim = family.dim
    if len(sequence) != dim:
        raise InvalidSequence(f"f needs a sequence of length {dim}, got {len(sequence)}")
    sign = (-1) ** (dim - 1)
    product = complex(np.prod(phases))
    if abs(product - sign) > STRUCTURE_TOL:
        raise NotPermuting(f"Phase product {product:.6g} differs from {sign}; unitary is not in SU({dim})")

    raw = permutation_trace(U_p, family, sequence)
    value = sign * raw
    if abs(value.imag) > REALITY_TOL:
        raise NotPermuting(f"f has imaginary part {value.imag:.3e}")
    if value.real < -REALITY_TOL:
        raise NotPermuting(f"f is negative: {value.real:.3e}")
    return PermutationCoefficient(
        sequence=tuple(int(j) for j in sequence),
        value=max(value.real, 0.0),
        raw_trace=raw,
    )


# ---------------------------------------------------------------------------
# Bloch sphere and transported loops
# ---------------------------------------------------------------------------


def bloch_vector(state: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Bloch vector (Tr rho sigma_x, Tr rho sigma_y, Tr rho sigma_z) of a qubit ket or density matrix."""
    arr = np.asarray(state, dtype=np.complex128)
    if arr.shape == (2,):
        arr = np.outer(arr, arr.conj()) / np.vdot(arr, arr).real
    rho = as_matrix(arr)
    if rho.shape != (2, 2):
        raise InvalidSequence(f"Bloch vectors need a qubit, got dimension {rho.shape[0]}")
    return np.array([np.trace(rho @ sigma).real for sigma in PAULI])


def _unit_vertices(vertices: npt.ArrayLike) -> npt.NDArray[np.float64]:
    points = np.asarray(vertices, dtype=float)
    if points.ndim != 2 or points.shape[1] != 3:
        raise InvalidSequence(f"Vertices must be an (n, 3) array, got shape {points.shape}")
    if points.shape[0] < 3:
        raise TooFewSamples(f"A spherical polygon needs at least 3 vertices, got {points.shape[0]}")
    norms = np.linalg.norm(points, axis=1, keepdims=True)
    if np.any(norms < STRUCTURE_TOL):
        raise OutOfRange("Vertices must be nonzero vectors")
    return points / norms


def enclosed_solid_angle(vertices: npt.ArrayLike) -> float:
    """
    Oriented solid angle of the geodesic polygon through ``vertices``.

    Triangles are fanned out from the first vertex; each contributes
    2 atan2(a.(b x c), 1 + a.b + b.c + c.a). Counter-clockwise loops seen from
    outside the sphere are positive.
    """
    points = _unit_vertices(vertices)
    a = points[0]
    total = 0.0
    for b, c in itertools.pairwise(points[1:]):
        numerator = float(np.dot(a, np.cross(b, c)))
        denominator = 1.0 + float(np.dot(a, b) + np.dot(b, c) + np.dot(c, a))
        total += 2.0 * np.arctan2(numerator, denominator)
    return total


def basis_from_bloch(direction: npt.ArrayLike) -> ComplexMatrix:
    """Qubit basis whose first column has Bloch vector ``direction`` and second the antipode."""
    x, y, z = np.asarray(direction, dtype=float) / np.linalg.norm(direction)
    theta = np.arccos(np.clip(z, -1.0, 1.0))
    azimuth = np.arctan2(y, x)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array(
        [[c, -np.exp(-1j * azimuth) * s], [np.exp(1j * azimuth) * s, c]],
        dtype=np.complex128,
    )


def geodesic_loop(vertices: npt.ArrayLike, steps: int = DEFAULT_STEPS) -> tuple[UnitaryPath, ComplexMatrix]:
    """
    Parallel-transported qubit loop along great-circle legs v0 -> v1 -> ... -> v0.

    Each leg rotates about the unit normal of its great circle by the arc
    angle and is integrated with :func:`transport_path` in the currently
    transported basis. The returned unitary is diagonal in the returned basis
    with <A_1|U|A_1> = exp(-i Omega / 2).

    Returns:
        (path over s in [0, number of legs], basis with Bloch vector v0 first)
    """
    points = _unit_vertices(vertices)
    basis = basis_from_bloch(points[0])
    closed = np.vstack([points, points[:1]])

    total = np.eye(2, dtype=np.complex128)
    s_values = [np.zeros(1)]
    samples = [total[None]]
    for leg, (start, end) in enumerate(itertools.pairwise(closed)):
        normal = np.cross(start, end)
        arc = float(np.arctan2(np.linalg.norm(normal), np.dot(start, end)))
        if arc < STRUCTURE_TOL:
            continue
        normal = normal / np.linalg.norm(normal)
        J = 0.5 * arc * sum(n * sigma for n, sigma in zip(normal, PAULI))
        segment = transport_path(lambda _s, J=J: J, total @ basis, 1.0, steps)
        samples.append(segment.unitaries[1:] @ total)
        s_values.append(leg + segment.s[1:])
        total = samples[-1][-1]

    return UnitaryPath(s=np.concatenate(s_values), unitaries=np.concatenate(samples)), basis


def cyclic_geometric_phase(path: UnitaryPath, basis: npt.ArrayLike, k: int = 0) -> float:
    """
    Geometric phase of the transported state U(s)|A_k> from the discrete
    Bargmann product: -arg of prod_i <psi_i|psi_(i+1)> including the closing overlap.
    """
    V = require_unitary(basis)
    states = path.unitaries @ V[:, k]
    overlaps = np.einsum("ni,ni->n", states.conj(), np.roll(states, -1, axis=0))
    return principal_arg(np.conj(np.prod(overlaps)))
