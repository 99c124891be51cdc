"""Off-diagonal phase functionals.

gamma^(l) is the phase factor of Tr(U rho_j1^(1/l) U rho_j2^(1/l) ... U rho_jl^(1/l)).
For rank-1 states the l-th roots are the projectors themselves and the
functional reduces to the pure-state phase.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Literal

import numpy as np
import numpy.typing as npt

from domain.errors import DimensionMismatch, InvalidSequence, LengthZero, NotProjector
from domain.linalg import ComplexMatrix, as_matrix, hermiticity_error, require_unitary, trace_product
from domain.states import DensityOperator, OrthogonalFamily

PHASE_TOL = 1e-9
PROJECTOR_TOL = 1e-10

Status = Literal["determinate", "indeterminate"]


@dataclass(frozen=True)
class PhaseResult:
    """Phase factor of a trace, or an indeterminate marker when the trace vanishes."""

    raw_trace: complex
    status: Status
    tolerance_used: float
    phase_factor: complex | None = None
    argument: float | None = None

    @property
    def is_determinate(self) -> bool:
        return self.status == "determinate"

    def to_json(self) -> dict[str, Any]:
        return {
            "re": self.raw_trace.real,
            "im": self.raw_trace.imag,
            "abs": abs(self.raw_trace),
            "status": self.status,
            "arg": self.argument,
        }


def principal_arg(z: complex) -> float:
    """arg z on the branch (-pi, pi]."""
    angle = float(np.angle(z))
    return np.pi if angle <= -np.pi else angle


def phi(z: complex, tol: float = PHASE_TOL) -> PhaseResult:
    """Phi[z] = z / |z|, indeterminate when |z| < tol."""
    if tol <= 0:
        raise ValueError(f"Tolerance must be positive, got {tol}")
    z = complex(z)
    if abs(z) < tol:
        return PhaseResult(raw_trace=z, status="indeterminate", tolerance_used=tol)
    return PhaseResult(
        raw_trace=z,
        status="determinate",
        tolerance_used=tol,
        phase_factor=z / abs(z),
        argument=principal_arg(z),
    )


def validate_sequence(sequence: Sequence[int], size: int) -> list[int]:
    """
    Check a 0-based index sequence into a family of ``size`` members.

    Raises:
        LengthZero: If the sequence is empty
        InvalidSequence: If an index is out of range or repeated
    """
    indices = [int(j) for j in sequence]
    if not indices:
        raise LengthZero("Index sequence must contain at least one entry")
    if any(j < 0 or j >= size for j in indices):
        raise InvalidSequence(f"Indices {indices} out of range for a family of {size}")
    if len(set(indices)) != len(indices):
        raise InvalidSequence(f"Indices must be distinct, got {indices}")
    return indices


def _require_projector(P: npt.ArrayLike, position: int) -> ComplexMatrix:
    M = as_matrix(P)
    herm_err = hermiticity_error(M)
    idem_err = float(np.max(np.abs(M @ M - M)))
    trace_err = abs(complex(np.trace(M)) - 1.0)
    if max(herm_err, idem_err, trace_err) > PROJECTOR_TOL:
        raise NotProjector(
            f"Entry {position} is not a rank-1 projector: "
            f"hermiticity {herm_err:.3e}, idempotency {idem_err:.3e}, trace {trace_err:.3e}"
        )
    return M


def gamma_pure(U: npt.ArrayLike, projectors: Sequence[npt.ArrayLike], tol: float = PHASE_TOL) -> PhaseResult:
    """
    Pure-state off-diagonal phase Phi[Tr(U P_j1 U P_j2 ... U P_jl)].

    Args:
        U: Unitary transporting the states
        projectors: Mutually orthogonal rank-1 projectors in sequence order
        tol: Indeterminacy threshold on the trace modulus

    Raises:
        LengthZero, NotUnitary, NotProjector, DimensionMismatch
    """
    if len(projectors) == 0:
        raise LengthZero("gamma_pure needs at least one projector")
    W = require_unitary(U)
    mats = [_require_projector(P, i) for i, P in enumerate(projectors)]
    if any(P.shape != W.shape for P in mats):
        raise DimensionMismatch(f"Projector dimensions {[P.shape[0] for P in mats]} differ from U ({W.shape[0]})")
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            overlap = float(np.max(np.abs(mats[i] @ mats[j])))
            if overlap > PROJECTOR_TOL:
                raise NotProjector(f"Projectors {i} and {j} are not orthogonal: max |P_i P_j| = {overlap:.3e}")
    factors = [F for P in mats for F in (W, P)]
    return phi(trace_product(factors), tol)


def gamma_mixed(U: npt.ArrayLike, rhos: Sequence[DensityOperator], tol: float = PHASE_TOL) -> PhaseResult:
    """
    Mixed-state off-diagonal phase Phi[Tr(U rho_j1^(1/l) ... U rho_jl^(1/l))].

    Orthogonality of ``rhos`` is not checked here since the connecting
    unitary is unknown at this level.

    Raises:
        LengthZero: If ``rhos`` is empty
        InvalidSequence: If more states than the Hilbert-space dimension are given
        NotUnitary, DimensionMismatch
    """
    l = len(rhos)
    if l == 0:
        raise LengthZero("gamma_mixed needs at least one density operator")
    W = require_unitary(U)
    dim = W.shape[0]
    if any(rho.dim != dim for rho in rhos):
        raise DimensionMismatch(f"State dimensions {[rho.dim for rho in rhos]} differ from U ({dim})")
    if l > dim:
        raise InvalidSequence(f"At most {dim} mutually orthogonal states exist in dimension {dim}, got {l}")
    root = Fraction(1, l)
    factors = [F for rho in rhos for F in (W, rho.power(root))]
    return phi(trace_product(factors), tol)


def gamma_mixed_family(
    U: npt.ArrayLike,
    family: OrthogonalFamily,
    sequence: Sequence[int],
    tol: float = PHASE_TOL,
) -> PhaseResult:
    """gamma_mixed over family members picked by distinct 0-based indices."""
    indices = validate_sequence(sequence, len(family))
    return gamma_mixed(U, [family[j] for j in indices], tol)


def pancharatnam_phase(U: npt.ArrayLike, rho: DensityOperator, tol: float = PHASE_TOL) -> PhaseResult:
    """Interferometric l = 1 phase Phi[Tr(U rho)]."""
    return gamma_mixed(U, [rho], tol)
