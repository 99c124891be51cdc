"""Polarization-entangled two-photon interferometer.

The system photon's mixed polarization state is purified with an ancilla
photon. Each photon passes a short (V) or long (U) arm; postselected
coincidences superpose long-long with short-short, and the fringe in the
variable phase chi reads out <Psi|Us^dagger Vs (x) Ua^dagger Va|Psi>.

Amplitudes are ordered over kron(system, ancilla): (hh, hv, vh, vv).
"""

from dataclasses import dataclass
from typing import Literal

import numpy as np
import numpy.typing as npt

from domain.errors import DimensionMismatch, OutOfRange
from domain.linalg import ComplexMatrix, require_unitary
from domain.phases import PHASE_TOL, PhaseResult, gamma_mixed, phi
from domain.states import DensityOperator, make_density

NORM_TOL = 1e-12
DEFAULT_FRINGE_SAMPLES = 64

ChiRole = Literal["Us", "Vs", "Ua", "Va"]
Target = Literal["gamma1_rho1", "gamma1_rho2", "gamma2"]
TARGETS: tuple[Target, ...] = ("gamma1_rho1", "gamma1_rho2", "gamma2")

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)


@dataclass(frozen=True)
class PolarizationEnsemble:
    """Linearly polarized photons with polarization degree r."""

    r: float

    def __post_init__(self):
        if not 0.0 <= self.r <= 1.0:
            raise OutOfRange(f"Polarization degree must lie in [0, 1], got {self.r}")

    @property
    def populations(self) -> tuple[float, float]:
        return (1.0 + self.r) / 2.0, (1.0 - self.r) / 2.0

    def rho1(self) -> DensityOperator:
        return make_density(np.diag(self.populations))

    def rho2(self) -> DensityOperator:
        """Flipped ensemble F rho1 F^dagger."""
        return make_density(np.diag(self.populations[::-1]))


@dataclass(frozen=True, eq=False)
class TwoPhotonState:
    amplitudes: npt.NDArray[np.complex128]

    def __post_init__(self):
        if self.amplitudes.shape != (4,):
            raise DimensionMismatch(f"Two-photon state needs 4 amplitudes, got shape {self.amplitudes.shape}")
        norm = float(np.linalg.norm(self.amplitudes))
        if abs(norm - 1.0) > NORM_TOL:
            raise OutOfRange(f"Two-photon state must be normalized: norm {norm:.15g}")


@dataclass(frozen=True, eq=False)
class MeasurementConfig:
    """Arm unitaries for system (s) and ancilla (a); U arms are long, V arms short."""

    Us: ComplexMatrix
    Vs: ComplexMatrix
    Ua: ComplexMatrix
    Va: ComplexMatrix
    chi_role: ChiRole = "Us"

    def __post_init__(self):
        for name in ("Us", "Vs", "Ua", "Va"):
            M = require_unitary(getattr(self, name))
            if M.shape != (2, 2):
                raise DimensionMismatch(f"Arm {name} must be 2 x 2, got {M.shape}")
            object.__setattr__(self, name, M)
        if self.chi_role not in ("Us", "Vs", "Ua", "Va"):
            raise ValueError(f"Unknown chi_role: {self.chi_role}")

    @property
    def chi_on_long_arm(self) -> bool:
        return self.chi_role in ("Us", "Ua")

    def long_arm(self) -> ComplexMatrix:
        return np.kron(self.Us, self.Ua)

    def short_arm(self) -> ComplexMatrix:
        return np.kron(self.Vs, self.Va)


@dataclass(frozen=True, eq=False)
class FringeScan:
    """Coincidence intensity sampled over one period of chi."""

    chis: npt.NDArray[np.float64]
    intensities: npt.NDArray[np.float64]
    coefficient: complex
    visibility: float
    phase: PhaseResult

    @property
    def extracted_arg(self) -> float | None:
        return self.phase.argument


def rotation_generator(theta: float) -> ComplexMatrix:
    """cos(theta) sigma_x + sin(theta) sigma_y; zero on the h-v diagonal."""
    return np.cos(theta) * SIGMA_X + np.sin(theta) * SIGMA_Y


def rotation_unitary(beta: float, theta: float) -> ComplexMatrix:
    """U(beta, theta) = exp(-i beta G(theta)), a great-circle rotation of linear polarization."""
    return np.cos(beta) * np.eye(2, dtype=np.complex128) - 1j * np.sin(beta) * rotation_generator(theta)


def flip() -> ComplexMatrix:
    """Polarization flip F = U(pi/2, pi/2) taking h to v."""
    return rotation_unitary(np.pi / 2, np.pi / 2)


def purify(ensemble: PolarizationEnsemble) -> TwoPhotonState:
    """sqrt((1+r)/2) |hh> + sqrt((1-r)/2) |vv>."""
    p_h, p_v = ensemble.populations
    return TwoPhotonState(amplitudes=np.array([np.sqrt(p_h), 0.0, 0.0, np.sqrt(p_v)], dtype=np.complex128))


def partial_trace_ancilla(state: TwoPhotonState) -> ComplexMatrix:
    """Reduced system density matrix Tr_a |Psi><Psi|."""
    M = state.amplitudes.reshape(2, 2)
    return M @ M.conj().T


def inner_product(state: TwoPhotonState, config: MeasurementConfig) -> complex:
    """<Psi| Us^dagger Vs (x) Ua^dagger Va |Psi>."""
    psi = state.amplitudes
    return complex(np.vdot(config.long_arm() @ psi, config.short_arm() @ psi))


def coincidence_intensity(state: TwoPhotonState, config: MeasurementConfig, chi: float | npt.ArrayLike) -> npt.NDArray[np.float64] | float:
    """
    |long + short|^2 with e^(i chi) applied on the arm named by ``chi_role``.

    Equals 2 + 2 Re[e^(-i chi) z] for chi on a long arm and 2 + 2 Re[e^(i chi) z]
    on a short arm, where z is :func:`inner_product`.
    """
    psi = state.amplitudes
    long_amp = config.long_arm() @ psi
    short_amp = config.short_arm() @ psi
    phase = np.exp(1j * np.asarray(chi, dtype=float))[..., None]
    if config.chi_on_long_arm:
        total = phase * long_amp + short_amp
    else:
        total = long_amp + phase * short_amp
    intensity = np.sum(np.abs(total) ** 2, axis=-1)
    return float(intensity) if np.ndim(intensity) == 0 else intensity


def recipe(target: Target, beta: float, theta: float) -> MeasurementConfig:
    """
    Arm settings whose fringe reads out a chosen phase for U = U(beta, theta).

    gamma1_rho1 gives Tr[U rho1], gamma1_rho2 gives Tr[U rho2] and gamma2 gives
    Tr[U sqrt(rho1) U sqrt(rho2)].
    """
    identity = np.eye(2, dtype=np.complex128)
    U = rotation_unitary(beta, theta)
    F = flip()
    if target == "gamma1_rho1":
        return MeasurementConfig(Us=identity, Vs=U, Ua=identity, Va=identity)
    if target == "gamma1_rho2":
        return MeasurementConfig(Us=F, Vs=U @ F, Ua=identity, Va=identity)
    if target == "gamma2":
        return MeasurementConfig(Us=F, Vs=U, Ua=F, Va=rotation_unitary(beta, -theta))
    raise ValueError(f"Unknown target: {target}. Available targets: {', '.join(TARGETS)}")


def direct_phase(target: Target, ensemble: PolarizationEnsemble, beta: float, theta: float, tol: float = PHASE_TOL) -> PhaseResult:
    """The phase a recipe measures, computed directly from rho1, rho2 and U(beta, theta)."""
    U = rotation_unitary(beta, theta)
    rhos = {
        "gamma1_rho1": [ensemble.rho1()],
        "gamma1_rho2": [ensemble.rho2()],
        "gamma2": [ensemble.rho1(), ensemble.rho2()],
    }
    if target not in rhos:
        raise ValueError(f"Unknown target: {target}. Available targets: {', '.join(TARGETS)}")
    return gamma_mixed(U, rhos[target], tol)


def closed_form_gamma2(r: float, beta: float) -> float:
    """Tr[U sqrt(rho1) U sqrt(rho2)] = sqrt(1 - r^2) cos^2(beta) - sin^2(beta), independent of theta."""
    return float(np.sqrt(1.0 - r**2) * np.cos(beta) ** 2 - np.sin(beta) ** 2)


def run_fringe(
    state: TwoPhotonState,
    config: MeasurementConfig,
    samples: int = DEFAULT_FRINGE_SAMPLES,
    tol: float = PHASE_TOL,
    mean_pairs: float | None = None,
    rng: np.random.Generator | None = None,
) -> FringeScan:
    """
    Sample I(chi) on a uniform grid over [0, 2 pi) and extract the fringe.

    The frequency-1 DFT bin recovers the inner product z exactly for noiseless
    data. With ``mean_pairs`` set, each bin holds Poisson counts with mean
    mean_pairs I(chi) / 4 and intensities are reported as 4 counts / mean_pairs.

    Raises:
        OutOfRange: If ``samples`` is not a power of two >= 8 or mean_pairs is not positive
    """
    if samples < 8 or samples & (samples - 1):
        raise OutOfRange(f"samples must be a power of two >= 8, got {samples}")
    chis = 2.0 * np.pi * np.arange(samples) / samples
    intensities = np.asarray(coincidence_intensity(state, config, chis), dtype=float)

    if mean_pairs is not None:
        if mean_pairs <= 0:
            raise OutOfRange(f"mean_pairs must be positive, got {mean_pairs}")
        generator = rng if rng is not None else np.random.default_rng()
        counts = generator.poisson(mean_pairs * np.clip(intensities, 0.0, None) / 4.0)
        intensities = 4.0 * counts / mean_pairs

    # sum_m I_m e^(i chi_m) / M; the bin is conj(fft[1]) since I is real
    coefficient = complex(np.conj(np.fft.fft(intensities)[1]) / samples)
    if not config.chi_on_long_arm:
        coefficient = coefficient.conjugate()
    visibility = abs(coefficient)
    return FringeScan(
        chis=chis,
        intensities=intensities,
        coefficient=coefficient,
        visibility=visibility,
        phase=phi(coefficient, tol),
    )
