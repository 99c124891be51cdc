"""Verification suite: numerical certificates for every phase result the toolkit reproduces.

Each check draws its random instances from its own seeded generator and
returns a :class:`CheckResult` with the worst error it saw.
"""

import itertools
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel, Field

from domain.config import VerifyParams
from domain.errors import ConfigInvalid, PhaseToolkitError
from domain.families import (
    DEFAULT_ALPHAS,
    DEFAULT_ETAS,
    DEFAULT_LAMBDA1S,
    cross_check_qubit_point,
    cyclic_geometric_phase,
    diagonal_trace,
    diagonal_unitary,
    enclosed_solid_angle,
    f_coefficient,
    geodesic_loop,
    permutation_trace,
    permutation_unitary,
    qubit_pair,
    qubit_scan,
)
from domain.linalg import hermitian_expm, ordered_exp
from domain.phases import gamma_mixed, gamma_mixed_family, gamma_pure, phi
from domain.states import are_orthogonal, interference_profile, make_density, shift_unitary
from domain.transport import UnitaryPath, transport_defect, transport_path
from domain.twophoton import (
    TARGETS,
    PolarizationEnsemble,
    closed_form_gamma2,
    direct_phase,
    inner_product,
    purify,
    recipe,
    rotation_generator,
    rotation_unitary,
    run_fringe,
)
from utils.random_instances import (
    random_density,
    random_family,
    random_hermitian,
    random_special_phases,
    random_unitary,
    randomize_eigenphases,
)


class CheckResult(BaseModel):
    """Outcome of one verification check."""

    name: str = Field(description="Check identifier")
    passed: bool = Field(description="Whether every case met its tolerance")
    tolerance: float = Field(description="Primary tolerance of the check")
    max_error: float = Field(description="Largest error observed against that tolerance")
    cases: int = Field(description="Number of cases evaluated")
    detail: str = Field(default="", description="First failures or a short note")


@dataclass
class Tally:
    """Running worst-case error over the cases of one check."""

    tolerance: float
    max_error: float = 0.0
    cases: int = 0
    failures: list[str] = field(default_factory=list)

    def record(self, error: float, label: str, tol: float | None = None) -> None:
        limit = self.tolerance if tol is None else tol
        self.cases += 1
        if tol is None or tol == self.tolerance:
            self.max_error = max(self.max_error, float(error))
        if not error <= limit:
            self.failures.append(f"{label}: {error:.3e} > {limit:.1e}")

    def require(self, condition: bool, label: str) -> None:
        self.cases += 1
        if not condition:
            self.failures.append(label)

    def result(self, name: str, note: str = "") -> CheckResult:
        return CheckResult(
            name=name,
            passed=not self.failures,
            tolerance=self.tolerance,
            max_error=self.max_error,
            cases=self.cases,
            detail="; ".join(self.failures[:5]) if self.failures else note,
        )


def _random_sequence(size: int, rng: np.random.Generator) -> list[int]:
    length = int(rng.integers(1, size + 1))
    return [int(j) for j in rng.permutation(size)[:length]]


def check_normalization(params: VerifyParams, rng: np.random.Generator) -> CheckResult:
    """Tr(U_g^dagger rho_1^(1/N) ... U_g^dagger rho_N^(1/N)) = 1 for generated families."""
    tally = Tally(tolerance=1e-10)
    for dim in range(2, 7):
        for trial in range(10):
            family = random_family(dim, rng)
            result = gamma_mixed_family(family.shift.conj().T, family, range(dim), params.tol)
            tally.record(abs(result.raw_trace - 1.0), f"N={dim} trial {trial}")
            tally.require(result.is_determinate and abs(result.phase_factor - 1.0) <= 1e-10, f"N={dim} phase not +1")
    return tally.result("normalization")


def check_qubit_nodes(params: VerifyParams, rng: np.random.Generator) -> CheckResult:
    """Closed-form qubit traces against explicit matrices, and no simultaneous nodes."""
    tally = Tally(tolerance=1e-11)
    pairs = {lam: qubit_pair(lam) for lam in DEFAULT_LAMBDA1S}
    for point in qubit_scan(DEFAULT_ETAS, DEFAULT_ALPHAS, DEFAULT_LAMBDA1S):
        label = f"eta={point.eta:.2f} alpha={point.alpha:.4f} lambda1={point.lambda1}"
        tally.record(cross_check_qubit_point(point, pairs[point.lambda1]), label)
        tally.require(not point.all_indeterminate(params.tol), f"all traces vanish at {label}")
        if point.eta == 0.0 or (point.lambda1 == 0.5 and abs(np.cos(point.alpha)) < 1e-12):
            tally.record(abs(point.t12 + 1.0), f"t12 at {label}", tol=1e-12)
    return tally.result("qubit_nodes")


def check_rank_vanishing(params: VerifyParams, rng: np.random.Generator) -> CheckResult:
    """Diagonal SU(4) unitaries on rank-R families: every trace with l > R vanishes."""
    tally = Tally(tolerance=1e-10)
    dim = 4
    for rank in (1, 2, 3):
        for trial in range(5):
            family = random_family(dim, rng, rank)
            U_d = diagonal_unitary(random_special_phases(dim, rng), family.basis)
            for l in range(1, dim + 1):
                for sequence in itertools.permutations(range(dim), l):
                    general = gamma_mixed_family(U_d.matrix, family, sequence, params.tol).raw_trace
                    closed = diagonal_trace(U_d.matrix, family, sequence)
                    label = f"R={rank} l={l} seq={sequence}"
                    tally.record(abs(general - closed), f"closed form {label}", tol=1e-11)
                    if l > rank:
                        tally.record(abs(general), label)
    return tally.result("rank_vanishing")


def check_permutation_parity(params: VerifyParams, rng: np.random.Generator) -> CheckResult:
    """f >= 0, f(identity) = 1 and gamma^(N) = (-1)^(N-1) for SU(N) permuting unitaries."""
    tally = Tally(tolerance=1e-10)
    for dim in range(2, 6):
        sign = (-1) ** (dim - 1)
        for trial in range(3):
            family = random_family(dim, rng)
            U_p = permutation_unitary(random_special_phases(dim, rng, product=sign), family.basis)
            for sequence in itertools.permutations(range(dim)):
                label = f"N={dim} seq={sequence}"
                try:
                    coefficient = f_coefficient(U_p.matrix, family, sequence)
                except PhaseToolkitError as e:
                    tally.require(False, f"{label}: {e}")
                    continue
                result = gamma_mixed_family(U_p.matrix, family, sequence, params.tol)
                tally.record(abs(result.raw_trace - coefficient.raw_trace), f"walk sum {label}")
                if sequence == tuple(range(dim)):
                    tally.record(abs(coefficient.value - 1.0), f"identity f {label}")
                if coefficient.value > params.tol:
                    tally.require(
                        result.is_determinate and abs(result.phase_factor - sign) <= 1e-9,
                        f"parity violated {label}",
                    )
            for l in range(1, dim):
                for sequence in itertools.permutations(range(dim), l):
                    raw = gamma_mixed_family(U_p.matrix, family, sequence, params.tol).raw_trace
                    tally.record(abs(raw), f"N={dim} short seq={sequence}")
                    tally.record(abs(permutation_trace(U_p.matrix, family, sequence)), f"walk sum short {sequence}")
    return tally.result("permutation_parity")


def check_two_photon(params: VerifyParams, rng: np.random.Generator) -> CheckResult:
    """Fringe-extracted inner products against direct traces on the default grid."""
    tally = Tally(tolerance=1e-9)
    betas = 2.0 * np.pi * np.arange(64) / 64
    thetas = (0.0, np.pi / 4, np.pi / 2)
    for r in (0.0, 0.25, 0.5, 0.75, 1.0):
        ensemble = PolarizationEnsemble(r)
        state = purify(ensemble)
        for beta in betas:
            gamma2_values = []
            for theta in thetas:
                for target in TARGETS:
                    label = f"{target} r={r} beta={beta:.4f} theta={theta:.4f}"
                    scan = run_fringe(state, recipe(target, beta, theta), tol=params.tol)
                    direct = direct_phase(target, ensemble, beta, theta, params.tol)
                    tally.record(abs(scan.coefficient - direct.raw_trace), label)
                    tally.require(phi(scan.coefficient, params.tol).status == direct.status, f"status {label}")
                    if target == "gamma2":
                        gamma2_values.append(direct.raw_trace)
                        tally.record(abs(direct.raw_trace - closed_form_gamma2(r, beta)), f"closed form {label}")
                    elif abs(np.cos(beta)) > params.tol:
                        # gamma^(1) is real: phase 0 for cos(beta) > 0 and pi past the sign change
                        expected = 1.0 if np.cos(beta) > 0 else -1.0
                        tally.record(abs(direct.raw_trace.imag), f"imaginary part {label}", tol=1e-12)
                        tally.require(
                            scan.extracted_arg is not None
                            and abs(np.exp(1j * scan.extracted_arg) - expected) <= 1e-9,
                            f"sign structure {label}",
                        )
            spread = max(abs(a - b) for a, b in itertools.combinations(gamma2_values, 2))
            tally.record(spread, f"theta dependence r={r} beta={beta:.4f}", tol=1e-10)
    return tally.result("two_photon_oracle")


def _smooth_generator(s: float) -> np.ndarray:
    return np.array(
        [[0.3 * np.cos(s), 1.0 + 0.5 * s - 0.4j * np.sin(2 * s)], [1.0 + 0.5 * s + 0.4j * np.sin(2 * s), -0.2 * s]],
        dtype=np.complex128,
    )


def check_transport(params: VerifyParams, rng: np.random.Generator) -> CheckResult:
    """Rotation paths are parallel transporting, and the integrator converges at second order."""
    tally = Tally(tolerance=1e-6)
    identity = np.eye(2, dtype=np.complex128)
    steps = params.transport_steps
    for beta, theta in ((np.pi / 2, np.pi / 2), (np.pi / 3, 0.0), (2.0, 1.1), (np.pi, np.pi / 4)):
        path = transport_path(lambda _s, t=theta: rotation_generator(t), identity, beta, steps)
        label = f"beta={beta:.4f} theta={theta:.4f}"
        tally.record(transport_defect(path, identity), f"defect {label}")
        tally.record(float(np.max(np.abs(path.final - rotation_unitary(beta, theta)))), f"closed form {label}")
        sampled = UnitaryPath.from_function(lambda s, t=theta: rotation_unitary(s, t), beta, steps)
        tally.record(transport_defect(sampled, identity), f"defect of sampled closed form {label}")
        tally.record(abs(np.linalg.det(path.final) - 1.0), f"det {label}", tol=1e-8 * steps)
        for k in range(2):
            projector = np.outer(identity[:, k], identity[:, k])
            pure = gamma_pure(path.final, [projector], params.tol).raw_trace
            tally.record(abs(pure - path.final[k, k]), f"l=1 phase k={k} {label}", tol=1e-12)

    twisted = UnitaryPath.from_function(lambda s: np.diag([np.exp(1j * s), np.exp(-1j * s)]), 1.0, steps)
    tally.require(abs(transport_defect(twisted, identity) - 1.0) < 1e-9, "diagonal phase path not flagged")

    basis = random_unitary(2, rng)
    reference = transport_path(_smooth_generator, basis, 1.0, 32 * 256).final
    coarse = float(np.max(np.abs(transport_path(_smooth_generator, basis, 1.0, 128).final - reference)))
    fine = float(np.max(np.abs(transport_path(_smooth_generator, basis, 1.0, 256).final - reference)))
    ratio = coarse / fine
    tally.require(3.0 <= ratio <= 5.0, f"convergence ratio {ratio:.3f} outside [3, 5]")
    fine_path = transport_path(_smooth_generator, basis, 1.0, 4096)
    tally.record(transport_defect(fine_path, basis), "defect of smooth generator at 4096 steps")
    return tally.result("transport", note=f"step-halving error ratio {ratio:.3f}")


def check_solid_angle(params: VerifyParams, rng: np.random.Generator) -> CheckResult:
    """Geodesic-polygon loops: <A_1|U|A_1> = exp(-i Omega / 2), U diagonal with geometric-phase entries."""
    tally = Tally(tolerance=1e-9)
    for trial in range(10):
        center = rng.standard_normal(3)
        center /= np.linalg.norm(center)
        corners = int(rng.integers(3, 6))
        vertices = center + 0.7 * rng.standard_normal((corners, 3))
        path, basis = geodesic_loop(vertices, steps=64)
        omega = enclosed_solid_angle(vertices)
        W = basis.conj().T @ path.final @ basis
        label = f"loop {trial} ({corners} vertices)"
        tally.record(abs(W[0, 0] - np.exp(-0.5j * omega)), label)
        tally.record(abs(W[0, 1]) + abs(W[1, 0]), f"off-diagonal {label}")
        U_d = diagonal_unitary(np.diag(W) / np.abs(np.diag(W)), basis)
        for k in range(2):
            geometric = np.exp(1j * cyclic_geometric_phase(path, basis, k))
            tally.record(abs(U_d.phases[k] - geometric), f"geometric phase k={k} {label}", tol=1e-6)
        tally.require(U_d.special, f"loop unitary not in SU(2) {label}")
    return tally.result("solid_angle_loop")


def check_gauge_invariance(params: VerifyParams, rng: np.random.Generator) -> CheckResult:
    """Raw traces and orthogonality verdicts do not depend on eigenvector phases."""
    tally = Tally(tolerance=1e-11)
    for case in range(params.cases):
        dim = int(rng.integers(2, 7))
        family = random_family(dim, rng)
        sequence = _random_sequence(dim, rng)
        U = random_unitary(dim, rng)
        rhos = [family[j] for j in sequence]
        scrambled = [randomize_eigenphases(rho, rng) for rho in rhos]
        raw = gamma_mixed(U, rhos).raw_trace
        tally.record(abs(raw - gamma_mixed(U, scrambled).raw_trace), f"case {case} N={dim}")
        n, m = rng.choice(dim, size=2, replace=False)
        connector = family.shift_power(int(m - n))
        tally.require(
            are_orthogonal(randomize_eigenphases(family[n], rng), family[m], connector),
            f"case {case}: orthogonality lost under rephasing",
        )

    # degenerate groups: mixing inside an eigenspace never changes the block verdict
    basis = random_unitary(4, rng)
    rho = make_density((basis * np.array([0.3, 0.3, 0.2, 0.2])) @ basis.conj().T)
    swap = basis @ np.eye(4)[[2, 3, 0, 1]] @ basis.conj().T
    maximally_mixed = make_density(np.eye(2) / 2)
    for case in range(20):
        mixed = randomize_eigenphases(rho, rng)
        tally.require(are_orthogonal(mixed, make_density(swap @ rho.matrix @ swap.conj().T), swap), f"degenerate swap {case}")
        reflected = np.diag([1.0, -1.0])
        tally.require(
            not are_orthogonal(randomize_eigenphases(maximally_mixed, rng), maximally_mixed, reflected),
            f"maximally mixed reflection {case}",
        )
    return tally.result("gauge_invariance")


def check_cyclic_invariance(params: VerifyParams, rng: np.random.Generator) -> CheckResult:
    """Rotating the state sequence leaves the trace unchanged."""
    tally = Tally(tolerance=1e-12)
    for case in range(params.cases):
        dim = int(rng.integers(2, 7))
        family = random_family(dim, rng)
        sequence = _random_sequence(dim, rng)
        U = random_unitary(dim, rng)
        raw = gamma_mixed_family(U, family, sequence).raw_trace
        shift = int(rng.integers(0, len(sequence)))
        rotated = gamma_mixed_family(U, family, sequence[shift:] + sequence[:shift]).raw_trace
        tally.record(abs(raw - rotated) / max(1.0, abs(raw)), f"case {case} N={dim} seq={sequence}")
    return tally.result("cyclic_invariance")


def check_u1_covariance(params: VerifyParams, rng: np.random.Generator) -> CheckResult:
    """e^(i phi) U multiplies the length-l trace by e^(i l phi)."""
    tally = Tally(tolerance=1e-12)
    for case in range(params.cases):
        dim = int(rng.integers(2, 7))
        family = random_family(dim, rng)
        sequence = _random_sequence(dim, rng)
        U = random_unitary(dim, rng)
        angle = float(rng.uniform(-np.pi, np.pi))
        raw = gamma_mixed_family(U, family, sequence).raw_trace
        rephased = gamma_mixed_family(np.exp(1j * angle) * U, family, sequence).raw_trace
        expected = np.exp(1j * len(sequence) * angle) * raw
        tally.record(abs(rephased - expected), f"case {case} N={dim} l={len(sequence)}")
    return tally.result("u1_covariance")


def check_pure_state_limit(params: VerifyParams, rng: np.random.Generator) -> CheckResult:
    """Rank-1 states reproduce the pure-state phase."""
    tally = Tally(tolerance=1e-11)
    for case in range(params.cases):
        dim = int(rng.integers(2, 7))
        basis = random_unitary(dim, rng)
        sequence = _random_sequence(dim, rng)
        projectors = [np.outer(basis[:, j], basis[:, j].conj()) for j in sequence]
        U = random_unitary(dim, rng)
        mixed = gamma_mixed(U, [make_density(P) for P in projectors]).raw_trace
        pure = gamma_pure(U, projectors).raw_trace
        tally.record(abs(mixed - pure), f"case {case} N={dim} l={len(sequence)}")
    return tally.result("pure_state_limit")


def check_fringe_flatness(params: VerifyParams, rng: np.random.Generator) -> CheckResult:
    """Orthogonal pairs give a chi-independent interference profile."""
    tally = Tally(tolerance=1e-9)
    chis = 2.0 * np.pi * np.arange(64) / 64
    for case in range(params.cases):
        dim = int(rng.integers(2, 7))
        family = random_family(dim, rng)
        n, m = rng.choice(dim, size=2, replace=False)
        connector = family.shift_power(int(m - n))
        profile = [interference_profile(family[n], connector, chi) for chi in chis]
        tally.record(max(profile) - min(profile), f"case {case} N={dim} pair=({n}, {m})")
    return tally.result("fringe_flatness")


def check_linalg_kernels(params: VerifyParams, rng: np.random.Generator) -> CheckResult:
    """Root powers, ordered exponentials and the shift unitary."""
    tally = Tally(tolerance=1e-10)
    for case in range(params.cases):
        dim = int(rng.integers(2, 9))
        rho = random_density(dim, rng, rank=int(rng.integers(1, dim + 1)))
        l = int(rng.integers(1, dim + 1))
        root = rho.power((1, l))
        tally.record(float(np.max(np.abs(np.linalg.matrix_power(root, l) - rho.matrix))), f"root case {case}")
        tally.record(
            float(np.max(np.abs(np.linalg.matrix_power(shift_unitary(rho.spectrum.eigenvectors), dim) - np.eye(dim)))),
            f"shift power case {case}",
        )
    J0 = random_hermitian(3, rng)
    U = ordered_exp(lambda s: np.cos(s) * J0, 1.5, 2048)
    tally.record(float(np.max(np.abs(U - hermitian_expm(J0, np.sin(1.5))))), "commuting generator", tol=1e-5)
    return tally.result("linalg_kernels")


CheckFunction = Callable[[VerifyParams, np.random.Generator], CheckResult]

CHECKS: dict[str, CheckFunction] = {
    "linalg_kernels": check_linalg_kernels,
    "normalization": check_normalization,
    "qubit_nodes": check_qubit_nodes,
    "rank_vanishing": check_rank_vanishing,
    "permutation_parity": check_permutation_parity,
    "two_photon_oracle": check_two_photon,
    "transport": check_transport,
    "solid_angle_loop": check_solid_angle,
    "gauge_invariance": check_gauge_invariance,
    "cyclic_invariance": check_cyclic_invariance,
    "u1_covariance": check_u1_covariance,
    "pure_state_limit": check_pure_state_limit,
    "fringe_flatness": check_fringe_flatness,
}


def selected_checks(params: VerifyParams) -> list[str]:
    """
    Names of the checks to run, in registry order.

    Raises:
        ConfigInvalid: If an unknown check is requested
    """
    if params.checks is None:
        return list(CHECKS)
    unknown = [name for name in params.checks if name not in CHECKS]
    if unknown:
        raise ConfigInvalid(
            "parameters.checks", f"unknown checks {unknown}. Available checks: {', '.join(CHECKS)}"
        )
    return [name for name in CHECKS if name in params.checks]


def run_check(name: str, params: VerifyParams, seed: int) -> CheckResult:
    """Run one registered check on its own seeded stream; toolkit errors count as failures."""
    rng = np.random.default_rng([seed, list(CHECKS).index(name)])
    try:
        return CHECKS[name](params, rng)
    except PhaseToolkitError as e:
        return CheckResult(name=name, passed=False, tolerance=0.0, max_error=float("inf"), cases=0, detail=str(e))
