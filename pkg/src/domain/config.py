"""Scenario configuration and shared-store models using Pydantic."""

import json
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from domain.errors import ConfigInvalid, IoError
from domain.states import DensityOperator

ScenarioKind = Literal["qubit-scan", "families", "two-photon", "verify"]
SCENARIO_KINDS: tuple[str, ...] = ("qubit-scan", "families", "two-photon", "verify")


def _check_unit_interval(values: list[float], name: str) -> list[float]:
    if not values:
        raise ValueError(f"{name} must not be empty")
    for v in values:
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} entries must lie in [0, 1], got {v}")
    return values


class OutputConfig(BaseModel):
    """Where and how results are written."""

    path: str | None = Field(default=None, description="Output file; stdout when unset")
    format: Literal["csv", "json"] = Field(default="csv", description="Output format")


class NoiseConfig(BaseModel):
    """Poisson shot noise on coincidence counts."""

    enabled: bool = Field(default=False, description="Whether to add shot noise to fringes")
    mean_pairs: float = Field(
        default=10000.0, gt=0, description="Mean photon pairs per chi bin at I = 4"
    )


class QubitScanParams(BaseModel):
    """Grid for the closed-form qubit traces."""

    kind: Literal["qubit-scan"] = "qubit-scan"
    etas: list[float] = Field(
        default_factory=lambda: [float(v) for v in np.linspace(0.0, 1.0, 21)],
        description="|U11| values in [0, 1]",
    )
    alphas: list[float] = Field(
        default_factory=lambda: [float(v) for v in np.arange(129) * np.pi / 64],
        description="arg U11 values in radians",
    )
    lambda1s: list[float] = Field(
        default_factory=lambda: [0.5, 0.6, 0.75, 0.9, 1.0],
        description="Larger eigenvalue of rho1",
    )
    cross_check: bool = Field(
        default=True, description="Compare every point against explicit-matrix traces"
    )
    tol: float = Field(default=1e-9, gt=0, description="Indeterminacy threshold")

    @field_validator("etas")
    @classmethod
    def etas_in_unit_interval(cls, v):
        return _check_unit_interval(v, "etas")

    @field_validator("lambda1s")
    @classmethod
    def lambda1s_in_unit_interval(cls, v):
        return _check_unit_interval(v, "lambda1s")

    @field_validator("alphas")
    @classmethod
    def alphas_not_empty(cls, v):
        if not v:
            raise ValueError("alphas must not be empty")
        return v


class FamilyParams(BaseModel):
    """Orthogonal family and the structured unitary acting on it."""

    kind: Literal["families"] = "families"
    dim: int = Field(default=4, ge=2, le=8, description="Hilbert-space dimension N")
    spectrum: list[float] | None = Field(
        default=None, description="Eigenvalues of rho1; random when unset"
    )
    rank: int | None = Field(
        default=None, ge=1, description="Rank of the random rho1; full rank when unset"
    )
    rho1: dict[str, Any] | None = Field(
        default=None,
        description='Explicit rho1 as {"dim", "re", "im"}; replaces spectrum and rank',
    )
    unitary: Literal["permuting", "diagonal"] = Field(
        default="permuting", description="Structure of the transporting unitary"
    )
    tol: float = Field(default=1e-9, gt=0, description="Indeterminacy threshold")

    @field_validator("spectrum")
    @classmethod
    def spectrum_is_probability(cls, v):
        if v is None:
            return v
        if any(x < 0 for x in v):
            raise ValueError("spectrum entries must be non-negative")
        if abs(sum(v) - 1.0) > 1e-10:
            raise ValueError(f"spectrum must sum to 1, got {sum(v)}")
        return v

    @field_validator("rho1")
    @classmethod
    def rho1_is_density(cls, v):
        if v is None:
            return v
        missing = sorted({"dim", "re", "im"} - v.keys())
        if missing:
            raise ValueError(f"rho1 is missing keys {missing}")
        DensityOperator.from_json(v)
        return v

    @model_validator(mode="after")
    def sizes_match_dim(self):
        if self.rho1 is not None:
            if self.spectrum is not None or self.rank is not None:
                raise ValueError("rho1 cannot be combined with spectrum or rank")
            if self.rho1["dim"] != self.dim:
                raise ValueError(f"rho1 has dim {self.rho1['dim']} but dim is {self.dim}")
        if self.spectrum is not None and len(self.spectrum) != self.dim:
            raise ValueError(f"spectrum has {len(self.spectrum)} entries for dim {self.dim}")
        if self.rank is not None and self.rank > self.dim:
            raise ValueError(f"rank {self.rank} exceeds dim {self.dim}")
        return self


class TwoPhotonParams(BaseModel):
    """Two-photon interferometer grid."""

    kind: Literal["two-photon"] = "two-photon"
    rs: list[float] = Field(
        default_factory=lambda: [0.0, 0.25, 0.5, 0.75, 1.0],
        description="Polarization degrees",
    )
    beta_samples: int = Field(
        default=64, ge=1, description="Uniform beta samples over [0, 2 pi)"
    )
    thetas: list[float] = Field(
        default_factory=lambda: [0.0, np.pi / 4, np.pi / 2],
        description="Great-circle orientations in radians",
    )
    targets: list[Literal["gamma1_rho1", "gamma1_rho2", "gamma2"]] = Field(
        default_factory=lambda: ["gamma1_rho1", "gamma1_rho2", "gamma2"],
        description="Phases to measure",
    )
    fringe_samples: int = Field(default=64, description="chi samples per fringe")
    mode: Literal["scan", "fringe"] = Field(
        default="scan", description="One row per grid point, or one row per chi sample"
    )
    noise: NoiseConfig = Field(default_factory=NoiseConfig, description="Shot-noise model")
    tol: float = Field(default=1e-9, gt=0, description="Indeterminacy threshold")

    @field_validator("rs")
    @classmethod
    def rs_in_unit_interval(cls, v):
        return _check_unit_interval(v, "rs")

    @field_validator("fringe_samples")
    @classmethod
    def fringe_samples_power_of_two(cls, v):
        if v < 8 or v & (v - 1):
            raise ValueError(f"fringe_samples must be a power of two >= 8, got {v}")
        return v

    @field_validator("thetas", "targets")
    @classmethod
    def not_empty(cls, v):
        if not v:
            raise ValueError("list must not be empty")
        return v

    def betas(self) -> list[float]:
        return [float(b) for b in 2.0 * np.pi * np.arange(self.beta_samples) / self.beta_samples]


class VerifyParams(BaseModel):
    """Selection and sizing of the verification suite."""

    kind: Literal["verify"] = "verify"
    checks: list[str] | None = Field(default=None, description="Checks to run; all when unset")
    cases: int = Field(default=200, ge=1, description="Randomized cases per property suite")
    transport_steps: int = Field(
        default=4096, ge=16, description="Steps for rotation-path certification"
    )
    tol: float = Field(default=1e-9, gt=0, description="Indeterminacy threshold")


ScenarioParameters = QubitScanParams | FamilyParams | TwoPhotonParams | VerifyParams


class Scenario(BaseModel):
    """A validated run request."""

    kind: ScenarioKind = Field(description="Scenario type")
    seed: int = Field(default=0, ge=0, description="Seed for every random draw")
    steps: int = Field(default=1024, ge=1, description="Path-integration steps")
    parameters: ScenarioParameters = Field(
        discriminator="kind", description="Kind-specific parameters"
    )
    output: OutputConfig = Field(default_factory=OutputConfig, description="Output settings")

    @model_validator(mode="before")
    @classmethod
    def default_parameters_for_kind(cls, data: Any):
        if isinstance(data, dict) and "kind" in data:
            params = dict(data.get("parameters") or {})
            params.setdefault("kind", data["kind"])
            data = {**data, "parameters": params}
        return data

    @model_validator(mode="after")
    def parameters_match_kind(self):
        if self.parameters.kind != self.kind:
            raise ValueError(f"parameters are for '{self.parameters.kind}', scenario is '{self.kind}'")
        return self


def _field_path(loc: tuple[Any, ...]) -> str:
    # drop the union tag pydantic inserts after "parameters"
    parts = [str(p) for p in loc]
    if len(parts) > 1 and parts[0] == "parameters" and parts[1] in SCENARIO_KINDS:
        del parts[1]
    return ".".join(parts) or "<root>"


def validate_scenario(data: dict[str, Any]) -> Scenario:
    """
    Validate raw scenario data.

    Raises:
        ConfigInvalid: Naming the first offending field
    """
    try:
        return Scenario.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        raise ConfigInvalid(_field_path(tuple(first["loc"])), first["msg"]) from e


def read_config_file(path: str) -> dict[str, Any]:
    """
    Load a JSON scenario file.

    Raises:
        IoError: If the file cannot be read
        ConfigInvalid: If it is not a JSON object
    """
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise IoError(f"Cannot read config {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigInvalid("<file>", f"{path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigInvalid("<file>", f"{path} must contain a JSON object")
    return data


def load_scenario(
    kind: str,
    config_path: str | None = None,
    overrides: dict[str, Any] | None = None,
) -> Scenario:
    """
    Build a scenario from defaults, an optional JSON file and CLI overrides, in
    increasing precedence.

    Args:
        kind: Scenario kind chosen on the command line
        config_path: JSON file with any subset of the scenario fields
        overrides: Flat CLI values: seed, steps, tol, out, format

    Raises:
        ConfigInvalid, IoError
    """
    data: dict[str, Any] = read_config_file(config_path) if config_path else {}
    if data.get("kind", kind) != kind:
        raise ConfigInvalid("kind", f"config file is for '{data['kind']}', command is '{kind}'")
    data["kind"] = kind

    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    for key in ("seed", "steps"):
        if key in overrides:
            data[key] = overrides[key]
    if "tol" in overrides:
        data["parameters"] = {**(data.get("parameters") or {}), "tol": overrides["tol"]}
    output = dict(data.get("output") or {})
    if "out" in overrides:
        output["path"] = overrides["out"]
    if "format" in overrides:
        output["format"] = overrides["format"]
    data["output"] = output

    return validate_scenario(data)


class ScenarioStore(BaseModel):
    """Shared store carried through a scenario flow."""

    scenario: Scenario = Field(description="Validated scenario")
    quiet: bool = Field(default=False, description="Suppress status lines")

    # Processing data
    family: Any | None = Field(default=None, description="OrthogonalFamily under analysis")
    unitary: Any | None = Field(default=None, description="StructuredUnitary acting on the family")
    family_orthogonal: bool | None = Field(
        default=None, description="Whether all family pairs passed the orthogonality check"
    )

    # Output
    rows: list[dict[str, Any]] = Field(default_factory=list, description="Result table rows")
    summary: dict[str, Any] = Field(default_factory=dict, description="Scenario summary values")
    attachments: dict[str, Any] = Field(
        default_factory=dict, description="JSON-only payload such as serialized density operators"
    )
    checks: list[Any] = Field(default_factory=list, description="Verification CheckResults")
    destination: str | None = Field(default=None, description="Where results were written")
    passed: bool = Field(default=True, description="False when any verification check fails")
    completed: bool = Field(default=False, description="Whether the flow has completed")

    class Config:
        arbitrary_types_allowed = True

    @property
    def kind(self) -> str:
        return self.scenario.kind

    def rng(self, stream: int = 0):
        """Generator seeded from the scenario seed and a per-use stream index."""
        return np.random.default_rng([self.scenario.seed, stream])


def create_shared_store(scenario: Scenario, quiet: bool = False) -> ScenarioStore:
    """Factory function to create a properly initialized ScenarioStore."""
    return ScenarioStore(scenario=scenario, quiet=quiet)
