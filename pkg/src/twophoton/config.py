"""Run configuration: a strict, versioned TOML document.

Unknown keys are rejected with their dotted path so typos cannot silently
change an experiment.  Every value except ``schema_version`` and
``scenario.kind`` has a default.

Example
-------
    schema_version = 1

    [scenario]
    kind = "hom_dip"                # hom_dip | cascade | bell | deterministic
    center_wavelength_nm = 702.2
    filter_fwhm_nm = 3.0
    # bell needs polarizer angles, deterministic needs a phase:
    # polarizer_angle_a_deg = 45.0
    # polarizer_angle_b_deg = -45.0
    # phase_rad = 0.0

    [detectors]                     # efficiency per detector port
    a = 1.0
    b = 1.0

    [scan]
    tau_min_fs = -600.0
    tau_max_fs = 600.0
    steps = 201
    mode_match = 1.0

    [sampling]
    enabled = true
    pair_rate_hz = 10000.0
    integration_time_s = 1.0
    seed = 0

    [output]
    csv = "scan.csv"
    plots = true
"""

from __future__ import annotations

import math
from dataclasses import dataclass

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .fock import DomainError
from .scenarios import Scenario, ScenarioKind, bell, cascade, deterministic, hom_dip

SCHEMA_VERSION = 1

_SOURCE_DEFAULTS = {
    ScenarioKind.HOM_DIP: (702.2, 3.0),
    ScenarioKind.CASCADE: (702.2, 3.0),
    ScenarioKind.BELL: (702.2, 3.0),
    ScenarioKind.DETERMINISTIC: (780.0, 20.0),
}


class ConfigError(ValueError):
    """A configuration document is malformed or inconsistent."""


@dataclass(frozen=True)
class RunConfig:
    """Everything one CLI run needs."""

    scenario: Scenario
    tau_min_fs: float
    tau_max_fs: float
    steps: int
    mode_match: float
    sampling_enabled: bool
    pair_rate_hz: float
    integration_time_s: float
    seed: int
    csv_path: str
    make_plots: bool


class _Table:
    """One TOML table with consumed-key tracking for strictness."""

    def __init__(self, data: dict, path: str):
        self.data = data
        self.path = path
        self.used: set[str] = set()

    def _name(self, key: str) -> str:
        return f"{self.path}.{key}" if self.path else key

    def take(self, key: str, kinds: tuple[type, ...], default=None, required=False):
        self.used.add(key)
        if key not in self.data:
            if required:
                raise ConfigError(f"{self._name(key)}: required key is missing")
            return default
        value = self.data[key]
        if isinstance(value, bool) and bool not in kinds:
            raise ConfigError(f"{self._name(key)}: expected {kinds[0].__name__}, got bool")
        if not isinstance(value, kinds):
            expected = " or ".join(k.__name__ for k in kinds)
            raise ConfigError(
                f"{self._name(key)}: expected {expected}, got {type(value).__name__}"
            )
        return value

    def number(self, key: str, default=None, required=False) -> float | None:
        value = self.take(key, (int, float), default, required)
        if value is None:
            return None
        value = float(value)
        if not math.isfinite(value):
            raise ConfigError(f"{self._name(key)}: value must be finite")
        return value

    def table(self, key: str) -> "_Table | None":
        value = self.take(key, (dict,))
        if value is None:
            return None
        return _Table(value, self._name(key))

    def reject_unknown(self) -> None:
        unknown = sorted(set(self.data) - self.used)
        if unknown:
            name = self._name(unknown[0])
            raise ConfigError(f"{name}: unknown key")


def parse_config(text: str) -> RunConfig:
    """Parse and validate a TOML configuration document."""
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML: {exc}") from exc

    root = _Table(raw, "")
    version = root.take("schema_version", (int,), required=True)
    if version != SCHEMA_VERSION:
        raise ConfigError(
            f"schema_version: expected {SCHEMA_VERSION}, got {version!r}"
        )

    scenario_table = root.table("scenario")
    if scenario_table is None:
        raise ConfigError("scenario: required table is missing")
    scenario = _parse_scenario(scenario_table, root.table("detectors"))

    tau_c = scenario.coherence_time_fs
    scan = root.table("scan")
    if scan is None:
        scan = _Table({}, "scan")
    tau_min = scan.number("tau_min_fs", default=-3.0 * tau_c)
    tau_max = scan.number("tau_max_fs", default=3.0 * tau_c)
    steps = scan.take("steps", (int,), default=201)
    mode_match = scan.number("mode_match", default=1.0)
    scan.reject_unknown()
    if steps < 2:
        raise ConfigError("scan.steps: need at least 2 points")
    if tau_min >= tau_max:
        raise ConfigError("scan.tau_min_fs: must be smaller than scan.tau_max_fs")
    if not 0.0 <= mode_match <= 1.0:
        raise ConfigError("scan.mode_match: must lie in [0, 1]")

    sampling = root.table("sampling")
    if sampling is None:
        sampling = _Table({}, "sampling")
    enabled = sampling.take("enabled", (bool,), default=False)
    pair_rate = sampling.number("pair_rate_hz", default=1.0e4)
    integration = sampling.number("integration_time_s", default=1.0)
    seed = sampling.take("seed", (int,), default=0)
    sampling.reject_unknown()
    if pair_rate <= 0.0:
        raise ConfigError("sampling.pair_rate_hz: must be positive")
    if integration <= 0.0:
        raise ConfigError("sampling.integration_time_s: must be positive")
    if seed < 0:
        raise ConfigError("sampling.seed: must be non-negative")

    output = root.table("output")
    if output is None:
        output = _Table({}, "output")
    csv_path = output.take("csv", (str,), default="scan.csv")
    make_plots = output.take("plots", (bool,), default=True)
    output.reject_unknown()
    if not csv_path:
        raise ConfigError("output.csv: must not be empty")

    root.reject_unknown()
    return RunConfig(
        scenario=scenario,
        tau_min_fs=float(tau_min),
        tau_max_fs=float(tau_max),
        steps=int(steps),
        mode_match=float(mode_match),
        sampling_enabled=bool(enabled),
        pair_rate_hz=float(pair_rate),
        integration_time_s=float(integration),
        seed=int(seed),
        csv_path=str(csv_path),
        make_plots=bool(make_plots),
    )


def _parse_scenario(table: _Table, detectors: _Table | None) -> Scenario:
    kind_name = table.take("kind", (str,), required=True)
    try:
        kind = ScenarioKind(kind_name)
    except ValueError:
        valid = ", ".join(k.value for k in ScenarioKind)
        raise ConfigError(f"scenario.kind: {kind_name!r} is not one of {valid}") from None

    default_wavelength, default_fwhm = _SOURCE_DEFAULTS[kind]
    wavelength = table.number("center_wavelength_nm", default=default_wavelength)
    fwhm = table.number("filter_fwhm_nm", default=default_fwhm)
    if wavelength <= 0.0:
        raise ConfigError("scenario.center_wavelength_nm: must be positive")
    if fwhm <= 0.0:
        raise ConfigError("scenario.filter_fwhm_nm: must be positive")

    angle_a = table.number("polarizer_angle_a_deg")
    angle_b = table.number("polarizer_angle_b_deg")
    phase = table.number("phase_rad")
    table.reject_unknown()

    if kind is ScenarioKind.BELL:
        if angle_a is None or angle_b is None:
            raise ConfigError(
                "scenario.polarizer_angle_a_deg: bell requires both polarizer angles"
            )
    elif angle_a is not None or angle_b is not None:
        raise ConfigError(
            "scenario.polarizer_angle_a_deg: polarizer angles only apply to bell"
        )
    if kind is ScenarioKind.DETERMINISTIC:
        if phase is None:
            raise ConfigError("scenario.phase_rad: deterministic requires a phase")
    elif phase is not None:
        raise ConfigError("scenario.phase_rad: a phase only applies to deterministic")

    common = dict(center_wavelength_nm=wavelength, filter_fwhm_nm=fwhm)
    if kind is ScenarioKind.HOM_DIP:
        scenario = hom_dip(**common)
    elif kind is ScenarioKind.CASCADE:
        scenario = cascade(**common)
    elif kind is ScenarioKind.BELL:
        scenario = bell(angle_a, angle_b, **common)
    else:
        scenario = deterministic(phase, **common)

    efficiencies = list(scenario.efficiencies)
    if detectors is not None:
        ports = scenario.detector_ports
        for port in list(detectors.data):
            if port not in ports:
                raise ConfigError(
                    f"detectors.{port}: no detector on this port "
                    f"(expected one of {', '.join(ports)})"
                )
            eta = detectors.number(port)
            if not 0.0 <= eta <= 1.0:
                raise ConfigError(f"detectors.{port}: efficiency must lie in [0, 1]")
            efficiencies[ports.index(port)] = eta
        detectors.reject_unknown()

    try:
        return Scenario(
            kind=scenario.kind,
            center_wavelength_nm=scenario.center_wavelength_nm,
            filter_fwhm_nm=scenario.filter_fwhm_nm,
            efficiencies=tuple(efficiencies),
            polarizer_angles_deg=scenario.polarizer_angles_deg,
            phase_rad=scenario.phase_rad,
        )
    except DomainError as exc:
        raise ConfigError(f"scenario: {exc}") from exc


def load_config(path: str) -> RunConfig:
    """Read and parse a configuration file."""
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    return parse_config(text)
