"""Standard two-photon interference experiments and delay scans.

Four scenarios are provided, all fed by one photon pair:

* ``hom_dip``       : 50/50 beamsplitter, detectors on both outputs.
* ``cascade``       : beamsplitter, then the bunched output port is analyzed
                      by a half-wave plate at 22.5 degrees and a polarizing
                      beamsplitter feeding two detectors.
* ``bell``          : one input rotated to vertical, beamsplitter, then one
                      polarizer per output port in front of the detectors.
* ``deterministic`` : polarization-entangled pair with a relative phase
                      between its two amplitudes, interfered on the
                      beamsplitter; the phase switches bunching on and off.

The arrival-time delay ``tau`` enters through the overlap of the two photons'
temporal modes.  For a Gaussian spectral filter of FWHM ``filter_fwhm_nm``
centered at ``center_wavelength_nm`` the overlap is

    v(tau) = exp(-tau^2 / (2 tau_c^2)),
    tau_c  = sqrt(2 ln 2) / (pi dnu),   dnu = c filter_fwhm / wavelength^2.

An overall mode-match factor in [0, 1] scales the zero-delay overlap to model
residual spatial or spectral mismatch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Sequence

import numpy as np

from .detection import (
    DetectorSpec,
    coincidence_probability,
    singles_probability,
)
from .elements import (
    Circuit,
    beamsplitter,
    half_wave_plate,
    phase_plate,
    polarizer,
    polarizing_beamsplitter,
    run_circuit,
)
from .fock import (
    H,
    V,
    DomainError,
    PhotonicState,
    make_pair_state,
    superpose,
)

SPEED_OF_LIGHT_NM_PER_FS = 299.792458

PORT_A = "a"
PORT_B = "b"
PORT_C = "c"
PORT_D = "d"
ENV_A = "env_a"
ENV_B = "env_b"


class ScenarioKind(Enum):
    HOM_DIP = "hom_dip"
    CASCADE = "cascade"
    BELL = "bell"
    DETERMINISTIC = "deterministic"


@dataclass(frozen=True)
class Scenario:
    """One experiment: kind, source spectrum, detector efficiencies, knobs."""

    kind: ScenarioKind
    center_wavelength_nm: float
    filter_fwhm_nm: float
    efficiencies: tuple[float, float] = (1.0, 1.0)
    polarizer_angles_deg: tuple[float, float] | None = None
    phase_rad: float | None = None

    def __post_init__(self) -> None:
        if self.center_wavelength_nm <= 0.0:
            raise DomainError("center wavelength must be positive")
        if self.filter_fwhm_nm <= 0.0:
            raise DomainError("filter bandwidth must be positive")
        if len(self.efficiencies) != 2:
            raise DomainError("exactly one efficiency per detector is required")
        for eta in self.efficiencies:
            if not 0.0 <= eta <= 1.0:
                raise DomainError(f"efficiency {eta!r} must lie in [0, 1]")
        if (self.polarizer_angles_deg is not None) != (self.kind is ScenarioKind.BELL):
            raise DomainError("polarizer angles are required exactly for bell")
        if (self.phase_rad is not None) != (self.kind is ScenarioKind.DETERMINISTIC):
            raise DomainError("a phase is required exactly for deterministic")
        if self.polarizer_angles_deg is not None and len(self.polarizer_angles_deg) != 2:
            raise DomainError("bell needs exactly two polarizer angles")

    @property
    def detector_ports(self) -> tuple[str, str]:
        if self.kind is ScenarioKind.CASCADE:
            return (PORT_C, PORT_D)
        return (PORT_A, PORT_B)

    @property
    def detector_pairs(self) -> tuple[tuple[str, str], ...]:
        return (self.detector_ports,)

    @property
    def coherence_time_fs(self) -> float:
        return coherence_time_fs(self.center_wavelength_nm, self.filter_fwhm_nm)


def hom_dip(
    *,
    efficiencies: tuple[float, float] = (1.0, 1.0),
    center_wavelength_nm: float = 702.2,
    filter_fwhm_nm: float = 3.0,
) -> Scenario:
    return Scenario(
        ScenarioKind.HOM_DIP, center_wavelength_nm, filter_fwhm_nm, tuple(efficiencies)
    )


def cascade(
    *,
    efficiencies: tuple[float, float] = (1.0, 1.0),
    center_wavelength_nm: float = 702.2,
    filter_fwhm_nm: float = 3.0,
) -> Scenario:
    return Scenario(
        ScenarioKind.CASCADE, center_wavelength_nm, filter_fwhm_nm, tuple(efficiencies)
    )


def bell(
    angle_a_deg: float,
    angle_b_deg: float,
    *,
    efficiencies: tuple[float, float] = (1.0, 1.0),
    center_wavelength_nm: float = 702.2,
    filter_fwhm_nm: float = 3.0,
) -> Scenario:
    return Scenario(
        ScenarioKind.BELL,
        center_wavelength_nm,
        filter_fwhm_nm,
        tuple(efficiencies),
        polarizer_angles_deg=(float(angle_a_deg), float(angle_b_deg)),
    )


def deterministic(
    phase_rad: float,
    *,
    efficiencies: tuple[float, float] = (1.0, 1.0),
    center_wavelength_nm: float = 780.0,
    filter_fwhm_nm: float = 20.0,
) -> Scenario:
    return Scenario(
        ScenarioKind.DETERMINISTIC,
        center_wavelength_nm,
        filter_fwhm_nm,
        tuple(efficiencies),
        phase_rad=float(phase_rad),
    )


def coherence_time_fs(center_wavelength_nm: float, filter_fwhm_nm: float) -> float:
    """Coherence time of a Gaussian filter, in femtoseconds."""
    if center_wavelength_nm <= 0.0 or filter_fwhm_nm <= 0.0:
        raise DomainError("wavelength and bandwidth must be positive")
    dnu_per_fs = (
        SPEED_OF_LIGHT_NM_PER_FS * filter_fwhm_nm / center_wavelength_nm**2
    )
    return math.sqrt(2.0 * math.log(2.0)) / (math.pi * dnu_per_fs)


def overlap_from_delay(
    tau_fs: float, center_wavelength_nm: float, filter_fwhm_nm: float
) -> float:
    """Temporal-mode overlap of the photon pair at relative delay ``tau_fs``."""
    tau_c = coherence_time_fs(center_wavelength_nm, filter_fwhm_nm)
    return math.exp(-(tau_fs**2) / (2.0 * tau_c**2))


def build_scenario(scenario: Scenario) -> Circuit:
    """The optical circuit realizing a scenario, detectors included."""
    eta_1, eta_2 = scenario.efficiencies
    kind = scenario.kind
    if kind is ScenarioKind.HOM_DIP:
        return Circuit(
            ports=(PORT_A, PORT_B),
            elements=(beamsplitter(PORT_A, PORT_B),),
            detectors=(DetectorSpec(PORT_A, eta_1), DetectorSpec(PORT_B, eta_2)),
        )
    if kind is ScenarioKind.CASCADE:
        return Circuit(
            ports=(PORT_A, PORT_B, PORT_C, PORT_D),
            elements=(
                beamsplitter(PORT_A, PORT_B),
                half_wave_plate(PORT_B, 22.5),
                polarizing_beamsplitter(PORT_B, PORT_C, PORT_D),
            ),
            detectors=(DetectorSpec(PORT_C, eta_1), DetectorSpec(PORT_D, eta_2)),
        )
    if kind is ScenarioKind.BELL:
        angle_a, angle_b = scenario.polarizer_angles_deg
        return Circuit(
            ports=(PORT_A, PORT_B, ENV_A, ENV_B),
            elements=(
                half_wave_plate(PORT_A, 45.0),
                beamsplitter(PORT_A, PORT_B),
                polarizer(PORT_A, angle_a, ENV_A),
                polarizer(PORT_B, angle_b, ENV_B),
            ),
            detectors=(DetectorSpec(PORT_A, eta_1), DetectorSpec(PORT_B, eta_2)),
        )
    if kind is ScenarioKind.DETERMINISTIC:
        return Circuit(
            ports=(PORT_A, PORT_B),
            elements=(
                phase_plate(PORT_A, V, scenario.phase_rad),
                beamsplitter(PORT_A, PORT_B),
            ),
            detectors=(DetectorSpec(PORT_A, eta_1), DetectorSpec(PORT_B, eta_2)),
        )
    raise DomainError(f"unsupported scenario kind {kind!r}")


def initial_state(scenario: Scenario, overlap: float) -> PhotonicState:
    """The photon pair entering the scenario's circuit at a given overlap."""
    kind = scenario.kind
    if kind is ScenarioKind.DETERMINISTIC:
        # entangled pair; the relative phase is applied inside the circuit
        return superpose(
            [
                (make_pair_state(PORT_A, H, PORT_B, V, overlap), 1.0),
                (make_pair_state(PORT_A, V, PORT_B, H, overlap), 1.0),
            ]
        )
    return make_pair_state(PORT_A, H, PORT_B, H, overlap)


def rates_at_overlap(
    scenario: Scenario, overlap: float
) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Per-pair singles and coincidence click probabilities at one overlap."""
    circuit = build_scenario(scenario)
    return _rates(scenario, circuit, overlap)


def _rates(
    scenario: Scenario, circuit: Circuit, overlap: float
) -> tuple[tuple[float, ...], tuple[float, ...]]:
    state = run_circuit(circuit, initial_state(scenario, overlap))
    singles = tuple(singles_probability(state, det) for det in circuit.detectors)
    coincidences = tuple(
        coincidence_probability(state, det_a, det_b)
        for det_a, det_b in circuit.detector_pairs()
    )
    return singles, coincidences


@dataclass(frozen=True)
class SamplingInfo:
    pair_rate_hz: float
    integration_time_s: float
    seed: int


@dataclass(frozen=True)
class ScanResult:
    """Delay scan output: probabilities per row, optionally sampled counts."""

    scenario: Scenario
    mode_match: float
    tau_fs: tuple[float, ...]
    overlaps: tuple[float, ...]
    detector_ports: tuple[str, ...]
    pair_ports: tuple[tuple[str, str], ...]
    singles: tuple[tuple[float, ...], ...]
    coincidences: tuple[tuple[float, ...], ...]
    sampling: SamplingInfo | None = None
    singles_counts: tuple[tuple[int, ...], ...] | None = None
    coincidence_counts: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self) -> None:
        n = len(self.tau_fs)
        if n == 0:
            raise DomainError("scan must contain at least one row")
        if any(b <= a for a, b in zip(self.tau_fs, self.tau_fs[1:])):
            raise DomainError("delays must be strictly increasing")
        for field in (self.overlaps, self.singles, self.coincidences):
            if len(field) != n:
                raise DomainError("row count mismatch")

    @property
    def has_counts(self) -> bool:
        return self.singles_counts is not None


def run_scan(
    scenario: Scenario, tau_fs: Sequence[float], mode_match: float = 1.0
) -> ScanResult:
    """Simulate the scenario on every delay of a strictly increasing grid."""
    taus = [float(t) for t in tau_fs]
    if not taus:
        raise DomainError("delay grid must not be empty")
    if any(b <= a for a, b in zip(taus, taus[1:])):
        raise DomainError("delay grid must be strictly increasing")
    if not 0.0 <= mode_match <= 1.0:
        raise DomainError(f"mode match {mode_match!r} must lie in [0, 1]")
    circuit = build_scenario(scenario)
    overlaps = []
    singles = []
    coincidences = []
    for tau in taus:
        v = mode_match * overlap_from_delay(
            tau, scenario.center_wavelength_nm, scenario.filter_fwhm_nm
        )
        s, c = _rates(scenario, circuit, v)
        overlaps.append(v)
        singles.append(s)
        coincidences.append(c)
    return ScanResult(
        scenario=scenario,
        mode_match=float(mode_match),
        tau_fs=tuple(taus),
        overlaps=tuple(overlaps),
        detector_ports=scenario.detector_ports,
        pair_ports=scenario.detector_pairs,
        singles=tuple(singles),
        coincidences=tuple(coincidences),
    )


def sample_counts(
    result: ScanResult,
    pair_rate_hz: float,
    integration_time_s: float,
    seed: int,
) -> ScanResult:
    """Attach Poisson-sampled counts to a scan.

    Every channel count at row ``i`` is drawn as Poisson(probability x
    pair_rate x integration_time) from a generator seeded with
    ``(seed, i)``, so results are reproducible row by row and independent of
    the order in which rows would be evaluated.  Within a row, singles
    channels are drawn before coincidence channels.
    """
    if pair_rate_hz <= 0.0 or integration_time_s <= 0.0:
        raise DomainError("pair rate and integration time must be positive")
    if seed < 0:
        raise DomainError("seed must be non-negative")
    emissions = pair_rate_hz * integration_time_s
    singles_counts = []
    coincidence_counts = []
    for i in range(len(result.tau_fs)):
        rng = np.random.default_rng([int(seed), i])
        singles_counts.append(
            tuple(int(rng.poisson(p * emissions)) for p in result.singles[i])
        )
        coincidence_counts.append(
            tuple(int(rng.poisson(p * emissions)) for p in result.coincidences[i])
        )
    return replace(
        result,
        sampling=SamplingInfo(float(pair_rate_hz), float(integration_time_s), int(seed)),
        singles_counts=tuple(singles_counts),
        coincidence_counts=tuple(coincidence_counts),
    )


@dataclass(frozen=True)
class CurveSummary:
    """Baseline, extremum and shape parameters of one scanned channel."""

    baseline: float
    extremum: float
    extremum_tau_fs: float
    visibility: float
    fwhm_fs: float | None
    is_dip: bool


def analyze_curve(tau_fs: Sequence[float], values: Sequence[float]) -> CurveSummary:
    """Summarize a dip or peak sitting on a flat baseline.

    The baseline is the mean of the outer tenth of rows on each side; the
    extremum is the point farthest from it.  The width is measured between
    the two half-way crossings found walking outward from the extremum, with
    linear interpolation between grid points.
    """
    taus = np.asarray(tau_fs, dtype=float)
    y = np.asarray(values, dtype=float)
    if taus.ndim != 1 or taus.shape != y.shape:
        raise DomainError("delays and values must be 1d arrays of equal length")
    n = taus.size
    if n < 5:
        raise DomainError("need at least 5 rows to analyze a curve")
    if np.any(np.diff(taus) <= 0.0):
        raise DomainError("delays must be strictly increasing")

    edge = max(1, n // 10)
    baseline = float(np.mean(np.concatenate([y[:edge], y[-edge:]])))
    idx = int(np.argmax(np.abs(y - baseline)))
    extremum = float(y[idx])
    span = float(np.max(y) - np.min(y))
    if span <= 1e-12 * max(1.0, abs(baseline)):
        return CurveSummary(baseline, baseline, float(taus[idx]), 0.0, None, False)

    is_dip = extremum < baseline
    visibility = abs(baseline - extremum) / baseline if baseline > 0.0 else 0.0
    level = 0.5 * (baseline + extremum)
    # inside the feature d <= 0, outside d > 0
    d = (y - level) * (1.0 if is_dip else -1.0)

    def crossing(start: int, step: int) -> float | None:
        i = start
        while 0 <= i + step < n:
            inner, outer = d[i], d[i + step]
            if inner <= 0.0 < outer:
                frac = (0.0 - inner) / (outer - inner)
                return float(taus[i] + frac * (taus[i + step] - taus[i]))
            i += step
        return None

    left = crossing(idx, -1)
    right = crossing(idx, +1)
    fwhm = (right - left) if (left is not None and right is not None) else None
    return CurveSummary(baseline, extremum, float(taus[idx]), visibility, fwhm, is_dip)


def predicted_rates(
    scenario: Scenario, overlap: float
) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Closed-form singles and coincidence probabilities at one overlap.

    These are the threshold-detector expressions the simulation must match;
    they exist so scans and reports can be cross-checked without rerunning
    the state algebra.
    """
    v2 = float(overlap) ** 2
    eta_1, eta_2 = scenario.efficiencies
    kind = scenario.kind
    if kind is ScenarioKind.HOM_DIP:
        singles = tuple(eta - eta * eta * (1.0 + v2) / 4.0 for eta in (eta_1, eta_2))
        return singles, (eta_1 * eta_2 * (1.0 - v2) / 2.0,)
    if kind is ScenarioKind.CASCADE:
        singles = tuple(
            eta / 2.0 - eta * eta * (1.0 + v2) / 16.0 for eta in (eta_1, eta_2)
        )
        return singles, (eta_1 * eta_2 * (1.0 + v2) / 8.0,)
    if kind is ScenarioKind.BELL:
        singles = []
        for eta, angle in zip(scenario.efficiencies, scenario.polarizer_angles_deg):
            s2 = math.sin(math.radians(angle)) ** 2
            c2 = math.cos(math.radians(angle)) ** 2
            p_two = s2 * c2 * (1.0 + v2) / 4.0
            p_one = 0.25 + (s2 * s2 + c2 * c2 - 2.0 * s2 * c2 * v2) / 4.0
            singles.append(eta * p_one + (2.0 * eta - eta * eta) * p_two)
        a1 = math.radians(scenario.polarizer_angles_deg[0])
        a2 = math.radians(scenario.polarizer_angles_deg[1])
        pass_pass = (
            math.sin(a1) ** 2 * math.cos(a2) ** 2
            + math.cos(a1) ** 2 * math.sin(a2) ** 2
        ) / 4.0 - v2 * math.sin(2.0 * a1) * math.sin(2.0 * a2) / 8.0
        return tuple(singles), (eta_1 * eta_2 * pass_pass,)
    if kind is ScenarioKind.DETERMINISTIC:
        split = v2 * math.sin(scenario.phase_rad / 2.0) ** 2 + (1.0 - v2) / 2.0
        singles = tuple(
            eta * split + (2.0 * eta - eta * eta) * (1.0 - split) / 2.0
            for eta in (eta_1, eta_2)
        )
        return singles, (eta_1 * eta_2 * split,)
    raise DomainError(f"unsupported scenario kind {kind!r}")


def deterministic_peak_dip_visibility(
    mode_match: float,
    *,
    efficiencies: tuple[float, float] = (1.0, 1.0),
    center_wavelength_nm: float = 780.0,
    filter_fwhm_nm: float = 20.0,
) -> float:
    """Zero-delay coincidence contrast between the two phase settings.

    The two settings sit half a cycle apart: one maximizes coincidences, the
    other minimizes them.  Rates come from the full simulation.
    """
    if not 0.0 <= mode_match <= 1.0:
        raise DomainError(f"mode match {mode_match!r} must lie in [0, 1]")
    common = dict(
        efficiencies=efficiencies,
        center_wavelength_nm=center_wavelength_nm,
        filter_fwhm_nm=filter_fwhm_nm,
    )
    _, (dip,) = rates_at_overlap(deterministic(0.0, **common), mode_match)
    _, (peak,) = rates_at_overlap(deterministic(math.pi, **common), mode_match)
    if peak + dip == 0.0:
        return 0.0
    return (peak - dip) / (peak + dip)


def mode_match_for_visibility(
    target: float,
    *,
    tolerance: float = 1e-6,
    efficiencies: tuple[float, float] = (1.0, 1.0),
) -> float:
    """Mode-match factor whose simulated phase-switching contrast hits target.

    Solved by bisection; the contrast grows monotonically from 0 at full
    mismatch to 1 at perfect match.
    """
    if not 0.0 <= target <= 1.0:
        raise DomainError("target visibility must lie in [0, 1]")
    if tolerance <= 0.0:
        raise DomainError("tolerance must be positive")
    low, high = 0.0, 1.0
    while high - low > tolerance:
        mid = 0.5 * (low + high)
        value = deterministic_peak_dip_visibility(mid, efficiencies=efficiencies)
        if value < target:
            low = mid
        else:
            high = mid
    return 0.5 * (low + high)
