"""Two-photon interference simulator.

Exact desk-scale model of photon-pair experiments: partially distinguishable
photons tracked over labeled (port, polarization, temporal) modes, passive
optical elements, threshold detectors, and delay scans with optional Poisson
count sampling.
"""

from .detection import (
    DetectorSpec,
    click_probability,
    coincidence_probability,
    singles_probability,
)
from .elements import (
    Circuit,
    Element,
    ElementKind,
    apply_beamsplitter,
    apply_delay,
    apply_element,
    apply_hwp,
    apply_pbs,
    apply_phase,
    apply_polarizer,
    beamsplitter,
    delay,
    half_wave_plate,
    phase_plate,
    polarizer,
    polarizing_beamsplitter,
    run_circuit,
)
from .fock import (
    AMPLITUDE_PRUNE,
    H,
    NORM_TOLERANCE,
    POLARIZATIONS,
    PSD_TOLERANCE,
    V,
    DomainError,
    ModeLabel,
    NumericError,
    OccupationDist,
    PhotonicState,
    TemporalModeSet,
    inner_product,
    joint_distribution,
    known_ports,
    make_pair_state,
    norm_squared,
    normalized,
    occupation_distribution,
    orthonormalize,
    superpose,
)
from .oracle import oracle_joint_distribution, oracle_occupation, transfer_matrix
from .scenarios import (
    CurveSummary,
    SamplingInfo,
    ScanResult,
    Scenario,
    ScenarioKind,
    analyze_curve,
    bell,
    build_scenario,
    cascade,
    coherence_time_fs,
    deterministic,
    deterministic_peak_dip_visibility,
    hom_dip,
    initial_state,
    mode_match_for_visibility,
    overlap_from_delay,
    predicted_rates,
    rates_at_overlap,
    run_scan,
    sample_counts,
)

__version__ = "0.1.0"
