"""Threshold (non-number-resolving) detector model.

A detector clicks when at least one incident photon is registered; each
photon is registered independently with the detector efficiency, so an
n-photon pulse produces a click with probability 1 - (1 - efficiency)^n.
All probabilities here are per emitted pair; absolute count rates follow by
scaling with the pair rate and integration time (see scenarios).
"""

from __future__ import annotations

from dataclasses import dataclass

from .fock import (
    DomainError,
    OccupationDist,
    PhotonicState,
    joint_distribution,
    occupation_distribution,
)


@dataclass(frozen=True)
class DetectorSpec:
    """A threshold detector watching one port."""

    port: str
    efficiency: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.efficiency <= 1.0:
            raise DomainError(
                f"detector efficiency must lie in [0, 1], got {self.efficiency!r}"
            )


def click_probability(dist: OccupationDist, efficiency: float) -> float:
    """Probability that a threshold detector clicks given the photon-number
    distribution at its port."""
    if not 0.0 <= efficiency <= 1.0:
        raise DomainError(f"efficiency must lie in [0, 1], got {efficiency!r}")
    miss = 1.0 - efficiency
    return dist.p1 * efficiency + dist.p2 * (1.0 - miss * miss)


def singles_probability(state: PhotonicState, detector: DetectorSpec) -> float:
    """Per-pair click probability of one detector."""
    dist = occupation_distribution(state, detector.port)
    return click_probability(dist, detector.efficiency)


def coincidence_probability(
    state: PhotonicState, detector_a: DetectorSpec, detector_b: DetectorSpec
) -> float:
    """Per-pair probability that both detectors click on the same emission."""
    if detector_a.port == detector_b.port:
        raise DomainError("coincidence needs detectors on distinct ports")
    joint = joint_distribution(state, detector_a.port, detector_b.port)
    miss_a = 1.0 - detector_a.efficiency
    miss_b = 1.0 - detector_b.efficiency
    total = 0.0
    for na in range(3):
        for nb in range(3):
            p = joint[na, nb]
            if p == 0.0:
                continue
            total += p * (1.0 - miss_a**na) * (1.0 - miss_b**nb)
    return total
