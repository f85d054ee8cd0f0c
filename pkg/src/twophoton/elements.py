"""Optical elements as unitary maps on two-photon states.

Conventions
-----------
* Beamsplitter (50/50, symmetric phase convention), applied per polarization
  and temporal mode:

      adag -> (adag + i bdag) / sqrt(2),   bdag -> (i adag + bdag) / sqrt(2)

* Half-wave plate with its fast axis at ``angle_deg`` from horizontal:

      H -> cos(2t) H + sin(2t) V,   V -> sin(2t) H - cos(2t) V

* Polarizer at ``angle_deg``: the component along the pass axis stays on the
  port; the orthogonal component is swapped onto a dedicated environment
  port, which keeps the overall map unitary.  Environment ports must never
  carry detectors.
* Polarizing beamsplitter: pure label routing, (in, H) <-> (h_out, H) and
  (in, V) <-> (v_out, V).
* Phase plate: multiplies the chosen (port, pol) component by exp(i phase).
* Delay: photons on the port move to a fresh temporal mode whose overlap with
  the reference mode (temporal index 0) is the requested value.  It requires
  every photon on that port to sit in a single temporal index across all
  branches, so delays belong before any orthonormalizing measurement step.

Elements never create or destroy photons, and every map is norm-preserving;
a norm drift beyond ``NORM_TOLERANCE`` raises ``NumericError``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Iterable

import numpy as np

from .detection import DetectorSpec
from .fock import (
    H,
    NORM_TOLERANCE,
    V,
    DomainError,
    ModeLabel,
    NumericError,
    Pair,
    PhotonicState,
    POLARIZATIONS,
    TemporalModeSet,
    known_ports,
    norm_squared,
)

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


class ElementKind(Enum):
    BEAMSPLITTER = "beamsplitter"
    HALF_WAVE_PLATE = "half_wave_plate"
    POLARIZER = "polarizer"
    POLARIZING_BEAMSPLITTER = "polarizing_beamsplitter"
    PHASE_PLATE = "phase_plate"
    DELAY = "delay"


@dataclass(frozen=True)
class Element:
    """One placed element; ``ports`` meaning depends on the kind."""

    kind: ElementKind
    ports: tuple[str, ...]
    angle_deg: float | None = None
    pol: str | None = None
    phase_rad: float | None = None
    overlap: complex | None = None


def beamsplitter(port_a: str, port_b: str) -> Element:
    if port_a == port_b:
        raise DomainError("beamsplitter needs two distinct ports")
    return Element(ElementKind.BEAMSPLITTER, (port_a, port_b))


def half_wave_plate(port: str, angle_deg: float) -> Element:
    return Element(ElementKind.HALF_WAVE_PLATE, (port,), angle_deg=float(angle_deg))


def polarizer(port: str, angle_deg: float, env_port: str) -> Element:
    if env_port == port:
        raise DomainError("polarizer environment port must differ from its port")
    return Element(ElementKind.POLARIZER, (port, env_port), angle_deg=float(angle_deg))


def polarizing_beamsplitter(port_in: str, port_h_out: str, port_v_out: str) -> Element:
    if port_h_out == port_v_out:
        raise DomainError("polarizing beamsplitter outputs must be distinct")
    return Element(
        ElementKind.POLARIZING_BEAMSPLITTER, (port_in, port_h_out, port_v_out)
    )


def phase_plate(port: str, pol: str, phase_rad: float) -> Element:
    if pol not in POLARIZATIONS:
        raise DomainError(f"polarization must be one of {POLARIZATIONS}, got {pol!r}")
    return Element(
        ElementKind.PHASE_PLATE, (port,), pol=pol, phase_rad=float(phase_rad)
    )


def delay(port: str, overlap: complex) -> Element:
    if abs(complex(overlap)) > 1.0 + 1e-12:
        raise DomainError("delay overlap magnitude cannot exceed 1")
    return Element(ElementKind.DELAY, (port,), overlap=complex(overlap))


LabelRule = Callable[[ModeLabel], list[tuple[ModeLabel, complex]]]


def _apply_label_rule(state: PhotonicState, rule: LabelRule) -> PhotonicState:
    before = norm_squared(state)
    items: list[tuple[Pair, complex]] = []
    for (m1, m2), amp in state.terms:
        for x, cx in rule(m1):
            for y, cy in rule(m2):
                items.append(((x, y), amp * cx * cy))
    out = PhotonicState.of(items, state.temporal_modes)
    after = norm_squared(out)
    if abs(after - before) > NORM_TOLERANCE * max(1.0, abs(before)):
        raise NumericError(
            f"element application drifted the norm from {before!r} to {after!r}"
        )
    return out


def apply_beamsplitter(state: PhotonicState, port_a: str, port_b: str) -> PhotonicState:
    if port_a == port_b:
        raise DomainError("beamsplitter needs two distinct ports")

    def rule(label: ModeLabel) -> list[tuple[ModeLabel, complex]]:
        if label.port == port_a:
            return [(label, _INV_SQRT2), (replace(label, port=port_b), 1j * _INV_SQRT2)]
        if label.port == port_b:
            return [(replace(label, port=port_a), 1j * _INV_SQRT2), (label, _INV_SQRT2)]
        return [(label, 1.0)]

    return _apply_label_rule(state, rule)


def apply_hwp(state: PhotonicState, port: str, angle_deg: float) -> PhotonicState:
    two_theta = 2.0 * math.radians(angle_deg)
    c = math.cos(two_theta)
    s = math.sin(two_theta)

    def rule(label: ModeLabel) -> list[tuple[ModeLabel, complex]]:
        if label.port != port:
            return [(label, 1.0)]
        if label.pol == H:
            return [(label, c), (replace(label, pol=V), s)]
        return [(replace(label, pol=H), s), (label, -c)]

    return _apply_label_rule(state, rule)


def apply_polarizer(
    state: PhotonicState, port: str, angle_deg: float, env_port: str
) -> PhotonicState:
    if env_port == port:
        raise DomainError("polarizer environment port must differ from its port")
    a = math.radians(angle_deg)
    c = math.cos(a)
    s = math.sin(a)
    # pass axis (c, s) stays on the port, block axis (-s, c) swaps with the
    # environment port; both components keep their lab-frame polarization mix
    def rule(label: ModeLabel) -> list[tuple[ModeLabel, complex]]:
        if label.port == port:
            keep, move = label, replace(label, port=env_port)
        elif label.port == env_port:
            keep, move = label, replace(label, port=port)
        else:
            return [(label, 1.0)]
        if label.pol == H:
            pass_amp, block_amp = c, -s
        else:
            pass_amp, block_amp = s, c
        out = [
            (replace(keep, pol=H), pass_amp * c),
            (replace(keep, pol=V), pass_amp * s),
            (replace(move, pol=H), block_amp * -s),
            (replace(move, pol=V), block_amp * c),
        ]
        return [(lbl, amp) for lbl, amp in out if amp != 0.0]

    return _apply_label_rule(state, rule)


def apply_pbs(
    state: PhotonicState, port_in: str, port_h_out: str, port_v_out: str
) -> PhotonicState:
    if port_h_out == port_v_out:
        raise DomainError("polarizing beamsplitter outputs must be distinct")
    swap_h = {port_in: port_h_out, port_h_out: port_in}
    swap_v = {port_in: port_v_out, port_v_out: port_in}

    def rule(label: ModeLabel) -> list[tuple[ModeLabel, complex]]:
        table = swap_h if label.pol == H else swap_v
        target = table.get(label.port)
        if target is None or target == label.port:
            return [(label, 1.0)]
        return [(replace(label, port=target), 1.0)]

    return _apply_label_rule(state, rule)


def apply_phase(
    state: PhotonicState, port: str, pol: str, phase_rad: float
) -> PhotonicState:
    if pol not in POLARIZATIONS:
        raise DomainError(f"polarization must be one of {POLARIZATIONS}, got {pol!r}")
    factor = complex(math.cos(phase_rad), math.sin(phase_rad))

    def rule(label: ModeLabel) -> list[tuple[ModeLabel, complex]]:
        if label.port == port and label.pol == pol:
            return [(label, factor)]
        return [(label, 1.0)]

    return _apply_label_rule(state, rule)


def apply_delay(state: PhotonicState, port: str, overlap: complex) -> PhotonicState:
    """Move every photon on ``port`` to a fresh temporal mode.

    The fresh mode has the requested overlap with the reference mode
    (temporal index 0) and is built as v*phi_0 + sqrt(1-|v|^2)*chi with chi
    orthogonal to all existing modes, so the extended Gram matrix stays
    positive semidefinite.  Requires all photons on the port to share one
    temporal index across every branch.
    """
    v = complex(overlap)
    if abs(v) > 1.0 + 1e-12:
        raise DomainError("delay overlap magnitude cannot exceed 1")
    if abs(v) > 1.0:
        v /= abs(v)
    if port not in known_ports(state):
        raise DomainError(f"unknown port {port!r}")
    indices = {
        label.temporal
        for pair, _ in state.terms
        for label in pair
        if label.port == port
    }
    if len(indices) != 1:
        raise DomainError(
            "delay requires all photons on the port to share one temporal mode"
        )
    modes = state.temporal_modes
    old = modes.gram
    n = modes.count
    # fresh mode overlaps: <phi_j | phi_new> = v * <phi_j | phi_0>
    grown = np.zeros((n + 1, n + 1), dtype=complex)
    grown[:n, :n] = old
    column = v * old[:, 0]
    grown[:n, n] = column
    grown[n, :n] = column.conj()
    grown[n, n] = 1.0

    def relabel(label: ModeLabel) -> ModeLabel:
        if label.port == port:
            return replace(label, temporal=n)
        return label

    items = [
        ((relabel(m1), relabel(m2)), amp) for (m1, m2), amp in state.terms
    ]
    moved = PhotonicState.of(items, TemporalModeSet(n + 1, grown))
    return _prune_temporal(moved)


def _prune_temporal(state: PhotonicState) -> PhotonicState:
    """Drop temporal modes no photon uses, keeping the reference mode 0."""
    used = {
        label.temporal for pair, _ in state.terms for label in pair
    }
    used.add(0)
    if len(used) == state.temporal_modes.count:
        return state
    order = sorted(used)
    index = {old: new for new, old in enumerate(order)}
    gram = state.temporal_modes.gram[np.ix_(order, order)]
    items = [
        (
            (
                replace(m1, temporal=index[m1.temporal]),
                replace(m2, temporal=index[m2.temporal]),
            ),
            amp,
        )
        for (m1, m2), amp in state.terms
    ]
    return PhotonicState.of(items, TemporalModeSet(len(order), gram))


def apply_element(state: PhotonicState, element: Element) -> PhotonicState:
    kind = element.kind
    if kind is ElementKind.BEAMSPLITTER:
        return apply_beamsplitter(state, *element.ports)
    if kind is ElementKind.HALF_WAVE_PLATE:
        return apply_hwp(state, element.ports[0], element.angle_deg)
    if kind is ElementKind.POLARIZER:
        return apply_polarizer(
            state, element.ports[0], element.angle_deg, element.ports[1]
        )
    if kind is ElementKind.POLARIZING_BEAMSPLITTER:
        return apply_pbs(state, *element.ports)
    if kind is ElementKind.PHASE_PLATE:
        return apply_phase(state, element.ports[0], element.pol, element.phase_rad)
    if kind is ElementKind.DELAY:
        return apply_delay(state, element.ports[0], element.overlap)
    raise DomainError(f"unsupported element kind {kind!r}")


@dataclass(frozen=True)
class Circuit:
    """Declared ports, an ordered element list, and detector placements."""

    ports: tuple[str, ...]
    elements: tuple[Element, ...]
    detectors: tuple[DetectorSpec, ...] = ()

    def __post_init__(self) -> None:
        if len(set(self.ports)) != len(self.ports):
            raise DomainError("circuit ports must be unique")
        declared = set(self.ports)
        for element in self.elements:
            missing = set(element.ports) - declared
            if missing:
                raise DomainError(
                    f"element {element.kind.value} references undeclared ports {sorted(missing)}"
                )
        seen: set[str] = set()
        env_ports = self.environment_ports
        for det in self.detectors:
            if det.port not in declared:
                raise DomainError(f"detector references undeclared port {det.port!r}")
            if det.port in seen:
                raise DomainError(f"two detectors on port {det.port!r}")
            if det.port in env_ports:
                raise DomainError(
                    f"detector on environment port {det.port!r} is not allowed"
                )
            seen.add(det.port)

    @property
    def environment_ports(self) -> frozenset[str]:
        return frozenset(
            element.ports[1]
            for element in self.elements
            if element.kind is ElementKind.POLARIZER
        )

    def detector_pairs(self) -> tuple[tuple[DetectorSpec, DetectorSpec], ...]:
        pairs = []
        for i in range(len(self.detectors)):
            for j in range(i + 1, len(self.detectors)):
                pairs.append((self.detectors[i], self.detectors[j]))
        return tuple(pairs)


def run_circuit(circuit: Circuit, state: PhotonicState) -> PhotonicState:
    """Apply every element of the circuit in order."""
    stray = known_ports(state) - set(circuit.ports)
    if stray:
        raise DomainError(f"input state uses undeclared ports {sorted(stray)}")
    for element in circuit.elements:
        state = apply_element(state, element)
    return state
