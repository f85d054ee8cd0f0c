"""Shared test utilities: randomized circuits, states, and joint tables."""

from __future__ import annotations

import numpy as np

from twophoton import (
    Circuit,
    PhotonicState,
    beamsplitter,
    half_wave_plate,
    joint_distribution,
    known_ports,
    make_pair_state,
    occupation_distribution,
    phase_plate,
    polarizer,
    polarizing_beamsplitter,
    superpose,
)

CORE_PORTS = ("a", "b", "c", "d")
ENV_PORTS = ("env_1", "env_2")


def random_pair_state(rng: np.random.Generator) -> PhotonicState:
    """A random (possibly entangled) two-photon input on the core ports."""
    port_1, port_2 = rng.choice(CORE_PORTS, size=2, replace=True)
    pol_1 = "H" if rng.random() < 0.5 else "V"
    pol_2 = "H" if rng.random() < 0.5 else "V"
    magnitude = rng.random()
    phase = 2.0 * np.pi * rng.random()
    overlap = magnitude * np.exp(1j * phase)
    state = make_pair_state(port_1, pol_1, port_2, pol_2, overlap)
    if port_1 != port_2 and rng.random() < 0.4:
        flip = {"H": "V", "V": "H"}
        other = make_pair_state(port_1, flip[pol_1], port_2, flip[pol_2], overlap)
        weight = np.exp(2j * np.pi * rng.random())
        state = superpose([(state, 1.0), (other, weight)])
    return state


def random_circuit(rng: np.random.Generator, max_elements: int = 5) -> Circuit:
    """A random circuit over the core ports, polarizers included."""
    env_pool = list(ENV_PORTS)
    used_env: list[str] = []
    elements = []
    n = int(rng.integers(1, max_elements + 1))
    for _ in range(n):
        kinds = ["bs", "hwp", "pbs", "phase"]
        if env_pool:
            kinds.append("pol")
        kind = kinds[int(rng.integers(0, len(kinds)))]
        if kind == "bs":
            pa, pb = rng.choice(CORE_PORTS, size=2, replace=False)
            elements.append(beamsplitter(pa, pb))
        elif kind == "hwp":
            elements.append(
                half_wave_plate(str(rng.choice(CORE_PORTS)), float(rng.uniform(0, 180)))
            )
        elif kind == "pbs":
            pin, ph, pv = rng.choice(CORE_PORTS, size=3, replace=False)
            elements.append(polarizing_beamsplitter(pin, ph, pv))
        elif kind == "phase":
            pol = "H" if rng.random() < 0.5 else "V"
            elements.append(
                phase_plate(
                    str(rng.choice(CORE_PORTS)), pol, float(rng.uniform(0, 2 * np.pi))
                )
            )
        else:
            env = env_pool.pop()
            used_env.append(env)
            elements.append(
                polarizer(str(rng.choice(CORE_PORTS)), float(rng.uniform(-90, 90)), env)
            )
    return Circuit(ports=CORE_PORTS + tuple(used_env), elements=tuple(elements))


def fock_joint_table(state: PhotonicState) -> dict[tuple[str, str], float]:
    """Unordered port-pair probabilities computed through the state algebra."""
    ports = sorted(known_ports(state))
    table: dict[tuple[str, str], float] = {}
    for i, port in enumerate(ports):
        p2 = occupation_distribution(state, port).p2
        if p2 > 0.0:
            table[(port, port)] = p2
        for other in ports[i + 1 :]:
            p11 = float(joint_distribution(state, port, other)[1, 1])
            if p11 > 0.0:
                table[(port, other)] = p11
    return table


def assert_joint_tables_close(
    left: dict[tuple[str, str], float],
    right: dict[tuple[str, str], float],
    tolerance: float,
) -> None:
    keys = set(left) | set(right)
    for key in keys:
        a = left.get(key, 0.0)
        b = right.get(key, 0.0)
        assert abs(a - b) <= tolerance, f"{key}: {a} vs {b}"
