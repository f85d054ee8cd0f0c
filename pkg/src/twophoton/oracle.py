"""Brute-force cross-check for circuit statistics.

This module recomputes where the two photons end up without reusing the state
algebra of the main pipeline.  It builds a dense single-photon transfer
matrix over the (port, polarization) basis for every supported element,
factors the temporal Gram matrix on its own, forms the ordered two-photon
amplitude tensor, and reads the joint port statistics off it.  Agreement with
the main pipeline is therefore a meaningful end-to-end check.

Delay elements are rejected: reassigning photons to a target overlap is not a
fixed single-photon linear map.
"""

from __future__ import annotations

import math

import numpy as np

from .elements import Circuit, Element, ElementKind
from .fock import DomainError, PhotonicState, known_ports

# combined single-photon basis: (port, polarization) x orthonormal temporal mode


def _pol_basis(ports: tuple[str, ...]) -> dict[tuple[str, str], int]:
    index: dict[tuple[str, str], int] = {}
    for port in ports:
        for pol in ("H", "V"):
            index[(port, pol)] = len(index)
    return index


def _element_matrix(
    element: Element, index: dict[tuple[str, str], int]
) -> np.ndarray:
    size = len(index)
    m = np.eye(size, dtype=complex)
    kind = element.kind
    if kind is ElementKind.BEAMSPLITTER:
        pa, pb = element.ports
        r = 1.0 / math.sqrt(2.0)
        for pol in ("H", "V"):
            ia, ib = index[(pa, pol)], index[(pb, pol)]
            m[ia, ia] = r
            m[ib, ia] = 1j * r
            m[ia, ib] = 1j * r
            m[ib, ib] = r
    elif kind is ElementKind.HALF_WAVE_PLATE:
        (port,) = element.ports
        c = math.cos(2.0 * math.radians(element.angle_deg))
        s = math.sin(2.0 * math.radians(element.angle_deg))
        ih, iv = index[(port, "H")], index[(port, "V")]
        m[ih, ih] = c
        m[iv, ih] = s
        m[ih, iv] = s
        m[iv, iv] = -c
    elif kind is ElementKind.POLARIZER:
        port, env = element.ports
        c = math.cos(math.radians(element.angle_deg))
        s = math.sin(math.radians(element.angle_deg))
        ph, pv = index[(port, "H")], index[(port, "V")]
        eh, ev = index[(env, "H")], index[(env, "V")]
        for i in (ph, pv, eh, ev):
            for j in (ph, pv, eh, ev):
                m[i, j] = 0.0
        # pass projection stays put, block projection trades places with the
        # environment port; written out in the lab polarization basis
        m[ph, ph] = c * c
        m[pv, ph] = c * s
        m[eh, ph] = s * s
        m[ev, ph] = -s * c
        m[ph, pv] = s * c
        m[pv, pv] = s * s
        m[eh, pv] = -c * s
        m[ev, pv] = c * c
        m[ph, eh] = s * s
        m[pv, eh] = -s * c
        m[eh, eh] = c * c
        m[ev, eh] = c * s
        m[ph, ev] = -c * s
        m[pv, ev] = c * c
        m[eh, ev] = s * c
        m[ev, ev] = s * s
    elif kind is ElementKind.POLARIZING_BEAMSPLITTER:
        port_in, port_h, port_v = element.ports
        for pol, target in (("H", port_h), ("V", port_v)):
            if target == port_in:
                continue
            i_in, i_out = index[(port_in, pol)], index[(target, pol)]
            m[i_in, i_in] = 0.0
            m[i_out, i_out] = 0.0
            m[i_out, i_in] = 1.0
            m[i_in, i_out] = 1.0
    elif kind is ElementKind.PHASE_PLATE:
        (port,) = element.ports
        i = index[(port, element.pol)]
        m[i, i] = complex(math.cos(element.phase_rad), math.sin(element.phase_rad))
    elif kind is ElementKind.DELAY:
        raise DomainError("the oracle does not support delay elements")
    else:
        raise DomainError(f"unsupported element kind {kind!r}")
    return m


def _temporal_factor(gram: np.ndarray) -> np.ndarray:
    """Factor the Gram matrix as F^H F; columns are temporal-mode coordinates."""
    lam, vecs = np.linalg.eigh(np.asarray(gram, dtype=complex))
    if lam.min() < -1e-12:
        raise DomainError("Gram matrix is not positive semidefinite")
    factor = (vecs * np.sqrt(np.clip(lam, 0.0, None))).conj().T
    return factor


def transfer_matrix(circuit: Circuit) -> np.ndarray:
    """Dense single-photon matrix of the whole circuit over (port, pol)."""
    index = _pol_basis(circuit.ports)
    u = np.eye(len(index), dtype=complex)
    for element in circuit.elements:
        u = _element_matrix(element, index) @ u
    return u


def oracle_joint_distribution(
    circuit: Circuit, state: PhotonicState
) -> dict[tuple[str, str], float]:
    """Probability of finding the two photons on each unordered port pair.

    Keys are sorted port pairs; a doubly occupied port appears as
    ``(port, port)``.  Pairs with zero probability are omitted.
    """
    stray = known_ports(state) - set(circuit.ports)
    if stray:
        raise DomainError(f"state uses ports not declared by the circuit: {sorted(stray)}")
    index = _pol_basis(circuit.ports)
    u = transfer_matrix(circuit)
    factor = _temporal_factor(state.temporal_modes.gram)
    n_temporal = factor.shape[0]
    n_labels = len(index)

    # ordered two-photon amplitude tensor over combined (label, temporal) axes
    dim = n_labels * n_temporal
    tensor = np.zeros((dim, dim), dtype=complex)
    for (m1, m2), amp in state.terms:
        one = np.outer(u[:, index[(m1.port, m1.pol)]], factor[:, m1.temporal]).ravel()
        two = np.outer(u[:, index[(m2.port, m2.pol)]], factor[:, m2.temporal]).ravel()
        tensor += amp * np.outer(one, two)

    port_of = np.empty(dim, dtype=object)
    for (port, _pol), i in index.items():
        port_of[i * n_temporal : (i + 1) * n_temporal] = port

    joint: dict[tuple[str, str], float] = {}
    for i in range(dim):
        for j in range(i, dim):
            if i == j:
                p = 2.0 * abs(tensor[i, i]) ** 2
            else:
                p = abs(tensor[i, j] + tensor[j, i]) ** 2
            if p == 0.0:
                continue
            key = tuple(sorted((port_of[i], port_of[j])))
            joint[key] = joint.get(key, 0.0) + p
    return joint


def oracle_occupation(
    joint: dict[tuple[str, str], float], port: str
) -> tuple[float, float, float]:
    """Marginal photon-number distribution of one port from the joint table."""
    p2 = joint.get((port, port), 0.0)
    p1 = sum(
        p for (x, y), p in joint.items() if (x == port) != (y == port)
    )
    total = sum(joint.values())
    return (total - p1 - p2, p1, p2)
