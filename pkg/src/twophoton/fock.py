"""Exact bosonic algebra for two-photon states over labeled optical modes.

A mode label is the triple (spatial port, polarization, temporal-mode index).
Temporal modes may be mutually non-orthogonal; their pairwise overlaps live in
a Gram matrix carried alongside the state.  Everything downstream (element
maps, detection statistics) reduces to the two-photon inner product

    <0| a(n1) a(n2) adag(m1) adag(m2) |0> = <n1|m1><n2|m2> + <n1|m2><n2|m1>

where the single-mode overlap <n|m> vanishes unless port and polarization
agree and otherwise equals the Gram entry of the two temporal indices.

The photon number is fixed at exactly two.  States are immutable; operations
return new values.  Terms are kept canonical: the two labels of a pair are
sorted, pairs are sorted lexicographically, duplicate pairs are merged, and
amplitudes with magnitude below ``AMPLITUDE_PRUNE`` are dropped.  Temporal
mode 0 is the reference mode that delay overlaps are quoted against.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

H = "H"
V = "V"
POLARIZATIONS = (H, V)

# Gram eigenvalues below -PSD_TOLERANCE mean the overlap matrix is not a
# valid set of state overlaps; between -PSD_TOLERANCE and 0 they are clamped.
PSD_TOLERANCE = 1e-12
AMPLITUDE_PRUNE = 1e-14
NORM_TOLERANCE = 1e-10


class DomainError(ValueError):
    """An argument lies outside the operation's declared domain."""


class NumericError(ArithmeticError):
    """A numerical invariant (positive semidefinite Gram, unit norm) failed."""


@dataclass(frozen=True, order=True)
class ModeLabel:
    """One single-photon mode: spatial port, polarization, temporal index."""

    port: str
    pol: str
    temporal: int

    def __post_init__(self) -> None:
        if self.pol not in POLARIZATIONS:
            raise DomainError(
                f"polarization must be one of {POLARIZATIONS}, got {self.pol!r}"
            )
        if self.temporal < 0:
            raise DomainError("temporal mode index must be non-negative")


@dataclass(frozen=True, eq=False)
class TemporalModeSet:
    """Temporal modes identified only through their Gram matrix of overlaps.

    The matrix must be Hermitian with unit diagonal, entries bounded by 1 in
    magnitude, and positive semidefinite within ``PSD_TOLERANCE``.
    """

    count: int
    gram: np.ndarray

    def __post_init__(self) -> None:
        if self.count < 1:
            raise DomainError("need at least one temporal mode")
        g = np.array(self.gram, dtype=complex)
        if g.shape != (self.count, self.count):
            raise DomainError(
                f"Gram matrix shape {g.shape} does not match count {self.count}"
            )
        if not np.allclose(g, g.conj().T, rtol=0.0, atol=1e-12):
            raise DomainError("Gram matrix must be Hermitian")
        if np.max(np.abs(np.diag(g) - 1.0)) > 1e-12:
            raise DomainError("Gram matrix diagonal must be 1")
        if np.max(np.abs(g)) > 1.0 + 1e-12:
            raise DomainError("overlap magnitudes cannot exceed 1")
        g = 0.5 * (g + g.conj().T)
        np.fill_diagonal(g, 1.0)
        if self.count > 1 and np.min(np.linalg.eigvalsh(g)) < -PSD_TOLERANCE:
            raise NumericError("Gram matrix is not positive semidefinite")
        g.flags.writeable = False
        object.__setattr__(self, "gram", g)

    @staticmethod
    def identity(count: int) -> "TemporalModeSet":
        return TemporalModeSet(count, np.eye(count, dtype=complex))

    @staticmethod
    def pair(overlap: complex) -> "TemporalModeSet":
        g = np.array([[1.0, overlap], [np.conj(overlap), 1.0]], dtype=complex)
        return TemporalModeSet(2, g)

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.gram, np.eye(self.count, dtype=complex)))

    def overlap(self, i: int, j: int) -> complex:
        return complex(self.gram[i, j])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TemporalModeSet):
            return NotImplemented
        return self.count == other.count and bool(np.array_equal(self.gram, other.gram))

    def __hash__(self) -> int:  # consistent with __eq__, cheap and coarse
        return hash(self.count)


Pair = tuple[ModeLabel, ModeLabel]
Term = tuple[Pair, complex]


def _canonical_terms(items: Iterable[tuple[Pair, complex]]) -> tuple[Term, ...]:
    merged: dict[Pair, complex] = {}
    for (m1, m2), amp in items:
        key = (m1, m2) if m1 <= m2 else (m2, m1)
        merged[key] = merged.get(key, 0j) + complex(amp)
    kept = [(pair, amp) for pair, amp in merged.items() if abs(amp) > AMPLITUDE_PRUNE]
    kept.sort(key=lambda term: term[0])
    return tuple(kept)


@dataclass(frozen=True, eq=False)
class PhotonicState:
    """Superposition of unordered two-photon label pairs with complex amplitudes."""

    terms: tuple[Term, ...]
    temporal_modes: TemporalModeSet

    def __post_init__(self) -> None:
        if not self.terms:
            raise DomainError("state must contain at least one term")
        count = self.temporal_modes.count
        previous: Pair | None = None
        for (m1, m2), amp in self.terms:
            if m1.temporal >= count or m2.temporal >= count:
                raise DomainError(
                    f"temporal index out of range for {count} temporal modes"
                )
            if m2 < m1:
                raise DomainError("labels within a pair must be sorted")
            if previous is not None and (m1, m2) <= previous:
                raise DomainError("terms must be sorted by pair and unique")
            previous = (m1, m2)

    @staticmethod
    def of(
        items: Iterable[tuple[Pair, complex]], temporal_modes: TemporalModeSet
    ) -> "PhotonicState":
        """Build a state from raw (pair, amplitude) items, canonicalizing them."""
        return PhotonicState(_canonical_terms(items), temporal_modes)

    @property
    def ports(self) -> frozenset[str]:
        return frozenset(
            label.port for pair, _ in self.terms for label in pair
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PhotonicState):
            return NotImplemented
        return self.terms == other.terms and self.temporal_modes == other.temporal_modes


def known_ports(state: PhotonicState) -> frozenset[str]:
    """Ports that appear in at least one branch of the superposition."""
    return state.ports


def _label_overlap(gram: np.ndarray, bra: ModeLabel, ket: ModeLabel) -> complex:
    if bra.port != ket.port or bra.pol != ket.pol:
        return 0j
    return complex(gram[bra.temporal, ket.temporal])


def _pair_overlap(gram: np.ndarray, bra: Pair, ket: Pair) -> complex:
    b1, b2 = bra
    k1, k2 = ket
    return _label_overlap(gram, b1, k1) * _label_overlap(gram, b2, k2) + _label_overlap(
        gram, b1, k2
    ) * _label_overlap(gram, b2, k1)


def inner_product(bra: PhotonicState, ket: PhotonicState) -> complex:
    """Two-photon inner product <bra|ket>; both states must share temporal modes."""
    if bra.temporal_modes != ket.temporal_modes:
        raise DomainError("states must share the same temporal mode set")
    g = bra.temporal_modes.gram
    total = 0j
    for pair_b, amp_b in bra.terms:
        for pair_k, amp_k in ket.terms:
            total += np.conj(amp_b) * amp_k * _pair_overlap(g, pair_b, pair_k)
    return total


def norm_squared(state: PhotonicState) -> float:
    return float(inner_product(state, state).real)


def scale(state: PhotonicState, factor: complex) -> PhotonicState:
    return PhotonicState.of(
        ((pair, amp * factor) for pair, amp in state.terms), state.temporal_modes
    )


def normalized(state: PhotonicState) -> PhotonicState:
    n2 = norm_squared(state)
    if n2 <= NORM_TOLERANCE:
        raise DomainError("cannot normalize a state with vanishing norm")
    return scale(state, 1.0 / np.sqrt(n2))


def make_pair_state(
    port_1: str,
    pol_1: str,
    port_2: str,
    pol_2: str,
    overlap: complex,
) -> PhotonicState:
    """Normalized two-photon state, one photon per (port, pol) argument.

    ``overlap`` is the temporal-mode overlap between the two photons.  Photon 1
    occupies the reference temporal mode 0, photon 2 occupies mode 1.  The two
    photons may share the same (port, pol); the state is normalized through
    the Gram matrix in every case.
    """
    v = complex(overlap)
    if abs(v) > 1.0 + 1e-12:
        raise DomainError(f"overlap magnitude {abs(v):.6g} exceeds 1")
    if abs(v) > 1.0:
        v /= abs(v)
    m1 = ModeLabel(port_1, pol_1, 0)
    m2 = ModeLabel(port_2, pol_2, 1)
    raw = PhotonicState.of([((m1, m2), 1.0 + 0j)], TemporalModeSet.pair(v))
    return normalized(raw)


def superpose(
    components: Sequence[tuple[PhotonicState, complex]]
) -> PhotonicState:
    """Normalized superposition of states sharing one temporal mode set."""
    if not components:
        raise DomainError("superpose needs at least one component")
    modes = components[0][0].temporal_modes
    items: list[tuple[Pair, complex]] = []
    for state, weight in components:
        if state.temporal_modes != modes:
            raise DomainError("superposed states must share the temporal mode set")
        items.extend((pair, amp * weight) for pair, amp in state.terms)
    combined = PhotonicState.of(items, modes)
    return normalized(combined)


def orthonormalize(state: PhotonicState) -> PhotonicState:
    """Re-express the state over an orthonormal temporal basis.

    The Gram matrix is factored as A^H A through its eigendecomposition; modes
    with numerically zero eigenvalue are dropped.  Statistics are unchanged.
    States already on an orthonormal basis are returned as-is.
    """
    modes = state.temporal_modes
    if modes.is_identity:
        return state
    lam, vecs = np.linalg.eigh(modes.gram)
    if lam.min() < -PSD_TOLERANCE:
        raise NumericError("Gram matrix is not positive semidefinite")
    keep = lam > PSD_TOLERANCE
    if not np.any(keep):
        raise NumericError("Gram matrix has no usable temporal modes")
    # coeff[alpha, i] is the component of original mode i on new basis mode alpha
    coeff = np.sqrt(lam[keep])[:, None] * vecs[:, keep].conj().T
    new_count = int(np.sum(keep))
    items: list[tuple[Pair, complex]] = []
    for (m1, m2), amp in state.terms:
        c1 = coeff[:, m1.temporal]
        c2 = coeff[:, m2.temporal]
        for alpha in range(new_count):
            if c1[alpha] == 0:
                continue
            for beta in range(new_count):
                value = amp * c1[alpha] * c2[beta]
                if value == 0:
                    continue
                items.append(
                    (
                        (replace(m1, temporal=alpha), replace(m2, temporal=beta)),
                        value,
                    )
                )
    return PhotonicState.of(items, TemporalModeSet.identity(new_count))


def _measurement_weights(state: PhotonicState) -> list[tuple[Pair, float]]:
    """Probability weight of each basis pair after orthonormalization.

    On an orthonormal basis distinct pairs are orthogonal, so photon-number
    measurements see no cross terms; a doubly occupied mode carries the
    bosonic factor 2 from <0|aa adag adag|0>.
    """
    ortho = orthonormalize(state)
    weights = []
    for (m1, m2), amp in ortho.terms:
        w = abs(amp) ** 2 * (2.0 if m1 == m2 else 1.0)
        weights.append(((m1, m2), w))
    return weights


@dataclass(frozen=True)
class OccupationDist:
    """Photon-number distribution at one port: probabilities for 0, 1, 2."""

    p0: float
    p1: float
    p2: float

    def __post_init__(self) -> None:
        values = []
        for name in ("p0", "p1", "p2"):
            p = getattr(self, name)
            if p < -NORM_TOLERANCE or p > 1.0 + NORM_TOLERANCE:
                raise NumericError(f"{name}={p!r} is not a probability")
            values.append(min(max(p, 0.0), 1.0))
        object.__setattr__(self, "p0", values[0])
        object.__setattr__(self, "p1", values[1])
        object.__setattr__(self, "p2", values[2])
        if abs(self.p0 + self.p1 + self.p2 - 1.0) > NORM_TOLERANCE:
            raise NumericError("occupation probabilities must sum to 1")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.p0, self.p1, self.p2)

    @property
    def mean(self) -> float:
        return self.p1 + 2.0 * self.p2


def occupation_distribution(state: PhotonicState, port: str) -> OccupationDist:
    """Distribution of the photon number found at ``port``."""
    if port not in known_ports(state):
        raise DomainError(f"unknown port {port!r}")
    p = [0.0, 0.0, 0.0]
    for (m1, m2), w in _measurement_weights(state):
        n = int(m1.port == port) + int(m2.port == port)
        p[n] += w
    return OccupationDist(p[0], p[1], p[2])


def joint_distribution(state: PhotonicState, port_a: str, port_b: str) -> np.ndarray:
    """Joint photon-number distribution over two distinct ports.

    Returns a read-only 3x3 array indexed as ``[n_a, n_b]``.
    """
    if port_a == port_b:
        raise DomainError("joint distribution needs two distinct ports")
    known = known_ports(state)
    for port in (port_a, port_b):
        if port not in known:
            raise DomainError(f"unknown port {port!r}")
    joint = np.zeros((3, 3))
    for (m1, m2), w in _measurement_weights(state):
        na = int(m1.port == port_a) + int(m2.port == port_a)
        nb = int(m1.port == port_b) + int(m2.port == port_b)
        joint[na, nb] += w
    joint.flags.writeable = False
    return joint
