"""State algebra: construction, normalization, orthonormalization, statistics."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twophoton.fock import (
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
    occupation_distribution,
    orthonormalize,
    superpose,
)

overlaps = st.complex_numbers(
    max_magnitude=1.0, allow_nan=False, allow_infinity=False
)


def hom_output(overlap):
    from twophoton.elements import apply_beamsplitter

    state = make_pair_state("a", "H", "b", "H", overlap)
    return apply_beamsplitter(state, "a", "b")


class TestModeLabel:
    def test_rejects_unknown_polarization(self):
        with pytest.raises(DomainError):
            ModeLabel("a", "D", 0)

    def test_rejects_negative_temporal_index(self):
        with pytest.raises(DomainError):
            ModeLabel("a", "H", -1)

    def test_orders_by_port_then_polarization_then_temporal(self):
        assert ModeLabel("a", "H", 0) < ModeLabel("a", "H", 1)
        assert ModeLabel("a", "H", 1) < ModeLabel("a", "V", 0)
        assert ModeLabel("a", "V", 1) < ModeLabel("b", "H", 0)


class TestTemporalModeSet:
    def test_identity_has_exact_identity_gram(self):
        modes = TemporalModeSet.identity(3)
        assert modes.is_identity
        assert np.array_equal(modes.gram, np.eye(3))

    def test_rejects_non_hermitian_gram(self):
        with pytest.raises(DomainError):
            TemporalModeSet(2, np.array([[1.0, 0.5], [0.2, 1.0]]))

    def test_rejects_non_unit_diagonal(self):
        with pytest.raises(DomainError):
            TemporalModeSet(2, np.array([[1.0, 0.0], [0.0, 0.9]]))

    def test_rejects_overlap_magnitude_above_one(self):
        with pytest.raises(DomainError):
            TemporalModeSet.pair(1.5)

    def test_rejects_indefinite_gram(self):
        gram = np.array(
            [[1.0, 1.0, 0.0], [1.0, 1.0, 1.0], [0.0, 1.0, 1.0]]
        )
        with pytest.raises(NumericError):
            TemporalModeSet(3, gram)

    def test_gram_is_read_only(self):
        modes = TemporalModeSet.pair(0.3)
        with pytest.raises(ValueError):
            modes.gram[0, 1] = 0.9


class TestMakePairState:
    def test_distinct_ports_single_term_unit_amplitude(self):
        state = make_pair_state("a", "H", "b", "H", 1.0)
        assert len(state.terms) == 1
        (pair, amp) = state.terms[0]
        assert pair == (ModeLabel("a", "H", 0), ModeLabel("b", "H", 1))
        assert amp == pytest.approx(1.0)
        assert norm_squared(state) == pytest.approx(1.0, abs=1e-15)

    def test_orthogonal_polarizations_do_not_interfere_at_beamsplitter(self):
        from twophoton.elements import apply_beamsplitter

        state = make_pair_state("a", "H", "b", "V", 1.0)
        out = apply_beamsplitter(state, "a", "b")
        joint = joint_distribution(out, "a", "b")
        assert joint[1, 1] == pytest.approx(0.5, abs=1e-12)

    def test_rejects_overlap_magnitude_above_one(self):
        with pytest.raises(DomainError):
            make_pair_state("a", "H", "b", "H", 1.0 + 1e-6)

    @pytest.mark.parametrize("overlap", [1.0, 0.0, 0.5, -0.25 + 0.5j])
    def test_same_port_same_polarization_normalizes(self, overlap):
        state = make_pair_state("a", "H", "a", "H", overlap)
        assert norm_squared(state) == pytest.approx(1.0, abs=1e-12)
        assert occupation_distribution(state, "a").p2 == pytest.approx(1.0, abs=1e-12)

    @settings(deadline=None, max_examples=60)
    @given(overlap=overlaps)
    def test_always_normalized(self, overlap):
        state = make_pair_state("a", "H", "b", "H", overlap)
        assert norm_squared(state) == pytest.approx(1.0, abs=1e-12)


class TestSuperpose:
    def test_normalizes_orthogonal_components(self):
        one = make_pair_state("a", "H", "b", "V", 0.5)
        two = make_pair_state("a", "V", "b", "H", 0.5)
        state = superpose([(one, 1.0), (two, 1.0)])
        assert norm_squared(state) == pytest.approx(1.0, abs=1e-12)
        assert len(state.terms) == 2
        assert abs(state.terms[0][1]) == pytest.approx(1 / math.sqrt(2), abs=1e-12)

    def test_rejects_mismatched_temporal_modes(self):
        one = make_pair_state("a", "H", "b", "V", 0.5)
        two = make_pair_state("a", "V", "b", "H", 0.75)
        with pytest.raises(DomainError):
            superpose([(one, 1.0), (two, 1.0)])

    def test_rejects_cancelling_components(self):
        one = make_pair_state("a", "H", "b", "V", 0.5)
        with pytest.raises(DomainError):
            superpose([(one, 1.0), (one, -1.0)])


class TestOrthonormalize:
    def test_identity_gram_returned_unchanged(self):
        state = make_pair_state("a", "H", "b", "H", 0.0)
        ortho = orthonormalize(state)
        assert ortho is state

    def test_preserves_norm(self):
        state = make_pair_state("a", "H", "b", "H", 0.5)
        assert norm_squared(orthonormalize(state)) == pytest.approx(1.0, abs=1e-12)

    def test_resulting_gram_is_identity(self):
        state = make_pair_state("a", "H", "b", "H", 0.5)
        assert orthonormalize(state).temporal_modes.is_identity

    def test_expansion_reproduces_the_overlap(self):
        # photon 1 sits on port a, photon 2 on port b; their expansion
        # vectors on the orthonormal basis must overlap by the original v
        overlap = 0.5
        state = make_pair_state("a", "H", "b", "H", overlap)
        ortho = orthonormalize(state)
        count = ortho.temporal_modes.count
        matrix = np.zeros((count, count), dtype=complex)
        for (m1, m2), amp in ortho.terms:
            assert {m1.port, m2.port} == {"a", "b"}
            first, second = (m1, m2) if m1.port == "a" else (m2, m1)
            matrix[first.temporal, second.temporal] += amp
        u_vecs, sing, v_vecs = np.linalg.svd(matrix)
        assert sing[0] == pytest.approx(1.0, abs=1e-12)
        assert sing[1:] == pytest.approx(0.0, abs=1e-12)
        photon_1 = u_vecs[:, 0]
        photon_2 = v_vecs[0, :].conj()
        reconstructed = abs(np.vdot(photon_1, photon_2))
        assert reconstructed == pytest.approx(overlap, abs=1e-12)
        perpendicular = math.sqrt(1.0 - reconstructed**2)
        assert perpendicular == pytest.approx(math.sqrt(0.75), abs=1e-12)

    def test_drops_null_modes_for_full_overlap(self):
        state = make_pair_state("a", "H", "b", "H", 1.0)
        ortho = orthonormalize(state)
        assert ortho.temporal_modes.count == 1

    @settings(deadline=None, max_examples=40)
    @given(overlap=overlaps)
    def test_statistics_invariant_under_orthonormalization(self, overlap):
        state = hom_output(overlap)
        ortho = orthonormalize(state)
        for port in ("a", "b"):
            before = occupation_distribution(state, port).as_tuple()
            after = occupation_distribution(ortho, port).as_tuple()
            assert before == pytest.approx(after, abs=1e-12)


class TestOccupationDistribution:
    @pytest.mark.parametrize(
        "overlap, expected",
        [
            (1.0, (0.5, 0.0, 0.5)),
            (0.0, (0.25, 0.5, 0.25)),
            (0.5, (0.3125, 0.375, 0.3125)),
        ],
    )
    def test_beamsplitter_output_occupation(self, overlap, expected):
        out = hom_output(overlap)
        for port in ("a", "b"):
            occ = occupation_distribution(out, port)
            assert occ.as_tuple() == pytest.approx(expected, abs=1e-12)

    def test_rejects_unknown_port(self):
        state = make_pair_state("a", "H", "b", "H", 0.5)
        with pytest.raises(DomainError):
            occupation_distribution(state, "nowhere")

    @settings(deadline=None, max_examples=40)
    @given(overlap=overlaps)
    def test_probabilities_sum_to_one(self, overlap):
        out = hom_output(overlap)
        occ = occupation_distribution(out, "a")
        assert sum(occ.as_tuple()) == pytest.approx(1.0, abs=1e-10)

    @settings(deadline=None, max_examples=40)
    @given(overlap=overlaps)
    def test_two_photons_in_total(self, overlap):
        out = hom_output(overlap)
        total = sum(occupation_distribution(out, port).mean for port in ("a", "b"))
        assert total == pytest.approx(2.0, abs=1e-10)

    @settings(deadline=None, max_examples=40)
    @given(overlap=overlaps)
    def test_symmetric_ports_have_equal_occupation(self, overlap):
        out = hom_output(overlap)
        occ_a = occupation_distribution(out, "a").as_tuple()
        occ_b = occupation_distribution(out, "b").as_tuple()
        assert occ_a == pytest.approx(occ_b, abs=1e-12)


class TestJointDistribution:
    @pytest.mark.parametrize(
        "overlap, p11, p20",
        [(1.0, 0.0, 0.5), (0.0, 0.5, 0.25), (0.5, 0.375, 0.3125)],
    )
    def test_beamsplitter_output_joint(self, overlap, p11, p20):
        joint = joint_distribution(hom_output(overlap), "a", "b")
        assert joint[1, 1] == pytest.approx(p11, abs=1e-12)
        assert joint[2, 0] == pytest.approx(p20, abs=1e-12)
        assert joint[0, 2] == pytest.approx(p20, abs=1e-12)

    def test_rejects_identical_ports(self):
        state = make_pair_state("a", "H", "b", "H", 0.5)
        with pytest.raises(DomainError):
            joint_distribution(state, "a", "a")

    def test_rejects_unknown_port(self):
        state = make_pair_state("a", "H", "b", "H", 0.5)
        with pytest.raises(DomainError):
            joint_distribution(state, "a", "missing")

    @settings(deadline=None, max_examples=40)
    @given(overlap=overlaps)
    def test_marginals_match_occupation(self, overlap):
        out = hom_output(overlap)
        joint = joint_distribution(out, "a", "b")
        occ_a = occupation_distribution(out, "a").as_tuple()
        occ_b = occupation_distribution(out, "b").as_tuple()
        assert joint.sum(axis=1) == pytest.approx(occ_a, abs=1e-12)
        assert joint.sum(axis=0) == pytest.approx(occ_b, abs=1e-12)

    @settings(deadline=None, max_examples=40)
    @given(overlap=overlaps)
    def test_port_partition_probabilities_sum_to_one(self, overlap):
        out = hom_output(overlap)
        ports = sorted(known_ports(out))
        total = sum(occupation_distribution(out, p).p2 for p in ports)
        for i, port in enumerate(ports):
            for other in ports[i + 1 :]:
                total += float(joint_distribution(out, port, other)[1, 1])
        assert total == pytest.approx(1.0, abs=1e-10)


class TestInnerProduct:
    def test_mismatched_temporal_modes_rejected(self):
        one = make_pair_state("a", "H", "b", "H", 0.25)
        two = make_pair_state("a", "H", "b", "H", 0.75)
        with pytest.raises(DomainError):
            inner_product(one, two)

    def test_self_inner_product_is_norm(self):
        state = make_pair_state("a", "H", "b", "H", 0.5)
        assert inner_product(state, state).real == pytest.approx(1.0, abs=1e-12)


class TestOccupationDist:
    def test_clamps_tiny_negative_probabilities(self):
        dist = OccupationDist(-1e-15, 0.5, 0.5)
        assert dist.p0 == 0.0

    def test_rejects_probabilities_not_summing_to_one(self):
        with pytest.raises(NumericError):
            OccupationDist(0.5, 0.5, 0.5)

    def test_rejects_out_of_range_probability(self):
        with pytest.raises(NumericError):
            OccupationDist(-0.2, 0.7, 0.5)

    def test_mean_counts_photons(self):
        assert OccupationDist(0.25, 0.5, 0.25).mean == pytest.approx(1.0)


class TestStateValidation:
    def test_rejects_empty_state(self):
        with pytest.raises(DomainError):
            PhotonicState((), TemporalModeSet.identity(1))

    def test_rejects_out_of_range_temporal_index(self):
        pair = (ModeLabel("a", "H", 0), ModeLabel("b", "H", 5))
        with pytest.raises(DomainError):
            PhotonicState.of([(pair, 1.0)], TemporalModeSet.identity(2))

    def test_canonicalization_merges_swapped_pairs(self):
        m1 = ModeLabel("a", "H", 0)
        m2 = ModeLabel("b", "H", 1)
        state = PhotonicState.of(
            [((m2, m1), 0.5), ((m1, m2), 0.5)], TemporalModeSet.identity(2)
        )
        assert len(state.terms) == 1
        assert state.terms[0][1] == pytest.approx(1.0)
