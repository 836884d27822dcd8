import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wchannels import catalog, protocols
from wchannels.catalog import GhzClassParams
from wchannels.protocols import (
    find_recovery,
    ghz3_channel,
    recovery_from_json,
    recovery_to_json,
    teleport,
    transform_channel,
    transform_recovery,
)
from wchannels.qcore import PureState, QOperator, apply, equal_up_to_global_phase, ket, measure, tensor

from .helpers import random_unit, random_unitary

GOLDEN = Path(__file__).parent / "golden"
seeds = st.integers(min_value=0, max_value=2**32 - 1)
angles = st.floats(min_value=0, max_value=2 * np.pi, allow_nan=False)


def epr_input(rng):
    a, b = random_unit(rng, 2)
    return PureState(("1", "2"), [0, a, b, 0])


@pytest.fixture(scope="module")
def w_tilde_channel():
    return transform_channel(ghz3_channel(), catalog.v_operator(), ("B", "C"))


class TestChannelSpec:
    def test_partition_checked(self):
        with pytest.raises(ValueError, match="partition"):
            protocols.ChannelSpec(catalog.ghz(3), ("A",), (("B",),))

    def test_from_state_relabels(self):
        ch = protocols.channel_from_state(catalog.w_state("xyz"))
        assert ch.sender == ("A",)
        assert ch.receiver_labels == ("B", "C")


class TestGhz3Teleport:
    def test_golden_recovery(self):
        golden = recovery_from_json(json.loads((GOLDEN / "recovery_ghz3_theta0.json").read_text()))
        found = find_recovery(ghz3_channel(), catalog.ghz_teleport_basis(0.0), "pauli_local")
        assert set(found.operators) == set(golden.operators)
        for name, op in golden.operators.items():
            assert np.allclose(found.operators[name].matrix, op.matrix, atol=1e-15), name
            assert found.describe(name) == golden.describe(name)

    def test_hand_derived_residual(self):
        # pi+ on qubit 1 and Phi+ on (2, A) leave alpha|11> + beta|00> on (B, C)
        alpha, beta = 0.6, 0.8j
        inp = PureState(("1", "2"), [0, alpha, beta, 0])
        out = measure(tensor(inp, catalog.ghz(3)), catalog.ghz_teleport_basis(0.0))[0]
        assert out.outcome_name == "pi+Phi+"
        assert equal_up_to_global_phase(out.residual, PureState(("B", "C"), [beta, 0, 0, alpha]))

    @pytest.mark.parametrize("theta", [0.0, 0.7, np.pi / 2])
    def test_uniform_and_faithful(self, rng, theta):
        rec = protocols.ghz3_recovery(theta)
        assert rec.complete and all(rec.locality.values())
        for _ in range(20):
            rep = teleport(epr_input(rng), ghz3_channel(), catalog.ghz_teleport_basis(theta), rec)
            assert rep.max_uniform_deviation <= 1e-10
            assert rep.min_fidelity >= 1 - 1e-9
            assert rep.success and not rep.any_nonlocal

    @settings(max_examples=25, deadline=None)
    @given(seeds, angles)
    def test_any_superposition_of_probes(self, seed, theta):
        # the recovery is checked on four probes; linearity carries it to every input
        rng = np.random.default_rng(seed)
        rec = protocols.ghz3_recovery(float(theta))
        rep = teleport(epr_input(rng), ghz3_channel(), catalog.ghz_teleport_basis(float(theta)), rec)
        assert rep.min_fidelity >= 1 - 1e-9

    def test_phase_only_space_needed_off_grid(self):
        basis = catalog.ghz_teleport_basis(0.7)
        assert find_recovery(ghz3_channel(), basis, "pauli_local").missing
        assert find_recovery(ghz3_channel(), basis, "pauli_phase_local").complete

    def test_input_outside_family_fails(self):
        inp = PureState(("1", "2"), [1, 0, 0, 0])
        rep = teleport(inp, ghz3_channel(), catalog.ghz_teleport_basis(0.0), protocols.ghz3_recovery(0.0))
        assert not rep.success


class TestTeleportErrors:
    def test_shared_labels(self):
        inp = PureState(("A", "2"), [0, 1, 0, 0])
        with pytest.raises(ValueError, match="share"):
            teleport(inp, ghz3_channel(), catalog.ghz_teleport_basis(), protocols.ghz3_recovery(0.0))

    def test_incomplete_map(self):
        rec = protocols.ghz3_recovery(0.0)
        partial = protocols.RecoveryMap({k: v for k, v in list(rec.operators.items())[:3]}, rec.receivers)
        with pytest.raises(ValueError, match="no operator"):
            teleport(ket("01"), ghz3_channel(), catalog.ghz_teleport_basis(), partial)

    def test_unknown_space(self):
        with pytest.raises(ValueError):
            find_recovery(ghz3_channel(), catalog.ghz_teleport_basis(), "everything")


class TestWTilde:
    def test_v_times_pauli_complete_and_nonlocal(self, w_tilde_channel, rng):
        basis = catalog.ghz_teleport_basis(0.0)
        rec = find_recovery(w_tilde_channel, basis, "v_times_pauli")
        assert rec.complete
        assert not all(rec.locality.values())
        for _ in range(20):
            assert teleport(epr_input(rng), w_tilde_channel, basis, rec).min_fidelity >= 1 - 1e-9

    def test_pauli_local_fails_everywhere(self, w_tilde_channel):
        rec = find_recovery(w_tilde_channel, catalog.ghz_teleport_basis(0.0), "pauli_local")
        assert len(rec.missing) == 8

    def test_random_local_pairs_fall_short(self, w_tilde_channel):
        best = protocols.sample_local_unitaries(w_tilde_channel, catalog.ghz_teleport_basis(0.0), 2000, seed=3)
        assert max(best.values()) < 0.6

    def test_probabilities_input_independent(self, w_tilde_channel):
        rep = protocols.check_channel_suitability(w_tilde_channel, catalog.ghz_teleport_basis(0.0))
        assert rep.max_deviation < 1e-12
        assert rep.recovery_space == "v_times_pauli"


class TestTransformations:
    @settings(max_examples=15, deadline=None)
    @given(seeds)
    def test_recovery_follows_channel(self, seed):
        rng = np.random.default_rng(seed)
        t = QOperator(random_unitary(rng, 4), "T")
        ch = transform_channel(ghz3_channel(), t, ("B", "C"))
        rec = transform_recovery(protocols.ghz3_recovery(0.0), t)
        rep = teleport(epr_input(rng), ch, catalog.ghz_teleport_basis(0.0), rec)
        assert rep.min_fidelity >= 1 - 1e-9

    def test_target_order_respected(self, rng):
        t = QOperator(random_unitary(rng, 4), "T")
        ch = transform_channel(ghz3_channel(), t, ("C", "B"))
        rec = transform_recovery(protocols.ghz3_recovery(0.0), t, ("C", "B"))
        assert teleport(epr_input(rng), ch, catalog.ghz_teleport_basis(0.0), rec).min_fidelity >= 1 - 1e-9

    def test_sender_qubit_rejected(self):
        with pytest.raises(ValueError, match="sender"):
            transform_channel(ghz3_channel(), catalog.pauli("X"), ("A",))

    def test_input_rotation_rejects_channel_qubits(self):
        with pytest.raises(ValueError):
            protocols.transform_input(catalog.ghz_teleport_basis(), catalog.pauli("X"), ("A",), ghz3_channel())

    def test_rotated_basis_duality(self, rng):
        v = catalog.v_operator()
        ch = ghz3_channel()
        basis = protocols.transform_input(catalog.ghz_teleport_basis(0.0), v, ("1", "2"), ch)
        rec = protocols.ghz3_recovery(0.0)
        for _ in range(10):
            pre = epr_input(rng)
            z = apply(pre, v, ("1", "2"))
            plain = teleport(z, ch, basis, rec, reference=pre.relabel(("B", "C")))
            assert plain.min_fidelity >= 1 - 1e-9
            full = teleport(z, ch, basis, protocols.post_rotate_recovery(rec, v, ("B", "C")))
            assert full.min_fidelity >= 1 - 1e-9

    def test_rotated_input_family(self):
        # V(alpha|01> + beta|10>) = alpha|11> + beta|Psi->
        z = apply(PureState(("1", "2"), [0, 0.6, 0.8, 0]), catalog.v_operator(), ("1", "2"))
        expected = 0.6 * ket("11").amplitudes + 0.8 * catalog.bell("Psi-").amplitudes
        assert np.allclose(z.amplitudes, expected)


class TestFourQubit:
    def test_ghz4(self, rng):
        rep = protocols.teleport_ghz4(PureState.normalized(("1", "2", "3"), np.eye(8)[0] * 0.3 + np.eye(8)[7] * 1j))
        assert len(rep.outcomes) == 16
        assert rep.max_uniform_deviation <= 1e-10
        assert rep.min_fidelity >= 1 - 1e-9
        assert not rep.any_nonlocal

    def test_ghz4_rejects_other_inputs(self):
        with pytest.raises(ValueError, match="form"):
            protocols.teleport_ghz4(ket("010", "123"))

    def test_w3_family_vector(self):
        s = protocols.w3_family(0.6, 0.8)
        expected = np.zeros(8)
        expected[0b001] = expected[0b010] = 0.6 / np.sqrt(2)
        expected[0b100] = 0.8
        assert np.allclose(s.amplitudes, expected)

    @settings(max_examples=15, deadline=None)
    @given(seeds)
    def test_w3_via_ghz4(self, seed):
        alpha, beta = random_unit(np.random.default_rng(seed), 2)
        rep = protocols.teleport_w3_via_ghz4(protocols.w3_family(alpha, beta))
        assert rep.max_uniform_deviation <= 1e-10
        assert rep.min_fidelity >= 1 - 1e-9
        # the final V on C, D spans two receivers
        assert rep.any_nonlocal


class TestDenseCoding:
    @pytest.mark.parametrize("k", range(8))
    def test_round_trip(self, k):
        msg = format(k, "03b")
        rep = protocols.dense_code(msg)
        assert rep.success and rep.decoded == msg

    def test_encoding_names(self):
        assert protocols.dense_code("111").encoding == ("ZX", "X")
        assert protocols.dense_code("000").encoding == ("I", "I")

    def test_encoded_states_are_phi_prime(self):
        for k, (x, s) in enumerate(catalog.PHI_PRIME_INDEX):
            state = protocols.dense_encode_state(format(k, "03b"))
            assert equal_up_to_global_phase(state, catalog.phi_prime_state(x, s))

    def test_bad_message(self):
        with pytest.raises(ValueError, match="three bits"):
            protocols.dense_encode("0102")

    def test_ghz_gram_identity(self):
        assert protocols.gram_deviation(protocols.encoded_states()) < 1e-15

    def test_unbalanced_overlap(self):
        # a|0x> +/- b|1x'> pairs overlap by |a|^2 - |b|^2
        state = catalog.ghz_class(GhzClassParams(np.sqrt(0.6), np.sqrt(0.4)))
        assert protocols.gram_deviation(protocols.encoded_states(state)) == pytest.approx(0.2, abs=1e-14)

    def test_unbalanced_decoding_not_deterministic(self):
        state = catalog.ghz_class(GhzClassParams(np.sqrt(0.6), np.sqrt(0.4)))
        assert not protocols.dense_code("001", state).deterministic


class TestSuitability:
    def test_ghz3(self):
        rep = protocols.check_channel_suitability(ghz3_channel(), catalog.ghz_teleport_basis(0.0))
        assert rep.suitable and rep.recovery_space == "pauli_local"

    def test_f_ghz_drift(self):
        # (1/8)(|a|^2 - |b|^2) times the spread of |alpha|^2 - |beta|^2 over the probes
        rep = protocols.check_channel_suitability(protocols.channel_from_state(catalog.f_ghz()),
                                                  catalog.ghz_teleport_basis(0.0))
        assert rep.max_deviation == pytest.approx(1 / 12, abs=1e-12)
        assert not rep.suitable

    def test_needs_three_probes(self):
        with pytest.raises(ValueError):
            protocols.check_channel_suitability(ghz3_channel(), catalog.ghz_teleport_basis(),
                                                protocols.epr_family_probes()[:2])


class TestSearchSpaces:
    def test_phase_angles(self):
        assert protocols.phase_angles([]) == [0.0]
        got = protocols.phase_angles([0.5])
        assert got[0] == 0.0 and sorted(got) == [-0.5, 0.0, 0.5]

    def test_pauli_local_count(self):
        assert sum(1 for _ in protocols.candidates("pauli_local", 2)) == 16

    def test_full_sample_seeded(self):
        a = [m for _, m in protocols.candidates("full_two_qubit_sample", 2, samples=5, seed=1)]
        b = [m for _, m in protocols.candidates("full_two_qubit_sample", 2, samples=5, seed=1)]
        assert all(np.array_equal(x, y) for x, y in zip(a, b))

    def test_best_candidate_matches_find(self):
        best = protocols.best_candidate_fidelity(ghz3_channel(), catalog.ghz_teleport_basis(0.0), "pauli_local")
        assert min(best.values()) == pytest.approx(1.0, abs=1e-12)


def test_recovery_json_round_trip():
    rec = protocols.ghz3_recovery(0.7)
    back = recovery_from_json(json.loads(json.dumps(recovery_to_json(rec))))
    for name, op in rec.operators.items():
        assert np.array_equal(back.operators[name].matrix, op.matrix)
    assert back.receivers == rec.receivers
