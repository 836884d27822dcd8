import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wchannels import qcore
from wchannels.catalog import bell, ghz, ghz_teleport_basis, pauli, w_state, w_tilde
from wchannels.qcore import (
    MeasurementBasis,
    PureState,
    QOperator,
    apply,
    equal_up_to_global_phase,
    fidelity,
    ket,
    kron_ops,
    measure,
    permute,
    tensor,
)

from .helpers import random_unit, random_unitary

S = 1 / np.sqrt(2)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def random_state(seed, labels):
    rng = np.random.default_rng(seed)
    return PureState(tuple(labels), random_unit(rng, 2 ** len(labels)))


class TestPureState:
    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError, match="normalized"):
            PureState(("1",), [1, 1])

    def test_rejects_wrong_length(self):
        with pytest.raises(ValueError):
            PureState(("1", "2"), [1, 0])

    def test_rejects_duplicate_labels(self):
        with pytest.raises(ValueError, match="duplicate"):
            PureState(("A", "A"), [1, 0, 0, 0])

    def test_amplitudes_are_read_only(self):
        s = ket("01")
        with pytest.raises(ValueError):
            s.amplitudes[0] = 1

    def test_big_endian(self):
        assert ket("01", "12").amplitudes[1] == 1
        assert ket("100", "ABC").amplitudes[4] == 1


class TestTensor:
    def test_basis(self):
        out = tensor(ket("0", "1"), ket("0", "2"))
        assert out.labels == ("1", "2")
        assert np.allclose(out.amplitudes, [1, 0, 0, 0])

    def test_separable(self):
        plus = PureState(("1",), [S, S])
        out = tensor(plus, ket("0", "2"))
        assert np.allclose(out.amplitudes, [S, 0, S, 0])

    def test_epr_times_ghz(self):
        a = PureState(("1", "2"), [0, S, S, 0])
        out = tensor(a, ghz(3))
        # oracle: the four kets 01|000>, 01|111>, 10|000>, 10|111>
        expected = np.zeros(32)
        for idx in (0b01000, 0b01111, 0b10000, 0b10111):
            expected[idx] = 0.5
        assert np.allclose(out.amplitudes, expected)
        assert np.count_nonzero(np.abs(out.amplitudes) > 1e-15) == 4

    def test_duplicate_label_named(self):
        with pytest.raises(ValueError, match="'B'"):
            tensor(ket("0", "B"), ket("00", "BC"))


class TestApply:
    def test_bit_flip(self):
        assert np.allclose(apply(ket("00"), pauli("X"), ["1"]).amplitudes, ket("10").amplitudes)

    def test_target_order_matters(self):
        cnot = QOperator(np.eye(4)[[0, 1, 3, 2]])
        assert np.allclose(apply(ket("10"), cnot, ["1", "2"]).amplitudes, ket("11").amplitudes)
        assert np.allclose(apply(ket("10"), cnot, ["2", "1"]).amplitudes, ket("10").amplitudes)
        assert np.allclose(apply(ket("01"), cnot, ["2", "1"]).amplitudes, ket("11").amplitudes)

    def test_identity(self, rng):
        s = PureState(("A", "B", "C"), random_unit(rng, 8))
        out = apply(s, QOperator(np.eye(4)), ["C", "A"])
        assert np.allclose(out.amplitudes, s.amplitudes)

    def test_errors(self):
        with pytest.raises(ValueError, match="unknown"):
            apply(ket("00"), pauli("X"), ["Q"])
        with pytest.raises(ValueError, match="arity"):
            apply(ket("00"), pauli("X"), ["1", "2"])

    def test_against_kron_oracle(self, rng):
        s = PureState(("A", "B", "C"), random_unit(rng, 8))
        u = random_unitary(rng, 2)
        expected = np.kron(np.kron(np.eye(2), u), np.eye(2)) @ s.amplitudes
        assert np.allclose(apply(s, QOperator(u), ["B"]).amplitudes, expected)

    @settings(max_examples=50, deadline=None)
    @given(seeds, st.integers(min_value=1, max_value=5))
    def test_norm_preserved(self, seed, n):
        rng = np.random.default_rng(seed)
        labels = [str(i) for i in range(n)]
        s = PureState(tuple(labels), random_unit(rng, 2 ** n))
        k = int(rng.integers(1, n + 1))
        targets = list(rng.permutation(labels)[:k])
        out = apply(s, QOperator(random_unitary(rng, 2 ** k)), targets)
        assert abs(np.linalg.norm(out.amplitudes) - 1) <= qcore.TOL_NORM

    @settings(max_examples=30, deadline=None)
    @given(seeds)
    def test_associative_with_tensor(self, seed):
        rng = np.random.default_rng(seed)
        a = PureState(("1", "2"), random_unit(rng, 4))
        b = PureState(("A",), random_unit(rng, 2))
        u, w = QOperator(random_unitary(rng, 4)), QOperator(random_unitary(rng, 2))
        left = apply(tensor(a, b), kron_ops(u, w), ["1", "2", "A"])
        right = tensor(apply(a, u, ["1", "2"]), apply(b, w, ["A"]))
        assert np.max(np.abs(left.amplitudes - right.amplitudes)) <= 1e-12


class TestMeasure:
    def test_bell_eigenstate(self):
        basis = MeasurementBasis(("1", "2"), np.array([bell(k).amplitudes for k in ("Phi+", "Phi-", "Psi+", "Psi-")]),
                                 ("Phi+", "Phi-", "Psi+", "Psi-"))
        out = measure(bell("Phi+"), basis)
        assert out[0].probability == pytest.approx(1, abs=1e-12)
        assert all(o.probability < 1e-15 for o in out[1:])
        assert out[0].residual.labels == ()
        assert all(o.residual is None for o in out[1:])

    def test_ghz_protocol_probabilities(self):
        inp = PureState(("1", "2"), [0, 0.6, 0.8j, 0])
        out = measure(tensor(inp, ghz(3)), ghz_teleport_basis(0.0))
        assert len(out) == 8
        assert all(abs(o.probability - 1 / 8) < 1e-12 for o in out)
        assert all(o.residual.labels == ("B", "C") for o in out)

    def test_residual_label_order_preserved(self, rng):
        s = PureState(("C", "1", "A", "2", "B"), random_unit(rng, 32))
        out = measure(s, ghz_teleport_basis(0.3))
        assert out[0].residual.labels == ("C", "B")

    def test_partial_inner_product_oracle(self, rng):
        s = PureState(("X", "Y"), random_unit(rng, 4))
        basis = MeasurementBasis(("Y",), np.array([[S, S], [S, -S]]), ("+", "-"))
        out = measure(s, basis)
        m = s.amplitudes.reshape(2, 2)  # [x, y]
        plus = m @ np.array([S, S])
        assert out[0].probability == pytest.approx(np.vdot(plus, plus).real, abs=1e-14)
        assert equal_up_to_global_phase(out[0].residual, PureState.normalized(("X",), plus))

    def test_unknown_label(self):
        with pytest.raises(ValueError, match="unknown"):
            measure(ket("000", "ABC"), ghz_teleport_basis())

    def test_basis_must_be_orthonormal(self):
        with pytest.raises(ValueError, match="orthonormal"):
            MeasurementBasis(("1",), np.array([[1, 0], [S, S]]), ("a", "b"))

    @settings(max_examples=40, deadline=None)
    @given(seeds)
    def test_completeness(self, seed):
        rng = np.random.default_rng(seed)
        s = PureState(("1", "2", "A", "B", "C"), random_unit(rng, 32))
        total = sum(o.probability for o in measure(s, ghz_teleport_basis(rng.uniform(0, 6))))
        assert abs(total - 1) <= qcore.TOL_PROB

    @settings(max_examples=20, deadline=None)
    @given(seeds)
    def test_basis_vector_measured_with_certainty(self, seed):
        rng = np.random.default_rng(seed)
        basis = MeasurementBasis(("a", "b"), random_unitary(rng, 4).T, tuple("wxyz"))
        k = int(rng.integers(4))
        out = measure(basis.state(k), basis)
        assert out[k].probability == pytest.approx(1, abs=1e-12)


class TestFidelity:
    def test_self_and_orthogonal(self, rng):
        s = PureState(("1", "2"), random_unit(rng, 4))
        assert fidelity(s, s) == pytest.approx(1, abs=1e-14)
        assert fidelity(ket("0"), ket("1")) == 0

    def test_w_vs_w_tilde(self):
        w = np.zeros(8)
        w[[4, 2, 1]] = 1 / np.sqrt(3)
        wt = np.zeros(8)
        wt[4], wt[1], wt[2] = S, 0.5, 0.5
        assert fidelity(w_state(), w_tilde()) == pytest.approx(np.dot(w, wt) ** 2, abs=1e-15)

    def test_reorders_labels(self):
        assert fidelity(ket("01", "12"), ket("10", "21")) == pytest.approx(1)

    def test_label_mismatch(self):
        with pytest.raises(ValueError):
            fidelity(ket("0", "A"), ket("0", "B"))

    @settings(max_examples=40, deadline=None)
    @given(seeds, seeds)
    def test_symmetric_and_bounded(self, s1, s2):
        a, b = random_state(s1, "ABC"), random_state(s2, "ABC")
        f = fidelity(a, b)
        assert 0 <= f <= 1
        assert f == pytest.approx(fidelity(b, a), abs=1e-15)


class TestGlobalPhase:
    def test_cases(self):
        assert equal_up_to_global_phase(ket("01"), PureState(("1", "2"), np.exp(1j * np.pi / 3) * ket("01").amplitudes))
        assert not equal_up_to_global_phase(ket("01"), ket("10"))
        assert not equal_up_to_global_phase(bell("Phi+"), bell("Phi-"))

    @settings(max_examples=30, deadline=None)
    @given(seeds, st.floats(min_value=0, max_value=2 * np.pi))
    def test_fidelity_one_iff_phase_equal(self, seed, phi):
        s = random_state(seed, "12")
        t = PureState(s.labels, np.exp(1j * phi) * s.amplitudes)
        assert equal_up_to_global_phase(s, t, qcore.TOL_PHASE)
        assert fidelity(s, t) >= 1 - qcore.TOL_PHASE


class TestPermute:
    def test_swap(self):
        out = permute(ket("01", "12"), ["2", "1"])
        assert out.labels == ("2", "1")
        assert np.allclose(out.amplitudes, ket("10").amplitudes)

    def test_round_trip(self, rng):
        s = PureState(("A", "B", "C", "D"), random_unit(rng, 16))
        there = permute(s, ["C", "A", "D", "B"])
        back = permute(there, s.labels)
        assert np.array_equal(back.amplitudes, s.amplitudes)

    def test_w_tilde_index_oracle(self):
        src = w_tilde()
        out = permute(src, ["C", "A", "B"])
        expected = np.zeros(8, dtype=complex)
        for i in range(8):
            a, b, c = (i >> 2) & 1, (i >> 1) & 1, i & 1
            expected[(c << 2) | (a << 1) | b] = src.amplitudes[i]
        assert abs(np.vdot(expected, out.amplitudes)) ** 2 == pytest.approx(1, abs=1e-15)

    def test_not_a_permutation(self):
        with pytest.raises(ValueError):
            permute(ket("01", "12"), ["1", "1"])


class TestJson:
    def test_state_round_trip(self, rng):
        s = PureState(("1", "A"), random_unit(rng, 4))
        back = qcore.state_from_json(qcore.state_to_json(s))
        assert back.labels == s.labels
        assert np.array_equal(back.amplitudes, s.amplitudes)

    def test_operator_round_trip(self, rng):
        op = QOperator(random_unitary(rng, 4))
        back = qcore.operator_from_json(qcore.operator_to_json(op))
        assert np.array_equal(back.matrix, op.matrix)

    def test_wire_shape(self):
        data = qcore.state_to_json(PureState(("1",), [S, 1j * S]))
        assert data == {"labels": ["1"], "amplitudes": [[S, 0.0], [0.0, S]]}


class TestOperators:
    def test_rejects_non_unitary(self):
        with pytest.raises(ValueError, match="unitary"):
            QOperator(np.array([[1, 1], [0, 1]]))

    def test_product_detection(self, rng):
        u, w = random_unitary(rng, 2), random_unitary(rng, 2)
        assert qcore.is_product_operator(QOperator(np.kron(u, w)), [[0], [1]])
        cnot = QOperator(np.eye(4)[[0, 1, 3, 2]])
        assert not qcore.is_product_operator(cnot, [[0], [1]])
        assert qcore.is_product_operator(QOperator(np.kron(cnot.matrix, u)), [[0, 1], [2]])
