"""Pure-state linear algebra on labeled qubit registers.

Amplitude indices are big-endian: the first label in a register is the most
significant bit, so ``|01>`` on labels ``("1", "2")`` sits at index 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

TOL_NORM = 1e-12
TOL_UNITARY = 1e-12
TOL_PROB = 1e-10
TOL_PHASE = 1e-9
TOL_ZERO = 1e-14


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


def _labels(labels: Iterable[str]) -> tuple[str, ...]:
    out = tuple(str(x) for x in labels)
    seen = set()
    for lab in out:
        if lab in seen:
            raise ValueError(f"duplicate qubit label {lab!r}")
        seen.add(lab)
    return out


@dataclass(frozen=True)
class PureState:
    labels: tuple[str, ...]
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        labels = _labels(self.labels)
        amps = _freeze(self.amplitudes).reshape(-1)
        if amps.shape[0] != 2 ** len(labels):
            raise ValueError(
                f"{len(labels)} labels need {2 ** len(labels)} amplitudes, got {amps.shape[0]}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > TOL_NORM:
            raise ValueError(f"state is not normalized (norm={norm!r})")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, labels: Iterable[str], amplitudes) -> "PureState":
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm <= TOL_ZERO:
            raise ValueError("cannot normalize the zero vector")
        return cls(tuple(labels), amps / norm)

    @property
    def n_qubits(self) -> int:
        return len(self.labels)

    def relabel(self, new_labels: Sequence[str]) -> "PureState":
        """Same amplitudes, new names (position by position)."""
        if len(new_labels) != self.n_qubits:
            raise ValueError("relabel needs one new label per qubit")
        return PureState(tuple(new_labels), self.amplitudes)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.n_qubits) if self.n_qubits else self.amplitudes

    def __repr__(self):
        nz = [
            f"{amp:.4g}|{i:0{self.n_qubits}b}>"
            for i, amp in enumerate(self.amplitudes)
            if abs(amp) > 1e-12
        ]
        return f"PureState({''.join(self.labels)}: {' + '.join(nz)})"


@dataclass(frozen=True)
class QOperator:
    matrix: np.ndarray = field(repr=False)
    name: str = ""

    def __post_init__(self):
        m = _freeze(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("operator matrix must be square")
        k = int(round(np.log2(m.shape[0])))
        if 2 ** k != m.shape[0]:
            raise ValueError(f"dimension {m.shape[0]} is not a power of two")
        dev = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))
        if dev > TOL_UNITARY:
            raise ValueError(f"operator {self.name or ''} is not unitary (max deviation {dev:.3g})")
        object.__setattr__(self, "matrix", m)

    @property
    def arity(self) -> int:
        return int(round(np.log2(self.matrix.shape[0])))

    @property
    def dagger(self) -> "QOperator":
        return QOperator(self.matrix.conj().T, f"{self.name}^dag" if self.name else "")

    def __matmul__(self, other: "QOperator") -> "QOperator":
        if not isinstance(other, QOperator):
            return NotImplemented
        name = f"{self.name}.{other.name}" if self.name and other.name else ""
        return QOperator(self.matrix @ other.matrix, name)


def kron_ops(*ops: QOperator) -> QOperator:
    mat = np.eye(1, dtype=complex)
    for op in ops:
        mat = np.kron(mat, op.matrix)
    return QOperator(mat, "x".join(op.name or "?" for op in ops))


@dataclass(frozen=True)
class MeasurementBasis:
    """Complete orthonormal basis on ``subset``; ``vectors[k]`` is outcome ``k``.

    ``phases`` records the free angles the basis was built from, which the
    recovery search uses to build phase corrections.
    """

    subset: tuple[str, ...]
    vectors: np.ndarray = field(repr=False)
    outcome_names: tuple[str, ...]
    phases: tuple[float, ...] = ()

    def __post_init__(self):
        subset = _labels(self.subset)
        vecs = _freeze(self.vectors)
        dim = 2 ** len(subset)
        if vecs.shape != (dim, dim):
            raise ValueError(f"basis on {len(subset)} qubits needs {dim} vectors of length {dim}")
        if len(self.outcome_names) != dim:
            raise ValueError("one outcome name per basis vector required")
        dev = np.max(np.abs(vecs.conj() @ vecs.T - np.eye(dim)))
        if dev > TOL_UNITARY:
            raise ValueError(f"basis vectors are not orthonormal (max deviation {dev:.3g})")
        object.__setattr__(self, "subset", subset)
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "outcome_names", tuple(self.outcome_names))
        object.__setattr__(self, "phases", tuple(float(p) for p in self.phases))

    def __len__(self):
        return len(self.outcome_names)

    def state(self, name_or_index) -> PureState:
        idx = name_or_index if isinstance(name_or_index, int) else self.outcome_names.index(name_or_index)
        return PureState(self.subset, self.vectors[idx])


@dataclass(frozen=True)
class MeasurementOutcome:
    outcome_index: int
    outcome_name: str
    probability: float
    residual: PureState | None


def ket(bits: str, labels: Iterable[str] | None = None) -> PureState:
    """Computational basis state, e.g. ``ket("01", "12")``."""
    labels = tuple(labels) if labels is not None else tuple(str(i + 1) for i in range(len(bits)))
    amps = np.zeros(2 ** len(bits), dtype=complex)
    amps[int(bits, 2) if bits else 0] = 1.0
    return PureState(labels, amps)


def tensor(s1: PureState, s2: PureState) -> PureState:
    clash = set(s1.labels) & set(s2.labels)
    if clash:
        raise ValueError(f"duplicate label {sorted(clash)[0]!r} in tensor product")
    return PureState(s1.labels + s2.labels, np.kron(s1.amplitudes, s2.amplitudes))


def _positions(state_labels: Sequence[str], targets: Sequence[str]) -> list[int]:
    pos = []
    for t in targets:
        if t not in state_labels:
            raise ValueError(f"unknown qubit label {t!r}")
        pos.append(state_labels.index(t))
    if len(set(pos)) != len(pos):
        raise ValueError("target labels must be distinct")
    return pos


def _apply_matrix(amps: np.ndarray, n: int, matrix: np.ndarray, pos: list[int]) -> np.ndarray:
    k = len(pos)
    psi = np.moveaxis(amps.reshape((2,) * n), pos, list(range(k)))
    shape = psi.shape
    psi = (matrix @ psi.reshape(2 ** k, -1)).reshape(shape)
    return np.moveaxis(psi, list(range(k)), pos).reshape(-1)


def apply(state: PureState, op: QOperator, targets: Iterable[str]) -> PureState:
    """Act with ``op`` on ``targets`` (in the listed order), identity elsewhere."""
    targets = tuple(targets)
    if op.arity != len(targets):
        raise ValueError(f"operator of arity {op.arity} applied to {len(targets)} targets")
    pos = _positions(state.labels, targets)
    out = _apply_matrix(state.amplitudes, state.n_qubits, op.matrix, pos)
    # unitary action: renormalize away the last-ulp drift
    return PureState(state.labels, out / np.linalg.norm(out))


def embed(op: QOperator, targets: Sequence[str], labels: Sequence[str]) -> QOperator:
    """Matrix of ``op`` on ``targets`` extended by identity to the register ``labels``."""
    labels = tuple(labels)
    pos = _positions(labels, tuple(targets))
    n = len(labels)
    cols = [_apply_matrix(col, n, op.matrix, pos) for col in np.eye(2 ** n, dtype=complex)]
    return QOperator(np.array(cols).T, op.name)


def permute(state: PureState, new_order: Iterable[str]) -> PureState:
    new_order = tuple(new_order)
    if sorted(new_order) != sorted(state.labels) or len(new_order) != state.n_qubits:
        raise ValueError(f"{new_order} is not a permutation of {state.labels}")
    if state.n_qubits == 0:
        return state
    pos = [state.labels.index(lab) for lab in new_order]
    amps = np.transpose(state.tensor(), pos).reshape(-1)
    return PureState(new_order, amps)


def measure(state: PureState, basis: MeasurementBasis) -> list[MeasurementOutcome]:
    pos = _positions(state.labels, basis.subset)
    m = len(pos)
    rest = tuple(lab for lab in state.labels if lab not in basis.subset)
    psi = np.moveaxis(state.tensor(), pos, list(range(m))).reshape(2 ** m, -1)
    projected = basis.vectors.conj() @ psi
    outcomes = []
    for k, (name, amp) in enumerate(zip(basis.outcome_names, projected)):
        prob = float(np.vdot(amp, amp).real)
        residual = None
        if prob > TOL_ZERO:
            residual = PureState(rest, amp / np.sqrt(prob)) if rest else PureState((), [1.0])
        outcomes.append(MeasurementOutcome(k, name, prob, residual))
    return outcomes


def _aligned(s1: PureState, s2: PureState) -> tuple[np.ndarray, np.ndarray]:
    if set(s1.labels) != set(s2.labels) or s1.n_qubits != s2.n_qubits:
        raise ValueError(f"label sets differ: {s1.labels} vs {s2.labels}")
    return s1.amplitudes, permute(s2, s1.labels).amplitudes


def overlap(s1: PureState, s2: PureState) -> complex:
    a, b = _aligned(s1, s2)
    return complex(np.vdot(a, b))


def fidelity(s1: PureState, s2: PureState) -> float:
    return min(1.0, abs(overlap(s1, s2)) ** 2)


def equal_up_to_global_phase(s1: PureState, s2: PureState, tol: float = TOL_PHASE) -> bool:
    return 1.0 - abs(overlap(s1, s2)) <= tol


def operators_equal_up_to_phase(m1: np.ndarray, m2: np.ndarray, tol: float = TOL_UNITARY) -> bool:
    m1, m2 = np.asarray(m1), np.asarray(m2)
    idx = np.unravel_index(np.argmax(np.abs(m2)), m2.shape)
    if abs(m1[idx]) <= TOL_ZERO:
        return False
    phase = m1[idx] / m2[idx]
    if abs(abs(phase) - 1.0) > tol:
        return False
    return bool(np.max(np.abs(m1 - phase * m2)) <= tol)


def is_product_operator(op: QOperator, parties: Sequence[Sequence[int]], tol: float = 1e-9) -> bool:
    """True when ``op`` factorizes across the given groups of qubit positions."""
    k = op.arity
    if len(parties) <= 1:
        return True
    t = op.matrix.reshape((2,) * (2 * k))
    for party in parties:
        others = [q for q in range(k) if q not in party]
        if not others:
            continue
        order = list(party) + [k + q for q in party] + others + [k + q for q in others]
        m = np.transpose(t, order).reshape(4 ** len(party), -1)
        sv = np.linalg.svd(m, compute_uv=False)
        if np.sum(sv > tol * sv[0]) > 1:
            return False
    return True


# JSON wire format: ordered labels plus [re, im] pairs.

def complex_to_pairs(values) -> list:
    arr = np.asarray(values, dtype=complex)
    if arr.ndim == 0:
        return [float(arr.real), float(arr.imag)]
    return [complex_to_pairs(v) for v in arr]


def pairs_to_complex(pairs) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float)
    if arr.shape[-1] != 2:
        raise ValueError("complex values must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def state_to_json(state: PureState) -> dict:
    return {"labels": list(state.labels), "amplitudes": complex_to_pairs(state.amplitudes)}


def state_from_json(data: dict, normalize: bool = False) -> PureState:
    amps = pairs_to_complex(data["amplitudes"])
    if normalize:
        return PureState.normalized(data["labels"], amps)
    return PureState(tuple(data["labels"]), amps)


def operator_to_json(op: QOperator) -> dict:
    return {"arity": op.arity, "matrix": complex_to_pairs(op.matrix)}


def operator_from_json(data: dict) -> QOperator:
    op = QOperator(pairs_to_complex(data["matrix"]), data.get("name", ""))
    if "arity" in data and data["arity"] != op.arity:
        raise ValueError("arity field disagrees with matrix size")
    return op
