"""Named states, gates and measurement bases used by the protocols."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from .qcore import TOL_NORM, MeasurementBasis, PureState, QOperator, ket

SQRT1_2 = 1 / np.sqrt(2)
BELL_KINDS = ("Phi+", "Phi-", "Psi+", "Psi-")


@dataclass(frozen=True)
class GhzClassParams:
    """Amplitudes of ``a|000> + b|111>``."""

    a: complex
    b: complex

    def __post_init__(self):
        if abs(abs(self.a) ** 2 + abs(self.b) ** 2 - 1) > TOL_NORM:
            raise ValueError(f"|a|^2 + |b|^2 must be 1, got {abs(self.a) ** 2 + abs(self.b) ** 2!r}")


@dataclass(frozen=True)
class WClassParams:
    """Weights of ``sqrt(a)|001> + sqrt(b)|010> + sqrt(c)|100> + sqrt(d)|000>``."""

    a: float
    b: float
    c: float
    d: float = 0.0

    def __post_init__(self):
        if min(self.a, self.b, self.c) <= 0:
            raise ValueError("a, b, c must be strictly positive")
        if self.d < -TOL_NORM:
            raise ValueError("d must be non-negative")
        if abs(self.a + self.b + self.c + self.d - 1) > TOL_NORM:
            raise ValueError("a + b + c + d must equal 1")

    @classmethod
    def from_abc(cls, a: float, b: float, c: float) -> "WClassParams":
        return cls(a, b, c, max(0.0, 1.0 - a - b - c))


# -- gates -------------------------------------------------------------------

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
PAULI_KINDS = tuple(_PAULI)


def pauli(kind: str) -> QOperator:
    return QOperator(_PAULI[kind], kind)


def phase_gate(theta: float) -> QOperator:
    return QOperator(np.diag([1.0, np.exp(1j * theta)]), f"P({theta:.6g})")


def hadamard() -> QOperator:
    return QOperator(np.array([[1, 1], [1, -1]]) * SQRT1_2, "H")


def controlled(u: QOperator, control: int) -> QOperator:
    """Two-qubit controlled-``u``; ``control`` is 0 (first qubit) or 1 (second)."""
    p0, p1 = np.diag([1, 0]), np.diag([0, 1])
    eye = np.eye(2)
    if control == 0:
        mat = np.kron(p0, eye) + np.kron(p1, u.matrix)
    elif control == 1:
        mat = np.kron(eye, p0) + np.kron(u.matrix, p1)
    else:
        raise ValueError("control must be 0 or 1")
    return QOperator(mat, f"C{control + 1}{2 - control}-{u.name}")


def cnot() -> QOperator:
    """Control on the first qubit."""
    return QOperator(controlled(pauli("X"), 0).matrix, "CNOT")


def v_operator() -> QOperator:
    """|Psi+><00| + |11><01| + |Psi-><10| + |00><11|."""
    cols = [
        bell("Psi+").amplitudes,
        ket("11").amplitudes,
        bell("Psi-").amplitudes,
        ket("00").amplitudes,
    ]
    return QOperator(np.column_stack(cols), "V")


def v_network_factors(control_first_cnot: int = 0, control_ch: int = 1,
                      control_last_cnot: int = 1, x_qubit: int = 1) -> list[QOperator]:
    """Gates of C12 (C-H)21 X2 C21 in written order (leftmost acts last).

    The keyword arguments pick the control qubit of each conditional gate and
    the qubit flipped by X; the defaults are the subscripts read literally.
    """
    x = pauli("X")
    x_on = QOperator(np.kron(np.eye(2), x.matrix) if x_qubit == 1 else np.kron(x.matrix, np.eye(2)),
                     f"X{x_qubit + 1}")
    return [
        controlled(x, control_first_cnot),
        controlled(hadamard(), control_ch),
        x_on,
        controlled(x, control_last_cnot),
    ]


def v_network(**convention) -> QOperator:
    mat = np.eye(4, dtype=complex)
    for gate in v_network_factors(**convention):
        mat = mat @ gate.matrix
    return QOperator(mat, "V_net")


# -- states ------------------------------------------------------------------

def ghz(n: int = 3, labels: Sequence[str] | None = None) -> PureState:
    if n not in (3, 4):
        raise ValueError(f"GHZ channel defined for 3 or 4 qubits, not {n}")
    labels = tuple(labels) if labels is not None else tuple("ABCD"[:n])
    amps = np.zeros(2 ** n, dtype=complex)
    amps[0] = amps[-1] = SQRT1_2
    return PureState(labels, amps)


def ghz_class(params: GhzClassParams, labels: Sequence[str] = "ABC") -> PureState:
    amps = np.zeros(8, dtype=complex)
    amps[0], amps[7] = params.a, params.b
    return PureState(tuple(labels), amps)


def f_ghz(labels: Sequence[str] = "ABC") -> PureState:
    return ghz_class(GhzClassParams(np.sqrt(2 / 3), np.sqrt(1 / 3)), labels)


def w_state(labels: Sequence[str] = "ABC") -> PureState:
    amps = np.zeros(8, dtype=complex)
    amps[[1, 2, 4]] = 1 / np.sqrt(3)
    return PureState(tuple(labels), amps)


def w_tilde(labels: Sequence[str] = "ABC") -> PureState:
    """(|100> + |0>|Psi+>)/sqrt(2), Psi+ on the last two qubits."""
    amps = np.zeros(8, dtype=complex)
    amps[4] = SQRT1_2
    amps[1] = amps[2] = 0.5
    return PureState(tuple(labels), amps)


def w_class(params: WClassParams, labels: Sequence[str] = "ABC") -> PureState:
    amps = np.zeros(8, dtype=complex)
    amps[1] = np.sqrt(params.a)
    amps[2] = np.sqrt(params.b)
    amps[4] = np.sqrt(params.c)
    amps[0] = np.sqrt(max(params.d, 0.0))
    return PureState.normalized(tuple(labels), amps)


def bell(kind: str, labels: Sequence[str] = "12") -> PureState:
    s = -1.0 if kind.endswith("-") else 1.0
    if kind.startswith("Phi"):
        amps = [SQRT1_2, 0, 0, s * SQRT1_2]
    elif kind.startswith("Psi"):
        amps = [0, SQRT1_2, s * SQRT1_2, 0]
    else:
        raise ValueError(f"unknown Bell state {kind!r}")
    return PureState(tuple(labels), amps)


def pi_state(sign: int, theta: float = 0.0, label: str = "1") -> PureState:
    """(|0> + sign e^{i theta}|1>)/sqrt(2)."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return PureState((label,), [SQRT1_2, sign * np.exp(1j * theta) * SQRT1_2])


def _sign_char(s: int) -> str:
    return "+" if s > 0 else "-"


def ghz_teleport_basis(theta: float = 0.0, labels: Sequence[str] = ("1", "2", "A")) -> MeasurementBasis:
    """pi(+/-) on the first label times a Bell state on the other two.

    Outcome names read like ``"pi+Phi-"``.
    """
    vecs, names = [], []
    for s in (1, -1):
        pi = pi_state(s, theta).amplitudes
        for kind in BELL_KINDS:
            vecs.append(np.kron(pi, bell(kind).amplitudes))
            names.append(f"pi{_sign_char(s)}{kind}")
    return MeasurementBasis(tuple(labels), np.array(vecs), tuple(names), (theta,))


def ghz4_teleport_basis(theta1: float = 0.0, theta2: float = 0.0,
                        labels: Sequence[str] = ("1", "2", "3", "A")) -> MeasurementBasis:
    vecs, names = [], []
    for s1, s2 in product((1, -1), repeat=2):
        pis = np.kron(pi_state(s1, theta1).amplitudes, pi_state(s2, theta2).amplitudes)
        for kind in BELL_KINDS:
            vecs.append(np.kron(pis, bell(kind).amplitudes))
            names.append(f"pi{_sign_char(s1)}pi{_sign_char(s2)}{kind}")
    return MeasurementBasis(tuple(labels), np.array(vecs), tuple(names), (theta1, theta2))


def phi_prime_state(x: str, sign: int, labels: Sequence[str] = "ABC") -> PureState:
    """(|0>|x> + sign |1>|not x>)/sqrt(2) for a two-bit string ``x``."""
    xbar = "".join("1" if c == "0" else "0" for c in x)
    amps = np.zeros(8, dtype=complex)
    amps[int("0" + x, 2)] = SQRT1_2
    amps[int("1" + xbar, 2)] = sign * SQRT1_2
    return PureState(tuple(labels), amps)


PHI_PRIME_INDEX = tuple((x, s) for x in ("00", "01", "10", "11") for s in (1, -1))


def phi_prime_basis(labels: Sequence[str] = "ABC") -> MeasurementBasis:
    """Outcome ``k`` is ``PHI_PRIME_INDEX[k]``, i.e. index = 2*int(x, 2) + (sign == -1)."""
    vecs = [phi_prime_state(x, s).amplitudes for x, s in PHI_PRIME_INDEX]
    names = [f"{x}{_sign_char(s)}" for x, s in PHI_PRIME_INDEX]
    return MeasurementBasis(tuple(labels), np.array(vecs), tuple(names))
