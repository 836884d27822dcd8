"""Closed-form outcome probabilities checked against simulation, and
convertibility of GHZ-class states under operators on two of their qubits."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import unitary_group

from . import catalog
from .catalog import GhzClassParams, WClassParams
from .protocols import (
    ChannelSpec,
    channel_from_state,
    check_channel_suitability,
    epr_family_probes,
    outcome_probabilities,
)
from .qcore import TOL_NORM, TOL_PHASE, PureState, QOperator, apply, fidelity


@dataclass(frozen=True)
class GeneralTwoQubitInput:
    """gamma|00> + alpha|01> + beta|10> + delta|11> on qubits 1, 2."""

    gamma: complex
    alpha: complex
    beta: complex
    delta: complex

    def __post_init__(self):
        norm = sum(abs(x) ** 2 for x in (self.gamma, self.alpha, self.beta, self.delta))
        if abs(norm - 1) > TOL_NORM:
            raise ValueError(f"input amplitudes are not normalized (norm^2={norm!r})")

    @classmethod
    def from_state(cls, state: PureState) -> "GeneralTwoQubitInput":
        return cls(*state.amplitudes)

    def to_state(self, labels: Sequence[str] = ("1", "2")) -> PureState:
        return PureState(tuple(labels), [self.gamma, self.alpha, self.beta, self.delta])


@dataclass(frozen=True)
class ProbabilityComparison:
    outcome_name: str
    formula_value: float
    simulated_value: float

    @property
    def abs_diff(self) -> float:
        return abs(self.formula_value - self.simulated_value)


def _bell_type(name: str) -> str:
    return "Phi" if "Phi" in name else "Psi"


def _pi_sign(name: str) -> int:
    return 1 if name.startswith("pi+") else -1


def prob_formula_wclass(inp: GeneralTwoQubitInput, a: float, theta: float) -> dict[str, float]:
    """The eight W-class outcome probabilities, no cross terms.

    Phi outcomes weight |gamma +/- e^{i theta} beta|^2 by (1 - a) and
    |alpha +/- e^{i theta} delta|^2 by a; Psi outcomes swap the weights.
    """
    out = {}
    for name in catalog.ghz_teleport_basis(0.0).outcome_names:
        s = _pi_sign(name)
        e = np.exp(1j * theta)
        low = abs(inp.gamma + s * e * inp.beta) ** 2
        high = abs(inp.alpha + s * e * inp.delta) ** 2
        if _bell_type(name) == "Phi":
            out[name] = float((low * (1 - a) + a * high) / 4)
        else:
            out[name] = float((low * a + (1 - a) * high) / 4)
    return out


# position of each ket slot of sqrt(a)|001> + ... on (A, B, C): the slot
# carrying the sqrt(a) excitation goes to Alice's qubit A.
DEFAULT_WCLASS_ASSIGNMENT = (2, 0, 1)


def assign_wclass(params: WClassParams, assignment: Sequence[int] = DEFAULT_WCLASS_ASSIGNMENT) -> PureState:
    """Place ket slot ``assignment[i]`` of the W-class standard form on qubit ``"ABC"[i]``."""
    if sorted(assignment) != [0, 1, 2]:
        raise ValueError(f"{assignment} is not a permutation of (0, 1, 2)")
    amps = catalog.w_class(params).tensor().transpose(tuple(assignment)).reshape(-1)
    return PureState(("A", "B", "C"), amps)


def compare_wclass_probabilities(
    inp: GeneralTwoQubitInput,
    params: WClassParams,
    theta: float,
    assignment: Sequence[int] = DEFAULT_WCLASS_ASSIGNMENT,
) -> list[ProbabilityComparison]:
    """Simulated probabilities in the basis with phase ``theta`` beside the formula.

    The formula is evaluated at ``-theta``: projecting on <pi| brings the
    conjugate phase e^{-i theta} onto the |1> amplitude.
    """
    channel = channel_from_state(assign_wclass(params, assignment))
    simulated = outcome_probabilities(inp.to_state(), channel, catalog.ghz_teleport_basis(theta))
    formula = prob_formula_wclass(inp, params.a, -theta)
    return [ProbabilityComparison(n, formula[n], simulated[n]) for n in simulated]


def max_abs_diff(rows: Sequence[ProbabilityComparison]) -> float:
    return max(r.abs_diff for r in rows)


# Sign of the correction term per Bell type: Phi outcomes get 1/8[1 - D],
# Psi outcomes 1/8[1 + D], D = (|a|^2 - |b|^2)(|alpha|^2 - |beta|^2).
# Derived by calibrate_ghz_class_signs(); kept in sync with tests/golden.
GHZ_CLASS_SIGNS = {"Phi": -1, "Psi": 1}


def prob_formula_ghzclass(alpha: complex, beta: complex, a: complex, b: complex,
                          signs: dict[str, int] | None = None) -> dict[str, float]:
    signs = GHZ_CLASS_SIGNS if signs is None else signs
    d = (abs(a) ** 2 - abs(b) ** 2) * (abs(alpha) ** 2 - abs(beta) ** 2)
    names = catalog.ghz_teleport_basis(0.0).outcome_names
    return {n: float((1 + signs[_bell_type(n)] * d) / 8) for n in names}


def simulate_ghzclass(alpha: complex, beta: complex, a: complex, b: complex, theta: float = 0.0) -> dict[str, float]:
    inp = PureState.normalized(("1", "2"), [0, alpha, beta, 0])
    channel = channel_from_state(catalog.ghz_class(GhzClassParams(a, b)))
    return outcome_probabilities(inp, channel, catalog.ghz_teleport_basis(theta))


def calibrate_ghz_class_signs() -> dict[str, int]:
    """Read the sign map off one non-degenerate simulation (|a| > |b|, |alpha| > |beta|)."""
    a, b = np.sqrt(0.8), np.sqrt(0.2)
    alpha, beta = np.sqrt(0.9), np.sqrt(0.1)
    sim = simulate_ghzclass(alpha, beta, a, b)
    signs = {}
    for kind in ("Phi", "Psi"):
        vals = [v for n, v in sim.items() if _bell_type(n) == kind]
        signs[kind] = 1 if np.mean(vals) > 1 / 8 else -1
    return signs


@dataclass(frozen=True)
class ConvertibilityVerdict:
    convertible: bool
    transform: QOperator | None
    reason: str

    @property
    def verdict(self) -> str:
        return "convertible" if self.convertible else "not convertible by any 1 x T"


def convertible_two_particle(src: GhzClassParams, dst: GhzClassParams) -> ConvertibilityVerdict:
    """Can some T on qubits B, C take a|000>+b|111> to a'|000>+b'|111>?

    T leaves qubit A's reduced state alone, so |a| = |a'| is necessary; when it
    holds a diagonal phase gate on (B, C) does the job.
    """
    if abs(abs(src.a) - abs(dst.a)) > TOL_PHASE:
        return ConvertibilityVerdict(
            False, None,
            f"|a| = {abs(src.a):.12g} differs from |a'| = {abs(dst.a):.12g}; 1 x T preserves the weights of qubit A",
        )

    def phase(x, y):
        return 1.0 if abs(x) < TOL_PHASE else y / x / abs(y / x)

    t = QOperator(np.diag([phase(src.a, dst.a), 1, 1, phase(src.b, dst.b)]), "T_phase")
    return ConvertibilityVerdict(True, t, "equal weights; diagonal phase gate on (B, C)")


def conversion_fidelity_bound(src: GhzClassParams, dst: GhzClassParams) -> float:
    """Largest |<dst|(1 x T)|src>|^2 over all T on (B, C): fidelity of qubit A's marginals."""
    return float((abs(src.a) * abs(dst.a) + abs(src.b) * abs(dst.b)) ** 2)


def sampled_conversion_search(src: GhzClassParams, dst: GhzClassParams,
                              samples: int = 10_000, seed: int = 0) -> float:
    """Best fidelity between (1 x T)|src> and |dst> over Haar-random T on (B, C)."""
    s = catalog.ghz_class(src).amplitudes.reshape(2, 4)
    d = catalog.ghz_class(dst).amplitudes.reshape(2, 4)
    ts = unitary_group.rvs(4, size=samples, random_state=np.random.default_rng(seed)).reshape(samples, 4, 4)
    moved = np.einsum("cij,aj->cai", ts, s)
    amps = np.einsum("ai,cai->c", d.conj(), moved)
    return float(np.max(np.abs(amps) ** 2))


def verify_conversion(src: GhzClassParams, dst: GhzClassParams, t: QOperator) -> float:
    return fidelity(apply(catalog.ghz_class(src), t, ("B", "C")), catalog.ghz_class(dst))


def w_channel_family() -> list[ChannelSpec]:
    """(1 x V)|phi'_x> for the eight phi-prime vectors, in phi-prime order."""
    v = catalog.v_operator()
    out = []
    for x, s in catalog.PHI_PRIME_INDEX:
        state = apply(catalog.phi_prime_state(x, s), v, ("B", "C"))
        out.append(channel_from_state(state, f"w-family:{x}{'+' if s > 0 else '-'}"))
    return out


def w_family_suitability(theta: float = 0.0):
    basis = catalog.ghz_teleport_basis(theta)
    return [check_channel_suitability(ch, basis, epr_family_probes(), ("v_times_pauli",))
            for ch in w_channel_family()]


# -- sweep tables ---------------------------------------------------------------

SWEEP_COLUMNS = ("theta", "outcome", "formula", "simulated", "diff")


def wclass_sweep(inp: GeneralTwoQubitInput, params: WClassParams, thetas: Sequence[float],
                 assignment: Sequence[int] = DEFAULT_WCLASS_ASSIGNMENT) -> list[dict]:
    rows = []
    for theta in thetas:
        for r in compare_wclass_probabilities(inp, params, theta, assignment):
            rows.append({"theta": float(theta), "outcome": r.outcome_name, "formula": r.formula_value,
                         "simulated": r.simulated_value, "diff": r.abs_diff})
    return rows


def ghzclass_sweep(alpha: complex, beta: complex, params: GhzClassParams, thetas: Sequence[float]) -> list[dict]:
    rows = []
    formula = prob_formula_ghzclass(alpha, beta, params.a, params.b)
    for theta in thetas:
        sim = simulate_ghzclass(alpha, beta, params.a, params.b, theta)
        for name, val in sim.items():
            rows.append({"theta": float(theta), "outcome": name, "formula": formula[name],
                         "simulated": val, "diff": abs(formula[name] - val)})
    return rows


def rows_to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()
