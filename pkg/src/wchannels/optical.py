"""Three weak optical modes pumped through a coherently driven atomic medium.

Each mode is truncated to the {0, 1} photon ladder, so a state is an
8-component vector indexed by (n1, n2, n3) with n1 most significant.
hbar = 1 throughout.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .qcore import TOL_ZERO

_LOWER = np.array([[0, 1], [0, 0]], dtype=complex)
_EYE = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class OpticalParams:
    """Couplings g, pump amplitude, coherence factor q (<S> = q * pump) and time t."""

    g: tuple[complex, complex, complex]
    pump: complex = 1.0
    q: float = 1.0
    t: float = 0.0

    def __post_init__(self):
        g = tuple(complex(x) for x in self.g)
        if len(g) != 3:
            raise ValueError("three couplings required")
        if all(abs(x) == 0 for x in g):
            raise ValueError("couplings cannot all vanish")
        if self.t < 0:
            raise ValueError("interaction time must be non-negative")
        object.__setattr__(self, "g", g)

    @property
    def kappa(self) -> complex:
        return self.q * self.pump

    def at(self, t: float) -> "OpticalParams":
        return OpticalParams(self.g, self.pump, self.q, t)


@dataclass(frozen=True)
class FockState3:
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape != (8,):
            raise ValueError("three truncated modes need 8 amplitudes")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def single_photon_sector(self) -> np.ndarray:
        """Amplitudes of |100>, |010>, |001> in that order."""
        return self.amplitudes[[4, 2, 1]]


def annihilation(mode: int) -> np.ndarray:
    ops = [_EYE, _EYE, _EYE]
    ops[mode] = _LOWER
    return np.kron(np.kron(ops[0], ops[1]), ops[2])


def w_vector(g) -> np.ndarray:
    """g1|100> + g2|010> + g3|001>, unnormalized."""
    vec = np.zeros(8, dtype=complex)
    vec[[4, 2, 1]] = np.asarray(g, dtype=complex)
    return vec


def effective_hamiltonian(params: OpticalParams) -> np.ndarray:
    """q (pump* B + pump B^dag) with B^dag = sum_k g_k b_k^dag.

    With complex g this puts g_k (not its conjugate) on the created photon,
    matching the single-photon amplitudes of |w>.
    """
    b = sum(np.conj(gk) * annihilation(k) for k, gk in enumerate(params.g))
    return params.q * (np.conj(params.pump) * b + params.pump * b.conj().T)


def vacuum() -> np.ndarray:
    vec = np.zeros(8, dtype=complex)
    vec[0] = 1.0
    return vec


def first_order_state(params: OpticalParams) -> FockState3:
    """|000> - i kappa t |w>, left unnormalized."""
    return FockState3(vacuum() - 1j * params.kappa * params.t * w_vector(params.g))


def exact_evolution(params: OpticalParams) -> FockState3:
    h = effective_hamiltonian(params)
    evals, evecs = np.linalg.eigh(h)
    psi = evecs @ (np.exp(-1j * evals * params.t) * (evecs.conj().T @ vacuum()))
    return FockState3(psi)


def w_fidelity(state: FockState3, g) -> float | None:
    """Fidelity of the normalized single-photon part with normalized |w>; None if that part vanishes."""
    sector = state.single_photon_sector()
    norm = np.linalg.norm(sector)
    if norm <= TOL_ZERO:
        return None
    target = np.asarray(g, dtype=complex)
    target = target / np.linalg.norm(target)
    return float(min(1.0, abs(np.vdot(target, sector / norm)) ** 2))


def overlap_deficit(params: OpticalParams, normalized: bool = False) -> float:
    """|1 - |<exact|first order>||, optionally after normalizing the first-order state."""
    fo = first_order_state(params).amplitudes
    if normalized:
        fo = fo / np.linalg.norm(fo)
    return float(abs(1.0 - abs(np.vdot(exact_evolution(params).amplitudes, fo))))


def first_order_error(params: OpticalParams) -> float:
    """||exact - first order||."""
    return float(np.linalg.norm(exact_evolution(params).amplitudes - first_order_state(params).amplitudes))


def convergence_ratio(params: OpticalParams, t: float, metric: str = "deficit") -> float:
    """metric(t) / metric(t / 2); about 4 for a second-order error."""
    funcs = {
        "deficit": overlap_deficit,
        "normalized_deficit": lambda p: overlap_deficit(p, normalized=True),
        "distance": first_order_error,
    }
    f = funcs[metric]
    return f(params.at(t)) / f(params.at(t / 2))


def report(params: OpticalParams) -> dict:
    exact = exact_evolution(params)
    fo = first_order_state(params)
    return {
        "g": [[x.real, x.imag] for x in params.g],
        "kappa": [complex(params.kappa).real, complex(params.kappa).imag],
        "t": params.t,
        "norm_first_order": fo.norm,
        "overlap_exact_first": float(abs(np.vdot(exact.amplitudes, fo.amplitudes / fo.norm))),
        "w_fidelity": w_fidelity(exact, params.g),
    }
