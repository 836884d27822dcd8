"""The acceptance checks behind ``wchannels verify``.

Each check yields a status of ``pass``, ``fail`` or ``finding``.  A finding
records a place where a printed formula and the simulator part ways; it is
reported but never fails the run.
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import analysis, catalog, optical, protocols
from .catalog import GhzClassParams, WClassParams
from .qcore import PureState, apply, equal_up_to_global_phase, operators_equal_up_to_phase


@dataclass
class Check:
    name: str
    status: str
    metric: float | None
    tolerance: float | None
    detail: str = ""


@dataclass
class SuiteResult:
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def to_json(self) -> dict:
        return {
            "checks": [asdict(c) for c in self.checks],
            "passed": self.passed,
            "n_fail": sum(c.status == "fail" for c in self.checks),
            "n_finding": sum(c.status == "finding" for c in self.checks),
        }


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def random_epr_inputs(rng: np.random.Generator, n: int) -> list[PureState]:
    amps = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
    return [PureState.normalized(("1", "2"), [0, a, b, 0]) for a, b in amps]


def _complex_unit(rng, n):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


THETAS = (0.0, 0.7, np.pi / 2)


def check_ghz3(rng, tol) -> list[Check]:
    start = time.perf_counter()
    inputs = random_epr_inputs(rng, 200)
    worst_p = worst_f = 0.0
    for theta in THETAS:
        basis, rec, ch = catalog.ghz_teleport_basis(theta), protocols.ghz3_recovery(theta), protocols.ghz3_channel()
        for inp in inputs:
            rep = protocols.teleport(inp, ch, basis, rec)
            worst_p = max(worst_p, rep.max_uniform_deviation)
            worst_f = max(worst_f, 1 - rep.min_fidelity)
    elapsed = time.perf_counter() - start
    return [
        Check("1.ghz3.uniform_probability", _status(worst_p <= tol), worst_p, tol),
        Check("1.ghz3.fidelity_deficit", _status(worst_f <= tol), worst_f, tol),
        Check("1.ghz3.runtime_under_2s", _status(elapsed < 2.0), None, 2.0),
    ]


def check_w_tilde(rng, tol) -> list[Check]:
    inputs = random_epr_inputs(rng, 200)
    ch = protocols.transform_channel(protocols.ghz3_channel(), catalog.v_operator(), ("B", "C"))
    worst_f, nonlocal_seen, local_failures, sampled_best = 0.0, False, [], 0.0
    for theta in THETAS:
        basis = catalog.ghz_teleport_basis(theta)
        rec = protocols.find_recovery(ch, basis, "v_times_pauli")
        if not rec.complete:
            return [Check("2.w_tilde.v_times_pauli_complete", "fail", None, None, f"missing {rec.missing}")]
        nonlocal_seen |= not all(rec.locality.values())
        for inp in inputs:
            worst_f = max(worst_f, 1 - protocols.teleport(inp, ch, basis, rec).min_fidelity)
        pauli = protocols.find_recovery(ch, basis, "pauli_local")
        local_failures.extend(pauli.missing)
        sampled = protocols.sample_local_unitaries(ch, basis, 10_000, int(rng.integers(2**31)))
        if pauli.missing:
            sampled_best = max(sampled_best, max(sampled[n] for n in pauli.missing))
    return [
        Check("2.w_tilde.fidelity_deficit", _status(worst_f <= tol), worst_f, tol),
        Check("2.w_tilde.nonlocal_recovery", _status(nonlocal_seen), float(nonlocal_seen), None),
        Check("2.w_tilde.pauli_local_failures", _status(len(local_failures) >= 1), float(len(local_failures)), 1.0),
        Check("2.w_tilde.sampled_local_best", _status(bool(local_failures) and sampled_best <= 1 - 1e-6),
              sampled_best, 1 - 1e-6),
    ]


def check_v(tol) -> list[Check]:
    v = catalog.v_operator()
    unit = float(np.max(np.abs(v.matrix.conj().T @ v.matrix - np.eye(4))))
    d1 = 1 - abs(np.vdot(catalog.w_tilde().amplitudes, apply(catalog.ghz(3), v, "BC").amplitudes))
    d2 = 1 - abs(np.vdot(catalog.w_state().amplitudes, apply(catalog.f_ghz(), v, "BC").amplitudes))
    net = operators_equal_up_to_phase(catalog.v_network().matrix, v.matrix)
    return [
        Check("3.v.unitarity", _status(unit <= 1e-12), unit, 1e-12),
        Check("3.v.ghz_to_w_tilde", _status(d1 <= 1e-12), d1, 1e-12),
        Check("3.v.f_ghz_to_w", _status(d2 <= 1e-12), d2, 1e-12),
        Check("3.v.network", "pass" if net else "finding", float(net), None,
              "C12 (C-H)21 X2 C21, control c / target t, rightmost gate first"
              if net else "no convention reproduces the explicit matrix"),
    ]


def check_ghz_class(rng, tol) -> list[Check]:
    worst = 0.0
    for _ in range(100):
        alpha, beta = _complex_unit(rng, 2)
        a, b = _complex_unit(rng, 2)
        sim = analysis.simulate_ghzclass(alpha, beta, a, b)
        formula = analysis.prob_formula_ghzclass(alpha, beta, a, b)
        worst = max(worst, max(abs(sim[n] - formula[n]) for n in sim))
    sym = 0.0
    for _ in range(20):
        alpha, beta = _complex_unit(rng, 2)
        ph = np.exp(1j * rng.uniform(0, 2 * np.pi, 2))
        sim = analysis.simulate_ghzclass(alpha, beta, ph[0] / np.sqrt(2), ph[1] / np.sqrt(2))
        sym = max(sym, max(abs(p - 1 / 8) for p in sim.values()))
    frozen = analysis.calibrate_ghz_class_signs() == analysis.GHZ_CLASS_SIGNS
    return [
        Check("4.ghz_class.formula", _status(worst <= tol and frozen), worst, tol),
        Check("4.ghz_class.symmetric_uniform", _status(sym < 1e-12), sym, 1e-12),
    ]


def check_wclass(rng, tol) -> list[Check]:
    worst = 0.0
    for _ in range(100):
        inp = analysis.GeneralTwoQubitInput(*_complex_unit(rng, 4))
        a, b, c = rng.dirichlet([1, 1, 1])
        rows = analysis.compare_wclass_probabilities(inp, WClassParams(a, b, c, 0.0), rng.uniform(0, 2 * np.pi))
        worst = max(worst, analysis.max_abs_diff(rows))
    deviations = []
    for _ in range(10):
        inp = analysis.GeneralTwoQubitInput(*_complex_unit(rng, 4))
        a, b, c, d = rng.dirichlet([1, 1, 1, 1])
        rows = analysis.compare_wclass_probabilities(inp, WClassParams(a, b, c, d), 0.0)
        deviations.append(analysis.max_abs_diff(rows))
    # same check with the phase taken literally, to record the sign convention
    inp = analysis.GeneralTwoQubitInput(*_complex_unit(rng, 4))
    params = WClassParams(0.2, 0.3, 0.5, 0.0)
    channel = protocols.channel_from_state(analysis.assign_wclass(params))
    sim = protocols.outcome_probabilities(inp.to_state(), channel, catalog.ghz_teleport_basis(0.9))
    lit = analysis.prob_formula_wclass(inp, params.a, 0.9)
    literal_gap = max(abs(sim[n] - lit[n]) for n in sim)
    return [
        Check("5.wclass.d0_formula", _status(worst <= tol), worst, tol),
        Check("5.wclass.d_positive_cross_term", "finding" if deviations else "fail", max(deviations), None,
              f"{len(deviations)} rows; printed formula omits the sqrt(a d) interference term"),
        Check("5.wclass.phase_sign", "finding", literal_gap, None,
              "printed e^{i theta} matches simulation for basis phase -theta"),
    ]


def check_dense(tol) -> list[Check]:
    ok = all(protocols.dense_code(format(k, "03b")).success for k in range(8))
    a2 = 0.6  # |a|^2 - |b|^2 = 0.2
    state = catalog.ghz_class(GhzClassParams(np.sqrt(a2), np.sqrt(1 - a2)))
    dev = protocols.gram_deviation(protocols.encoded_states(state))
    return [
        Check("6.dense.round_trip", _status(ok), float(ok), None),
        Check("6.dense.unbalanced_incomplete", _status(dev > 0.01), dev, 0.01),
    ]


def check_ghz4(rng, tol) -> list[Check]:
    worst_p = worst_f = worst_w = 0.0
    for _ in range(100):
        alpha, beta = _complex_unit(rng, 2)
        inp = PureState.normalized(("1", "2", "3"), np.eye(8)[0] * alpha + np.eye(8)[7] * beta)
        rep = protocols.teleport_ghz4(inp)
        worst_p = max(worst_p, rep.max_uniform_deviation)
        worst_f = max(worst_f, 1 - rep.min_fidelity)
        worst_w = max(worst_w, 1 - protocols.teleport_w3_via_ghz4(protocols.w3_family(alpha, beta)).min_fidelity)
    coeff = apply(PureState.normalized("123", np.eye(8)[0] * 0.6 + np.eye(8)[7] * 0.8), catalog.v_operator(), "23")
    printed = PureState.normalized("123", 0.6 * np.eye(8)[4] + 0.8 * (np.eye(8)[1] + np.eye(8)[2]) / np.sqrt(2))
    swapped = not equal_up_to_global_phase(coeff, printed)
    return [
        Check("7.ghz4.uniform_probability", _status(worst_p <= tol), worst_p, tol),
        Check("7.ghz4.fidelity_deficit", _status(worst_f <= tol), worst_f, tol),
        Check("7.w3_via_ghz4.fidelity_deficit", _status(worst_w <= tol), worst_w, tol),
        Check("7.w3.coefficient_placement", "finding" if swapped else "pass", float(swapped), None,
              "(1 x V)(alpha|000> + beta|111>) = alpha|0 Psi+> + beta|100>" if swapped else ""),
    ]


def check_rotated(rng, tol) -> list[Check]:
    v = catalog.v_operator()
    ch = protocols.ghz3_channel()
    worst = worst_rot = 0.0
    for theta in (0.0, 0.7):
        basis = protocols.transform_input(catalog.ghz_teleport_basis(theta), v, ("1", "2"), ch)
        rec = protocols.ghz3_recovery(theta)
        rotated = protocols.post_rotate_recovery(rec, v, ("B", "C"))
        for inp in random_epr_inputs(rng, 50):
            z = apply(inp, v, ("1", "2"))
            pre = inp.relabel(ch.receiver_labels)
            worst = max(worst, 1 - protocols.teleport(z, ch, basis, rec, reference=pre).min_fidelity)
            worst_rot = max(worst_rot, 1 - protocols.teleport(z, ch, basis, rotated).min_fidelity)
    return [
        Check("8.rotated_basis.original_recovery", _status(worst <= tol), worst, tol,
              "receivers hold the pre-image |A>"),
        Check("8.rotated_basis.v_completed_recovery", _status(worst_rot <= tol), worst_rot, tol,
              "receivers hold V|A>"),
    ]


def check_convert(rng, tol) -> list[Check]:
    ghz = GhzClassParams(1 / np.sqrt(2), 1 / np.sqrt(2))
    fghz = GhzClassParams(np.sqrt(2 / 3), np.sqrt(1 / 3))
    verdict = analysis.convertible_two_particle(ghz, fghz)
    best = analysis.sampled_conversion_search(ghz, fghz, 10_000, int(rng.integers(2**31)))
    ph = np.exp(1j * rng.uniform(0, 2 * np.pi, 2))
    src, dst = GhzClassParams(np.sqrt(2 / 3) * ph[0], np.sqrt(1 / 3) * ph[1]), fghz
    pos = analysis.convertible_two_particle(src, dst)
    err = 1 - analysis.verify_conversion(src, dst, pos.transform) if pos.convertible else 1.0
    return [
        Check("9.convert.ghz_f_ghz_verdict", _status(not verdict.convertible), float(verdict.convertible), None),
        Check("9.convert.sampled_best", _status(best <= 1 - 1e-6), best, 1 - 1e-6),
        Check("9.convert.phase_pair", _status(pos.convertible and err <= 1e-12), err, 1e-12),
    ]


def check_optical(tol) -> list[Check]:
    base = optical.OpticalParams((1, 1, 1), 1.0, 1.0)
    w = catalog.w_state().amplitudes[[4, 2, 1]]
    worst = 0.0
    for t in np.linspace(0.05, 5.0, 40):
        sector = optical.exact_evolution(base.at(t)).single_photon_sector()
        worst = max(worst, 1 - abs(np.vdot(w, sector / np.linalg.norm(sector))) ** 2)
    ratio = optical.convergence_ratio(base, 0.1, "deficit")
    norm_ratio = optical.convergence_ratio(base, 0.1, "normalized_deficit")
    return [
        Check("10.optical.w_sector", _status(worst <= 1e-12), worst, 1e-12),
        Check("10.optical.first_order_ratio", _status(abs(ratio - 4) <= 0.2), ratio, 0.2),
        Check("10.optical.normalized_ratio", "finding", norm_ratio, None,
              "normalizing the first-order state cancels the t^2 term; deficit falls as t^4"),
    ]


def run_suite(seed: int = 0, tol: float = 1e-9) -> SuiteResult:
    rng = np.random.default_rng(seed)
    steps: list[Callable[[], list[Check]]] = [
        lambda: check_ghz3(rng, tol),
        lambda: check_w_tilde(rng, tol),
        lambda: check_v(tol),
        lambda: check_ghz_class(rng, tol),
        lambda: check_wclass(rng, tol),
        lambda: check_dense(tol),
        lambda: check_ghz4(rng, tol),
        lambda: check_rotated(rng, tol),
        lambda: check_convert(rng, tol),
        lambda: check_optical(tol),
    ]
    checks: list[Check] = []
    for step in steps:
        checks.extend(step())
    return SuiteResult(checks)
