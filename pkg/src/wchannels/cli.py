"""Command-line front end: ``wchannels <subcommand> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import analysis, catalog, optical, protocols, suite
from .catalog import GhzClassParams, WClassParams
from .qcore import (
    TOL_PHASE,
    PureState,
    QOperator,
    operator_to_json,
    state_from_json,
    state_to_json,
)

SCHEMA_VERSION = "1.0"
SEARCH_CHOICES = ("auto", "pauli-local", "pauli-phase-local", "v-times-pauli", "full-two-qubit-sample")


class UsageError(Exception):
    pass


# -- parsing helpers -------------------------------------------------------------

def parse_amplitudes(text: str) -> tuple[np.ndarray, bool]:
    """Comma-separated reals or ``re+imj`` values; returns (normalized, was_rescaled)."""
    try:
        vals = np.array([complex(tok.strip().replace(" ", "")) for tok in text.split(",")])
    except ValueError as exc:
        raise UsageError(f"cannot parse amplitudes {text!r}: {exc}") from None
    norm = np.linalg.norm(vals)
    if norm == 0:
        raise UsageError("amplitudes are all zero")
    rescaled = bool(abs(norm - 1) > 1e-12)
    return vals / norm, rescaled


def parse_floats(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",")]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def parse_channel(text: str) -> tuple[PureState, str]:
    """Channel selector -> three- or four-qubit state on A, B, C(, D)."""
    name, _, arg = text.partition(":")
    if name == "ghz3":
        return catalog.ghz(3), text
    if name == "ghz4":
        return catalog.ghz(4), text
    if name == "f-ghz":
        return catalog.f_ghz(), text
    if name == "w":
        return catalog.w_state(), text
    if name == "w-tilde":
        return catalog.w_tilde(), text
    if name == "ghz-class":
        amps, _ = parse_amplitudes(arg)
        if len(amps) != 2:
            raise UsageError("ghz-class needs two amplitudes a,b")
        return catalog.ghz_class(GhzClassParams(*amps)), text
    if name == "w-class":
        vals = parse_floats(arg)
        try:
            params = WClassParams.from_abc(*vals) if len(vals) == 3 else WClassParams(*vals)
        except (TypeError, ValueError) as exc:
            raise UsageError(f"bad w-class parameters {arg!r}: {exc}") from None
        return analysis.assign_wclass(params), text
    if name == "phi-prime":
        x, _, sign = arg.partition(",")
        if x not in ("00", "01", "10", "11") or sign not in ("+", "-"):
            raise UsageError("phi-prime expects x,sign with x in 00..11 and sign + or -")
        return catalog.phi_prime_state(x, 1 if sign == "+" else -1), text
    if name == "w-family":
        try:
            k = int(arg)
            return analysis.w_channel_family()[k].state, text
        except (ValueError, IndexError):
            raise UsageError("w-family index must be 0..7") from None
    if name == "file":
        try:
            data = json.loads(Path(arg).read_text())
            state = state_from_json(data, normalize=True)
        except (OSError, KeyError, ValueError) as exc:
            raise UsageError(f"cannot read channel file {arg!r}: {exc}") from None
        if state.n_qubits not in (3, 4):
            raise UsageError("channel file must hold a 3- or 4-qubit state")
        return state, text
    raise UsageError(f"unknown channel {text!r}")


def parse_ghz_class(text: str) -> GhzClassParams:
    state, _ = parse_channel(text)
    amps = state.amplitudes
    if state.n_qubits != 3 or np.linalg.norm(amps[1:7]) > 1e-12:
        raise UsageError(f"{text!r} is not of the form a|000> + b|111>")
    return GhzClassParams(amps[0], amps[7])


def parse_sweep(text: str) -> list[float]:
    try:
        start, stop, n = text.split(":")
        return [float(x) for x in np.linspace(float(start), float(stop), int(n))]
    except ValueError:
        raise UsageError(f"sweep must look like start:stop:count, got {text!r}") from None


# -- output -------------------------------------------------------------------------

def _emit(args, payload: dict, text: str | None = None) -> None:
    payload = {"schema_version": SCHEMA_VERSION, "command": args.command, **payload}
    if args.format == "json" or text is None:
        out = json.dumps(payload, indent=2) + "\n"
    else:
        out = text
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)


def _fmt_pretty(rows: list[list[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows) + "\n"


# -- subcommands ------------------------------------------------------------------------

def _space(name: str) -> str:
    return name.replace("-", "_")


def _teleport_setup(args):
    state, label = parse_channel(args.channel)
    channel = protocols.channel_from_state(state, label)
    thetas = parse_floats(args.theta)
    if state.n_qubits == 3:
        basis = catalog.ghz_teleport_basis(thetas[0])
        probes = protocols.epr_family_probes()
    else:
        basis = catalog.ghz4_teleport_basis(*(thetas + [0.0])[:2])
        probes = protocols.ghz_family_probes()
    return channel, basis, probes


def _recovery_for(args, channel, basis, probes):
    options = {"samples": args.samples, "seed": args.seed or 0}
    if args.search == "auto":
        spaces = [s for s in protocols.DEFAULT_SPACES
                  if not (s == "v_times_pauli" and len(channel.receiver_labels) != 2)]
    else:
        spaces = [_space(args.search)]
    rec = None
    for space in spaces:
        opts = options if space == "full_two_qubit_sample" else {}
        try:
            rec = protocols.find_recovery(channel, basis, space, probes, **opts)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if rec.complete:
            break
    return rec


def _fill_missing(rec: protocols.RecoveryMap) -> protocols.RecoveryMap:
    if rec.complete:
        return rec
    dim = 2 ** len(rec.receiver_labels)
    ops = dict(rec.operators)
    desc = dict(rec.descriptions)
    for name in rec.missing:
        ops[name] = QOperator(np.eye(dim), "I")
        desc[name] = "none (search failed)"
    return protocols.RecoveryMap(ops, rec.receivers, rec.search_space, desc, rec.missing)


def cmd_teleport(args) -> int:
    channel, basis, probes = _teleport_setup(args)
    amps, rescaled = parse_amplitudes(args.input)
    if channel.state.n_qubits == 3:
        if len(amps) == 2:
            amps = np.array([0, amps[0], amps[1], 0])
        elif len(amps) != 4:
            raise UsageError("three-qubit channels take 2 (alpha,beta) or 4 amplitudes")
        input_state = PureState(("1", "2"), amps)
    else:
        if len(amps) != 2:
            raise UsageError("the four-qubit channel takes 2 amplitudes (alpha|000> + beta|111>)")
        input_state = PureState(("1", "2", "3"), np.eye(8)[0] * amps[0] + np.eye(8)[7] * amps[1])
    rec = _recovery_for(args, channel, basis, probes)
    suit = protocols.check_channel_suitability(channel, basis, probes, (rec.search_space,))
    report = protocols.teleport(input_state, channel, basis, _fill_missing(rec))
    tol = args.tol_override if args.tol_override is not None else TOL_PHASE
    outcomes = []
    for o in report.outcomes:
        outcomes.append({
            "name": o.name,
            "probability": o.probability,
            "fidelity": o.fidelity,
            "recovery": o.recovery,
            "locality_flag": "local" if o.local else "non-local",
            "recovered": o.name not in rec.missing,
            "residual": state_to_json(o.residual) if o.residual is not None else None,
        })
    payload = {
        "channel": args.channel,
        "theta": parse_floats(args.theta),
        "input": state_to_json(input_state),
        "input_rescaled": rescaled,
        "search_space": rec.search_space,
        "outcomes": outcomes,
        "aggregate": {
            "min_fidelity": report.min_fidelity,
            "max_uniform_deviation": report.max_uniform_deviation,
            "success": bool(report.min_fidelity >= 1 - tol and rec.complete),
        },
        "suitability": {
            "max_probability_deviation": suit.max_deviation,
            "suitable": suit.suitable,
        },
    }
    if args.shots:
        if args.seed is None:
            raise UsageError("--shots requires --seed")
        counts = np.random.default_rng(args.seed).multinomial(args.shots, report.probabilities / report.probabilities.sum())
        payload["shots"] = {"n": args.shots, "seed": args.seed,
                            "counts": {o.name: int(c) for o, c in zip(report.outcomes, counts)}}
    rows = [["outcome", "probability", "fidelity", "recovery", "locality"]]
    rows += [[o["name"], f"{o['probability']:.6f}", "-" if o["fidelity"] is None else f"{o['fidelity']:.9f}",
              o["recovery"], o["locality_flag"]] for o in outcomes]
    text = _fmt_pretty(rows) + f"success={payload['aggregate']['success']} suitable={suit.suitable}\n"
    _emit(args, payload, text)
    return 0


def cmd_find_recovery(args) -> int:
    channel, basis, probes = _teleport_setup(args)
    rec = _recovery_for(args, channel, basis, probes)
    payload = {"channel": args.channel, "theta": parse_floats(args.theta), **protocols.recovery_to_json(rec)}
    payload["schema_version"] = SCHEMA_VERSION
    rows = [["outcome", "recovery", "local"]]
    rows += [[n, rec.describe(n), str(rec.locality[n])] for n in rec.operators]
    rows += [[n, "none found", "-"] for n in rec.missing]
    _emit(args, payload, _fmt_pretty(rows))
    return 0


def cmd_dense(args) -> int:
    state, _ = parse_channel(args.channel)
    if state.n_qubits != 3:
        raise UsageError("dense coding uses a three-qubit channel")
    try:
        rep = protocols.dense_code(args.message, state)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    gram = protocols.gram_deviation(protocols.encoded_states(state))
    payload = {
        "channel": args.channel,
        "message": rep.message,
        "encoding": {"B": rep.encoding[0], "C": rep.encoding[1]},
        "decoded": rep.decoded,
        "deterministic": rep.deterministic,
        "success": rep.success,
        "gram_deviation": gram,
        "complete_basis": gram <= 1e-10,
    }
    text = f"message {rep.message} -> B'={rep.encoding[0]} C'={rep.encoding[1]} -> decoded {rep.decoded}" \
           f" (deterministic={rep.deterministic})\n"
    _emit(args, payload, text)
    return 0


def cmd_probe(args) -> int:
    thetas = parse_sweep(args.sweep_theta) if args.sweep_theta else parse_floats(args.theta)
    if args.formula == "wclass":
        name, _, arg = args.channel.partition(":")
        if name != "w-class":
            raise UsageError("the wclass formula needs a w-class:a,b,c[,d] channel")
        vals = parse_floats(arg)
        try:
            params = WClassParams.from_abc(*vals) if len(vals) == 3 else WClassParams(*vals)
        except (TypeError, ValueError) as exc:
            raise UsageError(str(exc)) from None
        amps, _ = parse_amplitudes(args.input or "0.5,0.5,0.5,0.5")
        if len(amps) != 4:
            raise UsageError("the wclass formula takes four input amplitudes gamma,alpha,beta,delta")
        rows = analysis.wclass_sweep(analysis.GeneralTwoQubitInput(*amps), params, thetas)
    else:
        params = parse_ghz_class(args.channel)
        amps, _ = parse_amplitudes(args.input or "0.6,0.8")
        if len(amps) != 2:
            raise UsageError("the ghz-class formula takes two input amplitudes alpha,beta")
        rows = analysis.ghzclass_sweep(amps[0], amps[1], params, thetas)
    payload = {"channel": args.channel, "formula": args.formula, "rows": rows,
               "max_diff": max(r["diff"] for r in rows)}
    _emit(args, payload, analysis.rows_to_csv(rows))
    return 0


def cmd_convert(args) -> int:
    src, dst = parse_ghz_class(args.src), parse_ghz_class(args.dst)
    verdict = analysis.convertible_two_particle(src, dst)
    payload = {
        "src": args.src,
        "dst": args.dst,
        "convertible": verdict.convertible,
        "verdict": verdict.verdict,
        "reason": verdict.reason,
        "transform": operator_to_json(verdict.transform) if verdict.transform else None,
        "transform_fidelity": analysis.verify_conversion(src, dst, verdict.transform) if verdict.transform else None,
        "fidelity_bound": analysis.conversion_fidelity_bound(src, dst),
        "sampled_best_fidelity": None,
    }
    if args.samples:
        payload["sampled_best_fidelity"] = analysis.sampled_conversion_search(src, dst, args.samples, args.seed or 0)
        payload["samples"] = args.samples
    _emit(args, payload, f"{verdict.verdict}: {verdict.reason}\n")
    return 0


def cmd_optical(args) -> int:
    try:
        g = [complex(tok.strip()) for tok in args.g.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse couplings {args.g!r}") from None
    if len(g) != 3:
        raise UsageError("--g takes three couplings")
    try:
        params = optical.OpticalParams(tuple(g), pump=complex(args.kappa), q=1.0, t=args.t)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    payload = optical.report(params)
    text = "".join(f"{k}: {v}\n" for k, v in payload.items())
    _emit(args, payload, text)
    return 0


def cmd_verify(args) -> int:
    tol = args.tol_override if args.tol_override is not None else 1e-9
    result = suite.run_suite(seed=args.seed or 0, tol=tol)
    rows = [["status", "check", "metric", "tolerance", "detail"]]
    rows += [[c.status.upper(), c.name, "-" if c.metric is None else f"{c.metric:.3g}",
              "-" if c.tolerance is None else f"{c.tolerance:.3g}", c.detail] for c in result.checks]
    _emit(args, result.to_json(), _fmt_pretty(rows))
    return 0 if result.passed else 1


# -- parser -------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wchannels",
                                     description="Teleportation and dense coding over GHZ- and W-class channels.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--seed", type=int, default=None, help="seed for sampled searches and --shots")
    common.add_argument("--tol-override", type=float, default=None, help=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    def channel_args(p):
        p.add_argument("--channel", required=True,
                       help="ghz3, ghz4, f-ghz, w, w-tilde, ghz-class:a,b, w-class:a,b,c[,d], "
                            "phi-prime:x,sign, w-family:k or file:PATH")
        p.add_argument("--theta", default="0", help="basis phase (two comma-separated for ghz4)")
        p.add_argument("--search", choices=SEARCH_CHOICES, default="auto")
        p.add_argument("--samples", type=int, default=10_000, help="size of the sampled search space")

    p = sub.add_parser("teleport", parents=[common], help="run a teleportation protocol")
    channel_args(p)
    p.add_argument("--input", required=True, help="alpha,beta (or gamma,alpha,beta,delta)")
    p.add_argument("--shots", type=int, default=0)
    p.set_defaults(func=cmd_teleport)

    p = sub.add_parser("find-recovery", parents=[common], help="search recovery operators")
    channel_args(p)
    p.set_defaults(func=cmd_find_recovery)

    p = sub.add_parser("dense", parents=[common], help="dense-code a three-bit message")
    p.add_argument("--message", required=True)
    p.add_argument("--channel", default="ghz3")
    p.set_defaults(func=cmd_dense)

    p = sub.add_parser("probe", parents=[common], help="formula vs simulated outcome probabilities")
    p.add_argument("--channel", required=True)
    p.add_argument("--formula", choices=("wclass", "ghz-class"), default="wclass")
    p.add_argument("--input", default=None)
    p.add_argument("--theta", default="0")
    p.add_argument("--sweep-theta", default=None, help="start:stop:count")
    p.set_defaults(func=cmd_probe, format="csv")

    p = sub.add_parser("convert", parents=[common], help="two-qubit convertibility of GHZ-class states")
    p.add_argument("--src", required=True)
    p.add_argument("--dst", required=True)
    p.add_argument("--samples", type=int, default=0, help="random T to try (0 skips)")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("optical", parents=[common], help="optical W-state preparation")
    p.add_argument("--g", default="1,1,1")
    p.add_argument("--kappa", default="1")
    p.add_argument("--t", type=float, default=0.1)
    p.set_defaults(func=cmd_optical)

    p = sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    p.set_defaults(func=cmd_verify, format="pretty")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"wchannels {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
