"""Command-line front end: single cycles, sweeps, ergotropy checks, audits.

Exit codes: 0 success, 2 usage error, 3 physics/numerics error. Everything on
stdout is machine-parseable (JSON, or RFC-4180 CSV for sweeps); warnings and
diagnostics go to stderr.

A JSON config file (--config) may supply any of the value flags, using the
flag names as keys (hyphens and underscores are interchangeable). Explicit
flags win over the config file, with a warning on stderr when they disagree.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .errors import OttoForgeError
from .cycles import (
    CycleConfig,
    CycleKind,
    DisplacedThermalBath,
    SecondKindBath,
    SqueezedDisplacedBath,
    SqueezedThermalBath,
    ThermalBath,
    audit_laws,
    modified_cycle,
    second_kind_cycle,
    standard_cycle,
)
from .fock import build_fock_density, choose_cutoff, entropy_fock, ergotropy_of_density
from .gaussian import (
    GaussianModeState,
    delta_n,
    ergotropy_analytic,
    is_nonclassical,
    state_energy,
)
from .sweeps import SweepAxis, SweepSpec, audit_campaign, emit_table, row_record, run_sweep
from .thermo import thermal_entropy

_CYCLE_FN = {
    "standard": standard_cycle,
    "modified": modified_cycle,
    "second-kind": second_kind_cycle,
}


class _UsageError(Exception):
    """Invalid argument combination detected after config merging."""


def _parse_bath(text: str):
    """Parse a bath flag: thermal | squeezed:R | displaced:RE,IM | second-kind:DN.

    Squeeze and displacement combine with '+', e.g. squeezed:0.5+displaced:1,0.2.
    """
    r = None
    alpha = None
    second = None
    for part in text.split("+"):
        kind, _, payload = part.partition(":")
        kind = kind.strip().lower()
        try:
            if kind == "thermal":
                if payload:
                    raise ValueError("thermal takes no parameter")
            elif kind == "squeezed":
                r = float(payload)
            elif kind == "displaced":
                re_str, sep, im_str = payload.partition(",")
                alpha = complex(float(re_str), float(im_str) if sep else 0.0)
            elif kind == "second-kind":
                second = float(payload)
            else:
                raise ValueError(f"unknown bath kind {kind!r}")
        except ValueError as exc:
            raise _UsageError(f"malformed bath spec {text!r}: {exc}") from None
    if second is not None:
        if r is not None or alpha is not None:
            raise _UsageError("second-kind baths cannot be combined with squeezing/displacement")
        return SecondKindBath(excess=second)
    if r is not None and alpha is not None:
        return SqueezedDisplacedBath(r=r, alpha=alpha)
    if r is not None:
        return SqueezedThermalBath(r=r)
    if alpha is not None:
        return DisplacedThermalBath(alpha=alpha)
    return ThermalBath()


def _merge_config(args: argparse.Namespace) -> None:
    """Fill unset flags from the --config JSON payload; flags win loudly."""
    if getattr(args, "config", None) is None:
        return
    try:
        with open(args.config, encoding="utf-8") as handle:
            payload = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise _UsageError(f"cannot read config file {args.config!r}: {exc}") from None
    if not isinstance(payload, dict):
        raise _UsageError("config file must hold a flat JSON object")
    for raw_key, value in payload.items():
        key = raw_key.replace("-", "_")
        if not hasattr(args, key) or key in ("config", "func"):
            raise _UsageError(f"unknown config key {raw_key!r}")
        current = getattr(args, key)
        if current is None or current is False:
            setattr(args, key, value)
        elif current != value:
            print(
                f"warning: flag --{raw_key.replace('_', '-')}={current} overrides "
                f"config value {value}",
                file=sys.stderr,
            )


def _require(args: argparse.Namespace, *names: str) -> None:
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise _UsageError(f"missing required argument(s): {flags}")


def _ledger_payload(ledger, law) -> dict:
    payload = {
        "W1": ledger.w1,
        "W2": ledger.w2,
        "W3": ledger.w3,
        "W3_prime": ledger.w3_prime,
        "W4": ledger.w4,
        "Q2": ledger.q2,
        "Q4": ledger.q4,
        "E2": ledger.e2,
        "E4": ledger.e4,
        "eta": ledger.eta,
        "cop": ledger.cop,
        "regime": ledger.regime.value,
        "law_residual": law.first_law_residual,
        "clausius_sum": law.clausius_sum,
        "clausius_skipped": law.clausius_skipped,
        "w_inv": ledger.w_inv,
        "eta_reason": ledger.eta_reason,
        "note": ledger.note,
    }
    return payload


def _cmd_cycle(args: argparse.Namespace) -> int:
    _merge_config(args)
    args.cycle = args.cycle or "standard"
    _require(args, "omega1", "omega2", "t1", "t2", "bath")
    try:
        config = CycleConfig(
            omega1=args.omega1,
            omega2=args.omega2,
            t1=args.t1,
            t2=args.t2,
            bath=_parse_bath(str(args.bath)),
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    ledger = _CYCLE_FN[args.cycle](config)
    law = audit_laws(ledger, config)
    print(json.dumps(_ledger_payload(ledger, law)))
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    _merge_config(args)
    args.cycle = args.cycle or "standard"
    args.format = args.format or "csv"
    _require(args, "omega1", "omega2", "t1", "t2", "bath", "axis", "start", "stop", "steps")
    try:
        base = CycleConfig(
            omega1=args.omega1,
            omega2=args.omega2,
            t1=args.t1,
            t2=args.t2,
            bath=_parse_bath(str(args.bath)),
        )
        spec = SweepSpec(
            base=base,
            axis=SweepAxis(args.axis),
            start=args.start,
            stop=args.stop,
            steps=args.steps,
            cycle_kind=CycleKind(args.cycle),
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    table = emit_table(run_sweep(spec), format=args.format)
    if args.out:
        with open(args.out, "wb") as handle:
            handle.write(table)
    else:
        sys.stdout.buffer.write(table)
        sys.stdout.buffer.flush()
    return 0


def _cmd_ergotropy(args: argparse.Namespace) -> int:
    _merge_config(args)
    _require(args, "nth", "omega")
    try:
        state = GaussianModeState(
            n_th=args.nth,
            r=args.r or 0.0,
            alpha=complex(args.alpha_re or 0.0, args.alpha_im or 0.0),
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    omega = float(args.omega)
    analytic = ergotropy_analytic(state, omega)
    payload = {
        "n_th": state.n_th,
        "r": state.r,
        "alpha_re": state.alpha.real,
        "alpha_im": state.alpha.imag,
        "omega": omega,
        "delta_n": delta_n(state),
        "energy": state_energy(state, omega),
        "ergotropy": analytic,
        "nonclassical": is_nonclassical(state),
    }
    if args.oracle:
        tail_tol = args.tail_tol if args.tail_tol is not None else 1e-12
        cutoff = choose_cutoff(state, tail_tol)
        density = build_fock_density(state, cutoff, tail_tol)
        oracle_w = ergotropy_of_density(density, omega)
        oracle_s = entropy_fock(density)
        payload.update(
            {
                "oracle_cutoff": cutoff,
                "trace_deficit": density.trace_deficit,
                "ergotropy_fock": oracle_w,
                "entropy_fock": oracle_s,
                "thermal_entropy": thermal_entropy(state.n_th),
                "ergotropy_rel_dev": abs(oracle_w - analytic) / max(analytic, 1e-9),
                "entropy_dev": abs(oracle_s - thermal_entropy(state.n_th)),
            }
        )
    print(json.dumps(payload))
    return 0


def _cmd_audit(args: argparse.Namespace) -> int:
    _merge_config(args)
    args.family = args.family or "mixed"
    _require(args, "samples", "seed")
    if int(args.samples) < 1:
        raise _UsageError("--samples must be at least 1")
    summary = audit_campaign(int(args.samples), int(args.seed), family=args.family)
    print(json.dumps(vars(summary) | {"ok": summary.ok}))
    return 0 if summary.ok else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="otto-forge",
        description="Quantum Otto machines powered by non-thermal baths.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_base_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--omega1", type=float, help="working-fluid frequency in strokes 4/1")
        p.add_argument("--omega2", type=float, help="working-fluid frequency in strokes 2/3")
        p.add_argument("--t1", type=float, help="cold-bath temperature")
        p.add_argument("--t2", type=float, help="hot-bath temperature parameter")
        p.add_argument(
            "--bath",
            help="thermal | squeezed:R | displaced:RE,IM | second-kind:DN "
            "(combine with '+', e.g. squeezed:0.5+displaced:1,0)",
        )
        p.add_argument(
            "--cycle",
            choices=sorted(_CYCLE_FN),
            help="cycle variant (default: standard)",
        )
        p.add_argument("--config", help="JSON file providing any of the value flags")

    p_cycle = sub.add_parser("cycle", help="compute one stroke ledger")
    add_base_flags(p_cycle)
    p_cycle.set_defaults(func=_cmd_cycle)

    p_sweep = sub.add_parser("sweep", help="sweep one parameter and emit a table")
    add_base_flags(p_sweep)
    p_sweep.add_argument(
        "--axis", choices=[axis.value for axis in SweepAxis], help="sweep axis"
    )
    p_sweep.add_argument("--start", type=float, help="first grid value")
    p_sweep.add_argument("--stop", type=float, help="last grid value (inclusive)")
    p_sweep.add_argument("--steps", type=int, help="number of grid points (>= 2)")
    p_sweep.add_argument("--format", choices=("csv", "json"), help="table format (default: csv)")
    p_sweep.add_argument("--out", help="write the table to a file instead of stdout")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_ergo = sub.add_parser("ergotropy", help="analytic state report, optionally oracle-checked")
    p_ergo.add_argument("--nth", type=float, help="thermal occupation of the state")
    p_ergo.add_argument("--r", type=float, help="squeezing amplitude (default 0)")
    p_ergo.add_argument("--alpha-re", type=float, help="displacement, real part")
    p_ergo.add_argument("--alpha-im", type=float, help="displacement, imaginary part")
    p_ergo.add_argument("--omega", type=float, help="oscillator frequency")
    p_ergo.add_argument(
        "--oracle", action="store_true", help="also run the truncated-Fock oracle"
    )
    p_ergo.add_argument("--tail-tol", type=float, help="oracle tail tolerance (default 1e-12)")
    p_ergo.add_argument("--config", help="JSON file providing any of the value flags")
    p_ergo.set_defaults(func=_cmd_ergotropy)

    p_audit = sub.add_parser("audit", help="randomized first/second-law audit campaign")
    p_audit.add_argument("--samples", type=int, help="number of random configurations")
    p_audit.add_argument("--seed", type=int, help="RNG seed (campaigns are reproducible)")
    p_audit.add_argument(
        "--family",
        choices=("first-kind", "second-kind", "mixed"),
        help="configuration family to draw from (default: mixed)",
    )
    p_audit.add_argument("--config", help="JSON file providing any of the value flags")
    p_audit.set_defaults(func=_cmd_audit)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OttoForgeError as exc:
        print(f"physics error: {exc}", file=sys.stderr)
        return 3


def run() -> None:
    raise SystemExit(main())
