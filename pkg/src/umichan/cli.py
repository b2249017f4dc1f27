"""Command-line front end.

Exit codes: 0 success, 1 validation findings or empty selection, 2 I/O or
parse errors (argparse usage errors also exit 2).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__, analysis, angular, dataset, lognormal, pdp, simulate
from .records import STAT_FIELDS, LinkState

EXIT_OK, EXIT_FINDINGS, EXIT_IO = 0, 1, 2


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _emit(args, text: str) -> None:
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _load_campaign(args, strict: bool = True) -> dataset.Campaign:
    if not args.input:
        return dataset.load_bundled()
    try:
        raw = Path(args.input).read_bytes()
    except OSError as e:
        raise CliError(f"cannot read {args.input}: {e.strerror or e}", EXIT_IO) from None
    try:
        return dataset.ingest_csv(raw, provenance=str(args.input), strict=strict)
    except dataset.RecordValidationError as e:
        raise CliError(f"validation error: {e}", EXIT_FINDINGS) from None
    except (dataset.DatasetError, UnicodeDecodeError) as e:
        raise CliError(f"parse error: {e}", EXIT_IO) from None


def _state(text: str) -> LinkState:
    state = LinkState.parse(text)
    if state is LinkState.NLOS_BEST:
        raise CliError("NLOS_BEST applies to directional path loss only", EXIT_FINDINGS)
    return state


def _metric_field(name: str) -> str:
    if name in STAT_FIELDS:
        return name
    for f in STAT_FIELDS:
        if f.rsplit("_", 1)[0] == name:
            return f
    raise CliError(f"unknown metric {name!r}", EXIT_IO)


def _max_dist(text: str) -> Optional[float]:
    if text.lower() in ("none", "inf", "off"):
        return None
    v = float(text)
    if math.isinf(v):
        return None
    return v


# --- commands ------------------------------------------------------------------


def cmd_validate(args) -> int:
    campaign = _load_campaign(args, strict=False)
    findings = dataset.validate(campaign)
    if args.json:
        _emit(args, _json({"provenance": campaign.provenance, "findings": [str(f) for f in findings]}))
    else:
        lines = [str(f) for f in findings] + [f"{len(findings)} findings"]
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_FINDINGS if findings else EXIT_OK


def cmd_fit_pl(args) -> int:
    campaign = _load_campaign(args)
    state = _state(args.state)
    if args.polarization == "vh":
        print("warning: V-H fits are reported for reference only; the campaign models fit V-V", file=sys.stderr)
    try:
        if args.model == "ci":
            fit = analysis.fit_pl(campaign, args.band, state, args.polarization)
            res = {"model": "ci", "ple": fit.ple, "sigma_db": fit.sigma_db, "fspl_1m_db": fit.fspl_1m_db}
        else:
            fit = analysis.fit_pl_fi(campaign, args.band, state, args.polarization)
            res = {"model": "fi", "alpha_db": fit.alpha_db, "beta": fit.beta, "sigma_db": fit.sigma_db}
    except LookupError:
        raise CliError("no matching records", EXIT_FINDINGS) from None
    res.update(band_ghz=args.band, state=state.value, polarization=args.polarization, n_points=fit.n_points)
    if args.json:
        _emit(args, _json(res))
    elif args.model == "ci":
        _emit(args, f"n={fit.ple:.2f} sigma={fit.sigma_db:.2f} dB points={fit.n_points}\n")
    else:
        _emit(args, f"alpha={fit.alpha_db:.2f} dB beta={fit.beta:.2f} sigma={fit.sigma_db:.2f} dB points={fit.n_points}\n")
    return EXIT_OK


def cmd_fit_spreads(args) -> int:
    campaign = _load_campaign(args)
    state = _state(args.state)
    field = _metric_field(args.metric)
    if field.startswith("omni_pl"):
        raise CliError("path loss is fitted with fit-pl", EXIT_IO)
    cap = analysis.default_max_dist(field) if args.max_dist is None else _max_dist(args.max_dist)
    try:
        stat = analysis.fit_spread(campaign, args.band, state, field, cap)
    except LookupError:
        raise CliError("no matching records", EXIT_FINDINGS) from None
    unit = "ns" if field.endswith("_ns") else "deg"
    res = {
        "band_ghz": args.band,
        "state": state.value,
        "metric": field,
        "max_dist_m": cap,
        "mu_lg": stat.mu_lg,
        "sigma_lg": stat.sigma_lg,
        "expectation": stat.expectation,
        "expectation_rounded": lognormal.expectation_rounded(stat.mu_lg, stat.sigma_lg),
        "n_points": stat.n_points,
        "unit": unit,
    }
    if args.json:
        _emit(args, _json(res))
    else:
        _emit(
            args,
            f"mu={stat.mu_lg:.2f} sigma={stat.sigma_lg:.2f} E={stat.expectation:.2f} {unit} "
            f"(from rounded parameters: {res['expectation_rounded']:.2f}) points={stat.n_points}\n",
        )
    return EXIT_OK


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror or e}", EXIT_IO) from None


def _load_pdp(path: str):
    try:
        return pdp.read_pdp(_read_text(path))
    except pdp.PdpFormatError as e:
        raise CliError(f"{path}: {e}", EXIT_IO) from None


def cmd_pdp_metrics(args) -> int:
    profile = _load_pdp(args.pdp)
    try:
        opts = pdp.DsOptions(args.threshold_db, args.noise_margin_db)
    except ValueError as e:
        raise CliError(str(e), EXIT_IO) from None
    ds = pdp.rms_delay_spread(profile, opts)
    kept = pdp.threshold_pdp(profile, opts)
    res = {"rms_ds_ns": ds, "taps": len(profile.delays_ns), "taps_kept": len(kept.delays_ns)}
    _emit(args, _json(res) if args.json else f"rms_ds={ds:.2f} ns taps={res['taps']} kept={res['taps_kept']}\n")
    return EXIT_OK


def cmd_synth_omni(args) -> int:
    profiles = [_load_pdp(p) for p in args.pdp]
    omni = pdp.synthesize_omni(profiles)
    ds = pdp.rms_delay_spread(omni)
    if args.pdp_out:
        Path(args.pdp_out).write_text(pdp.write_pdp(omni), encoding="utf-8")
    res = {"inputs": len(profiles), "taps": len(omni.delays_ns), "rms_ds_ns": ds}
    _emit(args, _json(res) if args.json else f"rms_ds={ds:.2f} ns taps={res['taps']} inputs={res['inputs']}\n")
    return EXIT_OK


def cmd_pas_metrics(args) -> int:
    try:
        pas = angular.read_pas(_read_text(args.pas))
    except angular.PasFormatError as e:
        raise CliError(f"{args.pas}: {e}", EXIT_IO) from None
    spread = angular.omni_angular_spread(pas)
    lobes = angular.segment_lobes(pas, args.lobe_threshold_db)
    mean_lobe = angular.mean_lobe_spread(lobes)
    res = {
        "plane": pas.plane.value,
        "omni_spread_deg": spread,
        "lobes": len(lobes),
        "mean_lobe_spread_deg": mean_lobe,
    }
    if args.json:
        _emit(args, _json(res))
    else:
        _emit(args, f"omni_as={spread:.2f} deg lobes={len(lobes)} mean_lobe_as={mean_lobe:.2f} deg\n")
    return EXIT_OK


def cmd_simulate(args) -> int:
    state = _state(args.state)
    campaign = _load_campaign(args) if args.source == "fitted" else None
    try:
        model = simulate.build_model(args.source, args.band, state, campaign)
    except (KeyError, LookupError) as e:
        raise CliError(f"no model for {args.band:g} GHz {state.value}: {e}", EXIT_FINDINGS) from None
    if args.n < 0:
        raise CliError("--n must be >= 0", EXIT_IO)
    distances = [d for d in args.dist for _ in range(args.n)]
    try:
        samples = simulate.sample_campaign(model, distances, args.seed, args.as_clamp_deg)
    except ValueError as e:
        raise CliError(str(e), EXIT_IO) from None
    clamps = simulate.clamp_count(samples)
    if clamps:
        print(f"note: {clamps} angular spread draws clamped at {args.as_clamp_deg:g} deg", file=sys.stderr)
    _emit(args, simulate.samples_to_json(samples) if args.json else simulate.samples_to_csv(samples))
    return EXIT_OK


def cmd_report(args) -> int:
    campaign = _load_campaign(args)
    _emit(args, analysis.dump_report(analysis.build_report(campaign)))
    return EXIT_OK


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    src = common.add_mutually_exclusive_group()
    src.add_argument("--input", metavar="CSV", help="campaign CSV file")
    src.add_argument("--bundled", action="store_true", help="use the bundled campaign (default)")

    band_state = argparse.ArgumentParser(add_help=False)
    band_state.add_argument("--band", type=float, required=True, help="carrier frequency, GHz")
    band_state.add_argument("--state", required=True, type=str.upper, choices=["LOS", "NLOS"])

    p = argparse.ArgumentParser(prog="umichan", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check a campaign file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("fit-pl", parents=[common, band_state], help="fit a path-loss model")
    s.add_argument("--mode", choices=["omni"], default="omni")
    s.add_argument("--model", choices=["ci", "fi"], default="ci")
    s.add_argument("--polarization", choices=["vv", "vh"], default="vv")
    s.set_defaults(func=cmd_fit_pl)

    s = sub.add_parser("fit-spreads", parents=[common, band_state], help="log-normal spread statistics")
    s.add_argument("--metric", required=True, help="e.g. omni_ds, omni_asa, omni_asd_deg")
    s.add_argument("--max-dist", default=None, help="T-R cap in m, or 'none' (default: 180 for angles)")
    s.set_defaults(func=cmd_fit_spreads)

    s = sub.add_parser("pdp-metrics", parents=[common], help="RMS delay spread of a PDP file")
    s.add_argument("--pdp", required=True)
    s.add_argument("--threshold-db", type=float, default=25.0)
    s.add_argument("--noise-margin-db", type=float, default=5.0)
    s.set_defaults(func=cmd_pdp_metrics)

    s = sub.add_parser("synth-omni", parents=[common], help="synthesize an omni PDP from directional PDPs")
    s.add_argument("--pdp", required=True, action="append", help="directional PDP file (repeat)")
    s.add_argument("--pdp-out", help="write the synthesized PDP here")
    s.set_defaults(func=cmd_synth_omni)

    s = sub.add_parser("pas-metrics", parents=[common], help="angular spread and lobes of a PAS file")
    s.add_argument("--pas", required=True)
    s.add_argument("--lobe-threshold-db", type=float, default=10.0)
    s.set_defaults(func=cmd_pas_metrics)

    s = sub.add_parser("simulate", parents=[common, band_state], help="Monte Carlo link statistics")
    s.add_argument("--dist", type=float, nargs="+", required=True, help="T-R separation(s), m")
    s.add_argument("--n", type=int, default=1, help="samples per distance")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--source", choices=list(simulate.SOURCES), default="paper")
    s.add_argument("--as-clamp-deg", type=float, default=simulate.DEFAULT_AS_CLAMP_DEG)
    s.add_argument("--out", help="write samples here instead of stdout")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("report", parents=[common], help="full reproduction report (JSON)")
    s.add_argument("--out", help="output path (default: stdout)")
    s.set_defaults(func=cmd_report)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
