"""Command-line front end: reproducible runs of the analysis pipeline.

Subcommands: peaks, weights, sync, compound, significance, eigcorr, rank,
simulate, sweep-a0.  Configuration precedence is defaults < JSON config
file (``--config``) < explicit flags; every run writes a JSON metadata
sidecar with the fully resolved configuration and the tool version.
Floating output carries 17 significant digits.

Exit codes: 0 ok, 2 usage error, 3 parse/validation error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import __version__
from .eigcorr import eigen_track
from .filtering import FilterSpec
from .peaks import DetectorConfig, detect_record, trains_from_matrix
from .pipeline import SyncPipeline
from .record import FLOAT_FORMAT, MultiChannelRecord, read_record, write_record, write_series
from .surrogate import (
    RNG_ALGORITHM,
    SurrogateConfig,
    surrogate_pool,
    nearest_rank_percentile,
)
from .sync import compound, multi_sync, pairwise_sync, rank_groups
from .synth import SynthSpec, generate
from .validation import ParseError, ValidationError
from .weights import build_weights, density_from_name


class UsageError(Exception):
    """Bad flag combination or malformed flag value (exit code 2)."""


DEFAULTS = {
    "band": "25:100",
    "notch": "49:51",
    "no_filter": False,
    "window": None,  # defaults to round(fs) when needed
    "mult": 2.0,
    "polarity": "positive",
    "a0": 0.5,
    "tau": 1e-3,
    "density": "gaussian",
    "scale": 1.0,
    "surrogates": 100,
    "percentile": 95.0,
    "seed": 0,
    "m": None,  # defaults to 4 * fs
    "hop": None,  # defaults to fs
    "grid": "0.1:0.05:0.9",
    "threads": None,
    "as_trains": False,
}


def _fmt(value: float) -> str:
    return FLOAT_FORMAT % float(value)


def _parse_pair(text: str, name: str, cast) -> tuple:
    parts = str(text).split(":")
    if len(parts) != 2:
        raise UsageError(f"--{name} expects LO:HI, got {text!r}")
    try:
        return cast(parts[0]), cast(parts[1])
    except ValueError:
        raise UsageError(f"--{name} expects numeric LO:HI, got {text!r}") from None


def _parse_grid(text: str) -> list[float]:
    parts = str(text).split(":")
    if len(parts) != 3:
        raise UsageError(f"--grid expects LO:STEP:HI, got {text!r}")
    try:
        lo, step, hi = (float(p) for p in parts)
    except ValueError:
        raise UsageError(f"--grid expects numeric LO:STEP:HI, got {text!r}") from None
    if step <= 0 or hi < lo:
        raise UsageError(f"--grid badly ordered: {text!r}")
    values = []
    k = 0
    while True:
        v = lo + k * step
        if v > hi + 1e-12:
            break
        values.append(round(v, 12))
        k += 1
    return values


def _resolve(args: argparse.Namespace, used: list[str]) -> dict:
    """defaults < --config JSON < explicit flags, for the keys in ``used``."""
    resolved = {k: DEFAULTS[k] for k in used if k in DEFAULTS}
    config_path = getattr(args, "config", None)
    if config_path:
        with open(config_path) as fh:
            try:
                loaded = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{config_path}: invalid JSON ({exc})") from None
        if not isinstance(loaded, dict):
            raise ParseError(f"{config_path}: config must be a JSON object")
        for key, value in loaded.items():
            if key in resolved:
                resolved[key] = value
    for key in used:
        value = getattr(args, key, None)
        if value is not None and value is not False:
            resolved[key] = value
    return resolved


def _threads(resolved: dict) -> int | None:
    """Worker cap: --threads flag, else the PEAKSYNC_THREADS variable."""
    if resolved.get("threads") is not None:
        return int(resolved["threads"])
    env = os.environ.get("PEAKSYNC_THREADS")
    return int(env) if env else None


def _write_sidecar(path: str, command: str, config: dict) -> None:
    meta = {
        "tool": "peaksync",
        "version": __version__,
        "command": command,
        "config": config,
    }
    with open(path, "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")


def _sidecar_path(args: argparse.Namespace, command: str, primary_output: str | None) -> str:
    if getattr(args, "meta", None):
        return args.meta
    if primary_output:
        return primary_output + ".meta.json"
    return f"peaksync_{command}_meta.json"


def _filter_spec(resolved: dict) -> FilterSpec | None:
    if resolved.get("no_filter") or resolved.get("as_trains"):
        return None
    low, high = _parse_pair(resolved["band"], "band", float)
    notch_text = resolved.get("notch")
    if notch_text in (None, "", "off", "none"):
        nlo = nhi = 0.0
    else:
        nlo, nhi = _parse_pair(notch_text, "notch", float)
    return FilterSpec(low_hz=low, high_hz=high, notch_low_hz=nlo, notch_high_hz=nhi)


def _detector(resolved: dict, fs: float) -> DetectorConfig:
    window = resolved.get("window")
    if window is None:
        window = int(round(fs))
    return DetectorConfig(
        window_len=int(window),
        multiplier=float(resolved["mult"]),
        polarity=resolved["polarity"],
    )


def _weights(resolved: dict):
    density = density_from_name(resolved["density"], float(resolved["scale"]))
    return build_weights(float(resolved["a0"]), float(resolved["tau"]), density)


def _pipeline(resolved: dict, fs: float) -> SyncPipeline:
    return SyncPipeline(
        detector=_detector(resolved, fs),
        weights=_weights(resolved),
        filter_spec=_filter_spec(resolved),
    )


def _channels(args: argparse.Namespace) -> list[str]:
    if not getattr(args, "channels", None):
        raise UsageError("--channels is required")
    labels = [c.strip() for c in args.channels.split(",") if c.strip()]
    if len(labels) < 2:
        raise UsageError("--channels needs at least two comma-separated labels")
    return labels


def _load_trains(record: MultiChannelRecord, labels: list[str], resolved: dict, fs: float):
    """Group trains: detected from raw channels, or taken verbatim as 0/1."""
    sub = record.select(labels)
    if resolved.get("as_trains"):
        return [
            trains_from_matrix(sub.samples, sub.labels)[label] for label in labels
        ]
    pipeline = _pipeline(resolved, fs)
    if pipeline.filter_spec is not None:
        from .filtering import apply_filter_spec

        sub = apply_filter_spec(sub, pipeline.filter_spec)
    detected = detect_record(sub, pipeline.detector)
    return [detected[label] for label in labels]


def _parse_interval(text: str | None, n: int) -> tuple[int, int]:
    if text is None:
        return 0, n
    lo, hi = _parse_pair(text, "interval", int)
    return lo, hi


# --------------------------------------------------------------------------
# subcommand handlers


def _cmd_weights(args: argparse.Namespace) -> int:
    used = ["a0", "tau", "density", "scale"]
    resolved = _resolve(args, used)
    w = _weights(resolved)
    lines = ["j,a_j"]
    for j in range(-w.n, w.n + 1):
        lines.append(f"{j},{_fmt(w.weight(j))}")
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    _write_sidecar(_sidecar_path(args, "weights", args.output), "weights", resolved)
    return 0


def _cmd_peaks(args: argparse.Namespace) -> int:
    used = ["band", "notch", "no_filter", "window", "mult", "polarity"]
    resolved = _resolve(args, used)
    record = read_record(args.input, args.fs)
    spec = _filter_spec(resolved)
    if spec is not None:
        from .filtering import apply_filter_spec

        record = apply_filter_spec(record, spec)
    cfg = _detector(resolved, args.fs)
    trains = detect_record(record, cfg)
    os.makedirs(args.output_dir, exist_ok=True)
    if args.as_train:
        path = os.path.join(args.output_dir, "trains.csv")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(record.labels)
            matrix = np.stack([trains[label].indicators for label in record.labels])
            for t in range(record.n_samples):
                writer.writerow(int(v) for v in matrix[:, t])
        primary = path
    else:
        for label in record.labels:
            path = os.path.join(args.output_dir, f"{label}_peaks.csv")
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["index"])
                for idx in trains[label].peak_indices:
                    writer.writerow([int(idx)])
    resolved["fs"] = args.fs
    resolved["threads"] = _threads(resolved)
    _write_sidecar(os.path.join(args.output_dir, "peaks.meta.json"), "peaks", resolved)
    return 0


def _cmd_sync(args: argparse.Namespace) -> int:
    used = ["band", "notch", "no_filter", "window", "mult", "polarity",
            "a0", "tau", "density", "scale", "as_trains", "threads"]
    resolved = _resolve(args, used)
    labels = _channels(args)
    record = read_record(args.input, args.fs)
    trains = _load_trains(record, labels, resolved, args.fs)
    w = _weights(resolved)
    if args.pairwise:
        if len(trains) != 2:
            raise UsageError("--pairwise requires exactly two channels")
        series = pairwise_sync(trains[0], trains[1], w)
    else:
        series = multi_sync(trains, w)
    write_series(args.output, range(len(series)), series.values)
    resolved["fs"] = args.fs
    resolved["channels"] = labels
    _write_sidecar(_sidecar_path(args, "sync", args.output), "sync", resolved)
    return 0


def _cmd_compound(args: argparse.Namespace) -> int:
    used = ["band", "notch", "no_filter", "window", "mult", "polarity",
            "a0", "tau", "density", "scale", "as_trains"]
    resolved = _resolve(args, used)
    labels = _channels(args)
    record = read_record(args.input, args.fs)
    trains = _load_trains(record, labels, resolved, args.fs)
    series = multi_sync(trains, _weights(resolved))
    t0, t1 = _parse_interval(args.interval, len(series))
    phi_bar = compound(series, t0, t1 - t0)
    sys.stdout.write(_fmt(phi_bar) + "\n")
    resolved.update({"fs": args.fs, "channels": labels, "interval": [t0, t1]})
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(
                {"members": sorted(labels), "interval": [t0, t1], "phi_bar": phi_bar},
                fh, indent=2, sort_keys=True,
            )
            fh.write("\n")
    _write_sidecar(_sidecar_path(args, "compound", args.output), "compound", resolved)
    return 0


def _cmd_significance(args: argparse.Namespace) -> int:
    used = ["band", "notch", "no_filter", "window", "mult", "polarity",
            "a0", "tau", "density", "scale", "surrogates", "percentile", "seed"]
    resolved = _resolve(args, used)
    labels = _channels(args)
    record = read_record(args.input, args.fs)
    pipeline = _pipeline(resolved, args.fs)
    cfg = SurrogateConfig(
        count=int(resolved["surrogates"]),
        percentile=float(resolved["percentile"]),
        seed=int(resolved["seed"]),
    )
    pooled = surrogate_pool(record, labels, pipeline, cfg)
    threshold = nearest_rank_percentile(pooled, cfg.percentile)
    sys.stdout.write(_fmt(threshold) + "\n")
    if args.dump_pooled:
        with open(args.dump_pooled, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["value"])
            for v in pooled:
                writer.writerow([_fmt(v)])
    resolved.update({"fs": args.fs, "channels": labels, "rng_algorithm": RNG_ALGORITHM})
    _write_sidecar(_sidecar_path(args, "significance", args.dump_pooled), "significance", resolved)
    return 0


def _cmd_eigcorr(args: argparse.Namespace) -> int:
    used = ["m", "hop"]
    resolved = _resolve(args, used)
    labels = _channels(args)
    record = read_record(args.input, args.fs)
    m = int(resolved["m"]) if resolved["m"] is not None else int(round(4 * args.fs))
    hop = int(resolved["hop"]) if resolved["hop"] is not None else int(round(args.fs))
    track = eigen_track(record, labels, m, hop)
    with open(args.output, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["center"] + [f"l{i + 1}" for i in range(len(labels))])
        for center, row in zip(track.window_centers, track.eigenvalues):
            writer.writerow([int(center)] + [_fmt(v) for v in row])
    resolved.update({"fs": args.fs, "channels": labels, "m": m, "hop": hop})
    _write_sidecar(_sidecar_path(args, "eigcorr", args.output), "eigcorr", resolved)
    return 0


def _cmd_rank(args: argparse.Namespace) -> int:
    used = ["band", "notch", "no_filter", "window", "mult", "polarity",
            "a0", "tau", "density", "scale", "as_trains"]
    resolved = _resolve(args, used)
    if not args.groups:
        raise UsageError("--groups is required")
    groups = []
    for chunk in args.groups.split(";"):
        labels = [c.strip() for c in chunk.split(",") if c.strip()]
        if len(labels) < 2:
            raise UsageError(f"group {chunk!r} needs at least two labels")
        groups.append(labels)
    record = read_record(args.input, args.fs)
    all_labels = sorted({label for group in groups for label in group})
    trains = dict(zip(all_labels, _load_trains(record, all_labels, resolved, args.fs)))
    w = _weights(resolved)
    interval = None
    if args.interval:
        interval = _parse_pair(args.interval, "interval", int)
    scores = rank_groups(trains, groups, w, interval)
    payload = [
        {"members": list(s.members), "phi_bar": s.phi_bar} for s in scores
    ]
    text = json.dumps(payload, indent=2) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    resolved.update({"fs": args.fs, "groups": groups})
    _write_sidecar(_sidecar_path(args, "rank", args.output), "rank", resolved)
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    segment = None
    if args.segment:
        segment = _parse_pair(args.segment, "segment", int)
    spec = SynthSpec(
        r=args.r,
        n_samples=args.n,
        base_rate=args.rate,
        coupling=args.coupling,
        jitter_std=args.jitter,
        segment=segment,
        seed=args.seed,
        emit=args.emit,
        sample_rate_hz=args.fs,
    )
    result = generate(spec)
    if spec.emit == "raw":
        write_record(args.output, result, binary=args.binary)
    else:
        labels = list(result.keys())
        with open(args.output, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(labels)
            matrix = np.stack([result[label].indicators for label in labels])
            for t in range(spec.n_samples):
                writer.writerow(int(v) for v in matrix[:, t])
    config = {
        "r": spec.r, "n": spec.n_samples, "rate": spec.base_rate,
        "coupling": spec.coupling, "jitter": spec.jitter_std,
        "segment": list(segment) if segment else None,
        "seed": spec.seed, "emit": spec.emit, "fs": spec.sample_rate_hz,
        "rng_algorithm": RNG_ALGORITHM,
    }
    _write_sidecar(_sidecar_path(args, "simulate", args.output), "simulate", config)
    return 0


def _cmd_sweep_a0(args: argparse.Namespace) -> int:
    used = ["band", "notch", "no_filter", "window", "mult", "polarity",
            "tau", "density", "scale", "grid", "as_trains"]
    resolved = _resolve(args, used)
    labels = _channels(args)
    record = read_record(args.input, args.fs)
    trains = _load_trains(record, labels, resolved, args.fs)
    seg_lo, seg_hi = _parse_pair(args.segment, "segment", int)
    grid = _parse_grid(resolved["grid"])
    rows = []
    for a0 in grid:
        w = build_weights(a0, float(resolved["tau"]),
                          density_from_name(resolved["density"], float(resolved["scale"])))
        series = multi_sync(trains, w)
        phi_segment = compound(series, seg_lo, seg_hi - seg_lo)
        # Background: complement of the segment, averaged over both sides.
        background_values = np.concatenate(
            [series.values[:seg_lo], series.values[seg_hi:]]
        )
        if background_values.size == 0:
            raise UsageError("--segment covers the whole record; no background left")
        phi_background = float(np.mean(background_values))
        rows.append((a0, phi_segment, phi_background))
    with open(args.output, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["a0", "phi_segment", "phi_background"])
        for a0, seg, bg in rows:
            writer.writerow([_fmt(a0), _fmt(seg), _fmt(bg)])
    resolved.update({"fs": args.fs, "channels": labels, "segment": [seg_lo, seg_hi]})
    _write_sidecar(_sidecar_path(args, "sweep-a0", args.output), "sweep-a0", resolved)
    return 0


# --------------------------------------------------------------------------
# parser


def _add_common(p: argparse.ArgumentParser, io: bool = True) -> None:
    p.add_argument("--config", help="JSON config file (defaults < config < flags)")
    p.add_argument("--meta", help="metadata sidecar path (default: derived)")
    p.add_argument("--threads", type=int, help="worker cap (PEAKSYNC_THREADS fallback)")
    if io:
        p.add_argument("--input", required=True, help="input record (CSV or PSYN binary)")
        p.add_argument("--fs", type=float, required=True, help="sample rate in Hz")


def _add_pipeline_flags(p: argparse.ArgumentParser, weights_too: bool = True) -> None:
    p.add_argument("--band", help="band-pass LO:HI in Hz (default 25:100)")
    p.add_argument("--notch", help="band-stop LO:HI in Hz (default 49:51, 'off' disables)")
    p.add_argument("--no-filter", dest="no_filter", action="store_true", default=None,
                   help="skip filtering")
    p.add_argument("--window", type=int, help="detector window in samples (default round(fs))")
    p.add_argument("--mult", type=float, help="detector std multiplier (default 2)")
    p.add_argument("--polarity", choices=["positive", "negative", "both"],
                   help="peak polarity (default positive)")
    if weights_too:
        p.add_argument("--a0", type=float, help="central coefficient (default 0.5)")
        p.add_argument("--tau", type=float, help="tail threshold (default 1e-3)")
        p.add_argument("--density", choices=["gaussian", "uniform"],
                       help="weight density family (default gaussian)")
        p.add_argument("--scale", type=float,
                       help="density scale: sigma or half-width (default 1)")
    p.add_argument("--as-trains", dest="as_trains", action="store_true", default=None,
                   help="input channels are already 0/1 peak trains")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="peaksync",
        description="Peak-based synchronization analysis for multichannel time series",
    )
    parser.add_argument("--version", action="version", version=f"peaksync {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("weights", help="print the lag-weight vector as CSV")
    _add_common(p, io=False)
    p.add_argument("--a0", type=float, help="central coefficient (default 0.5)")
    p.add_argument("--tau", type=float, help="tail threshold (default 1e-3)")
    p.add_argument("--density", choices=["gaussian", "uniform"])
    p.add_argument("--scale", type=float)
    p.add_argument("--output", help="write CSV here instead of stdout")
    p.set_defaults(handler=_cmd_weights)

    p = sub.add_parser("peaks", help="detect peaks per channel")
    _add_common(p)
    _add_pipeline_flags(p, weights_too=False)
    p.add_argument("--as-train", action="store_true",
                   help="emit one 0/1 matrix CSV instead of per-channel indices")
    p.add_argument("--output-dir", default=".", help="directory for outputs")
    p.set_defaults(handler=_cmd_peaks)

    p = sub.add_parser("sync", help="synchronization series for a channel group")
    _add_common(p)
    _add_pipeline_flags(p)
    p.add_argument("--channels", required=True, help="comma-separated labels")
    p.add_argument("--pairwise", action="store_true",
                   help="use the two-train formula (exactly two channels)")
    p.add_argument("--output", default="sync_series.csv")
    p.set_defaults(handler=_cmd_sync)

    p = sub.add_parser("compound", help="mean synchronization over an interval")
    _add_common(p)
    _add_pipeline_flags(p)
    p.add_argument("--channels", required=True)
    p.add_argument("--interval", help="half-open T0:T1 (default: full series)")
    p.add_argument("--output", help="optionally write a JSON result here")
    p.set_defaults(handler=_cmd_compound)

    p = sub.add_parser("significance", help="surrogate significance threshold")
    _add_common(p)
    _add_pipeline_flags(p)
    p.add_argument("--channels", required=True)
    p.add_argument("--surrogates", type=int, help="surrogate count (default 100)")
    p.add_argument("--percentile", type=float, help="percentile level (default 95)")
    p.add_argument("--seed", type=int, help="base seed (default 0)")
    p.add_argument("--dump-pooled", help="write the pooled values as CSV here")
    p.set_defaults(handler=_cmd_significance)

    p = sub.add_parser("eigcorr", help="sliding-window correlation eigenvalues")
    _add_common(p)
    p.add_argument("--channels", required=True)
    p.add_argument("--m", type=int, help="window length in samples (default 4*fs)")
    p.add_argument("--hop", type=int, help="window hop in samples (default fs)")
    p.add_argument("--output", default="eigcorr.csv")
    p.set_defaults(handler=_cmd_eigcorr)

    p = sub.add_parser("rank", help="rank channel groups by compound synchronization")
    _add_common(p)
    _add_pipeline_flags(p)
    p.add_argument("--groups", required=True,
                   help="semicolon-separated groups of comma-separated labels")
    p.add_argument("--interval", help="half-open T0:T1 (default: full series)")
    p.add_argument("--output", help="write the JSON array here instead of stdout")
    p.set_defaults(handler=_cmd_rank)

    p = sub.add_parser("simulate", help="generate a coupled synthetic fixture")
    _add_common(p, io=False)
    p.add_argument("--r", type=int, required=True, help="channel count")
    p.add_argument("--n", type=int, required=True, help="samples per channel")
    p.add_argument("--rate", type=float, required=True, help="peak probability per sample")
    p.add_argument("--coupling", type=float, default=0.0)
    p.add_argument("--jitter", type=float, default=0.0, help="lag noise std in samples")
    p.add_argument("--segment", help="half-open coupled segment T0:T1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--emit", choices=["trains", "raw"], default="trains")
    p.add_argument("--fs", type=float, default=256.0)
    p.add_argument("--binary", action="store_true", help="write raw output as PSYN binary")
    p.add_argument("--output", required=True)
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("sweep-a0", help="compound measure over a grid of central coefficients")
    _add_common(p)
    _add_pipeline_flags(p)
    p.add_argument("--channels", required=True)
    p.add_argument("--segment", required=True, help="half-open segment T0:T1 of interest")
    p.add_argument("--grid", help="a0 grid LO:STEP:HI (default 0.1:0.05:0.9)")
    p.add_argument("--output", default="sweep_a0.csv")
    p.set_defaults(handler=_cmd_sweep_a0)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"peaksync: usage error: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, ParseError) as exc:
        print(f"peaksync: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"peaksync: I/O error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
