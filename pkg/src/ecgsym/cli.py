"""Command-line interface.

Subcommands mirror the pipeline stages (ingest, filter, encode, features,
evaluate) plus full orchestration (run, pairs) and a synthetic-cluster
generator (synth). Exit codes: 0 success, 1 usage or configuration error,
2 data error (parsing, labeling, validity).
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from pathlib import Path

import numpy as np

from . import experiment as exp
from .distribution import LabeledFeatureSet, evaluate_distribution
from .encoding import EncoderSpec, SymbolSequence, encode
from .features import extract_features, lz_complexity, shannon_entropy
from .filtering import (
    PaddingPlan,
    Signal,
    filter_compensated,
    frequency_response,
    make_bandpass,
    make_highpass,
    make_lowpass,
)
from .records import (
    RecordHeader,
    load_labeled_segments,
    read_binary_record,
    read_label_sidecar,
    read_text_signal,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


_FILTER_KINDS = {"bandpass": make_bandpass, "lowpass": make_lowpass, "highpass": make_highpass}


def _add_text_signal_flags(p):
    p.add_argument("--column", type=int, default=0, help="text column holding the samples")
    p.add_argument("--delimiter", default=None, help="column delimiter (default: whitespace)")
    p.add_argument("--skip-header", action="store_true", help="skip the first row")
    p.add_argument("--sample-rate", type=float, default=360.0)


def _read_signal(args) -> Signal:
    return read_text_signal(
        args.input,
        column=args.column,
        delimiter=args.delimiter,
        skip_header=args.skip_header,
        sample_rate=args.sample_rate,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ecgsym", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="read records, attach labels, report segment counts")
    p.add_argument("records", nargs="+")
    p.add_argument("--sidecar", required=True, help="label file: record_id,start,end,label")
    p.add_argument("--format", choices=("text", "212"), default="text")
    p.add_argument("--channel", type=int, default=0)
    p.add_argument("--signal-count", type=int, default=2)
    p.add_argument("--segment-length", type=int, default=720)
    p.add_argument("--stride", type=int, default=None)
    p.add_argument("--out", default=None, help="directory for the segment manifest")
    _add_text_signal_flags(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("filter", help="compensated filtering of a text signal")
    p.add_argument("input", nargs="?", default=None)
    p.add_argument("--kind", choices=sorted(_FILTER_KINDS), default="bandpass")
    p.add_argument("--pad-before", type=int, default=65)
    p.add_argument("--pad-after", type=int, default=65)
    p.add_argument("--center-hz", type=float, default=8.0)
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.add_argument("--response", default=None, help="write magnitude/phase response CSV")
    p.add_argument("--response-points", type=int, default=512)
    _add_text_signal_flags(p)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("encode", help="encode a text signal into symbols")
    p.add_argument("input")
    p.add_argument("--method", choices=("slope", "threshold"), required=True)
    p.add_argument("--alphabet", type=int, choices=(2, 3), required=True)
    p.add_argument("--deviation", default=None, help="threshold offset, e.g. 1/12 or -0.05")
    p.add_argument("--zero-tol", type=float, default=0.0)
    p.add_argument("--out", default=None)
    _add_text_signal_flags(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("features", help="entropy/complexity of a symbol file")
    p.add_argument("input", help="file with one symbol per line")
    p.add_argument("--alphabet", type=int, choices=(2, 3), required=True)
    p.add_argument("--allow-short", action="store_true", help="skip the minimum-length check")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("evaluate", help="overlap report of a label,entropy,complexity CSV")
    p.add_argument("input")
    p.add_argument("--skip-header", action="store_true")
    p.add_argument("--mode", choices=("forall", "exists"), default="forall")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_evaluate)

    for name, help_text in (
        ("run", "full pipeline: ingest, filter, encode, featurize, evaluate, rank"),
        ("pairs", "best encoder per class pair"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("records", nargs="*")
        p.add_argument("--config", default=None, help="flat key = value configuration file")
        p.add_argument("--features", nargs="+", default=None, help="precomputed feature CSVs")
        p.add_argument("--sidecar", default=None)
        p.add_argument("--format", choices=("text", "212"), default=None)
        p.add_argument("--channel", type=int, default=None)
        p.add_argument("--signal-count", type=int, default=None)
        p.add_argument("--column", type=int, default=None)
        p.add_argument("--delimiter", default=None)
        p.add_argument("--skip-header", action="store_true")
        p.add_argument("--sample-rate", type=float, default=None)
        p.add_argument("--segment-length", type=int, default=None)
        p.add_argument("--stride", type=int, default=None)
        p.add_argument("--no-filter", action="store_true")
        p.add_argument("--pad-before", type=int, default=None)
        p.add_argument("--pad-after", type=int, default=None)
        p.add_argument("--grid", default=None, help="encoder grid file")
        p.add_argument("--zero-tol", type=float, default=None)
        p.add_argument("--mode", choices=("forall", "exists"), default=None)
        p.add_argument("--seed", type=int, default=None, help="accepted for config parity; unused")
        p.add_argument("--out", default=None)
        if name == "pairs":
            p.add_argument("--pairs", default=None, help="comma-separated A:B pairs (default: all)")
            p.set_defaults(func=cmd_pairs)
        else:
            p.set_defaults(func=cmd_run)

    p = sub.add_parser("synth", help="synthetic Gaussian clusters in the feature plane")
    p.add_argument("--classes", type=int, default=5)
    p.add_argument("--per-class", type=int, default=200)
    p.add_argument("--spread", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--centers", default=None, help="'x,y;x,y;...' (default: ring layout)")
    p.add_argument("--names", default=None, help="comma-separated class names")
    p.add_argument("--mode", choices=("forall", "exists"), default="forall")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_synth)

    return parser


def cmd_ingest(args) -> int:
    signals = {}
    for path in args.records:
        record_id = Path(path).stem
        if args.format == "212":
            header = RecordHeader(signal_count=args.signal_count, sample_rate=args.sample_rate)
            channels = read_binary_record(path, header)
            if args.channel >= len(channels):
                raise ValueError(f"{path}: no channel {args.channel}")
            signals[record_id] = channels[args.channel]
        else:
            signals[record_id] = read_text_signal(
                path,
                column=args.column,
                delimiter=args.delimiter,
                skip_header=args.skip_header,
                sample_rate=args.sample_rate,
            )
    spans = read_label_sidecar(args.sidecar)
    segments, skipped, dropped = load_labeled_segments(
        signals, spans, args.segment_length, args.stride
    )
    counts: dict[str, int] = {}
    for seg in segments:
        counts[seg.label] = counts.get(seg.label, 0) + 1
    for label in sorted(counts):
        print(f"{label}: {counts[label]}")
    print(
        f"total: {len(segments)} segments, {skipped} unlabeled windows skipped, "
        f"{dropped} trailing partial windows dropped"
    )
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        lines = ["record_id,start,label"]
        lines += [f"{s.record_id},{s.start},{s.label}" for s in segments]
        (out / "segments.csv").write_text("\n".join(lines) + "\n")
        print(f"manifest written to {out / 'segments.csv'}")
    return 0


def cmd_filter(args) -> int:
    coeffs = _FILTER_KINDS[args.kind]()
    if args.response:
        freqs = np.linspace(1e-3, args.sample_rate / 2 - 1e-3, args.response_points)
        h = frequency_response(coeffs, 2.0 * math.pi * freqs / args.sample_rate)
        lines = ["freq_hz,magnitude,phase_rad"]
        lines += [
            f"{float(f)!r},{float(abs(v))!r},{float(np.angle(v))!r}" for f, v in zip(freqs, h)
        ]
        Path(args.response).write_text("\n".join(lines) + "\n")
        print(f"response written to {args.response}")
        if args.input is None:
            return 0
    if args.input is None:
        raise UsageError("filter needs an input signal or --response")
    signal = _read_signal(args)
    plan = PaddingPlan(args.pad_before, args.pad_after)
    out = filter_compensated(coeffs, signal, plan, args.center_hz)
    text = "\n".join(repr(float(v)) for v in out.samples) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _encoder_from_flags(method: str, alphabet: int, deviation: str | None) -> EncoderSpec:
    if method == "threshold":
        if deviation is None:
            raise UsageError("threshold encoding requires --deviation")
        return EncoderSpec(method, alphabet, exp.parse_fraction(deviation))
    if deviation is not None:
        raise UsageError("slope encoding takes no --deviation")
    return EncoderSpec(method, alphabet)


def cmd_encode(args) -> int:
    try:
        spec = _encoder_from_flags(args.method, args.alphabet, args.deviation)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    seq = encode(_read_signal(args), spec, args.zero_tol)
    text = "\n".join(str(int(v)) for v in seq.symbols) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_features(args) -> int:
    values = []
    with open(args.input) as fh:
        for row_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                values.append(int(line))
            except ValueError:
                raise ValueError(f"{args.input}: row {row_no} is not a symbol: {line!r}") from None
    seq = SymbolSequence(np.array(values), args.alphabet)
    fv = extract_features(seq, enforce_min_length=not args.allow_short)
    text = (
        f"length = {len(seq)}\n"
        f"entropy_bits = {shannon_entropy(seq)!r}\n"
        f"entropy_norm = {fv.h_norm!r}\n"
        f"phrase_count = {lz_complexity(seq)}\n"
        f"complexity_norm = {fv.c_norm!r}\n"
    )
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_evaluate(args) -> int:
    labels, points = exp.load_features_csv(args.input, args.skip_header)
    dataset = LabeledFeatureSet.from_rows(labels, points)
    report = evaluate_distribution(dataset, args.mode)
    text = report.to_text()
    if args.out:
        Path(args.out).write_text(text)
    print(text, end="")
    return 0


def _bool_from_text(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {value!r}")


def _build_run_config(args) -> exp.ExperimentConfig:
    file_values = exp.load_config_file(args.config) if args.config else {}

    def pick(flag_value, key, cast, default):
        if flag_value is not None:
            return flag_value
        if key in file_values:
            return cast(file_values[key])
        return default

    records = list(args.records)
    if not records and "records" in file_values:
        records = file_values["records"].replace(",", " ").split()

    if args.grid is not None:
        encoders = exp.parse_grid_file(args.grid)
    elif "grid" in file_values:
        encoders = exp.parse_grid_file(file_values["grid"])
    else:
        encoders = exp.default_encoder_grid()

    if args.no_filter:
        filtering = False
    elif "filter" in file_values:
        filtering = _bool_from_text(file_values["filter"])
    else:
        filtering = True

    skip_header = args.skip_header or _bool_from_text(file_values.get("skip_header", "no"))

    return exp.ExperimentConfig(
        record_paths=tuple(records),
        sidecar=pick(args.sidecar, "sidecar", str, None),
        feature_files=tuple(args.features or ()),
        record_format=pick(args.format, "format", str, "text"),
        channel=pick(args.channel, "channel", int, 0),
        column=pick(args.column, "column", int, 0),
        delimiter=pick(args.delimiter, "delimiter", str, None),
        skip_header=skip_header,
        signal_count=pick(args.signal_count, "signal_count", int, 2),
        sample_rate=pick(args.sample_rate, "sample_rate", float, 360.0),
        segment_length=pick(args.segment_length, "segment_length", int, 720),
        stride=pick(args.stride, "stride", int, None),
        apply_filtering=filtering,
        pad_lead=pick(args.pad_before, "pad_before", int, exp.DEFAULT_PAD),
        pad_trail=pick(args.pad_after, "pad_after", int, exp.DEFAULT_PAD),
        encoders=tuple(encoders),
        zero_tol=pick(args.zero_tol, "zero_tol", float, 0.0),
        mode=pick(args.mode, "mode", str, "forall"),
        out_dir=pick(args.out, "out", str, None),
    )


def cmd_run(args) -> int:
    try:
        config = _build_run_config(args)
    except (ValueError, OSError) as exc:
        raise UsageError(str(exc)) from None
    result = exp.run_experiment(config)
    print(f"{'rank':<5} {'encoder':<28} {'overlap_per_element':>20}")
    for rank, idx in enumerate(result.ranking, start=1):
        entry = result.entries[idx]
        print(f"{rank:<5} {entry.label:<28} {entry.report.overlap_per_element:>20.6f}")
    if config.out_dir:
        print(f"reports and scatter data written to {config.out_dir}")
    return 0


def cmd_pairs(args) -> int:
    try:
        config = _build_run_config(args)
        if config.out_dir is not None:
            config = dataclasses.replace(config, out_dir=None)
        pairs = None
        if args.pairs:
            pairs = []
            for item in args.pairs.split(","):
                first, sep, second = item.partition(":")
                if not sep:
                    raise UsageError(f"pair {item!r} must be written first:second")
                pairs.append((first.strip(), second.strip()))
    except (ValueError, OSError) as exc:
        raise UsageError(str(exc)) from None
    result = exp.run_experiment(config)
    if pairs is None:
        names = result.entries[0].dataset.names
        pairs = [(a, b) for i, a in enumerate(names) for b in names[i + 1 :]]
    table = exp.pairwise_table(result, pairs, config.mode)
    text = exp.pair_table_text(table)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "pairs.txt").write_text(text)
    print(text, end="")
    return 0


def _ring_centers(m: int) -> np.ndarray:
    angles = 2.0 * math.pi * np.arange(m) / m
    return np.stack([0.5 + 0.25 * np.cos(angles), 0.6 + 0.25 * np.sin(angles)], axis=1)


def cmd_synth(args) -> int:
    if args.centers:
        try:
            centers = [[float(v) for v in part.split(",")] for part in args.centers.split(";")]
        except ValueError:
            raise UsageError(f"cannot parse centers {args.centers!r}") from None
    else:
        centers = _ring_centers(args.classes)
    names = args.names.split(",") if args.names else None
    dataset = exp.make_clusters(centers, args.per_class, args.spread, args.seed, names)
    report = evaluate_distribution(dataset, args.mode)
    print(report.to_text(), end="")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        lines = ["label,entropy,complexity"]
        for name, pts in dataset.classes.items():
            lines += [f"{name},{float(p[0])!r},{float(p[1])!r}" for p in pts]
        (out / "features.csv").write_text("\n".join(lines) + "\n")
        (out / "report.txt").write_text(report.to_text())
        print(f"features and report written to {out}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
