"""End-to-end experiment orchestration.

Ingests labeled records, filters each segment with the compensated
band-pass, encodes under every scheme in a grid, extracts entropy and
complexity, evaluates the class overlap per scheme, and ranks schemes by
ascending per-element overlap (lower overlap = better separation). Also
provides a synthetic Gaussian-cluster generator for validating the
overlap metric without signal data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .distribution import DistributionReport, LabeledFeatureSet, evaluate_distribution
from .encoding import SLOPE, THRESHOLD, EncoderSpec, encode
from .features import extract_features, min_valid_length
from .filtering import (
    DEFAULT_SAMPLE_RATE,
    PaddingPlan,
    Signal,
    filter_compensated,
    make_bandpass,
)
from .records import (
    DEFAULT_SEGMENT_LENGTH,
    RecordHeader,
    read_binary_record,
    read_label_sidecar,
    read_text_signal,
    load_labeled_segments,
)

BINARY_DEVIATIONS = (Fraction(-1, 10), Fraction(-1, 20), Fraction(1, 20), Fraction(1, 10))
TERNARY_DEVIATIONS = (
    Fraction(1, 8),
    Fraction(1, 10),
    Fraction(1, 12),
    Fraction(1, 14),
    Fraction(1, 16),
    Fraction(1, 20),
)
DEFAULT_PAD = 65


def default_encoder_grid() -> list[EncoderSpec]:
    """Both slope schemes plus the stock deviation grids for thresholds."""
    grid = [EncoderSpec(SLOPE, 2), EncoderSpec(SLOPE, 3)]
    grid += [EncoderSpec(THRESHOLD, 2, float(e)) for e in BINARY_DEVIATIONS]
    grid += [EncoderSpec(THRESHOLD, 3, float(e)) for e in TERNARY_DEVIATIONS]
    return grid


def parse_fraction(text: str) -> float:
    """Parse '1/12', '-0.05' or '3' into a float."""
    return float(Fraction(text))


def parse_encoder_line(line: str) -> EncoderSpec:
    """Parse a grid line: 'slope binary' or 'threshold ternary 1/12'."""
    tokens = line.split()
    if len(tokens) < 2:
        raise ValueError(f"grid line needs method and alphabet: {line!r}")
    method = tokens[0].lower()
    alpha_word = tokens[1].lower()
    alphabet = {"binary": 2, "2": 2, "ternary": 3, "3": 3}.get(alpha_word)
    if alphabet is None:
        raise ValueError(f"unknown alphabet {tokens[1]!r} in grid line {line!r}")
    if method == SLOPE:
        if len(tokens) != 2:
            raise ValueError(f"slope entries take no deviation: {line!r}")
        return EncoderSpec(SLOPE, alphabet)
    if method == THRESHOLD:
        if len(tokens) != 3:
            raise ValueError(f"threshold entries need a deviation: {line!r}")
        return EncoderSpec(THRESHOLD, alphabet, parse_fraction(tokens[2]))
    raise ValueError(f"unknown method {tokens[0]!r} in grid line {line!r}")


def parse_grid_file(path) -> list[EncoderSpec]:
    grid = []
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if line:
                grid.append(parse_encoder_line(line))
    if not grid:
        raise ValueError(f"{path}: empty encoder grid")
    return grid


def load_config_file(path) -> dict[str, str]:
    """Read a flat 'key = value' configuration file."""
    values: dict[str, str] = {}
    with open(path) as fh:
        for row_no, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}: row {row_no} is not 'key = value'")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    return values


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a full pipeline run needs.

    Input is either labeled records (``record_paths`` + ``sidecar``) or
    precomputed feature files (``feature_files`` of label,entropy,
    complexity rows); the encoder grid applies only to record input.
    """

    record_paths: tuple[str, ...] = ()
    sidecar: str | None = None
    feature_files: tuple[str, ...] = ()
    record_format: str = "text"
    channel: int = 0
    column: int = 0
    delimiter: str | None = None
    skip_header: bool = False
    signal_count: int = 2
    sample_rate: float = DEFAULT_SAMPLE_RATE
    segment_length: int = DEFAULT_SEGMENT_LENGTH
    stride: int | None = None
    apply_filtering: bool = True
    pad_lead: int = DEFAULT_PAD
    pad_trail: int = DEFAULT_PAD
    encoders: tuple[EncoderSpec, ...] = field(default_factory=lambda: tuple(default_encoder_grid()))
    zero_tol: float = 0.0
    mode: str = "forall"
    out_dir: str | None = None

    def __post_init__(self):
        if self.feature_files:
            if self.record_paths:
                raise ValueError("give either record paths or feature files, not both")
        else:
            if not self.record_paths:
                raise ValueError("no input: need record paths or feature files")
            if self.sidecar is None:
                raise ValueError("record input requires a label sidecar")
            if not self.encoders:
                raise ValueError("encoder grid is empty")
        if self.record_format not in ("text", "212"):
            raise ValueError("record_format must be 'text' or '212'")
        if self.mode not in ("forall", "exists"):
            raise ValueError("mode must be 'forall' or 'exists'")


@dataclass(eq=False)
class EncoderRun:
    """Result of one grid entry: per-segment feature rows and the report."""

    label: str
    spec: EncoderSpec | None
    rows: list[tuple[str, float, float]]
    dataset: LabeledFeatureSet
    report: DistributionReport


@dataclass(eq=False)
class ExperimentResult:
    entries: list[EncoderRun]
    ranking: list[int]
    class_counts: dict[str, int]
    skipped_windows: int = 0
    dropped_partials: int = 0

    @property
    def best(self) -> EncoderRun:
        return self.entries[self.ranking[0]]


def rank_entries(entries: list[EncoderRun]) -> list[int]:
    """Indices sorted by ascending per-element overlap, grid order on ties."""
    return sorted(range(len(entries)), key=lambda i: entries[i].report.overlap_per_element)


def load_features_csv(path, skip_header: bool = False):
    """Read label,entropy,complexity rows; returns (labels, points)."""
    labels, points = [], []
    with open(path) as fh:
        for row_no, raw in enumerate(fh, start=1):
            if skip_header and row_no == 1:
                continue
            line = raw.strip()
            if not line:
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 3:
                raise ValueError(f"{path}: row {row_no} needs label,entropy,complexity")
            try:
                points.append((float(parts[1]), float(parts[2])))
            except ValueError:
                raise ValueError(f"{path}: row {row_no} has non-numeric features") from None
            labels.append(parts[0])
    if not labels:
        raise ValueError(f"{path}: no feature rows")
    return labels, points


def make_clusters(centers, per_class, spread=0.05, seed: int = 0, names=None) -> LabeledFeatureSet:
    """Isotropic Gaussian clusters at given centers, deterministic per seed."""
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    m = centers.shape[0]
    if m < 2:
        raise ValueError("need at least two cluster centers")
    sizes = np.broadcast_to(np.asarray(per_class, dtype=int), (m,))
    spreads = np.broadcast_to(np.asarray(spread, dtype=float), (m,))
    if (sizes < 1).any():
        raise ValueError("per_class must be at least 1")
    if (spreads < 0).any():
        raise ValueError("spread must be non-negative")
    if names is None:
        names = [f"C{i + 1}" for i in range(m)]
    elif len(names) != m:
        raise ValueError("need one name per center")
    rng = np.random.default_rng(seed)
    classes = {}
    for name, center, size, sigma in zip(names, centers, sizes, spreads):
        classes[str(name)] = center + rng.normal(0.0, sigma, size=(int(size), centers.shape[1]))
    return LabeledFeatureSet(classes)


def _read_record_signal(path: str, config: ExperimentConfig) -> Signal:
    if config.record_format == "212":
        header = RecordHeader(signal_count=config.signal_count, sample_rate=config.sample_rate)
        channels = read_binary_record(path, header)
        if config.channel >= len(channels):
            raise ValueError(f"{path}: no channel {config.channel}")
        return channels[config.channel]
    return read_text_signal(
        path,
        column=config.column,
        delimiter=config.delimiter,
        skip_header=config.skip_header,
        sample_rate=config.sample_rate,
    )


def _check_grid_lengths(config: ExperimentConfig) -> None:
    for spec in config.encoders:
        produced = config.segment_length - (1 if spec.method == SLOPE else 0)
        bound = min_valid_length(spec.alphabet_size)
        if produced < bound:
            raise ValueError(
                f"grid entry {spec.label}: segment length {config.segment_length} yields "
                f"sequences of length {produced}, below the minimum valid length {bound} "
                f"for alphabet size {spec.alphabet_size}"
            )


def _ingest(config: ExperimentConfig):
    signals = {}
    for path in config.record_paths:
        record_id = Path(path).stem
        if record_id in signals:
            raise ValueError(f"duplicate record id {record_id!r}")
        signals[record_id] = _read_record_signal(path, config)
    spans = read_label_sidecar(config.sidecar)
    segments, skipped, dropped = load_labeled_segments(
        signals, spans, config.segment_length, config.stride
    )
    if not segments:
        raise ValueError("no labeled segments after ingestion")
    present = {seg.label for seg in segments}
    for label in sorted({s.label for s in spans}):
        if label not in present:
            raise ValueError(f"class {label!r} ended up empty after ingestion")
    return segments, skipped, dropped


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Execute the configured pipeline and rank the grid entries.

    With feature-file input the encoding stage is bypassed and a single
    entry labeled 'precomputed' is produced.
    """
    if config.feature_files:
        labels, points = [], []
        for path in config.feature_files:
            ls, ps = load_features_csv(path, config.skip_header)
            labels += ls
            points += ps
        dataset = LabeledFeatureSet.from_rows(labels, points)
        rows = [(lab, float(p[0]), float(p[1])) for lab, p in zip(labels, points)]
        report = evaluate_distribution(dataset, config.mode)
        entries = [EncoderRun("precomputed", None, rows, dataset, report)]
        counts = dict(zip(dataset.names, dataset.sizes))
        result = ExperimentResult(entries, rank_entries(entries), counts)
    else:
        _check_grid_lengths(config)
        segments, skipped, dropped = _ingest(config)
        plan = PaddingPlan(config.pad_lead, config.pad_trail)
        bandpass = make_bandpass()
        prepared = []
        for seg in segments:
            signal = seg.segment
            if config.apply_filtering:
                signal = filter_compensated(bandpass, signal, plan)
            prepared.append((seg.label, signal))
        entries = []
        for spec in config.encoders:
            rows = []
            for label, signal in prepared:
                fv = extract_features(encode(signal, spec, config.zero_tol))
                rows.append((label, fv.h_norm, fv.c_norm))
            dataset = LabeledFeatureSet.from_rows(
                [r[0] for r in rows], [(r[1], r[2]) for r in rows]
            )
            report = evaluate_distribution(dataset, config.mode)
            entries.append(EncoderRun(spec.label, spec, rows, dataset, report))
        counts = dict(zip(entries[0].dataset.names, entries[0].dataset.sizes))
        result = ExperimentResult(entries, rank_entries(entries), counts, skipped, dropped)
    if config.out_dir is not None:
        write_reports(result.entries, config.out_dir)
        emit_plot_data(result.entries, config.out_dir)
    return result


@dataclass(frozen=True)
class PairRow:
    """Best grid entry for one class pair, by per-element overlap."""

    first: str
    second: str
    encoder: str
    overlap_per_element: float


def pairwise_table(result: ExperimentResult, pairs, mode: str = "forall") -> list[PairRow]:
    """Best encoder per class pair over the already-computed features."""
    table = []
    for first, second in pairs:
        best_label, best_value = None, None
        for idx in range(len(result.entries)):
            entry = result.entries[idx]
            sub = entry.dataset.subset([first, second])
            value = evaluate_distribution(sub, mode).overlap_per_element
            if best_value is None or value < best_value:
                best_label, best_value = entry.label, value
        table.append(PairRow(first, second, best_label, best_value))
    return table


def pair_table_text(table: list[PairRow]) -> str:
    lines = [f"{'pair':<24} {'encoder':<28} {'overlap_per_element':>20}"]
    for row in table:
        lines.append(
            f"{row.first + ' vs ' + row.second:<24} {row.encoder:<28} {row.overlap_per_element:>20.6f}"
        )
    return "\n".join(lines) + "\n"


def _slug(label: str) -> str:
    return "".join(c if c.isalnum() or c in "-." else "_" for c in label)


def write_reports(entries: list[EncoderRun], out_dir) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for i, entry in enumerate(entries):
        path = out / f"report_{i:02d}_{_slug(entry.label)}.txt"
        path.write_text(f"encoder = {entry.label}\n" + entry.report.to_text())
        paths.append(path)
    return paths


def emit_plot_data(entries: list[EncoderRun], out_dir) -> list[Path]:
    """Write per-encoder scatter files and the ranked summary table."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for i, entry in enumerate(entries):
        path = out / f"scatter_{i:02d}_{_slug(entry.label)}.csv"
        lines = ["label,entropy,complexity"]
        lines += [f"{label},{h!r},{c!r}" for label, h, c in entry.rows]
        path.write_text("\n".join(lines) + "\n")
        paths.append(path)
    summary = out / "summary.csv"
    lines = ["rank,encoder,total_overlap,overlap_per_element,overlap_per_class,mode"]
    for rank, idx in enumerate(rank_entries(entries), start=1):
        rep = entries[idx].report
        lines.append(
            f"{rank},{entries[idx].label},{rep.total_overlap},"
            f"{rep.overlap_per_element!r},{rep.overlap_per_class!r},{rep.mode}"
        )
    summary.write_text("\n".join(lines) + "\n")
    paths.append(summary)
    return paths
