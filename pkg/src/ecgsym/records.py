"""Reading ECG records and slicing them into labeled analysis segments.

Supports the 212-format binary packing (two 12-bit two's-complement
samples per 3-byte group) and one-sample-per-row delimited text. Segment
class labels come from a sidecar file mapping sample ranges of a record
to a label.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .filtering import DEFAULT_SAMPLE_RATE, Signal

DEFAULT_SEGMENT_LENGTH = 720
DEFAULT_GAIN = 200.0


@dataclass(frozen=True)
class RecordHeader:
    """Acquisition metadata for a stored record.

    ``samples_per_signal``, when given, truncates each channel to that
    many samples on read (212-format files have no end-of-data marker).
    """

    signal_count: int = 2
    sample_rate: float = DEFAULT_SAMPLE_RATE
    gain: float = DEFAULT_GAIN
    baseline: float = 0.0
    samples_per_signal: int | None = None

    def __post_init__(self):
        if self.signal_count < 1:
            raise ValueError("signal_count must be at least 1")
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        if self.gain <= 0:
            raise ValueError("gain must be positive")
        if self.samples_per_signal is not None and self.samples_per_signal < 1:
            raise ValueError("samples_per_signal must be positive")


def parse_format212(data: bytes, signal_count: int = 2) -> list[np.ndarray]:
    """Unpack a 212-format byte stream into per-signal sample arrays.

    Every 3-byte group holds two samples: the low nibble of the middle
    byte extends the first byte, the high nibble extends the third.
    Values are 12-bit two's complement, so the result lies in
    [-2048, 2047]. Consecutive samples cycle through the declared
    signals in order.
    """
    if signal_count < 1:
        raise ValueError("signal_count must be at least 1")
    if len(data) % 3 != 0:
        raise ValueError("truncated format-212 stream: length not divisible by 3")
    raw = np.frombuffer(data, dtype=np.uint8).reshape(-1, 3).astype(np.int32)
    first = ((raw[:, 1] & 0x0F) << 8) | raw[:, 0]
    second = ((raw[:, 1] & 0xF0) << 4) | raw[:, 2]
    samples = np.empty(2 * raw.shape[0], dtype=np.int32)
    samples[0::2] = first
    samples[1::2] = second
    samples[samples >= 2048] -= 4096
    usable = samples.size - samples.size % signal_count
    return [samples[ch:usable:signal_count].astype(np.int16) for ch in range(signal_count)]


def pack_format212(channels) -> bytes:
    """Interleave per-signal arrays and pack them as a 212-format stream.

    The total sample count must be even (the packing is pairwise); the
    inverse of :func:`parse_format212`.
    """
    arrays = [np.asarray(ch, dtype=np.int64) for ch in channels]
    length = arrays[0].size
    if any(a.size != length for a in arrays):
        raise ValueError("all channels must have equal length")
    flat = np.empty(length * len(arrays), dtype=np.int64)
    for i, arr in enumerate(arrays):
        flat[i :: len(arrays)] = arr
    if flat.size % 2 != 0:
        raise ValueError("total sample count must be even for pairwise packing")
    if flat.min() < -2048 or flat.max() > 2047:
        raise ValueError("samples out of 12-bit range")
    vals = np.where(flat < 0, flat + 4096, flat).astype(np.uint16)
    first, second = vals[0::2], vals[1::2]
    out = np.empty((first.size, 3), dtype=np.uint8)
    out[:, 0] = first & 0xFF
    out[:, 1] = ((first >> 8) & 0x0F) | (((second >> 8) & 0x0F) << 4)
    out[:, 2] = second & 0xFF
    return out.tobytes()


def read_binary_record(path, header: RecordHeader = RecordHeader()) -> list[Signal]:
    """Read a 212-format file into one Signal per declared channel."""
    data = Path(path).read_bytes()
    channels = parse_format212(data, header.signal_count)
    if header.samples_per_signal is not None:
        channels = [ch[: header.samples_per_signal] for ch in channels]
    return [Signal(ch.astype(float), header.sample_rate) for ch in channels]


def adc_to_millivolts(values, gain: float = DEFAULT_GAIN, baseline: float = 0.0) -> np.ndarray:
    return (np.asarray(values, dtype=float) - baseline) / gain


def millivolts_to_adc(values, gain: float = DEFAULT_GAIN, baseline: float = 0.0) -> np.ndarray:
    return np.rint(np.asarray(values, dtype=float) * gain + baseline)


def read_text_signal(
    path,
    column: int = 0,
    delimiter: str | None = None,
    skip_header: bool = False,
    sample_rate: float = DEFAULT_SAMPLE_RATE,
) -> Signal:
    """Read one column of a delimited text file as a Signal.

    ``delimiter=None`` splits on any whitespace. Raises with the 1-based
    row number when a row cannot be parsed.
    """
    values = []
    with open(path) as fh:
        for row_no, line in enumerate(fh, start=1):
            if skip_header and row_no == 1:
                continue
            line = line.strip()
            if not line:
                continue
            parts = line.split(delimiter) if delimiter else line.split()
            if column >= len(parts):
                raise ValueError(f"{path}: row {row_no} has no column {column}")
            try:
                values.append(float(parts[column]))
            except ValueError:
                raise ValueError(
                    f"{path}: row {row_no} column {column} is not a number: {parts[column]!r}"
                ) from None
    if not values:
        raise ValueError(f"{path}: no samples in column {column}")
    return Signal(np.array(values), sample_rate)


def segment_record(signal: Signal, length: int = DEFAULT_SEGMENT_LENGTH, stride: int | None = None):
    """Slice a record into fixed-length windows.

    Windows start every ``stride`` samples and must fit entirely inside
    the record; a trailing partial window is dropped and counted.

    Returns
    -------
    (windows, dropped) : windows is a list of (start_index, Signal);
        dropped is 1 if trailing samples could not fill a window, else 0.
    """
    if length < 1:
        raise ValueError("segment length must be at least 1")
    if stride is None:
        stride = length
    if stride < 1:
        raise ValueError("stride must be at least 1")
    n = len(signal)
    windows = []
    start = 0
    while start + length <= n:
        windows.append((start, Signal(signal.samples[start : start + length], signal.sample_rate)))
        start += stride
    dropped = 1 if start < n else 0
    return windows, dropped


@dataclass(frozen=True)
class LabelSpan:
    """Half-open sample range [start, end) of a record with a class label."""

    record_id: str
    start: int
    end: int
    label: str

    def __post_init__(self):
        if self.start < 0 or self.end <= self.start:
            raise ValueError(f"invalid span [{self.start}, {self.end}) for {self.record_id!r}")
        if not self.label:
            raise ValueError("label must be non-empty")


def read_label_sidecar(path, delimiter: str = ",") -> list[LabelSpan]:
    """Parse a sidecar of rows record_id, start_sample, end_sample, label."""
    spans = []
    with open(path) as fh:
        for row_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split(delimiter)]
            if len(parts) != 4:
                raise ValueError(f"{path}: row {row_no} needs 4 fields, got {len(parts)}")
            try:
                spans.append(LabelSpan(parts[0], int(parts[1]), int(parts[2]), parts[3]))
            except ValueError as exc:
                raise ValueError(f"{path}: row {row_no}: {exc}") from None
    return spans


@dataclass(eq=False)
class LabeledSegment:
    """A fixed-length analysis window with its class label."""

    segment: Signal
    label: str
    record_id: str
    start: int


def load_labeled_segments(
    signals: dict[str, Signal],
    spans: list[LabelSpan],
    length: int = DEFAULT_SEGMENT_LENGTH,
    stride: int | None = None,
):
    """Segment records and attach exactly one label to each window.

    A window takes the label of a span that fully contains it. Windows
    covered by spans with different labels raise; windows covered by no
    span are skipped and counted.

    Returns
    -------
    (segments, skipped, dropped) : list of LabeledSegment, the number of
        windows left unlabeled, and the number of records whose trailing
        samples could not fill a window.
    """
    for span in spans:
        if span.record_id not in signals:
            raise ValueError(f"sidecar references unknown record {span.record_id!r}")
    segments = []
    skipped = 0
    dropped = 0
    for record_id, signal in signals.items():
        windows, record_dropped = segment_record(signal, length, stride)
        dropped += record_dropped
        record_spans = [s for s in spans if s.record_id == record_id]
        for start, window in windows:
            covering = {s.label for s in record_spans if s.start <= start and start + length <= s.end}
            if len(covering) > 1:
                raise ValueError(
                    f"conflicting labels {sorted(covering)} for {record_id!r} "
                    f"window [{start}, {start + length})"
                )
            if not covering:
                skipped += 1
                continue
            segments.append(LabeledSegment(window, covering.pop(), record_id, start))
    return segments, skipped, dropped
