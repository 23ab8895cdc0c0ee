"""Digital filtering for short biosignal segments.

Implements the integer-coefficient low-pass / high-pass pair used for
QRS-band filtering at 360 Hz (and their cascade as a single band-pass),
direct-form evaluation of the difference equation, numerical group and
phase delay, and an edge-padding procedure that returns a filtered
segment phase-aligned with and equal in length to its input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_SAMPLE_RATE = 360.0
PASSBAND_CENTER_HZ = 8.0

# Extra padding beyond the filter length / delay, so the transient has
# fully decayed before the extraction window starts.
_PAD_MARGIN = 20


@dataclass(eq=False)
class Signal:
    """A uniformly sampled real-valued waveform."""

    samples: np.ndarray
    sample_rate: float = DEFAULT_SAMPLE_RATE

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.ndim != 1:
            raise ValueError("signal samples must be one-dimensional")
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")

    def __len__(self) -> int:
        return self.samples.size


@dataclass(eq=False)
class FilterCoefficients:
    """Rational transfer-function coefficients.

    The denominator is normalized on construction so its leading
    coefficient is 1; the numerator is rescaled accordingly.
    """

    numerator: np.ndarray
    denominator: np.ndarray

    def __post_init__(self):
        num = np.asarray(self.numerator, dtype=float)
        den = np.asarray(self.denominator, dtype=float)
        if num.size == 0 or den.size == 0:
            raise ValueError("numerator and denominator must be non-empty")
        if den[0] == 0:
            raise ValueError("leading denominator coefficient must be nonzero")
        self.numerator = num / den[0]
        self.denominator = den / den[0]

    @property
    def order(self) -> int:
        return max(self.numerator.size, self.denominator.size) - 1


def make_lowpass() -> FilterCoefficients:
    """Low-pass stage: (1 - 2z^-6 + z^-12) / (36 - 72z^-1 + 36z^-2)."""
    num = np.zeros(13)
    num[0], num[6], num[12] = 1.0, -2.0, 1.0
    return FilterCoefficients(num, np.array([36.0, -72.0, 36.0]))


def make_highpass() -> FilterCoefficients:
    """High-pass stage: (-1 + 32z^-16 - 32z^-17 + z^-32) / (32 - 32z^-1)."""
    num = np.zeros(33)
    num[0], num[16], num[17], num[32] = -1.0, 32.0, -32.0, 1.0
    return FilterCoefficients(num, np.array([32.0, -32.0]))


def make_bandpass() -> FilterCoefficients:
    """Cascade of the low-pass and high-pass stages as one rational form.

    Numerator is the degree-44 product of the stage numerators scaled by
    1/1152; denominator is (1 - z^-1)^3.
    """
    low = make_lowpass()
    high = make_highpass()
    num = np.convolve(low.numerator * 36.0, high.numerator * 32.0)
    den = 1152.0 * np.array([1.0, -3.0, 3.0, -1.0])
    return FilterCoefficients(num, den)


def apply_filter(coeffs: FilterCoefficients, signal: Signal) -> Signal:
    """Run the direct-form difference equation over a signal.

    Sample references before the start of the segment read as zero, so
    the output has exactly the length of the input.

    Parameters
    ----------
    coeffs : FilterCoefficients
        Normalized numerator/denominator of the filter.
    signal : Signal
        Input segment; must be non-empty.

    Returns
    -------
    Signal
        Filtered segment with the same length and sample rate.
    """
    x = signal.samples
    if x.size == 0:
        raise ValueError("empty signal")
    y = np.convolve(x, coeffs.numerator)[: x.size]
    a = coeffs.denominator
    if a.size > 1:
        # Feedback cannot be vectorized; denominators here are short.
        n_fb = a.size - 1
        for n in range(y.size):
            for j in range(1, min(n, n_fb) + 1):
                y[n] -= a[j] * y[n - j]
    return Signal(y, signal.sample_rate)


def frequency_response(coeffs: FilterCoefficients, omegas) -> np.ndarray:
    """Evaluate the transfer function at angular frequencies (rad/sample)."""
    w = np.atleast_1d(np.asarray(omegas, dtype=float))
    num = np.exp(-1j * np.outer(w, np.arange(coeffs.numerator.size))) @ coeffs.numerator
    den = np.exp(-1j * np.outer(w, np.arange(coeffs.denominator.size))) @ coeffs.denominator
    return num / den


def _check_response_defined(coeffs: FilterCoefficients, omega: float) -> complex:
    num = (np.exp(-1j * omega * np.arange(coeffs.numerator.size)) * coeffs.numerator).sum()
    den = (np.exp(-1j * omega * np.arange(coeffs.denominator.size)) * coeffs.denominator).sum()
    if abs(num) <= 1e-12 * np.abs(coeffs.numerator).sum():
        raise ValueError(f"phase undefined at omega={omega}: transfer-function zero")
    if abs(den) <= 1e-12 * np.abs(coeffs.denominator).sum():
        raise ValueError(f"phase undefined at omega={omega}: transfer-function pole")
    return num / den


def group_delay(coeffs: FilterCoefficients, omega: float, step: float = 1e-4) -> float:
    """Negative derivative of the unwrapped phase response, in samples.

    Evaluated by a central difference of width ``step`` around ``omega``,
    which must lie strictly inside (0, pi) and away from zeros of the
    transfer function.
    """
    if not 0.0 < omega < math.pi:
        raise ValueError("omega must lie strictly between 0 and pi")
    _check_response_defined(coeffs, omega)
    h = frequency_response(coeffs, [omega - step, omega + step])
    phase = np.unwrap(np.angle(h))
    return float(-(phase[1] - phase[0]) / (2.0 * step))


def alignment_delay(coeffs: FilterCoefficients, omega: float) -> float:
    """Delay in samples that superposes a filtered sinusoid on its input.

    This is the phase delay -angle(H)/omega, taken on the 2*pi branch
    closest to the group delay, so it tracks the envelope delay while
    matching the carrier phase. For a filter that is not exactly linear
    phase the two delays differ, and waveform alignment follows this
    quantity rather than the group delay.
    """
    tau_g = group_delay(coeffs, omega)
    h = _check_response_defined(coeffs, omega)
    d = -np.angle(h) / omega
    period = 2.0 * math.pi / omega
    return float(d + round((tau_g - d) / period) * period)


@dataclass(frozen=True)
class PaddingPlan:
    """Lead/trail pad lengths (in samples) for compensated filtering."""

    lead: int
    trail: int

    def __post_init__(self):
        if self.lead < 0 or self.trail < 0:
            raise ValueError("pad lengths must be non-negative")


def default_padding(
    coeffs: FilterCoefficients,
    sample_rate: float = DEFAULT_SAMPLE_RATE,
    center_hz: float = PASSBAND_CENTER_HZ,
) -> PaddingPlan:
    """Symmetric padding covering both the transient and the delay.

    Pad length is the larger of the coefficient counts and the rounded-up
    alignment delay at the passband center, plus a safety margin. For the
    band-pass cascade this gives 65 samples on each side.
    """
    omega = 2.0 * math.pi * center_hz / sample_rate
    delay = alignment_delay(coeffs, omega)
    k = max(coeffs.numerator.size, coeffs.denominator.size, math.ceil(delay)) + _PAD_MARGIN
    return PaddingPlan(k, k)


def filter_compensated(
    coeffs: FilterCoefficients,
    signal: Signal,
    plan: PaddingPlan | None = None,
    center_hz: float = PASSBAND_CENTER_HZ,
) -> Signal:
    """Filter a segment without losing samples to transient or delay.

    The segment is extended with replicas of its first sample on the left
    and its last sample on the right, filtered with :func:`apply_filter`,
    and a window of the original length is extracted starting at
    ``lead + round(alignment_delay)``. The result has the same length as
    the input and is phase-aligned with it at the passband center.

    Parameters
    ----------
    coeffs : FilterCoefficients
    signal : Signal
        Non-empty input segment.
    plan : PaddingPlan, optional
        Pad lengths; defaults to :func:`default_padding`. The lead must
        cover the filter order and the trail the extraction shift.
    center_hz : float
        Frequency at which the alignment delay is evaluated.
    """
    x = signal.samples
    if x.size == 0:
        raise ValueError("empty signal")
    omega = 2.0 * math.pi * center_hz / signal.sample_rate
    if plan is None:
        plan = default_padding(coeffs, signal.sample_rate, center_hz)
    shift = int(round(alignment_delay(coeffs, omega)))
    if plan.lead < coeffs.order or plan.trail < shift:
        raise ValueError(
            f"insufficient padding: need lead >= {coeffs.order} and trail >= {shift}, "
            f"got lead={plan.lead}, trail={plan.trail}"
        )
    padded = np.concatenate([np.full(plan.lead, x[0]), x, np.full(plan.trail, x[-1])])
    y = apply_filter(coeffs, Signal(padded, signal.sample_rate)).samples
    start = plan.lead + shift
    return Signal(y[start : start + x.size], signal.sample_rate)
