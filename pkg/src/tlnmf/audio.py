"""Signal ingestion: WAV reading, framing with overlap, analysis windowing."""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.io.wavfile

from .errors import (
    CorruptHeader,
    DimensionMismatch,
    InvalidParameter,
    SignalTooShort,
    UnsupportedFormat,
)
from .objective import EPS

WINDOWS = ("sine", "hann", "rect")

_PCM_SCALES = {
    np.dtype(np.int16): 2.0 ** 15,
    np.dtype(np.int32): 2.0 ** 31,
}


@dataclass(frozen=True)
class Signal:
    """Mono signal with samples in [-1, 1]."""

    samples: np.ndarray
    sample_rate_hz: int


@dataclass(frozen=True)
class FramesMatrix:
    """Windowed, overlapping signal segments; column n starts at n * hop."""

    data: np.ndarray  # (frame_length, n_frames)
    frame_length: int
    hop: int
    window: str
    sample_rate_hz: int

    @property
    def n_frames(self):
        return self.data.shape[1]


def analysis_window(name, m):
    """Analysis window of length m: 'sine', 'hann' or 'rect'.

    Both tapered windows use the half-sample-offset convention, so no
    coefficient is exactly zero.
    """
    if name not in WINDOWS:
        raise InvalidParameter(f"unknown window {name!r}; choose from {WINDOWS}")
    if name == "rect":
        return np.ones(m)
    phase = np.pi * (np.arange(m) + 0.5) / m
    if name == "sine":
        return np.sin(phase)
    return np.sin(phase) ** 2  # hann


def read_wav(path):
    """Read a RIFF WAV file as a normalized mono Signal.

    PCM 16/32-bit, 8-bit unsigned and IEEE-float subformats are accepted;
    multichannel audio is averaged down to mono. Integer data is scaled
    by its full-scale value; float data is rescaled only if it exceeds
    [-1, 1].
    """
    with open(path, "rb") as fh:
        head = fh.read(12)
    if len(head) < 12 or head[:4] != b"RIFF" or head[8:12] != b"WAVE":
        raise CorruptHeader(f"{path} is not a RIFF/WAVE file")
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # scipy warns on unknown chunks
            rate, data = scipy.io.wavfile.read(path)
    except ValueError as exc:
        raise UnsupportedFormat(f"cannot decode {path}: {exc}") from None
    except EOFError as exc:
        raise CorruptHeader(f"{path} is truncated: {exc}") from None

    if data.size == 0:
        raise CorruptHeader(f"{path} contains no samples")
    if data.ndim == 2:
        samples = data.astype(np.float64).mean(axis=1)
    else:
        samples = data.astype(np.float64)
    if data.dtype in _PCM_SCALES:
        samples /= _PCM_SCALES[data.dtype]
    elif data.dtype == np.uint8:
        samples = (samples - 128.0) / 128.0
    elif data.dtype.kind == "f":
        peak = np.max(np.abs(samples))
        if peak > 1.0:
            samples /= peak
    else:
        raise UnsupportedFormat(f"unsupported sample dtype {data.dtype}")
    if not np.all(np.isfinite(samples)):
        raise CorruptHeader(f"{path} contains non-finite samples")
    return Signal(samples=samples, sample_rate_hz=int(rate))


def frame_signal(sig, frame_ms=40.0, overlap_fraction=0.5, window="sine",
                 frame_samples=None):
    """Slice a signal into windowed overlapping frames.

    The frame length is round(frame_ms * fs / 1000) unless overridden
    with ``frame_samples`` (round durations rarely give round sample
    counts); hop = round(length * (1 - overlap_fraction)).
    """
    if not 0.0 <= overlap_fraction < 1.0:
        raise InvalidParameter(
            f"overlap_fraction must be in [0, 1), got {overlap_fraction}"
        )
    if frame_samples is not None:
        m = int(frame_samples)
    else:
        m = round(frame_ms * sig.sample_rate_hz / 1000.0)
    if m < 2:
        raise InvalidParameter(f"frame length must be >= 2 samples, got {m}")
    samples = np.asarray(sig.samples, dtype=np.float64)
    if samples.size < m:
        raise SignalTooShort(
            f"signal has {samples.size} samples, shorter than one frame ({m})"
        )
    hop = round(m * (1.0 - overlap_fraction))
    hop = max(hop, 1)
    n = (samples.size - m) // hop + 1
    win = analysis_window(window, m)
    starts = hop * np.arange(n)
    frames = samples[starts[None, :] + np.arange(m)[:, None]] * win[:, None]
    return FramesMatrix(
        data=frames,
        frame_length=m,
        hop=hop,
        window=window,
        sample_rate_hz=sig.sample_rate_hz,
    )


def spectrogram(y, phi):
    """Power spectrogram max((phi @ y)^2, EPS) of a frames matrix."""
    if isinstance(y, FramesMatrix):
        y = y.data
    y = np.asarray(y, dtype=np.float64)
    phi = np.asarray(phi, dtype=np.float64)
    if phi.ndim != 2 or phi.shape != (y.shape[0], y.shape[0]):
        raise DimensionMismatch(
            f"transform shape {phi.shape} does not match frame length {y.shape[0]}"
        )
    x = phi @ y
    return np.maximum(x * x, EPS)
