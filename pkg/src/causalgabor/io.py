"""WAV input and spectrogram output (CSV, binary PGM, JSON)."""

from dataclasses import dataclass
import csv
import json
import os
import warnings

import numpy as np
from scipy.io import wavfile

from . import __version__
from .errors import AudioFormatError, AudioIOError, ConfigurationError, InputError
from .transform import Spectrogram, midi_axis, to_db

FORMATS = ("csv", "pgm", "json")
DEFAULT_DB_CLIP = -60.0
DISPLAY_DECIMATION = 256


@dataclass
class AudioBuffer:
    samples: np.ndarray
    sample_rate: float
    channels: int = 1

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.ndim != 1 or self.samples.size == 0:
            raise InputError("audio must be a non-empty mono signal")
        if not np.all(np.isfinite(self.samples)):
            raise InputError("audio contains non-finite values")


def _normalize(data):
    kind = data.dtype.kind
    if kind == "f":
        return data.astype(float)
    if kind == "u" and data.dtype.itemsize == 1:
        return (data.astype(float) - 128.0) / 128.0
    if kind == "i":
        # 24-bit files are delivered left-aligned in int32
        return data.astype(float) / float(2 ** (8 * data.dtype.itemsize - 1))
    raise AudioFormatError(f"unsupported sample type {data.dtype}")


def read_wav(path):
    """Read a PCM or float WAV file, average channels to mono, scale to [-1, 1]."""
    if not os.path.exists(path):
        raise AudioIOError(f"no such file: {path}")
    try:
        with warnings.catch_warnings():
            # scipy only warns about a data chunk cut short
            warnings.simplefilter("error", wavfile.WavFileWarning)
            rate, data = wavfile.read(path)
    except wavfile.WavFileWarning as exc:
        raise AudioIOError(f"{path}: truncated file ({exc})") from exc
    except ValueError as exc:
        msg = str(exc).lower()
        if "not understood" in msg or "unknown wave file format" in msg or "unsupported" in msg:
            raise AudioFormatError(f"{path}: {exc}") from exc
        raise AudioIOError(f"{path}: {exc}") from exc
    except (EOFError, OSError) as exc:
        raise AudioIOError(f"{path}: {exc}") from exc
    if data.size == 0:
        raise AudioIOError(f"{path}: no audio samples")
    samples = _normalize(data)
    if samples.ndim == 2:
        samples = samples.mean(axis=1)
    return AudioBuffer(samples, float(rate))


def write_wav(path, samples, sample_rate, clip=True):
    """Write mono 32-bit float WAV; values are clipped to [-1, 1] by default."""
    x = np.asarray(samples, dtype=float)
    if clip:
        x = np.clip(x, -1.0, 1.0)
    try:
        wavfile.write(path, int(round(sample_rate)), x.astype(np.float32))
    except OSError as exc:
        raise AudioIOError(f"cannot write {path}: {exc}") from exc


def _check_decimate(decimate):
    if int(decimate) != decimate or decimate < 1:
        raise ConfigurationError("decimate must be a positive integer")
    return int(decimate)


def _open(path, mode):
    try:
        return open(path, mode, newline="" if "b" not in mode else None)
    except OSError as exc:
        raise AudioIOError(f"cannot write {path}: {exc}") from exc


def pgm_bytes(db, db_clip=DEFAULT_DB_CLIP):
    """Binary PGM of a (T, J) dB array: time along x, low frequencies at the bottom."""
    scaled = (np.asarray(db, dtype=float) - db_clip) / (-db_clip) * 255.0
    pixels = np.clip(np.rint(scaled), 0, 255).astype(np.uint8)
    image = pixels.T[::-1]  # rows: high frequency first
    height, width = image.shape
    return f"P5\n{width} {height}\n255\n".encode("ascii") + image.tobytes()


def write_spectrogram(spec, path, fmt="json", db_clip=DEFAULT_DB_CLIP, decimate=None):
    """Write ``spec`` as CSV (time_s, freq_hz, magnitude_db), PGM or JSON.

    ``decimate`` keeps every n-th row; it defaults to 256 for CSV/PGM and
    1 for JSON.  JSON keeps both quadrature channels so that it can be
    read back exactly and inverted.
    """
    if fmt not in FORMATS:
        raise ConfigurationError(f"format must be one of {FORMATS}")
    if decimate is None:
        decimate = 1 if fmt == "json" else DISPLAY_DECIMATION
    step = _check_decimate(decimate)
    rows = slice(None, None, step)
    if fmt == "json":
        payload = {
            "version": __version__,
            "sample_rate": spec.sample_rate,
            "times": np.asarray(spec.times)[rows].tolist(),
            "freqs_hz": np.asarray(spec.freqs_hz).tolist(),
            "midi": midi_axis(spec.freqs_hz).tolist(),
            "cos_part": spec.cos_part[rows].tolist(),
            "sin_part": spec.sin_part[rows].tolist(),
            "db_clip": db_clip,
            "decimate": step,
            "metadata": spec.metadata,
        }
        with _open(path, "w") as fh:
            json.dump(payload, fh)
        return
    db = to_db(spec, db_clip)[rows]
    if fmt == "pgm":
        with _open(path, "wb") as fh:
            fh.write(pgm_bytes(db, db_clip))
        return
    times = np.asarray(spec.times_s)[rows]
    with _open(path, "w") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["time_s", "freq_hz", "magnitude_db"])
        for t, row in zip(times, db):
            for f, v in zip(spec.freqs_hz, row):
                writer.writerow([repr(float(t)), repr(float(f)), repr(float(v))])


def read_spectrogram_json(path):
    """Load a spectrogram written by :func:`write_spectrogram` in JSON format."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise AudioIOError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    try:
        freqs = np.asarray(data["freqs_hz"], dtype=float)
        shape = (len(data["times"]), freqs.shape[0])
        cos_part = np.asarray(data["cos_part"], dtype=float).reshape(shape)
        sin_part = np.asarray(data["sin_part"], dtype=float).reshape(shape)
        return Spectrogram(np.asarray(data["times"], dtype=int), freqs, cos_part, sin_part,
                           float(data["sample_rate"]), data.get("metadata", {}))
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"{path} is not a spectrogram file: {exc}") from exc
