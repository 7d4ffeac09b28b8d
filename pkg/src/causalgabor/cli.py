"""Command-line interface.

Exit codes: 0 on success, 1 when a computation or file operation fails,
2 for usage errors (reported by argparse).
"""

import argparse
import json
import math
import sys
import warnings

import numpy as np

from . import __version__
from .analysis import (band_width, frequency_offset, perturbation_measures,
                       perturbation_measures_gabor, selectivity_causal, selectivity_gabor)
from .errors import CausalGaborError
from .estimation import BenchConfig, format_table, noise_benchmark
from .inverse import InverseConfig, inverse_transform
from .io import FORMATS, read_spectrogram_json, read_wav, write_spectrogram, write_wav
from .kernel import SQRT2, KernelParams, delay_estimates
from .report import AnalysisReport
from .transform import (CausalGaborStream, FrequencyGrid, TransformConfig, causal_transform,
                        config_from_metadata, transform)

WINDOWS = {
    "causal": "time-causal-limit",
    "gabor": "gabor-sampled",
    "gabor-trunc": "gabor-truncated-shifted",
}


def parse_c(text):
    """``sqrt2`` or a number greater than one."""
    if text.strip().lower() in ("sqrt2", "sqrt(2)"):
        return SQRT2
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid value for c: {text!r}") from None
    if not value > 1:
        raise argparse.ArgumentTypeError("c must be greater than 1")
    return value


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return value


def _emit(obj):
    print(json.dumps(obj, indent=2))


def _grid_args(p):
    p.add_argument("--N", type=float, default=8.0, help="window length in wavelengths")
    p.add_argument("--c", type=parse_c, default=2.0, help="distribution parameter: sqrt2 or a number > 1")
    p.add_argument("--K", type=_positive_int, default=8, help="number of cascade layers")
    p.add_argument("--per-octave", type=_positive_int, default=48)
    p.add_argument("--fmin", type=float, default=20.0)
    p.add_argument("--fmax", type=float, default=None,
                   help="highest frequency (default: 16 kHz, lowered below Nyquist)")
    p.add_argument("--threshold", choices=("hard", "soft"), default="hard")


def _transform_config(args, sample_rate, window_kind="time-causal-limit"):
    fmax = args.fmax if args.fmax is not None else min(16000.0, 0.45 * sample_rate)
    grid = FrequencyGrid(f_min=args.fmin, f_max=fmax, per_octave=args.per_octave,
                         N=args.N, threshold=args.threshold)
    return TransformConfig(grid, sample_rate, c=args.c, K=args.K, window_kind=window_kind)


def cmd_spectrogram(args):
    audio = read_wav(args.wav)
    config = _transform_config(args, audio.sample_rate, WINDOWS[args.window])
    spec = transform(audio.samples, config)
    fmt = args.format or (args.out.rsplit(".", 1)[-1].lower() if "." in args.out else "json")
    if fmt not in FORMATS:
        fmt = "json"
    write_spectrogram(spec, args.out, fmt, db_clip=args.db_clip, decimate=args.decimate)
    print(f"wrote {fmt} spectrogram {spec.cos_part.shape[0]} x {spec.freqs_hz.shape[0]} to {args.out}")


def cmd_delay(args):
    est = delay_estimates(KernelParams(tau=args.tau, c=args.c))
    _emit({"c": args.c, "tau": args.tau, "m": est.mean_delay, "t_max": est.max_pos_delay})


def cmd_selectivity(args):
    ratios = np.exp(np.linspace(math.log(args.min_ratio), math.log(args.max_ratio), args.points))
    if args.kind == "gabor":
        curve = selectivity_gabor(ratios, args.N)
    else:
        curve = selectivity_causal(ratios, args.N, args.c)
    report = AnalysisReport("selectivity", {"omega_ratio": curve.omegas, "R_db": curve.values_db + 0.0},
                            {"kind": args.kind, "N": args.N, "c": curve.c})
    text = report.to_csv()
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_bandwidth(args):
    rep = band_width(args.kind, args.N, args.c)
    _emit({"kind": args.kind, "N": args.N, "c": args.c if args.kind != "gabor" else None,
           "gamma_minus": rep.gamma_minus, "gamma_plus": rep.gamma_plus,
           "delta_gamma": rep.delta_gamma, "omega_ratio_minus": rep.omega_ratio_minus,
           "omega_ratio_plus": rep.omega_ratio_plus})


def cmd_perturbation(args):
    if args.kind == "gabor":
        eps_db, b_db = perturbation_measures_gabor(args.N)
    else:
        eps_db, b_db = perturbation_measures(args.N, args.c)
    _emit({"kind": args.kind, "N": args.N, "c": args.c if args.kind != "gabor" else None,
           "eps_db": eps_db, "b_db": b_db})


def cmd_freq_offset(args):
    offsets = {C: frequency_offset(args.N, args.c, C) for C in (-1.0, 1.0)}
    _emit({"N": args.N, "c": args.c, "gamma_at_C_minus_1": offsets[-1.0],
           "gamma_at_C_plus_1": offsets[1.0],
           "max_abs_gamma": max(abs(v) for v in offsets.values())})


def cmd_noise_bench(args):
    config = BenchConfig.full(seed=args.seed) if args.scale == "full" else BenchConfig.desk(seed=args.seed)
    report = noise_benchmark(config)
    print(format_table(report))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(report.to_json())


def cmd_invert(args):
    spec = read_spectrogram_json(args.spectrogram)
    config = config_from_metadata(spec.metadata)
    if config.window_kind != "time-causal-limit":
        raise CausalGaborError("only time-causal spectrograms can be inverted")
    delta_u = math.inf if args.delta_u.lower() in ("inf", "infinity") else float(args.delta_u)
    result = inverse_transform(spec, config, InverseConfig(delta_u=delta_u))
    write_wav(args.out, result.samples, spec.sample_rate)
    print(f"wrote {result.samples.shape[0]} samples to {args.out} "
          f"(horizon {result.horizon} samples, imaginary residue {result.imag_residue:.3g})")


def cmd_stream(args):
    audio = read_wav(args.wav)
    config = _transform_config(args, audio.sample_rate)
    whole = causal_transform(audio.samples, config)
    stream = CausalGaborStream(config)
    cos_parts, sin_parts = [], []
    for start in range(0, audio.samples.shape[0], args.chunk):
        part = stream.process(audio.samples[start:start + args.chunk])
        cos_parts.append(part.cos_part)
        sin_parts.append(part.sin_part)
    dev = max(float(np.max(np.abs(np.vstack(cos_parts) - whole.cos_part))),
              float(np.max(np.abs(np.vstack(sin_parts) - whole.sin_part))))
    _emit({"chunk": args.chunk, "samples": int(audio.samples.shape[0]), "max_abs_deviation": dev})
    return 0 if dev == 0 else 1


def build_parser():
    parser = argparse.ArgumentParser(prog="causalgabor",
                                     description="Time-causal and time-recursive Gabor spectrograms.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrogram", help="spectrogram of a WAV file")
    p.add_argument("wav")
    p.add_argument("--window", choices=tuple(WINDOWS), default="causal")
    _grid_args(p)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=FORMATS, default=None)
    p.add_argument("--db-clip", type=float, default=-60.0)
    p.add_argument("--decimate", type=_positive_int, default=None)
    p.set_defaults(func=cmd_spectrogram)

    p = sub.add_parser("delay", help="temporal delay estimates of the limit kernel")
    p.add_argument("--c", type=parse_c, required=True)
    p.add_argument("--tau", type=float, default=1.0)
    p.set_defaults(func=cmd_delay)

    p = sub.add_parser("selectivity", help="frequency selectivity curve as CSV")
    p.add_argument("--kind", choices=("gabor", "causal"), required=True)
    p.add_argument("--N", type=float, default=8.0)
    p.add_argument("--c", type=parse_c, default=2.0)
    p.add_argument("--min-ratio", type=float, default=0.5)
    p.add_argument("--max-ratio", type=float, default=2.0)
    p.add_argument("--points", type=_positive_int, default=401)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_selectivity)

    p = sub.add_parser("bandwidth", help="log-frequency band edges at half power")
    p.add_argument("--kind", choices=("gabor", "causal"), required=True)
    p.add_argument("--N", type=float, default=8.0)
    p.add_argument("--c", type=parse_c, default=2.0)
    p.set_defaults(func=cmd_bandwidth)

    p = sub.add_parser("perturbation", help="oscillatory and bias perturbation in dB")
    p.add_argument("--kind", choices=("gabor", "causal"), default="causal")
    p.add_argument("--N", type=float, default=8.0)
    p.add_argument("--c", type=parse_c, default=2.0)
    p.set_defaults(func=cmd_perturbation)

    p = sub.add_parser("freq-offset", help="bound on the frequency offset of the spectral peak")
    p.add_argument("--N", type=float, default=8.0)
    p.add_argument("--c", type=parse_c, default=2.0)
    p.set_defaults(func=cmd_freq_offset)

    p = sub.add_parser("noise-bench", help="frequency estimation accuracy under noise")
    p.add_argument("--scale", choices=("desk", "full"), default="desk")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="also write the report as JSON")
    p.set_defaults(func=cmd_noise_bench)

    p = sub.add_parser("invert", help="reconstruct a WAV file from a JSON spectrogram")
    p.add_argument("spectrogram")
    p.add_argument("--delta-u", default="inf", help="lag horizon in seconds or 'inf'")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("stream", help="check chunked against one-shot processing")
    p.add_argument("wav")
    p.add_argument("--chunk", type=_positive_int, default=512)
    _grid_args(p)
    p.set_defaults(func=cmd_stream)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            code = args.func(args)
    except (CausalGaborError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
