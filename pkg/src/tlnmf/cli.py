"""Command-line entry point: synth-bench, run and analyze subcommands.

Heavy imports are deferred until after argument parsing so that
--threads can pin the BLAS/numba thread pools through environment
variables before numpy loads. --threads 1 makes runs bit-deterministic.
"""

import argparse
import configparser
import json
import os
import sys
from pathlib import Path

_THREAD_ENV_VARS = (
    "OMP_NUM_THREADS",
    "OPENBLAS_NUM_THREADS",
    "MKL_NUM_THREADS",
    "NUMEXPR_NUM_THREADS",
    "NUMBA_NUM_THREADS",
)

_CONFIG_KEYS = {
    "rank": int,
    "lambda": float,
    "iters": int,
    "inner_tl_iters": int,
    "inner_mm_iters": int,
    "seed": int,
    "algorithm": str,
    "tolerance": float,
    "transform_init": str,
    "frame_ms": float,
    "frame_samples": int,
    "overlap": float,
    "window": str,
}

_RUN_DEFAULTS = {
    "rank": 10,
    "lambda": 1.0,
    "iters": 100,
    "inner_tl_iters": 5,
    "inner_mm_iters": 1,
    "seed": 0,
    "algorithm": "quasi-newton",
    "tolerance": 1e-8,
    "transform_init": "random",
    "frame_ms": 40.0,
    "frame_samples": None,
    "overlap": 0.5,
    "window": "sine",
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tlnmf",
        description="Transform-learning NMF experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    bench = sub.add_parser(
        "synth-bench",
        help="transform-recovery benchmark on synthetic Gaussian frames",
    )
    bench.add_argument("--dims", type=int, nargs="+", default=[10, 100, 500],
                       help="frame lengths M to sweep (default: 10 100 500)")
    bench.add_argument("--frames", type=int, default=1000,
                       help="number of frames N (default: 1000)")
    bench.add_argument("--perturbation", type=float, default=1e-3,
                       help="scale of the antisymmetric start offset")
    bench.add_argument("--algorithms", nargs="+",
                       default=["quasi-newton", "projected-gradient"])
    bench.add_argument("--iters", type=int, default=200,
                       help="iterations per algorithm (default: 200)")
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--out-dir", required=True)
    bench.add_argument("--threads", type=int)
    bench.set_defaults(func=cmd_synth_bench)

    run = sub.add_parser("run", help="full TL-NMF on a WAV file")
    run.add_argument("input_wav")
    run.add_argument("--config", help="INI file with a [tlnmf] section")
    run.add_argument("--out-dir", required=True)
    run.add_argument("--rank", type=int)
    run.add_argument("--lambda", dest="lam", type=float)
    run.add_argument("--iters", type=int, help="outer iterations")
    run.add_argument("--inner-tl-iters", type=int)
    run.add_argument("--inner-mm-iters", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--algorithm")
    run.add_argument("--tolerance", type=float)
    run.add_argument("--transform-init")
    run.add_argument("--frame-ms", type=float)
    run.add_argument("--frame-samples", type=int)
    run.add_argument("--overlap", type=float)
    run.add_argument("--window")
    run.add_argument("--threads", type=int)
    run.set_defaults(func=cmd_run)

    analyze = sub.add_parser(
        "analyze",
        help="energy profiles of a finished run, atom similarity of two",
    )
    analyze.add_argument("run_dir")
    analyze.add_argument("second_run_dir", nargs="?")
    analyze.add_argument("--out-dir", help="default: <run_dir>/analysis")
    analyze.add_argument("--count", type=int, default=50,
                         help="atoms kept for the similarity report")
    analyze.add_argument("--seed", type=int, default=0,
                         help="seed of the random reference transform")
    analyze.add_argument("--threads", type=int)
    analyze.set_defaults(func=cmd_analyze)

    return parser


def _pin_threads(n):
    for var in _THREAD_ENV_VARS:
        os.environ[var] = str(n)


def _write_manifest(out_dir, payload):
    from . import __version__

    payload = {"version": __version__, **payload}
    with open(Path(out_dir) / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_synth_bench(args):
    import numpy as np

    from .driver import run_transform_only, synthetic_transform_instance
    from .errors import ConfigError
    from .matrixio import write_convergence_csv

    if args.frames < 1:
        raise ConfigError(f"--frames must be >= 1, got {args.frames}")
    for m in args.dims:
        if m < 2:
            raise ConfigError(f"--dims entries must be >= 2, got {m}")
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    outputs = []
    for m in args.dims:
        y, _, vhat, phi0 = synthetic_transform_instance(
            m, args.frames, args.perturbation, args.seed
        )
        for algorithm in args.algorithms:
            _, log = run_transform_only(y, vhat, phi0, algorithm, args.iters)
            name = f"synth_m{m}_{algorithm}.csv"
            write_convergence_csv(out_dir / name, log)
            outputs.append(name)
            print(f"{name}: final objective {log.objective[-1]:.6e}")

    _write_manifest(
        out_dir,
        {
            "command": "synth-bench",
            "input": {
                "kind": "synthetic-normal",
                "dims": list(args.dims),
                "frames": args.frames,
                "perturbation": args.perturbation,
            },
            "seed": args.seed,
            "algorithms": list(args.algorithms),
            "iters": args.iters,
            "outputs": outputs,
        },
    )
    return 0


def _load_config_file(path):
    from .errors import ConfigError

    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise FileNotFoundError(f"config file {path} not found")
    if not parser.has_section("tlnmf"):
        raise ConfigError(f"{path} lacks a [tlnmf] section")
    values = {}
    for key, raw in parser.items("tlnmf"):
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"unknown config key {key!r} in {path}")
        if raw.strip() == "":
            continue
        try:
            values[key] = _CONFIG_KEYS[key](raw)
        except ValueError:
            raise ConfigError(f"config key {key!r} has invalid value {raw!r}") from None
    return values


def _resolve_run_settings(args):
    settings = dict(_RUN_DEFAULTS)
    if args.config:
        settings.update(_load_config_file(args.config))
    overrides = {
        "rank": args.rank,
        "lambda": args.lam,
        "iters": args.iters,
        "inner_tl_iters": args.inner_tl_iters,
        "inner_mm_iters": args.inner_mm_iters,
        "seed": args.seed,
        "algorithm": args.algorithm,
        "tolerance": args.tolerance,
        "transform_init": args.transform_init,
        "frame_ms": args.frame_ms,
        "frame_samples": args.frame_samples,
        "overlap": args.overlap,
        "window": args.window,
    }
    settings.update({k: v for k, v in overrides.items() if v is not None})
    return settings


def cmd_run(args):
    from .audio import frame_signal, read_wav
    from .driver import TlnmfConfig, run_tlnmf
    from .matrixio import write_experiment_csv, write_matrix

    settings = _resolve_run_settings(args)
    config = TlnmfConfig(
        rank=settings["rank"],
        penalty=settings["lambda"],
        n_outer=settings["iters"],
        inner_tl_iters=settings["inner_tl_iters"],
        inner_mm_iters=settings["inner_mm_iters"],
        seed=settings["seed"],
        algorithm=settings["algorithm"],
        tolerance=settings["tolerance"],
        transform_init=settings["transform_init"],
    )
    signal = read_wav(args.input_wav)
    frames = frame_signal(
        signal,
        frame_ms=settings["frame_ms"],
        overlap_fraction=settings["overlap"],
        window=settings["window"],
        frame_samples=settings["frame_samples"],
    )
    result = run_tlnmf(frames.data, config)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_experiment_csv(out_dir / "log.csv", result.log)
    write_matrix(out_dir / "phi.bin", result.phi)
    write_matrix(out_dir / "w.bin", result.w)
    write_matrix(out_dir / "h.bin", result.h)
    _write_manifest(
        out_dir,
        {
            "command": "run",
            "input": str(Path(args.input_wav).resolve()),
            "seed": settings["seed"],
            "config": settings,
            "framing": {
                "frame_length": frames.frame_length,
                "hop": frames.hop,
                "window": frames.window,
                "sample_rate_hz": frames.sample_rate_hz,
                "n_frames": frames.n_frames,
            },
            "outputs": ["log.csv", "phi.bin", "w.bin", "h.bin"],
        },
    )
    print(
        f"run finished after {len(result.log)} outer iterations; "
        f"final objective {result.log.objective[-1]:.6e}"
    )
    return 0


def _load_run(run_dir):
    from .audio import frame_signal, read_wav
    from .errors import MissingArtifact
    from .matrixio import read_matrix

    run_dir = Path(run_dir)
    manifest_path = run_dir / "manifest.json"
    if not manifest_path.exists():
        raise MissingArtifact(f"{manifest_path} not found")
    with open(manifest_path, encoding="utf-8") as fh:
        manifest = json.load(fh)
    phi_path = run_dir / "phi.bin"
    if not phi_path.exists():
        raise MissingArtifact(f"{phi_path} not found")
    phi = read_matrix(phi_path)
    settings = manifest["config"]
    signal = read_wav(manifest["input"])
    frames = frame_signal(
        signal,
        frame_ms=settings["frame_ms"],
        overlap_fraction=settings["overlap"],
        window=settings["window"],
        frame_samples=settings.get("frame_samples"),
    )
    return manifest, phi, frames


def cmd_analyze(args):
    from .analysis import energy_profile, match_atoms, top_atoms
    from .errors import ConfigError
    from .linalg import dct_matrix, random_orthogonal
    from .matrixio import (
        write_energy_csv,
        write_permutation_csv,
        write_similarity_csv,
    )

    manifest, phi, frames = _load_run(args.run_dir)
    y = frames.data
    m = y.shape[0]
    if phi.shape != (m, m):
        raise ConfigError(
            f"stored transform is {phi.shape} but frames give M={m}; "
            "was the input file modified?"
        )
    out_dir = Path(args.out_dir) if args.out_dir else Path(args.run_dir) / "analysis"
    out_dir.mkdir(parents=True, exist_ok=True)

    write_energy_csv(out_dir / "energy_learned.csv", energy_profile(phi, y))
    write_energy_csv(out_dir / "energy_dct.csv", energy_profile(dct_matrix(m), y))
    write_energy_csv(
        out_dir / "energy_random.csv",
        energy_profile(random_orthogonal(m, args.seed), y),
    )
    outputs = ["energy_learned.csv", "energy_dct.csv", "energy_random.csv"]

    if args.second_run_dir:
        _, phi2, _ = _load_run(args.second_run_dir)
        if phi2.shape != phi.shape:
            raise ConfigError(
                f"transform shapes differ: {phi.shape} vs {phi2.shape}"
            )
        count = min(args.count, m)
        report = match_atoms(top_atoms(phi, y, count), top_atoms(phi2, y, count))
        write_similarity_csv(out_dir / "similarity.csv", report)
        write_permutation_csv(out_dir / "permutation.csv", report)
        outputs += ["similarity.csv", "permutation.csv"]

    _write_manifest(
        out_dir,
        {
            "command": "analyze",
            "input": str(Path(args.run_dir).resolve()),
            "second_input": (
                str(Path(args.second_run_dir).resolve())
                if args.second_run_dir
                else None
            ),
            "seed": args.seed,
            "outputs": outputs,
        },
    )
    print(f"analysis written to {out_dir}")
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", None):
        if args.threads < 1:
            parser.error("--threads must be >= 1")
        _pin_threads(args.threads)

    from .errors import TlnmfError

    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except TlnmfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
