"""Command-line front-end.

Exit codes: 0 success, 1 runtime or data failure, 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .classifiers import NnConfig
from .errors import ConfigError, SpecfsError
from .ga import GaConfig, Pipeline2Config, run_pipeline2
from .io import read_dataset, read_raw_samples, write_csv, write_dataset, write_raw_samples
from .ranking import RankMethod, rank
from .spectra import PreprocessConfig, preprocess
from .synth import Baseline, SynthConfig, generate
from .wrapper import Pipeline1Config, run_pipeline1

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2


def _nn_args(p):
    g = p.add_argument_group("neural network")
    g.add_argument("--nn-hidden", type=int, default=NnConfig.hidden)
    g.add_argument("--nn-epochs", type=int, default=NnConfig.epochs)
    g.add_argument("--nn-rate", type=float, default=NnConfig.rate)


def _nn_config(a) -> NnConfig:
    return NnConfig(hidden=a.nn_hidden, epochs=a.nn_epochs, rate=a.nn_rate)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="specfs", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write a synthetic dataset with planted peaks")
    p.add_argument("--out", required=True, type=Path, help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-cancer", type=int, default=SynthConfig.n_cancer)
    p.add_argument("--n-normal", type=int, default=SynthConfig.n_normal)
    p.add_argument("--grid-points", type=int, default=SynthConfig.grid_points)
    p.add_argument("--n-planted", type=int, default=SynthConfig.n_planted)
    p.add_argument("--amplitude", type=float, default=SynthConfig.amplitude)
    p.add_argument("--peak-width", type=float, default=SynthConfig.peak_width)
    p.add_argument("--noise-std", type=float, default=SynthConfig.noise_std)
    p.add_argument("--abundance-jitter", type=float, default=SynthConfig.abundance_jitter)
    p.add_argument("--baseline", choices=[b.value for b in Baseline], default="none")
    p.add_argument("--raw", action="store_true",
                   help="also write per-sample mz,intensity files under raw/ plus labels.csv")

    p = sub.add_parser("preprocess", help="resample, baseline-correct, normalize and denoise")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--data", type=Path, help="dataset CSV (id,label,<mz...>)")
    src.add_argument("--raw-dir", type=Path, help="directory of <id>.csv files (mz,intensity)")
    p.add_argument("--labels", type=Path, help="id,label CSV (required with --raw-dir)")
    p.add_argument("--out", required=True, type=Path, help="output dataset CSV")
    p.add_argument("--grid-points", type=int, default=PreprocessConfig.grid_points)
    p.add_argument("--baseline-window", type=int, default=PreprocessConfig.baseline_window)
    p.add_argument("--smooth-window", type=int, default=PreprocessConfig.smooth_window)
    p.add_argument("--normalize-target", type=float, default=PreprocessConfig.normalize_target)
    p.add_argument("--peak-prominence", type=float, default=PreprocessConfig.peak_prominence)

    methods = [m.value for m in RankMethod]
    p = sub.add_parser("rank", help="score and rank every m/z feature")
    p.add_argument("--data", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path, help="output directory")
    p.add_argument("--method", "--rank-method", dest="method", choices=methods, default="ttest")

    p = sub.add_parser("pipeline1", help="ranking + PCA + LDA sweep + NN")
    p.add_argument("--data", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--rank-method", choices=methods, default="ttest")
    p.add_argument("--holdout", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rank-top", type=int, default=Pipeline1Config.rank_top)
    p.add_argument("--pca-k", type=int, default=None)
    p.add_argument("--k-max", type=int, default=None)
    p.add_argument("--step", type=int, default=1)
    _nn_args(p)

    p = sub.add_parser("pipeline2", help="GA subset search + NN")
    p.add_argument("--data", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--holdout", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--population", type=int, default=GaConfig.population)
    p.add_argument("--generations", type=int, default=GaConfig.generations)
    p.add_argument("--chrom-len", type=int, default=GaConfig.chromosome_length)
    p.add_argument("--crossover-rate", type=float, default=GaConfig.crossover_rate)
    p.add_argument("--mutation-rate", type=float, default=GaConfig.mutation_rate)
    p.add_argument("--tournament-size", type=int, default=GaConfig.tournament_size)
    p.add_argument("--elite-count", type=int, default=GaConfig.elite_count)
    p.add_argument("--w-sep", type=float, default=0.5, help="weight of the posterior term")
    p.add_argument("--w-err", type=float, default=0.5, help="weight of the error-rate term")
    _nn_args(p)
    return parser


def cmd_synth(a):
    cfg = SynthConfig(
        n_cancer=a.n_cancer, n_normal=a.n_normal, grid_points=a.grid_points,
        n_planted=a.n_planted, amplitude=a.amplitude, peak_width=a.peak_width,
        noise_std=a.noise_std, abundance_jitter=a.abundance_jitter,
        baseline=a.baseline, seed=a.seed,
    )
    ds, planted = generate(cfg)
    write_dataset(a.out / "dataset.csv", ds)
    write_csv(a.out / "truth.csv", ["feature_index", "mz"],
              ((int(i), float(ds.grid[i])) for i in planted))
    if a.raw:
        samples = [(ds.spectrum(i), int(ds.y[i])) for i in range(ds.n_samples)]
        write_raw_samples(a.out / "raw", a.out / "labels.csv", samples)


def cmd_preprocess(a):
    cfg = PreprocessConfig(
        grid_points=a.grid_points, baseline_window=a.baseline_window,
        smooth_window=a.smooth_window, normalize_target=a.normalize_target,
        peak_prominence=a.peak_prominence,
    )
    if a.raw_dir is not None:
        if a.labels is None:
            raise ConfigError("--labels is required with --raw-dir")
        samples = read_raw_samples(a.raw_dir, a.labels)
    else:
        ds = read_dataset(a.data)
        samples = [(ds.spectrum(i), int(ds.y[i])) for i in range(ds.n_samples)]
    write_dataset(a.out, preprocess(samples, cfg))


def cmd_rank(a):
    ds = read_dataset(a.data)
    ranked = rank(ds, a.method)
    rows = (
        (int(j), float(ds.grid[j]), float(ranked.scores[j]), r + 1)
        for r, j in enumerate(ranked.order)
    )
    write_csv(a.out / "scores.csv", ["feature_index", "mz", "score", "rank"], rows)


def cmd_pipeline1(a):
    cfg = Pipeline1Config(
        method=a.rank_method, holdout=a.holdout, seed=a.seed, rank_top=a.rank_top,
        pca_k=a.pca_k, k_max=a.k_max, step=a.step, nn=_nn_config(a),
    )
    ds = read_dataset(a.data)
    run_pipeline1(ds, cfg).write(a.out)


def cmd_pipeline2(a):
    ga = GaConfig(
        population=a.population, generations=a.generations, chromosome_length=a.chrom_len,
        crossover_rate=a.crossover_rate, mutation_rate=a.mutation_rate,
        tournament_size=a.tournament_size, elite_count=a.elite_count,
        fitness_weights=(a.w_sep, a.w_err),
    )
    cfg = Pipeline2Config(holdout=a.holdout, seed=a.seed, ga=ga, nn=_nn_config(a))
    ds = read_dataset(a.data)
    run_pipeline2(ds, cfg).write(a.out)


COMMANDS = {
    "synth": cmd_synth,
    "preprocess": cmd_preprocess,
    "rank": cmd_rank,
    "pipeline1": cmd_pipeline1,
    "pipeline2": cmd_pipeline2,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"specfs {args.command}: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SpecfsError, OSError) as exc:
        print(f"specfs {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
