"""Command-line interface.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import contextlib
import itertools
import os
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .baselines import METHODS, score
from .core import DataError, Dataset, ParameterError, Params, minmax_normalize
from .datagen import SynthSpec, generate
from .dataio import load_csv, write_dataset, write_rows
from .density import CONVENTIONS, KernelSpec
from .evaluation import auc_table, roc_auc
from .neighbors import build_knn_graph, dump_edges
from .rdos import threshold_detect
from .theory import BoundInput, validate_theorem1, validate_theorem2

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


class NumericError(RuntimeError):
    pass


@dataclass(frozen=True)
class RunConfig:
    input: str
    method: str = "rdos"
    k: int = 21
    h: float = 0.01
    convention: str = "paper"
    tau: Optional[float] = None
    top_n: Optional[int] = None
    normalize: bool = True
    seed: Optional[int] = None
    out: Optional[str] = None

    def __post_init__(self):
        if self.tau is not None and self.top_n is not None:
            raise ParameterError("give either --tau or --top-n, not both")


@contextlib.contextmanager
def _output(path: Optional[str]):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _prepare(cfg: RunConfig) -> Dataset:
    data = load_csv(cfg.input)
    Params(k=cfg.k, h=cfg.h, tau=cfg.tau, top_n=cfg.top_n).check(data.n)
    return minmax_normalize(data) if cfg.normalize else data


def _scored(cfg: RunConfig, data: Dataset):
    graph = build_knn_graph(data, cfg.k)
    report = score(data, graph, cfg.method, KernelSpec(cfg.h, data.dim, cfg.convention))
    if not np.all(np.isfinite(report.scores)):
        raise NumericError(f"{cfg.method} produced non-finite scores")
    return report


def run_score(cfg: RunConfig) -> int:
    """Score a CSV file and write ``index,score[,density][,flag]`` rows.

    With ``top_n`` only the ``top_n`` highest-ranked rows are written, in rank
    order; otherwise every point is written in input order.
    """
    data = _prepare(cfg)
    report = _scored(cfg, data)
    header = ["index", "score"]
    if report.density is not None:
        header.append("density")
    flags = None
    if cfg.tau is not None:
        flags = threshold_detect(report, cfg.tau)
        header.append("flag")

    order = report.order[: cfg.top_n] if cfg.top_n is not None else range(data.n)
    rows = []
    for i in order:
        row = [int(i), float(report.scores[i])]
        if report.density is not None:
            row.append(float(report.density[i]))
        if flags is not None:
            row.append(int(flags[i]))
        rows.append(row)
    with _output(cfg.out) as fh:
        write_rows(fh, header, rows)
    return 0


def _config(args, **extra) -> RunConfig:
    return RunConfig(
        input=args.input,
        method=args.method,
        k=args.k,
        h=args.h,
        convention=args.convention,
        normalize=args.normalize,
        seed=args.seed,
        out=args.out,
        **extra,
    )


def cmd_score(args) -> int:
    return run_score(_config(args, tau=args.tau, top_n=args.top_n))


def cmd_rank(args) -> int:
    return run_score(_config(args, top_n=args.top_n))


def cmd_eval(args) -> int:
    cfg = _config(args)
    data = _prepare(cfg)
    if data.labels is None:
        raise DataError(f"{cfg.input}: eval needs a 'label' column")
    curve = roc_auc(_scored(cfg, data).scores, data.labels)
    print(f"auc={curve.auc:.9g}", file=sys.stderr if cfg.out in (None, "-") else sys.stdout)
    with _output(cfg.out) as fh:
        write_rows(fh, ["fpr", "tpr"], zip(curve.fpr.tolist(), curve.tpr.tolist()))
    return 0


def cmd_sweep(args) -> int:
    data = load_csv(args.input)
    if args.normalize:
        data = minmax_normalize(data)
    methods = args.methods.split(",") if args.methods else list(METHODS)
    for m in methods:
        if m not in METHODS:
            raise ParameterError(f"unknown method {m!r}; expected one of {METHODS}")
    for k in args.k_values:
        Params(k=k, h=args.h).check(data.n)
    spec = KernelSpec(args.h, data.dim, args.convention)
    rows = auc_table(data, methods, args.k_values, spec, workers=args.threads)
    for r in rows:
        if not np.isfinite(r.auc):
            raise NumericError(f"non-finite AUC for {r.method} at k={r.k}")
    with _output(args.out) as fh:
        write_rows(fh, ["k", "method", "auc"], ((r.k, r.method, r.auc) for r in rows))
    return 0


def cmd_gen(args) -> int:
    spec = SynthSpec(args.variant, args.n, args.sigma2, None, args.seed)
    data = generate(spec)
    with _output(args.out) as fh:
        write_dataset(data, fh)
    return 0


def cmd_validate(args) -> int:
    with _output(args.out) as fh:
        if args.theorem == 1:
            rows = []
            for seed in range(args.seed, args.seed + args.seeds):
                res = validate_theorem1(
                    args.n_points, args.k, KernelSpec(args.h, 2, args.convention), seed=seed
                )
                rows.append((args.n_points, args.k, args.h, seed, res.mean_rdos, res.std_rdos, res.n_interior))
            write_rows(fh, ["n_points", "k", "h", "seed", "mean_rdos", "std_rdos", "n_interior"], rows)
            return 0
        rows = []
        grid = itertools.product(args.gamma, args.s_size, args.d, args.kernel_h, args.r)
        for gamma, s, d, h, r in grid:
            b = BoundInput(gamma, s, d, h, r)
            res = validate_theorem2(args.trials, b, seed=args.seed, convention=args.convention)
            rows.append((gamma, s, d, h, r, args.trials, res.empirical_rate, res.bound))
        write_rows(fh, ["gamma", "s_size", "d", "h", "r", "trials", "empirical_rate", "bound"], rows)
    return 0


def cmd_graph_dump(args) -> int:
    data = load_csv(args.input)
    Params(k=args.k, h=1.0).check(data.n)
    if args.normalize:
        data = minmax_normalize(data)
    graph = build_knn_graph(data, args.k)
    with _output(args.out) as fh:
        for line in dump_edges(graph):
            fh.write(line + "\n")
    return 0


def _scoring_flags(p: argparse.ArgumentParser, method: bool = True) -> None:
    p.add_argument("input", help="CSV file; optional header, optional final 'label' column")
    if method:
        p.add_argument("--method", choices=METHODS, default="rdos")
        p.add_argument("--k", type=int, default=21, help="number of nearest neighbours (default 21)")
    p.add_argument("--h", type=float, default=0.01, help="kernel width (default 0.01)")
    p.add_argument("--convention", choices=CONVENTIONS, default="paper")
    p.add_argument("--normalize", action=argparse.BooleanOptionalAction, default=True,
                   help="min-max scale every feature to [0, 1] first")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rdoskit", description="Local density-based outlier detection.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker threads for sweeps (results do not depend on it)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="score every point")
    _scoring_flags(p)
    p.add_argument("--tau", type=float, help="add a flag column: score > tau (tau > 1)")
    p.add_argument("--top-n", type=int, help="write only the n highest-ranked points")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("rank", help="write the top-n points in rank order")
    _scoring_flags(p)
    p.add_argument("--top-n", type=int, required=True)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("eval", help="ROC curve and AUC on a labelled file")
    _scoring_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="AUC per (k, method) on a labelled file")
    _scoring_flags(p, method=False)
    p.add_argument("--methods", default=",".join(METHODS), help="comma-separated subset of methods")
    p.add_argument("--k-values", type=_int_list, default=list(range(3, 32, 2)))
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("gen", help="write a synthetic dataset")
    p.add_argument("variant", choices=("two_gaussians", "cosine"))
    p.add_argument("--n", type=int, help="points per cluster / along the curve")
    p.add_argument("--sigma2", type=float, help="noise variance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("validate", help="Monte Carlo checks of the score's theory")
    p.add_argument("--theorem", type=int, choices=(1, 2), default=2)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--gamma", type=_float_list, default=[1.5, 2.0, 3.0])
    p.add_argument("--s-size", type=_int_list, default=[10, 30])
    p.add_argument("--d", type=_int_list, default=[1, 2])
    p.add_argument("--kernel-h", type=_float_list, default=[0.1, 0.5],
                   help="kernel widths for the bound grid")
    p.add_argument("--r", type=_float_list, default=[0.5, 1.0])
    p.add_argument("--n-points", type=int, default=5000)
    p.add_argument("--k", type=int, default=21)
    p.add_argument("--h", type=float, default=0.01, help="kernel width for --theorem 1")
    p.add_argument("--seeds", type=int, default=10, help="number of seeds for --theorem 1")
    p.add_argument("--convention", choices=CONVENTIONS, default="paper")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("graph-dump", help="write the KNN graph as 'src dst distance' lines")
    p.add_argument("input")
    p.add_argument("--k", type=int, default=21)
    p.add_argument("--normalize", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_graph_dump)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head); not an error
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return EXIT_OK
    except ParameterError as exc:
        print(f"rdoskit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError) as exc:
        print(f"rdoskit: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (NumericError, FloatingPointError) as exc:
        print(f"rdoskit: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
