"""``gdshrink`` command-line front end.

Every subcommand writes CSV files (the contract), optional PNG plots
(``--format both``) and a ``manifest.json`` into ``--out``.

Exit codes: 0 success, 1 numerical or data failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io
from .activations import KINDS, ActivationSpec
from .calculus import E_INV, iteration_curve, kappa_from
from .config import ConfigError, ExperimentConfig, read_config
from .design import Grid1D, build
from .experiments.reconstruction import ReconstructionResult, reconstruct_sweep
from .experiments.signals import SignalSource, SynthSpec, resolve
from .shrinkage import StabilityError, mask_gd, mask_pca
from .spectral import decompose, dst_correlation, normalized_spectrum
from .spline import (
    analytic_column,
    build_nabla,
    column_shape_error,
    inverse_columns,
    sample_coords,
    spline_objective_equivalence_check,
)
from .trainer import DivergenceError, TrainerConfig, train

NUMERIC_ERRORS = (
    np.linalg.LinAlgError,
    FloatingPointError,
    StabilityError,
    DivergenceError,
    ValueError,
    IndexError,
    OSError,
)


class UsageError(Exception):
    pass


def _int_list(text: str):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _act_list(text: str):
    acts = [t.strip().lower() for t in text.split(",") if t.strip()]
    bad = [a for a in acts if a not in KINDS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown activation(s) {bad}")
    return acts


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _matrix(act: str, sigma: float, n: int, m: int):
    if n < 1 or m < 1:
        raise UsageError("--n and --m must be positive")
    return build(Grid1D.uniform(n, m), ActivationSpec(act, sigma))


class Run:
    """Collects artifacts for one command and writes the manifest."""

    def __init__(self, args, command: str, params: dict):
        self.out = Path(args.out)
        self.plots = args.format == "both"
        self.stamp = args.stamp
        self.seed = args.seed
        self.command = command
        self.params = params
        self.artifacts = []

    def csv(self, name, header, rows):
        self.artifacts.append(io.write_csv(self.out / name, header, rows))

    def plot(self, fn, name, *a, **kw):
        if self.plots:
            self.artifacts.append(fn(self.out / name, *a, stamp=self.stamp, **kw))

    def finish(self):
        io.write_manifest(self.out, self.command, self.params, self.seed, self.artifacts)
        for p in self.artifacts:
            print(p)


def cmd_spectrum(args):
    from .plotting import line_plot

    sigma = args.sigma
    sd = decompose(_matrix(args.act, sigma, args.n, args.m))
    ns = normalized_spectrum(sd)
    run = Run(args, "spectrum", {"act": args.act, "sigma": sigma, "n": args.n, "m": args.m})
    run.csv(f"spectrum_{args.act}.csv", ("index", "value"), enumerate(ns))
    run.plot(line_plot, f"spectrum_{args.act}.png",
             [(f"{args.act} sigma={sigma:g}", np.arange(ns.size), np.maximum(ns, 1e-300))],
             xlabel="k", ylabel="s_k / s_0", logy=True)
    run.finish()


def cmd_pcs(args):
    from .plotting import line_plot

    grid = Grid1D.uniform(args.n, args.m)
    sd = decompose(build(grid, ActivationSpec(args.act, args.sigma)))
    for k in args.k:
        if not 0 <= k < sd.s.size:
            raise UsageError(f"component index {k} out of range [0, {sd.s.size})")
    cols = [sd.u[:, k] for k in args.k]
    run = Run(args, "pcs",
              {"act": args.act, "sigma": args.sigma, "n": args.n, "m": args.m, "k": args.k})
    run.csv(f"pcs_{args.act}.csv", ["x"] + [f"pc_{k}" for k in args.k],
            zip(grid.x, *cols))
    run.csv(f"dst_correlation_{args.act}.csv", ("k", "correlation"),
            [(k, dst_correlation(c, k, grid.x)) for k, c in zip(args.k, cols)])
    run.plot(line_plot, f"pcs_{args.act}.png",
             [(f"k={k}", grid.x, c) for k, c in zip(args.k, cols)],
             xlabel="x", ylabel="u_k(x)")
    run.finish()


def cmd_mask(args):
    from .plotting import line_plot

    s = np.logspace(args.log_smin, args.log_smax, args.points)
    kappa = kappa_from(args.alpha, args.q, E_INV)
    gd = mask_gd(s, args.alpha, args.q)
    pca = mask_pca(s, kappa)
    run = Run(args, "mask", {"alpha": args.alpha, "q": args.q, "kappa": kappa,
                             "log_smin": args.log_smin, "log_smax": args.log_smax,
                             "points": args.points})
    run.csv("mask.csv", ("q", "s", "gd_flow", "pca"),
            [(args.q, si, g, p) for si, g, p in zip(s, gd, pca)])
    run.plot(line_plot, "mask.png",
             [(f"gd q={args.q:g}", np.log10(s), gd), ("pca", np.log10(s), pca)],
             xlabel="log10 s", ylabel="mask")
    run.finish()


def cmd_iters(args):
    from .plotting import line_plot

    sigma = args.sigma if args.sigma is not None else float(args.m)
    Ks = np.arange(1, args.kmax + 1)
    rows, series = [], []
    for act in args.acts:
        sd = decompose(_matrix(act, sigma, args.n, args.m))
        if args.kmax >= sd.s.size:
            raise UsageError(f"--kmax must be below the rank bound {sd.s.size}")
        qs = iteration_curve(sd, Ks)
        rows += [(act, int(k), q) for k, q in zip(Ks, qs)]
        series.append((act, Ks, qs))
    run = Run(args, "iters", {"acts": args.acts, "kmax": args.kmax, "sigma": sigma,
                              "n": args.n, "m": args.m})
    run.csv("iters.csv", ("activation", "K", "q"), rows)
    run.plot(line_plot, "iters.png", series, xlabel="K", ylabel="q", logy=True)
    run.finish()


def cmd_spline(args):
    from .plotting import line_plot

    m = args.m
    col = m // 2 if args.col is None else args.col
    if not 0 <= col < m:
        raise UsageError(f"--col must be in [0, {m})")
    x = sample_coords(m)
    col_rows, eq_rows, series = [], [], []
    header = ["x"]
    rng = np.random.default_rng(args.seed)
    idx = np.arange(0, m, 2)
    y = np.sin(2 * np.pi * x[idx]) + args.noise * rng.standard_normal(idx.size)
    for r in args.r:
        fd = build_nabla(m, r)
        numeric = inverse_columns(fd, [col])[:, 0]
        analytic = analytic_column(fd, col)
        scale = float(analytic @ numeric / (analytic @ analytic))
        col_rows.append(numeric)
        col_rows.append(scale * analytic)
        header += [f"r{r}_column", f"r{r}_analytic"]
        series += [(f"r={r}", x, numeric), (f"r={r} analytic", x, scale * analytic)]
        err = column_shape_error(fd, col)
        for lam in args.lam:
            rep = spline_objective_equivalence_check(m, r, lam, (idx, y))
            eq_rows.append((m, r, lam, rep.rel_discrepancy, err))
    run = Run(args, "spline", {"m": m, "r": args.r, "col": col, "lam": args.lam,
                               "noise": args.noise})
    run.csv("spline_columns.csv", header, zip(x, *col_rows))
    run.csv("spline_equivalence.csv",
            ("m", "r", "lambda", "rel_discrepancy", "column_shape_error"), eq_rows)
    run.plot(line_plot, "spline_columns.png", series, xlabel="x", ylabel="column")
    run.finish()


def _load_experiment(args) -> ExperimentConfig:
    cfg = read_config(args.config) if args.config else ExperimentConfig()
    overrides = {}
    if args.engine:
        overrides["engine"] = args.engine
    if args.workers:
        overrides["workers"] = args.workers
    if args.signal:
        overrides["signal"] = args.signal
    if overrides:
        d = {k: v for k, v in cfg.__dict__.items()}
        d.update(overrides)
        cfg = ExperimentConfig(**d)
    return cfg


def cmd_reconstruct(args):
    from .plotting import line_plot

    cfg = _load_experiment(args)
    results = reconstruct_sweep(cfg)
    run = Run(args, "reconstruct", cfg.to_mapping())
    run.seed = cfg.seed if args.seed is None else args.seed
    run.csv("reconstruction.csv", ReconstructionResult.CSV_HEADER,
            [r.csv_row() for r in results])
    for strategy in cfg.strategies:
        sub = [r for r in results if r.strategy == strategy]
        series = []
        for act in cfg.activations:
            pts = [r for r in sub if r.activation == act]
            series.append((act, [r.K for r in pts], [r.psnr_db for r in pts]))
        series.append(("dst", [r.K for r in sub[: len(cfg.k_values)]],
                       [r.baseline_psnr_db for r in sub[: len(cfg.k_values)]]))
        run.plot(line_plot, f"reconstruction_{strategy}.png", series,
                 xlabel="K", ylabel="PSNR [dB]", title=strategy)
    run.finish()


def cmd_train(args):
    from .plotting import line_plot

    synth = SynthSpec(n=args.n)
    x, y = resolve(SignalSource.from_string(args.signal, args.row, synth))
    dm = build(Grid1D(x, np.linspace(0.0, 1.0, args.m)), ActivationSpec(args.act, args.sigma))
    alpha = args.alpha
    if alpha is None:
        alpha = 1.0 / np.linalg.norm(dm.a, 2) ** 2
    res = train(dm, y, TrainerConfig(alpha, args.q))
    run = Run(args, "train", {"act": args.act, "sigma": args.sigma, "m": args.m,
                              "n": int(y.size), "alpha": alpha, "q": args.q,
                              "signal": args.signal})
    run.csv("residuals.csv", ("k", "residual"), enumerate(res.residuals))
    run.csv("fit.csv", ("x", "y", "y_hat"), zip(x, y, dm.a @ res.w))
    run.plot(line_plot, "residuals.png",
             [("", np.arange(res.residuals.size), res.residuals)],
             xlabel="iteration", ylabel="||y - A w||", logy=True)
    run.finish()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="out", help="output directory (default: out)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("csv", "both"), default="both",
                        help="csv only, or csv plus PNG plots")
    common.add_argument("--stamp", action="store_true",
                        help="embed a creation timestamp in plot metadata")

    p = argparse.ArgumentParser(prog="gdshrink", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def design_flags(sp, n=512, m=512):
        sp.add_argument("--act", choices=KINDS, default="heaviside")
        sp.add_argument("--sigma", type=_positive, default=1.0)
        sp.add_argument("--n", type=int, default=n)
        sp.add_argument("--m", type=int, default=m)

    sp = sub.add_parser("spectrum", parents=[common], help="normalised singular values")
    design_flags(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("pcs", parents=[common], help="principal components")
    design_flags(sp)
    sp.add_argument("--k", type=_int_list, default=[0, 4, 5, 9])
    sp.set_defaults(func=cmd_pcs)

    sp = sub.add_parser("mask", parents=[common], help="GD masking curve")
    sp.add_argument("--alpha", type=_positive, default=1.0)
    sp.add_argument("--q", type=_positive, default=100.0)
    sp.add_argument("--log-smin", type=float, default=-3.0)
    sp.add_argument("--log-smax", type=float, default=1.0)
    sp.add_argument("--points", type=int, default=201)
    sp.set_defaults(func=cmd_mask)

    sp = sub.add_parser("iters", parents=[common], help="iterations needed per K")
    sp.add_argument("--acts", type=_act_list, default=["heaviside", "tanh", "relu", "relu2"])
    sp.add_argument("--kmax", type=int, default=64)
    sp.add_argument("--sigma", type=_positive, default=None, help="default: m")
    sp.add_argument("--n", type=int, default=2048)
    sp.add_argument("--m", type=int, default=2048)
    sp.set_defaults(func=cmd_iters)

    sp = sub.add_parser("spline", parents=[common], help="finite-difference inverse columns")
    sp.add_argument("--m", type=int, default=200)
    sp.add_argument("--r", type=_int_list, default=[1, 2, 3])
    sp.add_argument("--col", type=int, default=None, help="column index (default m/2)")
    sp.add_argument("--lam", type=_float_list, default=[1e-4, 1e-2, 1.0, 1e2])
    sp.add_argument("--noise", type=float, default=0.1)
    sp.set_defaults(func=cmd_spline)

    sp = sub.add_parser("reconstruct", parents=[common], help="PSNR sweep vs DST baseline")
    sp.add_argument("--config", help="flat key=value experiment config")
    sp.add_argument("--engine", choices=("mask", "train"))
    sp.add_argument("--workers", type=int)
    sp.add_argument("--signal", help="synthetic, or a .pgm/.csv path")
    sp.set_defaults(func=cmd_reconstruct, seed=None)

    sp = sub.add_parser("train", parents=[common], help="explicit gradient descent")
    sp.add_argument("--act", choices=KINDS, default="relu")
    sp.add_argument("--sigma", type=_positive, default=1.0)
    sp.add_argument("--m", type=int, default=256)
    sp.add_argument("--n", type=int, default=256)
    sp.add_argument("--signal", default="synthetic")
    sp.add_argument("--row", type=int, default=100)
    sp.add_argument("--alpha", type=_positive, default=None, help="default: 1/s_0^2")
    sp.add_argument("--q", type=int, default=1000)
    sp.set_defaults(func=cmd_train)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (UsageError, ConfigError) as exc:
        parser.print_usage(sys.stderr)
        print(f"gdshrink {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except NUMERIC_ERRORS as exc:
        print(f"gdshrink {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
