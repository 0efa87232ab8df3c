"""Command line: ``hypercs figure`` writes figure data as CSV, ``hypercs verify`` runs checks.

Exit codes: 0 success, 1 failed verification or numerical failure,
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from hypercs import momentproblem, stats
from hypercs.errors import ConfigurationError, DomainError, HyperCSError
from hypercs.verify import SUITES, VerifyConfig, format_report, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

FIGURE_DEFAULTS = {
    # id: (x_min, x_max, steps)
    **{i: (0.001, 20.0, 400) for i in range(1, 8)},
    8: (-3.0, 3.0, 61),
    9: (-3.0, 3.0, 61),
}


@dataclass
class RunConfig:
    command: str
    figure_id: int | None = None
    suite: str | None = None
    r_values: tuple[int, ...] = (1, 2, 3)
    x_min: float | None = None
    x_max: float | None = None
    steps: int | None = None
    tail_tol: float = 1e-12
    quad: momentproblem.QuadConfig = field(default_factory=momentproblem.QuadConfig)
    output_path: str = "-"
    workers: int = 1

    def __post_init__(self):
        if self.command == "figure":
            if self.figure_id not in FIGURE_DEFAULTS:
                raise ConfigurationError(f"figure id must be 1..9, got {self.figure_id}")
            lo, hi, n = FIGURE_DEFAULTS[self.figure_id]
            self.x_min = lo if self.x_min is None else self.x_min
            self.x_max = hi if self.x_max is None else self.x_max
            self.steps = n if self.steps is None else self.steps
            if not self.x_min < self.x_max:
                raise ConfigurationError("need x_min < x_max")
            if self.steps < 2:
                raise ConfigurationError("need steps >= 2")
            if self.figure_id == 1 and self.x_min <= 0:
                raise ConfigurationError("figure 1 is log-spaced and needs x_min > 0")
            if self.figure_id in range(2, 8) and self.x_min < 0:
                raise ConfigurationError("x = |z|^2 must be >= 0")
        elif self.command == "verify":
            if self.suite not in SUITES + ("all",):
                raise ConfigurationError(f"unknown suite {self.suite!r}")
        if not self.r_values or any(r < 1 for r in self.r_values):
            raise ConfigurationError("r values must be positive integers")
        if self.workers < 1:
            raise ConfigurationError("workers must be >= 1")


# ---------------------------------------------------------------------------
# figure rows; module-level so a process pool can pickle them


def _row_weight(r_values, x):
    specs = [momentproblem.MellinBarnesSpec.for_r(r) for r in r_values]
    return [math.log(momentproblem.weight_W(s, x, adaptive=True)) for s in specs]


def _row_p_lowest(r_values, x):
    return [stats.probability_P(r, r, x) for r in r_values] + [stats.standard_cs_probability(0, x)]


def _row_p_excited(r_values, x):
    return [stats.probability_P(r, r + 1, x) for r in r_values] + [stats.standard_cs_probability(1, x)]


def _row_mean(r_values, x):
    return [stats.mean_photon_number(r, x) for r in r_values]


def _row_mandel(r_values, x):
    return [stats.mandel_Q(r, x) for r in r_values]


def _row_omega(r_values, x):
    return [stats.metric_omega(r, x) for r in r_values]


def _row_var_x(r_values, x):
    # z on the positive real axis, |z|^2 = x
    return [stats.quadrature_variances(r, math.sqrt(x))[0] for r in r_values]


def _row_plane(which, point):
    re, im = point
    vx, vp = stats.quadrature_variances(1, complex(re, im))
    return [vx if which == "x" else vp]


_ONE_D = {
    1: (_row_weight, "ln_W_r{r}", None),
    2: (_row_p_lowest, "P_r{r}", "poisson"),
    3: (_row_p_excited, "P_r{r}", "poisson"),
    4: (_row_mean, "nbar_r{r}", None),
    5: (_row_mandel, "Q_r{r}", None),
    6: (_row_omega, "omega_r{r}", None),
    7: (_row_var_x, "varX_r{r}", None),
}


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _map(fn, items, workers):
    if workers == 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def run_figure(cfg: RunConfig) -> str:
    """CSV text for one figure; rows in grid order whatever the worker count."""
    fid = cfg.figure_id
    buf = io.StringIO()
    if fid in _ONE_D:
        fn, pattern, extra = _ONE_D[fid]
        if fid == 1:
            xs = np.geomspace(cfg.x_min, cfg.x_max, cfg.steps)
        else:
            xs = np.linspace(cfg.x_min, cfg.x_max, cfg.steps)
        header = ["x"] + [pattern.format(r=r) for r in cfg.r_values]
        if extra:
            header.append(extra)
        rows = _map(partial(fn, cfg.r_values), [float(x) for x in xs], cfg.workers)
        buf.write(",".join(header) + "\n")
        for x, row in zip(xs, rows):
            buf.write(",".join(_fmt(v) for v in [x, *row]) + "\n")
    else:
        which = "x" if fid == 8 else "p"
        side = np.linspace(cfg.x_min, cfg.x_max, cfg.steps)
        points = [(float(re), float(im)) for im in side for re in side]
        rows = _map(partial(_row_plane, which), points, cfg.workers)
        buf.write(f"re_z,im_z,var{which.upper()}\n")
        for (re, im), row in zip(points, rows):
            buf.write(",".join(_fmt(v) for v in (re, im, *row)) + "\n")
    return buf.getvalue()


def run_verify(cfg: RunConfig) -> tuple[str, int]:
    vcfg = VerifyConfig(r_values=cfg.r_values, tail_tol=cfg.tail_tol, quad=cfg.quad)
    checks = run_suite(cfg.suite, vcfg)
    code = EXIT_OK if all(c.passed for c in checks) else EXIT_FAIL
    return format_report(cfg.suite, checks), code


# ---------------------------------------------------------------------------


def _r_list(text):
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hypercs", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    fig = sub.add_parser("figure", help="write the data behind one figure as CSV")
    fig.add_argument("--id", type=int, required=True, dest="figure_id")
    fig.add_argument("--r", type=_r_list, default=(1, 2, 3), dest="r_values")
    fig.add_argument("--x-min", type=float)
    fig.add_argument("--x-max", type=float)
    fig.add_argument("--steps", type=int)
    fig.add_argument("--workers", type=int, default=1)
    fig.add_argument("--out", default="-", dest="output_path")

    ver = sub.add_parser("verify", help="run a verification suite")
    ver.add_argument("--suite", required=True, choices=SUITES + ("all",))
    ver.add_argument("--r", type=_r_list, default=(1, 2, 3), dest="r_values")
    ver.add_argument("--tail-tol", type=float, default=1e-12)
    ver.add_argument("--contour-re", type=float, default=0.5)
    ver.add_argument("--im-cutoff", type=float)
    ver.add_argument("--quad-step", type=float, default=0.05)
    ver.add_argument("--x-max-integration", type=float)
    ver.add_argument("--out", default="-", dest="output_path")
    return parser


def _config(args) -> RunConfig:
    if args.command == "figure":
        return RunConfig(
            command="figure",
            figure_id=args.figure_id,
            r_values=args.r_values,
            x_min=args.x_min,
            x_max=args.x_max,
            steps=args.steps,
            workers=args.workers,
            output_path=args.output_path,
        )
    quad = momentproblem.QuadConfig(
        contour_re=args.contour_re,
        im_cutoff=args.im_cutoff,
        step=args.quad_step,
        x_max=args.x_max_integration,
    )
    # validate contour parameters before any work starts
    quad.spec(1)
    return RunConfig(
        command="verify",
        suite=args.suite,
        r_values=args.r_values,
        tail_tol=args.tail_tol,
        quad=quad,
        output_path=args.output_path,
    )


def _emit(text, path):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
    except (ConfigurationError, DomainError) as exc:
        print(f"hypercs: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if cfg.command == "figure":
            text, code = run_figure(cfg), EXIT_OK
        else:
            text, code = run_verify(cfg)
    except (ConfigurationError, DomainError) as exc:
        print(f"hypercs: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (HyperCSError, ArithmeticError) as exc:
        print(f"hypercs: numerical failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(text, cfg.output_path)
    return code


if __name__ == "__main__":
    sys.exit(main())
