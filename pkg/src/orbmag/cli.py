"""Command line interface.

Subcommands:
  moment    one M_z(t) series on a uniform grid -> CSV
  figure    canonical datasets -> per-curve CSV plus a rendered SVG
  sweep     M_z against gamma at a fixed natural time -> CSV
  validate  run the built-in validation suite -> report file, exit code

Times on the command line and in CSV output are expressed in units of the
inverse damping rate, i.e. the printed abscissa is gamma*t. Moments are in
natural units of q*hbar/(m*c); the classical limit is linear in temperature.

All numeric output is written with repr-faithful 17 significant digits and a
fixed locale-independent format, so identical runs produce byte-identical
files. MOMENT_LAB_THREADS controls worker threads for figure and sweep
evaluation (0 or unset selects the CPU count); it never affects output
bytes, only wall time.
"""

from __future__ import annotations

import argparse
import os
import sys

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError, OrbmagError, Unsupported
from .figures import FIGURE_IDS, closed_moment, compute_curve, figure_spec
from .mc import McConfig, estimate_moment
from .moment_confined import moment_general_confined
from .moment_free import moment_general_free
from .params import Params, build_params
from .thermal import ThermalKernel
from .validation import format_report, run_all

_KERNELS = {
    "classical": ThermalKernel.CLASSICAL_HIGH_T,
    "lowt": ThermalKernel.QUANTUM_LOW_T,
    "full": ThermalKernel.FULL_COTH,
}

_METHODS = ("closed", "quad", "mc")

_DEFAULTS = {
    "gamma": 10.0,
    "omega_c": 1.0,
    "omega_0": 0.0,
    "temperature": 1.0,
    "kernel": "classical",
    "method": "closed",
    "t_start": 0.0,
    "t_stop": 20.0,
    "n": 201,
    "rel_tol": 1e-9,
    "seed": 12345,
    "out": None,
    "mc_n": 20000,
    "mc_dt": None,
    "omega_cutoff": None,
    "gamma_start": 5.0,
    "gamma_stop": 50.0,
    "t_at": 1.0,
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    gamma: float
    omega_c: float
    omega_0: float
    temperature: float
    kernel: str
    method: str
    t_start: float
    t_stop: float
    n: int
    rel_tol: float
    seed: int
    out: str | None
    mc_n: int
    mc_dt: float | None
    omega_cutoff: float | None
    gamma_start: float
    gamma_stop: float
    t_at: float
    figure_id: str | None


def _fmt(x) -> str:
    x = float(x)
    if x == 0.0:
        x = 0.0
    return format(x, ".17g")


def _thread_count() -> int:
    raw = os.environ.get("MOMENT_LAB_THREADS", "0").strip()
    try:
        n = int(raw)
    except ValueError:
        raise DomainError(
            f"MOMENT_LAB_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise DomainError("MOMENT_LAB_THREADS must be >= 0")
    return n if n > 0 else (os.cpu_count() or 1)


def _parallel_map(fn, items):
    threads = _thread_count()
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def _load_config(path):
    if path is None:
        return {}
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    unknown = sorted(set(data) - set(_DEFAULTS))
    if unknown:
        raise DomainError(f"unknown config key(s): {', '.join(unknown)}")
    return data


def _resolve(args) -> RunConfig:
    file_cfg = _load_config(getattr(args, "config", None))

    def pick(name):
        val = getattr(args, name, None)
        if val is None:
            val = file_cfg.get(name, _DEFAULTS[name])
        return val

    kernel = str(pick("kernel"))
    if kernel not in _KERNELS:
        raise DomainError(
            f"kernel must be one of {', '.join(_KERNELS)}, got {kernel!r}")
    method = str(pick("method"))
    if method not in _METHODS:
        raise DomainError(
            f"method must be one of {', '.join(_METHODS)}, got {method!r}")
    cfg = RunConfig(
        command=args.command,
        gamma=float(pick("gamma")),
        omega_c=float(pick("omega_c")),
        omega_0=float(pick("omega_0")),
        temperature=float(pick("temperature")),
        kernel=kernel,
        method=method,
        t_start=float(pick("t_start")),
        t_stop=float(pick("t_stop")),
        n=int(pick("n")),
        rel_tol=float(pick("rel_tol")),
        seed=int(pick("seed")),
        out=pick("out"),
        mc_n=int(pick("mc_n")),
        mc_dt=None if pick("mc_dt") is None else float(pick("mc_dt")),
        omega_cutoff=(None if pick("omega_cutoff") is None
                      else float(pick("omega_cutoff"))),
        gamma_start=float(pick("gamma_start")),
        gamma_stop=float(pick("gamma_stop")),
        t_at=float(pick("t_at")),
        figure_id=getattr(args, "figure_id", None),
    )
    if cfg.n < 2:
        raise DomainError("n must be at least 2")
    if cfg.t_start < 0.0:
        raise DomainError("t-start must be >= 0")
    if cfg.t_stop <= cfg.t_start:
        raise DomainError("t-stop must exceed t-start")
    if cfg.rel_tol <= 0.0:
        raise DomainError("rel-tol must be positive")
    if cfg.seed < 0:
        raise DomainError("seed must be a non-negative integer")
    if cfg.mc_n < 1:
        raise DomainError("mc-n must be positive")
    return cfg


def _write_csv(path, meta_lines, header, rows):
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        for line in meta_lines:
            fh.write(f"# {line}\n")
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


_UNITS_LINE = ("t in units of 1/gamma (printed value is gamma*t); "
               "Mz in units of q*hbar/(m*c)")


def _params_line(p: Params, cfg: RunConfig) -> str:
    return (f"gamma={_fmt(p.gamma)} omega_c={_fmt(p.omega_c)} "
            f"omega_0={_fmt(p.omega_0)} temperature={_fmt(p.temperature)} "
            f"kernel={cfg.kernel} method={cfg.method}")


def _quad_moment(p: Params, t: float, kernel: ThermalKernel,
                 rel_tol: float, omega_cutoff) -> float:
    if p.omega_0 > 0.0:
        return moment_general_confined(p, t, kernel, rel_tol=rel_tol,
                                       omega_cutoff=omega_cutoff)
    return moment_general_free(p, t, kernel, rel_tol=rel_tol,
                               omega_cutoff=omega_cutoff)


def cmd_moment(cfg: RunConfig) -> int:
    p = build_params(cfg.gamma, cfg.omega_c, cfg.omega_0, cfg.temperature)
    gt = np.linspace(cfg.t_start, cfg.t_stop, cfg.n)
    t_int = gt / p.gamma
    kernel = _KERNELS[cfg.kernel]
    stderr = None
    if cfg.method == "closed":
        if kernel is ThermalKernel.FULL_COTH:
            raise Unsupported(
                "no closed form exists for the full thermal kernel; use "
                "--method quad with --omega-cutoff")
        values = [closed_moment(p, kernel, t) for t in t_int]
    elif cfg.method == "quad":
        values = [_quad_moment(p, t, kernel, cfg.rel_tol, cfg.omega_cutoff)
                  for t in t_int]
    else:
        if kernel is not ThermalKernel.CLASSICAL_HIGH_T:
            raise Unsupported(
                "the Monte Carlo sampler is classical; use --kernel "
                "classical with --method mc")
        scale = max(p.gamma, abs(p.omega_c), p.omega_0)
        dt = cfg.mc_dt if cfg.mc_dt is not None else 0.05 / scale
        mc_cfg = McConfig(n_trajectories=cfg.mc_n, dt=dt,
                          t_max=float(t_int[-1]), seed=cfg.seed)
        series = estimate_moment(p, mc_cfg, tuple(float(t) for t in t_int))
        values = list(series.values)
        stderr = list(series.stderr)
    meta = ["orbmag moment series", _UNITS_LINE, _params_line(p, cfg)]
    if cfg.method == "mc":
        meta.append(f"seed={cfg.seed} trajectories={cfg.mc_n} "
                    f"dt={_fmt(dt)}")
    if stderr is None:
        rows = [(gt[i], values[i]) for i in range(cfg.n)]
        header = "t,Mz"
    else:
        rows = [(gt[i], values[i], stderr[i]) for i in range(cfg.n)]
        header = "t,Mz,stderr"
    out = cfg.out if cfg.out is not None else "moment.csv"
    _write_csv(out, meta, header, rows)
    return 0


def _figure_one(figure_id: str, out_dir: str) -> None:
    from .plotting import render_figure

    spec = figure_spec(figure_id)
    data = _parallel_map(lambda c: compute_curve(spec, c), spec.curves)
    os.makedirs(out_dir, exist_ok=True)
    header = "t,Mz" if spec.kind == "series" else "gamma,Mz"
    curve_data = []
    for curve, (x, y) in zip(spec.curves, data):
        meta = [
            f"orbmag figure {figure_id}, curve {curve.label}",
            _UNITS_LINE,
            (f"gamma={_fmt(curve.params.gamma)} "
             f"omega_c={_fmt(curve.params.omega_c)} "
             f"omega_0={_fmt(curve.params.omega_0)} "
             f"temperature={_fmt(curve.params.temperature)} "
             f"kernel={curve.kernel.value}"),
        ]
        path = os.path.join(out_dir, f"{figure_id}_{curve.label}.csv")
        _write_csv(path, meta, header, zip(x, y))
        curve_data.append((curve.label, x, y))
    render_figure(spec, curve_data, os.path.join(out_dir,
                                                 f"{figure_id}.svg"))


def cmd_figure(cfg: RunConfig) -> int:
    out_dir = cfg.out if cfg.out is not None else "."
    ids = FIGURE_IDS if cfg.figure_id == "all" else (cfg.figure_id,)
    for figure_id in ids:
        _figure_one(figure_id, out_dir)
    return 0


def cmd_sweep(cfg: RunConfig) -> int:
    if cfg.method == "mc":
        raise Unsupported("sweep supports --method closed or quad")
    if cfg.gamma_start <= 0.0 or cfg.gamma_stop <= cfg.gamma_start:
        raise DomainError("need 0 < gamma-start < gamma-stop")
    kernel = _KERNELS[cfg.kernel]
    if cfg.method == "closed" and kernel is ThermalKernel.FULL_COTH:
        raise Unsupported(
            "no closed form exists for the full thermal kernel; use "
            "--method quad with --omega-cutoff")
    base = build_params(cfg.gamma_start, cfg.omega_c, cfg.omega_0,
                        cfg.temperature)
    gammas = np.linspace(cfg.gamma_start, cfg.gamma_stop, cfg.n)

    def one(g):
        p = replace(base, gamma=float(g))
        if cfg.method == "closed":
            return closed_moment(p, kernel, cfg.t_at)
        return _quad_moment(p, cfg.t_at, kernel, cfg.rel_tol,
                            cfg.omega_cutoff)

    values = _parallel_map(one, gammas)
    meta = [
        "orbmag damping sweep",
        f"Mz at natural time t={_fmt(cfg.t_at)} against gamma; "
        "Mz in units of q*hbar/(m*c)",
        (f"omega_c={_fmt(cfg.omega_c)} omega_0={_fmt(cfg.omega_0)} "
         f"temperature={_fmt(cfg.temperature)} kernel={cfg.kernel} "
         f"method={cfg.method}"),
    ]
    out = cfg.out if cfg.out is not None else "sweep.csv"
    _write_csv(out, meta, "gamma,Mz", zip(gammas, values))
    return 0


def cmd_validate(cfg: RunConfig) -> int:
    results = run_all()
    report = format_report(results)
    out_dir = cfg.out if cfg.out is not None else "."
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "validation_report.txt"), "w",
              encoding="ascii", newline="\n") as fh:
        fh.write(report)
    sys.stdout.write(report)
    return 0 if all(r.passed for r in results) else 1


_DISPATCH = {
    "moment": cmd_moment,
    "figure": cmd_figure,
    "sweep": cmd_sweep,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, metavar="FILE",
                        help="TOML file with flat key = value defaults; "
                             "explicit flags override it")
    common.add_argument("--gamma", type=float, default=None,
                        help="damping rate (default 10)")
    common.add_argument("--omega-c", type=float, default=None,
                        help="cyclotron frequency, sign = field "
                             "orientation (default 1)")
    common.add_argument("--omega-0", type=float, default=None,
                        help="trap frequency, 0 means free (default 0)")
    common.add_argument("--temperature", type=float, default=None,
                        help="bath temperature in natural units (default 1)")
    common.add_argument("--kernel", choices=sorted(_KERNELS), default=None,
                        help="thermal weight: classical, lowt, or full "
                             "(default classical)")
    common.add_argument("--method", choices=_METHODS, default=None,
                        help="closed form, direct quadrature, or Monte "
                             "Carlo (default closed)")
    common.add_argument("--t-start", type=float, default=None,
                        help="first time, in units of 1/gamma (default 0)")
    common.add_argument("--t-stop", type=float, default=None,
                        help="last time, in units of 1/gamma (default 20)")
    common.add_argument("--n", type=int, default=None,
                        help="number of grid points (default 201)")
    common.add_argument("--rel-tol", type=float, default=None,
                        help="quadrature relative tolerance (default 1e-9)")
    common.add_argument("--seed", type=int, default=None,
                        help="Monte Carlo seed (default 12345)")
    common.add_argument("--out", default=None,
                        help="output file (moment, sweep) or directory "
                             "(figure, validate)")
    common.add_argument("--mc-n", type=int, default=None,
                        help="Monte Carlo trajectories (default 20000)")
    common.add_argument("--mc-dt", type=float, default=None,
                        help="Monte Carlo step; default 0.05/max(gamma, "
                             "|omega_c|, omega_0)")
    common.add_argument("--omega-cutoff", type=float, default=None,
                        help="frequency cutoff, required by the full "
                             "kernel at t > 0")

    ap = argparse.ArgumentParser(
        prog="orbmag",
        description="Orbital magnetic moment of a damped charge in a "
                    "magnetic field: closed forms, thermal quadrature, and "
                    "a classical Monte Carlo sampler.")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("moment", parents=[common],
                   help="write one M_z(t) series as CSV")
    pf = sub.add_parser("figure", parents=[common],
                        help="write canonical datasets as CSV plus SVG")
    pf.add_argument("figure_id", choices=FIGURE_IDS + ("all",),
                    help="dataset name")
    ps = sub.add_parser("sweep", parents=[common],
                        help="write M_z against gamma at fixed natural time")
    ps.add_argument("--gamma-start", type=float, default=None,
                    help="first damping rate (default 5)")
    ps.add_argument("--gamma-stop", type=float, default=None,
                    help="last damping rate (default 50)")
    ps.add_argument("--t-at", type=float, default=None,
                    help="natural evaluation time (default 1)")
    sub.add_parser("validate", parents=[common],
                   help="run the validation suite and write a report")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _resolve(args)
        return _DISPATCH[args.command](cfg)
    except tomllib.TOMLDecodeError as exc:
        print(f"error: bad config file: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OrbmagError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
