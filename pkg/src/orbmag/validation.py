"""Self-contained validation suite.

Ten checks covering the physics contracts of the package: zero-time nulls,
closed form against quadrature cross-checks in both families, Monte Carlo
agreement, low-temperature saturation, classical suppression of the moment
by damping, pole identities with causality of the response, the confinement
to free continuity limit, field-reversal antisymmetry, and byte-level
determinism of the command line output.

Each check returns a CriterionResult with a wall-clock budget; a check only
passes if its numerical assertions hold and it finishes inside the budget.
"""

from __future__ import annotations

import math
import os
import tempfile
import time
from dataclasses import dataclass, replace

import numpy as np

from .mc import McConfig, estimate_moment
from .moment_confined import (moment_general_confined, moment_highT_confined,
                              moment_lowT_confined)
from .moment_free import (moment_general_free, moment_highT_free,
                          moment_lowT_free)
from .params import build_params, gamma_bar
from .response import check_causality, poles_confined
from .thermal import ThermalKernel


@dataclass(frozen=True)
class CriterionResult:
    index: int
    name: str
    passed: bool
    runtime_s: float
    limit_s: float
    detail: str


def _finish(index, name, ok, t0, limit, detail):
    runtime = time.perf_counter() - t0
    if runtime >= limit:
        ok = False
        detail = f"runtime {runtime:.2f}s exceeded budget {limit:g}s; " + detail
    return CriterionResult(index=index, name=name, passed=ok,
                           runtime_s=runtime, limit_s=limit, detail=detail)


def _random_params(rng, confined, signed_field=True):
    gamma = 10.0 ** rng.uniform(-1.3, 1.7)
    omega_c = rng.uniform(-40.0, 40.0) if signed_field \
        else 10.0 ** rng.uniform(-1.0, 1.6)
    omega_0 = 10.0 ** rng.uniform(-0.3, 1.4) if confined else 0.0
    temperature = 10.0 ** rng.uniform(-1.0, 1.0)
    return build_params(gamma, omega_c, omega_0, temperature)


def criterion_1() -> CriterionResult:
    """All four closed forms vanish identically at t = 0."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(200):
        pf = _random_params(rng, confined=False)
        pc = _random_params(rng, confined=True)
        for val in (moment_highT_free(pf, 0.0), moment_lowT_free(pf, 0.0),
                    moment_highT_confined(pc, 0.0),
                    moment_lowT_confined(pc, 0.0)):
            worst = max(worst, abs(val))
    ok = worst < 1e-10
    return _finish(1, "zero-time null", ok, t0, 1.0,
                   f"max |M_z(0)| = {worst:.3e} over 200 random sets")


_FREE_POINTS = (
    (10.0, 1.0, 0.0), (10.0, 1.0, 0.3), (10.0, 1.0, 1.0), (10.0, 1.0, 2.0),
    (0.5, 25.0, 0.3), (0.5, 25.0, 0.8), (0.5, 25.0, 4.0), (0.5, 25.0, 40.0),
    (40.0, 1.0, 0.1), (40.0, 1.0, 0.5),
    (2.0, 2.0, 0.5), (2.0, 2.0, 2.0),
    (5.0, 10.0, 0.2), (5.0, 10.0, 1.0),
    (20.0, 0.5, 0.05), (20.0, 0.5, 1.0),
    (1.0, 3.0, 1.0), (1.0, 3.0, 6.0),
    (0.8, 0.02, 2.0), (0.8, 0.02, 12.0),
)

_CONFINED_POINTS = (
    (10.0, 1.0, 5.0, 0.0), (10.0, 1.0, 5.0, 0.3),
    (10.0, 1.0, 5.0, 1.0), (10.0, 1.0, 5.0, 2.0),
    (0.5, 25.0, 5.0, 0.4), (0.5, 25.0, 5.0, 0.8),
    (0.5, 25.0, 5.0, 4.0), (0.5, 25.0, 5.0, 20.0),
    (40.0, 1.0, 5.0, 0.1), (40.0, 1.0, 5.0, 0.5),
    (2.0, 2.0, 1.0, 0.5), (2.0, 2.0, 1.0, 2.0),
    (5.0, 10.0, 3.0, 0.2), (5.0, 10.0, 3.0, 1.0),
    (20.0, 0.5, 5.0, 0.05), (20.0, 0.5, 5.0, 1.0),
    (1.0, 3.0, 2.0, 1.0), (1.0, 3.0, 2.0, 6.0),
    (0.8, 0.02, 1.0, 2.0), (0.8, 0.02, 1.0, 12.0),
)

_QUAD_TOL = 1e-6
_QUAD_REL_TOL = 1e-9


def criterion_2() -> CriterionResult:
    """General quadrature reproduces both free closed forms."""
    t0 = time.perf_counter()
    worst = 0.0
    where = ""
    for gamma, omega_c, t in _FREE_POINTS:
        p = build_params(gamma, omega_c, 0.0, 1.0)
        pairs = (
            (ThermalKernel.CLASSICAL_HIGH_T, moment_highT_free(p, t)),
            (ThermalKernel.QUANTUM_LOW_T, moment_lowT_free(p, t)),
        )
        for kernel, closed in pairs:
            quad = moment_general_free(p, t, kernel, rel_tol=_QUAD_REL_TOL)
            diff = abs(quad - closed)
            if diff > worst:
                worst = diff
                where = f"({gamma:g},{omega_c:g}) t={t:g} {kernel.value}"
    ok = worst < _QUAD_TOL
    return _finish(2, "free closed forms vs quadrature", ok, t0, 60.0,
                   f"max |quad - closed| = {worst:.3e} at {where}")


def criterion_3() -> CriterionResult:
    """General quadrature reproduces both confined closed forms."""
    t0 = time.perf_counter()
    worst = 0.0
    where = ""
    for gamma, omega_c, omega_0, t in _CONFINED_POINTS:
        p = build_params(gamma, omega_c, omega_0, 1.0)
        pairs = (
            (ThermalKernel.CLASSICAL_HIGH_T, moment_highT_confined(p, t)),
            (ThermalKernel.QUANTUM_LOW_T, moment_lowT_confined(p, t)),
        )
        for kernel, closed in pairs:
            quad = moment_general_confined(p, t, kernel,
                                           rel_tol=_QUAD_REL_TOL)
            diff = abs(quad - closed)
            if diff > worst:
                worst = diff
                where = (f"({gamma:g},{omega_c:g},{omega_0:g}) t={t:g} "
                         f"{kernel.value}")
    ok = worst < _QUAD_TOL
    return _finish(3, "confined closed forms vs quadrature", ok, t0, 120.0,
                   f"max |quad - closed| = {worst:.3e} at {where}")


def criterion_4() -> CriterionResult:
    """Monte Carlo sampler agrees with the classical closed forms to 3 sigma."""
    t0 = time.perf_counter()
    designs = (
        (build_params(10.0, 1.0, 0.0, 1.0), 0.008,
         (0.05, 0.1, 0.2, 0.3, 0.5), moment_highT_free),
        (build_params(0.5, 25.0, 0.0, 1.0), 0.002,
         (0.2, 0.5, 1.0, 2.0, 4.0), moment_highT_free),
        (build_params(10.0, 1.0, 5.0, 1.0), 0.008,
         (0.05, 0.1, 0.2, 0.3, 0.5), moment_highT_confined),
    )
    worst_z = 0.0
    where = ""
    ok = True
    for p, dt, times, closed_fn in designs:
        cfg = McConfig(n_trajectories=100000, dt=dt, t_max=max(times),
                       seed=20260814)
        series = estimate_moment(p, cfg, times)
        for t, est, err in zip(series.times, series.values, series.stderr):
            ref = closed_fn(p, t)
            if err <= 0.0:
                ok = False
                where = f"zero stderr at t={t:g}"
                continue
            z = abs(est - ref) / err
            if z > worst_z:
                worst_z = z
                where = (f"({p.gamma:g},{p.omega_c:g},{p.omega_0:g}) "
                         f"t={t:g}")
    ok = ok and worst_z < 3.0
    return _finish(4, "monte carlo vs closed forms", ok, t0, 120.0,
                   f"worst |z| = {worst_z:.2f} at {where} (n=1e5)")


def _settle_time(moment_fn, p, threshold=1e-3, gt_stop=20.0, n=2001):
    """Real-time instant after which |M_z + 1/2| stays below threshold on a
    uniform gamma*t grid up to gt_stop; inf if it has not settled by then."""
    gts = np.linspace(0.0, gt_stop, n)
    dev = np.array([abs(moment_fn(p, gt / p.gamma) + 0.5) for gt in gts])
    inside = dev < threshold
    if not inside[-1]:
        return math.inf
    idx = len(inside) - 1
    while idx > 0 and inside[idx - 1]:
        idx -= 1
    return gts[idx] / p.gamma


def criterion_5() -> CriterionResult:
    """Zero-temperature saturation at M_z = -1/2 deep in the damped regime."""
    t0 = time.perf_counter()
    gammas = (10.0, 20.0, 30.0, 40.0)
    ok = True
    lines = []
    for label, omega_0, fn in (("free", 0.0, moment_lowT_free),
                               ("confined", 5.0, moment_lowT_confined)):
        devs = []
        settles = []
        for g in gammas:
            p = build_params(g, 1.0, omega_0, 0.0)
            devs.append(abs(fn(p, 20.0 / g) + 0.5))
            settles.append(_settle_time(fn, p))
        if max(devs) >= 1e-3:
            ok = False
        if any(not (settles[i] > settles[i + 1]) for i in range(3)):
            ok = False
        lines.append(f"{label}: max|M+1/2|@gt=20 = {max(devs):.2e}, "
                     f"settle t = "
                     + "/".join(f"{s:.3f}" for s in settles))
    return _finish(5, "low-temperature saturation", ok, t0, 5.0,
                   "; ".join(lines))


def criterion_6() -> CriterionResult:
    """Classical moment is suppressed by damping and by confinement."""
    t0 = time.perf_counter()
    gammas = np.arange(5.0, 50.0 + 1e-9, 0.5)
    free_mag = np.array([abs(moment_highT_free(
        build_params(g, 1.0, 0.0, 1.0), 1.0)) for g in gammas])
    conf_mag = np.array([abs(moment_highT_confined(
        build_params(g, 1.0, 5.0, 1.0), 1.0)) for g in gammas])
    monotone = bool(np.all(np.diff(free_mag) < 0.0))
    i40 = int(np.argmin(np.abs(gammas - 40.0)))
    free40 = free_mag[i40]
    conf40 = conf_mag[i40]
    below = free40 < 1e-3 and conf40 < 2e-4
    weaker = bool(np.all(conf_mag < free_mag))
    ok = monotone and below and weaker
    return _finish(
        6, "classical suppression by damping", ok, t0, 5.0,
        f"free monotone={monotone}, |M|free(40)={free40:.3e}, "
        f"|M|conf(40)={conf40:.3e}, confined<free everywhere={weaker}")


def criterion_7() -> CriterionResult:
    """Root identities of the confined response and causal Green functions."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(707)
    worst_id = 0.0
    for _ in range(1000):
        p = build_params(rng.uniform(1e-3, 100.0), rng.uniform(0.0, 100.0),
                         rng.uniform(1e-3, 100.0), 1.0)
        roots = poles_confined(p)
        gb = gamma_bar(p)
        rel_sum = abs(roots.gamma_plus + roots.gamma_minus + gb) / abs(gb)
        rel_prod = abs(roots.gamma_plus * roots.gamma_minus
                       - p.omega_0 ** 2) / p.omega_0 ** 2
        stable = max(roots.gamma_plus.real, roots.gamma_minus.real) <= 1e-14
        worst_id = max(worst_id, rel_sum, rel_prod,
                       0.0 if stable else math.inf)
    ids_ok = worst_id < 1e-12
    sets = (build_params(10.0, 1.0, 0.0, 1.0),
            build_params(0.5, 25.0, 0.0, 1.0),
            build_params(10.0, 1.0, 5.0, 1.0),
            build_params(0.5, 25.0, 5.0, 1.0),
            build_params(2.0, 2.0, 1.0, 1.0))
    worst_causal = 0.0
    worst_acausal = 0.0
    for p in sets:
        rep = check_causality(p)
        worst_causal = max(worst_causal, rep.max_residual_causal)
        worst_acausal = max(worst_acausal, rep.max_residual_acausal)
    ft_ok = worst_causal < 1e-4 and worst_acausal < 1e-4
    ok = ids_ok and ft_ok
    return _finish(
        7, "pole identities and causality", ok, t0, 60.0,
        f"max relative identity residual = {worst_id:.2e} (1000 sets); "
        f"inverse-FT residuals: t>0 {worst_causal:.2e}, t<0 "
        f"{worst_acausal:.2e}")


def criterion_8() -> CriterionResult:
    """Weak confinement reduces to the free moment in both limits."""
    t0 = time.perf_counter()
    pc = build_params(10.0, 1.0, 1e-4, 1.0)
    pf = build_params(10.0, 1.0, 0.0, 1.0)
    worst = 0.0
    for t in np.linspace(0.0, 2.0, 41):
        worst = max(worst,
                    abs(moment_highT_confined(pc, t)
                        - moment_highT_free(pf, t)),
                    abs(moment_lowT_confined(pc, t)
                        - moment_lowT_free(pf, t)))
    ok = worst < 1e-4
    return _finish(8, "weak-confinement continuity", ok, t0, 5.0,
                   f"max |confined(w0=1e-4) - free| = {worst:.3e} on "
                   f"t in [0,2]")


def criterion_9() -> CriterionResult:
    """All four closed forms are odd under field reversal."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(909)
    worst = 0.0
    for _ in range(100):
        pf = _random_params(rng, confined=False, signed_field=False)
        pc = _random_params(rng, confined=True, signed_field=False)
        t = rng.uniform(0.0, 3.0)
        for p, forms in ((pf, (moment_highT_free, moment_lowT_free)),
                         (pc, (moment_highT_confined, moment_lowT_confined))):
            pm = replace(p, omega_c=-p.omega_c)
            for fn in forms:
                worst = max(worst, abs(fn(p, t) + fn(pm, t)))
    ok = worst < 1e-10
    return _finish(9, "field-reversal antisymmetry", ok, t0, 1.0,
                   f"max |M(w_c) + M(-w_c)| = {worst:.3e} over 100 sets")


def _read_outputs(directory):
    out = {}
    for name in sorted(os.listdir(directory)):
        if name.endswith(".csv"):
            with open(os.path.join(directory, name), "rb") as fh:
                out[name] = fh.read()
    return out


def criterion_10() -> CriterionResult:
    """Repeated figure and seeded Monte Carlo runs are byte-identical."""
    from . import cli

    t0 = time.perf_counter()
    ok = True
    notes = []
    with tempfile.TemporaryDirectory() as tmp:
        d1 = os.path.join(tmp, "a")
        d2 = os.path.join(tmp, "b")
        for d in (d1, d2):
            rc = cli.main(["figure", "fig1", "--out", d])
            if rc != 0:
                ok = False
                notes.append(f"figure exit code {rc}")
        f1, f2 = _read_outputs(d1), _read_outputs(d2)
        fig_same = f1 == f2 and len(f1) == 4
        notes.append(f"figure csv identical={fig_same} ({len(f1)} files)")
        mc_paths = [os.path.join(tmp, f"mc{i}.csv") for i in (1, 2)]
        for path in mc_paths:
            rc = cli.main(["moment", "--gamma", "10", "--omega-c", "1",
                           "--method", "mc", "--seed", "7",
                           "--mc-n", "2000", "--t-start", "0", "--t-stop",
                           "3", "--n", "4", "--out", path])
            if rc != 0:
                ok = False
                notes.append(f"moment exit code {rc}")
        with open(mc_paths[0], "rb") as fh:
            b1 = fh.read()
        with open(mc_paths[1], "rb") as fh:
            b2 = fh.read()
        mc_same = b1 == b2 and len(b1) > 0
        notes.append(f"mc csv identical={mc_same}")
        ok = ok and fig_same and mc_same
    return _finish(10, "byte-identical repeated runs", ok, t0, 30.0,
                   "; ".join(notes))


_CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
             criterion_6, criterion_7, criterion_8, criterion_9, criterion_10)


def run_all():
    results = []
    for fn in _CRITERIA:
        try:
            results.append(fn())
        except Exception as exc:  # a crash is a failure, not an abort
            results.append(CriterionResult(
                index=len(results) + 1, name=fn.__name__, passed=False,
                runtime_s=0.0, limit_s=0.0,
                detail=f"raised {type(exc).__name__}: {exc}"))
    return results


def format_report(results) -> str:
    lines = ["orbmag validation report", ""]
    n_pass = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        n_pass += r.passed
        lines.append(f"[{status}] {r.index:2d} {r.name:<36s} "
                     f"{r.runtime_s:7.2f}s  {r.detail}")
    lines.append("")
    lines.append(f"overall: {n_pass}/{len(results)} passed")
    return "\n".join(lines) + "\n"
