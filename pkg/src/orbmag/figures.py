"""Canonical figure datasets.

Eight reproducible datasets: six time series of M_z against gamma*t and two
damping sweeps of M_z against gamma at fixed natural time t = 1. All curves
use the closed forms (deterministic and fast); the Monte Carlo path is
exercised through the moment command and the validation suite instead, so
figure output never depends on a seed.

Temperature is 1 in natural units for every classical-limit curve; the
classical moment is linear in T, so that choice only sets the amplitude.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError
from .moment_confined import moment_highT_confined, moment_lowT_confined
from .moment_free import moment_highT_free, moment_lowT_free
from .params import Params, build_params
from .thermal import ThermalKernel

_GAMMA_SET = (10.0, 20.0, 30.0, 40.0)


@dataclass(frozen=True)
class FigureCurve:
    label: str
    params: Params
    kernel: ThermalKernel


@dataclass(frozen=True)
class FigureSpec:
    """kind "series": x is gamma*t, one curve per parameter set.
    kind "sweep": x is gamma, M_z evaluated at natural time t_at."""

    figure_id: str
    kind: str
    x_start: float
    x_stop: float
    n_points: int
    curves: tuple
    t_at: float = 1.0


def _series(figure_id, x_stop, n_points, curves):
    return FigureSpec(figure_id=figure_id, kind="series", x_start=0.0,
                      x_stop=x_stop, n_points=n_points, curves=tuple(curves))


def _gamma_curves(omega_0, kernel):
    temp = 1.0 if kernel is ThermalKernel.CLASSICAL_HIGH_T else 0.0
    return [FigureCurve(label=f"gamma{g:g}",
                        params=build_params(g, 1.0, omega_0, temp),
                        kernel=kernel)
            for g in _GAMMA_SET]


def _both_limit_curves(gamma, omega_c, omega_0):
    return [FigureCurve(label="highT",
                        params=build_params(gamma, omega_c, omega_0, 1.0),
                        kernel=ThermalKernel.CLASSICAL_HIGH_T),
            FigureCurve(label="lowT",
                        params=build_params(gamma, omega_c, omega_0, 0.0),
                        kernel=ThermalKernel.QUANTUM_LOW_T)]


def _sweep(figure_id, omega_0):
    curves = [FigureCurve(label=f"wc{wc:g}",
                          params=build_params(10.0, wc, omega_0, 1.0),
                          kernel=ThermalKernel.CLASSICAL_HIGH_T)
              for wc in (0.5, 1.0, 2.0)]
    return FigureSpec(figure_id=figure_id, kind="sweep", x_start=5.0,
                      x_stop=50.0, n_points=181, curves=tuple(curves),
                      t_at=1.0)


def _build_specs():
    specs = {
        "fig1": _series("fig1", 20.0, 401,
                        _gamma_curves(0.0, ThermalKernel.CLASSICAL_HIGH_T)),
        "fig2": _series("fig2", 10.0, 1601,
                        _both_limit_curves(0.5, 25.0, 0.0)),
        "fig3": _series("fig3", 20.0, 401,
                        _gamma_curves(0.0, ThermalKernel.QUANTUM_LOW_T)),
        "fig4": _series("fig4", 20.0, 401,
                        _gamma_curves(5.0, ThermalKernel.CLASSICAL_HIGH_T)),
        "fig5": _sweep("fig5", 0.0),
        "fig5new": _sweep("fig5new", 5.0),
        "fig6": _series("fig6", 20.0, 401,
                        _gamma_curves(5.0, ThermalKernel.QUANTUM_LOW_T)),
        "fig7": _series("fig7", 10.0, 1601,
                        _both_limit_curves(0.5, 25.0, 5.0)),
    }
    return specs


_SPECS = _build_specs()
FIGURE_IDS = tuple(sorted(_SPECS))


def figure_spec(figure_id: str) -> FigureSpec:
    try:
        return _SPECS[figure_id]
    except KeyError:
        raise DomainError(
            f"figure_id must be one of {', '.join(FIGURE_IDS)}, "
            f"got {figure_id!r}") from None


def closed_moment(p: Params, kernel: ThermalKernel, t: float) -> float:
    """Closed-form M_z(t) dispatched on family (omega_0) and kernel."""
    if kernel is ThermalKernel.CLASSICAL_HIGH_T:
        if p.omega_0 > 0.0:
            return moment_highT_confined(p, t)
        return moment_highT_free(p, t)
    if p.omega_0 > 0.0:
        return moment_lowT_confined(p, t)
    return moment_lowT_free(p, t)


def compute_curve(spec: FigureSpec, curve: FigureCurve):
    """Evaluate one curve; returns (x, y) arrays. For series figures x is
    gamma*t and the moment is evaluated at t = x/gamma; for sweeps x is
    gamma itself."""
    x = np.linspace(spec.x_start, spec.x_stop, spec.n_points)
    if spec.kind == "series":
        g = curve.params.gamma
        y = np.array([closed_moment(curve.params, curve.kernel, xi / g)
                      for xi in x])
    else:
        y = np.array([closed_moment(replace(curve.params, gamma=gi),
                                    curve.kernel, spec.t_at)
                      for gi in x])
    return x, y
