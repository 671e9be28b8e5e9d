"""Classical Langevin Monte Carlo estimator of M_z(t).

Valid as an independent oracle in the classical (high-temperature) limit
only: the sampler draws real Gaussian bath noise, so it reproduces the
classical closed forms but cannot represent the zero-point statistics
behind the low-temperature results.

Both families use exact Gaussian updates over each substep (the dynamics is
linear, so the transition kernel is Gaussian with known moments); dt only
sets the substep resolution of the time grid, never a discretization bias.

Determinism: trajectories are processed in fixed-size blocks; block b of a
run with seed s draws from a counter-based Philox stream keyed by (s, b)
with a fixed draw order, and block results are reduced in block order. The
estimate is therefore bit-identical for identical (Params, McConfig,
t_grid), independent of how blocks might be scheduled.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, StabilityError, WrongFamily
from .moment_free import Method, MomentSeries
from .params import Params, gamma_bar
from .response import poles_confined

_BLOCK = 4096


class InitialVelocity(enum.Enum):
    ZERO = "Zero"
    THERMAL_EQUIPARTITION = "ThermalEquipartition"


@dataclass(frozen=True)
class McConfig:
    """Monte Carlo run settings.

    dt is the coarsest allowed substep (natural units); the guard
    dt <= 0.1/max(gamma, |omega_c|, omega_0) is enforced at run time.
    seed must fit in 64 unsigned bits. t_max bounds the usable grid.
    """

    n_trajectories: int
    dt: float
    t_max: float
    seed: int
    initial_velocity: InitialVelocity = InitialVelocity.THERMAL_EQUIPARTITION


def step_free(v, p: Params, dt: float, noise):
    """Exact velocity update over one step without a trap:
    v -> v*e^{-gb*dt} + noise*sqrt(T*(1 - e^{-2*gamma*dt})), gb = gamma
    + i*omega_c.

    noise must be a standard complex Gaussian (real and imaginary parts
    independent, unit variance each); the returned noise term then has
    per-component variance T*(1 - e^{-2*gamma*dt}), which makes
    <|v|^2> -> 2T stationary. At T = 0 the update is the deterministic
    decay regardless of the noise argument.
    """
    if p.omega_0 != 0.0:
        raise WrongFamily("step_free requires omega_0 = 0")
    gb = gamma_bar(p)
    decay = cmath.exp(-gb * dt)
    scale = math.sqrt(p.temperature * -math.expm1(-2.0 * p.gamma * dt))
    return v * decay + noise * scale


def _check_config(p: Params, cfg: McConfig) -> None:
    if cfg.n_trajectories <= 0:
        raise DomainError(
            f"n_trajectories must be > 0, got {cfg.n_trajectories!r}")
    if not (cfg.dt > 0.0) or not math.isfinite(cfg.dt):
        raise DomainError(f"dt must be finite and > 0, got {cfg.dt!r}")
    if not (0 <= int(cfg.seed) < 2 ** 64):
        raise DomainError(f"seed must fit in uint64, got {cfg.seed!r}")
    fastest = max(p.gamma, abs(p.omega_c), p.omega_0)
    if cfg.dt > 0.1 / fastest:
        raise StabilityError(
            f"dt = {cfg.dt!r} exceeds 0.1/max(gamma, |omega_c|, omega_0) "
            f"= {0.1 / fastest!r}")


def _free_step_coeffs(p: Params, h: float):
    """Exact joint update (v, xi) over a substep h for the free family.

    v' = ea*v + eta_v, xi' = xi + gfac*v + eta_xi, with (eta_v, eta_xi)
    jointly Gaussian; the 2x2 complex Cholesky factor (l11, l21, l22)
    reproduces their circular covariance.
    """
    gb = gamma_bar(p)
    gbc = gb.conjugate()
    g, temp = p.gamma, p.temperature
    ea = cmath.exp(-gb * h)
    one_m_ea = 1.0 - ea
    one_m_eac = 1.0 - cmath.exp(-gbc * h)
    em2 = -math.expm1(-2.0 * g * h)  # 1 - e^{-2 gamma h}
    var_v = 2.0 * temp * em2
    c_vx = (4.0 * g * temp / gbc) * (one_m_ea / gb - em2 / (2.0 * g))
    var_x = (4.0 * g * temp / abs(gb) ** 2) * (
        h - one_m_ea / gb - one_m_eac / gbc + em2 / (2.0 * g))
    gfac = one_m_ea / gb
    if var_v > 0.0:
        l11 = math.sqrt(var_v)
        l21 = c_vx.conjugate() / l11
        l22 = math.sqrt(max(var_x.real - abs(l21) ** 2, 0.0))
    else:
        l11 = l21 = l22 = 0.0
    return ea, gfac, l11, l21, l22


def _phi1(z: complex) -> complex:
    """(e^z - 1)/z, series for small |z|."""
    if abs(z) < 1e-4:
        return 1.0 + z / 2.0 + z * z / 6.0
    return (cmath.exp(z) - 1.0) / z


def _confined_step_coeffs(p: Params, h: float):
    """Exact joint update (v, xi) over a substep h in the trap.

    xi' = a_h*xi + g_h*v + eta_xi, v' = -omega_0^2*g_h*xi + gd_h*v + eta_v,
    where g_h, gd_h, a_h are the propagator entries built from the trap
    exponents; the noise covariance integrates the driven response over
    the substep.
    """
    roots = poles_confined(p)
    gp, gm = roots.gamma_plus, roots.gamma_minus
    dg = gp - gm
    ep, em = cmath.exp(gp * h), cmath.exp(gm * h)
    g_h = (ep - em) / dg
    gd_h = (gp * ep - gm * em) / dg
    a_h = (gp * em - gm * ep) / dg
    c_vv = c_vx = c_xx = 0.0 + 0.0j
    for (s_a, g_a) in ((1.0, gp), (-1.0, gm)):
        for (s_b, g_b) in ((1.0, gp), (-1.0, gm)):
            e = s_a * s_b * h * _phi1((g_a + g_b.conjugate()) * h)
            c_vv += g_a * g_b.conjugate() * e
            c_vx += g_a * e
            c_xx += e
    fac = 4.0 * p.gamma * p.temperature / abs(dg) ** 2
    c_vv *= fac
    c_vx *= fac
    c_xx *= fac
    if c_vv.real > 0.0:
        l11 = math.sqrt(c_vv.real)
        l21 = c_vx.conjugate() / l11
        l22 = math.sqrt(max(c_xx.real - abs(l21) ** 2, 0.0))
    else:
        l11 = l21 = l22 = 0.0
    return g_h, gd_h, a_h, l11, l22, l21


def _run_block(p: Params, cfg: McConfig, t_grid, block_index: int,
               m: int):
    """One block of m trajectories; returns per-grid-point (sum, sum of
    squares) of the single-trajectory moment Im(v xi*)/2."""
    rng = np.random.default_rng(
        np.random.Philox(key=[int(cfg.seed), int(block_index)]))
    if cfg.initial_velocity is InitialVelocity.THERMAL_EQUIPARTITION:
        sd = math.sqrt(p.temperature)
        v = sd * rng.standard_normal(m) + 1j * (sd * rng.standard_normal(m))
    else:
        v = np.zeros(m, complex)
    xi = np.zeros(m, complex)
    confined = p.omega_0 > 0.0
    sums = np.empty(len(t_grid))
    sqs = np.empty(len(t_grid))
    t_prev = 0.0
    for i, tg in enumerate(t_grid):
        gap = tg - t_prev
        n_steps = max(int(math.ceil(gap / cfg.dt)), 1) if gap > 0 else 0
        if n_steps:
            h = gap / n_steps
            if confined:
                g_h, gd_h, a_h, l11, l22, l21 = _confined_step_coeffs(p, h)
            else:
                ea, gfac, l11, l21, l22 = _free_step_coeffs(p, h)
            root_half = math.sqrt(0.5)
            for _ in range(n_steps):
                z1 = root_half * (rng.standard_normal(m)
                                  + 1j * rng.standard_normal(m))
                z2 = root_half * (rng.standard_normal(m)
                                  + 1j * rng.standard_normal(m))
                if confined:
                    xi_new = a_h * xi + g_h * v + (l21 * z1 + l22 * z2)
                    v = -p.omega_0 ** 2 * g_h * xi + gd_h * v + l11 * z1
                    xi = xi_new
                else:
                    xi = xi + gfac * v + (l21 * z1 + l22 * z2)
                    v = v * ea + l11 * z1
        moment = 0.5 * np.imag(v * np.conj(xi))
        sums[i] = moment.sum()
        sqs[i] = (moment * moment).sum()
        t_prev = tg
    return sums, sqs


def estimate_moment(p: Params, cfg: McConfig, t_grid) -> MomentSeries:
    """Ensemble estimate of M_z on an ascending time grid.

    xi(0) = 0 always; v(0) per cfg.initial_velocity. Returns the sample
    mean of Im(v xi*)/2 with its standard error at each grid time. The
    double Cholesky noise per substep means the law of (v, xi) at the grid
    times is exact; only the Monte Carlo error remains.
    """
    _check_config(p, cfg)
    t_grid = [float(t) for t in t_grid]
    prev = 0.0
    for t in t_grid:
        if not math.isfinite(t) or t < prev:
            raise DomainError(
                "t_grid must be ascending, finite and >= 0")
        prev = t
    if t_grid and t_grid[-1] > cfg.t_max:
        raise DomainError(
            f"t_grid exceeds cfg.t_max = {cfg.t_max!r}")
    n = int(cfg.n_trajectories)
    total = np.zeros(len(t_grid))
    total_sq = np.zeros(len(t_grid))
    n_blocks = (n + _BLOCK - 1) // _BLOCK
    for b in range(n_blocks):
        m = min(_BLOCK, n - b * _BLOCK)
        sums, sqs = _run_block(p, cfg, t_grid, b, m)
        total += sums
        total_sq += sqs
    mean = total / n
    if n > 1:
        var = np.maximum((total_sq - n * mean * mean) / (n - 1), 0.0)
        stderr = np.sqrt(var / n)
    else:
        stderr = np.full(len(t_grid), math.inf)
    return MomentSeries(times=tuple(t_grid), values=tuple(mean),
                        method=Method.MONTE_CARLO, stderr=tuple(stderr))
