"""Orbital moment M_z(t) of the free (untrapped) particle.

Three evaluation paths: the general thermal spectral integral, and the two
closed forms obtained from it in the high- and low-temperature limits.
Natural units: the dimensionful prefactors q/2c, q*gamma*hbar/(2*c*m*pi) and
q*k_B*T/(c*m) collapse to 1/2, gamma/(2*pi) and T; M_z comes out in units of
q*hbar/(m*c).

Sign convention for reversed field: the high-temperature expressions are
antisymmetric in omega_c by themselves. The low-temperature moment is
dominated by a field-independent zero-point term, so its printed expression
is symmetric; the shipped functions restore the magnetic-response
antisymmetry by evaluating at |omega_c| and negating for omega_c < 0
(omega_c = 0 keeps the printed value, so the map is discontinuous at zero
field).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import (ConvergenceFailure, DomainError, Unsupported,
                     UVDivergent, WrongFamily)
from .params import Params, gamma_bar
from .thermal import (QuadratureReport, ThermalKernel, _cis_m1, _coth_weight,
                      _adaptive_gk, _integrate_structured)


class Method(enum.Enum):
    GENERAL_QUADRATURE = "GeneralQuadrature"
    HIGH_T_CLOSED = "HighTClosed"
    LOW_T_CLOSED = "LowTClosed"
    MONTE_CARLO = "MonteCarlo"


@dataclass(frozen=True)
class MomentSeries:
    """M_z sampled on a time grid (natural units internally; the CLI
    rescales the time axis to gamma*t on output). stderr is present for
    Monte Carlo estimates only."""

    times: tuple
    values: tuple
    method: Method
    stderr: tuple | None = None


def _check_time(t: float) -> float:
    t = float(t)
    if not (t >= 0.0) or not math.isfinite(t):
        raise DomainError(f"t must be finite and >= 0, got {t!r}")
    return t


def _free_assembly(p: Params, t: float, kernel: ThermalKernel):
    """Integrand of the free-particle moment, split for the tail handling.

    Returns (full, (p0, pp, pm), c1) with full = p0 + pp*e^{+iwt} +
    pm*e^{-iwt}; c1 is the 1/w coefficient of p0's large-|w| asymptotics,
    which fixes the lower-closure prescription constant -i*pi*c1 for the
    low-temperature weight. The thermal weight w*K(w) is fused analytically
    (classical -> 2T, low-T -> w) so no kernel is evaluated pointwise.
    """
    gb = gamma_bar(p)
    gbc = gb.conjugate()
    u = np.exp(-gb * t)
    ub = np.exp(-gbc * t)
    temp = p.temperature

    def wgt(w):
        if kernel is ThermalKernel.CLASSICAL_HIGH_T:
            return 2.0 * temp
        return w

    def full(w):
        n1 = -_cis_m1(-w * t) - u * _cis_m1(w * t)
        e_m = _cis_m1(-w * t) + 1.0
        e_p = _cis_m1(w * t) + 1.0
        n2 = 1.0 - ub * e_m - u * e_p + u * ub
        d1 = w * gbc * (w + 1j * gb)
        d2 = gbc * (w + 1j * gb) * (w - 1j * gbc)
        return wgt(w) * (n1 / d1 - n2 / d2 + u * (1.0 - ub) / d2)

    def p0(w):
        d1 = w * gbc * (w + 1j * gb)
        d2 = gbc * (w + 1j * gb) * (w - 1j * gbc)
        return wgt(w) * ((1.0 + u) / d1 - (1.0 + u * ub) / d2
                         + u * (1.0 - ub) / d2)

    def pp(w):
        d1 = w * gbc * (w + 1j * gb)
        d2 = gbc * (w + 1j * gb) * (w - 1j * gbc)
        return wgt(w) * (-u / d1 + u / d2)

    def pm(w):
        d1 = w * gbc * (w + 1j * gb)
        d2 = gbc * (w + 1j * gb) * (w - 1j * gbc)
        return wgt(w) * (-1.0 / d1 + ub / d2)

    c1 = 2.0 * u * (1.0 - ub) / gbc \
        if kernel is ThermalKernel.QUANTUM_LOW_T else 0.0
    return full, (p0, pp, pm), c1


def _full_coth_cutoff_value(p: Params, t: float, omega_cutoff: float,
                            rel_tol: float) -> float:
    """Truncated finite-T evaluation: the same bracket against the full
    coth weight on [-cutoff, cutoff]. Log-sensitive to the cutoff."""
    full, _parts, _c1 = _free_assembly(p, t, ThermalKernel.QUANTUM_LOW_T)
    temp = p.temperature

    def weighted(w):
        # the low-T assembly carries plain weight w; multiplying by
        # coth(w/2T) turns it into the full thermal weight w*coth(w/2T)
        return full(w) * _coth_weight(ThermalKernel.FULL_COTH, temp, w)

    def g(w):
        return weighted(w) + weighted(-w)

    cap = np.pi / (4.0 * max(t, 1.0))
    val, err, nev, ok = _adaptive_gk(g, 0.0, float(omega_cutoff), cap,
                                     rel_tol)
    if not ok:
        raise ConvergenceFailure(
            "truncated full-coth moment did not converge",
            QuadratureReport(complex(val), float(err),
                             float(omega_cutoff), int(nev)))
    return (p.gamma / (2.0 * np.pi)) * float(np.imag(val))


def moment_general_free(p: Params, t: float, kernel: ThermalKernel,
                        rel_tol: float = 1e-9,
                        omega_cutoff: float | None = None) -> float:
    """M_z(t) from the spectral integral, any kernel.

    The classical weight gives a convergent integral. The low-temperature
    weight is evaluated with the lower-closure prescription (see
    _free_assembly), which is the convention that reproduces the closed
    form; omega_c < 0 is mapped by antisymmetry. The full coth weight
    leaves a logarithmically divergent tail for t > 0: UVDivergent unless
    omega_cutoff is given (the result then depends on ln(cutoff)); at
    t = 0 the integrand vanishes identically and the value is 0. FullCoth
    at T = 0 falls back to the low-temperature kernel (its pointwise
    limit).
    """
    if p.omega_0 != 0.0:
        raise WrongFamily("moment_general_free requires omega_0 = 0; "
                          "use moment_general_confined")
    t = _check_time(t)
    if kernel is ThermalKernel.FULL_COTH:
        if p.temperature == 0.0:
            kernel = ThermalKernel.QUANTUM_LOW_T
        elif t == 0.0:
            return 0.0
        elif omega_cutoff is None:
            raise UVDivergent(
                "full-coth weight leaves a 1/omega tail for t > 0; "
                "pass omega_cutoff (result grows like ln(cutoff))")
        else:
            return _full_coth_cutoff_value(p, t, omega_cutoff, rel_tol)
    sign = 1.0
    if kernel is ThermalKernel.QUANTUM_LOW_T and p.omega_c < 0.0:
        sign = -1.0
        p = replace(p, omega_c=-p.omega_c)
    full, parts, c1 = _free_assembly(p, t, kernel)
    scale = max(p.gamma, abs(p.omega_c), 1.0)
    report = _integrate_structured(full, parts, t, rel_tol, scale,
                                   p.temperature)
    val = report.value - 1j * np.pi * c1
    return sign * (p.gamma / (2.0 * np.pi)) * val.imag


def moment_highT_free(p: Params, t: float) -> float:
    """Classical-limit closed form:
    T*[(omega_c*cos(omega_c*t) + gamma*sin(omega_c*t))*e^{-gamma*t}
       - omega_c] / (gamma^2 + omega_c^2).
    Starts at 0, relaxes at rate gamma to -T*omega_c/(gamma^2+omega_c^2);
    antisymmetric in omega_c as written. Beyond gamma*t = 700 the
    exponential is below the double-precision floor and the asymptote is
    returned directly.
    """
    if p.omega_0 != 0.0:
        raise WrongFamily("moment_highT_free requires omega_0 = 0")
    t = _check_time(t)
    g, wc, temp = p.gamma, p.omega_c, p.temperature
    if g * t > 700.0:
        return asymptote_free(p, ThermalKernel.CLASSICAL_HIGH_T)
    return temp * ((wc * math.cos(wc * t) + g * math.sin(wc * t))
                   * math.exp(-g * t) - wc) / (g * g + wc * wc)


def moment_lowT_free(p: Params, t: float) -> float:
    """Zero-temperature closed form:
    -(1/2)*[(g^2+wc^2) + 2*wc*g*e^{-g*t}*sin(wc*t)
            + (g^2-wc^2)*e^{-g*t}*cos(wc*t) - 2*g^2*e^{-2*g*t}]
    / (g^2+wc^2).
    Starts at 0 and settles to -1/2 (in units q*hbar/(m*c)) at rate gamma;
    the saturation value is field-independent (zero-point contribution).
    omega_c < 0 is mapped by antisymmetry (see module docstring).
    """
    if p.omega_0 != 0.0:
        raise WrongFamily("moment_lowT_free requires omega_0 = 0")
    t = _check_time(t)
    sign = 1.0
    wc = p.omega_c
    if wc < 0.0:
        sign = -1.0
        wc = -wc
    g = p.gamma
    if g * t > 700.0:
        return sign * -0.5
    e1 = math.exp(-g * t)
    g2, w2 = g * g, wc * wc
    val = -0.5 * ((g2 + w2) + 2.0 * wc * g * e1 * math.sin(wc * t)
                  + (g2 - w2) * e1 * math.cos(wc * t)
                  - 2.0 * g2 * math.exp(-2.0 * g * t)) / (g2 + w2)
    return sign * val


def asymptote_free(p: Params, kernel: ThermalKernel) -> float:
    """Long-time limit of M_z for the free particle.

    Classical: -T*omega_c/(gamma^2+omega_c^2). Low temperature: -1/2
    regardless of parameters (+1/2 for omega_c < 0 under the antisymmetry
    convention). No general-T asymptote is provided (Unsupported).
    """
    if p.omega_0 != 0.0:
        raise WrongFamily("asymptote_free requires omega_0 = 0")
    if kernel is ThermalKernel.CLASSICAL_HIGH_T:
        return -p.temperature * p.omega_c / (p.gamma ** 2 + p.omega_c ** 2)
    if kernel is ThermalKernel.QUANTUM_LOW_T:
        return 0.5 if p.omega_c < 0.0 else -0.5
    raise Unsupported("no closed-form long-time limit for the full coth "
                      "weight")
