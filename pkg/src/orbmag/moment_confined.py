"""Orbital moment M_z(t) of the harmonically trapped particle.

Same three paths as the free module: general spectral integral plus the two
temperature-limit closed forms, all expressed through the trap exponents
gamma_pm (poles_confined). Every closed-form expression below is symmetric
under swapping the two roots, and each is transcribed as one addend per
ratio term, summed in a fixed order.

The low-temperature closed form carries the corrected sign on its two
cross terms (the ones proportional to
(e^{g+* t} - e^{g-* t})(g+ e^{g+ t} - g- e^{g- t})): with the signs this
module uses, the expression agrees with the residue evaluation of the
spectral integral to machine precision, settles to -1/2, and joins the
free-space result continuously as omega_0 -> 0. Flipping those two signs
(an easy slip when reducing the cubed-frequency numerator at the poles)
breaks all three properties.

Reversed field: high-T is antisymmetric in omega_c by itself; low-T is
handled by the same evaluate-at-|omega_c|-and-negate convention as the free
module.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import replace

import numpy as np

from .errors import (ConvergenceFailure, NumericalDegeneracy, UVDivergent,
                     WrongFamily)
from .moment_free import _check_time
from .params import Params, gamma_bar
from .response import ConfinedRoots, poles_confined
from .thermal import (QuadratureReport, ThermalKernel, _cis_m1, _coth_weight,
                      _adaptive_gk, _integrate_structured)

# Relative spread for the two-sided reevaluation used when the roots nearly
# coincide (critical damping): the formulas are evaluated at
# omega_0^2*(1 +- delta) and averaged, which cancels the O(delta) error.
_RICHARDSON_DELTA = 1e-6


def _pair_denominators(roots: ConfinedRoots, gb: complex):
    """The four denominators gamma_a + conj(gamma_b), guarded.

    Each has real part -gamma/|...| scale, so it can approach zero only for
    pathologically small gamma relative to |gamma_bar|; raise rather than
    divide by almost-zero.
    """
    gp, gm = roots.gamma_plus, roots.gamma_minus
    gpc, gmc = gp.conjugate(), gm.conjugate()
    pairs = {"dpp": gp + gpc, "dmp": gm + gpc,
             "dpm": gp + gmc, "dmm": gm + gmc}
    floor = 1e-12 * abs(gb)
    for name, val in pairs.items():
        if abs(val) < floor:
            raise NumericalDegeneracy(
                f"denominator {name} = gamma_a + conj(gamma_b) has magnitude "
                f"{abs(val):.3e} < 1e-12*|gamma_bar|; the closed form is not "
                "evaluable in double precision here")
    return pairs["dpp"], pairs["dmp"], pairs["dpm"], pairs["dmm"]


def _highT_closed_from_roots(roots: ConfinedRoots, gb: complex,
                             temperature: float, t: float) -> float:
    gp, gm = roots.gamma_plus, roots.gamma_minus
    dpp, dmp, dpm, dmm = _pair_denominators(roots, gb)
    dg2 = abs(gp - gm) ** 2
    ep, em = cmath.exp(gp * t), cmath.exp(gm * t)
    epc, emc = ep.conjugate(), em.conjugate()
    x = (epc - emc) * (gp * ep - gm * em)
    s = (gp / dpp - gp * ep * epc / dpp
         - gm / dmp + gm * em * epc / dmp
         - gp / dpm + gp * ep * emc / dpm
         + gm / dmm - gm * em * emc / dmm
         + gp ** 2 * x / ((gp - gm) * dpp * dpm)
         + gm ** 2 * x / ((gm - gp) * dmp * dmm))
    return -(2.0 * temperature * gb.real / dg2) * s.imag


def _lowT_closed_from_roots(roots: ConfinedRoots, gb: complex,
                            t: float) -> float:
    gp, gm = roots.gamma_plus, roots.gamma_minus
    gpc, gmc = gp.conjugate(), gm.conjugate()
    dpp, dmp, dpm, dmm = _pair_denominators(roots, gb)
    dg2 = abs(gp - gm) ** 2
    ep, em = cmath.exp(gp * t), cmath.exp(gm * t)
    epc, emc = ep.conjugate(), em.conjugate()
    x = (epc - emc) * (gp * ep - gm * em)
    s = (gp ** 2 / dpp + gp * gpc * ep * epc / dpp
         - gm ** 2 / dmp - gm * gpc * em * epc / dmp
         - gp ** 2 / dpm - gp * gmc * ep * emc / dpm
         + gm ** 2 / dmm + gm * gmc * em * emc / dmm
         + gp ** 3 * x / ((gp - gm) * dpp * dpm)
         + gm ** 3 * x / ((gm - gp) * dmp * dmm))
    return -(gb.real / (2.0 * dg2)) * (2j * s).imag


def _closed_with_degeneracy_handling(p: Params, t: float, evaluator) -> float:
    """Evaluate a closed form, averaging over a tiny trap-frequency split
    when the roots nearly coincide (critical damping)."""
    roots = poles_confined(p)
    gb = gamma_bar(p)
    if not roots.near_degenerate:
        return evaluator(roots, gb, t)
    vals = []
    for s in (-1.0, +1.0):
        w0 = p.omega_0 * math.sqrt(1.0 + s * _RICHARDSON_DELTA)
        vals.append(evaluator(poles_confined(replace(p, omega_0=w0)), gb, t))
    return 0.5 * (vals[0] + vals[1])


def moment_highT_confined(p: Params, t: float) -> float:
    """Classical-limit closed form in the trap: the ten-addend root
    expression with prefactor -2*T*gamma/|g+ - g-|^2. Starts at 0, decays
    to a small negative plateau (zero in the gamma*t -> infinity limit),
    antisymmetric in omega_c."""
    if p.omega_0 <= 0.0:
        raise WrongFamily("moment_highT_confined requires omega_0 > 0")
    t = _check_time(t)
    return _closed_with_degeneracy_handling(
        p, t, lambda roots, gb, tt: _highT_closed_from_roots(
            roots, gb, p.temperature, tt))


def moment_lowT_confined(p: Params, t: float) -> float:
    """Zero-temperature closed form in the trap: the ten-addend root
    expression with prefactor -(gamma/(2*|g+ - g-|^2))*Im{2i(...)} and the
    corrected cross-term signs (see module docstring). Starts at 0 and
    settles to -1/2; the relaxation is governed by the slow root pair, at
    rate ~ 2*omega_0^2*gamma/(gamma^2+omega_c^2) when gamma dominates.
    omega_c < 0 is mapped by antisymmetry."""
    if p.omega_0 <= 0.0:
        raise WrongFamily("moment_lowT_confined requires omega_0 > 0")
    t = _check_time(t)
    sign = 1.0
    if p.omega_c < 0.0:
        sign = -1.0
        p = replace(p, omega_c=-p.omega_c)
    return sign * _closed_with_degeneracy_handling(
        p, t, _lowT_closed_from_roots)


def _conf_assembly(p: Params, t: float, kernel: ThermalKernel,
                   roots: ConfinedRoots):
    """Integrand of the trapped moment, split for the tail handling.

    full = gamma*w*K(w)*[w^2*X/D(w) + A(w)*B(w)] up to the fused weight,
    where X is the time factor multiplying the velocity spectral piece,
    D(w) the quartic |denominator|^2, and A, B the two time-dependent
    brackets. Prefactor for the moment: Im{...}/(2*pi*|g+ - g-|^2).
    """
    gp, gm = roots.gamma_plus, roots.gamma_minus
    gpc, gmc = gp.conjugate(), gm.conjugate()
    ep, em = cmath.exp(gp * t), cmath.exp(gm * t)
    epc, emc = ep.conjugate(), em.conjugate()
    x = (epc - emc) * (gp * ep - gm * em)
    g, wc, w0 = p.gamma, p.omega_c, p.omega_0
    temp = p.temperature

    def wgt(w):
        if kernel is ThermalKernel.CLASSICAL_HIGH_T:
            return 2.0 * temp
        return w

    def dpoly(w):
        return (w * w - w0 ** 2 - w * wc) ** 2 + (w * g) ** 2

    def a_r(w):
        return 1.0 / (w + 1j * gpc) - 1.0 / (w + 1j * gmc)

    def b_r(w):
        return gp / (w - 1j * gp) - gm / (w - 1j * gm)

    def sa(w):
        return epc / (w + 1j * gpc) - emc / (w + 1j * gmc)

    def sb(w):
        return gp * ep / (w - 1j * gp) - gm * em / (w - 1j * gm)

    def full(w):
        e_p = _cis_m1(w * t) + 1.0
        e_m = _cis_m1(-w * t) + 1.0
        a = e_p * a_r(w) - sa(w)
        b = e_m * b_r(w) - sb(w)
        return g * wgt(w) * (w * w * x / dpoly(w) + a * b)

    def p0(w):
        return g * wgt(w) * (w * w * x / dpoly(w) + a_r(w) * b_r(w)
                             + sa(w) * sb(w))

    def pp(w):
        return g * wgt(w) * (-a_r(w) * sb(w))

    def pm(w):
        return g * wgt(w) * (-sa(w) * b_r(w))

    c1 = 2.0 * g * x if kernel is ThermalKernel.QUANTUM_LOW_T else 0.0
    return full, (p0, pp, pm), c1


def _general_confined_once(p: Params, t: float, kernel: ThermalKernel,
                           rel_tol: float) -> float:
    roots = poles_confined(p)
    gb = gamma_bar(p)
    _pair_denominators(roots, gb)  # degeneracy guard before any division
    full, parts, c1 = _conf_assembly(p, t, kernel, roots)
    scale = max(p.gamma, abs(p.omega_c), p.omega_0, 1.0)
    report = _integrate_structured(full, parts, t, rel_tol, scale,
                                   p.temperature)
    val = report.value - 1j * np.pi * c1
    dg2 = abs(roots.gamma_plus - roots.gamma_minus) ** 2
    return val.imag / (2.0 * np.pi * dg2)


def _full_coth_cutoff_confined(p: Params, t: float, omega_cutoff: float,
                               rel_tol: float) -> float:
    roots = poles_confined(p)
    full, _parts, _c1 = _conf_assembly(p, t, ThermalKernel.QUANTUM_LOW_T,
                                       roots)
    temp = p.temperature

    def weighted(w):
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
    dg2 = abs(roots.gamma_plus - roots.gamma_minus) ** 2
    return float(np.imag(val)) / (2.0 * np.pi * dg2)


def moment_general_confined(p: Params, t: float, kernel: ThermalKernel,
                            rel_tol: float = 1e-9,
                            omega_cutoff: float | None = None) -> float:
    """M_z(t) from the spectral integral in the trap, any kernel.

    Kernel handling mirrors the free module: classical converges as is;
    the low-temperature weight uses the lower-closure prescription and the
    reversed-field antisymmetry convention; the full coth weight needs
    omega_cutoff for t > 0 (UVDivergent otherwise; 0 exactly at t = 0;
    T = 0 falls back to the low-temperature kernel). Near critical damping
    the integrand prefactor degenerates, so the value is averaged over a
    tiny trap-frequency split, like the closed forms.
    """
    if p.omega_0 <= 0.0:
        raise WrongFamily("moment_general_confined requires omega_0 > 0; "
                          "use moment_general_free")
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
            return _full_coth_cutoff_confined(p, t, omega_cutoff, rel_tol)
    sign = 1.0
    if kernel is ThermalKernel.QUANTUM_LOW_T and p.omega_c < 0.0:
        sign = -1.0
        p = replace(p, omega_c=-p.omega_c)
    if poles_confined(p).near_degenerate:
        vals = []
        for s in (-1.0, +1.0):
            w0 = p.omega_0 * math.sqrt(1.0 + s * _RICHARDSON_DELTA)
            vals.append(_general_confined_once(replace(p, omega_0=w0), t,
                                               kernel, rel_tol))
        return sign * 0.5 * (vals[0] + vals[1])
    return sign * _general_confined_once(p, t, kernel, rel_tol)
