"""Thermal kernels and the frequency-domain quadrature engine.

Everything here evaluates integrals of the form int dw K(w)*F(w) over the
whole real line, where K is one of three thermal weights (coth, its
high-temperature 2T/w limit, its zero-temperature sgn(w) limit) and F decays
algebraically, possibly modulated by e^{+-i*w*t}. Two entry points:

* integrate_thermal: generic black-box integrand; symmetric truncation grown
  octave by octave until a geometric remainder estimate meets tolerance.
* _integrate_structured: package-internal engine for the moment integrands,
  which are supplied split into a non-oscillatory part and e^{+i*w*t} /
  e^{-i*w*t} parts, so the tails beyond the truncation can be added exactly
  (1/s substitution for the smooth part, integration-by-parts asymptotics
  for the oscillatory parts) instead of merely bounded.

The adaptive rule is a Gauss-Kronrod 7/15 embedded pair with batched panel
evaluation; panels are refined in bulk (all panels carrying the top 90% of
the error estimate split per round).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, DomainError, UVDivergent, WrongFamily
from .params import Params


class ThermalKernel(enum.Enum):
    FULL_COTH = "full"
    CLASSICAL_HIGH_T = "classical"
    QUANTUM_LOW_T = "lowt"


@dataclass(frozen=True)
class QuadratureReport:
    """Result of a symmetric-domain frequency integral.

    value: integral over [-omega_truncation, omega_truncation] plus any
    analytically evaluated tail. abs_error_estimate combines the embedded
    quadrature error with the tail/remainder estimate.
    """

    value: complex
    abs_error_estimate: float
    omega_truncation: float
    n_evals: int


def eval_coth(kernel: ThermalKernel, temperature: float, omega: float) -> float:
    """Thermal weight at a single frequency.

    FULL_COTH is coth(omega/(2T)), evaluated by series for |omega/2T| < 1e-2
    (2T/w + w/(6T) - w^3/(360 T^3)) and saturated to sgn(omega) for
    |omega/2T| > 20; CLASSICAL_HIGH_T is 2T/omega; QUANTUM_LOW_T is
    sgn(omega). Raises DomainError for FULL_COTH at T = 0 and for the
    kernels that diverge at omega = 0.
    """
    omega = float(omega)
    temperature = float(temperature)
    if kernel is ThermalKernel.QUANTUM_LOW_T:
        return float(np.sign(omega))
    if omega == 0.0:
        raise DomainError("omega: kernel diverges at omega = 0")
    if kernel is ThermalKernel.CLASSICAL_HIGH_T:
        return 2.0 * temperature / omega
    if temperature == 0.0:
        raise DomainError(
            "temperature: FULL_COTH undefined at T = 0 (limit is sgn(omega); "
            "use QUANTUM_LOW_T)")
    x = omega / (2.0 * temperature)
    ax = abs(x)
    if ax > 20.0:
        return 1.0 if omega > 0 else -1.0
    if ax < 1e-2:
        return (2.0 * temperature / omega + omega / (6.0 * temperature)
                - omega ** 3 / (360.0 * temperature ** 3))
    return math.cosh(x) / math.sinh(x)


def _coth_weight(kernel: ThermalKernel, temperature: float,
                 w: np.ndarray) -> np.ndarray:
    """Vectorized kernel for nonzero frequencies (validated domain)."""
    if kernel is ThermalKernel.QUANTUM_LOW_T:
        return np.sign(w)
    if kernel is ThermalKernel.CLASSICAL_HIGH_T:
        return 2.0 * temperature / w
    x = w / (2.0 * temperature)
    out = np.empty_like(x)
    small = np.abs(x) < 1e-2
    big = np.abs(x) > 20.0
    mid = ~(small | big)
    ws = w[small]
    out[small] = (2.0 * temperature / ws + ws / (6.0 * temperature)
                  - ws ** 3 / (360.0 * temperature ** 3))
    out[big] = np.sign(w[big])
    out[mid] = 1.0 / np.tanh(x[mid])
    return out


def _cis_m1(a):
    """e^{i*a} - 1 without cancellation: -2*sin^2(a/2) + i*sin(a)."""
    return -2.0 * np.sin(0.5 * a) ** 2 + 1j * np.sin(a)


# Gauss-Kronrod 7/15 pair; Gauss weights sit on the odd Kronrod nodes.
_GK_X = np.array([
    -0.9914553711208126, -0.9491079123427585, -0.8648644233597691,
    -0.7415311855993945, -0.5860872354676911, -0.4058451513773972,
    -0.2077849550078985, 0.0, 0.2077849550078985, 0.4058451513773972,
    0.5860872354676911, 0.7415311855993945, 0.8648644233597691,
    0.9491079123427585, 0.9914553711208126])
_GK_WK = np.array([
    0.02293532201052922, 0.06309209262997855, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278, 0.2044329400752989,
    0.1903505780647854, 0.1690047266392679, 0.1406532597155259,
    0.1047900103222502, 0.06309209262997855, 0.02293532201052922])
_GK_WG = np.zeros(15)
_GK_WG[1::2] = np.array([0.1294849661688697, 0.2797053914892766,
                         0.3818300505051189, 0.4179591836734694,
                         0.3818300505051189, 0.2797053914892766,
                         0.1294849661688697])


def _gk_apply(f, a, b):
    """Evaluate the 7/15 pair on a batch of panels [a_i, b_i]."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = mid[:, None] + half[:, None] * _GK_X[None, :]
    y = np.asarray(f(x.ravel()), dtype=complex).reshape(x.shape)
    ik = (y * _GK_WK).sum(axis=1) * half
    ig = (y * _GK_WG).sum(axis=1) * half
    return ik, np.abs(ik - ig), x.size


def _adaptive_gk(f, a, b, max_width, rel_tol, abs_tol=1e-13,
                 max_panels=400000, max_rounds=48):
    """Bulk-refining adaptive quadrature on [a, b].

    Each round splits every panel in the set that carries the top 90% of
    the summed error estimate. Returns (value, err, n_evals, converged).
    """
    n0 = max(int(np.ceil((b - a) / max_width)), 32)
    n0 = min(n0, max_panels)
    edges = np.linspace(a, b, n0 + 1)
    lo, hi = edges[:-1], edges[1:]
    vals, errs, nev = _gk_apply(f, lo, hi)
    converged = False
    for _ in range(max_rounds):
        tot = vals.sum()
        etot = errs.sum()
        if etot <= max(abs_tol, rel_tol * abs(tot)):
            converged = True
            break
        if len(lo) >= max_panels:
            break
        order = np.argsort(errs)[::-1]
        csum = np.cumsum(errs[order])
        k = int(np.searchsorted(csum, 0.90 * etot)) + 1
        k = min(k, max_panels - len(lo), len(lo))
        idx = order[:k]
        keep = np.ones(len(lo), bool)
        keep[idx] = False
        mid = 0.5 * (lo[idx] + hi[idx])
        sv, se, ne = _gk_apply(f, np.concatenate([lo[idx], mid]),
                               np.concatenate([mid, hi[idx]]))
        nev += ne
        lo = np.concatenate([lo[keep], lo[idx], mid])
        hi = np.concatenate([hi[keep], mid, hi[idx]])
        vals = np.concatenate([vals[keep], sv])
        errs = np.concatenate([errs[keep], se])
    else:
        converged = errs.sum() <= max(abs_tol, rel_tol * abs(vals.sum()))
    return vals.sum(), errs.sum(), nev, converged


def _s_tail(p0, w_trunc, rel_tol):
    """Exact two-sided tail of a non-oscillatory part beyond w_trunc.

    Substituting w = w_trunc/s maps [w_trunc, inf) onto (0, 1]; the folded
    integrand stays bounded because p0 decays at least like 1/w.
    """
    def g(s):
        w = w_trunc / s
        return (p0(w) + p0(-w)) * w_trunc / s ** 2
    return _adaptive_gk(g, 0.0, 1.0, 1.0 / 32, rel_tol, abs_tol=1e-15)


def _ibp_half_tail(h, w_trunc, t, sgn):
    """Three-term asymptotics for int_{w_trunc}^inf h(w) e^{i*sgn*w*t} dw.

    Derivatives of h at the truncation come from 5-point stencils; the
    discarded term |h'''|/t^4 is the error estimate.
    """
    d = w_trunc * 1e-3
    pts = np.array([w_trunc - 2 * d, w_trunc - d, w_trunc,
                    w_trunc + d, w_trunc + 2 * d])
    y = h(pts)
    h0 = y[2]
    h1 = (y[0] - 8 * y[1] + 8 * y[3] - y[4]) / (12 * d)
    h2 = (-y[0] + 16 * y[1] - 30 * y[2] + 16 * y[3] - y[4]) / (12 * d * d)
    h3 = (-y[0] + 2 * y[1] - 2 * y[3] + y[4]) / (2 * d ** 3)
    it = 1j * sgn * t
    phase = np.exp(1j * sgn * w_trunc * t)
    val = phase * (-h0 / it + h1 / it ** 2 - h2 / it ** 3)
    err = abs(h3) / t ** 4
    return val, err


def _osc_tail(part, w_trunc, t, sgn):
    """Two-sided tail of part(w) e^{i*sgn*w*t} beyond +-w_trunc."""
    v1, e1 = _ibp_half_tail(part, w_trunc, t, sgn)
    v2, e2 = _ibp_half_tail(lambda w: part(-w), w_trunc, t, -sgn)
    return v1 + v2, e1 + e2


def _integrate_structured(full, parts, t, rel_tol, omega_scale,
                          temperature) -> QuadratureReport:
    """Whole-line integral of a moment integrand with known structure.

    full(w) is the complete integrand; parts = (p0, pp, pm) are its
    envelopes such that full = p0 + pp*e^{+iwt} + pm*e^{-iwt}. The core
    [-W, W] is folded onto [0, W] and integrated adaptively; beyond W the
    p0 tail is computed exactly and the oscillatory tails by integration
    by parts. At t = 0 all three parts are non-oscillatory.
    """
    w_max = max(50.0 * omega_scale, 50.0 * temperature, 100.0)
    if t > 0:
        w_max = max(w_max, min(300.0 / t, 1e6))
    cap = np.pi / (4.0 * max(t, 1.0))
    def g(w):
        return full(w) + full(-w)
    val, err, nev, ok = _adaptive_gk(g, 0.0, w_max, cap, 0.25 * rel_tol)
    if not ok:
        raise ConvergenceFailure(
            "adaptive core did not meet tolerance",
            QuadratureReport(complex(val), float(err), w_max, nev))
    tv, te, tn, _ = _s_tail(parts[0], w_max, 0.25 * rel_tol)
    val += tv
    err += te
    nev += tn
    if t > 0:
        for sgn, part in ((+1, parts[1]), (-1, parts[2])):
            ov, oe = _osc_tail(part, w_max, t, sgn)
            val += ov
            err += oe
            nev += 10
    else:
        for part in (parts[1], parts[2]):
            tv, te, tn, _ = _s_tail(part, w_max, 0.25 * rel_tol)
            val += tv
            err += te
            nev += tn
    return QuadratureReport(value=complex(val), abs_error_estimate=float(err),
                            omega_truncation=float(w_max), n_evals=int(nev))


def integrate_thermal(integrand, omega_scale: float, t: float,
                      rel_tol: float) -> QuadratureReport:
    """Whole-line integral of a black-box integrand.

    The integrand must decay at least like 1/w^2 after symmetric pairing
    f(w) + f(-w), possibly modulated by oscillations of frequency up to t.
    The truncation starts at max(50*omega_scale, 100) (fold the temperature
    into omega_scale if the integrand carries a thermal weight) and doubles
    until the last octave plus a geometric extrapolation of the remainder
    is below tolerance. Oscillation-resolving panel cap pi/(4*max(t,1))
    applies whenever t > 0.

    Raises ConvergenceFailure (carrying the best report) if the octave or
    evaluation budget runs out first.
    """
    t = float(t)
    w0 = max(50.0 * float(omega_scale), 100.0)
    cap = np.pi / (4.0 * max(t, 1.0)) if t > 0 else None

    def g(w):
        return np.asarray(integrand(w), dtype=complex) \
            + np.asarray(integrand(-w), dtype=complex)

    def run(a, b):
        width = cap if cap is not None else (b - a) / 64.0
        return _adaptive_gk(g, a, b, width, 0.25 * rel_tol)

    val, err, nev, ok = run(0.0, w0)
    w_hi = w0
    prev_oct = None
    remainder = math.inf
    max_evals = 40_000_000
    for _ in range(48):
        floor = max(0.25 * rel_tol * abs(val), 1e-13)
        if prev_oct is not None:
            if remainder <= floor:
                break
        ov, oe, on, ook = run(w_hi, 2.0 * w_hi)
        val += ov
        err += oe
        nev += on
        ok = ok and ook
        mag = abs(ov)
        if prev_oct is not None and prev_oct > 0 and mag / prev_oct < 0.9:
            r = mag / prev_oct
            remainder = mag * r / (1.0 - r)
        else:
            remainder = mag
        prev_oct = mag
        w_hi *= 2.0
        if nev > max_evals:
            break
    report = QuadratureReport(value=complex(val),
                              abs_error_estimate=float(err + min(remainder,
                                                                 abs(val) + 1.0)),
                              omega_truncation=float(w_hi), n_evals=int(nev))
    floor = max(0.25 * rel_tol * abs(val), 1e-13)
    if remainder > floor or not ok:
        raise ConvergenceFailure(
            "tail remainder did not meet tolerance within the octave budget",
            report)
    return report


def _velocity_ms(core_pair, scale, kernel, omega_cutoff, rel_tol):
    """Shared driver: core_pair(w) must be the >=0 fold of the full-line
    velocity spectral density against the requested kernel."""
    if omega_cutoff is None:
        if kernel in (ThermalKernel.QUANTUM_LOW_T, ThermalKernel.FULL_COTH):
            raise UVDivergent(
                "the folded velocity integrand decays like 1/omega for this "
                "kernel (logarithmic divergence); pass omega_cutoff")
        w_max = max(50.0 * scale, 100.0)
    else:
        w_max = float(omega_cutoff)
    val, err, nev, ok = _adaptive_gk(core_pair, 0.0, w_max, np.pi / 4.0,
                                     rel_tol)
    if not ok:
        raise ConvergenceFailure(
            "velocity integral did not converge",
            QuadratureReport(complex(val), float(err), w_max, nev))
    if omega_cutoff is None:
        tv, te, tn, _ = _s_tail(lambda w: core_pair(np.abs(w)) * 0.5, w_max,
                                rel_tol)
        val += tv
        err += te
        nev += tn
    return float(np.real(val))


def initial_velocity_ms_free(p: Params, kernel: ThermalKernel,
                             omega_cutoff: float | None = None,
                             rel_tol: float = 1e-9) -> float:
    """Mean-square initial velocity (1/pi) int dw w*gamma*K(w) /
    (gamma^2 + (w - omega_c)^2), folded onto w >= 0.

    Classically this is 2T (equipartition of both velocity components) for
    any omega_c. The sgn and coth kernels leave a 1/w tail: UVDivergent
    unless omega_cutoff is supplied, and the cutoff dependence is
    (2*gamma/pi)*ln(cutoff).
    """
    if p.omega_0 != 0.0:
        raise WrongFamily("initial_velocity_ms_free requires omega_0 = 0")
    g, wc, temp = p.gamma, p.omega_c, p.temperature
    if kernel is ThermalKernel.FULL_COTH and temp == 0.0:
        raise DomainError("temperature: FULL_COTH undefined at T = 0")

    def core_pair(w):
        num = w * _coth_weight(kernel, temp, w)
        return (g / np.pi) * (num / (g ** 2 + (w - wc) ** 2)
                              + num / (g ** 2 + (w + wc) ** 2)) + 0j

    scale = max(g, abs(wc), temp, 1.0)
    return _velocity_ms(core_pair, scale, kernel, omega_cutoff, rel_tol)


def initial_velocity_ms_confined(p: Params, kernel: ThermalKernel,
                                 omega_cutoff: float | None = None,
                                 rel_tol: float = 1e-9) -> float:
    """Mean-square initial velocity with a trap:
    (1/pi) int dw w^3*gamma*K(w) / [(w^2 - omega_0^2 - w*omega_c)^2
    + (w*gamma)^2], folded onto w >= 0. Same UV behavior as the free case.
    """
    if p.omega_0 <= 0.0:
        raise WrongFamily("initial_velocity_ms_confined requires omega_0 > 0")
    g, wc, w0, temp = p.gamma, p.omega_c, p.omega_0, p.temperature
    if kernel is ThermalKernel.FULL_COTH and temp == 0.0:
        raise DomainError("temperature: FULL_COTH undefined at T = 0")

    def dpoly(w):
        return (w * w - w0 ** 2 - w * wc) ** 2 + (w * g) ** 2

    def core_pair(w):
        num = w ** 3 * _coth_weight(kernel, temp, w)
        return (g / np.pi) * (num / dpoly(w) + num / dpoly(-w)) + 0j

    scale = max(g, abs(wc), w0, temp, 1.0)
    return _velocity_ms(core_pair, scale, kernel, omega_cutoff, rel_tol)
