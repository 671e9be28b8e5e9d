from dataclasses import replace

import numpy as np
import pytest

from orbmag import (ConfinedRoots, DomainError, NumericalDegeneracy,
                    ThermalKernel, UVDivergent, WrongFamily, build_params,
                    gamma_bar, moment_general_confined, moment_highT_confined,
                    moment_highT_free, moment_lowT_confined, moment_lowT_free,
                    poles_confined)
from orbmag.moment_confined import (_highT_closed_from_roots,
                                    _lowT_closed_from_roots)

K = ThermalKernel

HIGH_T = (
    (10.0, 1.0, 5.0, 0.3, -0.0044612038414987235),
    (0.5, 25.0, 5.0, 0.8, -0.0547894124707997),
    (40.0, 1.0, 5.0, 1.0, -0.00019027720325337898),
)
LOW_T = (
    (10.0, 1.0, 5.0, 0.3, -0.40064867474966503),
    (0.5, 25.0, 5.0, 0.8, -0.71569144496983395),
    (10.0, 1.0, 5.0, 2.0, -0.49999819400218176),
)


def test_high_temperature_closed_form_frozen_values():
    for g, wc, w0, t, want in HIGH_T:
        p = build_params(g, wc, w0, 1.0)
        assert abs(moment_highT_confined(p, t) - want) < 5e-16


def test_low_temperature_closed_form_frozen_values():
    for g, wc, w0, t, want in LOW_T:
        p = build_params(g, wc, w0, 0.0)
        assert abs(moment_lowT_confined(p, t) - want) < 5e-16


def test_moment_vanishes_at_zero_time():
    p = build_params(10.0, 1.0, 5.0, 1.0)
    assert moment_highT_confined(p, 0.0) == 0.0
    # the zero-T residue sum cancels only to roundoff at t = 0
    assert abs(moment_lowT_confined(p, 0.0)) < 1e-12


def test_negative_time_and_family_checks():
    p = build_params(10.0, 1.0, 5.0, 1.0)
    with pytest.raises(DomainError):
        moment_highT_confined(p, -1.0)
    free = build_params(10.0, 1.0, 0.0, 1.0)
    with pytest.raises(WrongFamily):
        moment_highT_confined(free, 0.5)
    with pytest.raises(WrongFamily):
        moment_general_confined(free, 0.5, K.CLASSICAL_HIGH_T)


def test_classical_moment_decays_to_zero_in_trap():
    # confinement removes the persistent classical moment
    p = build_params(40.0, 1.0, 5.0, 1.0)
    assert abs(moment_highT_confined(p, 15.0)) < 1e-6


def test_zero_temperature_plateau():
    p = build_params(10.0, 1.0, 5.0, 0.0)
    assert abs(moment_lowT_confined(p, 2.0) + 0.5) < 1e-3
    assert abs(moment_lowT_confined(p, 20.0 / 10.0) + 0.5) < 1e-3


def test_weak_trap_approaches_free_moment():
    ph = build_params(10.0, 1.0, 1e-4, 1.0)
    pl = build_params(10.0, 1.0, 1e-4, 0.0)
    fh = replace(ph, omega_0=0.0)
    fl = replace(pl, omega_0=0.0)
    for t in (0.1, 0.3, 0.7, 1.2, 2.0):
        assert abs(moment_highT_confined(ph, t)
                   - moment_highT_free(fh, t)) < 1e-4
        assert abs(moment_lowT_confined(pl, t)
                   - moment_lowT_free(fl, t)) < 1e-4


def test_closed_forms_symmetric_under_root_swap():
    rng = np.random.default_rng(77)
    for _ in range(50):
        g = 10.0 ** rng.uniform(-1.0, 1.5)
        wc = rng.uniform(-30.0, 30.0)
        w0 = 10.0 ** rng.uniform(-0.3, 1.3)
        p = build_params(g, wc, w0, 1.0)
        r = poles_confined(p)
        if r.near_degenerate:
            continue
        swapped = ConfinedRoots(gamma_plus=r.gamma_minus,
                                gamma_minus=r.gamma_plus,
                                near_degenerate=False)
        gb = gamma_bar(p)
        t = 0.37
        a = _highT_closed_from_roots(r, gb, 1.0, t)
        b = _highT_closed_from_roots(swapped, gb, 1.0, t)
        assert abs(a - b) <= 1e-12 * max(1.0, abs(a))
        a = _lowT_closed_from_roots(r, gb, t)
        b = _lowT_closed_from_roots(swapped, gb, t)
        assert abs(a - b) <= 1e-12 * max(1.0, abs(a))


def test_field_reversal_flips_sign():
    p = build_params(10.0, 1.0, 5.0, 1.0)
    pm = replace(p, omega_c=-1.0)
    for t in (0.2, 0.8):
        assert abs(moment_highT_confined(pm, t)
                   + moment_highT_confined(p, t)) < 1e-12
        assert moment_lowT_confined(pm, t) == -moment_lowT_confined(p, t)


def test_classical_oscillation_peaks_decay():
    # underdamped trap: envelope of |M| maxima decays monotonically
    p = build_params(0.5, 25.0, 5.0, 1.0)
    ts = np.linspace(0.0, 40.0, 8001)
    m = np.array([moment_highT_confined(p, t) for t in ts])
    a = np.abs(m)
    peaks = [a[i] for i in range(1, len(a) - 1)
             if a[i] > a[i - 1] and a[i] > a[i + 1]]
    assert len(peaks) > 30
    assert all(peaks[i + 1] < peaks[i] for i in range(len(peaks) - 1))


def test_zero_temperature_ringdown_decays_by_window():
    # deviation from the -1/2 plateau decays window over window; the raw
    # extrema alternate between two families and even each family carries a
    # slow beat, so the robust statement is a windowed max
    p = build_params(0.5, 25.0, 5.0, 0.0)
    ts = np.linspace(0.0, 40.0, 8001)
    dev = np.array([abs(moment_lowT_confined(p, t) + 0.5) for t in ts])
    edges = np.linspace(0.0, 40.0, 5)
    maxima = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        sel = (ts >= lo) & (ts < hi)
        maxima.append(dev[sel].max())
    assert all(maxima[i + 1] < maxima[i] for i in range(3))


def test_degenerate_denominator_reported():
    p = build_params(1e-20, 1.0, 5.0, 1.0)
    with pytest.raises(NumericalDegeneracy) as err:
        moment_lowT_confined(p, 0.5)
    assert "dpp" in str(err.value)


def test_critically_damped_trap():
    # gamma_bar^2 = 4 omega_0^2 exactly: double-root limit must be smooth
    p = build_params(2.0, 0.0, 1.0, 1.0)
    assert abs(moment_highT_confined(p, 0.7)) < 1e-12
    assert abs(moment_general_confined(p, 0.7, K.CLASSICAL_HIGH_T)) < 1e-12
    p0 = build_params(2.0, 0.0, 1.0, 0.0)
    closed = moment_lowT_confined(p0, 1.0)
    quad = moment_general_confined(p0, 1.0, K.QUANTUM_LOW_T)
    assert abs(closed - quad) < 1e-6
    assert abs(moment_lowT_confined(p0, 20.0) + 0.5) < 1e-8
    r = poles_confined(p0)
    assert r.near_degenerate
    assert abs(r.gamma_plus + 1.0) < 1e-7
    assert abs(r.gamma_minus + 1.0) < 1e-7


def test_trap_suppresses_classical_moment():
    conf = build_params(10.0, 1.0, 5.0, 1.0)
    free = build_params(10.0, 1.0, 0.0, 1.0)
    assert abs(moment_highT_confined(conf, 1.0)) \
        < abs(moment_highT_free(free, 1.0))


def test_full_kernel_confined_moment():
    p = build_params(10.0, 1.0, 5.0, 1.0)
    assert moment_general_confined(p, 0.0, K.FULL_COTH) == 0.0
    with pytest.raises(UVDivergent):
        moment_general_confined(p, 0.3, K.FULL_COTH)
    v = moment_general_confined(p, 0.3, K.FULL_COTH, omega_cutoff=1e4)
    assert np.isfinite(v)
    p0 = build_params(10.0, 1.0, 5.0, 0.0)
    assert moment_general_confined(p0, 0.3, K.FULL_COTH) \
        == moment_general_confined(p0, 0.3, K.QUANTUM_LOW_T)


def test_quadrature_matches_closed_forms():
    p = build_params(10.0, 1.0, 5.0, 1.0)
    assert abs(moment_general_confined(p, 0.3, K.CLASSICAL_HIGH_T)
               - moment_highT_confined(p, 0.3)) < 1e-8
    p0 = build_params(10.0, 1.0, 5.0, 0.0)
    assert abs(moment_general_confined(p0, 0.3, K.QUANTUM_LOW_T)
               - moment_lowT_confined(p0, 0.3)) < 1e-8
