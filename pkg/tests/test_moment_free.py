import math
from dataclasses import replace

import numpy as np
import pytest

from orbmag import (DomainError, Method, ThermalKernel, Unsupported,
                    UVDivergent, WrongFamily, asymptote_free, build_params,
                    moment_general_free, moment_highT_free, moment_lowT_free)

K = ThermalKernel

# closed-form reference values frozen to full double precision from an
# independent residue evaluation
HIGH_T = (
    (10.0, 1.0, 0.3, -0.0079733242531708371),
    (0.5, 25.0, 0.8, -0.028557181267053706),
    (40.0, 1.0, 1.0, -0.00062460961898813238),
)
LOW_T = (
    (10.0, 1.0, 0.2, -0.5495333308302478),
    (0.5, 25.0, 0.8, -0.37539133781589851),
    # zero-field zero-point value (regression lock for the w_c = 0 branch)
    (10.0, 0.0, 0.2, -0.5493520027295722),
)


def test_high_temperature_closed_form_frozen_values():
    for g, wc, t, want in HIGH_T:
        p = build_params(g, wc, 0.0, 1.0)
        assert abs(moment_highT_free(p, t) - want) < 5e-16


def test_low_temperature_closed_form_frozen_values():
    for g, wc, t, want in LOW_T:
        p = build_params(g, wc, 0.0, 0.0)
        assert abs(moment_lowT_free(p, t) - want) < 5e-16


def test_moment_vanishes_at_zero_time():
    for g, wc in ((10.0, 1.0), (0.5, 25.0), (2.0, 2.0)):
        p = build_params(g, wc, 0.0, 1.0)
        assert moment_highT_free(p, 0.0) == 0.0
        assert moment_lowT_free(p, 0.0) == 0.0


def test_negative_time_rejected():
    p = build_params(10.0, 1.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        moment_highT_free(p, -0.1)
    with pytest.raises(DomainError):
        moment_general_free(p, -0.1, K.CLASSICAL_HIGH_T)


def test_free_moment_rejects_trap():
    p = build_params(10.0, 1.0, 5.0, 1.0)
    with pytest.raises(WrongFamily):
        moment_highT_free(p, 0.5)
    with pytest.raises(WrongFamily):
        moment_general_free(p, 0.5, K.CLASSICAL_HIGH_T)
    with pytest.raises(WrongFamily):
        asymptote_free(p, K.CLASSICAL_HIGH_T)


def test_classical_moment_linear_in_temperature():
    p1 = build_params(10.0, 1.0, 0.0, 1.0)
    p3 = build_params(10.0, 1.0, 0.0, 3.0)
    for t in (0.1, 0.7, 2.0):
        assert abs(moment_highT_free(p3, t)
                   - 3.0 * moment_highT_free(p1, t)) < 1e-17


def test_quadrature_matches_closed_forms():
    p = build_params(10.0, 1.0, 0.0, 1.0)
    assert abs(moment_general_free(p, 0.3, K.CLASSICAL_HIGH_T)
               - moment_highT_free(p, 0.3)) < 1e-8
    assert abs(moment_general_free(p, 0.3, K.QUANTUM_LOW_T)
               - moment_lowT_free(p, 0.3)) < 1e-8
    assert abs(moment_general_free(p, 0.0, K.CLASSICAL_HIGH_T)) < 1e-10


def test_transient_envelope_bound():
    # |M(t) - M_inf| <= T e^{-gamma t} (omega_c + gamma)/(gamma^2 + omega_c^2)
    for g, wc in ((10.0, 1.0), (0.5, 25.0), (2.0, 2.0)):
        p = build_params(g, wc, 0.0, 1.0)
        m_inf = asymptote_free(p, K.CLASSICAL_HIGH_T)
        for t in np.linspace(0.0, 3.0, 61):
            bound = math.exp(-g * t) * (wc + g) / (g * g + wc * wc)
            assert abs(moment_highT_free(p, t) - m_inf) <= bound + 1e-12


def test_zero_temperature_saturation_when_damping_dominates():
    for g, wc in ((10.0, 1.0), (40.0, 1.0), (5.0, 2.0)):
        p = build_params(g, wc, 0.0, 0.0)
        for gt in (20.0, 30.0, 45.0):
            assert abs(moment_lowT_free(p, gt / g) + 0.5) < 1e-3


def test_deep_time_returns_exact_asymptote():
    # beyond gamma*t = 700 the transient underflows; the asymptote is exact
    p = build_params(10.0, 1.0, 0.0, 1.0)
    assert moment_highT_free(p, 71.0) == asymptote_free(p,
                                                        K.CLASSICAL_HIGH_T)
    p0 = build_params(10.0, 1.0, 0.0, 0.0)
    assert moment_lowT_free(p0, 100.0) == -0.5
    assert moment_lowT_free(replace(p0, omega_c=-1.0), 100.0) == 0.5


def test_field_reversal_flips_sign():
    p = build_params(10.0, 1.0, 0.0, 1.0)
    pm = replace(p, omega_c=-1.0)
    for t in (0.2, 1.0):
        assert moment_highT_free(pm, t) == -moment_highT_free(p, t)
        assert moment_lowT_free(pm, t) == -moment_lowT_free(p, t)


def test_asymptote_values():
    p = build_params(10.0, 1.0, 0.0, 1.0)
    assert abs(asymptote_free(p, K.CLASSICAL_HIGH_T) + 1.0 / 101.0) < 1e-15
    assert asymptote_free(p, K.QUANTUM_LOW_T) == -0.5
    assert asymptote_free(replace(p, omega_c=-1.0), K.QUANTUM_LOW_T) == 0.5
    assert asymptote_free(build_params(10.0, 0.0, 0.0, 1.0),
                          K.CLASSICAL_HIGH_T) == 0.0
    with pytest.raises(Unsupported):
        asymptote_free(p, K.FULL_COTH)


def test_full_kernel_free_moment():
    p = build_params(10.0, 1.0, 0.0, 1.0)
    assert moment_general_free(p, 0.0, K.FULL_COTH) == 0.0
    with pytest.raises(UVDivergent):
        moment_general_free(p, 0.3, K.FULL_COTH)
    vals = {lam: moment_general_free(p, 0.3, K.FULL_COTH, omega_cutoff=lam)
            for lam in (1e3, 1e4, 1e5)}
    # cutoff sensitivity is logarithmic: equal increments per decade
    d1 = vals[1e4] - vals[1e3]
    d2 = vals[1e5] - vals[1e4]
    assert abs(d2 / d1 - 1.0) < 0.02
    # at zero temperature the full weight degenerates to the sign weight
    p0 = build_params(10.0, 1.0, 0.0, 0.0)
    assert moment_general_free(p0, 0.3, K.FULL_COTH) \
        == moment_general_free(p0, 0.3, K.QUANTUM_LOW_T)


def test_method_labels():
    assert Method.GENERAL_QUADRATURE.value == "GeneralQuadrature"
    assert Method.HIGH_T_CLOSED.value == "HighTClosed"
    assert Method.LOW_T_CLOSED.value == "LowTClosed"
    assert Method.MONTE_CARLO.value == "MonteCarlo"
