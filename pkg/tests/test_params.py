import dataclasses
import math

import pytest

from orbmag import (DomainError, RegimeKind, build_params, classify_regime,
                    gamma_bar)


def test_build_params_fields():
    p = build_params(10.0, 1.0, 5.0, 2.0)
    assert p.gamma == 10.0
    assert p.omega_c == 1.0
    assert p.omega_0 == 5.0
    assert p.temperature == 2.0


def test_free_and_unit_temperature_defaults():
    p = build_params(3.0, -2.0)
    assert p.omega_0 == 0.0
    assert p.temperature == 1.0


def test_params_immutable():
    p = build_params(1.0, 0.0)
    with pytest.raises(dataclasses.FrozenInstanceError):
        p.gamma = 2.0


@pytest.mark.parametrize("kwargs,field", [
    (dict(gamma=0.0, omega_c=1.0), "gamma"),
    (dict(gamma=-1.0, omega_c=1.0), "gamma"),
    (dict(gamma=math.nan, omega_c=1.0), "gamma"),
    (dict(gamma=1.0, omega_c=math.inf), "omega_c"),
    (dict(gamma=1.0, omega_c=0.0, omega_0=-5.0), "omega_0"),
    (dict(gamma=1.0, omega_c=0.0, temperature=-0.5), "temperature"),
])
def test_rejected_inputs_name_the_field(kwargs, field):
    with pytest.raises(DomainError) as err:
        build_params(**kwargs)
    assert field in str(err.value)


def test_zero_field_zero_temperature_allowed():
    p = build_params(1.0, 0.0, 0.0, 0.0)
    assert p.omega_c == 0.0 and p.temperature == 0.0


def test_gamma_bar_is_complex_rate():
    assert gamma_bar(build_params(10.0, 1.0)) == 10.0 + 1.0j
    assert gamma_bar(build_params(0.5, -25.0)) == 0.5 - 25.0j


def test_regime_classification():
    assert classify_regime(build_params(10.0, 1.0)).kind \
        is RegimeKind.DAMPING_DOMINATED
    assert classify_regime(build_params(0.5, 25.0)).kind \
        is RegimeKind.FIELD_DOMINATED
    assert classify_regime(build_params(2.0, 2.0)).kind is RegimeKind.CRITICAL


def test_regime_critical_uses_relative_tolerance():
    assert classify_regime(build_params(1.0, 1.0 + 1e-13)).kind \
        is RegimeKind.CRITICAL
    assert classify_regime(build_params(1.0, 1.1)).kind \
        is RegimeKind.FIELD_DOMINATED


def test_regime_labels_and_rate():
    assert [k.value for k in RegimeKind] == ["DampingDominated",
                                             "FieldDominated", "Critical"]
    reg = classify_regime(build_params(10.0, 1.0))
    assert reg.gamma_bar == 10.0 + 1.0j
