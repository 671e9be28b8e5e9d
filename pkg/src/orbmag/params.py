"""Parameter bundle, validation, and damping/field regime classification.

Natural units throughout: hbar = k_B = m = c = q = 1. The moment M_z is
reported in units of q*hbar/(m*c); time is kept in natural units internally
and rescaled to gamma*t only at the presentation layer.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError

# Relative tolerance for calling gamma and omega_c equal; labels only,
# no formula branches on it.
_CRITICAL_RTOL = 1e-12


@dataclass(frozen=True)
class Params:
    """Physical parameters: damping rate, cyclotron frequency, trap
    frequency (0 means free space), and temperature."""

    gamma: float
    omega_c: float
    omega_0: float
    temperature: float


class RegimeKind(enum.Enum):
    DAMPING_DOMINATED = "DampingDominated"
    FIELD_DOMINATED = "FieldDominated"
    CRITICAL = "Critical"


@dataclass(frozen=True)
class Regime:
    kind: RegimeKind
    gamma_bar: complex


def build_params(gamma: float, omega_c: float, omega_0: float = 0.0,
                 temperature: float = 1.0) -> Params:
    """Validate and freeze a parameter set.

    gamma must be strictly positive (the dissipative integrals need it),
    omega_0 and temperature non-negative, omega_c any real; everything
    finite. Raises DomainError naming the offending field.
    """
    gamma = float(gamma)
    omega_c = float(omega_c)
    omega_0 = float(omega_0)
    temperature = float(temperature)
    for name, value in (("gamma", gamma), ("omega_c", omega_c),
                        ("omega_0", omega_0), ("temperature", temperature)):
        if not math.isfinite(value):
            raise DomainError(f"{name} must be finite, got {value!r}")
    if gamma <= 0.0:
        raise DomainError(f"gamma must be > 0, got {gamma!r}")
    if omega_0 < 0.0:
        raise DomainError(f"omega_0 must be >= 0, got {omega_0!r}")
    if temperature < 0.0:
        raise DomainError(f"temperature must be >= 0, got {temperature!r}")
    return Params(gamma=gamma, omega_c=omega_c, omega_0=omega_0,
                  temperature=temperature)


def gamma_bar(p: Params) -> complex:
    """Complex damping rate gamma + i*omega_c."""
    return complex(p.gamma, p.omega_c)


def classify_regime(p: Params) -> Regime:
    """Label the parameter set by which rate dominates.

    gamma > omega_c is damping dominated, gamma < omega_c field dominated;
    equality within 1e-12 relative is critical. Invariant under rescaling
    (gamma, omega_c) by a common positive factor.
    """
    scale = max(abs(p.gamma), abs(p.omega_c))
    if abs(p.gamma - p.omega_c) <= _CRITICAL_RTOL * scale:
        kind = RegimeKind.CRITICAL
    elif p.gamma > p.omega_c:
        kind = RegimeKind.DAMPING_DOMINATED
    else:
        kind = RegimeKind.FIELD_DOMINATED
    return Regime(kind=kind, gamma_bar=gamma_bar(p))
