"""Orbital diamagnetism of a damped charge in a magnetic field.

Time-dependent orbital magnetic moment M_z(t) of a charged Brownian
particle in a uniform magnetic field, coupled to an Ohmic heat bath, free
or in a harmonic trap. Three mutually validating evaluation paths: closed
forms in the classical and zero-temperature limits, direct thermal
quadrature over the bath spectrum, and a classical Monte Carlo sampler
with exact one-step statistics.

Natural units throughout: the moment is reported in units of q*hbar/(m*c)
and the classical limit is linear in the temperature.
"""

from .errors import (ConvergenceFailure, DomainError, NumericalDegeneracy,
                     OrbmagError, SingularInput, StabilityError, Unsupported,
                     UVDivergent, WrongFamily)
from .mc import InitialVelocity, McConfig, estimate_moment, step_free
from .moment_confined import (moment_general_confined, moment_highT_confined,
                              moment_lowT_confined)
from .moment_free import (Method, MomentSeries, asymptote_free,
                          moment_general_free, moment_highT_free,
                          moment_lowT_free)
from .params import (Params, Regime, RegimeKind, build_params,
                     classify_regime, gamma_bar)
from .response import (CausalityReport, ConfinedRoots, check_causality,
                       green_confined, green_free, poles_confined,
                       response_function)
from .thermal import (QuadratureReport, ThermalKernel, eval_coth,
                      initial_velocity_ms_confined, initial_velocity_ms_free,
                      integrate_thermal)

__version__ = "1.0.0"

__all__ = [
    "CausalityReport", "ConfinedRoots", "ConvergenceFailure", "DomainError",
    "InitialVelocity", "McConfig", "Method", "MomentSeries",
    "NumericalDegeneracy", "OrbmagError", "Params", "QuadratureReport",
    "Regime", "RegimeKind", "SingularInput", "StabilityError",
    "ThermalKernel", "Unsupported", "UVDivergent", "WrongFamily",
    "asymptote_free", "build_params", "check_causality", "classify_regime",
    "estimate_moment", "eval_coth", "gamma_bar", "green_confined",
    "green_free", "initial_velocity_ms_confined", "initial_velocity_ms_free",
    "integrate_thermal", "moment_general_confined", "moment_general_free",
    "moment_highT_confined", "moment_highT_free", "moment_lowT_confined",
    "moment_lowT_free", "poles_confined", "response_function", "step_free",
    "__version__",
]
