"""Relativistic transients of Klein-Gordon and Dirac sources, steps and shutters."""

from .analysis import (
    BeatAnalysis,
    DelayClass,
    DelayMeasurement,
    FlatSignal,
    InsufficientPeriods,
    NoPeak,
    TimeSeries,
    detect_main_wavefront,
    extract_beats,
    measure_delay,
    predict_delay_class,
)
from .kernel import DEFAULT_POLICY, FrontGuardError, Representation, SeriesPolicy, TruncationFailure
from .nonrel import MoshinskyArgs, moshinsky_M, moshinsky_quadrature, psi_schrodinger_step
from .runs import RunConfig, evolve
from .shutter import ShutterSetup, dirac_shutter, psi_kg_shutter, rho_dirac_longtime, rho_kg_longtime
from .source import WaveSample, dpsi_dt_source, psi_longtime_source, psi_source, rho_longtime_source
from .special import bessel_j_derivative, bessel_j_sequence, faddeeva_w
from .units import PhysicalSetup, Regime, classify_regime, dispersion_residual, z_plus_minus, zbw_frequency

__version__ = "0.1.0"
