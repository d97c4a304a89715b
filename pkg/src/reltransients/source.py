"""Point source radiating into a potential step: exact and asymptotic solutions.

The wave is psi = (G(z+) + G(z-)) exp(-i c V t), where G is the free-type
function of :mod:`reltransients.kernel` and z+- = (eps +- k) / mu.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .kernel import (
    DEFAULT_POLICY,
    FrontGuardError,
    Representation,
    SeriesPolicy,
    bessel_for,
    free_type,
    front_free_type,
    lightcone,
)
from .units import PhysicalSetup, classify_regime, z_plus_minus


@dataclass(frozen=True)
class WaveSample:
    psi: complex
    dpsi_dt: complex
    rho: float
    representation: Representation
    components: tuple[Representation, ...] = ()


def density(psi: complex, dpsi_dt: complex, U_at_x: float, setup: PhysicalSetup) -> float:
    """Klein-Gordon particle density; ``U_at_x`` is the potential energy (not V)."""
    mc2 = setup.mass * setup.c ** 2
    return -(setup.hbar / mc2) * (psi.conjugate() * dpsi_dt).imag - (U_at_x / mc2) * abs(psi) ** 2


def step_energy(setup: PhysicalSetup) -> float:
    """Potential energy U_r = hbar c V on the step side."""
    return setup.hbar * setup.c * setup.V


def _check_point(x, t):
    if not (math.isfinite(x) and math.isfinite(t)):
        raise ValueError("x and t must be finite")
    if x < 0:
        raise ValueError("x must be >= 0")


def _in_front_guard(x, t, setup, policy):
    return setup.c * t - x < policy.front_guard / setup.mu


def _source_terms(x, t, setup, policy, derivative):
    """Free-type psi_0 and d psi_0/dt with the representation used per component."""
    k = classify_regime(setup).k
    zp, zm = z_plus_minus(setup, k)
    c, mu, eps = setup.c, setup.mu, setup.epsilon
    if _in_front_guard(x, t, setup, policy):
        s = c * t - x
        vp, dp = front_free_type(s, zp, mu, c)
        vm, dm = front_free_type(s, zm, mu, c)
        return vp + vm, dp + dm, (Representation.FRONT, Representation.FRONT)
    coords = lightcone(x, t, mu, c)
    seq = bessel_for(coords, (zp, zm), policy)
    plus = free_type(coords, zp, eps, mu, c, policy, seq, derivative)
    minus = free_type(coords, zm, eps, mu, c, policy, seq, derivative)
    return (
        plus.value + minus.value,
        plus.derivative + minus.derivative,
        (plus.representation, minus.representation),
    )


def _summary(reps):
    first = reps[0]
    return first if all(r is first for r in reps) else Representation.SERIES_A


def psi_source(x: float, t: float, setup: PhysicalSetup, policy: SeriesPolicy = DEFAULT_POLICY) -> WaveSample:
    """Exact point-source wave at (x, t), with its time derivative and density.

    Zero outside the light cone ``c t <= x``; inside the front guard the
    leading-order wavefront form is used instead of the series.
    """
    _check_point(x, t)
    if setup.c * t <= x:
        return WaveSample(0j, 0j, 0.0, Representation.OUTSIDE, (Representation.OUTSIDE,) * 2)
    psi0, dpsi0, reps = _source_terms(x, t, setup, policy, derivative=True)
    phase = cmath.exp(-1j * setup.c * setup.V * t)
    psi = psi0 * phase
    dpsi = (dpsi0 - 1j * setup.c * setup.V * psi0) * phase
    rho = density(psi, dpsi, step_energy(setup), setup)
    return WaveSample(psi, dpsi, rho, _summary(reps), reps)


def dpsi_dt_source(x: float, t: float, setup: PhysicalSetup, policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """Analytic time derivative from term-wise differentiation of the series."""
    _check_point(x, t)
    if setup.c * t <= x:
        return 0j
    if _in_front_guard(x, t, setup, policy):
        raise FrontGuardError("point is within the front guard; use psi_front_asymptotic")
    return psi_source(x, t, setup, policy).dpsi_dt


def psi_front_asymptotic(x: float, t: float, setup: PhysicalSetup) -> complex:
    """Leading-order wave just behind the relativistic front c t = x."""
    k = classify_regime(setup).k
    zp, zm = z_plus_minus(setup, k)
    s = setup.c * t - x
    mu = setup.mu
    psi0 = -1.0 + cmath.exp(-0.5j * mu * zp * s) + cmath.exp(-0.5j * mu * zm * s)
    return psi0 * cmath.exp(-1j * setup.c * setup.V * t)


def dpsi_front_asymptotic(x: float, t: float, setup: PhysicalSetup) -> complex:
    k = classify_regime(setup).k
    zp, zm = z_plus_minus(setup, k)
    c, mu = setup.c, setup.mu
    s = c * t - x
    _, dp = front_free_type(s, zp, mu, c)
    _, dm = front_free_type(s, zm, mu, c)
    psi0 = psi_front_asymptotic(x, t, setup) * cmath.exp(1j * c * setup.V * t)
    return (dp + dm - 1j * c * setup.V * psi0) * cmath.exp(-1j * c * setup.V * t)


def longtime_alpha(x: float, setup: PhysicalSetup) -> float:
    mu, c = setup.mu, setup.c
    return math.sqrt(2.0 / (math.pi * mu * c)) * (2.0 * x / c)


def psi_longtime_source(x: float, t: float, setup: PhysicalSetup) -> complex:
    """Stationary wave plus the leading t**-3/2 Bessel correction (t >> x/c)."""
    k = classify_regime(setup).k
    zp, _ = z_plus_minus(setup, k)
    c, mu = setup.c, setup.mu
    stationary = cmath.exp(1j * (k * x - setup.E * c * t))
    alpha = longtime_alpha(x, setup)
    correction = 1j * alpha / zp * cmath.exp(-1j * c * setup.V * t) * t ** -1.5 * math.cos(mu * c * t - 0.75 * math.pi)
    return stationary + correction


def rho_longtime_source(x: float, t: float, setup: PhysicalSetup) -> tuple[float, float, float]:
    """(rho_eps, rho_mu, rho_eps + rho_mu) for the propagation regime at long times."""
    k = classify_regime(setup).k.real
    zp, _ = z_plus_minus(setup, k)
    zp = zp.real
    c, mu, eps = setup.c, setup.mu, setup.epsilon
    omega = eps * c
    big_omega = 2.0 * mu * c
    alpha = longtime_alpha(x, setup)
    pref = setup.hbar / (setup.mass * c)
    beat = 0.5 * (big_omega * t + 0.5 * math.pi)
    carrier = k * x - omega * t
    decay = t ** -1.5
    rho_e = pref * (0.5 * eps - alpha * eps / zp * decay * math.sin(carrier) * math.cos(beat))
    rho_m = pref * (0.5 * eps - alpha * mu / zp * decay * math.cos(carrier) * math.sin(beat))
    return rho_e, rho_m, rho_e + rho_m
