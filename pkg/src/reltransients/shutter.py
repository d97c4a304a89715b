"""Free Klein-Gordon and Dirac quantum shutters (cut-off plane wave released at t = 0)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .kernel import (
    DEFAULT_POLICY,
    Representation,
    SeriesPolicy,
    bessel_for,
    free_type,
    front_free_type,
    lightcone,
)
from .source import WaveSample, density


@dataclass(frozen=True)
class ShutterSetup:
    """Free particle of energy ``E >= mu`` (reciprocal-length units)."""

    E: float
    hbar: float = 1.0
    mass: float = 1.0
    c: float = 1.0
    mu: float = field(init=False)
    k: float = field(init=False)
    z: float = field(init=False)

    def __post_init__(self):
        if self.hbar <= 0 or self.mass <= 0 or self.c <= 0:
            raise ValueError("hbar, mass and c must be positive")
        mu = self.mass * self.c / self.hbar
        if not (math.isfinite(self.E) and self.E >= mu):
            raise ValueError(f"shutter energy must satisfy E >= mu = {mu}")
        k = math.sqrt((self.E - mu) * (self.E + mu))
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "z", (self.E + k) / mu)

    # density() only reads hbar, mass and c
    V = 0.0


@dataclass(frozen=True)
class DiracSample:
    psi1: complex
    psi2: complex
    rho_D: float
    representation: Representation = Representation.SERIES_A


def _check(x, t):
    if not (math.isfinite(x) and math.isfinite(t)):
        raise ValueError("x and t must be finite")
    if x < 0:
        raise ValueError("x must be >= 0")


def _kg_terms(x, t, setup, policy, derivative=True):
    """(G, dG/dt, J_0, dJ_0/dt, representation) for the shutter pole z."""
    c, mu = setup.c, setup.mu
    s = c * t - x
    if s < policy.front_guard / mu:
        g, dg = front_free_type(s, setup.z, mu, c)
        return g, dg, 1.0, 0.0, Representation.FRONT
    coords = lightcone(x, t, mu, c)
    seq = bessel_for(coords, (setup.z,), policy)
    kv = free_type(coords, setup.z, setup.E, mu, c, policy, seq, derivative)
    j0 = seq.values[0]
    dj0 = -seq.values[1] * coords.deta_dt
    return kv.value, kv.derivative, j0, dj0, kv.representation


def psi_kg_shutter(x: float, t: float, setup: ShutterSetup, policy: SeriesPolicy = DEFAULT_POLICY) -> WaveSample:
    _check(x, t)
    if setup.c * t <= x:
        return WaveSample(0j, 0j, 0.0, Representation.OUTSIDE, (Representation.OUTSIDE,))
    g, dg, _, _, rep = _kg_terms(x, t, setup, policy)
    return WaveSample(g, dg, density(g, dg, 0.0, setup), rep, (rep,))


def rho_kg_longtime(x: float, t: float, setup: ShutterSetup) -> tuple[float, float, float]:
    c, mu, E, k = setup.c, setup.mu, setup.E, setup.k
    alpha = (2.0 * math.pi * mu * c) ** -0.5
    omega, big_omega = E * c, 2.0 * mu * c
    carrier = k * x - omega * t
    beat = 0.5 * (big_omega * t - 0.5 * math.pi)
    pref = setup.hbar / (setup.mass * c)
    decay = t ** -0.5
    rho_e = pref * (0.5 * E - alpha * E * decay * math.cos(carrier) * math.cos(beat))
    rho_m = pref * (0.5 * E + alpha * mu * decay * math.sin(carrier) * math.sin(beat))
    return rho_e, rho_m, rho_e + rho_m


def dirac_spinor(x: float, t: float, setup: ShutterSetup, policy: SeriesPolicy = DEFAULT_POLICY):
    """Spinor components and their time derivatives: (psi1, psi2, dpsi1, dpsi2, rep)."""
    _check(x, t)
    if setup.c * t <= x:
        return 0j, 0j, 0j, 0j, Representation.OUTSIDE
    g, dg, j0, dj0, rep = _kg_terms(x, t, setup, policy)
    phi, dphi = g + 0.5 * j0, dg + 0.5 * dj0
    z = setup.z
    norm = math.sqrt(setup.mu / (2.0 * z))
    psi1 = norm * (-j0 + (z + 1.0) * phi)
    psi2 = norm * (j0 + (z - 1.0) * phi)
    dpsi1 = norm * (-dj0 + (z + 1.0) * dphi)
    dpsi2 = norm * (dj0 + (z - 1.0) * dphi)
    return psi1, psi2, dpsi1, dpsi2, rep


def dirac_shutter(x: float, t: float, setup: ShutterSetup, policy: SeriesPolicy = DEFAULT_POLICY) -> DiracSample:
    psi1, psi2, _, _, rep = dirac_spinor(x, t, setup, policy)
    return DiracSample(psi1, psi2, abs(psi1) ** 2 + abs(psi2) ** 2, rep)


def rho_dirac_longtime(x: float, t: float, setup: ShutterSetup) -> tuple[float, float, float]:
    c, mu, E, k = setup.c, setup.mu, setup.E, setup.k
    alpha = math.sqrt(8.0 / (math.pi * mu * c))
    omega, big_omega = E * c, 2.0 * mu * c
    carrier = k * x - omega * t
    beat = 0.5 * (big_omega * t + 0.5 * math.pi)
    amp = alpha * mu / (E + k) * t ** -0.5
    rho_e = E - amp * 2.0 * E * math.sin(carrier) * math.cos(beat)
    rho_m = E - amp * mu * math.cos(carrier) * math.sin(beat)
    return rho_e, rho_m, rho_e + rho_m

