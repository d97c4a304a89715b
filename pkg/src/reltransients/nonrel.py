"""Schroedinger limit of the point-source problem via Moshinsky functions.

M(x, q, t) is the inverse Laplace transform

    M = 1/(2 pi i) * Int (i beta / 2) exp(i p x + s t) / (p (p - q)) ds,   p = sqrt(i beta s),

with beta = 2m/hbar, so that M(x, k, t) + M(x, -k, t) solves the free
Schroedinger equation with the source exp(-i hbar k**2 t / 2m) at x = 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from scipy import integrate

from .special import faddeeva_w
from .units import PhysicalSetup

# The rest-mass phase multiplies M evaluated at the physical time t. Halving
# the phase or doubling t leaves O(1) differences from the Klein-Gordon density.
REST_PHASE_CONVENTION = "exp(-i mu c t) * M(x, q, t)"


@dataclass(frozen=True)
class MoshinskyArgs:
    x: float
    q: float
    t: float
    beta: float = 2.0  # 2 m / hbar

    def __post_init__(self):
        for name in ("x", "q", "t", "beta"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.t <= 0:
            raise ValueError("t must be > 0")
        if self.beta <= 0:
            raise ValueError("beta must be > 0")


def moshinsky_M(args: MoshinskyArgs) -> complex:
    """Closed form 1/2 exp(i beta x**2 / 4t) w(u), u = e^{i pi/4} sqrt(beta/4t) (x - 2 q t / beta)."""
    x, q, t, beta = args.x, args.q, args.t, args.beta
    u = cmath.exp(0.25j * math.pi) * math.sqrt(beta / (4.0 * t)) * (x - 2.0 * q * t / beta)
    return 0.5 * cmath.exp(0.25j * beta * x * x / t) * faddeeva_w(u)


def moshinsky_quadrature(args: MoshinskyArgs, epsabs: float = 1e-13, epsrel: float = 1e-12) -> complex:
    """Direct numerical inversion of the Laplace integral defining M.

    With s = -i p**2 / beta the integrand becomes exp(i p x - i p**2 t / beta) / (p - q)
    and the Bromwich line maps to a hyperbola in the first quadrant of the p-plane.
    That path is deformed onto the steepest-descent line through the saddle
    p* = beta x / 2t at angle -pi/4, picking up the pole at p = q when the
    deformation sweeps across it. Independent of the error-function closed form.
    """
    x, q, t, beta = args.x, args.q, args.t, args.beta
    width = math.sqrt(beta / t)  # Gaussian width of the integrand along the line
    p0 = beta * x / (2.0 * t)
    if abs(p0 - q) < 0.25 * width:
        # keep the pole well away from the line
        p0 = q - 0.5 * width if p0 <= q else q + 0.5 * width
    direction = cmath.exp(-0.25j * math.pi)

    def f(r):
        p = p0 + direction * r
        return cmath.exp(1j * p * x - 1j * p * p * t / beta) / (p - q) * direction

    lim = 12.0 * width
    re, _ = integrate.quad(lambda r: f(r).real, -lim, lim, epsabs=epsabs, epsrel=epsrel, limit=400, points=[0.0])
    im, _ = integrate.quad(lambda r: f(r).imag, -lim, lim, epsabs=epsabs, epsrel=epsrel, limit=400, points=[0.0])
    # the Bromwich image runs from the 4th-quadrant end to the 2nd: opposite to increasing r
    line = -(re + 1j * im) / (2j * math.pi)
    # pole enclosed between the hyperbola and the line iff q lies to the right of the line
    enclosed = ((q - p0) * cmath.exp(0.25j * math.pi)).imag > 0
    residue = cmath.exp(1j * q * x - 1j * q * q * t / beta) if enclosed else 0j
    return line + residue


def schrodinger_momentum(setup: PhysicalSetup) -> float:
    """Momentum with non-relativistic kinetic energy eps - mu: k = sqrt(2 mu (eps - mu))."""
    kinetic = setup.epsilon - setup.mu
    if kinetic < 0:
        raise ValueError("source energy below the rest-mass threshold of the step region")
    return math.sqrt(2.0 * setup.mu * kinetic)


def psi_schrodinger_step(x: float, t: float, setup: PhysicalSetup) -> complex:
    """Non-relativistic limit of the step solution, rest-mass phase included."""
    if x < 0:
        raise ValueError("x must be >= 0")
    if t <= 0:
        return 0j
    k = schrodinger_momentum(setup)
    beta = 2.0 * setup.mass / setup.hbar
    pair = moshinsky_M(MoshinskyArgs(x, k, t, beta)) + moshinsky_M(MoshinskyArgs(x, -k, t, beta))
    rest = cmath.exp(-1j * setup.mu * setup.c * t)
    step = cmath.exp(-1j * setup.c * setup.V * t)
    return rest * pair * step


def schrodinger_density(x: float, t: float, setup: PhysicalSetup) -> float:
    return abs(psi_schrodinger_step(x, t, setup)) ** 2
