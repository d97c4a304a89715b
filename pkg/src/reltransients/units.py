"""Physical constants, regime classification and the step dispersion relation.

Energies and momenta are expressed in reciprocal-length units (E = E_r / hbar c),
and the natural-unit choice hbar = m = c = 1 is the default.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field


class Regime(enum.Enum):
    PROPAGATION = "Propagation"
    EVANESCENT = "Evanescent"
    KLEIN = "KleinTunneling"
    BOUNDARY_UPPER = "BoundaryUpper"
    BOUNDARY_LOWER = "BoundaryLower"


@dataclass(frozen=True)
class PhysicalSetup:
    """Point source of energy ``E`` radiating into a step of height ``V``.

    ``mu`` and ``epsilon`` are derived; pass ``hbar``, ``mass`` and ``c`` to
    leave natural units.
    """

    E: float
    V: float = 0.0
    hbar: float = 1.0
    mass: float = 1.0
    c: float = 1.0
    mu: float = field(init=False)
    epsilon: float = field(init=False)

    def __post_init__(self):
        for name in ("E", "V", "hbar", "mass", "c"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.V < 0:
            raise ValueError("step height V must be >= 0")
        if self.hbar <= 0 or self.mass <= 0 or self.c <= 0:
            raise ValueError("hbar, mass and c must be positive")
        object.__setattr__(self, "mu", self.mass * self.c / self.hbar)
        object.__setattr__(self, "epsilon", self.E - self.V)

    def free(self) -> "PhysicalSetup":
        """Same source without the step (V = 0)."""
        return PhysicalSetup(self.E, 0.0, self.hbar, self.mass, self.c)


@dataclass(frozen=True)
class RegimeClassification:
    regime: Regime
    k: complex


def classify_regime(setup: PhysicalSetup) -> RegimeClassification:
    eps, mu = setup.epsilon, setup.mu
    if eps == mu:
        return RegimeClassification(Regime.BOUNDARY_UPPER, 0j)
    if eps == -mu:
        return RegimeClassification(Regime.BOUNDARY_LOWER, 0j)
    if abs(eps) < mu:
        return RegimeClassification(Regime.EVANESCENT, 1j * math.sqrt((mu - eps) * (mu + eps)))
    k = math.sqrt((eps - mu) * (eps + mu))
    if eps > mu:
        return RegimeClassification(Regime.PROPAGATION, complex(k))
    return RegimeClassification(Regime.KLEIN, complex(-k))


def z_plus_minus(setup: PhysicalSetup, k: complex) -> tuple[complex, complex]:
    """Pole positions z+- = (epsilon +- k) / mu of the contour integrand."""
    eps, mu = setup.epsilon, setup.mu
    return (eps + k) / mu, (eps - k) / mu


def dispersion_residual(setup: PhysicalSetup, k: complex) -> float:
    """Relative residual of epsilon**2 = k**2 + mu**2."""
    eps, mu = setup.epsilon, setup.mu
    lhs = complex(eps * eps)
    rhs = k * k + mu * mu
    return abs(lhs - rhs) / max(abs(lhs), abs(k * k), mu * mu)


def zbw_frequency(setup: PhysicalSetup) -> float:
    """Zitterbewegung angular frequency 2 mu c (= 2 m c**2 / hbar)."""
    return 2.0 * setup.mu * setup.c


__all__ = [
    "PhysicalSetup",
    "Regime",
    "RegimeClassification",
    "classify_regime",
    "dispersion_residual",
    "z_plus_minus",
    "zbw_frequency",
]
