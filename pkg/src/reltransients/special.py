"""Integer-order Bessel J sequences and the Faddeeva function.

Bessel sequences use Miller's backward recurrence normalised with the sum rule
J_0 + 2 sum J_2n = 1, which is stable for every order once the recurrence is
seeded above the argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

_RESCALE = 1e250


@dataclass(frozen=True)
class BesselSequence:
    argument: float
    values: np.ndarray  # J_0(argument) .. J_n_max(argument)

    @property
    def n_max(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, n: int) -> float:
        return self.values[n]


def miller_start(eta: float, n_max: int) -> int:
    m = max(n_max, int(math.ceil(eta)) + 1)
    return m + max(20, int(math.ceil(10.0 * math.sqrt(m))))


def bessel_j_sequence(eta: float, n_max: int) -> BesselSequence:
    """J_0(eta) .. J_n_max(eta) for real eta >= 0."""
    if not math.isfinite(eta):
        raise ValueError("eta must be finite")
    if eta < 0:
        raise ValueError("eta must be >= 0")
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if eta == 0.0:
        values = np.zeros(n_max + 1)
        values[0] = 1.0
        return BesselSequence(0.0, values)
    if eta < 1e-6:
        # two Maclaurin terms are exact to double precision; the recurrence
        # ratio 2n/eta would overflow here
        h = 0.5 * eta
        values = np.empty(n_max + 1)
        lead = 1.0
        for n in range(n_max + 1):
            if n:
                lead *= h / n
            values[n] = lead * (1.0 - h * h / (n + 1))
        return BesselSequence(float(eta), values)

    start = miller_start(eta, n_max)
    buf = [0.0] * (start + 2)
    two_over = 2.0 / eta
    j_hi, j = 0.0, 1e-300
    buf[start] = j
    norm = 0.0
    for n in range(start, 0, -1):
        j_lo = n * two_over * j - j_hi
        j_hi, j = j, j_lo
        buf[n - 1] = j
        if (n - 1) % 2 == 0 and n - 1 > 0:
            norm += j
        if abs(j) > _RESCALE:
            # underflowing high orders are irrelevant at this magnitude
            scale = 1.0 / _RESCALE
            j *= scale
            j_hi *= scale
            norm *= scale
            for m in range(n - 1, min(start, n_max + 1) + 1):
                buf[m] *= scale
    norm = 2.0 * norm + buf[0]
    values = np.asarray(buf[: n_max + 1]) / norm
    return BesselSequence(float(eta), values)


def bessel_j_derivative(seq: BesselSequence, n: int) -> float:
    """dJ_n/d(eta) from the neighbouring orders of ``seq``."""
    if n < 0 or n + 1 > seq.n_max:
        raise IndexError(f"order {n} needs J_{n + 1}; sequence stops at {seq.n_max}")
    if n == 0:
        return -seq.values[1]
    return 0.5 * (seq.values[n - 1] - seq.values[n + 1])


def faddeeva_w(z: complex) -> complex:
    """w(z) = exp(-z**2) erfc(-i z).

    Delegates to the region-split evaluator in ``scipy.special.wofz``; the lower
    half plane goes through w(-z) = 2 exp(-z**2) - w(z) explicitly so the
    identity holds by construction.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError("z must be finite")
    if z.imag >= 0:
        return complex(_sp.wofz(z))
    return 2.0 * complex(np.exp(-z * z)) - complex(_sp.wofz(-z))
