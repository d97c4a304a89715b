"""Shared series kernel for free-type Klein-Gordon functions.

Every exact solution in the package is assembled from

    G(z) = exp(i(q x - eps c t)) + J_0(eta)/2 - sum_{n>=0} (xi / i z)**n J_n(eta)

with q = mu z - eps, evaluated on the light cone coordinates eta, xi. The
generating function of J_n gives the equivalent form

    G(z) = J_0(eta)/2 + sum_{n>=1} (-i z / xi)**n J_n(eta)

and the kernel picks, per call, whichever has a geometric ratio of modulus <= 1.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .special import BesselSequence, bessel_j_sequence


class Representation(enum.Enum):
    SERIES_A = "SeriesA"
    SERIES_B = "SeriesB"
    FRONT = "FrontAsymptotic"
    LONG_TIME = "LongTime"
    OUTSIDE = "OutsideCone"


class TruncationFailure(RuntimeError):
    """Series did not converge within ``max_terms``."""

    def __init__(self, message: str, residual: float = math.nan):
        super().__init__(message)
        self.residual = residual


class FrontGuardError(ValueError):
    """Point lies inside the front guard, where only the asymptotic form applies."""


@dataclass(frozen=True)
class SeriesPolicy:
    rel_tol: float = 1e-12
    max_terms: int = 20000
    consecutive_small: int = 4
    front_guard: float = 1e-6
    force: Representation | None = None  # SERIES_A / SERIES_B for diagnostics only

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be > 0")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")
        if self.consecutive_small < 1:
            raise ValueError("consecutive_small must be >= 1")
        if self.front_guard < 0:
            raise ValueError("front_guard must be >= 0")


DEFAULT_POLICY = SeriesPolicy()


@dataclass(frozen=True)
class LightconeCoords:
    x: float
    t: float
    inside: bool
    eta: float = math.nan
    xi: float = math.nan
    # time derivatives of eta and log(xi)
    deta_dt: float = math.nan
    dlogxi_dt: float = math.nan


def lightcone(x: float, t: float, mu: float, c: float) -> LightconeCoords:
    ct = c * t
    if not ct > x:
        return LightconeCoords(x, t, False)
    # (ct - x)(ct + x) rather than c^2 t^2 - x^2 keeps precision at the front
    lo, hi = ct - x, ct + x
    interval = lo * hi
    eta = mu * math.sqrt(interval)
    xi = math.sqrt(hi / lo)
    deta_dt = mu * c * ct / math.sqrt(interval)
    dlogxi_dt = -c * x / interval
    return LightconeCoords(x, t, True, eta, xi, deta_dt, dlogxi_dt)


@dataclass
class KernelValue:
    value: complex
    derivative: complex  # d/dt, nan when not requested
    representation: Representation
    terms: int
    condition: float  # largest |term| over |result|; ~1 when well conditioned


def _bessel_budget(eta: float) -> int:
    # beyond this order J_n(eta) is far below any tolerance we use
    return int(math.ceil(eta + 12.0 * eta ** (1.0 / 3.0) + 30.0))


def _terms_needed(ratio: float, eta: float, policy: SeriesPolicy) -> int:
    n_bes = _bessel_budget(eta)
    if ratio < 1.0:
        n_geo = int(math.ceil(math.log(policy.rel_tol * 1e-2) / math.log(max(ratio, 1e-300))))
        n_bes = min(n_bes, n_geo + policy.consecutive_small + 2)
    if ratio > 1.0:
        n_bes = int(math.ceil(n_bes * max(1.0, ratio)))
    return max(n_bes, policy.consecutive_small + 2)


def choose_representation(xi: float, z: complex, policy: SeriesPolicy) -> Representation:
    if policy.force in (Representation.SERIES_A, Representation.SERIES_B):
        return policy.force
    return Representation.SERIES_A if xi <= abs(z) else Representation.SERIES_B


def bessel_for(coords: LightconeCoords, zs, policy: SeriesPolicy) -> BesselSequence:
    """One Bessel sequence long enough for every ``z`` evaluated at ``coords``."""
    n = 0
    for z in zs:
        rep = choose_representation(coords.xi, z, policy)
        ratio = coords.xi / abs(z) if rep is Representation.SERIES_A else abs(z) / coords.xi
        n = max(n, _terms_needed(ratio, coords.eta, policy))
    return bessel_j_sequence(coords.eta, min(n, policy.max_terms) + 2)


def _power_sum(seq, w, n0, eta, derivative, policy):
    """sum_{n>=n0} w**n J_n, plus sum n w**n J_n and sum w**n J_n' if asked."""
    values = seq.values
    last = len(values) - 2  # J_{n+1} is needed for J_n'
    total = 0j
    s_n = 0j
    s_prime = 0j
    wn = w ** n0 if n0 else 1.0 + 0j
    aw = abs(w)
    small = 0
    biggest = 0.0
    n = n0
    while True:
        if n > last:
            return None, n, biggest, total
        jn = values[n]
        term = wn * jn
        total += term
        mag = abs(term)
        biggest = max(biggest, mag)
        if derivative:
            s_n += n * term
            jp = -values[1] if n == 0 else 0.5 * (values[n - 1] - values[n + 1])
            s_prime += wn * jp
            mag = max(mag * (1 + n), abs(wn) * abs(jp))
        if mag < policy.rel_tol * max(abs(total), 1e-300):
            small += 1
        else:
            small = 0
        if small >= policy.consecutive_small and (n > eta or aw ** n < policy.rel_tol):
            return (total, s_n, s_prime), n + 1 - n0, biggest, total
        if n - n0 + 1 >= policy.max_terms:
            raise TruncationFailure(
                f"series not converged after {policy.max_terms} terms (eta={eta:.6g}, |w|={aw:.6g})",
                residual=mag / max(abs(total), 1e-300),
            )
        wn *= w
        n += 1


def free_type(
    coords: LightconeCoords,
    z: complex,
    eps: float,
    mu: float,
    c: float,
    policy: SeriesPolicy = DEFAULT_POLICY,
    seq: BesselSequence | None = None,
    derivative: bool = False,
) -> KernelValue:
    """Evaluate G(z) (and dG/dt) strictly inside the light cone."""
    if not coords.inside:
        return KernelValue(0j, 0j, Representation.OUTSIDE, 0, 1.0)
    rep = choose_representation(coords.xi, z, policy)
    if rep is Representation.SERIES_A:
        w = coords.xi / (1j * z)
        n0, xi_power = 0, 1.0
    else:
        w = -1j * z / coords.xi
        n0, xi_power = 1, -1.0

    if seq is None:
        seq = bessel_for(coords, (z,), policy)
    while True:
        sums, nterms, biggest, partial = _power_sum(seq, w, n0, coords.eta, derivative, policy)
        if sums is not None:
            break
        n_next = min(2 * seq.n_max, policy.max_terms + 2)
        if n_next <= seq.n_max:
            raise TruncationFailure(
                f"series not converged within {policy.max_terms} terms", residual=math.nan
            )
        seq = bessel_j_sequence(coords.eta, n_next)
    total, s_n, s_prime = sums

    j0 = seq.values[0]
    x, t = coords.x, coords.t
    if rep is Representation.SERIES_A:
        q = mu * z - eps
        plane = cmath.exp(1j * (q * x - eps * c * t))
        value = plane + 0.5 * j0 - total
    else:
        plane = 0j
        value = 0.5 * j0 + total

    deriv = complex(math.nan, math.nan)
    if derivative:
        half_j0_dt = -0.5 * seq.values[1] * coords.deta_dt
        sum_dt = xi_power * coords.dlogxi_dt * s_n + coords.deta_dt * s_prime
        if rep is Representation.SERIES_A:
            deriv = -1j * eps * c * plane + half_j0_dt - sum_dt
        else:
            deriv = half_j0_dt + sum_dt
    scale = max(abs(value), 1e-300)
    return KernelValue(value, deriv, rep, nterms, max(biggest, abs(plane), abs(0.5 * j0)) / scale)


def front_free_type(s: float, z: complex, mu: float, c: float, shift: float = -0.5):
    """Leading-order G(z) close to the front, with s = c t - x.

    J_n(eta) ~ (eta/2)**n / n! turns the second representation into an
    exponential; ``shift`` is the constant left over (-1/2 for G).
    Returns (value, d/dt).
    """
    phase = cmath.exp(-0.5j * mu * z * s)
    return phase + shift, -0.5j * mu * z * c * phase
