"""Signal analysis of density time series: wavefront arrival, delays, beats, envelope decay."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .units import PhysicalSetup, Regime, classify_regime


class NoPeak(ValueError):
    pass


class InsufficientPeriods(ValueError):
    pass


class FlatSignal(ValueError):
    pass


class DelayClass(enum.Enum):
    DELAY = "Delay"
    ADVANCE = "Advance"
    ZERO = "Zero"
    NOT_APPLICABLE = "NotApplicable"


@dataclass
class TimeSeries:
    """Density sampled on the uniform grid t0 + i*dt, i < len(rho), at fixed x."""

    x: float
    t0: float
    dt: float
    rho: np.ndarray
    psi: np.ndarray | None = None
    psi2: np.ndarray | None = None
    setup_tag: dict = field(default_factory=dict)

    def __post_init__(self):
        self.rho = np.asarray(self.rho, dtype=float)
        if self.rho.ndim != 1 or len(self.rho) < 16:
            raise ValueError("a time series needs at least 16 samples")
        if not self.dt > 0:
            raise ValueError("dt must be > 0")
        if not np.all(np.isfinite(self.rho)):
            raise ValueError("series contains non-finite samples")
        for name in ("psi", "psi2"):
            arr = getattr(self, name)
            if arr is not None:
                arr = np.asarray(arr, dtype=complex)
                if arr.shape != self.rho.shape:
                    raise ValueError(f"{name} must match rho in length")
                setattr(self, name, arr)

    @classmethod
    def from_grid(cls, x, t, rho, **kw) -> "TimeSeries":
        t = np.asarray(t, dtype=float)
        steps = np.diff(t)
        if len(t) < 2 or not np.allclose(steps, steps[0], rtol=1e-9, atol=0):
            raise ValueError("time grid must be uniform")
        return cls(x, float(t[0]), float(steps[0]), rho, **kw)

    @property
    def n(self) -> int:
        return len(self.rho)

    @property
    def t(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n)

    def restrict(self, t_min: float) -> "TimeSeries":
        i = max(0, int(math.ceil((t_min - self.t0) / self.dt - 1e-9)))
        sl = slice(i, None)
        return TimeSeries(
            self.x,
            self.t0 + i * self.dt,
            self.dt,
            self.rho[sl],
            None if self.psi is None else self.psi[sl],
            None if self.psi2 is None else self.psi2[sl],
            dict(self.setup_tag),
        )


@dataclass(frozen=True)
class DelayMeasurement:
    t_free: float
    t_step: float
    delta_t: float  # t_step - t_free: positive when the stepped wavefront arrives later
    classification: DelayClass
    zero_tol: float


@dataclass(frozen=True)
class BeatAnalysis:
    omega_est: float
    period_est: float
    decay_exponent: float
    fit_residual: float
    n_periods_used: int
    stationary: float
    carrier_peaks: tuple[float, ...] = ()


def _parabolic(y_m, y_0, y_p):
    """Offset in samples and height of the vertex through three equispaced points."""
    denom = y_m - 2.0 * y_0 + y_p
    if denom == 0:
        return 0.0, y_0
    delta = 0.5 * (y_m - y_p) / denom
    delta = max(-0.5, min(0.5, delta))
    return delta, y_0 - 0.25 * (y_m - y_p) * delta


def detect_main_wavefront(series: TimeSeries, c: float = 1.0) -> float:
    """Arrival time of the global maximum of |rho| after the light-cone time x/c."""
    t = series.t
    start = int(np.searchsorted(t, series.x / c, side="left"))
    mag = np.abs(series.rho[start:])
    if len(mag) < 3:
        raise NoPeak("transient window has fewer than three samples")
    i = int(np.argmax(mag))
    if i == 0 or i == len(mag) - 1:
        raise NoPeak("|rho| has no interior maximum in the transient window")
    delta, _ = _parabolic(mag[i - 1], mag[i], mag[i + 1])
    return float(t[start + i] + delta * series.dt)


def measure_delay(series_free: TimeSeries, series_step: TimeSeries, zero_tol: float | None = None, c: float = 1.0) -> DelayMeasurement:
    if series_free.x != series_step.x:
        raise ValueError("series must be sampled at the same position")
    if series_free.n != series_step.n or not np.isclose(series_free.t0, series_step.t0) or not np.isclose(series_free.dt, series_step.dt):
        raise ValueError("series must share the same time grid")
    if zero_tol is None:
        zero_tol = 2.0 * series_free.dt
    t_free = detect_main_wavefront(series_free, c)
    t_step = detect_main_wavefront(series_step, c)
    delta = t_step - t_free
    if abs(delta) < zero_tol:
        cls = DelayClass.ZERO
    elif delta > 0:
        cls = DelayClass.DELAY
    else:
        cls = DelayClass.ADVANCE
    return DelayMeasurement(t_free, t_step, delta, cls, zero_tol)


def predict_delay_class(setup: PhysicalSetup, rtol: float = 1e-9) -> DelayClass:
    """Delay class expected from comparing the free-type energy |eps| with E.

    The stepped wavefront behaves like a free source of energy |eps|; it is
    slower than the free one when |eps| < E. In the propagation regime that is
    always the case. In the Klein regime all three outcomes occur, |eps| = E
    (that is |eps| = V/2) giving no delay.
    """
    regime = classify_regime(setup).regime
    if setup.V == 0:
        return DelayClass.ZERO
    if regime is Regime.PROPAGATION:
        return DelayClass.DELAY
    if regime is not Regime.KLEIN or setup.V <= 2.0 * setup.mu:
        return DelayClass.NOT_APPLICABLE
    a, e = abs(setup.epsilon), setup.E
    if abs(a - e) <= rtol * setup.V:
        return DelayClass.ZERO
    return DelayClass.DELAY if a < e else DelayClass.ADVANCE


def _spectrum_peaks(y: np.ndarray, dt: float, pad: int = 8):
    """Hann-windowed amplitude spectrum; returns (angular frequencies, magnitudes, bin width)."""
    n = len(y)
    nfft = 1 << int(math.ceil(math.log2(n * pad)))
    spec = np.abs(np.fft.rfft(y * np.hanning(n), nfft))
    d_omega = 2.0 * math.pi / (nfft * dt)
    return spec, d_omega, nfft / n


def _refined_peak(spec, i, d_omega):
    if 0 < i < len(spec) - 1 and spec[i] > 0 and spec[i - 1] > 0 and spec[i + 1] > 0:
        # parabola through log-magnitudes is exact for a Gaussian-like lobe
        delta, _ = _parabolic(math.log(spec[i - 1]), math.log(spec[i]), math.log(spec[i + 1]))
    else:
        delta = 0.0
    return (i + delta) * d_omega, spec[i]


def _local_maxima(spec):
    inner = (spec[1:-1] > spec[:-2]) & (spec[1:-1] >= spec[2:])
    return np.nonzero(inner)[0] + 1


def dominant_frequencies(y: np.ndarray, dt: float, sideband_ratio: float = 0.25):
    """Strongest spectral line and, if present, its beat partner.

    Returns (omega_1, omega_2 or None). A partner is the strongest other local
    maximum outside the main lobe whose height is at least ``sideband_ratio``
    of the main line.
    """
    spec, d_omega, pad = _spectrum_peaks(y, dt)
    guard = int(math.ceil(2 * pad))  # Hann main lobe half-width, in padded bins
    spec[:guard] = 0.0  # residual trend leaks into the lowest bins
    peaks = _local_maxima(spec)
    if len(peaks) == 0:
        raise FlatSignal("no spectral line found")
    order = peaks[np.argsort(spec[peaks])[::-1]]
    i1 = int(order[0])
    w1, a1 = _refined_peak(spec, i1, d_omega)
    for i in order[1:]:
        if abs(int(i) - i1) <= 2 * guard:
            continue
        if spec[i] >= sideband_ratio * a1:
            w2, _ = _refined_peak(spec, int(i), d_omega)
            return w1, w2
        break
    return w1, None


def envelope_maxima(t: np.ndarray, y: np.ndarray, period: float):
    """Per-period maxima of |y| over consecutive whole periods, parabola-refined."""
    dt = t[1] - t[0]
    per = period / dt
    n_windows = int(math.floor((len(y) - 1) / per))
    times, amps = [], []
    mag = np.abs(y)
    for j in range(n_windows):
        lo = int(round(j * per))
        hi = min(int(round((j + 1) * per)), len(y) - 1)
        if hi - lo < 2:
            continue
        i = lo + int(np.argmax(mag[lo:hi]))
        if 0 < i < len(y) - 1:
            delta, height = _parabolic(mag[i - 1], mag[i], mag[i + 1])
        else:
            delta, height = 0.0, mag[i]
        times.append(t[i] + delta * dt)
        amps.append(height)
    return np.asarray(times), np.asarray(amps)


def fit_power_law(times: np.ndarray, amps: np.ndarray) -> tuple[float, float]:
    """Least-squares slope of log(amp) against log(t) and the RMS residual."""
    good = amps > 0
    lx, ly = np.log(times[good]), np.log(amps[good])
    A = np.vstack([lx, np.ones_like(lx)]).T
    coef, *_ = np.linalg.lstsq(A, ly, rcond=None)
    resid = ly - A @ coef
    return float(coef[0]), float(np.sqrt(np.mean(resid ** 2)))


def extract_beats(series: TimeSeries, t_min: float, stationary: float | None = None, min_periods: int = 5) -> BeatAnalysis:
    """Beat angular frequency and envelope decay exponent of the long-time density.

    A beating density is a carrier split into two spectral lines; the beat
    frequency is their separation. A single line is reported as is.
    """
    tail = series.restrict(t_min)
    t, rho = tail.t, tail.rho
    if stationary is None:
        stationary = float(np.median(rho[-max(1, len(rho) // 10):]))
    y = rho - stationary
    amp = float(np.max(np.abs(y)))
    if amp == 0.0 or amp < 1e-12 * abs(stationary):
        raise FlatSignal("oscillation amplitude is negligible against the stationary value")

    w1, w2 = dominant_frequencies(y, tail.dt)
    omega = abs(w1 - w2) if w2 is not None else w1
    lines = (w1,) if w2 is None else tuple(sorted((w1, w2)))
    if not omega > 0:
        raise FlatSignal("could not resolve an oscillation frequency")
    period = 2.0 * math.pi / omega

    span = t[-1] - t[0]
    if span < min_periods * period:
        raise InsufficientPeriods(f"window of {span:.4g} covers fewer than {min_periods} periods of {period:.4g}")
    times, amps = envelope_maxima(t, y, period)
    if len(times) < min_periods:
        raise InsufficientPeriods(f"only {len(times)} whole periods available")
    slope, resid = fit_power_law(times, amps)
    return BeatAnalysis(omega, period, slope, resid, len(times), stationary, lines)
