"""Simulated acquisition and correlation/spectrum estimation.

A wide-sense stationary test signal is realized densely on the tick grid,
then masked by a (periodically repeated) sampling pattern to form the
zero-filled combined record. Estimates divide by the realized number of
contributing pairs, so lags without any pair stay undefined (``nan``).

Model parameters are expressed per tick: an AR(1) pole relates samples one
tick apart and sinusoid frequencies are in cycles per tick.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import lfilter

from .errors import GridMismatch, InvalidParam, LagOutOfRange, UndefinedSpectrum
from .grid import SamplingPattern, TickGrid
from .patterns import extend_periodic

log = logging.getLogger(__name__)

MODEL_KINDS = ("white-noise", "ar1", "sinusoids-plus-noise")


class UndefinedLagWarning(UserWarning):
    """Some lags had no contributing pair and were replaced by zero."""


@dataclass(frozen=True)
class SignalModel:
    """Synthetic WSS process with a known autocorrelation.

    ``variance`` is the process variance for ``white-noise`` and ``ar1`` and
    the additive noise variance for ``sinusoids-plus-noise``. Sinusoid
    phases are redrawn uniformly for each realization.
    """

    kind: str = "white-noise"
    variance: float = 1.0
    pole: float = 0.0
    amplitudes: tuple[float, ...] = ()
    frequencies: tuple[float, ...] = ()
    seed: int = 0

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise InvalidParam(f"unknown model kind {self.kind!r}; expected one of {MODEL_KINDS}")
        if self.variance < 0:
            raise InvalidParam("variance must be nonnegative")
        if self.kind == "ar1" and not -1 < self.pole < 1:
            raise InvalidParam(f"AR(1) pole must lie in (-1, 1), got {self.pole}")
        object.__setattr__(self, "amplitudes", tuple(float(a) for a in self.amplitudes))
        object.__setattr__(self, "frequencies", tuple(float(f) for f in self.frequencies))
        if len(self.amplitudes) != len(self.frequencies):
            raise InvalidParam("amplitudes and frequencies must have equal length")

    @classmethod
    def from_dict(cls, data: dict) -> "SignalModel":
        return cls(**data)

    def realize(self, num_ticks: int, rng: np.random.Generator | None = None) -> np.ndarray:
        """Dense realization of length ``num_ticks``; seeded by ``self.seed``
        unless a generator is supplied."""
        if rng is None:
            rng = np.random.default_rng(self.seed)
        sd = np.sqrt(self.variance)
        if self.kind == "white-noise":
            return sd * rng.standard_normal(num_ticks)
        if self.kind == "ar1":
            a = self.pole
            x_prev = sd * rng.standard_normal()
            innov = sd * np.sqrt(1.0 - a * a) * rng.standard_normal(num_ticks)
            out, _ = lfilter([1.0], [1.0, -a], innov, zi=[a * x_prev])
            return out
        k = np.arange(num_ticks)
        phases = rng.uniform(0.0, 2 * np.pi, size=len(self.frequencies))
        x = sd * rng.standard_normal(num_ticks)
        for amp, f, ph in zip(self.amplitudes, self.frequencies, phases):
            x += amp * np.cos(2 * np.pi * f * k + ph)
        return x

    def autocorr(self, lags) -> np.ndarray:
        """Analytic autocorrelation at integer tick lags."""
        lags = np.abs(np.asarray(lags, dtype=float))
        if self.kind == "white-noise":
            return np.where(lags == 0, self.variance, 0.0)
        if self.kind == "ar1":
            return self.variance * self.pole ** lags
        r = np.where(lags == 0, self.variance, 0.0)
        for amp, f in zip(self.amplitudes, self.frequencies):
            r = r + 0.5 * amp * amp * np.cos(2 * np.pi * f * lags)
        return r


@dataclass(frozen=True, eq=False)
class AcquisitionRecord:
    """Zero-filled combined signal on the tick grid with its occupancy mask."""

    grid: TickGrid
    values: np.ndarray
    mask: np.ndarray
    signal_id: str = "x1"
    period_ticks: int = 0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        m = np.asarray(self.mask, dtype=bool)
        if v.shape != (self.grid.span_ticks,) or m.shape != v.shape:
            raise InvalidParam("values and mask must have length span_ticks")
        if np.any(v[~m] != 0):
            raise InvalidParam("unoccupied entries must be exactly zero")
        if not self.period_ticks:
            object.__setattr__(self, "period_ticks", self.grid.span_ticks)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "mask", m)

    @property
    def num_samples(self) -> int:
        return int(self.mask.sum())


def assemble(dense: np.ndarray, pattern: SamplingPattern, num_periods: int = 1) -> AcquisitionRecord:
    """Mask a dense realization with a periodically repeated pattern."""
    if num_periods < 1:
        raise InvalidParam("num_periods must be >= 1")
    full = extend_periodic(pattern, num_periods)
    n = full.grid.span_ticks
    dense = np.asarray(dense, dtype=float)
    if dense.shape[0] < n:
        raise InvalidParam(f"dense signal has {dense.shape[0]} ticks, need {n}")
    mask = full.indicator().astype(bool)
    values = np.where(mask, dense[:n], 0.0)
    return AcquisitionRecord(full.grid, values, mask, pattern.signal_id, pattern.grid.span_ticks)


def acquire(model: SignalModel, pattern: SamplingPattern, num_periods: int) -> AcquisitionRecord:
    """Realize ``model`` and sample it through ``pattern`` for ``num_periods``.

    Deterministic for a given ``model.seed``.
    """
    if num_periods < 1:
        raise InvalidParam("num_periods must be >= 1")
    n = pattern.grid.span_ticks * num_periods
    log.debug("acquire %s: %d periods, %d ticks", model.kind, num_periods, n)
    return assemble(model.realize(n), pattern, num_periods)


@dataclass(frozen=True, eq=False)
class CorrelationEstimate:
    """Per-lag estimates with their realized contributor counts.

    ``values`` is ``nan`` wherever ``counts`` is zero.
    """

    lags: np.ndarray
    values: np.ndarray
    counts: np.ndarray
    q: int = 1
    meta: dict = field(default_factory=dict)

    @property
    def defined(self) -> np.ndarray:
        return self.counts > 0

    def rows(self):
        for l, v, c in zip(self.lags.tolist(), self.values.tolist(), self.counts.tolist()):
            yield l, (None if c == 0 else v), c


def _pair_sums(x: np.ndarray, y: np.ndarray, mx: np.ndarray, my: np.ndarray, lag: int):
    # pairs (k, k + lag): x at k, y at k + lag
    n = x.shape[0]
    if lag >= 0:
        return float(np.dot(x[:n - lag], y[lag:])), int(np.count_nonzero(mx[:n - lag] & my[lag:]))
    lag = -lag
    return float(np.dot(x[lag:], y[:n - lag])), int(np.count_nonzero(mx[lag:] & my[:n - lag]))


def _finish(lags, sums, counts, q, **meta) -> CorrelationEstimate:
    counts = np.asarray(counts, dtype=np.int64)
    sums = np.asarray(sums, dtype=float)
    values = np.full(sums.shape, np.nan)
    ok = counts > 0
    values[ok] = sums[ok] / counts[ok]
    return CorrelationEstimate(np.asarray(lags), values, counts, q, meta)


def estimate_autocorr(rec: AcquisitionRecord, lag_max: int) -> CorrelationEstimate:
    """Unbiased autocorrelation over ``l in [0, lag_max]`` ticks.

    Every occupied pair ``(k, k + l)`` of the whole record contributes,
    including pairs straddling period boundaries.
    """
    if not 0 <= lag_max < rec.grid.span_ticks:
        raise LagOutOfRange(f"lag_max must lie in [0, {rec.grid.span_ticks}), got {lag_max}")
    lags = np.arange(lag_max + 1)
    sums, counts = zip(*(_pair_sums(rec.values, rec.values, rec.mask, rec.mask, int(l)) for l in lags))
    return _finish(lags, sums, counts, rec.grid.q, kind="auto", signal_id=rec.signal_id)


def estimate_crosscorr(rec1: AcquisitionRecord, rec2: AcquisitionRecord, lag_max: int) -> CorrelationEstimate:
    """Unbiased cross-correlation ``E[x1(k) x2(k + l)]`` for ``|l| <= lag_max``."""
    if rec1.grid != rec2.grid:
        raise GridMismatch(f"records live on {rec1.grid} and {rec2.grid}")
    if not 0 <= lag_max < rec1.grid.span_ticks:
        raise LagOutOfRange(f"lag_max must lie in [0, {rec1.grid.span_ticks}), got {lag_max}")
    lags = np.arange(-lag_max, lag_max + 1)
    sums, counts = zip(*(_pair_sums(rec1.values, rec2.values, rec1.mask, rec2.mask, int(l)) for l in lags))
    return _finish(lags, sums, counts, rec1.grid.q, kind="cross",
                   signal_ids=(rec1.signal_id, rec2.signal_id))


def correlogram_psd(est: CorrelationEstimate, num_freqs: int) -> np.ndarray:
    """Correlogram spectrum from a one-sided autocorrelation estimate.

    The estimate is mirrored to negative lags and cosine-transformed on
    ``ω_k = 2πk / num_freqs`` (radians per Nyquist period). Undefined lags
    are treated as zero and flagged with :class:`UndefinedLagWarning`.

    Raises
    ------
    UndefinedSpectrum
        If no lag carries an estimate.
    """
    if num_freqs < 1:
        raise InvalidParam("num_freqs must be >= 1")
    lags = np.asarray(est.lags)
    if lags.size == 0 or lags[0] != 0 or np.any(np.diff(lags) != 1):
        raise InvalidParam("correlogram needs a one-sided estimate over lags 0..L")
    ok = est.defined
    if not ok.any():
        raise UndefinedSpectrum("no lag has a contributing pair")
    if not ok.all():
        warnings.warn(f"lags {lags[~ok].tolist()} undefined; treated as zero",
                      UndefinedLagWarning, stacklevel=2)
    r = np.where(ok, np.nan_to_num(est.values), 0.0)
    omega = 2 * np.pi * np.arange(num_freqs) / num_freqs
    step = 1.0 / est.q
    return r[0] + 2.0 * (np.cos(np.outer(omega, lags[1:] * step)) @ r[1:])
