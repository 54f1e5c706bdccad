"""Difference sets, weight functions and the correlogram bias window.

The weight function ``z(l)`` counts sample pairs separated by lag ``l``;
it is the number of contributors available when estimating the
autocorrelation at that lag. :func:`weight_brute_force` is the ground
truth. :func:`weight_closed_form_z2` evaluates the four-term closed form for
the second signal of the multiplexed extended co-prime scheme.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatch, InvalidParam, LagOutOfRange
from .grid import CoprimePair, SamplingPattern, TickGrid, merge_patterns
from .patterns import gen_extended_x1, gen_extended_x2


@dataclass(frozen=True, eq=False)
class WeightFunction:
    """Symmetric contributor counts, stored for ``l in [0, lag_max]``."""

    grid: TickGrid
    lag_max: int
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.int64)
        if w.shape != (self.lag_max + 1,):
            raise InvalidParam(f"expected {self.lag_max + 1} weights, got {w.shape}")
        if (w < 0).any():
            raise InvalidParam("weights must be nonnegative")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def __call__(self, lag: int) -> int:
        lag = abs(int(lag))
        return int(self.weights[lag]) if lag <= self.lag_max else 0

    @property
    def lags(self) -> np.ndarray:
        """Symmetric lag axis ``-lag_max .. lag_max``."""
        return np.arange(-self.lag_max, self.lag_max + 1)

    def symmetric(self) -> np.ndarray:
        """Weights over ``-lag_max .. lag_max``."""
        return np.concatenate([self.weights[:0:-1], self.weights])

    def total(self) -> int:
        return int(self.symmetric().sum())

    def support(self) -> np.ndarray:
        """Coarray: lags (both signs) with at least one contributor."""
        return self.lags[self.symmetric() > 0]


@dataclass(frozen=True, eq=False)
class CrossWeight:
    """Cross-pattern counts ``w_ab(l) = #{(ta, tb) : tb - ta = l}``."""

    grid: TickGrid
    lag_max: int
    counts: np.ndarray

    @property
    def lags(self) -> np.ndarray:
        return np.arange(-self.lag_max, self.lag_max + 1)

    def __call__(self, lag: int) -> int:
        lag = int(lag)
        if abs(lag) > self.lag_max:
            return 0
        return int(self.counts[lag + self.lag_max])


@dataclass(frozen=True)
class DifferenceSet:
    """Multiset of pairwise instant differences, in ticks."""

    kind: str
    entries: tuple[int, ...]
    sources: tuple[str, ...]

    def multiplicity(self, lag: int) -> int:
        return self.entries.count(lag)

    def unique(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.entries)))


def _ids(p: SamplingPattern) -> str:
    return f"{p.signal_id}/{p.sampler_id}"


def self_differences(p: SamplingPattern) -> DifferenceSet:
    """All ``b - a`` over ordered pairs of instants of one pattern."""
    t = np.asarray(p.instants, dtype=np.int64)
    diff = np.subtract.outer(t, t).ravel()
    return DifferenceSet("self", tuple(sorted(diff.tolist())), (_ids(p),))


def cross_differences(a: SamplingPattern, b: SamplingPattern) -> DifferenceSet:
    """All ``tb - ta`` with ``ta`` from ``a`` and ``tb`` from ``b``."""
    if a.grid.q != b.grid.q:
        raise GridMismatch(f"grid subdivisions differ: {a.grid.q} vs {b.grid.q}")
    ta = np.asarray(a.instants, dtype=np.int64)
    tb = np.asarray(b.instants, dtype=np.int64)
    diff = np.subtract.outer(tb, ta).ravel()
    return DifferenceSet("cross", tuple(sorted(diff.tolist())), (_ids(a), _ids(b)))


def weight_brute_force(p: SamplingPattern, lag_max: int) -> WeightFunction:
    """Count pairs of instants at every lag ``0 .. lag_max`` (in ticks).

    Parameters
    ----------
    p : SamplingPattern
        Pattern whose self-difference weights are wanted.
    lag_max : int
        Largest lag reported; must be below the grid span.

    Returns
    -------
    WeightFunction
        ``w(l) = |{(a, b) : b - a = l}|``; ``w(0)`` equals ``len(p)``.
    """
    if not 0 <= lag_max < p.grid.span_ticks:
        raise LagOutOfRange(f"lag_max must lie in [0, {p.grid.span_ticks}), got {lag_max}")
    t = np.asarray(p.instants, dtype=np.int64)
    diff = np.subtract.outer(t, t).ravel()
    diff = diff[(diff >= 0) & (diff <= lag_max)]
    return WeightFunction(p.grid, lag_max, np.bincount(diff, minlength=lag_max + 1))


def cross_weight(a: SamplingPattern, b: SamplingPattern, lag_max: int) -> CrossWeight:
    """Cross-pattern pair counts over ``-lag_max .. lag_max``.

    Not symmetric in general; ``cross_weight(a, b)(l) == cross_weight(b, a)(-l)``.
    """
    if a.grid != b.grid:
        raise GridMismatch(f"cannot cross {a.grid} with {b.grid}")
    if lag_max < 0:
        raise LagOutOfRange("lag_max must be nonnegative")
    ta = np.asarray(a.instants, dtype=np.int64)
    tb = np.asarray(b.instants, dtype=np.int64)
    diff = np.subtract.outer(tb, ta).ravel()
    diff = diff[np.abs(diff) <= lag_max] + lag_max
    return CrossWeight(a.grid, lag_max, np.bincount(diff, minlength=2 * lag_max + 1))


def closed_form_z2_terms(pair: CoprimePair, lag: int) -> dict[str, int]:
    """Evaluate the four delta-sum terms of the closed-form ``z2(l)``.

    Each delta sum is resolved by solving for the summation index at which
    its argument vanishes rather than scanning the whole index range.

    Returns
    -------
    dict
        Keys ``A``, ``B``, ``C``, ``D`` with integer contributions.
    """
    M, N = pair.m, pair.n
    lag = int(lag)
    if abs(lag) > 2 * M * N - 1:
        raise LagOutOfRange(f"|l| must be <= {2 * M * N - 1}, got {lag}")
    a_lag = abs(lag)

    # A: triangular M-spaced self terms, plus unit spikes at |l| = Mn, n in [N+1, 2N-1]
    A = 0
    if lag % M == 0 and abs(lag // M) <= N - 1:
        A += N - abs(lag // M)
    if a_lag % M == 0 and N + 1 <= a_lag // M <= 2 * N - 1:
        A += 1

    # B: triangular N-spaced self terms over two co-prime periods
    B = 0
    if lag % N == 0 and abs(lag // N) <= 2 * M - 1:
        B = 2 * M - abs(lag // N)

    # C: doubled cross terms l = Mn - Nm, minus the origin
    C = -1 if lag == 0 else 0
    for n in range(N + 1, 2 * N):
        r = M * n - lag
        if r % N == 0 and M + 1 <= r // N <= 2 * M - 1:
            C += 2

    # D: cross terms with |l| = |Mn - Nm|, m in [1, M-1]
    D = 0
    targets = {a_lag, -a_lag}
    for n in range(N + 1, 2 * N):
        for v in targets:
            r = M * n - v
            if r % N == 0 and 1 <= r // N <= M - 1:
                D += 1
    return {"A": A, "B": B, "C": C, "D": D}


def weight_closed_form_z2(pair: CoprimePair, lag: int) -> int:
    """Closed-form contributor count ``z2(l)`` for the second signal."""
    return sum(closed_form_z2_terms(pair, lag).values())


def extended_weights(pair: CoprimePair) -> tuple[WeightFunction, WeightFunction]:
    """Brute-force ``(z1, z2)`` over ``l in [0, 2MN - 1]``."""
    L = 2 * pair.m * pair.n - 1
    p1 = merge_patterns(*gen_extended_x1(pair))
    p2 = merge_patterns(*gen_extended_x2(pair))
    return weight_brute_force(p1, L), weight_brute_force(p2, L)


@dataclass
class ZRelationReport:
    """Outcome of comparing the two signals' weight functions."""

    pair: CoprimePair
    checks: dict[str, bool]
    differing_lags: tuple[int, ...]
    extra_lags: tuple[int, ...]
    sum_z1: int
    sum_z2: int
    details: dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def lines(self) -> list[str]:
        out = []
        for name, ok in self.checks.items():
            extra = self.details.get(name, "")
            out.append(f"{'PASS' if ok else 'FAIL'} {name}{': ' + extra if extra else ''}")
        return out


def verify_z_relations(pair: CoprimePair) -> ZRelationReport:
    """Check how multiplexing moves contributors between the two signals.

    Asserted relations, over the symmetric lag range ``|l| <= 2MN - 1``:

    * ``z1(l) = z2(l) + 1`` at ``l = ±Mn``, ``n in [1, N-1]``
    * ``z1(l) = z2(l) - 1`` at ``l = ±Mn``, ``n in [N+1, 2N-1]``
    * ``z1(l) = z2(l)`` at every other lag
    * both weight functions sum to the same total
    * ``z2`` covers exactly ``2(N-1)`` lags that ``z1`` misses
    """
    M, N = pair.m, pair.n
    z1, z2 = extended_weights(pair)
    lags = z1.lags
    w1, w2 = z1.symmetric(), z2.symmetric()
    plus = {M * n for n in range(1, N)}
    minus = {M * n for n in range(N + 1, 2 * N)}
    a = np.abs(lags)
    in_plus = np.isin(a, list(plus))
    in_minus = np.isin(a, list(minus))
    rest = ~(in_plus | in_minus)

    differing = tuple(lags[w1 != w2].tolist())
    extra = tuple(lags[(w2 > 0) & (w1 == 0)].tolist())
    checks = {
        "z1 = z2 + 1 at ±Mn, n in [1, N-1]": bool((w1[in_plus] == w2[in_plus] + 1).all()),
        "z1 = z2 - 1 at ±Mn, n in [N+1, 2N-1]": bool((w1[in_minus] == w2[in_minus] - 1).all()),
        "z1 = z2 elsewhere": bool((w1[rest] == w2[rest]).all()),
        "sum z1 = sum z2": int(w1.sum()) == int(w2.sum()),
        "2(N-1) extra lags covered by z2": len(extra) == 2 * (N - 1),
    }
    details = {
        "sum z1 = sum z2": f"{int(w1.sum())} vs {int(w2.sum())}",
        "2(N-1) extra lags covered by z2": f"{list(extra)}",
    }
    return ZRelationReport(pair, checks, differing, extra, int(w1.sum()), int(w2.sum()), details)


def _symmetric_weights(w) -> tuple[np.ndarray, np.ndarray, float]:
    if isinstance(w, WeightFunction):
        return w.lags, w.symmetric().astype(float), float(w.grid.step)
    if isinstance(w, CrossWeight):
        return w.lags, w.counts.astype(float), float(w.grid.step)
    raise InvalidParam(f"unsupported weight container {type(w).__name__}")


def frequency_grid(num_freqs: int) -> np.ndarray:
    """``ω_k = 2πk / num_freqs`` for ``k = 0 .. num_freqs - 1``."""
    if num_freqs < 1:
        raise InvalidParam("num_freqs must be >= 1")
    return 2 * np.pi * np.arange(num_freqs) / num_freqs


def bias_window_complex(w, num_freqs: int) -> np.ndarray:
    """Complex DFT ``Σ_l w(l) exp(-jω l Δ)`` over the symmetric lag range."""
    lags, vals, step = _symmetric_weights(w)
    omega = frequency_grid(num_freqs)
    return np.exp(-1j * np.outer(omega, lags * step)) @ vals


def bias_window(w, num_freqs: int) -> np.ndarray:
    """Correlogram bias window: the Fourier transform of a weight function.

    ``B(ω_k) = Σ_{l=-L}^{L} w(l) cos(ω_k l Δ)`` with ``ω_k = 2πk/num_freqs``
    and ``Δ`` the tick duration in Nyquist periods. ``B(0)`` equals the total
    number of contributing pairs.
    """
    if not isinstance(w, WeightFunction):
        raise InvalidParam("bias_window needs a symmetric WeightFunction")
    omega = frequency_grid(num_freqs)
    step = float(w.grid.step)
    l = np.arange(1, w.lag_max + 1)
    tail = np.cos(np.outer(omega, l * step)) @ w.weights[1:].astype(float)
    return w.weights[0] + 2.0 * tail
