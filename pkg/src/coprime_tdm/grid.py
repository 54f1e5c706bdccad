"""Co-prime parameters, the integer tick grid and sampling patterns.

All sample instants are integer tick indices on a :class:`TickGrid` whose
resolution is ``d / q`` (``d`` being the Nyquist period). Keeping instants
integral makes every difference-set computation exact, including the
half-period shifted patterns that land on ``1.5 d``-style instants.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import GridMismatch, GridResolution, InvalidParam, NotCoprime


@dataclass(frozen=True)
class CoprimePair:
    """Validated co-prime spacings ``(M, N)`` and the Nyquist period ``d``."""

    m: int
    n: int
    d: Fraction = Fraction(1)

    def __post_init__(self):
        if self.m <= 1 or self.n <= 1:
            raise InvalidParam(f"M and N must both exceed 1, got ({self.m}, {self.n})")
        if self.m == self.n or math.gcd(self.m, self.n) != 1:
            raise NotCoprime(f"gcd({self.m}, {self.n}) = {math.gcd(self.m, self.n)}")
        d = Fraction(self.d)
        if d <= 0:
            raise InvalidParam(f"Nyquist period must be positive, got {self.d}")
        object.__setattr__(self, "d", d)

    @property
    def period(self) -> int:
        """Co-prime period ``MN`` in Nyquist periods."""
        return self.m * self.n


def make_coprime_pair(m: int, n: int, d=1) -> CoprimePair:
    """Build a :class:`CoprimePair`, raising ``InvalidParam``/``NotCoprime``."""
    if isinstance(m, bool) or isinstance(n, bool):
        raise InvalidParam("M and N must be integers")
    if int(m) != m or int(n) != n:
        raise InvalidParam(f"M and N must be integers, got ({m}, {n})")
    return CoprimePair(int(m), int(n), Fraction(d))


@dataclass(frozen=True)
class TickGrid:
    """Integer time axis with ``q`` ticks per Nyquist period."""

    q: int
    span_ticks: int

    def __post_init__(self):
        if self.q < 1:
            raise InvalidParam(f"grid subdivision q must be >= 1, got {self.q}")
        if self.span_ticks < 1:
            raise InvalidParam(f"grid span must be >= 1 tick, got {self.span_ticks}")

    @property
    def step(self) -> Fraction:
        """Tick duration in units of the Nyquist period."""
        return Fraction(1, self.q)

    def ticks(self, time) -> int:
        """Convert a time in Nyquist periods to an exact tick index."""
        t = Fraction(time) * self.q
        if t.denominator != 1:
            raise GridResolution(f"time {time} is not representable on a q={self.q} grid")
        return int(t)

    def to_dict(self) -> dict:
        return {"q": self.q, "span_ticks": self.span_ticks}


@dataclass(frozen=True)
class SamplingPattern:
    """Strictly increasing sample instants of one signal on one sampler.

    ``overlap`` lists instants that were claimed more than once when the
    pattern was produced by :func:`merge_patterns`; it is empty otherwise.
    """

    grid: TickGrid
    instants: tuple[int, ...]
    signal_id: str = "x1"
    sampler_id: str = "S"
    overlap: tuple[int, ...] = field(default=(), compare=False)

    def __post_init__(self):
        inst = tuple(int(i) for i in self.instants)
        if any(b <= a for a, b in zip(inst, inst[1:])):
            raise InvalidParam("pattern instants must be strictly increasing")
        if inst and (inst[0] < 0 or inst[-1] >= self.grid.span_ticks):
            raise InvalidParam(
                f"instants must lie in [0, {self.grid.span_ticks}), got {inst[0]}..{inst[-1]}"
            )
        object.__setattr__(self, "instants", inst)
        object.__setattr__(self, "overlap", tuple(int(i) for i in self.overlap))

    def __len__(self):
        return len(self.instants)

    def __iter__(self):
        return iter(self.instants)

    @property
    def has_overlap(self) -> bool:
        return bool(self.overlap)

    def times(self) -> list[Fraction]:
        """Instants in units of the Nyquist period."""
        return [Fraction(i, self.grid.q) for i in self.instants]

    def indicator(self) -> np.ndarray:
        """0/1 occupancy vector of length ``span_ticks``."""
        ind = np.zeros(self.grid.span_ticks, dtype=np.int64)
        ind[list(self.instants)] = 1
        return ind

    @classmethod
    def from_indicator(cls, indicator, q=1, signal_id="x1", sampler_id="S"):
        ind = np.asarray(indicator)
        if ind.ndim != 1 or not np.isin(ind, (0, 1)).all():
            raise InvalidParam("indicator must be a 1-D vector of zeros and ones")
        grid = TickGrid(q, len(ind))
        return cls(grid, tuple(np.flatnonzero(ind).tolist()), signal_id, sampler_id)

    def to_dict(self) -> dict:
        return {
            "grid": self.grid.to_dict(),
            "signal_id": self.signal_id,
            "sampler_id": self.sampler_id,
            "instants": list(self.instants),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "SamplingPattern":
        expected = {"grid", "signal_id", "sampler_id", "instants"}
        if set(data) != expected:
            raise InvalidParam(f"pattern keys must be exactly {sorted(expected)}")
        g = data["grid"]
        if set(g) != {"q", "span_ticks"}:
            raise InvalidParam("grid keys must be exactly ['q', 'span_ticks']")
        return cls(
            TickGrid(int(g["q"]), int(g["span_ticks"])),
            tuple(data["instants"]),
            str(data["signal_id"]),
            str(data["sampler_id"]),
        )

    @classmethod
    def from_json(cls, text: str) -> "SamplingPattern":
        return cls.from_dict(json.loads(text))


def rescale(pattern: SamplingPattern, q: int) -> SamplingPattern:
    """Express ``pattern`` on a finer grid with ``q`` ticks per Nyquist period."""
    if q % pattern.grid.q:
        raise GridResolution(f"cannot rescale a q={pattern.grid.q} pattern to q={q}")
    k = q // pattern.grid.q
    grid = TickGrid(q, pattern.grid.span_ticks * k)
    return SamplingPattern(
        grid,
        tuple(i * k for i in pattern.instants),
        pattern.signal_id,
        pattern.sampler_id,
        tuple(i * k for i in pattern.overlap),
    )


def common_grid(patterns: Sequence[SamplingPattern]) -> list[SamplingPattern]:
    """Rescale patterns onto the least common subdivision.

    Spans must agree once rescaled, otherwise ``GridMismatch`` is raised.
    """
    if not patterns:
        return []
    q = math.lcm(*(p.grid.q for p in patterns))
    out = [rescale(p, q) for p in patterns]
    spans = {p.grid.span_ticks for p in out}
    if len(spans) > 1:
        raise GridMismatch(f"patterns cover different spans: {sorted(spans)}")
    return out


def merge_patterns(a: SamplingPattern, b: SamplingPattern) -> SamplingPattern:
    """Union of two sub-sampler patterns of the same signal.

    Coinciding instants are collapsed and reported on ``overlap`` of the
    result; a coincidence is a design hazard downstream, not an error here.
    """
    if a.grid != b.grid:
        raise GridMismatch(f"cannot merge patterns on {a.grid} and {b.grid}")
    if a.signal_id != b.signal_id:
        raise InvalidParam(f"cannot merge signals {a.signal_id!r} and {b.signal_id!r}")
    sa, sb = set(a.instants), set(b.instants)
    dup = sorted((sa & sb) | set(a.overlap) | set(b.overlap))
    sampler = a.sampler_id if a.sampler_id == b.sampler_id else f"{a.sampler_id}+{b.sampler_id}"
    return SamplingPattern(a.grid, tuple(sorted(sa | sb)), a.signal_id, sampler, tuple(dup))


def merge_all(patterns: Iterable[SamplingPattern]) -> SamplingPattern:
    it = iter(patterns)
    try:
        out = next(it)
    except StopIteration:
        raise InvalidParam("nothing to merge") from None
    for p in it:
        out = merge_patterns(out, p)
    return out
