"""Sampling pattern families for multiplexed co-prime acquisition.

Every generator returns :class:`~coprime_tdm.grid.SamplingPattern` objects
on an explicit tick grid. The extended generators default to one two-period
window of ``2MN`` Nyquist periods; continuous operation is modelled as a
periodic repetition of that window (see :func:`extend_periodic`).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import GridResolution, InvalidParam
from .grid import CoprimePair, SamplingPattern, TickGrid, merge_patterns

SCHEMES = ("nyquist-tdm", "extended", "extended-tdm-2sampler", "exsca")


def _progression(start: int, step: int, count: int | None = None, span: int | None = None):
    if count is not None:
        return tuple(start + step * k for k in range(count))
    return tuple(range(start, span, step)) if start < span else ()


def gen_uniform(period_ticks: int, offset_ticks: int, span: int, q: int = 1,
                signal_id: str = "x1", sampler_id: str = "S") -> SamplingPattern:
    """Uniform sampling ``offset, offset + period, ...`` below ``span`` ticks."""
    if period_ticks < 1:
        raise InvalidParam(f"period must be positive, got {period_ticks}")
    if offset_ticks < 0:
        raise InvalidParam(f"offset must be nonnegative, got {offset_ticks}")
    grid = TickGrid(q, span)
    return SamplingPattern(grid, _progression(offset_ticks, period_ticks, span=span),
                           signal_id, sampler_id)


def _extended_grid(pair: CoprimePair, q: int, span: int | None) -> TickGrid:
    return TickGrid(q, 2 * pair.m * pair.n * q if span is None else span)


def _n_branch(pair, grid, signal_id, sampler_id, shift=0):
    inst = _progression(shift, pair.n * grid.q, count=2 * pair.m)
    return SamplingPattern(grid, tuple(i for i in inst if i < grid.span_ticks),
                           signal_id, sampler_id)


def _m_branch(pair, grid, n_range, signal_id, sampler_id):
    inst = tuple(pair.m * n * grid.q for n in n_range)
    return SamplingPattern(grid, tuple(i for i in inst if i < grid.span_ticks),
                           signal_id, sampler_id)


def gen_extended_x1(pair: CoprimePair, q: int = 1, span: int | None = None,
                    signal_id: str = "x1"):
    """Branches of the first signal in the extended co-prime scheme.

    Returns
    -------
    (SamplingPattern, SamplingPattern)
        M-branch at ``Mn`` for ``n in [0, N-1]`` and N-branch at ``Nm`` for
        ``m in [0, 2M-1]``, both on a ``2MN``-period window by default.
    """
    grid = _extended_grid(pair, q, span)
    return (_m_branch(pair, grid, range(0, pair.n), signal_id, "M"),
            _n_branch(pair, grid, signal_id, "N"))


def gen_extended_x2(pair: CoprimePair, q: int = 1, span: int | None = None,
                    signal_id: str = "x2"):
    """Branches of the second signal: the M-branch fills ``n in [N, 2N-1]``,
    the slot left vacant by the first signal."""
    grid = _extended_grid(pair, q, span)
    return (_m_branch(pair, grid, range(pair.n, 2 * pair.n), signal_id, "M"),
            _n_branch(pair, grid, signal_id, "N"))


def half_shift_q(pair: CoprimePair) -> int:
    """Smallest subdivision on which the ``Nd/2`` shift is an integer tick."""
    return 1 if pair.n % 2 == 0 else 2


def gen_tdm_two_sampler_x2(pair: CoprimePair, q: int | None = None,
                           span: int | None = None, signal_id: str = "x2"):
    """Second-signal branches when two samplers are shared by two signals.

    The N-spaced branch is delayed by half its spacing, ``t = Nmd + Nd/2``,
    so it interleaves with the first signal on the same physical sampler.
    ``q`` defaults to 2 when N is odd.
    """
    if q is None:
        q = half_shift_q(pair)
    if (pair.n * q) % 2:
        raise GridResolution(f"Nd/2 shift needs an even N*q, got N={pair.n}, q={q}")
    grid = _extended_grid(pair, q, span)
    return (_m_branch(pair, grid, range(pair.n, 2 * pair.n), signal_id, "M"),
            _n_branch(pair, grid, signal_id, "N", shift=pair.n * q // 2))


@dataclass(frozen=True)
class ExscaConfig:
    """Extremely sparse co-prime configuration.

    Offsets ``s11`` and ``s12`` are in ticks of a ``q``-subdivided grid.
    Sampler 1 is the ``ex*M`` spaced sampler and sampler 2 the ``ex*N``
    spaced one.
    """

    pair: CoprimePair
    ex: int = 1
    s11: int = 0
    s12: int = 0
    q: int = 1

    def __post_init__(self):
        if self.ex < 1:
            raise InvalidParam(f"sparsity factor must be >= 1, got {self.ex}")
        if self.s11 < 0 or self.s12 < 0:
            raise InvalidParam("sampler offsets must be nonnegative")
        if self.q < 1:
            raise InvalidParam(f"grid subdivision q must be >= 1, got {self.q}")

    @property
    def spacing1(self) -> int:
        return self.ex * self.pair.m * self.q

    @property
    def spacing2(self) -> int:
        return self.ex * self.pair.n * self.q

    def shifts(self, signal: int, num_signals: int = 2) -> tuple[int, int]:
        """Offsets ``(s_i1, s_i2)`` of signal ``i`` on both samplers.

        Two signals use half-spacing shifts. With more signals the spacing
        is split into ``ex`` equal slots, which needs ``num_signals <= ex``.
        """
        if num_signals < 1 or not 1 <= signal <= num_signals:
            raise InvalidParam(f"signal index {signal} outside 1..{num_signals}")
        if num_signals <= 2:
            slots = 2
        else:
            if num_signals > self.ex:
                raise InvalidParam(
                    f"{num_signals} signals need a sparsity factor >= {num_signals}, got {self.ex}")
            slots = self.ex
        k = signal - 1
        out = []
        for base, spacing in ((self.s11, self.spacing1), (self.s12, self.spacing2)):
            if (k * spacing) % slots:
                raise GridResolution(
                    f"shift {k}*{spacing}/{slots} is not integral on a q={self.q} grid")
            out.append(base + k * spacing // slots)
        return out[0], out[1]

    @property
    def s21(self) -> int:
        return self.shifts(2)[0]

    @property
    def s22(self) -> int:
        return self.shifts(2)[1]


def gen_exsca(cfg: ExscaConfig, signal: int, span: int, num_signals: int = 2):
    """Sampler-1 and sampler-2 instants of one ExSCA signal below ``span``."""
    if span < 1:
        raise InvalidParam("ExSCA needs an explicit positive span")
    a, b = cfg.shifts(signal, num_signals)
    grid = TickGrid(cfg.q, span)
    sid = f"x{signal}"
    return (SamplingPattern(grid, _progression(a, cfg.spacing1, span=span), sid, "S1"),
            SamplingPattern(grid, _progression(b, cfg.spacing2, span=span), sid, "S2"))


def extend_periodic(pattern: SamplingPattern, num_periods: int) -> SamplingPattern:
    """Repeat a pattern ``num_periods`` times with period ``span_ticks``."""
    if num_periods < 1:
        raise InvalidParam("num_periods must be >= 1")
    span = pattern.grid.span_ticks
    inst = tuple(p * span + i for p in range(num_periods) for i in pattern.instants)
    return SamplingPattern(TickGrid(pattern.grid.q, span * num_periods), inst,
                           pattern.signal_id, pattern.sampler_id)


def build_scheme(pair: CoprimePair, scheme: str, *, ex: int = 1, s11: int = 0,
                 s12: int = 0, span: int | None = None, q: int | None = None,
                 num_signals: int = 2) -> list[SamplingPattern]:
    """All branch patterns of a multiplexing scheme, tagged with sampler ids.

    Sampler ids name the physical sampler that acquires a branch, so that
    patterns sharing an id are time-multiplexed onto one switch:

    * ``nyquist-tdm``: one sampler ``S`` at twice the Nyquist rate, the second
      signal offset by ``d/2``. Default ``q = 4`` leaves room for a one-tick
      hold plus a transition between neighbouring samples.
    * ``extended``: shared ``M`` sampler plus one N-spaced sampler per signal
      (``N1``, ``N2``): three samplers.
    * ``extended-tdm-2sampler``: shared ``M`` and ``N`` samplers, second
      signal's N-branch delayed by ``Nd/2``.
    * ``exsca``: samplers ``S1``/``S2`` with spacings ``ex*M`` and ``ex*N``.
    """
    if scheme not in SCHEMES:
        raise InvalidParam(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    if scheme != "exsca" and num_signals != 2:
        raise InvalidParam(f"scheme {scheme!r} carries exactly two signals")

    if scheme == "nyquist-tdm":
        q = 4 if q is None else q
        if q % 2:
            raise GridResolution("a d/2 offset needs an even q")
        span = 2 * pair.period * q if span is None else span
        return [gen_uniform(q, 0, span, q, "x1", "S"),
                gen_uniform(q, q // 2, span, q, "x2", "S")]

    if scheme == "extended":
        q = 1 if q is None else q
        m1, n1 = gen_extended_x1(pair, q, span)
        m2, n2 = gen_extended_x2(pair, q, span)
        return [m1, _with_sampler(n1, "N1"), m2, _with_sampler(n2, "N2")]

    if scheme == "extended-tdm-2sampler":
        q = half_shift_q(pair) if q is None else q
        m2, n2 = gen_tdm_two_sampler_x2(pair, q, span)
        m1, n1 = gen_extended_x1(pair, q, span)
        return [m1, n1, m2, n2]

    if span is None:
        raise InvalidParam("exsca scheme requires an explicit span")
    cfg = ExscaConfig(pair, ex, s11, s12, 1 if q is None else q)
    out = []
    for i in range(1, num_signals + 1):
        out.extend(gen_exsca(cfg, i, span, num_signals))
    return out


def _with_sampler(p: SamplingPattern, sampler_id: str) -> SamplingPattern:
    return SamplingPattern(p.grid, p.instants, p.signal_id, sampler_id)


def combined(patterns, signal_id: str) -> SamplingPattern:
    """Merged pattern of one signal across all of its samplers."""
    branches = [p for p in patterns if p.signal_id == signal_id]
    if not branches:
        raise InvalidParam(f"no branches for signal {signal_id!r}")
    out = branches[0]
    for p in branches[1:]:
        out = merge_patterns(out, p)
    return out


__all__ = [
    "SCHEMES", "ExscaConfig", "build_scheme", "combined", "extend_periodic",
    "gen_exsca", "gen_extended_x1", "gen_extended_x2", "gen_tdm_two_sampler_x2",
    "gen_uniform", "half_shift_q",
]
