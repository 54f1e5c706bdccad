"""Switch schedules for time-multiplexed samplers and ExSCA hazard checks.

A schedule describes one input switch in front of one physical sampler.
Samples of the same signal that follow each other on the sampler form a
block; the switch holds that signal's position across the block and
transitions during the free gap before the next block. For a block with
first/last samples ``f``/``e`` and aperture ``h`` ticks, the event starts at
``f`` and the hold window is the closed interval ``[f, e + h]``. The
transition to the next block fills the open gap ``(e + h, f_next)``, so the
switching midpoint sits in the middle of the free inter-sample gap.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .diffsets import weight_brute_force
from .errors import GridMismatch, InvalidParam, NoFeasibleShift, SlotCollision, TooFast
from .grid import CoprimePair, SamplingPattern, merge_patterns
from .patterns import ExscaConfig, gen_exsca


@dataclass(frozen=True)
class SwitchEvent:
    """Switch holds ``position`` from ``t`` for ``hold`` ticks, then spends
    ``transition`` ticks moving to the next event's position."""

    t: int
    position: str
    hold: int
    transition: int

    @property
    def hold_end(self) -> int:
        return self.t + self.hold

    @property
    def end(self) -> int:
        return self.t + self.hold + self.transition

    @property
    def midpoint(self) -> Fraction:
        """Nominal switching instant, centred in the transition window."""
        return self.hold_end + Fraction(self.transition, 2)

    def to_dict(self) -> dict:
        return {"t": self.t, "position": self.position, "hold": self.hold,
                "transition": self.transition}


@dataclass(frozen=True)
class SwitchSchedule:
    switch_id: str
    q: int
    events: tuple[SwitchEvent, ...]
    samples: tuple[int, ...] = field(default=(), repr=False)

    def __post_init__(self):
        ev = self.events
        for a, b in zip(ev, ev[1:]):
            if b.t <= a.t:
                raise InvalidParam("switch events must be strictly increasing in time")
            if a.end > b.t:
                raise InvalidParam(f"event at {a.t} overlaps the next event at {b.t}")

    def to_dict(self) -> dict:
        return {"switch_id": self.switch_id, "events": [e.to_dict() for e in self.events]}

    def position_at(self, tick: int) -> str | None:
        """Position held at ``tick``, ``'~'`` while switching, ``None`` if idle."""
        for e in self.events:
            if e.t <= tick <= e.hold_end:
                return e.position
            if e.hold_end < tick < e.end:
                return "~"
        return None


def _group_by_sampler(patterns: Iterable[SamplingPattern]) -> dict[str, list[SamplingPattern]]:
    groups: dict[str, list[SamplingPattern]] = defaultdict(list)
    for p in patterns:
        groups[p.sampler_id].append(p)
    return dict(groups)


def build_schedule(patterns: Sequence[SamplingPattern], hold: int = 1) -> list[SwitchSchedule]:
    """One switch schedule per sampler id found in ``patterns``.

    Parameters
    ----------
    patterns : sequence of SamplingPattern
        Branch patterns tagged with the sampler that acquires them.
    hold : int
        Aperture in ticks kept after each sample instant.

    Raises
    ------
    SlotCollision
        Two patterns on one sampler demand the same tick.
    TooFast
        Neighbouring samples of different signals leave no positive
        transition time once the aperture is allocated.
    """
    if hold < 0:
        raise InvalidParam("hold must be nonnegative")
    out = []
    for sampler_id, group in sorted(_group_by_sampler(patterns).items()):
        qs = {p.grid.q for p in group}
        if len(qs) > 1:
            raise GridMismatch(f"sampler {sampler_id!r} mixes grids q={sorted(qs)}")
        owner: dict[int, str] = {}
        for p in group:
            for t in p.instants:
                if t in owner:
                    raise SlotCollision(
                        f"sampler {sampler_id!r}: tick {t} claimed by {owner[t]!r} and {p.signal_id!r}")
                owner[t] = p.signal_id
        ticks = sorted(owner)

        blocks: list[list[int]] = []
        for t in ticks:
            if blocks and owner[blocks[-1][-1]] == owner[t]:
                blocks[-1].append(t)
            else:
                blocks.append([t])

        events = []
        for j, blk in enumerate(blocks):
            first, last = blk[0], blk[-1]
            transition = 0
            if j + 1 < len(blocks):
                nxt = blocks[j + 1][0]
                transition = nxt - last - hold
                if transition < 1:
                    raise TooFast(
                        f"sampler {sampler_id!r}: gap {nxt - last} tick(s) after {last} "
                        f"cannot fit a {hold}-tick hold and a transition")
            events.append(SwitchEvent(first, owner[first], last + hold - first, transition))
        out.append(SwitchSchedule(sampler_id, qs.pop(), tuple(events), tuple(ticks)))
    return out


def replay(schedule: SwitchSchedule) -> dict[str, tuple[int, ...]]:
    """Walk the events and record which signal each sampler firing lands on."""
    got: dict[str, list[int]] = defaultdict(list)
    events = schedule.events
    j = 0
    for s in schedule.samples:
        while j < len(events) and events[j].hold_end < s:
            j += 1
        if j == len(events) or not events[j].t <= s:
            raise InvalidParam(f"sample at tick {s} is not covered by a hold window")
        got[events[j].position].append(s)
    return {k: tuple(v) for k, v in got.items()}


def expected_assignment(patterns: Iterable[SamplingPattern]) -> dict[str, dict[str, tuple[int, ...]]]:
    """``{sampler_id: {signal_id: instants}}`` straight from the patterns."""
    out: dict[str, dict[str, set]] = defaultdict(lambda: defaultdict(set))
    for p in patterns:
        out[p.sampler_id][p.signal_id].update(p.instants)
    return {s: {k: tuple(sorted(v)) for k, v in d.items() if v} for s, d in out.items()}


def waveform_dump(schedules: Sequence[SwitchSchedule], span: int) -> str:
    """One line per tick listing every switch position.

    ``~`` marks a transition, ``.`` an idle switch and ``*`` a sampler firing.
    """
    lines = []
    width = len(str(max(span - 1, 0)))
    fires = [set(s.samples) for s in schedules]
    for t in range(span):
        cols = []
        for sch, f in zip(schedules, fires):
            pos = sch.position_at(t) or "."
            cols.append(f"{sch.switch_id}={pos}{'*' if t in f else ''}")
        lines.append(f"{t:>{width}} " + " ".join(cols))
    return "\n".join(lines) + "\n"


def progression_intersection(a0: int, da: int, b0: int, db: int, span: int) -> tuple[int, ...]:
    """Common elements of ``a0 + da*i`` and ``b0 + db*j`` (``i, j >= 0``) below ``span``."""
    if da < 1 or db < 1:
        raise InvalidParam("progression steps must be positive")
    g = math.gcd(da, db)
    if (b0 - a0) % g:
        return ()
    lcm = da // g * db
    # a0 + da*k ≡ b0 (mod db)
    k = ((b0 - a0) // g * pow(da // g, -1, db // g)) % (db // g)
    x = a0 + da * k
    lo = max(a0, b0)
    if x < lo:
        x += -(-(lo - x) // lcm) * lcm
    return tuple(range(x, span, lcm)) if x < span else ()


@dataclass
class OverlapReport:
    """Instants sampled by both samplers, per signal."""

    span: int
    overlaps: dict[str, tuple[int, ...]]

    @property
    def hazard(self) -> bool:
        return any(self.overlaps.values())


def check_exsca_overlap(cfg: ExscaConfig, span: int, num_signals: int = 2) -> OverlapReport:
    """Coincident samples of each ExSCA signal across its two samplers.

    A coincidence is an aliasing hazard for that signal.
    """
    overlaps = {}
    for i in range(1, num_signals + 1):
        a, b = cfg.shifts(i, num_signals)
        overlaps[f"x{i}"] = progression_intersection(a, cfg.spacing1, b, cfg.spacing2, span)
    return OverlapReport(span, overlaps)


@dataclass(frozen=True)
class ShiftCandidate:
    s12: int
    overlap_free: bool
    coarray_size: int

    @property
    def score(self) -> tuple[int, int]:
        return (int(self.overlap_free), self.coarray_size)


@dataclass
class ShiftSearchResult:
    s12: int
    best: ShiftCandidate
    candidates: tuple[ShiftCandidate, ...]


def _score_shift(pair, ex, s11, s12, span, q) -> ShiftCandidate:
    cfg = ExscaConfig(pair, ex, s11, s12, q)
    report = check_exsca_overlap(cfg, span)
    a, b = gen_exsca(cfg, 2, span)
    merged = merge_patterns(a, b)
    if len(merged) == 0:
        size = 0
    else:
        size = len(weight_brute_force(merged, span - 1).support())
    return ShiftCandidate(s12, not report.hazard, size)


def search_shift(pair: CoprimePair, ex: int, span: int, q: int = 1, s11: int = 0,
                 strict: bool = True) -> ShiftSearchResult:
    """Exhaustive scan of the second sampler's offset ``s12 in [0, ex*N*q)``.

    Candidates are ranked by (no coincident samples for any signal, number of
    distinct lags covered by the second signal), ties going to the smaller
    shift. With ``strict`` the search refuses to return an overlapping shift
    and raises ``NoFeasibleShift`` (carrying all scored candidates) instead.
    """
    if ex < 1:
        raise InvalidParam("sparsity factor must be >= 1")
    if span < 1:
        raise InvalidParam("span must be positive")
    cands = tuple(_score_shift(pair, ex, s11, s12, span, q) for s12 in range(ex * pair.n * q))
    best = max(cands, key=lambda c: (c.score, -c.s12))
    if strict and not best.overlap_free:
        raise NoFeasibleShift(
            f"every s12 in [0, {ex * pair.n * q}) gives coincident samples within span {span}",
            cands)
    return ShiftSearchResult(best.s12, best, cands)


@dataclass
class AssignmentModel:
    """Bipartite signal/sampler connection graph.

    ``edges`` entries are ``(signal_id, sampler_id, spacing)`` where the
    sampler takes one sample of the signal every ``spacing`` Nyquist periods
    of that signal.
    """

    signals: list[tuple[str, Fraction]]
    samplers: list[tuple[str, Fraction]]
    edges: list[tuple[str, str, int]]

    def __post_init__(self):
        sig = {s for s, _ in self.signals}
        smp = {s for s, _ in self.samplers}
        if len(sig) != len(self.signals) or len(smp) != len(self.samplers):
            raise InvalidParam("signal and sampler ids must be unique")
        if sig & smp:
            raise InvalidParam("signal and sampler ids must be disjoint (bipartite graph)")
        self.signals = [(s, Fraction(p)) for s, p in self.signals]
        self.samplers = [(s, Fraction(p)) for s, p in self.samplers]
        edges = []
        for e in self.edges:
            s, k, spacing = e if len(e) == 3 else (*e, 1)
            if s not in sig or k not in smp:
                raise InvalidParam(f"edge {s!r}-{k!r} references an unknown node")
            if spacing < 1:
                raise InvalidParam("edge spacing must be >= 1")
            edges.append((s, k, int(spacing)))
        self.edges = edges


@dataclass
class AssignmentReport:
    feasible: bool
    utilization: dict[str, Fraction]
    edge_ok: dict[tuple[str, str], bool]
    unconnected: tuple[str, ...]
    messages: list[str]


def plan_assignment(model: AssignmentModel) -> AssignmentReport:
    """Rate feasibility of multiplexing signals onto samplers.

    Each edge loads its sampler with ``rate * min_period`` where ``rate`` is
    the edge's sample rate; a sampler is overcommitted when its load exceeds
    one. Every signal needs at least one sampler.
    """
    if not model.signals:
        raise InvalidParam("assignment model has no signals")
    nyq = dict(model.signals)
    min_period = dict(model.samplers)
    util = {k: Fraction(0) for k in min_period}
    edge_ok = {}
    msgs = []
    for s, k, spacing in model.edges:
        period = spacing * nyq[s]
        util[k] += min_period[k] / period
        edge_ok[(s, k)] = min_period[k] <= period
        if not edge_ok[(s, k)]:
            msgs.append(f"{k} cannot sample {s} every {period}: minimum period {min_period[k]}")
    connected = {s for s, _, _ in model.edges}
    unconnected = tuple(s for s, _ in model.signals if s not in connected)
    for s in unconnected:
        msgs.append(f"signal {s} is not connected to any sampler")
    for k, u in util.items():
        if u > 1:
            msgs.append(f"sampler {k} overcommitted: utilization {u}")
    feasible = not unconnected and all(edge_ok.values()) and all(u <= 1 for u in util.values())
    return AssignmentReport(feasible, util, edge_ok, unconnected, msgs)


def exsca_assignment(pair: CoprimePair, ex: int, num_signals: int) -> AssignmentModel:
    """Every signal on both co-prime samplers with ``ex``-scaled spacings."""
    d = pair.d
    signals = [(f"x{i}", d) for i in range(1, num_signals + 1)]
    samplers = [("S1", pair.m * d), ("S2", pair.n * d)]
    edges = []
    for s, _ in signals:
        edges += [(s, "S1", ex * pair.m), (s, "S2", ex * pair.n)]
    return AssignmentModel(signals, samplers, edges)
