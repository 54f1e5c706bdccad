import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from coprime_tdm.errors import (
    GridMismatch, InvalidParam, NoFeasibleShift, SlotCollision, TooFast,
)
from coprime_tdm.grid import SamplingPattern, TickGrid, make_coprime_pair, rescale
from coprime_tdm.patterns import ExscaConfig, build_scheme, gen_exsca, gen_extended_x1
from coprime_tdm.scheduler import (
    AssignmentModel, build_schedule, check_exsca_overlap, exsca_assignment, expected_assignment,
    plan_assignment, progression_intersection, replay, search_shift, waveform_dump,
)

from conftest import coprime_pairs, random_config, round_trips


def pat(instants, signal, sampler, span=24, q=1):
    return SamplingPattern(TickGrid(q, span), tuple(instants), signal, sampler)


def brute_intersection(a0, da, b0, db, span):
    return tuple(sorted(set(range(a0, span, da)) & set(range(b0, span, db))))


class TestBuildSchedule:

    def test_m_sampler_single_switch(self):
        sch, = build_schedule([pat([0, 4, 8], "x1", "M"), pat([12, 16, 20], "x2", "M")])
        assert [e.position for e in sch.events] == ["x1", "x2"]
        first, second = sch.events
        assert first.t == 0 and first.hold_end >= 8
        assert first.transition == 3 and 8 < first.midpoint < 12
        assert second.t == 12 and second.hold_end >= 20

    def test_n_sampler_alternates_every_half_period(self, pair43):
        x1 = rescale(gen_extended_x1(pair43)[1], 2)
        x2 = pat(range(3, 48, 6), "x2", "N", span=48, q=2)
        sch, = build_schedule([x1, x2])
        assert [e.position for e in sch.events] == ["x1", "x2"] * 8
        assert {b.t - a.t for a, b in zip(sch.events, sch.events[1:])} == {3}
        assert all(e.transition == 2 for e in sch.events[:-1])

    def test_collision(self):
        with pytest.raises(SlotCollision):
            build_schedule([pat([0, 8], "x1", "M"), pat([8, 12], "x2", "M")])

    def test_too_fast(self):
        with pytest.raises(TooFast):
            build_schedule([pat([0, 2], "x1", "S"), pat([1, 3], "x2", "S")])
        # zero aperture leaves a one-tick transition
        sch, = build_schedule([pat([0, 2], "x1", "S"), pat([1, 3], "x2", "S")], hold=0)
        assert all(e.transition == 1 for e in sch.events[:-1])

    def test_mixed_grids(self):
        with pytest.raises(GridMismatch):
            build_schedule([pat([0], "x1", "S"), pat([3], "x2", "S", span=48, q=2)])

    def test_transition_scales_with_gap(self, pair43):
        pats = build_scheme(pair43, "extended-tdm-2sampler")
        sch = {s.switch_id: s for s in build_schedule(pats)}
        tm = sch["M"].events[0].transition
        tn = sch["N"].events[0].transition
        # M-sampler gap is M*q ticks, N-sampler gap is N*q/2 ticks
        assert tm == 4 * 2 - 1 and tn == 3 - 1

    def test_waveform(self, pair43):
        pats = build_scheme(pair43, "extended-tdm-2sampler")
        text = waveform_dump(build_schedule(pats), 48)
        lines = text.splitlines()
        assert len(lines) == 48
        assert lines[0] == " 0 M=x1* N=x1*"
        assert lines[3].endswith("N=x2*")
        assert "N=~" in lines[2]

    def test_events_must_increase(self):
        from coprime_tdm.scheduler import SwitchEvent, SwitchSchedule
        with pytest.raises(InvalidParam):
            SwitchSchedule("S", 1, (SwitchEvent(5, "x1", 3, 1), SwitchEvent(6, "x2", 1, 0)))
        with pytest.raises(InvalidParam):
            SwitchSchedule("S", 1, (SwitchEvent(5, "x1", 1, 0), SwitchEvent(5, "x2", 1, 0)))


def test_round_trip_random_configs():
    rng = random.Random(1234)
    built = 0
    while built < 50:
        patterns, hold = random_config(rng)
        try:
            round_trips(patterns, hold)
            built += 1
        except TooFast:
            # only legitimate when some neighbouring samples are within the aperture
            ticks = sorted((t, p.signal_id, p.sampler_id) for p in patterns for t in p.instants)
            gaps = [b[0] - a[0] for a in ticks for b in ticks
                    if a[2] == b[2] and a[1] != b[1] and 0 < b[0] - a[0] <= hold]
            assert gaps


@given(st.data())
def test_collision_whenever_ticks_shared(data):
    a = data.draw(st.sets(st.integers(0, 39), min_size=1))
    b = data.draw(st.sets(st.integers(0, 39), min_size=1))
    pats = [pat(sorted(a), "x1", "S", 40), pat(sorted(b), "x2", "S", 40)]
    if a & b:
        with pytest.raises(SlotCollision):
            build_schedule(pats, hold=0)
    else:
        sch, = build_schedule(pats, hold=0)
        assert replay(sch) == {"x1": tuple(sorted(a)), "x2": tuple(sorted(b))}


class TestProgressions:

    @given(st.integers(0, 30), st.integers(1, 15), st.integers(0, 30), st.integers(1, 15),
           st.integers(0, 200))
    def test_matches_brute_force(self, a0, da, b0, db, span):
        assert progression_intersection(a0, da, b0, db, span) == brute_intersection(a0, da, b0, db, span)


class TestExscaOverlap:

    def test_reference_example(self, pair43):
        cfg = ExscaConfig(pair43, ex=2, s11=0, s12=1)
        rep = check_exsca_overlap(cfg, 48)
        assert rep.overlaps["x2"] == (4, 28)
        assert rep.overlaps["x1"] == ()
        assert rep.hazard

    def test_s12_three(self, pair43):
        cfg = ExscaConfig(pair43, ex=2, s11=0, s12=3)
        rep = check_exsca_overlap(cfg, 48)
        for i in (1, 2):
            a, b = gen_exsca(cfg, i, 48)
            assert rep.overlaps[f"x{i}"] == tuple(sorted(set(a.instants) & set(b.instants)))
        assert rep.overlaps["x2"] == (12, 36)

    def test_disjoint_residues(self):
        cfg = ExscaConfig(make_coprime_pair(5, 3), ex=2, s11=0, s12=1)
        assert not check_exsca_overlap(cfg, 600).hazard


class TestSearchShift:

    def test_reference_example_excludes_s12_1(self, pair43):
        with pytest.raises(NoFeasibleShift) as info:
            search_shift(pair43, 2, 48)
        cands = {c.s12: c for c in info.value.candidates}
        assert sorted(cands) == list(range(6))
        assert not cands[1].overlap_free

    def test_nonstrict_returns_best(self, pair43):
        res = search_shift(pair43, 2, 48, strict=False)
        assert res.best.coarray_size == max(c.coarray_size for c in res.candidates)

    def test_ex1_enumeration(self, pair43):
        span = 24
        res = search_shift(pair43, 1, span, q=2, strict=False)
        for c in res.candidates:
            cfg = ExscaConfig(pair43, 1, 0, c.s12, 2)
            brute_free = all(
                not set(gen_exsca(cfg, i, span)[0].instants) & set(gen_exsca(cfg, i, span)[1].instants)
                for i in (1, 2))
            assert c.overlap_free == brute_free
        assert search_shift(pair43, 1, span, q=2, strict=False).s12 == res.s12

    def test_feasible_pair_returns_overlap_free(self):
        pair = make_coprime_pair(5, 3)
        res = search_shift(pair, 2, 120)
        assert not check_exsca_overlap(ExscaConfig(pair, 2, 0, res.s12), 120).hazard
        best = [c for c in res.candidates if c.overlap_free]
        assert res.best.coarray_size == max(c.coarray_size for c in best)

    def test_degenerate_span(self, pair43):
        res = search_shift(pair43, 2, 3, strict=False)
        assert res.best.coarray_size <= 5


class TestAssignment:

    def test_twice_nyquist_single_sampler(self):
        model = AssignmentModel([("x1", 1), ("x2", 1)], [("S", Fraction(1, 2))],
                                [("x1", "S", 1), ("x2", "S", 1)])
        rep = plan_assignment(model)
        assert rep.feasible and rep.utilization["S"] == 1

    def test_three_signals_ex3(self, pair43):
        rep = plan_assignment(exsca_assignment(pair43, 3, 3))
        assert rep.feasible
        assert rep.utilization == {"S1": 1, "S2": 1}
        pats = build_scheme(pair43, "exsca", ex=3, s12=1, span=72, num_signals=3)
        assert len(build_schedule(pats)) == 2

    def test_unconnected(self):
        rep = plan_assignment(AssignmentModel([("x1", 1)], [], []))
        assert not rep.feasible and rep.unconnected == ("x1",)

    def test_overcommitted(self):
        model = AssignmentModel([("x1", 1), ("x2", 1)], [("S", 1)], [("x1", "S"), ("x2", "S")])
        rep = plan_assignment(model)
        assert not rep.feasible and rep.utilization["S"] == 2

    def test_bad_edges(self):
        with pytest.raises(InvalidParam):
            AssignmentModel([("x1", 1)], [("S", 1)], [("x1", "T", 1)])
        with pytest.raises(InvalidParam):
            plan_assignment(AssignmentModel([], [("S", 1)], []))
