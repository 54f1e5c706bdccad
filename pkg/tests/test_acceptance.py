"""Exit criteria for the build: one test per criterion, one PASS/FAIL line each.

Run ``pytest tests/test_acceptance.py -v``; the lines are repeated in the
"acceptance criteria" section of the terminal summary.
"""

import math
import random
import statistics
import time

import numpy as np

from coprime_tdm.cli import main
from coprime_tdm.diffsets import (
    bias_window, bias_window_complex, verify_z_relations, weight_brute_force,
    weight_closed_form_z2,
)
from coprime_tdm.errors import NoFeasibleShift, SlotCollision
from coprime_tdm.estimator import SignalModel, acquire, estimate_autocorr
from coprime_tdm.grid import SamplingPattern, TickGrid, make_coprime_pair, merge_patterns
from coprime_tdm.patterns import ExscaConfig, gen_exsca, gen_extended_x1, gen_extended_x2
from coprime_tdm.scheduler import build_schedule, check_exsca_overlap, search_shift

from conftest import ACCEPTANCE_LINES, coprime_pairs, random_config, round_trips

# literal values from the worked (M, N) = (4, 3) example
P1 = [1, 0, 0, 1, 1, 0, 1, 0, 1, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0]
P2 = [1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 1, 0, 1, 0, 1, 1, 0, 0]
Z1 = [10, 2, 2, 7, 3, 2, 6, 1, 2, 5, 1, 1, 4, 1, 1, 3, 0, 1, 2, 0, 0, 1, 0, 0]
Z2 = [10, 2, 2, 7, 2, 2, 6, 1, 1, 5, 1, 1, 4, 1, 1, 3, 1, 1, 2, 0, 1, 1, 0, 0]


def report(num, name, ok, detail=""):
    line = f"[{num}] {'PASS' if ok else 'FAIL'} {name}" + (f" -- {detail}" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def timed(fn, repeat=1):
    """Return (last result, median wall time in seconds)."""
    times, out = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return out, statistics.median(times)


def test_1_golden_patterns():
    pair = make_coprime_pair(4, 3)

    def gen():
        return (merge_patterns(*gen_extended_x1(pair)).indicator().tolist(),
                merge_patterns(*gen_extended_x2(pair)).indicator().tolist())

    (p1, p2), dt = timed(gen, repeat=21)
    ok = p1 == P1 and p2 == P2 and dt < 1e-3
    report(1, "golden patterns p1, p2", ok, f"{dt * 1e6:.0f} us")


def test_2_golden_weights():
    pair = make_coprime_pair(4, 3)
    p1 = merge_patterns(*gen_extended_x1(pair))
    p2 = merge_patterns(*gen_extended_x2(pair))

    def weights():
        return weight_brute_force(p1, 23), weight_brute_force(p2, 23)

    (z1, z2), dt = timed(weights, repeat=21)
    ok = (z1.weights.tolist() == Z1 and z2.weights.tolist() == Z2
          and z1.total() == z2.total() == 100 and dt < 1e-3)
    report(2, "golden weights z1, z2; sum = 100", ok,
           f"sums {z1.total()}/{z2.total()}, {dt * 1e6:.0f} us")


def test_3_closed_form_equivalence():
    def sweep():
        bad, lags = [], 0
        for m, n in coprime_pairs(2, 12):
            pair = make_coprime_pair(m, n)
            L = 2 * m * n - 1
            z2 = weight_brute_force(merge_patterns(*gen_extended_x2(pair)), L)
            for l in range(-L, L + 1):
                lags += 1
                if weight_closed_form_z2(pair, l) != z2(l):
                    bad.append((m, n, l))
        return bad, lags

    (bad, lags), dt = timed(sweep)
    ok = not bad and dt < 5.0
    report(3, "closed-form z2 == brute force, 2 <= M, N <= 12", ok,
           f"{lags} lags, {len(bad)} deviations, {dt:.2f} s")


def test_4_lag_relations():
    def run():
        rep = verify_z_relations(make_coprime_pair(4, 3))
        rng = random.Random(20)
        pool = [(m, n) for m in range(2, 21) for n in range(2, 21)
                if m != n and math.gcd(m, n) == 1]
        sample = rng.sample(pool, 20)
        others = [verify_z_relations(make_coprime_pair(m, n)) for m, n in sample]
        return rep, others

    (rep, others), dt = timed(run)
    ok = (rep.passed
          and set(map(abs, rep.differing_lags)) == {4, 8, 16, 20}
          and len(rep.differing_lags) == 8
          and rep.extra_lags == (-20, -16, 16, 20)
          and all(r.passed for r in others)
          and dt < 5.0)
    report(4, "z1/z2 lag relations, (4,3) + 20 random pairs", ok,
           f"{sum(r.passed for r in others)}/20 random pairs, {dt:.2f} s")


def test_5_exsca_overlap():
    pair = make_coprime_pair(4, 3)

    def run():
        cfg = ExscaConfig(pair, ex=2, s11=0, s12=1)
        rep = check_exsca_overlap(cfg, 48)
        a, b = gen_exsca(cfg, 2, 48)
        brute = sorted(set(range(4, 48, 8)) & set(range(4, 48, 6)))
        try:
            excluded = search_shift(pair, 2, 48).s12 != 1
            how = "returned another shift"
        except NoFeasibleShift as exc:
            excluded = not {c.s12: c for c in exc.candidates}[1].overlap_free
            how = "no overlap-free shift exists; s12=1 flagged"
        return cfg, rep, a, b, brute, excluded, how

    (cfg, rep, a, b, brute, excluded, how), dt = timed(run)
    ok = ((cfg.s21, cfg.s22) == (4, 4)
          and rep.overlaps["x2"] and list(rep.overlaps["x2"]) == brute and 4 in brute
          and sorted(set(a.instants) & set(b.instants)) == brute
          and excluded and dt < 1.0)
    report(5, "ExSCA overlap example", ok,
           f"s21={cfg.s21} s22={cfg.s22} overlap {list(rep.overlaps['x2'])}; {how}; {dt * 1e3:.0f} ms")


def test_6_estimator_soundness():
    pair = make_coprime_pair(4, 3)
    p2 = merge_patterns(*gen_extended_x2(pair))
    p1 = merge_patterns(*gen_extended_x1(pair))

    def run():
        est = estimate_autocorr(acquire(SignalModel("ar1", 1.0, 0.9, seed=0), p2, 5000), 23)
        covered = est.defined
        err = float(np.max(np.abs(est.values[covered] - 0.9 ** est.lags[covered])))
        r0 = [estimate_autocorr(acquire(SignalModel(seed=s), p1, 5000), 0).values[0]
              for s in range(10)]
        return err, int(covered.sum()), r0

    (err, n_cov, r0), dt = timed(run)
    wn = max(abs(v - 1.0) for v in r0)
    ok = err < 0.05 and wn < 0.03 and dt < 30.0
    report(6, "estimator soundness (AR(1) and white noise)", ok,
           f"AR max err {err:.4f} over {n_cov} lags, white |r0-1| max {wn:.4f}, {dt:.2f} s")


def test_7_bias_window_anchor():
    pair = make_coprime_pair(4, 3)
    worst_rel, worst_imag = 0.0, 0.0
    for gen in (gen_extended_x1, gen_extended_x2):
        w = weight_brute_force(merge_patterns(*gen(pair)), 23)
        b0 = bias_window(w, 128)[0]
        worst_rel = max(worst_rel, abs(b0 - w.total()) / w.total())
        worst_imag = max(worst_imag, float(np.abs(bias_window_complex(w, 128).imag).max()))
    ok = worst_rel <= 1e-9 and worst_imag < 1e-12
    report(7, "bias window B(0) = sum z = 100, real", ok,
           f"rel err {worst_rel:.1e}, max |imag| {worst_imag:.1e}")


def test_8_schedule_round_trip():
    def run():
        rng = random.Random(8)
        built = 0
        while built < 50:
            patterns, hold = random_config(rng)
            try:
                round_trips(patterns, hold)
            except Exception as exc:
                if type(exc).__name__ != "TooFast":
                    raise
                continue
            built += 1
        collisions = 0
        for _ in range(50):
            a = set(rng.sample(range(40), rng.randint(1, 12)))
            b = set(rng.sample(range(40), rng.randint(1, 12)))
            a.add(next(iter(b)))
            pats = [SamplingPattern(TickGrid(1, 40), tuple(sorted(a)), "x1", "S"),
                    SamplingPattern(TickGrid(1, 40), tuple(sorted(b)), "x2", "S")]
            try:
                build_schedule(pats, hold=0)
            except SlotCollision:
                collisions += 1
        return built, collisions

    (built, collisions), dt = timed(run)
    ok = built == 50 and collisions == 50 and dt < 2.0
    report(8, "schedule round trip + slot collisions", ok,
           f"{built} schedules replayed, {collisions}/50 collisions caught, {dt:.2f} s")


def test_9_verify_subcommand(capsys):
    code = main(["verify"])
    out = capsys.readouterr().out
    ok = code == 0 and "FAIL" not in out and out.count("PASS") == 6
    report(9, "verify subcommand exits 0", ok, f"exit {code}")
