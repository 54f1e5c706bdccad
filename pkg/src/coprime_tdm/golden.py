"""Reference values for the (M, N) = (4, 3) example and the self-check suite."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .diffsets import bias_window, bias_window_complex, extended_weights, verify_z_relations
from .diffsets import weight_brute_force, weight_closed_form_z2
from .errors import NoFeasibleShift
from .grid import make_coprime_pair, merge_patterns
from .patterns import ExscaConfig, gen_exsca, gen_extended_x1, gen_extended_x2
from .scheduler import check_exsca_overlap, search_shift

P1 = (1, 0, 0, 1, 1, 0, 1, 0, 1, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0)
P2 = (1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 1, 0, 1, 0, 1, 1, 0, 0)
Z1 = (10, 2, 2, 7, 3, 2, 6, 1, 2, 5, 1, 1, 4, 1, 1, 3, 0, 1, 2, 0, 0, 1, 0, 0)
Z2 = (10, 2, 2, 7, 2, 2, 6, 1, 1, 5, 1, 1, 4, 1, 1, 3, 1, 1, 2, 0, 1, 1, 0, 0)
TOTAL_PAIRS = 100


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}" + (f" ({self.detail})" if self.detail else "")


def coprime_pairs(lo: int = 2, hi: int = 12):
    for m in range(lo, hi + 1):
        for n in range(lo, hi + 1):
            if m != n and math.gcd(m, n) == 1:
                yield make_coprime_pair(m, n)


def check_patterns() -> Check:
    pair = make_coprime_pair(4, 3)
    p1 = merge_patterns(*gen_extended_x1(pair)).indicator()
    p2 = merge_patterns(*gen_extended_x2(pair)).indicator()
    ok = tuple(p1.tolist()) == P1 and tuple(p2.tolist()) == P2
    return Check("golden patterns p1, p2 (M=4, N=3)", ok)


def check_weights() -> Check:
    z1, z2 = extended_weights(make_coprime_pair(4, 3))
    ok = (tuple(z1.weights.tolist()) == Z1 and tuple(z2.weights.tolist()) == Z2
          and z1.total() == z2.total() == TOTAL_PAIRS)
    return Check("golden weights z1, z2 and sum z = 100", ok, f"sums {z1.total()}, {z2.total()}")


def closed_form_mismatches(lo: int = 2, hi: int = 12) -> list[tuple[int, int, int, int, int]]:
    """``(M, N, l, brute, closed)`` for every lag where the two disagree."""
    bad = []
    for pair in coprime_pairs(lo, hi):
        L = 2 * pair.m * pair.n - 1
        z2 = weight_brute_force(merge_patterns(*gen_extended_x2(pair)), L)
        for l in range(-L, L + 1):
            cf = weight_closed_form_z2(pair, l)
            if cf != z2(l):
                bad.append((pair.m, pair.n, l, z2(l), cf))
    return bad


def check_closed_form() -> Check:
    bad = closed_form_mismatches()
    n_pairs = sum(1 for _ in coprime_pairs())
    return Check("closed-form z2 equals brute force, 2 <= M, N <= 12", not bad,
                 f"{n_pairs} pairs, {len(bad)} mismatching lags")


def check_relations() -> Check:
    rep = verify_z_relations(make_coprime_pair(4, 3))
    ok = (rep.passed and rep.differing_lags == (-20, -16, -8, -4, 4, 8, 16, 20)
          and rep.extra_lags == (-20, -16, 16, 20) and rep.sum_z1 == rep.sum_z2 == TOTAL_PAIRS)
    return Check("z1/z2 lag relations (M=4, N=3)", ok, f"differ at {list(rep.differing_lags)}")


def check_exsca() -> Check:
    pair = make_coprime_pair(4, 3)
    cfg = ExscaConfig(pair, ex=2, s11=0, s12=1)
    overlap = check_exsca_overlap(cfg, 48).overlaps["x2"]
    a, b = gen_exsca(cfg, 2, 48)
    brute = sorted(set(a.instants) & set(b.instants))
    try:
        excluded = search_shift(pair, 2, 48).s12 != 1
    except NoFeasibleShift as exc:
        excluded = not {c.s12: c for c in exc.candidates}[1].overlap_free
    ok = (cfg.s21, cfg.s22) == (4, 4) and list(overlap) == brute and 4 in overlap and excluded
    return Check("ExSCA overlap example (Ex=2, s12=1)", ok,
                 f"s21={cfg.s21}, s22={cfg.s22}, x2 overlap {list(overlap)}")


def check_bias_window() -> Check:
    z1, z2 = extended_weights(make_coprime_pair(4, 3))
    ok = True
    worst_imag = 0.0
    for w in (z1, z2):
        b = bias_window(w, 64)
        bc = bias_window_complex(w, 64)
        worst_imag = max(worst_imag, float(np.abs(bc.imag).max()))
        ok &= abs(b[0] - TOTAL_PAIRS) <= 1e-9 * TOTAL_PAIRS
        ok &= float(np.abs(bc.imag).max()) < 1e-12
    return Check("bias window B(0) = sum z, real", bool(ok), f"max |imag| {worst_imag:.1e}")


def run_all() -> list[Check]:
    return [check_patterns(), check_weights(), check_closed_form(), check_relations(),
            check_exsca(), check_bias_window()]
