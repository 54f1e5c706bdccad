import itertools
import math

import pytest

from coprime_tdm.grid import make_coprime_pair
from coprime_tdm.patterns import build_scheme
from coprime_tdm.scheduler import build_schedule, expected_assignment, replay

# filled by test_acceptance, echoed in the terminal summary
ACCEPTANCE_LINES = []


def brute_pairs(instants, lag):
    """Pure-python pair count, independent of the numpy implementation."""
    return sum(1 for a, b in itertools.product(instants, repeat=2) if b - a == lag)


def coprime_pairs(lo=2, hi=12):
    return [(m, n) for m in range(lo, hi + 1) for n in range(lo, hi + 1)
            if m != n and math.gcd(m, n) == 1]


@pytest.fixture
def pair43():
    return make_coprime_pair(4, 3)


def random_config(rng):
    m, n = rng.choice(coprime_pairs(2, 9))
    pair = make_coprime_pair(m, n)
    scheme = rng.choice(["nyquist-tdm", "extended", "extended-tdm-2sampler", "exsca"])
    kw = {}
    if scheme == "exsca":
        k = rng.choice([2, 3])
        ex = rng.randint(max(k, 2), 4) if k == 3 else rng.choice([2, 4])
        kw = dict(ex=ex, s11=rng.randrange(3), s12=rng.randrange(ex * n),
                  span=rng.randint(2, 6) * ex * m * n, num_signals=k)
    elif scheme == "nyquist-tdm":
        kw = dict(q=rng.choice([2, 4, 6]))
    return build_scheme(pair, scheme, **kw), rng.choice([0, 1, 2])


def round_trips(patterns, hold):
    schedules = build_schedule(patterns, hold=hold)
    want = expected_assignment(patterns)
    assert {s.switch_id for s in schedules} == set(want)
    for s in schedules:
        assert replay(s) == want[s.switch_id]
        ev = s.events
        for a, b in zip(ev, ev[1:]):
            assert a.position != b.position and a.transition >= 1
            assert a.end <= b.t
    return schedules


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
