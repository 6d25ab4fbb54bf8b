import random
from collections import deque

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rfgrow.groups import evaluate_word, parse_spec, word_length
from rfgrow.metrics import (
    ball,
    check_strict_distortion,
    default_schedule,
    distortion_profile,
    horner_digits,
    horner_word,
    sol_expansion,
    word_length_bounds,
    word_length_exact,
)


def oracle_ball(spec, radius):
    """Plain BFS over group multiplication, independent of the metrics module."""
    gens = [spec.pow(spec.generator(g), s) for g in spec.generator_names for s in (1, -1)]
    dist = {spec.identity(): 0}
    queue = deque([spec.identity()])
    while queue:
        g = queue.popleft()
        if dist[g] == radius:
            continue
        for s in gens:
            h = spec.mul(g, s)
            if h not in dist:
                dist[h] = dist[g] + 1
                queue.append(h)
    return dist


@pytest.fixture(scope="module")
def bs_ball():
    return ball(parse_spec("bs:1:2"), 10)


def test_ball_small_examples():
    bs = parse_spec("bs:1:2")
    assert ball(bs, 0).entries == {bs.identity(): 0}
    assert len(ball(bs, 1)) == 5
    z = ball(parse_spec("z:1"), 3)
    assert sorted(z.entries) == [(k,) for k in range(-3, 4)]
    assert z.counts == [1, 3, 5, 7]


@pytest.mark.parametrize("label,radius", [("bs:1:2", 7), ("heis", 5), ("sol:2,1,1,1", 4), ("ut3lamp:2", 4),
                                          ("z:2", 6)])
def test_ball_matches_oracle(label, radius):
    spec = parse_spec(label)
    assert ball(spec, radius).entries == oracle_ball(spec, radius)


def test_ball_node_cap_flags_partial():
    t = ball(parse_spec("bs:1:2"), 12, node_cap=1000)
    assert not t.complete and t.stopped_by == "node_cap"


def test_ball_counts_and_growth_bound(bs_ball):
    c = bs_ball.counts
    assert all(a <= b for a, b in zip(c, c[1:]))
    assert all(c[r] <= 5 * c[r - 1] for r in range(1, len(c)))
    assert c[-1] == len(bs_ball) == 4317


def test_ball_symmetry(bs_ball):
    bs = parse_spec("bs:1:2")
    bad = [g for g, r in bs_ball.entries.items() if bs_ball.entries.get(bs.inv(g)) != r]
    assert bad == []


def test_ball_subadditivity(bs_ball):
    bs = parse_spec("bs:1:2")
    rng = random.Random(7)
    half = [g for g, r in bs_ball.entries.items() if r <= 5]
    violations = 0
    for _ in range(1000):
        g, h = rng.choice(half), rng.choice(half)
        gh = bs.mul(g, h)
        if bs_ball.entries[gh] > bs_ball.entries[g] + bs_ball.entries[h]:
            violations += 1
    assert violations == 0


def test_geodesics_have_exact_length(bs_ball):
    bs = parse_spec("bs:1:2")
    for g, r in list(bs_ball.entries.items())[::37]:
        w = bs_ball.geodesic(g)
        assert evaluate_word(bs, w) == g and word_length(w) == r


def test_bounds_consistent_on_ball(bs_ball):
    bs = parse_spec("bs:1:2")
    bad = []
    for g, r in bs_ball.entries.items():
        iv = word_length_bounds(bs, g)
        if not (iv.lower <= r <= iv.upper):
            bad.append((g, r, iv.lower, iv.upper))
    assert bad == []


@pytest.mark.parametrize("label,radius", [("heis", 6), ("sol:2,1,1,1", 5), ("ut3lamp:2", 5), ("z:3", 4)])
def test_bounds_consistent_other_families(label, radius):
    spec = parse_spec(label)
    for g, r in ball(spec, radius).entries.items():
        iv = word_length_bounds(spec, g)
        assert iv.lower <= r <= iv.upper, (g, r, iv)


def test_word_length_exact_examples():
    bs = parse_spec("bs:1:2")
    # (2, 0) is a^2: the word "a a" reaches it, so the length is 2, not 3
    assert evaluate_word(bs, "a a") == bs.element(2, 0)
    assert word_length_exact(bs, bs.element(2, 0)) == 2 == oracle_ball(bs, 3)[bs.element(2, 0)]
    assert word_length_exact(bs, bs.element(3, 0)) == 3
    assert word_length_exact(bs, bs.element(1, 0)) == 1
    assert word_length_exact(parse_spec("heis"), (0, 0, 1)) == 4
    assert word_length_exact(bs, bs.pow(bs.generator("a"), 2**20), radius_cap=4) is None


def test_bounds_examples():
    bs = parse_spec("bs:1:2")
    iv = word_length_bounds(bs, bs.pow(bs.generator("a"), 8))
    assert iv.upper <= 6 and iv.lower >= 2
    assert evaluate_word(bs, iv.upper_witness) == bs.pow(bs.generator("a"), 8)
    for j in range(1, 30):
        assert word_length_bounds(bs, bs.pow(bs.generator("a"), 2**j)).upper <= 2 * j + 1
    G = parse_spec("ut3lamp:2")
    for j in range(1, 20):
        assert word_length_bounds(G, G.pow(G.generator("z"), 4**j)).upper <= 2 * j + 1


@pytest.mark.parametrize("j", range(0, 5))
def test_powers_of_two_exact(j):
    bs = parse_spec("bs:1:2")
    exact = word_length_exact(bs, bs.pow(bs.generator("a"), 2**j), radius_cap=12)
    assert exact is not None and exact <= 2 * j + 1


@given(st.integers(0, 10**30), st.integers(2, 9))
def test_horner_digits_reconstruct(v, base):
    digits = horner_digits(v, base)
    assert sum(c * base**i for i, c in enumerate(digits)) == v


@given(st.integers(-10**20, 10**20))
def test_horner_word_evaluates(v):
    bs = parse_spec("bs:1:3")
    w = horner_word(v, 3, "a", "t")
    assert evaluate_word(bs, w) == bs.pow(bs.generator("a"), v)


@given(st.integers(-10**12, 10**12), st.integers(-10**12, 10**12))
def test_sol_upper_word_evaluates(v1, v2):
    sol = parse_spec("sol:2,1,1,1")
    g = ((v1, v2), 0)
    iv = word_length_bounds(sol, g)
    assert evaluate_word(sol, iv.upper_witness) == g
    assert word_length(iv.upper_witness) == iv.upper >= iv.lower


def test_sol_expansion_stays_short():
    sol = parse_spec("sol:2,1,1,1")
    for j in (16, 32, 64):
        terms = sol_expansion(sol, (2**j, 0))
        assert terms is not None and len(terms) < 64


@given(st.integers(1, 2**40))
def test_lower_bound_below_upper(k):
    for label, gen in (("bs:1:2", "a"), ("ut3lamp:2", "z"), ("sol:2,1,1,1", "u")):
        spec = parse_spec(label)
        iv = word_length_bounds(spec, spec.pow(spec.generator(gen), k))
        assert 1 <= iv.lower <= iv.upper


def test_profile_classifications():
    bs = parse_spec("bs:1:2")
    p = distortion_profile(bs, bs.generator("a"))
    assert p.classification == "at-least-exponential"
    ks = [k for k, _ in p.samples]
    assert ks == sorted(set(ks)) and ks == default_schedule()
    for k, iv in p.samples:
        assert p.c1 * k <= 2.0**iv.upper and 2.0**iv.lower <= p.c2 * k
    z = parse_spec("z:1")
    assert distortion_profile(z, z.generator("e1")).classification == "undistorted"
    h = parse_spec("heis")
    hp = distortion_profile(h, (0, 0, 1))
    assert hp.classification == "polynomial"
    assert 0.4 <= hp.power_exponent <= 0.6


def test_profile_csv_header():
    bs = parse_spec("bs:1:2")
    text = distortion_profile(bs, bs.generator("a"), [1, 2, 4]).to_csv()
    assert text.splitlines()[0] == "k,lower,upper,witness_len"
    assert len(text.splitlines()) == 4


def test_strict_distortion_bs():
    bs = parse_spec("bs:1:2")
    chk = check_strict_distortion(distortion_profile(bs, bs.generator("a")))
    assert chk.holds and 0 < chk.c1 <= chk.c2


def test_strict_distortion_rejects_undistorted():
    z = parse_spec("z:1")
    assert not check_strict_distortion(distortion_profile(z, z.generator("e1"))).holds


def test_powers_scale_constants_by_k():
    """Profiling x^2 on a schedule equals profiling x on the doubled schedule, so
    on a common rate both constants double."""
    bs = parse_spec("bs:1:2")
    a = bs.generator("a")
    ks = [2**j for j in range(3, 60)]
    base = distortion_profile(bs, a, [2 * k for k in ks])
    sq = distortion_profile(bs, bs.pow(a, 2), ks)
    cb = check_strict_distortion(base, rate=2.0)
    cs = check_strict_distortion(sq, rate=2.0)
    assert cb.holds and cs.holds
    assert cs.c1 == pytest.approx(2 * cb.c1) and cs.c2 == pytest.approx(2 * cb.c2)


@pytest.mark.parametrize("j", [2, 3, 4])
def test_powers_stay_exponentially_distorted(j):
    bs = parse_spec("bs:1:2")
    x = bs.pow(bs.generator("a"), j)
    assert distortion_profile(bs, x).classification == "at-least-exponential"


def test_sol_and_lamplighter_profiles():
    sol = parse_spec("sol:2,1,1,1")
    assert distortion_profile(sol, sol.generator("u")).classification == "at-least-exponential"
    for label in ("ut3lamp:2", "ut3lamp:3"):
        G = parse_spec(label)
        assert distortion_profile(G, G.generator("z")).classification == "at-least-exponential"
