"""Acceptance suite: ten criteria, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""
import os
import random
import sys
import time

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from catalog import p_groups, solvable_groups  # noqa: E402
from rfgrow import depth  # noqa: E402
from rfgrow.cli import run  # noqa: E402
from rfgrow.depth import (  # noqa: E402
    RECORDED_RATIO_FLOORS,
    case_audit,
    congruence_depth_upper,
    hom_search,
    rf_growth,
    theorem_verify,
)
from rfgrow.finite import (  # noqa: E402
    dihedral,
    fitting_subgroup,
    fitting_via_cores,
    is_prime_power,
    lemma31_check,
    prop32_reduce,
    symmetric,
    unitriangular,
)
from rfgrow.groups import parse_spec  # noqa: E402
from rfgrow.metrics import ball, distortion_profile, word_length_bounds, word_length_exact  # noqa: E402


def criterion_1():
    """Exact depth of a in BS(1,2) is 6, by exhaustive search and by congruence."""
    depth._enumerate_cached.cache_clear()
    t0 = time.perf_counter()
    bs = parse_spec("bs:1:2")
    r = hom_search(bs.presentation(), "a", 6)
    c = congruence_depth_upper(bs, bs.generator("a"), 10)
    below = hom_search(bs.presentation(), "a", 5)
    dt = time.perf_counter() - t0
    ok = r.order == 6 and c.order == 6 and c.params["N"] == 3 and below.order is None and dt < 60
    return ok, f"hom_search={r.order} congruence={c.order}@N={c.params['N']} B=5:{below.order} {dt:.2f}s"


def criterion_2():
    """Every quotient of order < p_i kills a^alpha_i, for i = 3 (B = 4) and i = 4 (B = 6)."""
    depth._enumerate_cached.cache_clear()
    t0 = time.perf_counter()
    bs = parse_spec("bs:1:2")
    reps = [case_audit(bs, bs.generator("a"), i, 1, B) for i, B in ((3, 4), (4, 6))]
    dt = time.perf_counter() - t0
    ok = all(r.passed and r.complete for r in reps) and dt < 300
    detail = " ".join(f"i={r.index}:{r.homs_checked} homs,{len(r.survivors)} survivors" for r in reps)
    return ok, f"{detail} {dt:.2f}s"


def _horner_constant(rep):
    # n <= A p + B with p >= 3 gives n <= (A + B/3) p
    A, B = rep.envelope
    return A + B / 3


def criterion_3():
    """m = 1: L_i = p_i, n_i <= C p_i, min L_i/n_i above the recorded floor."""
    rep = theorem_verify(parse_spec("bs:1:2"), range(2, 9))
    C = _horner_constant(rep)
    primes = [3, 5, 7, 11, 13, 17, 19]
    floor = RECORDED_RATIO_FLOORS["bs:1:2"]
    ok = (len(rep.points) == 7 and [p.L for p in rep.points] == primes
          and all(p.n_upper <= C * p.p for p in rep.points)
          and rep.min_ratio >= floor > 0 and rep.verified)
    return ok, f"C={C:.2f} max n/p={max(p.n_upper / p.p for p in rep.points):.2f} min ratio={rep.min_ratio:.4f} floor={floor}"


def criterion_4():
    """m = 2: L_i = p_i^3, n_i = O(p_i), min L_i/n_i^3 positive and not decaying."""
    rep = theorem_verify(parse_spec("ut3lamp:2"), range(2, 7))
    C = _horner_constant(rep)
    floor = RECORDED_RATIO_FLOORS["ut3lamp:2"]
    ok = ([p.L for p in rep.points] == [q**3 for q in (3, 5, 7, 11, 13)] and rep.exponent == 3
          and all(p.n_upper <= C * p.p for p in rep.points)
          and rep.min_ratio >= floor > 0 and not rep.decays_to_zero and rep.verified)
    return ok, (f"C={C:.2f} max n/p={max(p.n_upper / p.p for p in rep.points):.2f} "
                f"min ratio={rep.min_ratio:.5f} floor={floor} envelope_ok={rep.envelope_ok}")


def criterion_5():
    """Order bound for p-groups holds on the catalog, with equality for U3(Z/p)."""
    cat = list(p_groups())
    names = {n for n, _ in cat}
    required = {"U3(Z/2)", "U3(Z/3)", "D4", "Q8", "C2^2", "C2^3", "C3^2", "C4", "C9"}
    bad = [n for n, G in cat if not lemma31_check(G).holds]
    eq = [lemma31_check(unitriangular(p)) for p in (2, 3, 5)]
    ok = (len(cat) >= 15 and required <= names and not bad
          and all(r.order == r.bound == r.prime**3 and r.step_length == 2 for r in eq))
    return ok, f"{len(cat)} p-groups, failures={bad}, equality at orders {[r.order for r in eq]}"


def criterion_6():
    """Reduction to a p-group Fitting subgroup succeeds for every nontrivial Fitting element."""
    total = good = 0
    for _, G in solvable_groups():
        for h in fitting_subgroup(G).members:
            if h.is_identity():
                continue
            total += 1
            res = prop32_reduce(G, h)
            if is_prime_power(fitting_subgroup(res.quotient).order) == res.prime and not res.image.is_identity():
                good += 1
    ok = total > 0 and good == total
    return ok, f"{good}/{total} pairs over {len(solvable_groups())} groups"


def criterion_7():
    """Fitting subgroup agrees with the product of p-cores; S3, S4, D6 values."""
    cat = list(solvable_groups())
    bad = [n for n, G in cat if fitting_subgroup(G).members != fitting_via_cores(G).members]
    vals = (fitting_subgroup(symmetric(3)).order, fitting_subgroup(symmetric(4)).order,
            fitting_subgroup(dihedral(6)).order)
    F6 = fitting_subgroup(dihedral(6))
    ok = not bad and vals == (3, 4, 6) and F6.as_group().is_abelian() and any(g.order() == 6 for g in F6.members)
    return ok, f"{len(cat)} groups, disagreements={bad}, |Fitt| S3,S4,D6={vals}"


def criterion_8():
    """BS(1,2) and Sol elements exponentially distorted; heis centre and Z not; refusals exit 1."""
    bs, sol, heis, z = (parse_spec(s) for s in ("bs:1:2", "sol:2,1,1,1", "heis", "z:3"))
    cls = {
        "bs a": distortion_profile(bs, bs.generator("a")).classification,
        "sol e1": distortion_profile(sol, sol.generator("u")).classification,
        "heis z": distortion_profile(heis, (0, 0, 1)).classification,
        "z e1": distortion_profile(z, z.generator("e1")).classification,
    }
    devnull = open(os.devnull, "w")
    old = sys.stdout, sys.stderr
    sys.stdout = sys.stderr = devnull
    try:
        codes = [run(["theorem-verify", "--group", g, "--i", "2..5"]) for g in ("heis", "z:1", "z:3")]
    finally:
        sys.stdout, sys.stderr = old
        devnull.close()
    exp = "at-least-exponential"
    ok = (cls["bs a"] == exp and cls["sol e1"] == exp and cls["heis z"] != exp and cls["z e1"] != exp
          and codes == [1, 1, 1])
    return ok, f"{cls} exit codes={codes}"


def criterion_9():
    """BS(1,2) balls to radius 10: symmetry, subadditivity, bound consistency; ||a^(2^j)|| <= 2j+1."""
    bs = parse_spec("bs:1:2")
    table = ball(bs, 10)
    L = table.entries
    sym = sum(1 for g, r in L.items() if L[bs.inv(g)] != r)
    rng = random.Random(2024)
    half = [g for g, r in L.items() if r <= 5]
    sub = 0
    for _ in range(1000):
        g, h = rng.choice(half), rng.choice(half)
        if L[bs.mul(g, h)] > L[g] + L[h]:
            sub += 1
    cons = 0
    for g, r in L.items():
        iv = word_length_bounds(bs, g)
        if not iv.lower <= r <= iv.upper:
            cons += 1
    a = bs.generator("a")
    powers = [word_length_exact(bs, bs.pow(a, 2**j), radius_cap=12) for j in range(5)]
    ok = sym == sub == cons == 0 and all(n is not None and n <= 2 * j + 1 for j, n in enumerate(powers))
    return ok, f"{len(L)} elements, violations sym={sym} sub={sub} bounds={cons}, ||a^2^j||={powers}"


def criterion_10():
    """F(1) = 6 exactly for BS(1,2) with B = 7; F nondecreasing through n = 3."""
    table = rf_growth(parse_spec("bs:1:2"), 3, max_degree=7)
    e = table.entries
    mono = all(x.lower <= y.lower and x.upper <= y.upper for x, y in zip(e, e[1:]))
    ok = e[0].exact and e[0].lower == 6 and mono
    return ok, "F: " + ", ".join(f"n={x.radius}:[{x.lower},{x.upper}]" for x in e)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def report(n, fn):
    ok, detail = fn()
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    return ok, line


@pytest.mark.parametrize("n", range(1, 11))
def test_criterion(n, capsys):
    ok, line = report(n, CRITERIA[n - 1])
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [report(n, fn) for n, fn in enumerate(CRITERIA, 1)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
