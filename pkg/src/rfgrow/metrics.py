"""Word metrics on the shipped Cayley graphs and distortion of cyclic subgroups.

Exact lengths come from breadth-first search over normal forms.  Beyond BFS
range every length is a certified interval: the upper end is an explicit word
(checked by evaluation), the lower end a counting argument on how far a word
of a given length can move each coordinate ("height bound").

Height bound, e.g. for BS(1, m): an ``a`` letter read at t-height h changes
the first coordinate by m^h.  A word with n_t letters t^{+-1} that ends at
height s cannot climb above H where H + |H - s| <= n_t, so a word of length L
reaches at most ``max_H (L - H - |H - s|) * m^H``.  The other families use the
same scheme with their own per-letter growth.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .groups import (
    BaumslagSolitar,
    Element,
    FreeAbelian,
    GroupSpec,
    Heisenberg,
    SolLattice,
    UT3Lamp,
    Word,
    evaluate_word,
    format_word,
    mvalue,
    reduce_word,
    word_length,
)

DEFAULT_NODE_CAP = 2_000_000


# ---------------------------------------------------------------- BFS

@dataclass
class BallTable:
    radius: int
    entries: dict
    counts: list[int]
    complete: bool
    stopped_by: str  # "radius" or "node_cap"
    parents: dict = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.entries)

    def geodesic(self, g: Element) -> Word:
        """A shortest word for a ball element, read off the BFS tree."""
        out = []
        while True:
            step = self.parents.get(g)
            if step is None:
                break
            g, name, sign = step
            out.append((name, sign))
        return reduce_word(reversed(out))


def ball(spec: GroupSpec, radius: int, node_cap: int = DEFAULT_NODE_CAP) -> BallTable:
    """BFS from the identity over the symmetrised generating set."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    e = spec.identity()
    entries = {e: 0}
    parents: dict = {}
    counts = [1]
    frontier = [e]
    gens = spec.symmetric_generators()
    mul = spec.mul
    for r in range(1, radius + 1):
        nxt = []
        for g in frontier:
            for name, sign, s in gens:
                h = mul(g, s)
                if h not in entries:
                    entries[h] = r
                    parents[h] = (g, name, sign)
                    nxt.append(h)
                    if len(entries) >= node_cap:
                        counts.append(len(entries))
                        return BallTable(r, entries, counts, False, "node_cap", parents)
        counts.append(len(entries))
        frontier = nxt
    return BallTable(radius, entries, counts, True, "radius", parents)


def word_length_exact(spec: GroupSpec, g: Element, radius_cap: int = 10,
                      node_cap: int = DEFAULT_NODE_CAP) -> int | None:
    """Exact word length by BFS, or None beyond ``radius_cap``.

    Practical envelope: the ball must fit in ``node_cap`` nodes; for bs:1:2
    that is radius ~14, for sol and ut3lamp closer to 8.
    """
    length, _, _ = _bfs_find(spec, g, radius_cap, node_cap)
    return length


def _bfs_find(spec, g, radius_cap, node_cap):
    """(length, geodesic, radius fully searched); length None when not found."""
    e = spec.identity()
    if g == e:
        return 0, [], 0
    seen = {e: None}
    frontier = [e]
    gens = spec.symmetric_generators()
    for r in range(1, radius_cap + 1):
        nxt = []
        for x in frontier:
            for name, sign, s in gens:
                h = spec.mul(x, s)
                if h in seen:
                    continue
                seen[h] = (x, name, sign)
                if h == g:
                    word = []
                    while seen[h] is not None:
                        h, n, sg = seen[h]
                        word.append((n, sg))
                    return r, reduce_word(reversed(word)), r
                nxt.append(h)
                if len(seen) >= node_cap:
                    return None, None, r - 1
        frontier = nxt
    return None, None, radius_cap


# ---------------------------------------------------------------- upper words

def horner_digits(v: int, base: int) -> list[int]:
    """Digits c_0..c_k with v = sum c_j base^j minimising sum|c_j| + 2k.

    Lower digits are balanced residues; the top digit is unrestricted, so a
    short tail like 2 * base^2 is kept as a digit instead of one more level.
    """
    memo: dict[int, tuple[int, list[int]]] = {}

    def best(w: int) -> tuple[int, list[int]]:
        if w in memo:
            return memo[w]
        choice = (abs(w), [w])
        r = w % base
        for c in {r, r - base}:
            nxt = (w - c) // base
            if nxt != 0 and abs(nxt) < abs(w):
                cost, digits = best(nxt)
                cand = (cost + abs(c) + 2, [c] + digits)
                if cand[0] < choice[0]:
                    choice = cand
        memo[w] = choice
        return choice

    if v == 0:
        return [0]
    # iterate bottom-up along the (at most two) residue paths to avoid deep recursion
    stack = [v]
    seen = set()
    while stack:
        w = stack.pop()
        if w in seen or w == 0:
            continue
        seen.add(w)
        r = w % base
        for c in {r, r - base}:
            nxt = (w - c) // base
            if nxt != 0 and abs(nxt) < abs(w):
                stack.append(nxt)
    for w in sorted(seen, key=abs):
        best(w)
    return best(v)[1]


def horner_word(v: int, base: int, gen: str, conj: str) -> Word:
    """Word for gen^v using conj gen conj^-1 = gen^base."""
    digits = horner_digits(v, base)
    word: Word = []
    for j, c in enumerate(digits):
        if j:
            word.append((conj, 1))
        word.append((gen, c))
    word.append((conj, -(len(digits) - 1)))
    return reduce_word(word)


def _conjugated(word: Word, conj: str, k: int) -> Word:
    return reduce_word([(conj, k)] + list(word) + [(conj, -k)])


def _bs_word(spec: BaumslagSolitar, g) -> Word:
    (n, e), s = g
    w = horner_word(n, spec.m, "a", "t")
    return reduce_word([("t", -e)] + w + [("t", e + s)])


def _ut3_word(spec: UT3Lamp, g) -> Word:
    from .groups import madd, mmul, mneg

    p = spec.p
    x, y, z, s = g
    c = madd(z, mneg(mmul(x, y, p)), p)
    word: Word = []
    for (n, e), name in ((x, "x"), (y, "y")):
        if n:
            word += _conjugated(horner_word(n, p, name, "d"), "d", -e)
    n, e = c
    if n:
        k = (e + 1) // 2
        word += _conjugated(horner_word(n * p ** (2 * k - e), p * p, "z", "d"), "d", -k)
    word.append(("d", s))
    return reduce_word(word)


def _heis_word(g) -> Word:
    a, b, c = g
    w = c - a * b
    word: Word = [("x", a), ("y", b)]
    sign = 1 if w > 0 else -1
    w = abs(w)
    n = math.isqrt(w)
    if n:
        q, r = divmod(w, n)
        # z^(n q) = [x^(sign n), y^q], then z^r = [x^(sign r), y]
        word += [("x", sign * n), ("y", q), ("x", -sign * n), ("y", -q)]
        if r:
            word += [("x", sign * r), ("y", 1), ("x", -sign * r), ("y", -1)]
    return reduce_word(word)


SOL_DIGIT_LIMIT = 64
_SOL_DIGITS = [(a, b) for a in (-1, 0, 1) for b in (-1, 0, 1) if (a, b) != (0, 0)]


def sol_expansion(spec: SolLattice, v: tuple[int, int], limit: int = SOL_DIGIT_LIMIT):
    """Greedy expansion v = sum A^j d_j with d_j in {-1,0,1}^2.

    Each step subtracts the candidate A^j d that leaves the smallest residual
    (ties go to the largest j).  Returns the list of (j, d) or None when the
    digit budget runs out.
    """
    terms = []
    rho = _sol_stretch(spec)
    while v != (0, 0):
        if len(terms) >= limit:
            return None
        size = math.hypot(*v)
        jmax = int(math.log(size + 1) / math.log(rho)) + 2
        best = None
        for j in range(jmax, -jmax - 1, -1):
            for d in _SOL_DIGITS:
                w = spec.act(j, d)
                r = (v[0] - w[0], v[1] - w[1])
                n2 = r[0] * r[0] + r[1] * r[1]
                if best is None or n2 < best[0]:
                    best = (n2, j, d, r)
        terms.append((best[1], best[2]))
        v = best[3]
    return terms


def _sol_word(spec: SolLattice, g) -> tuple[Word, str]:
    v, s = g
    terms = sol_expansion(spec, v)
    if terms is None:
        return reduce_word([("u", v[0]), ("v", v[1]), ("t", s)]), "coordinate"
    merged: dict[int, list[int]] = {}
    for j, d in terms:
        acc = merged.setdefault(j, [0, 0])
        acc[0] += d[0]
        acc[1] += d[1]
    word: Word = []
    height = 0
    for j in sorted(merged):
        word.append(("t", j - height))
        word += [("u", merged[j][0]), ("v", merged[j][1])]
        height = j
    word.append(("t", s - height))
    return reduce_word(word), "greedy"


def _free_word(spec: FreeAbelian, g) -> Word:
    return reduce_word(list(zip(spec.generator_names, g)))


def upper_word(spec: GroupSpec, g) -> tuple[Word, str]:
    """An explicit word evaluating to g and the scheme that produced it."""
    if isinstance(spec, BaumslagSolitar):
        return _bs_word(spec, g), "horner"
    if isinstance(spec, UT3Lamp):
        return _ut3_word(spec, g), "horner"
    if isinstance(spec, SolLattice):
        return _sol_word(spec, g)
    if isinstance(spec, Heisenberg):
        return _heis_word(g), "commutator"
    if isinstance(spec, FreeAbelian):
        return _free_word(spec, g), "coordinate"
    raise TypeError(f"no word scheme for {spec!r}")


# ---------------------------------------------------------------- lower bounds

def _min_length(reach, target: float, start: int) -> int:
    """Smallest L >= start with reach(L) >= target (reach is nondecreasing)."""
    if reach(start) >= target:
        return start
    lo, hi = start, start + 1
    while reach(hi) < target:
        lo, hi = hi, 2 * hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if reach(mid) >= target:
            hi = mid
        else:
            lo = mid
    return hi


def _heights(L: int, s: int):
    """(H, letters left) for every top height H a length-L word ending at s allows."""
    s = abs(s)
    for H in range(0, L + 1):
        rest = L - H - abs(H - s)
        if rest < 0:
            if H >= s:
                break
            continue
        yield H, rest


def _log_or_neg(x) -> float:
    return math.log(x) if x > 0 else -math.inf


def lower_bound(spec: GroupSpec, g) -> tuple[int, dict]:
    """Certified lower bound on the word length of g, with its record."""
    if g == spec.identity():
        return 0, {"kind": "identity"}
    if isinstance(spec, FreeAbelian):
        return sum(abs(c) for c in g), {"kind": "l1-norm"}
    if isinstance(spec, Heisenberg):
        a, b, c = g
        ab = abs(a) + abs(b)
        lz = _min_length(lambda L: (L // 2) * ((L + 1) // 2), abs(c), 0)
        return max(ab, lz, 1), {"kind": "height", "abelian": ab, "central": lz}
    if isinstance(spec, BaumslagSolitar):
        (n, e), s = g
        m = spec.m
        target = _log_or_neg(abs(n)) - e * math.log(m)

        def reach(L):
            best = -math.inf
            for H, rest in _heights(L, s):
                if rest > 0:
                    best = max(best, math.log(rest) + H * math.log(m))
            return best

        base = abs(s)
        lh = _min_length(reach, target - 1e-9, base) if n else base
        lden = e + abs(e + s) + 1 if e else 0
        return max(lh, lden, 1), {"kind": "height", "base": m, "t_letters": base,
                                  "magnitude": lh, "denominator": lden}
    if isinstance(spec, SolLattice):
        v, s = g
        mu = _sol_stretch(spec) * (1 + 1e-9)
        size = math.hypot(*v)

        def reach(L):
            best = -math.inf
            for H, rest in _heights(L, s):
                if rest > 0:
                    best = max(best, math.log(rest) + H * math.log(mu))
            return best

        base = abs(s)
        lh = _min_length(reach, math.log(size) - 1e-9, base) if size else base
        return max(lh, 1), {"kind": "height", "stretch": mu, "t_letters": base, "magnitude": lh}
    if isinstance(spec, UT3Lamp):
        x, y, z, s = g
        p = spec.p
        lp = math.log(p)
        txy = max(_log_or_neg(abs(mvalue(x, p))), _log_or_neg(abs(mvalue(y, p))))
        tz = _log_or_neg(abs(mvalue(z, p)))

        def reach_xy(L):
            return max((math.log(r) + H * lp for H, r in _heights(L, s) if r > 0), default=-math.inf)

        def reach_z(L):
            return max((math.log(r + (r // 2) * ((r + 1) // 2)) + 2 * H * lp
                        for H, r in _heights(L, s) if r > 0), default=-math.inf)

        base = abs(s)
        lxy = _min_length(reach_xy, txy - 1e-9, base) if txy > -math.inf else base
        lz = _min_length(reach_z, tz - 1e-9, base) if tz > -math.inf else base
        return max(lxy, lz, 1), {"kind": "height", "base": p, "t_letters": base,
                                 "xy": lxy, "z": lz}
    return 1, {"kind": "nontrivial"}


def _sol_stretch(spec: SolLattice) -> float:
    """max(||A||_2, ||A^-1||_2)."""
    out = 0.0
    for M in (spec.matrix_power(1), spec.matrix_power(-1)):
        out = max(out, float(np.linalg.norm(np.array(M, dtype=float), 2)))
    return out


# ---------------------------------------------------------------- intervals

@dataclass
class LengthInterval:
    lower: int
    upper: int | None
    lower_witness: dict
    upper_witness: Word | None

    @property
    def exact(self) -> bool:
        return self.upper is not None and self.lower == self.upper

    def to_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper,
                "lower_witness": self.lower_witness,
                "upper_witness": None if self.upper_witness is None else format_word(self.upper_witness)}


def word_length_bounds(spec: GroupSpec, g, verify: bool = True) -> LengthInterval:
    """Certified [lower, upper] for the word length of g."""
    lo, record = lower_bound(spec, g)
    try:
        word, scheme = upper_word(spec, g)
    except TypeError:
        return LengthInterval(lo, None, record, None)
    if verify and evaluate_word(spec, word) != g:
        raise AssertionError(f"upper witness {format_word(word)} does not evaluate to {g!r}")
    up = word_length(word)
    if lo > up:
        raise AssertionError(f"lower bound {lo} exceeds witness length {up} for {g!r}")
    record = dict(record, upper_scheme=scheme)
    return LengthInterval(lo, up, record, word)


# ---------------------------------------------------------------- distortion

def default_schedule(max_exp: int = 64, small: int = 8) -> list[int]:
    ks = list(range(1, small + 1))
    ks += [2**j for j in range(max_exp + 1) if 2**j > small]
    return ks


@dataclass
class DistortionProfile:
    spec_label: str
    base: Element
    samples: list[tuple[int, LengthInterval]]
    classification: str  # undistorted | polynomial | at-least-exponential | inconclusive
    c1: float | None = None
    c2: float | None = None
    rate: float | None = None  # fitted slope of upper vs log2 k
    power_exponent: float | None = None  # fitted slope of log upper vs log k
    r2_log: float | None = None
    r2_power: float | None = None

    def to_rows(self) -> list[dict]:
        return [{"k": k, "lower": iv.lower, "upper": iv.upper,
                 "witness_len": None if iv.upper_witness is None else word_length(iv.upper_witness)}
                for k, iv in self.samples]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["k", "lower", "upper", "witness_len"], lineterminator="\n")
        w.writeheader()
        for row in self.to_rows():
            w.writerow(row)
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {"group": self.spec_label, "classification": self.classification,
                "c1": self.c1, "c2": self.c2, "rate": self.rate,
                "power_exponent": self.power_exponent, "r2_log": self.r2_log,
                "r2_power": self.r2_power,
                "samples": [dict(r, k=str(r["k"])) for r in self.to_rows()]}


def _linfit(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float, float]:
    """Least squares y = a x + b; returns (a, b, r2)."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    a, b = np.polyfit(x, y, 1)
    resid = y - (a * x + b)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0 else 1.0 - float((resid**2).sum()) / ss_tot
    return float(a), float(b), r2


R2_THRESHOLD = 0.95
UNDISTORTED_EXPONENT = 0.85
POLYNOMIAL_EXPONENT = 0.2
# max/min of upper / log2 k over the top half; digit-sum noise in a base other
# than 2 spoils R^2 while the ratio stays bounded
LOG_RATIO_SPREAD = 1.5


def classify(samples: Sequence[tuple[int, LengthInterval]]) -> dict:
    """Fit the top half of the schedule and name the growth of ||x^k||."""
    top = [(k, iv.upper) for k, iv in samples if iv.upper is not None and k >= 2]
    top = top[len(top) // 2:]
    if len(top) < 3:
        return {"classification": "inconclusive"}
    lk = [math.log2(k) for k, _ in top]
    up = [u for _, u in top]
    beta, _, r2p = _linfit([math.log(k) for k, _ in top], [math.log(u) for u in up])
    rate, _, r2l = _linfit(lk, up)
    per_bit = [u / x for u, x in zip(up, lk)]
    spread = max(per_bit) / min(per_bit) if min(per_bit) > 0 else math.inf
    out = {"power_exponent": beta, "r2_power": r2p, "rate": rate, "r2_log": r2l, "log_spread": spread}
    if beta >= UNDISTORTED_EXPONENT and r2p >= R2_THRESHOLD:
        out["classification"] = "undistorted"
    elif beta >= POLYNOMIAL_EXPONENT and r2p >= R2_THRESHOLD:
        out["classification"] = "polynomial"
    elif beta < POLYNOMIAL_EXPONENT and rate > 0 and (r2l >= R2_THRESHOLD or spread <= LOG_RATIO_SPREAD):
        out["classification"] = "at-least-exponential"
    else:
        out["classification"] = "inconclusive"
    return out


def distortion_profile(spec: GroupSpec, x, k_schedule: Iterable[int] | None = None,
                       bfs_radius: int = 8, node_cap: int = 200_000) -> DistortionProfile:
    """Length intervals for x^k over a schedule, plus a growth classification.

    Small powers get BFS-exact lengths when the ball fits in ``node_cap``.
    """
    ks = sorted(set(default_schedule() if k_schedule is None else k_schedule))
    if not ks or ks[0] < 1:
        raise ValueError("schedule must be positive integers")
    samples = []
    for k in ks:
        g = spec.pow(x, k)
        iv = word_length_bounds(spec, g)
        if iv.upper is not None and iv.lower < iv.upper and iv.lower <= bfs_radius:
            length, word, done = _bfs_find(spec, g, min(bfs_radius, iv.upper - 1), node_cap)
            if length is not None:
                iv = LengthInterval(length, length, {"kind": "bfs"}, word)
            elif done + 1 > iv.lower:
                iv = LengthInterval(done + 1, iv.upper, {"kind": "bfs-radius", "searched": done},
                                    iv.upper_witness)
        samples.append((k, iv))
    fit = classify(samples)
    prof = DistortionProfile(spec.label(), x, samples, fit["classification"],
                             rate=fit.get("rate"), power_exponent=fit.get("power_exponent"),
                             r2_log=fit.get("r2_log"), r2_power=fit.get("r2_power"))
    if prof.classification == "at-least-exponential":
        prof.c1 = min(2.0 ** iv.upper / k for k, iv in samples)
        prof.c2 = max(2.0 ** iv.lower / k for k, iv in samples)
    return prof


@dataclass
class StrictDistortionCheck:
    holds: bool
    f_class: str
    c1: float
    c2: float
    rate: float | None


def check_strict_distortion(profile: DistortionProfile, f_class: str = "exponential",
                            rate: float | None = None, spread_bits: float = 4.0) -> StrictDistortionCheck:
    """Test C1 k <= f(||x^k||) <= C2 k on every sample of a profile.

    For ``exponential`` the comparison function is f(n) = 2^(n / rate), rate
    being the fitted letters-per-doubling (passed in to compare profiles on a
    common scale).  For ``linear`` f(n) = n.  C1 is the smallest f(lower)/k,
    C2 the largest f(upper)/k, and the check holds when C2/C1 stays within
    2^spread_bits, i.e. the ratios do not drift over the whole schedule.
    """
    samples = [(k, iv) for k, iv in profile.samples if iv.upper is not None]
    if f_class == "exponential":
        rate = rate if rate is not None else profile.rate
        if rate is None or rate <= 0:
            return StrictDistortionCheck(False, f_class, 0.0, math.inf, rate)
        log_lo = [iv.lower / rate - math.log2(k) for k, iv in samples]
        log_hi = [iv.upper / rate - math.log2(k) for k, iv in samples]
        c1, c2 = 2.0 ** min(log_lo), 2.0 ** max(log_hi)
        ok = profile.classification == "at-least-exponential" and max(log_hi) - min(log_lo) <= spread_bits
        return StrictDistortionCheck(ok, f_class, c1, c2, rate)
    if f_class == "linear":
        lo = [iv.lower / k for k, iv in samples]
        hi = [iv.upper / k for k, iv in samples]
        c1, c2 = min(lo), max(hi)
        ok = c1 > 0 and math.log2(c2 / c1) <= spread_bits
        return StrictDistortionCheck(ok, f_class, c1, c2, None)
    raise ValueError(f"unknown f class {f_class!r}")
