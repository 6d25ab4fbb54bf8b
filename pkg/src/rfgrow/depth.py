"""Depth function D_G(x) and residual finiteness growth F_{G,S}(n).

Three sources of information are combined into certified intervals:

* exhaustive homomorphism search into S_d, d <= B.  Any quotient of order
  n <= B acts faithfully on itself, so the search sees every quotient of
  order <= B; its minimum (when <= B) is exact, and "nothing found" proves
  D(x) > B.
* congruence quotients of each family (reduce mod N), giving upper bounds.
* the arithmetic witness-exponent argument, giving lower bounds
  D(x^alpha_i) >= p_i (depth 1) or p_i^(m+1) (depth m > 1).
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .finite import OrderCapExceeded, Perm, _close, closure
from .groups import (
    BaumslagSolitar,
    FreeAbelian,
    GroupSpec,
    Heisenberg,
    Presentation,
    SolLattice,
    Syllable,
    UT3Lamp,
    Word,
    format_word,
    invert_word,
    letters,
    mmod,
)
from .metrics import ball, distortion_profile, upper_word, word_length_bounds
from .numtheory import multiplicative_order, nth_prime, prime_power_exponent, primes_up_to, witness_exponent

DEFAULT_MAX_DEGREE = 7
DEFAULT_N_MAX = 512
CERT_DEGREE_LIMIT = 4096


class HypothesisRefusal(Exception):
    """The group/element does not meet the hypotheses of the lower-bound theorem."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


# ---------------------------------------------------------------- certificates

def _cycles(p: Perm) -> str:
    return repr(p)


@dataclass
class WitnessCertificate:
    kind: str  # "hom" or "congruence"
    order: int
    images: dict[str, Perm] | None
    target_image: Perm | None
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "order": self.order,
            "params": self.params,
            "images": None if self.images is None else {g: _cycles(p) for g, p in self.images.items()},
            "target_image": None if self.target_image is None else _cycles(self.target_image),
        }


# ---------------------------------------------------------------- hom enumeration

def _class_reps(d: int) -> list[Perm]:
    """One permutation per cycle type of S_d, cycles on consecutive points."""
    reps = []
    for part in _partitions(d):
        cycles, start = [], 0
        for length in part:
            cycles.append(tuple(range(start, start + length)))
            start += length
        reps.append(Perm.from_cycles(cycles, d))
    return reps


def _partitions(n: int, largest: int | None = None):
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def conjugators(x: Perm, y: Perm) -> list[Perm]:
    """Every g with g x g^-1 = y, i.e. g(x(i)) = y(g(i))."""
    if x.cycle_type() != y.cycle_type():
        return []
    xc = sorted(x.cycles(), key=len, reverse=True)
    by_len: dict[int, list[tuple[int, ...]]] = {}
    for c in y.cycles():
        by_len.setdefault(len(c), []).append(c)
    d = len(x)
    out: list[Perm] = []
    images = [0] * d
    used: set[tuple[int, ...]] = set()

    def place(i: int):
        if i == len(xc):
            out.append(Perm(images))
            return
        cx = xc[i]
        n = len(cx)
        for cy in by_len[n]:
            if cy in used:
                continue
            used.add(cy)
            for r in range(n):
                for k in range(n):
                    images[cx[k]] = cy[(k + r) % n]
                place(i + 1)
                if n == 1:
                    break
            used.discard(cy)

    place(0)
    return out


def _eval(word: Sequence[Syllable], images: dict[str, Perm], identity: Perm) -> Perm:
    result = identity
    for g, k in word:
        result = result * (images[g] ** k)
    return result


def _rotations(rel: Sequence[Syllable]):
    lets = letters(rel)
    for w in (lets, letters(invert_word(rel))):
        for i in range(len(w)):
            yield w[i:] + w[:i]


def _conjugation_rule(gen: str, prior: set[str], relators) -> tuple[Word, Word] | None:
    """Find a relator reading gen X gen^-1 Y with X, Y over ``prior`` generators."""
    for rel in relators:
        names = {g for g, _ in rel}
        if gen not in names or not names <= prior | {gen}:
            continue
        for w in _rotations(rel):
            if w[0] != (gen, 1) or sum(1 for g, _ in w if g == gen) != 2:
                continue
            j = w.index((gen, -1)) if (gen, -1) in w else -1
            if j < 2:
                continue
            return w[1:j], w[j + 1:]
    return None


@dataclass(frozen=True)
class HomImage:
    degree: int
    images: tuple[Perm, ...]
    order: int


def _search_rep(presentation: Presentation, d: int, rep: Perm, max_order: int) -> list[HomImage]:
    gens = presentation.generators
    relators = [list(r) for r in presentation.relators]
    identity = Perm.identity(d)
    rules = []
    for k in range(1, len(gens)):
        rules.append(_conjugation_rule(gens[k], set(gens[:k]), relators))
    checks = []
    for k in range(len(gens)):
        assigned = set(gens[: k + 1])
        fresh = [r for r in relators if {g for g, _ in r} <= assigned
                 and not {g for g, _ in r} <= set(gens[:k])]
        checks.append(fresh)
    all_perms = None
    found: list[HomImage] = []
    images: dict[str, Perm] = {}

    def ok(k):
        return all(_eval(r, images, identity).is_identity() for r in checks[k])

    def extend(k):
        nonlocal all_perms
        if k == len(gens):
            try:
                elems = _close(list(images.values()), identity, max_order)
            except OrderCapExceeded:
                return
            found.append(HomImage(d, tuple(images[g] for g in gens), len(elems)))
            return
        rule = rules[k - 1]
        if rule is not None:
            x = _eval(rule[0], images, identity)
            y = _eval(invert_word(rule[1]), images, identity)
            candidates = conjugators(x, y)
        else:
            if all_perms is None:
                all_perms = [Perm(p) for p in itertools.permutations(range(d))]
            candidates = all_perms
        for c in candidates:
            images[gens[k]] = c
            if ok(k):
                extend(k + 1)
        images.pop(gens[k], None)

    images[gens[0]] = rep
    if ok(0):
        extend(1)
    return found


def _search_task(args):
    return _search_rep(*args)


@lru_cache(maxsize=32)
def _enumerate_cached(presentation: Presentation, max_degree: int, jobs: int) -> tuple[HomImage, ...]:
    tasks = [(presentation, d, rep, max_degree) for d in range(2, max_degree + 1) for rep in _class_reps(d)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_search_task, tasks))
    else:
        chunks = [_search_task(t) for t in tasks]
    return tuple(h for chunk in chunks for h in chunk)


def enumerate_images(presentation: Presentation, max_degree: int = DEFAULT_MAX_DEGREE,
                     jobs: int = 1) -> tuple[HomImage, ...]:
    """Every homomorphism into S_d (2 <= d <= max_degree) whose image has order
    <= max_degree, up to conjugating the first generator's image to a fixed
    representative of its cycle type.  Order is deterministic."""
    return _enumerate_cached(presentation, max_degree, max(1, jobs))


@dataclass
class HomSearchResult:
    order: int | None
    certificate: WitnessCertificate | None
    max_degree: int
    homs_examined: int

    @property
    def found(self) -> bool:
        return self.order is not None


def hom_search(presentation: Presentation, target: str | Sequence[Syllable],
               max_degree: int = DEFAULT_MAX_DEGREE, jobs: int = 1) -> HomSearchResult:
    """Smallest finite quotient of order <= max_degree in which ``target`` survives.

    ``order is None`` means no quotient of order <= max_degree keeps the
    target alive, so D(target) > max_degree.
    """
    from .groups import parse_word

    word = parse_word(target) if isinstance(target, str) else list(target)
    unknown = {g for g, _ in word} - set(presentation.generators)
    if unknown:
        raise ValueError(f"target uses unknown generators {sorted(unknown)}")
    homs = enumerate_images(presentation, max_degree, jobs)
    best: HomImage | None = None
    best_img = None
    for h in homs:
        if best is not None and h.order >= best.order:
            continue
        imgs = dict(zip(presentation.generators, h.images))
        img = _eval(word, imgs, Perm.identity(h.degree))
        if not img.is_identity():
            best, best_img = h, img
    if best is None:
        return HomSearchResult(None, None, max_degree, len(homs))
    cert = WitnessCertificate("hom", best.order, dict(zip(presentation.generators, best.images)), best_img,
                              {"degree": best.degree, "max_degree": max_degree})
    return HomSearchResult(best.order, cert, max_degree, len(homs))


# ---------------------------------------------------------------- congruence quotients

def _affine_perm(N: int, mult: int, add: int) -> Perm:
    return Perm([(mult * y + add) % N for y in range(N)])


def _congruence_images(spec: GroupSpec, N: int) -> dict[str, Perm] | None:
    if isinstance(spec, BaumslagSolitar):
        return {"a": _affine_perm(N, 1, 1), "t": _affine_perm(N, spec.m, 0)}
    if isinstance(spec, SolLattice):
        pts = [(i, j) for i in range(N) for j in range(N)]
        idx = {v: k for k, v in enumerate(pts)}
        (a, b), (c, d) = spec.A

        def perm(f):
            return Perm([idx[f(v)] for v in pts])

        return {"u": perm(lambda v: ((v[0] + 1) % N, v[1])),
                "v": perm(lambda v: (v[0], (v[1] + 1) % N)),
                "t": perm(lambda v: ((a * v[0] + b * v[1]) % N, (c * v[0] + d * v[1]) % N))}
    if isinstance(spec, UT3Lamp):
        p = spec.p
        pts = [(i, j, k) for i in range(N) for j in range(N) for k in range(N)]
        idx = {v: n for n, v in enumerate(pts)}

        def left(g):
            return Perm([idx[((g[0] + h[0]) % N, (g[1] + h[1]) % N, (g[2] + h[2] + g[0] * h[1]) % N)]
                         for h in pts])

        return {"x": left((1, 0, 0)), "y": left((0, 1, 0)), "z": left((0, 0, 1)),
                "d": Perm([idx[(p * h[0] % N, p * h[1] % N, p * p * h[2] % N)] for h in pts])}
    if isinstance(spec, Heisenberg):
        pts = [(i, j, k) for i in range(N) for j in range(N) for k in range(N)]
        idx = {v: n for n, v in enumerate(pts)}

        def left(g):
            return Perm([idx[((g[0] + h[0]) % N, (g[1] + h[1]) % N, (g[2] + h[2] + g[0] * h[1]) % N)]
                         for h in pts])

        return {"x": left((1, 0, 0)), "y": left((0, 1, 0))}
    return None


def congruence_order(spec: GroupSpec, N: int) -> int | None:
    """|H_N| for the mod-N quotient, or None if N is not admissible."""
    if isinstance(spec, BaumslagSolitar):
        return N * multiplicative_order(spec.m, N) if math.gcd(N, spec.m) == 1 else None
    if isinstance(spec, SolLattice):
        return N * N * _matrix_order(spec, N)
    if isinstance(spec, UT3Lamp):
        return N**3 * multiplicative_order(spec.p, N) if math.gcd(N, spec.p) == 1 else None
    if isinstance(spec, Heisenberg):
        return N**3
    if isinstance(spec, FreeAbelian):
        return N
    return None


def _matrix_order(spec: SolLattice, N: int) -> int:
    (a, b), (c, d) = spec.A
    M = ((a % N, b % N), (c % N, d % N))
    ident = ((1 % N, 0), (0, 1 % N))
    X, k = M, 1
    while X != ident:
        (p, q), (r, s) = X
        X = (((p * a + q * c) % N, (p * b + q * d) % N), ((r * a + s * c) % N, (r * b + s * d) % N))
        k += 1
    return k


def congruence_survives(spec: GroupSpec, x, N: int) -> bool:
    """Does x map to a nontrivial element of the mod-N quotient?"""
    if isinstance(spec, BaumslagSolitar):
        q, s = x
        return s % multiplicative_order(spec.m, N) != 0 or mmod(q, spec.m, N) != 0
    if isinstance(spec, SolLattice):
        v, s = x
        return s % _matrix_order(spec, N) != 0 or v[0] % N != 0 or v[1] % N != 0
    if isinstance(spec, UT3Lamp):
        p = spec.p
        return (x[3] % multiplicative_order(p, N) != 0
                or any(mmod(c, p, N) != 0 for c in x[:3]))
    if isinstance(spec, Heisenberg):
        return any(c % N for c in x)
    if isinstance(spec, FreeAbelian):
        return any(c % N for c in x)
    return False


def congruence_image(spec: GroupSpec, x, N: int) -> Perm | None:
    """Permutation image of x in the mod-N quotient, built from a word for x."""
    images = _congruence_images(spec, N)
    if images is None:
        return None
    degree = len(next(iter(images.values())))
    word, _ = upper_word(spec, x)
    return _eval(word, images, Perm.identity(degree))


def congruence_depth_upper(spec: GroupSpec, x, n_max: int = DEFAULT_N_MAX) -> WitnessCertificate | None:
    """Smallest mod-N quotient (2 <= N <= n_max) in which x survives."""
    best = None
    for N in range(2, n_max + 1):
        order = congruence_order(spec, N)
        if order is None or (best is not None and order >= best[1]):
            continue
        if congruence_survives(spec, x, N):
            best = (N, order)
    if best is None:
        return None
    N, order = best
    images = target = None
    if isinstance(spec, FreeAbelian):
        images = None
    else:
        degree = {BaumslagSolitar: N, SolLattice: N * N}.get(type(spec), N**3)
        if degree <= CERT_DEGREE_LIMIT:
            images = _congruence_images(spec, N)
            target = congruence_image(spec, x, N)
    return WitnessCertificate("congruence", order, images, target, {"family": spec.family, "N": N})


# ---------------------------------------------------------------- arithmetic lower bound

@dataclass
class ArithmeticLowerBoundCertificate:
    group: str
    base: object
    index: int
    prime: int
    depth: int
    alpha: int
    bound: int
    checks: list[dict]

    @property
    def valid(self) -> bool:
        return all(c["ok"] for c in self.checks)

    def to_dict(self) -> dict:
        return {"kind": "arithmetic", "group": self.group, "i": self.index, "p": self.prime,
                "m": self.depth, "alpha": str(self.alpha), "bound": self.bound,
                "valid": self.valid, "checks": self.checks}


def _valuation(n: int, q: int) -> int:
    v = 0
    while n % q == 0:
        n //= q
        v += 1
    return v


def check_hypotheses(spec: GroupSpec, x=None, m: int | None = None):
    """Metadata gate for the lower-bound theorem; returns (x, m) or refuses."""
    md = spec.metadata()
    if md.virtually_nilpotent:
        raise HypothesisRefusal("virtually nilpotent")
    if md.distortion_class != "exponential":
        raise HypothesisRefusal("no declared distorted element")
    if x is None:
        x = md.distinguished_element
    if x != md.distinguished_element:
        raise HypothesisRefusal("no declared distorted element")
    if m is None:
        m = md.nilpotent_depth
    if m < 1 or m > md.nilpotent_depth:
        raise HypothesisRefusal(f"declared nilpotent depth is {md.nilpotent_depth}, not {m}")
    return x, m


def arithmetic_lower_bound(spec: GroupSpec, x_base=None, i: int = 1, m: int | None = None
                           ) -> ArithmeticLowerBoundCertificate:
    """Certificate for D(x^alpha_i) >= p_i (m = 1) or >= p_i^(m+1) (m > 1).

    Every finite quotient H smaller than the bound must kill x^alpha.
    For m = 1 an image of order < p has element orders < p, all dividing alpha.
    For m > 1, reduce to Fitt(H) = F a q-group with x landing in gamma_m(F).
    If gamma_m(F) != 1 then F/[F,F] is noncyclic and each gamma_j/gamma_{j+1}
    (j < m) is nontrivial, so |gamma_m(F)| <= |F| / q^m.  With |F| = q^e < p^(m+1)
    the image order divides q^(e_max - m), which is checked against v_q(alpha).
    Primes q >= p need |F| >= q^(m+1) >= p^(m+1) for x to survive.
    """
    x, m = check_hypotheses(spec, x_base, m)
    w = witness_exponent(i, m)
    p, alpha = w.prime, w.value
    checks: list[dict] = []
    if m == 1:
        bad = [k for k in range(1, p) if alpha % k]
        checks.append({"case": "order < p divides alpha", "p": p, "ok": not bad, "failures": bad})
    else:
        bound = p ** (m + 1)
        for q in primes_up_to(p - 1):
            e_max = prime_power_exponent(q, bound - 1)
            need = max(e_max - m, prime_power_exponent(q, p - 1))
            have = _valuation(alpha, q)
            checks.append({"case": "q < p", "q": q, "max_fitting_exponent": e_max,
                           "needed_valuation": need, "alpha_valuation": have, "ok": need <= have})
        checks.append({"case": "q >= p", "reason": "surviving depth-m image forces |H| >= q^(m+1)", "ok": True})
    return ArithmeticLowerBoundCertificate(spec.label(), x, i, p, m, alpha, w.claimed_depth_bound, checks)


# ---------------------------------------------------------------- audit

@dataclass
class AuditReport:
    group: str
    index: int
    prime: int
    depth: int
    alpha: int
    bound: int
    max_degree: int
    covered_below: int
    complete: bool
    homs_checked: int
    orders_seen: dict[int, int]
    survivors: list[dict]

    @property
    def passed(self) -> bool:
        return not self.survivors

    def to_dict(self) -> dict:
        return {"group": self.group, "i": self.index, "p": self.prime, "m": self.depth,
                "alpha": str(self.alpha), "bound": self.bound, "max_degree": self.max_degree,
                "covered_below": self.covered_below, "complete": self.complete,
                "homs_checked": self.homs_checked,
                "orders_seen": {str(k): v for k, v in sorted(self.orders_seen.items())},
                "survivors": self.survivors, "passed": self.passed}


def case_audit(spec: GroupSpec, x_base=None, i: int = 1, m: int | None = None,
               max_degree: int = DEFAULT_MAX_DEGREE, jobs: int = 1) -> AuditReport:
    """Check by brute force that every quotient below the claimed bound kills x^alpha_i."""
    x, m = check_hypotheses(spec, x_base, m)
    pres = spec.presentation()
    if pres is None:
        raise HypothesisRefusal(f"{spec.label()} has no finite presentation for exhaustive search")
    w = witness_exponent(i, m)
    bound = w.claimed_depth_bound
    covered = min(bound - 1, max_degree)
    word, _ = upper_word(spec, x)
    orders: dict[int, int] = {}
    survivors = []
    checked = 0
    homs = enumerate_images(pres, max_degree, jobs) if covered >= 2 else ()
    for h in homs:
        if h.order >= bound:
            continue
        checked += 1
        orders[h.order] = orders.get(h.order, 0) + 1
        imgs = dict(zip(pres.generators, h.images))
        img = _eval(word, imgs, Perm.identity(h.degree))
        if not (img ** w.value).is_identity():
            survivors.append({"order": h.order, "images": {g: _cycles(p) for g, p in imgs.items()}})
    return AuditReport(spec.label(), i, w.prime, m, w.value, bound, max_degree, covered + 1,
                       max_degree >= bound - 1, checked, orders, survivors)


# ---------------------------------------------------------------- depth intervals

@dataclass
class DepthInterval:
    lower: int
    upper: int | None
    lower_certificates: list[dict]
    upper_certificate: WitnessCertificate | None

    @property
    def exact(self) -> bool:
        return self.upper is not None and self.lower == self.upper

    def to_dict(self) -> dict:
        certs = list(self.lower_certificates)
        if self.upper_certificate is not None:
            certs.append(dict(self.upper_certificate.to_dict(), side="upper"))
        return {"lower": self.lower, "upper": self.upper, "exact": self.exact, "certificates": certs}


def _witness_power_index(spec: GroupSpec, x, max_index: int = 25):
    """(i, m) when x is the distinguished element raised to alpha_i, else None."""
    try:
        base, m = check_hypotheses(spec)
    except HypothesisRefusal:
        return None
    for mm in range(1, m + 1):
        for i in range(1, max_index + 1):
            if spec.pow(base, witness_exponent(i, mm).value) == x:
                return i, mm
    return None


def depth_interval(spec: GroupSpec, x, max_degree: int = DEFAULT_MAX_DEGREE,
                   n_max: int = DEFAULT_N_MAX, jobs: int = 1) -> DepthInterval:
    if x == spec.identity():
        raise ValueError("the depth function is defined on nontrivial elements only")
    lower, certs = 2, [{"kind": "trivial", "bound": 2, "side": "lower"}]
    upper, upper_cert = None, None
    hit = _witness_power_index(spec, x)
    if hit is not None:
        cert = arithmetic_lower_bound(spec, None, *hit)
        if cert.valid:
            certs.append(dict(cert.to_dict(), side="lower"))
            lower = max(lower, cert.bound)
    pres = spec.presentation()
    if pres is not None and max_degree >= 2:
        word, _ = upper_word(spec, x)
        res = hom_search(pres, word, max_degree, jobs)
        if res.found:
            lower = max(lower, res.order)
            upper, upper_cert = res.order, res.certificate
            certs.append({"kind": "exhaustive", "max_degree": max_degree, "bound": res.order, "side": "lower"})
        else:
            lower = max(lower, max_degree + 1)
            certs.append({"kind": "exhaustive", "max_degree": max_degree, "bound": max_degree + 1,
                          "side": "lower"})
    cong = congruence_depth_upper(spec, x, n_max)
    if cong is not None and (upper is None or cong.order < upper):
        upper, upper_cert = cong.order, cong
    return DepthInterval(lower, upper, certs, upper_cert)


# ---------------------------------------------------------------- growth

@dataclass
class GrowthEntry:
    radius: int
    lower: int
    upper: int | None
    elements: int
    argmax: object

    @property
    def exact(self) -> bool:
        return self.upper is not None and self.lower == self.upper


@dataclass
class GrowthTable:
    group: str
    entries: list[GrowthEntry]

    def to_dict(self) -> dict:
        return {"group": self.group,
                "entries": [{"n": e.radius, "lower": e.lower, "upper": e.upper, "exact": e.exact,
                             "elements": e.elements} for e in self.entries]}


def rf_growth(spec: GroupSpec, n_max: int, max_degree: int = DEFAULT_MAX_DEGREE,
              n_max_congruence: int = DEFAULT_N_MAX, jobs: int = 1) -> GrowthTable:
    """F(n) intervals for n = 1..n_max: max of depth intervals over the n-ball."""
    table = ball(spec, n_max)
    if not table.complete:
        raise RuntimeError("ball exceeded node cap")
    by_radius: dict[int, list] = {}
    for g, r in table.entries.items():
        if r > 0:
            by_radius.setdefault(r, []).append(g)
    cache: dict = {}
    entries = []
    lo, hi, count, arg = 0, 0, 0, None
    for n in range(1, n_max + 1):
        for g in sorted(by_radius.get(n, []), key=repr):
            key = g
            if key not in cache:
                inv = spec.inv(g)
                cache[key] = cache.get(inv) or depth_interval(spec, g, max_degree, n_max_congruence, jobs)
            d = cache[key]
            count += 1
            if d.lower > lo:
                lo, arg = d.lower, g
            if hi is not None:
                hi = None if d.upper is None else max(hi, d.upper)
        entries.append(GrowthEntry(n, lo, hi, count, arg))
    return GrowthTable(spec.label(), entries)


# ---------------------------------------------------------------- theorem harness

# min of L_i / n_i^e over i = 2..40, measured once and rounded down
RECORDED_RATIO_FLOORS = {
    "bs:1:2": 0.29,
    "ut3lamp:2": 0.0017,
}

# psi(x) < PSI_SLOPE * x for all x > 0 (Rosser-Schoenfeld)
PSI_SLOPE = 1.03883


def horner_envelope(spec: GroupSpec, m: int) -> tuple[float, float] | None:
    """(A, B) with ||x^alpha_i|| <= A * p_i + B for the distinguished element.

    The naive base-b word x^c0 t x^c1 t ... t^-k has length at most
    (b + 1)(log_b v + 1), and log alpha_i <= (m + 2 or 1) * PSI_SLOPE * p_i.
    The shipped words are no longer than the naive one.
    """
    if isinstance(spec, BaumslagSolitar):
        b = spec.m
    elif isinstance(spec, UT3Lamp):
        b = spec.p**2
    else:
        return None
    powers = m + 2 if m > 1 else 1
    return (b + 1) * powers * PSI_SLOPE / math.log(b), float(b + 1)


@dataclass
class VerificationPoint:
    i: int
    p: int
    alpha: int
    n_lower: int
    n_upper: int
    L: int
    ratio: float

    def to_dict(self) -> dict:
        return {"i": self.i, "p_i": self.p, "alpha_digits": len(str(self.alpha)), "alpha": str(self.alpha),
                "n_lower": self.n_lower, "n_upper": self.n_upper, "L": self.L, "ratio": self.ratio}


@dataclass
class VerificationReport:
    group: str
    m: int
    points: list[VerificationPoint]
    exponent: int
    min_ratio: float
    ratio_floor: float
    strictly_decreasing: bool
    envelope: tuple[float, float] | None
    envelope_ok: bool
    classification: str

    @property
    def decays_to_zero(self) -> bool:
        # a decreasing run that stays under a linear length envelope is bounded
        # below by L_i / (A p_i + B)^e, so it cannot tend to 0
        return self.strictly_decreasing and not self.envelope_ok

    @property
    def verified(self) -> bool:
        return self.min_ratio > 0 and self.min_ratio >= self.ratio_floor and not self.decays_to_zero

    @property
    def conclusion(self) -> str:
        return "verified at desk scale" if self.verified else "not verified"

    def to_dict(self) -> dict:
        return {"group": self.group, "m": self.m, "exponent": self.exponent,
                "points": [p.to_dict() for p in self.points], "min_ratio": self.min_ratio,
                "ratio_floor": self.ratio_floor, "strictly_decreasing": self.strictly_decreasing,
                "envelope": None if self.envelope is None else list(self.envelope),
                "envelope_ok": self.envelope_ok, "decays_to_zero": self.decays_to_zero,
                "distortion": self.classification, "conclusion": self.conclusion}


def theorem_verify(spec: GroupSpec, i_range: Sequence[int], ratio_floor: float | None = None
                   ) -> VerificationReport:
    """Desk-scale check of the polynomial lower bound on F along x^alpha_i.

    n_i is the certified upper bound on ||x^alpha_i||; since F is
    nondecreasing, D(x^alpha_i) >= L_i gives F(n_i) >= L_i.
    """
    x, m = check_hypotheses(spec)
    prof = distortion_profile(spec, x)
    if prof.classification != "at-least-exponential":
        raise HypothesisRefusal(f"distinguished element classified {prof.classification}")
    e = m + 1 if m > 1 else 1
    points = []
    for i in i_range:
        cert = arithmetic_lower_bound(spec, x, i, m)
        if not cert.valid:
            raise AssertionError(f"arithmetic certificate failed at i={i}")
        iv = word_length_bounds(spec, spec.pow(x, cert.alpha))
        points.append(VerificationPoint(i, cert.prime, cert.alpha, iv.lower, iv.upper, cert.bound,
                                        cert.bound / iv.upper**e))
    ratios = [p.ratio for p in points]
    decreasing = len(ratios) >= 3 and all(b < a for a, b in zip(ratios, ratios[1:]))
    env = horner_envelope(spec, m)
    env_ok = env is not None and all(p.n_upper <= env[0] * p.p + env[1] for p in points)
    floor = RECORDED_RATIO_FLOORS.get(spec.label(), 0.0) if ratio_floor is None else ratio_floor
    return VerificationReport(spec.label(), m, points, e, min(ratios) if ratios else 0.0, floor,
                              decreasing, env, env_ok, prof.classification)
