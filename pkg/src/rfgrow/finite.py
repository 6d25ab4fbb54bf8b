"""Brute-force finite permutation groups.

Groups are materialised as their full element sets (capped, default 20000,
override with ``RFGROW_ORDER_CAP``), and every subgroup question is answered
by exhaustive search.  That is the right trade for the small witnesses this
package deals with; nothing here scales to Sims-style problem sizes.

Permutations compose right to left: ``(p * q)(i) == p(q(i))``.
"""
from __future__ import annotations

import math
import os
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Callable, Iterable, Sequence

DEFAULT_ORDER_CAP = 20000


class FiniteGroupError(ValueError):
    """Precondition violated (not normal, not solvable, not a p-group, ...)."""


class OrderCapExceeded(FiniteGroupError):
    pass


def order_cap() -> int:
    env = os.environ.get("RFGROW_ORDER_CAP")
    return int(env) if env else DEFAULT_ORDER_CAP


class Perm(tuple):
    """A permutation of {0, ..., d-1} stored as its image tuple."""

    __slots__ = ()

    def __new__(cls, images: Iterable[int] = ()):
        return tuple.__new__(cls, images)

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return tuple.__new__(cls, range(degree))

    @classmethod
    def from_cycles(cls, cycles: Sequence[Sequence[int]], degree: int | None = None) -> "Perm":
        pts = [x for c in cycles for x in c]
        if len(pts) != len(set(pts)):
            raise FiniteGroupError(f"cycles {cycles} are not disjoint")
        if degree is None:
            degree = max(pts) + 1 if pts else 0
        images = list(range(degree))
        for c in cycles:
            for a, b in zip(c, list(c[1:]) + [c[0]]):
                images[a] = b
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self)

    def __mul__(self, other: "Perm") -> "Perm":  # type: ignore[override]
        return tuple.__new__(Perm, [self[j] for j in other])

    def inverse(self) -> "Perm":
        out = [0] * len(self)
        for i, j in enumerate(self):
            out[j] = i
        return tuple.__new__(Perm, out)

    def __pow__(self, k: int) -> "Perm":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        if k:
            k %= self.order()
        result = Perm.identity(len(self))
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * len(self)
        out = []
        for i in range(len(self)):
            if seen[i]:
                continue
            c = []
            j = i
            while not seen[j]:
                seen[j] = True
                c.append(j)
                j = self[j]
            out.append(tuple(c))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def order(self) -> int:
        return reduce(math.lcm, (len(c) for c in self.cycles()), 1)

    def __repr__(self) -> str:
        cyc = [c for c in self.cycles() if len(c) > 1]
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


def parse_perms(text: str) -> list[Perm]:
    """Parse ``"(0 1 2);(0 1)"``: one permutation per ``;``-separated item,
    each a product of disjoint cycles, all padded to a common degree."""
    import re

    raw = []
    for item in text.split(";"):
        item = item.strip()
        if not item:
            continue
        cycles = [tuple(int(x) for x in re.split(r"[\s,]+", c.strip()) if x)
                  for c in re.findall(r"\(([^()]*)\)", item)]
        if not cycles and item not in ("()",):
            raise FiniteGroupError(f"cannot parse permutation {item!r}")
        raw.append([c for c in cycles if c])
    degree = max((max(c) + 1 for cs in raw for c in cs), default=1)
    return [Perm.from_cycles(cs, degree) for cs in raw]


# ---------------------------------------------------------------- closure

def _close(gens: Sequence[Perm], identity: Perm, cap: int) -> set[Perm]:
    elements = {identity}
    frontier = deque([identity])
    gens = [g for g in gens if not g.is_identity()]
    while frontier:
        g = frontier.popleft()
        for s in gens:
            h = tuple.__new__(Perm, [g[j] for j in s])
            if h not in elements:
                elements.add(h)
                if len(elements) > cap:
                    raise OrderCapExceeded(f"closure exceeds order cap {cap}")
                frontier.append(h)
    return elements


def _close_from(base: frozenset[Perm] | set[Perm], gens: Sequence[Perm], new: Sequence[Perm],
                cap: int) -> set[Perm]:
    """Closure of ``base`` (a closed set generated by ``gens``) with ``new`` added."""
    elements = set(base)
    all_gens = [g for g in list(gens) + list(new) if not g.is_identity()]
    frontier = deque(elements)
    while frontier:
        g = frontier.popleft()
        for s in all_gens:
            h = tuple.__new__(Perm, [g[j] for j in s])
            if h not in elements:
                elements.add(h)
                if len(elements) > cap:
                    raise OrderCapExceeded(f"closure exceeds order cap {cap}")
                frontier.append(h)
    return elements


@dataclass(eq=False)
class FiniteGroup:
    generators: tuple[Perm, ...]
    elements: frozenset[Perm]
    degree: int
    _orders: dict = field(default_factory=dict, repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def identity(self) -> Perm:
        return Perm.identity(self.degree)

    def element_order(self, g: Perm) -> int:
        k = self._orders.get(g)
        if k is None:
            k = g.order()
            self._orders[g] = k
        return k

    def __contains__(self, g) -> bool:
        return g in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(sorted(self.elements))

    def whole(self) -> "Subgroup":
        return Subgroup(self, self.elements, self.generators)

    def trivial(self) -> "Subgroup":
        return Subgroup(self, frozenset([self.identity]), ())

    def is_abelian(self) -> bool:
        return all(a * b == b * a for i, a in enumerate(self.generators) for b in self.generators[i + 1:])

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order}, degree={self.degree}, gens={list(self.generators)})"


def closure(gens: Sequence[Perm], order_cap_: int | None = None, degree: int | None = None) -> FiniteGroup:
    """The group generated by ``gens``, by breadth-first products."""
    gens = tuple(Perm(g) for g in gens)
    degrees = {len(g) for g in gens}
    if len(degrees) > 1:
        raise FiniteGroupError("generators have different degrees")
    if degree is None:
        degree = degrees.pop() if degrees else 1
    elif degrees and degrees != {degree}:
        raise FiniteGroupError("generator degree does not match")
    cap = order_cap() if order_cap_ is None else order_cap_
    elems = _close(gens, Perm.identity(degree), cap)
    return FiniteGroup(gens, frozenset(elems), degree)


# ---------------------------------------------------------------- subgroups

@dataclass(eq=False)
class Subgroup:
    parent: FiniteGroup
    members: frozenset[Perm]
    generators: tuple[Perm, ...] = ()

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, g) -> bool:
        return g in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __eq__(self, other) -> bool:
        if isinstance(other, Subgroup):
            return self.members == other.members
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.members)

    def is_trivial(self) -> bool:
        return len(self.members) == 1

    @cached_property
    def gens(self) -> tuple[Perm, ...]:
        """A generating set; a small one is found greedily when none was recorded."""
        if self.generators:
            return self.generators
        out: list[Perm] = []
        span: set[Perm] = {self.parent.identity}
        for g in sorted(self.members):
            if g not in span:
                out.append(g)
                span = _close_from(span, out[:-1], [g], len(self.members))
                if len(span) == len(self.members):
                    break
        return tuple(out)

    @cached_property
    def is_normal(self) -> bool:
        return is_normal(self.parent, self)

    @cached_property
    def _lcs(self) -> "Series":
        return lower_central_series(self)

    @property
    def is_nilpotent(self) -> bool:
        return self._lcs.terminates

    @property
    def step_length(self) -> int | None:
        return self._lcs.length if self._lcs.terminates else None

    def as_group(self) -> FiniteGroup:
        return FiniteGroup(self.gens, self.members, self.parent.degree)

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order})"


def subgroup(G: FiniteGroup, gens: Iterable[Perm]) -> Subgroup:
    gens = tuple(gens)
    members = _close(gens, G.identity, G.order)
    return Subgroup(G, frozenset(members), gens)


def _as_subgroup(x: FiniteGroup | Subgroup) -> Subgroup:
    return x.whole() if isinstance(x, FiniteGroup) else x


def is_normal(G: FiniteGroup, K: Subgroup) -> bool:
    for s in G.generators:
        si = s.inverse()
        for k in K.gens:
            if s * k * si not in K.members:
                return False
    return True


def normal_closure(H: FiniteGroup | Subgroup, xs: Iterable[Perm]) -> Subgroup:
    """Smallest subgroup of H normal in H containing ``xs``."""
    H = _as_subgroup(H)
    conj = [(s, s.inverse()) for s in H.gens]
    gens: list[Perm] = []
    members: set[Perm] = {H.parent.identity}
    pending = deque(x for x in xs if not x.is_identity())
    while pending:
        x = pending.popleft()
        if x in members:
            continue
        gens.append(x)
        members = _close_from(members, gens[:-1], [x], H.order)
        for g in gens:
            for s, si in conj:
                y = s * g * si
                if y not in members:
                    pending.append(y)
    return Subgroup(H.parent, frozenset(members), tuple(gens))


def commutator(a: Perm, b: Perm) -> Perm:
    return a * b * a.inverse() * b.inverse()


@dataclass
class Series:
    terms: list[Subgroup]
    terminates: bool

    @property
    def length(self) -> int:
        """Number of nontrivial terms (step length / derived length)."""
        return sum(1 for t in self.terms if not t.is_trivial())


def lower_central_series(H: FiniteGroup | Subgroup) -> Series:
    """gamma_1 = H, gamma_{i+1} = [gamma_i, H], until it stabilises."""
    H = _as_subgroup(H)
    terms = [H]
    while not terms[-1].is_trivial():
        cur = terms[-1]
        nxt = normal_closure(H, (commutator(a, s) for a in cur.gens for s in H.gens))
        if nxt.members == cur.members:
            return Series(terms, False)
        terms.append(nxt)
    return Series(terms, True)


def derived_series(H: FiniteGroup | Subgroup) -> Series:
    H = _as_subgroup(H)
    terms = [H]
    while not terms[-1].is_trivial():
        cur = terms[-1]
        nxt = normal_closure(cur, (commutator(a, b) for a in cur.gens for b in cur.gens))
        if nxt.members == cur.members:
            return Series(terms, False)
        terms.append(nxt)
    return Series(terms, True)


def is_solvable(G: FiniteGroup | Subgroup) -> bool:
    return derived_series(G).terminates


def step_length(H: FiniteGroup | Subgroup) -> int | None:
    s = lower_central_series(H)
    return s.length if s.terminates else None


def conjugacy_classes(G: FiniteGroup) -> list[frozenset[Perm]]:
    seen: set[Perm] = set()
    classes = []
    conj = [(s, s.inverse()) for s in G.generators]
    for g in sorted(G.elements):
        if g in seen:
            continue
        orbit = {g}
        frontier = [g]
        while frontier:
            x = frontier.pop()
            for s, si in conj:
                y = s * x * si
                if y not in orbit:
                    orbit.add(y)
                    frontier.append(y)
        seen |= orbit
        classes.append(frozenset(orbit))
    return classes


def normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Every normal subgroup, as joins of normal closures of single elements."""
    found: dict[frozenset, Subgroup] = {}
    atoms = []
    for cls in conjugacy_classes(G):
        N = normal_closure(G, [min(cls)])
        if N.members not in found:
            found[N.members] = N
            atoms.append(N)
    frontier = list(found.values())
    while frontier:
        nxt = []
        for N in frontier:
            for A in atoms:
                if A.members <= N.members:
                    continue
                J = normal_closure(G, list(N.gens) + list(A.gens))
                if J.members not in found:
                    found[J.members] = J
                    nxt.append(J)
        frontier = nxt
    return sorted(found.values(), key=lambda s: (s.order, sorted(s.members)))


# ---------------------------------------------------------------- Fitting

def _require_solvable(G: FiniteGroup) -> None:
    if not is_solvable(G):
        raise FiniteGroupError("group is not solvable")


def fitting_subgroup(G: FiniteGroup) -> Subgroup:
    """Fitting subgroup: elements whose normal closure is nilpotent."""
    _require_solvable(G)
    if lower_central_series(G).terminates:
        return G.whole()
    members: set[Perm] = set()
    for cls in conjugacy_classes(G):
        if lower_central_series(normal_closure(G, [min(cls)])).terminates:
            members |= cls
    F = subgroup(G, sorted(members))
    if F.members != frozenset(members):
        raise AssertionError("Fitting criterion produced a non-closed set")
    return F


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    q = 2
    while q * q <= n:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
        q += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime_power(n: int) -> int | None:
    """The prime p when n = p^k with k >= 1, else None."""
    f = factorize(n)
    return next(iter(f)) if len(f) == 1 else None


def sylow_subgroup(G: FiniteGroup, p: int) -> Subgroup:
    """One Sylow p-subgroup, grown greedily from p-elements."""
    target = p ** factorize(G.order).get(p, 0)
    gens: list[Perm] = []
    members: set[Perm] = {G.identity}
    candidates = [g for g in sorted(G.elements) if is_prime_power(G.element_order(g)) == p]
    grew = True
    # a p-subgroup below full size always has a p-element extending it, but
    # one that failed earlier may only fit after later growth, so repeat passes
    while grew and len(members) < target:
        grew = False
        for g in candidates:
            if len(members) == target:
                break
            if g in members:
                continue
            try:
                bigger = _close_from(members, gens, [g], target)
            except OrderCapExceeded:
                continue
            if is_prime_power(len(bigger)) == p:
                gens.append(g)
                members = bigger
                grew = True
    if len(members) != target:
        raise AssertionError("greedy Sylow search stalled")
    return Subgroup(G, frozenset(members), tuple(gens))


def p_core(G: FiniteGroup, p: int) -> Subgroup:
    """O_p(G): the intersection of all Sylow p-subgroups."""
    P = sylow_subgroup(G, p)
    conjugates = {P.members}
    for g in G.elements:
        gi = g.inverse()
        conjugates.add(frozenset(g * x * gi for x in P.members))
    core = frozenset.intersection(*conjugates)
    return Subgroup(G, core)


def fitting_via_cores(G: FiniteGroup) -> Subgroup:
    """Product of the O_p(G) over primes dividing |G|."""
    _require_solvable(G)
    gens: list[Perm] = []
    for p in sorted(factorize(G.order)):
        gens.extend(p_core(G, p).gens)
    return subgroup(G, gens)


def sylow_decomposition_nilpotent(N: FiniteGroup | Subgroup) -> list[tuple[int, Subgroup]]:
    """Split a nilpotent group into its Sylow subgroups (elements of p-power order)."""
    N = _as_subgroup(N)
    if not N.is_nilpotent:
        raise FiniteGroupError("sylow_decomposition_nilpotent needs a nilpotent group")
    G = N.parent
    out = []
    for p in sorted(factorize(N.order)):
        Q = frozenset(g for g in N.members if G.element_order(g) == 1 or is_prime_power(G.element_order(g)) == p)
        out.append((p, Subgroup(G, Q)))
    if math.prod(len(Q) for _, Q in out) != N.order:
        raise AssertionError("Sylow factors do not multiply to |N|")
    return out


# ---------------------------------------------------------------- quotients

@dataclass(eq=False)
class Quotient:
    group: FiniteGroup
    kernel: Subgroup
    coset_of: dict[Perm, int]
    reps: list[Perm]

    def project(self, g: Perm) -> Perm:
        return tuple.__new__(Perm, [self.coset_of[g * r] for r in self.reps])


def quotient(G: FiniteGroup, K: Subgroup) -> Quotient:
    """G/K realised as the action of G on the left cosets of K."""
    if not is_normal(G, K):
        raise FiniteGroupError("quotient needs a normal subgroup")
    coset_of: dict[Perm, int] = {}
    reps: list[Perm] = []
    for g in sorted(G.elements):
        if g in coset_of:
            continue
        idx = len(reps)
        reps.append(g)
        for k in K.members:
            coset_of[g * k] = idx
    partial = Quotient(FiniteGroup((), frozenset(), len(reps)), K, coset_of, reps)
    images = tuple(partial.project(s) for s in G.generators)
    Q = closure(images, degree=len(reps))
    if Q.order * K.order != G.order:
        raise AssertionError("quotient order mismatch")
    partial.group = Q
    return partial


# ---------------------------------------------------------------- reduction to p-group Fitting

@dataclass
class Prop32Result:
    prime: int
    kernel: Subgroup
    quotient: FiniteGroup
    project: Callable[[Perm], Perm]
    image: Perm
    steps: list[dict]


def _component(h: Perm, order: int, p: int) -> Perm:
    """The p-part of h inside the cyclic group <h>."""
    pk = p ** factorize(order).get(p, 0)
    rest = order // pk
    # u = 1 mod pk, 0 mod rest
    u = rest * pow(rest, -1, pk) if pk > 1 else 0
    return h ** u


def prop32_reduce(H: FiniteGroup, h: Perm) -> Prop32Result:
    """Quotient H until its Fitting subgroup is a p-group while keeping h alive.

    Each round splits Fitt into Sylow factors, keeps the factor of the
    smallest prime on which h has a nontrivial component, and kills the rest.
    """
    if h.is_identity():
        raise FiniteGroupError("h must be nontrivial")
    F = fitting_subgroup(H)
    if h not in F.members:
        raise FiniteGroupError("h must lie in the Fitting subgroup")
    project: Callable[[Perm], Perm] = lambda g: g
    cur, img, steps = H, h, []
    while True:
        F = fitting_subgroup(cur)
        primes = sorted(factorize(F.order))
        if len(primes) <= 1:
            p = primes[0]
            break
        factors = sylow_decomposition_nilpotent(F)
        order = cur.element_order(img)
        p = next(q for q, _ in factors if not _component(img, order, q).is_identity())
        K = subgroup(cur, [g for q, Q in factors if q != p for g in Q.gens])
        Qt = quotient(cur, K)
        steps.append({"order": cur.order, "fitting_order": F.order, "prime": p, "killed_order": K.order})
        project = (lambda f, q: (lambda g: q.project(f(g))))(project, Qt)
        cur, img = Qt.group, Qt.project(img)
    kernel = Subgroup(H, frozenset(g for g in H.elements if project(g).is_identity()))
    return Prop32Result(p, kernel, cur, project, img, steps)


# ---------------------------------------------------------------- p-group bounds

@dataclass
class Lemma31Report:
    prime: int
    order: int
    step_length: int
    bound: int
    holds: bool


def lemma31_check(Q: FiniteGroup | Subgroup) -> Lemma31Report:
    """|Q| >= p for abelian p-groups, |Q| >= p^(c+1) at step length c > 1."""
    Q = _as_subgroup(Q)
    p = is_prime_power(Q.order)
    if p is None:
        raise FiniteGroupError(f"order {Q.order} is not a prime power")
    c = lower_central_series(Q).length
    bound = p if c <= 1 else p ** (c + 1)
    return Lemma31Report(p, Q.order, c, bound, Q.order >= bound)


@dataclass
class Prop43Report:
    prime: int
    order: int
    depth: int
    fitting_order: int
    fitting_step_length: int
    bound: int
    holds: bool


def prop43_check(H: FiniteGroup, x_img: Perm, m: int) -> Prop43Report:
    """|H| >= p (m = 1) or p^(m+1) (m > 1) for a surviving depth-m element."""
    if x_img.is_identity():
        raise FiniteGroupError("x_img must be nontrivial")
    F = fitting_subgroup(H)
    p = is_prime_power(F.order)
    if p is None:
        raise FiniteGroupError("Fitting subgroup is not a p-group; reduce first")
    lcs = lower_central_series(F)
    if m > len(lcs.terms) or x_img not in lcs.terms[m - 1].members:
        raise FiniteGroupError(f"x_img is not in gamma_{m} of the Fitting subgroup")
    bound = p if m == 1 else p ** (m + 1)
    return Prop43Report(p, H.order, m, F.order, lcs.length, bound, H.order >= bound)


# ---------------------------------------------------------------- small named groups

def cyclic(n: int) -> FiniteGroup:
    return closure([Perm([(i + 1) % n for i in range(n)])], degree=n)


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n (n >= 3)."""
    r = Perm([(i + 1) % n for i in range(n)])
    s = Perm([(-i) % n for i in range(n)])
    return closure([r, s])


def symmetric(n: int) -> FiniteGroup:
    if n == 1:
        return closure([], degree=1)
    gens = [Perm.from_cycles([tuple(range(n))], n), Perm.from_cycles([(0, 1)], n)]
    return closure(gens)


def regular_group(elements: Sequence, mul: Callable, generators: Sequence) -> FiniteGroup:
    """Left-regular permutation representation of an abstract group."""
    index = {e: i for i, e in enumerate(elements)}
    gens = [Perm([index[mul(g, e)] for e in elements]) for g in generators]
    return closure(gens, degree=len(elements))


def quaternion() -> FiniteGroup:
    # unit quaternions as (sign, axis) with axis in 1, i, j, k
    table = {("1", x): (1, x) for x in "1ijk"}
    table.update({(x, "1"): (1, x) for x in "1ijk"})
    for a, b, c in (("i", "j", "k"), ("j", "k", "i"), ("k", "i", "j")):
        table[(a, b)] = (1, c)
        table[(b, a)] = (-1, c)
    for x in "ijk":
        table[(x, x)] = (-1, "1")
    elems = [(s, x) for s in (1, -1) for x in "1ijk"]

    def mul(p, q):
        s, x = table[(p[1], q[1])]
        return (p[0] * q[0] * s, x)

    return regular_group(elems, mul, [(1, "i"), (1, "j")])


def unitriangular(p: int) -> FiniteGroup:
    """U3(Z/p), order p^3, as a regular permutation group."""
    elems = [(a, b, c) for a in range(p) for b in range(p) for c in range(p)]

    def mul(x, y):
        return ((x[0] + y[0]) % p, (x[1] + y[1]) % p, (x[2] + y[2] + x[0] * y[1]) % p)

    return regular_group(elems, mul, [(1, 0, 0), (0, 1, 0)])


def direct_product(*groups: FiniteGroup) -> FiniteGroup:
    offset = 0
    total = sum(G.degree for G in groups)
    gens = []
    for G in groups:
        for g in G.generators:
            images = list(range(total))
            for i, j in enumerate(g):
                images[offset + i] = offset + j
            gens.append(Perm(images))
        offset += G.degree
    return closure(gens, degree=total)


def abelian(*orders: int) -> FiniteGroup:
    return direct_product(*(cyclic(n) for n in orders))
