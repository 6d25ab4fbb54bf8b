import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from catalog import alternating4, p_groups, solvable_groups
from rfgrow.finite import (
    FiniteGroupError,
    OrderCapExceeded,
    Perm,
    closure,
    commutator,
    conjugacy_classes,
    cyclic,
    derived_series,
    dihedral,
    direct_product,
    fitting_subgroup,
    fitting_via_cores,
    is_normal,
    is_prime_power,
    is_solvable,
    lemma31_check,
    lower_central_series,
    normal_closure,
    normal_subgroups,
    p_core,
    parse_perms,
    prop32_reduce,
    prop43_check,
    quaternion,
    quotient,
    subgroup,
    sylow_decomposition_nilpotent,
    sylow_subgroup,
    symmetric,
    unitriangular,
)


def perms(d):
    return st.permutations(list(range(d))).map(Perm)


# ---------------------------------------------------------------- permutations

def test_composition_is_right_to_left():
    p = Perm.from_cycles([(0, 1)], 3)
    q = Perm.from_cycles([(1, 2)], 3)
    assert (p * q)[0] == 1 and (p * q)[1] == 2
    assert all((p * q)[i] == p[q[i]] for i in range(3))


@given(perms(6), perms(6), perms(6))
def test_perm_group_laws(a, b, c):
    e = Perm.identity(6)
    assert (a * b) * c == a * (b * c)
    assert a * a.inverse() == e == a.inverse() * a
    assert a ** a.order() == e
    assert a ** -1 == a.inverse()
    assert sorted(a.cycle_type(), reverse=True) == sorted((len(c) for c in a.cycles()), reverse=True)


def test_parse_perms():
    a, b = parse_perms("(0 1 2);(0 1)")
    assert a == Perm((1, 2, 0)) and b == Perm((1, 0, 2))
    assert closure([a, b]).order == 6
    with pytest.raises(ValueError):
        parse_perms("(0 1")


def test_order_cap(monkeypatch):
    monkeypatch.setenv("RFGROW_ORDER_CAP", "100")
    with pytest.raises(OrderCapExceeded):
        symmetric(5)
    monkeypatch.delenv("RFGROW_ORDER_CAP")
    assert symmetric(5).order == 120


# ---------------------------------------------------------------- catalog sanity

def test_catalog_sizes():
    assert len(p_groups()) >= 15
    assert all(is_prime_power(G.order) for _, G in p_groups())
    assert all(is_solvable(G) and G.order <= 200 for _, G in solvable_groups())


@pytest.mark.parametrize("name,G", solvable_groups(), ids=[n for n, _ in solvable_groups()])
def test_lagrange(name, G):
    rng = random.Random(G.order)
    elems = sorted(G.elements)
    for _ in range(6):
        H = subgroup(G, rng.sample(elems, min(2, len(elems))))
        assert G.order % H.order == 0
        assert G.order % G.element_order(rng.choice(elems)) == 0


# ---------------------------------------------------------------- series

def test_series_examples():
    S4 = symmetric(4)
    ds = derived_series(S4)
    assert [len(t) for t in ds.terms] == [24, 12, 4, 1] and ds.length == 3
    assert not lower_central_series(S4).terminates
    D4 = dihedral(4)
    lcs = lower_central_series(D4)
    assert [len(t) for t in lcs.terms] == [8, 2, 1] and lcs.length == 2
    assert not is_solvable(symmetric(5))


def test_commutator_identity():
    a, b = Perm.from_cycles([(0, 1, 2)], 4), Perm.from_cycles([(2, 3)], 4)
    assert commutator(a, b) == a * b * a.inverse() * b.inverse()


# ---------------------------------------------------------------- normal subgroups

def oracle_normal_subgroups(G):
    """Unions of conjugacy classes containing 1 that are closed under products."""
    classes = conjugacy_classes(G)
    ident = next(c for c in classes if G.identity in c)
    rest = [c for c in classes if c is not ident]
    found = set()
    for r in range(len(rest) + 1):
        for combo in itertools.combinations(rest, r):
            members = set(ident).union(*combo)
            if len(members) and G.order % len(members) == 0 and all(a * b in members for a in members for b in members):
                found.add(frozenset(members))
    return found


SMALL = [(n, G) for n, G in solvable_groups() if G.order <= 60 and len(conjugacy_classes(G)) <= 14]


@pytest.mark.parametrize("name,G", SMALL, ids=[n for n, _ in SMALL])
def test_normal_subgroups_match_oracle(name, G):
    ns = normal_subgroups(G)
    assert {N.members for N in ns} == oracle_normal_subgroups(G)
    for N in ns:
        assert is_normal(G, N)
        for g in G.elements:
            gi = g.inverse()
            assert all(g * n * gi in N.members for n in N.members)


def test_normal_subgroup_counts():
    assert len(normal_subgroups(symmetric(3))) == 3
    assert len(normal_subgroups(symmetric(4))) == 4
    assert len(normal_subgroups(dihedral(4))) == 6
    assert len(normal_subgroups(quaternion())) == 6
    assert len(normal_subgroups(direct_product(cyclic(6), symmetric(3)))) == 14


def test_normal_closure():
    S4 = symmetric(4)
    N = normal_closure(S4, [Perm.from_cycles([(0, 1), (2, 3)], 4)])
    assert N.order == 4
    assert normal_closure(S4, [Perm.from_cycles([(0, 1)], 4)]).order == 24


# ---------------------------------------------------------------- Fitting

def test_fitting_values():
    assert fitting_subgroup(symmetric(3)).order == 3
    F4 = fitting_subgroup(symmetric(4))
    assert F4.order == 4 and all(g.cycle_type() in ((2, 2), (1, 1, 1, 1)) or g.is_identity() for g in F4.members)
    D6 = dihedral(6)
    F = fitting_subgroup(D6)
    assert F.order == 6 and F.as_group().is_abelian()
    assert [(p, Q.order) for p, Q in sylow_decomposition_nilpotent(F)] == [(2, 2), (3, 3)]
    with pytest.raises(FiniteGroupError):
        fitting_subgroup(symmetric(5))


@pytest.mark.parametrize("name,G", solvable_groups(), ids=[n for n, _ in solvable_groups()])
def test_fitting_agrees_with_core_oracle(name, G):
    F = fitting_subgroup(G)
    assert F.members == fitting_via_cores(G).members
    assert is_normal(G, F) and F.is_nilpotent


@pytest.mark.parametrize("name,G", solvable_groups(), ids=[n for n, _ in solvable_groups()])
def test_sylow_orders(name, G):
    from rfgrow.finite import factorize

    for p, e in factorize(G.order).items():
        P = sylow_subgroup(G, p)
        assert P.order == p**e
        assert G.order % p_core(G, p).order == 0


# ---------------------------------------------------------------- quotients

def test_quotient_examples():
    S4 = symmetric(4)
    V = fitting_subgroup(S4)
    Q = quotient(S4, V)
    assert Q.group.order == 6 and not Q.group.is_abelian()
    g, h = Perm.from_cycles([(0, 1, 2)], 4), Perm.from_cycles([(0, 1)], 4)
    assert Q.project(g * h) == Q.project(g) * Q.project(h)
    assert all(Q.project(v).is_identity() for v in V.members)
    with pytest.raises(FiniteGroupError):
        quotient(S4, subgroup(S4, [h]))


# ---------------------------------------------------------------- p-group bounds

@pytest.mark.parametrize("name,G", p_groups(), ids=[n for n, _ in p_groups()])
def test_lemma31_catalog(name, G):
    rep = lemma31_check(G)
    assert rep.holds and rep.order >= rep.bound


@pytest.mark.parametrize("p", [2, 3, 5])
def test_lemma31_equality_unitriangular(p):
    rep = lemma31_check(unitriangular(p))
    assert rep.step_length == 2 and rep.order == rep.bound == p**3


def test_lemma31_rejects_non_p_group():
    with pytest.raises(FiniteGroupError):
        lemma31_check(symmetric(3))


def test_prop32_examples():
    D6 = dihedral(6)
    r = next(g for g in D6.generators if g.order() == 6)
    res = prop32_reduce(D6, r)
    assert res.prime == 2 and res.kernel.order == 3 and res.quotient.order == 4
    assert res.image.order() == 2
    res = prop32_reduce(D6, r ** 2)
    assert res.prime == 3 and not res.image.is_identity()
    with pytest.raises(FiniteGroupError):
        prop32_reduce(D6, next(g for g in D6.elements if g.order() == 2 and g not in fitting_subgroup(D6).members))


@pytest.mark.parametrize("name,G", solvable_groups(), ids=[n for n, _ in solvable_groups()])
def test_prop32_on_every_fitting_element(name, G):
    for h in fitting_subgroup(G).members:
        if h.is_identity():
            continue
        res = prop32_reduce(G, h)
        assert is_prime_power(fitting_subgroup(res.quotient).order) == res.prime
        assert not res.image.is_identity()
        assert res.project(h) == res.image
        assert G.order == res.kernel.order * res.quotient.order


def test_prop43_unitriangular():
    for p in (3, 5):
        U = unitriangular(p)
        z = next(g for g in lower_central_series(U).terms[1].members if not g.is_identity())
        rep = prop43_check(U, z, 2)
        assert rep.holds and rep.bound == p**3
    A4 = alternating4()
    v = next(g for g in fitting_subgroup(A4).members if not g.is_identity())
    assert prop43_check(A4, v, 1).bound == 2
