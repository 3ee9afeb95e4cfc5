from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from fbcinv.corpus import named
from fbcinv.groupring import build_A, gr_multiply
from fbcinv.hnn import HnnGroup
from fbcinv.novikov import (
    FiniteSeries,
    FreeContext,
    GroupContext,
    InverseSeries,
    NotInvertible,
    ProductSeries,
    SumSeries,
    Undetermined,
    eliminate,
    embed,
    invert_series,
    matrix_invertible,
    mu,
    slice_mul,
)
from fbcinv.polytopes import IntPolytope

GROUPS = {name: HnnGroup(named(name)) for name in ("ba", "conj1", "id2", "g3")}


def one_minus_ta2(G):
    return {G.identity: 1, G.mul(G.t, G.word((1, 1))): -1}


def test_grading_of_one_minus_ta2(g3):
    x = one_minus_ta2(g3)
    s = FiniteSeries(GroupContext(g3, (0, 1)), x)
    ta2 = g3.mul(g3.t, g3.word((1, 1)))
    assert (s.low, s.high) == (0, 1)
    assert s.slice(0) == {g3.identity: 1}
    assert s.slice(1) == {ta2: -1}


def test_zero_and_single_level(g3):
    ctx = GroupContext(g3, (0, 1))
    assert FiniteSeries(ctx, {}).is_exact_zero()
    s = FiniteSeries(ctx, {g3.gen(1): 2, g3.gen(2): -1})
    assert s.low == s.high == 0


def test_leading_terms(g3):
    x = one_minus_ta2(g3)
    assert mu(embed(GroupContext(g3, (0, 1)), x)) == {g3.identity: 1}
    ta2 = g3.mul(g3.t, g3.word((1, 1)))
    assert mu(embed(GroupContext(g3, (0, -1)), x)) == {ta2: -1}


def test_zero_series_has_no_leading_term(g3):
    with pytest.raises(ZeroDivisionError):
        FiniteSeries(GroupContext(g3, (0, 1)), {}).leading()


def test_geometric_series_positive():
    ctx = FreeContext(2, (0, 1))
    y_minus_1 = FiniteSeries(ctx, {(2,): 1, (): -1})
    inv = invert_series(y_minus_1)
    for k in range(10):
        assert inv.slice(k) == {(2,) * k: -1}
    prod = ProductSeries(y_minus_1, inv)
    assert [prod.slice(k) for k in range(15)] == [{(): 1}] + [{}] * 14


def test_geometric_series_negative():
    ctx = FreeContext(2, (0, -1))
    inv = invert_series(FiniteSeries(ctx, {(2,): 1, (): -1}))
    level, lead = inv.leading()
    assert lead == {(-2,): 1}
    assert inv.slice(level + 3) == {(-2,) * 4: 1}


def test_invert_group_element(g3):
    ctx = GroupContext(g3, (0, 1))
    inv = invert_series(FiniteSeries(ctx, {g3.t: 1}))
    assert inv.finite and mu(inv) == {g3.t_inv: 1}


def test_non_unit_leading_term_is_not_inverted(g3):
    ctx = GroupContext(g3, (0, 1))
    with pytest.raises(NotInvertible):
        InverseSeries(FiniteSeries(ctx, {g3.identity: 2, g3.t: 1}))


def test_undetermined_past_max_height():
    ctx = FreeContext(1, (1,))
    one_minus_x = FiniteSeries(ctx, {(): 1, (1,): -1})
    # two independently built copies of (1 - x)^-1 differ by a series that
    # vanishes at every level, which no finite search can certify
    diff = SumSeries(InverseSeries(one_minus_x), InverseSeries(one_minus_x), -1)
    assert not diff.is_exact_zero()
    with pytest.raises(Undetermined):
        diff.leading(max_height=12)


def gr_elements(G):
    gens = [G.gen(i) for i in range(1, G.n + 1)] + [G.t]
    atoms = st.sampled_from(gens + [G.inverse(x) for x in gens])
    elt = st.lists(atoms, max_size=3).map(lambda xs: G.product(*xs))
    return st.dictionaries(elt, st.sampled_from([-2, -1, 1, 2]), min_size=1, max_size=4)


@settings(max_examples=60, deadline=None)
@given(st.data(), st.sampled_from(sorted(GROUPS)))
def test_mu_multiplicative(data, name):
    G = GROUPS[name]
    chi = tuple(data.draw(st.integers(-3, 3)) for _ in range(G.ab.r))
    ctx = GroupContext(G, chi)
    x, y = data.draw(gr_elements(G)), data.draw(gr_elements(G))
    assert slice_mul(ctx, mu(embed(ctx, x)), mu(embed(ctx, y))) == \
        mu(embed(ctx, gr_multiply(G, x, y)))


@settings(max_examples=40, deadline=None)
@given(st.data(), st.sampled_from(["ba", "conj1", "id2"]))
def test_unit_laws_to_height_20(data, name):
    G = GROUPS[name]
    chi = tuple(data.draw(st.integers(-3, 3)) for _ in range(G.ab.r))
    ctx = GroupContext(G, chi)
    x = data.draw(gr_elements(G))
    level = min(ctx.level(h) for h in x)
    h0 = next(h for h in x if ctx.level(h) == level)
    u = {h: c for h, c in x.items() if ctx.level(h) > level}
    u[h0] = data.draw(st.sampled_from([1, -1]))
    us = FiniteSeries(ctx, u)
    inv = invert_series(us)
    for prod in (ProductSeries(us, inv), ProductSeries(inv, us)):
        assert [prod.slice(prod.low + m) for m in range(21)] == [{G.identity: 1}] + [{}] * 20


# -- elimination ----------------------------------------------------------------------

def test_scalar_matrix_invertible(id2):
    ctx = GroupContext(id2, (1, 1, 1))
    assert matrix_invertible(ctx, build_A(id2, "t")) == "yes"


def test_identity_not_invertible_on_the_wall(id2):
    ctx = GroupContext(id2, (1, 1, 0))
    assert matrix_invertible(ctx, build_A(id2, 1)) == "no"


def test_elimination_levels_and_faces(id2):
    A = build_A(id2, 1)
    res = eliminate(GroupContext(id2, (1, 1, 1)), A)
    assert res.level == 0 and res.face == IntPolytope.point(3)
    res = eliminate(GroupContext(id2, (-1, -1, -1)), A)
    assert res.level == -2 and res.face == IntPolytope([(1, 0, 1)])
    res = eliminate(GroupContext(id2, (0, 0, 1)), build_A(id2, "t"))
    assert res.level == 0 and res.face == IntPolytope.point(3)
