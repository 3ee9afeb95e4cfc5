from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fbcinv.alexander import alexander_norm, alexander_polynomial
from fbcinv.corpus import named, random_direction, random_injective
from fbcinv.hnn import Character, HnnGroup
from fbcinv.l2 import L2Engine, engine_for, thurston_width
from fbcinv.novikov import NoAdmissiblePivot, Undetermined
from fbcinv.polytopes import IntPolytope


def same_shape(P: IntPolytope, vertices) -> bool:
    return P.normalized() == IntPolytope(vertices).normalized()


@pytest.fixture(scope="module")
def g3_engine():
    return engine_for(named("g3"))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_identity_polytope_is_a_t_segment(n):
    res = engine_for(named(f"id{n}")).polytope()
    assert res.verified and not res.virtual_only
    assert same_shape(res.polytope, [(0,) * (n + 1), (0,) * n + (n - 1,)])


@pytest.mark.parametrize("k", [1, 2, 3, -1, -2])
def test_conjugation_polytope(k):
    P = engine_for(named(f"conj{k}")).polytope().polytope
    flipped = IntPolytope([tuple(-x for x in v) for v in P.vertices])
    seg = [(0, 0, 0), (k, 0, 1)]
    assert same_shape(P, seg) or same_shape(flipped, seg)


def test_g3_triangle(g3_engine):
    res = g3_engine.polytope()
    assert res.verified
    assert same_shape(res.polytope, [(0, 0), (2, 1), (0, 2)])


def test_g3_widths(g3_engine):
    assert g3_engine.width(Character((0, 1))) == 2
    assert g3_engine.width(Character((1, 0))) == 2
    assert g3_engine.width(Character((Fraction(1, 2), 0))) == 1
    assert g3_engine.width((0, 0)) == 0


def test_identity_three_fibre_width():
    psi = Character((0, 0, 0, 1))
    assert thurston_width(named("id3"), psi) == 2
    assert alexander_norm(alexander_polynomial(HnnGroup(named("id3"))), psi) == 2


def test_fibre_degree_fallback_is_used_for_minus_psi():
    eng = L2Engine(HnnGroup(named("id3")))
    s = eng.sample((0, 0, 0, -1))
    assert eng.fox_matrix_full()
    assert s.value == -2


@settings(max_examples=40, deadline=None)
@given(st.tuples(st.integers(-5, 5), st.integers(-5, 5)),
       st.tuples(st.integers(-5, 5), st.integers(-5, 5)))
def test_g3_width_is_a_seminorm(u, v):
    eng = engine_for(named("g3"))
    wu, wv = eng.width(u), eng.width(v)
    assert wu >= 0
    assert eng.width(tuple(a + b for a, b in zip(u, v))) <= wu + wv
    assert eng.width(tuple(-a for a in u)) == wu
    assert eng.width(tuple(3 * a for a in u)) == 3 * wu


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["id2", "conj2", "ba", "g3"]), st.data())
def test_support_value_is_chart_independent(name, data):
    eng = engine_for(named(name))
    chi = tuple(data.draw(st.integers(-4, 4)) for _ in range(eng.r))
    values = set()
    for s in eng.charts(chi):
        try:
            values.add(eng.sample_in_chart(chi, s).value)
        except (NoAdmissiblePivot, Undetermined, ZeroDivisionError):
            continue
    assert len(values) <= 1


def test_g3_alexander_width_equals_l2_width(g3_engine):
    alex = alexander_polynomial(HnnGroup(named("g3")))
    rng = random.Random(5)
    for _ in range(50):
        phi = Character(random_direction(rng, 2))
        assert alexander_norm(alex, phi) == g3_engine.width(phi)


def test_alexander_bounded_by_thurston_on_random_maps():
    rng = random.Random(17)
    for _ in range(8):
        G = HnnGroup(random_injective(rng, 2, 4))
        eng = L2Engine(G)
        alex = alexander_polynomial(G)
        for _ in range(10):
            phi = Character(random_direction(rng, G.ab.r))
            lhs = alexander_norm(alex, phi)
            if G.ab.r == 1:
                lhs -= abs(phi.t_value)
            assert lhs <= eng.width(phi)
