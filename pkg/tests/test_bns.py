from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from fbcinv.bns import (
    SigmaReport,
    bns_components,
    bns_membership_f2,
    build_chart,
    positive_bases,
    sigma_member,
)
from fbcinv.corpus import named, random_direction, random_injective
from fbcinv.groupring import build_A
from fbcinv.hnn import Character, HnnGroup
from fbcinv.novikov import GroupContext, matrix_invertible
from fbcinv.polytopes import primitive
from fbcinv.words import parse_endomorphism

CONJ = {k: HnnGroup(named("id2") if k == 0 else named(f"conj{k}")) for k in (0, 1, 2, -1)}


def test_identity_chart_element(id2):
    v = bns_membership_f2(id2, Character((1, 1, 1)))
    assert v.E == {id2.identity: 1, id2.t: -1}
    assert v.inside


@pytest.mark.parametrize("vals, inside", [
    ((1, 1, 1), True), ((1, 1, -1), True), ((0, 1, 2), True),
    ((1, 1, 0), False), ((1, 0, 0), False), ((-2, 3, 0), False),
])
def test_identity_membership(id2, vals, inside):
    assert sigma_member(id2, Character(vals)) is inside


def test_psi_directions():
    G = HnnGroup(named("ba"))
    assert bns_membership_f2(G, Character((0, 1))).inside
    # b -> ba is onto, so psi itself is in as well
    assert bns_membership_f2(G, Character((0, -1))).inside
    squares = HnnGroup(parse_endomorphism("rank: 2\na -> a a\nb -> b\n"))
    assert not bns_membership_f2(squares, Character((0, -1))).inside


@pytest.mark.parametrize("k", sorted(CONJ))
def test_conjugation_walls(k):
    G = CONJ[k]
    rng = random.Random(k)
    for _ in range(30):
        a, b = rng.randint(-4, 4), rng.randint(-4, 4)
        on_wall = (a, b, -k * a)
        if any(on_wall):
            assert not sigma_member(G, Character(on_wall))
        vals = random_direction(rng, 3)
        assert sigma_member(G, Character(vals)) is (vals[2] + k * vals[0] != 0)


@pytest.mark.parametrize("k", sorted(CONJ))
def test_component_count(k):
    report = bns_components(CONJ[k])
    out = [p for p in report.pieces if not p.inside]
    assert report.components == 2
    assert len(out) == 2 and all(p.kind == "ray" for p in out)


def test_g3_needs_rank_two(g3):
    with pytest.raises(ValueError):
        bns_components(g3)


def test_report_json_round_trip():
    report = bns_components(CONJ[2])
    data = json.loads(json.dumps(report.to_dict()))
    assert SigmaReport.from_dict(data) == report


def test_positive_bases_make_both_letters_positive():
    for fa, fb in [(1, 1), (-2, 3), (0, -1), (5, -7), (-1, 0)]:
        for x, y in positive_bases(fa, fb, extra=2):
            val = {1: fa, 2: fb}

            def phi(w):
                return sum((1 if s > 0 else -1) * val[abs(s)] for s in w)

            assert phi(x) > 0 and phi(y) > 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_charts_are_free_bases(seed):
    rng = random.Random(seed)
    g = random_injective(rng, 2, 3)
    fa, fb = rng.randint(-3, 3), rng.randint(-3, 3)
    if fa == fb == 0:
        return
    chart = build_chart(g, positive_bases(fa, fb)[0])
    assert chart.g_new.rank == 2


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_ray_test_agrees_with_novikov_elimination(seed):
    # [-phi] in Sigma iff A(g; S, s) is invertible over the Novikov ring of chi = phi
    rng = random.Random(seed)
    G = HnnGroup(random_injective(rng, 2, 3))
    vals = random_direction(rng, G.ab.r)
    phi = Character(vals)
    chi = primitive(vals)
    ctx = GroupContext(G, chi)
    for s in ("t", 1, 2):
        val = phi.t_value if s == "t" else phi(G.ab.project((s,)))
        if val == 0:
            continue
        verdict = matrix_invertible(ctx, build_A(G, s))
        if verdict == "unknown":
            continue
        assert (verdict == "yes") is bns_membership_f2(G, phi).inside
        return
