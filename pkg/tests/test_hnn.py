from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fbcinv.corpus import named
from fbcinv.hnn import (
    Character,
    CharacterError,
    HnnElement,
    HnnGroup,
    abelianize,
    parse_character,
)
from fbcinv.words import Endomorphism, parse_endomorphism

GROUPS = {name: HnnGroup(named(name)) for name in ("id2", "g3", "ba", "conj2")}


def elements(G: HnnGroup, max_len: int = 8):
    gens = [G.gen(i) for i in range(1, G.n + 1)] + [G.t]
    atoms = st.sampled_from(gens + [G.inverse(x) for x in gens])
    return st.lists(atoms, max_size=max_len).map(lambda xs: G.product(*xs))


group_names = st.sampled_from(sorted(GROUPS))


def test_normalize_defining_relation(g3):
    assert g3.normalize(1, g3.g((1,)), 1) == HnnElement(0, (1,), 0)


def test_normalize_through_preimage(ba):
    assert ba.normalize(1, (2, 1), 1) == HnnElement(0, (2,), 0)


def test_direct_product_case(id2):
    ta = id2.mul(id2.t, id2.gen(1))
    assert ta == HnnElement(1, (1,), 0)
    assert id2.mul(id2.gen(1), id2.t) == ta


def test_conjugation_by_t(g3):
    assert g3.product(g3.t_inv, g3.gen(1), g3.t) == HnnElement(0, (2,), 0)


def test_britton_reduction_keeps_non_image():
    G = HnnGroup(parse_endomorphism("rank: 2\na -> a a\nb -> b b\n"))
    x = G.product(G.t, G.gen(1), G.t_inv)
    y = G.product(G.t, G.gen(2), G.t_inv)
    assert G.mul(x, y) == HnnElement(1, (1, 2), 1)


def test_non_injective_rejected():
    with pytest.raises(ValueError):
        HnnGroup(Endomorphism(2, ((1,), (1,))))


@settings(max_examples=60)
@given(st.data(), group_names)
def test_associativity(data, name):
    G = GROUPS[name]
    x, y, z = (data.draw(elements(G)) for _ in range(3))
    assert G.mul(G.mul(x, y), z) == G.mul(x, G.mul(y, z))


@settings(max_examples=60)
@given(st.data(), group_names)
def test_inverse_and_idempotent_normal_form(data, name):
    G = GROUPS[name]
    x = data.draw(elements(G))
    assert G.normalize(*x) == x
    assert G.mul(x, G.inverse(x)) == G.identity


@settings(max_examples=60)
@given(st.data(), group_names)
def test_relation_holds_for_all_words(data, name):
    G = GROUPS[name]
    w = data.draw(st.lists(st.sampled_from([1, -1, 2, -2]), max_size=6))
    x = G.word(tuple(w))
    x = G.normalize(*x)
    lhs = G.mul(x, G.t)
    rhs = G.mul(G.t, G.normalize(0, G.g(x.w), 0))
    assert lhs == rhs


@given(st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=8))
def test_automorphism_bounds_t_powers(letters):
    G = GROUPS["g3"]
    x = G.product(*[G.gen(abs(s)) if s > 0 else G.inverse(G.gen(abs(s))) for s in letters])
    assert x.p <= len(letters) and x.q <= len(letters)


# -- abelianization -------------------------------------------------------------------

def test_abelianize_identity():
    ab = abelianize(named("id2"))
    assert ab.r == 3 and ab.labels == ("a", "b", "t")


def test_abelianize_g3():
    ab = abelianize(named("g3"))
    assert ab.r == 2 and ab.labels == ("a", "t")
    assert ab.project((1,)) == ab.project((2,)) == ab.project((3,)) == (1, 0)


def test_abelianize_ba():
    ab = abelianize(named("ba"))
    assert ab.r == 2 and ab.labels == ("b", "t")
    assert ab.project((1,)) == (0, 0)


def test_torsion_is_discarded():
    ab = abelianize(parse_endomorphism("rank: 2\na -> a\nb -> b a a\n"))
    assert ab.torsion == (2,)
    assert ab.r == 2


# -- characters -----------------------------------------------------------------------

def test_evaluate_examples(g3):
    assert Character((0, 1)).on_element(g3, g3.pow(g3.t, 2)) == 2
    phi = parse_character("phi: a=1, t=0", g3.ab)
    assert phi.on_element(g3, g3.gen(3)) == 1


def test_character_requires_t(g3):
    with pytest.raises(CharacterError):
        parse_character("a=1", g3.ab)


def test_character_relation_violation(g3):
    with pytest.raises(CharacterError, match="violated"):
        parse_character("a=1, b=2, c=1, t=0", g3.ab)


def test_character_underdetermined(id2):
    with pytest.raises(CharacterError):
        parse_character("a=1, t=0", id2.ab)


def test_character_rationals(id2):
    phi = parse_character("phi: a=1/2, b=-3, t=2", id2.ab)
    assert phi.values == (Fraction(1, 2), -3, 2)
    assert phi.format(id2.ab) == "phi: a=1/2, b=-3, t=2"
    assert Character.from_dict(phi.to_dict(id2.ab)) == phi


@settings(max_examples=100)
@given(st.data(), group_names)
def test_character_is_homomorphism(data, name):
    G = GROUPS[name]
    phi = Character(tuple(data.draw(st.integers(-5, 5)) for _ in range(G.ab.r)))
    x, y = data.draw(elements(G)), data.draw(elements(G))
    assert phi.on_element(G, G.mul(x, y)) == phi.on_element(G, x) + phi.on_element(G, y)
    comm = G.product(x, y, G.inverse(x), G.inverse(y))
    assert phi.on_element(G, comm) == 0
