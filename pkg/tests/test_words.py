from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from fbcinv.words import (
    EMPTY,
    Endomorphism,
    RankError,
    WordSyntaxError,
    fn_add,
    fn_multiply,
    fold_subgroup,
    format_word,
    fox_derivative,
    fundamental_formula_check,
    identity_map,
    invert,
    is_injective,
    is_surjective,
    multiply,
    parse_endomorphism,
    parse_word,
    reduce_word,
)


def words(n: int = 3, max_size: int = 40):
    letters = st.integers(1, n).flatmap(lambda i: st.sampled_from([i, -i]))
    return st.lists(letters, max_size=max_size).map(reduce_word)


def evaluate(expr, gens):
    out = EMPTY
    for x in expr:
        w = gens[abs(x) - 1]
        out = multiply(out, w if x > 0 else invert(w))
    return out


# -- parsing --------------------------------------------------------------------------

def test_parse_reduces_adjacent_inverses():
    assert parse_word("a A b", 2) == (2,)
    assert parse_word("a b A", 2) == (1, 2, -1)


def test_parse_empty_and_identity():
    assert parse_word("", 2) == EMPTY
    assert parse_word("1", 2) == EMPTY


def test_parse_out_of_range():
    with pytest.raises(RankError):
        parse_word("c B", 2)


def test_parse_syntax_error_has_position():
    with pytest.raises(WordSyntaxError) as info:
        parse_word("a b ?", 2)
    assert info.value.position == 4


def test_letter_runs():
    assert parse_word("abA", 2) == parse_word("a b A", 2)


@given(words())
def test_format_parse_round_trip(w):
    assert parse_word(format_word(w, empty=""), 3) == w


def test_endomorphism_file_round_trip():
    text = "rank: 3\na -> b\nb -> c  # comment\nc -> a b c B C\n"
    g = parse_endomorphism(text)
    assert g.images == ((2,), (3,), (1, 2, 3, -2, -3))
    assert parse_endomorphism(g.format()) == g


@pytest.mark.parametrize("text", ["a -> b\n", "rank: 2\na -> b\n", "rank: 2\na -> b\na -> a\nb -> a\n",
                                  "rank: 2\nc -> a\n"])
def test_endomorphism_file_errors(text):
    with pytest.raises(ValueError):
        parse_endomorphism(text)


# -- products -------------------------------------------------------------------------

def test_multiply_examples():
    assert multiply((1, 2), (-2, -1)) == EMPTY
    assert multiply((1,), (2,)) == (1, 2)
    assert multiply((1, 2), (-2, 3)) == (1, 3)


@given(words(), words())
def test_product_laws(u, v):
    assert multiply(u, invert(u)) == EMPTY
    assert len(multiply(u, v)) <= len(u) + len(v)
    assert reduce_word(multiply(u, v)) == multiply(u, v)


# -- Fox calculus ---------------------------------------------------------------------

def test_fox_examples():
    assert fox_derivative((1, 2), 1) == {EMPTY: 1}
    assert fox_derivative((-1,), 1) == {(-1,): -1}
    # d(a b c B C)/db = a - a b c B
    assert fox_derivative((1, 2, 3, -2, -3), 2) == {(1,): 1, (1, 2, 3, -2): -1}


def test_fundamental_formula_examples():
    assert fundamental_formula_check(EMPTY, 2)
    assert fundamental_formula_check((1, 2, 3, -2, -3), 3)


@settings(max_examples=300)
@given(words(4, 40))
def test_fundamental_formula(w):
    assert fundamental_formula_check(w, 4)


@given(words(), words(), st.integers(1, 3))
def test_fox_product_rule(u, v, i):
    lhs = fox_derivative(multiply(u, v), i)
    rhs = fn_add(fox_derivative(u, i), fn_multiply({u: 1}, fox_derivative(v, i)))
    assert lhs == rhs


# -- folding --------------------------------------------------------------------------

def test_fold_free_basis():
    fg = fold_subgroup([(1,), (2,)])
    assert fg.rank == 2 and fg.is_basis
    assert fg.contains((1, -2, 1, 1))


def test_fold_index_two_subgroup():
    fg = fold_subgroup([(1, 1), (2,)])
    assert not fg.contains((1,))
    assert fg.contains((1, 1, 2))


def test_g3_images_fold_to_rank_three():
    g = parse_endomorphism("rank: 3\na -> b\nb -> c\nc -> a b c B C\n")
    assert fold_subgroup(g.images).rank == 3
    assert is_injective(g) and is_surjective(g)


def test_preimage_of_non_member():
    with pytest.raises(ValueError):
        fold_subgroup([(1, 1), (2,)]).preimage((1,))


@given(st.lists(words(2, 6).filter(bool), min_size=1, max_size=3),
       st.lists(st.integers(-3, 3).filter(bool), max_size=6))
def test_preimage_reproduces_member(gens, expr):
    expr = [x for x in expr if abs(x) <= len(gens)]
    w = evaluate(expr, gens)
    fg = fold_subgroup(gens)
    assert fg.contains(w)
    assert evaluate(fg.preimage(w), gens) == w


def _nielsen(rng_moves, n):
    g = identity_map(n)
    for i, j, s in rng_moves:
        i, j = i % n, j % n
        if i == j:
            continue
        images = list(g.images)
        images[i] = multiply(images[i], images[j] if s else invert(images[j]))
        g = Endomorphism(n, tuple(images))
    return g


@given(st.integers(2, 4), st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.booleans()),
                                   max_size=8))
def test_nielsen_automorphisms_are_injective(n, moves):
    g = _nielsen(moves, n)
    fg = fold_subgroup(g.images)
    assert fg.rank == n and is_surjective(g)


@given(st.integers(2, 4), words(4, 6))
def test_repeated_image_is_not_injective(n, w):
    w = tuple(x for x in w if abs(x) <= n) or (1,)
    w = reduce_word(w) or (1,)
    images = [w, w] + [(i,) for i in range(3, n + 1)]
    assert not is_injective(Endomorphism(n, tuple(images)))
