from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brinkmann.words import (
    Word,
    WordSyntaxError,
    canonical_cyclic,
    conjugate_by,
    conjugate_power_index,
    conjugating_powers,
    conjugator,
    cyclic_core,
    exponent_sum,
    format_word,
    free_reduce,
    invert,
    is_conjugate,
    multiply,
    parse_word,
    power_index,
    prefix_distance,
    primitive_root,
    product,
    weighted_exponent,
)

from support import naive_conjugate


def w(text: str, rank: int = 2) -> Word:
    return parse_word(text, rank)


letters2 = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=14)
words2 = letters2.map(lambda xs: free_reduce(2, xs))


@pytest.mark.parametrize(
    "raw, expected",
    [("a A b", "b"), ("", ""), ("a b B A", "")],
)
def test_free_reduce_examples(raw, expected):
    assert w(raw) == w(expected)


def test_group_operations():
    assert multiply(w("ab"), w("BA")) == w("")
    assert invert(w("ab")) == w("BA")
    assert conjugate_by(w("b"), w("a")) == w("Aba")


@pytest.mark.parametrize("u, core, conj", [("abA", "b", "a"), ("ab", "ab", ""), ("Aba", "b", "A")])
def test_cyclic_core(u, core, conj):
    assert cyclic_core(w(u)) == (w(core), w(conj))


@pytest.mark.parametrize("u, v, expected", [("ab", "ba", True), ("a", "b", False), ("abA", "b", True)])
def test_is_conjugate(u, v, expected):
    assert is_conjugate(w(u), w(v)) is expected


def test_power_indices():
    assert power_index(w("aaa"), w("a")) == 3
    assert power_index(w("AA"), w("a")) == -2
    assert power_index(w("aab"), w("ab")) is None
    assert conjugate_power_index(w("baB"), w("a")) == 1
    assert conjugate_power_index(w("bAAB"), w("a")) == -2
    assert conjugate_power_index(w("ab"), w("a")) is None


def test_exponent_functionals():
    assert exponent_sum(w("abA"), 1) == 0
    assert weighted_exponent(w("abA"), (2, 3)) == 3
    assert weighted_exponent(w(""), (2, 3)) == 0


def test_prefix_distance():
    assert prefix_distance(w("ab"), w("ab")) == 0
    assert prefix_distance(w("ab"), w("aB")) == Fraction(1, 2)
    assert prefix_distance(w("ab"), w("ba")) == 1


def test_primitive_root():
    assert primitive_root(w("abab")) == (w("ab"), 2)
    assert primitive_root(w("a")) == (w("a"), 1)
    assert primitive_root(w("abAabAabA")) == (w("abA"), 3)


def test_parse_errors_carry_positions():
    with pytest.raises(WordSyntaxError) as info:
        parse_word("ab?", 2)
    assert info.value.position == 2
    with pytest.raises(WordSyntaxError):
        parse_word("c", 2)


def test_indexed_round_trip():
    u = w("a1 B2 a1 a1", 3)
    assert parse_word(format_word(u, "a"), 3, "a") == u


@given(words2, words2, words2)
def test_multiplication_is_associative(x, y, z):
    assert multiply(multiply(x, y), z) == multiply(x, multiply(y, z))


@given(words2)
def test_inverse_cancels(x):
    assert multiply(x, invert(x)) == Word(2, ())
    assert free_reduce(2, x.letters) == x


@given(words2, words2)
def test_canonical_form_is_a_conjugacy_invariant(x, g):
    assert canonical_cyclic(conjugate_by(x, g)) == canonical_cyclic(x)


@given(words2, words2)
def test_conjugacy_agrees_with_rotation_oracle(x, y):
    assert is_conjugate(x, y) == naive_conjugate(x, y)
    c = conjugator(x, y)
    if c is not None:
        assert conjugate_by(x, c) == y


@given(words2.filter(bool), st.integers(1, 5))
def test_primitive_root_reconstructs(x, e):
    root, k = primitive_root(x**e)
    assert root**k == x**e
    assert primitive_root(root) == (root, 1)


@settings(max_examples=200)
@given(words2.filter(bool), words2, words2)
def test_conjugating_powers_match_search(c, x, z):
    got = conjugating_powers(c, x, z)
    hits = [j for j in range(-12, 13) if product(2, (c ** -j, x, c**j)) == z]
    if got is None:
        assert len(hits) == 25
    else:
        assert sorted(j for j in got if -12 <= j <= 12) == hits
