import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brinkmann.hnn import AscendingHNN, HnnElement, format_hnn, hnn_equal, hnn_normalize, parse_hnn_word
from brinkmann.maps import parse_element, parse_endo
from brinkmann.words import WordSyntaxError

from support import random_element, random_endo

# a1 -> a1 a1 is injective but not onto, so t g t^-1 does not always reduce
SQUARE = "2 2\na1 -> a1 a1 | 1\na2 -> a2 | 1\nb1 -> 1 | b1\nb2 -> 1 | b2\n"


def el(text: str):
    return parse_element(text, 2, 2)


def test_no_stable_letters():
    phi = parse_endo(SQUARE)
    assert hnn_normalize(phi, "a1 b2") == HnnElement(0, el("a1|b2"), 0)


def test_conjugation_applies_the_map():
    phi = parse_endo(SQUARE)
    assert hnn_normalize(phi, "T a1 a2 t") == HnnElement(0, el("a1 a1 a2|1"), 0)


def test_reduction_only_inside_the_image():
    phi = parse_endo(SQUARE)
    assert hnn_normalize(phi, "t a1 a1 T") == HnnElement(0, el("a1|1"), 0)
    assert hnn_normalize(phi, "t a1 T") == HnnElement(1, el("a1|1"), 1)


def test_word_problem():
    phi = parse_endo(SQUARE)
    e = hnn_normalize(phi, "T a1 t")
    assert hnn_equal(e, hnn_normalize(phi, "a1 a1"))
    assert not hnn_equal(e, hnn_normalize(phi, "a1"))
    assert hnn_equal(e, e)


def test_parse_errors():
    with pytest.raises(WordSyntaxError) as info:
        parse_hnn_word("t a1 x", 2, 2)
    assert info.value.position == 5
    with pytest.raises(WordSyntaxError):
        parse_hnn_word("a3", 2, 2)


def test_non_injective_is_refused():
    phi = parse_endo("2 2\na1 -> a1 | 1\na2 -> a1 | 1\nb1 -> 1 | b1\nb2 -> 1 | b2\n")
    with pytest.raises(ValueError):
        AscendingHNN(phi)


def test_format():
    phi = parse_endo(SQUARE)
    assert format_hnn(hnn_normalize(phi, "t a1 T")) == "t^1 (a1|1) t^-1"


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_related_words_share_a_normal_form(seed):
    rng = random.Random(seed)
    hnn = AscendingHNN(random_endo(rng, rng.choice(["VI", "VII"])))
    word = []
    for _ in range(rng.randint(0, 4)):
        word += [random_element(rng, max_len=2), rng.choice((1, -1))]
    e = hnn.normalize(word)
    rewritten = list(word)
    for _ in range(3):
        g = random_element(rng, max_len=2)
        pos = rng.randint(0, len(rewritten))
        rewritten[pos:pos] = [-1, g, 1, hnn.phi.apply(g).inverse()]
    assert hnn.normalize(rewritten) == e
    other = random_element(rng, max_len=2)
    assert hnn.multiply(e, hnn.normalize([other])) == hnn.normalize(word + [other])
