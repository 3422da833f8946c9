import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brinkmann.decision import BoundExceeded, Found, Refuted
from brinkmann.freeorbit import OracleConfig
from brinkmann.linear import LinearPart
from brinkmann.maps import FreeMap, ProductElement, apply, parse_element, parse_endo
from brinkmann.twosided import PairSetReport, compute_pair_solution_set, tcp, two_brcp
from brinkmann.words import Word, invert, parse_word, product

from support import conjugated, naive_conjugate, naive_product_conjugate, random_element, random_endo, random_word

IDENTITY = "2 2\na1 -> a1 | 1\na2 -> a2 | 1\nb1 -> 1 | b1\nb2 -> 1 | b2\n"
FACTOR_SWAP = "2 2\na1 -> 1 | b1\na2 -> 1 | b2\nb1 -> a1 | 1\nb2 -> a2 | 1\n"
NIELSEN = "2 2\na1 -> a1 a2 | 1\na2 -> a2 | 1\nb1 -> 1 | b1 b2\nb2 -> 1 | b2\n"


def w(text: str) -> Word:
    return parse_word(text, 2)


def el(text: str) -> ProductElement:
    return parse_element(text, 2, 2)


def _iterate(f, x, k):
    for _ in range(k):
        x = apply(f, x)
    return x


def test_pair_set_identity():
    rep = compute_pair_solution_set(FreeMap(2, 2, (w("a"), w("b"))), w("ab"), w("ba"))
    assert isinstance(rep, PairSetReport)
    assert (rep.r1, rep.s1, rep.q_z, rep.p_z) == (0, 0, 0, 1)
    assert all((p, q) in rep.solutions for p in range(6) for q in range(6))


def test_pair_set_swap_matches_enumeration():
    swap = FreeMap(2, 2, (w("b"), w("a")))
    rep = compute_pair_solution_set(swap, w("a"), w("b"))
    assert (rep.r1, rep.s1, rep.p_z) == (0, 1, 2)
    for p in range(21):
        for q in range(21):
            direct = naive_conjugate(_iterate(swap, w("a"), p), _iterate(swap, w("b"), q))
            assert ((p, q) in rep.solutions) == direct


PAIR_MAPS = [("a", "b"), ("b", "a"), ("A", "b"), ("b", "A"), ("ab", "b"), ("bA", "a"), ("B", "aB"), ("aa", "b"), ("bab", "b")]


@settings(max_examples=120, deadline=None)
@given(st.sampled_from(PAIR_MAPS), st.integers(0, 10**6))
def test_pair_sets_match_enumeration(images, seed):
    rng = random.Random(seed)
    f = FreeMap(2, 2, tuple(w(t) for t in images))
    x = random_word(rng, 2, 4, 1)
    z = x if rng.random() < 0.3 else random_word(rng, 2, 4, 1)
    for _ in range(rng.randint(0, 3)):
        z = apply(f, z)
    rep = compute_pair_solution_set(f, x, z)
    if isinstance(rep, BoundExceeded):
        return
    xs = [_iterate(f, x, p) for p in range(10)]
    zs = [_iterate(f, z, q) for q in range(10)]
    direct = {(p, q) for p in range(10) for q in range(10) if naive_conjugate(xs[p], zs[q])}
    assert rep.solutions.members_upto(9, 9) == direct
    if direct:
        assert (rep.r1, rep.s1) == min(direct)


def test_pair_set_diagonal_segment_case():
    # z reaches its periodic class only after two steps: a -> b -> b, and x = b
    f = FreeMap(2, 2, (w("bab"), w("b")))
    assert compute_pair_solution_set(f, w("b"), w("b")).solutions.linear


def test_pair_set_growing_orbits():
    f = FreeMap(2, 2, (w("ab"), w("b")))
    rep = compute_pair_solution_set(f, w("a"), w("aB"))
    assert isinstance(rep, (PairSetReport, BoundExceeded))
    if isinstance(rep, PairSetReport):
        for p in range(8):
            for q in range(8):
                direct = naive_conjugate(_iterate(f, w("a"), p), _iterate(f, w("aB"), q))
                assert ((p, q) in rep.solutions) == direct


def test_pair_set_refuses_non_injective():
    with pytest.raises(ValueError):
        compute_pair_solution_set(FreeMap(2, 2, (w("a"), w("a"))), w("a"), w("b"))


def test_two_brcp_examples():
    phi = parse_endo(IDENTITY)
    assert two_brcp(phi, el("a1|b1"), el("a1|b1")) == Found((0, 0))
    phi = parse_endo(NIELSEN)
    g = el("a1|b1")
    d = two_brcp(phi, phi.apply(g), g)
    assert isinstance(d, Found)
    r, s = d.witness
    assert naive_product_conjugate(phi.power_apply(phi.apply(g), r), phi.power_apply(g, s))
    assert r == 0 and s == 1


def test_two_brcp_refuses_non_injective():
    phi = parse_endo("2 2\na1 -> a1 | 1\na2 -> a1 | 1\nb1 -> 1 | b1\nb2 -> 1 | b2\n")
    with pytest.raises(ValueError):
        two_brcp(phi, el("a1|b1"), el("a1|b1"))


def test_two_brcp_tiny_budget_is_undecided():
    phi = parse_endo(NIELSEN)
    d = two_brcp(phi, el("a1|b1"), el("a1 a2 a2 a2 a2 a2 a2|b1 b2 b2 b2 b2 b2 b2"), OracleConfig(max_steps=2))
    assert isinstance(d, BoundExceeded)


def test_two_brcp_type_VII_quadrants_against_sweep():
    rng = random.Random(21)
    for _ in range(40):
        phi = random_endo(rng, "VII")
        g = random_element(rng, max_len=3)
        h = conjugated(rng, phi.power_apply(g, rng.randint(0, 3))) if rng.random() < 0.6 else random_element(rng, max_len=3)
        d = two_brcp(phi, g, h)
        G = [phi.power_apply(g, r) for r in range(12)]
        H = [phi.power_apply(h, s) for s in range(12)]
        hits = [(r, s) for r in range(12) for s in range(12) if naive_product_conjugate(G[r], H[s])]
        if isinstance(d, Refuted):
            assert not hits
        elif isinstance(d, Found) and hits:
            assert d.witness <= min(hits)


def _twisted(phi, c, h):
    left = phi.apply(c.inverse())
    return ProductElement(
        product(2, (left.first, h.first, c.first)),
        product(2, (left.second, h.second, c.second)),
    )


def test_tcp_examples():
    phi = parse_endo(IDENTITY)
    g, h = el("a1|b2"), el("a2 a1 A2|b1 b2 B1")
    d = tcp(phi, g, h)
    assert isinstance(d, Found) and _twisted(phi, d.witness, h) == g
    d = tcp(parse_endo(NIELSEN), el("a1 a2|b1"), el("a1 a2|b1"))
    assert isinstance(d, Found) and d.witness == el("1|1")


def test_tcp_type_VII_identity_components():
    phi = parse_endo(FACTOR_SWAP)
    rng = random.Random(5)
    for _ in range(30):
        h = random_element(rng, max_len=3)
        c = random_element(rng, max_len=3)
        g = _twisted(phi, c, h)
        d = tcp(phi, g, h)
        assert isinstance(d, Found) and _twisted(phi, d.witness, h) == g
