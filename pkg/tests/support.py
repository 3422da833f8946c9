"""Random instance generators and literal-iteration oracles shared by the tests."""

from __future__ import annotations

import random

from brinkmann.maps import FreeMap, ProductElement, ProductEndo, TypeData, rebuild
from brinkmann.words import Word, canonical_cyclic, free_reduce, invert, multiply, product

N = M = 2
ORACLE_STEPS = 100
# iterates longer than this are not followed by the brute-force oracle
ORACLE_CAP = 4000

# one summary line per acceptance criterion, printed by conftest
ACCEPTANCE_LINES: list[str] = []


def report(number: int, title: str, passed: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {title}  ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)


def random_word(rng: random.Random, rank: int, max_len: int, min_len: int = 0) -> Word:
    length = rng.randint(min_len, max_len)
    letters: list[int] = []
    while len(letters) < length:
        x = rng.choice([i for i in range(-rank, rank + 1) if i])
        if letters and letters[-1] == -x:
            continue
        letters.append(x)
    return Word(rank, tuple(letters))


def nielsen_map(rng: random.Random, rank: int, moves: int = 3) -> FreeMap:
    """Composite of at most ``moves`` elementary Nielsen moves on ``F_rank``."""
    imgs = [Word(rank, (i,)) for i in range(1, rank + 1)]
    for _ in range(rng.randint(0, moves)):
        kind = rng.randrange(4)
        i = rng.randrange(rank)
        if kind == 0 and rank > 1:
            j = rng.choice([t for t in range(rank) if t != i])
            e = imgs[j] if rng.random() < 0.5 else invert(imgs[j])
            imgs[i] = multiply(imgs[i], e) if rng.random() < 0.5 else multiply(e, imgs[i])
        elif kind == 1:
            imgs[i] = invert(imgs[i])
        elif kind == 2 and rank > 1:
            j = rng.choice([t for t in range(rank) if t != i])
            imgs[i], imgs[j] = imgs[j], imgs[i]
        else:
            j = rng.randrange(rank)
            imgs[i] = multiply(imgs[i], imgs[j]) if i != j else imgs[i]
    return FreeMap(rank, rank, tuple(imgs))


def _vec(rng: random.Random, size: int) -> tuple[int, ...]:
    while True:
        v = tuple(rng.randint(-3, 3) for _ in range(size))
        if any(v):
            return v


def random_endo(rng: random.Random, tag: str, n: int = N, m: int = M) -> ProductEndo:
    if tag in ("I", "III"):
        u = random_word(rng, n, 4, 1)
    if tag in ("I", "II", "V"):
        v = random_word(rng, m, 4, 1)
    if tag == "I":
        data = TypeData(tag, u=u, v=v, P=_vec(rng, n), Q=_vec(rng, n), R=_vec(rng, m), S=_vec(rng, m))
    elif tag == "II":
        data = TypeData(tag, v=v, Q=_vec(rng, n), S=_vec(rng, m), phi=nielsen_map(rng, m))
    elif tag == "III":
        data = TypeData(tag, u=u, P=_vec(rng, n), R=_vec(rng, m), phi=nielsen_map(rng, m))
    elif tag == "IV":
        data = TypeData(tag, phi=nielsen_map(rng, m), psi=nielsen_map(rng, m))
    elif tag == "V":
        data = TypeData(tag, v=v, Q=_vec(rng, n), S=_vec(rng, m))
    elif tag in ("VI", "VII"):
        data = TypeData(tag, phi=nielsen_map(rng, n), psi=nielsen_map(rng, m))
    else:
        raise ValueError(tag)
    phi = rebuild(data, n, m)
    assert phi.tag == tag, (tag, phi.tag)
    return phi


def random_element(rng: random.Random, n: int = N, m: int = M, max_len: int = 6) -> ProductElement:
    return ProductElement(random_word(rng, n, max_len), random_word(rng, m, max_len))


def conjugated(rng: random.Random, g: ProductElement) -> ProductElement:
    a = random_word(rng, g.first.rank, 3)
    b = random_word(rng, g.second.rank, 3)
    return ProductElement(product(a.rank, (invert(a), g.first, a)), product(b.rank, (invert(b), g.second, b)))


def random_target(rng: random.Random, phi: ProductEndo, g: ProductElement, conj: bool) -> ProductElement:
    """A third each: a point on the orbit, a structured guess, a random element."""
    roll = rng.random()
    if roll < 0.4:
        cur, pts = g, [g]
        for _ in range(rng.randint(0, 8)):
            cur = phi.apply(cur)
            if cur.length() > 60:
                break
            pts.append(cur)
        h = rng.choice(pts)
    elif roll < 0.7:
        d = phi.type_data
        first = d.u ** rng.randint(-6, 6) if d.u is not None else random_word(rng, phi.n, 4)
        second = d.v ** rng.randint(-6, 6) if d.v is not None else random_word(rng, phi.m, 4)
        if d.tag == "V" and rng.random() < 0.7:
            first = Word(phi.n, ())
        h = ProductElement(first, second)
    else:
        h = random_element(rng, phi.n, phi.m)
    return conjugated(rng, h) if conj else h


def brute_force(phi: ProductEndo, g: ProductElement, h: ProductElement, conj: bool, steps: int = ORACLE_STEPS):
    """``(first_k, horizon)``: the least hit up to ``horizon`` (or None).

    The horizon is where iteration stopped, either at ``steps`` or when an
    iterate grew past the length cap.
    """
    if conj:
        key = lambda e: (canonical_cyclic(e.first), canonical_cyclic(e.second))  # noqa: E731
    else:
        key = lambda e: (e.first, e.second)  # noqa: E731
    target = key(h)
    cur = g
    for k in range(steps + 1):
        if key(cur) == target:
            return k, k
        if k == steps:
            break
        nxt = phi.apply(cur)
        if nxt.length() > ORACLE_CAP:
            return None, k
        cur = nxt
    return None, steps


def free_word_count(rank: int, length: int) -> int:
    return 1 if length == 0 else 2 * rank * (2 * rank - 1) ** (length - 1)


def all_words(rank: int, max_len: int) -> list[Word]:
    """Every reduced word of length at most ``max_len``, shortest first."""
    out = [()]
    layer = [()]
    for _ in range(max_len):
        layer = [w + (x,) for w in layer for x in range(-rank, rank + 1) if x and not (w and w[-1] == -x)]
        out.extend(layer)
    return [Word(rank, w) for w in out]


def naive_conjugate(u: Word, v: Word) -> bool:
    """Conjugacy by stripping both words to cyclic cores and trying every rotation."""

    def core(w):
        a = list(w.letters)
        while len(a) > 1 and a[0] == -a[-1]:
            a = a[1:-1]
        return tuple(a)

    a, b = core(u), core(v)
    if len(a) != len(b):
        return False
    return not a or any(a[i:] + a[:i] == b for i in range(len(a)))


def naive_product_conjugate(g: ProductElement, h: ProductElement) -> bool:
    return naive_conjugate(g.first, h.first) and naive_conjugate(g.second, h.second)


__all__ = [
    "random_word",
    "nielsen_map",
    "random_endo",
    "random_element",
    "random_target",
    "conjugated",
    "brute_force",
    "free_reduce",
    "all_words",
    "naive_conjugate",
    "naive_product_conjugate",
    "report",
    "ACCEPTANCE_LINES",
]
