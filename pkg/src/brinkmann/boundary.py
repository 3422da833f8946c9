"""Medians, coarse-median defect, and rational boundary points.

Rational boundary points are eventually periodic infinite reduced words
``u v v v ...``; they have exact canonical forms, so periodicity under an
automorphism can be certified by recomputation.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .decision import BoundExceeded, Decision, Found
from .maps import FreeMap, ProductElement, ProductEndo, apply, is_automorphism, is_injective
from .words import (
    Word,
    WordSyntaxError,
    common_prefix_length,
    cyclic_core,
    format_word,
    invert,
    multiply,
    parse_word,
    primitive_root,
    product,
)

__all__ = [
    "median_tree",
    "median_product",
    "word_distance",
    "DefectReport",
    "cm_defect",
    "triple_defect",
    "kernel_element",
    "witness_triple",
    "is_uniformly_continuous",
    "BoundaryPoint",
    "boundary_point",
    "parse_point",
    "parse_product_point",
    "format_product_point",
    "point_apply",
    "boundary_apply",
    "classify_point",
    "HolderEstimate",
    "estimate_holder",
]


# medians ------------------------------------------------------------------------


def _prefix(u: Word, k: int) -> Word:
    return Word(u.rank, u.letters[:k])


def median_tree(x: Word, y: Word, z: Word) -> Word:
    """The branch point of the tripod spanned by x, y, z in the Cayley tree."""
    xi = invert(x)
    a, b = multiply(xi, y), multiply(xi, z)
    return multiply(x, _prefix(a, common_prefix_length(a, b)))


def median_product(g1: ProductElement, g2: ProductElement, g3: ProductElement) -> ProductElement:
    return ProductElement(median_tree(g1.first, g2.first, g3.first), median_tree(g1.second, g2.second, g3.second))


def word_distance(g: ProductElement, h: ProductElement) -> int:
    """Word metric for the standard generators of the product: ``|g^-1 h|``."""
    return len(multiply(invert(g.first), h.first)) + len(multiply(invert(g.second), h.second))


# coarse-median defect -----------------------------------------------------------


@dataclass(frozen=True)
class DefectReport:
    samples: int
    max_defect: int
    witness: tuple[ProductElement, ProductElement, ProductElement] | None


def triple_defect(phi: ProductEndo, g1: ProductElement, g2: ProductElement, g3: ProductElement) -> int:
    before = phi.apply(median_product(g1, g2, g3))
    after = median_product(phi.apply(g1), phi.apply(g2), phi.apply(g3))
    return word_distance(before, after)


def _random_word(rng: random.Random, rank: int, max_len: int) -> Word:
    letters: list[int] = []
    target = rng.randint(0, max_len)
    while len(letters) < target:
        x = rng.randint(1, rank) * rng.choice((1, -1))
        if not letters or letters[-1] != -x:
            letters.append(x)
    return Word(rank, tuple(letters))


def cm_defect(phi: ProductEndo, max_len: int = 8, samples: int = 500, seed: int = 0) -> DefectReport:
    """Largest defect over random triples with factor words of length at most ``max_len``."""
    rng = random.Random(seed)
    best, witness = 0, None
    for _ in range(samples):
        triple = tuple(
            ProductElement(_random_word(rng, phi.n, max_len), _random_word(rng, phi.m, max_len)) for _ in range(3)
        )
        d = triple_defect(phi, *triple)
        if d > best or witness is None:
            best, witness = max(best, d), triple
    return DefectReport(samples, best, witness)


def kernel_element(f: FreeMap, max_len: int = 6) -> Word | None:
    """A shortest nontrivial word killed by ``f``, searched up to ``max_len``."""
    n = f.domain_rank
    layer = [Word(n, ())]
    for _ in range(max_len):
        nxt = []
        for w in layer:
            for x in range(-n, n + 1):
                if x == 0 or (w.letters and w.letters[-1] == -x):
                    continue
                u = Word(n, w.letters + (x,))
                if not apply(f, u).letters:
                    return u
                nxt.append(u)
        layer = nxt
    return None


def witness_triple(phi: ProductEndo, size: int) -> tuple[ProductElement, ...]:
    """Triple ``(x, y^C x y^-C, y^C)`` in the factor where a component map is
    neither trivial nor injective; ``x`` is killed and ``y`` is not."""
    from .maps import MIRROR_PATTERNS

    if phi.pattern() in MIRROR_PATTERNS:
        swapped = witness_triple(phi.mirrored(), size)
        return tuple(ProductElement(g.second, g.first) for g in swapped)
    d = phi.type_data
    # which factor each component map reads from
    domains = {"IV": (False, False), "VI": (True, False), "VII": (True, False)}.get(d.tag)
    if domains is None:
        raise ValueError(f"type {d.tag} has no component maps")
    for f, in_first in zip((d.phi, d.psi), domains):
        if f.is_trivial() or is_injective(f):
            continue
        x = kernel_element(f)
        if x is None:
            continue
        y = next(Word(f.domain_rank, (i,)) for i in range(1, f.domain_rank + 1) if apply(f, Word(f.domain_rank, (i,))).letters)
        yc = y**size
        words = (x, product(x.rank, (yc, x, invert(yc))), yc)
        one = Word(phi.m if in_first else phi.n, ())
        return tuple(ProductElement(w, one) if in_first else ProductElement(one, w) for w in words)
    raise ValueError("every component map is trivial or injective")


def is_uniformly_continuous(phi: ProductEndo) -> tuple[bool, str]:
    from .maps import MIRROR_PATTERNS

    if phi.pattern() in MIRROR_PATTERNS:
        ok, why = is_uniformly_continuous(phi.mirrored())
        return ok, why + " (after swapping the factors)"
    d = phi.type_data
    if d.tag in ("I", "II", "III", "V"):
        return False, f"type {d.tag}: a factor receives nontrivial images from both factors"
    for name, f in (("phi", d.phi), ("psi", d.psi)):
        if not (f.is_trivial() or is_injective(f)):
            return False, f"type {d.tag}: component {name} is neither trivial nor injective"
    return True, f"type {d.tag}: every component is trivial or injective"


# rational boundary points -------------------------------------------------------


@dataclass(frozen=True)
class BoundaryPoint:
    """``prefix`` followed by ``cycle`` repeated forever; a finite word when ``cycle`` is empty.

    Build through :func:`boundary_point`, which puts the pair in canonical
    form: primitive cyclically reduced cycle, no cancellation at the
    junction, and the shortest possible prefix.
    """

    prefix: Word
    cycle: Word

    @property
    def finite(self) -> bool:
        return not self.cycle.letters

    def letters(self, count: int) -> tuple[int, ...]:
        """First ``count`` letters (all of them for a short finite point)."""
        out = list(self.prefix.letters[:count])
        c = self.cycle.letters
        i = 0
        while c and len(out) < count:
            out.append(c[i % len(c)])
            i += 1
        return tuple(out)

    def format(self, factor: str | None = None) -> str:
        u = format_word(self.prefix, factor) if self.prefix.letters else ""
        if self.finite:
            return f"{u or '1'}:"
        return f"{u}:({format_word(self.cycle, factor)})"

    def __str__(self) -> str:
        return self.format()


def boundary_point(prefix: Word, cycle: Word | None = None) -> BoundaryPoint:
    rank = prefix.rank
    if cycle is None or not cycle.letters:
        return BoundaryPoint(prefix, Word(rank, ()))
    core, t = cyclic_core(cycle)
    # u (t c t^-1)^k = (u t) c^k t^-1, and the trailing t^-1 recedes to infinity
    u = list(multiply(prefix, t).letters)
    c = list(core.letters)
    while u and u[-1] == -c[0]:
        u.pop()
        c = c[1:] + c[:1]
    root, _ = primitive_root(Word(rank, tuple(c)))
    c = list(root.letters)
    while u and u[-1] == c[-1]:
        u.pop()
        c = c[-1:] + c[:-1]
    return BoundaryPoint(Word(rank, tuple(u)), Word(rank, tuple(c)))


_POINT = re.compile(r"^\s*([^:()]*)\s*:\s*(?:\(\s*([^()]*)\s*\))?\s*$")


def parse_point(text: str, rank: int, factor: str | None = None) -> BoundaryPoint:
    """``u:(v)`` for ``u v v ...`` and ``u:`` for the finite word ``u``."""
    m = _POINT.match(text)
    if not m:
        raise WordSyntaxError("expected 'u:(v)' or 'u:'", 0)
    u = parse_word(m.group(1), rank, factor)
    v = parse_word(m.group(2), rank, factor) if m.group(2) is not None else None
    return boundary_point(u, v)


def parse_product_point(text: str, n: int, m: int) -> tuple[BoundaryPoint, BoundaryPoint]:
    if text.count("|") != 1:
        raise WordSyntaxError("product point needs exactly one '|'", 0)
    left, right = text.split("|")
    return parse_point(left, n, "a"), parse_point(right, m, "b")


def format_product_point(p: tuple[BoundaryPoint, BoundaryPoint]) -> str:
    return f"{p[0].format('a')}|{p[1].format('b')}"


def point_apply(f: FreeMap, p: BoundaryPoint) -> BoundaryPoint:
    """Continuous extension of an automorphism, evaluated on a rational point."""
    if p.finite:
        return boundary_point(apply(f, p.prefix))
    return boundary_point(apply(f, p.prefix), apply(f, p.cycle))


def _require_automorphism(phi: ProductEndo) -> None:
    from .maps import MIRROR_PATTERNS

    if phi.pattern() in MIRROR_PATTERNS:
        raise ValueError("not an automorphism")
    d = phi.type_data
    if d.tag == "VI":
        ok = is_automorphism(d.phi) and is_automorphism(d.psi)
    elif d.tag == "VII":
        ok = phi.n == phi.m and is_automorphism(d.phi) and is_automorphism(d.psi)
    else:
        ok = False
    if not ok:
        raise ValueError(f"boundary dynamics need an automorphism; got type {d.tag} with non-bijective components")


ProductPoint = tuple[BoundaryPoint, BoundaryPoint]


def boundary_apply(phi: ProductEndo, p: ProductPoint, check: bool = True) -> ProductPoint:
    if check:
        _require_automorphism(phi)
    d = phi.type_data
    if d.tag == "VI":
        return point_apply(d.phi, p[0]), point_apply(d.psi, p[1])
    # (x, y) -> (y psi, x phi)
    return point_apply(d.psi, p[1]), point_apply(d.phi, p[0])


def _size(p: ProductPoint) -> int:
    return sum(len(q.prefix) + len(q.cycle) for q in p)


def classify_point(phi: ProductEndo, p: ProductPoint, budget: int = 50, max_size: int = 10_000) -> Decision:
    """``Found(period)`` when the orbit of ``p`` returns to ``p``.

    ``BoundExceeded`` means no return within the budget.  Every point is
    either periodic or wandering, so such a point is wandering unless a
    longer search would find its period; that is not certified here.
    """
    _require_automorphism(phi)
    cur = p
    for k in range(1, budget + 1):
        cur = boundary_apply(phi, cur, check=False)
        if cur == p:
            back = p
            for _ in range(k):
                back = boundary_apply(phi, back, check=False)
            if back != p:
                raise AssertionError("periodic certificate failed re-application")
            return Found(k, "periodic")
        if _size(cur) > max_size:
            return BoundExceeded(k, "point representation outgrew the size limit; wandering if not periodic")
    return BoundExceeded(budget, "no return within the budget; wandering if not periodic")


# Hölder estimates ---------------------------------------------------------------


@dataclass(frozen=True)
class HolderEstimate:
    samples: int
    K: Fraction
    r: Fraction
    table: dict = field(default_factory=dict)


def _pdist(u: Word, v: Word) -> Fraction:
    if u == v:
        return Fraction(0)
    return Fraction(1, 2 ** common_prefix_length(u, v))


_GRID = tuple(Fraction(k, 10) for k in range(10, 0, -1))


def estimate_holder(
    phi: FreeMap | ProductEndo,
    samples: int = 300,
    max_len: int = 12,
    seed: int = 0,
    K_cap: int = 1 << 12,
    pairs: list | None = None,
) -> HolderEstimate:
    """Fit ``d(x phi, y phi) <= K d(x, y)^r`` over sampled pairs sharing a prefix.

    For each ``r`` on a grid the least consistent ``K`` is recorded; the
    estimate is the largest ``r`` whose ``K`` stays below ``K_cap``.
    Ratios are compared exactly through ``log2`` of distances, which are
    powers of two.  ``pairs`` replaces the random sample: a list of
    ``(xs, ys)`` with one word per factor in each.
    """
    rng = random.Random(seed)
    if isinstance(phi, ProductEndo):
        ok, why = is_uniformly_continuous(phi)
        if not ok:
            raise ValueError(f"not uniformly continuous: {why}")
        ranks = (phi.n, phi.m)
    else:
        if not (phi.is_trivial() or is_injective(phi)):
            raise ValueError("not uniformly continuous: neither trivial nor injective")
        ranks = (phi.domain_rank,)
    if pairs is None:
        pairs = _holder_pairs(rng, ranks, samples, max_len)

    def dist(xs, ys) -> Fraction:
        return max(_pdist(a, b) for a, b in zip(xs, ys))

    def image(ws):
        if isinstance(phi, ProductEndo):
            g = phi.apply(ProductElement(*ws))
            return [g.first, g.second]
        return [apply(phi, ws[0])]

    # distances are 0 or 2^-k, so store exponents
    logs = []
    for xs, ys in pairs:
        before, after = dist(xs, ys), dist(image(xs), image(ys))
        if before == 0 or after == 0:
            continue
        logs.append((before.denominator.bit_length() - 1, after.denominator.bit_length() - 1))
    table = {}
    for r in _GRID:
        # K >= 2^(r*a - b) for every sample with d = 2^-a before and 2^-b after
        worst = max((r * a - b for a, b in logs), default=Fraction(0))
        table[r] = _pow2_ceiling(worst)
    chosen = next((r for r in _GRID if table[r] <= K_cap), _GRID[-1])
    return HolderEstimate(len(logs), table[chosen], chosen, table)


def _holder_pairs(rng: random.Random, ranks: tuple, samples: int, max_len: int) -> list:
    pairs = []
    for _ in range(samples):
        xs, ys = [], []
        for rank in ranks:
            common = _random_word(rng, rank, max_len)
            xs.append(product(rank, (common, _random_word(rng, rank, max_len))))
            ys.append(product(rank, (common, _random_word(rng, rank, max_len))))
        pairs.append((xs, ys))
    return pairs


def _pow2_ceiling(e: Fraction) -> Fraction:
    """Smallest power of two (integer exponent) that is at least ``2^e``."""
    k = -((-e.numerator) // e.denominator)
    return Fraction(2) ** k
