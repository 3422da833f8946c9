"""Free-group homomorphisms and endomorphisms of a product of two free groups.

An endomorphism of ``F_n x F_m`` is given by the images ``(x_i, y_i)`` of
the generators ``(a_i, 1)`` and the images ``(z_j, w_j)`` of ``(1, b_j)``.
Which of the sets X, Y, Z, W are trivial determines one of seven types.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .stallings import SubgroupGraph, stallings
from .words import (
    Word,
    WordSyntaxError,
    format_word,
    invert,
    is_conjugate,
    multiply,
    parse_word,
    power_index,
    primitive_root,
    product,
)

__all__ = [
    "FreeMap",
    "ProductElement",
    "ProductEndo",
    "TypeData",
    "InvalidEndomorphism",
    "apply",
    "compose",
    "validate_endo",
    "classify",
    "rebuild",
    "is_injective",
    "is_automorphism",
    "map_power",
    "image_graph",
    "endo_from_maps",
    "product_of",
    "preimage",
    "primitive_root",
    "stallings",
    "parse_endo",
    "parse_element",
    "format_element",
    "MIRROR_PATTERNS",
]


class InvalidEndomorphism(ValueError):
    pass


@dataclass(frozen=True)
class FreeMap:
    """Homomorphism ``F_domain_rank -> F_codomain_rank`` given on generators.

    Maps act on the right: ``compose(f, g)`` is "first f, then g".
    """

    domain_rank: int
    codomain_rank: int
    images: tuple[Word, ...]

    def __post_init__(self):
        if len(self.images) != self.domain_rank:
            raise ValueError("need one image per generator")
        for w in self.images:
            if w.rank != self.codomain_rank:
                raise ValueError("image rank does not match codomain")

    @classmethod
    def identity(cls, rank: int) -> "FreeMap":
        return cls(rank, rank, tuple(Word(rank, (i,)) for i in range(1, rank + 1)))

    @classmethod
    def trivial(cls, domain_rank: int, codomain_rank: int) -> "FreeMap":
        return cls(domain_rank, codomain_rank, tuple(Word(codomain_rank, ()) for _ in range(domain_rank)))

    @classmethod
    def from_text(cls, domain_rank: int, codomain_rank: int, texts: Sequence[str]) -> "FreeMap":
        return cls(domain_rank, codomain_rank, tuple(parse_word(t, codomain_rank) for t in texts))

    def __call__(self, u: Word) -> Word:
        return apply(self, u)

    def is_endo(self) -> bool:
        return self.domain_rank == self.codomain_rank

    def is_trivial(self) -> bool:
        return all(not w.letters for w in self.images)

    def is_erasing(self) -> bool:
        return any(not w.letters for w in self.images)

    def __str__(self) -> str:
        names = "abcdefghijklmnopqrstuvwxyz"
        if self.domain_rank <= 26:
            return ", ".join(f"{names[i]}->{w}" for i, w in enumerate(self.images))
        return ", ".join(f"a{i + 1}->{w}" for i, w in enumerate(self.images))


def apply(f: FreeMap, u: Word) -> Word:
    if u.rank != f.domain_rank:
        raise ValueError(f"rank mismatch: word has rank {u.rank}, map domain {f.domain_rank}")
    images = f.images
    out: list[int] = []
    for x in u.letters:
        seq = images[x - 1].letters if x > 0 else [-y for y in reversed(images[-x - 1].letters)]
        for y in seq:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
    return Word(f.codomain_rank, tuple(out))


def compose(f: FreeMap, g: FreeMap) -> FreeMap:
    """First ``f`` then ``g``."""
    if f.codomain_rank != g.domain_rank:
        raise ValueError("rank mismatch in composition")
    return FreeMap(f.domain_rank, g.codomain_rank, tuple(apply(g, w) for w in f.images))


def map_power(f: FreeMap, k: int) -> FreeMap:
    out = FreeMap.identity(f.domain_rank)
    for _ in range(k):
        out = compose(out, f)
    return out


def image_graph(f: FreeMap) -> SubgroupGraph:
    return stallings(f.codomain_rank, list(f.images))


def is_injective(f: FreeMap) -> bool:
    # free groups are Hopfian, so full image rank means injective
    if f.is_erasing():
        return False
    return image_graph(f).rank_of() == f.domain_rank


def is_automorphism(f: FreeMap) -> bool:
    if not f.is_endo() or not is_injective(f):
        return False
    g = image_graph(f)
    return all(g.contains(Word(f.domain_rank, (i,))) for i in range(1, f.domain_rank + 1))


def preimage(f: FreeMap, u: Word, graph: SubgroupGraph | None = None) -> Word | None:
    """The word ``h`` with ``apply(f, h) == u`` for injective ``f``, or None if ``u`` is not an image."""
    g = graph or image_graph(f)
    expr = g.member(u)
    if expr is None:
        return None
    return Word(f.domain_rank, expr.letters)


# product elements -------------------------------------------------------


@dataclass(frozen=True, slots=True)
class ProductElement:
    first: Word
    second: Word

    def __mul__(self, other: "ProductElement") -> "ProductElement":
        return ProductElement(multiply(self.first, other.first), multiply(self.second, other.second))

    def inverse(self) -> "ProductElement":
        return ProductElement(invert(self.first), invert(self.second))

    def is_identity(self) -> bool:
        return not self.first.letters and not self.second.letters

    def conjugate_to(self, other: "ProductElement") -> bool:
        return is_conjugate(self.first, other.first) and is_conjugate(self.second, other.second)

    def length(self) -> int:
        return len(self.first) + len(self.second)

    def __str__(self) -> str:
        return format_element(self)


def format_element(p: ProductElement) -> str:
    return f"{format_word(p.first, 'a')}|{format_word(p.second, 'b')}"


def parse_element(text: str, n: int, m: int) -> ProductElement:
    if text.count("|") != 1:
        raise WordSyntaxError("product element needs exactly one '|'", 0)
    left, right = text.split("|")
    first = parse_word(left, n, "a")
    try:
        second = parse_word(right, m, "b")
    except WordSyntaxError as exc:
        raise WordSyntaxError(str(exc).rsplit(" (at", 1)[0], exc.position + len(left) + 1) from None
    return ProductElement(first, second)


@dataclass(frozen=True)
class TypeData:
    """Structure behind a classified endomorphism.

    ``u``/``v`` are common roots in ``F_n``/``F_m``; ``P, Q, R, S`` are the
    exponent vectors of x, y, z, w against those roots.  ``phi``/``psi`` are
    the free maps relevant to the type (see :func:`classify`).
    """

    tag: str
    u: Word | None = None
    v: Word | None = None
    P: tuple[int, ...] | None = None
    Q: tuple[int, ...] | None = None
    R: tuple[int, ...] | None = None
    S: tuple[int, ...] | None = None
    phi: FreeMap | None = None
    psi: FreeMap | None = None


@dataclass(frozen=True)
class ProductEndo:
    n: int
    m: int
    a_images: tuple[ProductElement, ...]
    b_images: tuple[ProductElement, ...]
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    # images as four free maps: a -> x (F_n->F_n), a -> y (F_n->F_m), b -> z (F_m->F_n), b -> w (F_m->F_m)
    @property
    def ax(self) -> FreeMap:
        return self._free("ax", self.n, self.n, [p.first for p in self.a_images])

    @property
    def ay(self) -> FreeMap:
        return self._free("ay", self.n, self.m, [p.second for p in self.a_images])

    @property
    def bz(self) -> FreeMap:
        return self._free("bz", self.m, self.n, [p.first for p in self.b_images])

    @property
    def bw(self) -> FreeMap:
        return self._free("bw", self.m, self.m, [p.second for p in self.b_images])

    def _free(self, key, d, c, imgs) -> FreeMap:
        f = self._cache.get(key)
        if f is None:
            f = self._cache[key] = FreeMap(d, c, tuple(imgs))
        return f

    def apply(self, g: ProductElement) -> ProductElement:
        # (x, y) -> (x.ax * y.bz, x.ay * y.bw); the two factors commute
        first = multiply(apply(self.ax, g.first), apply(self.bz, g.second))
        second = multiply(apply(self.ay, g.first), apply(self.bw, g.second))
        return ProductElement(first, second)

    def __call__(self, g: ProductElement) -> ProductElement:
        return self.apply(g)

    def power_apply(self, g: ProductElement, k: int) -> ProductElement:
        for _ in range(k):
            g = self.apply(g)
        return g

    def compose(self, other: "ProductEndo") -> "ProductEndo":
        """First self, then other."""
        return ProductEndo(
            self.n,
            self.m,
            tuple(other.apply(p) for p in self.a_images),
            tuple(other.apply(p) for p in self.b_images),
        )

    def mirrored(self) -> "ProductEndo":
        """Conjugate by the factor swap, giving an endomorphism of ``F_m x F_n``."""
        return ProductEndo(
            self.m,
            self.n,
            tuple(ProductElement(p.second, p.first) for p in self.b_images),
            tuple(ProductElement(p.second, p.first) for p in self.a_images),
        )

    def identity_element(self) -> ProductElement:
        return ProductElement(Word(self.n, ()), Word(self.m, ()))

    def pattern(self) -> frozenset[str]:
        """Names of the trivial sets among X, Y, Z, W."""
        out = set()
        if all(not p.first.letters for p in self.a_images):
            out.add("X")
        if all(not p.second.letters for p in self.a_images):
            out.add("Y")
        if all(not p.first.letters for p in self.b_images):
            out.add("Z")
        if all(not p.second.letters for p in self.b_images):
            out.add("W")
        return frozenset(out)

    @property
    def tag(self) -> str:
        return self.type_data.tag

    @property
    def type_data(self) -> TypeData:
        d = self._cache.get("type")
        if d is None:
            d = self._cache["type"] = classify(self)
        return d

    def to_text(self) -> str:
        lines = [f"{self.n} {self.m}"]
        for i, p in enumerate(self.a_images, 1):
            lines.append(f"a{i} -> {format_word(p.first, 'a')} | {format_word(p.second, 'b')}")
        for j, p in enumerate(self.b_images, 1):
            lines.append(f"b{j} -> {format_word(p.first, 'a')} | {format_word(p.second, 'b')}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "a": [[format_word(p.first, "a"), format_word(p.second, "b")] for p in self.a_images],
            "b": [[format_word(p.first, "a"), format_word(p.second, "b")] for p in self.b_images],
        }


def validate_endo(
    n: int, m: int, a_images: Sequence[ProductElement], b_images: Sequence[ProductElement]
) -> ProductEndo:
    """Check ranks and the commutation relations, returning a :class:`ProductEndo`."""
    if n < 1 or m < 1:
        raise InvalidEndomorphism("ranks must be positive")
    if len(a_images) != n or len(b_images) != m:
        raise InvalidEndomorphism(f"expected {n} a-images and {m} b-images")
    for p in list(a_images) + list(b_images):
        if p.first.rank != n or p.second.rank != m:
            raise InvalidEndomorphism("image ranks do not match (n, m)")
    for i, pa in enumerate(a_images, 1):
        for j, pb in enumerate(b_images, 1):
            for c, (s, t) in enumerate(((pa.first, pb.first), (pa.second, pb.second))):
                if multiply(s, t) != multiply(t, s):
                    factor = "first" if c == 0 else "second"
                    raise InvalidEndomorphism(
                        f"images of a{i} and b{j} do not commute in the {factor} factor"
                    )
    return ProductEndo(n, m, tuple(a_images), tuple(b_images))


MIRROR_PATTERNS = {
    frozenset("Z"): "III",
    frozenset("W"): "II",
    frozenset("YW"): "V",
    frozenset("ZW"): "IV",
}

_PATTERNS = {
    frozenset(): "I",
    frozenset("X"): "II",
    frozenset("Y"): "III",
    frozenset("XY"): "IV",
    frozenset("XZ"): "V",
    frozenset("YZ"): "VI",
    frozenset("XYZ"): "VI",
    frozenset("YZW"): "VI",
    frozenset("XYZW"): "VI",
    frozenset("XW"): "VII",
    frozenset("XYW"): "VII",
    frozenset("XZW"): "VII",
}


def _common_root(words: Iterable[Word]) -> tuple[Word, list[int]]:
    words = list(words)
    base = next(w for w in words if w.letters)
    root, _ = primitive_root(base)
    exps = []
    for w in words:
        k = power_index(w, root)
        if k is None:
            raise InvalidEndomorphism("images that should share a common root do not")
        exps.append(k)
    return root, exps


def classify(phi: ProductEndo) -> TypeData:
    pattern = phi.pattern()
    tag = _PATTERNS.get(pattern)
    if tag is None:
        raise InvalidEndomorphism(
            f"triviality pattern {sorted(pattern)} matches no type; "
            f"swap the factors to get type {MIRROR_PATTERNS[pattern]}"
        )
    xs = [p.first for p in phi.a_images]
    ys = [p.second for p in phi.a_images]
    zs = [p.first for p in phi.b_images]
    ws = [p.second for p in phi.b_images]
    if tag == "I":
        u, exps = _common_root(xs + zs)
        v, exps2 = _common_root(ys + ws)
        return TypeData(
            tag, u=u, v=v, P=tuple(exps[: phi.n]), R=tuple(exps[phi.n :]), Q=tuple(exps2[: phi.n]), S=tuple(exps2[phi.n :])
        )
    if tag == "II":
        v, exps = _common_root(ys + ws)
        return TypeData(tag, v=v, Q=tuple(exps[: phi.n]), S=tuple(exps[phi.n :]), phi=phi.bz)
    if tag == "III":
        u, exps = _common_root(xs + zs)
        return TypeData(tag, u=u, P=tuple(exps[: phi.n]), R=tuple(exps[phi.n :]), phi=phi.bw)
    if tag == "IV":
        return TypeData(tag, phi=phi.bz, psi=phi.bw)
    if tag == "V":
        v, exps = _common_root(ys + ws)
        return TypeData(tag, v=v, Q=tuple(exps[: phi.n]), S=tuple(exps[phi.n :]))
    if tag == "VI":
        return TypeData(tag, phi=phi.ax, psi=phi.bw)
    return TypeData(tag, phi=phi.ay, psi=phi.bz)


def rebuild(data: TypeData, n: int, m: int) -> ProductEndo:
    """Generator images from type data; inverse of :func:`classify`."""
    one_n, one_m = Word(n, ()), Word(m, ())
    t = data.tag
    if t == "I":
        a = [ProductElement(data.u**p, data.v**q) for p, q in zip(data.P, data.Q)]
        b = [ProductElement(data.u**r, data.v**s) for r, s in zip(data.R, data.S)]
    elif t == "II":
        a = [ProductElement(one_n, data.v**q) for q in data.Q]
        b = [ProductElement(z, data.v**s) for z, s in zip(data.phi.images, data.S)]
    elif t == "III":
        a = [ProductElement(data.u**p, one_m) for p in data.P]
        b = [ProductElement(data.u**r, w) for r, w in zip(data.R, data.phi.images)]
    elif t == "IV":
        a = [ProductElement(one_n, one_m) for _ in range(n)]
        b = [ProductElement(z, w) for z, w in zip(data.phi.images, data.psi.images)]
    elif t == "V":
        a = [ProductElement(one_n, data.v**q) for q in data.Q]
        b = [ProductElement(one_n, data.v**s) for s in data.S]
    elif t == "VI":
        a = [ProductElement(x, one_m) for x in data.phi.images]
        b = [ProductElement(one_n, w) for w in data.psi.images]
    elif t == "VII":
        a = [ProductElement(one_n, y) for y in data.phi.images]
        b = [ProductElement(z, one_m) for z in data.psi.images]
    else:
        raise ValueError(f"unknown type {t!r}")
    return validate_endo(n, m, a, b)


# text formats -----------------------------------------------------------


def parse_endo(text: str) -> ProductEndo:
    """Read an endomorphism from the line format or its JSON equivalent."""
    stripped = text.strip()
    if stripped.startswith("{"):
        data = json.loads(stripped)
        n, m = int(data["n"]), int(data["m"])
        a = [ProductElement(parse_word(s, n, "a"), parse_word(t, m, "b")) for s, t in data["a"]]
        b = [ProductElement(parse_word(s, n, "a"), parse_word(t, m, "b")) for s, t in data["b"]]
        return validate_endo(n, m, a, b)
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise InvalidEndomorphism("empty endomorphism description")
    try:
        n, m = (int(t) for t in lines[0].split())
    except ValueError:
        raise InvalidEndomorphism(f"line 1: expected header 'n m', got {lines[0]!r}") from None
    if len(lines) != 1 + n + m:
        raise InvalidEndomorphism(f"expected {n + m} image lines, got {len(lines) - 1}")
    imgs = {}
    for lineno, ln in enumerate(lines[1:], start=2):
        if "->" not in ln or "|" not in ln:
            raise InvalidEndomorphism(f"line {lineno}: expected '<gen> -> <word> | <word>'")
        lhs, rhs = ln.split("->", 1)
        gen = lhs.strip()
        left, right = rhs.split("|", 1)
        try:
            imgs[gen] = ProductElement(parse_word(left, n, "a"), parse_word(right, m, "b"))
        except WordSyntaxError as exc:
            raise InvalidEndomorphism(f"line {lineno}: {exc}") from None
    try:
        a = [imgs[f"a{i}"] for i in range(1, n + 1)]
        b = [imgs[f"b{j}"] for j in range(1, m + 1)]
    except KeyError as exc:
        raise InvalidEndomorphism(f"missing image for {exc.args[0]}") from None
    return validate_endo(n, m, a, b)


def endo_from_maps(n: int, m: int, ax: FreeMap, ay: FreeMap, bz: FreeMap, bw: FreeMap) -> ProductEndo:
    a = [ProductElement(x, y) for x, y in zip(ax.images, ay.images)]
    b = [ProductElement(z, w) for z, w in zip(bz.images, bw.images)]
    return validate_endo(n, m, a, b)


def product_of(n: int, m: int, elems: Iterable[ProductElement]) -> ProductElement:
    elems = list(elems)
    return ProductElement(product(n, (e.first for e in elems)), product(m, (e.second for e in elems)))
