"""Normal forms in the ascending HNN-extension of ``F_n x F_m`` by an injective endomorphism.

The extension adds a stable letter ``t`` with ``t^-1 g t = g Phi``.  Every
element is ``t^i g t^-j``; the form is unique once ``t (h Phi) t^-1`` has
been rewritten to ``h`` wherever possible.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, Union

from .maps import ProductElement, ProductEndo, format_element, image_graph, preimage
from .twosided import require_injective
from .words import Word, WordSyntaxError, multiply

__all__ = ["HnnElement", "AscendingHNN", "hnn_normalize", "hnn_equal", "parse_hnn_word", "format_hnn"]

Letter = Union[int, ProductElement]  # +1 / -1 for t / t^-1


@dataclass(frozen=True)
class HnnElement:
    """``t^i g t^-j``."""

    i: int
    g: ProductElement
    j: int

    def __str__(self) -> str:
        return format_hnn(self)


def format_hnn(e: HnnElement) -> str:
    parts = []
    if e.i:
        parts.append(f"t^{e.i}")
    parts.append(f"({format_element(e.g)})")
    if e.j:
        parts.append(f"t^-{e.j}")
    return " ".join(parts)


class AscendingHNN:
    def __init__(self, phi: ProductEndo):
        require_injective(phi)
        self.phi = phi

    @cached_property
    def _graphs(self):
        d = self.phi.type_data
        return image_graph(d.phi), image_graph(d.psi)

    def identity(self) -> HnnElement:
        return HnnElement(0, self.phi.identity_element(), 0)

    def _apply_power(self, g: ProductElement, k: int) -> ProductElement:
        return self.phi.power_apply(g, k)

    def preimage(self, g: ProductElement) -> ProductElement | None:
        """The unique ``h`` with ``h Phi == g``, or None."""
        d = self.phi.type_data
        gphi, gpsi = self._graphs
        if d.tag == "VI":
            a = preimage(d.phi, g.first, gphi)
            b = preimage(d.psi, g.second, gpsi) if a is not None else None
        else:
            # (x, y) -> (y psi, x phi)
            b = preimage(d.psi, g.first, gpsi)
            a = preimage(d.phi, g.second, gphi) if b is not None else None
        if a is None or b is None:
            return None
        return ProductElement(a, b)

    def _reduce(self, i: int, g: ProductElement, j: int) -> HnnElement:
        while i and j:
            h = self.preimage(g)
            if h is None:
                break
            i, g, j = i - 1, h, j - 1
        return HnnElement(i, g, j)

    def times_letter(self, e: HnnElement, letter: Letter) -> HnnElement:
        i, g, j = e.i, e.g, e.j
        if isinstance(letter, ProductElement):
            # t^-j h = (h Phi^j) t^-j
            h = self._apply_power(letter, j)
            g = ProductElement(multiply(g.first, h.first), multiply(g.second, h.second))
        elif letter == 1:
            if j:
                j -= 1
            else:
                # g t = t (g Phi)
                g = self.phi.apply(g)
                i += 1
        elif letter == -1:
            j += 1
        else:
            raise ValueError(f"bad stable letter exponent {letter!r}")
        return self._reduce(i, g, j)

    def normalize(self, word: str | Iterable[Letter]) -> HnnElement:
        letters = parse_hnn_word(word, self.phi.n, self.phi.m) if isinstance(word, str) else word
        e = self.identity()
        for x in letters:
            e = self.times_letter(e, x)
        return e

    def letters_of(self, e: HnnElement) -> list[Letter]:
        return [1] * e.i + [e.g] + [-1] * e.j

    def multiply(self, a: HnnElement, b: HnnElement) -> HnnElement:
        for x in self.letters_of(b):
            a = self.times_letter(a, x)
        return a


_HNN_TOKEN = re.compile(r"\s*(?:([tT])|([aAbB])(\d+)|(\S))")


def parse_hnn_word(text: str, n: int, m: int) -> list[Letter]:
    """Tokens ``t``/``T`` for the stable letter and its inverse, ``a<i>``/``A<i>``
    for the first factor, ``b<j>``/``B<j>`` for the second."""
    out: list[Letter] = []
    one_n, one_m = Word(n, ()), Word(m, ())
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        mt = _HNN_TOKEN.match(text, pos)
        if mt is None:
            break
        if mt.group(4) is not None:
            if mt.group(4) == "1":
                pos = mt.end()
                continue
            raise WordSyntaxError(f"unexpected character {mt.group(4)!r}", mt.start(4))
        if mt.group(1):
            out.append(1 if mt.group(1) == "t" else -1)
        else:
            ch, idx = mt.group(2), int(mt.group(3))
            rank = n if ch in "aA" else m
            if not 1 <= idx <= rank:
                raise WordSyntaxError(f"generator {ch}{idx} out of range", mt.start(2))
            w = Word(rank, (idx if ch.islower() else -idx,))
            out.append(ProductElement(w, one_m) if ch in "aA" else ProductElement(one_n, w))
        pos = mt.end()
    return out


def hnn_normalize(phi: ProductEndo, word: str | Sequence[Letter]) -> HnnElement:
    return AscendingHNN(phi).normalize(word)


def hnn_equal(e1: HnnElement, e2: HnnElement) -> bool:
    """Word problem: normal forms of the same extension agree componentwise."""
    return e1 == e2
