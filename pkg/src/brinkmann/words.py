"""Reduced words in a free group of finite rank.

A word is a tuple of nonzero integers: ``i`` stands for the generator
number ``i`` and ``-i`` for its inverse.  Every :class:`Word` held by the
library is freely reduced.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "Word",
    "free_reduce",
    "multiply",
    "product",
    "conjugator",
    "abelianize",
    "invert",
    "conjugate_by",
    "cyclic_core",
    "canonical_cyclic",
    "is_conjugate",
    "primitive_root",
    "power_index",
    "conjugate_power_index",
    "conjugating_powers",
    "exponent_sum",
    "weighted_exponent",
    "prefix_distance",
    "common_prefix_length",
    "parse_word",
    "format_word",
    "WordSyntaxError",
]


class WordSyntaxError(ValueError):
    """Raised for malformed word text; ``position`` is the offending column."""

    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def _reduce_letters(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True, slots=True)
class Word:
    """A freely reduced word over ``rank`` generators.

    The constructor trusts its input; use :func:`free_reduce` or
    :meth:`Word.of` for raw letter sequences.
    """

    rank: int
    letters: tuple[int, ...] = ()

    @classmethod
    def of(cls, rank: int, letters: Iterable[int]) -> "Word":
        return free_reduce(rank, letters)

    @classmethod
    def identity(cls, rank: int) -> "Word":
        return cls(rank, ())

    @classmethod
    def gen(cls, rank: int, i: int) -> "Word":
        if not 1 <= abs(i) <= rank or i == 0:
            raise ValueError(f"generator index {i} out of range for rank {rank}")
        return cls(rank, (i,))

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def inverse(self) -> "Word":
        return invert(self)

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return invert(self) ** (-k)
        core, conj = cyclic_core(self)
        if k == 0 or not core:
            return Word(self.rank, ())
        # conj * core^k * conj^-1 is already reduced once core is cyclically reduced
        inv = invert(conj).letters
        return Word(self.rank, conj.letters + core.letters * k + inv)

    def is_identity(self) -> bool:
        return not self.letters

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({self.rank}, {format_word(self)!r})"


def free_reduce(rank: int, letters: Iterable[int]) -> Word:
    """Freely reduce a raw letter sequence."""
    letters = tuple(letters)
    for x in letters:
        if x == 0 or abs(x) > rank:
            raise ValueError(f"letter {x} out of range for rank {rank}")
    return Word(rank, _reduce_letters(letters))


def _check_rank(u: Word, v: Word) -> None:
    if u.rank != v.rank:
        raise ValueError(f"rank mismatch: {u.rank} vs {v.rank}")


def multiply(u: Word, v: Word) -> Word:
    _check_rank(u, v)
    a, b = u.letters, v.letters
    i = 0
    n = min(len(a), len(b))
    while i < n and a[len(a) - 1 - i] == -b[i]:
        i += 1
    return Word(u.rank, a[: len(a) - i] + b[i:])


def product(rank: int, words: Iterable[Word]) -> Word:
    out: list[int] = []
    for w in words:
        for x in w.letters:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return Word(rank, tuple(out))


def invert(u: Word) -> Word:
    return Word(u.rank, tuple(-x for x in reversed(u.letters)))


def conjugate_by(u: Word, g: Word) -> Word:
    """Return g^-1 u g."""
    _check_rank(u, g)
    return product(u.rank, (invert(g), u, g))


def cyclic_core(u: Word) -> tuple[Word, Word]:
    """Split ``u`` as ``conj * core * conj^-1`` with ``core`` cyclically reduced."""
    a = u.letters
    i, j = 0, len(a) - 1
    while i < j and a[i] == -a[j]:
        i += 1
        j -= 1
    return Word(u.rank, a[i : j + 1]), Word(u.rank, a[:i])


def _key(x: int) -> int:
    # order a1 < A1 < a2 < A2 < ...
    return 2 * x - 2 if x > 0 else -2 * x - 1


def _least_rotation(seq: Sequence[int]) -> int:
    """Booth's algorithm: start index of the least rotation of ``seq``."""
    n = len(seq)
    if n == 0:
        return 0
    s = list(seq) * 2
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = s[j]
        i = f[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k


def canonical_cyclic(u: Word) -> Word:
    """Least rotation of the cyclic core; a complete conjugacy invariant."""
    core, _ = cyclic_core(u)
    c = core.letters
    if len(c) <= 1:
        return core
    k = _least_rotation([_key(x) for x in c])
    return Word(u.rank, c[k:] + c[:k])


def is_conjugate(u: Word, v: Word) -> bool:
    _check_rank(u, v)
    cu, _ = cyclic_core(u)
    cv, _ = cyclic_core(v)
    if len(cu) != len(cv):
        return False
    return canonical_cyclic(cu) == canonical_cyclic(cv)


def conjugator(u: Word, v: Word) -> Word | None:
    """Some g with g^-1 u g = v, or None when u and v are not conjugate."""
    _check_rank(u, v)
    cu, gu = cyclic_core(u)
    cv, gv = cyclic_core(v)
    if len(cu) != len(cv):
        return None
    n = len(cu)
    if n == 0:
        # both trivial
        return Word(u.rank, ())
    a, b = cu.letters, cv.letters
    doubled = a + a
    for r in range(n):
        if doubled[r : r + n] == b:
            # cu = p q with p = a[:r]; q p = b, so p^-1 cu p = b
            p = Word(u.rank, a[:r])
            # u = gu cu gu^-1, v = gv cv gv^-1
            return product(u.rank, (gu, p, invert(gv)))
    return None


def primitive_root(w: Word) -> tuple[Word, int]:
    """Return ``(root, e)`` with ``w == root**e``, ``e >= 1`` and root not a proper power."""
    if not w.letters:
        raise ValueError("the identity has no primitive root")
    core, conj = cyclic_core(w)
    c = core.letters
    n = len(c)
    for d in range(1, n + 1):
        if n % d == 0 and c[:d] * (n // d) == c:
            root = Word(w.rank, conj.letters + c[:d] + invert(conj).letters)
            return root, n // d
    raise AssertionError("unreachable")


def power_index(u: Word, v: Word) -> int | None:
    """The unique ``k`` with ``u == v**k``, or None."""
    _check_rank(u, v)
    if not v.letters:
        raise ValueError("power_index needs a nontrivial base")
    if not u.letters:
        return 0
    ru, e = primitive_root(u)
    rv, f = primitive_root(v)
    if e % f:
        return None
    if ru == rv:
        return e // f
    if ru == invert(rv):
        return -(e // f)
    return None


def conjugate_power_index(u: Word, v: Word) -> int | None:
    """Some ``k`` with ``u`` conjugate to ``v**k``, or None."""
    _check_rank(u, v)
    if not v.letters:
        raise ValueError("conjugate_power_index needs a nontrivial base")
    cu, _ = cyclic_core(u)
    cv, _ = cyclic_core(v)
    if not cu.letters:
        return 0
    if len(cu) % len(cv):
        return None
    k = len(cu) // len(cv)
    target = canonical_cyclic(cu)
    if canonical_cyclic(cv**k) == target:
        return k
    if canonical_cyclic(cv ** (-k)) == target:
        return -k
    return None


def conjugating_powers(c: Word, w: Word, z: Word) -> list[int] | None:
    """All integers ``j`` with ``c^-j w c^j == z``; None means every integer.

    When ``w`` commutes with ``c`` the answer is all or nothing.  Otherwise
    at most one ``j`` works, and conjugating by a high power of the root of
    ``c`` makes the word longer than ``z``, so a window of root exponents
    bounded by ``|w| + |z|`` is enough.
    """
    _check_rank(c, w)
    _check_rank(c, z)
    if not c.letters or multiply(w, c) == multiply(c, w):
        return None if w == z else []
    root, e = primitive_root(c)
    core, t = cyclic_core(root)
    ti = invert(t)
    w1 = product(c.rank, (ti, w, t))
    z1 = product(c.rank, (ti, z, t))
    bound = len(w1) + len(z1) + 2
    core_inv = invert(core)
    hits = []
    for sign, step in ((1, core), (-1, core_inv)):
        cur = w1
        for i in range(bound + 1):
            if cur == z1 and (sign > 0 or i > 0) and i % e == 0:
                hits.append(sign * i // e)
            cur = product(c.rank, (invert(step), cur, step))
    return sorted(hits)


def exponent_sum(u: Word, i: int) -> int:
    if not 1 <= i <= u.rank:
        raise ValueError(f"generator index {i} out of range for rank {u.rank}")
    return sum(1 if x == i else -1 if x == -i else 0 for x in u.letters)


def abelianize(u: Word) -> list[int]:
    out = [0] * u.rank
    for x in u.letters:
        if x > 0:
            out[x - 1] += 1
        else:
            out[-x - 1] -= 1
    return out


def weighted_exponent(u: Word, weights: Sequence[int]) -> int:
    """Dot product of the abelianization of ``u`` with ``weights``."""
    if len(weights) != u.rank:
        raise ValueError(f"weight vector has length {len(weights)}, rank is {u.rank}")
    total = 0
    for x in u.letters:
        total += weights[x - 1] if x > 0 else -weights[-x - 1]
    return total


def common_prefix_length(u: Word, v: Word) -> int:
    a, b = u.letters, v.letters
    n = min(len(a), len(b))
    i = 0
    while i < n and a[i] == b[i]:
        i += 1
    return i


def prefix_distance(u: Word, v: Word) -> Fraction:
    """0 when equal, else 2^-(length of the common prefix)."""
    if u.letters == v.letters:
        return Fraction(0)
    return Fraction(1, 2 ** common_prefix_length(u, v))


_TOKEN = re.compile(r"\s*([A-Za-z])(\d*)")


def parse_word(text: str, rank: int, factor: str | None = None) -> Word:
    """Parse word text.

    Accepted tokens: bare letters (``a`` is generator 1, ``b`` generator 2,
    upper case for inverses; rank at most 26), or indexed tokens such as
    ``a3``/``A3``.  When ``factor`` is given, indexed tokens must use that
    letter.  ``1`` or an empty string denotes the identity.
    """
    s = text.strip()
    if s in ("", "1"):
        return Word(rank, ())
    letters: list[int] = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise WordSyntaxError(f"unexpected character {text[pos]!r}", pos)
        ch, digits = m.group(1), m.group(2)
        start = m.start(1)
        if digits:
            if factor is not None and ch.lower() != factor:
                raise WordSyntaxError(f"token {ch}{digits} does not belong to factor {factor!r}", start)
            idx = int(digits)
        else:
            if rank > 26:
                raise WordSyntaxError("bare letters need rank <= 26", start)
            idx = ord(ch.lower()) - ord("a") + 1
        if not 1 <= idx <= rank:
            raise WordSyntaxError(f"generator {ch}{digits} out of range for rank {rank}", start)
        letters.append(idx if ch.islower() else -idx)
        pos = m.end()
    return Word(rank, _reduce_letters(letters))


def format_word(w: Word, factor: str | None = None) -> str:
    """Text form; bare letters when no factor letter is given and rank <= 26."""
    if not w.letters:
        return "1"
    if factor is None and w.rank <= 26:
        return "".join(chr(ord("a") + x - 1) if x > 0 else chr(ord("A") - x - 1) for x in w.letters)
    f = factor or "a"
    return " ".join(f"{f}{x}" if x > 0 else f"{f.upper()}{-x}" for x in w.letters)
