"""Orbit problems for endomorphisms of a direct product of two free groups.

Given ``Phi`` on ``F_n x F_m`` and elements ``g``, ``h``, find the least
``k >= 0`` with ``g Phi^k == h`` (or componentwise conjugate).  Each
classified type reduces to integer linear recurrences or to orbit problems
of free-group maps; the reduction is recorded in a :class:`ReductionTrace`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm
from typing import Any, NamedTuple

from .decision import BoundExceeded, Decision, Found, Refuted
from .freeorbit import DEFAULT, LogSet, OracleConfig, is_periodic, log_set
from .linear import (
    AffineMap1D,
    SemilinearSet1D,
    affine_orbit_decide,
    orbit_decide,
    scalar_geometric_decide,
)
from .maps import MIRROR_PATTERNS, FreeMap, ProductElement, ProductEndo, apply, compose
from .words import (
    Word,
    canonical_cyclic,
    conjugate_power_index,
    format_word,
    power_index,
    weighted_exponent,
)

__all__ = ["ReductionTrace", "Outcome", "decide_eq", "decide_conj", "holds"]

EQUAL, CONJ = "equal", "conj"


@dataclass
class ReductionTrace:
    """What a decision was reduced to.

    ``steps`` holds dicts with a ``kind`` key.  Steps of kind ``orbit``,
    ``affine`` and ``scalar`` carry their full inputs, so :meth:`replay` can
    rerun them and confirm the recorded sub-verdicts.
    """

    tag: str = ""
    mode: str = EQUAL
    mirrored: bool = False
    steps: list[dict] = field(default_factory=list)

    def add(self, kind: str, **info: Any) -> None:
        self.steps.append({"kind": kind, **info})

    def replay(self) -> bool:
        for st in self.steps:
            kind = st["kind"]
            if kind == "orbit":
                d = orbit_decide(st["matrix"], st["start"], st["target"])
            elif kind == "affine":
                d = affine_orbit_decide(AffineMap1D(*st["map"]), st["start"], st["target"])
            elif kind == "scalar":
                d = scalar_geometric_decide(*st["args"])
            else:
                continue
            if str(d) != st["result"]:
                return False
        return True

    def to_json(self) -> dict:
        def clean(x):
            if isinstance(x, Word):
                return format_word(x)
            if isinstance(x, (list, tuple)):
                return [clean(y) for y in x]
            if isinstance(x, dict):
                return {k: clean(v) for k, v in x.items()}
            if isinstance(x, (int, str, bool)) or x is None:
                return x
            return str(x)

        return {"type": self.tag, "mode": self.mode, "mirrored": self.mirrored, "steps": clean(self.steps)}

    def __str__(self) -> str:
        head = f"type {self.tag} ({self.mode}{', factors swapped' if self.mirrored else ''})"
        lines = [head]
        for st in self.steps:
            rest = ", ".join(f"{k}={_short(v)}" for k, v in st.items() if k != "kind")
            lines.append(f"  {st['kind']}: {rest}")
        return "\n".join(lines)


def _short(v: Any) -> str:
    if isinstance(v, Word):
        return format_word(v)
    return str(v)


class Outcome(NamedTuple):
    decision: Decision
    trace: ReductionTrace


# relations -------------------------------------------------------------------


def _same(a: Word, b: Word, mode: str) -> bool:
    if mode == EQUAL:
        return a == b
    return canonical_cyclic(a) == canonical_cyclic(b)


def _rel(g: ProductElement, h: ProductElement, mode: str) -> bool:
    return _same(g.first, h.first, mode) and _same(g.second, h.second, mode)


def holds(phi: ProductEndo, g: ProductElement, h: ProductElement, k: int, mode: str = EQUAL) -> bool:
    """Literal check of ``g Phi^k == h`` (or conjugacy)."""
    return _rel(phi.power_apply(g, k), h, mode)


def _exponent(w: Word, base: Word, mode: str) -> int | None:
    return power_index(w, base) if mode == EQUAL else conjugate_power_index(w, base)


def _log(f: FreeMap, x: Word, z: Word, mode: str, cfg: OracleConfig, trace: ReductionTrace, label: str) -> LogSet:
    ls = log_set(f, x, z, mode, cfg)
    trace.add("log", label=label, start=x, target=z, result=str(ls))
    return ls


def _undecided(ls: LogSet, label: str) -> BoundExceeded:
    return BoundExceeded(ls.checked_up_to, f"{label}: free-group orbit undecided ({ls.reason})")


def _min_decision(*ds: Decision, check=None) -> Decision:
    """Merge verdicts over disjoint candidate sets.

    With ``check`` given, an undecided branch does not block a found answer:
    every smaller ``k`` is tested literally instead.
    """
    found = [d.witness for d in ds if isinstance(d, Found)]
    unknown = [d for d in ds if isinstance(d, BoundExceeded)]
    if found:
        best = min(found)
        if not unknown:
            return Found(best)
        if check is not None:
            for k in range(1, best):
                if check(k):
                    return Found(k)
            return Found(best)
        return unknown[0]
    if unknown:
        return unknown[0]
    return Refuted("; ".join(d.reason for d in ds if isinstance(d, Refuted) and d.reason))


# type I -------------------------------------------------------------------------


def _type_I(phi, g, h, mode, cfg, trace) -> Decision:
    d = phi.type_data
    u, v = d.u, d.v
    a = _exponent(h.first, u, mode)
    b = _exponent(h.second, v, mode)
    trace.add("exponents", first=a, second=b)
    if a is None or b is None:
        return Refuted("target is not a pair of powers of the roots")
    x, y = g.first, g.second
    uP, uQ = weighted_exponent(u, d.P), weighted_exponent(u, d.Q)
    vR, vS = weighted_exponent(v, d.R), weighted_exponent(v, d.S)
    # row convention: (a_k, b_k) M = (a_{k+1}, b_{k+1})
    M = ((uP, uQ), (vR, vS))
    start = (weighted_exponent(x, d.P) + weighted_exponent(y, d.R), weighted_exponent(x, d.Q) + weighted_exponent(y, d.S))
    res = orbit_decide(M, start, (a, b))
    trace.add("orbit", matrix=M, start=start, target=(a, b), offset=1, result=str(res))
    if isinstance(res, Found):
        return Found(res.witness + 1)
    return res


# type II ------------------------------------------------------------------------


def _type_II(phi, g, h, mode, cfg, trace) -> Decision:
    d = phi.type_data
    v, f = d.v, d.phi
    x, y = g.first, g.second
    if _rel(phi.apply(g), h, mode):
        trace.add("check", k=1, result=True)
        return Found(1)
    trace.add("check", k=1, result=False)
    a1 = weighted_exponent(x, d.Q) + weighted_exponent(y, d.S)
    vS = weighted_exponent(v, d.S)
    vf = apply(f, v)
    vfQ = weighted_exponent(vf, d.Q)
    a2 = a1 * vS + weighted_exponent(apply(f, y), d.Q)
    # the recurrence must reproduce the first two iterates literally
    one, two = phi.apply(g), phi.power_apply(g, 2)
    if one.second != v**a1 or two != ProductElement(vf**a1, v**a2):
        raise AssertionError("type II recurrence does not match direct application")
    trace.add("recurrence", a1=a1, a2=a2, note="second term uses the Q-weighted exponent of y phi")
    b = _exponent(h.second, v, mode)
    if b is None:
        return Refuted("second component is not a power of the root")
    if not vf.letters:
        # first component is trivial from k = 2 on and a_k = a_2 (v^S)^(k-2)
        if h.first.letters:
            return Refuted("first component is trivial from the second step on")
        res = scalar_geometric_decide(vS, a2, b)
        trace.add("scalar", args=(vS, a2, b), offset=1, result=str(res))
        return Found(res.witness + 1) if isinstance(res, Found) else res
    a = _exponent(h.first, vf, mode)
    trace.add("exponents", first=a, second=b)
    if a is None:
        return Refuted("first component is not a power of v phi")
    M = ((vS, 1), (vfQ, 0))
    res = orbit_decide(M, (a2, a1), (b, a))
    trace.add("orbit", matrix=M, start=(a2, a1), target=(b, a), offset=2, result=str(res))
    if isinstance(res, Found):
        return Found(res.witness + 2)
    return res


# type III -----------------------------------------------------------------------


def _type_III(phi, g, h, mode, cfg, trace) -> Decision:
    d = phi.type_data
    u, f = d.u, d.phi
    x, y = g.first, g.second
    uP = weighted_exponent(u, d.P)
    ls = _log(f, y, h.second, mode, cfg, trace, "second factor")
    if not ls.exact:
        return _undecided(ls, "second factor")
    if ls.is_empty:
        return Refuted("second component never reaches the target")
    a = _exponent(h.first, u, mode)
    trace.add("exponents", first=a)
    if a is None:
        return Refuted("first component is not a power of the root")

    def coefficient(k: int) -> int:
        # first exponent after k >= 1 steps
        c = weighted_exponent(x, d.P) + weighted_exponent(y, d.R)
        yk = apply(f, y)
        for _ in range(k - 1):
            c = c * uP + weighted_exponent(yk, d.R)
            yk = apply(f, yk)
        return c

    results = []
    for p0, p1 in sorted(ls.solutions.parts):
        if p1 == 0:
            if p0 >= 1:
                ok = coefficient(p0) == a
                trace.add("check", k=p0, result=ok)
                results.append(Found(p0) if ok else Refuted())
            continue
        base = p0 if p0 >= 1 else p0 + p1
        # the affine step only needs R-weighted exponents along the cycle,
        # and those are conjugacy invariants
        yb = y
        for _ in range(base):
            yb = apply(f, yb)
        w = h.second
        if mode == CONJ:
            assert weighted_exponent(yb, d.R) == weighted_exponent(w, d.R)
        offset = 0
        wt = w
        for t in range(p1):
            offset += weighted_exponent(wt, d.R) * uP ** (p1 - t - 1)
            wt = apply(f, wt)
        theta = AffineMap1D(uP**p1, offset)
        c0 = coefficient(base)
        res = affine_orbit_decide(theta, c0, a)
        trace.add("affine", map=(theta.multiplier, theta.offset), start=c0, target=a, base=base, period=p1, result=str(res))
        results.append(Found(base + p1 * res.witness) if isinstance(res, Found) else res)
    return _min_decision(*results) if results else Refuted("only k = 0 matches the second factor")


# type IV ------------------------------------------------------------------------


def _type_IV(phi, g, h, mode, cfg, trace) -> Decision:
    d = phi.type_data
    f, s = d.phi, d.psi
    y = g.second
    ls = _log(s, y, h.second, mode, cfg, trace, "second factor")
    if not ls.exact:
        return _undecided(ls, "second factor")
    if ls.is_empty:
        return Refuted("second component never reaches the target")

    def first_at(k: int) -> Word:
        yk = y
        for _ in range(k - 1):
            yk = apply(s, yk)
        return apply(f, yk)

    results = []
    for p0, p1 in sorted(ls.solutions.parts):
        if p0 >= 1:
            ok = _same(first_at(p0), h.first, mode)
            trace.add("check", k=p0, result=ok)
            if ok:
                results.append(Found(p0))
                continue
        if p1:
            # from here on the first component no longer changes (up to conjugacy)
            ok = _same(first_at(p0 + p1), h.first, mode)
            trace.add("check", k=p0 + p1, result=ok, note="stands for the whole tail")
            results.append(Found(p0 + p1) if ok else Refuted())
    return _min_decision(*results) if results else Refuted("only k = 0 matches the second factor")


# type V -------------------------------------------------------------------------


def _type_V(phi, g, h, mode, cfg, trace) -> Decision:
    d = phi.type_data
    v = d.v
    if h.first.letters:
        return Refuted("first component is trivial after one step")
    c = weighted_exponent(g.first, d.Q) + weighted_exponent(g.second, d.S)
    a = _exponent(h.second, v, mode)
    trace.add("exponents", second=a, start=c)
    if a is None:
        return Refuted("second component is not a power of the root")
    if c == 0:
        trace.add("degenerate", note="every iterate from k = 1 on is trivial")
        return Found(1) if a == 0 else Refuted("iterates are trivial, target is not")
    vS = weighted_exponent(v, d.S)
    res = scalar_geometric_decide(vS, c, a)
    trace.add("scalar", args=(vS, c, a), result=str(res))
    return res


# type VI ------------------------------------------------------------------------


def _split_orbits(f1: FreeMap, g1: Word, h1: Word, f2: FreeMap, g2: Word, h2: Word, mode, cfg, trace, positive) -> Decision:
    """Least ``k`` (``>= 1`` when ``positive``) with both free orbits on target."""
    l1 = _log(f1, g1, h1, mode, cfg, trace, "first factor")
    if l1.is_empty:
        return Refuted("first component never reaches the target")
    l2 = _log(f2, g2, h2, mode, cfg, trace, "second factor")
    if l2.is_empty:
        return Refuted("second component never reaches the target")
    lo = 1 if positive else 0
    if l1.exact and l2.exact:
        both = l1.solutions.intersect(l2.solutions)
        trace.add("intersect", result=str(both))
        k = both.intersect(SemilinearSet1D.progression(lo, 1)).min()
        return Found(k) if k is not None else Refuted("log sets are disjoint")
    # a finite exact side leaves finitely many candidates to test directly
    for known, other, (f, x, z) in ((l1, l2, (f2, g2, h2)), (l2, l1, (f1, g1, h1))):
        if known.exact and all(q == 0 for _, q in known.solutions.parts):
            for k in sorted(b for b, _ in known.solutions.parts):
                if k < lo:
                    continue
                w = x
                for _ in range(k):
                    w = apply(f, w)
                ok = _same(w, z, mode)
                trace.add("check", k=k, result=ok)
                if ok:
                    return Found(k)
            return Refuted("no candidate from the finite log set matches")
    bad = l1 if not l1.exact else l2
    return _undecided(bad, "first factor" if bad is l1 else "second factor")


def _type_VI(phi, g, h, mode, cfg, trace) -> Decision:
    d = phi.type_data
    return _split_orbits(d.phi, g.first, h.first, d.psi, g.second, h.second, mode, cfg, trace, True)


# type VII -----------------------------------------------------------------------


def _type_VII(phi, g, h, mode, cfg, trace) -> Decision:
    d = phi.type_data
    f, s = d.phi, d.psi  # f: F_n -> F_m, s: F_m -> F_n
    fs, sf = compose(f, s), compose(s, f)
    x, y = g.first, g.second

    trace.add("parity", which="even")
    even = _split_orbits(fs, x, h.first, sf, y, h.second, mode, cfg, trace, True)
    even = Found(2 * even.witness) if isinstance(even, Found) else even

    odd_a = _odd_via_return(phi, fs, sf, g, h, mode, cfg, trace)
    trace.add("parity", which="odd, shifted start")
    odd_b = _split_orbits(fs, apply(s, y), h.first, sf, apply(f, x), h.second, mode, cfg, trace, False)
    odd_b = Found(2 * odd_b.witness + 1) if isinstance(odd_b, Found) else odd_b
    if odd_a.decided and odd_b.decided and str(odd_a) != str(odd_b):
        raise AssertionError(f"odd-parity routes disagree: {odd_a} vs {odd_b}")
    odd = odd_a if odd_a.decided else odd_b
    trace.add("parity-merge", even=str(even), odd=str(odd))
    return _min_decision(even, odd, check=lambda k: holds(phi, g, h, k, mode))


def _odd_via_return(phi, fs, sf, g, h, mode, cfg, trace) -> Decision:
    """Odd solutions through the even returns ``g Phi^r ~ h Phi``."""
    trace.add("parity", which="odd, via return to h Phi")
    hp = phi.apply(h)
    ret = _split_orbits(fs, g.first, hp.first, sf, g.second, hp.second, mode, cfg, trace, True)
    if not isinstance(ret, Found):
        return ret
    r = 2 * ret.witness
    p1 = is_periodic(fs, hp.first, mode, cfg)
    p2 = is_periodic(sf, hp.second, mode, cfg)
    trace.add("periodicity", point="h Phi", first=str(p1), second=str(p2))
    if isinstance(p1, BoundExceeded) or isinstance(p2, BoundExceeded):
        return BoundExceeded(None, "periodicity of h Phi undecided")
    if isinstance(p1, Refuted) or isinstance(p2, Refuted):
        ok = holds(phi, g, h, r - 1, mode)
        trace.add("check", k=r - 1, result=ok, note="unique candidate")
        return Found(r - 1) if ok else Refuted("the unique odd candidate fails")
    period = 2 * lcm(p1.witness, p2.witness)
    cur = phi.power_apply(g, r - 1)
    for k in range(r - 1, r + period, 2):
        if _rel(cur, h, mode):
            trace.add("check", k=k, result=True)
            return Found(k)
        cur = phi.apply(phi.apply(cur))
    trace.add("check", k=f"{r - 1}..{r - 1 + period}", result=False)
    return Refuted("no odd iterate around the cycle matches")


_PROCEDURES = {
    "I": _type_I,
    "II": _type_II,
    "III": _type_III,
    "IV": _type_IV,
    "V": _type_V,
    "VI": _type_VI,
    "VII": _type_VII,
}


# entry points -------------------------------------------------------------------


def _check_ranks(phi: ProductEndo, *elems: ProductElement) -> None:
    for e in elems:
        if e.first.rank != phi.n or e.second.rank != phi.m:
            raise ValueError(f"element {e} does not live in F_{phi.n} x F_{phi.m}")


def _decide(phi: ProductEndo, g: ProductElement, h: ProductElement, mode: str, cfg: OracleConfig) -> Outcome:
    _check_ranks(phi, g, h)
    if phi.pattern() in MIRROR_PATTERNS:
        swap = lambda e: ProductElement(e.second, e.first)  # noqa: E731
        out = _decide(phi.mirrored(), swap(g), swap(h), mode, cfg)
        out.trace.mirrored = True
        return out
    trace = ReductionTrace(tag=phi.tag, mode=mode)
    if _rel(g, h, mode):
        trace.add("check", k=0, result=True)
        return Outcome(Found(0), trace)
    trace.add("check", k=0, result=False)
    res = _PROCEDURES[phi.tag](phi, g, h, mode, cfg, trace)
    if isinstance(res, Found) and not holds(phi, g, h, res.witness, mode):
        raise AssertionError(f"type {phi.tag} witness k={res.witness} failed direct verification")
    return Outcome(res, trace)


def decide_eq(phi: ProductEndo, g: ProductElement, h: ProductElement, cfg: OracleConfig = DEFAULT) -> Outcome:
    """Least ``k >= 0`` with ``g Phi^k == h``."""
    return _decide(phi, g, h, EQUAL, cfg)


def decide_conj(phi: ProductEndo, g: ProductElement, h: ProductElement, cfg: OracleConfig = DEFAULT) -> Outcome:
    """Least ``k >= 0`` with ``g Phi^k`` componentwise conjugate to ``h``."""
    return _decide(phi, g, h, CONJ, cfg)
