"""Two-sided conjugacy orbits and twisted conjugacy for injective product endomorphisms.

Only types VI and VII with injective components are injective, so both
problems split along the factors (type VII after passing to the square).
"""

from __future__ import annotations

from dataclasses import dataclass

from .decision import BoundExceeded, Decision, Found, Refuted
from .freeorbit import DEFAULT, INFINITE_ORBIT, OracleConfig, br_conj, finite_conj_orbit, twisted_conj
from .linear import LinearPart, PairSolutionSet, pair_intersect_nonempty
from .maps import FreeMap, ProductElement, ProductEndo, apply, compose, is_automorphism, is_injective
from .words import Word, canonical_cyclic, invert, is_conjugate, product

__all__ = [
    "PairSetReport",
    "compute_pair_solution_set",
    "two_brcp",
    "tcp",
    "require_injective",
    "PAIR_SEARCH_LIMIT",
]

# first coordinates tried when neither orbit is known to be finite and the
# map is not an automorphism
PAIR_SEARCH_LIMIT = 32


@dataclass(frozen=True)
class PairSetReport:
    """All ``(p, q)`` with ``x phi^p ~ z phi^q``, with the data that built it.

    ``(r1, s1)`` is the lexicographically least pair, None when the set is empty.  ``q_z`` is
    :data:`INFINITE_ORBIT` when the classes along the orbit of ``z`` never
    repeat; then ``p_z`` is None.
    """

    r1: int | None
    s1: int | None
    q_z: int | str
    p_z: int | None
    solutions: PairSolutionSet

    @property
    def decided(self) -> bool:
        return True


def _iterate(phi: FreeMap, x: Word, k: int) -> Word:
    for _ in range(k):
        x = apply(phi, x)
    return x


def _first_pair(phi: FreeMap, x: Word, z: Word, fx, fz, cfg: OracleConfig):
    """Least ``r1`` having a partner, and that partner's least ``s1``, for infinite class orbits.

    Classes along an infinite orbit never repeat, so every pair lies on the
    diagonal through ``(r1, s1)``.  Returns ``(r1, s1)``, None when no pair
    exists, or a BoundExceeded.
    """
    if (fx.witness == INFINITE_ORBIT) != (fz.witness == INFINITE_ORBIT):
        # x phi^r ~ z phi^s makes both tails share their classes
        return None
    if is_automorphism(phi):
        # phi preserves and reflects conjugacy, so only r - s matters
        back = br_conj(phi, z, x, cfg)
        if isinstance(back, Found):
            return 0, back.witness
        fwd = br_conj(phi, x, z, cfg)
        if isinstance(fwd, Found):
            return fwd.witness, 0
        for d in (back, fwd):
            if isinstance(d, BoundExceeded):
                return d
        return None
    xr = x
    for r in range(PAIR_SEARCH_LIMIT):
        if len(xr) > cfg.max_word_length:
            return BoundExceeded(r, f"x phi^{r} is longer than {cfg.max_word_length} letters")
        d = br_conj(phi, z, xr, cfg)
        if isinstance(d, Found):
            return r, d.witness
        if isinstance(d, BoundExceeded):
            return d
        xr = apply(phi, xr)
    return BoundExceeded(PAIR_SEARCH_LIMIT, "no pair with small first coordinate; both class orbits are infinite")


def _class_keys(phi: FreeMap, x: Word, count: int) -> list[Word]:
    keys = []
    for _ in range(count):
        keys.append(canonical_cyclic(x))
        x = apply(phi, x)
    return keys


def _periodic_pairs(phi: FreeMap, x: Word, z: Word, fx, fz) -> PairSolutionSet:
    """Exact pair set when both class orbits are eventually periodic.

    A preperiodic class can only meet a preperiodic class (otherwise it would
    already be periodic), giving finitely many points.  If the two cycles share
    a class they coincide, with common period ``P``, and the tail pairs are
    ``p >= qx, q >= qz, p - q = c mod P``, covered by two lattice parts.
    """
    (qx, px), (qz, pz) = fx.witness, fz.witness
    xs = _class_keys(phi, x, qx + px)
    zs = _class_keys(phi, z, qz + pz)
    head = frozenset((i, j) for i in range(qx) for j in range(qz) if xs[i] == zs[j])
    parts = []
    hit = next((j for j in range(qz, qz + pz) if zs[j] == xs[qx]), None)
    if hit is not None:
        period = px
        parts.append(LinearPart((qx, hit), period))
        if hit > qz:
            parts.append(LinearPart((qx + period - (hit - qz), qz), period))
    return PairSolutionSet(head, tuple(parts))


def _least_pair(sols: PairSolutionSet) -> tuple[int, int] | None:
    cands = list(sols.finite) + [part.base for part in sols.linear]
    return min(cands) if cands else None


def compute_pair_solution_set(phi: FreeMap, x: Word, z: Word, cfg: OracleConfig = DEFAULT) -> PairSetReport | BoundExceeded:
    if not phi.is_endo() or not is_injective(phi):
        raise ValueError("pair solution sets need an injective endomorphism")
    fx = finite_conj_orbit(phi, x, cfg, check_injective=False)
    fz = finite_conj_orbit(phi, z, cfg, check_injective=False)
    for d in (fx, fz):
        if isinstance(d, BoundExceeded):
            return BoundExceeded(d.bound, f"class orbit shape unknown: {d.detail}")
    if fz.witness == INFINITE_ORBIT:
        qz, pz = INFINITE_ORBIT, None
    else:
        qz, pz = fz.witness
    if fx.witness != INFINITE_ORBIT and qz != INFINITE_ORBIT:
        sols = _periodic_pairs(phi, x, z, fx, fz)
        least = _least_pair(sols)
        r1, s1 = least if least is not None else (None, None)
        report = PairSetReport(r1, s1, qz, pz, sols)
        _spot_check(phi, x, z, report)
        return report
    first = _first_pair(phi, x, z, fx, fz, cfg)
    if isinstance(first, BoundExceeded):
        return first
    if first is None:
        return PairSetReport(None, None, qz, pz, PairSolutionSet())
    r1, s1 = first
    sols = PairSolutionSet(linear=(LinearPart((r1, s1)),))
    report = PairSetReport(r1, s1, qz, pz, sols)
    _spot_check(phi, x, z, report)
    return report


def _spot_check(phi: FreeMap, x: Word, z: Word, report: PairSetReport) -> None:
    pts = list(report.solutions.finite)
    for part in report.solutions.linear:
        pts.extend(part.smallest(3))
    for p, q in pts:
        if not is_conjugate(_iterate(phi, x, p), _iterate(phi, z, q)):
            raise AssertionError(f"pair ({p}, {q}) failed direct conjugacy check")


# product level ------------------------------------------------------------------


def require_injective(phi: ProductEndo) -> None:
    d = phi.type_data
    if d.tag not in ("VI", "VII") or not (is_injective(d.phi) and is_injective(d.psi)):
        raise ValueError(f"needs an injective endomorphism (type VI or VII with injective components), got type {d.tag}")


def _pairs_split(f1: FreeMap, g1: Word, h1: Word, f2: FreeMap, g2: Word, h2: Word, cfg) -> Decision:
    s1 = compute_pair_solution_set(f1, g1, h1, cfg)
    if isinstance(s1, PairSetReport) and s1.solutions.is_empty():
        return Refuted("first factor has no pair")
    s2 = compute_pair_solution_set(f2, g2, h2, cfg)
    if isinstance(s2, PairSetReport) and s2.solutions.is_empty():
        return Refuted("second factor has no pair")
    for s in (s1, s2):
        if isinstance(s, BoundExceeded):
            return s
    pair = pair_intersect_nonempty(s1.solutions, s2.solutions)
    return Found(pair) if pair is not None else Refuted("factor pair sets are disjoint")


def two_brcp(phi: ProductEndo, g: ProductElement, h: ProductElement, cfg: OracleConfig = DEFAULT) -> Decision:
    """Some ``(r, s)`` with ``g Phi^r ~ h Phi^s``, lexicographically least."""
    require_injective(phi)
    d = phi.type_data
    if d.tag == "VI":
        res = _pairs_split(d.phi, g.first, h.first, d.psi, g.second, h.second, cfg)
    else:
        f, s = d.phi, d.psi
        fs, sf = compose(f, s), compose(s, f)
        shifted = lambda e: (apply(s, e.second), apply(f, e.first))  # noqa: E731
        quadrants = []
        for odd_r in (0, 1):
            a = shifted(g) if odd_r else (g.first, g.second)
            for odd_s in (0, 1):
                b = shifted(h) if odd_s else (h.first, h.second)
                q = _pairs_split(fs, a[0], b[0], sf, a[1], b[1], cfg)
                if isinstance(q, Found):
                    r, t = q.witness
                    q = Found((2 * r + odd_r, 2 * t + odd_s))
                quadrants.append(q)
        found = [q.witness for q in quadrants if isinstance(q, Found)]
        if found:
            res = Found(min(found))
        else:
            unknown = [q for q in quadrants if isinstance(q, BoundExceeded)]
            res = unknown[0] if unknown else Refuted("no parity quadrant has a pair")
    if isinstance(res, Found):
        r, t = res.witness
        if not phi.power_apply(g, r).conjugate_to(phi.power_apply(h, t)):
            raise AssertionError(f"pair {res.witness} failed direct verification")
    return res


def tcp(phi: ProductEndo, g: ProductElement, h: ProductElement, cfg: OracleConfig = DEFAULT) -> Decision:
    """Some ``(u, v)`` with ``g == ((u, v)^-1 Phi) h (u, v)``."""
    require_injective(phi)
    d = phi.type_data
    x, y, z, w = g.first, g.second, h.first, h.second
    if d.tag == "VI":
        a = twisted_conj(d.phi, x, z, cfg)
        if isinstance(a, Refuted):
            return a
        b = twisted_conj(d.psi, y, w, cfg)
        if isinstance(b, Refuted) or isinstance(a, BoundExceeded):
            return b if isinstance(b, Refuted) else a
        if isinstance(b, BoundExceeded):
            return b
        u, v = a.witness, b.witness
    else:
        f, s = d.phi, d.psi
        theta = compose(s, f)
        big_x = product(phi.m, (apply(f, x), y))
        big_z = product(phi.m, (apply(f, z), w))
        res = twisted_conj(theta, big_x, big_z, cfg)
        if not isinstance(res, Found):
            return res
        v = res.witness
        u = product(phi.n, (invert(z), apply(s, v), x))
    witness = ProductElement(u, v)
    if _twisted(phi, witness, h) != g:
        raise AssertionError("twisted conjugator failed verification")
    return Found(witness)


def _twisted(phi: ProductEndo, c: ProductElement, h: ProductElement) -> ProductElement:
    left = phi.apply(c.inverse())
    return ProductElement(
        product(phi.n, (left.first, h.first, c.first)),
        product(phi.m, (left.second, h.second, c.second)),
    )
