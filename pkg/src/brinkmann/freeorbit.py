"""Orbit problems inside a single free group, answered by bounded search.

Every answer is three-valued.  ``Found`` and ``Refuted`` carry exact
certificates: a recomputed witness, a closed orbit, an abelianization
argument, or a provable length blow-up.  When none of these applies within
the configured budget the answer is ``BoundExceeded``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterator

from .decision import BoundExceeded, Decision, Found, Refuted
from .linear import EMPTY, SemilinearSet1D, orbit_is_finite, orbit_solutions
from .maps import FreeMap, apply, image_graph, is_injective, map_power
from .words import (
    Word,
    abelianize,
    canonical_cyclic,
    conjugating_powers,
    conjugator,
    cyclic_core,
    invert,
    product,
)

__all__ = [
    "OracleConfig",
    "LogSet",
    "INFINITE_ORBIT",
    "br_equal",
    "br_conj",
    "log_set",
    "is_periodic",
    "twisted_conj",
    "finite_conj_orbit",
    "abelian_matrix",
    "orbit_words",
    "inner_power",
]

INFINITE_ORBIT = "infinite"


@dataclass(frozen=True)
class OracleConfig:
    max_steps: int = 10_000
    max_word_length: int = 10_000
    conjugator_length_bound: int = 12
    # total letters produced while iterating a map; keeps a single query affordable
    work_limit: int = 2_000_000

    def __post_init__(self):
        for name in ("max_steps", "max_word_length", "conjugator_length_bound", "work_limit"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


DEFAULT = OracleConfig()


@dataclass(frozen=True)
class LogSet:
    """``{k >= 0 : x phi^k = z}`` (or conjugate to z).

    ``kind`` is "exact" (``solutions`` is the whole set, possibly empty) or
    "undecided" (``solutions`` lists the hits seen up to ``checked_up_to``).
    """

    kind: str
    solutions: SemilinearSet1D = EMPTY
    checked_up_to: int = 0
    reason: str = ""

    @property
    def exact(self) -> bool:
        return self.kind == "exact"

    @property
    def is_empty(self) -> bool:
        return self.exact and self.solutions.is_empty()

    def __str__(self) -> str:
        if self.exact:
            return "Empty" if self.solutions.is_empty() else f"Exact({self.solutions})"
        return f"Undecided(checked_up_to={self.checked_up_to})"


def abelian_matrix(phi: FreeMap) -> tuple:
    """Rows are the abelianized images, so ab(u phi) = ab(u) A."""
    return tuple(tuple(abelianize(w)) for w in phi.images)


def _cancellation_free(phi: FreeMap) -> bool:
    """Every image has length >= 2 and no two consecutive images cancel.

    Then reduced (or cyclically reduced) words at least double in length
    under phi, so their lengths increase strictly.
    """
    if not phi.is_endo():
        return False
    firsts, lasts = {}, {}
    for i, w in enumerate(phi.images, 1):
        if len(w) < 2:
            return False
        firsts[i], lasts[i] = w.letters[0], w.letters[-1]
        firsts[-i], lasts[-i] = -w.letters[-1], -w.letters[0]
    for s in firsts:
        for t in firsts:
            if t != -s and lasts[s] == -firsts[t]:
                return False
    return True


def _mat_mul(A: tuple, B: tuple) -> tuple:
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in zip(*B)) for row in A)


@lru_cache(maxsize=1024)
def inner_power(phi: FreeMap, max_period: int = 12) -> tuple[int, Word] | None:
    """Least ``p`` with ``phi^p`` inner, with ``c`` such that ``g phi^p == c^-1 g c``.

    Only periods where the abelianized map has finite order are tried; for
    rank 2 that is exactly where some power is inner.
    """
    if not phi.is_endo():
        return None
    n = phi.domain_rank
    A = abelian_matrix(phi)
    eye = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    P = A
    for p in range(1, max_period + 1):
        if P == eye:
            break
        P = _mat_mul(P, A)
    else:
        return None
    power = map_power(phi, p)
    gens = [Word(n, (i,)) for i in range(1, n + 1)]
    c0 = conjugator(gens[0], power.images[0])
    if c0 is None:
        return None
    # every candidate is gens[0]^i c0
    allowed: set[int] | None = None
    for g, img in zip(gens[1:], power.images[1:]):
        target = product(n, (c0, img, invert(c0)))
        sols = conjugating_powers(gens[0], g, target)
        if sols is None:
            continue
        allowed = set(sols) if allowed is None else allowed & set(sols)
        if not allowed:
            return None
    i = min(allowed) if allowed else 0
    c = product(n, (gens[0] ** i, c0))
    return p, c


def _inner_log(phi: FreeMap, x: Word, z: Word) -> SemilinearSet1D | None:
    """Exact ``{k : x phi^k == z}`` when some power of ``phi`` is inner."""
    hit = inner_power(phi)
    if hit is None:
        return None
    p, c = hit
    parts = []
    w = x
    for r in range(p):
        sols = conjugating_powers(c, w, z)
        if sols is None:
            parts.append((r, p))
        else:
            parts.extend((r + p * j, 0) for j in sols if j >= 0)
        w = apply(phi, w)
    return SemilinearSet1D.of(parts)


def orbit_words(phi: FreeMap, x: Word, steps: int) -> Iterator[Word]:
    cur = x
    for _ in range(steps + 1):
        yield cur
        cur = apply(phi, cur)


@dataclass
class _Scan:
    hits: list
    status: str
    k: int
    cycle: tuple | None = None


def _scan(phi: FreeMap, x: Word, z: Word | None, mode: str, cfg: OracleConfig, first_only: bool) -> _Scan:
    if not phi.is_endo():
        raise ValueError("orbit problems need an endomorphism")
    if mode not in ("equal", "conj"):
        raise ValueError(f"unknown mode {mode!r}")
    conj = mode == "conj"
    hits: list[int] = []
    kab_max = None
    if z is not None and phi.domain_rank <= 2:
        kab = orbit_solutions(abelian_matrix(phi), abelianize(x), abelianize(z))
        if kab.is_empty():
            return _Scan(hits, "abelian", 0)
        if all(q == 0 for _, q in kab.parts):
            kab_max = max(b for b, _ in kab.parts)
    growth = _cancellation_free(phi)
    if z is not None:
        zkey = canonical_cyclic(z) if conj else z
        zlen = len(zkey)
    cur = canonical_cyclic(x) if conj else x
    seen: dict = {}
    k = 0
    work = 0
    while True:
        if cur in seen:
            q = seen[cur]
            return _Scan(hits, "cycle", k, (q, k - q))
        seen[cur] = k
        if z is not None and cur == zkey:
            hits.append(k)
            if first_only:
                return _Scan(hits, "hit", k)
        if kab_max is not None and k >= kab_max:
            return _Scan(hits, "abelian", k)
        if growth and z is not None and len(cur) > zlen:
            return _Scan(hits, "growth", k)
        if k >= cfg.max_steps:
            return _Scan(hits, "steps", k)
        if len(cur) > cfg.max_word_length:
            return _Scan(hits, "length", k)
        if work > cfg.work_limit:
            return _Scan(hits, "work", k)
        cur = apply(phi, cur)
        if conj:
            cur = canonical_cyclic(cur)
        work += len(cur)
        k += 1


_EXACT = {"cycle", "abelian", "growth"}
_REASONS = {
    "cycle": "orbit closed into a cycle",
    "abelian": "excluded by the abelianized orbit",
    "growth": "lengths grow strictly past the target",
}


_INNER = "a power of the map is inner; solved the conjugation-by-powers equation"


def _holds(phi: FreeMap, x: Word, z: Word, k: int, mode: str) -> bool:
    w = x
    for _ in range(k):
        w = apply(phi, w)
    if mode == "equal":
        return w == z
    return canonical_cyclic(w) == canonical_cyclic(z)


def _brinkmann(phi: FreeMap, x: Word, z: Word, mode: str, cfg: OracleConfig) -> Decision:
    scan = _scan(phi, x, z, mode, cfg, first_only=True)
    if scan.hits:
        return Found(scan.hits[0])
    if scan.status in _EXACT:
        return Refuted(_REASONS[scan.status])
    if mode == "equal":
        sols = _inner_log(phi, x, z)
        if sols is not None:
            k = sols.min()
            return Found(k) if k is not None else Refuted(_INNER)
    return BoundExceeded(scan.k, f"gave up on {scan.status} limit")


def br_equal(phi: FreeMap, x: Word, z: Word, cfg: OracleConfig = DEFAULT) -> Decision:
    """Least ``k`` with ``x phi^k == z``."""
    return _brinkmann(phi, x, z, "equal", cfg)


def br_conj(phi: FreeMap, x: Word, z: Word, cfg: OracleConfig = DEFAULT) -> Decision:
    """Least ``k`` with ``x phi^k`` conjugate to ``z``."""
    return _brinkmann(phi, x, z, "conj", cfg)


def log_set(phi: FreeMap, x: Word, z: Word, mode: str = "equal", cfg: OracleConfig = DEFAULT) -> LogSet:
    if mode == "equal":
        sols = _inner_log(phi, x, z)
        if sols is not None:
            _check_members(phi, x, z, sols, mode)
            return LogSet("exact", sols, 0, _INNER)
    scan = _scan(phi, x, z, mode, cfg, first_only=False)
    if scan.status not in _EXACT and scan.hits:
        # later hits exist exactly when z returns to itself, and then they
        # recur with the least return time
        k0 = scan.hits[0]
        per = is_periodic(phi, z, mode, cfg)
        if isinstance(per, Found):
            sols = SemilinearSet1D.progression(k0, per.witness)
            return LogSet("exact", sols, scan.k, "first hit plus the period of the target")
        if isinstance(per, Refuted):
            return LogSet("exact", SemilinearSet1D.single(k0), scan.k, "first hit; the target is not periodic")
    if scan.status not in _EXACT:
        return LogSet("undecided", SemilinearSet1D.of((h, 0) for h in scan.hits), scan.k, scan.status)
    if scan.status == "cycle":
        q, p = scan.cycle
        sols = SemilinearSet1D.of((h, 0) if h < q else (h, p) for h in scan.hits)
    else:
        sols = SemilinearSet1D.of((h, 0) for h in scan.hits)
    _check_members(phi, x, z, sols, mode)
    return LogSet("exact", sols, scan.k, _REASONS[scan.status])


def _check_members(phi: FreeMap, x: Word, z: Word, sols: SemilinearSet1D, mode: str) -> None:
    for k in sorted(sols.members_upto(max((b + q for b, q in sols.parts), default=0)))[:2]:
        if not _holds(phi, x, z, k, mode):
            raise AssertionError(f"log set member {k} failed recomputation")


def is_periodic(phi: FreeMap, x: Word, mode: str = "equal", cfg: OracleConfig = DEFAULT) -> Decision:
    """Least ``p >= 1`` with ``x phi^p == x`` (or conjugate to x)."""
    conj = mode == "conj"
    start = canonical_cyclic(x) if conj else x
    if not start.letters:
        return Found(1)
    if phi.domain_rank <= 2:
        back = orbit_solutions(abelian_matrix(phi), abelianize(x), abelianize(x))
        if not any(b >= 1 or q > 0 for b, q in back.parts):
            return Refuted("the abelianized orbit never returns")
    if _cancellation_free(phi):
        return Refuted("lengths grow strictly")
    if not conj:
        back = _inner_log(phi, apply(phi, x), x)
        if back is not None:
            k = back.min()
            return Found(k + 1) if k is not None else Refuted(_INNER)
    scan = _scan(phi, x, None, mode, cfg, first_only=False)
    if scan.status == "cycle":
        q, p = scan.cycle
        if q == 0:
            return Found(p)
        return Refuted("orbit enters a cycle that avoids the start")
    return BoundExceeded(scan.k, f"gave up on {scan.status} limit")


def finite_conj_orbit(phi: FreeMap, x: Word, cfg: OracleConfig = DEFAULT, check_injective: bool = True) -> Decision:
    """Shape ``(q, p)`` of the orbit of the conjugacy class of ``x``.

    ``q`` is where the periodic part starts and ``p`` its period; an
    infinite orbit gives ``Found(INFINITE_ORBIT)`` when certified.
    """
    if check_injective and not is_injective(phi):
        raise ValueError("finite_conj_orbit needs an injective endomorphism")
    if phi.domain_rank <= 2 and not orbit_is_finite(abelian_matrix(phi), abelianize(x)):
        return Found(INFINITE_ORBIT, "abelianized orbit is infinite")
    if _cancellation_free(phi) and cyclic_core(x)[0].letters:
        return Found(INFINITE_ORBIT, "cyclic lengths grow strictly")
    scan = _scan(phi, x, None, "conj", cfg, first_only=False)
    if scan.status != "cycle":
        return BoundExceeded(scan.k, f"gave up on {scan.status} limit")
    q, p = scan.cycle
    note = ""
    # relation x phi^(q+p) = u^-1 (x phi^q) u; report whether u avoids the image
    xq = x
    for _ in range(q):
        xq = apply(phi, xq)
    xqp = xq
    for _ in range(p):
        xqp = apply(phi, xqp)
    u = conjugator(xq, xqp)
    if u is not None:
        inside = image_graph(phi).contains(u)
        note = f"conjugator {u} {'lies in' if inside else 'avoids'} the image"
    return Found((q, p), note)


def _solve_row_lattice(B: tuple, c: tuple) -> tuple | None | bool:
    """Integer ``v`` with ``v B == c`` for a 2x2 integer ``B``.

    Returns the unique solution when B is invertible, True when solvable
    but not unique, and None when there is no integer solution.
    """
    (a, b), (cc, d) = B
    det = a * d - b * cc
    if det != 0:
        # v = c B^-1, B^-1 = adj / det
        v0 = c[0] * d - c[1] * cc
        v1 = -c[0] * b + c[1] * a
        if v0 % det or v1 % det:
            return None
        return (v0 // det, v1 // det)
    rows = [r for r in B if r != (0, 0)]
    if not rows:
        return True if c == (0, 0) else None
    r = rows[0]
    g = gcd(r[0], r[1])
    p = (r[0] // g, r[1] // g)
    coeffs = []
    for row in B:
        coeffs.append(row[0] // p[0] if p[0] else row[1] // p[1])
    if c[0] * p[1] != c[1] * p[0]:
        return None
    cc_ = c[0] // p[0] if p[0] else c[1] // p[1]
    step = gcd(coeffs[0], coeffs[1])
    return True if cc_ % step == 0 else None


def twisted_conj(phi: FreeMap, x: Word, z: Word, cfg: OracleConfig = DEFAULT) -> Decision:
    """Some ``u`` with ``x == (u^-1 phi) z u``, searched up to the conjugator bound."""
    if not phi.is_endo():
        raise ValueError("twisted conjugacy needs an endomorphism")
    n = phi.domain_rank

    def verified(u: Word) -> Found:
        if product(n, (invert(apply(phi, u)), z, u)) != x:
            raise AssertionError("twisted conjugator failed verification")
        return Found(u)

    if phi == FreeMap.identity(n):
        g = conjugator(z, x)
        return verified(g) if g is not None else Refuted("not conjugate")
    target_ab = None
    if n == 2:
        A = abelian_matrix(phi)
        B = ((1 - A[0][0], -A[0][1]), (-A[1][0], 1 - A[1][1]))
        ax, az = abelianize(x), abelianize(z)
        c = (ax[0] - az[0], ax[1] - az[1])
        sol = _solve_row_lattice(B, c)
        if sol is None:
            return Refuted("abelianization has no solution")
        if isinstance(sol, tuple):
            target_ab = sol
    if z == x:
        return verified(Word(n, ()))
    budget = cfg.max_steps * 50
    nodes = 0
    bound = cfg.conjugator_length_bound
    images = phi.images
    inv_images = [invert(w) for w in images]
    # iterative deepening over reduced u, carrying u phi along, so the
    # witness returned is a shortest one
    for depth in range(1, bound + 1):
        stack = [((), Word(n, ()), (0,) * n)]
        while stack:
            letters, uphi, ab = stack.pop()
            nodes += 1
            if nodes > budget:
                return BoundExceeded(depth - 1, "conjugator search budget exhausted")
            if len(letters) == depth:
                u = Word(n, letters)
                if product(n, (uphi, x)) == product(n, (z, u)):
                    return verified(u)
                continue
            remaining = depth - len(letters) - 1
            for s in range(-n, n + 1):
                if s == 0 or (letters and letters[-1] == -s):
                    continue
                nab = list(ab)
                nab[abs(s) - 1] += 1 if s > 0 else -1
                if target_ab is not None and sum(abs(a - b) for a, b in zip(nab, target_ab)) > remaining:
                    continue
                img = images[s - 1] if s > 0 else inv_images[-s - 1]
                stack.append((letters + (s,), product(n, (uphi, img)), tuple(nab)))
    return BoundExceeded(bound, "no conjugator up to the length bound")
