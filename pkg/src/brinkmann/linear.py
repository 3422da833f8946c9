"""Exact orbit decisions for small rational matrices and semilinear sets.

Vectors are rows: the orbit of ``v0`` under ``M`` is ``v0, v0 M, v0 M^2, ...``.
Everything is exact; floats never enter a decision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .decision import BoundExceeded, Decision, Found, Refuted

__all__ = [
    "SemilinearSet1D",
    "LinearPart",
    "PairSolutionSet",
    "AffineMap1D",
    "OrbitSolver",
    "UnsupportedDimension",
    "orbit_decide",
    "orbit_solutions",
    "orbit_is_finite",
    "affine_orbit_decide",
    "scalar_geometric_decide",
    "power_solutions",
    "sl_intersect",
    "sl_min",
    "pair_membership",
    "pair_intersect_nonempty",
    "mat_power",
    "vec_mat",
]


class UnsupportedDimension(ValueError):
    pass


# ---------------------------------------------------------------------------
# one-dimensional semilinear sets


def _subsumes(big: tuple[int, int], small: tuple[int, int]) -> bool:
    b, q = big
    c, r = small
    if c < b:
        return False
    if q == 0:
        return r == 0 and c == b
    if (c - b) % q:
        return False
    return r % q == 0


@dataclass(frozen=True)
class SemilinearSet1D:
    """Finite union of progressions ``b + qN`` (``q == 0`` is the singleton ``{b}``)."""

    parts: frozenset = frozenset()

    @classmethod
    def of(cls, pairs: Iterable[tuple[int, int]]) -> "SemilinearSet1D":
        pairs = {(int(b), int(q)) for b, q in pairs}
        for b, q in pairs:
            if b < 0 or q < 0:
                raise ValueError("base and period must be nonnegative")
        kept = []
        for p in sorted(pairs, key=lambda x: (x[1] == 0, x[1], x[0])):
            if not any(_subsumes(k, p) for k in kept):
                kept.append(p)
        kept = [p for p in kept if not any(o != p and _subsumes(o, p) for o in kept)]
        return cls(frozenset(kept))

    @classmethod
    def empty(cls) -> "SemilinearSet1D":
        return cls(frozenset())

    @classmethod
    def single(cls, k: int) -> "SemilinearSet1D":
        return cls(frozenset({(k, 0)}))

    @classmethod
    def progression(cls, b: int, q: int) -> "SemilinearSet1D":
        return cls(frozenset({(b, q)}))

    def is_empty(self) -> bool:
        return not self.parts

    def __contains__(self, k: int) -> bool:
        for b, q in self.parts:
            if k == b or (q and k > b and (k - b) % q == 0):
                return True
        return False

    def min(self) -> int | None:
        return min((b for b, _ in self.parts), default=None)

    def union(self, other: "SemilinearSet1D") -> "SemilinearSet1D":
        if not other.parts:
            return self
        if not self.parts:
            return other
        return SemilinearSet1D.of(self.parts | other.parts)

    def intersect(self, other: "SemilinearSet1D") -> "SemilinearSet1D":
        out = set()
        for p in self.parts:
            for q in other.parts:
                r = _intersect_progressions(p, q)
                if r is not None:
                    out.add(r)
        return SemilinearSet1D.of(out)

    def shift(self, c: int) -> "SemilinearSet1D":
        if c < 0:
            return SemilinearSet1D.of((b + c, q) for b, q in self.parts)
        # a shift to the right keeps the set normalized
        return SemilinearSet1D(frozenset((b + c, q) for b, q in self.parts))

    def members_upto(self, n: int) -> list[int]:
        out = set()
        for b, q in self.parts:
            if q == 0:
                if b <= n:
                    out.add(b)
            else:
                out.update(range(b, n + 1, q))
        return sorted(out)

    def __str__(self) -> str:
        if not self.parts:
            return "{}"
        bits = []
        for b, q in sorted(self.parts):
            bits.append(f"{{{b}}}" if q == 0 else f"{b}+{q}N")
        return " U ".join(bits)


ALL = SemilinearSet1D(frozenset({(0, 1)}))
EMPTY = SemilinearSet1D(frozenset())


def _intersect_progressions(p: tuple[int, int], r: tuple[int, int]) -> tuple[int, int] | None:
    b1, q1 = p
    b2, q2 = r
    if q1 == 0 and q2 == 0:
        return (b1, 0) if b1 == b2 else None
    if q1 == 0:
        return (b1, 0) if b1 >= b2 and (b1 - b2) % q2 == 0 else None
    if q2 == 0:
        return (b2, 0) if b2 >= b1 and (b2 - b1) % q1 == 0 else None
    g = math.gcd(q1, q2)
    if (b2 - b1) % g:
        return None
    lcm = q1 // g * q2
    # x = b1 + q1*t with q1*t = b2 - b1 (mod q2)
    t = ((b2 - b1) // g) * pow(q1 // g, -1, q2 // g) % (q2 // g) if q2 // g > 1 else 0
    x = b1 + q1 * t
    lo = max(b1, b2)
    if x < lo:
        x += -((x - lo) // lcm) * lcm
    x = lo + (x - lo) % lcm
    return (x, lcm)


def sl_intersect(a: SemilinearSet1D, b: SemilinearSet1D) -> SemilinearSet1D:
    return a.intersect(b)


def sl_min(a: SemilinearSet1D) -> int | None:
    return a.min()


# ---------------------------------------------------------------------------
# two-dimensional pair sets


@dataclass(frozen=True)
class LinearPart:
    """``base + (1,1)N`` when ``period`` is None, else ``base + (1,1)N + (period,0)N + (0,period)N``."""

    base: tuple[int, int]
    period: int | None = None

    def __contains__(self, pq: tuple[int, int]) -> bool:
        dp, dq = pq[0] - self.base[0], pq[1] - self.base[1]
        if dp < 0 or dq < 0:
            return False
        if self.period is None:
            return dp == dq
        return (dp - dq) % self.period == 0

    def smallest(self, count: int) -> list[tuple[int, int]]:
        """The ``count`` smallest members in lexicographic order of (sum, first)."""
        out = []
        r, s = self.base
        total = 0
        while len(out) < count:
            for dp in range(total + 1):
                dq = total - dp
                if (r + dp, s + dq) in self:
                    out.append((r + dp, s + dq))
                    if len(out) == count:
                        break
            total += 1
        return out

    def __str__(self) -> str:
        gens = "(1,1)N" if self.period is None else f"(1,1)N + ({self.period},0)N + (0,{self.period})N"
        return f"{self.base} + {gens}"


@dataclass(frozen=True)
class PairSolutionSet:
    finite: frozenset = frozenset()
    linear: tuple = ()

    def __contains__(self, pq: tuple[int, int]) -> bool:
        return tuple(pq) in self.finite or any(tuple(pq) in part for part in self.linear)

    def is_empty(self) -> bool:
        return not self.finite and not self.linear

    def members_upto(self, rmax: int, smax: int) -> set[tuple[int, int]]:
        return {(p, q) for p in range(rmax + 1) for q in range(smax + 1) if (p, q) in self}

    def __str__(self) -> str:
        bits = [str(p) for p in sorted(self.finite)] + [str(l) for l in self.linear]
        return " U ".join(bits) if bits else "{}"


def pair_membership(pq: tuple[int, int], s: PairSolutionSet) -> bool:
    return tuple(pq) in s


def _crt(c1: int, m1: int, c2: int, m2: int) -> tuple[int, int] | None:
    """Residue class mod lcm solving x = c1 (m1), x = c2 (m2)."""
    g = math.gcd(m1, m2)
    if (c2 - c1) % g:
        return None
    lcm = m1 // g * m2
    mm = m2 // g
    t = ((c2 - c1) // g) * pow(m1 // g, -1, mm) % mm if mm > 1 else 0
    return (c1 + m1 * t) % lcm, lcm


def _least_in_parts(a: LinearPart, b: LinearPart) -> tuple[int, int] | None:
    (r1, s1), (r2, s2) = a.base, b.base
    if a.period is None and b.period is None:
        if r1 - s1 != r2 - s2:
            return None
        i = max(r1, r2) - r1
        return (r1 + i, s1 + i)
    if a.period is None or b.period is None:
        ray, lat = (a, b) if a.period is None else (b, a)
        (r, s), (R, S) = ray.base, lat.base
        if ((r - R) - (s - S)) % lat.period:
            return None
        i = max(0, R - r, S - s)
        return (r + i, s + i)
    # both lattices: p - q must lie in a residue class; q is then free above a floor
    res = _crt((r1 - s1) % a.period, a.period, (r2 - s2) % b.period, b.period)
    if res is None:
        return None
    c, L = res
    p = max(r1, r2)
    qmin = max(s1, s2)
    q = qmin + ((p - c) - qmin) % L
    return (p, q)


def pair_intersect_nonempty(a: PairSolutionSet, b: PairSolutionSet) -> tuple[int, int] | None:
    """Least common member in lexicographic order, or None."""
    best = None
    for pt in a.finite:
        if pt in b and (best is None or pt < best):
            best = pt
    for pt in b.finite:
        if pt in a and (best is None or pt < best):
            best = pt
    for pa in a.linear:
        for pb in b.linear:
            w = _least_in_parts(pa, pb)
            if w is not None and (best is None or w < best):
                best = w
    return best


# ---------------------------------------------------------------------------
# scalar equations


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _num(x):
    """Exact value, kept as a plain int when integral (ints are much faster)."""
    if isinstance(x, int):
        return x
    x = _frac(x)
    return x.numerator if x.denominator == 1 else x


def _normalize(v: Sequence) -> tuple:
    if type(v) is tuple and len(v) == 2 and type(v[0]) is int and type(v[1]) is int:
        return v
    if all(type(x) is int for x in v):
        return tuple(v)
    return tuple(_num(x) for x in v)


def rational_log(lam, gamma) -> int | None:
    """The ``k >= 0`` with ``lam**k == gamma`` for rational ``lam`` with ``|lam|`` not 0 or 1."""
    if gamma == 0:
        return None
    if isinstance(lam, int) and isinstance(gamma, int) and abs(lam) > 1:
        k, pk = 0, 1
        while abs(pk) < abs(gamma):
            pk *= lam
            k += 1
        return k if pk == gamma else None
    lam, gamma = _frac(lam), _frac(gamma)
    if abs(lam) < 1:
        lam, gamma = 1 / lam, 1 / gamma
    p, q = lam.numerator, lam.denominator
    a, b = gamma.numerator, gamma.denominator
    # lam**k = p**k / q**k is already in lowest terms
    if q == 1 and b != 1:
        return None
    k = 0
    pk, qk = 1, 1
    while abs(pk) < abs(a) or qk < b:
        pk *= p
        qk *= q
        k += 1
    return k if (pk == a and qk == b) else None


def power_solutions(lam, alpha, beta) -> SemilinearSet1D:
    """All ``k >= 0`` with ``alpha * lam**k == beta`` (rationals)."""
    if alpha == 0:
        return ALL if beta == 0 else EMPTY
    if beta == 0:
        return SemilinearSet1D.progression(1, 1) if lam == 0 else EMPTY
    if lam == 0:
        return SemilinearSet1D.single(0) if alpha == beta else EMPTY
    if lam == 1:
        return ALL if alpha == beta else EMPTY
    if lam == -1:
        if beta == alpha:
            return SemilinearSet1D.progression(0, 2)
        if beta == -alpha:
            return SemilinearSet1D.progression(1, 2)
        return EMPTY
    k = rational_log(lam, _frac(beta) / alpha)
    return EMPTY if k is None else SemilinearSet1D.single(k)


def scalar_geometric_decide(t, c, d) -> Decision:
    """Least ``k >= 1`` with ``c * t**(k-1) == d``."""
    sols = power_solutions(t, c, d)
    k = sols.min()
    if k is None:
        return Refuted("no exponent solves the scalar equation")
    return Found(k + 1)


def _parallel_power(lam, base: Sequence, target: Sequence) -> SemilinearSet1D:
    """All ``k`` with ``lam**k * base == target``."""
    if len(base) == 2:
        b0, b1 = base
        t0, t1 = target
        # parallel test by cross product, then the scale factor
        if b0 * t1 != b1 * t0:
            return EMPTY
        if b0 != 0:
            bi, ti = b0, t0
        elif b1 != 0:
            bi, ti = b1, t1
        else:
            return ALL if t0 == 0 and t1 == 0 else EMPTY
    else:
        i = next((j for j, x in enumerate(base) if x != 0), None)
        if i is None:
            return ALL if all(x == 0 for x in target) else EMPTY
        bi, ti = base[i], target[i]
        if any(bi * t != ti * b for b, t in zip(base, target)):
            return EMPTY
    if isinstance(bi, int) and isinstance(ti, int) and ti % bi == 0:
        c = ti // bi
    else:
        c = _num(_frac(ti) / bi)
    return power_solutions(lam, 1, c)


# ---------------------------------------------------------------------------
# quadratic field arithmetic


class QF:
    """``a + b*sqrt(D)`` for a fixed non-square rational ``D``."""

    __slots__ = ("a", "b", "D")

    def __init__(self, a, b, D):
        self.a = _frac(a)
        self.b = _frac(b)
        self.D = D

    def __add__(self, o):
        if not isinstance(o, QF):
            return QF(self.a + o, self.b, self.D)
        return QF(self.a + o.a, self.b + o.b, self.D)

    __radd__ = __add__

    def __neg__(self):
        return QF(-self.a, -self.b, self.D)

    def __sub__(self, o):
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if not isinstance(o, QF):
            return QF(self.a * o, self.b * o, self.D)
        return QF(self.a * o.a + self.b * o.b * self.D, self.a * o.b + self.b * o.a, self.D)

    __rmul__ = __mul__

    def conj(self):
        return QF(self.a, -self.b, self.D)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.D

    def trace(self) -> Fraction:
        return 2 * self.a

    def __truediv__(self, o):
        if not isinstance(o, QF):
            return QF(self.a / o, self.b / o, self.D)
        n = o.norm()
        return self * o.conj() * (1 / n)

    def __rtruediv__(self, o):
        return QF(o, 0, self.D) / self

    def __eq__(self, o):
        if not isinstance(o, QF):
            return self.b == 0 and self.a == o
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def sign(self) -> int:
        """Sign in the real embedding with sqrt(D) > 0 (D > 0 only)."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 D
        lhs, rhs = self.a * self.a, self.b * self.b * self.D
        return sa if lhs > rhs else sb

    def __abs__(self):
        return self if self.sign() >= 0 else -self

    def __pow__(self, k: int):
        result = QF(1, 0, self.D)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __repr__(self):
        return f"QF({self.a}, {self.b}, D={self.D})"


def _vp(x: Fraction, p: int) -> int:
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def _smallest_prime_factor(n: int) -> int:
    f = 2
    while f * f <= n:
        if n % f == 0:
            return f
        f += 1
    return n


def quadratic_log(lam: QF, gamma: QF, t: Fraction, d: Fraction) -> SemilinearSet1D:
    """All ``k >= 0`` with ``lam**k == gamma`` for an irrational quadratic ``lam`` of trace t, norm d."""
    if gamma.is_zero():
        return EMPTY
    if abs(d) != 1:
        k = rational_log(d, gamma.norm())
        if k is None or lam**k != gamma:
            return EMPTY
        return SemilinearSet1D.single(k)
    if gamma == 1:
        zero_hit = True
    else:
        zero_hit = False
    if t.denominator != 1:
        # lam is a unit-norm non-integer: the p-adic size of the trace of lam**k is k * v_p(t)
        if zero_hit:
            return SemilinearSet1D.single(0)
        p = _smallest_prime_factor(t.denominator)
        tr = gamma.trace()
        if tr == 0:
            return EMPTY
        vt, vg = _vp(t, p), _vp(tr, p)
        if vg % vt or vg // vt < 1:
            return EMPTY
        k = vg // vt
        return SemilinearSet1D.single(k) if lam**k == gamma else EMPTY
    if lam.D < 0:
        # integral trace, norm 1, complex: a root of unity of order 3, 4 or 6
        order = {-1: 3, 0: 4, 1: 6}[int(t)]
        hits = []
        p = QF(1, 0, lam.D)
        for k in range(order):
            if p == gamma:
                hits.append(k)
            p = p * lam
        return SemilinearSet1D.of((k, order) for k in hits)
    # real quadratic unit, |lam| != 1: compare absolute values exactly
    if zero_hit:
        return SemilinearSet1D.single(0)
    base, goal = lam, gamma
    if (abs(lam) - 1).sign() < 0:
        base, goal = 1 / lam, 1 / gamma
    goal_abs = abs(goal)
    p = QF(1, 0, lam.D)
    k = 0
    while (goal_abs - abs(p)).sign() > 0:
        p = p * base
        k += 1
    return SemilinearSet1D.single(k) if p == goal else EMPTY


# ---------------------------------------------------------------------------
# matrices


def vec_mat(v: Sequence, M: Sequence[Sequence]) -> tuple:
    n = len(M)
    return tuple(sum(v[i] * M[i][j] for i in range(n)) for j in range(len(M[0])))


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    return tuple(tuple(sum(A[i][l] * B[l][j] for l in range(k)) for j in range(m)) for i in range(n))


def mat_power(M, k: int):
    n = len(M)
    result = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    base = M
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


class OrbitSolver:
    """Orbit decisions for one fixed matrix of dimension at most 2.

    The spectral data of the matrix is computed once; each query then
    costs a handful of exact operations.
    """

    def __init__(self, M: Sequence[Sequence]):
        dim = len(M)
        if dim > 2:
            raise UnsupportedDimension(f"orbit decision is implemented up to dimension 2, got {dim}")
        if any(len(row) != dim for row in M):
            raise ValueError("matrix must be square")
        self.dim = dim
        self.M = tuple(tuple(_num(x) for x in row) for row in M)
        self._powers = [tuple(tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim))]
        if dim == 0:
            self.case = "empty"
            return
        if dim == 1:
            self.case = "scalar"
            self.lam = self.M[0][0]
            return
        (a, b), (c, e) = self.M
        a, b, c, e = (_frac(x) for x in (a, b, c, e))
        self.t = t = a + e
        self.d = d = a * e - b * c
        self.disc = D = t * t - 4 * d
        self._d = _num(d)
        self._t = _num(t)
        if d == 0:
            self.case = "singular"
            return
        if D == 0:
            self.case = "repeated"
            self.lam = t / 2
            self.N = ((a - self.lam, b), (c, e - self.lam))
            return
        s = _rational_sqrt(D)
        if s is not None:
            self.case = "split"
            self.l1 = (t + s) / 2
            self.l2 = (t - s) / 2
            # projector onto the l1 eigenspace (rows act on the left)
            inv = 1 / (self.l1 - self.l2)
            self.P1 = ((inv * (a - self.l2), inv * b), (inv * c, inv * (e - self.l2)))
            return
        self.case = "quadratic"
        r = QF(0, 1, D)
        self.l1 = (r + t) * Fraction(1, 2)
        l2 = (t - r) * Fraction(1, 2)
        inv = 1 / r
        self.P1 = ((inv * (a - l2), inv * b), (inv * c, inv * (e - l2)))

    def solutions(self, v0: Sequence, target: Sequence) -> SemilinearSet1D:
        """Every ``k >= 0`` with ``v0 M^k == target``."""
        if len(v0) != self.dim or len(target) != self.dim:
            raise ValueError("vector dimension does not match the matrix")
        v0 = _normalize(v0)
        target = _normalize(target)
        case = self.case
        if case == "empty":
            return ALL
        if case == "scalar":
            return power_solutions(self.lam, v0[0], target[0])
        if case != "singular":
            quick = self._invariant_filter(v0, target)
            if quick is not None:
                return quick
        if case == "singular":
            # M^2 = tM, so v0 M^k = t^(k-1) (v0 M) for k >= 1
            M = self.M
            w = (v0[0] * M[0][0] + v0[1] * M[1][0], v0[0] * M[0][1] + v0[1] * M[1][1])
            later = _parallel_power(self._t, w, target).shift(1)
            return SemilinearSet1D.single(0).union(later) if v0 == target else later
        if case == "repeated":
            lam = self.lam
            n = vec_mat(v0, self.N)
            if n[0] == 0 and n[1] == 0:
                return _parallel_power(lam, v0, target)
            # v0 M^k = lam^k v0 + k lam^(k-1) n, with v0 and n independent
            det = v0[0] * n[1] - v0[1] * n[0]
            alpha = (target[0] * n[1] - target[1] * n[0]) / det
            beta = (v0[0] * target[1] - v0[1] * target[0]) / det
            if alpha == 0:
                return EMPTY
            k = beta * lam / alpha
            if k.denominator != 1 or k < 0:
                return EMPTY
            k = int(k)
            return SemilinearSet1D.single(k) if lam**k == alpha else EMPTY
        if case == "split":
            A = vec_mat(v0, self.P1)
            B = (v0[0] - A[0], v0[1] - A[1])
            a_zero = A[0] == 0 and A[1] == 0
            b_zero = B[0] == 0 and B[1] == 0
            if a_zero:
                return _parallel_power(self.l2, B, target)
            if b_zero:
                return _parallel_power(self.l1, A, target)
            det = A[0] * B[1] - A[1] * B[0]
            c1 = (target[0] * B[1] - target[1] * B[0]) / det
            c2 = (A[0] * target[1] - A[1] * target[0]) / det
            return power_solutions(self.l1, 1, c1).intersect(power_solutions(self.l2, 1, c2))
        # quadratic: v0 = A + conj(A) with A an eigenvector for l1
        if v0[0] == 0 and v0[1] == 0:
            return ALL if target[0] == 0 and target[1] == 0 else EMPTY
        A = (v0[0] * self.P1[0][0] + v0[1] * self.P1[1][0], v0[0] * self.P1[0][1] + v0[1] * self.P1[1][1])
        B = (A[0].conj(), A[1].conj())
        det = A[0] * B[1] - A[1] * B[0]
        c1 = (B[1] * target[0] - B[0] * target[1]) / det
        return quadratic_log(self.l1, c1, self.t, self.d)

    def _invariant_filter(self, v0: tuple, target: tuple) -> SemilinearSet1D | None:
        """Answer from the form q(v) = v x (vM), which satisfies q(vM) = det(M) q(v).

        Returns None when the form does not settle the query.
        """
        M = self.M
        w = (v0[0] * M[0][0] + v0[1] * M[1][0], v0[0] * M[0][1] + v0[1] * M[1][1])
        q0 = v0[0] * w[1] - v0[1] * w[0]
        if q0 == 0:
            if v0[0] == 0 and v0[1] == 0:
                return ALL if target[0] == 0 and target[1] == 0 else EMPTY
            # v0 is an eigenvector: v0 M = lam v0
            i = 0 if v0[0] != 0 else 1
            lam = _num(_frac(w[i]) / v0[i])
            return _parallel_power(lam, v0, target)
        x = (target[0] * M[0][0] + target[1] * M[1][0], target[0] * M[0][1] + target[1] * M[1][1])
        qt = target[0] * x[1] - target[1] * x[0]
        if qt == 0:
            return EMPTY
        d = self._d
        if d == 1:
            return EMPTY if qt != q0 else None
        if d == -1:
            return EMPTY if qt != q0 and qt != -q0 else None
        if isinstance(qt, int) and isinstance(q0, int) and isinstance(d, int):
            if qt % q0:
                return EMPTY
            k = rational_log(d, qt // q0)
        else:
            k = rational_log(d, _frac(qt) / q0)
        if k is None:
            return EMPTY
        return SemilinearSet1D.single(k) if self.apply_power(v0, k) == target else EMPTY

    def power(self, k: int):
        """``M^k``, cached."""
        pw = self._powers
        if k < len(pw):
            return pw[k]
        if k > 64 + len(pw):
            return mat_power(self.M, k)
        while len(pw) <= k:
            pw.append(mat_mul(pw[-1], self.M))
        return pw[k]

    def apply_power(self, v0: Sequence, k: int) -> tuple:
        return vec_mat(v0, self.power(k))

    def decide(self, v0: Sequence, target: Sequence, crosscheck: int | None = None) -> Decision:
        sols = self.solutions(v0, target)
        k = sols.min()
        if k is None:
            if crosscheck:
                hit = brute_force_orbit(self.M, v0, target, crosscheck)
                if hit is not None:
                    raise AssertionError(f"spectral refutation contradicted at k={hit}")
            return Refuted(f"spectral case {self.case}: no exponent")
        if self.apply_power(_normalize(v0), k) != _normalize(target):
            raise AssertionError("orbit witness failed exact recomputation")
        return Found(k)


@lru_cache(maxsize=4096)
def _solver(M: tuple) -> OrbitSolver:
    return OrbitSolver(M)


def _solver_for(M) -> OrbitSolver:
    try:
        # a tuple of tuples hashes directly; the solver normalizes entries itself
        return _solver(M)
    except TypeError:
        return _solver(tuple(tuple(_num(x) for x in row) for row in M))


def orbit_decide(M: Sequence[Sequence], v0: Sequence, target: Sequence, crosscheck: int | None = None) -> Decision:
    """Least ``k >= 0`` with ``v0 M^k == target``; complete for dimension at most 2."""
    return _solver_for(M).decide(v0, target, crosscheck)


def brute_force_orbit(M, v0, target, bound: int) -> int | None:
    """First ``k <= bound`` with ``v0 M^k == target`` by iteration."""
    v = tuple(_frac(x) for x in v0)
    target = tuple(_frac(x) for x in target)
    for k in range(bound + 1):
        if v == target:
            return k
        v = vec_mat(v, M)
    return None


@dataclass(frozen=True)
class AffineMap1D:
    """``c -> multiplier * c + offset`` on the integers."""

    multiplier: int
    offset: int

    def __call__(self, c: int) -> int:
        return self.multiplier * c + self.offset

    def as_matrix(self):
        # row convention: (c, 1) [[m, 0], [o, 1]] = (m c + o, 1)
        return ((self.multiplier, 0), (self.offset, 1))


def affine_orbit_decide(theta: AffineMap1D, a0, target, crosscheck: int | None = None) -> Decision:
    """Least ``k >= 0`` with ``theta^k(a0) == target``."""
    return orbit_decide(theta.as_matrix(), (a0, 1), (target, 1), crosscheck)


def orbit_solutions(M: Sequence[Sequence], v0: Sequence, target: Sequence) -> SemilinearSet1D:
    """The full set of ``k >= 0`` with ``v0 M^k == target`` (dimension at most 2)."""
    return _solver_for(M).solutions(v0, target)


def orbit_is_finite(M: Sequence[Sequence], v0: Sequence) -> bool:
    """Whether ``{v0 M^k}`` is a finite set (dimension at most 2)."""
    s = _solver_for(M)
    if s.dim == 0:
        return True
    # beyond the first dim steps the orbit lives where M is invertible or zero,
    # so it is finite exactly when some later point recurs
    w = _normalize(v0)
    for _ in range(s.dim):
        w = vec_mat(w, s.M)
    later = s.solutions(w, w)
    return any(b >= 1 or q > 0 for b, q in later.parts)
