"""Folded graphs of finitely generated subgroups of a free group.

Every edge carries a weight in the free group on the subgroup generators.
Writing ``pot(v)`` for the label of some fixed path from the base to ``v``,
an edge ``s --a--> t`` of weight ``g`` satisfies
``eval(g) == pot(s) * a * pot(t)^-1`` where ``eval`` sends generator ``i``
to the i-th subgroup generator.  Reading a word along the graph therefore
also produces an expression for it in the generators.
"""

from __future__ import annotations

from .words import Word, invert, product

__all__ = ["SubgroupGraph", "stallings"]


class SubgroupGraph:
    def __init__(self, rank: int, generators: list[Word]):
        self.rank = rank
        self.generators = tuple(generators)
        k = len(self.generators)
        self.k = k
        self.base = 0
        self._one = Word(k, ())
        # adj[v][label] = (target, weight); label -a is stored on the target
        self.adj: dict[int, dict[int, tuple[int, Word]]] = {0: {}}
        self._parent: dict[int, tuple[int, Word]] = {}
        self._next = 1
        for i, w in enumerate(self.generators, start=1):
            if w.rank != rank:
                raise ValueError("generator rank mismatch")
            if w.letters:
                self._add_petal(w, Word(k, (i,)))
        self._trim()
        self._parent.clear()

    # construction -------------------------------------------------------

    def _new_vertex(self) -> int:
        v = self._next
        self._next += 1
        self.adj[v] = {}
        return v

    def _add_petal(self, w: Word, weight: Word) -> None:
        prev = self.base
        letters = w.letters
        for idx, a in enumerate(letters):
            last = idx == len(letters) - 1
            nxt = self.base if last else self._new_vertex()
            self._add_edge(prev, a, nxt, weight if last else self._one)
            prev = nxt

    def _find(self, v: int) -> tuple[int, Word]:
        d = self._one
        while v in self._parent:
            p, dp = self._parent[v]
            d = product(self.k, (dp, d))
            v = p
        return v, d

    def _add_edge(self, s: int, a: int, t: int, g: Word) -> None:
        stack = [(s, a, t, g)]
        k = self.k
        while stack:
            s, a, t, g = stack.pop()
            s, ds = self._find(s)
            t, dt = self._find(t)
            g = product(k, (ds, g, invert(dt)))
            if a < 0:
                s, t, a, g = t, s, -a, invert(g)
            e1 = self.adj[s].get(a)
            e2 = self.adj[t].get(-a)
            if e1 is None and e2 is None:
                self.adj[s][a] = (t, g)
                self.adj[t][-a] = (s, invert(g))
                continue
            if e1 is not None:
                t1, g1 = e1
                if t1 == t:
                    continue
                # pot(t1) pot(t)^-1 = eval(g1^-1 g)
                self._merge(t, t1, product(k, (invert(g1), g)), stack)
            else:
                s2, h = e2
                if s2 == s:
                    continue
                # t --A--> s has weight g^-1, t --A--> s2 has weight h
                self._merge(s2, s, product(k, (g, h)), stack)
            stack.append((s, a, t, g))

    def _merge(self, v2: int, v1: int, d: Word, stack: list) -> None:
        """Merge ``v2`` into ``v1`` where ``eval(d) == pot(v1) pot(v2)^-1``."""
        if v2 == self.base:
            v1, v2, d = v2, v1, invert(d)
        self._parent[v2] = (v1, d)
        edges = self.adj.pop(v2)
        seen = set()
        for b, (t, h) in edges.items():
            if t == v2:
                # loop: both orientations live in ``edges``; requeue once
                if b < 0 or b in seen:
                    continue
                seen.add(b)
                stack.append((v2, b, v2, h))
                continue
            self.adj[t].pop(-b, None)
            stack.append((v2, b, t, h))

    def _trim(self) -> None:
        changed = True
        while changed:
            changed = False
            for v in list(self.adj):
                if v == self.base:
                    continue
                edges = self.adj[v]
                if len(edges) <= 1:
                    for b, (t, _) in edges.items():
                        self.adj[t].pop(-b, None)
                    del self.adj[v]
                    changed = True

    # queries ------------------------------------------------------------

    def num_vertices(self) -> int:
        return len(self.adj)

    def num_edges(self) -> int:
        return sum(1 for v in self.adj for b in self.adj[v] if b > 0)

    def rank_of(self) -> int:
        return self.num_edges() - self.num_vertices() + 1

    def member(self, u: Word) -> Word | None:
        """Expression of ``u`` in the generators, or None if ``u`` is not in the subgroup."""
        if u.rank != self.rank:
            raise ValueError("rank mismatch")
        v = self.base
        weights = []
        for a in u.letters:
            e = self.adj[v].get(a)
            if e is None:
                return None
            v, g = e
            weights.append(g)
        if v != self.base:
            return None
        return product(self.k, weights)

    def contains(self, u: Word) -> bool:
        return self.member(u) is not None

    def evaluate(self, expr: Word) -> Word:
        """Substitute the generators into an expression word."""
        parts = [self.generators[x - 1] if x > 0 else invert(self.generators[-x - 1]) for x in expr.letters]
        return product(self.rank, parts)


def stallings(rank: int, words: list[Word]) -> SubgroupGraph:
    return SubgroupGraph(rank, list(words))
