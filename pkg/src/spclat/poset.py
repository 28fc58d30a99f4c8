"""Finite posets stored as a full order relation.

Elements are the indices ``0..n-1``; labels are only used for I/O.  Subsets
are passed in as any iterable of indices and returned as frozensets.  For
speed the principal up-sets and down-sets are also kept as integer bitmasks.
"""
from __future__ import annotations

from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import limits
from .errors import CycleDetected, DuplicateLabel, NotAPartialOrder, SizeGuardError


def to_mask(s: Iterable[int]) -> int:
    m = 0
    for i in s:
        m |= 1 << i
    return m


def from_mask(m: int) -> frozenset[int]:
    out = []
    i = 0
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return frozenset(out)


def iter_bits(m: int):
    i = 0
    while m:
        if m & 1:
            yield i
        m >>= 1
        i += 1


class Poset:
    """Immutable finite partial order.

    ``leq[i, j]`` is True iff element i <= element j.  The constructor checks
    reflexivity, antisymmetry and transitivity.
    """

    def __init__(self, labels: Sequence[str], leq, *, check: bool = True, guard: bool = True):
        labels = tuple(str(x) for x in labels)
        n = len(labels)
        if guard and n > limits.poset_limit():
            raise SizeGuardError("poset", n, limits.poset_limit())
        seen = set()
        for lab in labels:
            if lab in seen:
                raise DuplicateLabel(f"duplicate label {lab!r}")
            seen.add(lab)
        leq = np.array(leq, dtype=bool).reshape(n, n)
        leq.setflags(write=False)
        self.n = n
        self.labels = labels
        self.leq = leq
        if check:
            self._check()
        self.up = tuple(to_mask(np.flatnonzero(leq[i])) for i in range(n))
        self.down = tuple(to_mask(np.flatnonzero(leq[:, i])) for i in range(n))
        self.universe = (1 << n) - 1

    def _check(self):
        leq = self.leq
        n = self.n
        if n and not leq.diagonal().all():
            raise NotAPartialOrder("relation is not reflexive")
        both = leq & leq.T & ~np.eye(n, dtype=bool)
        if both.any():
            i, j = map(int, np.argwhere(both)[0])
            raise CycleDetected(self.labels[i], self.labels[j])
        li = leq.astype(np.int64)
        if ((li @ li > 0) & ~leq).any():
            raise NotAPartialOrder("relation is not transitive")

    @classmethod
    def from_covers(cls, labels: Sequence[str], covers: Iterable[tuple[int, int]], **kw) -> "Poset":
        """Reflexive-transitive closure of the given strict pairs."""
        n = len(labels)
        rel = np.eye(n, dtype=bool)
        for a, b in covers:
            rel[a, b] = True
        # Warshall
        for k in range(n):
            rel |= rel[:, k : k + 1] & rel[k : k + 1, :]
        return cls(labels, rel, **kw)

    @classmethod
    def chain(cls, n: int) -> "Poset":
        return cls([str(i) for i in range(n)], np.triu(np.ones((n, n), dtype=bool)))

    @classmethod
    def antichain(cls, n: int) -> "Poset":
        return cls([str(i) for i in range(n)], np.eye(n, dtype=bool))

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, Poset):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.leq, other.leq)

    def __hash__(self):
        return hash((self.labels, self.leq.tobytes()))

    def __repr__(self):
        return f"Poset(n={self.n}, labels={list(self.labels)})"

    def index(self, label: str) -> int:
        return self._index[label]

    @cached_property
    def _index(self):
        return {lab: i for i, lab in enumerate(self.labels)}

    def le(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b])

    def comparable(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b] or self.leq[b, a])

    def names(self, s: Iterable[int]) -> list[str]:
        return [self.labels[i] for i in sorted(s)]

    # bitmask kernels

    def upper_mask(self, m: int) -> int:
        out = self.universe
        for i in iter_bits(m):
            out &= self.up[i]
        return out

    def lower_mask(self, m: int) -> int:
        out = self.universe
        for i in iter_bits(m):
            out &= self.down[i]
        return out

    def greatest_in(self, m: int) -> int | None:
        """Greatest element of the subset given as a mask, if any."""
        for g in iter_bits(m):
            if m & ~self.down[g] == 0:
                return g
        return None

    def least_in(self, m: int) -> int | None:
        for g in iter_bits(m):
            if m & ~self.up[g] == 0:
                return g
        return None

    def inf_mask(self, m: int) -> int | None:
        return self.greatest_in(self.lower_mask(m))

    def sup_mask(self, m: int) -> int | None:
        return self.least_in(self.upper_mask(m))

    # public set operators

    def upper_bounds(self, s: Iterable[int]) -> frozenset[int]:
        """U(s); the whole universe for empty s."""
        return from_mask(self.upper_mask(to_mask(s)))

    def lower_bounds(self, s: Iterable[int]) -> frozenset[int]:
        return from_mask(self.lower_mask(to_mask(s)))

    def infimum(self, s: Iterable[int]) -> int | None:
        return self.inf_mask(to_mask(s))

    def supremum(self, s: Iterable[int]) -> int | None:
        return self.sup_mask(to_mask(s))

    def meet(self, a: int, b: int) -> int | None:
        return self._meet_table[a][b]

    def join(self, a: int, b: int) -> int | None:
        return self._join_table[a][b]

    @cached_property
    def _meet_table(self):
        return [[self.inf_mask((1 << a) | (1 << b)) for b in range(self.n)] for a in range(self.n)]

    @cached_property
    def _join_table(self):
        return [[self.sup_mask((1 << a) | (1 << b)) for b in range(self.n)] for a in range(self.n)]

    def min_comparable(self, a: int, b: int) -> int | None:
        if self.leq[a, b]:
            return a
        if self.leq[b, a]:
            return b
        return None

    @cached_property
    def top(self) -> int | None:
        return self.greatest_in(self.universe)

    @cached_property
    def bottom(self) -> int | None:
        return self.least_in(self.universe)

    def is_lattice(self) -> bool:
        return self._is_lattice

    @cached_property
    def _is_lattice(self) -> bool:
        if self.n == 0:
            return False
        for a, b in combinations(range(self.n), 2):
            if self.meet(a, b) is None or self.join(a, b) is None:
                return False
        return True

    def hasse_covers(self) -> list[tuple[int, int]]:
        """All covering pairs (x, y), sorted by index."""
        out = []
        for x in range(self.n):
            above = self.up[x] & ~(1 << x)
            for y in iter_bits(above):
                between = above & self.down[y] & ~(1 << y)
                if between == 0:
                    out.append((x, y))
        return out

    def is_up_directed(self, s: Iterable[int]) -> bool:
        m = to_mask(s)
        for a in iter_bits(m):
            for b in iter_bits(m):
                if b < a:
                    continue
                if self.up[a] & self.up[b] & m == 0:
                    return False
        return True

    def is_convex(self, s: Iterable[int]) -> bool:
        m = to_mask(s)
        for b in iter_bits(m):
            for d in iter_bits(m & self.up[b]):
                if self.up[b] & self.down[d] & ~m:
                    return False
        return True

    def is_up_set(self, m: int) -> bool:
        return all(self.up[i] & ~m == 0 for i in iter_bits(m))

    def height_ranks(self) -> list[int]:
        """Length of the longest chain from a minimal element to each element."""
        order = sorted(range(self.n), key=lambda i: bin(self.down[i]).count("1"))
        rank = [0] * self.n
        below = {y: [] for y in range(self.n)}
        for x, y in self.hasse_covers():
            below[y].append(x)
        for y in order:
            for x in below[y]:
                rank[y] = max(rank[y], rank[x] + 1)
        return rank

    def relabel(self, labels: Sequence[str]) -> "Poset":
        return Poset(labels, self.leq, check=False)

    def permuted(self, perm: Sequence[int]) -> "Poset":
        """Poset whose new element perm[i] is old element i."""
        inv = np.argsort(perm)
        leq = self.leq[np.ix_(inv, inv)]
        labels = [self.labels[j] for j in inv]
        return Poset(labels, leq, check=False)


def find_isomorphism(p: Poset, q: Poset) -> dict[int, int] | None:
    """Order isomorphism p -> q by backtracking, or None.

    Candidates are pruned by (number of elements below, number above).
    """
    if p.n != q.n:
        return None
    def sig(x: Poset, i):
        return (bin(x.down[i]).count("1"), bin(x.up[i]).count("1"))
    sp = [sig(p, i) for i in range(p.n)]
    sq = [sig(q, i) for i in range(q.n)]
    if sorted(sp) != sorted(sq):
        return None
    order = sorted(range(p.n), key=lambda i: sp[i])
    mapping: dict[int, int] = {}
    used = [False] * q.n

    def extend(k):
        if k == len(order):
            return True
        x = order[k]
        for y in range(q.n):
            if used[y] or sq[y] != sp[x]:
                continue
            if all(
                p.leq[x, u] == q.leq[y, v] and p.leq[u, x] == q.leq[v, y]
                for u, v in mapping.items()
            ):
                mapping[x] = y
                used[y] = True
                if extend(k + 1):
                    return True
                del mapping[x]
                used[y] = False
        return False

    return dict(mapping) if extend(0) else None


def is_isomorphic(p: Poset, q: Poset) -> bool:
    return find_isomorphism(p, q) is not None
