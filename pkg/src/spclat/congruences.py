"""Congruences, the kernel / Phi correspondence and quotient posets.

Two signatures are supported.  ``"lattice"``: substitution for v, ^ and *.
``"poset"``: substitution for * plus min-stability (related comparable pairs
have related minima).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Sequence

import numpy as np

from . import limits
from .errors import IllDefinedBlockStar, ModeError, SizeGuardError, SpcError
from .filters import enumerate_filter_masks
from .poset import Poset, from_mask, iter_bits, to_mask
from .report import Check, Report
from .star import LATTICE, POSET, SpcStructure


def _canonical(block_of: Sequence[int]) -> tuple[int, ...]:
    """Relabel blocks in order of first appearance (restricted growth string)."""
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(b, len(seen)) for b in block_of)


@dataclass(frozen=True)
class Congruence:
    """A partition of the universe, stored as a restricted growth string."""

    block_of: tuple[int, ...]
    sig: str = POSET

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]], sig: str = POSET) -> "Congruence":
        block_of = [-1] * n
        for k, blk in enumerate(blocks):
            for x in blk:
                if block_of[x] != -1:
                    raise ValueError(f"element {x} in two blocks")
                block_of[x] = k
        if -1 in block_of:
            raise ValueError("blocks do not cover the universe")
        return cls(_canonical(block_of), sig)

    @classmethod
    def from_relation(cls, rel, sig: str = POSET) -> "Congruence":
        rel = np.asarray(rel, dtype=bool)
        n = rel.shape[0]
        if not (rel.diagonal().all() and (rel == rel.T).all()):
            raise ValueError("relation is not reflexive and symmetric")
        ri = rel.astype(np.int64)
        if ((ri @ ri > 0) & ~rel).any():
            raise ValueError("relation is not transitive")
        return cls(_canonical([int(np.argmax(rel[i])) for i in range(n)]), sig)

    @classmethod
    def identity(cls, n: int, sig: str = POSET) -> "Congruence":
        return cls(tuple(range(n)), sig)

    @classmethod
    def total(cls, n: int, sig: str = POSET) -> "Congruence":
        return cls((0,) * n, sig)

    @property
    def n(self) -> int:
        return len(self.block_of)

    @cached_property
    def blocks(self) -> tuple[frozenset[int], ...]:
        k = max(self.block_of, default=-1) + 1
        out = [[] for _ in range(k)]
        for x, b in enumerate(self.block_of):
            out[b].append(x)
        return tuple(frozenset(b) for b in out)

    @cached_property
    def relation(self) -> np.ndarray:
        b = np.array(self.block_of)
        rel = b[:, None] == b[None, :]
        rel.setflags(write=False)
        return rel

    def related(self, x: int, y: int) -> bool:
        return self.block_of[x] == self.block_of[y]

    def class_of(self, x: int) -> frozenset[int]:
        return self.blocks[self.block_of[x]]

    def kernel(self, top: int) -> frozenset[int]:
        return self.class_of(top)

    def __le__(self, other: "Congruence") -> bool:
        return bool((~self.relation | other.relation).all())

    def describe(self, labels) -> str:
        return " | ".join(",".join(labels[i] for i in sorted(b)) for b in self.blocks)


def kernel(s: SpcStructure, theta: Congruence) -> frozenset[int]:
    """The class of the top element."""
    if s.top is None:
        raise SpcError("kernel needs a greatest element")
    return theta.kernel(s.top)


def _check_sig(s: SpcStructure, sig: str):
    if sig not in (LATTICE, POSET):
        raise ValueError(f"unknown signature {sig!r}")
    if sig == LATTICE:
        s.require_lattice("lattice signature")


def operation_triples(s: SpcStructure, sig: str) -> dict[str, list[tuple[int, int, int]]]:
    """(x, u, x o u) for every operation of the signature.

    For min-stability the "operation" is min on comparable pairs.
    """
    p = s.poset
    rng = range(s.n)
    ops = {"star": [(x, u, s.star[x][u]) for x in rng for u in rng]}
    if sig == LATTICE:
        ops["join"] = [(x, u, p.join(x, u)) for x in rng for u in rng]
        ops["meet"] = [(x, u, p.meet(x, u)) for x in rng for u in rng]
    else:
        ops["min"] = [
            (x, u, p.min_comparable(x, u)) for x in rng for u in rng if p.comparable(x, u)
        ]
    return ops


def is_congruence(s: SpcStructure, part, sig: str = None) -> Check:
    """Substitution property (and min-stability for the poset signature).

    ``part`` is a Congruence or a sequence of blocks.
    """
    sig = sig or (part.sig if isinstance(part, Congruence) else s.mode)
    _check_sig(s, sig)
    if not isinstance(part, Congruence):
        part = Congruence.from_blocks(s.n, part, sig)
    b = part.block_of
    for name, triples in operation_triples(s, sig).items():
        seen: dict[tuple[int, int], tuple[int, int, int]] = {}
        for x, u, r in triples:
            key = (b[x], b[u])
            if key in seen:
                y, v, w = seen[key]
                if b[r] != b[w]:
                    return Check("congruence", False, [(name, x, u, y, v)])
            else:
                seen[key] = (x, u, r)
    return Check("congruence", True)


def _consistent(labels: np.ndarray, X, U, R, k: int) -> np.ndarray:
    """Rows where (label[x], label[u]) determines label[r] for all triples."""
    P = labels.shape[0]
    if len(X) == 0 or P == 0:
        return np.ones(P, dtype=bool)
    key = labels[:, X] * k + labels[:, U]
    val = labels[:, R]
    flat = (np.arange(P)[:, None] * (k * k) + key).ravel()
    v = val.ravel()
    lo = np.full(P * k * k, k, dtype=np.int64)
    hi = np.full(P * k * k, -1, dtype=np.int64)
    np.minimum.at(lo, flat, v)
    np.maximum.at(hi, flat, v)
    bad = (hi >= 0) & (lo != hi)
    return ~bad.reshape(P, k * k).any(axis=1)


def enumerate_congruences(s: SpcStructure, sig: str = None) -> list[Congruence]:
    """All congruences, fewest-merged first (block count descending, then RGS).

    Restricted growth strings are grown one element at a time; a prefix is
    dropped as soon as some operation instance lying entirely inside it
    violates the substitution (or min-stability) property.
    """
    sig = sig or s.mode
    _check_sig(s, sig)
    cache = s.__dict__.setdefault("_congruence_cache", {})
    if sig in cache:
        return cache[sig]
    n = s.n
    if n > limits.partition_limit():
        raise SizeGuardError("congruence enumeration", n, limits.partition_limit())
    ops = [np.array(t, dtype=np.int64).reshape(-1, 3) for t in operation_triples(s, sig).values()]
    labels = np.zeros((1, 1), dtype=np.int64)
    for k in range(2, n + 1):
        top = labels.max(axis=1) + 1
        counts = top + 1
        parents = np.repeat(np.arange(labels.shape[0]), counts)
        offsets = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
        labels = np.concatenate([labels[parents], offsets[:, None]], axis=1)
        for t in ops:
            inside = t[(t < k).all(axis=1)]
            labels = labels[_consistent(labels, inside[:, 0], inside[:, 1], inside[:, 2], k)]
    rows = [tuple(int(v) for v in row) for row in labels]
    rows.sort(key=lambda r: (-(max(r) + 1), r))
    out = [Congruence(r, sig) for r in rows]
    cache[sig] = out
    return out


def phi_of(s: SpcStructure, m) -> np.ndarray:
    """{(x, y) : x*y and y*x in m} as a boolean matrix."""
    inside = np.zeros(s.n, dtype=bool)
    inside[list(m)] = True
    st = np.array(s.star, dtype=np.int64).reshape(s.n, s.n)
    rel = inside[st] & inside[st.T]
    return rel


def relation_is_equivalence(rel) -> bool:
    rel = np.asarray(rel, dtype=bool)
    ri = rel.astype(np.int64)
    return bool(rel.diagonal().all() and (rel == rel.T).all() and not ((ri @ ri > 0) & ~rel).any())


def _filter_definition(sig: str) -> str:
    return LATTICE if sig == LATTICE else POSET


def verify_galois(s: SpcStructure, sig: str = None) -> Report:
    """Kernel and Phi are mutually inverse inclusion isomorphisms Con <-> Fil."""
    sig = sig or s.mode
    _check_sig(s, sig)
    rep = Report("galois")
    cons = enumerate_congruences(s, sig)
    fils = [from_mask(m) for m in enumerate_filter_masks(s, _filter_definition(sig))]
    rep.info.update(congruences=len(cons), filters=len(fils))
    filset = set(fils)

    bad = [c.blocks for c in cons if kernel(s, c) not in filset]
    rep.add("kernel-is-filter", not bad, bad)
    bad = [c.blocks for c in cons if not np.array_equal(phi_of(s, kernel(s, c)), c.relation)]
    rep.add("phi(kernel)=id", not bad, bad)

    conset = {c.block_of for c in cons}
    bad_con, bad_ker = [], []
    for f in fils:
        rel = phi_of(s, f)
        if not relation_is_equivalence(rel):
            bad_con.append(f)
            continue
        theta = Congruence.from_relation(rel, sig)
        if theta.block_of not in conset:
            bad_con.append(f)
        if kernel(s, theta) != f:
            bad_ker.append(f)
    rep.add("phi(filter)-is-congruence", not bad_con, bad_con)
    rep.add("kernel(phi)=id", not bad_ker, bad_ker)

    rep.add("same-size", len(cons) == len(fils), detail=f"{len(cons)} vs {len(fils)}")
    bad = [
        (a.blocks, b.blocks)
        for a, b in product(cons, repeat=2)
        if (a <= b) != kernel(s, a).issubset(kernel(s, b))
    ]
    rep.add("order-isomorphism", not bad, bad)
    return rep


@dataclass
class QuotientPoset:
    base: SpcStructure
    theta: Congruence
    order: Poset
    block_star: tuple[tuple[int, ...], ...]

    def block_of(self, x: int) -> int:
        return self.theta.block_of[x]


def _block_label(s: SpcStructure, block: frozenset[int]) -> str:
    g = s.poset.greatest_in(to_mask(block))
    if g is not None:
        return s.labels[g]
    return "{" + ",".join(s.labels[i] for i in sorted(block)) + "}"


def quotient(s: SpcStructure, theta: Congruence) -> QuotientPoset:
    """P/theta ordered by [a] <=' [b] iff [a]*[b] = [1]."""
    b = theta.block_of
    k = len(theta.blocks)
    table = [[-1] * k for _ in range(k)]
    for x, y in product(range(s.n), repeat=2):
        r = b[s.star[x][y]]
        cur = table[b[x]][b[y]]
        if cur == -1:
            table[b[x]][b[y]] = r
        elif cur != r:
            raise IllDefinedBlockStar((x, y))
    one = b[s.top]
    leq = np.array([[table[i][j] == one for j in range(k)] for i in range(k)], dtype=bool)
    labels = [_block_label(s, blk) for blk in theta.blocks]
    order = Poset(labels, leq.reshape(k, k))
    return QuotientPoset(s, theta, order, tuple(tuple(r) for r in table))


def _quotient_relation(s: SpcStructure, theta: Congruence):
    """Block star and <=' without insisting on a partial order."""
    b = theta.block_of
    k = len(theta.blocks)
    table = {}
    for x, y in product(range(s.n), repeat=2):
        table.setdefault((b[x], b[y]), set()).add(b[s.star[x][y]])
    one = b[s.top]
    leq = np.zeros((k, k), dtype=bool)
    for (i, j), vals in table.items():
        leq[i, j] = vals == {one}
    return table, leq


def verify_quotient_theorem(s: SpcStructure, theta: Congruence, max_subset: int = 3) -> Report:
    """Items (i)-(v) for the quotient, plus convexity / directedness of classes."""
    rep = Report("quotient-theorem")
    p = s.poset
    b = theta.block_of
    blocks = theta.blocks
    table, leq = _quotient_relation(s, theta)
    bad = [(blocks[i], blocks[j]) for (i, j), vals in table.items() if len(vals) != 1]
    rep.add("block-star-well-defined", not bad, bad)

    bad = [(x, y) for x, y in product(range(s.n), repeat=2) if p.leq[x, y] and not leq[b[x], b[y]]]
    rep.add("(i) monotone", not bad, bad)

    bad = []
    for x, y in product(range(s.n), repeat=2):
        exists = any(p.leq[x, c] for c in blocks[b[y]])
        if bool(leq[b[x], b[y]]) != exists:
            bad.append((x, y))
    rep.add("(ii) lifting", not bad, bad)

    k = len(blocks)
    refl = all(leq[i, i] for i in range(k))
    anti = [(i, j) for i, j in combinations(range(k), 2) if leq[i, j] and leq[j, i]]
    li = leq.astype(np.int64)
    trans = not ((li @ li > 0) & ~leq).any()
    rep.add("(iii) partial order", refl and not anti and trans,
            [(blocks[i], blocks[j]) for i, j in anti])

    bad = [blk for blk in blocks if not p.is_up_directed(blk)]
    rep.add("(iv) classes up-directed", not bad, bad)
    bad = [blk for blk in blocks if p.greatest_in(to_mask(blk)) is None]
    rep.add("classes have greatest element", not bad, bad)
    bad = [blk for blk in blocks if not p.is_convex(blk)]
    rep.add("classes convex", not bad, bad)

    bad = []
    for size in range(1, max_subset + 1):
        for elems in combinations(range(s.n), size):
            want = {b[x] for x in p.upper_bounds(elems)}
            got = {j for j in range(k) if all(leq[b[a], j] for a in elems)}
            if want != got:
                bad.append(elems)
    rep.add("(v) upper bounds", not bad, bad)
    return rep


def principal_congruence(s: SpcStructure, m, sig: str = None) -> Congruence:
    """Least enumerated congruence collapsing every element of m with 1."""
    sig = sig or s.mode
    cons = enumerate_congruences(s, sig)
    members = list(m)
    above = [c for c in cons if all(c.related(x, s.top) for x in members)]
    rel = np.ones((s.n, s.n), dtype=bool)
    for c in above:
        rel &= c.relation
    least = Congruence.from_relation(rel, sig)
    if least not in above:
        raise SpcError("the congruences above M x {1} have no least member")
    return least


def equivalence_join(a: Congruence, b: Congruence) -> Congruence:
    """Transitive closure of the union (join in the lattice of equivalences)."""
    n = a.n
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in (a, b):
        for blk in c.blocks:
            first = min(blk)
            for x in blk:
                parent[find(x)] = find(first)
    return Congruence(_canonical([find(x) for x in range(n)]), a.sig)


def equivalence_meet(a: Congruence, b: Congruence) -> Congruence:
    return Congruence(_canonical(list(zip(a.block_of, b.block_of))), a.sig)


def compose(r, t) -> np.ndarray:
    """Relational product r;t of boolean matrices."""
    return (np.asarray(r, dtype=np.int64) @ np.asarray(t, dtype=np.int64)) > 0


def congruence_permutable(s: SpcStructure, sig: str = None) -> Check:
    sig = sig or s.mode
    if sig != LATTICE:
        raise ModeError("permutability is checked for the lattice signature only")
    cons = enumerate_congruences(s, sig)
    bad = [
        (a.blocks, b.blocks)
        for a, b in combinations(cons, 2)
        if not np.array_equal(compose(a.relation, b.relation), compose(b.relation, a.relation))
    ]
    return Check("permutable", not bad, bad)


def congruence_distributive(s: SpcStructure, sig: str = None) -> Check:
    sig = sig or s.mode
    if sig != LATTICE:
        raise ModeError("distributivity is checked for the lattice signature only")
    cons = enumerate_congruences(s, sig)
    index = {c.block_of: c for c in cons}
    bad = []
    for a, b in combinations(cons, 2):
        j = equivalence_join(a, b)
        if j.block_of not in index:
            bad.append(("join-not-congruence", a.blocks, b.blocks))
    for a, b, c in product(cons, repeat=3):
        lhs = equivalence_meet(a, equivalence_join(b, c))
        rhs = equivalence_join(equivalence_meet(a, b), equivalence_meet(a, c))
        if lhs.block_of != rhs.block_of:
            bad.append((a.blocks, b.blocks, c.blocks))
    return Check("distributive", not bad, bad)


def weakly_regular(s: SpcStructure, sig: str = None) -> Check:
    sig = sig or s.mode
    cons = enumerate_congruences(s, sig)
    seen: dict[frozenset[int], Congruence] = {}
    bad = []
    for c in cons:
        k = kernel(s, c)
        if k in seen:
            bad.append((seen[k].blocks, c.blocks))
        seen[k] = c
    return Check("weakly-regular", not bad, bad)


def verify_variety_structure(s: SpcStructure, sig: str = None) -> Report:
    """Permutability, distributivity (lattice signature) and weak regularity."""
    sig = sig or s.mode
    _check_sig(s, sig)
    rep = Report("variety-structure")
    if sig == LATTICE:
        rep.checks.append(congruence_permutable(s, sig))
        rep.checks.append(congruence_distributive(s, sig))
    rep.checks.append(weakly_regular(s, sig))
    return rep


def poset_join_closure(s: SpcStructure) -> Check:
    """Whether the equivalence join of two poset-signature congruences is one."""
    cons = enumerate_congruences(s, POSET)
    index = {c.block_of for c in cons}
    bad = [
        (a.blocks, b.blocks)
        for a, b in combinations(cons, 2)
        if equivalence_join(a, b).block_of not in index
    ]
    return Check("poset-join-closed", not bad, bad)

