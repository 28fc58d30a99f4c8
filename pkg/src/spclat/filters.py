"""Filters, deductive systems and the filter lattice.

Two filter notions exist: the lattice one (closure under translations by
v, ^ and both sides of *) and the poset one (translations by * plus the
min clause for comparable pairs).  Functions take ``definition`` as
``"lattice"`` or ``"poset"``; by default the structure's own mode is used.
Filters are returned as frozensets of element indices.

The translation clauses alone admit sets whose relation Phi(F) is not
transitive (on N5, {a, b, c, 1} is one), and such sets are not congruence
kernels.  By default a filter must therefore also make Phi(F) transitive;
``literal=True`` drops that clause.
"""
from __future__ import annotations

from itertools import combinations, product

import numpy as np

from . import limits
from .errors import SizeGuardError
from .poset import Poset, from_mask, iter_bits, to_mask
from .report import Check, Report
from .star import LATTICE, POSET, SpcStructure
from .terms import ideal_terms_lattice, is_closed_under, partial_ideal_terms_poset


def _definition(s: SpcStructure, definition):
    d = definition or s.mode
    if d not in (LATTICE, POSET):
        raise ValueError(f"unknown filter definition {d!r}")
    if d == LATTICE:
        s.require_lattice("lattice filter definition")
    return d


def _cache(s: SpcStructure) -> dict:
    return s.__dict__.setdefault("_filter_cache", {})


def phi_pairs(s: SpcStructure, fmask: int) -> list[tuple[int, int]]:
    st = s.star
    return [
        (x, y)
        for x in range(s.n)
        for y in range(s.n)
        if (fmask >> st[x][y]) & 1 and (fmask >> st[y][x]) & 1
    ]


def phi_transitivity_violation(s: SpcStructure, fmask: int):
    """(x, y, z) with x~y, y~z but not x~z under Phi(F), or None."""
    st = s.star
    rel = [
        [bool((fmask >> st[x][y]) & 1 and (fmask >> st[y][x]) & 1) for y in range(s.n)]
        for x in range(s.n)
    ]
    for x in range(s.n):
        for y in range(s.n):
            if not rel[x][y]:
                continue
            for z in range(s.n):
                if rel[y][z] and not rel[x][z]:
                    return (x, y, z)
    return None


def filter_violation(s: SpcStructure, fmask: int, definition=None, literal=False):
    """First violated instance, or None if fmask is a filter."""
    d = _definition(s, definition)
    st, p = s.star, s.poset
    inside = lambda v: (fmask >> v) & 1  # noqa: E731
    if s.top is None:
        return ("no-greatest-element",)
    if not inside(s.top):
        return ("missing-top",)
    if not literal:
        w = phi_transitivity_violation(s, fmask)
        if w is not None:
            return ("transitivity",) + w
    pairs = phi_pairs(s, fmask)
    for x, y in pairs:
        for z in range(s.n):
            if not inside(st[st[x][z]][st[y][z]]):
                return ("right-star", x, y, z)
            if not inside(st[st[z][x]][st[z][y]]):
                return ("left-star", x, y, z)
            if d == LATTICE:
                if not inside(st[p.join(x, z)][p.join(y, z)]):
                    return ("join", x, y, z)
                if not inside(st[p.meet(x, z)][p.meet(y, z)]):
                    return ("meet", x, y, z)
    if d == POSET:
        for (x, y), (z, v) in product(pairs, repeat=2):
            a = p.min_comparable(x, z)
            b = p.min_comparable(y, v)
            if a is None or b is None:
                continue
            if not inside(st[a][b]):
                return ("min", x, y, z, v)
    return None


def is_filter(s: SpcStructure, f, definition=None, literal=False) -> Check:
    w = filter_violation(s, to_mask(f), definition, literal)
    return Check("filter", w is None, [] if w is None else [w])


def up_sets_containing_top(p: Poset):
    """All up-sets of p containing the top element, as bitmasks."""
    order = sorted(range(p.n), key=lambda i: bin(p.up[i]).count("1"))
    out = []

    def rec(k, m):
        if k == len(order):
            out.append(m)
            return
        x = order[k]
        strict_up = p.up[x] & ~(1 << x)
        if strict_up & ~m == 0:
            rec(k + 1, m | (1 << x))
        if x != p.top:
            rec(k + 1, m)

    if p.top is not None:
        rec(0, 0)
    return out


def enumerate_filter_masks(
    s: SpcStructure, definition=None, exhaustive=False, literal=False
) -> list[int]:
    d = _definition(s, definition)
    key = ("filters", d, exhaustive, literal)
    cache = _cache(s)
    if key not in cache:
        if exhaustive:
            if s.n > limits.exhaustive_limit():
                raise SizeGuardError("exhaustive filter scan", s.n, limits.exhaustive_limit())
            candidates = range(1 << s.n)
        else:
            candidates = up_sets_containing_top(s.poset)
        found = [m for m in candidates if filter_violation(s, m, d, literal) is None]
        found.sort(key=lambda m: (bin(m).count("1"), m))
        cache[key] = found
    return cache[key]


def enumerate_filters(
    s: SpcStructure, definition=None, exhaustive=False, literal=False
) -> list[frozenset[int]]:
    """All filters, sorted by size then bitmask value."""
    return [from_mask(m) for m in enumerate_filter_masks(s, definition, exhaustive, literal)]


def generated_filter(s: SpcStructure, m, definition=None) -> frozenset[int]:
    """Least filter containing m (intersection of all filters above it)."""
    want = to_mask(m)
    out = (1 << s.n) - 1
    for f in enumerate_filter_masks(s, definition):
        if want & ~f == 0:
            out &= f
    return from_mask(out)


def filter_label(s: SpcStructure, f, definition=None) -> str:
    """Label F(x) or F({x,y}) from a smallest generating set, first by index."""
    members = sorted(f)
    target = frozenset(f)
    for k in range(1, len(members) + 1):
        for gens in combinations(members, k):
            if generated_filter(s, gens, definition) == target:
                names = [s.labels[i] for i in gens]
                return f"F({names[0]})" if k == 1 else "F({" + ",".join(names) + "})"
    return "F()"


def filter_lattice(s: SpcStructure, definition=None) -> Poset:
    """Filters ordered by inclusion, labelled by generators."""
    masks = enumerate_filter_masks(s, definition)
    k = len(masks)
    leq = np.array([[a & ~b == 0 for b in masks] for a in masks], dtype=bool).reshape(k, k)
    labels = [filter_label(s, from_mask(m), definition) for m in masks]
    return Poset(labels, leq, guard=False)


def is_deductive_system(s: SpcStructure, d) -> Check:
    dm = to_mask(d)
    if not (dm >> s.top) & 1:
        return Check("deductive", False, [("missing-top",)])
    bad = [
        (a, b)
        for a in iter_bits(dm)
        for b in range(s.n)
        if (dm >> s.star[a][b]) & 1 and not (dm >> b) & 1
    ]
    return Check("deductive", not bad, bad)


def _set_lifted(s: SpcStructure, fmask: int):
    """Elements of c*(F^c) and (F*(F*c))*c over all c; also count skipped meets."""
    st, p = s.star, s.poset
    members = list(iter_bits(fmask))
    first, second = [], []
    skipped = 0
    for c in range(s.n):
        for f in members:
            m = p.meet(f, c)
            if m is None:
                skipped += 1
                continue
            first.append((c, f, st[c][m]))
        for x, y in product(members, repeat=2):
            second.append((c, x, y, st[st[x][st[y][c]]][c]))
    return first, second, skipped


def verify_filter_theorem(s: SpcStructure, f, definition=None) -> Report:
    """Filter properties: deductive, order/lattice filter, P*F in F, lifted sets."""
    d = _definition(s, definition)
    fm = to_mask(f)
    p, st = s.poset, s.star
    rep = Report("filter-theorem")
    rep.add("deductive-system", *_ok_bad(is_deductive_system(s, f).witnesses))
    up_bad = [(a, b) for a in iter_bits(fm) for b in iter_bits(p.up[a]) if not (fm >> b) & 1]
    rep.add("order-filter", not up_bad, up_bad)
    if d == LATTICE:
        meet_bad = [
            (a, b) for a in iter_bits(fm) for b in iter_bits(fm) if not (fm >> p.meet(a, b)) & 1
        ]
        rep.add("meet-closed", not meet_bad, meet_bad)
    pf_bad = [(a, b) for a in range(s.n) for b in iter_bits(fm) if not (fm >> st[a][b]) & 1]
    rep.add("P*F-in-F", not pf_bad, pf_bad)
    first, second, skipped = _set_lifted(s, fm)
    bad1 = [w for w in first if not (fm >> w[-1]) & 1]
    rep.add("c*(F^c)-in-F", not bad1, bad1, detail=f"skipped {skipped} missing meets")
    bad2 = [w for w in second if not (fm >> w[-1]) & 1]
    rep.add("(F*(F*c))*c-in-F", not bad2, bad2)
    return rep


def _ok_bad(bad):
    return (not bad, bad)


def lifted_condition_holds(s: SpcStructure, m) -> bool:
    """(M*(M*x))*x is contained in M for every x."""
    mm = to_mask(m)
    members = list(iter_bits(mm))
    st = s.star
    return all(
        (mm >> st[st[a][st[b][x]]][x]) & 1
        for x in range(s.n)
        for a in members
        for b in members
    )


def verify_prop_deductive(s: SpcStructure, m) -> Check:
    """Containing 1 and the lifted condition imply being a deductive system.

    ``detail`` says whether the hypothesis held ("exercised") or the
    implication was vacuous ("not exercised").
    """
    mm = to_mask(m)
    hyp = bool((mm >> s.top) & 1) and lifted_condition_holds(s, m)
    if not hyp:
        return Check("prop-deductive", True, [], "not exercised")
    ded = is_deductive_system(s, m)
    return Check("prop-deductive", ded.ok, ded.witnesses, "exercised")


def closedness_equivalence(s: SpcStructure, f, definition=None) -> Report:
    """Filter vs. closedness under the ideal terms.

    Lattice definition: both directions are asserted.  Poset definition:
    only "closed under T1..T4 implies filter" is asserted; whether the
    converse held is stored in ``info["converse"]``.
    """
    d = _definition(s, definition)
    rep = Report("closedness")
    filt = is_filter(s, f, d)
    if d == LATTICE:
        closed = is_closed_under(s, f, ideal_terms_lattice())
        rep.add("filter<=>closed(t1..t5)", filt.ok == closed.ok,
                detail=f"filter={filt.ok} closed={closed.ok}")
    else:
        closed = is_closed_under(s, f, partial_ideal_terms_poset())
        rep.add("closed(T1..T4)=>filter", (not closed.ok) or filt.ok,
                detail=f"filter={filt.ok} closed={closed.ok}")
        rep.info["converse"] = (not filt.ok) or closed.ok
    rep.info["filter"] = filt.ok
    rep.info["closed"] = closed.ok
    rep.info["closure_witness"] = closed
    return rep

