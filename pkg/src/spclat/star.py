"""Sectional pseudocomplement: derivation from an order and the basic checks."""
from __future__ import annotations

from itertools import product
from typing import Sequence

from .errors import ModeError, NotSectionallyPseudocomplemented
from .poset import Poset, iter_bits
from .report import Check, Report

LATTICE = "lattice"
POSET = "poset"


def _star_row_candidates(p: Poset, a: int, b: int) -> int:
    """Mask of all c with L(U(a,b), c) = L(b)."""
    lu = p.lower_mask(p.upper_mask((1 << a) | (1 << b)))
    target = p.down[b]
    m = 0
    for c in range(p.n):
        if lu & p.down[c] == target:
            m |= 1 << c
    return m


def star_table(p: Poset) -> tuple[tuple[int, ...], ...]:
    """The table of a*b, or raise with the first pair lacking one."""
    rows = []
    for a in range(p.n):
        row = []
        for b in range(p.n):
            g = p.greatest_in(_star_row_candidates(p, a, b))
            if g is None:
                raise NotSectionallyPseudocomplemented((a, b), p.labels)
            row.append(g)
        rows.append(tuple(row))
    return tuple(rows)


def lattice_star_table(p: Poset) -> tuple[tuple[int, ...], ...] | None:
    """Independent lattice route: greatest c with (a v b) ^ c = b."""
    if not p.is_lattice():
        raise ModeError("lattice definition needs a lattice")
    rows = []
    for a in range(p.n):
        row = []
        for b in range(p.n):
            j = p.join(a, b)
            cands = [c for c in range(p.n) if p.meet(j, c) == b]
            g = p.greatest_in(sum(1 << c for c in cands))
            if g is None:
                return None
            row.append(g)
        rows.append(tuple(row))
    return tuple(rows)


class SpcStructure:
    """A poset together with a star table.

    The table is normally produced by :func:`compute_star`; constructing one
    directly with an arbitrary table is allowed so that checkers can be fed
    corrupted input.
    """

    def __init__(self, poset: Poset, star: Sequence[Sequence[int]]):
        self.poset = poset
        self.star = tuple(tuple(int(v) for v in row) for row in star)
        if len(self.star) != poset.n or any(len(r) != poset.n for r in self.star):
            raise ValueError("star table has the wrong shape")
        self.top = poset.top
        self.mode = LATTICE if poset.is_lattice() else POSET
        self.strong = self.top is not None and is_strongly_spc(self).ok

    @property
    def n(self) -> int:
        return self.poset.n

    @property
    def labels(self):
        return self.poset.labels

    def s(self, a: int, b: int) -> int:
        return self.star[a][b]

    def is_lattice(self) -> bool:
        return self.mode == LATTICE

    def with_entry(self, a: int, b: int, value: int) -> "SpcStructure":
        rows = [list(r) for r in self.star]
        rows[a][b] = value
        return SpcStructure(self.poset, rows)

    def table_labels(self) -> list[list[str]]:
        return [[self.labels[v] for v in row] for row in self.star]

    def require_lattice(self, what: str):
        if self.mode != LATTICE:
            raise ModeError(f"{what} needs a lattice-mode structure")

    def __repr__(self):
        return f"SpcStructure(n={self.n}, mode={self.mode}, strong={self.strong})"


def compute_star(p: Poset) -> SpcStructure:
    """Derive the star operation; raises NotSectionallyPseudocomplemented."""
    if p.n == 0:
        raise ValueError("empty poset")
    return SpcStructure(p, star_table(p))


def is_spc(p: Poset) -> bool:
    try:
        star_table(p)
    except NotSectionallyPseudocomplemented:
        return False
    return p.n > 0


def is_strongly_spc(s: SpcStructure) -> Check:
    """x <= (x*y)*y for all x, y."""
    p, st = s.poset, s.star
    bad = [
        (x, y) for x, y in product(range(s.n), repeat=2)
        if not p.leq[x, st[st[x][y]][y]]
    ]
    if s.top is None:
        return Check("strong", False, [], "no greatest element", applicable=False)
    return Check("strong", not bad, bad)


def check_star_table(s: SpcStructure) -> Check:
    """Every entry a*b must be the greatest c with L(U(a,b),c) = L(b)."""
    p = s.poset
    bad = []
    for a, b in product(range(s.n), repeat=2):
        cands = _star_row_candidates(p, a, b)
        if p.greatest_in(cands) != s.star[a][b]:
            bad.append((a, b))
    return Check("star-table", not bad, bad)


def compare_tables(expected, actual) -> list[tuple[int, int]]:
    """Positions where two n x n tables differ."""
    out = []
    for a, (re, ra) in enumerate(zip(expected, actual)):
        for b, (x, y) in enumerate(zip(re, ra)):
            if x != y:
                out.append((a, b))
    return out


def verify_lemma_suite(s: SpcStructure) -> Report:
    """Items (i)-(vi) of the basic arithmetic lemma for * with top 1."""
    rep = Report("lemmas")
    p, st, one = s.poset, s.star, s.top
    n = s.n
    if one is None:
        for item in ("i", "ii", "iii", "iv", "v", "vi"):
            rep.add(f"lemma-{item}", True, detail="no greatest element", applicable=False)
        return rep
    pairs = list(product(range(n), repeat=2))
    le = p.leq
    rep.add("lemma-i", *_collect(((a, b) for a, b in pairs if (st[a][b] == one) != bool(le[a, b]))))
    rep.add("lemma-ii", *_collect(((a,) for a in range(n) if st[one][a] != a)))
    rep.add("lemma-iii", *_collect(((a, b) for a, b in pairs if not le[a, st[b][a]])))
    if s.mode == LATTICE:
        bad = ((a, b) for a, b in pairs if not le[a, st[st[a][b]][b]])
    else:
        bad = ((a, b) for a, b in pairs if le[b, a] and not le[a, st[st[a][b]][b]])
    rep.add("lemma-iv", *_collect(bad))
    rep.add(
        "lemma-v",
        *_collect(
            (a, b, c)
            for a, b, c in product(range(n), repeat=3)
            if le[a, b] and not le[st[b][c], st[a][c]]
        ),
    )
    rep.add(
        "lemma-vi",
        *_collect(
            (a, b) for a, b in pairs
            if p.lower_mask(p.upper_mask((1 << a) | (1 << b))) & p.down[st[a][b]] != p.down[b]
        ),
    )
    return rep


def _collect(gen):
    bad = list(gen)
    return (not bad, bad)


def verify_variety_identities(s: SpcStructure) -> Report:
    """The two defining identities of the variety, over all triples / pairs."""
    s.require_lattice("variety identities")
    p, st = s.poset, s.star
    j, m = p.join, p.meet
    n = s.n
    rep = Report("variety")
    bad1 = [
        (x, y, z)
        for x, y, z in product(range(n), repeat=3)
        if not p.leq[j(z, y), st[x][m(j(x, y), j(z, y))]]
    ]
    rep.add("identity-upper", not bad1, bad1)
    bad2 = [(x, y) for x, y in product(range(n), repeat=2) if m(j(x, y), st[x][y]) != y]
    rep.add("identity-absorb", not bad2, bad2)
    return rep


def relative_pseudocomplement(p: Poset, a: int, b: int) -> int | None:
    """Greatest c such that every d below both a and c is below b."""
    cands = 0
    for c in range(p.n):
        if p.down[a] & p.down[c] & ~p.down[b] == 0:
            cands |= 1 << c
    return p.greatest_in(cands)


def is_relatively_pseudocomplemented(s: SpcStructure | Poset) -> Check:
    p = s.poset if isinstance(s, SpcStructure) else s
    bad = [
        (a, b) for a, b in product(range(p.n), repeat=2)
        if relative_pseudocomplement(p, a, b) is None
    ]
    return Check("relatively-pseudocomplemented", not bad, bad)


def is_distributive(s: SpcStructure | Poset) -> bool:
    p = s.poset if isinstance(s, SpcStructure) else s
    if not p.is_lattice():
        raise ModeError("distributivity is checked on lattices only")
    j, m = p.join, p.meet
    return all(
        m(x, j(y, z)) == j(m(x, y), m(x, z)) for x, y, z in product(range(p.n), repeat=3)
    )


def classify(s: SpcStructure) -> dict:
    """Structural properties of the structure, for reports."""
    rpc = is_relatively_pseudocomplemented(s)
    info = {
        "n": s.n,
        "lattice": s.is_lattice(),
        "spc": True,
        "strong": s.strong,
        "distributive": is_distributive(s) if s.is_lattice() else None,
        "relatively_pseudocomplemented": rpc.ok,
    }
    if not rpc.ok:
        a, b = rpc.witness
        info["rpc_witness"] = [s.labels[a], s.labels[b]]
    return info


def non_strong_witnesses(s: SpcStructure) -> list[tuple[int, int]]:
    return is_strongly_spc(s).witnesses


def meet_star_holds(s: SpcStructure) -> list[tuple[int, int]]:
    """Pairs b <= a where a ^ (a*b) != b (should be none)."""
    p = s.poset
    return [
        (a, b)
        for a in range(s.n)
        for b in iter_bits(p.down[a])
        if p.inf_mask((1 << a) | (1 << s.star[a][b])) != b
    ]
