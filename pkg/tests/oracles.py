"""Slow, independent reference implementations used as test oracles.

Nothing here imports the package's algorithms: orders are plain sets of
pairs and every notion is computed straight from its quantifier form.
"""
from itertools import product


class NaivePoset:
    def __init__(self, n, pairs):
        self.n = n
        le = {(i, i) for i in range(n)} | set(pairs)
        changed = True
        while changed:
            changed = False
            for (a, b), (c, d) in product(list(le), repeat=2):
                if b == c and (a, d) not in le:
                    le.add((a, d))
                    changed = True
        self.le_set = le

    @classmethod
    def from_matrix(cls, leq):
        n = len(leq)
        return cls(n, [(i, j) for i in range(n) for j in range(n) if leq[i][j]])

    def le(self, a, b):
        return (a, b) in self.le_set

    def U(self, s):
        return {x for x in range(self.n) if all(self.le(y, x) for y in s)}

    def L(self, s):
        return {x for x in range(self.n) if all(self.le(x, y) for y in s)}

    def greatest(self, s):
        g = [x for x in s if all(self.le(y, x) for y in s)]
        return g[0] if g else None

    def least(self, s):
        g = [x for x in s if all(self.le(x, y) for y in s)]
        return g[0] if g else None

    def inf(self, s):
        return self.greatest(self.L(s))

    def sup(self, s):
        return self.least(self.U(s))

    def top(self):
        return self.greatest(set(range(self.n)))

    def is_lattice(self):
        return all(
            self.inf({a, b}) is not None and self.sup({a, b}) is not None
            for a in range(self.n)
            for b in range(self.n)
        )

    def covers(self):
        out = set()
        for a, b in self.le_set:
            if a != b and not any(
                c not in (a, b) and self.le(a, c) and self.le(c, b) for c in range(self.n)
            ):
                out.add((a, b))
        return out


def star_by_definition(P: NaivePoset):
    """Table of greatest c with L(U(a,b) u {c}) = L(b); (None, pair) on failure."""
    table = []
    for a in range(P.n):
        row = []
        for b in range(P.n):
            ub = P.U({a, b})
            cands = {c for c in range(P.n) if P.L(ub | {c}) == P.L({b})}
            g = P.greatest(cands)
            if g is None:
                return None, (a, b)
            row.append(g)
        table.append(row)
    return table, None


def star_lattice_definition(P: NaivePoset):
    """Greatest c with (a v b) ^ c = b (lattices only)."""
    table = []
    for a in range(P.n):
        row = []
        for b in range(P.n):
            j = P.sup({a, b})
            cands = {c for c in range(P.n) if P.inf({j, c}) == b}
            row.append(P.greatest(cands))
        table.append(row)
    return table


def phi(star, F, n):
    return {(x, y) for x in range(n) for y in range(n) if star[x][y] in F and star[y][x] in F}


def is_transitive(rel):
    return all((a, d) in rel for (a, b) in rel for (c, d) in rel if b == c)


def is_filter_naive(P, star, F, kind, transitive=True):
    F = set(F)
    top = P.top()
    if top not in F:
        return False
    rel = phi(star, F, P.n)
    if transitive and not is_transitive(rel):
        return False
    for (x, y), z in product(rel, range(P.n)):
        if star[star[x][z]][star[y][z]] not in F or star[star[z][x]][star[z][y]] not in F:
            return False
        if kind == "lattice":
            if star[P.sup({x, z})][P.sup({y, z})] not in F:
                return False
            if star[P.inf({x, z})][P.inf({y, z})] not in F:
                return False
    if kind == "poset":
        for (x, y), (z, v) in product(rel, repeat=2):
            if (P.le(x, z) or P.le(z, x)) and (P.le(y, v) or P.le(v, y)):
                a = x if P.le(x, z) else z
                b = y if P.le(y, v) else v
                if star[a][b] not in F:
                    return False
    return True


def set_partitions(n):
    """All set partitions of range(n) as lists of blocks."""
    if n == 0:
        yield []
        return
    for part in set_partitions(n - 1):
        for i in range(len(part)):
            yield part[:i] + [part[i] | {n - 1}] + part[i + 1 :]
        yield part + [{n - 1}]


def is_congruence_naive(P, star, blocks, sig):
    cls = {}
    for k, b in enumerate(blocks):
        for x in b:
            cls[x] = k
    same = lambda a, b: cls[a] == cls[b]  # noqa: E731
    pairs = [(x, y) for x in range(P.n) for y in range(P.n) if same(x, y)]
    for (x, y), (u, v) in product(pairs, repeat=2):
        if not same(star[x][u], star[y][v]):
            return False
        if sig == "lattice":
            if not same(P.sup({x, u}), P.sup({y, v})) or not same(P.inf({x, u}), P.inf({y, v})):
                return False
        else:
            cxu = P.le(x, u) or P.le(u, x)
            cyv = P.le(y, v) or P.le(v, y)
            if cxu and cyv:
                a = x if P.le(x, u) else u
                b = y if P.le(y, v) else v
                if not same(a, b):
                    return False
    return True


def lattice_ideal_terms(P, star):
    """t1..t5 written out directly from their displayed formulas."""
    j = lambda a, b: P.sup({a, b})  # noqa: E731
    m = lambda *xs: P.inf(set(xs))  # noqa: E731
    s = lambda a, b: star[a][b]  # noqa: E731
    one = P.top()

    def t(x, y, z, u):
        return m(j(x, y), s(z, y), u)

    return {
        "t1": lambda: one,
        "t2": lambda x1, x2, x3, y1, y2: s(j(t(x1, x2, y1, y2), x3), j(x2, x3)),
        "t3": lambda x1, x2, x3, y1, y2: s(m(t(x1, x2, y1, y2), x3), m(x2, x3)),
        "t4": lambda x1, x2, x3, y1, y2: s(s(t(x1, x2, y1, y2), x3), s(x2, x3)),
        "t5": lambda x1, x2, x3, y1, y2: s(s(x3, x1), s(x3, m(j(x1, x2), s(y2, x1), y1))),
    }


def closed_naive(P, fns, A):
    A = set(A)
    if fns["t1"]() not in A:
        return False
    for name in ("t2", "t3", "t4", "t5"):
        f = fns[name]
        for xs in product(range(P.n), repeat=3):
            for ys in product(A, repeat=2):
                if f(*xs, *ys) not in A:
                    return False
    return True
