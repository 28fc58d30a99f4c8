"""Terms over {v, ^, *, U, 1, variables} with partial evaluation.

Meets and joins are evaluated as infima/suprema in the underlying poset and
may fail to exist; such failures produce an :class:`Undefined` value that
propagates upward instead of raising.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Mapping, Union

import numpy as np

from .errors import UnboundVariable
from .poset import to_mask
from .report import Report
from .star import SpcStructure


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class One:
    def __str__(self):
        return "1"


@dataclass(frozen=True)
class Join:
    left: "Term"
    right: "Term"

    def __str__(self):
        return f"({self.left} v {self.right})"


@dataclass(frozen=True)
class Meet:
    args: tuple

    def __str__(self):
        return "(" + " ^ ".join(map(str, self.args)) + ")"


@dataclass(frozen=True)
class Star:
    left: "Term"
    right: "Term"

    def __str__(self):
        return f"({self.left} * {self.right})"


@dataclass(frozen=True)
class UBMeet:
    """Infimum of U(args[0], args[1]) together with the remaining args."""

    args: tuple

    def __str__(self):
        rest = "".join(f" ^ {a}" for a in self.args[2:])
        return f"(U({self.args[0]}, {self.args[1]}){rest})"


Term = Union[Var, One, Join, Meet, Star, UBMeet]


@dataclass(frozen=True)
class Undefined:
    """A bound that does not exist; ``term`` is the failing sub-term."""

    term: Term
    args: tuple


ONE = One()


def star(a, b):
    return Star(a, b)


def meet(*args):
    return Meet(tuple(args))


def join(a, b):
    return Join(a, b)


def ub_meet(x, y, *rest):
    return UBMeet((x, y) + tuple(rest))


def variables(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, One):
        return set()
    if isinstance(t, (Join, Star)):
        return variables(t.left) | variables(t.right)
    out = set()
    for a in t.args:
        out |= variables(a)
    return out


def eval_term(s: SpcStructure, t: Term, env: Mapping[str, int]):
    """Value of t under env: an element index or an Undefined."""
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise UnboundVariable(t.name) from None
    if isinstance(t, One):
        return s.top
    if isinstance(t, Star):
        a = eval_term(s, t.left, env)
        if isinstance(a, Undefined):
            return a
        b = eval_term(s, t.right, env)
        if isinstance(b, Undefined):
            return b
        return s.star[a][b]
    if isinstance(t, Join):
        a = eval_term(s, t.left, env)
        if isinstance(a, Undefined):
            return a
        b = eval_term(s, t.right, env)
        if isinstance(b, Undefined):
            return b
        v = s.poset.join(a, b)
        return Undefined(t, (a, b)) if v is None else v
    vals = []
    for a in t.args:
        v = eval_term(s, a, env)
        if isinstance(v, Undefined):
            return v
        vals.append(v)
    p = s.poset
    if isinstance(t, Meet):
        v = p.inf_mask(to_mask(vals))
    else:
        m = p.upper_mask((1 << vals[0]) | (1 << vals[1])) | to_mask(vals[2:])
        v = p.inf_mask(m)
    return Undefined(t, tuple(vals)) if v is None else v


@dataclass(frozen=True)
class IdealTerm:
    """A named term with its x-variables (free) and y-variables (from the set)."""

    name: str
    term: Term
    xs: tuple[str, ...]
    ys: tuple[str, ...]

    def __call__(self, s: SpcStructure, *values: int):
        env = dict(zip(self.xs + self.ys, values))
        return eval_term(s, self.term, env)


X1, X2, X3, X4 = (Var(f"x{i}") for i in range(1, 5))
Y1, Y2, Y3, Y4 = (Var(f"y{i}") for i in range(1, 5))


def helper_t(x, y, z, u) -> Term:
    """(x v y) ^ (z*y) ^ u"""
    return meet(join(x, y), star(z, y), u)


def helper_T(x, y, z, u) -> Term:
    """U(x,y) ^ (z*y) ^ u"""
    return ub_meet(x, y, star(z, y), u)


def ideal_terms_lattice() -> list[IdealTerm]:
    xs, ys = ("x1", "x2", "x3"), ("y1", "y2")
    t = helper_t(X1, X2, Y1, Y2)
    return [
        IdealTerm("t1", ONE, (), ()),
        IdealTerm("t2", star(join(t, X3), join(X2, X3)), xs, ys),
        IdealTerm("t3", star(meet(t, X3), meet(X2, X3)), xs, ys),
        IdealTerm("t4", star(star(t, X3), star(X2, X3)), xs, ys),
        IdealTerm("t5", star(star(X3, X1), star(X3, helper_t(X2, X1, Y2, Y1))), xs, ys),
    ]


def partial_ideal_terms_poset() -> list[IdealTerm]:
    xs, ys = ("x1", "x2", "x3"), ("y1", "y2")
    T = helper_T(X1, X2, Y1, Y2)
    return [
        IdealTerm("T1", ONE, (), ()),
        IdealTerm("T2", star(star(T, X3), star(X2, X3)), xs, ys),
        IdealTerm("T3", star(star(X3, X1), star(X3, helper_T(X2, X1, Y2, Y1))), xs, ys),
        IdealTerm(
            "T4",
            star(meet(T, helper_T(X3, X4, Y3, Y4)), meet(X2, X4)),
            ("x1", "x2", "x3", "x4"),
            ("y1", "y2", "y3", "y4"),
        ),
    ]


def maltsev_p() -> Term:
    x, y, z = Var("x"), Var("y"), Var("z")
    return meet(star(star(x, y), z), star(star(z, y), x))


def maltsev_q() -> Term:
    x, y, z = Var("x"), Var("y"), Var("z")
    return meet(join(x, z), star(star(x, y), z), star(y, x))


def partial_maltsev_Q() -> Term:
    x, y, z = Var("x"), Var("y"), Var("z")
    return ub_meet(x, z, star(star(x, y), z), star(y, x))


def _ternary(s, t, x, y, z):
    return eval_term(s, t, {"x": x, "y": y, "z": z})


def _maltsev_report(s: SpcStructure, t: Term, name: str) -> Report:
    rep = Report(name)
    n = s.n
    bad1 = [(x, z) for x, z in product(range(n), repeat=2) if _ternary(s, t, x, x, z) != z]
    bad2 = [(x, z) for x, z in product(range(n), repeat=2) if _ternary(s, t, x, z, z) != x]
    rep.add(f"{name}(x,x,z)=z", not bad1, bad1)
    rep.add(f"{name}(x,z,z)=x", not bad2, bad2)
    return rep


def maltsev_check_p(s: SpcStructure) -> Report:
    s.require_lattice("Maltsev term p")
    return _maltsev_report(s, maltsev_p(), "p")


def maltsev_check_q(s: SpcStructure) -> Report:
    """Maltsev identities for q, plus a triple where q and p differ (if any)."""
    s.require_lattice("Maltsev term q")
    rep = _maltsev_report(s, maltsev_q(), "q")
    p, q = maltsev_p(), maltsev_q()
    diff = [
        (x, y, z)
        for x, y, z in product(range(s.n), repeat=3)
        if _ternary(s, p, x, y, z) != _ternary(s, q, x, y, z)
    ]
    rep.info["p_q_differ"] = diff[0] if diff else None
    return rep


def partial_maltsev_check_Q(s: SpcStructure) -> Report:
    """Q(x,x,z)=z and Q(x,z,z)=x, both always defined; other triples recorded."""
    rep = _maltsev_report(s, partial_maltsev_Q(), "Q")
    Q = partial_maltsev_Q()
    undefined = [
        (x, y, z)
        for x, y, z in product(range(s.n), repeat=3)
        if isinstance(_ternary(s, Q, x, y, z), Undefined)
    ]
    rep.info["Q_undefined"] = undefined
    return rep


@dataclass
class ClosureResult:
    ok: bool
    term: str | None = None
    assignment: tuple | None = None
    value: object = None

    def __bool__(self):
        return self.ok

    @property
    def undefined(self) -> bool:
        return isinstance(self.value, Undefined)


class VectorEvaluator:
    """Evaluates a term on whole arrays of assignments at once.

    Element values are int64 arrays with -1 marking Undefined.  Infima are
    taken of the full argument set (not folded pairwise), so the semantics
    match :func:`eval_term` on posets as well as lattices.
    """

    def __init__(self, s: SpcStructure):
        p = s.poset
        n = s.n
        self.s = s
        self.n = n
        self.star = np.array(s.star, dtype=np.int64).reshape(n, n)
        self.down = np.array(p.down, dtype=np.int64)
        self.up = np.array(p.up, dtype=np.int64)
        join = np.full((n, n), -1, dtype=np.int64)
        lu = np.zeros((n, n), dtype=np.int64)
        for a in range(n):
            for b in range(n):
                v = p.join(a, b)
                if v is not None:
                    join[a, b] = v
                lu[a, b] = p.lower_mask(p.upper_mask((1 << a) | (1 << b)))
        self.join = join
        self.lu = lu

    def greatest(self, m):
        out = np.full(np.shape(m), -1, dtype=np.int64)
        for g in range(self.n):
            hit = ((m >> g) & 1).astype(bool) & ((m & ~self.down[g]) == 0)
            out[hit] = g
        return out

    def __call__(self, t: Term, env):
        if isinstance(t, Var):
            try:
                return env[t.name]
            except KeyError:
                raise UnboundVariable(t.name) from None
        if isinstance(t, One):
            return np.int64(self.s.top)
        if isinstance(t, (Star, Join)):
            a = self(t.left, env)
            b = self(t.right, env)
            a, b = np.broadcast_arrays(a, b)
            bad = (a < 0) | (b < 0)
            table = self.star if isinstance(t, Star) else self.join
            out = table[np.where(bad, 0, a), np.where(bad, 0, b)]
            return np.where(bad, -1, out)
        vals = np.broadcast_arrays(*[self(a, env) for a in t.args])
        bad = np.zeros(vals[0].shape, dtype=bool)
        for v in vals:
            bad |= v < 0
        safe = [np.where(bad, 0, v) for v in vals]
        if isinstance(t, Meet):
            m = self.down[safe[0]]
            rest = safe[1:]
        else:
            m = self.lu[safe[0], safe[1]]
            rest = safe[2:]
        for v in rest:
            m = m & self.down[v]
        return np.where(bad, -1, self.greatest(m))


def is_closed_under(s: SpcStructure, a, terms: list[IdealTerm]) -> ClosureResult:
    """Every term value with x's arbitrary and y's drawn from a is defined and in a."""
    members = np.array(sorted(set(a)), dtype=np.int64)
    n = s.n
    ev = VectorEvaluator(s)
    inside = np.zeros(n + 1, dtype=bool)
    inside[members] = True  # index -1 (Undefined) maps to the False sentinel
    for it in terms:
        names = it.xs + it.ys
        ranges = [np.arange(n)] * len(it.xs) + [members] * len(it.ys)
        if not names:
            v = ev(it.term, {})
            if v < 0 or not inside[v]:
                return ClosureResult(False, it.name, (), _scalar_value(s, it, ()))
            continue
        # chunk over the first variable to bound memory
        for first in ranges[0]:
            grids = np.meshgrid(*ranges[1:], indexing="ij") if len(names) > 1 else []
            env = {names[0]: np.int64(first)}
            env.update(zip(names[1:], grids))
            v = np.asarray(ev(it.term, env))
            fail = ~inside[v]
            if fail.any():
                idx = np.unravel_index(int(np.argmax(fail)), fail.shape) if fail.ndim else ()
                assignment = (int(first),) + tuple(int(g[idx]) for g in grids)
                return ClosureResult(False, it.name, assignment, _scalar_value(s, it, assignment))
    return ClosureResult(True)


def _scalar_value(s, it, assignment):
    return it(s, *assignment)


def is_closed_under_scalar(s: SpcStructure, a, terms: list[IdealTerm]) -> ClosureResult:
    """Reference version of :func:`is_closed_under` using :func:`eval_term`."""
    members = sorted(set(a))
    inside = set(members)
    for it in terms:
        for xv in product(range(s.n), repeat=len(it.xs)):
            for yv in product(members, repeat=len(it.ys)):
                v = it(s, *xv, *yv)
                if isinstance(v, Undefined) or v not in inside:
                    return ClosureResult(False, it.name, xv + yv, v)
    return ClosureResult(True)


def ideal_law_violations(s: SpcStructure, terms: list[IdealTerm]) -> list[tuple]:
    """Assignments where t(x..., 1, ..., 1) is undefined or differs from 1."""
    out = []
    for it in terms:
        for xv in product(range(s.n), repeat=len(it.xs)):
            v = it(s, *xv, *([s.top] * len(it.ys)))
            if isinstance(v, Undefined) or v != s.top:
                out.append((it.name, xv, v))
    return out
