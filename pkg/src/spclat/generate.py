"""Random and exhaustive sources of small posets."""
from __future__ import annotations

import string
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import limits
from .errors import GiveUp, NotSectionallyPseudocomplemented, SizeGuardError
from .poset import Poset, is_isomorphic
from .star import SpcStructure, compute_star

REQUIRE = ("any", "spc", "strong", "lattice")


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int
    n: int
    density: float = 0.4
    require: str = "any"
    max_tries: int = 20000


def conventional_labels(leq: np.ndarray) -> list[str]:
    """'0' for a least element, '1' for a greatest, letters for the rest."""
    n = leq.shape[0]
    bottom = [i for i in range(n) if leq[i].all()]
    top = [i for i in range(n) if leq[:, i].all()]
    letters = iter(string.ascii_lowercase + string.ascii_uppercase)
    out = []
    for i in range(n):
        if n > 1 and bottom and i == bottom[0]:
            out.append("0")
        elif top and i == top[0]:
            out.append("1")
        else:
            out.append(next(letters) if n <= 52 else f"p{i}")
    return out


def _random_order(rng: np.random.Generator, n: int, density: float, bounded: bool, with_bottom: bool):
    """Random DAG along a random linear order, closed transitively.

    For ``bounded`` the last element is made a top (filters and the strong
    property are anchored at one); ``with_bottom`` likewise adds a least
    element.
    """
    rel = np.eye(n, dtype=bool)
    lo = 1 if with_bottom and n > 1 else 0
    hi = n - 1 if bounded and n > 1 else n
    for i in range(lo, hi):
        for j in range(i + 1, hi):
            if rng.random() < density:
                rel[i, j] = True
    if bounded:
        rel[:, n - 1] = True
    if with_bottom:
        rel[0, :] = True
    for k in range(n):
        rel |= rel[:, k : k + 1] & rel[k : k + 1, :]
    # shuffle, then list along a linear extension so files read bottom-up
    perm = rng.permutation(n)
    rel = rel[np.ix_(perm, perm)]
    order = np.lexsort((np.arange(n), rel.sum(axis=0)))
    return rel[np.ix_(order, order)]


def _accept(p: Poset, require: str):
    if require == "any":
        return True
    if require == "lattice":
        if not p.is_lattice():
            return False
    try:
        s = compute_star(p)
    except NotSectionallyPseudocomplemented:
        return False
    if require == "strong":
        return s.strong
    return True


def generate(config: GeneratorConfig) -> Poset:
    """Deterministic random poset satisfying ``config.require``."""
    if config.require not in REQUIRE:
        raise ValueError(f"require must be one of {REQUIRE}")
    n = config.n
    if n < 1:
        raise ValueError("n must be positive")
    if n > limits.poset_limit():
        raise SizeGuardError("generate", n, limits.poset_limit())
    rng = np.random.default_rng(config.seed)
    bounded = config.require != "any"
    with_bottom = config.require == "lattice"
    for _ in range(config.max_tries):
        leq = _random_order(rng, n, config.density, bounded, with_bottom)
        p = Poset(conventional_labels(leq), leq)
        if _accept(p, config.require):
            return p
    raise GiveUp(f"no {config.require} poset with n={n} after {config.max_tries} tries")


def random_structures(count: int, n_range=(2, 8), require="strong", seed=0, density=None):
    """``count`` structures from consecutive seeds, sizes cycling over n_range."""
    lo, hi = n_range
    out = []
    k = 0
    while len(out) < count:
        n = lo + k % (hi - lo + 1)
        d = density if density is not None else 0.25 + 0.5 * ((k * 7919) % 100) / 100
        p = generate(GeneratorConfig(seed=seed + k, n=n, density=d, require=require))
        out.append(compute_star(p))
        k += 1
    return out


def natural_posets(n: int):
    """Every poset on 0..n-1 in which i <= j implies i <= j as integers.

    Each poset is built by adding element k with an arbitrary down-closed
    set of earlier elements below it, so every naturally labelled poset is
    produced exactly once.  Yields boolean relation matrices.
    """
    def down_sets(rel, k):
        out = []
        for r in range(k + 1):
            for sub in combinations(range(k), r):
                m = set(sub)
                if all(j in m for i in m for j in range(k) if rel[j, i]):
                    out.append(sub)
        return out

    def rec(rel, k):
        if k == n:
            yield rel.copy()
            return
        for sub in down_sets(rel, k):
            rel[k, :] = False
            rel[:, k] = False
            rel[k, k] = True
            for j in sub:
                rel[j, k] = True
            yield from rec(rel, k + 1)

    yield from rec(np.zeros((n, n), dtype=bool), 0)


def _invariant(p: Poset):
    return tuple(sorted((bin(p.down[i]).count("1"), bin(p.up[i]).count("1")) for i in range(p.n)))


def dedupe_isomorphic(posets):
    """Keep the first of each isomorphism class, in input order."""
    buckets: dict = {}
    out = []
    for p in posets:
        bucket = buckets.setdefault(_invariant(p), [])
        if any(is_isomorphic(p, q) for q in bucket):
            continue
        bucket.append(p)
        out.append(p)
    return out


def all_lattices(n: int) -> list[Poset]:
    """All lattices with n elements up to isomorphism (n <= 7 is practical).

    A finite lattice is 0 and 1 around an arbitrary middle poset on n-2
    elements whose bounded extension is a lattice.
    """
    if n == 1:
        return [Poset(["1"], [[True]])]
    if n == 2:
        return [Poset(["0", "1"], [[True, True], [False, True]])]
    def candidates():
        for mid in natural_posets(n - 2):
            rel = np.zeros((n, n), dtype=bool)
            rel[0, :] = True
            rel[:, n - 1] = True
            rel[1 : n - 1, 1 : n - 1] = mid
            p = Poset(conventional_labels(rel), rel, check=False)
            if p.is_lattice():
                yield p

    return dedupe_isomorphic(candidates())


def all_spc_lattices(max_n: int) -> list[SpcStructure]:
    out = []
    for n in range(1, max_n + 1):
        for p in all_lattices(n):
            try:
                out.append(compute_star(p))
            except NotSectionallyPseudocomplemented:
                pass
    return out


def posets_with_top(n: int):
    """Naturally labelled posets on n elements whose last element is a top."""
    for mid in natural_posets(n - 1):
        rel = np.zeros((n, n), dtype=bool)
        rel[: n - 1, : n - 1] = mid
        rel[:, n - 1] = True
        yield rel


def search_non_strong(max_n: int):
    """First spc poset (by size) that is not strongly spc, or None."""
    for n in range(1, max_n + 1):
        for rel in posets_with_top(n):
            p = Poset(conventional_labels(rel), rel, check=False)
            try:
                s = compute_star(p)
            except NotSectionallyPseudocomplemented:
                continue
            if not s.strong:
                return s
    return None
