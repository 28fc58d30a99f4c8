from itertools import combinations

import numpy as np
import pytest

from conftest import idx
from oracles import NaivePoset
from spclat.errors import CycleDetected, DuplicateLabel, NotAPartialOrder, SizeGuardError
from spclat.formats import parse_poset
from spclat.generate import natural_posets
from spclat.poset import Poset, find_isomorphism, from_mask, is_isomorphic, to_mask


def small_posets(max_n=4):
    for n in range(1, max_n + 1):
        for rel in natural_posets(n):
            yield Poset([f"p{i}" for i in range(n)], rel)


def test_n5_shape(n5):
    p = n5.poset
    a, b, c = (p.index(x) for x in "abc")
    assert p.le(a, c)
    assert not p.comparable(b, a) and not p.comparable(b, c)
    assert p.is_lattice()


def test_singleton():
    p = parse_poset("[elements]\n1\n")
    assert p.n == 1 and p.leq.tolist() == [[True]]


def test_cycle_rejected():
    with pytest.raises(CycleDetected):
        parse_poset("[elements]\n0 1\n[covers]\n0 1\n1 0\n")


def test_constructor_validation():
    with pytest.raises(DuplicateLabel):
        Poset(["a", "a"], np.eye(2))
    with pytest.raises(NotAPartialOrder):
        Poset(["a", "b"], [[False, False], [False, True]])
    with pytest.raises(NotAPartialOrder):
        # 0<1, 1<2 but not 0<2
        Poset(["0", "1", "2"], [[1, 1, 0], [0, 1, 1], [0, 0, 1]])
    with pytest.raises(SizeGuardError):
        Poset.antichain(25)


def test_size_guard_override(monkeypatch):
    monkeypatch.setenv("SPC_SIZE_GUARD", "30")
    assert Poset.antichain(25).n == 25


def test_bounds_examples(n5, fig2):
    f = fig2.poset
    assert f.upper_bounds(idx(fig2, "a b")) == idx(fig2, "d e 1")
    assert f.lower_bounds(idx(fig2, "d e")) == idx(fig2, "0 a b c")
    assert f.upper_bounds([]) == frozenset(range(f.n))
    assert f.lower_bounds([]) == frozenset(range(f.n))
    assert f.infimum(idx(fig2, "d e")) is None
    p = n5.poset
    assert p.upper_bounds(idx(n5, "a b")) == idx(n5, "1")
    assert p.lower_bounds(idx(n5, "c b")) == idx(n5, "0")
    assert p.infimum(idx(n5, "a b")) == p.index("0")
    for x in range(p.n):
        assert p.infimum([x]) == x and p.supremum([x]) == x


def test_min_comparable(n5):
    p = n5.poset
    a, b, c = (p.index(x) for x in "abc")
    assert p.min_comparable(a, c) == a
    assert p.min_comparable(c, a) == a
    assert p.min_comparable(a, b) is None
    assert all(p.min_comparable(x, x) == x for x in range(p.n))


def test_is_lattice_examples(n5, fig2):
    assert n5.poset.is_lattice()
    assert not fig2.poset.is_lattice()
    assert Poset.chain(5).is_lattice()


def test_hasse_covers_examples(n5, fig2):
    def named(s):
        return {(s.labels[x], s.labels[y]) for x, y in s.poset.hasse_covers()}

    assert named(n5) == {("0", "a"), ("a", "c"), ("c", "1"), ("0", "b"), ("b", "1")}
    assert named(fig2) == {
        ("0", "a"), ("0", "b"), ("a", "c"), ("c", "d"), ("c", "e"),
        ("b", "d"), ("b", "e"), ("d", "1"), ("e", "1"),
    }
    assert Poset.antichain(3).hasse_covers() == []


def test_up_directed_and_convex(n5, fig2):
    assert fig2.poset.is_up_directed(idx(fig2, "d e 1"))
    assert n5.poset.is_up_directed(idx(n5, "b"))
    assert not n5.poset.is_up_directed(idx(n5, "a b"))
    assert n5.poset.is_convex(idx(n5, "a c"))
    assert not n5.poset.is_convex(idx(n5, "0 c"))
    assert n5.poset.is_convex(range(5))


def test_masks_round_trip():
    for s in [set(), {0}, {1, 3, 7}]:
        assert from_mask(to_mask(s)) == frozenset(s)


@pytest.mark.parametrize("p", list(small_posets(4)), ids=lambda p: str(p.leq.sum()))
def test_bound_operators_against_oracle(p):
    q = NaivePoset.from_matrix(p.leq.tolist())
    for r in range(0, min(p.n, 3) + 1):
        for s in combinations(range(p.n), r):
            U, L = p.upper_bounds(s), p.lower_bounds(s)
            assert U == frozenset(q.U(s))
            assert L == frozenset(q.L(s))
            # Galois closure
            assert p.lower_bounds(p.upper_bounds(L)) == L
            if len(s) == 1:
                # at s = {} the convention U({}) = L({}) = universe makes this fail
                assert U & L <= frozenset(s)
            if s:
                assert p.infimum(s) == q.inf(s)
                assert p.supremum(s) == q.sup(s)
    assert p.is_lattice() == q.is_lattice()
    assert set(p.hasse_covers()) == q.covers()


def test_antitone_bounds():
    p = Poset.from_covers(list("0abc1"), [(0, 1), (1, 3), (3, 4), (0, 2), (2, 4)])
    subsets = [frozenset(s) for r in range(4) for s in combinations(range(5), r)]
    for s in subsets:
        for t in subsets:
            if s <= t:
                assert p.upper_bounds(t) <= p.upper_bounds(s)
                assert p.lower_bounds(t) <= p.lower_bounds(s)


def test_covers_closure_identity():
    for p in small_posets(5):
        again = Poset.from_covers(p.labels, p.hasse_covers())
        assert again == p


def test_isomorphism(n5):
    perm = [4, 2, 0, 3, 1]
    q = n5.poset.permuted(perm)
    m = find_isomorphism(n5.poset, q)
    assert m is not None
    assert all(n5.poset.le(a, b) == q.le(m[a], m[b]) for a in range(5) for b in range(5))
    assert not is_isomorphic(n5.poset, Poset.chain(5))
    assert not is_isomorphic(Poset.chain(2), Poset.antichain(2))
