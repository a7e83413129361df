import itertools
import re

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wmatch.core import Alphabet, Pattern
from wmatch.errors import CapacityGuard
from wmatch.lattice import (
    border,
    build_lattice,
    build_nsets_sublattice,
    mask_of,
    n_sets_sublattice,
    oracle_lattice,
    oracle_shift,
    order_leq,
    popcount,
    prec_table,
    prefix_rest,
    set_label,
    sort_key,
    to_dot,
)

NULL = -1


def test_prec_table_abb(ab):
    prec = prec_table(Pattern.from_string("abb", ab))
    assert prec.tolist() == [[0, NULL], [0, 1], [0, 2]]
    assert prec_table(Pattern.from_string("a", ab)).tolist() == [[0, NULL]]
    assert prec_table(Pattern.from_string("ba", ab))[1, 1] == 0


@pytest.mark.parametrize("w,b", [("abb", 0), ("abab", 2), ("aaa", 2), ("a", 0), ("abaab", 2)])
def test_border(ab, w, b):
    assert border(Pattern.from_string(w, ab)) == b


def test_oracle_shift_examples(ab):
    p = Pattern.from_string("abb", ab)
    assert oracle_shift(p, 0, 2, 0) == (2, 0b001)
    assert oracle_shift(p, 0, 0, 1) == (1, 0)
    assert oracle_shift(p, 0b011, 2, 1) == (3, 0)


def test_abb_lattice_matches_oracle_and_counts(ab):
    p = Pattern.from_string("abb", ab)
    lat = build_lattice(p)
    sh, tr = oracle_lattice(p)
    assert np.array_equal(lat.shift, sh)
    assert np.array_equal(lat.target[sh >= 0], tr[sh >= 0])
    assert (lat.n_states, lat.n_edges) == (7, 24)
    for s in range(7):
        for i in range(3):
            for x in range(2):
                if not s >> i & 1:
                    assert lat.entry(s, i, x) == oracle_shift(p, s, i, x)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 4).flatmap(lambda k: st.tuples(st.just(k), st.lists(st.integers(0, k - 1), min_size=1, max_size=9))))
def test_lattice_equals_oracle(kw):
    k, w = kw
    p = Pattern(Alphabet(tuple("abcd"[:k])), tuple(w))
    lat = build_lattice(p)
    sh, tr = oracle_lattice(p)
    assert np.array_equal(lat.shift, sh)
    assert np.array_equal(lat.target[sh >= 0], tr[sh >= 0])
    m = len(w)
    assert lat.n_states == 2**m - 1
    assert lat.n_edges == k * m * 2 ** (m - 1) == lat.visits


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=2, max_size=7))
def test_matching_symbol_case(w):
    p = Pattern(Alphabet(("a", "b", "c")), tuple(w))
    lat = build_lattice(p)
    m = len(w)
    for s in range(2**m - 1):
        if popcount(s) < m - 1:
            for i in range(m):
                if not s >> i & 1:
                    assert lat.entry(s, i, w[i]) == (0, s | 1 << i)
    assert int(lat.shift.max()) <= m


def test_referenced_state_precedes(ab):
    p = Pattern.from_string("abaabb", ab)
    lat = build_lattice(p)
    m = len(p)
    for s in range(2**m - 1):
        if popcount(s) <= 1:
            continue
        top = s.bit_length() - 1
        rest = s & ~(1 << top)
        for i in range(m):
            if s >> i & 1:
                continue
            for x in range(2):
                if x != p[i]:
                    t = lat.entry(rest, i, x)[1]
                    assert order_leq(t, s) and t != s


def test_order_leq():
    assert order_leq(mask_of([0]), mask_of([1, 2]))
    assert order_leq(mask_of([0, 2]), mask_of([1, 2]))
    assert not order_leq(mask_of([1, 2]), mask_of([0, 2]))
    subsets = list(range(7))
    ordered = sorted(subsets, key=sort_key)
    for a, b in itertools.combinations(ordered, 2):
        assert order_leq(a, b) and not order_leq(b, a)


def test_prefix_rest():
    assert prefix_rest(mask_of([0, 1, 3])) == (1, mask_of([3]))
    assert prefix_rest(mask_of([2])) == (-1, mask_of([2]))


def test_one_sets_sublattice_of_abb(ab):
    p = Pattern.from_string("abb", ab)
    sub = n_sets_sublattice(build_lattice(p), 1)
    assert [set_label(int(s)) for s in sub.masks] == ["{}", "{0}", "{1}", "{0,1}", "{2}", "{0,2}"]
    assert sub.is_complete()


@pytest.mark.parametrize("w", ["abb", "abab", "aabba", "abaabab", "bbbbbb"])
def test_direct_sublattice_equals_restriction(ab, w):
    p = Pattern.from_string(w, ab)
    lat = build_lattice(p)
    for n in range(1, len(w) + 1):
        a, b = n_sets_sublattice(lat, n), build_nsets_sublattice(p, n)
        assert np.array_equal(a.masks, b.masks)
        assert np.array_equal(a.shift, b.shift)
        assert np.array_equal(a.trans, b.trans)
        assert a.is_complete()
    full = n_sets_sublattice(lat, len(w))
    assert full.n_states == lat.n_states and full.admissible().sum() == (lat.shift[:, :, 0] >= 0).sum()


def test_commutation_identity_small(ab):
    rng = np.random.default_rng(2)
    for _ in range(300):
        m = int(rng.integers(2, 8))
        p = Pattern(ab, tuple(int(x) for x in rng.integers(0, 2, m)))
        lat = build_lattice(p)
        s = int(rng.integers(0, 2**m - 1))
        free = [i for i in range(m) if not s >> i & 1]
        if len(free) < 2:
            continue
        i, j = (int(v) for v in rng.choice(free, 2, replace=False))
        x, y = (int(v) for v in rng.integers(0, 2, 2))
        assert _two_step(lat, s, i, x, j, y) == _two_step(lat, s, j, y, i, x)


def _two_step(lat, s, i, x, j, y):
    d, t = lat.entry(s, i, x)
    if j - d < 0:
        return d, t
    d2, t2 = lat.entry(t, j - d, y)
    return d + d2, t2


def test_capacity_guard(ab):
    with pytest.raises(CapacityGuard):
        build_lattice(Pattern.from_string("ab" * 5, ab), capacity=8)


def test_dot_export(ab):
    dot = to_dot(build_lattice(Pattern.from_string("abb", ab)))
    nodes = re.findall(r"^\s+n\d+ \[label=", dot, flags=re.M)
    edges = re.findall(r"->", dot)
    assert len(nodes) == 7 and len(edges) == 24
    assert 'n0 -> n1 [label="0,a|0"];' in dot
