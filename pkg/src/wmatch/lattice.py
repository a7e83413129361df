"""Position lattice of a pattern, its n-sets sublattices and helpers.

Position sets are bitmasks (bit ``j`` set means relative position ``j`` has
been checked).  A :class:`Lattice` stores, for each state and each unchecked
position ``i`` and symbol ``x``, the shift and the target state.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from ._jit import njit
from .core import Pattern
from .errors import CapacityGuard

DEFAULT_CAPACITY = 24


def border(pattern: Pattern | np.ndarray) -> int:
    """Length of the longest proper suffix of w which is also a prefix."""
    w = pattern.symbols if isinstance(pattern, Pattern) else [int(x) for x in pattern]
    m = len(w)
    fail = [0] * m
    b = 0
    for i in range(1, m):
        while b > 0 and w[i] != w[b]:
            b = fail[b - 1]
        if w[i] == w[b]:
            b += 1
        fail[i] = b
    return fail[-1] if m else 0


def prec_table(pattern: Pattern) -> np.ndarray:
    """``prec[i, x]`` = last position ``j <= i`` with ``w[j] == x``, or -1."""
    m, k = len(pattern), pattern.alphabet.size
    out = np.full((m, k), -1, dtype=np.int64)
    last = [-1] * k
    for i, c in enumerate(pattern.symbols):
        last[c] = i
        out[i] = last
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def set_of(mask: int) -> list[int]:
    out = []
    j = 0
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return out


def mask_of(positions) -> int:
    out = 0
    for j in positions:
        out |= 1 << j
    return out


def set_label(mask: int) -> str:
    return "{" + ",".join(str(j) for j in set_of(mask)) + "}"


def prefix_rest(mask: int) -> tuple[int, int]:
    """Return ``(p, rest_mask)``: ``{0..p}`` is the maximal initial run (p=-1 if 0 is unchecked)."""
    p = -1
    while mask >> (p + 1) & 1:
        p += 1
    return p, mask & ~((1 << (p + 1)) - 1)


def order_leq(s: int, t: int) -> bool:
    """Total order on position sets: by size, then by the smallest differing position."""
    if s == t:
        return True
    ps, pt = popcount(s), popcount(t)
    if ps != pt:
        return ps < pt
    diff = s ^ t
    low = diff & -diff
    return bool(s & low)


def sort_key(mask: int) -> tuple[int, list[int]]:
    """Key realising ``order_leq`` (same size sets compare lexicographically)."""
    return popcount(mask), set_of(mask)


# -- kernels ------------------------------------------------------------------


@njit
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit
def _match_entry(s, i, m, b, full_size):
    """Entry for reading the expected symbol at ``i`` in state ``s``."""
    if full_size:
        return m - b, (1 << b) - 1
    return 0, s | (1 << i)


@njit
def lattice_kernel(w, k, b):
    """Position lattice in increasing state order; returns ``(shift, trans, visits)``."""
    m = w.shape[0]
    n = 1 << m
    sh = np.full((n, m, k), -1, dtype=np.int16)
    tr = np.full((n, m, k), -1, dtype=np.int32)
    visits = 0
    # empty set
    last = np.full(k, -1, dtype=np.int64)
    for i in range(m):
        last[w[i]] = i
        for x in range(k):
            visits += 1
            if x == w[i]:
                d, t = _match_entry(0, i, m, b, m == 1)
            elif last[x] >= 0:
                d, t = i - last[x], 1 << last[x]
            else:
                d, t = i + 1, 0
            sh[0, i, x] = d
            tr[0, i, x] = t
    if m == 1:
        return sh, tr, visits
    # singletons
    for i in range(m):
        s = 1 << i
        for j in range(m):
            if j == i:
                continue
            for x in range(k):
                visits += 1
                if x == w[j]:
                    d, t = _match_entry(s, j, m, b, m == 2)
                elif j < i:
                    d0 = sh[0, j, x]
                    u = tr[0, j, x]
                    pos = i - d0
                    d = d0 + sh[u, pos, w[i]]
                    t = tr[u, pos, w[i]]
                elif i == 0:
                    d = 1 + sh[0, j - 1, x]
                    t = tr[0, j - 1, x]
                else:
                    d0 = sh[0, i - 1, w[i]]
                    u = tr[0, i - 1, w[i]]
                    pos = j - 1 - d0
                    d = 1 + d0 + sh[u, pos, x]
                    t = tr[u, pos, x]
                sh[s, j, x] = d
                tr[s, j, x] = t
    # cardinals 2..m-1, each in lexicographic order of sorted elements
    sel = np.zeros(m, dtype=np.int64)
    for size in range(2, m):
        for j in range(size):
            sel[j] = j
        while True:
            s = 0
            for j in range(size):
                s |= 1 << sel[j]
            top = sel[size - 1]
            s_minus = s & ~(1 << top)
            for i in range(m):
                if s >> i & 1:
                    continue
                for x in range(k):
                    visits += 1
                    if x == w[i]:
                        d, t = _match_entry(s, i, m, b, size == m - 1)
                    else:
                        d0 = sh[s_minus, i, x]
                        u = tr[s_minus, i, x]
                        pos = top - d0
                        if pos < 0:
                            d, t = d0, u
                        else:
                            d = d0 + sh[u, pos, w[top]]
                            t = tr[u, pos, w[top]]
                    sh[s, i, x] = d
                    tr[s, i, x] = t
            j = size - 1
            while j >= 0 and sel[j] >= m - size + j:
                j -= 1
            if j < 0:
                break
            sel[j] += 1
            for r in range(j + 1, size):
                sel[r] = sel[r - 1] + 1
    return sh, tr, visits


@njit
def oracle_kernel(w, k):
    """Shift/target tables by scanning candidate shifts one by one."""
    m = w.shape[0]
    n = 1 << m
    sh = np.full((n, m, k), -1, dtype=np.int16)
    tr = np.full((n, m, k), -1, dtype=np.int32)
    for s in range(n - 1):
        first = 1 if _popcount(s) == m - 1 else 0
        for i in range(m):
            if s >> i & 1:
                continue
            for x in range(k):
                kk = first
                while kk <= m:
                    ok = kk > i or w[i - kk] == x
                    if ok:
                        for j in range(kk, m):
                            if s >> j & 1 and w[j - kk] != w[j]:
                                ok = False
                                break
                    if ok:
                        break
                    kk += 1
                sh[s, i, x] = kk
                tr[s, i, x] = (s | (1 << i)) >> kk
    return sh, tr


@njit
def subset_kernel(w, k, masks):
    """Entries for an arbitrary list of states using per-shift conflict masks."""
    m = w.shape[0]
    conflict = np.zeros(m + 1, dtype=np.int64)
    for kk in range(1, m + 1):
        c = 0
        for j in range(kk, m):
            if w[j - kk] != w[j]:
                c |= 1 << j
        conflict[kk] = c
    n = masks.shape[0]
    sh = np.full((n, m, k), -1, dtype=np.int16)
    target = np.full((n, m, k), -1, dtype=np.int64)
    index = np.full((n, m, k), -1, dtype=np.int64)
    for r in range(n):
        s = masks[r]
        first = 1 if _popcount(s) == m - 1 else 0
        for i in range(m):
            if s >> i & 1:
                continue
            for x in range(k):
                kk = first
                while not ((kk > i or w[i - kk] == x) and (s & conflict[kk]) == 0):
                    kk += 1
                t = (s | (1 << i)) >> kk
                sh[r, i, x] = kk
                target[r, i, x] = t
                pos = np.searchsorted(masks, t)
                if pos < n and masks[pos] == t:
                    index[r, i, x] = pos
    return sh, target, index


# -- public API -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Lattice:
    """A (sub)lattice: states sorted by mask, entries indexed ``[state, position, symbol]``.

    ``trans`` holds target state indices (-1 when the position is already
    checked or the target lies outside a sublattice); ``target`` holds target
    masks.  For the full lattice state index and mask coincide.
    """

    pattern: Pattern
    masks: np.ndarray
    shift: np.ndarray
    trans: np.ndarray
    target: np.ndarray
    is_full: bool
    visits: int = 0
    _index: dict = field(default=None, init=False, repr=False)

    @property
    def m(self) -> int:
        return len(self.pattern)

    @property
    def k(self) -> int:
        return self.pattern.alphabet.size

    @property
    def n_states(self) -> int:
        return self.masks.shape[0]

    @property
    def n_edges(self) -> int:
        return int((self.shift >= 0).sum())

    def index(self, mask: int) -> int:
        if self.is_full:
            if not 0 <= mask < self.n_states:
                raise KeyError(mask)
            return mask
        pos = int(np.searchsorted(self.masks, mask))
        if pos < self.n_states and self.masks[pos] == mask:
            return pos
        raise KeyError(mask)

    def __contains__(self, mask: int) -> bool:
        try:
            self.index(mask)
        except KeyError:
            return False
        return True

    def entry(self, mask: int, i: int, x: int) -> tuple[int, int]:
        """``(shift, target mask)`` for reading symbol ``x`` at position ``i`` in state ``mask``."""
        r = self.index(mask)
        d = int(self.shift[r, i, x])
        if d < 0:
            raise ValueError(f"position {i} already checked in {set_label(mask)}")
        return d, int(self.target[r, i, x])

    def admissible(self) -> np.ndarray:
        """``Tr``: positions whose every outcome stays inside the (sub)lattice."""
        return (self.shift[:, :, 0] >= 0) & (self.trans >= 0).all(axis=2)

    def is_complete(self) -> bool:
        return bool(self.admissible().any(axis=1).all())


def build_lattice(pattern: Pattern, capacity: int = DEFAULT_CAPACITY) -> Lattice:
    m = len(pattern)
    if m > capacity:
        raise CapacityGuard(f"pattern length {m} exceeds lattice capacity {capacity}")
    sh, tr, visits = lattice_kernel(pattern.array, pattern.alphabet.size, border(pattern))
    n = (1 << m) - 1
    tr = tr[:n]
    return Lattice(pattern, np.arange(n, dtype=np.int64), sh[:n], tr, tr, True, int(visits))


def oracle_lattice(pattern: Pattern) -> tuple[np.ndarray, np.ndarray]:
    """Brute-force ``(shift, target)`` tables indexed by state mask."""
    sh, tr = oracle_kernel(pattern.array, pattern.alphabet.size)
    n = (1 << len(pattern)) - 1
    return sh[:n], tr[:n]


def oracle_shift(pattern: Pattern, s: int, i: int, x: int) -> tuple[int, int]:
    """Smallest admissible shift for one entry, scanning candidates in plain Python."""
    w = pattern.symbols
    m = len(w)
    if s >> i & 1:
        raise ValueError("position already checked")
    kk = 1 if popcount(s) == m - 1 else 0
    while True:
        ok = (kk > i or w[i - kk] == x) and all(w[j - kk] == w[j] for j in set_of(s) if j >= kk)
        if ok:
            return kk, (s | 1 << i) >> kk
        kk += 1


def nsets_masks(m: int, n: int) -> np.ndarray:
    """States ``{0..p} | X`` with ``X`` beyond ``p+1`` and ``|X| <= n``, sorted by mask."""
    out = []
    for p in range(-1, m - 1):
        prefix = (1 << (p + 1)) - 1
        free = range(p + 2, m)
        for r in range(min(n, m) + 1):
            for xs in combinations(free, r):
                out.append(prefix | mask_of(xs))
    return np.array(sorted(out), dtype=np.int64)


def n_sets_sublattice(lattice: Lattice, n: int) -> Lattice:
    """Restrict a lattice to the states whose rest has at most ``n`` positions."""
    if n < 1:
        raise ValueError("n must be >= 1")
    keep = np.array([popcount(prefix_rest(int(s))[1]) <= n for s in lattice.masks], dtype=bool)
    rows = np.flatnonzero(keep)
    masks = lattice.masks[rows]
    lookup = {int(s): r for r, s in enumerate(masks)}
    target = lattice.target[rows].astype(np.int64)
    trans = np.array([lookup.get(int(t), -1) for t in target.ravel()], dtype=np.int64).reshape(target.shape)
    trans[target < 0] = -1
    return Lattice(lattice.pattern, masks, lattice.shift[rows], trans, target, False)


def build_nsets_sublattice(pattern: Pattern, n: int) -> Lattice:
    """The n-sets sublattice computed directly, without the full lattice."""
    if n < 1:
        raise ValueError("n must be >= 1")
    masks = nsets_masks(len(pattern), n)
    sh, target, trans = subset_kernel(pattern.array, pattern.alphabet.size, masks)
    return Lattice(pattern, masks, sh, trans, target, False)


def to_dot(lattice: Lattice) -> str:
    """Graphviz rendering: one node per state, one edge labelled ``i,x|shift`` per entry."""
    symbols = lattice.pattern.alphabet.symbols
    lines = [f'digraph "lattice_{lattice.pattern}" {{', "  rankdir=LR;"]
    for r, s in enumerate(lattice.masks):
        lines.append(f'  n{int(s)} [label="{set_label(int(s))}"];')
    for r, s in enumerate(lattice.masks):
        for i in range(lattice.m):
            for x in range(lattice.k):
                d = int(lattice.shift[r, i, x])
                if d < 0 or lattice.trans[r, i, x] < 0:
                    continue
                t = int(lattice.target[r, i, x])
                lines.append(f'  n{int(s)} -> n{t} [label="{i},{symbols[x]}|{d}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
