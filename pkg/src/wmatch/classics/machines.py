"""Matching machines of the classic algorithms, synthesised from step functions.

Each builder describes the algorithm's window-local memory as hashable states
and a step ``step(state, x) -> (next_state, shift, report)``.  The synthesis
explores the states reachable from the initial one.
"""
from __future__ import annotations

from collections import deque
from typing import Callable, Hashable

from ..core import SINK, MatchingMachine, Pattern
from . import tables

Step = Callable[[Hashable, int], tuple[Hashable, int, bool]]


def synthesize(
    pattern: Pattern,
    init: Hashable,
    alpha: Callable[[Hashable], int],
    prematch: Callable[[Hashable], bool],
    step: Step,
    name: str,
) -> MatchingMachine:
    w = pattern.symbols
    k = pattern.alphabet.size
    ids = {init: 1}
    order = [init]
    next_pos, trans, shift, pre = [0], [[SINK] * k], [[0] * k], [False]
    queue = deque([init])
    while queue:
        state = queue.popleft()
        a = alpha(state)
        is_pre = prematch(state)
        row_t, row_s = [], []
        for x in range(k):
            nxt, d, report = step(state, x)
            # a report must coincide with the final check of a prematch state
            assert report == (is_pre and x == w[a]), (name, state, x)
            if nxt not in ids:
                ids[nxt] = len(order) + 1
                order.append(nxt)
                queue.append(nxt)
            row_t.append(ids[nxt])
            row_s.append(d)
        next_pos.append(a)
        trans.append(row_t)
        shift.append(row_s)
        pre.append(is_pre)
    labels = ("sink",) + tuple(str(s) for s in order)
    return MatchingMachine(next_pos, trans, shift, pre, init=1, name=name, labels=labels)


def naive(pattern: Pattern) -> MatchingMachine:
    w, m = pattern.symbols, len(pattern)

    def step(i, x):
        if x == w[i]:
            if i == m - 1:
                return 0, 1, True
            return i + 1, 0, False
        return 0, 1, False

    return synthesize(pattern, 0, lambda i: i, lambda i: i == m - 1, step, "naive")


def _failure_machine(pattern: Pattern, nxt: list[int], name: str) -> MatchingMachine:
    """Machine of the window-guarded MP/KMP loop; state = matched prefix length."""
    w, m = pattern.symbols, len(pattern)

    def step(i, x):
        if x == w[i]:
            if i + 1 == m:
                j = nxt[m]
                return j, m - j, True
            return i + 1, 0, False
        j = nxt[i]
        if j < 0:
            return 0, i + 1, False
        return j, i - j, False

    return synthesize(pattern, 0, lambda i: i, lambda i: i == m - 1, step, name)


def morris_pratt(pattern: Pattern) -> MatchingMachine:
    return _failure_machine(pattern, tables.mp_next(pattern.symbols), "morris_pratt")


def kmp(pattern: Pattern) -> MatchingMachine:
    return _failure_machine(pattern, tables.kmp_next(pattern.symbols), "kmp")


def horspool(pattern: Pattern) -> MatchingMachine:
    """Last symbol first, then positions ``0..m-2`` left to right."""
    w, m = pattern.symbols, len(pattern)
    bm = tables.horspool_table(w, pattern.alphabet.size)
    after = bm[w[m - 1]]
    last = "last"

    def alpha(state):
        return m - 1 if state == last else state[1]

    def prematch(state):
        return state == (last if m == 1 else ("cmp", m - 2))

    def step(state, x):
        if state == last:
            if x != w[m - 1]:
                return last, bm[x], False
            if m == 1:
                return last, bm[x], True
            return ("cmp", 0), 0, False
        i = state[1]
        if x != w[i]:
            return last, after, False
        if i == m - 2:
            return last, after, True
        return ("cmp", i + 1), 0, False

    return synthesize(pattern, last, alpha, prematch, step, "horspool")


def quicksearch(pattern: Pattern) -> MatchingMachine:
    """Left-to-right window comparison, then the symbol right of the window."""
    w, m = pattern.symbols, len(pattern)
    qs = tables.sunday_table(w, pattern.alphabet.size)
    jump = "qs"

    def alpha(state):
        return m if state == jump else state[1]

    def step(state, x):
        if state == jump:
            return ("cmp", 0), qs[x], False
        i = state[1]
        if x != w[i]:
            return jump, 0, False
        if i == m - 1:
            return jump, 0, True
        return ("cmp", i + 1), 0, False

    return synthesize(pattern, ("cmp", 0), alpha, lambda s: s == ("cmp", m - 1), step, "quicksearch")


def tvsbs(pattern: Pattern) -> MatchingMachine:
    """Last symbol, first symbol, then ``m-2`` down to 1; shift on the pair at offsets ``m-1``, ``m``."""
    w, m = pattern.symbols, len(pattern)
    br = tables.two_char_table(w, pattern.alphabet.size)
    done = ("pair", w[m - 1])

    def alpha(state):
        if state == "last":
            return m - 1
        if state == "first":
            return 0
        if state[0] == "pair":
            return m
        return state[1]

    def prematch(state):
        if m == 1:
            return state == "last"
        if m == 2:
            return state == "first"
        return state == ("mid", 1)

    def step(state, x):
        if state == "last":
            if x != w[m - 1]:
                return ("pair", x), 0, False
            if m == 1:
                return done, 0, True
            return "first", 0, False
        if state == "first":
            if x != w[0]:
                return done, 0, False
            if m == 2:
                return done, 0, True
            return ("mid", m - 2), 0, False
        if state[0] == "pair":
            return "last", br[state[1]][x], False
        i = state[1]
        if x != w[i]:
            return done, 0, False
        if i == 1:
            return done, 0, True
        return ("mid", i - 1), 0, False

    return synthesize(pattern, "last", alpha, prematch, step, "tvsbs")


def fjs(pattern: Pattern) -> MatchingMachine:
    """Sunday-style skip loop on the last symbol, then a KMP scan of the window."""
    w, m = pattern.symbols, len(pattern)
    delta = tables.sunday_table(w, pattern.alphabet.size)
    betap = tables.kmp_next(w)
    mp = m - 1

    def alpha(state):
        if state == "sun":
            return m - 1
        if state == "sunx":
            return m
        return state[1]

    def prematch(state):
        if m == 1:
            return state == "sun"
        return state in (("scan", mp - 1), ("kmp", m - 1))

    def resume(j, d, report):
        return (("kmp", j) if j > 0 else "sun"), d, report

    def step(state, x):
        if state == "sun":
            if x != w[mp]:
                return "sunx", 0, False
            if m == 1:
                return resume(betap[m], m - betap[m], True)
            return ("scan", 0), 0, False
        if state == "sunx":
            return "sun", delta[x], False
        kind, j = state
        if x == w[j]:
            if j + 1 == (mp if kind == "scan" else m):
                return resume(betap[m], m - betap[m], True)
            return (kind, j + 1), 0, False
        if kind == "scan" and j == 0:
            return "sun", 1, False
        return resume(betap[j], j - betap[j], False)

    return synthesize(pattern, "sun", alpha, prematch, step, "fjs")


def sma(pattern: Pattern) -> MatchingMachine:
    """String-matching automaton: each text position is read exactly once."""
    w, m = pattern.symbols, len(pattern)
    dfa, b = tables.automaton(w, pattern.alphabet.size)

    def step(q, x):
        nxt = dfa[q][x]
        if nxt == m:
            return b, q + 1 - b, True
        return nxt, q + 1 - nxt, False

    return synthesize(pattern, 0, lambda q: q, lambda q: q == m - 1, step, "sma")
