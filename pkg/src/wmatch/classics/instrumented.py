"""Textbook searchers with every text read counted.

Every kernel returns ``(n_occ, accesses)``, writes occurrence positions into
``occ`` and the accessed positions into ``trace`` (both up to capacity).  A
read at or past the end of the text is counted and ends the search, which is
what a sentinel that never matches and jumps past the text would do.
"""
from __future__ import annotations

import numpy as np

from .._jit import njit


@njit
def _touch(trace, acc, pos):
    if acc < trace.shape[0]:
        trace[acc] = pos
    return acc + 1


@njit
def _emit(occ, k, p):
    if k < occ.shape[0]:
        occ[k] = p
    return k + 1


@njit
def naive_kernel(w, t, occ, trace):
    n, m = t.shape[0], w.shape[0]
    acc = 0
    k = 0
    for p in range(n - m + 1):
        i = 0
        while i < m:
            acc = _touch(trace, acc, p + i)
            if t[p + i] != w[i]:
                break
            i += 1
        if i == m:
            k = _emit(occ, k, p)
    return k, acc


@njit
def failure_kernel(w, t, nxt, occ, trace):
    """Morris-Pratt / KMP depending on ``nxt``; stops once no window is left."""
    n, m = t.shape[0], w.shape[0]
    acc = 0
    k = 0
    i = 0
    j = 0
    while j - i <= n - m:
        acc = _touch(trace, acc, j)
        if t[j] == w[i]:
            i += 1
            j += 1
            if i == m:
                k = _emit(occ, k, j - m)
                i = nxt[m]
        else:
            i = nxt[i]
            if i < 0:
                i = 0
                j += 1
    return k, acc


@njit
def horspool_kernel(w, t, bm, occ, trace):
    n, m = t.shape[0], w.shape[0]
    acc = 0
    k = 0
    j = 0
    while j <= n - m:
        acc = _touch(trace, acc, j + m - 1)
        c = t[j + m - 1]
        if c == w[m - 1]:
            i = 0
            while i < m - 1:
                acc = _touch(trace, acc, j + i)
                if t[j + i] != w[i]:
                    break
                i += 1
            if i == m - 1:
                k = _emit(occ, k, j)
        j += bm[c]
    return k, acc


@njit
def quicksearch_kernel(w, t, qs, occ, trace):
    n, m = t.shape[0], w.shape[0]
    acc = 0
    k = 0
    j = 0
    while j <= n - m:
        i = 0
        while i < m:
            acc = _touch(trace, acc, j + i)
            if t[j + i] != w[i]:
                break
            i += 1
        if i == m:
            k = _emit(occ, k, j)
        acc = _touch(trace, acc, j + m)
        if j + m >= n:
            break
        j += qs[t[j + m]]
    return k, acc


@njit
def tvsbs_kernel(w, t, br, occ, trace):
    n, m = t.shape[0], w.shape[0]
    acc = 0
    k = 0
    j = 0
    while j <= n - m:
        acc = _touch(trace, acc, j + m - 1)
        c = t[j + m - 1]
        if c == w[m - 1]:
            if m == 1:
                k = _emit(occ, k, j)
            else:
                acc = _touch(trace, acc, j)
                if t[j] == w[0]:
                    i = m - 2
                    while i >= 1:
                        acc = _touch(trace, acc, j + i)
                        if t[j + i] != w[i]:
                            break
                        i -= 1
                    if i <= 0:
                        k = _emit(occ, k, j)
        acc = _touch(trace, acc, j + m)
        if j + m >= n:
            break
        j += br[c, t[j + m]]
    return k, acc


@njit
def fjs_kernel(w, t, delta, betap, occ, trace):
    n, m = t.shape[0], w.shape[0]
    acc = 0
    k = 0
    mp = m - 1
    i = 0
    j = 0
    ip = mp
    while ip < n:
        if j <= 0:
            while True:
                acc = _touch(trace, acc, ip)
                if t[ip] == w[mp]:
                    break
                acc = _touch(trace, acc, ip + 1)
                if ip + 1 >= n:
                    return k, acc
                ip += delta[t[ip + 1]]
                if ip >= n:
                    return k, acc
            j = 0
            i = ip - mp
            while j < mp:
                acc = _touch(trace, acc, i)
                if t[i] != w[j]:
                    break
                i += 1
                j += 1
            if j == mp:
                k = _emit(occ, k, i - mp)
                i += 1
                j += 1
            if j <= 0:
                i += 1
            else:
                j = betap[j]
        else:
            while j < m:
                acc = _touch(trace, acc, i)
                if t[i] != w[j]:
                    break
                i += 1
                j += 1
            if j == m:
                k = _emit(occ, k, i - m)
            j = betap[j]
        ip = i + mp - j
    return k, acc


@njit
def sma_kernel(w, t, dfa, border, occ, trace):
    n, m = t.shape[0], w.shape[0]
    acc = 0
    k = 0
    q = 0
    j = 0
    while j - q <= n - m:
        acc = _touch(trace, acc, j)
        q = dfa[q, t[j]]
        j += 1
        if q == m:
            k = _emit(occ, k, j - m)
            q = border
    return k, acc


@njit
def ebom_kernel(w, t, oracle, first2, occ, trace):
    """Backward oracle matching with a two-symbol entry table."""
    n, m = t.shape[0], w.shape[0]
    if m < 2:
        return naive_kernel(w, t, occ, trace)
    acc = 0
    k = 0
    j = 0
    while j <= n - m:
        acc = _touch(trace, acc, j + m - 1)
        a = t[j + m - 1]
        acc = _touch(trace, acc, j + m - 2)
        p = first2[a, t[j + m - 2]]
        if p < 0:
            j += m - 1
            continue
        i = m - 3
        while i >= 0:
            acc = _touch(trace, acc, j + i)
            q = oracle[p, t[j + i]]
            if q < 0:
                break
            p = q
            i -= 1
        if i < 0:
            k = _emit(occ, k, j)
            j += 1
        else:
            j += i + 1
    return k, acc


@njit
def hash3_kernel(w, t, shift, sh1, occ, trace):
    """Hashing of 3-grams with an 8-bit rolling hash; window end ``j``."""
    n, m = t.shape[0], w.shape[0]
    if m < 3:
        return naive_kernel(w, t, occ, trace)
    acc = 0
    k = 0
    j = m - 1
    while j < n:
        acc = _touch(trace, acc, j - 2)
        acc = _touch(trace, acc, j - 1)
        acc = _touch(trace, acc, j)
        h = ((((t[j - 2] << 1) + t[j - 1]) & 0xFF) << 1) + t[j] & 0xFF
        sh = shift[h]
        if sh > 0:
            j += sh
            continue
        i = 0
        while i < m:
            acc = _touch(trace, acc, j - m + 1 + i)
            if t[j - m + 1 + i] != w[i]:
                break
            i += 1
        if i == m:
            k = _emit(occ, k, j - m + 1)
        j += sh1
    return k, acc
