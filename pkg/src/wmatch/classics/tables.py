"""Shift and failure tables of the classic algorithms (symbols are alphabet indices)."""
from __future__ import annotations

from typing import Sequence

import numpy as np


def mp_next(w: Sequence[int]) -> list[int]:
    """Morris-Pratt failure table of length ``m + 1`` (``-1`` at 0)."""
    m = len(w)
    nxt = [0] * (m + 1)
    nxt[0] = -1
    i, j = 0, -1
    while i < m:
        while j > -1 and w[i] != w[j]:
            j = nxt[j]
        i += 1
        j += 1
        nxt[i] = j
    return nxt


def kmp_next(w: Sequence[int]) -> list[int]:
    """Knuth-Morris-Pratt table of length ``m + 1``; entries may be ``-1`` past 0."""
    m = len(w)
    nxt = [0] * (m + 1)
    nxt[0] = -1
    i, j = 0, -1
    while i < m:
        while j > -1 and w[i] != w[j]:
            j = nxt[j]
        i += 1
        j += 1
        if i < m and w[i] == w[j]:
            nxt[i] = nxt[j]
        else:
            nxt[i] = j
    return nxt


def horspool_table(w: Sequence[int], k: int) -> list[int]:
    m = len(w)
    bm = [m] * k
    for i in range(m - 1):
        bm[w[i]] = m - 1 - i
    return bm


def sunday_table(w: Sequence[int], k: int) -> list[int]:
    """Quick-search / FJS table indexed by the symbol just right of the window."""
    m = len(w)
    qs = [m + 1] * k
    for i in range(m):
        qs[w[i]] = m - i
    return qs


def two_char_table(w: Sequence[int], k: int) -> list[list[int]]:
    """Smallest shift aligning ``a`` at window offset ``m-1`` and ``b`` at offset ``m``."""
    m = len(w)
    out = [[m + 1] * k for _ in range(k)]
    for a in range(k):
        for b in range(k):
            for d in range(1, m + 1):
                if (m - 1 - d < 0 or w[m - 1 - d] == a) and w[m - d] == b:
                    out[a][b] = d
                    break
    return out


def automaton(w: Sequence[int], k: int) -> tuple[list[list[int]], int]:
    """String-matching automaton ``dfa[q][x]`` for ``q`` in ``0..m`` and the border state."""
    m = len(w)
    dfa = [[0] * k for _ in range(m + 1)]
    dfa[0][w[0]] = 1
    x = 0
    for q in range(1, m + 1):
        dfa[q] = list(dfa[x])
        if q < m:
            dfa[q][w[q]] = q + 1
            x = dfa[x][w[q]]
    return dfa, x


def factor_oracle(word: Sequence[int], k: int) -> np.ndarray:
    """Transitions of the factor oracle of ``word`` (``-1`` = undefined)."""
    m = len(word)
    trans = np.full((m + 1, k), -1, dtype=np.int64)
    supply = [-1] * (m + 1)
    for i in range(1, m + 1):
        c = word[i - 1]
        trans[i - 1, c] = i
        j = supply[i - 1]
        while j > -1 and trans[j, c] < 0:
            trans[j, c] = i
            j = supply[j]
        supply[i] = 0 if j == -1 else int(trans[j, c])
    return trans


def hash3_table(w: Sequence[int]) -> tuple[np.ndarray, int]:
    """8-bit rolling-hash shift table over 3-grams and the shift after a verification."""
    m = len(w)

    def h3(a, b, c):
        return ((((a << 1) + b) & 0xFF) << 1) + c & 0xFF

    shift = np.full(256, m - 2, dtype=np.int64)
    for i in range(2, m - 1):
        shift[h3(w[i - 2], w[i - 1], w[i])] = m - 1 - i
    last = h3(w[m - 3], w[m - 2], w[m - 1])
    sh1 = int(shift[last]) or 1
    shift[last] = 0
    return shift, sh1
