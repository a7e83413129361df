"""Baseline algorithms: matching-machine builders and instrumented searchers."""
from __future__ import annotations

from enum import Enum

import numpy as np

from ..core import MatchingMachine, Pattern
from ..errors import UnsupportedAlgorithm
from ..executor import RunReport, _as_text
from . import instrumented as kernels
from . import machines, tables


class AlgorithmId(str, Enum):
    NAIVE = "naive"
    MORRIS_PRATT = "morris_pratt"
    KMP = "kmp"
    QUICKSEARCH = "quicksearch"
    HORSPOOL = "horspool"
    TVSBS = "tvsbs"
    FJS = "fjs"
    EBOM = "ebom"
    HASH3 = "hash3"
    SMA = "sma"

    def __str__(self):
        return self.value


_BUILDERS = {
    AlgorithmId.NAIVE: machines.naive,
    AlgorithmId.MORRIS_PRATT: machines.morris_pratt,
    AlgorithmId.KMP: machines.kmp,
    AlgorithmId.QUICKSEARCH: machines.quicksearch,
    AlgorithmId.HORSPOOL: machines.horspool,
    AlgorithmId.TVSBS: machines.tvsbs,
    AlgorithmId.FJS: machines.fjs,
    AlgorithmId.SMA: machines.sma,
}

ALGORITHMS = tuple(a.value for a in AlgorithmId)
MACHINE_ALGORITHMS = tuple(a.value for a in _BUILDERS)


def _algo(algo: str | AlgorithmId) -> AlgorithmId:
    try:
        return AlgorithmId(algo)
    except ValueError:
        raise UnsupportedAlgorithm(f"unknown algorithm {algo!r}; choose from {', '.join(ALGORITHMS)}") from None


def build_machine(algo: str | AlgorithmId, pattern: Pattern) -> MatchingMachine:
    a = _algo(algo)
    if a not in _BUILDERS:
        raise UnsupportedAlgorithm(f"{a.value} has no matching-machine construction")
    return _BUILDERS[a](pattern)


def _arr(values) -> np.ndarray:
    return np.asarray(values, dtype=np.int64)


def _run(a: AlgorithmId, w: np.ndarray, k: int, t: np.ndarray, occ, trace):
    ws = [int(x) for x in w]
    if a is AlgorithmId.NAIVE:
        return kernels.naive_kernel(w, t, occ, trace)
    if a is AlgorithmId.MORRIS_PRATT:
        return kernels.failure_kernel(w, t, _arr(tables.mp_next(ws)), occ, trace)
    if a is AlgorithmId.KMP:
        return kernels.failure_kernel(w, t, _arr(tables.kmp_next(ws)), occ, trace)
    if a is AlgorithmId.HORSPOOL:
        return kernels.horspool_kernel(w, t, _arr(tables.horspool_table(ws, k)), occ, trace)
    if a is AlgorithmId.QUICKSEARCH:
        return kernels.quicksearch_kernel(w, t, _arr(tables.sunday_table(ws, k)), occ, trace)
    if a is AlgorithmId.TVSBS:
        return kernels.tvsbs_kernel(w, t, _arr(tables.two_char_table(ws, k)), occ, trace)
    if a is AlgorithmId.FJS:
        return kernels.fjs_kernel(w, t, _arr(tables.sunday_table(ws, k)), _arr(tables.kmp_next(ws)), occ, trace)
    if a is AlgorithmId.SMA:
        dfa, border = tables.automaton(ws, k)
        return kernels.sma_kernel(w, t, _arr(dfa), border, occ, trace)
    if a is AlgorithmId.EBOM:
        oracle = tables.factor_oracle(ws[::-1], k)
        first2 = np.full((k, k), -1, dtype=np.int64)
        for x in range(k):
            p = oracle[0, x]
            if p >= 0:
                first2[x] = oracle[p]
        return kernels.ebom_kernel(w, t, oracle, first2, occ, trace)
    shift, sh1 = tables.hash3_table(ws) if len(ws) >= 3 else (np.zeros(256, dtype=np.int64), 1)
    return kernels.hash3_kernel(w, t, shift, sh1, occ, trace)


def instrumented_search(
    algo: str | AlgorithmId, pattern: Pattern, text, record_trace: bool = False
) -> RunReport:
    """Run the textbook algorithm with every text read counted."""
    a = _algo(algo)
    t = _as_text(text)
    n = t.shape[0]
    w = pattern.array
    k = pattern.alphabet.size
    if t.size and int(t.max()) >= k:
        raise ValueError("text contains symbols outside the pattern alphabet")
    occ = np.empty(max(n - len(w) + 1, 0), dtype=np.int64)
    cap = 4 * (n + 1) if record_trace else 0
    while True:
        trace = np.empty(cap, dtype=np.int64)
        n_occ, acc = _run(a, w, k, t, occ, trace)
        if not record_trace or acc <= cap:
            break
        cap = acc
    return RunReport(
        occurrences=occ[:n_occ].tolist(),
        accesses=int(acc),
        iterations=int(acc),
        text_length=n,
        trace=trace[:acc].tolist() if record_trace else None,
    )
