"""Instrumented generic search loop, ground-truth search and Monte-Carlo speed."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._jit import njit
from .core import IidModel, MatchingMachine, Pattern
from .errors import DegenerateModel, NonTermination

# Status codes returned by the run kernel.
_OK, _GUARD = 0, 1


@njit
def run_kernel(next_pos, trans, shift, prematch, init, w, text, occ, trace, max_iter):
    """Run the generic loop; returns ``(n_occ, accesses, iterations, status)``.

    Reads past the end of ``text`` return a sentinel that never matches and has
    no transition: the access is counted and the run stops.  ``occ`` and
    ``trace`` are filled up to their capacity; counts are exact regardless.
    """
    n = text.shape[0]
    m = w.shape[0]
    q = init
    p = 0
    acc = 0
    n_occ = 0
    while p <= n - m:
        if acc >= max_iter:
            return n_occ, acc, acc, 1
        a = next_pos[q]
        pos = p + a
        if acc < trace.shape[0]:
            trace[acc] = pos
        acc += 1
        if pos >= n:
            break
        c = text[pos]
        if prematch[q] and c == w[a]:
            if n_occ < occ.shape[0]:
                occ[n_occ] = p
            n_occ += 1
        p += shift[q, c]
        q = trans[q, c]
    return n_occ, acc, acc, 0


@njit
def oracle_kernel(w, text, occ):
    n = text.shape[0]
    m = w.shape[0]
    n_occ = 0
    for p in range(n - m + 1):
        ok = True
        for j in range(m):
            if text[p + j] != w[j]:
                ok = False
                break
        if ok:
            occ[n_occ] = p
            n_occ += 1
    return n_occ


@njit
def validity_kernel(next_pos, trans, shift, prematch, init, w, texts):
    """Count texts (rows) on which the machine's report differs from a window scan."""
    n_texts, n = texts.shape
    occ = np.empty(n + 1, dtype=np.int64)
    ref = np.empty(n + 1, dtype=np.int64)
    trace = np.empty(0, dtype=np.int64)
    max_iter = (n + 1) * next_pos.shape[0]
    bad = 0
    for r in range(n_texts):
        text = texts[r]
        k, _, _, status = run_kernel(next_pos, trans, shift, prematch, init, w, text, occ, trace, max_iter)
        k_ref = oracle_kernel(w, text, ref)
        same = status == 0 and k == k_ref
        if same:
            for j in range(k):
                if occ[j] != ref[j]:
                    same = False
                    break
        if not same:
            bad += 1
    return bad


@dataclass(frozen=True)
class RunReport:
    occurrences: list[int]
    accesses: int
    iterations: int
    text_length: int
    trace: list[int] | None = None

    @property
    def average_speed(self) -> float:
        if self.accesses == 0:
            return math.nan
        return self.text_length / self.accesses


def _as_text(text) -> np.ndarray:
    t = np.asarray(text)
    if t.dtype != np.uint8:
        t = t.astype(np.uint8)
    return np.ascontiguousarray(t)


def _machine_args(machine: MatchingMachine):
    return machine.next_pos, machine.trans, machine.shift, machine.prematch, machine.init


def generic_run(machine: MatchingMachine, pattern: Pattern, text, record_trace: bool = False) -> RunReport:
    """Run the generic search loop of ``machine`` over ``text`` (symbol indices)."""
    t = _as_text(text)
    n = t.shape[0]
    w = pattern.array
    occ = np.empty(max(n - len(w) + 1, 0), dtype=np.int64)
    # every iteration reads one position; valid machines read each window
    # position at most a bounded number of times, so grow the trace on overflow.
    cap = 4 * (n + 1) if record_trace else 0
    max_iter = (n + 1) * machine.n_states
    while True:
        trace = np.empty(cap, dtype=np.int64)
        n_occ, acc, it, status = run_kernel(*_machine_args(machine), w, t, occ, trace, max_iter)
        if not record_trace or acc <= cap or status:
            break
        cap = acc
    if status == _GUARD:
        raise NonTermination(f"machine {machine.name or ''} exceeded {max_iter} iterations on a text of length {n}")
    return RunReport(
        occurrences=occ[:n_occ].tolist(),
        accesses=int(acc),
        iterations=int(it),
        text_length=n,
        trace=trace[:acc].tolist() if record_trace else None,
    )


def oracle_search(pattern: Pattern | np.ndarray, text) -> list[int]:
    """All positions ``p`` with ``text[p:p+|w|] == w``, by direct comparison."""
    w = pattern.array if isinstance(pattern, Pattern) else np.asarray(pattern, dtype=np.int64)
    t = _as_text(text)
    occ = np.empty(max(t.shape[0] - w.shape[0] + 1, 0), dtype=np.int64)
    k = oracle_kernel(w, t, occ)
    return occ[:k].tolist()


def count_invalid(machine: MatchingMachine, pattern: Pattern, texts: np.ndarray) -> int:
    """Number of rows of ``texts`` where the machine and the window scan disagree."""
    return int(validity_kernel(*_machine_args(machine), pattern.array, _as_text(texts)))


def random_text(rng: np.random.Generator, model: IidModel, length: int) -> np.ndarray:
    k = model.size
    # inverse-CDF sampling; stable across numpy versions for a given bit stream
    cdf = np.cumsum(model.probs)
    cdf[-1] = 1.0
    u = rng.random(length)
    return np.minimum(np.searchsorted(cdf, u, side="right"), k - 1).astype(np.uint8)


@dataclass(frozen=True)
class SpeedEstimate:
    mean: float
    stderr: float
    samples: tuple[float, ...]


def monte_carlo_speed(
    machine: MatchingMachine,
    pattern: Pattern,
    model: IidModel,
    text_length: int,
    replicates: int,
    seed: int,
) -> SpeedEstimate:
    """Mean and standard error of the average speed over iid random texts.

    Replicate ``r`` draws its text from ``numpy.random.PCG64`` seeded by the
    ``r``-th child of ``SeedSequence(seed)``.
    """
    if text_length < len(pattern):
        raise ValueError("text_length must be at least the pattern length")
    if replicates < 1:
        raise ValueError("replicates must be >= 1")
    children = np.random.SeedSequence(seed).spawn(replicates)
    w = pattern.array
    occ = np.empty(0, dtype=np.int64)
    trace = np.empty(0, dtype=np.int64)
    max_iter = (text_length + 1) * machine.n_states
    speeds = []
    for child in children:
        rng = np.random.Generator(np.random.PCG64(child))
        text = random_text(rng, model, text_length)
        _, acc, _, status = run_kernel(*_machine_args(machine), w, text, occ, trace, max_iter)
        if status == _GUARD:
            raise DegenerateModel(
                f"machine {machine.name or ''} does not terminate under model {model}"
            )
        speeds.append(text_length / acc)
    arr = np.array(speeds)
    stderr = float(arr.std(ddof=1) / math.sqrt(replicates)) if replicates > 1 else math.nan
    return SpeedEstimate(float(arr.mean()), stderr, tuple(speeds))
