"""Strategies: machines whose states are position sets.

A strategy is fixed by a map ``gamma`` choosing, in each position set, the
next relative position to check.  Shifts and transitions come from the
position lattice.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Union

import numpy as np

from ._jit import njit
from .core import SINK, IidModel, MatchingMachine, Pattern
from .errors import IncompleteSublattice, InvalidMap, PatternTooLong
from .lattice import Lattice, build_lattice, build_nsets_sublattice, set_label, set_of
from .markov import SpeedReport, speed_from_memories

FASTEST_MAX_LENGTH = 4
TIE_TOL = 1e-12

PositionMap = Union[Mapping[int, int], Callable[[int], int]]


@dataclass(frozen=True, eq=False)
class Strategy:
    """A strategy machine plus the position set (bitmask) of each state.

    ``sets[0]`` is -1 for the sink, which no strategy ever reaches.
    """

    machine: MatchingMachine
    pattern: Pattern
    sets: tuple[int, ...]

    @property
    def gamma(self) -> dict[int, int]:
        return {s: int(self.machine.next_pos[q]) for q, s in enumerate(self.sets) if q != SINK}

    def state_of(self, mask: int) -> int:
        return self.sets.index(mask)

    def memories(self) -> list[tuple[tuple[int, int], ...]]:
        w = self.pattern.symbols
        return [()] + [tuple((j, w[j]) for j in set_of(s)) for s in self.sets[1:]]


def _choose(gamma: PositionMap, s: int) -> int:
    if callable(gamma):
        return int(gamma(s))
    try:
        return int(gamma[s])
    except KeyError:
        raise InvalidMap(f"no position chosen for state {set_label(s)}") from None


def strategy_from_map(lattice: Lattice, gamma: PositionMap, name: str = "strategy") -> Strategy:
    """Breadth-first closure from the empty set following ``gamma``."""
    m, k = lattice.m, lattice.k
    masks = [-1, 0]
    ids = {0: 1}
    next_pos, trans, shift = [0], [[SINK] * k], [[0] * k]
    queue = deque([0])
    while queue:
        s = queue.popleft()
        i = _choose(gamma, s)
        if not 0 <= i < m or s >> i & 1:
            raise InvalidMap(f"position {i} is not unchecked in state {set_label(s)}")
        row_t, row_s = [], []
        for x in range(k):
            d, t = lattice.entry(s, i, x)
            if t not in lattice:
                raise InvalidMap(f"state {set_label(s)} leaves the lattice through position {i}")
            if t not in ids:
                ids[t] = len(masks)
                masks.append(t)
                queue.append(t)
            row_t.append(ids[t])
            row_s.append(d)
        next_pos.append(i)
        trans.append(row_t)
        shift.append(row_s)
    prematch = [False] + [bin(s).count("1") == m - 1 for s in masks[1:]]
    labels = ("sink",) + tuple(set_label(s) for s in masks[1:])
    machine = MatchingMachine(next_pos, trans, shift, prematch, init=1, name=name, labels=labels)
    return Strategy(machine, lattice.pattern, tuple(masks))


def strategy_speed(strategy: Strategy, model: IidModel) -> SpeedReport:
    """Asymptotic speed using ``mem(s) = {(j, w_j) : j in s}`` (no expansion needed)."""
    return speed_from_memories(strategy.machine, model, strategy.memories())


def leftmost(lattice: Lattice) -> Callable[[int], int]:
    return lambda s: next(i for i in range(lattice.m) if not s >> i & 1)


def rightmost(lattice: Lattice) -> Callable[[int], int]:
    return lambda s: next(i for i in reversed(range(lattice.m)) if not s >> i & 1)


# -- brute force -----------------------------------------------------------------


def _enumerate_maps(lattice: Lattice, prune: Optional[Callable[[dict[int, int]], bool]] = None):
    """Yield every map restricted to the states it reaches, depth-first.

    The next state to assign is the oldest reachable unassigned one and
    positions are tried in increasing order, so the enumeration order is
    canonical.  Two yielded maps always differ on a reachable state, hence
    no two yield the same strategy.  ``prune(assign)`` returning true skips
    every completion of the current partial map.
    """
    m, k = lattice.m, lattice.k
    assign: dict[int, int] = {}

    def targets(s: int, i: int) -> list[int]:
        r = lattice.index(s)
        return [int(lattice.target[r, i, x]) for x in range(k)]

    def walk(frontier: tuple[int, ...]):
        if not frontier:
            yield dict(assign)
            return
        s, rest = frontier[0], frontier[1:]
        for i in range(m):
            if s >> i & 1:
                continue
            known = set(assign) | set(frontier)
            new = []
            for t in targets(s, i):
                if t not in known:
                    known.add(t)
                    new.append(t)
            assign[s] = i
            if prune is None or not prune(assign):
                yield from walk(rest + tuple(new))
            del assign[s]

    yield from walk((0,))


def _speed_bound(lattice: Lattice, model: IidModel, horizon: int) -> Callable[[dict[int, int]], float]:
    """Upper bound on the speed of any completion of a partial map.

    Each strategy step reads a fresh symbol, so ``horizon`` consecutive steps
    shift at most ``ES^horizon`` in expectation, with assigned states forced
    to their chosen position.
    """
    base = lattice.admissible()
    rows = lattice.index

    def bound(assign: dict[int, int]) -> float:
        admissible = base.copy()
        for s, i in assign.items():
            r = rows(s)
            admissible[r] = False
            admissible[r, i] = True
        es = _es_kernel(lattice.shift, lattice.trans, admissible, model.probs, horizon)
        return float(es[horizon].max()) / horizon

    return bound


def fastest_strategy(
    pattern: Pattern,
    model: IidModel,
    force: bool = False,
    lattice: Optional[Lattice] = None,
    bound: bool = False,
) -> tuple[Strategy, SpeedReport]:
    """Strategy of greatest asymptotic speed by exhaustive search over maps.

    Ties keep the first strategy in enumeration order.  With ``bound`` the
    search skips partial maps whose speed bound cannot beat the best found;
    the result is unchanged.
    """
    if len(pattern) > FASTEST_MAX_LENGTH and not force:
        raise PatternTooLong(
            f"exhaustive search is limited to patterns of length {FASTEST_MAX_LENGTH} (got {len(pattern)})"
        )
    if lattice is None:
        lattice = build_lattice(pattern)
    best = None
    prune = None
    if bound:
        upper = _speed_bound(lattice, model, 2 * len(pattern))
        prune = lambda assign: best is not None and upper(assign) <= best[1].speed + TIE_TOL
    for gamma in _enumerate_maps(lattice, prune):
        strategy = strategy_from_map(lattice, gamma, name="fastest")
        report = strategy_speed(strategy, model)
        if best is None or report.speed > best[1].speed + TIE_TOL:
            best = (strategy, report)
    return best


def count_strategies(lattice: Lattice) -> int:
    return sum(1 for _ in _enumerate_maps(lattice))


# -- shift expectations and the K-Heuristic ----------------------------------------


@njit
def _es_kernel(shift, trans, admissible, probs, horizon):
    n, m, k = shift.shape
    es = np.zeros((horizon + 1, n))
    for ell in range(1, horizon + 1):
        for r in range(n):
            best = -1.0
            for i in range(m):
                if not admissible[r, i]:
                    continue
                v = 0.0
                for x in range(k):
                    v += probs[x] * (shift[r, i, x] + es[ell - 1, trans[r, i, x]])
                if v > best:
                    best = v
            es[ell, r] = best
    return es


@njit
def _score_kernel(shift, trans, admissible, probs, es_prev):
    n, m, k = shift.shape
    out = np.full((n, m), -np.inf)
    for r in range(n):
        for i in range(m):
            if not admissible[r, i]:
                continue
            v = 0.0
            for x in range(k):
                v += probs[x] * (shift[r, i, x] + es_prev[trans[r, i, x]])
            out[r, i] = v
    return out


def _check_complete(lattice: Lattice) -> np.ndarray:
    admissible = lattice.admissible()
    empty = np.flatnonzero(~admissible.any(axis=1))
    if empty.size:
        raise IncompleteSublattice(f"no admissible position in state {set_label(int(lattice.masks[empty[0]]))}")
    return admissible


def shift_expectations(lattice: Lattice, model: IidModel, horizon: int) -> np.ndarray:
    """``ES[l, r]`` for ``l = 0..horizon`` and every state row ``r`` of the lattice."""
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    admissible = _check_complete(lattice)
    return _es_kernel(lattice.shift, lattice.trans, admissible, model.probs, horizon)


def heuristic_argmax_tiebreak(scores: Mapping[int, float] | np.ndarray, tol: float = TIE_TOL) -> int:
    """Position of maximal score; scores within ``tol`` of the best count as equal
    and the smallest position among them wins."""
    if isinstance(scores, np.ndarray):
        items = [(i, float(v)) for i, v in enumerate(scores) if np.isfinite(v)]
    else:
        items = sorted((int(i), float(v)) for i, v in scores.items())
    if not items:
        raise ValueError("no candidate positions")
    top = max(v for _, v in items)
    return min(i for i, v in items if v >= top - tol)


def k_heuristic(
    pattern: Pattern,
    model: IidModel,
    K: int,
    horizon: Optional[int] = None,
    lattice: Optional[Lattice] = None,
) -> tuple[Strategy, SpeedReport]:
    """Strategy extracted from the K-sets sublattice by shift-expectation argmax.

    With horizon ``h`` (default ``K + 1``) each state picks the position
    maximising ``sum_x pi(x) * (Sh + ES^{h-1}[T])``.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    h = K + 1 if horizon is None else horizon
    if h < 1:
        raise ValueError("horizon must be >= 1")
    sub = lattice if lattice is not None else build_nsets_sublattice(pattern, K)
    admissible = _check_complete(sub)
    es = _es_kernel(sub.shift, sub.trans, admissible, model.probs, h - 1)
    scores = _score_kernel(sub.shift, sub.trans, admissible, model.probs, es[h - 1])
    choice: dict[int, int] = {}

    def gamma(s: int) -> int:
        if s not in choice:
            choice[s] = heuristic_argmax_tiebreak(scores[sub.index(s)])
        return choice[s]

    strategy = strategy_from_map(sub, gamma, name=f"heuristic-{K}")
    return strategy, strategy_speed(strategy, model)
