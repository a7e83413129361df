"""Full-memory expansion, standardness and per-state memories."""
from __future__ import annotations

from collections import deque
from typing import Optional

import numpy as np

from .core import SINK, MatchingMachine
from .errors import ExplosionGuard, NotStandard

Memory = tuple[tuple[int, int], ...]

DEFAULT_STATE_CAP = 10**6


def k_shifted(memory: Memory, k: int) -> Memory:
    """Drop pairs left of ``k`` and move the others ``k`` positions left."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return tuple(memory)
    return tuple((u - k, y) for u, y in memory if u >= k)


def _record(memory: Memory, pos: int, symbol: int) -> Memory:
    return tuple(sorted(memory + ((pos, symbol),)))


def expand(
    machine: MatchingMachine,
    state_cap: int = DEFAULT_STATE_CAP,
    stats: Optional[dict] = None,
) -> MatchingMachine:
    """Full-memory expansion restricted to pairs reachable from ``(init, {})``.

    Every pair whose base state is the sink collapses onto the global sink
    (state 0).  The result carries ``base`` and ``memory`` per state.
    """
    k = machine.n_symbols
    index = {(SINK, ()): SINK}
    pairs: list[tuple[int, Memory]] = [(SINK, ())]
    if machine.init != SINK:
        index[(machine.init, ())] = 1
        pairs.append((machine.init, ()))
    rows_t: list[list[int]] = [[SINK] * k]
    rows_s: list[list[int]] = [[0] * k]
    visits = 0
    queue = deque(range(1, len(pairs)))
    while queue:
        u = queue.popleft()
        visits += 1
        q, memory = pairs[u]
        a = int(machine.next_pos[q])
        known = dict(memory).get(a)
        row_t = []
        for x in range(k):
            sh = int(machine.shift[q, x])
            target = int(machine.trans[q, x])
            if known is not None and known != x:
                row_t.append(SINK)
                continue
            if target == SINK:
                row_t.append(SINK)
                continue
            new_memory = memory if known is not None else _record(memory, a, x)
            key = (target, k_shifted(new_memory, sh))
            v = index.get(key)
            if v is None:
                v = len(pairs)
                if v >= state_cap:
                    bound = (k + 1) ** (machine.order + 1) * machine.n_states
                    raise ExplosionGuard(
                        f"expansion exceeds {state_cap} states (worst-case bound {bound})", bound=bound
                    )
                index[key] = v
                pairs.append(key)
                queue.append(v)
            row_t.append(v)
        rows_t.append(row_t)
        rows_s.append([int(s) for s in machine.shift[q]])
    if stats is not None:
        stats["visits"] = visits
    base = np.array([q for q, _ in pairs], dtype=np.int64)
    labels = None
    if machine.labels is not None:
        labels = tuple(
            "sink" if u == SINK else f"{machine.labels[q]}|{_memory_label(h)}" for u, (q, h) in enumerate(pairs)
        )
    return MatchingMachine(
        next_pos=machine.next_pos[base],
        trans=rows_t,
        shift=rows_s,
        prematch=machine.prematch[base] & (base != SINK),
        init=1 if machine.init != SINK else SINK,
        name=machine.name,
        labels=labels,
        base=base,
        memory=tuple(h for _, h in pairs),
    )


def _memory_label(memory: Memory) -> str:
    return "{" + ",".join(f"{j}:{y}" for j, y in memory) + "}"


def _base_memories(machine: MatchingMachine, expanded: MatchingMachine) -> dict[int, list[Memory]]:
    found: dict[int, list[Memory]] = {}
    for u in range(1, expanded.n_states):
        found.setdefault(int(expanded.base[u]), []).append(expanded.memory[u])
    return found


def is_standard(machine: MatchingMachine, state_cap: int = DEFAULT_STATE_CAP) -> bool:
    """True iff each non-sink state occurs in exactly one expanded pair."""
    expanded = expand(machine, state_cap)
    found = _base_memories(machine, expanded)
    return all(len(found.get(q, ())) == 1 for q in range(1, machine.n_states))


def memories(machine: MatchingMachine, state_cap: int = DEFAULT_STATE_CAP) -> list[Memory]:
    """``mem(q)`` for every state of a standard machine (sink gets ``()``)."""
    if machine.memory is not None and machine.base is not None:
        return list(machine.memory)
    expanded = expand(machine, state_cap)
    found = _base_memories(machine, expanded)
    out: list[Memory] = [()]
    for q in range(1, machine.n_states):
        hs = found.get(q, [])
        if len(hs) != 1:
            raise NotStandard(f"state {q} appears in {len(hs)} expanded pairs")
        out.append(hs[0])
    return out


def mem(machine: MatchingMachine, q: int, state_cap: int = DEFAULT_STATE_CAP) -> Memory:
    return memories(machine, state_cap)[q]
