"""Alphabets, patterns, iid models and w-matching machines."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

SINK = 0


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of single-character symbols; symbol order fixes indices."""

    symbols: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        symbols = tuple(self.symbols)
        if not symbols:
            raise ValueError("alphabet must contain at least one symbol")
        if len(set(symbols)) != len(symbols):
            raise ValueError(f"duplicate symbols in alphabet {symbols!r}")
        if len(symbols) > 255:
            raise ValueError("alphabets are limited to 255 symbols")
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(symbols)})

    @classmethod
    def from_string(cls, s: str) -> "Alphabet":
        return cls(tuple(s))

    @property
    def size(self) -> int:
        return len(self.symbols)

    def __len__(self):
        return len(self.symbols)

    def __contains__(self, symbol):
        return symbol in self._index

    def index(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise ValueError(f"symbol {symbol!r} not in alphabet {''.join(self.symbols)!r}") from None

    def encode(self, text: str | bytes) -> np.ndarray:
        """Map a string (or latin-1 bytes) onto symbol indices as ``uint8``."""
        if isinstance(text, (bytes, bytearray)):
            text = text.decode("latin-1")
        lut = np.full(256, 255, dtype=np.uint8)
        for i, s in enumerate(self.symbols):
            if len(s) == 1 and ord(s) < 256:
                lut[ord(s)] = i
        try:
            raw = np.frombuffer(text.encode("latin-1"), dtype=np.uint8)
        except UnicodeEncodeError:
            raise ValueError("text contains symbols outside the alphabet") from None
        out = lut[raw]
        if (out == 255).any():
            bad = sorted({c for c in text if c not in self._index})
            raise ValueError(f"text contains symbols outside the alphabet: {bad!r}")
        return out

    def decode(self, indices: Iterable[int]) -> str:
        return "".join(self.symbols[int(i)] for i in indices)


@dataclass(frozen=True)
class Pattern:
    alphabet: Alphabet
    symbols: tuple[int, ...]

    def __post_init__(self):
        symbols = tuple(int(x) for x in self.symbols)
        if not symbols:
            raise ValueError("patterns must have length >= 1")
        k = self.alphabet.size
        for x in symbols:
            if not 0 <= x < k:
                raise ValueError(f"pattern symbol index {x} outside alphabet of size {k}")
        object.__setattr__(self, "symbols", symbols)

    @classmethod
    def from_string(cls, s: str, alphabet: Alphabet | str) -> "Pattern":
        if isinstance(alphabet, str):
            alphabet = Alphabet.from_string(alphabet)
        return cls(alphabet, tuple(alphabet.index(c) for c in s))

    def __len__(self):
        return len(self.symbols)

    def __getitem__(self, i):
        return self.symbols[i]

    def __str__(self):
        return self.alphabet.decode(self.symbols)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.symbols, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class IidModel:
    """Symbol distribution of an iid (Bernoulli) text model."""

    probs: np.ndarray
    name: str = ""

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=np.float64)
        if p.ndim != 1 or p.size == 0:
            raise ValueError("probabilities must be a non-empty vector")
        if (p < 0).any() or (p > 1).any():
            raise ValueError("probabilities must lie in [0, 1]")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
        object.__setattr__(self, "probs", _frozen(p, np.float64))

    @classmethod
    def uniform(cls, k: int | Alphabet) -> "IidModel":
        if isinstance(k, Alphabet):
            k = k.size
        return cls(np.full(k, 1.0 / k), name="uniform")

    @classmethod
    def from_freqs(cls, alphabet: Alphabet, freqs: dict[str, float], name: str = "") -> "IidModel":
        p = np.zeros(alphabet.size)
        for s, v in freqs.items():
            p[alphabet.index(s)] = v
        return cls(p, name=name)

    @property
    def size(self) -> int:
        return self.probs.size

    def __str__(self):
        return self.name or ",".join(f"{v:g}" for v in self.probs)


@dataclass(frozen=True, eq=False)
class MatchingMachine:
    """A w-matching machine with dense integer states.

    State 0 is always the sink.  ``next_pos[q]`` is the relative text position
    read at state ``q``; ``trans`` and ``shift`` are indexed ``[state, symbol]``.
    Expanded machines additionally carry ``base`` (state of the original
    machine) and ``memory`` (sorted ``(position, symbol)`` pairs).
    """

    next_pos: np.ndarray
    trans: np.ndarray
    shift: np.ndarray
    prematch: np.ndarray
    init: int
    name: str = ""
    labels: Optional[tuple[str, ...]] = None
    base: Optional[np.ndarray] = None
    memory: Optional[tuple[tuple[tuple[int, int], ...], ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "next_pos", _frozen(self.next_pos, np.int64))
        object.__setattr__(self, "trans", _frozen(self.trans, np.int64))
        object.__setattr__(self, "shift", _frozen(self.shift, np.int64))
        object.__setattr__(self, "prematch", _frozen(self.prematch, np.bool_))
        object.__setattr__(self, "init", int(self.init))
        if self.base is not None:
            object.__setattr__(self, "base", _frozen(self.base, np.int64))
        n = self.next_pos.shape[0]
        if self.trans.ndim != 2 or self.trans.shape != self.shift.shape or self.trans.shape[0] != n:
            raise ValueError("trans/shift must be (n_states, n_symbols) arrays matching next_pos")
        if self.prematch.shape != (n,):
            raise ValueError("prematch must have one flag per state")

    sink = SINK

    @property
    def n_states(self) -> int:
        return self.next_pos.shape[0]

    @property
    def n_symbols(self) -> int:
        return self.trans.shape[1]

    @property
    def order(self) -> int:
        return int(self.next_pos.max())

    def label(self, q: int) -> str:
        if self.labels is not None:
            return self.labels[q]
        return "sink" if q == SINK else str(q)

    def reachable(self) -> list[int]:
        """States reachable from ``init`` in breadth-first order."""
        seen = {self.init}
        order = [self.init]
        queue = deque(order)
        while queue:
            q = queue.popleft()
            for r in self.trans[q]:
                r = int(r)
                if r not in seen:
                    seen.add(r)
                    order.append(r)
                    queue.append(r)
        return order


def machine_from_table(
    rows: Sequence[tuple[int, bool, Sequence[int], Sequence[int]]],
    init: int = 1,
    **kwargs,
) -> MatchingMachine:
    """Build a machine from ``(next, prematch, trans, shift)`` rows, row 0 being the sink."""
    next_pos = [r[0] for r in rows]
    prematch = [r[1] for r in rows]
    trans = [list(r[2]) for r in rows]
    shift = [list(r[3]) for r in rows]
    return MatchingMachine(next_pos, trans, shift, prematch, init, **kwargs)


def validate_structure(machine: MatchingMachine, pattern: Pattern) -> list[str]:
    """List every broken machine invariant; an empty list means well formed."""
    out = []
    n, k = machine.trans.shape
    m = len(pattern)
    if k != pattern.alphabet.size:
        out.append(f"machine has {k} symbol columns, alphabet has {pattern.alphabet.size}")
    if not 0 <= machine.init < n:
        out.append(f"init state {machine.init} out of range")
    if (machine.trans[SINK] != SINK).any():
        out.append("state 0: sink transition leaves the sink")
    if (machine.shift[SINK] != 0).any():
        out.append("state 0: sink shift nonzero")
    for q in range(n):
        if machine.next_pos[q] < 0:
            out.append(f"state {q}: negative next position")
        if machine.prematch[q] and machine.next_pos[q] >= m:
            out.append(f"state {q}: prematch next out of range")
        if ((machine.trans[q] < 0) | (machine.trans[q] >= n)).any():
            out.append(f"state {q}: transition to unknown state")
        if q != SINK and (machine.shift[q] < 0).any():
            out.append(f"state {q}: negative shift")
    if machine.order < m - 1:
        out.append(f"order {machine.order} below |w|-1 = {m - 1}")
    return out


def is_compact(machine: MatchingMachine) -> tuple[bool, Optional[int]]:
    """Return ``(True, None)`` or ``(False, q)`` for the first state ``q`` that
    has a single non-sink outcome or behaves identically on every symbol.

    A prematch state is never flagged for symbol-independent behaviour: its
    access decides whether an occurrence is reported.
    """
    for q in range(machine.n_states):
        if q == SINK:
            continue
        t = machine.trans[q]
        s = machine.shift[q]
        if int((t != SINK).sum()) == 1:
            return False, q
        if not machine.prematch[q] and (t == t[0]).all() and (s == s[0]).all():
            return False, q
    return True, None


def isomorphic(a: MatchingMachine, b: MatchingMachine) -> bool:
    """Whether the reachable parts of two machines agree up to state renaming."""
    if a.n_symbols != b.n_symbols:
        return False
    mapping = {a.init: b.init, SINK: SINK}
    inverse = {b.init: a.init, SINK: SINK}
    if a.init == SINK or b.init == SINK:
        return a.init == b.init
    queue = deque([a.init])
    while queue:
        qa = queue.popleft()
        qb = mapping[qa]
        if qa == SINK:
            continue
        if a.next_pos[qa] != b.next_pos[qb] or a.prematch[qa] != b.prematch[qb]:
            return False
        if (a.shift[qa] != b.shift[qb]).any():
            return False
        for x in range(a.n_symbols):
            ra, rb = int(a.trans[qa, x]), int(b.trans[qb, x])
            if ra in mapping:
                if mapping[ra] != rb:
                    return False
            else:
                if rb in inverse:
                    return False
                mapping[ra] = rb
                inverse[rb] = ra
                queue.append(ra)
    return True
