"""Markov chain of a standard machine under an iid model and its asymptotic speed."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.csgraph as csgraph
import scipy.sparse.linalg as spla

from .core import SINK, IidModel, MatchingMachine, Pattern
from .errors import SingularSystem
from .expansion import DEFAULT_STATE_CAP, Memory, expand, memories

DENSE_LIMIT = 4096
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class MarkovChain:
    init_dist: np.ndarray
    trans_matrix: sp.csr_matrix

    @property
    def n_states(self) -> int:
        return self.init_dist.shape[0]

    def dense(self) -> np.ndarray:
        return self.trans_matrix.toarray()


@dataclass(frozen=True, eq=False)
class SpeedReport:
    beta: np.ndarray
    expected_shift: np.ndarray
    speed: float
    machine: MatchingMachine
    base_states: int
    expanded_states: int


def _checked(memory: Memory, a: int) -> Optional[int]:
    for j, y in memory:
        if j == a:
            return y
    return None


def _rows(machine: MatchingMachine, model: IidModel, mems: Sequence[Memory]):
    n, k = machine.trans.shape
    probs = model.probs
    rows, cols, vals = [], [], []
    eshift = np.zeros(n)
    pre = np.full(n, -1, dtype=np.int64)
    for q in range(1, n):
        y = _checked(mems[q], int(machine.next_pos[q]))
        if y is not None:
            pre[q] = y
    free = np.flatnonzero(pre < 0)
    free = free[free != SINK]
    fixed = np.flatnonzero(pre >= 0)
    # unchecked position: branch on the text symbol
    rows.append(np.repeat(free, k))
    cols.append(machine.trans[free].ravel())
    vals.append(np.tile(probs, free.size))
    eshift[free] = machine.shift[free] @ probs
    # pre-checked position: deterministic move
    rows.append(fixed)
    cols.append(machine.trans[fixed, pre[fixed]])
    vals.append(np.ones(fixed.size))
    eshift[fixed] = machine.shift[fixed, pre[fixed]]
    rows.append(np.array([SINK]))
    cols.append(np.array([SINK]))
    vals.append(np.ones(1))
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    v = np.concatenate(vals)
    matrix = sp.csr_matrix((v, (r, c)), shape=(n, n))
    matrix.sum_duplicates()
    return matrix, eshift


def build_chain(
    machine: MatchingMachine, model: IidModel, mems: Optional[Sequence[Memory]] = None
) -> MarkovChain:
    """Transition matrix of the state sequence of a standard machine.

    ``mems`` (``mem(q)`` per state) is computed by expansion when omitted,
    which raises :class:`NotStandard` for non-standard machines.
    """
    if mems is None:
        mems = memories(machine)
    matrix, _ = _rows(machine, model, mems)
    init = np.zeros(machine.n_states)
    init[machine.init] = 1.0
    return MarkovChain(init, matrix)


def expected_shifts(machine: MatchingMachine, model: IidModel, mems: Optional[Sequence[Memory]] = None) -> np.ndarray:
    if mems is None:
        mems = memories(machine)
    return _rows(machine, model, mems)[1]


def expected_shift(machine: MatchingMachine, model: IidModel, q: int) -> float:
    return float(expected_shifts(machine, model)[q])


def _solve(a, b):
    try:
        if sp.issparse(a):
            x = spla.spsolve(a.tocsc(), b)
        else:
            x = scipy.linalg.solve(a, b, check_finite=True)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError, RuntimeError) as exc:
        raise SingularSystem(str(exc)) from exc
    x = np.asarray(x, dtype=np.float64)
    if not np.isfinite(x).all():
        raise SingularSystem("solver returned non-finite values")
    return x


def _stationary(block: sp.csr_matrix) -> np.ndarray:
    """Stationary law of an irreducible stochastic block."""
    n = block.shape[0]
    if n == 1:
        return np.ones(1)
    if n <= DENSE_LIMIT:
        a = block.toarray().T - np.eye(n)
        a[-1, :] = 1.0
    else:
        a = (block.T - sp.identity(n, format="csr")).tolil()
        a[n - 1, :] = np.ones(n)
        a = a.tocsr()
    b = np.zeros(n)
    b[-1] = 1.0
    s = _solve(a, b)
    residual = np.abs(block.T @ s - s).max()
    if residual > RESIDUAL_TOL or s.min() < -RESIDUAL_TOL:
        raise SingularSystem(f"stationary solve residual {residual:.3g}")
    s = np.clip(s, 0.0, None)
    return s / s.sum()


def limit_frequencies(chain: MarkovChain) -> np.ndarray:
    """Cesaro-limit state occupation frequencies started from ``init_dist``.

    Terminal strongly connected components receive their absorption
    probability times their stationary law; transient states get 0.
    """
    matrix = chain.trans_matrix.tocsr()
    n = chain.n_states
    starts = np.flatnonzero(chain.init_dist > 0)
    positive = matrix.copy()
    positive.data = (positive.data > 0).astype(np.float64)
    positive.eliminate_zeros()
    reach = np.zeros(n, dtype=bool)
    for s0 in starts:
        reach[csgraph.breadth_first_order(positive, int(s0), directed=True, return_predecessors=False)] = True
    idx = np.flatnonzero(reach)
    sub = matrix[idx][:, idx].tocsr()
    sub_pos = positive[idx][:, idx].tocoo()
    n_comp, label = csgraph.connected_components(sub_pos, directed=True, connection="strong")
    leaving = np.zeros(n_comp, dtype=bool)
    cross = label[sub_pos.row] != label[sub_pos.col]
    leaving[label[sub_pos.row[cross]]] = True
    terminal = np.flatnonzero(~leaving)
    in_terminal = np.isin(label, terminal)
    init_sub = chain.init_dist[idx]

    transient = np.flatnonzero(~in_terminal)
    if transient.size:
        q_block = sub[transient][:, transient]
        t = transient.size
        if t <= DENSE_LIMIT:
            a = np.eye(t) - q_block.toarray().T
        else:
            a = (sp.identity(t, format="csr") - q_block.T).tocsr()
        visits = _solve(a, init_sub[transient])
    beta_sub = np.zeros(idx.size)
    for c in terminal:
        members = np.flatnonzero(label == c)
        weight = init_sub[members].sum()
        if transient.size:
            weight += visits @ np.asarray(sub[transient][:, members].sum(axis=1)).ravel()
        if weight <= 0:
            continue
        beta_sub[members] = weight * _stationary(sub[members][:, members].tocsr())
    total = beta_sub.sum()
    if abs(total - 1.0) > 1e-8:
        raise SingularSystem(f"limit frequencies sum to {total}")
    beta = np.zeros(n)
    beta[idx] = beta_sub / total
    return beta


def speed_from_memories(
    machine: MatchingMachine,
    model: IidModel,
    mems: Sequence[Memory],
    base_states: Optional[int] = None,
) -> SpeedReport:
    matrix, eshift = _rows(machine, model, mems)
    init = np.zeros(machine.n_states)
    init[machine.init] = 1.0
    beta = limit_frequencies(MarkovChain(init, matrix))
    return SpeedReport(
        beta=beta,
        expected_shift=eshift,
        speed=float(beta @ eshift),
        machine=machine,
        base_states=base_states if base_states is not None else machine.n_states,
        expanded_states=machine.n_states,
    )


def asymptotic_speed(
    machine: MatchingMachine,
    pattern: Pattern,
    model: IidModel,
    state_cap: int = DEFAULT_STATE_CAP,
) -> SpeedReport:
    """Expand, build the chain, take limit frequencies and sum ``beta_q * E_q``."""
    if model.size != machine.n_symbols:
        raise ValueError("model and machine alphabets differ in size")
    if machine.memory is not None and machine.base is not None:
        expanded = machine
        base_states = int(machine.base.max()) + 1
    else:
        expanded = expand(machine, state_cap)
        base_states = machine.n_states
    return speed_from_memories(expanded, model, expanded.memory, base_states=base_states)
