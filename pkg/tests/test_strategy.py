import itertools

import numpy as np
import pytest

from wmatch import serialize
from wmatch.core import Alphabet, IidModel, Pattern, is_compact, validate_structure
from wmatch.errors import IncompleteSublattice, InvalidMap, PatternTooLong
from wmatch.executor import count_invalid
from wmatch.expansion import is_standard
from wmatch.lattice import Lattice, build_lattice, build_nsets_sublattice, n_sets_sublattice, oracle_shift
from wmatch.markov import asymptotic_speed
from wmatch.strategy import (
    _enumerate_maps,
    _speed_bound,
    count_strategies,
    fastest_strategy,
    heuristic_argmax_tiebreak,
    k_heuristic,
    leftmost,
    rightmost,
    shift_expectations,
    strategy_from_map,
    strategy_speed,
)

from conftest import plant_texts


def _all_full_maps(lattice):
    """Every map from lattice states to unchecked positions (no reachability pruning)."""
    m = lattice.m
    states = [int(s) for s in lattice.masks]
    choices = [[i for i in range(m) if not s >> i & 1] for s in states]
    for combo in itertools.product(*choices):
        yield dict(zip(states, combo))


@pytest.mark.parametrize("w", ["abb", "abab", "a", "bbab"])
@pytest.mark.parametrize("pick", [leftmost, rightmost])
def test_strategies_are_standard_compact_valid(ab, w, pick):
    p = Pattern.from_string(w, ab)
    lat = build_lattice(p)
    s = strategy_from_map(lat, pick(lat))
    assert validate_structure(s.machine, p) == []
    assert is_compact(s.machine) == (True, None)
    assert is_standard(s.machine)
    texts = plant_texts(np.random.default_rng(1), p, 300, 60)
    assert count_invalid(s.machine, p, texts) == 0
    assert strategy_speed(s, IidModel([0.3, 0.7])).speed == pytest.approx(
        asymptotic_speed(s.machine, p, IidModel([0.3, 0.7])).speed, abs=1e-12
    )


def test_leftmost_strategy_of_abb(ab):
    lat = build_lattice(Pattern.from_string("abb", ab))
    s = strategy_from_map(lat, leftmost(lat))
    assert s.machine.labels == ("sink", "{}", "{0}", "{0,1}")
    assert s.machine.prematch.tolist() == [False, False, False, True]


def test_invalid_map(ab):
    lat = build_lattice(Pattern.from_string("abb", ab))
    with pytest.raises(InvalidMap):
        strategy_from_map(lat, lambda s: 0)
    with pytest.raises(InvalidMap):
        strategy_from_map(lat, {0: 1})


def test_enumeration_covers_every_distinct_strategy(ab):
    p = Pattern.from_string("abb", ab)
    lat = build_lattice(p)
    from_full = {serialize.dumps(strategy_from_map(lat, g).machine, p) for g in _all_full_maps(lat)}
    pruned = [serialize.dumps(strategy_from_map(lat, g).machine, p) for g in _enumerate_maps(lat)]
    assert len(pruned) == len(set(pruned)) == count_strategies(lat)
    assert set(pruned) == from_full


@pytest.mark.parametrize("w", ["abb", "aba", "ab", "bbb"])
@pytest.mark.parametrize("probs", [(0.5, 0.5), (0.1, 0.9)])
def test_fastest_equals_unpruned_enumeration(ab, w, probs):
    p = Pattern.from_string(w, ab)
    model = IidModel(probs)
    lat = build_lattice(p)
    best = max(asymptotic_speed(strategy_from_map(lat, g).machine, p, model).speed for g in _all_full_maps(lat))
    _, report = fastest_strategy(p, model)
    assert report.speed == pytest.approx(best, abs=1e-12)


@pytest.mark.parametrize("w", ["abab", "abba", "aaab", "bbbb"])
@pytest.mark.parametrize("probs", [(0.5, 0.5), (0.1, 0.9)])
def test_bounded_search_is_exact(ab, w, probs):
    p = Pattern.from_string(w, ab)
    model = IidModel(probs)
    plain, plain_report = fastest_strategy(p, model)
    pruned, pruned_report = fastest_strategy(p, model, bound=True)
    assert pruned_report.speed == plain_report.speed
    assert pruned.gamma == plain.gamma


@pytest.mark.parametrize("w", ["abb", "abab"])
def test_speed_bound_dominates_every_completion(ab, w):
    p = Pattern.from_string(w, ab)
    model = IidModel([0.3, 0.7])
    lat = build_lattice(p)
    upper = _speed_bound(lat, model, 2 * len(w))
    top = upper({})
    for gamma in itertools.islice(_enumerate_maps(lat), 300):
        speed = strategy_speed(strategy_from_map(lat, gamma), model).speed
        assert speed <= upper(gamma) + 1e-12 <= top + 2e-12
        partial = dict(itertools.islice(gamma.items(), 2))
        assert speed <= upper(partial) + 1e-12


def test_fastest_abb_uniform(ab, uniform2):
    # frozen after agreement of the unpruned enumeration, the expansion pipeline
    # and a Monte-Carlo run (1.4237 +- 0.0005 over 8 x 10^6 symbols)
    strategy, report = fastest_strategy(Pattern.from_string("abb", ab), uniform2)
    assert report.speed == pytest.approx(84 / 59, abs=1e-12)
    assert strategy.machine.n_states - 1 == 6


def test_single_symbol_pattern_has_one_strategy(ab, uniform2):
    strategy, report = fastest_strategy(Pattern.from_string("b", ab), uniform2)
    assert strategy.machine.labels == ("sink", "{}")
    assert report.speed == pytest.approx(1.0)


def test_fastest_length_guard(ab, uniform2):
    with pytest.raises(PatternTooLong):
        fastest_strategy(Pattern.from_string("abbab", ab), uniform2)


def test_fastest_is_deterministic(ab):
    p = Pattern.from_string("abab", ab)
    model = IidModel([0.1, 0.9])
    a, b = fastest_strategy(p, model)[0], fastest_strategy(p, model)[0]
    assert serialize.dumps(a.machine, p) == serialize.dumps(b.machine, p)


def _tree_es(p, model, s, ell):
    """Best expected cumulative shift over ell steps by exhaustive tree search."""
    if ell == 0:
        return 0.0
    m = len(p)
    best = -1.0
    for i in range(m):
        if s >> i & 1:
            continue
        v = 0.0
        for x, px in enumerate(model.probs):
            d, t = oracle_shift(p, s, i, x)
            v += px * (d + _tree_es(p, model, t, ell - 1))
        best = max(best, v)
    return best


@pytest.mark.parametrize("w", ["abb", "abab"])
def test_shift_expectations_match_tree_search(ab, w):
    p = Pattern.from_string(w, ab)
    model = IidModel([0.4, 0.6])
    lat = build_lattice(p)
    es = shift_expectations(lat, model, 4)
    assert np.all(es[0] == 0)
    for s in range(lat.n_states):
        for ell in range(5):
            assert es[ell, s] == pytest.approx(_tree_es(p, model, s, ell), abs=1e-12)
    assert np.all(np.diff(es, axis=0) >= -1e-12)
    assert np.all(es <= np.arange(5)[:, None] * len(p) + 1e-12)


def test_one_step_expectation(ab, uniform2):
    p = Pattern.from_string("abab", ab)
    lat = build_lattice(p)
    es = shift_expectations(lat, uniform2, 1)
    one = np.where(lat.shift >= 0, lat.shift, 0) @ uniform2.probs
    one[lat.shift[:, :, 0] < 0] = -1
    assert np.allclose(es[1], one.max(axis=1))


def test_incomplete_sublattice(ab, uniform2):
    p = Pattern.from_string("abb", ab)
    sub = build_nsets_sublattice(p, 1)
    lonely = Lattice(p, sub.masks[:1], sub.shift[:1], np.full_like(sub.trans[:1], -1), sub.target[:1], False)
    with pytest.raises(IncompleteSublattice):
        shift_expectations(lonely, uniform2, 2)


@pytest.mark.parametrize("scores,expected", [({2: 1.0}, 2), ({1: 0.5, 3: 0.5}, 1), ({3: 1.0, 1: 1.0 - 1e-13, 0: 0.2}, 1)])
def test_tiebreak(scores, expected):
    assert heuristic_argmax_tiebreak(scores) == expected


def test_tiebreak_on_arrays():
    assert heuristic_argmax_tiebreak(np.array([-np.inf, 2.0, 2.0])) == 1


@pytest.mark.parametrize("w", ["abb", "abab", "aaab"])
def test_heuristics_do_not_beat_fastest(ab, w):
    p = Pattern.from_string(w, ab)
    for model in (IidModel.uniform(2), IidModel([0.1, 0.9])):
        _, best = fastest_strategy(p, model)
        for K in (1, 2, 3, 5):
            s, r = k_heuristic(p, model, K)
            assert r.speed <= best.speed + 1e-9
            assert is_standard(s.machine) and is_compact(s.machine)[0]


def test_heuristic_on_restricted_full_lattice_equals_direct(ab, uniform2):
    p = Pattern.from_string("abaabb", ab)
    for K in (1, 2):
        direct, _ = k_heuristic(p, uniform2, K)
        via, _ = k_heuristic(p, uniform2, K, lattice=n_sets_sublattice(build_lattice(p), K))
        assert serialize.dumps(direct.machine, p) == serialize.dumps(via.machine, p)


def test_heuristic_rejects_bad_order(ab, uniform2):
    with pytest.raises(ValueError):
        k_heuristic(Pattern.from_string("ab", ab), uniform2, 0)


def test_long_pattern_heuristic_is_valid():
    alphabet = Alphabet(tuple("acgt"))
    rng = np.random.default_rng(30)
    p = Pattern(alphabet, tuple(int(x) for x in rng.integers(0, 4, 30)))
    s, r = k_heuristic(p, IidModel.uniform(4), 2)
    texts = plant_texts(rng, p, 200, 200)
    assert count_invalid(s.machine, p, texts) == 0
    assert 1.0 < r.speed <= 30
