import pytest

from wmatch import serialize
from wmatch.classics import MACHINE_ALGORITHMS, build_machine
from wmatch.core import Pattern, isomorphic
from wmatch.expansion import expand
from wmatch.lattice import build_lattice
from wmatch.strategy import leftmost, strategy_from_map


@pytest.mark.parametrize("algo", MACHINE_ALGORITHMS)
def test_round_trip_is_byte_exact(ab, algo):
    p = Pattern.from_string("abaab", ab)
    m = build_machine(algo, p)
    text = serialize.dumps(m, p)
    m2, p2 = serialize.loads(text)
    assert serialize.dumps(m2, p2) == text
    assert isomorphic(m, m2) and p2 == p


def test_expanded_machine_keeps_memory(ab):
    p = Pattern.from_string("abb", ab)
    e = expand(build_machine("naive", p))
    text = serialize.dumps(e, p)
    assert '"memory": [[0, "a"]]' in text
    e2, _ = serialize.loads(text)
    assert e2.memory == e.memory and e2.base.tolist() == e.base.tolist()


def test_strategy_states_named_by_position_sets(ab, tmp_path):
    p = Pattern.from_string("abb", ab)
    lat = build_lattice(p)
    s = strategy_from_map(lat, leftmost(lat))
    path = tmp_path / "s.mm"
    serialize.save(path, s.machine, p)
    m, _ = serialize.load(path)
    assert m.labels == ("sink", "{}", "{0}", "{0,1}")


def test_rejects_foreign_format(ab):
    p = Pattern.from_string("a", ab)
    text = serialize.dumps(build_machine("naive", p), p).replace("wmatch-machine/1", "other/9")
    with pytest.raises(ValueError):
        serialize.loads(text)
