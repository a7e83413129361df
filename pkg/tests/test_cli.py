import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from wmatch import corpus
from wmatch.cli import main


@pytest.fixture
def run(capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)

    def _run(*argv):
        code = main([str(a) for a in argv])
        out, err = capsys.readouterr()
        return code, out, err

    return _run


def _rows(out):
    return [line.split("\t") for line in out.strip().splitlines()]


def test_speed_naive(run):
    code, out, _ = run("speed", "--pattern", "ab", "--algo", "naive", "--uniform")
    assert code == 0
    header, row = _rows(out)
    assert header[:4] == ["machine", "pattern", "model", "speed"]
    assert row[:4] == ["naive", "ab", "uniform", "0.666667"]


def test_speed_automaton_skewed(run):
    code, out, _ = run("speed", "--pattern", "abb", "--algo", "sma", "--freq", "a=0.1,b=0.9")
    assert code == 0 and _rows(out)[1][3] == "1.000000"


def test_fastest_file_dominates_and_is_reproducible(run, tmp_path):
    code, out, _ = run("fastest", "--pattern", "abb", "--uniform")
    assert code == 0
    first = (tmp_path / "fastest_abb.mm").read_bytes()
    run("fastest", "--pattern", "abb", "--uniform")
    assert (tmp_path / "fastest_abb.mm").read_bytes() == first
    _, out, _ = run("speed", "--pattern", "abb", "--machine-file", "fastest_abb.mm", "--uniform")
    best = float(_rows(out)[1][3])
    for algo in ("naive", "morris_pratt", "kmp", "horspool", "sma"):
        _, out, _ = run("speed", "--pattern", "abb", "--algo", algo, "--uniform")
        assert best >= float(_rows(out)[1][3])


def test_heuristic_long_pattern(run, tmp_path):
    w = "abcdabddcabcbadcabdcbadcbadbca"
    code, out, _ = run("heuristic", "--pattern", w, "--order", "3", "--uniform")
    assert code == 0 and (tmp_path / f"heuristic_{w}.mm").exists()
    assert float(_rows(out)[1][3]) > 1.0


def test_heuristic_order3_usually_beats_order1(run):
    rng = np.random.default_rng(10)
    wins = 0
    total = 20
    for _ in range(total):
        w = "".join(rng.choice(list("ab"), 10))
        speeds = []
        for k in (1, 3):
            _, out, _ = run("heuristic", "--pattern", w, "--order", k, "--uniform", "--alphabet", "ab", "--out", "h.mm")
            speeds.append(float(_rows(out)[1][3]))
        wins += speeds[1] >= speeds[0]
    assert wins >= 0.9 * total


def test_lattice_counts_and_dot(run, tmp_path):
    code, out, _ = run("lattice", "--pattern", "abb", "--dot", "out.dot")
    assert code == 0 and out.strip() == "7 states, 24 edges"
    dot = (tmp_path / "out.dot").read_text()
    assert dot.count("[label=\"{") == 7
    _, out, _ = run("lattice", "--pattern", "abb", "--nsets", "1")
    assert out.strip().endswith("complete") and "incomplete" not in out


def test_simulate_agrees_with_speed(run):
    _, out, _ = run("speed", "--pattern", "aab", "--algo", "horspool", "--freq", "a=0.3,b=0.7")
    exact = float(_rows(out)[1][3])
    args = ("simulate", "--pattern", "aab", "--algo", "horspool", "--freq", "a=0.3,b=0.7", "--length", 200000, "--reps", 6, "--seed", 4)
    _, out, _ = run(*args)
    row = _rows(out)[1]
    mean, stderr = float(row[6]), float(row[7])
    assert abs(mean - exact) <= max(0.01, 4 * stderr)
    assert run(*args)[1] == out


def test_simulate_short_length(run):
    code, _, err = run("simulate", "--pattern", "abb", "--algo", "naive", "--length", 2)
    assert code == 2 and "undefined" in err


def _texts(tmp_path):
    (tmp_path / "t.txt").write_bytes(corpus.generate("binary", 20000, seed=3))


def test_bench_random_patterns_reproducible(run, tmp_path):
    _texts(tmp_path)
    args = ("bench", "--text", "t.txt", "--random", 5, 4, "--seed", 7, "--heuristics", 2)
    code, out, _ = run(*args)
    assert code == 0
    rows = _rows(out)
    assert rows[0] == ["pattern", "method", "model", "text", "length", "accesses", "average_speed"]
    assert len(rows) == 1 + 5 * 6
    for r in rows[1:]:
        assert r[6] == f"{20000 / int(r[5]):.6f}"
    assert run(*args)[1] == out
    assert run(*args, "--threads", 3)[1] == out


def test_bench_exact_fractions(run, tmp_path):
    _texts(tmp_path)
    (tmp_path / "p.txt").write_text("abab\n")
    code, out, _ = run("bench", "--text", "t.txt", "--patterns", "p.txt", "--algos", "naive", "--exact")
    assert code == 0
    row = _rows(out)[1]
    assert Fraction(row[6]) == Fraction(20000, int(row[5]))


def test_bench_alphabet_mismatch(run, tmp_path):
    _texts(tmp_path)
    (tmp_path / "p.txt").write_text("abz\n")
    code, _, err = run("bench", "--text", "t.txt", "--patterns", "p.txt")
    assert code == 5 and "z" in err


def test_exit_codes(run):
    assert run("speed", "--pattern", "ab", "--algo", "naive", "--freq", "a=0.5,b=x")[0] == 2
    assert run("speed", "--pattern", "ab", "--algo", "naive", "--freq", "a=0.5,b=0.6")[0] == 2
    assert run("speed", "--pattern", "abbab", "--algo", "naive", "--uniform", "--state-cap", 3)[0] == 3
    assert run("fastest", "--pattern", "abbab", "--uniform")[0] == 4
    assert run("lattice", "--pattern", "ab" * 13)[0] == 6


def test_unlisted_symbols_warn(run):
    code, out, err = run("speed", "--pattern", "ab", "--algo", "naive", "--freq", "a=1", "--alphabet", "abc")
    assert code == 0 and "probability 0" in err


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "wmatch", "lattice", "--pattern", "abab"],
        capture_output=True,
        text=True,
        cwd=tmp_path,
        check=True,
    )
    assert proc.stdout.strip() == "15 states, 64 edges"
