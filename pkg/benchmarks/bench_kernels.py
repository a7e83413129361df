"""Time the hot kernels with numba and with the plain numpy fallback.

    python benchmarks/bench_kernels.py [--length N] [--repeat R]

Each path runs in its own interpreter (the fallback with WMATCH_DISABLE_NUMBA=1)
after a warm-up call, so compilation time is excluded.
"""
import argparse
import json
import os
import subprocess
import sys
import time


def workloads(length: int):
    import numpy as np

    from wmatch import corpus
    from wmatch.classics import build_machine, instrumented_search
    from wmatch.core import Alphabet, IidModel, Pattern
    from wmatch.executor import count_invalid, generic_run
    from wmatch.lattice import build_lattice
    from wmatch.strategy import k_heuristic

    english = corpus.ENGLISH.encode(corpus.generate("english", length, seed=1))
    model = corpus.english_model()
    p = Pattern.from_string("tion", corpus.ENGLISH)
    horspool = build_machine("horspool", p)
    heur = k_heuristic(p, model, 3)[0].machine
    dna = Alphabet(tuple("acgt"))
    long_p = Pattern.from_string("acgtacggtcaagtcatgca", dna)
    lat_p = Pattern.from_string("abaababbab", "ab")
    texts = np.random.default_rng(0).integers(0, 4, size=(max(length // 200, 1), 200), dtype=np.uint8)
    val_p = Pattern.from_string("acgta", dna)
    val_m = build_machine("fjs", val_p)
    return {
        "run horspool machine": lambda: generic_run(horspool, p, english),
        "run 3-heuristic machine": lambda: generic_run(heur, p, english),
        "instrumented horspool": lambda: instrumented_search("horspool", p, english),
        "instrumented ebom": lambda: instrumented_search("ebom", p, english),
        "validity batch": lambda: count_invalid(val_m, val_p, texts),
        "lattice |w|=10": lambda: build_lattice(lat_p),
        "3-heuristic |w|=20": lambda: k_heuristic(long_p, IidModel.uniform(4), 3),
    }


def worker(length: int, repeat: int) -> None:
    from wmatch import _jit

    jobs = workloads(length)
    out = {"numba": _jit.ENABLE_NUMBA, "times": {}}
    for name, job in jobs.items():
        job()
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            job()
            best = min(best, time.perf_counter() - t0)
        out["times"][name] = best
    print(json.dumps(out))


def run_path(disable: bool, length: int, repeat: int) -> dict:
    env = dict(os.environ, WMATCH_DISABLE_NUMBA="1" if disable else "0")
    cmd = [sys.executable, __file__, "--worker", "--length", str(length), "--repeat", str(repeat)]
    proc = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--length", type=int, default=1 << 20, help="text length in symbols")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.worker:
        worker(args.length, args.repeat)
        return
    fast = run_path(False, args.length, args.repeat)
    slow = run_path(True, args.length, args.repeat)
    assert fast["numba"] and not slow["numba"]
    print(f"text length {args.length}, best of {args.repeat}")
    print(f"{'workload':<26}{'numba s':>10}{'numpy s':>10}{'speedup':>10}")
    for name, t in fast["times"].items():
        s = slow["times"][name]
        print(f"{name:<26}{t:>10.4f}{s:>10.3f}{s / t:>9.0f}x")


if __name__ == "__main__":
    main()
