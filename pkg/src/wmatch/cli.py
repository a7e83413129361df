"""Command-line interface.

Exit codes: 0 success, 1 other library error, 2 usage or parse error,
3 expansion too large, 4 pattern too long for exhaustive search,
5 alphabet mismatch between pattern and text, 6 lattice capacity exceeded.
"""
from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import corpus, serialize
from .classics import ALGORITHMS, MACHINE_ALGORITHMS, build_machine, instrumented_search
from .core import Alphabet, IidModel, MatchingMachine, Pattern
from .errors import (
    AlphabetMismatch,
    CapacityGuard,
    ExplosionGuard,
    PatternTooLong,
    UnsupportedAlgorithm,
    WMatchError,
)
from .executor import generic_run, monte_carlo_speed
from .expansion import DEFAULT_STATE_CAP
from .lattice import DEFAULT_CAPACITY, build_lattice, build_nsets_sublattice, to_dot
from .markov import asymptotic_speed
from .strategy import fastest_strategy, k_heuristic

EXIT_CODES = {ExplosionGuard: 3, PatternTooLong: 4, AlphabetMismatch: 5, CapacityGuard: 6}
THREADS_ENV = "WMATCH_THREADS"


class UsageError(Exception):
    pass


def _warn(msg: str) -> None:
    print(f"wmatch: warning: {msg}", file=sys.stderr)


def parse_freq(spec: str) -> dict[str, float]:
    out: dict[str, float] = {}
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        sym, eq, val = item.partition("=")
        if not eq or len(sym) != 1:
            raise UsageError(f"bad frequency entry {item!r}; expected symbol=probability")
        if sym in out:
            raise UsageError(f"symbol {sym!r} listed twice")
        try:
            out[sym] = float(val)
        except ValueError:
            raise UsageError(f"bad probability {val!r} for symbol {sym!r}") from None
    if not out:
        raise UsageError("empty frequency list")
    return out


def resolve_alphabet(args, pattern: Optional[str] = None) -> Alphabet:
    if getattr(args, "alphabet", None):
        return Alphabet.from_string(args.alphabet)
    symbols: list[str] = []
    if getattr(args, "freq", None):
        symbols.extend(parse_freq(args.freq))
    for c in sorted(set(pattern or "")):
        if c not in symbols:
            symbols.append(c)
    if not symbols:
        raise UsageError("cannot infer the alphabet; pass --alphabet")
    return Alphabet(tuple(symbols))


def resolve_model(args, alphabet: Alphabet) -> IidModel:
    if getattr(args, "freq", None):
        freqs = parse_freq(args.freq)
        missing = [s for s in alphabet.symbols if s not in freqs]
        if missing:
            _warn(f"symbols {''.join(missing)!r} not listed in --freq get probability 0")
        try:
            return IidModel.from_freqs(alphabet, freqs, name=args.freq)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return IidModel.uniform(alphabet)


def parse_pattern(text: str, alphabet: Alphabet) -> Pattern:
    try:
        return Pattern.from_string(text, alphabet)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load_machine(args) -> tuple[MatchingMachine, Pattern, Alphabet]:
    if getattr(args, "machine_file", None):
        machine, pattern = serialize.load(args.machine_file)
        if args.pattern and args.pattern != str(pattern):
            raise UsageError(f"--pattern {args.pattern!r} differs from the machine file's {str(pattern)!r}")
        return machine, pattern, pattern.alphabet
    if not args.pattern or not args.algo:
        raise UsageError("give --machine-file, or --algo with --pattern")
    alphabet = resolve_alphabet(args, args.pattern)
    pattern = parse_pattern(args.pattern, alphabet)
    return build_machine(args.algo, pattern), pattern, alphabet


def _model_name(args) -> str:
    return args.freq if getattr(args, "freq", None) else "uniform"


def _tsv(rows: Sequence[Sequence[object]]) -> str:
    return "".join("\t".join(str(c) for c in row) + "\n" for row in rows)


# -- commands -----------------------------------------------------------------------


def cmd_speed(args) -> int:
    machine, pattern, alphabet = _load_machine(args)
    model = resolve_model(args, alphabet)
    report = asymptotic_speed(machine, pattern, model, state_cap=args.state_cap)
    name = machine.name or Path(args.machine_file).stem
    sys.stdout.write(
        _tsv(
            [
                ("machine", "pattern", "model", "speed", "base_states", "expanded_states"),
                (name, pattern, _model_name(args), f"{report.speed:.6f}", report.base_states, report.expanded_states),
            ]
        )
    )
    return 0


def cmd_build(args) -> int:
    machine, pattern, _ = _load_machine(args)
    out = args.out or f"{args.algo}_{pattern}.mm"
    serialize.save(out, machine, pattern)
    sys.stdout.write(_tsv([("machine", "pattern", "states", "file"), (machine.name, pattern, machine.n_states, out)]))
    return 0


def _write_strategy(args, cmd: str, strategy, report, pattern) -> int:
    out = args.out or f"{cmd}_{pattern}.mm"
    serialize.save(out, strategy.machine, pattern)
    sys.stdout.write(
        _tsv(
            [
                ("strategy", "pattern", "model", "speed", "states", "file"),
                (strategy.machine.name, pattern, _model_name(args), f"{report.speed:.6f}", strategy.machine.n_states - 1, out),
            ]
        )
    )
    return 0


def cmd_fastest(args) -> int:
    alphabet = resolve_alphabet(args, args.pattern)
    pattern = parse_pattern(args.pattern, alphabet)
    model = resolve_model(args, alphabet)
    strategy, report = fastest_strategy(pattern, model, force=args.force, bound=args.bound)
    return _write_strategy(args, "fastest", strategy, report, pattern)


def cmd_heuristic(args) -> int:
    alphabet = resolve_alphabet(args, args.pattern)
    pattern = parse_pattern(args.pattern, alphabet)
    model = resolve_model(args, alphabet)
    strategy, report = k_heuristic(pattern, model, args.order, horizon=args.horizon)
    return _write_strategy(args, "heuristic", strategy, report, pattern)


def cmd_lattice(args) -> int:
    alphabet = resolve_alphabet(args, args.pattern)
    pattern = parse_pattern(args.pattern, alphabet)
    if args.nsets:
        lattice = build_nsets_sublattice(pattern, args.nsets)
        edges = int((lattice.trans >= 0).sum())
        complete = lattice.is_complete()
        print(f"{lattice.n_states} states, {edges} edges, {args.nsets}-sets sublattice, {'complete' if complete else 'incomplete'}")
    else:
        lattice = build_lattice(pattern, capacity=args.capacity)
        print(f"{lattice.n_states} states, {lattice.n_edges} edges")
    if args.dot:
        Path(args.dot).write_text(to_dot(lattice), encoding="ascii")
    return 0


def cmd_simulate(args) -> int:
    machine, pattern, alphabet = _load_machine(args)
    model = resolve_model(args, alphabet)
    if args.length < len(pattern):
        raise UsageError(f"--length {args.length} is shorter than the pattern; the speed is undefined")
    est = monte_carlo_speed(machine, pattern, model, args.length, args.reps, args.seed)
    stderr = "nan" if np.isnan(est.stderr) else f"{est.stderr:.6f}"
    sys.stdout.write(
        _tsv(
            [
                ("machine", "pattern", "model", "length", "reps", "seed", "mean_speed", "stderr"),
                (machine.name, pattern, _model_name(args), args.length, args.reps, args.seed, f"{est.mean:.6f}", stderr),
            ]
        )
    )
    return 0


def cmd_corpus(args) -> int:
    Path(args.out).write_bytes(corpus.generate(args.kind, args.length, args.seed))
    return 0


def _bench_patterns(args, raw: bytes) -> list[str]:
    if args.patterns:
        lines = Path(args.patterns).read_text(encoding="latin-1").splitlines()
        return [ln for ln in lines if ln]
    count, length = args.random
    if length < 1 or length > len(raw):
        raise UsageError("random pattern length must be between 1 and the text length")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(args.seed)))
    starts = rng.integers(0, len(raw) - length + 1, size=count)
    return [raw[s : s + length].decode("latin-1") for s in starts]


def _methods(args) -> list[tuple[str, object]]:
    out = []
    for a in args.algos.split(",") if args.algos else []:
        if a not in ALGORITHMS:
            raise UsageError(f"unknown algorithm {a!r}")
        out.append((a, a))
    for k in args.heuristics or []:
        out.append((f"heuristic-{k}", ("heuristic", k)))
    if args.fastest:
        out.append(("fastest", ("fastest", None)))
    if not out:
        raise UsageError("no methods selected")
    return out


def _bench_one(method, pattern: Pattern, text: np.ndarray, model: IidModel, force: bool) -> int:
    if isinstance(method, str):
        return instrumented_search(method, pattern, text).accesses
    kind, k = method
    if kind == "heuristic":
        strategy, _ = k_heuristic(pattern, model, k)
    else:
        strategy, _ = fastest_strategy(pattern, model, force=force)
    return generic_run(strategy.machine, pattern, text).accesses


def cmd_bench(args) -> int:
    raw = Path(args.text).read_bytes()
    text_str = raw.decode("latin-1")
    alphabet = Alphabet.from_string(args.alphabet) if args.alphabet else Alphabet(tuple(sorted(set(text_str))))
    try:
        text = alphabet.encode(raw)
    except ValueError as exc:
        raise AlphabetMismatch(str(exc)) from None
    if args.freq:
        model = resolve_model(args, alphabet)
        model_name = args.freq
    elif args.uniform:
        model, model_name = IidModel.uniform(alphabet), "uniform"
    else:
        counts = np.bincount(text, minlength=alphabet.size).astype(np.float64)
        model, model_name = IidModel(counts / counts.sum()), "text"
    patterns = []
    for p in _bench_patterns(args, raw):
        bad = sorted({c for c in p if c not in alphabet})
        if bad:
            raise AlphabetMismatch(f"pattern {p!r} uses symbols {''.join(bad)!r} absent from the text alphabet")
        patterns.append(Pattern.from_string(p, alphabet))
    methods = _methods(args)
    jobs = [(pi, mi) for pi in range(len(patterns)) for mi in range(len(methods))]
    threads = args.threads or int(os.environ.get(THREADS_ENV, "1") or 1)

    def run(job):
        pi, mi = job
        return _bench_one(methods[mi][1], patterns[pi], text, model, args.force)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            accesses = list(pool.map(run, jobs))
    else:
        accesses = [run(j) for j in jobs]
    n = len(text)
    rows = [("pattern", "method", "model", "text", "length", "accesses", "average_speed")]
    name = Path(args.text).name
    for (pi, mi), acc in zip(jobs, accesses):
        if not acc:
            speed = "nan"
        elif args.exact:
            speed = str(Fraction(n, acc))
        else:
            speed = f"{n / acc:.6f}"
        rows.append((patterns[pi], methods[mi][0], model_name, name, n, acc, speed))
    sys.stdout.write(_tsv(rows))
    return 0


# -- parser --------------------------------------------------------------------------


def _add_model(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--freq", help="iid model as a=0.1,b=0.9 (unlisted symbols get 0)")
    g.add_argument("--uniform", action="store_true", help="uniform iid model (default)")
    p.add_argument("--alphabet", help="alphabet symbols in index order, e.g. ab")


def _add_machine(p: argparse.ArgumentParser) -> None:
    p.add_argument("--pattern")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--algo", choices=MACHINE_ALGORITHMS)
    src.add_argument("--machine-file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wmatch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("speed", help="asymptotic speed of a machine under an iid model")
    _add_machine(p)
    _add_model(p)
    p.add_argument("--state-cap", type=int, default=DEFAULT_STATE_CAP)
    p.set_defaults(func=cmd_speed)

    p = sub.add_parser("build", help="write the machine of a classic algorithm")
    _add_machine(p)
    p.add_argument("--alphabet")
    p.add_argument("--out")
    p.set_defaults(func=cmd_build, freq=None)

    p = sub.add_parser("fastest", help="exhaustive search for the fastest strategy")
    p.add_argument("--pattern", required=True)
    _add_model(p)
    p.add_argument("--force", action="store_true", help="allow patterns longer than 4")
    p.add_argument("--bound", action="store_true", help="prune the search with shift-expectation bounds")
    p.add_argument("--out")
    p.set_defaults(func=cmd_fastest)

    p = sub.add_parser("heuristic", help="K-Heuristic strategy")
    p.add_argument("--pattern", required=True)
    _add_model(p)
    p.add_argument("--order", type=int, default=3, help="K (default 3)")
    p.add_argument("--horizon", type=int, default=None, help="expectation horizon (default K+1)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_heuristic)

    p = sub.add_parser("lattice", help="position lattice statistics and DOT export")
    p.add_argument("--pattern", required=True)
    p.add_argument("--alphabet")
    p.add_argument("--dot")
    p.add_argument("--nsets", type=int, default=0)
    p.add_argument("--capacity", type=int, default=DEFAULT_CAPACITY)
    p.set_defaults(func=cmd_lattice, freq=None)

    p = sub.add_parser("simulate", help="Monte-Carlo estimate of the speed on random texts")
    _add_machine(p)
    _add_model(p)
    p.add_argument("--length", type=int, default=10**6)
    p.add_argument("--reps", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bench", help="average speeds on a text file")
    p.add_argument("--text", required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--patterns", help="file with one pattern per line")
    src.add_argument("--random", nargs=2, type=int, metavar=("N", "LEN"), help="N random substrings of length LEN")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--algos", default="horspool,tvsbs,fjs,ebom,hash3")
    p.add_argument("--heuristics", type=int, nargs="*", default=[])
    p.add_argument("--fastest", action="store_true")
    p.add_argument("--exact", action="store_true", help="print speeds as reduced fractions length/accesses")
    p.add_argument("--force", action="store_true")
    _add_model(p)
    p.add_argument("--threads", type=int, default=0, help=f"worker threads (default ${THREADS_ENV} or 1)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("corpus", help="write a synthetic benchmark text")
    p.add_argument("--kind", choices=("binary", "english"), required=True)
    p.add_argument("--length", type=int, default=1 << 20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"wmatch: error: {exc}", file=sys.stderr)
        return 2
    except (UnsupportedAlgorithm, OSError) as exc:
        print(f"wmatch: error: {exc}", file=sys.stderr)
        return 2
    except WMatchError as exc:
        print(f"wmatch: error: {exc}", file=sys.stderr)
        for cls, code in EXIT_CODES.items():
            if isinstance(exc, cls):
                return code
        return 1


if __name__ == "__main__":
    sys.exit(main())
