"""Machine file format.

A machine file is a JSON document with one state per line::

    {
     "format": "wmatch-machine/1",
     "name": "naive",
     "alphabet": ["a", "b"],
     "pattern": "abb",
     "init": 1,
     "sink": 0,
     "states": [
      {"id": 0, "next": 0, "prematch": false, "trans": [0, 0], "shift": [0, 0]},
      ...
     ]
    }

States may carry ``label`` (strategies name states by position sets such as
``"{0,2}"``), and expanded machines add ``base`` and ``memory``
(``[[position, symbol], ...]``).  ``dumps(loads(s)) == s`` for every document
written by :func:`dumps`.
"""
from __future__ import annotations

import json
from pathlib import Path

from .core import SINK, Alphabet, MatchingMachine, Pattern

FORMAT = "wmatch-machine/1"


def _state_line(machine: MatchingMachine, pattern: Pattern, q: int) -> str:
    doc = {
        "id": q,
        "next": int(machine.next_pos[q]),
        "prematch": bool(machine.prematch[q]),
        "trans": [int(v) for v in machine.trans[q]],
        "shift": [int(v) for v in machine.shift[q]],
    }
    if machine.labels is not None:
        doc["label"] = machine.labels[q]
    if machine.base is not None:
        doc["base"] = int(machine.base[q])
    if machine.memory is not None:
        doc["memory"] = [[j, pattern.alphabet.symbols[y]] for j, y in machine.memory[q]]
    return json.dumps(doc, ensure_ascii=True)


def dumps(machine: MatchingMachine, pattern: Pattern) -> str:
    head = [
        ("format", FORMAT),
        ("name", machine.name),
        ("alphabet", list(pattern.alphabet.symbols)),
        ("pattern", str(pattern)),
        ("init", machine.init),
        ("sink", SINK),
    ]
    lines = ["{"]
    for key, value in head:
        lines.append(f" {json.dumps(key)}: {json.dumps(value, ensure_ascii=True)},")
    lines.append(' "states": [')
    rows = [_state_line(machine, pattern, q) for q in range(machine.n_states)]
    lines.append(",\n".join("  " + r for r in rows))
    lines.append(" ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> tuple[MatchingMachine, Pattern]:
    doc = json.loads(text)
    if doc.get("format", FORMAT) != FORMAT:
        raise ValueError(f"unsupported machine format {doc.get('format')!r}")
    alphabet = Alphabet(tuple(doc["alphabet"]))
    pattern = Pattern.from_string(doc["pattern"], alphabet)
    if doc.get("sink", SINK) != SINK:
        raise ValueError("the sink must be state 0")
    states = sorted(doc["states"], key=lambda s: s["id"])
    if [s["id"] for s in states] != list(range(len(states))):
        raise ValueError("state ids must be dense from 0")
    labels = tuple(s["label"] for s in states) if states and "label" in states[0] else None
    base = [s["base"] for s in states] if states and "base" in states[0] else None
    memory = None
    if states and "memory" in states[0]:
        memory = tuple(tuple((int(j), alphabet.index(y)) for j, y in s["memory"]) for s in states)
    machine = MatchingMachine(
        next_pos=[s["next"] for s in states],
        trans=[s["trans"] for s in states],
        shift=[s["shift"] for s in states],
        prematch=[s["prematch"] for s in states],
        init=doc["init"],
        name=doc.get("name", ""),
        labels=labels,
        base=base,
        memory=memory,
    )
    return machine, pattern


def save(path: str | Path, machine: MatchingMachine, pattern: Pattern) -> None:
    Path(path).write_text(dumps(machine, pattern), encoding="ascii")


def load(path: str | Path) -> tuple[MatchingMachine, Pattern]:
    return loads(Path(path).read_text(encoding="ascii"))
