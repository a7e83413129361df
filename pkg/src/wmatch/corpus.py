"""Synthetic benchmark corpora: a skewed two-letter text and an English-like text."""
from __future__ import annotations

import numpy as np

from .core import Alphabet, IidModel
from .executor import random_text

# relative frequencies of a..z in English prose (percent)
ENGLISH_FREQ = (
    8.167, 1.492, 2.782, 4.253, 12.702, 2.228, 2.015, 6.094, 6.966, 0.153, 0.772, 4.025, 2.406,
    6.749, 7.507, 1.929, 0.095, 5.987, 6.327, 9.056, 2.758, 0.978, 2.360, 0.150, 1.974, 0.074,
)
ENGLISH = Alphabet(tuple("abcdefghijklmnopqrstuvwxyz"))
BINARY = Alphabet(("a", "b"))
SKEW = 0.78


def english_model() -> IidModel:
    p = np.array(ENGLISH_FREQ)
    return IidModel(p / p.sum(), name="english")


def skewed_binary_model(p: float = SKEW) -> IidModel:
    return IidModel([p, 1.0 - p], name=f"skew{p:g}")


def generate(kind: str, length: int, seed: int) -> bytes:
    """``kind`` is ``"binary"`` (P(a) = 0.78) or ``"english"`` (iid English letter frequencies)."""
    if kind == "binary":
        alphabet, model = BINARY, skewed_binary_model()
    elif kind == "english":
        alphabet, model = ENGLISH, english_model()
    else:
        raise ValueError(f"unknown corpus kind {kind!r}")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    idx = random_text(rng, model, length)
    lut = np.frombuffer("".join(alphabet.symbols).encode("ascii"), dtype=np.uint8)
    return lut[idx].tobytes()
