import numpy as np
import pytest

from wmatch.core import Alphabet, IidModel, Pattern

ACCEPTANCE_LINES: list[str] = []


def plant_texts(rng: np.random.Generator, pattern: Pattern, count: int, length: int) -> np.ndarray:
    """Uniform random texts; every other row gets a few copies of the pattern planted."""
    k = pattern.alphabet.size
    m = len(pattern)
    texts = rng.integers(0, k, size=(count, length), dtype=np.uint8)
    w = pattern.array.astype(np.uint8)
    for r in range(0, count, 2):
        for _ in range(3):
            p = int(rng.integers(0, length - m + 1))
            texts[r, p : p + m] = w
    # always exercise an occurrence flush against the end of the text
    texts[1, length - m :] = w
    return texts


@pytest.fixture
def ab():
    return Alphabet(("a", "b"))


@pytest.fixture
def uniform2():
    return IidModel.uniform(2)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
