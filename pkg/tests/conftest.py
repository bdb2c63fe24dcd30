import random

import pytest

from toricgauss.linalg import IntMatrix

_ACCEPTANCE = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion."""

    def record(label, ok, detail=""):
        _ACCEPTANCE.append((label, ok, detail))
        assert ok, f"{label}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")


def random_unimodular(n, rng: random.Random, steps=8, spread=2):
    """Random element of GL(n, Z) built from elementary moves."""
    m = IntMatrix.identity(n).to_rows()
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        move = rng.random()
        if n > 1 and move < 0.6:
            f = rng.randint(-spread, spread)
            m[i] = [a + f * b for a, b in zip(m[i], m[j])]
        elif n > 1 and move < 0.8:
            m[i], m[j] = m[j], m[i]
        else:
            m[i] = [-a for a in m[i]]
    return IntMatrix.from_rows(m)


def random_affine(n, rng, shift=3):
    return random_unimodular(n, rng), tuple(rng.randint(-shift, shift) for _ in range(n))


def corpus_fixtures():
    """(name, input document, expected document) for every bundled fixture."""
    import json
    from importlib.resources import files

    root = files("toricgauss") / "corpus"
    names = sorted(p.name[: -len(".input.json")] for p in root.iterdir() if p.name.endswith(".input.json"))
    return [
        (n, json.loads((root / f"{n}.input.json").read_text()), (root / f"{n}.expected.json").read_text())
        for n in names
    ]
