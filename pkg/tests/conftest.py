import itertools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))


def _perm_table(perms):
    index = {p: i for i, p in enumerate(perms)}
    # (p * q)(x) = p(q(x))
    return [[index[tuple(p[q[x]] for x in range(len(p)))] for q in perms] for p in perms]


def a4_table():
    def parity(p):
        return sum(1 for i, j in itertools.combinations(range(4), 2) if p[i] > p[j]) % 2

    perms = sorted(p for p in itertools.permutations(range(4)) if parity(p) == 0)
    return _perm_table(perms)


def q8_table():
    # quaternion units as (sign, unit) with unit in 1, i, j, k
    unit_mul = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    elems = [(s, u) for s in (1, -1) for u in "1ijk"]
    index = {e: i for i, e in enumerate(elems)}

    def mul(a, b):
        s, u = unit_mul[(a[1], b[1])]
        return (a[0] * b[0] * s, u)

    return [[index[mul(a, b)] for b in elems] for a in elems]


def write_table_file(path, table):
    lines = [str(len(table))] + [" ".join(map(str, row)) for row in table]
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture(scope="session")
def table_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("tables")
    write_table_file(d / "q8.txt", q8_table())
    write_table_file(d / "a4.txt", a4_table())
    write_table_file(d / "s4.txt", s4_table())
    return d


def s4_table():
    return _perm_table(sorted(itertools.permutations(range(4))))


_ACCEPTANCE: list[str] = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""

    def record(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE):
            terminalreporter.write_line(line)
