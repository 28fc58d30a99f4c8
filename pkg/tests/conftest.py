import sys

import pytest

from spclat.fixtures import fixture_text
from spclat.formats import parse_document
from spclat.star import compute_star


def load(name):
    return compute_star(parse_document(fixture_text(name)).poset)


@pytest.fixture(scope="session")
def n5():
    return load("n5")


@pytest.fixture(scope="session")
def fig2():
    return load("fig2")


@pytest.fixture(scope="session")
def nonstrong():
    return load("nonstrong")


def idx(s, labels):
    """Element indices for a string like "a c 1" or an iterable of labels."""
    if isinstance(labels, str):
        labels = labels.split()
    return frozenset(s.poset.index(x) for x in labels)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "summary_lines", lambda: [])()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
