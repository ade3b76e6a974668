import random
from importlib import resources

import pytest

from cmsyzygy import build_algebra, load
from cmsyzygy.catalog import enumerate_cmp
from cmsyzygy.generate import random_dimer_tree
from cmsyzygy.reduction import ideal_J, quotient_algebra

DATA = resources.files("cmsyzygy") / "data"


def data_path(name):
    return str(DATA / name)


def parsed(name):
    return load(data_path(name))


def algebra(name):
    pq = parsed(name)
    return build_algebra(pq.quiver, pq.presentation)


def small_trees(seed, count, max_cycles=4, lengths=(3, 3, 4)):
    rng = random.Random(seed)
    return [random_dimer_tree(rng, 1 + k % max_cycles, lengths) for k in range(count)]


@pytest.fixture(scope="session")
def ex314():
    return algebra("ex314.qp")


@pytest.fixture(scope="session")
def ex314_cat(ex314):
    return enumerate_cmp(ex314)


@pytest.fixture(scope="session")
def ex314_J(ex314):
    return ideal_J(ex314, "5")


@pytest.fixture(scope="session")
def ex314_B(ex314):
    return quotient_algebra(ex314, "5")


@pytest.fixture(scope="session")
def ex314_B_cat(ex314_B):
    return enumerate_cmp(ex314_B)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
