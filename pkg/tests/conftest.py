import random

import networkx as nx
import pytest

from scount.graph import new_graph


def from_nx(h) -> "Graph":
    h = nx.convert_node_labels_to_integers(h)
    return new_graph(h.number_of_nodes(), h.edges())


def atlas(max_n: int):
    """All graphs with 1..max_n vertices (networkx atlas, up to isomorphism)."""
    return [from_nx(h) for h in nx.graph_atlas_g()[1:] if h.number_of_nodes() <= max_n]


def random_relabel(g, rng: random.Random):
    perm = list(range(g.n))
    rng.shuffle(perm)
    return g.relabel(perm), perm


@pytest.fixture(scope="session")
def atlas7():
    return atlas(7)


# One pass/fail line per acceptance criterion, printed after the run.
_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    marks = getattr(report, "_criterion", None)
    if marks is None:
        return
    num, title = marks
    if report.when == "call" or report.outcome != "passed":
        state = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        if num not in _CRITERIA or _CRITERIA[num][1] == "PASS":
            _CRITERIA[num] = (title, state)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result()._criterion = tuple(mark.args)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, state = _CRITERIA[num]
        terminalreporter.write_line(f"criterion {num}: {state}  {title}")
