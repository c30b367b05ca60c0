from __future__ import annotations

from collections import defaultdict

from hypothesis import settings
from hypothesis import strategies as st

from switchgames.core import Game, Owner

# derandomized so two runs of the suite see the same examples
settings.register_profile("repo", derandomize=True, deadline=None, database=None, max_examples=120)
settings.load_profile("repo")


@st.composite
def games(draw, players: int = 2, max_vertices: int = 6, max_order: int = 3, min_vertices: int = 1):
    """Valid games; ``players`` limits owners like ``generate random`` does."""
    n = draw(st.integers(min_vertices, max_vertices))
    kinds = [Owner.SWITCH, Owner.REACH, Owner.SAFETY][: players + 1]
    owners, succ = [], []
    for _ in range(n):
        owner = draw(st.sampled_from(kinds))
        if owner is Owner.SWITCH:
            out = draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=max_order))
        else:
            out = draw(st.lists(st.integers(0, n - 1), max_size=max_order, unique=True))
        owners.append(owner)
        succ.append(tuple(out))
    target = draw(st.integers(0, n - 1))
    return Game(tuple(owners), tuple(succ), 0, target)


# ---- acceptance summary ---------------------------------------------------

_criteria: dict[str, tuple[int, str]] = {}
_results: dict[int, list[str]] = defaultdict(list)
_titles: dict[int, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            number, title = mark.args
            _criteria[item.nodeid] = (number, title)
            _titles[number] = title


def pytest_runtest_logreport(report):
    if report.nodeid not in _criteria:
        return
    number, _ = _criteria[report.nodeid]
    if report.when == "call" or report.outcome != "passed":
        _results[number].append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _titles:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_titles):
        outcomes = _results.get(number, [])
        if outcomes and all(o == "passed" for o in outcomes):
            verdict = "PASS"
        elif not outcomes or all(o == "skipped" for o in outcomes):
            verdict = "NOT RUN"
        else:
            verdict = "FAIL"
        terminalreporter.write_line(f"{verdict} criterion {number}: {_titles[number]}")
