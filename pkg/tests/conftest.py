import io

import pytest

from covisit import GridSpec, Hypergraph

# Toy 3x3 map, locations l1..l9 in row-major order (l1 = cell (0, 0)).
# Raw grid is 6x6 at scale 2, so several pings land in each aggregated cell.
TOY_GRID = GridSpec(6, 6, 2)


def loc(k):
    """Location id of l_k on the 3x3 toy grid."""
    return k - 1


def _pings(uid, cells):
    rows = []
    for n, k in enumerate(cells):
        cx, cy = (k - 1) % 3, (k - 1) // 3
        for dx, dy in ((0, 0), (1, 1)):
            rows.append(f"{uid},0,{(4 * n + dx) % 48},{2 * cx + dx},{2 * cy + dy}")
    return rows


TOY_CSV = "\n".join(
    ["uid,d,t,x,y"]
    + _pings(1, [1, 2, 5, 4, 2])
    + _pings(2, [4, 5, 6, 7])
    + _pings(3, [4, 8, 4])
) + "\n"


@pytest.fixture
def toy_stream():
    return io.StringIO(TOY_CSV)


# Six-node example: u1..u6 are ids 0..5 on a 6x1 grid.
SIX_NODE_EDGES = {
    "e1": (0, 1),
    "e2": (0, 3, 4),
    "e3": (3, 4),
    "e4": (1, 2),
    "e5": (1, 4, 5),
}


@pytest.fixture
def six_node():
    return Hypergraph.from_edges(list(SIX_NODE_EDGES.values()), 6, 1)


_acceptance = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))
    elif "test_acceptance.py" in report.nodeid and report.when == "setup" and report.skipped:
        _acceptance.append((report.nodeid.split("::")[-1], "skipped"))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        mark = {"passed": "PASS", "failed": "FAIL"}.get(outcome, outcome.upper())
        terminalreporter.write_line(f"{mark:8} {name}")
