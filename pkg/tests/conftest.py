import pytest

from schurz.diagram import DiagonalTableau

_ = None

# Worked tableau <-> sequence correspondences, rows top to bottom, None = empty.
WORKED = {
    "2u4(2)3(2)1": [[_, _, 2], [_, 2, 4], [2, 3, 2], [1, 2, _]],
    "2d1d1": [[1, 1, 2]],
    "1u2d1": [[_, 1], [1, 2]],
    "1u2(2)4": [[_, 1], [2, 2], [4, 2]],
    "1u1u2(2)3": [[_, 1], [_, 1], [2, 2], [3, 2]],
    "1(1u1u1(2d1)2d2d1)1d1": [
        [_, _, _, _, _, 1, 1],
        [_, _, _, _, _, 1, 1],
        [_, _, _, 1, 2, 1, 1],
        [_, 1, 2, 2, 1, 2, 1],
        [1, 1, 1, 2, 2, 1, 2],
    ],
    "1u1(2d2d1(2d1)1d1d1)1": [
        [_, _, _, _, _, _, _, 1],
        [_, _, 1, 2, 1, 2, 2, 1],
        [1, 1, 1, 1, 2, 1, 2, 2],
        [1, 1, 1, 1, 1, 2, _, _],
    ],
    "1(2)1": [[2, 1], [1, 2]],
}


@pytest.fixture(scope="session")
def worked():
    return {s: DiagonalTableau.from_rows(rows) for s, rows in WORKED.items()}


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n])
