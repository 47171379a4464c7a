import pytest

from floorcount.model import DegreeSpec


def curve_specs(max_p2=6, max_p1p1=4):
    return ([DegreeSpec.p2(d) for d in range(1, max_p2 + 1)]
            + [DegreeSpec.p1p1(d, e) for d in range(1, max_p1p1 + 1)
               for e in range(1, max_p1p1 + 1)])


@pytest.fixture
def p3_2():
    return DegreeSpec.p3(2)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
