import numpy as np
import pytest
from hypothesis import strategies as st

from querybounds.functions import PartialFunction


@st.composite
def partial_functions(draw, max_n=4, max_m=2, min_size=1):
    """Random partial functions with a nonempty domain."""
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(1, min(max_m, n)))
    codes = draw(st.sets(st.integers(0, (1 << n) - 1), min_size=min_size, max_size=1 << n))
    outs = {c: draw(st.integers(0, (1 << m) - 1)) for c in sorted(codes)}
    return PartialFunction.from_table(n, m, outs)


@st.composite
def boolean_tables(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    return n, draw(st.integers(0, (1 << (1 << n)) - 1))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# -- acceptance summary: one line per criterion after the run ---------------

_criteria: dict[int, list[tuple[str, str, str]]] = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    outcome = "PASS" if call.excinfo is None else "FAIL"
    detail = ""
    if call.excinfo is not None:
        detail = str(call.excinfo.value).splitlines()[0][:160] if str(call.excinfo.value) else call.excinfo.typename
    _criteria.setdefault(marker.args[0], []).append((item.name, outcome, detail))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_criteria):
        rows = _criteria[k]
        failed = [r for r in rows if r[1] == "FAIL"]
        status = "FAIL" if failed else "PASS"
        line = f"criterion {k:>2}: {status} ({len(rows) - len(failed)}/{len(rows)} checks)"
        if failed:
            line += f"  first failure: {failed[0][0]}: {failed[0][2]}"
        terminalreporter.write_line(line)
