import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helly_lattice.bounds import edge_type_budget, upper_bound_h  # noqa: E402
from helly_lattice.kernel import edge_type_counts, is_empty_polygon  # noqa: E402

# acceptance lines collected by test_acceptance.py, printed at the end of the run
ACCEPTANCE: dict = {}


def assert_within_budgets(polygon):
    """Edge-type budgets and the vertex bound, for certified polygons of L(alpha)."""
    spec = polygon.spec
    if spec.kind != "diagonal":
        return
    assert is_empty_polygon(polygon).empty
    counts = edge_type_counts(polygon)
    budget = edge_type_budget(spec.alpha)
    for t, n in counts.items():
        assert n <= budget[t], f"{t.value}: {n} edges exceed budget {budget[t]} in {polygon.vertices}"
    assert len(polygon) <= upper_bound_h(spec.alpha)


@pytest.fixture
def acceptance():
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key:>2}: {'PASS' if ok else 'FAIL'}  {text}")
