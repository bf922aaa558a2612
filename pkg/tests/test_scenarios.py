import pytest

from kmut import scenarios
from kmut.scenarios import (
    EXPECTED_ROUTE_VALUE,
    ScenarioReport,
    route_left_trace,
    route_right_trace,
    run_all,
    scenario_hom_table,
    scenario_route_left,
    scenario_route_right,
    scenario_routes_agree,
)

KNOWN_TABLE_TYPO = "homs.20"


@pytest.fixture(scope="module")
def everything():
    return run_all()


def test_run_all_is_sorted_and_large(everything):
    ids = [r.id for r in everything]
    assert ids == sorted(ids)
    assert len(ids) >= 10
    assert len(set(ids)) == len(ids)


def test_everything_but_the_table_typo_passes(everything):
    bad = [r.id for r in everything if r.status != "pass"]
    assert bad == [KNOWN_TABLE_TYPO]


def test_table_typo_witness():
    leaf = {r.id: r for r in scenario_hom_table().leaves()}[KNOWN_TABLE_TYPO]
    assert (leaf.expected, leaf.actual) == (40, 10)
    assert "O(3,1)(-2e)" in leaf.reference


def test_filters():
    assert [r.id for r in run_all("route")] == ["route.agree", "route.left", "route.right"]
    assert run_all("no-such-scenario") == []
    assert all(r.id.startswith("counts.") for r in run_all("counts"))


def test_workers_give_identical_reports():
    a = [(r.id, r.status, r.actual) for r in run_all("sod")]
    b = [(r.id, r.status, r.actual) for r in run_all("sod", workers=4)]
    assert a == b


def test_route_values():
    assert route_left_trace().chis == [0, 0, 1, -5, 10, None, -4, 1, 1, -4]
    assert route_right_trace().chis == [-10, 1, 0, 1, -4, 6]
    left = scenario_route_left()
    assert left.passed and left.actual == EXPECTED_ROUTE_VALUE
    assert left.failed_checks() == []


def test_intermediate_coefficients():
    final = route_left_trace().final
    assert str(final) == (
        "O_F(1) + 4O(1,0) - O(1,1) - O(2,0)(-e) + 4O(2,1)(-e) "
        "- 10O(3,1)(-2e) + 5O(4,1)(-2e) - O(5,1)(-2e)"
    )


def test_fault_injection_keeps_agreement():
    assert not scenario_route_left(expected=-136).passed
    assert not scenario_route_right(expected=0).passed
    assert scenario_routes_agree().passed


def test_errors_become_reports(monkeypatch):
    def boom():
        raise RuntimeError("injected")

    monkeypatch.setattr(scenarios, "_SCENARIOS", [("boom", boom)])
    (rep,) = run_all()
    assert rep.status == "error" and "injected" in rep.description


def test_report_status_rules():
    assert ScenarioReport("x", 1, 1, "r").passed
    assert not ScenarioReport("x", 1, 2, "r").passed
    assert not ScenarioReport("x", 1, 1, "r", checks=[("c", 0, 1)]).passed
    parent = ScenarioReport("p", None, None, "r", children=[ScenarioReport("p.a", 1, 1, "r")])
    assert parent.passed and [c.id for c in parent.leaves()] == ["p.a"]
