"""Built-in case and sweep tests: parameter fidelity, scenario identities,
and the empirical monotonicity observations across the scenario tables."""

import pytest

from shiftmarket.cases import (
    Binding,
    ScenarioTemplate,
    builtin_case,
    case_1bus_5t,
    case_3bus,
    case_ieee30,
    sweep,
    sweep_table,
    template_1bus_5t,
    template_3bus,
)
from shiftmarket.clearing import clear
from shiftmarket.netmodel import validate


@pytest.mark.parametrize("scenario", range(1, 8))
def test_every_3bus_scenario_validates(scenario):
    assert validate(case_3bus(scenario)) == []


@pytest.mark.parametrize("scenario", range(1, 8))
def test_every_1bus_scenario_validates(scenario):
    assert validate(case_1bus_5t(scenario)) == []


@pytest.mark.parametrize("flex", [False, True])
def test_ieee30_validates(flex):
    assert validate(case_ieee30(flex)) == []


def test_3bus_parameters():
    case = case_3bus(2)
    assert [g.capacity[0] for g in case.generators] == [50, 30, 50]
    assert [g.bid_cost[0] for g in case.generators] == [10, 20, 10]
    assert [j.request[0] for j in case.loads] == [40, 45, 40]
    assert [j.bid_value[0] for j in case.loads] == [40, 30, 40]
    assert [l.capacity[0] for l in case.lines] == [5, 10, 10]
    assert [l.bid_cost[0] for l in case.lines] == [2, 2, 2]
    assert all(l.susceptance == 0.5 for l in case.lines)
    # three links over the node pairs (1,2), (1,3), (2,3)
    ends = [(v.snd.node, v.rec.node) for v in case.virtual_links]
    assert ends == [("n1", "n2"), ("n1", "n3"), ("n2", "n3")]
    assert [v.upper for v in case.virtual_links] == [5, 0, 0]
    assert [v.lower for v in case.virtual_links] == [-5, 0, 0]
    assert all(v.bid_cost == 3.0 for v in case.virtual_links)


def test_3bus_scenario_costs():
    assert all(v.bid_cost == 1.0 for v in case_3bus(6).virtual_links)
    assert all(v.bid_cost == 0.0 for v in case_3bus(7).virtual_links)


def test_1bus_parameters():
    case = case_1bus_5t(5)
    g = case.generators[0]
    assert g.capacity == (50.0,) * 5
    assert g.bid_cost == (10.0, 20.0, 10.0, 15.0, 20.0)
    assert g.ramp_limit == 20.0
    j = case.loads[0]
    assert j.request == (70.0, 20.0, 70.0, 40.0, 40.0)
    assert j.bid_value == (30.0, 60.0, 40.0, 50.0, 45.0)
    assert [v.upper for v in case.virtual_links] == [21, 0, 21, 0]
    assert all(v.lower == 0.0 for v in case.virtual_links)
    assert all(v.kind == "temporal" for v in case.virtual_links)


def test_1bus_scenario_bounds():
    assert [v.upper for v in case_1bus_5t(2).virtual_links] == [10, 0, 0, 0]
    assert [v.upper for v in case_1bus_5t(7).virtual_links] == [100, 100, 100, 100]


def test_ieee30_structure():
    off = case_ieee30(False)
    on = case_ieee30(True)
    assert len(off.nodes) == 30 and len(off.lines) == 41
    assert len(off.virtual_links) == 0
    assert all(v.upper == 10.0 for v in on.virtual_links)
    dc_nodes = {n for e in on.entities for n in e.dc_capacity}
    assert {"b21", "b30"} <= dc_nodes
    # flex differs only in the link layer
    assert off.lines == on.lines and off.loads == on.loads


def test_ieee30_seed_changes_bids_deterministically():
    a1, a2 = case_ieee30(True, seed=1), case_ieee30(True, seed=1)
    b = case_ieee30(True, seed=2)
    assert a1 == a2
    assert a1 != b


def test_builtin_lookup():
    assert builtin_case("3bus", 3).name == "3bus-s3"
    assert builtin_case("1bus5t", 1).name == "1bus5t-s1"
    assert builtin_case("ieee30", 0).name == "ieee30-noflex"
    with pytest.raises(KeyError):
        builtin_case("nosuch")
    with pytest.raises(ValueError):
        builtin_case("3bus", 9)


# -- scenario identities and orderings ---------------------------------------

def same_primal(a, b):
    keys = ("welfare", "served", "dispatch", "flows", "absorbed")
    for key in keys:
        va, vb = getattr(a, key), getattr(b, key)
        if isinstance(va, dict):
            if set(va) != set(vb):
                return False
            if any(abs(va[k] - vb[k]) > 1e-9 for k in va):
                return False
        elif abs(va - vb) > 1e-9:
            return False
    return True


def test_3bus_scenarios_4_and_5_identical():
    # flexibility beyond the binding level is inert
    assert same_primal(clear(case_3bus(4)), clear(case_3bus(5)))


def test_1bus_scenarios_3_and_4_identical():
    # extra capacity on the second chain link goes unused: the price
    # later is higher, and load only shifts forward
    assert same_primal(clear(case_1bus_5t(3)), clear(case_1bus_5t(4)))


def test_3bus_welfare_nondecreasing_rows_1_to_5():
    phis = [clear(case_3bus(s)).welfare for s in range(1, 6)]
    assert phis == sorted(phis)
    assert phis[0] == pytest.approx(2920.0) and phis[-1] == pytest.approx(3000.0)


def test_total_served_load_nondecreasing_over_scenarios():
    for family in (case_3bus, case_1bus_5t):
        totals = []
        for s in range(1, 8):
            sol = clear(family(s))
            totals.append(sum(sol.served.values()))
        assert all(b >= a - 1e-9 for a, b in zip(totals, totals[1:]))


# -- sweeps -------------------------------------------------------------------

def test_sweep_3bus_full_table():
    results = sweep(template_3bus())
    assert len(results) == 7
    phis = [r.solution.welfare for r in results]
    assert phis == pytest.approx([2920, 2980, 2997.5, 3000, 3000, 3030, 3050])
    table = sweep_table(results)
    assert table.count("\n") == 8  # header + 7 rows
    assert "2997.5" in table


def test_sweep_1bus_full_table():
    results = sweep(template_1bus_5t())
    phis = [r.solution.welfare for r in results]
    assert phis == pytest.approx([5200, 5770, 5840, 5840, 6060, 6200, 6200])


def test_sweep_empty_binding_list():
    template = ScenarioTemplate(name="empty", base=case_3bus(1), scenarios=())
    assert sweep(template) == []


def test_sweep_continues_past_failures():
    # an out-of-order bound makes one binding invalid; the sweep records
    # the failure and still clears the next binding
    base = case_3bus(1)
    bad = Binding(label="broken", bounds={"v12": (5.0, -5.0)})
    good = Binding(label="fine", bounds={"v12": (-5.0, 5.0)})
    template = ScenarioTemplate(name="x", base=base, scenarios=(bad, good))
    results = sweep(template)
    assert results[0].solution is None and "v12" in results[0].error
    assert results[1].solution is not None
    assert "error" in sweep_table(results)
