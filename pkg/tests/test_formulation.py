"""Formulation tests: structural counts, naming, and the physical
invariants every optimal solution must satisfy (split exactness, flow
consistency with angle differences, nodal balance, storage recursion)."""

import pytest

from shiftmarket.cases import case_1bus_5t, case_3bus, case_ieee30
from shiftmarket.clearing import clear
from shiftmarket.formulation import absorbed_load, build, mode_of
from shiftmarket.netmodel import (
    CaseSpec, Entity, Generator, Line, Load, Node, SpaceTimeIndex, VirtualLink,
)


def test_3bus_column_and_row_counts():
    # 3 d + 3 p + 6 f+- + 6 dp/dm + 3 th = 21 columns;
    # 3 balance + 3 dcflow + 1 refangle = 7 equality rows, no inequalities
    lp, vm, cm = build(case_3bus(4))
    assert lp.num_cols == 21
    assert len(vm.d) == 3 and len(vm.p) == 3
    assert len(vm.f_plus) == 3 and len(vm.f_minus) == 3
    assert len(vm.dlt_plus) == 3 and len(vm.dlt_minus) == 3
    assert len(vm.theta) == 3
    assert lp.A.shape[0] == 7 and lp.G.shape[0] == 0
    assert len(cm.balance) == 3 and len(cm.dcflow) == 3 and len(cm.refangle) == 1


def test_3bus_zero_bound_scenario_keeps_split_columns():
    # spatial links keep both split columns even at zero capacity
    lp, _, _ = build(case_3bus(1))
    assert lp.num_cols == 21


def test_1bus5t_counts():
    # 5 d + 5 p + 4 forward dp (no dm, no f, no theta) = 14 columns;
    # 5 balance equalities, 8 ramp inequalities, no refangle
    lp, vm, cm = build(case_1bus_5t(5))
    assert lp.num_cols == 14
    assert len(vm.dlt_plus) == 4 and len(vm.dlt_minus) == 0
    assert len(vm.f_plus) == 0 and len(vm.theta) == 0
    assert lp.A.shape[0] == 5 and len(cm.refangle) == 0
    assert lp.G.shape[0] == 8
    assert len(cm.ramp_up) == 4 and len(cm.ramp_dn) == 4


def test_no_extension_case_reduces_to_baseline():
    case = case_3bus(1)
    stripped = CaseSpec(
        name="bare", nodes=case.nodes, num_periods=1,
        generators=case.generators, loads=case.loads, lines=case.lines,
        entities=case.entities, virtual_links=())
    lp, vm, cm = build(stripped)
    kinds = {vm.owner[j][0] for j in range(lp.num_cols)}
    assert kinds == {"d", "p", "f+", "f-", "th"}
    assert lp.G.shape[0] == 0
    assert mode_of(stripped) == "baseline"


def test_mode_classification():
    assert mode_of(case_3bus(1)) == "spatial"
    assert mode_of(case_1bus_5t(2)) == "temporal"
    assert mode_of(case_ieee30(True)) == "spatiotemporal"
    assert mode_of(case_ieee30(False)) == "baseline"


def test_row_column_naming_scheme():
    lp, _, _ = build(case_3bus(2))
    assert "d[d1,t1]" in lp.col_names
    assert "p[g2,t1]" in lp.col_names
    assert "f+[l12,t1]" in lp.col_names and "f-[l12,t1]" in lp.col_names
    assert "dp[v12]" in lp.col_names and "dm[v12]" in lp.col_names
    assert "th[n3,t1]" in lp.col_names
    assert "bal[n2,t1]" in lp.eq_names
    assert "dc[l23,t1]" in lp.eq_names
    assert "ref[t1]" in lp.eq_names


def test_absorb_rows_only_where_capacity_declared():
    case = case_ieee30(True)
    lp, _, cm = build(case)
    # four data-center buses over three periods, a lo and a hi row each
    assert len(cm.absorb_hi) == 12 and len(cm.absorb_lo) == 12
    assert "abs_hi[b21,t2]" in lp.ineq_names and "abs_lo[b30,t1]" in lp.ineq_names
    lp0, _, cm0 = build(case_3bus(4))
    assert not cm0.absorb_hi and not cm0.absorb_lo


def test_build_rejects_invalid_case():
    bad = CaseSpec(name="bad", nodes=(Node("a"),), num_periods=0)
    with pytest.raises(ValueError):
        build(bad)


def test_split_bounds_cover_declared_interval():
    # signed recombination dp - dm must span [lower, upper] exactly
    ent = (Entity("e", loads=("d",)),)
    nodes = (Node("a"), Node("b"))
    for lower, upper in [(-5.0, 5.0), (0.0, 7.0), (-3.0, 0.0), (2.0, 6.0),
                         (-6.0, -2.0)]:
        case = CaseSpec(
            name="x", nodes=nodes, num_periods=1,
            generators=(Generator("g", "a", (10.0,), (1.0,)),),
            loads=(Load("d", "b", "e", (8.0,), (9.0,)),),
            entities=ent,
            virtual_links=(VirtualLink("v", "e", SpaceTimeIndex("a", 1),
                                       SpaceTimeIndex("b", 1), lower, upper,
                                       1.0),),
        )
        lp, vm, _ = build(case)
        dp_hi = lp.hi[vm.dlt_plus["v"]] if "v" in vm.dlt_plus else 0.0
        dp_lo = lp.lo[vm.dlt_plus["v"]] if "v" in vm.dlt_plus else 0.0
        dm_hi = lp.hi[vm.dlt_minus["v"]] if "v" in vm.dlt_minus else 0.0
        dm_lo = lp.lo[vm.dlt_minus["v"]] if "v" in vm.dlt_minus else 0.0
        assert dp_lo - dm_hi == lower
        assert dp_hi - dm_lo == upper


# -- physical invariants on solved cases -------------------------------------

def scenario_solutions():
    for s in (1, 2, 3, 4, 6, 7):
        yield clear(case_3bus(s))
    for s in (1, 2, 5, 7):
        yield clear(case_1bus_5t(s))


@pytest.mark.parametrize("sol", list(scenario_solutions()),
                         ids=lambda s: s.case.name)
def test_split_exactness_and_balance(sol):
    case = sol.case
    x = sol.lp_solution.x
    vm = sol.variable_map
    # positive-cost splits never overlap
    for l in case.lines:
        for t in case.periods():
            if l.bid_cost[t - 1] > 0:
                assert min(x[vm.f_plus[(l.id, t)]],
                           x[vm.f_minus[(l.id, t)]]) <= 1e-9
    for v in case.virtual_links:
        if v.bid_cost > 0 and v.id in vm.dlt_plus and v.id in vm.dlt_minus:
            assert min(x[vm.dlt_plus[v.id]], x[vm.dlt_minus[v.id]]) <= 1e-9

    # recombined flow equals susceptance times the angle difference
    for l in case.lines:
        for t in case.periods():
            f = sol.flows[(l.id, t)]
            dtheta = sol.angles[(l.snd, t)] - sol.angles[(l.rec, t)]
            assert f == pytest.approx(l.susceptance * dtheta, abs=1e-8)

    # nodal balance recomputed from the domain (not the LP matrices)
    for n in case.nodes:
        for t in case.periods():
            gen = sum(sol.dispatch[(g.id, t)] for g in case.gens_at(n.id))
            inflow = sum(sol.flows[(l.id, t)] for l in case.lines
                         if l.rec == n.id)
            outflow = sum(sol.flows[(l.id, t)] for l in case.lines
                          if l.snd == n.id)
            absorbed = sol.absorbed[(n.id, t)]
            assert gen + inflow - outflow == pytest.approx(absorbed, abs=1e-8)
            # absorbed load stays physical even with no absorb row present
            assert absorbed >= -1e-9


def test_absorbed_load_recomputation_matches_helper():
    sol = clear(case_3bus(4))
    for n in sol.case.nodes:
        got = absorbed_load(sol.case, sol.served, sol.shifts, n.id, 1)
        assert got == pytest.approx(sol.absorbed[(n.id, 1)], abs=1e-12)


def test_storage_recursion_on_temporal_chain():
    # the chain of forward links behaves as a storage: the flow on the
    # link leaving period t equals the accumulated unmet demand
    for s in range(1, 8):
        sol = clear(case_1bus_5t(s))
        case = sol.case
        carry = 0.0
        for t in range(1, 5):
            u = sol.served[("d1", t)] - sol.absorbed[("n1", t)]
            carry += u
            link_flow = sol.shifts[f"w{t}{t+1}"]
            assert link_flow == pytest.approx(carry, abs=1e-9)
        final = sol.served[("d1", 5)] - sol.absorbed[("n1", 5)]
        assert carry + final == pytest.approx(0.0, abs=1e-9)


def test_mixed_space_time_link_is_permitted():
    # a single link may span both space and time
    case = CaseSpec(
        name="mixed",
        nodes=(Node("a"), Node("b")),
        num_periods=2,
        generators=(Generator("g", "a", (10.0, 1.0), (2.0, 2.0)),),
        loads=(Load("d", "b", "e", (0.0, 8.0), (30.0, 30.0)),),
        lines=(Line("l", "a", "b", (2.0, 2.0), (0.5, 0.5), 1.0),),
        entities=(Entity("e", loads=("d",)),),
        virtual_links=(VirtualLink("m", "e", SpaceTimeIndex("b", 2),
                                   SpaceTimeIndex("a", 1), 0.0, 10.0, 1.0),),
    )
    sol = clear(case)
    # generation at (a,1) is abundant but the line is tiny; serving the
    # period-2 load at b means shifting it across space and time to (a,1)
    assert sol.shifts["m"] > 1.0
    assert sol.welfare > 0
