"""Clear a case: build -> solve -> interpret.

The interpreted solution carries the primal quantities (served load,
dispatch, signed flows and shifts, angles), the LMPs (duals of the
balance rows), the physically absorbed load per space-time node, the
welfare, and per-stakeholder profits:

    generator   sum_t (pi[n(i),t] - cost_i,t) * p_i,t
    load        sum_t (value_j,t - pi[n(j),t]) * d_j,t
    line        sum_t (|pi_rec - pi_snd| - cost_l,t) * |f_l,t|
    link        (|pi_rec - pi_snd| - cost_v) * |delta_v|

The welfare decomposition regroups these against the primal objective;
under Kirchhoff constraints the regrouped sum generally differs from the
welfare and the residual (merchandising surplus) is reported explicitly
rather than hidden.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import formulation
from .lp import LpSolution, SolveOptions, solve
from .netmodel import CaseSpec, validate


class ClearingError(Exception):
    """Clearing failed: invalid case, infeasible LP, or numerical failure."""


@dataclass
class ClearingSolution:
    case: CaseSpec
    welfare: float
    served: dict          # (load_id, t) -> MW
    dispatch: dict        # (gen_id, t) -> MW
    flows: dict           # (line_id, t) -> signed MW
    shifts: dict          # link_id -> signed MW
    angles: dict          # (node_id, t) -> rad; empty when the case has no lines
    prices: dict          # (node_id, t) -> $/MWh (dual of the balance row)
    absorbed: dict        # (node_id, t) -> MW physically absorbed
    gen_profit: dict      # gen_id -> $ over the horizon
    load_profit: dict
    line_profit: dict
    link_profit: dict
    dual_unique: str      # "yes" | "unknown" (degenerate vertex)
    lp_solution: LpSolution = field(repr=False, default=None)
    variable_map: formulation.VariableMap = field(repr=False, default=None)
    constraint_map: formulation.ConstraintMap = field(repr=False, default=None)

    # -- convenience vector views (declaration order) -------------------

    def price_vector(self, t: int):
        return [self.prices[(n.id, t)] for n in self.case.nodes]

    def served_vector(self, t: int):
        return [self.served[(j.id, t)] for j in self.case.loads]

    def dispatch_vector(self, t: int):
        return [self.dispatch[(g.id, t)] for g in self.case.generators]

    def flow_vector(self, t: int):
        return [self.flows[(l.id, t)] for l in self.case.lines]

    def shift_vector(self):
        return [self.shifts[v.id] for v in self.case.virtual_links]

    def to_dict(self) -> dict:
        """JSON-ready report (deterministic key order)."""
        c = self.case
        return {
            "case": c.name,
            "mode": formulation.mode_of(c),
            "welfare": self.welfare,
            "prices": {n.id: [self.prices[(n.id, t)] for t in c.periods()]
                       for n in c.nodes},
            "served": {j.id: [self.served[(j.id, t)] for t in c.periods()]
                       for j in c.loads},
            "dispatch": {g.id: [self.dispatch[(g.id, t)] for t in c.periods()]
                         for g in c.generators},
            "flows": {l.id: [self.flows[(l.id, t)] for t in c.periods()]
                      for l in c.lines},
            "shifts": {v.id: self.shifts[v.id] for v in c.virtual_links},
            "absorbed": {n.id: [self.absorbed[(n.id, t)] for t in c.periods()]
                         for n in c.nodes},
            "profits": {
                "generators": dict(self.gen_profit),
                "loads": dict(self.load_profit),
                "lines": dict(self.line_profit),
                "virtual_links": dict(self.link_profit),
            },
            "dual_unique": self.dual_unique,
        }

    def to_table(self) -> str:
        """Aligned text block mirroring the scenario-table column order:
        welfare, prices, served, dispatch, flows, shifts."""
        c = self.case

        def vec(values):
            return "[" + ", ".join(f"{v:g}" for v in values) + "]"

        lines = [f"case     {c.name}",
                 f"welfare  {self.welfare:g}"]

        def block(label, per_period_vec):
            for t in c.periods():
                tag = f"t{t}" if c.num_periods > 1 else ""
                lines.append(f"{label:<3}{tag:<4} {vec(per_period_vec(t))}")

        block("pi", self.price_vector)
        block("d", self.served_vector)
        block("p", self.dispatch_vector)
        if c.lines:
            block("f", self.flow_vector)
        if c.virtual_links:
            lines.append(f"delta   {vec(self.shift_vector())}")
        return "\n".join(lines) + "\n"


@dataclass
class ProfitReport:
    generators: dict
    loads: dict
    lines: dict
    links: dict

    def total(self) -> float:
        return (sum(self.generators.values()) + sum(self.loads.values())
                + sum(self.lines.values()) + sum(self.links.values()))


@dataclass
class WelfareDecomposition:
    welfare: float
    load_profit: float
    gen_profit: float
    line_profit: float
    link_profit: float

    @property
    def regrouped(self) -> float:
        return (self.load_profit + self.gen_profit
                + self.line_profit + self.link_profit)

    @property
    def residual(self) -> float:
        """Merchandising surplus: primal welfare minus the regrouped sum."""
        return self.welfare - self.regrouped


def _stakeholder_profits(case, served, dispatch, flows, shifts, prices):
    gen_profit = {
        g.id: sum((prices[(g.node, t)] - g.bid_cost[t - 1]) * dispatch[(g.id, t)]
                  for t in case.periods())
        for g in case.generators
    }
    load_profit = {
        j.id: sum((j.bid_value[t - 1] - prices[(j.node, t)]) * served[(j.id, t)]
                  for t in case.periods())
        for j in case.loads
    }
    line_profit = {
        l.id: sum(
            (abs(prices[(l.rec, t)] - prices[(l.snd, t)]) - l.bid_cost[t - 1])
            * abs(flows[(l.id, t)])
            for t in case.periods())
        for l in case.lines
    }
    link_profit = {
        v.id: (abs(prices[(v.rec.node, v.rec.period)]
                   - prices[(v.snd.node, v.snd.period)]) - v.bid_cost)
              * abs(shifts[v.id])
        for v in case.virtual_links
    }
    return gen_profit, load_profit, line_profit, link_profit


def clear(case: CaseSpec, opts: SolveOptions | None = None) -> ClearingSolution:
    """Solve the market clearing problem for a validated case."""
    diags = validate(case)
    if diags:
        raise ClearingError("invalid case: " + "; ".join(str(d) for d in diags))
    lp, vm, cm = formulation.build(case)
    sol = solve(lp, opts)
    if sol.status == "infeasible":
        # zero clearing is always feasible for a valid case, so this is an
        # internal inconsistency rather than a user error
        raise ClearingError("internal inconsistency: clearing LP reported "
                            "infeasible for a valid case")
    if sol.status != "optimal":
        raise ClearingError(f"clearing LP ended with status {sol.status!r}")

    x = sol.x
    served = {key: float(x[col]) for key, col in vm.d.items()}
    dispatch = {key: float(x[col]) for key, col in vm.p.items()}
    flows = {(lid, t): formulation.recombine_flow(vm, x, lid, t)
             for (lid, t) in vm.f_plus}
    shifts = {v.id: formulation.recombine_shift(vm, x, v.id)
              for v in case.virtual_links}
    angles = {key: float(x[col]) for key, col in vm.theta.items()}
    prices = {key: float(sol.y_eq[row]) for key, row in cm.balance.items()}
    absorbed = {
        (n.id, t): formulation.absorbed_load(case, served, shifts, n.id, t)
        for n in case.nodes for t in case.periods()
    }

    # recompute the objective from recombined primal values; must agree
    welfare = (
        sum(j.bid_value[t - 1] * served[(j.id, t)]
            for j in case.loads for t in case.periods())
        - sum(g.bid_cost[t - 1] * dispatch[(g.id, t)]
              for g in case.generators for t in case.periods())
        - sum(l.bid_cost[t - 1] * abs(flows[(l.id, t)])
              for l in case.lines for t in case.periods())
        - sum(v.bid_cost * abs(shifts[v.id]) for v in case.virtual_links)
    )
    if abs(welfare - sol.objective) > 1e-6 * (1 + abs(sol.objective)):
        raise ClearingError(
            "internal inconsistency: recombined welfare "
            f"{welfare} != LP objective {sol.objective}")

    gen_profit, load_profit, line_profit, link_profit = _stakeholder_profits(
        case, served, dispatch, flows, shifts, prices)

    return ClearingSolution(
        case=case,
        welfare=float(sol.objective),
        served=served,
        dispatch=dispatch,
        flows=flows,
        shifts=shifts,
        angles=angles,
        prices=prices,
        absorbed=absorbed,
        gen_profit=gen_profit,
        load_profit=load_profit,
        line_profit=line_profit,
        link_profit=link_profit,
        dual_unique="unknown" if sol.primal_degenerate else "yes",
        lp_solution=sol,
        variable_map=vm,
        constraint_map=cm,
    )


def profits(sol: ClearingSolution) -> ProfitReport:
    """Per-stakeholder horizon profits, recomputed from the solution fields."""
    gen, load, line, link = _stakeholder_profits(
        sol.case, sol.served, sol.dispatch, sol.flows, sol.shifts, sol.prices)
    return ProfitReport(generators=gen, loads=load, lines=line, links=link)


def welfare_decomposition(sol: ClearingSolution) -> WelfareDecomposition:
    """Regrouped stakeholder profits vs. the primal welfare; the residual
    is the merchandising surplus."""
    rep = profits(sol)
    return WelfareDecomposition(
        welfare=sol.welfare,
        load_profit=sum(rep.loads.values()),
        gen_profit=sum(rep.generators.values()),
        line_profit=sum(rep.lines.values()),
        link_profit=sum(rep.links.values()),
    )
