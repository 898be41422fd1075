"""Translate a CaseSpec into the clearing LP.

Decision columns (in canonical order):

    d[j,t]       served load, bounds [0, request]
    p[i,t]       dispatch, bounds [0, capacity]
    f+[l,t], f-[l,t]   signed line flow split, each in [0, capacity]
    dp[v], dm[v]       virtual-shift split; the signed shift is
                       delta_v = dp - dm and the split bounds are derived
                       from [lower, upper] so the recombination spans the
                       declared interval exactly.  Spatial and mixed
                       space-time links always carry both split columns;
                       forward-only temporal links (lower >= 0) carry dp
                       only, and backward-only ones dm only.
    th[n,t]      voltage angle, free; emitted only when the case has lines

Rows:

    bal[n,t]   equality, oriented (inflow + generation + outgoing shifts)
               - (outflow + load + incoming shifts) = 0, so its dual under
               the lp module's sign convention is directly the LMP
    dc[l,t]    equality  f+ - f- - B*(th_snd - th_rec) = 0
    ref[t]     equality  th[n0,t] = 0 for the first declared node
    ramp+[i,t] / ramp-[i,t]   inequality  |p[i,t+1] - p[i,t]| <= ramp
    abs_lo[n,t] / abs_hi[n,t] inequality  0 <= absorbed(n,t) <= dc_capacity,
               emitted only where some entity declares a finite capacity

The objective maximizes bid value of served load minus generation,
transmission, and shifting costs; |f| and |delta| are charged through the
splits (each split column carries the full per-unit cost).

Row and column names are a stable public contract; downstream modules and
tests key on them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .lp import LinearProgram
from .netmodel import CaseSpec, validate


@dataclass
class VariableMap:
    """Bijection between domain coordinates and LP column indices."""

    d: dict = field(default_factory=dict)        # (load_id, t) -> col
    p: dict = field(default_factory=dict)        # (gen_id, t) -> col
    f_plus: dict = field(default_factory=dict)   # (line_id, t) -> col
    f_minus: dict = field(default_factory=dict)
    dlt_plus: dict = field(default_factory=dict)   # link_id -> col
    dlt_minus: dict = field(default_factory=dict)
    theta: dict = field(default_factory=dict)    # (node_id, t) -> col
    owner: list = field(default_factory=list)    # col -> (kind, key)

    def describe(self, col: int):
        return self.owner[col]


@dataclass
class ConstraintMap:
    """Bijection between domain constraints and LP row indices."""

    balance: dict = field(default_factory=dict)    # (node_id, t) -> eq row
    dcflow: dict = field(default_factory=dict)     # (line_id, t) -> eq row
    refangle: dict = field(default_factory=dict)   # t -> eq row
    ramp_up: dict = field(default_factory=dict)    # (gen_id, t) -> ineq row
    ramp_dn: dict = field(default_factory=dict)
    absorb_lo: dict = field(default_factory=dict)  # (node_id, t) -> ineq row
    absorb_hi: dict = field(default_factory=dict)


def mode_of(case: CaseSpec) -> str:
    """Classify a case by the virtual-link kinds present (informational;
    the build itself is uniform across modes)."""
    kinds = {v.kind for v in case.virtual_links}
    if not kinds:
        return "baseline"
    if kinds == {"spatial"}:
        return "spatial"
    if kinds == {"temporal"}:
        return "temporal"
    return "spatiotemporal"


def _split_bounds(link):
    """Bounds for (dp, dm) so dp - dm ranges exactly over [lower, upper]."""
    lo, hi = link.lower, link.upper
    dp = (max(lo, 0.0), max(hi, 0.0))
    dm = (max(-hi, 0.0), max(-lo, 0.0))
    return dp, dm


def build(case: CaseSpec):
    """Build the clearing LP; returns (LinearProgram, VariableMap, ConstraintMap).

    The case must validate cleanly; diagnostics are raised as ValueError.
    """
    diags = validate(case)
    if diags:
        raise ValueError("cannot build from invalid case: "
                         + "; ".join(str(d) for d in diags))

    T = case.num_periods
    periods = range(1, T + 1)
    has_lines = bool(case.lines)

    vm = VariableMap()
    names, lo, hi, obj = [], [], [], []

    def add_col(name, lo_k, hi_k, c_k, kind, key):
        names.append(name)
        lo.append(lo_k)
        hi.append(hi_k)
        obj.append(c_k)
        vm.owner.append((kind, key))
        return len(names) - 1

    for j in case.loads:
        for t in periods:
            vm.d[(j.id, t)] = add_col(
                f"d[{j.id},t{t}]", 0.0, j.request[t - 1], j.bid_value[t - 1],
                "d", (j.id, t))
    for g in case.generators:
        for t in periods:
            vm.p[(g.id, t)] = add_col(
                f"p[{g.id},t{t}]", 0.0, g.capacity[t - 1], -g.bid_cost[t - 1],
                "p", (g.id, t))
    for l in case.lines:
        for t in periods:
            vm.f_plus[(l.id, t)] = add_col(
                f"f+[{l.id},t{t}]", 0.0, l.capacity[t - 1], -l.bid_cost[t - 1],
                "f+", (l.id, t))
            vm.f_minus[(l.id, t)] = add_col(
                f"f-[{l.id},t{t}]", 0.0, l.capacity[t - 1], -l.bid_cost[t - 1],
                "f-", (l.id, t))
    for v in case.virtual_links:
        (dp_lo, dp_hi), (dm_lo, dm_hi) = _split_bounds(v)
        if v.kind == "temporal" and v.lower >= 0.0:
            vm.dlt_plus[v.id] = add_col(
                f"dp[{v.id}]", dp_lo, dp_hi, -v.bid_cost, "dp", v.id)
        elif v.kind == "temporal" and v.upper <= 0.0:
            vm.dlt_minus[v.id] = add_col(
                f"dm[{v.id}]", dm_lo, dm_hi, -v.bid_cost, "dm", v.id)
        else:
            # spatial and mixed links always carry both directions
            vm.dlt_plus[v.id] = add_col(
                f"dp[{v.id}]", dp_lo, dp_hi, -v.bid_cost, "dp", v.id)
            vm.dlt_minus[v.id] = add_col(
                f"dm[{v.id}]", dm_lo, dm_hi, -v.bid_cost, "dm", v.id)
    if has_lines:
        for n in case.nodes:
            for t in periods:
                vm.theta[(n.id, t)] = add_col(
                    f"th[{n.id},t{t}]", -math.inf, math.inf, 0.0,
                    "th", (n.id, t))

    ncols = len(names)
    cm = ConstraintMap()
    eq_rows, eq_rhs, eq_names = [], [], []
    ineq_rows, ineq_rhs, ineq_names = [], [], []

    def add_eq(name, coeffs, rhs):
        row = np.zeros(ncols)
        for col, coef in coeffs:
            row[col] += coef
        eq_rows.append(row)
        eq_rhs.append(rhs)
        eq_names.append(name)
        return len(eq_rows) - 1

    def add_ineq(name, coeffs, rhs):
        row = np.zeros(ncols)
        for col, coef in coeffs:
            row[col] += coef
        ineq_rows.append(row)
        ineq_rhs.append(rhs)
        ineq_names.append(name)
        return len(ineq_rows) - 1

    def link_cols(v, sign):
        """(col, coef) pairs contributing sign * delta_v."""
        out = []
        if v.id in vm.dlt_plus:
            out.append((vm.dlt_plus[v.id], sign))
        if v.id in vm.dlt_minus:
            out.append((vm.dlt_minus[v.id], -sign))
        return out

    # power conservation per space-time node: a shift OUT of (n,t) sits on
    # the supply side (it relieves physical absorption there), a shift IN
    # sits with the load
    for n in case.nodes:
        for t in periods:
            coeffs = []
            for g in case.gens_at(n.id):
                coeffs.append((vm.p[(g.id, t)], 1.0))
            for j in case.loads_at(n.id):
                coeffs.append((vm.d[(j.id, t)], -1.0))
            for l in case.lines:
                if l.rec == n.id:
                    coeffs.append((vm.f_plus[(l.id, t)], 1.0))
                    coeffs.append((vm.f_minus[(l.id, t)], -1.0))
                if l.snd == n.id:
                    coeffs.append((vm.f_plus[(l.id, t)], -1.0))
                    coeffs.append((vm.f_minus[(l.id, t)], 1.0))
            for v in case.links_out(n.id, t):
                coeffs.extend(link_cols(v, 1.0))
            for v in case.links_in(n.id, t):
                coeffs.extend(link_cols(v, -1.0))
            cm.balance[(n.id, t)] = add_eq(f"bal[{n.id},t{t}]", coeffs, 0.0)

    for l in case.lines:
        B = l.susceptance
        for t in periods:
            cm.dcflow[(l.id, t)] = add_eq(
                f"dc[{l.id},t{t}]",
                [(vm.f_plus[(l.id, t)], 1.0), (vm.f_minus[(l.id, t)], -1.0),
                 (vm.theta[(l.snd, t)], -B), (vm.theta[(l.rec, t)], B)],
                0.0)

    # ramping couples consecutive periods only; the first period dispatch
    # is not tied to any initial condition
    for g in case.generators:
        if g.ramp_limit is None:
            continue
        for t in range(1, T):
            up = add_ineq(f"ramp+[{g.id},t{t}]",
                          [(vm.p[(g.id, t + 1)], 1.0), (vm.p[(g.id, t)], -1.0)],
                          g.ramp_limit)
            dn = add_ineq(f"ramp-[{g.id},t{t}]",
                          [(vm.p[(g.id, t)], 1.0), (vm.p[(g.id, t + 1)], -1.0)],
                          g.ramp_limit)
            cm.ramp_up[(g.id, t)] = up
            cm.ramp_dn[(g.id, t)] = dn

    # absorbed load d_hat(n,t) = local served load + shifts in - shifts out;
    # rows only where a finite data-center capacity is declared
    for n in case.nodes:
        for t in periods:
            cap = case.dc_capacity_at(n.id, t)
            if math.isinf(cap):
                continue
            coeffs = [(vm.d[(j.id, t)], 1.0) for j in case.loads_at(n.id)]
            for v in case.links_in(n.id, t):
                coeffs.extend(link_cols(v, 1.0))
            for v in case.links_out(n.id, t):
                coeffs.extend(link_cols(v, -1.0))
            cm.absorb_hi[(n.id, t)] = add_ineq(
                f"abs_hi[{n.id},t{t}]", coeffs, cap)
            cm.absorb_lo[(n.id, t)] = add_ineq(
                f"abs_lo[{n.id},t{t}]", [(c, -k) for c, k in coeffs], 0.0)

    if has_lines:
        ref_node = case.nodes[0].id
        for t in periods:
            cm.refangle[t] = add_eq(
                f"ref[t{t}]", [(vm.theta[(ref_node, t)], 1.0)], 0.0)

    lp = LinearProgram(
        col_names=tuple(names),
        lo=np.array(lo), hi=np.array(hi), c=np.array(obj),
        A=(np.vstack(eq_rows) if eq_rows else np.zeros((0, ncols))),
        b=np.array(eq_rhs),
        eq_names=tuple(eq_names),
        G=(np.vstack(ineq_rows) if ineq_rows else np.zeros((0, ncols))),
        h=np.array(ineq_rhs),
        ineq_names=tuple(ineq_names),
    )
    return lp, vm, cm


def recombine_flow(vm: VariableMap, x, line_id: str, t: int) -> float:
    return float(x[vm.f_plus[(line_id, t)]] - x[vm.f_minus[(line_id, t)]])


def recombine_shift(vm: VariableMap, x, link_id: str) -> float:
    val = 0.0
    if link_id in vm.dlt_plus:
        val += float(x[vm.dlt_plus[link_id]])
    if link_id in vm.dlt_minus:
        val -= float(x[vm.dlt_minus[link_id]])
    return val


def absorbed_load(case: CaseSpec, served: dict, shifts: dict,
                  node_id: str, t: int) -> float:
    """Physical load at (node, t): local served + shifts in - shifts out."""
    total = sum(served[(j.id, t)] for j in case.loads_at(node_id))
    total += sum(shifts[v.id] for v in case.links_in(node_id, t))
    total -= sum(shifts[v.id] for v in case.links_out(node_id, t))
    return total
