"""Domain types for a space-time market instance, plus validation.

A case lives on a graph of geographical nodes crossed with a contiguous
horizon of periods 1..T.  Per-period parameters (capacities, bids) are
stored as length-T tuples; case constructors and the case-file reader
accept scalars and broadcast them.  Virtual links are arcs between
space-time coordinates (node, period) along which an entity may shift
load; signed flow within [lower, upper] bounds.

All types are immutable after construction and safe to share across
threads; validation is a pure function returning diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Node:
    id: str
    label: str = ""


@dataclass(frozen=True)
class SpaceTimeIndex:
    """Coordinate (node id, period index) that variables and links live on."""

    node: str
    period: int


@dataclass(frozen=True)
class Generator:
    id: str
    node: str
    capacity: tuple      # MW per period, >= 0
    bid_cost: tuple      # $/MWh per period
    ramp_limit: float | None = None   # MW per step; None = unconstrained


@dataclass(frozen=True)
class Load:
    id: str
    node: str
    entity: str
    request: tuple       # MW per period, >= 0
    bid_value: tuple     # $/MWh per period


@dataclass(frozen=True)
class Line:
    id: str
    snd: str
    rec: str
    capacity: tuple      # MW per period, >= 0
    bid_cost: tuple      # $/MWh per period
    susceptance: float   # per-unit, > 0


@dataclass(frozen=True)
class Entity:
    """Owner/operator of a set of loads; may cap nodal absorbed load."""

    id: str
    loads: tuple = ()
    # node id -> per-period absorbed-load cap (MW); absent node = unbounded
    dc_capacity: dict = field(default_factory=dict)


@dataclass(frozen=True)
class VirtualLink:
    """Non-physical arc shifting load between two space-time coordinates."""

    id: str
    entity: str
    snd: SpaceTimeIndex
    rec: SpaceTimeIndex
    lower: float
    upper: float
    bid_cost: float

    @property
    def kind(self) -> str:
        if self.snd.period == self.rec.period:
            return "spatial"
        if self.snd.node == self.rec.node:
            return "temporal"
        return "spatiotemporal"

    @property
    def forward_only(self) -> bool:
        """True when the flow cannot reverse (lower bound >= 0)."""
        return self.lower >= 0.0

    @property
    def fixed(self) -> bool:
        return self.lower == self.upper


@dataclass(frozen=True)
class CaseSpec:
    name: str
    nodes: tuple
    num_periods: int
    generators: tuple = ()
    loads: tuple = ()
    lines: tuple = ()
    entities: tuple = ()
    virtual_links: tuple = ()
    description: str = ""

    def periods(self) -> range:
        return range(1, self.num_periods + 1)

    def node_ids(self) -> tuple:
        return tuple(n.id for n in self.nodes)

    def gens_at(self, node_id: str):
        return [g for g in self.generators if g.node == node_id]

    def loads_at(self, node_id: str):
        return [j for j in self.loads if j.node == node_id]

    def links_out(self, node_id: str, t: int):
        return [v for v in self.virtual_links
                if v.snd.node == node_id and v.snd.period == t]

    def links_in(self, node_id: str, t: int):
        return [v for v in self.virtual_links
                if v.rec.node == node_id and v.rec.period == t]

    def dc_capacity_at(self, node_id: str, t: int) -> float:
        """Absorbed-load cap at (node, t); +inf when no entity declares one."""
        for e in self.entities:
            if node_id in e.dc_capacity:
                return e.dc_capacity[node_id][t - 1]
        return math.inf


@dataclass(frozen=True)
class Diagnostic:
    entity: str            # id of the offending object ("" for case-level)
    rule: str
    message: str

    def __str__(self):
        return f"[{self.entity or 'case'}] {self.rule}: {self.message}"


def per_period(value, num_periods: int, what: str = "value") -> tuple:
    """Broadcast a scalar over the horizon, or check an array length."""
    if isinstance(value, (int, float)):
        return (float(value),) * num_periods
    seq = tuple(float(v) for v in value)
    if len(seq) != num_periods:
        raise ValueError(
            f"{what}: expected scalar or {num_periods} per-period values, "
            f"got {len(seq)}"
        )
    return seq


def validate(case: CaseSpec) -> list:
    """Check every invariant; empty list means the case is well formed.

    Total: never raises on any constructed CaseSpec.
    """
    diags = []

    def bad(entity, rule, message):
        diags.append(Diagnostic(entity, rule, message))

    if case.num_periods < 1:
        bad("", "periods >= 1", f"num_periods = {case.num_periods}")
    if not case.nodes:
        bad("", "at least one node", "case has no nodes")

    node_ids = set()
    for n in case.nodes:
        if n.id in node_ids:
            bad(n.id, "ids unique", "duplicate node id")
        node_ids.add(n.id)

    seen = set(node_ids)
    T = max(case.num_periods, 1)

    def check_unique(obj_id):
        if obj_id in seen:
            bad(obj_id, "ids unique", "duplicate id")
        seen.add(obj_id)

    def check_series(obj_id, name, series, nonneg=True):
        if len(series) != T:
            bad(obj_id, "per-period length", f"{name} has {len(series)} values")
            return
        for t, v in enumerate(series, start=1):
            if not math.isfinite(v):
                bad(obj_id, f"{name} finite", f"{name}[{t}] = {v}")
            elif nonneg and v < 0:
                bad(obj_id, f"{name} >= 0", f"{name}[{t}] = {v}")

    entity_ids = {e.id for e in case.entities}

    for g in case.generators:
        check_unique(g.id)
        if g.node not in node_ids:
            bad(g.id, "unknown reference", f"generator at nonexistent node {g.node!r}")
        check_series(g.id, "capacity", g.capacity)
        check_series(g.id, "bid_cost", g.bid_cost, nonneg=False)
        if g.ramp_limit is not None and g.ramp_limit < 0:
            bad(g.id, "ramp_limit >= 0", f"ramp_limit = {g.ramp_limit}")

    load_to_entity = {}
    for j in case.loads:
        check_unique(j.id)
        load_to_entity[j.id] = j.entity
        if j.node not in node_ids:
            bad(j.id, "unknown reference", f"load at nonexistent node {j.node!r}")
        if j.entity not in entity_ids:
            bad(j.id, "unknown reference", f"load names nonexistent entity {j.entity!r}")
        check_series(j.id, "request", j.request)
        check_series(j.id, "bid_value", j.bid_value, nonneg=False)

    for l in case.lines:
        check_unique(l.id)
        if l.snd == l.rec:
            bad(l.id, "snd != rec", "line endpoints coincide")
        for end in (l.snd, l.rec):
            if end not in node_ids:
                bad(l.id, "unknown reference", f"line endpoint {end!r} unknown")
        check_series(l.id, "capacity", l.capacity)
        check_series(l.id, "bid_cost", l.bid_cost, nonneg=False)
        if not (math.isfinite(l.susceptance) and l.susceptance > 0):
            bad(l.id, "susceptance > 0", f"B = {l.susceptance}")

    dc_cap_owners = {}
    for e in case.entities:
        check_unique(e.id)
        for lid in e.loads:
            if lid not in load_to_entity:
                bad(e.id, "unknown reference", f"entity lists nonexistent load {lid!r}")
            elif load_to_entity[lid] != e.id:
                bad(e.id, "load names this entity",
                    f"load {lid!r} belongs to {load_to_entity[lid]!r}")
        for node, series in e.dc_capacity.items():
            if node not in node_ids:
                bad(e.id, "unknown reference", f"dc_capacity at unknown node {node!r}")
            if node in dc_cap_owners and dc_cap_owners[node] != e.id:
                bad(e.id, "one dc_capacity per node",
                    f"node {node!r} capacity also declared by {dc_cap_owners[node]!r}")
            dc_cap_owners[node] = e.id
            check_series(e.id, "dc_capacity", series)

    for v in case.virtual_links:
        check_unique(v.id)
        if v.entity not in entity_ids:
            bad(v.id, "unknown reference", f"link names nonexistent entity {v.entity!r}")
        if v.snd == v.rec:
            bad(v.id, "no self-link", "load cannot be sent and received at the "
                                      "same space-time node")
        for end, side in ((v.snd, "snd"), (v.rec, "rec")):
            if end.node not in node_ids:
                bad(v.id, "unknown reference", f"{side} node {end.node!r} unknown")
            if not 1 <= end.period <= case.num_periods:
                bad(v.id, "period in range", f"{side} period {end.period} outside "
                                             f"1..{case.num_periods}")
        if not (math.isfinite(v.lower) and math.isfinite(v.upper)):
            bad(v.id, "bounds finite", f"[{v.lower}, {v.upper}]")
        elif v.lower > v.upper:
            bad(v.id, "bounds ordered", f"lower {v.lower} > upper {v.upper}")
        if not (math.isfinite(v.bid_cost) and v.bid_cost >= 0):
            bad(v.id, "bid_cost >= 0", f"cost = {v.bid_cost}")

    return diags
