"""Price-dispersion statistics and diagnostic checks over clearing solutions.

The per-period statistics quantify how homogeneous nodal prices are at
each time point: population variance and standard deviation, mean
absolute deviation about the per-period mean, min/max and spread.  The
"variance" reported in dollar units by the source figures is the
standard deviation; both are exposed.

`congestion_report` lists every binding capacity (lines, generator
ramps, shift bounds) plus negative-price space-time nodes, and
`gap_check` verifies the complementary-slackness price-gap inequalities
on the virtual links: a link strictly inside its bounds admits
|pi_rec - pi_snd| <= shift cost; forward-only links are checked
one-sided, in the shift direction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clearing import ClearingSolution
from .netmodel import CaseSpec

_NEG_PRICE_TOL = 1e-9


@dataclass
class PriceStats:
    periods: tuple
    sigma2: tuple        # population variance of nodal prices per period
    sigma: tuple
    mad: tuple           # mean |pi_n - mean(pi)| per period
    pmin: tuple
    pmax: tuple
    spread: tuple        # max - min per period
    node_ids: tuple
    node_spread: tuple   # per-node max - min over the horizon

    def to_csv(self) -> str:
        """Long format: one row per (metric, period)."""
        series = (("sigma2", self.sigma2), ("sigma", self.sigma),
                  ("mad", self.mad), ("min", self.pmin), ("max", self.pmax),
                  ("spread", self.spread))
        rows = ["metric,period,value"]
        for name, values in series:
            for t, v in zip(self.periods, values):
                rows.append(f"{name},{t},{v:.10g}")
        return "\n".join(rows) + "\n"

    def to_long_rows(self, sol: ClearingSolution) -> list:
        """Plot-ready (period, node, price) tuples."""
        return [(t, n, sol.prices[(n, t)])
                for t in self.periods for n in self.node_ids]


def price_stats(sol: ClearingSolution) -> PriceStats:
    c = sol.case
    periods = tuple(c.periods())
    node_ids = c.node_ids()
    sigma2, sigma, mad, pmin, pmax, spread = [], [], [], [], [], []
    for t in periods:
        pi = np.array([sol.prices[(n, t)] for n in node_ids])
        mu = float(pi.mean())
        var = float(((pi - mu) ** 2).mean())
        sigma2.append(var)
        sigma.append(var ** 0.5)
        mad.append(float(np.abs(pi - mu).mean()))
        pmin.append(float(pi.min()))
        pmax.append(float(pi.max()))
        spread.append(float(pi.max() - pi.min()))
    node_spread = []
    for n in node_ids:
        series = [sol.prices[(n, t)] for t in periods]
        node_spread.append(max(series) - min(series))
    return PriceStats(
        periods=periods, sigma2=tuple(sigma2), sigma=tuple(sigma),
        mad=tuple(mad), pmin=tuple(pmin), pmax=tuple(pmax),
        spread=tuple(spread), node_ids=node_ids, node_spread=tuple(node_spread),
    )


@dataclass
class CongestionReport:
    binding_lines: list      # (line_id, t, flow, capacity)
    binding_ramps: list      # (gen_id, t, |p_{t+1}-p_t|, limit)
    binding_shifts: list     # (link_id, shift, bound_hit)
    negative_prices: list    # (node_id, t, price)

    @property
    def is_empty(self) -> bool:
        return not (self.binding_lines or self.binding_ramps
                    or self.binding_shifts or self.negative_prices)

    def to_text(self) -> str:
        if self.is_empty:
            return "no binding constraints, no negative prices\n"
        out = []
        for lid, t, f, cap in self.binding_lines:
            out.append(f"line {lid} binding at t{t}: |{f:g}| = cap {cap:g}")
        for gid, t, diff, lim in self.binding_ramps:
            out.append(f"ramp {gid} binding t{t}->t{t+1}: |dp| = {diff:g} = {lim:g}")
        for vid, dlt, bound in self.binding_shifts:
            out.append(f"shift {vid} at bound: delta = {dlt:g} ({bound})")
        for nid, t, pi in self.negative_prices:
            out.append(f"negative price at ({nid}, t{t}): {pi:g}")
        return "\n".join(out) + "\n"


def congestion_report(sol: ClearingSolution, case: CaseSpec | None = None,
                      tol: float = 1e-7) -> CongestionReport:
    case = case or sol.case
    binding_lines = []
    for l in case.lines:
        for t in case.periods():
            f = sol.flows[(l.id, t)]
            cap = l.capacity[t - 1]
            if cap - abs(f) <= tol:
                binding_lines.append((l.id, t, f, cap))

    binding_ramps = []
    for g in case.generators:
        if g.ramp_limit is None:
            continue
        for t in range(1, case.num_periods):
            diff = abs(sol.dispatch[(g.id, t + 1)] - sol.dispatch[(g.id, t)])
            if g.ramp_limit - diff <= tol:
                binding_ramps.append((g.id, t, diff, g.ramp_limit))

    binding_shifts = []
    for v in case.virtual_links:
        if v.fixed:
            continue   # a single-point interval cannot be congestion
        dlt = sol.shifts[v.id]
        if dlt - v.lower <= tol:
            binding_shifts.append((v.id, dlt, "lower"))
        elif v.upper - dlt <= tol:
            binding_shifts.append((v.id, dlt, "upper"))

    negative_prices = [
        (n.id, t, sol.prices[(n.id, t)])
        for n in case.nodes for t in case.periods()
        if sol.prices[(n.id, t)] < -_NEG_PRICE_TOL
    ]
    return CongestionReport(binding_lines, binding_ramps, binding_shifts,
                            negative_prices)


@dataclass
class GapCheckEntry:
    link_id: str
    shift: float
    price_gap: float          # pi_rec - pi_snd
    cost: float
    status: str               # "fixed" | "at_lower" | "at_upper" | "interior"
    one_sided: bool
    passed: bool
    detail: str = ""


def gap_check(sol: ClearingSolution, case: CaseSpec | None = None,
              tol: float = 1e-8) -> list:
    """Price-gap complementary-slackness checks, one entry per link.

    These inequalities follow from the dual certificate, so they hold for
    every optimal solution:

      interior shift           |gap| <= cost   (two-sided links)
      interior / at-zero       pi_snd - pi_rec <= cost  (forward links,
                               gap taken in the shift direction)
      saturated at a bound     gap in the active direction >= cost
    """
    case = case or sol.case
    entries = []
    for v in case.virtual_links:
        pi_snd = sol.prices[(v.snd.node, v.snd.period)]
        pi_rec = sol.prices[(v.rec.node, v.rec.period)]
        gap = pi_rec - pi_snd
        dlt = sol.shifts[v.id]
        cost = v.bid_cost

        if v.fixed:
            entries.append(GapCheckEntry(v.id, dlt, gap, cost, "fixed",
                                         v.forward_only, True,
                                         "single-point bounds, no condition"))
            continue

        at_lower = dlt - v.lower <= tol * (1 + abs(v.lower))
        at_upper = v.upper - dlt <= tol * (1 + abs(v.upper))
        status = "at_lower" if at_lower else ("at_upper" if at_upper
                                              else "interior")
        if status == "interior":
            if v.forward_only:
                passed = -gap <= cost + tol
                detail = f"forward: pi_snd - pi_rec = {-gap:g} <= {cost:g}"
            else:
                passed = abs(gap) <= cost + tol
                detail = f"|gap| = {abs(gap):g} <= {cost:g}"
        elif status == "at_upper":
            # saturated forward shift: the gap in the shift direction
            # covers at least the cost
            passed = -gap >= cost - tol
            detail = f"saturated: pi_snd - pi_rec = {-gap:g} >= {cost:g}"
        else:
            if v.forward_only:
                # resting at zero: shifting forward must be unattractive
                passed = -gap <= cost + tol
                detail = f"at zero: pi_snd - pi_rec = {-gap:g} <= {cost:g}"
            else:
                # saturated in the reverse direction
                passed = gap >= cost - tol
                detail = f"saturated reverse: pi_rec - pi_snd = {gap:g} >= {cost:g}"
        entries.append(GapCheckEntry(v.id, dlt, gap, cost, status,
                                     v.forward_only, passed, detail))
    return entries


# -- exports ----------------------------------------------------------------

def prices_long_csv(sol: ClearingSolution) -> str:
    """(period, node, price) rows, plot-ready."""
    rows = ["period,node,price"]
    for t in sol.case.periods():
        for n in sol.case.node_ids():
            rows.append(f"{t},{n},{sol.prices[(n, t)]:.10g}")
    return "\n".join(rows) + "\n"


def svg_price_heatmap(sol: ClearingSolution, cell: int = 22) -> str:
    """Minimal static SVG heat map of nodal prices per period.

    Nodes run down the page, periods across; color ramps blue (lowest
    price) to red (highest).  No plotting library involved.
    """
    case = sol.case
    nodes = case.node_ids()
    periods = tuple(case.periods())
    values = np.array([[sol.prices[(n, t)] for t in periods] for n in nodes])
    vmin, vmax = float(values.min()), float(values.max())
    span = (vmax - vmin) or 1.0

    label_w = 6 * max(len(n) for n in nodes) + 12
    width = label_w + cell * len(periods) + 120
    height = cell * (len(nodes) + 1) + 30

    def color(v):
        frac = (v - vmin) / span
        r = int(255 * frac)
        b = int(255 * (1 - frac))
        g = int(80 * (1 - abs(2 * frac - 1)))
        return f"rgb({r},{g},{b})"

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" font-family="monospace" font-size="10">',
        f'<text x="2" y="12">{case.name}: nodal prices ($/MWh)</text>',
    ]
    y0 = 24
    for k, t in enumerate(periods):
        parts.append(f'<text x="{label_w + k * cell + 4}" y="{y0 - 4}">t{t}</text>')
    for i, n in enumerate(nodes):
        y = y0 + i * cell
        parts.append(f'<text x="2" y="{y + cell - 8}">{n}</text>')
        for k in range(len(periods)):
            v = values[i, k]
            x = label_w + k * cell
            parts.append(
                f'<rect x="{x}" y="{y}" width="{cell - 1}" height="{cell - 1}" '
                f'fill="{color(v)}"><title>{n} t{periods[k]}: {v:.2f}</title></rect>')
    legend_x = label_w + cell * len(periods) + 10
    parts.append(f'<text x="{legend_x}" y="{y0 + 10}">max {vmax:.2f}</text>')
    parts.append(f'<text x="{legend_x}" y="{y0 + 24}">min {vmin:.2f}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
