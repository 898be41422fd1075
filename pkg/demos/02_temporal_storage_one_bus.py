"""
Temporal shifting as storage on a one-bus system
================================================

A single bus over five hourly periods.  The generator can move its
output by at most 20 MW between consecutive hours, which is the temporal
twin of a congested line.  The data center may delay load along a chain
of forward virtual links t1->t2 -> ... -> t4->t5: the link flows behave
exactly like a storage state that carries unmet demand into the future.

Scenario 1 (no flexibility) shows ramping congestion at its ugliest: the
tiny 20 MWh demand valley at t2 pins the whole dispatch and produces a
NEGATIVE price of -30 $/MWh there, because one extra MWh consumed at t2
would let the generator ramp into the valuable hours around it.
"""

from shiftmarket import case_1bus_5t, clear, congestion_report, gap_check

print(__doc__)

for s in (1, 3, 7):
    sol = clear(case_1bus_5t(s))
    pi = [round(sol.prices[("n1", t)], 1) for t in range(1, 6)]
    d = [round(sol.served[("d1", t)], 1) for t in range(1, 6)]
    p = [round(sol.dispatch[("g1", t)], 1) for t in range(1, 6)]
    print(f"scenario {s}: welfare {sol.welfare:g}")
    print(f"  prices    {pi}")
    print(f"  served    {d}")
    print(f"  dispatch  {p}")
    print(f"  shifts    {[round(v, 1) for v in sol.shift_vector()]}")

print("\nCongestion in scenario 1:")
print(congestion_report(clear(case_1bus_5t(1))).to_text())

print("Storage recursion check (scenario 5): the flow on the link leaving")
print("each period equals the accumulated unmet demand so far:")
sol = clear(case_1bus_5t(5))
carry = 0.0
for t in range(1, 5):
    unmet = sol.served[("d1", t)] - sol.absorbed[("n1", t)]
    carry += unmet
    flow = sol.shifts[f"w{t}{t+1}"]
    print(f"  t{t}: unmet {unmet:+6.1f}  carried state {carry:6.1f}"
          f"  == link flow {flow:6.1f}")

print("""
One-sidedness: loads shift forward in time only, so a cheap PAST period
cannot be exploited from the future.  In scenario 4 the price at t3 (40)
towers over t2 (20), yet the t2->t3 link stays at zero: shifting forward
would move consumption from cheap to expensive.  The gap check below
verifies the resulting one-sided price inequality on every link.
""")
for e in gap_check(clear(case_1bus_5t(4))):
    print(f"  {e.link_id}: shift {e.shift:5.1f}  gap {e.price_gap:+6.1f}  "
          f"{e.status:9s}  {'ok' if e.passed else 'VIOLATED'}")
