"""
Spatial load shifting on a three-bus network
============================================

Three buses, each with one generator and one data center, transmission
lines between every pair.  Buses 1 and 3 have cheap surplus generation;
bus 2 has surplus load but its import line is small.  A single entity
operates all three data centers and can move load between them over
non-physical "virtual" links.

This script sweeps the seven published scenarios of growing shift
capacity (and, at the end, falling shift cost) and shows the three
headline effects: welfare rises, more load is served, and nodal prices
homogenize until their differences equal the shift cost.
"""

from shiftmarket import case_3bus, clear, price_stats

print(__doc__)

header = f"{'scenario':>8} {'welfare':>9} {'prices':>22} {'shifts':>18} {'spread':>7}"
print(header)
print("-" * len(header))
for s in range(1, 8):
    sol = clear(case_3bus(s))
    stats = price_stats(sol)
    pi = ", ".join(f"{v:5.1f}" for v in sol.price_vector(1))
    dl = ", ".join(f"{v:5.1f}" for v in sol.shift_vector())
    print(f"{s:>8} {sol.welfare:>9g} [{pi}] [{dl}] {stats.spread[0]:>7.1f}")

print("""
Reading the table:

* Scenario 1 has no flexibility: the line into bus 2 congests at 5 MW,
  bus 2's load is curtailed to 42.5, and prices split to [10, 30, 18].
* Scenarios 2-4 open the shift bounds.  Load physically migrates to the
  cheap buses (negative shift on link (1,2) means bus 2's load runs at
  bus 1), every requested MWh is served, and the price spread collapses
  from 20 to 3 $/MWh.
* Scenario 5 proves extra capacity beyond the binding level is inert:
  its clearing is identical to scenario 4.  The residual 3 $/MWh gap is
  exactly the shift bid: the price difference between two nodes joined
  by an interior virtual link cannot exceed the cost of shifting.
* Scenarios 6-7 cut the shift cost below the 2 $/MWh line tariff: the
  network stops carrying power entirely (f = 0) and with a free shift
  the prices become fully uniform at 20 $/MWh.
""")

sol4 = clear(case_3bus(4))
print("absorbed load in scenario 4 (requested 40/45/40):",
      [round(sol4.absorbed[(n, 1)], 1) for n in ("n1", "n2", "n3")])
print("bus 1 physically serves 45 MWh although only 40 was requested there —")
print("the virtual link reassigned where the load is absorbed, not how much.")
