"""
The LP core: duals, reduced costs, certificates
===============================================

Everything upstream rests on the bounded-variable simplex in
`shiftmarket.lp`, so this demo pokes it directly.

The toy below is a one-node market: maximize 40 d - 10 p subject to the
balance p - d = 0 with 0 <= p <= 50 and 0 <= d <= 40.  Enumerating the
two candidate vertices by hand (d = 0 or d = 40) gives the optimum
d = p = 40 with objective 1200, and the balance dual — the marginal
value of demand, i.e. the price — is the generator bid, 10.
"""

import numpy as np

from shiftmarket import LinearProgram, check_certificate, solve

print(__doc__)

lp = LinearProgram(
    col_names=("d", "p"),
    lo=[0.0, 0.0], hi=[40.0, 50.0],
    c=[40.0, -10.0],
    A=[[-1.0, 1.0]], b=[0.0], eq_names=("balance",),
)
sol = solve(lp)
print(f"status     {sol.status}")
print(f"objective  {sol.objective:g}")
print(f"primal     d = {sol.x[0]:g}, p = {sol.x[1]:g}")
print(f"price      {sol.y_eq[0]:g}   (dual of the balance row)")
print(f"reduced costs  d: {sol.reduced_costs[0]:g}, p: {sol.reduced_costs[1]:g}")
print("d sits at its upper bound with reduced cost 30: one more MW of")
print("demand capacity would be worth its bid 40 minus the price 10.\n")

report = check_certificate(lp, sol)
print("certificate:", report.summary())

print("""
Tampering with the solution must be caught.  Nudging the dispatch by
one part in a thousand breaks primal feasibility; bumping the dual of a
slack row breaks complementary slackness:""")
broken = solve(lp)
broken.x = broken.x.copy()
broken.x[1] += 1e-3
print("  perturbed primal :", check_certificate(lp, broken).summary())

print("""
And the solver agrees with brute force.  A random bounded LP with three
rows is solved both by the simplex and by enumerating every basis and
bound pattern:""")
rng = np.random.default_rng(5)
A = rng.integers(-3, 4, size=(3, 5)).astype(float)
lo = np.full(5, -2.0)
hi = np.full(5, 4.0)
c = rng.integers(-5, 6, size=5).astype(float)
x0 = lo + rng.random(5) * (hi - lo)
lp2 = LinearProgram(col_names=tuple("vwxyz"), lo=lo, hi=hi, c=c, A=A, b=A @ x0)
sol2 = solve(lp2)

from itertools import combinations, product
best = -np.inf
for basis in combinations(range(5), 3):
    B = A[:, basis]
    if abs(np.linalg.det(B)) < 1e-10:
        continue
    for pattern in product((0, 1), repeat=2):
        x = np.empty(5)
        nonbasic = [j for j in range(5) if j not in basis]
        for j, side in zip(nonbasic, pattern):
            x[j] = hi[j] if side else lo[j]
        x[list(basis)] = np.linalg.solve(B, lp2.b - A[:, nonbasic] @ x[nonbasic])
        if np.all(x >= lo - 1e-9) and np.all(x <= hi + 1e-9):
            best = max(best, float(c @ x))
print(f"  simplex objective        {sol2.objective:.12g}")
print(f"  vertex-enumeration best  {best:.12g}")
print(f"  difference               {abs(sol2.objective - best):.2e}")
