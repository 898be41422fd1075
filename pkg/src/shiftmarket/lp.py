"""Self-contained linear-programming core.

Standard form handled here:

    maximize    c'x
    subject to  A x  = b          (equality rows)
                G x <= h          (inequality rows)
                lo <= x <= hi     (lo may be -inf, hi may be +inf)

solved with a bounded-variable two-phase revised simplex over dense LU
factorizations.  Dual values are reported for every row under the
Lagrangian convention

    L(x, y) = c'x + y_eq'(A x - b) + y_ineq'(G x - h)

so that the dual of a nodal balance row written as (supply - demand) = 0
is directly the marginal value of one extra unit of demand (the LMP).
Under this convention the dual of a binding `<=` row is <= 0; the shadow
value of relaxing its right-hand side is the negated dual.  Reduced
costs are `z = c + A'y_eq + G'y_ineq`; at an optimum `z <= 0` holds for
columns at their lower bound, `z >= 0` at their upper bound, and
`z == 0` for columns strictly between bounds.

Everything is deterministic: identical inputs and options produce
bit-identical solutions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

_INF = float("inf")

# nonbasic column statuses
_AT_LO = 0
_AT_HI = 1
_FREE = 2
_BASIC = 3


class LpError(Exception):
    """Base class for LP-layer failures."""


class NumericalError(LpError):
    """Factorization or residual degraded beyond tolerance.

    Carries the iteration count at which the failure was detected.
    """

    def __init__(self, message: str, iteration: int):
        super().__init__(f"{message} (iteration {iteration})")
        self.iteration = iteration


@dataclass
class LinearProgram:
    """Dense standard-form LP with named rows and columns (maximization)."""

    col_names: tuple
    lo: np.ndarray
    hi: np.ndarray
    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    eq_names: tuple = ()
    G: np.ndarray | None = None
    h: np.ndarray | None = None
    ineq_names: tuple = ()

    def __post_init__(self):
        self.col_names = tuple(self.col_names)
        n = len(self.col_names)
        if n < 1:
            raise ValueError("LP needs at least one column")
        self.lo = np.asarray(self.lo, dtype=float).reshape(n)
        self.hi = np.asarray(self.hi, dtype=float).reshape(n)
        self.c = np.asarray(self.c, dtype=float).reshape(n)
        if np.any(self.lo > self.hi):
            bad = int(np.argmax(self.lo > self.hi))
            raise ValueError(f"column {self.col_names[bad]!r} has lo > hi")
        self.A = np.asarray(self.A, dtype=float).reshape(-1, n)
        self.b = np.asarray(self.b, dtype=float).reshape(self.A.shape[0])
        self.eq_names = tuple(self.eq_names) or tuple(
            f"eq{i}" for i in range(self.A.shape[0])
        )
        if len(self.eq_names) != self.A.shape[0]:
            raise ValueError("eq_names length mismatch")
        if self.G is None:
            self.G = np.zeros((0, n))
            self.h = np.zeros(0)
        self.G = np.asarray(self.G, dtype=float).reshape(-1, n)
        self.h = np.asarray(self.h, dtype=float).reshape(self.G.shape[0])
        self.ineq_names = tuple(self.ineq_names) or tuple(
            f"ineq{i}" for i in range(self.G.shape[0])
        )
        if len(self.ineq_names) != self.G.shape[0]:
            raise ValueError("ineq_names length mismatch")
        if not (np.all(np.isfinite(self.b)) and np.all(np.isfinite(self.h))):
            raise ValueError("right-hand sides must be finite")
        self._col_index = {name: j for j, name in enumerate(self.col_names)}
        if len(self._col_index) != n:
            raise ValueError("column names must be unique")

    @property
    def num_cols(self) -> int:
        return len(self.col_names)

    def col(self, name: str) -> int:
        return self._col_index[name]

    def to_lp_text(self) -> str:
        """Debug dump in CPLEX LP text format (developer aid)."""
        def term(coef, name, first):
            sign = "-" if coef < 0 else ("" if first else "+")
            return f" {sign} {abs(coef):.17g} {name}" if not first else (
                f"{'-' if coef < 0 else ''}{abs(coef):.17g} {name}")

        def expr(row):
            parts, first = [], True
            for j, coef in enumerate(row):
                if coef == 0.0:
                    continue
                parts.append(term(coef, self.col_names[j], first))
                first = False
            return "".join(parts) if parts else "0 " + self.col_names[0]

        out = ["Maximize", " obj: " + expr(self.c), "Subject To"]
        for i in range(self.A.shape[0]):
            out.append(f" {self.eq_names[i]}: {expr(self.A[i])} = {self.b[i]:.17g}")
        for i in range(self.G.shape[0]):
            out.append(f" {self.ineq_names[i]}: {expr(self.G[i])} <= {self.h[i]:.17g}")
        out.append("Bounds")
        for j, name in enumerate(self.col_names):
            lo, hi = self.lo[j], self.hi[j]
            if lo == -_INF and hi == _INF:
                out.append(f" {name} free")
            elif lo == -_INF:
                out.append(f" -inf <= {name} <= {hi:.17g}")
            elif hi == _INF:
                out.append(f" {name} >= {lo:.17g}")
            else:
                out.append(f" {lo:.17g} <= {name} <= {hi:.17g}")
        out.append("End")
        return "\n".join(out) + "\n"


@dataclass
class SolveOptions:
    """Solver tolerances and pivot rule.

    The defaults are the documented package-wide tolerances; override
    per call when an application needs looser or tighter numerics.
    """

    tol_feas: float = 1e-9
    tol_dual: float = 1e-9
    tol_gap: float = 1e-8
    tol_pivot: float = 1e-9
    pivot: str = "dantzig"   # "dantzig" (largest reduced cost) | "bland"
    max_iter: int = 50_000
    stall_iters: int = 64    # degenerate steps before Bland fallback kicks in


@dataclass
class LpSolution:
    status: str                       # "optimal" | "infeasible" | "unbounded"
    objective: float | None = None
    x: np.ndarray | None = None
    y_eq: np.ndarray | None = None
    y_ineq: np.ndarray | None = None
    reduced_costs: np.ndarray | None = None
    iterations: int = 0
    phase1_iterations: int = 0
    primal_degenerate: bool = False
    dual_degenerate: bool = False


@dataclass
class CertificateReport:
    """Residuals of an optimality certificate, recomputed from scratch."""

    max_eq_residual: float
    max_ineq_violation: float
    max_bound_violation: float
    max_dual_violation: float
    max_cs_violation: float
    duality_gap: float
    ok: bool

    def summary(self) -> str:
        flag = "OK" if self.ok else "VIOLATED"
        return (
            f"certificate {flag}: eq={self.max_eq_residual:.3e} "
            f"ineq={self.max_ineq_violation:.3e} bnd={self.max_bound_violation:.3e} "
            f"dual={self.max_dual_violation:.3e} cs={self.max_cs_violation:.3e} "
            f"gap={self.duality_gap:.3e}"
        )


class _Tableau:
    """Working state of the bounded-variable revised simplex.

    Columns: [structural | slacks for G-rows | artificials].  Artificial
    bounds are pinned to [0, 0] after phase 1 so redundant rows stay
    harmlessly represented in the basis.
    """

    def __init__(self, lp: LinearProgram, opts: SolveOptions):
        self.opts = opts
        n, m_eq, m_in = lp.num_cols, lp.A.shape[0], lp.G.shape[0]
        self.n_struct = n
        self.m = m = m_eq + m_in
        self.n_slack = m_in

        A = np.zeros((m, n + m_in + m))
        A[:m_eq, :n] = lp.A
        A[m_eq:, :n] = lp.G
        A[m_eq:, n:n + m_in] = np.eye(m_in)
        self.b = np.concatenate([lp.b, lp.h])

        self.lo = np.concatenate([lp.lo, np.zeros(m_in), np.zeros(m)])
        self.hi = np.concatenate([lp.hi, np.full(m_in, _INF), np.full(m, _INF)])

        # initial nonbasic point: finite bound nearest zero, free vars at 0
        x0 = np.zeros(n + m_in)
        status = np.empty(n + m_in + m, dtype=np.int8)
        for j in range(n + m_in):
            if self.lo[j] > -_INF:
                x0[j], status[j] = self.lo[j], _AT_LO
            elif self.hi[j] < _INF:
                x0[j], status[j] = self.hi[j], _AT_HI
            else:
                x0[j], status[j] = 0.0, _FREE

        resid = self.b - A[:, :n + m_in] @ x0
        for i in range(m):
            A[i, n + m_in + i] = 1.0 if resid[i] >= 0 else -1.0
        status[n + m_in:] = _BASIC

        self.A = A
        self.status = status
        self.basis = list(range(n + m_in, n + m_in + m))
        self.art0 = n + m_in
        self.x = np.concatenate([x0, np.abs(resid)])
        self.iterations = 0

    # -- linear algebra ------------------------------------------------

    def _factorize(self):
        if self.m == 0:
            return None
        B = self.A[:, self.basis]
        try:
            lu = sla.lu_factor(B, check_finite=False)
        except (sla.LinAlgError, ValueError) as exc:
            raise NumericalError(f"singular basis: {exc}", self.iterations)
        if np.min(np.abs(np.diag(lu[0]))) < 1e-13:
            raise NumericalError("basis factorization lost rank", self.iterations)
        return lu

    def _refresh_basic_values(self, lu):
        if self.m == 0:
            return
        nb_mask = self.status != _BASIC
        rhs = self.b - self.A[:, nb_mask] @ self.x[nb_mask]
        xb = sla.lu_solve(lu, rhs, check_finite=False)
        if not np.all(np.isfinite(xb)):
            raise NumericalError("non-finite basic solution", self.iterations)
        self.x[self.basis] = xb

    def _duals(self, c):
        lu = self._factorize()
        if self.m == 0:
            return lu, np.zeros(0)
        y = sla.lu_solve(lu, c[self.basis], trans=1, check_finite=False)
        return lu, y

    # -- simplex loop ----------------------------------------------------

    def run(self, c, phase1: bool) -> str:
        """Iterate to optimality for objective c.  Returns a status string."""
        opts = self.opts
        bland = opts.pivot == "bland"
        stall = 0
        while True:
            if self.iterations > opts.max_iter:
                raise NumericalError("iteration limit exceeded", self.iterations)
            lu, y = self._duals(c)
            self._refresh_basic_values(lu)
            z = c - self.A.T @ y

            q, direction = self._entering(z, bland)
            if q is None:
                return "optimal"

            if self.m == 0:
                w = np.zeros(0)
            else:
                w = sla.lu_solve(lu, self.A[:, q], check_finite=False)
            step, leave_pos, leave_bound = self._ratio_test(q, direction, w)
            if step == _INF:
                return "unbounded"   # cannot happen in phase 1

            self.iterations += 1
            if leave_pos is None:
                # bound flip: q jumps to its opposite bound, basis unchanged
                self.x[q] = self.hi[q] if direction > 0 else self.lo[q]
                self.status[q] = _AT_HI if direction > 0 else _AT_LO
            else:
                leaving = self.basis[leave_pos]
                self.x[q] = self.x[q] + direction * step
                self.basis[leave_pos] = q
                self.status[q] = _BASIC
                self.status[leaving] = leave_bound
                self.x[leaving] = (
                    self.lo[leaving] if leave_bound == _AT_LO else self.hi[leaving]
                )

            # Bland's rule fallback after a degenerate stall, back to the
            # faster rule once the objective moves again
            if step <= opts.tol_pivot:
                stall += 1
                if stall >= opts.stall_iters:
                    bland = True
            else:
                stall = 0
                bland = opts.pivot == "bland"

    def _entering(self, z, bland):
        tol = self.opts.tol_pivot
        best, best_score, best_dir = None, tol, 0
        for j in range(len(z)):
            st = self.status[j]
            if st == _BASIC or self.lo[j] == self.hi[j]:
                continue
            zj = z[j]
            if (st == _AT_LO or st == _FREE) and zj > tol:
                score, d = zj, 1
            elif (st == _AT_HI or st == _FREE) and zj < -tol:
                score, d = -zj, -1
            else:
                continue
            if bland:
                return j, d
            if score > best_score:
                best, best_score, best_dir = j, score, d
        return best, best_dir

    def _ratio_test(self, q, direction, w):
        """Largest t >= 0 with x_q moving by direction*t staying feasible.

        Returns (t, basis_position_leaving | None, bound_reached); a None
        position with finite t is a bound flip of the entering column.
        """
        eps = 1e-11
        best_t = _INF
        if direction > 0 and self.hi[q] < _INF:
            best_t = self.hi[q] - self.x[q]
        elif direction < 0 and self.lo[q] > -_INF:
            best_t = self.x[q] - self.lo[q]
        leave_pos, leave_bound = None, _AT_LO

        for pos in range(self.m):
            delta = direction * w[pos]
            if abs(delta) <= eps:
                continue
            k = self.basis[pos]
            xk = self.x[k]
            if delta > 0:         # basic variable decreases toward its lo
                if self.lo[k] == -_INF:
                    continue
                t = (xk - self.lo[k]) / delta
                bound = _AT_LO
            else:                 # basic variable increases toward its hi
                if self.hi[k] == _INF:
                    continue
                t = (xk - self.hi[k]) / delta
                bound = _AT_HI
            if t < -1e-9:
                t = 0.0
            # strict improvement, ties broken by smallest column index for
            # determinism (and Bland compatibility)
            if t < best_t - eps or (
                t < best_t + eps
                and leave_pos is not None
                and k < self.basis[leave_pos]
            ):
                best_t, leave_pos, leave_bound = max(t, 0.0), pos, bound

        return best_t, leave_pos, leave_bound


def solve(lp: LinearProgram, opts: SolveOptions | None = None) -> LpSolution:
    """Solve an LP; returns primal values, row duals, and reduced costs.

    Pure function of its inputs: no shared state, deterministic pivoting.
    Raises NumericalError when the factorization or the final residual
    check degrades beyond tolerance.
    """
    opts = opts or SolveOptions()
    tab = _Tableau(lp, opts)
    nt = tab.art0 + tab.m

    # phase 1: drive artificial infeasibility to zero
    c1 = np.zeros(nt)
    c1[tab.art0:] = -1.0
    tab.run(c1, phase1=True)
    phase1_iters = tab.iterations
    lu, _ = tab._duals(c1)
    tab._refresh_basic_values(lu)
    art_sum = float(np.sum(tab.x[tab.art0:]))
    if art_sum > opts.tol_feas * (1.0 + float(np.max(np.abs(tab.b), initial=0.0))):
        return LpSolution(status="infeasible", iterations=tab.iterations,
                          phase1_iterations=phase1_iters)

    # pin artificials so redundant rows stay representable but inert
    tab.lo[tab.art0:] = 0.0
    tab.hi[tab.art0:] = 0.0
    tab.x[tab.art0:] = 0.0

    c2 = np.zeros(nt)
    c2[:tab.n_struct] = lp.c
    status = tab.run(c2, phase1=False)
    if status == "unbounded":
        return LpSolution(status="unbounded", iterations=tab.iterations,
                          phase1_iterations=phase1_iters)

    lu, y_star = tab._duals(c2)
    tab._refresh_basic_values(lu)
    z_all = c2 - tab.A.T @ y_star

    x = tab.x[:tab.n_struct].copy()
    m_eq = lp.A.shape[0]
    y_pub = -y_star                      # L = c'x + y'(Ax - b) convention
    objective = float(lp.c @ x)

    # final feasibility guard against numerical drift
    scale = 1.0 + float(np.max(np.abs(tab.b), initial=0.0))
    resid = tab.b - tab.A @ tab.x
    if float(np.max(np.abs(resid), initial=0.0)) > 1e3 * opts.tol_feas * scale:
        raise NumericalError("final residual above tolerance", tab.iterations)

    basic = tab.status == _BASIC
    with np.errstate(invalid="ignore"):
        dist = np.minimum(tab.x - tab.lo, tab.hi - tab.x)
    primal_degenerate = bool(
        np.any(basic[: tab.art0] & (np.nan_to_num(dist[: tab.art0], nan=_INF) < 1e-7))
    )
    nonbasic_live = (~basic[: tab.art0]) & (tab.lo[: tab.art0] != tab.hi[: tab.art0])
    dual_degenerate = bool(np.any(nonbasic_live & (np.abs(z_all[: tab.art0]) < 1e-7)))

    return LpSolution(
        status="optimal",
        objective=objective,
        x=x,
        y_eq=y_pub[:m_eq],
        y_ineq=y_pub[m_eq:],
        reduced_costs=z_all[: tab.n_struct].copy(),
        iterations=tab.iterations,
        phase1_iterations=phase1_iters,
        primal_degenerate=primal_degenerate,
        dual_degenerate=dual_degenerate,
    )


def check_certificate(lp: LinearProgram, sol: LpSolution,
                      opts: SolveOptions | None = None) -> CertificateReport:
    """Recompute feasibility, dual feasibility, complementary slackness and
    the duality gap of an optimal solution from scratch."""
    if sol.status != "optimal":
        raise ValueError("certificate checks need an optimal solution")
    opts = opts or SolveOptions()
    x, y_eq, y_ineq = sol.x, sol.y_eq, sol.y_ineq

    eq_resid = float(np.max(np.abs(lp.A @ x - lp.b), initial=0.0))
    ineq_viol = float(np.max(lp.G @ x - lp.h, initial=0.0))
    ineq_viol = max(ineq_viol, 0.0)
    bound_viol = float(
        max(np.max(lp.lo - x, initial=0.0), np.max(x - lp.hi, initial=0.0), 0.0)
    )

    # reduced costs under the public sign convention
    z = lp.c + lp.A.T @ y_eq + lp.G.T @ y_ineq

    tol = opts.tol_dual
    dual_viol = 0.0
    cs_viol = 0.0
    dual_obj = -float(y_eq @ lp.b) - float(y_ineq @ lp.h)
    for j in range(lp.num_cols):
        lo, hi, xj, zj = lp.lo[j], lp.hi[j], x[j], z[j]
        at_lo = lo > -_INF and xj - lo <= 1e-7 * (1 + abs(lo))
        at_hi = hi < _INF and hi - xj <= 1e-7 * (1 + abs(hi))
        if at_lo and at_hi:
            pass                                    # fixed column: z free
        elif at_lo:
            dual_viol = max(dual_viol, zj)          # needs z <= 0
        elif at_hi:
            dual_viol = max(dual_viol, -zj)         # needs z >= 0
        else:
            dual_viol = max(dual_viol, abs(zj))
            cs_viol = max(cs_viol, abs(zj))
        if zj > tol:
            dual_obj += zj * hi if hi < _INF else _INF
        elif zj < -tol:
            dual_obj += zj * lo if lo > -_INF else _INF

    slack = lp.h - lp.G @ x
    if len(slack):
        cs_viol = max(cs_viol, float(np.max(np.abs(y_ineq * slack), initial=0.0)))
        dual_viol = max(dual_viol, float(np.max(y_ineq, initial=0.0)))  # y <= 0

    primal_obj = float(lp.c @ x)
    gap = abs(primal_obj - dual_obj)
    ok = (
        eq_resid <= opts.tol_feas * (1 + float(np.max(np.abs(lp.b), initial=0.0)))
        and ineq_viol <= opts.tol_feas * (1 + float(np.max(np.abs(lp.h), initial=0.0)))
        and bound_viol <= 1e3 * opts.tol_feas
        and dual_viol <= 1e3 * opts.tol_dual * (1 + float(np.max(np.abs(lp.c))))
        and gap <= opts.tol_gap * (1 + abs(primal_obj))
    )
    return CertificateReport(
        max_eq_residual=eq_resid,
        max_ineq_violation=ineq_viol,
        max_bound_violation=bound_viol,
        max_dual_violation=dual_viol,
        max_cs_violation=cs_viol,
        duality_gap=gap,
        ok=ok,
    )
