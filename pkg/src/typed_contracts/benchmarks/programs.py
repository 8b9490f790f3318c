"""Linear programs behind the contract benchmarks.

Everything here is exact.  A profile assigns an intended action to each type.
Search nodes fix the actions of the first ``k`` types (a prefix); the programs
below either solve the exact profile LP (``k == T``) or a relaxation whose
value bounds the profit of every completion of the prefix.

Relaxation for an unassigned type u: its profit under any contract x is at
most ``welfare_u - U_u(x)`` where ``U_u(x) = max_i F_ui.x - c_ui``.  A variable
``v_u = U_u + min_i c_ui >= 0`` carries the utility, so the bound is still a
standard-form minimization.
"""

from __future__ import annotations

from fractions import Fraction

from ..instance import Instance
from ..lp import INFEASIBLE, LpOutcome, build_problem, solve, solve_with_extra_variable

_INFEASIBLE = LpOutcome(INFEASIBLE)


class ProgramContext:
    """Precomputed per-type data shared by every LP of one benchmark run."""

    def __init__(self, instance: Instance):
        inst = instance.to_exact()
        self.instance = inst
        self.T, self.n, self.m = inst.shape
        self.F = inst.forecasts
        self.c = inst.costs
        self.w = inst.weights
        self.R = inst.reward_table
        self.cmin = tuple(min(row) for row in self.c)
        self.welf = tuple(
            max(self.R[t][i] - self.c[t][i] for i in range(self.n)) for t in range(self.T)
        )
        self.lp_solves = 0

    def solve(self, objective, rows, rhs):
        self.lp_solves += 1
        return solve(build_problem(objective, rows, rhs))

    # ----- rows -------------------------------------------------------------

    def obedience_rows(self, t, a, own, width):
        """Type t prefers action a under the block at offset ``own``."""
        rows, rhs, seen = [], [], set()
        Fa = self.F[t][a]
        ca = self.c[t][a]
        for p in range(self.n):
            if p == a:
                continue
            coef = tuple(x - y for x, y in zip(Fa, self.F[t][p]))
            b = ca - self.c[t][p]
            if not any(coef):
                if b > 0:
                    return None
                continue
            if (coef, b) in seen:
                continue
            seen.add((coef, b))
            row = [Fraction(0)] * width
            row[own : own + self.m] = coef
            rows.append(row)
            rhs.append(b)
        return rows, rhs

    def ic_row(self, t, a, own, other, i, width):
        """Type t: (a under block ``own``) beats (i under block ``other``)."""
        row = [Fraction(0)] * width
        for j in range(self.m):
            row[own + j] += self.F[t][a][j]
            row[other + j] -= self.F[t][i][j]
        return row, self.c[t][a] - self.c[t][i]

    def utility_row(self, u, i, block, vcol, width):
        row = [Fraction(0)] * width
        row[vcol] = Fraction(1)
        for j in range(self.m):
            row[block + j] = -self.F[u][i][j]
        return row, self.cmin[u] - self.c[u][i]

    def _bound(self, prefix, value):
        k = len(prefix)
        total = sum((self.w[t] * self.R[t][a] for t, a in enumerate(prefix)), Fraction(0))
        for u in range(k, self.T):
            total += self.w[u] * (self.welf[u] + self.cmin[u])
        return total - value

    # ----- single contract ----------------------------------------------------

    def single(self, prefix):
        """``(outcome, bound)`` for one shared contract and a prefix profile.

        For a complete profile this is the profile LP: minimize the expected
        transfer subject to every type weakly preferring its assigned action.
        The bound then equals the profile's optimal profit.
        """
        k = len(prefix)
        m = self.m
        width = m + (self.T - k)
        rows, rhs = [], []
        for t, a in enumerate(prefix):
            got = self.obedience_rows(t, a, 0, width)
            if got is None:
                return _INFEASIBLE, None
            rows += got[0]
            rhs += got[1]
        objective = [Fraction(0)] * width
        for t, a in enumerate(prefix):
            for j in range(m):
                objective[j] += self.w[t] * self.F[t][a][j]
        for u in range(k, self.T):
            vcol = m + (u - k)
            objective[vcol] = self.w[u]
            seen = set()
            for i in range(self.n):
                row, b = self.utility_row(u, i, 0, vcol, width)
                key = (tuple(row), b)
                if b == 0 and not any(row[:m]):
                    continue  # v_u >= 0 already
                if key not in seen:
                    seen.add(key)
                    rows.append(row)
                    rhs.append(b)
        out = self.solve(objective, rows, rhs)
        if not out.optimal:
            return out, None
        return out, self._bound(prefix, out.value)

    # ----- menus --------------------------------------------------------------

    def menu(self, prefix):
        """``(outcome, bound)`` for menus; contract blocks for assigned types only.

        Misreport and unassigned-type utility rows are generated lazily: solve,
        add every violated row, repeat.  Each round only adds constraints, so the
        final optimum is the optimum of the full program.
        """
        k = len(prefix)
        m = self.m
        width = k * m + (self.T - k)
        rows, rhs = [], []
        for t, a in enumerate(prefix):
            got = self.obedience_rows(t, a, t * m, width)
            if got is None:
                return _INFEASIBLE, None
            rows += got[0]
            rhs += got[1]
        objective = [Fraction(0)] * width
        for t, a in enumerate(prefix):
            for j in range(m):
                objective[t * m + j] = self.w[t] * self.F[t][a][j]
        lazy = []
        for t, a in enumerate(prefix):
            for s in range(k):
                if s == t:
                    continue
                for i in range(self.n):
                    lazy.append(self.ic_row(t, a, t * m, s * m, i, width))
        for u in range(k, self.T):
            vcol = k * m + (u - k)
            objective[vcol] = self.w[u]
            for s in range(k):
                for i in range(self.n):
                    lazy.append(self.utility_row(u, i, s * m, vcol, width))
        while True:
            out = self.solve(objective, rows, rhs)
            if not out.optimal:
                return out, None
            x = out.x
            remaining = []
            added = False
            for row, b in lazy:
                if sum((p * q for p, q in zip(row, x) if p), Fraction(0)) < b:
                    rows.append(row)
                    rhs.append(b)
                    added = True
                else:
                    remaining.append((row, b))
            if not added:
                return out, self._bound(prefix, out.value)
            lazy = remaining

    # ----- single type --------------------------------------------------------

    def inducing_transfer(self, t, a):
        """Minimum expected transfer making type t weakly prefer action a (or None)."""
        got = self.obedience_rows(t, a, 0, self.m)
        if got is None:
            return None, None
        rows, rhs = got
        out = self.solve(self.F[t][a], rows, rhs)
        if not out.optimal:
            return None, None
        return out.value, out.x

    # ----- infeasibility margin -----------------------------------------------

    def margin(self, profile, kind):
        """Min ``eps >= 0`` such that adding ``2*eps`` to every preference row
        makes the profile LP feasible (0 exactly when it is feasible).

        ``profile`` may be a prefix; its rows are a subset of every completion's,
        so a prefix margin bounds the margins below it.  Misreport rows of menus
        are generated lazily as in :meth:`menu`.
        """
        m, k = self.m, len(profile)
        menu = kind == "menu"
        width = (k * m if menu else m) + 1
        eps = width - 1
        block = (lambda t: t * m) if menu else (lambda t: 0)
        rows, rhs, lazy = [], [], []
        for t, a in enumerate(profile):
            for s in range(k) if menu else (t,):
                for i in range(self.n):
                    if s == t and i == a:
                        continue
                    row, b = self.ic_row(t, a, block(t), block(s), i, width)
                    row[eps] = Fraction(2)
                    (rows if s == t else lazy).append((row, b))
        objective = [Fraction(0)] * width
        objective[eps] = Fraction(1)
        while True:
            self.lp_solves += 1
            problem = build_problem(objective, [r for r, _ in rows], [b for _, b in rows])
            out = solve_with_extra_variable(problem, eps, Fraction(0))
            x = out.x
            remaining = []
            for row, b in lazy:
                if sum((p * q for p, q in zip(row, x) if p), Fraction(0)) < b:
                    rows.append((row, b))
                else:
                    remaining.append((row, b))
            if len(remaining) == len(lazy):
                return out.value
            lazy = remaining

    def feasible(self, profile, kind):
        if kind == "single":
            out, _ = self.single(tuple(profile))
        else:
            out, _ = self.menu(tuple(profile))
        return out.optimal
