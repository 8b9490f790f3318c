"""Exact two-phase simplex with Bland's rule over rational data.

Problems are stated as ``min c.x  s.t.  A x >= b, x >= 0``.  Every status is
returned with a certificate that is re-checked in exact arithmetic before the
outcome leaves this module:

* optimal: primal feasibility of ``x`` plus a dual vector ``y >= 0`` with
  ``A^T y <= c`` and ``b.y == c.x``;
* infeasible: Farkas multipliers ``y >= 0`` with ``y A <= 0`` and ``y.b > 0``;
* unbounded: a ray ``d >= 0`` with ``A d >= 0`` and ``c.d < 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence

from . import kernels

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


def _frac(v):
    return v if type(v) is Fraction else Fraction(v)


class CertificateError(AssertionError):
    """An internal certificate failed exact re-verification (solver bug)."""


@dataclass(frozen=True)
class LpProblem:
    objective: tuple
    matrix: tuple
    rhs: tuple

    def __post_init__(self):
        c = tuple(_frac(v) for v in self.objective)
        a = tuple(tuple(_frac(v) for v in row) for row in self.matrix)
        b = tuple(_frac(v) for v in self.rhs)
        if len(a) != len(b):
            raise ValueError(f"matrix has {len(a)} rows but rhs has {len(b)} entries")
        for k, row in enumerate(a):
            if len(row) != len(c):
                raise ValueError(
                    f"row {k} has {len(row)} coefficients, objective has {len(c)}"
                )
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "matrix", a)
        object.__setattr__(self, "rhs", b)

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    @property
    def num_rows(self) -> int:
        return len(self.rhs)

    @cached_property
    def int_rows(self) -> tuple:
        """Each constraint as ``(ints, rhs_int, den)``: row i reads ``ints . x >= rhs_int``."""
        out = []
        for row, b in zip(self.matrix, self.rhs):
            ints, den = _int_row(row + (b,))
            out.append((ints[:-1], ints[-1], den))
        return tuple(out)

    @cached_property
    def int_objective(self) -> tuple:
        return tuple(_int_row(self.objective))


@dataclass(frozen=True)
class LpOutcome:
    status: str
    x: Optional[tuple] = None
    value: Optional[Fraction] = None
    dual: Optional[tuple] = None
    certificate: Optional[tuple] = None
    pivots: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


def _int_row(values):
    den = 1
    for v in values:
        den = lcm(den, v.denominator)
    return [v.numerator * (den // v.denominator) for v in values], den


def _common(values):
    """``(ints, den)`` with ``values[k] == ints[k] / den``."""
    return _int_row(values)


def _run(rows, dens, basis, ncols):
    pivots = 0
    while True:
        c = kernels.entering_bland(rows[0], ncols)
        if c < 0:
            return pivots, -1
        r = kernels.leaving_bland(rows, basis, c)
        if r < 0:
            return pivots, c
        kernels.pivot(rows, dens, r, c)
        basis[r] = c
        pivots += 1


def _run_phase1(rows, dens, basis, first_art):
    """Phase-one loop that deletes each artificial column once it leaves the basis.

    A nonbasic artificial sits at zero and never needs to return, so dropping
    it keeps the tableau narrow.  Deletions happen finitely often and the
    relative column order is preserved, so Bland's rule still terminates.
    """
    pivots = 0
    ncols = len(rows[0]) - 1
    while True:
        c = kernels.entering_bland(rows[0], ncols)
        if c < 0:
            return pivots
        r = kernels.leaving_bland(rows, basis, c)
        if r < 0:  # pragma: no cover - phase one is bounded below by zero
            raise CertificateError("phase one reported unbounded")
        kernels.pivot(rows, dens, r, c)
        out = basis[r]
        basis[r] = c
        pivots += 1
        if out >= first_art:
            for row in rows:
                del row[out]
            for k in range(1, len(basis)):
                if basis[k] > out:
                    basis[k] -= 1
            ncols -= 1


def _dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def solve(problem: LpProblem) -> LpOutcome:
    """Solve ``problem`` exactly; see the module docstring for certificates."""
    c = problem.objective
    n, m = len(c), problem.num_rows
    A_int = problem.int_rows  # row i is (ints, rhs_int) over den_i

    flipped = [rhs <= 0 for _, rhs, _ in A_int]
    n_art = flipped.count(False)
    width = n + m + n_art
    rows = [None]
    dens = [1]
    basis = [-1]
    art = n + m
    phase1 = [0] * (width + 1)
    phase1_den = 1
    for _, _, d in A_int:
        phase1_den = lcm(phase1_den, d)
    for i, (ints, rhs, d) in enumerate(A_int):
        row = [0] * (width + 1)
        if flipped[i]:
            for j in range(n):
                row[j] = -ints[j]
            row[n + i] = d
            row[-1] = -rhs
            basis.append(n + i)
        else:
            row[:n] = ints
            row[n + i] = -d
            row[art] = d
            row[-1] = rhs
            basis.append(art)
            scale = phase1_den // d
            for j in range(width + 1):
                if j != art and row[j]:
                    phase1[j] -= row[j] * scale
            art += 1
        rows.append(row)
        dens.append(d)
    rows[0], dens[0] = phase1, phase1_den

    pivots = _run_phase1(rows, dens, basis, n + m)
    if rows[0][-1] < 0:
        y = tuple(Fraction(rows[0][n + i], dens[0]) for i in range(m))
        _check_farkas(problem, y)
        return LpOutcome(INFEASIBLE, certificate=y, pivots=pivots)

    # drive zero-level artificials out; slack columns keep [A'|S] full row rank
    for r in range(1, len(rows)):
        if basis[r] >= n + m:
            for j in range(n + m):
                if rows[r][j] != 0:
                    kernels.pivot(rows, dens, r, j)
                    basis[r] = j
                    pivots += 1
                    break
            else:  # pragma: no cover - impossible with a slack per row
                raise CertificateError("artificial variable stuck in the basis")

    ncols = n + m
    for r in range(1, len(rows)):
        rows[r] = rows[r][:ncols] + [rows[r][-1]]
    # reduced costs: cost - sum_r cost[basis r] * row_r, over one common denominator
    c_int, c_den = problem.int_objective
    cost = list(c_int) + [0] * (m + 1)
    den = c_den
    for r in range(1, len(rows)):
        if basis[r] < n and cost[basis[r]]:
            den = lcm(den, c_den * dens[r])
    obj2 = [v * (den // c_den) for v in cost]
    for r in range(1, len(rows)):
        cb = cost[basis[r]] if basis[r] < n else 0
        if cb:
            scale = cb * (den // (c_den * dens[r]))
            row = rows[r]
            for j in range(ncols + 1):
                if row[j]:
                    obj2[j] -= scale * row[j]
    rows[0], dens[0] = obj2, den

    more, entering = _run(rows, dens, basis, ncols)
    pivots += more
    if entering >= 0:
        d = [Fraction(0)] * ncols
        d[entering] = Fraction(1)
        for r in range(1, len(rows)):
            d[basis[r]] = Fraction(-rows[r][entering], dens[r])
        ray = tuple(d[:n])
        _check_ray(problem, ray)
        return LpOutcome(UNBOUNDED, certificate=ray, pivots=pivots)

    values = [Fraction(0)] * ncols
    for r in range(1, len(rows)):
        values[basis[r]] = Fraction(rows[r][-1], dens[r])
    x = tuple(values[:n])
    value = _dot(c, x)
    y = tuple(Fraction(rows[0][n + i], dens[0]) for i in range(m))
    _check_optimal(problem, x, y, value)
    return LpOutcome(OPTIMAL, x=x, value=value, dual=y, pivots=pivots)


# Certificate checks run on integers: each row i of A is ints_i / den_i and a
# rational vector v is V / dv, so every comparison is cleared of denominators.


def _row_products(problem, v):
    """Return ``(P, dv)`` with ``(A v)_i == P[i] / (den_i * dv)``."""
    V, dv = _common(v)
    return [sum(a * b for a, b in zip(ints, V) if a) for ints, _, _ in problem.int_rows], dv


def _column_products(problem, y):
    """Return ``(Q, den)`` with ``(A^T y)_j == Q[j] / den``."""
    Y, dy = _common(y)
    L = 1
    for _, _, d in problem.int_rows:
        L = lcm(L, d)
    Q = [0] * problem.num_vars
    for yi, (ints, _, d) in zip(Y, problem.int_rows):
        if yi:
            s = yi * (L // d)
            for j, a in enumerate(ints):
                if a:
                    Q[j] += s * a
    return Q, dy * L


def _check_optimal(problem, x, y, value):
    if any(v < 0 for v in x):
        raise CertificateError("negative primal coordinate")
    P, dx = _row_products(problem, x)
    for i, (_, rhs, _) in enumerate(problem.int_rows):
        if P[i] < rhs * dx:
            raise CertificateError(f"primal point violates row {i}")
    if any(v < 0 for v in y):
        raise CertificateError("negative dual multiplier")
    Q, den = _column_products(problem, y)
    c_int, c_den = problem.int_objective
    for j in range(problem.num_vars):
        if Q[j] * c_den > c_int[j] * den:
            raise CertificateError(f"dual infeasible in column {j}")
    if _dot(problem.rhs, y) != value:
        raise CertificateError("duality gap is nonzero")


def _check_farkas(problem, y):
    if any(v < 0 for v in y):
        raise CertificateError("negative Farkas multiplier")
    Q, _ = _column_products(problem, y)
    if any(q > 0 for q in Q):
        raise CertificateError("Farkas combination positive in some column")
    if _dot(problem.rhs, y) <= 0:
        raise CertificateError("Farkas multipliers do not separate")


def _check_ray(problem, d):
    if any(v < 0 for v in d):
        raise CertificateError("ray leaves the nonnegative orthant")
    P, _ = _row_products(problem, d)
    if any(p < 0 for p in P):
        raise CertificateError("ray violates some row")
    if _dot(problem.objective, d) >= 0:
        raise CertificateError("ray does not improve the objective")


def solve_with_extra_variable(
    problem: LpProblem, column: int, lower: Optional[Fraction] = Fraction(0)
) -> LpOutcome:
    """Solve with variable ``column`` bounded below by ``lower`` instead of 0.

    ``lower=None`` makes the variable free.  This carries the min-margin
    programs used by the stability threshold, where the margin variable is the
    distinguished column.  The outcome is reported in the original variables;
    a Farkas certificate is stated for the transformed system.
    """
    c, A, b = problem.objective, problem.matrix, problem.rhs
    if not 0 <= column < len(c):
        raise ValueError(f"column {column} out of range for {len(c)} variables")
    if lower is None:
        shifted = LpProblem(
            c + (-c[column],),
            tuple(row + (-row[column],) for row in A),
            b,
        )
        out = solve(shifted)
        if out.status == OPTIMAL:
            x = list(out.x[:-1])
            x[column] -= out.x[-1]
            return LpOutcome(OPTIMAL, tuple(x), out.value, out.dual, None, out.pivots)
        if out.status == UNBOUNDED:
            d = list(out.certificate[:-1])
            d[column] -= out.certificate[-1]
            return LpOutcome(UNBOUNDED, certificate=tuple(d), pivots=out.pivots)
        return out
    lower = Fraction(lower)
    shifted = LpProblem(c, A, tuple(b[i] - A[i][column] * lower for i in range(len(b))))
    out = solve(shifted)
    if out.status != OPTIMAL:
        return out
    x = list(out.x)
    x[column] += lower
    return LpOutcome(OPTIMAL, tuple(x), out.value + c[column] * lower, out.dual, None, out.pivots)


def build_problem(objective: Sequence, rows: Sequence[Sequence], rhs: Sequence) -> LpProblem:
    return LpProblem(tuple(objective), tuple(tuple(r) for r in rows), tuple(rhs))
