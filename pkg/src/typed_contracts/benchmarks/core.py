"""The five profit benchmarks, the stability threshold and the ratio table."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ..instance import Instance, cost_gap_statistic
from ..response import Contract, LinearContract, Menu, evaluate_contract, evaluate_linear
from .programs import ProgramContext
from .search import DEFAULT_BUDGET, BudgetExceeded, search_profiles

BENCHMARK_NAMES = ("Welfare", "Opt-TypeAware", "Opt-Menu", "Opt-Single", "Opt-Linear")


@dataclass(frozen=True)
class BenchmarkResult:
    name: str
    value: object
    witness: object
    metadata: dict = field(default_factory=dict, compare=False)


def _as_mode(instance, value):
    return value if instance.is_exact else float(value)


def welfare(instance: Instance) -> BenchmarkResult:
    R, w = instance.reward_table, instance.weights
    tol = instance.tolerance
    total = Fraction(0) if instance.is_exact else 0.0
    actions = []
    for t in range(instance.num_types):
        c = instance.costs[t]
        best = 0
        for i in range(1, instance.num_actions):
            if R[t][i] - c[i] > R[t][best] - c[best] + tol:
                best = i
        actions.append(best)
        total += w[t] * (R[t][best] - c[best])
    return BenchmarkResult("Welfare", total, tuple(actions))


def linear_candidates(instance: Instance) -> list:
    """``{0}`` plus every pairwise indifference share, clamped to [0, 1]."""
    R = instance.reward_table
    zero = Fraction(0) if instance.is_exact else 0.0
    found = {zero}
    for t in range(instance.num_types):
        c = instance.costs[t]
        for i, k in itertools.combinations(range(instance.num_actions), 2):
            dR = R[t][k] - R[t][i]
            if dR == 0:
                continue
            a = (c[k] - c[i]) / dR
            found.add(min(max(a, zero), zero + 1))
    return sorted(found)


def opt_linear(instance: Instance) -> BenchmarkResult:
    """Best linear contract; ties go to the smallest share."""
    cands = linear_candidates(instance)
    best_alpha, best = None, None
    for a in cands:
        report = evaluate_linear(instance, a)
        if best is None or report.profit > best.profit + instance.tolerance:
            best_alpha, best = a, report
    return BenchmarkResult(
        "Opt-Linear",
        best.profit,
        LinearContract(best_alpha),
        {"candidates": len(cands), "profile": best.profile},
    )


def opt_typeaware(instance: Instance) -> BenchmarkResult:
    """Best contract per type, the principal knowing the type."""
    ctx = ProgramContext(instance)
    total = Fraction(0)
    contracts, actions = [], []
    for t in range(ctx.T):
        best = None
        for a in range(ctx.n):
            transfer, x = ctx.inducing_transfer(t, a)
            if transfer is None:
                continue
            profit = ctx.R[t][a] - transfer
            if best is None or profit > best[0]:
                best = (profit, a, x)
        total += ctx.w[t] * best[0]
        actions.append(best[1])
        contracts.append(Contract(best[2]))
    return BenchmarkResult(
        "Opt-TypeAware",
        _as_mode(instance, total),
        tuple(contracts),
        {"profile": tuple(actions), "lp_solves": ctx.lp_solves},
    )


def _seed_profiles(instance):
    lin = opt_linear(instance.to_exact())
    zero = evaluate_contract(instance.to_exact(), [0] * instance.num_outcomes)
    return [lin.metadata["profile"], zero.profile]


def opt_single(
    instance: Instance,
    *,
    budget: int = DEFAULT_BUDGET,
    method: str = "bnb",
    workers: int = 1,
) -> BenchmarkResult:
    """Best single contract offered to every type, by search over action profiles."""
    ctx = ProgramContext(instance)
    seeds = _seed_profiles(instance) if method == "bnb" else ()
    res = search_profiles(ctx, "single", budget=budget, method=method, seeds=seeds, workers=workers)
    meta = {"profile": res.profile, "method": method, **res.stats.as_dict()}
    return BenchmarkResult("Opt-Single", _as_mode(instance, res.value), Contract(res.x), meta)


def opt_menu(
    instance: Instance,
    *,
    budget: int = DEFAULT_BUDGET,
    method: str = "bnb",
    workers: int = 1,
) -> BenchmarkResult:
    """Best incentive-compatible menu, by search over action profiles."""
    ctx = ProgramContext(instance)
    seeds = _seed_profiles(instance) if method == "bnb" else ()
    res = search_profiles(ctx, "menu", budget=budget, method=method, seeds=seeds, workers=workers)
    m = ctx.m
    menu = Menu(tuple(Contract(res.x[t * m : (t + 1) * m]) for t in range(ctx.T)))
    meta = {"profile": res.profile, "method": method, **res.stats.as_dict()}
    return BenchmarkResult("Opt-Menu", _as_mode(instance, res.value), menu, meta)


def _solve_square(rows, rhs):
    """Gaussian elimination over Fractions; None when singular."""
    size = len(rows)
    a = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(size):
        piv = next((r for r in range(col, size) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for r in range(size):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * u for v, u in zip(a[r], a[col])]
    return tuple(a[r][size] for r in range(size))


def preference_hyperplanes(instance: Instance) -> list:
    """Distinct boundaries ``(F_a - F_p).x = c_a - c_p``, scaled to a canonical form."""
    inst = instance.to_exact()
    found = {}
    for t in range(inst.num_types):
        F, c = inst.forecasts[t], inst.costs[t]
        for a, p in itertools.combinations(range(inst.num_actions), 2):
            coef = [x - y for x, y in zip(F[a], F[p])]
            lead = next((v for v in coef if v != 0), None)
            if lead is None:
                continue
            key = (tuple(v / lead for v in coef), (c[a] - c[p]) / lead)
            found.setdefault(key, None)
    return list(found)


def opt_single_extreme_points(instance: Instance) -> BenchmarkResult:
    """Best single contract by evaluating every candidate vertex.

    An optimal contract sits at a vertex cut out by m tight constraints drawn
    from the preference boundaries and the coordinate planes ``x_j = 0``.
    """
    inst = instance.to_exact()
    m = inst.num_outcomes
    planes = preference_hyperplanes(inst)
    for j in range(m):
        unit = tuple(Fraction(int(k == j)) for k in range(m))
        planes.append((unit, Fraction(0)))
    seen = set()
    points = [tuple(Fraction(0) for _ in range(m))]
    seen.add(points[0])
    systems = 0
    for combo in itertools.combinations(planes, m):
        systems += 1
        x = _solve_square([p[0] for p in combo], [p[1] for p in combo])
        if x is None or any(v < 0 for v in x) or x in seen:
            continue
        seen.add(x)
        points.append(x)
    best_x, best = None, None
    for x in points:
        report = evaluate_contract(inst, x)
        if best is None or report.profit > best.profit:
            best_x, best = x, report
    meta = {"hyperplanes": len(planes) - m, "systems": systems, "vertices": len(points)}
    return BenchmarkResult(
        "Opt-Single", _as_mode(instance, best.profit), Contract(best_x), meta
    )


def _profiles(ctx, budget):
    size = ctx.n**ctx.T
    if size > budget:
        raise BudgetExceeded(size, budget)
    # identical actions give identical programs; solve one representative each
    rep = []
    for t in range(ctx.T):
        first = {}
        rep.append(tuple(first.setdefault((ctx.c[t][a], ctx.F[t][a]), a) for a in range(ctx.n)))
    return rep, itertools.product(range(ctx.n), repeat=ctx.T)


def profile_margins(instance: Instance, benchmark: str = "single", *, budget: int = DEFAULT_BUDGET) -> dict:
    """Infeasibility margin of every profile (0 exactly when the profile LP is feasible)."""
    if benchmark not in ("single", "menu"):
        raise ValueError(f"unknown benchmark {benchmark!r}")
    ctx = ProgramContext(instance)
    rep, profiles = _profiles(ctx, budget)
    cache = {}
    out = {}
    for profile in profiles:
        key = tuple(rep[t][a] for t, a in enumerate(profile))
        if key not in cache:
            cache[key] = ctx.margin(key, benchmark)
        out[profile] = cache[key]
    return out


def feasible_profiles(instance: Instance, benchmark: str = "single", *, budget: int = DEFAULT_BUDGET) -> frozenset:
    return frozenset(p for p, v in profile_margins(instance, benchmark, budget=budget).items() if v == 0)


def stability_threshold(
    instance: Instance, benchmark: str = "single", *, budget: int = DEFAULT_BUDGET
) -> Optional[Fraction]:
    """Half the smallest infeasibility margin over infeasible profiles, or None.

    Moving every cost by less than this leaves each infeasible profile
    infeasible: a cost shift of d changes each preference row by at most 2d.
    The minimum is found depth-first; a prefix margin bounds every completion
    from below, so subtrees that cannot go lower are skipped.
    """
    if benchmark not in ("single", "menu"):
        raise ValueError(f"unknown benchmark {benchmark!r}")
    ctx = ProgramContext(instance)
    rep, _ = _profiles(ctx, budget)
    choices = [sorted(set(r)) for r in rep]
    best = None

    def dfs(prefix):
        nonlocal best
        for a in choices[len(prefix)]:
            node = prefix + (a,)
            v = ctx.margin(node, benchmark)
            if best is not None and v >= best:
                continue
            if len(node) == ctx.T:
                if v > 0:
                    best = v
            else:
                dfs(node)

    dfs(())
    return None if best is None else best / 2


@dataclass(frozen=True)
class GapsTable:
    values: dict  # benchmark name -> value
    ratios: dict  # (row, col) -> value | "infinite" | "undefined"
    delta: Optional[float]
    results: dict = field(default_factory=dict, compare=False)

    def rows(self):
        for r in BENCHMARK_NAMES:
            yield r, [self.ratios[(r, c)] for c in BENCHMARK_NAMES]


def ratio(num, den):
    if den == 0:
        return "undefined" if num == 0 else "infinite"
    return num / den


def gaps_table(
    instance: Instance, *, budget: int = DEFAULT_BUDGET, workers: int = 1
) -> GapsTable:
    results = {
        "Welfare": welfare(instance),
        "Opt-TypeAware": opt_typeaware(instance),
        "Opt-Menu": opt_menu(instance, budget=budget, workers=workers),
        "Opt-Single": opt_single(instance, budget=budget, workers=workers),
        "Opt-Linear": opt_linear(instance),
    }
    values = {k: v.value for k, v in results.items()}
    ratios = {(r, c): ratio(values[r], values[c]) for r in BENCHMARK_NAMES for c in BENCHMARK_NAMES}
    delta = cost_gap_statistic(instance).delta if instance.num_actions >= 2 else None
    return GapsTable(values, ratios, delta, results)
