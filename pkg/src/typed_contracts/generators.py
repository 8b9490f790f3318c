"""Instance families and reductions between principal-agent problems.

Every generator returns an exact :class:`Instance` whose ``metadata`` carries a
``provenance`` block (family name, parameters, derived constants).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .benchmarks import stability_threshold, utility_envelope, welfare
from .benchmarks.search import DEFAULT_BUDGET
from .instance import Instance, make_instance
from .numeric import to_fraction
from .response import Contract, Menu


def _provenance(family, parameters, derived=None, source=None):
    block = {"family": family, "parameters": dict(parameters)}
    if derived:
        block["derived"] = dict(derived)
    if source is not None:
        chain = list(source.metadata.get("provenance_chain", []))
        if "provenance" in source.metadata:
            chain.append(source.metadata["provenance"])
        return {"provenance": block, "provenance_chain": chain}
    return {"provenance": block}


def _build(rewards, forecasts, costs, weights, meta):
    shared = all(row == costs[0] for row in costs)
    if shared:
        return make_instance(
            rewards=rewards, forecasts=forecasts, costs=costs[0], weights=weights, metadata=meta
        )
    return make_instance(
        rewards=rewards, forecasts=forecasts, costs_per_type=costs, weights=weights, metadata=meta
    )


# ----- Theorem-3.2 style family ------------------------------------------------


def theorem32_family(n: int, T: int, lam, log_T=None) -> Instance:
    """Two-outcome family on which linear contracts capture little welfare.

    Actions 0..n cost ``c_i = lam + lam^2 + ... + lam^i``; type t (1-based) has
    expected reward ``c_i + i / (t n L)`` where ``L`` is the natural log of T.
    ``L`` must be rational here; by default it is the double nearest ln T,
    recorded in the provenance so every derived quantity stays exact relative
    to it.
    """
    lam = to_fraction(lam)
    if n < 1:
        raise ValueError("n must be at least 1")
    if T < 2:
        raise ValueError("T must be at least 2 (ln T must be positive)")
    if lam <= T:
        raise ValueError(f"lambda must exceed T (got lambda={lam}, T={T})")
    L = Fraction(math.log(T)) if log_T is None else to_fraction(log_T)
    if L <= 0:
        raise ValueError("log_T must be positive")
    costs, acc, power = [Fraction(0)], Fraction(0), Fraction(1)
    for _ in range(n):
        power *= lam
        acc += power
        costs.append(acc)
    R = [[costs[i] + Fraction(i) / (t * n * L) for i in range(n + 1)] for t in range(1, T + 1)]
    high = max(max(row) for row in R)
    forecasts = [[[1 - v / high, v / high] for v in row] for row in R]
    meta = _provenance(
        "theorem32",
        {"n": n, "T": T, "lambda": lam},
        {"log_T": L, "reward_high": high},
    )
    return make_instance(rewards=[0, high], forecasts=forecasts, costs=costs, metadata=meta)


# ----- dominating set reduction ------------------------------------------------


@dataclass(frozen=True)
class Graph:
    """Undirected graph on vertices 1..N with sorted adjacency lists."""

    num_vertices: int
    adjacency: tuple

    @classmethod
    def from_edges(cls, num_vertices: int, edges) -> "Graph":
        if num_vertices < 1:
            raise ValueError("graph needs at least one vertex")
        nbrs = [set() for _ in range(num_vertices + 1)]
        for e in edges:
            if len(e) != 2:
                raise ValueError(f"edge {e!r} must have two endpoints")
            u, v = int(e[0]), int(e[1])
            for x in (u, v):
                if not 1 <= x <= num_vertices:
                    raise ValueError(f"vertex {x} outside 1..{num_vertices}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(num_vertices, tuple(tuple(sorted(s)) for s in nbrs[1:]))

    def neighbors(self, v: int) -> tuple:
        return self.adjacency[v - 1]

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def dominates(self, subset) -> bool:
        s = set(subset)
        return all(v in s or s.intersection(self.neighbors(v)) for v in range(1, self.num_vertices + 1))


def cycle_graph(N: int) -> Graph:
    return Graph.from_edges(N, [(i, i % N + 1) for i in range(1, N + 1)])


def path_graph(N: int) -> Graph:
    return Graph.from_edges(N, [(i, i + 1) for i in range(1, N)])


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(1, i) for i in range(2, leaves + 2)])


def dominating_set_reduction(graph: Graph) -> Instance:
    """Instance whose best contract profit is ``3/4 - gamma(G)/(4N)``.

    Action 0 is the null action (cost 0); actions 1-3 reach the vertex's
    neighbors in ascending order and action 4 the vertex itself (cost 1/2
    each).  Outcome 0 is the null outcome, outcome v is vertex v (reward 1).
    Types 1..N are vertex types; types N+1..2N pay back half a unit when their
    vertex is in the chosen set.  Unused neighbor actions of low-degree
    vertices point at the vertex's own outcome.
    """
    N = graph.num_vertices
    if graph.max_degree > 3:
        raise ValueError(f"maximum degree {graph.max_degree} exceeds 3")
    m = N + 1
    half = Fraction(1, 2)
    costs = [Fraction(0), half, half, half, half]

    def point(j):
        row = [Fraction(0)] * m
        row[j] = Fraction(1)
        return row

    forecasts = []
    for v in range(1, N + 1):
        nbrs = list(graph.neighbors(v))
        targets = nbrs + [v] * (3 - len(nbrs))
        forecasts.append([point(0)] + [point(u) for u in targets] + [point(v)])
    for v in range(1, N + 1):
        forecasts.append([point(v)] + [point(0)] * 4)
    rewards = [Fraction(0)] + [Fraction(1)] * N
    meta = _provenance(
        "domset",
        {"n": N, "edges": [[u, v] for u in range(1, N + 1) for v in graph.neighbors(u) if u < v]},
    )
    return make_instance(rewards=rewards, forecasts=forecasts, costs=costs, metadata=meta)


def dominating_set_contract(instance: Instance, subset) -> Contract:
    """Contract paying 1/2 on the outcomes of the given vertices."""
    x = [Fraction(0)] * instance.num_outcomes
    for v in subset:
        x[v] = Fraction(1, 2)
    return Contract(tuple(x))


# ----- menu versus single contract gap ----------------------------------------


def gap3v4_family(k: int) -> Instance:
    """k+1 types, 3 actions, k+1 outcomes separating menus from single contracts.

    Actions: 0 null (cost 0), 1 with cost ``C' = 1 - 1/k``, 2 with cost
    ``C'/k``.  Outcomes 0..k-1 carry reward 1 and outcome k is null.
    """
    if not isinstance(k, int) or k < 2:
        raise ValueError("k must be an integer >= 2")
    C = 1 - Fraction(1, k)
    m = k + 1
    null = k

    def point(j):
        row = [Fraction(0)] * m
        row[j] = Fraction(1)
        return row

    forecasts = []
    for t in range(k):
        forecasts.append([point(null), point(t), point(null)])
    spread = [Fraction(1, k)] * k + [Fraction(0)]
    forecasts.append([point(null), point(null), spread])
    weights = [Fraction(k - 1, k * k)] * k + [Fraction(1, k)]
    rewards = [Fraction(1)] * k + [Fraction(0)]
    meta = _provenance("gap3v4", {"k": k}, {"C_prime": C})
    return make_instance(
        rewards=rewards, forecasts=forecasts, costs=[0, C, C / k], weights=weights, metadata=meta
    )


def gap3v4_menu(k: int) -> Menu:
    """Menu whose t-th entry pays ``C'`` on outcome t; the last type gets entry 0's contract."""
    C = 1 - Fraction(1, k)
    contracts = []
    for t in range(k + 1):
        x = [Fraction(0)] * (k + 1)
        x[t if t < k else 0] = C
        contracts.append(Contract(tuple(x)))
    return Menu(tuple(contracts))


# ----- single contracts recover welfare ------------------------------------------


def _welfare_actions(inst):
    return welfare(inst).witness


def nonlinearity_disparity(instance: Instance) -> Instance:
    """Add two zero-reward outcomes so a single contract extracts the full welfare.

    Linear contracts cannot use the new outcomes, so their value is unchanged.
    """
    inst = instance.to_exact()
    T, n, m = inst.shape
    star = _welfare_actions(inst)
    top = max(inst.costs[t][star[t]] for t in range(T))
    degenerate = top == 0
    eps = None if degenerate else 1 / (2 * top)
    eps_t = [Fraction(0) if degenerate else eps * inst.costs[t][star[t]] for t in range(T)]
    half = Fraction(1, 2)
    forecasts = []
    for t in range(T):
        rows = []
        for i in range(n):
            hit = i == star[t]
            row = [half * p for p in inst.forecasts[t][i]]
            row += [eps_t[t] if hit else Fraction(0), half - (eps_t[t] if hit else 0)]
            rows.append(row)
        forecasts.append(rows)
    rewards = [2 * r for r in inst.rewards] + [Fraction(0), Fraction(0)]
    derived = {"epsilon": eps, "epsilon_t": eps_t, "welfare_actions": list(star)}
    if degenerate:
        derived["degenerate"] = True
    meta = _provenance("nonlinearity", {}, derived, source=inst)
    return _build(rewards, forecasts, inst.costs, inst.weights, meta)


def info_is_power_epsilon(instance: Instance, zeta, *, budget: int = DEFAULT_BUDGET):
    """``min(1/2, min(tau, zeta) / (2 T Welfare))`` with tau the smaller threshold."""
    inst = instance.to_exact()
    zeta = to_fraction(zeta)
    if zeta <= 0:
        raise ValueError("zeta must be positive")
    taus = [stability_threshold(inst, b, budget=budget) for b in ("single", "menu")]
    finite = [t for t in taus if t is not None]
    tau = min(finite) if finite else None
    cap = zeta if tau is None else min(tau, zeta)
    W = welfare(inst).value
    if W == 0:
        return Fraction(1, 2), tau
    return min(Fraction(1, 2), cap / (2 * inst.num_types * W)), tau


def info_is_power(
    instance: Instance,
    epsilon=None,
    *,
    zeta=None,
    budget: int = DEFAULT_BUDGET,
) -> Instance:
    """Add a type that punishes contracts using two new outcomes.

    A type-aware principal still extracts the (diluted) welfare through the new
    outcomes; linear contracts lose exactly the diluted mass.  Give either
    ``epsilon`` in (0, 1/2] or ``zeta`` (then epsilon is derived from the
    stability threshold).
    """
    inst = instance.to_exact()
    if (epsilon is None) == (zeta is None):
        raise ValueError("give exactly one of epsilon or zeta")
    tau = None
    if zeta is not None:
        eps, tau = info_is_power_epsilon(inst, zeta, budget=budget)
        path = "zeta"
    else:
        eps = to_fraction(epsilon)
        path = "epsilon"
    if not 0 < eps <= Fraction(1, 2):
        raise ValueError(f"epsilon {eps} outside (0, 1/2]")
    T, n, m = inst.shape
    star = _welfare_actions(inst)
    keep = 1 - eps
    forecasts = []
    for t in range(T):
        rows = []
        for i in range(n):
            hit = i == star[t]
            row = [keep * p for p in inst.forecasts[t][i]]
            row += [eps if hit else Fraction(0), Fraction(0) if hit else eps]
            rows.append(row)
        forecasts.append(rows)
    half = Fraction(1, 2)
    forecasts.append([[Fraction(0)] * m + [half, half] for _ in range(n)])
    rewards = [r / keep for r in inst.rewards] + [Fraction(0), Fraction(0)]
    weights = [w * T / (T + 1) for w in inst.weights] + [Fraction(1, T + 1)]
    # the new type's actions are indistinguishable; with per-type costs it borrows type 0's
    costs = list(inst.costs) + [inst.costs[0]]
    params = {"epsilon": eps} if path == "epsilon" else {"zeta": to_fraction(zeta)}
    derived = {"epsilon": eps, "path": path, "welfare_actions": list(star)}
    if path == "zeta":
        derived["tau"] = tau
    meta = _provenance("infopower", params, derived, source=inst)
    return _build(rewards, forecasts, costs, weights, meta)


# ----- cost-varying reductions -------------------------------------------------


def _envelope_points(inst):
    env = utility_envelope(inst)
    pts = [(env.base_drop, env.base_slope)]
    pts += [(bp.D, bp.W) for bp in env.breakpoints]
    return env, pts


def collapse_to_standard(instance: Instance) -> Instance:
    """Single-type two-outcome problem with the same utility envelope.

    Action 0 reproduces the envelope at alpha = 0 (cost D_0, reward mass W_0)
    and action k the k-th piece (cost D_k, reward mass W_k).  The reward
    outcome pays ``max W``; the action count is padded to ``(n-1)T + 1``.
    """
    inst = instance.to_exact()
    T, n, _ = inst.shape
    env, pts = _envelope_points(inst)
    size = (n - 1) * T + 1
    while len(pts) < size:
        pts.append(pts[-1])
    top = max(W for _, W in pts)
    forecasts = []
    for D, W in pts:
        p = W / top if top else Fraction(0)
        forecasts.append([1 - p, p])
    meta = _provenance(
        "collapse", {}, {"breakpoints": len(env.breakpoints), "reward_high": top}, source=inst
    )
    return make_instance(
        rewards=[0, top], forecasts=[forecasts], costs=[D for D, _ in pts], metadata=meta
    )


def expand_to_typed(standard: Instance, n: int, T: int) -> Instance:
    """Cost-varying T-type, n-action problem with the same utility envelope.

    Envelope pieces are dealt to types in consecutive blocks of ``n - 1``.
    With uniform weights each type's increments are scaled by T.  Type 0
    starts from the envelope at alpha = 0; the other types start from a
    zero-cost, zero-reward action.
    """
    std = standard.to_exact()
    if std.num_types != 1:
        raise ValueError("expand_to_typed needs a single-type problem")
    if n < 1 or T < 1:
        raise ValueError("n and T must be positive")
    if std.num_actions != (n - 1) * T + 1:
        raise ValueError(
            f"standard problem has {std.num_actions} actions, expected (n-1)T+1 = {(n - 1) * T + 1}"
        )
    env, pts = _envelope_points(std)
    size = (n - 1) * T + 1
    while len(pts) < size:
        pts.append(pts[-1])
    scale = Fraction(T)
    costs, masses = [], []
    for t in range(T):
        s = (n - 1) * t
        if t == 0:
            row_c = [scale * pts[i][0] for i in range(n)]
            row_w = [scale * pts[i][1] for i in range(n)]
        else:
            row_c = [scale * (pts[s + i][0] - pts[s][0]) for i in range(n)]
            row_w = [scale * (pts[s + i][1] - pts[s][1]) for i in range(n)]
        costs.append(row_c)
        masses.append(row_w)
    top = max(max(row) for row in masses)
    forecasts = [
        [[1 - (w / top if top else 0), w / top if top else Fraction(0)] for w in row]
        for row in masses
    ]
    meta = _provenance("expand", {"n": n, "T": T}, {"reward_high": top}, source=std)
    return _build([0, top], forecasts, costs, [Fraction(1, T)] * T, meta)


def uniformize_costs(instance: Instance) -> Instance:
    """Give every type the same cost vector by adding dominated dummy actions.

    The shared vector is the smallest multiset containing every type's cost
    multiset, in ascending order.  A dummy action copies its type's zero-cost
    action, so it never beats the original.
    """
    inst = instance.to_exact()
    T, n, _ = inst.shape
    need = Counter()
    for row in inst.costs:
        for v, k in Counter(row).items():
            need[v] = max(need[v], k)
    shared = sorted(need.elements())
    forecasts = []
    dummies = []
    for t in range(T):
        row = inst.costs[t]
        zero = [i for i in range(n) if row[i] == 0]
        if not zero:
            raise ValueError(f"type {t} has no zero-cost action; normalize first")
        pool = {}
        for i in range(n):
            pool.setdefault(row[i], []).append(i)
        rows = []
        added = 0
        for v in shared:
            if pool.get(v):
                rows.append(inst.forecasts[t][pool[v].pop(0)])
            else:
                rows.append(inst.forecasts[t][zero[0]])
                added += 1
        forecasts.append(rows)
        dummies.append(added)
    meta = _provenance("uniformize", {}, {"dummy_actions": dummies}, source=inst)
    return make_instance(
        rewards=inst.rewards, forecasts=forecasts, costs=shared, weights=inst.weights, metadata=meta
    )
