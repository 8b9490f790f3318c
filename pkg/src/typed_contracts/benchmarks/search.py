"""Lexicographic search over action profiles with one LP per node.

Two methods share the same profile LPs and the same answer (the
lexicographically smallest profit-maximizing profile):

* ``"exhaustive"`` solves the profile LP of every candidate profile;
* ``"bnb"`` (default) walks the profile tree depth-first in lexicographic
  order and prunes a prefix whose relaxation bound cannot beat the incumbent.

Candidate actions per type exclude duplicates of a lower-indexed action and
actions the type cannot be induced to take even on its own; both exclusions
leave the lexicographically smallest maximizer in place.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import prod

from .programs import ProgramContext

DEFAULT_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    """The profile space is larger than the enumeration budget."""

    def __init__(self, size, budget):
        super().__init__(f"profile space of {size} exceeds the enumeration budget {budget}")
        self.size = size
        self.budget = budget


@dataclass
class SearchStats:
    profile_space: int = 0
    candidate_space: int = 0
    nodes: int = 0
    leaves: int = 0
    infeasible: int = 0
    pruned: int = 0
    lp_solves: int = 0

    def merge(self, other):
        for name in ("nodes", "leaves", "infeasible", "pruned", "lp_solves"):
            setattr(self, name, getattr(self, name) + getattr(other, name))

    def as_dict(self):
        return dict(self.__dict__)


@dataclass
class Incumbent:
    value: object = None
    profile: tuple = None
    x: tuple = None

    def offer(self, value, profile, x):
        if (
            self.value is None
            or value > self.value
            or (value == self.value and profile < self.profile)
        ):
            self.value, self.profile, self.x = value, profile, x
            return True
        return False

    def dominates(self, bound, prefix):
        """True when no completion of ``prefix`` can replace the incumbent."""
        if self.value is None:
            return False
        if bound < self.value:
            return True
        return bound == self.value and prefix > self.profile[: len(prefix)]


@dataclass
class SearchResult:
    value: object
    profile: tuple
    x: tuple
    stats: SearchStats = field(default_factory=SearchStats)


def candidate_actions(ctx: ProgramContext):
    """Per type: distinct actions that some contract makes weakly optimal."""
    out = []
    for t in range(ctx.T):
        seen = set()
        keep = []
        for a in range(ctx.n):
            key = (ctx.c[t][a], ctx.F[t][a])
            if key in seen:
                continue
            seen.add(key)
            transfer, _ = ctx.inducing_transfer(t, a)
            if transfer is not None:
                keep.append(a)
        out.append(tuple(keep))
    return out


def _program(ctx, kind):
    return ctx.single if kind == "single" else ctx.menu


def _dfs(ctx, kind, candidates, prefix, inc, stats):
    program = _program(ctx, kind)
    k = len(prefix)
    for a in candidates[k]:
        node = prefix + (a,)
        stats.nodes += 1
        out, bound = program(node)
        if not out.optimal:
            stats.infeasible += 1
            continue
        if len(node) == ctx.T:
            stats.leaves += 1
            inc.offer(bound, node, out.x)
        elif inc.dominates(bound, node):
            stats.pruned += 1
        else:
            _dfs(ctx, kind, candidates, node, inc, stats)


def _exhaustive(ctx, kind, profiles, inc, stats):
    program = _program(ctx, kind)
    for profile in profiles:
        stats.nodes += 1
        stats.leaves += 1
        out, value = program(profile)
        if not out.optimal:
            stats.infeasible += 1
            continue
        inc.offer(value, profile, out.x)


def _branch(instance, kind, method, candidates, first, seed):
    """Worker entry point: search the subtree whose first type plays ``first``."""
    ctx = ProgramContext(instance)
    inc = Incumbent(*seed) if seed is not None else Incumbent()
    stats = SearchStats()
    if method == "exhaustive":
        rest = itertools.product(*candidates[1:])
        _exhaustive(ctx, kind, ((first,) + p for p in rest), inc, stats)
    else:
        stats.nodes += 1
        out, bound = _program(ctx, kind)((first,))
        if not out.optimal:
            stats.infeasible += 1
        elif ctx.T == 1:
            stats.leaves += 1
            inc.offer(bound, (first,), out.x)
        elif inc.dominates(bound, (first,)):
            stats.pruned += 1
        else:
            _dfs(ctx, kind, candidates, (first,), inc, stats)
    stats.lp_solves = ctx.lp_solves
    return inc.value, inc.profile, inc.x, stats


def search_profiles(
    ctx: ProgramContext,
    kind: str,
    *,
    budget: int = DEFAULT_BUDGET,
    method: str = "bnb",
    seeds=(),
    workers: int = 1,
) -> SearchResult:
    if kind not in ("single", "menu"):
        raise ValueError(f"unknown program kind {kind!r}")
    if method not in ("bnb", "exhaustive"):
        raise ValueError(f"unknown search method {method!r}")
    stats = SearchStats(profile_space=ctx.n**ctx.T)
    if stats.profile_space > budget:
        raise BudgetExceeded(stats.profile_space, budget)
    before = ctx.lp_solves
    candidates = candidate_actions(ctx)
    stats.candidate_space = prod(len(c) for c in candidates)

    inc = Incumbent()
    program = _program(ctx, kind)
    if method == "bnb":
        for profile in seeds:
            out, value = program(tuple(profile))
            if out.optimal:
                inc.offer(value, tuple(profile), out.x)
    stats.lp_solves += ctx.lp_solves - before

    seed = (inc.value, inc.profile, inc.x) if inc.value is not None else None
    if workers > 1 and len(candidates[0]) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_branch, ctx.instance, kind, method, candidates, a, seed)
                for a in candidates[0]
            ]
            parts = [f.result() for f in futures]
    else:
        parts = []
        for a in candidates[0]:
            part = _branch(ctx.instance, kind, method, candidates, a, seed)
            parts.append(part)
            if part[0] is not None:
                inc.offer(*part[:3])
                seed = (inc.value, inc.profile, inc.x)
    for value, profile, x, part in parts:
        stats.merge(part)
        if value is not None:
            inc.offer(value, profile, x)
    if inc.value is None:  # pragma: no cover - the zero contract is always feasible
        raise RuntimeError("no feasible profile found")
    return SearchResult(inc.value, inc.profile, inc.x, stats)
