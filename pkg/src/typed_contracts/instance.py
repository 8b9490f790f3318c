"""Typed principal-agent instances: construction, validation and simple transforms.

An instance stores costs per type internally (``costs[t][i]``); ``shared`` records
whether every type sees the same cost vector.  Entries are ``Fraction`` in exact
mode; :meth:`Instance.to_float` produces a float copy carrying an absolute
comparison tolerance used by the best-response code.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from .numeric import DEFAULT_TOLERANCE, exact, to_fraction


class InstanceError(ValueError):
    """Raised for structurally malformed instances (ragged shapes, bad literals)."""


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    where: tuple = ()

    def __str__(self):
        return self.message


@dataclass(frozen=True)
class Instance:
    costs: tuple
    rewards: tuple
    forecasts: tuple
    weights: tuple
    shared: bool = True
    tolerance: float = 0
    metadata: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @property
    def num_types(self) -> int:
        return len(self.forecasts)

    @property
    def num_actions(self) -> int:
        return len(self.forecasts[0])

    @property
    def num_outcomes(self) -> int:
        return len(self.rewards)

    @property
    def shape(self) -> tuple:
        return self.num_types, self.num_actions, self.num_outcomes

    @property
    def is_exact(self) -> bool:
        return self.tolerance == 0

    @property
    def shared_costs(self) -> tuple:
        if not self.shared:
            raise ValueError("instance has per-type costs")
        return self.costs[0]

    @cached_property
    def reward_table(self) -> tuple:
        """``R[t][i] = sum_j F[t][i][j] r[j]``."""
        zero = Fraction(0) if self.is_exact else 0.0
        return tuple(
            tuple(sum((p * r for p, r in zip(row, self.rewards)), zero) for row in rows)
            for rows in self.forecasts
        )

    def to_float(self, tolerance: float = DEFAULT_TOLERANCE) -> "Instance":
        if tolerance <= 0:
            raise ValueError("float mode needs a positive tolerance")
        conv = lambda seq: tuple(float(v) for v in seq)  # noqa: E731
        return Instance(
            costs=tuple(conv(c) for c in self.costs),
            rewards=conv(self.rewards),
            forecasts=tuple(tuple(conv(row) for row in rows) for rows in self.forecasts),
            weights=conv(self.weights),
            shared=self.shared,
            tolerance=tolerance,
            metadata=dict(self.metadata),
        )

    def to_exact(self) -> "Instance":
        """Exact copy; float entries convert bit-for-bit."""
        if self.is_exact:
            return self
        conv = lambda seq: tuple(exact(v) for v in seq)  # noqa: E731
        return Instance(
            costs=tuple(conv(c) for c in self.costs),
            rewards=conv(self.rewards),
            forecasts=tuple(tuple(conv(row) for row in rows) for rows in self.forecasts),
            weights=conv(self.weights),
            shared=self.shared,
            metadata=dict(self.metadata),
        )

    def with_metadata(self, **entries) -> "Instance":
        meta = dict(self.metadata)
        meta.update(entries)
        return replace(self, metadata=meta)


def make_instance(
    *,
    rewards: Sequence,
    forecasts: Sequence,
    costs: Optional[Sequence] = None,
    costs_per_type: Optional[Sequence] = None,
    weights: Optional[Sequence] = None,
    metadata: Optional[dict] = None,
) -> Instance:
    """Build an exact instance from literals (numbers, ``"p/q"`` or decimal strings)."""
    if (costs is None) == (costs_per_type is None):
        raise InstanceError("give exactly one of `costs` or `costs_per_type`")
    try:
        r = tuple(to_fraction(v) for v in rewards)
        F = tuple(
            tuple(tuple(to_fraction(p) for p in row) for row in rows) for rows in forecasts
        )
        if costs is not None:
            shared = True
            base = tuple(to_fraction(v) for v in costs)
            c = tuple(base for _ in F)
        else:
            shared = False
            c = tuple(tuple(to_fraction(v) for v in row) for row in costs_per_type)
        T = len(F)
        w = (
            tuple(Fraction(1, T) for _ in range(T))
            if weights is None
            else tuple(to_fraction(v) for v in weights)
        )
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InstanceError(f"bad numeric literal: {exc}") from exc

    T = len(F)
    if T == 0:
        raise InstanceError("instance needs at least one type")
    m = len(r)
    if m == 0:
        raise InstanceError("instance needs at least one outcome")
    n = len(F[0])
    if n == 0:
        raise InstanceError("instance needs at least one action")
    for t, rows in enumerate(F):
        if len(rows) != n:
            raise InstanceError(f"forecasts[{t}] has {len(rows)} actions, expected {n}")
        for i, row in enumerate(rows):
            if len(row) != m:
                raise InstanceError(
                    f"forecasts[{t}][{i}] has {len(row)} outcomes, expected {m}"
                )
    if len(c) != T:
        raise InstanceError(f"costs_per_type has {len(c)} rows, expected {T}")
    for t, row in enumerate(c):
        if len(row) != n:
            raise InstanceError(f"costs for type {t} have {len(row)} entries, expected {n}")
    if len(w) != T:
        raise InstanceError(f"type_weights has {len(w)} entries, expected {T}")
    if not shared and all(row == c[0] for row in c):
        shared = True
    return Instance(c, r, F, w, shared, 0, dict(metadata or {}))


def validate(
    instance: Instance, *, require_sorted: bool = False, require_normalized: bool = False
) -> list:
    """Return every violated invariant; an empty list means valid.

    The default checks are the ones every computation relies on: probabilities
    in [0, 1] with rows summing to one, nonnegative costs and rewards, positive
    type weights summing to one.  ``require_sorted`` adds the ordering
    convention (costs and rewards nondecreasing) and ``require_normalized`` the
    zero-cost-action / zero-reward-outcome convention.
    """
    tol = instance.tolerance
    out = []
    for t, rows in enumerate(instance.forecasts):
        for i, row in enumerate(rows):
            for j, p in enumerate(row):
                if p < -tol or p > 1 + tol:
                    out.append(
                        Violation(
                            "probability",
                            f"probability {p} outside [0, 1] at (t={t},i={i},j={j})",
                            (t, i, j),
                        )
                    )
            total = sum(row)
            if abs(total - 1) > tol:
                out.append(
                    Violation("row-sum", f"row sum ≠ 1 at (t={t},i={i}): {total}", (t, i))
                )
    for t, row in enumerate(instance.costs):
        for i, v in enumerate(row):
            if v < -tol:
                where = (t, i) if not instance.shared else (i,)
                out.append(Violation("cost", f"negative cost {v} at {where}", where))
        if instance.shared:
            break
    for j, v in enumerate(instance.rewards):
        if v < -tol:
            out.append(Violation("reward", f"negative reward {v} at (j={j})", (j,)))
    for t, v in enumerate(instance.weights):
        if v <= 0:
            out.append(Violation("weight", f"type weight {v} not positive at (t={t})", (t,)))
    if abs(sum(instance.weights) - 1) > tol:
        out.append(Violation("weight-sum", f"type weights sum to {sum(instance.weights)}, not 1"))

    if require_sorted:
        for t, row in enumerate(instance.costs):
            for i in range(len(row) - 1):
                if row[i] > row[i + 1]:
                    out.append(
                        Violation("cost-order", f"costs decrease at (t={t},i={i})", (t, i))
                    )
        r = instance.rewards
        for j in range(len(r) - 1):
            if r[j] > r[j + 1]:
                out.append(Violation("reward-order", f"rewards decrease at (j={j})", (j,)))
    if require_normalized:
        for t, row in enumerate(instance.costs):
            if min(row) != 0:
                out.append(Violation("zero-cost", f"no zero-cost action for type {t}", (t,)))
            if instance.shared:
                break
        if min(instance.rewards) != 0:
            out.append(Violation("zero-reward", "no zero-reward outcome"))
    return out


def check_valid(instance: Instance, **kwargs) -> Instance:
    problems = validate(instance, **kwargs)
    if problems:
        raise InstanceError("; ".join(str(v) for v in problems))
    return instance


def normalize(instance: Instance) -> Instance:
    """Shift costs (per type) and rewards so the minimum of each is zero.

    Action choices under any contract are unchanged; every profit drops by the
    reward shift.
    """
    costs = tuple(tuple(v - min(row) for v in row) for row in instance.costs)
    low = min(instance.rewards)
    rewards = tuple(v - low for v in instance.rewards)
    if costs == instance.costs and rewards == instance.rewards:
        return instance
    return replace(instance, costs=costs, rewards=rewards, metadata=dict(instance.metadata))


def expected_rewards(instance: Instance) -> tuple:
    return instance.reward_table


@dataclass(frozen=True)
class CostGapProfile:
    gaps: tuple  # ((gap value, multiplicity), ...) sorted by value
    delta: float

    @property
    def multiplicities(self) -> tuple:
        return tuple(k for _, k in self.gaps)


def cost_gap_statistic(instance: Instance) -> CostGapProfile:
    """Multiset of consecutive cost gaps over all types and its log-multiplicity sum.

    Costs are sorted per type first; ``delta`` uses the natural logarithm.
    """
    if instance.num_actions < 2:
        raise ValueError("cost gaps need at least two actions")
    counts = Counter()
    for row in instance.costs:
        ordered = sorted(row)
        for a, b in zip(ordered, ordered[1:]):
            counts[b - a] += 1
    gaps = tuple(sorted(counts.items()))
    return CostGapProfile(gaps, sum(math.log(k) for _, k in gaps))


def perturb_costs(instance: Instance, epsilon, direction: Sequence) -> Instance:
    """Shift costs by ``epsilon * direction`` entrywise.

    ``direction`` holds values in [-1, 1]: a length-n vector applies to every
    type (keeping shared costs shared), a T x n table perturbs per type.
    """
    eps = to_fraction(epsilon) if instance.is_exact else float(epsilon)
    if eps < 0:
        raise ValueError("epsilon must be nonnegative")
    T, n = instance.num_types, instance.num_actions
    if len(direction) == T and all(isinstance(d, (list, tuple)) for d in direction):
        table = [list(d) for d in direction]
    elif len(direction) == n:
        table = [list(direction)] * T
    else:
        raise ValueError(f"direction must have {n} entries or shape {T}x{n}")
    new = []
    for t in range(T):
        if len(table[t]) != n:
            raise ValueError(f"direction row {t} has {len(table[t])} entries, expected {n}")
        row = []
        for i in range(n):
            d = to_fraction(table[t][i]) if instance.is_exact else float(table[t][i])
            if abs(d) > 1:
                raise ValueError(f"direction entry {d} outside [-1, 1]")
            v = instance.costs[t][i] + eps * d
            if v < 0:
                raise ValueError(f"perturbation makes cost negative at (t={t},i={i})")
            row.append(v)
        new.append(tuple(row))
    costs = tuple(new)
    shared = all(row == costs[0] for row in costs)
    return replace(instance, costs=costs, shared=shared, metadata=dict(instance.metadata))


def sort_instance(instance: Instance):
    """Reorder outcomes by reward and each type's actions by cost (stable).

    Returns ``(sorted_instance, action_orders, outcome_order)`` where
    ``action_orders[t][k]`` is the original index of the k-th action of type t.
    With shared costs all types use the same order, so the result stays shared.
    """
    outcome_order = sorted(range(instance.num_outcomes), key=lambda j: instance.rewards[j])
    action_orders = tuple(
        tuple(sorted(range(instance.num_actions), key=lambda i: row[i]))
        for row in instance.costs
    )
    rewards = tuple(instance.rewards[j] for j in outcome_order)
    costs = tuple(
        tuple(row[i] for i in order) for row, order in zip(instance.costs, action_orders)
    )
    forecasts = tuple(
        tuple(tuple(rows[i][j] for j in outcome_order) for i in order)
        for rows, order in zip(instance.forecasts, action_orders)
    )
    meta = dict(instance.metadata)
    if list(outcome_order) != list(range(instance.num_outcomes)) or any(
        list(o) != list(range(instance.num_actions)) for o in action_orders
    ):
        meta["sort_permutation"] = {
            "actions": [list(o) for o in action_orders],
            "outcomes": list(outcome_order),
        }
    out = replace(instance, costs=costs, rewards=rewards, forecasts=forecasts, metadata=meta)
    return out, action_orders, tuple(outcome_order)
