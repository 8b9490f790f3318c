"""Agent best responses under contracts, menus and linear contracts.

Ties in agent utility go to the action better for the principal, then to the
lowest index (for menus: the lowest ``(reported type, action)`` pair).  In
float mode comparisons use the instance tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .instance import Instance
from .numeric import to_fraction


@dataclass(frozen=True)
class Contract:
    x: tuple

    def __post_init__(self):
        vals = tuple(v if isinstance(v, (Fraction, float)) else to_fraction(v) for v in self.x)
        if any(v < 0 for v in vals):
            raise ValueError("contract transfers must be nonnegative (limited liability)")
        object.__setattr__(self, "x", vals)

    def __len__(self):
        return len(self.x)


@dataclass(frozen=True)
class Menu:
    contracts: tuple

    def __post_init__(self):
        object.__setattr__(self, "contracts", tuple(as_contract(c) for c in self.contracts))
        if not self.contracts:
            raise ValueError("a menu needs at least one contract")

    def __len__(self):
        return len(self.contracts)


@dataclass(frozen=True)
class LinearContract:
    alpha: Fraction

    def __post_init__(self):
        a = self.alpha if isinstance(self.alpha, (Fraction, float)) else to_fraction(self.alpha)
        if not 0 <= a <= 1:
            raise ValueError(f"linear contract share {a} outside [0, 1]")
        object.__setattr__(self, "alpha", a)

    def contract(self, instance: Instance) -> Contract:
        return Contract(tuple(self.alpha * r for r in instance.rewards))


def as_contract(value) -> Contract:
    return value if isinstance(value, Contract) else Contract(tuple(value))


def as_menu(value) -> Menu:
    return value if isinstance(value, Menu) else Menu(tuple(value))


@dataclass(frozen=True)
class TypeResponse:
    type_index: int
    action: int
    utility: object
    profit: object
    transfer: object
    entry: Optional[int] = None  # menu entry chosen (menus only)
    truthful_optimal: Optional[bool] = None


@dataclass(frozen=True)
class ResponseReport:
    responses: tuple
    profit: object
    utility: object

    @property
    def profile(self) -> tuple:
        return tuple(r.action for r in self.responses)

    @property
    def entries(self) -> tuple:
        return tuple(r.entry for r in self.responses)

    @property
    def truthful(self) -> bool:
        return all(r.truthful_optimal is not False for r in self.responses)


def _zero(instance):
    return Fraction(0) if instance.is_exact else 0.0


def _dot(a, b, zero):
    return sum((p * q for p, q in zip(a, b)), zero)


def _check_len(instance, contract):
    if len(contract.x) != instance.num_outcomes:
        raise ValueError(
            f"contract has {len(contract.x)} transfers, instance has {instance.num_outcomes} outcomes"
        )


def _better(u, p, best_u, best_p, tol):
    if u > best_u + tol:
        return True
    if u >= best_u - tol and p > best_p + tol:
        return True
    return False


def _options(instance, t, x):
    """(utility, profit, transfer) for each action of type t under transfers x."""
    zero = _zero(instance)
    R = instance.reward_table[t]
    costs = instance.costs[t]
    out = []
    for i, row in enumerate(instance.forecasts[t]):
        pay = _dot(row, x, zero)
        out.append((pay - costs[i], R[i] - pay, pay))
    return out


def best_response(instance: Instance, type_index: int, contract) -> tuple:
    """Return ``(action, utility, principal profit)`` for one type."""
    contract = as_contract(contract)
    _check_len(instance, contract)
    if not 0 <= type_index < instance.num_types:
        raise ValueError(f"type index {type_index} out of range")
    opts = _options(instance, type_index, contract.x)
    tol = instance.tolerance
    best = 0
    for i in range(1, len(opts)):
        if _better(opts[i][0], opts[i][1], opts[best][0], opts[best][1], tol):
            best = i
    return best, opts[best][0], opts[best][1]


def evaluate_contract(instance: Instance, contract) -> ResponseReport:
    contract = as_contract(contract)
    _check_len(instance, contract)
    zero = _zero(instance)
    tol = instance.tolerance
    responses = []
    for t in range(instance.num_types):
        opts = _options(instance, t, contract.x)
        best = 0
        for i in range(1, len(opts)):
            if _better(opts[i][0], opts[i][1], opts[best][0], opts[best][1], tol):
                best = i
        u, p, pay = opts[best]
        responses.append(TypeResponse(t, best, u, p, pay))
    return _aggregate(instance, responses, zero)


def _aggregate(instance, responses, zero):
    w = instance.weights
    profit = sum((w[r.type_index] * r.profit for r in responses), zero)
    utility = sum((w[r.type_index] * r.utility for r in responses), zero)
    return ResponseReport(tuple(responses), profit, utility)


def evaluate_menu(instance: Instance, menu, *, truthful: bool = False) -> ResponseReport:
    """Each type picks its best ``(entry, action)`` pair from the menu.

    With ``truthful=True`` every type is held to its own entry.  Each response
    records whether truthful reporting is among the utility-maximizing entries.
    """
    menu = as_menu(menu)
    if len(menu) != instance.num_types:
        raise ValueError(f"menu has {len(menu)} contracts, instance has {instance.num_types} types")
    for c in menu.contracts:
        _check_len(instance, c)
    zero = _zero(instance)
    tol = instance.tolerance
    responses = []
    for t in range(instance.num_types):
        table = [_options(instance, t, c.x) for c in menu.contracts]
        entries = [t] if truthful else range(len(menu))
        best = None
        for e in entries:
            for i, (u, p, _) in enumerate(table[e]):
                if best is None or _better(u, p, table[best[0]][best[1]][0], table[best[0]][best[1]][1], tol):
                    best = (e, i)
        e, i = best
        u, p, pay = table[e][i]
        own = max(opt[0] for opt in table[t])
        responses.append(TypeResponse(t, i, u, p, pay, entry=e, truthful_optimal=own >= u - tol))
    return _aggregate(instance, responses, zero)


@dataclass(frozen=True)
class IcViolation:
    type_index: int
    reported: int
    slack: object  # own-entry utility minus misreport utility (negative)


@dataclass(frozen=True)
class ObedienceViolation:
    type_index: int
    target: int
    better_action: int
    slack: object  # target utility minus best utility (negative)


@dataclass(frozen=True)
class IcReport:
    violations: tuple
    obedience: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations and not self.obedience


def verify_ic(instance: Instance, menu, target_profile: Optional[Sequence[int]] = None) -> IcReport:
    """Check that no type gains by reporting another type.

    The utility of an entry is the agent's best-response utility under it.
    With ``target_profile`` each type must also weakly prefer its assigned
    action under its own contract.
    """
    menu = as_menu(menu)
    if len(menu) != instance.num_types:
        raise ValueError(f"menu has {len(menu)} contracts, instance has {instance.num_types} types")
    tol = instance.tolerance
    violations = []
    obedience = []
    for t in range(instance.num_types):
        utils = [best_response(instance, t, c)[1] for c in menu.contracts]
        for s, u in enumerate(utils):
            if s != t and utils[t] < u - tol:
                violations.append(IcViolation(t, s, utils[t] - u))
        if target_profile is not None:
            a = target_profile[t]
            opts = _options(instance, t, menu.contracts[t].x)
            best = max(range(len(opts)), key=lambda i: (opts[i][0], -i))
            if opts[a][0] < opts[best][0] - tol:
                obedience.append(ObedienceViolation(t, a, best, opts[a][0] - opts[best][0]))
    return IcReport(tuple(violations), tuple(obedience))


def evaluate_linear(instance: Instance, alpha) -> ResponseReport:
    lin = alpha if isinstance(alpha, LinearContract) else LinearContract(alpha)
    return evaluate_contract(instance, lin.contract(instance))
