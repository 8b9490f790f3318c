"""JSON formats for instances, contracts, menus and graphs.

Numbers are written as exact strings (``"3/4"``); on input decimal strings,
``"p/q"`` strings and bare JSON numbers are all accepted.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Union

from .generators import Graph
from .instance import Instance, InstanceError, make_instance, sort_instance
from .numeric import fraction_str, to_fraction
from .response import Contract, Menu

PathLike = Union[str, Path]

_RESERVED = {
    "types", "actions", "outcomes", "costs", "costs_per_type", "rewards",
    "type_weights", "forecasts",
}


def _jsonable(value):
    if isinstance(value, (Fraction, float)):
        return fraction_str(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _read_json(source):
    if isinstance(source, dict):
        return source
    try:
        text = Path(source).read_text(encoding="utf-8")
    except OSError as exc:
        raise InstanceError(f"cannot read {source}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{source}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def instance_from_dict(data: dict, *, sort: bool = False) -> Instance:
    if not isinstance(data, dict):
        raise InstanceError("instance file must hold a JSON object")
    for key in ("rewards", "forecasts"):
        if key not in data:
            raise InstanceError(f"missing field {key!r}")
    meta = {k: v for k, v in data.items() if k not in _RESERVED}
    inst = make_instance(
        rewards=data["rewards"],
        forecasts=data["forecasts"],
        costs=data.get("costs"),
        costs_per_type=data.get("costs_per_type"),
        weights=data.get("type_weights"),
        metadata=meta,
    )
    for key, actual in (
        ("types", inst.num_types),
        ("actions", inst.num_actions),
        ("outcomes", inst.num_outcomes),
    ):
        if key in data and data[key] != actual:
            raise InstanceError(f"header says {key}={data[key]} but the data has {actual}")
    if sort:
        inst = sort_instance(inst)[0]
    return inst


def load_instance(source: PathLike, *, sort: bool = False) -> Instance:
    """Read an instance file.  ``sort=True`` reorders actions/outcomes and
    records the permutation under ``sort_permutation``."""
    return instance_from_dict(_read_json(source), sort=sort)


def instance_to_dict(instance: Instance) -> dict:
    out = {
        "types": instance.num_types,
        "actions": instance.num_actions,
        "outcomes": instance.num_outcomes,
    }
    if instance.shared:
        out["costs"] = [fraction_str(v) for v in instance.costs[0]]
    else:
        out["costs_per_type"] = [[fraction_str(v) for v in row] for row in instance.costs]
    out["rewards"] = [fraction_str(v) for v in instance.rewards]
    out["type_weights"] = [fraction_str(v) for v in instance.weights]
    out["forecasts"] = [
        [[fraction_str(p) for p in row] for row in rows] for rows in instance.forecasts
    ]
    for key, value in instance.metadata.items():
        if key not in _RESERVED:
            out[key] = _jsonable(value)
    return out


def dump_json(data, path: PathLike) -> None:
    Path(path).write_text(json.dumps(_jsonable(data), indent=2) + "\n", encoding="utf-8")


def save_instance(instance: Instance, path: PathLike) -> None:
    dump_json(instance_to_dict(instance), path)


def load_contracts(source: PathLike):
    """Return a :class:`Contract` for ``{"x": [...]}`` or a :class:`Menu` for
    ``{"contracts": [[...], ...]}``."""
    data = _read_json(source)
    try:
        if isinstance(data, dict) and "x" in data:
            return Contract(tuple(to_fraction(v) for v in data["x"]))
        if isinstance(data, dict) and "contracts" in data:
            return Menu(
                tuple(Contract(tuple(to_fraction(v) for v in c)) for c in data["contracts"])
            )
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InstanceError(f"bad contract entry: {exc}") from exc
    raise InstanceError('contract file needs an "x" or a "contracts" field')


def contract_to_dict(value) -> dict:
    if isinstance(value, Menu):
        return {"contracts": [[fraction_str(v) for v in c.x] for c in value.contracts]}
    return {"x": [fraction_str(v) for v in value.x]}


def load_graph(source: PathLike) -> Graph:
    data = _read_json(source)
    try:
        return Graph.from_edges(int(data["n"]), data.get("edges", []))
    except (KeyError, TypeError) as exc:
        raise InstanceError(f'graph file needs "n" and "edges": {exc}') from exc
    except ValueError as exc:
        raise InstanceError(str(exc)) from exc


def graph_to_dict(graph: Graph) -> dict:
    edges = [
        [u, v]
        for u in range(1, graph.num_vertices + 1)
        for v in graph.neighbors(u)
        if u < v
    ]
    return {"n": graph.num_vertices, "edges": edges}
