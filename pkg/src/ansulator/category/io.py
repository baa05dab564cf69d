"""JSON category files: labels by name, scalars in the exactnum JSON form."""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .._schema import validate
from ..errors import SchemaError, ValidationError
from ..exactnum import Cyclotomic, root_of_unity_exponent
from .data import FusionData, validate_fusion_data
from .pointed import PointedData


def category_to_json(d: FusionData) -> dict:
    names = d.labels
    fusion = [[names[a], names[b], names[c], int(d.fusion[a, b, c])] for a, b, c in np.argwhere(d.fusion > 0)]
    out = {
        "name": d.name,
        "labels": list(names),
        "dual": [names[a] for a in d.dual],
        "fusion": fusion,
        "twist": {names[a]: t.to_json() for a, t in enumerate(d.twist)},
        "qdim": {names[a]: q.to_json() for a, q in enumerate(d.qdim)},
        "total_dim": d.total_dim.to_json(),
    }
    if d.pointed is not None:
        pd = d.pointed
        el = [names[a] for a in pd.elements]
        n = pd.size
        omega = [
            [el[a], el[b], el[c], pd.omega_value(a, b, c).to_json()]
            for a in range(n) for b in range(n) for c in range(n) if pd.omega[a, b, c] % pd.root_order
        ]
        braiding = [[el[a], el[b], pd.braiding_value(a, b).to_json()] for a in range(n) for b in range(n)]
        out["pointed"] = {
            "group": {"type": "product_of_cyclics", "orders": list(pd.orders)},
            "elements": el,
            "omega": omega,
            "braiding": braiding,
        }
    return out


def save_category(d: FusionData, path) -> None:
    Path(path).write_text(json.dumps(category_to_json(d), indent=1) + "\n")


def _cyc(obj) -> Cyclotomic:
    return Cyclotomic.from_json(obj)


def _label_lookup(names: list[str]):
    index = {n: i for i, n in enumerate(names)}

    def lookup(name: str, pointer: str) -> int:
        if name not in index:
            raise SchemaError(pointer, f"unknown label {name!r}")
        return index[name]

    return lookup


def _pointed_from_json(obj: dict, lookup) -> PointedData:
    orders = tuple(obj["group"]["orders"])
    n = math.prod(orders)
    if len(obj["elements"]) != n:
        raise SchemaError("/pointed/elements", f"expected {n} elements for orders {list(orders)}")
    elements = tuple(lookup(e, f"/pointed/elements/{i}") for i, e in enumerate(obj["elements"]))
    pos = {lab: g for g, lab in enumerate(elements)}

    def element(name, pointer):
        lab = lookup(name, pointer)
        if lab not in pos:
            raise SchemaError(pointer, f"label {name!r} is not a group element")
        return pos[lab]

    omega_vals = [(i, row) for i, row in enumerate(obj["omega"])]
    braid_vals = [(i, row) for i, row in enumerate(obj["braiding"])]
    values = [_cyc(r[3]) for _, r in omega_vals] + [_cyc(r[2]) for _, r in braid_vals]
    M = math.lcm(2, *(v.order for v in values)) if values else 2
    omega = np.zeros((n, n, n), dtype=np.int64)
    braid = np.zeros((n, n), dtype=np.int64)
    seen = np.zeros((n, n), dtype=bool)
    for (i, row), v in zip(omega_vals, values):
        k = root_of_unity_exponent(v, M)
        if k is None:
            raise SchemaError(f"/pointed/omega/{i}/3", "associator values must be roots of unity")
        a, b, c = (element(row[j], f"/pointed/omega/{i}/{j}") for j in range(3))
        omega[a, b, c] = k
    for (i, row), v in zip(braid_vals, values[len(omega_vals):]):
        k = root_of_unity_exponent(v, M)
        if k is None:
            raise SchemaError(f"/pointed/braiding/{i}/2", "braiding values must be roots of unity")
        a, b = (element(row[j], f"/pointed/braiding/{i}/{j}") for j in range(2))
        braid[a, b] = k
        seen[a, b] = True
    if not seen.all():
        raise SchemaError("/pointed/braiding", "braiding table must list every pair of group elements")
    return PointedData(orders=orders, elements=elements, root_order=M, omega=omega, braiding=braid)


def category_from_json(obj, *, check: bool = True) -> FusionData:
    validate(obj, "category")
    names = list(obj["labels"])
    L = len(names)
    lookup = _label_lookup(names)
    if len(obj["dual"]) != L:
        raise SchemaError("/dual", f"expected {L} entries")
    dual = tuple(lookup(x, f"/dual/{i}") for i, x in enumerate(obj["dual"]))
    fusion = np.zeros((L, L, L), dtype=np.int64)
    for i, (a, b, c, mult) in enumerate(obj["fusion"]):
        fusion[lookup(a, f"/fusion/{i}/0"), lookup(b, f"/fusion/{i}/1"), lookup(c, f"/fusion/{i}/2")] = mult
    scalars = {}
    for key in ("twist", "qdim"):
        table = obj[key]
        for n in names:
            if n not in table:
                raise SchemaError(f"/{key}/{n}", "missing entry")
        for n in table:
            lookup(n, f"/{key}/{n}")
        scalars[key] = tuple(_cyc(table[n]) for n in names)
    pointed = _pointed_from_json(obj["pointed"], lookup) if "pointed" in obj else None
    d = FusionData(
        name=obj["name"], labels=tuple(names), dual=dual, fusion=fusion,
        twist=scalars["twist"], qdim=scalars["qdim"], total_dim=_cyc(obj["total_dim"]), pointed=pointed,
    )
    if check:
        problems = validate_fusion_data(d)
        if problems:
            raise ValidationError(problems)
    return d


def load_category(path, *, check: bool = True) -> FusionData:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"invalid JSON: {exc}") from exc
    return category_from_json(obj, check=check)
