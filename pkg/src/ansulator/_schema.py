"""Shipped JSON schemas and validation with JSON-pointer error locations."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import jsonschema
from referencing import Registry, Resource

from .errors import SchemaError

SCHEMA_NAMES = ("cyclotomic", "category", "frobenius", "invariant", "sweep", "selftest", "report")


def load_schema(name: str) -> dict:
    return json.loads(resources.files("ansulator.schemas").joinpath(f"{name}.json").read_text())


@lru_cache(maxsize=None)
def _registry() -> Registry:
    pairs = []
    for name in SCHEMA_NAMES:
        schema = load_schema(name)
        pairs.append((schema["$id"], Resource.from_contents(schema)))
    return Registry().with_resources(pairs)


@lru_cache(maxsize=None)
def _validator(name: str):
    schema = load_schema(name)
    return jsonschema.Draft202012Validator(schema, registry=_registry())


def _pointer(error: jsonschema.ValidationError) -> str:
    parts = [str(p).replace("~", "~0").replace("/", "~1") for p in error.absolute_path]
    if error.validator == "required":
        missing = [k for k in error.validator_value if k not in error.instance]
        if missing:
            parts.append(missing[0])
    elif error.validator == "additionalProperties":
        extra = sorted(set(error.instance) - set(error.schema.get("properties", {})))
        if extra:
            parts.append(extra[0])
    return "/" + "/".join(parts) if parts else ""


def validate(instance, name: str) -> None:
    """Raise :class:`SchemaError` at the first (deepest, then leftmost) problem."""
    errors = sorted(_validator(name).iter_errors(instance), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        err = errors[0]
        raise SchemaError(_pointer(err), err.message)
