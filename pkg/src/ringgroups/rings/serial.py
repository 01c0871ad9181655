"""Ring descriptors as JSON-able dicts, plus a few command-line shorthands."""
from __future__ import annotations

import json
import re

from ..errors import InvalidRing, ParseError
from .core import (
    Excision,
    IdealSpec,
    Integers,
    LocalizedAtPrime,
    Modular,
    Polynomial,
    PrimeField,
    Quotient,
    Rationals,
    Ring,
)


def ring_from_json(d: dict) -> Ring:
    if not isinstance(d, dict) or "ring" not in d:
        raise ParseError(f"ring descriptor must be an object with a 'ring' key: {d!r}")
    kind = d["ring"]
    try:
        if kind == "Integers":
            return Integers()
        if kind == "Rationals":
            return Rationals()
        if kind == "Modular":
            return Modular(int(d["n"]))
        if kind == "PrimeField":
            return PrimeField(int(d["p"]))
        if kind == "LocalizedAtPrime":
            if "base" in d and d["base"] != {"ring": "Integers"}:
                raise InvalidRing("only ZZ can be localized at a prime")
            return LocalizedAtPrime(int(d["p"]))
        if kind == "Polynomial":
            return Polynomial(ring_from_json(d["base"]), d.get("var", "X"))
        if kind == "Quotient":
            base = ring_from_json(d["base"])
            if not isinstance(base, Polynomial):
                raise InvalidRing("Quotient base must be a Polynomial ring")
            return Quotient(base, base.from_json_value(d["modulus"]))
        if kind == "Excision":
            base = ring_from_json(d["base"])
            gens = tuple(base.from_json_value(g) for g in d["ideal"])
            return Excision(base, gens)
    except KeyError as exc:
        raise ParseError(f"ring descriptor {kind!r} is missing {exc}") from None
    raise ParseError(f"unknown ring variant {kind!r}")


def ring_to_json(ring: Ring) -> dict:
    return ring.descriptor()


_SHORT = [
    (re.compile(r"^(?:zz|Z|ZZ|integers)$"), lambda m: Integers()),
    (re.compile(r"^(?:qq|Q|QQ|rationals)$"), lambda m: Rationals()),
    (re.compile(r"^(?:fp|F|GF)(\d+)$"), lambda m: PrimeField(int(m.group(1)))),
    (re.compile(r"^(?:z|zmod|Z/)(\d+)$"), lambda m: Modular(int(m.group(1)))),
    (re.compile(r"^zloc(\d+)$"), lambda m: LocalizedAtPrime(int(m.group(1)))),
]


def parse_ring(text: str) -> Ring:
    """Accept a JSON descriptor, or a shorthand like ``fp5``, ``z8``, ``zz``, ``fp5[X]``, ``fp2[t]/(t^3)``."""
    text = text.strip()
    if text.startswith("{"):
        try:
            return ring_from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad ring JSON: {exc}") from None
    m = re.match(r"^(.*\[[A-Za-z_]\w*\])/\((.+)\)$", text)
    if m:
        base = parse_ring(m.group(1))
        return Quotient(base, base.coerce(m.group(2)))
    m = re.match(r"^(.*)\[([A-Za-z_]\w*)\]$", text)
    if m:
        return Polynomial(parse_ring(m.group(1)), m.group(2))
    for pat, make in _SHORT:
        mm = pat.match(text)
        if mm:
            return make(mm)
    raise ParseError(f"unknown ring shorthand {text!r}")


def ideal_from_json(ring: Ring, gens) -> IdealSpec:
    if isinstance(gens, str):
        gens = [g for g in gens.split(",") if g.strip()]
    return IdealSpec(ring, tuple(ring.from_json_value(g) for g in gens))
