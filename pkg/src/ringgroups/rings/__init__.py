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
    RElem,
    Ring,
    is_prime,
)
from .homs import (
    CoefficientMap,
    Composite,
    EvalVariable,
    ExcisionRetraction,
    ExcisionSplitting,
    ExcisionSum,
    Inclusion,
    LocalizationMap,
    ReduceModIdeal,
    Retraction,
    RingHom,
    SwanWeibelPhi,
    hom_apply,
)
from .serial import ideal_from_json, parse_ring, ring_from_json, ring_to_json


def arith(op: str, a: RElem, b: RElem | None = None) -> RElem:
    """Dispatch ``op`` in {add, sub, mul, neg}; raises RingMismatch across rings."""
    if op == "neg":
        return -a
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def is_unit(a: RElem) -> RElem | None:
    return a.inverse()


def ideal_contains(ideal: IdealSpec, a) -> bool:
    return ideal.contains(a)


__all__ = [
    "CoefficientMap", "Composite", "EvalVariable", "Excision", "ExcisionRetraction",
    "ExcisionSplitting", "ExcisionSum", "IdealSpec", "Inclusion", "Integers",
    "LocalizationMap", "LocalizedAtPrime", "Modular", "Polynomial", "PrimeField", "Quotient",
    "Rationals", "RElem", "ReduceModIdeal", "Retraction", "Ring", "RingHom", "SwanWeibelPhi",
    "arith", "hom_apply", "ideal_contains", "ideal_from_json", "is_prime", "is_unit",
    "parse_ring", "ring_from_json", "ring_to_json",
]
