"""Ring homomorphisms used to move words and matrices between rings."""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import InvalidRing, RingMismatch, UndecidableError
from .core import (
    Excision,
    IdealSpec,
    Integers,
    LocalizedAtPrime,
    Modular,
    Polynomial,
    PrimeField,
    Quotient,
    RElem,
    Ring,
    is_prime,
)


class RingHom:
    domain: Ring
    codomain: Ring

    def raw(self, v):
        raise NotImplementedError

    def __call__(self, a):
        if isinstance(a, RElem):
            if a.ring != self.domain:
                raise RingMismatch(f"{type(self).__name__} expects {self.domain}, got {a.ring}")
            return RElem(self.codomain, self.raw(a.v))
        return RElem(self.codomain, self.raw(self.domain.coerce(a)))

    def then(self, other: "RingHom") -> "Composite":
        """``other ∘ self``."""
        return Composite(self, other)


def hom_apply(h: RingHom, a) -> RElem:
    return h(a)


@dataclass(frozen=True)
class EvalVariable(RingHom):
    """Substitute the outermost variable of ``domain`` by ``value``.

    ``value`` may live in the base ring or in any ring the base coerces into
    (e.g. X ↦ X·T lands in base[T]).
    """

    domain: Polynomial
    value: RElem

    @property
    def codomain(self) -> Ring:
        return self.value.ring

    def raw(self, v):
        C = self.codomain
        B = self.domain.base
        acc = C.zero()
        x = self.value.v
        for c in reversed(v):
            acc = C.add(C.mul(acc, x), C.coerce(RElem(B, c)))
        return acc


@dataclass(frozen=True)
class ReduceModIdeal(RingHom):
    domain: Ring
    ideal: IdealSpec

    def __post_init__(self):
        if self.ideal.ring != self.domain:
            raise RingMismatch("ideal lives in a different ring")
        if not self.ideal.is_proper:
            raise InvalidRing("reduction modulo the unit ideal")

    @property
    def codomain(self) -> Ring:
        D = self.domain
        if isinstance(D, Integers):
            g = abs(math.gcd(*self.ideal.gens))
            if g == 0:
                return D
            return PrimeField(g) if is_prime(g) else Modular(g)
        if isinstance(D, Modular):
            g = math.gcd(D.n, *self.ideal.gens)
            return PrimeField(g) if is_prime(g) else Modular(g)
        if isinstance(D, Polynomial) and D.base.is_field:
            g = ()
            for h in self.ideal.gens:
                g = D.gcd(g, h)
            return Quotient(D, g)
        raise UndecidableError(f"reduction modulo an ideal of {D}")

    def raw(self, v):
        C = self.codomain
        if isinstance(C, Quotient):
            return C.canon(v)
        return C.from_int(v)


@dataclass(frozen=True)
class ExcisionRetraction(RingHom):
    """π(r, i) = r."""

    domain: Excision

    @property
    def codomain(self):
        return self.domain.base

    def raw(self, v):
        return v[0]


@dataclass(frozen=True)
class ExcisionSum(RingHom):
    """f(r, i) = r + i."""

    domain: Excision

    @property
    def codomain(self):
        return self.domain.base

    def raw(self, v):
        return self.domain.base.add(v[0], v[1])


@dataclass(frozen=True)
class ExcisionSplitting(RingHom):
    """r ↦ (r, 0), a section of the retraction."""

    codomain: Excision

    @property
    def domain(self):
        return self.codomain.base

    def raw(self, v):
        return (v, self.codomain.base.zero())


@dataclass(frozen=True)
class Inclusion(RingHom):
    """base ↪ base[X] as constants."""

    codomain: Polynomial

    @property
    def domain(self):
        return self.codomain.base

    def raw(self, v):
        return self.codomain.const(v)


@dataclass(frozen=True)
class CoefficientMap(RingHom):
    """R[X] → S[X] applying ``inner`` to every coefficient."""

    inner: RingHom
    var: str = "X"

    @property
    def domain(self):
        return Polynomial(self.inner.domain, self.var)

    @property
    def codomain(self):
        return Polynomial(self.inner.codomain, self.var)

    def raw(self, v):
        return self.codomain.canon(tuple(self.inner.raw(c) for c in v))


@dataclass(frozen=True)
class SwanWeibelPhi(RingHom):
    """A → A[T], a_0 + a_1 + a_2 + ... ↦ a_0 + a_1 T + a_2 T^2 + ... for A graded by t-degree."""

    domain: Quotient
    var: str = "T"

    def __post_init__(self):
        if not self.domain.is_graded_monomial():
            raise InvalidRing("the Swan-Weibel map needs a monomial modulus t^k (graded quotient)")

    @property
    def codomain(self):
        return Polynomial(self.domain, self.var)

    def raw(self, v):
        A = self.domain
        K = A.coeff_ring
        coeffs = []
        for d, c in enumerate(v):
            mono = [K.zero()] * A.degree
            mono[d] = c
            coeffs.append(tuple(mono))
        return self.codomain.canon(tuple(coeffs))


@dataclass(frozen=True)
class LocalizationMap(RingHom):
    codomain: LocalizedAtPrime

    @property
    def domain(self):
        return Integers()

    def raw(self, v):
        return self.codomain.from_int(v)


@dataclass(frozen=True)
class Composite(RingHom):
    first: RingHom
    second: RingHom

    def __post_init__(self):
        if self.first.codomain != self.second.domain:
            raise RingMismatch("composition of incompatible homomorphisms")

    @property
    def domain(self):
        return self.first.domain

    @property
    def codomain(self):
        return self.second.codomain

    def raw(self, v):
        return self.second.raw(self.first.raw(v))


@dataclass(frozen=True)
class Retraction:
    """A surjection ``pi`` together with a ring section ``split`` (pi ∘ split = id)."""

    pi: RingHom
    split: RingHom

    def __post_init__(self):
        if self.pi.domain != self.split.codomain or self.pi.codomain != self.split.domain:
            raise RingMismatch("retraction and splitting do not match")

    @staticmethod
    def excision(ring: Excision) -> "Retraction":
        return Retraction(ExcisionRetraction(ring), ExcisionSplitting(ring))

    @staticmethod
    def at_zero(ring: Polynomial) -> "Retraction":
        return Retraction(EvalVariable(ring, ring.base(0)), Inclusion(ring))

    def kernel_ideal(self) -> IdealSpec:
        S = self.pi.domain
        if isinstance(self.pi, ExcisionRetraction):
            return IdealSpec(S, tuple((S.base.zero(), g) for g in S.gens))
        if isinstance(self.pi, EvalVariable) and self.pi.value.v == S.base.zero():
            return IdealSpec(S, (S.variable(S.var),))
        raise UndecidableError("kernel of a general retraction")

    def kernel_part(self, v):
        """v - split(pi(v)), which lies in ker pi."""
        S = self.pi.domain
        return S.sub(v, self.split.raw(self.pi.raw(v)))

    def kernel_contains(self, v) -> bool:
        return self.pi.raw(v) == self.pi.codomain.zero()
