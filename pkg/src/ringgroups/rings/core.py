"""The ring tower: exactly representable commutative rings.

Every ring works on *raw* canonical values (ints, Fractions, tuples) so that
structural equality is ring equality.  :class:`RElem` wraps a raw value with
its ring and gives the usual operator syntax.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable, Iterator

from ..errors import (
    InvalidElement,
    InvalidRing,
    NotAUnit,
    RingMismatch,
    UndecidableError,
)

# Finite rings above this size are not enumerated by brute-force fallbacks.
FINITE_ENUM_LIMIT = 20000


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def p_valuation(a: int, p: int) -> int:
    if a == 0:
        raise ValueError("valuation of 0")
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


class RElem:
    """An element of a ring in the tower, in canonical form."""

    __slots__ = ("ring", "v")

    def __init__(self, ring: "Ring", v: Any):
        self.ring = ring
        self.v = v

    def _other(self, b) -> Any:
        if isinstance(b, RElem):
            if b.ring is not self.ring and b.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {b.ring}")
            return b.v
        return self.ring.coerce(b)

    def __add__(self, b):
        return RElem(self.ring, self.ring.add(self.v, self._other(b)))

    __radd__ = __add__

    def __sub__(self, b):
        return RElem(self.ring, self.ring.sub(self.v, self._other(b)))

    def __rsub__(self, b):
        return RElem(self.ring, self.ring.sub(self._other(b), self.v))

    def __mul__(self, b):
        return RElem(self.ring, self.ring.mul(self.v, self._other(b)))

    __rmul__ = __mul__

    def __neg__(self):
        return RElem(self.ring, self.ring.neg(self.v))

    def __pow__(self, k: int):
        return RElem(self.ring, self.ring.pow(self.v, k))

    def __eq__(self, b):
        if isinstance(b, RElem):
            return self.ring == b.ring and self.v == b.v
        try:
            return self.v == self.ring.coerce(b)
        except Exception:
            return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.v))

    def __repr__(self):
        return f"RElem({self.ring.fmt(self.v)} in {self.ring})"

    def __str__(self):
        return self.ring.fmt(self.v)

    def is_zero(self) -> bool:
        return self.v == self.ring.zero()

    def inverse(self) -> "RElem | None":
        w = self.ring.inv(self.v)
        return None if w is None else RElem(self.ring, w)

    def unit_inverse(self) -> "RElem":
        w = self.ring.inv(self.v)
        if w is None:
            raise NotAUnit(f"{self} is not a unit in {self.ring}")
        return RElem(self.ring, w)

    def to_json(self):
        return self.ring.to_json_value(self.v)


@dataclass(frozen=True)
class IdealSpec:
    """An ideal given by finitely many generators; membership is decided by the ring."""

    ring: "Ring"
    gens: tuple

    @staticmethod
    def of(ring: "Ring", gens: Iterable) -> "IdealSpec":
        return IdealSpec(ring, tuple(ring.coerce(g) for g in gens))

    def contains(self, a) -> bool:
        v = a.v if isinstance(a, RElem) else self.ring.coerce(a)
        if isinstance(a, RElem) and a.ring != self.ring:
            raise RingMismatch(f"{a.ring} vs {self.ring}")
        return self.ring.ideal_contains(self.gens, v)

    @cached_property
    def is_proper(self) -> bool:
        return self.ring.ideal_is_proper(self.gens)

    def elements(self) -> list:
        """All raw members (finite rings only), sorted canonically."""
        return [x for x in self.ring.elements() if self.contains(RElem(self.ring, x))]

    def to_json(self):
        return [self.ring.to_json_value(g) for g in self.gens]

    def __str__(self):
        return "(" + ", ".join(self.ring.fmt(g) for g in self.gens) + ")"


class Ring:
    """Common behaviour; subclasses implement the raw arithmetic."""

    tag = "Ring"
    is_field = False
    is_euclidean = False

    # -- construction of elements -------------------------------------------------
    def __call__(self, x=0) -> RElem:
        return RElem(self, self.coerce(x))

    def elem(self, v) -> RElem:
        return RElem(self, v)

    def coerce(self, x) -> Any:
        if isinstance(x, RElem):
            if x.ring == self:
                return x.v
            return self._coerce_foreign(x)
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, str):
            from .parse import parse_expr

            return parse_expr(self, x)
        return self.canon(x)

    def _coerce_foreign(self, x: RElem):
        raise RingMismatch(f"cannot coerce {x.ring} into {self}")

    def from_int(self, k: int):
        raise NotImplementedError

    def canon(self, v):
        raise NotImplementedError

    def zero(self):
        return self.from_int(0)

    def one(self):
        return self.from_int(1)

    # -- arithmetic ------------------------------------------------------------------
    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def pow(self, a, k: int):
        if k < 0:
            inv = self.inv(a)
            if inv is None:
                raise NotAUnit("negative power of a non-unit")
            a, k = inv, -k
        r = self.one()
        while k:
            if k & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            k >>= 1
        return r

    def inv(self, a):
        """Inverse of a raw value, or None when it is not a unit."""
        raise NotImplementedError

    def is_unit(self, a) -> bool:
        return self.inv(a) is not None

    def is_nilpotent(self, a) -> bool:
        if self.is_finite:
            x = a
            for _ in range(self.size.bit_length() + 1):
                if x == self.zero():
                    return True
                x = self.mul(x, x)
            return x == self.zero()
        raise UndecidableError(f"nilpotency in {self}")

    # -- structure -------------------------------------------------------------------
    @property
    def is_local(self) -> bool:
        return False

    @property
    def is_finite(self) -> bool:
        return False

    @property
    def size(self) -> int:
        raise UndecidableError(f"{self} is infinite")

    def elements(self) -> Iterator:
        raise UndecidableError(f"{self} is not enumerable")

    def sort_key(self, v):
        return v

    def variable(self, name: str):
        raise InvalidElement(f"unknown variable {name!r} in {self}")

    def variables(self) -> tuple[str, ...]:
        return ()

    # -- Euclidean structure (only where is_euclidean) ----------------------------------
    def euclid_size(self, a) -> int:
        raise UndecidableError(f"{self} is not Euclidean")

    def divmod(self, a, b):
        raise UndecidableError(f"{self} is not Euclidean")

    # -- ideals ----------------------------------------------------------------------
    def ideal_contains(self, gens: tuple, a) -> bool:
        if self.is_finite:
            return a in self._finite_ideal(gens)
        raise UndecidableError(f"ideal membership in {self}")

    def ideal_is_proper(self, gens: tuple) -> bool:
        return not self.ideal_contains(gens, self.one())

    def _finite_ideal(self, gens: tuple) -> frozenset:
        return _finite_ideal_closure(self, gens)

    def generates_unit_ideal(self, elems: Iterable) -> bool:
        elems = tuple(elems)
        if any(self.is_unit(e) for e in elems):
            return True
        if self.is_local:
            return False
        return not self.ideal_is_proper(elems)

    # -- text / json -----------------------------------------------------------------
    def fmt(self, v) -> str:
        return str(v)

    def to_json_value(self, v):
        return self.fmt(v)

    def from_json_value(self, obj):
        return self.coerce(obj)

    def descriptor(self) -> dict:
        raise NotImplementedError

    def __str__(self):
        return self.name()

    def name(self) -> str:
        return self.tag


def _finite_ideal_closure(ring: Ring, gens: tuple) -> frozenset:
    cache = ring.__dict__.setdefault("_ideal_cache", {})
    if gens in cache:
        return cache[gens]
    if ring.size > FINITE_ENUM_LIMIT:
        raise UndecidableError(f"{ring} too large for brute-force ideal closure")
    elems = list(ring.elements())
    members = {ring.zero()}
    multiples = {ring.mul(r, g) for g in gens for r in elems}
    frontier = set(members)
    while frontier:
        new = set()
        for x in frontier:
            for m in multiples:
                y = ring.add(x, m)
                if y not in members:
                    members.add(y)
                    new.add(y)
        frontier = new
    out = frozenset(members)
    cache[gens] = out
    return out


# ----------------------------------------------------------------------------------------
# ℤ, ℤ/n, 𝔽_p, ℚ, ℤ_(p)
# ----------------------------------------------------------------------------------------


@dataclass(frozen=True)
class Integers(Ring):
    tag = "Integers"
    is_euclidean = True

    def from_int(self, k):
        return int(k)

    def canon(self, v):
        if isinstance(v, int):
            return int(v)
        raise InvalidElement(f"not an integer: {v!r}")

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return a if a in (1, -1) else None

    def is_nilpotent(self, a):
        return a == 0

    def euclid_size(self, a):
        return abs(a)

    def divmod(self, a, b):
        q, r = divmod(a, b)
        # least absolute remainder keeps gcd chains short
        if 2 * abs(r) > abs(b):
            r -= b
            q += 1
        return q, r

    def ideal_contains(self, gens, a):
        g = math.gcd(*gens) if gens else 0
        return a == 0 if g == 0 else a % g == 0

    def sort_key(self, v):
        return (abs(v), v < 0)

    def descriptor(self):
        return {"ring": "Integers"}

    def name(self):
        return "ZZ"


@dataclass(frozen=True)
class Modular(Ring):
    n: int
    tag = "Modular"

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise InvalidRing(f"modulus must be an integer >= 2, got {self.n!r}")

    def from_int(self, k):
        return int(k) % self.n

    def canon(self, v):
        if isinstance(v, int):
            return v % self.n
        raise InvalidElement(f"not a residue: {v!r}")

    def _coerce_foreign(self, x):
        if isinstance(x.ring, Integers):
            return x.v % self.n
        return super()._coerce_foreign(x)

    def add(self, a, b):
        return (a + b) % self.n

    def sub(self, a, b):
        return (a - b) % self.n

    def neg(self, a):
        return (-a) % self.n

    def mul(self, a, b):
        return (a * b) % self.n

    def inv(self, a):
        if math.gcd(a, self.n) != 1:
            return None
        return pow(a, -1, self.n)

    def is_nilpotent(self, a):
        rad = math.prod(prime_factors(self.n))
        return a % rad == 0

    @property
    def is_local(self):
        return len(prime_factors(self.n)) == 1

    @property
    def is_finite(self):
        return True

    @property
    def size(self):
        return self.n

    def elements(self):
        return iter(range(self.n))

    def residue_prime(self) -> int:
        ps = prime_factors(self.n)
        if len(ps) != 1:
            raise UndecidableError(f"{self} is not local")
        return ps[0]

    def ideal_contains(self, gens, a):
        g = math.gcd(self.n, *gens)
        return a % g == 0

    def descriptor(self):
        return {"ring": "Modular", "n": self.n}

    def name(self):
        return f"Z/{self.n}"


@dataclass(frozen=True)
class PrimeField(Modular):
    tag = "PrimeField"
    is_field = True
    is_euclidean = True

    def __post_init__(self):
        super().__post_init__()
        if not is_prime(self.n):
            raise InvalidRing(f"{self.n} is not prime")

    @property
    def p(self) -> int:
        return self.n

    @property
    def is_local(self):
        return True

    def is_nilpotent(self, a):
        return a == 0

    def euclid_size(self, a):
        return 0 if a == 0 else 1

    def divmod(self, a, b):
        return self.mul(a, self.inv(b)), 0

    def descriptor(self):
        return {"ring": "PrimeField", "p": self.n}

    def name(self):
        return f"F{self.n}"


def _fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, tuple) and len(v) == 2:
        return Fraction(int(v[0]), int(v[1]))
    raise InvalidElement(f"not a fraction: {v!r}")


@dataclass(frozen=True)
class Rationals(Ring):
    tag = "Rationals"
    is_field = True
    is_euclidean = True

    def from_int(self, k):
        return Fraction(k)

    def canon(self, v):
        return _fraction(v)

    def _coerce_foreign(self, x):
        if isinstance(x.ring, (Integers, LocalizedAtPrime)):
            return Fraction(x.v)
        return super()._coerce_foreign(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return None if a == 0 else 1 / a

    def is_nilpotent(self, a):
        return a == 0

    @property
    def is_local(self):
        return True

    def euclid_size(self, a):
        return 0 if a == 0 else 1

    def divmod(self, a, b):
        return a / b, Fraction(0)

    def ideal_contains(self, gens, a):
        return a == 0 or any(g != 0 for g in gens)

    def sort_key(self, v):
        return (abs(v.numerator) + v.denominator, v)

    def descriptor(self):
        return {"ring": "Rationals"}

    def name(self):
        return "QQ"


@dataclass(frozen=True)
class LocalizedAtPrime(Ring):
    """ℤ localized at the prime ideal (p): fractions a/s with p ∤ s."""

    p: int
    tag = "LocalizedAtPrime"
    is_euclidean = True

    def __post_init__(self):
        if not is_prime(self.p):
            raise InvalidRing(f"{self.p} is not prime")

    def from_int(self, k):
        return Fraction(k)

    def canon(self, v):
        f = _fraction(v)
        if f.denominator % self.p == 0:
            raise InvalidElement(f"{f} has denominator divisible by {self.p}")
        return f

    def _coerce_foreign(self, x):
        if isinstance(x.ring, Integers):
            return Fraction(x.v)
        return super()._coerce_foreign(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0 or a.numerator % self.p == 0:
            return None
        return 1 / a

    def is_nilpotent(self, a):
        return a == 0

    @property
    def is_local(self):
        return True

    def valuation(self, a) -> int:
        return p_valuation(a.numerator, self.p)

    def euclid_size(self, a):
        return 0 if a == 0 else self.valuation(a) + 1

    def divmod(self, a, b):
        if a == 0:
            return Fraction(0), Fraction(0)
        if self.valuation(b) <= self.valuation(a):
            return a / b, Fraction(0)
        return Fraction(0), a

    def ideal_contains(self, gens, a):
        vals = [self.valuation(g) for g in gens if g != 0]
        if not vals:
            return a == 0
        return a == 0 or self.valuation(a) >= min(vals)

    def sort_key(self, v):
        return (abs(v.numerator) + v.denominator, v)

    def descriptor(self):
        return {"ring": "LocalizedAtPrime", "base": {"ring": "Integers"}, "p": self.p}

    def name(self):
        return f"Z_({self.p})"


# ----------------------------------------------------------------------------------------
# Polynomial rings and quotients
# ----------------------------------------------------------------------------------------


def _trim(coeffs, zero) -> tuple:
    c = list(coeffs)
    while c and c[-1] == zero:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class Polynomial(Ring):
    """base[var]; raw values are coefficient tuples, lowest degree first, trimmed."""

    base: Ring
    var: str = "X"
    tag = "Polynomial"

    def __post_init__(self):
        if isinstance(self.base, Excision):
            raise InvalidRing("polynomial rings over excision rings are not part of the tower")
        if self.var in self.base.variables():
            raise InvalidRing(f"variable {self.var} already used in {self.base}")
        if not self.var.isidentifier():
            raise InvalidRing(f"bad variable name {self.var!r}")

    @property
    def is_field(self):  # type: ignore[override]
        return False

    @property
    def is_euclidean(self):  # type: ignore[override]
        return self.base.is_field

    def variables(self):
        return self.base.variables() + (self.var,)

    def from_int(self, k):
        return _trim((self.base.from_int(k),), self.base.zero())

    def const(self, c) -> tuple:
        return _trim((c,), self.base.zero())

    def canon(self, v):
        if isinstance(v, (list, tuple)):
            return _trim((self.base.coerce(c) for c in v), self.base.zero())
        raise InvalidElement(f"not a coefficient list: {v!r}")

    def _coerce_foreign(self, x):
        return self.const(self.base.coerce(x))

    def variable(self, name):
        if name == self.var:
            return (self.base.zero(), self.base.one())
        return self.const(self.base.variable(name))

    def add(self, a, b):
        B = self.base
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = B.add(out[k], c)
        return _trim(out, B.zero())

    def neg(self, a):
        return tuple(self.base.neg(c) for c in a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if not a or not b:
            return ()
        B = self.base
        out = [B.zero()] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == B.zero():
                continue
            for j, y in enumerate(b):
                out[i + j] = B.add(out[i + j], B.mul(x, y))
        return _trim(out, B.zero())

    def scale(self, c, a):
        return _trim((self.base.mul(c, x) for x in a), self.base.zero())

    def degree(self, a) -> int:
        return len(a) - 1

    def inv(self, a):
        if not a:
            return None
        B = self.base
        u = B.inv(a[0])
        if u is None:
            return None
        if len(a) == 1:
            return (u,)
        try:
            if not all(B.is_nilpotent(c) for c in a[1:]):
                return None
        except UndecidableError:
            return None
        # a = a0 (1 + N) with N nilpotent: a^-1 = a0^-1 (1 - N + N^2 - ...)
        N = self.scale(u, (B.zero(),) + a[1:])
        term = self.one()
        total = self.one()
        while True:
            term = self.neg(self.mul(term, N))
            if not term:
                break
            total = self.add(total, term)
        return self.scale(u, total)

    def is_nilpotent(self, a):
        return all(self.base.is_nilpotent(c) for c in a)

    def euclid_size(self, a):
        return len(a)

    def divmod(self, a, b):
        """Division by a polynomial whose leading coefficient is a unit."""
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        B = self.base
        lead_inv = B.inv(b[-1])
        if lead_inv is None:
            raise UndecidableError("leading coefficient of divisor is not a unit")
        r = list(a)
        q = [B.zero()] * max(len(a) - len(b) + 1, 0)
        db = len(b) - 1
        for k in range(len(r) - 1, db - 1, -1):
            c = B.mul(r[k], lead_inv)
            if c == B.zero():
                continue
            q[k - db] = c
            for j, y in enumerate(b):
                r[k - db + j] = B.sub(r[k - db + j], B.mul(c, y))
        return _trim(q, B.zero()), _trim(r, B.zero())

    def gcd(self, a, b):
        """Monic gcd over a field base."""
        while b:
            a, b = b, self.divmod(a, b)[1]
        if a:
            a = self.scale(self.base.inv(a[-1]), a)
        return a

    def xgcd(self, a, b):
        """(g, s, t) with s·a + t·b = g, g monic (field base)."""
        r0, r1 = a, b
        s0, s1 = self.one(), ()
        t0, t1 = (), self.one()
        while r1:
            q, r = self.divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, self.sub(s0, self.mul(q, s1))
            t0, t1 = t1, self.sub(t0, self.mul(q, t1))
        if r0:
            c = self.base.inv(r0[-1])
            r0, s0, t0 = self.scale(c, r0), self.scale(c, s0), self.scale(c, t0)
        return r0, s0, t0

    def evaluate(self, a, x):
        """Horner evaluation of raw a at a raw base value x."""
        B = self.base
        acc = B.zero()
        for c in reversed(a):
            acc = B.add(B.mul(acc, x), c)
        return acc

    def ideal_contains(self, gens, a):
        nz = [g for g in gens if g]
        if not nz:
            return not a
        if self.base.is_field:
            g = nz[0]
            for h in nz[1:]:
                g = self.gcd(g, h)
            return not self.divmod(a, g)[1]
        if len(nz) == 1 and self.base.is_unit(nz[0][-1]):
            return not self.divmod(a, nz[0])[1]
        raise UndecidableError(f"ideal membership in {self} for non-principal/non-monic generators")

    def ideal_is_proper(self, gens):
        return not self.ideal_contains(gens, self.one())

    def sort_key(self, v):
        return (len(v), tuple(self.base.sort_key(c) for c in reversed(v)))

    def fmt(self, v):
        if not v:
            return "0"
        B = self.base
        atomic = isinstance(B, (Integers, Modular, Rationals, LocalizedAtPrime))
        terms = []
        for k in range(len(v) - 1, -1, -1):
            c = v[k]
            if c == B.zero():
                continue
            cs = B.fmt(c)
            if not atomic and k > 0:
                cs = f"({cs})"
            mono = "" if k == 0 else (self.var if k == 1 else f"{self.var}^{k}")
            if not mono:
                terms.append(cs)
            elif c == B.one():
                terms.append(mono)
            else:
                terms.append(f"{cs}*{mono}")
        return " + ".join(terms)

    def to_json_value(self, v):
        return [self.base.to_json_value(c) for c in v]

    def from_json_value(self, obj):
        if isinstance(obj, list):
            return _trim((self.base.from_json_value(c) for c in obj), self.base.zero())
        return self.coerce(obj)

    def descriptor(self):
        return {"ring": "Polynomial", "base": self.base.descriptor(), "var": self.var}

    def name(self):
        return f"{self.base.name()}[{self.var}]"


def _monic_polys(F: PrimeField, degree: int) -> Iterator[tuple]:
    for tail in itertools.product(range(F.p), repeat=degree):
        yield tuple(tail) + (1,)


def distinct_irreducible_factors(P: Polynomial, f: tuple) -> list[tuple]:
    """Monic irreducible factors of f over a prime field, by trial division."""
    F = P.base
    assert isinstance(F, PrimeField)
    f = P.scale(F.inv(f[-1]), f)
    out = []
    d = 1
    while P.degree(f) >= 1 and 2 * d <= P.degree(f):
        for g in _monic_polys(F, d):
            q, r = P.divmod(f, g)
            if not r:
                out.append(g)
                while True:
                    q, r = P.divmod(f, g)
                    if r:
                        break
                    f = q
        d += 1
    if P.degree(f) >= 1:
        out.append(f)
    return sorted(set(out), key=P.sort_key)


@dataclass(frozen=True)
class Quotient(Ring):
    """base / (modulus) for a polynomial ring base; raw values are fixed-length
    coefficient tuples of length deg(modulus)."""

    base: Polynomial
    modulus: tuple
    tag = "Quotient"

    def __post_init__(self):
        if not isinstance(self.base, Polynomial):
            raise InvalidRing("quotient base must be a polynomial ring")
        K = self.base.base
        if isinstance(K, (Polynomial, Quotient, Excision)):
            raise InvalidRing("quotients are supported over one-variable polynomial rings only")
        m = self.base.canon(self.modulus)
        if len(m) < 2:
            raise InvalidRing("modulus must have positive degree")
        lead_inv = K.inv(m[-1])
        if lead_inv is None:
            raise InvalidRing("modulus must be monic (leading coefficient a unit)")
        object.__setattr__(self, "modulus", self.base.scale(lead_inv, m))

    @property
    def coeff_ring(self) -> Ring:
        return self.base.base

    @property
    def degree(self) -> int:
        return len(self.modulus) - 1

    def variables(self):
        return self.base.variables()

    def _reduce(self, poly: tuple) -> tuple:
        r = self.base.divmod(poly, self.modulus)[1]
        K = self.coeff_ring
        return tuple(r) + (K.zero(),) * (self.degree - len(r))

    def lift(self, v) -> tuple:
        return _trim(v, self.coeff_ring.zero())

    def from_int(self, k):
        return self._reduce(self.base.from_int(k))

    def canon(self, v):
        if isinstance(v, (list, tuple)):
            return self._reduce(self.base.canon(v))
        raise InvalidElement(f"not a coefficient list: {v!r}")

    def _coerce_foreign(self, x):
        if x.ring == self.base:
            return self._reduce(x.v)
        return self._reduce(self.base.coerce(x))

    def variable(self, name):
        return self._reduce(self.base.variable(name))

    def add(self, a, b):
        K = self.coeff_ring
        return tuple(K.add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        K = self.coeff_ring
        return tuple(K.neg(x) for x in a)

    def sub(self, a, b):
        K = self.coeff_ring
        return tuple(K.sub(x, y) for x, y in zip(a, b))

    def mul(self, a, b):
        return self._reduce(self.base.mul(self.lift(a), self.lift(b)))

    def inv(self, a):
        K = self.coeff_ring
        if K.is_field:
            g, s, _ = self.base.xgcd(self.lift(a), self.modulus)
            if g != self.base.one():
                return None
            return self._reduce(s)
        if self.is_finite and self.size <= FINITE_ENUM_LIMIT:
            return _finite_inverse(self, a)
        raise UndecidableError(f"unit decision in {self}")

    @cached_property
    def _residue_factors(self) -> list[tuple] | None:
        K = self.coeff_ring
        if isinstance(K, PrimeField):
            return distinct_irreducible_factors(self.base, self.modulus)
        if isinstance(K, Modular) and K.is_local:
            F = PrimeField(K.residue_prime())
            P = Polynomial(F, self.base.var)
            return distinct_irreducible_factors(P, P.canon(self.modulus))
        return None

    @property
    def is_local(self):
        f = self._residue_factors
        return f is not None and len(f) == 1

    @property
    def is_finite(self):
        return self.coeff_ring.is_finite

    @property
    def size(self):
        return self.coeff_ring.size**self.degree

    def elements(self):
        K = list(self.coeff_ring.elements())
        for t in itertools.product(K, repeat=self.degree):
            yield tuple(reversed(t))

    def is_graded_monomial(self) -> bool:
        """True when the modulus is t^k, so the t-degree grading descends to the quotient."""
        K = self.coeff_ring
        return all(c == K.zero() for c in self.modulus[:-1])

    def ideal_contains(self, gens, a):
        K = self.coeff_ring
        if K.is_field:
            g = self.modulus
            for h in gens:
                g = self.base.gcd(g, self.lift(h))
            return not self.base.divmod(self.lift(a), g)[1]
        if self.is_finite:
            return a in self._finite_ideal(gens)
        raise UndecidableError(f"ideal membership in {self}")

    def sort_key(self, v):
        return tuple(self.coeff_ring.sort_key(c) for c in reversed(v))

    def fmt(self, v):
        return self.base.fmt(self.lift(v))

    def to_json_value(self, v):
        return [self.coeff_ring.to_json_value(c) for c in self.lift(v)]

    def from_json_value(self, obj):
        if isinstance(obj, list):
            return self._reduce(self.base.from_json_value(obj))
        return self.coerce(obj)

    def descriptor(self):
        return {
            "ring": "Quotient",
            "base": self.base.descriptor(),
            "modulus": self.base.to_json_value(self.modulus),
        }

    def name(self):
        return f"{self.base.name()}/({self.base.fmt(self.modulus)})"


def _finite_inverse(ring: Ring, a):
    cache = ring.__dict__.setdefault("_inv_cache", None)
    if cache is None:
        cache = {}
        elems = list(ring.elements())
        one = ring.one()
        for x in elems:
            for y in elems:
                if ring.mul(x, y) == one:
                    cache[x] = y
                    break
        ring.__dict__["_inv_cache"] = cache
    return cache.get(a)


# ----------------------------------------------------------------------------------------
# Excision ring R ⊕ I
# ----------------------------------------------------------------------------------------


@dataclass(frozen=True)
class Excision(Ring):
    """Pairs (r, i), i ∈ I, with (r,i)(s,j) = (rs, rj + si + ij)."""

    base: Ring
    gens: tuple
    tag = "Excision"

    def __post_init__(self):
        if isinstance(self.base, Excision):
            raise InvalidRing("excision of an excision ring is not supported")
        gens = tuple(self.base.coerce(g) for g in self.gens)
        object.__setattr__(self, "gens", gens)
        if not self.base.ideal_is_proper(gens):
            raise InvalidRing("excision needs a proper ideal")

    @staticmethod
    def of(ideal: IdealSpec) -> "Excision":
        return Excision(ideal.ring, ideal.gens)

    @cached_property
    def ideal(self) -> IdealSpec:
        return IdealSpec(self.base, self.gens)

    def variables(self):
        return self.base.variables()

    def from_int(self, k):
        return (self.base.from_int(k), self.base.zero())

    def canon(self, v):
        if isinstance(v, (list, tuple)) and len(v) == 2:
            r, i = self.base.coerce(v[0]), self.base.coerce(v[1])
            if not self.base.ideal_contains(self.gens, i):
                raise InvalidElement(f"{self.base.fmt(i)} is not in the ideal {self.ideal}")
            return (r, i)
        raise InvalidElement(f"excision elements are pairs (r, i), got {v!r}")

    def _coerce_foreign(self, x):
        if x.ring == self.base:
            return (x.v, self.base.zero())
        return super()._coerce_foreign(x)

    def variable(self, name):
        return (self.base.variable(name), self.base.zero())

    def add(self, a, b):
        B = self.base
        return (B.add(a[0], b[0]), B.add(a[1], b[1]))

    def neg(self, a):
        B = self.base
        return (B.neg(a[0]), B.neg(a[1]))

    def sub(self, a, b):
        B = self.base
        return (B.sub(a[0], b[0]), B.sub(a[1], b[1]))

    def mul(self, a, b):
        B = self.base
        r, i = a
        s, j = b
        return (B.mul(r, s), B.add(B.add(B.mul(r, j), B.mul(s, i)), B.mul(i, j)))

    def inv(self, a):
        B = self.base
        r, i = a
        rinv = B.inv(r)
        if rinv is None:
            return None
        sinv = B.inv(B.add(r, i))
        if sinv is None:
            return None
        return (rinv, B.neg(B.mul(B.mul(i, rinv), sinv)))

    def is_nilpotent(self, a):
        return self.base.is_nilpotent(a[0]) and self.base.is_nilpotent(self.base.add(a[0], a[1]))

    @property
    def is_local(self):
        return self.base.is_local

    @property
    def is_finite(self):
        return self.base.is_finite

    @property
    def size(self):
        return self.base.size * len(self.ideal.elements())

    def elements(self):
        ideal = self.ideal.elements()
        for r in self.base.elements():
            for i in ideal:
                yield (r, i)

    def ideal_contains(self, gens, a):
        B = self.base
        if all(g[0] == B.zero() for g in gens):
            # the ideal generated by (0, a_k) is 0 ⊕ (a_k)
            return a[0] == B.zero() and B.ideal_contains(tuple(g[1] for g in gens), a[1])
        if self.is_finite:
            return a in self._finite_ideal(gens)
        raise UndecidableError(f"ideal membership in {self}")

    def sort_key(self, v):
        return (self.base.sort_key(v[0]), self.base.sort_key(v[1]))

    def fmt(self, v):
        return f"({self.base.fmt(v[0])}, {self.base.fmt(v[1])})"

    def to_json_value(self, v):
        return [self.base.to_json_value(v[0]), self.base.to_json_value(v[1])]

    def from_json_value(self, obj):
        if isinstance(obj, list) and len(obj) == 2:
            return self.canon((self.base.from_json_value(obj[0]), self.base.from_json_value(obj[1])))
        return self.coerce(obj)

    def descriptor(self):
        return {
            "ring": "Excision",
            "base": self.base.descriptor(),
            "ideal": [self.base.to_json_value(g) for g in self.gens],
        }

    def name(self):
        return f"{self.base.name()}+{self.ideal}"
