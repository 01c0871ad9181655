"""Index-encoded finite rings and enumeration of unimodular rows."""
from __future__ import annotations

import itertools

import numpy as np

from ..errors import PreconditionError, SizeGuardExceeded
from ..rings import IdealSpec, RElem, Ring

ROW_GUARD = 10**7
RING_GUARD = 4096


class FiniteRingEnum:
    """A finite ring with elements numbered 0..q-1 in the ring's enumeration order.

    ``add``/``mul`` are q×q index tables, ``units`` a boolean mask.
    """

    def __init__(self, ring: Ring):
        if not ring.is_finite:
            raise PreconditionError(f"{ring} is not finite")
        if ring.size > RING_GUARD:
            raise SizeGuardExceeded(f"{ring} has {ring.size} elements")
        self.ring = ring
        self.elems = list(ring.elements())
        self.q = len(self.elems)
        if self.q != ring.size or len(set(self.elems)) != self.q:
            raise AssertionError("element iterator does not enumerate the ring exactly once")
        self.index = {e: k for k, e in enumerate(self.elems)}
        q = self.q
        self.add = np.empty((q, q), dtype=np.int64)
        self.mul = np.empty((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(q):
                self.add[a, b] = self.index[ring.add(self.elems[a], self.elems[b])]
                self.mul[a, b] = self.index[ring.mul(self.elems[a], self.elems[b])]
        self.units = np.array([ring.is_unit(e) for e in self.elems], dtype=bool)
        self.zero = self.index[ring.zero()]
        self.one = self.index[ring.one()]

    def __iter__(self):
        return iter(self.elems)

    def __len__(self):
        return self.q

    def idx(self, x) -> int:
        if isinstance(x, RElem):
            x = x.v
        return self.index[self.ring.coerce(x)]

    def encode(self, row) -> int:
        code = 0
        for x in row:
            code = code * self.q + self.idx(x)
        return code

    def decode(self, code: int, n: int) -> tuple:
        digits = []
        for _ in range(n):
            code, d = divmod(code, self.q)
            digits.append(self.elems[d])
        return tuple(reversed(digits))

    def digits(self, codes: np.ndarray, n: int) -> np.ndarray:
        out = np.empty((len(codes), n), dtype=np.int64)
        c = np.asarray(codes, dtype=np.int64).copy()
        for k in range(n - 1, -1, -1):
            out[:, k] = c % self.q
            c //= self.q
        return out

    def codes(self, digits: np.ndarray) -> np.ndarray:
        c = np.zeros(len(digits), dtype=np.int64)
        for k in range(digits.shape[1]):
            c = c * self.q + digits[:, k]
        return c

    def principal(self, x: int) -> np.ndarray:
        """Membership mask of the principal ideal (x)."""
        mask = np.zeros(self.q, dtype=bool)
        mask[self.mul[:, x]] = True
        return mask

    def ideal_mask(self, ideal: IdealSpec) -> np.ndarray:
        mask = np.zeros(self.q, dtype=bool)
        for k, e in enumerate(self.elems):
            mask[k] = ideal.contains(RElem(self.ring, e))
        return mask


def generates_unit_ideal(fr: FiniteRingEnum, row_idx) -> bool:
    """Brute-force coefficient search: is 1 = Σ c_i x_i for some c?  Done coordinate by
    coordinate, keeping the set of reachable partial sums."""
    reach = np.zeros(fr.q, dtype=bool)
    reach[fr.zero] = True
    for x in row_idx:
        multiples = np.flatnonzero(fr.principal(int(x)))
        current = np.flatnonzero(reach)
        nxt = np.zeros(fr.q, dtype=bool)
        nxt[fr.add[np.ix_(current, multiples)].ravel()] = True
        reach = nxt
    return bool(reach[fr.one])


def enum_um(n: int, fr: FiniteRingEnum | Ring, rel: IdealSpec | None = None) -> list[tuple]:
    """All unimodular rows of length n (raw values), optionally only those ≡ e1 mod ``rel``."""
    if not isinstance(fr, FiniteRingEnum):
        fr = FiniteRingEnum(fr)
    total = fr.q**n
    if total > ROW_GUARD:
        raise SizeGuardExceeded(f"{fr.q}^{n} rows exceed the guard {ROW_GUARD}")
    if rel is not None:
        in_ideal = fr.ideal_mask(rel)
        first = [k for k in range(fr.q) if in_ideal[fr.add[k, fr.index[fr.ring.neg(fr.ring.one())]]]]
        rest = [k for k in range(fr.q) if in_ideal[k]]
        candidates = itertools.product(first, *([rest] * (n - 1)))
    else:
        candidates = itertools.product(range(fr.q), repeat=n)
    cache: dict = {}
    out = []
    for row in candidates:
        # unimodularity depends only on the set of principal ideals; memoize on it
        key = frozenset(row)
        ok = cache.get(key)
        if ok is None:
            ok = cache[key] = generates_unit_ideal(fr, sorted(key))
        if ok:
            out.append(tuple(fr.elems[k] for k in row))
    out.sort(key=fr.encode)
    return out
