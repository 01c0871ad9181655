"""Moving a unimodular row to e1 with elementary (or elementary symplectic) atoms."""
from __future__ import annotations

import itertools
from collections import deque
from typing import Sequence

from ..errors import PreconditionError, SizeGuardExceeded, UndecidableError
from ..rings import RElem, Ring
from ..words import GenAtom, Word, row_apply

SEARCH_LIMIT = 10**6


def _normalize_family(family: str) -> str:
    f = family.lower()
    if f in ("linear", "sl", "line", "e"):
        return "linear"
    if f in ("symplectic", "sp", "spse", "se"):
        return "symplectic"
    raise ValueError(f"family must be linear or symplectic, got {family!r}")


def _raw_row(v: Sequence, ring: Ring | None) -> tuple[Ring, tuple]:
    if ring is None:
        if not v or not isinstance(v[0], RElem):
            raise ValueError("pass RElem entries or an explicit ring")
        ring = v[0].ring
    return ring, tuple(ring.coerce(x) for x in v)


class _Reducer:
    """Applies atoms on the right of a row vector and records them."""

    def __init__(self, ring: Ring, row: tuple, family: str):
        self.R = ring
        self.x = list(row)
        self.fam = "LinE" if family == "linear" else "SpSE"
        self.atoms: list[GenAtom] = []

    def apply(self, i: int, j: int, z) -> None:
        if z == self.R.zero():
            return
        a = GenAtom(self.fam, i, j, RElem(self.R, z))
        self.x = list(row_apply(self.x, a))
        self.atoms.append(a)

    def unit_at(self, k: int):
        return self.R.inv(self.x[k - 1])

    def first_unit(self, start: int = 1) -> int | None:
        for k in range(start, len(self.x) + 1):
            if self.R.is_unit(self.x[k - 1]):
                return k
        return None


def _linear_unit_search(red: _Reducer) -> None:
    """Semilocal stable range: find c with x1 + Σ c_i x_i a unit (finite rings, brute force)."""
    R, n = red.R, len(red.x)
    if not R.is_finite:
        raise UndecidableError(f"no unit coordinate and {R} is not finite")
    if R.size ** (n - 1) > SEARCH_LIMIT:
        raise SizeGuardExceeded("coefficient search too large")
    elems = list(R.elements())
    for cs in itertools.product(elems, repeat=n - 1):
        acc = red.x[0]
        for c, xi in zip(cs, red.x[1:]):
            acc = R.add(acc, R.mul(c, xi))
        if R.is_unit(acc):
            for k, c in enumerate(cs, start=2):
                red.apply(k, 1, c)
            return
    raise PreconditionError("row is not unimodular")


def _symplectic_unit_search(red: _Reducer) -> None:
    """Breadth-first search over se atoms for a row with some unit coordinate."""
    R, n = red.R, len(red.x)
    if not R.is_finite:
        raise UndecidableError(f"no unit coordinate and {R} is not finite")
    if R.size**n > SEARCH_LIMIT:
        raise SizeGuardExceeded("row orbit search too large")
    nonzero = [z for z in R.elements() if z != R.zero()]
    gens = [GenAtom("SpSE", i, j, RElem(R, z)) for i in range(1, n + 1) for j in range(1, n + 1) if i != j for z in nonzero]
    start = tuple(red.x)
    parent = {start: None}
    queue = deque([start])
    while queue:
        row = queue.popleft()
        if any(R.is_unit(c) for c in row):
            path = []
            while parent[row] is not None:
                row, a = parent[row]
                path.append(a)
            for a in reversed(path):
                red.apply(a.i, a.j, a.z.v)
            return
        for a in gens:
            nxt = row_apply(row, a)
            if nxt not in parent:
                parent[nxt] = (row, a)
                queue.append(nxt)
    raise PreconditionError("row is not unimodular")


def reduce_row(row: tuple, ring: Ring, family: str) -> list[GenAtom]:
    """Atoms a_1..a_k (right action) with row · a_1 ⋯ a_k = e1."""
    family = _normalize_family(family)
    R = ring
    n = len(row)
    one, zero = R.one(), R.zero()
    red = _Reducer(R, row, family)
    if n == 1:
        if row[0] != one:
            raise PreconditionError("a 1-entry row must equal 1 to be completable in SL_1")
        return []
    if family == "symplectic" and n % 2:
        raise PreconditionError("symplectic rows need even length")

    k = red.first_unit()
    if k is None:
        if R.is_local:
            raise PreconditionError("row is not unimodular (no unit entry over a local ring)")
        if family == "linear":
            _linear_unit_search(red)
        else:
            _symplectic_unit_search(red)
        k = red.first_unit()

    x = red.x
    if family == "linear":
        if k != 1:
            red.apply(k, 1, R.mul(R.sub(one, x[0]), red.unit_at(k)))
        elif x[0] != one:
            red.apply(1, 2, R.mul(R.sub(one, red.x[1]), red.unit_at(1)))
            red.apply(2, 1, R.sub(one, red.x[0]))
        for j in range(2, n + 1):
            red.apply(1, j, R.neg(red.x[j - 1]))
    else:
        if k >= 3:
            red.apply(k, 1, R.mul(R.sub(one, x[0]), red.unit_at(k)))
        elif k == 2:
            red.apply(2, 1, R.mul(R.sub(one, x[0]), red.unit_at(2)))
        elif x[0] != one:
            red.apply(1, 2, R.mul(R.sub(one, red.x[1]), red.unit_at(1)))
            red.apply(2, 1, R.sub(one, red.x[0]))
        for j in range(3, n + 1):
            red.apply(1, j, R.neg(red.x[j - 1]))
        red.apply(1, 2, R.neg(red.x[1]))

    if any(c != (one if i == 0 else zero) for i, c in enumerate(red.x)):
        raise AssertionError("row reduction did not reach e1")
    return red.atoms


def complete_unimodular(v: Sequence, family: str = "linear", ring: Ring | None = None) -> Word:
    """Word w with e1 · eval(w) = v.

    Over a local ring the pivot is the lowest-index unit entry.  Over a finite
    ring without unit entries a brute-force search first creates one.
    """
    R, row = _raw_row(v, ring)
    atoms = reduce_row(row, R, family)
    return Word(R, len(row), tuple(atoms)).inverse()
