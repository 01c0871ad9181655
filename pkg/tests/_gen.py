"""Random inputs shared by the test modules.  Everything is driven by an explicit
random.Random so failures replay."""
from __future__ import annotations

import random
from functools import lru_cache

from ringgroups.matrices import Mat, sigma
from ringgroups.rings import IdealSpec, Polynomial, RElem, Ring
from ringgroups.words import GenAtom, Word

FAMILY_OF = {"SL": "LinE", "Sp": "SpSE", "SO": "OrthO"}


@lru_cache(maxsize=None)
def elements(R: Ring) -> tuple:
    return tuple(R.elements())


def rand_elem(R: Ring, rng: random.Random, deg: int = 2):
    """Raw random element; polynomial rings get degree ≤ deg."""
    if R.is_finite:
        return rng.choice(elements(R))
    if isinstance(R, Polynomial):
        return R.canon(tuple(rand_elem(R.base, rng, deg) for _ in range(deg + 1)))
    return R.from_int(rng.randint(-20, 20))


def rand_unit(R: Ring, rng: random.Random):
    while True:
        x = rand_elem(R, rng)
        if R.is_unit(x):
            return x


def rand_pair(n: int, family: str, rng: random.Random) -> tuple[int, int]:
    while True:
        i, j = rng.sample(range(1, n + 1), 2)
        if family == "OrthO" and i == sigma(j):
            continue
        return i, j


def rand_atom(R: Ring, n: int, family: str, rng: random.Random, param=None) -> GenAtom:
    i, j = rand_pair(n, family, rng)
    z = rand_elem(R, rng) if param is None else param(rng)
    return GenAtom(family, i, j, RElem(R, z))


def rand_word(R: Ring, n: int, family: str, rng: random.Random, length: int = 12, param=None) -> Word:
    return Word(R, n, tuple(rand_atom(R, n, family, rng, param) for _ in range(length)))


def rand_elementary(R: Ring, n: int, group: str, rng: random.Random, length: int = 12) -> Mat:
    return rand_word(R, n, FAMILY_OF[group], rng, length).eval()


def rand_relative(R: Ring, n: int, ideal: IdealSpec, rng: random.Random, count: int = 5, family: str = "LinE") -> Mat:
    """Product of conjugates c·a·c⁻¹ with a an atom whose parameter lies in the ideal."""
    in_ideal = [x for x in elements(R) if ideal.contains(RElem(R, x))]
    M = Mat.identity(R, n)
    for _ in range(count):
        a = rand_atom(R, n, family, rng, param=lambda g: g.choice(in_ideal))
        c = rand_word(R, n, family, rng, 3).eval()
        M = M * c * Word(R, n, (a,)).eval() * c.inverse()
    return M


def torus_diag(R: Ring, n: int, u) -> Mat:
    """D(u): diag(u, u⁻¹) in the first hyperbolic plane."""
    entries = [u, R.inv(u)] + [R.one()] * (n - 2)
    return Mat.diag(R, entries)
