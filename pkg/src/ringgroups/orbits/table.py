"""Elementary orbits of unimodular rows over finite rings and the orbit product on
completable relative rows."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from ..errors import PreconditionError, SizeGuardExceeded
from ..matrices import Mat, sigma
from ..rings import Excision, ExcisionRetraction, ExcisionSplitting, ExcisionSum, IdealSpec, RElem, Ring
from ..words import GenAtom, Word, atom_matrix
from .finite import ROW_GUARD, FiniteRingEnum, enum_um
from .kernels import _images, default_backend, orbit_labels

_FAMILY = {"linear": "LinE", "symplectic": "SpSE", "orthogonal": "OrthO"}


def _family(f: str) -> str:
    f = f.lower()
    aliases = {"sl": "linear", "sp": "symplectic", "so": "orthogonal", "o": "orthogonal"}
    f = aliases.get(f, f)
    if f not in _FAMILY:
        raise ValueError(f"unknown family {f!r}")
    return f


def _pairs(fam: str, n: int):
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j or (fam == "OrthO" and i == sigma(j)):
                continue
            yield i, j


def generator_matrices(fr: FiniteRingEnum, n: int, family: str, rel: IdealSpec | None = None) -> list[Mat]:
    """All atoms with every ring parameter; relative case: conjugates e_ji(r) e_ij(a) e_ji(-r), a ∈ I."""
    fam = _FAMILY[_family(family)]
    R = fr.ring
    if fam != "LinE" and n % 2:
        raise PreconditionError("symplectic/orthogonal rows need even length")
    nonzero = [e for e in fr.elems if e != R.zero()]
    out = []
    if rel is None:
        for i, j in _pairs(fam, n):
            for z in nonzero:
                out.append(atom_matrix(GenAtom(fam, i, j, RElem(R, z)), n))
        return out
    ideal = [e for e in nonzero if rel.contains(RElem(R, e))]
    for i, j in _pairs(fam, n):
        if fam == "OrthO" and j == sigma(i):
            continue
        for a in ideal:
            A = atom_matrix(GenAtom(fam, i, j, RElem(R, a)), n)
            for r in fr.elems:
                if r == R.zero():
                    out.append(A)
                    continue
                C = Word(R, n, (GenAtom(fam, j, i, RElem(R, r)),)).eval()
                out.append(C * A * C.inverse())
    return out


def _index_stack(fr: FiniteRingEnum, mats: list[Mat], n: int) -> np.ndarray:
    uniq = sorted({tuple(fr.index[x] for r in M.rows for x in r) for M in mats})
    if not uniq:
        return np.zeros((0, n, n), dtype=np.int64)
    return np.array(uniq, dtype=np.int64).reshape(-1, n, n)


@dataclass
class OrbitTable:
    ring: Ring
    n: int
    family: str
    codes: np.ndarray
    labels: np.ndarray
    fr: FiniteRingEnum = field(repr=False)
    completable: dict = field(default_factory=dict)
    table: dict | None = None
    rel: IdealSpec | None = None

    @property
    def representatives(self) -> list[int]:
        return sorted(set(int(x) for x in self.labels))

    @property
    def sizes(self) -> dict:
        reps, counts = np.unique(self.labels, return_counts=True)
        return {int(r): int(c) for r, c in zip(reps, counts)}

    @property
    def num_orbits(self) -> int:
        return len(self.representatives)

    def row(self, code: int) -> tuple:
        return self.fr.decode(int(code), self.n)

    def orbit_of(self, row) -> int:
        code = self.fr.encode(row)
        k = int(np.searchsorted(self.codes, code))
        if k >= len(self.codes) or self.codes[k] != code:
            raise KeyError(f"{row} is not in the table")
        return int(self.labels[k])

    def members(self, rep: int) -> list[int]:
        return [int(c) for c in self.codes[self.labels == rep]]

    def rows(self) -> list[tuple]:
        return [self.row(c) for c in self.codes]

    def fmt_row(self, code: int) -> list:
        return [self.ring.to_json_value(x) for x in self.row(code)]

    def to_json(self) -> dict:
        reps = self.representatives
        sizes = self.sizes
        out = {
            "ring": self.ring.descriptor(),
            "n": self.n,
            "family": self.family,
            "ideal": None if self.rel is None else self.rel.to_json(),
            "rows": int(len(self.codes)),
            "orbit_count": len(reps),
            "orbits": [
                {
                    "representative": self.fmt_row(r),
                    "size": sizes[r],
                    **({"completable": self.completable[r]} if r in self.completable else {}),
                }
                for r in reps
            ],
        }
        if self.table is not None:
            keys = sorted(self.table)
            out["table"] = [
                {"left": self.fmt_row(a), "right": self.fmt_row(b), "product": self.fmt_row(self.table[(a, b)])}
                for a, b in keys
            ]
        return out


def orbit_bfs(
    rows,
    n: int,
    fr: FiniteRingEnum | Ring,
    family: str = "linear",
    rel: IdealSpec | None = None,
    generators: list | None = None,
    backend: str | None = None,
) -> OrbitTable:
    """Orbits of the closure of ``rows`` under right multiplication by elementary generators.

    ``generators`` overrides the default generator set (all atoms with every
    parameter, or the relative conjugates when ``rel`` is set).
    """
    if not isinstance(fr, FiniteRingEnum):
        fr = FiniteRingEnum(fr)
    family = _family(family)
    if fr.q**n > ROW_GUARD:
        raise SizeGuardExceeded(f"{fr.q}^{n} rows exceed the guard")
    if generators is None:
        mats = generator_matrices(fr, n, family, rel)
    else:
        mats = [g if isinstance(g, Mat) else atom_matrix(g, n) for g in generators]
    gens = _index_stack(fr, mats, n)
    start = sorted(fr.encode(r) for r in rows)
    codes, labels = orbit_labels(start, gens, fr.add, fr.mul, fr.q, n, fr.zero, backend or default_backend())
    return OrbitTable(fr.ring, n, family, codes, labels, fr, rel=rel)


# -- the orbit product on completable relative rows --------------------------------------------


def complete_relative(row: tuple, ideal: IdealSpec) -> Mat:
    """α ∈ SL_n(A, I) with e1·α = row, for a row ≡ e1 mod I.

    The row is lifted to the excision ring A ⊕ I, completed there, corrected by the
    split image of its reduction and pushed back by (r, i) ↦ r + i.
    """
    from ..factorize.unimodular import complete_unimodular

    A = ideal.ring
    E = Excision.of(ideal)
    lifted = [E.canon((A.one() if k == 0 else A.zero(), A.sub(x, A.one() if k == 0 else A.zero()))) for k, x in enumerate(row)]
    M = complete_unimodular([RElem(E, x) for x in lifted], "linear").eval()
    base = M.map(ExcisionRetraction(E)).map(ExcisionSplitting(E))
    N = base.inverse() * M
    return N.map(ExcisionSum(E))


def _stabilizer_moves(fr: FiniteRingEnum, n: int, ideal: IdealSpec) -> list[Mat]:
    """I and e_ij(a) with i ≥ 2, a ∈ I: left factors that keep e1·β fixed inside SL_n(A, I)."""
    R = fr.ring
    out = [Mat.identity(R, n)]
    for i in range(2, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            for a in fr.elems:
                if a != R.zero() and ideal.contains(RElem(R, a)):
                    out.append(atom_matrix(GenAtom("LinE", i, j, RElem(R, a)), n))
    return out


def orbit_group(
    fr: FiniteRingEnum | Ring,
    ideal: IdealSpec,
    n: int = 3,
    exhaustive: bool = True,
    backend: str | None = None,
) -> OrbitTable:
    """Orbit table of Comp_n(A, I)/E_n(A, I) with the product [u]·[v] = [u·β], e1·β = v.

    With ``exhaustive`` every representative pair and every completion re-choice
    β' = h·β is tried; any disagreement raises.
    """
    if not isinstance(fr, FiniteRingEnum):
        fr = FiniteRingEnum(fr)
    if n < 3:
        raise PreconditionError("the orbit product needs n ≥ 3")
    R = fr.ring
    rows = enum_um(n, fr, rel=ideal)
    table = orbit_bfs(rows, n, fr, "linear", rel=ideal, backend=backend)
    completions: dict[int, Mat] = {}
    for code in table.codes:
        code = int(code)
        row = table.row(code)
        try:
            M = complete_relative(row, ideal)
        except Exception:  # noqa: BLE001 - any failure means "not completable by this route"
            M = None
        if M is not None and M.rows[0] == row:
            completions[code] = M
    for rep in table.representatives:
        table.completable[rep] = all(c in completions for c in table.members(rep))
    good = [r for r in table.representatives if table.completable[r]]
    moves = _stabilizer_moves(fr, n, ideal) if exhaustive else [Mat.identity(R, n)]
    # every completion re-choice h·β of every representative v, as index stacks
    rechoices = {}
    for b in good:
        vs = table.members(b) if exhaustive else [b]
        rechoices[b] = _index_stack(fr, [h * completions[v] for v in vs for h in moves], n)
    product: dict = {}
    for a, b in itertools.product(good, repeat=2):
        us = np.array(table.members(a) if exhaustive else [a], dtype=np.int64)
        imgs = _images(lambda c: fr.digits(c, n), us, rechoices[b], fr.add, fr.mul, fr.q, n, fr.zero)
        pos = np.searchsorted(table.codes, imgs.ravel())
        if np.any(pos >= len(table.codes)) or np.any(table.codes[np.minimum(pos, len(table.codes) - 1)] != imgs.ravel()):
            raise AssertionError("a product row left the relative rows")
        seen = set(int(x) for x in np.unique(table.labels[pos]))
        if len(seen) != 1:
            raise AssertionError(f"orbit product is not well defined on ({a}, {b}): {sorted(seen)}")
        product[(a, b)] = seen.pop()
    table.table = product
    return table


def table_identity(table: OrbitTable) -> int:
    e1 = tuple(table.ring.one() if k == 0 else table.ring.zero() for k in range(table.n))
    return table.orbit_of(e1)


def is_commutative(table: OrbitTable) -> bool:
    return all(table.table[(a, b)] == table.table[(b, a)] for a, b in table.table)


def is_associative(table: OrbitTable) -> bool:
    reps = {a for a, _ in table.table}
    T = table.table
    return all(T[(T[(a, b)], c)] == T[(a, T[(b, c)])] for a in reps for b in reps for c in reps)


def inverses(table: OrbitTable) -> dict:
    """Each orbit's inverse in the product table (None when it has none)."""
    e = table_identity(table)
    reps = sorted({a for a, _ in table.table})
    return {a: next((b for b in reps if table.table[(a, b)] == e), None) for a in reps}
