"""Elementary generator atoms, words, conjugated (relative) words and their transport."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .errors import DimensionMismatch, InvalidElement, ParseError, PreconditionError, RingMismatch
from .matrices import Mat, sigma
from .rings import IdealSpec, RElem, Retraction, Ring, RingHom, ring_from_json

FAMILIES = ("LinE", "SpSE", "OrthO")
_FAMILY_ALIASES = {
    "line": "LinE", "linear": "LinE", "e": "LinE", "sl": "LinE",
    "spse": "SpSE", "symplectic": "SpSE", "se": "SpSE", "sp": "SpSE",
    "ortho": "OrthO", "orthogonal": "OrthO", "o": "OrthO", "so": "OrthO",
}


def family_name(f: str) -> str:
    if f in FAMILIES:
        return f
    try:
        return _FAMILY_ALIASES[f.lower()]
    except KeyError:
        raise ValueError(f"unknown generator family {f!r}") from None


def family_group(f: str) -> str:
    return {"LinE": "SL", "SpSE": "Sp", "OrthO": "SO"}[family_name(f)]


@dataclass(frozen=True)
class GenAtom:
    """One elementary generator; indices are 1-based."""

    family: str
    i: int
    j: int
    z: RElem

    def __post_init__(self):
        object.__setattr__(self, "family", family_name(self.family))
        if self.i == self.j:
            raise InvalidElement("generator indices must differ")
        if self.family == "OrthO" and self.i == sigma(self.j):
            raise InvalidElement(f"o_ij needs i != sigma(j), got ({self.i},{self.j})")

    @property
    def ring(self) -> Ring:
        return self.z.ring

    def check_dim(self, n: int) -> None:
        if not (1 <= self.i <= n and 1 <= self.j <= n):
            raise DimensionMismatch(f"indices ({self.i},{self.j}) out of range for n={n}")
        if self.family != "LinE" and n % 2:
            raise DimensionMismatch(f"{self.family} atoms need even dimension, got {n}")

    def terms(self) -> tuple:
        """Off-diagonal entries (row, col, raw coefficient), 0-based."""
        R = self.ring
        i, j, z = self.i, self.j, self.z.v
        out = [(i - 1, j - 1, z)]
        if self.family == "SpSE" and i != sigma(j):
            c = z if (i + j) % 2 else R.neg(z)
            out.append((sigma(j) - 1, sigma(i) - 1, c))
        elif self.family == "OrthO":
            out.append((sigma(j) - 1, sigma(i) - 1, R.neg(z)))
        return tuple(out)

    def inverse(self) -> "GenAtom":
        return GenAtom(self.family, self.i, self.j, -self.z)

    def with_param(self, z: RElem) -> "GenAtom":
        return GenAtom(self.family, self.i, self.j, z)

    def shifted(self, offset: int) -> "GenAtom":
        return GenAtom(self.family, self.i + offset, self.j + offset, self.z)

    def is_trivial(self) -> bool:
        return self.z.is_zero()

    def to_json(self) -> dict:
        return {"family": self.family, "i": self.i, "j": self.j, "param": self.z.to_json()}

    @staticmethod
    def from_json(d: dict, ring: Ring) -> "GenAtom":
        try:
            return GenAtom(d["family"], int(d["i"]), int(d["j"]), RElem(ring, ring.from_json_value(d["param"])))
        except KeyError as exc:
            raise ParseError(f"atom is missing {exc}") from None

    def __repr__(self):
        name = {"LinE": "e", "SpSE": "se", "OrthO": "o"}[self.family]
        return f"{name}{self.i}{self.j}({self.z})"


def atom_matrix(a: GenAtom, n: int) -> Mat:
    a.check_dim(n)
    R = a.ring
    rows = [list(r) for r in Mat.identity(R, n).rows]
    for r, c, x in a.terms():
        rows[r][c] = R.add(rows[r][c], x)
    return Mat(R, rows)


# -- in-place application on raw row lists ------------------------------------------------


def right_apply(rows: list, a: GenAtom) -> None:
    """rows ← rows · atom (column operations)."""
    R = a.ring
    terms = a.terms()
    for row in rows:
        adds = [(c, R.mul(row[r], x)) for r, c, x in terms]
        for c, y in adds:
            row[c] = R.add(row[c], y)


def left_apply(rows: list, a: GenAtom) -> None:
    """rows ← atom · rows (row operations)."""
    R = a.ring
    terms = a.terms()
    adds = [(r, [R.mul(x, y) for y in rows[c]]) for r, c, x in terms]
    for r, vec in adds:
        rows[r] = [R.add(p, q) for p, q in zip(rows[r], vec)]


def row_apply(v: Sequence, a: GenAtom) -> tuple:
    """Row vector v ↦ v · atom."""
    out = [list(v)]
    right_apply(out, a)
    return tuple(out[0])


@dataclass(frozen=True)
class Word:
    ring: Ring
    n: int
    atoms: tuple = ()

    def __post_init__(self):
        atoms = tuple(self.atoms)
        object.__setattr__(self, "atoms", atoms)
        for a in atoms:
            if a.ring != self.ring:
                raise RingMismatch(f"atom over {a.ring} in a word over {self.ring}")
            a.check_dim(self.n)

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __add__(self, other: "Word") -> "Word":
        if other.ring != self.ring or other.n != self.n:
            raise RingMismatch("concatenating words over different rings or dimensions")
        return Word(self.ring, self.n, self.atoms + other.atoms)

    def inverse(self) -> "Word":
        return Word(self.ring, self.n, tuple(a.inverse() for a in reversed(self.atoms)))

    def shifted(self, offset: int, n: int) -> "Word":
        """Re-index into dimension ``n`` acting on coordinates offset+1 .. offset+self.n."""
        return Word(self.ring, n, tuple(a.shifted(offset) for a in self.atoms))

    def without_trivial(self) -> "Word":
        return Word(self.ring, self.n, tuple(a for a in self.atoms if not a.is_trivial()))

    def cancelled(self) -> "Word":
        """Drop zero atoms and adjacent mutually inverse pairs (stack based)."""
        out: list[GenAtom] = []
        for a in self.atoms:
            if a.is_trivial():
                continue
            if out and _inverse_pair(out[-1], a):
                out.pop()
            else:
                out.append(a)
        return Word(self.ring, self.n, tuple(out))

    def merged(self) -> "Word":
        """Combine adjacent atoms on the same root by additivity, dropping zeros."""
        out: list[GenAtom] = []
        for a in self.atoms:
            if out and (out[-1].family, out[-1].i, out[-1].j) == (a.family, a.i, a.j):
                a = a.with_param(out.pop().z + a.z)
            if not a.is_trivial():
                out.append(a)
        return Word(self.ring, self.n, tuple(out))

    def eval(self) -> Mat:
        rows = [list(r) for r in Mat.identity(self.ring, self.n).rows]
        for a in self.atoms:
            right_apply(rows, a)
        return Mat(self.ring, rows)

    def act(self, v: Sequence) -> tuple:
        """v · eval(self) for a raw row vector."""
        out = [list(v)]
        for a in self.atoms:
            right_apply(out, a)
        return tuple(out[0])

    def to_json(self) -> dict:
        return {
            "type": "Word",
            "ring": self.ring.descriptor(),
            "n": self.n,
            "atoms": [a.to_json() for a in self.atoms],
        }

    @staticmethod
    def from_json(d, ring: Ring | None = None, n: int | None = None) -> "Word":
        if isinstance(d, list):
            if ring is None or n is None:
                raise ParseError("a bare atom list needs the ring and dimension supplied")
            atoms = d
        else:
            ring = ring or ring_from_json(d["ring"])
            n = int(d.get("n", n))
            atoms = d["atoms"]
        return Word(ring, n, tuple(GenAtom.from_json(a, ring) for a in atoms))

    def __repr__(self):
        return "Word[" + " ".join(map(repr, self.atoms)) + "]"


def _inverse_pair(a: GenAtom, b: GenAtom) -> bool:
    return a.family == b.family and a.i == b.i and a.j == b.j and (a.z + b.z).is_zero()


Conjugator = Union[Mat, Word, None]


def _conj_matrices(c: Conjugator, ring: Ring, n: int) -> tuple[Mat, Mat] | None:
    if c is None:
        return None
    if isinstance(c, Word):
        if not c.atoms:
            return None
        return c.eval(), c.inverse().eval()
    if c.ring != ring or c.n != n:
        raise RingMismatch("conjugator does not match the word")
    return c, c.inverse()


def _same_conj(a: Conjugator, b: Conjugator) -> bool:
    if a is b:
        return True
    if a is None or b is None:
        return False
    return type(a) is type(b) and a == b


@dataclass(frozen=True)
class RelWord:
    """Π conj_k · atom_k · conj_k⁻¹ with every atom parameter in ``ideal``."""

    ring: Ring
    n: int
    ideal: IdealSpec
    items: tuple = ()

    def __post_init__(self):
        items = tuple((c, a) for c, a in self.items)
        object.__setattr__(self, "items", items)
        if self.ideal.ring != self.ring:
            raise RingMismatch("ideal lives in a different ring")
        for c, a in items:
            if a.ring != self.ring:
                raise RingMismatch("atom ring differs from word ring")
            a.check_dim(self.n)
            if not self.ideal.contains(a.z):
                raise InvalidElement(f"parameter {a.z} is not in the ideal {self.ideal}")
            if isinstance(c, Word) and (c.ring != self.ring or c.n != self.n):
                raise RingMismatch("conjugator word does not match")

    def __len__(self):
        return len(self.items)

    def params_in_ideal(self) -> bool:
        return all(self.ideal.contains(a.z) for _, a in self.items)

    def eval(self) -> Mat:
        # consecutive items sharing a conjugator are conjugated once as a block
        out = Mat.identity(self.ring, self.n)
        k = 0
        while k < len(self.items):
            c = self.items[k][0]
            block = [list(r) for r in Mat.identity(self.ring, self.n).rows]
            while k < len(self.items) and _same_conj(self.items[k][0], c):
                right_apply(block, self.items[k][1])
                k += 1
            B = Mat(self.ring, block)
            pair = _conj_matrices(c, self.ring, self.n)
            out = out * B if pair is None else out * pair[0] * B * pair[1]
        return out

    def to_json(self) -> dict:
        items = []
        for c, a in self.items:
            item = {"atom": a.to_json()}
            if isinstance(c, Word):
                item["conj"] = c.to_json()
            elif isinstance(c, Mat):
                item["conj"] = {"type": "Mat", **c.to_json()}
            else:
                item["conj"] = None
            items.append(item)
        return {
            "type": "RelWord",
            "ring": self.ring.descriptor(),
            "n": self.n,
            "ideal": self.ideal.to_json(),
            "items": items,
        }

    @staticmethod
    def from_json(d: dict, ring: Ring | None = None) -> "RelWord":
        ring = ring or ring_from_json(d["ring"])
        n = int(d["n"])
        ideal = IdealSpec(ring, tuple(ring.from_json_value(g) for g in d["ideal"]))
        items = []
        for it in d["items"]:
            c = it.get("conj")
            if c is None:
                conj = None
            elif c.get("type") == "Word":
                conj = Word.from_json(c, ring)
            else:
                conj = Mat.from_json(c, ring)
            items.append((conj, GenAtom.from_json(it["atom"], ring)))
        return RelWord(ring, n, ideal, tuple(items))


def eval_word(w: Word | RelWord) -> Mat:
    return w.eval()


def word_from_json(d, ring: Ring | None = None, n: int | None = None):
    if isinstance(d, dict) and d.get("type") == "RelWord":
        return RelWord.from_json(d, ring)
    return Word.from_json(d, ring, n)


def word_map(h: RingHom, w: Word | RelWord) -> Word | RelWord:
    """Image of a word under a ring homomorphism, atom by atom."""
    if w.ring != h.domain:
        raise RingMismatch(f"homomorphism expects {h.domain}, word is over {w.ring}")
    C = h.codomain

    def img(a: GenAtom) -> GenAtom:
        return GenAtom(a.family, a.i, a.j, RElem(C, h.raw(a.z.v)))

    if isinstance(w, Word):
        return Word(C, w.n, tuple(img(a) for a in w.atoms))
    items = []
    for c, a in w.items:
        if isinstance(c, Word):
            c = word_map(h, c)
        elif isinstance(c, Mat):
            c = c.map(h)
        items.append((c, img(a)))
    ideal = IdealSpec(C, tuple(h.raw(g) for g in w.ideal.gens))
    return RelWord(C, w.n, ideal, tuple(items))


def relativize(w: Word, retraction: Retraction) -> RelWord:
    """Rewrite a word that is trivial modulo ker(pi) as a product of conjugated kernel atoms.

    Each parameter splits as z = s(pi(z)) + j.  With B_k, J_k the atoms for those
    two parts and P_k = B_1 ... B_k, the word equals
    (P_1 J_1 P_1⁻¹) ... (P_N J_N P_N⁻¹) · P_N, and P_N = I by the precondition.
    """
    pi, split = retraction.pi, retraction.split
    if w.ring != pi.domain:
        raise RingMismatch("word ring differs from the retraction domain")
    S = w.ring
    kernel = retraction.kernel_ideal()
    image = w.eval().map(pi)
    if not image.is_identity():
        raise PreconditionError("word does not evaluate to the identity modulo the kernel")
    prefix: list[GenAtom] = []
    items = []
    for a in w.atoms:
        s = split.raw(pi.raw(a.z.v))
        j = S.sub(a.z.v, s)
        b = a.with_param(RElem(S, s))
        if not b.is_trivial():
            if prefix and _inverse_pair(prefix[-1], b):
                prefix.pop()
            else:
                prefix.append(b)
        if j != S.zero():
            items.append((Word(S, w.n, tuple(prefix)), a.with_param(RElem(S, j))))
    if prefix:
        # the split part is a word over split(R); check it really collapsed
        P = Word(S, w.n, tuple(prefix)).eval()
        if not P.is_identity():
            raise PreconditionError("split prefix does not collapse to the identity")
    return RelWord(S, w.n, kernel, tuple(items))
