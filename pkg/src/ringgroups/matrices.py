"""Dense square matrices over the ring tower, standard forms and membership predicates.

Unimodular rows are row vectors acted on from the right (``v · ε``).  All
indices in this module are 0-based; generator atoms use the 1-based
convention of the literature and translate at their boundary.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionMismatch, MembershipError, NotAUnit, RingMismatch
from .rings import IdealSpec, RElem, Ring


class Mat:
    __slots__ = ("ring", "n", "rows", "_hash")

    def __init__(self, ring: Ring, rows: Sequence[Sequence]):
        """``rows`` must already hold canonical raw values; use :meth:`from_rows` otherwise."""
        self.ring = ring
        self.rows = tuple(tuple(r) for r in rows)
        self.n = len(self.rows)
        if any(len(r) != self.n for r in self.rows):
            raise DimensionMismatch("matrix must be square")
        self._hash = None

    @classmethod
    def from_rows(cls, ring: Ring, rows: Iterable[Iterable]) -> "Mat":
        return cls(ring, [[ring.coerce(x) for x in r] for r in rows])

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Mat":
        z, o = ring.zero(), ring.one()
        return cls(ring, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, ring: Ring, entries: Sequence) -> "Mat":
        z = ring.zero()
        vals = [ring.coerce(e) for e in entries]
        n = len(vals)
        return cls(ring, [[vals[i] if i == j else z for j in range(n)] for i in range(n)])

    # -- access ----------------------------------------------------------------------
    def __getitem__(self, ij) -> RElem:
        i, j = ij
        return RElem(self.ring, self.rows[i][j])

    def row(self, i: int) -> tuple:
        return self.rows[i]

    def __eq__(self, other):
        return isinstance(other, Mat) and self.ring == other.ring and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.rows))
        return self._hash

    def __repr__(self):
        body = "; ".join(", ".join(self.ring.fmt(x) for x in r) for r in self.rows)
        return f"Mat[{self.ring}]({body})"

    def is_identity(self) -> bool:
        z, o = self.ring.zero(), self.ring.one()
        return all(
            x == (o if i == j else z) for i, r in enumerate(self.rows) for j, x in enumerate(r)
        )

    # -- arithmetic ------------------------------------------------------------------
    def _check(self, other: "Mat"):
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        if other.n != self.n:
            raise DimensionMismatch(f"{self.n} vs {other.n}")

    def __mul__(self, other: "Mat") -> "Mat":
        self._check(other)
        R = self.ring
        add, mul, zero = R.add, R.mul, R.zero()
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = zero
                for x, y in zip(r, c):
                    if x != zero and y != zero:
                        acc = add(acc, mul(x, y))
                row.append(acc)
            out.append(row)
        return Mat(R, out)

    def __add__(self, other: "Mat") -> "Mat":
        self._check(other)
        R = self.ring
        return Mat(R, [[R.add(x, y) for x, y in zip(a, b)] for a, b in zip(self.rows, other.rows)])

    def __sub__(self, other: "Mat") -> "Mat":
        self._check(other)
        R = self.ring
        return Mat(R, [[R.sub(x, y) for x, y in zip(a, b)] for a, b in zip(self.rows, other.rows)])

    def scale(self, c) -> "Mat":
        R = self.ring
        c = R.coerce(c)
        return Mat(R, [[R.mul(c, x) for x in r] for r in self.rows])

    def transpose(self) -> "Mat":
        return Mat(self.ring, list(zip(*self.rows)))

    def vec_mul(self, v: Sequence) -> tuple:
        """Row vector times matrix: ``v · self`` (raw values)."""
        R = self.ring
        out = []
        for j in range(self.n):
            acc = R.zero()
            for i in range(self.n):
                acc = R.add(acc, R.mul(v[i], self.rows[i][j]))
            out.append(acc)
        return tuple(out)

    def map(self, h) -> "Mat":
        """Entrywise image under a ring homomorphism."""
        return Mat(h.codomain, [[h.raw(x) for x in r] for r in self.rows])

    def block(self, offset: int, size: int) -> "Mat":
        return Mat(self.ring, [r[offset : offset + size] for r in self.rows[offset : offset + size]])

    def embed(self, offset: int, n: int) -> "Mat":
        """I_offset ⊥ self ⊥ I_rest inside an n×n identity."""
        M = [list(r) for r in Mat.identity(self.ring, n).rows]
        for i in range(self.n):
            for j in range(self.n):
                M[offset + i][offset + j] = self.rows[i][j]
        return Mat(self.ring, M)

    def perp(self, other: "Mat") -> "Mat":
        """Block diagonal sum self ⊥ other."""
        if other.ring != self.ring:
            raise RingMismatch("perpendicular sum across rings")
        n = self.n + other.n
        z = self.ring.zero()
        M = [[z] * n for _ in range(n)]
        for i in range(self.n):
            M[i][: self.n] = self.rows[i]
        for i in range(other.n):
            M[self.n + i][self.n :] = other.rows[i]
        return Mat(self.ring, M)

    def det(self) -> RElem:
        return RElem(self.ring, det_raw(self))

    def inverse(self) -> "Mat":
        return inverse(self)

    def __pow__(self, k: int) -> "Mat":
        if k < 0:
            return self.inverse() ** (-k)
        out = Mat.identity(self.ring, self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def to_json(self) -> dict:
        return {
            "ring": self.ring.descriptor(),
            "n": self.n,
            "rows": [[self.ring.to_json_value(x) for x in r] for r in self.rows],
        }

    @classmethod
    def from_json(cls, d: dict, ring: Ring | None = None) -> "Mat":
        from .rings import ring_from_json

        R = ring or ring_from_json(d["ring"])
        rows = [[R.from_json_value(x) for x in r] for r in d["rows"]]
        M = cls(R, rows)
        if "n" in d and int(d["n"]) != M.n:
            raise DimensionMismatch(f"declared n={d['n']} but {M.n} rows given")
        return M


def mat_mul(a: Mat, b: Mat) -> Mat:
    return a * b


def commutator(x: Mat, y: Mat) -> Mat:
    """[x, y] = x y x⁻¹ y⁻¹."""
    return x * y * x.inverse() * y.inverse()


# ----------------------------------------------------------------------------------------
# Division-free determinant (Berkowitz)
# ----------------------------------------------------------------------------------------


def charpoly_raw(a: Mat) -> list:
    """Coefficients [1, c1, ..., cn] of det(xI - a), highest degree first."""
    R = a.ring
    A = a.rows
    zero, one = R.zero(), R.one()
    add, mul, neg = R.add, R.mul, R.neg
    coeffs = [one]
    for r in range(a.n):
        # leading block M (r×r), new column S, new row Rw, corner entry
        S = [A[i][r] for i in range(r)]
        Rw = [A[r][j] for j in range(r)]
        toeplitz = [one, neg(A[r][r])]
        v = S
        for _ in range(r):
            toeplitz.append(neg(_dot(R, Rw, v)))
            v = [_dot(R, [A[i][j] for j in range(r)], v) for i in range(r)]
        new = []
        for k in range(r + 2):
            acc = zero
            for j in range(max(0, k - len(toeplitz) + 1), min(k, r) + 1):
                acc = add(acc, mul(toeplitz[k - j], coeffs[j]))
            new.append(acc)
        coeffs = new
    return coeffs


def _dot(R: Ring, u, v):
    acc = R.zero()
    for x, y in zip(u, v):
        acc = R.add(acc, R.mul(x, y))
    return acc


def det_raw(a: Mat):
    c = charpoly_raw(a)[-1]
    return c if a.n % 2 == 0 else a.ring.neg(c)


def det(a: Mat) -> RElem:
    return a.det()


def adjugate(a: Mat) -> Mat:
    """Division-free adjugate from Cayley-Hamilton."""
    R = a.ring
    n = a.n
    c = charpoly_raw(a)
    Q = Mat.identity(R, n)
    for k in range(1, n):
        Q = a * Q + Mat.identity(R, n).scale(c[k])
    return Q if (n + 1) % 2 == 0 else Q.scale(R.neg(R.one()))


def inverse(a: Mat) -> Mat:
    R = a.ring
    d = det_raw(a)
    dinv = R.inv(d)
    if dinv is None:
        raise NotAUnit(f"determinant {R.fmt(d)} is not a unit in {R}")
    adj = adjugate(a)
    return adj if dinv == R.one() else adj.scale(dinv)


# ----------------------------------------------------------------------------------------
# Forms, σ and membership
# ----------------------------------------------------------------------------------------


def sigma(i: int) -> int:
    """Partner index on 1..2m: σ(2k) = 2k-1, σ(2k-1) = 2k."""
    return i - 1 if i % 2 == 0 else i + 1


def psi(ring: Ring, m: int) -> Mat:
    """Alternating form ψ_m = ψ_1 ⊥ ... ⊥ ψ_1 with ψ_1 = [[0, 1], [-1, 0]]."""
    block = Mat.from_rows(ring, [[0, 1], [-1, 0]])
    out = block
    for _ in range(m - 1):
        out = out.perp(block)
    return out


def phi(ring: Ring, m: int) -> Mat:
    """Symmetric form φ_m = φ_1 ⊥ ... ⊥ φ_1 with φ_1 = [[0, 1], [1, 0]]."""
    block = Mat.from_rows(ring, [[0, 1], [1, 0]])
    out = block
    for _ in range(m - 1):
        out = out.perp(block)
    return out


@dataclass(frozen=True)
class FormSpec:
    kind: str  # "symplectic" | "orthogonal"
    m: int

    def gram(self, ring: Ring) -> Mat:
        return psi(ring, self.m) if self.kind == "symplectic" else phi(ring, self.m)


def torus(u: RElem, n: int, plane: int = 0) -> Mat:
    """D(u): diag(u, u⁻¹) on hyperbolic plane ``plane`` (0-based), identity elsewhere."""
    R = u.ring
    ui = u.unit_inverse()
    z, o = R.zero(), R.one()
    rows = [[o if i == j else z for j in range(n)] for i in range(n)]
    rows[2 * plane][2 * plane] = u.v
    rows[2 * plane + 1][2 * plane + 1] = ui.v
    return Mat(R, rows)


@dataclass(frozen=True)
class Check:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


GROUPS = ("SL", "Sp", "SO", "O")


def is_member(a: Mat, group: str, rel: IdealSpec | None = None) -> Check:
    """Exact membership test for SL_n, Sp_2m, SO_2m, O_2m (optionally the congruence
    subgroup of level ``rel``)."""
    group = {"sl": "SL", "sp": "Sp", "so": "SO", "o": "O"}.get(group.lower(), group)
    if group not in GROUPS:
        raise ValueError(f"unknown group {group!r}")
    R = a.ring
    if group != "SL":
        if a.n % 2:
            return Check(False, f"{group} needs even dimension, got {a.n}")
        m = a.n // 2
        G = psi(R, m) if group == "Sp" else phi(R, m)
        if a.transpose() * G * a != G:
            return Check(False, "form not preserved")
    if group in ("SL", "SO", "Sp"):
        d = det_raw(a)
        if d != R.one():
            return Check(False, f"determinant is {R.fmt(d)}, not 1")
    if rel is not None:
        if rel.ring != R:
            raise RingMismatch("ideal and matrix rings differ")
        diff = a - Mat.identity(R, a.n)
        for i, r in enumerate(diff.rows):
            for j, x in enumerate(r):
                if not R.ideal_contains(rel.gens, x):
                    return Check(False, f"entry ({i + 1},{j + 1}) is not congruent to the identity mod {rel}")
    return Check(True, "member")


def require_member(a: Mat, group: str, rel: IdealSpec | None = None) -> None:
    chk = is_member(a, group, rel)
    if not chk:
        raise MembershipError(f"not in {group}{'' if rel is None else f'(R, {rel})'}: {chk.reason}")


def lift_congruence(sigma_mat: Mat, ideal: IdealSpec) -> Mat:
    """σ = I + σ' ↦ (I, σ') over the excision ring R ⊕ I."""
    from .rings import Excision

    R = sigma_mat.ring
    S = Excision.of(ideal)
    n = sigma_mat.n
    diff = sigma_mat - Mat.identity(R, n)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            row.append(S.canon((R.one() if i == j else R.zero(), diff.rows[i][j])))
        rows.append(row)
    return Mat(S, rows)
