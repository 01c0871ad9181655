"""Even orthogonal groups over local rings with 2 invertible: SO = D(u)·EO, spinor norms, squares."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from ..errors import MembershipError, NotAUnit, PreconditionError, UndecidableError
from ..matrices import Mat, det_raw, is_member, lift_congruence, phi, torus
from ..rings import (
    Excision,
    ExcisionSum,
    IdealSpec,
    LocalizedAtPrime,
    Rationals,
    RElem,
    Retraction,
    Ring,
)
from ..words import GenAtom, RelWord, Word, relativize, right_apply, word_map


def _require_two_unit(R: Ring) -> None:
    if R.inv(R.from_int(2)) is None:
        raise PreconditionError(f"2 is not a unit in {R}")


# -- square classes -----------------------------------------------------------------------


@lru_cache(maxsize=64)
def _unit_squares(R: Ring) -> frozenset:
    return frozenset(R.mul(x, x) for x in R.elements() if R.is_unit(x))


def _is_rational_square(q: Fraction) -> bool:
    if q < 0:
        return False
    a, b = q.numerator, q.denominator
    return math.isqrt(a) ** 2 == a and math.isqrt(b) ** 2 == b


def is_square_unit(R: Ring, x) -> bool:
    if R.inv(x) is None:
        raise NotAUnit(f"{R.fmt(x)} is not a unit")
    if R.is_finite:
        return x in _unit_squares(R)
    if isinstance(R, (Rationals, LocalizedAtPrime)):
        # a unit of a localization of ZZ is a square there iff it is a rational square
        return _is_rational_square(x)
    raise UndecidableError(f"square classes in {R}")


class SquareClass:
    """The class of a unit modulo squares of units."""

    __slots__ = ("ring", "u")

    def __init__(self, ring: Ring, u):
        self.ring = ring
        self.u = ring.coerce(u)
        if ring.inv(self.u) is None:
            raise NotAUnit(f"{ring.fmt(self.u)} is not a unit")

    def __eq__(self, other):
        if not isinstance(other, SquareClass) or other.ring != self.ring:
            return NotImplemented
        R = self.ring
        return is_square_unit(R, R.mul(self.u, R.inv(other.u)))

    def __hash__(self):
        # classes are compared semantically; hash on the canonical representative when finite
        return hash((self.ring, self.canonical()))

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        return SquareClass(self.ring, self.ring.mul(self.u, other.u))

    def is_trivial(self) -> bool:
        return is_square_unit(self.ring, self.u)

    def canonical(self):
        """Least representative in the ring's sort order (finite rings), else the stored unit."""
        R = self.ring
        if R.is_finite:
            reps = [y for y in R.elements() if R.is_unit(y) and SquareClass(R, y) == self]
            return min(reps, key=R.sort_key)
        if isinstance(R, (Rationals, LocalizedAtPrime)):
            q = Fraction(self.u)
            sign = -1 if q < 0 else 1
            return Fraction(sign * _squarefree(abs(q.numerator) * q.denominator))
        return self.u

    def __repr__(self):
        return f"[{self.ring.fmt(self.canonical())}]"


def _squarefree(k: int) -> int:
    out, f = 1, 2
    while f * f <= k:
        while k % (f * f) == 0:
            k //= f * f
        if k % f == 0:
            out *= f
            k //= f
        f += 1
    return out * k


# -- reflections and Whitehead-type words -----------------------------------------------------


def bilinear(v: Sequence, w: Sequence, G: Mat):
    R = G.ring
    acc = R.zero()
    for i in range(G.n):
        for j in range(G.n):
            if G.rows[i][j] != R.zero():
                acc = R.add(acc, R.mul(R.mul(v[i], G.rows[i][j]), w[j]))
    return acc


def reflection(v: Sequence, ring: Ring | None = None) -> Mat:
    """x ↦ x - 2 v B(v,x)/B(v,v) for the hyperbolic form φ_m, as a matrix on columns."""
    if ring is None:
        ring = v[0].ring
    R = ring
    vv = [R.coerce(x) for x in v]
    n = len(vv)
    if n % 2:
        raise PreconditionError("reflections are defined on even-rank hyperbolic spaces")
    _require_two_unit(R)
    G = phi(R, n // 2)
    q = bilinear(vv, vv, G)
    qinv = R.inv(q)
    if qinv is None:
        raise NotAUnit(f"B(v,v) = {R.fmt(q)} is not a unit")
    c = R.mul(R.from_int(2), qinv)
    Gv = [bilinear(vv, [R.one() if k == j else R.zero() for k in range(n)], G) for j in range(n)]
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            delta = R.one() if i == j else R.zero()
            row.append(R.sub(delta, R.mul(c, R.mul(vv[i], Gv[j]))))
        rows.append(row)
    return Mat(R, rows)


def _w_word(R: Ring, n: int, i: int, j: int, u) -> list[GenAtom]:
    ui = R.inv(u)
    mk = lambda a, b, z: GenAtom("OrthO", a, b, RElem(R, z))
    return [mk(i, j, u), mk(j, i, R.neg(ui)), mk(i, j, u)]


def _h_word(R: Ring, n: int, j: int, u) -> Word:
    one = R.one()
    atoms = _w_word(R, n, 1, j, u) + _w_word(R, n, 1, j, R.neg(one))
    return Word(R, n, tuple(atoms))


def whitehead_orth(u: RElem, m: int = 2) -> Word:
    """OrthO word for diag(u, u⁻¹, u⁻¹, u) ⊥ I, i.e. D(u) ⊥ D(u⁻¹).

    Built as w(u)·w(-1) with w(u) = o13(u) o31(-u⁻¹) o13(u).
    """
    R = u.ring
    if m < 2:
        raise PreconditionError("needs at least two hyperbolic planes")
    if R.inv(u.v) is None:
        raise NotAUnit(f"{u} is not a unit")
    n = 2 * m
    if u.v == R.one():
        return Word(R, n)
    return _h_word(R, n, 3, u.v)


def torus_square_word(u: RElem, m: int = 2) -> Word:
    """OrthO word for D(u²): diag(u,u⁻¹,u⁻¹,u) · diag(u,u⁻¹,u,u⁻¹)."""
    R = u.ring
    if u.v == R.one():
        return Word(R, 2 * m)
    return whitehead_orth(u, m) + _h_word(R, 2 * m, 4, u.v)


# -- SO_2m = D(u) · EO_2m over local rings --------------------------------------------------------


def so_decompose_local(alpha: Mat, check: bool = True) -> tuple[RElem, Word]:
    """(u, w) with alpha = D(u) · eval(w) and w a word of OrthO atoms."""
    R = alpha.ring
    _require_two_unit(R)
    if alpha.n < 4 or alpha.n % 2:
        raise PreconditionError("so_decompose_local needs SO_2m with m ≥ 2")
    if check:
        chk = is_member(alpha, "SO")
        if not chk:
            raise MembershipError(chk.reason)
    u, w = _so(alpha)
    return RElem(R, u), w


def _so(M: Mat) -> tuple:
    R, n = M.ring, M.n
    zero, one = R.zero(), R.one()
    if n == 2:
        a, b = M.rows[0]
        c, d = M.rows[1]
        if b != zero or c != zero or R.mul(a, d) != one:
            raise MembershipError("2×2 block is not diagonal; ring not local?")
        return a, Word(R, 2)
    rows = [list(r) for r in M.rows]
    S: list[GenAtom] = []
    T: list[GenAtom] = []

    def rop(acc, i, j, z):
        if z != zero:
            a = GenAtom("OrthO", i, j, RElem(R, z))
            right_apply(rows, a)
            acc.append(a)

    x = rows[0]
    units = [k for k in range(1, n + 1) if R.is_unit(x[k - 1])]
    if not units:
        raise MembershipError("first row has no unit entry; ring not local?")
    if 1 not in units:
        high = [k for k in units if k >= 3]
        if high:
            k = high[0]
        else:
            rop(S, 2, 3, one)
            k = 3
        rop(S, k, 1, R.mul(R.sub(one, rows[0][0]), R.inv(rows[0][k - 1])))
    u = rows[0][0]
    uinv = R.inv(u)
    for j in range(3, n + 1):
        rop(S, 1, j, R.neg(R.mul(rows[0][j - 1], uinv)))
    if rows[0][1] != zero:
        raise MembershipError("first row is not isotropic")
    # D(u)⁻¹ on the left
    rows[0] = [R.mul(uinv, y) for y in rows[0]]
    rows[1] = [R.mul(u, y) for y in rows[1]]
    for j in range(3, n + 1):
        rop(T, 2, j, R.neg(rows[1][j - 1]))
    for i in range(n):
        for j in range(2):
            want = one if i == j else zero
            if rows[i][j] != want or rows[j][i] != want:
                raise MembershipError("orthogonal normalization failed")
    v, inner = _so(Mat(R, [r[2:] for r in rows[2:]]))
    word = Word(R, n)
    if v != one:
        word = whitehead_orth(RElem(R, R.inv(v)), n // 2)
    word = word + inner.shifted(2, n) + Word(R, n, tuple(T)).inverse() + Word(R, n, tuple(S)).inverse()
    return R.mul(u, v), word


def spinor_norm(alpha: Mat) -> SquareClass:
    """Spinor norm of alpha ∈ O_2m(R): the class of u in alpha = D(u)·(elementary).

    Elements of determinant -1 are first multiplied by the reflection in e1 - e2,
    whose norm is [-2].
    """
    R = alpha.ring
    chk = is_member(alpha, "O")
    if not chk:
        raise MembershipError(chk.reason)
    if det_raw(alpha) == R.one():
        u, _ = so_decompose_local(alpha, check=False)
        return SquareClass(R, u.v)
    v = [R.zero()] * alpha.n
    v[0], v[1] = R.one(), R.neg(R.one())
    u, _ = so_decompose_local(reflection(v, R) * alpha, check=False)
    return SquareClass(R, R.mul(R.from_int(-2), u.v))


# -- squares land in EO -------------------------------------------------------------------


def conjugate_by_diagonal(w: Word, d: Sequence) -> Word:
    """Word for diag(d)⁻¹ · eval(w) · diag(d); atom parameters scale by d_i⁻¹ d_j."""
    R = w.ring
    atoms = []
    for a in w.atoms:
        f = R.mul(R.inv(d[a.i - 1]), d[a.j - 1])
        atoms.append(a.with_param(RElem(R, R.mul(a.z.v, f))))
    return Word(R, w.n, tuple(atoms))


def _square_word(alpha: Mat) -> Word:
    n = alpha.n
    u, w = so_decompose_local(alpha, check=False)
    # α² = D(u)·W·D(u)·W = D(u²) · (D(u)⁻¹ W D(u)) · W
    d = [row[i] for i, row in enumerate(torus(u, n).rows)]
    word = torus_square_word(u, n // 2) + conjugate_by_diagonal(w, d) + w
    return word.merged()


def square_in_eo(alpha: Mat, rel: IdealSpec | None = None) -> Word | RelWord:
    """Word for alpha² in EO_2m(R), or a RelWord in EO_2m(R, I) when ``rel`` is given."""
    R = alpha.ring
    _require_two_unit(R)
    if not R.is_local:
        raise PreconditionError(f"{R} is not local")
    if alpha.n < 4 or alpha.n % 2:
        raise PreconditionError("square_in_eo needs SO_2m with m ≥ 2")
    chk = is_member(alpha, "SO", rel)
    if not chk:
        raise MembershipError(chk.reason)
    if rel is None:
        return _square_word(alpha)
    if not rel.is_proper:
        raise PreconditionError("the ideal must be proper")
    E = Excision.of(rel)
    word = _square_word(lift_congruence(alpha, rel))
    return word_map(ExcisionSum(E), relativize(word, Retraction.excision(E)))
