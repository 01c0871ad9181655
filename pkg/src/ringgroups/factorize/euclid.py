"""Elementary factorization of SL_n over Euclidean rings (ZZ, k[X], ZZ_(p), fields)."""
from __future__ import annotations

from ..errors import MembershipError, PreconditionError
from ..matrices import Mat, det_raw
from ..rings import RElem
from ..words import GenAtom, Word, left_apply, right_apply


def reduce_euclidean(alpha: Mat) -> Word:
    """LinE word evaluating to ``alpha`` ∈ SL_n(R), R Euclidean.

    Column 1 is reduced by gcd steps from the left, its surviving unit is turned
    into a 1 at position (1,1), row 1 is cleared from the right and the
    (n-1)-minor is handled recursively.
    """
    R = alpha.ring
    if not (R.is_euclidean or R.is_field):
        raise PreconditionError(f"{R} is not Euclidean")
    if alpha.n < 1:
        return Word(R, 0)
    if det_raw(alpha) != R.one():
        raise MembershipError("determinant is not 1")
    return _reduce(alpha)


def _reduce(alpha: Mat) -> Word:
    R, n = alpha.ring, alpha.n
    zero, one = R.zero(), R.one()
    if n == 1:
        return Word(R, 1)
    rows = [list(r) for r in alpha.rows]
    left: list[GenAtom] = []
    right: list[GenAtom] = []

    def lop(i, j, z):
        if z != zero:
            a = GenAtom("LinE", i, j, RElem(R, z))
            left_apply(rows, a)
            left.append(a)

    def rop(i, j, z):
        if z != zero:
            a = GenAtom("LinE", i, j, RElem(R, z))
            right_apply(rows, a)
            right.append(a)

    # gcd chain on column 1
    while True:
        nz = [i for i in range(n) if rows[i][0] != zero]
        if len(nz) <= 1:
            break
        p = min(nz, key=lambda i: (R.euclid_size(rows[i][0]), i))
        for i in nz:
            if i != p:
                q, _ = R.divmod(rows[i][0], rows[p][0])
                lop(i + 1, p + 1, R.neg(q))
    if not nz:
        raise MembershipError("first column vanishes")
    p = nz[0]
    d = rows[p][0]
    dinv = R.inv(d)
    if dinv is None:
        raise MembershipError("first column is not unimodular")
    if p != 0:
        lop(1, p + 1, dinv)
        lop(p + 1, 1, R.neg(d))
    elif d != one:
        lop(2, 1, dinv)
        lop(1, 2, R.sub(one, d))
        lop(2, 1, R.neg(one))
    for j in range(2, n + 1):
        rop(1, j, R.neg(rows[0][j - 1]))
    if rows[0][0] != one or any(rows[i][0] != zero for i in range(1, n)):
        raise AssertionError("column elimination failed")
    inner = _reduce(Mat(R, [r[1:] for r in rows[1:]])).shifted(1, n)
    # alpha = L⁻¹ · (1 ⊥ minor) · R⁻¹
    return Word(R, n, tuple(a.inverse() for a in left)) + inner + Word(R, n, tuple(right)).inverse()
