"""Factoring SL_n and Sp_2m matrices over local (and finite semilocal) rings."""
from __future__ import annotations

from ..errors import MembershipError, PreconditionError
from ..matrices import Mat, is_member
from ..rings import RElem
from ..words import GenAtom, Word, left_apply, right_apply
from .unimodular import _normalize_family, reduce_row


def _check(alpha: Mat, family: str) -> None:
    group = "SL" if family == "linear" else "Sp"
    chk = is_member(alpha, group)
    if not chk:
        raise MembershipError(f"input is not in {group}: {chk.reason}")


def reduce_local(alpha: Mat, family: str = "linear", check: bool = True) -> Word:
    """Word of LinE (or SpSE) atoms evaluating exactly to ``alpha``."""
    family = _normalize_family(family)
    if check:
        _check(alpha, family)
    if family == "linear":
        return _reduce_linear(alpha)
    return _reduce_symplectic(alpha)


def _reduce_linear(alpha: Mat) -> Word:
    R, n = alpha.ring, alpha.n
    if n == 1:
        if alpha.rows[0][0] != R.one():
            raise MembershipError("1×1 matrix is not the identity")
        return Word(R, 1)
    w1 = reduce_row(alpha.rows[0], R, "linear")
    rows = [list(r) for r in alpha.rows]
    for a in w1:
        right_apply(rows, a)
    # first row is now e1; clear the first column from the left
    left = []
    for i in range(2, n + 1):
        c = rows[i - 1][0]
        if c != R.zero():
            a = GenAtom("LinE", i, 1, RElem(R, R.neg(c)))
            left_apply(rows, a)
            left.append(a)
    minor = Mat(R, [r[1:] for r in rows[1:]])
    inner = _reduce_linear(minor).shifted(1, n)
    # alpha = L⁻¹ · (1 ⊥ minor) · W1⁻¹
    return Word(R, n, tuple(a.inverse() for a in left)) + inner + Word(R, n, tuple(w1)).inverse()


def _reduce_symplectic(alpha: Mat) -> Word:
    R, n = alpha.ring, alpha.n
    if n == 0:
        return Word(R, 0)
    w1 = reduce_row(alpha.rows[0], R, "symplectic")
    rows = [list(r) for r in alpha.rows]
    for a in w1:
        right_apply(rows, a)
    # row 2 pairs with e1 to 1; clear it with atoms that keep row 1 fixed (se_2j, then se_21)
    w2 = []
    for j in list(range(3, n + 1)) + [1]:
        c = rows[1][j - 1]
        if c != R.zero():
            a = GenAtom("SpSE", 2, j, RElem(R, R.neg(c)))
            right_apply(rows, a)
            w2.append(a)
    one, zero = R.one(), R.zero()
    for i in range(n):
        for j in range(2):
            want = one if i == j else zero
            if rows[i][j] != want or rows[j][i] != want:
                raise PreconditionError("symplectic normalization failed; input not symplectic?")
    minor = Mat(R, [r[2:] for r in rows[2:]])
    inner = _reduce_symplectic(minor).shifted(2, n) if n > 2 else Word(R, n)
    return inner + Word(R, n, tuple(w2)).inverse() + Word(R, n, tuple(w1)).inverse()
