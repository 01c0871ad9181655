"""Reflections, spinor norms, square classes and the even orthogonal decomposition."""
from __future__ import annotations

from collections import deque
from fractions import Fraction

import numpy as np
import pytest
import sympy

from _gen import rand_elementary, rand_relative, rand_unit, torus_diag
from ringgroups.errors import MembershipError, NotAUnit, PreconditionError
from ringgroups.factorize import (
    SquareClass,
    conjugate_by_diagonal,
    reflection,
    so_decompose_local,
    spinor_norm,
    square_in_eo,
    torus_square_word,
    whitehead_orth,
)
from ringgroups.matrices import Mat, is_member, phi, sigma, torus
from ringgroups.rings import IdealSpec, LocalizedAtPrime, Modular, PrimeField, Rationals
from ringgroups.words import GenAtom, RelWord, Word

F5 = PrimeField(5)
F7 = PrimeField(7)
Z9 = Modular(9)
QQ = Rationals()


# -- the Whitehead-type torus word ------------------------------------------------------------


def _sym_atom(i, j, z, n):
    """Orthogonal root element I + z E_ij - z E_σ(j)σ(i), written out directly."""
    M = sympy.eye(n)
    M[i - 1, j - 1] += z
    M[sigma(j) - 1, sigma(i) - 1] -= z
    return M


def test_whitehead_word_symbolically():
    u = sympy.Symbol("u", nonzero=True)
    probe = Fraction(7)
    w = whitehead_orth(QQ(probe), 2)
    lookup = {probe: u, -1 / probe: -1 / u, Fraction(1): sympy.Integer(1), Fraction(-1): sympy.Integer(-1)}
    M = sympy.eye(4)
    for a in w:
        M = M * _sym_atom(a.i, a.j, lookup[a.z.v], 4)
    assert sympy.simplify(M - sympy.diag(u, 1 / u, 1 / u, u)) == sympy.zeros(4, 4)


def _eo_closure(p, n):
    """All elements of the group generated by orthogonal root elements over Z/p (brute force)."""
    gens = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j and i != sigma(j):
                for z in range(1, p):
                    M = np.eye(n, dtype=np.int64)
                    M[i - 1, j - 1] += z
                    M[sigma(j) - 1, sigma(i) - 1] -= z
                    gens.append(M % p)
    start = np.eye(n, dtype=np.int64)
    seen = {start.tobytes()}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = (x @ g) % p
            key = y.tobytes()
            if key not in seen:
                seen.add(key)
                queue.append(y)
    return seen


@pytest.fixture(scope="module")
def eo4_f5():
    return _eo_closure(5, 4)


def test_eo4_f5_order(eo4_f5):
    # |SO4+(5)| = (5^2 (5^2 - 1)^2) = 14400, and the spinor kernel has index 2
    assert len(eo4_f5) == 7200


@pytest.mark.parametrize("u", [1, 2, 3, 4])
def test_whitehead_matrix_found_by_search(eo4_f5, u):
    target = np.diag([u, pow(u, -1, 5), pow(u, -1, 5), u]).astype(np.int64) % 5
    assert target.tobytes() in eo4_f5
    assert np.array_equal(np.array(whitehead_orth(F5(u), 2).eval().rows, dtype=np.int64), target)


@pytest.mark.parametrize("u", [1, 2, 3, 4])
def test_torus_in_eo_iff_square(eo4_f5, u):
    D = np.diag([u, pow(u, -1, 5), 1, 1]).astype(np.int64)
    assert (D.tobytes() in eo4_f5) == SquareClass(F5, u).is_trivial()


@pytest.mark.parametrize("R, u, m", [(F7, 3, 2), (Z9, 2, 2), (F7, 5, 3), (F7, 1, 2)])
def test_whitehead_orth_values(R, u, m):
    n = 2 * m
    w = whitehead_orth(R(u), m)
    ui = R.inv(R.coerce(u))
    expected = Mat.diag(R, [R.coerce(u), ui, ui, R.coerce(u)] + [R.one()] * (n - 4))
    assert w.eval() == expected
    assert all(a.family == "OrthO" for a in w)


def test_whitehead_orth_rejects():
    with pytest.raises(NotAUnit):
        whitehead_orth(Z9(3))
    with pytest.raises(PreconditionError):
        whitehead_orth(F7(3), 1)


@pytest.mark.parametrize("u", [2, 3, 6])
def test_torus_square_word(u):
    w = torus_square_word(F7(u), 2)
    assert w.eval() == torus(F7(u * u), 4)


# -- reflections ---------------------------------------------------------------------------------


def test_reflection_negates_its_vector():
    v = [F7(1), F7(2), F7(3), F7(5)]
    T = reflection(v)
    col = T.transpose().vec_mul([x.v for x in v])
    assert col == tuple(F7.neg(x.v) for x in v)
    assert is_member(T, "O") and T.det() == F7(-1)


def test_reflection_in_e1_minus_e2_swaps():
    T = reflection([F7(1), F7(-1), F7(0), F7(0)])
    assert T.rows[0][:2] == (0, 1) and T.rows[1][:2] == (1, 0)


@pytest.mark.parametrize("u", [2, 3, 4, 5, 6])
def test_two_reflections_give_torus(u):
    a = reflection([F7(1), F7(-1), F7(0), F7(0)])
    b = reflection([F7(1), F7(-u), F7(0), F7(0)])
    assert a * b == torus(F7(u), 4)


def test_reflection_needs_anisotropic_vector():
    with pytest.raises(NotAUnit):
        reflection([F7(1), F7(0), F7(0), F7(0)])


# -- decomposition and spinor norm -------------------------------------------------------------------


def test_decompose_torus():
    u, w = so_decompose_local(torus(F7(3), 4))
    assert u == F7(3) and len(w) == 0


def test_decompose_single_atom():
    A = Word(F7, 4, (GenAtom("OrthO", 1, 3, F7(2)),)).eval()
    u, w = so_decompose_local(A)
    assert u == F7(1) and w.eval() == A


def test_decompose_mixed_product():
    M = torus(F7(3), 4) * Word(F7, 4, (GenAtom("OrthO", 1, 4, F7(2)), GenAtom("OrthO", 3, 1, F7(5)))).eval()
    u, w = so_decompose_local(M)
    assert torus(u, 4) * w.eval() == M
    assert SquareClass(F7, u.v) == SquareClass(F7, 3)


@pytest.mark.parametrize("R", [F7, Z9, PrimeField(11), LocalizedAtPrime(5)], ids=str)
@pytest.mark.parametrize("n", [4, 6])
def test_decompose_round_trip(R, n, rng):
    u0 = rand_unit(R, rng)
    M = torus_diag(R, n, u0) * rand_elementary(R, n, "SO", rng, 12)
    u, w = so_decompose_local(M)
    assert torus(u, n) * w.eval() == M


def test_decompose_preconditions():
    with pytest.raises(PreconditionError):
        so_decompose_local(Mat.identity(Modular(8), 4))
    with pytest.raises(PreconditionError):
        so_decompose_local(Mat.identity(F7, 2))
    with pytest.raises(MembershipError):
        so_decompose_local(Mat.diag(F7, [2, 1, 1, 1]))


def _zassenhaus(M):
    R = M.ring
    half = R.inv(R.from_int(2))
    S = (Mat.identity(R, M.n) + M).scale(half)
    return SquareClass(R, S.det().v)


def test_spinor_norm_matches_zassenhaus(rng):
    checked = 0
    for _ in range(200):
        M = torus_diag(F7, 4, rand_unit(F7, rng)) * rand_elementary(F7, 4, "SO", rng, rng.randint(1, 10))
        if not F7.is_unit((Mat.identity(F7, 4) + M).det().v):
            continue
        assert spinor_norm(M) == _zassenhaus(M)
        checked += 1
    assert checked > 50


def test_spinor_norm_of_reflection_products(rng):
    for _ in range(40):
        vs = []
        while len(vs) < 3:
            v = [rng.randrange(7) for _ in range(4)]
            q = (2 * (v[0] * v[1] + v[2] * v[3])) % 7
            if q:
                vs.append((v, q))
        a, b, c = (reflection([F7(x) for x in v]) for v, _ in vs)
        assert spinor_norm(a) == SquareClass(F7, vs[0][1])
        assert spinor_norm(a * b) == SquareClass(F7, vs[0][1] * vs[1][1])
        assert spinor_norm(a * b * c) == SquareClass(F7, vs[0][1] * vs[1][1] * vs[2][1])


def test_spinor_norm_multiplicative(rng):
    for _ in range(100):
        a = torus_diag(F7, 4, rand_unit(F7, rng)) * rand_elementary(F7, 4, "SO", rng, 6)
        b = torus_diag(F7, 4, rand_unit(F7, rng)) * rand_elementary(F7, 4, "SO", rng, 6)
        assert spinor_norm(a * b) == spinor_norm(a) * spinor_norm(b)


def test_elementary_words_have_trivial_norm(rng):
    for n in (4, 6):
        assert spinor_norm(rand_elementary(F7, n, "SO", rng, 15)).is_trivial()


# -- square classes --------------------------------------------------------------------------------


@pytest.mark.parametrize(
    "R, a, b, same",
    [
        (F7, 2, 4, True),
        (F7, 3, 5, True),
        (F7, 1, 3, False),
        (QQ, Fraction(8), Fraction(2), True),
        (QQ, Fraction(2, 9), Fraction(18), True),
        (QQ, Fraction(-1), Fraction(1), False),
        (QQ, Fraction(3), Fraction(1, 3), True),
        (LocalizedAtPrime(3), Fraction(4, 5), Fraction(5), True),
        (LocalizedAtPrime(3), Fraction(2), Fraction(1), False),
    ],
)
def test_square_class_equality(R, a, b, same):
    assert (SquareClass(R, a) == SquareClass(R, b)) == same


def test_square_class_canonical_representatives():
    assert SquareClass(QQ, Fraction(-12, 5)).canonical() == Fraction(-15)
    assert sorted({SquareClass(F7, u).canonical() for u in range(1, 7)}) == [1, 3]
    with pytest.raises(NotAUnit):
        SquareClass(Z9, 3)


# -- squares in the elementary orthogonal group -----------------------------------------------------


def test_square_of_atom():
    A = Word(F7, 4, (GenAtom("OrthO", 1, 3, F7(1)),)).eval()
    w = square_in_eo(A)
    assert w.atoms == (GenAtom("OrthO", 1, 3, F7(2)),)


def test_square_of_torus():
    w = square_in_eo(torus(F7(3), 4))
    assert w.eval() == torus(F7(2), 4)


@pytest.mark.parametrize("R", [F7, Z9], ids=str)
def test_square_round_trip(R, rng):
    for _ in range(5):
        M = torus_diag(R, 6, rand_unit(R, rng)) * rand_elementary(R, 6, "SO", rng, 10)
        w = square_in_eo(M)
        assert w.eval() == M * M
        assert all(a.family == "OrthO" for a in w)


def test_relative_square(rng):
    I = IdealSpec.of(Z9, [3])
    M = rand_relative(Z9, 4, I, rng, count=3, family="OrthO") * torus(Z9(4), 4)
    assert is_member(M, "SO", I)
    rw = square_in_eo(M, I)
    assert isinstance(rw, RelWord)
    assert rw.eval() == M * M and rw.params_in_ideal()


def test_conjugate_by_diagonal(rng):
    w = Word(F7, 4, (GenAtom("OrthO", 1, 3, F7(2)), GenAtom("OrthO", 4, 2, F7(5))))
    d = [F7.coerce(x) for x in (3, 5, 2, 4)]
    D = Mat.diag(F7, d)
    assert conjugate_by_diagonal(w, d).eval() == D.inverse() * w.eval() * D


def test_commutator_as_product_of_squares(rng):
    x = torus_diag(F7, 4, 3) * rand_elementary(F7, 4, "SO", rng)
    y = rand_elementary(F7, 4, "SO", rng)
    xi, yi = x.inverse(), y.inverse()
    lhs = x * y * xi * yi
    rhs = (x * y * xi) ** 2 * x**2 * (xi * yi) ** 2
    assert lhs == rhs


def test_phi_form_preserved_by_square_words(rng):
    M = rand_elementary(F7, 4, "SO", rng)
    W = square_in_eo(M).eval()
    assert W.transpose() * phi(F7, 2) * W == phi(F7, 2)
