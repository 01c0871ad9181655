"""Acceptance suite: one test per criterion, named test_criterion_NN_<title>.

The conftest hook prints a PASS/FAIL line per criterion at the end of the run.
"""
from __future__ import annotations

import json
import math
import random

import pytest

from _gen import (
    FAMILY_OF,
    elements,
    rand_atom,
    rand_elem,
    rand_elementary,
    rand_relative,
    rand_unit,
    rand_word,
    torus_diag,
)
from ringgroups.certificates import verify_document
from ringgroups.cli import main as cli_main
from ringgroups.errors import IsometryError
from ringgroups.factorize import (
    HomotopyWitness,
    SquareClass,
    commutator_split,
    graded_homotopy,
    homotopy_commutator,
    reduce_local,
    relativize_excision,
    so_decompose_local,
    spinor_norm,
    square_in_eo,
)
from ringgroups.matrices import Mat, commutator, phi, psi, torus
from ringgroups.orbits import (
    enum_um,
    is_associative,
    is_commutative,
    orbit_bfs,
    orbit_group,
    table_identity,
)
from ringgroups.rings import (
    EvalVariable,
    Excision,
    ExcisionRetraction,
    ExcisionSum,
    IdealSpec,
    Inclusion,
    Modular,
    Polynomial,
    PrimeField,
    RElem,
    parse_ring,
)
from ringgroups.transvect import (
    ProjModule,
    TransvectionSpec,
    elementary_on_extension,
    elementary_report,
    inverse_formula,
    make_transvection,
    transvection_report,
)
from ringgroups.words import GenAtom, atom_matrix

F5, F7 = PrimeField(5), PrimeField(7)
Z8, Z9 = Modular(8), Modular(9)


def _at(M: Mat, value) -> Mat:
    P = M.ring
    return M.map(EvalVariable(P, P.base(value)))


# 1 -------------------------------------------------------------------------------------------


def test_criterion_01_generator_soundness():
    rng = random.Random(101)
    for m in (2, 3):
        n = 2 * m
        Psi, Phi = psi(F7, m), phi(F7, m)
        for _ in range(1000):
            A = atom_matrix(rand_atom(F7, n, "SpSE", rng), n)
            assert A.transpose() * Psi * A == Psi
        for _ in range(1000):
            A = atom_matrix(rand_atom(F7, n, "OrthO", rng), n)
            assert A.transpose() * Phi * A == Phi
            assert A.det().v == 1
    for family, n in (("LinE", 3), ("LinE", 4), ("SpSE", 4), ("SpSE", 6), ("OrthO", 4), ("OrthO", 6)):
        for _ in range(200):
            a = rand_atom(F7, n, family, rng)
            z2 = RElem(F7, rand_elem(F7, rng))
            b = a.with_param(z2)
            both = a.with_param(a.z + z2)
            assert atom_matrix(a, n) * atom_matrix(b, n) == atom_matrix(both, n)


# 2 -------------------------------------------------------------------------------------------


@pytest.mark.parametrize("R", [F5, Z8, Z9], ids=str)
@pytest.mark.parametrize("group,n", [("SL", 3), ("SL", 4), ("Sp", 4)])
def test_criterion_02_local_round_trip(R, group, n):
    rng = random.Random(f"2-{R}-{group}-{n}")
    family = "linear" if group == "SL" else "symplectic"
    for _ in range(200):
        M = rand_word(R, n, FAMILY_OF[group], rng, rng.randint(0, 30)).eval()
        w = reduce_local(M, family)
        assert w.eval() == M
        assert all(a.family == FAMILY_OF[group] for a in w.atoms)


# 3 -------------------------------------------------------------------------------------------


def _um3_size_by_gcd(n: int) -> int:
    """Independent count: a row over ZZ/n is unimodular iff gcd(entries, n) = 1."""
    return sum(1 for a in range(n) for b in range(n) for c in range(n) if math.gcd(math.gcd(a, b), math.gcd(c, n)) == 1)


@pytest.mark.parametrize(
    "ring_text,modulus,frozen",
    [("fp2", 2, 7), ("z4", 4, 56), ("z6", 6, 182)],
)
def test_criterion_03_transitivity_oracle(ring_text, modulus, frozen):
    R = parse_ring(ring_text)
    um = enum_um(3, R)
    assert len(um) == _um3_size_by_gcd(modulus) == frozen
    e1 = (R.one(), R.zero(), R.zero())
    table = orbit_bfs([e1], 3, R, "linear")
    assert table.num_orbits == 1
    assert sorted(table.rows(), key=R.sort_key) == sorted(um, key=R.sort_key)
    assert set(table.rows()) == set(um)


# 4 -------------------------------------------------------------------------------------------


def _poly_pair(P: Polynomial, rng: random.Random, n: int = 3):
    """α(X) = C1 · e_ij(p(X)) · C2 with C1, C2 constant: entries of degree ≤ 2, α(0) ≠ I in general."""
    F = P.base
    inc = Inclusion(P)
    out = []
    for _ in range(2):
        C1 = rand_elementary(F, n, "SL", rng, 4).map(inc)
        C2 = rand_elementary(F, n, "SL", rng, 4).map(inc)
        p = P.canon(tuple(rand_elem(F, rng) for _ in range(3)))
        i, j = rng.sample(range(1, n + 1), 2)
        out.append(C1 * atom_matrix(GenAtom("LinE", i, j, RElem(P, p)), n) * C2)
    return out


def test_criterion_04_commutator_split():
    P = Polynomial(PrimeField(3), "X")
    rng = random.Random(404)
    for _ in range(100):
        a, b = _poly_pair(P, rng)
        assert all(P.degree(x) <= 2 for r in a.rows for x in r)
        cert = commutator_split(a, b)
        assert cert.verified
        factors = cert.proof["factors"]
        # [s, t] followed by the three correction conjugates
        assert len(factors) == 1 + 3
        prod = Mat.identity(P, 3)
        for f in factors:
            prod = prod * f["matrix"]
        assert prod == commutator(a, b)
        for f in factors[1:]:
            assert f["proof"] is not None
            assert f["proof"].eval() == f["matrix"]


# 5 -------------------------------------------------------------------------------------------


@pytest.mark.parametrize("R,gen", [(Z8, 4), (Z9, 3)], ids=["Z8_(4)", "Z9_(3)"])
def test_criterion_05_relative_excision(R, gen):
    rng = random.Random(f"5-{R}")
    ideal = IdealSpec(R, (R.from_int(gen),))
    for _ in range(100):
        sigma = rand_relative(R, 3, ideal, rng, count=rng.randint(0, 6))
        rw = relativize_excision(sigma, ideal)
        assert rw.eval() == sigma
        assert rw.params_in_ideal()
        assert all(ideal.contains(a.z) for _, a in rw.items)

    E = Excision.of(ideal)
    pi, f = ExcisionRetraction(E), ExcisionSum(E)
    one, zero = E.one(), E.zero()
    for _ in range(10_000):
        a, b, c = (rand_elem(E, rng) for _ in range(3))
        assert E.add(E.add(a, b), c) == E.add(a, E.add(b, c))
        assert E.mul(E.mul(a, b), c) == E.mul(a, E.mul(b, c))
        assert E.mul(a, E.add(b, c)) == E.add(E.mul(a, b), E.mul(a, c))
        assert E.add(a, b) == E.add(b, a) and E.mul(a, b) == E.mul(b, a)
        assert E.mul(one, a) == a and E.add(zero, a) == a and E.add(a, E.neg(a)) == zero
        inv = E.inv(a)
        if inv is not None:
            assert E.mul(a, inv) == one
    B = E.base
    for _ in range(10_000):
        a, b = rand_elem(E, rng), rand_elem(E, rng)
        for h in (pi, f):
            assert h.raw(E.add(a, b)) == B.add(h.raw(a), h.raw(b))
            assert h.raw(E.mul(a, b)) == B.mul(h.raw(a), h.raw(b))
    assert pi.raw(one) == B.one() and f.raw(one) == B.one()


# 6 -------------------------------------------------------------------------------------------


def test_criterion_06_homotopy_certificates():
    P = Polynomial(F5, "X")
    X = P.variable("X")
    rng = random.Random(606)
    n = 3
    for _ in range(50):
        # parameters divisible by X, so γ(0) = I
        gamma = rand_word(P, n, "LinE", rng, rng.randint(1, 6), param=lambda g: P.mul(X, rand_elem(P, g, 1))).eval()
        witness = HomotopyWitness.of(gamma)
        beta = rand_elementary(F5, n, "SL", rng, 8)
        cert = homotopy_commutator(witness, beta)
        assert cert.verified
        delta = cert.proof["delta"]
        assert _at(delta, 0).is_identity()
        word = cert.proof["word"]
        assert word is not None and word.ring == F5
        assert word.eval() == commutator(witness.target, beta)


# 7 -------------------------------------------------------------------------------------------


def test_criterion_07_graded_homotopy():
    A = parse_ring("fp2[t]/(t^3)")
    aug = IdealSpec(A, (A.variable("t"),))
    rng = random.Random(707)
    for _ in range(100):
        sigma = rand_relative(A, 3, aug, rng, count=rng.randint(0, 4))
        w = graded_homotopy(sigma, aug)
        assert _at(w.gamma, 0).is_identity()
        assert _at(w.gamma, 1) == sigma
        assert w.certificate().verified


# 8 -------------------------------------------------------------------------------------------


@pytest.mark.parametrize("ring_text", ["fp2[t]/(t^3)", "z6[t]/(t^2)"])
def test_criterion_08_orbit_group(ring_text):
    A = parse_ring(ring_text)
    aug = IdealSpec(A, (A.variable("t"),))
    table = orbit_group(A, aug, 3, exhaustive=True)
    assert all(table.completable.values())
    e = table_identity(table)
    reps = table.representatives
    for v in reps:
        assert table.table[(e, v)] == v
    assert is_commutative(table)
    assert is_associative(table)
    if ring_text.startswith("fp2"):
        assert len(reps) == 1 and table.table == {(e, e): e}


# 9 -------------------------------------------------------------------------------------------


def _rand_so(R, n, rng, length=10):
    u = rand_unit(R, rng)
    return torus_diag(R, n, u) * rand_elementary(R, n, "SO", rng, length)


def test_criterion_09_spinor_and_squares():
    rng = random.Random(909)
    n = 4
    for _ in range(500):
        a, b = _rand_so(F7, n, rng), _rand_so(F7, n, rng)
        assert spinor_norm(a * b) == spinor_norm(a) * spinor_norm(b)
    for u in (x for x in elements(F7) if F7.is_unit(x)):
        D = torus(RElem(F7, u), n)
        assert spinor_norm(D) == SquareClass(F7, u) == SquareClass(F7, F7.mul(4, u))
    for _ in range(100):
        assert spinor_norm(rand_elementary(F7, n, "SO", rng, rng.randint(0, 20))).is_trivial()
    for R, m in ((F7, 4), (Z9, 6)):
        for _ in range(200):
            alpha = _rand_so(R, m, rng)
            u, w = so_decompose_local(alpha)
            assert torus(u, m) * w.eval() == alpha
    for _ in range(100):
        alpha = _rand_so(F7, n, rng)
        assert square_in_eo(alpha).eval() == alpha * alpha
    ideal = IdealSpec(Z9, (3,))
    for _ in range(100):
        alpha = rand_relative(Z9, n, ideal, rng, count=3, family="OrthO")
        u = rand_unit(Z9, rng)
        if (u - 1) % 3 == 0:
            alpha = torus_diag(Z9, n, u) * alpha
        rw = square_in_eo(alpha, ideal)
        assert rw.eval() == alpha * alpha
        assert rw.params_in_ideal()


# 10 ------------------------------------------------------------------------------------------


def _rand_module(R, N, k, rng, form=None, kind=None):
    S = rand_elementary(R, N, "SL", rng, 3 * N)
    return ProjModule.from_basis(S, k, form, kind)


def _comb(R, vecs, coeffs):
    out = [R.zero()] * len(vecs[0])
    for c, v in zip(coeffs, vecs):
        out = [R.add(o, R.mul(c, x)) for o, x in zip(out, v)]
    return tuple(out)


def test_criterion_10_transvections():
    rng = random.Random(1010)
    # linear: det(1 + f_q) = 1 and the inverse 1 - f_q
    done = 0
    while done < 200:
        R = rng.choice([F5, Z9])
        N = rng.randint(2, 6)
        M = _rand_module(R, N, rng.randint(1, N), rng)
        q = _comb(R, M.basis, [rand_elem(R, rng) for _ in M.basis])
        f = M.E.vec_mul([rand_elem(R, rng) for _ in range(N)])
        if M.evaluate(f, q) != R.zero():
            continue
        spec = TransvectionSpec.linear(M, q, f)
        T = make_transvection(spec)
        assert T.det().v == R.one()
        assert (T * inverse_formula(spec)).is_identity()
        done += 1
    # symplectic σ and orthogonal τ on Lagrangian / totally isotropic data
    for kind, form_of, fam in (("symplectic", psi, "SpSE"), ("orthogonal", phi, "OrthO")):
        for _ in range(100):
            R = rng.choice([F5, Z9])
            m = rng.randint(1, 3) if kind == "symplectic" else rng.randint(2, 3)
            k = 2 * m
            M = _rand_module(R, k + rng.randint(0, 2), k, rng, form_of(R, m), kind)
            g = rand_elementary(R, k, "Sp" if kind == "symplectic" else "SO", rng, 6)
            # u, v in the span of the first vector of each hyperbolic pair, moved by an isometry
            iso = [tuple(g.rows[i][j] for i in range(k)) for j in range(0, k, 2)]
            cu = _comb(R, iso, [rand_elem(R, rng) for _ in iso])
            cv = _comb(R, iso, [rand_elem(R, rng) for _ in iso])
            u, v = _comb(R, M.basis, cu), _comb(R, M.basis, cv)
            spec = TransvectionSpec(kind, M, u, v)
            T = make_transvection(spec)
            assert M.is_isometry(T)
            assert (T * inverse_formula(spec)).is_identity()
            assert (inverse_formula(spec) * T).is_identity()
    # elementary pair maps: accepted ones are isometries, non-isotropic q is reported
    reported = 0
    for _ in range(50):
        R = F5
        M = _rand_module(R, 4, 4, rng, phi(R, 2), "orthogonal")
        q = _comb(R, M.basis, [rand_elem(R, rng) for _ in M.basis])
        for which in (1, 2):
            rep = elementary_report(M, "orthogonal-pair", q, which)
            try:
                T = elementary_on_extension(M, "orthogonal-pair", q=q, which=which)
            except IsometryError:
                assert not rep["literal_isometry"]
                reported += 1
                continue
            assert rep["literal_isometry"] and M.extend_hyperbolic().is_isometry(T)
        if M.pair(q, q) != R.zero():
            bad = transvection_report(TransvectionSpec.orthogonal(M, q, q))
            assert bad["violations"]
    assert reported > 0


# 11 ------------------------------------------------------------------------------------------


def test_criterion_11_determinism(tmp_path):
    rng = random.Random(1111)
    a = rand_elementary(F5, 3, "SL", rng, 10)
    so = _rand_so(F7, 4, rng)
    P = Polynomial(PrimeField(3), "X")
    al, be = _poly_pair(P, rng)
    rel = rand_relative(Z9, 3, IdealSpec(Z9, (3,)), rng, 3)
    files = {
        "a.json": a.to_json(),
        "so.json": so.to_json(),
        "cs.json": {"alpha": al.to_json(), "beta": be.to_json()},
        "rel.json": rel.to_json(),
    }
    for name, doc in files.items():
        (tmp_path / name).write_text(json.dumps(doc))
    requests = [
        ["factor", "--group", "sl", "--ring", "fp5", "--in", "a.json"],
        ["factor", "--group", "so", "--ring", "fp7", "--in", "so.json"],
        ["spinor", "--ring", "fp7", "--in", "so.json"],
        ["square-eo", "--ring", "fp7", "--in", "so.json"],
        ["commutator-split", "--ring", "fp3[X]", "--in", "cs.json"],
        ["relativize", "--ring", "z9", "--ideal", "3", "--in", "rel.json"],
        ["orbit", "--ring", "z6", "--n", "3"],
    ]
    for k, req in enumerate(requests):
        req = [x if not x.endswith(".json") else str(tmp_path / x) for x in req]
        outs = []
        for rep in range(2):
            out = tmp_path / f"out{k}_{rep}.json"
            assert cli_main(req + ["--out", str(out)]) == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]
        doc = json.loads(outs[0])
        if "transcript" in doc:
            ok, _, msg = verify_document(doc)
            assert ok, msg
