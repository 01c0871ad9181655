"""Relative factorizations, commutator splitting and homotopy certificates."""
from __future__ import annotations

from dataclasses import dataclass

from ..certificates import Certificate
from ..errors import MembershipError, PreconditionError, RingMismatch
from ..matrices import Mat, commutator, is_member, lift_congruence
from ..rings import (
    EvalVariable,
    Excision,
    ExcisionSum,
    IdealSpec,
    Inclusion,
    Polynomial,
    Retraction,
    SwanWeibelPhi,
)
from ..words import RelWord, relativize, word_map
from .euclid import reduce_euclidean
from .local import reduce_local
from .unimodular import _normalize_family


def _group(family: str) -> str:
    return "SL" if family == "linear" else "Sp"


def _at(M: Mat, value) -> Mat:
    P = M.ring
    return M.map(EvalVariable(P, P.base(value)))


def relativize_excision(sigma_mat: Mat, ideal: IdealSpec, family: str = "linear") -> RelWord:
    """RelWord over (R, I) evaluating to ``sigma_mat`` ∈ S(n, R, I).

    The matrix is lifted to (I, σ - I) over the excision ring R ⊕ I, factored
    there, rewritten against the retraction (r, i) ↦ r and pushed back along
    (r, i) ↦ r + i.
    """
    family = _normalize_family(family)
    R = sigma_mat.ring
    if ideal.ring != R:
        raise RingMismatch("ideal and matrix live over different rings")
    if not R.is_local:
        raise PreconditionError(f"{R} is not local")
    if not ideal.is_proper:
        raise PreconditionError("the ideal must be proper")
    chk = is_member(sigma_mat, _group(family), ideal)
    if not chk:
        raise MembershipError(chk.reason)
    E = Excision.of(ideal)
    lifted = lift_congruence(sigma_mat, ideal)
    word = reduce_local(lifted, family, check=False)
    rel = relativize(word, Retraction.excision(E))
    return word_map(ExcisionSum(E), rel)


def commutator_split(alpha: Mat, beta: Mat, family: str = "linear") -> Certificate:
    """Split [α(X), β(X)] as [s, t] times three conjugates of constant elementary matrices.

    s = α(X)α(0)⁻¹, t = β(X)β(0)⁻¹; the correction factors are
    (tst⁻¹)α(0)(tst⁻¹)⁻¹, (ts)β(0)α(0)⁻¹(ts)⁻¹ and tβ(0)⁻¹t⁻¹.
    """
    family = _normalize_family(family)
    P = alpha.ring
    if not isinstance(P, Polynomial) or beta.ring != P:
        raise PreconditionError("both matrices must live over the same polynomial ring R[X]")
    R = P.base
    if not R.is_local:
        raise PreconditionError(f"{R} is not local")
    for name, m in (("alpha", alpha), ("beta", beta)):
        chk = is_member(m, _group(family))
        if not chk:
            raise MembershipError(f"{name}: {chk.reason}")
    a0, b0 = _at(alpha, 0), _at(beta, 0)
    wa = word_map(Inclusion(P), reduce_local(a0, family))
    wb = word_map(Inclusion(P), reduce_local(b0, family))
    inc = Inclusion(P)
    A0, B0 = a0.map(inc), b0.map(inc)
    s = alpha * A0.inverse()
    t = beta * B0.inverse()
    tinv = t.inverse()
    c = t * s * tinv
    ts = t * s
    unit = IdealSpec(P, (P.one(),))

    def conj_word(g: Mat, w) -> RelWord:
        return RelWord(P, alpha.n, unit, tuple((g, a) for a in w.atoms))

    st = commutator(s, t)
    st_proof = None
    if R.is_field and family == "linear":
        st_proof = reduce_euclidean(st)
    factors = [
        {"matrix": st, "proof": st_proof},
        {"matrix": c * A0 * c.inverse(), "proof": conj_word(c, wa)},
        {"matrix": ts * B0 * A0.inverse() * ts.inverse(), "proof": conj_word(ts, wb + wa.inverse())},
        {"matrix": t * B0.inverse() * tinv, "proof": conj_word(t, wb.inverse())},
    ]
    cert = Certificate(
        "commutator_split",
        {"alpha": alpha, "beta": beta},
        {"factors": factors},
        {"family": family, "group": _group(family)},
    )
    cert.verify()
    return cert


@dataclass(frozen=True)
class HomotopyWitness:
    """γ over R[X] with γ(0) = I and γ(1) = target, both checked on construction."""

    gamma: Mat
    target: Mat

    def __post_init__(self):
        if not isinstance(self.gamma.ring, Polynomial):
            raise PreconditionError("a homotopy lives over a polynomial ring")
        if self.target.ring != self.gamma.ring.base:
            raise RingMismatch("target must live over the coefficient ring of the homotopy")
        if not _at(self.gamma, 0).is_identity():
            raise PreconditionError("homotopy does not start at the identity")
        if _at(self.gamma, 1) != self.target:
            raise PreconditionError("homotopy does not end at the target")

    @staticmethod
    def of(gamma: Mat) -> "HomotopyWitness":
        return HomotopyWitness(gamma, _at(gamma, 1))

    def certificate(self) -> Certificate:
        cert = Certificate("homotopy", {"gamma": self.gamma, "target": self.target}, {})
        cert.verify()
        return cert


def graded_homotopy(sigma_mat: Mat, aug: IdealSpec | None = None, var: str = "T") -> HomotopyWitness:
    """Homotopy from I to σ over a graded quotient A, obtained by scaling degree d by T^d."""
    A = sigma_mat.ring
    phi = SwanWeibelPhi(A, var)
    if aug is not None:
        if aug.ring != A:
            raise RingMismatch("augmentation ideal lives over another ring")
        diff = sigma_mat - Mat.identity(A, sigma_mat.n)
        if not all(aug.contains(x) for r in diff.rows for x in (A.elem(y) for y in r)):
            raise MembershipError("matrix is not congruent to the identity modulo the augmentation ideal")
    gamma = sigma_mat.map(phi)
    if not _at(gamma, 0).is_identity():
        raise MembershipError("σ(0) ≠ I: the matrix is not in the congruence subgroup of the augmentation ideal")
    return HomotopyWitness(gamma, sigma_mat)


def homotopy_commutator(gamma, beta: Mat) -> Certificate:
    """Certificate that [γ(1), β] is elementary, via δ(X) = [γ(X), β].

    Over a field R the Euclidean factorization of δ(X) is specialized at X = 1;
    over other Euclidean or local R, δ(1) is factored directly; otherwise only
    membership is recorded and the certificate is marked non-constructive.
    """
    if isinstance(gamma, Mat):
        gamma = HomotopyWitness.of(gamma)
    g = gamma.gamma
    P = g.ring
    R = P.base
    if beta.ring != R:
        raise RingMismatch("beta must live over the coefficient ring of the homotopy")
    if beta.n != g.n:
        raise PreconditionError("dimension mismatch")
    delta = commutator(g, beta.map(Inclusion(P)))
    d1 = _at(delta, 1)
    word, method = None, "membership-only"
    if R.is_field:
        word = word_map(EvalVariable(P, R(1)), reduce_euclidean(delta))
        method = "euclidean-in-X"
    elif R.is_euclidean:
        word, method = reduce_euclidean(d1), "euclidean"
    elif R.is_local:
        word, method = reduce_local(d1, "linear"), "local"
    cert = Certificate(
        "homotopy_commutator",
        {"gamma": g, "beta": beta},
        {"delta": delta, "word": word},
        {"group": "SL", "method": method, "constructive": word is not None},
    )
    cert.verify()
    return cert
