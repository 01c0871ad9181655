"""Self-contained, re-checkable claims: a subject, a proof object and a transcript hash.

Verification only ever recomputes exact products; nothing is trusted from the
file except the data being checked.
"""
from __future__ import annotations

import hashlib
import json
from typing import Any, Callable

from .errors import ParseError, RingGroupsError
from .matrices import Mat, commutator, is_member, torus
from .rings import EvalVariable, IdealSpec, Inclusion, Polynomial, RElem, ring_from_json
from .words import RelWord, Word, word_from_json


class Row(tuple):
    """A row vector of ring elements (used for orbit claims)."""

    @property
    def ring(self):
        return self[0].ring


# -- value encoding -----------------------------------------------------------------------


def encode(obj: Any) -> Any:
    if isinstance(obj, Mat):
        return {"type": "Mat", **obj.to_json()}
    if isinstance(obj, (Word, RelWord)):
        return obj.to_json()
    if isinstance(obj, Row):
        return {"type": "Row", "ring": obj.ring.descriptor(), "values": [x.to_json() for x in obj]}
    if isinstance(obj, RElem):
        return {"type": "Elem", "ring": obj.ring.descriptor(), "value": obj.to_json()}
    if isinstance(obj, dict):
        return {k: encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    return obj


def decode(obj: Any) -> Any:
    if isinstance(obj, dict):
        t = obj.get("type")
        if t == "Mat":
            return Mat.from_json(obj)
        if t in ("Word", "RelWord"):
            return word_from_json(obj)
        if t == "Row":
            R = ring_from_json(obj["ring"])
            return Row(RElem(R, R.from_json_value(v)) for v in obj["values"])
        if t == "Elem":
            R = ring_from_json(obj["ring"])
            return RElem(R, R.from_json_value(obj["value"]))
        return {k: decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [decode(v) for v in obj]
    return obj


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


# -- certificate --------------------------------------------------------------------------

Step = tuple  # (name, ok, detail)


class Certificate:
    def __init__(self, kind: str, subjects: dict, proof: dict, meta: dict | None = None):
        if kind not in CHECKERS:
            raise ValueError(f"unknown certificate kind {kind!r}")
        self.kind = kind
        self.subjects = dict(subjects)
        self.proof = dict(proof)
        self.meta = dict(meta or {})
        self.steps: list[Step] = []
        self._verified = False

    @property
    def verified(self) -> bool:
        return self._verified

    def verify(self) -> bool:
        try:
            steps = CHECKERS[self.kind](self)
        except RingGroupsError as exc:
            steps = [("well_formed", False, str(exc))]
        self.steps = [(name, bool(ok), detail) for name, ok, detail in steps]
        self._verified = bool(self.steps) and all(ok for _, ok, _ in self.steps)
        return self._verified

    def body(self) -> dict:
        return {
            "kind": self.kind,
            "subjects": encode(self.subjects),
            "proof": encode(self.proof),
            "meta": self.meta,
            "steps": [{"check": n, "ok": ok, "detail": d} for n, ok, d in self.steps],
        }

    def transcript_hash(self) -> str:
        return hashlib.sha256(canonical_json(self.body()).encode()).hexdigest()

    def to_json(self) -> dict:
        if not self.steps:
            self.verify()
        out = self.body()
        out["verified"] = self._verified
        out["transcript"] = self.transcript_hash()
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"

    @staticmethod
    def from_json(d: dict) -> "Certificate":
        try:
            cert = Certificate(d["kind"], decode(d["subjects"]), decode(d["proof"]), d.get("meta", {}))
        except KeyError as exc:
            raise ParseError(f"certificate is missing {exc}") from None
        return cert

    def __repr__(self):
        return f"Certificate({self.kind}, verified={self._verified})"


def verify_document(d: dict) -> tuple[bool, Certificate, str]:
    """Re-check a serialized certificate: recompute every step and the transcript hash."""
    cert = Certificate.from_json(d)
    ok = cert.verify()
    if not ok:
        failed = [n for n, good, _ in cert.steps if not good]
        return False, cert, "failed checks: " + ", ".join(failed)
    stored = d.get("transcript")
    if stored != cert.transcript_hash():
        return False, cert, "transcript hash mismatch"
    return True, cert, "ok"


# -- checkers -----------------------------------------------------------------------------


def _ideal(meta: dict, ring) -> IdealSpec | None:
    gens = meta.get("ideal")
    if gens is None:
        return None
    return IdealSpec(ring, tuple(ring.from_json_value(g) for g in gens))


def _word_steps(word, target: Mat, family: str | None) -> list[Step]:
    steps = [("evaluation", word.eval() == target, "eval(proof) equals the subject")]
    if isinstance(word, RelWord):
        steps.append(("ideal_membership", word.params_in_ideal(), f"parameters in {word.ideal}"))
        atoms = [a for _, a in word.items]
    else:
        atoms = list(word.atoms)
    if family:
        steps.append(("atom_family", all(a.family == family for a in atoms), f"all atoms are {family}"))
    return steps


def _check_factorization(c: Certificate) -> list[Step]:
    target = c.subjects["target"]
    steps = _word_steps(c.proof["word"], target, c.meta.get("family"))
    group = c.meta.get("group")
    if group:
        rel = _ideal(c.meta, target.ring)
        chk = is_member(target, group, rel)
        steps.append(("membership", chk.ok, chk.reason))
    return steps


def _check_square(c: Certificate) -> list[Step]:
    alpha = c.subjects["alpha"]
    steps = _word_steps(c.proof["word"], alpha * alpha, "OrthO")
    rel = _ideal(c.meta, alpha.ring)
    chk = is_member(alpha, "SO", rel)
    steps.append(("membership", chk.ok, chk.reason))
    return steps


def _check_orbit(c: Certificate) -> list[Step]:
    u, v = c.subjects["u"], c.subjects["v"]
    w = c.proof["word"]
    image = w.act(tuple(x.v for x in u))
    return [("orbit_equality", image == tuple(x.v for x in v), "u · eval(w) equals v")]


def _check_so_decomposition(c: Certificate) -> list[Step]:
    from .factorize.orthogonal import SquareClass

    target = c.subjects["target"]
    u, w = c.proof["u"], c.proof["word"]
    steps = [
        ("decomposition", torus(u, target.n) * w.eval() == target, "D(u) · eval(w) equals the subject"),
        ("atom_family", all(a.family == "OrthO" for a in w.atoms), "all atoms are OrthO"),
    ]
    chk = is_member(target, "SO")
    steps.append(("membership", chk.ok, chk.reason))
    if "square_class" in c.proof:
        sc = SquareClass(u.ring, u.v)
        steps.append(("square_class", sc == SquareClass(u.ring, c.proof["square_class"].v), "class of u matches"))
    return steps


def _at(M: Mat, value: int) -> Mat:
    P = M.ring
    return M.map(EvalVariable(P, P.base(value)))


def _lift(M: Mat, P: Polynomial) -> Mat:
    return M.map(Inclusion(P))


def _check_commutator_split(c: Certificate) -> list[Step]:
    a, b = c.subjects["alpha"], c.subjects["beta"]
    P = a.ring
    factors = c.proof["factors"]
    a0, b0 = _lift(_at(a, 0), P), _lift(_at(b, 0), P)
    s = a * a0.inverse()
    t = b * b0.inverse()
    ts = t * s
    conj = t * s * t.inverse()
    expected = [
        commutator(s, t),
        conj * a0 * conj.inverse(),
        ts * b0 * a0.inverse() * ts.inverse(),
        t * b0.inverse() * t.inverse(),
    ]
    mats = [f["matrix"] for f in factors]
    prod = Mat.identity(P, a.n)
    for m in mats:
        prod = prod * m
    steps = [
        ("factor_count", len(mats) == len(expected), f"{len(mats)} factors"),
        ("product", prod == commutator(a, b), "ordered product equals [alpha, beta]"),
    ]
    for k, (m, e) in enumerate(zip(mats, expected)):
        steps.append((f"factor_{k}_formula", m == e, "factor matches its defining expression"))
    for k, f in enumerate(factors):
        pf = f.get("proof")
        if pf is None:
            if k > 0:
                steps.append((f"factor_{k}_proof", False, "correction factor lacks a proof"))
            continue
        steps.append((f"factor_{k}_proof", pf.eval() == f["matrix"], "proof evaluates to the factor"))
    return steps


def _check_homotopy(c: Certificate) -> list[Step]:
    gamma, target = c.subjects["gamma"], c.subjects["target"]
    return [
        ("at_zero", _at(gamma, 0).is_identity(), "gamma(0) = I"),
        ("at_one", _at(gamma, 1) == target, "gamma(1) = target"),
    ]


def _check_homotopy_commutator(c: Certificate) -> list[Step]:
    gamma, beta = c.subjects["gamma"], c.subjects["beta"]
    P = gamma.ring
    delta = c.proof["delta"]
    steps = [
        ("gamma_at_zero", _at(gamma, 0).is_identity(), "gamma(0) = I"),
        ("delta_formula", delta == commutator(gamma, _lift(beta, P)), "delta = [gamma, beta]"),
        ("delta_at_zero", _at(delta, 0).is_identity(), "delta(0) = I"),
    ]
    d1 = _at(delta, 1)
    w = c.proof.get("word")
    if w is not None:
        steps.append(("word_evaluation", w.eval() == d1, "eval(word) = delta(1)"))
        steps.append(("atom_family", all(a.family == "LinE" for a in w.atoms), "all atoms are LinE"))
    else:
        chk = is_member(d1, c.meta.get("group", "SL"))
        steps.append(("membership_only", chk.ok, "non-constructive: delta(1) is checked for membership only"))
    return steps


CHECKERS: dict[str, Callable[[Certificate], list[Step]]] = {
    "factorization": _check_factorization,
    "square": _check_square,
    "orbit_equality": _check_orbit,
    "so_decomposition": _check_so_decomposition,
    "commutator_split": _check_commutator_split,
    "homotopy": _check_homotopy,
    "homotopy_commutator": _check_homotopy_commutator,
}
