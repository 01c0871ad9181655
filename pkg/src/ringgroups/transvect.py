"""Transvections of modules given as images of idempotent matrices.

Vectors are ambient columns (tuples of raw ring values); a matrix T acts by
p ↦ T·p and every automorphism built here fixes ker E.  A form on the module
is stored as an ambient Gram matrix G, read on P only: ⟨x, y⟩ = xᵗ·(EᵗGE)·y.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import DimensionMismatch, IsometryError, PreconditionError, UndecidableError
from .matrices import Check, Mat
from .rings import IdealSpec, RElem, Ring

KINDS = ("symplectic", "orthogonal")


def _vec(R: Ring, v: Sequence) -> tuple:
    return tuple(R.coerce(x.v if isinstance(x, RElem) else x) for x in v)


def apply(T: Mat, p: Sequence) -> tuple:
    """T·p for a column vector p."""
    return T.transpose().vec_mul(p)


def _outer(R: Ring, col: Sequence, row: Sequence) -> Mat:
    return Mat(R, [[R.mul(c, r) for r in row] for c in col])




def _field_column_basis(E: Mat) -> list[tuple]:
    """Columns of E forming a basis of its image, by elimination over a field."""
    R = E.ring
    cols = [tuple(r[j] for r in E.rows) for j in range(E.n)]
    echelon: list[tuple[int, list]] = []
    chosen = []
    for c in cols:
        v = list(c)
        for piv, w in echelon:
            if v[piv] != R.zero():
                f = v[piv]
                v = [R.sub(a, R.mul(f, b)) for a, b in zip(v, w)]
        piv = next((k for k, x in enumerate(v) if x != R.zero()), None)
        if piv is None:
            continue
        inv = R.inv(v[piv])
        echelon.append((piv, [R.mul(inv, x) for x in v]))
        chosen.append(c)
    return chosen


def _small_det(R: Ring, rows: list[list]):
    if not rows:
        return R.one()
    return Mat(R, rows).det().v


@dataclass
class ProjModule:
    """P = E·R^N for an idempotent E, with an optional alternating or symmetric form."""

    E: Mat
    gram: Mat | None = None
    kind: str | None = None
    basis: list | None = field(default=None, repr=False)

    def __post_init__(self):
        R = self.E.ring
        if self.E * self.E != self.E:
            raise PreconditionError("E is not idempotent")
        if (self.gram is None) != (self.kind is None):
            raise PreconditionError("a form needs both a Gram matrix and a kind")
        if self.kind is not None:
            if self.kind not in KINDS:
                raise PreconditionError(f"unknown form kind {self.kind!r}")
            if self.gram.ring != R or self.gram.n != self.E.n:
                raise DimensionMismatch("Gram matrix does not match the ambient space")
            G = self.form_matrix
            if self.kind == "orthogonal" and G.transpose() != G:
                raise PreconditionError("the form is not symmetric on P")
            if self.kind == "symplectic":
                if G.transpose() != G.scale(R.from_int(-1)) or any(G.rows[i][i] != R.zero() for i in range(G.n)):
                    raise PreconditionError("the form is not alternating on P")
        if self.basis is not None:
            self.basis = [_vec(R, b) for b in self.basis]
            for b in self.basis:
                if not self.contains(b):
                    raise PreconditionError("basis vector outside the image of E")

    # -- constructors --------------------------------------------------------------------
    @classmethod
    def free(cls, ring: Ring, n: int, gram: Mat | None = None, kind: str | None = None) -> "ProjModule":
        I = Mat.identity(ring, n)
        basis = [tuple(r) for r in I.rows]
        return cls(I, gram, kind, basis)

    @classmethod
    def from_basis(cls, S: Mat, k: int, form: Mat | None = None, kind: str | None = None) -> "ProjModule":
        """Image spanned by the first k columns of an invertible S; ``form`` is k×k in that basis."""
        R = S.ring
        Sinv = S.inverse()
        D = Mat.diag(R, [R.one()] * k + [R.zero()] * (S.n - k))
        E = S * D * Sinv
        basis = [tuple(S.rows[i][j] for i in range(S.n)) for j in range(k)]
        gram = None
        if form is not None:
            if form.n != k:
                raise DimensionMismatch("form must be k×k")
            # G = Lᵗ·form·L where L holds the first k coordinate rows of S⁻¹
            z = R.zero()
            L = Mat(R, [list(Sinv.rows[i]) if i < k else [z] * S.n for i in range(S.n)])
            F = Mat(R, [[form.rows[i][j] if i < k and j < k else z for j in range(S.n)] for i in range(S.n)])
            gram = L.transpose() * F * L
        return cls(E, gram, kind, basis)

    # -- basic structure -----------------------------------------------------------------
    @property
    def ring(self) -> Ring:
        return self.E.ring

    @property
    def N(self) -> int:
        return self.E.n

    @property
    def form_matrix(self) -> Mat:
        """EᵗGE: the form read on P and extended by zero on ker E."""
        if self.gram is None:
            raise PreconditionError("module carries no form")
        return self.E.transpose() * self.gram * self.E

    def contains(self, p: Sequence) -> bool:
        p = _vec(self.ring, p)
        return apply(self.E, p) == p

    def is_functional(self, f: Sequence) -> bool:
        f = _vec(self.ring, f)
        return self.E.vec_mul(f) == f

    def pair(self, x: Sequence, y: Sequence):
        R = self.ring
        return _dot(R, self.form_matrix.vec_mul(_vec(R, x)), _vec(R, y))

    def evaluate(self, f: Sequence, p: Sequence):
        R = self.ring
        return _dot(R, _vec(R, f), _vec(R, p))

    def order_ideal(self, m: Sequence) -> IdealSpec:
        """O(m) = {f(m) : f ∈ P*}.  Functionals on a summand extend to R^N, so this
        is the ideal generated by the ambient coordinates of m."""
        return IdealSpec(self.ring, _vec(self.ring, m))

    def is_unimodular(self, m: Sequence) -> bool:
        if not self.contains(m):
            raise PreconditionError("element is not in the module")
        return self.order_ideal(m).contains(RElem(self.ring, self.ring.one()))

    def functional_is_unimodular(self, f: Sequence) -> bool:
        """f(P) is the ideal generated by the entries of f, since f = f·E."""
        if not self.is_functional(f):
            raise PreconditionError("row is not a functional on the module")
        return IdealSpec(self.ring, _vec(self.ring, f)).contains(RElem(self.ring, self.ring.one()))

    def rank(self) -> int:
        return len(self._basis())

    def _basis(self) -> list:
        if self.basis is not None:
            return self.basis
        R = self.ring
        if R.is_field:
            self.basis = _field_column_basis(self.E)
            return self.basis
        raise UndecidableError("no basis known for this module; build it with from_basis or free")

    def is_nondegenerate(self) -> Check:
        """The induced map P → P* is an isomorphism.

        With a basis B (columns), this is det(Bᵗ·G·B) being a unit.  For a
        symmetric idempotent the basis-free test det(EGE + I - E) is used.
        """
        R = self.ring
        G = self.form_matrix
        if self.basis is None and self.E.transpose() == self.E and not R.is_field:
            M = G + Mat.identity(R, self.N) - self.E
            d = M.det().v
            ok = R.is_unit(d)
            return Check(ok, "" if ok else f"det(EGE + I - E) = {R.fmt(d)} is not a unit")
        B = self._basis()
        gram = [[self.pair(b, c) for c in B] for b in B]
        d = _small_det(R, gram)
        ok = R.is_unit(d)
        return Check(ok, "" if ok else f"Gram determinant {R.fmt(d)} on the image is not a unit")

    def is_isometry(self, T: Mat) -> Check:
        G = self.form_matrix
        if T.transpose() * G * T != G:
            return Check(False, "Tᵗ·G·T ≠ G on the module")
        return Check(True, "")

    # -- extensions ----------------------------------------------------------------------
    def extend_linear(self) -> "ProjModule":
        """P ⊕ R (no form): the new coordinate is last."""
        R = self.ring
        E = self.E.perp(Mat.identity(R, 1))
        basis = None
        if self.basis is not None:
            basis = [b + (R.zero(),) for b in self.basis] + [tuple([R.zero()] * self.N + [R.one()])]
        return ProjModule(E, None, None, basis)

    def extend_hyperbolic(self) -> "ProjModule":
        """P ⊥ R² with coordinates (p, b, a) and the hyperbolic plane on (b, a):
        ⟨(b,a),(b',a')⟩ = b a' - a b' (symplectic) or b a' + a b' (orthogonal)."""
        R = self.ring
        if self.kind is None:
            raise PreconditionError("hyperbolic extension needs a form")
        s = R.from_int(-1) if self.kind == "symplectic" else R.one()
        H = Mat(R, [[R.zero(), R.one()], [s, R.zero()]])
        E = self.E.perp(Mat.identity(R, 2))
        G = self.form_matrix.perp(H)
        basis = None
        if self.basis is not None:
            z = R.zero()
            basis = [b + (z, z) for b in self.basis]
            basis += [tuple([z] * self.N + [R.one(), z]), tuple([z] * self.N + [z, R.one()])]
        return ProjModule(E, G, self.kind, basis)

    # -- serialization -------------------------------------------------------------------
    def to_json(self) -> dict:
        R = self.ring
        d = {
            "ring": R.descriptor(),
            "N": self.N,
            "idempotent": [[R.to_json_value(x) for x in r] for r in self.E.rows],
        }
        if self.gram is not None:
            d["gram"] = [[R.to_json_value(x) for x in r] for r in self.gram.rows]
            d["kind"] = self.kind
        return d

    @classmethod
    def from_json(cls, d: dict, ring: Ring | None = None) -> "ProjModule":
        from .rings import ring_from_json

        R = ring or ring_from_json(d["ring"])
        E = Mat(R, [[R.from_json_value(x) for x in r] for r in d["idempotent"]])
        if "N" in d and int(d["N"]) != E.n:
            raise DimensionMismatch(f"declared N={d['N']} but E is {E.n}×{E.n}")
        gram = None
        if d.get("gram") is not None:
            gram = Mat(R, [[R.from_json_value(x) for x in r] for r in d["gram"]])
        return cls(E, gram, d.get("kind", "symplectic" if gram is not None else None))


def _dot(R: Ring, x: Sequence, y: Sequence):
    acc = R.zero()
    for a, b in zip(x, y):
        acc = R.add(acc, R.mul(a, b))
    return acc


# -- transvections ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransvectionSpec:
    """family "linear" uses (q, f); "symplectic"/"orthogonal" use (u, v)."""

    family: str
    module: ProjModule
    first: tuple
    second: tuple

    @staticmethod
    def linear(module: ProjModule, q, f) -> "TransvectionSpec":
        R = module.ring
        return TransvectionSpec("linear", module, _vec(R, q), _vec(R, f))

    @staticmethod
    def symplectic(module: ProjModule, u, v) -> "TransvectionSpec":
        R = module.ring
        return TransvectionSpec("symplectic", module, _vec(R, u), _vec(R, v))

    @staticmethod
    def orthogonal(module: ProjModule, u, v) -> "TransvectionSpec":
        R = module.ring
        return TransvectionSpec("orthogonal", module, _vec(R, u), _vec(R, v))

    def violations(self) -> list[str]:
        """Broken defining conditions, as human-readable strings."""
        M, R = self.module, self.module.ring
        out = []
        if self.family == "linear":
            q, f = self.first, self.second
            if not M.contains(q):
                out.append("q is not in the module")
            if not M.is_functional(f):
                out.append("f is not a functional on the module")
            if M.evaluate(f, q) != R.zero():
                out.append(f"f(q) = {R.fmt(M.evaluate(f, q))} ≠ 0")
            return out
        if M.kind != self.family:
            return [f"module form is {M.kind}, not {self.family}"]
        u, v = self.first, self.second
        for name, x in (("u", u), ("v", v)):
            if not M.contains(x):
                out.append(f"{name} is not in the module")
        if M.pair(u, v) != R.zero():
            out.append(f"⟨u,v⟩ = {R.fmt(M.pair(u, v))} ≠ 0")
        if self.family == "orthogonal":
            for name, x in (("u", u), ("v", v)):
                if M.pair(x, x) != R.zero():
                    out.append(f"⟨{name},{name}⟩ = {R.fmt(M.pair(x, x))} ≠ 0 (not isotropic)")
        return out

    def is_transvection(self) -> bool:
        """The unimodularity side condition: q or v unimodular, or the functional unimodular."""
        M = self.module
        if self.family == "linear":
            return M.is_unimodular(self.first) or M.functional_is_unimodular(self.second)
        func = M.form_matrix.vec_mul(self.first)  # p ↦ ⟨u, p⟩
        return M.is_unimodular(self.second) or M.functional_is_unimodular(func)


def _nilpotent_part(spec: TransvectionSpec) -> Mat:
    M, R = spec.module, spec.module.ring
    if spec.family == "linear":
        # p ↦ f(p) q
        return _outer(R, spec.first, spec.second)
    G = M.form_matrix
    u, v = spec.first, spec.second
    uG, vG = G.vec_mul(u), G.vec_mul(v)  # rows p ↦ ⟨u,p⟩, ⟨v,p⟩
    if spec.family == "symplectic":
        # ⟨u,p⟩v + ⟨v,p⟩u + ⟨u,p⟩u
        return _outer(R, v, uG) + _outer(R, u, vG) + _outer(R, u, uG)
    if spec.family == "orthogonal":
        # -⟨u,p⟩v + ⟨v,p⟩u
        return _outer(R, u, vG) - _outer(R, v, uG)
    raise PreconditionError(f"unknown transvection family {spec.family!r}")


def transvection_matrix(spec: TransvectionSpec) -> Mat:
    """The literal formula, with no checks at all."""
    R = spec.module.ring
    return Mat.identity(R, spec.module.N) + _nilpotent_part(spec)


def inverse_formula(spec: TransvectionSpec) -> Mat:
    """The stated inverse: 1 - f_q, and the sign-flipped σ and τ formulas."""
    R = spec.module.ring
    return Mat.identity(R, spec.module.N) - _nilpotent_part(spec)


def make_transvection(spec: TransvectionSpec, require_unimodular: bool = False) -> Mat:
    """Ambient matrix of the transvection; raises on broken conditions or a failed isometry check."""
    bad = spec.violations()
    if bad:
        raise PreconditionError("; ".join(bad))
    if require_unimodular and not spec.is_transvection():
        raise PreconditionError("neither the vector nor the functional is unimodular")
    T = transvection_matrix(spec)
    if spec.family != "linear":
        chk = spec.module.is_isometry(T)
        if not chk:
            raise IsometryError(f"{spec.family} transvection is not an isometry: {chk.reason}")
    return T


def transvection_report(spec: TransvectionSpec) -> dict:
    """Evaluate the literal formula against the defining conditions and the isometry
    predicate, without raising on mathematical failures."""
    T = transvection_matrix(spec)
    Tinv = inverse_formula(spec)
    M = spec.module
    report = {
        "family": spec.family,
        "violations": spec.violations(),
        "inverse_ok": (T * Tinv).is_identity() and (Tinv * T).is_identity(),
        "det": M.ring.fmt(T.det().v),
    }
    if spec.family != "linear" and M.kind == spec.family:
        report["isometry_ok"] = bool(M.is_isometry(T))
    report["mismatch"] = not report["violations"] and report.get("isometry_ok", True) is False
    return report


# -- elementary transvections on extensions -------------------------------------------------

EXT_KINDS = ("dser-linear", "symplectic-pair", "orthogonal-pair")


def extension_module(module: ProjModule, kind: str) -> ProjModule:
    if kind == "dser-linear":
        return module.extend_linear()
    if kind in ("symplectic-pair", "orthogonal-pair"):
        want = kind.split("-")[0]
        if module.kind != want:
            raise PreconditionError(f"{kind} needs a {want} module, got {module.kind}")
        return module.extend_hyperbolic()
    raise PreconditionError(f"unknown extension kind {kind!r}")


def elementary_literal(module: ProjModule, kind: str, q=None, f=None, which: int = 1) -> Mat:
    """The literal ambient matrix of an elementary transvection on the extension, unchecked.

    dser-linear:      1: (p, a) ↦ (p + a q, a)            2: (p, a) ↦ (p, a + f(p))
    symplectic-pair:  1: (p,b,a) ↦ (p + a q, b - ⟨p,q⟩ + a, a)
                      2: (p,b,a) ↦ (p + b q, b, a - b + ⟨p,q⟩)
    orthogonal-pair:  1: (p,b,a) ↦ (p - a q, b + ⟨p,q⟩, a)
                      2: (p,b,a) ↦ (p - b q, b, a - ⟨p,q⟩)
    """
    R, N = module.ring, module.N
    if which not in (1, 2):
        raise PreconditionError("which must be 1 or 2")
    one = R.one()
    if kind == "dser-linear":
        T = [list(r) for r in Mat.identity(R, N + 1).rows]
        if which == 1:
            q = _vec(R, q)
            for i in range(N):
                T[i][N] = R.add(T[i][N], q[i])
        else:
            f = _vec(R, f)
            for j in range(N):
                T[N][j] = R.add(T[N][j], f[j])
        return Mat(R, T)
    q = _vec(R, q)
    Gq = tuple(apply(module.form_matrix, q))  # coefficients of p ↦ ⟨p, q⟩
    b, a = N, N + 1
    T = [list(r) for r in Mat.identity(R, N + 2).rows]
    neg = lambda xs: [R.neg(x) for x in xs]

    def add_col(col, vec):
        for i in range(N):
            T[i][col] = R.add(T[i][col], vec[i])

    def add_row(row, vec):
        for j in range(N):
            T[row][j] = R.add(T[row][j], vec[j])

    if kind == "symplectic-pair":
        if which == 1:
            add_col(a, q)
            add_row(b, neg(Gq))
            T[b][a] = R.add(T[b][a], one)
        else:
            add_col(b, q)
            add_row(a, Gq)
            T[a][b] = R.sub(T[a][b], one)
    elif kind == "orthogonal-pair":
        if which == 1:
            add_col(a, neg(q))
            add_row(b, Gq)
        else:
            add_col(b, neg(q))
            add_row(a, neg(Gq))
    else:
        raise PreconditionError(f"unknown extension kind {kind!r}")
    return Mat(R, T)


def elementary_on_extension(module: ProjModule, kind: str, q=None, f=None, which: int = 1) -> Mat:
    """Elementary transvection of P ⊕ R or P ⊥ R², rejected with a diagnostic when it
    fails the determinant or isometry predicate."""
    R = module.ring
    ext = extension_module(module, kind)
    if kind == "dser-linear":
        if which == 1 and (q is None or not module.contains(q)):
            raise PreconditionError("x must lie in the module")
        if which == 2 and (f is None or not module.is_functional(f)):
            raise PreconditionError("f must be a functional on the module")
    else:
        if q is None or not module.contains(q):
            raise PreconditionError("q must lie in the module")
    T = elementary_literal(module, kind, q, f, which)
    if kind == "dser-linear":
        if T.det().v != R.one():
            raise IsometryError("elementary linear transvection does not have determinant 1")
        return T
    chk = ext.is_isometry(T)
    if not chk:
        qq = R.fmt(module.pair(q, q))
        raise IsometryError(
            f"{kind} map {which} fails the isometry check for this q (⟨q,q⟩ = {qq}): {chk.reason}"
        )
    return T


def elementary_as_transvection(module: ProjModule, kind: str, q, which: int = 1) -> TransvectionSpec:
    """The σ/τ data on P ⊥ R² that should reproduce an elementary pair map:
    σ_(e_b, q), σ_(e_a, -q) in the symplectic case and τ_(e_b, q), τ_(e_a, q)
    in the orthogonal case."""
    R, N = module.ring, module.N
    ext = extension_module(module, kind)
    z = R.zero()
    qe = _vec(R, q) + (z, z)
    eb = tuple([z] * N + [R.one(), z])
    ea = tuple([z] * N + [z, R.one()])
    if kind == "symplectic-pair":
        if which == 1:
            return TransvectionSpec("symplectic", ext, eb, qe)
        return TransvectionSpec("symplectic", ext, ea, tuple(R.neg(x) for x in qe))
    if kind == "orthogonal-pair":
        return TransvectionSpec("orthogonal", ext, eb if which == 1 else ea, qe)
    raise PreconditionError("only the pair kinds have a σ/τ counterpart")


def elementary_report(module: ProjModule, kind: str, q, which: int = 1) -> dict:
    """Compare the literal elementary map with its σ/τ counterpart and with the isometry predicate."""
    R = module.ring
    ext = extension_module(module, kind)
    T = elementary_literal(module, kind, q, None, which)
    spec = elementary_as_transvection(module, kind, q, which)
    S = transvection_matrix(spec)
    return {
        "kind": kind,
        "which": which,
        "q_isotropic": module.pair(q, q) == R.zero(),
        "literal_isometry": bool(ext.is_isometry(T)),
        "transvection_conditions": spec.violations(),
        "transvection_isometry": bool(ext.is_isometry(S)),
        "agrees_with_transvection": T == S,
    }
