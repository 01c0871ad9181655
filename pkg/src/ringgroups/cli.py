"""Command line: ``ringgroups <subcommand> [flags]``.

Exit codes: 0 the claim holds (certificate produced and verified), 1 the claim
fails (bad certificate, matrix outside the group), 2 bad input or flags.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .certificates import Certificate, verify_document
from .errors import MembershipError, ParseError, RingGroupsError
from .matrices import Mat, is_member
from .rings import IdealSpec, Polynomial, RElem, Ring, ideal_from_json, parse_ring, ring_from_json

OK, FAIL, USAGE = 0, 1, 2

GROUPS = {
    "sl": ("linear", "SL", "LinE"),
    "sp": ("symplectic", "Sp", "SpSE"),
    "so": ("orthogonal", "SO", "OrthO"),
}


class UsageError(Exception):
    pass


class ClaimFailed(Exception):
    pass


# -- input helpers ---------------------------------------------------------------------------


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: bad JSON ({exc.msg} at line {exc.lineno})") from None


def _ring_arg(text: str | None) -> Ring | None:
    return None if text is None else parse_ring(text)


def _mat(obj, ring: Ring | None) -> Mat:
    """A matrix from {"ring", "rows"}, {"rows"} or a bare list of rows."""
    if isinstance(obj, dict) and obj.get("type") not in (None, "Mat"):
        raise ParseError(f"expected a matrix, got {obj.get('type')!r}")
    rows = obj.get("rows") if isinstance(obj, dict) else obj
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ParseError("a matrix needs a list of rows")
    file_ring = ring_from_json(obj["ring"]) if isinstance(obj, dict) and "ring" in obj else None
    if file_ring is not None and ring is not None and file_ring != ring:
        raise UsageError(f"--ring {ring} disagrees with the file's ring {file_ring}")
    R = ring or file_ring
    if R is None:
        raise UsageError("no ring given: pass --ring or put a ring descriptor in the file")
    M = Mat(R, [[R.from_json_value(x) for x in r] for r in rows])
    if isinstance(obj, dict) and "n" in obj and int(obj["n"]) != M.n:
        raise ParseError(f"declared n={obj['n']} but {M.n} rows given")
    return M


def _ideal(ring: Ring, text: str | None) -> IdealSpec | None:
    if text is None:
        return None
    text = text.strip()
    if text.startswith("["):
        return ideal_from_json(ring, json.loads(text))
    return IdealSpec(ring, tuple(ring.coerce(g) for g in text.split(",") if g.strip()))


def _group(name: str | None, default: str = "sl") -> tuple[str, str, str]:
    key = (name or default).lower()
    if key not in GROUPS:
        raise UsageError(f"unknown group {name!r}; choose from {', '.join(GROUPS)}")
    return GROUPS[key]


def _check_shape(M: Mat, group: str) -> None:
    if group == "SO" and (M.n < 4 or M.n % 2):
        raise UsageError("orthogonal groups need even n ≥ 4")
    if group == "Sp" and (M.n < 2 or M.n % 2):
        raise UsageError("symplectic groups need even n")
    if M.n < 2:
        raise UsageError("matrices must be at least 2×2")


def _require(M: Mat, group: str, rel: IdealSpec | None = None) -> None:
    chk = is_member(M, group, rel)
    if not chk:
        raise MembershipError(chk.reason)


# -- subcommands -----------------------------------------------------------------------------
# each returns (exit code, JSON-able document)


def cmd_factor(args, path):
    from .factorize import reduce_euclidean, reduce_local, relativize_excision, so_decompose_local

    ring = _ring_arg(args.ring)
    M = _mat(_load_json(path), ring)
    family, group, atoms = _group(args.group)
    _check_shape(M, group)
    rel = _ideal(M.ring, args.ideal)
    _require(M, group, rel)
    R = M.ring
    if group == "SO":
        if rel is not None:
            raise UsageError("relative orthogonal factorization is not supported; use square-eo")
        u, w = so_decompose_local(M, check=False)
        from .factorize import SquareClass

        sc = SquareClass(R, u.v)
        cert = Certificate(
            "so_decomposition",
            {"target": M},
            {"u": u, "word": w, "square_class": RElem(R, sc.canonical())},
            {"group": "SO", "family": atoms},
        )
    else:
        if rel is not None:
            word, method = relativize_excision(M, rel, family), "excision"
        elif R.is_local or R.is_finite:
            word, method = reduce_local(M, family, check=False), "local"
        elif R.is_euclidean and family == "linear":
            word, method = reduce_euclidean(M), "euclidean"
        else:
            raise UsageError(f"no factorization algorithm for {group} over {R}")
        meta = {"family": atoms, "group": group, "method": method}
        if rel is not None:
            meta["ideal"] = [R.to_json_value(g) for g in rel.gens]
        cert = Certificate("factorization", {"target": M}, {"word": word}, meta)
    return _finish(cert)


def _finish(cert: Certificate):
    ok = cert.verify()
    return (OK if ok else FAIL), cert.to_json()


def cmd_verify(args, path):
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise ParseError("a certificate is a JSON object")
    try:
        ok, cert, msg = verify_document(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed certificate: {exc}") from None
    report = {
        "kind": cert.kind,
        "verified": ok,
        "message": msg,
        "steps": [{"check": n, "ok": good, "detail": d} for n, good, d in cert.steps],
    }
    return (OK if ok else FAIL), report


def cmd_orbit(args, path):
    from .orbits import enum_um, inverses, orbit_bfs, orbit_group, table_identity

    ring = _ring_arg(args.ring)
    if ring is None:
        raise UsageError("orbit needs --ring")
    if args.n is None:
        raise UsageError("orbit needs --n")
    family, _, _ = _group(args.group)
    rel = _ideal(ring, args.ideal)
    if args.table:
        if rel is None:
            raise UsageError("--table needs --ideal (the relative rows ≡ e1 mod I)")
        T = orbit_group(ring, rel, args.n)
        doc = T.to_json()
        doc["identity"] = T.fmt_row(table_identity(T))
        doc["inverses"] = [
            {"orbit": T.fmt_row(a), "inverse": None if b is None else T.fmt_row(b)}
            for a, b in sorted(inverses(T).items())
        ]
        return OK, doc
    if path is not None:
        rows_in = _load_json(path)
        rows = [tuple(ring.from_json_value(x) for x in r) for r in rows_in]
    else:
        rows = enum_um(args.n, ring, rel=rel)
    T = orbit_bfs(rows, args.n, ring, family, rel=rel)
    return OK, T.to_json()


def cmd_spinor(args, path):
    from .factorize import SquareClass, so_decompose_local, spinor_norm

    M = _mat(_load_json(path), _ring_arg(args.ring))
    _check_shape(M, "SO")
    sn = spinor_norm(M)
    R = M.ring
    doc = {
        "ring": R.descriptor(),
        "n": M.n,
        "det": R.to_json_value(M.det().v),
        "spinor_norm": R.to_json_value(sn.canonical()),
        "trivial": sn.is_trivial(),
    }
    if M.det().v == R.one():
        u, w = so_decompose_local(M, check=False)
        cert = Certificate(
            "so_decomposition",
            {"target": M},
            {"u": u, "word": w, "square_class": RElem(R, SquareClass(R, u.v).canonical())},
            {"group": "SO", "family": "OrthO"},
        )
        code, doc["certificate"] = _finish(cert)
        return code, doc
    return OK, doc


def cmd_commutator_split(args, path):
    from .factorize import commutator_split

    ring = _ring_arg(args.ring)
    doc = _load_json(path)
    if not isinstance(doc, dict) or "alpha" not in doc or "beta" not in doc:
        raise ParseError("commutator-split input needs 'alpha' and 'beta'")
    a, b = _mat(doc["alpha"], ring), _mat(doc["beta"], ring)
    if not isinstance(a.ring, Polynomial):
        raise UsageError("commutator-split needs matrices over a polynomial ring R[X]")
    family, group, _ = _group(args.group)
    if group == "SO":
        raise UsageError("commutator-split supports sl and sp")
    _check_shape(a, group)
    cert = commutator_split(a, b, family)
    return (OK if cert.verified else FAIL), cert.to_json()


def cmd_relativize(args, path):
    if args.ideal is None:
        raise UsageError("relativize needs --ideal")
    return cmd_factor(args, path)


def cmd_square_eo(args, path):
    from .factorize import square_in_eo

    M = _mat(_load_json(path), _ring_arg(args.ring))
    _check_shape(M, "SO")
    rel = _ideal(M.ring, args.ideal)
    word = square_in_eo(M, rel)
    meta = {"group": "SO"}
    if rel is not None:
        meta["ideal"] = [M.ring.to_json_value(g) for g in rel.gens]
    return _finish(Certificate("square", {"alpha": M}, {"word": word}, meta))


def cmd_homotopy(args, path):
    from .factorize import HomotopyWitness, graded_homotopy, homotopy_commutator

    ring = _ring_arg(args.ring)
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise ParseError("homotopy input is a JSON object")
    if "sigma" in doc:
        sigma = _mat(doc["sigma"], ring)
        aug = _ideal(sigma.ring, args.ideal)
        witness = graded_homotopy(sigma, aug)
        cert = witness.certificate()
        return (OK if cert.verified else FAIL), cert.to_json()
    if "gamma" not in doc or "beta" not in doc:
        raise ParseError("homotopy input needs 'gamma' and 'beta', or 'sigma'")
    gamma = _mat(doc["gamma"], None if ring is None else Polynomial(ring, doc.get("var", "X")))
    beta = _mat(doc["beta"], ring)
    cert = homotopy_commutator(HomotopyWitness.of(gamma), beta)
    return (OK if cert.verified else FAIL), cert.to_json()


COMMANDS = {
    "factor": (cmd_factor, "factor a matrix into elementary generators"),
    "verify": (cmd_verify, "re-check a certificate from disk"),
    "orbit": (cmd_orbit, "elementary orbits of unimodular rows over a finite ring"),
    "spinor": (cmd_spinor, "spinor norm of an orthogonal matrix"),
    "commutator-split": (cmd_commutator_split, "split a commutator over R[X]"),
    "relativize": (cmd_relativize, "relative factorization for an ideal"),
    "square-eo": (cmd_square_eo, "write the square of an SO matrix as an OrthO word"),
    "homotopy": (cmd_homotopy, "homotopy certificates"),
}

NEEDS_INPUT = {"factor", "verify", "spinor", "commutator-split", "relativize", "square-eo", "homotopy"}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ringgroups", description="Elementary subgroup computations with checkable certificates.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    for name, (_, help_text) in COMMANDS.items():
        s = sub.add_parser(name, help=help_text)
        s.add_argument("--ring", help="ring: fp5, z8, zz, qq, zloc3, fp3[X], fp2[t]/(t^3) or a JSON descriptor")
        s.add_argument("--group", help="sl, sp or so (default sl)")
        s.add_argument("--ideal", help="comma-separated generators or a JSON list")
        s.add_argument("--in", dest="inputs", action="append", default=[], metavar="PATH", help="input file (repeatable)")
        s.add_argument("--out", help="output file, or a directory when several inputs are given")
        s.add_argument("--jobs", type=int, default=1, help="process independent inputs in parallel")
        if name == "orbit":
            s.add_argument("--n", type=int, help="row length")
            s.add_argument("--table", action="store_true", help="orbit product table of the relative rows")
    return p


def _run_one(command: str, args, path):
    fn = COMMANDS[command][0]
    try:
        return fn(args, path)
    except (UsageError, ParseError) as exc:
        return USAGE, {"error": "usage", "message": str(exc)}
    except MembershipError as exc:
        return FAIL, {"error": "membership", "message": str(exc)}
    except ClaimFailed as exc:
        return FAIL, {"error": "claim", "message": str(exc)}
    except RingGroupsError as exc:
        return USAGE, {"error": type(exc).__name__, "message": str(exc)}


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    Path(out).parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code == 0 else USAGE
    if args.command is None:
        parser.print_help(sys.stderr)
        return USAGE
    if args.jobs < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return USAGE
    if args.command in NEEDS_INPUT and not args.inputs:
        print(f"error: {args.command} needs --in", file=sys.stderr)
        return USAGE
    # validate the ring flag before any computation
    if args.ring is not None:
        try:
            parse_ring(args.ring)
        except RingGroupsError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return USAGE
    paths = args.inputs or [None]
    if len(paths) == 1:
        code, doc = _run_one(args.command, args, paths[0])
        _write(_dump(doc), args.out)
        if code == USAGE:
            print(f"error: {doc.get('message')}", file=sys.stderr)
        return code
    if args.out is None:
        print("error: several inputs need --out DIR", file=sys.stderr)
        return USAGE
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_one, [args.command] * len(paths), [args] * len(paths), paths))
    else:
        results = [_run_one(args.command, args, p) for p in paths]
    os.makedirs(args.out, exist_ok=True)
    for p, (code, doc) in zip(paths, results):
        _write(_dump(doc), os.path.join(args.out, Path(p).stem + ".json"))
    return max(code for code, _ in results)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
