"""End-to-end command line behaviour: outputs, exit codes and determinism."""
from __future__ import annotations

import json
import subprocess
import sys

import pytest

from _gen import rand_elementary, rand_relative
from ringgroups.cli import FAIL, OK, USAGE, main
from ringgroups.matrices import Mat, torus
from ringgroups.rings import IdealSpec, Modular, PrimeField, parse_ring

Z9 = Modular(9)
F7 = PrimeField(7)


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


@pytest.fixture
def sl_file(tmp_path, rng):
    M = rand_elementary(Z9, 3, "SL", rng, 8)
    return _write(tmp_path, "sl.json", M.to_json())


def test_factor_and_verify(tmp_path, sl_file, capsys):
    out = tmp_path / "cert.json"
    assert main(["factor", "--in", sl_file, "--out", str(out)]) == OK
    cert = json.loads(out.read_text())
    assert cert["verified"] and cert["meta"]["method"] == "local"
    code, report = _run(["verify", "--in", str(out)], capsys)
    assert code == OK and report["verified"]


def test_verify_detects_tampering(tmp_path, sl_file, capsys):
    out = tmp_path / "cert.json"
    main(["factor", "--in", sl_file, "--out", str(out)])
    cert = json.loads(out.read_text())
    cert["subjects"]["target"]["rows"][0][0] = "0"
    bad = _write(tmp_path, "bad.json", cert)
    code, report = _run(["verify", "--in", bad], capsys)
    assert code == FAIL and not report["verified"]


def test_factor_with_ring_flag_and_bare_rows(tmp_path, capsys):
    p = _write(tmp_path, "m.json", [[0, 1], [-1, 0]])
    code, cert = _run(["factor", "--ring", "zz", "--in", p], capsys)
    assert code == OK and cert["meta"]["method"] == "euclidean"
    assert len(cert["proof"]["word"]["atoms"]) == 3


def test_factor_symplectic_and_orthogonal(tmp_path, rng, capsys):
    sp = _write(tmp_path, "sp.json", rand_elementary(F7, 4, "Sp", rng).to_json())
    code, cert = _run(["factor", "--group", "sp", "--in", sp], capsys)
    assert code == OK and cert["meta"]["family"] == "SpSE"
    so = _write(tmp_path, "so.json", (torus(F7(3), 4) * rand_elementary(F7, 4, "SO", rng)).to_json())
    code, cert = _run(["factor", "--group", "so", "--in", so], capsys)
    assert code == OK and cert["kind"] == "so_decomposition"


def test_non_member_exits_one(tmp_path, capsys):
    p = _write(tmp_path, "m.json", Mat.diag(Z9, [2, 1, 1]).to_json())
    code, doc = _run(["factor", "--in", p], capsys)
    assert code == FAIL and doc["error"] == "membership"


@pytest.mark.parametrize(
    "argv",
    [
        ["factor", "--ring", "banana", "--in", "x.json"],
        ["factor"],
        ["factor", "--in", "/nonexistent/file.json"],
        ["orbit", "--ring", "z4"],
        ["frobnicate"],
        ["factor", "--in", "a.json", "--jobs", "0"],
    ],
)
def test_usage_errors_exit_two(argv, capsys):
    assert main(argv) == USAGE


def test_small_orthogonal_is_usage_error(tmp_path, capsys):
    p = _write(tmp_path, "m.json", Mat.identity(F7, 2).to_json())
    assert main(["factor", "--group", "so", "--in", p]) == USAGE


def test_ring_mismatch_is_usage_error(tmp_path, capsys):
    p = _write(tmp_path, "m.json", Mat.identity(F7, 2).to_json())
    assert main(["factor", "--ring", "z9", "--in", p]) == USAGE


def test_relativize(tmp_path, rng, capsys):
    I = IdealSpec.of(Z9, [3])
    p = _write(tmp_path, "rel.json", rand_relative(Z9, 3, I, rng, 4).to_json())
    code, cert = _run(["relativize", "--ideal", "3", "--in", p], capsys)
    assert code == OK and cert["meta"]["method"] == "excision"
    assert cert["proof"]["word"]["type"] == "RelWord"
    assert main(["relativize", "--in", p]) == USAGE


def test_orbit_listing_and_table(capsys):
    code, doc = _run(["orbit", "--ring", "z6", "--n", "3"], capsys)
    assert code == OK and doc["rows"] == 182 and doc["orbit_count"] == 1
    code, doc = _run(["orbit", "--ring", "z4", "--n", "3", "--ideal", "2", "--table"], capsys)
    assert code == OK and doc["identity"] == ["1", "0", "0"]
    assert len(doc["table"]) == doc["orbit_count"] ** 2
    assert main(["orbit", "--ring", "z4", "--n", "3", "--table"]) == USAGE


def test_orbit_from_rows(tmp_path, capsys):
    p = _write(tmp_path, "rows.json", [[1, 0, 0], [3, 2, 0]])
    code, doc = _run(["orbit", "--ring", "z4", "--n", "3", "--in", p], capsys)
    assert code == OK and doc["orbit_count"] == 1


def test_spinor(tmp_path, rng, capsys):
    p = _write(tmp_path, "so.json", (torus(F7(3), 4) * rand_elementary(F7, 4, "SO", rng)).to_json())
    code, doc = _run(["spinor", "--in", p], capsys)
    assert code == OK and doc["spinor_norm"] == "3" and not doc["trivial"]
    assert doc["certificate"]["verified"]


def test_square_eo(tmp_path, rng, capsys):
    p = _write(tmp_path, "so.json", (torus(Z9(2), 4) * rand_elementary(Z9, 4, "SO", rng)).to_json())
    code, cert = _run(["square-eo", "--in", p], capsys)
    assert code == OK and cert["kind"] == "square" and cert["verified"]


def test_commutator_split(tmp_path, capsys):
    P = parse_ring("fp3[X]")
    a = Mat.from_rows(P, [[1, "X + 1", 0], [0, 1, 0], [0, 0, 1]])
    b = Mat.from_rows(P, [[1, 0, 0], [0, 1, 0], ["X^2", 0, 1]])
    p = _write(tmp_path, "cs.json", {"alpha": a.to_json(), "beta": b.to_json()})
    code, cert = _run(["commutator-split", "--in", p], capsys)
    assert code == OK and len(cert["proof"]["factors"]) == 4
    bad = _write(tmp_path, "bad.json", {"alpha": a.to_json()})
    assert main(["commutator-split", "--in", bad]) == USAGE


def test_homotopy_sigma(tmp_path, capsys):
    A = parse_ring("fp2[t]/(t^3)")
    s = Mat.from_rows(A, [["1 + t", "t^2"], ["t", "1 + t + t^2"]])
    p = _write(tmp_path, "h.json", {"sigma": s.to_json()})
    code, cert = _run(["homotopy", "--ideal", "t", "--in", p], capsys)
    assert code == OK and cert["kind"] == "homotopy"


def test_homotopy_gamma_beta(tmp_path, rng, capsys):
    P = parse_ring("fp5[X]")
    g = Mat.from_rows(P, [[1, "X", 0], [0, 1, 0], [0, 0, 1]])
    beta = rand_elementary(PrimeField(5), 3, "SL", rng)
    p = _write(tmp_path, "h.json", {"gamma": {"rows": g.to_json()["rows"]}, "beta": {"rows": beta.to_json()["rows"]}})
    code, cert = _run(["homotopy", "--ring", "fp5", "--in", p], capsys)
    assert code == OK and cert["meta"]["method"] == "euclidean-in-X"


def test_several_inputs_with_jobs(tmp_path, rng, capsys):
    paths = [_write(tmp_path, f"m{k}.json", rand_elementary(Z9, 3, "SL", rng).to_json()) for k in range(3)]
    paths.append(_write(tmp_path, "bad.json", Mat.diag(Z9, [2, 1, 1]).to_json()))
    argv = ["factor"] + [x for p in paths for x in ("--in", p)]
    assert main(argv) == USAGE  # no --out directory
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    assert main(argv + ["--out", str(out1), "--jobs", "2"]) == FAIL
    assert main(argv + ["--out", str(out2)]) == FAIL
    for k in range(3):
        assert (out1 / f"m{k}.json").read_text() == (out2 / f"m{k}.json").read_text()
    assert json.loads((out1 / "bad.json").read_text())["error"] == "membership"


def test_module_entry_point(tmp_path, sl_file):
    res = subprocess.run([sys.executable, "-m", "ringgroups", "factor", "--in", sl_file], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["verified"] is True
    res = subprocess.run([sys.executable, "-m", "ringgroups", "factor", "--ring", "nope", "--in", sl_file], capture_output=True, text=True)
    assert res.returncode == 2 and "error" in res.stderr
