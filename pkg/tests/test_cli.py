import json
from pathlib import Path

import pytest

from starlab import __version__
from starlab.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from starlab.report import SCHEMA_VERSION
from starlab.suites import RunConfig, run_suite
from starlab.errors import ConfigError
from starlab.symbols import PhaseSymbol, variables

GOLDEN = Path(__file__).parent / "golden"
(Z,), (ZB,) = variables(1)


def write_symbol(tmp_path, name, sym):
    path = tmp_path / name
    path.write_text(sym.to_json(), encoding="utf-8")
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_star_voros(tmp_path, capsys):
    f = write_symbol(tmp_path, "f.json", Z)
    g = write_symbol(tmp_path, "g.json", ZB)
    code, out, _ = run(capsys, "star", "--kind", "voros", f, g)
    assert code == EXIT_OK
    data = json.loads(out)
    assert PhaseSymbol.from_dict(data) == ZB * Z + 1
    assert data["terms"][0]["m"] == [0] and data["terms"][1]["m"] == [1]


def test_star_extended_k0_matches_voros(tmp_path, capsys):
    f = write_symbol(tmp_path, "f.json", Z**2 + ZB * 0.5)
    g = write_symbol(tmp_path, "g.json", ZB**2 * Z)
    _, voros, _ = run(capsys, "star", f, g)
    code, ext, _ = run(capsys, "star", "--kind", "extended", "--k", "0", f, g)
    assert code == EXIT_OK and ext == voros


def test_star_extended_k1(tmp_path, capsys):
    f = write_symbol(tmp_path, "f.json", Z)
    g = write_symbol(tmp_path, "g.json", ZB)
    code, out, _ = run(capsys, "star", "--kind", "extended", "--k", "1", "--exact", f, g)
    assert code == EXIT_OK
    assert PhaseSymbol.from_json(out).coeff((0,), (0,)) == 3


def test_star_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{oops", encoding="utf-8")
    good = write_symbol(tmp_path, "g.json", ZB)
    code, _, err = run(capsys, "star", str(bad), good)
    assert code == EXIT_USAGE and "parse error" in err and "line 1" in err
    two = write_symbol(tmp_path, "two.json", variables(2)[0][0])
    code, _, err = run(capsys, "star", two, good)
    assert code == EXIT_USAGE
    code, _, _ = run(capsys, "star", "--kind", "extended", "--k", "1,1", good, good)
    assert code == EXIT_USAGE
    code, _, _ = run(capsys, "star", str(tmp_path / "missing.json"), good)
    assert code == EXIT_USAGE


def test_icoeff(capsys):
    code, out, _ = run(capsys, "icoeff", "--k", "1", "--pmax", "3")
    assert code == EXIT_OK
    rows = json.loads(out)["rows"]
    assert rows[1]["value"] == pytest.approx(3.0)
    code, out, _ = run(capsys, "icoeff", "--k", "2", "--pmax", "2", "--format", "csv")
    assert out.splitlines()[0] == "k,p,exact,value,quadrature,printed"
    code, _, _ = run(capsys, "icoeff", "--k", "-1")
    assert code == EXIT_USAGE


def test_verify_heisenberg(capsys):
    code, out, _ = run(capsys, "verify", "heisenberg", "--seed", "7")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["schema"] == SCHEMA_VERSION
    status = {e["relation_id"]: e["status"] for e in data["entries"]}
    for eq in range(5, 10):
        assert status[f"Eq.{eq}"] == "pass"


def test_verify_golden_structure(capsys):
    code, out, _ = run(capsys, "verify", "heisenberg", "--seed", "7")
    data = json.loads(out)
    shape = {
        "schema": data["schema"],
        "keys": sorted(data),
        "entry_keys": sorted(data["entries"][0]),
        "entries": [[e["relation_id"], e["status"], e["tolerance"]] for e in data["entries"]],
    }
    golden = json.loads((GOLDEN / "heisenberg_seed7.json").read_text(encoding="utf-8"))
    assert shape == golden


def test_verify_same_seed_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "landau", "--seed", "3", "-o", str(a)]) == EXIT_OK
    assert main(["verify", "landau", "--seed", "3", "-o", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_verify_formats(capsys):
    code, out, _ = run(capsys, "verify", "landau", "--format", "md")
    assert code == EXIT_OK and out.startswith("## landau")
    code, out, _ = run(capsys, "verify", "landau", "--format", "csv")
    assert out.splitlines()[0] == "section,relation_id,max_abs_error,tolerance,status,notes"


def test_verify_tolerance_override_can_fail(capsys):
    code, out, _ = run(capsys, "verify", "landau", "--tol", "1e-20")
    assert code == EXIT_FAIL
    assert json.loads(out)["summary"]["fail"] > 0


def test_verify_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["verify", "nonsense"])
    assert info.value.code == EXIT_USAGE
    code, _, err = run(capsys, "verify", "landau", "--grid", "0")
    assert code == EXIT_USAGE and err


def test_run_suite_rejects_unknown_name():
    with pytest.raises(ConfigError):
        run_suite("nope", RunConfig())


def test_su11_verify(capsys):
    code, out, _ = run(capsys, "su11", "verify", "--k", "1")
    assert code == EXIT_OK
    ids = {e["relation_id"] for e in json.loads(out)["entries"]}
    assert "Eq.68[k=1]:{z,zbar}=Theta" in ids


def test_calogero_commands(capsys):
    code, out, _ = run(capsys, "calogero", "verify", "--eta", "0.5")
    assert code == EXIT_OK
    code, out, _ = run(capsys, "calogero", "spectrum", "--eta", "0", "--n", "3", "--format", "json")
    assert [lvl["e_n"] for lvl in json.loads(out)["levels"]] == [1.5, 3.5, 5.5]
    code, out, _ = run(capsys, "calogero", "spectrum", "--eta", "0", "--n", "2")
    assert "| 1 | 3.5 |" in out
    code, _, _ = run(capsys, "calogero", "spectrum", "--eta", "0", "--n", "0")
    assert code == EXIT_USAGE


def test_covariance_command(tmp_path, capsys):
    code, out, _ = run(capsys, "covariance", "--xi", "0.3")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["summary"]["paper_discrepancy"] >= 1
    code, out, _ = run(capsys, "covariance", "--xi", "0.3", "--observable", write_symbol(tmp_path, "z.json", Z))
    assert json.loads(out)["entries"][0]["status"] == "pass"
    code, out, _ = run(capsys, "covariance", "--noncanonical")
    assert code == EXIT_OK
    code, _, _ = run(capsys, "covariance", "--xi", "abc")
    assert code == EXIT_USAGE


def test_landau_command(capsys):
    code, out, _ = run(capsys, "landau", "verify", "--kmax", "1", "--lmax", "1")
    assert code == EXIT_OK
    code, _, _ = run(capsys, "landau", "verify", "--kmax", "-1")
    assert code == EXIT_USAGE
