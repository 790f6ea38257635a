import json

import pytest

from wedgelab import cli, suites


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, text, name="run.ini"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_catalog_text(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == cli.EXIT_OK
    assert "[data only]" in out and "[realized]" in out
    assert "MISMATCH" not in out


def test_catalog_json_family(capsys):
    code, out, _ = run(capsys, "catalog", "--family", "cayley", "--json")
    data = json.loads(out)
    assert code == 0 and data["passed"]
    assert {e["family"] for e in data["rows"]} == {"cayley"}
    sp = next(e for e in data["rows"] if e["g"] == "sp_2r(R)")
    assert [c["g1_dim"] for c in sp["checks"]] == [1, 3, 6]


def test_verify_quadric_default(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "quadric")
    data = json.loads(out)
    assert code == 0 and data["passed"]
    names = {c["name"] for c in data["reports"][0]["checks"]}
    assert "quadric.closure" in names


def test_verify_all_without_samples(capsys, tmp_path):
    cfg = write(tmp_path, "[run]\nn = 0\n")
    code, out, _ = run(capsys, "verify", "--config", cfg)
    data = json.loads(out)
    assert code == 0
    assert [r["suite"] for r in data["reports"]] == list(suites.SUITES)
    names = {c["name"] for r in data["reports"] for c in r["checks"]}
    assert "quadric.closure" not in names and "linop.kernel_formula_angle" not in names


def test_verify_output_file_and_determinism(capsys, tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    for path in (out1, out2):
        cfg = write(tmp_path, f"[run]\nn = 20\nseed = 9\noutput = {path}\n")
        assert run(capsys, "verify", "--suite", "polar", "--config", cfg)[0] == 0
    assert out1.read_text() == out2.read_text()


def test_tight_tolerance_fails(capsys, tmp_path):
    cfg = write(tmp_path, "[run]\nn = 0\n[tolerances]\nlocation = 1e-15\n")
    code, _, err = run(capsys, "verify", "--suite", "polar", "--config", cfg)
    assert code == cli.EXIT_FAIL
    assert "FAIL polar.ray_e_minus_f" in err


@pytest.mark.parametrize("text, fragment", [
    ("[run]\nn = x\n", "line 2: [run] n = 'x' is not a valid int"),
    ("[run]\nsamples = 3\n", "unknown field 'samples'"),
    ("[extra]\na = 1\n", "unknown section [extra]"),
    ("[run]\nn = -1\n", "n must be non-negative"),
    ("[tolerances]\nangle = 0\n", "angle must be positive"),
    ("n = 3\n", "config error"),
])
def test_config_errors(capsys, tmp_path, text, fragment):
    code, _, err = run(capsys, "verify", "--config", write(tmp_path, text))
    assert code == cli.EXIT_CONFIG
    assert fragment in err


def test_missing_config(capsys, tmp_path):
    code, _, err = run(capsys, "verify", "--config", str(tmp_path / "none.ini"))
    assert code == cli.EXIT_CONFIG and "cannot read" in err


def test_sample_reproducible(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert run(capsys, "sample", "--spec", "dS2", "--domain", "positivity", "--n", "100",
                   "--seed", "7", "--out", str(path))[0] == 0
    assert a.read_text() == b.read_text()
    assert len(a.read_text().splitlines()) == 101


def test_sample_sl2_kms(capsys):
    code, out, _ = run(capsys, "sample", "--spec", "sl2-cayley", "--domain", "kms", "--n", "5")
    assert code == 0
    assert out.splitlines()[0] == "index,source,x0,x1,x2,polar,positivity,kms"


@pytest.mark.parametrize("argv", [
    ("sample", "--spec", "sp4", "--domain", "kms"),
    ("sample", "--spec", "nope", "--domain", "kms"),
    ("sample", "--spec", "dS2", "--domain", "kms", "--n", "-1"),
    ("sample", "--spec", "dS2", "--domain", "other"),
    ("catalog", "--family", "other"),
    (),
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == cli.EXIT_CONFIG


def test_help_exits_zero(capsys):
    code, out, _ = run(capsys, "verify", "--help")
    assert code == 0 and "[tolerances]" in out
