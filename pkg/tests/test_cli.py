import json
import subprocess
import sys

import jsonschema
import pytest

from bottgit import invariants as inv
from bottgit.cli import default_cache_dir, load_schema, run


@pytest.fixture
def cli(tmp_path, capsys):
    """Run the CLI in-process against a private cache; returns (code, stdout, stderr)."""
    old = inv.cache_dir()

    def call(*argv):
        code = run(["--cache-dir", str(tmp_path / "cache"), "-q", *argv])
        out, err = capsys.readouterr()
        return code, out, err

    yield call
    inv.set_cache_dir(old)


EXIT_MATRIX = [
    (["verify-bott", "--d", "2,2,2,2,2"], 0),
    (["verify-bott", "--d", "1,1,1,1"], 2),
    (["verify-bott", "--d", "1,2,2"], 2),
    (["verify-bott", "--d", "1,3"], 2),
    (["verify-bott", "--d", "2,0,2,2"], 2),
    (["verify-bott", "--d", "2,x,2"], 2),
    (["stability", "--d", "1,1,1,1"], 0),
    (["stability", "--d", "2,2,2,2,2"], 0),
    (["stability", "--d", "-1,2"], 2),
    (["strata", "--d", "1,1,1,1"], 2),
    (["strata", "--d", ",".join(["1"] * 21)], 2),
    (["strata", "--d", "2,2,2,2,2"], 0),
    (["dims", "--l", "2,2,2,2,2"], 0),
    (["dims", "--l", "2,2", "--sym", "-1"], 2),
    (["straighten", "--tableau", "[[1,3],[2,4]]"], 0),
    (["straighten", "--tableau", "[[1,3],[2]]"], 2),
    (["straighten", "--tableau", "nonsense"], 2),
    (["complex", "--d", "2,2,2,2,2", "--j", "2"], 0),
    (["complex", "--d", "2,2,2,2,2", "--j", "-1"], 2),
    (["complex", "--d", "1,1,1,1", "--j", "1"], 2),
    (["scan-claim", "--nmax", "4", "--dmax", "3"], 0),
    (["scan-claim", "--nmax", "0", "--dmax", "3"], 2),
    (["weights", "--d", "2,2,2,2,2", "--j", "2"], 0),
    (["weights", "--d", "1,1,1,1", "--j", "2"], 2),
    (["cache", "--stats"], 0),
    (["cache"], 2),
    (["no-such-command"], 2),
    ([], 2),
]


@pytest.mark.parametrize("argv,code", EXIT_MATRIX, ids=lambda a: " ".join(a) if isinstance(a, list) else str(a))
def test_exit_codes(cli, argv, code):
    got, _, err = cli(*argv)
    assert got == code
    if code == 2:
        assert err.strip()


def test_verify_text_output(cli):
    code, out, _ = cli("verify-bott", "--d", "2,2,2,2,2")
    assert code == 0
    assert "verdict: true" in out
    assert "H [6]" in out and "H [0, 0]" in out and "H [1, 0, 0]" in out


def test_stability_reports_semistable(cli):
    _, out, _ = cli("stability", "--d", "1,1,1,1")
    assert "strictly semistable" in out


def test_straighten_example(cli):
    _, out, _ = cli("straighten", "--tableau", "[[1,3],[2,4]]")
    assert out.strip() == "+1*[[1,2],[3,4]] +1*[[1,4],[2,3]]"
    _, out, _ = cli("straighten", "--form", "rows", "--tableau", "[[1,2],[3,4]]")
    assert out.strip() == "+1*[[1,3],[2,4]] +1*[[1,2],[4,3]]"


def test_dims_output(cli):
    _, out, _ = cli("dims", "--l", "2,2,2,2,2", "--json")
    assert json.loads(out) == {"degree": "s0_v0_d2,2,2,2,2", "invariant_dim": 6, "basis_size": 6, "standard_tableaux": 6}


def test_scan_csv_columns(cli):
    _, out, _ = cli("scan-claim", "--nmax", "5", "--dmax", "2")
    lines = out.splitlines()
    assert lines[0] == "n,d,sum,stable,sum_ge_2n,min_heavy_excess"
    assert "5,2 2 2 2 2,10,1,1,2" in lines


def test_cache_commands(cli, tmp_path):
    inv.clear_memory_cache()  # force a disk write
    cli("dims", "--l", "1,1,1,1")
    _, out, _ = cli("cache", "--stats", "--json")
    stats = json.loads(out)
    assert stats["files"] >= 1 and stats["cache_dir"] == str(tmp_path / "cache")
    _, out, _ = cli("cache", "--clear")
    assert out.startswith(f"removed {stats['files']} ")


def test_default_cache_dir(monkeypatch, tmp_path):
    monkeypatch.delenv(inv.CACHE_ENV, raising=False)
    monkeypatch.setenv("XDG_DATA_HOME", str(tmp_path))
    assert default_cache_dir() == tmp_path / "bottgit"
    monkeypatch.setenv(inv.CACHE_ENV, str(tmp_path / "x"))
    assert default_cache_dir() == tmp_path / "x"


SCHEMA_CASES = {
    "bott_report": ["verify-bott", "--d", "2,2,2,2,2", "--json"],
    "strata": ["strata", "--d", "1,1,1,1,3", "--json"],
    "weights": ["weights", "--d", "2,2,2,2,2", "--j", "3", "--json"],
    "stability": ["stability", "--d", "1,1,1,1", "--json"],
    "dims": ["dims", "--l", "2,2,2,2", "--sym", "2", "--json"],
    "straighten": ["straighten", "--tableau", "[[1,3],[2,4],[0,5]]", "--json"],
    "complex": ["complex", "--d", "2,2,2,2,2", "--j", "3", "--bar", "--json"],
    "cache_stats": ["cache", "--stats", "--json"],
}


@pytest.mark.parametrize("name", sorted(SCHEMA_CASES))
def test_json_matches_schema(cli, name):
    code, out, _ = cli(*SCHEMA_CASES[name])
    assert code == 0
    schema = load_schema(name)
    jsonschema.Draft202012Validator.check_schema(schema)
    jsonschema.validate(json.loads(out), schema)


def test_timing_report_matches_schema(cli):
    _, out, _ = cli("verify-bott", "--d", "2,2,2,2,2", "--json", "--timing")
    doc = json.loads(out)
    jsonschema.validate(doc, load_schema("bott_report"))
    assert doc["wall_clock_ms"] >= 0 and all("ms" in r for r in doc["per_j"])


@pytest.mark.parametrize(
    "argv",
    [
        ["verify-bott", "--d", "2,2,2,2,2", "--json"],
        ["scan-claim", "--nmax", "5", "--dmax", "4", "--all"],
        ["weights", "--d", "1,3,3,3", "--j", "2", "--json"],
        ["strata", "--d", "2,2,2,2,2", "--json"],
    ],
    ids=lambda a: a[0],
)
def test_output_is_byte_identical(tmp_path, argv):
    def once(cache):
        cmd = [sys.executable, "-m", "bottgit", "--cache-dir", str(tmp_path / cache), "-q", *argv]
        return subprocess.run(cmd, capture_output=True, check=True).stdout

    cold = once("a")
    assert cold == once("a") == once("b")
