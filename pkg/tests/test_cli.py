import io
import json
import subprocess
import sys

import pytest

from floorcount.cli import EXIT_CAP, EXIT_PRECONDITION, EXIT_USAGE, main
from floorcount.counting import build_weight_table, dp_count
from floorcount.model import DegreeSpec


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


@pytest.fixture(autouse=True)
def no_env_cache(monkeypatch):
    monkeypatch.delenv("FLOORCOUNT_CACHE", raising=False)


def test_count_examples():
    assert run("count", "--ambient", "p3", "-d", "2", "--delta", "1", "--field", "complex") == \
        (0, "4 (method=stream)\n")
    code, out = run("count", "--ambient", "p3", "-d", "2", "--field", "real", "--signs", "all-plus")
    assert code == 0 and out.startswith("4 ")


def test_count_large_uses_dp():
    code, out = run("count", "--ambient", "p1p1p1", "-d", "5", "-e", "4", "-f", "4", "--delta", "2",
                    "--format", "json")
    rec = json.loads(out)
    table = build_weight_table(DegreeSpec.p1p1p1(5, 4, 4))
    assert code == 0 and rec["method"] == "dp" and rec["count"] == dp_count(table, 2)
    code, out2 = run("count", "--ambient", "p1p1p1", "-d", "5", "-e", "4", "-f", "4", "--delta", "2",
                     "--format", "json", "--method", "stream")
    assert json.loads(out2)["count"] == rec["count"]


def test_count_csv():
    code, out = run("count", "--ambient", "p2", "-d", "3", "--format", "csv")
    assert out.splitlines() == ["ambient,params,delta,field,count,method", "p2,[3],1,complex,12,stream"]


def test_enumerate_examples():
    code, out = run("enumerate", "--ambient", "p3", "-d", "2", "--delta", "1")
    recs = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and len(recs) == 2
    code, out = run("enumerate", "--ambient", "p1p1", "-d", "2", "-e", "2", "--curves")
    recs = [json.loads(line) for line in out.splitlines()]
    assert len(recs) == 9 and sum(r["multiplicity"] for r in recs) == 12


def test_enumerate_is_deterministic():
    args = ("enumerate", "--ambient", "p1xp2", "-d", "3", "-e", "4", "--delta", "1", "--field", "real")
    assert run(*args) == run(*args)


def test_export_smooth_conic():
    code, out = run("export", "--ambient", "p2", "-d", "2", "--smooth")
    geom = json.loads(out)
    assert code == 0 and len(geom["dual_cells"]) == 4
    assert sum(e["weight"] for e in geom["edges"] if e["v1"] == "ray") == 6


def test_export_plans_are_certified():
    code, out = run("export", "--ambient", "p3", "-d", "2")
    recs = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and [r["certified"] for r in recs] == [True, True]


def test_export_labels():
    code, out = run("export", "--ambient", "p2", "-d", "4", "--labels")
    recs = [json.loads(line) for line in out.splitlines()]
    assert sum(r["real_multiplicity"] for r in recs) == 27
    assert all(r["decoration"] for r in recs)


def test_report_examples():
    code, out = run("report", "--ambient", "p3", "--delta", "1", "--field", "complex",
                    "--grid", "10:1000:10")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "ambient,field,delta,d,count,leading,ratio"
    ratios = [float(line.split(",")[-1]) for line in lines[1:]]
    assert ratios == sorted(ratios) and ratios[-1] == pytest.approx(0.997002999)
    code, out = run("report", "--ambient", "p3", "--delta", "2", "--field", "real",
                    "--grid", "100:2000:100")
    devs = [abs(float(line.split(",")[-1]) - 1) for line in out.splitlines()[1:]]
    assert all(b < a for a, b in zip(devs, devs[1:]))


def test_report_precondition():
    code, _ = run("report", "--ambient", "p1xp2", "--delta", "1", "--field", "real", "-e", "6",
                  "--grid", "4:12:4")
    assert code == EXIT_PRECONDITION


def test_report_fixed_parameters():
    code, out = run("report", "--ambient", "p1p1p1", "--delta", "1", "-e", "4", "-f", "6",
                    "--grid", "10:30:10")
    rows = [line.split(",") for line in out.splitlines()[1:]]
    assert [r[3:6] for r in rows] == [["10", "4", "6"], ["20", "4", "6"], ["30", "4", "6"]]


@pytest.mark.parametrize("argv,code", [
    (["count", "--ambient", "p3"], EXIT_USAGE),
    (["count", "--ambient", "p3", "-d", "0"], EXIT_USAGE),
    (["count", "--ambient", "p3", "-d", "2", "-e", "3"], EXIT_USAGE),
    (["count", "--ambient", "p2", "-d", "3", "--delta", "2"], EXIT_USAGE),
    (["count", "--ambient", "p7", "-d", "3"], EXIT_USAGE),
    (["report", "--ambient", "p3", "--grid", "5:1"], EXIT_USAGE),
    (["count", "--ambient", "p3", "-d", "4", "--field", "real", "--signs", "special"], EXIT_PRECONDITION),
    (["count", "--ambient", "p1p1p1", "-d", "3", "-e", "3", "-f", "2", "--field", "real"],
     EXIT_PRECONDITION),
    (["enumerate", "--ambient", "p3", "-d", "6", "--delta", "2", "--cap", "10"], EXIT_CAP),
])
def test_error_codes(argv, code, capsys):
    assert run(*argv)[0] == code
    assert capsys.readouterr().err


def test_cap_with_force():
    code, out = run("enumerate", "--ambient", "p3", "-d", "4", "--delta", "1", "--cap", "3", "--force")
    assert code == 0 and len(out.splitlines()) > 3


def test_cache_on_off_identical(tmp_path, monkeypatch):
    args = ["report", "--ambient", "p1p1p1", "--delta", "2", "--field", "real", "--grid", "10:40:10"]
    plain = run(*args)
    cached_first = run(*args, "--cache-dir", str(tmp_path))
    files = sorted(tmp_path.iterdir())
    assert files
    cached_again = run(*args, "--cache-dir", str(tmp_path))
    assert plain == cached_first == cached_again
    assert sorted(tmp_path.iterdir()) == files
    other = tmp_path / "env"
    monkeypatch.setenv("FLOORCOUNT_CACHE", str(other))
    assert run(*args, "--cache-dir", str(tmp_path)) == plain
    assert len(list(other.iterdir())) == len(files)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "floorcount", "count", "--ambient", "p3", "-d", "3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("32 ")
