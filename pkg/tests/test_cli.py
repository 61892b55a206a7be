import json

import pytest

from thuemahler import cli

FORM = "1,0,0,-2"

DETERMINISM_CASES = [
    ["solve", "thue", "--form", FORM, "-m", "1", "-B", "300"],
    ["solve", "tm", "--form", FORM, "-S", "2,3", "-B", "60"],
    ["solve", "sunit", "-S", "2,3", "-E", "4"],
    ["solve", "wsunit", "-a", "3", "-b", "-2", "-S", "2,3", "-E", "2"],
    ["count", "A", "--form", FORM, "-Z", "500"],
    ["count", "A", "--form", FORM, "-S", "5,7", "-Z", "50"],
    ["count", "R", "--form", FORM, "-Z", "500"],
    ["count", "Rk", "--form", FORM, "-k", "2", "-Z", "500"],
    ["count", "Nk", "--form", FORM, "-k", "2", "-Z", "500"],
    ["count", "asym", "--form", FORM, "-Z", "100,1000", "--tol", "1e-2"],
    ["count", "richest", "--form", FORM, "-M", "200", "--top", "3"],
    ["count", "gpfscan", "--form", FORM, "-B", "32"],
]


def run(argv, capsys):
    try:
        rc = cli.main(argv)
    except SystemExit as e:
        rc = e.code
    out = capsys.readouterr()
    return rc, out.out, out.err


@pytest.fixture(autouse=True)
def no_env_cache(monkeypatch):
    monkeypatch.delenv("THUEMAHLER_CACHE_DIR", raising=False)


def test_exit_codes(capsys):
    assert run(["solve", "thue", "--form", FORM, "-m", "1"], capsys)[0] == 2  # missing B
    assert run(["solve", "thue", "--form", "x", "-m", "1", "-B", "3"], capsys)[0] == 2
    assert run(["bogus"], capsys)[0] == 2
    assert run(["bounds", "eval", "--name", "bugeaud_gyory", "-n", "3", "-H", "3", "-M", "1"],
               capsys)[0] == 3
    rc, _, err = run(["count", "A", "--form", "1,0,-1,0", "-Z", "5"], capsys)
    assert rc == 3 and "domain error" in err
    assert run(["forms", "disc", "--form", FORM], capsys)[0] == 0


def test_thue_output(capsys):
    rc, out, _ = run(["solve", "thue", "--form", FORM, "-m", "1", "-B", "1000"], capsys)
    lines = [json.loads(x) for x in out.splitlines()]
    assert rc == 0
    assert {(d["p"], d["q"]) for d in lines[:-1]} == {(1, 0), (-1, -1)}
    assert lines[-1]["record"] == "summary" and lines[-1]["flag"] == "box-limited"


@pytest.mark.parametrize("argv", DETERMINISM_CASES, ids=lambda a: "-".join(a[:2]))
def test_same_bytes_for_any_thread_count(argv, capsys):
    outs = {run(argv + ["--threads", str(t)], capsys)[1] for t in (1, 4, 16)}
    assert len(outs) == 1 and outs.pop()


def test_cache_hit_miss_and_corruption(tmp_path, capsys, monkeypatch):
    argv = ["count", "sigma", "--form", FORM, "--tol", "1e-2", "--cache-dir", str(tmp_path)]
    _, fresh, _ = run(argv + ["--timing"], capsys)
    rc, cached, err = run(argv + ["--timing"], capsys)
    assert rc == 0 and cached == fresh and "cache_hit=True" in err
    _, _, err = run(argv + ["--timing", "--seed", "5"], capsys)
    assert "cache_hit=False" in err
    monkeypatch.setattr(cli, "__version__", "0.0.0-other")
    _, again, err = run(argv + ["--timing"], capsys)
    assert "cache_hit=False" in err and again == fresh
    monkeypatch.undo()
    for f in (tmp_path / "runs").rglob("*.json"):
        f.write_text("{not json")
    rc, out, err = run(argv + ["--timing"], capsys)
    assert rc == 0 and out == fresh and "cache_hit=False" in err


def test_env_var_enables_cache(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("THUEMAHLER_CACHE_DIR", str(tmp_path))
    argv = ["padic", "rho", "--form", FORM, "-m", "4,25", "--timing"]
    run(argv, capsys)
    assert "cache_hit=True" in run(argv, capsys)[2]
    assert "cache_hit=False" in run(argv + ["--no-cache"], capsys)[2]


def test_config_precedence(tmp_path, capsys):
    conf = tmp_path / "run.conf"
    conf.write_text("# thue run\nform = 1,0,0,-2\nm = -1\nB = 40\n")
    _, out, _ = run(["solve", "thue", "--config", str(conf)], capsys)
    assert json.loads(out.splitlines()[-1])["m"] == -1
    _, out, _ = run(["solve", "thue", "--config", str(conf), "-m", "1"], capsys)
    assert json.loads(out.splitlines()[-1])["m"] == 1
    conf.write_text("form = 1,0,0,-2\nbogus = 3\n")
    assert run(["solve", "thue", "--config", str(conf), "-m", "1", "-B", "3"], capsys)[0] == 2


def test_summary_feeds_verify(tmp_path, capsys):
    _, out, _ = run(["solve", "sunit", "-S", "2", "-E", "3"], capsys)
    path = tmp_path / "sunit.jsonl"
    path.write_text(out)
    rc, out, _ = run(["bounds", "verify", "--summary", str(path)], capsys)
    rep = json.loads(out)
    assert rc == 0 and rep["status"] == "PASS" and rep["observed"] == 3
    assert rep["bound"]["name"] == "evertse84"


def test_json_round_trip(capsys):
    _, out, _ = run(["count", "asym", "--form", FORM, "-Z", "100,1000", "-k", "2",
                     "--tol", "1e-2"], capsys)
    from thuemahler.count import CountSeries

    s = CountSeries.from_json(json.loads(out))
    assert json.loads(json.dumps(s.to_json())) == json.loads(out)


def test_csv_format(capsys):
    _, out, _ = run(["approx", "tuples", "--beta", "4", "--beta1", "3", "-t", "1",
                     "--format", "csv"], capsys)
    assert out.splitlines()[0].count(",") >= 1
