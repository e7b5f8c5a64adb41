import io
import json

import pytest

from mmmvol.cli import load_config, parse_grid, run
from mmmvol.mmm import ModelParams, call_price


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def config(tmp_path):
    path = tmp_path / "sp500.json"
    path.write_text(json.dumps({"S": 1362.18, "r": 0.0011154, "alpha": 43.307, "eta": 0.089896}))
    return str(path)


def test_limits_command(config):
    code, out, err = invoke("limits", "--strike", "1362.18", "--config", config)
    assert code == 0 and err == ""
    lines = out.splitlines()
    assert lines[0].split()[0] == "small_time_limit"
    # sqrt(43.307 / 1362.18) = 0.178304..., which rounds to 0.17830 at five digits
    assert lines[0] == "small_time_limit 0.17830"
    assert lines[1] == "large_time_limit 0.17672"


def test_global_options_before_or_after_subcommand(config):
    a = invoke("--config", config, "--rate", "0.02", "limits", "--strike", "1000")
    b = invoke("limits", "--strike", "1000", "--config", config, "--rate", "0.02")
    assert a == b and a[0] == 0


def test_default_config_is_bundled_fixture(config):
    assert invoke("--dump-config") == invoke("--config", config, "--dump-config")


def test_dump_config_round_trip(tmp_path):
    code, out, _ = invoke("--spot", "1000", "--eta", "0.05", "--dump-config")
    assert code == 0
    path = tmp_path / "c.json"
    path.write_text(out)
    p = load_config(str(path))
    assert p == ModelParams(1000.0, 0.0011154, 43.307, 0.05)
    assert invoke("--config", str(path), "--dump-config")[1] == out


def test_price_commands(params):
    code, out, _ = invoke("price", "--strike", "1300", "--expiry", "1e-15")
    assert code == 0
    assert float(out.split()[1]) == pytest.approx(params.S - 1300.0, rel=1e-15)
    code, out, _ = invoke("price", "--strike", "1400", "--expiry", "2")
    assert float(out.split()[1]) == call_price(params, 1400.0, 2.0)
    code, out, _ = invoke("price", "--expiry", "2", "--kind", "zcb")
    assert out.startswith("zcb 0.99")
    code, out, _ = invoke("price", "--strike", "1400", "--expiry", "2", "--kind", "put")
    assert out.startswith("put ")


def test_iv_and_rr_commands():
    code, out, _ = invoke("iv", "--strike", "1362.18", "--expiry", "1")
    assert code == 0
    fields = dict(line.split(" ", 1) for line in out.splitlines())
    assert float(fields["iv"]) == pytest.approx(0.1825013384717, rel=1e-10)
    assert int(fields["iterations"]) > 0
    code, out, _ = invoke("rr", "--strike", "1700", "--expiry", "1e-4")
    assert code == 0 and out.startswith("rr_estimate 0.168")


def test_surface_command(tmp_path):
    code, out, _ = invoke("surface", "--strikes", "681:2724:4", "--expiries", "0.1:10:3")
    assert code == 0
    assert len(out.splitlines()) == 13
    path = tmp_path / "s.json"
    code, out, _ = invoke("--threads", "3", "surface", "--strikes", "681:2724:4",
                          "--expiries", "0.1:10:3", "--log-expiries", "--format", "json",
                          "--out", str(path))
    assert code == 0 and "12 cells" in out
    data = json.loads(path.read_text())
    assert sorted(set(data["expiry"])) == pytest.approx([0.1, 1.0, 10.0])


def test_converge_command():
    code, out, _ = invoke("converge", "--strike", "1362.18", "--threads", "2")
    assert code == 0
    assert "regime,expiry,iv,iv_error,rr,rr_error,status" in out
    assert out.splitlines()[-1] == "flags none"
    expiries = [line.split(",")[1] for line in out.splitlines() if line.startswith(("small,", "large,"))]
    assert [float(e) for e in expiries] == [1e-2, 1e-3, 1e-4, 50.0, 100.0, 200.0, 400.0]


def test_converge_custom_grids():
    code, out, _ = invoke("converge", "--strike", "1362.18", "--small-expiries", "1e-5:1e-3:3",
                          "--large-expiries", "100:400:2", "--log-expiries")
    assert code == 0
    rows = [line.split(",") for line in out.splitlines() if line.startswith(("small,", "large,"))]
    assert [float(r[1]) for r in rows] == pytest.approx([1e-3, 1e-4, 1e-5, 100.0, 400.0])


def test_mc_check_is_deterministic():
    argv = ("mc-check", "--strike", "1362.18", "--expiry", "1", "--paths", "50000", "--seed", "4")
    a = invoke(*argv)
    b = invoke(*argv, "--threads", "4")
    assert a == b and a[0] == 0
    z = float(a[1].splitlines()[-1].split()[1])
    assert abs(z) < 4.0


def test_verify_command():
    code, out, _ = invoke("verify", "--threads", "4")
    lines = out.splitlines()
    assert code == 0
    assert all(line.startswith("PASS ") for line in lines[:-1])
    assert lines[-1] == f"{len(lines) - 1}/{len(lines) - 1} checks passed"


def test_verify_reports_failure(monkeypatch):
    import mmmvol.verify as verify

    def broken(params, rng):
        return "always fails", False, "forced"

    monkeypatch.setattr(verify, "CHECKS", verify.CHECKS[:1] + (broken,))
    code, out, _ = invoke("verify")
    assert code == 1
    assert "FAIL always fails: forced" in out
    assert out.splitlines()[-1] == "1/2 checks passed"


@pytest.mark.parametrize("argv", [
    ("bogus",),
    (),
    ("price", "--expiry", "1"),
    ("price", "--strike", "1", "--expiry", "x"),
    ("surface", "--strikes", "1:2", "--expiries", "1:2:2"),
    ("--threads", "0", "limits", "--strike", "1"),
    ("--spot", "-1", "limits", "--strike", "1"),
    ("--config", "/nonexistent.json", "limits", "--strike", "1"),
    ("mc-check", "--strike", "1", "--expiry", "1", "--paths", "10"),
])
def test_usage_errors(argv):
    code, out, err = invoke(*argv)
    assert code == 2
    assert out == ""
    assert err.startswith("ERROR usage: ") and err.count("\n") == 1


def test_numeric_errors():
    code, _, err = invoke("iv", "--strike", "1000", "--expiry", "1e5")
    assert code == 1 and err.startswith("ERROR domain: ")
    code, _, err = invoke("iv", "--strike", "4000", "--expiry", "1e-9")
    assert code == 1 and err.startswith("ERROR degenerate-target: ")
    code, _, err = invoke("rr", "--strike", "1500", "--expiry", "5")
    assert code == 1 and err.startswith("ERROR negative-radicand: ")


def test_bad_config_contents(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"S": 1.0, "r": 0.0, "alpha": 1.0}))
    code, _, err = invoke("--config", str(path), "limits", "--strike", "1")
    assert code == 2 and "missing keys" in err
    path.write_text("[1, 2]")
    assert invoke("--config", str(path), "limits", "--strike", "1")[0] == 2


def test_parse_grid():
    assert parse_grid("1:3:3") == [1.0, 2.0, 3.0]
    assert parse_grid("5:5:1") == [5.0]
    assert parse_grid("1:100:3", log=True) == pytest.approx([1.0, 10.0, 100.0])
    for bad in ("1:3", "a:b:c", "3:1:2", "0:1:2", "1:2:0"):
        with pytest.raises(Exception):
            parse_grid(bad)
