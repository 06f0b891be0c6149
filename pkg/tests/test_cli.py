import io
import json
import subprocess
import sys

import pytest

from unitroot.cli import run
from unitroot.trace import clear_caches


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), stdout=out)
    return code, out.getvalue()


BASE = ["--p", "5", "--N", "7", "--k", "2", "--m-max", "4", "--precision", "12"]


@pytest.mark.parametrize("cmd", [["dseries"], ["lfunction"], ["slopes"], ["poles"], ["check", "identity"],
                                 ["check", "continuity"], ["check", "fieldgen"]])
def test_commands_succeed(cmd):
    code, out = call(*cmd, *BASE)
    assert code == 0
    records = [json.loads(line) for line in out.splitlines()]
    assert records


def test_lfunction_records():
    code, out = call("lfunction", *BASE)
    rows = [json.loads(line) for line in out.splitlines()]
    coeffs = [r for r in rows if "valuation" in r and "index" in r]
    assert len(coeffs) >= 5
    assert all(r["precision"] == 12 for r in coeffs)


@pytest.mark.parametrize("fmt", ["json", "table", "csv"])
def test_formats(fmt):
    code, out = call("slopes", *BASE, "--format", fmt)
    assert code == 0 and out.strip()


@pytest.mark.parametrize("argv", [
    ["dseries", "--p", "2"],
    ["dseries", "--N", "4"],
    ["dseries", "--p", "5", "--N", "10"],
    ["lfunction", "--route", "nope"],
    ["slopes", "--format", "xml"],
    ["dseries", "--m-max", "0"],
    ["dseries", "--threads", "many"],
    ["frobnicate"],
    ["check", "independence", "--coeffs", "1,2", "--radicands", "2,8"],
])
def test_config_errors_exit_1(argv):
    assert call(*argv)[0] == 1


def test_error_classes_map_to_exit_codes(monkeypatch):
    from unitroot import cli
    from unitroot.errors import InvariantError, PrecisionError

    def boom(exc):
        def cmd(cfg):
            raise exc
        return cmd

    monkeypatch.setitem(cli.COMMANDS, "dseries", boom(PrecisionError("no digits")))
    assert call("dseries")[0] == 2
    monkeypatch.setitem(cli.COMMANDS, "dseries", boom(InvariantError("bad")))
    assert call("dseries")[0] == 3


def test_failed_check_exits_3(monkeypatch):
    from unitroot import analysis, cli

    real = analysis.check_identity
    monkeypatch.setattr(cli, "check_identity", lambda *a, **kw: real(*a, perturb={1: 5 ** 11}, **kw))
    assert call("check", "identity", *BASE)[0] == 3


def test_independence_cli():
    code, out = call("check", "independence", "--coeffs", "1,-1/2", "--radicands", "2,-3")
    assert code == 0
    code, out = call("check", "independence", "--trials", "50")
    assert code == 0


def test_output_is_deterministic(tmp_path):
    a = call("lfunction", *BASE, "--format", "csv")
    clear_caches()
    b = call("lfunction", *BASE, "--format", "csv")
    assert a == b


def test_cache_hit_and_miss_give_identical_output(tmp_path):
    cache = tmp_path / "h.txt"
    clear_caches()
    first = call("dseries", *BASE, "--cache", str(cache))
    assert cache.read_text().startswith("# unitroot class-number cache v1")
    clear_caches()
    second = call("dseries", *BASE, "--cache", str(cache))
    assert first == second


def test_corrupt_cache_is_rebuilt(tmp_path):
    cache = tmp_path / "h.txt"
    cache.write_text("# unitroot class-number cache v1\n-23 7\n-23 3\n")
    clear_caches()
    code, out = call("dseries", *BASE, "--cache", str(cache))
    assert code == 0
    lines = cache.read_text().splitlines()
    assert "-23 7" not in lines
    clear_caches()
    assert call("dseries", *BASE) == (code, out)


def test_cache_env_var(tmp_path, monkeypatch):
    cache = tmp_path / "env.txt"
    monkeypatch.setenv("UNITROOT_CACHE", str(cache))
    assert call("slopes", *BASE)[0] == 0
    assert cache.exists()


def test_threads_match_serial():
    clear_caches()
    serial = call("dseries", *BASE)
    clear_caches()
    parallel = call("dseries", *BASE, "--threads", "2")
    assert serial == parallel


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "unitroot.cli", "poles", *BASE], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "certified poles" in proc.stdout
