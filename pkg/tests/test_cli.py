import io
import json
import subprocess
import sys

import pytest

from clusterloops import cli


def run(argv, stdin=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = cli.run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def test_rho_pipes_into_order(monkeypatch):
    code, text, _ = run(["loop", "rho", "--k", "2", "--n", "3"])
    assert code == 0
    code, out, _ = run(["aut", "order"], text, monkeypatch)
    assert (code, out) == (0, "order: 5\n")


def test_json_output(monkeypatch):
    _, text, _ = run(["loop", "rho", "--k", "3", "--n", "4"])
    code, out, _ = run(["--json", "aut", "order", "-"], text, monkeypatch)
    assert json.loads(out) == {"order": 7}


def test_quiver_commands(tmp_path):
    f = tmp_path / "a3.txt"
    f.write_text("quiver 3 0\n0 1 1\n1 2 1\n")
    assert run(["quiver", "finite", str(f)])[1] == "verdict: Finite\ntype: A3\n"
    assert run(["quiver", "class", str(f)])[1] == "size: 4\ntruncated: False\n"
    code, out, _ = run(["quiver", "mutate", "--at", "1,1", str(f)])
    assert code == 0 and out == "quiver 3 0\n0 1 1\n1 2 1\n"


def test_fence_and_dt(tmp_path, monkeypatch):
    code, fence, _ = run(["fence", "braid", "--word", "s1^3"])
    assert fence == "fence 2\nw1 w1 w1\n"
    code, dt, _ = run(["fence", "dt", "-"], fence, monkeypatch)
    code, out, _ = run(["aut", "order"], dt, monkeypatch)
    assert out == "order: 5\n"


def test_theta_names():
    code, out, _ = run(["--json", "loop", "theta", "--beta", "1 1 3 2 2 1 1", "--strand", "2", "--k", "4"])
    d = json.loads(out)
    word, perm = d["aut_left_to_right"].split(";")
    assert word == "mut: 10 8 7 5 3 1 1 2 5 6 8 9 11 "
    cycles = set()
    for c in perm.replace("perm:", "").strip(" ()").split(")("):
        c = [int(x) for x in c.split()]
        m = c.index(min(c))
        cycles.add(tuple(c[m:] + c[:m]))
    assert cycles == {(1, 2, 3), (5, 6, 7), (8, 9, 10)}
    assert d["matches_simulation"] is True


def test_tau_and_verify(monkeypatch):
    code, out, _ = run(["loop", "verify", "--tails", "3,2,2"])
    assert code == 0 and out.endswith("all: True\n")
    _, tau, _ = run(["loop", "tau", "--tails", "3,3,2", "--tail", "1"])
    _, out, _ = run(["aut", "classify"], tau, monkeypatch)
    assert out.startswith("kind: Reducible\nverdict: Infinite\n")


def test_dehn(monkeypatch):
    aut = "quiver 3 0\n0 1 2\n1 2 2\n2 0 2\nmut: 0 ; perm: (0 1)\n"
    _, out, _ = run(["aut", "dehn"], aut, monkeypatch)
    assert out.startswith("dehn_twist: True\nk: 2\nm: 1\nn: 1\n")


def test_fold(tmp_path):
    q = tmp_path / "q.txt"
    q.write_text("quiver 3 0\n0 1 1\n2 1 1\n")
    g = tmp_path / "g.txt"
    g.write_text("(v0 v2)\n")
    _, out, _ = run(["--json", "fold", "apply", str(q), "--action", str(g)])
    d = json.loads(out)
    assert d["bG"] == [[0, 2], [-1, 0]] and d["D"] == [2, 1]
    _, out, _ = run(["fold", "explore", str(q), "--action", str(g)])
    assert out.startswith("result: Yes")


def test_grass(tmp_path):
    f = tmp_path / "g.txt"
    f.write_text("grassmann 2 4\n1 0 -1 1\n0 1 1 2\n")
    assert run(["grass", "plucker", str(f), "--cols", "1,2"])[1] == "value: 1\n"
    assert run(["grass", "rho", str(f), "--times", "4"])[1] == "grassmann 2 4\n-1 0 1 -1\n0 -1 -1 -2\n"
    assert run(["grass", "xratio", "--line", "1,0", "--line", "1,1", "--line", "0,1", "--line", "1,-1"])[1] == "cross_ratio: -1\n"


def test_fixpoint(monkeypatch):
    aut = "quiver 2 0\n1 0 1\nmut: 0 ; perm: (0 1)\n"
    code, out, _ = run(["--json", "fixpoint", "find"], aut, monkeypatch)
    d = json.loads(out)
    assert d["outcome"] == "Found"
    assert abs(d["point"][0] - 1.6180339887498949) < 1e-10


def test_domain_errors_exit_one_with_line(monkeypatch):
    code, _, err = run(["quiver", "finite"], "quiver 2 0\n0 1 x\n", monkeypatch)
    assert code == 1 and "line 2" in err
    code, _, err = run(["aut", "order"], "quiver 2 0\n0 1 1\nmut: 0 ; perm: (0 7)\n", monkeypatch)
    assert code == 1 and "line 3" in err
    code, _, err = run(["aut", "order", "/nonexistent/file"])
    assert code == 1


def test_usage_errors_exit_two():
    assert run(["quiver", "bogus"])[0] == 2
    assert run(["loop", "rho", "--k", "0", "--n", "3"])[0] == 2
    assert run([])[0] == 2


def test_console_script():
    p = subprocess.run([sys.executable, "-m", "clusterloops.cli", "loop", "rho", "--k", "2", "--n", "4"],
                       capture_output=True, text=True)
    q = subprocess.run([sys.executable, "-m", "clusterloops.cli", "aut", "order"], input=p.stdout,
                       capture_output=True, text=True)
    assert q.returncode == 0 and q.stdout == "order: 6\n"
