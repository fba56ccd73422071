import json

import pytest

from toricroots.cli import RunConfig, InputError, main, run
from toricroots.schemas import validate


@pytest.fixture
def files(tmp_path):
    def write(name, data):
        p = tmp_path / name
        p.write_text(json.dumps(data))
        return str(p)
    return write


def run_json(capsys, argv):
    status = main(argv + ["--json"])
    out = capsys.readouterr().out
    report = json.loads(out)
    validate(report, "report")
    return status, report, out


def test_cremona_bound_zero(capsys):
    status, report, _ = run_json(capsys, ["cremona", "--n", "2", "--bound", "0"])
    assert status == 0
    assert [r["derivation"] for r in report["result"]["roots"]] == ["d/dx1", "d/dx2"]


def test_surface_case31(capsys):
    status, report, _ = run_json(capsys, ["surface", "--a", "3", "--b", "5", "--r", "4",
                                          "--q", "5"])
    assert status == 0 and report["result"]["case"] == "Case31"
    assert report["result"]["lambda"]["nonempty"] is False


def test_surface_family(capsys):
    status, report, _ = run_json(capsys, ["surface", "--a", "0", "--b", "1", "--r", "1",
                                          "--q", "1", "--bound", "3", "--family"])
    fam = report["result"]["family"]
    assert [f["t_degree"] for f in fam] == [-1, 0, 1, 2, 3]
    assert all(f["descriptor"]["kind"] == "nhrv" for f in fam)


def test_verify_example_45(capsys):
    status, report, _ = run_json(capsys, ["verify", "--suite", "example-4.5", "--bound", "8"])
    assert status == 0
    details = report["result"]["suites"][0]["details"]
    assert details["ab_counts"] == [2]
    assert all(k == c + 1 for c, k in details["c_counts"])


def test_verify_failure_exit_code(capsys):
    status, report, _ = run_json(capsys, ["verify", "--suite", "corank-two"])
    assert status == 2 and report["status"] == "fail"


def test_seed_reproducible(capsys):
    argv = ["verify", "--suite", "zero-only", "--bound", "4", "--seed", "7"]
    _, r1, out1 = run_json(capsys, argv)
    _, r2, out2 = run_json(capsys, argv)
    assert out1 == out2 and r1["seed"] == 7


def test_roots_and_svg(capsys, files):
    cone = files("c.json", {"rank": 2, "rays": [[1, 0], [1, 2]]})
    status, report, _ = run_json(capsys, ["roots", "--cone", cone, "--bound", "2"])
    assert status == 0
    assert {tuple(r["e"]) for r in report["result"]["roots"]} == {(-1, 1), (-1, 2), (1, -1)}
    assert main(["roots", "--cone", cone, "--bound", "2", "--svg"]) == 0
    svg = capsys.readouterr().out
    assert svg.startswith("<svg") and svg.count('fill="black"') == 2
    assert svg.count('fill="white" stroke') == 1


def test_svg_needs_rank_two(capsys, files):
    cone = files("c.json", {"rays": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]})
    assert main(["roots", "--cone", cone, "--svg"]) == 1


def test_classify_and_fibers(capsys, files):
    cone = files("c.json", {"rank": 3, "rays": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]})
    sub = files("s.json", {"basis": [[1, 1, 0], [0, 0, 1]]})
    status, report, _ = run_json(capsys, ["classify", "--cone", cone, "--subtorus", sub,
                                          "--bound", "3"])
    assert status == 0
    assert report["result"]["position"]["tag"] == "InteriorWithRays"
    status, report, _ = run_json(capsys, ["fibers", "--cone", cone, "--subtorus", sub,
                                          "--t-root", "3,-1", "--t-root", "0,2"])
    assert [f["count"] for f in report["result"]["fibers"]] == [4, 2]


def test_lnd_commands(capsys, files):
    cone = files("c.json", {"rays": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]})
    d3 = files("d.json", {"kind": "table", "generators": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
                              "images": [{"terms": [[[0, 1, 1], "1"]]},
                                         {"terms": [[[0, 0, 0], "1"]]}, {"terms": []}]})
    status, report, _ = run_json(capsys, ["lnd", "decompose", "--cone", cone,
                                          "--derivation", d3])
    dec = report["result"]["decomposition"]
    assert status == 0 and sorted(dec["vertices"]) == [[-1, 1, 1], [0, -1, 0]]
    status, report, _ = run_json(capsys, ["lnd", "apply", "--cone", cone, "--derivation",
                                          d3, "--char", "1,0,0"])
    assert report["result"]["output"] == {"terms": [[[0, 1, 1], "1"]]}
    root = files("r.json", {"kind": "root", "e": [-1, 0, 0]})
    status, report, _ = run_json(capsys, ["lnd", "nilpotency", "--cone", cone, "--derivation",
                                          root, "--char", "3,0,0"])
    assert report["result"]["verdict"] == {"verdict": "NilpotentWithin", "n": 4,
                                           "conclusive": True}


@pytest.mark.parametrize("payload, code", [
    ({"rays": [[1, 0], [-1, 0], [0, 1]]}, "cone_invariant"),
    ({"rays": "nope"}, "schema_violation"),
])
def test_domain_errors(capsys, files, payload, code):
    cone = files("c.json", payload)
    status, report, _ = run_json(capsys, ["roots", "--cone", cone])
    assert status == 1 and report["error"]["code"] == code


def test_precondition_error(capsys, files):
    cone = files("c.json", {"rays": [[1, 0], [0, 1]]})
    bad = files("d.json", {"kind": "nhrv", "e1": [1, -1], "e2": [-1, 0], "m_T": [1, -1],
                           "alpha": "1/2", "beta": 3})
    status, report, _ = run_json(capsys, ["lnd", "nilpotency", "--cone", cone,
                                          "--derivation", bad])
    assert status == 1 and report["error"]["code"] == "restriction_mismatch"


def test_subtorus_not_saturated(capsys, files):
    cone = files("c.json", {"rays": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]})
    sub = files("s.json", {"basis": [[2, 0, 0], [0, 1, 0]]})
    status, report, _ = run_json(capsys, ["classify", "--cone", cone, "--subtorus", sub])
    assert status == 1 and report["error"]["code"] == "subtorus_invariant"


def test_text_error_goes_to_stderr(capsys):
    assert main(["surface", "--a", "2", "--b", "4", "--r", "1", "--q", "1"]) == 1
    err = capsys.readouterr().err
    assert err.startswith("error [surface_input]")


def test_run_config_validation():
    with pytest.raises(InputError):
        RunConfig("roots", bound=0)
    RunConfig("cremona", bound=0, options={"n": 2})
    status, report = run(RunConfig("cremona", bound=1, options={"n": 3}))
    assert status == 0 and report["result"]["count"] == 9
