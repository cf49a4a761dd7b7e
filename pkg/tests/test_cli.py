import json
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from pairspace import scenario as scn
from pairspace import spectra
from pairspace import verify
from pairspace.cli import main
from pairspace.errors import ParseError, UnknownKind

PAIR = {
    "schema_version": "1",
    "seed": 11,
    "pair": {"plus": [[1, 0], [0, 0]], "minus": [[1, 0], [0, 0]]},
    "observables": [{"kind": "spin"}, {"kind": "charge", "q": 1}],
    "frames": [{"beta": [[[0, 0], [1, 0]], [[-1, 0], [0, 0]]], "mode": "OperatorInvariant"}],
    "measurements": [{"sector": "+", "outcome": "sample"}, {"sector": "-", "outcome": "sample"}],
}

COMPOSITE = {
    "schema_version": "1",
    "seed": 3,
    "composite": {"factors": [
        {"sector": "+", "components": [[1, 0], [0, 0]]},
        {"sector": "-", "components": [[0.6, 0], [0, 0.8]]},
    ]},
    "observables": [{"kind": "spin"}],
    "frames": [{"beta": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]],
                "translation": [0, 0, 0, 1.4142135623730951], "mode": "MatrixInvariant"}],
    "measurements": [{"slot": 1, "outcome": "sample"}],
}


def _write(tmp_path, data, name="sc.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data, indent=2))
    return p


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_scenario_spin_values(tmp_path, capsys):
    code, out, _ = _run(["scenario", "run", str(_write(tmp_path, PAIR))], capsys)
    assert code == 0
    rep = json.loads(out)
    assert set(rep) == {"version", "checks", "scenario_steps"}
    spin = [s for s in rep["scenario_steps"] if s["step"] == "observable" and s["index"] == 0][0]
    assert spin["expectation+"] == 0.5 and spin["expectation-"] == -0.5
    for c in rep["checks"]:
        assert set(c) == {"id", "paper_eq", "residual", "pass"}
    frame = [s for s in rep["scenario_steps"] if s["step"] == "frame"][0]
    assert frame["invariance_report"]["pass"]


def test_scenario_byte_identical(tmp_path, capsys):
    for data in (PAIR, COMPOSITE):
        path = _write(tmp_path, data)
        outs = []
        for k in range(2):
            dest = tmp_path / f"out{k}.json"
            assert _run(["scenario", "run", str(path), "--out", str(dest)], capsys)[0] == 0
            outs.append(dest.read_bytes())
        assert outs[0] == outs[1]


def test_composite_scenario(tmp_path, capsys):
    code, out, _ = _run(["scenario", "run", str(_write(tmp_path, COMPOSITE))], capsys)
    assert code == 0
    steps = json.loads(out)["scenario_steps"]
    prep = steps[0]
    assert prep["step"] == "prepare"
    assert prep["signed_value"] == pytest.approx(-1.0)
    assert prep["trace"] == pytest.approx(1.0)


def test_seed_changes_sampling_only_through_seed(tmp_path):
    a = scn.run(scn.load(json.dumps(PAIR)))
    b = scn.run(scn.load(json.dumps(PAIR)))
    assert a == b


def test_parse_errors_carry_line_and_field(tmp_path, capsys):
    bad = dict(PAIR, pair={"plus": [[1, 0], "oops"], "minus": [[1, 0], [0, 0]]})
    text = json.dumps(bad, indent=2)
    with pytest.raises(ParseError) as exc:
        scn.load(text)
    assert exc.value.field is not None and "plus" in exc.value.field
    assert exc.value.line is not None
    assert '"plus"' in text.splitlines()[exc.value.line - 1]
    code, _, err = _run(["scenario", "run", str(_write(tmp_path, bad))], capsys)
    assert code == 2 and "ParseError" in err
    with pytest.raises(ParseError) as exc:
        scn.load('{"schema_version": "1",\n "seed": 1,\n "pair": [}')
    assert exc.value.line == 3
    with pytest.raises(ParseError):
        scn.load(json.dumps(dict(PAIR, schema_version="9")))
    with pytest.raises(ParseError):
        scn.load(json.dumps(dict(PAIR, extra=1)))


def test_semantic_errors_use_module_names(tmp_path, capsys):
    bad = dict(PAIR, observables=[{"kind": "flavour"}])
    code, _, err = _run(["scenario", "run", str(_write(tmp_path, bad))], capsys)
    assert code == 2 and "UnknownKind" in err
    bad = dict(PAIR, frames=[{"beta": [[[2, 0], [0, 0]], [[0, 0], [0.5, 0]]]}])
    code, _, err = _run(["scenario", "run", str(_write(tmp_path, bad))], capsys)
    assert code == 2 and "NotSpecialUnitary" in err
    code, _, err = _run(["scenario", "run", str(tmp_path / "missing.json")], capsys)
    assert code == 2


def test_verify_stock_and_filter(capsys):
    code, out, err = _run(["verify"], capsys)
    assert code == 0, err
    rep = json.loads(out)
    assert len(rep["checks"]) == len(verify.REGISTRY)
    assert all(c["pass"] for c in rep["checks"])
    code, out, _ = _run(["verify", "--filter", "group"], capsys)
    ids = [c["id"] for c in json.loads(out)["checks"]]
    assert code == 0 and ids and all(i.startswith("group.") for i in ids)
    assert _run(["verify", "--filter", "nothing-here"], capsys)[0] == 2


def test_verify_corrupt_hook(capsys):
    target = verify.select("density")[0][1].id
    code, out, err = _run(["verify", "--filter", "density", "--corrupt", target], capsys)
    assert code == 1
    assert f"FAIL {target}" in err
    failed = [c for c in json.loads(out)["checks"] if not c["pass"]]
    assert [c["id"] for c in failed] == [target]
    assert _run(["verify", "--corrupt", "no.such"], capsys)[0] == 2


def test_verify_deterministic(tmp_path, capsys):
    outs = []
    for k in range(2):
        dest = tmp_path / f"v{k}.json"
        assert _run(["verify", "--samples", "5", "--out", str(dest)], capsys)[0] == 0
        outs.append(dest.read_bytes())
    assert outs[0] == outs[1]


def test_bad_arguments(capsys):
    assert _run(["verify", "--tol", "-1"], capsys)[0] == 2
    assert _run(["bogus"], capsys)[0] == 2


def test_env_tolerance(monkeypatch, capsys):
    monkeypatch.setenv("PAIRSPACE_TOL", "not-a-number")
    assert _run(["verify", "--filter", "numerics"], capsys)[0] == 2


def test_spectra_matrices(capsys):
    code, out, _ = _run(["spectra", "spin"], capsys)
    assert code == 0
    rows = [line.split() for line in out.splitlines()[1:5]]
    assert [r[i] for i, r in enumerate(rows)] == ["1/2", "-1/2", "-1/2", "1/2"]
    code, out, _ = _run(["spectra", "conjugation"], capsys)
    rows = [line.split() for line in out.splitlines()[1:5]]
    assert rows == [["0", "0", "0", "-1"], ["0", "0", "-1", "0"], ["0", "1", "0", "0"],
                    ["1", "0", "0", "0"]]
    code, out, _ = _run(["spectra", "M"], capsys)
    rows = [line.split() for line in out.splitlines()[1:5]]
    r = "0.707106781187"
    assert rows[0] == [r, "0", "-" + r, "0"]
    assert rows[3] == ["0", r, "0", r]
    code, out, _ = _run(["spectra", "charge", "--q", "1/3"], capsys)
    assert out.splitlines()[1].split()[0] == "1/3"
    code, _, err = _run(["spectra", "quark"], capsys)
    assert code == 2 and "UnknownKind" in err


def test_spectra_all_kinds_render():
    for kind in spectra.KINDS:
        assert spectra.render(kind).endswith("\n")
    with pytest.raises(UnknownKind):
        spectra.table("nope")


def test_format_entries():
    assert spectra.format_real(0.5) == "1/2"
    assert spectra.format_real(-0.0) == "0"
    assert spectra.format_real(float(Fraction(2, 3))) == "2/3"
    assert spectra.format_real(np.sqrt(2)) == "1.414213562373"
    assert spectra.format_entry(1j) == "i"
    assert spectra.format_entry(-0.5j) == "-1/2i"
    assert spectra.format_entry(1 - 1j) == "1-i"


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "pairspace", "spectra", "g"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout.splitlines()[0] == "g:"
