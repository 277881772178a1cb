import json
import math

import numpy as np
import pytest

from mixedspec import io
from mixedspec.cli import EXIT_NUMERIC, EXIT_OK, EXIT_SCHEMA, job_schema, main


def run_cli(tmp_path, sub, spec=None, name="out", seed=0, extra=()):
    argv = [sub, "--out", str(tmp_path / name), "--seed", str(seed), *extra]
    if spec is not None:
        path = tmp_path / f"{name}.json"
        path.write_text(spec if isinstance(spec, str) else json.dumps(spec))
        argv += ["--spec", str(path)]
    return main(argv), tmp_path / name


def test_spectra_of_free_potential(tmp_path):
    code, out = run_cli(tmp_path, "spectra", {"params": {"count": 8}})
    assert code == EXIT_OK
    result = io.read_json(out / "result.json")
    assert result["schema_version"] == io.SCHEMA_VERSION
    lam = np.array(result["result"]["eigenvalues"])
    assert np.allclose(lam, np.pi * np.arange(1, 9), atol=1e-9)
    header = (out / "spectrum.csv").read_text().splitlines()[0]
    assert header == "n,lambda,residual"
    assert "inputs_hash" in io.read_json(out / "stamp.json")


@pytest.mark.parametrize("spec", [
    "{not json",
    {"params": {"count": -3}},
    {"bogus": 1},
    {"potential": {"expr": "__import__('os')"}},
    {"potential": {"file": "missing.json"}},
])
def test_malformed_spec_exits_with_schema_code(tmp_path, spec):
    code, out = run_cli(tmp_path, "spectra", spec)
    assert code == EXIT_SCHEMA
    assert not (out / "result.json").exists()


def test_missing_spec_file(tmp_path):
    assert main(["spectra", "--spec", str(tmp_path / "nope.json"), "--out", str(tmp_path / "o")]) == EXIT_SCHEMA


def test_numeric_failure_writes_error_json(tmp_path):
    code, out = run_cli(tmp_path, "reconstruct", {"params": {"count": 10, "modes": 20}})
    assert code == EXIT_NUMERIC
    err = io.read_json(out / "error.json")
    assert err["error"] == "PreconditionError"


def test_sweep_writes_one_table_per_point(tmp_path):
    spec = {"potential": {"expr": "cos(2*pi*x)"}, "sweep": [{"count": 4}, {"count": 6}]}
    code, out = run_cli(tmp_path, "spectra", spec, extra=("--threads", "2"))
    assert code == EXIT_OK
    result = io.read_json(out / "result.json")
    assert [len(p["result"]["eigenvalues"]) for p in result["sweep"]] == [4, 6]
    assert (out / "spectrum_0.csv").exists() and (out / "spectrum_1.csv").exists()


@pytest.mark.parametrize("sub,spec", [
    ("demo-borg", {"params": {"count": 30, "modes": 20, "grid": 128}}),
    ("demo-symmetric", {"params": {"count": 10}}),
    ("demo-condition-free", {"params": {"count": 15}}),
    ("pair-make", {"params": {"window": 100}}),
])
def test_outputs_are_byte_identical_across_runs(tmp_path, sub, spec):
    code1, out1 = run_cli(tmp_path, sub, spec, name="a", seed=7)
    code2, out2 = run_cli(tmp_path, sub, spec, name="b", seed=7)
    assert code1 == code2 == EXIT_OK
    files = sorted(p.name for p in out1.iterdir())
    assert files == sorted(p.name for p in out2.iterdir())
    for name in files:
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes(), name


def test_pair_roundtrip_through_files(tmp_path):
    code, out = run_cli(tmp_path, "pair-make", {"params": {"window": 100}})
    assert code == EXIT_OK
    code, out2 = run_cli(tmp_path, "pair-verify", {"pair": str(out / "result.json")}, name="v")
    assert code == EXIT_OK
    assert io.read_json(out2 / "result.json")["result"]["passed"]


def test_every_subcommand_has_a_closed_schema():
    from mixedspec.cli import PIPELINES

    for sub in PIPELINES:
        schema = job_schema(sub)
        assert schema["additionalProperties"] is False
        assert schema["properties"]["params"]["additionalProperties"] is False


def test_float_formatting_and_nan():
    text = io.dumps({"x": 1 / 3, "bad": math.nan, "inf": math.inf, "z": 1 + 2j, "arr": np.arange(2)})
    data = json.loads(text)
    assert data["x"] == 0.333333333333
    assert data["bad"] is None and data["inf"] is None
    assert data["z"] == {"re": 1.0, "im": 2.0}
    assert data["arr"] == [0, 1]


def test_csv_blank_for_nonfinite(tmp_path):
    path = io.write_csv(tmp_path / "t.csv", ["a", "b"], [(1.0, math.nan)])
    assert path.read_text() == "a,b\n1,\n"


def test_inputs_hash_depends_on_seed_and_spec():
    h = io.inputs_hash({"a": 1}, 0)
    assert h == io.inputs_hash({"a": 1}, 0)
    assert h != io.inputs_hash({"a": 1}, 1)
    assert h != io.inputs_hash({"a": 2}, 0)
