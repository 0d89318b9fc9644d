import csv
import io
import json
import math
import subprocess
import sys

import pytest

from dyadlab.cli import COLUMN_HELP, SCHEMA_VERSION, SWEEP_COLUMNS, build_parser, main
from dyadlab.config import ExperimentConfig, load_config


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return str(path)


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_constants_two_valued(tmp_path, capsys):
    spec = write(tmp_path, "w.json", {"depth": 8, "weight": {"family": "two_valued", "t": 3}})
    code, out, _ = run(["constants", "--spec", spec], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["ap"] == pytest.approx(4 / 3, rel=1e-12)
    assert list(data) == sorted(data)


def test_constants_ones(tmp_path, capsys):
    spec = write(tmp_path, "w.json", {"depth": 4, "weight": {"family": "raw", "values": [1.0] * 16}})
    data = json.loads(run(["constants", "--spec", spec], capsys)[1])
    assert data["rhi_exponent"] == 1 + 1 / 4096
    for key in ("ap", "ainfty_hruscev", "ainfty_wilson", "dual_ap", "a_p_pair", "b_p_pair", "a1"):
        assert data[key] == 1.0


def test_constants_raw(tmp_path, capsys):
    spec = write(tmp_path, "w.json", {"depth": 1, "weight": {"family": "raw", "values": [4, 1]}})
    data = json.loads(run(["constants", "--spec", spec], capsys)[1])
    assert data["ap"] == pytest.approx(25 / 16)


def test_constants_csv_and_bounds(tmp_path, capsys):
    spec = write(tmp_path, "w.json", {"depth": 6, "weight": {"family": "power", "alpha": -0.5}})
    code, out, _ = run(["constants", "--spec", spec, "--format", "csv", "--p", "3"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and float(rows[0]["p"]) == 3.0
    data = json.loads(run(["constants", "--spec", spec, "--with-bounds"], capsys)[1])
    entries = {b["theorem"]: b for b in data["bounds"]}
    assert {"mixed_maximal", "a2_shift", "commutator", "bmo_of_log"} <= set(entries)
    assert entries["bmo_of_log"]["measured"] <= entries["bmo_of_log"]["core"]
    for entry in data["bounds"]:
        assert set(entry) <= {"theorem", "core", "explicit_constant", "measured", "fitted_constant"}


@pytest.mark.parametrize(
    "content",
    [
        "not json",
        {"depth": 3},
        {"depth": 3, "weight": {"family": "two_valued", "t": -1}},
        {"depth": 3, "weight": {"family": "power", "alpha": -2}},
        {"depth": 2, "weight": {"family": "raw", "values": [1, 2, 3]}},
        {"depth": 2, "weight": {"family": "two_valued", "t": 2, "E": [0, 1, 2, 3]}},
    ],
)
def test_malformed_spec(tmp_path, capsys, content):
    spec = write(tmp_path, "bad.json", content)
    code, out, err = run(["constants", "--spec", spec], capsys)
    assert code != 0
    assert "error" in err and out == ""


def test_missing_spec(capsys):
    code, _, err = run(["constants"], capsys)
    assert code == 2 and "spec" in err


def test_output_file(tmp_path, capsys):
    spec = write(tmp_path, "w.json", {"depth": 3, "weight": {"family": "two_valued", "t": 5}})
    out = tmp_path / "r.json"
    assert main(["constants", "--spec", spec, "--out", str(out)]) == 0
    assert json.loads(out.read_text())["ap"] == pytest.approx(36 / 20)


def test_sweep_two_valued(capsys):
    code, out, _ = run(["sweep"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert tuple(rows[0]) == SWEEP_COLUMNS
    assert [float(r["param"]) for r in rows] == [2.0 ** k for k in range(1, 17)]
    for r in rows:
        t = float(r["param"])
        assert int(r["schema_version"]) == SCHEMA_VERSION
        assert float(r["ainfty_hruscev"]) == pytest.approx((t + 1) / (2 * math.sqrt(t)), rel=1e-9)
        assert float(r["ap"]) == pytest.approx((t + 1) ** 2 / (4 * t), rel=1e-9)
    ratio = [float(r["ratio_norm_over_ap"]) for r in rows if float(r["param"]) >= 16]
    assert all(a > b for a, b in zip(ratio, ratio[1:]))


def test_sweep_power_within_factor_four(capsys):
    code, out, _ = run(["sweep", "--family", "power", "--values=-0.5,-0.75,-0.9,-0.95,-0.99"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    for r in rows:
        alpha = float(r["param"])
        closed = 1 / (1 + alpha)
        assert closed / 4 <= float(r["ap"]) <= 4 * closed
    aps = [float(r["ap"]) for r in rows]
    assert aps == sorted(aps)


def test_sweep_deterministic_and_parallel(capsys):
    _, a, _ = run(["sweep", "--values", "4,64,1024"], capsys)
    _, b, _ = run(["sweep", "--values", "4,64,1024"], capsys)
    _, c, _ = run(["sweep", "--values", "4,64,1024", "--workers", "2"], capsys)
    assert a == b == c


def test_sweep_json(capsys):
    data = json.loads(run(["sweep", "--values", "4", "--format", "json", "--depth", "5"], capsys)[1])
    assert data["schema_version"] == SCHEMA_VERSION
    assert data["rows"][0]["depth"] == 5


def test_help_documents_columns():
    text = build_parser().format_help()
    for col in SWEEP_COLUMNS[1:]:
        assert col.split("_")[0] in COLUMN_HELP
    assert "schema version" in text


def test_shift_norm(tmp_path, capsys):
    spec = write(tmp_path, "w.json", {"depth": 6, "weight": {"family": "two_valued", "t": 16}})
    shift = write(tmp_path, "s.json", {"kind": "random", "m": 1, "n": 1, "seed": 3})
    code, out, _ = run(["shift-norm", "--spec", spec, "--shift", shift, "--budget", "10"], capsys)
    data = json.loads(out)
    assert code == 0
    assert data["estimate_lower_bound"] <= data["exact_l2_norm"] * (1 + 1e-9)
    assert data["bounds"][0]["fitted_constant"] == pytest.approx(data["exact_l2_norm"] / data["bounds"][0]["core"])


def test_shift_norm_bad_shift(tmp_path, capsys):
    spec = write(tmp_path, "w.json", {"depth": 3, "weight": {"family": "two_valued", "t": 2}})
    shift = write(tmp_path, "s.json", {"kind": "random", "m": 3, "n": 3})
    code, _, err = run(["shift-norm", "--spec", spec, "--shift", shift], capsys)
    assert code == 2 and "shift" in err


def test_verify_filter(capsys):
    code, out, err = run(["verify", "--theorems", "rhi,llogl", "--format", "csv"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["name"] for r in rows] == ["rhi", "llogl"]
    assert "[PASS] rhi" in err


def test_verify_unknown_check(capsys):
    code, _, err = run(["verify", "--theorems", "nope"], capsys)
    assert code == 2


def test_verify_exit_code_tracks_hard_failures(capsys):
    code, out, _ = run(["verify", "--theorems", "rhi_negative_control"], capsys)
    data = json.loads(out)
    assert code == (0 if data["all_hard_passed"] else 1)


def test_verify_reproducible(capsys):
    _, a, _ = run(["verify", "--theorems", "m0_bound,principal_packing"], capsys)
    _, b, _ = run(["verify", "--theorems", "m0_bound,principal_packing"], capsys)
    assert a == b


def test_config_file(tmp_path, capsys):
    cfg = write(
        tmp_path,
        "cfg.json",
        {"depth": 5, "weight": {"family": "two_valued", "t": 9}, "sweep": {"family": "power", "values": [-0.5]}},
    )
    data = json.loads(run(["--config", cfg, "constants"], capsys)[1])
    assert data["ap"] == pytest.approx(100 / 36)
    rows = list(csv.DictReader(io.StringIO(run(["--config", cfg, "sweep"], capsys)[1])))
    assert rows[0]["family"] == "power" and rows[0]["depth"] == "5"
    assert load_config(cfg).depth == 5


def test_config_validation(tmp_path):
    with pytest.raises(ValueError):
        ExperimentConfig(sweep_family="bogus")
    with pytest.raises(ValueError):
        ExperimentConfig(p=1.0)
    with pytest.raises(ValueError):
        load_config(write(tmp_path, "c.json", "[1, 2]"))


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "dyadlab.cli", "sweep", "--values", "3", "--depth", "4"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert proc.stdout.startswith("schema_version,")
