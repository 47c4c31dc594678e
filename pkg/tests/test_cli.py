"""End-to-end tests for the command-line interface."""

import json
import shutil
from pathlib import Path

import pytest

from pph.cli import main

FIXTURES = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr().out
    return status, out


def run_report(capsys, *argv):
    status, out = run(capsys, *argv)
    return status, json.loads(out)


# ── validate ───────────────────────────────────────────────────────


def test_validate_good_space(capsys):
    status, rep = run_report(capsys, "validate", str(FIXTURES / "line_space.json"))
    assert status == 0
    assert rep["exit_status"] == 0
    assert [r["name"] for r in rep["records"]] == ["PM1", "PM2", "PM3", "PM4"]
    assert all(r["passed"] for r in rep["records"])


def test_validate_asymmetric_space_exits_two(capsys):
    status, rep = run_report(
        capsys, "validate", str(FIXTURES / "space_asymmetric.json")
    )
    assert status == 2
    pm3 = next(r for r in rep["records"] if r["name"] == "PM3")
    assert not pm3["passed"]
    assert pm3["witness"] == ["0", "1"]


def test_validate_malformed_file_exits_one(capsys):
    status, _ = run(capsys, "validate", str(FIXTURES / "malformed.json"))
    assert status == 1


def test_validate_missing_file_exits_one(capsys):
    status, _ = run(capsys, "validate", str(FIXTURES / "no_such_file.json"))
    assert status == 1


# ── hausdorff ──────────────────────────────────────────────────────


def test_hausdorff_singletons_emit_entry(capsys):
    status, rep = run_report(
        capsys, "hausdorff", str(FIXTURES / "line_space.json"),
        "--set-a", "0", "--set-b", "1",
    )
    assert status == 0
    assert rep["distributions"]["hausdorff"]["breakpoints"] == [1.0]


def test_hausdorff_equal_sets_emit_maximal(capsys):
    status, rep = run_report(
        capsys, "hausdorff", str(FIXTURES / "line_space.json"),
        "--set-a", "0,1", "--set-b", "0,1",
    )
    assert status == 0
    assert rep["distributions"]["hausdorff"]["breakpoints"] == [0.0]


def test_hausdorff_worked_example(capsys):
    status, rep = run_report(
        capsys, "hausdorff", str(FIXTURES / "line_space.json"),
        "--set-a", "0", "--set-b", "1,3",
    )
    assert status == 0
    assert rep["distributions"]["hausdorff"]["breakpoints"] == [3.0]
    assert rep["distributions"]["excess_ab"]["breakpoints"] == [1.0]
    assert rep["distributions"]["excess_ba"]["breakpoints"] == [3.0]


def test_hausdorff_unknown_label_exits_two(capsys):
    status, _ = run(
        capsys, "hausdorff", str(FIXTURES / "line_space.json"),
        "--set-a", "0", "--set-b", "9",
    )
    assert status == 2


def test_hausdorff_writes_curves(capsys, tmp_path):
    out = tmp_path / "run"
    status, _ = run(
        capsys, "hausdorff", str(FIXTURES / "line_space.json"),
        "--set-a", "0", "--set-b", "1,3", "--out", str(out),
    )
    assert status == 0
    curve = (out / "hausdorff.dat").read_text()
    assert curve.startswith("# hausdorff\n# x value\n")
    assert (out / "report.json").exists()


# ── limit ──────────────────────────────────────────────────────────


def test_limit_eventually_constant(capsys):
    status, rep = run_report(
        capsys, "limit", str(FIXTURES / "line_space.json"),
        str(FIXTURES / "sets_eventually_constant.json"),
    )
    assert status == 0
    assert rep["limit"] == ["0", "1"]
    assert rep["tail_closure_form"] == rep["dilation_form"]
    assert min(rep["distance_series"]) <= 1e-6
    assert rep["chain"]["points"]


def test_limit_alternating_exits_two(capsys):
    status, rep = run_report(
        capsys, "limit", str(FIXTURES / "line_space.json"),
        str(FIXTURES / "sets_alternating.json"),
    )
    assert status == 2
    chain = next(r for r in rep["records"] if r["name"] == "cauchy_chain")
    assert chain["witness"]["level"] == 1


# ── espace ─────────────────────────────────────────────────────────


def test_espace_builds_half_step_space(capsys, tmp_path):
    out = tmp_path / "es"
    status, rep = run_report(
        capsys, "espace", str(FIXTURES / "samples_pair.csv"), "--out", str(out),
    )
    assert status == 0
    saved = json.loads((out / "space.json").read_text())
    assert saved["points"] == ["p", "q"]
    entry = saved["dist"][0][1]
    assert entry["breakpoints"] == [1.0, 3.0]
    assert entry["values"] == [0.5, 1.0]


def test_espace_identical_columns_exit_two(capsys):
    status, rep = run_report(
        capsys, "espace", str(FIXTURES / "samples_identical.csv")
    )
    assert status == 2
    assert rep["records"][0]["name"] == "PM2"


def test_espace_ragged_csv_exits_one(capsys):
    status, _ = run(capsys, "espace", str(FIXTURES / "samples_ragged.csv"))
    assert status == 1


def test_espace_duplicate_sample_index_exits_one(capsys, tmp_path):
    bad = tmp_path / "dup.csv"
    bad.write_text("label,sample_index,coord_0\np,0,0.0\np,0,1.0\nq,0,2.0\n")
    status, _ = run(capsys, "espace", str(bad))
    assert status == 1


# ── axioms ─────────────────────────────────────────────────────────


@pytest.mark.parametrize("kind", ["min", "w", "prod", "convmin"])
def test_axioms_full_suite_exits_zero(capsys, kind):
    status, rep = run_report(capsys, "axioms", "--tau", kind)
    assert status == 0
    assert rep["summary"]["failed"] == 0


def test_axioms_expected_fail_records(capsys):
    _, rep = run_report(capsys, "axioms", "--tau", "w")
    serstnev = next(
        r for r in rep["records"] if r["name"] == "serstnev_inequality"
    )
    assert not serstnev["passed"]
    assert serstnev["expected_fail"]

    _, rep = run_report(capsys, "axioms", "--tau", "convmin")
    luk = next(r for r in rep["records"] if r["name"] == "lukasiewicz_bound")
    assert not luk["passed"]
    assert luk["expected_fail"]
    ser = next(r for r in rep["records"] if r["name"] == "serstnev_inequality")
    assert ser["passed"]


# ── reproducibility and config ─────────────────────────────────────


def test_reports_byte_identical_across_runs(capsys):
    cases = [
        ("validate", str(FIXTURES / "line_space.json")),
        ("hausdorff", str(FIXTURES / "line_space.json"),
         "--set-a", "0", "--set-b", "1,3"),
        ("limit", str(FIXTURES / "line_space.json"),
         str(FIXTURES / "sets_eventually_constant.json")),
        ("espace", str(FIXTURES / "samples_pair.csv")),
        ("axioms", "--tau", "convmin", "--seed", "3"),
    ]
    for argv in cases:
        _, first = run(capsys, *argv)
        _, second = run(capsys, *argv)
        assert first == second, argv[0]


def test_bad_grid_exits_one(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["axioms", "--tau", "min", "--eps-grid", "0.1,0.5"])
    assert exc.value.code == 1


def test_seed_recorded_in_report(capsys):
    _, rep = run_report(capsys, "axioms", "--tau", "min", "--seed", "17")
    assert rep["config"]["seed"] == 17


def test_max_triples_env_recorded(capsys, monkeypatch):
    monkeypatch.setenv("PPH_MAX_TRIPLES", "100")
    _, rep = run_report(capsys, "validate", str(FIXTURES / "line_space.json"))
    assert rep["config"]["max_triples"] == 100
