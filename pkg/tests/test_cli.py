import json
import math

import pytest

from fermiosc.cli import ResultRow, emit, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def json_rows(text):
    return [json.loads(line) for line in text.splitlines()]


def test_exact_emits_both_boundary_rows(capsys):
    code, out = run_cli(capsys, "exact", "--beta", "1", "--omega", "1")
    rows = json_rows(out)
    assert code == 0
    assert [r["bc"] for r in rows] == ["antiperiodic", "periodic"]
    assert rows[0]["z_value"] == pytest.approx(1.3678794, abs=5e-8)
    assert rows[1]["z_value"] == pytest.approx(0.6321206, abs=5e-8)
    assert all(r["route"] == "exact" for r in rows)
    assert all("n_steps" not in r for r in rows)


def test_json_field_names_and_order(capsys):
    _, out = run_cli(capsys, "chain", "--beta", "1", "--omega", "1", "--bc", "periodic")
    (row,) = json_rows(out)
    assert list(row) == [
        "route",
        "beta",
        "omega",
        "n_steps",
        "bc",
        "z_value",
        "reference_z",
        "abs_error",
    ]
    assert row["n_steps"] == 16
    assert row["abs_error"] == abs(row["z_value"] - row["reference_z"])


def test_determinant_first_order_example(capsys):
    code, out = run_cli(
        capsys,
        "determinant",
        "--beta", "1",
        "--omega", "1",
        "--steps", "4",
        "--scheme", "first-order",
        "--bc", "antiperiodic",
    )
    (row,) = json_rows(out)
    assert code == 0
    assert row["z_value"] == 1.31640625
    assert row["abs_error"] == pytest.approx(
        1.0 + math.exp(-1.0) - 1.31640625, rel=1e-12
    )


def test_csv_shape(capsys):
    _, out = run_cli(
        capsys, "exact", "--beta", "2", "--omega", "0.5", "--format", "csv"
    )
    lines = out.splitlines()
    assert lines[0] == "route,beta,omega,n_steps,bc,z_value,reference_z,abs_error"
    assert len(lines) == 3
    # n_steps column stays empty for the oracle route
    assert lines[1].split(",")[3] == ""


def test_csv_roundtrips_doubles(capsys):
    _, out = run_cli(
        capsys, "chain", "--beta", "1", "--omega", "1", "--format", "csv",
        "--bc", "antiperiodic",
    )
    value = float(out.splitlines()[1].split(",")[5])
    assert value == 1.0 + math.exp(-1.0)


def test_sweep_row_cardinality(capsys):
    _, out = run_cli(
        capsys,
        "sweep",
        "--beta", "1",
        "--omega", "1",
        "--steps", "2", "4", "8",
        "--scheme", "first-order",
    )
    rows = json_rows(out)
    assert len(rows) == 6
    assert [r["bc"] for r in rows] == ["antiperiodic"] * 3 + ["periodic"] * 3
    assert [r["n_steps"] for r in rows] == [2, 4, 8, 2, 4, 8]


def test_sweep_errors_shrink_monotonically(capsys):
    _, out = run_cli(
        capsys,
        "sweep",
        "--beta", "1",
        "--omega", "1",
        "--steps", "4", "8", "16", "32",
        "--scheme", "first-order",
        "--bc", "antiperiodic",
    )
    errors = [r["abs_error"] for r in json_rows(out)]
    assert all(b < a for a, b in zip(errors, errors[1:]))


def test_exact_scheme_rows_hit_reference(capsys):
    for command in ("chain", "determinant"):
        _, out = run_cli(
            capsys, command, "--beta", "0.7", "--omega", "1.3", "--steps", "9"
        )
        assert all(r["abs_error"] <= 1e-12 for r in json_rows(out))


def test_output_is_deterministic(capsys):
    args = ("sweep", "--beta", "0.5", "2", "--omega", "1", "--steps", "2", "4")
    _, first = run_cli(capsys, *args)
    _, second = run_cli(capsys, *args)
    assert first == second
    assert len(json_rows(first)) == 8


def test_beta_zero_needs_opt_in(capsys):
    with pytest.raises(SystemExit) as err:
        main(["exact", "--beta", "0", "--omega", "1"])
    assert err.value.code == 2


def test_beta_zero_partition_values(capsys):
    code, out = run_cli(
        capsys, "exact", "--beta", "0", "--omega", "1", "--allow-beta-zero"
    )
    rows = json_rows(out)
    assert code == 0
    assert [r["z_value"] for r in rows] == [2.0, 0.0]


def test_chain_rejects_beta_zero_even_with_flag_elsewhere(capsys):
    with pytest.raises(SystemExit) as err:
        main(["chain", "--beta", "0", "--omega", "1"])
    assert err.value.code == 2


def test_unknown_scheme_exits_with_usage_error(capsys):
    with pytest.raises(SystemExit) as err:
        main(["chain", "--beta", "1", "--omega", "1", "--scheme", "cubic"])
    assert err.value.code == 2


def test_oversized_chain_exits_with_usage_error(capsys):
    with pytest.raises(SystemExit) as err:
        main(["chain", "--beta", "1", "--omega", "1", "--steps", "65"])
    assert err.value.code == 2


def test_selftest_passes_and_reports_counts(capsys):
    code, out = run_cli(capsys, "selftest")
    assert code == 0
    lines = out.splitlines()
    assert lines[-1].startswith("selftest: ")
    assert ", 0 failed" in lines[-1]
    assert all(line.startswith("PASS") for line in lines[:-1])


def test_emit_rejects_empty_and_unknown():
    row = ResultRow("exact", 1.0, 1.0, None, "periodic", 1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        emit([], "json")
    with pytest.raises(ValueError):
        emit([row], "yaml")
