"""
Command-Line Tests

Runs lxmix.main end to end on small feasible sets and checks printed
summaries, written files and exit codes.
"""

import pandas as pd
import pytest

import lxmix
from app.core.mixer_constants import CsvColumns
from app.utils.error_handling import (
    EXIT_DOMAIN_ERROR,
    EXIT_OK,
    EXIT_UNEXPECTED,
    EXIT_VALIDATION_FAILED,
)
from tests.fixtures.reference_sets import EXPECTED_PAIR_COSTS, EXPECTED_SEVEN_STATE_COSTS, create_seven_state_set


@pytest.fixture
def one_hot_file(write_feasible_file):
    return write_feasible_file(["100", "010", "001"], name="one_hot.txt")


@pytest.fixture
def one_hot_plan_file(one_hot_file, tmp_path):
    path = tmp_path / "plan.json"
    assert lxmix.main(["synth", "--input", str(one_hot_file), "--output", str(path)]) == EXIT_OK
    return path


class TestSynth:
    def test_full_space_is_free(self, write_feasible_file, capsys):
        path = write_feasible_file(["00", "01", "10", "11"])
        assert lxmix.main(["synth", "--input", str(path)]) == EXIT_OK
        assert "total_cost: 0" in capsys.readouterr().out

    def test_plan_file_and_table(self, one_hot_file, tmp_path, capsys):
        path = tmp_path / "plan.json"
        assert lxmix.main(["synth", "--input", str(one_hot_file), "--output", str(path)]) == EXIT_OK
        out = capsys.readouterr().out
        assert path.exists()
        assert "logical_x" in out
        assert "total_cost: 8" in out
        assert "chain_cost:" in out

    @pytest.mark.parametrize(
        "extra, key",
        [
            ([], "chain_sorted_restricted"),
            (["--no-restrict"], "chain_sorted_unrestricted"),
            (["--no-restrict", "--chain-order", "input"], "chain_input_unrestricted"),
        ],
    )
    def test_chain_baseline(self, write_feasible_file, capsys, extra, key):
        path = write_feasible_file(create_seven_state_set().bitstrings)
        assert lxmix.main(["synth", "--input", str(path), *extra]) == EXIT_OK
        assert f"chain_cost: {EXPECTED_SEVEN_STATE_COSTS[key]}\n" in capsys.readouterr().out

    def test_missing_input_file(self, tmp_path):
        assert lxmix.main(["synth", "--input", str(tmp_path / "absent.txt")]) == EXIT_DOMAIN_ERROR

    def test_single_state(self, write_feasible_file):
        path = write_feasible_file(["101"])
        assert lxmix.main(["synth", "--input", str(path)]) == EXIT_DOMAIN_ERROR

    def test_unexpected_error(self, one_hot_file, mocker):
        mocker.patch("app.services.mixer_commands.synthesize", side_effect=RuntimeError("boom"))
        assert lxmix.main(["synth", "--input", str(one_hot_file)]) == EXIT_UNEXPECTED


class TestCostTable:
    def test_csv_columns_and_costs(self, write_feasible_file, tmp_path):
        path = write_feasible_file(["10010", "01110", "10011", "11101", "00110", "01010"])
        output = tmp_path / "costs.csv"
        assert lxmix.main(["cost-table", "--input", str(path), "--output", str(output), "--seed", "9"]) == EXIT_OK
        frame = pd.read_csv(output, dtype={"state_a": str, "state_b": str, "logical_x": str})
        assert list(frame.columns) == CsvColumns.COST_TABLE
        assert frame["restricted_cost"].tolist() == EXPECTED_PAIR_COSTS["restricted"]
        assert set(frame["seed"]) == {9}


class TestStructuredFamilies:
    def test_multikhot(self, capsys):
        assert lxmix.main(["multikhot", "--n", "5", "--k1", "0", "--k2", "1"]) == EXIT_OK
        assert "total_cost: 24" in capsys.readouterr().out

    def test_inverted_weight_range(self):
        assert lxmix.main(["multikhot", "--n", "5", "--k1", "3", "--k2", "1"]) == EXIT_DOMAIN_ERROR

    def test_khot(self, capsys):
        assert lxmix.main(["khot", "--n", "4", "--k", "2"]) == EXIT_OK
        assert "total_cost:" in capsys.readouterr().out

    def test_product(self, write_feasible_file, tmp_path, capsys):
        write_feasible_file(["10", "01"], name="pair.txt")
        write_feasible_file(["100", "010", "001"], name="onehot.txt")
        spec = tmp_path / "product.txt"
        spec.write_text("pair.txt 2\nonehot.txt 3\n", encoding="utf-8")
        assert lxmix.main(["product", "--input", str(spec)]) == EXIT_OK
        assert "total_cost: 10" in capsys.readouterr().out


class TestCircuitAndValidation:
    def test_emit_circuit(self, one_hot_plan_file, tmp_path, capsys):
        capsys.readouterr()
        output = tmp_path / "circuit.txt"
        assert lxmix.main(["emit-circuit", "--plan", str(one_hot_plan_file), "--beta", "0.3", "--output", str(output)]) == EXIT_OK
        assert "cx: 8" in capsys.readouterr().out
        assert output.read_text(encoding="utf-8").startswith("qubits 3")

    def test_validate(self, one_hot_plan_file, capsys):
        capsys.readouterr()
        assert lxmix.main(["validate", "--plan", str(one_hot_plan_file)]) == EXIT_OK
        out = capsys.readouterr().out
        assert "transitions: true" in out
        assert "valid: true" in out

    def test_validate_corrupted(self, one_hot_plan_file):
        assert lxmix.main(["validate", "--plan", str(one_hot_plan_file), "--corrupt"]) == EXIT_VALIDATION_FAILED

    def test_validate_wrong_feasible_file(self, one_hot_plan_file, write_feasible_file):
        other = write_feasible_file(["10", "01"], name="other.txt")
        assert lxmix.main(["validate", "--plan", str(one_hot_plan_file), "--input", str(other)]) == EXIT_DOMAIN_ERROR


@pytest.mark.slow
class TestBatchCommands:
    def test_stats(self, tmp_path):
        output, detail = tmp_path / "stats.csv", tmp_path / "detail.csv"
        argv = ["stats", "--n", "3", "--sizes", "2", "3", "--trials", "2",
                "--output", str(output), "--detail-output", str(detail)]
        assert lxmix.main(argv) == EXIT_OK
        assert list(pd.read_csv(output).columns) == CsvColumns.STATS_AGGREGATE
        assert len(pd.read_csv(detail)) == 4

    def test_maxcut_demo(self, tmp_path):
        instance = tmp_path / "instance.txt"
        instance.write_text("blocks 2 2\n0 1 1.0\n1 2 2.0\n2 3 0.5\n", encoding="utf-8")
        output = tmp_path / "maxcut.csv"
        argv = ["maxcut-demo", "--instance", str(instance), "--depths", "0", "1", "--output", str(output)]
        assert lxmix.main(argv) == EXIT_OK
        frame = pd.read_csv(output)
        assert list(frame.columns) == CsvColumns.MAXCUT
        assert frame["depth"].tolist() == [0, 1]
        assert (frame["ratio"] <= 1 + 1e-9).all()
