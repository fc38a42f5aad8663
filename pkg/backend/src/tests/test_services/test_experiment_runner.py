"""
Experiment Runner Tests
"""

import pytest

from app.core.exceptions import FeasibleSetError, SelectionError
from app.core.mixer_constants import CsvColumns
from app.mixer.compose import multi_k_hot_plan
from app.mixer.simqaoa import MaxcutInstance, QaoaOptions
from app.mixer.trotter import SynthesisOptions, synthesize
from app.services.experiment_runner import (
    block_plan,
    cost_table_frame,
    run_maxcut_demo,
    run_stats,
    run_validity_sweep,
)


class TestCostTableFrame:
    def test_first_row(self, five_qubit_set):
        frame = cost_table_frame(five_qubit_set, seed=7)
        assert list(frame.columns) == CsvColumns.COST_TABLE
        first = frame.iloc[0]
        assert (first["pair"], first["state_a"], first["state_b"], first["logical_x"]) == ("C1", "10010", "01110", "11100")
        assert (first["unrestricted_cost"], first["restricted_cost"]) == (96, 10)
        assert (frame["seed"] == 7).all()


class TestStats:
    """Chain vs optimal vs restricted-optimal over random sets"""

    def test_cost_ordering(self):
        detail, aggregate = run_stats(3, [2, 4], trials=2, seed=1)
        assert list(detail.columns) == CsvColumns.STATS_DETAIL
        assert len(detail) == 4
        assert (detail["restricted_cost"] <= detail["optimal_cost"]).all()
        assert (detail["optimal_cost"] <= detail["chain_cost"]).all()
        assert list(aggregate.columns) == CsvColumns.STATS_AGGREGATE
        assert len(aggregate) == 6
        assert set(aggregate["metric"]) == {"chain", "optimal", "restricted"}
        assert (aggregate["trials"] == 2).all()

    @pytest.mark.slow
    def test_five_qubit_statistics(self):
        detail, _ = run_stats(5, [4, 8, 16, 32], trials=3, seed=42)
        assert len(detail) == 12
        means = detail.groupby("size")[["chain_cost", "optimal_cost", "restricted_cost"]].mean()
        assert (means["optimal_cost"] <= means["chain_cost"]).all()
        assert (means["restricted_cost"] <= means["optimal_cost"]).all()
        assert (detail.loc[detail["size"] == 32, "optimal_cost"] == 0).all()

    def test_trials_are_reproducible(self):
        first, _ = run_stats(3, [3], trials=2, seed=4)
        second, _ = run_stats(3, [3], trials=2, seed=4)
        assert first.equals(second)

    @pytest.mark.parametrize("sizes", [[1], [9]])
    def test_size_range(self, sizes):
        with pytest.raises(FeasibleSetError):
            run_stats(3, sizes, trials=1, seed=0)


class TestValiditySweep:
    def test_plans_preserve_and_controls_leak(self):
        frame = run_validity_sweep(3, [3, 4], trials=2, seed=2)
        assert len(frame) == 4
        assert (frame["max_leakage"] <= 1e-10).all()
        assert frame["transitions"].all()
        controls = frame["control_leakage"].dropna()
        assert (controls > 1e-6).all()
        assert frame["error"].isna().all()

    def test_failed_trials_are_reported(self, mocker):
        mocker.patch(
            "app.services.experiment_runner.synthesize", side_effect=SelectionError("cannot connect")
        )
        frame = run_validity_sweep(3, [3], trials=2, seed=2, n_jobs=1)
        assert list(frame.columns) == CsvColumns.VALIDITY
        assert len(frame) == 2
        assert (frame["error"] == "SELECTION").all()
        assert not frame["transitions"].any()
        assert frame["max_leakage"].isna().all()

    def test_parallel_matches_serial(self):
        serial = run_validity_sweep(3, [4], trials=2, seed=5, n_jobs=1)
        parallel = run_validity_sweep(3, [4], trials=2, seed=5, n_jobs=2)
        assert serial.equals(parallel)

    @pytest.mark.slow
    def test_full_sweep_five_qubits(self):
        frame = run_validity_sweep(5, range(2, 13), trials=100, seed=42)
        assert len(frame) == 1100
        assert frame["error"].isna().all()
        assert (frame["max_leakage"] <= 1e-10).all()
        assert frame["transitions"].all()
        controls = frame["control_leakage"].dropna()
        assert (controls > 1e-6).all()


class TestMaxcutDemo:
    def test_block_plan(self):
        plan = block_plan((2, 2))
        assert plan.total_cost == 8
        assert len(plan.feasible) == 9
        assert plan.is_valid()

    def test_demo_frame(self):
        instance = MaxcutInstance.from_edges(4, [2, 2], [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 0.5)])
        results, frame = run_maxcut_demo(instance, [0, 1], QaoaOptions(restarts=1, maxiter=50, seed=2, n_jobs=1))
        assert list(frame.columns) == CsvColumns.MAXCUT
        assert frame["depth"].tolist() == [0, 1]
        assert all(r.max_infeasible_mass <= 1e-9 for r in results)
        assert (frame["ratio"] <= 1 + 1e-9).all()

    def test_block_plan_never_beats_direct(self):
        for size in (2, 3):
            plan = block_plan((size,))
            family = multi_k_hot_plan(size, 0, 1)
            direct = synthesize(family.feasible, SynthesisOptions(n_jobs=1))
            assert plan.total_cost == min(family.total_cost, direct.total_cost)
            assert plan.is_valid()

    @pytest.mark.slow
    def test_ten_vertex_demo(self):
        instance = MaxcutInstance.random(10, [5, 5], seed=3)
        results, frame = run_maxcut_demo(instance, [0, 1, 3, 5], QaoaOptions(restarts=2, seed=3, n_jobs=1))
        assert frame["depth"].tolist() == [0, 1, 3, 5]
        assert all(r.max_infeasible_mass <= 1e-9 for r in results)
        ratios = frame["ratio"].tolist()
        assert ratios[1] <= ratios[2] + 1e-6 <= ratios[3] + 2e-6
        assert ratios[3] > ratios[0]
        assert ratios[3] <= 1 + 1e-9
