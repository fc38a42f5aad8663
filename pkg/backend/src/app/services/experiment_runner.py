"""
Experiment Runner

Batch harnesses behind the stats and maxcut-demo commands:
- cost_table_frame: per-pair unrestricted / restricted costs
- run_stats: chain vs optimal vs restricted-optimal cost over random
  feasible sets, per-trial rows plus a groupby aggregate
- run_validity_sweep: check_preserves / check_transitions over random sets
  with a fault-injected negative control
- run_maxcut_demo: LX-QAOA depth schedule on a block-structured instance
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from app.core.config import settings
from app.core.exceptions import FeasibleSetError
from app.core.mixer_constants import CsvColumns, SelectionDefaults
from app.mixer.compose import ProductSpec, multi_k_hot_plan, tensor_plans
from app.mixer.pauli import int_to_bits
from app.mixer.simqaoa import (
    MaxcutInstance,
    QaoaOptions,
    QaoaResult,
    check_preserves,
    check_transitions,
    flip_projector_term,
    run_depth_schedule,
)
from app.mixer.subspace import FeasibleSet
from app.mixer.trotter import MixerPlan, SynthesisOptions, chain_mixer, cost_table, synthesize
from app.utils.error_handling import ErrorSummary, handle_trial_errors
from app.utils.file_formats import rows_to_frame

logger = logging.getLogger(__name__)


def cost_table_frame(b: FeasibleSet, seed: int) -> pd.DataFrame:
    rows = [
        {
            "pair": f"C{row.index}",
            "state_a": int_to_bits(row.x, b.n),
            "state_b": int_to_bits(row.y, b.n),
            "logical_x": int_to_bits(row.lx, b.n),
            "unrestricted_cost": row.unrestricted_cost,
            "restricted_cost": row.restricted_cost,
            "seed": seed,
        }
        for row in cost_table(b)
    ]
    return rows_to_frame(rows, CsvColumns.COST_TABLE)


def trial_rng(seed: int, size: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, size, trial])


@handle_trial_errors("stats trial")
def _stats_trial(
    n: int, size: int, trial: int, seed: int, sort_states: bool, selection: str, exact_limit: int
) -> Dict:
    b = FeasibleSet.random_subset(n, size, trial_rng(seed, size, trial))
    unrestricted = SynthesisOptions(restrict=False, selection=selection, exact_limit=exact_limit)
    restricted = SynthesisOptions(restrict=True, selection=selection, exact_limit=exact_limit)
    return {
        "size": size,
        "trial": trial,
        "chain_cost": chain_mixer(b, restrict=False, sort_states=sort_states).total_cost,
        "optimal_cost": synthesize(b, unrestricted).total_cost,
        "restricted_cost": synthesize(b, restricted).total_cost,
        "seed": seed,
    }


def validate_sizes(n: int, sizes: Sequence[int]) -> List[int]:
    for size in sizes:
        if size < 2:
            raise FeasibleSetError(f"feasible-set size {size} is below 2")
        if size > 1 << n:
            raise FeasibleSetError(f"feasible-set size {size} exceeds 2^{n} = {1 << n}")
    return list(sizes)


def aggregate_stats(detail: pd.DataFrame, seed: int) -> pd.DataFrame:
    """Mean/std/min/max per (size, metric) with metrics chain, optimal, restricted."""
    long = detail.melt(
        id_vars=["size"],
        value_vars=["chain_cost", "optimal_cost", "restricted_cost"],
        var_name="metric",
        value_name="cost",
    )
    long["metric"] = long["metric"].str.replace("_cost", "", regex=False)
    grouped = long.groupby(["size", "metric"])["cost"].agg(["mean", "std", "min", "max", "count"]).reset_index()
    grouped["std"] = grouped["std"].fillna(0.0)
    grouped = grouped.rename(columns={"count": "trials"})
    grouped["seed"] = seed
    return grouped[CsvColumns.STATS_AGGREGATE]


def run_stats(
    n: int,
    sizes: Sequence[int],
    trials: int,
    seed: int,
    chain_order: str = "sorted",
    selection: str = SelectionDefaults.EXACT,
    exact_limit: Optional[int] = None,
) -> Tuple[pd.DataFrame, pd.DataFrame]:
    """Per-trial rows and aggregate over random feasible sets of each size."""
    sizes = validate_sizes(n, sizes)
    exact_limit = settings.exact_selection_limit if exact_limit is None else exact_limit
    logger.info("=" * 60)
    logger.info(f"COST STATISTICS: n={n}, sizes={sizes}, trials={trials}, seed={seed}")
    logger.info("=" * 60)

    errors = ErrorSummary()
    rows = []
    for size in sizes:
        for trial in range(trials):
            row = _stats_trial(n, size, trial, seed, chain_order == "sorted", selection, exact_limit)
            if "error" in row:
                errors.add_error(row["type"])
                continue
            rows.append(row)
        logger.info(f"|B|={size}: {trials} trials done")
    errors.log_summary("stats")

    detail = rows_to_frame(rows, CsvColumns.STATS_DETAIL)
    return detail, aggregate_stats(detail, seed)


def validity_options() -> SynthesisOptions:
    """Greedy selection without the kernel search; validity does not depend on optimality."""
    return SynthesisOptions(selection=SelectionDefaults.GREEDY, kernel=False, n_jobs=1)


@handle_trial_errors("validity trial")
def _validity_trial(n: int, size: int, trial: int, seed: int) -> Dict:
    b = FeasibleSet.random_subset(n, size, trial_rng(seed, size, trial))
    plan = synthesize(b, validity_options())
    row = {
        "size": size,
        "trial": trial,
        "max_leakage": check_preserves(plan, b, seed=seed + trial),
        "transitions": check_transitions(plan, b, seed=seed + trial),
        "control_leakage": None,
        "error": None,
    }
    if any(any((s ^ c.lx) not in b for s in b.states) for c in plan.candidates):
        row["control_leakage"] = check_preserves(flip_projector_term(plan), b, seed=seed + trial)
    return row


def run_validity_sweep(
    n: int, sizes: Sequence[int], trials: int, seed: int, n_jobs: Optional[int] = None
) -> pd.DataFrame:
    """
    Leakage, transitions and negative-control leakage per random feasible set.

    Failed trials stay in the frame with their error type in the error
    column and no leakage or transition result.
    """
    sizes = validate_sizes(n, sizes)
    n_jobs = settings.n_jobs if n_jobs is None else n_jobs
    jobs = [(size, trial) for size in sizes for trial in range(trials)]
    logger.info(f"VALIDITY SWEEP: n={n}, sizes={sizes}, trials={trials}, seed={seed}, n_jobs={n_jobs}")
    if n_jobs == 1:
        results = [_validity_trial(n, size, trial, seed) for size, trial in jobs]
    else:
        results = Parallel(n_jobs=n_jobs)(delayed(_validity_trial)(n, size, trial, seed) for size, trial in jobs)

    errors = ErrorSummary()
    rows = []
    for (size, trial), row in zip(jobs, results):
        if "size" not in row:
            errors.add_error(row["type"])
            row = {
                "size": size,
                "trial": trial,
                "max_leakage": float("nan"),
                "transitions": False,
                "control_leakage": None,
                "error": row["type"],
            }
        rows.append(row)
    errors.log_summary("validity sweep")
    return rows_to_frame(rows, CsvColumns.VALIDITY)


def block_plan(blocks: Sequence[int]) -> MixerPlan:
    """
    Tensor product of B_{0,1} mixers, one per block.

    Each block uses the cheaper of the XY-chain family builder and direct
    synthesis (on two qubits two restricted X terms beat XY plus a bridge).
    """
    plans = []
    for size in blocks:
        family = multi_k_hot_plan(size, 0, 1)
        direct = synthesize(family.feasible, SynthesisOptions(n_jobs=1))
        plans.append(direct if direct.total_cost < family.total_cost else family)
    spec = ProductSpec.from_factors([p.feasible for p in plans])
    return tensor_plans(plans, spec)


def run_maxcut_demo(
    instance: MaxcutInstance, depths: Sequence[int], options: Optional[QaoaOptions] = None
) -> Tuple[List[QaoaResult], pd.DataFrame]:
    options = options or QaoaOptions()
    plan = block_plan(instance.blocks)
    logger.info("=" * 60)
    logger.info(
        f"CONSTRAINED MAXCUT: {instance.n_vertices} vertices, blocks {list(instance.blocks)}, "
        f"{len(plan.feasible)} feasible states, mixer cost {plan.total_cost}"
    )
    logger.info("=" * 60)
    results = run_depth_schedule(instance, plan, depths, options)
    rows = [
        {"depth": r.depth, "ratio": r.ratio, "evaluations": r.evaluations, "seed": r.seed}
        for r in results
    ]
    for result in results:
        logger.info(f"  depth {result.depth:>3}: ratio {result.ratio:.6f}")
    return results, rows_to_frame(rows, CsvColumns.MAXCUT)
