"""
Mixer Commands

One cmd_* function per subcommand. Each takes a RunConfig, writes its
machine-readable output, prints a short summary and returns an exit code.
"""

import logging
from pathlib import Path
from typing import Optional

from app.core.config import settings
from app.core.exceptions import FeasibleSetError, LayoutMismatchError, ValidationFailedError
from app.core.mixer_constants import QaoaDefaults
from app.mixer.circuit import cx_count, plan_circuit
from app.mixer.compose import khot_plan, load_product_spec, multi_k_hot_plan, product_plan
from app.mixer.simqaoa import (
    MaxcutInstance,
    QaoaOptions,
    check_preserves,
    check_transitions,
    flip_projector_term,
    load_instance_file,
)
from app.mixer.subspace import FeasibleSet, load_feasible_file
from app.mixer.trotter import MixerPlan, SynthesisOptions, chain_mixer, format_candidate_table, synthesize
from app.models.run_config import RunConfig
from app.services.experiment_runner import cost_table_frame, run_maxcut_demo, run_stats
from app.services.plan_serializer import dumps_plan, load_plan
from app.utils.error_handling import (
    EXIT_OK,
    handle_command_errors,
    validate_positive_int,
    validate_qubit_count,
)
from app.utils.file_formats import write_csv, write_text

logger = logging.getLogger(__name__)


def _require_path(path: Optional[Path], flag: str) -> Path:
    if path is None:
        raise FeasibleSetError(f"{flag} is required for this command")
    return path


def _options(config: RunConfig) -> SynthesisOptions:
    return SynthesisOptions(restrict=config.restrict, selection=config.selection)


def _emit_plan(plan: MixerPlan, config: RunConfig) -> None:
    write_text(dumps_plan(plan, config.seed), config.output)
    if config.output is not None:
        print(format_candidate_table(plan))
    print(f"total_cost: {plan.total_cost}")


@handle_command_errors("synth")
def cmd_synth(config: RunConfig) -> int:
    b = load_feasible_file(_require_path(config.input, "--input"))
    if len(b) < 2:
        raise FeasibleSetError("need at least two feasible states")
    plan = synthesize(b, _options(config))
    chain = chain_mixer(b, restrict=config.restrict, sort_states=config.chain_order == "sorted")
    _emit_plan(plan, config)
    print(f"chain_cost: {chain.total_cost}")
    return EXIT_OK


@handle_command_errors("cost-table")
def cmd_cost_table(config: RunConfig) -> int:
    b = load_feasible_file(_require_path(config.input, "--input"))
    if len(b) < 2:
        raise FeasibleSetError("need at least two feasible states")
    write_csv(cost_table_frame(b, config.seed), config.output)
    return EXIT_OK


@handle_command_errors("stats")
def cmd_stats(config: RunConfig) -> int:
    validate_qubit_count(config.n)
    validate_positive_int(config.trials, "trials")
    sizes = config.sizes or list(range(2, (1 << config.n) + 1))
    detail, aggregate = run_stats(
        config.n, sizes, config.trials, config.seed, config.chain_order, config.selection
    )
    if config.detail_output is not None:
        write_csv(detail, config.detail_output)
    write_csv(aggregate, config.output)
    return EXIT_OK


@handle_command_errors("khot")
def cmd_khot(config: RunConfig) -> int:
    validate_qubit_count(config.n)
    if config.k is None:
        raise FeasibleSetError("--k is required for khot")
    _emit_plan(khot_plan(config.n, config.k, _options(config)), config)
    return EXIT_OK


@handle_command_errors("multikhot")
def cmd_multikhot(config: RunConfig) -> int:
    validate_qubit_count(config.n)
    if config.k1 is None or config.k2 is None:
        raise FeasibleSetError("--k1 and --k2 are required for multikhot")
    _emit_plan(multi_k_hot_plan(config.n, config.k1, config.k2, _options(config)), config)
    return EXIT_OK


@handle_command_errors("product")
def cmd_product(config: RunConfig) -> int:
    spec = load_product_spec(_require_path(config.input, "--input"))
    _emit_plan(product_plan(spec, _options(config)), config)
    return EXIT_OK


@handle_command_errors("maxcut-demo")
def cmd_maxcut_demo(config: RunConfig) -> int:
    if config.instance is not None:
        instance = load_instance_file(config.instance)
    else:
        blocks = (QaoaDefaults.BLOCK_SIZE, QaoaDefaults.BLOCK_SIZE)
        instance = MaxcutInstance.random(sum(blocks), blocks, config.seed)
    validate_qubit_count(instance.n_vertices, settings.max_sim_qubits)
    options = QaoaOptions(seed=config.seed, method=config.method)
    results, frame = run_maxcut_demo(instance, config.depths, options)
    write_csv(frame, config.output)
    worst = max((r.max_infeasible_mass for r in results), default=0.0)
    logger.info(f"Max infeasible probability across the run: {worst:.3e}")
    return EXIT_OK


@handle_command_errors("emit-circuit")
def cmd_emit_circuit(config: RunConfig) -> int:
    plan = load_plan(_require_path(config.plan or config.input, "--plan"))
    gates = plan_circuit(plan, config.beta)
    write_text(gates.to_text(), config.output)
    count = cx_count(gates)
    if count != plan.total_cost:
        logger.warning(f"Emitted CX count {count} differs from plan cost {plan.total_cost}")
    print(f"cx: {count}")
    return EXIT_OK


@handle_command_errors("validate")
def cmd_validate(config: RunConfig) -> int:
    plan = load_plan(_require_path(config.plan, "--plan"))
    b: FeasibleSet = load_feasible_file(config.input) if config.input is not None else plan.feasible
    if b.n != plan.n:
        raise LayoutMismatchError(f"plan has {plan.n} qubits, feasible set has {b.n}")
    if config.corrupt:
        plan = flip_projector_term(plan)
    leakage = check_preserves(plan, b, seed=config.seed, method=config.method)
    transitions = check_transitions(plan, b, seed=config.seed)
    print(f"max_leakage: {leakage:.3e}")
    print(f"transitions: {'true' if transitions else 'false'}")
    if leakage > settings.leakage_tolerance:
        raise ValidationFailedError("plan leaks out of the feasible subspace", leakage)
    if not transitions:
        raise ValidationFailedError("plan does not provide transitions between all feasible pairs", leakage)
    print("valid: true")
    return EXIT_OK


COMMANDS = {
    "synth": cmd_synth,
    "cost-table": cmd_cost_table,
    "stats": cmd_stats,
    "khot": cmd_khot,
    "multikhot": cmd_multikhot,
    "product": cmd_product,
    "maxcut-demo": cmd_maxcut_demo,
    "emit-circuit": cmd_emit_circuit,
    "validate": cmd_validate,
}


def run_command(config: RunConfig) -> int:
    return COMMANDS[config.command](config)
