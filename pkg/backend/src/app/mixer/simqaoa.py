"""
Statevector Simulation and Constrained MAXCUT QAOA

Validity certification for mixer plans and a small LX-QAOA harness:
- evolve: exp(-iβH_q) per candidate, by single-term rotations, by matrix
  exponential or by gate application
- check_preserves / check_transitions: leakage out of span(B) and
  reachability of every feasible pair
- MaxcutInstance, maxcut_phase, qaoa, run_depth_schedule: constrained MAXCUT
  from the uniform feasible superposition, Nelder-Mead with seeded restarts
  and zero-padded warm starts
"""

import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
from joblib import Parallel, delayed
from scipy.linalg import expm
from scipy.optimize import minimize
from scipy.sparse.linalg import expm_multiply

from app.core.config import settings
from app.core.exceptions import (
    DimensionMismatchError,
    LayoutMismatchError,
    LXMixerError,
    PlanFormatError,
    SimulationSizeError,
    ValidationFailedError,
)
from app.core.mixer_constants import QaoaDefaults, SimulationDefaults
from app.mixer.circuit import apply_gates, plan_circuit
from app.mixer.compose import ProductSpec, multi_k_hot_plan, tensor_plans
from app.mixer.subspace import FeasibleSet
from app.mixer.trotter import MixerPlan, is_connected

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-12


def _check_size(n: int) -> None:
    if n > settings.max_sim_qubits:
        raise SimulationSizeError(n, settings.max_sim_qubits)


@dataclass
class StateVector:
    """2^n complex amplitudes, qubit 1 as the most significant bit."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        _check_size(self.n)
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (1 << self.n,):
            raise DimensionMismatchError(1 << self.n, self.amplitudes.shape[0], "statevector length")

    @classmethod
    def basis(cls, n: int, state: int) -> "StateVector":
        amplitudes = np.zeros(1 << n, dtype=complex)
        amplitudes[state] = 1
        return cls(n, amplitudes)

    @classmethod
    def uniform(cls, b: FeasibleSet) -> "StateVector":
        amplitudes = np.zeros(1 << b.n, dtype=complex)
        amplitudes[list(b.states)] = 1 / math.sqrt(len(b))
        return cls(b.n, amplitudes)

    @classmethod
    def random_feasible(cls, b: FeasibleSet, rng: np.random.Generator) -> "StateVector":
        amplitudes = np.zeros(1 << b.n, dtype=complex)
        values = rng.normal(size=len(b)) + 1j * rng.normal(size=len(b))
        amplitudes[list(b.states)] = values / np.linalg.norm(values)
        return cls(b.n, amplitudes)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def feasible_mass(self, b: FeasibleSet) -> float:
        return float(self.probabilities()[list(b.states)].sum())

    def leakage(self, b: FeasibleSet) -> float:
        """‖(I - P_B)ψ‖."""
        outside = np.ones(1 << self.n, dtype=bool)
        outside[list(b.states)] = False
        return float(np.linalg.norm(self.amplitudes[outside]))

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.amplitudes.copy())


def evolve(plan: MixerPlan, beta: float, psi: StateVector, method: str = "pauli") -> StateVector:
    """Π_q exp(-iβ H_q) |ψ⟩ with candidates applied in plan order."""
    if plan.n != psi.n:
        raise DimensionMismatchError(plan.n, psi.n, "plan qubit count")
    _check_size(psi.n)
    if method not in SimulationDefaults.EVOLUTION_METHODS:
        raise LXMixerError(f"unknown evolution method {method!r}")

    amplitudes = psi.amplitudes.copy()
    if method == "circuit":
        amplitudes = apply_gates(amplitudes, plan_circuit(plan, beta))
    else:
        for candidate in plan.candidates:
            if method == "pauli":
                # terms of one candidate commute, so the product of rotations is exact
                for term, coefficient in candidate.mixer.terms():
                    theta = beta * float(coefficient)
                    amplitudes = math.cos(theta) * amplitudes - 1j * math.sin(theta) * term.apply(amplitudes)
            elif psi.n <= settings.max_dense_expm_qubits:
                amplitudes = expm(-1j * beta * candidate.mixer.to_matrix()) @ amplitudes
            else:
                amplitudes = expm_multiply(-1j * beta * candidate.mixer.to_sparse(), amplitudes)

    result = StateVector(psi.n, amplitudes)
    drift = abs(result.norm() - 1)
    if drift > NORM_TOLERANCE and abs(psi.norm() - 1) <= NORM_TOLERANCE:
        logger.warning(f"Norm drifted by {drift:.3e} during {method} evolution")
    return result


def check_preserves(
    plan: MixerPlan,
    b: FeasibleSet,
    trials: int = SimulationDefaults.PRESERVE_TRIALS,
    seed: Optional[int] = None,
    method: str = "pauli",
) -> float:
    """Max leakage out of span(B) over random β ∈ [-π, π] and random feasible starts."""
    rng = np.random.default_rng(settings.seed if seed is None else seed)
    worst = 0.0
    for _ in range(trials):
        beta = rng.uniform(-math.pi, math.pi)
        psi = StateVector.random_feasible(b, rng)
        worst = max(worst, evolve(plan, beta, psi, method).leakage(b))
    logger.debug(f"Max leakage over {trials} trials: {worst:.3e}")
    return worst


def transition_reach(plan: MixerPlan, b: FeasibleSet, beta: float, tolerance: float) -> np.ndarray:
    """reach[i, j]: |⟨b_i|U^r|b_j⟩| > tolerance for some 1 ≤ r ≤ J."""
    columns = [evolve(plan, beta, StateVector.basis(b.n, y)).amplitudes[list(b.states)] for y in b.states]
    u = np.column_stack(columns)
    reach = np.zeros(u.shape, dtype=bool)
    power = np.eye(len(b), dtype=complex)
    for _ in range(len(b)):
        power = u @ power
        reach |= np.abs(power) > tolerance
    return reach


def check_transitions(
    plan: MixerPlan,
    b: FeasibleSet,
    seed: Optional[int] = None,
    tolerance: Optional[float] = None,
) -> bool:
    """True iff the union graph connects B and U(β*) reaches every feasible pair."""
    tolerance = settings.transition_tolerance if tolerance is None else tolerance
    if not is_connected(b, [c.edges for c in plan.candidates]):
        logger.info("Union graph of the plan does not connect the feasible set")
        return False
    rng = np.random.default_rng(settings.seed if seed is None else seed)
    beta = rng.uniform(0.2, 1.2)
    reach = transition_reach(plan, b, beta, tolerance)
    off_diagonal = ~np.eye(len(b), dtype=bool)
    ok = bool(np.all(reach[off_diagonal]))
    if not ok:
        missing = int(np.sum(~reach & off_diagonal))
        logger.info(f"{missing} ordered feasible pairs unreachable at β*={beta:.4f}")
    return ok


def flip_projector_term(
    plan: MixerPlan, candidate_index: Optional[int] = None, term_index: Optional[int] = None
) -> MixerPlan:
    """
    Copy of the plan with one projector term's sign flipped.

    Defaults pick the first candidate whose lX leaves B and the first
    non-identity term of its projector, so the fault is observable.
    """
    b = plan.feasible
    if candidate_index is None:
        candidate_index = next(
            (i for i, c in enumerate(plan.candidates) if any((s ^ c.lx) not in b for s in b.states)),
            None,
        )
        if candidate_index is None:
            raise LXMixerError("every candidate maps B onto itself; a projector flip cannot leak")
    if not 0 <= candidate_index < len(plan.candidates):
        raise LXMixerError(f"candidate index {candidate_index} out of range")
    candidate = plan.candidates[candidate_index]
    terms = candidate.projector.terms()
    if term_index is None:
        term_index = next((i for i, (p, _) in enumerate(terms) if not p.is_identity), 0)
    if not 0 <= term_index < len(terms):
        raise LXMixerError(f"term index {term_index} out of range")
    pauli, coefficient = terms[term_index]
    projector = candidate.projector.add_term(pauli, -2 * coefficient)
    mixer = projector.left_multiply(candidate.lx_pauli)
    corrupted = replace(candidate, projector=projector, mixer=mixer)
    candidates = list(plan.candidates)
    candidates[candidate_index] = corrupted
    logger.info(f"Flipped projector term {pauli} of candidate {candidate_index}")
    return MixerPlan(b, tuple(candidates))


# Constrained MAXCUT

@dataclass(frozen=True, eq=False)
class MaxcutInstance:
    """Weighted graph whose vertices are grouped into contiguous qubit blocks."""

    n_vertices: int
    blocks: Tuple[int, ...]
    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        weights = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", weights)
        if sum(self.blocks) != self.n_vertices or any(size < 1 for size in self.blocks):
            raise LayoutMismatchError(f"blocks {self.blocks} do not partition {self.n_vertices} vertices")
        if weights.shape != (self.n_vertices, self.n_vertices):
            raise DimensionMismatchError(self.n_vertices, weights.shape[0], "weight matrix size")
        if not np.array_equal(weights, weights.T):
            raise LayoutMismatchError("weight matrix is not symmetric")
        if np.any(np.diag(weights) != 0):
            raise LayoutMismatchError("self-loop weights are not allowed")
        if np.any(weights < 0):
            raise LayoutMismatchError("weights must be non-negative")

    @classmethod
    def from_edges(cls, n_vertices: int, blocks: Sequence[int], edges: Sequence[Tuple[int, int, float]]) -> "MaxcutInstance":
        weights = np.zeros((n_vertices, n_vertices))
        for u, v, w in edges:
            if u == v:
                raise LayoutMismatchError(f"self-loop on vertex {u}")
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise LayoutMismatchError(f"edge ({u}, {v}) outside {n_vertices} vertices")
            weights[u, v] = weights[v, u] = w
        return cls(n_vertices, tuple(blocks), weights)

    @classmethod
    def random(
        cls, n_vertices: int, blocks: Sequence[int], seed: int, attachment: Optional[int] = None
    ) -> "MaxcutInstance":
        """Barabási–Albert graph with uniform (0, 1) weights."""
        attachment = settings.maxcut_attachment if attachment is None else attachment
        graph = nx.barabasi_albert_graph(n_vertices, attachment, seed=seed)
        rng = np.random.default_rng(seed)
        edges = [(u, v, float(rng.uniform(0, 1))) for u, v in sorted(tuple(sorted(e)) for e in graph.edges)]
        return cls.from_edges(n_vertices, blocks, edges)

    def edges(self) -> List[Tuple[int, int, float]]:
        return [
            (u, v, float(self.weights[u, v]))
            for u in range(self.n_vertices)
            for v in range(u + 1, self.n_vertices)
            if self.weights[u, v] != 0
        ]

    def to_text(self) -> str:
        lines = ["blocks " + " ".join(str(s) for s in self.blocks)]
        lines += [f"{u} {v} {settings.float_format % w}" for u, v, w in self.edges()]
        return "\n".join(lines) + "\n"

    def feasible_set(self) -> FeasibleSet:
        """B_{0,1} on every block (one-hot or empty)."""
        return ProductSpec.from_factors([FeasibleSet.weight_range(s, 0, 1) for s in self.blocks]).feasible()

    def cut_value(self, state: int) -> float:
        """Σ_{u<v} w_uv [z_u ≠ z_v], vertex u on qubit u+1."""
        bits = [(state >> (self.n_vertices - 1 - u)) & 1 for u in range(self.n_vertices)]
        return float(sum(w for u, v, w in self.edges() if bits[u] != bits[v]))

    def cut_values(self) -> np.ndarray:
        """Cut value of every basis state."""
        states = np.arange(1 << self.n_vertices)
        shifts = self.n_vertices - 1 - np.arange(self.n_vertices)
        bits = (states[:, None] >> shifts[None, :]) & 1
        values = np.zeros(states.shape[0])
        for u, v, w in self.edges():
            values += w * (bits[:, u] != bits[:, v])
        return values


def parse_instance_text(text: str) -> MaxcutInstance:
    """'blocks s1 s2 ...' header, then 'u v weight' lines (0-based); '#' comments."""
    blocks: Optional[List[int]] = None
    edges = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        try:
            if blocks is None:
                if fields[0] != "blocks" or len(fields) < 2:
                    raise PlanFormatError(f"line {number}: expected 'blocks <s1> <s2> ...' header")
                blocks = [int(f) for f in fields[1:]]
                continue
            if len(fields) != 3:
                raise PlanFormatError(f"line {number}: expected 'u v weight'")
            edges.append((int(fields[0]), int(fields[1]), float(fields[2])))
        except ValueError as e:
            raise PlanFormatError(f"line {number}: {e}") from e
    if blocks is None:
        raise PlanFormatError("instance file has no blocks header")
    return MaxcutInstance.from_edges(sum(blocks), blocks, edges)


def load_instance_file(path: Union[str, Path]) -> MaxcutInstance:
    path = Path(path)
    logger.info(f"Loading MAXCUT instance from {path}")
    return parse_instance_text(path.read_text(encoding="utf-8"))


def maxcut_phase(instance: MaxcutInstance, gamma: float, psi: StateVector, values: Optional[np.ndarray] = None) -> StateVector:
    """Multiply each amplitude by exp(-iγ f(z))."""
    if psi.n != instance.n_vertices:
        raise LayoutMismatchError(f"state has {psi.n} qubits, instance has {instance.n_vertices} vertices")
    values = instance.cut_values() if values is None else values
    return StateVector(psi.n, psi.amplitudes * np.exp(-1j * gamma * values))


@dataclass
class QaoaOptions:
    restarts: int = field(default_factory=lambda: settings.qaoa_restarts)
    maxiter: int = field(default_factory=lambda: settings.qaoa_maxiter)
    method: str = "pauli"
    seed: int = field(default_factory=lambda: settings.seed)
    feasibility_tolerance: float = QaoaDefaults.FEASIBILITY_TOLERANCE
    n_jobs: int = field(default_factory=lambda: settings.n_jobs)

    def __post_init__(self):
        if self.restarts < 1:
            raise LXMixerError("restarts must be at least 1")
        if self.maxiter < 1:
            raise LXMixerError("maxiter must be at least 1")
        if self.method not in SimulationDefaults.EVOLUTION_METHODS:
            raise LXMixerError(f"unknown evolution method {self.method!r}")


@dataclass(frozen=True)
class QaoaResult:
    depth: int
    ratio: float
    expectation: float
    evaluations: int
    parameters: Tuple[float, ...]
    max_infeasible_mass: float
    seed: int


class _Objective:
    """Negative expected cut of the depth-p ansatz, tracking infeasible mass."""

    def __init__(self, instance: MaxcutInstance, plan: MixerPlan, depth: int, method: str):
        self.instance = instance
        self.plan = plan
        self.depth = depth
        self.method = method
        self.values = instance.cut_values()
        self.start = StateVector.uniform(plan.feasible)
        self.max_infeasible_mass = 0.0

    def state(self, parameters: Sequence[float]) -> StateVector:
        psi = self.start
        for layer in range(self.depth):
            gamma, beta = parameters[2 * layer], parameters[2 * layer + 1]
            psi = maxcut_phase(self.instance, gamma, psi, self.values)
            psi = evolve(self.plan, beta, psi, self.method)
        return psi

    def expectation(self, parameters: Sequence[float]) -> float:
        psi = self.state(parameters)
        self.max_infeasible_mass = max(self.max_infeasible_mass, 1 - psi.feasible_mass(self.plan.feasible))
        return float(psi.probabilities() @ self.values)

    def __call__(self, parameters: np.ndarray) -> float:
        return -self.expectation(parameters)


def optimal_cut(instance: MaxcutInstance, b: FeasibleSet) -> float:
    """Brute-force C_opt over the feasible set."""
    values = instance.cut_values()
    return float(max(values[s] for s in b.states))


def _optimize(objective: _Objective, start: np.ndarray, maxiter: int):
    result = minimize(objective, start, method="Nelder-Mead", options={"maxiter": maxiter, "xatol": 1e-8, "fatol": 1e-10})
    return result.x, float(result.fun), int(result.nfev), objective.max_infeasible_mass


def qaoa(
    instance: MaxcutInstance,
    plan: MixerPlan,
    depth: int,
    options: Optional[QaoaOptions] = None,
    warm_start: Optional[Sequence[float]] = None,
) -> QaoaResult:
    """Optimize ⟨f⟩ at one depth; the warm start is padded with zero angles."""
    options = options or QaoaOptions()
    if plan.n != instance.n_vertices:
        raise LayoutMismatchError(f"plan has {plan.n} qubits, instance has {instance.n_vertices} vertices")
    if depth < 0:
        raise LXMixerError("depth must be non-negative")
    b = plan.feasible
    c_opt = optimal_cut(instance, b)
    objective = _Objective(instance, plan, depth, options.method)

    def ratio_of(expectation: float) -> float:
        return expectation / c_opt if c_opt > 0 else 1.0

    if depth == 0:
        expectation = objective.expectation(())
        return QaoaResult(0, ratio_of(expectation), expectation, 0, (), objective.max_infeasible_mass, options.seed)

    rng = np.random.default_rng([options.seed, depth])
    starts = []
    if warm_start is not None:
        padded = np.zeros(2 * depth)
        padded[: len(warm_start)] = warm_start[: 2 * depth]
        starts.append(padded)
    while len(starts) < options.restarts:
        starts.append(rng.uniform(0, math.pi, size=2 * depth))

    if options.n_jobs == 1:
        runs = [_optimize(objective, start, options.maxiter) for start in starts]
    else:
        runs = Parallel(n_jobs=options.n_jobs)(
            delayed(_optimize)(_Objective(instance, plan, depth, options.method), start, options.maxiter)
            for start in starts
        )
    parameters, value, _, _ = min(runs, key=lambda run: run[1])
    evaluations = sum(run[2] for run in runs)
    max_infeasible = max(run[3] for run in runs)
    expectation = -value
    if max_infeasible > options.feasibility_tolerance:
        raise ValidationFailedError(
            f"feasible-subspace probability dropped below 1 at depth {depth}", max_infeasible
        )
    result = QaoaResult(
        depth, ratio_of(expectation), expectation, evaluations,
        tuple(float(p) for p in parameters), max_infeasible, options.seed,
    )
    logger.info(f"depth {depth}: ratio {result.ratio:.6f} after {evaluations} evaluations")
    return result


def run_depth_schedule(
    instance: MaxcutInstance,
    plan: MixerPlan,
    depths: Sequence[int],
    options: Optional[QaoaOptions] = None,
) -> List[QaoaResult]:
    """qaoa at ascending depths, each warm-started from the previous optimum."""
    options = options or QaoaOptions()
    results = []
    warm_start: Optional[Tuple[float, ...]] = None
    for depth in sorted(set(depths)):
        result = qaoa(instance, plan, depth, options, warm_start)
        results.append(result)
        if depth > 0:
            warm_start = result.parameters
    return results


def two_block_maxcut_plan(block_size: int = QaoaDefaults.BLOCK_SIZE) -> MixerPlan:
    """I ⊗ H_{0,1} + H_{0,1} ⊗ I on two blocks of block_size qubits."""
    block = multi_k_hot_plan(block_size, 0, 1)
    spec = ProductSpec.from_factors([block.feasible, block.feasible])
    return tensor_plans([block, block], spec)

