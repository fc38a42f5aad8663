"""
Plan Serialization

MixerPlan <-> PlanDocument (JSON). Mixers and costs are recomputed from the
stored projector on load; a stored cost that disagrees is a format error.
"""

import logging
from pathlib import Path
from typing import Optional, Union

from pydantic import ValidationError

from app.core.exceptions import LXMixerError, PlanFormatError
from app.mixer.pauli import PauliSum, bits_to_int, cost, int_to_bits, parse_pauli
from app.mixer.stabilizer import GeneratorSet
from app.mixer.subspace import FeasibleSet
from app.mixer.trotter import MixerCandidate, MixerPlan
from app.models.plan import (
    CandidateDocument,
    PlanDocument,
    ProjectorTermDocument,
    format_coefficient,
    parse_coefficient,
)

logger = logging.getLogger(__name__)


def candidate_to_document(candidate: MixerCandidate) -> CandidateDocument:
    n = candidate.n
    return CandidateDocument(
        logical_x=candidate.lx_pauli.body(),
        projector=[
            ProjectorTermDocument(coefficient=format_coefficient(c), pauli=str(p))
            for p, c in candidate.projector.terms()
        ],
        edges=[[int_to_bits(x, n), int_to_bits(y, n)] for x, y in candidate.edges],
        cost=candidate.cost,
        provenance=candidate.provenance,
        kind=candidate.kind,
        generators=[str(g) for g in candidate.generators] if candidate.generators is not None else None,
        bridges=[list(pair) for pair in candidate.bridges],
    )


def plan_to_document(plan: MixerPlan, seed: Optional[int] = None) -> PlanDocument:
    return PlanDocument(
        n=plan.n,
        feasible=plan.feasible.bitstrings,
        total_cost=plan.total_cost,
        seed=seed,
        candidates=[candidate_to_document(c) for c in plan.candidates],
    )


def _candidate_from_document(doc: CandidateDocument, n: int) -> MixerCandidate:
    lx = parse_pauli(doc.logical_x)
    if lx.n != n or not lx.is_x_type or lx.is_identity:
        raise PlanFormatError(f"logical_x {doc.logical_x!r} is not a non-identity X string on {n} qubits")
    projector = PauliSum(n)
    for term in doc.projector:
        pauli = parse_pauli(term.pauli)
        if pauli.n != n:
            raise PlanFormatError(f"projector term {term.pauli!r} has {pauli.n} qubits, expected {n}")
        projector = projector.add_term(pauli, parse_coefficient(term.coefficient))
    if not projector.is_diagonal:
        raise PlanFormatError(f"projector of {doc.logical_x} is not diagonal")
    mixer = projector.left_multiply(lx)
    if cost(mixer) != doc.cost:
        raise PlanFormatError(f"stored cost {doc.cost} of {doc.logical_x} disagrees with recomputed {cost(mixer)}")
    generators = None
    if doc.generators is not None:
        generators = GeneratorSet(n, tuple(parse_pauli(g) for g in doc.generators))
    return MixerCandidate(
        n=n,
        lx=lx.x_mask,
        projector=projector,
        mixer=mixer,
        edges=tuple((bits_to_int(x), bits_to_int(y)) for x, y in doc.edges),
        cost=doc.cost,
        provenance=doc.provenance,
        kind=doc.kind,
        generators=generators,
        bridges=tuple(tuple(pair) for pair in doc.bridges),
    )


def document_to_plan(doc: PlanDocument) -> MixerPlan:
    try:
        feasible = FeasibleSet.from_bitstrings(doc.feasible)
        if feasible.n != doc.n:
            raise PlanFormatError(f"feasible states have {feasible.n} bits, plan declares n={doc.n}")
        candidates = tuple(_candidate_from_document(c, doc.n) for c in doc.candidates)
    except PlanFormatError:
        raise
    except LXMixerError as e:
        raise PlanFormatError(f"invalid plan: {e.detail}") from e
    for candidate in candidates:
        for edge in candidate.edges:
            if edge[0] not in feasible or edge[1] not in feasible:
                raise PlanFormatError(f"edge {edge} of {candidate.describe()} leaves the feasible set")
    plan = MixerPlan(feasible, candidates)
    if plan.total_cost != doc.total_cost:
        raise PlanFormatError(f"total_cost {doc.total_cost} disagrees with candidate sum {plan.total_cost}")
    return plan


def dumps_plan(plan: MixerPlan, seed: Optional[int] = None) -> str:
    return plan_to_document(plan, seed).model_dump_json(indent=2) + "\n"


def loads_plan(text: str) -> MixerPlan:
    try:
        doc = PlanDocument.model_validate_json(text)
    except ValidationError as e:
        raise PlanFormatError(f"malformed plan document: {e.error_count()} error(s): {e.errors()[0]['msg']}") from e
    return document_to_plan(doc)


def save_plan(plan: MixerPlan, path: Union[str, Path], seed: Optional[int] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_plan(plan, seed), encoding="utf-8")
    logger.info(f"Plan with {len(plan.candidates)} candidates written to {path}")
    return path


def load_plan(path: Union[str, Path]) -> MixerPlan:
    path = Path(path)
    logger.debug(f"Loading plan from {path}")
    return loads_plan(path.read_text(encoding="utf-8"))
