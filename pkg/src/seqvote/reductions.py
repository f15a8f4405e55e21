"""Reductions from classic hard problems into manipulation instances.

Two constructions turn an even-sum multiset of positive integers into
weighted plurality instances whose answer tracks the existence of an equal
split, one destructive and one constructive under the unique-winner model.
A third construction turns a quantified boolean formula into an unweighted
instance of the formula-driven election system whose alternating game
mirrors the quantifier prefix.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .core import (
    CastVote,
    Direction,
    ElectionSnapshot,
    ManipulationInstance,
    PendingVoter,
    ProblemVariant,
    QuantifierMode,
    TargetMode,
    WinnerModel,
)
from .errors import InvalidInstanceError, ResourceLimitError
from .rules import Plurality, TieredSystem, VotingRule
from .tiered import (
    Node,
    eval_formula,
    format_formula,
    formula_atoms,
    successor_names,
)


@dataclass(frozen=True)
class PartitionInstance:
    """A multiset of positive integers promised to have an even sum."""

    weights: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))
        if not self.weights:
            raise InvalidInstanceError("weight multiset must be nonempty")
        for w in self.weights:
            if isinstance(w, bool) or not isinstance(w, int) or w < 1:
                raise InvalidInstanceError("weights must be positive integers")
        if sum(self.weights) % 2:
            raise InvalidInstanceError("weight multiset must have an even sum")

    @property
    def half(self) -> int:
        return sum(self.weights) // 2


def partition_bruteforce(p: PartitionInstance) -> bool:
    """Exhaustive subset check for an equal split (exponential in len)."""
    target = p.half
    ws = p.weights
    for mask in range(1 << len(ws)):
        total = 0
        for i, w in enumerate(ws):
            if mask >> i & 1:
                total += w
        if total == target:
            return True
    return False


@dataclass(frozen=True)
class ReductionResult:
    instance: ManipulationInstance
    rule: VotingRule
    variant: ProblemVariant
    provenance: dict = field(compare=False)


def _partition_base(p: PartitionInstance, m: int):
    """Shared scaffolding: candidates, blocking cast votes, scaled weights.

    Candidate c_i for i <= m-2 receives a cast stack of (m-1)*half - i; the
    offsets make those stacks pairwise distinct modulo m-1 while all pending
    weights are multiples of m-1, so no pending play can tie any blocked
    candidate with anything else.  Only c_{m-1} and c_m can tie, and only by
    an exact equal split of the pending weight.
    """
    if isinstance(m, bool) or not isinstance(m, int) or m < 2:
        raise InvalidInstanceError("the construction needs at least 2 candidates")
    cands = tuple(f"c{i}" for i in range(1, m + 1))
    cast = []
    for i in range(1, m - 1):
        top = cands[i - 1]
        vote = (top,) + tuple(c for c in cands if c != top)
        cast.append(
            CastVote(name=f"v{i}", weight=(m - 1) * p.half - i, vote=vote)
        )
    scaled = tuple((m - 1) * w for w in p.weights)
    return cands, tuple(cast), scaled


def reduce_partition_dwcm_uw(p: PartitionInstance, m: int = 2) -> ReductionResult:
    """Destructive unique-winner weighted plurality instance.

    Every pending voter is a coalition member; the forbidden zone is the
    whole candidate set, so the coalition succeeds exactly if it can force a
    tied winner set, which requires splitting its weight equally between the
    two unblocked candidates.  The answer equals the equal-split answer.
    """
    cands, cast, scaled = _partition_base(p, m)
    pending = tuple(
        PendingVoter(name=f"u{i}", weight=w, is_manipulator=True)
        for i, w in enumerate(scaled, start=1)
    )
    snapshot = ElectionSnapshot(candidates=cands, cast=cast, pending=pending)
    instance = ManipulationInstance(snapshot=snapshot, sigma=cands, d=cands[0])
    variant = ProblemVariant(
        direction=Direction.DESTRUCTIVE,
        target=TargetMode.SEGMENT,
        winner_model=WinnerModel.UNIQUE,
        quantifier_mode=QuantifierMode.ONLINE,
        weighted=True,
    )
    provenance = {
        "reduction": "equal-split-to-destructive-unique",
        "source_weights": list(p.weights),
        "m": m,
        "half_sum": p.half,
        "weight_scale": m - 1,
        "answer_tracks": "equal split exists",
    }
    return ReductionResult(
        instance=instance, rule=Plurality(), variant=variant, provenance=provenance
    )


def reduce_partition_cowcm_uw(p: PartitionInstance, m: int = 2) -> ReductionResult:
    """Constructive unique-winner weighted plurality instance.

    The coalition is a single weightless voter moving first; the goal
    segment is the whole candidate set, so it succeeds exactly if the other
    pending voters cannot force a tied winner set.  The answer is the
    negation of the equal-split answer.
    """
    cands, cast, scaled = _partition_base(p, m)
    pending = (PendingVoter(name="u0", weight=0, is_manipulator=True),) + tuple(
        PendingVoter(name=f"n{i}", weight=w, is_manipulator=False)
        for i, w in enumerate(scaled, start=1)
    )
    snapshot = ElectionSnapshot(candidates=cands, cast=cast, pending=pending)
    instance = ManipulationInstance(snapshot=snapshot, sigma=cands, d=cands[-1])
    variant = ProblemVariant(
        direction=Direction.CONSTRUCTIVE,
        target=TargetMode.SEGMENT,
        winner_model=WinnerModel.UNIQUE,
        quantifier_mode=QuantifierMode.ONLINE,
        weighted=True,
    )
    provenance = {
        "reduction": "equal-split-to-constructive-unique",
        "source_weights": list(p.weights),
        "m": m,
        "half_sum": p.half,
        "weight_scale": m - 1,
        "answer_tracks": "no equal split exists",
    }
    return ReductionResult(
        instance=instance, rule=Plurality(), variant=variant, provenance=provenance
    )


@dataclass(frozen=True)
class QbfInstance:
    """Alternating quantified boolean formula, outermost block existential.

    blocks lists the variable names of each quantifier block in order; the
    formula is an AST over ("var", name) atoms with "not"/"and"/"or" nodes.
    Every block must contribute at least one variable occurring in the
    formula, and the formula may not mention undeclared names.
    """

    blocks: tuple[tuple[str, ...], ...]
    formula: Node

    def __post_init__(self):
        object.__setattr__(
            self, "blocks", tuple(tuple(b) for b in self.blocks)
        )
        if not self.blocks or any(not b for b in self.blocks):
            raise InvalidInstanceError("every quantifier block must be nonempty")
        declared = [name for block in self.blocks for name in block]
        if len(set(declared)) != len(declared):
            raise InvalidInstanceError("variable names must be distinct")
        used = set(formula_atoms(self.formula))
        undeclared = used - set(declared)
        if undeclared:
            raise InvalidInstanceError(
                f"formula mentions undeclared variables: {sorted(undeclared)}"
            )
        for bi, block in enumerate(self.blocks, start=1):
            if not used.intersection(block):
                raise InvalidInstanceError(
                    f"quantifier block {bi} never occurs in the formula"
                )

    @property
    def variable_count(self) -> int:
        return sum(len(b) for b in self.blocks)


def eval_qbf(q: QbfInstance, *, variable_budget: int = 24) -> bool:
    """Direct evaluation by quantifier recursion (exponential in variables)."""
    if q.variable_count > variable_budget:
        raise ResourceLimitError(
            f"variable budget of {variable_budget} exceeded"
        )
    blocks = q.blocks

    def go(bi: int, assignment: dict) -> bool:
        if bi == len(blocks):
            return eval_formula(q.formula, assignment)
        exists = bi % 2 == 0
        names = blocks[bi]
        for values in itertools.product((False, True), repeat=len(names)):
            assignment.update(zip(names, values))
            sub = go(bi + 1, assignment)
            if exists and sub:
                return True
            if not exists and not sub:
                return False
        return not exists

    return go(0, {})


def _rename_atoms(node: Node, mapping: dict) -> Node:
    tag = node[0]
    if tag == "var":
        return ("var", mapping[node[1]])
    if tag == "not":
        return ("not", _rename_atoms(node[1], mapping))
    return (tag, _rename_atoms(node[1], mapping), _rename_atoms(node[2], mapping))


def reduce_qbf_to_online_ucm(q: QbfInstance) -> ReductionResult:
    """Encode a QBF as an unweighted online instance of the formula system.

    Block i variable j becomes the indexed variable (i, j); the encoded
    formula text itself is the distinguished candidate, accompanied by
    enough zero-suffixed successor names for the vote tails to carry one bit
    vector per voter.  Pending voter i plays block i, coalition on the odd
    (existential) turns, so the instance answer equals the formula's truth.
    """
    mapping = {}
    for bi, block in enumerate(q.blocks, start=1):
        for vj, name in enumerate(block, start=1):
            mapping[name] = (bi, vj)
    encoded = _rename_atoms(q.formula, mapping)
    text = format_formula(encoded)
    max_block = max(len(b) for b in q.blocks)
    cands = (text,) + successor_names(text, 2 * max_block)
    pad = len(str(len(q.blocks)))
    pending = tuple(
        PendingVoter(name=f"{i:0{pad}d}", weight=1, is_manipulator=i % 2 == 1)
        for i in range(1, len(q.blocks) + 1)
    )
    snapshot = ElectionSnapshot(candidates=cands, cast=(), pending=pending)
    instance = ManipulationInstance(snapshot=snapshot, sigma=cands, d=text)
    variant = ProblemVariant(
        direction=Direction.CONSTRUCTIVE,
        target=TargetMode.SEGMENT,
        winner_model=WinnerModel.NONUNIQUE,
        quantifier_mode=QuantifierMode.ONLINE,
        weighted=False,
    )
    provenance = {
        "reduction": "qbf-to-online-formula-system",
        "block_sizes": [len(b) for b in q.blocks],
        "variable_map": {
            name: f"x_{{{i},{j}}}" for name, (i, j) in mapping.items()
        },
        "encoded_formula": text,
        "quantifiers": [
            "exists" if bi % 2 == 0 else "forall" for bi in range(len(q.blocks))
        ],
        "answer_tracks": "formula is true",
    }
    return ReductionResult(
        instance=instance,
        rule=TieredSystem(),
        variant=variant,
        provenance=provenance,
    )
