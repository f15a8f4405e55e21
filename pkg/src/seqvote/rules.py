"""Winner determination for weighted scoring rules and the formula system.

A scoring rule over m candidates assigns alpha_1 >= ... >= alpha_m >= 0
points by rank; a candidate's score is the weight-scaled sum over all votes
and the winner set is the argmax (no tie breaking).  Plurality is 1-approval;
k-approval scores 1 for the top k ranks; k-veto scores 1 everywhere except
the bottom k ranks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import InvalidInstanceError
from .tiered import tiered_winners


@dataclass(frozen=True)
class Plurality:
    pass


@dataclass(frozen=True)
class KApproval:
    k: int


@dataclass(frozen=True)
class KVeto:
    k: int


@dataclass(frozen=True)
class GeneralScoring:
    alpha: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(self.alpha))


@dataclass(frozen=True)
class TieredSystem:
    pass


VotingRule = Union[Plurality, KApproval, KVeto, GeneralScoring, TieredSystem]


def validate_alpha(alpha: Sequence[int]) -> tuple[int, ...]:
    alpha = tuple(alpha)
    if not alpha:
        raise InvalidInstanceError("a scoring vector needs at least one entry")
    for a in alpha:
        if not isinstance(a, int) or isinstance(a, bool) or a < 0:
            raise InvalidInstanceError(f"scoring vector entries must be ints >= 0, got {a!r}")
    if any(alpha[i] < alpha[i + 1] for i in range(len(alpha) - 1)):
        raise InvalidInstanceError(f"scoring vector must be non-increasing: {alpha}")
    return alpha


def scoring_vector(rule: VotingRule, m: int) -> tuple[int, ...]:
    """The length-m scoring vector of `rule`, or an error if none applies."""
    if m < 1:
        raise InvalidInstanceError("scoring rules need at least one candidate")
    if isinstance(rule, Plurality):
        return (1,) + (0,) * (m - 1)
    if isinstance(rule, KApproval):
        if rule.k < 1 or m < rule.k:
            raise InvalidInstanceError(f"{rule.k}-approval needs 1 <= k <= m, got m={m}")
        return (1,) * rule.k + (0,) * (m - rule.k)
    if isinstance(rule, KVeto):
        if rule.k < 1 or m < rule.k:
            raise InvalidInstanceError(f"{rule.k}-veto needs 1 <= k <= m, got m={m}")
        return (1,) * (m - rule.k) + (0,) * rule.k
    if isinstance(rule, GeneralScoring):
        alpha = validate_alpha(rule.alpha)
        if len(alpha) != m:
            raise InvalidInstanceError(
                f"scoring vector has {len(alpha)} entries for {m} candidates"
            )
        return alpha
    raise InvalidInstanceError(f"{type(rule).__name__} has no scoring vector")


def scores(
    rule: VotingRule,
    candidates: Sequence[str],
    weighted_votes: Iterable[tuple[int, Sequence[str]]],
) -> dict[str, int]:
    """Total weighted score per candidate under a scoring rule."""
    candidates = tuple(candidates)
    alpha = scoring_vector(rule, len(candidates))
    cand_set = set(candidates)
    totals = {c: 0 for c in candidates}
    for weight, vote in weighted_votes:
        vote = tuple(vote)
        if len(vote) != len(candidates) or set(vote) != cand_set:
            raise InvalidInstanceError(f"vote {vote!r} is not a permutation of the candidates")
        for pos, c in enumerate(vote):
            totals[c] += weight * alpha[pos]
    return totals


def winners(
    rule: VotingRule,
    candidates: Sequence[str],
    weighted_votes: Iterable[tuple[int, Sequence[str]]],
) -> frozenset[str]:
    """Argmax of the scores; never empty for a non-empty candidate set."""
    if isinstance(rule, TieredSystem):
        raise InvalidInstanceError(
            "the formula system needs voter names, use election_winners"
        )
    totals = scores(rule, candidates, weighted_votes)
    top = max(totals.values())
    return frozenset(c for c, s in totals.items() if s == top)


def election_winners(
    rule: VotingRule,
    candidates: Sequence[str],
    named_votes: Iterable[tuple[str, int, Sequence[str]]],
) -> frozenset[str]:
    """Winner set of a complete election given (name, weight, vote) triples."""
    named_votes = list(named_votes)
    if isinstance(rule, TieredSystem):
        return tiered_winners(candidates, named_votes)
    return winners(rule, candidates, [(w, v) for _, w, v in named_votes])


def rule_to_json(rule: VotingRule) -> dict:
    if isinstance(rule, Plurality):
        return {"type": "plurality"}
    if isinstance(rule, KApproval):
        return {"type": "kapproval", "k": rule.k}
    if isinstance(rule, KVeto):
        return {"type": "kveto", "k": rule.k}
    if isinstance(rule, GeneralScoring):
        return {"type": "scoring", "alpha": list(rule.alpha)}
    if isinstance(rule, TieredSystem):
        return {"type": "tiered"}
    raise InvalidInstanceError(f"unknown rule {rule!r}")


def rule_from_json(doc: dict) -> VotingRule:
    if not isinstance(doc, dict) or "type" not in doc:
        raise InvalidInstanceError("rule must be an object with a 'type' field")
    kind = doc["type"]
    fields = {
        "plurality": set(),
        "kapproval": {"k"},
        "kveto": {"k"},
        "scoring": {"alpha"},
        "tiered": set(),
    }
    if kind not in fields:
        raise InvalidInstanceError(f"unknown rule type {kind!r}")
    extra = set(doc) - fields[kind] - {"type"}
    missing = fields[kind] - set(doc)
    if extra:
        raise InvalidInstanceError(f"unknown rule fields: {sorted(extra)}")
    if missing:
        raise InvalidInstanceError(f"rule type {kind!r} needs fields: {sorted(missing)}")
    if kind == "plurality":
        return Plurality()
    if kind == "kapproval":
        return KApproval(k=_int_field(doc["k"], "k"))
    if kind == "kveto":
        return KVeto(k=_int_field(doc["k"], "k"))
    if kind == "tiered":
        return TieredSystem()
    alpha = doc["alpha"]
    if not isinstance(alpha, list):
        raise InvalidInstanceError("alpha must be a list of ints")
    return GeneralScoring(alpha=validate_alpha(tuple(_int_field(a, "alpha entry") for a in alpha)))


def _int_field(value, label: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise InvalidInstanceError(f"{label} must be an integer, got {value!r}")
    return value
