"""Polynomial-time decision procedures for specific rule/variant slices.

Each procedure answers the same question as solver.solve on its slice, by a
closed-form score comparison, a greedy simulation, or a threshold search
with a bin-packing feasibility core.  fast_solve dispatches on rule and
variant and raises NoFastAlgorithmError outside the covered slices.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .core import (
    Direction,
    ManipulationInstance,
    ProblemVariant,
    QuantifierMode,
    TargetMode,
    WinnerModel,
    assert_valid,
    goal_set,
)
from .errors import InvalidInstanceError, NoFastAlgorithmError, ResourceLimitError
from .rules import (
    KApproval,
    KVeto,
    Plurality,
    VotingRule,
    scores,
    scoring_vector,
    validate_alpha,
)

DEFAULT_STATE_BUDGET = 10_000_000


def proper_sub(x: int, y: int) -> int:
    """Subtraction clamped at zero."""
    return x - y if x > y else 0


@dataclass(frozen=True)
class ThresholdReport:
    """Witness data for the weighted one-veto threshold test.

    t1 is the least cap enforceable on every candidate strictly below d in
    sigma using only coalition vetoes; t2 is the least cap enforceable on the
    segment at or above d using only the other pending vetoes.  The partition
    tuples list the veto weights routed to each candidate of the respective
    zone, aligned with sigma order.
    """

    t1: int
    t2: int
    below_partition: tuple[tuple[int, ...], ...]
    above_partition: tuple[tuple[int, ...], ...]


class RuleClass(Enum):
    POLYNOMIAL_TIME = "polynomial-time"
    NP_HARD = "np-hard"


@dataclass(frozen=True)
class FastResult:
    answer: bool
    thresholds: Optional[ThresholdReport] = None


def _segment_variant(direction: Direction) -> ProblemVariant:
    return ProblemVariant(
        direction=direction,
        target=TargetMode.SEGMENT,
        winner_model=WinnerModel.NONUNIQUE,
        quantifier_mode=QuantifierMode.ONLINE,
        weighted=True,
    )


def plurality_wcm(instance: ManipulationInstance) -> bool:
    """Constructive segment nonunique manipulation under plurality.

    The coalition pools its weight on its best goal candidate; the others
    pool theirs on the best outsider.  Comparing the two stacks decides the
    game because every pending voter moves a single stack.
    """
    assert_valid(instance, _segment_variant(Direction.CONSTRUCTIVE))
    snap = instance.snapshot
    goal = goal_set(instance.sigma, instance.d, Direction.CONSTRUCTIVE)
    if goal == set(snap.candidates):
        return True
    s = scores(
        Plurality(), snap.candidates, [(v.weight, v.vote) for v in snap.cast]
    )
    w_coalition = sum(v.weight for v in snap.manipulators())
    w_others = sum(v.weight for v in snap.nonmanipulators())
    best_goal = max(s[c] for c in snap.candidates if c in goal) + w_coalition
    best_out = max(s[c] for c in snap.candidates if c not in goal) + w_others
    return best_goal >= best_out


def plurality_dwcm(instance: ManipulationInstance) -> bool:
    """Destructive segment nonunique manipulation under plurality.

    The coalition must push some candidate outside the forbidden zone
    strictly past everything the other voters can build inside it.
    """
    assert_valid(instance, _segment_variant(Direction.DESTRUCTIVE))
    snap = instance.snapshot
    forbidden = goal_set(instance.sigma, instance.d, Direction.DESTRUCTIVE)
    if forbidden == set(snap.candidates):
        return False
    s = scores(
        Plurality(), snap.candidates, [(v.weight, v.vote) for v in snap.cast]
    )
    w_coalition = sum(v.weight for v in snap.manipulators())
    w_others = sum(v.weight for v in snap.nonmanipulators())
    best_out = max(s[c] for c in snap.candidates if c not in forbidden) + w_coalition
    best_forbidden = (
        max(s[c] for c in snap.candidates if c in forbidden) + w_others
    )
    return best_out > best_forbidden


def approval_veto_ucm_greedy(
    instance: ManipulationInstance, rule: VotingRule
) -> bool:
    """Unweighted constructive segment manipulation for approval-style rules.

    Simulates the pending sequence: a coalition voter approves the currently
    strongest goal candidates, any other voter approves the currently
    weakest non-goal candidates (wasting approvals away from the goal as the
    worst case).  The simulation's outcome decides the game.
    """
    snap = instance.snapshot
    m = len(snap.candidates)
    if isinstance(rule, Plurality):
        ell = 1
    elif isinstance(rule, KApproval):
        ell = rule.k
    elif isinstance(rule, KVeto):
        ell = m - rule.k
    else:
        raise InvalidInstanceError(
            "the greedy procedure covers plurality, k-approval and k-veto"
        )
    scoring_vector(rule, m)
    variant = ProblemVariant(
        direction=Direction.CONSTRUCTIVE,
        target=TargetMode.SEGMENT,
        winner_model=WinnerModel.NONUNIQUE,
        quantifier_mode=QuantifierMode.ONLINE,
        weighted=False,
    )
    assert_valid(instance, variant)
    goal = goal_set(instance.sigma, instance.d, Direction.CONSTRUCTIVE)
    approvals = dict(
        scores(rule, snap.candidates, [(v.weight, v.vote) for v in snap.cast])
    )
    index = {c: i for i, c in enumerate(snap.candidates)}
    goal_cands = [c for c in snap.candidates if c in goal]
    rest = [c for c in snap.candidates if c not in goal]
    for voter in snap.pending:
        ranked = sorted(goal_cands, key=lambda c: (-approvals[c], index[c]))
        ranked += sorted(rest, key=lambda c: (approvals[c], index[c]))
        if voter.is_manipulator:
            approved = ranked[:ell]
        else:
            approved = ranked[len(ranked) - ell :] if ell else []
        for c in approved:
            approvals[c] += 1
    top = max(approvals.values())
    return any(approvals[c] == top for c in goal_cands)


def veto1_threshold(instance: ManipulationInstance) -> bool:
    """Unweighted constructive segment manipulation under one-veto.

    Searches for a veto cap t such that the coalition's vetoes can pin every
    candidate strictly below d in sigma under t while the remaining vetoes
    cannot drag the whole segment at or above d under t as well.
    """
    variant = ProblemVariant(
        direction=Direction.CONSTRUCTIVE,
        target=TargetMode.SEGMENT,
        winner_model=WinnerModel.NONUNIQUE,
        quantifier_mode=QuantifierMode.ONLINE,
        weighted=False,
    )
    assert_valid(instance, variant)
    snap = instance.snapshot
    pos = instance.sigma.index(instance.d)
    above = instance.sigma[: pos + 1]
    below = instance.sigma[pos + 1 :]
    if not below:
        return True
    cast_scores = scores(
        KVeto(1), snap.candidates, [(v.weight, v.vote) for v in snap.cast]
    )
    pend = len(snap.pending)
    reach = {c: cast_scores[c] + pend for c in snap.candidates}
    n_coalition = len(snap.manipulators())
    n_others = len(snap.nonmanipulators())
    for t in range(max(reach.values()) + 1):
        need = sum(proper_sub(reach[c], t) for c in below)
        if need > n_coalition:
            continue
        block = sum(proper_sub(reach[c], t - 1) for c in above)
        if block > n_others:
            return True
    return False


def partition_feasible(
    weights: Sequence[int],
    demands: Sequence[int],
    *,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> bool:
    """Can the weights be split into groups covering every demand exactly?

    Each weight goes to exactly one group; group i is satisfied once the sum
    of its weights reaches demands[i] (overshoot allowed).  With no groups
    the answer is yes only for an empty weight list.
    """
    return _partition_search(weights, demands, state_budget) is not None


def _partition_search(
    weights: Sequence[int], demands: Sequence[int], state_budget: int
) -> Optional[list[int]]:
    ws = [int(w) for w in weights]
    if any(isinstance(w, bool) or not isinstance(w, int) or w < 0 for w in weights):
        raise InvalidInstanceError("weights must be non-negative integers")
    if any(isinstance(d, bool) or not isinstance(d, int) or d < 0 for d in demands):
        raise InvalidInstanceError("demands must be non-negative integers")
    k = len(demands)
    if k == 0:
        return [] if not ws else None
    n = len(ws)
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + ws[i]
    failed: set = set()
    states = [0]

    def dfs(i: int, residual: tuple[int, ...]) -> Optional[list[int]]:
        if sum(residual) > suffix[i]:
            return None
        if i == n:
            return []
        key = (i, residual)
        if key in failed:
            return None
        states[0] += 1
        if states[0] > state_budget:
            raise ResourceLimitError(f"state budget of {state_budget} exceeded")
        w = ws[i]
        seen = set()
        for b in range(k):
            nxt = residual[:b] + (proper_sub(residual[b], w),) + residual[b + 1 :]
            if nxt in seen:
                continue
            seen.add(nxt)
            sub = dfs(i + 1, nxt)
            if sub is not None:
                return [b] + sub
        failed.add(key)
        return None

    return dfs(0, tuple(int(d) for d in demands))


def _minimal_threshold(
    weights: list[int], reaches: list[int], state_budget: int
) -> tuple[int, tuple[tuple[int, ...], ...]]:
    """Least cap t such that the weights can pin every reach value under t.

    Feasibility is monotone in t (demands only shrink), so binary search
    applies; the cap max(reaches) is always feasible.  Returns the cap and
    the witnessing weight groups, one per reach value.
    """
    if not reaches:
        return 0, ()
    lo, hi = 0, max(reaches)
    while lo < hi:
        mid = (lo + hi) // 2
        if partition_feasible(
            weights,
            [proper_sub(r, mid) for r in reaches],
            state_budget=state_budget,
        ):
            hi = mid
        else:
            lo = mid + 1
    assignment = _partition_search(
        weights, [proper_sub(r, lo) for r in reaches], state_budget
    )
    groups: list[list[int]] = [[] for _ in reaches]
    for w, b in zip(weights, assignment or []):
        groups[b].append(w)
    return lo, tuple(tuple(g) for g in groups)


def veto_wcm_thresholds(
    instance: ManipulationInstance, *, state_budget: int = DEFAULT_STATE_BUDGET
) -> tuple[bool, ThresholdReport]:
    """Weighted constructive segment manipulation under one-veto.

    The coalition wins iff the least cap its veto weights can force on the
    zone strictly below d does not exceed the least cap the other pending
    veto weights can force on the zone at or above d.
    """
    assert_valid(instance, _segment_variant(Direction.CONSTRUCTIVE))
    snap = instance.snapshot
    pos = instance.sigma.index(instance.d)
    above = instance.sigma[: pos + 1]
    below = instance.sigma[pos + 1 :]
    cast_scores = scores(
        KVeto(1), snap.candidates, [(v.weight, v.vote) for v in snap.cast]
    )
    pending_weight = sum(v.weight for v in snap.pending)
    reach = {c: cast_scores[c] + pending_weight for c in snap.candidates}
    coalition = [v.weight for v in snap.manipulators()]
    others = [v.weight for v in snap.nonmanipulators()]
    t1, below_groups = _minimal_threshold(
        coalition, [reach[c] for c in below], state_budget
    )
    t2, above_groups = _minimal_threshold(
        others, [reach[c] for c in above], state_budget
    )
    report = ThresholdReport(
        t1=t1, t2=t2, below_partition=below_groups, above_partition=above_groups
    )
    return t1 <= t2, report


def classify_scoring_rule(alpha: Sequence[int]) -> RuleClass:
    """Complexity of weighted coalition manipulation for a scoring vector.

    Polynomial time exactly when at most one candidate exists or all entries
    after the first coincide (plurality-like vectors, including constant
    ones); every other vector yields an NP-hard problem.
    """
    vec = tuple(alpha)
    validate_alpha(vec)
    if len(vec) <= 1 or vec[1] == vec[-1]:
        return RuleClass.POLYNOMIAL_TIME
    return RuleClass.NP_HARD


def fast_solve(
    instance: ManipulationInstance,
    rule: VotingRule,
    variant: ProblemVariant,
    *,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> FastResult:
    """Dispatch to the fast procedure covering (rule, variant), if any."""
    assert_valid(instance, variant)
    r = rule
    m = len(instance.snapshot.candidates)
    if isinstance(r, KApproval) and r.k == 1:
        r = Plurality()
    if isinstance(r, KVeto) and r.k < m and m - r.k == 1:
        r = Plurality()
    segment_nu = (
        variant.target is TargetMode.SEGMENT
        and variant.winner_model is WinnerModel.NONUNIQUE
        and variant.quantifier_mode is QuantifierMode.ONLINE
        and variant.manipulator_bound is None
    )
    if segment_nu and isinstance(r, Plurality):
        if variant.direction is Direction.CONSTRUCTIVE:
            return FastResult(answer=plurality_wcm(instance))
        return FastResult(answer=plurality_dwcm(instance))
    if (
        segment_nu
        and variant.direction is Direction.CONSTRUCTIVE
        and isinstance(r, (KApproval, KVeto))
    ):
        if not variant.weighted:
            return FastResult(answer=approval_veto_ucm_greedy(instance, r))
        if isinstance(r, KVeto) and r.k == 1:
            answer, report = veto_wcm_thresholds(
                instance, state_budget=state_budget
            )
            return FastResult(answer=answer, thresholds=report)
    raise NoFastAlgorithmError(
        "no fast procedure for this rule/variant; covered: plurality "
        "constructive or destructive segment nonunique online (any weights), "
        "k-approval and k-veto constructive segment nonunique online "
        "unweighted, and one-veto constructive segment nonunique online "
        "weighted"
    )
