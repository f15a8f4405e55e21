"""Exact decision procedures for manipulation of sequential elections.

solve() plays the alternating game over the pending voters: coalition turns
are existential, all other turns universal, and a leaf checks the winner set
of the completed election against the goal derived from the variant.  States
are memoized per score vector for scoring rules; the formula system hashes
the full vote history unless canonical move grouping is switched on.

solve_schedule_robust() answers the non-adaptive variant: one vote per
remaining coalition member is committed up front and must work against every
interleaving of the remaining voters and every choice of the other votes.
For anonymous scoring rules the interleaving quantifier is collapsed; for
the formula system all orders are enumerated.
"""

from __future__ import annotations

import itertools
from dataclasses import replace
from functools import lru_cache
from typing import Optional, Sequence

from .core import (
    Decision,
    Direction,
    ElectionSnapshot,
    ManipulationInstance,
    ProblemVariant,
    QuantifierMode,
    TargetMode,
    WinnerModel,
    assert_valid,
    goal_set,
    name_key,
)
from .errors import FormulaSyntaxError, InvalidInstanceError, ResourceLimitError
from .rules import TieredSystem, VotingRule, election_winners, scoring_vector
from .tiered import decode_assignment, eval_formula, parse_tiered_formula

DEFAULT_NODE_BUDGET = 10_000_000


@lru_cache(maxsize=None)
def _perms(m: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.permutations(range(m)))


@lru_cache(maxsize=None)
def _contribs(alpha: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """Per-candidate score contribution of every vote, aligned with _perms."""
    m = len(alpha)
    out = []
    for perm in _perms(m):
        row = [0] * m
        for pos, cand in enumerate(perm):
            row[cand] = alpha[pos]
        out.append(tuple(row))
    return tuple(out)


@lru_cache(maxsize=None)
def _vote_names(candidates: tuple[str, ...]) -> tuple[tuple[str, ...], ...]:
    return tuple(
        tuple(candidates[i] for i in perm) for perm in _perms(len(candidates))
    )


def winner_predicate(variant: ProblemVariant, special: frozenset):
    """Predicate on winner sets.

    `special` is the goal set for constructive variants and the forbidden
    zone for destructive ones; the predicate accepts any iterable of winners.
    """
    if variant.direction is Direction.CONSTRUCTIVE:
        if variant.winner_model is WinnerModel.NONUNIQUE:
            return lambda ws: any(w in special for w in ws)
        return lambda ws: len(ws) == 1 and next(iter(ws)) in special
    if variant.winner_model is WinnerModel.NONUNIQUE:
        return lambda ws: all(w not in special for w in ws)
    return lambda ws: not (len(ws) == 1 and next(iter(ws)) in special)


class _ScoringGame:
    """Search state machinery for scoring rules: a state is a score vector."""

    def __init__(self, instance, rule, variant, canonicalize):
        snap = instance.snapshot
        cands = snap.candidates
        m = len(cands)
        alpha = scoring_vector(rule, m)
        self.vote_names = _vote_names(cands)
        contribs = _contribs(alpha)
        index = {c: i for i, c in enumerate(cands)}
        start = [0] * m
        for v in snap.cast:
            for pos, cname in enumerate(v.vote):
                start[index[cname]] += v.weight * alpha[pos]
        self.root = tuple(start)
        self.full_moves = tuple(range(len(contribs)))
        if canonicalize:
            seen = set()
            reps = []
            for mid, row in enumerate(contribs):
                if row not in seen:
                    seen.add(row)
                    reps.append(mid)
            self._moves = tuple(reps)
        else:
            self._moves = self.full_moves
        self.deltas = [
            tuple(tuple(v.weight * x for x in row) for row in contribs)
            for v in snap.pending
        ]
        special = goal_set(instance.sigma, instance.d, variant.direction, variant.target)
        special_idx = frozenset(index[c] for c in special)
        pred = winner_predicate(variant, special_idx)
        rng = range(m)

        def leaf(state):
            top = max(state)
            return pred([i for i in rng if state[i] == top])

        self.leaf = leaf

    def moves(self, idx):
        return self._moves

    def child(self, state, idx, mid):
        delta = self.deltas[idx][mid]
        return tuple(a + b for a, b in zip(state, delta))

    def key(self, state, idx):
        return (idx, state)


class _TieredGame:
    """Search state machinery for the formula system.

    By default the state is the exact history of vote ids.  With canonical
    move grouping the state keeps only the decoded bit vector of each voter
    whose position in the name order feeds the formula, and each such voter
    offers one representative vote per bit vector (a single representative
    when the voter cannot influence the formula at all).
    """

    def __init__(self, instance, variant, canonicalize):
        snap = instance.snapshot
        cands = snap.candidates
        m = len(cands)
        self.vote_names = _vote_names(cands)
        self.full_moves = tuple(range(len(self.vote_names)))
        self.canonical = canonicalize
        self.root = ()

        least = min(cands, key=name_key)
        formula = None
        try:
            formula = parse_tiered_formula(least)
        except FormulaSyntaxError:
            pass
        total_voters = len(snap.cast) + len(snap.pending)
        degenerate = (
            formula is None
            or total_voters < formula.blocks
            or m < 1 + 2 * formula.width
            or {i for i, _ in formula.variables}
            != set(range(1, formula.blocks + 1))
        )

        special = goal_set(instance.sigma, instance.d, variant.direction, variant.target)
        pred = winner_predicate(variant, special)
        value_win = pred(cands)
        value_lose = pred(())

        n_pending = len(snap.pending)
        if degenerate:
            self._moves = [
                (self.full_moves[:1] if canonicalize else self.full_moves)
            ] * n_pending
            self.child = lambda state, idx, mid: state if canonicalize else state + (mid,)
            self.leaf = lambda state: value_lose
            self.key = lambda state, idx: (idx, state)
            return

        named = [(v.name, ("cast", ci)) for ci, v in enumerate(snap.cast)]
        named += [(v.name, ("pending", pi)) for pi, v in enumerate(snap.pending)]
        named.sort(key=lambda item: name_key(item[0]))
        order = [slot for _, slot in named[: formula.blocks]]

        width = formula.width
        decode = tuple(
            decode_assignment(vote, least, width) for vote in self.vote_names
        )
        cast_bits = {
            ci: decode_assignment(snap.cast[ci].vote, least, width)
            for kind, ci in order
            if kind == "cast"
        }
        relevant = [pi for kind, pi in order if kind == "pending"]
        slot_of = {pi: slot for slot, pi in enumerate(sorted(relevant))}

        if canonicalize:
            reps_by_bits = []
            seen = set()
            for mid in self.full_moves:
                if decode[mid] not in seen:
                    seen.add(decode[mid])
                    reps_by_bits.append(mid)
            reps_by_bits = tuple(reps_by_bits)
            self._moves = [
                reps_by_bits if pi in slot_of else self.full_moves[:1]
                for pi in range(n_pending)
            ]

            def child(state, idx, mid):
                if idx in slot_of:
                    return state + (decode[mid],)
                return state

        else:
            self._moves = [self.full_moves] * n_pending

            def child(state, idx, mid):
                return state + (mid,)

        fill = []
        for pos, (kind, which) in enumerate(order):
            targets = [(i, j) for (i, j) in formula.variables if i == pos + 1]
            fill.append((kind, which, targets))
        root_node = formula.root

        def leaf(state):
            assignment = {}
            for kind, which, targets in fill:
                if kind == "cast":
                    bits = cast_bits[which]
                elif self.canonical:
                    bits = state[slot_of[which]]
                else:
                    bits = decode[state[which]]
                for (i, j) in targets:
                    assignment[(i, j)] = bool(bits[j - 1])
            return value_win if eval_formula(root_node, assignment) else value_lose

        self.child = child
        self.leaf = leaf
        self.key = lambda state, idx: (idx, state)

    def moves(self, idx):
        return self._moves[idx]


def _make_game(instance, rule, variant, canonicalize):
    if isinstance(rule, TieredSystem):
        return _TieredGame(instance, variant, canonicalize)
    return _ScoringGame(instance, rule, variant, canonicalize)


def solve(
    instance: ManipulationInstance,
    rule: VotingRule,
    variant: ProblemVariant,
    *,
    budget: int = DEFAULT_NODE_BUDGET,
    memoize: bool = True,
    canonicalize: bool = False,
    want_trace: bool = False,
) -> Decision:
    """Decide whether the coalition can force its goal from the snapshot.

    Returns a Decision whose first_move is the lexicographically least
    winning vote for the first pending voter (on yes answers where that voter
    is a coalition member).  With want_trace a full strategy is extracted:
    a map from histories of pending votes to the coalition vote played next,
    defined along every line the strategy itself can reach.
    """
    assert_valid(instance, variant)
    if variant.quantifier_mode is QuantifierMode.SCHEDULE_ROBUST:
        return solve_schedule_robust(
            instance, rule, variant=variant, budget=budget, canonicalize=canonicalize
        )

    game = _make_game(instance, rule, variant, canonicalize)
    roles = tuple(v.is_manipulator for v in instance.snapshot.pending)
    n = len(roles)
    memo: dict = {}
    nodes = [0]

    def value(state, idx) -> bool:
        nodes[0] += 1
        if nodes[0] > budget:
            raise ResourceLimitError(f"node budget of {budget} exceeded")
        if idx == n:
            return game.leaf(state)
        key = None
        if memoize:
            key = game.key(state, idx)
            hit = memo.get(key)
            if hit is not None:
                return hit
        exists = roles[idx]
        result = not exists
        for mid in game.moves(idx):
            sub = value(game.child(state, idx, mid), idx + 1)
            if exists and sub:
                result = True
                break
            if not exists and not sub:
                result = False
                break
        if memoize:
            memo[key] = result
        return result

    answer = value(game.root, 0)

    first_move = None
    if answer and roles[0]:
        for mid in game.moves(0):
            if value(game.child(game.root, 0, mid), 1):
                first_move = game.vote_names[mid]
                break

    trace = None
    if answer and want_trace:
        trace = {}

        def build(state, idx, hist):
            if idx == n:
                return
            if roles[idx]:
                for mid in game.moves(idx):
                    child = game.child(state, idx, mid)
                    if value(child, idx + 1):
                        vote = game.vote_names[mid]
                        trace[hist] = vote
                        build(child, idx + 1, hist + (vote,))
                        return
                raise AssertionError("winning strategy lost at a coalition node")
            for mid in game.full_moves:
                child = game.child(state, idx, mid)
                build(child, idx + 1, hist + (game.vote_names[mid],))

        build(game.root, 0, ())

    return Decision(answer=answer, first_move=first_move, trace=trace, nodes=nodes[0])


def full_profile(
    snapshot: ElectionSnapshot,
    sigma: Sequence[str],
    rule: VotingRule,
    variant: ProblemVariant,
    *,
    budget: int = DEFAULT_NODE_BUDGET,
    memoize: bool = True,
    canonicalize: bool = False,
) -> dict[str, bool]:
    """solve() once per candidate as d; keys appear in sigma order."""
    out = {}
    for d in sigma:
        instance = ManipulationInstance(snapshot=snapshot, sigma=tuple(sigma), d=d)
        out[d] = solve(
            instance,
            rule,
            variant,
            budget=budget,
            memoize=memoize,
            canonicalize=canonicalize,
        ).answer
    return out


def solve_schedule_robust(
    instance: ManipulationInstance,
    rule: VotingRule,
    *,
    variant: Optional[ProblemVariant] = None,
    budget: int = DEFAULT_NODE_BUDGET,
    canonicalize: bool = False,
) -> Decision:
    """Decide the committed-votes variant of the constructive segment goal.

    Asks for one vote per remaining coalition member, chosen before anything
    else happens, such that for every order in which the remaining voters
    could be interleaved and every choice of the other votes, the winner set
    meets the segment of sigma at or above d.  Canonical move grouping is
    honoured for scoring rules and ignored for the formula system.
    """
    if variant is None:
        variant = ProblemVariant(
            direction=Direction.CONSTRUCTIVE,
            target=TargetMode.SEGMENT,
            winner_model=WinnerModel.NONUNIQUE,
            quantifier_mode=QuantifierMode.SCHEDULE_ROBUST,
            weighted=True,
        )
    if (
        variant.direction is not Direction.CONSTRUCTIVE
        or variant.target is not TargetMode.SEGMENT
        or variant.winner_model is not WinnerModel.NONUNIQUE
    ):
        raise InvalidInstanceError(
            "schedule-robust solving covers the constructive segment goal "
            "with the nonunique winner model"
        )
    assert_valid(
        instance, replace(variant, quantifier_mode=QuantifierMode.SCHEDULE_ROBUST)
    )

    snap = instance.snapshot
    cands = snap.candidates
    votes = _vote_names(cands)
    tiered = isinstance(rule, TieredSystem)
    if canonicalize and not tiered:
        contribs = _contribs(scoring_vector(rule, len(cands)))
        seen = set()
        votes = tuple(
            votes[mid]
            for mid, row in enumerate(contribs)
            if row not in seen and not seen.add(row)
        )

    goal = goal_set(instance.sigma, instance.d, variant.direction, variant.target)
    pred = winner_predicate(variant, goal)
    cast_named = [(v.name, v.weight, v.vote) for v in snap.cast]
    manips = [i for i, v in enumerate(snap.pending) if v.is_manipulator]
    others = [i for i, v in enumerate(snap.pending) if not v.is_manipulator]
    orders = (
        list(itertools.permutations(range(len(snap.pending)))) if tiered else [None]
    )
    nodes = 0

    for committed in itertools.product(votes, repeat=len(manips)):
        chosen: dict[int, tuple[str, ...]] = dict(zip(manips, committed))
        ok = True
        for free in itertools.product(votes, repeat=len(others)):
            chosen.update(zip(others, free))
            for order in orders:
                seq = order if order is not None else range(len(snap.pending))
                named = cast_named + [
                    (snap.pending[i].name, snap.pending[i].weight, chosen[i])
                    for i in seq
                ]
                nodes += 1
                if nodes > budget:
                    raise ResourceLimitError(f"node budget of {budget} exceeded")
                if not pred(election_winners(rule, cands, named)):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            committed_votes = {
                snap.pending[i].name: vote for i, vote in zip(manips, committed)
            }
            return Decision(answer=True, committed_votes=committed_votes, nodes=nodes)
    return Decision(answer=False, nodes=nodes)


def replay(
    trace: dict,
    instance: ManipulationInstance,
    rule: VotingRule,
    variant: ProblemVariant,
) -> bool:
    """Check a strategy trace against every line of adversary play.

    True iff following the trace at coalition turns achieves the goal no
    matter what the other voters do.  A history the trace does not cover, or
    a recorded vote that is not a permutation of the candidates, fails the
    check.
    """
    assert_valid(instance, variant)
    if variant.quantifier_mode is QuantifierMode.SCHEDULE_ROBUST:
        raise InvalidInstanceError("replay covers the turn-based modes only")
    snap = instance.snapshot
    cands = snap.candidates
    goal = goal_set(instance.sigma, instance.d, variant.direction, variant.target)
    pred = winner_predicate(variant, goal)
    all_votes = _vote_names(cands)
    pending = snap.pending
    n = len(pending)
    cast_named = [(v.name, v.weight, v.vote) for v in snap.cast]
    legal = set(cands)

    def walk(chosen, idx, hist) -> bool:
        if idx == n:
            named = cast_named + [
                (pending[i].name, pending[i].weight, chosen[i]) for i in range(n)
            ]
            return pred(election_winners(rule, cands, named))
        if pending[idx].is_manipulator:
            vote = trace.get(hist)
            if vote is None:
                return False
            vote = tuple(vote)
            if len(vote) != len(cands) or set(vote) != legal:
                return False
            return walk(chosen + [vote], idx + 1, hist + (vote,))
        return all(
            walk(chosen + [v], idx + 1, hist + (v,)) for v in all_votes
        )

    return walk([], 0, ())
