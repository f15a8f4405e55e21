"""Instance families for cross-checking the fast procedures against solve.

Exhaustive families enumerate every instance of a bounded shape up to the
symmetries that provably cannot change either engine's answer (cast votes
matter only through their score table, pending voters only through their
weight/role sequence, the goal only through the chosen zone).  Each case
carries a key capturing that sufficient statistic so a runner can share
work between equivalent cases.  Randomized families draw from a seeded
generator for reproducibility.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional

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
from .errors import ResourceLimitError
from .fast import fast_solve
from .rules import GeneralScoring, KApproval, KVeto, Plurality, VotingRule
from .reductions import QbfInstance
from .solver import DEFAULT_NODE_BUDGET, solve

_LETTERS = "abcdefghij"


@dataclass(frozen=True)
class GridCase:
    instance: ManipulationInstance
    rule: VotingRule
    variant: ProblemVariant
    key: Optional[tuple] = None


def _candidates(m: int) -> tuple[str, ...]:
    return tuple(_LETTERS[:m])


def _segment_layout(cands, zone):
    """sigma placing the zone on top (in candidate order), d at its bottom."""
    inside = [c for c in cands if c in zone]
    outside = [c for c in cands if c not in zone]
    return tuple(inside + outside), inside[-1]


def _forbidden_layout(cands, zone):
    """sigma placing the zone at the bottom, d at its top."""
    inside = [c for c in cands if c in zone]
    outside = [c for c in cands if c not in zone]
    return tuple(outside + inside), inside[0]


def _zones(cands) -> Iterator[frozenset]:
    for r in range(1, len(cands) + 1):
        for combo in itertools.combinations(cands, r):
            yield frozenset(combo)


def _role_sequences(n: int) -> Iterator[tuple[bool, ...]]:
    """All role sequences of length n with the first voter in the coalition."""
    for rest in itertools.product((True, False), repeat=n - 1):
        yield (True,) + rest


def _online_variant(direction, weighted, winner_model=WinnerModel.NONUNIQUE):
    return ProblemVariant(
        direction=direction,
        target=TargetMode.SEGMENT,
        winner_model=winner_model,
        quantifier_mode=QuantifierMode.ONLINE,
        weighted=weighted,
    )


def _build(cands, cast, pending_cfg, sigma, d, rule, variant, key):
    pending = tuple(
        PendingVoter(name=f"u{i}", weight=w, is_manipulator=r)
        for i, (w, r) in enumerate(pending_cfg, start=1)
    )
    snapshot = ElectionSnapshot(candidates=cands, cast=cast, pending=pending)
    instance = ManipulationInstance(snapshot=snapshot, sigma=sigma, d=d)
    return GridCase(instance=instance, rule=rule, variant=variant, key=key)


def plurality_cases(
    m_values=(2, 3), max_voters=4, weights=(0, 1, 2)
) -> Iterator[GridCase]:
    """Every weighted plurality shape: both directions, every goal zone.

    Cast votes are enumerated as multisets of (top candidate, weight) since
    plurality only reads the top; pending voters as weight/role sequences.
    """
    rule = Plurality()
    for m in m_values:
        cands = _candidates(m)
        tops = list(itertools.product(range(m), weights))
        for total in range(1, max_voters + 1):
            for n_pending in range(1, total + 1):
                n_cast = total - n_pending
                for cast_spec in itertools.combinations_with_replacement(
                    tops, n_cast
                ):
                    cast = tuple(
                        CastVote(
                            name=f"v{i}",
                            weight=w,
                            vote=(cands[t],)
                            + tuple(c for c in cands if c != cands[t]),
                        )
                        for i, (t, w) in enumerate(cast_spec, start=1)
                    )
                    score_key = tuple(
                        sum(w for t, w in cast_spec if t == i) for i in range(m)
                    )
                    for weight_seq in itertools.product(weights, repeat=n_pending):
                        for roles in _role_sequences(n_pending):
                            pending_cfg = tuple(zip(weight_seq, roles))
                            for direction in Direction:
                                for zone in _zones(cands):
                                    if direction is Direction.CONSTRUCTIVE:
                                        sigma, d = _segment_layout(cands, zone)
                                    else:
                                        sigma, d = _forbidden_layout(cands, zone)
                                    key = (
                                        "plurality",
                                        m,
                                        direction.value,
                                        score_key,
                                        pending_cfg,
                                        zone,
                                    )
                                    yield _build(
                                        cands,
                                        cast,
                                        pending_cfg,
                                        sigma,
                                        d,
                                        rule,
                                        _online_variant(direction, True),
                                        key,
                                    )


def approval_family_cases(
    k_values=(1, 2), m_values=(2, 3, 4), max_voters=4
) -> Iterator[GridCase]:
    """Every unweighted k-approval and k-veto constructive shape.

    Cast votes are enumerated as multisets of approved candidate sets; the
    greedy procedure and the game tree both read nothing else.
    """
    for kind, k in itertools.product(("approval", "veto"), k_values):
        for m in m_values:
            if k > m:
                continue
            rule = KApproval(k) if kind == "approval" else KVeto(k)
            ell = k if kind == "approval" else m - k
            cands = _candidates(m)
            approved_sets = list(itertools.combinations(range(m), ell))
            for total in range(1, max_voters + 1):
                for n_pending in range(1, total + 1):
                    n_cast = total - n_pending
                    for cast_spec in itertools.combinations_with_replacement(
                        approved_sets, n_cast
                    ):
                        cast = tuple(
                            CastVote(
                                name=f"v{i}",
                                weight=1,
                                vote=tuple(cands[j] for j in apr)
                                + tuple(
                                    c
                                    for j, c in enumerate(cands)
                                    if j not in apr
                                ),
                            )
                            for i, apr in enumerate(cast_spec, start=1)
                        )
                        score_key = tuple(
                            sum(1 for apr in cast_spec if i in apr)
                            for i in range(m)
                        )
                        for roles in _role_sequences(n_pending):
                            pending_cfg = tuple((1, r) for r in roles)
                            for zone in _zones(cands):
                                sigma, d = _segment_layout(cands, zone)
                                key = (
                                    kind,
                                    k,
                                    m,
                                    score_key,
                                    roles,
                                    zone,
                                )
                                yield _build(
                                    cands,
                                    cast,
                                    pending_cfg,
                                    sigma,
                                    d,
                                    rule,
                                    _online_variant(
                                        Direction.CONSTRUCTIVE, False
                                    ),
                                    key,
                                )


def veto_exhaustive_cases(
    m=3, max_voters=4, weights=(0, 1, 2)
) -> Iterator[GridCase]:
    """Every weighted one-veto constructive shape for a small bound.

    Cast votes matter only as multisets of (vetoed candidate, weight).
    """
    rule = KVeto(1)
    cands = _candidates(m)
    vetoes = list(itertools.product(range(m), weights))
    for total in range(1, max_voters + 1):
        for n_pending in range(1, total + 1):
            n_cast = total - n_pending
            for cast_spec in itertools.combinations_with_replacement(
                vetoes, n_cast
            ):
                cast = tuple(
                    CastVote(
                        name=f"v{i}",
                        weight=w,
                        vote=tuple(c for c in cands if c != cands[t])
                        + (cands[t],),
                    )
                    for i, (t, w) in enumerate(cast_spec, start=1)
                )
                score_key = tuple(
                    sum(w for t, w in cast_spec if t == i) for i in range(m)
                )
                for weight_seq in itertools.product(weights, repeat=n_pending):
                    for roles in _role_sequences(n_pending):
                        pending_cfg = tuple(zip(weight_seq, roles))
                        for zone in _zones(cands):
                            sigma, d = _segment_layout(cands, zone)
                            key = (
                                "veto1",
                                m,
                                score_key,
                                pending_cfg,
                                zone,
                            )
                            yield _build(
                                cands,
                                cast,
                                pending_cfg,
                                sigma,
                                d,
                                rule,
                                _online_variant(Direction.CONSTRUCTIVE, True),
                                key,
                            )


def veto_random_cases(
    seed: int,
    count: int,
    *,
    m=4,
    max_cast=3,
    max_pending=5,
    max_weight=5,
) -> Iterator[GridCase]:
    """Seeded random weighted one-veto constructive instances."""
    rng = random.Random(seed)
    rule = KVeto(1)
    cands = _candidates(m)
    for _ in range(count):
        cast = tuple(
            CastVote(
                name=f"v{i}",
                weight=rng.randint(0, max_weight),
                vote=tuple(rng.sample(cands, m)),
            )
            for i in range(1, rng.randint(0, max_cast) + 1)
        )
        n_pending = rng.randint(1, max_pending)
        pending_cfg = tuple(
            (rng.randint(0, max_weight), True if i == 0 else rng.random() < 0.5)
            for i in range(n_pending)
        )
        sigma = tuple(rng.sample(cands, m))
        d = rng.choice(sigma)
        yield _build(
            cands,
            cast,
            pending_cfg,
            sigma,
            d,
            rule,
            _online_variant(Direction.CONSTRUCTIVE, True),
            None,
        )


def random_solver_cases(
    seed: int,
    count: int,
    *,
    m_values=(2, 3),
    max_cast=2,
    max_pending=3,
    max_weight=2,
    directions=(Direction.CONSTRUCTIVE, Direction.DESTRUCTIVE),
) -> Iterator[tuple[ManipulationInstance, VotingRule, ProblemVariant]]:
    """Seeded random scoring-rule instances across variants, for properties."""
    rng = random.Random(seed)
    for _ in range(count):
        m = rng.choice(m_values)
        cands = _candidates(m)
        rule = _random_rule(rng, m)
        cast = tuple(
            CastVote(
                name=f"v{i}",
                weight=rng.randint(1, max_weight),
                vote=tuple(rng.sample(cands, m)),
            )
            for i in range(1, rng.randint(0, max_cast) + 1)
        )
        n_pending = rng.randint(1, max_pending)
        pending = tuple(
            PendingVoter(
                name=f"u{i}",
                weight=rng.randint(1, max_weight),
                is_manipulator=i == 1 or rng.random() < 0.5,
            )
            for i in range(1, n_pending + 1)
        )
        direction = rng.choice(directions)
        if direction is Direction.CONSTRUCTIVE and rng.random() < 0.25:
            target = TargetMode.PINPOINT
        else:
            target = TargetMode.SEGMENT
        winner_model = rng.choice((WinnerModel.NONUNIQUE, WinnerModel.UNIQUE))
        variant = ProblemVariant(
            direction=direction,
            target=target,
            winner_model=winner_model,
            quantifier_mode=QuantifierMode.ONLINE,
            weighted=True,
        )
        sigma = tuple(rng.sample(cands, m))
        snapshot = ElectionSnapshot(candidates=cands, cast=cast, pending=pending)
        instance = ManipulationInstance(
            snapshot=snapshot, sigma=sigma, d=rng.choice(sigma)
        )
        yield instance, rule, variant


def _random_rule(rng: random.Random, m: int) -> VotingRule:
    pick = rng.randrange(4)
    if pick == 0:
        return Plurality()
    if pick == 1:
        return KApproval(rng.randint(1, m))
    if pick == 2:
        return KVeto(rng.randint(1, m))
    alpha = sorted((rng.randint(0, 3) for _ in range(m)), reverse=True)
    return GeneralScoring(tuple(alpha))


def random_qbf_instances(
    seed: int, count: int, *, max_blocks=3, max_block_vars=2
) -> Iterator[QbfInstance]:
    """Seeded random QBFs in which every declared variable occurs."""
    rng = random.Random(seed)
    for _ in range(count):
        n_blocks = rng.randint(1, max_blocks)
        blocks = tuple(
            tuple(f"v{b}_{j}" for j in range(1, rng.randint(1, max_block_vars) + 1))
            for b in range(1, n_blocks + 1)
        )
        names = [name for block in blocks for name in block]
        leaves: list = []
        for name in names:
            leaves.append(("var", name))
        for _ in range(rng.randint(0, 2)):
            leaves.append(("var", rng.choice(names)))
        leaves = [
            ("not", leaf) if rng.random() < 0.4 else leaf for leaf in leaves
        ]
        rng.shuffle(leaves)
        tree = leaves[0]
        for leaf in leaves[1:]:
            op = rng.choice(("and", "or"))
            if rng.random() < 0.5:
                tree = (op, tree, leaf)
            else:
                tree = (op, leaf, tree)
            if rng.random() < 0.15:
                tree = ("not", tree)
        yield QbfInstance(blocks=blocks, formula=tree)


def partition_multisets(max_len=8, max_weight=6) -> Iterator[tuple[int, ...]]:
    """Every even-sum multiset of weights in 1..max_weight up to max_len."""
    for z in range(1, max_len + 1):
        for combo in itertools.combinations_with_replacement(
            range(1, max_weight + 1), z
        ):
            if sum(combo) % 2 == 0:
                yield combo


@dataclass
class CrosscheckReport:
    checked: int = 0
    solved: int = 0
    disagreements: list = field(default_factory=list)
    incomplete: bool = False

    @property
    def ok(self) -> bool:
        return not self.disagreements and not self.incomplete


def run_crosscheck(
    cases: Iterable[GridCase],
    *,
    budget: int = DEFAULT_NODE_BUDGET,
    canonicalize: bool = True,
    max_disagreements: int = 5,
    progress: Optional[Callable[[int], None]] = None,
) -> CrosscheckReport:
    """Compare fast_solve against solve on every case.

    Cases sharing a key are solved once.  A blown budget flags the report as
    incomplete instead of failing.
    """
    report = CrosscheckReport()
    cache: dict = {}
    for case in cases:
        report.checked += 1
        if progress is not None and report.checked % 5000 == 0:
            progress(report.checked)
        answers = cache.get(case.key) if case.key is not None else None
        if answers is None:
            try:
                fast_answer = fast_solve(case.instance, case.rule, case.variant)
                game_answer = solve(
                    case.instance,
                    case.rule,
                    case.variant,
                    budget=budget,
                    canonicalize=canonicalize,
                )
            except ResourceLimitError:
                report.incomplete = True
                break
            answers = (fast_answer.answer, game_answer.answer)
            report.solved += 1
            if case.key is not None:
                cache[case.key] = answers
        if answers[0] != answers[1]:
            if len(report.disagreements) < max_disagreements:
                report.disagreements.append((case.key, case.instance, answers))
            else:
                break
    return report
