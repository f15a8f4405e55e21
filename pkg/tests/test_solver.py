"""Game-tree engine: answers, witnesses, traces, modes, resource limits."""

import itertools

import pytest

from seqvote.core import (
    CastVote,
    Decision,
    ElectionSnapshot,
    ManipulationInstance,
    PendingVoter,
    variant,
)
from seqvote.errors import InvalidInstanceError, ResourceLimitError
from seqvote.grids import random_solver_cases
from seqvote.rules import GeneralScoring, KVeto, Plurality, TieredSystem
from seqvote.solver import (
    full_profile,
    replay,
    solve,
    solve_schedule_robust,
)

from oracles import naive_game_value, naive_schedule_robust

ONLINE_W = variant("constructive", "segment", "nonunique", "online", weighted=True)


def make(candidates, cast, pending, sigma, d):
    snapshot = ElectionSnapshot(
        candidates=candidates,
        cast=tuple(CastVote(name=f"v{i}", weight=w, vote=v) for i, (w, v) in enumerate(cast, 1)),
        pending=tuple(
            PendingVoter(name=f"u{i}", weight=w, is_manipulator=r)
            for i, (w, r) in enumerate(pending, 1)
        ),
    )
    return ManipulationInstance(snapshot=snapshot, sigma=sigma, d=d)


class TestAgainstNaiveMinimax:
    def test_random_cases_match_plain_minimax(self):
        count = 0
        for instance, rule, var in random_solver_cases(97, 300):
            want = naive_game_value(instance, rule, var)
            got = solve(instance, rule, var)
            assert got.answer == want, (instance, rule, var)
            count += 1
        assert count == 300

    def test_all_variant_axes_on_a_fixed_snapshot(self):
        instance = make(
            ("a", "b", "c"),
            cast=[(1, ("b", "c", "a"))],
            pending=[(2, True), (1, False), (1, True)],
            sigma=("a", "c", "b"),
            d="c",
        )
        for direction in ("constructive", "destructive"):
            for target in ("segment", "pinpoint"):
                if direction == "destructive" and target == "pinpoint":
                    continue
                for model in ("nonunique", "unique"):
                    var = variant(direction, target, model, "online", weighted=True)
                    got = solve(instance, Plurality(), var).answer
                    want = naive_game_value(instance, Plurality(), var)
                    assert got == want, (direction, target, model)


class TestWitness:
    def test_first_move_is_lex_least_winning_vote(self):
        instance = make(
            ("a", "b"),
            cast=[(1, ("b", "a"))],
            pending=[(2, True)],
            sigma=("a", "b"),
            d="a",
        )
        decision = solve(instance, Plurality(), ONLINE_W)
        assert decision.answer is True
        assert decision.first_move == ("a", "b")

    def test_witness_absent_on_no(self):
        instance = make(
            ("a", "b"),
            cast=[(5, ("b", "a"))],
            pending=[(1, True)],
            sigma=("a", "b"),
            d="a",
        )
        decision = solve(instance, Plurality(), ONLINE_W)
        assert decision.answer is False
        assert decision.first_move is None

    def test_witness_absent_when_first_voter_not_coalition(self):
        freeform = variant(
            "constructive", "segment", "nonunique", "freeform", weighted=True
        )
        instance = make(
            ("a", "b"),
            cast=[],
            pending=[(0, False), (1, True)],
            sigma=("a", "b"),
            d="a",
        )
        decision = solve(instance, Plurality(), freeform)
        assert decision.answer is True
        assert decision.first_move is None

    def test_canonical_search_returns_identical_witness(self):
        for instance, rule, var in random_solver_cases(11, 120):
            plain = solve(instance, rule, var)
            grouped = solve(instance, rule, var, canonicalize=True)
            assert plain.answer == grouped.answer
            assert plain.first_move == grouped.first_move


class TestTrace:
    def trace_instance(self):
        return make(
            ("a", "b", "c"),
            cast=[(1, ("c", "a", "b"))],
            pending=[(1, True), (1, False), (1, True)],
            sigma=("a", "b", "c"),
            d="a",
        )

    def test_trace_replays_to_true(self):
        instance = self.trace_instance()
        decision = solve(instance, Plurality(), ONLINE_W, want_trace=True)
        assert decision.answer is True
        assert decision.trace
        assert replay(decision.trace, instance, Plurality(), ONLINE_W) is True

    def test_trace_covers_every_adversary_line(self):
        instance = self.trace_instance()
        decision = solve(instance, Plurality(), ONLINE_W, want_trace=True)
        # coalition moves at turns 0 and 2; the adversary at turn 1 has 6
        # votes, so the trace needs the empty history plus one entry per
        # reachable two-vote history.
        assert () in decision.trace
        assert len(decision.trace) == 7

    def test_corrupted_trace_fails_replay(self):
        instance = self.trace_instance()
        decision = solve(instance, Plurality(), ONLINE_W, want_trace=True)
        trace = dict(decision.trace)
        missing = dict(trace)
        some_deep_key = max(missing, key=lambda h: len(h))
        del missing[some_deep_key]
        assert replay(missing, instance, Plurality(), ONLINE_W) is False

    def test_wrong_move_fails_replay(self):
        instance = make(
            ("a", "b"),
            cast=[(1, ("b", "a"))],
            pending=[(2, True)],
            sigma=("a", "b"),
            d="a",
        )
        losing = {(): ("b", "a")}
        assert replay(losing, instance, Plurality(), ONLINE_W) is False

    def test_non_permutation_in_trace_fails_replay(self):
        instance = make(
            ("a", "b"),
            cast=[],
            pending=[(1, True)],
            sigma=("a", "b"),
            d="a",
        )
        assert replay({(): ("a", "a")}, instance, Plurality(), ONLINE_W) is False

    def test_canonical_traces_also_replay(self):
        for instance, rule, var in random_solver_cases(23, 60):
            decision = solve(instance, rule, var, canonicalize=True, want_trace=True)
            if decision.answer:
                assert replay(decision.trace, instance, rule, var) is True

    def test_tiered_trace_replays(self):
        name = "(x_{1,1}&x_{2,1})"
        cands = (name, name + "0", name + "00")
        unweighted = variant(
            "constructive", "segment", "nonunique", "online", weighted=False
        )
        instance = make(
            cands,
            cast=[],
            pending=[(1, True), (1, True)],
            sigma=cands,
            d=name,
        )
        decision = solve(instance, TieredSystem(), unweighted, want_trace=True)
        assert decision.answer is True
        assert replay(decision.trace, instance, TieredSystem(), unweighted) is True


class TestMemoAndBudget:
    def test_memo_equals_no_memo(self):
        for instance, rule, var in random_solver_cases(5, 150):
            a = solve(instance, rule, var, memoize=True).answer
            b = solve(instance, rule, var, memoize=False).answer
            assert a == b

    def test_budget_exhaustion_raises(self):
        instance = make(
            ("a", "b", "c"),
            cast=[],
            pending=[(1, True), (1, False), (1, True), (1, False)],
            sigma=("a", "b", "c"),
            d="a",
        )
        with pytest.raises(ResourceLimitError):
            solve(instance, Plurality(), ONLINE_W, budget=10)

    def test_nodes_are_reported(self):
        instance = make(
            ("a", "b"),
            cast=[],
            pending=[(1, True)],
            sigma=("a", "b"),
            d="a",
        )
        decision = solve(instance, Plurality(), ONLINE_W)
        assert decision.nodes >= 2


class TestFullProfile:
    def test_profile_keys_follow_sigma_order(self):
        instance = make(
            ("a", "b", "c"),
            cast=[(1, ("a", "b", "c"))],
            pending=[(1, True)],
            sigma=("c", "b", "a"),
            d="c",
        )
        profile = full_profile(
            instance.snapshot, instance.sigma, Plurality(), ONLINE_W
        )
        assert list(profile) == ["c", "b", "a"]

    def test_segment_profile_is_monotone_down_sigma(self):
        for instance, rule, var in random_solver_cases(31, 150):
            if var.target.value != "segment":
                continue
            profile = full_profile(instance.snapshot, instance.sigma, rule, var)
            values = [profile[c] for c in instance.sigma]
            assert values == sorted(values), (instance, rule, var, values)


class TestScheduleRobust:
    def sr(self):
        return variant(
            "constructive", "segment", "nonunique", "schedule-robust", weighted=True
        )

    def test_matches_naive_on_random_cases(self):
        checked = 0
        for instance, rule, var in random_solver_cases(13, 120, max_pending=3):
            got = solve_schedule_robust(instance, rule).answer
            want = naive_schedule_robust(instance, rule)
            assert got == want, (instance, rule)
            checked += 1
        assert checked == 120

    def test_committed_votes_returned_on_yes(self):
        instance = make(
            ("a", "b"),
            cast=[(1, ("b", "a"))],
            pending=[(2, True), (1, False)],
            sigma=("a", "b"),
            d="a",
        )
        decision = solve_schedule_robust(instance, Plurality())
        assert decision.answer is True
        assert set(decision.committed_votes) == {"u1"}
        assert decision.committed_votes["u1"] == ("a", "b")

    def test_solve_dispatches_schedule_robust_mode(self):
        instance = make(
            ("a", "b"),
            cast=[],
            pending=[(1, True)],
            sigma=("a", "b"),
            d="a",
        )
        decision = solve(instance, Plurality(), self.sr())
        assert isinstance(decision, Decision)
        assert decision.answer is True
        assert decision.committed_votes == {"u1": ("a", "b")}

    def test_rejects_other_goals(self):
        instance = make(
            ("a", "b"),
            cast=[],
            pending=[(1, True)],
            sigma=("a", "b"),
            d="a",
        )
        bad = variant(
            "destructive", "segment", "nonunique", "schedule-robust", weighted=True
        )
        with pytest.raises(InvalidInstanceError):
            solve_schedule_robust(instance, Plurality(), variant=bad)

    def test_yes_implies_turnwise_yes(self):
        freeform = variant(
            "constructive", "segment", "nonunique", "freeform", weighted=True
        )
        for instance, rule, var in random_solver_cases(41, 100, max_pending=3):
            if solve_schedule_robust(instance, rule).answer:
                assert solve(instance, rule, freeform).answer is True

    def test_tiered_order_quantifier_matters(self):
        # One coalition voter and one adversary: with the formula reading
        # only the name-least voter, the adversary vote matters in no order,
        # but a formula reading both voters can be beaten by reordering.
        name = "(x_{1,1}&x_{2,1})"
        cands = (name, name + "0", name + "00")
        instance = make(
            cands,
            cast=[],
            pending=[(1, True), (1, False)],
            sigma=cands,
            d=name,
        )
        got = solve_schedule_robust(
            instance,
            TieredSystem(),
            variant=variant(
                "constructive",
                "segment",
                "nonunique",
                "schedule-robust",
                weighted=False,
            ),
        )
        assert got.answer is naive_schedule_robust(instance, TieredSystem())


class TestFreeform:
    def test_adversary_first_changes_the_game(self):
        # Pending: adversary then coalition, equal weights.  Last mover wins
        # the plurality stack fight, so the coalition forces a tie with the
        # adversary stack; under nonunique winners a tie suffices.
        freeform = variant(
            "constructive", "segment", "nonunique", "freeform", weighted=True
        )
        instance = make(
            ("a", "b"),
            cast=[],
            pending=[(1, False), (1, True)],
            sigma=("a", "b"),
            d="a",
        )
        assert solve(instance, Plurality(), freeform).answer is True
        unique = variant(
            "constructive", "segment", "unique", "freeform", weighted=True
        )
        assert solve(instance, Plurality(), unique).answer is False

    def test_online_rejects_adversary_first(self):
        instance = make(
            ("a", "b"),
            cast=[],
            pending=[(1, False), (1, True)],
            sigma=("a", "b"),
            d="a",
        )
        with pytest.raises(InvalidInstanceError):
            solve(instance, Plurality(), ONLINE_W)


class TestTieredSolving:
    UNWEIGHTED = variant(
        "constructive", "segment", "nonunique", "online", weighted=False
    )

    def test_degenerate_name_everyone_loses(self):
        instance = make(
            ("a", "b"),
            cast=[],
            pending=[(1, True)],
            sigma=("a", "b"),
            d="a",
        )
        assert solve(instance, TieredSystem(), self.UNWEIGHTED).answer is False

    def test_degenerate_name_makes_destructive_trivial(self):
        destructive = variant(
            "destructive", "segment", "nonunique", "online", weighted=False
        )
        instance = make(
            ("a", "b"),
            cast=[],
            pending=[(1, True)],
            sigma=("a", "b"),
            d="a",
        )
        assert solve(instance, TieredSystem(), destructive).answer is True

    def test_single_existential_voter_controls_formula(self):
        name = "x_{1,1}"
        cands = (name, name + "0", name + "00")
        instance = make(
            cands, cast=[], pending=[(1, True)], sigma=cands, d=name
        )
        decision = solve(instance, TieredSystem(), self.UNWEIGHTED)
        assert decision.answer is True

    def test_universal_voter_controls_negated_formula(self):
        name = "!x_{1,1}"
        cands = (name, name + "0", name + "00")
        freeform = variant(
            "constructive", "segment", "nonunique", "freeform", weighted=False
        )
        instance = make(
            cands, cast=[], pending=[(1, False)], sigma=cands, d=name
        )
        assert solve(instance, TieredSystem(), freeform).answer is False

    def test_canonical_equals_plain_on_tiered(self):
        name = "(x_{1,1}|!x_{2,1})"
        cands = (name, name + "0", name + "00")
        for roles in itertools.product((True, False), repeat=2):
            freeform = variant(
                "constructive", "segment", "nonunique", "freeform", weighted=False
            )
            instance = make(
                cands,
                cast=[],
                pending=[(1, roles[0]), (1, roles[1])],
                sigma=cands,
                d=name,
            )
            plain = solve(instance, TieredSystem(), freeform)
            grouped = solve(instance, TieredSystem(), freeform, canonicalize=True)
            assert plain.answer == grouped.answer
            assert plain.first_move == grouped.first_move
            assert grouped.nodes <= plain.nodes

    def test_cast_votes_feed_the_formula(self):
        name = "x_{1,1}"
        cands = (name, name + "0", name + "00")
        # voter "0" sorts before the pending voter and already fixed the bit
        snapshot = ElectionSnapshot(
            candidates=cands,
            cast=(
                CastVote(
                    name="0", weight=1, vote=(name + "0", name, name + "00")
                ),
            ),
            pending=(PendingVoter(name="1", weight=1, is_manipulator=True),),
        )
        instance = ManipulationInstance(snapshot=snapshot, sigma=cands, d=name)
        decision = solve(instance, TieredSystem(), self.UNWEIGHTED)
        assert decision.answer is True
        # and the adversarial pending voter cannot undo it
        snapshot2 = ElectionSnapshot(
            candidates=cands,
            cast=snapshot.cast,
            pending=(PendingVoter(name="1", weight=1, is_manipulator=False),),
        )
        freeform = variant(
            "constructive", "segment", "nonunique", "freeform", weighted=False
        )
        instance2 = ManipulationInstance(snapshot=snapshot2, sigma=cands, d=name)
        assert solve(instance2, TieredSystem(), freeform).answer is True


class TestGeneralScoringSolve:
    def test_borda_style_vector(self):
        instance = make(
            ("a", "b", "c"),
            cast=[(1, ("c", "b", "a")), (1, ("b", "c", "a"))],
            pending=[(1, True), (1, True)],
            sigma=("a", "b", "c"),
            d="a",
        )
        rule = GeneralScoring((2, 1, 0))
        got = solve(instance, rule, ONLINE_W).answer
        assert got == naive_game_value(instance, rule, ONLINE_W)

    def test_veto_rule_matches_naive(self):
        instance = make(
            ("a", "b", "c"),
            cast=[(2, ("a", "b", "c"))],
            pending=[(1, True), (2, False)],
            sigma=("b", "a", "c"),
            d="b",
        )
        got = solve(instance, KVeto(1), ONLINE_W).answer
        assert got == naive_game_value(instance, KVeto(1), ONLINE_W)
