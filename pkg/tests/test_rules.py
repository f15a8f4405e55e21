"""Scoring rules: vectors, tallies, winner sets, JSON round trips."""

import pytest
from hypothesis import given, strategies as st

from seqvote.errors import InvalidInstanceError
from seqvote.rules import (
    GeneralScoring,
    KApproval,
    KVeto,
    Plurality,
    TieredSystem,
    election_winners,
    rule_from_json,
    rule_to_json,
    scores,
    scoring_vector,
    validate_alpha,
    winners,
)

from oracles import naive_scores, naive_winners


class TestScoringVector:
    def test_plurality(self):
        assert scoring_vector(Plurality(), 4) == (1, 0, 0, 0)
        assert scoring_vector(Plurality(), 1) == (1,)

    def test_kapproval(self):
        assert scoring_vector(KApproval(2), 4) == (1, 1, 0, 0)
        assert scoring_vector(KApproval(4), 4) == (1, 1, 1, 1)

    def test_kveto(self):
        assert scoring_vector(KVeto(1), 4) == (1, 1, 1, 0)
        assert scoring_vector(KVeto(4), 4) == (0, 0, 0, 0)

    def test_k_larger_than_m_rejected(self):
        with pytest.raises(InvalidInstanceError):
            scoring_vector(KApproval(3), 2)
        with pytest.raises(InvalidInstanceError):
            scoring_vector(KVeto(3), 2)

    def test_general_vector_must_match_m(self):
        assert scoring_vector(GeneralScoring((3, 2, 0)), 3) == (3, 2, 0)
        with pytest.raises(InvalidInstanceError):
            scoring_vector(GeneralScoring((3, 2, 0)), 4)

    def test_increasing_vector_rejected(self):
        with pytest.raises(InvalidInstanceError):
            validate_alpha((1, 2))

    def test_negative_entries_rejected(self):
        with pytest.raises(InvalidInstanceError):
            validate_alpha((1, -1))

    def test_bool_entries_rejected(self):
        with pytest.raises(InvalidInstanceError):
            validate_alpha((True, False))


class TestScoresAndWinners:
    def test_frozen_borda_example(self):
        cands = ("a", "b", "c")
        votes = [(1, ("a", "b", "c")), (2, ("c", "b", "a"))]
        got = scores(GeneralScoring((2, 1, 0)), cands, votes)
        assert got == {"a": 2, "b": 3, "c": 4}
        assert winners(GeneralScoring((2, 1, 0)), cands, votes) == frozenset({"c"})

    def test_winner_sets_keep_all_tied_candidates(self):
        cands = ("a", "b")
        votes = [(1, ("a", "b")), (1, ("b", "a"))]
        assert winners(Plurality(), cands, votes) == frozenset({"a", "b"})

    def test_non_permutation_vote_rejected(self):
        with pytest.raises(InvalidInstanceError):
            scores(Plurality(), ("a", "b"), [(1, ("a", "a"))])

    def test_zero_votes_tie_everyone(self):
        assert winners(Plurality(), ("a", "b", "c"), []) == frozenset("abc")

    def test_formula_system_needs_named_votes(self):
        with pytest.raises(InvalidInstanceError):
            winners(TieredSystem(), ("a", "b"), [(1, ("a", "b"))])

    @given(
        st.integers(2, 4).flatmap(
            lambda m: st.tuples(
                st.just(m),
                st.lists(
                    st.tuples(st.integers(0, 3), st.permutations(range(m))),
                    max_size=5,
                ),
                st.lists(st.integers(0, 4), min_size=m, max_size=m).map(
                    lambda xs: tuple(sorted(xs, reverse=True))
                ),
            )
        )
    )
    def test_matches_naive_tally(self, data):
        m, raw_votes, alpha = data
        cands = tuple("abcd"[:m])
        votes = [(w, tuple(cands[i] for i in p)) for w, p in raw_votes]
        rule = GeneralScoring(alpha)
        assert scores(rule, cands, votes) == naive_scores(alpha, cands, votes)
        assert winners(rule, cands, votes) == naive_winners(alpha, cands, votes)

    @given(
        st.integers(2, 4).flatmap(
            lambda m: st.tuples(
                st.just(m),
                st.lists(
                    st.tuples(st.integers(0, 3), st.permutations(range(m))),
                    min_size=1,
                    max_size=5,
                ),
                st.lists(st.integers(0, 4), min_size=m, max_size=m).map(
                    lambda xs: tuple(sorted(xs, reverse=True))
                ),
            )
        )
    )
    def test_score_mass_is_conserved(self, data):
        m, raw_votes, alpha = data
        cands = tuple("abcd"[:m])
        votes = [(w, tuple(cands[i] for i in p)) for w, p in raw_votes]
        got = scores(GeneralScoring(alpha), cands, votes)
        assert sum(got.values()) == sum(w for w, _ in votes) * sum(alpha)

    def test_election_winners_dispatches_by_rule(self):
        cands = ("a", "b")
        named = [("v1", 1, ("a", "b"))]
        assert election_winners(Plurality(), cands, named) == frozenset({"a"})
        assert election_winners(TieredSystem(), cands, named) == frozenset()


class TestRuleJson:
    @pytest.mark.parametrize(
        "rule",
        [
            Plurality(),
            KApproval(2),
            KVeto(1),
            GeneralScoring((4, 2, 1, 0)),
            TieredSystem(),
        ],
    )
    def test_round_trip(self, rule):
        assert rule_from_json(rule_to_json(rule)) == rule

    def test_unknown_type_rejected(self):
        with pytest.raises(InvalidInstanceError):
            rule_from_json({"type": "borda"})

    def test_missing_field_rejected(self):
        with pytest.raises(InvalidInstanceError):
            rule_from_json({"type": "kapproval"})

    def test_stray_field_rejected(self):
        with pytest.raises(InvalidInstanceError):
            rule_from_json({"type": "plurality", "k": 1})

    def test_bool_k_rejected(self):
        with pytest.raises(InvalidInstanceError):
            rule_from_json({"type": "kapproval", "k": True})
