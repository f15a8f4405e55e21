"""Instance file format: strict parsing, canonical output, digests."""

import json

import pytest

from seqvote.core import (
    CastVote,
    ElectionSnapshot,
    ManipulationInstance,
    PendingVoter,
    variant,
)
from seqvote.errors import InstanceParseError
from seqvote.rules import KVeto, Plurality, TieredSystem
from seqvote.serialize import (
    canonical_json,
    dumps_instance,
    instance_digest,
    instance_from_document,
    instance_to_document,
    loads_instance,
)


def sample():
    snapshot = ElectionSnapshot(
        candidates=("a", "b", "c"),
        cast=(CastVote(name="v1", weight=2, vote=("b", "a", "c")),),
        pending=(
            PendingVoter(name="u1", weight=1, is_manipulator=True),
            PendingVoter(name="u2", weight=3, is_manipulator=False),
        ),
    )
    instance = ManipulationInstance(snapshot=snapshot, sigma=("c", "a", "b"), d="a")
    var = variant("constructive", "segment", "unique", "online", weighted=True)
    return instance, KVeto(1), var


class TestRoundTrip:
    def test_document_round_trip(self):
        instance, rule, var = sample()
        doc = instance_to_document(instance, rule, var)
        back_instance, back_rule, back_var = instance_from_document(doc)
        assert back_instance == instance
        assert back_rule == rule
        assert back_var == var

    def test_text_round_trip(self):
        instance, rule, var = sample()
        text = dumps_instance(instance, rule, var)
        back = loads_instance(text)
        assert back == (instance, rule, var)

    def test_manipulator_bound_round_trips(self):
        instance, rule, _ = sample()
        var = variant(
            "constructive", "segment", "nonunique", "online", weighted=True, k=1
        )
        doc = instance_to_document(instance, rule, var)
        assert doc["variant"]["k"] == 1
        assert instance_from_document(doc)[2] == var

    def test_canonical_output_is_sorted_and_compact(self):
        instance, rule, var = sample()
        text = dumps_instance(instance, rule, var)
        assert ": " not in text and ", " not in text
        keys = list(json.loads(text))
        assert keys == sorted(keys)

    def test_digest_is_stable_across_equal_inputs(self):
        a = instance_digest(*sample())
        b = instance_digest(*sample())
        assert a == b
        assert len(a) == 64 and set(a) <= set("0123456789abcdef")

    def test_digest_changes_with_content(self):
        instance, rule, var = sample()
        other = ManipulationInstance(
            snapshot=instance.snapshot, sigma=instance.sigma, d="b"
        )
        assert instance_digest(instance, rule, var) != instance_digest(
            other, rule, var
        )

    def test_tiered_rule_round_trips(self):
        instance, _, var = sample()
        text = dumps_instance(instance, TieredSystem(), var)
        assert loads_instance(text)[1] == TieredSystem()


def valid_doc():
    instance, rule, var = sample()
    return instance_to_document(instance, rule, var)


class TestStrictParsing:
    def test_top_level_must_be_object(self):
        with pytest.raises(InstanceParseError):
            loads_instance("[]")

    def test_invalid_json_rejected(self):
        with pytest.raises(InstanceParseError):
            loads_instance("{nope")

    def test_unknown_top_field_rejected(self):
        doc = valid_doc()
        doc["extra"] = 1
        with pytest.raises(InstanceParseError, match="extra"):
            instance_from_document(doc)

    def test_missing_field_rejected(self):
        doc = valid_doc()
        del doc["sigma"]
        with pytest.raises(InstanceParseError, match="sigma"):
            instance_from_document(doc)

    def test_cast_weight_type_checked_with_path(self):
        doc = valid_doc()
        doc["cast"][0]["weight"] = "2"
        with pytest.raises(InstanceParseError, match=r"cast\[0\].weight"):
            instance_from_document(doc)

    def test_bool_weight_rejected(self):
        doc = valid_doc()
        doc["pending"][0]["weight"] = True
        with pytest.raises(InstanceParseError, match=r"pending\[0\].weight"):
            instance_from_document(doc)

    def test_manipulator_flag_must_be_bool(self):
        doc = valid_doc()
        doc["pending"][1]["manipulator"] = 1
        with pytest.raises(InstanceParseError, match=r"pending\[1\].manipulator"):
            instance_from_document(doc)

    def test_unknown_variant_field_rejected(self):
        doc = valid_doc()
        doc["variant"]["tiebreak"] = "lex"
        with pytest.raises(InstanceParseError, match="tiebreak"):
            instance_from_document(doc)

    def test_unknown_enum_token_rejected(self):
        doc = valid_doc()
        doc["variant"]["direction"] = "sideways"
        with pytest.raises(InstanceParseError, match="sideways"):
            instance_from_document(doc)

    def test_weighted_must_be_bool(self):
        doc = valid_doc()
        doc["variant"]["weighted"] = "yes"
        with pytest.raises(InstanceParseError, match="weighted"):
            instance_from_document(doc)

    def test_vote_entries_must_be_strings(self):
        doc = valid_doc()
        doc["cast"][0]["vote"] = ["a", "b", 3]
        with pytest.raises(InstanceParseError, match=r"cast\[0\].vote"):
            instance_from_document(doc)

    def test_semantic_validity_enforced_on_load(self):
        doc = valid_doc()
        doc["d"] = "zzz"
        with pytest.raises(InstanceParseError):
            instance_from_document(doc)


def test_canonical_json_is_deterministic():
    doc = {"b": [1, 2], "a": {"y": 1, "x": 2}}
    assert canonical_json(doc) == '{"a":{"x":2,"y":1},"b":[1,2]}'
