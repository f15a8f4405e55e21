"""The JSON instance format shared by the library, the CLI, and the tests.

A document holds exactly the keys candidates, cast, pending, sigma, d,
variant, and rule.  Unknown fields are rejected at every level so typos fail
loudly instead of silently changing the problem.  Serialization is canonical
(sorted keys, fixed separators), which makes digests and generated files
byte-stable.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

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
    validate,
)
from .errors import InstanceParseError
from .rules import VotingRule, rule_from_json, rule_to_json

_TOP_FIELDS = {"candidates", "cast", "pending", "sigma", "d", "variant", "rule"}
_CAST_FIELDS = {"name", "weight", "vote"}
_PENDING_FIELDS = {"name", "weight", "manipulator"}
_VARIANT_FIELDS = {"direction", "target", "winner_model", "mode", "weighted", "k"}


def instance_to_document(
    instance: ManipulationInstance, rule: VotingRule, variant: ProblemVariant
) -> dict:
    snap = instance.snapshot
    doc: dict[str, Any] = {
        "candidates": list(snap.candidates),
        "cast": [
            {"name": v.name, "weight": v.weight, "vote": list(v.vote)} for v in snap.cast
        ],
        "pending": [
            {"name": v.name, "weight": v.weight, "manipulator": v.is_manipulator}
            for v in snap.pending
        ],
        "sigma": list(instance.sigma),
        "d": instance.d,
        "variant": {
            "direction": variant.direction.value,
            "target": variant.target.value,
            "winner_model": variant.winner_model.value,
            "mode": variant.quantifier_mode.value,
            "weighted": variant.weighted,
        },
        "rule": rule_to_json(rule),
    }
    if variant.manipulator_bound is not None:
        doc["variant"]["k"] = variant.manipulator_bound
    return doc


def dumps_instance(
    instance: ManipulationInstance, rule: VotingRule, variant: ProblemVariant
) -> str:
    return canonical_json(instance_to_document(instance, rule, variant))


def canonical_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def instance_digest(
    instance: ManipulationInstance, rule: VotingRule, variant: ProblemVariant
) -> str:
    payload = dumps_instance(instance, rule, variant).encode("utf-8")
    return hashlib.sha256(payload).hexdigest()


def instance_from_document(
    doc: dict,
) -> tuple[ManipulationInstance, VotingRule, ProblemVariant]:
    if not isinstance(doc, dict):
        raise InstanceParseError("instance document must be a JSON object")
    _check_fields(doc, _TOP_FIELDS, _TOP_FIELDS, "instance")

    candidates = _string_list(doc["candidates"], "candidates")
    cast = []
    for idx, entry in enumerate(_list(doc["cast"], "cast")):
        where = f"cast[{idx}]"
        _check_fields(entry, _CAST_FIELDS, _CAST_FIELDS, where)
        cast.append(
            CastVote(
                name=_string(entry["name"], f"{where}.name"),
                weight=_int(entry["weight"], f"{where}.weight"),
                vote=tuple(_string_list(entry["vote"], f"{where}.vote")),
            )
        )
    pending = []
    for idx, entry in enumerate(_list(doc["pending"], "pending")):
        where = f"pending[{idx}]"
        _check_fields(entry, _PENDING_FIELDS, _PENDING_FIELDS, where)
        if not isinstance(entry["manipulator"], bool):
            raise InstanceParseError(f"{where}.manipulator must be a boolean")
        pending.append(
            PendingVoter(
                name=_string(entry["name"], f"{where}.name"),
                weight=_int(entry["weight"], f"{where}.weight"),
                is_manipulator=entry["manipulator"],
            )
        )

    vdoc = doc["variant"]
    _check_fields(vdoc, _VARIANT_FIELDS, _VARIANT_FIELDS - {"k"}, "variant")
    if not isinstance(vdoc["weighted"], bool):
        raise InstanceParseError("variant.weighted must be a boolean")
    bound = None
    if "k" in vdoc:
        bound = _int(vdoc["k"], "variant.k")
    try:
        variant = ProblemVariant(
            direction=Direction(_string(vdoc["direction"], "variant.direction")),
            target=TargetMode(_string(vdoc["target"], "variant.target")),
            winner_model=WinnerModel(_string(vdoc["winner_model"], "variant.winner_model")),
            quantifier_mode=QuantifierMode(_string(vdoc["mode"], "variant.mode")),
            weighted=vdoc["weighted"],
            manipulator_bound=bound,
        )
    except ValueError as exc:
        raise InstanceParseError(f"variant: {exc}") from None

    try:
        rule = rule_from_json(doc["rule"])
    except ValueError as exc:
        raise InstanceParseError(f"rule: {exc}") from None

    instance = ManipulationInstance(
        snapshot=ElectionSnapshot(
            candidates=tuple(candidates), cast=tuple(cast), pending=tuple(pending)
        ),
        sigma=tuple(_string_list(doc["sigma"], "sigma")),
        d=_string(doc["d"], "d"),
    )
    problems = validate(instance, variant)
    if problems:
        raise InstanceParseError("; ".join(problems))
    return instance, rule, variant


def loads_instance(text: str) -> tuple[ManipulationInstance, VotingRule, ProblemVariant]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceParseError(f"not valid JSON: {exc}") from None
    return instance_from_document(doc)


def load_instance_file(path) -> tuple[ManipulationInstance, VotingRule, ProblemVariant]:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return loads_instance(text)


def _check_fields(doc, allowed: set, required: set, where: str) -> None:
    if not isinstance(doc, dict):
        raise InstanceParseError(f"{where} must be a JSON object")
    extra = set(doc) - allowed
    if extra:
        raise InstanceParseError(f"{where} has unknown fields: {sorted(extra)}")
    missing = required - set(doc)
    if missing:
        raise InstanceParseError(f"{where} is missing fields: {sorted(missing)}")


def _list(value, where: str) -> list:
    if not isinstance(value, list):
        raise InstanceParseError(f"{where} must be a JSON array")
    return value


def _string(value, where: str) -> str:
    if not isinstance(value, str):
        raise InstanceParseError(f"{where} must be a string")
    return value


def _string_list(value, where: str) -> list[str]:
    return [_string(v, f"{where}[{i}]") for i, v in enumerate(_list(value, where))]


def _int(value, where: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise InstanceParseError(f"{where} must be an integer")
    return value
