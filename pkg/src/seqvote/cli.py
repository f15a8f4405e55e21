"""Command line interface.

Subcommands: solve, winners, fullprofile, classify, reduce, crosscheck,
gen, play.  Reports are single JSON lines with schema_version 1 (or aligned
key/value rows with --format table).  Exit codes: 0 success, 1 engine
disagreement, 2 usage/parse/validation errors, 3 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import replace

from .core import (
    CastVote,
    ElectionSnapshot,
    ManipulationInstance,
    PendingVoter,
    QuantifierMode,
    goal_set,
    validate,
)
from .core import variant as build_variant
from .errors import (
    FormulaSyntaxError,
    InstanceParseError,
    InvalidInstanceError,
    NoFastAlgorithmError,
    ResourceLimitError,
)
from .fast import classify_scoring_rule, fast_solve
from .grids import (
    approval_family_cases,
    plurality_cases,
    random_qbf_instances,
    random_solver_cases,
    run_crosscheck,
    veto_exhaustive_cases,
    veto_random_cases,
)
from .reductions import (
    PartitionInstance,
    QbfInstance,
    reduce_partition_cowcm_uw,
    reduce_partition_dwcm_uw,
    reduce_qbf_to_online_ucm,
)
from .rules import Plurality, election_winners, rule_from_json, scoring_vector
from .serialize import (
    canonical_json,
    dumps_instance,
    instance_digest,
    instance_to_document,
    load_instance_file,
    loads_instance,
)
from .solver import DEFAULT_NODE_BUDGET, full_profile, solve, winner_predicate
from .tiered import parse_named_formula

_USAGE_ERRORS = (
    InvalidInstanceError,
    InstanceParseError,
    FormulaSyntaxError,
    NoFastAlgorithmError,
)


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.handler(args)
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqvote",
        description=(
            "Decide and explore coalition manipulation of sequential elections."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "solve", help="decide one manipulation instance from a JSON file"
    )
    _instance_arg(p)
    p.add_argument(
        "--engine",
        choices=("game", "oracle", "fast", "both"),
        default="game",
        help=(
            "game-tree search (oracle is an alias), the fast procedure, "
            "or both (compared)"
        ),
    )
    _common_flags(p)
    _override_flags(p)
    p.add_argument(
        "--trace",
        action="store_true",
        help="extract a full strategy trace on yes answers (game engine)",
    )
    p.set_defaults(handler=_cmd_solve)

    p = sub.add_parser(
        "winners", help="winner set of the already-cast votes in an instance"
    )
    _instance_arg(p)
    p.add_argument("--format", choices=("json", "table"), default="json")
    _override_flags(p)
    p.set_defaults(handler=_cmd_winners)

    p = sub.add_parser(
        "fullprofile",
        help="decide the instance once per candidate as the distinguished one",
    )
    _instance_arg(p)
    _common_flags(p)
    _override_flags(p)
    p.set_defaults(handler=_cmd_fullprofile)

    p = sub.add_parser(
        "classify",
        help="complexity class of weighted manipulation for a scoring vector",
    )
    p.add_argument(
        "--alpha",
        required=True,
        help="comma-separated non-increasing scores, e.g. 3,2,1,0",
    )
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.set_defaults(handler=_cmd_classify)

    p = sub.add_parser(
        "reduce", help="build a manipulation instance from a hard problem"
    )
    red = p.add_subparsers(dest="construction", required=True)

    q = red.add_parser(
        "partition-dwcm",
        help="equal split -> destructive unique-winner weighted plurality",
    )
    q.add_argument("--weights", required=True, help="comma-separated positive ints")
    q.add_argument("-m", "--candidates", type=int, default=2)
    _reduce_output_flags(q)
    q.set_defaults(handler=_cmd_reduce_partition, construction_fn=reduce_partition_dwcm_uw)

    q = red.add_parser(
        "partition-cowcm",
        help="equal split -> constructive unique-winner weighted plurality",
    )
    q.add_argument("--weights", required=True, help="comma-separated positive ints")
    q.add_argument("-m", "--candidates", type=int, default=2)
    _reduce_output_flags(q)
    q.set_defaults(handler=_cmd_reduce_partition, construction_fn=reduce_partition_cowcm_uw)

    q = red.add_parser(
        "qbf", help="quantified boolean formula -> online formula-system instance"
    )
    q.add_argument(
        "--blocks",
        required=True,
        help="quantifier blocks as 'p,q;r' (outermost existential first)",
    )
    q.add_argument(
        "--formula",
        required=True,
        help="boolean formula over the block variables, e.g. ((p&!q)|r)",
    )
    _reduce_output_flags(q)
    q.set_defaults(handler=_cmd_reduce_qbf)

    p = sub.add_parser(
        "crosscheck", help="compare the fast procedures against the game engine"
    )
    p.add_argument(
        "--family",
        choices=("plurality", "approval", "veto", "veto-random"),
        required=True,
    )
    p.add_argument("--m", type=int, action="append", help="candidate counts")
    p.add_argument("--max-voters", type=int, default=3)
    p.add_argument("--count", type=int, default=200, help="random family size")
    p.add_argument("--max-disagreements", type=int, default=5)
    _common_flags(p)
    p.set_defaults(handler=_cmd_crosscheck)

    p = sub.add_parser(
        "gen", help="emit reproducible instance files as JSON lines"
    )
    p.add_argument("--kind", choices=("instances", "qbf", "partition"), required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=10)
    p.add_argument(
        "-m",
        "--candidates",
        type=int,
        default=2,
        help="candidate count (partition kind, or shaped instances)",
    )
    p.add_argument(
        "--construction",
        choices=("destructive", "constructive"),
        default="destructive",
        help="partition kind",
    )
    p.add_argument(
        "--rule",
        help="rule JSON for shaped instances, e.g. '{\"type\":\"k-veto\",\"k\":1}'",
    )
    p.add_argument(
        "--voters", type=int, help="pending voters per shaped instance"
    )
    p.add_argument(
        "--cast", type=int, default=0, help="already-cast votes per shaped instance"
    )
    p.add_argument(
        "--max-weight", type=int, default=2, help="weights drawn from 0..MAX_WEIGHT"
    )
    p.add_argument("-o", "--output", help="write lines here instead of stdout")
    p.set_defaults(handler=_cmd_gen)

    p = sub.add_parser(
        "play",
        help="play an instance turn by turn, the solver moving the coalition",
    )
    _instance_arg(p)
    p.add_argument("--budget-nodes", type=int, default=DEFAULT_NODE_BUDGET)
    p.add_argument("--canonical", action="store_true")
    _override_flags(p)
    p.set_defaults(handler=_cmd_play)

    return parser


def _instance_arg(p):
    p.add_argument("instance", help="instance JSON file, or - for stdin")


def _common_flags(p):
    p.add_argument("--budget-nodes", type=int, default=DEFAULT_NODE_BUDGET)
    p.add_argument(
        "--canonical",
        action="store_true",
        help="group equivalent votes during search",
    )
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--seed", type=int, default=None, help="recorded in the report")


def _reduce_output_flags(p):
    p.add_argument("-o", "--output", help="write the instance file here")
    p.add_argument(
        "--provenance",
        help="write construction metadata here (default: OUTPUT.provenance.json)",
    )


def _override_flags(p):
    p.add_argument(
        "--rule", help="replace the file's rule with this JSON object"
    )
    p.add_argument(
        "--variant",
        help=(
            "merge these JSON fields over the file's variant, e.g. "
            '\'{"direction":"destructive"}\''
        ),
    )


def _parse_json_object(text: str, flag: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceParseError(f"{flag}: not valid JSON: {exc}")
    if not isinstance(doc, dict):
        raise InstanceParseError(f"{flag}: expected a JSON object")
    return doc


def _apply_overrides(args, instance, rule, variant):
    overridden = False
    if getattr(args, "rule", None):
        rule = rule_from_json(_parse_json_object(args.rule, "--rule"))
        overridden = True
    if getattr(args, "variant", None):
        doc = {
            "direction": variant.direction.value,
            "target": variant.target.value,
            "winner_model": variant.winner_model.value,
            "mode": variant.quantifier_mode.value,
            "weighted": variant.weighted,
            "k": variant.manipulator_bound,
        }
        fields = _parse_json_object(args.variant, "--variant")
        unknown = set(fields) - set(doc)
        if unknown:
            raise InstanceParseError(
                f"--variant: unknown fields {sorted(unknown)}; "
                f"allowed: {sorted(doc)}"
            )
        doc.update(fields)
        for key in ("direction", "target", "winner_model", "mode"):
            if not isinstance(doc[key], str):
                raise InstanceParseError(f"--variant: {key} must be a string")
        if not isinstance(doc["weighted"], bool):
            raise InstanceParseError("--variant: weighted must be a boolean")
        bound = doc["k"]
        if bound is not None and (
            isinstance(bound, bool) or not isinstance(bound, int) or bound < 0
        ):
            raise InstanceParseError(
                "--variant: k must be a non-negative integer or null"
            )
        variant = build_variant(
            doc["direction"],
            doc["target"],
            doc["winner_model"],
            doc["mode"],
            weighted=doc["weighted"],
            k=bound,
        )
        overridden = True
    if overridden:
        problems = validate(instance, variant)
        if problems:
            raise InvalidInstanceError("; ".join(problems))
    return instance, rule, variant


def _load(args):
    path = args.instance
    if path == "-":
        loaded = loads_instance(sys.stdin.read())
    else:
        loaded = load_instance_file(path)
    return _apply_overrides(args, *loaded)


def _emit(args, doc: dict) -> None:
    if getattr(args, "format", "json") == "table":
        width = max(len(k) for k in doc)
        for key in sorted(doc):
            print(f"{key:<{width}}  {json.dumps(doc[key], sort_keys=True)}")
    else:
        print(canonical_json(doc))


def _report(args, command: str, payload: dict, started: float) -> dict:
    doc = {
        "schema_version": 1,
        "command": command,
        "wall_time_ms": int((time.perf_counter() - started) * 1000),
        "seed": getattr(args, "seed", None),
    }
    doc.update(payload)
    _emit(args, doc)
    return doc


def _cmd_solve(args) -> int:
    started = time.perf_counter()
    if args.engine == "oracle":
        args.engine = "game"
    instance, rule, variant = _load(args)
    answers: dict = {}
    payload: dict = {
        "instance_digest": instance_digest(instance, rule, variant),
        "answers": answers,
        "witness": None,
        "thresholds": None,
        "nodes": 0,
    }
    if args.engine in ("game", "both"):
        decision = solve(
            instance,
            rule,
            variant,
            budget=args.budget_nodes,
            canonicalize=args.canonical,
            want_trace=args.trace,
        )
        answers["game"] = decision.answer
        payload["nodes"] = decision.nodes
        if decision.first_move is not None:
            payload["witness"] = list(decision.first_move)
        if decision.committed_votes is not None:
            payload["witness"] = {
                name: list(vote) for name, vote in decision.committed_votes.items()
            }
        if args.trace and decision.trace is not None:
            payload["trace_size"] = len(decision.trace)
    if args.engine in ("fast", "both"):
        result = fast_solve(instance, rule, variant)
        answers["fast"] = result.answer
        if result.thresholds is not None:
            payload["thresholds"] = {
                "t1": result.thresholds.t1,
                "t2": result.thresholds.t2,
                "below_partition": [
                    list(g) for g in result.thresholds.below_partition
                ],
                "above_partition": [
                    list(g) for g in result.thresholds.above_partition
                ],
            }
    _report(args, "solve", payload, started)
    if args.engine == "both" and answers["game"] != answers["fast"]:
        return 1
    return 0


def _cmd_winners(args) -> int:
    started = time.perf_counter()
    instance, rule, variant = _load(args)
    snap = instance.snapshot
    named = [(v.name, v.weight, v.vote) for v in snap.cast]
    won = election_winners(rule, snap.candidates, named)
    payload = {
        "instance_digest": instance_digest(instance, rule, variant),
        "winners": [c for c in snap.candidates if c in won],
    }
    _report(args, "winners", payload, started)
    return 0


def _cmd_fullprofile(args) -> int:
    started = time.perf_counter()
    instance, rule, variant = _load(args)
    profile = full_profile(
        instance.snapshot,
        instance.sigma,
        rule,
        variant,
        budget=args.budget_nodes,
        canonicalize=args.canonical,
    )
    payload = {
        "instance_digest": instance_digest(instance, rule, variant),
        "profile": [[c, answer] for c, answer in profile.items()],
    }
    _report(args, "fullprofile", payload, started)
    return 0


def _cmd_classify(args) -> int:
    started = time.perf_counter()
    try:
        alpha = tuple(int(part) for part in args.alpha.split(","))
    except ValueError:
        raise InvalidInstanceError(f"cannot parse scores from {args.alpha!r}")
    label = classify_scoring_rule(alpha)
    payload = {"alpha": list(alpha), "class": label.value}
    _report(args, "classify", payload, started)
    return 0


def _parse_weights(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise InvalidInstanceError(f"cannot parse weights from {text!r}")


def _write_reduction(args, result) -> int:
    line = dumps_instance(result.instance, result.rule, result.variant)
    provenance_path = args.provenance
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(line + "\n")
        if provenance_path is None:
            provenance_path = args.output + ".provenance.json"
    else:
        print(line)
    if provenance_path is not None:
        with open(provenance_path, "w", encoding="utf-8") as fh:
            fh.write(canonical_json(result.provenance) + "\n")
    return 0


def _cmd_reduce_partition(args) -> int:
    p = PartitionInstance(weights=_parse_weights(args.weights))
    result = args.construction_fn(p, args.candidates)
    return _write_reduction(args, result)


def _cmd_reduce_qbf(args) -> int:
    blocks = tuple(
        tuple(name.strip() for name in block.split(","))
        for block in args.blocks.split(";")
    )
    formula = parse_named_formula(args.formula)
    q = QbfInstance(blocks=blocks, formula=formula)
    return _write_reduction(args, reduce_qbf_to_online_ucm(q))


def _cmd_crosscheck(args) -> int:
    started = time.perf_counter()
    m_values = tuple(args.m) if args.m else (2,)
    if args.family == "plurality":
        cases = plurality_cases(m_values=m_values, max_voters=args.max_voters)
    elif args.family == "approval":
        cases = approval_family_cases(
            m_values=m_values, max_voters=args.max_voters
        )
    elif args.family == "veto":
        cases = veto_exhaustive_cases(
            m=m_values[0], max_voters=args.max_voters
        )
    else:
        cases = veto_random_cases(args.seed or 0, args.count)
    report = run_crosscheck(
        cases,
        budget=args.budget_nodes,
        canonicalize=True,
        max_disagreements=args.max_disagreements,
    )
    payload = {
        "family": args.family,
        "checked": report.checked,
        "solved": report.solved,
        "agreement": (
            1.0
            if report.checked == 0
            else round(1 - len(report.disagreements) / report.checked, 6)
        ),
        "incomplete": report.incomplete,
        "disagreements": [
            {"key": _jsonable(key), "answers": {"fast": a[0], "game": a[1]}}
            for key, _, a in report.disagreements
        ],
    }
    _report(args, "crosscheck", payload, started)
    if report.disagreements:
        return 1
    if report.incomplete:
        return 3
    return 0


def _jsonable(value):
    if isinstance(value, (tuple, list)):
        return [_jsonable(v) for v in value]
    if isinstance(value, frozenset):
        return sorted(value)
    return value


def _shaped_instances(args):
    """Fixed-shape sampling: one rule, m candidates, a set voter count."""
    rule = (
        rule_from_json(_parse_json_object(args.rule, "--rule"))
        if args.rule
        else Plurality()
    )
    m = args.candidates
    if m < 2:
        raise InvalidInstanceError("shaped generation needs at least 2 candidates")
    scoring_vector(rule, m)  # rejects inconsistent shapes such as k > m
    voters = args.voters if args.voters is not None else 1
    if voters < 1:
        raise InvalidInstanceError("shaped generation needs at least 1 pending voter")
    if args.cast < 0 or args.max_weight < 0:
        raise InvalidInstanceError("--cast and --max-weight must be non-negative")
    cands = tuple(f"c{i}" for i in range(1, m + 1))
    variant = build_variant("constructive", "segment", "nonunique", "online")
    rng = random.Random(args.seed)
    for _ in range(args.count):
        cast = tuple(
            CastVote(
                name=f"v{i}",
                weight=rng.randint(0, args.max_weight),
                vote=tuple(rng.sample(cands, m)),
            )
            for i in range(1, args.cast + 1)
        )
        pending = tuple(
            PendingVoter(
                name=f"u{i}",
                weight=rng.randint(0, args.max_weight),
                is_manipulator=True if i == 1 else rng.random() < 0.5,
            )
            for i in range(1, voters + 1)
        )
        sigma = tuple(rng.sample(cands, m))
        instance = ManipulationInstance(
            snapshot=ElectionSnapshot(candidates=cands, cast=cast, pending=pending),
            sigma=sigma,
            d=rng.choice(sigma),
        )
        yield dumps_instance(instance, rule, variant)


def _cmd_gen(args) -> int:
    lines = []
    if args.kind == "instances":
        if args.rule or args.voters is not None:
            lines.extend(_shaped_instances(args))
        else:
            for instance, rule, variant in random_solver_cases(args.seed, args.count):
                lines.append(dumps_instance(instance, rule, variant))
    elif args.kind == "qbf":
        for q in random_qbf_instances(args.seed, args.count):
            result = reduce_qbf_to_online_ucm(q)
            lines.append(dumps_instance(result.instance, result.rule, result.variant))
    else:
        rng = random.Random(args.seed)
        build = (
            reduce_partition_dwcm_uw
            if args.construction == "destructive"
            else reduce_partition_cowcm_uw
        )
        produced = 0
        while produced < args.count:
            weights = tuple(
                rng.randint(1, 6) for _ in range(rng.randint(1, 8))
            )
            if sum(weights) % 2:
                continue
            result = build(PartitionInstance(weights=weights), args.candidates)
            lines.append(dumps_instance(result.instance, result.rule, result.variant))
            produced += 1
    text = "\n".join(lines) + ("\n" if lines else "")
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_play(args) -> int:
    instance, rule, variant = _load(args)
    if variant.quantifier_mode is QuantifierMode.SCHEDULE_ROBUST:
        raise InvalidInstanceError("play needs a turn-based instance")
    live = replace(variant, quantifier_mode=QuantifierMode.FREEFORM)
    snap = instance.snapshot
    cast = list(snap.cast)
    pending = list(snap.pending)
    print(f"candidates: {', '.join(snap.candidates)}")
    print(f"preference order: {' > '.join(instance.sigma)}  (distinguished: {instance.d})")
    # solve once before any interaction: announces the guarantee and
    # refuses over-budget instances before the first prompt
    opening = solve(
        instance, rule, live, budget=args.budget_nodes, canonicalize=args.canonical
    ).answer
    print(
        "solver guarantee: the coalition "
        + ("can force the goal" if opening else "cannot guarantee the goal")
    )
    while pending:
        voter = pending[0]
        current = ManipulationInstance(
            snapshot=ElectionSnapshot(
                candidates=snap.candidates, cast=tuple(cast), pending=tuple(pending)
            ),
            sigma=instance.sigma,
            d=instance.d,
        )
        if voter.is_manipulator:
            decision = solve(
                current,
                rule,
                live,
                budget=args.budget_nodes,
                canonicalize=args.canonical,
            )
            if decision.answer and decision.first_move is not None:
                vote = decision.first_move
                print(f"coalition voter {voter.name} plays: {' > '.join(vote)}")
            else:
                vote = tuple(sorted(snap.candidates))
                print(
                    f"coalition voter {voter.name} cannot guarantee the goal; "
                    f"playing: {' > '.join(vote)}"
                )
        else:
            prompt = f"vote for {voter.name} (rank all of: {', '.join(snap.candidates)}): "
            while True:
                line = _read_line(prompt)
                if line is None:
                    print("no input; aborting", file=sys.stderr)
                    return 2
                vote = tuple(line.replace(">", " ").replace(",", " ").split())
                if sorted(vote) == sorted(snap.candidates):
                    break
                print(
                    f"not a ranking of all candidates: {line!r}; try again",
                    file=sys.stderr,
                )
        cast.append(CastVote(name=voter.name, weight=voter.weight, vote=tuple(vote)))
        pending.pop(0)
    named = [(v.name, v.weight, v.vote) for v in cast]
    won = election_winners(rule, snap.candidates, named)
    ordered = [c for c in snap.candidates if c in won]
    print(f"winners: {', '.join(ordered) if ordered else '(none)'}")
    zone = goal_set(instance.sigma, instance.d, variant.direction, variant.target)
    achieved = winner_predicate(variant, zone)(won)
    print(
        f"goal {'achieved' if achieved else 'missed'} "
        f"(guaranteed at start: {'yes' if opening else 'no'})"
    )
    return 0


def _read_line(prompt: str):
    try:
        return input(prompt)
    except EOFError:
        return None


if __name__ == "__main__":
    sys.exit(main())
