"""Online coalition manipulation of sequential elections.

A snapshot of a partially finished election (cast votes plus an ordered
list of pending voters, some of them coalition members) is paired with a
coalition preference order and a distinguished candidate; the library
decides whether the coalition can force its goal no matter what the other
voters do, under scoring rules or a formula-driven election system, and
ships the known polynomial-time procedures, hardness reductions, and a CLI.
"""

from .core import (
    CastVote,
    Decision,
    Direction,
    ElectionSnapshot,
    ManipulationInstance,
    PendingVoter,
    ProblemVariant,
    QuantifierMode,
    TargetMode,
    WinnerModel,
    assert_valid,
    embed_standard_wcm,
    goal_set,
    validate,
    variant,
)
from .errors import (
    FormulaSyntaxError,
    InstanceParseError,
    InvalidInstanceError,
    NoFastAlgorithmError,
    ResourceLimitError,
)
from .fast import (
    FastResult,
    RuleClass,
    ThresholdReport,
    approval_veto_ucm_greedy,
    classify_scoring_rule,
    fast_solve,
    partition_feasible,
    plurality_dwcm,
    plurality_wcm,
    proper_sub,
    veto1_threshold,
    veto_wcm_thresholds,
)
from .reductions import (
    PartitionInstance,
    QbfInstance,
    ReductionResult,
    eval_qbf,
    partition_bruteforce,
    reduce_partition_cowcm_uw,
    reduce_partition_dwcm_uw,
    reduce_qbf_to_online_ucm,
)
from .rules import (
    GeneralScoring,
    KApproval,
    KVeto,
    Plurality,
    TieredSystem,
    VotingRule,
    election_winners,
    rule_from_json,
    rule_to_json,
    scores,
    scoring_vector,
    winners,
)
from .serialize import (
    canonical_json,
    dumps_instance,
    instance_digest,
    instance_from_document,
    instance_to_document,
    load_instance_file,
    loads_instance,
)
from .solver import (
    DEFAULT_NODE_BUDGET,
    full_profile,
    replay,
    solve,
    solve_schedule_robust,
    winner_predicate,
)
from .tiered import (
    TieredFormula,
    decode_assignment,
    eval_formula,
    format_formula,
    parse_named_formula,
    parse_tiered_formula,
    successor_names,
    tiered_winners,
)

__version__ = "0.1.0"

__all__ = [
    "CastVote",
    "Decision",
    "Direction",
    "ElectionSnapshot",
    "ManipulationInstance",
    "PendingVoter",
    "ProblemVariant",
    "QuantifierMode",
    "TargetMode",
    "WinnerModel",
    "assert_valid",
    "embed_standard_wcm",
    "goal_set",
    "validate",
    "variant",
    "FormulaSyntaxError",
    "InstanceParseError",
    "InvalidInstanceError",
    "NoFastAlgorithmError",
    "ResourceLimitError",
    "FastResult",
    "RuleClass",
    "ThresholdReport",
    "approval_veto_ucm_greedy",
    "classify_scoring_rule",
    "fast_solve",
    "partition_feasible",
    "plurality_dwcm",
    "plurality_wcm",
    "proper_sub",
    "veto1_threshold",
    "veto_wcm_thresholds",
    "PartitionInstance",
    "QbfInstance",
    "ReductionResult",
    "eval_qbf",
    "partition_bruteforce",
    "reduce_partition_cowcm_uw",
    "reduce_partition_dwcm_uw",
    "reduce_qbf_to_online_ucm",
    "GeneralScoring",
    "KApproval",
    "KVeto",
    "Plurality",
    "TieredSystem",
    "VotingRule",
    "election_winners",
    "rule_from_json",
    "rule_to_json",
    "scores",
    "scoring_vector",
    "winners",
    "canonical_json",
    "dumps_instance",
    "instance_digest",
    "instance_from_document",
    "instance_to_document",
    "load_instance_file",
    "loads_instance",
    "DEFAULT_NODE_BUDGET",
    "full_profile",
    "replay",
    "solve",
    "solve_schedule_robust",
    "winner_predicate",
    "TieredFormula",
    "decode_assignment",
    "eval_formula",
    "format_formula",
    "parse_named_formula",
    "parse_tiered_formula",
    "successor_names",
    "tiered_winners",
    "__version__",
]
