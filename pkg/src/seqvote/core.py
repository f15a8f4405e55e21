"""Domain model for manipulation of sequential elections.

A snapshot splits an election into votes already cast (content known) and
pending voters (order known, votes open, each tagged as a coalition member or
not).  The first pending voter is the distinguished voter u.  An instance adds
the coalition's preference order sigma and a distinguished candidate d; a
problem variant fixes direction, target shape, winner model, quantifier mode,
the weighted flag, and an optional cap on coalition size.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence, Union

from .errors import InvalidInstanceError


def name_key(name: str) -> bytes:
    """Sort key used everywhere names are compared: raw UTF-8 bytes."""
    return name.encode("utf-8")


class Direction(Enum):
    CONSTRUCTIVE = "constructive"
    DESTRUCTIVE = "destructive"


class TargetMode(Enum):
    SEGMENT = "segment"
    PINPOINT = "pinpoint"


class WinnerModel(Enum):
    NONUNIQUE = "nonunique"
    UNIQUE = "unique"


class QuantifierMode(Enum):
    ONLINE = "online"
    FREEFORM = "freeform"
    SCHEDULE_ROBUST = "schedule-robust"


@dataclass(frozen=True)
class CastVote:
    name: str
    weight: int
    vote: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "vote", tuple(self.vote))


@dataclass(frozen=True)
class PendingVoter:
    name: str
    weight: int
    is_manipulator: bool


@dataclass(frozen=True)
class ElectionSnapshot:
    candidates: tuple[str, ...]
    cast: tuple[CastVote, ...]
    pending: tuple[PendingVoter, ...]

    def __post_init__(self):
        object.__setattr__(self, "candidates", tuple(self.candidates))
        object.__setattr__(self, "cast", tuple(self.cast))
        object.__setattr__(self, "pending", tuple(self.pending))

    def manipulators(self) -> tuple[PendingVoter, ...]:
        return tuple(v for v in self.pending if v.is_manipulator)

    def nonmanipulators(self) -> tuple[PendingVoter, ...]:
        return tuple(v for v in self.pending if not v.is_manipulator)


@dataclass(frozen=True)
class ManipulationInstance:
    """A snapshot plus the coalition's preference order and focus candidate."""

    snapshot: ElectionSnapshot
    sigma: tuple[str, ...]
    d: str

    def __post_init__(self):
        object.__setattr__(self, "sigma", tuple(self.sigma))


@dataclass(frozen=True)
class ProblemVariant:
    direction: Direction
    target: TargetMode
    winner_model: WinnerModel
    quantifier_mode: QuantifierMode
    weighted: bool
    manipulator_bound: Optional[int] = None


def variant(
    direction: Union[str, Direction] = Direction.CONSTRUCTIVE,
    target: Union[str, TargetMode] = TargetMode.SEGMENT,
    winner_model: Union[str, WinnerModel] = WinnerModel.NONUNIQUE,
    mode: Union[str, QuantifierMode] = QuantifierMode.ONLINE,
    weighted: bool = True,
    k: Optional[int] = None,
) -> ProblemVariant:
    """Build a ProblemVariant from enum members or their string values."""
    return ProblemVariant(
        direction=_coerce(Direction, direction),
        target=_coerce(TargetMode, target),
        winner_model=_coerce(WinnerModel, winner_model),
        quantifier_mode=_coerce(QuantifierMode, mode),
        weighted=bool(weighted),
        manipulator_bound=k,
    )


def _coerce(enum_cls, value):
    if isinstance(value, enum_cls):
        return value
    try:
        return enum_cls(value)
    except ValueError:
        allowed = ", ".join(m.value for m in enum_cls)
        raise InvalidInstanceError(
            f"{value!r} is not one of: {allowed}"
        ) from None


@dataclass(frozen=True)
class Decision:
    """Answer of a solve call plus optional constructive evidence.

    first_move is the vote the distinguished voter should cast (present only
    on yes answers where that voter is a coalition member).  trace maps each
    reachable history of pending votes to the coalition vote played there.
    committed_votes carries the up-front vote assignment witnessing a
    schedule-robust yes.  nodes counts search nodes visited.
    """

    answer: bool
    first_move: Optional[tuple[str, ...]] = None
    trace: Optional[dict] = None
    committed_votes: Optional[dict] = None
    nodes: int = 0


def goal_set(
    sigma: Sequence[str],
    d: str,
    direction: Direction,
    target: TargetMode = TargetMode.SEGMENT,
) -> frozenset[str]:
    """Candidates the goal predicate tests the winner set against.

    Constructive problems return the set of acceptable winners: the segment
    of sigma at or above d, or just {d} for pinpoint targets.  Destructive
    problems return the forbidden zone (d and everything the coalition likes
    less); the goal there is that no winner falls inside it.
    """
    sigma = tuple(sigma)
    if d not in sigma:
        raise InvalidInstanceError(f"distinguished candidate {d!r} not in sigma")
    pos = sigma.index(d)
    if direction is Direction.CONSTRUCTIVE:
        if target is TargetMode.PINPOINT:
            return frozenset({d})
        return frozenset(sigma[: pos + 1])
    if target is TargetMode.PINPOINT:
        raise InvalidInstanceError("pinpoint targets combine only with constructive problems")
    return frozenset(sigma[pos:])


def validate(instance: ManipulationInstance, variant: ProblemVariant) -> list[str]:
    """Return a list of contract violations; empty means the pair is valid."""
    out: list[str] = []
    snap = instance.snapshot
    cands = snap.candidates
    if not cands:
        out.append("candidate set is empty")
    if any(not isinstance(c, str) or not c for c in cands):
        out.append("candidate names must be non-empty strings")
    if len(set(cands)) != len(cands):
        out.append("candidate names must be distinct")
    cand_set = set(cands)

    names = [v.name for v in snap.cast] + [v.name for v in snap.pending]
    if any(not isinstance(n, str) or not n for n in names):
        out.append("voter names must be non-empty strings")
    if len(set(names)) != len(names):
        out.append("voter names must be distinct")

    for v in snap.cast:
        if not _is_weight(v.weight):
            out.append(f"cast voter {v.name!r} has a bad weight {v.weight!r}")
        if sorted(v.vote) != sorted(cands):
            out.append(f"cast voter {v.name!r} vote is not a permutation of the candidates")
    for v in snap.pending:
        if not _is_weight(v.weight):
            out.append(f"pending voter {v.name!r} has a bad weight {v.weight!r}")

    if tuple(sorted(instance.sigma)) != tuple(sorted(cands)):
        out.append("sigma is not a permutation of the candidates")
    if instance.d not in cand_set:
        out.append(f"distinguished candidate {instance.d!r} is not a candidate")

    if not variant.weighted:
        for v in list(snap.cast) + list(snap.pending):
            if v.weight != 1:
                out.append(f"unweighted variant but voter {v.name!r} has weight {v.weight}")
                break

    if variant.direction is Direction.DESTRUCTIVE and variant.target is TargetMode.PINPOINT:
        out.append("pinpoint targets combine only with constructive problems")

    if not snap.pending:
        out.append("an online problem needs at least one pending voter")
    else:
        if (
            variant.quantifier_mode is QuantifierMode.ONLINE
            and not snap.pending[0].is_manipulator
        ):
            out.append("online mode requires the first pending voter to be a coalition member")

    if variant.manipulator_bound is not None:
        count = sum(1 for v in snap.pending if v.is_manipulator)
        if count > variant.manipulator_bound:
            out.append(
                f"{count} pending coalition members exceed the bound {variant.manipulator_bound}"
            )
    return out


def assert_valid(instance: ManipulationInstance, variant: ProblemVariant) -> None:
    problems = validate(instance, variant)
    if problems:
        raise InvalidInstanceError(problems)


def _is_weight(w) -> bool:
    return isinstance(w, int) and not isinstance(w, bool) and w >= 0


def embed_standard_wcm(
    candidates: Sequence[str],
    cast_votes: Iterable[tuple[int, Sequence[str]]],
    manipulator_weights: Sequence[int],
    target: str,
    destructive: bool = False,
) -> tuple[ManipulationInstance, ProblemVariant]:
    """Embed a classic one-shot coalitional manipulation problem.

    All nonmanipulator votes are cast up front; the coalition votes last, so
    the adaptive order of play cannot matter.  Constructive embeddings put the
    target on top of sigma (goal: make it a winner); destructive embeddings
    put it at the bottom (goal: keep it out of the winner set).
    """
    candidates = tuple(candidates)
    if target not in candidates:
        raise InvalidInstanceError(f"target {target!r} is not a candidate")
    manipulator_weights = list(manipulator_weights)
    if not manipulator_weights:
        raise InvalidInstanceError("the manipulating coalition must be non-empty")
    cast = tuple(
        CastVote(name=f"v{i + 1}", weight=w, vote=tuple(vote))
        for i, (w, vote) in enumerate(cast_votes)
    )
    pending = tuple(
        PendingVoter(name=f"u{i + 1}", weight=w, is_manipulator=True)
        for i, w in enumerate(manipulator_weights)
    )
    rest = tuple(c for c in candidates if c != target)
    sigma = rest + (target,) if destructive else (target,) + rest
    instance = ManipulationInstance(
        snapshot=ElectionSnapshot(candidates=candidates, cast=cast, pending=pending),
        sigma=sigma,
        d=target,
    )
    var = ProblemVariant(
        direction=Direction.DESTRUCTIVE if destructive else Direction.CONSTRUCTIVE,
        target=TargetMode.SEGMENT,
        winner_model=WinnerModel.NONUNIQUE,
        quantifier_mode=QuantifierMode.ONLINE,
        weighted=True,
    )
    assert_valid(instance, var)
    return instance, var
