"""An election system driven by a boolean formula hidden in a candidate name.

The lexicographically least candidate name is parsed as a formula over
variables x_{i,j} (block i, position j), written in the grammar

    F   ::= VAR | '!' F | '(' F '&' F ')' | '(' F '|' F ')'
    VAR ::= 'x_{' INT ',' INT '}'

with INT a decimal integer >= 1 without leading zeros and no whitespace
anywhere.  Everyone loses unless that name parses, there are at least as many
voters as blocks, at least 1 + 2*width candidates, and every block index up
to the maximum appears in the formula.  Otherwise the voters are sorted by
name and the first `blocks` of them each contribute one width-bit vector,
decoded from the tail of their preference order; variable x_{i,j} takes bit j
of voter i's vector.  If the formula evaluates to true every candidate wins,
otherwise every candidate loses.  Vote weights are ignored.

Auxiliary names for reductions are built by appending runs of '0' to a base
name, which keeps the base lexicographically least and orders the suffixes by
length; any injective order-preserving scheme would do.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from .core import name_key
from .errors import FormulaSyntaxError, InvalidInstanceError

# Formula nodes are plain tuples: ("var", atom), ("not", f),
# ("and", f, g), ("or", f, g).  Atoms are (i, j) pairs for tiered formulas
# and plain strings for source-level formulas.
Node = tuple


@dataclass(frozen=True)
class TieredFormula:
    root: Node
    width: int
    blocks: int
    variables: frozenset[tuple[int, int]]


def parse_tiered_formula(text: str) -> TieredFormula:
    """Parse a formula in the exact grammar; raise FormulaSyntaxError otherwise."""
    root = _parse(text, _parse_tiered_var)
    variables = frozenset(_atoms(root))
    return TieredFormula(
        root=root,
        width=max(j for _, j in variables),
        blocks=max(i for i, _ in variables),
        variables=variables,
    )


def parse_named_formula(text: str) -> Node:
    """Parse a formula whose variables are plain identifiers."""
    return _parse(text, _parse_identifier_var)


def format_formula(root: Node) -> str:
    """Render a formula back into the grammar (inverse of parsing)."""
    op = root[0]
    if op == "var":
        atom = root[1]
        if isinstance(atom, tuple):
            return "x_{%d,%d}" % atom
        return atom
    if op == "not":
        return "!" + format_formula(root[1])
    joiner = "&" if op == "and" else "|"
    return "(" + format_formula(root[1]) + joiner + format_formula(root[2]) + ")"


def eval_formula(root: Node, assignment: Mapping) -> bool:
    op = root[0]
    if op == "var":
        return bool(assignment[root[1]])
    if op == "not":
        return not eval_formula(root[1], assignment)
    if op == "and":
        return eval_formula(root[1], assignment) and eval_formula(root[2], assignment)
    return eval_formula(root[1], assignment) or eval_formula(root[2], assignment)


def formula_atoms(root: Node) -> frozenset:
    return frozenset(_atoms(root))


def _atoms(root: Node):
    op = root[0]
    if op == "var":
        yield root[1]
    elif op == "not":
        yield from _atoms(root[1])
    else:
        yield from _atoms(root[1])
        yield from _atoms(root[2])


def _parse(text: str, parse_var: Callable[[str, int], tuple]) -> Node:
    if not isinstance(text, str) or not text:
        raise FormulaSyntaxError("empty formula")
    node, pos = _parse_expr(text, 0, parse_var)
    if pos != len(text):
        raise FormulaSyntaxError(f"trailing input at offset {pos}: {text[pos:]!r}")
    return node


def _parse_expr(text: str, pos: int, parse_var) -> tuple[Node, int]:
    if pos >= len(text):
        raise FormulaSyntaxError("unexpected end of formula")
    ch = text[pos]
    if ch == "!":
        inner, pos = _parse_expr(text, pos + 1, parse_var)
        return ("not", inner), pos
    if ch == "(":
        left, pos = _parse_expr(text, pos + 1, parse_var)
        if pos >= len(text) or text[pos] not in "&|":
            raise FormulaSyntaxError(f"expected '&' or '|' at offset {pos}")
        op = "and" if text[pos] == "&" else "or"
        right, pos = _parse_expr(text, pos + 1, parse_var)
        if pos >= len(text) or text[pos] != ")":
            raise FormulaSyntaxError(f"expected ')' at offset {pos}")
        return (op, left, right), pos + 1
    return parse_var(text, pos)


def _parse_tiered_var(text: str, pos: int) -> tuple[Node, int]:
    if not text.startswith("x_{", pos):
        raise FormulaSyntaxError(f"expected a variable at offset {pos}")
    pos += 3
    i, pos = _parse_int(text, pos)
    if pos >= len(text) or text[pos] != ",":
        raise FormulaSyntaxError(f"expected ',' at offset {pos}")
    j, pos = _parse_int(text, pos + 1)
    if pos >= len(text) or text[pos] != "}":
        raise FormulaSyntaxError(f"expected '}}' at offset {pos}")
    return ("var", (i, j)), pos + 1


def _parse_int(text: str, pos: int) -> tuple[int, int]:
    start = pos
    while pos < len(text) and text[pos].isdigit():
        pos += 1
    token = text[start:pos]
    if not token:
        raise FormulaSyntaxError(f"expected an integer at offset {start}")
    if token[0] == "0":
        raise FormulaSyntaxError(f"subscripts start at 1 and bar leading zeros: {token!r}")
    return int(token), pos


_IDENT_CHARS = frozenset(
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_"
)


def _parse_identifier_var(text: str, pos: int) -> tuple[Node, int]:
    start = pos
    while pos < len(text) and text[pos] in _IDENT_CHARS:
        pos += 1
    if pos == start:
        raise FormulaSyntaxError(f"expected a variable name at offset {pos}")
    return ("var", text[start:pos]), pos


def decode_assignment(
    vote: Sequence[str], candidate: str, width: int
) -> tuple[int, ...]:
    """Decode a voter's width-bit vector from the tail of their vote.

    Drop `candidate` from the vote, take the 2*width least preferred of the
    remaining candidates, and read one bit per adjacent pair from the bottom
    up: a pair ordered name-ascending gives 0, name-descending gives 1.
    """
    rest = [c for c in vote if c != candidate]
    if len(rest) < 2 * width:
        raise InvalidInstanceError(
            f"vote ranks {len(rest)} candidates besides {candidate!r}, "
            f"need at least {2 * width}"
        )
    tail = rest[len(rest) - 2 * width :]
    # tail is ordered most-to-least preferred; flip to least-first.
    tail.reverse()
    bits = []
    for ell in range(width):
        low, high = tail[2 * ell], tail[2 * ell + 1]
        bits.append(0 if name_key(low) < name_key(high) else 1)
    return tuple(bits)


def tiered_winners(
    candidates: Sequence[str],
    named_votes: Iterable[tuple[str, int, Sequence[str]]],
) -> frozenset[str]:
    """Winner set of the formula-driven system; weights are ignored."""
    candidates = tuple(candidates)
    if not candidates:
        raise InvalidInstanceError("candidate set is empty")
    votes = list(named_votes)
    least = min(candidates, key=name_key)
    try:
        formula = parse_tiered_formula(least)
    except FormulaSyntaxError:
        return frozenset()
    if len(votes) < formula.blocks:
        return frozenset()
    if len(candidates) < 1 + 2 * formula.width:
        return frozenset()
    blocks_present = {i for i, _ in formula.variables}
    if blocks_present != set(range(1, formula.blocks + 1)):
        return frozenset()
    votes.sort(key=lambda nv: name_key(nv[0]))
    assignment = {}
    for idx in range(formula.blocks):
        bits = decode_assignment(votes[idx][2], least, formula.width)
        for (i, j) in formula.variables:
            if i == idx + 1:
                assignment[(i, j)] = bool(bits[j - 1])
    if eval_formula(formula.root, assignment):
        return frozenset(candidates)
    return frozenset()


def successor_names(base: str, count: int) -> tuple[str, ...]:
    """`count` names greater than `base`, ordered, built by appending '0's."""
    return tuple(base + "0" * (i + 1) for i in range(count))
