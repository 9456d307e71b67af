"""HNF: a hybrid-constraint extension of the DIMACS CNF exchange format.

Grammar (ASCII, whitespace-separated tokens, one constraint per line):

    c <comment>
    p hnf <num_vars> <num_constraints>
    l1 l2 ... lk 0            OR clause
    x l1 l2 ... lk 0          XOR
    n l1 l2 ... lk 0          not-all-equal
    d <op> <bound> l1 ... lk 0   cardinality, op in {>=, <=, =}

Literals are nonzero integers with DIMACS signs (negative = negated).
The declared constraint count must match the parsed count, and every
variable index must be within the declared range.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import CARD, NAE, OR, XOR, Comparator, Constraint, Formula, InputError, Kind

__all__ = ["ParseError", "HnfDocument", "split_document", "parse_hnf", "serialize_hnf"]

_CARD_OPS = {op.value: op for op in Comparator}


class ParseError(InputError):
    """Malformed HNF text; carries the 1-based offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class HnfDocument:
    """Lexical structure of an HNF file, before constraint parsing."""

    num_vars: int
    num_constraints: int
    constraint_lines: tuple[tuple[int, str], ...]  # (line number, text)
    comments: tuple[str, ...]


def split_document(text: str) -> HnfDocument:
    header = None
    constraint_lines = []
    comments = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.split(maxsplit=1)[0] == "c":
            comments.append(line)
            continue
        if line.split(maxsplit=1)[0] == "p":
            if header is not None:
                raise ParseError("duplicate header", lineno)
            tokens = line.split()
            if len(tokens) != 4 or tokens[0] != "p" or tokens[1] != "hnf":
                raise ParseError(f"malformed header {line!r}", lineno)
            try:
                header = (int(tokens[2]), int(tokens[3]))
            except ValueError:
                raise ParseError(f"malformed header {line!r}", lineno) from None
            if header[0] < 0 or header[1] < 0:
                raise ParseError("negative counts in header", lineno)
            continue
        if header is None:
            raise ParseError("constraint before 'p hnf' header", lineno)
        constraint_lines.append((lineno, line))
    if header is None:
        raise ParseError("missing 'p hnf' header")
    if len(constraint_lines) != header[1]:
        raise ParseError(
            f"header declares {header[1]} constraints, found {len(constraint_lines)}"
        )
    return HnfDocument(header[0], header[1], tuple(constraint_lines), tuple(comments))


def _parse_literals(tokens: list[str], num_vars: int, lineno: int) -> list[int]:
    try:
        values = [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"non-integer literal among {tokens!r}", lineno) from None
    if not values or values[-1] != 0:
        raise ParseError("missing 0 terminator", lineno)
    if 0 in values[:-1]:
        raise ParseError("literal 0 before end of line", lineno)
    literals = values[:-1]
    for lit in literals:
        if abs(lit) > num_vars:
            raise ParseError(f"variable {abs(lit)} out of range (n={num_vars})", lineno)
    return literals


def _parse_constraint(line: str, num_vars: int, lineno: int) -> Constraint:
    tokens = line.split()
    try:
        if tokens[0] == "x":
            return XOR(*_parse_literals(tokens[1:], num_vars, lineno))
        if tokens[0] == "n":
            return NAE(*_parse_literals(tokens[1:], num_vars, lineno))
        if tokens[0] == "d":
            if len(tokens) < 3:
                raise ParseError("truncated cardinality line", lineno)
            op = _CARD_OPS.get(tokens[1])
            if op is None:
                raise ParseError(f"unknown comparator {tokens[1]!r}", lineno)
            try:
                bound = int(tokens[2])
            except ValueError:
                raise ParseError(f"non-integer bound {tokens[2]!r}", lineno) from None
            return CARD(op, bound, *_parse_literals(tokens[3:], num_vars, lineno))
        return OR(*_parse_literals(tokens, num_vars, lineno))
    except ParseError:
        raise
    except InputError as err:
        raise ParseError(str(err), lineno) from None


def parse_hnf(text: str) -> Formula:
    doc = split_document(text)
    constraints = tuple(
        _parse_constraint(line, doc.num_vars, lineno)
        for lineno, line in doc.constraint_lines
    )
    return Formula(doc.num_vars, constraints)


def _serialize_constraint(c: Constraint) -> str:
    lits = " ".join(str(l.to_dimacs()) for l in c.literals)
    if c.kind is Kind.OR:
        return f"{lits} 0"
    if c.kind is Kind.XOR:
        return f"x {lits} 0"
    if c.kind is Kind.NAE:
        return f"n {lits} 0"
    return f"d {c.comparator.value} {c.bound} {lits} 0"


def serialize_hnf(formula: Formula, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"c {part}" for part in comment.splitlines())
    lines.append(f"p hnf {formula.num_vars} {formula.num_constraints}")
    lines.extend(_serialize_constraint(c) for c in formula.constraints)
    return "\n".join(lines) + "\n"
