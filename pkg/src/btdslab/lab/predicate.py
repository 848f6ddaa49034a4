"""Boolean predicates over property names, e.g. ``H_almost_Rothberger AND NOT H_Rothberger``.

Parsed with :mod:`ast` and evaluated by walking a whitelist of node types,
so nothing but AND / OR / NOT, parentheses and known names is accepted.
"""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass
from typing import Mapping

from btdslab.errors import PredicateError

_WORDS = {"AND": "and", "OR": "or", "NOT": "not"}


@dataclass(frozen=True)
class Predicate:
    source: str
    tree: ast.Expression
    names: frozenset[str]

    def __call__(self, values: Mapping[str, bool]) -> bool:
        return _eval(self.tree.body, values)


def _eval(node: ast.AST, values: Mapping[str, bool]) -> bool:
    if isinstance(node, ast.BoolOp):
        parts = (_eval(v, values) for v in node.values)
        return all(parts) if isinstance(node.op, ast.And) else any(parts)
    if isinstance(node, ast.UnaryOp):
        return not _eval(node.operand, values)
    if isinstance(node, ast.Name):
        return bool(values[node.id])
    raise PredicateError(f"unsupported expression node {type(node).__name__}")


def parse_predicate(text: str, known: set[str] | frozenset[str]) -> Predicate:
    if not text or not text.strip():
        raise PredicateError("empty predicate")
    # upper-case connectives become Python keywords; lower-case ones already are
    py = re.sub(r"\b(AND|OR|NOT)\b", lambda m: _WORDS[m.group(1)], text)
    try:
        tree = ast.parse(py, mode="eval")
    except SyntaxError as exc:
        raise PredicateError(f"cannot parse predicate {text!r}: {exc.msg}") from None
    names = set()
    for node in ast.walk(tree):
        if isinstance(node, ast.Name):
            if node.id not in known:
                raise PredicateError(f"unknown property {node.id!r} in predicate")
            names.add(node.id)
        elif isinstance(node, ast.UnaryOp) and not isinstance(node.op, ast.Not):
            raise PredicateError(f"operator {type(node.op).__name__} not allowed")
        elif not isinstance(node, (ast.Expression, ast.BoolOp, ast.And, ast.Or, ast.UnaryOp, ast.Not, ast.Name, ast.Load)):
            raise PredicateError(f"{type(node).__name__} not allowed in predicate {text!r}")
    return Predicate(text, tree, frozenset(names))
