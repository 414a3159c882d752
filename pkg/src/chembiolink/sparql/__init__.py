"""SELECT-query subset: parser, evaluator, result tables."""

from .ast import (
    Aggregate,
    Comparison,
    Group,
    OrderKey,
    Regex,
    ResultTable,
    SelectQuery,
    TriplePattern,
    UnionBlock,
    Var,
    display_term,
)
from .engine import evaluate
from .parser import parse, pretty

__all__ = [
    "Aggregate",
    "Comparison",
    "Group",
    "OrderKey",
    "Regex",
    "ResultTable",
    "SelectQuery",
    "TriplePattern",
    "UnionBlock",
    "Var",
    "display_term",
    "evaluate",
    "parse",
    "pretty",
]
