"""Query syntax tree and result container."""

from __future__ import annotations

from dataclasses import dataclass

from ..store import Iri, Literal


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self):
        return "?" + self.name


PatternTerm = Var | Iri | Literal


@dataclass(frozen=True, slots=True)
class TriplePattern:
    subject: PatternTerm
    predicate: PatternTerm
    object: PatternTerm

    def variables(self):
        return [t for t in (self.subject, self.predicate, self.object)
                if isinstance(t, Var)]


@dataclass(frozen=True, slots=True)
class Comparison:
    """Binary filter such as (?ic50 < 10000)."""

    left: PatternTerm
    op: str  # one of < > <= >= = !=
    right: PatternTerm

    def variables(self):
        return [t for t in (self.left, self.right) if isinstance(t, Var)]


@dataclass(frozen=True, slots=True)
class Regex:
    """Filter regex(?var, "pattern") with optional "i" flag."""

    var: Var
    pattern: str
    flags: str = ""

    def variables(self):
        return [self.var]


@dataclass(frozen=True)
class Group:
    """Brace-delimited block: patterns, filters and unions joined together."""

    elements: tuple = ()

    def variables(self):
        seen: list[Var] = []
        for el in self.elements:
            if isinstance(el, UnionBlock):
                for branch in el.branches:
                    for v in branch.variables():
                        if v not in seen:
                            seen.append(v)
            elif isinstance(el, TriplePattern):
                for v in el.variables():
                    if v not in seen:
                        seen.append(v)
        return seen


@dataclass(frozen=True)
class UnionBlock:
    branches: tuple[Group, ...] = ()


@dataclass(frozen=True, slots=True)
class Aggregate:
    """(COUNT(?v) AS ?alias); var None means COUNT(*)."""

    var: Var | None
    alias: Var


@dataclass(frozen=True, slots=True)
class OrderKey:
    var: Var
    descending: bool = False


@dataclass(frozen=True)
class SelectQuery:
    select: tuple  # Var | Aggregate entries; empty tuple means SELECT *
    where: Group
    group_by: tuple[Var, ...] = ()
    order_by: tuple[OrderKey, ...] = ()
    limit: int | None = None

    @property
    def select_all(self) -> bool:
        return not self.select


def display_term(term) -> str:
    """Render a result cell for delimited or JSON output."""
    if term is None:
        return ""
    if isinstance(term, Iri):
        return term.value
    return term.lexical


@dataclass(frozen=True)
class ResultTable:
    """Projected query solutions; cells are terms, None when unbound."""

    variables: tuple[str, ...]
    rows: tuple[tuple, ...] = ()

    def __len__(self):
        return len(self.rows)

    def column(self, name: str) -> list:
        idx = self.variables.index(name)
        return [row[idx] for row in self.rows]

    def to_json(self) -> dict:
        return {
            "head": {"vars": list(self.variables)},
            "rows": [[display_term(c) for c in row] for row in self.rows],
        }

    def to_tsv(self) -> str:
        lines = ["\t".join(self.variables)]
        for row in self.rows:
            lines.append("\t".join(display_term(c) for c in row))
        return "\n".join(lines) + "\n"
