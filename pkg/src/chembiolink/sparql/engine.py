"""Query evaluation over the indexed store.

Groups evaluate by index nested-loop join: union blocks first in source
order, then triple patterns in a greedy selectivity order (prefer
patterns sharing a bound variable, then lower index cardinality), with
filters applied as soon as their variables are certainly bound.
Solutions are partial bindings; set semantics throughout.
"""

from __future__ import annotations

import re
from decimal import Decimal
from functools import lru_cache

from ..errors import EvalError
from ..store import Iri, Literal, TripleStore, term_key
from .ast import (
    Aggregate, Comparison, Group, Regex, ResultTable, SelectQuery,
    TriplePattern, UnionBlock, Var,
)
from .parser import parse


@lru_cache(maxsize=256)
def _compiled(pattern: str, flags: str):
    return re.compile(pattern, re.IGNORECASE if "i" in flags else 0)


def _operand(term, sol):
    if isinstance(term, Var):
        value = sol.get(term.name)
        if value is None:
            raise EvalError(f"filter references unbound variable {term}")
        return value
    return term


def _comparable(term):
    """(kind, python value) for filter comparison; kinds never mix."""
    if isinstance(term, Iri):
        return "iri", term.value
    if term.datatype in ("integer", "decimal"):
        return "number", Decimal(term.lexical)
    if term.datatype == "boolean":
        return "boolean", term.value
    return "string", term.lexical


_OPS = {
    "<": lambda a, b: a < b,
    ">": lambda a, b: a > b,
    "<=": lambda a, b: a <= b,
    ">=": lambda a, b: a >= b,
    "=": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
}


def _filter_pass(f, sol) -> bool:
    if isinstance(f, Regex):
        value = _operand(f.var, sol)
        text = value.value if isinstance(value, Iri) else value.lexical
        return _compiled(f.pattern, f.flags).search(text) is not None
    lk, lv = _comparable(_operand(f.left, sol))
    rk, rv = _comparable(_operand(f.right, sol))
    if lk != rk:
        return False  # incomparable kinds drop the row
    return _OPS[f.op](lv, rv)


def _certain_vars(group: Group) -> set[str]:
    """Variable names bound in every solution of the group."""
    out: set[str] = set()
    for el in group.elements:
        if isinstance(el, TriplePattern):
            out.update(v.name for v in el.variables())
        elif isinstance(el, UnionBlock):
            out.update(set.intersection(
                *(_certain_vars(b) for b in el.branches)))
    return out


def _dedup(sols: list[dict]) -> list[dict]:
    seen = set()
    out = []
    for sol in sols:
        key = frozenset(sol.items())
        if key not in seen:
            seen.add(key)
            out.append(sol)
    return out


def _extend(store: TripleStore, sols: list[dict],
            pattern: TriplePattern) -> list[dict]:
    positions = (pattern.subject, pattern.predicate, pattern.object)
    out = []
    for sol in sols:
        bound = [sol.get(t.name) if isinstance(t, Var) else t
                 for t in positions]
        seen = set()
        for t in store.match(bound[0], bound[1], bound[2]):
            ext: dict = {}
            ok = True
            for pat, val in zip(positions, (t.subject, t.predicate, t.object)):
                if not isinstance(pat, Var):
                    continue
                prev = sol.get(pat.name) or ext.get(pat.name)
                if prev is None:
                    ext[pat.name] = val
                elif prev != val:
                    ok = False  # repeated variable must rebind identically
                    break
            if not ok:
                continue
            key = frozenset(ext.items())
            if key in seen:
                continue
            seen.add(key)
            out.append({**sol, **ext})
    return out


def _eval_group(store: TripleStore, group: Group, sols: list[dict],
                bound: set[str]) -> list[dict]:
    unions = [e for e in group.elements if isinstance(e, UnionBlock)]
    patterns = [e for e in group.elements if isinstance(e, TriplePattern)]
    pending = [e for e in group.elements if isinstance(e, (Comparison, Regex))]
    bound = set(bound)

    def apply_ready(force=False):
        nonlocal sols
        for f in list(pending):
            if force or all(v.name in bound for v in f.variables()):
                sols = [s for s in sols if _filter_pass(f, s)]
                pending.remove(f)

    for u in unions:
        merged: list[dict] = []
        for branch in u.branches:
            merged.extend(_eval_group(store, branch, sols, bound))
        sols = _dedup(merged)
        bound |= set.intersection(*(_certain_vars(b) for b in u.branches))
        apply_ready()

    remaining = list(enumerate(patterns))
    while remaining:
        def cost(item):
            idx, p = item
            consts = [None if isinstance(t, Var) else t
                      for t in (p.subject, p.predicate, p.object)]
            shares = not bound or not p.variables() or any(
                v.name in bound for v in p.variables())
            return (0 if shares else 1,
                    store.count_matching(*consts), idx)

        chosen = min(remaining, key=cost)
        remaining.remove(chosen)
        sols = _extend(store, sols, chosen[1])
        bound.update(v.name for v in chosen[1].variables())
        apply_ready()

    apply_ready(force=True)
    return sols


def _output_names(q: SelectQuery) -> list[str]:
    if q.select_all:
        return [v.name for v in q.where.variables()]
    return [item.alias.name if isinstance(item, Aggregate) else item.name
            for item in q.select]


def _project(q: SelectQuery, sols: list[dict]) -> list[tuple]:
    names = _output_names(q)
    has_agg = any(isinstance(item, Aggregate) for item in q.select)
    if not has_agg and not q.group_by:
        raw = [tuple(sol.get(n) for n in names) for sol in sols]
        return _dedup_rows(raw)
    # grouped: aggregate-free GROUP BY degenerates to distinct key rows
    key_names = [v.name for v in q.group_by]
    groups: dict[tuple, list[dict]] = {}
    if key_names:
        for sol in sols:
            groups.setdefault(
                tuple(sol.get(k) for k in key_names), []).append(sol)
    else:
        groups[()] = list(sols)
    rows = []
    for key in sorted(groups, key=lambda k: tuple(term_key(c) for c in k)):
        members = groups[key]
        by_name = dict(zip(key_names, key))
        cells = []
        for item in q.select:
            if isinstance(item, Aggregate):
                if item.var is None:
                    n = len(members)
                else:
                    n = sum(1 for s in members
                            if s.get(item.var.name) is not None)
                cells.append(Literal(str(n), "integer"))
            else:
                cells.append(by_name[item.name])
        rows.append(tuple(cells))
    return rows


def _dedup_rows(rows: list[tuple]) -> list[tuple]:
    seen = set()
    out = []
    for row in rows:
        if row not in seen:
            seen.add(row)
            out.append(row)
    return out


def _order(rows: list[tuple], names: list[str], q: SelectQuery) -> list[tuple]:
    for key in reversed(q.order_by):
        if key.var.name not in names:
            raise EvalError(f"cannot order by unprojected variable {key.var}")
        idx = names.index(key.var.name)
        rows.sort(key=lambda r: term_key(r[idx]), reverse=key.descending)
    return rows


def evaluate(store: TripleStore, query: SelectQuery | str) -> ResultTable:
    """Run a query (text or parsed) and return the projected table."""
    q = parse(query) if isinstance(query, str) else query
    sols = _dedup(_eval_group(store, q.where, [{}], set()))
    names = _output_names(q)
    rows = _project(q, sols)
    rows = _order(rows, names, q)
    if q.limit is not None:
        rows = rows[:q.limit]
    return ResultTable(tuple(names), tuple(rows))
