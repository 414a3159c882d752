"""Reference query evaluator used to cross-check the engine.

Deliberately naive: no indexes, patterns joined in source order by
linear scan over the triple list, filters applied at the end of each
group.  Shares nothing with chembiolink.sparql.engine beyond the AST
classes it consumes.
"""

from __future__ import annotations

import re
from decimal import Decimal

from chembiolink.sparql.ast import (
    Aggregate, Comparison, Regex, TriplePattern, UnionBlock, Var,
)
from chembiolink.store import Iri, Literal


def oracle_term_key(term):
    if term is None:
        return (-1, ())
    if isinstance(term, Iri):
        return (3, (term.value,))
    if term.datatype == "boolean":
        return (0, (0 if term.lexical == "false" else 1, term.lexical))
    if term.datatype in ("integer", "decimal"):
        return (1, (Decimal(term.lexical), term.lexical))
    return (2, (term.lexical,))


def scan_match(triples, s=None, p=None, o=None):
    out = [t for t in triples
           if (s is None or t[0] == s)
           and (p is None or t[1] == p)
           and (o is None or t[2] == o)]
    return sorted(out, key=lambda t: tuple(oracle_term_key(x) for x in t))


def _unify(pattern, triple, sol):
    merged = dict(sol)
    for pat, val in zip((pattern.subject, pattern.predicate, pattern.object),
                        triple):
        if isinstance(pat, Var):
            if pat.name in merged:
                if merged[pat.name] != val:
                    return None
            else:
                merged[pat.name] = val
        elif pat != val:
            return None
    return merged


def _passes(f, sol):
    if isinstance(f, Regex):
        value = sol.get(f.var.name)
        if value is None:
            raise AssertionError("oracle queries must bind filter vars")
        text = value.value if isinstance(value, Iri) else value.lexical
        return re.search(f.pattern, text,
                         re.IGNORECASE if "i" in f.flags else 0) is not None
    sides = []
    for term in (f.left, f.right):
        value = sol.get(term.name) if isinstance(term, Var) else term
        if value is None:
            raise AssertionError("oracle queries must bind filter vars")
        if isinstance(value, Iri):
            sides.append(("iri", value.value))
        elif value.datatype in ("integer", "decimal"):
            sides.append(("number", Decimal(value.lexical)))
        elif value.datatype == "boolean":
            sides.append(("boolean", value.lexical == "true"))
        else:
            sides.append(("string", value.lexical))
    (lk, lv), (rk, rv) = sides
    if lk != rk:
        return False
    return {
        "<": lv < rv, ">": lv > rv, "<=": lv <= rv, ">=": lv >= rv,
        "=": lv == rv, "!=": lv != rv,
    }[f.op]


def _eval_group(triples, group, sols):
    filters = []
    for el in group.elements:
        if isinstance(el, TriplePattern):
            new = []
            for sol in sols:
                for t in triples:
                    merged = _unify(el, t, sol)
                    if merged is not None:
                        new.append(merged)
            sols = new
        elif isinstance(el, UnionBlock):
            merged = []
            for branch in el.branches:
                merged.extend(_eval_group(triples, branch, sols))
            sols = _dedup(merged)
        else:
            filters.append(el)
    for f in filters:
        sols = [s for s in sols if _passes(f, s)]
    return sols


def _dedup(sols):
    seen, out = set(), []
    for sol in sols:
        key = frozenset(sol.items())
        if key not in seen:
            seen.add(key)
            out.append(sol)
    return out


def evaluate_oracle(quads, query):
    """Rows for a query over (s, p, o, g) quads, mirroring spec semantics."""
    triples = sorted({(t.subject, t.predicate, t.object) for t in quads},
                     key=lambda t: tuple(oracle_term_key(x) for x in t))
    sols = _dedup(_eval_group(triples, query.where, [{}]))

    if query.select_all:
        names = [v.name for v in query.where.variables()]
        items = [Var(n) for n in names]
    else:
        items = list(query.select)
        names = [i.alias.name if isinstance(i, Aggregate) else i.name
                 for i in items]

    if query.group_by or any(isinstance(i, Aggregate) for i in items):
        keys = [v.name for v in query.group_by]
        grouped = {}
        if keys:
            for sol in sols:
                grouped.setdefault(tuple(sol.get(k) for k in keys),
                                   []).append(sol)
        else:
            grouped[()] = sols
        rows = []
        for key, members in grouped.items():
            by_name = dict(zip(keys, key))
            row = []
            for item in items:
                if isinstance(item, Aggregate):
                    if item.var is None:
                        row.append(Literal(str(len(members)), "integer"))
                    else:
                        bound = sum(1 for m in members
                                    if m.get(item.var.name) is not None)
                        row.append(Literal(str(bound), "integer"))
                else:
                    row.append(by_name[item.name])
            rows.append(tuple(row))
    else:
        rows = []
        seen = set()
        for sol in sols:
            row = tuple(sol.get(n) for n in names)
            if row not in seen:
                seen.add(row)
                rows.append(row)

    for key in reversed(query.order_by):
        idx = names.index(key.var.name)
        rows.sort(key=lambda r: oracle_term_key(r[idx]),
                  reverse=key.descending)
    if query.limit is not None:
        rows = rows[:query.limit]
    return names, rows
