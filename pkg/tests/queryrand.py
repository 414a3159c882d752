"""Seeded random stores and queries for engine-versus-oracle checks.

Queries are built so filters only touch variables bound in every
solution, and "exact" queries order by every output column, making the
full row list (and therefore LIMIT) deterministic for comparison.
"""

from __future__ import annotations

import random

from chembiolink import Iri, Literal, Triple, TripleStore
from chembiolink.sparql.ast import (
    Aggregate, Comparison, Group, OrderKey, Regex, SelectQuery,
    TriplePattern, UnionBlock, Var,
)

SUBJECTS = [Iri(f"http://q.test/s{i}") for i in range(5)]
PREDICATES = [Iri(f"http://q.test/p{i}") for i in range(4)]
LITERALS = (
    [Literal(str(n), "integer") for n in range(1, 6)]
    + [Literal(t, "string") for t in ("alpha", "Beta", "gamma")]
    + [Literal(t, "decimal") for t in ("1.5", "2.50")]
    + [Literal("true", "boolean")]
)
OBJECTS = SUBJECTS[:2] + LITERALS
REGEX_PATTERNS = ["a", "e", "s[01]", "ALPH", "zzz", "^http"]
OPS = ["<", ">", "<=", ">=", "=", "!="]


def random_store(rng: random.Random) -> TripleStore:
    store = TripleStore()
    graphs = [store.register_graph(f"g{k}") for k in range(rng.randint(1, 2))]
    for _ in range(rng.randint(5, 30)):
        store.insert_triple(Triple(
            rng.choice(SUBJECTS), rng.choice(PREDICATES),
            rng.choice(OBJECTS), rng.choice(graphs)))
    return store


def _random_pattern(rng, vars_pool, prefer=None):
    def position(kind_pool, var_chance):
        if rng.random() < var_chance:
            if prefer is not None and rng.random() < 0.7:
                return prefer
            return rng.choice(vars_pool)
        return rng.choice(kind_pool)

    return TriplePattern(
        position(SUBJECTS, 0.7),
        position(PREDICATES, 0.4),
        position(OBJECTS, 0.6),
    )


def _pattern_vars(patterns):
    out = []
    for p in patterns:
        for v in p.variables():
            if v not in out:
                out.append(v)
    return out


def random_query(rng: random.Random) -> tuple[SelectQuery, bool]:
    vars_pool = [Var(f"v{i}") for i in range(rng.randint(1, 4))]
    elements: list = []
    filter_pool: list[Var] = []

    if rng.random() < 0.25:
        branches = []
        branch_vars = []
        for _ in range(2):
            pats = [_random_pattern(rng, vars_pool)
                    for _ in range(rng.randint(1, 2))]
            branches.append(Group(tuple(pats)))
            branch_vars.append(set(_pattern_vars(pats)))
        elements.append(UnionBlock(tuple(branches)))
        certain = branch_vars[0] & branch_vars[1]
    else:
        certain = set()

    link = rng.choice(sorted(certain, key=str)) if certain else None
    for _ in range(rng.randint(1, 3)):
        pattern = _random_pattern(rng, vars_pool, prefer=link)
        elements.append(pattern)
        certain.update(pattern.variables())
        link = rng.choice(pattern.variables()) if pattern.variables() else link
    filter_pool = sorted(certain, key=str)

    if filter_pool and rng.random() < 0.4:
        left = rng.choice(filter_pool)
        right = rng.choice(OBJECTS) if rng.random() < 0.8 \
            else rng.choice(filter_pool)
        pair = (left, right) if rng.random() < 0.85 else (right, left)
        elements.append(Comparison(pair[0], rng.choice(OPS), pair[1]))
    if filter_pool and rng.random() < 0.2:
        elements.append(Regex(rng.choice(filter_pool),
                              rng.choice(REGEX_PATTERNS),
                              rng.choice(["", "i"])))

    where = Group(tuple(elements))
    used = where.variables() or vars_pool[:1]

    if rng.random() < 0.3:
        group_by = tuple(rng.sample(used, rng.randint(1, len(used))))
        agg_var = None if rng.random() < 0.5 else rng.choice(used)
        select = group_by + (Aggregate(agg_var, Var("cnt")),)
    elif rng.random() < 0.25:
        group_by = ()
        select = ()  # SELECT *
    else:
        group_by = ()
        select = tuple(rng.sample(used, rng.randint(1, len(used))))

    if select:
        names = [i.alias.name if isinstance(i, Aggregate) else i.name
                 for i in select]
    else:
        names = [v.name for v in used]

    exact = rng.random() < 0.6
    if exact:
        order_by = tuple(OrderKey(Var(n), descending=rng.random() < 0.5)
                         for n in names)
        limit = rng.randint(1, 5) if rng.random() < 0.6 else None
    else:
        order_by = ()
        limit = None
    return SelectQuery(select, where, group_by, order_by, limit), exact


def random_case(seed: int):
    rng = random.Random(seed)
    return random_store(rng), *random_query(rng)
