"""Indexed triple store with named graphs and sameAs canonicalization.

Triples are quads (subject, predicate, object, graph).  Three permutation
indexes (subject-, predicate- and object-first) make any single-bound
pattern a direct lookup.  owl:sameAs statements feed a union-find
structure; resolve_entity() maps every member of an equivalence class to
one canonical representative chosen by hub priority.  Merging stays
virtual: stored triples are never rewritten.
"""

from __future__ import annotations

import json
import threading
from contextlib import contextmanager
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from pathlib import Path
from urllib.parse import quote

from . import namespaces as ns
from . import ntriples
from .errors import BadIri, BadLiteral, GraphUnknown

DATATYPES = ("string", "integer", "decimal", "boolean")

_IRI_FORBIDDEN = set(' \t\n\r<>"{}|^`')


@dataclass(frozen=True, slots=True)
class Iri:
    """An absolute IRI."""

    value: str

    def __post_init__(self):
        v = self.value
        if not v or any(c in _IRI_FORBIDDEN for c in v):
            raise BadIri(f"not a usable IRI: {v!r}")
        if ":" not in v:
            raise BadIri(f"IRI must be absolute (missing scheme): {v!r}")

    def __str__(self):
        return self.value


def _check_lexical(lexical: str, datatype: str) -> None:
    if datatype == "integer":
        try:
            int(lexical)
        except ValueError:
            raise BadLiteral(f"bad integer lexical {lexical!r}") from None
    elif datatype == "decimal":
        if "e" in lexical.lower():
            raise BadLiteral(f"decimal lexical may not use an exponent: {lexical!r}")
        try:
            Decimal(lexical)
        except InvalidOperation:
            raise BadLiteral(f"bad decimal lexical {lexical!r}") from None
    elif datatype == "boolean":
        if lexical not in ("true", "false"):
            raise BadLiteral(f"bad boolean lexical {lexical!r}")
    elif datatype != "string":
        raise BadLiteral(f"unknown datatype {datatype!r}")


@dataclass(frozen=True, slots=True)
class Literal:
    """A typed literal; the lexical form is preserved verbatim."""

    lexical: str
    datatype: str = "string"

    def __post_init__(self):
        _check_lexical(self.lexical, self.datatype)

    @staticmethod
    def of(value) -> "Literal":
        """Build a literal from a Python value (bool, int, Decimal/float, str)."""
        if isinstance(value, bool):
            return Literal("true" if value else "false", "boolean")
        if isinstance(value, int):
            return Literal(str(value), "integer")
        if isinstance(value, Decimal):
            return Literal(format(value, "f"), "decimal")
        if isinstance(value, float):
            return Literal(format(Decimal(str(value)), "f"), "decimal")
        return Literal(str(value), "string")

    @property
    def value(self):
        """The parsed Python value of this literal."""
        if self.datatype == "integer":
            return int(self.lexical)
        if self.datatype == "decimal":
            return Decimal(self.lexical)
        if self.datatype == "boolean":
            return self.lexical == "true"
        return self.lexical

    def __str__(self):
        return self.lexical


Term = Iri | Literal


def iri(name: str) -> Iri:
    """Iri from prefixed or full form ('uniprot:P00533' or 'http://...')."""
    return Iri(ns.expand(name))


def term_key(term) -> tuple:
    """Total order over terms (None < boolean < numeric < string < IRI)."""
    if term is None:
        return (-1, ())
    if isinstance(term, Iri):
        return (3, (term.value,))
    if term.datatype == "boolean":
        return (0, (int(term.value), term.lexical))
    if term.datatype in ("integer", "decimal"):
        return (1, (Decimal(term.lexical), term.lexical))
    return (2, (term.lexical,))


@dataclass(frozen=True, slots=True)
class Triple:
    subject: Iri
    predicate: Iri
    object: Term
    graph: Iri

    def sort_key(self):
        return (
            term_key(self.subject),
            term_key(self.predicate),
            term_key(self.object),
            term_key(self.graph),
        )


@dataclass(frozen=True, slots=True)
class SameAsLink:
    left: Iri
    right: Iri


@dataclass(frozen=True, slots=True)
class ProvenanceRecord:
    """The five-question description attached to each ingested dataset."""

    what: str
    when: str
    where: str
    why: str
    who: str

    def __post_init__(self):
        for name in ("what", "when", "where", "why", "who"):
            if not getattr(self, name).strip():
                raise ValueError(f"provenance field {name!r} must be non-empty")

    def as_dict(self) -> dict[str, str]:
        return {
            "what": self.what,
            "when": self.when,
            "where": self.where,
            "why": self.why,
            "who": self.who,
        }


@dataclass(frozen=True, slots=True)
class GraphInfo:
    iri: Iri
    name: str
    domain: str
    provenance: ProvenanceRecord


class _RWLock:
    """Many readers or one writer; writers wait for readers to drain."""

    def __init__(self):
        self._cond = threading.Condition()
        self._readers = 0
        self._writing = False

    @contextmanager
    def read(self):
        with self._cond:
            while self._writing:
                self._cond.wait()
            self._readers += 1
        try:
            yield
        finally:
            with self._cond:
                self._readers -= 1
                if not self._readers:
                    self._cond.notify_all()

    @contextmanager
    def write(self):
        with self._cond:
            while self._writing or self._readers:
                self._cond.wait()
            self._writing = True
        try:
            yield
        finally:
            with self._cond:
                self._writing = False
                self._cond.notify_all()


class _SameAsIndex:
    """Union-find over sameAs-linked IRIs with hub-priority representatives."""

    def __init__(self):
        self._parent: dict[Iri, Iri] = {}
        self._members: dict[Iri, set[Iri]] = {}
        self._best: dict[Iri, Iri] = {}

    @staticmethod
    def _rank(iri: Iri) -> tuple:
        return (ns.hub_priority(iri.value), iri.value)

    def _find(self, x: Iri) -> Iri:
        root = x
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[x] != root:  # path compression
            self._parent[x], x = root, self._parent[x]
        return root

    def _ensure(self, x: Iri) -> Iri:
        if x not in self._parent:
            self._parent[x] = x
            self._members[x] = {x}
            self._best[x] = x
        return self._find(x)

    def link(self, a: Iri, b: Iri) -> None:
        ra, rb = self._ensure(a), self._ensure(b)
        if ra == rb:
            return
        if len(self._members[ra]) < len(self._members[rb]):
            ra, rb = rb, ra
        self._parent[rb] = ra
        self._members[ra] |= self._members.pop(rb)
        best_rb = self._best.pop(rb)
        if self._rank(best_rb) < self._rank(self._best[ra]):
            self._best[ra] = best_rb

    def resolve(self, x: Iri) -> Iri:
        if x not in self._parent:
            return x
        return self._best[self._find(x)]

    def members(self, x: Iri) -> frozenset[Iri]:
        if x not in self._parent:
            return frozenset((x,))
        return frozenset(self._members[self._find(x)])


class TripleStore:
    """In-memory quad store; see module docstring for the data model."""

    def __init__(self):
        self._lock = _RWLock()
        self._quads: set[Triple] = set()
        # index leaves are graph sets keyed by the remaining two positions
        self._spo: dict[Iri, dict[Iri, dict[Term, set[Iri]]]] = {}
        self._pos: dict[Iri, dict[Term, dict[Iri, set[Iri]]]] = {}
        self._osp: dict[Term, dict[Iri, dict[Iri, set[Iri]]]] = {}
        self._graphs: dict[Iri, GraphInfo] = {}
        self._sameas = _SameAsIndex()
        self._sameas_pred = Iri(ns.OWL_SAME_AS)

    # -- graph registry ---------------------------------------------------

    def register_graph(self, graph, provenance: ProvenanceRecord | None = None,
                       domain: str = "unspecified") -> Iri:
        """Register a named graph; short names expand to graph IRIs.

        A placeholder provenance record is synthesized when none is given
        (handy for scratch graphs in tests and for the sameAs link graph).
        """
        iri = graph if isinstance(graph, Iri) else Iri(ns.graph_iri(graph))
        name = ns.graph_name(iri.value)
        if provenance is None:
            provenance = ProvenanceRecord(
                what=f"dataset {name}", when="unspecified", where="unspecified",
                why="unspecified", who="unspecified",
            )
        with self._lock.write():
            self._graphs[iri] = GraphInfo(iri, name, domain, provenance)
        return iri

    def graph_info(self, graph) -> GraphInfo | None:
        iri = graph if isinstance(graph, Iri) else Iri(ns.graph_iri(graph))
        return self._graphs.get(iri)

    def graphs(self) -> list[GraphInfo]:
        with self._lock.read():
            return sorted(self._graphs.values(), key=lambda g: g.iri.value)

    # -- mutation ----------------------------------------------------------

    def insert_triple(self, t: Triple) -> bool:
        """Insert one triple; returns False for an exact duplicate."""
        if t.graph not in self._graphs:
            raise GraphUnknown(f"graph not registered: {t.graph.value}")
        with self._lock.write():
            return self._insert_locked(t)

    def _insert_locked(self, t: Triple) -> bool:
        if t in self._quads:
            return False
        self._quads.add(t)
        self._spo.setdefault(t.subject, {}).setdefault(t.predicate, {}) \
            .setdefault(t.object, set()).add(t.graph)
        self._pos.setdefault(t.predicate, {}).setdefault(t.object, {}) \
            .setdefault(t.subject, set()).add(t.graph)
        self._osp.setdefault(t.object, {}).setdefault(t.subject, {}) \
            .setdefault(t.predicate, set()).add(t.graph)
        if t.predicate == self._sameas_pred and isinstance(t.object, Iri):
            self._sameas.link(t.subject, t.object)
        return True

    def add(self, subject, predicate, obj, graph) -> bool:
        """Convenience insert from raw strings / terms."""
        t = Triple(
            subject if isinstance(subject, Iri) else Iri(ns.expand(subject)),
            predicate if isinstance(predicate, Iri) else Iri(ns.expand(predicate)),
            obj if isinstance(obj, (Iri, Literal)) else Literal.of(obj),
            graph if isinstance(graph, Iri) else Iri(ns.graph_iri(graph)),
        )
        return self.insert_triple(t)

    # -- lookup ------------------------------------------------------------

    def match(self, subject: Iri | None = None, predicate: Iri | None = None,
              obj: Term | None = None, graph: Iri | None = None) -> list[Triple]:
        """All triples agreeing with the bound positions, sorted (s, p, o, graph)."""
        with self._lock.read():
            out = list(self._match_locked(subject, predicate, obj, graph))
        out.sort(key=Triple.sort_key)
        return out

    def _match_locked(self, s, p, o, g):
        if s is not None:
            by_p = self._spo.get(s, {})
            preds = [p] if p is not None else list(by_p)
            for pred in preds:
                by_o = by_p.get(pred, {})
                objs = [o] if o is not None else list(by_o)
                for ob in objs:
                    for gr in by_o.get(ob, ()):
                        if g is None or gr == g:
                            yield Triple(s, pred, ob, gr)
        elif p is not None:
            by_o = self._pos.get(p, {})
            objs = [o] if o is not None else list(by_o)
            for ob in objs:
                by_s = by_o.get(ob, {})
                for subj, graphs in by_s.items():
                    for gr in graphs:
                        if g is None or gr == g:
                            yield Triple(subj, p, ob, gr)
        elif o is not None:
            by_s = self._osp.get(o, {})
            for subj, by_p2 in by_s.items():
                for pred, graphs in by_p2.items():
                    for gr in graphs:
                        if g is None or gr == g:
                            yield Triple(subj, pred, o, gr)
        else:
            for t in self._quads:
                if g is None or t.graph == g:
                    yield t

    def count_matching(self, subject=None, predicate=None, obj=None) -> int:
        """Cheap cardinality estimate for join ordering."""
        with self._lock.read():
            if subject is not None and subject not in self._spo:
                return 0
            if predicate is not None and predicate not in self._pos:
                return 0
            if obj is not None and obj not in self._osp:
                return 0
            if subject is not None:
                d = self._spo[subject]
                if predicate is not None:
                    d = d.get(predicate, {})
                    return len(d.get(obj, ())) if obj is not None else len(d)
                return sum(len(v) for v in d.values())
            if predicate is not None:
                d = self._pos[predicate]
                if obj is not None:
                    return len(d.get(obj, {}))
                return sum(len(v) for v in d.values())
            if obj is not None:
                return sum(len(v) for v in self._osp[obj].values())
            return len(self._quads)

    def __len__(self):
        return len(self._quads)

    # -- sameAs resolution ---------------------------------------------------

    def resolve_entity(self, e: Iri) -> Iri:
        """Canonical representative of e's sameAs class; e itself when unlinked."""
        with self._lock.read():
            return self._sameas.resolve(e)

    def same_as_class(self, e: Iri) -> frozenset[Iri]:
        with self._lock.read():
            return self._sameas.members(e)

    # -- namespace helper ------------------------------------------------------

    def split_iri(self, iri: Iri) -> tuple[str, str] | None:
        """(prefix, local) under the registered prefix table, if any matches."""
        compacted = ns.compact(iri.value)
        if compacted == iri.value:
            return None
        prefix, _, local = compacted.partition(":")
        return prefix, local

    # -- serialization -----------------------------------------------------

    def export_graph(self, graph: Iri | None = None) -> str:
        """N-Triples document of one graph (or the whole store), sorted."""
        with self._lock.read():
            triples = {(t.subject, t.predicate, t.object)
                       for t in self._quads
                       if graph is None or t.graph == graph}
        return ntriples.serialize(triples)

    def import_graph(self, doc: str, graph: Iri) -> int:
        """Load an N-Triples document into a registered graph; returns new-triple count."""
        if graph not in self._graphs:
            raise GraphUnknown(f"graph not registered: {graph.value}")
        added = 0
        with self._lock.write():
            for s, p, o in ntriples.parse(doc):
                if self._insert_locked(Triple(s, p, o, graph)):
                    added += 1
        return added

    # -- persistence ---------------------------------------------------------

    def save(self, path) -> None:
        """Dump registry + one N-Triples file per graph under a directory."""
        root = Path(path)
        (root / "graphs").mkdir(parents=True, exist_ok=True)
        registry = []
        for info in self.graphs():
            fname = quote(info.name, safe="") + ".nt"
            registry.append({
                "iri": info.iri.value,
                "name": info.name,
                "domain": info.domain,
                "provenance": info.provenance.as_dict(),
                "file": f"graphs/{fname}",
            })
            (root / "graphs" / fname).write_text(
                self.export_graph(info.iri), encoding="utf-8")
        (root / "registry.json").write_text(
            json.dumps({"graphs": registry}, indent=2) + "\n", encoding="utf-8")

    @classmethod
    def open(cls, path) -> "TripleStore":
        root = Path(path)
        registry = json.loads((root / "registry.json").read_text(encoding="utf-8"))
        store = cls()
        for entry in registry["graphs"]:
            iri = Iri(entry["iri"])
            store.register_graph(
                iri,
                ProvenanceRecord(**entry["provenance"]),
                domain=entry.get("domain", "unspecified"),
            )
            store.import_graph(
                (root / entry["file"]).read_text(encoding="utf-8"), iri)
        return store
