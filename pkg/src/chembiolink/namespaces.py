"""Namespace tables, identifier kinds and hub-priority rules.

Everything that turns raw source identifiers into IRIs lives here, so the
store, the loaders and the query layer agree on one vocabulary.  The
predicate namespaces mirror the names used by the bundled datasets
(compound:CID, drugbank_interaction:SwissProt_ID, ...); the full table is
documented in the README.
"""

from __future__ import annotations

from urllib.parse import quote, unquote

BASE = "http://chembiolink.org/"
XSD = "http://www.w3.org/2001/XMLSchema#"
OWL = "http://www.w3.org/2002/07/owl#"

OWL_SAME_AS = OWL + "sameAs"

# prefix -> namespace base; the default prefix table for query parsing.
# compound: and uniprot: point at the hub entity namespaces so query
# constants land on the same IRIs the loaders mint.
PREFIXES: dict[str, str] = {
    "xsd": XSD,
    "owl": OWL,
    "prov": BASE + "ns/prov#",
    "lit": BASE + "ns/lit#",
    "xref": BASE + "ns/xref#",
    "compound": BASE + "compound/",
    "uniprot": BASE + "uniprot/",
    "gene": BASE + "gene/",
    "gi": BASE + "gi/",
    "pdb": BASE + "pdb/",
    "disease": BASE + "disease/",
    "side_effect": BASE + "side_effect/",
    "pubmed": BASE + "pubmed/",
    "graph": BASE + "graph/",
    "ppi": BASE + "ns/ppi#",
    "sider": BASE + "ns/sider#",
    "omim": BASE + "ns/omim#",
    "pharmgkb": BASE + "ns/pharmgkb#",
    "chemogenomics": BASE + "ns/chemogenomics#",
    "bindingdb_ligand": BASE + "ns/bindingdb_ligand#",
    "bindingdb_interaction": BASE + "ns/bindingdb_interaction#",
    "drugbank_drug": BASE + "ns/drugbank_drug#",
    "drugbank_interaction": BASE + "ns/drugbank_interaction#",
    "matador": BASE + "ns/matador#",
    "ctd": BASE + "ns/ctd#",
    "qsar": BASE + "ns/qsar#",
    "pubchem_bioassay": BASE + "ns/pubchem_bioassay#",
    "ttd_drug": BASE + "ns/ttd_drug#",
    "ttd_interaction": BASE + "ns/ttd_interaction#",
    "chembl": BASE + "ns/chembl#",
    "kegg_pathway_protein": BASE + "ns/kegg_pathway_protein#",
    "reactome": BASE + "ns/reactome#",
}

# entity namespaces, one per identifier kind
COMPOUND_NS = BASE + "compound/"
UNIPROT_NS = BASE + "uniprot/"
GENE_NS = BASE + "gene/"
GI_NS = BASE + "gi/"
PDB_NS = BASE + "pdb/"
DISEASE_NS = BASE + "disease/"
SIDE_EFFECT_NS = BASE + "side_effect/"
DOCUMENT_NS = BASE + "pubmed/"
GRAPH_NS = BASE + "graph/"

KIND_NS: dict[str, str] = {
    "cid": COMPOUND_NS,
    "uniprot": UNIPROT_NS,
    "gene-symbol": GENE_NS,
    "gi": GI_NS,
    "pdb": PDB_NS,
    "disease-name": DISEASE_NS,
    "side-effect-name": SIDE_EFFECT_NS,
}

IDENTIFIER_KINDS = tuple(KIND_NS) + ("drug-local",)

# Canonicalization order for sameAs equivalence classes: the compound and
# protein hubs win over symbol and GI namespaces, which win over
# dataset-local identifiers.  Ties fall back to the lexicographically
# smallest IRI.
_HUB_PRIORITY: tuple[tuple[str, int], ...] = (
    (COMPOUND_NS, 0),
    (UNIPROT_NS, 0),
    (GENE_NS, 1),
    (GI_NS, 2),
)
_DEFAULT_PRIORITY = 9

# node kinds used by network export, keyed by entity namespace
_NS_KIND: tuple[tuple[str, str], ...] = (
    (COMPOUND_NS, "compound"),
    (UNIPROT_NS, "protein"),
    (GENE_NS, "gene"),
    (GI_NS, "gene"),
    (DISEASE_NS, "disease"),
    (SIDE_EFFECT_NS, "side_effect"),
    (DOCUMENT_NS, "document"),
)


def expand(name: str) -> str:
    """Expand ``prefix:local`` through PREFIXES; full IRIs pass through."""
    if name.startswith("http://") or name.startswith("https://"):
        return name
    prefix, _, local = name.partition(":")
    if not local or prefix not in PREFIXES:
        raise KeyError(f"unknown prefix in {name!r}")
    return PREFIXES[prefix] + local


def compact(iri: str) -> str:
    """Best-effort inverse of expand(); returns the IRI unchanged on a miss."""
    for prefix, ns in PREFIXES.items():
        if iri.startswith(ns):
            return f"{prefix}:{iri[len(ns):]}"
    return iri


def entity_iri(kind: str, value: str, dataset: str | None = None) -> str:
    """IRI for a raw identifier of the given kind.

    ``drug-local`` identifiers live in a per-dataset namespace and require
    ``dataset``; named kinds use their fixed hub or local namespace.
    """
    value = value.strip()
    if kind == "drug-local":
        if not dataset:
            raise ValueError("drug-local identifiers need a dataset name")
        return f"{BASE}{dataset}/{quote(value, safe='')}"
    if kind not in KIND_NS:
        raise ValueError(f"unknown identifier kind {kind!r}")
    return KIND_NS[kind] + quote(value, safe="")


def local_name(iri: str) -> str:
    """Decoded tail of an IRI, after the last '/' or '#'."""
    for sep in ("#", "/"):
        if sep in iri:
            return unquote(iri.rsplit(sep, 1)[1])
    return iri


def hub_priority(iri: str) -> int:
    for ns, prio in _HUB_PRIORITY:
        if iri.startswith(ns):
            return prio
    return _DEFAULT_PRIORITY


def kind_of(iri: str) -> str:
    """Network-node kind for an entity IRI; dataset rows map to 'record'."""
    for ns, kind in _NS_KIND:
        if iri.startswith(ns):
            return kind
    return "record"


def graph_iri(name: str) -> str:
    """Graph IRI for a short dataset name (idempotent on full IRIs)."""
    if name.startswith("http://") or name.startswith("https://"):
        return name
    return GRAPH_NS + quote(name, safe="")


def graph_name(iri: str) -> str:
    if iri.startswith(GRAPH_NS):
        return unquote(iri[len(GRAPH_NS):])
    return iri
