"""Linked-data integration engine for systems chemical biology."""

from .errors import ChemBioLinkError
from .store import Iri, Literal, ProvenanceRecord, Triple, TripleStore, iri

__version__ = "0.1.0"

__all__ = [
    "ChemBioLinkError",
    "Iri",
    "Literal",
    "ProvenanceRecord",
    "Triple",
    "TripleStore",
    "iri",
    "__version__",
]
