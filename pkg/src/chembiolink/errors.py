"""Exception types shared across the package."""


class ChemBioLinkError(Exception):
    """Base class for all package errors."""


class BadIri(ChemBioLinkError):
    """A string that cannot serve as an absolute IRI."""


class BadLiteral(ChemBioLinkError):
    """A literal whose lexical form does not parse under its datatype."""


class GraphUnknown(ChemBioLinkError):
    """A triple names a graph that was never registered."""


class ParseError(ChemBioLinkError):
    """Syntax error in a query or an N-Triples document."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line})" if column is None else f" (line {line}, column {column})"
        super().__init__(message + where)


class PrefixError(ParseError):
    """Undeclared prefix in a query."""


class EvalError(ChemBioLinkError):
    """A query that cannot be evaluated, e.g. a filter over an unbound variable."""


class AffinityError(ChemBioLinkError):
    """An affinity string with no parsable number."""

    def __init__(self, text):
        self.text = text
        super().__init__(f"unparsable affinity string: {text!r}")


class BadId(ChemBioLinkError):
    """An empty or malformed source identifier."""


class SchemaError(ChemBioLinkError):
    """A schema-graph descriptor that references undeclared nodes."""


class ClassError(ChemBioLinkError):
    """An entity class with no data sources."""


class SourceError(ChemBioLinkError):
    """A source name missing from the source catalog."""


class DictConflict(ChemBioLinkError):
    """One surface term mapped to different entities within a single kind."""
