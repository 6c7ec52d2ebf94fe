"""Vocabulary, IRI minting, triple store, and serialization."""

from .graph import Graph, Namespaces
from .naming import make_iri
from .serialize import parse, serialize, sniff_format
from .terms import (
    DEFAULT_BASE_NS,
    DEFAULT_INSTANCE_NS,
    INSTANCE_SUFFIX,
    OWL_SAMEAS,
    RDF_TYPE,
    VOCAB_NS,
    Iri,
    Literal,
    Term,
    Triple,
    hex_bytes,
    integer,
    text,
    unix_seconds,
)
from .vocab import Vocabulary, vocab_individual

__all__ = [
    "Graph",
    "Namespaces",
    "make_iri",
    "parse",
    "serialize",
    "sniff_format",
    "DEFAULT_BASE_NS",
    "DEFAULT_INSTANCE_NS",
    "INSTANCE_SUFFIX",
    "OWL_SAMEAS",
    "RDF_TYPE",
    "VOCAB_NS",
    "Iri",
    "Literal",
    "Term",
    "Triple",
    "hex_bytes",
    "integer",
    "text",
    "unix_seconds",
    "Vocabulary",
    "vocab_individual",
]
