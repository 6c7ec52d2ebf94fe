"""RDF-style terms: IRIs, typed literals, and triples.

Identity of an :class:`Iri` is its rendered absolute form, byte for byte;
the namespace/local split is only a construction convenience.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

VOCAB_NS = "urn:chain-oasis:vocab#"
DEFAULT_BASE_NS = "urn:chain-oasis:"
INSTANCE_SUFFIX = "ind#"
DEFAULT_INSTANCE_NS = DEFAULT_BASE_NS + INSTANCE_SUFFIX

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
OWL_NS = "http://www.w3.org/2002/07/owl#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"


class Iri:
    """An absolute IRI split into a namespace prefix and a local name."""

    __slots__ = ("namespace", "local_name", "_rendered")

    def __init__(self, namespace: str, local_name: str):
        if not local_name or any(c.isspace() for c in local_name):
            raise ValueError(f"bad IRI local name: {local_name!r}")
        self.namespace = namespace
        self.local_name = local_name
        self._rendered = namespace + local_name

    @property
    def rendered(self) -> str:
        return self._rendered

    @classmethod
    def from_string(cls, text: str) -> "Iri":
        """Split an absolute IRI at the last '#', '/' or ':' separator."""
        for sep in "#/":
            pos = text.rfind(sep)
            if pos >= 0 and pos + 1 < len(text):
                return cls(text[: pos + 1], text[pos + 1 :])
        pos = text.rfind(":")
        if pos >= 0 and pos + 1 < len(text):
            return cls(text[: pos + 1], text[pos + 1 :])
        raise ValueError(f"not an absolute IRI: {text!r}")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Iri) and self._rendered == other._rendered

    def __hash__(self) -> int:
        return hash(self._rendered)

    def __lt__(self, other: "Iri") -> bool:
        return self._rendered < other._rendered

    def __repr__(self) -> str:
        return f"Iri({self._rendered})"


RDF_TYPE = Iri(RDF_NS, "type")
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
RDFS_SUBCLASS_OF = Iri(RDFS_NS, "subClassOf")
OWL_SAMEAS = Iri(OWL_NS, "sameAs")

# The four literal datatypes the store accepts.
DT_TEXT = Iri(XSD_NS, "string")
DT_INTEGER = Iri(XSD_NS, "integer")
DT_HEX = Iri(VOCAB_NS, "hexBytes")
DT_UNIX_SECONDS = Iri(VOCAB_NS, "unixSeconds")

DECLARED_DATATYPES = frozenset({DT_TEXT, DT_INTEGER, DT_HEX, DT_UNIX_SECONDS})


@dataclass(frozen=True)
class Literal:
    """A typed literal value in its lexical form."""

    lexical: str
    datatype: Iri = DT_TEXT

    def __post_init__(self):
        if self.datatype not in DECLARED_DATATYPES:
            raise ValueError(f"undeclared literal datatype: {self.datatype.rendered}")


Term = Union[Iri, Literal]


def text(value: str) -> Literal:
    return Literal(value, DT_TEXT)


def integer(value: int) -> Literal:
    return Literal(str(int(value)), DT_INTEGER)


def hex_bytes(value: str) -> Literal:
    """Lowercase 0x-prefixed hex literal (addresses, hashes)."""
    v = value.lower()
    if not v.startswith("0x") or len(v) % 2 != 0 or any(c not in "0123456789abcdef" for c in v[2:]):
        raise ValueError(f"not 0x-prefixed even-length hex: {value!r}")
    return Literal(v, DT_HEX)


def unix_seconds(value: int) -> Literal:
    return Literal(str(int(value)), DT_UNIX_SECONDS)


@dataclass(frozen=True)
class Triple:
    subject: Iri
    predicate: Iri
    object: Term

    def sort_key(self) -> tuple:
        obj = self.object
        if isinstance(obj, Iri):
            okey = (0, obj.rendered, "")
        else:
            okey = (1, obj.lexical, obj.datatype.rendered)
        return (self.subject.rendered, self.predicate.rendered, okey)
