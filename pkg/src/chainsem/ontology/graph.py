"""In-memory triple store with sameAs-aware entity identity.

Set semantics throughout: re-adding a triple is a no-op. The store is
single-writer / many-reader; nothing here locks, callers funnel mutation
through one role. Lookups treat two IRIs linked by sameAs as one entity but
the asserted triples keep their original spelling, so serialization is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from ..errors import UnknownVocabularyTerm
from . import vocab as V
from .terms import (
    DEFAULT_INSTANCE_NS,
    OWL_SAMEAS,
    RDF_TYPE,
    VOCAB_NS,
    Iri,
    Term,
    Triple,
)


@dataclass(frozen=True)
class Namespaces:
    vocab: str = VOCAB_NS
    instance: str = DEFAULT_INSTANCE_NS


class Graph:
    def __init__(self, vocabulary: V.Vocabulary | None = None,
                 namespaces: Namespaces | None = None):
        self.vocabulary = vocabulary or V.Vocabulary()
        self.namespaces = namespaces or Namespaces()
        self._triples: set[Triple] = set()
        self._sameas: set[tuple[Iri, Iri]] = set()
        # union-find over rendered IRIs for the sameAs closure
        self._uf_parent: dict[str, str] = {}
        # indexes keyed by canonical representative
        self._by_subject: dict[str, set[Triple]] = {}
        self._by_pred: dict[str, set[Triple]] = {}
        self._by_pred_obj: dict[tuple[str, object], set[Triple]] = {}
        self._types: dict[str, set[str]] = {}   # canonical entity -> rendered class IRIs
        self._type_members: dict[str, set[Iri]] = {}  # rendered class -> subject IRIs

    # -- identity ------------------------------------------------------------

    def _find(self, key: str) -> str:
        parent = self._uf_parent.get(key)
        if parent is None or parent == key:
            return key
        root = self._find(parent)
        self._uf_parent[key] = root
        return root

    def _canon(self, iri: Iri) -> str:
        return self._find(iri.rendered)

    def _obj_key(self, term: Term) -> object:
        if isinstance(term, Iri):
            return self._canon(term)
        return (term.lexical, term.datatype.rendered)

    def add_sameas(self, a: Iri, b: Iri) -> None:
        if (a, b) in self._sameas:
            return
        self._sameas.add((a, b))
        ra, rb = self._find(a.rendered), self._find(b.rendered)
        if ra != rb:
            self._uf_parent[rb] = ra
            self._reindex()

    def same_entity(self, a: Iri, b: Iri) -> bool:
        return a == b or self._canon(a) == self._canon(b)

    # -- mutation -----------------------------------------------------------------

    def _check_predicate(self, predicate: Iri) -> None:
        if predicate in (RDF_TYPE, OWL_SAMEAS):
            return
        if not self.vocabulary.is_property(predicate):
            raise UnknownVocabularyTerm(f"unknown predicate: {predicate.rendered}")

    def add(self, subject: Iri, predicate: Iri, obj: Term) -> bool:
        """Insert one triple; returns False when it was already present."""
        if predicate == OWL_SAMEAS:
            if not isinstance(obj, Iri):
                raise UnknownVocabularyTerm("sameAs object must be an IRI")
            self.add_sameas(subject, obj)
            return True
        self._check_predicate(predicate)
        triple = Triple(subject, predicate, obj)
        if triple in self._triples:
            return False
        self._triples.add(triple)
        self._index(triple)
        return True

    def add_all(self, triples: Iterable[Triple]) -> list[Triple]:
        added = []
        for t in triples:
            if self.add(t.subject, t.predicate, t.object):
                added.append(t)
        return added

    def assert_instance(self, entity: Iri, ontology_class: Iri) -> bool:
        if not self.vocabulary.is_class(ontology_class):
            raise UnknownVocabularyTerm(f"unknown class: {ontology_class.rendered}")
        return self.add(entity, RDF_TYPE, ontology_class)

    def _index(self, triple: Triple) -> None:
        subject_key = self._canon(triple.subject)
        self._by_subject.setdefault(subject_key, set()).add(triple)
        self._by_pred.setdefault(triple.predicate.rendered, set()).add(triple)
        po = (triple.predicate.rendered, self._obj_key(triple.object))
        self._by_pred_obj.setdefault(po, set()).add(triple)
        if triple.predicate == RDF_TYPE and isinstance(triple.object, Iri):
            self._types.setdefault(subject_key, set()).add(triple.object.rendered)
            self._type_members.setdefault(triple.object.rendered, set()).add(triple.subject)

    def _reindex(self) -> None:
        self._by_subject.clear()
        self._by_pred.clear()
        self._by_pred_obj.clear()
        self._types.clear()
        self._type_members.clear()
        for t in self._triples:
            self._index(t)

    # -- reads ---------------------------------------------------------------------

    @property
    def triples(self) -> frozenset[Triple]:
        return frozenset(self._triples)

    @property
    def sameas_pairs(self) -> frozenset[tuple[Iri, Iri]]:
        return frozenset(self._sameas)

    def __len__(self) -> int:
        return len(self._triples)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Graph)
            and self._triples == other._triples
            and self._sameas == other._sameas
        )

    def has(self, subject: Iri, predicate: Iri, obj: Term) -> bool:
        po = self._by_pred_obj.get((predicate.rendered, self._obj_key(obj)), ())
        want = self._canon(subject)
        return any(self._canon(t.subject) == want for t in po)

    def objects(self, subject: Iri, predicate: Iri) -> list[Term]:
        out = [
            t.object
            for t in self._by_subject.get(self._canon(subject), ())
            if t.predicate == predicate
        ]
        return sorted(out, key=_term_key)

    def subjects(self, predicate: Iri, obj: Term) -> list[Iri]:
        hits = self._by_pred_obj.get((predicate.rendered, self._obj_key(obj)), ())
        return sorted({t.subject for t in hits})

    def triples_about(self, subject: Iri) -> list[Triple]:
        return sorted(self._by_subject.get(self._canon(subject), ()), key=Triple.sort_key)

    def with_predicate(self, predicate: Iri) -> list[Triple]:
        return sorted(self._by_pred.get(predicate.rendered, ()), key=Triple.sort_key)

    def is_instance(self, entity: Iri, ontology_class: Iri) -> bool:
        if not self.vocabulary.is_class(ontology_class):
            raise UnknownVocabularyTerm(f"unknown class: {ontology_class.rendered}")
        asserted = self._types.get(self._canon(entity), ())
        for rendered in asserted:
            asserted_cls = Iri.from_string(rendered)
            if self.vocabulary.is_class(asserted_cls) and self.vocabulary.is_subclass(
                asserted_cls, ontology_class
            ):
                return True
        return False

    def instances_of(self, ontology_class: Iri) -> list[Iri]:
        """All entities whose asserted type is the class or a subclass of it.

        sameAs aliases collapse to one representative (the lexically smallest
        spelling among the asserted subjects).
        """
        members: dict[str, Iri] = {}
        for cls in self.vocabulary.descendants(ontology_class):
            for subject in self._type_members.get(cls.rendered, ()):
                key = self._canon(subject)
                if key not in members or subject < members[key]:
                    members[key] = subject
        return sorted(members.values())

    def asserted_types(self, entity: Iri) -> list[Iri]:
        out = {
            t.object
            for t in self._by_subject.get(self._canon(entity), ())
            if t.predicate == RDF_TYPE and isinstance(t.object, Iri)
        }
        return sorted(out)

    def __iter__(self) -> Iterator[Triple]:
        return iter(sorted(self._triples, key=Triple.sort_key))


def _term_key(term: Term) -> tuple:
    if isinstance(term, Iri):
        return (0, term.rendered, "")
    return (1, term.lexical, term.datatype.rendered)
