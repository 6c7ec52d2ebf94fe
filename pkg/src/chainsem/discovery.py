"""Discovery: compile user criteria into graph query plans, run them natively,
and answer provenance questions (token history, current owner).

Plans also render to SPARQL SELECT text for external tooling; the native
executor is the one the test suite exercises. Class constraints expand
through the subclass hierarchy at compile time, and results are sorted by
the projected IRIs, so identical inputs always produce identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Union

from . import tokens
from .errors import CriteriaError, EmptyCriteria, NotFound, TokenBurned
from .ontology import Iri, Literal, Term
from .ontology import vocab as V
from .ontology.graph import Graph, Namespaces
from .ontology.serialize import _turtle_prefixes, _ttl_term
from .ontology.terms import DT_HEX, RDF_TYPE
from .ontology.vocab import Vocabulary


@dataclass(frozen=True)
class Var:
    name: str


PatternTerm = Union[Var, Iri, Literal]


@dataclass(frozen=True)
class Pattern:
    subject: PatternTerm
    predicate: Iri
    object: PatternTerm


@dataclass(frozen=True)
class TypeIn:
    """Variable is an instance of one of the classes (already expanded)."""

    var: Var
    classes: tuple[Iri, ...]


@dataclass(frozen=True)
class NotType:
    var: Var
    cls: Iri


@dataclass(frozen=True)
class TypeInValues:
    """Variable must be one of the listed IRIs (a VALUES clause)."""

    var: Var
    values: tuple[Iri, ...]


Clause = Union[Pattern, TypeIn, NotType, TypeInValues]


@dataclass(frozen=True)
class QueryPlan:
    clauses: tuple[Clause, ...]
    projection: tuple[Var, ...]

    def to_json(self) -> str:
        def term(t):
            if isinstance(t, Var):
                return {"var": t.name}
            if isinstance(t, Iri):
                return {"iri": t.rendered}
            return {"literal": t.lexical, "datatype": t.datatype.rendered}

        clauses = []
        for c in self.clauses:
            if isinstance(c, Pattern):
                clauses.append(
                    {"pattern": [term(c.subject), {"iri": c.predicate.rendered}, term(c.object)]}
                )
            elif isinstance(c, TypeIn):
                clauses.append(
                    {"type_in": {"var": c.var.name, "classes": [x.rendered for x in c.classes]}}
                )
            elif isinstance(c, TypeInValues):
                clauses.append(
                    {"values": {"var": c.var.name, "iris": [x.rendered for x in c.values]}}
                )
            else:
                clauses.append({"not_type": {"var": c.var.name, "class": c.cls.rendered}})
        return json.dumps(
            {"clauses": clauses, "projection": [v.name for v in self.projection]}, indent=2
        )

    @classmethod
    def from_json(cls, text: str) -> "QueryPlan":
        def term(d) -> PatternTerm:
            if "var" in d:
                return Var(d["var"])
            if "iri" in d:
                return Iri.from_string(d["iri"])
            return Literal(d["literal"], Iri.from_string(d["datatype"]))

        raw = json.loads(text)
        clauses: list[Clause] = []
        for c in raw["clauses"]:
            if "pattern" in c:
                s, p, o = c["pattern"]
                predicate = term(p)
                if not isinstance(predicate, Iri):
                    raise CriteriaError("pattern predicate must be an IRI")
                clauses.append(Pattern(term(s), predicate, term(o)))
            elif "type_in" in c:
                clauses.append(
                    TypeIn(
                        Var(c["type_in"]["var"]),
                        tuple(Iri.from_string(x) for x in c["type_in"]["classes"]),
                    )
                )
            elif "values" in c:
                clauses.append(
                    TypeInValues(
                        Var(c["values"]["var"]),
                        tuple(Iri.from_string(x) for x in c["values"]["iris"]),
                    )
                )
            elif "not_type" in c:
                clauses.append(
                    NotType(Var(c["not_type"]["var"]), Iri.from_string(c["not_type"]["class"]))
                )
            else:
                raise CriteriaError(f"unknown clause: {c}")
        return cls(tuple(clauses), tuple(Var(v) for v in raw["projection"]))


@dataclass
class Criteria:
    agent_category: Iri | None = None
    action: Iri | None = None
    token_class: Iri | None = None
    owner: str | None = None
    reference_constraints: list[tuple[Iri, Term]] = field(default_factory=list)


def _expand(vocabulary: Vocabulary, cls: Iri) -> tuple[Iri, ...]:
    return tuple(sorted(vocabulary.descendants(cls)))


def compile_criteria(criteria: Criteria, vocabulary: Vocabulary | None = None) -> QueryPlan:
    """Deterministic plan for the criteria; raises on unusable combinations."""
    vocabulary = vocabulary or Vocabulary()
    fields_set = any(
        (
            criteria.agent_category,
            criteria.action,
            criteria.token_class,
            criteria.owner,
            criteria.reference_constraints,
        )
    )
    if not fields_set:
        raise EmptyCriteria("no criteria fields set")

    clauses: list[Clause] = []
    if criteria.owner is not None:
        if criteria.agent_category or criteria.action:
            raise CriteriaError("owner criteria select tokens, not agents")
        token = Var("token")
        feature = Var("feature")
        clauses.append(Pattern(token, V.HAS_ETHEREUM_TOKEN_ENDURANT_FEATURE, feature))
        clauses.append(
            Pattern(feature, V.IS_IN_THE_WALLET_OF, Literal(criteria.owner.lower(), DT_HEX))
        )
        clauses.append(NotType(feature, V.DEPRECATED_ETHEREUM_TOKEN_ENDURANT_FEATURE))
        if criteria.token_class is not None:
            clauses.append(TypeIn(token, _expand(vocabulary, criteria.token_class)))
        for prop, value in criteria.reference_constraints:
            clauses.append(Pattern(token, prop, value))
        return QueryPlan(tuple(clauses), (token,))

    if criteria.agent_category is not None or criteria.action is not None:
        agent = Var("agent")
        if criteria.agent_category is not None:
            clauses.append(TypeIn(agent, _expand(vocabulary, criteria.agent_category)))
        if criteria.action is not None:
            behavior = Var("behavior")
            template = Var("template")
            goal = Var("goal")
            task = Var("task")
            operator = Var("operator")
            clauses.extend(
                (
                    Pattern(agent, V.HAS_BEHAVIOR, behavior),
                    Pattern(behavior, V.IMPLEMENTS_TEMPLATE, template),
                    Pattern(template, V.HAS_GOAL, goal),
                    Pattern(goal, V.HAS_TASK, task),
                    Pattern(task, V.HAS_TASK_OPERATOR, operator),
                    Pattern(operator, V.REFERS_EXACTLY_TO, criteria.action),
                )
            )
            if criteria.token_class is not None:
                parameter = Var("parameter")
                ref_template = Var("ref_template")
                required = Var("required_class")
                slot = (
                    V.HAS_TASK_OUTPUT if criteria.action == V.MINT else V.HAS_TASK_INPUT
                )
                clauses.extend(
                    (
                        Pattern(task, slot, parameter),
                        Pattern(parameter, V.REFERS_AS_NEW_TO, ref_template),
                        Pattern(ref_template, V.REQUIRES_INSTANCE_OF, required),
                    )
                )
                expanded = _expand(vocabulary, criteria.token_class)
                clauses.append(TypeInValues(required, expanded))
        for prop, value in criteria.reference_constraints:
            clauses.append(Pattern(agent, prop, value))
        return QueryPlan(tuple(clauses), (agent,))

    # token class (and/or bare property constraints) alone: select tokens
    token = Var("token")
    if criteria.token_class is not None:
        clauses.append(TypeIn(token, _expand(vocabulary, criteria.token_class)))
    for prop, value in criteria.reference_constraints:
        clauses.append(Pattern(token, prop, value))
    return QueryPlan(tuple(clauses), (token,))


# --- native execution -------------------------------------------------------------------


def _match_term(pattern_term: PatternTerm, value: Term, bindings: dict[str, Term],
                graph: Graph) -> dict[str, Term] | None:
    if isinstance(pattern_term, Var):
        bound = bindings.get(pattern_term.name)
        if bound is None:
            out = dict(bindings)
            out[pattern_term.name] = value
            return out
        if isinstance(bound, Iri) and isinstance(value, Iri):
            return bindings if graph.same_entity(bound, value) else None
        return bindings if bound == value else None
    if isinstance(pattern_term, Iri) and isinstance(value, Iri):
        return bindings if graph.same_entity(pattern_term, value) else None
    return bindings if pattern_term == value else None


def _clause_solutions(clause: Clause, bindings: dict[str, Term],
                      graph: Graph) -> list[dict[str, Term]]:
    if isinstance(clause, Pattern):
        solutions = []
        for triple in graph.with_predicate(clause.predicate):
            after_subject = _match_term(clause.subject, triple.subject, bindings, graph)
            if after_subject is None:
                continue
            after_object = _match_term(clause.object, triple.object, after_subject, graph)
            if after_object is not None:
                solutions.append(after_object)
        return solutions
    if isinstance(clause, TypeIn):
        bound = bindings.get(clause.var.name)
        if bound is not None:
            ok = isinstance(bound, Iri) and any(
                graph.is_instance(bound, cls) for cls in clause.classes
            )
            return [bindings] if ok else []
        solutions = []
        seen: set[str] = set()
        for cls in clause.classes:
            for entity in graph.instances_of(cls):
                if entity.rendered in seen:
                    continue
                seen.add(entity.rendered)
                out = dict(bindings)
                out[clause.var.name] = entity
                solutions.append(out)
        return solutions
    if isinstance(clause, TypeInValues):
        bound = bindings.get(clause.var.name)
        if bound is not None:
            ok = isinstance(bound, Iri) and any(
                graph.same_entity(bound, v) for v in clause.values
            )
            return [bindings] if ok else []
        out = []
        for v in clause.values:
            b = dict(bindings)
            b[clause.var.name] = v
            out.append(b)
        return out
    if isinstance(clause, NotType):
        bound = bindings.get(clause.var.name)
        if bound is None:
            raise CriteriaError(f"negation over unbound variable ?{clause.var.name}")
        ok = not (isinstance(bound, Iri) and graph.is_instance(bound, clause.cls))
        return [bindings] if ok else []
    raise CriteriaError(f"unknown clause type: {clause!r}")


def execute(plan: QueryPlan, graph: Graph) -> list[tuple[Term, ...]]:
    """Sound and complete over the closed graph; rows sorted and de-duplicated."""
    for var in plan.projection:
        if not any(
            (isinstance(c, Pattern) and (c.subject == var or c.object == var))
            or (isinstance(c, (TypeIn, TypeInValues, NotType)) and c.var == var)
            for c in plan.clauses
        ):
            raise CriteriaError(f"projected variable ?{var.name} appears in no clause")
    solutions: list[dict[str, Term]] = [{}]
    for clause in plan.clauses:
        next_solutions: list[dict[str, Term]] = []
        for bindings in solutions:
            next_solutions.extend(_clause_solutions(clause, bindings, graph))
        solutions = next_solutions
        if not solutions:
            break
    rows = {
        tuple(bindings[v.name] for v in plan.projection) for bindings in solutions
    }
    return sorted(rows, key=lambda row: tuple(_row_key(t) for t in row))


def _row_key(term: Term) -> tuple:
    if isinstance(term, Iri):
        return (0, term.rendered, "")
    return (1, term.lexical, term.datatype.rendered)


# --- SPARQL rendering ---------------------------------------------------------------------


def render_sparql(plan: QueryPlan, namespaces: Namespaces | None = None) -> str:
    namespaces = namespaces or Namespaces()
    prefixes = _turtle_prefixes(namespaces)
    by_ns = {ns: pfx for pfx, ns in prefixes.items()}

    def term_text(t: PatternTerm) -> str:
        if isinstance(t, Var):
            return f"?{t.name}"
        return _ttl_term(t, by_ns)

    lines = [f"PREFIX {pfx}: <{ns}>" for pfx, ns in sorted(prefixes.items())]
    lines.append(f"SELECT {' '.join(f'?{v.name}' for v in plan.projection)}")
    lines.append("WHERE {")
    for clause in plan.clauses:
        if isinstance(clause, Pattern):
            subject = term_text(clause.subject)
            predicate = "a" if clause.predicate == RDF_TYPE else _ttl_term(clause.predicate, by_ns)
            lines.append(f"  {subject} {predicate} {term_text(clause.object)} .")
        elif isinstance(clause, TypeIn):
            type_var = f"?{clause.var.name}__class"
            values = " ".join(_ttl_term(c, by_ns) for c in clause.classes)
            lines.append(f"  VALUES {type_var} {{ {values} }}")
            lines.append(f"  ?{clause.var.name} a {type_var} .")
        elif isinstance(clause, TypeInValues):
            values = " ".join(_ttl_term(v, by_ns) for v in clause.values)
            lines.append(f"  VALUES ?{clause.var.name} {{ {values} }}")
        elif isinstance(clause, NotType):
            cls = _ttl_term(clause.cls, by_ns)
            lines.append(f"  FILTER NOT EXISTS {{ ?{clause.var.name} a {cls} }}")
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- provenance -----------------------------------------------------------------------------


@dataclass(frozen=True)
class ProvenanceEntry:
    owner: str
    tx_hash: str | None
    activity: Iri | None


@dataclass(frozen=True)
class TokenHistory:
    token: Iri
    entries: tuple[ProvenanceEntry, ...]
    burned: bool


def _tx_hash_of(graph: Graph, subject: Iri) -> tuple[Iri | None, str | None]:
    for tx in graph.objects(subject, V.CAUSED_BY_TRANSACTION):
        if isinstance(tx, Iri):
            for h in graph.objects(tx, V.HAS_TRANSACTION_HASH):
                if isinstance(h, Literal):
                    return tx, h.lexical
            return tx, None
    return None, None


def token_history(graph: Graph, contract: str, token_id: int) -> TokenHistory:
    """Ownership provenance from mint to the present (or the burn)."""
    token = tokens.find_token(graph, contract.lower(), token_id)
    chain = tokens.feature_chain(graph, token)
    entries: list[ProvenanceEntry] = []
    for position, feature in enumerate(chain):
        owner = tokens.feature_owner(graph, feature)
        if owner is None:
            raise NotFound(f"feature {feature.rendered} has no wallet")
        if position == 0:
            activity, tx_hash = _mint_plan(graph, token)
        else:
            activity, tx_hash = _transfer_witness(graph, token, feature)
        entries.append(ProvenanceEntry(owner, tx_hash, activity))
    return TokenHistory(token, tuple(entries), tokens.is_burned(graph, token))


def _mint_plan(graph: Graph, token: Iri) -> tuple[Iri | None, str | None]:
    for plan in graph.subjects(V.HAS_OUTPUT_ENTITY, token):
        if graph.has(plan, V.REFERS_EXACTLY_TO, V.MINT):
            _, tx_hash = _tx_hash_of(graph, plan)
            return plan, tx_hash
    return None, None


def _transfer_witness(graph: Graph, token: Iri, feature: Iri) -> tuple[Iri | None, str | None]:
    modifications = graph.subjects(V.HAS_FEATURE_MODIFICATION_RESULT, feature)
    if not modifications:
        return None, None
    modification = modifications[0]
    tx_iri, tx_hash = _tx_hash_of(graph, modification)
    log_index = graph.objects(modification, V.AT_LOG_INDEX)
    for activity in graph.subjects(V.HAS_TRANSFER_OBJECT, token):
        activity_tx, _ = _tx_hash_of(graph, activity)
        if (
            activity_tx is not None
            and tx_iri is not None
            and graph.same_entity(activity_tx, tx_iri)
            and graph.objects(activity, V.AT_LOG_INDEX) == log_index
        ):
            return activity, tx_hash
    return modification, tx_hash


def owner_of(graph: Graph, contract: str, token_id: int) -> str:
    """Wallet of the unique non-deprecated owner feature."""
    token = tokens.find_token(graph, contract.lower(), token_id)
    if tokens.is_burned(graph, token):
        raise TokenBurned(f"token {token_id} of {contract} is burned")
    owner = tokens.current_owner(graph, token)
    if owner is None:
        raise NotFound(f"token {token_id} of {contract} has no active owner feature")
    return owner


def owner_map(graph: Graph) -> dict[tuple[str, int], str]:
    """Final owner of every live token, keyed by (contract, token id)."""
    out: dict[tuple[str, int], str] = {}
    for token in tokens.all_tokens(graph):
        if tokens.is_burned(graph, token):
            continue
        coordinates = tokens.token_coordinates(graph, token)
        owner = tokens.current_owner(graph, token)
        if owner is not None:
            out[(coordinates.contract, coordinates.token_id)] = owner
    return out
