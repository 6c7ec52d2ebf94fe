"""Graph validation: the behavior conditionals and lifecycle invariants,
re-checked as integrity rules over a materialized (possibly re-loaded) graph.

A clean corpus produces an empty report. Checks never mutate the graph.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import behavior, tokens
from .ontology import Iri, hex_bytes
from .ontology import vocab as V
from .ontology.graph import Graph


@dataclass(frozen=True)
class Violation:
    rule: str
    entity: str
    message: str

    def line(self) -> str:
        return f"[{self.rule}] {self.entity}: {self.message}"


def _check_ownership_uniqueness(graph: Graph) -> list[Violation]:
    out = []
    for token in tokens.all_tokens(graph):
        features = [
            f
            for f in graph.objects(token, V.HAS_ETHEREUM_TOKEN_ENDURANT_FEATURE)
            if isinstance(f, Iri)
        ]
        if not features:
            continue  # non-721 token stubs carry no lifecycle
        active = [f for f in features if not tokens.is_deprecated(graph, f)]
        burned = tokens.is_burned(graph, token)
        if burned and active:
            out.append(
                Violation(
                    "ownership-uniqueness",
                    token.rendered,
                    f"burned token still has {len(active)} active owner feature(s)",
                )
            )
        if not burned and len(active) != 1:
            out.append(
                Violation(
                    "ownership-uniqueness",
                    token.rendered,
                    f"live token has {len(active)} active owner features, expected 1",
                )
            )
    return out


def _check_feature_chains(graph: Graph) -> list[Violation]:
    out = []
    for token in tokens.all_tokens(graph):
        features = graph.objects(token, V.HAS_ETHEREUM_TOKEN_ENDURANT_FEATURE)
        if not features:
            continue
        try:
            chain = tokens.feature_chain(graph, token)
        except ValueError as exc:
            out.append(Violation("chain-integrity", token.rendered, str(exc)))
            continue
        if len(chain) != len(features):
            out.append(
                Violation(
                    "chain-integrity",
                    token.rendered,
                    f"chain walk reaches {len(chain)} of {len(features)} features",
                )
            )
        burned = tokens.is_burned(graph, token)
        for i, feature in enumerate(chain):
            is_last = i == len(chain) - 1
            deprecated = tokens.is_deprecated(graph, feature)
            should_be = (not is_last) or burned
            if deprecated != should_be:
                out.append(
                    Violation(
                        "chain-integrity",
                        feature.rendered,
                        "deprecated flag inconsistent with chain position",
                    )
                )
            if tokens.feature_owner(graph, feature) is None:
                out.append(
                    Violation("chain-integrity", feature.rendered, "feature names no wallet")
                )
    return out


def _check_transfer_witnesses(graph: Graph) -> list[Violation]:
    """Every ownership change must be witnessed by a transfer activity whose
    roles agree with the modification's source and result features."""
    out = []
    for modification in graph.instances_of(V.ETHEREUM_TOKEN_FEATURE_MODIFICATION_ACTIVITY):
        sources = graph.objects(modification, V.HAS_FEATURE_MODIFICATION_SOURCE)
        results = graph.objects(modification, V.HAS_FEATURE_MODIFICATION_RESULT)
        if len(sources) != 1 or len(results) != 1:
            out.append(
                Violation(
                    "transfer-witness",
                    modification.rendered,
                    "modification must have exactly one source and one result",
                )
            )
            continue
        source, result = sources[0], results[0]
        if not isinstance(source, Iri) or not isinstance(result, Iri):
            continue
        if graph.same_entity(source, result):
            out.append(
                Violation("transfer-witness", modification.rendered, "source equals result")
            )
            continue
        token_subjects = graph.subjects(V.HAS_ETHEREUM_TOKEN_ENDURANT_FEATURE, result)
        if not token_subjects:
            out.append(
                Violation(
                    "transfer-witness", modification.rendered, "result feature has no token"
                )
            )
            continue
        token = token_subjects[0]
        old_owner = tokens.feature_owner(graph, source)
        new_owner = tokens.feature_owner(graph, result)
        witnessed = False
        for activity in graph.subjects(V.HAS_TRANSFER_OBJECT, token):
            source_ok = any(
                isinstance(s, Iri) and tokens.account_address(graph, s) == old_owner
                for s in graph.objects(activity, V.HAS_TRANSFER_SOURCE)
            )
            destination_ok = any(
                isinstance(d, Iri) and tokens.account_address(graph, d) == new_owner
                for d in graph.objects(activity, V.HAS_TRANSFER_DESTINATION)
            )
            if source_ok and destination_ok:
                witnessed = True
                break
        if not witnessed:
            out.append(
                Violation(
                    "transfer-witness",
                    modification.rendered,
                    f"no transfer activity moves {token.rendered} "
                    f"from {old_owner} to {new_owner}",
                )
            )
    return out


def _check_delegations(graph: Graph) -> list[Violation]:
    out = []
    for delegation in graph.instances_of(V.DELEGATION_ACTIVITY):
        subjects = graph.objects(delegation, V.HAS_DELEGATION_SUBJECT)
        if len(subjects) != 1:
            out.append(
                Violation(
                    "delegation-shape",
                    delegation.rendered,
                    f"{len(subjects)} delegation subjects, expected 1",
                )
            )
        properties = set(graph.objects(delegation, V.HAS_DELEGATION_PROPERTY))
        if not {V.BURN, V.TRANSFER} <= properties:
            out.append(
                Violation(
                    "delegation-shape",
                    delegation.rendered,
                    "delegation must grant both burn and transfer",
                )
            )
        has_object = bool(graph.objects(delegation, V.HAS_DELEGATION_OBJECT))
        has_any = graph.has(delegation, V.HAS_SPECIFICITY, V.ANY)
        if has_object == has_any:
            out.append(
                Violation(
                    "delegation-shape",
                    delegation.rendered,
                    "delegation needs a token object or the any specificity, not both/neither",
                )
            )
    return out


def _check_owner_conditional(graph: Graph, template: behavior.BehaviorTemplate) -> list[Violation]:
    """The ownership-retrieval conditional must hold for each live token's
    recorded owner."""
    out = []
    conditional = template.conditional("owner_of")
    for token in tokens.all_tokens(graph):
        if tokens.is_burned(graph, token):
            continue
        try:
            owner = tokens.current_owner(graph, token)
        except ValueError:
            continue  # duplicate active features, reported by ownership-uniqueness
        if owner is None:
            continue  # reported by ownership-uniqueness
        accounts = graph.subjects(V.HAS_ADDRESS, hex_bytes(owner))
        if not accounts:
            out.append(
                Violation(
                    "owner-conditional",
                    token.rendered,
                    f"owner {owner} has no account individual",
                )
            )
            continue
        bindings = {("input", 0): token, ("output", 0): accounts[0]}
        holds, _ = behavior.evaluate_conditional(conditional, bindings, graph)
        if not holds:
            out.append(
                Violation(
                    "owner-conditional",
                    token.rendered,
                    f"conditional rejects recorded owner {owner}",
                )
            )
    return out


def run_validation(graph: Graph) -> list[Violation]:
    """All conditionals and lifecycle invariants; empty list means clean."""
    template = behavior.build_erc721_template()
    violations: list[Violation] = []
    violations.extend(_check_ownership_uniqueness(graph))
    violations.extend(_check_feature_chains(graph))
    violations.extend(_check_transfer_witnesses(graph))
    violations.extend(_check_delegations(graph))
    violations.extend(_check_owner_conditional(graph, template))
    return violations
