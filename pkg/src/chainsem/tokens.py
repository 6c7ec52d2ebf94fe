"""Read-side helpers over the token lifecycle subgraph.

All functions work from a graph alone (no mapper state), so they behave the
same on a freshly mapped store and on one re-loaded from disk.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotFound
from .ontology import Iri, Literal, hex_bytes, integer
from .ontology import vocab as V
from .ontology.graph import Graph


def find_token(graph: Graph, contract: str, token_id: int) -> Iri:
    """Locate the token individual by its contract address and id."""
    by_contract = set(graph.subjects(V.HAS_TOKEN_CONTRACT, hex_bytes(contract)))
    by_id = set(graph.subjects(V.HAS_TOKEN_ID, integer(token_id)))
    hits = sorted(by_contract & by_id)
    if not hits:
        raise NotFound(f"token {token_id} of {contract} is not in the graph")
    return hits[0]


def all_tokens(graph: Graph) -> list[Iri]:
    return graph.instances_of(V.ETHEREUM_TOKEN)


def is_burned(graph: Graph, token: Iri) -> bool:
    return graph.is_instance(token, V.BURNED_ETHEREUM_TOKEN)


def feature_chain(graph: Graph, token: Iri) -> list[Iri]:
    """Features ordered from the first (mint) to the most recent one."""
    features = [
        f
        for f in graph.objects(token, V.HAS_ETHEREUM_TOKEN_ENDURANT_FEATURE)
        if isinstance(f, Iri)
    ]
    if not features:
        return []
    has_predecessor = {
        f for f in features if graph.subjects(V.IS_FEATURE_MODIFIED_IN, f)
    }
    heads = [f for f in features if f not in has_predecessor]
    if len(heads) != 1:
        raise ValueError(f"token {token.rendered}: feature chain has {len(heads)} heads")
    chain = [heads[0]]
    seen = {heads[0]}
    while True:
        successors = [
            o for o in graph.objects(chain[-1], V.IS_FEATURE_MODIFIED_IN) if isinstance(o, Iri)
        ]
        if not successors:
            return chain
        if len(successors) > 1 or successors[0] in seen:
            raise ValueError(f"token {token.rendered}: feature chain is not linear")
        chain.append(successors[0])
        seen.add(successors[0])


def feature_owner(graph: Graph, feature: Iri) -> str | None:
    for value in graph.objects(feature, V.IS_IN_THE_WALLET_OF):
        if isinstance(value, Literal):
            return value.lexical
    return None


def is_deprecated(graph: Graph, feature: Iri) -> bool:
    return graph.is_instance(feature, V.DEPRECATED_ETHEREUM_TOKEN_ENDURANT_FEATURE)


def active_owner_feature(graph: Graph, token: Iri) -> Iri | None:
    """The unique non-deprecated owner feature, or None for burned tokens."""
    active = [
        f
        for f in graph.objects(token, V.HAS_ETHEREUM_TOKEN_ENDURANT_FEATURE)
        if isinstance(f, Iri) and not is_deprecated(graph, f)
    ]
    if not active:
        return None
    if len(active) > 1:
        raise ValueError(f"token {token.rendered}: {len(active)} active owner features")
    return active[0]


def current_owner(graph: Graph, token: Iri) -> str | None:
    feature = active_owner_feature(graph, token)
    return feature_owner(graph, feature) if feature else None


def account_address(graph: Graph, account: Iri) -> str | None:
    for value in graph.objects(account, V.HAS_ADDRESS):
        if isinstance(value, Literal):
            return value.lexical
    return None


@dataclass(frozen=True)
class TokenCoordinates:
    contract: str
    token_id: int


def token_coordinates(graph: Graph, token: Iri) -> TokenCoordinates:
    contract = None
    token_id = None
    for value in graph.objects(token, V.HAS_TOKEN_CONTRACT):
        if isinstance(value, Literal):
            contract = value.lexical
    for value in graph.objects(token, V.HAS_TOKEN_ID):
        if isinstance(value, Literal):
            token_id = int(value.lexical)
    if contract is None or token_id is None:
        raise NotFound(f"{token.rendered} has no contract/id coordinates")
    return TokenCoordinates(contract, token_id)
