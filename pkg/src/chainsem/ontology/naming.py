"""Deterministic IRI minting for chain-derived individuals.

Every individual name is a pure function of its kind and components, so two
runs over the same records always produce the same graph. Components are
validated against per-kind shapes; that keeps distinct inputs from colliding
once joined with underscores.
"""

from __future__ import annotations

import re
from collections.abc import Sequence

from ..errors import InvalidName
from .terms import DEFAULT_INSTANCE_NS, Iri

_NUMBER = re.compile(r"^\d+$")
_HEX = re.compile(r"^0x[0-9a-f]+$")
_LABEL = re.compile(r"^[A-Za-z][A-Za-z0-9_-]*$")
_TOKEN_LOCAL = re.compile(r"^token_0x[0-9a-f]+_\d+$")

# kind -> (format pattern, component validators)
_KINDS: dict[str, tuple[str, tuple[re.Pattern, ...]]] = {
    "block": ("block_node_{}", (_NUMBER,)),
    "transaction": ("block_node_{}_tran_{}", (_NUMBER, _NUMBER)),
    "token": ("token_{}_{}", (_HEX, _NUMBER)),
    "feature": ("feature_{}_{}", (_TOKEN_LOCAL, _NUMBER)),
    "activity": ("activity_{}_{}", (_HEX, _NUMBER)),
    "modification": ("modification_{}_{}", (_HEX, _NUMBER)),
    "event_plan": ("plan_{}_{}", (_HEX, _NUMBER)),
    "interaction_plan": ("plan_{}", (_HEX,)),
    "interaction": ("interaction_{}", (_HEX,)),
    "creation": ("creation_{}", (_HEX,)),
    "creation_labeled": ("{}_SmartContractCreation", (_LABEL,)),
    "agent": ("agent_{}", (_HEX,)),
    "agent_labeled": ("{}_smart_contract_agent", (_LABEL,)),
    "contract_account": ("account_{}", (_HEX,)),
    "contract_account_labeled": ("{}_smart_contract_account", (_LABEL,)),
    "wallet": ("wallet_{}", (_HEX,)),
    "node": ("node_{}", (_HEX,)),
    "behavior": ("behavior_{}", (_LABEL,)),
    # bare label: miner names and the network individual come straight from
    # fixture metadata (e.g. SparkPool, ethereum_mainnet)
    "named": ("{}", (_LABEL,)),
}


def make_iri(kind: str, components: Sequence[str], namespace: str = DEFAULT_INSTANCE_NS) -> Iri:
    """Mint the individual IRI for `kind` from its ordered components."""
    if kind not in _KINDS:
        raise InvalidName(f"unknown individual kind: {kind!r}")
    pattern, validators = _KINDS[kind]
    if not components:
        raise InvalidName(f"{kind}: empty component list")
    if len(components) != len(validators):
        raise InvalidName(f"{kind}: expected {len(validators)} components, got {len(components)}")
    for i, (component, validator) in enumerate(zip(components, validators)):
        if not component:
            raise InvalidName(f"{kind}: component {i} is empty")
        if not validator.match(component):
            raise InvalidName(f"{kind}: component {i} has invalid shape: {component!r}")
    return Iri(namespace, pattern.format(*components))
