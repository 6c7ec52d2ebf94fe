"""Translate classified chain records and decoded token events into graph
assertions: blocks, transactions, creations, interactions, agents,
activities, and the token ownership lifecycle.

Mapping is strictly sequential in canonical stream order; the token lifecycle
is order-sensitive. Every minted IRI is a pure function of record data plus
per-token position, so re-running a stream produces the identical triple set.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import AlreadyMapped, DuplicateToken, TokenBurned, UnknownToken
from .ingest.classify import TxKind
from .ingest.events import (
    Approval,
    ApprovalForAll,
    Burn,
    Erc721Event,
    Mint,
    TokenTransfer,
)
from .ingest.records import Block, Receipt, Transaction, ZERO_ADDRESS
from .ontology import Iri, RDF_TYPE, Triple, hex_bytes, integer, make_iri, unix_seconds
from .ontology import vocab as V
from .ontology.graph import Graph


@dataclass
class EndurantFeature:
    feature_iri: Iri
    owner_wallet: str
    deprecated: bool = False
    modified_in: Iri | None = None


@dataclass
class TokenRecord:
    token_iri: Iri
    contract: str
    token_id: int
    feature_chain: list[EndurantFeature] = field(default_factory=list)
    burned: bool = False

    @property
    def active_feature(self) -> EndurantFeature:
        return self.feature_chain[-1]

    @property
    def owner(self) -> str:
        return self.active_feature.owner_wallet


@dataclass
class FeatureModificationActivity:
    activity_iri: Iri
    source: Iri
    result: Iri
    cause: tuple[str, int]  # (tx hash, log index)


ANY_SCOPE = V.ANY


@dataclass
class Delegation:
    iri: Iri
    operator: str
    owner: str
    scope: Iri  # a token individual, or the `any` individual
    active: bool = True


@dataclass
class AgentEvidence:
    saw_erc721: bool = False
    saw_erc20: bool = False
    ether_passthrough: bool = False


def decide_agent_category(evidence: AgentEvidence) -> list[Iri]:
    """Category class memberships implied by what a contract has been seen
    doing. Token-standard evidence wins over plain ether movement; with no
    evidence at all the agent is general purpose."""
    classes: list[Iri] = []
    if evidence.saw_erc721:
        classes.append(V.ETHEREUM_ERC721_SMART_CONTRACT_AGENT)
    if evidence.saw_erc20:
        classes.append(V.ETHEREUM_ERC20_SMART_CONTRACT_AGENT)
    if not classes and evidence.ether_passthrough:
        classes.append(V.ETHER_EXCHANGE_SMART_CONTRACT_AGENT)
    if not classes:
        classes.append(V.GENERAL_PURPOSE_BLOCKCHAIN_SMART_CONTRACT_AGENT)
    return classes


@dataclass
class MappingContext:
    graph: Graph
    network: str = "ethereum_mainnet"
    labels: dict[str, str] = field(default_factory=dict)

    network_iri: Iri = field(init=False)
    node_registry: dict[str, Iri] = field(default_factory=dict)
    account_registry: dict[str, Iri] = field(default_factory=dict)
    agent_registry: dict[str, Iri] = field(default_factory=dict)
    token_registry: dict[tuple[str, int], TokenRecord] = field(default_factory=dict)
    burned_registry: dict[tuple[str, int], TokenRecord] = field(default_factory=dict)
    delegations: list[Delegation] = field(default_factory=list)
    evidence: dict[str, AgentEvidence] = field(default_factory=dict)
    mapped_blocks: set[int] = field(default_factory=set)
    tx_iris: dict[str, Iri] = field(default_factory=dict)
    tx_kinds: dict[str, TxKind] = field(default_factory=dict)

    def __post_init__(self):
        self.network_iri = self.mint("named", [self.network])
        self.graph.assert_instance(self.network_iri, V.ETHEREUM_SYSTEM)

    def mint(self, kind: str, components: list[str]) -> Iri:
        return make_iri(kind, components, self.graph.namespaces.instance)

    def live_token(self, contract: str, token_id: int) -> TokenRecord | None:
        return self.token_registry.get((contract, token_id))


class Delta:
    """Collects the triples an operation actually added."""

    def __init__(self, graph: Graph):
        self.graph = graph
        self.added: list[Triple] = []

    def add(self, s: Iri, p: Iri, o) -> None:
        if self.graph.add(s, p, o):
            self.added.append(Triple(s, p, o))

    def instance(self, entity: Iri, cls: Iri) -> None:
        if self.graph.assert_instance(entity, cls):
            self.added.append(Triple(entity, RDF_TYPE, cls))


# --- account and agent plumbing ------------------------------------------------


def _contract_names(ctx: MappingContext, address: str) -> tuple[Iri, Iri]:
    label = ctx.labels.get(address)
    if label:
        agent = ctx.mint("agent_labeled", [label])
        account = ctx.mint("contract_account_labeled", [label])
    else:
        agent = ctx.mint("agent", [address])
        account = ctx.mint("contract_account", [address])
    return agent, account


def ensure_contract_agent(ctx: MappingContext, address: str, delta: Delta) -> Iri:
    """The agent individual for a contract, created as a stub on first sight."""
    if address in ctx.agent_registry:
        _sync_agent_classes(ctx, address, delta)
        return ctx.agent_registry[address]
    agent, account = _contract_names(ctx, address)
    ctx.agent_registry[address] = agent
    ctx.account_registry[address] = account
    delta.instance(account, V.ETHEREUM_SMART_CONTRACT_ACCOUNT)
    delta.add(account, V.HAS_ADDRESS, hex_bytes(address))
    for cls in decide_agent_category(ctx.evidence.setdefault(address, AgentEvidence())):
        delta.instance(agent, cls)
    return agent


def _sync_agent_classes(ctx: MappingContext, address: str, delta: Delta) -> None:
    # reclassification only ever adds memberships
    agent = ctx.agent_registry[address]
    for cls in decide_agent_category(ctx.evidence.setdefault(address, AgentEvidence())):
        delta.instance(agent, cls)


def note_evidence(ctx: MappingContext, address: str, kind: str, delta: Delta) -> None:
    ev = ctx.evidence.setdefault(address, AgentEvidence())
    if kind == "erc721":
        ev.saw_erc721 = True
    elif kind == "erc20":
        ev.saw_erc20 = True
    elif kind == "ether":
        ev.ether_passthrough = True
    else:
        raise ValueError(f"unknown evidence kind {kind!r}")
    if address in ctx.agent_registry:
        _sync_agent_classes(ctx, address, delta)


def ensure_participant_account(ctx: MappingContext, address: str, delta: Delta) -> Iri:
    """Account individual for an activity participant: the contract account
    when the address is a known contract, an externally owned wallet
    otherwise."""
    existing = ctx.account_registry.get(address)
    if existing is not None:
        return existing
    wallet = ctx.mint("wallet", [address])
    ctx.account_registry[address] = wallet
    delta.instance(wallet, V.EOA_ETHEREUM_ACCOUNT)
    delta.add(wallet, V.HAS_ADDRESS, hex_bytes(address))
    return wallet


# --- block / transaction level ---------------------------------------------------


def map_block(ctx: MappingContext, block: Block) -> list[Triple]:
    """Block, miner node, and one embedded transaction individual per tx."""
    if block.number in ctx.mapped_blocks:
        raise AlreadyMapped(f"block {block.number} was already mapped")
    delta = Delta(ctx.graph)
    block_iri = ctx.mint("block", [str(block.number)])
    delta.instance(block_iri, V.ETHEREUM_BLOCK)
    delta.add(block_iri, V.HAS_TIMESTAMP, unix_seconds(block.timestamp))

    miner_iri = ctx.node_registry.get(block.miner)
    if miner_iri is None:
        label = ctx.labels.get(block.miner)
        miner_iri = ctx.mint("named", [label]) if label else ctx.mint("node", [block.miner])
        ctx.node_registry[block.miner] = miner_iri
        delta.instance(miner_iri, V.ETHEREUM_NODE)
        delta.add(miner_iri, V.CONSTITUTES, ctx.network_iri)
    delta.add(miner_iri, V.MINES, block_iri)

    for tx in block.transactions:
        tx_iri = ctx.mint("transaction", [str(block.number), str(tx.index)])
        ctx.tx_iris[tx.hash] = tx_iri
        delta.instance(tx_iri, V.ETHEREUM_TRANSACTION)
        delta.add(tx_iri, V.HAS_TRANSACTION_HASH, hex_bytes(tx.hash))
        delta.add(block_iri, V.EMBEDS, tx_iri)
        # the submitting user's wallet
        sender = ensure_participant_account(ctx, tx.from_address, delta)
        delta.add(tx_iri, V.ASSOCIATED_WITH, sender)

    ctx.mapped_blocks.add(block.number)
    return delta.added


def map_creation(ctx: MappingContext, tx: Transaction, receipt: Receipt) -> list[Triple]:
    """Creation individual describing a fresh contract agent and account.

    Failed creations leave only the bare transaction record from map_block.
    """
    delta = Delta(ctx.graph)
    ctx.tx_kinds[tx.hash] = TxKind.CONTRACT_CREATION
    if not receipt.status or receipt.contract_address is None:
        return delta.added
    address = receipt.contract_address
    tx_iri = ctx.tx_iris[tx.hash]
    label = ctx.labels.get(address)
    creation_iri = (
        ctx.mint("creation_labeled", [label]) if label else ctx.mint("creation", [tx.hash])
    )
    agent = ensure_contract_agent(ctx, address, delta)
    account = ctx.account_registry[address]
    delta.instance(creation_iri, V.ETHEREUM_SMART_CONTRACT_CREATION)
    delta.add(tx_iri, V.DESCRIBES, creation_iri)
    delta.add(creation_iri, V.DESCRIBES, agent)
    delta.add(creation_iri, V.ASSOCIATED_WITH, account)
    return delta.added


def map_interaction(ctx: MappingContext, tx: Transaction, receipt: Receipt) -> list[Triple]:
    """Interaction individual plus the plan execution it describes."""
    delta = Delta(ctx.graph)
    ctx.tx_kinds[tx.hash] = TxKind.CONTRACT_INTERACTION
    tx_iri = ctx.tx_iris[tx.hash]
    agent = ensure_contract_agent(ctx, tx.to_address, delta)
    interaction_iri = ctx.mint("interaction", [tx.hash])
    delta.instance(interaction_iri, V.ETHEREUM_CONTRACT_INTERACTION)
    delta.instance(interaction_iri, V.ETHEREUM_SMART_CONTRACT_INTERACTION)
    if tx.value > 0:
        delta.instance(interaction_iri, V.ETHER_EXCHANGE_SMART_CONTRACT_INTERACTION)
    delta.add(tx_iri, V.DESCRIBES, interaction_iri)
    plan = ctx.mint("interaction_plan", [tx.hash])
    delta.instance(plan, V.PLAN_EXECUTION)
    delta.add(interaction_iri, V.DESCRIBES, plan)
    delta.add(plan, V.PERFORMED_BY, agent)
    delta.add(plan, V.CAUSED_BY_TRANSACTION, tx_iri)
    return delta.added


# --- token lifecycle ---------------------------------------------------------------


def _event_plan(ctx: MappingContext, delta: Delta, event: Erc721Event, action: Iri,
                agent: Iri) -> Iri:
    plan = ctx.mint("event_plan", [event.tx_hash, str(event.log_index)])
    delta.instance(plan, V.PLAN_EXECUTION)
    delta.add(plan, V.REFERS_EXACTLY_TO, action)
    delta.add(plan, V.PERFORMED_BY, agent)
    tx_iri = ctx.tx_iris.get(event.tx_hash)
    if tx_iri is not None:
        delta.add(plan, V.CAUSED_BY_TRANSACTION, tx_iri)
        delta.add(plan, V.AT_LOG_INDEX, integer(event.log_index))
        # hang the plan off the interaction when there is one; constructor
        # events attach straight to the transaction
        if ctx.tx_kinds.get(event.tx_hash) == TxKind.CONTRACT_INTERACTION:
            delta.add(ctx.mint("interaction", [event.tx_hash]), V.DESCRIBES, plan)
        else:
            delta.add(tx_iri, V.DESCRIBES, plan)
    return plan


def _new_feature(ctx: MappingContext, delta: Delta, record: TokenRecord, owner: str) -> Iri:
    seq = len(record.feature_chain)
    feature_iri = ctx.mint("feature", [record.token_iri.local_name, str(seq)])
    delta.instance(feature_iri, V.ETHEREUM_WALLET_OWNER_ENDURANT_FEATURE)
    delta.add(feature_iri, V.IS_IN_THE_WALLET_OF, hex_bytes(owner))
    delta.add(record.token_iri, V.HAS_ETHEREUM_TOKEN_ENDURANT_FEATURE, feature_iri)
    record.feature_chain.append(EndurantFeature(feature_iri, owner))
    return feature_iri


def apply_ownership_change(
    ctx: MappingContext,
    record: TokenRecord,
    new_owner: str,
    cause: tuple[str, int],
) -> tuple[FeatureModificationActivity, list[Triple]]:
    """Deprecate the active owner feature and chain in a fresh one."""
    if record.burned:
        raise TokenBurned(f"token {record.token_iri.rendered} is burned")
    delta = Delta(ctx.graph)
    old = record.active_feature
    new_feature = _new_feature(ctx, delta, record, new_owner)
    old.deprecated = True
    old.modified_in = new_feature
    delta.instance(old.feature_iri, V.DEPRECATED_ETHEREUM_TOKEN_ENDURANT_FEATURE)
    delta.add(old.feature_iri, V.IS_FEATURE_MODIFIED_IN, new_feature)

    tx_hash, log_index = cause
    activity_iri = ctx.mint("modification", [tx_hash, str(log_index)])
    delta.instance(activity_iri, V.ETHEREUM_TOKEN_FEATURE_MODIFICATION_ACTIVITY)
    delta.add(activity_iri, V.HAS_FEATURE_MODIFICATION_SOURCE, old.feature_iri)
    delta.add(activity_iri, V.HAS_FEATURE_MODIFICATION_RESULT, new_feature)
    tx_iri = ctx.tx_iris.get(tx_hash)
    if tx_iri is not None:
        delta.add(activity_iri, V.CAUSED_BY_TRANSACTION, tx_iri)
        delta.add(activity_iri, V.AT_LOG_INDEX, integer(log_index))
    activity = FeatureModificationActivity(activity_iri, old.feature_iri, new_feature, cause)
    return activity, delta.added


def mark_burned(ctx: MappingContext, record: TokenRecord, cause: tuple[str, int]) -> list[Triple]:
    """Destroy a token: deprecate its active feature with no successor."""
    if record.burned:
        raise TokenBurned(f"token {record.token_iri.rendered} is already burned")
    delta = Delta(ctx.graph)
    active = record.active_feature
    active.deprecated = True
    delta.instance(active.feature_iri, V.DEPRECATED_ETHEREUM_TOKEN_ENDURANT_FEATURE)
    delta.instance(record.token_iri, V.BURNED_ETHEREUM_TOKEN)
    record.burned = True
    key = (record.contract, record.token_id)
    ctx.token_registry.pop(key, None)
    ctx.burned_registry[key] = record
    return delta.added


def _deactivate(delta: Delta, delegation: Delegation) -> None:
    delegation.active = False
    delta.instance(delegation.iri, V.DEACTIVATED_DELEGATION_ACTIVITY)


def record_delegation(ctx: MappingContext, event: Approval | ApprovalForAll) -> list[Triple]:
    """Delegation activity for approve / setApprovalForAll, granting the
    operator the transfer and burn operations; zero-address or disabled
    events only deactivate."""
    delta = Delta(ctx.graph)
    agent = ensure_contract_agent(ctx, event.contract, delta)

    if isinstance(event, Approval):
        token_iri = ctx.mint("token", [event.contract, str(event.token_id)])
        # a fresh approval replaces any previous one for the token
        for d in ctx.delegations:
            if d.active and d.scope == token_iri:
                _deactivate(delta, d)
        if event.approved != ZERO_ADDRESS:
            iri = ctx.mint("activity", [event.tx_hash, str(event.log_index)])
            subject = ensure_participant_account(ctx, event.approved, delta)
            grantor = ensure_participant_account(ctx, event.owner, delta)
            delta.instance(iri, V.DELEGATION_ACTIVITY)
            delta.add(iri, V.HAS_DELEGATION_SUBJECT, subject)
            delta.add(iri, V.HAS_DELEGATION_OBJECT, token_iri)
            delta.add(iri, V.HAS_DELEGATION_GRANTOR, grantor)
            delta.add(iri, V.HAS_DELEGATION_PROPERTY, V.BURN)
            delta.add(iri, V.HAS_DELEGATION_PROPERTY, V.TRANSFER)
            _link_cause(ctx, delta, iri, event.tx_hash, event.log_index)
            ctx.delegations.append(
                Delegation(iri, operator=event.approved, owner=event.owner, scope=token_iri)
            )
    else:
        for d in ctx.delegations:
            if d.active and d.scope == ANY_SCOPE and d.owner == event.owner and d.operator == event.operator:
                _deactivate(delta, d)
        if event.enabled:
            iri = ctx.mint("activity", [event.tx_hash, str(event.log_index)])
            subject = ensure_participant_account(ctx, event.operator, delta)
            grantor = ensure_participant_account(ctx, event.owner, delta)
            delta.instance(iri, V.DELEGATION_ACTIVITY)
            delta.add(iri, V.HAS_DELEGATION_SUBJECT, subject)
            delta.add(iri, V.HAS_DELEGATION_GRANTOR, grantor)
            delta.add(iri, V.HAS_SPECIFICITY, V.ANY)
            delta.add(iri, V.HAS_DELEGATION_PROPERTY, V.BURN)
            delta.add(iri, V.HAS_DELEGATION_PROPERTY, V.TRANSFER)
            _link_cause(ctx, delta, iri, event.tx_hash, event.log_index)
            ctx.delegations.append(
                Delegation(iri, operator=event.operator, owner=event.owner, scope=ANY_SCOPE)
            )

    _event_plan(ctx, delta, event, V.DELEGATE, agent)
    return delta.added


def _link_cause(ctx: MappingContext, delta: Delta, iri: Iri, tx_hash: str, log_index: int) -> None:
    tx_iri = ctx.tx_iris.get(tx_hash)
    if tx_iri is not None:
        delta.add(iri, V.CAUSED_BY_TRANSACTION, tx_iri)
        delta.add(iri, V.AT_LOG_INDEX, integer(log_index))


def map_erc721_event(ctx: MappingContext, event: Erc721Event) -> list[Triple]:
    """Dispatch one decoded token event into lifecycle assertions."""
    delta = Delta(ctx.graph)
    note_evidence(ctx, event.contract, "erc721", delta)
    agent = ensure_contract_agent(ctx, event.contract, delta)
    key = (event.contract, event.token_id) if not isinstance(event, ApprovalForAll) else None

    if isinstance(event, Mint):
        if key in ctx.token_registry or key in ctx.burned_registry:
            raise DuplicateToken(f"token {event.token_id} of {event.contract} already minted")
        token_iri = ctx.mint("token", [event.contract, str(event.token_id)])
        record = TokenRecord(token_iri, event.contract, event.token_id)
        ctx.token_registry[key] = record
        delta.instance(token_iri, V.ETHEREUM_TOKEN_ERC721)
        delta.add(token_iri, V.HAS_TOKEN_CONTRACT, hex_bytes(event.contract))
        delta.add(token_iri, V.HAS_TOKEN_ID, integer(event.token_id))
        _new_feature(ctx, delta, record, event.to)
        ensure_participant_account(ctx, event.to, delta)
        plan = _event_plan(ctx, delta, event, V.MINT, agent)
        delta.add(plan, V.HAS_OUTPUT_ENTITY, token_iri)
        return delta.added

    if isinstance(event, TokenTransfer):
        record = ctx.live_token(event.contract, event.token_id)
        if record is None:
            raise UnknownToken(f"token {event.token_id} of {event.contract} is not live")
        cause = (event.tx_hash, event.log_index)
        _, change_delta = apply_ownership_change(ctx, record, event.to, cause)
        delta.added.extend(change_delta)

        activity_iri = ctx.mint("activity", [event.tx_hash, str(event.log_index)])
        source = ensure_participant_account(ctx, event.from_address, delta)
        destination = ensure_participant_account(ctx, event.to, delta)
        delta.instance(activity_iri, V.TRANSFER_ACTIVITY)
        delta.add(activity_iri, V.HAS_TRANSFER_SOURCE, source)
        delta.add(activity_iri, V.HAS_TRANSFER_DESTINATION, destination)
        delta.add(activity_iri, V.HAS_TRANSFER_OBJECT, record.token_iri)
        _link_cause(ctx, delta, activity_iri, event.tx_hash, event.log_index)

        # the token standard clears single-token approvals on every transfer
        for d in ctx.delegations:
            if d.active and d.scope == record.token_iri:
                _deactivate(delta, d)

        _event_plan(ctx, delta, event, V.TRANSFER, agent)
        return delta.added

    if isinstance(event, Burn):
        record = ctx.live_token(event.contract, event.token_id)
        if record is None:
            if key in ctx.burned_registry:
                raise TokenBurned(
                    f"token {event.token_id} of {event.contract} is already burned"
                )
            raise UnknownToken(f"token {event.token_id} of {event.contract} is not live")
        delta.added.extend(mark_burned(ctx, record, (event.tx_hash, event.log_index)))
        plan = _event_plan(ctx, delta, event, V.BURN, agent)
        delta.add(plan, V.HAS_INPUT_ENTITY, record.token_iri)
        return delta.added

    if isinstance(event, (Approval, ApprovalForAll)):
        delta.added.extend(record_delegation(ctx, event))
        return delta.added

    raise TypeError(f"unexpected event: {event!r}")
