"""End-to-end indexing: chain records in, knowledge graph plus summary out.

Deltas commit strictly in (block number, tx index, log index) order; the
token lifecycle depends on it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import behavior
from .ingest.classify import TxKind, classify_transaction
from .ingest.events import Approval, ApprovalForAll, Burn, Mint, TokenTransfer, decode_erc721_log, looks_like_erc20_log
from .ingest.records import Corpus
from .mapper import (
    MappingContext,
    map_block,
    map_creation,
    map_erc721_event,
    map_interaction,
    note_evidence,
    Delta,
)
from .ontology import vocab as V
from .ontology.graph import Graph, Namespaces


@dataclass
class IngestSummary:
    blocks: int = 0
    transactions: int = 0
    creations: int = 0
    interactions: int = 0
    ether_transfers: int = 0
    mints: int = 0
    transfers: int = 0
    burns: int = 0
    delegations: int = 0
    tokens_live: int = 0
    tokens_burned: int = 0
    agents: int = 0
    counts_by_kind: dict[str, int] = field(default_factory=dict)

    def lines(self) -> list[str]:
        return [
            f"blocks: {self.blocks}",
            f"transactions: {self.transactions} "
            f"(creations: {self.creations}, interactions: {self.interactions}, "
            f"ether_transfers: {self.ether_transfers})",
            f"token events: mints: {self.mints}, transfers: {self.transfers}, "
            f"burns: {self.burns}",
            f"delegations: {self.delegations}",
            f"tokens: live: {self.tokens_live}, burned: {self.tokens_burned}",
            f"agents: {self.agents}",
        ]

    def rows(self) -> list[tuple[str, int]]:
        return [
            ("blocks", self.blocks),
            ("transactions", self.transactions),
            ("creations", self.creations),
            ("interactions", self.interactions),
            ("ether_transfers", self.ether_transfers),
            ("mints", self.mints),
            ("transfers", self.transfers),
            ("burns", self.burns),
            ("delegations", self.delegations),
            ("tokens_live", self.tokens_live),
            ("tokens_burned", self.tokens_burned),
            ("agents", self.agents),
        ]


def map_corpus(
    corpus: Corpus,
    namespaces: Namespaces | None = None,
    graph: Graph | None = None,
    context: MappingContext | None = None,
) -> tuple[Graph, MappingContext, IngestSummary]:
    """Map a full corpus and instantiate behaviors for token-standard agents."""
    if context is None:
        graph = graph if graph is not None else Graph(namespaces=namespaces)
        context = MappingContext(graph, network=corpus.network, labels=dict(corpus.labels))
    graph = context.graph
    summary = IngestSummary()

    for block in sorted(corpus.blocks, key=lambda b: b.number):
        map_block(context, block)
        summary.blocks += 1
        for tx in block.transactions:
            receipt = corpus.receipt_for(tx.hash)
            summary.transactions += 1
            kind = classify_transaction(tx, receipt)
            context.tx_kinds[tx.hash] = kind
            if kind == TxKind.CONTRACT_CREATION:
                summary.creations += 1
                map_creation(context, tx, receipt)
            elif kind == TxKind.CONTRACT_INTERACTION:
                summary.interactions += 1
                if receipt.status:
                    map_interaction(context, tx, receipt)
                else:
                    # reverted: only the bare transaction record remains
                    context.tx_kinds[tx.hash] = kind
            else:
                summary.ether_transfers += 1
                if receipt.status and tx.to_address in context.agent_registry:
                    delta = Delta(graph)
                    note_evidence(context, tx.to_address, "ether", delta)
            if not receipt.status:
                continue
            for log in sorted(receipt.logs, key=lambda l: l.log_index):
                if looks_like_erc20_log(log):
                    delta = Delta(graph)
                    note_evidence(context, log.address, "erc20", delta)
                event = decode_erc721_log(log, tx.hash)
                if event is None:
                    continue
                map_erc721_event(context, event)
                if isinstance(event, Mint):
                    summary.mints += 1
                elif isinstance(event, TokenTransfer):
                    summary.transfers += 1
                elif isinstance(event, Burn):
                    summary.burns += 1
                elif isinstance(event, (Approval, ApprovalForAll)):
                    summary.delegations += 1

    # expose behaviors for every agent recognized as an ERC721 token manager
    template = behavior.build_erc721_template()
    for agent in graph.instances_of(V.ETHEREUM_ERC721_SMART_CONTRACT_AGENT):
        behavior.instantiate_for_agent(template, agent, graph)

    summary.tokens_live = len(context.token_registry)
    summary.tokens_burned = len(context.burned_registry)
    summary.agents = len(context.agent_registry)
    return graph, context, summary
