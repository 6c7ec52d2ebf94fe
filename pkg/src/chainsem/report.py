"""Graph reports: a delimited summary plus matplotlib figures on disk.

Everything is derived from the graph alone so reports can be produced for
any previously exported file.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from . import tokens
from .ontology import vocab as V
from .ontology.graph import Graph


@dataclass
class GraphReport:
    blocks: int
    transactions: int
    creations: int
    interactions: int
    agents_by_category: dict[str, int]
    tokens_live: int
    tokens_burned: int
    transfers: int
    delegations_active: int
    delegations_revoked: int
    chain_lengths: dict[str, int]  # token local name -> feature chain length

    def rows(self) -> list[tuple[str, int]]:
        out = [
            ("blocks", self.blocks),
            ("transactions", self.transactions),
            ("creations", self.creations),
            ("interactions", self.interactions),
            ("tokens_live", self.tokens_live),
            ("tokens_burned", self.tokens_burned),
            ("transfers", self.transfers),
            ("delegations_active", self.delegations_active),
            ("delegations_revoked", self.delegations_revoked),
        ]
        for category, count in sorted(self.agents_by_category.items()):
            out.append((f"agents[{category}]", count))
        return out


_AGENT_CATEGORIES = (
    V.ETHEREUM_ERC721_SMART_CONTRACT_AGENT,
    V.ETHEREUM_ERC20_SMART_CONTRACT_AGENT,
    V.ETHER_EXCHANGE_SMART_CONTRACT_AGENT,
    V.GENERAL_PURPOSE_BLOCKCHAIN_SMART_CONTRACT_AGENT,
)


def build_report(graph: Graph) -> GraphReport:
    delegations = graph.instances_of(V.DELEGATION_ACTIVITY)
    revoked = [
        d for d in delegations if graph.is_instance(d, V.DEACTIVATED_DELEGATION_ACTIVITY)
    ]
    chain_lengths: dict[str, int] = {}
    live = burned = 0
    for token in tokens.all_tokens(graph):
        chain = tokens.feature_chain(graph, token)
        if not chain:
            continue
        chain_lengths[token.local_name] = len(chain)
        if tokens.is_burned(graph, token):
            burned += 1
        else:
            live += 1
    return GraphReport(
        blocks=len(graph.instances_of(V.ETHEREUM_BLOCK)),
        transactions=len(graph.instances_of(V.ETHEREUM_TRANSACTION)),
        creations=len(graph.instances_of(V.ETHEREUM_SMART_CONTRACT_CREATION)),
        interactions=len(graph.instances_of(V.ETHEREUM_CONTRACT_INTERACTION)),
        agents_by_category={
            category.local_name: len(graph.instances_of(category))
            for category in _AGENT_CATEGORIES
        },
        tokens_live=live,
        tokens_burned=burned,
        transfers=len(graph.instances_of(V.TRANSFER_ACTIVITY)),
        delegations_active=len(delegations) - len(revoked),
        delegations_revoked=len(revoked),
        chain_lengths=chain_lengths,
    )


def write_summary_csv(report: GraphReport, path: Path) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric", "value"])
        writer.writerows(report.rows())


def _save(fig, path: Path) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_figures(report: GraphReport, out_dir: Path) -> list[Path]:
    """Write the report's figures as PNG files; returns their paths."""
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    fig, ax = plt.subplots(figsize=(6, 4))
    labels = ["blocks", "transactions", "creations", "interactions", "transfers"]
    values = [
        report.blocks,
        report.transactions,
        report.creations,
        report.interactions,
        report.transfers,
    ]
    ax.bar(labels, values, color="#4878a8")
    ax.set_ylabel("count")
    ax.set_title("Chain activity")
    path = out_dir / "activity.png"
    _save(fig, path)
    written.append(path)

    fig, ax = plt.subplots(figsize=(6, 4))
    categories = sorted(report.agents_by_category)
    counts = [report.agents_by_category[c] for c in categories]
    short = [c.replace("SmartContractAgent", "").replace("Blockchain", "") for c in categories]
    ax.barh(short, counts, color="#a87848")
    ax.set_xlabel("agents")
    ax.set_title("Agents by category")
    path = out_dir / "agents.png"
    _save(fig, path)
    written.append(path)

    if report.chain_lengths:
        fig, ax = plt.subplots(figsize=(6, 4))
        names = sorted(report.chain_lengths)
        lengths = [report.chain_lengths[n] for n in names]
        ax.barh(names, lengths, color="#48a878")
        ax.set_xlabel("ownership feature chain length")
        ax.set_title("Token lifecycles")
        path = out_dir / "token_lifecycles.png"
        _save(fig, path)
        written.append(path)

    return written


def write_report(graph: Graph, out_dir: Path) -> tuple[Path, list[Path]]:
    """Summary CSV plus figures, side by side in one directory."""
    out_dir.mkdir(parents=True, exist_ok=True)
    report = build_report(graph)
    summary_path = out_dir / "summary.csv"
    write_summary_csv(report, summary_path)
    figures = render_figures(report, out_dir)
    return summary_path, figures
