"""Naive linear replay of a fixture file's raw event logs.

Deliberately independent of the package: it reads the JSONL records itself
and applies textbook token-standard bookkeeping (owner map, per-token
approvals, operator approvals, transfer counts). The mapped graph must agree
with this on every corpus.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

TRANSFER_TOPIC = "0xddf252ad1be2c89b69c2b068fc378daa952ba7f163c4a11628f55a4df523b3ef"
APPROVAL_TOPIC = "0x8c5be1e5ebec7d5bd14f71427d1e84f3dd0314c0f7b2291e5b200ac8c7c3b925"
APPROVAL_FOR_ALL_TOPIC = "0x17307eab39ab6107e8899845ad3d59bd9653f200f220920489ca2b5937696c31"
ZERO = "0x" + "00" * 20

TokenKey = tuple[str, int]


@dataclass
class ReplayState:
    owners: dict[TokenKey, str] = field(default_factory=dict)
    burned: set[TokenKey] = field(default_factory=set)
    transfer_counts: dict[TokenKey, int] = field(default_factory=dict)
    transfer_events: list[tuple[str, str, TokenKey]] = field(default_factory=list)
    approvals: dict[TokenKey, str] = field(default_factory=dict)
    operator_approvals: dict[str, set[str]] = field(default_factory=dict)
    contract_evidence: dict[str, set[str]] = field(default_factory=dict)
    created_contracts: set[str] = field(default_factory=set)
    mints: int = 0
    burns: int = 0

    def authorized(self, operator: str, key: TokenKey, _action: str = "transfer") -> bool:
        owner = self.owners.get(key)
        if owner is None:
            return False
        if owner == operator:
            return True
        if self.approvals.get(key) == operator:
            return True
        return operator in self.operator_approvals.get(owner, set())

    def expected_agent_classes(self, contract: str) -> set[str]:
        evidence = self.contract_evidence.get(contract, set())
        classes = set()
        if "erc721" in evidence:
            classes.add("EthereumERC721SmartContractAgent")
        if "erc20" in evidence:
            classes.add("EthereumERC20SmartContractAgent")
        if not classes and "ether" in evidence:
            classes.add("EtherExchangeSmartContractAgent")
        if not classes:
            classes.add("GeneralPurposeBlockchainSmartContractAgent")
        return classes


def _addr(topic: str) -> str:
    return "0x" + topic[26:]


def replay(path: str | Path) -> ReplayState:
    state = ReplayState()
    blocks = []
    receipts = {}
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        record = json.loads(line)
        if record["kind"] == "block":
            blocks.append(record)
        elif record["kind"] == "receipt":
            receipts[record["tx_hash"]] = record

    for block in sorted(blocks, key=lambda b: b["number"]):
        for tx in sorted(block["transactions"], key=lambda t: t["index"]):
            receipt = receipts[tx["hash"]]
            if tx.get("to") is None and receipt.get("contract_address"):
                state.created_contracts.add(receipt["contract_address"])
            if (
                tx.get("to") in state.created_contracts
                and tx.get("value", 0) > 0
                and tx.get("input", "0x") in ("0x", "")
                and not receipt.get("logs")
            ):
                state.contract_evidence.setdefault(tx["to"], set()).add("ether")
            if not receipt["status"]:
                continue
            for log in sorted(receipt.get("logs", []), key=lambda l: l["log_index"]):
                _apply_log(state, log)
    return state


def _apply_log(state: ReplayState, log: dict) -> None:
    topics = log["topics"]
    if not topics:
        return
    contract = log["address"]
    topic0 = topics[0]

    if topic0 == TRANSFER_TOPIC and len(topics) == 4:
        state.contract_evidence.setdefault(contract, set()).add("erc721")
        src, dst = _addr(topics[1]), _addr(topics[2])
        key = (contract, int(topics[3], 16))
        if src == ZERO and dst == ZERO:
            return
        if src == ZERO:
            state.owners[key] = dst
            state.transfer_counts.setdefault(key, 0)
            state.mints += 1
        elif dst == ZERO:
            state.owners.pop(key, None)
            state.approvals.pop(key, None)
            state.burned.add(key)
            state.burns += 1
        else:
            state.owners[key] = dst
            state.transfer_counts[key] = state.transfer_counts.get(key, 0) + 1
            state.transfer_events.append((src, dst, key))
            state.approvals.pop(key, None)  # transfers clear the token approval
    elif topic0 == TRANSFER_TOPIC and len(topics) == 3:
        state.contract_evidence.setdefault(contract, set()).add("erc20")
    elif topic0 == APPROVAL_TOPIC and len(topics) == 4:
        state.contract_evidence.setdefault(contract, set()).add("erc721")
        approved = _addr(topics[2])
        key = (contract, int(topics[3], 16))
        if approved == ZERO:
            state.approvals.pop(key, None)
        else:
            state.approvals[key] = approved
    elif topic0 == APPROVAL_TOPIC and len(topics) == 3:
        state.contract_evidence.setdefault(contract, set()).add("erc20")
    elif topic0 == APPROVAL_FOR_ALL_TOPIC and len(topics) == 3:
        state.contract_evidence.setdefault(contract, set()).add("erc721")
        owner, operator = _addr(topics[1]), _addr(topics[2])
        enabled = int(log["data"][2:], 16) == 1
        if enabled:
            state.operator_approvals.setdefault(owner, set()).add(operator)
        else:
            state.operator_approvals.get(owner, set()).discard(operator)
