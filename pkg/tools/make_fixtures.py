#!/usr/bin/env python3
"""Regenerate the committed fixture corpora under fixtures/.

The fixtures are hand-designed scenarios; this script only keeps their JSON
shapes consistent (hashes, topic padding, receipt pairing). Run from the repo
root: python tools/make_fixtures.py
"""

from __future__ import annotations

import json
from pathlib import Path

OUT_DIR = Path(__file__).resolve().parent.parent / "fixtures"

TRANSFER_TOPIC = "0xddf252ad1be2c89b69c2b068fc378daa952ba7f163c4a11628f55a4df523b3ef"
APPROVAL_TOPIC = "0x8c5be1e5ebec7d5bd14f71427d1e84f3dd0314c0f7b2291e5b200ac8c7c3b925"
APPROVAL_FOR_ALL_TOPIC = "0x17307eab39ab6107e8899845ad3d59bd9653f200f220920489ca2b5937696c31"

ZERO = "0x" + "00" * 20


def addr(byte: str) -> str:
    return "0x" + byte * 20


def block_hash(number: int) -> str:
    return "0x" + "bb" * 4 + format(number, "056x")


class TxCounter:
    def __init__(self):
        self.n = 0

    def next_hash(self) -> str:
        self.n += 1
        return "0x" + "ff" * 4 + format(self.n, "056x")


def pad_addr(a: str) -> str:
    return "0x" + "00" * 12 + a[2:]


def pad_uint(v: int) -> str:
    return "0x" + format(v, "064x")


def log_transfer(contract: str, src: str, dst: str, token_id: int, log_index: int) -> dict:
    return {
        "address": contract,
        "topics": [TRANSFER_TOPIC, pad_addr(src), pad_addr(dst), pad_uint(token_id)],
        "data": "0x",
        "log_index": log_index,
    }


def log_erc20_transfer(contract: str, src: str, dst: str, value: int, log_index: int) -> dict:
    return {
        "address": contract,
        "topics": [TRANSFER_TOPIC, pad_addr(src), pad_addr(dst)],
        "data": pad_uint(value),
        "log_index": log_index,
    }


def log_approval(contract: str, owner: str, approved: str, token_id: int, log_index: int) -> dict:
    return {
        "address": contract,
        "topics": [APPROVAL_TOPIC, pad_addr(owner), pad_addr(approved), pad_uint(token_id)],
        "data": "0x",
        "log_index": log_index,
    }


def log_approval_for_all(contract: str, owner: str, operator: str, enabled: bool,
                         log_index: int) -> dict:
    return {
        "address": contract,
        "topics": [APPROVAL_FOR_ALL_TOPIC, pad_addr(owner), pad_addr(operator)],
        "data": pad_uint(1 if enabled else 0),
        "log_index": log_index,
    }


class CorpusBuilder:
    def __init__(self, network: str = "ethereum_mainnet", labels: dict | None = None):
        self.records: list[dict] = []
        if network or labels:
            self.records.append({"kind": "meta", "network": network, "labels": labels or {}})
        self.counter = TxCounter()

    def block(self, number: int, miner: str, timestamp: int, txs: list[dict]) -> None:
        transactions = []
        receipts = []
        for index, tx in enumerate(txs):
            tx_hash = self.counter.next_hash()
            transactions.append(
                {
                    "hash": tx_hash,
                    "from": tx["from"],
                    "to": tx.get("to"),
                    "value": tx.get("value", 0),
                    "input": tx.get("input", "0x"),
                    "index": index,
                }
            )
            receipts.append(
                {
                    "kind": "receipt",
                    "tx_hash": tx_hash,
                    "status": tx.get("status", 1),
                    "contract_address": tx.get("contract_address"),
                    "logs": tx.get("logs", []),
                }
            )
        self.records.append(
            {
                "kind": "block",
                "number": number,
                "hash": block_hash(number),
                "miner": miner,
                "timestamp": timestamp,
                "transactions": transactions,
            }
        )
        self.records.extend(receipts)

    def write(self, name: str) -> None:
        OUT_DIR.mkdir(parents=True, exist_ok=True)
        out = OUT_DIR / name
        text = "\n".join(json.dumps(r, sort_keys=True) for r in self.records) + "\n"
        out.write_text(text)
        print(f"wrote {out} ({len(self.records)} records)")


def creation_corpus() -> None:
    miner = addr("5a")
    swb = addr("b0")
    deployer = addr("ee")
    sender, receiver = addr("e1"), addr("e2")
    b = CorpusBuilder(labels={miner: "SparkPool", swb: "SWB"})
    b.block(
        10452395,
        miner,
        1594000000,
        [
            {"from": sender, "to": receiver, "value": 10**18},
            {"from": deployer, "contract_address": swb, "input": "0x60806040"},
        ],
    )
    b.write("creation.jsonl")


def lifecycle_corpus() -> None:
    miner = addr("33")
    c1, c2 = addr("c1"), addr("c2")
    deployer = addr("de")
    a, bb, d, x = addr("aa"), addr("bb"), addr("dd"), addr("99")
    b = CorpusBuilder(labels={c1: "GalleryToken"})
    b.block(
        500,
        miner,
        1600000000,
        [
            {"from": deployer, "contract_address": c1, "input": "0x60806040"},
            {"from": deployer, "contract_address": c2, "input": "0x60806040"},
        ],
    )
    b.block(
        501,
        miner,
        1600000100,
        [
            {
                "from": a,
                "to": c1,
                "input": "0x40c10f19",
                "logs": [log_transfer(c1, ZERO, a, 1, 0), log_transfer(c1, ZERO, a, 2, 1)],
            },
            {
                "from": bb,
                "to": c1,
                "input": "0x40c10f19",
                "logs": [log_transfer(c1, ZERO, bb, 3, 0)],
            },
        ],
    )
    b.block(
        502,
        miner,
        1600000200,
        [
            {"from": a, "to": c1, "input": "0x095ea7b3", "logs": [log_approval(c1, a, d, 2, 0)]},
            {"from": a, "to": c1, "input": "0x42842e0e", "logs": [log_transfer(c1, a, bb, 1, 0)]},
            {
                "from": a,
                "to": c1,
                "input": "0xa22cb465",
                "logs": [log_approval_for_all(c1, a, d, True, 0)],
            },
        ],
    )
    b.block(
        503,
        miner,
        1600000300,
        [
            {"from": bb, "to": c1, "input": "0x42842e0e", "logs": [log_transfer(c1, bb, a, 3, 0)]},
            {"from": bb, "to": c1, "input": "0x42966c68", "logs": [log_transfer(c1, bb, ZERO, 1, 0)]},
            {"from": x, "to": c2, "input": "0xdeadbeef"},
        ],
    )
    b.write("lifecycle.jsonl")


def delegation_corpus() -> None:
    miner = addr("33")
    c3 = addr("c3")
    deployer = addr("de")
    p, q, r, s = addr("11"), addr("22"), addr("44"), addr("55")
    b = CorpusBuilder()
    b.block(700, miner, 1610000000, [{"from": deployer, "contract_address": c3, "input": "0x60"}])
    b.block(
        701,
        miner,
        1610000100,
        [
            {
                "from": p,
                "to": c3,
                "input": "0x40c10f19",
                "logs": [
                    log_transfer(c3, ZERO, p, 10, 0),
                    log_transfer(c3, ZERO, p, 11, 1),
                    log_transfer(c3, ZERO, q, 12, 2),
                ],
            }
        ],
    )
    b.block(
        702,
        miner,
        1610000200,
        [
            {"from": p, "to": c3, "input": "0x095ea7b3", "logs": [log_approval(c3, p, r, 10, 0)]},
            {
                "from": p,
                "to": c3,
                "input": "0xa22cb465",
                "logs": [log_approval_for_all(c3, p, s, True, 0)],
            },
        ],
    )
    b.block(
        703,
        miner,
        1610000300,
        [
            {"from": p, "to": c3, "input": "0x42842e0e", "logs": [log_transfer(c3, p, q, 10, 0)]},
            {
                "from": p,
                "to": c3,
                "input": "0xa22cb465",
                "logs": [log_approval_for_all(c3, p, s, False, 0)],
            },
        ],
    )
    b.block(
        704,
        miner,
        1610000400,
        [
            {"from": q, "to": c3, "input": "0x095ea7b3", "logs": [log_approval(c3, q, r, 12, 0)]},
            {"from": q, "to": c3, "input": "0x095ea7b3", "logs": [log_approval(c3, q, ZERO, 12, 0)]},
        ],
    )
    b.write("delegation.jsonl")


def standards_corpus() -> None:
    miner = addr("33")
    c4, c5, c6 = addr("c4"), addr("c5"), addr("c6")
    deployer = addr("de")
    a, bb = addr("aa"), addr("bb")
    b = CorpusBuilder()
    b.block(
        600,
        miner,
        1620000000,
        [
            {"from": deployer, "contract_address": c4, "input": "0x60"},
            {"from": deployer, "contract_address": c5, "input": "0x60"},
            {"from": deployer, "contract_address": c6, "input": "0x60"},
        ],
    )
    b.block(
        601,
        miner,
        1620000100,
        [
            # fungible-token style: two indexed params, amount in data
            {
                "from": a,
                "to": c4,
                "input": "0xa9059cbb",
                "logs": [log_erc20_transfer(c4, a, bb, 1000, 0)],
            },
            # dual-standard contract: ERC721 mint and an ERC20-shaped transfer
            {
                "from": a,
                "to": c5,
                "input": "0x40c10f19",
                "logs": [
                    log_transfer(c5, ZERO, a, 77, 0),
                    log_erc20_transfer(c5, a, bb, 5, 1),
                ],
            },
            # plain ether pass-through into a contract
            {"from": a, "to": c6, "value": 5 * 10**18},
            # value-bearing contract call
            {"from": bb, "to": c5, "value": 10**17, "input": "0xdeadbeef"},
        ],
    )
    b.write("standards.jsonl")


if __name__ == "__main__":
    creation_corpus()
    lifecycle_corpus()
    delegation_corpus()
    standards_corpus()
