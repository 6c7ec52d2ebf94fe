"""Line-delimited JSON fixture files.

One JSON object per line. An optional leading ``meta`` record names the
network and maps addresses to human labels; each ``block`` record carries its
full transactions and is followed by one ``receipt`` record per transaction.
See fixtures/SCHEMA.md for the full field list.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..errors import FixtureError
from .records import Block, Corpus, EventLog, Receipt, Transaction


class _Reader:
    def __init__(self, path: Path):
        self.path = str(path)

    def fail(self, where: str, message: str) -> FixtureError:
        return FixtureError(f"{where}: {message}", path=self.path)

    def require(self, record: dict, key: str, kind, where: str):
        if key not in record:
            raise self.fail(f"{where}.{key}", "missing field")
        value = record[key]
        if kind is not None and not isinstance(value, kind) or isinstance(value, bool) and kind is int:
            raise self.fail(
                f"{where}.{key}",
                f"expected {getattr(kind, '__name__', kind)}, got {type(value).__name__}",
            )
        return value

    def parse_log(self, raw: dict, where: str) -> EventLog:
        try:
            return EventLog(
                address=self.require(raw, "address", str, where),
                topics=tuple(self.require(raw, "topics", list, where)),
                data=bytes.fromhex(self.require(raw, "data", str, where).removeprefix("0x")),
                log_index=self.require(raw, "log_index", int, where),
            )
        except ValueError as exc:
            raise self.fail(where, str(exc)) from exc

    def parse_tx(self, raw: dict, where: str) -> Transaction:
        try:
            return Transaction(
                hash=self.require(raw, "hash", str, where),
                from_address=self.require(raw, "from", str, where),
                to_address=raw.get("to"),
                value=self.require(raw, "value", int, where),
                input=bytes.fromhex(self.require(raw, "input", str, where).removeprefix("0x")),
                index=self.require(raw, "index", int, where),
            )
        except ValueError as exc:
            raise self.fail(where, str(exc)) from exc

    def parse_block(self, record: dict, where: str) -> Block:
        txs = [
            self.parse_tx(t, f"{where}.transactions[{i}]")
            for i, t in enumerate(self.require(record, "transactions", list, where))
        ]
        try:
            return Block(
                number=self.require(record, "number", int, where),
                hash=self.require(record, "hash", str, where),
                miner=self.require(record, "miner", str, where),
                timestamp=self.require(record, "timestamp", int, where),
                transactions=tuple(txs),
            )
        except ValueError as exc:
            raise self.fail(where, str(exc)) from exc

    def parse_receipt(self, record: dict, where: str) -> Receipt:
        logs = [
            self.parse_log(l, f"{where}.logs[{i}]")
            for i, l in enumerate(record.get("logs", []))
        ]
        try:
            return Receipt(
                tx_hash=self.require(record, "tx_hash", str, where),
                contract_address=record.get("contract_address"),
                logs=tuple(logs),
                status=bool(self.require(record, "status", int, where)),
            )
        except ValueError as exc:
            raise self.fail(where, str(exc)) from exc


def read_fixture(path: str | Path) -> Corpus:
    """Load and validate one fixture file into an ordered corpus."""
    path = Path(path)
    if not path.exists():
        raise FixtureError("no such fixture file", path=str(path))
    reader = _Reader(path)
    corpus = Corpus(blocks=[], receipts=[])
    pending_receipts: dict[str, Receipt] = {}
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise FixtureError(str(exc), path=str(path)) from exc

    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        where = f"line {lineno}"
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise reader.fail(where, f"invalid JSON: {exc}") from exc
        if not isinstance(record, dict):
            raise reader.fail(where, "record is not an object")
        kind = reader.require(record, "kind", str, where)
        if kind == "meta":
            corpus.network = record.get("network", corpus.network)
            labels = record.get("labels", {})
            if not isinstance(labels, dict):
                raise reader.fail(f"{where}.labels", "expected object")
            corpus.labels.update({k.lower(): v for k, v in labels.items()})
        elif kind == "block":
            corpus.blocks.append(reader.parse_block(record, where))
        elif kind == "receipt":
            receipt = reader.parse_receipt(record, where)
            pending_receipts[receipt.tx_hash] = receipt
        else:
            raise reader.fail(f"{where}.kind", f"unknown record kind {kind!r}")

    corpus.blocks.sort(key=lambda b: b.number)
    for block in corpus.blocks:
        for tx in block.transactions:
            receipt = pending_receipts.pop(tx.hash, None)
            if receipt is None:
                raise FixtureError(
                    f"transaction {tx.hash} has no receipt record", path=str(path)
                )
            if receipt.contract_address is not None and not (
                tx.to_address is None and receipt.status
            ):
                raise FixtureError(
                    f"receipt {tx.hash}: contract_address on a non-creation "
                    "or failed transaction",
                    path=str(path),
                )
            if tx.to_address is None and receipt.status and receipt.contract_address is None:
                raise FixtureError(
                    f"receipt {tx.hash}: successful creation without contract_address",
                    path=str(path),
                )
            corpus.receipts.append(receipt)
    if pending_receipts:
        orphan = next(iter(pending_receipts))
        raise FixtureError(f"receipt {orphan} matches no transaction", path=str(path))
    return corpus
