"""JSON-RPC access to an Ethereum node.

Reads are idempotent, so transient transport failures are retried with a
small backoff. The transport is injectable; tests drive the client from
canned fixture data without a network.
"""

from __future__ import annotations

import time
from typing import Any, Protocol

import requests

from ..errors import NotFound, Transient
from .records import Block, EventLog, Receipt, Transaction


class Transport(Protocol):
    def __call__(self, method: str, params: list) -> Any: ...


class HttpTransport:
    def __init__(self, url: str, timeout: float = 30.0):
        self.url = url
        self.timeout = timeout
        self._next_id = 1

    def __call__(self, method: str, params: list) -> Any:
        payload = {"jsonrpc": "2.0", "id": self._next_id, "method": method, "params": params}
        self._next_id += 1
        try:
            response = requests.post(self.url, json=payload, timeout=self.timeout)
            response.raise_for_status()
            body = response.json()
        except (requests.RequestException, ValueError) as exc:
            raise Transient(f"{method}: {exc}") from exc
        if "error" in body:
            raise Transient(f"{method}: rpc error {body['error']}")
        return body.get("result")


def _hex_int(value: str | int) -> int:
    if isinstance(value, int):
        return value
    return int(value, 16)


def _parse_rpc_tx(raw: dict) -> Transaction:
    return Transaction(
        hash=raw["hash"],
        from_address=raw["from"],
        to_address=raw.get("to"),
        value=_hex_int(raw.get("value", 0)),
        input=bytes.fromhex(str(raw.get("input", "0x")).removeprefix("0x")),
        index=_hex_int(raw["transactionIndex"]),
    )


def _parse_rpc_log(raw: dict) -> EventLog:
    return EventLog(
        address=raw["address"],
        topics=tuple(raw.get("topics", [])),
        data=bytes.fromhex(str(raw.get("data", "0x")).removeprefix("0x")),
        log_index=_hex_int(raw["logIndex"]),
    )


def _parse_rpc_receipt(raw: dict) -> Receipt:
    return Receipt(
        tx_hash=raw["transactionHash"],
        contract_address=raw.get("contractAddress"),
        logs=tuple(_parse_rpc_log(l) for l in raw.get("logs", [])),
        status=_hex_int(raw.get("status", 1)) == 1,
    )


class RpcClient:
    def __init__(self, transport: Transport | str, retries: int = 3, backoff: float = 0.5):
        if isinstance(transport, str):
            transport = HttpTransport(transport)
        self.transport = transport
        self.retries = retries
        self.backoff = backoff

    def _call(self, method: str, params: list) -> Any:
        attempt = 0
        while True:
            try:
                return self.transport(method, params)
            except Transient:
                attempt += 1
                if attempt > self.retries:
                    raise
                time.sleep(self.backoff * attempt)

    def fetch_block(self, number: int) -> tuple[Block, list[Receipt]]:
        """One block with full transactions plus one receipt per transaction."""
        raw = self._call("eth_getBlockByNumber", [hex(number), True])
        if raw is None:
            raise NotFound(f"block {number} not found")
        transactions = sorted(
            (_parse_rpc_tx(t) for t in raw.get("transactions", [])), key=lambda t: t.index
        )
        block = Block(
            number=_hex_int(raw["number"]),
            hash=raw["hash"],
            miner=raw["miner"],
            timestamp=_hex_int(raw.get("timestamp", 0)),
            transactions=tuple(transactions),
        )
        receipts = []
        for tx in block.transactions:
            raw_receipt = self._call("eth_getTransactionReceipt", [tx.hash])
            if raw_receipt is None:
                raise NotFound(f"no receipt for transaction {tx.hash}")
            receipts.append(_parse_rpc_receipt(raw_receipt))
        return block, receipts

    def fetch_logs(self, from_block: int, to_block: int) -> list[EventLog]:
        raw = self._call(
            "eth_getLogs", [{"fromBlock": hex(from_block), "toBlock": hex(to_block)}]
        )
        return [_parse_rpc_log(l) for l in raw or []]


def fetch_block(endpoint: Transport | str, number: int) -> tuple[Block, list[Receipt]]:
    return RpcClient(endpoint).fetch_block(number)
