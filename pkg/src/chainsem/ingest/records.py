"""Raw chain records as ingested from RPC responses or fixture files."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

_ADDRESS = re.compile(r"^0x[0-9a-f]{40}$")
_HASH32 = re.compile(r"^0x[0-9a-f]{64}$")

ZERO_ADDRESS = "0x" + "0" * 40


def normalize_address(value: str) -> str:
    v = value.lower()
    if not _ADDRESS.match(v):
        raise ValueError(f"not a 20-byte address: {value!r}")
    return v


def normalize_hash(value: str) -> str:
    v = value.lower()
    if not _HASH32.match(v):
        raise ValueError(f"not a 32-byte hash: {value!r}")
    return v


@dataclass(frozen=True)
class EventLog:
    address: str
    topics: tuple[str, ...]
    data: bytes
    log_index: int

    def __post_init__(self):
        object.__setattr__(self, "address", normalize_address(self.address))
        if len(self.topics) > 4:
            raise ValueError(f"log has {len(self.topics)} topics, at most 4 allowed")
        object.__setattr__(self, "topics", tuple(normalize_hash(t) for t in self.topics))
        if self.log_index < 0:
            raise ValueError("negative log index")


@dataclass(frozen=True)
class Transaction:
    hash: str
    from_address: str
    to_address: str | None
    value: int
    input: bytes
    index: int

    def __post_init__(self):
        object.__setattr__(self, "hash", normalize_hash(self.hash))
        object.__setattr__(self, "from_address", normalize_address(self.from_address))
        if self.to_address is not None:
            object.__setattr__(self, "to_address", normalize_address(self.to_address))
        if self.value < 0:
            raise ValueError("negative transaction value")
        if self.index < 0:
            raise ValueError("negative transaction index")

    @property
    def is_creation(self) -> bool:
        return self.to_address is None


@dataclass(frozen=True)
class Receipt:
    tx_hash: str
    contract_address: str | None
    logs: tuple[EventLog, ...]
    status: bool

    def __post_init__(self):
        object.__setattr__(self, "tx_hash", normalize_hash(self.tx_hash))
        if self.contract_address is not None:
            object.__setattr__(
                self, "contract_address", normalize_address(self.contract_address)
            )
        object.__setattr__(self, "logs", tuple(self.logs))


@dataclass(frozen=True)
class Block:
    number: int
    hash: str
    miner: str
    timestamp: int
    transactions: tuple[Transaction, ...]

    def __post_init__(self):
        if self.number < 0:
            raise ValueError("negative block number")
        object.__setattr__(self, "hash", normalize_hash(self.hash))
        object.__setattr__(self, "miner", normalize_address(self.miner))
        object.__setattr__(self, "transactions", tuple(self.transactions))
        indices = [t.index for t in self.transactions]
        if indices != list(range(len(indices))):
            raise ValueError(f"block {self.number}: transaction indices not contiguous 0..n-1")


@dataclass
class Corpus:
    """A fixture's worth of chain data plus display metadata."""

    blocks: list[Block]
    receipts: list[Receipt]
    network: str = "ethereum_mainnet"
    labels: dict[str, str] = field(default_factory=dict)

    def receipt_for(self, tx_hash: str) -> Receipt:
        for r in self.receipts:
            if r.tx_hash == tx_hash:
                return r
        raise KeyError(tx_hash)
