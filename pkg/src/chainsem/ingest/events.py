"""ERC721 event log decoding.

The three signature hashes are keccak-256 of the canonical event
declarations; the test suite recomputes them with an independent keccak
implementation. ERC721 indexes all three Transfer/Approval parameters, so a
matching signature with only two indexed parameters is the ERC20 layout and
is reported as such rather than decoded.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..errors import MalformedLog
from .records import EventLog, ZERO_ADDRESS

# keccak256("Transfer(address,address,uint256)")
TRANSFER_TOPIC = "0xddf252ad1be2c89b69c2b068fc378daa952ba7f163c4a11628f55a4df523b3ef"
# keccak256("Approval(address,address,uint256)")
APPROVAL_TOPIC = "0x8c5be1e5ebec7d5bd14f71427d1e84f3dd0314c0f7b2291e5b200ac8c7c3b925"
# keccak256("ApprovalForAll(address,address,bool)")
APPROVAL_FOR_ALL_TOPIC = "0x17307eab39ab6107e8899845ad3d59bd9653f200f220920489ca2b5937696c31"

EVENT_DECLARATIONS = {
    TRANSFER_TOPIC: "Transfer(address,address,uint256)",
    APPROVAL_TOPIC: "Approval(address,address,uint256)",
    APPROVAL_FOR_ALL_TOPIC: "ApprovalForAll(address,address,bool)",
}


@dataclass(frozen=True)
class Mint:
    to: str
    token_id: int
    contract: str
    tx_hash: str
    log_index: int


@dataclass(frozen=True)
class TokenTransfer:
    from_address: str
    to: str
    token_id: int
    contract: str
    tx_hash: str
    log_index: int


@dataclass(frozen=True)
class Burn:
    from_address: str
    token_id: int
    contract: str
    tx_hash: str
    log_index: int


@dataclass(frozen=True)
class Approval:
    owner: str
    approved: str
    token_id: int
    contract: str
    tx_hash: str
    log_index: int


@dataclass(frozen=True)
class ApprovalForAll:
    owner: str
    operator: str
    enabled: bool
    contract: str
    tx_hash: str
    log_index: int


Erc721Event = Union[Mint, TokenTransfer, Burn, Approval, ApprovalForAll]


def topic_address(topic: str) -> str:
    """Read a left-padded address out of a 32-byte topic."""
    if topic[2:26] != "0" * 24:
        raise MalformedLog(f"topic is not a padded address: {topic}")
    return "0x" + topic[26:]


def topic_uint(topic: str) -> int:
    return int(topic[2:], 16)


def decode_erc721_log(log: EventLog, tx_hash: str) -> Erc721Event | None:
    """Decode one log into an ERC721 event, or None when it is not one.

    Raises MalformedLog when the signature matches but the topic arity fits
    neither the ERC721 nor the ERC20 indexing layout.
    """
    if not log.topics:
        return None
    topic0 = log.topics[0]
    common = dict(contract=log.address, tx_hash=tx_hash, log_index=log.log_index)

    if topic0 == TRANSFER_TOPIC:
        if len(log.topics) == 3:
            return None  # ERC20 layout: value lives in the data section
        if len(log.topics) != 4:
            raise MalformedLog(f"Transfer log with {len(log.topics)} topics")
        src = topic_address(log.topics[1])
        dst = topic_address(log.topics[2])
        token_id = topic_uint(log.topics[3])
        if src == ZERO_ADDRESS and dst == ZERO_ADDRESS:
            return None  # degenerate zero-to-zero transfer
        if src == ZERO_ADDRESS:
            return Mint(to=dst, token_id=token_id, **common)
        if dst == ZERO_ADDRESS:
            return Burn(from_address=src, token_id=token_id, **common)
        return TokenTransfer(from_address=src, to=dst, token_id=token_id, **common)

    if topic0 == APPROVAL_TOPIC:
        if len(log.topics) == 3:
            return None  # ERC20 approve
        if len(log.topics) != 4:
            raise MalformedLog(f"Approval log with {len(log.topics)} topics")
        return Approval(
            owner=topic_address(log.topics[1]),
            approved=topic_address(log.topics[2]),
            token_id=topic_uint(log.topics[3]),
            **common,
        )

    if topic0 == APPROVAL_FOR_ALL_TOPIC:
        if len(log.topics) != 3:
            raise MalformedLog(f"ApprovalForAll log with {len(log.topics)} topics")
        if len(log.data) != 32:
            raise MalformedLog(f"ApprovalForAll data is {len(log.data)} bytes")
        return ApprovalForAll(
            owner=topic_address(log.topics[1]),
            operator=topic_address(log.topics[2]),
            enabled=log.data[-1] == 1,
            **common,
        )

    return None


def looks_like_erc20_log(log: EventLog) -> bool:
    """Transfer/Approval signature with the two-indexed-parameter layout."""
    return bool(log.topics) and log.topics[0] in (TRANSFER_TOPIC, APPROVAL_TOPIC) and len(
        log.topics
    ) == 3


def encode_event_topics(event: Erc721Event) -> tuple[str, ...]:
    """Inverse of decode for the indexed parameters (round-trip check)."""

    def pad_address(addr: str) -> str:
        return "0x" + "0" * 24 + addr[2:]

    def pad_uint(value: int) -> str:
        return "0x" + format(value, "064x")

    if isinstance(event, Mint):
        return (TRANSFER_TOPIC, pad_address(ZERO_ADDRESS), pad_address(event.to),
                pad_uint(event.token_id))
    if isinstance(event, TokenTransfer):
        return (TRANSFER_TOPIC, pad_address(event.from_address), pad_address(event.to),
                pad_uint(event.token_id))
    if isinstance(event, Burn):
        return (TRANSFER_TOPIC, pad_address(event.from_address), pad_address(ZERO_ADDRESS),
                pad_uint(event.token_id))
    if isinstance(event, Approval):
        return (APPROVAL_TOPIC, pad_address(event.owner), pad_address(event.approved),
                pad_uint(event.token_id))
    if isinstance(event, ApprovalForAll):
        return (APPROVAL_FOR_ALL_TOPIC, pad_address(event.owner), pad_address(event.operator))
    raise TypeError(f"not an ERC721 event: {event!r}")
