"""Chain data acquisition and decoding."""

from .classify import TxKind, classify_transaction
from .events import (
    APPROVAL_FOR_ALL_TOPIC,
    APPROVAL_TOPIC,
    TRANSFER_TOPIC,
    Approval,
    ApprovalForAll,
    Burn,
    Erc721Event,
    Mint,
    TokenTransfer,
    decode_erc721_log,
    encode_event_topics,
    looks_like_erc20_log,
)
from .fixtures import read_fixture
from .records import ZERO_ADDRESS, Block, Corpus, EventLog, Receipt, Transaction
from .rpc import HttpTransport, RpcClient, fetch_block

__all__ = [
    "TxKind",
    "classify_transaction",
    "APPROVAL_FOR_ALL_TOPIC",
    "APPROVAL_TOPIC",
    "TRANSFER_TOPIC",
    "Approval",
    "ApprovalForAll",
    "Burn",
    "Erc721Event",
    "Mint",
    "TokenTransfer",
    "decode_erc721_log",
    "encode_event_topics",
    "looks_like_erc20_log",
    "read_fixture",
    "ZERO_ADDRESS",
    "Block",
    "Corpus",
    "EventLog",
    "Receipt",
    "Transaction",
    "HttpTransport",
    "RpcClient",
    "fetch_block",
]
