"""Structural transaction classification."""

from __future__ import annotations

import enum

from ..errors import InconsistentRecord
from .records import Receipt, Transaction


class TxKind(enum.Enum):
    CONTRACT_CREATION = "creation"
    CONTRACT_INTERACTION = "interaction"
    ETHER_TRANSFER = "ether_transfer"


def classify_transaction(tx: Transaction, receipt: Receipt) -> TxKind:
    """Total, mutually exclusive classification of a (tx, receipt) pair.

    Creation when there is no target; plain value movement when the call has
    no payload and no effects; everything else is a contract interaction.
    """
    if tx.hash != receipt.tx_hash:
        raise InconsistentRecord(f"receipt {receipt.tx_hash} does not match tx {tx.hash}")
    if tx.to_address is None:
        return TxKind.CONTRACT_CREATION
    if tx.value > 0 and not tx.input and not receipt.logs:
        return TxKind.ETHER_TRANSFER
    return TxKind.CONTRACT_INTERACTION
