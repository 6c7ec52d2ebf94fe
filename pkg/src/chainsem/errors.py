"""Exception types shared across the indexing pipeline."""

from __future__ import annotations


class ChainsemError(Exception):
    """Base class for all package-specific errors."""


# --- ontology layer ---------------------------------------------------------

class InvalidName(ChainsemError):
    """IRI minting rejected the requested kind/components."""


class UnknownVocabularyTerm(ChainsemError):
    """A class or property outside the vocabulary and registered extensions."""


class ParseError(ChainsemError):
    """Malformed serialized graph document."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


# --- chain ingestion ---------------------------------------------------------

class Transient(ChainsemError):
    """Retryable transport failure while talking to an RPC endpoint."""


class NotFound(ChainsemError):
    """Requested block, token, or record does not exist."""


class FixtureError(ChainsemError):
    """Fixture file violates the documented record schema."""

    def __init__(self, message: str, path: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class InconsistentRecord(ChainsemError):
    """Transaction and receipt do not belong together."""


class MalformedLog(ChainsemError):
    """Event log matches a known signature but has the wrong topic arity."""


# --- semantic mapping --------------------------------------------------------

class AlreadyMapped(ChainsemError):
    """The block was mapped before and the duplicate guard is enabled."""


class UnknownToken(ChainsemError):
    """Event references a token id never minted (or already burned)."""


class DuplicateToken(ChainsemError):
    """Mint for a (contract, token id) pair that is already live."""


class TokenBurned(ChainsemError):
    """Operation on a token that has been destroyed."""


# --- behavior engine ---------------------------------------------------------

class CategoryMismatch(ChainsemError):
    """Template instantiated for an agent of the wrong category."""


class IncompleteBindings(ChainsemError):
    """Conditional evaluation is missing a bound parameter."""


class NotDelegable(ChainsemError):
    """Authorization asked for an action outside the delegable set."""


# --- discovery ---------------------------------------------------------------

class CriteriaError(ChainsemError):
    """Discovery criteria cannot be compiled."""


class EmptyCriteria(CriteriaError):
    """No criteria field was set."""
