"""The fixed vocabulary: ontology classes, properties, and named individuals.

The class hierarchy is a small static DAG; subclass reasoning is a precomputed
closure over it rather than runtime inference. A second group of terms covers
artifact plumbing the figures leave unnamed (activity roles, behavior
structure, provenance data properties); they live in the same namespace so
every predicate in the store stays resolvable.
"""

from __future__ import annotations

from .terms import VOCAB_NS, Iri

_CLASS_PARENTS: dict[str, tuple[str, ...]] = {}
_CLASSES: dict[str, Iri] = {}
_OBJECT_PROPERTIES: dict[str, Iri] = {}
_DATA_PROPERTIES: dict[str, Iri] = {}
_INDIVIDUALS: dict[str, Iri] = {}


def _cls(name: str, *parents: str) -> Iri:
    iri = Iri(VOCAB_NS, name)
    _CLASSES[name] = iri
    _CLASS_PARENTS[name] = parents
    return iri


def _obj(name: str) -> Iri:
    iri = Iri(VOCAB_NS, name)
    _OBJECT_PROPERTIES[name] = iri
    return iri


def _data(name: str) -> Iri:
    iri = Iri(VOCAB_NS, name)
    _DATA_PROPERTIES[name] = iri
    return iri


def _ind(name: str) -> Iri:
    iri = Iri(VOCAB_NS, name)
    _INDIVIDUALS[name] = iri
    return iri


# --- blocks, transactions, nodes, systems ------------------------------------

BLOCKCHAIN_BLOCK = _cls("BlockchainBlock")
ETHEREUM_BLOCK = _cls("EthereumBlock", "BlockchainBlock")
BLOCKCHAIN_TRANSACTION = _cls("BlockchainTransaction")
ETHEREUM_TRANSACTION = _cls("EthereumTransaction", "BlockchainTransaction")
AGENT = _cls("Agent")
BLOCKCHAIN_NODE = _cls("BlockchainNode", "Agent")
ETHEREUM_NODE = _cls("EthereumNode", "BlockchainNode")
SYSTEM = _cls("System")
ETHEREUM_SYSTEM = _cls("EthereumSystem", "System")

# --- creations, interactions ---------------------------------------------------

BLOCKCHAIN_SMART_CONTRACT_CREATION = _cls("BlockchainSmartContractCreation")
ETHEREUM_SMART_CONTRACT_CREATION = _cls(
    "EthereumSmartContractCreation", "BlockchainSmartContractCreation"
)
BLOCKCHAIN_SMART_CONTRACT_INTERACTION = _cls("BlockchainSmartContractInteraction")
ETHEREUM_SMART_CONTRACT_INTERACTION = _cls(
    "EthereumSmartContractInteraction", "BlockchainSmartContractInteraction"
)
SMART_CONTRACT_INTERACTION = _cls("SmartContractInteraction")
ETHEREUM_CONTRACT_INTERACTION = _cls("EthereumContractInteraction", "SmartContractInteraction")
CRYPTOCURRENCY_EXCHANGE_BLOCKCHAIN_SMART_CONTRACT_INTERACTION = _cls(
    "CryptocurrencyExchangeBlockchainSmartContractInteraction",
    "BlockchainSmartContractInteraction",
)
ETHER_EXCHANGE_SMART_CONTRACT_INTERACTION = _cls(
    "EtherExchangeSmartContractInteraction",
    "EthereumContractInteraction",
    "CryptocurrencyExchangeBlockchainSmartContractInteraction",
)

# --- accounts ------------------------------------------------------------------

BLOCKCHAIN_ACCOUNT = _cls("BlockchainAccount")
BLOCKCHAIN_SMART_CONTRACT_ACCOUNT = _cls("BlockchainSmartContractAccount", "BlockchainAccount")
ETHEREUM_SMART_CONTRACT_ACCOUNT = _cls(
    "EthereumSmartContractAccount", "BlockchainSmartContractAccount"
)
EOA_BLOCKCHAIN_ACCOUNT = _cls("EOA-BlockchainAccount", "BlockchainAccount")
EOA_ETHEREUM_ACCOUNT = _cls("EOA-EthereumAccount", "EOA-BlockchainAccount")

# --- smart contract agents ------------------------------------------------------

BLOCKCHAIN_SMART_CONTRACT_AGENT = _cls("BlockchainSmartContractAgent", "Agent")
NON_FUNGIBLE_BLOCKCHAIN_SMART_CONTRACT_AGENT = _cls(
    "NonFungibleBlockchainSmartContractAgent", "BlockchainSmartContractAgent"
)
ETHEREUM_ERC721_SMART_CONTRACT_AGENT = _cls(
    "EthereumERC721SmartContractAgent", "NonFungibleBlockchainSmartContractAgent"
)
FUNGIBLE_BLOCKCHAIN_SMART_CONTRACT_AGENT = _cls(
    "FungibleBlockchainSmartContractAgent", "BlockchainSmartContractAgent"
)
ETHEREUM_ERC20_SMART_CONTRACT_AGENT = _cls(
    "EthereumERC20SmartContractAgent", "FungibleBlockchainSmartContractAgent"
)
CRYPTOCURRENCY_EXCHANGE_BLOCKCHAIN_SMART_CONTRACT_AGENT = _cls(
    "CryptocurrencyExchangeBlockchainSmartContractAgent", "BlockchainSmartContractAgent"
)
ETHER_EXCHANGE_SMART_CONTRACT_AGENT = _cls(
    "EtherExchangeSmartContractAgent", "CryptocurrencyExchangeBlockchainSmartContractAgent"
)
GENERAL_PURPOSE_BLOCKCHAIN_SMART_CONTRACT_AGENT = _cls(
    "GeneralPurposeBlockchainSmartContractAgent", "BlockchainSmartContractAgent"
)

# --- actions and reference templates ---------------------------------------------

ACTION = _cls("Action")
REFERENCE_TEMPLATE = _cls("ReferenceTemplate")

# --- token taxonomy ----------------------------------------------------------------

ETHEREUM_TOKEN = _cls("EthereumToken")
ETHEREUM_NON_FUNGIBLE_TOKEN = _cls("EthereumNonFungibleToken", "EthereumToken")
ETHEREUM_TOKEN_ERC721 = _cls("EthereumTokenERC721", "EthereumNonFungibleToken")
ETHEREUM_FUNGIBLE_TOKEN = _cls("EthereumFungibleToken", "EthereumToken")
ETHEREUM_TOKEN_ERC20 = _cls("EthereumTokenERC20", "EthereumFungibleToken")
ETHEREUM_SEMI_FUNGIBLE_TOKEN = _cls("EthereumSemiFungibleToken", "EthereumToken")
ETHEREUM_TOKEN_ERC1155 = _cls("EthereumTokenERC1155", "EthereumSemiFungibleToken")
ETHEREUM_CUSTOM_TOKEN = _cls("EthereumCustomToken", "EthereumToken")
BURNED_ETHEREUM_TOKEN = _cls("BurnedEthereumToken", "EthereumToken")

# --- token features and activities ---------------------------------------------------

ENDURANT_FEATURE = _cls("EndurantFeature")
ETHEREUM_TOKEN_ENDURANT_FEATURES = _cls("EthereumTokenEndurantFeatures", "EndurantFeature")
ETHEREUM_WALLET_OWNER_ENDURANT_FEATURE = _cls(
    "EthereumWalletOwnerEndurantFeature", "EthereumTokenEndurantFeatures"
)
DEPRECATED_ETHEREUM_TOKEN_ENDURANT_FEATURE = _cls(
    "DeprecatedEthereumTokenEndurantFeature", "EthereumTokenEndurantFeatures"
)
ETHEREUM_TOKEN_FEATURE_MODIFICATION_ACTIVITY = _cls("EthereumTokenFeatureModificationActivity")
TRANSFER_ACTIVITY = _cls("TransferActivity")
DELEGATION_ACTIVITY = _cls("DelegationActivity")

# --- core object properties -----------------------------------------------------------

EMBEDS = _obj("embeds")
MINES = _obj("mines")
CONSTITUTES = _obj("constitutes")
DESCRIBES = _obj("describes")
ASSOCIATED_WITH = _obj("associatedWith")
REFERS_EXACTLY_TO = _obj("refersExactlyTo")
REFERS_AS_NEW_TO = _obj("refersAsNewTo")
HAS_ETHEREUM_TOKEN_ENDURANT_FEATURE = _obj("hasEthereumTokenEndurantFeature")
HAS_FEATURE_MODIFICATION_SOURCE = _obj("hasEthereumTokenFeatureModificationSource")
HAS_FEATURE_MODIFICATION_RESULT = _obj("hasEthereumTokenFeatureModificationResult")
IS_FEATURE_MODIFIED_IN = _obj("isEthereumTokenFeatureModifiedIn")
HAS_SPECIFICITY = _obj("hasSpecificity")

# --- core data properties ---------------------------------------------------------------

IS_IN_THE_WALLET_OF = _data("isInTheWalletOf")

# --- named individuals -------------------------------------------------------------------

MINT = _ind("mint")
BURN = _ind("burn")
TRANSFER = _ind("transfer")
DELEGATE = _ind("delegate")
OWNERSHIP = _ind("ownership")
EXIST = _ind("exist")
ANY = _ind("any")
BLOCKCHAIN_DIGITAL_TOKEN = _ind("blockchain_digital_token")

# =======================================================================================
# Working vocabulary: terms the artifact needs that the source model leaves
# implicit (activity roles, behavior structure, provenance anchors).
# =======================================================================================

DEACTIVATED_DELEGATION_ACTIVITY = _cls("DeactivatedDelegationActivity", "DelegationActivity")
BEHAVIOR = _cls("Behavior")
GOAL = _cls("Goal")
TASK = _cls("Task")
PLAN_EXECUTION = _cls("PlanExecution")

HAS_TRANSFER_SOURCE = _obj("hasTransferSource")
HAS_TRANSFER_DESTINATION = _obj("hasTransferDestination")
HAS_TRANSFER_OBJECT = _obj("hasTransferObject")
HAS_DELEGATION_SUBJECT = _obj("hasDelegationSubject")
HAS_DELEGATION_OBJECT = _obj("hasDelegationObject")
HAS_DELEGATION_GRANTOR = _obj("hasDelegationGrantor")
HAS_DELEGATION_PROPERTY = _obj("hasDelegationProperty")
HAS_BEHAVIOR = _obj("hasBehavior")
IMPLEMENTS_TEMPLATE = _obj("implementsTemplate")
HAS_GOAL = _obj("hasGoal")
HAS_TASK = _obj("hasTask")
HAS_TASK_OPERATOR = _obj("hasTaskOperator")
HAS_TASK_ARGUMENT = _obj("hasTaskArgument")
HAS_TASK_OBJECT = _obj("hasTaskObject")
HAS_TASK_INPUT = _obj("hasTaskInput")
HAS_TASK_OUTPUT = _obj("hasTaskOutput")
REQUIRES_INSTANCE_OF = _obj("requiresInstanceOf")
HAS_REQUIRED_PROPERTY_VALUE = _obj("hasRequiredPropertyValue")
ON_PROPERTY = _obj("onProperty")
HAS_VALUE = _obj("hasValue")
PERFORMED_BY = _obj("performedBy")
REALIZES_BEHAVIOR = _obj("realizesBehavior")
CAUSED_BY_TRANSACTION = _obj("causedByTransaction")
HAS_OUTPUT_ENTITY = _obj("hasOutputEntity")
HAS_INPUT_ENTITY = _obj("hasInputEntity")

HAS_ADDRESS = _data("hasAddress")
HAS_TOKEN_CONTRACT = _data("hasTokenContract")
HAS_TOKEN_ID = _data("hasTokenId")
HAS_TRANSACTION_HASH = _data("hasTransactionHash")
HAS_TIMESTAMP = _data("hasTimestamp")
AT_LOG_INDEX = _data("atLogIndex")
PARAMETER_INDEX = _data("parameterIndex")


def vocab_individual(name: str) -> Iri:
    """A fixed vocabulary-level individual (reference templates, the ERC721
    behavior template). Minted on demand; identity is the name."""
    return Iri(VOCAB_NS, name)


class Vocabulary:
    """Lookup surface over the built-in terms plus per-instance extensions.

    The built-in tables are shared and immutable; ``register_*`` only touches
    this instance, so extending one graph never leaks into another.
    """

    def __init__(self):
        self._ext_classes: dict[str, Iri] = {}
        self._ext_parents: dict[str, tuple[str, ...]] = {}
        self._ext_properties: dict[str, Iri] = {}
        self._ancestors: dict[str, frozenset[str]] = {}

    # -- registration ------------------------------------------------------

    def register_class(self, iri: Iri, parents: tuple[Iri, ...] = ()) -> None:
        for p in parents:
            if not self.is_class(p):
                raise ValueError(f"unknown parent class: {p.rendered}")
        self._ext_classes[iri.rendered] = iri
        self._ext_parents[iri.rendered] = tuple(self._class_key(p) for p in parents)
        self._ancestors.clear()

    def register_property(self, iri: Iri) -> None:
        self._ext_properties[iri.rendered] = iri

    # -- lookups -------------------------------------------------------------

    def is_class(self, iri: Iri) -> bool:
        return iri.local_name in _CLASSES and iri.namespace == VOCAB_NS or (
            iri.rendered in self._ext_classes
        )

    def is_property(self, iri: Iri) -> bool:
        if iri.namespace == VOCAB_NS and (
            iri.local_name in _OBJECT_PROPERTIES or iri.local_name in _DATA_PROPERTIES
        ):
            return True
        return iri.rendered in self._ext_properties

    def class_by_name(self, name: str) -> Iri:
        if name in _CLASSES:
            return _CLASSES[name]
        raise KeyError(name)

    def _parent_names(self, key: str) -> tuple[str, ...]:
        if key in self._ext_parents:
            return self._ext_parents[key]
        return _CLASS_PARENTS.get(key, ())

    def _class_key(self, iri: Iri) -> str:
        # built-ins are keyed by local name, extensions by rendered IRI
        if iri.namespace == VOCAB_NS and iri.local_name in _CLASSES:
            return iri.local_name
        return iri.rendered

    def _resolve_key(self, key: str) -> Iri:
        if key in _CLASSES:
            return _CLASSES[key]
        return self._ext_classes[key]

    def ancestors(self, cls: Iri) -> frozenset[Iri]:
        """The class itself plus every superclass reachable in the DAG."""
        key = self._class_key(cls)
        if key not in self._ancestors:
            seen: set[str] = set()
            stack = [key]
            while stack:
                current = stack.pop()
                if current in seen:
                    continue
                seen.add(current)
                stack.extend(self._parent_names(current))
            self._ancestors[key] = frozenset(seen)
        return frozenset(self._resolve_key(k) for k in self._ancestors[key])

    def descendants(self, cls: Iri) -> frozenset[Iri]:
        """The class itself plus every subclass (used for query expansion)."""
        target = self._class_key(cls)
        result = set()
        for key in list(_CLASSES) + list(self._ext_classes):
            candidate = self._resolve_key(key)
            if target in {self._class_key(a) for a in self.ancestors(candidate)}:
                result.add(candidate)
        return frozenset(result)

    def is_subclass(self, cls: Iri, ancestor: Iri) -> bool:
        return ancestor in self.ancestors(cls)

    def all_classes(self) -> tuple[Iri, ...]:
        builtin = tuple(_CLASSES.values())
        return builtin + tuple(self._ext_classes.values())


def _check_dag() -> None:
    # import-time sanity: the built-in hierarchy has no cycles
    state: dict[str, int] = {}

    def visit(name: str) -> None:
        if state.get(name) == 1:
            raise RuntimeError(f"class hierarchy cycle at {name}")
        if state.get(name) == 2:
            return
        state[name] = 1
        for parent in _CLASS_PARENTS[name]:
            visit(parent)
        state[name] = 2

    for cls_name in _CLASS_PARENTS:
        visit(cls_name)


_check_dag()
