"""Terms, IRI minting, vocabulary hierarchy, and the triple store."""

from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from chainsem.errors import InvalidName, UnknownVocabularyTerm
from chainsem.ontology import (
    DEFAULT_INSTANCE_NS,
    Iri,
    Literal,
    hex_bytes,
    integer,
    make_iri,
    text,
)
from chainsem.ontology import vocab as V
from chainsem.ontology.graph import Graph
from chainsem.ontology.terms import DT_TEXT
from chainsem.ontology.vocab import Vocabulary


class TestIri:
    def test_identity_is_rendered_form(self):
        assert Iri("urn:a:", "x") == Iri("urn:a:", "x")
        assert Iri("urn:a:", "x") != Iri("urn:a:", "y")
        assert hash(Iri("urn:a:", "x")) == hash(Iri("urn:a:", "x"))

    def test_from_string_splits_at_separator(self):
        iri = Iri.from_string("urn:chain-oasis:vocab#EthereumBlock")
        assert iri.namespace == "urn:chain-oasis:vocab#"
        assert iri.local_name == "EthereumBlock"
        assert iri.rendered == "urn:chain-oasis:vocab#EthereumBlock"

    def test_local_name_rejects_whitespace(self):
        with pytest.raises(ValueError):
            Iri("urn:a:", "has space")
        with pytest.raises(ValueError):
            Iri("urn:a:", "")


class TestLiterals:
    def test_declared_datatypes_only(self):
        with pytest.raises(ValueError):
            Literal("x", Iri("urn:other:", "notADatatype"))
        assert text("x").datatype == DT_TEXT

    def test_hex_normalizes_case(self):
        assert hex_bytes("0xAbCd").lexical == "0xabcd"
        with pytest.raises(ValueError):
            hex_bytes("abcd")
        with pytest.raises(ValueError):
            hex_bytes("0xabc")  # odd length


class TestMakeIri:
    def test_block_naming(self):
        assert (
            make_iri("block", ["10452395"]).rendered
            == DEFAULT_INSTANCE_NS + "block_node_10452395"
        )

    def test_transaction_naming(self):
        assert (
            make_iri("transaction", ["10452395", "1"]).rendered
            == DEFAULT_INSTANCE_NS + "block_node_10452395_tran_1"
        )

    def test_empty_components_rejected(self):
        with pytest.raises(InvalidName):
            make_iri("block", [])
        with pytest.raises(InvalidName):
            make_iri("transaction", ["5", ""])

    def test_shape_validation(self):
        with pytest.raises(InvalidName):
            make_iri("block", ["not-a-number"])
        with pytest.raises(InvalidName):
            make_iri("token", ["no-hex", "1"])
        with pytest.raises(InvalidName):
            make_iri("nope", ["1"])

    def test_deterministic(self):
        assert make_iri("token", ["0xabcd", "7"]) == make_iri("token", ["0xabcd", "7"])

    @given(
        st.lists(
            st.tuples(st.integers(0, 10**9), st.integers(0, 10**4)),
            min_size=2,
            max_size=20,
            unique=True,
        )
    )
    def test_distinct_components_distinct_iris(self, pairs):
        iris = {make_iri("transaction", [str(a), str(b)]).rendered for a, b in pairs}
        assert len(iris) == len(pairs)


SPEC_CLASSES = """
EthereumBlock BlockchainBlock EthereumTransaction BlockchainTransaction
EthereumNode BlockchainNode Agent System EthereumSystem
EthereumSmartContractCreation BlockchainSmartContractCreation
EthereumSmartContractInteraction BlockchainSmartContractInteraction
BlockchainSmartContractAgent EthereumSmartContractAccount
BlockchainSmartContractAccount BlockchainAccount EOA-EthereumAccount
EOA-BlockchainAccount EthereumERC721SmartContractAgent
NonFungibleBlockchainSmartContractAgent EthereumERC20SmartContractAgent
FungibleBlockchainSmartContractAgent EtherExchangeSmartContractAgent
CryptocurrencyExchangeBlockchainSmartContractAgent
GeneralPurposeBlockchainSmartContractAgent EthereumContractInteraction
SmartContractInteraction EtherExchangeSmartContractInteraction
CryptocurrencyExchangeBlockchainSmartContractInteraction Action
ReferenceTemplate EthereumToken EthereumNonFungibleToken EthereumTokenERC721
EthereumFungibleToken EthereumTokenERC20 EthereumSemiFungibleToken
EthereumTokenERC1155 EthereumCustomToken BurnedEthereumToken EndurantFeature
EthereumTokenEndurantFeatures EthereumWalletOwnerEndurantFeature
DeprecatedEthereumTokenEndurantFeature EthereumTokenFeatureModificationActivity
TransferActivity DelegationActivity
""".split()

SPEC_PROPERTIES = """
embeds mines constitutes describes associatedWith refersExactlyTo
refersAsNewTo hasEthereumTokenEndurantFeature isInTheWalletOf
hasEthereumTokenFeatureModificationSource hasEthereumTokenFeatureModificationResult
isEthereumTokenFeatureModifiedIn hasSpecificity
""".split()

SPEC_INDIVIDUALS = """
mint burn transfer delegate ownership exist any blockchain_digital_token
""".split()


class TestVocabularyHierarchy:
    def test_every_documented_term_exists(self):
        vocabulary = Vocabulary()
        for name in SPEC_CLASSES:
            assert vocabulary.is_class(Iri(V.VOCAB_NS, name)), name
        for name in SPEC_PROPERTIES:
            assert vocabulary.is_property(Iri(V.VOCAB_NS, name)), name
        from chainsem.ontology.vocab import _INDIVIDUALS

        for name in SPEC_INDIVIDUALS:
            assert name in _INDIVIDUALS, name

    def test_subclass_soundness_exhaustive(self):
        """Every asserted membership implies membership in all ancestors."""
        vocabulary = Vocabulary()
        graph = Graph(vocabulary)
        for i, cls in enumerate(vocabulary.all_classes()):
            entity = Iri(DEFAULT_INSTANCE_NS, f"probe_{i}")
            graph.assert_instance(entity, cls)
            for ancestor in vocabulary.ancestors(cls):
                assert graph.is_instance(entity, ancestor), (
                    f"{cls.local_name} instance should be a {ancestor.local_name}"
                )

    @pytest.mark.parametrize(
        "child,parent",
        [
            ("EthereumBlock", "BlockchainBlock"),
            ("EthereumTransaction", "BlockchainTransaction"),
            ("EthereumNode", "Agent"),
            ("EthereumTokenERC721", "EthereumNonFungibleToken"),
            ("EthereumTokenERC721", "EthereumToken"),
            ("EthereumTokenERC20", "EthereumFungibleToken"),
            ("EthereumTokenERC1155", "EthereumSemiFungibleToken"),
            ("EthereumERC721SmartContractAgent", "NonFungibleBlockchainSmartContractAgent"),
            ("EthereumERC721SmartContractAgent", "Agent"),
            ("EOA-EthereumAccount", "BlockchainAccount"),
            ("EthereumSmartContractAccount", "BlockchainAccount"),
            ("EtherExchangeSmartContractInteraction", "EthereumContractInteraction"),
            (
                "EtherExchangeSmartContractInteraction",
                "CryptocurrencyExchangeBlockchainSmartContractInteraction",
            ),
            ("EthereumWalletOwnerEndurantFeature", "EndurantFeature"),
            ("DeprecatedEthereumTokenEndurantFeature", "EthereumTokenEndurantFeatures"),
        ],
    )
    def test_expected_edges(self, child, parent):
        vocabulary = Vocabulary()
        assert vocabulary.is_subclass(
            vocabulary.class_by_name(child), vocabulary.class_by_name(parent)
        )

    def test_not_everything_is_related(self):
        vocabulary = Vocabulary()
        assert not vocabulary.is_subclass(V.ETHEREUM_TOKEN_ERC721, V.ETHEREUM_FUNGIBLE_TOKEN)
        assert not vocabulary.is_subclass(V.ETHEREUM_BLOCK, V.AGENT)

    def test_descendants(self):
        vocabulary = Vocabulary()
        descendants = {c.local_name for c in vocabulary.descendants(V.ETHEREUM_TOKEN)}
        assert "EthereumTokenERC721" in descendants
        assert "EthereumTokenERC20" in descendants
        assert "EthereumBlock" not in descendants

    def test_extension_registration(self):
        vocabulary = Vocabulary()
        ext = Iri("urn:myext:", "SpecialToken")
        vocabulary.register_class(ext, parents=(V.ETHEREUM_TOKEN,))
        assert vocabulary.is_subclass(ext, V.ETHEREUM_TOKEN)
        # the extension stays local to this vocabulary instance
        assert not Vocabulary().is_class(ext)


class TestGraph:
    def test_set_semantics(self):
        graph = Graph()
        x = Iri(DEFAULT_INSTANCE_NS, "x")
        assert graph.assert_instance(x, V.ETHEREUM_TOKEN_ERC721) is True
        count = len(graph)
        assert graph.assert_instance(x, V.ETHEREUM_TOKEN_ERC721) is False
        assert len(graph) == count

    def test_unknown_class_rejected(self):
        graph = Graph()
        with pytest.raises(UnknownVocabularyTerm):
            graph.assert_instance(Iri(DEFAULT_INSTANCE_NS, "x"), Iri("urn:a:", "NoSuchClass"))

    def test_unknown_predicate_rejected(self):
        graph = Graph()
        with pytest.raises(UnknownVocabularyTerm):
            graph.add(
                Iri(DEFAULT_INSTANCE_NS, "x"),
                Iri("urn:a:", "madeUpProperty"),
                Iri(DEFAULT_INSTANCE_NS, "y"),
            )

    def test_extension_predicate_allowed_after_registration(self):
        graph = Graph()
        prop = Iri("urn:myext:", "linksTo")
        graph.vocabulary.register_property(prop)
        assert graph.add(Iri(DEFAULT_INSTANCE_NS, "x"), prop, integer(1))

    def test_subclass_transitivity_example(self):
        graph = Graph()
        token = Iri(DEFAULT_INSTANCE_NS, "tokenX")
        graph.assert_instance(token, V.ETHEREUM_TOKEN_ERC721)
        assert graph.is_instance(token, V.ETHEREUM_TOKEN)

    def test_same_entity_reflexive(self):
        graph = Graph()
        x = Iri(DEFAULT_INSTANCE_NS, "x")
        assert graph.same_entity(x, x)

    def test_same_entity_transitive_closure(self):
        graph = Graph()
        a, b, c, d = (Iri(DEFAULT_INSTANCE_NS, n) for n in "abcd")
        graph.add_sameas(a, b)
        graph.add_sameas(b, c)
        assert graph.same_entity(a, c)
        assert graph.same_entity(c, a)  # symmetry
        assert not graph.same_entity(a, d)

    def test_lookups_are_sameas_aware(self):
        graph = Graph()
        a, b, obj = (Iri(DEFAULT_INSTANCE_NS, n) for n in ("a", "b", "obj"))
        graph.add(a, V.DESCRIBES, obj)
        graph.add_sameas(a, b)
        assert graph.objects(b, V.DESCRIBES) == [obj]
        assert graph.has(b, V.DESCRIBES, obj)
        graph.assert_instance(a, V.ETHEREUM_TOKEN_ERC721)
        assert graph.is_instance(b, V.ETHEREUM_TOKEN_ERC721)

    @given(
        st.lists(
            st.tuples(st.sampled_from("abcdefgh"), st.sampled_from("abcdefgh")),
            max_size=12,
        ),
        st.tuples(st.sampled_from("abcdefgh"), st.sampled_from("abcdefgh")),
    )
    def test_sameas_closure_is_equivalence(self, pairs, probe):
        graph = Graph()
        for x, y in pairs:
            graph.add_sameas(Iri(DEFAULT_INSTANCE_NS, x), Iri(DEFAULT_INSTANCE_NS, y))
        # independent oracle: reachability over the undirected pair graph
        neighbors: dict[str, set[str]] = {name: set() for name in "abcdefgh"}
        for x, y in pairs:
            neighbors[x].add(y)
            neighbors[y].add(x)
        x, y = probe
        frontier, reachable = {x}, {x}
        while frontier:
            frontier = {n for f in frontier for n in neighbors[f]} - reachable
            reachable |= frontier
        assert graph.same_entity(
            Iri(DEFAULT_INSTANCE_NS, x), Iri(DEFAULT_INSTANCE_NS, y)
        ) == (y in reachable)
