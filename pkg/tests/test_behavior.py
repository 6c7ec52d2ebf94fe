"""Template structure, reference matching semantics, conditionals, and
delegation-based authorization."""

from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from chainsem import tokens
from chainsem.behavior import (
    AsNew,
    Exact,
    MatchResult,
    ReferenceTemplateSpec,
    TaskDescription,
    build_erc721_template,
    evaluate_conditional,
    instantiate_for_agent,
    match_reference,
    match_task_request,
    authorize_operation,
)
from chainsem.errors import CategoryMismatch, IncompleteBindings, NotDelegable
from chainsem.ontology import DEFAULT_INSTANCE_NS, Iri, hex_bytes, make_iri
from chainsem.ontology import vocab as V
from chainsem.ontology.graph import Graph
from chainsem.ontology.vocab import vocab_individual

from conftest import fixture_path
from replay_oracle import replay

C1 = "0x" + "c1" * 20
C3 = "0x" + "c3" * 20
WALLETS = ["0x" + b * 20 for b in ("aa", "bb", "dd", "99")]


def _ind(name: str) -> Iri:
    return Iri(DEFAULT_INSTANCE_NS, name)


@pytest.fixture(scope="module")
def template():
    return build_erc721_template()


class TestTemplateFidelity:
    def test_six_tasks_one_per_function(self, template):
        names = [t.name for t in template.tasks()]
        assert names == ["mint", "transfer", "burn", "approve", "approval_for_all", "owner_of"]
        assert len(template.goals) == 6
        assert all(len(group) == 1 for _, group in template.goals)

    def test_mint_structure(self, template):
        mint = template.task("mint")
        assert mint.operator_action == Exact(V.MINT)
        assert mint.operator_argument == Exact(V.BLOCKCHAIN_DIGITAL_TOKEN)
        assert isinstance(mint.object, AsNew)
        assert mint.object.template.iri == vocab_individual("mint_ERC721_token")
        # recipient and outcome share the same reference template
        assert mint.output_parameters == (mint.object,)
        assert mint.input_parameters == ()

    def test_transfer_structure(self, template):
        transfer = template.task("transfer")
        assert transfer.operator_action == Exact(V.TRANSFER)
        assert len(transfer.input_parameters) == 3
        token_ref, source_ref, destination_ref = transfer.input_parameters
        assert token_ref.template.required_classes == {V.ETHEREUM_TOKEN_ERC721}
        assert source_ref.template.required_classes == {V.EOA_ETHEREUM_ACCOUNT}
        assert destination_ref.template.required_classes == {V.EOA_ETHEREUM_ACCOUNT}
        assert source_ref.template.iri == vocab_individual("transfer-2_ERC721_EOA-account")
        assert destination_ref.template.iri == vocab_individual("transfer-3_ERC721_EOA-account")
        assert transfer.output_parameters == ()

    def test_burn_structure(self, template):
        burn = template.task("burn")
        assert burn.operator_action == Exact(V.BURN)
        assert len(burn.input_parameters) == 1
        assert burn.output_parameters == ()

    def test_approve_structure(self, template):
        approve = template.task("approve")
        assert approve.operator_action == Exact(V.DELEGATE)
        assert approve.operator_argument == Exact(V.OWNERSHIP)
        assert len(approve.input_parameters) == 2
        account_ref, token_ref = approve.input_parameters
        assert account_ref.template.required_classes == {V.EOA_ETHEREUM_ACCOUNT}
        assert token_ref.template.required_classes == {V.ETHEREUM_TOKEN_ERC721}

    def test_approval_for_all_has_no_token_input(self, template):
        approval_for_all = template.task("approval_for_all")
        assert approval_for_all.operator_action == Exact(V.DELEGATE)
        assert approval_for_all.operator_argument == Exact(V.OWNERSHIP)
        assert len(approval_for_all.input_parameters) == 1
        (only,) = approval_for_all.input_parameters
        assert V.ETHEREUM_TOKEN_ERC721 not in only.template.required_classes
        assert only.template.required_classes == {V.EOA_ETHEREUM_ACCOUNT}

    def test_owner_of_structure(self, template):
        owner_of = template.task("owner_of")
        assert len(owner_of.input_parameters) == 1
        assert len(owner_of.output_parameters) == 1
        assert owner_of.input_parameters[0].template.required_classes == {
            V.ETHEREUM_TOKEN_ERC721
        }
        assert owner_of.output_parameters[0].template.required_classes == {
            V.EOA_ETHEREUM_ACCOUNT
        }

    def test_conditionals_cover_four_tasks(self, template):
        assert {c.task_name for c in template.conditionals} == {
            "transfer",
            "approve",
            "approval_for_all",
            "owner_of",
        }
        assert all(c.operator == V.EXIST for c in template.conditionals)


class TestMatchReference:
    def test_exact_identity(self):
        graph = Graph()
        assert match_reference(Exact(V.MINT), V.MINT, graph)

    def test_exact_through_sameas(self):
        graph = Graph()
        mint2 = _ind("mint2")
        assert not match_reference(Exact(V.MINT), mint2, graph)
        graph.add_sameas(V.MINT, mint2)
        assert match_reference(Exact(V.MINT), mint2, graph)

    def test_asnew_class_membership(self, template):
        graph = Graph()
        token = _ind("tokenX")
        graph.assert_instance(token, V.ETHEREUM_TOKEN_ERC721)
        mint_ref = template.task("mint").object
        assert match_reference(mint_ref, token, graph)

    def test_asnew_rejects_wrong_class(self, template):
        graph = Graph()
        erc20 = _ind("fungible")
        graph.assert_instance(erc20, V.ETHEREUM_TOKEN_ERC20)
        assert not match_reference(template.task("mint").object, erc20, graph)

    def test_asnew_property_values(self):
        graph = Graph()
        token = _ind("tokenX")
        graph.assert_instance(token, V.ETHEREUM_TOKEN_ERC721)
        graph.add(token, V.HAS_TOKEN_ID, hex_bytes("0x07"))
        spec = ReferenceTemplateSpec(
            _ind("wants_id_seven"),
            frozenset({V.ETHEREUM_TOKEN_ERC721}),
            frozenset({(V.HAS_TOKEN_ID, hex_bytes("0x07"))}),
        )
        assert match_reference(AsNew(spec), token, graph)
        spec_other = ReferenceTemplateSpec(
            _ind("wants_id_eight"),
            frozenset({V.ETHEREUM_TOKEN_ERC721}),
            frozenset({(V.HAS_TOKEN_ID, hex_bytes("0x08"))}),
        )
        assert not match_reference(AsNew(spec_other), token, graph)

    @given(st.sets(st.sampled_from("abcdef"), max_size=4))
    def test_sameas_monotonicity(self, aliases):
        """Adding sameAs facts can only create Exact matches, never break them."""
        base = Graph()
        candidate = _ind("candidate")
        target = _ind("target")
        before = match_reference(Exact(target), candidate, base)
        for name in aliases:
            base.add_sameas(_ind(name), candidate if name < "d" else target)
        after = match_reference(Exact(target), candidate, base)
        assert after or not before


_CLASS_POOL = [
    V.ETHEREUM_TOKEN,
    V.ETHEREUM_NON_FUNGIBLE_TOKEN,
    V.ETHEREUM_TOKEN_ERC721,
    V.ETHEREUM_FUNGIBLE_TOKEN,
    V.ETHEREUM_TOKEN_ERC20,
    V.EOA_ETHEREUM_ACCOUNT,
    V.TRANSFER_ACTIVITY,
]
_PROPERTY_POOL = [
    (V.HAS_TOKEN_ID, hex_bytes("0x01")),
    (V.HAS_TOKEN_ID, hex_bytes("0x02")),
    (V.HAS_ADDRESS, hex_bytes("0xaa")),
    (V.HAS_ADDRESS, hex_bytes("0xbb")),
]


@settings(max_examples=1000, deadline=None)
@given(
    base_classes=st.sets(st.sampled_from(range(len(_CLASS_POOL))), max_size=3),
    extra_classes=st.sets(st.sampled_from(range(len(_CLASS_POOL))), max_size=2),
    base_properties=st.sets(st.sampled_from(range(len(_PROPERTY_POOL))), max_size=2),
    extra_properties=st.sets(st.sampled_from(range(len(_PROPERTY_POOL))), max_size=2),
    candidate_classes=st.sets(st.sampled_from(range(len(_CLASS_POOL))), max_size=4),
    candidate_properties=st.sets(st.sampled_from(range(len(_PROPERTY_POOL))), max_size=3),
)
def test_asnew_subsumption_property(
    base_classes, extra_classes, base_properties, extra_properties,
    candidate_classes, candidate_properties,
):
    """If one template's constraints contain another's, every candidate the
    stronger template admits is admitted by the weaker one."""
    if not base_classes and not base_properties:
        base_classes = {0}
    weaker = ReferenceTemplateSpec(
        _ind("weaker"),
        frozenset(_CLASS_POOL[i] for i in base_classes),
        frozenset(_PROPERTY_POOL[i] for i in base_properties),
    )
    stronger = ReferenceTemplateSpec(
        _ind("stronger"),
        frozenset(_CLASS_POOL[i] for i in base_classes | extra_classes),
        frozenset(_PROPERTY_POOL[i] for i in base_properties | extra_properties),
    )
    graph = Graph()
    candidate = _ind("candidate")
    for i in candidate_classes:
        graph.assert_instance(candidate, _CLASS_POOL[i])
    for i in candidate_properties:
        graph.add(candidate, *_PROPERTY_POOL[i])
    if match_reference(AsNew(stronger), candidate, graph):
        assert match_reference(AsNew(weaker), candidate, graph)


class TestTaskMatching:
    def _mint_request(self):
        wanted = ReferenceTemplateSpec(
            _ind("wanted_token"), frozenset({V.ETHEREUM_TOKEN_ERC721})
        )
        return TaskDescription(
            name="request",
            operator_action=Exact(V.MINT),
            operator_argument=Exact(V.BLOCKCHAIN_DIGITAL_TOKEN),
            object=AsNew(wanted),
            output_parameters=(AsNew(wanted),),
        )

    def test_mint_request_matches_mint_task_only(self, template):
        graph = Graph()
        request = self._mint_request()
        matched = [t.name for t in template.tasks()
                   if match_task_request(request, t, graph).matched]
        assert matched == ["mint"]

    def test_match_produces_total_bindings(self, template):
        graph = Graph()
        result = match_task_request(self._mint_request(), template.task("mint"), graph)
        assert result.matched
        assert result.bindings[("operator", 0)] == V.MINT
        assert result.bindings[("argument", 0)] == V.BLOCKCHAIN_DIGITAL_TOKEN
        assert result.bindings[("output", 0)] == vocab_individual("mint_ERC721_token")

    def test_wrong_operator_no_match(self, template):
        graph = Graph()
        request = TaskDescription(
            name="request",
            operator_action=Exact(V.BURN),
            operator_argument=Exact(V.BLOCKCHAIN_DIGITAL_TOKEN),
            object=AsNew(ReferenceTemplateSpec(
                _ind("t"), frozenset({V.ETHEREUM_TOKEN_ERC721})
            )),
            output_parameters=(AsNew(ReferenceTemplateSpec(
                _ind("t"), frozenset({V.ETHEREUM_TOKEN_ERC721})
            )),),
        )
        assert not match_task_request(request, template.task("mint"), graph).matched

    def test_arity_mismatch_reported(self, template):
        graph = Graph()
        eoa = ReferenceTemplateSpec(_ind("w"), frozenset({V.EOA_ETHEREUM_ACCOUNT}))
        token = ReferenceTemplateSpec(_ind("t"), frozenset({V.ETHEREUM_TOKEN_ERC721}))
        request = TaskDescription(
            name="request",
            operator_action=Exact(V.TRANSFER),
            operator_argument=Exact(V.BLOCKCHAIN_DIGITAL_TOKEN),
            input_parameters=(AsNew(token), AsNew(eoa)),  # one wallet missing
        )
        result = match_task_request(request, template.task("transfer"), graph)
        assert result == MatchResult(False, bindings={}, reason="ArityMismatch")

    def test_general_request_matches_specific_offer(self, template):
        # asking for any token: the 721-specific template still satisfies it
        graph = Graph()
        any_token = ReferenceTemplateSpec(_ind("any_token"),
                                          frozenset({V.ETHEREUM_TOKEN}))
        request = TaskDescription(
            name="request",
            operator_action=Exact(V.MINT),
            operator_argument=Exact(V.BLOCKCHAIN_DIGITAL_TOKEN),
            object=AsNew(any_token),
            output_parameters=(AsNew(any_token),),
        )
        assert match_task_request(request, template.task("mint"), graph).matched

    def test_exact_request_against_template_offer(self, template):
        graph = Graph()
        concrete = _ind("token_concrete")
        graph.assert_instance(concrete, V.ETHEREUM_TOKEN_ERC721)
        request = TaskDescription(
            name="request",
            operator_action=Exact(V.MINT),
            operator_argument=Exact(V.BLOCKCHAIN_DIGITAL_TOKEN),
            object=Exact(concrete),
            output_parameters=(Exact(concrete),),
        )
        assert match_task_request(request, template.task("mint"), graph).matched


class TestConditionals:
    def _bindings(self, graph, ctx, source, destination, token_iri):
        accounts = {}
        for address in (source, destination):
            hits = graph.subjects(V.HAS_ADDRESS, hex_bytes(address))
            accounts[address] = hits[0]
        return {
            ("input", 0): token_iri,
            ("input", 1): accounts[source],
            ("input", 2): accounts[destination],
        }

    def test_transfer_conditional_on_recorded_transfers(self, lifecycle_mapped, template):
        graph, ctx, _ = lifecycle_mapped
        conditional = template.conditional("transfer")
        oracle = replay(fixture_path("lifecycle"))
        assert oracle.transfer_events
        for source, destination, (contract, token_id) in oracle.transfer_events:
            token_iri = make_iri("token", [contract, str(token_id)])
            bindings = self._bindings(graph, ctx, source, destination, token_iri)
            holds, witness = evaluate_conditional(conditional, bindings, graph)
            assert holds and witness is not None

    def test_transfer_conditional_direction_matters(self, lifecycle_mapped, template):
        graph, ctx, _ = lifecycle_mapped
        conditional = template.conditional("transfer")
        source, destination, (contract, token_id) = replay(
            fixture_path("lifecycle")
        ).transfer_events[0]
        token_iri = make_iri("token", [contract, str(token_id)])
        bindings = self._bindings(graph, ctx, destination, source, token_iri)
        holds, _ = evaluate_conditional(conditional, bindings, graph)
        assert not holds

    def test_incomplete_bindings(self, lifecycle_mapped, template):
        graph, _, _ = lifecycle_mapped
        with pytest.raises(IncompleteBindings):
            evaluate_conditional(template.conditional("transfer"), {}, graph)

    def test_approve_conditional(self, lifecycle_mapped, template):
        graph, ctx, _ = lifecycle_mapped
        conditional = template.conditional("approve")
        operator = "0x" + "dd" * 20
        operator_account = graph.subjects(V.HAS_ADDRESS, hex_bytes(operator))[0]
        token2 = make_iri("token", [C1, "2"])
        holds, _ = evaluate_conditional(
            conditional, {("input", 0): operator_account, ("input", 1): token2}, graph
        )
        assert holds
        token3 = make_iri("token", [C1, "3"])
        holds, _ = evaluate_conditional(
            conditional, {("input", 0): operator_account, ("input", 1): token3}, graph
        )
        assert not holds

    def test_approval_for_all_conditional(self, lifecycle_mapped, template):
        graph, ctx, _ = lifecycle_mapped
        conditional = template.conditional("approval_for_all")
        operator_account = graph.subjects(
            V.HAS_ADDRESS, hex_bytes("0x" + "dd" * 20)
        )[0]
        holds, witness = evaluate_conditional(
            conditional, {("input", 0): operator_account}, graph
        )
        assert holds
        assert graph.has(witness, V.HAS_SPECIFICITY, V.ANY)
        stranger = graph.subjects(V.HAS_ADDRESS, hex_bytes("0x" + "99" * 20))
        if stranger:
            holds, _ = evaluate_conditional(
                conditional, {("input", 0): stranger[0]}, graph
            )
            assert not holds

    def test_revoked_approval_for_all_no_longer_holds(self, delegation_mapped, template):
        graph, ctx, _ = delegation_mapped
        conditional = template.conditional("approval_for_all")
        operator_account = graph.subjects(V.HAS_ADDRESS, hex_bytes("0x" + "55" * 20))[0]
        holds, _ = evaluate_conditional(
            conditional, {("input", 0): operator_account}, graph
        )
        assert not holds  # granted, then revoked

    def test_owner_of_conditional(self, lifecycle_mapped, template):
        graph, ctx, _ = lifecycle_mapped
        conditional = template.conditional("owner_of")
        token2 = make_iri("token", [C1, "2"])
        owner = tokens.current_owner(graph, token2)
        for wallet in WALLETS:
            hits = graph.subjects(V.HAS_ADDRESS, hex_bytes(wallet))
            if not hits:
                continue
            holds, _ = evaluate_conditional(
                conditional, {("input", 0): token2, ("output", 0): hits[0]}, graph
            )
            assert holds == (wallet == owner)


class TestAuthorization:
    @pytest.mark.parametrize("name,contract", [("lifecycle", C1), ("delegation", C3)])
    def test_agrees_with_oracle_on_all_pairs(self, name, contract, request):
        mapped = request.getfixturevalue(f"{name}_mapped")
        graph, ctx, _ = mapped
        oracle = replay(fixture_path(name))
        operators = sorted(
            {a for a, _, _ in oracle.transfer_events}
            | set(oracle.owners.values())
            | {op for ops in oracle.operator_approvals.values() for op in ops}
            | set(oracle.approvals.values())
            | set(WALLETS)
        )
        keys = sorted(set(oracle.owners) | oracle.burned)
        checked = 0
        for key in keys:
            token_iri = make_iri("token", [key[0], str(key[1])])
            for operator in operators:
                for action in (V.TRANSFER, V.BURN):
                    assert authorize_operation(graph, operator, action, token_iri) == (
                        oracle.authorized(operator, key)
                    ), (operator, key, action)
                    checked += 1
        assert checked >= 16

    def test_owner_always_authorized(self, lifecycle_mapped):
        graph, _, _ = lifecycle_mapped
        token2 = make_iri("token", [C1, "2"])
        owner = tokens.current_owner(graph, token2)
        assert authorize_operation(graph, owner, V.TRANSFER, token2)

    def test_single_token_approval_does_not_leak(self, delegation_mapped):
        graph, _, _ = delegation_mapped
        # r held an approval for token 10 only, and it was cleared by transfer
        r = "0x" + "44" * 20
        assert not authorize_operation(graph, r, V.TRANSFER, make_iri("token", [C3, "10"]))
        assert not authorize_operation(graph, r, V.TRANSFER, make_iri("token", [C3, "11"]))

    def test_burned_token_is_never_authorized(self, lifecycle_mapped):
        graph, _, _ = lifecycle_mapped
        token1 = make_iri("token", [C1, "1"])
        for wallet in WALLETS:
            assert not authorize_operation(graph, wallet, V.BURN, token1)

    def test_non_delegable_action(self, lifecycle_mapped):
        graph, _, _ = lifecycle_mapped
        with pytest.raises(NotDelegable):
            authorize_operation(graph, WALLETS[0], V.MINT, make_iri("token", [C1, "2"]))


class TestInstantiation:
    def test_requires_erc721_agent(self, template):
        graph = Graph()
        agent = _ind("plain_agent")
        graph.assert_instance(agent, V.GENERAL_PURPOSE_BLOCKCHAIN_SMART_CONTRACT_AGENT)
        with pytest.raises(CategoryMismatch):
            instantiate_for_agent(template, agent, graph)

    def test_idempotent_per_agent(self, template):
        graph = Graph()
        agent = _ind("nft_agent")
        graph.assert_instance(agent, V.ETHEREUM_ERC721_SMART_CONTRACT_AGENT)
        behavior_iri = instantiate_for_agent(template, agent, graph)
        count = len(graph)
        assert instantiate_for_agent(template, agent, graph) == behavior_iri
        assert len(graph) == count

    def test_behavior_links_agent_to_template(self, lifecycle_mapped, template):
        graph, ctx, _ = lifecycle_mapped
        agent = ctx.agent_registry[C1]
        behaviors = [b for b in graph.objects(agent, V.HAS_BEHAVIOR)]
        assert len(behaviors) == 1
        assert graph.has(behaviors[0], V.IMPLEMENTS_TEMPLATE, template.template_iri)
        # recorded plan executions tie back to the behavior
        plans = graph.subjects(V.REALIZES_BEHAVIOR, behaviors[0])
        assert plans
