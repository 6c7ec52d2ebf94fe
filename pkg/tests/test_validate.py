"""Integrity validation: clean corpora pass, corrupted graphs are caught."""

from __future__ import annotations

import pytest

from chainsem import tokens
from chainsem.ontology import hex_bytes, make_iri, parse, serialize
from chainsem.ontology import vocab as V
from chainsem.validate import run_validation

C1 = "0x" + "c1" * 20


@pytest.mark.parametrize("name", ["creation", "lifecycle", "delegation", "standards"])
def test_clean_corpora_have_no_violations(name, request):
    graph, _, _ = request.getfixturevalue(f"{name}_mapped")
    assert run_validation(graph) == []


def test_validation_works_on_reloaded_graph(lifecycle_mapped):
    graph, _, _ = lifecycle_mapped
    reloaded = parse(serialize(graph, "turtle"), "turtle")
    assert run_validation(reloaded) == []


def _reload(graph):
    # mutate a copy, not the session-scoped fixture
    return parse(serialize(graph, "ntriples"), "ntriples")


def test_second_active_feature_is_caught(lifecycle_mapped):
    graph, _, _ = lifecycle_mapped
    corrupted = _reload(graph)
    token = make_iri("token", [C1, "2"])
    rogue = make_iri("feature", [token.local_name, "9"])
    corrupted.assert_instance(rogue, V.ETHEREUM_WALLET_OWNER_ENDURANT_FEATURE)
    corrupted.add(rogue, V.IS_IN_THE_WALLET_OF, hex_bytes("0x" + "99" * 20))
    corrupted.add(token, V.HAS_ETHEREUM_TOKEN_ENDURANT_FEATURE, rogue)
    rules = {v.rule for v in run_validation(corrupted)}
    assert "ownership-uniqueness" in rules
    assert "chain-integrity" in rules


def test_unwitnessed_modification_is_caught(lifecycle_mapped):
    graph, _, _ = lifecycle_mapped
    corrupted = _reload(graph)
    token = make_iri("token", [C1, "2"])
    old = tokens.active_owner_feature(corrupted, token)
    forged = make_iri("feature", [token.local_name, "1"])
    corrupted.assert_instance(forged, V.ETHEREUM_WALLET_OWNER_ENDURANT_FEATURE)
    corrupted.add(forged, V.IS_IN_THE_WALLET_OF, hex_bytes("0x" + "99" * 20))
    corrupted.add(token, V.HAS_ETHEREUM_TOKEN_ENDURANT_FEATURE, forged)
    corrupted.assert_instance(old, V.DEPRECATED_ETHEREUM_TOKEN_ENDURANT_FEATURE)
    corrupted.add(old, V.IS_FEATURE_MODIFIED_IN, forged)
    forged_mod = make_iri("modification", ["0x" + "77" * 32, "0"])
    corrupted.assert_instance(forged_mod, V.ETHEREUM_TOKEN_FEATURE_MODIFICATION_ACTIVITY)
    corrupted.add(forged_mod, V.HAS_FEATURE_MODIFICATION_SOURCE, old)
    corrupted.add(forged_mod, V.HAS_FEATURE_MODIFICATION_RESULT, forged)
    rules = {v.rule for v in run_validation(corrupted)}
    assert "transfer-witness" in rules


def test_burned_token_with_live_feature_is_caught(lifecycle_mapped):
    graph, _, _ = lifecycle_mapped
    corrupted = _reload(graph)
    token = make_iri("token", [C1, "3"])
    corrupted.assert_instance(token, V.BURNED_ETHEREUM_TOKEN)
    rules = {v.rule for v in run_validation(corrupted)}
    assert "ownership-uniqueness" in rules


def test_malformed_delegation_is_caught(lifecycle_mapped):
    graph, _, _ = lifecycle_mapped
    corrupted = _reload(graph)
    rogue = make_iri("activity", ["0x" + "88" * 32, "0"])
    corrupted.assert_instance(rogue, V.DELEGATION_ACTIVITY)
    rules = {v.rule for v in run_validation(corrupted)}
    assert "delegation-shape" in rules
