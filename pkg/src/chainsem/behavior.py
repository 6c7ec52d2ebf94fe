"""Behavior templates for the six ERC721 functions, reference matching, and
conditional evaluation.

Two matching modes exist for every constituting element of a behavior:
an exact reference matches only the same entity (identity or sameAs), while
a template reference matches any entity carrying the required class
memberships and property values. Conditionals are closed-world existence
checks over the materialized graph; the indexed chain is a complete record,
so absence of a witness is meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from . import tokens
from .errors import CategoryMismatch, IncompleteBindings, NotDelegable
from .ontology import Iri, Term, hex_bytes, integer, make_iri
from .ontology import vocab as V
from .ontology.graph import Graph
from .ontology.vocab import vocab_individual

# parameter slots: ("operator", 0), ("argument", 0), ("object", 0),
# ("input", i), ("output", i)
Slot = tuple[str, int]


@dataclass(frozen=True)
class ReferenceTemplateSpec:
    """Feature description an entity must satisfy to match an AsNew reference."""

    iri: Iri
    required_classes: frozenset[Iri]
    required_property_values: frozenset[tuple[Iri, Term]] = frozenset()

    def __post_init__(self):
        if not self.required_classes and not self.required_property_values:
            raise ValueError("reference template needs at least one constraint")


@dataclass(frozen=True)
class Exact:
    target: Iri


@dataclass(frozen=True)
class AsNew:
    template: ReferenceTemplateSpec


Reference = Union[Exact, AsNew]


@dataclass(frozen=True)
class TaskDescription:
    name: str
    operator_action: Reference
    operator_argument: Reference
    object: Reference | None = None
    input_parameters: tuple[Reference, ...] = ()
    output_parameters: tuple[Reference, ...] = ()


@dataclass(frozen=True)
class Param:
    slot: Slot
    as_address: bool = False  # compare through the account's address literal


@dataclass(frozen=True)
class Const:
    term: Term


ConstraintValue = Union[Param, Const]


@dataclass(frozen=True)
class RoleConstraint:
    property: Iri
    value: ConstraintValue
    reverse: bool = False  # (value, property, candidate) instead of (candidate, property, value)


@dataclass(frozen=True)
class ExistencePattern:
    entity_class: Iri
    constraints: tuple[RoleConstraint, ...]
    excluded_classes: tuple[Iri, ...] = ()


@dataclass(frozen=True)
class Conditional:
    task_name: str
    pattern: ExistencePattern
    operator: Iri = V.EXIST
    timing: str = "after"


@dataclass(frozen=True)
class BehaviorTemplate:
    template_iri: Iri
    goals: tuple[tuple[Iri, tuple[TaskDescription, ...]], ...]
    conditionals: tuple[Conditional, ...]

    def tasks(self) -> list[TaskDescription]:
        return [t for _, group in self.goals for t in group]

    def task(self, name: str) -> TaskDescription:
        for t in self.tasks():
            if t.name == name:
                return t
        raise KeyError(name)

    def conditional(self, task_name: str) -> Conditional:
        for c in self.conditionals:
            if c.task_name == task_name:
                return c
        raise KeyError(task_name)


@dataclass
class MatchResult:
    matched: bool
    bindings: dict[Slot, Iri] = field(default_factory=dict)
    reason: str | None = None


# --- the ERC721 template ------------------------------------------------------------

TEMPLATE_IRI = vocab_individual("ethereum_ERC721_smart_contract_behavior_template")


def _spec(name: str, *classes: Iri) -> ReferenceTemplateSpec:
    return ReferenceTemplateSpec(vocab_individual(name), frozenset(classes))


def build_erc721_template() -> BehaviorTemplate:
    """The shared behavior template for token-standard contract agents:
    one goal and one task per standard function."""
    token_cls = V.ETHEREUM_TOKEN_ERC721
    eoa_cls = V.EOA_ETHEREUM_ACCOUNT

    mint_token = _spec("mint_ERC721_token", token_cls)
    transfer_token = _spec("transfer-1_ERC721_token", token_cls)
    transfer_source = _spec("transfer-2_ERC721_EOA-account", eoa_cls)
    transfer_destination = _spec("transfer-3_ERC721_EOA-account", eoa_cls)
    burn_token = _spec("burn-1_ERC721_token", token_cls)
    approve_account = _spec("approve-1_ERC721_EOA-account", eoa_cls)
    approve_token = _spec("approve-2_ERC721_token", token_cls)
    approve_all_account = _spec("approve_all-1_ERC721_EOA-account", eoa_cls)
    owner_of_token = _spec("owner_of-1_ERC721_token", token_cls)
    owner_of_wallet = _spec("owner_of-2_ERC721_EOA-account", eoa_cls)

    tasks = (
        TaskDescription(
            name="mint",
            operator_action=Exact(V.MINT),
            operator_argument=Exact(V.BLOCKCHAIN_DIGITAL_TOKEN),
            object=AsNew(mint_token),
            output_parameters=(AsNew(mint_token),),
        ),
        TaskDescription(
            name="transfer",
            operator_action=Exact(V.TRANSFER),
            operator_argument=Exact(V.BLOCKCHAIN_DIGITAL_TOKEN),
            input_parameters=(
                AsNew(transfer_token),
                AsNew(transfer_source),
                AsNew(transfer_destination),
            ),
        ),
        TaskDescription(
            name="burn",
            operator_action=Exact(V.BURN),
            operator_argument=Exact(V.BLOCKCHAIN_DIGITAL_TOKEN),
            object=AsNew(burn_token),
            input_parameters=(AsNew(burn_token),),
        ),
        TaskDescription(
            name="approve",
            operator_action=Exact(V.DELEGATE),
            operator_argument=Exact(V.OWNERSHIP),
            input_parameters=(AsNew(approve_account), AsNew(approve_token)),
        ),
        TaskDescription(
            name="approval_for_all",
            operator_action=Exact(V.DELEGATE),
            operator_argument=Exact(V.OWNERSHIP),
            input_parameters=(AsNew(approve_all_account),),
        ),
        TaskDescription(
            name="owner_of",
            operator_action=Exact(V.OWNERSHIP),
            operator_argument=Exact(V.BLOCKCHAIN_DIGITAL_TOKEN),
            object=AsNew(owner_of_token),
            input_parameters=(AsNew(owner_of_token),),
            output_parameters=(AsNew(owner_of_wallet),),
        ),
    )

    conditionals = (
        # a witnessing transfer activity must exist: source is the first
        # wallet parameter, destination the second, object the token
        Conditional(
            task_name="transfer",
            pattern=ExistencePattern(
                entity_class=V.TRANSFER_ACTIVITY,
                constraints=(
                    RoleConstraint(V.HAS_TRANSFER_SOURCE, Param(("input", 1))),
                    RoleConstraint(V.HAS_TRANSFER_DESTINATION, Param(("input", 2))),
                    RoleConstraint(V.HAS_TRANSFER_OBJECT, Param(("input", 0))),
                ),
            ),
        ),
        # an active delegation for the granted token, restricted to the burn
        # and transfer operations
        Conditional(
            task_name="approve",
            pattern=ExistencePattern(
                entity_class=V.DELEGATION_ACTIVITY,
                constraints=(
                    RoleConstraint(V.HAS_DELEGATION_SUBJECT, Param(("input", 0))),
                    RoleConstraint(V.HAS_DELEGATION_OBJECT, Param(("input", 1))),
                    RoleConstraint(V.HAS_DELEGATION_PROPERTY, Const(V.BURN)),
                    RoleConstraint(V.HAS_DELEGATION_PROPERTY, Const(V.TRANSFER)),
                ),
                excluded_classes=(V.DEACTIVATED_DELEGATION_ACTIVITY,),
            ),
        ),
        # same, but the delegation covers every owned token
        Conditional(
            task_name="approval_for_all",
            pattern=ExistencePattern(
                entity_class=V.DELEGATION_ACTIVITY,
                constraints=(
                    RoleConstraint(V.HAS_DELEGATION_SUBJECT, Param(("input", 0))),
                    RoleConstraint(V.HAS_SPECIFICITY, Const(V.ANY)),
                    RoleConstraint(V.HAS_DELEGATION_PROPERTY, Const(V.BURN)),
                    RoleConstraint(V.HAS_DELEGATION_PROPERTY, Const(V.TRANSFER)),
                ),
                excluded_classes=(V.DEACTIVATED_DELEGATION_ACTIVITY,),
            ),
        ),
        # the retrieved wallet is the holder of the token's one live owner feature
        Conditional(
            task_name="owner_of",
            pattern=ExistencePattern(
                entity_class=V.ETHEREUM_WALLET_OWNER_ENDURANT_FEATURE,
                constraints=(
                    RoleConstraint(
                        V.HAS_ETHEREUM_TOKEN_ENDURANT_FEATURE, Param(("input", 0)), reverse=True
                    ),
                    RoleConstraint(
                        V.IS_IN_THE_WALLET_OF, Param(("output", 0), as_address=True)
                    ),
                ),
                excluded_classes=(V.DEPRECATED_ETHEREUM_TOKEN_ENDURANT_FEATURE,),
            ),
        ),
    )

    goals = tuple(
        (vocab_individual(f"ERC721_{task.name}_goal"), (task,)) for task in tasks
    )
    return BehaviorTemplate(TEMPLATE_IRI, goals, conditionals)


# --- matching -------------------------------------------------------------------------


def match_reference(ref: Reference, candidate: Iri, graph: Graph) -> bool:
    """Does a concrete entity satisfy a reference?"""
    if isinstance(ref, Exact):
        return graph.same_entity(ref.target, candidate)
    spec = ref.template
    for cls in spec.required_classes:
        if not graph.is_instance(candidate, cls):
            return False
    for prop, value in spec.required_property_values:
        if not graph.has(candidate, prop, value):
            return False
    return True


def _template_subsumes(offered: ReferenceTemplateSpec, requested: ReferenceTemplateSpec,
                       graph: Graph) -> bool:
    # every entity the offered template admits must satisfy the request:
    # the offered constraints have to be at least as strong
    for want in requested.required_classes:
        if not any(
            graph.vocabulary.is_subclass(have, want) for have in offered.required_classes
        ):
            return False
    return requested.required_property_values <= offered.required_property_values


def _compatible(request_ref: Reference, offered_ref: Reference, graph: Graph) -> bool:
    if isinstance(request_ref, Exact) and isinstance(offered_ref, Exact):
        return graph.same_entity(request_ref.target, offered_ref.target)
    if isinstance(request_ref, Exact):
        return match_reference(offered_ref, request_ref.target, graph)
    if isinstance(offered_ref, Exact):
        return match_reference(request_ref, offered_ref.target, graph)
    return _template_subsumes(offered_ref.template, request_ref.template, graph)


def _binding_target(ref: Reference) -> Iri:
    return ref.target if isinstance(ref, Exact) else ref.template.iri


def match_task_request(request: TaskDescription, offered: TaskDescription,
                       graph: Graph) -> MatchResult:
    """Position-sensitive compatibility of a requested task with an offered one."""
    if len(request.input_parameters) != len(offered.input_parameters):
        return MatchResult(False, reason="ArityMismatch")
    if len(request.output_parameters) != len(offered.output_parameters):
        return MatchResult(False, reason="ArityMismatch")
    if request.object is not None and offered.object is None:
        return MatchResult(False, reason="ArityMismatch")

    bindings: dict[Slot, Iri] = {}
    pairs: list[tuple[Slot, Reference, Reference]] = [
        (("operator", 0), request.operator_action, offered.operator_action),
        (("argument", 0), request.operator_argument, offered.operator_argument),
    ]
    if request.object is not None:
        pairs.append((("object", 0), request.object, offered.object))
    pairs.extend(
        (("input", i), r, o)
        for i, (r, o) in enumerate(zip(request.input_parameters, offered.input_parameters))
    )
    pairs.extend(
        (("output", i), r, o)
        for i, (r, o) in enumerate(zip(request.output_parameters, offered.output_parameters))
    )
    for slot, request_ref, offered_ref in pairs:
        if not _compatible(request_ref, offered_ref, graph):
            return MatchResult(False)
        bindings[slot] = _binding_target(offered_ref)
    return MatchResult(True, bindings=bindings)


# --- conditional evaluation ----------------------------------------------------------------


def _resolve(value: ConstraintValue, bindings: dict[Slot, Iri], graph: Graph) -> Term:
    if isinstance(value, Const):
        return value.term
    if value.slot not in bindings:
        raise IncompleteBindings(f"no binding for parameter {value.slot}")
    entity = bindings[value.slot]
    if value.as_address:
        address = tokens.account_address(graph, entity)
        if address is None:
            raise IncompleteBindings(f"{entity.rendered} carries no address")
        return hex_bytes(address)
    return entity


def evaluate_conditional(cond: Conditional, bindings: dict[Slot, Iri],
                         graph: Graph) -> tuple[bool, Iri | None]:
    """Existence check for the conditional's pattern; returns the witness."""
    pattern = cond.pattern
    resolved = [
        (c.property, _resolve(c.value, bindings, graph), c.reverse) for c in pattern.constraints
    ]
    for candidate in graph.instances_of(pattern.entity_class):
        if any(graph.is_instance(candidate, ex) for ex in pattern.excluded_classes):
            continue
        ok = True
        for prop, value, reverse in resolved:
            if reverse:
                if not (isinstance(value, Iri) and graph.has(value, prop, candidate)):
                    ok = False
                    break
            elif not graph.has(candidate, prop, value):
                ok = False
                break
        if ok:
            return True, candidate
    return False, None


# --- authorization ---------------------------------------------------------------------------


def authorize_operation(graph: Graph, operator: str, action: Iri, token: Iri) -> bool:
    """May this wallet perform the action on the token? True for the owner
    and for operators covered by an active delegation (token-specific or
    owner-wide)."""
    if action not in (V.BURN, V.TRANSFER):
        raise NotDelegable(f"{action.rendered} cannot be delegated")
    operator = operator.lower()
    owner = tokens.current_owner(graph, token)
    if owner is None:
        return False  # burned or never minted
    if owner == operator:
        return True
    for delegation in graph.instances_of(V.DELEGATION_ACTIVITY):
        if graph.is_instance(delegation, V.DEACTIVATED_DELEGATION_ACTIVITY):
            continue
        subjects = [
            s for s in graph.objects(delegation, V.HAS_DELEGATION_SUBJECT) if isinstance(s, Iri)
        ]
        if not any(tokens.account_address(graph, s) == operator for s in subjects):
            continue
        if not graph.has(delegation, V.HAS_DELEGATION_PROPERTY, action):
            continue
        if any(
            isinstance(o, Iri) and graph.same_entity(o, token)
            for o in graph.objects(delegation, V.HAS_DELEGATION_OBJECT)
        ):
            return True
        if graph.has(delegation, V.HAS_SPECIFICITY, V.ANY):
            grantors = [
                g
                for g in graph.objects(delegation, V.HAS_DELEGATION_GRANTOR)
                if isinstance(g, Iri)
            ]
            if any(tokens.account_address(graph, g) == owner for g in grantors):
                return True
    return False


# --- instantiation and export --------------------------------------------------------------


def _export_reference(graph: Graph, task_iri: Iri, prop: Iri, node_name: str,
                      ref: Reference, index: int | None = None) -> None:
    node = vocab_individual(node_name)
    graph.add(task_iri, prop, node)
    if index is not None:
        graph.add(node, V.PARAMETER_INDEX, integer(index))
    if isinstance(ref, Exact):
        graph.add(node, V.REFERS_EXACTLY_TO, ref.target)
        if ref.target in (V.MINT, V.BURN, V.TRANSFER, V.DELEGATE):
            graph.assert_instance(ref.target, V.ACTION)
        return
    spec = ref.template
    graph.add(node, V.REFERS_AS_NEW_TO, spec.iri)
    graph.assert_instance(spec.iri, V.REFERENCE_TEMPLATE)
    for cls in sorted(spec.required_classes):
        graph.add(spec.iri, V.REQUIRES_INSTANCE_OF, cls)
    for j, (prop_iri, value) in enumerate(sorted(spec.required_property_values,
                                                 key=lambda pv: pv[0].rendered)):
        constraint = vocab_individual(f"{spec.iri.local_name}_constraint_{j}")
        graph.add(spec.iri, V.HAS_REQUIRED_PROPERTY_VALUE, constraint)
        graph.add(constraint, V.ON_PROPERTY, prop_iri)
        graph.add(constraint, V.HAS_VALUE, value)


def export_template(template: BehaviorTemplate, graph: Graph) -> None:
    """Materialize the template structure so queries can walk it."""
    graph.assert_instance(template.template_iri, V.BEHAVIOR)
    for goal_iri, group in template.goals:
        graph.add(template.template_iri, V.HAS_GOAL, goal_iri)
        graph.assert_instance(goal_iri, V.GOAL)
        for task in group:
            task_iri = vocab_individual(f"ERC721_{task.name}_task")
            graph.add(goal_iri, V.HAS_TASK, task_iri)
            graph.assert_instance(task_iri, V.TASK)
            base = f"ERC721_{task.name}_task"
            _export_reference(graph, task_iri, V.HAS_TASK_OPERATOR, f"{base}_operator",
                              task.operator_action)
            _export_reference(graph, task_iri, V.HAS_TASK_ARGUMENT, f"{base}_argument",
                              task.operator_argument)
            if task.object is not None:
                _export_reference(graph, task_iri, V.HAS_TASK_OBJECT, f"{base}_object",
                                  task.object)
            for i, ref in enumerate(task.input_parameters):
                _export_reference(graph, task_iri, V.HAS_TASK_INPUT, f"{base}_input_{i + 1}",
                                  ref, index=i + 1)
            for i, ref in enumerate(task.output_parameters):
                _export_reference(graph, task_iri, V.HAS_TASK_OUTPUT, f"{base}_output_{i + 1}",
                                  ref, index=i + 1)


def instantiate_for_agent(template: BehaviorTemplate, agent: Iri, graph: Graph) -> Iri:
    """Create (idempotently) the agent's behavior individual implementing the
    template, and tie the agent's recorded plan executions to it."""
    if not graph.is_instance(agent, V.ETHEREUM_ERC721_SMART_CONTRACT_AGENT):
        raise CategoryMismatch(
            f"{agent.rendered} is not an ERC721 smart contract agent"
        )
    export_template(template, graph)
    behavior_iri = make_iri("behavior", [agent.local_name], graph.namespaces.instance)
    graph.assert_instance(behavior_iri, V.BEHAVIOR)
    graph.add(agent, V.HAS_BEHAVIOR, behavior_iri)
    graph.add(behavior_iri, V.IMPLEMENTS_TEMPLATE, template.template_iri)
    for plan in graph.subjects(V.PERFORMED_BY, agent):
        graph.add(plan, V.REALIZES_BEHAVIOR, behavior_iri)
    return behavior_iri
