"""Plans, configurations, and process flows, plus the machinery that checks
them: structural validation against an ontology store, compilation of phase
structure into an interval constraint network, binding checks, and goal
checks against terminal situations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from .allen import BaseRelation, ConstraintNetwork, RelationSet
from .errors import MissingSlot, TemporallyInconsistent
from .ontology import (
    Concept,
    ConceptKind,
    EVENT_CONCEPT_KINDS,
    OntologyStore,
    Restriction,
)

#: Named temporal vocabulary accepted in phase constraints. hasPhase is
#: handled separately: a phase lies within (or coincides with) the whole event.
RELATION_VOCABULARY: Dict[str, RelationSet] = {
    "before": RelationSet.of(BaseRelation.BEFORE),
    "after": RelationSet.of(BaseRelation.AFTER),
    "meets": RelationSet.of(BaseRelation.MEETS),
    "metBy": RelationSet.of(BaseRelation.MET_BY),
    "during": RelationSet.of(BaseRelation.DURING),
    "contains": RelationSet.of(BaseRelation.CONTAINS),
    "equals": RelationSet.of(BaseRelation.EQUALS),
    "overlapsWith": RelationSet.of(BaseRelation.OVERLAPS),
    "overlappedBy": RelationSet.of(BaseRelation.OVERLAPPED_BY),
    "startedBy": RelationSet.of(BaseRelation.STARTED_BY),
    "starts": RelationSet.of(BaseRelation.STARTS),
    "finishes": RelationSet.of(BaseRelation.FINISHES),
    "finishedBy": RelationSet.of(BaseRelation.FINISHED_BY),
}

#: Phase-within-whole label used for hasPhase edges: the phase may share the
#: whole's start or end but never extends beyond it.
HAS_PHASE = RelationSet.of(
    BaseRelation.STARTS, BaseRelation.DURING, BaseRelation.FINISHES, BaseRelation.EQUALS
)

#: Temporal import of conditional succedence: the earlier task fully
#: precedes or abuts the later one.
SUCCEDENCE = RelationSet.of(BaseRelation.BEFORE, BaseRelation.MEETS)

#: Binary state vocabulary usable in configuration constraints.
STATE_RELATIONS = frozenset({"contact", "support", "containment"})


@dataclass(frozen=True)
class EventTypeRef:
    """A typed slot of a description: one task, process type, or state type,
    together with the roles and parameters it uses."""

    id: str
    concept: str
    uses_roles: Tuple[str, ...] = ()
    uses_parameters: Tuple[str, ...] = ()


@dataclass(frozen=True)
class PhaseConstraint:
    left: str
    relation: RelationSet
    right: str


@dataclass(frozen=True)
class Binding:
    """Identity constraint: all slots ground to the same entity."""

    id: str
    slots: FrozenSet[Tuple[str, str]]  # (phase or task id, role/parameter id)


@dataclass(frozen=True)
class ConditionalSuccedence:
    id: str
    earlier: str
    later: str
    condition: Optional[Restriction] = None


@dataclass(frozen=True)
class Goal:
    """Desired terminal situation: state types over bound roles."""

    id: str
    desired: Tuple[Tuple[str, Tuple[str, ...]], ...]  # (state type id, role ids)


@dataclass(frozen=True)
class StateRelationConstraint:
    relation: str  # one of STATE_RELATIONS
    left: str
    right: str


ConfigurationConstraint = Union[Restriction, StateRelationConstraint]


@dataclass(frozen=True)
class Plan:
    id: str
    defines_task: EventTypeRef
    phases: Tuple[EventTypeRef, ...]
    constraints: Tuple[PhaseConstraint, ...] = ()
    bindings: Tuple[Binding, ...] = ()
    succedences: Tuple[ConditionalSuccedence, ...] = ()
    goal: Optional[Goal] = None


@dataclass(frozen=True)
class Configuration:
    id: str
    defines_state: Optional[EventTypeRef] = None
    constraints: Tuple[ConfigurationConstraint, ...] = ()


@dataclass(frozen=True)
class ProcessFlow:
    id: str
    defines_process: Optional[EventTypeRef] = None
    phases: Tuple[EventTypeRef, ...] = ()
    constraints: Tuple[PhaseConstraint, ...] = ()


Description = Union[Plan, Configuration, ProcessFlow]


@dataclass(frozen=True)
class Situation:
    """A setting of ground events, possibly satisfying a description."""

    id: str
    included_events: FrozenSet[str] = frozenset()
    satisfies: Optional[str] = None
    terminal_states: FrozenSet[Tuple[str, Tuple[str, ...]]] = frozenset()
    role_grounding: Tuple[Tuple[str, str], ...] = ()


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


@dataclass(frozen=True)
class GoalResult:
    achieved: bool
    missing: Tuple[str, ...] = ()


_DEFINES_KIND = {
    Plan: ConceptKind.TASK,
    Configuration: ConceptKind.STATE_TYPE,
    ProcessFlow: ConceptKind.PROCESS_TYPE,
}


def _check_event_type_ref(
    ref: EventTypeRef, store: OntologyStore, issues: List[ValidationIssue]
) -> None:
    if not store.has_concept(ref.concept):
        issues.append(
            ValidationIssue("unknown-concept", f"{ref.id} references {ref.concept}")
        )
    elif store.concept(ref.concept).kind not in EVENT_CONCEPT_KINDS:
        issues.append(
            ValidationIssue(
                "kind-mismatch",
                f"{ref.id} must reference a task/process/state concept",
            )
        )
    for rid in ref.uses_roles:
        if not store.has_concept(rid):
            issues.append(ValidationIssue("unknown-role", f"{ref.id} uses {rid}"))
        elif store.concept(rid).kind is not ConceptKind.ROLE:
            issues.append(ValidationIssue("kind-mismatch", f"{rid} is not a Role"))
    for pid in ref.uses_parameters:
        if not store.has_concept(pid):
            issues.append(ValidationIssue("unknown-parameter", f"{ref.id} uses {pid}"))
        elif store.concept(pid).kind is not ConceptKind.PARAMETER:
            issues.append(ValidationIssue("kind-mismatch", f"{pid} is not a Parameter"))


def _slot_roles(d: Description) -> Dict[str, EventTypeRef]:
    """All phase-like slots of a description, keyed by slot id."""
    slots: Dict[str, EventTypeRef] = {}
    if isinstance(d, Plan):
        slots[d.defines_task.id] = d.defines_task
        for p in d.phases:
            slots[p.id] = p
    elif isinstance(d, ProcessFlow):
        if d.defines_process is not None:
            slots[d.defines_process.id] = d.defines_process
        for p in d.phases:
            slots[p.id] = p
    elif isinstance(d, Configuration) and d.defines_state is not None:
        slots[d.defines_state.id] = d.defines_state
    return slots


def validate_description(d: Description, store: OntologyStore) -> List[ValidationIssue]:
    """Structural and temporal validation; an empty list means valid."""
    issues: List[ValidationIssue] = []
    slots = _slot_roles(d)
    for ref in slots.values():
        _check_event_type_ref(ref, store, issues)
    # Phases may be any event concept; only the defined slot must match the arm.
    defined = _defined_ref(d)
    if defined is not None and store.has_concept(defined.concept):
        if store.concept(defined.concept).kind is not _DEFINES_KIND[type(d)]:
            issues.append(
                ValidationIssue(
                    "kind-mismatch",
                    f"{type(d).__name__} must define a "
                    f"{_DEFINES_KIND[type(d)].value} concept",
                )
            )
    phase_ids = set(slots)
    for c in getattr(d, "constraints", ()):
        if isinstance(c, PhaseConstraint):
            for side in (c.left, c.right):
                if side not in phase_ids:
                    issues.append(
                        ValidationIssue("unknown-phase", f"constraint references {side}")
                    )
            if c.relation.is_empty:
                issues.append(
                    ValidationIssue("empty-relation", f"{c.left}/{c.right} label is empty")
                )
        elif isinstance(c, StateRelationConstraint):
            if c.relation not in STATE_RELATIONS:
                issues.append(
                    ValidationIssue(
                        "unknown-state-relation", f"unsupported relation {c.relation}"
                    )
                )
    if isinstance(d, Plan):
        declared_roles = {
            (slot_id, rid)
            for slot_id, ref in slots.items()
            for rid in ref.uses_roles + ref.uses_parameters
        }
        for b in d.bindings:
            if len(b.slots) < 2:
                issues.append(
                    ValidationIssue("binding-too-small", f"binding {b.id} needs >= 2 slots")
                )
            for slot in b.slots:
                if slot not in declared_roles:
                    issues.append(
                        ValidationIssue(
                            "unknown-binding-slot", f"binding {b.id} references {slot}"
                        )
                    )
        for s in d.succedences:
            if s.earlier == s.later:
                issues.append(
                    ValidationIssue("self-succedence", f"{s.id} relates a task to itself")
                )
            for side in (s.earlier, s.later):
                if side not in phase_ids:
                    issues.append(
                        ValidationIssue("unknown-phase", f"succedence references {side}")
                    )
        if d.goal is not None:
            plan_roles = {rid for ref in slots.values() for rid in ref.uses_roles}
            for state_type, roles in d.goal.desired:
                if not store.has_concept(state_type):
                    issues.append(
                        ValidationIssue("unknown-concept", f"goal references {state_type}")
                    )
                elif store.concept(state_type).kind is not ConceptKind.STATE_TYPE:
                    issues.append(
                        ValidationIssue("kind-mismatch", f"{state_type} is not a StateType")
                    )
                for rid in roles:
                    if rid not in plan_roles:
                        issues.append(
                            ValidationIssue("unknown-role", f"goal binds unknown role {rid}")
                        )
    if not issues and not isinstance(d, Configuration):
        try:
            compile_constraints(d)
        except TemporallyInconsistent as exc:
            issues.append(ValidationIssue("temporally-inconsistent", str(exc)))
    return issues


def _defined_ref(d: Description) -> Optional[EventTypeRef]:
    if isinstance(d, Plan):
        return d.defines_task
    if isinstance(d, ProcessFlow):
        return d.defines_process
    return d.defines_state


def compile_constraints(d: Description) -> ConstraintNetwork:
    """Interval network of a plan or process flow: one variable per phase
    plus one for the whole defined event, propagated to fixpoint."""
    if isinstance(d, Configuration):
        raise TypeError("configurations carry no temporal structure")
    net = ConstraintNetwork()
    defined = _defined_ref(d)
    whole: Optional[str] = defined.id if defined is not None else None
    if whole is not None:
        net.add_variable(whole)
    for p in d.phases:
        net.add_variable(p.id)
        if whole is not None:
            net.constrain(p.id, whole, HAS_PHASE)
    for c in d.constraints:
        net.constrain(c.left, c.right, c.relation)
    if isinstance(d, Plan):
        for s in d.succedences:
            net.constrain(s.earlier, s.later, SUCCEDENCE)
    result = net.propagate()
    if not result.consistent:
        raise TemporallyInconsistent(
            f"{d.id}: empty label between {result.witness[0]} and {result.witness[1]}"
        )
    return net


def check_bindings(d: Description, grounding: Dict[Tuple[str, str], str]) -> bool:
    """True iff every binding's slots map to one and the same entity."""
    for b in getattr(d, "bindings", ()):
        values = set()
        for slot in b.slots:
            if slot not in grounding:
                raise MissingSlot(f"binding {b.id} slot {slot} not grounded")
            values.add(grounding[slot])
        if len(values) > 1:
            return False
    return True


def check_goal(g: Goal, situation: Situation, store: OntologyStore) -> GoalResult:
    """Achieved iff each desired state holds among the terminal states,
    matching state types up to subsumption and role groundings exactly."""
    grounding = dict(situation.role_grounding)
    missing: List[str] = []
    for state_type, roles in g.desired:
        wanted = tuple(grounding.get(rid) for rid in roles)
        hit = any(
            store.is_subsumed_by(actual_type, state_type) and actual_parts == wanted
            for actual_type, actual_parts in situation.terminal_states
        )
        if not hit:
            missing.append(state_type)
    if missing:
        return GoalResult(False, tuple(sorted(missing)))
    return GoalResult(True)


def interpretation_square_violations(
    store: OntologyStore,
    situations: Sequence[Situation],
    descriptions: Dict[str, Description],
) -> List[str]:
    """Walk the situation-description-event-type-event square and report
    broken edges: defined event types classifying non-events, or classified
    events that have no setting among the situations."""
    violations: List[str] = []
    situation_events = {eid for s in situations for eid in s.included_events}
    for s in situations:
        if s.satisfies is None:
            continue
        d = descriptions.get(s.satisfies)
        if d is None:
            violations.append(f"{s.id} satisfies unknown description {s.satisfies}")
            continue
        defined_concepts = {ref.concept for ref in _slot_roles(d).values()}
        for cls in store.classifications():
            if cls.concept not in defined_concepts:
                continue
            entity = store.entity(cls.entity)
            if entity.kind.value not in ("action", "process", "state"):
                violations.append(
                    f"{cls.concept} classifies non-event entity {cls.entity}"
                )
            elif cls.entity not in situation_events:
                violations.append(f"event {cls.entity} has no setting situation")
    return violations
