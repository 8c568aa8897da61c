"""Two-branch concept model: a descriptive (social) branch of concepts that
classify entities of the ground (physical) branch.

Concepts form per-kind DAG taxonomies. Roles and parameters may carry a
restriction over ground-branch predicates; classification legality is
evaluated by recursive restriction checking.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple, Union

from .errors import (
    BranchViolation,
    CycleError,
    KindMismatch,
    StoreFrozen,
    UnitMismatch,
    UnknownId,
    UnsupportedAspect,
)


class ConceptKind(Enum):
    TASK = "task"
    PROCESS_TYPE = "process_type"
    STATE_TYPE = "state_type"
    ROLE = "role"
    PARAMETER = "parameter"
    AFFORDANCE_DESCR = "affordance"
    DESIGN_DESCR = "design"
    PLAN_DESCR = "plan"
    CONFIGURATION_DESCR = "configuration"
    PROCESS_FLOW_DESCR = "process_flow"


#: Concept kinds that conceptualize event-like entities.
EVENT_CONCEPT_KINDS = frozenset(
    {ConceptKind.TASK, ConceptKind.PROCESS_TYPE, ConceptKind.STATE_TYPE}
)

#: Concept kinds allowed to carry a restriction.
RESTRICTABLE_KINDS = frozenset({ConceptKind.ROLE, ConceptKind.PARAMETER})


class EntityKind(Enum):
    OBJECT = "object"
    ACTION = "action"
    PROCESS = "process"
    STATE = "state"
    QUALITY = "quality"
    REGION = "region"
    SITUATION = "situation"


#: Entity kinds that may carry participants.
EVENT_ENTITY_KINDS = frozenset(
    {EntityKind.ACTION, EntityKind.PROCESS, EntityKind.STATE}
)

#: Which ground entity kinds a concept kind may legally classify.
CLASSIFIABLE_KINDS: Dict[ConceptKind, FrozenSet[EntityKind]] = {
    ConceptKind.TASK: frozenset({EntityKind.ACTION}),
    ConceptKind.PROCESS_TYPE: frozenset({EntityKind.PROCESS}),
    ConceptKind.STATE_TYPE: frozenset({EntityKind.STATE}),
    ConceptKind.ROLE: frozenset({EntityKind.OBJECT}),
    ConceptKind.PARAMETER: frozenset({EntityKind.REGION}),
}


# --- Restriction language ---------------------------------------------------


@dataclass(frozen=True)
class KindIs:
    kind: EntityKind


@dataclass(frozen=True)
class TypeTagIn:
    tags: FrozenSet[str]


@dataclass(frozen=True)
class HasDisposition:
    disposition_type: str


@dataclass(frozen=True)
class RegionWithin:
    lo: float
    hi: float
    units: str


@dataclass(frozen=True)
class And:
    items: Tuple["Restriction", ...]

    def __post_init__(self):
        if not self.items:
            raise ValueError("And requires at least one child")


@dataclass(frozen=True)
class Or:
    items: Tuple["Restriction", ...]

    def __post_init__(self):
        if not self.items:
            raise ValueError("Or requires at least one child")


Restriction = Union[KindIs, TypeTagIn, HasDisposition, RegionWithin, And, Or]


# --- Ground-branch records --------------------------------------------------


@dataclass(frozen=True)
class Quality:
    id: str
    type_tag: str
    value: Optional[float] = None
    units: Optional[str] = None


@dataclass(frozen=True)
class Disposition:
    id: str
    bearer: str
    disposition_type: str
    affordance: Optional[str] = None


@dataclass(frozen=True)
class Entity:
    id: str
    name: str
    kind: EntityKind
    type_tag: str
    qualities: Tuple[Quality, ...] = ()
    dispositions: Tuple[Disposition, ...] = ()
    participants: Tuple[str, ...] = ()
    value: Optional[float] = None
    units: Optional[str] = None

    def __post_init__(self):
        if self.kind is not EntityKind.OBJECT and (self.qualities or self.dispositions):
            raise KindMismatch(f"only Object entities carry qualities: {self.id}")
        if self.participants and self.kind not in EVENT_ENTITY_KINDS:
            raise KindMismatch(f"only event entities carry participants: {self.id}")


@dataclass(frozen=True)
class Concept:
    id: str
    name: str
    kind: ConceptKind
    parents: FrozenSet[str] = frozenset()
    restriction: Optional[Restriction] = None


@dataclass(frozen=True)
class AffordanceSpec:
    concept: str
    bearer_role: str
    trigger_role: str
    background_role: Optional[str] = None

    def __post_init__(self):
        if self.bearer_role == self.trigger_role:
            raise KindMismatch("bearer and trigger roles must differ")


class DesignAspect(Enum):
    FUNCTIONAL = "functional"
    STRUCTURAL = "structural"
    AESTHETIC = "aesthetic"


@dataclass(frozen=True)
class DesignSpec:
    concept: str
    aspect: DesignAspect
    quality_restriction: Restriction


@dataclass(frozen=True)
class Classification:
    concept: str
    entity: str
    during: Optional[str] = None


@dataclass(frozen=True)
class ClassificationResult:
    accepted: bool
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.accepted


ACCEPTED = ClassificationResult(True)


# --- Store -------------------------------------------------------------------


class OntologyStore:
    """In-memory store for both branches plus affordance and design records.

    Mutating operations are only legal before :meth:`freeze`; afterwards the
    store is read-only and safe to share between concurrent readers.
    """

    def __init__(self) -> None:
        self._concepts: Dict[str, Concept] = {}
        self._entities: Dict[str, Entity] = {}
        self._affordances: Dict[str, AffordanceSpec] = {}
        self._designs: Dict[str, DesignSpec] = {}
        self._classifications: List[Classification] = []
        self._ids = itertools.count(1)
        self._frozen = False

    # -- lifecycle

    @property
    def frozen(self) -> bool:
        return self._frozen

    def freeze(self) -> "OntologyStore":
        self._frozen = True
        return self

    def _check_mutable(self) -> None:
        if self._frozen:
            raise StoreFrozen("store is frozen; no mutation allowed")

    def _fresh_id(self, prefix: str) -> str:
        while True:
            candidate = f"{prefix}{next(self._ids)}"
            if candidate not in self._concepts and candidate not in self._entities:
                return candidate

    # -- concepts

    def add_concept(
        self,
        name: str,
        kind: ConceptKind,
        parents: Iterable[str] = (),
        restriction: Optional[Restriction] = None,
        concept_id: Optional[str] = None,
    ) -> str:
        self._check_mutable()
        parents = frozenset(parents)
        cid = concept_id if concept_id is not None else self._fresh_id("c")
        if cid in self._concepts:
            raise KindMismatch(f"duplicate concept id: {cid}")
        if cid in parents:
            raise CycleError(f"concept {cid} cannot be its own parent")
        for pid in parents:
            parent = self._concepts.get(pid)
            if parent is None:
                raise UnknownId(f"unknown parent concept: {pid}")
            if parent.kind is not kind:
                raise KindMismatch(
                    f"parent {pid} has kind {parent.kind.value}, expected {kind.value}"
                )
        if restriction is not None and kind not in RESTRICTABLE_KINDS:
            raise KindMismatch(f"{kind.value} concepts cannot carry restrictions")
        self._concepts[cid] = Concept(cid, name, kind, parents, restriction)
        self._assert_acyclic()
        return cid

    def _assert_acyclic(self) -> None:
        # Kahn-style topological check over parent edges.
        indegree = {cid: 0 for cid in self._concepts}
        children: Dict[str, List[str]] = {cid: [] for cid in self._concepts}
        for c in self._concepts.values():
            for pid in c.parents:
                children[pid].append(c.id)
                indegree[c.id] += 1
        ready = [cid for cid, deg in indegree.items() if deg == 0]
        seen = 0
        while ready:
            node = ready.pop()
            seen += 1
            for child in children[node]:
                indegree[child] -= 1
                if indegree[child] == 0:
                    ready.append(child)
        if seen != len(self._concepts):
            raise CycleError("taxonomy contains a cycle")

    def concept(self, cid: str) -> Concept:
        try:
            return self._concepts[cid]
        except KeyError:
            raise UnknownId(f"unknown concept: {cid}") from None

    def has_concept(self, cid: str) -> bool:
        return cid in self._concepts

    def concepts(self) -> Tuple[Concept, ...]:
        return tuple(self._concepts.values())

    def concepts_named(self, name: str) -> Tuple[Concept, ...]:
        return tuple(c for c in self._concepts.values() if c.name == name)

    def is_subsumed_by(self, a: str, b: str) -> bool:
        """True iff b is reachable from a via parent edges (reflexive)."""
        self.concept(b)
        frontier = [self.concept(a).id]
        visited: Set[str] = set()
        while frontier:
            node = frontier.pop()
            if node == b:
                return True
            if node in visited:
                continue
            visited.add(node)
            frontier.extend(self._concepts[node].parents)
        return False

    # -- entities

    def add_entity(self, entity: Entity) -> str:
        self._check_mutable()
        if entity.id in self._entities:
            raise KindMismatch(f"duplicate entity id: {entity.id}")
        self._entities[entity.id] = entity
        return entity.id

    def entity(self, eid: str) -> Entity:
        try:
            return self._entities[eid]
        except KeyError:
            raise UnknownId(f"unknown entity: {eid}") from None

    def has_entity(self, eid: str) -> bool:
        return eid in self._entities

    def entities(self) -> Tuple[Entity, ...]:
        return tuple(self._entities.values())

    # -- affordances and designs

    def add_affordance(self, spec: AffordanceSpec) -> None:
        self._check_mutable()
        if self.concept(spec.concept).kind is not ConceptKind.AFFORDANCE_DESCR:
            raise KindMismatch(f"{spec.concept} is not an affordance concept")
        for role in filter(None, (spec.bearer_role, spec.trigger_role, spec.background_role)):
            if self.concept(role).kind is not ConceptKind.ROLE:
                raise KindMismatch(f"affordance slot {role} is not a Role")
        self._affordances[spec.concept] = spec

    def affordance(self, concept_id: str) -> AffordanceSpec:
        try:
            return self._affordances[concept_id]
        except KeyError:
            raise UnknownId(f"unknown affordance: {concept_id}") from None

    def affordances(self) -> Tuple[AffordanceSpec, ...]:
        return tuple(self._affordances.values())

    def add_design(self, spec: DesignSpec) -> None:
        self._check_mutable()
        if self.concept(spec.concept).kind is not ConceptKind.DESIGN_DESCR:
            raise KindMismatch(f"{spec.concept} is not a design concept")
        if spec.aspect is not DesignAspect.FUNCTIONAL:
            raise UnsupportedAspect(
                f"only functional designs are instantiable, got {spec.aspect.value}"
            )
        self._designs[spec.concept] = spec

    def design(self, concept_id: str) -> DesignSpec:
        try:
            return self._designs[concept_id]
        except KeyError:
            raise UnknownId(f"unknown design: {concept_id}") from None

    def designs(self) -> Tuple[DesignSpec, ...]:
        return tuple(self._designs.values())

    # -- classification

    def satisfies_restriction(self, entity: Union[str, Entity], r: Restriction) -> bool:
        """Recursive restriction evaluation over a ground entity."""
        e = entity if isinstance(entity, Entity) else self.entity(entity)
        if isinstance(r, KindIs):
            return e.kind is r.kind
        if isinstance(r, TypeTagIn):
            return e.type_tag in r.tags
        if isinstance(r, HasDisposition):
            return any(d.disposition_type == r.disposition_type for d in e.dispositions)
        if isinstance(r, RegionWithin):
            if e.kind is EntityKind.REGION:
                return e.units == r.units and e.value is not None and r.lo <= e.value <= r.hi
            return any(
                q.units == r.units and q.value is not None and r.lo <= q.value <= r.hi
                for q in e.qualities
            )
        if isinstance(r, And):
            return all(self.satisfies_restriction(e, item) for item in r.items)
        if isinstance(r, Or):
            return any(self.satisfies_restriction(e, item) for item in r.items)
        raise TypeError(f"not a restriction: {r!r}")

    def check_classification(
        self, concept_id: str, entity: Union[str, Entity]
    ) -> ClassificationResult:
        """Can this social concept legally classify this ground entity?"""
        concept = self.concept(concept_id)
        e = entity if isinstance(entity, Entity) else self.entity(entity)
        legal = CLASSIFIABLE_KINDS.get(concept.kind)
        if legal is None:
            raise BranchViolation(
                f"{concept.kind.value} concepts do not classify ground entities"
            )
        if e.kind not in legal:
            return ClassificationResult(
                False, f"{concept.kind.value} cannot classify {e.kind.value} entities"
            )
        if concept.restriction is None:
            return ACCEPTED
        if self.satisfies_restriction(e, concept.restriction):
            return ACCEPTED
        return ClassificationResult(False, _rejection_reason(concept.restriction))

    def assert_classification(
        self, concept_id: str, entity_id: str, during: Optional[str] = None
    ) -> Classification:
        """Record a classification edge after verifying its legality."""
        self._check_mutable()
        result = self.check_classification(concept_id, entity_id)
        if not result:
            raise BranchViolation(result.reason or "classification rejected")
        record = Classification(concept_id, entity_id, during)
        self._classifications.append(record)
        return record

    def classifications(self) -> Tuple[Classification, ...]:
        return tuple(self._classifications)

    def design_describes(self, design_concept: str, object_id: Union[str, Entity]) -> bool:
        """Functional design matching: restriction satisfied iff described."""
        spec = self.design(design_concept)
        if spec.aspect is not DesignAspect.FUNCTIONAL:
            raise UnsupportedAspect(f"unsupported design aspect: {spec.aspect.value}")
        return self.satisfies_restriction(object_id, spec.quality_restriction)

    def check_parameter(self, parameter_id: str, value: float, units: str) -> bool:
        """Does a numeric value (with unit tag) satisfy a parameter's region?"""
        concept = self.concept(parameter_id)
        if concept.kind is not ConceptKind.PARAMETER:
            raise KindMismatch(f"{parameter_id} is not a Parameter concept")
        if concept.restriction is None:
            return True
        return _eval_parameter(concept.restriction, value, units)


def _eval_parameter(r: Restriction, value: float, units: str) -> bool:
    if isinstance(r, RegionWithin):
        if r.units != units:
            raise UnitMismatch(f"expected {r.units}, got {units}")
        return r.lo <= value <= r.hi
    if isinstance(r, And):
        return all(_eval_parameter(item, value, units) for item in r.items)
    if isinstance(r, Or):
        return any(_eval_parameter(item, value, units) for item in r.items)
    raise KindMismatch(f"parameter restrictions must be region-based, got {r!r}")


def _rejection_reason(r: Restriction) -> str:
    if isinstance(r, HasDisposition):
        return f"missing disposition {r.disposition_type}"
    if isinstance(r, KindIs):
        return f"entity kind is not {r.kind.value}"
    if isinstance(r, TypeTagIn):
        return f"type tag not in {sorted(r.tags)}"
    if isinstance(r, RegionWithin):
        return f"value outside [{r.lo}, {r.hi}] {r.units}"
    return "restriction not satisfied"
