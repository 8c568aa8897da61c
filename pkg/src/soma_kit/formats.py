"""On-disk document formats: plan libraries and episodes as canonical JSON
trees (one object per file, version-tagged), plus loaders and a normalizing
serializer used for round-trip checks.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .activity import (
    Binding,
    ConditionalSuccedence,
    Configuration,
    Description,
    EventTypeRef,
    Goal,
    PhaseConstraint,
    Plan,
    ProcessFlow,
    RELATION_VOCABULARY,
    StateRelationConstraint,
    validate_description,
)
from .allen import RelationSet
from .errors import (
    KindMismatch,
    NegativeDuration,
    ParseError,
    UnknownId,
    UnsupportedAspect,
    ValidationFailed,
    VersionMismatch,
)
from .grounding import Scene
from .ontology import (
    AffordanceSpec,
    And,
    ConceptKind,
    DesignAspect,
    DesignSpec,
    Disposition,
    Entity,
    EntityKind,
    HasDisposition,
    KindIs,
    OntologyStore,
    Or,
    Quality,
    RegionWithin,
    Restriction,
    TypeTagIn,
)
from .parsing import Episode, RawEvent, Token, TokenClass, tokenize

FORMAT_VERSION = "soma-kit/1"

#: Reverse lookup: relation-set mask -> vocabulary name.
_VOCAB_BY_MASK = {rs.mask: name for name, rs in RELATION_VOCABULARY.items()}


# --- low-level helpers --------------------------------------------------------


def _read_json(path: Union[str, Path]) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top-level value must be an object")
    return doc


def _check_version(doc: dict, path) -> None:
    version = doc.get("version")
    if version != FORMAT_VERSION:
        raise VersionMismatch(f"{path}: expected {FORMAT_VERSION!r}, got {version!r}")


# --- restrictions --------------------------------------------------------------


def restriction_from_json(node: dict) -> Restriction:
    op = node.get("op")
    if op == "kind_is":
        return KindIs(EntityKind(node["kind"]))
    if op == "type_tag_in":
        return TypeTagIn(frozenset(node["tags"]))
    if op == "has_disposition":
        return HasDisposition(node["disposition"])
    if op == "region_within":
        return RegionWithin(float(node["lo"]), float(node["hi"]), node["units"])
    if op == "and":
        return And(tuple(restriction_from_json(i) for i in node["items"]))
    if op == "or":
        return Or(tuple(restriction_from_json(i) for i in node["items"]))
    raise ParseError(f"unknown restriction op: {op!r}")


def restriction_to_json(r: Restriction) -> dict:
    if isinstance(r, KindIs):
        return {"op": "kind_is", "kind": r.kind.value}
    if isinstance(r, TypeTagIn):
        return {"op": "type_tag_in", "tags": sorted(r.tags)}
    if isinstance(r, HasDisposition):
        return {"op": "has_disposition", "disposition": r.disposition_type}
    if isinstance(r, RegionWithin):
        return {"op": "region_within", "lo": r.lo, "hi": r.hi, "units": r.units}
    if isinstance(r, And):
        return {"op": "and", "items": [restriction_to_json(i) for i in r.items]}
    if isinstance(r, Or):
        return {"op": "or", "items": [restriction_to_json(i) for i in r.items]}
    raise TypeError(f"not a restriction: {r!r}")


# --- descriptions ---------------------------------------------------------------


def _relation_from_json(node) -> RelationSet:
    if isinstance(node, str):
        if node not in RELATION_VOCABULARY:
            raise ParseError(f"unknown temporal relation: {node!r}")
        return RELATION_VOCABULARY[node]
    if isinstance(node, list):
        return RelationSet.from_codes(" ".join(node))
    raise ParseError(f"bad relation value: {node!r}")


def _relation_to_json(rs: RelationSet):
    name = _VOCAB_BY_MASK.get(rs.mask)
    return name if name is not None else rs.codes().split()


def _ref_from_json(node: dict) -> EventTypeRef:
    return EventTypeRef(
        id=node["id"],
        concept=node["concept"],
        uses_roles=tuple(node.get("roles", [])),
        uses_parameters=tuple(node.get("parameters", [])),
    )


def _ref_to_json(ref: EventTypeRef) -> dict:
    return {
        "id": ref.id,
        "concept": ref.concept,
        "roles": list(ref.uses_roles),
        "parameters": list(ref.uses_parameters),
    }


def _description_from_json(node: dict) -> Description:
    kind = node.get("type")
    if kind == "plan":
        goal = node.get("goal")
        return Plan(
            id=node["id"],
            defines_task=_ref_from_json(node["defines"]),
            phases=tuple(_ref_from_json(p) for p in node.get("phases", [])),
            constraints=tuple(
                PhaseConstraint(c["left"], _relation_from_json(c["relation"]), c["right"])
                for c in node.get("constraints", [])
            ),
            bindings=tuple(
                Binding(b["id"], frozenset(tuple(s) for s in b["slots"]))
                for b in node.get("bindings", [])
            ),
            succedences=tuple(
                ConditionalSuccedence(
                    s["id"],
                    s["earlier"],
                    s["later"],
                    restriction_from_json(s["condition"]) if s.get("condition") else None,
                )
                for s in node.get("succedences", [])
            ),
            goal=Goal(
                goal["id"],
                tuple((g["state"], tuple(g.get("roles", []))) for g in goal["desired"]),
            )
            if goal
            else None,
        )
    if kind == "configuration":
        constraints = []
        for c in node.get("constraints", []):
            if "relation" in c:
                constraints.append(
                    StateRelationConstraint(c["relation"], c["left"], c["right"])
                )
            else:
                constraints.append(restriction_from_json(c))
        defines = node.get("defines")
        return Configuration(
            id=node["id"],
            defines_state=_ref_from_json(defines) if defines else None,
            constraints=tuple(constraints),
        )
    if kind == "process_flow":
        defines = node.get("defines")
        return ProcessFlow(
            id=node["id"],
            defines_process=_ref_from_json(defines) if defines else None,
            phases=tuple(_ref_from_json(p) for p in node.get("phases", [])),
            constraints=tuple(
                PhaseConstraint(c["left"], _relation_from_json(c["relation"]), c["right"])
                for c in node.get("constraints", [])
            ),
        )
    raise ParseError(f"unknown description type: {kind!r}")


def _description_to_json(d: Description) -> dict:
    if isinstance(d, Plan):
        return {
            "id": d.id,
            "type": "plan",
            "defines": _ref_to_json(d.defines_task),
            "phases": [_ref_to_json(p) for p in d.phases],
            "constraints": [
                {"left": c.left, "relation": _relation_to_json(c.relation), "right": c.right}
                for c in d.constraints
            ],
            "bindings": [
                {"id": b.id, "slots": sorted(list(s) for s in b.slots)} for b in d.bindings
            ],
            "succedences": [
                {
                    "id": s.id,
                    "earlier": s.earlier,
                    "later": s.later,
                    "condition": restriction_to_json(s.condition) if s.condition else None,
                }
                for s in d.succedences
            ],
            "goal": {
                "id": d.goal.id,
                "desired": [
                    {"state": state, "roles": list(roles)} for state, roles in d.goal.desired
                ],
            }
            if d.goal
            else None,
        }
    if isinstance(d, Configuration):
        constraints = []
        for c in d.constraints:
            if isinstance(c, StateRelationConstraint):
                constraints.append(
                    {"relation": c.relation, "left": c.left, "right": c.right}
                )
            else:
                constraints.append(restriction_to_json(c))
        return {
            "id": d.id,
            "type": "configuration",
            "defines": _ref_to_json(d.defines_state) if d.defines_state else None,
            "constraints": constraints,
        }
    return {
        "id": d.id,
        "type": "process_flow",
        "defines": _ref_to_json(d.defines_process) if d.defines_process else None,
        "phases": [_ref_to_json(p) for p in d.phases],
        "constraints": [
            {"left": c.left, "relation": _relation_to_json(c.relation), "right": c.right}
            for c in d.constraints
        ],
    }


# --- library --------------------------------------------------------------------


def load_library(path: Union[str, Path]) -> Tuple[OntologyStore, List[Description]]:
    """Load, validate, and freeze a plan-library document.

    Fails with ValidationFailed listing every issue found; a store is only
    returned when the whole document is clean.
    """
    doc = _read_json(path)
    _check_version(doc, path)
    return load_library_document(doc)


def load_library_document(doc: dict) -> Tuple[OntologyStore, List[Description]]:
    store = OntologyStore()
    issues: List[str] = []

    pending = {c["id"]: c for c in doc.get("concepts", [])}
    while pending:
        progressed = False
        for cid in list(pending):
            record = pending[cid]
            parents = record.get("parents", [])
            if all(store.has_concept(p) for p in parents):
                restriction = record.get("restriction")
                try:
                    store.add_concept(
                        name=record.get("name", cid),
                        kind=ConceptKind(record["kind"]),
                        parents=parents,
                        restriction=restriction_from_json(restriction)
                        if restriction
                        else None,
                        concept_id=cid,
                    )
                except (KindMismatch, UnknownId) as exc:
                    issues.append(f"concept {cid}: {exc}")
                del pending[cid]
                progressed = True
        if not progressed:
            for cid, record in sorted(pending.items()):
                missing = [p for p in record.get("parents", []) if not store.has_concept(p)]
                issues.append(f"concept {cid}: unresolved parents {missing}")
            break

    for node in doc.get("affordances", []):
        try:
            store.add_affordance(
                AffordanceSpec(
                    concept=node["concept"],
                    bearer_role=node["bearer"],
                    trigger_role=node["trigger"],
                    background_role=node.get("background"),
                )
            )
        except (KindMismatch, UnknownId) as exc:
            issues.append(f"affordance {node.get('concept')}: {exc}")

    for node in doc.get("designs", []):
        try:
            store.add_design(
                DesignSpec(
                    concept=node["concept"],
                    aspect=DesignAspect(node["aspect"]),
                    quality_restriction=restriction_from_json(node["restriction"]),
                )
            )
        except (KindMismatch, UnknownId, UnsupportedAspect, ValueError) as exc:
            issues.append(f"design {node.get('concept')}: {exc}")

    descriptions: List[Description] = []
    for node in doc.get("descriptions", []):
        descriptions.append(_description_from_json(node))

    store.freeze()
    for d in descriptions:
        for issue in validate_description(d, store):
            issues.append(f"description {d.id}: {issue}")

    if issues:
        raise ValidationFailed(issues)
    return store, descriptions


def serialize_library(store: OntologyStore, descriptions: Sequence[Description]) -> dict:
    """Canonical document form: lists sorted by id, normalized field order."""
    return {
        "version": FORMAT_VERSION,
        "concepts": [
            {
                "id": c.id,
                "name": c.name,
                "kind": c.kind.value,
                "parents": sorted(c.parents),
                "restriction": restriction_to_json(c.restriction)
                if c.restriction
                else None,
            }
            for c in sorted(store.concepts(), key=lambda c: c.id)
        ],
        "affordances": [
            {
                "concept": a.concept,
                "bearer": a.bearer_role,
                "trigger": a.trigger_role,
                "background": a.background_role,
            }
            for a in sorted(store.affordances(), key=lambda a: a.concept)
        ],
        "designs": [
            {
                "concept": d.concept,
                "aspect": d.aspect.value,
                "restriction": restriction_to_json(d.quality_restriction),
            }
            for d in sorted(store.designs(), key=lambda d: d.concept)
        ],
        "descriptions": [
            _description_to_json(d) for d in sorted(descriptions, key=lambda d: d.id)
        ],
    }


# --- episodes ---------------------------------------------------------------------


def load_episode(path: Union[str, Path], eps: float = 0.01) -> Episode:
    """Load an episode document, tokenizing its raw events."""
    doc = _read_json(path)
    _check_version(doc, path)
    return load_episode_document(doc, eps=eps, episode_id=Path(path).stem)


def load_episode_document(doc: dict, eps: float = 0.01, episode_id: str = "episode") -> Episode:
    scene = _scene_from_json(doc.get("scene", {}))
    raw_events: List[RawEvent] = []
    issues: List[str] = []
    for idx, node in enumerate(doc.get("events", [])):
        participants = tuple(node.get("participants", []))
        for p in participants:
            if p not in scene:
                issues.append(f"event {idx}: participant {p} not in scene")
        try:
            kind = TokenClass(node["class"])
        except ValueError:
            issues.append(f"event {idx}: unknown class {node.get('class')!r}")
            continue
        raw_events.append(
            RawEvent(
                kind=kind,
                type_tag=node["type"],
                participants=participants,
                start=float(node["start"]),
                end=float(node["end"]),
            )
        )
    if issues:
        raise ValidationFailed(issues)
    tokens = tokenize(raw_events, eps=eps)
    return Episode(id=episode_id, tokens=tuple(tokens), scene=scene, eps=eps)


def _scene_from_json(node: dict) -> Scene:
    objects: Dict[str, Entity] = {}
    for record in node.get("objects", []):
        eid = record["id"]
        qualities = tuple(
            Quality(
                id=f"{eid}.q{i}",
                type_tag=q["type"],
                value=q.get("value"),
                units=q.get("units"),
            )
            for i, q in enumerate(record.get("qualities", []))
        )
        dispositions = tuple(
            Disposition(
                id=f"{eid}.d{i}",
                bearer=eid,
                disposition_type=d["type"],
                affordance=d.get("affordance"),
            )
            for i, d in enumerate(record.get("dispositions", []))
        )
        objects[eid] = Entity(
            id=eid,
            name=record.get("name", eid),
            kind=EntityKind.OBJECT,
            type_tag=record.get("type_tag", record.get("name", eid)),
            qualities=qualities,
            dispositions=dispositions,
        )
    return Scene(objects)


def serialize_episode(episode: Episode, raw_events: Sequence[RawEvent]) -> dict:
    """Canonical episode document from a scene and its raw event records."""
    return {
        "version": FORMAT_VERSION,
        "scene": {
            "objects": [
                {
                    "id": e.id,
                    "name": e.name,
                    "type_tag": e.type_tag,
                    "dispositions": [
                        {"type": d.disposition_type, "affordance": d.affordance}
                        for d in e.dispositions
                    ],
                    "qualities": [
                        {"type": q.type_tag, "value": q.value, "units": q.units}
                        for q in e.qualities
                    ],
                }
                for e in sorted(episode.scene.objects.values(), key=lambda e: e.id)
            ]
        },
        "events": [
            {
                "class": ev.kind.value,
                "type": ev.type_tag,
                "participants": list(ev.participants),
                "start": ev.start,
                "end": ev.end,
            }
            for ev in raw_events
        ],
    }


def dumps_canonical(doc: dict) -> str:
    """Byte-stable JSON text for a document."""
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
