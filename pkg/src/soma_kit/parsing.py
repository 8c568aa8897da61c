"""Activity parsing: turn raw episode logs into tokens, then match plan
libraries against the token stream, emitting every constraint-consistent
interpretation.

The parser is a phase-ordered backtracking search pruned by concept
subsumption and temporal label membership; its contract is defined by
exhaustive enumeration of injective phase-to-token assignments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from .activity import (
    Description,
    EventTypeRef,
    Plan,
    ProcessFlow,
    compile_constraints,
)
from .allen import ConcreteInterval, ConstraintNetwork, relation_from_endpoints
from .errors import DanglingReference, DegenerateInterval, NegativeDuration
from .grounding import Scene
from .ontology import (
    ConceptKind,
    EVENT_CONCEPT_KINDS,
    OntologyStore,
)


class TokenClass(Enum):
    CONTACT_EVENT = "contact"
    MOTION_EVENT = "motion"
    STATE_CHANGE = "state"


@dataclass(frozen=True)
class RawEvent:
    """One observed occurrence before tokenization."""

    kind: TokenClass
    type_tag: str
    participants: Tuple[str, ...]
    start: float
    end: float


@dataclass(frozen=True)
class Token:
    id: str
    token_class: TokenClass
    type_tag: str
    participants: Tuple[str, ...]
    interval: ConcreteInterval


@dataclass(frozen=True)
class Episode:
    id: str
    tokens: Tuple[Token, ...]
    scene: Scene
    eps: float = 0.01


@dataclass(frozen=True)
class Interpretation:
    """One grounding of a plan onto an episode, fully constraint-checked."""

    plan: str
    phase_grounding: Tuple[Tuple[str, str], ...]  # (phase id, token id), sorted
    role_grounding: Tuple[Tuple[Tuple[str, str], str], ...]  # ((slot, role), entity)
    coverage: float
    earliest_start: float

    @property
    def sort_key(self):
        return (
            -self.coverage,
            -len(self.phase_grounding),
            self.earliest_start,
            self.plan,
            self.phase_grounding,
            self.role_grounding,
        )


def tokenize(raw_events: Sequence[RawEvent], eps: float = 0.01) -> List[Token]:
    """Widen point events, split states at interruptions, and sort.

    A state event is split by any other state event over the same
    participants that carries a different type tag, so every state token is
    homeomeric: no sub-interval spans a state transition.
    """
    widened: List[RawEvent] = []
    for ev in raw_events:
        if not (math.isfinite(ev.start) and math.isfinite(ev.end)):
            raise NegativeDuration(f"non-finite timestamps on {ev.type_tag}")
        if ev.end < ev.start:
            raise NegativeDuration(
                f"{ev.type_tag} ends before it starts: [{ev.start}, {ev.end}]"
            )
        if not ev.participants:
            raise NegativeDuration(f"{ev.type_tag} has no participants")
        end = ev.end if ev.end > ev.start else ev.start + eps
        widened.append(RawEvent(ev.kind, ev.type_tag, ev.participants, ev.start, end))

    tokens: List[Token] = []
    for idx, ev in enumerate(widened):
        if ev.kind is TokenClass.STATE_CHANGE:
            segments = _state_segments(ev, widened)
        else:
            segments = [(ev.start, ev.end)]
        for seg_idx, (s, e) in enumerate(segments):
            suffix = f".{seg_idx}" if len(segments) > 1 else ""
            tokens.append(
                Token(
                    id=f"t{idx}{suffix}",
                    token_class=ev.kind,
                    type_tag=ev.type_tag,
                    participants=ev.participants,
                    interval=ConcreteInterval(s, e),
                )
            )
    tokens.sort(key=lambda t: (t.interval.start, t.interval.end, t.id))
    return tokens


def _state_segments(ev: RawEvent, all_events: Sequence[RawEvent]) -> List[Tuple[float, float]]:
    """Sub-intervals of a state event that survive conflicting states."""
    cuts = sorted(
        (max(other.start, ev.start), min(other.end, ev.end))
        for other in all_events
        if other is not ev
        and other.kind is TokenClass.STATE_CHANGE
        and frozenset(other.participants) == frozenset(ev.participants)
        and other.type_tag != ev.type_tag
        and other.start < ev.end
        and other.end > ev.start
    )
    segments: List[Tuple[float, float]] = []
    cursor = ev.start
    for lo, hi in cuts:
        if lo > cursor:
            segments.append((cursor, lo))
        cursor = max(cursor, hi)
    if cursor < ev.end:
        segments.append((cursor, ev.end))
    return segments


def _parseable(d: Description) -> bool:
    return isinstance(d, (Plan, ProcessFlow)) and bool(d.phases)


def _type_matches(token: Token, phase_concept: str, store: OntologyStore) -> bool:
    """Subsumption-aware match of a token's ground type tag against the
    phase's event-type concept."""
    for c in store.concepts_named(token.type_tag):
        if c.kind in EVENT_CONCEPT_KINDS and store.is_subsumed_by(c.id, phase_concept):
            return True
    return False


def _role_assignments(
    d: Description,
    phase_grounding: Dict[str, Token],
    scene: Scene,
    store: OntologyStore,
) -> List[Dict[Tuple[str, str], str]]:
    """All role groundings compatible with the token participants, the plan's
    bindings, and the roles' selectional restrictions."""
    slots: List[Tuple[str, str]] = []
    options: List[Tuple[str, ...]] = []
    for phase in d.phases:
        token = phase_grounding[phase.id]
        for rid in phase.uses_roles:
            slots.append((phase.id, rid))
            options.append(token.participants)
    results: List[Dict[Tuple[str, str], str]] = []
    for combo in product(*options) if slots else [()]:
        grounding = dict(zip(slots, combo))
        expanded = _expand_bindings(d, grounding)
        if expanded is None:
            continue
        if _roles_admissible(expanded, scene, store):
            results.append(expanded)
    return results


def _expand_bindings(
    d: Description, grounding: Dict[Tuple[str, str], str]
) -> Optional[Dict[Tuple[str, str], str]]:
    """Propagate identity bindings; None when grounded slots disagree."""
    expanded = dict(grounding)
    for b in getattr(d, "bindings", ()):
        values = {expanded[s] for s in b.slots if s in expanded}
        if len(values) > 1:
            return None
        if values:
            value = values.pop()
            for s in b.slots:
                expanded.setdefault(s, value)
    return expanded


def _roles_admissible(
    grounding: Dict[Tuple[str, str], str], scene: Scene, store: OntologyStore
) -> bool:
    for (_, concept_id), entity_id in grounding.items():
        if store.concept(concept_id).kind is not ConceptKind.ROLE:
            continue
        if entity_id not in scene:
            return False
        if not store.check_classification(concept_id, scene.entity(entity_id)):
            return False
    return True


def parse(
    episode: Episode, library: Sequence[Description], store: OntologyStore
) -> List[Interpretation]:
    """Every interpretation of the episode under the plan library, ranked."""
    found: List[Interpretation] = []
    for d in library:
        if not _parseable(d):
            continue
        net = compile_constraints(d)
        _search(d, list(d.phases), {}, episode, net, store, found)
    return rank(found)


def _search(
    d: Description,
    phases: List[EventTypeRef],
    assigned: Dict[str, Token],
    episode: Episode,
    net: ConstraintNetwork,
    store: OntologyStore,
    out: List[Interpretation],
) -> None:
    if len(assigned) == len(phases):
        for roles in _role_assignments(d, assigned, episode.scene, store):
            out.append(_make_interpretation(d, assigned, roles, episode))
        return
    phase = phases[len(assigned)]
    used = {t.id for t in assigned.values()}
    for token in episode.tokens:
        if token.id in used:
            continue
        if not _type_matches(token, phase.concept, store):
            continue
        if not _temporally_admissible(phase.id, token, assigned, net, episode.eps):
            continue
        assigned[phase.id] = token
        _search(d, phases, assigned, episode, net, store, out)
        del assigned[phase.id]


def _temporally_admissible(
    phase_id: str,
    token: Token,
    assigned: Dict[str, Token],
    net: ConstraintNetwork,
    eps: float,
) -> bool:
    for other_id, other_token in assigned.items():
        try:
            rel = relation_from_endpoints(other_token.interval, token.interval, eps)
        except DegenerateInterval:
            return False  # widened point tokens cannot anchor temporal labels
        if rel not in net.query_relation(other_id, phase_id):
            return False
    return True


def _make_interpretation(
    d: Description,
    assigned: Dict[str, Token],
    roles: Dict[Tuple[str, str], str],
    episode: Episode,
) -> Interpretation:
    token_ids = {t.id for t in assigned.values()}
    coverage = len(token_ids) / len(episode.tokens) if episode.tokens else 0.0
    return Interpretation(
        plan=d.id,
        phase_grounding=tuple(sorted((pid, t.id) for pid, t in assigned.items())),
        role_grounding=tuple(sorted(roles.items())),
        coverage=coverage,
        earliest_start=min(t.interval.start for t in assigned.values()),
    )


def rank(interps: Sequence[Interpretation]) -> List[Interpretation]:
    """Deterministic order: coverage desc, phase count desc, earliest
    grounded start asc, plan id, then groundings as the final tie-break."""
    return sorted(interps, key=lambda i: i.sort_key)


def verify_interpretation(
    interp: Interpretation,
    episode: Episode,
    library: Sequence[Description],
    store: OntologyStore,
) -> bool:
    """Independent straight-line re-check of the parser's four conditions."""
    by_id = {d.id: d for d in library}
    if interp.plan not in by_id:
        raise DanglingReference(f"unknown plan: {interp.plan}")
    d = by_id[interp.plan]
    if not _parseable(d):
        raise DanglingReference(f"description {d.id} has no parseable phases")
    tokens = {t.id: t for t in episode.tokens}
    phase_ids = {p.id for p in d.phases}
    grounding: Dict[str, Token] = {}
    for pid, tid in interp.phase_grounding:
        if pid not in phase_ids:
            raise DanglingReference(f"unknown phase: {pid}")
        if tid not in tokens:
            raise DanglingReference(f"unknown token: {tid}")
        grounding[pid] = tokens[tid]
    if set(grounding) != phase_ids:
        return False
    if len({t.id for t in grounding.values()}) != len(grounding):
        return False  # not injective
    phases_by_id = {p.id: p for p in d.phases}
    # (a) type match
    for pid, token in grounding.items():
        if not _type_matches(token, phases_by_id[pid].concept, store):
            return False
    # (b) pairwise temporal labels
    net = compile_constraints(d)
    ordered = sorted(grounding)
    for i, pid in enumerate(ordered):
        for qid in ordered[i + 1:]:
            try:
                rel = relation_from_endpoints(
                    grounding[pid].interval, grounding[qid].interval, episode.eps
                )
            except DegenerateInterval:
                return False
            if rel not in net.query_relation(pid, qid):
                return False
    # (c) bindings hold
    roles = dict(interp.role_grounding)
    for b in getattr(d, "bindings", ()):
        grounded = {roles[s] for s in b.slots if s in roles}
        if len(grounded) > 1:
            return False
    # (d) selectional restrictions
    return _roles_admissible(roles, episode.scene, store)
