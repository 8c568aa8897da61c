"""Independent oracles used to cross-check the library.

Everything here is deliberately coded from first principles, without reusing
the library's composition table, propagation, or parser search:

- interval relations are decomposed into order constraints over endpoint
  symbols, and conjunctions of '<'/'=' constraints are decided by union-find
  plus cycle detection;
- composition entries and network realizability are decided by enumerating
  atomic scenarios and checking endpoint-order satisfiability;
- restriction evaluation is re-coded as a flat scan;
- parsing is re-coded as exhaustive enumeration over injective assignments.
"""

from itertools import permutations, product

from soma_kit import (
    BaseRelation,
    Plan,
    ProcessFlow,
    RelationSet,
    relation_from_endpoints,
)
from soma_kit.errors import DegenerateInterval
from soma_kit.ontology import (
    And,
    EntityKind,
    HasDisposition,
    KindIs,
    Or,
    RegionWithin,
    TypeTagIn,
)
from soma_kit.parsing import _type_matches  # reused name lookup, checks stay ours

# Endpoint constraints for "A r B" as (op, left, right) over symbols
# 'a-', 'a+', 'b-', 'b+'. op is '<' or '='. Implicit: x- < x+ per interval.
RELATION_CONSTRAINTS = {
    "b": [("<", "a+", "b-")],
    "bi": [("<", "b+", "a-")],
    "m": [("=", "a+", "b-")],
    "mi": [("=", "b+", "a-")],
    "o": [("<", "a-", "b-"), ("<", "b-", "a+"), ("<", "a+", "b+")],
    "oi": [("<", "b-", "a-"), ("<", "a-", "b+"), ("<", "b+", "a+")],
    "s": [("=", "a-", "b-"), ("<", "a+", "b+")],
    "si": [("=", "a-", "b-"), ("<", "b+", "a+")],
    "d": [("<", "b-", "a-"), ("<", "a+", "b+")],
    "di": [("<", "a-", "b-"), ("<", "b+", "a+")],
    "f": [("=", "a+", "b+"), ("<", "b-", "a-")],
    "fi": [("=", "a+", "b+"), ("<", "a-", "b-")],
    "eq": [("=", "a-", "b-"), ("=", "a+", "b+")],
}


def order_constraints_satisfiable(points, constraints):
    """Decide a conjunction of '<' and '=' constraints over named points."""
    parent = {p: p for p in points}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        parent[find(x)] = find(y)

    strict = []
    for op, x, y in constraints:
        if op == "=":
            union(x, y)
        else:
            strict.append((x, y))
    edges = {}
    for x, y in strict:
        rx, ry = find(x), find(y)
        if rx == ry:
            return False  # x < y but x = y
        edges.setdefault(rx, set()).add(ry)
    # cycle detection over strict edges
    WHITE, GREY, BLACK = 0, 1, 2
    color = {find(p): WHITE for p in points}

    def dfs(node):
        color[node] = GREY
        for nxt in edges.get(node, ()):
            if color[nxt] == GREY:
                return False
            if color[nxt] == WHITE and not dfs(nxt):
                return False
        color[node] = BLACK
        return True

    return all(color[n] != WHITE or dfs(n) for n in list(color))


def atomic_constraints(var_a, var_b, code):
    """Endpoint constraints for 'var_a <code> var_b' with renamed symbols."""
    rename = {"a-": f"{var_a}-", "a+": f"{var_a}+", "b-": f"{var_b}-", "b+": f"{var_b}+"}
    return [(op, rename[x], rename[y]) for op, x, y in RELATION_CONSTRAINTS[code]]


def scenario_satisfiable(variables, scenario):
    """scenario: dict (i, j) -> base relation code, partial over pairs."""
    points = [f"{v}{sign}" for v in variables for sign in ("-", "+")]
    constraints = [("<", f"{v}-", f"{v}+") for v in variables]
    for (i, j), code in scenario.items():
        constraints += atomic_constraints(i, j, code)
    return order_constraints_satisfiable(points, constraints)


def compose_oracle(r1: BaseRelation, r2: BaseRelation) -> RelationSet:
    """All relations r3 with a satisfiable {A r1 B, B r2 C, A r3 C}."""
    members = []
    for r3 in BaseRelation:
        scenario = {("A", "B"): r1.code, ("B", "C"): r2.code, ("A", "C"): r3.code}
        if scenario_satisfiable(["A", "B", "C"], scenario):
            members.append(r3)
    return RelationSet.of(*members)


def network_realizable(variables, labels):
    """labels: dict (i, j) -> RelationSet for constrained pairs only.

    True iff some atomic scenario over the constrained pairs is satisfiable.
    Unconstrained pairs impose nothing.
    """
    pairs = sorted(labels)
    choices = [sorted(r.code for r in labels[p]) for p in pairs]
    for combo in product(*choices):
        scenario = dict(zip(pairs, combo))
        if scenario_satisfiable(variables, scenario):
            return True
    return False


def relation_case_analysis(a, b):
    """Direct case analysis of two concrete intervals at eps=0."""
    if a.end < b.start:
        return BaseRelation.BEFORE
    if a.end == b.start:
        return BaseRelation.MEETS
    if b.end < a.start:
        return BaseRelation.AFTER
    if b.end == a.start:
        return BaseRelation.MET_BY
    if a.start == b.start and a.end == b.end:
        return BaseRelation.EQUALS
    if a.start == b.start:
        return BaseRelation.STARTS if a.end < b.end else BaseRelation.STARTED_BY
    if a.end == b.end:
        return BaseRelation.FINISHED_BY if a.start < b.start else BaseRelation.FINISHES
    if a.start < b.start < b.end < a.end:
        return BaseRelation.CONTAINS
    if b.start < a.start < a.end < b.end:
        return BaseRelation.DURING
    if a.start < b.start:
        return BaseRelation.OVERLAPS
    return BaseRelation.OVERLAPPED_BY


def restriction_brute_force(entity, r):
    """Flat re-implementation of restriction evaluation."""
    if isinstance(r, KindIs):
        return entity.kind == r.kind
    if isinstance(r, TypeTagIn):
        return any(entity.type_tag == tag for tag in r.tags)
    if isinstance(r, HasDisposition):
        found = False
        for d in entity.dispositions:
            if d.disposition_type == r.disposition_type:
                found = True
        return found
    if isinstance(r, RegionWithin):
        if entity.kind == EntityKind.REGION:
            return (
                entity.value is not None
                and entity.units == r.units
                and not (entity.value < r.lo or entity.value > r.hi)
            )
        for q in entity.qualities:
            if q.units == r.units and q.value is not None:
                if not (q.value < r.lo or q.value > r.hi):
                    return True
        return False
    if isinstance(r, And):
        for item in r.items:
            if not restriction_brute_force(entity, item):
                return False
        return True
    if isinstance(r, Or):
        for item in r.items:
            if restriction_brute_force(entity, item):
                return True
        return False
    raise TypeError(r)


def parse_oracle(episode, library, store):
    """Exhaustive enumeration of interpretations: all injective phase-token
    maps crossed with all role assignments, filtered by the four parser
    conditions."""
    from soma_kit.activity import compile_constraints

    results = set()
    for d in library:
        if not isinstance(d, (Plan, ProcessFlow)) or not d.phases:
            continue
        net = compile_constraints(d)
        phases = list(d.phases)
        tokens = list(episode.tokens)
        if len(tokens) < len(phases):
            continue
        for assignment in permutations(tokens, len(phases)):
            mapping = dict(zip((p.id for p in phases), assignment))
            if not _assignment_ok(d, phases, mapping, net, episode, store):
                continue
            for roles in _all_role_groundings(d, phases, mapping, episode, store):
                token_ids = {t.id for t in mapping.values()}
                results.add(
                    (
                        d.id,
                        tuple(sorted((pid, t.id) for pid, t in mapping.items())),
                        tuple(sorted(roles.items())),
                    )
                )
    return results


def _assignment_ok(d, phases, mapping, net, episode, store):
    for p in phases:
        if not _type_matches(mapping[p.id], p.concept, store):
            return False
    ids = [p.id for p in phases]
    for i, pid in enumerate(ids):
        for qid in ids[i + 1:]:
            try:
                rel = relation_from_endpoints(
                    mapping[pid].interval, mapping[qid].interval, episode.eps
                )
            except DegenerateInterval:
                return False
            if rel not in net.query_relation(pid, qid):
                return False
    return True


def _all_role_groundings(d, phases, mapping, episode, store):
    from soma_kit.ontology import ConceptKind

    slots, options = [], []
    for p in phases:
        for rid in p.uses_roles:
            slots.append((p.id, rid))
            options.append(mapping[p.id].participants)
    for combo in product(*options) if slots else [()]:
        grounding = dict(zip(slots, combo))
        ok = True
        for b in getattr(d, "bindings", ()):
            seen = {grounding[s] for s in b.slots if s in grounding}
            if len(seen) > 1:
                ok = False
                break
            if seen:
                v = seen.pop()
                for s in b.slots:
                    grounding.setdefault(s, v)
        if not ok:
            continue
        admissible = True
        for (_, rid), eid in grounding.items():
            if store.concept(rid).kind is not ConceptKind.ROLE:
                continue
            if eid not in episode.scene or not store.check_classification(
                rid, episode.scene.entity(eid)
            ):
                admissible = False
                break
        if admissible:
            yield grounding
