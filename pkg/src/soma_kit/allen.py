"""Allen interval algebra: the 13 base relations, converse, composition,
qualitative abstraction of concrete timestamps, and path-consistency
propagation over interval constraint networks.

The composition table is not hand-transcribed: it is generated once at import
time by enumerating all weak orderings of the six endpoints of three
intervals and collecting which A-to-C relations co-occur with each
(A-to-B, B-to-C) pair.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Dict, Iterator, List, Optional, Tuple

from .errors import DegenerateInterval, StaleNetwork, UnknownVariable


class BaseRelation(Enum):
    """The 13 jointly exhaustive, pairwise disjoint interval relations."""

    BEFORE = "b"
    AFTER = "bi"
    MEETS = "m"
    MET_BY = "mi"
    OVERLAPS = "o"
    OVERLAPPED_BY = "oi"
    STARTS = "s"
    STARTED_BY = "si"
    DURING = "d"
    CONTAINS = "di"
    FINISHES = "f"
    FINISHED_BY = "fi"
    EQUALS = "eq"

    @property
    def code(self) -> str:
        return self.value

    @property
    def index(self) -> int:
        return _RELATION_ORDER.index(self)

    @property
    def bit(self) -> int:
        return 1 << self.index


_RELATION_ORDER: Tuple[BaseRelation, ...] = (
    BaseRelation.BEFORE,
    BaseRelation.AFTER,
    BaseRelation.MEETS,
    BaseRelation.MET_BY,
    BaseRelation.OVERLAPS,
    BaseRelation.OVERLAPPED_BY,
    BaseRelation.STARTS,
    BaseRelation.STARTED_BY,
    BaseRelation.DURING,
    BaseRelation.CONTAINS,
    BaseRelation.FINISHES,
    BaseRelation.FINISHED_BY,
    BaseRelation.EQUALS,
)

_BY_CODE: Dict[str, BaseRelation] = {r.code: r for r in _RELATION_ORDER}

_CONVERSE: Dict[BaseRelation, BaseRelation] = {
    BaseRelation.BEFORE: BaseRelation.AFTER,
    BaseRelation.AFTER: BaseRelation.BEFORE,
    BaseRelation.MEETS: BaseRelation.MET_BY,
    BaseRelation.MET_BY: BaseRelation.MEETS,
    BaseRelation.OVERLAPS: BaseRelation.OVERLAPPED_BY,
    BaseRelation.OVERLAPPED_BY: BaseRelation.OVERLAPS,
    BaseRelation.STARTS: BaseRelation.STARTED_BY,
    BaseRelation.STARTED_BY: BaseRelation.STARTS,
    BaseRelation.DURING: BaseRelation.CONTAINS,
    BaseRelation.CONTAINS: BaseRelation.DURING,
    BaseRelation.FINISHES: BaseRelation.FINISHED_BY,
    BaseRelation.FINISHED_BY: BaseRelation.FINISHES,
    BaseRelation.EQUALS: BaseRelation.EQUALS,
}


def converse(r: BaseRelation) -> BaseRelation:
    """Converse of a base relation; an involution with eq as fixpoint."""
    return _CONVERSE[r]


_FULL_MASK = (1 << 13) - 1


@dataclass(frozen=True)
class RelationSet:
    """Immutable subset of the 13 base relations, stored as a bitmask.

    The empty set denotes inconsistency; the full set denotes no information.
    """

    mask: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.mask <= _FULL_MASK:
            raise ValueError(f"mask out of range: {self.mask}")

    @classmethod
    def of(cls, *relations: BaseRelation) -> "RelationSet":
        mask = 0
        for r in relations:
            mask |= r.bit
        return cls(mask)

    @classmethod
    def from_codes(cls, codes: str) -> "RelationSet":
        """Parse a whitespace-separated string of relation codes, e.g. "b m o"."""
        mask = 0
        for code in codes.split():
            mask |= _BY_CODE[code].bit
        return cls(mask)

    @classmethod
    def full(cls) -> "RelationSet":
        return cls(_FULL_MASK)

    @classmethod
    def empty(cls) -> "RelationSet":
        return cls(0)

    def __contains__(self, r: BaseRelation) -> bool:
        return bool(self.mask & r.bit)

    def __iter__(self) -> Iterator[BaseRelation]:
        for r in _RELATION_ORDER:
            if self.mask & r.bit:
                yield r

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __and__(self, other: "RelationSet") -> "RelationSet":
        return RelationSet(self.mask & other.mask)

    def __or__(self, other: "RelationSet") -> "RelationSet":
        return RelationSet(self.mask | other.mask)

    @property
    def is_empty(self) -> bool:
        return self.mask == 0

    @property
    def is_full(self) -> bool:
        return self.mask == _FULL_MASK

    def converse(self) -> "RelationSet":
        mask = 0
        for r in self:
            mask |= _CONVERSE[r].bit
        return RelationSet(mask)

    def codes(self) -> str:
        """Canonical textual form: codes in fixed relation order."""
        return " ".join(r.code for r in self)

    def __repr__(self) -> str:
        return f"RelationSet({{{self.codes()}}})"


def _relation_of_endpoints(
    a_start, a_end, b_start, b_end
) -> BaseRelation:
    """Base relation of two intervals given exactly comparable endpoints."""
    if a_end < b_start:
        return BaseRelation.BEFORE
    if b_end < a_start:
        return BaseRelation.AFTER
    if a_end == b_start:
        return BaseRelation.MEETS
    if b_end == a_start:
        return BaseRelation.MET_BY
    if a_start == b_start:
        if a_end == b_end:
            return BaseRelation.EQUALS
        return BaseRelation.STARTS if a_end < b_end else BaseRelation.STARTED_BY
    if a_end == b_end:
        return BaseRelation.FINISHES if a_start > b_start else BaseRelation.FINISHED_BY
    if a_start < b_start:
        return BaseRelation.CONTAINS if a_end > b_end else BaseRelation.OVERLAPS
    # a_start > b_start
    return BaseRelation.DURING if a_end < b_end else BaseRelation.OVERLAPPED_BY


def _generate_composition_table() -> Dict[Tuple[BaseRelation, BaseRelation], RelationSet]:
    """Enumerate weak orderings of six endpoints over three intervals.

    Values in range(6) suffice to realize every weak ordering of six points,
    so the table is exact, not sampled.
    """
    table: Dict[Tuple[BaseRelation, BaseRelation], int] = {}
    for points in product(range(6), repeat=6):
        a0, a1, b0, b1, c0, c1 = points
        if not (a0 < a1 and b0 < b1 and c0 < c1):
            continue
        r_ab = _relation_of_endpoints(a0, a1, b0, b1)
        r_bc = _relation_of_endpoints(b0, b1, c0, c1)
        r_ac = _relation_of_endpoints(a0, a1, c0, c1)
        key = (r_ab, r_bc)
        table[key] = table.get(key, 0) | r_ac.bit
    return {k: RelationSet(m) for k, m in table.items()}


_COMPOSITION: Dict[Tuple[BaseRelation, BaseRelation], RelationSet] = (
    _generate_composition_table()
)


def compose_base(r1: BaseRelation, r2: BaseRelation) -> RelationSet:
    """Composition of two base relations per the generated table."""
    return _COMPOSITION[(r1, r2)]


def compose(r1: RelationSet, r2: RelationSet) -> RelationSet:
    """Union over base pairs of the composition table."""
    if r1.is_full and not r2.is_empty:
        return RelationSet.full()
    if r2.is_full and not r1.is_empty:
        return RelationSet.full()
    mask = 0
    for a in r1:
        for b in r2:
            mask |= _COMPOSITION[(a, b)].mask
    return RelationSet(mask)


@dataclass(frozen=True)
class ConcreteInterval:
    """Closed interval of real seconds; strictly positive duration."""

    start: float
    end: float

    def __post_init__(self) -> None:
        if not self.start < self.end:
            raise ValueError(f"interval must satisfy start < end: [{self.start}, {self.end}]")


def _cmp_eps(x: float, y: float, eps: float) -> int:
    if abs(x - y) <= eps:
        return 0
    return -1 if x < y else 1


def relation_from_endpoints(
    a: ConcreteInterval, b: ConcreteInterval, eps: float = 0.0
) -> BaseRelation:
    """Qualitative relation of two concrete intervals.

    Endpoints within eps of each other are treated as coincident; the result
    is the unique base relation under that coarsened comparison.
    """
    if eps < 0:
        raise ValueError("eps must be non-negative")
    for iv in (a, b):
        if iv.end - iv.start <= 2 * eps:
            raise DegenerateInterval(
                f"interval [{iv.start}, {iv.end}] collapses under eps={eps}"
            )
    cs = _cmp_eps(a.start, b.start, eps)
    ce = _cmp_eps(a.end, b.end, eps)
    if cs == 0 and ce == 0:
        return BaseRelation.EQUALS
    if cs == 0:
        return BaseRelation.STARTS if ce < 0 else BaseRelation.STARTED_BY
    if ce == 0:
        return BaseRelation.FINISHES if cs > 0 else BaseRelation.FINISHED_BY
    if cs < 0 and ce < 0:
        gap = _cmp_eps(a.end, b.start, eps)
        if gap < 0:
            return BaseRelation.BEFORE
        if gap == 0:
            return BaseRelation.MEETS
        return BaseRelation.OVERLAPS
    if cs > 0 and ce > 0:
        gap = _cmp_eps(b.end, a.start, eps)
        if gap < 0:
            return BaseRelation.AFTER
        if gap == 0:
            return BaseRelation.MET_BY
        return BaseRelation.OVERLAPPED_BY
    if cs < 0 and ce > 0:
        return BaseRelation.CONTAINS
    return BaseRelation.DURING


@dataclass
class PropagationResult:
    """Outcome of path-consistency propagation."""

    consistent: bool
    witness: Optional[Tuple[str, str]] = None


class ConstraintNetwork:
    """Qualitative constraint network over interval variables.

    Labels are kept converse-closed: label(j, i) is always the converse set
    of label(i, j). Mutation marks the network stale; queries require a
    propagation pass after the last mutation.
    """

    def __init__(self) -> None:
        self._order: List[str] = []
        self._labels: Dict[Tuple[str, str], RelationSet] = {}
        self._stale = True
        self._consistent: Optional[bool] = None

    @property
    def variables(self) -> Tuple[str, ...]:
        return tuple(self._order)

    def add_variable(self, var: str) -> None:
        if var in self._labels_index():
            return
        self._order.append(var)
        self._stale = True

    def _labels_index(self) -> set:
        return set(self._order)

    def _canonical(self, i: str, j: str) -> Tuple[Tuple[str, str], bool]:
        """Canonical key (insertion order) and whether (i, j) is flipped."""
        ii, jj = self._order.index(i), self._order.index(j)
        if ii <= jj:
            return (i, j), False
        return (j, i), True

    def get_label(self, i: str, j: str) -> RelationSet:
        if i not in self._labels_index() or j not in self._labels_index():
            raise UnknownVariable(f"unknown variable in ({i}, {j})")
        if i == j:
            return RelationSet.of(BaseRelation.EQUALS)
        key, flipped = self._canonical(i, j)
        label = self._labels.get(key, RelationSet.full())
        return label.converse() if flipped else label

    def constrain(self, i: str, j: str, relations: RelationSet) -> None:
        """Intersect the current label of (i, j) with the given set."""
        for v in (i, j):
            self.add_variable(v)
        if i == j:
            raise ValueError("cannot constrain a variable against itself")
        key, flipped = self._canonical(i, j)
        incoming = relations.converse() if flipped else relations
        current = self._labels.get(key, RelationSet.full())
        self._labels[key] = current & incoming
        self._stale = True

    def _pairs(self) -> List[Tuple[str, str]]:
        n = len(self._order)
        return [
            (self._order[i], self._order[j])
            for i in range(n)
            for j in range(i + 1, n)
        ]

    def _set(self, i: str, j: str, label: RelationSet) -> None:
        key, flipped = self._canonical(i, j)
        self._labels[key] = label.converse() if flipped else label

    def propagate(self) -> PropagationResult:
        """Run path consistency to fixpoint with a work queue.

        Inconsistency (an empty label) is a return value, not an exception.
        """
        queue = deque(self._pairs())
        in_queue = set(queue)
        while queue:
            i, j = queue.popleft()
            in_queue.discard((i, j))
            rij = self.get_label(i, j)
            for k in self._order:
                if k == i or k == j:
                    continue
                for (x, y, composed) in (
                    (i, k, compose(rij, self.get_label(j, k))),
                    (k, j, compose(self.get_label(k, i), rij)),
                ):
                    old = self.get_label(x, y)
                    new = old & composed
                    if new != old:
                        if new.is_empty:
                            self._stale = False
                            self._consistent = False
                            return PropagationResult(False, (x, y))
                        self._set(x, y, new)
                        key, _ = self._canonical(x, y)
                        if key not in in_queue:
                            queue.append(key)
                            in_queue.add(key)
        self._stale = False
        self._consistent = True
        return PropagationResult(True)

    def query_relation(self, i: str, j: str) -> RelationSet:
        """Propagated label of a variable pair; full set when unconstrained."""
        if self._stale:
            raise StaleNetwork("network mutated since last propagation")
        return self.get_label(i, j)

    def snapshot(self) -> Dict[Tuple[str, str], RelationSet]:
        """Labels of all ordered canonical pairs, for equality comparisons."""
        return {pair: self.get_label(*pair) for pair in self._pairs()}
