"""Generalised belief functions and partitions of unity."""

from __future__ import annotations

from collections.abc import Callable, Hashable, Iterable, Mapping
from dataclasses import dataclass, field
from itertools import combinations

from .geometry import SUM_TOL, BarycentricPoint
from .simplicial import Complex, ComplexError, Cover, VertexId, format_face, nerve

MAX_FRAME = 12
SUPERADD_TOL = 1e-12


class BeliefError(ComplexError):
    pass


def subsets(frame: Iterable) -> list[frozenset]:
    """Every subset of ``frame``, the empty set included."""
    items = sorted(frame)
    return [frozenset(c) for k in range(len(items) + 1) for c in combinations(items, k)]


@dataclass(frozen=True)
class BeliefFunction:
    """Set function on the power set of a finite frame of statements.

    ``values`` maps frozensets of statements to numbers in [0, 1]. Missing
    subsets are allowed here and rejected by :func:`validate_belief`.
    """

    frame: frozenset
    values: Mapping[frozenset, float]

    def __post_init__(self):
        frame = frozenset(self.frame)
        values = {}
        for key, v in self.values.items():
            key = frozenset(key)
            if not key <= frame:
                raise BeliefError(f"subset {format_face(key)} is not inside the frame")
            if not 0 <= v <= 1:
                raise BeliefError(f"value {v} for {format_face(key)} outside [0, 1]")
            values[key] = v
        values.setdefault(frozenset(), 0)
        object.__setattr__(self, "frame", frame)
        object.__setattr__(self, "values", values)

    def __call__(self, subset: Iterable) -> float:
        return self.values[frozenset(subset)]

    def pairs(self) -> list[tuple[list, float]]:
        """Serialisable ``(sorted subset labels, value)`` pairs."""
        keys = sorted(self.values, key=lambda s: (len(s), sorted(s)))
        return [(sorted(k), self.values[k]) for k in keys]


@dataclass
class BeliefReport:
    valid: bool
    violations: list[tuple[frozenset, frozenset]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.valid


def validate_belief(b: BeliefFunction, tol: float = SUPERADD_TOL) -> BeliefReport:
    """Check ``Bel(empty) = 0`` and super-additivity over every pair of subsets.

    Cost is 4**|frame| evaluations; frames above ``MAX_FRAME`` are refused.
    """
    if len(b.frame) > MAX_FRAME:
        raise BeliefError(
            f"frame has {len(b.frame)} statements; exhaustive validation is capped at {MAX_FRAME}"
        )
    power = subsets(b.frame)
    missing = [s for s in power if s not in b.values]
    if missing:
        raise BeliefError(f"no value for subset {format_face(missing[0])}")
    bel = b.values
    violations = []
    if bel[frozenset()] != 0:
        violations.append((frozenset(), frozenset()))
    for i, y in enumerate(power):
        for z in power[i + 1:]:
            if bel[y | z] + bel[y & z] < bel[y] + bel[z] - tol:
                violations.append((y, z))
    return BeliefReport(not violations, violations)


def is_normalised(b: BeliefFunction, tol: float = SUM_TOL) -> bool:
    return abs(b(b.frame) - 1) <= tol


@dataclass(frozen=True)
class MassFunction:
    """Non-negative masses on non-empty subsets with total at most one."""

    frame: frozenset
    masses: Mapping[frozenset, float]

    def __post_init__(self):
        frame = frozenset(self.frame)
        masses = {}
        for key, m in self.masses.items():
            key = frozenset(key)
            if not key:
                raise BeliefError("mass assigned to the empty set")
            if not key <= frame:
                raise BeliefError(f"subset {format_face(key)} is not inside the frame")
            if m < 0:
                raise BeliefError(f"negative mass {m} on {format_face(key)}")
            masses[key] = masses.get(key, 0) + m
        if sum(masses.values()) > 1 + SUM_TOL:
            raise BeliefError(f"total mass {sum(masses.values())} exceeds 1")
        object.__setattr__(self, "frame", frame)
        object.__setattr__(self, "masses", masses)

    @property
    def total(self) -> float:
        return sum(self.masses.values())


def belief_from_mass(m: MassFunction) -> BeliefFunction:
    """``Bel(Y)`` is the total mass of the non-empty subsets of ``Y``."""
    values = {}
    for y in subsets(m.frame):
        values[y] = min(1, sum((v for z, v in m.masses.items() if z <= y), start=0))
    return BeliefFunction(m.frame, values)


Membership = Callable[[VertexId, Hashable], bool]


@dataclass(frozen=True)
class PartitionOfUnity:
    """Per-label weight functions subordinate to a cover.

    ``cover`` is either an extensional :class:`Cover` or a membership
    predicate ``member(label, state)``. With a predicate the target complex
    must be supplied, since the nerve cannot be enumerated.
    """

    labels: tuple
    components: Mapping[VertexId, Callable]
    cover: Cover | Membership
    complex: Complex | None = None

    def __post_init__(self):
        labels = tuple(sorted(self.labels))
        object.__setattr__(self, "labels", labels)
        missing = [a for a in labels if a not in self.components]
        if missing:
            raise BeliefError(f"no component function for {missing}")
        if self.complex is None:
            if not isinstance(self.cover, Cover):
                raise BeliefError("a complex is required when the cover is a predicate")
            object.__setattr__(self, "complex", nerve(self.cover))

    def member(self, label: VertexId, state) -> bool:
        if isinstance(self.cover, Cover):
            return state in self.cover.sets[label]
        return bool(self.cover(label, state))

    def check(self, state) -> tuple[dict, list[str]]:
        """Component values at ``state`` and any broken conditions."""
        values, problems = {}, []
        for a in self.labels:
            try:
                v = self.components[a](state)
            except Exception as exc:  # noqa: BLE001 - reported per sample
                problems.append(f"component {a!r} failed: {exc}")
                continue
            values[a] = v
            if not 0 <= v <= 1:
                problems.append(f"component {a!r} = {v} outside [0, 1]")
            if v != 0 and not self.member(a, state):
                problems.append(f"component {a!r} = {v} but state is outside its set")
        if len(values) == len(self.labels):
            total = sum(values.values())
            if abs(total - 1) > SUM_TOL:
                problems.append(f"components sum to {total}")
        return values, problems


@dataclass
class PartitionReport:
    """``problems`` lists ``(sample, messages)`` for each failing sample."""

    valid: bool
    problems: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.valid


def validate_partition(p: PartitionOfUnity, samples: Iterable) -> PartitionReport:
    """Check the support and unit-sum conditions on every sample."""
    problems = []
    for s in samples:
        _, found = p.check(s)
        if found:
            problems.append((s, found))
    return PartitionReport(not problems, problems)


def evaluate_phi(p: PartitionOfUnity, state) -> BarycentricPoint:
    """Belief point of ``state`` on the partition's complex."""
    values, problems = p.check(state)
    if problems:
        raise BeliefError(f"partition of unity fails at {state!r}: " + "; ".join(problems))
    return BarycentricPoint({a: v for a, v in values.items() if v != 0}, p.complex)
