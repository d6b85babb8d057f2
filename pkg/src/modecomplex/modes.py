"""Mode systems, threshold-driven transitions, shadow modes, oracle monitoring."""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field, replace
from typing import Any

from .belief import evaluate_phi
from .geometry import BarycentricPoint, PointError, Trajectory, active_set
from .simplicial import (
    Complex,
    ComplexError,
    Face,
    VertexId,
    format_face,
    make_face,
)

WARN_DROP = "warn-drop"
WARN_ADD = "warn-add"
TRANSITION = "transition"


class ModeError(ComplexError):
    pass


class LatchViolation(ModeError):
    pass


@dataclass(frozen=True)
class ModeInfo:
    name: str
    objectives: str = ""


@dataclass(frozen=True)
class ModeSystem:
    """A complex whose faces are modes, plus transition thresholds.

    ``tau`` is the activation threshold and ``eta`` the warn margin.
    ``overrides`` maps a face to the ``(tau, eta)`` in force while that mode
    is occupied. Faces listed in ``latched`` cannot be left once occupied.
    """

    complex: Complex
    metadata: Mapping[Face, ModeInfo] = field(default_factory=dict)
    tau: float = 0.2
    eta: float = 0.05
    overrides: Mapping[Face, tuple[float, float]] = field(default_factory=dict)
    latched: frozenset = frozenset()

    def __post_init__(self):
        overrides = {make_face(f): th for f, th in self.overrides.items()}
        for face, (tau, eta) in [(None, (self.tau, self.eta)), *overrides.items()]:
            where = f" for {format_face(face)}" if face else ""
            if not 0 <= tau < 1:
                raise ModeError(f"tau{where} = {tau} outside [0, 1)")
            if not 0 < eta <= 1 - tau:
                raise ModeError(f"eta{where} = {eta} outside (0, 1 - tau]")
            if face and face not in self.complex.faces:
                raise ModeError(f"threshold override for {format_face(face)}, which is not a face")
        metadata = {}
        for face in self.complex.sorted_faces():
            metadata[face] = ModeInfo(format_face(face))
        for face, info in self.metadata.items():
            face = make_face(face)
            if face not in self.complex.faces:
                raise ModeError(f"metadata for {format_face(face)}, which is not a face")
            metadata[face] = info
        latched = frozenset(make_face(f) for f in self.latched)
        for face in latched:
            if face not in self.complex.faces:
                raise ModeError(f"latched {format_face(face)} is not a face")
        object.__setattr__(self, "overrides", overrides)
        object.__setattr__(self, "metadata", metadata)
        object.__setattr__(self, "latched", latched)

    def thresholds(self, face: Iterable[VertexId] | None) -> tuple[float, float]:
        """``(tau, eta)`` in force while ``face`` is the occupied mode."""
        if face is None:
            return self.tau, self.eta
        return self.overrides.get(frozenset(face), (self.tau, self.eta))

    def name(self, face: Iterable[VertexId]) -> str:
        return self.metadata[frozenset(face)].name

    def with_thresholds(self, tau: float, eta: float) -> ModeSystem:
        return replace(self, tau=tau, eta=eta)


@dataclass(frozen=True)
class TransitionEvent:
    tick: int
    kind: str
    source: Face | None
    target: Face

    def __post_init__(self):
        if self.kind not in (WARN_DROP, WARN_ADD, TRANSITION):
            raise ModeError(f"unknown event kind {self.kind!r}")
        if self.kind == TRANSITION and self.source == self.target:
            raise ModeError("transition event with identical endpoints")

    def row(self) -> list:
        return [self.tick, self.kind, format_face(self.source), format_face(self.target)]


def step(
    sys: ModeSystem, prev: Face | None, p: BarycentricPoint, tick: int
) -> tuple[Face, list[TransitionEvent]]:
    """Advance one tick: compute the active face and the events it causes.

    A ``transition`` is emitted when the active face changes. A ``warn-drop``
    names each active vertex within ``eta`` above its threshold, with the face
    it would leave behind; a ``warn-add`` names each carrier vertex within
    ``eta`` below its threshold, with the face it would join. Thresholds are
    those of the mode ``prev``. When no vertex clears the threshold the
    heaviest vertices are taken as active.
    """
    if p.complex != sys.complex:
        try:
            p = p.on(sys.complex)
        except PointError as exc:
            raise ModeError(f"tick {tick}: point is not on the system's complex: {exc}") from None
    tau, eta = sys.thresholds(prev)
    current = active_set(p, tau)
    if not current:
        top = max(p.weights.values())
        current = frozenset(a for a, w in p.weights.items() if w == top)

    if prev is not None and prev in sys.latched and current != prev:
        raise LatchViolation(
            f"tick {tick}: evidence leaves latched mode {format_face(prev)} for {format_face(current)}"
        )

    events = []
    if current != prev:
        events.append(TransitionEvent(tick, TRANSITION, prev, current))
    for a in sorted(current):
        if p.weight(a) - tau < eta:
            events.append(TransitionEvent(tick, WARN_DROP, current, current - {a}))
    for b in sorted(set(p.weights) - current):
        if tau - p.weight(b) < eta:
            events.append(TransitionEvent(tick, WARN_ADD, current, current | {b}))
    return current, events


class RunError(ModeError):
    """A run stopped early; the partial results are attached."""

    def __init__(self, tick, message, trajectory, events):
        super().__init__(f"tick {tick}: {message}")
        self.tick = tick
        self.trajectory = trajectory
        self.events = events


def run(
    sys: ModeSystem,
    pou,
    evidence: Iterable[Any],
    signal: Callable[[Any], Any] | None = None,
) -> tuple[Trajectory, list[TransitionEvent]]:
    """Replay an evidence stream through a partition of unity and ``step``.

    Each record needs a ``tick`` attribute. ``signal`` turns a record into
    the state fed to the partition of unity; by default the record itself.
    """
    samples: list = []
    events: list[TransitionEvent] = []
    current = None
    for record in evidence:
        tick = record.tick
        if samples and not tick > samples[-1][0]:
            raise RunError(
                tick, f"tick does not increase (previous {samples[-1][0]})", Trajectory(samples), events
            )
        try:
            state = signal(record) if signal else record
            point = evaluate_phi(pou, state).on(sys.complex)
            current, new = step(sys, current, point, tick)
        except ComplexError as exc:
            raise RunError(tick, str(exc), Trajectory(samples), events) from exc
        samples.append((tick, point))
        events.extend(new)
    return Trajectory(samples), events


def events_to_csv(events: Iterable[TransitionEvent]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["tick", "kind", "from", "to"])
    for e in events:
        writer.writerow(e.row())
    return buf.getvalue()


def add_shadow(c: Complex, alpha: VertexId, shadow: VertexId) -> Complex:
    """Add a shadow vertex for ``alpha``.

    Every face containing ``alpha`` gains a copy with ``alpha`` swapped for
    the shadow, and a linking face containing both.
    """
    if alpha not in c.vertices:
        raise ModeError(f"{alpha!r} is not a vertex")
    if shadow in c.vertices:
        raise ModeError(f"shadow label {shadow!r} is already in use")
    make_face([shadow])
    faces = set(c.faces)
    for f in c.faces_containing(alpha):
        faces.add(f - {alpha} | {shadow})
        faces.add(f | {shadow})
    return Complex(frozenset(faces))


@dataclass(frozen=True)
class OracleMonitor:
    """Call counters for external oracles with prescribed maxima."""

    limits: Mapping[str, float] = field(default_factory=dict)
    counters: Mapping[str, int] = field(default_factory=dict)
    default_limit: float = math.inf


def record_oracle_call(mon: OracleMonitor, name: str, count: int = 1) -> tuple[OracleMonitor, bool]:
    """Count ``count`` calls to ``name``; alarm once the total exceeds its limit."""
    if count < 0:
        raise ModeError(f"negative call count {count} for {name!r}")
    counters = dict(mon.counters)
    counters[name] = counters.get(name, 0) + count
    limit = mon.limits.get(name, mon.default_limit)
    return replace(mon, counters=counters), counters[name] > limit
