"""Barycentric points on a complex, trajectories and planar embedding."""

from __future__ import annotations

import csv
import io
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real

from .simplicial import Complex, ComplexError, Face, VertexId, format_face

SUM_TOL = 1e-9


class PointError(ComplexError):
    pass


def _is_exact(w) -> bool:
    return isinstance(w, (int, Fraction))


@dataclass(frozen=True)
class BarycentricPoint:
    """Convex weights over the vertices of ``complex``.

    Weights may be floats or :class:`fractions.Fraction`; when every weight
    is exact the unit-sum check is exact too, otherwise it uses ``SUM_TOL``.
    Zero weights are dropped, so ``weights`` holds the carrier only.
    """

    weights: Mapping[VertexId, Real]
    complex: Complex = field(repr=False)

    def __post_init__(self):
        known = set(self.complex.vertices)
        kept = {}
        for label, w in sorted(self.weights.items()):
            if label not in known:
                raise PointError(f"vertex {label!r} is not in the complex")
            if not 0 <= w <= 1:
                raise PointError(f"weight of {label!r} is {w}, outside [0, 1]")
            if w > 0:
                kept[label] = w
        total = sum(kept.values())
        if all(_is_exact(w) for w in kept.values()):
            if total != 1:
                raise PointError(f"weights sum to {total}, not 1")
        elif abs(total - 1) > SUM_TOL:
            raise PointError(f"weights sum to {total!r}, not 1")
        if frozenset(kept) not in self.complex.faces:
            raise PointError(f"support {format_face(kept)} is not a face of the complex")
        object.__setattr__(self, "weights", kept)

    @classmethod
    def vertex(cls, label: VertexId, complex: Complex) -> BarycentricPoint:
        return cls({label: 1}, complex)

    def weight(self, label: VertexId):
        return self.weights.get(label, 0)

    def on(self, other: Complex) -> BarycentricPoint:
        """The same weights viewed as a point of another complex."""
        return BarycentricPoint(self.weights, other)


def carrier(p: BarycentricPoint) -> Face:
    """Smallest face whose realisation contains ``p``."""
    return frozenset(p.weights)


def active_set(p: BarycentricPoint, tau: float, thresholds: Mapping[VertexId, float] | None = None) -> Face:
    """Vertices with weight strictly above ``tau``.

    ``thresholds`` optionally overrides ``tau`` per vertex. The result is a
    subset of the carrier and therefore a face, or empty.
    """
    thresholds = thresholds or {}
    for t in [tau, *thresholds.values()]:
        if not 0 <= t < 1:
            raise PointError(f"activation threshold {t} outside [0, 1)")
    return frozenset(a for a, w in p.weights.items() if w > thresholds.get(a, tau))


def face_intersection(x: Iterable[VertexId], z: Iterable[VertexId]) -> Face:
    """Face shared by two realised simplices; empty when they are disjoint."""
    return frozenset(x) & frozenset(z)


def mass_outside(p: BarycentricPoint, y: Iterable[VertexId]) -> Real:
    y = frozenset(y)
    inside = sum((w for a, w in p.weights.items() if a in y), start=0)
    return 1 - inside


@dataclass(frozen=True)
class Layout:
    positions: Mapping[VertexId, tuple[float, float]]

    def __post_init__(self):
        pos = {k: (float(v[0]), float(v[1])) for k, v in sorted(self.positions.items())}
        object.__setattr__(self, "positions", pos)

    def missing(self, labels: Iterable[VertexId]) -> list[VertexId]:
        return sorted(set(labels) - set(self.positions))


def embed(p: BarycentricPoint, layout: Layout) -> tuple[float, float]:
    """Planar position of ``p`` as the convex combination of vertex positions."""
    missing = layout.missing(p.weights)
    if missing:
        raise PointError(f"layout has no position for {missing}")
    x = sum(float(w) * layout.positions[a][0] for a, w in p.weights.items())
    y = sum(float(w) * layout.positions[a][1] for a, w in p.weights.items())
    return (x, y)


@dataclass(frozen=True)
class Trajectory:
    """Time-ordered belief points on a single complex."""

    samples: tuple = ()

    def __post_init__(self):
        samples = tuple(self.samples)
        for (t0, p0), (t1, p1) in zip(samples, samples[1:]):
            if not t1 > t0:
                raise PointError(f"tick {t1} does not follow tick {t0}")
            if p1.complex != p0.complex:
                raise PointError(f"point at tick {t1} lies on a different complex")
        for t, _ in samples:
            if t < 0:
                raise PointError(f"negative tick {t}")
        object.__setattr__(self, "samples", samples)

    def append(self, tick: int, point: BarycentricPoint) -> Trajectory:
        return Trajectory(self.samples + ((tick, point),))

    @property
    def ticks(self) -> list[int]:
        return [t for t, _ in self.samples]

    @property
    def points(self) -> list[BarycentricPoint]:
        return [p for _, p in self.samples]

    def __len__(self) -> int:
        return len(self.samples)

    def to_csv(self, vertices: Iterable[VertexId]) -> str:
        """``tick`` then one weight column per vertex, in the given order."""
        vertices = list(vertices)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["tick", *vertices])
        for t, p in self.samples:
            writer.writerow([t, *(format_weight(p.weight(v)) for v in vertices)])
        return buf.getvalue()


def format_weight(w) -> str:
    return format(float(w), ".12g")
