"""Abstract simplicial complexes, nerves of covers and simplicial maps.

Faces are ``frozenset`` objects of string labels. A :class:`Complex` stores
every face explicitly; nothing is implied by closure, so :func:`is_valid`
can report a complex whose faces are not downward closed.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from itertools import combinations
from typing import Literal

import networkx as nx

VertexId = str
Face = frozenset  # frozenset[VertexId]; non-empty


class ComplexError(ValueError):
    """Raised for malformed faces, covers and maps."""


def make_face(labels: Iterable[VertexId]) -> Face:
    """Build a face from an iterable of labels, rejecting empty input."""
    labels = list(labels)
    for label in labels:
        if not isinstance(label, str) or not label:
            raise ComplexError(f"invalid vertex label {label!r}")
    face = frozenset(labels)
    if not face:
        raise ComplexError("empty face")
    return face


def face_key(face: Iterable[VertexId]) -> tuple:
    """Sort key: dimension first, then lexicographic labels."""
    labels = tuple(sorted(face))
    return (len(labels), labels)


def format_face(face: Iterable[VertexId] | None) -> str:
    """Canonical text form, e.g. ``{a,b}``; ``None`` and empty give ``{}``."""
    if face is None:
        return "{}"
    return "{" + ",".join(sorted(face)) + "}"


def proper_subfaces(face: Face) -> Iterator[Face]:
    """All non-empty proper subsets of ``face``."""
    labels = sorted(face)
    for k in range(1, len(labels)):
        for sub in combinations(labels, k):
            yield frozenset(sub)


def all_subfaces(face: Face) -> Iterator[Face]:
    yield from proper_subfaces(face)
    yield face


@dataclass(frozen=True)
class Complex:
    """A finite family of faces.

    Construct through :func:`complex_from_maximal_faces` to get a valid
    (downward closed) complex; the raw constructor accepts any family so
    that validity can be checked after the fact.
    """

    faces: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        faces = frozenset(make_face(f) for f in self.faces)
        object.__setattr__(self, "faces", faces)

    @property
    def vertices(self) -> tuple[VertexId, ...]:
        return tuple(sorted(set().union(*self.faces))) if self.faces else ()

    @property
    def dimension(self) -> int:
        return max((len(f) for f in self.faces), default=0) - 1

    def maximal_faces(self) -> list[Face]:
        maximal = [f for f in self.faces if not any(f < g for g in self.faces)]
        return sorted(maximal, key=face_key)

    def sorted_faces(self) -> list[Face]:
        return sorted(self.faces, key=face_key)

    def faces_of_dim(self, k: int) -> list[Face]:
        return sorted((f for f in self.faces if len(f) == k + 1), key=face_key)

    def faces_containing(self, vertex: VertexId) -> list[Face]:
        return sorted((f for f in self.faces if vertex in f), key=face_key)

    def __contains__(self, face) -> bool:
        return frozenset(face) in self.faces

    def __iter__(self) -> Iterator[Face]:
        return iter(self.sorted_faces())

    def __len__(self) -> int:
        return len(self.faces)

    def __repr__(self) -> str:
        body = ", ".join(format_face(f) for f in self.maximal_faces())
        return f"Complex([{body}])"


def complex_from_maximal_faces(maximal: Iterable[Iterable[VertexId]]) -> Complex:
    """Downward closure of a list of faces.

    >>> face_census(complex_from_maximal_faces([["a", "b", "c"]]))
    (3, 3, 1)
    """
    faces: set[Face] = set()
    for index, entry in enumerate(maximal):
        entry = list(entry)
        if not entry:
            raise ComplexError(f"entry {index} is an empty face")
        try:
            face = make_face(entry)
        except ComplexError as exc:
            raise ComplexError(f"entry {index}: {exc}") from None
        if face in faces:
            continue
        faces.update(all_subfaces(face))
    return Complex(frozenset(faces))


def is_valid(c: Complex) -> bool:
    """True iff every non-empty subset of every face is also a face."""
    return all(sub in c.faces for f in c.faces for sub in proper_subfaces(f))


def face_census(c: Complex) -> tuple[int, ...]:
    """Number of faces in each dimension, ``()`` for the empty complex."""
    if not c.faces:
        return ()
    counts = [0] * (c.dimension + 1)
    for f in c.faces:
        counts[len(f) - 1] += 1
    return tuple(counts)


@dataclass(frozen=True)
class Cover:
    """Finite family of labelled sample sets whose union is the universe."""

    sets: Mapping[VertexId, frozenset]
    sample_universe: frozenset

    def __post_init__(self):
        sets = {k: frozenset(v) for k, v in self.sets.items()}
        for label in sets:
            make_face([label])
        universe = frozenset(self.sample_universe)
        for label in sorted(sets):
            stray = sets[label] - universe
            if stray:
                raise ComplexError(
                    f"set {label!r} references samples outside the universe: "
                    f"{sorted(map(str, stray))}"
                )
        covered = frozenset().union(*sets.values()) if sets else frozenset()
        if covered != universe:
            missing = sorted(map(str, universe - covered))
            raise ComplexError(f"sets do not cover the universe; uncovered: {missing}")
        object.__setattr__(self, "sets", dict(sorted(sets.items())))
        object.__setattr__(self, "sample_universe", universe)

    @classmethod
    def from_sets(cls, sets: Mapping[VertexId, Iterable]) -> Cover:
        """Cover whose universe is the union of the given sets."""
        sets = {k: frozenset(v) for k, v in sets.items()}
        return cls(sets, frozenset().union(*sets.values()) if sets else frozenset())

    @property
    def labels(self) -> tuple[VertexId, ...]:
        return tuple(self.sets)


def nerve(cover: Cover) -> Complex:
    """Complex of label sets whose cover sets share at least one sample.

    Each sample contributes the set of labels whose cover sets contain it;
    the nerve is the downward closure of those label sets.
    """
    maximal = set()
    for sample in cover.sample_universe:
        maximal.add(frozenset(k for k, s in cover.sets.items() if sample in s))
    return complex_from_maximal_faces(m for m in maximal if m)


@dataclass(frozen=True)
class SimplicialMap:
    vertex_map: Mapping[VertexId, VertexId]
    source: Complex
    target: Complex

    def image(self, face: Iterable[VertexId]) -> Face:
        return frozenset(self.vertex_map[v] for v in face)


def validate_simplicial_map(m: SimplicialMap) -> bool:
    """True iff the image of every source face is a target face.

    Vertices may collapse, so the image of a face may be smaller than it.
    """
    missing = [v for v in m.source.vertices if v not in m.vertex_map]
    if missing:
        raise ComplexError(f"vertex map is not defined on {missing}")
    return all(m.image(f) in m.target.faces for f in m.source.faces)


def check_refinement(fine: Cover, coarse: Cover, psi: Mapping[VertexId, VertexId]) -> bool:
    """True iff every fine set lies inside the coarse set it is sent to."""
    if fine.sample_universe != coarse.sample_universe:
        raise ComplexError("covers are over different sample universes")
    missing = [k for k in fine.labels if k not in psi]
    if missing:
        raise ComplexError(f"label map is not defined on {missing}")
    unknown = sorted({psi[k] for k in fine.labels} - set(coarse.labels))
    if unknown:
        raise ComplexError(f"label map targets unknown coarse labels {unknown}")
    return all(fine.sets[k] <= coarse.sets[psi[k]] for k in fine.labels)


Relation = Literal["hasse", "all"]


def to_graph(c: Complex, relation: Relation = "hasse") -> nx.Graph:
    """Undirected graph with one node per face.

    ``relation="hasse"`` joins faces differing by exactly one vertex;
    ``relation="all"`` joins every pair of nested faces.
    """
    if relation not in ("hasse", "all"):
        raise ComplexError(f"unknown relation {relation!r}; expected 'hasse' or 'all'")
    g = nx.Graph()
    for f in c.sorted_faces():
        g.add_node(f, label=format_face(f), dim=len(f) - 1)
    for f in c.sorted_faces():
        subs = proper_subfaces(f)
        if relation == "hasse":
            subs = (s for s in subs if len(s) == len(f) - 1)
        for s in subs:
            if s in c.faces:
                g.add_edge(s, f)
    return g
