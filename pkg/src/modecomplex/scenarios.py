"""Bundled scenarios: triage evidence pipeline, emergency response, GSB command.

The triage pipeline turns raw evidence counts into a point of the evidence
cube ``(x_opp, x_con, x_end)`` and then, through a partition of unity
subordinate to four regions of the cube, into a belief point on the
tetrahedron ``{begin, neither, concern, opportunity}``.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real

from .belief import BeliefError, PartitionOfUnity
from .config import EvidenceRecord, ScenarioConfig, load_bundled
from .geometry import BarycentricPoint
from .modes import ModeError, ModeSystem
from .simplicial import Complex, ComplexError, complex_from_maximal_faces

BEGIN = "begin"
NEITHER = "neither"
CONCERN = "concern"
OPPORTUNITY = "opportunity"
TRIAGE_LABELS = (BEGIN, CONCERN, NEITHER, OPPORTUNITY)
TRIAGE_TETRAHEDRON = complex_from_maximal_faces([TRIAGE_LABELS])


class CoverageError(ComplexError):
    """No region of the evidence cube claims a state."""


def x_end(x_begin: Real, x_con: Real, x_opp: Real) -> Real:
    """How far the triage has progressed toward an exit."""
    return max(1 - x_begin, x_con, x_opp)


@dataclass(frozen=True)
class TriageSignals:
    x_begin: Real
    x_con: Real
    x_opp: Real

    def __post_init__(self):
        for name in ("x_begin", "x_con", "x_opp"):
            v = getattr(self, name)
            if not 0 <= v <= 1:
                raise ModeError(f"{name} = {v} outside [0, 1]")

    @property
    def x_end(self) -> Real:
        return x_end(self.x_begin, self.x_con, self.x_opp)

    @property
    def cube(self) -> tuple:
        """Coordinates ``(x_opp, x_con, x_end)`` in the evidence cube."""
        return (self.x_opp, self.x_con, self.x_end)


@dataclass(frozen=True)
class TriagePresets:
    concern_weights: Mapping[str, Real] = field(default_factory=dict)
    concern_level: Real = 1
    opportunity_weights: Mapping[str, Real] = field(default_factory=dict)
    opportunity_level: Real = 1
    total_checks: int = 1

    def __post_init__(self):
        if not self.concern_level > 0 or not self.opportunity_level > 0:
            raise ModeError("concern and opportunity levels must be positive")
        if not (isinstance(self.total_checks, int) and self.total_checks > 0):
            raise ModeError(f"total_checks must be a positive integer, got {self.total_checks!r}")
        for name, weights in (("concern", self.concern_weights), ("opportunity", self.opportunity_weights)):
            for kind, w in weights.items():
                if w < 0:
                    raise ModeError(f"negative {name} weight for {kind!r}")

    @classmethod
    def from_dict(cls, d: Mapping) -> TriagePresets:
        return cls(
            dict(d.get("concern_weights", {})),
            d.get("concern_level", 1),
            dict(d.get("opportunity_weights", {})),
            d.get("opportunity_level", 1),
            d.get("total_checks", 1),
        )


def triage_signals(raw: Mapping[str, Real], checks_done: int, presets: TriagePresets) -> TriageSignals:
    """Weighted evidence sums scaled by their preset levels and capped at 1."""
    known = set(presets.concern_weights) | set(presets.opportunity_weights)
    for kind, v in raw.items():
        if kind not in known:
            raise ModeError(f"unknown evidence kind {kind!r}")
        if v < 0:
            raise ModeError(f"negative evidence {v} for {kind!r}")
    if not 0 <= checks_done <= presets.total_checks:
        raise ModeError(f"checks_done = {checks_done} outside [0, {presets.total_checks}]")

    def score(weights, level):
        total = sum((w * raw.get(k, 0) for k, w in weights.items()), start=0)
        return min(1, total / level)

    x_begin = Fraction(presets.total_checks - checks_done, presets.total_checks)
    if not all(isinstance(v, (int, Fraction)) for v in [*raw.values(), presets.concern_level, presets.opportunity_level]):
        x_begin = float(x_begin)
    return TriageSignals(
        x_begin,
        score(presets.concern_weights, presets.concern_level),
        score(presets.opportunity_weights, presets.opportunity_level),
    )


@dataclass(frozen=True)
class RegionParams:
    """Margins of the begin region (``epsilon``) and exit neighbourhoods (``delta``).

    ``delta`` defaults to ``epsilon``, which makes the four regions cover
    the cube.
    """

    epsilon: Real = 0.2
    delta: Real | None = None

    def __post_init__(self):
        if self.delta is None:
            object.__setattr__(self, "delta", self.epsilon)
        for name in ("epsilon", "delta"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise ModeError(f"{name} = {v} outside (0, 1)")


def _check_cube(s) -> tuple:
    if len(s) != 3:
        raise ModeError(f"expected (x_opp, x_con, x_end), got {s!r}")
    for v in s:
        if not 0 <= v <= 1:
            raise ModeError(f"coordinate {v} of {s!r} outside [0, 1]")
    return tuple(s)


def triage_regions(s, params: RegionParams = RegionParams()) -> frozenset:
    """Labels of the cube regions containing ``s = (x_opp, x_con, x_end)``.

    ``neither`` is kept apart from ``concern`` and ``opportunity``, which may
    overlap each other.
    """
    x_opp, x_con, x_e = _check_cube(s)
    exit_level = 1 - params.delta
    regions = set()
    if max(s) < 1 - params.epsilon:
        regions.add(BEGIN)
    if x_con >= exit_level:
        regions.add(CONCERN)
    if x_opp >= exit_level:
        regions.add(OPPORTUNITY)
    if x_e >= exit_level and x_con < exit_level and x_opp < exit_level:
        regions.add(NEITHER)
    return frozenset(regions)


def _clamp01(v):
    return min(1, max(0, v))


def triage_weights(s, params: RegionParams = RegionParams()) -> dict:
    """Normalised ramp weights for the four triage vertices.

    Each region gets a linear ramp rising from zero at its boundary; the
    ``neither`` ramp is switched off wherever concern or opportunity
    applies. On the boundary surfaces where every ramp is still zero the
    weight is shared equally among the regions that contain ``s``.
    """
    x_opp, x_con, x_e = _check_cube(s)
    eps, delta = params.epsilon, params.delta
    exit_level = 1 - delta
    raw = {
        CONCERN: _clamp01((x_con - exit_level) / delta),
        OPPORTUNITY: _clamp01((x_opp - exit_level) / delta),
        NEITHER: _clamp01((x_e - exit_level) / delta) if x_con < exit_level and x_opp < exit_level else 0,
        BEGIN: _clamp01((1 - eps - max(x_opp, x_con, x_e)) / eps),
    }
    total = sum(raw.values())
    if total > 0:
        return {k: raw[k] / total for k in TRIAGE_LABELS}
    regions = triage_regions(s, params)
    if not regions:
        raise CoverageError(f"no triage region contains {tuple(s)!r}")
    exact = all(isinstance(v, (int, Fraction)) for v in (*s, eps, delta))
    share = Fraction(1, len(regions)) if exact else 1 / len(regions)
    return {k: (share if k in regions else 0) for k in TRIAGE_LABELS}


def triage_phi(s, params: RegionParams = RegionParams()) -> BarycentricPoint:
    """Belief point of ``s`` on the triage tetrahedron."""
    return BarycentricPoint(triage_weights(s, params), TRIAGE_TETRAHEDRON)


def triage_partition(params: RegionParams = RegionParams()) -> PartitionOfUnity:
    """The triage weights packaged as a partition of unity over the cube."""
    components = {a: (lambda s, a=a: triage_weights(s, params)[a]) for a in TRIAGE_LABELS}
    return PartitionOfUnity(
        TRIAGE_LABELS,
        components,
        cover=lambda label, s: label in triage_regions(s, params),
        complex=TRIAGE_TETRAHEDRON,
    )


def direct_partition(cx: Complex) -> PartitionOfUnity:
    """Partition of unity reading vertex weights straight from the signals.

    States are mappings ``vertex -> non-negative score``; scores are
    normalised to sum to one.
    """
    vertices = cx.vertices

    def component(label):
        def phi(s):
            unknown = sorted(set(s) - set(vertices))
            if unknown:
                raise BeliefError(f"signals name unknown vertices {unknown}")
            if any(v < 0 for v in s.values()):
                raise BeliefError("negative signal")
            total = sum(s.values())
            if total <= 0:
                raise CoverageError("all signals are zero")
            return s.get(label, 0) / total
        return phi

    return PartitionOfUnity(
        vertices,
        {a: component(a) for a in vertices},
        cover=lambda label, s: s.get(label, 0) > 0,
        complex=cx,
    )


def region_params(cfg: ScenarioConfig) -> RegionParams:
    p = cfg.parameters
    return RegionParams(p.get("epsilon", 0.2), p.get("delta"))


def pipeline(cfg: ScenarioConfig):
    """``(partition, signal)`` turning a config's evidence records into states."""
    if cfg.kind == "triage":
        presets = TriagePresets.from_dict(cfg.parameters.get("presets", {}))
        params = region_params(cfg)

        def signal(record: EvidenceRecord):
            if record.checks_done is None:
                raise ModeError("triage evidence needs checks_done")
            return triage_signals(record.signals, record.checks_done, presets).cube

        return triage_partition(params), signal
    return direct_partition(cfg.complex), (lambda record: record.signals)


def build_emergency_tetrahedron() -> ModeSystem:
    """Warning vertex plus the three first-responder services, fully joined."""
    return load_bundled("emergency.json").mode_system()


def build_triage_complex() -> ModeSystem:
    return load_bundled("triage.json").mode_system()


def build_gsb_complex() -> ModeSystem:
    """Silver command prism (three tetrahedra) plus the gold structure."""
    return load_bundled("gsb.json").mode_system()


def prism_triangulation(bottom, top) -> list[list[str]]:
    """Split the prism over two ordered triangles into three tetrahedra."""
    a0, b0, c0 = bottom
    a1, b1, c1 = top
    return [[a0, b0, c0, a1], [b0, c0, a1, b1], [c0, a1, b1, c1]]
