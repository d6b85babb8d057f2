"""Scenario config and evidence stream loading.

Configs are JSON objects; evidence streams are JSON lines, one record per
line. Errors carry a location (``file:line:col`` for syntax problems, a
``file: /json/pointer`` path for semantic ones) and an exit status: 2 for
I/O and format errors, 1 for validation failures.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from .belief import BeliefFunction, MassFunction
from .geometry import Layout
from .modes import ModeError, ModeInfo, ModeSystem
from .simplicial import Complex, ComplexError, Cover, complex_from_maximal_faces, format_face

KINDS = ("triage", "emergency", "gsb", "custom")

FORMAT_ERROR = 2
VALIDATION_ERROR = 1


class ConfigError(Exception):
    def __init__(self, location: str, message: str, status: int = VALIDATION_ERROR):
        super().__init__(f"{location}: {message}")
        self.location = location
        self.status = status


def _read_json(path: Path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read file ({exc.strerror})", FORMAT_ERROR) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg, FORMAT_ERROR) from None


def _expect(cond: bool, where: str, message: str, status: int = FORMAT_ERROR):
    if not cond:
        raise ConfigError(where, message, status)


def _number(value, where: str) -> float:
    _expect(isinstance(value, (int, float)) and not isinstance(value, bool), where, "expected a number")
    return value


def _label_list(value, where: str) -> list[str]:
    _expect(isinstance(value, list), where, "expected a list of labels")
    for i, v in enumerate(value):
        _expect(isinstance(v, str) and v != "", f"{where}/{i}", "expected a non-empty string label")
    return value


@dataclass(frozen=True)
class ScenarioConfig:
    kind: str
    name: str
    maximal_faces: list
    complex: Complex
    layout: Layout
    tau: float = 0.2
    eta: float = 0.05
    overrides: dict = field(default_factory=dict)
    latched: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)
    parameters: dict = field(default_factory=dict)
    oracle_limits: dict = field(default_factory=dict)
    belief: BeliefFunction | None = None
    mass: MassFunction | None = None
    source: str = "<config>"

    def mode_system(self) -> ModeSystem:
        return ModeSystem(
            self.complex,
            metadata=self.metadata,
            tau=self.tau,
            eta=self.eta,
            overrides=self.overrides,
            latched=frozenset(frozenset(f) for f in self.latched),
        )


def parse_config(data: Any, source: str = "<config>") -> ScenarioConfig:
    """Validate a decoded config object and resolve its references."""
    at = f"{source}: "
    _expect(isinstance(data, dict), at + "/", "expected a JSON object")
    kind = data.get("kind", "custom")
    _expect(kind in KINDS, at + "/kind", f"unknown scenario kind {kind!r}; expected one of {list(KINDS)}")
    name = data.get("name", kind)

    raw_faces = data.get("complex")
    _expect(isinstance(raw_faces, list), at + "/complex", "expected a list of faces")
    faces = [_label_list(f, f"{at}/complex/{i}") for i, f in enumerate(raw_faces)]
    try:
        cx = complex_from_maximal_faces(faces)
    except ComplexError as exc:
        raise ConfigError(at + "/complex", str(exc)) from None

    raw_layout = data.get("layout", {})
    _expect(isinstance(raw_layout, dict), at + "/layout", "expected an object of positions")
    positions = {}
    for label, pos in raw_layout.items():
        where = f"{at}/layout/{label}"
        _expect(isinstance(pos, list) and len(pos) == 2, where, "expected [x, y]")
        positions[label] = (_number(pos[0], where), _number(pos[1], where))
    layout = Layout(positions)
    missing = layout.missing(cx.vertices)
    _expect(not missing, at + "/layout", f"no position for vertices {missing}", VALIDATION_ERROR)
    extra = sorted(set(positions) - set(cx.vertices))
    _expect(not extra, at + "/layout", f"positions for unknown vertices {extra}", VALIDATION_ERROR)

    th = data.get("thresholds", {})
    _expect(isinstance(th, dict), at + "/thresholds", "expected an object")
    tau = _number(th.get("tau", 0.2), at + "/thresholds/tau")
    eta = _number(th.get("eta", 0.05), at + "/thresholds/eta")
    overrides = {}
    for i, ov in enumerate(th.get("overrides", [])):
        where = f"{at}/thresholds/overrides/{i}"
        _expect(isinstance(ov, dict) and "face" in ov, where, "expected an object with a face and tau and/or eta")
        face = frozenset(_label_list(ov["face"], where + "/face"))
        _expect(face in cx, where, f"{format_face(face)} is not a face", VALIDATION_ERROR)
        overrides[face] = (_number(ov.get("tau", tau), where + "/tau"), _number(ov.get("eta", eta), where + "/eta"))
    latched = []
    for i, f in enumerate(th.get("latched", [])):
        where = f"{at}/thresholds/latched/{i}"
        face = frozenset(_label_list(f, where))
        _expect(face in cx, where, f"{format_face(face)} is not a face", VALIDATION_ERROR)
        latched.append(sorted(face))

    metadata = {}
    for i, entry in enumerate(data.get("metadata", [])):
        where = f"{at}/metadata/{i}"
        _expect(isinstance(entry, dict) and "face" in entry, where, "expected an object with a face")
        face = frozenset(_label_list(entry["face"], where + "/face"))
        _expect(face in cx, where, f"{format_face(face)} is not a face", VALIDATION_ERROR)
        metadata[face] = ModeInfo(str(entry.get("name", format_face(face))), str(entry.get("objectives", "")))

    limits = data.get("oracle_limits", {})
    _expect(isinstance(limits, dict), at + "/oracle_limits", "expected an object")
    for k, v in limits.items():
        _number(v, f"{at}/oracle_limits/{k}")

    parameters = data.get("parameters", {})
    _expect(isinstance(parameters, dict), at + "/parameters", "expected an object")

    belief = _parse_set_function(data.get("belief"), at + "/belief", BeliefFunction)
    mass = _parse_set_function(data.get("mass"), at + "/mass", MassFunction)

    cfg = ScenarioConfig(
        kind=kind,
        name=str(name),
        maximal_faces=[sorted(f) for f in cx.maximal_faces()],
        complex=cx,
        layout=layout,
        tau=tau,
        eta=eta,
        overrides=overrides,
        latched=latched,
        metadata=metadata,
        parameters=parameters,
        oracle_limits=dict(limits),
        belief=belief,
        mass=mass,
        source=source,
    )
    try:
        cfg.mode_system()
    except ModeError as exc:
        raise ConfigError(at + "/thresholds", str(exc)) from None
    return cfg


def _parse_set_function(section, where, cls):
    """``{"frame": [...], "values": [[subset, value], ...]}`` style sections."""
    if section is None:
        return None
    _expect(isinstance(section, dict), where, "expected an object with frame and values")
    frame = _label_list(section.get("frame"), where + "/frame")
    pairs = section.get("values", [])
    _expect(isinstance(pairs, list), where + "/values", "expected a list of [subset, value] pairs")
    values = {}
    for i, pair in enumerate(pairs):
        w = f"{where}/values/{i}"
        _expect(isinstance(pair, list) and len(pair) == 2, w, "expected [subset, value]")
        if pair[0]:
            _label_list(pair[0], w)
        values[frozenset(pair[0])] = _number(pair[1], w)
    try:
        return cls(frozenset(frame), values)
    except ComplexError as exc:
        raise ConfigError(where, str(exc)) from None


def load_config(path) -> ScenarioConfig:
    return parse_config(_read_json(path), str(path))


def bundled_path(name: str) -> Path:
    """Filesystem path of a data file shipped with the package."""
    return Path(str(resources.files("modecomplex") / "data" / name))


def load_bundled(name: str) -> ScenarioConfig:
    return load_config(bundled_path(name))


@dataclass(frozen=True)
class EvidenceRecord:
    tick: int
    signals: dict = field(default_factory=dict)
    checks_done: int | None = None
    oracle_calls: dict = field(default_factory=dict)


def parse_evidence_line(obj: Any, where: str) -> EvidenceRecord:
    _expect(isinstance(obj, dict), where, "expected a JSON object")
    tick = obj.get("tick")
    _expect(isinstance(tick, int) and not isinstance(tick, bool) and tick >= 0, where, "tick must be a non-negative integer")
    signals = obj.get("signals", {})
    _expect(isinstance(signals, dict), where, "signals must be an object")
    for k, v in signals.items():
        _number(v, f"{where} signal {k!r}")
    checks = obj.get("checks_done")
    _expect(checks is None or (isinstance(checks, int) and not isinstance(checks, bool)), where, "checks_done must be an integer")
    calls = obj.get("oracle_calls", {})
    _expect(isinstance(calls, dict) and all(isinstance(v, int) for v in calls.values()), where, "oracle_calls must map names to integers")
    return EvidenceRecord(tick, dict(signals), checks, dict(calls))


def load_evidence(path) -> list[EvidenceRecord]:
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read file ({exc.strerror})", FORMAT_ERROR) from None
    records = []
    for n, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}:{n}:{exc.colno}", exc.msg, FORMAT_ERROR) from None
        records.append(parse_evidence_line(obj, f"{path}:{n}"))
    return records


def load_cover(path) -> Cover:
    """Cover file: ``{"sets": {label: [samples]}, "universe": [samples]}``.

    ``universe`` is optional and defaults to the union of the sets.
    """
    data = _read_json(path)
    at = f"{path}: "
    _expect(isinstance(data, dict) and isinstance(data.get("sets"), dict), at + "/sets", "expected an object of sets")
    sets = {}
    for label, members in data["sets"].items():
        _expect(
            isinstance(members, list) and all(isinstance(m, (str, int)) for m in members),
            f"{at}/sets/{label}",
            "expected a list of sample ids (strings or integers)",
        )
        sets[label] = frozenset(members)
    try:
        if "universe" in data:
            _expect(isinstance(data["universe"], list), at + "/universe", "expected a list of sample ids")
            return Cover(sets, frozenset(data["universe"]))
        return Cover.from_sets(sets)
    except ComplexError as exc:
        raise ConfigError(at + "/sets", str(exc)) from None
