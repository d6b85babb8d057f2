"""Command-line front end.

Exit status: 0 on success, 1 when a file parses but fails validation,
2 on I/O or format errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .belief import belief_from_mass, is_normalised, validate_belief
from .config import FORMAT_ERROR, VALIDATION_ERROR, ConfigError, load_config, load_cover, load_evidence
from .modes import OracleMonitor, RunError, events_to_csv, record_oracle_call, run
from .render import render_svg
from .scenarios import pipeline
from .simplicial import ComplexError, face_census, format_face, is_valid, nerve, to_graph


def _census_line(cx) -> str:
    census = face_census(cx)
    return f"census: {','.join(map(str, census))} (total {sum(census)})"


def cmd_validate(args) -> int:
    cfg = load_config(args.config)
    if not is_valid(cfg.complex):
        print(f"{args.config}: complex is not downward closed", file=sys.stderr)
        return VALIDATION_ERROR
    print(f"scenario: {cfg.name} ({cfg.kind})")
    print(f"vertices: {len(cfg.complex.vertices)}")
    print(_census_line(cfg.complex))
    print(f"thresholds: tau={cfg.tau} eta={cfg.eta}")
    status = 0
    for label, bel in (("belief", cfg.belief), ("mass", cfg.mass and belief_from_mass(cfg.mass))):
        if bel is None:
            continue
        try:
            report = validate_belief(bel)
        except ValueError as exc:
            print(f"{args.config}: /{label}: {exc}", file=sys.stderr)
            return VALIDATION_ERROR
        if report:
            norm = "normalised" if is_normalised(bel) else "not normalised"
            print(f"{label}: valid, {norm}")
        else:
            y, z = report.violations[0]
            print(
                f"{args.config}: /{label}: super-additivity fails for {format_face(y)}, {format_face(z)}",
                file=sys.stderr,
            )
            status = VALIDATION_ERROR
    return status


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    records = load_evidence(args.evidence)
    pou, signal = pipeline(cfg)
    system = cfg.mode_system()
    try:
        trajectory, events = run(system, pou, records, signal)
    except RunError as exc:
        print(f"{args.evidence}: run aborted at {exc}", file=sys.stderr)
        return VALIDATION_ERROR

    monitor = OracleMonitor(limits=cfg.oracle_limits)
    alarms = []
    for record in records:
        for name, count in sorted(record.oracle_calls.items()):
            monitor, alarm = record_oracle_call(monitor, name, count)
            if alarm:
                alarms.append((record.tick, name, monitor.counters[name]))

    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / "trajectory.csv").write_text(trajectory.to_csv(cfg.complex.vertices), encoding="utf-8")
        (out / "events.csv").write_text(events_to_csv(events), encoding="utf-8")
        svg = render_svg(cfg.complex, cfg.layout, trajectory, title=cfg.name)
        (out / "trace.svg").write_text(svg, encoding="utf-8")
    except OSError as exc:
        print(f"{out}: cannot write outputs ({exc.strerror})", file=sys.stderr)
        return FORMAT_ERROR

    print(f"samples: {len(trajectory)}")
    print(f"events: {len(events)}")
    for tick, name, count in alarms:
        print(f"alarm: oracle {name!r} called {count} times by tick {tick}, limit {cfg.oracle_limits[name]}")
    return 0


def cmd_nerve(args) -> int:
    cover = load_cover(args.cover)
    for face in nerve(cover).maximal_faces():
        print(format_face(face))
    return 0


def cmd_graph(args) -> int:
    cfg = load_config(args.config)
    g = to_graph(cfg.complex, args.relation)
    print(f"nodes: {g.number_of_nodes()}")
    print(f"edges: {g.number_of_edges()}")
    for node in g.nodes:
        print(f"node {format_face(node)}")
    for a, b in g.edges:
        print(f"edge {format_face(a)} -- {format_face(b)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modecomplex", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a scenario config and print its face census")
    p.add_argument("config")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("run", help="replay an evidence stream through a scenario")
    p.add_argument("config")
    p.add_argument("evidence")
    p.add_argument("--out", required=True, help="directory for trajectory.csv, events.csv, trace.svg")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("nerve", help="print the nerve of a cover as maximal faces")
    p.add_argument("cover")
    p.set_defaults(func=cmd_nerve)

    p = sub.add_parser("graph", help="print the face graph of a scenario complex")
    p.add_argument("config")
    p.add_argument("--relation", choices=["hasse", "all"], default="hasse")
    p.set_defaults(func=cmd_graph)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return exc.status
    except ComplexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return VALIDATION_ERROR


if __name__ == "__main__":
    sys.exit(main())
