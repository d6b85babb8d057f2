import math
from dataclasses import dataclass

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import maximal_face_lists
from modecomplex.belief import PartitionOfUnity
from modecomplex.geometry import BarycentricPoint, face_intersection
from modecomplex.modes import (
    LatchViolation,
    ModeError,
    ModeInfo,
    ModeSystem,
    OracleMonitor,
    RunError,
    TransitionEvent,
    add_shadow,
    events_to_csv,
    record_oracle_call,
    run,
    step,
)
from modecomplex.simplicial import complex_from_maximal_faces, is_valid
from oracles import powerset

F = frozenset
EDGE = complex_from_maximal_faces([["alpha", "beta"]])


def kinds(events):
    return [(e.kind, e.source, e.target) for e in events]


class TestModeSystem:
    def test_default_names(self):
        sys = ModeSystem(EDGE)
        assert sys.name({"alpha", "beta"}) == "{alpha,beta}"
        assert len(sys.metadata) == 3

    def test_metadata_must_name_faces(self):
        with pytest.raises(ModeError):
            ModeSystem(EDGE, metadata={F({"gamma"}): ModeInfo("x")})

    @pytest.mark.parametrize("tau,eta", [(1.0, 0.05), (-0.1, 0.05), (0.2, 0), (0.2, 0.81)])
    def test_threshold_ranges(self, tau, eta):
        with pytest.raises(ModeError):
            ModeSystem(EDGE, tau=tau, eta=eta)

    def test_override_must_name_face(self):
        with pytest.raises(ModeError, match="not a face"):
            ModeSystem(EDGE, overrides={("gamma",): (0.3, 0.05)})

    def test_override_range_checked(self):
        with pytest.raises(ModeError, match="alpha"):
            ModeSystem(EDGE, overrides={("alpha",): (0.3, 0.8)})


class TestStep:
    sys = ModeSystem(EDGE, tau=0.2, eta=0.05)

    def p(self, **w):
        return BarycentricPoint(w, EDGE)

    def test_drop_to_vertex(self):
        current, events = step(self.sys, F({"alpha", "beta"}), self.p(alpha=0.9, beta=0.1), 1)
        assert current == {"alpha"}
        assert kinds(events) == [("transition", {"alpha", "beta"}, {"alpha"})]

    def test_stationary(self):
        current, events = step(self.sys, F({"alpha"}), self.p(alpha=1), 1)
        assert current == {"alpha"}
        assert events == []

    def test_join_edge_with_warning(self):
        current, events = step(self.sys, F({"alpha"}), self.p(alpha=0.78, beta=0.22), 1)
        assert current == {"alpha", "beta"}
        assert kinds(events) == [
            ("transition", {"alpha"}, {"alpha", "beta"}),
            ("warn-drop", {"alpha", "beta"}, {"alpha"}),
        ]

    def test_warn_add(self):
        current, events = step(self.sys, F({"alpha"}), self.p(alpha=0.83, beta=0.17), 1)
        assert current == {"alpha"}
        assert kinds(events) == [("warn-add", {"alpha"}, {"alpha", "beta"})]

    def test_initial_transition(self):
        _, events = step(self.sys, None, self.p(alpha=1), 0)
        assert kinds(events) == [("transition", None, {"alpha"})]

    def test_per_mode_override(self):
        sys = ModeSystem(EDGE, overrides={("alpha",): (0.3, 0.05)})
        p = self.p(alpha=0.72, beta=0.28)
        current, events = step(sys, F({"alpha"}), p, 1)
        assert current == {"alpha"}
        assert kinds(events) == [("warn-add", {"alpha"}, {"alpha", "beta"})]
        # the same point seen from the edge uses the default thresholds
        current, events = step(sys, F({"alpha", "beta"}), p, 1)
        assert current == {"alpha", "beta"} and events == []
        assert sys.thresholds(None) == (0.2, 0.05)

    def test_nothing_above_threshold_takes_heaviest(self):
        five = complex_from_maximal_faces([list("abcde")])
        sys = ModeSystem(five, tau=0.25, eta=0.05)
        p = BarycentricPoint({"a": 0.24, "b": 0.19, "c": 0.19, "d": 0.19, "e": 0.19}, five)
        current, _ = step(sys, None, p, 0)
        assert current == {"a"}

    def test_point_off_complex(self):
        other = complex_from_maximal_faces([["gamma"]])
        with pytest.raises(ModeError, match="not on the system"):
            step(self.sys, None, BarycentricPoint({"gamma": 1}, other), 0)

    def test_latched_face(self):
        sys = ModeSystem(EDGE, latched=frozenset([F({"beta"})]))
        step(sys, F({"beta"}), self.p(beta=1), 1)
        with pytest.raises(LatchViolation, match="latched"):
            step(sys, F({"beta"}), self.p(alpha=0.5, beta=0.5), 2)

    @given(st.lists(st.integers(0, 20), min_size=3, max_size=3).filter(any), st.floats(0, 0.9), st.floats(0.01, 0.1))
    def test_current_is_face_and_events_consistent(self, raw, tau, eta):
        tri = complex_from_maximal_faces([["a", "b", "c"]])
        sys = ModeSystem(tri, tau=tau, eta=min(eta, 1 - tau))
        total = sum(raw)
        p = BarycentricPoint({k: v / total for k, v in zip("abc", raw)}, tri)
        current, events = step(sys, F({"a"}), p, 0)
        assert current in tri.faces
        for e in events:
            if e.kind == "transition":
                shared = face_intersection(e.source, e.target)
                assert not shared or shared in tri.faces


@dataclass(frozen=True)
class Rec:
    tick: int
    state: int


def counter_partition():
    """States are integers 0..4 moving weight from alpha to beta."""
    comps = {"alpha": lambda s: (4 - s) / 4, "beta": lambda s: s / 4}
    member = lambda label, s: comps[label](s) > 0  # noqa: E731
    return PartitionOfUnity(("alpha", "beta"), comps, member, EDGE)


class TestRun:
    sys = ModeSystem(EDGE)

    def test_empty_stream(self):
        traj, events = run(self.sys, counter_partition(), [], signal=lambda r: r.state)
        assert len(traj) == 0 and events == []

    def test_constant_evidence(self):
        recs = [Rec(t, 2) for t in range(5)]
        traj, events = run(self.sys, counter_partition(), recs, signal=lambda r: r.state)
        assert len(traj) == 5
        assert kinds(events) == [("transition", None, {"alpha", "beta"})]

    def test_sweep(self):
        recs = [Rec(t, t) for t in range(5)]
        _, events = run(self.sys, counter_partition(), recs, signal=lambda r: r.state)
        transitions = [(e.tick, e.source, e.target) for e in events if e.kind == "transition"]
        assert transitions == [
            (0, None, {"alpha"}),
            (1, {"alpha"}, {"alpha", "beta"}),
            (4, {"alpha", "beta"}, {"beta"}),
        ]

    def test_deterministic(self):
        recs = [Rec(t, (t * 3) % 5) for t in range(12)]
        a = run(self.sys, counter_partition(), recs, signal=lambda r: r.state)
        b = run(self.sys, counter_partition(), recs, signal=lambda r: r.state)
        assert events_to_csv(a[1]) == events_to_csv(b[1])
        assert a[0].to_csv(EDGE.vertices) == b[0].to_csv(EDGE.vertices)

    def test_non_increasing_tick(self):
        recs = [Rec(0, 0), Rec(2, 1), Rec(2, 2)]
        with pytest.raises(RunError) as info:
            run(self.sys, counter_partition(), recs, signal=lambda r: r.state)
        assert info.value.tick == 2
        assert len(info.value.trajectory) == 2

    def test_evaluation_failure_keeps_partial(self):
        recs = [Rec(0, 0), Rec(1, 9)]
        with pytest.raises(RunError, match="tick 1") as info:
            run(self.sys, counter_partition(), recs, signal=lambda r: r.state)
        assert info.value.trajectory.ticks == [0]


def test_event_rejects_self_transition():
    with pytest.raises(ModeError):
        TransitionEvent(0, "transition", F({"a"}), F({"a"}))


def test_events_csv_format():
    e = TransitionEvent(3, "transition", None, F({"b", "a"}))
    assert events_to_csv([e]) == 'tick,kind,from,to\n3,transition,{},"{a,b}"\n'


class TestShadow:
    def test_star(self):
        c = complex_from_maximal_faces([["alpha", "beta"], ["alpha", "gamma"]])
        s = add_shadow(c, "alpha", "alpha'")
        added = set(s.faces) - set(c.faces)
        assert added == {
            F({"alpha'"}), F({"alpha'", "beta"}), F({"alpha'", "gamma"}),
            F({"alpha", "alpha'"}), F({"alpha", "alpha'", "beta"}), F({"alpha", "alpha'", "gamma"}),
        }
        assert is_valid(s)

    def test_single_vertex(self):
        s = add_shadow(complex_from_maximal_faces([["a"]]), "a", "a2")
        assert set(s.faces) == {F({"a"}), F({"a2"}), F({"a", "a2"})}

    def test_errors(self):
        with pytest.raises(ModeError):
            add_shadow(EDGE, "gamma", "g2")
        with pytest.raises(ModeError):
            add_shadow(EDGE, "alpha", "beta")

    def test_double_shadow_commutes(self):
        c = complex_from_maximal_faces([["a", "b", "c"], ["a", "d"]])
        one = add_shadow(add_shadow(c, "a", "x"), "a", "y")
        two = add_shadow(add_shadow(c, "a", "y"), "a", "x")
        swap = {"x": "y", "y": "x"}
        relabelled = {F(swap.get(v, v) for v in f) for f in two.faces}
        assert set(one.faces) == relabelled

    @given(maximal_face_lists(labels=["a", "b", "c", "d", "e"]).filter(bool), st.data())
    def test_brute_force(self, maximal, data):
        c = complex_from_maximal_faces(maximal)
        alpha = data.draw(st.sampled_from(c.vertices))
        s = add_shadow(c, alpha, "z")
        expected = set()
        for x in powerset([*c.vertices, "z"]):
            if x in c.faces:
                expected.add(x)
            elif "z" in x and alpha not in x and (x - {"z"}) | {alpha} in c.faces:
                expected.add(x)
            elif "z" in x and alpha in x and x - {"z"} in c.faces:
                expected.add(x)
        assert set(s.faces) == expected
        k = sum(1 for f in c.faces if alpha in f)
        assert len(s) == len(c) + 2 * k
        assert is_valid(s)


class TestOracleMonitor:
    def test_limit_three(self):
        mon = OracleMonitor({"db": 3})
        alarms = []
        for _ in range(4):
            mon, alarm = record_oracle_call(mon, "db")
            alarms.append(alarm)
        assert alarms == [False, False, False, True]
        assert mon.counters["db"] == 4

    def test_limit_zero(self):
        assert record_oracle_call(OracleMonitor({"db": 0}), "db")[1]

    def test_unknown_name_never_alarms(self):
        mon = OracleMonitor({"db": 0})
        for _ in range(100):
            mon, alarm = record_oracle_call(mon, "other")
            assert not alarm
        assert mon.default_limit == math.inf

    def test_immutable(self):
        mon = OracleMonitor({"db": 1})
        record_oracle_call(mon, "db")
        assert mon.counters == {}
