"""scikit-learn compatible wrappers around the triage pipeline.

Rows flow through three steps that compose in a ``Pipeline``::

    raw evidence + checks_done  --TriageSignalEncoder-->  (x_opp, x_con, x_end)
    (x_opp, x_con, x_end)       --TriagePartition----->   vertex weights
    vertex weights              --ModeTracker.predict-->  active face per row
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .geometry import SUM_TOL, BarycentricPoint
from .modes import ModeSystem, TransitionEvent, step
from .scenarios import TRIAGE_LABELS, RegionParams, TriagePresets, triage_signals, triage_weights
from .simplicial import complex_from_maximal_faces, format_face


def check_unit_cube(X) -> np.ndarray:
    """2-D float array with every entry in [0, 1]."""
    X = check_array(X, dtype=np.float64)
    if X.size and (X.min() < 0 or X.max() > 1):
        raise ValueError("entries must lie in [0, 1]")
    return X


def check_weights(X, n_features: int | None = None) -> np.ndarray:
    """Rows of non-negative weights summing to one."""
    X = check_unit_cube(X)
    if n_features is not None and X.shape[1] != n_features:
        raise ValueError(f"X has {X.shape[1]} features, expected {n_features}")
    bad = np.flatnonzero(np.abs(X.sum(axis=1) - 1) > SUM_TOL)
    if bad.size:
        raise ValueError(f"row {bad[0]} does not sum to 1")
    return X


class TriageSignalEncoder(BaseEstimator, TransformerMixin):
    """Map raw evidence rows to points of the evidence cube.

    Columns of ``X`` are the evidence kinds in ``kinds`` order followed by
    the number of checks completed.
    """

    def __init__(self, kinds=None, concern_weights=None, concern_level=1.0,
                 opportunity_weights=None, opportunity_level=1.0, total_checks=1):
        self.kinds = kinds
        self.concern_weights = concern_weights
        self.concern_level = concern_level
        self.opportunity_weights = opportunity_weights
        self.opportunity_level = opportunity_level
        self.total_checks = total_checks

    def fit(self, X, y=None):
        self.presets_ = TriagePresets(
            dict(self.concern_weights or {}),
            self.concern_level,
            dict(self.opportunity_weights or {}),
            self.opportunity_level,
            self.total_checks,
        )
        self.kinds_ = list(self.kinds or sorted(set(self.presets_.concern_weights) | set(self.presets_.opportunity_weights)))
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != len(self.kinds_) + 1:
            raise ValueError(f"expected {len(self.kinds_) + 1} columns (kinds then checks_done), got {X.shape[1]}")
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "presets_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        rows = []
        for row in X:
            raw = dict(zip(self.kinds_, row[:-1].tolist()))
            checks = row[-1]
            if checks != int(checks):
                raise ValueError(f"checks_done must be integral, got {checks}")
            rows.append(triage_signals(raw, int(checks), self.presets_).cube)
        return np.asarray(rows, dtype=np.float64).reshape(-1, 3)

    def get_feature_names_out(self, input_features=None):
        return np.asarray(["x_opp", "x_con", "x_end"], dtype=object)


class TriagePartition(BaseEstimator, TransformerMixin):
    """Evaluate the triage partition of unity on rows ``(x_opp, x_con, x_end)``.

    Output columns follow ``vertices_`` (begin, concern, neither, opportunity).
    """

    def __init__(self, epsilon=0.2, delta=None):
        self.epsilon = epsilon
        self.delta = delta

    def fit(self, X=None, y=None):
        self.params_ = RegionParams(self.epsilon, self.delta)
        self.vertices_ = list(TRIAGE_LABELS)
        self.n_features_in_ = 3
        if X is not None:
            check_unit_cube(X)
        return self

    def transform(self, X):
        check_is_fitted(self, "params_")
        X = check_unit_cube(X)
        if X.shape[1] != 3:
            raise ValueError(f"expected 3 columns (x_opp, x_con, x_end), got {X.shape[1]}")
        out = np.empty((X.shape[0], len(self.vertices_)))
        for i, s in enumerate(X):
            w = triage_weights(tuple(s.tolist()), self.params_)
            out[i] = [w[v] for v in self.vertices_]
        return out

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "vertices_")
        return np.asarray(self.vertices_, dtype=object)


class ModeTracker(BaseEstimator):
    """Threshold transition engine over rows of vertex weights.

    ``predict`` replays the rows in order and returns the active face of
    each, formatted as ``{a,b}``. ``faces`` lists maximal faces over
    ``vertices``; by default the full simplex is used.
    """

    def __init__(self, vertices=TRIAGE_LABELS, faces=None, tau=0.2, eta=0.05):
        self.vertices = vertices
        self.faces = faces
        self.tau = tau
        self.eta = eta

    def fit(self, X=None, y=None):
        self.vertices_ = list(self.vertices)
        cx = complex_from_maximal_faces(self.faces or [self.vertices_])
        self.system_ = ModeSystem(cx, tau=self.tau, eta=self.eta)
        self.n_features_in_ = len(self.vertices_)
        if X is not None:
            check_weights(X, self.n_features_in_)
        return self

    def _replay(self, X):
        check_is_fitted(self, "system_")
        X = check_weights(X, self.n_features_in_)
        current, faces, events = None, [], []
        for tick, row in enumerate(X):
            p = BarycentricPoint(dict(zip(self.vertices_, row.tolist())), self.system_.complex)
            current, new = step(self.system_, current, p, tick)
            faces.append(current)
            events.extend(new)
        return faces, events

    def predict(self, X):
        faces, _ = self._replay(X)
        return np.asarray([format_face(f) for f in faces], dtype=object)

    def transition_events(self, X) -> list[TransitionEvent]:
        """Events emitted while replaying ``X``, with row indices as ticks."""
        return self._replay(X)[1]
