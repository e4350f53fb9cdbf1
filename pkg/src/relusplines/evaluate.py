"""Forward evaluation and function-level comparison.

``eval_network`` and ``eval_spline`` accept a scalar or a 1-D array of
points and return the matching shape.  Because both representations are
continuous piecewise-linear, two of them agree everywhere as soon as they
agree on every knot, one interior point per interval and one point beyond
each outermost knot; ``probe_grid`` produces exactly such a grid.
"""

from __future__ import annotations

import numpy as np

from .core import CplSpline, ReluNetwork

__all__ = ["eval_network", "eval_spline", "probe_grid", "equivalence_error"]


def _as_points(t) -> tuple[np.ndarray, bool]:
    arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("evaluation points must be finite")
    return np.atleast_1d(arr), arr.ndim == 0


def eval_network(net: ReluNetwork, t):
    """Value of the network at t (scalar or 1-D array)."""
    points, scalar = _as_points(t)
    first = net.layers[0]
    state = first.A @ points[None, :] + first.b[:, None]
    for layer in net.layers[1:]:
        state = layer.A @ np.maximum(state, 0.0) + layer.c[:, None] * points[None, :] + layer.b[:, None]
    values = state[0]
    return float(values[0]) if scalar else values


def eval_spline(spline: CplSpline, t):
    """Value of the spline at t (scalar or 1-D array)."""
    points, scalar = _as_points(t)
    hinges = np.maximum(points[:, None] - spline.knots[None, :], 0.0)
    values = spline.q1 * points + spline.q0 + hinges @ spline.coeffs
    return float(values[0]) if scalar else values


def probe_grid(knots, margin: float = 1.0, per_interval: int = 1) -> np.ndarray:
    """Knots plus equispaced interior points plus one flank on each side.

    Knotless input yields {-margin, 0, margin}.  Two splines sharing the
    knot set agree everywhere iff they agree on this grid (per_interval
    >= 1), so grid comparison decides equality of piecewise-linear
    functions exactly.
    """
    if not margin > 0:
        raise ValueError("margin must be positive")
    per_interval = int(per_interval)
    if per_interval < 1:
        raise ValueError("per_interval must be at least 1")
    knots = np.asarray(knots, dtype=float)
    if knots.size == 0:
        return np.array([-margin, 0.0, margin])
    if np.any(np.diff(knots) <= 0):
        raise ValueError("knots must be strictly increasing")
    fractions = np.arange(1, per_interval + 1) / (per_interval + 1)
    left = knots[:-1]
    interior = (left[:, None] + np.diff(knots)[:, None] * fractions[None, :]).ravel()
    flanks = [knots[0] - margin, knots[-1] + margin]
    return np.unique(np.concatenate((knots, interior, flanks)))


def equivalence_error(net: ReluNetwork, spline: CplSpline, grid) -> float:
    """max over the grid of |network - spline| / (1 + |network|)."""
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if grid.size == 0:
        return 0.0
    f = eval_network(net, grid)
    s = eval_spline(spline, grid)
    return float(np.max(np.abs(f - s) / (1.0 + np.abs(f))))
