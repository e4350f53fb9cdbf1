"""Exact translation between ReLU networks and their spline form.

The deep-to-spline direction walks the layers.  After the first layer each
hidden unit is a spline over a shared knot vector; pushing the bundle
through ReLU plus the next affine layer keeps a hinge where the unit is
positive, zeroes it where the unit is negative, splits it where the unit
vanishes exactly, and inserts a new hinge wherever an affine piece crosses
zero inside its interval.  Crossings are located as -eta/mu from the
per-interval form, so all knot arithmetic is closed form; no sampling or
fitting is involved.

Sign decisions use tol.zero_tol.  A unit value at a knot counts as zero
when |f(x)| <= zero_tol * (1 + |mu x|), which keeps the test meaningful
when mu x and eta cancel; slopes count as zero at |mu| <= zero_tol.
"""

from __future__ import annotations

import numpy as np

from .core import (
    DEFAULT_TOL,
    CplSpline,
    DegenerateFirstLayerError,
    DimensionMismatchError,
    Layer,
    PiecewiseForm,
    ReluNetwork,
    SplineBundle,
    Tolerances,
    canonicalize,
)

__all__ = [
    "shallow_to_spline",
    "sigma_compose",
    "first_layer_canonicalize",
    "layer_transfer",
    "dnn_to_spline",
    "spline_to_shallow",
]


def shallow_to_spline(c2, b2, a1, a2, b1, tol: Tolerances = DEFAULT_TOL) -> CplSpline:
    """Spline of c2 t + b2 + sum_k a2[k] relu(a1[k] t + b1[k]), canonical.

    Units with a1[k] > 0 hinge at -b1[k]/a1[k] with coefficient a2[k] a1[k].
    Units with a1[k] < 0 hinge at the same spot with coefficient -a2[k] a1[k]
    and fold their left-side affine part into (q1, q0).  Flat units
    (|a1[k]| <= zero_tol) only shift q0.
    """
    a1 = np.atleast_1d(np.asarray(a1, dtype=float))
    a2 = np.atleast_1d(np.asarray(a2, dtype=float))
    b1 = np.atleast_1d(np.asarray(b1, dtype=float))
    if not (a1.shape == a2.shape == b1.shape):
        raise DimensionMismatchError("a1, a2, b1 must have equal length")
    for name, arr in (("a1", a1), ("a2", a2), ("b1", b1)):
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"{name} contains non-finite entries")
    q1 = float(c2)
    q0 = float(b2)
    knots: list[float] = []
    coeffs: list[float] = []
    for a, w, b in zip(a1, a2, b1):
        if abs(a) <= tol.zero_tol:
            q0 += w * max(b, 0.0)
            continue
        knots.append(-b / a)
        coeffs.append(w * abs(a))
        if a < 0:
            q1 += a * w
            q0 += b * w
    return canonicalize(CplSpline(q1, q0, np.array(knots), np.array(coeffs)), tol)


def _require_increasing(knots: np.ndarray):
    if np.any(np.diff(knots) <= 0):
        raise ValueError("expected strictly increasing knots")


def _value_classes(knots, mu, eta, zero_tol: float) -> np.ndarray:
    """-1/0/+1 class of the spline value at each knot.

    The value at knot v is taken from the piece left of it; the zero band
    scales with |mu v x_v| so that cancellation does not flip signs.
    """
    scaled = mu[:-1] * knots
    values = scaled + eta[:-1]
    zero = np.abs(values) <= zero_tol * (1.0 + np.abs(scaled))
    return np.where(zero, 0, np.sign(values)).astype(int)


def _zero_crossings(knots, mu, eta, classes, zero_tol: float):
    """Hinges created where an affine piece crosses zero inside its interval.

    A crossing on interval v is accepted exactly when the sign classes at
    its two ends are strictly opposite (the ends at +-inf take the sign of
    the adjacent slope), which rules out double counting next to a knot
    that already classified as zero.
    """
    n = knots.shape[0]
    xs: list[float] = []
    cs: list[float] = []
    for v in range(n + 1):
        slope = mu[v]
        if abs(slope) <= zero_tol:
            continue
        left = (-1 if slope > 0 else 1) if v == 0 else classes[v - 1]
        right = (1 if slope > 0 else -1) if v == n else classes[v]
        if left * right == -1:
            xs.append(-eta[v] / slope)
            cs.append(abs(slope))
    return np.array(xs), np.array(cs)


def _composed_tail(q1: float, q0: float, zero_tol: float) -> tuple[float, float]:
    """(q1, q0) of relu(f) left of every breakpoint of f."""
    if abs(q1) <= zero_tol:
        return 0.0, max(q0, 0.0)
    if q1 < 0:
        return q1, q0
    return 0.0, 0.0


def _composed_knot_coeffs(coeffs, mu, classes) -> np.ndarray:
    """Hinge coefficients of relu(f) at f's own knots, by value class."""
    split = np.maximum(mu[1:], 0.0) + np.maximum(-mu[:-1], 0.0)
    return np.where(classes > 0, coeffs, np.where(classes == 0, split, 0.0))


def sigma_compose(f: CplSpline, tol: Tolerances = DEFAULT_TOL) -> CplSpline:
    """Canonical spline of relu(f) for a canonical spline f.

    The result has at most 2 n + 1 knots: each original knot survives or
    splits, and each of the n + 1 affine pieces contributes at most one
    zero crossing.
    """
    _require_increasing(f.knots)
    form = PiecewiseForm.from_spline(f)
    classes = _value_classes(f.knots, form.mu, form.eta, tol.zero_tol)
    q1, q0 = _composed_tail(f.q1, f.q0, tol.zero_tol)
    kept = _composed_knot_coeffs(f.coeffs, form.mu, classes)
    cross_x, cross_c = _zero_crossings(f.knots, form.mu, form.eta, classes, tol.zero_tol)
    raw = CplSpline(
        q1,
        q0,
        np.concatenate((f.knots, cross_x)),
        np.concatenate((kept, cross_c)),
    )
    return canonicalize(raw, tol)


def _effective_width(a1, b1, zero_tol: float, merge_tol: float) -> int:
    """Units that survive dropping dead ones and collapsing shared hinges."""
    live = np.abs(a1) > zero_tol
    if not np.any(live):
        return 0
    hinges = np.sort(-b1[live] / a1[live])
    return 1 + int(np.sum(np.diff(hinges) > merge_tol))


def first_layer_canonicalize(
    net: ReluNetwork, tol: Tolerances = DEFAULT_TOL
) -> tuple[SplineBundle, ReluNetwork]:
    """Rewrite layer 1 as A1 = 1, b1 = -knots without changing the function.

    Each unit relu(a t + b) equals |a| relu(t - x) at x = -b/a, up to an
    affine part that folds into the next layer's source channel and bias.
    Returns the layer-2 bundle (knots, q1s = c, q0s = b, coefficients) and
    the rewritten network.  Already-canonical networks come back bit for
    bit.  Dead units or coinciding hinges raise DegenerateFirstLayerError.
    """
    first = net.layers[0]
    second = net.layers[1]
    a1 = first.A[:, 0]
    b1 = first.b
    n1 = a1.shape[0]
    if np.any(np.abs(a1) <= tol.zero_tol):
        raise DegenerateFirstLayerError(
            f"first layer has dead units; effective width "
            f"{_effective_width(a1, b1, tol.zero_tol, tol.merge_tol)} of {n1}",
            _effective_width(a1, b1, tol.zero_tol, tol.merge_tol),
        )
    hinges = -b1 / a1
    order = np.argsort(hinges, kind="stable")
    knots = hinges[order]
    if np.any(np.diff(knots) <= tol.merge_tol):
        raise DegenerateFirstLayerError(
            f"first layer has coinciding hinges; effective width "
            f"{_effective_width(a1, b1, tol.zero_tol, tol.merge_tol)} of {n1}",
            _effective_width(a1, b1, tol.zero_tol, tol.merge_tol),
        )
    scaled = (second.A * np.abs(a1)[None, :])[:, order]
    c2 = second.c - second.A @ np.maximum(-a1, 0.0)
    b2 = second.b + second.A @ np.where(a1 < 0, b1, 0.0)
    rewritten = ReluNetwork(
        (
            Layer(np.ones((n1, 1)), -knots),
            Layer(scaled, b2, c2),
            *net.layers[2:],
        )
    )
    bundle = SplineBundle(knots, c2, b2, scaled)
    return bundle, rewritten


def _merge_columns(coords, is_new, columns, tol: Tolerances):
    """Merge knot columns within merge_tol; original knots win the coordinate.

    ``coords`` need not be sorted.  Columns in a merged group are summed;
    groups whose column is entirely <= zero_tol in magnitude are dropped.
    """
    coords = np.asarray(coords, dtype=float)
    is_new = np.asarray(is_new, dtype=bool)
    order = np.argsort(coords, kind="stable")
    coords = coords[order]
    is_new = is_new[order]
    columns = columns[:, order]
    out_x: list[float] = []
    out_cols: list[np.ndarray] = []
    n = coords.shape[0]
    i = 0
    while i < n:
        j = i + 1
        while j < n and coords[j] - coords[j - 1] <= tol.merge_tol:
            j += 1
        if j == i + 1:
            column = columns[:, i]
            coord = coords[i]
        else:
            column = columns[:, i:j].sum(axis=1)
            old = np.flatnonzero(~is_new[i:j])
            coord = coords[i + old[0]] if old.size else coords[i]
        if np.max(np.abs(column)) > tol.zero_tol:
            out_x.append(float(coord))
            out_cols.append(column)
        i = j
    if not out_x:
        return np.empty(0), np.empty((columns.shape[0], 0))
    return np.array(out_x), np.column_stack(out_cols)


def layer_transfer(
    bundle: SplineBundle, A, c, b, tol: Tolerances = DEFAULT_TOL
) -> SplineBundle:
    """Push a bundle through ReLU and one affine layer with source channel.

    Output member k is sum_j A[k, j] relu(f_j) + c[k] t + b[k].  The shared
    knot vector grows by each member's zero crossings; columns that end up
    inactive for every output are removed.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    c = np.atleast_1d(np.asarray(c, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    if A.shape[1] != bundle.width:
        raise DimensionMismatchError(
            f"layer expects width {A.shape[1]} but bundle has {bundle.width} members"
        )
    if c.shape[0] != A.shape[0] or b.shape[0] != A.shape[0]:
        raise DimensionMismatchError("c and b must match the layer's output rows")
    for name, arr in (("A", A), ("c", c), ("b", b)):
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"{name} contains non-finite entries")

    knots = bundle.knots
    n_old = knots.shape[0]
    m = bundle.width
    kept = np.empty((m, n_old))
    new_coords: list[float] = []
    new_columns: list[np.ndarray] = []
    tails = np.empty((m, 2))
    for j in range(m):
        member = bundle.member(j)
        form = PiecewiseForm.from_spline(member)
        classes = _value_classes(knots, form.mu, form.eta, tol.zero_tol)
        kept[j] = _composed_knot_coeffs(member.coeffs, form.mu, classes)
        cross_x, cross_c = _zero_crossings(knots, form.mu, form.eta, classes, tol.zero_tol)
        for x, w in zip(cross_x, cross_c):
            new_coords.append(float(x))
            new_columns.append(A[:, j] * w)
        tails[j] = _composed_tail(member.q1, member.q0, tol.zero_tol)

    # tails already carry the zero-band classification of each member's q1,
    # so both halves of the linear part stay consistent with the crossings
    q1s = c + A @ tails[:, 0]
    q0s = b + A @ tails[:, 1]

    coords = np.concatenate((knots, np.array(new_coords)))
    is_new = np.concatenate((np.zeros(n_old, bool), np.ones(len(new_coords), bool)))
    old_cols = A @ kept
    if new_columns:
        columns = np.column_stack([old_cols, np.column_stack(new_columns)])
    else:
        columns = old_cols
    merged_x, merged_cols = _merge_columns(coords, is_new, columns, tol)
    return SplineBundle(merged_x, q1s, q0s, merged_cols)


def _second_layer_bundle(net: ReluNetwork, tol: Tolerances) -> SplineBundle:
    """Bundle of the layer-2 units, built unit by unit.

    Going through shallow_to_spline per unit also covers degenerate first
    layers (dead units, shared hinges), which merely shrink the knot set.
    """
    first = net.layers[0]
    second = net.layers[1]
    a1 = first.A[:, 0]
    members = [
        shallow_to_spline(second.c[j], second.b[j], a1, second.A[j], first.b, tol)
        for j in range(second.out_width)
    ]
    if members:
        coords = np.concatenate([s.knots for s in members])
        owners = np.concatenate([np.full(s.n_knots, j) for j, s in enumerate(members)])
        weights = np.concatenate([s.coeffs for s in members])
    else:
        coords, weights = np.empty(0), np.empty(0)
        owners = np.empty(0, int)
    columns = np.zeros((len(members), coords.shape[0]))
    columns[owners, np.arange(coords.shape[0])] = weights
    merged_x, merged_cols = _merge_columns(
        coords, np.ones(coords.shape[0], bool), columns, tol
    )
    return SplineBundle(
        merged_x,
        np.array([s.q1 for s in members]),
        np.array([s.q0 for s in members]),
        merged_cols,
    )


def dnn_to_spline(net: ReluNetwork, tol: Tolerances = DEFAULT_TOL) -> CplSpline:
    """Canonical spline equal to the network everywhere."""
    first = net.layers[0]
    second = net.layers[1]
    if net.depth == 2:
        return shallow_to_spline(
            second.c[0], second.b[0], first.A[:, 0], second.A[0], first.b, tol
        )
    bundle = _second_layer_bundle(net, tol)
    for layer in net.layers[2:]:
        bundle = layer_transfer(bundle, layer.A, layer.c, layer.b, tol)
    out = bundle.member(0)
    return canonicalize(out, tol)


def spline_to_shallow(spline: CplSpline) -> ReluNetwork:
    """One-hidden-layer network equal to the spline, one unit per knot.

    Uses A1 = 1, b1 = -knots, so converting the result back reproduces the
    spline bit for bit.  A knotless spline yields a width-0 hidden layer.
    """
    n = spline.n_knots
    return ReluNetwork(
        (
            Layer(np.ones((n, 1)), -spline.knots),
            Layer(
                spline.coeffs.reshape(1, n),
                np.array([spline.q0]),
                np.array([spline.q1]),
            ),
        )
    )
