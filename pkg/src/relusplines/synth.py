"""Networks with prescribed breakpoints.

The constructions run the layer calculus in reverse.  Given nested knot
levels, per-interval slopes are fixed by a ratio recursion (consecutive
zeros pin each affine piece), weights are slope differences, and source
channels and biases make every piece vanish where prescribed.  The
three-hidden-layer build additionally selects per-unit signs eps so that
at every lower-level knot at least one third-layer unit is positive,
keeping the knot alive through the last ReLU.

Index convention: unit/knot positions in error messages and subsets (for
example ``redundancy_residual``'s ``index_set``) are 0-based.
"""

from __future__ import annotations

import math
import warnings

import numpy as np

from .core import (
    ACTIVITY_TOL,
    DEFAULT_TOL,
    ActivityError,
    CoverageError,
    CplSpline,
    DimensionMismatchError,
    InterlacingError,
    KnotHierarchy,
    Layer,
    PiecewiseForm,
    ReluNetwork,
    SplineBundle,
    SynthesisOptions,
    Tolerances,
)
from .evaluate import eval_spline
from .transfer import dnn_to_spline, layer_transfer

__all__ = [
    "slopes_from_knots",
    "weights_from_slopes",
    "synth_two_hidden",
    "synth_two_hidden_no_source",
    "redundancy_residual",
    "synth_three_hidden",
    "epsilon_select",
    "hierarchy_from_flat",
    "prescribed_knots",
]

_RETRY_BUDGET = 32


def slopes_from_knots(c_sign: float, level1, row) -> np.ndarray:
    """Per-interval slopes of a unit with the given zeros and source sign.

    ``row`` holds the unit's zeros, one per interval of ``level1`` (end
    intervals included), interlaced as row[v-1] < level1[v-1] < row[v].
    Slopes start at c_sign and follow
    mu[v] = mu[v-1] (x_v - row[v-1]) / (x_v - row[v]), so they alternate
    in sign and every piece crosses zero exactly where prescribed.
    """
    if c_sign not in (-1.0, 1.0, -1, 1):
        raise ValueError("c_sign must be -1 or +1")
    x = np.atleast_1d(np.asarray(level1, dtype=float))
    z = np.atleast_1d(np.asarray(row, dtype=float))
    if z.shape[0] != x.shape[0] + 1:
        raise DimensionMismatchError("row must have one zero per interval of level1")
    if np.any(z[:-1] >= x) or np.any(x >= z[1:]):
        raise InterlacingError("zeros must interlace level1 as row[v-1] < x_v < row[v]")
    mu = np.empty(x.shape[0] + 1)
    mu[0] = float(c_sign)
    for v in range(1, mu.shape[0]):
        mu[v] = mu[v - 1] * (x[v - 1] - z[v - 1]) / (x[v - 1] - z[v])
    return mu


def weights_from_slopes(mu) -> np.ndarray:
    """Hinge weights as slope differences along the last axis."""
    return np.diff(np.asarray(mu, dtype=float), axis=-1)


def _two_hidden_parts(h: KnotHierarchy):
    """Source signs, layer-2 weights/biases shared by both deep builds."""
    n2 = h.n2
    c_signs = np.where(np.arange(1, n2 + 1) % 2 == 1, 1.0, -1.0)
    mu = np.stack([slopes_from_knots(c_signs[j], h.level1, h.level2[j]) for j in range(n2)])
    a2 = weights_from_slopes(mu)
    b2 = -h.level2[:, 0] * c_signs
    return c_signs, a2, b2


def synth_two_hidden(
    h: KnotHierarchy, opts: SynthesisOptions | None = None, tol: Tolerances = DEFAULT_TOL
) -> ReluNetwork:
    """Width (1, n1, n2, 1) network whose active knots are exactly level1+level2.

    Source signs alternate (+1 on unit 1), biases put each unit's first
    zero where prescribed, and the output row's signs alternate the other
    way so contributions at shared knots never cancel.  ``opts.a3`` scales
    the output row magnitudes; ``opts.plus_variant`` flips it globally.

    The guarantee needs two units: with n2 = 1 and n1 > 1 no unit is
    positive at the even-position level-1 knots, which therefore drop out
    (warned, not raised).
    """
    opts = opts or SynthesisOptions()
    if h.level3 is not None:
        raise ValueError("two-hidden synthesis takes a two-level hierarchy")
    n1, n2 = h.n1, h.n2
    if n2 == 1 and n1 > 1:
        warnings.warn(
            "a single second-layer unit cannot keep even-position level-1 knots active",
            RuntimeWarning,
            stacklevel=2,
        )
    c_signs, a2, b2 = _two_hidden_parts(h)
    if opts.a3 is None:
        magnitudes = np.ones(n2)
    else:
        if opts.a3.shape[0] != n2:
            raise DimensionMismatchError(f"a3 must have length {n2}")
        magnitudes = np.abs(opts.a3)
    sign = 1.0 if opts.plus_variant else -1.0
    a3 = sign * np.where(np.arange(1, n2 + 1) % 2 == 0, 1.0, -1.0) * magnitudes
    return ReluNetwork(
        (
            Layer(np.ones((n1, 1)), -h.level1),
            Layer(a2, b2, c_signs),
            Layer(a3.reshape(1, n2), np.array([opts.b_out]), np.array([opts.c_out])),
        )
    )


def synth_two_hidden_no_source(
    knots,
    n1: int,
    n2: int,
    opts: SynthesisOptions | None = None,
    tol: Tolerances = DEFAULT_TOL,
) -> ReluNetwork:
    """Prescribed-knot network with every source channel equal to zero.

    Takes a flat strictly increasing list of n1 (n2 + 1) knots read in
    blocks [x_k, zeros of unit 1..n2 in (x_k, x_{k+1})].  Without a source
    channel each unit is constant left of x_1, so there are no knots
    there; ``opts.seeds`` sets the first-interval slopes (default
    alternating -1, +1, ...), which must change sign somewhere when
    n1 > 1.
    """
    opts = opts or SynthesisOptions()
    ks = np.atleast_1d(np.asarray(knots, dtype=float))
    if not np.all(np.isfinite(ks)):
        raise ValueError("knots contain non-finite entries")
    if ks.shape[0] != n1 * (n2 + 1):
        raise DimensionMismatchError(
            f"expected {n1 * (n2 + 1)} knots for widths ({n1}, {n2}), got {ks.shape[0]}"
        )
    if np.any(np.diff(ks) <= 0):
        raise InterlacingError("knots must be strictly increasing and distinct")
    x1 = ks[(n2 + 1) * np.arange(n1)]
    zeros = np.stack([ks[(n2 + 1) * np.arange(n1) + j] for j in range(1, n2 + 1)])
    if opts.seeds is None:
        seeds = np.where(np.arange(1, n2 + 1) % 2 == 1, -1.0, 1.0)
    else:
        if opts.seeds.shape[0] != n2:
            raise DimensionMismatchError(f"seeds must have length {n2}")
        seeds = opts.seeds
    if n1 > 1 and (np.all(seeds > 0) or np.all(seeds < 0)):
        raise ValueError("seeds need at least one sign change when n1 > 1")
    mu = np.zeros((n2, n1 + 1))
    mu[:, 1] = seeds
    for k in range(2, n1 + 1):
        mu[:, k] = mu[:, k - 1] * (x1[k - 1] - zeros[:, k - 2]) / (x1[k - 1] - zeros[:, k - 1])
    a2 = weights_from_slopes(mu)
    b2 = seeds * (x1[0] - zeros[:, 0])
    if opts.a3 is None:
        a3 = np.ones(n2)
    else:
        if opts.a3.shape[0] != n2:
            raise DimensionMismatchError(f"a3 must have length {n2}")
        a3 = opts.a3
    return ReluNetwork(
        (
            Layer(np.ones((n1, 1)), -x1),
            Layer(a2, b2, np.zeros(n2)),
            Layer(a3.reshape(1, n2), np.zeros(1), np.zeros(1)),
        )
    )


def redundancy_residual(h: KnotHierarchy, index_set, j: int) -> float:
    """How far unit j is from the no-source breakpoint relation.

    ``index_set`` selects level-1 knot positions (0-based, a nonempty
    proper subset).  The residual is sum over the set of ratio products up
    to each selected knot (exclusive) minus 1 minus the same sum inclusive;
    it vanishes exactly when the unit's zeros could also be realized with a
    zero source weight.
    """
    x = h.level1
    row = h.level2[j]
    chosen = sorted(set(int(k) for k in index_set))
    if not chosen or len(chosen) >= h.n1 or chosen[0] < 0 or chosen[-1] >= h.n1:
        raise ValueError("index_set must be a nonempty proper subset of range(n1)")
    ratios = (x - row[:-1]) / (x - row[1:])
    products = np.concatenate(([1.0], np.cumprod(ratios)))
    exclusive = sum(products[k] for k in chosen)
    inclusive = sum(products[k + 1] for k in chosen)
    return float(exclusive - 1.0 - inclusive)


def epsilon_select(values, zero_cover=None, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Greedy +-1 signs so every column is positive for some row.

    ``values[r, i]`` is third-layer unit r at knot i with sign +1; flipping
    the sign flips the row.  Each step picks the sign covering more of the
    still-uncovered columns (ties go to +1), which is at least half of
    them.  Entries within zero_tol of zero are decided by ``zero_cover``,
    a (plus_ok, minus_ok) pair of boolean matrices (default: either sign
    covers).  Raises CoverageError if columns remain uncovered.
    """
    values = np.atleast_2d(np.asarray(values, dtype=float))
    n_units, n_cols = values.shape
    if zero_cover is None:
        plus_ok = np.ones_like(values, dtype=bool)
        minus_ok = np.ones_like(values, dtype=bool)
    else:
        plus_ok, minus_ok = (np.atleast_2d(np.asarray(m, bool)) for m in zero_cover)
        if plus_ok.shape != values.shape or minus_ok.shape != values.shape:
            raise DimensionMismatchError("zero_cover masks must match the value matrix")
    zeroish = np.abs(values) <= tol.zero_tol
    covers_plus = (values > tol.zero_tol) | (zeroish & plus_ok)
    covers_minus = (values < -tol.zero_tol) | (zeroish & minus_ok)
    eps = np.empty(n_units)
    uncovered = np.ones(n_cols, dtype=bool)
    for r in range(n_units):
        gain_plus = int(np.sum(uncovered & covers_plus[r]))
        gain_minus = int(np.sum(uncovered & covers_minus[r]))
        if gain_minus > gain_plus:
            eps[r] = -1.0
            uncovered &= ~covers_minus[r]
        else:
            eps[r] = 1.0
            uncovered &= ~covers_plus[r]
    if np.any(uncovered):
        raise CoverageError(
            f"no sign choice covers knot columns {np.flatnonzero(uncovered).tolist()}",
            np.flatnonzero(uncovered),
            partial=eps,
        )
    return eps


def prescribed_knots(h: KnotHierarchy) -> np.ndarray:
    """All knots of the hierarchy, sorted ascending."""
    parts = [h.level1, h.level2.ravel()]
    if h.level3 is not None:
        parts.append(h.level3.ravel())
    return np.sort(np.concatenate(parts))


def _missing_prescribed(spline: CplSpline, prescribed, tol: Tolerances) -> np.ndarray:
    """Prescribed knots with no active knot within the activity tolerance."""
    active = spline.knots[np.abs(spline.coeffs) > tol.zero_tol]
    prescribed = np.asarray(prescribed, dtype=float)
    if active.size == 0:
        return prescribed
    gaps = np.min(np.abs(prescribed[:, None] - active[None, :]), axis=1)
    return prescribed[gaps > ACTIVITY_TOL]


def _zero_sign_masks(bundle: SplineBundle, targets: np.ndarray, tol: Tolerances):
    """Which sign keeps a hinge alive at a zero-valued target, per unit.

    At a knot where a unit vanishes exactly, the composed hinge coefficient
    is relu(slope after) + relu(-slope before); flipping the unit flips
    both slopes.  Targets are knots of the bundle, so slopes are read off
    the piecewise form directly.
    """
    n_units = bundle.width
    plus_ok = np.zeros((n_units, targets.shape[0]), dtype=bool)
    minus_ok = np.zeros_like(plus_ok)
    positions = np.searchsorted(bundle.knots, targets)
    for r in range(n_units):
        form = PiecewiseForm.from_spline(bundle.member(r))
        for i, (t, pos) in enumerate(zip(targets, positions)):
            if pos >= bundle.knots.shape[0] or abs(bundle.knots[pos] - t) > tol.merge_tol:
                continue
            before, after = form.mu[pos], form.mu[pos + 1]
            plus_ok[r, i] = max(after, 0.0) + max(-before, 0.0) > tol.zero_tol
            minus_ok[r, i] = max(-after, 0.0) + max(before, 0.0) > tol.zero_tol
    return plus_ok, minus_ok


def synth_three_hidden(
    h: KnotHierarchy,
    opts: SynthesisOptions | None = None,
    tol: Tolerances = DEFAULT_TOL,
    rng: np.random.Generator | None = None,
) -> ReluNetwork:
    """Width (1, n1, n2, n3, 1) network activating all three knot levels.

    Layers 1-2 follow the two-hidden build.  Third-layer unit r puts its
    zeros at level3 row r, seen as one zero per interval of the first
    level-2 column; its sign eps_r comes from ``opts.eps`` or greedy
    selection over the unit values at the lower-level knots.  The final
    row defaults to -eps (all positive parts add up with one sign); on an
    activity failure up to 32 seeded random retries with magnitudes in
    [0.5, 2] are attempted before raising ActivityError.  n3 below
    log2(n1 + (n1+1) n2) only triggers a warning since the post-hoc check
    decides success.
    """
    opts = opts or SynthesisOptions()
    if h.level3 is None:
        raise ValueError("three-hidden synthesis needs a three-level hierarchy")
    rng = rng if rng is not None else np.random.default_rng(0)
    n1, n2, n3 = h.n1, h.n2, h.n3
    lower_count = n1 + (n1 + 1) * n2
    if 2**n3 < lower_count:
        warnings.warn(
            f"width {n3} is below log2({lower_count}); sign selection may not cover "
            "every knot",
            RuntimeWarning,
            stacklevel=2,
        )

    c_signs, a2, b2 = _two_hidden_parts(h)
    walls = h.level2[:, 0]
    mu3 = np.stack([slopes_from_knots(1.0, walls, h.level3[r]) for r in range(n3)])
    a3 = weights_from_slopes(mu3)
    even = np.arange(1, n2 + 1) % 2 == 0
    c3 = 1.0 + a3[:, even].sum(axis=1)
    b3 = -h.level3[:, 0] - a3[:, even] @ walls[even]

    layer2_bundle = SplineBundle(h.level1, c_signs, b2, a2)
    bundle3 = layer_transfer(layer2_bundle, a3, c3, b3, tol)
    targets = np.sort(np.concatenate((h.level1, h.level2.ravel())))
    values = np.stack([eval_spline(bundle3.member(r), targets) for r in range(n3)])

    if opts.eps is None:
        try:
            eps = epsilon_select(values, _zero_sign_masks(bundle3, targets, tol), tol)
        except CoverageError as err:
            warnings.warn(
                f"greedy sign selection left knots uncovered ({err.uncovered}); "
                "continuing with the partial choice",
                RuntimeWarning,
                stacklevel=2,
            )
            eps = err.partial
    else:
        if opts.eps.shape[0] != n3:
            raise DimensionMismatchError(f"eps must have length {n3}")
        eps = opts.eps

    layers_fixed = (
        Layer(np.ones((n1, 1)), -h.level1),
        Layer(a2, b2, c_signs),
        Layer(a3 * eps[:, None], b3 * eps, c3 * eps),
    )
    wanted = prescribed_knots(h)
    a4 = opts.a4 if opts.a4 is not None else -eps
    if opts.a4 is not None and opts.a4.shape[0] != n3:
        raise DimensionMismatchError(f"a4 must have length {n3}")
    attempts = 1 if opts.a4 is not None else 1 + _RETRY_BUDGET
    missing = wanted
    for _ in range(attempts):
        net = ReluNetwork(
            layers_fixed
            + (Layer(a4.reshape(1, n3), np.array([opts.b_out]), np.array([opts.c_out])),)
        )
        missing = _missing_prescribed(dnn_to_spline(net, tol), wanted, tol)
        if missing.size == 0:
            return net
        a4 = rng.choice([-1.0, 1.0], n3) * rng.uniform(0.5, 2.0, n3)
    raise ActivityError(
        f"prescribed knots {missing.tolist()} stayed inactive after retries", missing
    )


def hierarchy_from_flat(knots, n1: int, n2: int, n3: int | None = None) -> KnotHierarchy:
    """Arrange a flat sorted knot list into a hierarchy by position.

    Two levels: blocks of n2 level-2 knots separated by single level-1
    knots, n1 + n2 (n1 + 1) in total.  Three levels additionally start
    with n3 level-3 knots before each of the first n2 + 1 separators,
    n3 (n2 + 1) more in total.
    """
    ks = np.atleast_1d(np.asarray(knots, dtype=float))
    if not np.all(np.isfinite(ks)):
        raise ValueError("knots contain non-finite entries")
    if np.any(np.diff(ks) <= 0):
        raise InterlacingError("knots must be strictly increasing and distinct")
    expected = n1 + n2 * (n1 + 1) + (0 if n3 is None else n3 * (n2 + 1))
    if ks.shape[0] != expected:
        raise DimensionMismatchError(
            f"expected {expected} knots for widths ({n1}, {n2}"
            + ("" if n3 is None else f", {n3}") + f"), got {ks.shape[0]}"
        )
    level1 = np.empty(n1)
    level2 = np.empty((n2, n1 + 1))
    pos = 0
    level3 = None
    if n3 is not None:
        level3 = np.empty((n3, n2 + 1))
        for j in range(n2 + 1):
            level3[:, j] = ks[pos : pos + n3]
            pos += n3
            if j < n2:
                level2[j, 0] = ks[pos]
                pos += 1
        level1[0] = ks[pos]
        pos += 1
        start = 1
    else:
        start = 0
    for v in range(start, n1 + 1):
        level2[:, v] = ks[pos : pos + n2]
        pos += n2
        if v < n1:
            level1[v] = ks[pos]
            pos += 1
    return KnotHierarchy(level1, level2, level3)
