"""Value types shared by every module in the package.

Conventions:

* A network maps R -> R through L affine layers with ReLU between them.
  Layer 1 is t -> A1 t + b1 where A1 is an (n1, 1) column.  Every later
  layer also receives the raw input through a "source channel" vector c:

      F_l = A_l relu(F_{l-1}) + t c_l + b_l,   l = 2 .. L.

  Input and output widths are 1; hidden widths may be any size (a width-0
  hidden layer is the degenerate image of a knotless spline).
* A spline is s(t) = q1 t + q0 + sum_k coeffs[k] relu(t - knots[k]).
  A knot is "active" when its coefficient is nonzero.  Canonical form
  keeps only active knots, strictly increasing.  ``CplSpline`` itself only
  requires finite data of matching length, so raw (unsorted, duplicated)
  hinge collections can be carried into :func:`canonicalize`.
* Hinges that would sit at -inf (flat inputs produce no breakpoint) are
  never materialized; every stored knot is finite.
* All arithmetic is float64.  Instances are frozen and their arrays are
  marked read-only, so values can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "ACTIVITY_TOL",
    "Layer",
    "ReluNetwork",
    "CplSpline",
    "PiecewiseForm",
    "SplineBundle",
    "KnotHierarchy",
    "SynthesisOptions",
    "canonicalize",
    "knot_bound",
    "DimensionMismatchError",
    "InterlacingError",
    "DegenerateFirstLayerError",
    "ActivityError",
    "CoverageError",
]


class DimensionMismatchError(ValueError):
    """Array shapes disagree with the declared layer widths."""


class InterlacingError(ValueError):
    """Prescribed knots violate the required nesting pattern."""


class DegenerateFirstLayerError(ValueError):
    """First layer has dead units or coinciding hinge locations.

    ``effective_width`` is the number of units that survive after dropping
    dead units and collapsing duplicate hinges.
    """

    def __init__(self, message: str, effective_width: int):
        super().__init__(message)
        self.effective_width = effective_width


class ActivityError(RuntimeError):
    """Synthesis produced a spline missing some prescribed knots.

    ``inactive`` lists the prescribed knot locations that came out inactive.
    """

    def __init__(self, message: str, inactive):
        super().__init__(message)
        self.inactive = [float(x) for x in inactive]


class CoverageError(RuntimeError):
    """Greedy sign selection left some knots uncovered.

    ``uncovered`` holds the offending column indices; ``partial`` the sign
    vector chosen so far (usable as a best effort).
    """

    def __init__(self, message: str, uncovered, partial=None):
        super().__init__(message)
        self.uncovered = [int(i) for i in uncovered]
        self.partial = None if partial is None else np.asarray(partial, float)


def _frozen_array(values, *, ndim: int, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != ndim:
        raise DimensionMismatchError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    arr.setflags(write=False)
    return arr


def _finite_float(value, name: str) -> float:
    out = float(value)
    if not math.isfinite(out):
        raise ValueError(f"{name} must be finite, got {out!r}")
    return out


@dataclass(frozen=True)
class Tolerances:
    """Tolerance bundle used by every numeric decision in the package.

    zero_tol   absolute threshold below which a coefficient, weight or
               function value counts as zero
    merge_tol  knots closer than this are the same knot
    eval_tol   relative tolerance for function-equality verdicts
    """

    zero_tol: float = 1e-10
    merge_tol: float = 1e-12
    eval_tol: float = 1e-8

    def __post_init__(self):
        for name in ("zero_tol", "merge_tol", "eval_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.merge_tol > self.zero_tol:
            raise ValueError("merge_tol must not exceed zero_tol")


DEFAULT_TOL = Tolerances()

# absolute distance within which a prescribed knot counts as realized
ACTIVITY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Layer:
    """One affine layer.  ``c`` is the source-channel vector, None on layer 1."""

    A: np.ndarray
    b: np.ndarray
    c: np.ndarray | None = None

    def __post_init__(self):
        A = np.array(self.A, dtype=float)
        if A.ndim != 2:
            raise DimensionMismatchError(f"layer matrix must be 2-dimensional, got shape {A.shape}")
        if not np.all(np.isfinite(A)):
            raise ValueError("layer matrix contains non-finite entries")
        A.setflags(write=False)
        object.__setattr__(self, "A", A)
        b = _frozen_array(self.b, ndim=1, name="layer bias")
        object.__setattr__(self, "b", b)
        if b.shape[0] != A.shape[0]:
            raise DimensionMismatchError(
                f"bias length {b.shape[0]} does not match {A.shape[0]} output rows"
            )
        if self.c is not None:
            c = _frozen_array(self.c, ndim=1, name="source channel")
            if c.shape[0] != A.shape[0]:
                raise DimensionMismatchError(
                    f"source channel length {c.shape[0]} does not match {A.shape[0]} output rows"
                )
            object.__setattr__(self, "c", c)

    @property
    def out_width(self) -> int:
        return self.A.shape[0]

    @property
    def in_width(self) -> int:
        return self.A.shape[1]


@dataclass(frozen=True, eq=False)
class ReluNetwork:
    """Feed-forward ReLU network from R to R with source channels.

    ``layers[0]`` is the knot-placing layer (no source channel); all later
    layers carry one.  Widths chain: layer l maps width n_{l-1} to n_l with
    n_0 = n_L = 1.
    """

    layers: tuple[Layer, ...]

    def __post_init__(self):
        layers = tuple(self.layers)
        object.__setattr__(self, "layers", layers)
        if len(layers) < 2:
            raise DimensionMismatchError("a network needs at least two affine layers")
        if layers[0].c is not None:
            raise DimensionMismatchError("layer 1 must not carry a source channel")
        if layers[0].in_width != 1:
            raise DimensionMismatchError("layer 1 must take a scalar input")
        for i, layer in enumerate(layers[1:], start=2):
            if layer.c is None:
                raise DimensionMismatchError(f"layer {i} is missing its source channel")
            if layer.in_width != layers[i - 2].out_width:
                raise DimensionMismatchError(
                    f"layer {i} expects width {layer.in_width} but layer {i - 1} "
                    f"produces width {layers[i - 2].out_width}"
                )
        if layers[-1].out_width != 1:
            raise DimensionMismatchError("the last layer must produce a scalar")

    @property
    def depth(self) -> int:
        """Number of affine layers L."""
        return len(self.layers)

    @property
    def widths(self) -> tuple[int, ...]:
        """(n_0, n_1, ..., n_L) with n_0 = n_L = 1."""
        return (1,) + tuple(layer.out_width for layer in self.layers)

    @classmethod
    def shallow(cls, a1, b1, a2, c2=0.0, b2=0.0) -> "ReluNetwork":
        """One-hidden-layer network sum_k a2[k] relu(a1[k] t + b1[k]) + c2 t + b2."""
        a1 = np.atleast_1d(np.asarray(a1, float))
        layer1 = Layer(a1.reshape(-1, 1), b1)
        layer2 = Layer(
            np.atleast_1d(np.asarray(a2, float)).reshape(1, -1),
            np.array([b2], float),
            np.array([c2], float),
        )
        return cls((layer1, layer2))


@dataclass(frozen=True, eq=False)
class CplSpline:
    """Continuous piecewise-linear function q1 t + q0 + sum coeffs relu(t - knots).

    Construction only checks finiteness and matching lengths; canonical
    form (knots strictly increasing, every coefficient nonzero) is
    established by :func:`canonicalize` and holds for every spline the
    library itself returns.
    """

    q1: float
    q0: float
    knots: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "q1", _finite_float(self.q1, "q1"))
        object.__setattr__(self, "q0", _finite_float(self.q0, "q0"))
        knots = _frozen_array(self.knots, ndim=1, name="knots")
        coeffs = _frozen_array(self.coeffs, ndim=1, name="coeffs")
        if knots.shape != coeffs.shape:
            raise DimensionMismatchError(
                f"{knots.shape[0]} knots but {coeffs.shape[0]} coefficients"
            )
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def n_knots(self) -> int:
        return self.knots.shape[0]

    def is_canonical(self, tol: Tolerances = DEFAULT_TOL) -> bool:
        gaps_ok = bool(np.all(np.diff(self.knots) > tol.merge_tol))
        active = bool(np.all(np.abs(self.coeffs) > tol.zero_tol))
        return gaps_ok and active


@dataclass(frozen=True, eq=False)
class PiecewiseForm:
    """Per-interval slopes and intercepts of a spline with N knots.

    ``mu[v]`` and ``eta[v]`` describe the affine piece on the v-th interval,
    v = 0 .. N, where interval 0 is left of the first knot.
    """

    mu: np.ndarray
    eta: np.ndarray

    def __post_init__(self):
        mu = _frozen_array(self.mu, ndim=1, name="mu")
        eta = _frozen_array(self.eta, ndim=1, name="eta")
        if mu.shape != eta.shape:
            raise DimensionMismatchError("mu and eta must have equal length")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "eta", eta)

    @classmethod
    def from_spline(cls, spline: CplSpline) -> "PiecewiseForm":
        if np.any(np.diff(spline.knots) <= 0):
            raise ValueError("piecewise form needs strictly increasing knots")
        mu = np.concatenate(([spline.q1], spline.q1 + np.cumsum(spline.coeffs)))
        eta = np.concatenate(([spline.q0], spline.q0 - np.cumsum(spline.coeffs * spline.knots)))
        return cls(mu, eta)

    def jumps(self) -> np.ndarray:
        """Slope jumps mu[v] - mu[v-1]; these are the hinge coefficients."""
        return np.diff(self.mu)


@dataclass(frozen=True, eq=False)
class SplineBundle:
    """Several splines over one shared strictly increasing knot vector.

    Row j of ``coeff_matrix`` together with ``q1s[j]``, ``q0s[j]`` is the
    j-th member; entries may be zero where a member has no breakpoint.
    """

    knots: np.ndarray
    q1s: np.ndarray
    q0s: np.ndarray
    coeff_matrix: np.ndarray

    def __post_init__(self):
        knots = _frozen_array(self.knots, ndim=1, name="bundle knots")
        q1s = _frozen_array(self.q1s, ndim=1, name="q1s")
        q0s = _frozen_array(self.q0s, ndim=1, name="q0s")
        matrix = np.array(self.coeff_matrix, dtype=float)
        if matrix.ndim != 2:
            raise DimensionMismatchError("coeff_matrix must be 2-dimensional")
        if not np.all(np.isfinite(matrix)):
            raise ValueError("coeff_matrix contains non-finite entries")
        if np.any(np.diff(knots) <= 0):
            raise ValueError("bundle knots must be strictly increasing")
        if q1s.shape != q0s.shape or q1s.shape[0] != matrix.shape[0]:
            raise DimensionMismatchError("q1s/q0s length must match coeff_matrix rows")
        if matrix.shape[1] != knots.shape[0]:
            raise DimensionMismatchError("coeff_matrix columns must match knot count")
        matrix.setflags(write=False)
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "q1s", q1s)
        object.__setattr__(self, "q0s", q0s)
        object.__setattr__(self, "coeff_matrix", matrix)

    @property
    def width(self) -> int:
        return self.coeff_matrix.shape[0]

    def member(self, j: int) -> CplSpline:
        """The j-th spline, with zero coefficients kept in place."""
        return CplSpline(self.q1s[j], self.q0s[j], self.knots, self.coeff_matrix[j])


def _check_cell(values, lo: float, hi: float, what: str):
    """Require pairwise-distinct values strictly inside (lo, hi)."""
    v = np.sort(np.asarray(values, float))
    if np.any(v <= lo) or np.any(v >= hi):
        raise InterlacingError(f"{what} must lie strictly inside ({lo}, {hi})")
    if np.any(np.diff(v) <= 0):
        raise InterlacingError(f"{what} must be pairwise distinct")


@dataclass(frozen=True, eq=False)
class KnotHierarchy:
    """Prescribed breakpoints for synthesis, nested level by level.

    level1      (n1,) strictly increasing
    level2      (n2, n1 + 1); column v lies strictly between level-1 knots
                v and v+1 (with -inf / +inf at the ends)
    level3      optional (n3, n2 + 1); all entries precede level1[0], and
                column j lies strictly between consecutive first-column
                level-2 knots (requires level2[:, 0] increasing)
    """

    level1: np.ndarray
    level2: np.ndarray
    level3: np.ndarray | None = None

    def __post_init__(self):
        level1 = _frozen_array(self.level1, ndim=1, name="level1")
        if level1.shape[0] < 1:
            raise InterlacingError("level1 needs at least one knot")
        if np.any(np.diff(level1) <= 0):
            raise InterlacingError("level1 knots must be strictly increasing")
        level2 = np.array(self.level2, dtype=float)
        if level2.ndim != 2 or level2.shape[1] != level1.shape[0] + 1:
            raise DimensionMismatchError(
                f"level2 must have shape (n2, {level1.shape[0] + 1}), got {level2.shape}"
            )
        if not np.all(np.isfinite(level2)):
            raise ValueError("level2 contains non-finite entries")
        bounds = np.concatenate(([-np.inf], level1, [np.inf]))
        for v in range(level2.shape[1]):
            _check_cell(level2[:, v], bounds[v], bounds[v + 1], f"level-2 column {v}")
        level2.setflags(write=False)
        object.__setattr__(self, "level1", level1)
        object.__setattr__(self, "level2", level2)
        if self.level3 is not None:
            level3 = np.array(self.level3, dtype=float)
            if level3.ndim != 2 or level3.shape[1] != level2.shape[0] + 1:
                raise DimensionMismatchError(
                    f"level3 must have shape (n3, {level2.shape[0] + 1}), got {level3.shape}"
                )
            if not np.all(np.isfinite(level3)):
                raise ValueError("level3 contains non-finite entries")
            col0 = level2[:, 0]
            if np.any(np.diff(col0) <= 0):
                raise InterlacingError(
                    "level2 first column must be increasing when level3 is present"
                )
            walls = np.concatenate(([-np.inf], col0, [level1[0]]))
            for j in range(level3.shape[1]):
                _check_cell(level3[:, j], walls[j], walls[j + 1], f"level-3 column {j}")
            level3.setflags(write=False)
            object.__setattr__(self, "level3", level3)

    @property
    def n1(self) -> int:
        return self.level1.shape[0]

    @property
    def n2(self) -> int:
        return self.level2.shape[0]

    @property
    def n3(self) -> int:
        return 0 if self.level3 is None else self.level3.shape[0]


@dataclass(frozen=True, eq=False)
class SynthesisOptions:
    """Free parameters of the synthesis constructions.

    a3       output-row magnitudes for the two-hidden-layer build (nonzero)
    eps      per-unit signs (+-1) for the three-hidden-layer build
    a4       explicit final weights for the three-hidden-layer build
    seeds    first-column slopes for the no-source-channel build (nonzero)
    c_out    source weight of the final layer
    b_out    bias of the final layer
    plus_variant  global sign choice on the two-hidden output row
    """

    a3: np.ndarray | None = None
    eps: np.ndarray | None = None
    a4: np.ndarray | None = None
    seeds: np.ndarray | None = None
    c_out: float = 0.0
    b_out: float = 0.0
    plus_variant: bool = True

    def __post_init__(self):
        for name in ("a3", "eps", "a4", "seeds"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, _frozen_array(value, ndim=1, name=name))
        object.__setattr__(self, "c_out", _finite_float(self.c_out, "c_out"))
        object.__setattr__(self, "b_out", _finite_float(self.b_out, "b_out"))
        if self.a3 is not None and np.any(self.a3 == 0):
            raise ValueError("a3 entries must be nonzero")
        if self.seeds is not None and np.any(self.seeds == 0):
            raise ValueError("seeds must be nonzero")
        if self.eps is not None and np.any(np.abs(self.eps) != 1):
            raise ValueError("eps entries must be +-1")


def canonicalize(spline: CplSpline, tol: Tolerances = DEFAULT_TOL) -> CplSpline:
    """Sort knots, merge near-duplicates, drop inactive coefficients.

    Knots within merge_tol of their predecessor are folded into one knot at
    the group's first (smallest) coordinate with coefficients summed;
    coefficients of magnitude <= zero_tol are removed.  Running it twice
    returns the second input bit for bit.
    """
    n = spline.n_knots
    if n == 0:
        return CplSpline(spline.q1, spline.q0, np.empty(0), np.empty(0))
    order = np.argsort(spline.knots, kind="stable")
    xs = spline.knots[order]
    cs = spline.coeffs[order]
    out_x: list[float] = []
    out_c: list[float] = []
    i = 0
    while i < n:
        j = i + 1
        while j < n and xs[j] - xs[j - 1] <= tol.merge_tol:
            j += 1
        # a singleton group must keep its coefficient bit for bit
        coeff = cs[i] if j == i + 1 else float(np.sum(cs[i:j]))
        if abs(coeff) > tol.zero_tol:
            out_x.append(float(xs[i]))
            out_c.append(float(coeff))
        i = j
    return CplSpline(spline.q1, spline.q0, np.array(out_x), np.array(out_c))


def knot_bound(widths) -> int:
    """Largest possible number of active knots for the given width chain."""
    widths = tuple(int(w) for w in widths)
    if len(widths) < 3:
        raise DimensionMismatchError("width chain needs at least one hidden layer")
    if widths[0] != 1 or widths[-1] != 1:
        raise DimensionMismatchError("input and output widths must be 1")
    if any(w < 0 for w in widths):
        raise DimensionMismatchError("widths must be non-negative")
    bound = 1
    for w in widths[1:-1]:
        bound *= w + 1
    return bound - 1
