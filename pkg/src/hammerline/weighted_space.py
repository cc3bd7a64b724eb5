"""Weighted function spaces on unbounded intervals.

A function u on the interval is represented through its rescaling
u~ = u / phi sampled on a compactified grid, together with the finite
endpoint values of the rescaling. The space norm is the maximum over
derivative rows of the sup of |row|; with exact endpoint values this makes
the sampled representation an isometric copy of the continuous object up to
interpolation error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .compactline import CompactMap, Grid, GridSpec, build_grid
from .errors import DomainError
from .weights import Weight, tail_limit

NORM_KINDS = ("phi", "order-n", "sup-tilde")


@dataclass(frozen=True, eq=False)
class Space:
    """A weighted space: grid on a compactified interval, weight, order."""

    grid: Grid
    weight: Weight
    order: int = 0

    def __post_init__(self):
        if self.order < 0:
            raise DomainError("order must be nonnegative")
        for t in self.grid.t[self.grid.finite_mask()]:
            v = self.weight(t)
            if not (math.isfinite(v) and v > 0.0):
                raise DomainError(
                    f"weight {self.weight.label!r} not positive finite at node t={t}")

    @property
    def map(self) -> CompactMap:
        return self.grid.map

    @property
    def m(self) -> int:
        return self.grid.m


def spaces_compatible(a: Space, b: Space) -> bool:
    if a is b:
        return True
    same = (a.grid.map == b.grid.map and a.grid.m == b.grid.m
            and a.order == b.order and a.weight.label == b.weight.label
            and a.weight.params == b.weight.params)
    if same and a.weight.label == "custom":
        same = a.weight.fn is b.weight.fn
    return same


@dataclass(frozen=True, eq=False)
class WeightedFunction:
    """Samples of the rescaled function and its derivative rows on the grid.

    ``samples`` has shape (order + 1, m); row j holds the j-th derivative of
    the rescaling at the grid nodes, endpoint columns included. All entries
    must be finite: membership in the space is exactly finiteness of the
    extended rescaling.
    """

    space: Space
    samples: np.ndarray

    def __post_init__(self):
        arr = np.array(self.samples, dtype=float)
        if arr.ndim == 1:
            arr = arr[None, :]
        if arr.shape != (self.space.order + 1, self.space.m):
            raise DomainError(
                f"samples shape {arr.shape} does not match "
                f"(order+1, m) = {(self.space.order + 1, self.space.m)}")
        if not np.all(np.isfinite(arr)):
            raise DomainError("samples must be finite (rescaled extension exists)")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    # -- pointwise queries ---------------------------------------------------
    def tilde(self, t: float) -> float:
        """Value of the rescaled extension at t (endpoints allowed)."""
        x = self.space.map.to_compact(t)
        return float(self.space.grid.interpolate(self.samples[0], x))

    def raw(self, t: float) -> float:
        w = self.space.weight(t)
        if not math.isfinite(w):
            raise DomainError(
                "raw value undefined where the weight diverges; query tilde()")
        return self.tilde(t) * w

    def norm(self, kind: str = "phi") -> float:
        return norm(self, kind)

    # -- vector-space structure ----------------------------------------------
    def _combine(self, other: "WeightedFunction", a: float, b: float):
        if not spaces_compatible(self.space, other.space):
            raise DomainError("operands live in different spaces")
        return WeightedFunction(self.space, a * self.samples + b * other.samples)

    def __add__(self, other):
        return self._combine(other, 1.0, 1.0)

    def __sub__(self, other):
        return self._combine(other, 1.0, -1.0)

    def __mul__(self, c):
        return WeightedFunction(self.space, float(c) * self.samples)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0


def lift(space: Space, samples) -> WeightedFunction:
    """Wrap explicit rescaled samples (shape (order+1, m) or (m,))."""
    return WeightedFunction(space, np.asarray(samples, dtype=float))


def from_tilde(space: Space, rows, endpoints: dict | None = None) -> WeightedFunction:
    """Build from callables evaluating the rescaling and its derivatives.

    ``rows`` is one callable (order 0) or a sequence of order+1 callables.
    Values at infinite nodes come from ``endpoints`` ({'lo': v, 'hi': v}) or,
    when omitted, from tail extrapolation of row 0. Derivative rows are set
    to zero at infinite nodes: once the rescaling settles to a finite limit,
    its derivatives vanish there.
    """
    if callable(rows):
        rows = (rows,)
    rows = tuple(rows)
    if len(rows) != space.order + 1:
        raise DomainError(f"expected {space.order + 1} row evaluators, got {len(rows)}")
    endpoints = dict(endpoints or {})
    grid = space.grid
    out = np.zeros((space.order + 1, space.m))
    fin = grid.finite_mask()
    for j, fn in enumerate(rows):
        out[j, fin] = [fn(t) for t in grid.t[fin]]
    for i in np.nonzero(~fin)[0]:
        key = "lo" if grid.t[i] < 0 else "hi"
        if key in endpoints:
            out[0, i] = endpoints[key]
        else:
            side = -1 if grid.t[i] < 0 else +1
            out[0, i] = tail_limit(rows[0], grid.map, side)
    return WeightedFunction(space, out)


def from_raw(space: Space, fn: Callable[[float], float],
             endpoints: dict | None = None) -> WeightedFunction:
    """Build an order-0 element from the raw (unrescaled) function."""
    if space.order != 0:
        raise DomainError("from_raw builds order-0 elements; use from_tilde")
    w = space.weight
    return from_tilde(space, lambda t: fn(t) / w(t), endpoints)


def norm(u: WeightedFunction, kind: str = "phi") -> float:
    """Space norm of the sampled representation.

    'sup-tilde' is the sup of |row 0|; 'order-n' the max over all rows;
    'phi' is the canonical name for 'order-n' and is computed by the
    identical reduction, so the two agree bit for bit.
    """
    if kind not in NORM_KINDS:
        raise DomainError(f"unknown norm kind {kind!r}; expected one of {NORM_KINDS}")
    if kind == "sup-tilde":
        return float(np.max(np.abs(u.samples[0])))
    return float(np.max(np.abs(u.samples)))


def asymptotic_limits(u: WeightedFunction) -> tuple:
    """Row-0 values at the interval ends: (left, right).

    The left entry is the rescaled value at a finite left endpoint or the
    extension value at -inf; the right entry is the extension value at +inf.
    """
    return (float(u.samples[0, 0]), float(u.samples[0, -1]))


# ---------------------------------------------------------------------------
# growth comparison of positive functions

TAGS = ("greater", "less", "comparable", "comparable-with-limit",
        "equivalent", "lower-bounded", "upper-bounded", "undetermined")


@dataclass(frozen=True)
class AsymptoticRelation:
    """Outcome of the tail comparison of two positive functions.

    tag meanings for r = f/g along the refining tail:
      'greater'               r monotone and certified beyond the upper band
      'less'                  r monotone and certified below the lower band
      'comparable'            r stayed inside the band at every probe
      'comparable-with-limit' r settles to a finite positive limit
      'equivalent'            r settles to 1
      'lower-bounded'         r nondecreasing (inf certified positive)
      'upper-bounded'         r nonincreasing (sup certified finite)
      'undetermined'          none of the above could be certified
    """

    tag: str
    limit: float | None = None
    ratios: tuple = ()
    probes: tuple = ()
    detail: str = ""


def _agree(vals, rel) -> bool:
    scale = max(abs(v) for v in vals)
    return all(abs(a - b) <= rel * scale + 1e-300 for a, b in zip(vals, vals[1:]))


def classify_asymptotic(f: Callable[[float], float], g: Callable[[float], float],
                        cmap: CompactMap, grid: GridSpec | None = None, *,
                        side: int = +1, agree_rel: float = 1e-4,
                        big: float = 1e6, small: float = 1e-6,
                        k_hi: int = 12) -> AsymptoticRelation:
    """Compare the tail growth of two positive functions along the map.

    The ratio f/g is probed at the compact coordinates 1 - 10^-k, starting
    from the base set k = 1..4 and refining one decade at a time up to
    ``k_hi`` until a decision fires: the last three probes agreeing within
    ``agree_rel`` relative declare a finite limit (tag 'equivalent' when the
    limit is within ``agree_rel`` of 1); a monotone ratio beyond ``big`` /
    below ``small`` declares 'greater' / 'less'. If no decision fires, the
    full record is graded to 'comparable', one-sided bounds, or
    'undetermined'. ``grid`` is accepted for interface parity; the probe set
    is fixed by the protocol above.
    """
    del grid
    ratios: list[float] = []
    probes: list[float] = []

    def probe(k: int):
        x = side * (1.0 - 10.0 ** (-k))
        t = cmap.from_compact(x)
        fv, gv = float(f(t)), float(g(t))
        for name, v in (("f", fv), ("g", gv)):
            if math.isnan(v) or v < 0.0 or (v == 0.0 and name == "g"):
                raise DomainError(
                    f"{name}(t)={v} at t={t}: comparison needs positive functions")
        r = fv / gv if math.isfinite(fv) or math.isfinite(gv) else math.nan
        probes.append(t)
        ratios.append(r)

    def decision() -> AsymptoticRelation | None:
        if math.isnan(ratios[-1]):
            return AsymptoticRelation("undetermined", None, tuple(ratios), tuple(probes),
                                      "ratio of two overflowing values")
        if len(ratios) >= 3 and all(math.isfinite(r) for r in ratios[-3:]) \
                and _agree(ratios[-3:], agree_rel):
            lim = ratios[-1]
            tag = "equivalent" if abs(lim - 1.0) <= agree_rel else "comparable-with-limit"
            return AsymptoticRelation(tag, lim, tuple(ratios), tuple(probes))
        mono_up = all(b >= a for a, b in zip(ratios, ratios[1:]))
        mono_dn = all(b <= a for a, b in zip(ratios, ratios[1:]))
        if mono_up and ratios[-1] > big:
            return AsymptoticRelation("greater", None, tuple(ratios), tuple(probes))
        if mono_dn and ratios[-1] < small:
            return AsymptoticRelation("less", None, tuple(ratios), tuple(probes))
        return None

    for k in range(1, 5):
        probe(k)
    out = decision()
    for k in range(5, k_hi + 1):
        if out is not None:
            return out
        probe(k)
        out = decision()
    if out is not None:
        return out
    if all(small <= r <= big for r in ratios):
        return AsymptoticRelation("comparable", None, tuple(ratios), tuple(probes))
    if all(b >= a for a, b in zip(ratios, ratios[1:])):
        return AsymptoticRelation("lower-bounded", None, tuple(ratios), tuple(probes))
    if all(b <= a for a, b in zip(ratios, ratios[1:])):
        return AsymptoticRelation("upper-bounded", None, tuple(ratios), tuple(probes))
    return AsymptoticRelation("undetermined", None, tuple(ratios), tuple(probes))
