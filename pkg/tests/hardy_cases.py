"""Labeled corpus of asymptotic-comparison cases.

Each case names two positive functions, the compactified interval to probe
along, the side, and the tag ``classify_asymptotic`` is expected to return.
Cases 7-10 express each pair as exp(F) vs exp(G): the ratio tag is then
determined by the limit of F - G (infinite, constant, or zero), which is the
classical correspondence between orders of infinity and their logarithms.
The exponents there stay below overflow at every probe by construction.
"""

import math
from dataclasses import dataclass
from typing import Callable

import hammerline as hl

def expv(t: float) -> float:
    """exp saturating to IEEE infinity instead of raising on overflow."""
    try:
        return math.exp(t)
    except OverflowError:
        return math.inf


HALF = hl.CompactMap.half_line(a=0.0, L=1.0)
HALF_A5 = hl.CompactMap.half_line(a=5.0, L=1.0)
HALF_L3 = hl.CompactMap.half_line(a=0.0, L=3.0)
FULL = hl.CompactMap.full_line(L=1.0)


@dataclass(frozen=True)
class HardyCase:
    name: str
    f: Callable[[float], float]
    g: Callable[[float], float]
    cmap: hl.CompactMap
    side: int
    expected: str


CASES = (
    HardyCase("square-vs-linear", lambda t: t * t, lambda t: t,
              HALF, +1, "greater"),
    HardyCase("linear-vs-square", lambda t: t, lambda t: t * t,
              HALF, +1, "less"),
    HardyCase("shifted-linear", lambda t: t + 1.0, lambda t: t,
              HALF, +1, "equivalent"),
    HardyCase("doubled-linear", lambda t: 2.0 * t + 5.0, lambda t: t,
              HALF, +1, "comparable-with-limit"),
    HardyCase("exp-vs-power", expv, lambda t: t ** 10,
              HALF, +1, "greater"),
    HardyCase("power-vs-exp", lambda t: t ** 10, expv,
              HALF, +1, "less"),
    # exp(F) vs exp(G) with F - G = log t -> +inf
    HardyCase("log-gap-diverges", lambda t: math.exp(2.0 * math.log(t)),
              lambda t: math.exp(math.log(t)), HALF, +1, "greater"),
    # F - G = -log t -> -inf
    HardyCase("log-gap-diverges-down", lambda t: math.exp(math.log(t)),
              lambda t: math.exp(2.0 * math.log(t)), HALF, +1, "less"),
    # F - G -> 3, ratio -> e^3
    HardyCase("log-gap-constant", lambda t: math.exp(math.log(t) + 3.0),
              lambda t: math.exp(math.log(t)), HALF, +1,
              "comparable-with-limit"),
    # F - G = 1/t -> 0, ratio -> 1
    HardyCase("log-gap-vanishes", lambda t: math.exp(math.log(t) + 1.0 / t),
              lambda t: math.exp(math.log(t)), HALF, +1, "equivalent"),
    HardyCase("hypotenuse", lambda t: math.sqrt(t * t + 1.0), lambda t: t,
              HALF, +1, "equivalent"),
    HardyCase("bounded-oscillation", lambda t: t * (2.0 + math.cos(t)),
              lambda t: t, HALF, +1, "comparable"),
    HardyCase("full-line-left-exp", lambda t: expv(-t), lambda t: 1.0,
              FULL, -1, "greater"),
    HardyCase("full-line-right-hypot", lambda t: math.hypot(1.0, t),
              lambda t: abs(t) + 1.0, FULL, +1, "equivalent"),
    HardyCase("half-power-up", lambda t: t ** 2.5, lambda t: t * t,
              HALF, +1, "greater"),
    HardyCase("half-power-down", lambda t: t * t, lambda t: t ** 2.5,
              HALF, +1, "less"),
    HardyCase("reciprocal-orders", lambda t: 1.0 / (t + 1.0),
              lambda t: 1.0 / (t + 1.0) ** 2, HALF, +1, "greater"),
    HardyCase("reciprocal-orders-down", lambda t: 1.0 / (t + 1.0) ** 2,
              lambda t: 1.0 / (t + 1.0), HALF, +1, "less"),
    HardyCase("shifted-start", lambda t: t - 4.0, lambda t: t,
              HALF_A5, +1, "equivalent"),
    HardyCase("scaled-map", lambda t: 3.0 * t + math.sqrt(t), lambda t: t,
              HALF_L3, +1, "comparable-with-limit"),
)
