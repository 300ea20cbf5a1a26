"""Inverses of block characteristics, analytic where possible.

A characteristic that normalizes to a positive monomial a*d^k inverts in
closed form as (y/a)^(1/k).  Anything else falls back to bisection against
the original expression.  Decreasing characteristics are rejected outright
rather than silently negated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConvergenceError, NonMonotoneError, OutOfRangeError
from .expr import (
    Expr,
    Num,
    Sym,
    as_monomial,
    classify_names,
    differentiate,
    div,
    evaluate,
    free_symbols,
    pow_,
    to_source,
)

MONOTONE_SAMPLES = 1024
MAX_ITERATIONS = 200
DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class MonotonicityVerdict:
    direction: str  # "increasing" | "decreasing" | "non-monotone"
    witness: tuple[float, float] | None = None


def _grid(lo: float, hi: float, count: int) -> list[float]:
    step = (hi - lo) / (count - 1)
    points = [lo + k * step for k in range(count)]
    points[-1] = hi
    return points


def check_monotone(e: Expr, domain: tuple[float, float]) -> MonotonicityVerdict:
    """Classify the direction of e over [lo, hi].

    Samples the expression on a uniform grid and consults the symbolic
    derivative's sign at each point; the derivative is skipped where it is
    undefined (a square root's domain edge).  A non-monotone verdict
    carries a witness pair of abscissae.
    """
    lo, hi = domain
    variables, _ = classify_names(free_symbols(e))
    if not variables:
        mid = 0.5 * (lo + hi)
        return MonotonicityVerdict("non-monotone", (lo, mid if mid != lo else hi))
    var = next(iter(variables))

    points = _grid(lo, hi, MONOTONE_SAMPLES)
    values = [evaluate(e, {var: t}) for t in points]

    rising = falling = False
    witness = None
    for t0, t1, v0, v1 in zip(points, points[1:], values, values[1:]):
        if v1 > v0:
            rising = True
        elif v1 < v0:
            falling = True
        else:
            witness = witness or (t0, t1)
    if rising and falling:
        for t0, t1, v0, v1 in zip(points, points[1:], values, values[1:]):
            if (v1 < v0) if values[-1] > values[0] else (v1 > v0):
                return MonotonicityVerdict("non-monotone", (t0, t1))
    if witness is not None or (rising and falling):
        return MonotonicityVerdict("non-monotone", witness or (lo, hi))

    d = differentiate(e, var)
    for t in points:
        try:
            slope = evaluate(d, {var: t})
        except Exception:
            continue  # domain edge of a fractional power
        if rising and slope < 0:
            return MonotonicityVerdict("non-monotone", (lo, t))
        if falling and slope > 0:
            return MonotonicityVerdict("non-monotone", (t, hi))

    return MonotonicityVerdict("increasing" if rising else "decreasing")


def invert_analytic(e: Expr, variable: str, domain: tuple[float, float]) -> Expr | None:
    """Closed-form inverse for positive monomials; None for everything else.

    The result reuses the input symbol as its argument placeholder: the
    inverse of 51.15*di is di/51.15, to be applied to code-delta values.
    """
    mono = as_monomial(e, variable)
    if mono is None:
        return None
    a, k = mono
    if a <= 0 or k <= 0:
        return None
    return pow_(div(Sym(variable), Num(a)), Fraction(1, 1) / k)


def invert_numeric(
    e: Expr,
    variable: str,
    domain: tuple[float, float],
    target: float,
    tolerance: float = DEFAULT_TOL,
) -> float:
    """Bisection solve of e(d) = target over the domain bracket.

    Converges to |e(result) - target| <= tolerance*max(1, |target|) AND a
    bracket no wider than half the tolerance in absolute abscissa terms
    (or double-precision exhaustion), so x-space agreement with an
    analytic inverse tracks the tolerance rather than the bracket width.
    """
    lo, hi = domain
    if not lo < hi:
        raise OutOfRangeError(f"empty bracket [{lo:g}, {hi:g}]")
    v_lo = evaluate(e, {variable: lo})
    v_hi = evaluate(e, {variable: hi})
    if v_lo >= v_hi:
        raise NonMonotoneError(
            f"{to_source(e)} does not increase over the bracket", (lo, hi)
        )
    y_tol = tolerance * max(1.0, abs(target))
    if target < v_lo - y_tol or target > v_hi + y_tol:
        raise OutOfRangeError(
            f"target {target!r} outside reachable [{v_lo!r}, {v_hi!r}]"
        )
    if abs(v_lo - target) <= y_tol:
        return lo
    if abs(v_hi - target) <= y_tol:
        return hi

    x_floor = 0.5 * tolerance
    for _ in range(MAX_ITERATIONS):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break  # bracket exhausted at double precision
        v = evaluate(e, {variable: mid})
        if v < v_lo - y_tol or v > v_hi + y_tol:
            raise NonMonotoneError(
                f"{to_source(e)} leaves the endpoint ordering inside the bracket",
                (lo, mid),
            )
        if abs(v - target) <= y_tol and hi - lo <= x_floor:
            return mid
        if v < target:
            lo, v_lo = mid, v
        else:
            hi, v_hi = mid, v
    mid = 0.5 * (lo + hi)
    if abs(evaluate(e, {variable: mid}) - target) <= y_tol:
        return mid
    raise ConvergenceError(
        f"no convergence to {target!r} within {MAX_ITERATIONS} iterations"
    )


@dataclass(frozen=True)
class InverseResult:
    """An invertible characteristic packaged with its inverse.

    expr holds the closed form when the original was a recognized family;
    calls fall back to bisection otherwise.  domain is the original's
    input interval, codomain its output interval (the inverse's domain).
    """

    original: Expr
    variable: str
    domain: tuple[float, float]
    codomain: tuple[float, float]
    expr: Expr | None
    tolerance: float = DEFAULT_TOL

    @property
    def is_closed_form(self) -> bool:
        return self.expr is not None

    def __call__(self, y: float) -> float:
        if self.expr is not None:
            return evaluate(self.expr, {self.variable: y})
        return invert_numeric(
            self.original, self.variable, self.domain, y, self.tolerance
        )


def invert(
    e: Expr,
    variable: str,
    domain: tuple[float, float],
    tolerance: float = DEFAULT_TOL,
) -> InverseResult:
    """Certify e increasing on the domain and package its inverse."""
    verdict = check_monotone(e, domain)
    if verdict.direction != "increasing":
        raise NonMonotoneError(
            f"{to_source(e)} is {verdict.direction} on "
            f"[{domain[0]:g}, {domain[1]:g}]",
            verdict.witness,
        )
    lo, hi = domain
    codomain = (evaluate(e, {variable: lo}), evaluate(e, {variable: hi}))
    closed = invert_analytic(e, variable, domain)
    return InverseResult(e, variable, domain, codomain, closed, tolerance)
