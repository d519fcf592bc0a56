"""Small numerical helpers: finite differences and bracketed root finding.

These are used both by the library (resonance solvers) and by the
validation suite, where they serve as independent oracles for the
closed-form derivatives.
"""

from __future__ import annotations

from typing import Callable, Sequence


def central_diff_5pt(f: Callable[[float], float], x: float, h: float) -> float:
    """Five-point central finite difference for f'(x), O(h^4) accurate."""
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)


def central_diff_richardson(f: Callable[[float], float], x: float, h: float) -> float:
    """Central difference with one Richardson extrapolation step (h, h/2)."""
    d1 = (f(x + h) - f(x - h)) / (2 * h)
    d2 = (f(x + h / 2) - f(x - h / 2)) / h
    return (4 * d2 - d1) / 3


def bisect(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    f_lo: float | None = None,
    f_hi: float | None = None,
    xtol: float = 0.0,
    ftol: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Bisection on a bracketing interval [lo, hi].

    Iterates until |f| <= ftol or the interval shrinks below xtol.
    Raises ValueError if [lo, hi] does not bracket a sign change.
    """
    a, b = float(lo), float(hi)
    fa = f(a) if f_lo is None else f_lo
    fb = f(b) if f_hi is None else f_hi
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        m = 0.5 * (a + b)
        fm = f(m)
        if abs(fm) <= ftol or (b - a) <= xtol:
            return m
        if fa * fm <= 0.0:
            b, fb = m, fm
        else:
            a, fa = m, fm
    return 0.5 * (a + b)


def bracket_roots(
    f: Callable[[float], float], grid: Sequence[float]
) -> list[tuple[float, float, float, float]]:
    """Scan f on a monotone grid and return sign-change brackets.

    Each bracket is (lo, hi, f(lo), f(hi)).  Exact zeros at a grid node are
    returned as a degenerate bracket (node, node, 0, 0).
    """
    brackets: list[tuple[float, float, float, float]] = []
    prev_x = grid[0]
    prev_f = f(prev_x)
    if prev_f == 0.0:
        brackets.append((prev_x, prev_x, 0.0, 0.0))
    for x in grid[1:]:
        fx = f(x)
        if fx == 0.0:
            brackets.append((x, x, 0.0, 0.0))
        elif prev_f != 0.0 and prev_f * fx < 0.0:
            brackets.append((prev_x, x, prev_f, fx))
        prev_x, prev_f = x, fx
    return brackets
