"""Atoms and the named example functions.

Random atoms are built so that every quantity that should cancel does so
in floating point, not just approximately: breakpoints are ``R*j/8`` with
``R`` a power of two, levels are integers times a dyadic scale with an
8-bit mantissa, and the last level is solved from integer shell weights.
As a result ``hardy_transform(atom)`` has no pieces beyond the support.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import InvalidExponent, UnboundedSupport
from .radial_calculus import (
    INF,
    Function,
    LineFunction,
    RadialFunction,
    eval_terms,
    unit_ball_volume,
    unit_mass_pieces,
)

LINF = "linf"
CENTRAL = "central"
KINDS = {"linf": LINF, "(1,inf,0)": LINF, "central": CENTRAL, "central(1,p)": CENTRAL}

VALIDATION_TOL = 1e-12


@dataclass(frozen=True)
class AtomReport:
    kind: str
    support_radius: float
    size_norm: float
    size_bound: float
    cancellation_residual: float
    valid: bool
    rescale_factor: float
    p: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def _kind(kind: str) -> str:
    try:
        return KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown atom kind {kind!r}") from None


def _dyadic_floor(x: float, bits: int = 8) -> float:
    """Largest number <= x whose mantissa has at most ``bits`` bits."""
    m, e = math.frexp(x)
    return math.floor(m * 2**bits) / 2**bits * 2.0**e


def _size_bound(kind: str, n: int, radius: float, p: float | None) -> float:
    vol = unit_ball_volume(n) * radius**n
    if kind == LINF:
        return 1.0 / vol
    return vol ** (1.0 / p - 1.0)


def make_random_atom(kind: str, n: int, p: float | None = None, seed: int = 0) -> RadialFunction:
    """Seeded random piecewise-constant centred atom on ``B(0, 2^e)``, ``e`` in -3..3."""
    kind = _kind(kind)
    if kind == CENTRAL and not (p is not None and p > 1):
        raise InvalidExponent("central atoms need p > 1")
    rng = np.random.default_rng(seed)
    radius = 2.0 ** int(rng.integers(-3, 4))
    m = int(rng.integers(2, 7))
    inner = sorted(int(j) for j in rng.choice(np.arange(1, 8), size=m - 1, replace=False))
    js = [0] + inner + [8]
    weights = [js[i + 1] ** n - js[i] ** n for i in range(m)]
    es = [int(v) for v in rng.choice([v for v in range(-8, 9) if v], size=m - 1)]
    levels = [-sum(e * w for e, w in zip(es, weights[1:]))] + [e * weights[0] for e in es]
    if kind == LINF:
        size = max(abs(d) for d in levels)
    else:
        shell = unit_ball_volume(n) * (radius / 8) ** n
        size = sum(abs(d) ** p * w * shell for d, w in zip(levels, weights)) ** (1 / p)
    phi = float(rng.uniform(0.21, 1.0))
    s = _dyadic_floor(phi * _size_bound(kind, n, radius, p) / size)
    pieces = [
        (radius * js[i] / 8, radius * js[i + 1] / 8, [(levels[i] * s, 0.0, 0)])
        for i in range(m)
    ]
    return RadialFunction(n, pieces)


def total_mass(f: Function) -> float:
    """``int f`` for compactly supported f, with the ball-volume factor applied last.

    The mass is read off the exact cumulative profile, which keeps dyadic
    cancellation exact.
    """
    total = 0.0
    for h in f.halves():
        g = unit_mass_pieces(h.pieces, h.n)
        if not g:
            continue
        last = g[-1]
        if last.hi == INF:
            if last.lo == 0 or len(last.terms) != 1 or last.terms[0].key != (0.0, 0):
                raise UnboundedSupport("atoms must have compact support")
            units = last.terms[0].coeff
        else:
            units = eval_terms(last.terms, last.hi)
        total += h.omega / h.n * units
    return total


def _ball(f: Function) -> tuple[int, float]:
    """(dimension, radius of the enclosing ball)."""
    lo, hi = f.support
    if math.isinf(lo) or math.isinf(hi):
        raise UnboundedSupport("atoms must have compact support")
    if isinstance(f, LineFunction):
        return 1, (hi - lo) / 2
    return f.dim, hi


def validate_atom(f: Function, kind: str, p: float | None = None) -> AtomReport:
    """Check the support, size and cancellation conditions.

    For line functions the ball is the smallest interval holding the support.
    """
    from .norm_engine import lp_norm, sup_norm

    kind = _kind(kind)
    if kind == CENTRAL and not (p is not None and p > 1):
        raise InvalidExponent("central atoms need p > 1")
    n, radius = _ball(f)
    if f.is_zero:
        return AtomReport(kind, 0.0, 0.0, INF, 0.0, True, 1.0, p)
    bound = _size_bound(kind, n, radius, p)
    size = sup_norm(f) if kind == LINF else lp_norm(f, p).value
    residual = total_mass(f)
    measure = unit_ball_volume(n) * radius**n if isinstance(f, RadialFunction) else 2 * radius
    valid = (
        size <= bound * (1 + VALIDATION_TOL)
        and abs(residual) <= VALIDATION_TOL * bound * measure
    )
    rescale = bound / size if size > 0 else 1.0
    return AtomReport(kind, radius, size, bound, residual, valid, rescale, p)


def golubov_example(n: int) -> RadialFunction:
    """``(1 - 2^n) chi_{|x| <= 1} + chi_{1 < |x| <= 2}``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return RadialFunction(n, [(0.0, 1.0, [(1.0 - 2.0**n, 0.0, 0)]), (1.0, 2.0, [(1.0, 0.0, 0)])])


def golubov_hardy_closed_form(n: int, r):
    """Pointwise closed form of the Hardy average of :func:`golubov_example`."""
    r = np.asarray(r, dtype=float)
    out = np.where(r < 1, 1.0 - 2.0**n, np.where(r < 2, 1.0 - 2.0**n / np.maximum(r, 1.0) ** n, 0.0))
    return out if out.ndim else float(out)


def commutator_example_1d() -> tuple[LineFunction, LineFunction]:
    """Symbol ``chi_(2, inf)`` and ``f0 = chi_(0,2) - chi_(-2,0)``."""
    b = LineFunction.indicator(2.0, INF)
    f0 = LineFunction([(0.0, 2.0, [(1.0, 0.0, 0)]), (-2.0, 0.0, [(-1.0, 0.0, 0)])])
    return b, f0


def power_counterexample(alpha: float, R: float, n: int) -> RadialFunction:
    """``|x|^alpha`` on ``B(0, R)``."""
    if not alpha > -n:
        raise InvalidExponent(f"alpha must exceed -n = {-n}")
    if not R > 0:
        raise ValueError("R must be positive")
    return RadialFunction(n, [(0.0, R, [(1.0, alpha, 0)])])
