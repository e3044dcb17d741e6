"""The Hardy average, its one-dimensional signed form, and commutators.

``hardy_transform(f)(x) = (1 / (v_n |x|^n)) * int_{|y| < |x|} f(y) dy``
is computed as ``G(r) * r**(-n)`` where ``G`` is the exact cumulative
mass in units of the unit-ball volume. On the line,
``H f(x) = (1/x) int_0^x f``; each half-line is handled as the average
of the mirrored profile, which keeps the orientation right for x < 0.
"""

from __future__ import annotations

import math

from .errors import DimensionMismatch, NotLocallyIntegrable, UnsupportedShape
from .radial_calculus import (
    Function,
    LineFunction,
    Piece,
    PowerLogTerm,
    RadialFunction,
    multiply,
    normalize_terms,
    shift_terms,
    unit_mass_pieces,
)


def _average_pieces(pieces, n: int) -> list[Piece]:
    return [Piece(p.lo, p.hi, shift_terms(p.terms, -n)) for p in unit_mass_pieces(pieces, n)]


def hardy_transform(f: RadialFunction) -> RadialFunction:
    """Exact n-dimensional Hardy average of a radial function."""
    if isinstance(f, LineFunction):
        return hardy_transform_line(f)
    return RadialFunction(f.dim, _average_pieces(f.pieces, f.dim))


def hardy_transform_line(f: LineFunction) -> LineFunction:
    """``(1/x) int_0^x f(t) dt`` on each half-line."""
    pos, neg = f.halves()
    try:
        hp = _average_pieces(pos.pieces, 1)
        hn = _average_pieces(neg.pieces, 1)
    except NotLocallyIntegrable as exc:
        raise NotLocallyIntegrable(f"not integrable at 0 from one side: {exc}") from None
    return LineFunction.from_halves(hp, hn)


def commutator_apply(b: Function, f: Function) -> Function:
    """``[b, H] f = b * H f - H(b f)``."""
    if type(b) is not type(f):
        raise DimensionMismatch("symbol and function must be of the same kind")
    if b.dim != f.dim:
        raise DimensionMismatch(f"dimensions differ: {b.dim} vs {f.dim}")
    hf = hardy_transform(f)
    hbf = hardy_transform(multiply(b, f))
    return multiply(b, hf) - hbf


def _dilate_terms(terms, r: float):
    # c (r x)^g (ln r + ln x)^k, expanded binomially in ln x
    lr = math.log(r)
    out = []
    for t in terms:
        base = t.coeff * r**t.exponent
        for j in range(t.log_power + 1):
            c = base * math.comb(t.log_power, j) * lr ** (t.log_power - j)
            out.append(PowerLogTerm(c, t.exponent, j))
    return normalize_terms(out)


def dilate(f: Function, r: float) -> Function:
    """``x -> f(r x)`` for ``r > 0``."""
    if not r > 0:
        raise ValueError("dilation factor must be positive")
    if r == 1:
        return f
    pieces = [Piece(p.lo / r, p.hi / r, _dilate_terms(p.terms, r)) for p in f.pieces]
    return f.with_pieces(pieces)


def translate_line(f: LineFunction, x0: float) -> LineFunction:
    """``x -> f(x + x0)``; only piecewise-constant functions stay in the class."""
    if not isinstance(f, LineFunction):
        raise TypeError("translate_line needs a LineFunction")
    for p in f.pieces:
        for t in p.terms:
            if t.exponent != 0 or t.log_power != 0:
                raise UnsupportedShape("only piecewise-constant functions can be translated")
    if x0 == 0:
        return f
    return LineFunction([Piece(p.lo - x0, p.hi - x0, p.terms) for p in f.pieces])
