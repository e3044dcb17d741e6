"""Exact calculus on piecewise power-log functions.

Every function handled by the package is a finite sum of terms
``c * r**gamma * (log r)**k`` on each of finitely many pieces. Radial
functions carry a dimension ``n`` and a profile on ``[0, inf)``; line
functions live on the real axis and evaluate their terms at ``|x|``.
The class is closed under sums, products, antidifferentiation and the
Hardy average, so all of those are carried out coefficient by
coefficient. Pieces are half-open ``[lo, hi)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence, Union

import numpy as np
from scipy.optimize import brentq

from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    FormatError,
    IndeterminateDivergence,
    NonFiniteValue,
    NotLocallyIntegrable,
)

INF = math.inf
COEFF_FLOOR = 1e-300
ROOT_TOL = 1e-12
SCAN_POINTS = 2**10
SCAN_POINTS_MAX = 2**16
TINY = 1e-300
HUGE = 1e300


def unit_ball_volume(n: int) -> float:
    """Volume of the unit ball in R^n."""
    if n == 1:
        return 2.0
    if n == 2:
        return math.pi
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


@dataclass(frozen=True)
class DimensionConstants:
    n: int
    unit_ball_volume: float
    sphere_area: float

    @classmethod
    def of(cls, n: int) -> "DimensionConstants":
        if n < 1:
            raise ValueError("dimension must be >= 1")
        v = unit_ball_volume(n)
        return cls(n, v, n * v)


@dataclass(frozen=True, order=True)
class PowerLogTerm:
    """One term ``coeff * r**exponent * (log r)**log_power``."""

    coeff: float
    exponent: float
    log_power: int = 0

    def __post_init__(self):
        k = self.log_power
        if isinstance(k, float) and k.is_integer():
            k = int(k)
        if not isinstance(k, (int, np.integer)) or isinstance(k, bool) or k < 0:
            raise ValueError(f"log_power must be a nonnegative integer, got {self.log_power!r}")
        c, g = float(self.coeff), float(self.exponent)
        if not (math.isfinite(c) and math.isfinite(g)):
            raise ValueError("coeff and exponent must be finite")
        object.__setattr__(self, "coeff", c)
        object.__setattr__(self, "exponent", g)
        object.__setattr__(self, "log_power", int(k))

    @property
    def key(self) -> tuple[float, int]:
        return (self.exponent, self.log_power)

    def value(self, r: float) -> float:
        if self.log_power == 0:
            return self.coeff * r**self.exponent
        return self.coeff * r**self.exponent * math.log(r) ** self.log_power


Terms = tuple[PowerLogTerm, ...]
TermLike = Union[PowerLogTerm, Sequence[float]]


def _as_term(t: TermLike) -> PowerLogTerm:
    if isinstance(t, PowerLogTerm):
        return t
    return PowerLogTerm(*t)


def normalize_terms(terms: Iterable[TermLike]) -> Terms:
    """Merge like terms, drop negligible coefficients, sort by (exponent, log_power)."""
    acc: dict[tuple[float, int], float] = {}
    for t in terms:
        t = _as_term(t)
        acc[t.key] = acc.get(t.key, 0.0) + t.coeff
    return tuple(
        PowerLogTerm(c, g, k) for (g, k), c in sorted(acc.items()) if abs(c) >= COEFF_FLOOR
    )


def eval_terms(terms: Terms, r: float) -> float:
    """Term sum at a point ``r > 0``."""
    total = 0.0
    lr = None
    for t in terms:
        if t.log_power == 0:
            total += t.coeff * r**t.exponent
        else:
            if lr is None:
                lr = math.log(r)
            total += t.coeff * r**t.exponent * lr**t.log_power
    return total


def eval_terms_array(terms: Terms, r: np.ndarray) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    if not terms:
        return out
    with np.errstate(divide="ignore", invalid="ignore"):
        lr = np.log(r)
        for t in terms:
            v = t.coeff * r**t.exponent
            if t.log_power:
                v = v * lr**t.log_power
            out = out + v
    return out


def _value_at_zero(terms: Terms) -> float:
    total = 0.0
    for t in terms:
        if t.exponent > 0:
            continue
        if t.exponent == 0 and t.log_power == 0:
            total += t.coeff
        else:
            raise NonFiniteValue(f"term {t} diverges at 0")
    return total


def leading_at_zero(terms: Terms) -> PowerLogTerm:
    return min(terms, key=lambda t: (t.exponent, -t.log_power))


def leading_at_inf(terms: Terms) -> PowerLogTerm:
    return max(terms, key=lambda t: (t.exponent, t.log_power))


def limit_at_zero(terms: Terms) -> float:
    if not terms:
        return 0.0
    lead = leading_at_zero(terms)
    if lead.exponent > 0:
        return 0.0
    if lead.exponent == 0 and lead.log_power == 0:
        return lead.coeff
    return math.copysign(INF, lead.coeff * (-1) ** lead.log_power)


def limit_at_inf(terms: Terms) -> float:
    if not terms:
        return 0.0
    lead = leading_at_inf(terms)
    if lead.exponent < 0:
        return 0.0
    if lead.exponent == 0 and lead.log_power == 0:
        return lead.coeff
    return math.copysign(INF, lead.coeff)


def multiply_terms(a: Terms, b: Terms) -> Terms:
    return normalize_terms(
        PowerLogTerm(s.coeff * t.coeff, s.exponent + t.exponent, s.log_power + t.log_power)
        for s in a
        for t in b
    )


def power_terms(a: Terms, p: int) -> Terms:
    out: Terms = (PowerLogTerm(1.0, 0.0, 0),)
    for _ in range(p):
        out = multiply_terms(out, a)
    return out


def scale_terms(a: Terms, c: float) -> Terms:
    return normalize_terms(PowerLogTerm(c * t.coeff, t.exponent, t.log_power) for t in a)


def shift_terms(a: Terms, de: float) -> Terms:
    """Multiply every term by ``r**de``."""
    return tuple(PowerLogTerm(t.coeff, t.exponent + de, t.log_power) for t in a)


def derivative_terms(a: Terms) -> Terms:
    out = []
    for t in a:
        if t.exponent != 0:
            out.append(PowerLogTerm(t.coeff * t.exponent, t.exponent - 1, t.log_power))
        if t.log_power:
            out.append(PowerLogTerm(t.coeff * t.log_power, t.exponent - 1, t.log_power - 1))
    return normalize_terms(out)


def _antiderivative(c: float, g: float, k: int, scale: float = 1.0) -> list[PowerLogTerm]:
    # scale is folded in before c so that e.g. n * c * r**(n-1) integrates to c * r**n exactly
    if g == -1:
        return [PowerLogTerm(c * (scale / (k + 1)), 0.0, k + 1)]
    e = g + 1
    base = scale / e
    factor = 1.0
    out = []
    for j in range(k + 1):
        out.append(PowerLogTerm(c * (base * factor), e, k - j))
        factor *= -(k - j) / e
    return out


def antiderivative_term(t: PowerLogTerm) -> list[PowerLogTerm]:
    """Exact antiderivative of one term, without constant of integration."""
    return _antiderivative(t.coeff, t.exponent, t.log_power)


def antiderivative_terms(a: Terms, scale: float = 1.0) -> Terms:
    out: list[PowerLogTerm] = []
    for t in a:
        out.extend(_antiderivative(t.coeff, t.exponent, t.log_power, scale))
    return normalize_terms(out)


def _sign(x: float) -> int:
    return 1 if x > 0 else -1


def integrate_terms(terms: Terms, a: float, b: float) -> float:
    """Integral of a term sum over ``[a, b]`` with ``0 <= a < b <= inf``.

    Returns +-inf when an endpoint singularity or the tail diverges, as
    decided by the leading term at that end.
    """
    if not terms or a >= b:
        return 0.0
    signs = set()
    if a == 0:
        lead = leading_at_zero(terms)
        if lead.exponent <= -1:
            signs.add(_sign(lead.coeff) * (-1) ** lead.log_power)
    if b == INF:
        lead = leading_at_inf(terms)
        if lead.exponent >= -1:
            signs.add(_sign(lead.coeff))
    if signs:
        if len(signs) > 1:
            raise IndeterminateDivergence("divergent parts of both signs")
        return math.copysign(INF, signs.pop())
    anti = antiderivative_terms(terms)
    hi = 0.0 if b == INF else eval_terms(anti, b)
    lo = 0.0 if a == 0 else eval_terms(anti, a)
    return hi - lo


def sum_extended(values: Iterable[float]) -> float:
    vals = list(values)
    pos = any(v == INF for v in vals)
    neg = any(v == -INF for v in vals)
    if pos and neg:
        raise IndeterminateDivergence("divergent parts of both signs")
    if pos:
        return INF
    if neg:
        return -INF
    return math.fsum(vals)


# ---------------------------------------------------------------------------
# pieces and functions


@dataclass(frozen=True)
class Piece:
    lo: float
    hi: float
    terms: Terms

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not lo < hi:
            raise ValueError(f"piece needs lo < hi, got [{lo}, {hi})")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "terms", tuple(_as_term(t) for t in self.terms))

    def contains(self, x: float) -> bool:
        return self.lo <= x < self.hi


PieceLike = Union[Piece, Sequence]


def _as_piece(p: PieceLike) -> Piece:
    if isinstance(p, Piece):
        return Piece(p.lo, p.hi, normalize_terms(p.terms))
    lo, hi, terms = p
    return Piece(lo, hi, normalize_terms(terms))


def _canonical(pieces: Iterable[Piece], split_at_zero: bool) -> tuple[Piece, ...]:
    ps = sorted((p for p in pieces if p.terms), key=lambda p: p.lo)
    out: list[Piece] = []
    for p in ps:
        if out:
            last = out[-1]
            if p.lo < last.hi:
                raise ValueError("pieces overlap")
            if p.lo == last.hi and p.terms == last.terms and not (split_at_zero and p.lo == 0):
                out[-1] = Piece(last.lo, p.hi, last.terms)
                continue
        out.append(p)
    return tuple(out)


class _Piecewise:
    pieces: tuple[Piece, ...]

    def find_piece(self, x: float) -> Piece | None:
        for p in self.pieces:
            if p.lo <= x < p.hi:
                return p
        return None

    def __call__(self, x):
        """Vectorised evaluation; zero off every piece."""
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        ax = np.abs(x)
        for p in self.pieces:
            mask = (x >= p.lo) & (x < p.hi)
            if np.any(mask):
                out[mask] = eval_terms_array(p.terms, ax[mask])
        return out if out.ndim else float(out)

    @property
    def is_zero(self) -> bool:
        return not self.pieces

    @property
    def support(self) -> tuple[float, float]:
        if not self.pieces:
            return (0.0, 0.0)
        return (self.pieces[0].lo, self.pieces[-1].hi)

    def breakpoints(self) -> list[float]:
        pts = set()
        for p in self.pieces:
            pts.add(p.lo)
            pts.add(p.hi)
        return sorted(pts)


@dataclass(frozen=True)
class RadialFunction(_Piecewise):
    """Radial function on R^dim given by its profile in ``r = |x|``."""

    dim: int
    pieces: tuple[Piece, ...] = ()

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError("dim must be a positive integer")
        object.__setattr__(self, "dim", int(self.dim))
        ps = [_as_piece(p) for p in self.pieces]
        for p in ps:
            if p.lo < 0:
                raise ValueError("radial pieces must lie in [0, inf)")
        object.__setattr__(self, "pieces", _canonical(ps, split_at_zero=False))

    kind = "radial"

    @property
    def constants(self) -> DimensionConstants:
        return DimensionConstants.of(self.dim)

    @classmethod
    def indicator(cls, dim: int, hi: float, lo: float = 0.0, value: float = 1.0) -> "RadialFunction":
        return cls(dim, [(lo, hi, [(value, 0.0, 0)])])

    @classmethod
    def constant(cls, dim: int, value: float) -> "RadialFunction":
        return cls(dim, [(0.0, INF, [(value, 0.0, 0)])])

    @classmethod
    def zero(cls, dim: int) -> "RadialFunction":
        return cls(dim, ())

    def with_pieces(self, pieces) -> "RadialFunction":
        return RadialFunction(self.dim, pieces)

    def halves(self) -> list["Half"]:
        return [Half(self.pieces, self.dim, self.constants.sphere_area, 1)]

    def __add__(self, other):
        return combine(self, other, "add")

    def __sub__(self, other):
        return combine(self, other, "subtract")

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return scale(self, other)
        return multiply(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return scale(self, -1.0)


@dataclass(frozen=True)
class LineFunction(_Piecewise):
    """Piecewise function on the real line; terms are evaluated at ``|x|``."""

    pieces: tuple[Piece, ...] = ()

    def __post_init__(self):
        ps = []
        for p in self.pieces:
            p = _as_piece(p)
            if p.lo < 0 < p.hi:
                ps.append(Piece(p.lo, 0.0, p.terms))
                ps.append(Piece(0.0, p.hi, p.terms))
            else:
                ps.append(p)
        object.__setattr__(self, "pieces", _canonical(ps, split_at_zero=True))

    kind = "line"
    dim = 1

    @classmethod
    def indicator(cls, lo: float, hi: float, value: float = 1.0) -> "LineFunction":
        return cls([(lo, hi, [(value, 0.0, 0)])])

    @classmethod
    def constant(cls, value: float) -> "LineFunction":
        return cls([(-INF, INF, [(value, 0.0, 0)])])

    @classmethod
    def zero(cls) -> "LineFunction":
        return cls(())

    @classmethod
    def from_radial(cls, f: RadialFunction) -> "LineFunction":
        """Even extension of a one-dimensional radial profile."""
        if f.dim != 1:
            raise DimensionMismatch("only dim 1 radial functions extend to the line")
        ps = []
        for p in f.pieces:
            ps.append(Piece(p.lo, p.hi, p.terms))
            ps.append(Piece(-p.hi, -p.lo, p.terms))
        return cls(ps)

    def with_pieces(self, pieces) -> "LineFunction":
        return LineFunction(pieces)

    def halves(self) -> list["Half"]:
        pos = tuple(p for p in self.pieces if p.lo >= 0)
        neg = tuple(Piece(-p.hi, -p.lo, p.terms) for p in reversed(self.pieces) if p.hi <= 0)
        return [Half(pos, 1, 1.0, 1), Half(neg, 1, 1.0, -1)]

    @classmethod
    def from_halves(cls, pos: Iterable[Piece], neg: Iterable[Piece]) -> "LineFunction":
        ps = list(pos) + [Piece(-p.hi, -p.lo, p.terms) for p in neg]
        return cls(ps)

    def __add__(self, other):
        return combine(self, other, "add")

    def __sub__(self, other):
        return combine(self, other, "subtract")

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return scale(self, other)
        return multiply(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return scale(self, -1.0)


Function = Union[RadialFunction, LineFunction]


@dataclass(frozen=True)
class Half:
    """One half-line view of a function, in the coordinate ``s = |x|``.

    The measure on the half is ``omega * s**(n-1) ds``; ``side`` records
    which way ``s`` maps back to ``x`` (line functions only).
    """

    pieces: tuple[Piece, ...]
    n: int
    omega: float
    side: int

    def shell_measure(self, a: float, b: float) -> float:
        if b == INF:
            return INF
        return self.omega / self.n * (b**self.n - a**self.n)


# ---------------------------------------------------------------------------
# operations


def evaluate(f: Function, x: float) -> float:
    """Value of ``f`` at ``x``; 0 off the pieces."""
    x = float(x)
    if isinstance(f, RadialFunction) and x < 0:
        raise ValueError("radial functions are evaluated at r >= 0")
    p = f.find_piece(x)
    if p is None:
        return 0.0
    if x == 0:
        return _value_at_zero(p.terms)
    v = eval_terms(p.terms, abs(x))
    if not math.isfinite(v):
        raise NonFiniteValue(f"value at {x} is not finite")
    return v


def _check_same(f: Function, g: Function):
    if type(f) is not type(g):
        raise DimensionMismatch("cannot mix radial and line functions")
    if f.dim != g.dim:
        raise DimensionMismatch(f"dimensions differ: {f.dim} vs {g.dim}")


def _refine(pa: Sequence[Piece], pb: Sequence[Piece]):
    """Yield (lo, hi, terms_a, terms_b) over the common refinement."""
    pts = sorted({p.lo for p in pa} | {p.hi for p in pa} | {p.lo for p in pb} | {p.hi for p in pb})
    ia = ib = 0
    for lo, hi in zip(pts[:-1], pts[1:]):
        while ia < len(pa) and pa[ia].hi <= lo:
            ia += 1
        while ib < len(pb) and pb[ib].hi <= lo:
            ib += 1
        ta = pa[ia].terms if ia < len(pa) and pa[ia].lo <= lo else ()
        tb = pb[ib].terms if ib < len(pb) and pb[ib].lo <= lo else ()
        if ta or tb:
            yield lo, hi, ta, tb


def combine(f: Function, g: Function, op: str = "add") -> Function:
    """Pointwise sum or difference over the common refinement."""
    _check_same(f, g)
    if op not in ("add", "subtract"):
        raise ValueError(f"unknown op {op!r}")
    sgn = 1.0 if op == "add" else -1.0
    pieces = []
    for lo, hi, ta, tb in _refine(f.pieces, g.pieces):
        tb = tb if sgn > 0 else tuple(PowerLogTerm(-t.coeff, t.exponent, t.log_power) for t in tb)
        pieces.append(Piece(lo, hi, normalize_terms(ta + tb)))
    return f.with_pieces(pieces)


def multiply(f: Function, g: Function) -> Function:
    """Pointwise product; term exponents and log powers add."""
    _check_same(f, g)
    pieces = []
    for lo, hi, ta, tb in _refine(f.pieces, g.pieces):
        if ta and tb:
            pieces.append(Piece(lo, hi, multiply_terms(ta, tb)))
    return f.with_pieces(pieces)


def scale(f: Function, c: float) -> Function:
    return f.with_pieces([Piece(p.lo, p.hi, scale_terms(p.terms, c)) for p in f.pieces])


def restrict(f: Function, a: float, b: float) -> Function:
    """Keep ``f`` on ``[a, b)`` (radius window for radial, x window for line)."""
    pieces = []
    for p in f.pieces:
        lo, hi = max(p.lo, a), min(p.hi, b)
        if lo < hi:
            pieces.append(Piece(lo, hi, p.terms))
    return f.with_pieces(pieces)


def multiply_by_power(f: Function, de: float) -> Function:
    """Multiply by ``|x|**de``."""
    return f.with_pieces([Piece(p.lo, p.hi, shift_terms(p.terms, de)) for p in f.pieces])


def definite_integral(f: Function, a: float, b: float) -> float:
    """One-dimensional integral of the profile (radial) or of f (line) over [a, b]."""
    if not a < b:
        raise ValueError("need a < b")
    if isinstance(f, RadialFunction) and a < 0:
        raise ValueError("radial integrals start at a >= 0")
    parts = []
    for p in f.pieces:
        lo, hi = max(p.lo, a), min(p.hi, b)
        if lo >= hi:
            continue
        if lo >= 0:
            parts.append(integrate_terms(p.terms, lo, hi))
        else:
            parts.append(integrate_terms(p.terms, -hi, -lo))
    return sum_extended(parts)


def volume_integral(f: Function, a: float = 0.0, b: float = INF) -> float:
    """Lebesgue integral of f over ``{a <= |x| < b}`` in R^dim (or R)."""
    parts = []
    for h in f.halves():
        for p in h.pieces:
            lo, hi = max(p.lo, a), min(p.hi, b)
            if lo < hi:
                w = shift_terms(p.terms, h.n - 1)
                parts.append(h.omega * integrate_terms(w, lo, hi))
    return sum_extended(parts)


def unit_mass_pieces(pieces: Sequence[Piece], n: int) -> list[Piece]:
    """Pieces of ``G(r) = n * int_0^r profile(s) s**(n-1) ds``.

    ``G`` is the mass of the ball B(0, r) measured in units of the unit
    ball volume, so the Hardy average is ``G(r) * r**(-n)``.
    """
    out: list[Piece] = []
    g_prev = 0.0
    cursor = 0.0
    for p in pieces:
        if p.lo > cursor and g_prev != 0.0:
            out.append(Piece(cursor, p.lo, (PowerLogTerm(g_prev, 0.0, 0),)))
        if p.lo == 0:
            for t in p.terms:
                if t.exponent + n <= 0:
                    raise NotLocallyIntegrable(f"term {t} is not integrable at the origin in dim {n}")
        anti = antiderivative_terms(shift_terms(p.terms, n - 1), scale=float(n))
        a_lo = 0.0 if p.lo == 0 else eval_terms(anti, p.lo)
        terms = normalize_terms(anti + (PowerLogTerm(g_prev - a_lo, 0.0, 0),))
        out.append(Piece(p.lo, p.hi, terms))
        if p.hi == INF:
            return out
        g_prev = eval_terms(terms, p.hi)
        cursor = p.hi
    if g_prev != 0.0:
        out.append(Piece(cursor, INF, (PowerLogTerm(g_prev, 0.0, 0),)))
    return out


def cumulative_mass(f: RadialFunction) -> RadialFunction:
    """``F(r) = int_{|y|<r} f(y) dy`` as an exact radial profile."""
    if not isinstance(f, RadialFunction):
        raise TypeError("cumulative_mass needs a RadialFunction")
    g = unit_mass_pieces(f.pieces, f.dim)
    return scale(RadialFunction(f.dim, g), f.constants.unit_ball_volume)


# ---------------------------------------------------------------------------
# root isolation


class _TermArray:
    __slots__ = ("c", "g", "k", "gmax", "gmin", "terms")

    def __init__(self, terms: Terms):
        self.terms = terms
        self.c = np.array([t.coeff for t in terms])
        self.g = np.array([t.exponent for t in terms])
        self.k = np.array([t.log_power for t in terms])
        self.gmax = float(self.g.max())
        self.gmin = float(self.g.min())

    def scaled(self, t: np.ndarray) -> np.ndarray:
        # positive rescaling by exp(-ref*t) keeps every exponential <= 1
        t = np.asarray(t, dtype=float)[:, None]
        ref = np.where(t >= 0, self.gmax, self.gmin)
        return np.sum(self.c * np.exp((self.g - ref) * t) * t**self.k, axis=1)

    def scaled_at(self, r: float) -> float:
        t = math.log(r)
        ref = self.gmax if t >= 0 else self.gmin
        total = 0.0
        for term in self.terms:
            v = term.coeff * math.exp((term.exponent - ref) * t)
            if term.log_power:
                v *= t**term.log_power
            total += v
        return total


def _dominance_bound(terms: Terms, direction: int) -> float:
    """``u >= 1`` such that for ``|log r| >= u`` on the given side the
    leading term outweighs all others together and keeps doing so."""
    if len(terms) == 1:
        return 1.0
    eff = [(direction * t.exponent, t.log_power, t) for t in terms]
    lead = max(eff, key=lambda e: (e[0], e[1]))
    others = [e for e in eff if e[2] is not lead[2]]
    margin = math.log(2 * len(others))
    lc = math.log(abs(lead[2].coeff))
    u = 1.0
    for _ in range(64):
        ok = True
        for g, k, t in others:
            dg = lead[0] - g
            dk = lead[1] - k
            if dg > 0 and dk < 0 and u <= -dk / dg:
                ok = False
                break
            if math.log(abs(t.coeff)) - lc - dg * u - dk * math.log(u) > -margin:
                ok = False
                break
        if ok:
            return u
        u *= 2
    raise BudgetExceeded("could not separate the leading term")


def _closed_form_roots(terms: Terms) -> list[float] | None:
    if len(terms) == 1:
        t = terms[0]
        return [1.0] if t.log_power > 0 else []
    if len(terms) == 2 and all(t.log_power == 0 for t in terms):
        a, b = terms
        if a.exponent == 0:
            d, c, g = a.coeff, b.coeff, b.exponent
        elif b.exponent == 0:
            d, c, g = b.coeff, a.coeff, a.exponent
        else:
            # c1 r^g1 + c2 r^g2 = 0  <=>  r^(g2-g1) = -c1/c2
            q = -a.coeff / b.coeff
            return [q ** (1.0 / (b.exponent - a.exponent))] if q > 0 else []
        q = -d / c
        return [q ** (1.0 / g)] if q > 0 else []
    return None


def piece_roots(terms: Terms, level: float, a: float, b: float, tol: float = ROOT_TOL,
                grid: int = SCAN_POINTS, max_grid: int = SCAN_POINTS_MAX) -> list[float]:
    """Solutions of ``sum(terms)(s) == level`` for ``a < s < b`` (``0 <= a``)."""
    h = normalize_terms(tuple(terms) + (PowerLogTerm(-level, 0.0, 0),))
    if not h:
        return []
    closed = _closed_form_roots(h)
    if closed is not None:
        return sorted(r for r in closed if a < r < b)
    arr = _TermArray(h)
    t_lo = math.log(a) if a > 0 else -_dominance_bound(h, -1)
    t_hi = math.log(b) if b < INF else _dominance_bound(h, 1)
    if a == 0 and b < INF:
        t_lo = min(t_lo, t_hi - 1.0)
    if b == INF and a > 0:
        t_hi = max(t_hi, t_lo + 1.0)
    if t_lo >= t_hi:
        return []
    n_pts = grid
    prev = None
    while True:
        ts = np.linspace(t_lo, t_hi, n_pts + 1)
        sg = np.sign(arr.scaled(ts))
        changes = int(np.count_nonzero(sg[:-1] * sg[1:] < 0) + np.count_nonzero(sg[1:-1] == 0))
        if prev is not None and changes == prev:
            break
        prev = changes
        n_pts *= 2
        if n_pts > max_grid:
            raise BudgetExceeded("sign scan did not stabilise")
    roots = []
    for i in range(n_pts):
        if sg[i] == 0 and i > 0:
            roots.append(math.exp(ts[i]))
        elif sg[i] * sg[i + 1] < 0:
            r1 = max(math.exp(ts[i]), a)
            r2 = math.exp(ts[i + 1]) if i + 1 < n_pts or b == INF else b
            r2 = min(r2, b)
            try:
                r = brentq(arr.scaled_at, r1, r2, xtol=tol * min(1.0, r1), rtol=4 * np.finfo(float).eps, maxiter=500)
            except ValueError:
                r = 0.5 * (r1 + r2)
            roots.append(r)
    return sorted(r for r in roots if a < r < b)


def root_isolate(f: Function, level: float, interval: tuple[float, float] | None = None,
                 tol: float = ROOT_TOL) -> list[float]:
    """All ``x`` in the open interval with ``f(x) == level``, inside pieces.

    Jumps between pieces are not crossings. Roots are bracketed by a sign
    scan in ``log r`` and polished with Brent's method.
    """
    if interval is None:
        interval = (0.0, INF) if isinstance(f, RadialFunction) else (-INF, INF)
    a, b = interval
    out = []
    for p in f.pieces:
        lo, hi = max(p.lo, a), min(p.hi, b)
        if lo >= hi:
            continue
        if lo >= 0:
            out.extend(piece_roots(p.terms, level, lo, hi, tol))
        else:
            out.extend(-r for r in piece_roots(p.terms, level, -hi, -lo, tol))
    return sorted(out)


@dataclass(frozen=True)
class MonotonePart:
    """Sub-interval ``(lo, hi)`` of a piece on which the term sum is monotone."""

    lo: float
    hi: float
    terms: Terms
    f_lo: float
    f_hi: float

    @property
    def constant(self) -> bool:
        return all(t.exponent == 0 and t.log_power == 0 for t in self.terms)

    def value(self, s: float) -> float:
        return eval_terms(self.terms, s)

    def solve(self, v: float) -> float | None:
        """The point where the monotone term sum equals ``v``, if any."""
        lo_v, hi_v = sorted((self.f_lo, self.f_hi))
        if not (lo_v < v < hi_v):
            return None
        closed = _closed_form_roots(
            normalize_terms(self.terms + (PowerLogTerm(-v, 0.0, 0),))
        )
        if closed is not None:
            cands = [r for r in closed if self.lo <= r <= self.hi]
            if cands:
                return cands[0]
        arr = _TermArray(normalize_terms(self.terms + (PowerLogTerm(-v, 0.0, 0),)))
        a, b = self.lo, self.hi
        if a == 0:
            a = min(1.0, b / 2)
            target = _sign(self.f_lo - v)
            while _sign(arr.scaled_at(a)) != target:
                a /= 16
                if a < TINY:
                    # the crossing is below the smallest normal float
                    return 0.0
        if b == INF:
            b = max(1.0, 2 * a)
            target = _sign(self.f_hi - v)
            while _sign(arr.scaled_at(b)) != target:
                b *= 16
                if b > HUGE:
                    return INF
        fa, fb = arr.scaled_at(a), arr.scaled_at(b)
        if fa == 0:
            return a
        if fb == 0:
            return b
        if fa * fb > 0:
            return None
        if b > 16 * a:
            # wide brackets are solved in log r, where brentq's bisection fallback is geometric
            t = brentq(lambda u: arr.scaled_at(math.exp(u)), math.log(a), math.log(b),
                       xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
            a, b = max(a, math.exp(t) * (1 - 1e-12)), min(b, math.exp(t) * (1 + 1e-12))
            fa, fb = arr.scaled_at(a), arr.scaled_at(b)
            if fa == 0:
                return a
            if fb == 0 or fa * fb > 0:
                return math.exp(t)
        return brentq(arr.scaled_at, a, b, xtol=ROOT_TOL * min(1.0, a), rtol=4 * np.finfo(float).eps,
                      maxiter=500)


def monotone_parts(terms: Terms, a: float, b: float) -> list[MonotonePart]:
    """Split ``[a, b)`` at the critical points of the term sum."""
    d = derivative_terms(terms)
    crit = piece_roots(d, 0.0, a, b) if d else []
    pts = [a] + crit + [b]
    out = []
    for lo, hi in zip(pts[:-1], pts[1:]):
        f_lo = limit_at_zero(terms) if lo == 0 else eval_terms(terms, lo)
        f_hi = limit_at_inf(terms) if hi == INF else eval_terms(terms, hi)
        out.append(MonotonePart(lo, hi, terms, f_lo, f_hi))
    return out


# ---------------------------------------------------------------------------
# serialisation


def _num_out(x: float):
    if x == INF:
        return "inf"
    if x == -INF:
        return "-inf"
    return x


def _num_in(x) -> float:
    if isinstance(x, str):
        if x in ("inf", "+inf"):
            return INF
        if x == "-inf":
            return -INF
        raise FormatError(f"bad number {x!r}")
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise FormatError(f"bad number {x!r}")
    return float(x)


def to_dict(f: Function) -> dict:
    return {
        "kind": f.kind,
        "dim": f.dim,
        "pieces": [
            {
                "lo": _num_out(p.lo),
                "hi": _num_out(p.hi),
                "terms": [{"c": t.coeff, "gamma": t.exponent, "k": t.log_power} for t in p.terms],
            }
            for p in f.pieces
        ],
    }


def from_dict(doc: dict) -> Function:
    try:
        kind = doc["kind"]
        pieces = []
        for pd in doc["pieces"]:
            terms = [
                PowerLogTerm(_num_in(td["c"]), _num_in(td.get("gamma", 0.0)), int(td.get("k", 0)))
                for td in pd["terms"]
            ]
            pieces.append(Piece(_num_in(pd["lo"]), _num_in(pd["hi"]), normalize_terms(terms)))
        if kind == "radial":
            return RadialFunction(int(doc["dim"]), pieces)
        if kind == "line":
            return LineFunction(pieces)
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed function document: {exc}") from exc
    raise FormatError(f"unknown kind {kind!r}")


def dumps(f: Function) -> str:
    return json.dumps(to_dict(f), sort_keys=True)


def loads(text: str) -> Function:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(str(exc)) from exc
    if not isinstance(doc, dict):
        raise FormatError("function document must be an object")
    return from_dict(doc)
