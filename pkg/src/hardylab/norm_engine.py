"""L^p, weak-L^1, Herz K_p, BMO and central BMO norms.

Results come back as :class:`NormResult`. ``exact`` values are closed-form
antiderivative evaluations; ``tail_bounded`` values carry a certified
error from quadrature or from a dominating geometric tail;
``search_lower_bound`` values are suprema over finitely many candidates
and therefore never exceed the true norm.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache

from scipy.integrate import quad

from ._search import golden_max
from .errors import FormatError, InvalidExponent, NotIntegrableOnBall
from .radial_calculus import (
    INF,
    Function,
    LineFunction,
    PowerLogTerm,
    RadialFunction,
    eval_terms,
    integrate_terms,
    leading_at_inf,
    leading_at_zero,
    monotone_parts,
    piece_roots,
    power_terms,
    restrict,
    shift_terms,
    volume_integral,
)

EXACT = "exact"
TAIL_BOUNDED = "tail_bounded"
SEARCH_LOWER_BOUND = "search_lower_bound"

QUAD_EPSABS = 1e-13
QUAD_EPSREL = 1e-12


@dataclass(frozen=True)
class NormResult:
    value: float
    mode: str = EXACT
    error_bound: float = 0.0

    def __post_init__(self):
        if self.mode == EXACT and self.error_bound != 0:
            raise ValueError("exact results carry no error bound")

    @property
    def is_infinite(self) -> bool:
        return self.value == INF

    def to_dict(self) -> dict:
        return {
            "value": "inf" if self.value == INF else self.value,
            "mode": self.mode,
            "error_bound": self.error_bound,
        }


@dataclass(frozen=True)
class SearchConfig:
    grid_per_decade: int = 33
    decades: int = 6
    refine_iters: int = 48
    tolerance: float = 1e-12

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> "SearchConfig":
        unknown = set(doc) - {"grid_per_decade", "decades", "refine_iters", "tolerance"}
        if unknown:
            raise FormatError(f"unknown search keys {sorted(unknown)}")
        try:
            return cls(
                grid_per_decade=int(doc.get("grid_per_decade", cls.grid_per_decade)),
                decades=int(doc.get("decades", cls.decades)),
                refine_iters=int(doc.get("refine_iters", cls.refine_iters)),
                tolerance=float(doc.get("tolerance", cls.tolerance)),
            )
        except (TypeError, ValueError) as exc:
            raise FormatError(str(exc)) from exc


# ---------------------------------------------------------------------------
# L^p


def _midpoint(lo: float, hi: float) -> float:
    if hi == INF:
        return 2 * lo + 1.0
    return 0.5 * (lo + hi)


def abs_power_integral(terms, p: float, a: float, b: float, n: int, omega: float):
    """``int_a^b |sum(terms)|^p * omega * s^(n-1) ds`` as (value, error, exact)."""
    if a == 0 and p * leading_at_zero(terms).exponent + n <= 0:
        return INF, 0.0, True
    if b == INF and p * leading_at_inf(terms).exponent + n >= 0:
        return INF, 0.0, True
    if len(terms) == 1:
        t = terms[0]
        m = p * t.log_power
        if float(m).is_integer():
            m = int(m)
            base = (PowerLogTerm(abs(t.coeff) ** p, p * t.exponent + n - 1, m),)
            if m and a < 1 < b:
                segs = [(a, 1.0, (-1) ** m), (1.0, b, 1)]
            elif m and b <= 1:
                segs = [(a, b, (-1) ** m)]
            else:
                segs = [(a, b, 1)]
            total = sum(sg * integrate_terms(base, lo, hi) for lo, hi, sg in segs)
            return omega * total, 0.0, True
    roots = piece_roots(terms, 0.0, a, b)
    pts = [a] + roots + [b]
    if float(p).is_integer():
        ip = int(p)
        integrand = shift_terms(power_terms(terms, ip), n - 1)
        if ip % 2 == 0:
            return omega * integrate_terms(integrand, a, b), 0.0, True
        total = 0.0
        for lo, hi in zip(pts[:-1], pts[1:]):
            sg = 1.0 if eval_terms(terms, _midpoint(lo, hi)) >= 0 else -1.0
            total += sg * integrate_terms(integrand, lo, hi)
        return omega * total, 0.0, True

    def integrand_fn(s):
        return abs(eval_terms(terms, s)) ** p * s ** (n - 1)

    def in_log(u):
        if abs(u) > 700:
            return 0.0
        s = math.exp(u)
        return abs(eval_terms(terms, s)) ** p * s**n

    total = err = 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        if lo == 0 or hi == INF:
            # endpoint singularities and slow tails become smooth exponential decay in u = ln s
            ua = math.log(lo) if lo > 0 else -math.inf
            ub = math.log(hi) if hi < INF else math.inf
            v, e = quad(in_log, ua, ub, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=200)
        else:
            v, e = quad(integrand_fn, lo, hi, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=200)
        total += v
        err += e
    return omega * total, omega * err, False


def _root_with_error(total: float, err: float, p: float) -> float:
    if err == 0:
        return 0.0
    if total <= 0:
        return err ** (1 / p)
    return total ** (1 / p - 1) / p * err


def lp_norm(f: Function, p: float) -> NormResult:
    """``(int |f|^p)^(1/p)`` with Lebesgue measure on R^n (radial) or R."""
    if not p >= 1:
        raise InvalidExponent(f"p must be >= 1, got {p}")
    total = err = 0.0
    exact = True
    for h in f.halves():
        for piece in h.pieces:
            v, e, ex = abs_power_integral(piece.terms, p, piece.lo, piece.hi, h.n, h.omega)
            if v == INF:
                return NormResult(INF)
            total += v
            err += e
            exact = exact and ex
    total = max(total, 0.0)
    value = total ** (1 / p)
    if exact:
        return NormResult(value)
    return NormResult(value, TAIL_BOUNDED, _root_with_error(total, err, p))


def sup_norm(f: Function) -> float:
    """Essential sup of |f| from the endpoint limits of its monotone parts."""
    best = 0.0
    for part, _, _ in _monotone_view(f):
        best = max(best, abs(part.f_lo), abs(part.f_hi))
    return best


# ---------------------------------------------------------------------------
# distribution and weak L^1


@lru_cache(maxsize=512)
def _monotone_view(f: Function):
    out = []
    for h in f.halves():
        for piece in h.pieces:
            for part in monotone_parts(piece.terms, piece.lo, piece.hi):
                out.append((part, h.n, h.omega))
    return tuple(out)


def _measure(n: int, omega: float, a: float, b: float) -> float:
    if b <= a:
        return 0.0
    if b == INF:
        return INF
    return omega / n * (b**n - a**n)


def _above(part, n, omega, v: float) -> float:
    """Measure of ``{f > v}`` on a monotone non-constant part."""
    if part.f_hi >= part.f_lo:
        if part.f_hi <= v:
            return 0.0
        if part.f_lo >= v:
            return _measure(n, omega, part.lo, part.hi)
        r = part.solve(v)
        return 0.0 if r is None else _measure(n, omega, r, part.hi)
    if part.f_lo <= v:
        return 0.0
    if part.f_hi >= v:
        return _measure(n, omega, part.lo, part.hi)
    r = part.solve(v)
    return 0.0 if r is None else _measure(n, omega, part.lo, r)


def _below(part, n, omega, v: float) -> float:
    """Measure of ``{f < v}`` on a monotone non-constant part."""
    if part.f_hi >= part.f_lo:
        if part.f_lo >= v:
            return 0.0
        if part.f_hi <= v:
            return _measure(n, omega, part.lo, part.hi)
        r = part.solve(v)
        return 0.0 if r is None else _measure(n, omega, part.lo, r)
    if part.f_hi >= v:
        return 0.0
    if part.f_lo <= v:
        return _measure(n, omega, part.lo, part.hi)
    r = part.solve(v)
    return 0.0 if r is None else _measure(n, omega, r, part.hi)


def _superlevel(view, lam: float, strict: bool = True) -> float:
    total = 0.0
    for part, n, omega in view:
        if part.constant:
            v = abs(part.f_lo)
            if v > lam or (not strict and v >= lam):
                total += _measure(n, omega, part.lo, part.hi)
            continue
        total += _above(part, n, omega, lam) + _below(part, n, omega, -lam)
        if total == INF:
            return INF
    return total


def distribution(f: Function, lam: float) -> float:
    """``|{x : |f(x)| > lam}|``."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    return _superlevel(_monotone_view(f), lam)


def _weak_limits(view) -> tuple[float, float]:
    """Limits of ``lam * d(lam)`` as lam -> 0 and lam -> inf."""
    at_zero = at_inf = 0.0
    for part, n, omega in view:
        if part.hi == INF:
            lead = leading_at_inf(part.terms)
            if lead.exponent > -n or (lead.exponent == -n and lead.log_power > 0):
                at_zero = INF
            elif lead.exponent == -n:
                at_zero += omega / n * abs(lead.coeff)
        if part.lo == 0 and math.isinf(part.f_lo):
            lead = leading_at_zero(part.terms)
            if lead.exponent < -n or (lead.exponent == -n and lead.log_power > 0):
                at_inf = INF
            elif lead.exponent == -n:
                at_inf += omega / n * abs(lead.coeff)
    return at_zero, at_inf


def weak_l1_norm(f: Function, iters: int = 64) -> NormResult:
    """``sup_lam lam * |{|f| > lam}|``.

    Candidate levels are the endpoint values of the monotone parts of
    ``|f|``; between consecutive candidates a golden-section search on
    ``log lam`` refines the supremum. Segments whose bound
    ``lam_hi * d(lam_lo)`` cannot beat the incumbent are skipped.
    """
    view = _monotone_view(f)
    if not view:
        return NormResult(0.0)
    lim0, lim_inf = _weak_limits(view)
    if INF in (lim0, lim_inf):
        return NormResult(INF)
    cands = sorted(
        {abs(v) for part, _, _ in view for v in (part.f_lo, part.f_hi) if 0 < abs(v) < INF}
    )
    unbounded = any(math.isinf(part.f_lo) or math.isinf(part.f_hi) for part, _, _ in view)
    simple = all(part.constant for part, _, _ in view)
    best = max(lim0, lim_inf)
    for c in cands:
        best = max(best, c * _superlevel(view, c, strict=False))
    if simple:
        return NormResult(best)

    def phi(log_lam):
        lam = math.exp(log_lam)
        return lam * _superlevel(view, lam)

    edges = [0.0] + cands + ([INF] if unbounded else [])
    err = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        if lo > 0 and hi < INF:
            bound = hi * _superlevel(view, lo)
            if bound <= best:
                continue
        if lo == 0 and hi == INF:
            a, b = -46.0, 46.0
        else:
            a = math.log(lo) if lo > 0 else math.log(hi) - 46.0
            b = math.log(hi) if hi < INF else math.log(lo) + 46.0
        x, fx, (ba, bb) = golden_max(phi, a, b, iters)
        best = max(best, fx)
        lam_lo, lam_hi = math.exp(ba), math.exp(bb)
        err = max(err, lam_hi * _superlevel(view, lam_lo) - fx)
    return NormResult(best, SEARCH_LOWER_BOUND, max(err, 0.0))


# ---------------------------------------------------------------------------
# Herz K_p


def _floor_log2(x: float) -> int:
    k = math.floor(math.log2(x))
    while 2.0**k > x:
        k -= 1
    while 2.0 ** (k + 1) <= x:
        k += 1
    return k


def _ceil_log2(x: float) -> int:
    k = _floor_log2(x)
    return k if 2.0**k == x else k + 1


def _shell_integral(halves, p: float, k: int):
    lo, hi = 2.0 ** (k - 1), 2.0**k
    total = err = 0.0
    exact = True
    for h in halves:
        for piece in h.pieces:
            a, b = max(piece.lo, lo), min(piece.hi, hi)
            if a < b:
                v, e, ex = abs_power_integral(piece.terms, p, a, b, h.n, h.omega)
                total += v
                err += e
                exact = exact and ex
    return max(total, 0.0), err, exact


def _term_tail_coeffs(halves, pieces, p: float, n: int):
    """Per-term constants ``C`` with weighted shell norm <= sum C (|j|+1)^k 2^(j(gamma+n))."""
    w = sum(h.omega for h in halves) * (1 - 2.0**-n) / n
    out = []
    for piece in pieces:
        for t in piece.terms:
            c = abs(t.coeff) * max(1.0, 2.0**-t.exponent) * math.log(2) ** t.log_power * w ** (1 / p)
            out.append((c, t.exponent + n, t.log_power))
    return out


def _tail_bound(coeffs, j: int, direction: int) -> float:
    """Bound on the sum of shells beyond ``j`` (exclusive) going in ``direction``."""
    total = 0.0
    nxt = j + direction
    for c, eps, k in coeffs:
        # the shells decay geometrically only when eps has the sign opposite to direction
        if eps * direction >= 0:
            return INF
        m = abs(nxt)
        rho = 2.0 ** -abs(eps) * ((m + 2) / (m + 1)) ** k
        if rho >= 1:
            return INF
        total += c * (m + 1) ** k * 2.0 ** (nxt * eps) / (1 - rho)
    return total


def herz_norm(f: Function, p: float, tolerance: float = 1e-12) -> NormResult:
    """``sum_k 2^(k n / p') ||f chi_k||_p`` over dyadic shells ``2^(k-1) < |x| <= 2^k``."""
    if not p > 1:
        raise InvalidExponent(f"p must be > 1, got {p}")
    n = f.dim
    weight = n * (1 - 1 / p)
    halves = [h for h in f.halves() if h.pieces]
    if not halves:
        return NormResult(0.0)

    def weighted(k, integral):
        return 2.0 ** (k * weight) * integral ** (1 / p)

    total = err = 0.0
    exact = True

    # lower tail: shells inside the innermost piece of every half touching 0
    at_zero = [h for h in halves if h.pieces[0].lo == 0]
    k_lo_list = []
    for h in halves:
        first = h.pieces[0]
        if first.lo == 0:
            k_lo_list.append(_floor_log2(first.hi) if first.hi < INF else 0)
        else:
            k_lo_list.append(_floor_log2(first.lo))
    k_lo = min(k_lo_list)
    # upper tail: shells inside every unbounded last piece / beyond bounded support
    ends = []
    for h in halves:
        last = h.pieces[-1]
        ends.append((last.lo if last.lo > 0 else 1.0) if last.hi == INF else last.hi)
    k_hi = max(_ceil_log2(max(ends)) + 1, k_lo + 1)
    at_inf = [h for h in halves if h.pieces[-1].hi == INF]

    if at_zero:
        inner = [h.pieces[0] for h in at_zero]
        lead = min((leading_at_zero(pc.terms) for pc in inner), key=lambda t: t.exponent)
        if lead.exponent + n <= 0:
            return NormResult(INF)
    if at_inf:
        outer = [h.pieces[-1] for h in at_inf]
        lead = max((leading_at_inf(pc.terms) for pc in outer), key=lambda t: (t.exponent, t.log_power))
        if lead.exponent + n >= 0:
            return NormResult(INF)

    def closed_tail(pieces, hs):
        terms = [pc.terms for pc in pieces]
        if all(len(t) == 1 and t[0].log_power == 0 for t in terms):
            gammas = {t[0].exponent for t in terms}
            if len(gammas) == 1:
                g = gammas.pop()
                s = p * g + n
                cs = math.log(2) if s == 0 else (1 - 2.0**-s) / s
                amp = sum(h.omega * abs(t[0].coeff) ** p * cs for h, t in zip(hs, terms))
                return amp ** (1 / p), g + n
        return None

    if at_zero:
        ct = closed_tail(inner, at_zero)
        if ct is not None:
            amp, rate = ct
            total += amp * 2.0 ** (k_lo * rate) / (1 - 2.0**-rate)
        else:
            coeffs = _term_tail_coeffs(at_zero, inner, p, n)
            j = k_lo
            for _ in range(20000):
                v, e, ex = _shell_integral(halves, p, j)
                total += weighted(j, v)
                err += 2.0 ** (j * weight) * _root_with_error(v, e, p)
                exact = exact and ex
                if j <= 0:
                    tb = _tail_bound(coeffs, j, -1)
                    if tb <= tolerance:
                        err += tb
                        exact = False
                        break
                j -= 1
            else:
                err += _tail_bound(coeffs, j, -1)
                exact = False

    for k in range(k_lo + 1, k_hi):
        v, e, ex = _shell_integral(halves, p, k)
        if v > 0:
            total += weighted(k, v)
            err += 2.0 ** (k * weight) * _root_with_error(v, e, p)
        exact = exact and ex

    if at_inf:
        ct = closed_tail(outer, at_inf)
        if ct is not None:
            amp, rate = ct
            total += amp * 2.0 ** (k_hi * rate) / (1 - 2.0**rate)
        else:
            coeffs = _term_tail_coeffs(at_inf, outer, p, n)
            j = k_hi
            for _ in range(20000):
                v, e, ex = _shell_integral(halves, p, j)
                total += weighted(j, v)
                err += 2.0 ** (j * weight) * _root_with_error(v, e, p)
                exact = exact and ex
                if j >= 0:
                    tb = _tail_bound(coeffs, j, 1)
                    if tb <= tolerance:
                        err += tb
                        exact = False
                        break
                j += 1
            else:
                err += _tail_bound(coeffs, j, 1)
                exact = False

    if exact:
        return NormResult(total)
    return NormResult(total, TAIL_BOUNDED, err)


# ---------------------------------------------------------------------------
# mean oscillation, BMO, CBMO


def _ball_window(f: Function, ball):
    """(restricted f, indicator of the ball scaled later, measure)."""
    if isinstance(f, RadialFunction):
        r = float(ball)
        if not r > 0:
            raise ValueError("ball radius must be positive")
        return restrict(f, 0.0, r), f.constants.unit_ball_volume * r**f.dim, (0.0, r)
    if isinstance(ball, (tuple, list)) and len(ball) == 2:
        lo, hi = float(ball[0]), float(ball[1])
    else:
        raise ValueError("line balls are given as an interval (lo, hi)")
    if not lo < hi:
        raise ValueError("empty interval")
    return restrict(f, lo, hi), hi - lo, (lo, hi)


def _constant_on(g: Function, lo: float, hi: float) -> bool:
    # mass / measure would round; a constant window has no oscillation at all
    ps = g.pieces
    if not ps or ps[0].lo > lo or ps[-1].hi < hi:
        return False
    t = ps[0].terms
    if len(t) != 1 or t[0].exponent != 0 or t[0].log_power != 0:
        return False
    return all(p.terms == t for p in ps) and all(a.hi == b.lo for a, b in zip(ps, ps[1:]))


def _oscillation(f: Function, ball, q: float) -> float:
    """``((1/|B|) int_B |f - f_B|^q)^(1/q)``."""
    g, meas, (lo, hi) = _ball_window(f, ball)
    if _constant_on(g, lo, hi):
        return 0.0
    mass = volume_integral(g)
    if not math.isfinite(mass):
        raise NotIntegrableOnBall("f is not integrable on the ball")
    m = mass / meas
    if isinstance(f, RadialFunction):
        ind = RadialFunction.indicator(f.dim, hi, value=m)
    else:
        ind = LineFunction.indicator(lo, hi, value=m)
    res = lp_norm(g - ind, q)
    if res.value == INF:
        raise NotIntegrableOnBall("f is not q-integrable on the ball")
    return res.value / meas ** (1 / q)


def mean_oscillation(f: Function, ball) -> float:
    """``(1/|B|) int_B |f - f_B|``; ``ball`` is a radius (radial, centred) or an interval (line)."""
    return _oscillation(f, ball, 1.0)


def central_oscillation(f: Function, r: float, q: float) -> float:
    """q-oscillation over the ball B(0, r) (the interval (-r, r) on the line)."""
    ball = r if isinstance(f, RadialFunction) else (-r, r)
    return _oscillation(f, ball, q)


def _geometric_grid(cfg: SearchConfig) -> list[float]:
    half = cfg.grid_per_decade * cfg.decades // 2
    return [10.0 ** (j / cfg.grid_per_decade) for j in range(-half, half + 1)]


def _as_line(f: Function) -> LineFunction:
    if isinstance(f, LineFunction):
        return f
    return LineFunction.from_radial(f)


def bmo_norm_1d(f: Function, search: SearchConfig | None = None, seeds: int = 3) -> NormResult:
    """Lower bound for ``sup_I (1/|I|) int_I |f - f_I|`` over intervals."""
    cfg = search or SearchConfig()
    f = _as_line(f)
    if f.is_zero:
        return NormResult(0.0)
    # 0 is always a seed so that centred intervals are among the candidates
    bps = sorted({x for x in f.breakpoints() if math.isfinite(x)} | {0.0})
    spread = bps[-1] - bps[0]
    sc = spread if spread > 0 else 1.0
    hs = [sc * u for u in _geometric_grid(cfg)]

    def mo(a, b):
        if not a < b:
            return 0.0
        try:
            return mean_oscillation(f, (a, b))
        except NotIntegrableOnBall:
            return 0.0

    cands = []
    for beta in bps:
        for h in hs:
            cands.append((beta - h, beta + h))
    for i, bi in enumerate(bps):
        for bj in bps[i + 1:]:
            cands.append((bi, bj))
            for h in hs:
                cands.append((bi - h, bj + h))
    scored = sorted(((mo(a, b), a, b) for a, b in cands), reverse=True)
    best = scored[0][0]
    grid_best = best
    for val, a, b in scored[:seeds]:
        for _ in range(2):
            w = 0.5 * (b - a)
            a, va, _ = golden_max(lambda x: mo(x, b), a - w, a + 0.999 * w, cfg.refine_iters)
            w = 0.5 * (b - a)
            b, vb, _ = golden_max(lambda x: mo(a, x), b - 0.999 * w, b + w, cfg.refine_iters)
            best = max(best, va, vb)
    return NormResult(best, SEARCH_LOWER_BOUND, best - grid_best)


def cbmo_norm(f: Function, q: float, search: SearchConfig | None = None) -> NormResult:
    """Lower bound for ``sup_r ((1/|B(0,r)|) int_{B(0,r)} |f - f_B|^q)^(1/q)``."""
    if not q > 1:
        raise InvalidExponent(f"q must be > 1, got {q}")
    cfg = search or SearchConfig()
    if f.is_zero:
        return NormResult(0.0)
    bps = sorted({abs(x) for x in f.breakpoints() if math.isfinite(x) and x != 0}) or [1.0]
    grid = sorted({b * u for b in bps for u in _geometric_grid(cfg)} | set(bps))

    def osc(log_r):
        try:
            return central_oscillation(f, math.exp(log_r), q)
        except NotIntegrableOnBall:
            return 0.0

    logs = [math.log(r) for r in grid]
    vals = [osc(x) for x in logs]
    i = max(range(len(vals)), key=vals.__getitem__)
    best = grid_best = vals[i]
    a = logs[max(i - 1, 0)]
    b = logs[min(i + 1, len(logs) - 1)]
    if b > a:
        _, v, _ = golden_max(osc, a, b, cfg.refine_iters)
        best = max(best, v)
    return NormResult(best, SEARCH_LOWER_BOUND, best - grid_best)
