"""Independent numerical oracles: everything here works from pointwise values only."""

import math

import numpy as np
from scipy.integrate import quad

from hardylab.radial_calculus import INF, LineFunction, unit_ball_volume


def _point(f, s):
    return float(f(np.array([s]))[0])


def _chunks(g, start, step, limit):
    # integrate g outward from start in windows of width |step| until the windows stop mattering
    total, t, small = 0.0, start, 0
    while small < 3 and abs(t) < limit:
        a, b = sorted((t, t + step))
        v = quad(g, a, b, epsabs=0, epsrel=1e-13, limit=200)[0]
        total += v
        small = small + 1 if abs(v) <= 1e-18 * max(abs(total), 1e-300) else 0
        t += step
    return total


def _log_quad(h, a, b):
    """int_a^b h(s) ds through s = e^t; infinite ends are summed window by window."""

    def g(t):
        s = math.exp(t)
        return h(s) * s

    if a > 0 and b < INF:
        return quad(g, math.log(a), math.log(b), epsabs=0, epsrel=1e-13, limit=500)[0]
    if a == 0 and b == INF:
        return _log_quad(h, 0.0, 1.0) + _log_quad(h, 1.0, INF)
    if a == 0:
        return _chunks(g, math.log(b), -4.0, 700.0)
    return _chunks(g, math.log(a), 4.0, 230.0)


def _segments(f, a, b):
    pts = sorted({a, b} | {x for x in f.breakpoints() if a < x < b})
    return list(zip(pts[:-1], pts[1:]))


def radial_integral(f, p=1.0, a=0.0, b=INF):
    """int_{a<|x|<b} |f|^p dx for a radial function, by quadrature."""
    n = f.dim
    omega = n * unit_ball_volume(n)
    total = 0.0
    for lo, hi in _segments(f, a, b):
        total += _log_quad(lambda s: abs(_point(f, s)) ** p * s ** (n - 1), lo, hi)
    return omega * total


def line_integral(f, p=1.0, a=-INF, b=INF, signed=False):
    total = 0.0
    for lo, hi in _segments(f, a, b):
        if hi <= 0:
            g = (lambda s: _point(f, -s)) if signed else (lambda s: abs(_point(f, -s)) ** p)
            total += _log_quad(g, -hi, -lo)
        else:
            g = (lambda s: _point(f, s)) if signed else (lambda s: abs(_point(f, s)) ** p)
            total += _log_quad(g, lo, hi)
    return total


def lp_oracle(f, p):
    if isinstance(f, LineFunction):
        return line_integral(f, p) ** (1 / p)
    return radial_integral(f, p) ** (1 / p)


def hardy_oracle(f, x):
    """H f(x) straight from the definition."""
    if isinstance(f, LineFunction):
        if x == 0:
            raise ValueError
        if x > 0:
            return line_integral(f, a=0.0, b=x, signed=True) / x
        return -line_integral(f, a=x, b=0.0, signed=True) / x
    n = f.dim
    r = abs(x)
    mass = 0.0
    for lo, hi in _segments(f, 0.0, r):
        mass += _log_quad(lambda s: _point(f, s) * s ** (n - 1), lo, hi)
    return n * mass / r**n


def brute_bmo(f, lo=-6.0, hi=6.0, m=121):
    """Max mean oscillation over a uniform grid of intervals, by quadrature."""
    xs = np.linspace(lo, hi, m)
    best = 0.0
    for i in range(m):
        for j in range(i + 1, m, 4):
            a, b = xs[i], xs[j]
            mean = quad(lambda t: _point(f, t), a, b, points=_inner(f, a, b), limit=200)[0] / (b - a)
            osc = quad(lambda t: abs(_point(f, t) - mean), a, b, points=_inner(f, a, b), limit=200)[0] / (b - a)
            best = max(best, osc)
    return best


def _inner(f, a, b):
    pts = [x for x in f.breakpoints() if a < x < b]
    return pts or None


def herz_oracle(f, p, kmin=-60, kmax=60):
    """Direct truncated shell sum with quadrature shell norms."""
    n = f.dim
    total = 0.0
    for k in range(kmin, kmax + 1):
        integ = radial_integral(f, p, 2.0 ** (k - 1), 2.0**k)
        total += 2.0 ** (k * n * (1 - 1 / p)) * integ ** (1 / p)
    return total
