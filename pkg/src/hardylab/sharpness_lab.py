"""Experiments that approach sharp constants and check structural zeros.

Every experiment returns a :class:`SharpnessResult`; ``record()`` gives
the JSON form and ``trace`` holds the per-sample rows for CSV export.
Sweeps run through :func:`pmap` and are reduced in index order, so the
results do not depend on the thread count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._search import golden_max, pmap
from .atom_factory import (
    commutator_example_1d,
    golubov_example,
    make_random_atom,
    validate_atom,
)
from .errors import DegenerateInput, DivergentNorm, DivergentNumerator
from .hardy_transforms import commutator_apply, dilate, hardy_transform
from .norm_engine import (
    INF,
    cbmo_norm,
    bmo_norm_1d,
    distribution,
    herz_norm,
    lp_norm,
    sup_norm,
    weak_l1_norm,
)
from .radial_calculus import (
    Function,
    LineFunction,
    Piece,
    PowerLogTerm,
    RadialFunction,
    restrict,
    scale,
    unit_ball_volume,
)


def _num(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


@dataclass
class SharpnessResult:
    experiment: str
    target: float
    achieved: float
    argmax_params: dict = field(default_factory=dict)
    samples: int = 0
    params: dict = field(default_factory=dict)
    trace: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def gap(self) -> float:
        if math.isinf(self.target) and math.isinf(self.achieved):
            return 0.0 if self.target == self.achieved else math.copysign(INF, self.target)
        return self.target - self.achieved

    def record(self) -> dict:
        artifacts = [{"name": k, "value": _jsonable(v)} for k, v in sorted(self.extra.items())]
        if self.trace:
            artifacts.append({"name": "trace", "rows": len(self.trace)})
        return {
            "experiment": self.experiment,
            "params": _jsonable(self.params),
            "target": _num(self.target),
            "achieved": _num(self.achieved),
            "gap": _num(self.gap),
            "samples": self.samples,
            "argmax_params": _jsonable(self.argmax_params),
            "artifacts": artifacts,
        }


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, float):
        return _num(x)
    return x


# ---------------------------------------------------------------------------
# L^p quotient


def rayleigh_quotient(f: Function, p: float) -> float:
    """``||H f||_p / ||f||_p``."""
    den = lp_norm(f, p)
    if den.value == 0:
        raise DegenerateInput("f has zero norm")
    if den.value == INF:
        raise DivergentNorm("||f||_p is infinite")
    num = lp_norm(hardy_transform(f), p)
    if num.value == INF:
        raise DivergentNumerator("||H f||_p is infinite")
    return num.value / den.value


def extremal_family(n: int, p: float, eps: float) -> RadialFunction:
    """``|x|^(-n/p + eps)`` on the unit ball."""
    return RadialFunction(n, [(0.0, 1.0, [(1.0, -n / p + eps, 0)])])


def extremal_ratio_closed_form(n: int, p: float, eps: float) -> float:
    """The quotient of :func:`extremal_family`, computed by hand.

    ``H f = (n / (n/p' + eps)) f`` on the ball and the same constant times
    ``|x|^-n`` outside, so ``ratio^p = (n/(n/p'+eps))^p (1 + p eps/(n(p-1)))``.
    """
    pp = p / (p - 1)
    c = n / (n / pp + eps)
    return c * (1 + p * eps / (n * (p - 1))) ** (1 / p)


def estimate_operator_norm(p: float, n: int, epsilon_range=(1e-6, 0.5), optimizer: str = "golden",
                           iters: int = 60, grid: int = 64) -> SharpnessResult:
    """Maximise the quotient over the extremal family in ``log eps``."""
    if not p > 1:
        raise ValueError("p must be > 1")
    lo, hi = (math.log(e) for e in epsilon_range)
    trace = []

    def objective(t):
        eps = math.exp(t)
        r = rayleigh_quotient(extremal_family(n, p, eps), p)
        trace.append({"epsilon": eps, "ratio": r})
        return r

    if optimizer == "golden":
        _, best, _ = golden_max(objective, lo, hi, iters)
        objective(lo)
    elif optimizer == "grid":
        for i in range(grid):
            objective(lo + (hi - lo) * i / (grid - 1))
    else:
        raise ValueError(f"unknown optimizer {optimizer!r}")
    best_row = max(trace, key=lambda row: (row["ratio"], -row["epsilon"]))
    return SharpnessResult(
        "sharp-lp",
        target=p / (p - 1),
        achieved=best_row["ratio"],
        argmax_params={"epsilon": best_row["epsilon"]},
        samples=len(trace),
        params={"p": p, "n": n, "epsilon_range": list(epsilon_range), "optimizer": optimizer},
        trace=trace,
        extra={"trace_monotone": trace_is_monotone(trace)},
    )


def trace_is_monotone(trace, rel: float = 1e-12) -> bool:
    """Smaller epsilon never gives a smaller ratio.

    The exponent ``-n/p + eps`` is a float, so ``p*gamma + n`` carries an
    absolute rounding error of a few ulps and the ratio a relative error of
    order ``u / eps``. Comparisons allow that much on top of ``rel``.
    """
    u = 2.0**-52
    rows = sorted(trace, key=lambda row: -row["epsilon"])
    for a, b in zip(rows, rows[1:]):
        slack = max(rel, 64 * u / b["epsilon"])
        if b["ratio"] < a["ratio"] * (1 - slack):
            return False
    return True


# ---------------------------------------------------------------------------
# weak (1,1)


def weak11_ratio(f: Function) -> float:
    mass = lp_norm(f, 1).value
    if mass == 0:
        raise DegenerateInput("f is zero")
    return weak_l1_norm(hardy_transform(f)).value / mass


def normalized_indicator(n: int, delta: float) -> RadialFunction:
    return RadialFunction.indicator(n, delta, value=1.0 / (unit_ball_volume(n) * delta**n))


def weak11_sharpness(n: int, radii=(0.25, 0.5, 1.0, 2.0, 4.0), corpus=()) -> SharpnessResult:
    funcs = [normalized_indicator(n, d) for d in radii] + list(corpus)
    labels = [{"delta": d} for d in radii] + [{"corpus": i} for i in range(len(corpus))]

    def one(f):
        try:
            return weak11_ratio(f)
        except DegenerateInput:
            return None

    ratios = pmap(one, funcs)
    trace = [dict(lab, ratio=r) for lab, r in zip(labels, ratios) if r is not None]
    best = max(trace, key=lambda row: row["ratio"])
    return SharpnessResult(
        "weak11",
        target=1.0,
        achieved=best["ratio"],
        argmax_params={k: v for k, v in best.items() if k != "ratio"},
        samples=len(trace),
        params={"n": n, "radii": list(radii), "corpus_size": len(corpus)},
        trace=trace,
        extra={"skipped": len(funcs) - len(trace)},
    )


# ---------------------------------------------------------------------------
# H^1 -> L^1 on atoms


def atom_l1_split(a: RadialFunction, split: float) -> dict:
    """Exact ``int |H a|`` inside and outside ``B(0, split)``."""
    ha = hardy_transform(a)
    inside = restrict(ha, 0.0, split)
    outside = restrict(ha, split, INF)
    return {
        "inner": lp_norm(inside, 1).value,
        "outer": lp_norm(outside, 1).value,
        "outer_structural_zero": outside.is_zero,
    }


def h1_to_l1_atom_sweep(n: int, num_atoms: int, seed: int = 0) -> SharpnessResult:
    if num_atoms < 1:
        raise ValueError("num_atoms must be >= 1")

    def one(s):
        a = make_random_atom("linf", n, seed=s)
        r = a.support[1]
        row = atom_l1_split(a, 2 * r)
        beyond = restrict(hardy_transform(a), r, INF)
        row.update(seed=s, radius=r, total=row["inner"] + row["outer"], beyond_support_zero=beyond.is_zero)
        return row

    trace = pmap(one, range(seed, seed + num_atoms))
    best = max(trace, key=lambda row: row["total"])
    b = golubov_example(n)
    rep = validate_atom(b, "linf")
    golubov_l1 = lp_norm(hardy_transform(scale(b, rep.rescale_factor)), 1).value
    return SharpnessResult(
        "h1l1",
        target=2.0**n,
        achieved=best["total"],
        argmax_params={"seed": best["seed"]},
        samples=len(trace),
        params={"n": n, "num_atoms": num_atoms, "seed": seed},
        trace=trace,
        extra={
            "all_outer_zero": all(row["outer_structural_zero"] for row in trace),
            "all_beyond_support_zero": all(row["beyond_support_zero"] for row in trace),
            "normalized_golubov_l1": golubov_l1,
        },
    )


def c0_split_experiment(c0: float, atom: RadialFunction, n: int | None = None) -> dict:
    """Split ``int |H a|`` at ``B(0, c0 r)``.

    ``generic_*`` follow the worst-case estimate that replaces the
    cumulative mass by ``||a||_inf |B(0,|x|)|``, uses cancellation only
    beyond the support, and therefore gives ``+inf`` outside when
    ``c0 < 1``. ``exact_*`` are the true values for this atom.
    """
    if not c0 > 0:
        raise ValueError("c0 must be positive")
    n = atom.dim if n is None else n
    r = atom.support[1]
    split = c0 * r
    exact = atom_l1_split(atom, split)
    amax = sup_norm(atom)
    # the worst-case bound on |H a| is the constant ||a||_inf wherever
    # cancellation has not been used
    bound_outer = RadialFunction(n, [(split, INF, [(amax, 0.0, 0)])]) if c0 < 1 else RadialFunction.zero(n)
    return {
        "c0": c0,
        "inner": exact["inner"],
        "outer": exact["outer"],
        "outer_structural_zero": exact["outer_structural_zero"],
        "generic_inner": c0**n * unit_ball_volume(n),
        "generic_outer": lp_norm(bound_outer, 1).value,
    }


# ---------------------------------------------------------------------------
# Herz


def herz_target(p: float, n: int) -> float:
    q = 2.0 ** (n * (1 - 1 / p))
    return q * (p / (p - 1)) * q / (q - 1)


def unit_ball_atom(a: RadialFunction) -> RadialFunction:
    """``R^n a(R x)`` moves an atom on ``B(0, R)`` to the unit ball."""
    R = a.support[1]
    return scale(dilate(a, R), R**a.dim)


def herz_atom_sweep(p: float, n: int, num_atoms: int, seed: int = 0, tolerance: float = 1e-12) -> SharpnessResult:
    if not p > 1:
        raise ValueError("p must be > 1")

    def one(s):
        a = make_random_atom("central", n, p, seed=s)
        u = unit_ball_atom(a)
        hu = hardy_transform(u)
        hn = herz_norm(hu, p, tolerance).value
        direct = herz_norm(hardy_transform(a), p, tolerance).value
        return {
            "seed": s,
            "radius": a.support[1],
            "herz": hn,
            "herz_original": direct,
            "outer_shells_zero": restrict(hu, 1.0, INF).is_zero,
            "valid_unit_atom": validate_atom(u, "central", p).valid,
        }

    trace = pmap(one, range(seed, seed + num_atoms))
    best = max(trace, key=lambda row: row["herz"])
    dil = max(abs(row["herz"] - row["herz_original"]) / row["herz"] for row in trace if row["herz"] > 0)
    return SharpnessResult(
        "herz",
        target=herz_target(p, n),
        achieved=best["herz"],
        argmax_params={"seed": best["seed"]},
        samples=len(trace),
        params={"p": p, "n": n, "num_atoms": num_atoms, "seed": seed},
        trace=trace,
        extra={
            "all_outer_shells_zero": all(row["outer_shells_zero"] for row in trace),
            "all_unit_atoms_valid": all(row["valid_unit_atom"] for row in trace),
            "max_dilation_rel_diff": dil,
        },
    )


# ---------------------------------------------------------------------------
# commutators


def commutator_l1_divergence(T_values=(10.0, 100.0, 1000.0)) -> dict:
    b, f0 = commutator_example_1d()
    c = commutator_apply(b, f0)
    tail = restrict(c, 3.0, INF)
    structural = (
        len(tail.pieces) == 1
        and tail.pieces[0].lo == 3.0
        and tail.pieces[0].hi == INF
        and tail.pieces[0].terms == (PowerLogTerm(2.0, -1.0, 0),)
    )
    integrals = [
        {"T": T, "value": lp_norm(restrict(c, 3.0, T), 1).value, "closed_form": 2 * math.log(T / 3)}
        for T in T_values
    ]
    return {
        "structural_2_over_x": structural,
        "truncated_integrals": integrals,
        "verdict": lp_norm(c, 1).value,
        "commutator": c,
    }


def lambda_grid(center: float, per_decade: int = 32, decades: int = 8) -> list[float]:
    half = per_decade * decades // 2
    return [center * 10.0 ** (j / per_decade) for j in range(-half, half + 1)]


def weak_sup_on_grid(g: Function, grid=None) -> tuple[float, float]:
    """(sup over the grid of ``lam * |{|g| > lam}|``, maximising lam)."""
    if g.is_zero:
        return 0.0, 0.0
    if grid is None:
        s = sup_norm(g)
        grid = lambda_grid(s if 0 < s < INF else 1.0)
    best, arg = 0.0, 0.0
    for lam in grid:
        v = lam * distribution(g, lam)
        if v > best:
            best, arg = v, lam
    return best, arg


def _symbol_norm(b: Function, q: float = 2.0) -> float:
    return cbmo_norm(b, q).value


def commutator_weak_sweep(b: Function, atoms, lam_grid=None, shift: float = 1.0) -> SharpnessResult:
    """``sup_lam lam |{|[b,H] a| > lam}|`` over atoms, and the same for ``b + shift``."""
    atoms = list(atoms)
    if isinstance(b, LineFunction):
        b_shift = b + LineFunction.constant(shift)
    else:
        b_shift = b + RadialFunction.constant(b.dim, shift)

    def one(item):
        i, a = item
        g = commutator_apply(b, a)
        v, lam = weak_sup_on_grid(g, lam_grid)
        g2 = commutator_apply(b_shift, a)
        v2, _ = weak_sup_on_grid(g2, lam_grid if lam_grid is not None else _same_grid(g))
        return {"atom": i, "sup": v, "lambda": lam, "sup_shifted": v2}

    trace = pmap(one, list(enumerate(atoms)))
    best = max(trace, key=lambda row: row["sup"]) if trace else {"sup": 0.0, "atom": None}
    bn = _symbol_norm(b)
    c_emp = best["sup"] / bn if bn > 0 else (0.0 if best["sup"] == 0 else INF)
    shift_diff = max((abs(row["sup"] - row["sup_shifted"]) / max(row["sup"], 1e-300) for row in trace), default=0.0)
    return SharpnessResult(
        "commutator-weak",
        target=INF,
        achieved=best["sup"],
        argmax_params={"atom": best["atom"]},
        samples=len(trace),
        params={"num_atoms": len(atoms), "shift": shift},
        trace=trace,
        extra={"symbol_cbmo2": bn, "C_emp": c_emp, "max_shift_rel_diff": shift_diff},
    )


def _same_grid(g: Function):
    # the shifted commutator is the same function, so it gets the same grid
    if g.is_zero:
        return [1.0]
    s = sup_norm(g)
    return lambda_grid(s if 0 < s < INF else 1.0)


def line_atoms(num: int, seed: int = 0) -> list[LineFunction]:
    """Even extensions of random one-dimensional atoms, plus ``f0 / 4``."""
    _, f0 = commutator_example_1d()
    out = [scale(f0, 0.25)]
    for s in range(seed, seed + num - 1):
        a = make_random_atom("linf", 1, seed=s)
        out.append(LineFunction.from_radial(a))
    return out


def translation_experiment(shifts=(0.5, 1.0, 2.0, 4.0, 8.0), seed: int = 0, num: int = 20) -> SharpnessResult:
    """``int |H a|`` for translated piecewise-constant line atoms; reported only."""
    from .hardy_transforms import translate_line

    rows = []
    for s in range(seed, seed + num):
        a = LineFunction.from_radial(make_random_atom("linf", 1, seed=s))
        for x0 in shifts:
            t = translate_line(a, x0)
            rows.append({"seed": s, "shift": x0, "l1": lp_norm(hardy_transform(t), 1).value})
    best = max(rows, key=lambda row: row["l1"])
    return SharpnessResult(
        "translation",
        extra={"divergent": sum(1 for row in rows if row["l1"] == INF)},
        target=2.0,
        achieved=best["l1"],
        argmax_params={"seed": best["seed"], "shift": best["shift"]},
        samples=len(rows),
        params={"shifts": list(shifts), "seed": seed, "num": num},
        trace=rows,
    )


# ---------------------------------------------------------------------------
# random corpora


def random_function(n: int, rng, min_exponent: float | None = None, nonnegative: bool = True,
                    margin: float = 0.05) -> RadialFunction:
    """A random radial function with finite L^1 norm (and L^p when ``min_exponent`` is set).

    Pieces: an optional power (times ``-ln r``) at the origin, a few
    constant or power shells, and an optional decaying tail.
    """
    lo_exp = (-n if min_exponent is None else min_exponent) + margin
    m = int(rng.integers(1, 5))
    cuts = np.sort(rng.uniform(0.05, 4.0, size=m))
    pieces = []
    start = 0.0
    for i, hi in enumerate(cuts):
        sign = 1.0 if nonnegative else float(rng.choice([-1.0, 1.0]))
        c = sign * float(rng.uniform(0.1, 3.0))
        kind = int(rng.integers(0, 3))
        if kind == 0:
            terms = [(c, 0.0, 0)]
        elif kind == 1:
            g = float(rng.uniform(lo_exp, 2.0)) if start == 0 else float(rng.uniform(-3.0, 2.0))
            terms = [(c, g, 0)]
        else:
            g = float(rng.uniform(lo_exp, 1.0)) if start == 0 else float(rng.uniform(-2.0, 1.0))
            if hi <= 1.0:
                terms = [(-c, g, 1)]
            else:
                terms = [(c, g, 0), (0.1 * c, g + 0.5, 0)]
        pieces.append((start, float(hi), terms))
        start = float(hi)
    if rng.uniform() < 0.4:
        g = float(rng.uniform(-n - 2.0, -n - margin))
        pieces.append((start, INF, [(float(rng.uniform(0.1, 2.0)), g, 0)]))
    return RadialFunction(n, pieces)


def random_corpus(n: int, size: int, seed: int = 0, min_exponent: float | None = None,
                  nonnegative: bool = True, margin: float = 0.05) -> list[RadialFunction]:
    rng = np.random.default_rng([seed, n, size])
    return [random_function(n, rng, min_exponent, nonnegative, margin) for _ in range(size)]
