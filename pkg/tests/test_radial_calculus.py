import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from hardylab.errors import FormatError, IndeterminateDivergence, NotLocallyIntegrable
from hardylab.radial_calculus import (
    INF,
    LineFunction,
    Piece,
    PowerLogTerm,
    RadialFunction,
    antiderivative_term,
    cumulative_mass,
    definite_integral,
    derivative_terms,
    dumps,
    eval_terms,
    from_dict,
    integrate_terms,
    leading_at_inf,
    leading_at_zero,
    loads,
    monotone_parts,
    multiply,
    normalize_terms,
    piece_roots,
    restrict,
    root_isolate,
    to_dict,
    unit_ball_volume,
    volume_integral,
)
from oracles import radial_integral


def test_unit_ball_volume():
    assert unit_ball_volume(1) == 2.0
    assert unit_ball_volume(2) == pytest.approx(math.pi, rel=1e-15)
    assert unit_ball_volume(3) == pytest.approx(4 * math.pi / 3, rel=1e-15)


def test_normalize_merges_and_drops():
    terms = normalize_terms([(1.0, 0.0, 0), (2.0, 0.0, 0), (1e-320, 1.0, 0), (3.0, -1.0, 1), (-3.0, -1.0, 1)])
    assert terms == (PowerLogTerm(3.0, 0.0, 0),)


def test_term_rejects_non_finite():
    with pytest.raises(Exception):
        PowerLogTerm(math.nan, 0.0, 0)


def test_antiderivative_of_log():
    anti = antiderivative_term(PowerLogTerm(1.0, 0.0, 1))
    assert set(anti) == {PowerLogTerm(1.0, 1.0, 1), PowerLogTerm(-1.0, 1.0, 0)}


@pytest.mark.parametrize("g,k", [(0.0, 0), (-0.5, 1), (2.3, 2), (-1.0, 1), (-3.0, 0)])
def test_antiderivative_differentiates_back(g, k):
    t = PowerLogTerm(1.7, g, k)
    back = derivative_terms(normalize_terms(antiderivative_term(t)))
    assert len(back) == 1
    assert back[0].key == t.key
    assert back[0].coeff == pytest.approx(t.coeff, rel=1e-14)


def test_integrate_terms_matches_quad():
    terms = normalize_terms([(1.0, -0.5, 1), (2.0, 1.5, 0), (-0.3, 0.0, 2)])
    got = integrate_terms(terms, 0.2, 3.0)
    ref = quad(lambda r: eval_terms(terms, r), 0.2, 3.0, epsabs=0, epsrel=1e-13)[0]
    assert got == pytest.approx(ref, rel=1e-12)


def test_integrate_divergence_sign():
    assert integrate_terms((PowerLogTerm(1.0, -1.0, 0),), 0.0, 1.0) == INF
    assert integrate_terms((PowerLogTerm(-2.0, -2.0, 0),), 0.0, 1.0) == -INF
    assert integrate_terms((PowerLogTerm(1.0, -1.0, 1),), 0.0, 1.0) == -INF
    assert integrate_terms((PowerLogTerm(1.0, -1.0, 0),), 1.0, INF) == INF
    assert integrate_terms((PowerLogTerm(1.0, -2.0, 0),), 1.0, INF) == pytest.approx(1.0)


def test_mixed_divergence_is_indeterminate():
    f = RadialFunction(1, [(0, 1, [(1.0, -1.0, 0)]), (1, INF, [(-1.0, 0.0, 0)])])
    with pytest.raises(IndeterminateDivergence):
        definite_integral(f, 0.0, INF)


def test_leading_terms():
    terms = normalize_terms([(1.0, -1.0, 0), (2.0, -1.0, 2), (3.0, 2.0, 0)])
    assert leading_at_zero(terms) == PowerLogTerm(2.0, -1.0, 2)
    assert leading_at_inf(terms) == PowerLogTerm(3.0, 2.0, 0)


def test_evaluate_half_open_pieces():
    f = RadialFunction(1, [(0, 1, [(1.0, 0.0, 0)]), (1, 2, [(5.0, 0.0, 0)])])
    assert f(1.0) == 5.0
    assert f(0.999) == 1.0
    assert f(2.0) == 0.0


def test_line_function_splits_at_zero_and_evaluates_at_abs():
    f = LineFunction([(-1.0, 2.0, [(1.0, 1.0, 0)])])
    assert [p.lo for p in f.pieces] == [-1.0, 0.0]
    assert f(-0.5) == 0.5
    assert f(1.5) == 1.5


def test_pieces_must_not_overlap():
    with pytest.raises(ValueError):
        RadialFunction(1, [(0, 2, [(1, 0, 0)]), (1, 3, [(1, 0, 0)])])


def test_equal_neighbours_merge():
    f = RadialFunction(2, [(0, 1, [(1, 0, 0)]), (1, 2, [(1, 0, 0)])])
    assert len(f.pieces) == 1


def test_volume_integral_indicator():
    for n in (1, 2, 3):
        f = RadialFunction.indicator(n, 1.0)
        assert volume_integral(f) == pytest.approx(unit_ball_volume(n), rel=1e-15)


def test_volume_integral_matches_quadrature():
    f = RadialFunction(2, [(0, 1, [(1.0, -0.5, 1)]), (1, 3, [(2.0, 0.5, 0), (-1.0, 0.0, 0)]),
                           (3, INF, [(4.0, -3.5, 0)])])
    assert volume_integral(f) == pytest.approx(radial_integral_signed(f), rel=1e-10)


def radial_integral_signed(f):
    n = f.dim
    total = 0.0
    for p in f.pieces:
        hi = p.hi if p.hi < INF else np.inf
        total += quad(lambda r: eval_terms(p.terms, r) * r ** (n - 1), p.lo, hi, epsabs=0, epsrel=1e-12,
                      limit=200)[0]
    return n * unit_ball_volume(n) * total


def test_cumulative_mass_of_indicator():
    f = RadialFunction.indicator(3, 1.0)
    F = cumulative_mass(f)
    assert F(0.5) == pytest.approx(unit_ball_volume(3) * 0.125, rel=1e-15)
    assert F(5.0) == pytest.approx(unit_ball_volume(3), rel=1e-15)


def test_not_locally_integrable():
    f = RadialFunction(2, [(0, 1, [(1.0, -2.0, 0)])])
    with pytest.raises(NotLocallyIntegrable):
        cumulative_mass(f)


def test_root_isolate_simple():
    f = RadialFunction(1, [(0, INF, [(1.0, 0.0, 1)])])
    assert root_isolate(f, 0.0) == [1.0]
    g = RadialFunction(1, [(0, 10, [(1.0, 2.0, 0), (-2.0, 0.0, 0)])])
    assert root_isolate(g, 0.0) == [pytest.approx(math.sqrt(2), rel=1e-14)]


def test_root_isolate_several_roots():
    # (r - 1)(r - 2)(r - 3) = r^3 - 6 r^2 + 11 r - 6
    terms = normalize_terms([(1, 3, 0), (-6, 2, 0), (11, 1, 0), (-6, 0, 0)])
    roots = piece_roots(terms, 0.0, 0.0, INF)
    assert roots == [pytest.approx(v, abs=1e-11) for v in (1.0, 2.0, 3.0)]


def test_root_isolate_line_negative_side():
    f = LineFunction([(-3.0, 0.0, [(1.0, 1.0, 0), (-2.0, 0.0, 0)])])
    assert root_isolate(f, 0.0) == [pytest.approx(-2.0)]


def test_monotone_parts_split_at_critical_point():
    terms = normalize_terms([(1.0, 2.0, 0), (-2.0, 1.0, 0)])  # r^2 - 2r, minimum at 1
    parts = monotone_parts(terms, 0.0, 3.0)
    assert [pytest.approx(p.hi) for p in parts[:-1]] == [1.0]
    assert parts[0].f_lo == 0.0
    assert parts[0].f_hi == pytest.approx(-1.0)
    assert parts[1].solve(0.0) == pytest.approx(2.0)


def test_json_round_trip_and_format():
    f = RadialFunction(2, [(0, 1, [(1.5, -0.5, 1)]), (1, INF, [(2.0, -3.0, 0)])])
    doc = to_dict(f)
    assert doc["kind"] == "radial" and doc["dim"] == 2
    assert doc["pieces"][1]["hi"] == "inf"
    assert loads(dumps(f)) == f
    g = LineFunction.indicator(-INF, 2.0)
    assert loads(dumps(g)) == g
    assert json.loads(dumps(g))["pieces"][0]["lo"] == "-inf"


@pytest.mark.parametrize("doc", [
    {"kind": "radial", "dim": 1},
    {"kind": "planar", "dim": 1, "pieces": []},
    {"kind": "radial", "dim": 1, "pieces": [{"lo": 1, "hi": 0, "terms": []}]},
    {"kind": "radial", "dim": 1, "pieces": [{"lo": 0, "hi": 1, "terms": [{"c": 1, "gamma": 0, "k": -1}]}]},
    {"kind": "radial", "dim": 1, "pieces": [{"lo": 0, "hi": 1, "terms": [{"c": "x", "gamma": 0, "k": 0}]}]},
    [1, 2],
])
def test_json_rejects_malformed(doc):
    with pytest.raises(FormatError):
        from_dict(doc)


def test_restrict_and_multiply():
    f = RadialFunction(1, [(0, 4, [(1.0, 1.0, 0)])])
    g = restrict(f, 1.0, 2.0)
    assert g.pieces == (Piece(1.0, 2.0, (PowerLogTerm(1.0, 1.0, 0),)),)
    h = multiply(f, f)
    assert h(3.0) == pytest.approx(9.0)


# ---------------------------------------------------------------------------
# closure laws


dyadic = st.integers(-16, 16).map(lambda v: v / 4)
exps = st.sampled_from([0.0, 0.5, 1.0, 2.0, -0.5])
term = st.tuples(dyadic.filter(lambda v: v != 0), exps, st.integers(0, 2))


@st.composite
def radial_functions(draw, dim=1):
    cuts = sorted(draw(st.sets(st.integers(1, 15), min_size=1, max_size=4)))
    bounds = [0.0] + [c / 4 for c in cuts]
    pieces = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        pieces.append((lo, hi, draw(st.lists(term, min_size=1, max_size=3))))
    return RadialFunction(dim, pieces)


points = st.floats(0.01, 5.0)


@settings(max_examples=60, deadline=None)
@given(radial_functions(), radial_functions(), points)
def test_addition_is_pointwise(f, g, x):
    assert (f + g)(x) == pytest.approx(f(x) + g(x), rel=1e-12, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(radial_functions(), radial_functions(), points)
def test_product_is_pointwise(f, g, x):
    assert (f * g)(x) == pytest.approx(f(x) * g(x), rel=1e-12, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(radial_functions(), radial_functions())
def test_addition_commutes_structurally(f, g):
    assert f + g == g + f


@settings(max_examples=40, deadline=None)
@given(radial_functions(), radial_functions(), radial_functions(), points)
def test_distributive(f, g, h, x):
    lhs = f * (g + h)
    rhs = f * g + f * h
    assert lhs(x) == pytest.approx(rhs(x), rel=1e-11, abs=1e-11)


@settings(max_examples=40, deadline=None)
@given(radial_functions(dim=2))
def test_volume_integral_vs_oracle(f):
    sq = f * f  # nonnegative, so the |.|-based oracle applies
    got = volume_integral(sq)
    assert got == pytest.approx(radial_integral(sq), rel=1e-9, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(radial_functions())
def test_json_round_trip_property(f):
    assert loads(dumps(f)) == f
