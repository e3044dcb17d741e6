import math

import numpy as np
import pytest

from hardylab.atom_factory import (
    AtomReport,
    commutator_example_1d,
    golubov_example,
    golubov_hardy_closed_form,
    make_random_atom,
    power_counterexample,
    total_mass,
    validate_atom,
)
from hardylab.errors import InvalidExponent, UnboundedSupport
from hardylab.hardy_transforms import hardy_transform
from hardylab.norm_engine import lp_norm, sup_norm
from hardylab.radial_calculus import INF, LineFunction, RadialFunction, restrict, unit_ball_volume
from oracles import radial_integral


@pytest.mark.parametrize("n", [1, 2, 3])
def test_golubov_is_an_atom_up_to_scale(n):
    b = golubov_example(n)
    assert total_mass(b) == 0.0
    rep = validate_atom(b, "linf")
    assert rep.support_radius == 2.0
    assert rep.size_norm == 2.0**n - 1
    assert not rep.valid
    assert rep.rescale_factor == pytest.approx(1 / ((2.0**n - 1) * unit_ball_volume(n) * 2.0**n), rel=1e-15)


def test_golubov_closed_form_values():
    r = np.array([0.5, 1.0, 1.5, 2.5])
    np.testing.assert_allclose(golubov_hardy_closed_form(1, r), [-1.0, -1.0, 1 - 2 / 1.5, 0.0], rtol=1e-15)


@pytest.mark.parametrize("kind", ["linf", "(1,inf,0)"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_random_linf_atoms(kind, n):
    for seed in range(40):
        a = make_random_atom(kind, n, seed=seed)
        rep = validate_atom(a, kind)
        assert rep.valid, rep
        assert rep.cancellation_residual == 0.0
        R = a.support[1]
        assert math.log2(R).is_integer() and -3 <= math.log2(R) <= 3
        assert restrict(hardy_transform(a), R, INF).is_zero


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_random_central_atoms(p):
    for seed in range(30):
        a = make_random_atom("central(1,p)", 2, p, seed=seed)
        rep = validate_atom(a, "central", p)
        assert rep.valid
        assert rep.size_norm <= rep.size_bound
        assert rep.size_norm == pytest.approx(lp_norm(a, p).value)


def test_atom_mass_against_quadrature():
    for seed in range(10):
        a = make_random_atom("linf", 2, seed=seed)
        pos = radial_integral(RadialFunction(2, [(p.lo, p.hi, p.terms) for p in a.pieces if p.terms[0].coeff > 0]))
        neg = radial_integral(RadialFunction(2, [(p.lo, p.hi, p.terms) for p in a.pieces if p.terms[0].coeff < 0]))
        assert pos == pytest.approx(neg, rel=1e-10)


def test_atoms_are_deterministic():
    assert make_random_atom("linf", 2, seed=5) == make_random_atom("linf", 2, seed=5)
    assert make_random_atom("linf", 2, seed=5) != make_random_atom("linf", 2, seed=6)


def test_atom_errors():
    with pytest.raises(InvalidExponent):
        make_random_atom("central", 1, p=1.0)
    with pytest.raises(ValueError):
        make_random_atom("h2", 1)
    with pytest.raises(UnboundedSupport):
        validate_atom(RadialFunction.constant(1, 1.0), "linf")


def test_non_cancelling_function_is_rejected():
    f = RadialFunction.indicator(1, 1.0, value=0.25)
    rep = validate_atom(f, "linf")
    assert not rep.valid
    assert rep.cancellation_residual == pytest.approx(0.5)
    assert rep.size_norm <= rep.size_bound


def test_line_atom_ball():
    _, f0 = commutator_example_1d()
    rep = validate_atom(f0, "linf")
    assert rep.support_radius == 2.0
    assert rep.cancellation_residual == 0.0
    # ||f0||_inf = 1 > 1/4
    assert not rep.valid
    assert rep.rescale_factor == 0.25


def test_report_to_dict():
    rep = validate_atom(make_random_atom("linf", 1, seed=1), "linf")
    d = rep.to_dict()
    assert set(d) == {f for f in AtomReport.__dataclass_fields__}


def test_commutator_example_shape():
    b, f0 = commutator_example_1d()
    assert isinstance(b, LineFunction)
    assert b(3.0) == 1.0 and b(1.0) == 0.0 and b(-3.0) == 0.0
    assert f0(1.0) == 1.0 and f0(-1.0) == -1.0 and f0(2.5) == 0.0


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.0])
def test_power_counterexample(alpha):
    f = power_counterexample(alpha, 1.0, 1)
    assert sup_norm(f) == (INF if alpha < 0 else 1.0)
    assert lp_norm(f, 1).value == pytest.approx(2 / (alpha + 1), rel=1e-15)
    with pytest.raises(InvalidExponent):
        power_counterexample(-1.0, 1.0, 1)
