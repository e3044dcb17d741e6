"""Exact calculus for the Hardy averaging operator on power-log piecewise functions."""

from .atom_factory import (
    AtomReport,
    commutator_example_1d,
    golubov_example,
    make_random_atom,
    power_counterexample,
    validate_atom,
)
from .errors import *  # noqa: F401,F403
from .hardy_transforms import commutator_apply, dilate, hardy_transform, hardy_transform_line, translate_line
from .norm_engine import (
    NormResult,
    SearchConfig,
    bmo_norm_1d,
    cbmo_norm,
    central_oscillation,
    distribution,
    herz_norm,
    lp_norm,
    mean_oscillation,
    sup_norm,
    weak_l1_norm,
)
from .radial_calculus import (
    LineFunction,
    Piece,
    PowerLogTerm,
    RadialFunction,
    cumulative_mass,
    definite_integral,
    dumps,
    evaluate,
    from_dict,
    loads,
    root_isolate,
    to_dict,
    volume_integral,
)

__version__ = "0.1.0"
