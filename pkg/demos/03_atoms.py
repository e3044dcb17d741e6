# Random atoms whose cancellation is exact in floating point.

# %%
from hardylab import hardy_transform, make_random_atom, validate_atom
from hardylab.radial_calculus import INF, restrict
from hardylab import sharpness_lab as lab

# %%
a = make_random_atom("linf", 2, seed=3)
print(a.pieces)
print(validate_atom(a, "linf"))

# %%
# Beyond the support the average is the mass over the ball, so it is zero.
print(restrict(hardy_transform(a), a.support[1], INF).is_zero)

# %%
r = lab.h1_to_l1_atom_sweep(2, 200, seed=0)
print(r.achieved, r.target, r.extra)

# %%
# Splitting at c0 times the radius: below 1 the crude bound has nothing to cancel.
for c0 in (0.5, 1.0, 2.0):
    print(lab.c0_split_experiment(c0, a))
