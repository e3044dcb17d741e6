# Commutators [b, H] f = b H f - H(b f) on the line.

# %%
from hardylab import commutator_apply
from hardylab.atom_factory import commutator_example_1d, golubov_example, make_random_atom
from hardylab.norm_engine import bmo_norm_1d
from hardylab import sharpness_lab as lab

b, f0 = commutator_example_1d()
c = commutator_apply(b, f0)
print(c.pieces)          # 2/x from 2 on

# %%
d = lab.commutator_l1_divergence()
print(d["truncated_integrals"], d["verdict"])

# %%
# The symbol has bounded mean oscillation.
print(bmo_norm_1d(b))

# %%
# Weak-type sizes over atoms, and the same with b + 1.
atoms = lab.line_atoms(40)
r = lab.commutator_weak_sweep(b, atoms)
print(r.achieved, r.extra)

r2 = lab.commutator_weak_sweep(golubov_example(1), [make_random_atom("linf", 1, seed=s) for s in range(40)])
print(r2.achieved, r2.extra)

# %%
# Off-centre atoms: H is not translation invariant, and atoms straddling 0 blow up.
t = lab.translation_experiment()
print(t.achieved, t.extra)
