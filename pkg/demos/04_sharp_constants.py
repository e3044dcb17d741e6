# Looking for the best constants.

# %%
from hardylab import sharpness_lab as lab

# %%
# |x|^(-n/p + eps) on the unit ball pushes the L^p quotient up to p/(p-1) as eps -> 0.
r = lab.estimate_operator_norm(2.0, 1)
print(r.achieved, r.target, r.argmax_params)
for row in r.trace[:5]:
    print(row)

# %%
# The grid optimizer gives the same picture.
print(lab.estimate_operator_norm(3.0, 2, optimizer="grid").achieved, 1.5)

# %%
# Weak (1, 1): normalized ball indicators attain 1 exactly.
corpus = lab.random_corpus(2, 30, seed=1)
w = lab.weak11_sharpness(2, corpus=corpus)
print(w.achieved, w.argmax_params)

# %%
h = lab.herz_atom_sweep(2.0, 1, 100)
print(h.achieved, h.target, h.extra)
