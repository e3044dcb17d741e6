# Exact Hardy averages of piecewise power-log functions.
#
# Every function here is a list of pieces [lo, hi) carrying terms
# c * r^gamma * (ln r)^k, and the Hardy average comes back in the same form.

# %%
import numpy as np

from hardylab import RadialFunction, golubov_example, hardy_transform, volume_integral
from hardylab.atom_factory import golubov_hardy_closed_form

# %%
# Two shells: a negative core and a positive ring, with total mass zero.
b = golubov_example(1)
hb = hardy_transform(b)
for p in hb.pieces:
    print(p)

# %%
# The average is -1 on the core, 1 - 2/r on the ring and exactly 0 outside.
r = np.linspace(0.1, 3.0, 30)
print(np.max(np.abs(hb(r) - golubov_hardy_closed_form(1, r))))

# %%
# Its integral is nonzero, which is why the average fails to be in H^1.
for n in (1, 2, 3):
    print(n, volume_integral(hardy_transform(golubov_example(n))))

# %%
# Log terms stay in the class.
f = RadialFunction(2, [(0, 1, [(1.0, -0.5, 1)]), (1, np.inf, [(1.0, -3.0, 0)])])
print(hardy_transform(f).pieces)
