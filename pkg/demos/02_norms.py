# Norms with certified modes: exact, tail_bounded or search_lower_bound.

# %%
from hardylab import RadialFunction, golubov_example, hardy_transform, herz_norm, lp_norm, weak_l1_norm
from hardylab.norm_engine import distribution

hb = hardy_transform(golubov_example(1))

# %%
print(lp_norm(hb, 1))            # 4 ln 2, exact
print(distribution(hb, 0.5))     # 8/3
print(weak_l1_norm(hb))

# %%
# A power on the ball is integrable but its average has an r^-n tail.
f = RadialFunction(1, [(0, 1, [(1.0, -0.5, 0)])])
print(lp_norm(f, 1), lp_norm(hardy_transform(f), 1))

# %%
# Herz norms sum dyadic shells. The inner tail is a geometric series.
print(herz_norm(RadialFunction.indicator(1, 1.0), 2))
print(herz_norm(RadialFunction(2, [(0, 1, [(1.0, -0.5, 1)])]), 2))
