# Diagonal multipliers on the unit circle, and the Carleson product.
#
# For an increasing sequence in [0, 1) the resolvent of diag(gamma) at e^{i t}
# is again diagonal. Its symbol has total variation at most
# I_t = (pi - |t|) / (2 sin |t|), which keeps |(l - 1) R(l, T)| bounded.
import math

import numpy as np

from nritt import calculus, multipliers

seq = multipliers.sequence_from_rule("1-2^-(n+1)", 12)
T = multipliers.multiplier(seq)
print("admissible:", calculus.classify_ritt(T, 1).admissible)

thetas = [0.05, 0.5, math.pi / 2, 2.5, math.pi]
for row in multipliers.ritt_bound_profile(seq, thetas):
    print(f"t={row.theta:6.3f}  actual={row.actual:.4f}  |e^it-1| I_t={row.profile:.4f}  bound={row.bound:.4f}")

for t in (0.3, 1.0, math.pi):
    print(f"I_{t:.2f} = {multipliers.i_theta(t):.6f}  symbol BV = {multipliers.resolvent_symbol(seq, t).bv_norm:.6f}")

# geometric points in the right half-plane are separated
pts = 2.0 ** -np.arange(10)
print("delta_min(2^-i) =", multipliers.carleson_delta_min(pts))
# two nearly equal points are not
print("delta_min({1, 1+1e-9}) =", multipliers.carleson_delta_min([1, 1 + 1e-9]))
