# Rademacher averages and lower estimates of R-bounds.
import numpy as np

from nritt import calculus, funclass, stochastics
from nritt.matrixkit import Operator, resolvent
from nritt.regions import nstolz

x = np.array([[1.0, 0.0], [0.0, 1.0]])
print("p1:", stochastics.rad_norm(x, "p1").value)  # every sign pattern has l1 norm 2
print("p2:", stochastics.rad_norm(x, "p2").value)  # sqrt(2): orthogonality

rng = np.random.default_rng(0)
y = rng.standard_normal((20, 3))
print("20 vectors, monte carlo:", stochastics.rad_norm(y, "pinf"))

# R-bound of the sampled family (l - 1) R(l, T) outside a Stolz domain
T = Operator.from_spectrum([0.3, 0.8], np.array([[1, 0.5], [0, 1]]), norm_kind="p1")
lams = calculus.shell_points(nstolz(1, 1.2), density=2)
fam = [Operator((l - 1) * resolvent(T, l).value, "p1") for l in lams]
est = stochastics.estimate_r_bound(fam, trials=16)
print(f"{len(fam)} operators, C_lower={est.C_lower:.4f}")
print("uniform bound for comparison:", max(np.abs(np.asarray(f)).sum(axis=0).max() for f in fam))

# quadratic estimate with x_k = x in every slot
g = funclass.stolz_test_family(3)
q = stochastics.estimate_quadratic_calculus(T, nstolz(1, 1.2), g, x_samples=16)
print("quadratic C_lower:", round(q.C_lower, 4))
