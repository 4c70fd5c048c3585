# Ritt versus sectorial: f(I - T) = phi(T) with phi(l) = f(1 - l).
#
# The left side integrates over rays (a sector contour around the spectrum of
# I - T), the right side over the closed Stolz contour around the spectrum of T.
import numpy as np

from nritt import calculus, funclass
from nritt.matrixkit import Operator
from nritt.regions import NSTOLZ, max_angle, nstolz, sample_interior

z = funclass.z
rng = np.random.default_rng(7)

for n in (1, 2):
    eig = sample_interior(nstolz(n, 0.4 * max_angle(NSTOLZ, n)), 4, rng)
    V = np.eye(4) + 0.3 * rng.standard_normal((4, 4))
    T = Operator.from_spectrum(eig, V)
    for f in funclass.sector_test_family(n, 2):
        res = calculus.transfer_check(T, f, n)
        print(f"n={n}  deviation={res.deviation:.2e}")

# the same check from the command line:
#   nritt transfer --input op.json --function f.json
