# Functions of an n-Ritt matrix by contour quadrature.
#
# phi(T) is (1/2 pi i) times the integral of phi(l) (l - T)^-1 over the
# boundary of a Stolz domain sitting between the spectrum and the region
# where phi is certified to decay at 1.
import numpy as np

from nritt import calculus, funclass
from nritt.matrixkit import Operator

z = funclass.z

# a non-normal matrix with known eigenvalues
V = np.array([[1.0, 0.8], [0.0, 1.0]])
T = Operator.from_spectrum([0.5, 0.9], V)

rep = calculus.classify_ritt(T, n=1)
print("admissible:", rep.admissible)
print("type angle:", round(rep.type_angle, 4))
print("sampled sup |(l-1) R(l,T)|:", round(rep.resolvent_bound, 3))

phi = (1 - z) ** 2
val, info = calculus.apply_ritt(T, phi, full_output=True)
print("phi(T) by quadrature:\n", np.round(np.asarray(val), 12))
print("nodes used:", info.nodes, "angles (alpha, beta, gamma):", np.round(info.angles, 4))
print("spectral oracle:\n", np.round(calculus.spectral_oracle(T, phi), 12))

# constants and polynomials go through the extended calculus: p = p(1) + (z - 1) q
p = funclass.poly([2, -1, 0, 0.5])
a = np.asarray(T)
horner = 2 * np.eye(2) - a + 0.5 * a @ a @ a
print("polynomial gap:", np.max(np.abs(np.asarray(calculus.apply_extended(T, p)) - horner)))

# phi(rT) -> phi(T) as r -> 1
rl = calculus.approximate_r_limit(T, phi, [0.9, 0.99, 0.999])
for r, d in rl.rows:
    print(f"r={r:<6} |phi(rT) - phi(T)| = {d:.3e}")

# a Jordan block: K_lower exceeds 1 once the Stolz angle is small
J = Operator([[0.5, 1.0], [0.0, 0.5]])
for g in (0.05, 0.1, 0.3, 0.8):
    est = calculus.estimate_calculus_norm(J, calculus.Region("nstolz", 1, g), [1 - z, (1 - z) ** 2])
    print(f"gamma={g:<5} K_lower={est.K_lower:.4f}")
