# Regions and their boundary contours.
#
# A Stolz domain is the open convex hull of the point 1 and a disc of radius
# sin(gamma) around 0. The n-fold version glues n rotated copies together at
# the vertex 1. Sectors are unions of n open wedges around 0.
import math

import numpy as np

from nritt.contours import integrate, sector_boundary, stolz_boundary, winding_number
from nritt.regions import boundary_distance, contains, nsector, nstolz

B = nstolz(2, math.pi / 4)
print(B, B.to_dict())

# membership is for the OPEN region: the vertex itself is not inside
for z in [0, 1, 1.5, 2.2, 0.5 + 0.6j]:
    print(f"{z!s:>10}  inside={bool(contains(B, z))}  dist={float(boundary_distance(B, z)):.4f}")

# The counterclockwise boundary: segment 1 -> upper tangent point, the big arc,
# segment back to 1, then the same three pieces rotated about 1.
c = stolz_boundary(2, math.pi / 4)
for p in c.pieces:
    print(type(p).__name__, np.round(p.start, 4), "->", np.round(p.end, 4))
print("max chaining gap:", np.max(c.chain_gaps()))

# winding numbers through the quadrature itself
print("winding at 0.3 :", winding_number(c, 0.3))
print("winding at 1.7 :", winding_number(c, 1.7))
print("winding at 3.0 :", winding_number(c, 3.0))

# Cauchy: (1/2 pi i) * integral of l/(l - 0.5) = 0.5
res = integrate(stolz_boundary(1, math.pi / 3), lambda l: l / (l - 0.5), full_output=True)
print("residue check:", res.value / (2j * math.pi), "nodes:", res.nodes)

# Sector contours are open: one ray in, one ray out, per wedge.
S = sector_boundary(2, math.pi / 6, r_max=10)
for p in S.pieces:
    print("ray", "in " if p.inward else "out", f"angle {math.degrees(np.angle(p.direction)):7.2f} deg")
print(contains(nsector(2, math.pi / 6), -1))
