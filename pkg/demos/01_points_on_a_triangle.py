"""
Points on a triangle from a digital sequence
============================================

Each index h is turned into a two-column bit matrix X(h).  Read row by row,
X(h) is an address in the recursive 4-way split of the triangle, and the point
emitted for h is the centre of the addressed cell.
"""

import numpy as np

from triqmc import Triangle, basu_owen_pair, pascal_pair, sequence_element, triangle_points

T = Triangle.parse("0,0,1,0,0,1")
bo = basu_owen_pair()

# The first few addresses.  Rows past nu(h) are zero and do not move the point.
for h in range(6):
    X, nu = sequence_element(bo, h, 2)
    print(f"h={h}  X={X.to_text('/')}  nu={nu}")

# With 4^k points every level-k cell gets exactly one point: its centroid.
pts = triangle_points(bo, T, 16)
print(np.round(pts, 4))

# The same machinery with a different pair of generating matrices.
pa = triangle_points(pascal_pair(), T, 16)
print("pascal, first 8:")
print(np.round(pa[:8], 4))

# Any triangle works; the points are the affine images of the unit-triangle ones.
skew = Triangle((1.0, -2.0), (4.5, 0.5), (-0.5, 3.0))
A = np.column_stack([skew.B - skew.A, skew.C - skew.A])
assert np.allclose(triangle_points(bo, skew, 64), triangle_points(bo, T, 64) @ A.T + skew.A)
print("affine images agree")
