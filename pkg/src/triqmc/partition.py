"""Recursive 4-way partition of a triangle and the shift maps between cells.

Every triangle is handled in centroid-centred coordinates internally; all
point-valued public functions take and return original coordinates unless a
name says ``centered``.  Pairs in F2^2 are written as tuples ``(a, b)``.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .bitcore import IndexMatrix, code_rows, pair_code
from .errors import DomainError

__all__ = [
    "Triangle",
    "CenteredFrame",
    "UNIT_TRIANGLE",
    "INSIDE_TOL",
    "subtriangle",
    "eta",
    "phi",
    "phi_point",
    "subregion",
    "tau",
    "sigma_p1_p2",
    "point_xor_row",
    "phi_codes",
    "eta_codes",
    "subregion_vertices_codes",
    "cell_centres",
]

INSIDE_TOL = 1e-9

PAIRS = ((0, 0), (1, 0), (0, 1), (1, 1))


class Triangle:
    """Ordered vertex triple (A, B, C) in the plane."""

    __slots__ = ("_v", "__dict__")

    def __init__(self, A, B=None, C=None):
        if B is None and C is None:
            v = np.array(A, dtype=float).reshape(3, 2)
        else:
            v = np.array([A, B, C], dtype=float)
        if v.shape != (3, 2):
            raise ValueError("a triangle needs three points in the plane")
        v.setflags(write=False)
        self._v = v
        if not self.area > 0:
            raise ValueError(f"degenerate triangle {v.tolist()}")

    @classmethod
    def parse(cls, text: str) -> Triangle:
        """Read 'Ax,Ay,Bx,By,Cx,Cy'."""
        parts = [float(s) for s in text.replace(" ", "").split(",") if s]
        if len(parts) != 6:
            raise ValueError(f"expected six numbers for a triangle, got {text!r}")
        return cls(np.array(parts).reshape(3, 2))

    @property
    def vertices(self) -> np.ndarray:
        return self._v

    @property
    def A(self):
        return self._v[0]

    @property
    def B(self):
        return self._v[1]

    @property
    def C(self):
        return self._v[2]

    @cached_property
    def centroid(self) -> np.ndarray:
        return self._v.mean(axis=0)

    @cached_property
    def area(self) -> float:
        (ax, ay), (bx, by), (cx, cy) = self._v
        return 0.5 * abs((bx - ax) * (cy - ay) - (cx - ax) * (by - ay))

    @cached_property
    def diameter(self) -> float:
        v = self._v
        return max(np.linalg.norm(v[0] - v[1]), np.linalg.norm(v[1] - v[2]), np.linalg.norm(v[2] - v[0]))

    @cached_property
    def frame(self) -> CenteredFrame:
        return CenteredFrame(self)

    def barycentric(self, points) -> np.ndarray:
        """Barycentric coordinates of ``points`` (shape (..., 2)) -> (..., 3)."""
        p = np.asarray(points, dtype=float)
        a, b, c = self._v
        M = np.column_stack([b - a, c - a])
        lam = np.linalg.solve(M, (p - a).reshape(-1, 2).T).T.reshape(p.shape)
        l0 = 1.0 - lam[..., 0] - lam[..., 1]
        return np.stack([l0, lam[..., 0], lam[..., 1]], axis=-1)

    def contains(self, points, tol: float = INSIDE_TOL):
        """Elementwise membership with barycentric slack ``tol``."""
        return np.all(self.barycentric(points) >= -tol, axis=-1)

    def map(self, affine) -> Triangle:
        return Triangle(affine(self._v))

    def same_vertices(self, other: Triangle, tol: float = 1e-12, ordered: bool = True) -> bool:
        if ordered:
            return bool(np.max(np.abs(self._v - other._v)) <= tol)
        return vertex_set_distance(self._v, other._v) <= tol

    def __add__(self, shift):
        return Triangle(self._v + np.asarray(shift, dtype=float))

    def __eq__(self, other):
        if not isinstance(other, Triangle):
            return NotImplemented
        return np.array_equal(self._v, other._v)

    def __hash__(self):
        return hash(self._v.tobytes())

    def __repr__(self):
        return "Triangle(" + ", ".join(f"({x:g}, {y:g})" for x, y in self._v) + ")"


UNIT_TRIANGLE = Triangle((0.0, 0.0), (1.0, 0.0), (0.0, 1.0))


def vertex_set_distance(u, v) -> float:
    """Largest vertex mismatch between two vertex triples, ignoring order."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    d = np.linalg.norm(u[:, None, :] - v[None, :, :], axis=-1)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


class CenteredFrame:
    """Vertex vectors e(sigma) of a triangle translated so its centroid is 0.

    ``E`` is a (4, 2) array indexed by pair code (a + 2b); ``E[0]`` is zero.
    """

    def __init__(self, T: Triangle):
        G = T.centroid
        E = np.zeros((4, 2))
        E[1] = T.A - G
        E[2] = T.B - G
        E[3] = T.C - G
        # e(0,0) is the centre itself; kept exactly zero
        self.E = E
        self.origin_shift = G
        self.triangle = T

    def e(self, pair) -> np.ndarray:
        return self.E[pair_code(pair)]

    @property
    def e00(self):
        return self.E[0]

    @property
    def e10(self):
        return self.E[1]

    @property
    def e01(self):
        return self.E[2]

    @property
    def e11(self):
        return self.E[3]


def subtriangle(T: Triangle, xi) -> Triangle:
    """Child of ``T`` addressed by the pair ``xi``, vertex order preserved."""
    A, B, C = T.vertices
    c = pair_code(xi)
    if c == 0:
        return Triangle((B + C) / 2, (C + A) / 2, (A + B) / 2)
    if c == 1:
        return Triangle(A, (A + B) / 2, (A + C) / 2)
    if c == 2:
        return Triangle((B + A) / 2, B, (B + C) / 2)
    return Triangle((C + A) / 2, (C + B) / 2, C)


def eta(X: IndexMatrix, i: int) -> int:
    """Orientation sign: -1 to the number of (0,0) rows above row ``i``."""
    if not 1 <= i <= X.n + 1:
        raise ValueError(f"eta index {i} out of range 1..{X.n + 1}")
    zeros = sum(1 for r in X.rows[: i - 1] if r == (0, 0))
    return -1 if zeros % 2 else 1


def phi(X: IndexMatrix, i: int, frame: CenteredFrame) -> np.ndarray:
    """Centre of the level-``i`` cell of ``X``, in centred coordinates."""
    if not 0 <= i <= X.n:
        raise ValueError(f"level {i} out of range 0..{X.n}")
    p = np.zeros(2)
    sign = 1
    for j, r in enumerate(X.rows[:i], start=1):
        p = p + sign / 2.0**j * frame.e(r)
        if r == (0, 0):
            sign = -sign
    return p


def phi_point(X: IndexMatrix, i: int, T: Triangle) -> np.ndarray:
    """Centre of the level-``i`` cell of ``X`` in the coordinates of ``T``."""
    return phi(X, i, T.frame) + T.centroid


def _subregion_recursive(X: IndexMatrix, i: int, T: Triangle) -> Triangle:
    for r in X.rows[:i]:
        T = subtriangle(T, r)
    return T


def _subregion_closed(X: IndexMatrix, i: int, T: Triangle) -> Triangle:
    f = T.frame
    centre = phi(X, i, f)
    scale = eta(X, i + 1) / 2.0**i
    verts = centre + scale * f.E[1:] + f.origin_shift
    return Triangle(verts)


def subregion(X: IndexMatrix, i: int, T: Triangle, method: str = "recursive") -> Triangle:
    """Level-``i`` cell addressed by the first ``i`` rows of ``X``.

    ``method="recursive"`` composes :func:`subtriangle`; ``"closed"`` uses the
    homothety centre + eta/2^i * T.  Both return the vertices in the order
    (centre + s e(1,0), centre + s e(0,1), centre + s e(1,1)).
    """
    if not 0 <= i <= X.n:
        raise ValueError(f"level {i} out of range 0..{X.n}")
    if method == "recursive":
        return _subregion_recursive(X, i, T)
    if method == "closed":
        return _subregion_closed(X, i, T)
    raise ValueError(f"unknown method {method!r}")


def tau(kappa, kappa_p, frame: CenteredFrame) -> np.ndarray:
    k = pair_code(kappa)
    kp = pair_code(kappa_p)
    if kp not in (0, k):
        return frame.E[k ^ kp] - frame.E[kp]
    return frame.E[k ^ kp] + frame.E[kp]


_SIGMA_TABLE = {
    (0, 0): ((1, 1), (0, 0), (1, 1)),
    (0, 1): ((0, 1), (1, 1), (1, 0)),
    (1, 0): ((1, 0), (1, 1), (0, 1)),
    (1, 1): ((0, 1), (1, 0), (1, 1)),
}


def sigma_p1_p2(kappa) -> tuple[tuple[int, int], tuple[int, int], tuple[int, int]]:
    """The shift sigma(kappa) and the two members p1, p2 of P(kappa)."""
    return _SIGMA_TABLE[tuple(int(k) for k in kappa)]


# pair-code lookups used by the vectorised Walsh code
SIGMA_CODE = np.array([pair_code(_SIGMA_TABLE[p][0]) for p in PAIRS])
P_MASK = np.zeros((4, 4), dtype=bool)  # P_MASK[kappa, xi] <=> xi in P(kappa)
for _p in PAIRS:
    _, _p1, _p2 = _SIGMA_TABLE[_p]
    P_MASK[pair_code(_p), pair_code(_p1)] = True
    P_MASK[pair_code(_p), pair_code(_p2)] = True


def point_xor_row(y, X: IndexMatrix, i: int, kappa, T: Triangle, check: bool = True) -> np.ndarray:
    """Isometry carrying the cell of ``X`` onto the cell of ``X`` with row ``i`` XOR ``kappa``.

    For ``kappa = (0, 0)`` the formula is applied as written; it is the
    identity when row ``i`` is nonzero and the point reflection
    ``y -> 2 phi^(i-1)(X) - y`` when row ``i`` is (0, 0).  The image lands in
    the shifted cell only for nonzero ``kappa``.
    """
    if not 1 <= i <= X.n:
        raise ValueError(f"row index {i} out of range 1..{X.n}")
    y = np.asarray(y, dtype=float)
    if check and not subregion(X, X.n, T, method="closed").contains(y):
        raise DomainError(f"point {y.tolist()} is outside the cell of {X!r}")
    f = T.frame
    xi = X.row(i)
    shift = eta(X, i) / 2.0**i * tau(kappa, xi, f)
    yc = y - f.origin_shift
    if pair_code(xi) not in (0, pair_code(kappa)):
        out = yc + shift
    else:
        out = 2.0 * phi(X, i - 1, f) - yc + shift
    return out + f.origin_shift


# -- vectorised forms over arrays of address codes ---------------------------


def eta_codes(codes, i: int) -> np.ndarray:
    """eta_i for every code in ``codes`` (array of +-1)."""
    codes = np.asarray(codes, dtype=np.int64)
    zeros = np.zeros(codes.shape, dtype=np.int64)
    for j in range(1, i):
        zeros += code_rows(codes, j) == 0
    return np.where(zeros % 2 == 1, -1, 1)


def phi_codes(codes, n: int, frame: CenteredFrame, return_eta: bool = False):
    """Centred phi^(n) for an array of codes; optionally also eta_(n+1)."""
    codes = np.asarray(codes, dtype=np.int64)
    p = np.zeros(codes.shape + (2,))
    sign = np.ones(codes.shape)
    for j in range(1, n + 1):
        r = code_rows(codes, j)
        p += (sign / 2.0**j)[..., None] * frame.E[r]
        sign = np.where(r == 0, -sign, sign)
    if return_eta:
        return p, sign
    return p


def subregion_vertices_codes(codes, n: int, T: Triangle) -> np.ndarray:
    """Vertices of every level-``n`` cell, shape (len(codes), 3, 2), original coordinates."""
    f = T.frame
    centre, sign = phi_codes(codes, n, f, return_eta=True)
    scale = sign / 2.0**n
    return centre[..., None, :] + scale[..., None, None] * f.E[1:] + f.origin_shift


def cell_centres(codes, n: int, T: Triangle) -> np.ndarray:
    return phi_codes(codes, n, T.frame) + T.centroid
