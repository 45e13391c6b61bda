"""Walsh analysis of functions on F2^(n x 2).

Tables are dense arrays indexed by address code (see :mod:`triqmc.bitcore`),
so ``wal_K(X) = (-1)^popcount(code(K) & code(X))`` and the full set of Walsh
coefficients is one fast Walsh-Hadamard transform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bitcore import IndexMatrix, code_rows, pair_code, parity
from .partition import P_MASK, SIGMA_CODE, Triangle, sigma_p1_p2, subregion_vertices_codes
from .quadrature import romberg_cell_means

__all__ = [
    "DiscretizedTable",
    "RwIndex",
    "DecayRow",
    "DecayReport",
    "walsh_eval",
    "walsh_signs",
    "fwht",
    "walsh_transform",
    "walsh_synthesis",
    "discretize",
    "walsh_coefficient",
    "rw_membership",
    "rw_mask",
    "rw_coefficient",
    "dyadic_difference",
    "dyadic_hat_residuals",
    "decay_constant",
    "verify_decay_bound",
    "v_of_code",
    "MAX_LEVEL",
]

MAX_LEVEL = 13


@dataclass(frozen=True)
class DiscretizedTable:
    """Values F(X) for every X in F2^(n x 2), indexed by code."""

    n: int
    values: np.ndarray = field(repr=False)
    triangle: Triangle | None = None
    f_norm: float | None = None

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (4**self.n,):
            raise ValueError(f"a level-{self.n} table needs {4**self.n} values, got shape {vals.shape}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __getitem__(self, X: IndexMatrix) -> float:
        if X.n != self.n:
            raise ValueError(f"address has {X.n} rows, table is level {self.n}")
        return float(self.values[X.code])

    def mean(self) -> float:
        return float(self.values.mean())

    def with_values(self, values) -> DiscretizedTable:
        return DiscretizedTable(self.n, values, self.triangle, self.f_norm)


@dataclass(frozen=True)
class RwIndex:
    K: IndexMatrix
    w: int

    def __post_init__(self):
        v = v_of_code(self.K.code)
        if v < 1 or not 0 <= self.w <= v - 1:
            raise ValueError(f"w={self.w} outside 0..v(K)-1 with v(K)={v}")


def v_of_code(code: int) -> int:
    return (int(code).bit_length() + 1) // 2


def walsh_eval(K: IndexMatrix, X: IndexMatrix) -> int:
    if K.n != X.n:
        raise ValueError(f"row counts differ: {K.n} vs {X.n}")
    return -1 if int(np.sum(K.array & X.array)) % 2 else 1


def walsh_signs(kcode: int, codes) -> np.ndarray:
    """wal_K over an array of address codes, as +-1 floats."""
    return 1.0 - 2.0 * parity(np.asarray(codes, dtype=np.int64) & np.int64(kcode))


def fwht(values) -> np.ndarray:
    """Unnormalised Walsh-Hadamard transform in natural (code) order."""
    a = np.array(values, dtype=float)
    size = a.size
    if size & (size - 1):
        raise ValueError("length must be a power of two")
    h = 1
    while h < size:
        a = a.reshape(-1, 2, h)
        a = np.stack([a[:, 0] + a[:, 1], a[:, 0] - a[:, 1]], axis=1)
        h *= 2
    return a.reshape(size)


def walsh_transform(F: DiscretizedTable) -> np.ndarray:
    """All coefficients F^(K), indexed by code(K)."""
    return fwht(F.values) / 4**F.n


def walsh_synthesis(coeffs) -> np.ndarray:
    """Inverse of :func:`walsh_transform`: F(X) = sum_K F^(K) wal_K(X)."""
    return fwht(coeffs)


def walsh_coefficient(F: DiscretizedTable, K: IndexMatrix) -> float:
    """Direct sum (1/4^n) sum_X F(X) wal_K(X)."""
    if K.n != F.n:
        raise ValueError(f"K has {K.n} rows, table is level {F.n}")
    codes = np.arange(4**F.n, dtype=np.int64)
    return float(np.sum(F.values * walsh_signs(K.code, codes)) / 4**F.n)


def discretize(f, T: Triangle, n: int, quad=None, f_norm=None, tol: float = 1e-12) -> DiscretizedTable:
    """Cell means F_n(X) of ``f`` over every level-``n`` cell of ``T``.

    ``quad`` may be a callable ``(f, T, n) -> values``.  By default objects
    offering ``cell_means(vertices)`` (exact polynomial means) use it and
    anything else goes through extrapolated centroid subdivision.
    ``f_norm`` defaults to ``f.c2_norm_bound`` when present.
    """
    if n < 0 or n > MAX_LEVEL:
        raise ValueError(f"level must be in 0..{MAX_LEVEL}, got {n}")
    if quad is not None:
        values = quad(f, T, n)
    elif hasattr(f, "cell_means") and getattr(f, "poly", None) is not None:
        verts = subregion_vertices_codes(np.arange(4**n, dtype=np.int64), n, T)
        values = f.cell_means(verts)
    else:
        values, _ = romberg_cell_means(f, T, n, tol=tol)
    if f_norm is None:
        f_norm = getattr(f, "c2_norm_bound", None)
    return DiscretizedTable(n, np.broadcast_to(values, (4**n,)).copy(), T, f_norm)


# -- R_w decomposition -------------------------------------------------------


def _row_arrays(n):
    codes = np.arange(4**n, dtype=np.int64)
    return [code_rows(codes, i) for i in range(1, n + 1)]


def _rw_masks(kcode: int, rows) -> list[np.ndarray]:
    """Membership masks of R_0(K), ..., R_{v-1}(K) over all codes."""
    v = v_of_code(kcode)
    if v < 1:
        raise ValueError("R_w sets need K != 0")
    kap = [(kcode >> (2 * (i - 1))) & 3 for i in range(1, v + 1)]
    # suffix[i] = rows i+1 .. v-1 all lie in N(kappa)
    size = rows[0].shape[0] if rows else 1
    suffix = [None] * (v + 1)
    suffix[v - 1] = np.ones(size, dtype=bool)
    for i in range(v - 1, 0, -1):
        suffix[i - 1] = suffix[i] & ~P_MASK[kap[i - 1]][rows[i - 1]]
    masks = [suffix[0]]
    for w in range(1, v):
        masks.append(P_MASK[kap[w - 1]][rows[w - 1]] & suffix[w])
    return masks


def rw_mask(K: IndexMatrix, w: int) -> np.ndarray:
    RwIndex(K, w)
    return _rw_masks(K.code, _row_arrays(K.n))[w]


def rw_membership(X: IndexMatrix, K: IndexMatrix, w: int) -> bool:
    """Whether ``X`` belongs to R_w(K)."""
    RwIndex(K, w)
    if X.n != K.n:
        raise ValueError("X and K must have the same row count")
    v = v_of_code(K.code)
    if w >= 1 and X.row(w) not in _p_set(K.row(w)):
        return False
    return all(X.row(i) not in _p_set(K.row(i)) for i in range(w + 1, v))


def _p_set(kappa):
    _, p1, p2 = sigma_p1_p2(kappa)
    return {p1, p2}


def rw_coefficient(F: DiscretizedTable, K: IndexMatrix, w: int) -> float:
    """(1/4^n) sum over X in R_w(K) of F(X) wal_K(X)."""
    mask = rw_mask(K, w)
    codes = np.arange(4**F.n, dtype=np.int64)
    return float(np.sum((F.values * walsh_signs(K.code, codes))[mask]) / 4**F.n)


def dyadic_difference(F: DiscretizedTable, K: IndexMatrix, i: int) -> DiscretizedTable:
    """X -> F(X xor_i sigma(kappa_i)) + wal_{kappa_i}(sigma(kappa_i)) F(X)."""
    if K.n != F.n:
        raise ValueError("K and the table must have the same row count")
    if not 1 <= i <= F.n:
        raise ValueError(f"row index {i} out of range 1..{F.n}")
    kap = pair_code(K.row(i))
    sig = int(SIGMA_CODE[kap])
    sign = -1.0 if bin(kap & sig).count("1") % 2 else 1.0
    codes = np.arange(4**F.n, dtype=np.int64)
    shifted = F.values[codes ^ (sig << (2 * (i - 1)))]
    return F.with_values(shifted + sign * F.values)


def dyadic_hat_residuals(F: DiscretizedTable, K: IndexMatrix) -> dict[str, float]:
    """Largest absolute residual of each of the three difference identities for R_w F^(K)."""
    v = v_of_code(K.code)
    dv = dyadic_difference(F, K, v)
    res = {"first": 0.0, "second": 0.0, "third": 0.0}
    for w in range(v):
        lhs = rw_coefficient(F, K, w)
        res["first"] = max(res["first"], abs(lhs + 0.5 * rw_coefficient(dv, K, w)))
        if w >= 1:
            kap = pair_code(K.row(w))
            s = -1.0 if bin(kap & int(SIGMA_CODE[kap])).count("1") % 2 else 1.0
            dw = dyadic_difference(F, K, w)
            dwdv = dyadic_difference(dv, K, w)
            res["second"] = max(res["second"], abs(lhs - 0.5 * s * rw_coefficient(dw, K, w)))
            res["third"] = max(res["third"], abs(lhs + 0.25 * s * rw_coefficient(dwdv, K, w)))
    return res


# -- coefficient decay -------------------------------------------------------


def decay_constant(T: Triangle) -> float:
    d = T.diameter
    return max(2 * math.sqrt(2) * d, 4 * d * d)


@dataclass(frozen=True)
class DecayRow:
    code: int
    v: int
    coeff: float
    bound: float
    r0: float
    r0_bound: float
    rw_max: float
    rw_bound: float

    @property
    def ratio(self) -> float:
        return abs(self.coeff) / self.bound

    @property
    def ok(self) -> bool:
        return abs(self.coeff) <= self.bound and abs(self.r0) <= self.r0_bound and self.rw_max <= self.rw_bound


@dataclass
class DecayReport:
    n: int
    f_norm: float
    D: float
    rows: list[DecayRow]

    @property
    def violations(self) -> int:
        return sum(not r.ok for r in self.rows)

    @property
    def max_ratio(self) -> float:
        return max((r.ratio for r in self.rows), default=0.0)


def verify_decay_bound(f, T: Triangle, n: int, ks=None, f_norm=None, table=None) -> DecayReport:
    """Check the coefficient decay bounds for every nonzero K in ``ks``.

    For each K with v = v(K) the checks are
    |R_0 F^(K)| <= 2 sqrt(2) d ||f|| / 4^v,
    |R_w F^(K)| <= 4 d^2 ||f|| / 4^v  (1 <= w < v),
    |F^(K)| <= D ||f|| v / 4^v  with D = max(2 sqrt(2) d, 4 d^2).
    ``ks`` is an iterable of codes or IndexMatrix (default: all K != 0).
    K = 0 is skipped.
    """
    F = table if table is not None else discretize(f, T, n, f_norm=f_norm)
    norm = f_norm if f_norm is not None else F.f_norm
    if norm is None:
        raise ValueError("a C^2 norm bound for f is required")
    d = T.diameter
    D = decay_constant(T)
    coeffs = walsh_transform(F)
    codes = np.arange(4**n, dtype=np.int64)
    rows = _row_arrays(n)
    if ks is None:
        ks = range(1, 4**n)
    out = []
    for k in ks:
        kcode = k.code if isinstance(k, IndexMatrix) else int(k)
        if kcode == 0:
            continue
        v = v_of_code(kcode)
        weighted = F.values * walsh_signs(kcode, codes)
        parts = [float(np.sum(weighted[m])) / 4**n for m in _rw_masks(kcode, rows)]
        scale = norm / 4.0**v
        out.append(
            DecayRow(
                code=kcode,
                v=v,
                coeff=float(coeffs[kcode]),
                bound=D * v * scale,
                r0=parts[0],
                r0_bound=2 * math.sqrt(2) * d * scale,
                rw_max=max((abs(p) for p in parts[1:]), default=0.0),
                rw_bound=4 * d * d * scale,
            )
        )
    return DecayReport(n=n, f_norm=norm, D=D, rows=out)
