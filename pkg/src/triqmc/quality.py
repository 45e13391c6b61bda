"""Dual nets and their minimum weights.

The dual of the net with blocks C1, C2 (n x m) is the kernel of
K -> C1^T k1 + C2^T k2.  In code form the r-th constraint reads
``parity(code(K) & column_code[r]) == 0`` where ``column_code[r]`` is the
address produced by the single digit r, so the kernel is found by bitmask
Gaussian elimination and then enumerated.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .bitcore import IndexMatrix, code_rows, matvec
from .digital import GeneratorPair
from .errors import CapacityError

__all__ = [
    "DualNet",
    "WeightReport",
    "mu1",
    "mu1_matrix",
    "v_weight",
    "in_dual",
    "dual_net",
    "span_codes",
    "min_weights",
    "check_tvalue_bound",
    "level_dimensions",
    "quality_table",
    "MAX_ENUM_DIM",
]

MAX_ENUM_DIM = 24


def mu1(k) -> int:
    """Position (1-based) of the last nonzero entry; 0 for the zero vector."""
    nz = np.flatnonzero(np.asarray(k))
    return int(nz[-1]) + 1 if nz.size else 0


def mu1_matrix(K: IndexMatrix) -> int:
    return mu1(K.column(1)) + mu1(K.column(2))


def v_weight(K: IndexMatrix) -> int:
    """Deepest nonzero row of ``K`` (equivalently the larger column weight)."""
    by_rows = max((i for i, r in enumerate(K.rows, start=1) if r != (0, 0)), default=0)
    assert by_rows == max(mu1(K.column(1)), mu1(K.column(2)))
    return by_rows


def in_dual(K: IndexMatrix, gen: GeneratorPair, m: int) -> bool:
    """Membership straight from the definition, via explicit transposed products."""
    C1, C2 = gen.block(K.n, m)
    lhs = matvec(C1.T(), K.column(1)) ^ matvec(C2.T(), K.column(2))
    return not lhs.any()


def _kernel_basis(constraints: list[int], nbits: int) -> tuple[list[int], int]:
    """Basis of {x : parity(x & c) = 0 for all c} and the rank of the constraints."""
    pivots: dict[int, int] = {}
    rows = [c for c in constraints if c]
    for bit in range(nbits):
        mask = 1 << bit
        pick = next((r for r in rows if r & mask), None)
        if pick is None:
            continue
        rows.remove(pick)
        rows = [r ^ pick if r & mask else r for r in rows]
        pivots = {b: (p ^ pick if p & mask else p) for b, p in pivots.items()}
        pivots[bit] = pick
    basis = []
    for free in range(nbits):
        if free in pivots:
            continue
        vec = 1 << free
        for b, p in pivots.items():
            if p >> free & 1:
                vec |= 1 << b
        basis.append(vec)
    return basis, len(pivots)


@dataclass(frozen=True)
class DualNet:
    """Basis of the dual net as F2-linear space."""

    n: int
    m: int
    basis_codes: tuple[int, ...]
    rank: int
    constraint_codes: tuple[int, ...] = field(repr=False)

    @property
    def basis(self) -> list[IndexMatrix]:
        return [IndexMatrix.from_code(c, self.n) for c in self.basis_codes]

    @property
    def dim(self) -> int:
        return len(self.basis_codes)

    @property
    def size(self) -> int:
        return 2**self.dim

    def contains_code(self, code: int) -> bool:
        return all(bin(code & c).count("1") % 2 == 0 for c in self.constraint_codes)

    def __contains__(self, K: IndexMatrix) -> bool:
        return K.n == self.n and self.contains_code(K.code)


def dual_net(gen: GeneratorPair, n: int, m: int) -> DualNet:
    if n < m:
        raise ValueError(f"need n >= m, got n={n}, m={m}")
    cols = [int(c) for c in gen.column_codes(n, m)]
    basis, rank = _kernel_basis(cols, 2 * n)
    return DualNet(n=n, m=m, basis_codes=tuple(basis), rank=rank, constraint_codes=tuple(cols))


def span_codes(dual: DualNet, max_dim: int = MAX_ENUM_DIM) -> np.ndarray:
    """Every element of the dual as a code, zero first."""
    if dual.dim > max_dim:
        raise CapacityError(f"dual has dimension {dual.dim}; enumeration capped at {max_dim}", dual.dim)
    span = np.zeros(1, dtype=np.int64)
    for b in dual.basis_codes:
        span = np.concatenate([span, span ^ np.int64(b)])
    return span


def _weights(codes, n):
    v = np.zeros(codes.shape, dtype=np.int64)
    m1 = np.zeros(codes.shape, dtype=np.int64)
    m2 = np.zeros(codes.shape, dtype=np.int64)
    for i in range(1, n + 1):
        r = code_rows(codes, i)
        v = np.where(r != 0, i, v)
        m1 = np.where(r & 1, i, m1)
        m2 = np.where(r & 2, i, m2)
    return v, m1 + m2


@dataclass(frozen=True)
class WeightReport:
    """Minimum weights of a dual net.

    ``mu1_min`` and ``v_min`` are ``math.inf`` when the dual is {0}.  ``t`` is
    the smallest t with mu1_min >= m - t + 1, clamped to [0, m].
    """

    m: int
    n: int
    mu1_min: float
    v_min: float
    t: int
    spectrum: dict = field(default_factory=dict)


def min_weights(dual: DualNet, max_dim: int = MAX_ENUM_DIM) -> WeightReport:
    span = span_codes(dual, max_dim)[1:]
    if span.size == 0:
        return WeightReport(dual.m, dual.n, math.inf, math.inf, 0, {})
    v, mu = _weights(span, dual.n)
    mu1_min = int(mu.min())
    t = min(max(dual.m + 1 - mu1_min, 0), dual.m)
    spectrum = dict(sorted(Counter(v.tolist()).items()))
    return WeightReport(dual.m, dual.n, mu1_min, int(v.min()), t, spectrum)


def check_tvalue_bound(report: WeightReport, m: int) -> bool:
    """v_min >= (m - t + 1) / 2, compared in integers."""
    if m == 0:
        return True
    return 2 * report.v_min >= m - report.t + 1


def level_dimensions(dual: DualNet) -> list[int]:
    """dim(dual intersected with {K : v(K) <= w}) for w = 0..n."""
    span = span_codes(dual)
    v, _ = _weights(span, dual.n)
    counts = [int(np.count_nonzero(v <= w)) for w in range(dual.n + 1)]
    return [c.bit_length() - 1 for c in counts]


def quality_table(gen: GeneratorPair, m_values, n=None) -> list[dict]:
    """One row per m: weights of the first 2^m points with n rows (default n = m)."""
    out = []
    for m in m_values:
        rows = m if n is None else max(n, m)
        rep = min_weights(dual_net(gen, rows, m))
        out.append(
            dict(m=m, n=rows, mu1_min=rep.mu1_min, v_min=rep.v_min, t=rep.t, bound_holds=check_tvalue_bound(rep, m))
        )
    return out
