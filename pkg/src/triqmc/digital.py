"""Digital nets and sequences over F2 and the point sequence they induce on a triangle.

A sequence element ``X(h)`` is the two-column matrix whose columns are
``C1 @ digits(h)`` and ``C2 @ digits(h)``.  The triangle point for ``h`` is the
centre of the cell addressed by the nonzero rows of ``X(h)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .bitcore import BitMatrix, IndexMatrix, code_rows, dyadic_expansion, matvec
from .errors import PrecisionError
from .partition import Triangle, phi_codes

__all__ = [
    "GeneratorPair",
    "NetSpec",
    "basu_owen_pair",
    "pascal_pair",
    "user_pair",
    "load_generator",
    "generator_from_option",
    "sequence_element",
    "net_addresses",
    "net_codes",
    "address_codes",
    "nu_codes",
    "precision_for",
    "triangle_points",
]

MAX_ROWS = 31  # codes are int64


def _basu_owen_block(rows, cols):
    C1 = np.zeros((rows, cols), dtype=np.uint8)
    C2 = np.zeros((rows, cols), dtype=np.uint8)
    for i in range(rows):
        if 2 * i < cols:
            C1[i, 2 * i] = 1
        if 2 * i + 1 < cols:
            C2[i, 2 * i + 1] = 1
    return C1, C2


def _pascal_block(rows, cols):
    k = np.arange(rows)[:, None]
    j = np.arange(cols)[None, :]
    C1 = (k == j).astype(np.uint8)
    # binomial(j, k) is odd iff the bits of k are a subset of those of j
    C2 = ((j & k) == k).astype(np.uint8) * (k <= j)
    return C1, C2.astype(np.uint8)


@dataclass(frozen=True)
class GeneratorPair:
    """Generating matrices (C1, C2), realised lazily as finite blocks.

    ``kind`` is one of ``"basu-owen"``, ``"pascal"`` or ``"user"``.  For user
    pairs the stored matrices fix how many digits (columns) are available.
    """

    kind: str
    C1: BitMatrix | None = field(default=None, repr=False, compare=True)
    C2: BitMatrix | None = field(default=None, repr=False, compare=True)

    def __post_init__(self):
        if self.kind not in ("basu-owen", "pascal", "user"):
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.kind == "user":
            if self.C1 is None or self.C2 is None:
                raise ValueError("user generators need both matrices")
            if self.C1.cols != self.C2.cols:
                raise ValueError("C1 and C2 must have the same number of columns")
            for C in (self.C1, self.C2):
                if not C.is_upper_triangular():
                    raise ValueError("user generating matrices must be upper triangular")

    @property
    def max_digits(self) -> int | None:
        return self.C1.cols if self.kind == "user" else None

    def block(self, rows: int, cols: int) -> tuple[BitMatrix, BitMatrix]:
        """Upper-left ``rows x cols`` blocks of C1 and C2."""
        if self.kind == "basu-owen":
            C1, C2 = _basu_owen_block(rows, cols)
            return BitMatrix(C1), BitMatrix(C2)
        if self.kind == "pascal":
            C1, C2 = _pascal_block(rows, cols)
            return BitMatrix(C1, upper_triangular=True), BitMatrix(C2, upper_triangular=True)
        if cols > self.C1.cols:
            raise PrecisionError(f"user generator defines only {self.C1.cols} columns, {cols} requested")
        return self.C1.block(rows, cols), self.C2.block(rows, cols)

    def row_support(self, h: int) -> int:
        """Number of rows that can be nonzero in X(h)."""
        a = int(h).bit_length()
        if self.kind == "basu-owen":
            return (a + 1) // 2
        if self.kind == "pascal":
            return a
        if a > self.C1.cols:
            raise PrecisionError(f"user generator defines only {self.C1.cols} columns; h={h} needs {a}")
        used = np.vstack([self.C1.entries[:, :a], self.C2.entries[:, :a]]).reshape(2, -1, a)
        nz = np.nonzero(used.any(axis=(0, 2)))[0]
        return int(nz[-1]) + 1 if nz.size else 0

    def column_codes(self, rows: int, cols: int) -> np.ndarray:
        """Code of the ``rows``-row address produced by each single digit."""
        if rows > MAX_ROWS:
            raise PrecisionError(f"at most {MAX_ROWS} rows are supported, got {rows}")
        C1, C2 = self.block(rows, cols)
        w1 = np.left_shift(np.int64(1), 2 * np.arange(rows, dtype=np.int64))
        w2 = w1 << 1
        return (C1.entries.T.astype(np.int64) @ w1) + (C2.entries.T.astype(np.int64) @ w2)


def basu_owen_pair() -> GeneratorPair:
    """C1 picks the even-position digits of h, C2 the odd ones."""
    return GeneratorPair("basu-owen")


def pascal_pair() -> GeneratorPair:
    """Identity and the Pascal matrix mod 2: the classical two-dimensional t = 0 pair."""
    return GeneratorPair("pascal")


def user_pair(C1, C2) -> GeneratorPair:
    C1 = C1 if isinstance(C1, BitMatrix) else BitMatrix(C1)
    C2 = C2 if isinstance(C2, BitMatrix) else BitMatrix(C2)
    return GeneratorPair("user", C1, C2)


def load_generator(path) -> GeneratorPair:
    """Read two bit matrices separated by a blank line."""
    text = Path(path).read_text()
    blocks = [b for b in text.strip().split("\n\n") if b.strip()]
    if len(blocks) != 2:
        raise ValueError(f"{path}: expected two matrices separated by a blank line, found {len(blocks)}")
    return user_pair(BitMatrix.parse(blocks[0]), BitMatrix.parse(blocks[1]))


def generator_from_option(text: str) -> GeneratorPair:
    if text == "basu-owen":
        return basu_owen_pair()
    if text == "pascal":
        return pascal_pair()
    if text.startswith("file:"):
        return load_generator(text[5:])
    raise ValueError(f"unknown generator {text!r}; use basu-owen, pascal or file:PATH")


@dataclass(frozen=True)
class NetSpec:
    gen: GeneratorPair
    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < self.m:
            raise ValueError(f"need 0 <= m <= n, got m={self.m}, n={self.n}")


def _rows_in_use(codes, rows: int) -> np.ndarray:
    nu = np.zeros(np.shape(codes), dtype=np.int64)
    for i in range(1, rows + 1):
        nu = np.where(code_rows(codes, i) != 0, i, nu)
    return nu


def sequence_element(gen: GeneratorPair, h: int, n: int) -> tuple[IndexMatrix, int]:
    """``X(h)`` truncated to ``n`` rows, and the index of its last nonzero row."""
    if h < 0:
        raise ValueError("h must be nonnegative")
    digits = dyadic_expansion(h)
    rows = max(n, gen.row_support(h))
    C1, C2 = gen.block(rows, digits.size)
    full = IndexMatrix.from_columns(matvec(C1, digits), matvec(C2, digits))
    nonzero = [i for i, r in enumerate(full.rows, start=1) if r != (0, 0)]
    nu = nonzero[-1] if nonzero else 0
    if nu > n:
        raise PrecisionError(f"X({h}) has nonzero row {nu} beyond precision n={n}")
    return full.truncated(n), nu


def precision_for(gen: GeneratorPair, N: int) -> int:
    """Smallest row count holding every X(h), h < N."""
    return gen.row_support(N - 1) if N > 1 else 0


def address_codes(gen: GeneratorPair, N: int, n: int | None = None) -> np.ndarray:
    """Codes of X(0), ..., X(N-1) with ``n`` rows (default: the tight precision)."""
    need = precision_for(gen, N)
    if n is None:
        n = need
    elif n < need:
        raise PrecisionError(f"{N} points need {need} rows, got n={n}")
    a = int(N - 1).bit_length() if N > 1 else 0
    return _xor_combine(gen.column_codes(n, a), N)


def nu_codes(codes, n: int) -> np.ndarray:
    return _rows_in_use(codes, n)


def _xor_combine(cols, N):
    h = np.arange(N, dtype=np.int64)
    codes = np.zeros(N, dtype=np.int64)
    for j, c in enumerate(cols):
        codes ^= np.where((h >> j) & 1 == 1, c, 0)
    return codes


def net_codes(spec: NetSpec) -> np.ndarray:
    """Codes of the 2^m addresses of the net with blocks C_j^(n x m), in h order."""
    return _xor_combine(spec.gen.column_codes(spec.n, spec.m), 2**spec.m)


def net_addresses(spec: NetSpec) -> list[IndexMatrix]:
    return [IndexMatrix.from_code(c, spec.n) for c in net_codes(spec)]


def triangle_points(gen: GeneratorPair, T: Triangle, N: int) -> np.ndarray:
    """First ``N`` points of the sequence mapped into ``T``, shape (N, 2)."""
    if N < 1:
        raise ValueError("N must be at least 1")
    n = precision_for(gen, N)
    codes = address_codes(gen, N, n)
    # zero rows past nu(h) add e(0,0) = 0, so phi^(n) equals phi^(nu(h))
    return phi_codes(codes, n, T.frame) + T.centroid
