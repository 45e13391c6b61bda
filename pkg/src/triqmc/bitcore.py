"""Exact linear algebra over the two-element field.

Bit vectors are 1-D ``uint8`` arrays holding 0/1, least significant digit
first.  Matrices over F2 with two columns (``IndexMatrix``) double as
subtriangle addresses and Walsh frequency indices; they also have an integer
encoding used by the vectorised code paths::

    code = sum_i  xi[i, 0] << 2*i  |  xi[i, 1] << (2*i + 1)      (i from 0)

so row 1 occupies the two lowest bits and XOR of matrices is XOR of codes.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "all_codes",
    "iter_index_matrices",
    "BitMatrix",
    "IndexMatrix",
    "dyadic_expansion",
    "matvec",
    "xor_row",
    "pair_code",
    "code_rows",
    "parity",
    "parse_bit_rows",
]


def _frozen_bits(a, ndim):
    arr = np.array(a, dtype=np.int64)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d array of bits, got shape {arr.shape}")
    if np.any((arr != 0) & (arr != 1)):
        raise ValueError("entries must be 0 or 1")
    out = arr.astype(np.uint8)
    out.setflags(write=False)
    return out


def dyadic_expansion(h: int, min_len: int = 0) -> np.ndarray:
    """Binary digits of ``h``, least significant first, zero padded to ``min_len``."""
    h = int(h)
    if h < 0:
        raise ValueError("h must be nonnegative")
    length = max(h.bit_length(), int(min_len))
    digits = np.array([(h >> a) & 1 for a in range(length)], dtype=np.uint8)
    digits.setflags(write=False)
    return digits


class BitMatrix:
    """Rectangular matrix over F2.

    Parameters
    ----------
    entries : array_like
        rows x cols array of 0/1 values.
    upper_triangular : bool
        When set, entry(k, l) must vanish for k > l; checked here.
    """

    __slots__ = ("_a", "upper_triangular")

    def __init__(self, entries, upper_triangular: bool = False):
        a = np.array(entries, dtype=np.int64)
        if a.ndim == 1 and a.size == 0:
            a = a.reshape(0, 0)
        self._a = _frozen_bits(a, 2)
        self.upper_triangular = bool(upper_triangular)
        if self.upper_triangular and np.any(np.tril(self._a, -1)):
            raise ValueError("matrix flagged upper triangular has entries below the diagonal")

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(np.eye(n, dtype=np.uint8), upper_triangular=True)

    @classmethod
    def parse(cls, text: str, upper_triangular: bool = False) -> BitMatrix:
        """Read rows written as '0'/'1' strings, one per line."""
        return cls(parse_bit_rows(text), upper_triangular=upper_triangular)

    @property
    def entries(self) -> np.ndarray:
        return self._a

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self):
        return self._a.shape

    def is_upper_triangular(self) -> bool:
        return not np.any(np.tril(self._a, -1))

    def block(self, rows: int, cols: int) -> BitMatrix:
        """Upper-left ``rows x cols`` block, zero padded where it overhangs."""
        out = np.zeros((rows, cols), dtype=np.uint8)
        r, c = min(rows, self.rows), min(cols, self.cols)
        out[:r, :c] = self._a[:r, :c]
        return BitMatrix(out)

    def T(self) -> BitMatrix:
        return BitMatrix(self._a.T)

    def to_text(self) -> str:
        return "\n".join("".join(str(int(b)) for b in row) for row in self._a)

    def __eq__(self, other):
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self._a, other._a)

    def __hash__(self):
        return hash((self.shape, self._a.tobytes()))

    def __repr__(self):
        return f"BitMatrix({self.rows}x{self.cols})"


def matvec(C: BitMatrix, v) -> np.ndarray:
    """Product ``C v`` over F2."""
    v = np.asarray(v, dtype=np.uint8)
    if v.ndim != 1 or v.shape[0] != C.cols:
        raise ValueError(f"dimension mismatch: matrix has {C.cols} columns, vector has length {v.shape}")
    out = (C.entries.astype(np.int64) @ v.astype(np.int64)) & 1
    out = out.astype(np.uint8)
    out.setflags(write=False)
    return out


def parse_bit_rows(text: str) -> list[list[int]]:
    rows = []
    for line in text.strip().splitlines():
        line = line.strip()
        if not line:
            continue
        if set(line) - {"0", "1"}:
            raise ValueError(f"bad bit row {line!r}")
        rows.append([int(ch) for ch in line])
    if rows and len({len(r) for r in rows}) != 1:
        raise ValueError("rows have different lengths")
    return rows


def pair_code(pair) -> int:
    """Encode (a, b) in F2^2 as a + 2b."""
    a, b = pair
    if a not in (0, 1) or b not in (0, 1):
        raise ValueError(f"not an element of F2^2: {pair!r}")
    return int(a) | (int(b) << 1)


def code_rows(codes, i: int) -> np.ndarray:
    """Pair codes of row ``i`` (1-based) for an array of matrix codes."""
    return (np.asarray(codes) >> (2 * (i - 1))) & 3


def parity(x) -> np.ndarray:
    """Parity of the number of set bits, elementwise."""
    return np.bitwise_count(np.asarray(x, dtype=np.uint64)) & 1


class IndexMatrix:
    """Element of F2^(n x 2), stored as an immutable (n, 2) uint8 array."""

    __slots__ = ("_a",)

    def __init__(self, rows):
        a = np.array(rows, dtype=np.int64)
        if a.size == 0:
            a = a.reshape(0, 2)
        if a.ndim != 2 or a.shape[1] != 2:
            raise ValueError(f"an IndexMatrix needs shape (n, 2), got {a.shape}")
        self._a = _frozen_bits(a, 2)

    @classmethod
    def zeros(cls, n: int) -> IndexMatrix:
        return cls(np.zeros((n, 2), dtype=np.uint8))

    @classmethod
    def from_code(cls, code: int, n: int) -> IndexMatrix:
        code = int(code)
        if code < 0 or code >> (2 * n):
            raise ValueError(f"code {code} does not fit in {n} rows")
        return cls([((code >> (2 * i)) & 1, (code >> (2 * i + 1)) & 1) for i in range(n)])

    @classmethod
    def from_columns(cls, k1, k2) -> IndexMatrix:
        return cls(np.stack([np.asarray(k1), np.asarray(k2)], axis=1))

    @classmethod
    def parse(cls, text: str) -> IndexMatrix:
        """Rows as two-character '0'/'1' strings; newlines or '/' separate rows."""
        text = text.replace("/", "\n")
        rows = parse_bit_rows(text)
        return cls(rows) if rows else cls.zeros(0)

    @property
    def n(self) -> int:
        return self._a.shape[0]

    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def rows(self) -> tuple[tuple[int, int], ...]:
        return tuple((int(a), int(b)) for a, b in self._a)

    def row(self, i: int) -> tuple[int, int]:
        if not 1 <= i <= self.n:
            raise ValueError(f"row index {i} out of range 1..{self.n}")
        a, b = self._a[i - 1]
        return int(a), int(b)

    def column(self, j: int) -> np.ndarray:
        return self._a[:, j - 1]

    @property
    def code(self) -> int:
        c = 0
        for i, (a, b) in enumerate(self._a):
            c |= int(a) << (2 * i) | int(b) << (2 * i + 1)
        return c

    def padded(self, n: int) -> IndexMatrix:
        """Append zero rows up to ``n`` rows (truncation is not allowed)."""
        if n < self.n:
            raise ValueError("padding cannot shorten a matrix")
        return IndexMatrix(np.vstack([self._a, np.zeros((n - self.n, 2), dtype=np.uint8)]))

    def truncated(self, n: int) -> IndexMatrix:
        return IndexMatrix(self._a[:n])

    def to_text(self, sep: str = "\n") -> str:
        return sep.join(f"{a}{b}" for a, b in self._a)

    def __xor__(self, other: IndexMatrix) -> IndexMatrix:
        if self.n != other.n:
            raise ValueError("row counts differ")
        return IndexMatrix(self._a ^ other._a)

    def __eq__(self, other):
        if not isinstance(other, IndexMatrix):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._a, other._a)

    def __hash__(self):
        return hash((self.n, self._a.tobytes()))

    def __repr__(self):
        return f"IndexMatrix({self.to_text('/') or '-'})"


def xor_row(X: IndexMatrix, i: int, kappa: Sequence[int]) -> IndexMatrix:
    """Return ``X`` with row ``i`` (1-based) XORed by the pair ``kappa``."""
    if not 1 <= i <= X.n:
        raise ValueError(f"row index {i} out of range 1..{X.n}")
    pair_code(kappa)
    a = X.array.copy()
    a[i - 1, 0] ^= kappa[0]
    a[i - 1, 1] ^= kappa[1]
    return IndexMatrix(a)


def all_codes(n: int) -> np.ndarray:
    """Every code of F2^(n x 2), in increasing order."""
    return np.arange(4**n, dtype=np.int64)


def iter_index_matrices(n: int) -> Iterable[IndexMatrix]:
    for c in range(4**n):
        yield IndexMatrix.from_code(c, n)
