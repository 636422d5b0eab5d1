"""Dense bit-packed linear algebra over GF(2).

Matrices are stored row-major, 64 columns per machine word, least
significant bit first.  All values are immutable after construction and
safe to share between threads; every operation returns a fresh value.
Row and column indices are 0-based.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from . import _kernels


def _nwords(cols: int) -> int:
    return (cols + 63) >> 6


def _pack_dense(dense: np.ndarray) -> np.ndarray:
    """Pack a 0/1 uint8 array into uint64 words, LSB-first."""
    m, n = dense.shape
    padded = np.zeros((m, _nwords(n) * 64), dtype=np.uint8)
    padded[:, :n] = dense
    packed8 = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed8).view(np.uint64).reshape(m, _nwords(n))


def _unpack_dense(words: np.ndarray, cols: int) -> np.ndarray:
    m = words.shape[0]
    if cols == 0 or m == 0:
        return np.zeros((m, cols), dtype=np.uint8)
    u8 = np.ascontiguousarray(words).view(np.uint8)
    bits = np.unpackbits(u8, axis=1, bitorder="little")
    return bits[:, :cols].copy()


class Gf2Error(ValueError):
    """Raised for dimension mismatches and invalid GF(2) inputs."""


class Gf2Vector:
    """Immutable packed column vector over GF(2)."""

    __slots__ = ("len", "words")

    def __init__(self, length: int, words: np.ndarray | None = None):
        if length < 0:
            raise Gf2Error("vector length must be nonnegative")
        self.len = length
        if words is None:
            words = np.zeros(_nwords(length), dtype=np.uint64)
        self.words = words
        self.words.flags.writeable = False

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "Gf2Vector":
        vals = [int(b) & 1 for b in bits]
        words = np.zeros(max(1, _nwords(len(vals))), dtype=np.uint64)[: _nwords(len(vals))]
        words = words.copy()
        for j, b in enumerate(vals):
            if b:
                words[j >> 6] |= np.uint64(1) << np.uint64(j & 63)
        return cls(len(vals), words)

    @classmethod
    def basis(cls, length: int, i: int) -> "Gf2Vector":
        if not 0 <= i < length:
            raise Gf2Error(f"basis index {i} out of range [0, {length})")
        words = np.zeros(_nwords(length), dtype=np.uint64)
        words[i >> 6] = np.uint64(1) << np.uint64(i & 63)
        return cls(length, words)

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < self.len:
            raise Gf2Error(f"index {j} out of range")
        return int((self.words[j >> 6] >> np.uint64(j & 63)) & np.uint64(1))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Gf2Vector)
            and self.len == other.len
            and np.array_equal(self.words, other.words)
        )

    def __hash__(self) -> int:
        return hash((self.len, self.words.tobytes()))

    def __xor__(self, other: "Gf2Vector") -> "Gf2Vector":
        if self.len != other.len:
            raise Gf2Error("vector length mismatch")
        return Gf2Vector(self.len, self.words ^ other.words)

    def support(self) -> list[int]:
        return [j for j in range(self.len) if self[j]]

    def weight(self) -> int:
        return int(np.bitwise_count(self.words).sum())

    def reversed(self) -> "Gf2Vector":
        out = np.zeros_like(self.words)
        for j in range(self.len):
            if self[j]:
                out[(self.len - 1 - j) >> 6] ^= np.uint64(1) << np.uint64((self.len - 1 - j) & 63)
        return Gf2Vector(self.len, out)

    def to_list(self) -> list[int]:
        return [self[j] for j in range(self.len)]

    def __repr__(self) -> str:
        return f"Gf2Vector({''.join(str(b) for b in self.to_list())})"


class Gf2Matrix:
    """Immutable bit-packed matrix over GF(2).

    The packed representation is internal; the external contract is
    entry-level and bit-exact.  Zero-dimension matrices are legal.
    """

    __slots__ = ("rows", "cols", "words")

    def __init__(self, rows: int, cols: int, words: np.ndarray | None = None):
        if rows < 0 or cols < 0:
            raise Gf2Error("matrix dimensions must be nonnegative")
        self.rows = rows
        self.cols = cols
        if words is None:
            words = np.zeros((rows, _nwords(cols)), dtype=np.uint64)
        if words.shape != (rows, _nwords(cols)):
            raise Gf2Error("packed shape mismatch")
        self.words = words
        self.words.flags.writeable = False

    # -- constructors ----------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Gf2Matrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Gf2Matrix":
        words = np.zeros((n, _nwords(n)), dtype=np.uint64)
        for i in range(n):
            words[i, i >> 6] = np.uint64(1) << np.uint64(i & 63)
        return cls(n, n, words)

    @classmethod
    def from_dense(cls, dense) -> "Gf2Matrix":
        arr = np.atleast_2d(np.asarray(dense, dtype=np.uint8) & 1)
        m, n = arr.shape
        return cls(m, n, _pack_dense(arr))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "Gf2Matrix":
        if len(rows) == 0:
            return cls(0, 0)
        return cls.from_dense(np.array([[int(b) & 1 for b in row] for row in rows], dtype=np.uint8))

    # -- accessors -------------------------------------------------------

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise Gf2Error(f"entry ({i}, {j}) out of range for {self.rows}x{self.cols}")
        return int((self.words[i, j >> 6] >> np.uint64(j & 63)) & np.uint64(1))

    def row(self, i: int) -> Gf2Vector:
        if not 0 <= i < self.rows:
            raise Gf2Error(f"row {i} out of range")
        return Gf2Vector(self.cols, self.words[i].copy())

    def column(self, j: int) -> Gf2Vector:
        if not 0 <= j < self.cols:
            raise Gf2Error(f"column {j} out of range")
        bits = (self.words[:, j >> 6] >> np.uint64(j & 63)) & np.uint64(1)
        out = np.zeros(_nwords(self.rows), dtype=np.uint64)
        idx = np.nonzero(bits)[0]
        for i in idx:
            out[i >> 6] |= np.uint64(1) << np.uint64(i & 63)
        return Gf2Vector(self.rows, out)

    def to_dense(self) -> np.ndarray:
        return _unpack_dense(self.words, self.cols)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Gf2Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and np.array_equal(self.words, other.words)
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.words.tobytes()))

    def __repr__(self) -> str:
        if self.rows * self.cols > 400:
            return f"Gf2Matrix({self.rows}x{self.cols})"
        return "Gf2Matrix([\n" + "\n".join("  " + r for r in format_matrix(self).splitlines()) + "\n])"

    def is_zero(self) -> bool:
        return not self.words.any()

    # -- algebra ---------------------------------------------------------

    def __matmul__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        return mul(self, other)

    def __xor__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise Gf2Error("dimension mismatch in matrix sum")
        return Gf2Matrix(self.rows, self.cols, self.words ^ other.words)

    def transpose(self) -> "Gf2Matrix":
        out = np.zeros((self.cols, _nwords(self.rows)), dtype=np.uint64)
        if self.rows and self.cols:
            _kernels.transpose_packed(self.words, self.rows, self.cols, out)
        return Gf2Matrix(self.cols, self.rows, out)

    def mul_vector(self, v: Gf2Vector) -> Gf2Vector:
        if self.cols != v.len:
            raise Gf2Error(f"cannot apply {self.rows}x{self.cols} to length-{v.len} vector")
        acc = self.words & v.words[np.newaxis, :]
        folded = np.bitwise_xor.reduce(acc, axis=1) if acc.shape[1] else np.zeros(self.rows, dtype=np.uint64)
        par = np.bitwise_count(folded) & np.uint64(1)
        out = np.zeros(_nwords(self.rows), dtype=np.uint64)
        for i in np.nonzero(par)[0]:
            out[i >> 6] |= np.uint64(1) << np.uint64(i & 63)
        return Gf2Vector(self.rows, out)


def identity(n: int) -> Gf2Matrix:
    """The n x n identity matrix."""
    return Gf2Matrix.identity(n)


def zeros(rows: int, cols: int) -> Gf2Matrix:
    """The all-zero matrix of the given shape."""
    return Gf2Matrix.zeros(rows, cols)


def revdiag(n: int) -> Gf2Matrix:
    """The reverse-diagonal matrix with ones at (i, n-1-i)."""
    if n < 0:
        raise Gf2Error("revdiag size must be nonnegative")
    words = np.zeros((n, _nwords(n)), dtype=np.uint64)
    for i in range(n):
        j = n - 1 - i
        words[i, j >> 6] = np.uint64(1) << np.uint64(j & 63)
    return Gf2Matrix(n, n, words)


def mul(a: Gf2Matrix, b: Gf2Matrix) -> Gf2Matrix:
    """Matrix product over GF(2) (XOR accumulation of b's rows)."""
    if a.cols != b.rows:
        raise Gf2Error(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    out = np.zeros((a.rows, _nwords(b.cols)), dtype=np.uint64)
    if a.rows and a.cols and b.cols:
        _kernels.mul_packed(a.words, a.rows, b.words, out)
    return Gf2Matrix(a.rows, b.cols, out)


def transpose(a: Gf2Matrix) -> Gf2Matrix:
    return a.transpose()


def rank(a: Gf2Matrix) -> int:
    """Rank over GF(2)."""
    if a.rows == 0 or a.cols == 0:
        return 0
    work = a.words.copy()
    return int(_kernels.rank_packed(work, a.rows, a.cols))


# -- text format ---------------------------------------------------------
#
# One row per line, characters '0'/'1', optional single spaces between
# entries; '#' starts a comment; blank lines are ignored.


def parse_matrix(text: str) -> Gf2Matrix:
    """Parse the shared text matrix format."""
    rows: list[list[int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        entries = line.replace(" ", "")
        row = []
        for ch in entries:
            if ch not in "01":
                raise Gf2Error(f"line {lineno}: invalid character {ch!r} in matrix text")
            row.append(int(ch))
        rows.append(row)
    if not rows:
        return Gf2Matrix(0, 0)
    width = len(rows[0])
    for lineno, row in enumerate(rows, start=1):
        if len(row) != width:
            raise Gf2Error(f"ragged matrix text: row {lineno} has {len(row)} entries, expected {width}")
    return Gf2Matrix.from_rows(rows)


def format_matrix(a: Gf2Matrix) -> str:
    """Render in the text matrix format (no spaces)."""
    dense = a.to_dense()
    return "\n".join("".join(str(int(b)) for b in dense[i]) for i in range(a.rows))
