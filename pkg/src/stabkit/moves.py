"""Gaussian-move generators, transitive pair-sets, and group membership.

Classical moves g(n, i, j) = I + E_ij act on the left as "add row j to
row i" and on the right as "add column i to column j".  Symplectic moves
are their Sp(2n) analogues; whole-column moves bundle all moves sharing
a column together with the correction factor forced by the symplectic
form.  Pair-sets T below the diagonal define the groups L(n, T) of unit
lower-triangular matrices supported on T, and B(2n, T) = L(2n, T) cap
Sp(2n).  All indices 0-based; the mirror of index i in [0, 2n) is
2n-1-i, and qubit(i) = min(i, 2n-1-i).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .gf2 import Gf2Error, Gf2Matrix, Gf2Vector, identity, revdiag


def qubit_of(i: int, n2: int) -> int:
    """Qubit on which position i of a 2n-vector acts: min(i, 2n-1-i)."""
    return min(i, n2 - 1 - i)


def gaussian_move(n: int, i: int, j: int) -> Gf2Matrix:
    """The elementary matrix I + e_i e_j^T for i != j in [0, n)."""
    if i == j:
        raise Gf2Error("gaussian move requires i != j")
    if not (0 <= i < n and 0 <= j < n):
        raise Gf2Error(f"move indices ({i}, {j}) out of range [0, {n})")
    words = identity(n).words.copy()
    words[i, j >> 6] |= np.uint64(1) << np.uint64(j & 63)
    return Gf2Matrix(n, n, words)


def symplectic_move(n: int, i: int, j: int) -> Gf2Matrix:
    """The symplectic image of a Clifford Gaussian move on n qubits.

    Equals I + E_ij when j is the mirror of i, and
    I + E_ij + E_{mir(j), mir(i)} otherwise; always preserves the
    symplectic form.
    """
    n2 = 2 * n
    if i == j:
        raise Gf2Error("symplectic move requires i != j")
    if not (0 <= i < n2 and 0 <= j < n2):
        raise Gf2Error(f"move indices ({i}, {j}) out of range [0, {n2})")
    words = identity(n2).words.copy()
    words[i, j >> 6] |= np.uint64(1) << np.uint64(j & 63)
    if i + j != n2 - 1:
        mi, mj = n2 - 1 - i, n2 - 1 - j
        words[mj, mi >> 6] |= np.uint64(1) << np.uint64(mi & 63)
    return Gf2Matrix(n2, n2, words)


def symplectic_column_move(n: int, v: Gf2Vector, i: int) -> Gf2Matrix:
    """Whole-column move s(2n, v, i) = I + v e_i^T + Lam e_i v^T Lam + v_mir(i) E_{mir(i), i}.

    Clears an entire column in one involution; equals the product of the
    single moves s(2n, j, i) over supp(v) times the correction move
    s(2n, mir(i), i) raised to sum_q v_q v_{mir(q)}.
    """
    n2 = 2 * n
    if v.len != n2:
        raise Gf2Error(f"column move vector must have length {n2}")
    if not 0 <= i < n2:
        raise Gf2Error(f"column move index {i} out of range")
    if v[i]:
        raise Gf2Error("column move requires v[i] == 0")
    mi = n2 - 1 - i
    dense = identity(n2).to_dense()
    for j in v.support():
        dense[j, i] ^= 1          # v e_i^T
        dense[mi, n2 - 1 - j] ^= 1  # Lam e_i v^T Lam
    if v[mi]:
        dense[mi, i] ^= 1
    return Gf2Matrix.from_dense(dense)


def is_symplectic(a: Gf2Matrix) -> bool:
    """True iff A^T Lambda A == Lambda."""
    if a.rows != a.cols:
        raise Gf2Error("symplectic test requires a square matrix")
    if a.rows % 2:
        raise Gf2Error("symplectic test requires even side")
    if a.rows == 0:
        return True
    rev = np.zeros_like(a.words)
    return bool(_kernels.is_symplectic_packed(a.words, a.rows, rev))


def is_stabilizer_pcm(a: Gf2Matrix) -> bool:
    """True iff A Lambda A^T == 0 (rows pairwise symplectic-orthogonal)."""
    if a.cols % 2:
        raise Gf2Error("stabilizer test requires an even number of columns")
    if a.rows == 0 or a.cols == 0:
        return True
    rev = np.zeros_like(a.words)
    return bool(_kernels.is_stabilizer_pcm_packed(a.words, a.rows, a.cols, rev))


@dataclass(frozen=True)
class TransitiveSet:
    """A set of ordered pairs (i, j) with i > j, stored as a boolean mask.

    ``mask[i, j]`` is True iff (i, j) is in the set.  Membership is O(1);
    the closure checks are O(n^3) and used only in validation and tests.
    """

    n: int
    mask: np.ndarray = field(compare=False)

    def __post_init__(self):
        if self.mask.shape != (self.n, self.n):
            raise Gf2Error("pair-set mask shape mismatch")
        if np.triu(self.mask).any():
            raise Gf2Error("pair-set contains a pair (i, j) without i > j")
        self.mask.flags.writeable = False

    @classmethod
    def from_pairs(cls, n: int, pairs) -> "TransitiveSet":
        mask = np.zeros((n, n), dtype=bool)
        for i, j in pairs:
            if not (0 <= j < i < n):
                raise Gf2Error(f"invalid pair ({i}, {j}) for size {n}")
            mask[i, j] = True
        return cls(n, mask)

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(self.mask))]

    def __contains__(self, pair) -> bool:
        i, j = pair
        return bool(0 <= j < i < self.n and self.mask[i, j])

    def __len__(self) -> int:
        return int(self.mask.sum())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TransitiveSet)
            and self.n == other.n
            and np.array_equal(self.mask, other.mask)
        )

    def is_transitive(self) -> bool:
        """(i, j), (j, k) in T implies (i, k) in T."""
        reach = (self.mask.astype(np.uint8) @ self.mask.astype(np.uint8)) > 0
        return not (reach & ~self.mask).any()

    def is_reversal_closed(self) -> bool:
        """(i, j) in T iff (n-1-j, n-1-i) in T; requires even n."""
        if self.n % 2:
            return False
        return bool(np.array_equal(self.mask, self.mask[::-1, ::-1].T))

    def issubset(self, other: "TransitiveSet") -> bool:
        return self.n == other.n and not (self.mask & ~other.mask).any()

    def union(self, other: "TransitiveSet") -> "TransitiveSet":
        if self.n != other.n:
            raise Gf2Error("pair-set size mismatch")
        return TransitiveSet(self.n, self.mask | other.mask)


def orderedpairs(n: int) -> TransitiveSet:
    """The full set of pairs {(i, j) : i > j} (the lower-triangular group)."""
    mask = np.tril(np.ones((n, n), dtype=bool), k=-1)
    return TransitiveSet(n, mask)


def inversions(perm) -> TransitiveSet:
    """Pairs (i, j) with i > j and perm[i] < perm[j]."""
    n = len(perm)
    mask = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i):
            if perm[i] < perm[j]:
                mask[i, j] = True
    return TransitiveSet(n, mask)


def non_inversions(perm) -> TransitiveSet:
    """Pairs (i, j) with i > j and perm[i] > perm[j]."""
    n = len(perm)
    mask = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i):
            if perm[i] > perm[j]:
                mask[i, j] = True
    return TransitiveSet(n, mask)


def _check_alpha(alpha, m: int):
    prev = -1
    for a in alpha:
        if not (prev < a < m):
            raise Gf2Error(f"row-index function {tuple(alpha)} is not increasing into [0, {m})")
        prev = a


def tset_tl(alpha, m: int) -> TransitiveSet:
    """Pairs usable by left row moves: {(i, j) : j in Im(alpha), i > j}."""
    _check_alpha(alpha, m)
    mask = np.zeros((m, m), dtype=bool)
    for j in alpha:
        mask[j + 1 :, j] = True
    return TransitiveSet(m, mask)


def tset_tr(beta, n: int) -> TransitiveSet:
    """Pairs usable by right column moves in the unrestricted case.

    For each pivot column i = beta[k], all (i, j) with j < i except the
    columns beta[0..k-1] already cleared.
    """
    if len(set(beta)) != len(beta):
        raise Gf2Error("column-index function must be injective")
    mask = np.zeros((n, n), dtype=bool)
    for k, i in enumerate(beta):
        if not 0 <= i < n:
            raise Gf2Error(f"column index {i} out of range [0, {n})")
        earlier = set(beta[:k])
        for j in range(i):
            if j not in earlier:
                mask[i, j] = True
    return TransitiveSet(n, mask)


def tset_ttcr(beta, n2: int) -> TransitiveSet:
    """The transitive, reversal-closed pair-set attached to qubit-injective beta.

    Union of the move set (pivot columns, excluding already-used qubits)
    with its elementwise reversal.
    """
    if n2 % 2:
        raise Gf2Error("symplectic pair-set requires even size")
    qubits = [qubit_of(b, n2) for b in beta]
    if len(set(qubits)) != len(beta):
        raise Gf2Error(f"column-index function {tuple(beta)} is not qubit-injective")
    mask = np.zeros((n2, n2), dtype=bool)
    for k, i in enumerate(beta):
        if not 0 <= i < n2:
            raise Gf2Error(f"column index {i} out of range [0, {n2})")
        used = set(qubits[:k])
        for j in range(i):
            if qubit_of(j, n2) not in used:
                mask[i, j] = True
    # close under reversal: (i, j) -> (n2-1-j, n2-1-i)
    mask |= mask[::-1, ::-1].T
    return TransitiveSet(n2, mask)


def in_lower(a: Gf2Matrix, t: TransitiveSet) -> bool:
    """Membership in L(n, T): unit diagonal, off-diagonal support inside T."""
    if a.rows != a.cols or a.rows != t.n:
        raise Gf2Error(f"matrix side {a.rows}x{a.cols} does not match pair-set size {t.n}")
    dense = a.to_dense().astype(bool)
    if not np.diag(dense).all():
        return False
    off = dense.copy()
    np.fill_diagonal(off, False)
    return not (off & ~t.mask).any()


def in_borel(a: Gf2Matrix, t: TransitiveSet) -> bool:
    """Membership in B(2n, T) = L(2n, T) cap Sp(2n)."""
    return in_lower(a, t) and is_symplectic(a)
