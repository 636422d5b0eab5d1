"""Exact counting and uniform sampling via the canonical parameterization.

A symplectic matrix is L * Pi_sym(beta) * R with independent uniform
choices of the free bits of L and R once beta is fixed, so exact-uniform
sampling reduces to drawing beta with probability proportional to
2**borel_dim(T_tcr(beta)) and filling free bits.  The pivot columns are
drawn coordinate-by-coordinate: with s unused qubits the 2s candidate
positions, sorted ascending, carry weights 1, 2, 4, ..., 2**(2s-1)
(the weight counts the free right-factor bits the choice unlocks), and
the total 4**s - 1 telescopes into the classical group order
|Sp(2n)| = 2**(n*n) * prod_i (4**i - 1).

All randomness comes from a seedable counter-based PRNG (numpy Philox);
the (seed, stream) pair fully determines every output.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import _kernels
from .canon import MODE_STABILIZER, MODE_SYMPLECTIC, PivotProfile, Quintuple, pivot_matrix
from .gf2 import Gf2Error, Gf2Matrix, identity, mul, zeros
from .moves import TransitiveSet


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Philox generator keyed by (seed, stream); streams are independent."""
    key = np.array([seed % 2**64, stream % 2**64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _rand_below(rng: np.random.Generator, bound: int) -> int:
    """Exact uniform integer in [0, bound) for arbitrary-precision bound."""
    if bound <= 0:
        raise Gf2Error("bound must be positive")
    if bound == 1:
        return 0
    if bound <= 2**63:
        return int(rng.integers(0, bound))
    k = (bound - 1).bit_length()
    nwords = (k + 63) // 64
    excess = nwords * 64 - k
    while True:
        x = 0
        for w in rng.integers(0, 2**64, size=nwords, dtype=np.uint64):
            x = (x << 64) | int(w)
        x >>= excess
        if x < bound:
            return x


def borel_dim(t: TransitiveSet) -> int:
    """log2 of |B(2n, T)|: free positions of the canonical expression.

    Counts pairs (i, j) in T with j < n and j+1 <= i <= 2n-1-j; the
    remaining entries of a group element are forced by the symplectic
    form.  T must be transitive and closed under reversal.
    """
    if t.n % 2:
        raise Gf2Error("borel dimension requires even size")
    if not t.is_transitive():
        raise Gf2Error("pair-set is not transitive")
    if not t.is_reversal_closed():
        raise Gf2Error("pair-set is not closed under reversal")
    n = t.n // 2
    dim = 0
    for j in range(n):
        for i in range(j + 1, t.n - j):
            if t.mask[i, j]:
                dim += 1
    return dim


def count_symplectic(n: int) -> int:
    """|Sp(2n)| as an exact integer: 2**(n*n) * prod_{i=1}^{n} (4**i - 1)."""
    if n < 0:
        raise Gf2Error("qubit count must be nonnegative")
    total = 1 << (n * n)
    for i in range(1, n + 1):
        total *= (1 << (2 * i)) - 1
    return total


@lru_cache(maxsize=None)
def _alpha_weight_table(m: int, r: int) -> tuple[tuple[int, ...], ...]:
    """G[s][j] = sum over increasing length-s sequences in {j..m-1} of
    prod_k 2**(m-1-a_k); the left factor contributes 2**(m-1-a) free bits
    per pivot row a."""
    G = [[0] * (m + 2) for _ in range(r + 1)]
    for j in range(m + 1):
        G[0][j] = 1
    for s in range(1, r + 1):
        for j in range(m - 1, -1, -1):
            G[s][j] = G[s][j + 1] + (1 << (m - 1 - j)) * G[s - 1][j + 1]
    return tuple(tuple(row) for row in G)


def count_stabilizer_pcm(m: int, n: int, r: int) -> int:
    """Number of m x 2n stabilizer parity check matrices of rank exactly r."""
    if r < 0 or r > min(m, n):
        raise Gf2Error(f"rank {r} out of range for {m} rows, {n} qubits")
    total = _alpha_weight_table(m, r)[r][0]
    for i in range(r):
        total *= (1 << (2 * (n - i))) - 1
    return total


def _sample_alpha(m: int, r: int, rng) -> tuple[int, ...]:
    """alpha with probability proportional to 2**(number of free L bits)."""
    G = _alpha_weight_table(m, r)
    alpha = []
    j = 0
    for s in range(r, 0, -1):
        x = _rand_below(rng, G[s][j])
        a = j
        while True:
            w = (1 << (m - 1 - a)) * G[s - 1][a + 1]
            if x < w:
                break
            x -= w
            a += 1
        alpha.append(a)
        j = a + 1
    return tuple(alpha)


def _scatter_bits(bits: int, positions: np.ndarray, nwords: int) -> np.ndarray:
    """Packed vector with bit d of ``bits`` placed at positions[d]."""
    out = np.zeros(nwords, dtype=np.uint64)
    count = positions.shape[0]
    if count == 0 or bits == 0:
        return out
    raw = np.frombuffer(bits.to_bytes((count + 7) // 8, "little"), dtype=np.uint8)
    flags = np.unpackbits(raw, bitorder="little")[:count].astype(bool)
    hit = positions[flags]
    np.bitwise_or.at(out, hit >> 6, np.uint64(1) << (hit & np.uint64(63)).astype(np.uint64))
    return out


def _sample_beta_and_right(n: int, r: int, rng, n2: int):
    """Draw beta and the right factor R = H_{r-1} ... H_0.

    At each step the pivot is the t-th smallest position on an unused
    qubit with probability 2**(t-1) / (4**s - 1); the step's column
    vector gets t-1 free bits on the unused positions below the pivot.
    """
    nw = max(1, (n2 + 63) >> 6)
    unused = np.arange(n2, dtype=np.uint64)
    beta = []
    rbits = identity(n2).words.copy()
    for _ in range(r):
        s = unused.shape[0] // 2
        x = _rand_below(rng, (1 << (2 * s)) - 1)
        t = (x + 1).bit_length()
        b = int(unused[t - 1])
        bits = _rand_below(rng, 1 << (t - 1)) if t > 1 else 0
        vbuf = _scatter_bits(bits, unused[: t - 1], nw)
        _kernels._acc_move_t(rbits, n2, b, vbuf)
        beta.append(b)
        unused = unused[(unused != b) & (unused != n2 - 1 - b)]
    return tuple(beta), Gf2Matrix(n2, n2, rbits)


def _sample_borel_full(n: int, rng) -> Gf2Matrix:
    """Uniform element of B(2n, P(2n)): n*n free bits in the canonical
    column coordinates."""
    n2 = 2 * n
    nw = (n2 + 63) >> 6
    ws = np.zeros((n, nw), dtype=np.uint64)
    for k in range(n):
        count = n2 - 1 - 2 * k
        bits = _rand_below(rng, 1 << count)
        ws[k] = _scatter_bits(bits, np.arange(k + 1, n2 - k, dtype=np.uint64), nw)
    out = identity(n2).words.copy()
    _kernels.borel_product_t(ws, n2, out)
    return Gf2Matrix(n2, n2, out).transpose()


def _gather_pivot_rows(profile: PivotProfile, right: Gf2Matrix) -> Gf2Matrix:
    """pivot_matrix(profile) @ right, computed as a row gather."""
    out = np.zeros((profile.m, right.words.shape[1]), dtype=np.uint64)
    for k in range(profile.r):
        out[profile.alpha[k]] = right.words[profile.beta[k]]
    if profile.mode == MODE_SYMPLECTIC:
        n2 = profile.cols
        for k in range(profile.r):
            out[n2 - 1 - k] = right.words[n2 - 1 - profile.beta[k]]
    return Gf2Matrix(profile.m, right.cols, out)


def sample_symplectic_quintuple(n: int, rng: np.random.Generator) -> Quintuple:
    """Uniform canonical quintuple of a symplectic matrix on n qubits."""
    if n < 1:
        raise Gf2Error("qubit count must be at least 1")
    n2 = 2 * n
    L = _sample_borel_full(n, rng)
    beta, R = _sample_beta_and_right(n, n, rng, n2)
    profile = PivotProfile(MODE_SYMPLECTIC, n2, n2, tuple(range(n)), beta)
    return Quintuple(profile, L, R)


def sample_symplectic(n: int, rng: np.random.Generator) -> Gf2Matrix:
    """Exactly uniform element of Sp(2n)."""
    q = sample_symplectic_quintuple(n, rng)
    return mul(q.L, _gather_pivot_rows(q.profile, q.R))


def sample_stabilizer_pcm_quintuple(m: int, n: int, r: int, rng) -> Quintuple:
    """Uniform canonical quintuple of an m x 2n stabilizer PCM of rank r."""
    if r < 0 or r > min(m, n):
        raise Gf2Error(f"rank {r} out of range for {m} rows, {n} qubits")
    n2 = 2 * n
    alpha = _sample_alpha(m, r, rng)
    # left factor: uniform bits below the diagonal in the pivot columns
    ldense = np.eye(m, dtype=np.uint8)
    for a in alpha:
        if a + 1 < m:
            ldense[a + 1 :, a] = rng.integers(0, 2, size=m - a - 1, dtype=np.uint8)
    beta, R = _sample_beta_and_right(n, r, rng, n2)
    profile = PivotProfile(MODE_STABILIZER, m, n2, alpha, beta)
    return Quintuple(profile, Gf2Matrix.from_dense(ldense) if m else zeros(0, 0), R)


def sample_stabilizer_pcm(m: int, n: int, r: int, rng) -> Gf2Matrix:
    """Exactly uniform m x 2n stabilizer parity check matrix of rank r."""
    q = sample_stabilizer_pcm_quintuple(m, n, r, rng)
    return mul(q.L, _gather_pivot_rows(q.profile, q.R))


def beta_log_weight(beta, n2: int) -> int:
    """Number of free right-factor bits a pivot-column choice unlocks;
    equals borel_dim(tset_ttcr(beta, n2)) (exercised by tests)."""
    unused = list(range(n2))
    total = 0
    for b in beta:
        t = unused.index(b)
        total += t
        unused.remove(b)
        unused.remove(n2 - 1 - b)
    return total
