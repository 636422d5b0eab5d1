"""Monte-Carlo simulation of the error-guessing decoder.

Each trial draws a Pauli error from the channel, hashes it through a
symplectic matrix (fresh per trial by default), and runs the decoder
that walks candidate errors in likelihood order until one matches the
m-bit syndrome.  The failure frequency is sandwiched between the
converse and achievability bounds of the bounds module.

For the erasure and depolarizing channels the likelihood order is
generated analytically instead of materializing the 4**n-entry sorted
table: erasure candidates are the vectors supported on the erased
qubits in ascending lexicographic order (all equally likely), and
depolarizing candidates ascend in qubit weight with lexicographic order
inside each weight class.  Both match the sorted-profile order used by
the bounds module with its fixed tie-break.

The candidate walk is capped at 2**m + 1 by default: past that point a
wrong guess is already certain unless no candidate matched at all, and
counting the no-match case as a failure keeps the estimate inside the
bound sandwich.  Blocklengths up to 32 qubits run in compiled
single-word kernels; larger blocklengths and table channels use the
plain Python path.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .bounds import DepolarizingChannel, ErasureChannel, TableChannel
from .gf2 import Gf2Error, Gf2Matrix, Gf2Vector
from .sample import make_rng, sample_symplectic

_CHUNK = 1 << 14  # trials per RNG stream; fixed so results don't depend on threading


@dataclass(frozen=True)
class TrialConfig:
    """One simulation request: channel + blocklength + syndrome budget."""

    channel: object
    n: int
    m: int
    trials: int
    seed: int
    fresh_matrix: bool = True
    full_search: bool = False

    def __post_init__(self):
        if not 0 <= self.m <= self.n:
            raise Gf2Error(f"syndrome bits m={self.m} outside [0, {self.n}]")
        if self.trials < 1:
            raise Gf2Error("at least one trial required")


@dataclass(frozen=True)
class EstimateResult:
    p_hat: float
    ci95: tuple[float, float]
    failures: int
    trials: int


def wilson_interval(failures: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """Wilson 95% score interval for a binomial proportion."""
    p = failures / trials
    denom = 1 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


# -- channel sampling (Python path) -----------------------------------------


def sample_pauli_error(channel, n: int, rng) -> tuple[Gf2Vector, object]:
    """One channel use: the error vector and the side information.

    Erasure side information is an n-bit mask of erased qubits (bit q set
    iff qubit q was erased); depolarizing has none.
    """
    n2 = 2 * n
    if isinstance(channel, ErasureChannel):
        d = float(channel.delta)
        vmask = 0
        bits = [0] * n2
        for q in range(n):
            if rng.random() < d:
                vmask |= 1 << q
                bits[q] = int(rng.integers(0, 2))
                bits[n2 - 1 - q] = int(rng.integers(0, 2))
        return Gf2Vector.from_bits(bits), vmask
    if isinstance(channel, DepolarizingChannel):
        d = float(channel.delta)
        bits = [0] * n2
        for q in range(n):
            if rng.random() < d:
                kind = int(rng.integers(0, 3))
                if kind != 1:
                    bits[q] = 1  # X component
                if kind != 0:
                    bits[n2 - 1 - q] = 1  # Z component
        return Gf2Vector.from_bits(bits), None
    if isinstance(channel, TableChannel):
        tbl = channel.table
        if tbl.n != n:
            raise Gf2Error("table size does not match the requested blocklength")
        x = rng.random()
        acc = 0.0
        for u, v, p in tbl.entries:
            acc += float(p)
            if x < acc:
                return Gf2Vector.from_bits(int(c) for c in u), v
        u, v, _ = tbl.entries[-1]
        return Gf2Vector.from_bits(int(c) for c in u), v
    raise Gf2Error(f"unknown channel {channel!r}")


# -- candidate orders ---------------------------------------------------------


def _erasure_candidates(n: int, vmask: int):
    """Vectors supported on the erased qubits, ascending lexicographic."""
    n2 = 2 * n
    fpos = [p for p in range(n2) if (vmask >> min(p, n2 - 1 - p)) & 1]
    e2 = len(fpos)
    for j in range(1 << e2):
        cand = 0
        for t in range(e2):
            if (j >> (e2 - 1 - t)) & 1:
                cand |= 1 << fpos[t]
        yield cand


def _lex_key(cand: int, n2: int) -> int:
    """Key whose numeric order is lexicographic order of the bitstring."""
    key = 0
    for i in range(n2):
        if (cand >> i) & 1:
            key |= 1 << (n2 - 1 - i)
    return key


def _depolarizing_candidates(n: int):
    """All error vectors by ascending qubit weight, lexicographic inside
    each weight class."""
    n2 = 2 * n
    for w in range(n + 1):
        block = []
        for qubits in itertools.combinations(range(n), w):
            for kinds in itertools.product((0, 1, 2), repeat=w):
                cand = 0
                for q, kind in zip(qubits, kinds):
                    if kind != 1:
                        cand |= 1 << q
                    if kind != 0:
                        cand |= 1 << (n2 - 1 - q)
                block.append(cand)
        block.sort(key=lambda c: _lex_key(c, n2))
        yield from block


def _table_candidates(table, v):
    ent = sorted(((u, p) for u, vv, p in table.entries if vv == v and p > 0),
                 key=lambda e: (-e[1], e[0]))
    for u, _ in ent:
        yield sum(int(c) << i for i, c in enumerate(u))


def candidate_order(channel, n: int, v):
    """Iterator over candidate errors (ints, bit i = position i) in the
    likelihood order the decoder uses."""
    if isinstance(channel, ErasureChannel):
        return _erasure_candidates(n, v)
    if isinstance(channel, DepolarizingChannel):
        return _depolarizing_candidates(n)
    if isinstance(channel, TableChannel):
        return _table_candidates(channel.table, v)
    raise Gf2Error(f"unknown channel {channel!r}")


def _vector_to_int(u: Gf2Vector) -> int:
    x = 0
    for w_idx in range(len(u.words) - 1, -1, -1):
        x = (x << 64) | int(u.words[w_idx])
    return x


def _int_to_vector(x: int, n2: int) -> Gf2Vector:
    return Gf2Vector.from_bits(((x >> i) & 1) for i in range(n2))


def syndrome_bits(c: Gf2Matrix, u: Gf2Vector, m: int) -> Gf2Vector:
    """First m rows of C @ u."""
    full = c.mul_vector(u)
    return Gf2Vector.from_bits(full[i] for i in range(m))


def decode_guess(channel, n: int, m: int, c: Gf2Matrix, syndrome: Gf2Vector, v,
                 cap: int | None = None) -> Gf2Vector | None:
    """First candidate in likelihood order whose syndrome matches.

    Always terminates on a full walk because the true error matches its
    own syndrome; with a candidate cap, ``None`` is returned when no
    candidate matched within the cap.
    """
    n2 = 2 * n
    uint = _vector_to_int
    target = uint(syndrome)
    rows = [uint(c.row(i)) for i in range(m)]
    for idx, cand in enumerate(candidate_order(channel, n, v)):
        if cap is not None and idx >= cap:
            return None
        s = 0
        for i in range(m):
            s |= (bin(rows[i] & cand).count("1") & 1) << i
        if s == target:
            return _int_to_vector(cand, n2)
    return None


# -- compiled single-word kernels (n <= 32) ----------------------------------


@njit(cache=True, inline="always")
def _parity_u64(x):
    x ^= x >> np.uint64(32)
    x ^= x >> np.uint64(16)
    x ^= x >> np.uint64(8)
    x ^= x >> np.uint64(4)
    x ^= x >> np.uint64(2)
    x ^= x >> np.uint64(1)
    return np.int64(x & np.uint64(1))


@njit(cache=True, inline="always")
def _rand_bits_u64(rng, count):
    if count <= 0:
        return np.uint64(0)
    if count <= 32:
        return np.uint64(rng.integers(0, np.int64(1) << count))
    hi = rng.integers(0, np.int64(1) << (count - 32))
    lo = rng.integers(0, np.int64(1) << 32)
    return (np.uint64(hi) << np.uint64(32)) | np.uint64(lo)


@njit(cache=True, inline="always")
def _bit_length_i64(x):
    r = 0
    while x > 0:
        x >>= 1
        r += 1
    return r


@njit(cache=True)
def _acc_move_t_words(x, n2, i, v):
    """x <- transpose(s[n2, v, i]) @ x on single-word rows."""
    mi = n2 - 1 - i
    acc = np.uint64(0)
    for j in range(n2):
        if (v >> np.uint64(j)) & np.uint64(1):
            acc ^= x[j]
    x[i] ^= acc
    rowmi = x[mi]
    for j in range(n2):
        if (v >> np.uint64(j)) & np.uint64(1):
            x[n2 - 1 - j] ^= rowmi
    if (v >> np.uint64(mi)) & np.uint64(1):
        x[i] ^= rowmi


@njit(cache=True)
def _sample_symplectic_words(n, rng, crows, lt, rrows, prows, unused):
    """Uniform Sp(2n) element into crows (row i = uint64 bitmask)."""
    n2 = 2 * n
    for i in range(n2):
        lt[i] = np.uint64(1) << np.uint64(i)
        rrows[i] = np.uint64(1) << np.uint64(i)
    for k in range(n):
        w = _rand_bits_u64(rng, n2 - 1 - 2 * k) << np.uint64(k + 1)
        _acc_move_t_words(lt, n2, k, w)
    for i in range(n2):
        unused[i] = i
    avail = n2
    for k in range(n):
        s = avail // 2
        x = rng.integers(0, (np.int64(1) << (2 * s)) - 1)
        t = _bit_length_i64(x + 1)
        b = unused[t - 1]
        vbits = _rand_bits_u64(rng, t - 1)
        v = np.uint64(0)
        for d in range(t - 1):
            if (vbits >> np.uint64(d)) & np.uint64(1):
                v |= np.uint64(1) << np.uint64(unused[d])
        _acc_move_t_words(rrows, n2, b, v)
        # pivot rows of Pi_sym(beta) @ R
        prows[k] = rrows[b]
        prows[n2 - 1 - k] = rrows[n2 - 1 - b]
        # drop b and its mirror from the unused list
        mb = n2 - 1 - b
        idx = 0
        for j in range(avail):
            p = unused[j]
            if p != b and p != mb:
                unused[idx] = p
                idx += 1
        avail = idx
    # C = L @ (Pi R); row i of L is column i of lt
    for i in range(n2):
        acc = np.uint64(0)
        for j in range(n2):
            if (lt[j] >> np.uint64(i)) & np.uint64(1):
                acc ^= prows[j]
        crows[i] = acc


@njit(cache=True, inline="always")
def _syndrome_words(crows, u, m):
    s = np.uint64(0)
    for i in range(m):
        if _parity_u64(crows[i] & u):
            s |= np.uint64(1) << np.uint64(i)
    return s


@njit(cache=True, nogil=True)
def _erasure_trials(n, m, delta, trials, rng, fresh, crows_init, cap, full_search):
    n2 = 2 * n
    crows = crows_init.copy()
    lt = np.empty(n2, dtype=np.uint64)
    rrows = np.empty(n2, dtype=np.uint64)
    prows = np.empty(n2, dtype=np.uint64)
    unused = np.empty(n2, dtype=np.int64)
    fpos = np.empty(n2, dtype=np.int64)
    failures = 0
    for _ in range(trials):
        if fresh:
            _sample_symplectic_words(n, rng, crows, lt, rrows, prows, unused)
        u = np.uint64(0)
        e2 = 0
        for q in range(n):
            if rng.random() < delta:
                fpos[e2] = q
                e2 += 1
                bits = rng.integers(0, 4)
                if bits & 1:
                    u |= np.uint64(1) << np.uint64(q)
                if bits & 2:
                    u |= np.uint64(1) << np.uint64(n2 - 1 - q)
        # append mirror positions (ascending overall: q's then mirrors)
        ne = e2
        for t in range(ne):
            fpos[ne + t] = n2 - 1 - fpos[ne - 1 - t]
        e2 = 2 * ne
        target = _syndrome_words(crows, u, m)
        limit = np.int64(1) << e2
        if not full_search and cap < limit:
            limit = cap
        fail = True
        for j in range(limit):
            cand = np.uint64(0)
            for t in range(e2):
                if (j >> (e2 - 1 - t)) & 1:
                    cand |= np.uint64(1) << np.uint64(fpos[t])
            if _syndrome_words(crows, cand, m) == target:
                fail = cand != u
                break
        if fail:
            failures += 1
    return failures


@njit(cache=True, nogil=True)
def _depolarizing_trials(n, m, delta, trials, rng, fresh, crows_init, cands, cap):
    n2 = 2 * n
    crows = crows_init.copy()
    lt = np.empty(n2, dtype=np.uint64)
    rrows = np.empty(n2, dtype=np.uint64)
    prows = np.empty(n2, dtype=np.uint64)
    unused = np.empty(n2, dtype=np.int64)
    failures = 0
    for _ in range(trials):
        if fresh:
            _sample_symplectic_words(n, rng, crows, lt, rrows, prows, unused)
        u = np.uint64(0)
        for q in range(n):
            if rng.random() < delta:
                kind = rng.integers(0, 3)
                if kind != 1:
                    u |= np.uint64(1) << np.uint64(q)
                if kind != 0:
                    u |= np.uint64(1) << np.uint64(n2 - 1 - q)
        target = _syndrome_words(crows, u, m)
        limit = cands.shape[0]
        if cap < limit:
            limit = cap
        fail = True
        for j in range(limit):
            cand = cands[j]
            if _syndrome_words(crows, cand, m) == target:
                fail = cand != u
                break
        if fail:
            failures += 1
    return failures


_CAND_LIMIT = 1 << 20


def _depolarizing_cand_array(n: int, count: int) -> np.ndarray:
    if count > _CAND_LIMIT:
        raise Gf2Error(
            f"candidate walk of {count} exceeds the supported limit {_CAND_LIMIT}; "
            "reduce m or use full_search=False"
        )
    out = np.fromiter(itertools.islice(_depolarizing_candidates(n), count),
                      dtype=np.uint64, count=-1)
    return out


# -- the estimator -------------------------------------------------------------


def _python_trials(channel, n, m, trials, rng, fresh, c_fixed, cap) -> int:
    failures = 0
    c = c_fixed
    for _ in range(trials):
        if fresh:
            c = sample_symplectic(n, rng)
        u, v = sample_pauli_error(channel, n, rng)
        syn = syndrome_bits(c, u, m)
        guess = decode_guess(channel, n, m, c, syn, v, cap=cap)
        if guess != u:
            failures += 1
    return failures


def estimate_error(cfg: TrialConfig, threads: int = 1) -> EstimateResult:
    """Monte-Carlo failure estimate with a Wilson 95% interval.

    Trials are split into fixed-size chunks, one Philox stream per chunk,
    so the estimate is reproducible and independent of the thread count.
    """
    n, m = cfg.n, cfg.m
    cap = None if cfg.full_search else (1 << m) + 1
    fixed_c = None
    if not cfg.fresh_matrix:
        fixed_c = sample_symplectic(n, make_rng(cfg.seed, 0))

    chunks = []
    remaining = cfg.trials
    stream = 1
    while remaining > 0:
        chunk = min(remaining, _CHUNK)
        chunks.append((stream, chunk))
        remaining -= chunk
        stream += 1

    use_kernel = n <= 32 and isinstance(channel := cfg.channel, (ErasureChannel, DepolarizingChannel))
    if use_kernel:
        crows_init = np.zeros(2 * n, dtype=np.uint64)
        if fixed_c is not None:
            crows_init = fixed_c.words[:, 0].copy()
        cands = None
        if isinstance(channel, DepolarizingChannel):
            want = min(4**n, cap if cap is not None else 4**n)
            cands = _depolarizing_cand_array(n, want)

        def run_chunk(args):
            stream_idx, count = args
            rng = make_rng(cfg.seed, stream_idx)
            if isinstance(channel, ErasureChannel):
                return int(_erasure_trials(n, m, float(channel.delta), count, rng,
                                           cfg.fresh_matrix, crows_init,
                                           cap if cap is not None else (1 << 62),
                                           cfg.full_search))
            return int(_depolarizing_trials(n, m, float(channel.delta), count, rng,
                                            cfg.fresh_matrix, crows_init, cands,
                                            cap if cap is not None else cands.shape[0]))
    else:

        def run_chunk(args):
            stream_idx, count = args
            rng = make_rng(cfg.seed, stream_idx)
            return _python_trials(cfg.channel, n, m, count, rng, cfg.fresh_matrix,
                                  fixed_c, cap)

    if threads > 1 and len(chunks) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            failures = sum(pool.map(run_chunk, chunks))
    else:
        failures = sum(map(run_chunk, chunks))

    p_hat = failures / cfg.trials
    return EstimateResult(p_hat, wilson_interval(failures, cfg.trials), failures, cfg.trials)
