"""Bit-packed GF(2) kernels compiled with numba.

All kernels operate on row-major packed matrices: ``bits[i, w]`` is a
``uint64`` holding columns ``64*w .. 64*w+63`` of row ``i``, least
significant bit first.  Padding bits beyond the logical column count are
kept at zero by every kernel.  Indices are 0-based.

The elimination loops iterate vector supports word-by-word (skipping
zero words) and restrict row scans to the still-unreduced band, so that
the word-parallel XOR volume dominates the runtime.
"""

from __future__ import annotations

import numpy as np
from numba import njit

U1 = np.uint64(1)
U0 = np.uint64(0)


@njit(cache=True, inline="always")
def _parity64(x):
    x ^= x >> np.uint64(32)
    x ^= x >> np.uint64(16)
    x ^= x >> np.uint64(8)
    x ^= x >> np.uint64(4)
    x ^= x >> np.uint64(2)
    x ^= x >> np.uint64(1)
    return x & U1


@njit(cache=True, inline="always")
def _hibit64(x):
    # index of the most significant set bit; x must be nonzero
    r = 0
    if x >> np.uint64(32):
        r += 32
        x >>= np.uint64(32)
    if x >> np.uint64(16):
        r += 16
        x >>= np.uint64(16)
    if x >> np.uint64(8):
        r += 8
        x >>= np.uint64(8)
    if x >> np.uint64(4):
        r += 4
        x >>= np.uint64(4)
    if x >> np.uint64(2):
        r += 2
        x >>= np.uint64(2)
    if x >> np.uint64(1):
        r += 1
    return r


# de Bruijn sequence index of the lowest set bit: _CTZ[(x & -x) * _DB >> 58]
_DB = np.uint64(0x03F79D71B4CB0A89)
_CTZ = np.zeros(64, dtype=np.int64)
for _i in range(64):
    _CTZ[int((np.uint64(1 << _i) * _DB) >> np.uint64(58))] = _i
_CTZ.flags.writeable = False


@njit(cache=True, inline="always")
def _ctz64(low):
    # low must have exactly one set bit
    return _CTZ[(low * _DB) >> np.uint64(58)]


@njit(cache=True, inline="always")
def _get_bit(bits, i, j):
    return np.int64((bits[i, j >> 6] >> np.uint64(j & 63)) & U1)


@njit(cache=True, inline="always")
def _flip_bit(bits, i, j):
    bits[i, j >> 6] ^= U1 << np.uint64(j & 63)


@njit(cache=True, inline="always")
def _xor_rows(bits, dst, src):
    nw = bits.shape[1]
    n4 = nw & ~3
    w = 0
    while w < n4:
        bits[dst, w] ^= bits[src, w]
        bits[dst, w + 1] ^= bits[src, w + 1]
        bits[dst, w + 2] ^= bits[src, w + 2]
        bits[dst, w + 3] ^= bits[src, w + 3]
        w += 4
    while w < nw:
        bits[dst, w] ^= bits[src, w]
        w += 1


@njit(cache=True, inline="always")
def _row_msb(bits, i, ncols):
    # rightmost set column of row i, or -1 if the row is zero
    nw = bits.shape[1]
    for w in range(nw - 1, -1, -1):
        x = bits[i, w]
        if x != U0:
            return (w << 6) + _hibit64(x)
    return -1


@njit(cache=True, inline="always")
def _get_bit_vec(v, j):
    return np.int64((v[j >> 6] >> np.uint64(j & 63)) & U1)


@njit(cache=True, inline="always")
def _flip_bit_vec(v, j):
    v[j >> 6] ^= U1 << np.uint64(j & 63)


@njit(cache=True)
def mul_packed(a, arows, b, out):
    """out ^= A @ B over GF(2); a is arows x wa, b/out share word width."""
    nw_b = b.shape[1]
    nw_a = a.shape[1]
    acc = np.zeros(nw_b, dtype=np.uint64)
    n4 = nw_b & ~3
    for i in range(arows):
        for w in range(nw_b):
            acc[w] = U0
        for w in range(nw_a):
            word = a[i, w]
            base = w << 6
            while word != U0:
                low = word & (~word + U1)
                j = base + _ctz64(low)
                word ^= low
                ww = 0
                while ww < n4:
                    acc[ww] ^= b[j, ww]
                    acc[ww + 1] ^= b[j, ww + 1]
                    acc[ww + 2] ^= b[j, ww + 2]
                    acc[ww + 3] ^= b[j, ww + 3]
                    ww += 4
                while ww < nw_b:
                    acc[ww] ^= b[j, ww]
                    ww += 1
        for w in range(nw_b):
            out[i, w] ^= acc[w]


@njit(cache=True)
def rank_packed(a, m, n):
    """GF(2) rank by destructive forward elimination on the packed copy."""
    r = 0
    for col in range(n):
        w = col >> 6
        sh = np.uint64(col & 63)
        piv = -1
        for i in range(r, m):
            if (a[i, w] >> sh) & U1:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for ww in range(a.shape[1]):
                t = a[r, ww]
                a[r, ww] = a[piv, ww]
                a[piv, ww] = t
        for i in range(piv + 1, m):
            if (a[i, w] >> sh) & U1:
                _xor_rows(a, i, r)
        r += 1
        if r == m:
            break
    return r


@njit(cache=True, inline="always")
def _bitrev64(x):
    m1 = np.uint64(0x5555555555555555)
    m2 = np.uint64(0x3333333333333333)
    m4 = np.uint64(0x0F0F0F0F0F0F0F0F)
    m8 = np.uint64(0x00FF00FF00FF00FF)
    m16 = np.uint64(0x0000FFFF0000FFFF)
    x = ((x >> np.uint64(1)) & m1) | ((x & m1) << np.uint64(1))
    x = ((x >> np.uint64(2)) & m2) | ((x & m2) << np.uint64(2))
    x = ((x >> np.uint64(4)) & m4) | ((x & m4) << np.uint64(4))
    x = ((x >> np.uint64(8)) & m8) | ((x & m8) << np.uint64(8))
    x = ((x >> np.uint64(16)) & m16) | ((x & m16) << np.uint64(16))
    return (x >> np.uint64(32)) | (x << np.uint64(32))


@njit(cache=True)
def reversed_rows(bits, ncols, out):
    """out[i] = row i of bits with column order reversed (j -> ncols-1-j).

    Word-parallel: reverse bits within each word, reverse the word order,
    then shift the whole row down by the padding width.
    """
    m = bits.shape[0]
    nw = bits.shape[1]
    offset = (nw << 6) - ncols
    if offset == 0:
        for i in range(m):
            for w in range(nw):
                out[i, w] = _bitrev64(bits[i, nw - 1 - w])
        return
    sh = np.uint64(offset)
    ish = np.uint64(64 - offset)
    for i in range(m):
        for w in range(nw):
            cur = _bitrev64(bits[i, nw - 1 - w])
            if w + 1 < nw:
                nxt = _bitrev64(bits[i, nw - 2 - w])
            else:
                nxt = U0
            out[i, w] = (cur >> sh) | (nxt << ish)


@njit(cache=True)
def is_symplectic_packed(bits, n2, rev):
    """True iff A^T Lambda A == Lambda for square A of side n2.

    For square A this is equivalent to A Lambda A^T == Lambda, which is
    checked row-pairwise: <row_i, reverse(row_j)> must equal Lambda[i, j].
    ``rev`` is scratch of the same shape, filled with the reversed rows.
    """
    reversed_rows(bits, n2, rev)
    nw = bits.shape[1]
    for i in range(n2):
        for j in range(i, n2):
            acc = U0
            for w in range(nw):
                acc ^= bits[i, w] & rev[j, w]
            want = U1 if i + j == n2 - 1 else U0
            if _parity64(acc) != want:
                return False
    return True


@njit(cache=True)
def is_stabilizer_pcm_packed(bits, m, n2, rev):
    """True iff A Lambda A^T == 0 (rows pairwise symplectic-orthogonal)."""
    reversed_rows(bits, n2, rev)
    nw = bits.shape[1]
    for i in range(m):
        for j in range(i, m):
            acc = U0
            for w in range(nw):
                acc ^= bits[i, w] & rev[j, w]
            if _parity64(acc):
                return False
    return True


@njit(cache=True)
def _acc_move_t(x, n2, i, v):
    """x <- transpose(s[n2, v, i]) @ x for a whole-column symplectic move.

    v is a packed vector with v[i] == 0.  Row operations:
      row i       ^= XOR of rows in supp(v)
      row n2-1-j  ^= row n2-1-i            for each j in supp(v)
      row i       ^= row n2-1-i            if v[n2-1-i] is set
    Row n2-1-i is never a target (v[i] == 0), so sources stay intact.
    """
    nw = x.shape[1]
    n4 = nw & ~3
    mi = n2 - 1 - i
    for w in range(nw):
        word = v[w]
        base = w << 6
        while word != U0:
            low = word & (~word + U1)
            j = base + _ctz64(low)
            word ^= low
            ww = 0
            while ww < n4:
                x[i, ww] ^= x[j, ww]
                x[i, ww + 1] ^= x[j, ww + 1]
                x[i, ww + 2] ^= x[j, ww + 2]
                x[i, ww + 3] ^= x[j, ww + 3]
                ww += 4
            while ww < nw:
                x[i, ww] ^= x[j, ww]
                ww += 1
    for w in range(nw):
        word = v[w]
        base = w << 6
        while word != U0:
            low = word & (~word + U1)
            j = base + _ctz64(low)
            word ^= low
            _xor_rows(x, n2 - 1 - j, mi)
    if _get_bit_vec(v, mi):
        _xor_rows(x, i, mi)


@njit(cache=True)
def decomp_unrestricted(work, m, n, lbits, rbits, alpha, beta):
    """Left-and-down Gaussian elimination with classical moves on both sides.

    work is reduced in place to the pivot matrix.  lbits/rbits must be
    identity matrices on entry; they are assembled directly (the move
    products collapse: later pivot columns never hit earlier pivot rows).
    Returns the rank r; alpha[:r], beta[:r] receive the pivot positions.
    """
    nw = work.shape[1]
    r = 0
    for i in range(m):
        b = _row_msb(work, i, n)
        if b < 0:
            continue
        alpha[r] = i
        beta[r] = b
        wb = b >> 6
        shb = np.uint64(b & 63)
        for ii in range(i + 1, m):
            if (work[ii, wb] >> shb) & U1:
                _xor_rows(work, ii, i)
                _flip_bit(lbits, ii, i)
        # row i = e_b + v; fold v into R's row b and reduce row i to e_b
        for w in range(nw):
            vw = work[i, w]
            if w == wb:
                vw ^= U1 << shb
            rbits[b, w] ^= vw
            work[i, w] = U0
        work[i, wb] = U1 << shb
        r += 1
    return r


@njit(cache=True)
def _apply_move_right_rows(work, row_lo, row_hi, n2, b, v, rv):
    """work[row_lo:row_hi] <- (work @ s[n2, b, v^T])[row_lo:row_hi].

    rv must hold the column-reversed v.  Rows outside the range must be
    invariant under the move (zero rows, or reduced rows whose support
    avoids supp(v), column b, and the mirrored support).
    """
    nw = work.shape[1]
    n4 = nw & ~3
    wb = b >> 6
    shb = np.uint64(b & 63)
    mb = n2 - 1 - b
    wmb = mb >> 6
    maskmb = U1 << np.uint64(mb & 63)
    vmb = (v[wmb] >> np.uint64(mb & 63)) & U1
    for row in range(row_lo, row_hi):
        a0 = U0
        a1 = U0
        a2 = U0
        a3 = U0
        w = 0
        while w < n4:
            a0 ^= work[row, w] & rv[w]
            a1 ^= work[row, w + 1] & rv[w + 1]
            a2 ^= work[row, w + 2] & rv[w + 2]
            a3 ^= work[row, w + 3] & rv[w + 3]
            w += 4
        while w < nw:
            a0 ^= work[row, w] & rv[w]
            w += 1
        y = _parity64(a0 ^ a1 ^ a2 ^ a3)
        cb = (work[row, wb] >> shb) & U1
        if cb:
            for w in range(nw):
                work[row, w] ^= v[w]
        work[row, wmb] ^= maskmb * (y ^ (vmb & cb))


@njit(cache=True, inline="always")
def _reverse_vec(v, n2, rv):
    nw = v.shape[0]
    offset = (nw << 6) - n2
    if offset == 0:
        for w in range(nw):
            rv[w] = _bitrev64(v[nw - 1 - w])
        return
    sh = np.uint64(offset)
    ish = np.uint64(64 - offset)
    for w in range(nw):
        cur = _bitrev64(v[nw - 1 - w])
        nxt = _bitrev64(v[nw - 2 - w]) if w + 1 < nw else U0
        rv[w] = (cur >> sh) | (nxt << ish)


@njit(cache=True)
def decomp_stabilizer(work, m, n2, lbits, rbits, alpha, beta):
    """Elimination with classical row moves and symplectic column moves.

    Requires work to satisfy A Lambda A^T == 0 (checked by the caller).
    rbits accumulates R = H_r ... H_1 via _acc_move_t; lbits is assembled
    directly as in the unrestricted case.  Returns the rank.
    """
    nw = work.shape[1]
    vbuf = np.zeros(nw, dtype=np.uint64)
    rvbuf = np.zeros(nw, dtype=np.uint64)
    r = 0
    for i in range(m):
        b = _row_msb(work, i, n2)
        if b < 0:
            continue
        alpha[r] = i
        beta[r] = b
        wb = b >> 6
        shb = np.uint64(b & 63)
        for ii in range(i + 1, m):
            if (work[ii, wb] >> shb) & U1:
                _xor_rows(work, ii, i)
                _flip_bit(lbits, ii, i)
        # v = row i without the pivot bit
        for w in range(nw):
            vbuf[w] = work[i, w]
        vbuf[wb] ^= U1 << shb
        _reverse_vec(vbuf, n2, rvbuf)
        # rows above i are zero or reduced: invariant under the move
        _apply_move_right_rows(work, i, m, n2, b, vbuf, rvbuf)
        _acc_move_t(rbits, n2, b, vbuf)
        r += 1
    return r


@njit(cache=True)
def apply_move_left(work, n2, i, u):
    """work <- s[n2, u, i] @ work (u packed, u[i] == 0)."""
    nw = work.shape[1]
    n4 = nw & ~3
    mi = n2 - 1 - i
    wbuf = np.zeros(nw, dtype=np.uint64)
    # w = (Lambda u)^T A: XOR of rows n2-1-j over j in supp(u), pre-update
    for w in range(nw):
        word = u[w]
        base = w << 6
        while word != U0:
            low = word & (~word + U1)
            j = base + _ctz64(low)
            word ^= low
            mj = n2 - 1 - j
            ww = 0
            while ww < n4:
                wbuf[ww] ^= work[mj, ww]
                wbuf[ww + 1] ^= work[mj, ww + 1]
                wbuf[ww + 2] ^= work[mj, ww + 2]
                wbuf[ww + 3] ^= work[mj, ww + 3]
                ww += 4
            while ww < nw:
                wbuf[ww] ^= work[mj, ww]
                ww += 1
    for w in range(nw):
        word = u[w]
        base = w << 6
        while word != U0:
            low = word & (~word + U1)
            j = base + _ctz64(low)
            word ^= low
            _xor_rows(work, j, i)
    for w in range(nw):
        work[mi, w] ^= wbuf[w]
    if _get_bit_vec(u, mi):
        _xor_rows(work, mi, i)


@njit(cache=True)
def decomp_symplectic(work, n2, ltbits, rbits, beta):
    """Elimination with symplectic moves on both sides.

    Requires work in Sp(n2) (checked by the caller).  ltbits accumulates
    the TRANSPOSE of the left factor (transposed outside); rbits
    accumulates R directly.  Both must be identities on entry.  After
    step k only rows/columns k+1 .. n2-2-k remain unreduced, so the row
    scans shrink with k.
    """
    n = n2 >> 1
    nw = work.shape[1]
    ubuf = np.zeros(nw, dtype=np.uint64)
    vbuf = np.zeros(nw, dtype=np.uint64)
    rvbuf = np.zeros(nw, dtype=np.uint64)
    for k in range(n):
        b = _row_msb(work, k, n2)
        beta[k] = b
        if b < 0:
            # zero pivot row: the input was not invertible, caller rejects
            return
        wb = b >> 6
        shb = np.uint64(b & 63)
        # u = (column b of work) + e_k; support lies in rows k+1..n2-1-k
        # (branchless gather: the column's bit pattern is unpredictable)
        for w in range(nw):
            ubuf[w] = U0
        for row in range(k + 1, n2 - k):
            bit = (work[row, wb] >> shb) & U1
            ubuf[row >> 6] ^= bit << np.uint64(row & 63)
        apply_move_left(work, n2, k, ubuf)
        _acc_move_t(ltbits, n2, k, ubuf)
        # v = (row k of work) + e_b; row k is untouched by the left move
        for w in range(nw):
            vbuf[w] = work[k, w]
        vbuf[wb] ^= U1 << shb
        _reverse_vec(vbuf, n2, rvbuf)
        _apply_move_right_rows(work, k, n2 - k, n2, b, vbuf, rvbuf)
        _acc_move_t(rbits, n2, b, vbuf)


@njit(cache=True)
def _transpose64(a):
    """In-place transpose of a 64x64 bit block held as uint64[64]."""
    j = 32
    m = np.uint64(0x00000000FFFFFFFF)
    while j != 0:
        k = 0
        while k < 64:
            t = (a[k] ^ (a[k | j] >> np.uint64(j))) & m
            a[k] ^= t
            a[k | j] ^= t << np.uint64(j)
            k = (k + j + 1) & ~j
        j >>= 1
        m ^= m << np.uint64(j) if j else U0


@njit(cache=True)
def transpose_packed(src, rows, cols, dst):
    """dst (cols x ceil(rows/64) words) = transpose of src (rows x words)."""
    nw_src = src.shape[1]
    nw_dst = dst.shape[1]
    block = np.empty(64, dtype=np.uint64)
    for bc in range(nw_src):
        col_base = bc << 6
        cmax = min(64, cols - col_base)
        if cmax <= 0:
            break
        for br in range(nw_dst):
            row_base = br << 6
            rmax = min(64, rows - row_base)
            for t in range(rmax):
                block[t] = src[row_base + t, bc]
            for t in range(rmax, 64):
                block[t] = U0
            _transpose64(block)
            for t in range(cmax):
                dst[col_base + t, br] = block[t]


@njit(cache=True)
def borel_product_t(ws, n2, out):
    """out <- transpose of prod_k s[n2, ws[k], k] for k = 0..n-1.

    ws holds one packed column vector per row; out must be the identity
    on entry.  The caller transposes to recover the product itself.
    """
    n = n2 >> 1
    for k in range(n):
        _acc_move_t(out, n2, k, ws[k])
