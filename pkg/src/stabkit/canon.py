"""Canonical decompositions A = L * Pi * R and gate-list translation.

Three variants of left-and-down Gaussian elimination (pivot search is
row-major, scanning each row from the last column to the first):

  * unrestricted    — classical moves on both sides,
  * stabilizer      — classical moves on the left, symplectic column
                      moves on the right (input must satisfy
                      A Lambda A^T == 0),
  * symplectic      — symplectic moves on both sides (input must be in
                      Sp(2n)).

Each produces the unique quintuple (r, alpha, beta, L, R) with L and R
in the pair-set groups determined by the pivot positions.  The moves are
involutions over GF(2), so the accumulated factors are products of the
step moves themselves.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .gf2 import Gf2Error, Gf2Matrix, Gf2Vector, identity, mul, parse_matrix, zeros
from .moves import (
    TransitiveSet,
    in_borel,
    in_lower,
    is_stabilizer_pcm,
    is_symplectic,
    orderedpairs,
    qubit_of,
    tset_tl,
    tset_tr,
    tset_ttcr,
)

MODE_UNRESTRICTED = "unrestricted"
MODE_STABILIZER = "stabilizer"
MODE_SYMPLECTIC = "symplectic"
_MODES = (MODE_UNRESTRICTED, MODE_STABILIZER, MODE_SYMPLECTIC)


@dataclass(frozen=True)
class PivotProfile:
    """Pivot positions of a decomposition: rank, row indices, column indices.

    alpha is strictly increasing into [0, m); beta is injective into
    [0, cols) and qubit-injective in the stabilizer/symplectic modes.
    In symplectic mode alpha is the identity on [0, r).
    """

    mode: str
    m: int
    cols: int
    alpha: tuple[int, ...]
    beta: tuple[int, ...]

    def __post_init__(self):
        if self.mode not in _MODES:
            raise Gf2Error(f"unknown mode {self.mode!r}")
        if len(self.alpha) != len(self.beta):
            raise Gf2Error("alpha and beta must have equal length")
        prev = -1
        for a in self.alpha:
            if not (prev < a < self.m):
                raise Gf2Error("alpha must be strictly increasing into the row range")
            prev = a
        for b in self.beta:
            if not 0 <= b < self.cols:
                raise Gf2Error("beta entry out of column range")
        if self.mode == MODE_UNRESTRICTED:
            if len(set(self.beta)) != len(self.beta):
                raise Gf2Error("beta must be injective")
        else:
            if self.cols % 2:
                raise Gf2Error("stabilizer/symplectic profiles need an even column count")
            qubits = [qubit_of(b, self.cols) for b in self.beta]
            if len(set(qubits)) != len(qubits):
                raise Gf2Error("beta must be qubit-injective")
        if self.mode == MODE_SYMPLECTIC and self.alpha != tuple(range(self.r)):
            raise Gf2Error("symplectic profiles have alpha = identity")

    @property
    def r(self) -> int:
        return len(self.alpha)


def pivot_matrix(profile: PivotProfile) -> Gf2Matrix:
    """The incomplete permutation matrix Pi recording the pivots.

    Unrestricted/stabilizer: ones at (alpha[k], beta[k]).  Symplectic:
    additionally the mirrored ones at (2n-1-k, 2n-1-beta[k]).
    """
    dense = np.zeros((profile.m, profile.cols), dtype=np.uint8)
    for k in range(profile.r):
        dense[profile.alpha[k], profile.beta[k]] = 1
    if profile.mode == MODE_SYMPLECTIC:
        n2 = profile.cols
        for k in range(profile.r):
            dense[n2 - 1 - k, n2 - 1 - profile.beta[k]] = 1
    if profile.m == 0 or profile.cols == 0:
        return zeros(profile.m, profile.cols)
    return Gf2Matrix.from_dense(dense)


@dataclass(frozen=True)
class Quintuple:
    """A canonical decomposition (profile, L, R) with A = L * Pi * R."""

    profile: PivotProfile
    L: Gf2Matrix
    R: Gf2Matrix

    @property
    def r(self) -> int:
        return self.profile.r

    @property
    def alpha(self) -> tuple[int, ...]:
        return self.profile.alpha

    @property
    def beta(self) -> tuple[int, ...]:
        return self.profile.beta

    @property
    def mode(self) -> str:
        return self.profile.mode

    def membership_sets(self) -> tuple[TransitiveSet, TransitiveSet]:
        """The pair-sets certifying L and R membership."""
        p = self.profile
        if p.mode == MODE_UNRESTRICTED:
            return tset_tl(p.alpha, p.m), tset_tr(p.beta, p.cols)
        if p.mode == MODE_STABILIZER:
            return tset_tl(p.alpha, p.m), tset_ttcr(p.beta, p.cols)
        return orderedpairs(p.cols), tset_ttcr(p.beta, p.cols)

    def check_membership(self) -> None:
        """Raise Gf2Error naming the first failed membership certificate."""
        p = self.profile
        tl, tr = self.membership_sets()
        if p.mode == MODE_SYMPLECTIC:
            if not in_borel(self.L, tl):
                raise Gf2Error("left factor is not in B(2n, P(2n))")
            if not in_borel(self.R, tr):
                raise Gf2Error("right factor is not in B(2n, T_tcr(beta))")
        elif p.mode == MODE_STABILIZER:
            if not in_lower(self.L, tl):
                raise Gf2Error("left factor is not in L(m, T_L(alpha))")
            if not in_borel(self.R, tr):
                raise Gf2Error("right factor is not in B(2n, T_tcr(beta))")
        else:
            if not in_lower(self.L, tl):
                raise Gf2Error("left factor is not in L(m, T_L(alpha))")
            if not in_lower(self.R, tr):
                raise Gf2Error("right factor is not in L(n, T_R(beta))")


def reconstruct(q: Quintuple, check: bool = True) -> Gf2Matrix:
    """L * Pi * R, bit-exact.  With check=True the memberships are verified
    first and a violation raises with the failed certificate named."""
    if check:
        q.check_membership()
    return mul(q.L, mul(pivot_matrix(q.profile), q.R))


def _empty_outputs(a: Gf2Matrix, side: int):
    lbits = identity(a.rows).words.copy()
    rbits = identity(side).words.copy()
    alpha = np.empty(min(a.rows, side), dtype=np.int64)
    beta = np.empty(min(a.rows, side), dtype=np.int64)
    return lbits, rbits, alpha, beta


def decompose_unrestricted(a: Gf2Matrix) -> Quintuple:
    """Canonical form of an arbitrary matrix; deterministic and unique."""
    work = a.words.copy()
    lbits, rbits, alpha, beta = _empty_outputs(a, a.cols)
    if a.rows and a.cols:
        r = int(_kernels.decomp_unrestricted(work, a.rows, a.cols, lbits, rbits, alpha, beta))
    else:
        r = 0
    profile = PivotProfile(MODE_UNRESTRICTED, a.rows, a.cols,
                           tuple(int(x) for x in alpha[:r]), tuple(int(x) for x in beta[:r]))
    return Quintuple(profile, Gf2Matrix(a.rows, a.rows, lbits), Gf2Matrix(a.cols, a.cols, rbits))


def decompose_stabilizer(a: Gf2Matrix) -> Quintuple:
    """Canonical form of a stabilizer parity check matrix.

    Rejects inputs with A Lambda A^T != 0 up front: the elimination step
    relies on the mirror columns of pivots vanishing, which only holds
    for stabilizer inputs.
    """
    if not is_stabilizer_pcm(a):
        raise Gf2Error("input is not a stabilizer parity check matrix (A Lambda A^T != 0)")
    work = a.words.copy()
    lbits, rbits, alpha, beta = _empty_outputs(a, a.cols)
    if a.rows and a.cols:
        r = int(_kernels.decomp_stabilizer(work, a.rows, a.cols, lbits, rbits, alpha, beta))
    else:
        r = 0
    profile = PivotProfile(MODE_STABILIZER, a.rows, a.cols,
                           tuple(int(x) for x in alpha[:r]), tuple(int(x) for x in beta[:r]))
    return Quintuple(profile, Gf2Matrix(a.rows, a.rows, lbits), Gf2Matrix(a.cols, a.cols, rbits))


def decompose_symplectic(a: Gf2Matrix) -> Quintuple:
    """Canonical form of a symplectic matrix, computed in O(n^3).

    Returns the quintuple with alpha the identity; beta maps [0, n) into
    [0, 2n) qubit-injectively, L is in B(2n, P(2n)) and R in
    B(2n, T_tcr(beta)).

    Validity of the input is established by the elimination itself: the
    moves applied are symplectic involutions, so the work matrix reduces
    to the pivot matrix if and only if the input was symplectic.
    """
    if a.rows != a.cols or a.rows % 2:
        raise Gf2Error("symplectic decomposition requires a square matrix of even side")
    n2 = a.rows
    n = n2 // 2
    work = a.words.copy()
    ltbits = identity(n2).words.copy()
    rbits = identity(n2).words.copy()
    beta = np.full(max(n, 1), -1, dtype=np.int64)
    if n:
        _kernels.decomp_symplectic(work, n2, ltbits, rbits, beta)
        bad = bool((beta[:n] < 0).any())
    else:
        bad = False
    if not bad:
        try:
            profile = PivotProfile(MODE_SYMPLECTIC, n2, n2,
                                   tuple(range(n)), tuple(int(x) for x in beta[:n]))
        except Gf2Error:
            bad = True
    if bad or not np.array_equal(work, pivot_matrix(profile).words):
        raise Gf2Error("input is not symplectic (A^T Lambda A != Lambda)")
    L = Gf2Matrix(n2, n2, ltbits).transpose()
    return Quintuple(profile, L, Gf2Matrix(n2, n2, rbits))


def decompose(a: Gf2Matrix, mode: str) -> Quintuple:
    """Dispatch to the decomposition for the given mode."""
    if mode == MODE_UNRESTRICTED:
        return decompose_unrestricted(a)
    if mode == MODE_STABILIZER:
        return decompose_stabilizer(a)
    if mode == MODE_SYMPLECTIC:
        return decompose_symplectic(a)
    raise Gf2Error(f"unknown mode {mode!r}")


# -- Borel expansion ------------------------------------------------------


def borel_expand(b: Gf2Matrix) -> list[Gf2Vector]:
    """Free column vectors v_k of an element of B(2n, P(2n)).

    v_k holds the entries of column k of B in rows k+1 .. 2n-1-k; the
    ordered product of the whole-column moves s(2n, v_k, k) over
    k = 0..n-1 reproduces B exactly.
    """
    n2 = b.rows
    if n2 % 2 or b.cols != n2:
        raise Gf2Error("borel expansion requires a square matrix of even side")
    if not in_borel(b, orderedpairs(n2)):
        raise Gf2Error("matrix is not in B(2n, P(2n))")
    n = n2 // 2
    dense = b.to_dense()
    out = []
    for k in range(n):
        bits = [0] * n2
        for i in range(k + 1, n2 - k):
            bits[i] = int(dense[i, k])
        out.append(Gf2Vector.from_bits(bits))
    return out


def borel_compose(n: int, vs: list[Gf2Vector]) -> Gf2Matrix:
    """Product of the whole-column moves s(2n, v_k, k), k ascending.

    Inverse of borel_expand when each v_k is supported on rows
    k+1 .. 2n-1-k.
    """
    n2 = 2 * n
    if len(vs) != n:
        raise Gf2Error(f"expected {n} column vectors")
    ws = np.zeros((n, max(1, (n2 + 63) >> 6)), dtype=np.uint64)[:, : (n2 + 63) >> 6]
    ws = np.ascontiguousarray(ws)
    for k, v in enumerate(vs):
        if v.len != n2:
            raise Gf2Error("column vector length mismatch")
        if v[k]:
            raise Gf2Error(f"column vector {k} has a pivot-position bit")
        ws[k] = v.words
    out = identity(n2).words.copy()
    if n:
        _kernels.borel_product_t(ws, n2, out)
    return Gf2Matrix(n2, n2, out).transpose()


# -- gate translation -----------------------------------------------------

GATE_KINDS = ("CNOT", "CZ", "PHASE", "HPHASE", "HADAMARD", "HCZ", "SWAP")


@dataclass(frozen=True)
class Gate:
    """A named Clifford gate acting on one or two qubits (0-based).

    HPHASE is a phase gate conjugated by a Hadamard; HCZ is a CZ
    conjugated by Hadamards on both its qubits.
    """

    kind: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise Gf2Error(f"unknown gate kind {self.kind!r}")
        want = 1 if self.kind in ("PHASE", "HPHASE", "HADAMARD") else 2
        if len(self.qubits) != want:
            raise Gf2Error(f"{self.kind} expects {want} qubit(s)")


def gate_matrix(gate: Gate, n: int) -> Gf2Matrix:
    """Symplectic image of a gate on n qubits."""
    n2 = 2 * n
    mir = lambda x: n2 - 1 - x

    def move(i, j):
        from .moves import symplectic_move

        return symplectic_move(n, i, j)

    k = gate.kind
    if k == "PHASE":
        (q,) = gate.qubits
        return move(mir(q), q)
    if k == "HPHASE":
        (q,) = gate.qubits
        return move(q, mir(q))
    if k == "HADAMARD":
        (q,) = gate.qubits
        dense = np.eye(n2, dtype=np.uint8)
        dense[[q, mir(q)]] = dense[[mir(q), q]]
        return Gf2Matrix.from_dense(dense)
    if k == "CNOT":
        c, t = gate.qubits
        return move(t, c)
    if k == "CZ":
        a, b = gate.qubits
        return move(mir(a), b)
    if k == "HCZ":
        a, b = gate.qubits
        return move(a, mir(b))
    # SWAP
    a, b = gate.qubits
    dense = np.eye(n2, dtype=np.uint8)
    dense[[a, b]] = dense[[b, a]]
    dense[[mir(a), mir(b)]] = dense[[mir(b), mir(a)]]
    return Gf2Matrix.from_dense(dense)


def gates_product(gates: list[Gate], n: int) -> Gf2Matrix:
    """Product of the gates' symplectic images, in list order."""
    acc = identity(2 * n)
    for g in gates:
        acc = mul(acc, gate_matrix(g, n))
    return acc


def _move_gate(n: int, i: int, j: int) -> Gate:
    """Named gate whose symplectic image is the single move s(2n, i, j)."""
    n2 = 2 * n
    mir = lambda x: n2 - 1 - x
    if j == mir(i):
        return Gate("PHASE", (j,)) if i > j else Gate("HPHASE", (i,))
    if i < n and j < n:
        return Gate("CNOT", (j, i))
    if i >= n and j >= n:
        return Gate("CNOT", (mir(i), mir(j)))
    if i >= n:
        return Gate("CZ", (mir(i), j))
    return Gate("HCZ", (i, mir(j)))


def _column_move_gates(n: int, v: Gf2Vector, k: int) -> list[Gate]:
    """Gates for the whole-column move s(2n, v, k): the correction phase
    (folded with the mirror-position move, both are the same involution)
    followed by the single moves over supp(v)."""
    n2 = 2 * n
    mk = n2 - 1 - k
    correction = 0
    for q in range(n):
        correction ^= v[q] & v[n2 - 1 - q]
    gates = []
    net_phase = correction ^ v[mk]
    if net_phase:
        gates.append(_move_gate(n, mk, k))
    for j in v.support():
        if j != mk:
            gates.append(_move_gate(n, j, k))
    return gates


def _permutation_gates(n: int, beta: tuple[int, ...]) -> list[Gate]:
    """Gates whose image is Pi_sym(beta): qubit SWAPs then HADAMARDs.

    Pi_sym(beta) = Q * H where H flips qubits whose pivot sits in the
    second half and Q permutes qubit(beta[i]) to i.
    """
    n2 = 2 * n
    gates: list[Gate] = []
    perm = [0] * n  # perm[qubit_of(beta[i])] = i
    flips = []
    for i, b in enumerate(beta):
        q = qubit_of(b, n2)
        perm[q] = i
        if b >= n:
            flips.append(q)
    # selection sort emits transpositions s_1..s_k with perm = s_k o ... o s_1,
    # so the gate list (whose images multiply left to right) is reversed
    cur = perm[:]
    pos = {cur[q]: q for q in range(n)}  # pos[target] = current qubit holding it
    swaps = []
    for target in range(n):
        q = pos[target]
        if q != target:
            other = cur[target]
            swaps.append(Gate("SWAP", (target, q)))
            cur[target], cur[q] = cur[q], cur[target]
            pos[target], pos[other] = target, q
    gates.extend(reversed(swaps))
    gates.extend(Gate("HADAMARD", (q,)) for q in sorted(flips))
    return gates


def to_gates(q: Quintuple) -> list[Gate]:
    """Translate a symplectic-mode quintuple into a Clifford gate list.

    Order: gates for L (Borel columns k = 0..n-1), then the permutation
    block for Pi_sym(beta), then gates for R.  The product of the gates'
    symplectic images equals L * Pi_sym(beta) * R.
    """
    if q.mode != MODE_SYMPLECTIC:
        raise Gf2Error("gate translation requires a symplectic-mode quintuple")
    n = q.profile.cols // 2
    gates: list[Gate] = []
    for k, v in enumerate(borel_expand(q.L)):
        gates.extend(_column_move_gates(n, v, k))
    gates.extend(_permutation_gates(n, q.beta))
    for k, v in enumerate(borel_expand(q.R)):
        gates.extend(_column_move_gates(n, v, k))
    return gates


# -- serialization --------------------------------------------------------


def quintuple_to_dict(q: Quintuple) -> dict:
    from .gf2 import format_matrix

    return {
        "mode": q.mode,
        "m": q.profile.m,
        "n2": q.profile.cols,
        "r": q.r,
        "alpha": list(q.alpha),
        "beta": list(q.beta),
        "L": format_matrix(q.L).splitlines(),
        "R": format_matrix(q.R).splitlines(),
    }


def quintuple_from_dict(d: dict) -> Quintuple:
    profile = PivotProfile(d["mode"], d["m"], d["n2"], tuple(d["alpha"]), tuple(d["beta"]))
    L = parse_matrix("\n".join(d["L"])) if d["L"] else zeros(0, 0)
    R = parse_matrix("\n".join(d["R"])) if d["R"] else zeros(0, 0)
    if L.rows != profile.m or R.rows != profile.cols:
        raise Gf2Error("factor dimensions do not match the profile")
    return Quintuple(profile, L, R)


def quintuple_to_json(q: Quintuple) -> str:
    return json.dumps(quintuple_to_dict(q), indent=2, sort_keys=True)


def gates_to_dicts(gates: list[Gate]) -> list[dict]:
    return [{"gate": g.kind, "qubits": list(g.qubits)} for g in gates]


def gates_from_dicts(items: list[dict]) -> list[Gate]:
    return [Gate(d["gate"], tuple(d["qubits"])) for d in items]
