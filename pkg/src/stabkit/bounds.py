"""Finite-blocklength achievability and converse bounds for Pauli noise.

The error-guessing bounds are functionals of the rank J of the realized
error in the per-side-information likelihood ordering:

    P_conv = P(J > 2**m)
    P_ach  = P(J > 2**m) + E[ 1{J <= 2**m} (J-1) 2**-m ]

general_bounds evaluates them by materializing the sorted ordering of an
explicit distribution table (feasible up to a handful of qubits).  For n
independent erasure or depolarizing channels the same quantities reduce
to closed forms in the binomial CDF, evaluated here with exact rational
arithmetic; a floating-point fast path covers large blocklengths.

Probabilities are `fractions.Fraction` on the exact path.  Ties in the
likelihood ordering are broken by ascending lexicographic order of the
error bitstring; the bounds themselves are tie-invariant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .gf2 import Gf2Error


def as_fraction(x) -> Fraction:
    """Exact conversion; accepts Fraction, int, 'num/den' strings, floats."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


# -- channels --------------------------------------------------------------


@dataclass(frozen=True)
class ErasureChannel:
    """n independent qubit erasure channels; side information = erasure flags."""

    delta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "delta", as_fraction(self.delta))
        if not 0 <= self.delta <= 1:
            raise Gf2Error("erasure parameter must be in [0, 1]")


@dataclass(frozen=True)
class DepolarizingChannel:
    """n independent qubit depolarizing channels; no side information."""

    delta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "delta", as_fraction(self.delta))
        if not 0 <= self.delta <= 1:
            raise Gf2Error("depolarizing parameter must be in [0, 1]")


@dataclass(frozen=True)
class TableChannel:
    """Channel given by an explicit distribution table."""

    table: "DistTable"


# -- binomial CDF machinery ------------------------------------------------


@lru_cache(maxsize=None)
def _cum_table(n: int, a: int, d: int) -> tuple[int, ...]:
    """Cumulative numerators of Binomial(n, a/d) over denominator d**n."""
    terms = []
    c = 1  # C(n, i)
    for i in range(n + 1):
        terms.append(c * a**i * (d - a) ** (n - i))
        c = c * (n - i) // (i + 1)
    out = []
    acc = 0
    for t in terms:
        acc += t
        out.append(acc)
    return tuple(out)


def _table_for(n: int, p: Fraction) -> tuple[tuple[int, ...], int]:
    a, d = p.numerator, p.denominator
    return _cum_table(n, a, d), d**n


def binom_cdf(n: int, p, i: int) -> Fraction:
    """P(Binomial(n, p) <= i), exact; 0 below -1+1 and 1 at or above n."""
    p = as_fraction(p)
    if not 0 <= p <= 1:
        raise Gf2Error("binomial parameter must be in [0, 1]")
    if i < 0:
        return Fraction(0)
    if i >= n:
        return Fraction(1)
    table, den = _table_for(n, p)
    return Fraction(table[i], den)


def binom_cdf_ext(n: int, p, x) -> Fraction:
    """Piecewise-linear extension of the binomial CDF through the knots
    (-1, 0), (0, F(0)), ..., (n, 1), evaluated at rational x in [-1, n]."""
    p = as_fraction(p)
    x = as_fraction(x)
    if x < -1 or x > n:
        raise Gf2Error(f"extended CDF argument {x} outside [-1, {n}]")
    lo = math.floor(x)
    theta = x - lo
    f_lo = binom_cdf(n, p, lo)
    if theta == 0:
        return f_lo
    return f_lo + theta * (binom_cdf(n, p, lo + 1) - f_lo)


def binom_cdf_inv_pl(n: int, p, y) -> Fraction:
    """Inverse of the piecewise-linear extended CDF; requires 0 < p < 1."""
    p = as_fraction(p)
    y = as_fraction(y)
    if not 0 < p < 1:
        raise Gf2Error("piecewise-linear inverse requires 0 < p < 1")
    if y < 0 or y > 1:
        raise Gf2Error(f"CDF value {y} outside [0, 1]")
    if y == 0:
        return Fraction(-1)
    table, den = _table_for(n, p)
    # first knot index with F(i) >= y
    lo_idx, hi_idx = 0, n
    if Fraction(table[0], den) >= y:
        i = 0
    else:
        while hi_idx - lo_idx > 1:
            mid = (lo_idx + hi_idx) // 2
            if Fraction(table[mid], den) >= y:
                hi_idx = mid
            else:
                lo_idx = mid
        i = hi_idx
    f_i = Fraction(table[i], den)
    f_prev = Fraction(table[i - 1], den) if i > 0 else Fraction(0)
    return (i - 1) + (y - f_prev) / (f_i - f_prev)


# -- explicit distribution tables -------------------------------------------


@dataclass(frozen=True)
class DistTable:
    """Joint distribution of an error bitstring U (length 2n, first
    character most significant for tie-breaking) and side information V."""

    n: int
    entries: tuple[tuple[str, str, Fraction], ...]  # (u, v, p)

    def validate(self) -> None:
        total = Fraction(0)
        seen = set()
        for u, v, p in self.entries:
            if len(u) != 2 * self.n or any(c not in "01" for c in u):
                raise Gf2Error(f"error string {u!r} is not a {2 * self.n}-bit string")
            if p < 0:
                raise Gf2Error("negative probability in distribution table")
            if (u, v) in seen:
                raise Gf2Error(f"duplicate entry for ({u}, {v})")
            seen.add((u, v))
            total += p
        if total != 1:
            raise Gf2Error(f"probabilities sum to {total}, not 1")

    @classmethod
    def from_dicts(cls, n: int, items) -> "DistTable":
        entries = tuple((d["u"], str(d.get("v", "")), as_fraction(d["p"])) for d in items)
        t = cls(n, entries)
        t.validate()
        return t

    def to_dicts(self) -> list[dict]:
        return [
            {"u": u, "v": v, "p": f"{p.numerator}/{p.denominator}"} for u, v, p in self.entries
        ]


def erasure_dist_table(n: int, delta) -> DistTable:
    """Explicit table for n independent erasure channels (5**n entries)."""
    delta = as_fraction(delta)
    entries = []
    for pat in range(1 << n):
        flags = [(pat >> q) & 1 for q in range(n)]
        e = sum(flags)
        pv = delta**e * (1 - delta) ** (n - e)
        v = "".join(str(f) for f in flags)
        positions = []
        for q in range(n):
            if flags[q]:
                positions.extend((q, 2 * n - 1 - q))
        pu = pv / 4**e
        for mask in range(1 << len(positions)):
            bits = ["0"] * (2 * n)
            for d, pos in enumerate(positions):
                if (mask >> d) & 1:
                    bits[pos] = "1"
            entries.append(("".join(bits), v, pu))
    return DistTable(n, tuple(entries))


def depolarizing_dist_table(n: int, delta) -> DistTable:
    """Explicit table for n independent depolarizing channels (4**n entries)."""
    delta = as_fraction(delta)
    entries = []
    for mask in range(1 << (2 * n)):
        bits = [(mask >> i) & 1 for i in range(2 * n)]
        w = sum(1 for q in range(n) if bits[q] or bits[2 * n - 1 - q])
        p = (delta / 3) ** w * (1 - delta) ** (n - w)
        u = "".join(str(b) for b in bits)
        entries.append((u, "", p))
    return DistTable(n, tuple(entries))


# -- results ----------------------------------------------------------------


@dataclass(frozen=True)
class BoundResult:
    """Converse/achievability pair for a syndrome budget of m bits."""

    n: int
    m: int
    p_conv: Fraction | float
    p_ach: Fraction | float
    exact: bool

    @property
    def rate(self) -> Fraction:
        return Fraction(self.n - self.m, self.n)


def general_bounds(table: DistTable, m: int) -> BoundResult:
    """Exact bounds for an explicit distribution by sorting each
    side-information slice in decreasing probability (ties: ascending u)."""
    table.validate()
    if not 0 <= m <= 2 * table.n:
        raise Gf2Error(f"syndrome bits m={m} outside [0, {2 * table.n}]")
    groups: dict[str, list[tuple[str, Fraction]]] = {}
    for u, v, p in table.entries:
        groups.setdefault(v, []).append((u, p))
    cap = 1 << m
    p_conv = Fraction(0)
    extra = Fraction(0)
    for v, ent in groups.items():
        ent.sort(key=lambda e: (-e[1], e[0]))
        for j, (u, p) in enumerate(ent, start=1):
            if j > cap:
                p_conv += p
            else:
                extra += p * (j - 1)
    return BoundResult(table.n, m, p_conv, p_conv + Fraction(extra, cap), True)


# -- erasure channel ---------------------------------------------------------


def erasure_bounds(n: int, delta, m: int, exact: bool = True) -> BoundResult:
    """Closed-form bounds for n independent erasure channels.

    Exactly the binomial-CDF expressions; the shared (4-3*delta)**n and
    (1+3*delta)**n factors cancel against the table denominators, so all
    terms are ratios of integers.
    """
    delta = as_fraction(delta)
    if not 0 <= delta <= 1:
        raise Gf2Error("erasure parameter must be in [0, 1]")
    if not 0 <= m <= n:
        raise Gf2Error(f"syndrome bits m={m} outside [0, {n}]")
    if not exact:
        pc, pa = _erasure_bounds_float(n, float(delta), m)
        return BoundResult(n, m, pc, pa, False)
    a, b = delta.numerator, delta.denominator
    hi = n - m // 2 - 1
    lo = m // 2
    t1, d1 = _cum_table(n, b - a, b), b**n  # p = 1 - delta
    t2, d2 = _cum_table(n, 4 * (b - a), 4 * b - 3 * a), (4 * b) ** n
    t3, _ = _cum_table(n, 4 * a, b + 3 * a), None  # denom (b+3a)**n cancels
    f1 = Fraction(t1[hi], d1) if hi >= 0 else Fraction(0)
    f2 = Fraction(t2[hi], d2) if hi >= 0 else Fraction(0)  # already times ((4-3d)/4)**n
    f3 = Fraction(t3[min(lo, n)], d1)  # times (1+3*delta)**n
    pow_m = 1 << m
    p_conv = f1 - pow_m * f2
    p_ach = (
        (1 + Fraction(1, 2 * pow_m)) * f1
        - Fraction(1, 2 * pow_m)
        - Fraction(pow_m + 1, 2) * f2
        + Fraction(1, 2 * pow_m) * f3
    )
    return BoundResult(n, m, p_conv, p_ach, True)


def _erasure_bounds_float(n: int, delta: float, m: int) -> tuple[float, float]:
    """Float path: direct expectation over the erasure count, every term
    nonnegative (no cancellation), Kahan-compensated."""
    logpmf = _log_binom_pmf(n, delta)
    conv_terms = []
    ach_terms = []
    for i in range(n + 1):
        pi = math.exp(logpmf[i]) if logpmf[i] > -745 else 0.0
        if 2 * i > m:
            conv_terms.append(pi * (1.0 - 2.0 ** (m - 2 * i)))
            ach_terms.append(pi * (1.0 - 2.0 ** (m - 2 * i - 1) - 2.0 ** (-2 * i - 1)))
        else:
            ach_terms.append(pi * (2.0 ** (2 * i - m - 1) - 2.0 ** (-m - 1)))
    return _kahan_sum(conv_terms), _kahan_sum(ach_terms)


# -- depolarizing channel ------------------------------------------------------


@lru_cache(maxsize=None)
def _dep_sum_table(n: int, a: int, b: int) -> tuple[int, ...]:
    """Prefix numerators of sum_i (delta/(3-3*delta))**i * F(n,3/4,i)**2
    over the common denominator (3*(b-a))**n * 16**n, for delta = a/b."""
    t34 = _cum_table(n, 3, 4)
    out = []
    acc = 0
    for i in range(n + 1):
        acc += a**i * (3 * (b - a)) ** (n - i) * t34[i] ** 2
        out.append(acc)
    return tuple(out)


def _dep_blocks_exact(n: int, delta: Fraction, m: int) -> tuple[Fraction, Fraction]:
    """Bounds straight from the weight-block structure of the likelihood
    order: conditional on weight i, the rank J is uniform over the block
    of the C(n,i)*3**i equal-probability errors.  Valid for any delta;
    blocks descend in weight once delta exceeds 3/4 (heavier errors
    become the more likely ones)."""
    ascending = delta <= Fraction(3, 4)
    order = range(n + 1) if ascending else range(n, -1, -1)
    cap = 1 << m
    p_conv = Fraction(0)
    extra = Fraction(0)
    consumed = 0
    for i in order:
        size = math.comb(n, i) * 3**i
        prob = math.comb(n, i) * delta**i * (1 - delta) ** (n - i)
        lo, hi = consumed + 1, consumed + size
        if lo > cap:
            p_conv += prob
        elif hi > cap:
            p_conv += prob * Fraction(hi - cap, size)
        h = min(hi, cap)
        if h >= lo and prob:
            extra += prob * Fraction((h - lo + 1) * (lo + h - 2), 2 * size)
        consumed = hi
    return p_conv, p_conv + Fraction(extra, cap)


def depolarizing_bounds(n: int, delta, m: int, exact: bool = True) -> BoundResult:
    """Closed-form bounds for n independent depolarizing channels.

    ell solves F(n, 3/4, ell) = 2**m / 4**n through the piecewise-linear
    extension; the CDF of the likelihood rank J is then a composition of
    extended binomial CDFs, and the achievability correction telescopes
    into a single sum over error weights up to floor(ell).  The closed
    form assumes the likelihood order coincides with the weight order
    (delta <= 3/4); above that the block expectation is summed directly.
    """
    delta = as_fraction(delta)
    if not 0 <= delta <= 1:
        raise Gf2Error("depolarizing parameter must be in [0, 1]")
    if not 0 <= m <= 2 * n:
        raise Gf2Error(f"syndrome bits m={m} outside [0, {2 * n}]")
    if not exact:
        pc, pa = _depolarizing_bounds_float(n, float(delta), m)
        return BoundResult(n, m, pc, pa, False)
    if delta == 0:
        return BoundResult(n, m, Fraction(0), Fraction(0), True)
    if delta > Fraction(3, 4):
        pc, pa = _dep_blocks_exact(n, delta, m)
        return BoundResult(n, m, pc, pa, True)
    ell = binom_cdf_inv_pl(n, Fraction(3, 4), Fraction(1 << m, 1 << (2 * n)))
    p_conv = binom_cdf_ext(n, 1 - delta, n - 1 - ell)
    a, b = delta.numerator, delta.denominator
    fl = math.floor(ell)
    ratio = Fraction(a, 3 * (b - a))
    pow_m1 = Fraction(1, 1 << (m + 1))
    t3 = Fraction(1 << m, 2) * Fraction(b - a, b) ** n * ratio ** (fl + 1)
    s = _dep_sum_table(n, a, b)
    sum_term = Fraction(s[min(fl, n)], (3 * (b - a)) ** n * 16**n)
    t4 = (
        Fraction(16 ** n, 1) * Fraction(b - a, b) ** n
        * pow_m1
        * Fraction(3 * b - 4 * a, 3 * (b - a))
        * sum_term
    )
    p_ach = (1 + pow_m1) * p_conv - pow_m1 + t3 + t4
    return BoundResult(n, m, p_conv, p_ach, True)


def j_cdf_depolarizing(n: int, delta, j: int) -> Fraction:
    """P(J <= j) for the depolarizing likelihood rank:
    F(n, delta, Finv(n, 3/4, j/4**n)) through the extended CDFs."""
    delta = as_fraction(delta)
    if not 0 <= j <= 4**n:
        raise Gf2Error(f"rank {j} outside [0, {4 ** n}]")
    x = binom_cdf_inv_pl(n, Fraction(3, 4), Fraction(j, 4**n))
    return binom_cdf_ext(n, delta, x)


def _ell_float(n: int, m: int, size_p: float) -> tuple[int, float]:
    """ell = Finv(n, size_p, 2**m / 4**n) as (floor, fractional part), in
    log space so that the ratio never underflows."""
    logf = _log_binom_cdf(n, size_p)
    target = (m - 2 * n) * math.log(2.0)
    if target >= 0:
        return n, 0.0
    idx = 0
    while logf[idx] < target:
        idx += 1
    if idx == 0:
        return -1, math.exp(target - logf[0])
    f_prev = math.exp(logf[idx - 1] - logf[idx])
    y = math.exp(target - logf[idx])
    return idx - 1, (y - f_prev) / (1.0 - f_prev)


def _depolarizing_bounds_float(n: int, delta: float, m: int) -> tuple[float, float]:
    """Float path via the weight-block expectation; all terms nonnegative.

    Block i of the likelihood order spans (4**n F(i-1), 4**n F(i)] with J
    uniform inside, where F is the Binomial(n, 3/4) CDF for delta <= 3/4
    and the Binomial(n, 1/4) CDF of the complementary weight above that.
    Quantities of the form 4**n * F * 2**-m use log-domain scaling.
    """
    if delta <= 0.0:
        return 0.0, 0.0
    if delta <= 0.75:
        class_p, size_p = delta, 0.75
    else:
        class_p, size_p = 1.0 - delta, 0.25
    ell_i, theta = _ell_float(n, m, size_p)
    log34 = _log_binom_cdf(n, size_p)
    pmf_d = [math.exp(t) if t > -745 else 0.0 for t in _log_binom_pmf(n, class_p)]
    # P(J > 2**m) = (1 - theta) pmf(ell_i + 1) + tail beyond ell_i + 1
    conv_terms = [(1.0 - theta) * pmf_d[ell_i + 1]] if ell_i + 1 <= n else []
    conv_terms += [pmf_d[i] for i in range(ell_i + 2, n + 1)]
    p_conv = _kahan_sum(conv_terms)
    # full blocks i = 0..ell_i: mean of (J-1) is (4**n (F(i-1)+F(i)) - 1)/2
    # (identically zero for a singleton first block)
    inv2m = 2.0 ** (-m) if m < 1070 else 0.0
    ach_terms = []
    for i in range(0, ell_i + 1):
        scaled = _exp_scaled(log34[i], 2 * n - m)
        if i > 0:
            scaled += _exp_scaled(log34[i - 1], 2 * n - m)
        ach_terms.append(pmf_d[i] * 0.5 * (scaled - inv2m))
    # partial block at weight ell_i + 1: probability theta * pmf, mean
    # (J-1) = (4**n F(ell_i) + 2**m - 1)/2
    if ell_i + 1 <= n and theta > 0.0:
        lo_scaled = _exp_scaled(log34[ell_i], 2 * n - m) if ell_i >= 0 else 0.0
        ach_terms.append(theta * pmf_d[ell_i + 1] * 0.5 * (lo_scaled + 1.0 - inv2m))
    p_ach = p_conv + _kahan_sum(ach_terms)
    return p_conv, p_ach


def _exp_scaled(logval: float, pow2: int) -> float:
    """exp(logval) * 2**pow2 without overflowing intermediate exp."""
    return math.exp(logval + pow2 * math.log(2.0))


def _kahan_sum(terms) -> float:
    acc = 0.0
    comp = 0.0
    for t in terms:
        y = t - comp
        s = acc + y
        comp = (s - acc) - y
        acc = s
    return acc


@lru_cache(maxsize=None)
def _log_binom_pmf(n: int, p: float) -> tuple[float, ...]:
    if p <= 0.0:
        return tuple([0.0] + [-math.inf] * n)
    if p >= 1.0:
        return tuple([-math.inf] * n + [0.0])
    lp, lq = math.log(p), math.log1p(-p)
    lg = math.lgamma
    return tuple(
        lg(n + 1) - lg(i + 1) - lg(n - i + 1) + i * lp + (n - i) * lq for i in range(n + 1)
    )


@lru_cache(maxsize=None)
def _log_binom_cdf(n: int, p: float) -> tuple[float, ...]:
    pmf = _log_binom_pmf(n, p)
    out = []
    acc = -math.inf
    for t in pmf:
        acc = _logaddexp(acc, t)
        out.append(min(acc, 0.0))
    return tuple(out)


def _logaddexp(x: float, y: float) -> float:
    if x == -math.inf:
        return y
    if y == -math.inf:
        return x
    hi, lo = (x, y) if x > y else (y, x)
    return hi + math.log1p(math.exp(lo - hi))


# -- rate search and asymptotics ---------------------------------------------


@dataclass(frozen=True)
class RateSearchResult:
    """Largest achievable and smallest non-achievable rates on the k/n grid.

    When no syndrome budget satisfies the achievability target the rate 0
    sentinel is reported with ach_feasible False; when no budget violates
    the converse target the rate 1 sentinel is reported with conv_found
    False.
    """

    n: int
    r_ach: Fraction
    r_conv: Fraction
    m_ach: int | None
    m_conv: int | None
    ach_feasible: bool
    conv_found: bool


def channel_bounds(channel, n: int, m: int, exact: bool = True) -> BoundResult:
    """Bounds for one syndrome budget of the given channel."""
    if isinstance(channel, ErasureChannel):
        return erasure_bounds(n, channel.delta, m, exact=exact)
    if isinstance(channel, DepolarizingChannel):
        return depolarizing_bounds(n, channel.delta, m, exact=exact)
    if isinstance(channel, TableChannel):
        if channel.table.n != n:
            raise Gf2Error("table size does not match the requested blocklength")
        return general_bounds(channel.table, m)
    raise Gf2Error(f"unknown channel {channel!r}")


def rate_search(channel, n: int, epsilon, exact: bool = True) -> RateSearchResult:
    """Scan syndrome budgets m = 0..n for the rate bounds at target epsilon.

    R_ach is the largest (n-m)/n with P_ach <= epsilon; R_conv is the
    smallest (n-m)/n with P_conv > epsilon.  A linear scan avoids relying
    on strict monotonicity at exact ties.
    """
    eps = as_fraction(epsilon) if exact else float(epsilon)
    m_ach = None
    m_conv = None
    for m in range(n + 1):
        res = channel_bounds(channel, n, m, exact=exact)
        if m_ach is None and res.p_ach <= eps:
            m_ach = m
        if res.p_conv > eps:
            m_conv = m
    r_ach = Fraction(n - m_ach, n) if m_ach is not None else Fraction(0)
    r_conv = Fraction(n - m_conv, n) if m_conv is not None else Fraction(1)
    return RateSearchResult(
        n, r_ach, r_conv, m_ach, m_conv, m_ach is not None, m_conv is not None
    )


def binary_entropy(x: float) -> float:
    if x in (0.0, 1.0):
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def asymptotic_rate(channel, n: int, epsilon) -> float:
    """Second-order rate expansion for the erasure or depolarizing channel.

    Erasure: 1 - 2d + 2*Phi^-1(eps)*sqrt(d(1-d))/sqrt(n).
    Depolarizing: 1 - h(d) - d*log2(3)
                  - sqrt(d(1-d)/n)*Phi^-1(eps)*log2(d/(3(1-d)))
                  + log2(n)/(2n).
    """
    eps = float(epsilon)
    if not 0 < eps < 1:
        raise Gf2Error("epsilon must be in (0, 1)")
    if isinstance(channel, ErasureChannel):
        d = float(channel.delta)
        if not 0 < d < 1:
            raise Gf2Error("asymptotic rate requires 0 < delta < 1")
        return 1 - 2 * d + 2 * normal_cdf_inv(eps) * math.sqrt(d * (1 - d) / n)
    if isinstance(channel, DepolarizingChannel):
        d = float(channel.delta)
        if not 0 < d < 1:
            raise Gf2Error("asymptotic rate requires 0 < delta < 1")
        return (
            1
            - binary_entropy(d)
            - d * math.log2(3)
            - math.sqrt(d * (1 - d) / n) * normal_cdf_inv(eps) * math.log2(d / (3 * (1 - d)))
            + math.log2(n) / (2 * n)
        )
    raise Gf2Error("asymptotic expansion is defined for erasure and depolarizing channels")


# -- standard normal -----------------------------------------------------------

# Acklam's rational approximation to the probit function, then one Newton
# refinement against Phi computed from erfc.
_PROBIT_A = (
    -3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
    1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00,
)
_PROBIT_B = (
    -5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
    6.680131188771972e01, -1.328068155288572e01,
)
_PROBIT_C = (
    -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
    -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00,
)
_PROBIT_D = (
    7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
    3.754408661907416e00,
)


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def normal_cdf_inv(y: float) -> float:
    """Phi^-1 to better than 1e-9 absolute (rational approximation plus one
    Newton step against the erfc-based Phi)."""
    if not 0.0 < y < 1.0:
        raise Gf2Error("normal_cdf_inv requires 0 < y < 1")
    p_low = 0.02425
    if y < p_low:
        q = math.sqrt(-2 * math.log(y))
        x = (
            ((((_PROBIT_C[0] * q + _PROBIT_C[1]) * q + _PROBIT_C[2]) * q + _PROBIT_C[3]) * q + _PROBIT_C[4]) * q
            + _PROBIT_C[5]
        ) / ((((_PROBIT_D[0] * q + _PROBIT_D[1]) * q + _PROBIT_D[2]) * q + _PROBIT_D[3]) * q + 1)
    elif y <= 1 - p_low:
        q = y - 0.5
        r = q * q
        x = (
            (((((_PROBIT_A[0] * r + _PROBIT_A[1]) * r + _PROBIT_A[2]) * r + _PROBIT_A[3]) * r + _PROBIT_A[4]) * r + _PROBIT_A[5])
            * q
            / (((((_PROBIT_B[0] * r + _PROBIT_B[1]) * r + _PROBIT_B[2]) * r + _PROBIT_B[3]) * r + _PROBIT_B[4]) * r + 1)
        )
    else:
        q = math.sqrt(-2 * math.log1p(-y))
        x = -(
            ((((_PROBIT_C[0] * q + _PROBIT_C[1]) * q + _PROBIT_C[2]) * q + _PROBIT_C[3]) * q + _PROBIT_C[4]) * q
            + _PROBIT_C[5]
        ) / ((((_PROBIT_D[0] * q + _PROBIT_D[1]) * q + _PROBIT_D[2]) * q + _PROBIT_D[3]) * q + 1)
    # Newton refinement
    err = normal_cdf(x) - y
    pdf = math.exp(-0.5 * x * x) / math.sqrt(2 * math.pi)
    if pdf > 0:
        x -= err / pdf
    return x
