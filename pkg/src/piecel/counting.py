"""Point counts on twisted superelliptic curves y^m = f(x) and trace tables.

For a good prime ideal P with residue field F_q, the key object is the
trace table

    t[j][i] = 1 + q^i - #C_j(F_{q^i}),        j in Z/m, 1 <= i <= n-1,

where C_j is the twist u_j y^m = f(x) with u_j^((q^i-1)/m) = eta^(-j)
(eta = the reduction of zeta_m).  By the fixed-point formula t[j][i] is
the trace of Frob_{q^i} composed with the order-m automorphism y -> zeta^j y
acting on H^1, which is what character-piece extraction needs at every i.

The composite operator (Frob_q . alpha^l)^i equals Frob_{q^i} . alpha^(l i),
so the trace of the i-th power of a single twisted Frobenius is the table
entry t[(l*i) mod m][i]; trace_frobenius_g exposes that view.  The table
is indexed by the plain twist exponent j because for gcd(i, m) > 1 the
exponents l*i mod m do not cover Z/m, while piece extraction needs all
of them (this is also what makes sum_j t[j][i] = 0 hold at every i).

One class histogram of f over F_{q^i} serves all m twists at once:

    #C_j(F_{q^i}) = m * hist[(-j) mod m] + nzero + 1,

with hist[c] = #{x : cls(f(x)) = c}, nzero = #{x : f(x) = 0}, and the
final 1 for the unique point at infinity (gcd(m, n) = 1 means exactly
one, rational and fixed by the automorphism).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .cyclo import BadReductionError, CycloElem, PrimeIdeal, reduce_mod
from .ffield import ExtField, PowerClassTable, build_extension

_CHUNK = 1 << 18


def _determinant(M):
    """Exact determinant of a square matrix of CycloElem, by elimination."""
    n = len(M)
    M = [row[:] for row in M]
    sign = 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if not M[r][col].is_zero()), None)
        if pivot is None:
            return CycloElem.zero(M[0][0].m)
        if pivot != col:
            M[col], M[pivot] = M[pivot], M[col]
            sign = -sign
        inv = M[col][col].inverse()
        for r in range(col + 1, n):
            if M[r][col].is_zero():
                continue
            factor = M[r][col] * inv
            M[r] = [a - factor * b for a, b in zip(M[r], M[col])]
    out = M[0][0]
    for k in range(1, n):
        out = out * M[k][k]
    return -out if sign < 0 else out


def _resultant(f, g):
    """Resultant of two coefficient lists (ascending, CycloElem)."""
    n, k = len(f) - 1, len(g) - 1
    size = n + k
    zero = f[0] - f[0]
    M = [[zero] * size for _ in range(size)]
    for r in range(k):  # k rows of f
        for j, c in enumerate(reversed(f)):
            M[r][r + j] = c
    for r in range(n):  # n rows of g
        for j, c in enumerate(reversed(g)):
            M[k + r][r + j] = c
    return _determinant(M)


class SuperellipticCurve:
    """y^m = f(x) with exact cyclotomic coefficients, gcd(m, deg f) = 1."""

    def __init__(self, m: int, coeffs: list[CycloElem]):
        if not 2 <= m <= 4:
            raise ValueError(f"unsupported m={m}")
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        n = len(coeffs) - 1
        if n < 2:
            raise ValueError("f must have degree at least 2")
        if gcd(m, n) != 1:
            raise ValueError(f"gcd(m, deg f) = gcd({m}, {n}) must be 1")
        self.m = m
        self.f = tuple(coeffs)
        self.n = n
        self._disc = None
        if self.disc().is_zero():
            raise ValueError("f is not separable (discriminant vanishes)")

    @property
    def genus(self) -> int:
        return (self.m - 1) * (self.n - 1) // 2

    def disc(self) -> CycloElem:
        """disc(f) = (-1)^(n(n-1)/2) Res(f, f') / lc(f), exact."""
        if self._disc is None:
            f = list(self.f)
            fp = [c * CycloElem.of(c.m, k) for k, c in enumerate(f)][1:]
            res = _resultant(f, fp)
            d = res * self.f[-1].inverse()
            if (self.n * (self.n - 1) // 2) % 2:
                d = -d
            self._disc = d
        return self._disc

    def __repr__(self):
        from .cyclo import cyclo_to_str

        terms = " + ".join(f"({cyclo_to_str(c)})*x^{k}" for k, c in enumerate(self.f))
        return f"SuperellipticCurve(y^{self.m} = {terms})"


def countable_prime_test(C: SuperellipticCurve, P: PrimeIdeal) -> bool:
    """True iff the reduction mod P is a curve our point counter can handle.

    Allows a singular (non-separable) fiber; requires p coprime to m,
    P unramified, unit leading coefficient, and reducible coefficients.
    """
    if C.m % P.p == 0:
        return False
    if P.ramified:
        return False
    try:
        if reduce_mod(C.f[-1], P) == 0:
            return False
        for c in C.f:
            reduce_mod(c, P)
    except BadReductionError:
        return False
    return True


def good_prime_test(C: SuperellipticCurve, P: PrimeIdeal) -> bool:
    """True iff reduction mod P keeps the curve smooth of the same shape."""
    if not countable_prime_test(C, P):
        return False
    if reduce_mod(C.disc(), P) == 0:
        return False
    return True


@dataclass
class ReducedContext:
    """The curve over F_{q^i}: field, embedded coefficients, class table."""

    F: ExtField
    coeffs: tuple
    tbl: PowerClassTable

    @property
    def hist(self):
        if not hasattr(self, "_hist"):
            self._hist, self._nzero = class_histogram(self.F, self.coeffs, self.tbl)
        return self._hist

    @property
    def nzero(self):
        self.hist
        return self._nzero


def reduce_curve(
    C: SuperellipticCurve, P: PrimeIdeal, i: int, seed: int = 0, strict: bool = True
) -> ReducedContext:
    """Build F_{q^i}, embed the reduced coefficients, tabulate classes.

    With strict=False a singular fiber is allowed: the counts are then
    those of the reduced (possibly singular) model, whose zeta numerator
    is the inertia-invariant local factor when every singular point is
    unibranch (e.g. cusps from repeated roots of f).
    """
    if strict:
        if not good_prime_test(C, P):
            raise BadReductionError(f"{P} is not a good prime for this curve")
    elif not countable_prime_test(C, P):
        raise BadReductionError(f"{P} cannot be reduced and counted for this curve")
    F = build_extension(P, i, seed=seed)
    coeffs = tuple(F.lift(reduce_mod(c, P)) for c in C.f)
    tbl = PowerClassTable(F, C.m)
    return ReducedContext(F, coeffs, tbl)


def class_histogram(F: ExtField, coeffs, tbl: PowerClassTable, chunk: int = _CHUNK):
    """(hist, nzero): hist[c] = #{x : cls(f(x)) = c}, nzero = #{x : f(x) = 0}.

    Streams all q^i field elements through a vectorized Horner evaluation
    in digit-matrix chunks.
    """
    m = tbl.m
    cdig = [F.decode(np.array([c]))[0] for c in coeffs]
    hist = np.zeros(m, dtype=np.int64)
    nzero = 0
    for lo in range(0, F.q, chunk):
        X = F.decode(np.arange(lo, min(lo + chunk, F.q), dtype=np.int64))
        V = np.tile(cdig[-1], (X.shape[0], 1))
        for c in cdig[-2::-1]:
            V = F.mul(V, X)
            V = (V + c) % F.p
        counts = np.bincount(tbl.cls_of(F.encode(V)) + 1, minlength=m + 1)
        nzero += int(counts[0])
        hist += counts[1 : m + 1]
    return hist, nzero


def twist_unit(ell: int, P: PrimeIdeal, i: int, ctx: ReducedContext, seed: int = 0) -> int:
    """u in F_{q^i}^x with u^((q^i-1)/m) = z^(-1), z = eta^(l*i).

    Any two valid choices differ by an m-th power, so counts do not depend
    on the seeded draw.
    """
    m = ctx.tbl.m
    j = (ell * i) % m
    if j == 0:
        return 1
    target = (-j) % m
    rng = np.random.default_rng(seed ^ (ctx.F.q * 31 + j))
    while True:
        u = int(rng.integers(1, ctx.F.q))
        if ctx.tbl.table[u] == target:
            return u


@dataclass
class TwistedCurveFq:
    """u y^m = f(x) over a fixed finite field, ready to count."""

    m: int
    ctx: ReducedContext
    u: int

    def __post_init__(self):
        if self.u % self.ctx.F.q == 0:
            raise ValueError("twist unit must be nonzero")


def count_points(T: TwistedCurveFq) -> int:
    """#C_u(F_Q) on the smooth projective model (one point at infinity)."""
    cls_u = 0 if T.u == 1 else int(T.ctx.tbl.table[T.u])
    hist, nzero = T.ctx.hist, T.ctx.nzero
    return int(T.m * hist[cls_u] + nzero + 1)


class TraceTable:
    """All twisted traces t[j][i] for one good prime ideal (see module docs)."""

    def __init__(
        self,
        C: SuperellipticCurve,
        P: PrimeIdeal,
        imax: int | None = None,
        seed: int = 0,
        strict: bool = True,
    ):
        self.C = C
        self.P = P
        self.m = C.m
        self.imax = imax if imax is not None else C.n - 1
        self.t = [[None] * (self.imax + 1) for _ in range(self.m)]
        for i in range(1, self.imax + 1):
            ctx = reduce_curve(C, P, i, seed=seed, strict=strict)
            hist, nzero = ctx.hist, ctx.nzero
            Q = ctx.F.q
            for j in range(self.m):
                count_j = self.m * int(hist[(-j) % self.m]) + nzero + 1
                self.t[j][i] = 1 + Q - count_j

    def entry(self, j: int, i: int) -> int:
        """t[j][i]: trace of Frob_{q^i} . alpha^j on H^1."""
        return self.t[j % self.m][i]

    def trace(self, ell: int, i: int) -> int:
        """Trace of the i-th power of Frob_q . alpha^ell (operator view)."""
        return self.entry(ell * i, i)


def trace_frobenius_g(C: SuperellipticCurve, P: PrimeIdeal, ell: int, i: int, seed: int = 0) -> int:
    """1 + q^i - #C_twisted(F_{q^i}) for the twist attached to (ell, i)."""
    ctx = reduce_curve(C, P, i, seed=seed)
    u = twist_unit(ell, P, i, ctx, seed=seed)
    T = TwistedCurveFq(C.m, ctx, u)
    return 1 + ctx.F.q - count_points(T)
