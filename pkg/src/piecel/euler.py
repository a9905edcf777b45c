"""Character pieces of the trace table and local Euler factors.

H^1 of y^m = f(x) splits under the order-m automorphism alpha: y -> zeta y
into pieces H^1_k on which alpha acts by zeta^k.  Averaging the trace
table against the characters isolates each piece's Frobenius power sums

    s_i^(k) = (1/m) sum_j zeta^(-k j) t[j][i],

which are algebraic integers in Z[zeta_m]; the division by m must cancel
exactly and anything else is treated as a hard convention error.  Newton's
identities then turn power sums into the local polynomial

    L_P(C^(k), T) = prod (1 - lambda T),   deg = n - 1 for k != 0,

and the product over all k recovers the zeta-function numerator of the
full curve mod P, which doubles as a brute-force oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cyclo import CycloElem, PrimeIdeal, zeta
from .counting import ReducedContext, SuperellipticCurve, TraceTable, reduce_curve

# direct zeta-numerator enumeration is capped at this many field elements
_ORACLE_BUDGET = 60_000_000


@dataclass(frozen=True)
class CharacterTau:
    """The character tau_k of the cyclic group, tau_k(alpha) = zeta_m^k."""

    m: int
    k: int

    def __post_init__(self):
        object.__setattr__(self, "k", self.k % self.m)

    def conjugate(self) -> "CharacterTau":
        return CharacterTau(self.m, (-self.k) % self.m)

    def galois(self, s: int) -> "CharacterTau":
        return CharacterTau(self.m, (self.k * s) % self.m)


@dataclass
class LocalFactor:
    """L_P(C^(k), T) coefficients c_0 .. c_d, exact in Z[zeta_m].

    `truncation` is the number of trustworthy coefficients beyond c_0;
    downstream series assembly must never read past it.  `full_degree`
    is the true degree (n - 1 for k != 0).
    """

    P: PrimeIdeal
    k: int
    coeffs: tuple
    full_degree: int

    @property
    def truncation(self) -> int:
        return len(self.coeffs) - 1

    def __iter__(self):
        return iter(self.coeffs)


def piece_power_sums(tt: TraceTable, tau: CharacterTau) -> list:
    """s_i^(k) for i = 1 .. imax (list is 0-indexed by i-1), exact.

    Raises ArithmeticError if the average is not an algebraic integer —
    that can only come from an indexing/convention bug upstream.
    """
    m, k = tau.m, tau.k
    if m != tt.m:
        raise ValueError("character and table have different m")
    z = zeta(m)
    phases = [z ** ((-k * j) % m) for j in range(m)]
    inv_m = Fraction(1, m)
    out = []
    for i in range(1, tt.imax + 1):
        acc = CycloElem.zero(z.m)
        for j in range(m):
            acc = acc + phases[j] * tt.t[j][i]
        s = acc * inv_m
        if not s.is_integral():
            raise ArithmeticError(
                f"piece power sum s_{i}^({k}) = {s.coeffs} is not integral"
            )
        out.append(s)
    return out


def newton_to_poly(power_sums, d: int) -> list:
    """Coefficients c_0 .. c_d of prod(1 - lambda T) with given power sums.

    e_j = (1/j) sum_{r=1}^{j} (-1)^(r-1) e_{j-r} p_r and c_j = (-1)^j e_j,
    all exact.
    """
    if len(power_sums) < d:
        raise ValueError(f"need {d} power sums, got {len(power_sums)}")
    if d == 0:
        return [CycloElem.one(1 if not power_sums else power_sums[0].m)]
    mfield = power_sums[0].m
    e = [CycloElem.one(mfield)]
    for j in range(1, d + 1):
        acc = CycloElem.zero(mfield)
        for r in range(1, j + 1):
            term = e[j - r] * power_sums[r - 1]
            acc = acc + (term if r % 2 == 1 else -term)
        e.append(acc * Fraction(1, j))
    return [c if j % 2 == 0 else -c for j, c in enumerate(e)]


def local_factor(
    C: SuperellipticCurve,
    P: PrimeIdeal,
    tau: CharacterTau,
    truncation: int | None = None,
    seed: int = 0,
    table: TraceTable | None = None,
    strict: bool = True,
) -> LocalFactor:
    """The local polynomial of the k-piece at a good prime, possibly truncated.

    With strict=False the prime may have a singular fiber; the result is
    then the zeta numerator of that fiber (the honest local factor when the
    degeneration is unibranch), with trailing coefficients dropping to zero.
    """
    full = 0 if tau.k == 0 else C.n - 1
    d = full if truncation is None else min(truncation, full)
    if tau.k == 0 or d == 0:
        one = CycloElem.one(C.f[0].m)
        return LocalFactor(P, tau.k, (one,), full)
    tt = table if table is not None else TraceTable(C, P, imax=d, seed=seed, strict=strict)
    ps = piece_power_sums(tt, tau)[:d]
    coeffs = newton_to_poly(ps, d)
    for c in coeffs:
        if not c.is_integral():
            raise ArithmeticError("local factor coefficient is not integral")
    return LocalFactor(P, tau.k, tuple(coeffs), full)


def _untwisted_counts(C: SuperellipticCurve, P: PrimeIdeal, imax: int, seed: int):
    counts = []
    for i in range(1, imax + 1):
        ctx = reduce_curve(C, P, i, seed=seed)
        counts.append(int(C.m * ctx.hist[0] + ctx.nzero + 1))
    return counts


def full_curve_numerator(
    C: SuperellipticCurve, P: PrimeIdeal, seed: int = 0, method: str = "auto"
) -> list[int]:
    """Degree-2g zeta numerator of C mod P from untwisted counts (oracle).

    Counts over F_{q^i} for i = 1..2g when that enumeration fits the
    budget; otherwise counts to i = g and fills the top half through the
    Weil pairing c_{2g-j} = q^{g-j} c_j (both paths agree on small fields,
    which is tested).  `method` can force "direct" or "reflect".
    """
    g = C.genus
    q = P.q
    if method == "auto":
        direct = sum(q**i for i in range(1, 2 * g + 1)) <= _ORACLE_BUDGET
    else:
        direct = method == "direct"
    imax = 2 * g if direct else g
    if not direct and sum(q**i for i in range(1, g + 1)) > _ORACLE_BUDGET:
        raise ValueError(f"q = {q} too large for the full-curve oracle")
    counts = _untwisted_counts(C, P, imax, seed)
    sums = [CycloElem.of(C.f[0].m, 1 + q**i - counts[i - 1]) for i in range(1, imax + 1)]
    coeffs = newton_to_poly(sums, imax)
    out = []
    for c in coeffs:
        if not (c.is_rational() and c.is_integral()):
            raise ArithmeticError("zeta numerator coefficient is not an integer")
        out.append(int(c.a))
    if not direct:
        out = out + [0] * (2 * g - g)
        for j in range(g):
            out[2 * g - j] = q ** (g - j) * out[j]
    return out
