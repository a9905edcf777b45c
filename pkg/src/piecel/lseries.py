"""Dirichlet series assembly and approximate-functional-equation evaluation.

A character piece restricted to Q has completed L-function

    Lambda(s) = gamma(s) L(s),
    gamma(s)  = (N/pi^(2h))^(s/2) (Gamma(s/2) Gamma((s+1)/2))^h,

with h Gamma-pairs and rational conductor N.  Legendre duplication
collapses the pair product, so everywhere internally

    gamma(s) = C0 kappa^(-s) Gamma(s)^h,
    C0 = 2^h pi^(h/2),      kappa = (2 pi)^h / sqrt(N).

Evaluation uses the smoothed approximate functional equation: with the
kernel G_s(t) = (1/2 pi i) int_(c) gamma(s+z) t^(-z) dz / z (numerically
inverted on a vertical line; the h = 1, N = 1 case is the upper
incomplete gamma function, which calibrates the quadrature),

    Lambda(s) = sum_n a_n n^(-s) G_s(n/x) + w sum_n conj(a_n) n^(s-2) G_(2-s)(n x)

holds for every x > 0.  The x-freedom does all the work here: the sign
w is solved by equating two x-values, and the functional-equation
residual is the x-variation of Lambda (algebraically identical to
|Lambda(s) - w Lambda~(2-s)| with the two sides computed at dual
smoothing parameters).  The kernel decays like exp(-h (kappa t)^(1/h)),
which also drives the required-coefficient estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import loggamma

from .cyclo import ComplexEmbedding, CycloElem, embed, split_prime
from .counting import SuperellipticCurve, good_prime_test
from .euler import CharacterTau, LocalFactor, local_factor

_DISC_ABS = {2: 1, 3: 3, 4: 4}


class InsufficientCoefficients(ValueError):
    """The stored Dirichlet coefficients cannot reach the requested digits."""


def conductor_over_Q(norm_of_piece_conductor: int, m: int, mult: int) -> int:
    """N_Q = Norm(piece conductor) * |disc(K)|^mult, K = Q(zeta_m)."""
    if norm_of_piece_conductor < 1 or mult < 0:
        raise ValueError("conductor data must be positive")
    return norm_of_piece_conductor * _DISC_ABS[m] ** mult


def gamma_pairs(C: SuperellipticCurve) -> int:
    """h = <tau, H^1> [K:Q] / 2 = (n-1) [K:Q] / 2 for any nontrivial piece."""
    deg = 2 if C.m > 2 else 1
    return (C.n - 1) * deg // 2


@dataclass
class EvalParams:
    """Numerical knobs for the Mellin-inverted kernel."""

    digits: int = 10
    c: float = 1.5
    step: float = 0.0
    height: float = 0.0

    @classmethod
    def for_digits(cls, digits: int, h: int) -> "EvalParams":
        guard = (digits + 6) * math.log(10)
        step = 2 * math.pi * 1.5 / guard  # aliasing error exp(-2 pi c / step)
        height = 2 * guard / (h * math.pi)  # contour tail exp(-h pi Y / 2)
        return cls(digits=digits, c=1.5, step=step, height=max(8.0, height))


@dataclass
class PieceLSeries:
    """One character piece as a ready-to-evaluate Dirichlet series.

    coeffs[n-1] = a_n (complex doubles via the canonical embedding);
    the dual series has b_n = conj(a_n).  `conductor` is the rational
    conductor N_Q of the restriction of scalars; `bad_factors` records
    the user-supplied local polynomials that went into assembly.
    """

    coeffs: np.ndarray
    conductor: int
    h: int
    w: complex | None = None
    bad_factors: dict = field(default_factory=dict)
    label: str = ""

    @property
    def N(self) -> int:
        return len(self.coeffs)

    @property
    def kappa(self) -> float:
        return (2 * math.pi) ** self.h / math.sqrt(self.conductor)

    @property
    def C0(self) -> float:
        return 2**self.h * math.pi ** (self.h / 2)

    def with_conductor(self, conductor: int) -> "PieceLSeries":
        return PieceLSeries(self.coeffs, conductor, self.h, None, self.bad_factors, self.label)


# ---------------------------------------------------------------------------
# coefficient assembly


def _inverse_series(poly, length: int):
    """First `length`+1 coefficients of 1/poly, exact (poly[0] = 1)."""
    inv = [CycloElem.one(poly[0].m)]
    for k in range(1, length + 1):
        acc = CycloElem.zero(poly[0].m)
        for j in range(1, min(k, len(poly) - 1) + 1):
            acc = acc + poly[j] * inv[k - j]
        inv.append(-acc)
    return inv


def _polymul_trunc(A, B, length: int):
    out = [CycloElem.zero(A[0].m) for _ in range(length + 1)]
    for i, a in enumerate(A):
        if i > length:
            break
        for j, b in enumerate(B):
            if i + j > length:
                break
            out[i + j] = out[i + j] + a * b
    return out


def rational_local_factor(
    C: SuperellipticCurve,
    p: int,
    tau: CharacterTau,
    length: int,
    bad_factor=None,
    seed: int = 0,
    ideal_factors=None,
) -> list:
    """Local factor at the rational prime p in T = p^(-s), truncated.

    Product over prime ideals above p of L_P(T^f); bad ideals contribute
    the user-supplied polynomial for p (default 1).  Good ideals above a
    partially-bad p still contribute their honest factors.
    """
    get = ideal_factors if ideal_factors is not None else local_factor
    out = [CycloElem.one(C.f[0].m)]
    for P in split_prime(p, C.m):
        if good_prime_test(C, P):
            if P.f > length:
                continue
            trunc = min(length // P.f, C.n - 1)
            lf = get(C, P, tau, trunc, seed)
            spread = [CycloElem.zero(C.f[0].m) for _ in range(P.f * lf.truncation + 1)]
            for i, cc in enumerate(lf.coeffs):
                spread[P.f * i] = cc
            out = _polymul_trunc(out, spread, length)
    if bad_factor is not None:
        out = _polymul_trunc(out, list(bad_factor), length)
    return out


def is_bad_prime(C: SuperellipticCurve, p: int) -> bool:
    return any(not good_prime_test(C, P) for P in split_prime(p, C.m))


def assemble_coeffs(
    C: SuperellipticCurve,
    tau: CharacterTau,
    N: int,
    bad_factors: dict | None = None,
    conductor: int = 1,
    seed: int = 0,
    threads: int = 1,
    ideal_factors=None,
) -> PieceLSeries:
    """a_1 .. a_N of the piece's Dirichlet series over Q, canonical embedding.

    bad_factors maps a rational prime to the coefficient list (CycloElem,
    in T = p^(-s)) that replaces the bad-ideal part of the local factor;
    unlisted bad primes get the trivial factor 1 (§-practice default,
    always overridable).
    """
    from sympy import primerange

    bad_factors = dict(bad_factors or {})
    sigma = ComplexEmbedding(C.m) if C.m > 2 else None

    def embed_c(x: CycloElem) -> complex:
        if sigma is None:
            return complex(x.a)
        return embed(x, sigma)

    primes = list(primerange(2, N + 1))

    def factor_for(p):
        length = int(math.log(N) / math.log(p) + 1e-9)
        bf = bad_factors.get(p) if is_bad_prime(C, p) else None
        poly = rational_local_factor(
            C, p, tau, length, bad_factor=bf, seed=seed ^ p, ideal_factors=ideal_factors
        )
        return p, [embed_c(x) for x in _inverse_series(poly, length)]

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as ex:
            ppow = dict(ex.map(factor_for, primes))
    else:
        ppow = dict(factor_for(p) for p in primes)

    # multiplicative expansion by smallest prime factor
    a = np.zeros(N + 1, dtype=np.complex128)
    a[1] = 1.0
    spf = np.zeros(N + 1, dtype=np.int64)
    for p in primes:
        sl = spf[p::p]
        sl[sl == 0] = p
        spf[p::p] = sl
    for n in range(2, N + 1):
        p = int(spf[n])
        r, k = n, 0
        while r % p == 0:
            r //= p
            k += 1
        a[n] = ppow[p][k] * a[r]
    series = PieceLSeries(a[1:], conductor, gamma_pairs(C), bad_factors=bad_factors)
    return series


# ---------------------------------------------------------------------------
# gamma factor and Mellin kernel


def gamma_complete(series: PieceLSeries, s: complex) -> complex:
    """gamma(s) = (N/pi^(2h))^(s/2) (Gamma(s/2) Gamma((s+1)/2))^h."""
    h = series.h
    lg = h * (loggamma(s / 2) + loggamma((s + 1) / 2))
    return complex(np.exp((s / 2) * math.log(series.conductor / math.pi ** (2 * h)) + lg))


def _kernel_weights(s: complex, h: int, c: float, step: float, height: float):
    """Contour nodes z and log-weights: term_k = exp(lw_k - z_k log u).

    Kept in log space because Gamma(s+c)^h overflows doubles for the
    saddle-following large-c bands.
    """
    y = np.arange(-height, height + step / 2, step)
    z = c + 1j * y
    lw = h * loggamma(s + z) - np.log(z) + math.log(step / (2 * math.pi))
    return z, lw


def mellin_kernel(h: int, conductor: float, s: complex, t, params: EvalParams | None = None):
    """G_s(t) for the completed gamma factor; vectorized over t > 0.

    G_s(t) -> gamma(s) as t -> 0+ and decays like exp(-h (kappa t)^(1/h)).

    The contour abscissa adapts to u = kappa t.  For u >= 1 it follows the
    saddle z* ~ u^(1/h), so the integrand itself carries the exponential
    decay instead of relying on cancellation (which would floor the result
    at machine epsilon times gamma(s)).  For u < 1 the line sits left of
    the z = 0 pole (picking up its residue Gamma(s)^h), which caps the
    integrand at O(u^d) -- the right contour would need u^(-c)-sized terms
    to cancel down to O(1).  Step and height adapt to |log u| to keep
    aliasing and truncation below the digit target throughout.
    """
    if params is None:
        params = EvalParams.for_digits(12, h)
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    if (t <= 0).any():
        raise ValueError("kernel argument must be positive")
    kappa = (2 * math.pi) ** h / math.sqrt(conductor)
    C0 = 2**h * math.pi ** (h / 2)
    pref = C0 * kappa ** (-s)
    guard = (params.digits + 6) * math.log(10)
    s_re = float(np.real(s))

    u = kappa * t
    logu = np.log(u)
    out = np.zeros(t.shape, dtype=np.complex128)

    # exp(-h u^(1/h)) below the double range: exactly 0 at our scale
    live = h * u ** (1.0 / h) < 700.0

    small = live & (logu < 0.0) & (s_re > 0.2)
    if small.any():
        sel = np.flatnonzero(small)
        d = min(s_re / 2, 0.75)  # strictly between the z = 0 and z = -s poles
        maxneg = float(-logu[sel].min())
        step = 2 * math.pi * d / (guard + d * maxneg)
        z, lw = _kernel_weights(s, h, -d, step, 1.3 * d + params.height)
        peak = float(np.max(np.real(lw)))
        terms = np.exp(lw - peak)
        residue = np.exp(h * loggamma(s))
        chunk = max(1, (1 << 22) // max(len(z), 1))
        for lo in range(0, len(sel), chunk):
            rows = sel[lo : lo + chunk]
            M = np.exp(-1j * np.outer(logu[rows], np.imag(z)))
            out[rows] = pref * (residue + np.exp(peak + d * logu[rows]) * (M @ terms))

    big = live & ~small
    if big.any():
        # contour through the saddle z* ~ u^(1/h) so the integrand's magnitude
        # at y = 0 matches the true value scale (no catastrophic cancellation)
        idx_live = np.flatnonzero(big)
        saddle = np.maximum(params.c, u[idx_live] ** (1.0 / h) - s_re)
        ratio = math.log(1.25)
        bands = np.ceil(np.log(saddle / params.c) / ratio - 1e-12).astype(np.int64)
        for b in np.unique(bands):
            sel = idx_live[bands == b]
            c_b = params.c * math.exp(ratio * float(b))
            llo, lhi = logu[sel].min(), logu[sel].max()
            maxabs = max(abs(llo), abs(lhi))
            step_b = 2 * math.pi / (guard / c_b + maxabs)
            height_b = 1.3 * c_b + params.height + (2 * c_b / (h * math.pi)) * max(0.0, -llo)
            z, lw = _kernel_weights(s, h, c_b, step_b, height_b)
            peak = float(np.max(np.real(lw)))
            terms = np.exp(lw - peak)  # all magnitudes <= 1
            chunk = max(1, (1 << 22) // max(len(z), 1))
            for lo in range(0, len(sel), chunk):
                rows = sel[lo : lo + chunk]
                # row r: exp(peak - c_b log u_r) * sum_k terms_k exp(-i y_k log u_r)
                M = np.exp(-1j * np.outer(logu[rows], np.imag(z)))
                expo = np.clip(peak - c_b * logu[rows], -745.0, 700.0)
                out[rows] = pref * np.exp(expo) * (M @ terms)
    return out


# ---------------------------------------------------------------------------
# evaluation


def _series_cutoff(series: PieceLSeries, digits: int, x: float = 1.0) -> int:
    """Index beyond which kernel terms are below the target scale."""
    h, kappa = series.h, series.kappa
    # solve h (kappa n / x)^(1/h) ~ (digits + 6) log 10 with a small polylog pad
    base = (digits + 6) * math.log(10)
    n = x * (base / h) ** h / kappa
    return max(8, int(n) + 1)


def _half_sum(series: PieceLSeries, coeffs, s: complex, x: float, params: EvalParams) -> complex:
    nmax = min(series.N, _series_cutoff(series, params.digits, x))
    n = np.arange(1, nmax + 1, dtype=np.float64)
    G = mellin_kernel(series.h, series.conductor, s, n / x, params)
    return complex(np.sum(coeffs[:nmax] * np.exp(-s * np.log(n)) * G))


def evaluate_lambda(
    series: PieceLSeries,
    s: complex,
    x: float = 1.0,
    params: EvalParams | None = None,
) -> complex:
    """Completed Lambda(s); requires the sign w (see solve_sign)."""
    if series.w is None:
        raise ValueError("sign not solved; call solve_sign first")
    if params is None:
        params = EvalParams.for_digits(10, series.h)
    need = _series_cutoff(series, params.digits, max(x, 1.0))
    if need > series.N:
        raise InsufficientCoefficients(
            f"need ~{need} coefficients for {params.digits} digits, have {series.N}"
        )
    A = _half_sum(series, series.coeffs, s, x, params)
    B = _half_sum(series, np.conj(series.coeffs), 2 - s, 1 / x, params)
    return A + series.w * B


def evaluate_l(series, s, params: EvalParams | None = None) -> complex:
    """L(s) = Lambda(s)/gamma(s)."""
    return evaluate_lambda(series, s, params=params) / gamma_complete(series, s)


def solve_sign(series: PieceLSeries, s0: complex = 1.3, params: EvalParams | None = None) -> complex:
    """w from the x-independence of Lambda(s0; x); |w| must be ~1.

    Lambda(s;x) = A(s,x) + w B(s,x) for every x, so two x-values pin w.
    A deviation of |w| from 1 signals a wrong conductor or bad factor.
    """
    if params is None:
        params = EvalParams.for_digits(10, series.h)
    x1, x2 = 1.15, 1 / 1.15
    A1 = _half_sum(series, series.coeffs, s0, x1, params)
    A2 = _half_sum(series, series.coeffs, s0, x2, params)
    B1 = _half_sum(series, np.conj(series.coeffs), 2 - s0, 1 / x1, params)
    B2 = _half_sum(series, np.conj(series.coeffs), 2 - s0, 1 / x2, params)
    if abs(B2 - B1) == 0:
        raise ZeroDivisionError("degenerate sign solve")
    w = (A1 - A2) / (B2 - B1)
    if abs(abs(w) - 1) > 1e-2:
        raise ValueError(f"|w| = {abs(w):.6f} is not 1: wrong conductor or bad factor")
    series.w = complex(w)
    return series.w


def fe_residual(series: PieceLSeries, params: EvalParams | None = None) -> float:
    """max_s |Lambda(s;x=1) - Lambda(s;x=1.25)| / max(1, |Lambda(s)|).

    By |w| = 1 duality this equals |Lambda(s) - w Lambda~(2-s)| with the
    two sides computed at dual smoothing parameters; identically zero
    only to the extent the data really satisfies the functional equation.
    """
    if params is None:
        params = EvalParams.for_digits(10, series.h)
    if series.w is None:
        solve_sign(series, params=params)
    worst = 0.0
    for s in (0.8, 1.0, 1.2, 1.5):
        l1 = evaluate_lambda(series, s, x=1.0, params=params)
        l2 = evaluate_lambda(series, s, x=1.25, params=params)
        worst = max(worst, abs(l1 - l2) / max(1.0, abs(l1)))
    return worst


# ---------------------------------------------------------------------------
# planning and search


def lcf_required(conductor: int, digits: int, h: int) -> int:
    """Smallest N with the kernel-tail estimate below 10^-digits.

    The tail model is sum_{n>N} |G_1(kappa n)| sqrt(n) davg(n) with
    davg(n) = (log n)^(2h-1)/(2h-1)! the divisor average governing
    |a_n| <= sqrt(n) d_2h(n); the sum is taken relative to the natural
    scale |gamma(1)| so `digits` means digits of Lambda.
    """
    kappa = (2 * math.pi) ** h / math.sqrt(conductor)
    params = EvalParams.for_digits(min(digits + 2, 16), h)
    # log grid out to where the kernel argument is far past the decay point
    top = 4.0 * ((digits + 10) * math.log(10) / h) ** h / kappa
    grid = np.unique(np.geomspace(1, top, 600).astype(np.int64))
    n = grid.astype(np.float64)
    G = np.abs(mellin_kernel(h, conductor, 1.0, n, params))
    davg = np.log(n + 2.0) ** (2 * h - 1) / math.factorial(2 * h - 1)
    w = G * np.sqrt(n) * davg
    # reverse trapezoid in n for the tail sums at each grid point
    seg = 0.5 * (w[1:] + w[:-1]) * np.diff(n)
    tails = np.concatenate([np.cumsum(seg[::-1])[::-1], [0.0]])
    scale = abs(gamma_complete(PieceLSeries(np.ones(1), conductor, h), 1.0))
    idx = np.searchsorted(-tails, -(10.0 ** (-digits)) * scale)
    idx = min(idx, len(grid) - 1)
    return max(1, int(grid[idx]))


def conductor_search(series: PieceLSeries, candidates, params: EvalParams | None = None):
    """fe_residual for each candidate conductor; best first.

    Returns a list of (conductor, residual) sorted ascending by residual;
    candidates whose sign solve fails score inf.  The caller can read the
    gap between the first two entries as the confidence margin.
    """
    results = []
    for cand in candidates:
        trial = series.with_conductor(int(cand))
        try:
            solve_sign(trial, params=params)
            res = fe_residual(trial, params=params)
        except (ValueError, InsufficientCoefficients):
            res = float("inf")
        results.append((int(cand), res))
    results.sort(key=lambda pair: pair[1])
    return results
