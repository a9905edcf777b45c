#!/usr/bin/env python3
"""Functional-equation sweep over conductor candidates for the Picard examples.

Assembles the piece's Dirichlet coefficients once per bad-factor variant
(memoized local factors shared across variants), then scores each candidate
conductor by the raw sign solve w (|w| should be 1) and the residual
max_s |Lambda(s; x=1) - Lambda(s; x=1.25)| / max(1, |Lambda|).

The "computed" variant replaces the factor at every countable bad ideal by
the zeta numerator of the singular fiber (the honest inertia-invariant
factor when the degeneration is unibranch); the "trivial" variant uses 1
at every bad prime.  The ramified prime above 3 is trivial in both.

Usage: python3 scripts/conductor_sweep.py --curve picard1 [--coeffs 45000]
       [--digits 6] [--exp3 9:15] [--lvalue]
"""

from __future__ import annotations

import argparse
import math
import sys
import time

import numpy as np
import sympy

sys.path.insert(0, "src")

from piecel.cyclo import CycloElem, zeta, split_prime
from piecel.counting import SuperellipticCurve, countable_prime_test, good_prime_test
from piecel.euler import CharacterTau, local_factor
from piecel.lseries import (
    EvalParams,
    InsufficientCoefficients,
    _half_sum,
    _polymul_trunc,
    _series_cutoff,
    assemble_coeffs,
    evaluate_l,
    evaluate_lambda,
    gamma_pairs,
)

Z = zeta(3)
ONE = CycloElem.one(3)
ZERO = CycloElem.zero(3)

CURVES = {
    "picard1": [Z - 2 * ONE, ZERO, Z, ONE, ONE],
    "picard2": [ZERO, ONE + Z, ZERO, -3 * ONE, ONE],
}


def memoized_local_factor():
    cache = {}

    def get(C, P, tau, trunc, seed):
        key = (P.p, P.zeta_image, tau.k, trunc)
        if key not in cache:
            cache[key] = local_factor(C, P, tau, trunc, seed=seed)
        return cache[key]

    return get


def bad_prime_data(C, N):
    """{p: (length, [bad ideals])} for rational primes with a bad ideal."""
    norm = abs(int(C.disc().norm())) * abs(int(C.f[-1].norm()))
    out = {}
    for p in sorted(sympy.factorint(norm)):
        bad = [P for P in split_prime(p, C.m) if not good_prime_test(C, P)]
        if bad:
            out[p] = (int(math.log(N) / math.log(p) + 1e-9), bad)
    return out


def computed_bad_factors(C, tau, bad_data, seed):
    """Special-fiber factors at every countable bad ideal, trivial otherwise."""
    factors = {}
    for p, (length, ideals) in bad_data.items():
        poly = [ONE]
        for P in ideals:
            if not countable_prime_test(C, P) or P.f > max(length, 0):
                continue
            trunc = min(length // P.f, C.n - 1)
            lf = local_factor(C, P, tau, trunc, seed=seed, strict=False)
            spread = [ZERO] * (P.f * lf.truncation + 1)
            for i, cc in enumerate(lf.coeffs):
                spread[P.f * i] = cc
            poly = _polymul_trunc(poly, spread, length)
        factors[p] = poly
    return factors


def score(series, cand, digits):
    """(|w|-1, residual) for one candidate conductor, sign solved raw."""
    params = EvalParams.for_digits(digits, series.h)
    trial = series.with_conductor(int(cand))
    need = _series_cutoff(trial, digits, 1.25)
    if need > trial.N:
        return None, None, need
    s0 = 1.3
    x1 = 1.15
    A1 = _half_sum(trial, trial.coeffs, s0, x1, params)
    A2 = _half_sum(trial, trial.coeffs, s0, 1 / x1, params)
    B1 = _half_sum(trial, np.conj(trial.coeffs), 2 - s0, 1 / x1, params)
    B2 = _half_sum(trial, np.conj(trial.coeffs), 2 - s0, x1, params)
    if abs(B2 - B1) == 0:
        return None, None, need
    w = (A1 - A2) / (B2 - B1)
    trial.w = complex(w)
    worst = 0.0
    for s in (0.8, 1.0, 1.2, 1.5):
        l1 = evaluate_lambda(trial, s, x=1.0, params=params)
        l2 = evaluate_lambda(trial, s, x=1.25, params=params)
        worst = max(worst, abs(l1 - l2) / max(1.0, abs(l1)))
    return w, worst, need


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--curve", choices=sorted(CURVES), default="picard1")
    ap.add_argument("--coeffs", type=int, default=45000)
    ap.add_argument("--digits", type=int, default=6)
    ap.add_argument("--exp3", default="9:15", help="lo:hi range of 3-exponents")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--lvalue", action="store_true", help="print L(1) for each finite row")
    args = ap.parse_args()

    C = SuperellipticCurve(3, CURVES[args.curve])
    tau = CharacterTau(3, 1)
    N = args.coeffs
    t0 = time.time()

    bad_data = bad_prime_data(C, N)
    disc = C.disc()
    print(f"curve {args.curve}: disc = {disc}, norm = {sympy.factorint(abs(int(disc.norm())))}")
    for p, (length, ideals) in bad_data.items():
        print(f"  bad p={p}: ideals {[(P.p, P.zeta_image) for P in ideals]} length {length}")

    get = memoized_local_factor()
    variants = {}
    comp = computed_bad_factors(C, tau, bad_data, args.seed)
    print("computed bad factors:", {p: [str(c) for c in poly] for p, poly in comp.items()})
    for name, bf in (("computed", comp), ("trivial", {})):
        t1 = time.time()
        variants[name] = assemble_coeffs(
            C, tau, N, bf, conductor=1, seed=args.seed, ideal_factors=get
        )
        print(f"assembled {name}: {N} coeffs in {time.time() - t1:.1f}s")

    lo, hi = (int(v) for v in args.exp3.split(":"))
    nonthree = sorted(
        {1}
        | {
            int(d)
            for p in bad_data
            if p != 3
            for d in sympy.divisors(p ** max(2 * (C.n - 1), 4))
            if d > 1 and d <= 10**4
        }
        | {int(a * b) for a in bad_data for b in bad_data if a != 3 and b != 3 and a < b}
    )
    cands = sorted(3**e * d for e in range(lo, hi + 1) for d in nonthree)

    print(f"\nsweep at D={args.digits} with N={N} ({time.time() - t0:.0f}s setup)")
    print(f"{'conductor':>22} {'variant':>9} {'|w|-1':>10} {'residual':>10}")
    rows = []
    for name, series in variants.items():
        for cand in cands:
            w, res, need = score(series, cand, args.digits)
            if w is None:
                continue
            rows.append((res, cand, name, w, need))
            print(f"{cand:>22} {name:>9} {abs(w) - 1:>10.2e} {res:>10.2e}")
    rows.sort()
    print("\nbest:")
    for res, cand, name, w, need in rows[:5]:
        f3 = 0
        c = cand
        while c % 3 == 0:
            c //= 3
            f3 += 1
        line = f"  N = 3^{f3}*{c} ({name}): residual {res:.3e}, w = {w:.6f}, cutoff {need}"
        if args.lvalue:
            series = variants[name].with_conductor(int(cand))
            series.w = w / abs(w)
            params = EvalParams.for_digits(args.digits, series.h)
            line += f", L(1) = {evaluate_l(series, 1.0, params=params):.10f}"
        print(line)


if __name__ == "__main__":
    main()
