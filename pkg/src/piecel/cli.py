"""Command-line driver chaining the pipeline end to end.

    piecel factor|coeffs|checkfe|lvalue|periods|deligne|oracle|condsearch
           --config <path> [--primes B] [--digits D] [--cache <path>]
           [--threads T] [--seed S]

Exit codes: 0 success; 2 when `deligne` fails to certify the recognized
value; 3 when `checkfe` exceeds the residual threshold 10^-(digits-2).
"""

from __future__ import annotations

import argparse
import sys
import time

import sympy

from .config import CurveConfig, FactorCache, load_config
from .counting import good_prime_test
from .cyclo import CycloElem, cyclo_to_str, split_prime
from .euler import CharacterTau, full_curve_numerator, local_factor
from .lseries import (
    EvalParams,
    InsufficientCoefficients,
    assemble_coeffs,
    conductor_search,
    evaluate_l,
    fe_residual,
    gamma_pairs,
    solve_sign,
)
from .periods import deligne_period, period_assembly
from .recognize import canonical_associate, omega_for_exponent, recognize

__all__ = ["main"]


def _parse_args(argv):
    top = argparse.ArgumentParser(prog="piecel", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)
    for name, helptext in [
        ("factor", "exact local factors for primes up to the bound"),
        ("coeffs", "Dirichlet coefficients of the piece"),
        ("checkfe", "functional-equation residual report"),
        ("lvalue", "L(1) by the smoothed approximate functional equation"),
        ("periods", "period determinants of the character pieces"),
        ("deligne", "recognize L(1)/Omega as (a + b*omega)/c"),
        ("oracle", "verify the product of pieces against the zeta numerator"),
        ("condsearch", "rank candidate conductors by residual"),
    ]:
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", required=True, help="curve config JSON")
        p.add_argument("--primes", type=int, default=50, help="prime bound")
        p.add_argument("--digits", type=int, default=None, help="digit target")
        p.add_argument("--cache", default=None, help="Euler-factor cache file")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--seed", type=int, default=None)
    return top.parse_args(argv)


def _build_series(cfg: CurveConfig, threads: int, conductor: int | None = None):
    C = cfg.curve()
    tau = cfg.tau()
    h = gamma_pairs(C)
    if conductor is None:
        conductor = cfg.pinned_conductor()
    N = cfg.coefficient_count(h)
    return assemble_coeffs(
        C, tau, N, cfg.bad_primes, conductor=conductor,
        seed=cfg.seed, threads=threads,
    )


def _good_ideals(C, bound: int):
    for p in sympy.primerange(2, bound + 1):
        for P in split_prime(p, C.m):
            if good_prime_test(C, P):
                yield P


# ---------------------------------------------------------------------------
# commands


def cmd_factor(cfg: CurveConfig, args) -> int:
    C = cfg.curve()
    tau = cfg.tau()
    cache = FactorCache(args.cache, m=cfg.m)
    print(f"# local factors, k = {tau.k}, primes <= {args.primes}")
    print("# p f zeta k : c_0 | c_1 | ...   (origin)")
    for p in sympy.primerange(2, args.primes + 1):
        for P in split_prime(p, cfg.m):
            key = FactorCache.key(P, tau.k)
            if not good_prime_test(C, P):
                if p in cfg.bad_primes:
                    poly = " | ".join(cyclo_to_str(c) for c in cfg.bad_primes[p])
                    origin, body = "user-supplied", poly
                else:
                    origin, body = "default", "1"
                head = " ".join(str(v) for v in key)
                print(f"{head} : {body}   ({origin})")
                continue
            coeffs = cache.get(P, tau.k)
            if coeffs is None:
                lf = local_factor(C, P, tau, C.n - 1, seed=cfg.seed)
                coeffs = lf.coeffs
                cache.put(P, tau.k, coeffs)
            line = FactorCache.format_line(key, coeffs).rstrip("\n")
            print(f"{line}   (computed)")
    return 0


def cmd_coeffs(cfg: CurveConfig, args) -> int:
    series = _build_series(cfg, args.threads)
    print(f"# {series.N} coefficients, conductor {series.conductor}")
    for n, a in enumerate(series.coeffs, start=1):
        print(f"{n} {a.real:+.15e} {a.imag:+.15e}")
    return 0


def cmd_checkfe(cfg: CurveConfig, args) -> int:
    series = _build_series(cfg, args.threads)
    params = EvalParams.for_digits(cfg.digits, series.h)
    threshold = 10.0 ** (-(cfg.digits - 2))
    print(f"conductor   {series.conductor}")
    print(f"coefficients {series.N}")
    try:
        w = solve_sign(series, params=params)
        res = fe_residual(series, params=params)
    except (ValueError, InsufficientCoefficients) as exc:
        print(f"sign solve failed: {exc}")
        print("verdict     FAIL")
        return 3
    print(f"sign w      {w.real:+.12f} {w.imag:+.12f}i")
    print(f"|w| - 1     {abs(w) - 1:+.3e}")
    print(f"residual    {res:.6e}")
    print(f"threshold   {threshold:.1e}")
    ok = res < threshold
    print(f"verdict     {'PASS' if ok else 'FAIL'}")
    return 0 if ok else 3


def cmd_lvalue(cfg: CurveConfig, args) -> int:
    series = _build_series(cfg, args.threads)
    params = EvalParams.for_digits(cfg.digits, series.h)
    solve_sign(series, params=params)
    val = evaluate_l(series, 1.0, params=params)
    print(f"L(1) = {val.real:+.12f} {val.imag:+.12f}i")
    return 0


def cmd_periods(cfg: CurveConfig, args) -> int:
    C = cfg.curve()
    assembly = period_assembly(C)
    for k in range(1, cfg.m):
        om = assembly.deligne(k)
        print(f"Omega(tau_{k}) = {om.real:+.12e} {om.imag:+.12e}i")
    return 0


def cmd_deligne(cfg: CurveConfig, args) -> int:
    t0 = time.time()
    series = _build_series(cfg, args.threads)
    params = EvalParams.for_digits(cfg.digits, series.h)
    solve_sign(series, params=params)
    res = fe_residual(series, params=params)
    lval = evaluate_l(series, 1.0, params=params)
    C = cfg.curve()
    om = deligne_period(C, cfg.k)
    z = lval / om
    zc = canonical_associate(z, cfg.m)
    r = recognize(zc, omega_for_exponent(cfg.m))
    print(f"conductor    {series.conductor}")
    print(f"coefficients {series.N}")
    print(f"fe residual  {res:.3e}  (digit target {cfg.digits})")
    print(f"L(1)         {lval.real:+.12f} {lval.imag:+.12f}i")
    print(f"Omega        {om.real:+.12e} {om.imag:+.12e}i")
    print(f"z = L/Omega  {z.real:+.12e} {z.imag:+.12e}i")
    print(f"canonical z  {zc.real:+.12e} {zc.imag:+.12e}i")
    print(f"recognized   (a, b, c) = ({r.a}, {r.b}, {r.c}), omega = {r.omega}")
    print(f"error        {r.error:.3e}")
    print(f"bound 1/c^4  {1.0 / r.c**4:.3e}")
    print(f"certified    {r.certified}")
    print(f"elapsed      {time.time() - t0:.1f}s")
    return 0 if r.certified else 2


def cmd_oracle(cfg: CurveConfig, args) -> int:
    C = cfg.curve()
    failures = 0
    checked = 0
    for P in _good_ideals(C, args.primes):
        try:
            num = full_curve_numerator(C, P, seed=cfg.seed)
        except ValueError as exc:  # oracle budget
            print(f"p={P.p} f={P.f} zeta={0 if P.ramified else P.zeta_image}: SKIP ({exc})")
            continue
        prod = [CycloElem.one(cfg.m)]
        for k in range(1, cfg.m):
            lf = local_factor(C, P, CharacterTau(cfg.m, k), C.n - 1, seed=cfg.seed)
            prod = _polymul(prod, list(lf.coeffs))
        ok = len(prod) == len(num) and all(
            c.is_rational() and c.is_integral() and int(c.a) == v
            for c, v in zip(prod, num)
        )
        checked += 1
        failures += not ok
        print(f"p={P.p} f={P.f} zeta={0 if P.ramified else P.zeta_image}: "
              f"{'PASS' if ok else 'FAIL'}")
    print(f"# {checked} ideals checked, {failures} failures")
    return 0 if failures == 0 else 1


def _polymul(A, B):
    out = [A[0] - A[0] for _ in range(len(A) + len(B) - 1)]
    for i, a in enumerate(A):
        for j, b in enumerate(B):
            out[i + j] = out[i + j] + a * b
    return out


def cmd_condsearch(cfg: CurveConfig, args) -> int:
    candidates = cfg.conductor_candidates()
    series = _build_series(cfg, args.threads, conductor=max(candidates))
    params = EvalParams.for_digits(cfg.digits, series.h)
    ranked = conductor_search(series, candidates, params=params)
    print(f"# {len(candidates)} candidates, {series.N} coefficients")
    for cond, resid in ranked:
        fact = sympy.factorint(cond)
        shape = " * ".join(f"{p}^{e}" for p, e in sorted(fact.items())) or "1"
        print(f"{cond}  ({shape})  residual {resid:.6e}")
    best = ranked[0][0]
    print(f"best {best}")
    return 0


def main(argv=None) -> int:
    args = _parse_args(sys.argv[1:] if argv is None else argv)
    cfg = load_config(args.config)
    cfg = cfg.with_overrides(digits=args.digits, seed=args.seed)
    handler = {
        "factor": cmd_factor,
        "coeffs": cmd_coeffs,
        "checkfe": cmd_checkfe,
        "lvalue": cmd_lvalue,
        "periods": cmd_periods,
        "deligne": cmd_deligne,
        "oracle": cmd_oracle,
        "condsearch": cmd_condsearch,
    }[args.command]
    return handler(cfg, args)


if __name__ == "__main__":
    raise SystemExit(main())
