"""Recognition of small cyclotomic rationals from complex doubles.

A complex value z expected to lie in Q(omega), omega in {i, zeta_3} -- or in
Q itself for the quadratic case -- is matched against the finite grid
(a + b*omega)/c, |a|, |b| <= bound_a, 1 <= c <= bound_c, by plain exhaustion:
about 1.7e5 candidates at the default bounds 16 and 160, far too few to
justify lattice reduction, and exhaustion is complete by construction.  The
result is the global minimizer of |z - (a + b*omega)/c| with deterministic
tie-breaking (smallest c, then lexicographic (a, b)), returned gcd-reduced
with c > 0.

A result is *certified* when the achieved error beats 1/c^4.  The
certificate is re-derived in exact rational arithmetic from the binary64
bits of z (no floating re-rounding): for omega = zeta_3 the one irrational
ingredient sqrt(3) is enclosed in a rational interval of width 1e-30 and the
squared error, convex in that variable, is bounded by its endpoint values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = [
    "OMEGA",
    "RecognitionResult",
    "canonical_associate",
    "omega_for_exponent",
    "recognize",
    "certify_exact",
]

OMEGA: dict[str, complex] = {
    "i": 1j,
    "zeta3": complex(-0.5, math.sqrt(3) / 2),
    "none": 0j,
}


def omega_for_exponent(m: int) -> str:
    """The recognition generator attached to y^m: i, zeta_3, or nothing."""
    if m == 4:
        return "i"
    if m == 3:
        return "zeta3"
    if m == 2:
        return "none"
    raise ValueError(f"no recognition field for exponent m={m}")


def canonical_associate(z: complex, m: int) -> complex:
    """Rotate z by a torsion unit of Z[omega] into a fixed angular window.

    Period determinants (and hence period quotients) are only pinned down
    modulo the unit group -- {+-zeta_3^j} for m = 3, {i^j} for m = 4, {+-1}
    for m = 2.  Each unit orbit meets the half-open windows below exactly
    once, so this choice of associate is canonical:

        m = 3:  arg in [2pi/3, pi)      (six sectors of pi/3)
        m = 4:  arg in (-pi/2, 0]       (four sectors of pi/2)
        m = 2:  Re > 0, or Re == 0 and Im >= 0
    """
    if z == 0:
        return z
    if m == 2:
        if z.real > 0 or (z.real == 0 and z.imag >= 0):
            return z
        return -z
    if m == 3:
        units = [(-1) ** s * OMEGA["zeta3"] ** j for s in range(2) for j in range(3)]
        lo, hi = 2 * math.pi / 3, math.pi
    elif m == 4:
        units = [1j ** j for j in range(4)]
        lo, hi = -math.pi / 2, 0.0
    else:
        raise ValueError(f"no unit normalization for exponent m={m}")
    for u in units:
        w = z * u
        a = math.atan2(w.imag, w.real)
        if (lo < a < hi) or (m == 3 and a == lo) or (m == 4 and a == hi):
            return w
    # arg sits within an ulp of a sector boundary; fall back to the candidate
    # nearest the window centre, ties broken on (Re, Im) so the choice does
    # not depend on which orbit element we started from
    centre = (lo + hi) / 2

    def key(u: complex) -> tuple[float, float, float]:
        w = z * u
        d = abs(math.remainder(math.atan2(w.imag, w.real) - centre, 2 * math.pi))
        return (d, -w.real, -w.imag)

    return z * min(units, key=key)


@dataclass(frozen=True)
class RecognitionResult:
    """(a + b*omega)/c with the achieved error and its certification bit."""

    a: int
    b: int
    c: int
    omega: str
    error: float
    certified: bool

    @property
    def value(self) -> complex:
        return (self.a + self.b * OMEGA[self.omega]) / self.c


def recognize(
    z: complex,
    omega: str,
    bound_a: int = 16,
    bound_c: int = 160,
) -> RecognitionResult:
    """Best (a + b*omega)/c approximation to z over the bounded grid.

    Exhaustive minimizer of the absolute error; ties resolved toward the
    smallest c and then the lexicographically smallest (a, b).  Never
    raises on poor fits -- an uncertified result simply carries
    certified=False.
    """
    if omega not in OMEGA:
        raise ValueError(f"unknown omega type {omega!r}")
    if bound_a < 1 or bound_c < 1:
        raise ValueError("bounds must be positive")
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError("cannot recognize a non-finite value")

    w = OMEGA[omega]
    a = np.arange(-bound_a, bound_a + 1)
    b = np.arange(-bound_a, bound_a + 1) if omega != "none" else np.array([0])
    c = np.arange(1, bound_c + 1)
    # scan order realizes the tie-break: c-major, then a, then b, and
    # argmin keeps the first occurrence of the minimum.
    numerators = (a[:, None] + b[None, :] * w).ravel()
    err = np.abs(numerators[None, :] / c[:, None] - z)
    flat = int(np.argmin(err))
    ci, ni = divmod(flat, numerators.size)
    ai, bi = divmod(ni, b.size)
    ra, rb, rc = int(a[ai]), int(b[bi]), int(c[ci])

    g = math.gcd(math.gcd(abs(ra), abs(rb)), rc)
    ra, rb, rc = ra // g, rb // g, rc // g
    achieved = float(abs((ra + rb * w) / rc - z))
    return RecognitionResult(
        ra, rb, rc, omega, achieved, certify_exact(z, ra, rb, rc, omega)
    )


_SQRT3_LO = Fraction(math.isqrt(3 * 10**60), 10**30)
_SQRT3_HI = _SQRT3_LO + Fraction(1, 10**30)


def certify_exact(z: complex, a: int, b: int, c: int, omega: str) -> bool:
    """Exact-arithmetic verdict on |z - (a + b*omega)/c| < 1/c^4.

    The real and imaginary binary64 parts of z convert to Fractions without
    rounding, so the comparison is exact for omega in {i, none}; for
    omega = zeta_3 the squared error is a convex quadratic in sqrt(3) and is
    bounded above by its values at the ends of a rational enclosure of
    sqrt(3), making the True verdict sound.
    """
    x, y = Fraction(z.real), Fraction(z.imag)
    bound = Fraction(1, c**8)
    if omega == "i":
        e2 = (x - Fraction(a, c)) ** 2 + (y - Fraction(b, c)) ** 2
        return e2 < bound
    if omega == "none":
        if b != 0:
            raise ValueError("rational recognition carries no omega part")
        e2 = (x - Fraction(a, c)) ** 2 + y * y
        return e2 < bound
    if omega == "zeta3":
        u = x - Fraction(2 * a - b, 2 * c)

        def e2(s: Fraction) -> Fraction:
            return u * u + (y - Fraction(b, 2 * c) * s) ** 2

        return max(e2(_SQRT3_LO), e2(_SQRT3_HI)) < bound
    raise ValueError(f"unknown omega type {omega!r}")
