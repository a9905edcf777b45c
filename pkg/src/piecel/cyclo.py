"""Exact arithmetic in the cyclotomic fields Q(zeta_m), m in {1, 2, 3, 4}.

Elements are stored on the power basis 1, z (z = zeta_m) with Fraction
coordinates, reduced by the cyclotomic polynomial:

    Phi_3 = z^2 + z + 1   (z^2 -> -1 - z)
    Phi_4 = z^2 + 1       (z^2 -> -1)

For m <= 2 the field is Q itself (phi(m) = 1) and z is the rational 1 or -1.

The module also knows how rational primes split in Z[zeta_m] (split_prime),
how to reduce elements into the residue fields (reduce_mod), and how to
embed elements into C (embed).  Residue-field elements are encoded as
integers: an element a0 + a1*w of F_{p^2} = F_p[w]/(Phi_m) is the integer
a0 + a1*p, and elements of a prime field are ordinary residues.
"""

from __future__ import annotations

import cmath
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from sympy.ntheory.residue_ntheory import sqrt_mod


class BadReductionError(ValueError):
    """A denominator is divisible by p: the element does not reduce mod p."""


def _phi(m: int) -> int:
    return 1 if m <= 2 else 2


class CycloElem:
    """An element of Q(zeta_m), immutable."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m, coeffs):
        if not 1 <= m <= 4:
            raise ValueError(f"unsupported cyclotomy index m={m}")
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != _phi(m):
            raise ValueError(f"need {_phi(m)} coordinates for m={m}, got {len(coeffs)}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *a):
        raise AttributeError("CycloElem is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def of(m, a, b=0):
        """The element a + b*zeta_m."""
        if _phi(m) == 1:
            if b:
                a = Fraction(a) + Fraction(b) * (1 if m == 1 else -1)
            return CycloElem(m, (a,))
        return CycloElem(m, (a, b))

    @staticmethod
    def zero(m):
        return CycloElem.of(m, 0)

    @staticmethod
    def one(m):
        return CycloElem.of(m, 1)

    # -- coordinate access -------------------------------------------------

    @property
    def a(self) -> Fraction:
        return self.coeffs[0]

    @property
    def b(self) -> Fraction:
        return self.coeffs[1] if len(self.coeffs) == 2 else Fraction(0)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return self.b == 0

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    # -- ring structure ----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CycloElem):
            if other.m != self.m:
                raise ValueError(f"mismatched cyclotomy indices {self.m} and {other.m}")
            return other
        if isinstance(other, (int, Fraction)):
            return CycloElem.of(self.m, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CycloElem(self.m, tuple(x + y for x, y in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycloElem(self.m, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if _phi(self.m) == 1:
            return CycloElem(self.m, (self.a * o.a,))
        a, b, c, d = self.a, self.b, o.a, o.b
        # (a + b z)(c + d z) = ac + (ad + bc) z + bd z^2
        if self.m == 3:  # z^2 = -1 - z
            return CycloElem(3, (a * c - b * d, a * d + b * c - b * d))
        return CycloElem(4, (a * c - b * d, a * d + b * c))

    __rmul__ = __mul__

    def conjugate(self):
        """Complex conjugation, i.e. the nontrivial Galois map zeta -> zeta^{-1}."""
        if _phi(self.m) == 1:
            return self
        a, b = self.a, self.b
        if self.m == 3:  # conj(z) = z^2 = -1 - z
            return CycloElem(3, (a - b, -b))
        return CycloElem(4, (a, -b))

    def galois(self, s: int):
        """The field automorphism zeta -> zeta^s, for s coprime to m."""
        if gcd(s, self.m) != 1:
            raise ValueError(f"s={s} not coprime to m={self.m}")
        return self if s % self.m == 1 % self.m else self.conjugate()

    def norm(self) -> Fraction:
        """Norm to Q: x * conj(x) for the quadratic fields, x itself for Q."""
        if _phi(self.m) == 1:
            return self.a
        a, b = self.a, self.b
        return a * a - a * b + b * b if self.m == 3 else a * a + b * b

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of 0 in Q(zeta_m)")
        if _phi(self.m) == 1:
            return CycloElem(self.m, (1 / self.a,))
        n = self.norm()
        return CycloElem(self.m, tuple(c / n for c in self.conjugate().coeffs))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = CycloElem.one(self.m)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloElem.of(self.m, other)
        return (
            isinstance(other, CycloElem)
            and self.m == other.m
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.m, self.coeffs))

    def __repr__(self):
        return f"CycloElem({self.m}, {cyclo_to_str(self)!r})"


def zeta(m: int) -> CycloElem:
    """zeta_m itself as a CycloElem."""
    if m == 1:
        return CycloElem.of(1, 1)
    if m == 2:
        return CycloElem.of(2, -1)
    return CycloElem(m, (0, 1))


def cyclo_arith(a: CycloElem, b: CycloElem, op: str) -> CycloElem:
    """Named entry point for the four field operations."""
    try:
        fn = {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__, "div": a.__truediv__}[op]
    except KeyError:
        raise ValueError(f"unknown op {op!r}") from None
    return fn(b)


# -- text encoding ----------------------------------------------------------
#
# "a/b + c/d*z" with z = zeta_m; e.g. "1 - 2*z", "z", "-1/3", "0".

_TERM_RE = re.compile(
    r"""^\s*
        (?:(?P<num>-?\d+)(?:/(?P<den>\d+))?)?   # optional rational part
        (?:\s*(?P<star>\*)?\s*(?P<z>z))?        # optional z
        \s*$""",
    re.VERBOSE,
)


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def cyclo_to_str(x: CycloElem) -> str:
    a, b = x.a, x.b
    if a == 0 and b == 0:
        return "0"
    parts = []
    if a != 0:
        parts.append(_frac_str(a))
    if b != 0:
        mag = "z" if abs(b) == 1 else f"{_frac_str(abs(b))}*z"
        if parts:
            parts.append(("+ " if b > 0 else "- ") + mag)
        else:
            parts.append(mag if b > 0 else "-" + mag)
    return " ".join(parts)


def cyclo_from_str(s: str, m: int) -> CycloElem:
    """Parse "a/b + c/d*z".  Inverse of cyclo_to_str for every CycloElem."""
    text = s.strip()
    if not text:
        raise ValueError("empty CycloElem string")
    # split into signed terms at top level
    terms = re.findall(r"[+-]?[^+-]+", text.replace(" ", ""))
    a = Fraction(0)
    b = Fraction(0)
    for term in terms:
        sign = 1
        body = term
        while body and body[0] in "+-":
            if body[0] == "-":
                sign = -sign
            body = body[1:]
        mt = _TERM_RE.match(body)
        if not mt or (mt.group("num") is None and mt.group("z") is None):
            raise ValueError(f"cannot parse CycloElem term {term!r} in {s!r}")
        coeff = Fraction(1)
        if mt.group("num") is not None:
            coeff = Fraction(int(mt.group("num")), int(mt.group("den") or 1))
        if mt.group("z"):
            b += sign * coeff
        else:
            a += sign * coeff
    if _phi(m) == 1 and b != 0:
        zval = 1 if m == 1 else -1
        a, b = a + b * zval, Fraction(0)
    return CycloElem.of(m, a, b)


# -- prime ideals -----------------------------------------------------------


@dataclass(frozen=True)
class PrimeIdeal:
    """A prime ideal of Z[zeta_m] above the rational prime p.

    zeta_image is the reduction of zeta_m into the residue field F_q under
    the integer encoding described in the module docstring.  For an inert
    prime the residue field is presented as F_p[w]/(Phi_m) and zeta_image
    is w itself (the integer p); `modulus` stores the ascending coefficients
    of that quadratic.  e is the ramification index.
    """

    p: int
    f: int
    q: int
    zeta_image: int
    ramified: bool = False
    e: int = 1
    modulus: tuple | None = None
    m: int = 1

    def __repr__(self):
        tag = "ram" if self.ramified else f"zeta={self.zeta_image}"
        return f"PrimeIdeal(p={self.p}, f={self.f}, {tag})"


def split_prime(p: int, m: int) -> list[PrimeIdeal]:
    """All prime ideals of Z[zeta_m] above p, with residue data.

    Sum of e*f over the returned ideals is phi(m); unramified ideals have
    q = 1 mod m, and zeta_image has exact order m in F_q^x.
    """
    if not 1 <= m <= 4:
        raise ValueError(f"unsupported m={m}")
    if m <= 2:
        # the field is Q; zeta_2 = -1 reduces to p-1 (to 1 when p = 2)
        img = 1 if m == 1 else (p - 1) % p
        return [PrimeIdeal(p, 1, p, img, m=m)]
    if m == 3:
        if p == 3:
            return [PrimeIdeal(3, 1, 3, 1, ramified=True, e=2, m=3)]
        if p % 3 == 1:
            roots = sorted(sqrt_mod(-3, p, all_roots=True))
            imgs = sorted(((-1 + s) * pow(2, -1, p)) % p for s in roots)
            return [PrimeIdeal(p, 1, p, r, m=3) for r in imgs]
        return [PrimeIdeal(p, 2, p * p, p, modulus=(1, 1, 1), m=3)]
    # m == 4
    if p == 2:
        return [PrimeIdeal(2, 1, 2, 1, ramified=True, e=2, m=4)]
    if p % 4 == 1:
        imgs = sorted(sqrt_mod(-1, p, all_roots=True))
        return [PrimeIdeal(p, 1, p, r, m=4) for r in imgs]
    return [PrimeIdeal(p, 2, p * p, p, modulus=(1, 0, 1), m=4)]


def reduce_mod(x: CycloElem, P: PrimeIdeal) -> int:
    """Image of x in the residue field of P (integer encoding).

    Raises BadReductionError when a denominator is divisible by p —
    the caller is looking at a prime of bad reduction for its context.
    """
    p = P.p
    digits = []
    for c in x.coeffs:
        if c.denominator % p == 0:
            raise BadReductionError(f"denominator of {cyclo_to_str(x)} not invertible mod {p}")
        digits.append(c.numerator * pow(c.denominator, -1, p) % p)
    a0 = digits[0]
    a1 = digits[1] if len(digits) == 2 else 0
    if P.f == 1:
        return (a0 + a1 * P.zeta_image) % p
    return a0 + p * a1  # zeta_image is w = (0,1), so a0 + a1*w encodes directly


# -- complex embeddings ------------------------------------------------------


@dataclass(frozen=True)
class ComplexEmbedding:
    """The embedding zeta_m -> exp(+-2 pi i/m); conjugate=True is sigma-bar."""

    m: int
    conjugate: bool = False

    @property
    def zeta_value(self) -> complex:
        sign = -1 if self.conjugate else 1
        return cmath.exp(sign * 2j * cmath.pi / self.m)


def embed(x: CycloElem, e: ComplexEmbedding) -> complex:
    if x.m != e.m:
        raise ValueError("embedding index does not match element")
    return complex(x.a) + complex(x.b) * e.zeta_value
