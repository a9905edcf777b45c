"""Arithmetic in F_q and its extensions, and m-th-power residue classes.

Elements of F_{p^d} = F_p[x]/(h(x)) are encoded as integers in [0, p^d):
the element sum(digits[k] * x^k) is the integer sum(digits[k] * p^k).
Bulk arithmetic works on numpy "digit matrices" of shape (N, d) so that
point counting can stream millions of elements through Horner evaluation.

The m-th-power class of a in F_q^x is the exponent c in

    a^((q-1)/m) = eta^c,

where eta is the distinguished primitive m-th root of unity of the field
(the reduction of zeta_m supplied by the prime ideal).  Classes determine
fiber sizes of y -> y^m: the equation y^m = a has m solutions when the
class is 0, none otherwise, and exactly one when a = 0.

PowerClassTable materializes the class of every field element in one O(q)
pass: powers of a generator g are enumerated by chunked ladder products,
giving cls(g^t) = u*t mod m with the fixed relabeling eta^u = g^((q-1)/m).
"""

from __future__ import annotations

import numpy as np
from sympy import GF, Poly, factorint
from sympy.abc import x as _sym_x

from .cyclo import PrimeIdeal

_LADDER_CHUNK = 1 << 18


class FieldExt:
    """F_{p^d} with vectorized digit arithmetic (see module docstring)."""

    def __init__(self, p: int, d: int, modulus: tuple, gen: int | None = None):
        self.p = p
        self.d = d
        self.q = p**d
        self.modulus = modulus  # ascending, monic: h = sum(modulus[k] x^k), len d+1
        self.gen = gen  # a generator of F_q^x (filled by build_extension)
        self._pow_basis = p ** np.arange(d, dtype=np.int64)
        # reduction rows: x^(d+k) = sum_j R[k, j] x^j, k = 0..d-2
        if d > 1:
            rows = []
            row = (-np.array(modulus[:d], dtype=np.int64)) % p
            rows.append(row.copy())
            for _ in range(d - 2):
                shifted = np.roll(row, 1)
                carry = row[-1]
                shifted[0] = 0
                row = (shifted + carry * rows[0]) % p
                rows.append(row.copy())
            self._red = np.array(rows, dtype=np.int64)
        else:
            self._red = np.zeros((0, 1), dtype=np.int64)

    # -- encoding ----------------------------------------------------------

    def decode(self, ints):
        """Integer encoding -> digit matrix of shape (N, d)."""
        ints = np.asarray(ints, dtype=np.int64)
        out = np.empty(ints.shape + (self.d,), dtype=np.int64)
        rest = ints
        for k in range(self.d):
            out[..., k] = rest % self.p
            rest = rest // self.p
        return out

    def encode(self, digits):
        return np.asarray(digits, dtype=np.int64) @ self._pow_basis

    # -- bulk arithmetic -----------------------------------------------------

    def _reduce_conv(self, conv):
        """Reduce a convolution of shape (N, 2d-1) by the modulus, mod p."""
        d = self.d
        if d == 1:
            return conv % self.p
        low = conv[:, :d]
        high = conv[:, d:]
        return (low + high @ self._red) % self.p

    def mul(self, A, B):
        """Elementwise product of two digit matrices."""
        d = self.d
        if d == 1:
            return (A * B) % self.p
        N = A.shape[0]
        conv = np.zeros((N, 2 * d - 1), dtype=np.int64)
        for j in range(d):
            conv[:, j : j + d] += A[:, j : j + 1] * B
        return self._reduce_conv(conv)

    def scalar_matrix(self, s: int):
        """d x d matrix M with digits(s*a) = digits(a) @ M."""
        srow = self.decode(np.array([s]))[0]
        rows = [srow]
        for _ in range(self.d - 1):
            prev = rows[-1]
            shifted = np.roll(prev, 1)
            carry = prev[-1]
            shifted[0] = 0
            if self.d > 1:
                shifted = (shifted + carry * self._red[0]) % self.p
            rows.append(shifted)
        return np.array(rows, dtype=np.int64) % self.p

    def mul_by_scalar(self, A, s: int):
        """Digit matrix times the fixed element s."""
        if self.d == 1:
            return (A * (s % self.p)) % self.p
        return (A @ self.scalar_matrix(s)) % self.p

    # -- scalar (single-element) arithmetic ---------------------------------

    def mul_scalar(self, a: int, b: int) -> int:
        va = self.decode(np.array([a]))
        vb = self.decode(np.array([b]))
        return int(self.encode(self.mul(va, vb))[0])

    def pow_scalar(self, a: int, e: int) -> int:
        out, base = 1, a
        while e:
            if e & 1:
                out = self.mul_scalar(out, base)
            base = self.mul_scalar(base, base)
            e >>= 1
        return int(out)


def _find_irreducible(p: int, d: int, seed: int) -> tuple:
    """A monic irreducible of degree d over F_p, deterministic given seed."""
    if d == 1:
        return (0, 1)
    rng = np.random.default_rng(seed ^ (p * 1_000_003 + d))
    while True:
        coeffs = [int(c) for c in rng.integers(0, p, size=d)]
        poly = Poly(_sym_x**d + sum(c * _sym_x**k for k, c in enumerate(coeffs)), _sym_x, domain=GF(p))
        if poly.is_irreducible:
            return tuple(coeffs) + (1,)


def _find_generator(F: FieldExt, seed: int) -> int:
    """A generator of F_q^x by seeded trial against the factorization of q-1."""
    primes = list(factorint(F.q - 1))
    rng = np.random.default_rng(seed ^ (F.q * 7 + 1))
    while True:
        g = int(rng.integers(1, F.q))
        if g == 0:
            continue
        if all(F.pow_scalar(g, (F.q - 1) // ell) != 1 for ell in primes):
            return g


class ExtField(FieldExt):
    """F_{q^i} for the residue field F_q of a prime ideal.

    Carries eta (the image of zeta_m, an element of exact order m when
    m > 1) and lift(), the embedding of residue-field elements.  All
    curve data entering a count is Z[zeta_m]-generated, so the embedding
    is determined by where zeta goes.
    """

    def __init__(self, P: PrimeIdeal, i: int, p, d, modulus, gen, eta):
        super().__init__(p, d, modulus, gen)
        self.P = P
        self.i = i
        self.eta = eta

    def lift(self, a: int) -> int:
        """Embed an element of the residue field F_q (integer encoding)."""
        a0, a1 = a % self.P.p, a // self.P.p
        if a1 == 0:
            return a0
        v = self.decode(np.array([self.eta]))
        v = (a1 * v) % self.p
        v[0, 0] = (v[0, 0] + a0) % self.p
        return int(self.encode(v)[0])


def build_extension(P: PrimeIdeal, i: int, seed: int = 0) -> ExtField:
    """The field F_{q^i} over the residue field of P, with embedding data.

    For i = 1 the canonical residue-field presentation is kept (modulus
    Phi_m when f = 2), so eta is exactly P.zeta_image.  For larger i a
    seeded irreducible modulus is drawn and eta is recovered as a root of
    the same minimal polynomial; either root yields isomorphic embedded
    data, so the seeded choice is sound.
    """
    if not 1 <= i <= 8:
        raise ValueError(f"extension degree {i} out of range")
    p, f = P.p, P.f
    d = f * i
    if i == 1:
        modulus = P.modulus if f == 2 else (0, 1)
        F = ExtField(P, i, p, d, modulus, None, P.zeta_image)
        F.gen = _find_generator(F, seed)
        return F
    modulus = _find_irreducible(p, d, seed)
    F = ExtField(P, i, p, d, modulus, None, 0)
    F.gen = _find_generator(F, seed)
    if f == 1:
        eta = P.zeta_image  # scalar, embeds as itself
    else:
        # eta = any element of exact multiplicative order m; g^((q^i-1)/m)
        # works because g generates, and either primitive root gives the
        # same counts (the two embeddings are Frobenius-conjugate)
        eta = F.pow_scalar(F.gen, (F.q - 1) // P.m)
    F.eta = eta
    return F


class PowerClassTable:
    """cls: F_q -> Z/m with a^((q-1)/m) = eta^cls(a); cls[0] = -1.

    Built by one O(q) generator walk in ladder chunks (vectorized), then
    relabeled so classes are measured against the field's distinguished
    eta rather than the walk's own g^((q-1)/m).
    """

    def __init__(self, F: ExtField, m: int):
        if m > 1 and (F.q - 1) % m != 0:
            raise ValueError(f"m={m} does not divide q-1={F.q - 1}")
        self.q = F.q
        self.m = m
        self.F = F
        g = F.gen
        eta0 = F.pow_scalar(g, (F.q - 1) // m) if m > 1 else 1
        # find u with eta^u = eta0 (both have exact order m)
        u = next(
            uu for uu in range(1, m + 1) if F.pow_scalar(F.eta, uu) == eta0
        ) if m > 1 else 0
        cls = np.full(F.q, -1, dtype=np.int8)
        # ladder of powers of g, chunked
        chunk = min(_LADDER_CHUNK, F.q - 1)
        ladder = np.zeros((1, F.d), dtype=np.int64)
        ladder[0, 0] = 1  # g^0
        while ladder.shape[0] < chunk:
            s = int(F.encode(ladder[-1:])[0])
            s = F.mul_scalar(s, g)  # g^(len)
            take = min(ladder.shape[0], chunk - ladder.shape[0])
            ladder = np.vstack([ladder, F.mul_by_scalar(ladder[:take], s)])
        step = int(F.encode(ladder[-1:])[0])
        step = F.mul_scalar(step, g)  # g^chunk
        t0 = 0
        block = ladder
        while t0 < F.q - 1:
            n = min(chunk, F.q - 1 - t0)
            idx = F.encode(block[:n])
            cls[idx] = (u * (t0 + np.arange(n, dtype=np.int64))) % m
            t0 += n
            if t0 < F.q - 1:
                block = F.mul_by_scalar(block, step)
        self.table = cls

    def cls_of(self, ints):
        """Vectorized class lookup (int encoding); -1 marks zero."""
        return self.table[np.asarray(ints, dtype=np.int64)]


def solution_count_mth_root(a: int, m: int, tbl: PowerClassTable) -> int:
    """#{y in F_q : y^m = a}: m if a is a nonzero m-th power, 1 if a = 0."""
    if m > 1 and (tbl.q - 1) % m != 0:
        raise ValueError(f"m={m} does not divide q-1")
    if a == 0:
        return 1
    return m if tbl.table[a] == 0 else 0
