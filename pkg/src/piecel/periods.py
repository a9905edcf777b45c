"""Branch points, cycle integrals, and eigenspace period determinants.

For y^m = f(x) with deg f = n, gcd(m, n) = 1, the holomorphic differentials
are omega_{i,j} = x^(i-1) dx / y^j indexed by

    W = {(i, j) : 1 <= i <= n-1, 1 <= j <= m-1, -m i + j n - 1 >= 0},

with |W| = g = (m-1)(n-1)/2, and the curve automorphism alpha: y -> zeta_m y
scales omega_{i,j} by zeta_m^(-j); the conjugated form bar(omega_{i,j})
therefore scales by zeta_m^(+j).  Cycles come from a spanning tree on the
branch points (the roots of f): for a tree edge e = (a, b) the loop
gamma_e^(l) lifts the segment [a, b] to the l-th sheet and returns on the
(l+1)-st, so

    int_{gamma_e^(l)} omega_{i,j} = c_{j,l} * I_e(i, j),
    c_{j,l} = zeta^(-j l) (1 - zeta^(-j)),      zeta = exp(2 pi i / m),

where I_e(i, j) is the "elementary" integral of x^(i-1) y^(-j) dx over the
open segment on the distinguished branch.  The branch is fixed by writing
f(x(u)) = -lc ((b-a)/2)^2 (1 - u^2) prod_{c not in e}(x(u) - c) on the
parametrized segment x(u) = (a+b)/2 + u (b-a)/2, taking real positive
(1 - u^2)^(1/m) and the principal m-th root of the smooth cofactor at u = 0
continued continuously outward.  The endpoint singularity (1-u^2)^(-j/m)
has exponent > -1, so tanh-sinh quadrature converges double-exponentially:
with u = tanh((pi/2) sinh v) the full weight is

    (pi/2) cosh(v) * sech((pi/2) sinh v)^(2 - 2j/m).

The eigenspace of the k-th character inside H^1 has dimension n-1: the
holomorphic omega_{i,j} with j = -k (mod m) together with the conjugated
forms bar(omega_{i,j}) with j = +k (mod m).  Its period matrix takes these
rows over the n-1 columns gamma_e^(0), e in the tree, with the conjugated
rows computed as conj(c_{j,0} I_e(i, j)); the determinant is the eigenspace
period Omega(tau_k).  Swapping k -> -k conjugates the matrix and swaps the
two row blocks, so Omega(tau_{-k}) = (-1)^(p q) conj(Omega(tau_k)) with
p, q the block sizes: the sign is +1 whenever p or q is even, and -1 in
the self-conjugate cases (m = 2, and the real character of m = 4) where
tau_{-k} = tau_k and the period is forced onto the imaginary axis.  That
fixed fourth root of unity, together with the factor 2 = |c_{1,0}| relating
the m = 2 real-edge cycle to the classical AGM period, is the whole of the
convention; everything else is pinned only up to Q(zeta_m)^x, which
downstream recognition works modulo anyway.  All arithmetic is hardware
double with a 1e-12 quadrature target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .counting import SuperellipticCurve
from .cyclo import ComplexEmbedding, embed

__all__ = [
    "differential_indices",
    "find_roots",
    "segment_quality",
    "spanning_tree",
    "BranchData",
    "branch_data",
    "elementary_integral",
    "cycle_coefficient",
    "PeriodAssembly",
    "period_assembly",
    "deligne_period",
]


def differential_indices(m: int, n: int) -> list[tuple[int, int]]:
    """All (i, j) with 1 <= i <= n-1, 1 <= j <= m-1, -m i + j n - 1 >= 0."""
    W = [
        (i, j)
        for j in range(1, m)
        for i in range(1, n)
        if -m * i + j * n - 1 >= 0
    ]
    assert len(W) == (m - 1) * (n - 1) // 2
    return W


# ---------------------------------------------------------------------------
# branch points and the spanning tree


def find_roots(coeffs) -> np.ndarray:
    """Roots of sum c_k x^k (ascending complex coeffs), polished and sorted.

    Newton-polishes the companion-matrix roots, verifies the residual and a
    1e-8 pairwise separation (below which the curve is treated as
    numerically singular), and orders deterministically by (real, imag).
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    if c[-1] == 0:
        raise ValueError("leading coefficient vanishes")
    r = np.roots(c[::-1])
    dc = c[1:] * np.arange(1, len(c))
    for _ in range(3):
        fv = np.polyval(c[::-1], r)
        fpv = np.polyval(dc[::-1], r)
        step = np.where(fpv != 0, fv / np.where(fpv == 0, 1, fpv), 0)
        r = r - step
    scale = np.sum(np.abs(c)[:, None] * np.abs(r)[None, :] ** np.arange(len(c))[:, None], axis=0)
    bad = np.abs(np.polyval(c[::-1], r)) > 1e-10 * scale
    if bad.any():
        raise ValueError("root polishing did not converge")
    if len(r) > 1:
        sep = np.abs(r[:, None] - r[None, :])
        np.fill_diagonal(sep, np.inf)
        if sep.min() < 1e-8:
            raise ValueError("near-coincident branch points: numerically singular")
    order = np.lexsort((r.imag, r.real))
    return r[order] + 0.0  # flush IEEE negative zeros off the branch cut


def segment_quality(roots: np.ndarray, ia: int, ib: int) -> float:
    """r(e) = min over other roots c of |2c - a - b| / |b - a|.

    Values >= 1 keep every other branch point outside the disc on the
    segment's diameter; larger is better for the integrator.
    """
    a, b = roots[ia], roots[ib]
    others = np.delete(roots, [ia, ib])
    if len(others) == 0:
        return math.inf
    return float(np.min(np.abs(2 * others - a - b)) / abs(b - a))


def spanning_tree(roots: np.ndarray) -> list[tuple[int, int]]:
    """Greedy max-min spanning tree on the complete branch-point graph.

    Edges are taken in decreasing quality r(e) (lexicographic index
    tie-break), Kruskal-style, so the worst chosen edge is as good as a
    greedy choice allows.
    """
    n = len(roots)
    if n < 2:
        raise ValueError("need at least two branch points")
    edges = sorted(
        ((ia, ib) for ia in range(n) for ib in range(ia + 1, n)),
        key=lambda e: (-segment_quality(roots, *e), e),
    )
    parent = list(range(n))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    tree = []
    for ia, ib in edges:
        ra, rb = find(ia), find(ib)
        if ra != rb:
            parent[ra] = rb
            tree.append((ia, ib))
        if len(tree) == n - 1:
            break
    return tree


@dataclass
class BranchData:
    """Embedded leading coefficient, branch points, and the spanning tree."""

    lc: complex
    roots: np.ndarray
    edges: list[tuple[int, int]]


def branch_data(C: SuperellipticCurve) -> BranchData:
    """Embed the coefficients, locate branch points, pick the tree."""
    sig = ComplexEmbedding(C.m)
    coeffs = np.array([embed(c, sig) for c in C.f], dtype=np.complex128)
    roots = find_roots(coeffs)
    return BranchData(complex(coeffs[-1]), roots, spanning_tree(roots))


# ---------------------------------------------------------------------------
# elementary integrals


def _tracked_argument(values: np.ndarray, anchor_index: int) -> np.ndarray:
    """Continuous argument along a path, anchored to the principal value.

    values must be sampled densely enough that consecutive phase steps stay
    well under pi; a step above pi/2 means a branch point sits too close to
    the path and is reported as a failure.
    """
    phi = np.unwrap(np.angle(values))
    jumps = np.abs(np.diff(phi))
    if jumps.size and jumps.max() > math.pi / 2:
        raise ValueError("branch tracking discontinuity: root too close to segment")
    phi += np.angle(values[anchor_index]) - phi[anchor_index]
    return phi


def elementary_integral(
    bd: BranchData,
    edge: tuple[int, int],
    idx: tuple[int, int],
    m: int,
    step: float = 1.0 / 20,
    dense: int = 4096,
) -> complex:
    """I_e(i, j): integral of x^(i-1) y^(-j) dx over the open segment.

    Tanh-sinh quadrature in u with the (1 - u^2)^(-j/m) endpoint factor
    folded into the weight analytically; the smooth cofactor's m-th root is
    branch-tracked from the segment midpoint on a dense merged grid.
    """
    i_, j_ = idx
    a, b = bd.roots[edge[0]], bd.roots[edge[1]]
    others = np.delete(bd.roots, list(edge))
    half = (b - a) / 2.0
    mid = (a + b) / 2.0

    expo = 2.0 - 2.0 * j_ / m  # weight decay exponent, always > 0
    V = max(3.0, math.asinh(2.0 * (16 * math.log(10)) / (expo * math.pi)))
    k = np.arange(-int(V / step), int(V / step) + 1)
    v = k * step
    u_nodes = np.tanh(0.5 * math.pi * np.sinh(v))
    weight = 0.5 * math.pi * np.cosh(v) / np.cosh(0.5 * math.pi * np.sinh(v)) ** expo

    # merged grid for branch tracking: dense uniform + quadrature nodes
    u = np.unique(np.concatenate([np.linspace(-1.0, 1.0, dense + 1), u_nodes]))
    x = mid + u * half
    B = np.full(u.shape, -bd.lc * half * half, dtype=np.complex128)
    for c in others:
        B = B * (x - c)
    B = B + 0.0  # flush negative zeros off the principal branch cut
    anchor = int(np.argmin(np.abs(u)))
    phi = _tracked_argument(B, anchor)
    logmag = np.log(np.abs(B))

    pos = np.searchsorted(u, u_nodes)
    xn = mid + u_nodes * half
    smooth = xn ** (i_ - 1) * np.exp(-(j_ / m) * (logmag[pos] + 1j * phi[pos]))
    return complex(step * half * np.sum(smooth * weight))


def cycle_coefficient(j: int, ell: int, m: int) -> complex:
    """c_{j,l} with int_{gamma_e^(l)} omega_{i,j} = c_{j,l} I_e(i, j)."""
    zeta = np.exp(2j * math.pi / m)
    return complex(zeta ** (-j * ell) * (1 - zeta ** (-j)))


# ---------------------------------------------------------------------------
# assembly


@dataclass
class PeriodAssembly:
    """Elementary integrals over all tree edges plus derived matrices.

    I has shape (#edges, |W|); rows of the derived matrices follow self.W
    order, holomorphic block first.
    """

    curve: SuperellipticCurve
    W: list[tuple[int, int]]
    place: BranchData
    I: np.ndarray
    step: float = 1.0 / 20

    def partial_matrix(self, k: int) -> np.ndarray:
        """Square (n-1) matrix for the k-th character eigenspace.

        Holomorphic rows omega_{i,j}, j = -k (mod m), stacked over
        conjugated rows bar(omega_{i,j}), j = +k (mod m), all integrated
        against the tree cycles gamma_e^(0).
        """
        m, n = self.curve.m, self.curve.n
        k = k % m
        if k == 0:
            raise ValueError("trivial character has no period matrix")
        rows = []
        for w, (i_, j_) in enumerate(self.W):
            if (j_ + k) % m == 0:
                rows.append(cycle_coefficient(j_, 0, m) * self.I[:, w])
        for w, (i_, j_) in enumerate(self.W):
            if (j_ - k) % m == 0:
                rows.append(np.conj(cycle_coefficient(j_, 0, m) * self.I[:, w]))
        mat = np.array(rows)
        if mat.shape != (n - 1, n - 1):
            raise ValueError(
                f"period matrix is {mat.shape}, expected square of size {n - 1}"
            )
        return mat

    def deligne(self, k: int) -> complex:
        return complex(np.linalg.det(self.partial_matrix(k)))

    def big_matrix(self) -> np.ndarray:
        """2g x 2g: all omega and all bar(omega) rows over all 2g cycles."""
        m = self.curve.m
        nedge = len(self.place.edges)
        g = len(self.W)
        cols = [(e, ell) for e in range(nedge) for ell in range(m - 1)]
        out = np.zeros((2 * g, 2 * g), dtype=np.complex128)
        for w, (i_, j_) in enumerate(self.W):
            for cidx, (e, ell) in enumerate(cols):
                entry = cycle_coefficient(j_, ell, m) * self.I[e, w]
                out[w, cidx] = entry
                out[g + w, cidx] = np.conj(entry)
        return out


def period_assembly(C: SuperellipticCurve, step: float = 1.0 / 20) -> PeriodAssembly:
    """Integrate every omega in W over every tree edge."""
    W = differential_indices(C.m, C.n)
    place = branch_data(C)
    I = np.zeros((len(place.edges), len(W)), dtype=np.complex128)
    for e, edge in enumerate(place.edges):
        for w, idx in enumerate(W):
            I[e, w] = elementary_integral(place, edge, idx, C.m, step=step)
    return PeriodAssembly(C, W, place, I, step)


def deligne_period(C: SuperellipticCurve, k: int, step: float = 1.0 / 20) -> complex:
    """det of the k-eigenspace period matrix (defined up to Q(zeta_m)^x)."""
    return period_assembly(C, step=step).deligne(k)
