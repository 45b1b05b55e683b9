"""Spherical harmonics on exact polynomials.

Every form of degree d splits uniquely as ``sum_i r^(2i) h_i`` with ``h_i``
harmonic of degree ``d - 2i``; the summands are mutually orthogonal for the
apolar pairing. Averages over the unit sphere are normalized by its total
measure, which keeps every moment rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from lapinv._scalar import ZERO, Scalar
from lapinv.linalg import EchelonSpan, solve
from lapinv.poly import Polynomial, apolar_inner, grlex_key, monomials_of_degree


@dataclass(frozen=True)
class HarmonicSplit:
    degree: int
    components: tuple  # components[i] is harmonic of degree ``degree - 2i``

    def summand(self, i: int) -> Polynomial:
        """``r^(2i) * h_i``, the piece of the input lying in ``r^(2i) H_(d-2i)``."""
        h = self.components[i]
        return h * Polynomial.radius_squared(h.nvars) ** i

    def reconstruct(self) -> Polynomial:
        out = Polynomial.zero(self.components[0].nvars)
        for i in range(len(self.components)):
            out = out + self.summand(i)
        return out


@dataclass(frozen=True)
class SchurRatios:
    degree: int
    nvars: int
    ratios: tuple


def _double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def sphere_moment(exp, n: int | None = None):
    """Average of the monomial ``x^exp`` over the unit sphere in R^n."""
    exp = tuple(exp)
    if n is None:
        n = len(exp)
    if n < 1 or len(exp) > n:
        raise ValueError(f"monomial of length {len(exp)} does not fit in dimension {n}")
    if any(a % 2 for a in exp):
        return ZERO
    num = 1
    for a in exp:
        num *= _double_factorial(a - 1)
    den = 1
    for j in range(sum(exp) // 2):
        den *= n + 2 * j
    return Scalar(num, den)


def sphere_inner(p: Polynomial, q: Polynomial):
    """Normalized L^2 pairing of ``p`` and ``q`` on the unit sphere."""
    total = ZERO
    for e1, c1 in p.terms.items():
        for e2, c2 in q.terms.items():
            m = sphere_moment(tuple(a + b for a, b in zip(e1, e2)), p.nvars)
            if m:
                total += c1 * c2 * m
    return total


@lru_cache(maxsize=None)
def _laplace_after_r2(n: int, d: int):
    # Columns: monomials m of degree d; entries of Delta(r^2 m) in the same basis.
    monos = monomials_of_degree(n, d)
    index = {m: k for k, m in enumerate(monos)}
    r2 = Polynomial.radius_squared(n)
    cols = []
    for m in monos:
        img = (r2 * Polynomial.monomial(m)).laplacian()
        cols.append({index[e]: c for e, c in img.terms.items()})
    matrix = [[col.get(r, ZERO) for col in cols] for r in range(len(monos))]
    return monos, index, matrix


def _split_off_r2(p: Polynomial, d: int) -> Polynomial:
    """The unique q of degree d-2 with Delta(p - r^2 q) = 0."""
    n = p.nvars
    monos, index, matrix = _laplace_after_r2(n, d - 2)
    target = p.laplacian()
    rhs = [ZERO] * len(monos)
    for e, c in target.terms.items():
        rhs[index[e]] = c
    coeffs = solve(matrix, rhs)
    return Polynomial({m: c for m, c in zip(monos, coeffs) if c}, n)


def harmonic_decompose(p: Polynomial, degree: int | None = None) -> HarmonicSplit:
    """Split a homogeneous polynomial into harmonic pieces times powers of r^2.

    Solves ``Delta(r^2 q) = Delta(p)`` in the monomial basis of degree d-2 (the
    operator is invertible there), peels off ``h = p - r^2 q`` and recurses on q.
    """
    if not p.is_homogeneous():
        raise ValueError("harmonic decomposition needs a homogeneous polynomial")
    d = p.degree() if p else degree
    if d is None or d < 0:
        raise ValueError("degree of the zero polynomial must be given explicitly")
    comps = []
    cur = p
    k = d
    while True:
        if k < 2 or not cur:
            comps.append(cur)
            break
        q = _split_off_r2(cur, k)
        comps.append(cur - Polynomial.radius_squared(p.nvars) * q)
        cur = q
        k -= 2
    while len(comps) < d // 2 + 1:
        comps.append(Polynomial.zero(p.nvars))
    return HarmonicSplit(d, tuple(comps))


def harmonic_projection(p: Polynomial) -> Polynomial:
    return harmonic_decompose(p).components[0]


def harmonic_basis(n: int, d: int) -> list[Polynomial]:
    """A basis of the harmonic forms of degree d in n variables."""
    span = EchelonSpan(key=grlex_key, track=False)
    out = []
    for m in monomials_of_degree(n, d):
        h = harmonic_projection(Polynomial.monomial(m))
        if h and span.add(h.terms):
            out.append(h)
    return out


def schur_ratio(f: Polynomial):
    """``sphere_inner(f, f) / apolar_inner(f, f)`` for a nonzero form."""
    return sphere_inner(f, f) / apolar_inner(f, f)


def schur_ratios(d: int, n: int) -> SchurRatios:
    """Ratio of the sphere pairing to the apolar pairing on each summand ``r^(2i) H_(d-2i)``."""
    if d < 0 or n < 2:
        raise ValueError("schur_ratios needs d >= 0 and n >= 2")
    r2 = Polynomial.radius_squared(n)
    out = []
    for i in range(d // 2 + 1):
        h = harmonic_basis(n, d - 2 * i)[0]
        out.append(schur_ratio(h * r2**i))
    return SchurRatios(d, n, tuple(out))


def l2_from_split(p: Polynomial, q: Polynomial):
    """Evaluate the sphere pairing through the harmonic splits and the Schur ratios."""
    if not p or not q:
        return ZERO
    d = p.degree()
    sp, sq = harmonic_decompose(p, d), harmonic_decompose(q, d)
    ratios = schur_ratios(d, p.nvars).ratios
    total = ZERO
    for i, c in enumerate(ratios):
        total += c * apolar_inner(sp.summand(i), sq.summand(i))
    return total


__all__ = [
    "HarmonicSplit",
    "SchurRatios",
    "harmonic_basis",
    "harmonic_decompose",
    "harmonic_projection",
    "l2_from_split",
    "schur_ratio",
    "schur_ratios",
    "sphere_inner",
    "sphere_moment",
]
