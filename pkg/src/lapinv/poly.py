"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`Polynomial` lives in a fixed ambient ring ``Q[x_0, ..., x_{n-1}]``
and stores a map ``exponent tuple -> coefficient`` with no zero entries.
Instances are immutable; every operation returns a new polynomial.

Variable indices in the Python API are 0-based. The text grammar (see
:mod:`lapinv.grammar`) names them ``x1 ... xn``.
"""

from __future__ import annotations

from itertools import combinations_with_replacement
from math import factorial, gcd
from typing import Iterable, Iterator, Mapping, Sequence

from lapinv._scalar import ONE, ZERO, Scalar, to_scalar
from lapinv.errors import DimensionError

Exponent = tuple  # tuple[int, ...]


def grlex_key(exp: Exponent) -> tuple:
    """Sort key for graded-lexicographic order with x1 > x2 > ... ."""
    return (sum(exp), exp)


def monomials_of_degree(n: int, d: int) -> list[Exponent]:
    """All exponent vectors of total degree ``d`` in ``n`` variables, grlex descending."""
    if n == 0:
        return [()] if d == 0 else []
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


class Polynomial:
    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, terms: Mapping | Iterable = (), nvars: int | None = None):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict = {}
        for exp, coeff in items:
            exp = tuple(int(e) for e in exp)
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            if nvars is None:
                nvars = len(exp)
            elif len(exp) != nvars:
                raise DimensionError(f"monomial {exp} has length {len(exp)}, expected {nvars}")
            c = clean.get(exp, ZERO) + to_scalar(coeff)
            if c:
                clean[exp] = c
            else:
                clean.pop(exp, None)
        if nvars is None:
            raise ValueError("nvars is required for a polynomial without terms")
        self.nvars = nvars
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, nvars: int) -> "Polynomial":
        # trusted constructor: terms already clean
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj._terms = terms
        obj._hash = None
        return obj

    # construction helpers

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls._raw({}, nvars)

    @classmethod
    def constant(cls, value, nvars: int) -> "Polynomial":
        c = to_scalar(value)
        return cls._raw({(0,) * nvars: c} if c else {}, nvars)

    @classmethod
    def variable(cls, i: int, nvars: int) -> "Polynomial":
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for {nvars} variables")
        e = [0] * nvars
        e[i] = 1
        return cls._raw({tuple(e): ONE}, nvars)

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff=1) -> "Polynomial":
        return cls({tuple(exp): coeff}, len(exp))

    @classmethod
    def radius_squared(cls, nvars: int) -> "Polynomial":
        """``r^2 = x1^2 + ... + xn^2``."""
        terms = {}
        for i in range(nvars):
            e = [0] * nvars
            e[i] = 2
            terms[tuple(e)] = ONE
        return cls._raw(terms, nvars)

    # inspection

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self) -> list:
        """``(exponent, coefficient)`` pairs, graded-lex descending."""
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def monomials(self) -> list[Exponent]:
        return [e for e, _ in self.items()]

    def coefficient(self, exp: Sequence[int]):
        return self._terms.get(tuple(exp), ZERO)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator:
        return iter(self.items())

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def min_degree(self) -> int:
        return min((sum(e) for e in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_term(self):
        return self._terms.get((0,) * self.nvars, ZERO)

    def leading_term(self) -> tuple:
        """Graded-lex leading ``(exponent, coefficient)``."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self._terms, key=grlex_key)
        return exp, self._terms[exp]

    def used_variables(self) -> set[int]:
        return {i for e in self._terms for i, a in enumerate(e) if a}

    # arithmetic

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise DimensionError(
                    f"polynomials live in rings with {self.nvars} and {other.nvars} variables"
                )
            return other
        return Polynomial.constant(other, self.nvars)

    def __add__(self, other) -> "Polynomial":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, ZERO) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial._raw(out, self.nvars)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw({e: -c for e, c in self._terms.items()}, self.nvars)

    def __sub__(self, other) -> "Polynomial":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def scale(self, factor) -> "Polynomial":
        c = to_scalar(factor)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw({e: c * v for e, v in self._terms.items()}, self.nvars)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple([a + b for a, b in zip(e1, e2)])
                s = out.get(e, ZERO) + c1 * c2
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Polynomial._raw(out, self.nvars)

    def __rmul__(self, other) -> "Polynomial":
        return self.scale(other)

    def __truediv__(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return NotImplemented
        return self.scale(ONE / to_scalar(other))

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = Polynomial.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_monomial(self, exp: Exponent, coeff=ONE) -> "Polynomial":
        return Polynomial._raw(
            {tuple([a + b for a, b in zip(e, exp)]): c * coeff for e, c in self._terms.items()},
            self.nvars,
        )

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self._terms == other._terms
        try:
            c = to_scalar(other)
        except TypeError:
            return NotImplemented
        if not c:
            return not self._terms
        return len(self._terms) == 1 and self._terms.get((0,) * self.nvars) == c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    # calculus

    def diff(self, i: int) -> "Polynomial":
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range for {self.nvars} variables")
        out = {}
        for e, c in self._terms.items():
            a = e[i]
            if a:
                ne = list(e)
                ne[i] = a - 1
                out[tuple(ne)] = c * a
        return Polynomial._raw(out, self.nvars)

    def gradient(self) -> list["Polynomial"]:
        return [self.diff(i) for i in range(self.nvars)]

    def laplacian(self) -> "Polynomial":
        out: dict = {}
        for e, c in self._terms.items():
            for i, a in enumerate(e):
                if a >= 2:
                    ne = list(e)
                    ne[i] = a - 2
                    ne = tuple(ne)
                    s = out.get(ne, ZERO) + c * (a * (a - 1))
                    if s:
                        out[ne] = s
                    else:
                        del out[ne]
        return Polynomial._raw(out, self.nvars)

    # evaluation and substitution

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = point[0]
        return evaluate(self, point)

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        return linear_substitute(self, images)

    def homogeneous_components(self) -> list[tuple[int, "Polynomial"]]:
        return homogeneous_components(self)

    def homogeneous_part(self, d: int) -> "Polynomial":
        return Polynomial._raw({e: c for e, c in self._terms.items() if sum(e) == d}, self.nvars)

    def embed(self, nvars: int, offset: int = 0) -> "Polynomial":
        """Reinterpret in a ring with ``nvars`` variables, shifting indices by ``offset``."""
        if offset + self.nvars > nvars:
            raise DimensionError("embedding does not fit in the target ring")
        pad_l, pad_r = (0,) * offset, (0,) * (nvars - offset - self.nvars)
        return Polynomial._raw({pad_l + e + pad_r: c for e, c in self._terms.items()}, nvars)

    def normalized(self) -> "Polynomial":
        """Divide out the rational content and make the leading coefficient positive."""
        if not self._terms:
            return self
        nums, dens = [], []
        for c in self._terms.values():
            nums.append(int(c.numerator))
            dens.append(int(c.denominator))
        g = 0
        for v in nums:
            g = gcd(g, v)
        lcm = 1
        for v in dens:
            lcm = lcm * v // gcd(lcm, v)
        factor = Scalar(lcm, g)
        if self.leading_term()[1] < 0:
            factor = -factor
        return self.scale(factor)

    def monic(self) -> "Polynomial":
        if not self._terms:
            return self
        return self.scale(ONE / self.leading_term()[1])

    def __str__(self) -> str:
        from lapinv.grammar import format_polynomial

        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r}, nvars={self.nvars})"


# module-level operations


def _check_same_ring(p: Polynomial, q: Polynomial) -> None:
    if p.nvars != q.nvars:
        raise DimensionError(f"polynomials live in rings with {p.nvars} and {q.nvars} variables")


def partial_derivative(p: Polynomial, i: int) -> Polynomial:
    return p.diff(i)


def laplacian(p: Polynomial) -> Polynomial:
    return p.laplacian()


def grad_inner(p: Polynomial, q: Polynomial) -> Polynomial:
    """``sum_i (dp/dx_i)(dq/dx_i)``."""
    _check_same_ring(p, q)
    out = Polynomial.zero(p.nvars)
    for i in range(p.nvars):
        dp = p.diff(i)
        if dp:
            dq = q.diff(i)
            if dq:
                out = out + dp * dq
    return out


def grad_inner_via_laplacian(p: Polynomial, q: Polynomial) -> Polynomial:
    """``(Delta(pq) - p Delta q - q Delta p) / 2``; an independent route to :func:`grad_inner`."""
    _check_same_ring(p, q)
    return ((p * q).laplacian() - p * q.laplacian() - q * p.laplacian()) / 2


def dual_apply(h: Polynomial, g: Polynomial) -> Polynomial:
    """Apply the differential operator obtained from ``h`` by replacing ``x_i`` with d/dx_i."""
    _check_same_ring(h, g)
    out = Polynomial.zero(g.nvars)
    for exp, c in h._terms.items():
        term = g
        for i, a in enumerate(exp):
            for _ in range(a):
                term = term.diff(i)
                if not term:
                    break
            if not term:
                break
        if term:
            out = out + term.scale(c)
    return out


def apolar_inner(p: Polynomial, q: Polynomial):
    """Apolar pairing of two forms of equal degree: monomials are orthogonal with norm^2 = prod(a_i!)."""
    _check_same_ring(p, q)
    if not (p.is_homogeneous() and q.is_homogeneous()):
        raise ValueError("apolar pairing needs homogeneous polynomials")
    if p and q and p.degree() != q.degree():
        raise ValueError(f"apolar pairing of degrees {p.degree()} and {q.degree()}")
    total = ZERO
    small, big = (p, q) if len(p) <= len(q) else (q, p)
    for e, c in small._terms.items():
        d = big._terms.get(e)
        if d is not None:
            w = 1
            for a in e:
                w *= factorial(a)
            total += c * d * w
    return total


def homogeneous_components(p: Polynomial) -> list[tuple[int, Polynomial]]:
    buckets: dict[int, dict] = {}
    for e, c in p._terms.items():
        buckets.setdefault(sum(e), {})[e] = c
    return [(d, Polynomial._raw(buckets[d], p.nvars)) for d in sorted(buckets)]


def evaluate(p: Polynomial, point: Sequence):
    if len(point) != p.nvars:
        raise DimensionError(f"point has {len(point)} coordinates, polynomial has {p.nvars} variables")
    pt = [to_scalar(v) for v in point]
    total = ZERO
    for e, c in p._terms.items():
        t = c
        for v, a in zip(pt, e):
            if a:
                t *= v**a
        total += t
    return total


def linear_substitute(p: Polynomial, images: Sequence[Polynomial]) -> Polynomial:
    """Substitute ``x_i -> images[i]``; the images need not be linear."""
    if len(images) != p.nvars:
        raise DimensionError(f"{len(images)} images for {p.nvars} variables")
    if not images:
        return p
    m = images[0].nvars
    for im in images:
        if im.nvars != m:
            raise DimensionError("substitution images live in different rings")
    powers: list[dict[int, Polynomial]] = [{0: Polynomial.constant(1, m), 1: im} for im in images]

    def power(i: int, a: int) -> Polynomial:
        cache = powers[i]
        if a not in cache:
            half = power(i, a // 2)
            cache[a] = half * half if a % 2 == 0 else half * half * images[i]
        return cache[a]

    out: dict = {}
    for e, c in p._terms.items():
        term = Polynomial.constant(c, m)
        for i, a in enumerate(e):
            if a:
                term = term * power(i, a)
        for te, tc in term._terms.items():
            s = out.get(te, ZERO) + tc
            if s:
                out[te] = s
            else:
                del out[te]
    return Polynomial._raw(out, m)


def variables(nvars: int) -> list[Polynomial]:
    return [Polynomial.variable(i, nvars) for i in range(nvars)]
