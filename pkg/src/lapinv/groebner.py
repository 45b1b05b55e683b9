"""Buchberger's algorithm over the rationals.

Polynomials inside the kernel are plain dicts ``exponent -> scalar``; the
public functions accept and return :class:`~lapinv.poly.Polynomial`.

Pairs are processed by sugar degree with the Gebauer-Moeller criteria. When
the input is homogeneous for a positive weight vector, a ``degree_bound``
truncates the computation: the result is then a Groebner basis for every
element of the ideal of weighted degree <= bound, which is all a normal form
of such an element needs.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Sequence

from lapinv._scalar import ONE, ZERO
from lapinv.errors import IndeterminateError
from lapinv.poly import Polynomial

DEFAULT_PAIR_BUDGET = 20000


def _grevlex(e: tuple) -> tuple:
    return (sum(e), tuple([-a for a in reversed(e)]))


def _neg(k):
    if isinstance(k, tuple):
        return tuple([_neg(v) for v in k])
    return -k


class TermOrder:
    """A monomial order: ``grlex``, ``grevlex`` or a block ``elimination`` order.

    The elimination order compares the first block by grevlex, then the next
    block, and so on, so it eliminates the leading blocks.
    """

    __slots__ = ("kind", "blocks", "_keys", "_heap")

    def __init__(self, kind: str = "grevlex", blocks: Sequence[int] = ()):
        if kind not in ("grlex", "grevlex", "elimination"):
            raise ValueError(f"unknown term order {kind!r}")
        blocks = tuple(int(b) for b in blocks)
        if kind == "elimination" and (len(blocks) < 1 or any(b < 0 for b in blocks)):
            raise ValueError("elimination order needs non-negative block sizes")
        self.kind = kind
        self.blocks = blocks
        self._keys: dict = {}
        self._heap: dict = {}

    @classmethod
    def elimination(cls, *blocks: int) -> "TermOrder":
        return cls("elimination", blocks)

    def check(self, nvars: int) -> None:
        if self.kind == "elimination" and sum(self.blocks) != nvars:
            raise ValueError(f"block sizes {self.blocks} do not sum to {nvars} variables")

    def key(self, e: tuple) -> tuple:
        k = self._keys.get(e)
        if k is None:
            if self.kind == "grlex":
                k = (sum(e), e)
            elif self.kind == "grevlex":
                k = _grevlex(e)
            else:
                parts, start = [], 0
                for b in self.blocks:
                    parts.append(_grevlex(e[start : start + b]))
                    start += b
                k = tuple(parts)
            self._keys[e] = k
        return k

    def heap_key(self, e: tuple) -> tuple:
        k = self._heap.get(e)
        if k is None:
            k = _neg(self.key(e))
            self._heap[e] = k
        return k

    def __eq__(self, other) -> bool:
        return isinstance(other, TermOrder) and (self.kind, self.blocks) == (other.kind, other.blocks)

    def __hash__(self) -> int:
        return hash((self.kind, self.blocks))

    def __repr__(self) -> str:
        if self.kind == "elimination":
            return f"TermOrder.elimination{self.blocks}"
        return f"TermOrder({self.kind!r})"


# dict-level helpers


def _divides(a: tuple, b: tuple) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple([x if x > y else y for x, y in zip(a, b)])


def _quo(a: tuple, b: tuple) -> tuple:
    return tuple([x - y for x, y in zip(a, b)])


def _coprime(a: tuple, b: tuple) -> bool:
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


def _wdeg(e: tuple, weights: tuple) -> int:
    return sum(a * w for a, w in zip(e, weights))


class _Basis:
    """Monic polynomials with cached leading monomials."""

    def __init__(self, order: TermOrder):
        self.order = order
        self.polys: list[dict] = []
        self.lms: list[tuple] = []

    def find_divisor(self, m: tuple, alive=None) -> int:
        for i, lm in enumerate(self.lms):
            if (alive is None or i in alive) and _divides(lm, m):
                return i
        return -1


def _reduce(p: dict, basis: _Basis, order: TermOrder, alive=None, full: bool = True) -> dict:
    """Normal form of ``p``; with ``full=False`` stop at the first irreducible leading term."""
    rem = dict(p)
    out: dict = {}
    # heap entries: (negated order key, exponent)
    heap = [(order.heap_key(e), e) for e in rem]
    heapq.heapify(heap)
    queued = set(rem)
    while heap:
        _, m = heapq.heappop(heap)
        queued.discard(m)
        c = rem.pop(m, None)
        if c is None:
            continue
        i = basis.find_divisor(m, alive)
        if i < 0:
            out[m] = c
            if not full:
                out.update(rem)
                return out
            continue
        g = basis.polys[i]
        q = _quo(m, basis.lms[i])
        for e, gc in g.items():
            if e == basis.lms[i]:
                continue
            t = tuple([a + b for a, b in zip(e, q)])
            v = rem.get(t, ZERO) - c * gc
            if v:
                rem[t] = v
                if t not in queued:
                    heapq.heappush(heap, (order.heap_key(t), t))
                    queued.add(t)
            else:
                rem.pop(t, None)
    return out


def _monic(p: dict, lm: tuple) -> dict:
    inv = ONE / p[lm]
    return {e: c * inv for e, c in p.items()}


def _lead(p: dict, order: TermOrder) -> tuple:
    return max(p, key=order.key)


@dataclass
class GroebnerStats:
    pairs_reduced: int = 0
    zero_reductions: int = 0
    pairs_skipped_by_bound: int = 0


@dataclass
class GroebnerBasis:
    generators: list
    basis: list
    order: TermOrder
    degree_bound: int | None = None
    weights: tuple | None = None
    stats: GroebnerStats = field(default_factory=GroebnerStats)

    @property
    def nvars(self) -> int:
        return self.basis[0].nvars if self.basis else self.generators[0].nvars

    def leading_monomials(self) -> list[tuple]:
        return [_lead(g.terms, self.order) for g in self.basis]

    def is_unit(self) -> bool:
        return len(self.basis) == 1 and self.basis[0].is_constant()

    def normal_form(self, f: Polynomial) -> Polynomial:
        if self.degree_bound is not None and f:
            top = max(_wdeg(e, self.weights) for e in f.terms)
            if top > self.degree_bound:
                raise ValueError(
                    f"basis truncated at weighted degree {self.degree_bound}, query has degree {top}"
                )
        b = _Basis(self.order)
        for g in self.basis:
            t = g.terms
            lm = _lead(t, self.order)
            b.polys.append(t)
            b.lms.append(lm)
        return Polynomial(_reduce(f.terms, b, self.order), f.nvars)

    def contains(self, f: Polynomial) -> bool:
        return not self.normal_form(f)


def _pair_lcm(b: _Basis, i: int, j: int) -> tuple:
    return _lcm(b.lms[i], b.lms[j])


def groebner_basis(
    generators: Sequence[Polynomial],
    order: TermOrder | None = None,
    degree_bound: int | None = None,
    weights: Sequence[int] | None = None,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal spanned by ``generators``.

    Raises :class:`IndeterminateError` once more than ``pair_budget``
    S-polynomials have been reduced.
    """
    generators = list(generators)
    if not generators:
        raise ValueError("groebner_basis needs at least one generator")
    order = order or TermOrder("grevlex")
    nvars = generators[0].nvars
    order.check(nvars)
    weights = tuple(weights) if weights is not None else (1,) * nvars
    if len(weights) != nvars or any(w <= 0 for w in weights):
        raise ValueError("weights must be positive, one per variable")
    if degree_bound is not None:
        for g in generators:
            if len({_wdeg(e, weights) for e in g.terms}) > 1:
                raise ValueError("degree truncation needs generators homogeneous for the weights")

    stats = GroebnerStats()
    basis = _Basis(order)
    sugar: list[int] = []
    alive: set[int] = set()
    pairs: set[tuple[int, int]] = set()
    heap: list = []

    def push_pair(i: int, j: int) -> None:
        i, j = min(i, j), max(i, j)
        lcm = _pair_lcm(basis, i, j)
        s = max(
            sugar[i] + _wdeg(_quo(lcm, basis.lms[i]), weights),
            sugar[j] + _wdeg(_quo(lcm, basis.lms[j]), weights),
        )
        pairs.add((i, j))
        heapq.heappush(heap, (s, order.key(lcm), i, j))

    def insert(h: dict, s: int) -> None:
        # Gebauer-Moeller update for a new element h
        lm_h = _lead(h, order)
        h = _monic(h, lm_h)
        k = len(basis.polys)
        basis.polys.append(h)
        basis.lms.append(lm_h)
        sugar.append(s)
        cands = sorted(alive)
        lcms = {g: _lcm(lm_h, basis.lms[g]) for g in cands}
        keep = []
        for idx, g in enumerate(cands):
            lg = lcms[g]
            if _coprime(lm_h, basis.lms[g]):
                keep.append(g)
                continue
            others = cands[:idx] + cands[idx + 1 :]
            dominated = False
            for g2 in others:
                l2 = lcms[g2]
                if _divides(l2, lg) and (l2 != lg or g2 < g):
                    dominated = True
                    break
            if not dominated:
                keep.append(g)
        new_pairs = [g for g in keep if not _coprime(lm_h, basis.lms[g])]
        for p in list(pairs):
            i, j = p
            lij = _pair_lcm(basis, i, j)
            if (
                _divides(lm_h, lij)
                and _lcm(basis.lms[i], lm_h) != lij
                and _lcm(basis.lms[j], lm_h) != lij
            ):
                pairs.discard(p)
        for g in new_pairs:
            push_pair(g, k)
        for g in cands:
            if _divides(lm_h, basis.lms[g]):
                alive.discard(g)
        alive.add(k)

    for g in generators:
        if g.nvars != nvars:
            raise ValueError("generators live in different rings")
        t = g.terms
        if not t:
            continue
        red = _reduce(t, basis, order, alive, full=False)
        if red:
            insert(red, max(_wdeg(e, weights) for e in t))

    deferred = 0
    while heap:
        s, _, i, j = heapq.heappop(heap)
        if (i, j) not in pairs:
            continue
        pairs.discard((i, j))
        if degree_bound is not None and s > degree_bound:
            deferred += 1
            continue
        if stats.pairs_reduced >= pair_budget:
            raise IndeterminateError(
                f"Groebner pair budget of {pair_budget} exhausted with {len(pairs) + 1} pairs pending"
            )
        stats.pairs_reduced += 1
        lcm = _pair_lcm(basis, i, j)
        sp: dict = {}
        for idx, sign in ((i, ONE), (j, -ONE)):
            q = _quo(lcm, basis.lms[idx])
            for e, c in basis.polys[idx].items():
                t = tuple([a + b for a, b in zip(e, q)])
                v = sp.get(t, ZERO) + sign * c
                if v:
                    sp[t] = v
                else:
                    sp.pop(t, None)
        red = _reduce(sp, basis, order, alive, full=False)
        if not red:
            stats.zero_reductions += 1
            continue
        insert(red, s)
    stats.pairs_skipped_by_bound = deferred

    reduced = _interreduce([basis.polys[i] for i in sorted(alive)], order)
    nv = nvars
    return GroebnerBasis(
        generators=generators,
        basis=[Polynomial(p, nv) for p in reduced],
        order=order,
        degree_bound=degree_bound,
        weights=weights,
        stats=stats,
    )


def _interreduce(polys: list[dict], order: TermOrder) -> list[dict]:
    items = [(_lead(p, order), p) for p in polys]
    items.sort(key=lambda t: order.key(t[0]))
    # minimal basis: drop elements whose leading monomial is divisible by another's
    minimal = []
    for lm, p in items:
        if not any(_divides(lm2, lm) for lm2, _ in minimal):
            minimal.append((lm, p))
    out = []
    for idx, (lm, p) in enumerate(minimal):
        others = _Basis(order)
        for k, (lm2, p2) in enumerate(minimal):
            if k != idx:
                others.polys.append(p2)
                others.lms.append(lm2)
        tail = {e: c for e, c in p.items() if e != lm}
        red = _reduce(tail, others, order)
        red[lm] = p[lm]
        out.append(_monic(red, lm))
    return out


def spolynomial(f: Polynomial, g: Polynomial, order: TermOrder) -> Polynomial:
    ft, gt = f.terms, g.terms
    lf, lg = _lead(ft, order), _lead(gt, order)
    lcm = _lcm(lf, lg)
    a = f.mul_monomial(_quo(lcm, lf), ONE / ft[lf])
    b = g.mul_monomial(_quo(lcm, lg), ONE / gt[lg])
    return a - b


def reduce(f: Polynomial, divisors: Sequence[Polynomial], order: TermOrder) -> Polynomial:
    """Full multivariate division remainder of ``f`` by ``divisors``."""
    b = _Basis(order)
    for g in divisors:
        t = g.terms
        lm = _lead(t, order)
        b.polys.append(_monic(t, lm))
        b.lms.append(lm)
    return Polynomial(_reduce(f.terms, b, order), f.nvars)


def is_groebner(basis: Sequence[Polynomial], order: TermOrder) -> bool:
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    basis = list(basis)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if reduce(spolynomial(basis[i], basis[j], order), basis, order):
                return False
    return True


def is_reduced(basis: Sequence[Polynomial], order: TermOrder) -> bool:
    lms = [_lead(g.terms, order) for g in basis]
    for g, lm in zip(basis, lms):
        if g.terms[lm] != ONE:
            return False
        for e in g.terms:
            for k, lm2 in enumerate(lms):
                if basis[k] is not g and _divides(lm2, e):
                    return False
    return True


def leading_monomial(f: Polynomial, order: TermOrder) -> tuple:
    return _lead(f.terms, order)
