"""Finitely generated subalgebras of a polynomial ring.

A presentation ``B = R[g_1, ..., g_m]`` answers membership queries through
tag variables: adjoin ``y_1 .. y_m``, take a Groebner basis of the ideal
``<y_j - g_j(x)>`` under an order eliminating x, and reduce the query. The
query lies in B exactly when its normal form involves y only, and that normal
form, read as a polynomial in y, is an explicit witness.

When every generator is homogeneous the tag ideal is homogeneous for the
weights ``x_i -> 1, y_j -> deg g_j``, so the basis only has to be computed up
to the degree of the query. Such bases are cached per presentation and grown
on demand.

A second, independent route (``method="linear"``) works degree by degree with
plain linear algebra: the degree-d part of B is spanned by ``g_j * b`` with b
in the degree ``d - deg g_j`` part. It needs homogeneous generators and is
much cheaper than the elimination route once there are many generators of
high degree. ``method="auto"`` picks it whenever it applies.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from lapinv.errors import DimensionError, PreconditionError
from lapinv.grammar import default_names, format_polynomial, parse_polynomial
from lapinv.groebner import DEFAULT_PAIR_BUDGET, GroebnerBasis, TermOrder, groebner_basis
from lapinv.linalg import EchelonSpan, rank
from lapinv.poly import Polynomial, grlex_key

IN = "IN"
OUT = "OUT"

JACOBIAN_BOX = 10**4


@dataclass(frozen=True)
class Membership:
    """Outcome of a membership query.

    ``witness`` is a polynomial in ``m`` variables (one per generator) with
    ``witness(g_1, ..., g_m) == f``; it is None for OUT.
    """

    verdict: str
    witness: Polynomial | None = None
    method: str = "groebner"

    @property
    def is_member(self) -> bool:
        return self.verdict == IN

    def __bool__(self) -> bool:
        return self.is_member

    def witness_str(self, names: Sequence[str] | None = None) -> str | None:
        if self.witness is None:
            return None
        names = names or default_names(self.witness.nvars, "y")
        return format_polynomial(self.witness, names)


def _weighted_degree(f: Polynomial) -> int:
    return f.degree()


class _GradedSpans:
    """Degree-by-degree spans of an algebra with homogeneous generators.

    The degree-d part is spanned by ``g_j * b`` with b running over the
    independent elements kept in degree ``d - deg g_j``. Every kept element is
    a monomial in the generators, recorded as a polynomial in the tag
    variables so that span coefficients turn into a witness.
    """

    def __init__(self, generators: Sequence[Polynomial], nvars: int):
        self.generators = list(generators)
        self.degrees = [g.degree() for g in self.generators]
        self.nvars = nvars
        m = len(self.generators)
        one = Polynomial.constant(1, nvars)
        span = EchelonSpan(key=grlex_key)
        span.add(one.terms, Polynomial.constant(1, m))
        self.spans: dict = {0: span}
        self.kept: dict = {0: [(one, Polynomial.constant(1, m))]}

    def span(self, d: int) -> EchelonSpan:
        if d in self.spans:
            return self.spans[d]
        m = len(self.generators)
        span = EchelonSpan(key=grlex_key)
        kept = []
        for j, (g, e) in enumerate(zip(self.generators, self.degrees)):
            if e > d:
                continue
            self.span(d - e)
            yj = Polynomial.variable(j, m)
            for b, w in self.kept[d - e]:
                prod = g * b
                wit = yj * w
                if span.add(prod.terms, wit):
                    kept.append((prod, wit))
        self.spans[d] = span
        self.kept[d] = kept
        return span

    def seed_from(self, other: "_GradedSpans", below: int) -> None:
        # degrees below the smallest new generator degree are unchanged
        for d in range(1, below):
            if d in other.spans:
                self.spans[d] = other.spans[d]
                m = len(self.generators)
                self.kept[d] = [(b, w.embed(m)) for b, w in other.kept[d]]

    def express(self, f: Polynomial):
        """Witness for a homogeneous f, or None when f is outside the algebra."""
        m = len(self.generators)
        d = f.degree()
        span = self.span(d)
        combo = span.express(f.terms)
        if combo is None:
            return None
        out = Polynomial.zero(m)
        for t, c in combo.items():
            out = out + span.tags[t].scale(c)
        return out


class SubalgebraPresentation:
    """The subalgebra of ``R[x_1..x_n]`` generated by a list of nonconstant polynomials."""

    def __init__(self, generators: Iterable[Polynomial], nvars: int | None = None, pair_budget: int = DEFAULT_PAIR_BUDGET):
        gens = list(generators)
        if nvars is None:
            if not gens:
                raise PreconditionError("a presentation with no generators needs an explicit nvars")
            nvars = gens[0].nvars
        for g in gens:
            if g.nvars != nvars:
                raise DimensionError(f"generator {g} lives in {g.nvars} variables, expected {nvars}")
            if g.is_constant():
                raise PreconditionError(f"generators must be nonconstant, got {g}")
        self.nvars = nvars
        self.generators: tuple = tuple(gens)
        self.pair_budget = pair_budget
        self.homogeneous = all(g.is_homogeneous() for g in gens)
        self._lock = threading.Lock()
        self._gb: GroebnerBasis | None = None
        self._gb_bound = -1
        self._graded: _GradedSpans | None = None

    def __len__(self) -> int:
        return len(self.generators)

    def __repr__(self) -> str:
        return f"SubalgebraPresentation({[str(g) for g in self.generators]}, nvars={self.nvars})"

    # tag-variable ring: x_1..x_n followed by y_1..y_m

    @property
    def ngenerators(self) -> int:
        return len(self.generators)

    def _tag_ideal(self) -> list[Polynomial]:
        n, m = self.nvars, self.ngenerators
        out = []
        for j, g in enumerate(self.generators):
            y = Polynomial.variable(n + j, n + m)
            out.append(y - g.embed(n + m))
        return out

    def tag_basis(self, degree: int | None = None) -> GroebnerBasis:
        """Elimination Groebner basis of the tag ideal, valid for queries up to ``degree``."""
        with self._lock:
            if self._gb is not None and (self._gb.degree_bound is None or (degree is not None and degree <= self._gb_bound)):
                return self._gb
            n, m = self.nvars, self.ngenerators
            order = TermOrder.elimination(n, m)
            if self.homogeneous and degree is not None:
                bound = max(degree, self._gb_bound, 1)
                weights = (1,) * n + tuple(g.degree() for g in self.generators)
                gb = groebner_basis(self._tag_ideal(), order, degree_bound=bound, weights=weights, pair_budget=self.pair_budget)
                self._gb_bound = bound
            else:
                gb = groebner_basis(self._tag_ideal(), order, pair_budget=self.pair_budget)
                self._gb_bound = -1
            self._gb = gb
            return gb

    def evaluate_witness(self, w: Polynomial) -> Polynomial:
        """Substitute the generators into a polynomial in the tag variables."""
        if not self.generators:
            return Polynomial.constant(w.constant_term(), self.nvars)
        return w.substitute(list(self.generators))

    def _check_query(self, f: Polynomial) -> None:
        if f.nvars != self.nvars:
            raise DimensionError(f"query lives in {f.nvars} variables, presentation in {self.nvars}")

    def membership(self, f: Polynomial, method: str = "auto") -> Membership:
        self._check_query(f)
        if method == "auto":
            method = "linear" if self.homogeneous else "groebner"
        if method == "groebner":
            res = self._membership_groebner(f)
        elif method == "linear":
            res = self._membership_linear(f)
        else:
            raise ValueError(f"unknown membership method {method!r}")
        if res.witness is not None and self.evaluate_witness(res.witness) != f:
            raise AssertionError(f"membership witness for {f} does not substitute back")  # pragma: no cover
        return res

    def _membership_groebner(self, f: Polynomial) -> Membership:
        n, m = self.nvars, self.ngenerators
        if f.is_constant():
            return Membership(IN, Polynomial.constant(f.constant_term(), m), "groebner")
        if m == 0:
            return Membership(OUT, None, "groebner")
        gb = self.tag_basis(_weighted_degree(f))
        nf = gb.normal_form(f.embed(n + m))
        if any(any(e[:n]) for e in nf.terms):
            return Membership(OUT, None, "groebner")
        witness = Polynomial({e[n:]: c for e, c in nf.terms.items()}, m)
        return Membership(IN, witness, "groebner")

    def graded_spans(self) -> _GradedSpans:
        with self._lock:
            if self._graded is None:
                self._graded = _GradedSpans(self.generators, self.nvars)
            return self._graded

    def _membership_linear(self, f: Polynomial) -> Membership:
        if not self.homogeneous:
            raise PreconditionError("linear membership needs homogeneous generators")
        m = self.ngenerators
        spans = self.graded_spans()
        witness = Polynomial.zero(m)
        for d, part in f.homogeneous_components():
            w = spans.express(part)
            if w is None:
                return Membership(OUT, None, "linear")
            witness = witness + w
        return Membership(IN, witness, "linear")

    def contains(self, f: Polynomial) -> bool:
        return self.membership(f).is_member

    def adjoin(self, extra: Iterable[Polynomial]) -> "SubalgebraPresentation":
        """A presentation with more generators; graded spans below the new degrees are reused."""
        extra = list(extra)
        out = SubalgebraPresentation(list(self.generators) + extra, self.nvars, self.pair_budget)
        if self._graded is not None and out.homogeneous and extra:
            out._graded = _GradedSpans(out.generators, out.nvars)
            out._graded.seed_from(self._graded, min(g.degree() for g in extra))
        return out

    # serialization

    def to_json(self) -> str:
        return json.dumps({"nvars": self.nvars, "generators": [format_polynomial(g) for g in self.generators]})

    @classmethod
    def from_json(cls, text: str) -> "SubalgebraPresentation":
        data = json.loads(text)
        if isinstance(data, list):
            gens = [parse_polynomial(s) for s in data]
            nvars = max((g.nvars for g in gens), default=1)
        else:
            nvars = data["nvars"]
            gens = [parse_polynomial(s, nvars) for s in data["generators"]]
        return cls([g.embed(nvars) if g.nvars < nvars else g for g in gens], nvars)


def membership(f: Polynomial, B: SubalgebraPresentation, method: str = "auto") -> Membership:
    return B.membership(f, method)


def jacobian_rank_at(gens: Sequence[Polynomial], point: Sequence) -> int:
    rows = [[g.diff(i)(*point) for i in range(len(point))] for g in gens]
    return rank(rows) if rows else 0


def transcendence_degree(B: SubalgebraPresentation, trials: int = 5, seed: int = 0, box: int = JACOBIAN_BOX) -> int:
    """Maximal Jacobian rank of the generators over ``trials`` seeded random integer points.

    Generic rank equals the transcendence degree; a wrong (too small) answer
    needs every sampled point to land on a proper algebraic subset.
    """
    if trials < 1:
        raise PreconditionError("transcendence_degree needs trials >= 1")
    rng = np.random.default_rng(seed)
    best = 0
    cap = min(B.ngenerators, B.nvars)
    for _ in range(trials):
        point = [int(v) for v in rng.integers(-box, box + 1, size=B.nvars)]
        best = max(best, jacobian_rank_at(B.generators, point))
        if best == cap:
            break
    return best


__all__ = [
    "IN",
    "OUT",
    "Membership",
    "SubalgebraPresentation",
    "jacobian_rank_at",
    "membership",
    "transcendence_degree",
]
