"""Polarizations on ``V^k`` and the homogeneity comparison built on them.

Points of ``V^k`` are tuples ``(v_1, ..., v_k)`` of vectors in ``R^n``. The
coordinate ``a`` of copy ``i`` (both 0-based) is variable ``i*n + a`` of a
ring with ``n*k`` variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from lapinv.errors import DimensionError, PreconditionError
from lapinv.laplacian import DEFAULT_STAGE_BUDGET, ClosureTrace, laplacian_closure
from lapinv.linalg import EchelonSpan
from lapinv.poly import Polynomial, grlex_key, linear_substitute
from lapinv.subalgebra import OUT, SubalgebraPresentation

EQUAL_UP_TO_DEGREE = "EQUAL_UP_TO_DEGREE"
STRICTLY_FINER = "STRICTLY_FINER"


class MultiVariableLayout:
    def __init__(self, n: int, k: int):
        if n < 1 or k < 1:
            raise ValueError("layout needs n >= 1 and k >= 1")
        self.n = n
        self.k = k

    @property
    def nvars(self) -> int:
        return self.n * self.k

    def __eq__(self, other) -> bool:
        return isinstance(other, MultiVariableLayout) and (self.n, self.k) == (other.n, other.k)

    def __hash__(self) -> int:
        return hash((self.n, self.k))

    def __repr__(self) -> str:
        return f"MultiVariableLayout(n={self.n}, k={self.k})"

    def index(self, i: int, a: int) -> int:
        self.check_copy(i)
        if not 0 <= a < self.n:
            raise IndexError(f"coordinate {a} out of range for n={self.n}")
        return i * self.n + a

    def check_copy(self, i: int) -> None:
        if not 0 <= i < self.k:
            raise IndexError(f"copy index {i} out of range for k={self.k}")

    def names(self) -> list[str]:
        return [f"v{i + 1}_{a + 1}" for i in range(self.k) for a in range(self.n)]

    def coordinate(self, i: int, a: int) -> Polynomial:
        return Polynomial.variable(self.index(i, a), self.nvars)

    def copy_vector(self, i: int) -> list[Polynomial]:
        return [self.coordinate(i, a) for a in range(self.n)]

    def on_copy(self, f: Polynomial, i: int) -> Polynomial:
        """``(v_1, ..., v_k) -> f(v_i)``."""
        if f.nvars != self.n:
            raise DimensionError(f"polynomial has {f.nvars} variables, layout base dimension is {self.n}")
        self.check_copy(i)
        return f.embed(self.nvars, i * self.n)

    def inner_product(self, i: int, j: int) -> Polynomial:
        """``f_ij = <v_i, v_j>``."""
        out = Polynomial.zero(self.nvars)
        for a in range(self.n):
            out = out + self.coordinate(i, a) * self.coordinate(j, a)
        return out

    def inner_products(self) -> list[Polynomial]:
        return [self.inner_product(i, j) for i in range(self.k) for j in range(i, self.k)]

    def determinant(self, copies: Sequence[int]) -> Polynomial:
        """``det(v_(c_1), ..., v_(c_n))`` for ``n`` distinct copies."""
        copies = list(copies)
        if len(copies) != self.n:
            raise ValueError(f"a determinant needs exactly {self.n} copies")
        rows = [self.copy_vector(c) for c in copies]
        return _det(rows)

    def determinants(self) -> dict:
        return {S: self.determinant(S) for S in combinations(range(self.k), self.n)}

    def restrict_to_first(self, H: Polynomial) -> Polynomial:
        """Set ``v_2 = ... = v_k = 0`` and read the result as a polynomial on V."""
        n = self.n
        return Polynomial({e[:n]: c for e, c in H.terms.items() if not any(e[n:])}, n)


def _det(rows: list[list[Polynomial]]) -> Polynomial:
    # cofactor expansion along the first row; fine for n <= 4
    if len(rows) == 1:
        return rows[0][0]
    out = Polynomial.zero(rows[0][0].nvars)
    for c, entry in enumerate(rows[0]):
        if not entry:
            continue
        minor = [r[:c] + r[c + 1 :] for r in rows[1:]]
        term = entry * _det(minor)
        out = out + term if c % 2 == 0 else out - term
    return out


@dataclass(frozen=True)
class PolarizationFamily:
    source: Polynomial
    layout: MultiVariableLayout
    family: dict  # alpha (length k, |alpha| = d) -> polynomial on the layout

    @property
    def degree(self) -> int:
        return self.source.degree()

    def __getitem__(self, alpha) -> Polynomial:
        return self.family.get(tuple(alpha), Polynomial.zero(self.layout.nvars))

    def reconstruct(self) -> Polynomial:
        """``sum_alpha s^alpha f_alpha`` in the ring of layout variables followed by ``s_1..s_k``."""
        L = self.layout
        total = L.nvars + L.k
        out = Polynomial.zero(total)
        for alpha, fa in self.family.items():
            s_mono = Polynomial.monomial((0,) * L.nvars + tuple(alpha))
            out = out + s_mono * fa.embed(total)
        return out


def _sum_of_scaled_copies(f: Polynomial, layout: MultiVariableLayout) -> Polynomial:
    """``f(s_1 v_1 + ... + s_k v_k)`` in the ring of layout variables followed by ``s_1..s_k``."""
    n, k = layout.n, layout.k
    total = layout.nvars + k
    images = []
    for a in range(n):
        img = Polynomial.zero(total)
        for i in range(k):
            img = img + Polynomial.variable(layout.nvars + i, total) * Polynomial.variable(layout.index(i, a), total)
        images.append(img)
    return linear_substitute(f, images)


def classical_polarizations(f: Polynomial, k: int) -> PolarizationFamily:
    """Coefficients ``f_alpha`` of ``f(sum_i s_i v_i) = sum_(|alpha|=d) s^alpha f_alpha(v_1..v_k)``."""
    if not f or not f.is_homogeneous() or f.degree() < 1:
        raise PreconditionError("classical polarization needs a homogeneous polynomial of degree >= 1")
    layout = MultiVariableLayout(f.nvars, k)
    expanded = _sum_of_scaled_copies(f, layout)
    N = layout.nvars
    family: dict = {}
    for e, c in expanded.terms.items():
        alpha, mono = e[N:], e[:N]
        fam = family.setdefault(alpha, {})
        fam[mono] = c
    return PolarizationFamily(f, layout, {a: Polynomial(t, N) for a, t in sorted(family.items(), reverse=True)})


def _check_layout(H: Polynomial, layout: MultiVariableLayout) -> None:
    if H.nvars != layout.nvars:
        raise DimensionError(f"polynomial has {H.nvars} variables, layout has {layout.nvars}")


def polarization_operator(H: Polynomial, layout: MultiVariableLayout, i: int, j: int) -> Polynomial:
    """``P_ij H = sum_a x_i^a dH/dx_j^a``."""
    _check_layout(H, layout)
    layout.check_copy(i)
    layout.check_copy(j)
    out = Polynomial.zero(layout.nvars)
    for a in range(layout.n):
        d = H.diff(layout.index(j, a))
        if d:
            out = out + layout.coordinate(i, a) * d
    return out


def wallach_operator(H: Polynomial, f: Polynomial, layout: MultiVariableLayout, i: int, j: int) -> Polynomial:
    """``P^f_ij H = sum_a (df/dx^a)(v_i) dH/dx_j^a``; ``f = r^2/2`` gives back ``P_ij``."""
    _check_layout(H, layout)
    layout.check_copy(i)
    layout.check_copy(j)
    if not f.is_homogeneous():
        raise PreconditionError("the Wallach operator needs a homogeneous f")
    if f.nvars != layout.n:
        raise DimensionError(f"f has {f.nvars} variables, layout base dimension is {layout.n}")
    out = Polynomial.zero(layout.nvars)
    for a in range(layout.n):
        d = H.diff(layout.index(j, a))
        if d:
            out = out + layout.on_copy(f.diff(a), i) * d
    return out


@dataclass
class GeneralizedPolarizations:
    layout: MultiVariableLayout
    seeds: list
    trace: ClosureTrace

    @property
    def stabilized(self) -> bool:
        return self.trace.stabilized

    @property
    def generators(self) -> list:
        return self.trace.final

    def presentation(self) -> SubalgebraPresentation:
        return SubalgebraPresentation(self.trace.final, self.layout.nvars)


def polarization_seeds(A_gens: Sequence[Polynomial], k: int) -> tuple[MultiVariableLayout, list]:
    A_gens = list(A_gens)
    if not A_gens:
        raise PreconditionError("need at least one generator")
    layout = MultiVariableLayout(A_gens[0].nvars, k)
    seeds = layout.inner_products()
    for f in A_gens:
        if f.is_constant():
            continue
        g = layout.on_copy(f, 0)
        if g not in seeds:
            seeds.append(g)
    return layout, seeds


def build_generalized_polarizations(
    A_gens: Sequence[Polynomial], k: int, stage_budget: int = DEFAULT_STAGE_BUDGET, method: str = "auto"
) -> GeneralizedPolarizations:
    """Laplacian closure on ``V^k`` of all ``<v_i, v_j>`` together with ``f(v_1)`` for f in ``A_gens``."""
    if k < 1:
        raise PreconditionError("k must be at least 1")
    layout, seeds = polarization_seeds(A_gens, k)
    trace = laplacian_closure(seeds, stage_budget, layout.nvars, method)
    return GeneralizedPolarizations(layout, seeds, trace)


def restrict_to_first_factor(generators: Sequence[Polynomial], layout: MultiVariableLayout) -> list[Polynomial]:
    """Restrict each generator to ``V x 0 x ... x 0``; zero and constant results are dropped."""
    out = []
    for g in generators:
        r = layout.restrict_to_first(g)
        if not r.is_constant():
            out.append(r)
    return out


@dataclass
class HomogeneityComparison:
    verdict: str
    degree_bound: int
    k: int
    witness: Polynomial | None
    restricted: list
    polarizations: GeneralizedPolarizations
    kns: object = None

    def to_dict(self) -> dict:
        from lapinv.grammar import format_polynomial

        out = {
            "verdict": self.verdict,
            "degree_bound": self.degree_bound,
            "k": self.k,
            "closure_stages": len(self.polarizations.trace.stages),
            "closure_generators": len(self.polarizations.generators),
            "restricted_generators": [format_polynomial(g) for g in self.restricted],
            "witness": format_polynomial(self.witness) if self.witness is not None else None,
        }
        if self.kns is not None:
            out["kns"] = self.kns.to_dict()
        return out


def _independent(polys: Sequence[Polynomial]) -> list[Polynomial]:
    span = EchelonSpan(key=grlex_key, track=False)
    return [p for p in polys if span.add(p.terms)]


def homogeneity_compare(
    A_gens: Sequence[Polynomial],
    k: int = 2,
    degree_bound: int = 4,
    stage_budget: int = DEFAULT_STAGE_BUDGET,
    method: str = "auto",
    kns_trials: int = 5,
    seed: int = 0,
) -> HomogeneityComparison:
    """Compare the restriction of ``A^(k)`` to the first factor with ``R[A_gens]`` up to ``degree_bound``.

    The restriction always contains ``R[A_gens]``; it is strictly larger in
    some degree <= bound exactly when a restricted generator of that degree
    falls outside ``R[A_gens]``, and that generator is returned as witness.
    """
    from lapinv.groups import kns_check

    if degree_bound < 2:
        raise PreconditionError("degree_bound must be at least 2")
    A_gens = [g for g in A_gens if not g.is_constant()]
    if not A_gens or any(not g.is_homogeneous() for g in A_gens):
        raise PreconditionError("homogeneity comparison needs nonconstant homogeneous generators")
    if k < 2:
        raise PreconditionError("restriction to the first factor needs k >= 2")
    pol = build_generalized_polarizations(A_gens, k, stage_budget, method)
    if not pol.stabilized:
        raise PreconditionError(f"closure on V^{k} did not stabilize within {stage_budget} stages")
    restricted = _independent(
        sorted(
            (r for r in restrict_to_first_factor(pol.generators, pol.layout) if r.degree() <= degree_bound),
            key=Polynomial.degree,
        )
    )
    base = SubalgebraPresentation(A_gens, A_gens[0].nvars)
    witness = None
    for r in restricted:
        if base.membership(r, method).verdict == OUT:
            witness = r
            break
    kns = kns_check(A_gens, k, trials=kns_trials, seed=seed)
    verdict = EQUAL_UP_TO_DEGREE if witness is None else STRICTLY_FINER
    return HomogeneityComparison(verdict, degree_bound, k, witness, restricted, pol, kns)


__all__ = [
    "EQUAL_UP_TO_DEGREE",
    "GeneralizedPolarizations",
    "HomogeneityComparison",
    "MultiVariableLayout",
    "PolarizationFamily",
    "STRICTLY_FINER",
    "build_generalized_polarizations",
    "classical_polarizations",
    "homogeneity_compare",
    "polarization_operator",
    "polarization_seeds",
    "restrict_to_first_factor",
    "wallach_operator",
]
