"""Finite orthogonal groups with rational entries, and sampling checks built on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from lapinv._scalar import ONE, ZERO, to_scalar
from lapinv.errors import DimensionError, GroupCapExceeded, PreconditionError
from lapinv.grammar import format_polynomial
from lapinv.laplacian import LaplacianReport, is_laplacian_system
from lapinv.linalg import rank
from lapinv.poly import Polynomial, linear_substitute, monomials_of_degree
from lapinv.subalgebra import OUT, SubalgebraPresentation, transcendence_degree

DEFAULT_CAP = 10**4
SAMPLE_BOX = 20

HOLDS = "HOLDS"
NOT_OBSERVED = "NOT_OBSERVED"
NO_COUNTEREXAMPLE = "NO_COUNTEREXAMPLE"
COUNTEREXAMPLE = "COUNTEREXAMPLE"

Matrix = tuple  # tuple of row tuples of exact scalars


def as_matrix(rows) -> Matrix:
    out = tuple(tuple(to_scalar(v) for v in row) for row in rows)
    n = len(out)
    if any(len(r) != n for r in out):
        raise DimensionError("group elements must be square matrices")
    return out


def _mul(A: Matrix, B: Matrix) -> Matrix:
    n = len(A)
    cols = list(zip(*B))
    return tuple(tuple(sum((A[i][k] * cols[j][k] for k in range(n)), ZERO) for j in range(n)) for i in range(n))


def _transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A))


def _identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def is_orthogonal(A: Matrix) -> bool:
    return _mul(_transpose(A), A) == _identity(len(A))


def apply_matrix(A: Matrix, point: Sequence) -> tuple:
    return tuple(sum((a * p for a, p in zip(row, point)), ZERO) for row in A)


@dataclass(frozen=True)
class FiniteGroup:
    n: int
    elements: tuple  # identity first, then breadth-first discovery order

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def act(self, f: Polynomial, g: Matrix) -> Polynomial:
        """``x -> f(g x)``."""
        images = []
        for row in g:
            images.append(Polynomial({tuple(1 if k == j else 0 for k in range(self.n)): c for j, c in enumerate(row) if c}, self.n))
        return linear_substitute(f, images)

    def reynolds(self, f: Polynomial) -> Polynomial:
        total = Polynomial.zero(self.n)
        for g in self.elements:
            total = total + self.act(f, g)
        return total.scale(to_scalar(1) / self.order)

    def is_invariant(self, f: Polynomial) -> bool:
        return all(self.act(f, g) == f for g in self.elements)

    def orbit(self, point: Sequence) -> set:
        p = tuple(to_scalar(v) for v in point)
        return {apply_matrix(g, p) for g in self.elements}

    def to_json(self) -> list:
        from lapinv._scalar import scalar_str

        return [[[scalar_str(v) for v in row] for row in g] for g in self.elements]


def group_closure(generators: Sequence, cap: int = DEFAULT_CAP) -> FiniteGroup:
    """Breadth-first closure of exact orthogonal generators under multiplication."""
    gens = [as_matrix(g) for g in generators]
    if not gens:
        raise PreconditionError("need at least one generator (use the identity for the trivial group)")
    n = len(gens[0])
    for g in gens:
        if len(g) != n:
            raise DimensionError("generators of different sizes")
        if not is_orthogonal(g):
            raise PreconditionError(f"generator {g} is not orthogonal")
    ident = _identity(n)
    seen = {ident}
    order = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for A in frontier:
            for g in gens:
                B = _mul(g, A)
                if B not in seen:
                    if len(seen) >= cap:
                        raise GroupCapExceeded(f"group closure passed {cap} elements; the group is probably infinite")
                    seen.add(B)
                    order.append(B)
                    nxt.append(B)
        frontier = nxt
    # inverses are automatic for a finite set closed under products
    return FiniteGroup(n, tuple(order))


def reynolds_invariant_basis(G: FiniteGroup, degree_bound: int | None = None) -> list[Polynomial]:
    """Averages of monomials up to ``degree_bound`` (default ``|G|``), pruned to algebra generators.

    Candidates are visited by degree, then in graded-lex descending order of
    the averaged monomial; one is kept when it is outside the algebra
    generated by those kept before it.
    """
    if degree_bound is None:
        degree_bound = G.order
    if degree_bound < 1:
        raise PreconditionError("degree_bound must be at least 1")
    kept: list[Polynomial] = []
    for d in range(1, degree_bound + 1):
        B = SubalgebraPresentation(kept, G.n)
        for m in monomials_of_degree(G.n, d):
            f = G.reynolds(Polynomial.monomial(m))
            if not f:
                continue
            f = f.normalized()
            if B.membership(f, "linear").verdict == OUT:
                kept.append(f)
                B = SubalgebraPresentation(kept, G.n)
    return kept


@dataclass
class IitReport:
    group_order: int
    n: int
    generators: list
    laplacian: LaplacianReport
    trdeg: int

    @property
    def laplacian_ok(self) -> bool:
        return self.laplacian.verdict == "LAPLACIAN"

    @property
    def trdeg_ok(self) -> bool:
        return self.trdeg == self.n

    @property
    def passed(self) -> bool:
        return self.laplacian_ok and self.trdeg_ok

    def to_dict(self) -> dict:
        return {
            "group_order": self.group_order,
            "n": self.n,
            "generators": [format_polynomial(g) for g in self.generators],
            "laplacian": self.laplacian.to_dict(),
            "laplacian_ok": self.laplacian_ok,
            "transcendence_degree": self.trdeg,
            "trdeg_ok": self.trdeg_ok,
            "verdict": "PASS" if self.passed else "FAIL",
        }


def iit_pipeline(
    G: FiniteGroup,
    degree_bound: int | None = None,
    trials: int = 5,
    seed: int = 0,
    generators: Sequence[Polynomial] | None = None,
) -> IitReport:
    """Invariant generators of G, then both halves of the criterion: Laplacian, and transcendence degree n.

    ``generators`` replaces the computed invariants (used for negative controls).
    """
    gens = list(generators) if generators is not None else reynolds_invariant_basis(G, degree_bound)
    lap = is_laplacian_system(gens, G.n)
    td = transcendence_degree(SubalgebraPresentation(lap.generators, G.n), trials, seed)
    return IitReport(G.order, G.n, lap.generators, lap, td)


@dataclass
class OrbitSeparation:
    verdict: str
    trials: int
    seed: int
    pair: tuple | None = None

    def to_dict(self) -> dict:
        from lapinv._scalar import scalar_str

        out = {"verdict": self.verdict, "trials": self.trials, "seed": self.seed}
        if self.pair is not None:
            out["pair"] = [[scalar_str(v) for v in p] for p in self.pair]
        return out


def orbit_separation_sample(
    G: FiniteGroup, S: Sequence[Polynomial], trials: int = 2000, seed: int = 0, box: int = SAMPLE_BOX
) -> OrbitSeparation:
    """Look for two sampled integer points with equal values on S but different orbits.

    Only falsifies separation: NO_COUNTEREXAMPLE is evidence, not proof.
    """
    S = list(S)
    for f in S:
        if f.nvars != G.n:
            raise DimensionError(f"{f} does not live on R^{G.n}")
        if not G.is_invariant(f):
            raise PreconditionError(f"{f} is not invariant under the group")
    rng = np.random.default_rng(seed)
    reps: dict = {}  # S-values -> (first point seen, its orbit)
    for _ in range(trials):
        p = tuple(to_scalar(int(v)) for v in rng.integers(-box, box + 1, size=G.n))
        key = tuple(f(p) for f in S)
        rep = reps.get(key)
        if rep is None:
            reps[key] = (p, G.orbit(p))
        elif p not in rep[1]:
            return OrbitSeparation(COUNTEREXAMPLE, trials, seed, (rep[0], p))
    return OrbitSeparation(NO_COUNTEREXAMPLE, trials, seed)


@dataclass
class KnsReport:
    k: int
    trials: int
    seed: int
    n: int
    max_rank: int
    ranks: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return HOLDS if self.max_rank == self.n else NOT_OBSERVED

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "trials": self.trials,
            "seed": self.seed,
            "n": self.n,
            "max_rank": self.max_rank,
            "ranks": self.ranks,
            "verdict": self.verdict,
            "note": "rank sampled at seeded random points; HOLDS is conclusive, NOT_OBSERVED is probabilistic",
        }


def kns_points(n: int, k: int, trial: int, seed: int, box: int = SAMPLE_BOX) -> list[tuple]:
    """The ``k`` points of one trial; the first ``k`` points for ``k + 1`` are the same."""
    rng = np.random.default_rng([seed, trial])
    return [tuple(int(v) for v in rng.integers(-box, box + 1, size=n)) for _ in range(k)]


def kns_check(A_gens: Sequence[Polynomial], k: int, trials: int = 5, seed: int = 0, box: int = SAMPLE_BOX) -> KnsReport:
    """Rank of ``{grad rho_a (x_b)}`` over sampled tuples ``(x_1, ..., x_k)``."""
    if k < 1:
        raise PreconditionError("k must be at least 1")
    if trials < 1:
        raise PreconditionError("trials must be at least 1")
    A_gens = list(A_gens)
    if not A_gens:
        raise PreconditionError("need at least one generator")
    n = A_gens[0].nvars
    grads = [g.gradient() for g in A_gens]
    ranks = []
    for t in range(trials):
        rows = []
        for x in kns_points(n, k, t, seed, box):
            for gr in grads:
                rows.append([d(*x) for d in gr])
        ranks.append(rank(rows))
    return KnsReport(k, trials, seed, n, max(ranks), ranks)


__all__ = [
    "COUNTEREXAMPLE",
    "DEFAULT_CAP",
    "FiniteGroup",
    "HOLDS",
    "IitReport",
    "KnsReport",
    "NOT_OBSERVED",
    "NO_COUNTEREXAMPLE",
    "OrbitSeparation",
    "apply_matrix",
    "as_matrix",
    "group_closure",
    "iit_pipeline",
    "is_orthogonal",
    "kns_check",
    "kns_points",
    "orbit_separation_sample",
    "reynolds_invariant_basis",
]
