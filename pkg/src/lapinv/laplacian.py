"""Laplacian verdicts for generated subalgebras.

An algebra ``B = R[S]`` containing ``r^2`` is closed under the Laplacian
exactly when ``Delta f`` and ``<grad f, grad g>`` lie in B for all f, g in S,
since Delta of a product expands into those two kinds of terms. This module
checks that condition, iterates the closure that adjoins whatever is missing,
and wraps the check as the "separating set generates" decision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from lapinv.errors import IndeterminateError, PreconditionError
from lapinv.grammar import format_polynomial
from lapinv.poly import Polynomial, grad_inner, grlex_key
from lapinv.subalgebra import IN, OUT, Membership, SubalgebraPresentation

LAPLACIAN = "LAPLACIAN"
NOT_LAPLACIAN = "NOT_LAPLACIAN"
INDETERMINATE = "INDETERMINATE"

DEFAULT_STAGE_BUDGET = 16


@dataclass(frozen=True)
class Check:
    """One condition: ``kind`` is ``"laplacian"`` (Delta of sources[0]) or ``"gradient"`` (pairing of two sources)."""

    kind: str
    sources: tuple  # indices into the generator list
    value: Polynomial
    membership: Membership

    @property
    def passed(self) -> bool:
        return self.membership.verdict == IN

    def describe(self, gens: Sequence[Polynomial]) -> str:
        if self.kind == "laplacian":
            return f"Delta({gens[self.sources[0]]})"
        i, j = self.sources
        return f"<grad({gens[i]}), grad({gens[j]})>"


@dataclass
class LaplacianReport:
    verdict: str
    generators: list
    checks: list = field(default_factory=list)
    r2_adjoined: bool = False
    note: str = ""
    interpretation: str = ""
    caveat: str = ""

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        gens = self.generators
        names = [f"y{i + 1}" for i in range(len(gens))]

        def entry(c: Check) -> dict:
            d = {
                "condition": c.describe(gens),
                "sources": [format_polynomial(gens[s]) for s in c.sources],
                "value": format_polynomial(c.value),
                "membership": c.membership.verdict,
            }
            if c.membership.witness is not None:
                d["witness"] = c.membership.witness_str(names)
            return d

        out = {
            "verdict": self.verdict,
            "generators": {n: format_polynomial(g) for n, g in zip(names, gens)},
            "r2_adjoined": self.r2_adjoined,
            "checks": len(self.checks),
            "failures": [entry(c) for c in self.failures],
        }
        if self.note:
            out["note"] = self.note
        if self.interpretation:
            out["interpretation"] = self.interpretation
        if self.caveat:
            out["caveat"] = self.caveat
        return out


def _clean(S: Iterable[Polynomial]) -> list[Polynomial]:
    # drop constants and literal duplicates, keep first-occurrence order
    out, seen = [], set()
    for f in S:
        if f.is_constant() or f in seen:
            continue
        seen.add(f)
        out.append(f)
    return out


def _nvars_of(S: Sequence[Polynomial], nvars: int | None) -> int:
    if nvars is not None:
        return nvars
    if not S:
        raise PreconditionError("an empty polynomial set needs an explicit nvars")
    return S[0].nvars


def condition_values(gens: Sequence[Polynomial]):
    """Yield ``(kind, sources, polynomial)`` for every Laplacian and gradient-pairing condition."""
    for i, f in enumerate(gens):
        yield "laplacian", (i,), f.laplacian()
    for i in range(len(gens)):
        for j in range(i, len(gens)):
            yield "gradient", (i, j), grad_inner(gens[i], gens[j])


def _run_checks(gens: list[Polynomial], B: SubalgebraPresentation, method: str, stop_early: bool) -> tuple[str, list, str]:
    checks = []
    try:
        for kind, src, val in condition_values(gens):
            mem = B.membership(val, method)
            checks.append(Check(kind, src, val, mem))
            if stop_early and mem.verdict == OUT:
                break
    except IndeterminateError as exc:
        return INDETERMINATE, checks, str(exc)
    verdict = LAPLACIAN if all(c.passed for c in checks) else NOT_LAPLACIAN
    return verdict, checks, ""


def is_laplacian_system(
    S: Iterable[Polynomial],
    nvars: int | None = None,
    method: str = "auto",
    stop_early: bool = False,
    require_literal_r2: bool = False,
) -> LaplacianReport:
    """Decide whether the algebra generated by ``S`` is closed under the Laplacian.

    ``r^2`` must lie in the algebra. If it is not literally one of the
    generators but is a member (``f_11 + ... + f_kk`` for inner-product
    generators, say), it is adjoined first; this leaves the algebra unchanged.
    ``require_literal_r2`` turns that into an error instead.
    """
    gens = _clean(S)
    n = _nvars_of(gens, nvars)
    r2 = Polynomial.radius_squared(n)
    adjoined = False
    if r2 not in gens:
        if require_literal_r2:
            raise PreconditionError(f"the generating set must contain r^2 = {r2}")
        B0 = SubalgebraPresentation(gens, n)
        try:
            inside = B0.membership(r2).is_member
        except IndeterminateError as exc:
            return LaplacianReport(INDETERMINATE, gens, note=f"membership of r^2: {exc}")
        if not inside:
            raise PreconditionError(f"r^2 = {r2} does not belong to the algebra generated by the set")
        gens = gens + [r2]
        adjoined = True
    B = SubalgebraPresentation(gens, n)
    verdict, checks, note = _run_checks(gens, B, method, stop_early)
    return LaplacianReport(verdict, gens, checks, adjoined, note)


@dataclass
class ClosureTrace:
    stages: list  # stages[l] is the generator list of S_(l+1)
    adjoined: list  # adjoined[l] is T_(l+2), the polynomials added to reach stages[l+1]
    stabilized: bool
    stage_budget: int
    note: str = ""

    @property
    def final(self) -> list:
        return self.stages[-1]

    def presentation(self) -> SubalgebraPresentation:
        return SubalgebraPresentation(self.final, self.final[0].nvars)

    def to_dict(self) -> dict:
        out = {
            "stabilized": self.stabilized,
            "stage_budget": self.stage_budget,
            "stage_count": len(self.stages),
            "stages": [[format_polynomial(g) for g in st] for st in self.stages],
            "adjoined": [[format_polynomial(g) for g in t] for t in self.adjoined],
        }
        if self.note:
            out["note"] = self.note
        return out


def laplacian_closure(
    S: Iterable[Polynomial],
    stage_budget: int = DEFAULT_STAGE_BUDGET,
    nvars: int | None = None,
    method: str = "auto",
) -> ClosureTrace:
    """Iterate ``S_l = S_(l-1) + T_l`` starting from ``S_1 = S + {r^2}``.

    ``T_l`` collects Laplacians and gradient pairings of elements of
    ``S_(l-1)``, normalized, visited by degree, each kept only when it lies
    outside the algebra of ``S_(l-1)`` and the candidates kept before it. Stops when ``T_l`` is empty (stabilized) or after
    ``stage_budget`` stages. Raises IndeterminateError when a membership
    query runs out of budget.
    """
    if stage_budget < 1:
        raise PreconditionError("stage_budget must be at least 1")
    S = list(S)
    n = _nvars_of(S, nvars)
    r2 = Polynomial.radius_squared(n)
    current = _clean(S)
    if r2 not in current:
        current.append(r2)
    stages = [current]
    adjoined: list = []
    while True:
        B = SubalgebraPresentation(current, n)
        seen = set(current)
        cands = []
        for _kind, _src, val in condition_values(current):
            if val.is_constant():
                continue
            cand = val.normalized()
            if cand not in seen:
                seen.add(cand)
                cands.append(cand)
        # greedy by degree: a candidate already in the algebra of the stage
        # so far is skipped; the algebra reached by the stage is the same
        cands.sort(key=lambda c: (c.degree(), grlex_key(c.leading_term()[0])))
        new: list[Polynomial] = []
        for cand in cands:
            if B.membership(cand, method).verdict == OUT:
                new.append(cand)
                B = B.adjoin([cand])
        if not new:
            return ClosureTrace(stages, adjoined, True, stage_budget)
        if len(stages) >= stage_budget:
            return ClosureTrace(stages, adjoined, False, stage_budget, note="stage budget exhausted before stabilization")
        adjoined.append(new)
        current = current + new
        stages.append(current)


GENERATES = "S generates the full algebra of basic polynomials"
DOES_NOT_GENERATE = "S does not generate the full algebra of basic polynomials"
CONDITIONAL = (
    "separation of fibers was not asserted; the verdict only says whether the generated algebra "
    "is Laplacian, and reads as a generation statement only for a separating set"
)


def separating_generates_verdict(
    S: Iterable[Polynomial],
    separating_asserted: bool = False,
    nvars: int | None = None,
    method: str = "auto",
) -> LaplacianReport:
    """For a separating set whose algebra contains ``r^2``: it generates all basic polynomials iff that algebra is Laplacian."""
    report = is_laplacian_system(S, nvars, method)
    if report.verdict == LAPLACIAN:
        report.interpretation = GENERATES
    elif report.verdict == NOT_LAPLACIAN:
        report.interpretation = DOES_NOT_GENERATE
    if not separating_asserted:
        report.caveat = CONDITIONAL
    return report


__all__ = [
    "Check",
    "ClosureTrace",
    "DEFAULT_STAGE_BUDGET",
    "INDETERMINATE",
    "LAPLACIAN",
    "LaplacianReport",
    "NOT_LAPLACIAN",
    "condition_values",
    "is_laplacian_system",
    "laplacian_closure",
    "separating_generates_verdict",
]
