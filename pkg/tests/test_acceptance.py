"""The twelve acceptance criteria, one test each.

A summary line per criterion is printed at the end of the run (see conftest).
"""

import json
import random
from fractions import Fraction
from itertools import combinations
from math import factorial, prod
from pathlib import Path

import numpy as np
import sympy

from helpers import P
from lapinv.cli import dumps, run, strip_timing
from lapinv.grammar import format_polynomial
from lapinv.groups import HOLDS, NOT_OBSERVED, group_closure, iit_pipeline, kns_check, reynolds_invariant_basis
from lapinv.harmonic import harmonic_basis, harmonic_decompose, l2_from_split, schur_ratio, schur_ratios, sphere_inner
from lapinv.jordan import (
    HOMOGENEOUS,
    INHOMOGENEOUS,
    MatrixSpan,
    clifford_foliation_generators,
    clifford_system,
    form_matrix,
    jordan_closure,
    quadratic_form,
    quadratic_homogeneity_test,
)
from lapinv.laplacian import (
    DOES_NOT_GENERATE,
    GENERATES,
    LAPLACIAN,
    NOT_LAPLACIAN,
    is_laplacian_system,
    laplacian_closure,
    separating_generates_verdict,
)
from lapinv.polarization import (
    EQUAL_UP_TO_DEGREE,
    STRICTLY_FINER,
    MultiVariableLayout,
    build_generalized_polarizations,
    homogeneity_compare,
    polarization_operator,
    wallach_operator,
)
from lapinv.poly import Polynomial, apolar_inner, dual_apply, grad_inner, monomials_of_degree
from lapinv.subalgebra import IN, OUT, SubalgebraPresentation, transcendence_degree

ROOT = Path(__file__).resolve().parent.parent

GROUP_BATTERY = {
    "minus_identity": [[[-1, 0], [0, -1]]],
    "cyclic3_r3": [[[0, 0, 1], [1, 0, 0], [0, 1, 0]]],
    "cyclic4": [[[0, -1], [1, 0]]],
    "klein": [[[-1, 0], [0, 1]], [[1, 0], [0, -1]]],
    "swap_signs": [[[0, 1], [1, 0]], [[-1, 0], [0, 1]]],
}

# invariants of the rotation by 120 degrees on the plane (irrational matrix entries)
CYCLIC3_PLANE = ["x1^2 + x2^2", "x1^3 - 3*x1*x2^2", "3*x1^2*x2 - x2^3"]


def cli_verdict(command, polys, **extra):
    job = {"command": command, "polynomials": [format_polynomial(p) for p in polys], "nvars": polys[0].nvars}
    job.update(extra)
    report, code = run(job)
    assert code == 0, report
    return report["result"]


def random_form(rng, n, d, nterms=6):
    terms = {}
    mons = monomials_of_degree(n, d)
    for _ in range(nterms):
        e = mons[int(rng.integers(len(mons)))]
        terms[e] = Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 4)))
    return Polynomial(terms, n)


def test_criterion_01_apolar_norm():
    for n in (1, 2, 3):
        for d in range(7):
            for e in monomials_of_degree(n, d):
                m = Polynomial.monomial(e)
                expected = prod(factorial(a) for a in e)
                assert apolar_inner(m, m) == expected
                # second route: apply the monomial as a differential operator
                assert dual_apply(m, m) == Polynomial.constant(expected, n)


def test_criterion_02_weyl_battery():
    for n in (2, 3):
        for k in (2, 3):
            L = MultiVariableLayout(n, k)
            fij = L.inner_products()
            assert cli_verdict("check-laplacian", fij)["verdict"] == LAPLACIAN
            B = SubalgebraPresentation(fij, L.nvars)
            for f in fij:
                for g in fij:
                    val = grad_inner(f, g)
                    for method in ("groebner", "linear"):
                        res = B.membership(val, method)
                        assert res.verdict == IN
                        w = res.witness
                        assert not w or (w.is_homogeneous() and w.degree() == 1)
                        assert B.evaluate_witness(w) == val


def test_criterion_03_special_orthogonal_battery():
    for n, k in ((2, 2), (2, 3), (3, 3)):
        L = MultiVariableLayout(n, k)
        dets = L.determinants()
        for h in dets.values():
            assert h.laplacian() == Polynomial.zero(L.nvars)
        gens = L.inner_products() + list(dets.values())
        assert cli_verdict("check-laplacian", gens)["verdict"] == LAPLACIAN
        for i in range(k):
            for j in range(k):
                fij = L.inner_product(i, j)
                for S, h in dets.items():
                    val = grad_inner(fij, h)
                    if i == j:
                        # f_ii = |v_i|^2; the Euler operator in v_i doubles h_S
                        assert val == (h.scale(2) if i in S else Polynomial.zero(L.nvars))
                    elif (i in S) == (j in S):
                        assert val == Polynomial.zero(L.nvars)
                    else:
                        out_, in_ = (i, j) if i in S else (j, i)
                        T = tuple(sorted((set(S) - {out_}) | {in_}))
                        assert val in (dets[T], -dets[T])


def test_criterion_04_clifford_identity():
    for m in range(5):
        C = clifford_system(m)
        gens = clifford_foliation_generators(C)
        r2, forms = gens[0], gens[1:]
        for i, Pi in enumerate(C.matrices):
            for j, Pj in enumerate(C.matrices):
                val = grad_inner(forms[i], forms[j])
                # with grad f = 2 P x the pairing is 2 <(P_i P_j + P_j P_i) x, x>
                assert val == quadratic_form(Pi.dot(Pj) + Pj.dot(Pi)).scale(2)
                assert val == (r2.scale(4) if i == j else Polynomial.zero(C.size))
        assert cli_verdict("check-laplacian", gens)["verdict"] == LAPLACIAN


def test_criterion_05_harmonic_suite():
    rng = np.random.default_rng(20240501)
    for _ in range(200):
        n = int(rng.integers(1, 5))
        d = int(rng.integers(0, 7))
        p = random_form(rng, n, d)
        split = harmonic_decompose(p, d)
        assert split.reconstruct() == p
        pieces = [split.summand(i) for i in range(len(split.components))]
        for h in split.components:
            assert h.laplacian() == Polynomial.zero(n)
        for a, b in combinations(pieces, 2):
            assert apolar_inner(a, b) == 0
    for n in (2, 3):
        r2 = Polynomial.radius_squared(n)
        for d in range(6):
            ratios = schur_ratios(d, n).ratios
            for i, c in enumerate(ratios):
                assert c > 0
                basis = harmonic_basis(n, d - 2 * i)
                for h in basis:
                    assert schur_ratio(h * r2**i) == c
                mixed = sum((h.scale(t + 1) for t, h in enumerate(basis)), Polynomial.zero(n))
                assert schur_ratio(mixed * r2**i) == c
            p, q = random_form(rng, n, d), random_form(rng, n, d)
            assert l2_from_split(p, q) == sphere_inner(p, q)


def test_criterion_06_inverse_invariant_theory():
    for name, gens in GROUP_BATTERY.items():
        G = group_closure(gens)
        rep = iit_pipeline(G)
        assert rep.laplacian.verdict == LAPLACIAN, name
        assert rep.trdeg == G.n, name
    # order 3 on the plane: no rational matrix, so the invariants are checked directly
    x, y = sympy.symbols("x1 x2")
    c, s = sympy.Rational(-1, 2), sympy.sqrt(3) / 2
    inv = [P(t) for t in CYCLIC3_PLANE]
    for t in CYCLIC3_PLANE:
        e = sympy.sympify(t.replace("^", "**"))
        assert sympy.expand(e.subs({x: c * x - s * y, y: s * x + c * y}, simultaneous=True) - e) == 0
    assert is_laplacian_system(inv).verdict == LAPLACIAN
    assert transcendence_degree(SubalgebraPresentation(inv, 2)) == 2
    # negative control
    e1, e2sq = P("x1^2 + x2^2"), P("x1^2*x2^2") ** 2
    rep = iit_pipeline(group_closure(GROUP_BATTERY["swap_signs"]), generators=[e1, e2sq])
    assert rep.laplacian.verdict == NOT_LAPLACIAN
    first = rep.laplacian.failures[0]
    assert first.kind == "laplacian" and first.value == e2sq.laplacian()
    B = SubalgebraPresentation([e1, e2sq], 2)
    assert B.membership(first.value, "groebner").verdict == OUT
    assert B.membership(first.value, "linear").verdict == OUT


def test_criterion_07_separating_generates():
    pos = separating_generates_verdict([P("x1^2")], separating_asserted=True)
    assert pos.verdict == LAPLACIAN and pos.interpretation == GENERATES
    L = MultiVariableLayout(2, 2)
    fij = separating_generates_verdict(L.inner_products(), separating_asserted=True)
    assert fij.interpretation == GENERATES
    e1, e2 = P("x1^2 + x2^2"), P("x1^2*x2^2")
    neg = separating_generates_verdict([e1, e2**2], separating_asserted=True)
    assert neg.verdict == NOT_LAPLACIAN and neg.interpretation == DOES_NOT_GENERATE
    first = neg.failures[0]
    assert first.value == (e1 * e2).scale(12)
    assert first.membership.verdict == OUT
    cli = cli_verdict("separating-generates", [e1, e2**2], separating_asserted=True)
    assert cli["verdict"] == NOT_LAPLACIAN and cli["failures"][0]["membership"] == OUT


def test_criterion_08_closure_termination():
    cubic = laplacian_closure([P("x1^3")])
    assert cubic.stabilized and len(cubic.stages) <= 3
    assert cubic.presentation().membership(P("x1")).verdict == IN
    pair = laplacian_closure([P("x1^2 + x2^2"), P("x1^2 - x2^2")])
    assert pair.stabilized and len(pair.stages) == 1
    quartic = laplacian_closure([P("x1^2*x2^2") ** 2])
    assert quartic.stabilized
    Bq = quartic.presentation()
    assert Bq.membership(P("x1^2 + x2^2")).verdict == IN
    assert Bq.membership(P("x1^2*x2^2")).verdict == IN
    for trace in (cubic, pair, quartic):
        assert is_laplacian_system(trace.final).verdict == LAPLACIAN


def test_criterion_09_polarization_identities():
    rng = random.Random(9)
    for d in range(1, 5):
        for n in (1, 2, 3):
            mons = monomials_of_degree(n, d)
            f = Polynomial({e: rng.randint(1, 5) for e in rng.sample(mons, min(3, len(mons)))}, n)
            L = MultiVariableLayout(n, 3)
            F = L.on_copy(f, 0)
            for i in (1, 2):
                H = F
                for _ in range(d):
                    H = polarization_operator(H, L, i, 0)
                assert H == L.on_copy(f, i).scale(factorial(d))
    for n, k in ((2, 2), (3, 2), (2, 3)):
        L = MultiVariableLayout(n, k)
        half = Polynomial.radius_squared(n).scale(Fraction(1, 2))
        for _ in range(50):
            H = Polynomial({tuple(rng.randint(0, 2) for _ in range(L.nvars)): rng.randint(-9, 9) for _ in range(5)}, L.nvars)
            i, j = rng.randrange(k), rng.randrange(k)
            assert wallach_operator(H, half, L, i, j) == polarization_operator(H, L, i, j)
    cases = [([P("x1^2")], 2), ([P("x1^2")], 3), ([P("x1^2 + x2^2")], 2), ([P("x1^2 + x2^2"), P("x1^2*x2^2")], 2)]
    for A, k in cases:
        pol = build_generalized_polarizations(A, k)
        assert pol.stabilized
        L, B = pol.layout, pol.presentation()
        gens = pol.generators
        sampled = [g for g in gens] + [a * b for a in gens for b in gens if a.degree() + b.degree() <= 6]
        for H in rng.sample(sampled, min(12, len(sampled))):
            for i in range(k):
                for j in range(k):
                    assert B.membership(polarization_operator(H, L, i, j)).verdict == IN
                    for f in A:
                        assert B.membership(wallach_operator(H, f, L, i, j)).verdict == IN


def test_criterion_10_homogeneity_cross_validation():
    expected = {0: (HOMOGENEOUS, EQUAL_UP_TO_DEGREE), 1: (HOMOGENEOUS, EQUAL_UP_TO_DEGREE), 3: (INHOMOGENEOUS, STRICTLY_FINER)}
    for m, (jordan_verdict, restriction_verdict) in expected.items():
        C = clifford_system(m)
        q = quadratic_homogeneity_test(C.matrices)
        h = homogeneity_compare(clifford_foliation_generators(C), k=2, degree_bound=4)
        assert (q.verdict, h.verdict) == (jordan_verdict, restriction_verdict)
        if m == 3:
            P0, P1, P2, P3 = C.matrices
            prod4 = P0.dot(P1).dot(P2).dot(P3)
            assert MatrixSpan(C.size, [q.witness, prod4]).dim == 1
            J = jordan_closure(C.matrices)
            W = form_matrix(h.witness)
            assert not J.contains(W)
            assert MatrixSpan(C.size, [W, prod4]).dim == 1


def test_criterion_11_kns_sampling():
    r2 = [P("x1^2 + x2^2")]
    assert kns_check(r2, 1).verdict == NOT_OBSERVED
    assert kns_check(r2, 2).verdict == HOLDS
    for name, gens in GROUP_BATTERY.items():
        basis = reynolds_invariant_basis(group_closure(gens))
        reports = [kns_check(basis, k) for k in (1, 2, 3)]
        assert reports[0].verdict == HOLDS, name
        for lo, hi in zip(reports, reports[1:]):
            assert all(a <= b for a, b in zip(lo.ranks, hi.ranks))
    reports = [kns_check(r2, k) for k in (1, 2, 3)]
    for lo, hi in zip(reports, reports[1:]):
        assert all(a <= b for a, b in zip(lo.ranks, hi.ranks))


def test_criterion_12_cli_determinism():
    jobs = sorted((ROOT / "jobs").glob("*.json"))
    assert jobs
    for path in jobs:
        job = json.loads(path.read_text())
        first = dumps(strip_timing(run(job)[0]))
        second = dumps(strip_timing(run(job)[0]))
        assert first == second
        assert first == (ROOT / "tests" / "golden" / path.name).read_text()
