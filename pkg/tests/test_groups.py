from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import P
from lapinv.errors import DimensionError, GroupCapExceeded, PreconditionError
from lapinv.groups import (
    COUNTEREXAMPLE,
    HOLDS,
    NO_COUNTEREXAMPLE,
    NOT_OBSERVED,
    group_closure,
    iit_pipeline,
    kns_check,
    kns_points,
    orbit_separation_sample,
    reynolds_invariant_basis,
)
from lapinv.laplacian import LAPLACIAN, NOT_LAPLACIAN, is_laplacian_system
from lapinv.poly import Polynomial
from lapinv.subalgebra import IN, SubalgebraPresentation, transcendence_degree

MINUS_I = [[[-1, 0], [0, -1]]]
ROT90 = [[[0, -1], [1, 0]]]
KLEIN = [[[-1, 0], [0, 1]], [[1, 0], [0, -1]]]
SWAP_SIGNS = [[[0, 1], [1, 0]], [[-1, 0], [0, 1]]]
CYCLE3 = [[[0, 0, 1], [1, 0, 0], [0, 1, 0]]]

BATTERY = {
    "minus_identity": (MINUS_I, 2),
    "cyclic3_r3": (CYCLE3, 3),
    "cyclic4": (ROT90, 4),
    "klein": (KLEIN, 4),
    "swap_signs": (SWAP_SIGNS, 8),
}


def same_algebra(A, B, n):
    pa, pb = SubalgebraPresentation(A, n), SubalgebraPresentation(B, n)
    return all(pa.membership(g).verdict == IN for g in B) and all(pb.membership(g).verdict == IN for g in A)


# closure


@pytest.mark.parametrize("name", sorted(BATTERY))
def test_battery_orders(name):
    gens, order = BATTERY[name]
    G = group_closure(gens)
    assert G.order == order
    ident = G.elements[0]
    assert all(ident[i][j] == (1 if i == j else 0) for i in range(G.n) for j in range(G.n))


def test_one_dimensional_sign():
    assert group_closure([[[-1]]]).order == 2


def test_rational_rotation_of_infinite_order():
    rot = [[Fraction(3, 5), Fraction(-4, 5)], [Fraction(4, 5), Fraction(3, 5)]]
    with pytest.raises(GroupCapExceeded):
        group_closure([rot], cap=200)


def test_closure_rejects_bad_generators():
    with pytest.raises(PreconditionError):
        group_closure([[[1, 1], [0, 1]]])
    with pytest.raises(PreconditionError):
        group_closure([])
    with pytest.raises(DimensionError):
        group_closure([[[1, 0], [0, 1]], [[1]]])


# invariants


def test_reynolds_minus_identity():
    G = group_closure(MINUS_I)
    assert set(reynolds_invariant_basis(G, 2)) == {P("x1^2", 2), P("x1*x2"), P("x2^2")}


def test_reynolds_trivial_group():
    G = group_closure([[[1, 0, 0], [0, 1, 0], [0, 0, 1]]])
    assert set(reynolds_invariant_basis(G, 1)) == {P("x1", 3), P("x2", 3), P("x3", 3)}


def test_reynolds_swap_signs_matches_elementary():
    G = group_closure(SWAP_SIGNS)
    basis = reynolds_invariant_basis(G, 4)
    assert same_algebra(basis, [P("x1^2 + x2^2"), P("x1^2*x2^2")], 2)


@pytest.mark.parametrize("name", sorted(BATTERY))
def test_reynolds_output_is_exactly_invariant(name):
    G = group_closure(BATTERY[name][0])
    for f in reynolds_invariant_basis(G):
        for g in G.elements:
            assert G.act(f, g) == f


def test_reynolds_needs_positive_bound():
    with pytest.raises(PreconditionError):
        reynolds_invariant_basis(group_closure(MINUS_I), 0)


# inverse invariant theory pipeline


@pytest.mark.parametrize("name", sorted(BATTERY))
def test_iit_battery_passes(name):
    G = group_closure(BATTERY[name][0])
    rep = iit_pipeline(G)
    assert rep.laplacian_ok and rep.trdeg_ok and rep.passed
    assert rep.to_dict()["verdict"] == "PASS"


def test_iit_sign_on_the_line():
    rep = iit_pipeline(group_closure([[[-1]]]))
    assert rep.passed and rep.generators == [P("x1^2")]


def test_iit_negative_control():
    G = group_closure(SWAP_SIGNS)
    rep = iit_pipeline(G, generators=[P("x1^2 + x2^2"), P("x1^2*x2^2") ** 2])
    assert rep.laplacian.verdict == NOT_LAPLACIAN
    assert rep.trdeg == 2  # the failure is the Laplacian half only
    assert not rep.passed


def test_order_three_on_the_plane_needs_irrational_entries():
    # rotation by 120 degrees; its invariants have rational coefficients
    c, s = sympy.Rational(-1, 2), sympy.sqrt(3) / 2
    x, y = sympy.symbols("x1 x2")
    gens = [P("x1^2 + x2^2"), P("x1^3 - 3*x1*x2^2"), P("3*x1^2*x2 - x2^3")]
    for f in gens:
        expr = sympy.sympify(str(f).replace("^", "**"))
        rotated = expr.subs({x: c * x - s * y, y: s * x + c * y}, simultaneous=True)
        assert sympy.expand(rotated - expr) == 0
    assert is_laplacian_system(gens).verdict == LAPLACIAN
    assert transcendence_degree(SubalgebraPresentation(gens, 2)) == 2


# orbit separation


def test_square_separates_signs():
    G = group_closure([[[-1]]])
    assert orbit_separation_sample(G, [P("x1^2")], trials=200).verdict == NO_COUNTEREXAMPLE


def test_full_basis_separates_cyclic4():
    G = group_closure(ROT90)
    res = orbit_separation_sample(G, reynolds_invariant_basis(G), trials=2000)
    assert res.verdict == NO_COUNTEREXAMPLE


def test_cyclic4_without_mixed_quartic_fails_to_separate():
    G = group_closure(ROT90)
    S = [P("x1^2 + x2^2"), P("x1^2*x2^2")]
    res = orbit_separation_sample(G, S, trials=2000)
    assert res.verdict == COUNTEREXAMPLE
    p, q = res.pair
    assert all(f(*p) == f(*q) for f in S)
    assert q not in G.orbit(p)
    assert P("x1^3*x2 - x1*x2^3")(*p) != P("x1^3*x2 - x1*x2^3")(*q)


def test_cyclic4_radius_and_odd_quartic_fail_over_the_reals():
    # equal values, different orbits; the second point is irrational
    x, y = sympy.symbols("x1 x2")
    r2, q = x**2 + y**2, x**3 * y - x * y**3
    a = (sympy.Integer(1), sympy.Integer(0))
    b = (sympy.sqrt(2) / 2, sympy.sqrt(2) / 2)
    for f in (r2, q):
        assert sympy.simplify(f.subs({x: a[0], y: a[1]}) - f.subs({x: b[0], y: b[1]})) == 0
    orbit = {(1, 0), (0, 1), (-1, 0), (0, -1)}
    assert b not in orbit
    # the sampler only sees rational points, where no such pair exists
    G = group_closure(ROT90)
    res = orbit_separation_sample(G, [P("x1^2 + x2^2"), P("x1^3*x2 - x1*x2^3")], trials=2000)
    assert res.verdict == NO_COUNTEREXAMPLE


def test_orbit_separation_rejects_non_invariant():
    G = group_closure(ROT90)
    with pytest.raises(PreconditionError):
        orbit_separation_sample(G, [P("x1^2", 2)])
    with pytest.raises(DimensionError):
        orbit_separation_sample(G, [P("x1^2 + x2^2 + x3^2")])


def test_orbit_separation_is_seeded():
    G = group_closure(ROT90)
    S = [P("x1^2 + x2^2"), P("x1^2*x2^2")]
    a = orbit_separation_sample(G, S, trials=500, seed=4)
    b = orbit_separation_sample(G, S, trials=500, seed=4)
    assert a.to_dict() == b.to_dict()


# k-NS sampling


def test_kns_coordinates():
    assert kns_check([P("x1", 3), P("x2", 3), P("x3", 3)], 1).verdict == HOLDS


def test_kns_radius():
    r2 = [P("x1^2 + x2^2")]
    assert kns_check(r2, 1).verdict == NOT_OBSERVED
    assert kns_check(r2, 1).max_rank == 1
    assert kns_check(r2, 2).verdict == HOLDS


@pytest.mark.parametrize("name", sorted(BATTERY))
def test_finite_groups_hold_at_k1(name):
    G = group_closure(BATTERY[name][0])
    assert kns_check(reynolds_invariant_basis(G), 1).verdict == HOLDS


@settings(max_examples=30)
@given(
    st.sampled_from(["x1^2 + x2^2", "x1^2*x2^2", "x1^2 + x2^2 + x3^2", "x1*x2*x3", "x1^2 - x2^2"]),
    st.integers(1, 3),
    st.integers(0, 10**6),
)
def test_kns_monotone_in_k(text, k, seed):
    f = P(text)
    n = f.nvars
    gens = [f, Polynomial.radius_squared(n)]
    lo = kns_check(gens, k, trials=3, seed=seed)
    hi = kns_check(gens, k + 1, trials=3, seed=seed)
    assert all(a <= b for a, b in zip(lo.ranks, hi.ranks))
    if lo.verdict == HOLDS:
        assert hi.verdict == HOLDS
    assert hi.max_rank <= n


def test_kns_points_extend():
    assert kns_points(3, 4, 2, 9)[:2] == kns_points(3, 2, 2, 9)


def test_kns_preconditions():
    with pytest.raises(PreconditionError):
        kns_check([P("x1^2")], 0)
    with pytest.raises(PreconditionError):
        kns_check([], 1)
