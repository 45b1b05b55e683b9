"""Quadratic forms as symmetric matrices: Jordan closure, enveloping algebras, Clifford systems.

The quadratic form ``f(x) = x^T M x`` is identified with the symmetric matrix
``M = Hess(f)/2``. Matrices are numpy object arrays of exact scalars.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from lapinv._scalar import ONE, ZERO, to_scalar
from lapinv.errors import DimensionError, PreconditionError
from lapinv.linalg import EchelonSpan, nullspace
from lapinv.poly import Polynomial

HOMOGENEOUS = "HOMOGENEOUS"
INHOMOGENEOUS = "INHOMOGENEOUS"


def matrix(rows) -> np.ndarray:
    """Exact square matrix from nested rows of ints, rationals or rational strings."""
    rows = [[to_scalar(v) for v in row] for row in rows]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionError("matrix must be square")
    out = np.empty((n, n), dtype=object)
    for i, r in enumerate(rows):
        for j, v in enumerate(r):
            out[i, j] = v
    return out


def identity(n: int) -> np.ndarray:
    out = np.full((n, n), ZERO, dtype=object)
    for i in range(n):
        out[i, i] = ONE
    return out


def zeros(n: int) -> np.ndarray:
    return np.full((n, n), ZERO, dtype=object)


def is_symmetric(M: np.ndarray) -> bool:
    return bool(np.all(M == M.T))


def _vec(M: np.ndarray) -> dict:
    n = M.shape[0]
    return {(i, j): M[i, j] for i in range(n) for j in range(n) if M[i, j]}


def _unvec(v: dict, n: int) -> np.ndarray:
    out = zeros(n)
    for (i, j), c in v.items():
        out[i, j] = c
    return out


def jordan_product(M: np.ndarray, N: np.ndarray) -> np.ndarray:
    """``(MN + NM) / 2``."""
    if M.shape != N.shape:
        raise DimensionError(f"size mismatch {M.shape} vs {N.shape}")
    half = ONE / 2
    return (M.dot(N) + N.dot(M)) * half


class MatrixSpan:
    """Linear span of exact n x n matrices with a fully reduced echelon basis."""

    def __init__(self, n: int, elements: Iterable[np.ndarray] = ()):
        self.n = n
        self._span = EchelonSpan(track=False)
        self.basis: list[np.ndarray] = []
        for M in elements:
            self.add(M)

    def add(self, M: np.ndarray) -> bool:
        if M.shape != (self.n, self.n):
            raise DimensionError(f"expected {self.n}x{self.n}, got {M.shape}")
        if self._span.add(_vec(M)):
            self.basis.append(M)
            return True
        return False

    def contains(self, M: np.ndarray) -> bool:
        return self._span.contains(_vec(M))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    def echelon(self) -> list[np.ndarray]:
        """Canonical basis (reduced row echelon form over entry positions)."""
        return [_unvec(v, self.n) for v in sorted(self._span.basis(), key=lambda v: min(v))]


class SymMatrixSpan(MatrixSpan):
    def add(self, M: np.ndarray) -> bool:
        if not is_symmetric(M):
            raise ValueError("SymMatrixSpan only holds symmetric matrices")
        return super().add(M)


class MatrixAlgebraSpan(MatrixSpan):
    def is_product_closed(self) -> bool:
        return all(self.contains(A.dot(B)) for A in self.basis for B in self.basis)


def _common_size(S: Sequence[np.ndarray], n: int | None) -> int:
    sizes = {M.shape for M in S}
    if n is not None:
        sizes.add((n, n))
    if len(sizes) != 1:
        if not sizes:
            raise PreconditionError("an empty matrix list needs an explicit size")
        raise DimensionError(f"matrices of different sizes: {sorted(sizes)}")
    (shape,) = sizes
    return shape[0]


def jordan_closure(S: Sequence[np.ndarray], n: int | None = None) -> SymMatrixSpan:
    """Smallest span containing ``S`` and the identity that is closed under the Jordan product."""
    S = list(S)
    n = _common_size(S, n)
    J = SymMatrixSpan(n, [identity(n)] + S)
    done = 0  # basis[:done] have been multiplied against each other
    while done < len(J.basis):
        k = len(J.basis)
        for a in range(k):
            for b in range(max(a, done), k):
                J.add(jordan_product(J.basis[a], J.basis[b]))
        done = k
    return J


def enveloping_algebra(J: MatrixSpan) -> MatrixAlgebraSpan:
    """Span of all products of elements of ``J`` (which must contain the identity)."""
    if not J.contains(identity(J.n)):
        raise PreconditionError("the span must contain the identity")
    U = MatrixAlgebraSpan(J.n, J.basis)
    gens = list(J.basis)
    i = 0
    while i < len(U.basis):
        A = U.basis[i]
        for G in gens:
            U.add(G.dot(A))
        i += 1
    return U


def symmetric_part(U: MatrixSpan) -> SymMatrixSpan:
    """``U`` intersected with the symmetric matrices."""
    n = U.n
    if not U.basis:
        return SymMatrixSpan(n)
    positions = [(i, j) for i in range(n) for j in range(i + 1, n)]
    # coefficients c with sum c_t (U_t - U_t^T) = 0
    rows = [[B[i, j] - B[j, i] for B in U.basis] for (i, j) in positions]
    if not rows:
        kernel = [[ONE if s == t else ZERO for s in range(len(U.basis))] for t in range(len(U.basis))]
    else:
        kernel = nullspace(rows, len(U.basis))
    out = SymMatrixSpan(n)
    for c in kernel:
        M = zeros(n)
        for coeff, B in zip(c, U.basis):
            if coeff:
                M = M + B * coeff
        out.add(M)
    return out


def trace_inner(A: np.ndarray, B: np.ndarray):
    return sum((A * B).flat, ZERO)  # tr(A^T B); A symmetric here


def _orthogonal_complement(W: MatrixSpan, J: MatrixSpan) -> list[np.ndarray]:
    """Elements of ``W`` trace-orthogonal to every element of ``J``."""
    if not W.basis:
        return []
    rows = [[trace_inner(Mj, Bw) for Bw in W.basis] for Mj in J.basis]
    kernel = nullspace(rows, len(W.basis)) if rows else [
        [ONE if s == t else ZERO for s in range(len(W.basis))] for t in range(len(W.basis))
    ]
    out = []
    for c in kernel:
        M = zeros(W.n)
        for coeff, B in zip(c, W.basis):
            if coeff:
                M = M + B * coeff
        out.append(M)
    return out


def _scale_to_integers(M: np.ndarray) -> np.ndarray:
    from math import gcd, lcm

    vals = [v for v in M.flat if v]
    den = 1
    for v in vals:
        den = lcm(den, int(v.denominator))
    ints = [int(v * den) for v in vals]
    g = 0
    for v in ints:
        g = gcd(g, v)
    factor = to_scalar(den) / g
    first = next(v for v in M.flat if v)
    if first < 0:
        factor = -factor
    return M * factor


@dataclass
class HomogeneityVerdict:
    verdict: str
    witness: np.ndarray | None
    jordan_dim: int
    enveloping_dim: int
    symmetric_dim: int

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "jordan_dim": self.jordan_dim,
            "enveloping_dim": self.enveloping_dim,
            "symmetric_dim": self.symmetric_dim,
            "witness": matrix_to_json(self.witness) if self.witness is not None else None,
        }


def quadratic_homogeneity_test(S: Sequence[np.ndarray], n: int | None = None) -> HomogeneityVerdict:
    """HOMOGENEOUS iff every symmetric matrix in the enveloping algebra of the Jordan closure of ``S`` is in that closure.

    An INHOMOGENEOUS witness is taken from the trace-orthogonal complement of
    the Jordan closure inside the symmetric part, scaled to coprime integers
    with a positive first entry.
    """
    J = jordan_closure(S, n)
    U = enveloping_algebra(J)
    W = symmetric_part(U)
    comp = _orthogonal_complement(W, J)
    if not comp:
        return HomogeneityVerdict(HOMOGENEOUS, None, J.dim, U.dim, W.dim)
    return HomogeneityVerdict(INHOMOGENEOUS, _scale_to_integers(comp[0]), J.dim, U.dim, W.dim)


# quadratic forms


def quadratic_form(M: np.ndarray) -> Polynomial:
    """``x^T M x`` for a symmetric matrix M."""
    n = M.shape[0]
    terms: dict = {}
    for i in range(n):
        for j in range(i, n):
            c = M[i, j] if i == j else M[i, j] + M[j, i]
            if c:
                e = [0] * n
                e[i] += 1
                e[j] += 1
                terms[tuple(e)] = terms.get(tuple(e), ZERO) + c
    return Polynomial(terms, n)


def form_matrix(f: Polynomial) -> np.ndarray:
    """``Hess(f)/2`` for a quadratic form f."""
    if f and (f.degree() != 2 or not f.is_homogeneous()):
        raise PreconditionError("form_matrix needs a homogeneous quadratic")
    n = f.nvars
    M = zeros(n)
    half = ONE / 2
    for e, c in f.terms.items():
        idx = [i for i, a in enumerate(e) for _ in range(a)]
        i, j = idx
        if i == j:
            M[i, i] = c
        else:
            M[i, j] = c * half
            M[j, i] = c * half
    return M


def matrix_to_json(M: np.ndarray) -> list[list[str]]:
    from lapinv._scalar import scalar_str

    return [[scalar_str(v) for v in row] for row in M]


# Clifford systems


@dataclass(frozen=True)
class CliffordSystem:
    m: int
    l: int
    matrices: tuple  # P_0 .. P_m, each 2l x 2l

    @property
    def size(self) -> int:
        return 2 * self.l

    def relation_defects(self) -> list[str]:
        I = identity(self.size)
        bad = []
        for i, P in enumerate(self.matrices):
            if not is_symmetric(P):
                bad.append(f"P{i} not symmetric")
            if not np.all(P.dot(P) == I):
                bad.append(f"P{i}^2 != I")
            for j in range(i + 1, len(self.matrices)):
                Q = self.matrices[j]
                if not np.all(P.dot(Q) + Q.dot(P) == zeros(self.size)):
                    bad.append(f"P{i}, P{j} do not anticommute")
        return bad


def _block(A, B, C, D) -> np.ndarray:
    return np.block([[A, B], [C, D]])


def _skew_complex_structures(count: int) -> list[np.ndarray]:
    """``count`` pairwise anticommuting skew matrices squaring to -I, in the smallest size available."""
    if count == 0:
        return []
    if count == 1:
        return [matrix([[0, -1], [1, 0]])]
    if count <= 3:
        # left multiplication by i, j, k on the quaternions (basis 1, i, j, k)
        qi = matrix([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
        qj = matrix([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]])
        qk = matrix([[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]])
        return [qi, qj, qk][:count]
    raise PreconditionError("no built-in representation for this many anticommuting structures")


MAX_CLIFFORD_M = 4


def clifford_system(m: int, size: int | None = None) -> CliffordSystem:
    """Symmetric ``P_0 .. P_m`` with ``P_i^2 = I`` and ``P_i P_j = -P_j P_i``.

    Built as ``P_0 = diag(I, -I)``, ``P_1 = [[0, I], [I, 0]]`` and
    ``P_(1+i) = [[0, E_i], [-E_i, 0]]`` from anticommuting complex structures
    ``E_i``. The smallest sizes are 2, 2, 4, 8, 8 for m = 0..4; a larger
    ``size`` (a multiple of the smallest) tensors with an identity.
    """
    if not 0 <= m <= MAX_CLIFFORD_M:
        raise PreconditionError(f"clifford_system supports 0 <= m <= {MAX_CLIFFORD_M}, got {m}")
    Es = _skew_complex_structures(max(m - 1, 0))
    l = Es[0].shape[0] if Es else 1
    I, Z = identity(l), zeros(l)
    mats = [_block(I, Z, Z, -I)]
    if m >= 1:
        mats.append(_block(Z, I, I, Z))
    for E in Es:
        mats.append(_block(Z, E, -E, Z))
    if size is not None:
        if size % (2 * l):
            raise PreconditionError(f"size {size} is not a multiple of the minimal size {2 * l}")
        reps = size // (2 * l)
        mats = [np.kron(P, identity(reps)) for P in mats]
        l = size // 2
    system = CliffordSystem(m, l, tuple(mats))
    defects = system.relation_defects()
    if defects:
        raise AssertionError(f"Clifford relations fail: {defects}")  # pragma: no cover
    return system


def clifford_foliation_generators(C: CliffordSystem) -> list[Polynomial]:
    """``r^2`` followed by the quadratic forms ``<P_i x, x>``."""
    return [Polynomial.radius_squared(C.size)] + [quadratic_form(P) for P in C.matrices]


__all__ = [
    "CliffordSystem",
    "HOMOGENEOUS",
    "HomogeneityVerdict",
    "INHOMOGENEOUS",
    "MatrixAlgebraSpan",
    "MatrixSpan",
    "SymMatrixSpan",
    "clifford_foliation_generators",
    "clifford_system",
    "enveloping_algebra",
    "form_matrix",
    "identity",
    "is_symmetric",
    "jordan_closure",
    "jordan_product",
    "matrix",
    "matrix_to_json",
    "quadratic_form",
    "quadratic_homogeneity_test",
    "symmetric_part",
    "trace_inner",
]
