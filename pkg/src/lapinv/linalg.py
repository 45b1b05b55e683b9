"""Exact linear algebra over the rationals.

:class:`EchelonSpan` keeps a sparse row-echelon basis of a growing subspace.
Vectors are dicts ``coordinate -> scalar``; coordinates must be mutually
comparable through ``key`` (pivots are the key-largest coordinates). Each
stored row remembers which inserted vectors it is a combination of, so span
membership comes with an explicit witness.
"""

from __future__ import annotations

from typing import Callable, Hashable, Iterable, Sequence

from lapinv._scalar import ONE, ZERO, to_scalar


def _axpy(target: dict, factor, source: dict) -> None:
    # target += factor * source, dropping zeros
    for k, v in source.items():
        s = target.get(k, ZERO) + factor * v
        if s:
            target[k] = s
        else:
            target.pop(k, None)


class EchelonSpan:
    def __init__(self, key: Callable | None = None, track: bool = True):
        self.key = key or (lambda c: c)
        self.track = track
        self._rows: dict = {}  # pivot -> (row with pivot coeff 1, combination)
        self._order: list = []  # pivots, insertion order
        self.tags: list = []

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def dim(self) -> int:
        return len(self._rows)

    def _pivot(self, vec: dict):
        return max(vec, key=self.key)

    def reduce(self, vec: dict) -> tuple[dict, dict]:
        """Return ``(residual, combination)`` with ``vec = residual + sum c_t * tagged_t``."""
        rem = dict(vec)
        combo: dict = {}
        # eliminate pivots from largest to smallest
        while rem:
            cands = [k for k in rem if k in self._rows]
            if not cands:
                break
            p = max(cands, key=self.key)
            row, rcombo = self._rows[p]
            c = rem[p]
            _axpy(rem, -c, row)
            if self.track:
                _axpy(combo, c, rcombo)
        return rem, combo

    def add(self, vec: dict, tag: Hashable = None) -> bool:
        """Insert ``vec``; return True when it enlarged the span."""
        t = len(self.tags)
        self.tags.append(tag)
        rem, combo = self.reduce(vec)
        if not rem:
            return False
        # rem = vec - combo.tagged, so rem is the combination {t: 1} - combo
        rcombo = {k: -v for k, v in combo.items()} if self.track else {}
        if self.track:
            rcombo[t] = ONE
        p = self._pivot(rem)
        inv = ONE / rem[p]
        rem = {k: v * inv for k, v in rem.items()}
        rcombo = {k: v * inv for k, v in rcombo.items()}
        # keep the basis fully reduced: clear p from existing rows
        for q, (row, rc) in list(self._rows.items()):
            c = row.get(p)
            if c:
                _axpy(row, -c, rem)
                if self.track:
                    _axpy(rc, -c, rcombo)
        self._rows[p] = (rem, rcombo)
        self._order.append(p)
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)[0]

    def express(self, vec: dict) -> dict | None:
        """Coefficients ``{tag_index: c}`` with ``vec = sum c * inserted[tag_index]``, or None."""
        rem, combo = self.reduce(vec)
        if rem:
            return None
        return combo

    def basis(self) -> list[dict]:
        return [dict(self._rows[p][0]) for p in sorted(self._rows, key=self.key, reverse=True)]

    def pivots(self) -> list:
        return sorted(self._rows, key=self.key, reverse=True)


def to_matrix(rows: Iterable[Iterable]) -> list[list]:
    return [[to_scalar(v) for v in row] for row in rows]


def rank(matrix: Sequence[Sequence]) -> int:
    span = EchelonSpan(track=False)
    for row in matrix:
        span.add({j: to_scalar(v) for j, v in enumerate(row) if v})
    return span.dim


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> list:
    """Solve a square nonsingular system exactly by Gauss-Jordan elimination."""
    n = len(matrix)
    aug = [[to_scalar(v) for v in row] + [to_scalar(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = ONE / aug[col][col]
        prow = [v * inv for v in aug[col]]
        aug[col] = prow
        for r in range(n):
            if r != col:
                f = aug[r][col]
                if f:
                    aug[r] = [a - f * b for a, b in zip(aug[r], prow)]
    return [aug[r][n] for r in range(n)]


def nullspace(matrix: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    """Basis of ``{v : M v = 0}`` (right kernel), computed from the reduced row echelon form."""
    rows = [[to_scalar(v) for v in row] for row in matrix]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    pivcols = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = ONE / rows[r][col]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivcols.append(col)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(ncols) if c not in pivcols]
    basis = []
    for fc in free:
        v = [ZERO] * ncols
        v[fc] = ONE
        for i, pc in enumerate(pivcols):
            v[pc] = -rows[i][fc]
        basis.append(v)
    return basis
