"""Fourier index matrices: symmetric, integral, even diagonal, psd.

The same shape serves two roles: as the index of a Fourier coefficient and as
the target Gram matrix of a representation count (GramTarget).  Matrices are
stored as nested tuples so they are hashable dictionary keys.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction


class IndexError_(ValueError):
    """Invalid index matrix."""


def as_entries(mat) -> tuple:
    """Normalize a matrix-like (nested sequence or numpy array) to int tuples."""
    rows = tuple(tuple(int(x) for x in row) for row in mat)
    g = len(rows)
    if any(len(r) != g for r in rows):
        raise IndexError_("matrix must be square")
    return rows


def validate_index(entries, require_psd: bool = True) -> tuple:
    """Check the GramTarget/IndexMatrix invariants; return normalized entries."""
    s = as_entries(entries)
    g = len(s)
    if g < 1:
        raise IndexError_("genus must be >= 1")
    for p in range(g):
        if s[p][p] % 2 != 0 or s[p][p] < 0:
            raise IndexError_("diagonal entries must be even and >= 0")
        for q in range(p):
            if s[p][q] != s[q][p]:
                raise IndexError_("matrix must be symmetric")
    if require_psd and not is_psd(s):
        raise IndexError_("matrix must be positive semi-definite")
    return s


def is_psd(entries) -> bool:
    """Exact positive semi-definiteness over the rationals.

    Symmetric Gaussian elimination with diagonal pivots: a negative pivot is
    a witness against psd; a zero pivot forces its whole row to vanish.
    """
    s = as_entries(entries)
    g = len(s)
    m = [[Fraction(s[i][j]) for j in range(g)] for i in range(g)]
    for k in range(g):
        if m[k][k] < 0:
            return False
        if m[k][k] == 0:
            if any(m[k][j] != 0 for j in range(k + 1, g)):
                return False
            continue
        for i in range(k + 1, g):
            f = m[i][k] / m[k][k]
            if f:
                for j in range(k, g):
                    m[i][j] -= f * m[k][j]
    return True


def trace(entries) -> int:
    return sum(entries[p][p] for p in range(len(entries)))


def border_zero_forced(entries) -> bool:
    """True iff a zero corner entry comes with a zero last row and column.

    For a psd even matrix the corner S[g][g] = 0 forces the border to vanish;
    this predicate checks the statement on a concrete matrix rather than
    assuming it.
    """
    s = validate_index(entries)
    g = len(s)
    if s[g - 1][g - 1] != 0:
        return True
    return all(s[g - 1][q] == 0 for q in range(g))


def upper_triangle(entries) -> list:
    """Row-major upper triangle (including diagonal), the serialization order."""
    g = len(entries)
    return [int(entries[p][q]) for p in range(g) for q in range(p, g)]


def from_upper_triangle(g: int, values) -> tuple:
    vals = list(values)
    if len(vals) != g * (g + 1) // 2:
        raise IndexError_("wrong number of upper-triangle entries")
    m = [[0] * g for _ in range(g)]
    it = iter(vals)
    for p in range(g):
        for q in range(p, g):
            v = int(next(it))
            m[p][q] = m[q][p] = v
    return as_entries(m)


def _even_diagonals(g: int, max_trace: int):
    """All tuples of even non-negative integers of length g with sum <= max_trace."""
    if g == 0:
        yield ()
        return
    for d in range(0, max_trace + 1, 2):
        for rest in _even_diagonals(g - 1, max_trace - d):
            yield (d,) + rest


def enumerate_indices(g: int, max_trace: int) -> list:
    """All index matrices of genus g with trace <= max_trace, sorted.

    Diagonals run over even tuples, off-diagonal entries over the
    Cauchy-Schwarz box, and each candidate passes the exact psd test.
    Order: (trace, diagonal, upper triangle), so the output is deterministic.
    """
    if g < 1:
        raise IndexError_("genus must be >= 1")
    if max_trace < 0 or max_trace % 2 != 0:
        raise IndexError_("max_trace must be a non-negative even integer")
    pairs = [(p, q) for p in range(g) for q in range(p + 1, g)]
    out = []
    for diag in _even_diagonals(g, max_trace):
        ranges = []
        for p, q in pairs:
            b = math.isqrt(diag[p] * diag[q])
            ranges.append(range(-b, b + 1))
        for offs in itertools.product(*ranges):
            m = [[0] * g for _ in range(g)]
            for p in range(g):
                m[p][p] = diag[p]
            for (p, q), v in zip(pairs, offs):
                m[p][q] = m[q][p] = v
            s = as_entries(m)
            if is_psd(s):
                out.append(s)
    out.sort(key=lambda s: (trace(s), tuple(s[p][p] for p in range(g)),
                            tuple(upper_triangle(s))))
    return out


def _signed_permutations(g: int):
    for perm in itertools.permutations(range(g)):
        for signs in itertools.product((1, -1), repeat=g):
            yield perm, signs


def transform(entries, u) -> tuple:
    """U^T S U for an integer matrix U (tuple rows)."""
    g = len(entries)
    su = [[sum(entries[i][k] * u[k][j] for k in range(g)) for j in range(g)]
          for i in range(g)]
    return as_entries(
        [[sum(u[k][i] * su[k][j] for k in range(g)) for j in range(g)]
         for i in range(g)]
    )


def canonical_signed_perm(entries) -> tuple:
    """Minimal representative of S under simultaneous permutations and sign
    flips of the tuple slots (a bounded search inside GL_g(Z)).

    The key is (diagonal, upper triangle); the diagonal is thereby sorted
    ascending, which also puts the largest vector classes last for counting.
    """
    s = as_entries(entries)
    g = len(s)
    best = None
    for perm, signs in _signed_permutations(g):
        cand = tuple(
            tuple(signs[p] * signs[q] * s[perm[p]][perm[q]] for q in range(g))
            for p in range(g)
        )
        key = (tuple(cand[p][p] for p in range(g)), tuple(upper_triangle(cand)))
        if best is None or key < best[0]:
            best = (key, cand)
    return best[1]
