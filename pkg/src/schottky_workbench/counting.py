"""Representation numbers: tuples of lattice vectors with a prescribed Gram
matrix.

The engine is a depth-first tuple search over pre-enumerated shells of fixed
norm, pruned by the inner-product constraints against the already-chosen
vectors.  The final two tuple slots are resolved with vectorized submatrix
counts, so leaves are never iterated one by one.  Totals accumulate in Python
integers, so results are exact regardless of size.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import indices as idx
from .cache import index_key
from .lattices import Lattice, short_vector_shells

# pair-Gram matrices above this many entries are not materialized
_PAIR_GRAM_LIMIT = 60_000_000
# float64 work-block budget for the blockwise histograms (entries)
_BLOCK_ENTRIES = 4_000_000

_pair_gram_cache: dict = {}


def _pair_gram(lat: Lattice, n1: int, n2: int):
    """Cross inner-product matrix between the norm-n1 and norm-n2 shells,
    or None if it would be too large to hold."""
    key = (lat.gram, n1, n2)
    if key in _pair_gram_cache:
        return _pair_gram_cache[key]
    shells = short_vector_shells(lat, max(n1, n2))
    v1, v2 = shells[n1], shells[n2]
    if v1.size == 0 or v2.size == 0 or len(v1) * len(v2) > _PAIR_GRAM_LIMIT:
        _pair_gram_cache[key] = None
        return None
    g = lat.gram_array.astype(np.float64)
    right = g @ v2.T.astype(np.float64)
    out = np.empty((len(v1), len(v2)), dtype=np.int8)
    for lo in range(0, len(v1), 4096):
        block = v1[lo : lo + 4096].astype(np.float64) @ right
        out[lo : lo + 4096] = np.rint(block).astype(np.int8)
    _pair_gram_cache[key] = out
    if n1 != n2:
        _pair_gram_cache[(lat.gram, n2, n1)] = out.T
    return out


def _ip_row(lat: Lattice, shell: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Inner products of every shell vector with x (exact, small integers)."""
    gx = lat.gram_array @ x.astype(np.int64)
    return shell.astype(np.int64) @ gx


class CountEngine:
    """Counts vector tuples of a fixed lattice, with memoization.

    With a CountCache attached, every count() call performs exactly one cache
    lookup (on the canonical key), so cache hits + misses equals the number
    of calls.
    """

    def __init__(self, lattice: Lattice, cache=None, dedup: bool = True,
                 workers: int = 0):
        self.lattice = lattice
        self.cache = cache
        self.dedup = dedup
        self.workers = workers
        self.calls = 0
        self._local = {}

    # -- public ----------------------------------------------------------

    def count(self, target) -> int:
        """Number of tuples (x_1..x_g) with Gram matrix `target`."""
        s = idx.validate_index(target)
        self.calls += 1
        key_m = idx.canonical_signed_perm(s) if self.dedup else _diag_sorted(s)
        key = index_key(len(key_m), idx.upper_triangle(key_m))
        lid = self.lattice.key()
        if self.cache is not None:
            got = self.cache.get(lid, key)
            if got is not None:
                return got
        else:
            got = self._local.get(key)
            if got is not None:
                return got
        value = self._compute(key_m)
        if self.cache is not None:
            self.cache.put(lid, key, value)
        else:
            self._local[key] = value
        return value

    # -- reductions ------------------------------------------------------

    def _compute(self, s) -> int:
        g = len(s)
        # zero-norm slots: a norm-0 vector is the zero vector
        zero = [p for p in range(g) if s[p][p] == 0]
        if zero:
            for p in zero:
                if any(s[p][q] != 0 for q in range(g)):
                    return 0
            keep = [p for p in range(g) if p not in zero]
            if not keep:
                return 1
            minor = tuple(tuple(s[p][q] for q in keep) for p in keep)
            return self.count(minor)
        # Cauchy-Schwarz equality forces x_q to be a multiple of x_p
        for p in range(g):
            for q in range(p + 1, g):
                if s[p][q] * s[p][q] == s[p][p] * s[q][q]:
                    if s[p][q] % s[p][p] == 0:
                        r = s[p][q] // s[p][p]
                        if any(s[q][j] != r * s[p][j]
                               for j in range(g) if j != q):
                            return 0
                        keep = [j for j in range(g) if j != q]
                        minor = tuple(tuple(s[a][b] for b in keep) for a in keep)
                        return self.count(minor)
        if g == 1:
            shells = short_vector_shells(self.lattice, s[0][0])
            return len(shells[s[0][0]])
        if g == 2:
            return self._count_pair(s[0][0], s[1][1], s[0][1])
        return self._count_dfs(s)

    # -- genus 2: one histogram covers every off-diagonal value ----------

    def _count_pair(self, d1: int, d2: int, want: int) -> int:
        hist = self._pair_histogram(d1, d2)
        return hist.get(want, 0)

    def _pair_histogram(self, d1: int, d2: int) -> dict:
        hk = ("hist", self.lattice.gram, d1, d2)
        got = _pair_gram_cache.get(hk)
        if got is not None:
            return got
        shells = short_vector_shells(self.lattice, max(d1, d2))
        v1, v2 = shells[d1], shells[d2]
        bound = math.isqrt(d1 * d2)
        off = bound
        pg = _pair_gram(self.lattice, d1, d2)
        counts = np.zeros(2 * bound + 1, dtype=np.int64)
        if pg is not None:
            counts += np.bincount((pg.astype(np.int64) + off).ravel(),
                                  minlength=2 * bound + 1)
        else:
            g = self.lattice.gram_array.astype(np.float64)
            right = g @ v2.T.astype(np.float64)
            rows = max(1, _BLOCK_ENTRIES // max(1, len(v2)))
            for lo in range(0, len(v1), rows):
                block = v1[lo : lo + rows].astype(np.float64) @ right
                vals = np.rint(block).astype(np.int64) + off
                counts += np.bincount(vals.ravel(), minlength=2 * bound + 1)
        hist = {t - off: int(c) for t, c in enumerate(counts)}
        _pair_gram_cache[hk] = hist
        return hist

    # -- genus >= 3: pruned DFS with a vectorized two-slot tail ----------

    def _count_dfs(self, s) -> int:
        g = len(s)
        norms = [s[p][p] for p in range(g)]
        shells = short_vector_shells(self.lattice, max(norms))
        vs = [shells[n] for n in norms]
        pgs = {}
        for p in range(g):
            for q in range(p + 1, g):
                pgs[(p, q)] = _pair_gram(self.lattice, norms[p], norms[q])

        if g == 4 and all(pg is not None for pg in pgs.values()):
            return self._count_quad(s, pgs, len(vs[0]))

        def masks_after(level, k, masks):
            out = []
            for j in range(level + 1, g):
                pg = pgs[(level, j)]
                if pg is not None:
                    row = pg[k]
                else:
                    row = _ip_row(self.lattice, vs[j], vs[level][k])
                out.append(masks[j - level - 1] & (row == s[level][j]))
            return out

        def rec(level, masks):
            if level == g - 2:
                kidx = np.nonzero(masks[0])[0]
                lmask = masks[1]
                if kidx.size == 0 or not lmask.any():
                    return 0
                pg = pgs[(g - 2, g - 1)]
                want = s[g - 2][g - 1]
                if pg is not None:
                    lidx = np.nonzero(lmask)[0]
                    sub = pg[np.ix_(kidx, lidx)]
                    return int((sub == want).sum())
                total = 0
                for k in kidx:
                    row = _ip_row(self.lattice, vs[g - 1], vs[g - 2][k])
                    total += int(((row == want) & lmask).sum())
                return total
            total = 0
            for k in np.nonzero(masks[0])[0]:
                total += rec(level + 1, masks_after(level, k, masks[1:]))
            return total

        full = [np.ones(len(v), dtype=bool) for v in vs]
        if self.workers and self.workers > 1:
            m0 = len(vs[0])
            chunks = []
            step = max(1, -(-m0 // self.workers))
            for lo in range(0, m0, step):
                first = np.zeros(m0, dtype=bool)
                first[lo : lo + step] = True
                chunks.append([first] + full[1:])
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                parts = list(pool.map(lambda ms: rec(0, ms), chunks))
            return sum(parts)
        return rec(0, full)


    def _count_quad(self, s, pgs, m0) -> int:
        """Genus 4 via one explicit slot plus a matrix triple contraction.

        For fixed x_0 the remaining constraints form a three-index boolean
        contraction sum_{j,k,l} A[j,k] C[k,l] B[j,l]; float32 matmul is exact
        here (all intermediate integers stay far below 2**24) and the final
        reduction accumulates in float64.
        """
        p01, p02, p03 = pgs[(0, 1)], pgs[(0, 2)], pgs[(0, 3)]
        p12, p13, p23 = pgs[(1, 2)], pgs[(1, 3)], pgs[(2, 3)]
        total = 0
        for k0 in range(m0):
            jidx = np.nonzero(p01[k0] == s[0][1])[0]
            kidx = np.nonzero(p02[k0] == s[0][2])[0]
            lidx = np.nonzero(p03[k0] == s[0][3])[0]
            if jidx.size == 0 or kidx.size == 0 or lidx.size == 0:
                continue
            a = (p12[np.ix_(jidx, kidx)] == s[1][2]).astype(np.float32)
            b = (p13[np.ix_(jidx, lidx)] == s[1][3]).astype(np.float32)
            c = (p23[np.ix_(kidx, lidx)] == s[2][3]).astype(np.float32)
            total += int(np.rint(((a @ c) * b).sum(dtype=np.float64)))
        return total


def _diag_sorted(s):
    """Permute slots so the diagonal is ascending (a GL_g(Z) move)."""
    g = len(s)
    order = sorted(range(g), key=lambda p: s[p][p])
    return tuple(tuple(s[order[p]][order[q]] for q in range(g)) for p in range(g))


_engines: dict = {}


def get_engine(lattice: Lattice, cache=None, dedup: bool = True,
               workers: int = 0) -> CountEngine:
    key = (lattice.gram, id(cache), dedup, workers)
    eng = _engines.get(key)
    if eng is None:
        eng = CountEngine(lattice, cache=cache, dedup=dedup, workers=workers)
        _engines[key] = eng
    return eng


def representation_count(lattice: Lattice, target, cache=None,
                         dedup: bool = True, workers: int = 0) -> int:
    """#{(x_1..x_g) in lattice^g : <x_p, x_q> = target[p][q] for all p, q}."""
    return get_engine(lattice, cache, dedup, workers).count(target)
