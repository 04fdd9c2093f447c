"""Bitmask tables and exact cover dynamic programs over vertex subsets.

Everything here works on a symmetric non-negative weight matrix ``W``
(diagonal allowed) together with its row sums ``m``.  For a graph ``W`` is
the adjacency matrix and ``m`` the degrees; for a reversible chain ``W`` is
``diag(mu) P`` and ``m`` is ``mu``.  Subsets are integer bitmasks.
"""
from __future__ import annotations

import numpy as np

# largest ternary block materialised at once when listing (superset, subset) pairs
_BLOCK_DIGITS = 12
_CACHE_LIMIT = 2_000_000

_pair_cache: dict = {}


def mask_of(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << int(v)
    return m


def members(mask: int) -> list:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def deposit(local, positions):
    """Scatter the bits of ``local`` (array) onto the given bit positions."""
    local = np.asarray(local, dtype=np.int64)
    out = np.zeros_like(local)
    for j, p in enumerate(positions):
        out |= ((local >> j) & 1) << int(p)
    return out


def submasks_with_low(w: int) -> np.ndarray:
    """Ascending submasks of ``w`` that contain its lowest set bit."""
    pos = members(w)
    low = 1 << pos[0]
    rest = pos[1:]
    return low | deposit(np.arange(1 << len(rest), dtype=np.int64), rest)


def _ternary_block(positions):
    """All (sup, sub) contributions of the given vertices: each is absent,
    in both, or in ``sup`` only."""
    sup = np.zeros(1, dtype=np.int64)
    sub = np.zeros(1, dtype=np.int64)
    for p in positions:
        b = np.int64(1) << int(p)
        sup = np.concatenate([sup, sup | b, sup | b])
        sub = np.concatenate([sub, sub | b, sub])
    return sup, sub


def _generate_pairs(n):
    for low in range(n):
        lb = np.int64(1) << low
        higher = list(range(low + 1, n))
        inner, outer = higher[:_BLOCK_DIGITS], higher[_BLOCK_DIGITS:]
        isup, isub = _ternary_block(inner)
        osup, osub = _ternary_block(outer)
        for a, b in zip(osup.tolist(), osub.tolist()):
            yield (isup | a | lb), (isub | b | lb)


def pair_chunks(n):
    """Chunks ``(sup, sub)`` listing every non-empty ``sup`` with every
    submask ``sub`` containing the lowest bit of ``sup``.

    There are ``(3**n - 1) / 2`` pairs; small universes are cached.
    """
    if n in _pair_cache:
        return _pair_cache[n]
    total = (3 ** n - 1) // 2
    if total <= _CACHE_LIMIT:
        chunks = list(_generate_pairs(n))
        if len(chunks) > 1:
            chunks = [(np.concatenate([c[0] for c in chunks]), np.concatenate([c[1] for c in chunks]))]
        _pair_cache[n] = chunks
        return chunks
    return _generate_pairs(n)


class SubsetTables:
    """Per-subset measure, internal mass and best bipartition cut."""

    def __init__(self, W, m):
        W = np.asarray(W, dtype=float)
        self.n = n = W.shape[0]
        self.size = size = 1 << n
        self.W = W
        self.full = size - 1
        idx = np.arange(size, dtype=np.int64)
        bits = ((idx[:, None] >> np.arange(n)) & 1).astype(float)
        self.measure = bits @ np.asarray(m, dtype=float)
        # sum over ordered pairs x, y in X of W_xy, diagonal counted once
        self.inner = np.einsum("si,si->s", bits @ W, bits)
        self._maxcut = None

    def cross(self, a, b):
        """``W(A, B)`` for disjoint masks (arrays or ints)."""
        return 0.5 * (self.inner[a | b] - self.inner[a] - self.inner[b])

    @property
    def maxcut(self):
        """``max_{A u B = U} W(A, B)`` for every mask ``U`` (0 for the empty set)."""
        if self._maxcut is None:
            mc = np.zeros(self.size)
            for sup, sub in pair_chunks(self.n):
                np.maximum.at(mc, sup, self.cross(sub, sup ^ sub))
            self._maxcut = mc
        return self._maxcut

    def best_split(self, u: int):
        """First (in ascending order) side ``A`` containing the lowest bit of
        ``u`` that attains the maximal cut."""
        subs = submasks_with_low(u)
        vals = self.cross(subs, u ^ subs)
        i = int(np.flatnonzero(vals == self.maxcut[u])[0])
        a = int(subs[i])
        return a, u ^ a


def cover_tables(n, score, kmax, maximize):
    """Exact-cover DP.

    ``table[j][w]`` is the best over partitions of ``w`` into exactly ``j``
    non-empty blocks of the worst block score (min for ``maximize``, max
    otherwise).  Infeasible entries hold ``-inf`` / ``+inf``.
    """
    size = 1 << n
    bad = -np.inf if maximize else np.inf
    first = np.full(size, bad)
    first[0] = -bad
    tables = [first]
    combine = np.minimum if maximize else np.maximum
    reduce_at = np.maximum.at if maximize else np.minimum.at
    for _ in range(kmax):
        prev = tables[-1]
        cur = np.full(size, bad)
        for sup, sub in pair_chunks(n):
            reduce_at(cur, sup, combine(score[sub], prev[sup ^ sub]))
        tables.append(cur)
    return tables


def trace_cover(tables, score, w, j, maximize):
    """Blocks of an optimal ``j``-partition of ``w`` (first found in ascending order)."""
    combine = np.minimum if maximize else np.maximum
    blocks = []
    while j > 0:
        subs = submasks_with_low(w)
        vals = combine(score[subs], tables[j - 1][w ^ subs])
        i = int(np.flatnonzero(vals == tables[j][w])[0])
        u = int(subs[i])
        blocks.append(u)
        w ^= u
        j -= 1
    return blocks


def best_mask(values, maximize):
    """First index attaining the optimum of ``values``."""
    target = values.max() if maximize else values.min()
    return int(np.flatnonzero(values == target)[0]), float(target)
