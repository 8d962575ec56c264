"""Exact vectorized counting kernels over residue rings.

Everything here is integer arithmetic: histograms are exact counts, and
cyclic convolutions are done either by direct integer multiply-adds or by
a two-prime number-theoretic transform with CRT reconstruction, so no
floating point ever enters a measure.

The ring objects consumed here are ResidueRing instances; only their
moduli, field parameters, and canonical coordinate layout are used.
"""

from __future__ import annotations

import os

import numpy as np


class EnumBudgetError(RuntimeError):
    """Requested enumeration exceeds the configured point budget."""


DEFAULT_ENUM_BUDGET = 1 << 26


def enum_budget() -> int:
    raw = os.environ.get("QPERIODS_ENUM_BUDGET")
    return int(raw) if raw else DEFAULT_ENUM_BUDGET


# ---------------------------------------------------------------------------
# Ring coordinates as flat arrays
# ---------------------------------------------------------------------------

def coord_arrays(ring):
    """One int64 array per coordinate, jointly listing every ring element."""
    if len(ring.moduli) == 1:
        return (np.arange(ring.moduli[0], dtype=np.int64),)
    m0, m1 = ring.moduli
    x = np.tile(np.arange(m0, dtype=np.int64), m1)
    y = np.repeat(np.arange(m1, dtype=np.int64), m0)
    return (x, y)


def vec_reduce(ring, coords):
    return tuple(np.asarray(c) % m for c, m in zip(coords, ring.moduli))


def vec_mul(ring, a, b):
    """Componentwise ring product of two coordinate-tuple arrays."""
    f = ring.field
    if f.ncoords == 1:
        return ((a[0] * b[0]) % ring.moduli[0],)
    x1, y1 = a
    x2, y2 = b
    m0, m1 = ring.moduli
    return ((x1 * x2 - f.c0 * y1 * y2) % m0,
            (x1 * y2 + x2 * y1 - f.c1 * y1 * y2) % m1)


def vec_add(ring, a, b):
    return tuple((x + y) % m for x, y, m in zip(a, b, ring.moduli))


def nonunit_mask(ring, coords):
    """Boolean mask of elements with ord >= 1."""
    f = ring.field
    if f.ncoords == 1:
        return coords[0] % f.p == 0
    if f.variant == "ramified":
        return coords[0] % 2 == 0
    return (coords[0] % f.p == 0) & (coords[1] % f.p == 0)


def flat_index(ring, coords):
    if len(ring.moduli) == 1:
        return coords[0]
    return coords[0] * ring.moduli[1] + coords[1]


# ---------------------------------------------------------------------------
# Histograms of quadratic values
# ---------------------------------------------------------------------------

def _bincount(ring, value_coords, weights=None):
    n_buckets = 1
    for m in ring.moduli:
        n_buckets *= m
    idx = flat_index(ring, value_coords)
    h = np.bincount(np.asarray(idx).ravel(), weights=weights, minlength=n_buckets)
    h = h.astype(np.int64) if weights is None else h
    if len(ring.moduli) == 2:
        h = h.reshape(ring.moduli)
    return h


def square_term_histogram(ring, coeff_coords, restrict_nonunit=False):
    """Histogram of coeff * x^2 as x runs over the ring (or over pi*o)."""
    xs = coord_arrays(ring)
    if restrict_nonunit:
        mask = nonunit_mask(ring, xs)
        xs = tuple(c[mask] for c in xs)
    sq = vec_mul(ring, xs, xs)
    cc = vec_reduce(ring, coeff_coords)
    vals = vec_mul(ring, cc, sq)
    return _bincount(ring, vals)


def plane_histogram(ring, restrict_nonunit=False):
    """Histogram of 2xy over pairs (x, y); the hyperbolic-plane summand."""
    size = ring.size
    if size * size > (1 << 22):
        raise EnumBudgetError("plane histogram needs %d pairs" % (size * size))
    base = coord_arrays(ring)
    if restrict_nonunit:
        mask = nonunit_mask(ring, base)
        base = tuple(c[mask] for c in base)
    k = len(base[0])
    xs = tuple(np.repeat(c, k) for c in base)
    ys = tuple(np.tile(c, k) for c in base)
    two = vec_reduce(ring, (2,) + (0,) * (ring.field.ncoords - 1))
    vals = vec_mul(ring, vec_mul(ring, two, xs), ys)
    return _bincount(ring, vals)


# ---------------------------------------------------------------------------
# Exact cyclic convolution
# ---------------------------------------------------------------------------

_NTT_PRIMES = ((2013265921, 31), (1811939329, 13))  # 15*2^27+1, 27*2^26+1


def _is_pow2(n):
    return n > 0 and n & (n - 1) == 0


def _bitrev_indices(n):
    rev = np.zeros(n, dtype=np.int64)
    bits = n.bit_length() - 1
    for i in range(n):
        rev[i] = int(format(i, "0%db" % bits)[::-1], 2) if bits else 0
    return rev


def _ntt_last_axis(a, p, g, invert=False):
    """Iterative radix-2 NTT along the last axis; a is int64, length power of 2."""
    n = a.shape[-1]
    if n == 1:
        return a % p
    a = np.array(a % p, dtype=np.int64)
    a = a[..., _bitrev_indices(n)]
    length = 2
    while length <= n:
        half = length // 2
        root = pow(g, (p - 1) // length, p)
        if invert:
            root = pow(root, p - 2, p)
        w = np.empty(half, dtype=np.int64)
        cur = 1
        for i in range(half):
            w[i] = cur
            cur = cur * root % p
        b = a.reshape(a.shape[:-1] + (n // length, length))
        u = b[..., :half].copy()
        v = b[..., half:] * w % p
        b[..., :half] = (u + v) % p
        b[..., half:] = (u - v) % p
        a = b.reshape(a.shape)
        length *= 2
    if invert:
        a = a * pow(n, p - 2, p) % p
    return a


def _ntt_convolve_mod(h1, h2, p, g):
    if h1.ndim == 1:
        a = _ntt_last_axis(h1, p, g)
        b = _ntt_last_axis(h2, p, g)
        return _ntt_last_axis(a * b % p, p, g, invert=True)
    a = _ntt_last_axis(h1, p, g)
    a = _ntt_last_axis(np.swapaxes(a, 0, 1).copy(), p, g)
    b = _ntt_last_axis(h2, p, g)
    b = _ntt_last_axis(np.swapaxes(b, 0, 1).copy(), p, g)
    c = a * b % p
    c = _ntt_last_axis(c, p, g, invert=True)
    c = _ntt_last_axis(np.swapaxes(c, 0, 1).copy(), p, g, invert=True)
    return c


def _crt2(r1, r2):
    (p1, _), (p2, _) = _NTT_PRIMES
    inv = pow(p1, p2 - 2, p2)
    diff = (r2 - r1) % p2
    return r1 + p1 * (diff * inv % p2)


def _roll_convolve(h1, h2):
    if np.count_nonzero(h2) < np.count_nonzero(h1):
        h1, h2 = h2, h1
    out = np.zeros_like(h2)
    if h1.ndim == 1:
        for i in np.flatnonzero(h1):
            out += h1[i] * np.roll(h2, i)
        return out
    for i, j in zip(*np.nonzero(h1)):
        out += h1[i, j] * np.roll(np.roll(h2, i, axis=0), j, axis=1)
    return out


def cyclic_convolve(h1, h2):
    """Exact cyclic convolution over the additive group of the ring."""
    s1 = int(h1.sum())
    s2 = int(h2.sum())
    big = s1 * s2 >= (1 << 61)
    if big:
        # exact but slow: fall back to object arithmetic
        return _roll_convolve(h1.astype(object), h2.astype(object))
    if h1.ndim == 1:
        n = h1.shape[0]
        if _is_pow2(n) and n >= (1 << 12):
            r = [_ntt_convolve_mod(h1, h2, p, g) for p, g in _NTT_PRIMES]
            return _crt2(r[0], r[1])
        full = np.convolve(h1, h2)
        out = full[:n].copy()
        if n > 1:
            out[:n - 1] += full[n:]
        return out
    size = h1.size
    if all(_is_pow2(m) for m in h1.shape) and size >= (1 << 10):
        r = [_ntt_convolve_mod(h1, h2, p, g) for p, g in _NTT_PRIMES]
        return _crt2(r[0], r[1])
    return _roll_convolve(h1, h2)


# ---------------------------------------------------------------------------
# Solution counting
# ---------------------------------------------------------------------------

def _all_histograms(ring, coeff_list, planes=0, restrict_nonunit=False):
    hists = [square_term_histogram(ring, c, restrict_nonunit) for c in coeff_list]
    for _ in range(planes):
        hists.append(plane_histogram(ring, restrict_nonunit))
    return hists


def solution_count(ring, coeff_list, target_coords, planes=0,
                   restrict_nonunit=False) -> int:
    """Number of tuples over the ring with sum of terms equal to target."""
    nvars = len(coeff_list) + 2 * planes
    if nvars == 0:
        return 1 if all(c == 0 for c in ring.reduce(target_coords)) else 0
    hists = _all_histograms(ring, coeff_list, planes, restrict_nonunit)
    total = hists[0]
    for h in hists[1:]:
        total = cyclic_convolve(total, h)
    idx = tuple(ring.reduce(target_coords))
    if len(ring.moduli) == 1:
        return int(total[idx[0]])
    return int(total[idx[0], idx[1]])


def primitive_zero_exists(ring, coeffs) -> bool:
    """Does sum a_i x_i^2 = 0 mod pi^level admit a solution with a unit coord?"""
    coeff_list = [c.coords if hasattr(c, "coords") else c for c in coeffs]
    zero = (0,) * len(ring.moduli)
    full = solution_count(ring, coeff_list, zero)
    sub = solution_count(ring, coeff_list, zero, restrict_nonunit=True)
    return full > sub


# ---------------------------------------------------------------------------
# Naive chunked enumeration (the slow ground-truth baseline)
# ---------------------------------------------------------------------------

def naive_count(ring, coeff_list, target_coords, planes=0, budget=None) -> int:
    """Full enumeration over all coordinate tuples, in vectorized chunks.

    Work is proportional to size^(n + 2*planes); the budget guard fails
    loudly instead of thrashing.
    """
    if budget is None:
        budget = enum_budget()
    size = ring.size
    nvars = len(coeff_list) + 2 * planes
    total_points = size ** nvars
    if total_points > budget:
        raise EnumBudgetError(
            "naive enumeration needs %d points (budget %d); "
            "use the histogram kernel" % (total_points, budget))
    target = ring.reduce(target_coords)
    if nvars == 0:
        return 1 if all(c == 0 for c in target) else 0

    # per-variable value tables (each of length `size`, or size^2 per plane)
    xs = coord_arrays(ring)
    tables = []
    for c in coeff_list:
        cc = vec_reduce(ring, c)
        tables.append(vec_mul(ring, cc, vec_mul(ring, xs, xs)))
    for _ in range(planes):
        k = len(xs[0])
        pair_x = tuple(np.repeat(c, k) for c in xs)
        pair_y = tuple(np.tile(c, k) for c in xs)
        two = vec_reduce(ring, (2,) + (0,) * (ring.field.ncoords - 1))
        tables.append(vec_mul(ring, vec_mul(ring, two, pair_x), pair_y))

    # build the running sum over a suffix of variables small enough to hold
    inner = tables[-1]
    i = len(tables) - 2
    while i >= 0 and len(inner[0]) * len(tables[i][0]) <= (1 << 22):
        t = tables[i]
        inner = tuple(
            (t_c[:, None] + inner_c[None, :]).ravel() % m
            for t_c, inner_c, m in zip(t, inner, ring.moduli))
        i -= 1
    outer_tables = tables[:i + 1]

    def count_against(partial):
        want = tuple((tc - pc) % m for tc, pc, m in zip(target, partial, ring.moduli))
        ok = inner[0] == want[0]
        for c, wc in zip(inner[1:], want[1:]):
            ok &= c == wc
        return int(np.count_nonzero(ok))

    if not outer_tables:
        return count_against((0,) * len(ring.moduli))
    total = 0
    idx = [0] * len(outer_tables)
    lengths = [len(t[0]) for t in outer_tables]
    while True:
        partial = tuple(0 for _ in ring.moduli)
        for t, j in zip(outer_tables, idx):
            partial = tuple((p + int(tc[j])) % m
                            for p, tc, m in zip(partial, t, ring.moduli))
        total += count_against(partial)
        k = len(idx) - 1
        while k >= 0:
            idx[k] += 1
            if idx[k] < lengths[k]:
                break
            idx[k] = 0
            k -= 1
        if k < 0:
            break
    return total
