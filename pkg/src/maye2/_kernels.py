"""Numba kernels for the degreewise homology oracle; pure-numpy fallbacks."""
from __future__ import annotations

import os

import numpy as np

try:  # pragma: no cover - environment dependent
    if os.environ.get("MAYE2_NO_NUMBA"):
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*a, **k):
        if a and callable(a[0]):
            return a[0]

        def wrap(f):
            return f

        return wrap


@njit(cache=True)
def count_table(tg, vg, tmax, vmax):
    """counts[g, t, v] = number of monomials over gens[g:] with degree sums (t, v)."""
    ng = tg.shape[0]
    counts = np.zeros((ng + 1, tmax + 1, vmax + 1), np.int64)
    counts[ng, 0, 0] = 1
    for g in range(ng - 1, -1, -1):
        for t in range(tmax + 1):
            for v in range(vmax + 1):
                c = counts[g + 1, t, v]
                if tg[g] <= t and vg[g] <= v:
                    c += counts[g, t - tg[g], v - vg[g]]
                counts[g, t, v] = c
    return counts


@njit(cache=True)
def enumerate_stratum(tg, vg, counts, t0, v0, out):
    """DFS over exponent vectors with exact degree (t0, v0); returns row count."""
    ng = tg.shape[0]
    exps = np.zeros(ng, np.int64)
    emax = np.zeros(ng, np.int64)
    n_out = 0
    pos = 0
    rt, rv = t0, v0
    if counts[0, t0, v0] == 0:
        return 0
    # choose exps[pos] from its max downward; descend when the suffix count is nonzero
    e = rt // tg[0]
    if vg[0] > 0:
        e2 = rv // vg[0]
        if e2 < e:
            e = e2
    exps[0] = e + 1  # will be decremented on entry
    emax[0] = e
    descending = True
    while True:
        if descending:
            e = exps[pos] - 1
        else:
            e = exps[pos] - 1
        found = False
        while e >= 0:
            nrt = rt - e * tg[pos]
            nrv = rv - e * vg[pos]
            if nrt >= 0 and nrv >= 0 and counts[pos + 1, nrt, nrv] > 0:
                found = True
                break
            e -= 1
        if not found:
            # backtrack
            pos -= 1
            if pos < 0:
                return n_out
            rt += exps[pos] * tg[pos]
            rv += exps[pos] * vg[pos]
            descending = True
            continue
        exps[pos] = e
        rt -= e * tg[pos]
        rv -= e * vg[pos]
        if pos == ng - 1:
            for g in range(ng):
                out[n_out, g] = exps[g]
            n_out += 1
            # stay at this level, try next smaller exponent
            rt += e * tg[pos]
            rv += e * vg[pos]
            descending = True
            continue
        pos += 1
        e0 = rt // tg[pos]
        if vg[pos] > 0:
            e2 = rv // vg[pos]
            if e2 < e0:
                e0 = e2
        exps[pos] = e0 + 1
        descending = True


@njit(cache=True)
def pack_keys(exps, widths):
    """Pack exponent rows into (hi, lo) uint64 pairs by fixed per-gen bit widths."""
    n, ng = exps.shape
    out = np.zeros((n, 2), np.uint64)
    for r in range(n):
        hi = np.uint64(0)
        lo = np.uint64(0)
        shift = 0
        for g in range(ng):
            w = widths[g]
            e = np.uint64(exps[r, g])
            if shift + w <= 64:
                lo |= e << np.uint64(shift)
            else:
                hi |= e << np.uint64(shift - 64)
            shift += w
        out[r, 0] = hi
        out[r, 1] = lo
    return out


@njit(cache=True)
def _find_key(keys_hi, keys_lo, hi, lo):
    a, b = 0, keys_hi.shape[0]
    while a < b:
        mid = (a + b) // 2
        kh = keys_hi[mid]
        if kh < hi or (kh == hi and keys_lo[mid] < lo):
            a = mid + 1
        else:
            b = mid
    if a < keys_hi.shape[0] and keys_hi[a] == hi and keys_lo[a] == lo:
        return a
    return -1


@njit(cache=True)
def boundary_rows(exps, diff_gens, diff_ptr, diff_terms, widths, tgt_hi, tgt_lo):
    """Bit-packed boundary matrix rows from source exponent block to target keys."""
    n, ng = exps.shape
    ncols = tgt_hi.shape[0]
    nwords = (ncols + 63) // 64 if ncols else 1
    rows = np.zeros((n, nwords), np.uint64)
    work = np.zeros(ng, np.int64)
    for r in range(n):
        for gi in range(diff_gens.shape[0]):
            g = diff_gens[gi]
            if exps[r, g] & 1:
                for ti in range(diff_ptr[gi], diff_ptr[gi + 1]):
                    for k in range(ng):
                        work[k] = exps[r, k] + diff_terms[ti, k]
                    work[g] -= 1
                    hi = np.uint64(0)
                    lo = np.uint64(0)
                    shift = 0
                    for k in range(ng):
                        w = widths[k]
                        e = np.uint64(work[k])
                        if shift + w <= 64:
                            lo |= e << np.uint64(shift)
                        else:
                            hi |= e << np.uint64(shift - 64)
                        shift += w
                    pos = _find_key(tgt_hi, tgt_lo, hi, lo)
                    if pos >= 0:
                        rows[r, pos >> 6] ^= np.uint64(1) << np.uint64(pos & 63)
    return rows


@njit(cache=True)
def gf2_rank_rows(rows):
    """In-place Gaussian elimination; returns the rank."""
    n, nw = rows.shape
    ncols = nw * 64
    pivot_of = np.full(ncols, -1, np.int64)
    rank = 0
    for r in range(n):
        while True:
            b = -1
            for w in range(nw):
                x = rows[r, w]
                if x:
                    lsb = 0
                    while (x >> np.uint64(lsb)) & np.uint64(1) == 0:
                        lsb += 1
                    b = w * 64 + lsb
                    break
            if b < 0:
                break
            p = pivot_of[b]
            if p < 0:
                pivot_of[b] = r
                rank += 1
                break
            for w in range(nw):
                rows[r, w] ^= rows[p, w]
    return rank
