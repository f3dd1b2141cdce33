"""Degreewise F2 linear algebra on polynomial DGAs: the brute-force oracle.

A slice is the finite monomial basis of a DGA in one degree.  Boundary maps
preserve the per-generator "charge" multigrading (vertex weights of the May
complex), so slices decompose into small d-stable classes; all ranks are
computed classwise.  The full-cap sweep streams one (t, s+u) stratum at a
time and uses numba kernels when available.

For quotient variants (graded_slots != (0,1,2)) the s slot is a filtration,
not a grading; degrees are normalized to (0, t-s, u) throughout.
"""
from __future__ import annotations

from collections import defaultdict
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from ._gf2 import Echelon
from .f2alg import Poly, TriDegree, _strip
from .maycomplex import DgaSpec, differential

__all__ = [
    "CapExceeded", "NotACycle", "DegreeSlice", "slice_basis", "degree_slice",
    "homology_dim", "is_boundary", "homology_dims", "class_basis",
]


class CapExceeded(ValueError):
    pass


class NotACycle(ValueError):
    pass


def _is_tri(dga: DgaSpec) -> bool:
    return dga.graded_slots == (0, 1, 2)


def norm_deg(dga: DgaSpec, deg: Sequence[int]) -> Tuple[int, int, int]:
    deg = tuple(deg)
    return deg if _is_tri(dga) else (0, deg[1], deg[2])


def _charge_of(dga: DgaSpec, mon: Tuple[int, ...]) -> Tuple[int, ...]:
    if not dga.charges:
        return ()
    K = len(dga.charges[0])
    out = [0] * K
    for i, e in enumerate(mon):
        if e:
            c = dga.charges[i]
            for k in range(K):
                out[k] += e * c[k]
    return tuple(out)


def class_basis(dga: DgaSpec, deg: Sequence[int], charge: Optional[Tuple[int, ...]] = None,
                cap: Optional[int] = None) -> List[Tuple[int, ...]]:
    """Monomials of one exact (s,t,u) degree (optionally one charge class)."""
    deg = tuple(deg)
    if cap is not None and deg[1] > cap:
        raise CapExceeded(f"degree t={deg[1]} exceeds cap {cap}")
    gens = dga.ring.gens
    ng = len(gens)
    degs = [tuple(g.degree) for g in gens]
    order = sorted(range(ng), key=lambda i: -degs[i][1])
    charges = dga.charges
    K = len(charges[0]) if (charges is not None and charge is not None) else 0
    suf_tmax = [0] * (ng + 1)
    suf_umax = [0] * (ng + 1)
    suf_verts: List[frozenset] = [frozenset()] * (ng + 1)
    for p in range(ng - 1, -1, -1):
        i = order[p]
        suf_tmax[p] = max(suf_tmax[p + 1], degs[i][1])
        suf_umax[p] = max(suf_umax[p + 1], degs[i][2])
        touched = {k for k in range(K) if charges[i][k]} if K else set()
        suf_verts[p] = suf_verts[p + 1] | touched
    out: List[Tuple[int, ...]] = []
    exps = [0] * ng

    def rec(p: int, rs: int, rt: int, ru: int, rw: Tuple[int, ...]):
        if rs == 0:
            if rt == 0 and ru == 0 and (not K or not any(rw)):
                out.append(_strip(exps))
            return
        if p == ng or rt < rs or ru < 0 or rt > rs * suf_tmax[p] or ru > rs * suf_umax[p]:
            return
        if K:
            if sum(abs(x) for x in rw) > 2 * rs:
                return
            for k in range(K):
                if rw[k] and k not in suf_verts[p]:
                    return
        i = order[p]
        s_i, t_i, u_i = degs[i]
        emax = rs // s_i if s_i else rs
        if t_i:
            emax = min(emax, rt // t_i)
        if u_i:
            emax = min(emax, ru // u_i)
        ci = charges[i] if K else None
        for e in range(emax, -1, -1):
            exps[i] = e
            if K and e:
                rw2 = tuple(rw[k] - e * ci[k] for k in range(K))
            else:
                rw2 = rw
            rec(p + 1, rs - e * s_i, rt - e * t_i, ru - e * u_i, rw2)
        exps[i] = 0

    rec(0, deg[0], deg[1], deg[2], charge if charge is not None else ())
    out.sort()
    return out


def grade_basis(dga: DgaSpec, deg: Sequence[int], charge: Optional[Tuple[int, ...]] = None,
                cap: Optional[int] = None) -> List[Tuple[int, ...]]:
    """Basis of one degree of the DGA's honest grading (s summed out if needed)."""
    deg = tuple(deg)
    if _is_tri(dga):
        return class_basis(dga, deg, charge, cap)
    if cap is not None and deg[1] > cap:
        raise CapExceeded(f"degree t={deg[1]} exceeds cap {cap}")
    out: List[Tuple[int, ...]] = []
    for s in range(deg[1] + 1):  # every generator has first-slot degree >= 1
        out.extend(class_basis(dga, (s, deg[1], deg[2]), charge))
    out.sort()
    return out


def slice_basis(dga: DgaSpec, deg: Sequence[int], cap: Optional[int] = None) -> List[Tuple[int, ...]]:
    return grade_basis(dga, deg, None, cap)


class DegreeSlice:
    """Monomial basis in one degree with int-bitset boundary matrices."""

    def __init__(self, dga: DgaSpec, degree, basis, out_basis, in_basis):
        self.dga = dga
        self.degree = degree
        self.basis = basis
        self.out_basis = out_basis
        self.in_basis = in_basis
        self.index = {m: i for i, m in enumerate(basis)}
        out_index = {m: i for i, m in enumerate(out_basis)}
        self.matrix_out = [_boundary_row(dga, m, out_index) for m in basis]
        self.matrix_in = [_boundary_row(dga, m, self.index) for m in in_basis]

    def rank_out(self) -> int:
        ech = Echelon()
        for r in self.matrix_out:
            ech.insert(r)
        return ech.rank

    def rank_in(self) -> int:
        ech = Echelon()
        for r in self.matrix_in:
            ech.insert(r)
        return ech.rank

    def compose_zero(self) -> bool:
        """d o d = 0 through this slice."""
        for m in self.in_basis:
            p = differential(self.dga, differential(self.dga, Poly(self.dga.ring, frozenset({m}))))
            if p:
                return False
        return True


def _boundary_row(dga: DgaSpec, mon: Tuple[int, ...], target_index: Dict[Tuple[int, ...], int]) -> int:
    ring = dga.ring
    row = 0
    for i, e in enumerate(mon):
        if e & 1 and dga.diff[i]:
            rest = list(mon)
            rest[i] -= 1
            base = tuple(rest)
            for dm in dga.diff[i].terms:
                tgt = ring.mon_mul(base, dm)
                pos = target_index.get(tgt)
                if pos is not None:
                    row ^= 1 << pos
    return row


def _shifted(dga: DgaSpec, deg: Tuple[int, int, int], sign: int) -> Tuple[int, int, int]:
    sh = dga.d_shift
    out = tuple(deg[k] + sign * sh[k] for k in range(3))
    return norm_deg(dga, out)


def degree_slice(dga: DgaSpec, deg: Sequence[int], cap: Optional[int] = None) -> DegreeSlice:
    deg = norm_deg(dga, deg)
    out_deg = _shifted(dga, deg, +1)
    in_deg = _shifted(dga, deg, -1)
    basis = slice_basis(dga, deg, cap)
    out_basis = slice_basis(dga, out_deg) if min(out_deg[1:]) >= 0 else []
    in_basis = slice_basis(dga, in_deg) if min(in_deg[1:]) >= 0 else []
    return DegreeSlice(dga, TriDegree(*deg), basis, out_basis, in_basis)


def homology_dim(dga: DgaSpec, deg: Sequence[int], cap: Optional[int] = None) -> int:
    """dim ker d - dim im d in one degree, computed classwise over charges."""
    deg = norm_deg(dga, deg)
    if cap is not None and deg[1] > cap:
        raise CapExceeded(f"degree t={deg[1]} exceeds cap {cap}")
    if dga.charges is None:
        sl = degree_slice(dga, deg)
        return len(sl.basis) - sl.rank_out() - sl.rank_in()
    total = 0
    groups = defaultdict(list)
    for m in slice_basis(dga, deg):
        groups[_charge_of(dga, m)].append(m)
    for w, basis in groups.items():
        total += _class_homology_dim(dga, deg, w, basis)
    return total


def _class_homology_dim(dga, deg, w, basis) -> int:
    out_deg = _shifted(dga, deg, +1)
    in_deg = _shifted(dga, deg, -1)
    out_basis = grade_basis(dga, out_deg, w) if min(out_deg[1:]) >= 0 else []
    in_basis = grade_basis(dga, in_deg, w) if min(in_deg[1:]) >= 0 else []
    out_index = {m: i for i, m in enumerate(out_basis)}
    idx = {m: i for i, m in enumerate(basis)}
    ech_out = Echelon()
    for m in basis:
        ech_out.insert(_boundary_row(dga, m, out_index))
    ech_in = Echelon()
    for m in in_basis:
        ech_in.insert(_boundary_row(dga, m, idx))
    return len(basis) - ech_out.rank - ech_in.rank


def poly_vector(p: Poly, index: Dict[Tuple[int, ...], int]) -> int:
    vec = 0
    for m in p.terms:
        vec ^= 1 << index[m]
    return vec


def is_boundary(dga: DgaSpec, p: Poly, extra: Sequence[Poly] = (),
                cap: Optional[int] = None):
    """Decide whether p = d(y) + (combination of extras); return (ok, y, combo).

    p and every extra must be cycles, each homogeneous in degree and charge.
    combo is a bitmask over `extra` (bit i set = extra i used).
    """
    if not p and not extra:
        return True, dga.ring.zero(), 0
    if p and differential(dga, p):
        raise NotACycle("is_boundary requires a cycle")
    polys = [p] + list(extra)
    deg = None
    for q in polys:
        if q:
            deg = norm_deg(dga, q.degree())
            break
    if deg is None:
        return True, dga.ring.zero(), 0
    if cap is not None and deg[1] > cap:
        raise CapExceeded(f"degree t={deg[1]} exceeds cap {cap}")
    charges = sorted({_charge_of(dga, m) for q in polys for m in q.terms})
    src_deg = _shifted(dga, deg, -1)
    witness: set = set()
    n_extra = len(extra)
    constraints: Dict[int, int] = {}
    for w in charges:
        tgt_basis = grade_basis(dga, deg, w)
        index = {m: i for i, m in enumerate(tgt_basis)}
        srcs = grade_basis(dga, src_deg, w) if min(src_deg[1:]) >= 0 else []
        ech = Echelon()
        rows = [_boundary_row(dga, m, index) for m in srcs]
        touched = []
        for gi, q in enumerate(extra):
            vec = 0
            any_term = False
            for m in q.terms:
                if _charge_of(dga, m) == w:
                    vec ^= 1 << index[m]
                    any_term = True
            if any_term:
                touched.append(gi)
                rows.append(vec)
        for r in rows:
            ech.insert(r)
        tvec = 0
        for m in p.terms:
            if _charge_of(dga, m) == w:
                tvec ^= 1 << index[m]
        combo = ech.solve(tvec)
        if combo is None:
            return False, None, None
        for k in range(len(srcs)):
            if (combo >> k) & 1:
                witness.symmetric_difference_update({srcs[k]})
        for pos, gi in enumerate(touched):
            bit = (combo >> (len(srcs) + pos)) & 1
            if gi in constraints and constraints[gi] != bit:
                return False, None, None
            constraints[gi] = bit
    combo_total = 0
    for gi, bit in constraints.items():
        combo_total |= bit << gi
    return True, Poly(dga.ring, frozenset(witness)), combo_total


# -- the full-cap dimension sweep ----------------------------------------------


def homology_dims(dga: DgaSpec, tcap: int, progress=None) -> Dict[TriDegree, int]:
    """All homology dimensions with the capped degree slot <= tcap."""
    if _is_tri(dga):
        return _sweep_tri(dga, tcap, progress)
    return _sweep_generic(dga, tcap)


def _sweep_generic(dga: DgaSpec, tcap: int) -> Dict[TriDegree, int]:
    """Small-scale sweep for the quotient variants: grading (t-s, u) only."""
    shift = dga.d_shift
    degs = [tuple(g.degree) for g in dga.ring.gens]
    groups: Dict[tuple, List[tuple]] = defaultdict(list)
    ng = dga.ring.ngens
    exps = [0] * ng

    def rec(i: int, t: int, u: int):
        if i == ng:
            m = _strip(exps)
            groups[((0, t, u), _charge_of(dga, m))].append(m)
            return
        e = 0
        while t + e * degs[i][1] <= tcap + 1:
            exps[i] = e
            rec(i + 1, t + e * degs[i][1], u + e * degs[i][2])
            e += 1
        exps[i] = 0

    rec(0, 0, 0)
    ranks: Dict[tuple, int] = {}
    for (deg, w), basis in groups.items():
        out_deg = (0, deg[1] + shift[1], deg[2] + shift[2])
        tgt = groups.get((out_deg, w), [])
        index = {m: i for i, m in enumerate(tgt)}
        ech = Echelon()
        for m in basis:
            ech.insert(_boundary_row(dga, m, index))
        ranks[(deg, w)] = ech.rank
    dims: Dict[TriDegree, int] = defaultdict(int)
    for (deg, w), basis in groups.items():
        if deg[1] > tcap:
            continue
        in_deg = (0, deg[1] - shift[1], deg[2] - shift[2])
        r_in = ranks.get((in_deg, w), 0)
        d = len(basis) - ranks[(deg, w)] - r_in
        if d:
            dims[TriDegree(*deg)] += d
    return dict(dims)


def _sweep_tri(dga: DgaSpec, tcap: int, progress=None) -> Dict[TriDegree, int]:
    """Streaming sweep over (t, v=s+u) strata for tri-graded DGAs."""
    ring = dga.ring
    ng = ring.ngens
    degs = [tuple(g.degree) for g in ring.gens]
    if any(d[0] != 1 for d in degs):
        raise ValueError("tri-graded sweep expects all generators in s-degree 1")
    active = [i for i in range(ng) if degs[i][1] <= tcap]
    order = sorted(active, key=lambda i: -degs[i][1])
    pos_of = {i: p for p, i in enumerate(order)}
    tg = np.array([degs[i][1] for i in order], dtype=np.int64)
    vg = np.array([1 + degs[i][2] for i in order], dtype=np.int64)
    K = len(dga.charges[0]) if dga.charges is not None else 0
    cmat = np.zeros((len(order), K), dtype=np.int64)
    for p, i in enumerate(order):
        if K:
            cmat[p] = dga.charges[i]
    diff_gens, diff_ptr, terms = [], [0], []
    for p, i in enumerate(order):
        dpoly = dga.diff[i]
        if not dpoly:
            continue
        diff_gens.append(p)
        for m in dpoly.terms:
            row = np.zeros(len(order), dtype=np.int64)
            for gi, e in enumerate(m):
                if e:
                    row[pos_of[gi]] = e  # diff terms only use generators of t <= t_i
            terms.append(row)
        diff_ptr.append(len(terms))
    diff_gens = np.array(diff_gens, dtype=np.int64)
    diff_ptr = np.array(diff_ptr, dtype=np.int64)
    diff_terms = np.array(terms, dtype=np.int64) if terms else np.zeros((0, len(order)), np.int64)
    vmax = 0
    for p in range(len(order)):
        vmax = max(vmax, int(vg[p] * (tcap // tg[p])))
    counts = _kernels.count_table(tg, vg, tcap, vmax)
    widths = np.array([max(1, int(tcap // t).bit_length()) for t in tg], dtype=np.int64)
    if widths.sum() > 128:
        raise ValueError("monomial key exceeds 128 bits; reduce the cap")
    dims: Dict[TriDegree, int] = defaultdict(int)
    for t in range(0, tcap + 1):
        for v in range(0, vmax + 1):
            n = int(counts[0, t, v])
            if n:
                _stratum_dims(t, v, n, tg, vg, cmat, counts, widths,
                              diff_gens, diff_ptr, diff_terms, dims)
        if progress:
            progress(t)
    return {d: x for d, x in dims.items() if x}


def _stratum_dims(t, v, n, tg, vg, cmat, counts, widths,
                  diff_gens, diff_ptr, diff_terms, dims):
    exps = np.zeros((n, len(tg)), dtype=np.int64)
    got = _kernels.enumerate_stratum(tg, vg, counts, t, v, exps)
    assert got == n, (t, v, got, n)
    svec = exps.sum(axis=1)
    K = cmat.shape[1]
    group_cols = np.empty((n, K + 1), dtype=np.int64)
    group_cols[:, 0] = svec
    if K:
        group_cols[:, 1:] = exps @ cmat
    uniq, gid = np.unique(group_cols, axis=0, return_inverse=True)
    gid = np.asarray(gid).ravel()
    keys = _kernels.pack_keys(exps, widths)
    order = np.lexsort((keys[:, 1], keys[:, 0], gid))
    exps = exps[order]
    keys = np.ascontiguousarray(keys[order])
    gid = gid[order]
    starts = np.flatnonzero(np.r_[True, gid[1:] != gid[:-1]])
    ends = np.r_[starts[1:], n]
    ginfo = {}
    for a, b, g in zip(starts, ends, gid[starts]):
        key = tuple(int(x) for x in uniq[g])
        ginfo[key] = (int(a), int(b))
    ranks: Dict[tuple, int] = {}
    for key, (a, b) in ginfo.items():
        tgt_key = (key[0] + 1,) + key[1:]
        hit = ginfo.get(tgt_key)
        if hit is None:
            ranks[key] = 0
            continue
        ta, tb = hit
        rows = _kernels.boundary_rows(exps[a:b], diff_gens, diff_ptr, diff_terms,
                                      widths, keys[ta:tb, 0], keys[ta:tb, 1])
        ranks[key] = int(_kernels.gf2_rank_rows(rows))
    for key, (a, b) in ginfo.items():
        s = key[0]
        src_key = (s - 1,) + key[1:]
        r_in = ranks.get(src_key, 0)
        d = (b - a) - ranks[key] - r_in
        if d:
            dims[TriDegree(s, t, v - s)] += d
