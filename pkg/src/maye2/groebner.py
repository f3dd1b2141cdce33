"""Reduction, Buchberger's algorithm, annihilators and nilpotence certificates.

The engine keeps a dict {leading monomial: tail} and a heap of pending
polynomials keyed by (t, s); S-polynomials are pushed eagerly and processed
in ascending degree, with redundant leading terms pruned on insertion.  For
homogeneous ideals this yields the reduced basis after a tail-reduction pass.
"""
from __future__ import annotations

import heapq
import itertools
import json
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ._gf2 import Echelon
from .f2alg import Poly, Ring, RingMap, StructureError, TriDegree, _strip

__all__ = [
    "GroebnerBasis", "AnnihilatorModule", "red1", "reduce", "buchberger",
    "reduce_basis", "annihilator", "commutator_tuples",
    "squarefree_lm_certificate", "GbEngine", "basis_monomials",
    "write_basis_file", "read_basis_file", "basis_to_json",
]


class NotReducible(ValueError):
    pass


def _support_mask(m: Tuple[int, ...]) -> int:
    mask = 0
    for i, e in enumerate(m):
        if e:
            mask |= 1 << i
    return mask


def _divides(small: Tuple[int, ...], big: Tuple[int, ...]) -> bool:
    if len(small) > len(big):
        return False
    for a, b in zip(small, big):
        if a > b:
            return False
    return True


class GbEngine:
    """Incremental Groebner engine over one ring (revlex)."""

    def __init__(self, ring: Ring):
        if ring.ordering != "revlex":
            raise ValueError("the engine requires the revlex ordering")
        self.ring = ring
        self.rels: Dict[Tuple[int, ...], frozenset] = {}
        self.masks: Dict[Tuple[int, ...], int] = {}
        self.heap: list = []
        self._seq = itertools.count()

    # -- insertion ------------------------------------------------------------

    def _degkey(self, m: Tuple[int, ...]) -> Tuple[int, int]:
        d = self.ring.mon_deg(m)
        return (d.t, d.s)

    def push(self, terms: Iterable[Tuple[int, ...]]):
        terms = frozenset(terms)
        if not terms:
            return
        lead = min(terms)
        heapq.heappush(self.heap, (self._degkey(lead), next(self._seq), terms))

    def add_poly(self, p: Poly):
        if p.ring is not self.ring:
            raise StructureError("polynomial from another ring")
        if p and not p.is_homogeneous():
            raise StructureError("relations must be homogeneous")
        self.push(p.terms)

    # -- normal form ----------------------------------------------------------

    def normal_form_terms(self, terms: Iterable[Tuple[int, ...]]) -> frozenset:
        """Fully reduce a set of monomials modulo the current rels."""
        work = set(terms)
        if not work:
            return frozenset()
        heap = list(work)
        heapq.heapify(heap)
        result: set = set()
        rels = self.rels
        masks = self.masks
        mul = self.ring.mon_mul
        while heap:
            m = heapq.heappop(heap)
            if m not in work:
                continue
            mmask = _support_mask(m)
            hit = None
            for lm, lmask in masks.items():
                if lmask & ~mmask:
                    continue
                if _divides(lm, m):
                    hit = lm
                    break
            if hit is None:
                work.discard(m)
                result.add(m)
                continue
            q = self.ring.mon_div(m, hit)
            work.symmetric_difference_update({m})
            for mm in rels[hit]:
                x = mul(q, mm)
                if x in work:
                    work.discard(x)
                else:
                    work.add(x)
                    heapq.heappush(heap, x)
        return frozenset(result)

    def normal_form(self, p: Poly) -> Poly:
        return Poly(self.ring, self.normal_form_terms(p.terms))

    # -- the main loop ----------------------------------------------------------

    def run(self, degcap: Optional[int] = None):
        """Process pending polynomials in ascending (t, s) degree order."""
        ring = self.ring
        while self.heap:
            if degcap is not None and self.heap[0][0][0] > degcap:
                return
            _, _, terms = heapq.heappop(self.heap)
            r = self.normal_form_terms(terms)
            if not r:
                continue
            m = min(r)
            rest = frozenset(r - {m})
            mmask = _support_mask(m)
            removals = []
            for m1, v1 in self.rels.items():
                gcd_nonzero = self.masks[m1] & mmask
                if not gcd_nonzero:
                    continue  # product criterion: S-poly reduces to zero
                lcm = ring.mon_lcm(m, m1)
                q = ring.mon_div(lcm, m)
                q1 = ring.mon_div(lcm, m1)
                spoly = set()
                for mm in rest:
                    spoly.symmetric_difference_update({ring.mon_mul(q, mm)})
                for mm in v1:
                    spoly.symmetric_difference_update({ring.mon_mul(q1, mm)})
                if _divides(m, m1):
                    removals.append(m1)
                if spoly:
                    heapq.heappush(self.heap, (self._degkey(lcm), next(self._seq),
                                               frozenset(spoly)))
            for m1 in removals:
                del self.rels[m1]
                del self.masks[m1]
            self.rels[m] = rest
            self.masks[m] = mmask

    def tail_reduce(self):
        """Reduce every tail against the other elements (makes the basis reduced)."""
        changed = True
        while changed:
            changed = False
            for m in sorted(self.rels, key=self._degkey):
                rest = self.rels[m]
                nf = self.normal_form_terms(rest)
                if nf != rest:
                    self.rels[m] = nf
                    changed = True

    def elements(self) -> List[Poly]:
        out = [Poly(self.ring, frozenset({m}) | self.rels[m]) for m in self.rels]
        out.sort(key=lambda p: p.sort_key())
        return out

    def is_complete(self) -> bool:
        return not self.heap


class GroebnerBasis:
    """A Groebner basis with its ring and reduced flag."""

    def __init__(self, ring: Ring, elements: Sequence[Poly], reduced: bool = False):
        self.ring = ring
        self.elements = list(elements)
        self.reduced = reduced

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        return (isinstance(other, GroebnerBasis)
                and {p.terms for p in self.elements} == {p.terms for p in other.elements})

    def leading_monomials(self) -> List[Tuple[int, ...]]:
        return [p.lm() for p in self.elements]

    def engine(self) -> GbEngine:
        eng = GbEngine(self.ring)
        for p in self.elements:
            eng.rels[p.lm()] = frozenset(p.terms - {p.lm()})
            eng.masks[p.lm()] = _support_mask(p.lm())
        return eng

    def normal_form(self, p: Poly) -> Poly:
        return self.engine().normal_form(p)


def red1(f: Poly, g: Poly) -> Poly:
    """One-step reduction of f by g at the largest reducible monomial."""
    if f.ring is not g.ring:
        raise StructureError("polynomials from different rings")
    ring = f.ring
    lm = g.lm()
    cands = [m for m in f.terms if _divides(lm, m)]
    if not cands:
        raise NotReducible("f is not reducible by g")
    m = ring.lead(cands)
    q = ring.mon_div(m, lm)
    return f + Poly(ring, frozenset(ring.mon_mul(q, mm) for mm in g.terms))


def reduce(f: Poly, S: Sequence[Poly]) -> Poly:
    """Iterate one-step reductions: largest reducible monomial, earliest divisor."""
    ring = f.ring
    lms = [(g.lm(), g) for g in S if g]
    terms = set(f.terms)
    result: set = set()
    while terms:
        m = ring.lead(terms)
        hit = None
        for lm, g in lms:
            if _divides(lm, m):
                hit = (lm, g)
                break
        if hit is None:
            terms.discard(m)
            result.add(m)
            continue
        lm, g = hit
        q = ring.mon_div(m, lm)
        for mm in g.terms:
            x = ring.mon_mul(q, mm)
            if x in terms:
                terms.discard(x)
            elif x in result:
                result.discard(x)
            else:
                terms.add(x)
    return Poly(ring, frozenset(result))


def buchberger(G0: Sequence[Poly], ring: Optional[Ring] = None) -> GroebnerBasis:
    """Complete a generating set to the reduced Groebner basis of its ideal."""
    if ring is None:
        if not G0:
            raise ValueError("empty input needs an explicit ring")
        ring = G0[0].ring
    eng = GbEngine(ring)
    for p in G0:
        eng.add_poly(p)
    eng.run()
    eng.tail_reduce()
    return GroebnerBasis(ring, eng.elements(), reduced=True)


def reduce_basis(G: GroebnerBasis) -> GroebnerBasis:
    """The unique reduced basis of the ideal of G."""
    return buchberger(G.elements, G.ring)


def commutator_tuples(fs: Sequence[Poly]) -> List[Tuple[Poly, ...]]:
    """The k(k-1)/2 commutator tuples: f_j at slot i and f_i at slot j."""
    k = len(fs)
    if k < 2:
        return []
    ring = fs[0].ring
    out = []
    for i in range(k):
        for j in range(i + 1, k):
            tup = [ring.zero()] * k
            tup[i] = fs[j]
            tup[j] = fs[i]
            out.append(tuple(tup))
    return out


class AnnihilatorModule:
    """Generators of Ann(f_1,...,f_k) as an R-submodule of R^k, R = P/I."""

    def __init__(self, ring: Ring, ideal: GroebnerBasis, fs: Sequence[Poly],
                 generators: List[Tuple[Poly, ...]]):
        self.ring = ring
        self.ideal = ideal
        self.fs = list(fs)
        self.generators = generators
        eng = ideal.engine()
        for tup in generators:
            acc = ring.zero()
            for f, b in zip(self.fs, tup):
                acc = acc + f * b
            if eng.normal_form(acc):
                raise StructureError("annihilator generator fails sum f_i b_i = 0")

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)


def _extended_ring(ring: Ring, ys: List[Tuple[str, TriDegree]]) -> Tuple[Ring, RingMap]:
    """Ring with the y-variables placed before all existing generators."""
    gens = ys + [(g.name, g.degree) for g in ring.gens]
    Q = Ring(gens, "revlex")
    images = {g.name: Q.gen(g.name) for g in ring.gens}
    emb = RingMap(ring, Q, images, degree_map=lambda d: d)
    return Q, emb


def annihilator(ideal: Sequence[Poly], fs: Sequence[Poly],
                ring: Optional[Ring] = None,
                ideal_gb: Optional[GroebnerBasis] = None) -> AnnihilatorModule:
    """Ann(f_1,...,f_k) in R = P/I via elimination with y-variables first."""
    if ring is None:
        ring = (fs[0] if fs else ideal[0]).ring
    k = len(fs)
    ys = []
    for i, f in enumerate(fs):
        d = f.degree()
        if d is None:
            raise StructureError("annihilator inputs must be nonzero and homogeneous")
        ys.append((f"y_{i + 1}", d))
    Q, emb = _extended_ring(ring, ys)
    eng = GbEngine(Q)
    for p in ideal:
        eng.add_poly(emb(p))
    for i, f in enumerate(fs):
        eng.add_poly(Q.gen(f"y_{i + 1}") + emb(f))
    eng.run()
    eng.tail_reduce()
    # read off elements whose monomials all contain some y
    subst = RingMap(Q, ring, {
        **{f"y_{i + 1}": fs[i] for i in range(k)},
        **{g.name: ring.gen(g.name) for g in ring.gens},
    }, check_degrees=False)
    if ideal_gb is None:
        ideal_gb = buchberger(list(ideal), ring) if ideal else GroebnerBasis(ring, [], True)
    nf = ideal_gb.engine()
    gens: List[Tuple[Poly, ...]] = []
    for lm in eng.rels:
        if not any(lm[:k]):
            continue
        full = {lm} | set(eng.rels[lm])
        parts: List[set] = [set() for _ in range(k)]
        ok = True
        for m in full:
            yi = next((i for i in range(min(k, len(m))) if m[i]), None)
            if yi is None:
                ok = False
                break
            mm = list(m)
            mm[yi] -= 1
            parts[yi].add(_strip(mm))
        if not ok:
            raise StructureError("leading y-element has a y-free monomial")
        tup = []
        for i in range(k):
            h = subst(Poly(Q, frozenset(parts[i])))
            tup.append(nf.normal_form(h))
        if any(tup):
            gens.append(tuple(tup))
    gens.extend(commutator_tuples(list(fs)))
    return AnnihilatorModule(ring, ideal_gb, fs, gens)


def squarefree_lm_certificate(G: GroebnerBasis):
    """pass iff every leading monomial is square free (then P/I is nilpotent free)."""
    for p in G.elements:
        lm = p.lm()
        if any(e > 1 for e in lm):
            return False, G.ring.mon_str(lm)
    return True, None


# -- basis monomials of the quotient ring ---------------------------------------


def basis_monomials(ring: Ring, lms: Sequence[Tuple[int, ...]], tcap: int,
                    degree: Optional[Tuple[int, int, int]] = None) -> List[Tuple[int, ...]]:
    """Monomials not divisible by any leading monomial, with t <= tcap.

    With `degree` given, restrict to that exact tri-degree (fast pruned path).
    """
    ng = ring.ngens
    degs = [tuple(g.degree) for g in ring.gens]
    out: List[Tuple[int, ...]] = []
    exps = [0] * ng
    if any(lm == () for lm in lms):
        return out

    if degree is not None:
        order = sorted(range(ng), key=lambda i: -degs[i][1])
        pos_of = {i: p for p, i in enumerate(order)}
        # trigger each leading monomial at its last-processed variable
        by_trigger: Dict[int, List[List[Tuple[int, int]]]] = {}
        for lm in lms:
            items = [(i, e) for i, e in enumerate(lm) if e]
            if items:
                trig = max(pos_of[i] for i, _ in items)
                by_trigger.setdefault(trig, []).append(items)
        suf_tmax = [0] * (ng + 1)
        suf_umax = [0] * (ng + 1)
        for p in range(ng - 1, -1, -1):
            i = order[p]
            suf_tmax[p] = max(suf_tmax[p + 1], degs[i][1])
            suf_umax[p] = max(suf_umax[p + 1], degs[i][2])
        t_ge_s = all(d[1] >= d[0] >= 1 for d in degs)

        def blocked(p: int) -> bool:
            for items in by_trigger.get(p, ()):
                for j, e in items:
                    if exps[j] < e:
                        break
                else:
                    return True
            return False

        def rec(p: int, rs: int, rt: int, ru: int):
            if rs == 0 and rt == 0 and ru == 0:
                out.append(_strip(exps))
                return
            if p == ng or rs < 0 or rt < 0 or ru < 0:
                return
            if t_ge_s and rt < rs:
                return
            if rt > rs * suf_tmax[p] or ru > rs * suf_umax[p]:
                return
            i = order[p]
            s_i, t_i, u_i = degs[i]
            emax = rs // s_i if s_i else rs
            if t_i:
                emax = min(emax, rt // t_i)
            if u_i:
                emax = min(emax, ru // u_i)
            for e in range(0, emax + 1):
                exps[i] = e
                if e and blocked(p):
                    break
                rec(p + 1, rs - e * s_i, rt - e * t_i, ru - e * u_i)
            exps[i] = 0

        rec(0, degree[0], degree[1], degree[2])
        out.sort()
        return out

    by_maxvar: Dict[int, List[Tuple[int, ...]]] = {}
    for lm in lms:
        mv = max(i for i, e in enumerate(lm) if e)
        by_maxvar.setdefault(mv, []).append(tuple(lm))

    def blocked_plain(i: int) -> bool:
        for lm in by_maxvar.get(i, ()):
            if all(exps[j] >= e for j, e in enumerate(lm)):
                return True
        return False

    def rec_plain(i: int, s: int, t: int, u: int):
        if i == ng:
            out.append(_strip(exps))
            return
        e = 0
        while True:
            t2 = t + e * degs[i][1]
            if t2 > tcap:
                break
            exps[i] = e
            if e and blocked_plain(i):
                break
            rec_plain(i + 1, s + e * degs[i][0], t2, u + e * degs[i][2])
            e += 1
        exps[i] = 0

    rec_plain(0, 0, 0, 0)
    return out


# -- basis files -----------------------------------------------------------------


def write_basis_file(path, ring: Ring, polys: Sequence[Poly], header: str = ""):
    lines = []
    if header:
        for ln in header.splitlines():
            lines.append(f"# {ln}")
    lines.append("generators:")
    for g in ring.gens:
        d = g.degree
        lines.append(f"{g.name} {d.s} {d.t} {d.u}")
    lines.append("polynomials:")
    for p in sorted(polys, key=lambda q: q.sort_key()):
        lines.append(str(p))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_basis_file(path) -> Tuple[Ring, List[Poly]]:
    gens: List[Tuple[str, TriDegree]] = []
    polys: List[str] = []
    section = None
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line == "generators:":
                section = "gens"
                continue
            if line in ("polynomials:", "relations:"):
                section = "polys"
                continue
            if section == "gens":
                name, s, t, u = line.split()
                gens.append((name, TriDegree(int(s), int(t), int(u))))
            elif section == "polys":
                polys.append(line)
            else:
                raise ValueError(f"line outside any section: {line!r}")
    ring = Ring(gens, "revlex")
    return ring, [ring.parse(p) for p in polys]


def basis_to_json(ring: Ring, polys: Sequence[Poly]) -> str:
    data = {
        "generators": [
            {"name": g.name, "degree": {"s": g.degree.s, "t": g.degree.t, "u": g.degree.u}}
            for g in ring.gens
        ],
        "polynomials": [
            {"text": str(p),
             "terms": [[[i, e] for i, e in enumerate(m) if e] for m in ring.sorted_terms(p.terms)]}
            for p in sorted(polys, key=lambda q: q.sort_key())
        ],
    }
    return json.dumps(data, indent=1)
