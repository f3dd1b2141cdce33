"""Named-class presentations of DGA homology and the adjoin-variable induction.

A Presentation names homology classes of an ambient polynomial DGA, stores a
cycle representative per class, a relation list, and a cached reduced
Groebner basis.  `adjoin_variable` implements the E0-page description of
H(A[x]) (annihilator classes, b = [x^2], parts (i)/(ii)) and
`resolve_extensions` pins down the lower-filtration correction terms by
solving boundary equations in the ambient complex.
"""
from __future__ import annotations

import re
from collections import defaultdict
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .f2alg import Poly, Ring, RingMap, StructureError, TriDegree, _strip
from .groebner import (GbEngine, GroebnerBasis, basis_monomials, buchberger,
                       annihilator, commutator_tuples)
from .maycomplex import (DgaSpec, SeqPair, complex_Xnk, det_RST, differential,
                         enumerate_H, factor_into_H, name_of)
from . import slices

__all__ = [
    "NamedClass", "Presentation", "PresentationIncomplete", "seed_hx17",
    "adjoin_variable", "E0Presentation", "resolve_extensions",
    "verify_presentation", "eliminate_generators", "canonical_order_key",
]


class PresentationIncomplete(RuntimeError):
    pass


class NamedClass:
    """A named homology class with a fixed cycle representative."""

    __slots__ = ("name", "kind", "sp", "degree", "rep")

    def __init__(self, name: str, kind: str, sp, degree: TriDegree, rep: Poly):
        self.name = name
        self.kind = kind  # 'h', 'b', 'r' or 'x'
        self.sp = sp      # SeqPair for h/r, (i, j) for b, None otherwise
        self.degree = degree
        self.rep = rep

    def __repr__(self):
        return f"<{self.name} {tuple(self.degree)}>"


def canonical_order_key(cls: NamedClass):
    """Appendix ordering: h-classes by (|S'|, odd part of t, i); b_ij by (j-i, i)."""
    if cls.kind in ("h", "r"):
        i = cls.sp.S[0]
        base = cls.degree.t >> i if cls.kind == "h" else cls.degree.t
        return (0, cls.sp.n, base if cls.kind == "h" else cls.degree.t, i)
    if cls.kind == "b":
        i, j = cls.sp
        return (1, j - i, i, 0)
    return (2, cls.degree.t, 0, 0)


class Presentation:
    """Named classes + relations + cached reduced basis over an ambient DGA."""

    def __init__(self, ambient: DgaSpec, classes: List[NamedClass],
                 relations: List[Poly], ring: Optional[Ring] = None,
                 gb: Optional[GroebnerBasis] = None, tcap_valid: Optional[int] = None):
        self.ambient = ambient
        self.classes = classes
        if ring is None:
            ring = Ring([(c.name, c.degree) for c in classes])
        self.ring = ring
        attach_named_resolver(ring)
        self.relations = relations
        if gb is None:
            gb = buchberger(relations, ring) if relations else GroebnerBasis(ring, [], True)
        self.gb = gb
        self._nf_engine = gb.engine()
        self.tcap_valid = tcap_valid

    # -- basic algebra ---------------------------------------------------------

    def cls(self, name: str) -> NamedClass:
        return self.classes[self.ring.gen_index(name)]

    def normal_form(self, p: Poly) -> Poly:
        return self._nf_engine.normal_form(p)

    def rep_of(self, p: Poly) -> Poly:
        """Cycle representative of a named polynomial (multiplicative on reps)."""
        amb = self.ambient.ring
        out = amb.zero()
        for m in p.terms:
            term = amb.one()
            for i, e in enumerate(m):
                if e:
                    term = term * (self.classes[i].rep ** e)
            out = out + term
        return out

    def basis_at(self, degree: Sequence[int]) -> List[Tuple[int, ...]]:
        degree = tuple(degree)
        return basis_monomials(self.ring, self.gb.leading_monomials(),
                               tcap=degree[1], degree=degree)

    def dims(self, tcap: int) -> Dict[TriDegree, int]:
        out: Dict[TriDegree, int] = defaultdict(int)
        for m in basis_monomials(self.ring, self.gb.leading_monomials(), tcap=tcap):
            out[self.ring.mon_deg(m)] += 1
        return dict(out)

    def express_cycle(self, z: Poly, candidates: Optional[List[Tuple[int, ...]]] = None) -> Poly:
        """Write the class of the ambient cycle z in named-class monomials."""
        if not z:
            return self.ring.zero()
        deg = z.degree()
        if candidates is None:
            candidates = self.basis_at(deg)
        reps = [self.rep_of(Poly(self.ring, frozenset({m}))) for m in candidates]
        ok, _, combo = slices.is_boundary(self.ambient, z, extra=reps)
        if not ok:
            raise PresentationIncomplete(
                f"cycle at degree {tuple(deg)} is not expressible in named classes")
        terms = {candidates[i] for i in range(len(candidates)) if (combo >> i) & 1}
        return Poly(self.ring, frozenset(terms))

    def extend_poly(self, p: Poly, ring: Ring) -> Poly:
        """Reinterpret p in a ring whose generator list extends this one's."""
        return Poly(ring, p.terms)


def attach_named_resolver(ring: Ring):

    def expand_b(S: Tuple[int, ...], T: Tuple[int, ...]) -> Poly:
        if len(S) == 1:
            i, j = S[0], T[0]
            if j <= i:
                return ring.zero()
            if j == i + 1:
                return ring.gen(f"h_{i}") ** 2
            return ring.gen(f"b_{i}{j}")
        out = ring.zero()
        for jpos, t in enumerate(T):
            if S[0] >= t:
                continue
            out = out + expand_b((S[0],), (t,)) * expand_b(S[1:], T[:jpos] + T[jpos + 1:])
        return out

    def resolve(key: str) -> Optional[Poly]:
        m = re.fullmatch(r"([hbr])_(\d+),(\d+)", key)
        if m is None:
            m = re.fullmatch(r"([hbr])_(\d)(\d)", key)
        if not m:
            return None
        kind = m.group(1)
        S = tuple(int(c) for c in m.group(2))
        T = tuple(int(c) for c in m.group(3))
        sp = SeqPair(S, T)
        if kind == "b":
            return expand_b(sp.S, sp.T)
        if kind == "r":
            return ring.gen(name_of(sp, "r"))
        out = ring.one()
        for block in factor_into_H(sp):
            out = out * ring.gen(name_of(block))
        return out

    ring.token_resolver = resolve


def parse_relation(ring: Ring, line: str) -> Poly:
    """Parse 'lhs = rhs' (or a bare polynomial) into lhs + rhs."""
    if "=" in line:
        lhs, rhs = line.split("=", 1)
        return ring.parse(lhs) + ring.parse(rhs)
    return ring.parse(line)


# -- the seed presentation HX[1,7] ----------------------------------------------


def _det_class(amb: DgaSpec, sp: SeqPair, kind: str = "h") -> NamedClass:
    rep = det_RST(amb, sp)
    return NamedClass(name_of(sp, kind), kind, sp, sp.degree(), rep)


def _b_class(amb: DgaSpec, i: int, j: int) -> NamedClass:
    rep = amb.ring.gen(f"R_{i}{j}") ** 2
    deg = TriDegree(2, 2 * (2 ** j - 2 ** i), 2 * (j - i - 1))
    return NamedClass(f"b_{i}{j}", "b", (i, j), deg, rep)


def seed_hx17(relation_lines: Sequence[str]) -> Presentation:
    """The inductive seed: the homology presentation on indices [1,7]."""
    amb = complex_Xnk(7, 0)
    classes: List[NamedClass] = []
    for m in range(1, 7):
        for n in range(m + 1, 8):
            for sp in enumerate_H(m, n, "H"):
                classes.append(_det_class(amb, sp))
    for i in range(1, 7):
        for j in range(i + 2, 8):
            classes.append(_b_class(amb, i, j))
    classes.sort(key=canonical_order_key)
    ring = Ring([(c.name, c.degree) for c in classes])
    attach_named_resolver(ring)
    relations = [parse_relation(ring, line) for line in relation_lines]
    return Presentation(amb, classes, relations, ring=ring)


# -- adjoining a polynomial generator --------------------------------------------


class E0Presentation:
    """The associated-graded description of H(A[x]) before extensions."""

    def __init__(self, base: Presentation, ambient: DgaSpec, ring: Ring,
                 classes: List[NamedClass], x_name: str, c_named: Poly,
                 ys: List[Poly], new_names: List[str], b_name: Optional[str],
                 relations_e0: List[Poly], inherited: List[Poly],
                 filt: Dict[str, int], sections: Optional[List[str]] = None):
        self.base = base
        self.ambient = ambient
        self.ring = ring
        self.classes = classes
        self.x_name = x_name
        self.c_named = c_named
        self.ys = ys
        self.new_names = new_names
        self.b_name = b_name
        self.relations_e0 = relations_e0
        self.inherited = inherited
        self.filt = filt
        self.sections = sections or ["relations"] * len(relations_e0)
        self.gb_e0 = None

    def filt_of(self, mon: Tuple[int, ...]) -> int:
        level = 0
        for i, e in enumerate(mon):
            if e:
                level += e * self.filt.get(self.classes[i].name, 0)
        return level


def minimal_ideal_generators(pres: Presentation, gens: Sequence[Poly]) -> List[Poly]:
    """Canonical minimal generators of the ideal (gens) in the quotient algebra."""
    eng = pres.gb.engine()
    for g in gens:
        eng.push(g.terms)
    eng.run()
    eng.tail_reduce()
    full = GroebnerBasis(pres.ring, eng.elements(), reduced=True)
    cur = pres.gb.engine()
    chosen: List[Poly] = []
    by_deg: Dict[tuple, List[Poly]] = defaultdict(list)
    for p in full.elements:
        if pres.normal_form(p):
            d = p.degree()
            by_deg[(d.t, d.s, d.u)].append(p)
    for dkey in sorted(by_deg):
        d = (dkey[1], dkey[0], dkey[2])
        coords = basis_monomials(pres.ring, list(cur.rels), tcap=dkey[0], degree=d)
        index = {m: i for i, m in enumerate(coords)}
        rows = []
        for p in by_deg[dkey]:
            nf = cur.normal_form_terms(p.terms)
            if nf:
                vec = 0
                for m in nf:
                    vec ^= 1 << index[m]
                rows.append(vec)
        if not rows:
            continue
        # reduced echelon, pivots on the ordering-largest coordinates first
        pivots: Dict[int, int] = {}
        ordered = sorted(range(len(coords)),
                         key=lambda i: pres.ring.mon_key(coords[i]), reverse=True)
        rank_rows: List[int] = []
        for vec in rows:
            for pb, pv in pivots.items():
                if (vec >> pb) & 1:
                    vec ^= pv
            if not vec:
                continue
            pb = next(i for i in ordered if (vec >> i) & 1)
            for b2, v2 in list(pivots.items()):
                if (v2 >> pb) & 1:
                    pivots[b2] = v2 ^ vec
            pivots[pb] = vec
        for pb, vec in sorted(pivots.items()):
            poly = Poly(pres.ring, frozenset(coords[i] for i in range(len(coords))
                                             if (vec >> i) & 1))
            chosen.append(poly)
            cur.push(poly.terms)
            cur.run()
    chosen.sort(key=lambda p: p.sort_key())
    return chosen


def _r_cycle(amb: DgaSpec, sp: SeqPair) -> Poly:
    """sum_j R_0j R_{S - min + j, T}, the determinant-style r-class cycle."""
    i0 = sp.S[0]
    out = amb.ring.zero()
    for j in range(1, i0 + 1):
        rest = (j,) + sp.S[1:]
        if len(set(rest)) != len(rest):
            continue
        out = out + amb.ring.gen(f"R_0{j}") * det_RST(amb, SeqPair(rest, sp.T))
    return out


def _name_new_class(amb: DgaSpec, stage: int, y: Poly, base: Presentation,
                    baseA: Presentation, reembed: RingMap,
                    fallback_idx: int) -> NamedClass:
    """Name and represent the class [x*y + a]; determinant shapes when possible."""
    x = amb.ring.gen(f"R_0{stage}")
    if len(y.terms) == 1:
        mon = next(iter(y.terms))
        factors: List[SeqPair] = []
        ok = True
        for i, e in enumerate(mon):
            if not e:
                continue
            c = base.classes[i]
            if c.kind != "h" or e != 1:
                ok = False
                break
            factors.append(c.sp)
        if ok:
            S = tuple(sorted([0] + [s for f in factors for s in f.S]))
            T = tuple(sorted([s for f in factors for s in f.T] + [stage]))
            merged = set(S) | set(T)
            if (len(merged) == 2 * len(S) == 2 * len(T)
                    and merged == set(range(0, stage + 1))):
                sp = SeqPair(S, T)
                if sp.in_H():
                    cls = _det_class(amb, sp, "h")
                    if not differential(amb, cls.rep):
                        return cls
            if len(factors) == 1 and factors[0].S[0] == stage:
                sp = factors[0]
                rep = _r_cycle(amb, sp)
                if rep and not differential(amb, rep):
                    return NamedClass(name_of(sp, "r"), "r", sp, rep.degree(), rep)
    # generic fallback: x*rep(y) + a with d(a) = c*rep(y), a solved in the
    # smaller complex where the product is a boundary
    cA = baseA.ambient.ring.zero()
    for k in range(1, stage):
        cA = cA + baseA.ambient.ring.gen(f"R_0{k}") * baseA.ambient.ring.gen(f"R_{k}{stage}")
    repyA = baseA.rep_of(Poly(baseA.ring, y.terms))
    ok, a, _ = slices.is_boundary(baseA.ambient, cA * repyA)
    if not ok:
        raise PresentationIncomplete("no chain with d(a) = c*rep(y)")
    rep = x * reembed(repyA) + reembed(a)
    return NamedClass(f"g{stage}_{fallback_idx}", "x", None, rep.degree(), rep)


def adjoin_variable(base: Presentation, stage: int, n: int = 7) -> E0Presentation:
    """One pipeline step: H(A[R_{0,stage}]) on the E0 level, from H(A)."""
    amb = complex_Xnk(n, stage)
    x = amb.ring.gen(f"R_0{stage}")
    # d(x) = sum_k R_0k R_k,stage lies in the smaller complex; express its class there
    c_base = base.ambient.ring.zero()
    for k in range(1, stage):
        c_base = c_base + (base.ambient.ring.gen(f"R_0{k}")
                           * base.ambient.ring.gen(f"R_{k}{stage}"))
    c_named = base.express_cycle(c_base) if c_base else base.ring.zero()
    reembed = RingMap(base.ambient.ring, amb.ring,
                      {g.name: amb.ring.gen(g.name) for g in base.ambient.ring.gens},
                      degree_map=lambda d: d)
    classes = [NamedClass(c.name, c.kind, c.sp, c.degree, reembed(c.rep))
               for c in base.classes]
    base2 = Presentation(amb, classes, base.relations,
                         ring=base.ring, gb=base.gb, tcap_valid=base.tcap_valid)
    filt: Dict[str, int] = {}
    if not c_named:
        # polynomial extension by a fresh degree-(1, 2^stage - 1, stage - 1) class
        xcls = NamedClass(f"h_{stage - 1}" if stage == 1 else f"x_{stage}", "h" if stage == 1 else "x",
                          SeqPair([stage - 1], [stage]) if stage == 1 else None,
                          TriDegree(1, 2 ** stage - 1, stage - 1), x)
        new_classes = classes + [xcls]
        ring2 = Ring([(cl.name, cl.degree) for cl in new_classes])
        inherited = [Poly(ring2, p.terms) for p in base.relations]
        return E0Presentation(base2, amb, ring2, new_classes, f"R_0{stage}",
                               Poly(ring2, frozenset()), [], [xcls.name], None,
                               [], inherited, filt, [])
    ann = annihilator(base2.gb.elements, [c_named], ring=base2.ring, ideal_gb=base2.gb)
    ys = minimal_ideal_generators(base2, [t[0] for t in ann.generators])
    new_classes = list(classes)
    new_names: List[str] = []
    for k, y in enumerate(ys):
        cls = _name_new_class(amb, stage, y, base2, base, reembed, k)
        new_classes.append(cls)
        new_names.append(cls.name)
        filt[cls.name] = 1
    bcls = NamedClass(f"b_0{stage}", "b", (0, stage),
                      TriDegree(2, 2 * (2 ** stage - 1), 2 * (stage - 1)), x * x)
    new_classes.append(bcls)
    filt[bcls.name] = 2
    ring2 = Ring([(cl.name, cl.degree) for cl in new_classes])
    inherited = [Poly(ring2, p.terms) for p in base.relations]
    gnew = [ring2.gen(nm) for nm in new_names]
    bnew = ring2.gen(bcls.name)
    ys2 = [Poly(ring2, y.terms) for y in ys]
    rels_e0: List[Poly] = [Poly(ring2, c_named.terms)]
    sections = ["vanishing-class"]
    syz = annihilator(base2.gb.elements, ys, ring=base2.ring, ideal_gb=base2.gb)
    for tup in syz.generators:
        rel = ring2.zero()
        for a, g in zip(tup, gnew):
            rel = rel + Poly(ring2, a.terms) * g
        if rel:
            rels_e0.append(rel)
            sections.append("part-i")
    for i in range(len(ys2)):
        for j in range(i, len(ys2)):
            rels_e0.append(gnew[i] * gnew[j] + bnew * ys2[i] * ys2[j])
            sections.append("part-ii")
    return E0Presentation(base2, amb, ring2, new_classes, f"R_0{stage}",
                          Poly(ring2, c_named.terms), ys2, new_names, bcls.name,
                          rels_e0, inherited, filt, sections)


def resolve_extensions(e0: E0Presentation, progress=None) -> Presentation:
    """Lift each E0 relation to the ambient DGA and solve for extension terms."""
    ring = e0.ring
    eng = e0.base.gb.engine()  # generator tuples extend verbatim
    eng.ring = ring
    for p in e0.relations_e0 + e0.inherited:
        eng.push(p.terms)
    eng.run()
    eng.tail_reduce()
    e0.gb_e0 = GroebnerBasis(ring, eng.elements(), reduced=True)
    lms = e0.gb_e0.leading_monomials()
    pres_tmp = Presentation(e0.ambient, e0.classes, [], ring=ring,
                            gb=GroebnerBasis(ring, [], True))
    resolved: List[Poly] = []
    witnesses: List[Poly] = []
    stage_sections: List[tuple] = []
    for idx, rel in enumerate(e0.relations_e0):
        level = max(e0.filt_of(m) for m in rel.terms)
        deg = rel.degree()
        cands = [m for m in basis_monomials(ring, lms, tcap=deg.t, degree=tuple(deg))
                 if e0.filt_of(m) < level]
        lift = pres_tmp.rep_of(rel)
        reps = [pres_tmp.rep_of(Poly(ring, frozenset({m}))) for m in cands]
        ok, wit, combo = slices.is_boundary(e0.ambient, lift, extra=reps)
        if not ok:
            raise PresentationIncomplete(
                f"relation {rel} at degree {tuple(deg)}: residual class is not "
                f"expressible in lower filtration (new generator needed)")
        ext = frozenset(cands[i] for i in range(len(cands)) if (combo >> i) & 1)
        resolved.append(rel + Poly(ring, ext))
        witnesses.append(wit)
        stage_sections.append((e0.sections[idx], rel, Poly(ring, ext)))
        if progress:
            progress(idx, len(e0.relations_e0))
    relations = e0.inherited + resolved
    eng2 = e0.base.gb.engine()
    eng2.ring = ring
    for p in resolved:
        eng2.push(p.terms)
    eng2.run()
    eng2.tail_reduce()
    gb = GroebnerBasis(ring, eng2.elements(), reduced=True)
    pres = Presentation(e0.ambient, e0.classes, relations, ring=ring, gb=gb)
    pres.extension_witnesses = witnesses
    pres.stage_sections = stage_sections
    return pres


def e0_dims(e0: E0Presentation, tcap: int) -> Dict[TriDegree, int]:
    """Graded dimensions predicted by the associated-graded description."""
    base = e0.base
    dimsA = base.dims(tcap)
    if not e0.c_named:
        dx = e0.classes[-1].degree
        out: Dict[TriDegree, int] = defaultdict(int)
        for d, v in dimsA.items():
            i = 0
            while d.t + i * dx.t <= tcap:
                out[TriDegree(d.s + i * dx.s, d.t + i * dx.t, d.u + i * dx.u)] += v
                i += 1
        return dict(out)
    c = e0.c_named
    dc = c.degree()
    # per-degree rank of multiplication by c on the presented basis of HA
    basisA: Dict[TriDegree, List[tuple]] = defaultdict(list)
    for m in basis_monomials(base.ring, base.gb.leading_monomials(), tcap=tcap + dc.t):
        basisA[base.ring.mon_deg(m)].append(m)
    rank_c: Dict[TriDegree, int] = {}
    from ._gf2 import Echelon
    for d, mons in basisA.items():
        tgt = TriDegree(d.s + dc.s, d.t + dc.t, d.u + dc.u)
        tgt_mons = basisA.get(tgt, [])
        index = {m: i for i, m in enumerate(tgt_mons)}
        ech = Echelon()
        for m in mons:
            prod = base.normal_form(Poly(base.ring, frozenset({m})) * c)
            vec = 0
            for mm in prod.terms:
                vec ^= 1 << index[mm]
            ech.insert(vec)
        rank_c[d] = ech.rank
    dim_quot: Dict[TriDegree, int] = {}
    dim_ann: Dict[TriDegree, int] = {}
    for d, mons in basisA.items():
        src = TriDegree(d.s - dc.s, d.t - dc.t, d.u - dc.u)
        dim_quot[d] = len(mons) - rank_c.get(src, 0)
        dim_ann[d] = len(mons) - rank_c.get(d, 0)
    dx = TriDegree(1, 2 ** int(e0.x_name[3:]) - 1, int(e0.x_name[3:]) - 1)
    out = defaultdict(int)
    for d, v in dim_quot.items():
        if d.t > tcap:
            continue
        i = 0
        while d.t + i * dx.t <= tcap:
            out[TriDegree(d.s + i * dx.s, d.t + i * dx.t, d.u + i * dx.u)] += v
            i += 2
    for d, v in dim_ann.items():
        i = 1
        while d.t + i * dx.t <= tcap:
            out[TriDegree(d.s + i * dx.s, d.t + i * dx.t, d.u + i * dx.u)] += v
            i += 2
    return {d: v for d, v in out.items() if v}


class VerifyReport:
    def __init__(self):
        self.cycle_failures: List[str] = []
        self.relation_failures: List[str] = []
        self.dim_mismatches: List[tuple] = []
        self.checked_relations = 0

    @property
    def ok(self) -> bool:
        return not (self.cycle_failures or self.relation_failures or self.dim_mismatches)

    def summary(self) -> str:
        if self.ok:
            return (f"presentation verified: {self.checked_relations} relations "
                    f"are boundaries, graded dimensions match")
        lines = []
        for c in self.cycle_failures:
            lines.append(f"representative of {c} is not a cycle")
        for r in self.relation_failures:
            lines.append(f"relation {r} does not lift to a boundary")
        for d, a, b in self.dim_mismatches:
            lines.append(f"dimension mismatch at {d}: presented {a}, homology {b}")
        return "\n".join(lines)


def verify_presentation(pres: Presentation, tcap: Optional[int] = None,
                        relations: Optional[Sequence[Poly]] = None,
                        oracle_dims: Optional[Dict[TriDegree, int]] = None,
                        check_dims: bool = True, progress=None) -> VerifyReport:
    """Check cycles, relation boundaries, and graded dimensions vs. the oracle."""
    report = VerifyReport()
    for c in pres.classes:
        if differential(pres.ambient, c.rep):
            report.cycle_failures.append(c.name)
    rels = pres.relations if relations is None else list(relations)
    for rel in rels:
        if not rel:
            continue
        lift = pres.rep_of(rel)
        ok, _, _ = slices.is_boundary(pres.ambient, lift)
        if not ok:
            report.relation_failures.append(str(rel))
        report.checked_relations += 1
        if progress:
            progress(report.checked_relations, len(rels))
    if check_dims and tcap is not None:
        presented = pres.dims(tcap)
        if oracle_dims is None:
            oracle_dims = slices.homology_dims(pres.ambient, tcap)
        keys = set(presented) | set(oracle_dims)
        for d in sorted(keys):
            a, b = presented.get(d, 0), oracle_dims.get(d, 0)
            if a != b:
                report.dim_mismatches.append((tuple(d), a, b))
    return report


def eliminate_generators(pres: Presentation, drop: Sequence[str],
                         order_key=canonical_order_key) -> Presentation:
    """Substitute away generators that the relations express in the others."""
    ring = pres.ring
    drop = list(drop)
    images: Dict[str, Poly] = {}
    for name in drop:
        gi = ring.gen_index(name)
        bare = ring.mon_gen(gi)
        found = None
        for p in pres.gb.elements:
            if bare in p.terms:
                rest = p.terms - {bare}
                if all(len(m) <= gi or m[gi] == 0 for m in rest):
                    found = Poly(ring, rest)
                    break
        if found is None:
            raise PresentationIncomplete(f"no eliminating relation for {name}")
        images[name] = found
    kept = [c for c in pres.classes if c.name not in images]
    kept.sort(key=order_key)
    ring2 = Ring([(c.name, c.degree) for c in kept])
    # dropped generators may reference other dropped ones; iterate to a fixpoint
    stable = False
    while not stable:
        stable = True
        f = RingMap(ring, ring, {
            g.name: (images[g.name] if g.name in images else ring.gen(g.name))
            for g in ring.gens}, check_degrees=False)
        for name, img in images.items():
            if any(e and ring.gens[i].name in images
                   for m in img.terms for i, e in enumerate(m)):
                images[name] = f(img)
                stable = False
    img2: Dict[str, Poly] = {}
    for g in ring.gens:
        if g.name in images:
            q = images[g.name]
            out = ring2.zero()
            for m in q.terms:
                term = ring2.one()
                for i, e in enumerate(m):
                    if e:
                        term = term * (ring2.gen(ring.gens[i].name) ** e)
                out = out + term
            img2[g.name] = out
        else:
            img2[g.name] = ring2.gen(g.name)
    fmap = RingMap(ring, ring2, img2, check_degrees=False)
    rels2 = [p2 for p in pres.gb.elements if (p2 := fmap(p))]
    return Presentation(pres.ambient, kept, rels2, ring=ring2)
