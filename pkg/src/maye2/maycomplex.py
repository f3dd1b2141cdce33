"""The May complexes X_n, X[m,n], X_{n,k}, their quotients and symmetries.

Generators R_ij (0 <= i < j) have tri-degree (1, 2^j - 2^i, j-i-1) and
differential d R_ij = sum_{i<k<j} R_ik R_kj.  Determinant classes R_{S,T}
and the families H, H' of their homology classes live here as well.
"""
from __future__ import annotations

import itertools
import re
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .f2alg import Poly, Ring, RingMap, StructureError, TriDegree

__all__ = [
    "SeqPair", "DgaSpec", "rgen_degree", "complex_X", "complex_Xmn",
    "complex_Xnk", "complex_Xloc", "from_descriptor", "differential",
    "det_RST", "d_RST", "laplace_expand", "block_factor", "enumerate_H",
    "name_of", "parse_name", "factor_into_H", "symmetry_map", "weight_split",
]


def rgen_degree(i: int, j: int) -> TriDegree:
    if not 0 <= i < j:
        raise ValueError(f"R_{{{i}{j}}} needs 0 <= i < j")
    return TriDegree(1, 2 ** j - 2 ** i, j - i - 1)


def _rname(i: int, j: int) -> str:
    return f"R_{i}{j}" if max(i, j) <= 9 else f"R_{i},{j}"


class DgaSpec:
    """A polynomial DGA: a ring plus a differential assignment per generator."""

    def __init__(self, variant: str, ring: Ring, diff: Dict[str, Poly],
                 d_shift: Tuple[int, ...], charges: Optional[List[Tuple[int, ...]]] = None,
                 edges: Optional[Dict[str, Tuple[int, int]]] = None,
                 check_degrees: bool = True, graded_slots: Tuple[int, ...] = (0, 1, 2)):
        self.variant = variant
        self.ring = ring
        self.diff: List[Poly] = [diff[g.name] for g in ring.gens]
        self.d_shift = d_shift
        self.charges = charges
        self.edges = edges or {}
        self.graded_slots = graded_slots
        self._validate(check_degrees)

    def _validate(self, check_degrees: bool):
        for g in self.ring.gens:
            dg = self.diff[g.index]
            if differential(self, dg):
                raise StructureError(f"d^2 != 0 on generator {g.name}")
            if check_degrees and dg:
                want = g.degree + self.d_shift
                for m in dg.terms:
                    got = self.ring.mon_deg(m)
                    if any(got[k] != want[k] for k in self.graded_slots):
                        raise StructureError(f"d is not homogeneous on {g.name}")
            if self.charges is not None and dg:
                gc = self.charges[g.index]
                for m in dg.terms:
                    mc = _mon_charge(self, m)
                    if mc != gc:
                        raise StructureError(f"charge not conserved by d on {g.name}")

    def gen_names(self) -> List[str]:
        return [g.name for g in self.ring.gens]

    def __repr__(self):
        return f"<DgaSpec {self.variant}: {self.ring.ngens} generators>"


def _mon_charge(spec: DgaSpec, m: Tuple[int, ...]) -> Tuple[int, ...]:
    n = len(spec.charges[0])
    out = [0] * n
    for i, e in enumerate(m):
        if e:
            c = spec.charges[i]
            for k in range(n):
                out[k] += e * c[k]
    return tuple(out)


def differential(spec: DgaSpec, p: Poly) -> Poly:
    """Derivation extension of the generator assignments (char 2 Leibniz)."""
    if p.ring is not spec.ring:
        raise StructureError("polynomial not in the DGA's ring")
    ring = spec.ring
    acc: set = set()
    for m in p.terms:
        for i, e in enumerate(m):
            if e & 1:
                rest = list(m)
                rest[i] -= 1
                base = tuple(rest)
                for dm in spec.diff[i].terms:
                    acc.symmetric_difference_update({ring.mon_mul(base, dm)})
    return Poly(ring, frozenset(acc))


def _edge_charge(i: int, j: int, nverts: int) -> Tuple[int, ...]:
    c = [0] * nverts
    c[i] -= 1
    c[j] += 1
    return tuple(c)


def _build_dga(variant: str, edges: List[Tuple[int, int]], nverts: int) -> DgaSpec:
    """Standard tri-graded May complex on the given edge set."""
    eset = set(edges)
    ring = Ring([(_rname(i, j), rgen_degree(i, j)) for (i, j) in edges])
    diff: Dict[str, Poly] = {}
    for (i, j) in edges:
        terms = []
        for k in range(i + 1, j):
            if (i, k) in eset and (k, j) in eset:
                m = [0] * ring.ngens
                m[ring.gen_index(_rname(i, k))] += 1
                m[ring.gen_index(_rname(k, j))] += 1
                terms.append(tuple(m))
        diff[_rname(i, j)] = ring.poly(terms)
    charges = [_edge_charge(i, j, nverts) for (i, j) in edges]
    emap = {_rname(i, j): (i, j) for (i, j) in edges}
    spec = DgaSpec(variant, ring, diff, d_shift=(1, 0, -1), charges=charges, edges=emap)
    _attach_token_resolver(spec)
    return spec


def complex_X(n: int) -> DgaSpec:
    """X_n = F2[R_ij : 0 <= i < j <= n]."""
    return complex_Xmn(0, n)


def complex_Xmn(m: int, n: int) -> DgaSpec:
    if not 0 <= m < n:
        raise ValueError("need 0 <= m < n")
    if n > 16:
        raise ValueError("index bound capped at 16")
    edges = [(i, j) for i in range(m, n) for j in range(i + 1, n + 1)]
    return _build_dga(f"X[{m},{n}]", edges, n + 1)


def complex_Xnk(n: int, k: int) -> DgaSpec:
    """X_{n,k} = F2[R_0i : i <= k] tensor X[1,n]."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    edges = [(0, i) for i in range(1, k + 1)]
    edges += [(i, j) for i in range(1, n) for j in range(i + 1, n + 1)]
    edges.sort()
    return _build_dga(f"X_{{{n},{k}}}", edges, n + 1)


def complex_Xloc(n: int) -> DgaSpec:
    """X_n/(R_01 - 1), bigraded by (t-s, u); d has bidegree (-1, -1)."""
    edges = [(i, j) for i in range(n) for j in range(i + 1, n + 1) if (i, j) != (0, 1)]
    ring = Ring([(_rname(i, j), TriDegree(1, 2 ** j - 2 ** i - 1, j - i - 1))
                 for (i, j) in edges])
    eset = set(edges)
    diff: Dict[str, Poly] = {}
    for (i, j) in edges:
        terms = []
        for k in range(i + 1, j):
            m = [0] * ring.ngens
            if (i, k) == (0, 1):
                if (k, j) in eset:
                    m[ring.gen_index(_rname(k, j))] += 1
                    terms.append(tuple(m))
                continue
            if (i, k) in eset and (k, j) in eset:
                m[ring.gen_index(_rname(i, k))] += 1
                m[ring.gen_index(_rname(k, j))] += 1
                terms.append(tuple(m))
        diff[_rname(i, j)] = ring.poly(terms)
    # charge: vertex weights modulo Z*(e_1 - e_0), i.e. merge vertices 0 and 1
    charges = []
    for (i, j) in edges:
        c = [0] * n  # coordinates (w_0 + w_1, w_2, ..., w_n)
        c[max(i - 1, 0)] -= 1
        c[max(j - 1, 0)] += 1
        charges.append(tuple(c))
    emap = {_rname(i, j): (i, j) for (i, j) in edges}
    # the ring's t-slot stores t-s; s is not a grading of the quotient complex
    spec = DgaSpec(f"X_{n}/(R_01-1)", ring, diff, d_shift=(1, -1, -1),
                   charges=charges, edges=emap, graded_slots=(1, 2))
    _attach_token_resolver(spec)
    return spec


def from_descriptor(line: str) -> DgaSpec:
    """Parse a complex descriptor such as 'complex X 7' or 'complex Xnk 7 3'."""
    parts = line.split()
    if not parts or parts[0] != "complex":
        raise ValueError(f"bad complex descriptor {line!r}")
    kind, args = parts[1], [int(x) for x in parts[2:]]
    if kind == "X" and len(args) == 1:
        return complex_X(args[0])
    if kind == "Xmn" and len(args) == 2:
        return complex_Xmn(*args)
    if kind == "Xnk" and len(args) == 2:
        return complex_Xnk(*args)
    if kind == "Xloc" and len(args) == 1:
        return complex_Xloc(args[0])
    raise ValueError(f"bad complex descriptor {line!r}")


# -- determinant classes -------------------------------------------------------


class SeqPair:
    """An ordered pair of strictly increasing integer sequences of equal length."""

    __slots__ = ("S", "T")

    def __init__(self, S: Iterable[int], T: Iterable[int]):
        S, T = sorted(S), sorted(T)
        if len(set(S)) != len(S) or len(set(T)) != len(T):
            # repeats inside one sequence: determinant has a repeated row
            pass
        if len(S) != len(T):
            raise StructureError("S and T must have equal length")
        if not S:
            raise StructureError("sequences must be nonempty")
        self.S = tuple(S)
        self.T = tuple(T)

    def __eq__(self, other):
        return isinstance(other, SeqPair) and self.S == other.S and self.T == other.T

    def __hash__(self):
        return hash((self.S, self.T))

    def __repr__(self):
        return f"SeqPair({list(self.S)}, {list(self.T)})"

    @property
    def n(self) -> int:
        return len(self.S)

    def degree(self) -> TriDegree:
        n = len(self.S)
        t = sum(2 ** x for x in self.T) - sum(2 ** x for x in self.S)
        u = sum(self.T) - sum(self.S) - n
        return TriDegree(n, t, u)

    def union_block(self) -> Optional[int]:
        """Start index when S and T are disjoint and S u T is a consecutive block."""
        u = sorted(self.S + self.T)
        if len(set(u)) != len(u):
            return None
        if u[-1] - u[0] + 1 != len(u):
            return None
        return u[0]

    def in_Hprime(self) -> bool:
        if self.union_block() is None:
            return False
        return all(s < t for s, t in zip(self.S, self.T))

    def in_H(self) -> bool:
        if not self.in_Hprime():
            return False
        return all(self.S[k] < self.T[k - 1] for k in range(1, len(self.S)))


def _det(ring: Ring, S: Tuple[int, ...], T: Tuple[int, ...], cache: dict) -> frozenset:
    """Expansion of det(R_{s_i t_j}) along the first row, with R_ij = 0 for j <= i."""
    if not S:
        return frozenset({()})
    key = (S, T)
    if key in cache:
        return cache[key]
    acc: set = set()
    s0 = S[0]
    for jpos, t in enumerate(T):
        if s0 >= t:
            continue
        name = _rname(s0, t)
        try:
            gi = ring.gen_index(name)
        except StructureError:
            raise StructureError(f"ring has no generator {name}; determinant out of range")
        sub = _det(ring, S[1:], T[:jpos] + T[jpos + 1:], cache)
        g = ring.mon_gen(gi)
        for m in sub:
            acc.symmetric_difference_update({ring.mon_mul(g, m)})
    result = frozenset(acc)
    cache[key] = result
    return result


def det_RST(spec: DgaSpec, sp: SeqPair) -> Poly:
    """The determinant class representative R_{S,T} as a polynomial."""
    if len(set(sp.S)) != len(sp.S) or len(set(sp.T)) != len(sp.T):
        return spec.ring.zero()
    if not hasattr(spec, "_det_cache"):
        spec._det_cache = {}
    return Poly(spec.ring, _det(spec.ring, sp.S, sp.T, spec._det_cache))


def d_RST(spec: DgaSpec, sp: SeqPair) -> Poly:
    """d R_{S,T} = sum over k outside S u T of R_{S+{k}, T+{k}}."""
    used = set(sp.S) | set(sp.T)
    lo, hi = min(used), max(used)
    out = spec.ring.zero()
    for k in range(lo, hi + 1):
        if k in used:
            continue
        out = out + det_RST(spec, SeqPair(sp.S + (k,), sp.T + (k,)))
    return out


def laplace_expand(spec: DgaSpec, sp: SeqPair, I: Iterable[int]) -> Poly:
    """R_{S,T} = sum_{|J|=|I|} R_{I,J} R_{S-I,T-J} for a fixed subset I of S."""
    I = tuple(sorted(I))
    if not set(I) <= set(sp.S):
        raise StructureError("I must be a subset of S")
    if not I:
        return det_RST(spec, sp)
    Srest = tuple(x for x in sp.S if x not in I)
    out = spec.ring.zero()
    for J in itertools.combinations(sp.T, len(I)):
        Trest = tuple(x for x in sp.T if x not in J)
        if Srest:
            out = out + det_RST(spec, SeqPair(I, J)) * det_RST(spec, SeqPair(Srest, Trest))
        else:
            out = out + det_RST(spec, SeqPair(I, J))
    return out


def block_factor(spec: DgaSpec, sp1: SeqPair, sp2: SeqPair) -> bool:
    """Check R_{S1+S2,T1+T2} = R_{S1,T1} R_{S2,T2} when T1 <= S2 or T2 <= S1."""
    le = lambda A, B: max(A) <= min(B)
    if not (le(sp1.T, sp2.S) or le(sp2.T, sp1.S)):
        raise StructureError("block precondition fails: need T1 <= S2 or T2 <= S1")
    merged = SeqPair(sp1.S + sp2.S, sp1.T + sp2.T)
    return det_RST(spec, merged) == det_RST(spec, sp1) * det_RST(spec, sp2)


def enumerate_H(m: int, n: int, family: str = "H") -> List[SeqPair]:
    """All members of H_{mn} (or H'_{mn}): min(S)=m, max(T)=n, lex order on S."""
    if family not in ("H", "Hprime"):
        raise ValueError("family must be 'H' or 'Hprime'")
    if m >= n:
        raise ValueError("need m < n")
    if (n - m) % 2 == 0:
        return []
    block = list(range(m, n + 1))
    half = len(block) // 2
    out = []
    for S in itertools.combinations(block[1:-1], half - 1):
        S = (m,) + S
        T = tuple(x for x in block if x not in S)
        sp = SeqPair(S, T)
        ok = sp.in_H() if family == "H" else sp.in_Hprime()
        if ok and max(T) == n:
            out.append(sp)
    out.sort(key=lambda sp: sp.S)
    return out


def factor_into_H(sp: SeqPair) -> List[SeqPair]:
    """Split an H' member into its minimal consecutive blocks, each in H."""
    if not sp.in_Hprime():
        raise StructureError("not an H' member")
    sset = set(sp.S)
    lo, hi = min(sp.S), max(sp.T)
    blocks: List[SeqPair] = []
    bal = 0
    start = lo
    for x in range(lo, hi + 1):
        bal += 1 if x in sset else -1
        if bal == 0:
            S = tuple(y for y in sp.S if start <= y <= x)
            T = tuple(y for y in sp.T if start <= y <= x)
            blocks.append(SeqPair(S, T))
            start = x + 1
    return blocks


def name_of(sp: SeqPair, kind: str = "h") -> str:
    """Canonical name: h_i(S') with i = s_1 and S' the offsets of S beyond s_1."""
    if kind == "h" and not sp.in_Hprime():
        raise StructureError("h-names require an H' member")
    i = sp.S[0]
    offsets = [s - i for s in sp.S[1:]]
    if kind == "b" and len(sp.S) == 1:
        return f"b_{sp.S[0]}{sp.T[0]}"
    if offsets:
        return f"{kind}_{i}({','.join(str(x) for x in offsets)})"
    return f"{kind}_{i}"


def parse_name(name: str) -> SeqPair:
    """Inverse of name_of for h/r-style names: h_2(1,3) -> S={2,3,5}, T={4,6,7}."""
    m = re.fullmatch(r"([hr])_?(\d+)(?:\(([\d,\s]+)\))?", name.replace(" ", ""))
    if not m:
        raise ValueError(f"cannot parse class name {name!r}")
    i = int(m.group(2))
    offsets = [int(x) for x in m.group(3).split(",")] if m.group(3) else []
    S = tuple([i] + [i + o for o in offsets])
    block = range(i, i + 2 * len(S))
    T = tuple(x for x in block if x not in S)
    return SeqPair(S, T)


def _attach_token_resolver(spec: DgaSpec):
    """Let the ring parse R_{S,T}-style tokens like R_023 or R_{02,13}."""
    ring = spec.ring

    def resolve(key: str) -> Optional[Poly]:
        m = re.fullmatch(r"R_(\d+),(\d+)", key)
        if m:
            S = tuple(int(c) for c in m.group(1))
            T = tuple(int(c) for c in m.group(2))
            return det_RST(spec, SeqPair(S, T))
        return None

    ring.token_resolver = resolve


# -- symmetries ----------------------------------------------------------------


def symmetry_map(kind: str, source: DgaSpec, target: DgaSpec, **kw) -> RingMap:
    """reflection(n), translation(k) or retraction(m,n); commutes with d."""
    images: Dict[str, Poly] = {}
    if kind == "reflection":
        n = kw["n"]
        for name, (i, j) in source.edges.items():
            images[name] = target.ring.gen(_rname(n - j, n - i))
        fmap = RingMap(source.ring, target.ring, images, check_degrees=False)
    elif kind == "translation":
        k = kw["k"]
        for name, (i, j) in source.edges.items():
            images[name] = target.ring.gen(_rname(i + k, j + k))
        fmap = RingMap(source.ring, target.ring, images,
                       degree_map=lambda d: TriDegree(d.s, d.t * 2 ** k, d.u))
    elif kind == "retraction":
        m, n = kw["m"], kw["n"]
        for name, (i, j) in source.edges.items():
            if m <= i < j <= n:
                images[name] = target.ring.gen(name)
            else:
                images[name] = target.ring.zero()
        fmap = RingMap(source.ring, target.ring, images,
                       degree_map=lambda d: d)
    else:
        raise ValueError(f"unknown symmetry kind {kind!r}")
    for g in source.ring.gens:
        lhs = fmap(differential(source, source.ring.gen(g.name)))
        rhs = differential(target, fmap(source.ring.gen(g.name)))
        if lhs != rhs:
            raise StructureError(f"map does not commute with d on {g.name}")
    return fmap


# -- the weight splitting behind the h_n tower theorem --------------------------


class WeightSplit:
    """Y = F2[R_ij : (i,j) != (n,n+1)] with d_Y, and the operators delta_1, delta_2."""

    def __init__(self, n: int, m: int):
        if m <= n + 1:
            raise ValueError("need truncation bound m > n+1")
        self.n, self.m = n, m
        edges = [(i, j) for i in range(m) for j in range(i + 1, m + 1) if (i, j) != (n, n + 1)]
        ring = Ring([(_rname(i, j), rgen_degree(i, j)) for (i, j) in edges])
        self.ring = ring
        self.edges = edges
        self.weight = {}
        for (i, j) in edges + [(n, n + 1)]:
            if i == n or j == n + 1:
                w = 0
            elif i == n + 1 or j == n:
                w = 2
            else:
                w = 1
            self.weight[(i, j)] = w
        eset = set(edges)

        def quad(i, j, krange):
            terms = []
            for k in krange:
                if (i, k) in eset and (k, j) in eset:
                    mm = [0] * ring.ngens
                    mm[ring.gen_index(_rname(i, k))] += 1
                    mm[ring.gen_index(_rname(k, j))] += 1
                    terms.append(tuple(mm))
            return terms

        d1: Dict[str, Poly] = {}
        d2: Dict[str, Poly] = {}
        for (i, j) in edges:
            name = _rname(i, j)
            if j == n + 1:
                d1[name] = ring.poly(quad(i, j, range(i + 1, n)))
                d2[name] = ring.gen(_rname(i, n))
            elif i == n:
                d1[name] = ring.poly(quad(i, j, range(n + 2, j)))
                d2[name] = ring.gen(_rname(n + 1, j))
            else:
                d1[name] = ring.poly(quad(i, j, range(i + 1, j)))
                d2[name] = ring.zero()
        self.delta1 = d1
        self.delta2 = d2
        dY = {name: d1[name] + d2[name] for name in d1}
        self.Y = DgaSpec(f"Y_{n}[m={m}]", ring, dY, d_shift=(1, 0, -1),
                         check_degrees=False)

    def mon_weight(self, mon: Tuple[int, ...]) -> int:
        w = 0
        for idx, e in enumerate(mon):
            if e:
                w += e * self.weight[self.edges[idx]]
        return w

    def poly_weights(self, p: Poly) -> set:
        return {self.mon_weight(m) for m in p.terms}

    def _derivation(self, table: Dict[str, Poly], p: Poly) -> Poly:
        ring = self.ring
        acc: set = set()
        for mon in p.terms:
            for idx, e in enumerate(mon):
                if e & 1:
                    rest = list(mon)
                    rest[idx] -= 1
                    base = tuple(rest)
                    for dm in table[ring.gens[idx].name].terms:
                        acc.symmetric_difference_update({ring.mon_mul(base, dm)})
        return Poly(ring, frozenset(acc))

    def check(self) -> dict:
        """Verify d_Y^2 = 0, weight homogeneity, and d_X = delta_1 + R_{n,n+1} delta_2."""
        n, m = self.n, self.m
        X = complex_X(m)
        report = {"d_Y_squared_zero": True, "delta1_weight": True,
                  "delta2_weight": True, "reconstructs_dX": True}
        for (i, j) in self.edges:
            name = _rname(i, j)
            g = self.ring.gen(name)
            if differential(self.Y, differential(self.Y, g)):
                report["d_Y_squared_zero"] = False
            w = self.weight[(i, j)]
            if self.poly_weights(self.delta1[name]) - {w + 1}:
                report["delta1_weight"] = False
            if self.poly_weights(self.delta2[name]) - {w + 2}:
                report["delta2_weight"] = False
        # reconstruction, checked inside X on every generator of X
        incl = {name: X.ring.gen(name) for name in self.Y.ring._by_name}
        inc = RingMap(self.ring, X.ring, incl, degree_map=lambda d: d)
        h = X.ring.gen(_rname(n, n + 1))
        for (i, j) in self.edges:
            name = _rname(i, j)
            lhs = differential(X, X.ring.gen(name))
            rhs = inc(self.delta1[name]) + h * inc(self.delta2[name])
            if lhs != rhs:
                report["reconstructs_dX"] = False
        if differential(X, h):
            report["reconstructs_dX"] = False
        return report


def weight_split(n: int, m: int) -> WeightSplit:
    return WeightSplit(n, m)
