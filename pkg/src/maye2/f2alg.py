"""Tri-graded polynomial algebra over F2 with admissible monomial orderings.

Monomials are stored internally as tuples of exponents with trailing zeros
stripped; a polynomial is a frozenset of such tuples (coefficient 1 each).
Under the reversed lexicographical ordering the leading monomial is the one
whose exponent tuple is smallest in plain lexicographic order.
"""
from __future__ import annotations

import re
from functools import reduce
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

__all__ = [
    "TriDegree", "Generator", "Ring", "Monomial", "Poly", "RingMap",
    "LT", "EQ", "GT",
]

LT, EQ, GT = -1, 0, 1

_EXP_LIMIT = 1 << 62


class StructureError(ValueError):
    """Raised when operands do not fit together (wrong ring, bad map, ...)."""


class TriDegree(NamedTuple):
    s: int
    t: int
    u: int

    @property
    def v(self) -> int:
        return self.s + self.u

    def __add__(self, other):
        return TriDegree(self.s + other[0], self.t + other[1], self.u + other[2])

    def scale(self, k: int) -> "TriDegree":
        return TriDegree(k * self.s, k * self.t, k * self.u)


class Generator(NamedTuple):
    name: str
    index: int
    degree: TriDegree


def _strip(exps: Sequence[int]) -> Tuple[int, ...]:
    n = len(exps)
    while n and exps[n - 1] == 0:
        n -= 1
    return tuple(exps[:n])


_TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<name>[A-Za-z]+(?:_\{[^}]*\}|_[0-9]+(?:\([0-9,\s]+\))?|[0-9]+(?:\([0-9,\s]+\))?))"
    r"|(?P<int>[0-9]+)"
    r"|(?P<op>[-+*^()])"
    r")"
)


def _normalize_name(tok: str) -> str:
    """Map token spellings (h0, b_{02}, h_0(1, 3)) to canonical names (h_0, b_02, h_0(1,3))."""
    tok = tok.replace(" ", "")
    m = re.fullmatch(r"([A-Za-z]+)_\{([^}]*)\}", tok)
    if m:
        return f"{m.group(1)}_{m.group(2)}"
    m = re.fullmatch(r"([A-Za-z]+)([0-9]+)(\([0-9,]+\))?", tok)
    if m:
        return f"{m.group(1)}_{m.group(2)}{m.group(3) or ''}"
    return tok


class Ring:
    """A connected tri-graded F2 polynomial ring with a fixed generator sequence."""

    def __init__(self, gens: Iterable[Tuple[str, TriDegree]], ordering: str = "revlex"):
        if ordering not in ("revlex", "lex"):
            raise ValueError(f"unknown ordering {ordering!r}")
        self.ordering = ordering
        self.gens: List[Generator] = []
        self._by_name: Dict[str, int] = {}
        for name, deg in gens:
            self._add_gen(name, TriDegree(*deg))
        # hook for tokens like h_{013,245} that need domain knowledge to expand
        self.token_resolver: Optional[Callable[[str], "Poly"]] = None

    def _add_gen(self, name: str, deg: TriDegree) -> Generator:
        if name in self._by_name:
            raise StructureError(f"duplicate generator {name!r}")
        g = Generator(name, len(self.gens), deg)
        self.gens.append(g)
        self._by_name[name] = g.index
        return g

    @property
    def ngens(self) -> int:
        return len(self.gens)

    def gen_index(self, name: str) -> int:
        key = _normalize_name(name)
        if key not in self._by_name:
            raise StructureError(f"unknown generator {name!r}")
        return self._by_name[key]

    # -- monomial arithmetic on raw exponent tuples --------------------------

    def mon_one(self) -> Tuple[int, ...]:
        return ()

    def mon_gen(self, i: int, e: int = 1) -> Tuple[int, ...]:
        return (0,) * i + (e,)

    def mon_mul(self, m1: Tuple[int, ...], m2: Tuple[int, ...]) -> Tuple[int, ...]:
        if len(m1) < len(m2):
            m1, m2 = m2, m1
        out = list(m1)
        for i, e in enumerate(m2):
            out[i] += e
            if out[i] >= _EXP_LIMIT:
                raise OverflowError("monomial exponent overflow")
        # inputs may carry trailing zeros (e.g. after a Leibniz decrement)
        return _strip(out)

    def mon_div(self, m1, m2) -> Optional[Tuple[int, ...]]:
        """m1 / m2, or None when m2 does not divide m1."""
        if len(m2) > len(m1):
            return None
        out = list(m1)
        for i, e in enumerate(m2):
            out[i] -= e
            if out[i] < 0:
                return None
        return _strip(out)

    def mon_divides(self, m2, m1) -> bool:
        if len(m2) > len(m1):
            return False
        return all(e <= m1[i] for i, e in enumerate(m2))

    def mon_lcm(self, m1, m2) -> Tuple[int, ...]:
        if len(m1) < len(m2):
            m1, m2 = m2, m1
        out = list(m1)
        for i, e in enumerate(m2):
            if e > out[i]:
                out[i] = e
        return tuple(out)

    def mon_square(self, m) -> Tuple[int, ...]:
        return tuple(2 * e for e in m)

    def mon_deg(self, m) -> TriDegree:
        s = t = u = 0
        for i, e in enumerate(m):
            if e:
                d = self.gens[i].degree
                s += e * d.s
                t += e * d.t
                u += e * d.u
        return TriDegree(s, t, u)

    def mon_key(self, m) -> tuple:
        """Sort key; larger key = larger monomial in the ring's ordering."""
        d = self.mon_deg(m)
        if self.ordering == "revlex":
            return (d.t, d.s, _NegTuple(m))
        return (d.t, d.s, tuple(m))

    def compare(self, m1, m2) -> int:
        """Compare monomials (cross-degree extension: t, then s, then the ordering)."""
        k1, k2 = self.mon_key(m1), self.mon_key(m2)
        return LT if k1 < k2 else (GT if k1 > k2 else EQ)

    def lead(self, terms) -> Tuple[int, ...]:
        """Ordering-largest monomial among same-degree terms."""
        return min(terms) if self.ordering == "revlex" else max(terms)

    def sorted_terms(self, terms) -> List[Tuple[int, ...]]:
        """Descending in the ordering (leading monomial first); terms may mix degrees."""
        return sorted(terms, key=self.mon_key, reverse=True)

    # -- polynomial construction ---------------------------------------------

    def zero(self) -> "Poly":
        return Poly(self, frozenset())

    def one(self) -> "Poly":
        return Poly(self, frozenset({()}))

    def gen(self, name: str) -> "Poly":
        return Poly(self, frozenset({self.mon_gen(self.gen_index(name))}))

    def poly(self, terms: Iterable[Tuple[int, ...]]) -> "Poly":
        acc: set = set()
        for m in terms:
            m = _strip(m)
            acc.symmetric_difference_update({m})
        return Poly(self, frozenset(acc))

    def mon_str(self, m, braces: bool = False) -> str:
        if not any(m):
            return "1"
        parts = []
        for i, e in enumerate(m):
            if not e:
                continue
            name = self.gens[i].name
            if braces:
                name = re.sub(r"_([0-9]+(?:\([0-9,]+\))?)$", r"_{\1}", name)
            parts.append(name if e == 1 else f"{name}^{e}")
        return "".join(parts)

    def parse(self, text: str) -> "Poly":
        return _parse_poly(self, text)


class _NegTuple:
    """Wrapper comparing exponent tuples reversed-lexicographically (padded)."""

    __slots__ = ("t",)

    def __init__(self, t):
        self.t = tuple(t)

    def _cmp(self, other):
        a, b = self.t, other.t
        for x, y in zip(a, b):
            if x != y:
                return 1 if x < y else -1  # smaller exponent first = larger monomial
        if len(a) == len(b):
            return 0
        longer, sign = (a, -1) if len(a) > len(b) else (b, 1)
        for x in longer[min(len(a), len(b)):]:
            if x:
                return sign
        return 0

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __eq__(self, other):
        return self._cmp(other) == 0

    def __hash__(self):
        return hash(_strip(self.t))


class Monomial:
    """A single monomial bound to a ring, with cached tri-degree."""

    __slots__ = ("ring", "exps", "_deg")

    def __init__(self, ring: Ring, exps: Sequence[int]):
        self.ring = ring
        self.exps = _strip(exps)
        self._deg: Optional[TriDegree] = None

    @property
    def degree(self) -> TriDegree:
        if self._deg is None:
            self._deg = self.ring.mon_deg(self.exps)
        return self._deg

    @property
    def exponents(self) -> List[Tuple[int, int]]:
        return [(i, e) for i, e in enumerate(self.exps) if e]

    def __mul__(self, other: "Monomial") -> "Monomial":
        if self.ring is not other.ring:
            raise StructureError("monomials from different rings")
        return Monomial(self.ring, self.ring.mon_mul(self.exps, other.exps))

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.ring is other.ring and self.exps == other.exps

    def __hash__(self):
        return hash((id(self.ring), self.exps))

    def __str__(self):
        return self.ring.mon_str(self.exps)

    __repr__ = __str__


def compare(m1: Monomial, m2: Monomial, ordering: Optional[str] = None) -> int:
    """Compare two monomials of one ring; returns LT, EQ or GT."""
    if m1.ring is not m2.ring:
        raise StructureError("monomials from different rings")
    ring = m1.ring
    if ordering is not None and ordering != ring.ordering:
        ring = Ring([(g.name, g.degree) for g in ring.gens], ordering)
    return ring.compare(m1.exps, m2.exps)


class Poly:
    """An F2 polynomial: a set of monomials, all of one tri-degree (or empty)."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: frozenset):
        self.ring = ring
        self.terms = terms

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, Poly) and self.ring is other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((id(self.ring), self.terms))

    def __len__(self):
        return len(self.terms)

    def _check(self, other: "Poly"):
        if self.ring is not other.ring:
            raise StructureError("polynomials from different rings")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        return Poly(self.ring, self.terms ^ other.terms)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        acc: set = set()
        mul = self.ring.mon_mul
        for m1 in a:
            acc.symmetric_difference_update(mul(m1, m2) for m2 in b)
        return Poly(self.ring, frozenset(acc))

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            # char 2: squaring is term-wise exponent doubling
            base = Poly(base.ring, frozenset(base.ring.mon_square(m) for m in base.terms))
            e >>= 1
        return result

    def square(self) -> "Poly":
        return Poly(self.ring, frozenset(self.ring.mon_square(m) for m in self.terms))

    def degree(self) -> Optional[TriDegree]:
        """Common tri-degree of the terms; None for the zero polynomial."""
        for m in self.terms:
            return self.ring.mon_deg(m)
        return None

    def is_homogeneous(self) -> bool:
        degs = {self.ring.mon_deg(m) for m in self.terms}
        return len(degs) <= 1

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return Monomial(self.ring, self.ring.lead(self.terms))

    def lm(self) -> Tuple[int, ...]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return self.ring.lead(self.terms)

    def sort_key(self) -> tuple:
        """Canonical key: (t, s, leading monomial) of the polynomial."""
        if not self.terms:
            return (-1, -1, ())
        d = self.degree()
        lead = self.ring.lead(self.terms)
        return (d.t, d.s, lead)

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(self.ring.mon_str(m) for m in self.ring.sorted_terms(self.terms))

    def __repr__(self):
        return f"<{self}>"


class RingMap:
    """Algebra map determined by one target polynomial per source generator."""

    def __init__(self, source: Ring, target: Ring, images: Dict[str, Poly],
                 degree_map: Optional[Callable[[TriDegree], TriDegree]] = None,
                 check_degrees: bool = True):
        self.source = source
        self.target = target
        self.images: List[Poly] = []
        for g in source.gens:
            if g.name not in images:
                raise StructureError(f"no image assigned for generator {g.name!r}")
            img = images[g.name]
            if img.ring is not target:
                raise StructureError(f"image of {g.name!r} lies in the wrong ring")
            if check_degrees and degree_map is not None and img:
                want = TriDegree(*degree_map(g.degree))
                got = img.degree()
                if got != want:
                    raise StructureError(
                        f"image of {g.name!r} has degree {got}, expected {want}")
            self.images.append(img)

    def __call__(self, p: Poly) -> Poly:
        if p.ring is not self.source:
            raise StructureError("polynomial not in the map's source ring")
        out = self.target.zero()
        for m in p.terms:
            term = self.target.one()
            for i, e in enumerate(m):
                if e:
                    term = term * (self.images[i] ** e)
            out = out + term
        return out


def apply_map(f: RingMap, p: Poly) -> Poly:
    return f(p)


# -- parsing ------------------------------------------------------------------

def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ValueError(f"parse error at column {pos}: {text[pos:pos+12]!r}")
            break
        if m.group("name"):
            out.append(("name", m.group("name")))
        elif m.group("int"):
            out.append(("int", m.group("int")))
        else:
            out.append(("op", m.group("op")))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, ring: Ring, tokens):
        self.ring = ring
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse_expr(self) -> Poly:
        acc = self.parse_term()
        while self.peek() == ("op", "+") or self.peek() == ("op", "-"):
            self.next()
            acc = acc + self.parse_term()
        return acc

    def parse_term(self) -> Poly:
        acc = self.parse_factor()
        while True:
            kind, val = self.peek()
            if (kind, val) == ("op", "*"):
                self.next()
                acc = acc * self.parse_factor()
            elif kind == "name" or (kind, val) == ("op", "("):
                acc = acc * self.parse_factor()
            else:
                return acc

    def parse_factor(self) -> Poly:
        base = self.parse_atom()
        while self.peek() == ("op", "^"):
            self.next()
            kind, val = self.next()
            if kind != "int":
                raise ValueError("expected integer exponent after '^'")
            base = base ** int(val)
        return base

    def parse_atom(self) -> Poly:
        kind, val = self.next()
        if kind == "name":
            key = _normalize_name(val)
            if key in self.ring._by_name:
                return self.ring.gen(key)
            if self.ring.token_resolver is not None:
                p = self.ring.token_resolver(key)
                if p is not None:
                    return p
            raise StructureError(f"unknown generator {val!r}")
        if (kind, val) == ("op", "("):
            inner = self.parse_expr()
            if self.next() != ("op", ")"):
                raise ValueError("unbalanced parenthesis")
            return inner
        if kind == "int":
            n = int(val)
            return self.ring.one() if n % 2 else self.ring.zero()
        raise ValueError(f"unexpected token {val!r}")


def _parse_poly(ring: Ring, text: str) -> Poly:
    text = text.strip()
    if text in ("", "0"):
        return ring.zero()
    toks = _tokenize(text)
    parser = _Parser(ring, toks)
    p = parser.parse_expr()
    if parser.i != len(toks):
        raise ValueError(f"trailing input at token {parser.i}")
    return p


def mul(p: Poly, q: Poly) -> Poly:
    return p * q


def leading_monomial(p: Poly) -> Monomial:
    return p.leading_monomial()
