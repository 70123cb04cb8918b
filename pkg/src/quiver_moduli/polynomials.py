"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`PolyRing` fixes the variable names; monomials are dense exponent
tuples so comparison and hashing stay trivial.  Display order is graded
lexicographic, largest term first, which keeps every rendered generator
byte-stable.  Ideal membership is decided degree by degree with linear
algebra (no Groebner machinery): the span of ``monomial * generator`` up to
a degree bound is compared against the candidate.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .linalg import Echelon

Monomial = Tuple[int, ...]


class PolyError(ValueError):
    pass


class PolyRing:
    """Polynomial ring over QQ with a fixed ordered tuple of variable names."""

    def __init__(self, names: Sequence[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise PolyError("duplicate variable names")
        self.names = names
        self.nvars = len(names)
        self._one_mono = (0,) * self.nvars

    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    def one(self) -> "MultiPoly":
        return self.const(1)

    def const(self, c) -> "MultiPoly":
        c = Fraction(c)
        if not c:
            return MultiPoly(self, {})
        return MultiPoly(self, {self._one_mono: c})

    def var(self, i: int) -> "MultiPoly":
        if not 0 <= i < self.nvars:
            raise PolyError(f"variable index {i} out of range")
        mono = tuple(1 if j == i else 0 for j in range(self.nvars))
        return MultiPoly(self, {mono: Fraction(1)})

    def monomial(self, exps: Sequence[int], coeff=1) -> "MultiPoly":
        exps = tuple(exps)
        if len(exps) != self.nvars or any(e < 0 for e in exps):
            raise PolyError(f"bad exponent tuple {exps}")
        c = Fraction(coeff)
        return MultiPoly(self, {exps: c} if c else {})

    def linear(self, coeffs: Mapping[int, object], const=0) -> "MultiPoly":
        p = self.const(const)
        for i, c in coeffs.items():
            p = p + self.var(i) * Fraction(c)
        return p

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyRing) and other.names == self.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"PolyRing({', '.join(self.names) if self.names else '-'})"


def _grlex_key(mono: Monomial):
    return (sum(mono), mono)


class MultiPoly:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Dict[Monomial, Fraction]):
        self.ring = ring
        self.terms = {m: c for m, c in terms.items() if c}

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(m) for m in self.terms)

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    def is_linear(self) -> bool:
        return self.total_degree() <= 1

    def constant_term(self) -> Fraction:
        return self.terms.get(self.ring._one_mono, Fraction(0))

    def linear_coefficients(self) -> Dict[int, Fraction]:
        out: Dict[int, Fraction] = {}
        for m, c in self.terms.items():
            if sum(m) == 1:
                out[m.index(1)] = c
        return out

    def variables(self) -> List[int]:
        seen = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    seen.add(i)
        return sorted(seen)

    def leading(self) -> Tuple[Monomial, Fraction]:
        mono = max(self.terms, key=_grlex_key)
        return mono, self.terms[mono]

    def monic(self) -> "MultiPoly":
        if not self.terms:
            return self
        _, lead = self.leading()
        if lead == 1:
            return self
        return MultiPoly(self.ring, {m: c / lead for m, c in self.terms.items()})

    def sort_key(self):
        items = sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)
        return (self.total_degree(), tuple((m, c) for m, c in items))

    def _check(self, other: "MultiPoly"):
        if self.ring != other.ring:
            raise PolyError("mixed polynomial rings")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, Fraction(0)) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return MultiPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return MultiPoly(self.ring, {m: v * c for m, v in self.terms.items()})
        self._check(other)
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(m, Fraction(0)) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return MultiPoly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise PolyError("negative power")
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        return isinstance(other, MultiPoly) and other.ring == self.ring and other.terms == self.terms

    def __hash__(self) -> int:
        return hash((self.ring, frozenset(self.terms.items())))

    def evaluate(self, values: Sequence, field):
        """Evaluate at a point with coordinates in ``field``."""
        if len(values) != self.ring.nvars:
            raise PolyError("point has wrong number of coordinates")
        acc = field.zero
        for m, c in self.terms.items():
            term = field.of(c)
            for i, e in enumerate(m):
                if e:
                    term = term * values[i] ** e
            acc = acc + term
        return acc

    def map_variables(self, target: PolyRing, images: Sequence[Optional["MultiPoly"]]) -> "MultiPoly":
        """Substitute variable i by images[i] (None means substitute zero)."""
        if len(images) != self.ring.nvars:
            raise PolyError("need one image per variable")
        out = target.zero()
        for m, c in self.terms.items():
            term = target.const(c)
            for i, e in enumerate(m):
                if not e:
                    continue
                img = images[i]
                if img is None:
                    term = target.zero()
                    break
                term = term * img ** e
            out = out + term
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)
        parts: List[str] = []
        for m, c in items:
            factors = []
            for i, e in enumerate(m):
                if e == 1:
                    factors.append(self.ring.names[i])
                elif e > 1:
                    factors.append(f"{self.ring.names[i]}^{e}")
            mono = "*".join(factors)
            coeff = abs(c)
            if mono and coeff == 1:
                body = mono
            elif mono:
                body = f"{coeff}*{mono}"
            else:
                body = f"{coeff}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    __repr__ = __str__


def monomials_up_to(nvars: int, degree: int) -> Iterable[Monomial]:
    """All exponent tuples of total degree <= degree, graded order."""
    for d in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), d):
            mono = [0] * nvars
            for i in combo:
                mono[i] += 1
            yield tuple(mono)


def _mono_index_map(nvars: int, degree: int) -> Dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomials_up_to(nvars, degree))}


def in_ideal_bounded(poly: MultiPoly, generators: Sequence[MultiPoly], degree: int) -> bool:
    """Decide membership in the ideal truncation spanned by m*g, deg(m*g) <= degree."""
    gens = [g for g in generators if not g.is_zero()]
    if poly.is_zero():
        return True
    if poly.total_degree() > degree:
        raise PolyError("degree bound below candidate degree")
    ring = poly.ring
    index = _mono_index_map(ring.nvars, degree)
    ech = Echelon()
    for g in gens:
        if g.ring != ring:
            raise PolyError("generator from a different ring")
        gd = g.total_degree()
        if gd > degree:
            continue
        for m in monomials_up_to(ring.nvars, degree - gd):
            prod = MultiPoly(ring, {m: Fraction(1)}) * g
            ech.add({index[mm]: c for mm, c in prod.terms.items()})
    return ech.contains({index[m]: c for m, c in poly.terms.items()})


def ideals_equal_bounded(gens_a: Sequence[MultiPoly], gens_b: Sequence[MultiPoly], degree: int) -> bool:
    return all(in_ideal_bounded(a, gens_b, max(degree, a.total_degree())) for a in gens_a) and all(
        in_ideal_bounded(b, gens_a, max(degree, b.total_degree())) for b in gens_b
    )


def eliminate_linear(generators: Sequence[MultiPoly], prefer_high: bool = True):
    """Solve the affine-linear generators and substitute into the rest.

    Returns (substituted generators, images, free variable indices, consistent).
    ``images[i]`` is the polynomial the variable i is replaced by (identity on
    free variables).  Pivots are taken on the highest variable index first when
    ``prefer_high`` so low-index variables stay free.  ``consistent`` is False
    when the linear system forces 1 = 0 (empty zero locus).
    """
    if not generators:
        return [], None, [], True
    ring = generators[0].ring
    n = ring.nvars
    order = list(range(n - 1, -1, -1)) if prefer_high else list(range(n))
    col_of = {v: i for i, v in enumerate(order)}
    const_col = n
    ech = Echelon()
    consistent = True
    for g in generators:
        if g.is_zero() or g.total_degree() > 1:
            continue
        vec = {col_of[i]: c for i, c in g.linear_coefficients().items()}
        c0 = g.constant_term()
        if c0:
            vec[const_col] = c0
        res = ech.reduce(vec)
        if res and min(res) == const_col:
            consistent = False
        ech.add(vec)
    images: List[Optional[MultiPoly]] = [ring.var(i) for i in range(n)]
    pivots = set()
    for pcol, row in ech.rows.items():
        if pcol == const_col:
            consistent = False
            continue
        v = order[pcol]
        pivots.add(v)
        expr = ring.const(-row.get(const_col, Fraction(0)))
        for c, coeff in row.items():
            if c in (pcol, const_col):
                continue
            expr = expr - ring.var(order[c]) * coeff
        images[v] = expr
    free = [i for i in range(n) if i not in pivots]
    out = []
    for g in generators:
        sub = g.map_variables(ring, images)
        if not sub.is_zero():
            out.append(sub.monic())
    seen = set()
    dedup = []
    for g in sorted(out, key=lambda p: p.sort_key()):
        k = g.sort_key()
        if k not in seen:
            seen.add(k)
            dedup.append(g)
    return dedup, images, free, consistent


def restrict_to_variables(poly: MultiPoly, keep: Sequence[int], target: PolyRing) -> MultiPoly:
    """Rewrite a polynomial supported on ``keep`` in a smaller ring."""
    pos = {v: i for i, v in enumerate(keep)}
    out: Dict[Monomial, Fraction] = {}
    for m, c in poly.terms.items():
        new = [0] * target.nvars
        for i, e in enumerate(m):
            if not e:
                continue
            if i not in pos:
                raise PolyError(f"polynomial involves dropped variable {poly.ring.names[i]}")
            new[pos[i]] = e
        mono = tuple(new)
        out[mono] = out.get(mono, Fraction(0)) + c
    return MultiPoly(target, out)


class _Tok:
    def __init__(self, kind: str, text: str, pos: int):
        self.kind = kind
        self.text = text
        self.pos = pos


def _tokenize_poly(s: str) -> List[_Tok]:
    toks: List[_Tok] = []
    i = 0
    while i < len(s):
        ch = s[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*^()":
            toks.append(_Tok(ch, ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(s) and (s[j].isdigit() or s[j] == "/"):
                j += 1
            toks.append(_Tok("num", s[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(s) and (s[j].isalnum() or s[j] == "_"):
                j += 1
            toks.append(_Tok("name", s[i:j], i))
            i = j
            continue
        raise PolyError(f"unexpected character {ch!r} at position {i}")
    return toks


def parse_polynomial(s: str, ring: PolyRing) -> MultiPoly:
    """Parse '+'/'-' separated products of names, numbers and powers."""
    toks = _tokenize_poly(s)
    if not toks:
        raise PolyError("empty polynomial")
    name_to_var = {n: i for i, n in enumerate(ring.names)}
    pos = 0

    def parse_factor() -> MultiPoly:
        nonlocal pos
        if pos >= len(toks):
            raise PolyError("unexpected end of polynomial")
        t = toks[pos]
        if t.kind == "num":
            pos += 1
            base = ring.const(Fraction(t.text))
        elif t.kind == "name":
            if t.text not in name_to_var:
                raise PolyError(f"unknown variable {t.text!r} at position {t.pos}")
            pos += 1
            base = ring.var(name_to_var[t.text])
        elif t.kind == "(":
            pos += 1
            base = parse_sum()
            if pos >= len(toks) or toks[pos].kind != ")":
                raise PolyError("unbalanced parenthesis")
            pos += 1
        else:
            raise PolyError(f"unexpected token {t.text!r} at position {t.pos}")
        if pos < len(toks) and toks[pos].kind == "^":
            pos += 1
            if pos >= len(toks) or toks[pos].kind != "num" or "/" in toks[pos].text:
                raise PolyError("exponent must be a nonnegative integer")
            e = int(toks[pos].text)
            pos += 1
            base = base ** e
        return base

    def parse_product() -> MultiPoly:
        nonlocal pos
        out = parse_factor()
        while pos < len(toks) and toks[pos].kind == "*":
            pos += 1
            out = out * parse_factor()
        return out

    def parse_sum() -> MultiPoly:
        nonlocal pos
        sign = 1
        if pos < len(toks) and toks[pos].kind in "+-":
            sign = -1 if toks[pos].kind == "-" else 1
            pos += 1
        out = parse_product() * sign
        while pos < len(toks) and toks[pos].kind in "+-":
            sign = -1 if toks[pos].kind == "-" else 1
            pos += 1
            out = out + parse_product() * sign
        return out

    result = parse_sum()
    if pos != len(toks):
        raise PolyError(f"trailing input at position {toks[pos].pos}")
    return result
