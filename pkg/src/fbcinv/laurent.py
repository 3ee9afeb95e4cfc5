"""Integer Laurent polynomials in r commuting variables.

Exponent vectors are int tuples; a polynomial is stored as a dict from
exponent tuple to a nonzero int coefficient.
"""
from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Exp = Tuple[int, ...]


class NotDivisible(ArithmeticError):
    pass


class LaurentPoly:
    __slots__ = ("terms", "r")

    def __init__(self, terms: Optional[Dict[Exp, int]] = None, r: int = 0):
        self.terms: Dict[Exp, int] = {e: c for e, c in (terms or {}).items() if c}
        if self.terms:
            r = len(next(iter(self.terms)))
        self.r = r

    # -- constructors --------------------------------------------------------

    @classmethod
    def const(cls, c: int, r: int) -> "LaurentPoly":
        return cls({(0,) * r: c}, r)

    @classmethod
    def monomial(cls, e: Sequence[int], c: int = 1) -> "LaurentPoly":
        return cls({tuple(e): c}, len(e))

    @classmethod
    def zero(cls, r: int) -> "LaurentPoly":
        return cls({}, r)

    # -- arithmetic ----------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.const(other, self.r)
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out, self.r)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self.terms.items()}, self.r)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly({e: c * other for e, c in self.terms.items()}, self.r)
        out: Dict[Exp, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(out, self.r)

    __rmul__ = __mul__

    def shift(self, e: Sequence[int]) -> "LaurentPoly":
        return LaurentPoly({tuple(a + b for a, b in zip(k, e)): c
                            for k, c in self.terms.items()}, self.r)

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        """Quotient ``self / other``; raises NotDivisible if it is not exact."""
        if not other:
            raise ZeroDivisionError("division by zero polynomial")
        if not self:
            return LaurentPoly.zero(self.r)
        r = self.r
        lo = [min(e[i] for e in self.terms) - min(e[i] for e in other.terms) for i in range(r)]
        hi = [max(e[i] for e in self.terms) - max(e[i] for e in other.terms) for i in range(r)]
        if any(l > h for l, h in zip(lo, hi)):
            raise NotDivisible("Newton polytope too small")
        lead_e = max(other.terms)
        lead_c = other.terms[lead_e]
        rem = dict(self.terms)
        quot: Dict[Exp, int] = {}
        while rem:
            e = max(rem)
            c = rem[e]
            if c % lead_c:
                raise NotDivisible("coefficient not divisible")
            qe = tuple(a - b for a, b in zip(e, lead_e))
            if any(not lo[i] <= qe[i] <= hi[i] for i in range(r)):
                raise NotDivisible("quotient leaves its Newton box")
            qc = c // lead_c
            quot[qe] = qc
            for oe, oc in other.terms.items():
                k = tuple(a + b for a, b in zip(qe, oe))
                v = rem.get(k, 0) - qc * oc
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        return LaurentPoly(quot, r)

    # -- structure -----------------------------------------------------------

    def support(self) -> List[Exp]:
        return sorted(self.terms)

    def is_unit(self) -> bool:
        return len(self.terms) == 1 and abs(next(iter(self.terms.values()))) == 1

    def normalized(self) -> "LaurentPoly":
        """Multiply by a signed monomial so the lex-min exponent is 0 with c > 0."""
        if not self:
            return self
        e = min(self.terms)
        out = self.shift(tuple(-x for x in e))
        if out.terms[(0,) * self.r] < 0:
            out = -out
        return out

    def equal_up_to_unit(self, other: "LaurentPoly") -> bool:
        return self.normalized() == other.normalized()

    def format(self, names: Sequence[str]) -> str:
        if not self:
            return "0"
        pieces = []
        for e in sorted(self.terms):
            c = self.terms[e]
            mono = []
            for name, x in zip(names, e):
                if x == 1:
                    mono.append(name)
                elif x:
                    mono.append(f"{name}^{x}")
            body = "*".join(mono)
            if not body:
                text = str(abs(c))
            elif abs(c) == 1:
                text = body
            else:
                text = f"{abs(c)}*{body}"
            sign = "-" if c < 0 else "+"
            pieces.append((sign, text))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, text in pieces[1:]:
            out += f" {sign} {text}"
        return out

    def __repr__(self) -> str:
        return f"LaurentPoly({self.terms!r})"


def variable_names(labels: Sequence[str]) -> List[str]:
    return [lab.upper() for lab in labels]


# -- determinants -------------------------------------------------------------

PolyMatrix = List[List[LaurentPoly]]


def bareiss_det(m: Sequence[Sequence[LaurentPoly]], r: Optional[int] = None) -> LaurentPoly:
    """Fraction-free Gaussian elimination with exact Laurent division."""
    n = len(m)
    if r is None:
        r = m[0][0].r if n else 0
    if n == 0:
        return LaurentPoly.const(1, r)
    a = [list(row) for row in m]
    sign = 1
    prev = LaurentPoly.const(1, r)
    for k in range(n - 1):
        if not a[k][k]:
            piv = next((i for i in range(k + 1, n) if a[i][k]), None)
            if piv is None:
                return LaurentPoly.zero(r)
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_div(prev)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det


def cofactor_det(m: Sequence[Sequence[LaurentPoly]], r: Optional[int] = None) -> LaurentPoly:
    """Laplace expansion along the first row; an independent oracle."""
    n = len(m)
    if r is None:
        r = m[0][0].r if n else 0
    if n == 0:
        return LaurentPoly.const(1, r)
    if n == 1:
        return m[0][0]
    total = LaurentPoly.zero(r)
    for j in range(n):
        if not m[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * cofactor_det(minor, r)
        total = total + term if j % 2 == 0 else total - term
    return total


def newton_points(p: LaurentPoly) -> List[Exp]:
    return p.support()


def from_terms(items: Iterable[Tuple[Sequence[int], int]], r: int) -> LaurentPoly:
    out: Dict[Exp, int] = {}
    for e, c in items:
        e = tuple(e)
        out[e] = out.get(e, 0) + c
    return LaurentPoly(out, r)
