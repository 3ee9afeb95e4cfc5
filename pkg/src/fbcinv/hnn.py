"""The ascending HNN extension G = <F_n, t | t^-1 x t = g(x)>.

Elements are triples ``(p, w, q)`` standing for ``t^p w t^-q``.  A triple is
reduced when ``p == 0`` or ``q == 0`` or ``w`` is not in ``g(F_n)``; reduced
triples are unique, which solves the word problem.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .smith import hermite_rows, rational_rank, smith_normal_form, solve_rational
from .words import (
    EMPTY,
    Endomorphism,
    Word,
    exponent_sums,
    fold_subgroup,
    invert,
    letter_name,
    multiply,
)


class HnnElement(NamedTuple):
    p: int
    w: Word
    q: int


class HnnGroup:
    """Arithmetic in G for a fixed injective endomorphism ``g``."""

    def __init__(self, g: Endomorphism):
        self.g = g
        self.n = g.rank
        self._image = fold_subgroup(g.images)
        if self._image.rank != self.n:
            raise ValueError("endomorphism is not injective")
        self._ab: Optional[AbelianizationData] = None
        self.apply_power = lru_cache(maxsize=1 << 16)(self._apply_power)

    def _apply_power(self, w: Word, k: int) -> Word:
        for _ in range(k):
            w = self.g(w)
        return w

    # -- elements -----------------------------------------------------------

    @property
    def identity(self) -> HnnElement:
        return HnnElement(0, EMPTY, 0)

    @property
    def t(self) -> HnnElement:
        return HnnElement(1, EMPTY, 0)

    @property
    def t_inv(self) -> HnnElement:
        return HnnElement(0, EMPTY, 1)

    def gen(self, i: int) -> HnnElement:
        return HnnElement(0, (i,), 0)

    def word(self, w: Word) -> HnnElement:
        return HnnElement(0, tuple(w), 0)

    def preimage(self, w: Word) -> Optional[Word]:
        """``g^-1(w)`` if ``w`` lies in the image, else None."""
        if not self._image.contains(w):
            return None
        return self._image.preimage(w)

    def normalize(self, p: int, w: Word, q: int) -> HnnElement:
        while p > 0 and q > 0:
            u = self.preimage(w)
            if u is None:
                break
            p, w, q = p - 1, u, q - 1
        return HnnElement(p, w, q)

    def mul(self, x: HnnElement, y: HnnElement) -> HnnElement:
        p1, w1, q1 = x
        p2, w2, q2 = y
        if q1 >= p2:
            k = q1 - p2
            return self.normalize(p1, multiply(w1, self.apply_power(w2, k)), k + q2)
        m = p2 - q1
        return self.normalize(p1 + m, multiply(self.apply_power(w1, m), w2), q2)

    def inverse(self, x: HnnElement) -> HnnElement:
        return self.normalize(x.q, invert(x.w), x.p)

    def product(self, *xs: HnnElement) -> HnnElement:
        out = self.identity
        for x in xs:
            out = self.mul(out, x)
        return out

    def pow(self, x: HnnElement, k: int) -> HnnElement:
        if k < 0:
            x, k = self.inverse(x), -k
        out = self.identity
        for _ in range(k):
            out = self.mul(out, x)
        return out

    def format(self, x: HnnElement) -> str:
        parts = []
        if x.p:
            parts.append("t" if x.p == 1 else f"t^{x.p}")
        parts.extend(letter_name(s) for s in x.w)
        if x.q:
            parts.append(f"t^-{x.q}")
        return " ".join(parts) or "1"

    # -- abelianization -----------------------------------------------------

    @property
    def ab(self) -> "AbelianizationData":
        if self._ab is None:
            self._ab = abelianize(self.g)
        return self._ab

    def p0(self, x: HnnElement) -> Tuple[int, ...]:
        return self.ab.project(x.w, x.p - x.q)


@dataclass(frozen=True)
class AbelianizationData:
    """Free part of H_1(G) with coordinates ``Z^f + Z t``."""

    M: Tuple[Tuple[int, ...], ...]
    smith_diagonal: Tuple[int, ...]
    # gen_images[j] = coordinates (length f) of p0(s_j)
    gen_images: Tuple[Tuple[int, ...], ...]
    labels: Tuple[str, ...]

    @property
    def r(self) -> int:
        return len(self.labels)

    @property
    def f(self) -> int:
        return self.r - 1

    @property
    def n(self) -> int:
        return len(self.M)

    @property
    def torsion(self) -> Tuple[int, ...]:
        return tuple(d for d in self.smith_diagonal if d > 1)

    def project(self, w: Word, t_exp: int = 0) -> Tuple[int, ...]:
        v = [0] * self.f
        for x in w:
            img = self.gen_images[abs(x) - 1]
            sgn = 1 if x > 0 else -1
            for k in range(self.f):
                v[k] += sgn * img[k]
        return tuple(v) + (t_exp,)

    def project_exponents(self, e: Sequence[int], t_exp: int = 0) -> Tuple[int, ...]:
        v = [sum(e[j] * self.gen_images[j][k] for j in range(self.n)) for k in range(self.f)]
        return tuple(v) + (t_exp,)

    def t_vector(self) -> Tuple[int, ...]:
        return (0,) * self.f + (1,)

    def describe(self) -> str:
        lines = [f"rank r = {self.r}", "basis: " + ", ".join(self.labels)]
        if self.torsion:
            lines.append("torsion discarded: " + " + ".join(f"Z/{d}" for d in self.torsion))
        for j, img in enumerate(self.gen_images, 1):
            lines.append(f"p0({letter_name(j)}) = {list(img) + [0]}")
        lines.append(f"p0(t) = {list(self.t_vector())}")
        return "\n".join(lines)


def abelianize(g: Endomorphism) -> AbelianizationData:
    n = g.rank
    M = g.abelianized()
    R = [[int(i == j) - M[i][j] for j in range(n)] for i in range(n)]
    D, _, V = smith_normal_form(R)
    diag = [D[i][i] for i in range(n)]
    rank = sum(1 for d in diag if d)
    f = n - rank
    # rows of V[:, rank:] project each generator to the free part
    proj_t = [[V[j][rank + k] for j in range(n)] for k in range(f)]  # f x n
    Q = hermite_rows(proj_t) if f else []
    labels = []
    for row in Q:
        j = next(c for c, x in enumerate(row) if x)
        labels.append(letter_name(j + 1) if row[j] == 1 else f"h{len(labels) + 1}")
    labels.append("t")
    gen_images = tuple(tuple(Q[k][j] for k in range(f)) for j in range(n))
    return AbelianizationData(
        M=tuple(tuple(r) for r in M),
        smith_diagonal=tuple(diag),
        gen_images=gen_images,
        labels=tuple(labels),
    )


# -- characters -------------------------------------------------------------

class CharacterError(ValueError):
    pass


@dataclass(frozen=True)
class Character:
    """Rational homomorphism G -> Q, stored on H_1(G)_f coordinates."""

    values: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))

    @property
    def r(self) -> int:
        return len(self.values)

    def is_zero(self) -> bool:
        return not any(self.values)

    def __call__(self, h: Sequence[int]) -> Fraction:
        """Value on an H_1(G)_f coordinate vector."""
        return sum((v * x for v, x in zip(self.values, h)), Fraction(0))

    def __neg__(self) -> "Character":
        return Character(tuple(-v for v in self.values))

    def __add__(self, other: "Character") -> "Character":
        return Character(tuple(a + b for a, b in zip(self.values, other.values)))

    def scale(self, c) -> "Character":
        return Character(tuple(Fraction(c) * v for v in self.values))

    @property
    def t_value(self) -> Fraction:
        return self.values[-1]

    def restricted_to_free_is_zero(self) -> bool:
        return not any(self.values[:-1])

    def on_element(self, G: HnnGroup, x: HnnElement) -> Fraction:
        return self(G.p0(x))

    def on_generator(self, ab: AbelianizationData, j: int) -> Fraction:
        return self(ab.project(((j,))))

    def integral(self) -> Tuple[int, ...]:
        """Primitive integer vector positively proportional to the values."""
        den = 1
        for v in self.values:
            den = den * v.denominator // gcd(den, v.denominator)
        ints = [int(v * den) for v in self.values]
        g = 0
        for x in ints:
            g = gcd(g, x)
        if g == 0:
            return tuple(ints)
        return tuple(x // g for x in ints)

    def format(self, ab: AbelianizationData) -> str:
        parts = [f"{lab}={_fmt_q(v)}" for lab, v in zip(ab.labels, self.values)]
        return "phi: " + ", ".join(parts)

    def to_dict(self, ab: AbelianizationData) -> dict:
        return {"basis": list(ab.labels), "values": [_fmt_q(v) for v in self.values]}

    @classmethod
    def from_dict(cls, data: dict) -> "Character":
        return cls(tuple(Fraction(v) for v in data["values"]))


def _fmt_q(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


_ASSIGN = re.compile(r"^\s*([A-Za-z][A-Za-z0-9]*)\s*=\s*(-?\d+(?:/\d+)?)\s*$")


def parse_character(text: str, ab: AbelianizationData) -> Character:
    """Parse ``phi: a=0, b=1, t=2``.

    Keys are generator letters, ``t`` or basis labels such as ``h1``.  Values
    are integers or fractions ``p/q``.  The values must pin down a unique
    character; if every generator is given, consistency with the relations
    ``s_i = g(s_i)`` is checked and a violated relation is reported.
    """
    body = text.strip()
    if body.startswith("phi:"):
        body = body[4:]
    given: Dict[str, Fraction] = {}
    for chunk in filter(None, (c.strip() for c in body.split(","))):
        m = _ASSIGN.match(chunk)
        if not m:
            raise CharacterError(f"cannot parse assignment {chunk!r}")
        key, val = m.group(1), Fraction(m.group(2))
        if key in given:
            raise CharacterError(f"{key} assigned twice")
        given[key] = val
    if "t" not in given:
        raise CharacterError("the value on t must be given")
    n, f = ab.n, ab.f
    rows: List[List[int]] = []
    rhs: List[Fraction] = []
    gen_vals: Dict[int, Fraction] = {}
    for key, val in given.items():
        if key == "t":
            continue
        if len(key) == 1 and key.islower() and ord(key) - 96 <= n:
            j = ord(key) - 97
            gen_vals[j] = val
            rows.append(list(ab.gen_images[j]))
        elif key in ab.labels[:-1]:
            k = ab.labels.index(key)
            rows.append([int(i == k) for i in range(f)])
        else:
            raise CharacterError(f"unknown generator or basis label {key!r}")
        rhs.append(val)
    if len(gen_vals) == n:
        _check_relations(ab, gen_vals)
    if f:
        if not rows or rational_rank(rows) < f:
            raise CharacterError("values do not determine a character; give more generators")
        sol = solve_rational(rows, rhs)
        if sol is None:
            raise CharacterError("values are inconsistent with H_1(G)")
        vals = list(sol)
    else:
        if any(v != 0 for v in rhs):
            raise CharacterError("every generator is torsion in H_1(G); its value must be 0")
        vals = []
    return Character(tuple(vals) + (given["t"],))


def _check_relations(ab: AbelianizationData, gen_vals: Dict[int, Fraction]) -> None:
    for i in range(ab.n):
        lhs = gen_vals[i]
        rhs = sum((ab.M[i][j] * gen_vals[j] for j in range(ab.n)), Fraction(0))
        if lhs != rhs:
            raise CharacterError(
                f"relation {letter_name(i + 1)} = g({letter_name(i + 1)}) violated: "
                f"{_fmt_q(lhs)} != {_fmt_q(rhs)}"
            )


def character_from_generators(ab: AbelianizationData, gen_values: Sequence, t_value) -> Character:
    text = ", ".join(f"{letter_name(j + 1)}={Fraction(v)}" for j, v in enumerate(gen_values))
    return parse_character(f"{text}, t={Fraction(t_value)}", ab)
