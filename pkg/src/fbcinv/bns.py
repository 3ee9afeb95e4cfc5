"""BNS invariant of F_2 *_g: single-ray test and circle decomposition.

The single-ray test changes the free basis so that phi is positive on both
basis letters, conjugates g until the two images share no prefix, and then
looks at the leading term of one explicit finite element E of Z[G].
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Dict, List, Optional, Sequence, Tuple

from .groupring import GroupRingElement, from_free, gr_add, gr_multiply, gr_one
from .hnn import Character, HnnElement, HnnGroup
from .novikov import FiniteSeries, GroupContext, is_unit_slice
from .polytopes import primitive
from .words import (
    EMPTY,
    Endomorphism,
    Word,
    fold_subgroup,
    format_word,
    fox_derivative,
    invert,
    is_surjective,
    multiply,
)


@dataclass
class BnsChart:
    basis: Tuple[Word, Word]  # x', y' as words in the original letters
    conjugator: Word  # accumulated prefix c (original letters); t' = t c
    g_new: Endomorphism  # the map in the new basis, prefix-free


@dataclass
class BnsVerdict:
    inside: bool  # whether [-phi] lies in Sigma(G)
    reason: str
    chart: Optional[BnsChart] = None
    E: Optional[GroupRingElement] = None
    mu: Optional[Dict[HnnElement, int]] = None

    @property
    def word(self) -> str:
        return "in" if self.inside else "out"


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def positive_bases(fa: Fraction, fb: Fraction, extra: int = 0) -> List[Tuple[Word, Word]]:
    """Free bases (x, y) of F_2 with phi(x), phi(y) > 0.

    The first entry is the simplest; ``extra`` more are produced by the
    Nielsen moves y -> y x^k, which keep both values positive.
    """
    if fa == 0 and fb == 0:
        raise ValueError("phi vanishes on F_2")
    if fa != 0 and fb != 0:
        x: Word = (_sign(fa),)
        y: Word = (2 * _sign(fb),)
    elif fa == 0:
        x = (2 * _sign(fb),)
        y = multiply((1,), x)
    else:
        x = (_sign(fa),)
        y = multiply((2,), x)
    out = [(x, y)]
    for k in range(1, extra + 1):
        out.append((x, multiply(y, tuple(x) * k)))
    return out


def _common_prefix(u: Word, v: Word) -> Word:
    k = 0
    while k < min(len(u), len(v)) and u[k] == v[k]:
        k += 1
    return u[:k]


def build_chart(g: Endomorphism, basis: Tuple[Word, Word]) -> BnsChart:
    """Rewrite g in the basis and strip common prefixes by conjugation."""
    fg = fold_subgroup(list(basis))
    if not fg.is_basis or not fg.contains((1,)) or not fg.contains((2,)):
        raise ValueError("not a free basis")
    images = [fg.preimage(g(b)) for b in basis]  # words in the new letters
    c_new: Word = EMPTY
    while True:
        c = _common_prefix(images[0], images[1])
        if not c:
            break
        ci = invert(c)
        images = [multiply(multiply(ci, w), c) for w in images]
        c_new = multiply(c_new, c)
    # express the conjugator in original letters
    c_orig: Word = EMPTY
    for x in c_new:
        w = basis[abs(x) - 1]
        c_orig = multiply(c_orig, w if x > 0 else invert(w))
    return BnsChart(tuple(basis), c_orig, Endomorphism(2, tuple(images)))


def _to_original(w: Word, basis: Sequence[Word]) -> Word:
    out: Word = EMPTY
    for x in w:
        b = basis[abs(x) - 1]
        out = multiply(out, b if x > 0 else invert(b))
    return out


def chart_element(G: HnnGroup, chart: BnsChart) -> GroupRingElement:
    """E = 1 + t' dg(x)/dy - t' dg(y)/dy, written in the original letters."""
    tprime = G.mul(G.t, G.word(chart.conjugator))
    d1 = fox_derivative(chart.g_new.images[0], 2)
    d2 = fox_derivative(chart.g_new.images[1], 2)
    term: Dict[Word, int] = {}
    for w, c in d1.items():
        ow = _to_original(w, chart.basis)
        term[ow] = term.get(ow, 0) + c
    for w, c in d2.items():
        ow = _to_original(w, chart.basis)
        term[ow] = term.get(ow, 0) - c
    prod = gr_multiply(G, {tprime: 1}, from_free(term))
    return gr_add(gr_one(G), prod)


def bns_membership_f2(G: HnnGroup, phi: Character, basis_index: int = 0) -> BnsVerdict:
    """Decide whether [-phi] lies in Sigma(G) for G = F_2 *_g."""
    if G.n != 2:
        raise ValueError("the single-ray test needs rank 2")
    if phi.is_zero():
        raise ValueError("phi must be nonzero")
    ab = G.ab
    fa = phi(ab.project((1,)))
    fb = phi(ab.project((2,)))
    if fa == 0 and fb == 0:
        if phi.t_value > 0:
            return BnsVerdict(True, "phi is a positive multiple of psi; -psi always lies in Sigma")
        surj = is_surjective(G.g)
        return BnsVerdict(surj, "phi is a negative multiple of psi; psi lies in Sigma iff g is onto"
                          + (" (g is onto)" if surj else " (g is not onto)"))
    basis = positive_bases(fa, fb, extra=basis_index)[basis_index]
    chart = build_chart(G.g, basis)
    E = chart_element(G, chart)
    ctx = GroupContext(G, primitive(phi.values))
    _, lead = FiniteSeries(ctx, E).leading(max_height=10 ** 9)
    inside = is_unit_slice(lead)
    return BnsVerdict(inside, "leading term of E is " + ("a signed group element" if inside
                                                          else "not a signed group element"),
                      chart, E, lead)


def format_element(G: HnnGroup, x: Dict[HnnElement, int]) -> str:
    if not x:
        return "0"
    parts = []
    for h in sorted(x, key=lambda h: (h.p, h.q, len(h.w), h.w)):
        c = x[h]
        mono = G.format(h)
        coef = "" if abs(c) == 1 and mono != "1" else str(abs(c))
        body = mono if mono != "1" else ""
        text = (coef + ("*" if coef and body else "") + body) or "1"
        parts.append(("-" if c < 0 else "+", text))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, t in parts[1:]:
        out += f" {s} {t}"
    return out


# -- decomposition of a circle of characters ------------------------------------------

Ray = Tuple[int, int]


@dataclass
class SigmaArc:
    kind: str  # "ray" or "arc"
    start: Ray
    end: Ray  # equal to start for rays
    sample: Ray  # the ray whose membership was tested
    inside: bool


@dataclass
class SigmaReport:
    plane: Tuple[Tuple[int, ...], Tuple[int, ...]]  # characters spanning the slice
    pieces: List[SigmaArc]
    components: int
    charts: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "plane": [list(self.plane[0]), list(self.plane[1])],
            "pieces": [
                {"kind": p.kind, "start": list(p.start), "end": list(p.end),
                 "sample": list(p.sample), "membership": "in" if p.inside else "out"}
                for p in self.pieces
            ],
            "components": self.components,
            "charts": self.charts,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SigmaReport":
        pieces = [SigmaArc(p["kind"], tuple(p["start"]), tuple(p["end"]), tuple(p["sample"]),
                           p["membership"] == "in") for p in data["pieces"]]
        plane = (tuple(data["plane"][0]), tuple(data["plane"][1]))
        return cls(plane, pieces, data["components"], list(data["charts"]))


def _half(v: Ray) -> int:
    x, y = v
    return 0 if (y > 0 or (y == 0 and x > 0)) else 1


def _angle_cmp(u: Ray, v: Ray) -> int:
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return hu - hv
    cross = u[0] * v[1] - u[1] * v[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def _prim2(v) -> Ray:
    p = primitive(v)
    return (p[0], p[1])


def default_plane(G: HnnGroup) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Plane of characters: all of H^1 when b1 = 2, else first coordinate and t."""
    r = G.ab.r
    if r < 2:
        raise ValueError("b1(G) = 1: the character sphere is two points")
    u = tuple(int(i == 0) for i in range(r))
    v = tuple(int(i == r - 1) for i in range(r))
    return u, v


def bns_components(G: HnnGroup, plane=None) -> SigmaReport:
    """Split the circle of characters in ``plane`` into rays and open arcs of
    constant membership in Sigma(G) and count the components of Sigma."""
    if G.n != 2:
        raise ValueError("bns-components needs rank 2")
    u, v = plane or default_plane(G)
    ab = G.ab
    pa = ab.project((1,))
    pb = ab.project((2,))

    def char(ray: Ray) -> Character:
        return Character(tuple(ray[0] * a + ray[1] * b for a, b in zip(u, v)))

    def lin(vec) -> Tuple[int, int]:
        # the functional rho -> rho(vec) in plane coordinates
        return (sum(a * b for a, b in zip(u, vec)), sum(a * b for a, b in zip(v, vec)))

    lines = set()

    def add_line(f):
        if f != (0, 0):
            ray = _prim2((-f[1], f[0]))
            lines.add(ray)
            lines.add((-ray[0], -ray[1]))

    fa, fb = lin(pa), lin(pb)
    add_line(fa)
    add_line(fb)
    charts = []
    # every sign pattern of (rho(a), rho(b)) fixes the chart; collect E's critical rays
    probes = set(lines)
    probes |= {(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, -1), (1, -1), (-1, 1)}
    seen_patterns = set()
    ordered = sorted(lines, key=cmp_to_key(_angle_cmp))
    for i, r1 in enumerate(ordered):
        r2 = ordered[(i + 1) % len(ordered)] if len(ordered) > 1 else (-r1[0], -r1[1])
        probes.add(_interior(r1, r2))
    for ray in probes:
        phi = -char(ray)  # membership of [ray] is tested via -phi
        a_val, b_val = phi(pa), phi(pb)
        pattern = (_sign(a_val), _sign(b_val))
        if pattern == (0, 0) or pattern in seen_patterns:
            continue
        seen_patterns.add(pattern)
        basis = positive_bases(a_val, b_val)[0]
        chart = build_chart(G.g, basis)
        charts.append(f"x={format_word(chart.basis[0])}, y={format_word(chart.basis[1])}, "
                      f"c={format_word(chart.conjugator)}")
        E = chart_element(G, chart)
        pts = sorted({G.p0(h) for h in E})
        for p in pts:
            for q in pts:
                if p < q:
                    add_line(lin(tuple(a - b for a, b in zip(p, q))))
    rays = sorted(lines, key=cmp_to_key(_angle_cmp))
    pieces: List[SigmaArc] = []
    for i, r1 in enumerate(rays):
        r2 = rays[(i + 1) % len(rays)]
        pieces.append(SigmaArc("ray", r1, r1, r1, _member(G, char(r1))))
        mid = _interior(r1, r2)
        pieces.append(SigmaArc("arc", r1, r2, mid, _member(G, char(mid))))
    return SigmaReport((tuple(u), tuple(v)), pieces, _count_components(pieces), charts)


def _interior(r1: Ray, r2: Ray) -> Ray:
    cross = r1[0] * r2[1] - r1[1] * r2[0]
    if cross > 0:
        return _prim2((r1[0] + r2[0], r1[1] + r2[1]))
    if cross == 0 and r1 != r2:
        return _prim2((-r1[1], r1[0]))
    if r1 == r2:
        return _prim2((-r1[1], r1[0]))
    # reflex angle: go the long way round
    mid = _prim2((-(r1[0] + r2[0]), -(r1[1] + r2[1])))
    return mid


def _member(G: HnnGroup, rho: Character) -> bool:
    return bns_membership_f2(G, -rho).inside


def _count_components(pieces: List[SigmaArc]) -> int:
    flags = [p.inside for p in pieces]
    if all(flags):
        return 1
    count = 0
    for i, f in enumerate(flags):
        if f and not flags[i - 1]:
            count += 1
    return count


def sigma_member(G: HnnGroup, rho: Character) -> bool:
    """Whether [rho] lies in Sigma(G) (rank 2)."""
    return _member(G, rho)
