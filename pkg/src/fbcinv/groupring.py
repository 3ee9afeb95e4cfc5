"""Group ring elements of G, Fox matrices and the matrix A(g;S,s).

An element of Z[G] is a dict from reduced HnnElement to a nonzero int.
Matrices are lists of rows and act on row vectors from the right.
"""
from __future__ import annotations

from typing import Dict, List, Union

from .hnn import HnnElement, HnnGroup
from .laurent import LaurentPoly
from .words import Endomorphism, IntegralFn, fox_derivative

GroupRingElement = Dict[HnnElement, int]
GRMatrix = List[List[GroupRingElement]]

T_GENERATOR = 0  # index used for the stable letter when choosing a column


def _acc(out: GroupRingElement, h: HnnElement, c: int) -> None:
    v = out.get(h, 0) + c
    if v:
        out[h] = v
    else:
        out.pop(h, None)


def gr_add(*xs: GroupRingElement) -> GroupRingElement:
    out: GroupRingElement = {}
    for x in xs:
        for h, c in x.items():
            _acc(out, h, c)
    return out


def gr_neg(x: GroupRingElement) -> GroupRingElement:
    return {h: -c for h, c in x.items()}


def gr_sub(x: GroupRingElement, y: GroupRingElement) -> GroupRingElement:
    return gr_add(x, gr_neg(y))


def gr_scale(x: GroupRingElement, k: int) -> GroupRingElement:
    return {h: c * k for h, c in x.items()} if k else {}


def gr_multiply(G: HnnGroup, x: GroupRingElement, y: GroupRingElement) -> GroupRingElement:
    out: GroupRingElement = {}
    for h1, c1 in x.items():
        for h2, c2 in y.items():
            _acc(out, G.mul(h1, h2), c1 * c2)
    return out


def gr_element(G: HnnGroup, h: HnnElement, c: int = 1) -> GroupRingElement:
    return {G.normalize(*h): c} if c else {}


def gr_one(G: HnnGroup) -> GroupRingElement:
    return {G.identity: 1}


def from_free(x: IntegralFn) -> GroupRingElement:
    """Embed Z[F_n] into Z[G]."""
    return {HnnElement(0, w, 0): c for w, c in x.items() if c}


def fox_matrix(g: Endomorphism) -> List[List[IntegralFn]]:
    """F(g)_{ij} = d g(s_i) / d s_j, entries in Z[F_n]."""
    return [[fox_derivative(g.images[i], j + 1) for j in range(g.rank)] for i in range(g.rank)]


def build_A_full(G: HnnGroup) -> GRMatrix:
    """The n x (n+1) matrix (Id - t F(g) | s_i - 1)."""
    n = G.n
    F = fox_matrix(G.g)
    t = {G.t: 1}
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            entry = gr_neg(gr_multiply(G, t, from_free(F[i][j])))
            if i == j:
                entry = gr_add(entry, gr_one(G))
            row.append(entry)
        row.append(gr_sub({G.gen(i + 1): 1}, gr_one(G)))
        rows.append(row)
    return rows


def column_index(n: int, s: Union[int, str]) -> int:
    """Column of A(g;S) belonging to ``s`` (a generator index, 0 or 't' for t)."""
    if s in (T_GENERATOR, "t"):
        return n
    if isinstance(s, int) and 1 <= s <= n:
        return s - 1
    raise ValueError(f"{s!r} is not one of s_1..s_{n}, t")


def build_A(G: HnnGroup, s: Union[int, str] = "t") -> GRMatrix:
    """A(g;S,s): the full matrix with the column of ``s`` removed."""
    k = column_index(G.n, s)
    return [row[:k] + row[k + 1:] for row in build_A_full(G)]


def chain_identity_holds(G: HnnGroup) -> bool:
    """Check A(g;S) (s_1-1, ..., s_n-1, t-1)^T = 0 exactly."""
    A = build_A_full(G)
    col = [gr_sub({G.gen(i + 1): 1}, gr_one(G)) for i in range(G.n)]
    col.append(gr_sub({G.t: 1}, gr_one(G)))
    for row in A:
        total = gr_add(*(gr_multiply(G, a, c) for a, c in zip(row, col)))
        if total:
            return False
    return True


def project_p0(G: HnnGroup, x: GroupRingElement) -> LaurentPoly:
    out: Dict[tuple, int] = {}
    for h, c in x.items():
        e = G.p0(h)
        out[e] = out.get(e, 0) + c
    return LaurentPoly(out, G.ab.r)


def project_matrix(G: HnnGroup, m: GRMatrix) -> List[List[LaurentPoly]]:
    return [[project_p0(G, e) for e in row] for row in m]


def s_element(G: HnnGroup, s: Union[int, str]) -> HnnElement:
    return G.t if s in (T_GENERATOR, "t") else G.gen(s)

