"""Alexander polynomial, polytope and norm of G = F_n *_g."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Union

from .groupring import build_A, project_matrix, s_element
from .hnn import Character, HnnGroup
from .laurent import LaurentPoly, NotDivisible, bareiss_det, variable_names
from .polytopes import IntPolytope, VirtualPolytope
from .words import letter_name


@dataclass(frozen=True)
class AlexanderResult:
    delta: LaurentPoly
    polytope: VirtualPolytope
    b1: int
    removed: str  # name of the column removed from A(g;S)

    def text(self, labels) -> str:
        return self.delta.format(variable_names(labels))


def alexander_candidates(G: HnnGroup) -> List[Union[int, str]]:
    """Columns that may be removed: t first, then generators with p0(s) != 0."""
    out: List[Union[int, str]] = ["t"]
    for j in range(1, G.n + 1):
        if any(G.ab.gen_images[j - 1]):
            out.append(j)
    return out


def alexander_polynomial(G: HnnGroup, s: Optional[Union[int, str]] = None) -> AlexanderResult:
    ab = G.ab
    r = ab.r
    if s is None:
        s = "t"
    A = project_matrix(G, build_A(G, s))
    det = bareiss_det(A, r)
    if r == 1:
        if s != "t":
            raise ValueError("with b1 = 1 only the column of t may be removed")
        delta = det
    else:
        e = G.p0(s_element(G, s))
        if not any(e):
            raise ValueError("the removed generator must have nonzero image in H_1(G)_f")
        divisor = LaurentPoly.monomial(e) - LaurentPoly.const(1, r)
        try:
            delta = det.exact_div(divisor)
        except NotDivisible as exc:
            raise ArithmeticError(f"det p0(A) is not divisible by p0(s) - 1: {exc}") from None
    delta = delta.normalized()
    if delta:
        poly = VirtualPolytope(IntPolytope(delta.support()), IntPolytope.point(r))
    else:
        poly = VirtualPolytope.zero(r)
    name = "t" if s in ("t", 0) else letter_name(s)
    return AlexanderResult(delta, poly, r, name)


def alexander_norm(res: AlexanderResult, phi: Character) -> Fraction:
    return res.polytope.seminorm(phi.values)
