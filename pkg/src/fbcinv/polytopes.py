"""Lattice polytopes, formal differences of them, and support-function tools.

Everything is exact: points are int tuples, directions are rational vectors.
Hulls are computed inside the affine hull of the point set, so degenerate
(lower dimensional) polytopes are handled in any ambient rank.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .smith import kernel_rational

Point = Tuple[int, ...]


def _dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def _sub(u: Sequence[int], v: Sequence[int]) -> Point:
    return tuple(a - b for a, b in zip(u, v))


def primitive(v: Sequence) -> Tuple[int, ...]:
    """Primitive integer vector positively proportional to a rational vector."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints) if g else tuple(ints)


# -- affine geometry ----------------------------------------------------------

def _row_basis(vectors: Sequence[Sequence[int]]) -> List[List[Fraction]]:
    """An echelon basis (rational) of the span of ``vectors``."""
    rows = [[Fraction(x) for x in v] for v in vectors]
    basis: List[List[Fraction]] = []
    if not rows:
        return basis
    m = len(rows[0])
    r = 0
    for c in range(m):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        for i in range(r + 1, len(rows)):
            f = rows[i][c] / rows[r][c]
            if f:
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return rows[:r]


def affine_frame(points: Sequence[Point]):
    """Return ``(origin, span_basis, normals)`` of the affine hull.

    ``span_basis`` spans the direction space L, ``normals`` are primitive
    integer vectors spanning its orthogonal complement.
    """
    origin = points[0]
    diffs = [_sub(p, origin) for p in points[1:]]
    basis = _row_basis(diffs)
    r = len(origin)
    if basis:
        normals = [primitive(v) for v in kernel_rational(basis)]
    else:
        normals = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    return origin, basis, normals


def _normal_in_span(basis: Sequence[Sequence[Fraction]], diffs: Sequence[Point]):
    """Vector in span(basis) orthogonal to all ``diffs`` (unique up to scale)."""
    d = len(basis)
    eqs = [[_dot(b, v) for b in basis] for v in diffs]
    ker = kernel_rational(eqs) if eqs else [[Fraction(int(i == 0)) for i in range(d)]]
    if len(ker) != 1:
        return None
    c = ker[0]
    return [sum(c[i] * basis[i][k] for i in range(d)) for k in range(len(basis[0]))]


def _cross(diffs: Sequence[Point]) -> Optional[Point]:
    """Integer normal to r - 1 vectors in Z^r via signed maximal minors."""
    r = len(diffs) + 1
    out = []
    for k in range(r):
        minor = [[row[j] for j in range(r) if j != k] for row in diffs]
        out.append((-1) ** k * _int_det(minor))
    return tuple(out) if any(out) else None


def _int_det(m: List[List[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    return sum((-1) ** j * m[0][j] * _int_det([row[:j] + row[j + 1:] for row in m[1:]])
               for j in range(n) if m[0][j])


def _hull_facets(points: List[Point], basis) -> List[Tuple[Tuple[int, ...], Fraction]]:
    """Facets of a full-dimensional (inside its affine hull) point set.

    Each facet is ``(inward normal, value)`` with normal in the direction
    space; every point satisfies ``normal . x >= value``.
    """
    d = len(basis)
    full = d == len(points[0])
    facets: Dict[Tuple[int, ...], Fraction] = {}
    seen = set()
    for combo in itertools.combinations(points, d):
        diffs = [_sub(p, combo[0]) for p in combo[1:]]
        if full:
            nrm = _cross(diffs)
        else:
            nrm = _normal_in_span(basis, diffs)
            nrm = primitive(nrm) if nrm is not None and any(nrm) else None
        if nrm is None:
            continue
        nrm = primitive(nrm)
        base = _dot(nrm, combo[0])
        if (nrm, base) in seen:
            continue
        seen.add((nrm, base))
        vals = [_dot(nrm, p) for p in points]
        if all(v >= base for v in vals):
            facets[nrm] = Fraction(base)
        elif all(v <= base for v in vals):
            facets[tuple(-x for x in nrm)] = Fraction(-base)
    return list(facets.items())


def hull_vertices(points: Iterable[Sequence[int]]) -> List[Point]:
    pts = sorted(set(tuple(p) for p in points))
    if not pts:
        raise ValueError("polytope needs at least one point")
    if len(pts) <= 2:
        return pts
    origin, basis, _ = affine_frame(pts)
    d = len(basis)
    if d == 0:
        return [pts[0]]
    if d == 1:
        direction = basis[0]
        vals = {p: _dot(direction, p) for p in pts}
        return sorted({min(pts, key=vals.get), max(pts, key=vals.get)})
    if d == 2:
        return _hull_2d(pts, basis)
    facets = _hull_facets(pts, basis)
    out = []
    for p in pts:
        tight = [list(nrm) for nrm, val in facets if _dot(nrm, p) == val]
        if len(_row_basis(tight)) == d:
            out.append(p)
    return out


def _hull_2d(pts: List[Point], basis) -> List[Point]:
    # coordinates inside the plane: dot with the two basis vectors is an
    # injective linear map on the plane (basis is echelon, hence independent)
    u, v = basis
    coords = {p: (_dot(u, p), _dot(v, p)) for p in pts}
    order = sorted(pts, key=lambda p: coords[p])

    def cross(o, a, b):
        (ox, oy), (ax, ay), (bx, by) = coords[o], coords[a], coords[b]
        return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)

    lower: List[Point] = []
    for p in order:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: List[Point] = []
    for p in reversed(order):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return sorted(set(lower[:-1] + upper[:-1]))


def hull_facets(vertices: Sequence[Point]):
    """Inward facet normals of conv(vertices) within its affine hull."""
    pts = list(vertices)
    if len(pts) <= 1:
        return []
    _, basis, _ = affine_frame(pts)
    if len(basis) == 1:
        u = basis[0]
        lo = min(_dot(u, p) for p in pts)
        hi = max(_dot(u, p) for p in pts)
        n = primitive(u)
        return [(n, Fraction(min(_dot(n, p) for p in pts))),
                (tuple(-x for x in n), Fraction(min(-_dot(n, p) for p in pts)))] if lo != hi else []
    return _hull_facets(pts, basis)


# -- polytopes ----------------------------------------------------------------

@dataclass(frozen=True)
class IntPolytope:
    vertices: Tuple[Point, ...]

    def __init__(self, points: Iterable[Sequence[int]]):
        object.__setattr__(self, "vertices", tuple(hull_vertices(points)))

    @classmethod
    def point(cls, r: int, p: Optional[Sequence[int]] = None) -> "IntPolytope":
        return cls([tuple(p) if p is not None else (0,) * r])

    @classmethod
    def segment(cls, a: Sequence[int], b: Sequence[int]) -> "IntPolytope":
        return cls([tuple(a), tuple(b)])

    @property
    def r(self) -> int:
        return len(self.vertices[0])

    @property
    def dim(self) -> int:
        return len(affine_frame(list(self.vertices))[1])

    def is_point(self) -> bool:
        return len(self.vertices) == 1

    def __add__(self, other: "IntPolytope") -> "IntPolytope":
        return minkowski_sum(self, other)

    def translate(self, v: Sequence[int]) -> "IntPolytope":
        return IntPolytope(tuple(a + b for a, b in zip(p, v)) for p in self.vertices)

    def normalized(self) -> "IntPolytope":
        """Translate so that the lexicographically minimal vertex is 0."""
        m = min(self.vertices)
        return self.translate(tuple(-x for x in m))

    def min_value(self, phi: Sequence) -> Fraction:
        return min(Fraction(_dot(phi, p)) for p in self.vertices)

    def max_value(self, phi: Sequence) -> Fraction:
        return max(Fraction(_dot(phi, p)) for p in self.vertices)

    def width(self, phi: Sequence) -> Fraction:
        return self.max_value(phi) - self.min_value(phi)

    def face(self, phi: Sequence) -> "IntPolytope":
        return face_min(self, phi)

    def sorted_vertices(self) -> List[List[int]]:
        return [list(p) for p in sorted(self.vertices)]


def minkowski_sum(P: IntPolytope, Q: IntPolytope) -> IntPolytope:
    if P.r != Q.r:
        raise ValueError(f"rank mismatch: {P.r} vs {Q.r}")
    return IntPolytope(tuple(a + b for a, b in zip(p, q)) for p in P.vertices for q in Q.vertices)


def minkowski_sum_all(polys: Sequence[IntPolytope], r: int) -> IntPolytope:
    out = IntPolytope.point(r)
    for P in polys:
        out = minkowski_sum(out, P)
    return out


def face_min(P: IntPolytope, phi: Sequence) -> IntPolytope:
    m = P.min_value(phi)
    return IntPolytope(p for p in P.vertices if _dot(phi, p) == m)


@dataclass(frozen=True)
class VirtualPolytope:
    plus: IntPolytope
    minus: IntPolytope

    @classmethod
    def zero(cls, r: int) -> "VirtualPolytope":
        return cls(IntPolytope.point(r), IntPolytope.point(r))

    @classmethod
    def of(cls, P: IntPolytope) -> "VirtualPolytope":
        return cls(P, IntPolytope.point(P.r))

    @property
    def r(self) -> int:
        return self.plus.r

    def __add__(self, other: "VirtualPolytope") -> "VirtualPolytope":
        return VirtualPolytope(self.plus + other.plus, self.minus + other.minus)

    def __neg__(self) -> "VirtualPolytope":
        return VirtualPolytope(self.minus, self.plus)

    def __sub__(self, other: "VirtualPolytope") -> "VirtualPolytope":
        return self + (-other)

    def seminorm(self, phi: Sequence) -> Fraction:
        return self.plus.width(phi) - self.minus.width(phi)

    def equals(self, other: "VirtualPolytope") -> bool:
        return polt_equal(self, other)

    def is_polytope(self) -> bool:
        return self.minus.is_point()

    def to_json(self, basis: Sequence[str]) -> str:
        return json.dumps(self.to_dict(basis))

    def to_dict(self, basis: Sequence[str]) -> dict:
        return {
            "basis": list(basis),
            "plus": self.plus.normalized().sorted_vertices(),
            "minus": self.minus.normalized().sorted_vertices(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "VirtualPolytope":
        return cls(IntPolytope(tuple(v) for v in data["plus"]),
                   IntPolytope(tuple(v) for v in data["minus"]))


def polt_equal(X: VirtualPolytope, Y: VirtualPolytope) -> bool:
    """Equality in the group of polytopes up to translation."""
    lhs = (X.plus + Y.minus).normalized()
    rhs = (Y.plus + X.minus).normalized()
    return lhs.vertices == rhs.vertices


def seminorm_eval(X: VirtualPolytope, phi: Sequence) -> Fraction:
    return X.seminorm(phi)


# -- reconstruction from a support oracle --------------------------------------

# oracle(direction) -> (m, witnesses): m = min of the direction over P and
# witnesses a nonempty list of points of P attaining it, or None if the
# oracle cannot name such points for this direction.
SupportOracle = Callable[[Tuple[int, ...]], Tuple[Fraction, Optional[List[Point]]]]


@dataclass
class Reconstruction:
    polytope: IntPolytope
    verified: bool
    virtual_only: bool
    queries: int
    notes: List[str] = field(default_factory=list)


class OracleFailure(RuntimeError):
    pass


def _witness(oracle: SupportOracle, chi: Tuple[int, ...], m: Fraction, rng: random.Random,
             cache: dict) -> List[Point]:
    _, pts = _query(oracle, chi, cache)
    if pts:
        return pts
    # perturb the direction until the returned points attain the minimum of chi
    scale = 8
    for _ in range(12):
        rho = [rng.randint(-3, 3) for _ in chi]
        for sign in (1, -1):
            eps_dir = tuple(scale * c + sign * x for c, x in zip(chi, rho))
            _, cand = _query(oracle, primitive(eps_dir), cache)
            if cand:
                good = [p for p in cand if _dot(chi, p) == m]
                if good:
                    return good
        scale *= 4
    raise OracleFailure(f"no witness points available near direction {chi}")


def _query(oracle: SupportOracle, chi: Tuple[int, ...], cache: dict):
    if chi not in cache:
        cache[chi] = oracle(chi)
    return cache[chi]


def reconstruct_from_support(oracle: SupportOracle, r: int, seed: int = 0,
                             verify_samples: int = 20, max_rounds: int = 200) -> Reconstruction:
    """Recover the polytope whose support data is ``oracle``.

    Starting from witness points, grow a candidate hull Q and query the
    oracle on the normals of Q's affine hull and the inward normals of Q's
    facets.  When no query exposes a point outside Q, Q equals P.
    """
    rng = random.Random(seed)
    cache: dict = {}
    pts: set = set()
    seeds = []
    for i in range(r):
        e = tuple(int(j == i) for j in range(r))
        seeds += [e, tuple(-x for x in e)]
    for _ in range(2 * r):
        seeds.append(primitive([rng.randint(-5, 5) or 1 for _ in range(r)]))
    for chi in seeds:
        m, _ = _query(oracle, chi, cache)
        pts.update(_witness(oracle, chi, m, rng, cache))
    notes: List[str] = []
    virtual = False
    for _ in range(max_rounds):
        Q = IntPolytope(pts)
        verts = list(Q.vertices)
        _, basis, normals = affine_frame(verts)
        dirs = [n for n in normals] + [tuple(-x for x in n) for n in normals]
        dirs += [nrm for nrm, _ in hull_facets(verts)]
        changed = False
        for chi in dirs:
            chi = primitive(chi)
            m, _ = _query(oracle, chi, cache)
            qv = Q.min_value(chi)
            if m < qv:
                new = _witness(oracle, chi, m, rng, cache)
                if not set(new) <= pts:
                    pts.update(new)
                    changed = True
            elif m > qv:
                virtual = True
                notes.append(f"support value above candidate hull at {chi}")
        if not changed:
            break
    else:
        notes.append("round limit reached")
    Q = IntPolytope(pts)
    verified = not virtual
    for _ in range(verify_samples):
        chi = primitive([rng.randint(-9, 9) for _ in range(r)])
        if not any(chi):
            continue
        m, _ = _query(oracle, chi, cache)
        if m != Q.min_value(chi):
            verified = False
            notes.append(f"verification mismatch at {chi}")
    return Reconstruction(Q, verified, virtual, len(cache), notes)
