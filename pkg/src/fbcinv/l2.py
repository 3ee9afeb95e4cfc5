"""Leading terms of det A(g;S,s) over Novikov completions.

For an integral direction chi on H_1(G)_f the support value

    m(chi) = min of chi over the L2-torsion polytope
           = (chi-level of the leading term of det A(g;S,s)) - min(0, chi(s))

is read off from a series elimination; the minimizing face comes along for
free as a Minkowski sum of pivot faces.  Thurston widths and the polytope
itself are assembled from these support values.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .groupring import build_A, fox_matrix, s_element
from .hnn import Character, HnnGroup
from .novikov import (
    DEFAULT_MAX_HEIGHT,
    EliminationResult,
    FreeContext,
    GroupContext,
    NoAdmissiblePivot,
    Undetermined,
    eliminate,
)
from .polytopes import (
    IntPolytope,
    OracleFailure,
    VirtualPolytope,
    primitive,
    reconstruct_from_support,
)

Chart = Union[int, str]


class SupportUndetermined(RuntimeError):
    def __init__(self, chi, reason: str):
        super().__init__(f"support value at {list(chi)} undetermined: {reason}")
        self.chi = tuple(chi)
        self.reason = reason


@dataclass
class SupportSample:
    chi: Tuple[int, ...]
    value: int  # min of chi over the L2-torsion polytope
    face: Optional[IntPolytope]  # minimizing face, when it could be named
    chart: str
    method: str  # "elimination" or "fibre-degree"


def _dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


class L2Engine:
    """Caches the matrices A(g;S,s) and support samples for one group."""

    def __init__(self, G: HnnGroup, max_height: int = DEFAULT_MAX_HEIGHT):
        self.G = G
        self.max_height = max_height
        self._A: Dict[Chart, list] = {}
        self._samples: Dict[Tuple[int, ...], SupportSample] = {}
        self._fox_full: Optional[bool] = None
        self._polys: Dict[Tuple[int, int], "L2Result"] = {}

    @property
    def r(self) -> int:
        return self.G.ab.r

    def matrix(self, s: Chart) -> list:
        if s not in self._A:
            self._A[s] = build_A(self.G, s)
        return self._A[s]

    def charts(self, chi: Sequence[int]) -> List[Chart]:
        """Removable columns, best first: chi(s) != 0 preferred."""
        n = self.G.n
        free_zero = not any(chi[:-1])
        gens: List[Chart] = list(range(1, n + 1))
        order: List[Chart] = ["t"] + gens if free_zero else gens + ["t"]

        def key(s):
            v = _dot(chi, self.G.p0(s_element(self.G, s)))
            return 0 if v != 0 else 1

        return sorted(order, key=key)

    def sample_in_chart(self, chi: Sequence[int], s: Chart) -> SupportSample:
        chi = tuple(chi)
        ctx = GroupContext(self.G, chi)
        res: EliminationResult = eliminate(ctx, self.matrix(s), self.max_height)
        ps = self.G.p0(s_element(self.G, s))
        cs = _dot(chi, ps)
        value = res.level - min(0, cs)
        if cs > 0 or not any(ps):
            face = res.face
        elif cs < 0:
            face = res.face.translate(tuple(-x for x in ps))
        else:
            face = None
        return SupportSample(chi, value, face, "t" if s == "t" else str(s), "elimination")

    def sample(self, chi: Sequence[int]) -> SupportSample:
        chi = tuple(int(c) for c in chi)
        hit = self._samples.get(chi)
        if hit is not None:
            return hit
        errors = []
        for s in self.charts(chi):
            try:
                out = self.sample_in_chart(chi, s)
            except (NoAdmissiblePivot, Undetermined, ZeroDivisionError) as exc:
                errors.append(f"chart {s}: {exc}")
                continue
            self._samples[chi] = out
            return out
        if not any(chi[:-1]) and chi[-1] < 0 and self.fox_matrix_full():
            # top t-degree of det(Id - tF) is n when F is full
            c = -chi[-1]
            out = SupportSample(chi, -c * (self.G.n - 1), None, "t", "fibre-degree")
            self._samples[chi] = out
            return out
        raise SupportUndetermined(chi, "; ".join(errors) or "no chart")

    def fox_matrix_full(self, tries: int = 6) -> bool:
        """Certify that F(g) is invertible over a field containing Z[F_n]."""
        if self._fox_full is None:
            self._fox_full = fox_matrix_full(self.G.g.rank, fox_matrix(self.G.g), tries,
                                             self.max_height)
        return self._fox_full

    def value(self, chi: Sequence[int]) -> int:
        return self.sample(chi).value

    # -- derived quantities ---------------------------------------------------------

    def width(self, phi: Union[Character, Sequence]) -> Fraction:
        """Thurston seminorm of phi (rational, any scale)."""
        vals = phi.values if isinstance(phi, Character) else tuple(Fraction(v) for v in phi)
        if not any(vals):
            return Fraction(0)
        chi = primitive(vals)
        k = next(i for i, c in enumerate(chi) if c)
        scale = Fraction(vals[k]) / chi[k]
        neg = tuple(-c for c in chi)
        return -scale * (self.value(chi) + self.value(neg))

    def face(self, chi: Sequence[int], seed: int = 0) -> IntPolytope:
        """Minimizing face of the L2 polytope; perturbs chi when needed."""
        chi = tuple(chi)
        s = self.sample(chi)
        if s.face is not None:
            return s.face
        P = self.polytope(seed=seed).polytope
        return P.face(chi)

    def polytope(self, seed: int = 0, verify_samples: int = 20) -> "L2Result":
        key = (seed, verify_samples)
        if key not in self._polys:
            self._polys[key] = l2_polytope(self, seed=seed, verify_samples=verify_samples)
        return self._polys[key]


def fox_matrix_full(n: int, F, tries: int = 6, max_height: int = DEFAULT_MAX_HEIGHT) -> bool:
    rng = random.Random(12345)
    for _ in range(tries):
        chi = [rng.choice([-1, 1]) * rng.randint(1, 7) for _ in range(n)]
        ctx = FreeContext(n, chi)
        try:
            eliminate(ctx, [[dict(e) for e in row] for row in F], max_height)
            return True
        except (NoAdmissiblePivot, Undetermined, ZeroDivisionError):
            continue
    return False


@dataclass
class L2Result:
    polytope: IntPolytope
    verified: bool
    virtual_only: bool
    notes: List[str] = field(default_factory=list)
    queries: int = 0

    def as_virtual(self) -> VirtualPolytope:
        return VirtualPolytope.of(self.polytope)


def l2_polytope(engine: L2Engine, seed: int = 0, verify_samples: int = 20) -> L2Result:
    def oracle(chi):
        s = engine.sample(chi)
        return Fraction(s.value), (list(s.face.vertices) if s.face is not None else None)

    try:
        rec = reconstruct_from_support(oracle, engine.r, seed=seed, verify_samples=verify_samples)
    except (SupportUndetermined, OracleFailure) as exc:
        raise SupportUndetermined(getattr(exc, "chi", ()), str(exc)) from None
    return L2Result(rec.polytope, rec.verified, rec.virtual_only, rec.notes, rec.queries)


@lru_cache(maxsize=64)
def _engine_cache(g, max_height):
    return L2Engine(HnnGroup(g), max_height)


def engine_for(g, max_height: int = DEFAULT_MAX_HEIGHT) -> L2Engine:
    return _engine_cache(g, max_height)


def thurston_width(g, phi: Character, max_height: int = DEFAULT_MAX_HEIGHT) -> Fraction:
    return engine_for(g, max_height).width(phi)
