"""Executable acceptance checks, shared by the test suite and ``fbcinv selftest``.

Each ``criterion_<k>`` returns a :class:`CriterionResult`; nothing here is
tolerant: every comparison is an exact integer or rational equality.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

from .alexander import alexander_norm, alexander_polynomial
from .corpus import (
    UPG_CORPUS,
    named,
    random_direction,
    random_injective,
    random_word,
)
from .groupring import gr_multiply
from .hnn import Character, HnnGroup
from .l2 import L2Engine, SupportUndetermined
from .laurent import LaurentPoly, bareiss_det, cofactor_det, from_terms
from .novikov import (
    FiniteSeries,
    GroupContext,
    InverseSeries,
    NoAdmissiblePivot,
    ProductSeries,
    Undetermined,
    mu,
    slice_mul,
)
from .polytopes import IntPolytope, VirtualPolytope, polt_equal
from .bns import bns_components, sigma_member
from .upg import parse_certificate, upg_sigma, upg_torsion_polytope, verify_certificate
from .words import fundamental_formula_check


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    seconds: float = 0.0
    failures: List[str] = field(default_factory=list)
    info: List[str] = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f": {self.failures[0]}" if self.failures else ""
        return f"[{status}] criterion {self.number} ({self.title}) {self.seconds:.2f}s{extra}"


class _Check:
    def __init__(self, number: int, title: str, budget: float):
        self.result = CriterionResult(number, title, True)
        self.budget = budget
        self._start = time.perf_counter()

    def expect(self, ok: bool, message: str) -> bool:
        if not ok:
            self.result.failures.append(message)
        return ok

    def note(self, message: str) -> None:
        self.result.info.append(message)

    def finish(self) -> CriterionResult:
        res = self.result
        res.seconds = time.perf_counter() - self._start
        if res.seconds > self.budget:
            res.failures.append(f"took {res.seconds:.1f}s, budget {self.budget:.0f}s")
        res.passed = not res.failures
        return res


def _same_up_to_translation(P: IntPolytope, vertices) -> bool:
    return P.normalized() == IntPolytope(vertices).normalized()


def _reflect(P: IntPolytope) -> IntPolytope:
    return IntPolytope([tuple(-x for x in v) for v in P.vertices])


# -- 1: polytopes of the worked examples ----------------------------------------------

def criterion_1() -> CriterionResult:
    chk = _Check(1, "L2 polytopes of id, conjugation, g3", 60.0)
    for n in (2, 3, 4):
        t0 = time.perf_counter()
        res = L2Engine(HnnGroup(named(f"id{n}"))).polytope()
        dt = time.perf_counter() - t0
        expected = [(0,) * (n + 1), (0,) * n + (n - 1,)]
        chk.expect(res.verified, f"id{n}: reconstruction not verified")
        chk.expect(_same_up_to_translation(res.polytope, expected),
                   f"id{n}: got {res.polytope.sorted_vertices()}")
        chk.expect(dt < 10, f"id{n}: {dt:.1f}s")
    for k in (1, 2, 3, -1, -2):
        t0 = time.perf_counter()
        res = L2Engine(HnnGroup(named(f"conj{k}"))).polytope()
        dt = time.perf_counter() - t0
        seg = [(0, 0, 0), (k, 0, 1)]
        P = res.polytope
        ok = _same_up_to_translation(P, seg) or _same_up_to_translation(_reflect(P), seg)
        chk.expect(res.verified, f"conj{k}: reconstruction not verified")
        chk.expect(ok, f"conj{k}: got {P.sorted_vertices()}")
        chk.expect(dt < 10, f"conj{k}: {dt:.1f}s")
    t0 = time.perf_counter()
    res = L2Engine(HnnGroup(named("g3"))).polytope()
    dt = time.perf_counter() - t0
    chk.expect(res.verified, "g3: reconstruction not verified")
    chk.expect(_same_up_to_translation(res.polytope, [(0, 0), (2, 1), (0, 2)]),
               f"g3: got {res.polytope.sorted_vertices()}")
    chk.expect(dt < 10, f"g3: {dt:.1f}s")
    return chk.finish()


# -- 2: Alexander polynomials ---------------------------------------------------------

def criterion_2() -> CriterionResult:
    chk = _Check(2, "Alexander polynomials", 1.0)
    cases = {
        "id2": from_terms([((0, 0, 1), 1), ((0, 0, 0), -1)], 3),
        "g3": from_terms([((0, 2), 1), ((0, 1), 1), ((1, 1), 1), ((2, 1), -1), ((0, 0), 1)], 2),
        "ba": from_terms([((0, 1), 1), ((0, 0), -1)], 2),
    }
    for name, expected in cases.items():
        res = alexander_polynomial(HnnGroup(named(name)))
        chk.expect(res.delta.equal_up_to_unit(expected),
                   f"{name}: got {res.delta!r}")
    res = alexander_polynomial(HnnGroup(named("g3")))
    newton = res.polytope.plus
    chk.expect(_same_up_to_translation(newton, [(0, 0), (2, 1), (0, 2)]),
               f"g3 Newton polytope {newton.sorted_vertices()}")
    chk.expect(res.polytope.minus.is_point(), "g3 Alexander polytope is virtual")
    return chk.finish()


# -- 3: Thurston widths ---------------------------------------------------------------

def criterion_3() -> CriterionResult:
    chk = _Check(3, "Thurston widths", 60.0)
    eng = L2Engine(HnnGroup(named("g3")))
    for phi, want in (((0, 1), 2), ((1, 0), 2)):
        w = eng.width(Character(phi))
        chk.expect(w == want, f"g3 width at {phi}: {w}, expected {want}")
    for n in (2, 3, 4):
        eng = L2Engine(HnnGroup(named(f"id{n}")))
        psi = Character((0,) * n + (1,))
        w = eng.width(psi)
        chk.expect(w == n - 1, f"id{n} width at psi: {w}, expected {n - 1}")
    return chk.finish()


# -- 4: BNS decisions -----------------------------------------------------------------

def _conj_cert(k: int) -> str:
    c = ("A" if k > 0 else "a") * abs(k)
    return (f"conj: {c}\n" if k else "") + "(case1 (leaf a) (leaf b))"


def criterion_4(seed: int = 0, rays: int = 200) -> CriterionResult:
    chk = _Check(4, "BNS components and ray tests", 30.0)
    rng = random.Random(seed)
    for k in (0, 1, 2, -1):
        g = named("id2") if k == 0 else named(f"conj{k}")
        G = HnnGroup(g)
        cert = parse_certificate(_conj_cert(k), 2)
        chk.expect(verify_certificate(g, cert).ok, f"k={k}: certificate rejected")
        report = bns_components(G)
        u, v = report.plane

        def lift(ray):
            return Character(tuple(ray[0] * a + ray[1] * b for a, b in zip(u, v)))

        bad_rays = []
        for piece in report.pieces:
            phi = lift(piece.sample)
            on_wall = phi.t_value + k * phi.values[0] == 0
            if piece.inside == on_wall:
                bad_rays.append((piece.kind, piece.sample, piece.inside))
            chk.expect(piece.inside == upg_sigma(G, cert, phi),
                       f"k={k}: bns-components and upg-sigma disagree at {piece.sample}")
        walls = [p for p in report.pieces if not p.inside]
        chk.expect(not bad_rays, f"k={k}: unexpected membership {bad_rays}")
        chk.expect(len(walls) == 2 and all(p.kind == "ray" for p in walls),
                   f"k={k}: complement is {[(p.kind, p.sample) for p in walls]}")
        chk.expect(0 < report.components < 10 ** 6, f"k={k}: {report.components} components")
        chk.note(f"conjugation by a^{k}: {report.components} components")
        r = G.ab.r
        for i in range(rays // 4):
            if i % 5 == 0:
                # force a ray on the wall phi(t) + k phi(a) = 0
                a, b = rng.randint(-4, 4), rng.randint(-4, 4)
                vals = (a, b, -k * a)
                if not any(vals):
                    vals = (1, 0, -k)
            else:
                vals = random_direction(rng, r)
            phi = Character(vals)
            got = sigma_member(G, phi)
            want = upg_sigma(G, cert, phi)
            chk.expect(got == want, f"k={k}: bns-test and upg-sigma disagree at {vals}")
    return chk.finish()


# -- 5: Alexander norm versus Thurston norm --------------------------------------------

def criterion_5(seed: int = 0, maps: int = 20, directions: int = 50) -> CriterionResult:
    chk = _Check(5, "delta_0 <= Thurston norm on random maps", 300.0)
    rng = random.Random(seed)
    violations = 0
    for _ in range(maps):
        g = random_injective(rng, 2, 4)
        G = HnnGroup(g)
        r = G.ab.r
        eng = L2Engine(G)
        alex = alexander_polynomial(G)
        for _ in range(directions):
            vec = random_direction(rng, r)
            den = rng.randint(1, 4)
            phi = Character(tuple(Fraction(x, den) for x in vec))
            try:
                thurston = eng.width(phi)
            except SupportUndetermined as exc:
                chk.expect(False, f"{g.format()!r}: {exc}")
                continue
            delta = alexander_norm(alex, phi)
            lhs = delta if r >= 2 else delta - abs(phi.t_value)
            if lhs > thurston:
                violations += 1
                chk.expect(False, f"{g.images}: phi={vec}/{den}: {lhs} > {thurston}")
    chk.note(f"{violations} violations")
    return chk.finish()


# -- 6: UPG corpus --------------------------------------------------------------------

def _hyperplane_direction(rng: random.Random, v) -> Tuple[int, ...]:
    """A random integral phi with phi(v) = 0."""
    r = len(v)
    k = next(i for i, x in enumerate(v) if x)
    while True:
        w = list(random_direction(rng, r))
        w = [x * v[k] for x in w]
        dot = sum(a * b for a, b in zip(w, v))
        w[k] -= dot // v[k]
        if any(w):
            return tuple(w)


def criterion_6(seed: int = 0, directions: int = 50) -> CriterionResult:
    chk = _Check(6, "UPG corpus equalities", 300.0)
    rng = random.Random(seed)
    for ex in UPG_CORPUS:
        g = ex.map()
        G = HnnGroup(g)
        cert = parse_certificate(ex.cert, g.rank)
        ver = verify_certificate(g, cert)
        if not chk.expect(ver.ok, f"{ex.name}: {ver.problems}"):
            continue
        upg = upg_torsion_polytope(G, cert)
        eng = L2Engine(G)
        l2 = eng.polytope()
        alex = alexander_polynomial(G)
        r = G.ab.r
        if g.rank == 2:
            chk.expect(polt_equal(VirtualPolytope.of(upg.polytope), l2.as_virtual()),
                       f"{ex.name}: UPG {upg.polytope.sorted_vertices()} "
                       f"vs L2 {l2.polytope.sorted_vertices()}")
        walls = [v for v in upg.vectors if any(v)]
        for i in range(directions):
            if walls and i % 5 == 0:
                chi = _hyperplane_direction(rng, walls[rng.randrange(len(walls))])
            else:
                chi = random_direction(rng, r)
            phi = Character(chi)
            a_w = alexander_norm(alex, phi)
            l_w = eng.width(phi)
            chk.expect(a_w == l_w, f"{ex.name}: widths at {chi}: Alexander {a_w}, L2 {l_w}")
            z_w = sum((abs(phi(v)) for v in upg.vectors), Fraction(0))
            chk.expect(z_w == l_w, f"{ex.name}: zonotope width {z_w} != {l_w} at {chi}")
            inside = upg_sigma(G, cert, phi)
            face_point = l2.polytope.face(chi).is_point()
            chk.expect(inside == face_point,
                       f"{ex.name}: Sigma membership {inside} but face is_point {face_point} at {chi}")
            chk.expect(inside == upg_sigma(G, cert, -phi), f"{ex.name}: Sigma != -Sigma at {chi}")
    return chk.finish()


# -- 7: property suites ---------------------------------------------------------------

def _random_polytope(rng: random.Random, r: int) -> IntPolytope:
    pts = [tuple(rng.randint(-3, 3) for _ in range(r)) for _ in range(rng.randint(1, 5))]
    return IntPolytope(pts)


def _random_laurent(rng: random.Random, r: int) -> LaurentPoly:
    terms = [(tuple(rng.randint(-1, 2) for _ in range(r)), rng.randint(-3, 3))
             for _ in range(rng.randint(0, 3))]
    return from_terms(terms, r)


def _random_gr(rng: random.Random, G: HnnGroup, size: int) -> Dict:
    out: Dict = {}
    for _ in range(size):
        x = G.word(random_word(rng, G.n, 3))
        for _ in range(rng.randint(0, 2)):
            x = G.mul(x, G.t if rng.random() < 0.5 else G.t_inv)
        c = rng.choice([-2, -1, 1, 1, 2])
        out[x] = out.get(x, 0) + c
        if out[x] == 0:
            del out[x]
    return out or {G.identity: 1}


def criterion_7(seed: int = 0) -> CriterionResult:
    chk = _Check(7, "property suites", 300.0)
    rng = random.Random(seed)

    # Fox calculus
    for _ in range(1000):
        n = rng.randint(1, 4)
        w = random_word(rng, n, 16, min_len=0)
        chk.expect(fundamental_formula_check(w, n), f"fundamental formula fails on {w}")

    # polytope group
    for _ in range(500):
        r = rng.randint(1, 3)
        P, Q = _random_polytope(rng, r), _random_polytope(rng, r)
        vp, vq = VirtualPolytope.of(P), VirtualPolytope.of(Q)
        chk.expect(polt_equal((vp + vq) - vq, vp), f"cancellation fails for {P.vertices}, {Q.vertices}")
        phi = random_direction(rng, r)
        chk.expect((P + Q).width(phi) == P.width(phi) + Q.width(phi),
                   f"norm additivity fails for {P.vertices}, {Q.vertices}")
        chk.expect((P + Q).face(phi) == P.face(phi) + Q.face(phi),
                   f"face additivity fails for {P.vertices}, {Q.vertices}")

    # Novikov leading terms
    groups = [HnnGroup(named("g3")), HnnGroup(named("ba")), HnnGroup(named("conj1"))]
    for _ in range(60):
        G = groups[rng.randrange(len(groups))]
        chi = random_direction(rng, G.ab.r, 3)
        ctx = GroupContext(G, chi)
        x, y = _random_gr(rng, G, 4), _random_gr(rng, G, 4)
        mx = mu(FiniteSeries(ctx, x))
        my = mu(FiniteSeries(ctx, y))
        mxy = mu(FiniteSeries(ctx, gr_multiply(G, x, y)))
        chk.expect(slice_mul(ctx, mx, my) == mxy, f"mu not multiplicative at chi={chi}")
        if G is groups[0]:
            # g3 grows exponentially; deep inverse expansions are done over the others
            continue
        # a unit-led series: its inverse satisfies both unit laws to height 20
        lead_level = min(ctx.level(h) for h in x)
        h0 = next(h for h in x if ctx.level(h) == lead_level)
        u = {h0: 1}
        for h, c in x.items():
            if ctx.level(h) > lead_level:
                u[h] = c
        us = FiniteSeries(ctx, u)
        inv = InverseSeries(us, 64)
        for prod in (ProductSeries(us, inv), ProductSeries(inv, us)):
            for m in range(0, 21):
                want = {G.identity: 1} if m == 0 else {}
                got = prod.slice(prod.low + m) if prod.low == 0 else None
                if got is None:
                    chk.expect(False, f"product of u and its inverse starts at level {prod.low}")
                    break
                if got != want:
                    chk.expect(False, f"unit law fails at height {m} for chi={chi}")
                    break

    # determinants
    for _ in range(100):
        r = rng.randint(1, 3)
        M = [[_random_laurent(rng, r) for _ in range(3)] for _ in range(3)]
        chk.expect(bareiss_det(M, r) == cofactor_det(M, r), "Bareiss != cofactor")

    # chart independence of support values
    compared = 0
    attempts = 0
    while compared < 50 and attempts < 2000:
        attempts += 1
        g = random_injective(rng, 2, 3)
        G = HnnGroup(g)
        eng = L2Engine(G)
        chi = random_direction(rng, G.ab.r, 4)
        charts = eng.charts(chi)
        if len(charts) < 2:
            continue
        s1, s2 = rng.sample(charts, 2)
        try:
            w1 = eng.sample_in_chart(chi, s1).value + eng.sample_in_chart(tuple(-c for c in chi), s1).value
            w2 = eng.sample_in_chart(chi, s2).value + eng.sample_in_chart(tuple(-c for c in chi), s2).value
        except (NoAdmissiblePivot, Undetermined, ZeroDivisionError):
            continue
        compared += 1
        chk.expect(w1 == w2, f"{g.images}: chart {s1} gives {w1}, chart {s2} gives {w2} at {chi}")
    chk.expect(compared == 50, f"only {compared} chart pairs could be compared")
    return chk.finish()


CRITERIA: Tuple[Callable[[], CriterionResult], ...] = (
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
)


def run_all(report: Callable[[str], None] = print) -> List[CriterionResult]:
    out = []
    for fn in CRITERIA:
        res = fn()
        report(res.line())
        out.append(res)
    return out
