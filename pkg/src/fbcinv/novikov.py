"""Lazy graded series in the Novikov completion of a group ring.

A character chi (scaled to a primitive integer vector) grades the group; a
series is stored slice by slice, slice ``l`` holding the finitely many terms
of chi-level ``l``.  Slices are produced on demand and memoized, so products
and inverses of series cost only as much as the levels actually inspected.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from .hnn import HnnElement, HnnGroup
from .polytopes import IntPolytope, minkowski_sum_all
from .words import EMPTY, Word, exponent_sums, invert, multiply

DEFAULT_MAX_HEIGHT = 64

Slice = Dict[Hashable, int]


class Undetermined(RuntimeError):
    """Every slice inspected up to the height limit vanished."""

    def __init__(self, max_height: int, what: str = "leading term"):
        super().__init__(f"{what} undetermined up to height {max_height}")
        self.max_height = max_height


class NotInvertible(ArithmeticError):
    """The leading term is not a signed group element."""


class NoAdmissiblePivot(RuntimeError):
    pass


# -- graded ring contexts --------------------------------------------------------

class GroupContext:
    """Z[G] for G = F_n *_g graded by an integral character on H_1(G)_f."""

    def __init__(self, G: HnnGroup, chi: Sequence[int]):
        self.G = G
        self.chi = tuple(int(c) for c in chi)
        self.r = G.ab.r
        self._levels: Dict[HnnElement, int] = {}
        self.one: HnnElement = G.identity

    def mul(self, x: HnnElement, y: HnnElement) -> HnnElement:
        return self.G.mul(x, y)

    def inv(self, x: HnnElement) -> HnnElement:
        return self.G.inverse(x)

    def p0(self, x: HnnElement) -> Tuple[int, ...]:
        return self.G.p0(x)

    def level(self, x: HnnElement) -> int:
        v = self._levels.get(x)
        if v is None:
            v = sum(a * b for a, b in zip(self.chi, self.G.p0(x)))
            self._levels[x] = v
        return v

    def fmt(self, x: HnnElement) -> str:
        return self.G.format(x)


class FreeContext:
    """Z[F_n] graded by an integral character on Z^n."""

    def __init__(self, n: int, chi: Sequence[int]):
        self.n = n
        self.chi = tuple(int(c) for c in chi)
        self.r = n
        self.one: Word = EMPTY

    def mul(self, x: Word, y: Word) -> Word:
        return multiply(x, y)

    def inv(self, x: Word) -> Word:
        return invert(x)

    def p0(self, x: Word) -> Tuple[int, ...]:
        return tuple(exponent_sums(x, self.n))

    def level(self, x: Word) -> int:
        return sum(a * b for a, b in zip(self.chi, exponent_sums(x, self.n)))

    def fmt(self, x: Word) -> str:
        from .words import format_word

        return format_word(x)


def _acc(out: Slice, h, c: int) -> None:
    v = out.get(h, 0) + c
    if v:
        out[h] = v
    else:
        out.pop(h, None)


def slice_mul(ctx, x: Slice, y: Slice) -> Slice:
    out: Slice = {}
    for h1, c1 in x.items():
        for h2, c2 in y.items():
            _acc(out, ctx.mul(h1, h2), c1 * c2)
    return out


# -- series ---------------------------------------------------------------------

class Series:
    """Base class; subclasses implement ``_compute(level)``.

    ``low`` is a level below which every slice vanishes; ``high`` is either
    None (possibly infinite) or a level above which every slice vanishes.
    """

    def __init__(self, ctx, low: int, high: Optional[int]):
        self.ctx = ctx
        self.low = low
        self.high = high
        self._slices: Dict[int, Slice] = {}
        self._lead: Optional[Tuple[int, Slice]] = None

    @property
    def finite(self) -> bool:
        return self.high is not None

    def slice(self, level: int) -> Slice:
        if level < self.low or (self.high is not None and level > self.high):
            return {}
        s = self._slices.get(level)
        if s is None:
            s = self._compute(level)
            self._slices[level] = s
        return s

    def _compute(self, level: int) -> Slice:
        raise NotImplementedError

    def is_exact_zero(self) -> bool:
        """True only when the series is certainly zero (finite and empty)."""
        if self.high is None:
            return False
        if self.high < self.low:
            return True
        return all(not self.slice(l) for l in range(self.low, self.high + 1))

    def leading(self, max_height: int = DEFAULT_MAX_HEIGHT) -> Tuple[int, Slice]:
        """``(level, slice)`` of the first nonzero slice (the term mu)."""
        if self._lead is not None:
            return self._lead
        top = self.low + max_height
        if self.high is not None:
            top = min(top, self.high)
        for l in range(self.low, top + 1):
            s = self.slice(l)
            if s:
                self._lead = (l, s)
                self.low = l
                return self._lead
        if self.high is not None and top >= self.high:
            raise ZeroDivisionError("series is zero")
        raise Undetermined(max_height)

    def to_dict(self, up_to: int) -> Slice:
        out: Slice = {}
        hi = up_to if self.high is None else min(up_to, self.high)
        for l in range(self.low, hi + 1):
            out.update(self.slice(l))
        return out


class FiniteSeries(Series):
    def __init__(self, ctx, elements: Slice):
        by_level: Dict[int, Slice] = {}
        for h, c in elements.items():
            if c:
                by_level.setdefault(ctx.level(h), {})[h] = c
        if by_level:
            super().__init__(ctx, min(by_level), max(by_level))
        else:
            super().__init__(ctx, 0, -1)
        self._slices = by_level

    def _compute(self, level: int) -> Slice:
        return {}


class SumSeries(Series):
    def __init__(self, a: Series, b: Series, sign: int = 1):
        high = None if a.high is None or b.high is None else max(a.high, b.high)
        super().__init__(a.ctx, min(a.low, b.low), high)
        self.a, self.b, self.sign = a, b, sign

    def _compute(self, level: int) -> Slice:
        out = dict(self.a.slice(level))
        for h, c in self.b.slice(level).items():
            _acc(out, h, self.sign * c)
        return out


class ProductSeries(Series):
    def __init__(self, a: Series, b: Series):
        high = None if a.high is None or b.high is None else a.high + b.high
        super().__init__(a.ctx, a.low + b.low, high)
        self.a, self.b = a, b

    def _compute(self, level: int) -> Slice:
        a, b = self.a, self.b
        out: Slice = {}
        lo = a.low
        hi = level - b.low
        if a.high is not None:
            hi = min(hi, a.high)
        if b.high is not None:
            lo = max(lo, level - b.high)
        for i in range(lo, hi + 1):
            sa = a.slice(i)
            if not sa:
                continue
            sb = b.slice(level - i)
            if not sb:
                continue
            for h, c in slice_mul(self.ctx, sa, sb).items():
                _acc(out, h, c)
        return out


class InverseSeries(Series):
    """Inverse of a series whose leading slice is a signed group element."""

    def __init__(self, u: Series, max_height: int = DEFAULT_MAX_HEIGHT):
        L, lead = u.leading(max_height)
        if len(lead) != 1 or abs(next(iter(lead.values()))) != 1:
            raise NotInvertible("leading term is not a signed group element")
        (h, eps), = lead.items()
        super().__init__(u.ctx, -L, None)
        self.u = u
        self.L = L
        self.eps = eps
        self.h_inv = u.ctx.inv(h)

    def _compute(self, m: int) -> Slice:
        ctx, u, L = self.ctx, self.u, self.L
        acc: Slice = {}
        if m + L == 0:
            acc[ctx.one] = 1
        # subtract sum_{l > L} u_l v_{m+L-l}; v has nothing below -L
        top = m + 2 * L
        if u.high is not None:
            top = min(top, u.high)
        for l in range(L + 1, top + 1):
            ul = u.slice(l)
            if not ul:
                continue
            vk = self.slice(m + L - l)
            if not vk:
                continue
            for h, c in slice_mul(ctx, ul, vk).items():
                _acc(acc, h, -c)
        out: Slice = {}
        for h, c in acc.items():
            _acc(out, ctx.mul(self.h_inv, h), self.eps * c)
        return out


def embed(ctx, x: Slice) -> Series:
    return FiniteSeries(ctx, x)


def invert_series(x: Series, max_height: int = DEFAULT_MAX_HEIGHT) -> Series:
    L, lead = x.leading(max_height)
    if x.finite and x.high == L and len(lead) == 1:
        (h, c), = lead.items()
        if abs(c) == 1:
            return FiniteSeries(x.ctx, {x.ctx.inv(h): c})
    return InverseSeries(x, max_height)


def mu(x: Series, max_height: int = DEFAULT_MAX_HEIGHT) -> Slice:
    return x.leading(max_height)[1]


def is_unit_slice(s: Slice) -> bool:
    return len(s) == 1 and abs(next(iter(s.values()))) == 1


# -- elimination -------------------------------------------------------------------

@dataclass
class Pivot:
    row: int
    col: int
    level: int
    lead: Slice
    unit: bool
    rule: str  # "single" (lone entry in a row/column), "unit", or "final"


@dataclass
class EliminationResult:
    level: int
    face: IntPolytope
    pivots: List[Pivot]

    @property
    def all_units(self) -> bool:
        return all(p.unit for p in self.pivots)


def _lead_face(ctx, lead: Slice) -> IntPolytope:
    return IntPolytope(ctx.p0(h) for h in lead)


def eliminate(ctx, matrix: Sequence[Sequence[Slice]],
              max_height: int = DEFAULT_MAX_HEIGHT) -> EliminationResult:
    """Leading level and face of the Dieudonne determinant of ``matrix``.

    Entries are finite group ring elements.  Pivots are taken on entries that
    are alone in their row or column, or whose leading term is a signed group
    element; Schur complements are formed as lazy series.
    """
    n = len(matrix)
    rows = list(range(n))
    cols = list(range(n))
    M: Dict[Tuple[int, int], Optional[Series]] = {}
    for i in range(n):
        for j in range(n):
            e = matrix[i][j]
            M[i, j] = FiniteSeries(ctx, e) if e else None
    pivots: List[Pivot] = []

    def nonzero(i, j) -> bool:
        s = M[i, j]
        if s is None:
            return False
        if s.finite and s.is_exact_zero():
            M[i, j] = None
            return False
        return True

    while rows:
        if len(rows) == 1:
            i, j = rows[0], cols[0]
            if not nonzero(i, j):
                raise ZeroDivisionError("matrix is singular")
            L, lead = M[i, j].leading(max_height)
            pivots.append(Pivot(i, j, L, lead, is_unit_slice(lead), "final"))
            break
        choice = _lone_entry(rows, cols, nonzero)
        if choice is not None:
            i, j = choice
            L, lead = M[i, j].leading(max_height)
            pivots.append(Pivot(i, j, L, lead, is_unit_slice(lead), "single"))
            rows.remove(i)
            cols.remove(j)
            continue
        unit = _find_unit(M, rows, cols, nonzero, max_height)
        if unit is None:
            raise NoAdmissiblePivot(f"no admissible pivot in a {len(rows)}x{len(rows)} block")
        p, q, L, lead = unit
        pivots.append(Pivot(p, q, L, lead, True, "unit"))
        d_inv = invert_series(M[p, q], max_height)
        for i in rows:
            if i == p or not nonzero(i, q):
                continue
            f = ProductSeries(M[i, q], d_inv)
            for j in cols:
                if j == q or not nonzero(p, j):
                    continue
                upd = ProductSeries(f, M[p, j])
                M[i, j] = SumSeries(M[i, j], upd, -1) if nonzero(i, j) else \
                    SumSeries(FiniteSeries(ctx, {}), upd, -1)
        rows.remove(p)
        cols.remove(q)
    level = sum(pv.level for pv in pivots)
    face = minkowski_sum_all([_lead_face(ctx, pv.lead) for pv in pivots], ctx.r)
    return EliminationResult(level, face, pivots)


def _lone_entry(rows, cols, nonzero):
    for i in rows:
        nz = [j for j in cols if nonzero(i, j)]
        if len(nz) == 1:
            return i, nz[0]
        if not nz:
            raise ZeroDivisionError("matrix has a zero row")
    for j in cols:
        nz = [i for i in rows if nonzero(i, j)]
        if len(nz) == 1:
            return nz[0], j
        if not nz:
            raise ZeroDivisionError("matrix has a zero column")
    return None


def _find_unit(M, rows, cols, nonzero, max_height):
    cands = [(i, j) for i in rows for j in cols if nonzero(i, j)]
    # finite entries first, and among them the ones with fewest terms
    def cost(ij):
        s = M[ij]
        return (0, sum(len(s.slice(l)) for l in range(s.low, s.high + 1))) if s.finite else (1, 0)

    cands.sort(key=cost)
    for ij in cands:
        s = M[ij]
        try:
            L, lead = s.leading(max_height)
        except (Undetermined, ZeroDivisionError):
            continue
        if is_unit_slice(lead):
            return ij[0], ij[1], L, lead
    return None


def matrix_invertible(ctx, matrix, max_height: int = DEFAULT_MAX_HEIGHT) -> str:
    """``'yes'``, ``'no'`` or ``'unknown'``: invertibility over the completion."""
    try:
        res = eliminate(ctx, matrix, max_height)
    except (Undetermined, NoAdmissiblePivot):
        return "unknown"
    except ZeroDivisionError:
        return "no"
    return "yes" if res.all_units else "no"
