"""Reduced words in a free group, endomorphisms and Fox calculus.

A word is a tuple of nonzero ints: ``i`` stands for the generator s_i and
``-i`` for its inverse (generators are 1-based). Words are always kept freely
reduced.
"""
from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Dict, Iterable, Sequence, Tuple

Word = Tuple[int, ...]
IntegralFn = Dict[Word, int]  # finitely supported element of Z[F_n]

MAX_RANK = 19  # a..s; the letter t is reserved for the stable letter

EMPTY: Word = ()


class WordSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class RankError(ValueError):
    pass


def reduce_word(letters: Iterable[int]) -> Word:
    out: list = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def multiply(u: Word, v: Word) -> Word:
    """Freely reduced product ``u*v``."""
    k = 0
    m = min(len(u), len(v))
    while k < m and u[len(u) - 1 - k] == -v[k]:
        k += 1
    return u[: len(u) - k] + v[k:]


def invert(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


def power(w: Word, k: int) -> Word:
    if k < 0:
        w, k = invert(w), -k
    out = EMPTY
    for _ in range(k):
        out = multiply(out, w)
    return out


def conjugate(c: Word, w: Word) -> Word:
    """``c w c^-1``."""
    return multiply(multiply(c, w), invert(c))


def check_rank(w: Word, n: int) -> None:
    for x in w:
        if not 1 <= abs(x) <= n:
            raise RankError(f"generator index {abs(x)} outside rank {n}")


def letter_name(x: int) -> str:
    ch = string.ascii_lowercase[abs(x) - 1]
    return ch if x > 0 else ch.upper()


def format_word(w: Word, empty: str = "1") -> str:
    if not w:
        return empty
    return " ".join(letter_name(x) for x in w)


def parse_word(text: str, n: int) -> Word:
    """Parse whitespace separated letters; ``A`` is the inverse of ``a``.

    A token may also be a run of letters (``abA``) or the identity ``1``.
    """
    if n > MAX_RANK:
        raise RankError(f"rank {n} exceeds the supported maximum {MAX_RANK}")
    letters = []
    for pos, ch in enumerate(text):
        if ch.isspace():
            continue
        if ch == "1":
            before = text[pos - 1] if pos > 0 else " "
            after = text[pos + 1] if pos + 1 < len(text) else " "
            if before.isspace() and after.isspace():
                continue
            raise WordSyntaxError("identity '1' must be a separate token", pos)
        if ch not in string.ascii_letters:
            raise WordSyntaxError(f"unexpected character {ch!r}", pos)
        idx = string.ascii_lowercase.index(ch.lower()) + 1
        if idx > n:
            raise RankError(f"generator {ch!r} out of range for rank {n} (at position {pos})")
        letters.append(idx if ch.islower() else -idx)
    return reduce_word(letters)


@dataclass(frozen=True)
class Endomorphism:
    rank: int
    images: Tuple[Word, ...]

    def __post_init__(self):
        if self.rank < 1:
            raise RankError("rank must be positive")
        if len(self.images) != self.rank:
            raise RankError(f"expected {self.rank} images, got {len(self.images)}")
        for w in self.images:
            check_rank(w, self.rank)
            if reduce_word(w) != tuple(w):
                raise ValueError(f"image {w} is not reduced")

    def __call__(self, w: Word) -> Word:
        out = EMPTY
        for x in w:
            img = self.images[abs(x) - 1]
            out = multiply(out, img if x > 0 else invert(img))
        return out

    def compose(self, other: "Endomorphism") -> "Endomorphism":
        """``self o other``."""
        return Endomorphism(self.rank, tuple(self(w) for w in other.images))

    def postconjugate(self, c: Word) -> "Endomorphism":
        """The map ``w -> c g(w) c^-1``."""
        return Endomorphism(self.rank, tuple(conjugate(c, w) for w in self.images))

    def abelianized(self) -> list:
        """Integer matrix whose i-th row is the exponent sum vector of g(s_i)."""
        return [exponent_sums(w, self.rank) for w in self.images]

    def format(self) -> str:
        lines = [f"rank: {self.rank}"]
        for i, w in enumerate(self.images, 1):
            lines.append(f"{letter_name(i)} -> {format_word(w, empty='')}".rstrip())
        return "\n".join(lines) + "\n"


def identity_map(n: int) -> Endomorphism:
    return Endomorphism(n, tuple((i,) for i in range(1, n + 1)))


def parse_endomorphism(text: str) -> Endomorphism:
    rank = None
    images: Dict[int, Word] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("rank:"):
            try:
                rank = int(line[5:].strip())
            except ValueError:
                raise ValueError(f"line {lineno}: bad rank declaration {line!r}") from None
            continue
        if rank is None:
            raise ValueError(f"line {lineno}: 'rank: n' must come first")
        if "->" not in line:
            raise ValueError(f"line {lineno}: expected '<letter> -> <word>'")
        lhs, rhs = line.split("->", 1)
        lhs = lhs.strip()
        if len(lhs) != 1 or not lhs.islower():
            raise ValueError(f"line {lineno}: bad generator {lhs!r}")
        idx = string.ascii_lowercase.index(lhs) + 1
        if idx > rank:
            raise RankError(f"line {lineno}: generator {lhs!r} out of range for rank {rank}")
        if idx in images:
            raise ValueError(f"line {lineno}: generator {lhs!r} defined twice")
        images[idx] = parse_word(rhs, rank)
    if rank is None:
        raise ValueError("missing 'rank: n' line")
    missing = [letter_name(i) for i in range(1, rank + 1) if i not in images]
    if missing:
        raise ValueError(f"no image given for {', '.join(missing)}")
    return Endomorphism(rank, tuple(images[i] for i in range(1, rank + 1)))


def exponent_sums(w: Word, n: int) -> list:
    v = [0] * n
    for x in w:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return v


# -- Fox calculus ----------------------------------------------------------

def _add_term(acc: IntegralFn, w: Word, c: int) -> None:
    v = acc.get(w, 0) + c
    if v:
        acc[w] = v
    else:
        acc.pop(w, None)


def fox_derivative(w: Word, i: int) -> IntegralFn:
    """Fox derivative of ``w`` with respect to s_i, as an element of Z[F_n]."""
    out: IntegralFn = {}
    prefix = EMPTY
    for x in w:
        if x == i:
            _add_term(out, prefix, 1)
            prefix = prefix + (x,)
        elif x == -i:
            prefix = prefix + (x,)
            _add_term(out, prefix, -1)
        else:
            prefix = prefix + (x,)
    return out


def fn_multiply(x: IntegralFn, y: IntegralFn) -> IntegralFn:
    out: IntegralFn = {}
    for u, a in x.items():
        for v, b in y.items():
            _add_term(out, multiply(u, v), a * b)
    return out


def fn_add(*terms: IntegralFn) -> IntegralFn:
    out: IntegralFn = {}
    for t in terms:
        for w, c in t.items():
            _add_term(out, w, c)
    return out


def fundamental_formula_check(w: Word, n: int) -> bool:
    """Exact check of  sum_i (dw/ds_i)(1 - s_i) = 1 - w  in Z[F_n]."""
    lhs: IntegralFn = {}
    for i in range(1, n + 1):
        d = fox_derivative(w, i)
        lhs = fn_add(lhs, fn_multiply(d, {EMPTY: 1, (i,): -1}))
    rhs = fn_add({EMPTY: 1}, {w: -1})
    return lhs == rhs


# -- Stallings folding -----------------------------------------------------

class FoldedGraph:
    """Folded core graph of the subgroup generated by ``gens``.

    Every edge remembers a word in the generators (signed 1-based indices
    into ``gens``) so that reading a loop at the base state multiplies out to
    an expression of the loop label in the generators.
    """

    def __init__(self, gens: Sequence[Word]):
        self.gens = tuple(tuple(g) for g in gens)
        # out[v][letter] = (target, memory); both orientations are stored
        self.out: Dict[int, Dict[int, Tuple[int, Word]]] = {0: {}}
        self.base = 0
        self._next = 1
        pending: list = []
        for j, w in enumerate(self.gens, 1):
            v = self.base
            for k, x in enumerate(w):
                last = k == len(w) - 1
                u = self.base if last else self._new_state()
                pending.append((v, x, u, (j,) if last else EMPTY))
                v = u
        self._fold(pending)

    def _new_state(self) -> int:
        s = self._next
        self._next += 1
        self.out[s] = {}
        return s

    def _fold(self, edges: list) -> None:
        while edges:
            v, x, u, mem = edges.pop()
            if x not in self.out[v] and -x in self.out[u]:
                v, x, u, mem = u, -x, v, invert(mem)
            here = self.out[v].get(x)
            if here is None:
                self.out[v][x] = (u, mem)
                self.out[u][-x] = (v, invert(mem))
                continue
            u1, mem1 = here
            if u1 == u:
                continue  # parallel edge; the subgroup rank drops
            keep, drop = u1, u
            shift = multiply(invert(mem1), mem)
            if drop == self.base:
                keep, drop = u, u1
                shift = invert(shift)
            self._merge(keep, drop, shift, edges)

    def _merge(self, keep: int, drop: int, shift: Word, edges: list) -> None:
        inv_shift = invert(shift)

        def fix(v, x, u, mem):
            if v == drop:
                v, mem = keep, multiply(shift, mem)
            if u == drop:
                u, mem = keep, multiply(mem, inv_shift)
            return v, x, u, mem

        edges[:] = [fix(*e) for e in edges]
        for x, (w, mem) in self.out.pop(drop).items():
            if w == drop:
                if x > 0:
                    edges.append(fix(drop, x, drop, mem))
                continue
            del self.out[w][-x]
            edges.append(fix(drop, x, w, mem))

    # -- oracles ------------------------------------------------------------

    @property
    def num_states(self) -> int:
        return len(self.out)

    @property
    def num_edges(self) -> int:
        return sum(len(d) for d in self.out.values()) // 2

    @property
    def rank(self) -> int:
        return self.num_edges - self.num_states + 1

    @property
    def is_basis(self) -> bool:
        """The generators freely generate (free groups are Hopfian)."""
        return self.rank == len(self.gens)

    def _read(self, w: Word):
        v = self.base
        mem = EMPTY
        for x in w:
            step = self.out[v].get(x)
            if step is None:
                return None, None
            v, m = step
            mem = multiply(mem, m)
        return v, mem

    def contains(self, w: Word) -> bool:
        v, _ = self._read(w)
        return v == self.base

    def preimage(self, w: Word) -> Word:
        """Expression of ``w`` in the generators (signed generator indices)."""
        v, mem = self._read(w)
        if v != self.base:
            raise ValueError(f"{format_word(w)} is not in the subgroup")
        return mem


def fold_subgroup(gens: Sequence[Word]) -> FoldedGraph:
    return FoldedGraph(gens)


def is_injective(g: Endomorphism) -> bool:
    return fold_subgroup(g.images).rank == g.rank


def is_surjective(g: Endomorphism) -> bool:
    fg = fold_subgroup(g.images)
    return all(fg.contains((i,)) for i in range(1, g.rank + 1))
