"""Named endomorphisms, a certified UPG corpus and random generators."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from .words import Endomorphism, Word, identity_map, is_injective, parse_endomorphism, reduce_word


def conj_power(k: int) -> Endomorphism:
    """The inner automorphism x -> a^k x a^-k of F_2."""
    ak: Word = (1,) * k if k >= 0 else (-1,) * (-k)
    inv = tuple(-x for x in reversed(ak))
    return Endomorphism(2, ((1,), reduce_word(ak + (2,) + inv)))


G3_TEXT = """rank: 3
a -> b
b -> c
c -> a b c B C
"""

BA_TEXT = """rank: 2
a -> a
b -> b a
"""


def named(name: str) -> Endomorphism:
    """Look up ``id2``..``id9``, ``g3``, ``ba`` or ``conj<k>`` (e.g. ``conj-2``)."""
    if name.startswith("id") and name[2:].isdigit():
        return identity_map(int(name[2:]))
    if name == "g3":
        return parse_endomorphism(G3_TEXT)
    if name == "ba":
        return parse_endomorphism(BA_TEXT)
    if name.startswith("conj"):
        return conj_power(int(name[4:]))
    raise KeyError(name)


@dataclass(frozen=True)
class UpgExample:
    name: str
    endo: str
    cert: str

    def map(self) -> Endomorphism:
        return parse_endomorphism(self.endo)


UPG_CORPUS: Tuple[UpgExample, ...] = (
    UpgExample("id2", "rank: 2\na -> a\nb -> b\n", "(case1 (leaf a) (leaf b))"),
    UpgExample("ba", BA_TEXT, "(case2 (leaf a) x=b u=a)"),
    UpgExample("ba3", "rank: 2\na -> a\nb -> b a a a\n", "(case2 (leaf a) x=b u=aaa)"),
    UpgExample("conj2", "rank: 2\na -> a\nb -> a a b A A\n",
               "conj: A A\n(case1 (leaf a) (leaf b))"),
    UpgExample("conj-1", "rank: 2\na -> a\nb -> A b a\n",
               "conj: a\n(case1 (leaf a) (leaf b))"),
    UpgExample("conj2-ba", "rank: 2\na -> a\nb -> a a b a A A\n",
               "conj: A A\n(case2 (leaf a) x=b u=a)"),
    UpgExample("id3", "rank: 3\na -> a\nb -> b\nc -> c\n",
               "(case1 (leaf a) (case1 (leaf b) (leaf c)))"),
    UpgExample("chain3", "rank: 3\na -> a\nb -> b a\nc -> c b\n",
               "(case2 (case2 (leaf a) x=b u=a) x=c u=b)"),
    UpgExample("cab", "rank: 3\na -> a\nb -> b\nc -> c a b\n",
               "(case2 (case1 (leaf a) (leaf b)) x=c u=ab)"),
    UpgExample("twist3", "rank: 3\na -> a\nb -> a b A\nc -> c\n",
               "(case1 (case1 (leaf a) (leaf b) c=A) (leaf c))"),
)


def upg_example(name: str) -> UpgExample:
    for ex in UPG_CORPUS:
        if ex.name == name:
            return ex
    raise KeyError(name)


# -- random inputs --------------------------------------------------------------------

def random_word(rng: random.Random, n: int, max_len: int, min_len: int = 1) -> Word:
    while True:
        length = rng.randint(min_len, max_len)
        letters = [rng.choice([1, -1]) * rng.randint(1, n) for _ in range(length)]
        w = reduce_word(letters)
        if len(w) >= min_len:
            return w


def random_injective(rng: random.Random, n: int = 2, max_len: int = 4) -> Endomorphism:
    """A random endomorphism whose injectivity is certified by folding."""
    while True:
        g = Endomorphism(n, tuple(random_word(rng, n, max_len) for _ in range(n)))
        if is_injective(g):
            return g


def random_direction(rng: random.Random, r: int, bound: int = 5) -> Tuple[int, ...]:
    while True:
        v = tuple(rng.randint(-bound, bound) for _ in range(r))
        if any(v):
            return v


def random_directions(rng: random.Random, r: int, count: int, bound: int = 5) -> List[Tuple[int, ...]]:
    return [random_direction(rng, r, bound) for _ in range(count)]


def endomorphism_table() -> Dict[str, Endomorphism]:
    names: Sequence[str] = ("id2", "id3", "id4", "g3", "ba", "conj1", "conj2", "conj-1")
    return {k: named(k) for k in names}
