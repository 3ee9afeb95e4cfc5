"""Splitting certificates for UPG automorphisms and their closed forms.

A certificate is a tree:

    (leaf <word>)                    rank one piece fixed by the map
    (case1 <cert> <cert>)            invariant free splitting B1 * B2
    (case2 <cert> x=<word> u=<word>) B1 * <x> with B1 invariant, x -> x u

Any node may carry ``c=<word>``: below that node the map is replaced by
``w -> c h(w) c^-1`` (c must lie in the node's subgroup), which moves the
stable letter from t to ``t c^-1``.  A top-level line ``conj: <word>`` does
the same for the whole map.  Words inside the tree are written without
spaces (``aB``); ``1`` is the empty word.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

from .hnn import Character, HnnElement, HnnGroup
from .polytopes import IntPolytope, minkowski_sum_all, primitive
from .smith import identity, matmul
from .words import (
    EMPTY,
    Endomorphism,
    Word,
    fold_subgroup,
    format_word,
    invert,
    multiply,
    parse_word,
)


class CertificateError(ValueError):
    pass


@dataclass
class CertNode:
    kind: str  # "leaf", "case1", "case2"
    children: List["CertNode"] = field(default_factory=list)
    word: Word = EMPTY  # leaf generator
    x: Word = EMPTY  # case2 new generator
    u: Word = EMPTY  # case2 suffix
    conj: Word = EMPTY  # optional per-node conjugator

    def basis(self) -> List[Word]:
        if self.kind == "leaf":
            return [self.word]
        if self.kind == "case1":
            return self.children[0].basis() + self.children[1].basis()
        return self.children[0].basis() + [self.x]

    def format(self) -> str:
        extra = f" c={_w(self.conj)}" if self.conj else ""
        if self.kind == "leaf":
            return f"(leaf {_w(self.word)}{extra})"
        if self.kind == "case1":
            return f"(case1 {self.children[0].format()} {self.children[1].format()}{extra})"
        return f"(case2 {self.children[0].format()} x={_w(self.x)} u={_w(self.u)}{extra})"


def _w(w: Word) -> str:
    return format_word(w).replace(" ", "")


@dataclass
class Certificate:
    root: CertNode
    conj: Word = EMPTY

    def format(self) -> str:
        head = f"conj: {format_word(self.conj)}\n" if self.conj else ""
        return head + self.root.format() + "\n"


# -- parsing --------------------------------------------------------------------------

_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def parse_certificate(text: str, n: int) -> Certificate:
    conj: Word = EMPTY
    body = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("conj:"):
            conj = _word(line[5:], n)
        else:
            body.append(line)
    tokens = _TOKEN.findall(" ".join(body))
    if not tokens:
        raise CertificateError("empty certificate")
    node, pos = _parse_node(tokens, 0, n)
    if pos != len(tokens):
        raise CertificateError(f"trailing input after certificate: {' '.join(tokens[pos:])}")
    return Certificate(node, conj)


def _parse_node(tokens: List[str], pos: int, n: int) -> Tuple[CertNode, int]:
    if tokens[pos] != "(":
        raise CertificateError(f"expected '(' at token {pos}, got {tokens[pos]!r}")
    pos += 1
    if pos >= len(tokens):
        raise CertificateError("unexpected end of certificate")
    kind = tokens[pos]
    pos += 1
    if kind not in ("leaf", "case1", "case2"):
        raise CertificateError(f"unknown node type {kind!r}")
    node = CertNode(kind)
    atoms: List[str] = []
    while pos < len(tokens) and tokens[pos] != ")":
        if tokens[pos] == "(":
            child, pos = _parse_node(tokens, pos, n)
            node.children.append(child)
        else:
            atoms.append(tokens[pos])
            pos += 1
    if pos >= len(tokens):
        raise CertificateError("missing ')'")
    pos += 1
    plain = []
    keys = set()
    for a in atoms:
        key, sep, val = a.partition("=")
        if not sep:
            plain.append(a)
            continue
        keys.add(key)
        word = _word(val, n)
        if key == "x":
            node.x = word
        elif key == "u":
            node.u = word
        elif key == "c":
            node.conj = word
        else:
            raise CertificateError(f"unknown field {key!r}")
    expected = {"leaf": 0, "case1": 2, "case2": 1}[kind]
    if len(node.children) != expected:
        raise CertificateError(f"{kind} takes {expected} sub-certificates, got {len(node.children)}")
    if kind == "leaf":
        if not plain:
            raise CertificateError("leaf needs a generator word")
        node.word = _word(" ".join(plain), n)
    elif plain:
        raise CertificateError(f"unexpected atoms {plain} in {kind}")
    if kind == "case2" and not (node.x and "u" in keys):
        raise CertificateError("case2 needs x=<word> and u=<word>")
    return node, pos


def _word(text: str, n: int) -> Word:
    try:
        return parse_word(text, n)
    except ValueError as exc:
        raise CertificateError(str(exc)) from None


# -- verification ---------------------------------------------------------------------

@dataclass
class Verification:
    ok: bool
    problems: List[str]


def _span_contains(basis: Sequence[Word], w: Word) -> bool:
    return fold_subgroup(list(basis)).contains(w)


def is_unipotent(g: Endomorphism) -> bool:
    n = g.rank
    M = g.abelianized()
    N = [[int(i == j) - M[i][j] for j in range(n)] for i in range(n)]
    P = identity(n)
    for _ in range(n):
        P = matmul(P, N)
    return all(x == 0 for row in P for x in row)


def verify_certificate(g: Endomorphism, cert: Certificate) -> Verification:
    problems: List[str] = []
    n = g.rank
    if not is_unipotent(g):
        problems.append("abelianization is not unipotent: (I - M)^n != 0")
    basis = cert.root.basis()
    fg = fold_subgroup(basis)
    if len(basis) != n or not fg.is_basis or not all(fg.contains((i,)) for i in range(1, n + 1)):
        problems.append("the certificate's generators do not form a free basis of F_n: "
                        + ", ".join(format_word(b) for b in basis))
    h = g.postconjugate(cert.conj) if cert.conj else g
    _verify_node(cert.root, h, problems)
    return Verification(not problems, problems)


def _verify_node(node: CertNode, h: Endomorphism, problems: List[str]) -> None:
    basis = node.basis()
    if node.conj:
        if not _span_contains(basis, node.conj):
            problems.append(f"conjugator {format_word(node.conj)} is not in the node's subgroup")
        h = h.postconjugate(node.conj)
    for b in basis:
        if not _span_contains(basis, h(b)):
            problems.append(f"subgroup <{', '.join(format_word(x) for x in basis)}> is not "
                            f"invariant: image of {format_word(b)} is {format_word(h(b))}")
            return
    if node.kind == "leaf":
        if h(node.word) != node.word:
            problems.append(f"leaf {format_word(node.word)} is not fixed "
                            f"(image {format_word(h(node.word))})")
        return
    if node.kind == "case1":
        for child in node.children:
            _verify_node(child, h, problems)
        return
    base = node.children[0]
    if not _span_contains(base.basis(), node.u):
        problems.append(f"u = {format_word(node.u)} is not in the base subgroup")
    expected = multiply(node.x, node.u)
    if h(node.x) != expected:
        problems.append(f"image of x = {format_word(node.x)} is {format_word(h(node.x))}, "
                        f"expected x u = {format_word(expected)}")
    _verify_node(base, h, problems)


# -- closed forms ---------------------------------------------------------------------

@dataclass
class UpgResult:
    stable_letters: List[HnnElement]
    vectors: List[Tuple[int, ...]]  # images of the t_i in H_1(G)_f
    polytope: IntPolytope


def stable_letters(G: HnnGroup, cert: Certificate) -> List[HnnElement]:
    out: List[HnnElement] = []
    t0 = G.mul(G.t, G.word(invert(cert.conj)))
    _collect(G, cert.root, t0, out)
    return out


def _collect(G: HnnGroup, node: CertNode, t: HnnElement, out: List[HnnElement]) -> None:
    if node.conj:
        t = G.mul(t, G.word(invert(node.conj)))
    if node.kind == "leaf":
        return
    out.append(t)
    for child in node.children:
        _collect(G, child, t, out)


def upg_torsion_polytope(G: HnnGroup, cert: Certificate, check: bool = True) -> UpgResult:
    if check:
        ver = verify_certificate(G.g, cert)
        if not ver.ok:
            raise CertificateError("; ".join(ver.problems))
    ts = stable_letters(G, cert)
    vecs = [G.p0(t) for t in ts]
    r = G.ab.r
    segs = [IntPolytope([(0,) * r, v]) for v in vecs]
    return UpgResult(ts, vecs, minkowski_sum_all(segs, r))


def upg_sigma(G: HnnGroup, cert: Certificate, phi: Character) -> bool:
    """Whether [phi] lies in Sigma(G): phi(t_i) != 0 for every i."""
    res = upg_torsion_polytope(G, cert)
    return all(phi(v) != 0 for v in res.vectors)


def sigma_fan(res: UpgResult) -> List[Tuple[int, ...]]:
    """Normals of the hyperplanes phi(t_i) = 0 bounding Sigma, deduplicated."""
    seen = []
    for v in res.vectors:
        p = primitive(v)
        q = tuple(-x for x in p)
        if any(v) and p not in seen and q not in seen:
            seen.append(p)
    return seen

