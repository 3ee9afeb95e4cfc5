"""Command-line interface: ``fbcinv <command> [options]``.

Exit status is 0 on success, 1 when a mathematical check fails or cannot be
decided, and 2 on bad input.  With ``--json`` every command prints a single
JSON object; errors become ``{"error": {"kind": ..., "message": ...}}``.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional

from .alexander import alexander_norm, alexander_polynomial
from .bns import bns_components, bns_membership_f2, format_element
from .corpus import named, random_direction, random_injective
from .groupring import fox_matrix
from .hnn import Character, CharacterError, HnnGroup, parse_character
from .l2 import L2Engine, SupportUndetermined
from .novikov import DEFAULT_MAX_HEIGHT, NoAdmissiblePivot, Undetermined
from .polytopes import VirtualPolytope
from .upg import CertificateError, parse_certificate, sigma_fan, upg_torsion_polytope, verify_certificate
from .words import Endomorphism, IntegralFn, RankError, WordSyntaxError, format_word, parse_endomorphism


class InputError(Exception):
    pass


class MathFailure(Exception):
    def __init__(self, message: str, kind: str = "math", payload: Optional[dict] = None):
        super().__init__(message)
        self.kind = kind
        self.payload = payload or {}


# -- input helpers --------------------------------------------------------------------

def load_endomorphism(source: str) -> Endomorphism:
    """Read an endomorphism file; ``@name`` selects a built-in example."""
    if source.startswith("@"):
        try:
            return named(source[1:])
        except (KeyError, ValueError):
            raise InputError(f"unknown built-in example {source!r}") from None
    try:
        text = Path(source).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror}") from None
    return parse_endomorphism(text)


def load_group(source: str) -> HnnGroup:
    g = load_endomorphism(source)
    try:
        return HnnGroup(g)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def load_phi(args, G: HnnGroup) -> Character:
    if not args.phi:
        raise InputError("--phi is required for this command")
    phi = parse_character(args.phi, G.ab)
    if phi.is_zero():
        raise InputError("phi must be nonzero")
    return phi


def format_integral(x: IntegralFn) -> str:
    if not x:
        return "0"
    out = ""
    for w in sorted(x, key=lambda w: (len(w), w)):
        c = x[w]
        body = format_word(w)
        mono = str(abs(c)) if body == "1" else (body if abs(c) == 1 else f"{abs(c)}*{body}")
        if not out:
            out = ("-" if c < 0 else "") + mono
        else:
            out += (" - " if c < 0 else " + ") + mono
    return out


def _fraction(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


# -- commands -------------------------------------------------------------------------

def cmd_fox_matrix(args) -> dict:
    g = load_endomorphism(args.file)
    F = fox_matrix(g)
    rows = [[format_integral(e) for e in row] for row in F]
    lines = [f"d g({chr(97 + i)}) / d {chr(97 + j)} = {rows[i][j]}"
             for i in range(g.rank) for j in range(g.rank)]
    return {"rank": g.rank, "matrix": rows, "_text": "\n".join(lines)}


def cmd_abelianize(args) -> dict:
    G = load_group(args.file)
    ab = G.ab
    return {
        "r": ab.r,
        "basis": list(ab.labels),
        "torsion": list(ab.torsion),
        "generators": {chr(97 + j): list(ab.project(((j + 1,)))) for j in range(ab.n)},
        "t": list(ab.t_vector()),
        "_text": ab.describe(),
    }


def cmd_alexander(args) -> dict:
    G = load_group(args.file)
    res = alexander_polynomial(G)
    labels = G.ab.labels
    poly = res.polytope.to_dict(labels)
    out = {"delta": res.text(labels), "removed_column": res.removed, "b1": res.b1, "polytope": poly}
    text = [f"Delta = {out['delta']}", json.dumps(poly)]
    if args.phi:
        phi = load_phi(args, G)
        out["norm"] = _fraction(alexander_norm(res, phi))
        text.append(f"delta_0({phi.format(G.ab)[5:]}) = {out['norm']}")
    out["_text"] = "\n".join(text)
    return out


def cmd_bns_test(args) -> dict:
    G = load_group(args.file)
    if G.n != 2:
        raise InputError("bns-test needs an endomorphism of F_2")
    phi = load_phi(args, G)
    verdict = bns_membership_f2(G, -phi)
    out = {"phi": phi.to_dict(G.ab), "membership": verdict.word, "reason": verdict.reason}
    text = [f"[phi] {'lies' if verdict.inside else 'does not lie'} in Sigma: {verdict.word}",
            verdict.reason]
    if verdict.chart is not None:
        ch = verdict.chart
        out["chart"] = {"x": format_word(ch.basis[0]), "y": format_word(ch.basis[1]),
                        "conjugator": format_word(ch.conjugator)}
        out["E"] = format_element(G, verdict.E)
        out["leading_term"] = format_element(G, verdict.mu)
        tprime = "t" + (f" {out['chart']['conjugator']}" if ch.conjugator else "")
        text.append(f"chart x = {out['chart']['x']}, y = {out['chart']['y']}, t' = {tprime}")
        text.append(f"E = {out['E']}")
        text.append(f"leading term = {out['leading_term']}")
    out["_text"] = "\n".join(text)
    return out


def cmd_bns_components(args) -> dict:
    G = load_group(args.file)
    if G.n != 2:
        raise InputError("bns-components needs an endomorphism of F_2")
    if G.ab.r < 2:
        raise InputError("b1(G) = 1: the character sphere is two points; use bns-test")
    report = bns_components(G)
    data = report.to_dict()
    data["basis"] = list(G.ab.labels)
    lines = [f"plane spanned by {list(report.plane[0])} and {list(report.plane[1])} "
             f"in basis ({', '.join(G.ab.labels)})"]
    for p in report.pieces:
        where = f"ray {list(p.start)}" if p.kind == "ray" else f"arc {list(p.start)} .. {list(p.end)}"
        lines.append(f"  {where}: {'in' if p.inside else 'out'}")
    lines.append(f"components of Sigma in this circle: {report.components}")
    data["_text"] = "\n".join(lines)
    return data


def _engine(args, G: HnnGroup) -> L2Engine:
    return L2Engine(G, args.max_height)


def cmd_thurston_norm(args) -> dict:
    G = load_group(args.file)
    phi = load_phi(args, G)
    w = _engine(args, G).width(phi)
    return {"phi": phi.to_dict(G.ab), "norm": _fraction(w),
            "_text": f"||phi||_T = {_fraction(w)}"}


def cmd_l2_polytope(args) -> dict:
    G = load_group(args.file)
    res = _engine(args, G).polytope(seed=args.seed, verify_samples=args.samples)
    poly = res.as_virtual().to_dict(G.ab.labels)
    out = {"polytope": poly, "verified": res.verified, "virtual_only": res.virtual_only,
           "queries": res.queries, "notes": res.notes}
    text = [json.dumps(poly), f"verified on {args.samples} random directions: {res.verified}"]
    if res.virtual_only:
        text.append("warning: only the seminorm is certified; the vertex set may be virtual")
    text.extend(res.notes)
    out["_text"] = "\n".join(text)
    if not res.verified:
        raise MathFailure("support values disagree with the reconstructed polytope", payload=out)
    return out


def _load_cert(args, G: HnnGroup):
    try:
        text = Path(args.cert).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {args.cert}: {exc.strerror}") from None
    cert = parse_certificate(text, G.n)
    ver = verify_certificate(G.g, cert)
    if not ver.ok:
        raise MathFailure("certificate rejected: " + "; ".join(ver.problems),
                          payload={"problems": ver.problems})
    return cert


def cmd_upg_polytope(args) -> dict:
    G = load_group(args.file)
    cert = _load_cert(args, G)
    res = upg_torsion_polytope(G, cert, check=False)
    poly = VirtualPolytope.of(res.polytope).to_dict(G.ab.labels)
    ts = [G.format(t) for t in res.stable_letters]
    text = [f"t_{i + 1} = {t}  (p0 = {list(v)})" for i, (t, v) in enumerate(zip(ts, res.vectors))]
    text.append(json.dumps(poly))
    return {"t_list": ts, "vectors": [list(v) for v in res.vectors], "polytope": poly,
            "_text": "\n".join(text)}


def cmd_upg_sigma(args) -> dict:
    G = load_group(args.file)
    cert = _load_cert(args, G)
    res = upg_torsion_polytope(G, cert, check=False)
    fan = [list(v) for v in sigma_fan(res)]
    out = {"hyperplanes": fan, "basis": list(G.ab.labels)}
    text = ["Sigma is the complement of the hyperplanes phi(v) = 0 for v in "
            + (", ".join(str(v) for v in fan) or "(none)")]
    if args.phi:
        phi = load_phi(args, G)
        inside = all(phi(v) != 0 for v in res.vectors)
        face = res.polytope.face(phi.values)
        out.update({"phi": phi.to_dict(G.ab), "membership": "in" if inside else "out",
                    "face": face.normalized().sorted_vertices()})
        text.insert(0, f"[phi]: {'in' if inside else 'out'}")
    out["_text"] = "\n".join(text)
    return out


def cmd_verify_inequalities(args) -> dict:
    rng = random.Random(args.seed)
    if args.file:
        maps = [load_endomorphism(args.file)]
    else:
        maps = [random_injective(rng, 2, 4) for _ in range(args.maps)]
    violations: List[dict] = []
    checked = 0
    for g in maps:
        G = HnnGroup(g)
        eng = _engine(args, G)
        alex = alexander_polynomial(G)
        r = G.ab.r
        for _ in range(args.samples):
            vec = random_direction(rng, r)
            den = rng.randint(1, 4)
            phi = Character(tuple(Fraction(x, den) for x in vec))
            thurston = eng.width(phi)
            delta = alexander_norm(alex, phi)
            lhs = delta if r >= 2 else delta - abs(phi.t_value)
            checked += 1
            if lhs > thurston:
                violations.append({"map": g.format(), "phi": [_fraction(v) for v in phi.values],
                                   "alexander": _fraction(lhs), "thurston": _fraction(thurston)})
    out = {"maps": len(maps), "directions": checked, "violations": violations,
           "_text": f"{len(maps)} maps, {checked} directions, {len(violations)} violations"}
    if violations:
        raise MathFailure(f"{len(violations)} violations of delta_0 <= ||.||_T", payload=out)
    return out


def cmd_selftest(args) -> dict:
    from .acceptance import run_all

    lines: List[str] = []
    report = (lambda s: None) if args.json else (lambda s: print(s, flush=True))
    results = run_all(lambda s: (lines.append(s), report(s)))
    out = {"criteria": [{"number": r.number, "title": r.title, "passed": r.passed,
                         "seconds": round(r.seconds, 3), "failures": r.failures[:20]}
                        for r in results],
           "_text": ""}
    if not all(r.passed for r in results):
        raise MathFailure("acceptance failures", payload=out)
    return out


COMMANDS: Dict[str, Callable[[argparse.Namespace], dict]] = {
    "fox-matrix": cmd_fox_matrix,
    "abelianize": cmd_abelianize,
    "alexander": cmd_alexander,
    "bns-test": cmd_bns_test,
    "bns-components": cmd_bns_components,
    "thurston-norm": cmd_thurston_norm,
    "l2-polytope": cmd_l2_polytope,
    "upg-polytope": cmd_upg_polytope,
    "upg-sigma": cmd_upg_sigma,
    "verify-inequalities": cmd_verify_inequalities,
    "selftest": cmd_selftest,
}


SUMMARIES = {
    "fox-matrix": "Fox derivatives of g(x_i) with respect to x_j",
    "abelianize": "free part and torsion of H_1(G)",
    "alexander": "multivariable Alexander polynomial, its polytope, optionally delta_0(phi)",
    "bns-test": "single-ray Sigma membership of [phi] (rank 2)",
    "bns-components": "rays and arcs of Sigma in a plane of characters (rank 2)",
    "thurston-norm": "Thurston norm of phi from the L2 polytope",
    "l2-polytope": "reconstruct and verify the L2-torsion polytope",
    "upg-polytope": "closed-form polytope from a UPG splitting certificate",
    "upg-sigma": "Sigma membership or its hyperplanes from a UPG certificate",
    "verify-inequalities": "check delta_0 <= Thurston norm on random directions",
    "selftest": "run the seven acceptance criteria",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--phi", help='character, e.g. "a=1, b=0, t=2"')
    common.add_argument("--max-height", type=int, default=DEFAULT_MAX_HEIGHT,
                        help="levels explored before a leading term is declared undetermined")
    common.add_argument("--samples", type=int, default=20, help="random directions to check")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")

    parser = argparse.ArgumentParser(prog="fbcinv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common], help=SUMMARIES[name])
        if name in ("upg-polytope", "upg-sigma"):
            p.add_argument("file", help="endomorphism file or @name")
            p.add_argument("cert", help="certificate file")
        elif name == "verify-inequalities":
            p.add_argument("file", nargs="?", help="endomorphism file; random maps if omitted")
            p.add_argument("--maps", type=int, default=20, help="number of random maps")
        elif name != "selftest":
            p.add_argument("file", help="endomorphism file or @name")
    return parser


def _emit(args, data: dict) -> None:
    if args.json:
        print(json.dumps({k: v for k, v in data.items() if not k.startswith("_")}, sort_keys=True))
    elif data.get("_text"):
        print(data["_text"])


def _fail(args, kind: str, message: str, payload: Optional[dict] = None) -> None:
    if args.json:
        body = {"error": {"kind": kind, "message": message}}
        if payload:
            body.update({k: v for k, v in payload.items() if not k.startswith("_")})
        print(json.dumps(body, sort_keys=True))
    else:
        if payload and payload.get("_text"):
            print(payload["_text"])
        print(f"error ({kind}): {message}", file=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.max_height < 1 or args.samples < 0:
        _fail(args, "input", "--max-height must be positive and --samples non-negative")
        return 2
    try:
        data = COMMANDS[args.command](args)
    except (InputError, WordSyntaxError, RankError, CharacterError, CertificateError) as exc:
        _fail(args, "input", str(exc))
        return 2
    except MathFailure as exc:
        _fail(args, exc.kind, str(exc), exc.payload)
        return 1
    except (SupportUndetermined, Undetermined, NoAdmissiblePivot) as exc:
        _fail(args, "undetermined", str(exc))
        return 1
    except ValueError as exc:
        _fail(args, "input", str(exc))
        return 2
    _emit(args, data)
    return 0
