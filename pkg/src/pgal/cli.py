"""pgal command line: groups, h2, cor, obstruct, solve, schultz, autoreal, symbol.

Every command is deterministic: identical argv produces byte-identical
output.  `--json` prints the payload only; domain errors exit 1 with a
structured {"error", "detail"} document, usage errors exit 2.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction

from . import autoreal as ar
from . import fpmodules as fpm
from . import kummer, obstructions, symbols
from .catalog import build_group, canonical_spec
from .cohomology import Cocycle2, corestrict_tate, h2_enumerate
from .errors import PgalError, UnknownFamily, ZeroEntry
from .groups import Group, Subgroup
from .symbols import FieldElem, SymbolProduct


def _load_group(ref: str) -> tuple[Group, object]:
    """Spec string, or a path to a group JSON file."""
    if os.path.exists(ref):
        with open(ref, encoding="utf-8") as fh:
            doc = json.load(fh)
        return Group.from_json(doc), doc
    try:
        return build_group(ref), canonical_spec(ref)
    except UnknownFamily:
        raise UnknownFamily(f"{ref!r} is neither a catalog spec nor an existing file")


_ELEM_RE = re.compile(r"^\s*(-?\d+(?:/\d+)?|zeta(?:\d+)?|[A-Za-z_]\w*)\s*$")


def _parse_elem(tok: str, p: int) -> FieldElem:
    m = _ELEM_RE.match(tok)
    if not m:
        raise ZeroEntry(f"cannot parse field element {tok!r}")
    t = m.group(1)
    if re.match(r"^-?\d", t):
        return symbols.rat(Fraction(t))
    if t == "zeta":
        return symbols.zeta(p)
    if t.startswith("zeta") and t[4:].isdigit():
        return symbols.zeta(int(t[4:]))
    return symbols.ind(t)


def _parse_elems(text: str, p: int) -> list[FieldElem]:
    return [_parse_elem(tok, p) for tok in text.split(",") if tok.strip()]


_FACTOR_RE = re.compile(r"\(([^()]*)\)(?:\^(-?\d+))?")


def _parse_symbol_expr(text: str, p: int) -> SymbolProduct:
    out = symbols.trivial(p)
    rest = text.replace(" ", "")
    pos = 0
    while pos < len(rest):
        m = _FACTOR_RE.match(rest, pos)
        if not m:
            raise ZeroEntry(f"cannot parse symbol expression at ...{rest[pos:]!r}")
        entries = m.group(1).split(",")
        if len(entries) != 2:
            raise ZeroEntry(f"symbol factor needs two entries, got {m.group(1)!r}")
        a, b = (_parse_elem(e, p) for e in entries)
        e = int(m.group(2) or 1)
        out = out.mul(symbols.symbol(a, b, p).pow(e))
        pos = m.end()
    return out


def _emit(args, payload: dict, human_lines: list[str]) -> int:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in human_lines:
            print(line)
    return 0


def _splits_or_none(sym: SymbolProduct):
    try:
        return symbols.splits_over_Q(sym)
    except PgalError:
        return None


def _symbol_payload(sym: SymbolProduct) -> tuple[dict, list[str]]:
    splits = _splits_or_none(sym)
    payload = {"class": str(sym), "symbol": sym.to_json(), "splits_over_Q": splits}
    lines = [f"class: {sym}"]
    if splits is not None:
        lines.append(f"splits over Q: {splits}")
    return payload, lines


# -- subcommand handlers --------------------------------------------------------


def _cmd_groups(args) -> int:
    G, ref = _load_group(args.spec)
    payload = G.to_json()
    payload["spec"] = ref if isinstance(ref, str) else None
    lines = [f"group of order {G.order}",
             "generators: " + ", ".join(f"{n}@{i}" for n, i in G.generators)]
    return _emit(args, payload, lines)


def _cmd_h2(args) -> int:
    G, ref = _load_group(args.group)
    res = h2_enumerate(G, args.p)
    payload = {
        "group": ref if isinstance(ref, str) else "(file)",
        "p": args.p,
        "dimension": res.dimension,
        "classes": res.class_count,
        "complete_enumeration": res.complete,
    }
    lines = [f"H^2 dimension {res.dimension} over F_{args.p}: {res.class_count} classes"]
    return _emit(args, payload, lines)


def _cmd_cor(args) -> int:
    G, ref = _load_group(args.group)
    ids = [int(t) for t in args.subgroup.split(",") if t.strip()]
    H = Subgroup(G, ids)
    with open(args.cocycle, encoding="utf-8") as fh:
        doc = json.load(fh)
    fbar = Cocycle2(H.as_group(), doc["p"], doc["values"])
    f = corestrict_tate(fbar, H, args.g)
    payload = f.to_json(group_ref=ref if isinstance(ref, str) else None)
    lines = [f"corestricted cocycle on group of order {G.order}:"]
    lines.extend(" ".join(str(v) for v in row) for row in f.values.tolist())
    return _emit(args, payload, lines)


def _zs(p: int) -> str:
    return "-1" if p == 2 else "zeta"


def _cmd_obstruct(args) -> int:
    p = getattr(args, "p", 2)
    if args.engine == "c4":
        sym = obstructions.obstruction_c4(_parse_elem(args.a, 2))
        shown = f"({args.a},-1)"
    elif args.engine == "cp2":
        sym = obstructions.obstruction_cp2(_parse_elem(args.a, p), p)
        shown = f"({args.a},{_zs(p)})"
    elif args.engine == "massy":
        a = _parse_elems(args.a, p)
        d = _parse_d_pairs(args.d or "")
        sym = obstructions.massy(obstructions.MassyInput(p, a, d))
        names = [t.strip() for t in args.a.split(",")]

        def _pw(text, e):
            return text if e == 1 else f"{text}^{e}"

        toks = [_pw(f"({names[i - 1]},{_zs(p)})", e)
                for (i, j), e in sorted(d.items()) if i == j and e % p]
        toks += [_pw(f"({names[i - 1]},{names[j - 1]})", e)
                 for (i, j), e in sorted(d.items()) if i < j and e % p]
        shown = "".join(toks) or "1"
    elif args.engine == "direct":
        a = _parse_elems(args.a, p) if args.a else []
        d = [int(t) for t in args.d.split(",")] if args.d else []
        sym = obstructions.direct_factor(obstructions.DirectFactorInput(
            p, args.res, _parse_elem(args.b, p), args.j, a, d))
        shown = str(sym)
    elif args.engine == "modular":
        variant = {"m": "M", "1zeta": "1z", "zeta1": "z1", "zetazeta": "zz"}.get(
            args.variant.lower(), args.variant)
        sym = obstructions.modular_obstruction(
            variant, p, args.n, _parse_elem(args.a1, p), _parse_elem(args.a2, p))
        shown = {
            "M": f"[K,C_q,zeta]({args.a2},{args.a1})",
            "1z": f"({args.a2},{args.a1})",
            "z1": f"({args.a2},{_zs(p)})",
            "zz": f"({_zs(p)}*{args.a1},{args.a2})",
        }[variant]
    elif args.engine == "gfamily":
        sym = obstructions.g_family_obstruction(
            args.family, p, _parse_elem(args.a1, p), _parse_elem(args.a2, p),
            zeta_p2_in_k=args.zeta_p2)
        shown = str(sym)
    elif args.engine == "hw":
        form = obstructions.DiagonalForm(_parse_elems(args.q, 2))
        sym = obstructions.hasse_witt(form)
        entries = args.q.split(",")
        shown = "".join(f"({entries[i]},{entries[j]})"
                        for i in range(len(entries)) for j in range(i + 1, len(entries))) or "1"
    else:  # twist
        plus = _parse_symbol_expr(args.plus, 2) if args.plus else symbols.trivial(2)
        sym = obstructions.double_cover_twist(plus, _parse_elem(args.df, 2))
        shown = f"(-1,{args.df}){args.plus or ''}"
    payload, lines = _symbol_payload(sym)
    payload["class"] = shown
    payload["canonical"] = str(sym)
    lines.insert(0, f"displayed: {shown}")
    return _emit(args, payload, lines)


_D_RE = re.compile(r"^d(\d)(\d)$")


def _parse_d_pairs(text: str) -> dict:
    """Parse 'd11=1,d12=0' into {(1,1): 1, (1,2): 0} (single-digit indices)."""
    out = {}
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        key, _, val = piece.partition("=")
        m = _D_RE.match(key.strip())
        if not m or not val.strip().lstrip("-").isdigit():
            raise ZeroEntry(f"cannot parse commutator datum {piece!r}")
        out[(int(m.group(1)), int(m.group(2)))] = int(val)
    return out


def _cmd_solve(args) -> int:
    th = args.theorem
    if th in ("4.12", "4_12", "T4_12"):
        expr = kummer.minac_swallow_solution(args.p, args.i or 2, args.witness or "omega")
    else:
        wit_name = args.witness or {"4.4": "x", "4.5": "y"}.get(th, "omega")
        key = {"4.4": "x", "4.5": "y"}.get(th, "omega")
        expr = kummer.build_solution(th, args.p, {key: wit_name})
    payload = expr.to_json()
    return _emit(args, payload, [str(expr)])


def _cmd_schultz(args) -> int:
    lengths = [int(t) for t in args.summands.split(",") if t.strip()]
    d: dict[int, int] = {}
    for l in lengths:
        d[l] = d.get(l, 0) + 1
    A = fpm.FpGModule(args.p, args.n, d)
    dims = [int(t) for t in args.dims.split(",") if t.strip()]
    top = args.p ** args.n
    if len(dims) != top:
        raise fpm.Mismatch(f"--dims needs {top} values (one per i in 1..p^n)")
    ikk = None if args.ikk in (None, "-inf", "None") else int(args.ikk)
    nd = fpm.NormData(args.p, args.n, dict(enumerate(dims, start=1)), ikk,
                      args.finite == "true")
    ok = fpm.solvable(A, nd)
    deltas = [fpm.delta(A, i) for i in range(1, top + 2)]
    payload = {"solvable": ok, "deltas": deltas, "count": None}
    lines = [f"solvable: {ok}", f"deltas: {deltas}"]
    if ok:
        count = fpm.count_solutions(A, nd)
        payload["count"] = "infinite" if count is fpm.INFINITE else count
        lines.append(f"solutions: {payload['count']}")
    return _emit(args, payload, lines)


def _cmd_autoreal(args) -> int:
    if args.action == "query":
        res = ar.implies(args.src, args.dst)
        payload = {"from": canonical_spec(args.src), "to": canonical_spec(args.dst),
                   "holds": res["holds"], "path": res["path"]}
        lines = [f"{payload['from']} => {payload['to']}: {res['holds']}"]
        for e in res["path"]:
            lines.append(f"  via {e['from']} => {e['to']}  [{e['cite']}]")
        return _emit(args, payload, lines)
    b = ar.multiplicity_bound(args.p, args.n, args.k)
    payload = {"p": args.p, "n": args.n, "k": args.k, "bound": b.bound, "group": b.spec}
    return _emit(args, payload, [f"nu({b.spec}) >= {b.bound}"])


def _cmd_symbol(args) -> int:
    sym = _parse_symbol_expr(args.expr, args.p)
    payload, lines = _symbol_payload(sym)
    payload["canonical"] = str(sym)
    return _emit(args, payload, lines)


# -- parser ----------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="pgal",
                                  description="central embedding problems of p-groups")
    sub = top.add_subparsers(dest="command", required=True)

    def with_json(p):
        p.add_argument("--json", action="store_true", help="emit the JSON payload only")
        return p

    g = sub.add_parser("groups", help="catalog groups")
    gsub = g.add_subparsers(dest="action", required=True)
    gb = with_json(gsub.add_parser("build", help="build a catalog group"))
    gb.add_argument("--spec", required=True, help="catalog spec, e.g. D:16, or a JSON file")
    gb.set_defaults(func=_cmd_groups)

    h2 = with_json(sub.add_parser("h2", help="second cohomology with mu_p coefficients"))
    h2.add_argument("--group", required=True)
    h2.add_argument("--p", type=int, required=True)
    h2.set_defaults(func=_cmd_h2)

    cor = with_json(sub.add_parser("cor", help="quadratic corestriction of a cocycle"))
    cor.add_argument("--group", required=True)
    cor.add_argument("--subgroup", required=True, help="comma-separated element ids")
    cor.add_argument("--cocycle", required=True, help="cocycle JSON file on the subgroup")
    cor.add_argument("--g", type=int, default=None, help="coset representative outside H")
    cor.set_defaults(func=_cmd_cor)

    ob = sub.add_parser("obstruct", help="obstruction symbol engines")
    osub = ob.add_subparsers(dest="engine", required=True)
    oc4 = with_json(osub.add_parser("c4"))
    oc4.add_argument("--a", required=True)
    ocp2 = with_json(osub.add_parser("cp2"))
    ocp2.add_argument("--a", required=True)
    ocp2.add_argument("--p", type=int, default=2)
    om = with_json(osub.add_parser("massy"))
    om.add_argument("--p", type=int, required=True)
    om.add_argument("--a", required=True, help="comma-separated entries")
    om.add_argument("--d", default="", help="e.g. d11=1,d12=1 (single-digit indices)")
    od = with_json(osub.add_parser("direct"))
    od.add_argument("--p", type=int, required=True)
    od.add_argument("--b", required=True)
    od.add_argument("--j", type=int, default=0)
    od.add_argument("--a", default="")
    od.add_argument("--d", default="", help="comma-separated exponents d_i")
    od.add_argument("--res", default=None, help="opaque restricted-class name")
    omod = with_json(osub.add_parser("modular"))
    omod.add_argument("--variant", required=True, help="m | 1zeta | zeta1 | zetazeta")
    omod.add_argument("--p", type=int, required=True)
    omod.add_argument("--n", type=int, required=True)
    omod.add_argument("--a1", required=True)
    omod.add_argument("--a2", required=True)
    ogf = with_json(osub.add_parser("gfamily"))
    ogf.add_argument("--family", required=True, choices=["G3", "G4", "G5"])
    ogf.add_argument("--p", type=int, required=True)
    ogf.add_argument("--a1", required=True)
    ogf.add_argument("--a2", required=True)
    ogf.add_argument("--zeta-p2", dest="zeta_p2", action="store_true")
    ohw = with_json(osub.add_parser("hw"))
    ohw.add_argument("--q", required=True, help="diagonal entries, comma separated")
    otw = with_json(osub.add_parser("twist"))
    otw.add_argument("--df", required=True)
    otw.add_argument("--plus", default="", help="existing class, e.g. (2,-1)(3,-1)")
    for parser in (oc4, ocp2, om, od, omod, ogf, ohw, otw):
        parser.set_defaults(func=_cmd_obstruct)

    so = with_json(sub.add_parser("solve", help="symbolic solution expressions"))
    so.add_argument("--theorem", required=True, help="4.1 | 4.2 | 4.3 | 4.4 | 4.5 | 4.12")
    so.add_argument("--p", type=int, required=True)
    so.add_argument("--i", type=int, default=None, help="tower index for 4.12")
    so.add_argument("--witness", default=None)
    so.set_defaults(func=_cmd_solve)

    sc = sub.add_parser("schultz", help="module solvability and counting")
    scsub = sc.add_subparsers(dest="action", required=True)
    scs = with_json(scsub.add_parser("solve"))
    scs.add_argument("--p", type=int, required=True)
    scs.add_argument("--n", type=int, required=True)
    scs.add_argument("--summands", required=True, help="summand lengths, e.g. 3 or 1,1,2")
    scs.add_argument("--dims", required=True, help="norm dimensions for i = 1..p^n")
    scs.add_argument("--ikk", default="-inf", help="level invariant, integer or -inf")
    scs.add_argument("--finite", choices=["true", "false"], default="true")
    scs.set_defaults(func=_cmd_schultz)

    au = sub.add_parser("autoreal", help="automatic realization database")
    ausub = au.add_subparsers(dest="action", required=True)
    auq = with_json(ausub.add_parser("query"))
    auq.add_argument("--from", dest="src", required=True)
    auq.add_argument("--to", dest="dst", required=True)
    auq.set_defaults(func=_cmd_autoreal)
    aub = with_json(ausub.add_parser("bound"))
    aub.add_argument("--p", type=int, required=True)
    aub.add_argument("--n", type=int, required=True)
    aub.add_argument("--k", type=int, required=True)
    aub.set_defaults(func=_cmd_autoreal)

    sy = sub.add_parser("symbol", help="symbol product evaluation")
    sysub = sy.add_subparsers(dest="action", required=True)
    sye = with_json(sysub.add_parser("eval"))
    sye.add_argument("--p", type=int, required=True)
    sye.add_argument("--expr", required=True)
    sye.set_defaults(func=_cmd_symbol)

    return top


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PgalError as exc:
        print(json.dumps({"error": exc.code, "detail": exc.detail}, sort_keys=True))
        return 1


def main_entry() -> None:
    sys.exit(main())
