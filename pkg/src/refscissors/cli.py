"""The ``rsc`` command line tool.

Every command takes one or more rings (``--ring``/``--rings``) and prints a
human summary, or with ``--json`` a deterministic JSON document.  Exit codes:
0 success, 1 a failed check, 2 usage error, 3 size cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import __version__
from .abgrp import FpAbelianGroup, set_snf_cache
from .cache import DiskCache
from .ring import RingSpecError, make_ring, mu2, parse_ring_spec, unit_group, w_set
from .sl2 import DEFAULT_GROUP_CAP, GROUP_KINDS, CapExceeded, GroupTable, group

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument helpers


def split_ring_list(text: str) -> List[str]:
    """Split a ring list on commas; ``prod:`` swallows the remaining items.

    Use ``;`` as the separator to list a product ring before other rings,
    e.g. ``prod:gf:5,gf:4;gf:3``.
    """
    if ";" in text:
        return [p.strip() for p in text.split(";") if p.strip()]
    out: List[str] = []
    parts = [p.strip() for p in text.split(",") if p.strip()]
    for i, p in enumerate(parts):
        if p.startswith("prod:"):
            out.append(",".join(parts[i:]))
            break
        out.append(p)
    return out


def parse_cap(text: str) -> Tuple[int, int]:
    deg, sep, order = text.partition("=")
    try:
        if not sep:
            raise ValueError
        return int(deg), int(order)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected DEGREE=ORDER, got {text!r}") from None


_APPEND_OPTS = ("rings", "cap")
SUB_PREFIX = "sub_"


def _common(sub: bool = False) -> argparse.ArgumentParser:
    """Shared options.  The subcommand copy writes to prefixed dests with
    suppressed defaults so flags given before the subcommand survive."""
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    if sub:
        add = g.add_argument

        def _add(*names, dest=None, default=None, **kw):
            dest = dest or names[0].lstrip("-").replace("-", "_")
            add(*names, dest=SUB_PREFIX + dest, default=argparse.SUPPRESS, **kw)

        g.add_argument = _add
    g.add_argument("--ring", "--rings", dest="rings", action="append", default=[],
                   help="ring spec(s): zmod:<n>, gf:<q>, prod:<spec>,<spec>...; comma or ';' separated")
    g.add_argument("--json", action="store_true", help="print JSON")
    g.add_argument("--csv", action="store_true", help="print CSV where supported (rp relations)")
    g.add_argument("--max-group-order", type=int, default=None,
                   help="largest matrix group to enumerate; also bounds every homology cap")
    g.add_argument("--cap", action="append", type=parse_cap, default=[], metavar="DEG=ORDER",
                   help="override the bar-homology |G| cap for one degree")
    g.add_argument("--max-degree", type=int, default=None,
                   help="top degree of the unimodular complex (<= 4)")
    g.add_argument("--cache-dir", default=None, help="directory of the SNF cache")
    g.add_argument("--no-cache", action="store_true", help="do not read or write the SNF cache")
    g.add_argument("--certificate", nargs="?", const="-", default=None, metavar="FILE",
                   help="dump boundary matrices and Smith transforms (homology commands)")
    g.add_argument("--jobs", type=int, default=1, help="worker processes for verify")
    return p


def build_parser() -> argparse.ArgumentParser:
    common, sub_common = _common(), _common(sub=True)
    parser = argparse.ArgumentParser(prog="rsc", parents=[common],
                                     description="Scissors congruence, Witt and homology computations over finite rings.")
    parser.add_argument("--version", action="version", version=f"rsc {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, help_):
        return sub.add_parser(name, parents=[sub_common], help=help_, description=help_)

    add("ring", "basic data of a ring")
    add("units", "unit group, square classes and W_A")
    add("ge2", "elementary relations and E2 = SL2")
    c = add("complex", "the complex of unimodular vectors")
    c.add_argument("action", choices=["homology", "orbits", "sizes", "check"])
    c.add_argument("--dim", type=int, default=1)
    r = add("rp", "presented refined scissors congruence group")
    r.add_argument("--symbols", action="store_true", help="list the generators")
    add("rp-direct", "scissors congruence group as coinvariants of the complex")
    add("gw", "Grothendieck-Witt group from the presentation")
    add("witt", "Witt group")
    add("k1mw", "Milnor-Witt K1 as a fiber product")
    h = add("homology", "integral homology of a matrix group")
    h.add_argument("--group", default="SL2", help=f"one of {', '.join(GROUP_KINDS)} or cyclic:<m>")
    h.add_argument("--dim", type=int, default=1)
    rh = add("rel-homology", "relative homology of a pair of matrix groups")
    rh.add_argument("--group", default="SL2")
    rh.add_argument("--sub", default="SM2")
    rh.add_argument("--dim", type=int, default=2)
    s = add("s-groups", "S_n = H_n(B, T) and the splitting of H_n(B)")
    s.add_argument("--dim", type=int, default=1)
    add("sm2", "homology of the monomial group")
    v = add("verify", "run a verification suite or a single check")
    v.add_argument("suite", help="ge2, scissors, witt, homology, all, or a check name")
    return parser


# ---------------------------------------------------------------------------
# context


class Context:
    def __init__(self, args):
        self.args = args
        self.group_cap = args.max_group_order or DEFAULT_GROUP_CAP
        from .homology import DEFAULT_CAPS

        caps = dict(DEFAULT_CAPS)
        if args.max_group_order:
            caps = {k: min(v, args.max_group_order) for k, v in caps.items()}
        for d, o in args.cap:
            caps[d] = o
        self.caps = caps
        if args.max_degree is not None and not 1 <= args.max_degree <= 4:
            raise UsageError("--max-degree must be between 1 and 4")
        self.max_degree = args.max_degree or 4

    def group(self, R, which: str) -> GroupTable:
        if which.startswith("cyclic:"):
            try:
                m = int(which.split(":", 1)[1])
            except ValueError:
                raise UsageError(f"bad group {which!r}") from None
            if m < 1:
                raise UsageError("cyclic order must be positive")
            if m > self.group_cap:
                raise CapExceeded(f"Z/{m} above the cap {self.group_cap}")
            return GroupTable.cyclic(m)
        if which not in GROUP_KINDS:
            raise UsageError(f"unknown group {which!r}; expected one of {', '.join(GROUP_KINDS)} or cyclic:<m>")
        return group(R, which, self.group_cap)


def gj(G: FpAbelianGroup) -> dict:
    return G.to_json()


Result = Tuple[object, str, bool]   # (json payload, human text, failed)


# ---------------------------------------------------------------------------
# commands


def cmd_ring(ctx: Context, R) -> Result:
    data = {"ring": str(R.spec), "size": R.size, "field": R.is_field(), "local": R.is_local(),
            "units": len(R.units), "mu2": [R.render(a) for a in mu2(R)], "W_A": len(w_set(R))}
    text = "\n".join(f"{k}: {v}" for k, v in data.items())
    return data, text, False


def cmd_units(ctx: Context, R) -> Result:
    from .grpring import square_class_group

    U = unit_group(R)
    G = square_class_group(R)
    data = {"units": gj(U.structure), "generators": [R.render(g) for g in U.generators],
            "square_classes": [R.render(a) for a in G.reps], "W_A": [R.render(a) for a in w_set(R)]}
    text = (f"A* = {U.structure}  generated by {', '.join(data['generators'])}\n"
            f"G_A = (Z/2)^{G.dim}  classes {', '.join(data['square_classes'])}\n"
            f"W_A = {{{', '.join(data['W_A'])}}}")
    return data, text, False


def cmd_ge2(ctx: Context, R) -> Result:
    from .sl2 import is_ge2_ring, sl2_order, verify_ge2_relations

    rep = verify_ge2_relations(R)
    ge2 = is_ge2_ring(R, ctx.group_cap)
    data = {"SL2_order": sl2_order(R), "E2_is_SL2": ge2, "relations_ok": rep.ok,
            "exhaustive": rep.exhaustive, "checked": rep.checked, "failures": rep.failures[:20]}
    text = (f"|SL2| = {data['SL2_order']}, E2 = SL2: {ge2}\n"
            f"relations ({'exhaustive' if rep.exhaustive else 'sampled'}): {'ok' if rep.ok else 'FAILED'}")
    return data, text, not rep.ok


def cmd_complex(ctx: Context, R) -> Result:
    from .unimod import build_complex, complex_homology, orbit_decomposition

    a = ctx.args
    cap = 10 ** 5
    if a.action == "sizes":
        C = build_complex(R, ctx.max_degree, cap)
        sizes = [C.size(n) for n in range(C.N + 1)]
        return {"sizes": sizes}, "  ".join(f"X_{n}: {s}" for n, s in enumerate(sizes)), False
    if a.action == "check":
        C = build_complex(R, ctx.max_degree, cap)
        ok = C.check_dd()
        return {"dd_zero": ok}, f"d o d = 0: {ok}", not ok
    if not 0 <= a.dim <= ctx.max_degree - 1:
        raise UsageError(f"--dim must be between 0 and {ctx.max_degree - 1}")
    if a.action == "homology":
        H = complex_homology(R, a.dim, cap)
        label = "reduced H_0" if a.dim == 0 else f"H_{a.dim}"
        return gj(H), f"{label}(X(A^2)) = {H}", False
    C = build_complex(R, max(a.dim, 1), cap)
    orbits = orbit_decomposition(R, a.dim)
    data = [{"representative": C.render_tuple(C.bases[a.dim][o.representative]), "size": o.size,
             "stabilizer_order": len(o.stabilizer)} for o in orbits]
    lines = [f"{len(orbits)} orbits on X_{a.dim}"]
    lines += [f"  {d['representative']}  size {d['size']}  stabilizer {d['stabilizer_order']}" for d in data]
    return data, "\n".join(lines), False


def cmd_rp(ctx: Context, R) -> Result:
    from .scissors import rp_bar

    P = rp_bar(R)
    if ctx.args.csv:
        return None, P.relations_csv().rstrip("\n"), False
    data = gj(P.group)
    text = f"RPbar = {P.group}  ({len(P.symbols)} symbols, {len(P.pairs)} relation pairs, lambda well defined: {P.lam_well_defined})"
    if ctx.args.symbols:
        data = {"group": data, "symbols": [R.render(x) for x in P.symbols]}
        text += "\nsymbols: " + " ".join(f"[{R.render(x)}]" for x in P.symbols)
    return data, text, False


def cmd_rp_direct(ctx: Context, R) -> Result:
    from .unimod import rp_direct

    G = rp_direct(R)
    return gj(G), f"RP = {G}", False


def cmd_gw(ctx: Context, R) -> Result:
    from .scissors import witt

    wd = witt(R)
    return gj(wd.gw), f"GWbar = {wd.gw}\nIbar = {wd.i_bar}\nIbar/Ibar^2 = {wd.i_mod_i2}", False


def cmd_witt(ctx: Context, R) -> Result:
    from .scissors import witt

    W = witt(R).witt
    return gj(W), f"W = {W}", False


def cmd_k1mw(ctx: Context, R) -> Result:
    from .scissors import k1mw

    K = k1mw(R)
    ok = all(K.mw1.values()) and all(K.mw2.values())
    text = (f"K1MW = {K.group}\nMW1 exact: {all(K.mw1.values())}  MW2 exact: {all(K.mw2.values())}\n"
            + "\n".join(f"assumption: {s}" for s in K.assumptions))
    return gj(K.group), text, not ok


def _write_certificate(ctx: Context, cert: dict) -> None:
    dest = ctx.args.certificate
    body = json.dumps(cert, sort_keys=True, separators=(",", ":"))
    if dest == "-":
        print(body)
    else:
        with open(dest, "w") as fh:
            fh.write(body + "\n")


def _check_dim(n: int) -> None:
    if not 0 <= n <= 3:
        raise UsageError("--dim must be between 0 and 3")


def cmd_homology(ctx: Context, R) -> Result:
    from .homology import bar_complex, certificate, group_homology

    a = ctx.args
    _check_dim(a.dim)
    G = ctx.group(R, a.group)
    H = group_homology(G, a.dim, ctx.caps)
    if a.certificate:
        _write_certificate(ctx, certificate(bar_complex(G), a.dim))
    return gj(H), f"H_{a.dim}({a.group}, Z) = {H}   (|G| = {len(G)})", False


def cmd_rel_homology(ctx: Context, R) -> Result:
    from .homology import certificate, pair, relative_homology

    a = ctx.args
    _check_dim(a.dim)
    G, H = ctx.group(R, a.group), ctx.group(R, a.sub)
    if not G.contains_subgroup(H):
        raise UsageError(f"{a.sub} is not a subgroup of {a.group}")
    X = relative_homology(G, H, a.dim, caps=ctx.caps)
    if a.certificate:
        _write_certificate(ctx, certificate(pair(G, H).rel, a.dim))
    return gj(X), f"H_{a.dim}({a.group}, {a.sub}; Z) = {X}", False


def cmd_s_groups(ctx: Context, R) -> Result:
    from .homology import s_groups

    n = ctx.args.dim
    _check_dim(n)
    r = s_groups(R, n, ctx.caps)
    data = {"S": gj(r["S"]), "H_B": gj(r["H_B"]), "H_T": gj(r["H_T"]), "split": r["split"]}
    text = f"S_{n} = {r['S']}\nH_{n}(B) = {r['H_B']}  H_{n}(T) = {r['H_T']}  split: {r['split']}"
    return data, text, not r["split"]


def cmd_sm2(ctx: Context, R) -> Result:
    from .homology import sm2_checks

    r = sm2_checks(R, ctx.caps)
    data = {"H1": gj(r["H1"]), "H1_order_ok": r["H1_order_ok"], "h2_comparison": r["h2_status"]}
    lines = [f"H_1(SM2) = {r['H1']}  |H_1| = 2|G_A|: {r['H1_order_ok']}"]
    ok = r["H1_order_ok"]
    if r["h2_status"] == "checked":
        data.update({"H2": gj(r["H2"]), "wedge_quotient": gj(r["wedge_quotient"]), "H2_ok": r["H2_ok"]})
        lines.append(f"H_2(SM2) = {r['H2']}  wedge quotient = {r['wedge_quotient']}  equal: {r['H2_ok']}")
        ok = ok and r["H2_ok"]
    else:
        data["reason"] = r["reason"]
        lines.append(f"H_2 comparison {r['h2_status']}: {r['reason']}")
    return data, "\n".join(lines), not ok


COMMANDS: Dict[str, Callable[[Context, object], Result]] = {
    "ring": cmd_ring,
    "units": cmd_units,
    "ge2": cmd_ge2,
    "complex": cmd_complex,
    "rp": cmd_rp,
    "rp-direct": cmd_rp_direct,
    "gw": cmd_gw,
    "witt": cmd_witt,
    "k1mw": cmd_k1mw,
    "homology": cmd_homology,
    "rel-homology": cmd_rel_homology,
    "s-groups": cmd_s_groups,
    "sm2": cmd_sm2,
}


# ---------------------------------------------------------------------------
# verify


def _verify_ring(job) -> Tuple[List[dict], float]:
    """Worker: run one suite on one ring.  Returns check dicts and elapsed time."""
    suite, spec, opts, cache_dir = job
    from .verify import run_checks

    if cache_dir is not None:
        set_snf_cache(DiskCache(cache_dir))
    t = time.perf_counter()
    R = make_ring(parse_ring_spec(spec))
    checks = run_checks(suite, R, opts)
    return [c.to_json() for c in checks], time.perf_counter() - t


def run_verify(ctx: Context, specs: Sequence[str], cache_dir) -> int:
    from .verify import CHECKS, FAIL, SUITES, Options

    a = ctx.args
    if a.suite not in SUITES and a.suite not in CHECKS:
        raise UsageError(f"unknown suite or check {a.suite!r}; suites: {', '.join(SUITES)}; "
                         f"checks: {', '.join(CHECKS)}")
    opts = Options(caps=ctx.caps, group_cap=ctx.group_cap, max_degree=ctx.max_degree)
    jobs = [(a.suite, s, opts, cache_dir) for s in specs]
    if a.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=a.jobs) as pool:
            results = list(pool.map(_verify_ring, jobs))
    else:
        results = [_verify_ring(j) for j in jobs]
    checks = [c for cs, _ in results for c in cs]
    summary: Dict[str, int] = {}
    for c in checks:
        summary[c["status"]] = summary.get(c["status"], 0) + 1
    failed = summary.get(FAIL, 0) > 0
    if a.json:
        report = {"version": __version__, "command": f"verify {a.suite}", "rings": list(specs),
                  "checks": checks, "summary": dict(sorted(summary.items())), "ok": not failed}
        print(json.dumps(report, sort_keys=True, separators=(",", ":")))
    else:
        for (cs, dt), spec in zip(results, specs):
            for c in cs:
                extra = f"  ({c['payload']['reason']})" if "reason" in c["payload"] else ""
                print(f"{c['status']:<18} {spec:<16} {c['name']}{extra}")
            print(f"{'':<18} {spec:<16} [{dt:.2f}s]")
        print("summary: " + ", ".join(f"{k} {v}" for k, v in sorted(summary.items())))
        print("FAIL" if failed else "pass")
    return EXIT_FAIL if failed else EXIT_OK


# ---------------------------------------------------------------------------
# entry points


def _merge_sub_options(args):
    for key, value in list(vars(args).items()):
        if not key.startswith(SUB_PREFIX):
            continue
        delattr(args, key)
        name = key[len(SUB_PREFIX):]
        if name in _APPEND_OPTS:
            value = list(getattr(args, name)) + list(value)
        setattr(args, name, value)
    return args


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = _merge_sub_options(parser.parse_args(argv))
    try:
        ctx = Context(args)
        specs: List[str] = []
        for item in args.rings:
            specs.extend(split_ring_list(item))
        if not specs:
            raise UsageError("no ring given; use --ring SPEC")
        specs = [str(parse_ring_spec(s)) for s in specs]
        cache_dir = None
        if not args.no_cache:
            cache = DiskCache(args.cache_dir)
            cache_dir = str(cache.dir)
            set_snf_cache(cache)
        else:
            set_snf_cache(None)
        if args.command == "verify":
            return run_verify(ctx, specs, cache_dir)
        fn = COMMANDS[args.command]
        outputs = []
        failed = False
        for s in specs:
            R = make_ring(parse_ring_spec(s))
            data, text, bad = fn(ctx, R)
            failed = failed or bad
            outputs.append((s, data, text))
        if args.json:
            if len(outputs) == 1:
                print(_dump(outputs[0][1]))
            else:
                print(_dump({s: d for s, d, _ in outputs}))
        else:
            for s, _, text in outputs:
                if len(outputs) > 1:
                    print(f"== {s}")
                print(text)
        return EXIT_FAIL if failed else EXIT_OK
    except (UsageError, RingSpecError) as exc:
        print(f"rsc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as exc:
        print(f"rsc: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP


def main(argv: Optional[Sequence[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
