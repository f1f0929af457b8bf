"""Verification suites: per-ring checks with pass / fail / skipped / reported status.

"fail" is reserved for identities that hold unconditionally; comparisons whose
truth depends on unverified hypotheses are "reported".
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from .abgrp import FpAbelianGroup
from .grpring import GroupRingElem, bracket, p_minus1_plus, square_class_group
from .ring import FiniteRing, h0_units_on_A, mu2, w_set
from .sl2 import CapExceeded, DEFAULT_GROUP_CAP, group, is_ge2_ring, sl2_order, verify_ge2_relations

PASS, FAIL, SKIP_HYP, SKIP_CAP, REPORTED = "pass", "fail", "skipped:hypothesis", "skipped:cap", "reported"


def group_json(G: FpAbelianGroup) -> dict:
    return G.to_json()


@dataclass
class Check:
    name: str
    ring: str
    status: str
    payload: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "ring": self.ring, "status": self.status, "payload": self.payload}


@dataclass
class Options:
    caps: Dict[int, int] = field(default_factory=dict)
    group_cap: int = DEFAULT_GROUP_CAP
    complex_cap: int = 10 ** 5
    max_degree: int = 4


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


def _run(name: str, R: FiniteRing, fn: Callable[[], Check]) -> Check:
    try:
        return fn()
    except CapExceeded as exc:
        return Check(name, str(R.spec), SKIP_CAP, {"reason": str(exc)})


# ---------------------------------------------------------------------------
# individual checks


def check_relations(R: FiniteRing, opt: Options) -> Check:
    rep = verify_ge2_relations(R)
    return Check("ge2-relations", str(R.spec), _status(rep.ok),
                 {"exhaustive": rep.exhaustive, "checked": rep.checked, "failures": rep.failures[:10]})


def check_ge2_h0(R: FiniteRing, opt: Options) -> Check:
    from .unimod import complex_homology

    ge2 = is_ge2_ring(R, opt.group_cap)
    h0 = complex_homology(R, 0, opt.complex_cap)
    return Check("ge2-iff-h0", str(R.spec), _status(ge2 == h0.is_trivial()),
                 {"ge2": ge2, "H0": group_json(h0)})


def check_dd(R: FiniteRing, opt: Options) -> Check:
    from .unimod import build_complex

    C = build_complex(R, min(opt.max_degree, 4), opt.complex_cap)
    return Check("complex-dd", str(R.spec), _status(C.check_dd()),
                 {"sizes": [C.size(n) for n in range(C.N + 1)]})


def check_h1_local(R: FiniteRing, opt: Options) -> Check:
    from .unimod import complex_homology

    h1 = complex_homology(R, 1, opt.complex_cap)
    local = R.is_local()
    status = _status(h1.is_trivial()) if local else REPORTED
    return Check("complex-h1", str(R.spec), status, {"local": local, "H1": group_json(h1)})


def check_orbits(R: FiniteRing, opt: Options) -> Check:
    from .unimod import orbit_decomposition

    G = square_class_group(R)
    W = w_set(R)
    o2 = orbit_decomposition(R, 2)
    o3 = orbit_decomposition(R, 3, with_stabilizers=False)
    mu = set(mu2(R))
    stab_ok = all({X[0] for X in o.stabilizer} == mu and all(X[0] == X[3] and X[1] == X[2] == R.zero
                                                             for X in o.stabilizer) for o in o2)
    ok = len(o2) == G.order and len(o3) == G.order * len(W) and stab_ok
    status = _status(ok) if R.is_field() else REPORTED
    return Check("orbits", str(R.spec), status,
                 {"X2_orbits": len(o2), "X3_orbits": len(o3), "G_A": G.order, "W_A": len(W), "stabilizer_mu2": stab_ok})


def check_lambda_psi(R: FiniteRing, opt: Options) -> Check:
    from .scissors import g_elem, in_rp1_bar, psi1_bar, rp_bar

    P = rp_bar(R)
    G = P.G
    p = p_minus1_plus(G)
    bad = []
    for a in P.symbols:
        got = GroupRingElem(G, dict(enumerate(P.lam(P.vector(psi1_bar(R, a))))))
        if got != p * bracket(G, a):
            bad.append(f"lambda(psi1({R.render(a)}))")
        if not in_rp1_bar(R, g_elem(R, a)):
            bad.append(f"g({R.render(a)}) not in kernel")
    ok = P.lam_well_defined and not bad
    return Check("lambda-psi1", str(R.spec), _status(ok),
                 {"lambda_well_defined": P.lam_well_defined, "RPbar": group_json(P.group), "failures": bad})


def check_theta(R: FiniteRing, opt: Options) -> Check:
    from .scissors import theta_g_check, theta_map

    th = theta_map(R)
    g = theta_g_check(R)
    ok = th.well_defined and all(g.values())
    return Check("theta", str(R.spec), _status(ok),
                 {"well_defined": th.well_defined, "theta_g": {R.render(a): v for a, v in g.items()}})


def check_rp_relation_count(R: FiniteRing, opt: Options) -> Check:
    from .scissors import rp_bar

    P = rp_bar(R)
    n = len(P.module.flat_relations())
    return Check("rp-relation-count", str(R.spec), _status(n == P.G.order * len(P.pairs)),
                 {"relations": n, "pairs": len(P.pairs), "G_A": P.G.order})


def check_psi1_squares(R: FiniteRing, opt: Options) -> Check:
    from .unimod import direct_models

    dm = direct_models(R, opt.complex_cap)
    bad = [R.render(a) for a in R.units if any(dm.psi1(R.mul(a, a)))]
    status = _status(not bad) if R.is_field() else REPORTED
    return Check("psi1-squares", str(R.spec), status, {"RP": group_json(dm.rp.group), "nonzero_at": bad})


def check_z2_kernel(R: FiniteRing, opt: Options) -> Check:
    from .scissors import z2_kernel

    k = z2_kernel(R)
    order = k.order
    if R.is_field():
        return Check("z2-kernel", str(R.spec), _status(order is not None and order <= 2), {"order": order})
    return Check("z2-kernel", str(R.spec), REPORTED, {"order": order})


def check_witt_values(R: FiniteRing, opt: Options) -> Check:
    from .scissors import witt

    wd = witt(R)
    payload = {"GW": group_json(wd.gw), "I": group_json(wd.i_bar), "I2": group_json(wd.i2),
               "I/I2": group_json(wd.i_mod_i2), "W": group_json(wd.witt)}
    # for finite fields compare with the classical Witt group: order 2 in
    # characteristic 2, otherwise order 4 and cyclic iff -1 is not a square
    if R.is_field():
        if R.size % 2 == 0:
            expect = FpAbelianGroup.from_invariants([2])
        else:
            cyclic = square_class_group(R).class_of(R.neg(R.one)) != 0
            expect = FpAbelianGroup.from_invariants([4] if cyclic else [2, 2])
        payload["classical"] = group_json(expect)
        return Check("witt-classical", str(R.spec), _status(wd.witt.is_isomorphic(expect)), payload)
    return Check("witt-values", str(R.spec), REPORTED, payload)


def check_k1mw(R: FiniteRing, opt: Options) -> Check:
    from .scissors import k1mw

    K = k1mw(R)
    flags = {**{f"MW1.{k}": v for k, v in K.mw1.items()}, **{f"MW2.{k}": v for k, v in K.mw2.items()}}
    return Check("k1mw", str(R.spec), _status(all(flags.values())),
                 {"K1MW": group_json(K.group), **flags, "assumptions": K.assumptions})


def check_compare(R: FiniteRing, opt: Options) -> Check:
    from .unimod import compare_presented_direct, complex_homology

    rep = compare_presented_direct(R)
    payload = {k: (v.to_json() if hasattr(v, "to_json") else v) for k, v in rep.items()}
    # exactness below dimension 3 makes the three maps surjective
    exact = all(complex_homology(R, k, opt.complex_cap).is_trivial() for k in range(3))
    payload["exact_below_3"] = exact
    wd_ok = all(v.well_defined for v in (rep["rp"], rep["gw"], rep["i"])) and rep["lambda_compatible"]
    if not wd_ok:
        status = FAIL
    elif exact:
        status = _status(all(v.surjective for v in (rep["rp"], rep["gw"], rep["i"])))
    else:
        status = REPORTED
    return Check("compare-presented-direct", str(R.spec), status, payload)


def check_sm2(R: FiniteRing, opt: Options) -> Check:
    from .homology import sm2_checks

    r = sm2_checks(R, opt.caps)
    payload = {"H1": group_json(r["H1"]), "H1_order_ok": r["H1_order_ok"], "h2_comparison": r["h2_status"]}
    ok = r["H1_order_ok"]
    if r["h2_status"] == "checked":
        payload.update({"H2": group_json(r["H2"]), "wedge_quotient": group_json(r["wedge_quotient"])})
        ok = ok and r["H2_ok"]
    else:
        payload["reason"] = r["reason"]
    return Check("sm2", str(R.spec), _status(ok), payload)


def check_s1(R: FiniteRing, opt: Options) -> Check:
    from .homology import s_groups

    r = s_groups(R, 1, opt.caps)
    h0 = h0_units_on_A(R)
    ok = r["S"].is_isomorphic(h0) and r["split"]
    return Check("s1", str(R.spec), _status(ok),
                 {"S1": group_json(r["S"]), "H0(A*,A)": group_json(h0), "split": r["split"]})


def check_s2_split(R: FiniteRing, opt: Options) -> Check:
    from .homology import s_groups

    r = s_groups(R, 2, opt.caps)
    return Check("s2-split", str(R.spec), _status(r["split"]),
                 {"S2": group_json(r["S"]), "H2(B)": group_json(r["H_B"]), "H2(T)": group_json(r["H_T"])})


def check_x_classes(R: FiniteRing, opt: Options) -> Check:
    from .homology import x_class

    vals = {}
    for b in mu2(R):
        for a in R.elements():
            vals[f"{R.render(a)},{R.render(b)}"] = list(x_class(R, a, b, opt.caps))
    zero = all(not any(v) for v in vals.values())
    two_unit = R.is_unit(R.from_int(2))
    status = _status(zero) if two_unit else REPORTED
    return Check("x-classes", str(R.spec), status, {"all_zero": zero, "2_invertible": two_unit})


def check_les_bt(R: FiniteRing, opt: Options) -> Check:
    from .homology import long_exact_sequence

    B, T = group(R, "B", opt.group_cap), group(R, "T", opt.group_cap)
    rep = long_exact_sequence(B, T, 2, opt.caps)
    return Check("les-B-T", str(R.spec), _status(rep.exact), {"spots": rep.spots})


def check_relative_sl2_sm2(R: FiniteRing, opt: Options) -> Check:
    from .homology import long_exact_sequence, relative_sl2_sm2

    from .homology import DEFAULT_CAPS

    if sl2_order(R) > {**DEFAULT_CAPS, **opt.caps}[3]:
        raise CapExceeded(f"|SL2({R.spec})| = {sl2_order(R)} above the degree-3 cap")
    r = relative_sl2_sm2(R, 2, opt.caps)
    les = long_exact_sequence(group(R, "SL2"), group(R, "SM2"), 2, opt.caps)
    payload = {"H2": group_json(r["H"]), "W": group_json(r["W"]), "matches_W": r["matches_W"],
               "hypotheses": r["hypotheses"], "les_spots": les.spots}
    # the comparison with W is conditional; exactness of the sequence is not
    return Check("relative-sl2-sm2", str(R.spec), REPORTED if les.exact else FAIL, payload)


SUITES: Dict[str, List[Callable[[FiniteRing, Options], Check]]] = {
    "ge2": [check_relations, check_dd, check_ge2_h0, check_h1_local, check_orbits],
    "scissors": [check_rp_relation_count, check_lambda_psi, check_theta, check_z2_kernel, check_psi1_squares],
    "witt": [check_witt_values, check_k1mw, check_compare],
    "homology": [check_sm2, check_s1, check_s2_split, check_x_classes, check_les_bt, check_relative_sl2_sm2],
}
SUITES["all"] = [c for k in ("ge2", "scissors", "witt", "homology") for c in SUITES[k]]

CHECKS: Dict[str, Callable[[FiniteRing, Options], Check]] = {
    "ge2-relations": check_relations,
    "complex-dd": check_dd,
    "ge2-iff-h0": check_ge2_h0,
    "complex-h1": check_h1_local,
    "orbits": check_orbits,
    "rp-relation-count": check_rp_relation_count,
    "lambda-psi1": check_lambda_psi,
    "theta": check_theta,
    "z2-kernel": check_z2_kernel,
    "psi1-squares": check_psi1_squares,
    "witt-classical": check_witt_values,
    "k1mw": check_k1mw,
    "compare-presented-direct": check_compare,
    "sm2": check_sm2,
    "s1": check_s1,
    "s2-split": check_s2_split,
    "x-classes": check_x_classes,
    "les-B-T": check_les_bt,
    "relative-sl2-sm2": check_relative_sl2_sm2,
}


def run_checks(name: str, R: FiniteRing, opt: Optional[Options] = None) -> List[Check]:
    opt = opt or Options()
    fns = SUITES.get(name) or ([CHECKS[name]] if name in CHECKS else None)
    if fns is None:
        raise KeyError(name)
    out = []
    for fn in fns:
        cname = next(k for k, v in CHECKS.items() if v is fn)
        out.append(_run(cname, R, lambda fn=fn: fn(R, opt)))
    return out
