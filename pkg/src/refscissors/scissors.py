"""Presented models: refined scissors congruence, Grothendieck-Witt and Witt
groups, the map to the exterior/symmetric squares, and Milnor-Witt K_1.

Module elements of the presented groups are dicts {(class, symbol index): n}
where class is a square-class bitmask (see grpring).
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .abgrp import (AbMorphism, BilinearGroup, FiberProduct, FpAbelianGroup, direct_sum, fiber_product,
                    is_exact_at, preimage, sym2_square, tensor, wedge_square)
from .grpring import (GModulePresentation, GroupRingElem, SquareClassGroup, augmentation_ideal, bracket,
                      class_elem, p_minus1_plus, square_class_group)
from .ring import FiniteRing, unit_group, w_set

Elem = Dict[Tuple[int, int], int]


def relation_pairs(R: FiniteRing) -> List[Tuple[int, int]]:
    """Ordered pairs (x, y), x != y, with x, y, x/y all in W_A."""
    W = set(w_set(R))
    return [(x, y) for x in sorted(W) for y in sorted(W) if x != y and R.div(x, y) in W]


def five_term(R: FiniteRing, G: SquareClassGroup, sym: Dict[int, int], x: int, y: int) -> Elem:
    """The refined five-term relation attached to the pair (x, y)."""
    one = R.one
    xi, yi = R.inv(x), R.inv(y)
    terms = [
        (1, one, x),
        (-1, one, y),
        (1, x, R.div(y, x)),
        (-1, R.sub(xi, one), R.div(R.sub(one, xi), R.sub(one, yi))),
        (1, R.sub(one, x), R.div(R.sub(one, x), R.sub(one, y))),
    ]
    out: Elem = {}
    for sign, coeff, arg in terms:
        if arg not in sym:
            raise ArithmeticError(f"five-term argument {R.render(arg)} is not in W_A")
        key = (G.class_of(coeff), sym[arg])
        out[key] = out.get(key, 0) + sign
    return {k: v for k, v in out.items() if v}


@dataclass
class RPPresentation:
    ring: FiniteRing
    G: SquareClassGroup
    symbols: List[int]
    pairs: List[Tuple[int, int]]
    module: GModulePresentation
    lam: Optional[AbMorphism]
    lam_well_defined: bool

    @property
    def group(self) -> FpAbelianGroup:
        return self.module.group

    def symbol(self, x: int, c: int = 0) -> Elem:
        """<c>[x]."""
        if x not in self.module.symbol_index:
            raise ValueError(f"{self.ring.render(x)} is not in W_A")
        return {(c, self.module.symbol_index[x]): 1}

    def vector(self, e: Elem) -> Dict[int, int]:
        return self.module.flat_vector(e)

    def coords(self, e: Elem) -> Tuple[int, ...]:
        return self.group.coords(self.vector(e))

    def act(self, x: GroupRingElem, e: Elem) -> Elem:
        return self.module.act(x, e)

    def render_symbol(self, c: int, s: int) -> str:
        return f"⟨{self.G.name(c)}⟩[{self.ring.render(self.symbols[s])}]"

    def lambda_symbol(self, x: int) -> GroupRingElem:
        G = self.G
        return -(bracket(G, x) * bracket(G, self.ring.sub(self.ring.one, x)))

    def lambda_elem(self, e: Elem) -> GroupRingElem:
        out = GroupRingElem(self.G)
        for (c, s), v in e.items():
            out = out + GroupRingElem.basis(self.G, c) * self.lambda_symbol(self.symbols[s]) * v
        return out

    def relations_csv(self) -> str:
        """One row per flattened relation; columns are the flattened generators."""
        G = self.G
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        header = [self.render_symbol(c, s) for s in range(len(self.symbols)) for c in range(G.order)]
        w.writerow(header)
        for r in self.module.flat_relations():
            w.writerow([r.get(k, 0) for k in range(self.module.ngens)])
        return buf.getvalue()


def add(*elems: Elem) -> Elem:
    out: Elem = {}
    for e in elems:
        for k, v in e.items():
            out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


_RP_CACHE: Dict[object, RPPresentation] = {}


def rp_bar(R: FiniteRing) -> RPPresentation:
    if R.spec in _RP_CACHE:
        return _RP_CACHE[R.spec]
    G = square_class_group(R)
    W = sorted(w_set(R))
    sym = {x: i for i, x in enumerate(W)}
    pairs = relation_pairs(R)
    rels = [five_term(R, G, sym, x, y) for x, y in pairs]
    module = GModulePresentation(G, W, rels)
    ZG = FpAbelianGroup.free(G.order)
    P = RPPresentation(R, G, W, pairs, module, None, False)
    imgs = []
    for s, x in enumerate(W):
        lx = P.lambda_symbol(x)
        for c in range(G.order):
            imgs.append(dict(enumerate((GroupRingElem.basis(G, c) * lx).vector())))
    try:
        P.lam = AbMorphism(module.group, ZG, imgs)
        P.lam_well_defined = True
    except ValueError:
        P.lam = AbMorphism(module.group, ZG, imgs, check=False)
    _RP_CACHE[R.spec] = P
    return P


def rp1_bar(R: FiniteRing) -> Tuple[FpAbelianGroup, AbMorphism]:
    """Kernel of lambda on the presented group, with its inclusion."""
    return rp_bar(R).lam.kernel()


def in_rp1_bar(R: FiniteRing, e: Elem) -> bool:
    P = rp_bar(R)
    return not any(P.lam(P.vector(e)))


def _check_w(R: FiniteRing, a: int) -> None:
    if a not in set(w_set(R)):
        raise ValueError(f"{R.render(a)} is not in W_A")


def psi1_bar(R: FiniteRing, a: int) -> Elem:
    """[a] + <-1>[a^-1]."""
    _check_w(R, a)
    P = rp_bar(R)
    m1 = P.G.class_of(R.neg(R.one))
    return add(P.symbol(a), P.symbol(R.inv(a), m1))


def g_elem(R: FiniteRing, a: int) -> Elem:
    """p_{-1}^+ [a] + <<1 - a>> psi1_bar(a)."""
    _check_w(R, a)
    P = rp_bar(R)
    G = P.G
    return add(P.act(p_minus1_plus(G), P.symbol(a)), P.act(bracket(G, R.sub(R.one, a)), psi1_bar(R, a)))


# ---------------------------------------------------------------------------
# Grothendieck-Witt and Witt groups


@dataclass
class WittData:
    G: SquareClassGroup
    gw: FpAbelianGroup            # Z[G_A] / translates of <<a>><<1-a>>
    epsilon: AbMorphism           # augmentation gw -> Z
    i_bar: FpAbelianGroup         # I_A / same translates (basis <<g>>, g != 1)
    i_inclusion: AbMorphism       # i_bar -> gw
    i2: FpAbelianGroup            # image of I_A^2 in i_bar
    i2_inclusion: AbMorphism
    i_mod_i2: FpAbelianGroup
    i_projection: AbMorphism      # i_bar -> i_bar / i2
    witt: FpAbelianGroup          # gw / translates of <-1> + 1
    witt_projection: AbMorphism

    def gw_vector(self, x: GroupRingElem) -> Dict[int, int]:
        return {c: v for c, v in x.coeffs.items()}

    def i_vector(self, x: GroupRingElem) -> Dict[int, int]:
        if x.augmentation():
            raise ValueError("element has nonzero augmentation")
        return {c - 1: v for c, v in x.coeffs.items() if c}


def gw_relations(R: FiniteRing) -> List[GroupRingElem]:
    """All G_A-translates of <<a>><<1-a>>, a in W_A."""
    G = square_class_group(R)
    out = []
    for a in w_set(R):
        r = bracket(G, a) * bracket(G, R.sub(R.one, a))
        for g in G.elements():
            out.append(GroupRingElem.basis(G, g) * r)
    return out


_WITT_CACHE: Dict[object, WittData] = {}


def witt(R: FiniteRing) -> WittData:
    if R.spec in _WITT_CACHE:
        return _WITT_CACHE[R.spec]
    G = square_class_group(R)
    n = G.order
    rels = gw_relations(R)
    gw = FpAbelianGroup(n, [r.vector() for r in rels], name="GW")
    Z = FpAbelianGroup.free(1)
    eps = AbMorphism(gw, Z, [{0: 1}] * n)
    aug = augmentation_ideal(G)
    ib = FpAbelianGroup(n - 1, [aug.coords_of(r) for r in rels], name="I")
    inc = AbMorphism(ib, gw, [{c: 1, 0: -1} for c in range(1, n)])
    prods = []
    for c in range(1, n):
        for d in range(c, n):
            prods.append(aug.coords_of(GroupRingElem(G, {c: 1, 0: -1}) * GroupRingElem(G, {d: 1, 0: -1})))
    sq = AbMorphism(FpAbelianGroup.free(len(prods)), ib, prods)
    i2, i2_inc = sq.image()
    q, proj = i2_inc.cokernel()
    p = p_minus1_plus(G)
    wrels = [r.vector() for r in rels] + [(GroupRingElem.basis(G, g) * p).vector() for g in G.elements()]
    W = FpAbelianGroup(n, wrels, name="W")
    wproj = AbMorphism(gw, W, [{c: 1} for c in range(n)])
    data = WittData(G, gw, eps, ib, inc, i2, i2_inc, q, proj, W, wproj)
    _WITT_CACHE[R.spec] = data
    return data


def gw_bar(R: FiniteRing) -> WittData:
    return witt(R)


def i_bar(R: FiniteRing) -> FpAbelianGroup:
    return witt(R).i_bar


# ---------------------------------------------------------------------------
# exterior / symmetric squares


@dataclass
class ThetaResult:
    map: AbMorphism
    well_defined: bool
    wedge: BilinearGroup
    sym2: BilinearGroup
    offset: int                   # index of the first S^2 generator in the sum

    def target_vector(self, a: int, b: int, R: FiniteRing) -> Dict[int, int]:
        """(a^b, -a.b) as a generator vector of the target."""
        U = unit_group(R)
        va, vb = U.vector(a), U.vector(b)
        out = dict(self.wedge(va, vb))
        for k, v in self.sym2(va, vb).items():
            out[k + self.offset] = out.get(k + self.offset, 0) - v
        return out


def theta_map(R: FiniteRing) -> ThetaResult:
    """[x] -> (x ^ (1-x), -x (x) (1-x)) into Lambda^2(A*) + S^2(A*), trivial G-action."""
    P = rp_bar(R)
    U = unit_group(R).structure
    Wg, Sg = wedge_square(U), sym2_square(U)
    target = direct_sum(Wg.group, Sg.group).group
    res = ThetaResult(None, False, Wg, Sg, Wg.group.ngens)  # type: ignore[arg-type]
    imgs = []
    for x in P.symbols:
        v = res.target_vector(x, R.sub(R.one, x), R)
        imgs.extend([v] * P.G.order)
    try:
        res.map = AbMorphism(P.group, target, imgs)
        res.well_defined = True
    except ValueError:
        res.map = AbMorphism(P.group, target, imgs, check=False)
    return res


def theta_g_check(R: FiniteRing) -> Dict[int, bool]:
    """Whether Theta(g(a)) = 2 (a^(1-a), -a.(1-a)) for each a in W_A."""
    P = rp_bar(R)
    th = theta_map(R)
    T = th.map.target
    out = {}
    for a in P.symbols:
        lhs = th.map(P.vector(g_elem(R, a)))
        v = th.target_vector(a, R.sub(R.one, a), R)
        rhs = T.coords({k: 2 * c for k, c in v.items()})
        out[a] = tuple(lhs) == tuple(rhs)
    return out


# ---------------------------------------------------------------------------
# Milnor-Witt K_1


@dataclass
class MWK1:
    units: FpAbelianGroup                 # K_1^M, taken to be A*
    to_quotient_units: AbMorphism         # A* -> I/I^2, a -> <<a>>
    to_quotient_i: AbMorphism             # I -> I/I^2
    fiber: FiberProduct
    mw1: Dict[str, bool] = field(default_factory=dict)
    mw2: Dict[str, bool] = field(default_factory=dict)
    assumptions: List[str] = field(default_factory=list)
    mw1_maps: Tuple[AbMorphism, ...] = ()   # I^2 -> K -> A*
    mw2_maps: Tuple[AbMorphism, ...] = ()   # 2A* -> K -> I

    @property
    def group(self) -> FpAbelianGroup:
        return self.fiber.group


def _into_fiber(F: FiberProduct, imgs_in_sum: Sequence[Sequence[int]], source: FpAbelianGroup) -> AbMorphism:
    coords = []
    for y in imgs_in_sum:
        c = preimage(F.inclusion, y)
        if c is None:
            raise ValueError("element does not lie in the fiber product")
        coords.append(c)
    return AbMorphism.from_coords(source, F.group, coords)


def k1mw(R: FiniteRing) -> MWK1:
    wd = witt(R)
    G = wd.G
    Ug = unit_group(R)
    U = Ug.structure
    aug = augmentation_ideal(G)
    imgs = []
    for u in Ug.generators:
        imgs.append(list(wd.i_projection(aug.coords_of(bracket(G, u)))))
    f = AbMorphism.from_coords(U, wd.i_mod_i2, imgs)
    F = fiber_product(f, wd.i_projection)
    ds = direct_sum(U, wd.i_bar)
    S = ds.group
    res = MWK1(U, f, wd.i_projection, F, assumptions=["K_1^M(A) is taken to be the unit group A*"])
    if S.rank != F.inclusion.target.rank:
        raise ArithmeticError("fiber product ambient mismatch")

    # MW1: 0 -> I^2 -> K -> A* -> 0 with x -> (1, x)
    i2 = wd.i2
    a_imgs = [S.coords({k + U.ngens: v for k, v in wd.i_bar.lift_coords(col).items()}) for col in wd.i2_inclusion.gen_images]
    a = _into_fiber(F, a_imgs, i2)
    res.mw1 = {
        "injective": a.is_injective(),
        "exact_middle": is_exact_at(a, F.proj_left),
        "surjective": F.proj_left.is_surjective(),
    }
    o_k, o_i2, o_u = F.group.order(), i2.order(), U.order()
    if None not in (o_k, o_i2, o_u):
        res.mw1["orders"] = o_k == o_i2 * o_u

    # MW2: 0 -> 2A* -> K -> I -> 0 with a^2 -> (a^2, 0)
    two = AbMorphism(U, U, [{g: 2} for g in range(U.ngens)])
    sq, sq_inc = two.image()
    b_imgs = [S.coords(U.lift_coords(col)) for col in sq_inc.gen_images]
    b = _into_fiber(F, b_imgs, sq)
    res.mw2 = {
        "injective": b.is_injective(),
        "exact_middle": is_exact_at(b, F.proj_right),
        "surjective": F.proj_right.is_surjective(),
    }
    o_sq, o_i = sq.order(), wd.i_bar.order()
    if None not in (o_k, o_sq, o_i):
        res.mw2["orders"] = o_k == o_sq * o_i
    res.mw1_maps = (a, F.proj_left)
    res.mw2_maps = (b, F.proj_right)
    return res


# ---------------------------------------------------------------------------
# kernel of G_A (x) mu_2 -> Lambda^2(A*)


@dataclass
class Z2Kernel:
    source: FpAbelianGroup
    map: AbMorphism
    kernel: FpAbelianGroup

    @property
    def order(self) -> Optional[int]:
        return self.kernel.order()


def z2_kernel(R: FiniteRing) -> Z2Kernel:
    G = square_class_group(R)
    Ug = unit_group(R)
    U = Ug.structure
    GA = G.as_group()
    two = AbMorphism(U, U, [{g: 2} for g in range(U.ngens)])
    M, m_inc = two.kernel()
    T = tensor(GA, M)
    Wg = wedge_square(U)
    imgs = []
    for i in range(GA.ngens):
        va = Ug.vector(G.reps[1 << i])
        for j in range(M.ngens):
            vb = U.lift_coords(m_inc(M.gen(j)))
            imgs.append(Wg(va, vb))
    f = AbMorphism(T.group, Wg.group, imgs)
    return Z2Kernel(T.group, f, f.kernel()[0])

