"""Group homology of small finite groups from the normalized bar complex.

Coefficients are either trivial Z or a permutation module Z[S] for a finite
G-set S.  Relative homology of a pair (G, G'; Z[S], Z[S']) is the homology of
the quotient of bar complexes, whose basis is the set of cells not lying in
the subcomplex.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .abgrp import AbMorphism, FpAbelianGroup, direct_sum, is_exact_at, preimage, smith_normal_form, wedge_square
from .grpring import square_class_group
from .ring import FiniteRing, mu2, unit_group
from .sl2 import CapExceeded, GroupTable, group
from .snf import IntMatrix

Chain = Dict[int, int]
Cell = Tuple[Tuple[int, ...], int]

# |G| limits per homological degree (C_{n+1} has (|G|-1)^(n+1) cells)
DEFAULT_CAPS = {0: 10 ** 6, 1: 2000, 2: 120, 3: 48}


def check_cap(G: GroupTable, n: int, caps: Optional[Dict[int, int]] = None) -> None:
    caps = {**DEFAULT_CAPS, **(caps or {})}
    limit = caps.get(n, 0)
    if len(G) > limit:
        raise CapExceeded(f"H_{n} of a group of order {len(G)} exceeds the cap |G| <= {limit}")


@dataclass
class GSet:
    """A finite G-set: ``act[g][s]`` is the index of g.s."""

    size: int
    act: List[List[int]]

    @classmethod
    def point(cls, G: GroupTable) -> "GSet":
        return cls(1, [[0] for _ in range(len(G))])

    @classmethod
    def cosets(cls, G: GroupTable, H: Sequence[int]) -> "GSet":
        """Left cosets G/H with the translation action."""
        Hs = set(H)
        reps: List[int] = []
        label: Dict[int, int] = {}
        for g in range(len(G)):
            if g in label:
                continue
            k = len(reps)
            reps.append(g)
            for h in Hs:
                label[G.mul(g, h)] = k
        act = [[label[G.mul(g, r)] for r in reps] for g in range(len(G))]
        return cls(len(reps), act)


class BarComplex:
    """Normalized bar complex C_n(G) (x)_G Z[S], optionally modulo a subpair.

    With ``sub`` (indices of a subgroup G') and ``sub_points`` (a G'-stable
    subset S' of S), cells whose group entries all lie in G' and whose point
    lies in S' are quotiented out.
    """

    def __init__(self, G: GroupTable, gset: Optional[GSet] = None,
                 sub: Optional[Sequence[int]] = None, sub_points: Optional[Sequence[int]] = None):
        self.G = G
        self.gset = gset or GSet.point(G)
        self.sub = set(sub) if sub is not None else None
        self.sub_points = set(sub_points) if sub_points is not None else (
            set(range(self.gset.size)) if sub is not None else None)
        if self.sub is not None:
            self._check_subpair()
        self.nonid = [g for g in range(len(G)) if g != G.identity]
        self._bases: Dict[int, List[Cell]] = {}
        self._index: Dict[int, Dict[Cell, int]] = {}

    def _check_subpair(self) -> None:
        G = self.G
        for a in self.sub:
            for b in self.sub:
                if G.mul(a, b) not in self.sub:
                    raise ValueError("subgroup is not closed under multiplication")
        if G.identity not in self.sub:
            raise ValueError("subgroup does not contain the identity")
        for h in self.sub:
            for s in self.sub_points:
                if self.gset.act[h][s] not in self.sub_points:
                    raise ValueError("submodule is not stable under the subgroup")

    def in_sub(self, cell: Cell) -> bool:
        if self.sub is None:
            return False
        t, s = cell
        return s in self.sub_points and all(g in self.sub for g in t)

    def basis(self, n: int) -> List[Cell]:
        if n not in self._bases:
            if n < 0:
                cells: List[Cell] = []
            else:
                cells = [(t, s) for t in product(self.nonid, repeat=n) for s in range(self.gset.size)]
                if self.sub is not None:
                    cells = [c for c in cells if not self.in_sub(c)]
            self._bases[n] = cells
            self._index[n] = {c: i for i, c in enumerate(cells)}
        return self._bases[n]

    def index(self, n: int) -> Dict[Cell, int]:
        self.basis(n)
        return self._index[n]

    def size(self, n: int) -> int:
        return len(self.basis(n))

    def faces(self, cell: Cell) -> List[Tuple[Cell, int]]:
        """Boundary of a cell in the ambient complex (normalized)."""
        G = self.G
        t, s = cell
        n = len(t)
        if n == 0:
            return []
        out = [((t[1:], self.gset.act[G.inv(t[0])][s]), 1)]
        for i in range(n - 1):
            p = G.mul(t[i], t[i + 1])
            if p != G.identity:
                out.append(((t[:i] + (p,) + t[i + 2:], s), -1 if (i + 1) % 2 else 1))
        out.append(((t[:-1], s), -1 if n % 2 else 1))
        return out

    def boundary_cell(self, cell: Cell) -> Chain:
        n = len(cell[0])
        idx = self.index(n - 1)
        out: Chain = {}
        for c, v in self.faces(cell):
            if self.in_sub(c):
                continue
            k = idx[c]
            out[k] = out.get(k, 0) + v
        return {k: v for k, v in out.items() if v}

    def boundary(self, n: int, z: Chain) -> Chain:
        B = self.basis(n)
        out: Chain = {}
        for k, c in z.items():
            for f, v in self.boundary_cell(B[k]).items():
                out[f] = out.get(f, 0) + c * v
        return {f: v for f, v in out.items() if v}

    def boundary_columns(self, n: int) -> List[Chain]:
        return [self.boundary_cell(c) for c in self.basis(n)]

    def check_dd(self, n: int) -> bool:
        for k in range(self.size(n)):
            if self.boundary(n - 1, self.boundary(n, {k: 1})):
                return False
        return True

    def chain(self, *terms: Tuple[int, Sequence[int]], point: int = 0) -> Chain:
        """Chain from (coefficient, tuple of group indices) pairs; identity entries vanish."""
        out: Chain = {}
        for c, t in terms:
            t = tuple(t)
            if self.G.identity in t or self.in_sub((t, point)):
                continue
            k = self.index(len(t))[(t, point)]
            out[k] = out.get(k, 0) + c
        return {k: v for k, v in out.items() if v}


@dataclass
class Homology:
    """H_n with the data needed to name classes of cycles."""

    complex: BarComplex
    n: int
    group: FpAbelianGroup
    inclusion: AbMorphism         # H_n -> C_n / im d_{n+1}
    quotient: FpAbelianGroup      # C_n / im d_{n+1}

    def class_of(self, z: Chain) -> Tuple[int, ...]:
        """Canonical coordinates in H_n of the cycle z."""
        if self.n > 0 and self.complex.boundary(self.n, z):
            raise ValueError("chain is not a cycle")
        y = self.quotient.coords(z)
        c = preimage(self.inclusion, y)
        if c is None:
            raise ArithmeticError("cycle class not found in homology")
        return c

    def generator_cycles(self) -> List[Chain]:
        out = []
        for i in range(self.group.rank):
            y = self.inclusion.cols[i]
            out.append(self.quotient.lift_coords(y))
        return out


def homology(C: BarComplex, n: int) -> Homology:
    Q = FpAbelianGroup(C.size(n), C.boundary_columns(n + 1))
    if n == 0:
        f = AbMorphism.from_coords(Q, FpAbelianGroup.zero(), [()] * C.size(0), check=False)
    else:
        f = AbMorphism(Q, FpAbelianGroup.free(C.size(n - 1)), C.boundary_columns(n))
    K, inc = f.kernel()
    return Homology(C, n, K, inc, Q)


_BAR_CACHE: Dict[Tuple, BarComplex] = {}
_H_CACHE: Dict[Tuple, Homology] = {}


def bar_complex(G: GroupTable) -> BarComplex:
    key = (id(G),)
    if key not in _BAR_CACHE:
        _BAR_CACHE[key] = BarComplex(G)
    return _BAR_CACHE[key]


def group_homology_data(G: GroupTable, n: int, caps: Optional[Dict[int, int]] = None) -> Homology:
    check_cap(G, n, caps)
    key = (id(G), n)
    if key not in _H_CACHE:
        _H_CACHE[key] = homology(bar_complex(G), n)
    return _H_CACHE[key]


def group_homology(G: GroupTable, n: int, caps: Optional[Dict[int, int]] = None) -> FpAbelianGroup:
    """H_n(G; Z) for n <= 3."""
    if not 0 <= n <= 3:
        raise ValueError("degree must be between 0 and 3")
    return group_homology_data(G, n, caps).group


# ---------------------------------------------------------------------------
# relative homology and the long exact sequence


@dataclass
class PairData:
    G: GroupTable
    H: GroupTable
    embedding: List[int]              # index in G of each element of H
    ambient: BarComplex
    sub: BarComplex                   # bar complex of H
    rel: BarComplex                   # quotient complex

    def translate(self, z: Chain, n: int) -> Chain:
        """Push a chain of H into G."""
        src, dst = self.sub.basis(n), self.ambient.index(n)
        e = self.embedding
        out: Chain = {}
        for k, v in z.items():
            t, s = src[k]
            out[dst[(tuple(e[g] for g in t), s)]] = v
        return out

    def project(self, z: Chain, n: int) -> Chain:
        src, dst = self.ambient.basis(n), self.rel.index(n)
        out: Chain = {}
        for k, v in z.items():
            c = src[k]
            if not self.rel.in_sub(c):
                out[dst[c]] = out.get(dst[c], 0) + v
        return out

    def lift(self, z: Chain, n: int) -> Chain:
        src, dst = self.rel.basis(n), self.ambient.index(n)
        return {dst[src[k]]: v for k, v in z.items()}

    def restrict(self, z: Chain, n: int) -> Chain:
        """A chain of G supported on H, as a chain of H."""
        src = self.ambient.basis(n)
        inv = {g: i for i, g in enumerate(self.embedding)}
        dst = self.sub.index(n)
        out: Chain = {}
        for k, v in z.items():
            t, s = src[k]
            out[dst[(tuple(inv[g] for g in t), s)]] = v
        return out


def make_pair(G: GroupTable, H: GroupTable) -> PairData:
    emb = G.subgroup_embedding(H)
    return PairData(G, H, emb, bar_complex(G), bar_complex(H), BarComplex(G, sub=emb))


_PAIR_CACHE: Dict[Tuple[int, int], PairData] = {}
_REL_CACHE: Dict[Tuple[int, int, int], Homology] = {}


def pair(G: GroupTable, H: GroupTable) -> PairData:
    key = (id(G), id(H))
    if key not in _PAIR_CACHE:
        _PAIR_CACHE[key] = make_pair(G, H)
    return _PAIR_CACHE[key]


def relative_homology_data(G: GroupTable, H: GroupTable, n: int, caps: Optional[Dict[int, int]] = None) -> Homology:
    check_cap(G, n, caps)
    key = (id(G), id(H), n)
    if key not in _REL_CACHE:
        _REL_CACHE[key] = homology(pair(G, H).rel, n)
    return _REL_CACHE[key]


def relative_homology(G: GroupTable, H: GroupTable, n: int, gset: Optional[GSet] = None,
                      sub_points: Optional[Sequence[int]] = None, caps: Optional[Dict[int, int]] = None) -> FpAbelianGroup:
    """H_n(G, H; Z[S], Z[S']) for n <= 3 (trivial coefficients by default)."""
    if not 0 <= n <= 3:
        raise ValueError("degree must be between 0 and 3")
    if gset is None:
        return relative_homology_data(G, H, n, caps).group
    check_cap(G, n, caps)
    C = BarComplex(G, gset, sub=G.subgroup_embedding(H), sub_points=sub_points)
    return homology(C, n).group


def homology_with_coefficients(G: GroupTable, gset: GSet, n: int, caps: Optional[Dict[int, int]] = None) -> FpAbelianGroup:
    check_cap(G, n, caps)
    return homology(BarComplex(G, gset), n).group


@dataclass
class LESReport:
    spots: Dict[str, bool] = field(default_factory=dict)
    groups: Dict[str, FpAbelianGroup] = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return all(self.spots.values())


def _map_from_cycles(src: Homology, dst: Homology, transform: Callable[[Chain], Chain]) -> AbMorphism:
    imgs = [dst.class_of(transform(z)) for z in src.generator_cycles()]
    return AbMorphism.from_coords(src.group, dst.group, imgs)


def long_exact_sequence(G: GroupTable, H: GroupTable, top: int = 2,
                        caps: Optional[Dict[int, int]] = None) -> LESReport:
    """Exactness of ... H_n(H) -> H_n(G) -> H_n(G,H) -> H_{n-1}(H) ... for n <= top.

    Spots needing H_{top+1} are skipped.
    """
    P = pair(G, H)
    hs = {n: group_homology_data(H, n, caps) for n in range(top + 1)}
    hg = {n: group_homology_data(G, n, caps) for n in range(top + 1)}
    hr = {n: relative_homology_data(G, H, n, caps) for n in range(top + 1)}
    rep = LESReport()
    i_s, j_s, d_s = {}, {}, {}
    for n in range(top + 1):
        rep.groups[f"H{n}(H)"] = hs[n].group
        rep.groups[f"H{n}(G)"] = hg[n].group
        rep.groups[f"H{n}(G,H)"] = hr[n].group
        i_s[n] = _map_from_cycles(hs[n], hg[n], lambda z, n=n: P.translate(z, n))
        j_s[n] = _map_from_cycles(hg[n], hr[n], lambda z, n=n: P.project(z, n))
        if n >= 1:
            d_s[n] = _map_from_cycles(hr[n], hs[n - 1],
                                      lambda z, n=n: P.restrict(P.ambient.boundary(n, P.lift(z, n)), n - 1))
    for n in range(top + 1):
        rep.spots[f"H{n}(G)"] = is_exact_at(i_s[n], j_s[n])
        if n >= 1:
            rep.spots[f"H{n}(G,H)"] = is_exact_at(j_s[n], d_s[n])
            rep.spots[f"H{n - 1}(H)"] = is_exact_at(d_s[n], i_s[n - 1])
    # right end: H_0(G) -> H_0(G,H) -> 0
    rep.spots["H0(G,H)->0"] = j_s[0].is_surjective()
    return rep


# ---------------------------------------------------------------------------
# ring-level groups


def s_group(R: FiniteRing, n: int, caps: Optional[Dict[int, int]] = None) -> FpAbelianGroup:
    """S_n = H_n(B(A), T(A); Z)."""
    return relative_homology(group(R, "B"), group(R, "T"), n, caps=caps)


def s_groups(R: FiniteRing, n: int, caps: Optional[Dict[int, int]] = None) -> dict:
    """S_n together with the splitting check H_n(B) = H_n(T) + S_n."""
    B, T = group(R, "B"), group(R, "T")
    S = s_group(R, n, caps)
    hb, ht = group_homology(B, n, caps), group_homology(T, n, caps)
    split = hb.is_isomorphic(direct_sum(ht, S).group)
    return {"S": S, "H_B": hb, "H_T": ht, "split": split}


def lambda2_mod_mu2(R: FiniteRing) -> FpAbelianGroup:
    """Lambda^2(A*) / (A* ^ mu_2)."""
    Ug = unit_group(R)
    U = Ug.structure
    W = wedge_square(U)
    imgs = []
    for a in Ug.generators:
        for b in mu2(R):
            imgs.append(W(Ug.vector(a), Ug.vector(b)))
    rels = list(W.group.relations) + imgs
    return FpAbelianGroup(W.group.ngens, rels)


def sm2_checks(R: FiniteRing, caps: Optional[Dict[int, int]] = None) -> dict:
    SM = group(R, "SM2")
    G = square_class_group(R)
    h1 = group_homology(SM, 1, caps)
    out = {"H1": h1, "H1_order_ok": h1.order() == 2 * G.order}
    pm = {R.one, R.neg(R.one)}
    if set(mu2(R)) != pm:
        out["h2_status"] = "skipped:hypothesis"
        out["reason"] = "mu_2(A) differs from {1, -1}"
        return out
    h2 = group_homology(SM, 2, caps)
    q = lambda2_mod_mu2(R)
    out.update({"H2": h2, "wedge_quotient": q, "H2_ok": h2.is_isomorphic(q), "h2_status": "checked"})
    return out


def commutator_chain(C: BarComplex, g: int, h: int) -> Chain:
    """[g|h] - [h|g]."""
    out: Chain = {}
    for c, t in ((1, (g, h)), (-1, (h, g))):
        for k, v in C.chain((c, t)).items():
            out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def commutator_class(G: GroupTable, g: int, h: int, caps: Optional[Dict[int, int]] = None) -> Tuple[int, ...]:
    if not G.commutes(g, h):
        raise ValueError("commutator class needs commuting elements")
    data = group_homology_data(G, 2, caps)
    return data.class_of(commutator_chain(data.complex, g, h))


def x_class(R: FiniteRing, a: int, b: int, caps: Optional[Dict[int, int]] = None) -> Tuple[int, ...]:
    """Class of c([[1,a],[0,1]], diag(b,b)) in H_2(B(A)), b in mu_2(A)."""
    if b not in set(mu2(R)):
        raise ValueError(f"{R.render(b)} is not in mu_2")
    B = group(R, "B")
    g = B.index[(R.one, a, R.zero, R.one)]
    h = B.index[(b, R.zero, R.zero, b)]
    return commutator_class(B, g, h, caps)


def relative_sl2_sm2(R: FiniteRing, n: int = 2, caps: Optional[Dict[int, int]] = None) -> dict:
    """H_n(SL2, SM2; Z) with the comparison against W(A) and a hypothesis report."""
    from .ring import h0_units_on_A
    from .scissors import witt

    SL, SM = group(R, "SL2"), group(R, "SM2")
    H = relative_homology(SL, SM, n, caps=caps)
    out: dict = {"H": H}
    hyp: Dict[str, object] = {}
    hyp["mu2_is_pm1"] = set(mu2(R)) == {R.one, R.neg(R.one)}
    hyp["minus1_square"] = square_class_group(R).class_of(R.neg(R.one)) == 0
    S1 = h0_units_on_A(R)
    hyp["S1_trivial"] = S1.is_trivial()
    B, T = group(R, "B"), group(R, "T")
    for i in (2, 3):
        try:
            hyp[f"H{i}(T)=H{i}(B)"] = group_homology(T, i, caps).is_isomorphic(group_homology(B, i, caps))
        except CapExceeded:
            hyp[f"H{i}(T)=H{i}(B)"] = "unknown"
    out["hypotheses"] = hyp
    if n == 2:
        W = witt(R).witt
        out["W"] = W
        out["matches_W"] = H.is_isomorphic(W)
    return out


# ---------------------------------------------------------------------------
# certificates


def certificate(C: BarComplex, n: int, transform_limit: int = 200_000) -> dict:
    """Boundary matrices d_n, d_{n+1} and, when small, Smith transforms of d_{n+1}."""
    cols = C.boundary_columns(n + 1)
    M = IntMatrix.from_columns(C.size(n), cols)
    out = {
        "degree": n,
        "sizes": [C.size(n - 1) if n > 0 else 0, C.size(n), C.size(n + 1)],
        "d_n": IntMatrix.from_columns(C.size(n - 1), C.boundary_columns(n)).triplets() if n > 0 else [],
        "d_n+1": M.triplets(),
    }
    if M.nrows * M.ncols <= transform_limit:
        sf = smith_normal_form(M, transforms=True)
        out["smith"] = {"invariants": list(sf.invariants), "U": IntMatrix.from_dense(sf.U).triplets(),
                        "V": IntMatrix.from_dense(sf.V).triplets()}
    else:
        out["smith"] = {"invariants": list(smith_normal_form(M).invariants), "transforms": "omitted (size)"}
    return out
