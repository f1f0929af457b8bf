"""The complex of unimodular vectors X_n(A^2) with its SL2-action.

Basis elements of X_n are ordered (n+1)-tuples of lines with pairwise
invertible determinants.  Also here: orbit data, homology of the augmented
complex, and the coinvariant (direct) models of RP(A), GW(A), I(A), with the
maps lambda, epsilon and psi_1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from .abgrp import AbMorphism, FpAbelianGroup, preimage
from .grpring import GroupRingElem, SquareClassGroup, augmentation_ideal, bracket, p_minus1_plus, square_class_group
from .ring import FiniteRing
from .sl2 import CapExceeded, GroupTable, Mat2, elem_E, group, mat_apply, mat_inv, unimodular_columns
from .snf import KernelBasis

Vec2 = Tuple[int, int]
Chain = Dict[int, int]

DEFAULT_DEGREE = 4
DEFAULT_BASIS_CAP = 10 ** 5


def _unit_multiples(R: FiniteRing, v: Vec2) -> List[Vec2]:
    return [(R.mul(v[0], u), R.mul(v[1], u)) for u in R.units]


def canonical_line(R: FiniteRing, v: Vec2) -> Vec2:
    """Least generator of the line through the unimodular vector v."""
    return min(_unit_multiples(R, v))


def enumerate_lines(R: FiniteRing) -> List[Vec2]:
    """All lines of unimodular vectors, by canonical generator, sorted."""
    return sorted({canonical_line(R, v) for v in unimodular_columns(R)})


def _det(R: FiniteRing, v: Vec2, w: Vec2) -> int:
    return R.sub(R.mul(v[0], w[1]), R.mul(v[1], w[0]))


class ComplexPart:
    """Bases X_0..X_N with boundaries, augmentation and the SL2-action."""

    def __init__(self, R: FiniteRing, N: int = DEFAULT_DEGREE, cap: int = DEFAULT_BASIS_CAP):
        if N > DEFAULT_DEGREE:
            raise ValueError(f"degree {N} above the supported maximum {DEFAULT_DEGREE}")
        self.ring = R
        self.N = N
        self.lines = enumerate_lines(R)
        self.line_index = {v: i for i, v in enumerate(self.lines)}
        L = len(self.lines)
        self.generic = [[R.is_unit(_det(R, self.lines[i], self.lines[j])) for j in range(L)] for i in range(L)]
        self.bases: List[List[Tuple[int, ...]]] = [[(i,) for i in range(L)]]
        for n in range(1, N + 1):
            nxt = []
            for t in self.bases[-1]:
                for j in range(L):
                    if all(self.generic[i][j] for i in t):
                        nxt.append(t + (j,))
                        if len(nxt) > cap:
                            raise CapExceeded(f"|X_{n}| exceeds cap {cap} for {R.spec}")
            self.bases.append(nxt)
        self.index = [{t: k for k, t in enumerate(b)} for b in self.bases]
        self._line_names = [self._name_line(v) for v in self.lines]

    # -- rendering ------------------------------------------------------------
    def _name_line(self, v: Vec2) -> str:
        R = self.ring
        if canonical_line(R, v) == canonical_line(R, (R.one, R.zero)):
            return "∞"
        if canonical_line(R, v) == canonical_line(R, (R.zero, R.one)):
            return "0"
        for a in R.units:
            if canonical_line(R, (R.one, a)) == v:
                return R.render(a)
        return f"⟨{R.render(v[0])},{R.render(v[1])}⟩"

    def render_tuple(self, t: Sequence[int]) -> str:
        return "(" + ",".join(self._line_names[i] for i in t) + ")"

    def render_chain(self, n: int, z: Chain) -> str:
        if not z:
            return "0"
        parts = []
        for k in sorted(z):
            c = z[k]
            s = self.render_tuple(self.bases[n][k])
            parts.append((f"{c}·" if c not in (1, -1) else ("−" if c == -1 else "")) + s)
        return " + ".join(parts)

    # -- named lines and tuples ----------------------------------------------
    def line(self, v: Vec2) -> int:
        return self.line_index[canonical_line(self.ring, v)]

    @property
    def infinity(self) -> int:
        return self.line((self.ring.one, self.ring.zero))

    @property
    def zero_line(self) -> int:
        return self.line((self.ring.zero, self.ring.one))

    def unit_line(self, a: int) -> int:
        """The line a = <e1 + a e2>."""
        return self.line((self.ring.one, a))

    def basis_index(self, t: Sequence[int]) -> int:
        return self.index[len(t) - 1][tuple(t)]

    def chain(self, *terms) -> Chain:
        """Chain from (coefficient, tuple) pairs."""
        out: Chain = {}
        for c, t in terms:
            k = self.basis_index(t)
            out[k] = out.get(k, 0) + c
        return {k: v for k, v in out.items() if v}

    # -- boundary --------------------------------------------------------------
    def size(self, n: int) -> int:
        return len(self.bases[n])

    def boundary_column(self, n: int, k: int) -> Chain:
        t = self.bases[n][k]
        out: Chain = {}
        idx = self.index[n - 1]
        for i in range(n + 1):
            f = idx[t[:i] + t[i + 1:]]
            out[f] = out.get(f, 0) + (-1 if i % 2 else 1)
        return {f: v for f, v in out.items() if v}

    def boundary(self, n: int, z: Chain) -> Chain:
        if n == 0:
            s = sum(z.values())
            return {0: s} if s else {}
        out: Chain = {}
        for k, c in z.items():
            for f, v in self.boundary_column(n, k).items():
                out[f] = out.get(f, 0) + c * v
        return {f: v for f, v in out.items() if v}

    def boundary_rows(self, n: int) -> List[Chain]:
        """Rows of d_n : X_n -> X_{n-1} (row = basis element of X_{n-1})."""
        if n == 0:
            return [{k: 1 for k in range(self.size(0))}]
        rows: List[Chain] = [dict() for _ in range(self.size(n - 1))]
        for k in range(self.size(n)):
            for f, v in self.boundary_column(n, k).items():
                rows[f][k] = v
        return rows

    def boundary_columns(self, n: int) -> List[Chain]:
        return [self.boundary_column(n, k) for k in range(self.size(n))]

    def check_dd(self) -> bool:
        for n in range(1, self.N + 1):
            for k in range(self.size(n)):
                if self.boundary(n - 1, self.boundary(n, {k: 1})):
                    return False
        return True

    # -- group action ------------------------------------------------------------
    def line_perm(self, g: Mat2) -> List[int]:
        R = self.ring
        return [self.line(mat_apply(R, g, v)) for v in self.lines]

    def act_tuple(self, perm: Sequence[int], n: int, k: int) -> int:
        return self.index[n][tuple(perm[i] for i in self.bases[n][k])]

    def act(self, perm: Sequence[int], n: int, z: Chain) -> Chain:
        out: Chain = {}
        for k, c in z.items():
            j = self.act_tuple(perm, n, k)
            out[j] = out.get(j, 0) + c
        return out

    def check_equivariance(self, gens: Sequence[Mat2]) -> bool:
        for g in gens:
            p = self.line_perm(g)
            for n in range(1, self.N + 1):
                for k in range(self.size(n)):
                    lhs = self.act(p, n - 1, self.boundary_column(n, k))
                    rhs = self.boundary_column(n, self.act_tuple(p, n, k))
                    if lhs != rhs:
                        return False
        return True


_COMPLEX_CACHE: Dict[Tuple[object, int], ComplexPart] = {}


def build_complex(R: FiniteRing, N: int = DEFAULT_DEGREE, cap: int = DEFAULT_BASIS_CAP) -> ComplexPart:
    key = (R.spec, N)
    if key not in _COMPLEX_CACHE:
        for (spec, M), C in _COMPLEX_CACHE.items():
            if spec == R.spec and M >= N:
                return C
        _COMPLEX_CACHE[key] = ComplexPart(R, N, cap)
    return _COMPLEX_CACHE[key]


def complex_homology(R: FiniteRing, k: int, cap: int = DEFAULT_BASIS_CAP) -> FpAbelianGroup:
    """H_k of the augmented complex X_. -> Z (k = 0 gives the reduced H_0)."""
    if not 0 <= k <= 3:
        raise ValueError("degree must be between 0 and 3")
    C = build_complex(R, k + 1, cap)
    Q = FpAbelianGroup(C.size(k), C.boundary_columns(k + 1))
    if k == 0:
        f = AbMorphism(Q, FpAbelianGroup.free(1), [{0: 1}] * C.size(0))
    else:
        f = AbMorphism(Q, FpAbelianGroup.free(C.size(k - 1)), C.boundary_columns(k))
    return f.kernel()[0]


# ---------------------------------------------------------------------------
# SL2 generators, orbits


def sl2_generators(R: FiniteRing) -> List[Mat2]:
    """A small generating set of SL2(A) taken from the E(x) family."""
    G = group(R, "SL2")
    gens: List[Mat2] = []
    idx_gens: List[int] = []
    elems = [elem_E(R, x) for x in R.elements()] + list(G.elements)
    for X in elems:
        if X in gens:
            continue
        gens.append(X)
        idx_gens.append(G.index[X])
        if len(_closure(G, idx_gens)) == len(G):
            return gens
    return gens


def _closure(G: GroupTable, gens: Sequence[int]) -> set:
    seen = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def triple_class(C: ComplexPart, t: Sequence[int]) -> int:
    """Square class labelling the SL2-orbit of a generic triple."""
    R = C.ring
    v0, v1, v2 = (C.lines[i] for i in t[:3])
    u = _det(R, v0, v1)
    ui = R.inv(u)
    g = mat_inv(R, (v0[0], R.mul(v1[0], ui), v0[1], R.mul(v1[1], ui)))
    x, y = mat_apply(R, g, v2)
    return square_class_group(R).class_of(R.div(y, x))


@dataclass
class Orbit:
    representative: int
    size: int
    stabilizer: List[Mat2] = field(default_factory=list)


def orbit_decomposition(R: FiniteRing, n: int, with_stabilizers: bool = True) -> List[Orbit]:
    C = build_complex(R, max(n, 1))
    size = C.size(n)
    parent = list(range(size))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for g in sl2_generators(R):
        p = C.line_perm(g)
        for k in range(size):
            j = C.act_tuple(p, n, k)
            a, b = find(k), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    counts: Dict[int, int] = {}
    for k in range(size):
        r = find(k)
        counts[r] = counts.get(r, 0) + 1
    orbits = [Orbit(r, counts[r]) for r in sorted(counts)]
    if with_stabilizers:
        G = group(R, "SL2")
        for o in orbits:
            t = C.bases[n][o.representative]
            for X in G.elements:
                p = [C.line(mat_apply(R, X, C.lines[i])) for i in t]
                if tuple(p) == t:
                    o.stabilizer.append(X)
    return orbits


# ---------------------------------------------------------------------------
# coinvariant models


class Coinvariants:
    """H_0(SL2, Z_k) for Z_k = ker(d_k) in X_k, with a class map for cycles."""

    def __init__(self, C: ComplexPart, k: int, gens: Sequence[Mat2]):
        self.complex = C
        self.k = k
        self.kernel = KernelBasis(C.size(k), C.boundary_rows(k))
        rels = []
        for g in gens:
            p = C.line_perm(g)
            for z in self.kernel.basis:
                gz = C.act(p, k, z)
                for key, v in z.items():
                    gz[key] = gz.get(key, 0) - v
                c = self.kernel.coords({key: v for key, v in gz.items() if v})
                if any(c):
                    rels.append(c)
        self.group = FpAbelianGroup(self.kernel.rank, rels)

    def vector(self, z: Chain) -> List[int]:
        """Generator vector of the class of the cycle z."""
        if self.complex.boundary(self.k, z):
            raise ValueError("chain is not a cycle")
        return self.kernel.coords(z)

    def coords(self, z: Chain) -> Tuple[int, ...]:
        return self.group.coords(self.vector(z))


@dataclass
class DirectModels:
    ring: FiniteRing
    complex: ComplexPart
    G: SquareClassGroup
    rp: Coinvariants
    gw: Coinvariants
    epsilon: AbMorphism
    i_group: FpAbelianGroup
    i_inclusion: AbMorphism
    lam: AbMorphism

    def psi1(self, a: int) -> Tuple[int, ...]:
        """psi_1(a) as canonical coordinates in RP(A)."""
        return self.rp.coords(psi1_chain(self.complex, a))

    def lambda_of_chain(self, z: Chain) -> GroupRingElem:
        return GroupRingElem(self.G, dict(enumerate(self.lam(self.rp.vector(z)))))


def psi1_chain(C: ComplexPart, a: int) -> Chain:
    R = C.ring
    inf, zero, la, l1 = C.infinity, C.zero_line, C.unit_line(a), C.unit_line(R.one)
    return C.chain((1, (inf, zero, la)), (1, (zero, inf, la)), (-1, (inf, zero, l1)), (-1, (zero, inf, l1)))


_DIRECT_CACHE: Dict[object, DirectModels] = {}


def direct_models(R: FiniteRing, cap: int = DEFAULT_BASIS_CAP) -> DirectModels:
    """RP(A), GW(A), I(A) with epsilon and lambda, via coinvariants."""
    if R.spec in _DIRECT_CACHE:
        return _DIRECT_CACHE[R.spec]
    C = build_complex(R, 3, cap)
    G = square_class_group(R)
    gens = sl2_generators(R)
    rp = Coinvariants(C, 2, gens)
    gw = Coinvariants(C, 1, gens)
    Z = FpAbelianGroup.free(1)
    eps = AbMorphism(gw.group, Z, [{0: sum(z.values())} for z in gw.kernel.basis])
    I, inc = eps.kernel()
    ZG = FpAbelianGroup.free(G.order)
    lam_imgs = []
    for z in rp.kernel.basis:
        img: Dict[int, int] = {}
        for key, v in z.items():
            c = triple_class(C, C.bases[2][key])
            img[c] = img.get(c, 0) + v
        lam_imgs.append(img)
    lam = AbMorphism(rp.group, ZG, lam_imgs)
    dm = DirectModels(R, C, G, rp, gw, eps, I, inc, lam)
    _DIRECT_CACHE[R.spec] = dm
    return dm


def rp_direct(R: FiniteRing) -> FpAbelianGroup:
    return direct_models(R).rp.group


def gw_direct(R: FiniteRing) -> FpAbelianGroup:
    return direct_models(R).gw.group


def i_direct(R: FiniteRing) -> FpAbelianGroup:
    return direct_models(R).i_group


def epsilon_direct(R: FiniteRing) -> AbMorphism:
    return direct_models(R).epsilon


def lambda_direct(R: FiniteRing) -> AbMorphism:
    return direct_models(R).lam


def psi1_direct(R: FiniteRing, a: int) -> Tuple[int, ...]:
    return direct_models(R).psi1(a)


# ---------------------------------------------------------------------------
# comparison with the presented models


@dataclass
class MapReport:
    name: str
    well_defined: bool
    surjective: Optional[bool] = None
    injective: Optional[bool] = None
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "well_defined": self.well_defined, "surjective": self.surjective,
                "injective": self.injective, "detail": self.detail}


def _report(name: str, build) -> Tuple[MapReport, Optional[AbMorphism]]:
    try:
        f = build()
    except ValueError as exc:
        return MapReport(name, False, detail=str(exc)), None
    return MapReport(name, True, f.is_surjective(), f.is_injective()), f


def compare_presented_direct(R: FiniteRing) -> dict:
    """Generator-wise maps from the presented models to the direct ones.

    Returns a dict of MapReports plus the check that lambda agrees on the
    image of each presented generator.
    """
    from .scissors import gw_bar, rp_bar

    dm = direct_models(R)
    C, G = dm.complex, dm.G
    inf, zero = C.infinity, C.zero_line
    out: dict = {}

    P = rp_bar(R)

    def rp_image(h: int, x: int) -> Chain:
        a = G.reps[h]
        return C.boundary(3, C.chain((1, (inf, zero, C.unit_line(a), C.unit_line(R.mul(a, x))))))

    def build_rp():
        imgs = [dm.rp.vector(rp_image(h, x)) for x in P.symbols for h in range(G.order)]
        return AbMorphism(P.group, dm.rp.group, imgs)

    rep, f_rp = _report("RPbar->RP", build_rp)
    out["rp"] = rep
    lam_ok = True
    for x in P.symbols:
        for h in range(G.order):
            got = dm.lambda_of_chain(rp_image(h, x))
            want = GroupRingElem.basis(G, h) * (-(bracket(G, x) * bracket(G, R.sub(R.one, x))))
            if got != want:
                lam_ok = False
    out["lambda_compatible"] = lam_ok

    W = gw_bar(R)

    def gw_image(c: int) -> Chain:
        return C.boundary(2, C.chain((1, (inf, zero, C.unit_line(G.reps[c])))))

    rep, _ = _report("GWbar->GW", lambda: AbMorphism(W.gw, dm.gw.group,
                                                      [dm.gw.vector(gw_image(c)) for c in range(G.order)]))
    out["gw"] = rep

    # I_A / p I_A -> I(A), <<a>> -> d(inf,0,a) - d(inf,0,1)
    aug = augmentation_ideal(G)
    p = p_minus1_plus(G)
    rels = [aug.coords_of(p * GroupRingElem(G, {c: 1, 0: -1})) for c in range(1, G.order)]
    IA = FpAbelianGroup(G.order - 1, rels)

    def build_i():
        imgs = []
        for c in range(1, G.order):
            z = gw_image(c)
            for key, v in gw_image(0).items():
                z[key] = z.get(key, 0) - v
            y = dm.gw.coords({key: v for key, v in z.items() if v})
            imgs.append(preimage(dm.i_inclusion, y))
        return AbMorphism.from_coords(IA, dm.i_group, imgs)

    rep, _ = _report("I_A/p I_A->I", build_i)
    out["i"] = rep
    return out
