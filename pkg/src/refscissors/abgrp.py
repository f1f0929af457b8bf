"""Finitely presented abelian groups and their morphisms.

A group is Z^g modulo the row lattice of an integer relation matrix.  Each
group lazily reduces its presentation to Smith form, which fixes a canonical
model  Z/d_1 + ... + Z/d_s + Z^r  (d_i > 1, d_i | d_{i+1}).  Elements are
compared through their canonical coordinates, and every morphism is stored
as an integer matrix between canonical models, so kernels, images,
cokernels and exactness reduce to lattice computations in small dimension.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .snf import EchelonLattice, IntMatrix, Reduction, integer_kernel, lattice, reduce_presentation, smith_dense

Vec = Union[Dict[int, int], Sequence[int]]

_CACHE = None


def set_snf_cache(cache) -> None:
    """Install an object with ``get(ngens, rels)`` / ``put(ngens, rels, invariants)``."""
    global _CACHE
    _CACHE = cache


def get_snf_cache():
    return _CACHE


def _as_sparse(v: Vec) -> Dict[int, int]:
    if isinstance(v, dict):
        return {int(k): int(x) for k, x in v.items() if x}
    return {i: int(x) for i, x in enumerate(v) if x}


@dataclass
class SmithForm:
    invariants: List[int]
    U: Optional[List[List[int]]] = None
    V: Optional[List[List[int]]] = None


def smith_normal_form(M: Union[IntMatrix, Sequence[Sequence[int]]], transforms: bool = False) -> SmithForm:
    """Invariant factors of M (length min(rows, cols)); with ``transforms`` also U, V with U*M*V = diag."""
    if isinstance(M, IntMatrix):
        m, n = M.nrows, M.ncols
        rows = M.rows()
        dense = M.dense() if transforms else None
    else:
        m = len(M)
        n = len(M[0]) if m else 0
        rows = [_as_sparse(r) for r in M]
        dense = [list(r) for r in M]
    if transforms:
        diag, U, V, _ = smith_dense(dense, track_rows=True, track_cols=True)
        return SmithForm(list(diag), U, V)
    red = reduce_presentation(n, rows, track=False)
    nonzero = sorted([d for d in red.diag if d] + [1] * (n - len(red.alive)))
    return SmithForm(nonzero + [0] * (min(m, n) - len(nonzero)))


class FpAbelianGroup:
    """Finitely presented abelian group Z^ngens / <relations>."""

    def __init__(self, ngens: int, relations: Iterable[Vec] = (), name: str = ""):
        self.ngens = int(ngens)
        rels = []
        for r in relations:
            s = _as_sparse(r)
            if any(k < 0 or k >= self.ngens for k in s):
                raise ValueError("relation refers to a nonexistent generator")
            if s:
                rels.append(s)
        self.relations: List[Dict[int, int]] = rels
        self.name = name
        self._red: Optional[Reduction] = None
        self._inv: Optional[Tuple[List[int], int]] = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def free(cls, rank: int) -> "FpAbelianGroup":
        return cls(rank)

    @classmethod
    def cyclic(cls, n: int) -> "FpAbelianGroup":
        return cls(1, [[n]] if n else [])

    @classmethod
    def from_invariants(cls, torsion: Sequence[int], free_rank: int = 0) -> "FpAbelianGroup":
        k = len(torsion) + free_rank
        rels = [{i: d} for i, d in enumerate(torsion)]
        return cls(k, rels)

    @classmethod
    def zero(cls) -> "FpAbelianGroup":
        return cls(0)

    # -- Smith data ---------------------------------------------------------
    def _reduction(self) -> Reduction:
        if self._red is None:
            self._red = reduce_presentation(self.ngens, self.relations, track=True)
            diag = self._red.diag
            tors = [d for d in diag if d > 1]
            free = sum(1 for d in diag if d == 0)
            self._inv = (tors, free)
            self._comp = [i for i, d in enumerate(diag) if d != 1]
            self._mods = [diag[i] for i in self._comp]
        return self._red

    def _invariants(self) -> Tuple[List[int], int]:
        if self._inv is None:
            cached = _CACHE.get(self.ngens, self.relations) if _CACHE is not None else None
            if cached is not None:
                self._inv = (list(cached[0]), int(cached[1]))
            else:
                self._reduction()
                if _CACHE is not None:
                    _CACHE.put(self.ngens, self.relations, self._inv)
        return self._inv

    @property
    def torsion(self) -> List[int]:
        return list(self._invariants()[0])

    @property
    def free_rank(self) -> int:
        return self._invariants()[1]

    @property
    def invariants(self) -> Tuple[Tuple[int, ...], int]:
        t, r = self._invariants()
        return tuple(t), r

    @property
    def rank(self) -> int:
        """Number of canonical cyclic components."""
        t, r = self._invariants()
        return len(t) + r

    @property
    def moduli(self) -> List[int]:
        """Order of each canonical component (0 for Z)."""
        t, r = self._invariants()
        return list(t) + [0] * r

    def order(self) -> Optional[int]:
        t, r = self._invariants()
        return None if r else math.prod(t)

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def is_trivial(self) -> bool:
        return self.rank == 0

    def is_isomorphic(self, other: "FpAbelianGroup") -> bool:
        return self.invariants == other.invariants

    def to_json(self) -> dict:
        t, r = self._invariants()
        return {"free_rank": r, "torsion": list(t)}

    def __str__(self) -> str:
        t, r = self._invariants()
        parts = [f"Z/{d}" for d in t] + ["Z"] * r
        return " + ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        label = f"{self.name}: " if self.name else ""
        return f"<FpAbelianGroup {label}{self}>"

    # -- canonical coordinates --------------------------------------------
    def coords(self, x: Vec) -> Tuple[int, ...]:
        """Canonical coordinates of the class of the generator vector x."""
        red = self._reduction()
        r = red.residual(_as_sparse(x))
        Q = red.Q
        out = []
        for i, d in zip(self._comp, self._mods):
            y = sum(ri * Q[k][i] for k, ri in enumerate(r) if ri)
            out.append(y % d if d else y)
        return tuple(out)

    def reduce(self, y: Sequence[int]) -> Tuple[int, ...]:
        mods = self.moduli
        return tuple(v % d if d else v for v, d in zip(y, mods))

    def lift(self, i: int) -> Dict[int, int]:
        """A generator vector representing the i-th canonical component."""
        red = self._reduction()
        row = red.Qinv[self._comp[i]]
        return {red.alive[k]: v for k, v in enumerate(row) if v}

    def lift_coords(self, y: Sequence[int]) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for i, c in enumerate(y):
            if c:
                for g, v in self.lift(i).items():
                    out[g] = out.get(g, 0) + c * v
        return {g: v for g, v in out.items() if v}

    def is_zero(self, x: Vec) -> bool:
        return not any(self.coords(x))

    def gen(self, i: int) -> Dict[int, int]:
        return {i: 1}

    def zero_coords(self) -> Tuple[int, ...]:
        return (0,) * self.rank

    def add_coords(self, a: Sequence[int], b: Sequence[int]) -> Tuple[int, ...]:
        return self.reduce([x + y for x, y in zip(a, b)])

    def elements(self, limit: int = 1 << 16) -> List[Tuple[int, ...]]:
        """All elements as canonical coordinate tuples (finite groups only)."""
        n = self.order()
        if n is None or n > limit:
            raise ValueError("group infinite or too large to enumerate")
        return [tuple(c) for c in product(*[range(d) for d in self.torsion])]

    def element_order(self, y: Sequence[int]) -> int:
        """Order of the element with canonical coordinates y (0 if infinite)."""
        o = 1
        for v, d in zip(y, self.moduli):
            if d == 0:
                if v:
                    return 0
            elif v % d:
                o = o * (d // math.gcd(d, v)) // math.gcd(o, d // math.gcd(d, v))
        return o


# ---------------------------------------------------------------------------
# morphisms


class AbMorphism:
    """Homomorphism between finitely presented abelian groups.

    ``images[g]`` is the image of source generator g as a target generator
    vector.  Well-definedness (relations go to relations) is checked.
    """

    def __init__(self, source: FpAbelianGroup, target: FpAbelianGroup, images: Sequence[Vec], check: bool = True):
        if len(images) != source.ngens:
            raise ValueError("need one image per source generator")
        coord_images = [target.coords(v) for v in images]
        self._init_from_coords(source, target, coord_images, check)

    @classmethod
    def from_coords(cls, source: FpAbelianGroup, target: FpAbelianGroup,
                    coord_images: Sequence[Sequence[int]], check: bool = True) -> "AbMorphism":
        """Build from images given in the target's canonical coordinates."""
        f = cls.__new__(cls)
        if len(coord_images) != source.ngens:
            raise ValueError("need one image per source generator")
        f._init_from_coords(source, target, [target.reduce(c) for c in coord_images], check)
        return f

    def _init_from_coords(self, source, target, coord_images, check):
        self.source = source
        self.target = target
        self.gen_images = [tuple(c) for c in coord_images]
        k = target.rank
        if check:
            sparse_imgs = [[(t, v) for t, v in enumerate(img) if v] for img in self.gen_images]
            mods = target.moduli
            for rel in source.relations:
                acc: Dict[int, int] = {}
                for g, c in rel.items():
                    for t, v in sparse_imgs[g]:
                        acc[t] = acc.get(t, 0) + c * v
                if any(v % mods[t] if mods[t] else v for t, v in acc.items()):
                    raise ValueError("morphism is not well defined: a relation maps to a nonzero element")
        cols = []
        for i in range(source.rank):
            acc = [0] * k
            for g, c in source.lift(i).items():
                for t, v in enumerate(self.gen_images[g]):
                    acc[t] += c * v
            cols.append(target.reduce(acc))
        self.cols: List[Tuple[int, ...]] = cols

    # -- evaluation ---------------------------------------------------------
    def on_coords(self, y: Sequence[int]) -> Tuple[int, ...]:
        acc = [0] * self.target.rank
        for c, col in zip(y, self.cols):
            if c:
                for t, v in enumerate(col):
                    acc[t] += c * v
        return self.target.reduce(acc)

    def __call__(self, x: Vec) -> Tuple[int, ...]:
        return self.on_coords(self.source.coords(x))

    def compose(self, first: "AbMorphism") -> "AbMorphism":
        """self o first."""
        if first.target is not self.source:
            raise ValueError("composition of mismatched morphisms")
        imgs = [self.on_coords(c) for c in first.gen_images]
        return AbMorphism.from_coords(first.source, self.target, imgs, check=False)

    def __neg__(self) -> "AbMorphism":
        return AbMorphism.from_coords(self.source, self.target,
                                      [[-v for v in c] for c in self.gen_images], check=False)

    def is_zero(self) -> bool:
        return not any(any(c) for c in self.cols)

    # -- lattice helpers ------------------------------------------------------
    def _kernel_lattice(self) -> EchelonLattice:
        S, T = self.source, self.target
        kS, kT = S.rank, T.rank
        tmods = T.moduli
        tors_idx = [t for t, d in enumerate(tmods) if d]
        A = []
        for t in range(kT):
            row = [self.cols[i][t] for i in range(kS)]
            row += [tmods[t] if t == u else 0 for u in tors_idx]
            A.append(row)
        ker = integer_kernel(A, kS + len(tors_idx)) if kT else [[int(i == j) for j in range(kS)] for i in range(kS)]
        return lattice((v[:kS] for v in ker), kS)

    def kernel(self) -> Tuple[FpAbelianGroup, "AbMorphism"]:
        """Kernel with its inclusion into the source."""
        S = self.source
        L = self._kernel_lattice()
        B = L.basis()
        rels = []
        for i, d in enumerate(S.moduli):
            if d:
                v = [0] * S.rank
                v[i] = d
                c = L.solve(v)
                if c is None:
                    raise ArithmeticError("source relation not in kernel lattice")
                rels.append(c)
        K = FpAbelianGroup(len(B), rels)
        inc = AbMorphism.from_coords(K, S, B, check=False)
        return K, inc

    def image(self) -> Tuple[FpAbelianGroup, "AbMorphism"]:
        """Image with its inclusion into the target."""
        L = self._kernel_lattice()
        Im = FpAbelianGroup(self.source.rank, L.basis())
        inc = AbMorphism.from_coords(Im, self.target, self.cols, check=False)
        return Im, inc

    def cokernel(self) -> Tuple[FpAbelianGroup, "AbMorphism"]:
        """Cokernel with the projection from the target."""
        T = self.target
        rels = []
        for i, d in enumerate(T.moduli):
            if d:
                v = [0] * T.rank
                v[i] = d
                rels.append(v)
        rels.extend(self.cols)
        C = FpAbelianGroup(T.rank, rels)
        proj = AbMorphism(T, C, [list(T.coords({g: 1})) for g in range(T.ngens)], check=False)
        return C, proj

    def image_lattice(self) -> EchelonLattice:
        T = self.target
        vecs = list(self.cols)
        for i, d in enumerate(T.moduli):
            if d:
                v = [0] * T.rank
                v[i] = d
                vecs.append(v)
        return lattice(vecs, T.rank)

    def is_injective(self) -> bool:
        return self.kernel()[0].is_trivial()

    def is_surjective(self) -> bool:
        return self.cokernel()[0].is_trivial()

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()


def identity(G: FpAbelianGroup) -> AbMorphism:
    return AbMorphism(G, G, [{g: 1} for g in range(G.ngens)], check=False)


def zero_map(S: FpAbelianGroup, T: FpAbelianGroup) -> AbMorphism:
    return AbMorphism.from_coords(S, T, [[0] * T.rank for _ in range(S.ngens)], check=False)


def contains(f: AbMorphism, y: Sequence[int]) -> bool:
    """Whether the target element with canonical coordinates y lies in im(f)."""
    return f.image_lattice().contains(list(y))


def is_exact_at(f: AbMorphism, g: AbMorphism) -> bool:
    """True iff im(f) = ker(g) inside f.target = g.source."""
    if f.target is not g.source:
        raise ValueError("is_exact_at needs target(f) to be source(g)")
    for col in f.cols:
        if any(g.on_coords(col)):
            return False
    K, inc = g.kernel()
    L = f.image_lattice()
    return all(L.contains(list(b)) for b in inc.cols)


# ---------------------------------------------------------------------------
# constructions


@dataclass
class DirectSum:
    group: FpAbelianGroup
    injections: List[AbMorphism]
    projections: List[AbMorphism]


def direct_sum(*groups: FpAbelianGroup) -> DirectSum:
    offsets = []
    off = 0
    rels = []
    for G in groups:
        offsets.append(off)
        rels.extend({k + off: v for k, v in r.items()} for r in G.relations)
        off += G.ngens
    S = FpAbelianGroup(off, rels)
    inj, proj = [], []
    for G, o in zip(groups, offsets):
        inj.append(AbMorphism(G, S, [{g + o: 1} for g in range(G.ngens)], check=False))
        imgs = []
        for H, p in zip(groups, offsets):
            for g in range(H.ngens):
                imgs.append({g: 1} if H is G and p == o else {})
        proj.append(AbMorphism(S, G, imgs, check=False))
    return DirectSum(S, inj, proj)


@dataclass
class BilinearGroup:
    """A group built from generator pairs plus its bilinear evaluation map."""

    group: FpAbelianGroup
    pair: Callable[[Vec, Vec], Dict[int, int]]

    def __call__(self, x: Vec, y: Vec) -> Dict[int, int]:
        return self.pair(x, y)

    def coords(self, x: Vec, y: Vec) -> Tuple[int, ...]:
        return self.group.coords(self.pair(x, y))


def tensor(G: FpAbelianGroup, H: FpAbelianGroup) -> BilinearGroup:
    """G (x) H presented on generator pairs (i, j) with bilinearity relations."""
    nh = H.ngens
    rels = []
    for r in G.relations:
        for j in range(nh):
            rels.append({i * nh + j: c for i, c in r.items()})
    for r in H.relations:
        for i in range(G.ngens):
            rels.append({i * nh + j: c for j, c in r.items()})
    T = FpAbelianGroup(G.ngens * nh, rels, name="tensor")

    def pair(x, y):
        xs, ys = _as_sparse(x), _as_sparse(y)
        out: Dict[int, int] = {}
        for i, a in xs.items():
            for j, b in ys.items():
                k = i * nh + j
                out[k] = out.get(k, 0) + a * b
        return out

    return BilinearGroup(T, pair)


def _pair_index(n: int, strict: bool) -> Dict[Tuple[int, int], int]:
    idx = {}
    for i in range(n):
        for j in range(i + 1 if strict else i, n):
            idx[(i, j)] = len(idx)
    return idx


def wedge_square(G: FpAbelianGroup) -> BilinearGroup:
    """Exterior square: pairs e_i^e_j (i<j), relations r^e_k for each relation r."""
    n = G.ngens
    idx = _pair_index(n, strict=True)

    def add(out, i, j, c):
        if i == j or not c:
            return
        if i > j:
            i, j, c = j, i, -c
        k = idx[(i, j)]
        out[k] = out.get(k, 0) + c

    rels = []
    for r in G.relations:
        for k in range(n):
            out: Dict[int, int] = {}
            for i, c in r.items():
                add(out, i, k, c)
            rels.append(out)
    W = FpAbelianGroup(len(idx), rels, name="wedge")

    def pair(x, y):
        out: Dict[int, int] = {}
        for i, a in _as_sparse(x).items():
            for j, b in _as_sparse(y).items():
                add(out, i, j, a * b)
        return out

    return BilinearGroup(W, pair)


def sym2_square(G: FpAbelianGroup) -> BilinearGroup:
    """G (x) G modulo all a(x)b + b(x)a; pairs e_i.e_j (i<=j), 2 e_i.e_i = 0."""
    n = G.ngens
    idx = _pair_index(n, strict=False)

    def add(out, i, j, c):
        if not c:
            return
        if i > j:
            i, j, c = j, i, -c
        k = idx[(i, j)]
        out[k] = out.get(k, 0) + c

    rels = [{idx[(i, i)]: 2} for i in range(n)]
    for r in G.relations:
        for k in range(n):
            out: Dict[int, int] = {}
            for i, c in r.items():
                add(out, i, k, c)
            rels.append(out)
    S = FpAbelianGroup(len(idx), rels, name="sym2")

    def pair(x, y):
        out: Dict[int, int] = {}
        for i, a in _as_sparse(x).items():
            for j, b in _as_sparse(y).items():
                add(out, i, j, a * b)
        return out

    return BilinearGroup(S, pair)


@dataclass
class FiberProduct:
    group: FpAbelianGroup
    inclusion: AbMorphism
    proj_left: AbMorphism
    proj_right: AbMorphism


def fiber_product(f: AbMorphism, h: AbMorphism) -> FiberProduct:
    """{(x, y) in G + H : f(x) = h(y)} with its two projections."""
    if f.target is not h.target:
        raise ValueError("fiber product needs a common target")
    G, H, K = f.source, h.source, f.target
    ds = direct_sum(G, H)
    imgs = list(f.gen_images) + [[-v for v in c] for c in h.gen_images]
    phi = AbMorphism.from_coords(ds.group, K, imgs, check=False)
    P, inc = phi.kernel()
    return FiberProduct(P, inc, ds.projections[0].compose(inc), ds.projections[1].compose(inc))


def preimage(f: AbMorphism, y: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """Source coordinates of some x with f(x) = y, or None if y is not in im(f)."""
    T = f.target
    vecs = list(f.cols)
    for i, d in enumerate(T.moduli):
        if d:
            v = [0] * T.rank
            v[i] = d
            vecs.append(v)
    if not T.rank:
        return f.source.zero_coords()
    # kernel of [-y | cols | torsion]; a vector with leading entry 1 solves it
    A = [[-y[t]] + [v[t] for v in vecs] for t in range(T.rank)]
    L = lattice(integer_kernel(A, len(vecs) + 1), len(vecs) + 1)
    B = L.basis()
    if not B or B[0][0] not in (1, -1):
        return None
    s = B[0][0]
    return f.source.reduce([s * c for c in B[0][1:1 + len(f.cols)]])
