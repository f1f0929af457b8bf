"""The square-class group G_A = A*/(A*)^2 and the group ring Z[G_A].

G_A is an elementary abelian 2-group; its elements are encoded as bitmasks
over an F_2-basis taken from the even-order canonical factors of A*.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .abgrp import AbMorphism, FpAbelianGroup
from .ring import FiniteRing, unit_group


class SquareClassGroup:
    def __init__(self, R: FiniteRing):
        self.ring = R
        self.units = unit_group(R)
        mods = self.units.structure.moduli
        self._even = [i for i, d in enumerate(mods) if d % 2 == 0]
        self.dim = len(self._even)
        self.order = 1 << self.dim
        reps: Dict[int, int] = {}
        self._cls: Dict[int, int] = {}
        for a in R.units:
            c = self._compute_class(a)
            self._cls[a] = c
            reps.setdefault(c, a)
        self.reps = [reps[c] for c in range(self.order)]

    def _compute_class(self, a: int) -> int:
        y = self.units.dlog(a)
        c = 0
        for bit, i in enumerate(self._even):
            if y[i] % 2:
                c |= 1 << bit
        return c

    def class_of(self, a: int) -> int:
        """Bitmask of the square class of the unit a."""
        try:
            return self._cls[a]
        except KeyError:
            raise ValueError(f"{self.ring.render(a)} is not a unit") from None

    def name(self, c: int) -> str:
        return self.ring.render(self.reps[c])

    def elements(self) -> range:
        return range(self.order)

    @staticmethod
    def mul(c: int, d: int) -> int:
        return c ^ d

    def as_group(self) -> FpAbelianGroup:
        """G_A as an abstract group (F_2^dim)."""
        return FpAbelianGroup(self.dim, [{i: 2} for i in range(self.dim)], name="G_A")

    def class_vector(self, c: int) -> List[int]:
        return [(c >> i) & 1 for i in range(self.dim)]


_SQ_CACHE: Dict[object, SquareClassGroup] = {}


def square_class_group(R: FiniteRing) -> SquareClassGroup:
    if R.spec not in _SQ_CACHE:
        _SQ_CACHE[R.spec] = SquareClassGroup(R)
    return _SQ_CACHE[R.spec]


class GroupRingElem:
    """Element of Z[G_A] as a coefficient vector indexed by class bitmasks."""

    __slots__ = ("G", "coeffs")

    def __init__(self, G: SquareClassGroup, coeffs: Optional[Dict[int, int]] = None):
        self.G = G
        self.coeffs = {c: v for c, v in (coeffs or {}).items() if v}

    @classmethod
    def basis(cls, G: SquareClassGroup, c: int) -> "GroupRingElem":
        return cls(G, {c: 1})

    @classmethod
    def scalar(cls, G: SquareClassGroup, n: int) -> "GroupRingElem":
        return cls(G, {0: n})

    def __add__(self, other: "GroupRingElem") -> "GroupRingElem":
        out = dict(self.coeffs)
        for c, v in other.coeffs.items():
            out[c] = out.get(c, 0) + v
        return GroupRingElem(self.G, out)

    def __neg__(self) -> "GroupRingElem":
        return GroupRingElem(self.G, {c: -v for c, v in self.coeffs.items()})

    def __sub__(self, other: "GroupRingElem") -> "GroupRingElem":
        return self + (-other)

    def __mul__(self, other) -> "GroupRingElem":
        if isinstance(other, int):
            return GroupRingElem(self.G, {c: v * other for c, v in self.coeffs.items()})
        out: Dict[int, int] = {}
        for c, v in self.coeffs.items():
            for d, w in other.coeffs.items():
                k = c ^ d
                out[k] = out.get(k, 0) + v * w
        return GroupRingElem(self.G, out)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupRingElem):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def augmentation(self) -> int:
        return sum(self.coeffs.values())

    def vector(self) -> List[int]:
        return [self.coeffs.get(c, 0) for c in range(self.G.order)]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        out = ""
        for c in sorted(self.coeffs):
            v = self.coeffs[c]
            term = f"{abs(v)}·⟨{self.G.name(c)}⟩"
            if not out:
                out = term if v > 0 else f"−{term}"
            else:
                out += f" + {term}" if v > 0 else f" − {term}"
        return out

    __repr__ = __str__


def class_elem(G: SquareClassGroup, a: int) -> GroupRingElem:
    """<a> for a unit a."""
    return GroupRingElem.basis(G, G.class_of(a))


def bracket(G: SquareClassGroup, a: int) -> GroupRingElem:
    """<<a>> = <a> - 1."""
    c = G.class_of(a)
    if c == 0:
        return GroupRingElem(G)
    return GroupRingElem(G, {c: 1, 0: -1})


def p_minus1_plus(G: SquareClassGroup) -> GroupRingElem:
    """<-1> + 1."""
    R = G.ring
    return class_elem(G, R.neg(R.one)) + GroupRingElem.scalar(G, 1)


def group_ring(G: SquareClassGroup) -> FpAbelianGroup:
    """Z[G_A] as a free abelian group on the classes."""
    return FpAbelianGroup.free(G.order)


@dataclass
class AugmentationIdeal:
    """I_A with basis <<g>>, g != 1, and its inclusion into Z[G_A]."""

    G: SquareClassGroup
    group: FpAbelianGroup
    inclusion: AbMorphism

    def coords_of(self, x: GroupRingElem) -> List[int]:
        if x.augmentation() != 0:
            raise ValueError("element is not in the augmentation ideal")
        return [x.coeffs.get(c, 0) for c in range(1, self.G.order)]

    def element(self, v: Sequence[int]) -> GroupRingElem:
        out = GroupRingElem(self.G)
        for c, k in zip(range(1, self.G.order), v):
            if k:
                out = out + GroupRingElem(self.G, {c: k, 0: -k})
        return out


def augmentation_ideal(R_or_G) -> AugmentationIdeal:
    G = R_or_G if isinstance(R_or_G, SquareClassGroup) else square_class_group(R_or_G)
    n = G.order
    I = FpAbelianGroup.free(n - 1)
    ZG = group_ring(G)
    imgs = [{c: 1, 0: -1} for c in range(1, n)]
    return AugmentationIdeal(G, I, AbMorphism(I, ZG, imgs))


def power_ideal_squared(R_or_G) -> Tuple[FpAbelianGroup, AbMorphism]:
    """I_A^2 as a subgroup of I_A (image of all pairwise products of the basis)."""
    aug = augmentation_ideal(R_or_G)
    G = aug.G
    prods = []
    for c in range(1, G.order):
        for d in range(c, G.order):
            x = GroupRingElem(G, {c: 1, 0: -1}) * GroupRingElem(G, {d: 1, 0: -1})
            prods.append(aug.coords_of(x))
    P = FpAbelianGroup.free(len(prods))
    f = AbMorphism(P, aug.group, prods)
    return f.image()


class GModulePresentation:
    """A Z[G_A]-module given by symbols and relations, flattened to Z.

    Flat generator index of (class c, symbol s) is ``s * |G| + c``.  Each
    relation is emitted once per translate g in G_A.
    """

    def __init__(self, G: SquareClassGroup, symbols: Sequence, relations: Iterable[Dict[Tuple[int, int], int]] = ()):
        self.G = G
        self.symbols = list(symbols)
        self.symbol_index = {s: i for i, s in enumerate(self.symbols)}
        self.relations = [dict(r) for r in relations]

    def flat_index(self, c: int, s: int) -> int:
        return s * self.G.order + c

    def flat_vector(self, elem: Dict[Tuple[int, int], int]) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for (c, s), v in elem.items():
            k = self.flat_index(c, s)
            out[k] = out.get(k, 0) + v
        return {k: v for k, v in out.items() if v}

    def translate(self, g: int, elem: Dict[Tuple[int, int], int]) -> Dict[Tuple[int, int], int]:
        return {(c ^ g, s): v for (c, s), v in elem.items()}

    def act(self, x: GroupRingElem, elem: Dict[Tuple[int, int], int]) -> Dict[Tuple[int, int], int]:
        out: Dict[Tuple[int, int], int] = {}
        for g, k in x.coeffs.items():
            for (c, s), v in elem.items():
                key = (c ^ g, s)
                out[key] = out.get(key, 0) + k * v
        return {key: v for key, v in out.items() if v}

    @property
    def ngens(self) -> int:
        return self.G.order * len(self.symbols)

    def flat_relations(self) -> List[Dict[int, int]]:
        out = []
        for r in self.relations:
            for g in self.G.elements():
                out.append(self.flat_vector(self.translate(g, r)))
        return out

    @cached_property
    def group(self) -> FpAbelianGroup:
        return FpAbelianGroup(self.ngens, self.flat_relations())

    def symbol(self, s, c: int = 0) -> Dict[Tuple[int, int], int]:
        return {(c, self.symbol_index[s]): 1}
