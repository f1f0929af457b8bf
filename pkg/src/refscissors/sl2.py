"""2x2 matrices over a finite ring and the finite groups SL2, E2, SM2, T, B."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from .ring import FiniteRing

Mat2 = Tuple[int, int, int, int]

DEFAULT_GROUP_CAP = 10 ** 6
GROUP_KINDS = ("SL2", "E2", "SM2", "T", "B")


class CapExceeded(RuntimeError):
    """A configured size cap would be exceeded."""


def mat_mul(R: FiniteRing, X: Mat2, Y: Mat2) -> Mat2:
    a, b, c, d = X
    e, f, g, h = Y
    add, mul = R.add, R.mul
    return (add(mul(a, e), mul(b, g)), add(mul(a, f), mul(b, h)),
            add(mul(c, e), mul(d, g)), add(mul(c, f), mul(d, h)))


def det(R: FiniteRing, X: Mat2) -> int:
    a, b, c, d = X
    return R.sub(R.mul(a, d), R.mul(b, c))


def mat_inv(R: FiniteRing, X: Mat2) -> Mat2:
    a, b, c, d = X
    u = R.inv(det(R, X))
    return (R.mul(u, d), R.mul(u, R.neg(b)), R.mul(u, R.neg(c)), R.mul(u, a))


def identity(R: FiniteRing) -> Mat2:
    return (R.one, R.zero, R.zero, R.one)


def mat_apply(R: FiniteRing, X: Mat2, v: Tuple[int, int]) -> Tuple[int, int]:
    a, b, c, d = X
    return (R.add(R.mul(a, v[0]), R.mul(b, v[1])), R.add(R.mul(c, v[0]), R.mul(d, v[1])))


def elem_E(R: FiniteRing, x: int) -> Mat2:
    """E(x) = [[x, 1], [-1, 0]]."""
    return (x, R.one, R.neg(R.one), R.zero)


def elem_E12(R: FiniteRing, x: int) -> Mat2:
    return (R.one, x, R.zero, R.one)


def elem_E21(R: FiniteRing, x: int) -> Mat2:
    return (R.one, R.zero, x, R.one)


def elem_D(R: FiniteRing, a: int) -> Mat2:
    if not R.is_unit(a):
        raise ValueError(f"D({R.render(a)}) needs a unit")
    return (a, R.zero, R.zero, R.inv(a))


def elem_w(R: FiniteRing) -> Mat2:
    return elem_E(R, R.zero)


def render(R: FiniteRing, X: Mat2) -> str:
    a, b, c, d = (R.render(t) for t in X)
    return f"[[{a},{b}],[{c},{d}]]"


def _prod(R: FiniteRing, *Xs: Mat2) -> Mat2:
    out = Xs[0]
    for X in Xs[1:]:
        out = mat_mul(R, out, X)
    return out


@dataclass
class RelationReport:
    ring: str
    exhaustive: bool
    checked: Dict[str, int] = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_ge2_relations(R: FiniteRing, exhaustive_limit: int = 64, samples: int = 2000, seed: int = 0) -> RelationReport:
    """Check relations (1)-(3) and the standard factorizations on R.

    Exhaustive when |A| <= exhaustive_limit, otherwise on seeded random samples.
    """
    import random

    elems = list(R.elements())
    units = R.units
    exhaustive = R.size <= exhaustive_limit
    rng = random.Random(seed)

    def pairs(xs, ys):
        if exhaustive:
            return [(x, y) for x in xs for y in ys]
        return [(rng.choice(xs), rng.choice(ys)) for _ in range(samples)]

    rep = RelationReport(str(R.spec), exhaustive)
    m1 = R.neg(R.one)
    w = elem_w(R)
    Dm1 = elem_D(R, m1)

    n = 0
    for x, y in pairs(elems, elems):
        n += 1
        if _prod(R, elem_E(R, x), w, elem_E(R, y)) != mat_mul(R, Dm1, elem_E(R, R.add(x, y))):
            rep.failures.append(f"(1) x={R.render(x)} y={R.render(y)}")
    rep.checked["rel1"] = n

    n = 0
    for x, a in pairs(elems, units):
        n += 1
        lhs = mat_mul(R, elem_E(R, x), elem_D(R, a))
        rhs = mat_mul(R, elem_D(R, R.inv(a)), elem_E(R, R.mul(R.mul(a, a), x)))
        if lhs != rhs:
            rep.failures.append(f"(2) x={R.render(x)} a={R.render(a)}")
    rep.checked["rel2"] = n

    n = 0
    for a, b in pairs(units, units):
        n += 1
        if mat_mul(R, elem_D(R, a), elem_D(R, b)) != elem_D(R, R.mul(a, b)):
            rep.failures.append(f"(3) a={R.render(a)} b={R.render(b)}")
    rep.checked["rel3"] = n

    winv = mat_inv(R, w)
    n = 0
    for a in units:
        n += 1
        E = elem_E(R, a)
        if elem_D(R, R.neg(a)) != _prod(R, E, elem_E(R, R.inv(a)), E):
            rep.failures.append(f"D(-a) a={R.render(a)}")
    for x in elems:
        n += 1
        if elem_E12(R, x) != mat_mul(R, elem_E(R, R.neg(x)), winv):
            rep.failures.append(f"E12 x={R.render(x)}")
        if elem_E21(R, x) != mat_mul(R, winv, elem_E(R, x)):
            rep.failures.append(f"E21 x={R.render(x)}")
    rep.checked["factorizations"] = n
    return rep


class GroupTable:
    """A finite group given by an explicit element list.

    Elements are hashable; ``mul`` is computed on demand and memoized in a
    full table when the group is small enough.
    """

    TABLE_LIMIT = 700

    def __init__(self, elements: Sequence[Hashable], mul: Callable, identity: Hashable,
                 inverse: Optional[Callable] = None, name: str = "", generators: Sequence[Hashable] = (),
                 render: Optional[Callable] = None, check: bool = False):
        self.elements = list(elements)
        self.index = {g: i for i, g in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise ValueError("duplicate group elements")
        self._mul = mul
        self.name = name
        self.identity = self.index[identity]
        self.generators = [self.index[g] for g in generators]
        self._render = render or str
        self._table: Optional[List[List[int]]] = None
        if inverse is not None:
            self.inverse = [self.index[inverse(g)] for g in self.elements]
        else:
            self.inverse = [0] * len(self.elements)
            for i in range(len(self.elements)):
                for j in range(len(self.elements)):
                    if self.mul(i, j) == self.identity:
                        self.inverse[i] = j
                        break
        if check:
            self.verify()

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def _build_table(self) -> None:
        idx, els, f = self.index, self.elements, self._mul
        self._table = [[idx[f(x, y)] for y in els] for x in els]

    def mul(self, i: int, j: int) -> int:
        if self._table is None and len(self.elements) <= self.TABLE_LIMIT:
            self._build_table()
        if self._table is not None:
            return self._table[i][j]
        return self.index[self._mul(self.elements[i], self.elements[j])]

    def inv(self, i: int) -> int:
        return self.inverse[i]

    def verify(self) -> None:
        """Closure, identity and inverses (raises on failure)."""
        n = len(self.elements)
        for i in range(n):
            if self.mul(i, self.identity) != i or self.mul(self.identity, i) != i:
                raise ValueError("identity law fails")
            if self.mul(i, self.inverse[i]) != self.identity:
                raise ValueError("inverse law fails")
            for j in range(n):
                self.mul(i, j)  # KeyError if not closed

    def contains_subgroup(self, H: "GroupTable") -> bool:
        return all(g in self.index for g in H.elements)

    def subgroup_embedding(self, H: "GroupTable") -> List[int]:
        """Indices in self of the elements of H (raises if H is not contained)."""
        try:
            return [self.index[g] for g in H.elements]
        except KeyError:
            raise ValueError(f"{H.name} is not a subgroup of {self.name}") from None

    def commutes(self, i: int, j: int) -> bool:
        return self.mul(i, j) == self.mul(j, i)

    def render(self, i: int) -> str:
        return self._render(self.elements[i])

    def element_order(self, i: int) -> int:
        k, x = 1, i
        while x != self.identity:
            x = self.mul(x, i)
            k += 1
        return k

    @classmethod
    def cyclic(cls, m: int) -> "GroupTable":
        return cls(list(range(m)), lambda a, b: (a + b) % m, 0, inverse=lambda a: (-a) % m,
                   name=f"Z/{m}", generators=[1 % m])

    def abelianization_order(self) -> int:
        """|G/[G,G]| by enumerating the commutator subgroup."""
        n = len(self.elements)
        comms = {self.mul(self.mul(i, j), self.mul(self.inv(i), self.inv(j))) for i in range(n) for j in range(n)}
        sub = {self.identity}
        frontier = list(sub)
        while frontier:
            new = []
            for x in frontier:
                for c in comms:
                    y = self.mul(x, c)
                    if y not in sub:
                        sub.add(y)
                        new.append(y)
            frontier = new
        return n // len(sub)


def unimodular_columns(R: FiniteRing) -> Dict[Tuple[int, int], Tuple[int, int]]:
    """Map each unimodular column (a, c) to some (b, d) with ad - bc = 1."""
    # ideal generated by (a, c) contains 1 iff a*A + c*A contains 1
    mult = {c: {} for c in R.elements()}
    for c in R.elements():
        for y in R.elements():
            mult[c].setdefault(R.mul(c, y), y)
    one = R.one
    out = {}
    for a in R.elements():
        for c in R.elements():
            mc = mult[c]
            for x in R.elements():
                y = mc.get(R.sub(one, R.mul(a, x)))
                if y is not None:
                    out[(a, c)] = (R.neg(y), x)
                    break
    return out


def sl2_order(R: FiniteRing) -> int:
    return len(unimodular_columns(R)) * R.size


def enumerate_group(R: FiniteRing, which: str, cap: int = DEFAULT_GROUP_CAP) -> GroupTable:
    if which not in GROUP_KINDS:
        raise ValueError(f"unknown group {which!r}; expected one of {', '.join(GROUP_KINDS)}")
    units = R.units
    zero, elems = R.zero, list(R.elements())
    if which == "SL2":
        cols = unimodular_columns(R)
        if len(cols) * R.size > cap:
            raise CapExceeded(f"|SL2({R.spec})| = {len(cols) * R.size} exceeds cap {cap}")
        mats = set()
        for (a, c), (b0, d0) in cols.items():
            for t in elems:
                mats.add((a, R.add(b0, R.mul(t, a)), c, R.add(d0, R.mul(t, c))))
        gens = [elem_E(R, x) for x in elems]
    elif which == "E2":
        gens = [elem_E(R, x) for x in elems]
        mats = {identity(R)}
        queue = deque(mats)
        while queue:
            X = queue.popleft()
            for g in gens:
                Y = mat_mul(R, X, g)
                if Y not in mats:
                    mats.add(Y)
                    if len(mats) > cap:
                        raise CapExceeded(f"|E2({R.spec})| exceeds cap {cap}")
                    queue.append(Y)
    elif which == "SM2":
        mats = {(a, zero, zero, R.inv(a)) for a in units}
        mats |= {(zero, a, R.neg(R.inv(a)), zero) for a in units}
        gens = []
    elif which == "T":
        mats = {(a, zero, zero, R.inv(a)) for a in units}
        gens = []
    else:
        if len(units) * R.size > cap:
            raise CapExceeded(f"|B({R.spec})| exceeds cap {cap}")
        mats = {(a, b, zero, R.inv(a)) for a in units for b in elems}
        gens = []
    return GroupTable(sorted(mats), lambda X, Y: mat_mul(R, X, Y), identity(R),
                      inverse=lambda X: mat_inv(R, X), name=f"{which}({R.spec})", generators=gens,
                      render=lambda X: render(R, X))


_GROUP_CACHE: Dict[Tuple[object, str], GroupTable] = {}


def group(R: FiniteRing, which: str, cap: int = DEFAULT_GROUP_CAP) -> GroupTable:
    """Memoized enumerate_group."""
    key = (R.spec, which)
    if key not in _GROUP_CACHE:
        _GROUP_CACHE[key] = enumerate_group(R, which, cap)
    G = _GROUP_CACHE[key]
    if len(G) > cap:
        raise CapExceeded(f"{which}({R.spec}) has {len(G)} elements, above the cap {cap}")
    return G


def is_ge2_ring(R: FiniteRing, cap: int = DEFAULT_GROUP_CAP) -> bool:
    """True iff the closure of {E(x)} is all of SL2(A)."""
    n = sl2_order(R)
    if n > cap:
        raise CapExceeded(f"|SL2({R.spec})| = {n} exceeds cap {cap}")
    return len(group(R, "E2", cap)) == n


def conjugate_by_w(R: FiniteRing, X: Mat2) -> Mat2:
    w = elem_w(R)
    return _prod(R, w, X, mat_inv(R, w))
