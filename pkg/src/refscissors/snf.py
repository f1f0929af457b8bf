"""Exact integer linear algebra: Smith normal form, echelon lattices, kernels.

Everything here works over Python integers, so there is no overflow; the
price is speed, which is bought back by a sparse unit-pivot elimination pass
(`reduce_presentation`) that handles the extremely sparse boundary matrices
coming from bar and unimodular complexes before any dense work happens.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

SparseVec = Dict[int, int]


def egcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, u, v) with u*a + v*b = g = gcd(a, b) >= 0."""
    u0, v0, u1, v1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    if a < 0:
        a, u0, v0 = -a, -u0, -v0
    return a, u0, v0


class IntMatrix:
    """Sparse integer matrix stored as a dict of nonzero triplets."""

    def __init__(self, nrows: int, ncols: int, entries: Optional[Dict[Tuple[int, int], int]] = None):
        self.nrows = nrows
        self.ncols = ncols
        self.entries: Dict[Tuple[int, int], int] = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise IndexError(f"entry ({i}, {j}) outside {nrows}x{ncols}")
            if v:
                self.entries[(i, j)] = int(v)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], ncols: Optional[int] = None) -> "IntMatrix":
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        ent = {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v}
        return cls(nrows, ncols, ent)

    @classmethod
    def from_columns(cls, nrows: int, cols: Sequence[SparseVec]) -> "IntMatrix":
        ent = {(i, j): v for j, c in enumerate(cols) for i, v in c.items() if v}
        return cls(nrows, len(cols), ent)

    def dense(self) -> List[List[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def rows(self) -> List[SparseVec]:
        out: List[SparseVec] = [dict() for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def columns(self) -> List[SparseVec]:
        out: List[SparseVec] = [dict() for _ in range(self.ncols)]
        for (i, j), v in self.entries.items():
            out[j][i] = v
        return out

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.ncols, self.nrows, {(j, i): v for (i, j), v in self.entries.items()})

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        ocols = other.rows()
        acc: Dict[Tuple[int, int], int] = defaultdict(int)
        for (i, k), v in self.entries.items():
            for j, w in ocols[k].items():
                acc[(i, j)] += v * w
        return IntMatrix(self.nrows, other.ncols, {k: v for k, v in acc.items() if v})

    def is_zero(self) -> bool:
        return not self.entries

    def triplets(self) -> List[Tuple[int, int, int]]:
        return sorted((i, j, v) for (i, j), v in self.entries.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return (self.nrows, self.ncols, self.entries) == (other.nrows, other.ncols, other.entries)

    def __repr__(self) -> str:
        return f"IntMatrix({self.nrows}x{self.ncols}, nnz={len(self.entries)})"


# ---------------------------------------------------------------------------
# dense Smith normal form with transforms


def smith_dense(A: Sequence[Sequence[int]], track_rows: bool = False, track_cols: bool = False):
    """Smith normal form of a dense matrix.

    Returns ``(diag, U, V, Vinv)`` with ``U*A*V`` diagonal; ``diag`` has
    ``min(m, n)`` entries, nonnegative, each dividing the next (zeros last).
    Untracked transforms are returned as None.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    a = [list(map(int, r)) for r in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)] if track_rows else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if track_cols else None
    Vi = [[int(i == j) for j in range(n)] for i in range(n)] if track_cols else None

    def row_op(i, j, p, q, r, s):
        # (row_i, row_j) <- (p row_i + q row_j, r row_i + s row_j), det = +-1
        ri, rj = a[i], a[j]
        a[i] = [p * x + q * y for x, y in zip(ri, rj)]
        a[j] = [r * x + s * y for x, y in zip(ri, rj)]
        if U is not None:
            ui, uj = U[i], U[j]
            U[i] = [p * x + q * y for x, y in zip(ui, uj)]
            U[j] = [r * x + s * y for x, y in zip(ui, uj)]

    def col_op(i, j, p, q, r, s):
        # (col_i, col_j) <- (p col_i + r col_j, q col_i + s col_j)
        for row in a:
            x, y = row[i], row[j]
            row[i] = p * x + r * y
            row[j] = q * x + s * y
        if V is not None:
            for row in V:
                x, y = row[i], row[j]
                row[i] = p * x + r * y
                row[j] = q * x + s * y
            det = p * s - q * r
            xi, xj = Vi[i], Vi[j]
            Vi[i] = [(s * x - q * y) * det for x, y in zip(xi, xj)]
            Vi[j] = [(-r * x + p * y) * det for x, y in zip(xi, xj)]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            ri = a[i]
            for j in range(t, n):
                v = ri[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            row_op(t, pi, 0, 1, 1, 0)
        if pj != t:
            col_op(t, pj, 0, 1, 1, 0)
        while True:
            dirty = False
            for i in range(t + 1, m):
                y = a[i][t]
                if not y:
                    continue
                x = a[t][t]
                if y % x == 0:
                    q = y // x
                    row_op(t, i, 1, 0, -q, 1)
                else:
                    g, u, v = egcd(x, y)
                    row_op(t, i, u, v, -y // g, x // g)
            for j in range(t + 1, n):
                y = a[t][j]
                if not y:
                    continue
                x = a[t][t]
                if y % x == 0:
                    col_op(t, j, 1, -(y // x), 0, 1)
                else:
                    g, u, v = egcd(x, y)
                    col_op(t, j, u, -y // g, v, x // g)
                    dirty = True
            if dirty and any(a[i][t] for i in range(t + 1, m)):
                continue
            piv = a[t][t]
            bad = None
            for i in range(t + 1, m):
                ri = a[i]
                for j in range(t + 1, n):
                    if ri[j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_op(t, bad, 1, 1, 0, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        t += 1
    diag = [a[i][i] for i in range(min(m, n))]
    return diag, U, V, Vi


# ---------------------------------------------------------------------------
# echelon lattices


def _row_key(v: Sequence[int], upto: int) -> int:
    for i in range(upto):
        if v[i]:
            return i
    return upto


class EchelonLattice:
    """Row-echelon basis of a sublattice of Z^n (pivot columns strictly increasing).

    Rows are inserted one at a time with unimodular 2x2 gcd steps, so the basis
    always spans exactly the lattice generated by the inserted vectors.
    """

    def __init__(self, n: int):
        self.n = n
        self.rows: Dict[int, List[int]] = {}

    def insert(self, v: Sequence[int]) -> bool:
        w = list(v)
        c = _row_key(w, self.n)
        while c < self.n:
            b = self.rows.get(c)
            if b is None:
                if w[c] < 0:
                    w = [-x for x in w]
                self.rows[c] = w
                self._reduce_above(c)
                return True
            x, y = b[c], w[c]
            if y % x == 0:
                q = y // x
                w = [wi - q * bi for wi, bi in zip(w, b)]
            else:
                g, u, vv = egcd(x, y)
                nb = [u * bi + vv * wi for bi, wi in zip(b, w)]
                w = [(y // g) * bi - (x // g) * wi for bi, wi in zip(b, w)]
                self.rows[c] = nb
                self._reduce_above(c)
            c = _row_key(w, self.n)
        return False

    def _reduce_above(self, c: int) -> None:
        # keep entries above each pivot reduced to bound growth
        piv = self.rows[c]
        p = piv[c]
        for k, r in self.rows.items():
            if k < c and r[c]:
                q = r[c] // p
                if q:
                    self.rows[k] = [ri - q * pi for ri, pi in zip(r, piv)]

    def basis(self) -> List[List[int]]:
        return [self.rows[k] for k in sorted(self.rows)]

    def solve(self, v: Sequence[int]) -> Optional[List[int]]:
        """Integer coefficients of v in ``basis()``, or None if v is not in the lattice."""
        w = list(v)
        coeffs = []
        for k in sorted(self.rows):
            r = self.rows[k]
            if w[k] % r[k]:
                return None
            q = w[k] // r[k]
            coeffs.append(q)
            if q:
                w = [wi - q * ri for wi, ri in zip(w, r)]
        if any(w):
            return None
        return coeffs

    def contains(self, v: Sequence[int]) -> bool:
        return self.solve(v) is not None

    def __len__(self) -> int:
        return len(self.rows)


def lattice(vectors: Iterable[Sequence[int]], n: int) -> EchelonLattice:
    L = EchelonLattice(n)
    for v in vectors:
        if any(v):
            L.insert(v)
    return L


def integer_kernel(A: Sequence[Sequence[int]], ncols: int) -> List[List[int]]:
    """Basis of the lattice {x in Z^ncols : A x = 0} (saturated)."""
    m = len(A)
    aug = []
    for j in range(ncols):
        aug.append([A[i][j] for i in range(m)] + [int(k == j) for k in range(ncols)])
    kernel_rows: List[List[int]] = []
    # rows whose A-part vanishes during echelon insertion are kernel vectors
    piv: Dict[int, List[int]] = {}
    for w in aug:
        c = _row_key(w, m)
        while c < m:
            b = piv.get(c)
            if b is None:
                piv[c] = w
                break
            x, y = b[c], w[c]
            g, u, vv = egcd(x, y)
            nb = [u * bi + vv * wi for bi, wi in zip(b, w)]
            w = [(y // g) * bi - (x // g) * wi for bi, wi in zip(b, w)]
            piv[c] = nb
            c = _row_key(w, m)
        else:
            kernel_rows.append(w[m:])
    return kernel_rows


# ---------------------------------------------------------------------------
# sparse presentation reduction


@dataclass
class Reduction:
    """Result of reducing a presentation Z^ngens / <relations>.

    ``subs`` records eliminated generators in order as (gen, expression in
    the remaining generators); ``alive`` are the surviving generators, and the
    dense residual Smith form acts on them through ``Q`` (coordinates) and
    ``Qinv`` (lifts).
    """

    ngens: int
    subs: List[Tuple[int, SparseVec]]
    alive: List[int]
    diag: List[int]
    Q: Optional[List[List[int]]] = None
    Qinv: Optional[List[List[int]]] = None
    alive_pos: Dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        self.alive_pos = {g: i for i, g in enumerate(self.alive)}

    def residual(self, x: SparseVec) -> List[int]:
        """Express a generator vector in the alive generators."""
        x = {k: v for k, v in x.items() if v}
        if self.subs and x:
            for j, expr in self.subs:
                c = x.pop(j, 0)
                if c:
                    for k, a in expr.items():
                        nv = x.get(k, 0) + c * a
                        if nv:
                            x[k] = nv
                        else:
                            x.pop(k, None)
                    if not x:
                        break
        out = [0] * len(self.alive)
        for k, v in x.items():
            out[self.alive_pos[k]] = v
        return out


def _eliminate_units_sweep(ngens: int, rows: List[SparseVec]):
    """Column sweeps: pivot on a unit entry and clear its column in every row."""
    rows = [dict(r) for r in rows]
    colidx: Dict[int, set] = defaultdict(set)
    for i, r in enumerate(rows):
        for c in r:
            colidx[c].add(i)
    dead_rows = set(i for i, r in enumerate(rows) if not r)
    subs: List[Tuple[int, SparseVec]] = []
    progress = True
    while progress:
        progress = False
        order = sorted((len(s), c) for c, s in colidx.items() if s)
        for _, j in order:
            cand = colidx.get(j)
            if not cand:
                continue
            best = None
            bestlen = 0
            for i in cand:
                v = rows[i][j]
                if v == 1 or v == -1:
                    L = len(rows[i])
                    if best is None or L < bestlen:
                        best, bestlen = i, L
                        if L == 1:
                            break
            if best is None:
                continue
            r = rows[best]
            v = r[j]
            for c in r:
                colidx[c].discard(best)
            for t in list(colidx[j]):
                rt = rows[t]
                f = rt[j] * v
                for c, a in r.items():
                    nv = rt.get(c, 0) - f * a
                    if nv:
                        if c not in rt:
                            colidx[c].add(t)
                        rt[c] = nv
                    elif c in rt:
                        del rt[c]
                        colidx[c].discard(t)
                if not rt:
                    dead_rows.add(t)
            subs.append((j, {c: -a * v for c, a in r.items() if c != j}))
            del colidx[j]
            rows[best] = {}
            dead_rows.add(best)
            progress = True
    eliminated = {j for j, _ in subs}
    alive = [g for g in range(ngens) if g not in eliminated]
    residual = [rows[i] for i in range(len(rows)) if i not in dead_rows and rows[i]]
    return subs, alive, residual


def _eliminate_units(ngens: int, rows: List[SparseVec]):
    """Eliminate generators along unit pivots.

    Relations are streamed once against a Gauss-Jordan table of pivots whose
    expressions only use non-pivot generators, so redundant relations cost a
    single substitution.  Relations without a unit entry are set aside and
    handed to the column sweep at the end.  Returns (subs, alive, residual).
    """
    expr: Dict[int, SparseVec] = {}
    occ: Dict[int, set] = defaultdict(set)
    order: List[int] = []
    leftovers: List[SparseVec] = []
    for r in rows:
        x = _substitute(r, expr)
        if not x:
            continue
        best, bestlen = None, 0
        for c, a in x.items():
            if a == 1 or a == -1:
                n = len(occ.get(c, ()))
                if best is None or n < bestlen:
                    best, bestlen = c, n
                    if n == 0:
                        break
        if best is None:
            leftovers.append(x)
            continue
        v = x.pop(best)
        e = {k: -a * v for k, a in x.items()}
        for q in occ.pop(best, ()):
            eq = expr[q]
            f = eq.pop(best)
            for k, b in e.items():
                nv = eq.get(k, 0) + f * b
                if nv:
                    if k not in eq:
                        occ[k].add(q)
                    eq[k] = nv
                elif k in eq:
                    del eq[k]
                    occ[k].discard(q)
        expr[best] = e
        for k in e:
            occ[k].add(best)
        order.append(best)
    subs = [(j, expr[j]) for j in order]
    residual: List[SparseVec] = []
    if leftovers:
        seen = set()
        red = []
        for x in leftovers:
            y = _substitute(x, expr)
            if not y:
                continue
            key = tuple(sorted(y.items()))
            if key[0][1] < 0:
                key = tuple((k, -v) for k, v in key)
            if key not in seen:
                seen.add(key)
                red.append(y)
        more, _, residual = _eliminate_units_sweep(ngens, red)
        subs += more
    eliminated = {j for j, _ in subs}
    alive = [g for g in range(ngens) if g not in eliminated]
    return subs, alive, residual


def _substitute(r: SparseVec, expr: Dict[int, SparseVec]) -> SparseVec:
    x: SparseVec = {}
    for c, a in r.items():
        e = expr.get(c)
        if e is None:
            e, a = {c: 1}, a
        for k, b in e.items():
            nv = x.get(k, 0) + a * b
            if nv:
                x[k] = nv
            else:
                x.pop(k, None)
    return x


def reduce_presentation(ngens: int, relations: Iterable[SparseVec], track: bool = True) -> Reduction:
    """Reduce Z^ngens / <relations> to Smith form.

    Unit pivots are eliminated sparsely first; the residual is brought to
    echelon form and then to dense Smith form.  With ``track`` the column
    transforms needed for coordinates and lifts are kept.
    """
    subs, alive, residual = _eliminate_units(ngens, list(relations))
    pos = {g: i for i, g in enumerate(alive)}
    k = len(alive)
    E = EchelonLattice(k)
    for r in residual:
        d = [0] * k
        for c, v in r.items():
            d[pos[c]] = v
        E.insert(d)
    dense = E.basis()
    if not dense:
        diag: List[int] = []
        Q = [[int(i == j) for j in range(k)] for i in range(k)] if track else None
        Qinv = [row[:] for row in Q] if track else None
    else:
        diag, _, Q, Qinv = smith_dense(dense, track_cols=track)
        if not track:
            Q = Qinv = None
    full = list(diag) + [0] * (k - len(diag))
    return Reduction(ngens, subs, alive, full, Q, Qinv)


def sparse_kernel(ncols: int, rows: Iterable[SparseVec]) -> List[SparseVec]:
    """Basis of {x in Z^ncols : r.x = 0 for every row r}, as sparse vectors."""
    return KernelBasis(ncols, rows).basis


class KernelBasis:
    """Z-basis of ker(rows) with a coordinate map back from kernel vectors."""

    def __init__(self, ncols: int, rows: Iterable[SparseVec]):
        subs, alive, residual = _eliminate_units(ncols, [dict(r) for r in rows])
        self.ncols = ncols
        self.alive = alive
        self._lat: Optional[EchelonLattice] = None
        if residual:
            pos = {g: i for i, g in enumerate(alive)}
            A = []
            for r in residual:
                d = [0] * len(alive)
                for c, v in r.items():
                    d[pos[c]] = v
                A.append(d)
            self._lat = lattice(integer_kernel(A, len(alive)), len(alive))
            free = self._lat.basis()
        else:
            free = [[int(i == j) for j in range(len(alive))] for i in range(len(alive))]
        self.basis: List[SparseVec] = []
        for fv in free:
            x = {alive[i]: v for i, v in enumerate(fv) if v}
            for j, expr in reversed(subs):
                s = sum(a * x.get(c, 0) for c, a in expr.items())
                if s:
                    x[j] = s
            self.basis.append(x)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coords(self, z: SparseVec) -> List[int]:
        """Coefficients of the kernel vector z in ``basis`` (z is not checked)."""
        part = [z.get(g, 0) for g in self.alive]
        if self._lat is None:
            return part
        c = self._lat.solve(part)
        if c is None:
            raise ValueError("vector is not in the kernel lattice")
        return c
