import itertools
import math

import pytest
import sympy

from refscissors.abgrp import set_snf_cache
from refscissors.ring import make_ring, parse_ring_spec


def ring(spec):
    return make_ring(parse_ring_spec(spec))


def minors_oracle(M, ncols):
    """Invariant factors from gcds of k x k minors (determinantal divisors)."""
    rows = len(M)
    d_prev, out = 1, []
    for k in range(1, min(rows, ncols) + 1):
        g = 0
        for rs in itertools.combinations(range(rows), k):
            for cs in itertools.combinations(range(ncols), k):
                g = math.gcd(g, int(sympy.Matrix([[M[r][c] for c in cs] for r in rs]).det()))
        if g == 0:
            break
        out.append(g // d_prev)
        d_prev = g
    return out


def sympy_group(rows, ncols):
    """(torsion, free rank) of Z^ncols / <rows> via sympy's Smith form."""
    from sympy.matrices.normalforms import smith_normal_form
    from sympy.polys.domains import ZZ

    if not rows:
        return [], ncols
    D = smith_normal_form(sympy.Matrix(rows), domain=ZZ)
    diag = [abs(int(D[i, i])) for i in range(min(D.shape))]
    nonzero = [d for d in diag if d]
    return sorted(d for d in nonzero if d > 1), ncols - len(nonzero)


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    # never touch the user's cache directory from the test suite
    monkeypatch.setenv("RSC_CACHE_DIR", str(tmp_path / "cache"))
    set_snf_cache(None)
    yield
    set_snf_cache(None)
