"""Exact linear algebra helpers.

Sparse rows are dicts {column: coefficient}.  Rank is computed by
incremental elimination keyed on the leading column, over GF(p) or over
the rationals.  Rows with at most two nonzeros stay that way under this
elimination, which keeps the automorphism systems cheap.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

SparseRow = Dict[int, int]

DEFAULT_SEED = 20240601


def choose_primes(count: int = 2, seed: Optional[int] = None, bits: int = 31) -> List[int]:
    """Deterministic distinct primes in (2^30, 2^31)."""
    from sympy import nextprime

    rng = random.Random(DEFAULT_SEED if seed is None else seed)
    out: List[int] = []
    while len(out) < count:
        p = int(nextprime(rng.randrange(2 ** (bits - 1) + 1, 2 ** bits - 2 ** 20)))
        if p not in out:
            out.append(p)
    return out


def _reduce_mod(row: Dict[int, int], pivots: Dict[int, Dict[int, int]], p: int) -> Dict[int, int]:
    while row:
        c = min(row)
        piv = pivots.get(c)
        if piv is None:
            return row
        f = row[c]
        for k, v in piv.items():
            nv = (row.get(k, 0) - f * v) % p
            if nv:
                row[k] = nv
            else:
                row.pop(k, None)
    return row


def rank_mod_p(rows: Iterable[SparseRow], p: int) -> int:
    pivots: Dict[int, Dict[int, int]] = {}
    for r in rows:
        row = {k: v % p for k, v in r.items() if v % p}
        row = _reduce_mod(row, pivots, p)
        if row:
            c = min(row)
            inv = pow(row[c], -1, p)
            pivots[c] = {k: (v * inv) % p for k, v in row.items()}
    return len(pivots)


def _reduce_q(row: Dict[int, Fraction], pivots: Dict[int, Dict[int, Fraction]]) -> Dict[int, Fraction]:
    while row:
        c = min(row)
        piv = pivots.get(c)
        if piv is None:
            return row
        f = row[c]
        for k, v in piv.items():
            nv = row.get(k, 0) - f * v
            if nv:
                row[k] = nv
            else:
                row.pop(k, None)
    return row


def rank_rational(rows: Iterable[SparseRow]) -> int:
    pivots: Dict[int, Dict[int, Fraction]] = {}
    for r in rows:
        row = {k: Fraction(v) for k, v in r.items() if v}
        row = _reduce_q(row, pivots)
        if row:
            c = min(row)
            lead = row[c]
            pivots[c] = {k: v / lead for k, v in row.items()}
    return len(pivots)


def nullspace_rational(rows: Sequence[SparseRow], ncols: int) -> List[List[Fraction]]:
    """Basis of the right kernel, one dense vector per free column."""
    pivots: Dict[int, Dict[int, Fraction]] = {}
    for r in rows:
        row = _reduce_q({k: Fraction(v) for k, v in r.items() if v}, pivots)
        if row:
            c = min(row)
            lead = row[c]
            pivots[c] = {k: v / lead for k, v in row.items()}
    # back-substitute to reduced echelon form, highest pivot first
    for c in sorted(pivots, reverse=True):
        row = pivots[c]
        for k in [k for k in row if k != c and k in pivots]:
            f = row[k]
            for kk, vv in pivots[k].items():
                nv = row.get(kk, 0) - f * vv
                if nv:
                    row[kk] = nv
                else:
                    row.pop(kk, None)
    basis = []
    for free in range(ncols):
        if free in pivots:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for c, row in pivots.items():
            if free in row:
                v[c] = -row[free]
        basis.append(v)
    return basis


def signed_graph_nullity(rows: Iterable[SparseRow], ncols: int) -> int:
    """Nullity of a system whose rows are a*x_u + b*x_v = 0 with a,b = +-1.

    Each connected component either carries a consistent sign assignment
    (one free parameter) or contains a frustrated cycle (forced zero).
    Used as an independent check on the elimination engines.
    """
    parent = list(range(ncols))
    parity = [0] * ncols  # x_i = (-1)^parity * x_root
    dead = [False] * ncols

    def find_par(i: int) -> Tuple[int, int]:
        path = []
        while parent[i] != i:
            path.append(i)
            i = parent[i]
        acc = 0
        for node in reversed(path):
            acc ^= parity[node]
            parity[node] = acc
            parent[node] = i
        return i, (parity[path[0]] if path else 0)

    for r in rows:
        items = [(k, v) for k, v in r.items() if v]
        if not items:
            continue
        if len(items) == 1:
            root, _ = find_par(items[0][0])
            dead[root] = True
            continue
        if len(items) != 2 or any(abs(v) != 1 for _, v in items):
            raise ValueError("row is not a signed edge")
        (u, a), (w, b) = items
        # a x_u + b x_w = 0  ->  x_u = -a*b x_w
        rel = 0 if -a * b == 1 else 1
        ru, pu = find_par(u)
        rw, pw = find_par(w)
        if ru == rw:
            if pu ^ pw != rel:
                dead[ru] = True
            continue
        parent[ru] = rw
        parity[ru] = pu ^ pw ^ rel
        dead[rw] = dead[rw] or dead[ru]
    roots = {find_par(i)[0] for i in range(ncols)}
    return sum(1 for root in roots if not dead[root])


def signed_graph_basis(rows: Iterable[SparseRow], ncols: int) -> List[Dict[int, int]]:
    """Kernel basis for a signed-edge system: one +-1 vector per balanced component."""
    parent = list(range(ncols))
    parity = [0] * ncols

    def find(i: int) -> Tuple[int, int]:
        p = 0
        while parent[i] != i:
            p ^= parity[i]
            i = parent[i]
        return i, p

    dead = []
    for r in rows:
        items = [(k, v) for k, v in r.items() if v]
        if not items:
            continue
        if len(items) == 1:
            dead.append(items[0][0])
            continue
        if len(items) != 2 or any(abs(v) != 1 for _, v in items):
            raise ValueError("row is not a signed edge")
        (u, a), (w, b) = items
        rel = 0 if -a * b == 1 else 1
        ru, pu = find(u)
        rw, pw = find(w)
        if ru == rw:
            if pu ^ pw != rel:
                dead.append(ru)
            continue
        parent[ru] = rw
        parity[ru] = pu ^ pw ^ rel
    bad = {find(d)[0] for d in dead}
    comps: Dict[int, Dict[int, int]] = {}
    for i in range(ncols):
        root, p = find(i)
        if root not in bad:
            comps.setdefault(root, {})[i] = -1 if p else 1
    return [comps[k] for k in sorted(comps)]


# dense helpers on exact matrices -------------------------------------------

def to_fraction_matrix(m) -> List[List[Fraction]]:
    return [[Fraction(x) for x in row] for row in np.asarray(m, dtype=object).tolist()]


def frac_matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def frac_inverse(m: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    n = len(m)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[c], aug[piv] = aug[piv], aug[c]
        lead = aug[c][c]
        aug[c] = [x / lead for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def frac_identity(n: int) -> List[List[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def frac_transpose(m: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    return [list(r) for r in zip(*m)]


def object_array(m) -> np.ndarray:
    """numpy object array of Fractions (exact arithmetic through numpy ops)."""
    arr = np.asarray(m, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = Fraction(x)
    return out


def is_signed_permutation(m: np.ndarray) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    nz = m != 0
    if not (np.all(nz.sum(axis=0) == 1) and np.all(nz.sum(axis=1) == 1)):
        return False
    return bool(np.all(np.abs(m[nz]) == 1))
