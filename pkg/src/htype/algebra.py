"""Pseudo H-type Lie algebras n_{r,s}(U) and the Lie algebra of Aut^0.

For an admissible module with integral basis x_1..x_n and orthonormal
centre basis z_1..z_m the bracket is

    [x_i, x_j] = sum_k C_k[i, j] z_k,   C_k[i, j] = <z_k,z_k> <J_k x_i, x_j>.

A linear map A of U is in Aut^0 iff A^T M_k A = M_k for M_k = eta J_k.
The linearised condition a^T M_k + M_k a = 0 has exactly two unknowns per
equation when J_k is a signed permutation, which makes the rank
computation a signed-graph problem.
"""

from __future__ import annotations

import itertools
import random
from math import gcd
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .linalg import (DEFAULT_SEED, choose_primes, frac_inverse, object_array, rank_mod_p, rank_rational,
                     signed_graph_basis, signed_graph_nullity)
from .representations import Representation


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class HTypeAlgebra:
    rep: Representation
    structure: Tuple[np.ndarray, ...]  # C_k, k = 1..m, each n x n antisymmetric

    @property
    def center_signature(self):
        return self.rep.signature

    @property
    def dim_module(self) -> int:
        return self.rep.dim

    @property
    def dim_center(self) -> int:
        return self.rep.signature.n

    def bracket(self, u: Sequence, v: Sequence) -> Tuple:
        u, v = object_array(u), object_array(v)
        return tuple(u @ object_array(c) @ v for c in self.structure)

    def metric_forms(self) -> List[np.ndarray]:
        """M_k = eta J_k, the forms preserved by Aut^0."""
        eta = self.rep.eta_matrix()
        return [eta @ g for g in self.rep.generators]

    def constants(self) -> Iterator[Tuple[int, int, int, int]]:
        """Nonzero (i, j, k, c) with i < j, 0-based module indices, 1-based k."""
        for k, c in enumerate(self.structure, start=1):
            ii, jj = np.nonzero(np.triu(c, 1))
            for i, j in zip(ii.tolist(), jj.tolist()):
                yield i, j, k, int(c[i, j])

    def to_json(self) -> dict:
        return {
            "r": self.rep.r,
            "s": self.rep.s,
            "dim": self.dim_module,
            "constants": [list(t) for t in sorted(self.constants())],
        }


def build_htype(rep: Representation) -> HTypeAlgebra:
    sig = rep.signature
    eta = rep.eta_matrix()
    # <J_k x_i, x_j> = (J_k^T eta)[i, j]
    cs = tuple(sig.q(k) * (rep.J(k).T @ eta) for k in range(1, sig.n + 1))
    return HTypeAlgebra(rep, cs)


def bracket_surjective(alg: HTypeAlgebra) -> bool:
    """[U,U] spans the whole centre."""
    n = alg.dim_module
    rows = []
    for c in alg.structure:
        ii, jj = np.nonzero(c)
        rows.append({int(i) * n + int(j): int(c[i, j]) for i, j in zip(ii, jj)})
    return rank_rational(rows) == alg.dim_center


# automorphism candidates -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AutCandidate:
    """Block map (x, z) -> (t A x, B x + t^2 C z).

    B never enters the bracket condition but is carried for completeness.
    """

    A: np.ndarray
    C: np.ndarray
    B: Optional[np.ndarray] = None
    t: Fraction = Fraction(1)

    @classmethod
    def identity(cls, alg: HTypeAlgebra) -> "AutCandidate":
        return cls(np.eye(alg.dim_module, dtype=np.int64), np.eye(alg.dim_center, dtype=np.int64))

    @classmethod
    def dilation(cls, alg: HTypeAlgebra, t, B=None) -> "AutCandidate":
        base = cls.identity(alg)
        return cls(base.A, base.C, B, Fraction(t))


def _as_object(m) -> np.ndarray:
    return object_array(m)


def automorphism_residual(alg: HTypeAlgebra, A, C) -> List[np.ndarray]:
    """A^T C_k A - sum_l C[k, l] C_l for every k (exact)."""
    A, C = _as_object(A), _as_object(C)
    S = [_as_object(c) for c in alg.structure]
    out = []
    for k in range(alg.dim_center):
        rhs = sum((C[k, l] * S[l] for l in range(alg.dim_center)), np.zeros_like(S[0]))
        out.append(A.T @ S[k] @ A - rhs)
    return out


def verify_automorphism(alg: HTypeAlgebra, cand: AutCandidate) -> bool:
    n, m = alg.dim_module, alg.dim_center
    A, C = np.asarray(cand.A), np.asarray(cand.C)
    if A.shape != (n, n) or C.shape != (m, m):
        raise AlgebraError(f"candidate shapes {A.shape}, {C.shape} do not match ({n},{m})")
    if cand.B is not None and np.asarray(cand.B).shape != (m, n):
        raise AlgebraError("B must be an m x n matrix")
    t = Fraction(cand.t)
    if t == 0:
        raise AlgebraError("dilation factor must be nonzero")
    At = _as_object(A) * t
    Ct = _as_object(C) * (t * t)
    return all(not np.any(r != 0) for r in automorphism_residual(alg, At, Ct))


# Lie algebra of Aut^0 ---------------------------------------------------------------

def aut0_rows(alg: HTypeAlgebra) -> Iterator[Dict[int, int]]:
    """Rows (i < j) of a^T M_k + M_k a = 0; unknown a[l, c] has index l*n + c."""
    n = alg.dim_module
    for M in alg.metric_forms():
        # M[sigma(j), j] is the nonzero entry of column j, M[i, tau(i)] of row i
        sigma = np.argmax(M != 0, axis=0)
        tau = np.argmax(M != 0, axis=1)
        for i in range(n):
            ti = int(tau[i])
            mi = int(M[i, ti])
            for j in range(i + 1, n):
                sj = int(sigma[j])
                row: Dict[int, int] = {}
                # (a^T M)[i, j] = a[sj, i] M[sj, j];  (M a)[i, j] = M[i, ti] a[ti, j]
                row[sj * n + i] = row.get(sj * n + i, 0) + int(M[sj, j])
                key = ti * n + j
                row[key] = row.get(key, 0) + mi
                row = {k: v for k, v in row.items() if v}
                if row:
                    yield row


@dataclass(frozen=True)
class DimensionReport:
    dimension: int
    mode: str
    unknowns: int
    primes: Tuple[int, ...] = ()
    agree: bool = True

    def to_json(self) -> dict:
        return {"dimension": self.dimension, "mode": self.mode, "unknowns": self.unknowns,
                "primes": list(self.primes), "agree": self.agree}


def aut0_dimension_report(alg: HTypeAlgebra, mode: str = "modular", seed: Optional[int] = None) -> DimensionReport:
    n2 = alg.dim_module ** 2
    rows = list(aut0_rows(alg))
    if mode == "graph":
        return DimensionReport(signed_graph_nullity(rows, n2), mode, n2)
    if mode == "exact":
        return DimensionReport(n2 - rank_rational(rows), mode, n2)
    if mode == "modular":
        primes = tuple(choose_primes(2, seed))
        dims = [n2 - rank_mod_p(rows, p) for p in primes]
        return DimensionReport(dims[0], mode, n2, primes, dims[0] == dims[1])
    raise AlgebraError(f"unknown mode {mode!r}")


def aut0_lie_dimension(alg: HTypeAlgebra, mode: str = "modular", seed: Optional[int] = None) -> int:
    rep = aut0_dimension_report(alg, mode, seed)
    if not rep.agree:
        # two primes disagree: fall back to exact arithmetic
        return aut0_dimension_report(alg, "exact").dimension
    return rep.dimension


def aut0_basis(alg: HTypeAlgebra) -> List[Dict[Tuple[int, int], int]]:
    """Basis of the linearised solution space, one sparse +-1 matrix per balanced component."""
    n = alg.dim_module
    return [{(i // n, i % n): v for i, v in vec.items()}
            for vec in signed_graph_basis(aut0_rows(alg), n * n)]


def basis_matrix(entries: Dict[Tuple[int, int], int], n: int) -> np.ndarray:
    m = np.zeros((n, n), dtype=np.int64)
    for (i, j), v in entries.items():
        m[i, j] = v
    return m


def random_lie_element(alg: HTypeAlgebra, rng: random.Random, span: int = 3) -> np.ndarray:
    n = alg.dim_module
    out = np.zeros((n, n), dtype=np.int64)
    for b in aut0_basis(alg):
        out += rng.randint(-span, span) * basis_matrix(b, n)
    return out


def in_lie_algebra(alg: HTypeAlgebra, a) -> bool:
    a = np.asarray(a)
    return all(not np.any(a.T @ M + M @ a) for M in alg.metric_forms())


def cayley(a) -> np.ndarray:
    """(I - a/2)^{-1} (I + a/2): a group element for every quadratic Lie algebra element."""
    a = object_array(a)
    n = a.shape[0]
    eye = object_array(np.eye(n, dtype=np.int64))
    half = Fraction(1, 2)
    try:
        inv = object_array(frac_inverse((eye - a * half).tolist()))
    except ZeroDivisionError:
        raise AlgebraError("I - a/2 is singular; Cayley transform undefined") from None
    return inv @ (eye + a * half)


def in_group(alg: HTypeAlgebra, A) -> bool:
    A = object_array(A)
    return all(not np.any(A.T @ object_array(M) @ A - object_array(M)) for M in alg.metric_forms())


# relations implied by membership ------------------------------------------------------

def commuting_relations_check(alg: HTypeAlgebra, A, max_four: Optional[int] = 200) -> Dict[str, bool]:
    """Consequences of A^tau J_z A = J_z, plus the one-index converse.

    A group element commutes with products of two and four generators and
    satisfies A^tau (J_j J_k J_l) A = J_j J_k J_l.  The converse check uses
    k0 = 1: A^tau J_1 A = J_1 and A J_1 J_l = J_1 J_l A for all l.
    """
    rep = alg.rep
    m = rep.signature.n
    # clear denominators: A = M / d, so the quadratic relations pick up d^2
    M, d = _integer_scaled(A)
    eta = rep.eta_matrix().astype(M.dtype)
    At = eta @ M.T @ eta  # eta-adjoint (eta is its own inverse)
    J = [rep.J(k).astype(M.dtype) for k in range(1, m + 1)]
    d2 = d * d

    def prod(word, scale=1):
        out = np.eye(rep.dim, dtype=M.dtype) * scale
        for k in word:
            out = out @ J[k - 1]
        return out

    def same(x, y):
        return not np.any(x - y)

    member = all(same(At @ Jk @ M, Jk * d2) for Jk in J)
    two = all(same(M @ prod(w), prod(w) @ M) for w in itertools.combinations(range(1, m + 1), 2))
    fours = list(itertools.combinations(range(1, m + 1), 4))
    if max_four is not None:
        fours = fours[:max_four]
    four = all(same(M @ prod(w), prod(w) @ M) for w in fours)
    three = all(same(At @ prod(w) @ M, prod(w, d2)) for w in itertools.combinations(range(1, m + 1), 3))
    converse = same(At @ J[0] @ M, J[0] * d2) and all(same(M @ prod((1, l)), prod((1, l)) @ M)
                                                     for l in range(1, m + 1))
    return {
        "isomorphism_relation": member,
        "commutes_with_pairs": two,
        "commutes_with_quadruples": four,
        "triple_relation": three,
        "one_index_criterion": converse,
    }


def _integer_scaled(A) -> Tuple[np.ndarray, int]:
    """Integer M and d > 0 with A = M / d; int64 when the products cannot overflow."""
    rows = [[Fraction(x) for x in row] for row in object_array(A).tolist()]
    d = 1
    for row in rows:
        for x in row:
            d = d * x.denominator // gcd(d, x.denominator)
    M = np.array([[int(x * d) for x in row] for row in rows], dtype=object)
    n = M.shape[0]
    bound = max([abs(int(x)) for x in M.flat] + [d])
    if bound * bound * n * n < 2 ** 62:
        return M.astype(np.int64), d
    return M, d


# extension from E* ------------------------------------------------------------------------

def _estar_products(sys, max_len: int = 4) -> List[Tuple[int, ...]]:
    """Generator words (sorted blades) that commute with every reduced involution."""
    from .involutions import commutation_signs

    n = sys.signature.n
    out = []
    for k in range(1, max_len + 1):
        for w in itertools.combinations(range(1, n + 1), k):
            if all(x == 1 for x in commutation_signs(w, sys.reduced_set)):
                out.append(w)
    return out


def _restrict(B: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Matrix of W on span(B) in B-coordinates (B has orthogonal columns)."""
    Bo = object_array(B)
    g = Bo.T @ Bo
    ginv = object_array(np.diag([Fraction(1) / g[i, i] for i in range(g.shape[0])]))
    w = ginv @ Bo.T @ object_array(W) @ Bo
    if np.any(Bo @ w - object_array(W) @ Bo):
        raise AlgebraError("operator does not preserve E*")
    return w


def restrict_to_estar(sys, a) -> np.ndarray:
    return _restrict(sys.E_star_basis, np.asarray(a, dtype=object))


def _estar_gram(sys, rep: Representation) -> np.ndarray:
    B = object_array(sys.E_star_basis)
    return B.T @ object_array(rep.eta_matrix()) @ B


def _tau(x: np.ndarray, g: np.ndarray) -> np.ndarray:
    """eta-adjoint in E* coordinates: g^{-1} x^T g with g diagonal."""
    ginv = object_array(np.diag([Fraction(1) / g[i, i] for i in range(g.shape[0])]))
    return ginv @ x.T @ g


def estar_violations(sys, rep: Representation, a1, linearized: bool = False) -> List[str]:
    """Relations on E* that a1 must satisfy before it can be extended."""
    a1 = object_array(a1)
    g = _estar_gram(sys, rep)
    out = []
    if not linearized:
        inv_tau = _tau(object_array(frac_inverse(a1.tolist())), g)
    for w in _estar_products(sys):
        W = _restrict(sys.E_star_basis, rep.product(w))
        if len(w) % 2:
            if linearized:
                ok = not np.any(a1 @ W + W @ _tau(a1, g))
            else:
                ok = not np.any(a1 @ W - W @ inv_tau)
        else:
            ok = not np.any(a1 @ W - W @ a1)
        if not ok:
            out.append("J" + "J".join(str(k) for k in w))
    return out


def extend_from_Estar(sys, rep: Representation, a1, linearized: bool = False, check: bool = True) -> np.ndarray:
    """Assemble A = sum of A_I from its block on E*.

    a1 is given in the coordinates of ``sys.E_star_basis``.  Odd transfers
    carry (a1^{-1})^tau (or -a1^tau when linearized), even ones carry a1.
    """
    a1 = object_array(a1)
    k = sys.E_star_basis.shape[1]
    if a1.shape != (k, k):
        raise AlgebraError(f"a1 must be {k}x{k}")
    if not linearized:
        try:
            a1_inv = object_array(frac_inverse(a1.tolist()))
        except ZeroDivisionError:
            raise AlgebraError("a1 is singular") from None
    if check:
        bad = estar_violations(sys, rep, a1, linearized)
        if bad:
            raise AlgebraError("a1 violates the E* relations for " + ", ".join(bad))
    g = _estar_gram(sys, rep)
    B = object_array(sys.E_star_basis)
    if linearized:
        odd_block = -_tau(a1, g)
    else:
        odd_block = _tau(a1_inv, g)
    S_cols, R_cols = [], []
    for cell in sorted(sys.transfers):
        word = sys.transfers[cell]
        G = object_array(rep.product(word))
        S = G @ B
        X = odd_block if len(word) % 2 else a1
        S_cols.append(S)
        R_cols.append(S @ X)
    S = np.concatenate(S_cols, axis=1)
    R = np.concatenate(R_cols, axis=1)
    if S.shape[1] != rep.dim:
        raise AlgebraError("cells do not tile the module")
    eta = object_array(rep.eta_matrix())
    D = S.T @ eta @ S
    if np.any(D - np.diag(np.diag(D))):
        raise AlgebraError("cell bases are not orthogonal")
    Dinv = object_array(np.diag([Fraction(1) / D[i, i] for i in range(D.shape[0])]))
    return R @ Dinv @ S.T @ eta


def as_int_if_integral(m) -> np.ndarray:
    m = np.asarray(m, dtype=object)
    if all(Fraction(x).denominator == 1 for x in m.flat):
        return np.array([[int(x) for x in row] for row in m.tolist()], dtype=np.int64)
    return m
