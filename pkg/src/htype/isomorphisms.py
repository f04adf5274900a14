"""An explicit isomorphism n_{1,7}(U) -> n_{7,1}(V+ + V-).

Both sides use the "classical" index order: on R^{1,7} the generators
z_1..z_7 are negative and z_8 is positive, on R^{7,1} the generators
w_1..w_7 are positive and w_8 is negative.  The centre map is C(z_k) = w_k.

On the level of the common eigenspaces the module map A is a complex
2x2 matrix (complex structures I = J1 J2 J7 J8 and its tilde version),
with A y_1 = conj(l1) x_1 + conj(l2) x_3 and A y_3 = conj(m1) x_1 + conj(m2) x_3.
Any choice of (l1, l2, m1, m2) solving

    -|l1|^2 + |l2|^2 = 0,  -|m1|^2 + |m2|^2 = 0,  -l1 conj(m1) + l2 conj(m2) = 1

extends uniquely to an isomorphism.  The default is l1 = -1/2, l2 = 1/2,
m1 = m2 = 1.  The extension is found by solving the linear intertwining
A J_k J_l = -Jt_k Jt_l A with the eigenspace values fixed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .algebra import AutCandidate, HTypeAlgebra, automorphism_residual, build_htype
from .clifford import Signature
from .involutions import joint_eigenspace
from .linalg import nullspace_rational, object_array, signed_graph_basis
from .representations import Representation, direct_sum_of, induced_module

# involution blades in classical index order; the triple is kept only on (7,1)
FANO_COMPLEMENTS = ((2, 5, 6, 7), (2, 3, 4, 7), (1, 4, 6, 7))
TRIPLE = (1, 2, 7)
DEFAULT_PARAMS = {"l1": Fraction(-1, 2), "l2": Fraction(1, 2), "m1": Fraction(1), "m2": Fraction(1)}

Gaussian = Tuple[Fraction, Fraction]  # re, im


class IsomorphismError(RuntimeError):
    pass


def _to_std_17(k: int) -> int:
    """Classical index on R^{1,7} -> positives-first index."""
    return 1 if k == 8 else k + 1


@dataclass(eq=False)
class Iso1771:
    source: Representation  # U over R^{1,7}, standard order
    target: Representation  # V+ + V- over R^{7,1}
    A: np.ndarray  # object array of Fractions, target coords <- source coords
    C: np.ndarray  # centre map in standard coordinates
    params: Dict[str, Gaussian]
    report: Dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.report.values())

    def candidate(self) -> AutCandidate:
        return AutCandidate(self.A, self.C)

    def to_json(self) -> dict:
        return {
            "params": {k: [str(v[0]), str(v[1])] for k, v in self.params.items()},
            "C": self.C.tolist(),
            "report": self.report,
            "dim": int(self.A.shape[0]),
        }


def _classical_17() -> Tuple[Representation, List[np.ndarray]]:
    sig = Signature(1, 7)
    blades = [tuple(sorted(_to_std_17(k) for k in b)) for b in FANO_COMPLEMENTS]
    rep = induced_module(sig, blades)
    gens = [rep.J(_to_std_17(k)) for k in range(1, 9)]
    return rep, gens


def _classical_71() -> Tuple[Representation, List[np.ndarray]]:
    sig = Signature(7, 1)
    base = induced_module(sig, list(FANO_COMPLEMENTS) + [TRIPLE])
    E = joint_eigenspace([base.product(b) for b in base.involutions], base.dim)
    if E.shape[1] != 1:
        raise IsomorphismError("expected a one-dimensional eigenspace on (7,1)")
    if int(E[:, 0] @ base.eta_matrix() @ E[:, 0]) < 0:
        base = base.with_eta_flipped()
    rep = direct_sum_of([base, base.with_eta_flipped()])
    return rep, list(rep.generators)


def _prod(gens: Sequence[np.ndarray], word: Sequence[int]) -> np.ndarray:
    out = np.eye(gens[0].shape[0], dtype=np.int64)
    for k in word:
        out = out @ gens[k - 1]
    return out


def _gaussian_vector(re: Fraction, im: Fraction, base: np.ndarray, rotated: np.ndarray) -> np.ndarray:
    """(re + i im) applied to a vector, i acting through the complex structure."""
    return object_array(base) * re + object_array(rotated) * im


def _eigen_bases(src: List[np.ndarray], eta_s: np.ndarray, tgt: List[np.ndarray], eta_t: np.ndarray):
    n = src[0].shape[0]
    E17 = joint_eigenspace([_prod(src, b) for b in FANO_COMPLEMENTS], n)
    u = None
    for j in range(E17.shape[1]):
        c = E17[:, j]
        if int(c @ np.diag(eta_s) @ c) == 1:
            u = c
            break
    if u is None:
        raise IsomorphismError("no unit vector in the (1,7) eigenspace basis")
    I_s = _prod(src, (1, 2, 7, 8))
    y1 = u
    y3 = _prod(src, TRIPLE) @ u
    y = [y1, I_s @ y1, y3, I_s @ y3]

    m = tgt[0].shape[0]
    Et = joint_eigenspace([_prod(tgt, b) for b in FANO_COMPLEMENTS + (TRIPLE,)], m)
    norms = {int(Et[:, j] @ np.diag(eta_t) @ Et[:, j]): Et[:, j] for j in range(Et.shape[1])}
    if set(norms) != {1, -1}:
        raise IsomorphismError("target eigenspace is not spanned by v1, v2 of norms +1, -1")
    v1, v2 = norms[1], norms[-1]
    I_t = _prod(tgt, (1, 2, 7, 8))
    x1 = v1
    x3 = _prod(tgt, TRIPLE) @ v2
    x = [x1, I_t @ x1, x3, I_t @ x3]
    return y, x, I_s, I_t


def hermitian_forms(eta_s, src, y, eta_t, tgt, x) -> Tuple[np.ndarray, np.ndarray]:
    """Gram matrices of eta J_8 on the two eigenspace bases (real 4x4)."""
    Ms = np.diag(eta_s) @ src[7]
    Mt = np.diag(eta_t) @ tgt[7]
    Y = np.stack(y, axis=1)
    X = np.stack(x, axis=1)
    return Y.T @ Ms @ Y, X.T @ Mt @ X


def parameter_system(params: Dict[str, Gaussian]) -> Tuple[Fraction, Fraction, Gaussian]:
    """Left-hand sides of the three equations on (l1, l2, m1, m2)."""
    def norm2(z):
        return z[0] ** 2 + z[1] ** 2

    def mul_conj(a, b):  # a * conj(b)
        return (a[0] * b[0] + a[1] * b[1], a[1] * b[0] - a[0] * b[1])

    l1, l2, m1, m2 = (params[k] for k in ("l1", "l2", "m1", "m2"))
    e1 = -norm2(l1) + norm2(l2)
    e2 = -norm2(m1) + norm2(m2)
    a, b = mul_conj(l1, m1), mul_conj(l2, m2)
    e3 = (-a[0] + b[0], -a[1] + b[1])
    return e1, e2, e3


def _solve_extension(src, tgt, fixed: Sequence[Tuple[np.ndarray, np.ndarray]]) -> np.ndarray:
    """Unique A with A J_k J_l = -Jt_k Jt_l A and A y = t for the given pairs."""
    n = src[0].shape[0]
    rows: List[Dict[int, int]] = []
    for k in range(8):
        for l in range(k + 1, 8):
            X = src[k] @ src[l]
            Y = tgt[k] @ tgt[l]
            # (A X)[i, j] = A[i, a] X[a, j];  (Y A)[i, j] = Y[i, b] A[b, j]
            xa = np.argmax(X != 0, axis=0)
            yb = np.argmax(Y != 0, axis=1)
            for i in range(n):
                for j in range(n):
                    a, b = int(xa[j]), int(yb[i])
                    row: Dict[int, int] = {}
                    row[i * n + a] = row.get(i * n + a, 0) + int(X[a, j])
                    row[b * n + j] = row.get(b * n + j, 0) + int(Y[i, b])
                    row = {c: v for c, v in row.items() if v}
                    if row:
                        rows.append(row)
    basis = signed_graph_basis(rows, n * n)
    if not basis:
        raise IsomorphismError("no intertwiners")
    mats = []
    for vec in basis:
        B = np.zeros((n, n), dtype=np.int64)
        for idx, v in vec.items():
            B[idx // n, idx % n] = v
        mats.append(B)
    # coefficients c with sum c_i B_i y = t, written as a homogeneous system in (c, 1)
    d = len(mats)
    lin: List[Dict[int, Fraction]] = []
    for yv, tv in fixed:
        images = [B @ yv for B in mats]
        for i in range(n):
            row = {c: Fraction(int(images[c][i])) for c in range(d) if images[c][i]}
            if tv[i]:
                row[d] = -Fraction(tv[i])
            if row:
                lin.append(row)
    null = nullspace_rational(lin, d + 1)
    sols = [v for v in null if v[d] != 0]
    if len(null) != 1 or not sols:
        raise IsomorphismError(f"extension is not unique ({len(null)} free directions)")
    v = sols[0]
    coeffs = [c / v[d] for c in v[:d]]
    A = object_array(np.zeros((n, n), dtype=np.int64))
    for c, B in zip(coeffs, mats):
        if c:
            A = A + object_array(B) * c
    return A


def _as_gaussian(z) -> Gaussian:
    if isinstance(z, tuple):
        return Fraction(z[0]), Fraction(z[1])
    return Fraction(z), Fraction(0)


def explicit_iso_17_71(params: Dict[str, object] = None) -> Iso1771:
    """Build and verify the isomorphism for the given (l1, l2, m1, m2).

    Parameters may be rationals or (re, im) pairs.  The returned report
    records the parameter equations, the eigenspace values, and the exact
    bracket residual C[u,v] - [Au,Av].
    """
    raw = dict(DEFAULT_PARAMS)
    raw.update(params or {})
    p = {k: _as_gaussian(raw[k]) for k in ("l1", "l2", "m1", "m2")}

    src_rep, src = _classical_17()
    tgt_rep, tgt = _classical_71()
    y, x, I_s, I_t = _eigen_bases(src, src_rep.eta, tgt, tgt_rep.eta)

    def conj(z):
        return z[0], -z[1]

    # A y1 = conj(l1) x1 + conj(l2) x3, A y3 = conj(m1) x1 + conj(m2) x3
    def image(a, b):
        a, b = conj(a), conj(b)
        return _gaussian_vector(a[0], a[1], x[0], x[1]) + _gaussian_vector(b[0], b[1], x[2], x[3])

    t1 = image(p["l1"], p["l2"])
    t3 = image(p["m1"], p["m2"])
    e1, e2, e3 = parameter_system(p)
    report = {"parameter_system": e1 == 0 and e2 == 0 and e3 == (1, 0)}
    try:
        A = _solve_extension(src, tgt, [(y[0], t1), (y[2], t3)])
    except IsomorphismError:
        report["extension_unique"] = False
        C = _centre_map()
        return Iso1771(src_rep, tgt_rep, object_array(np.zeros((src_rep.dim,) * 2, dtype=np.int64)),
                       C, p, report)
    report["extension_unique"] = True
    report["complex_linear"] = not np.any(A @ object_array(I_s) - object_array(I_t) @ A)
    C = _centre_map()
    report["residual_zero"] = bracket_residual_zero(src_rep, tgt_rep, A, C)
    return Iso1771(src_rep, tgt_rep, A, C, p, report)


def _centre_map() -> np.ndarray:
    """C(z_k) = w_k in standard coordinates; columns are images of source basis vectors."""
    C = np.zeros((8, 8), dtype=np.int64)
    for k in range(1, 9):
        C[k - 1, _to_std_17(k) - 1] = 1
    return C


def bracket_residual_zero(src: Representation, tgt: Representation, A, C) -> bool:
    """[Au, Av]_V = C [u, v]_U for all u, v.

    Written out, A^T Ct_l A = sum_k C[l, k] C_k where Ct are the target
    structure matrices; this is the automorphism residual with the target
    structure on the left.
    """
    a_src, a_tgt = build_htype(src), build_htype(tgt)
    A, C = object_array(A), object_array(C)
    S = [object_array(c) for c in a_src.structure]
    T = [object_array(c) for c in a_tgt.structure]
    for l in range(8):
        rhs = sum((C[l, k] * S[k] for k in range(8)), np.zeros_like(S[0]))
        if np.any(A.T @ T[l] @ A - rhs):
            return False
    return True


def is_isomorphism(alg_src: HTypeAlgebra, alg_tgt: HTypeAlgebra, A, C) -> bool:
    A = object_array(A)
    n = alg_src.dim_module
    if A.shape != (alg_tgt.dim_module, n):
        return False
    from .linalg import rank_rational
    rows = [{j: A[i, j] for j in range(n) if A[i, j]} for i in range(A.shape[0])]
    if rank_rational(rows) != n:
        return False
    return bracket_residual_zero(alg_src.rep, alg_tgt.rep, A, C)


__all__ = ["Iso1771", "IsomorphismError", "explicit_iso_17_71", "parameter_system", "is_isomorphism",
           "DEFAULT_PARAMS", "automorphism_residual"]
