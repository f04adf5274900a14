"""Automorphisms of n_{r,s}(U) coming from the Pin group.

A Pin element phi = v_1...v_n acts on U by J_phi = J_{v_1}...J_{v_n} and on
the centre by (-1)^n N(phi) Ad~_phi.  The pair is an automorphism; this
module builds it, finds the elements acting trivially on the centre, and
factors a given isometry of R^{r,s} into reflections.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .algebra import AutCandidate, HTypeAlgebra, build_htype, verify_automorphism
from .clifford import (CliffordError, PinElement, Signature, blades_commute, negative_count,
                       twisted_adjoint_matrix)
from .linalg import object_array
from .pisets import has_two_volume_variants
from .representations import Representation


class PinError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PinAutomorphism:
    phi: PinElement
    A_part: np.ndarray  # J_phi, object array of Fractions
    C_part: np.ndarray  # (-1)^n sign(N(phi)) Ad~_phi

    @property
    def scale_sq(self) -> Fraction:
        return self.phi.scale_sq

    def candidate(self) -> AutCandidate:
        """(A, C) pair satisfying C[u,v] = [Au,Av] exactly.

        With non-unit factors J_phi is sqrt(scale_sq) times the normalised
        map, so the centre part is rescaled to match.
        """
        return AutCandidate(self.A_part, self.C_part * self.scale_sq)

    def to_json(self) -> dict:
        return {
            "factors": [[str(x) for x in v] for v in self.phi.factors],
            "scale_sq": str(self.scale_sq),
            "C": [[str(x) for x in row] for row in self.C_part.tolist()],
        }


def vector_action(rep: Representation, v: Sequence) -> np.ndarray:
    out = object_array(np.zeros((rep.dim, rep.dim), dtype=np.int64))
    for i, c in enumerate(v, start=1):
        c = Fraction(c)
        if c:
            out = out + object_array(rep.J(i)) * c
    return out


def j_phi(rep: Representation, phi: PinElement) -> np.ndarray:
    out = object_array(np.eye(rep.dim, dtype=np.int64))
    for v in phi.factors:
        out = out @ vector_action(rep, v)
    return out


def center_action(phi: PinElement) -> np.ndarray:
    sign = (-1) ** len(phi) * phi.norm_sign()
    return object_array(twisted_adjoint_matrix(phi)) * sign


def p_map(rep: Representation, phi: PinElement) -> PinAutomorphism:
    if phi.signature != rep.signature:
        raise PinError(f"Pin element over {phi.signature}, module over {rep.signature}")
    return PinAutomorphism(phi, j_phi(rep, phi), center_action(phi))


def compose(a: PinAutomorphism, b: PinAutomorphism) -> Tuple[np.ndarray, np.ndarray]:
    return a.A_part @ b.A_part, a.C_part @ b.C_part


def is_automorphism(alg: HTypeAlgebra, pa: PinAutomorphism) -> bool:
    return verify_automorphism(alg, pa.candidate())


def form_adjoint(sig: Signature, C: np.ndarray) -> np.ndarray:
    """Adjoint with respect to <.,.>_{r,s}: D C^T D."""
    D = object_array(np.diag([sig.q(i) for i in range(1, sig.n + 1)]))
    return D @ object_array(C).T @ D


# kernel of the projection to O(r,s) -------------------------------------------------

def _is_identity(m: np.ndarray) -> bool:
    return not np.any(m - object_array(np.eye(m.shape[0], dtype=np.int64)))


def _dedup(mats: List[np.ndarray]) -> List[np.ndarray]:
    out: List[np.ndarray] = []
    for m in mats:
        if not any(not np.any(m - x) for x in out):
            out.append(m)
    return out


def blade_center_signs(sig: Signature, w: Sequence[int]) -> List[int]:
    """Diagonal of center_action for the basis blade w, without Fraction arithmetic.

    e_k picks up (-1)^|w| from alpha, -1 if it anticommutes with w, and the
    norm sign (-1)^(number of positive factors).
    """
    base = (-1) ** (len(w) + len(w) - negative_count(sig, w))
    return [base * (1 if blades_commute(w, (k,)) else -1) for k in range(1, sig.n + 1)]


def kernel_intersection(rep: Representation, blade_scan: bool = True, max_scan_gens: int = 12) -> List[np.ndarray]:
    """Distinct module maps +-J_phi with phi in Pin(r,s) acting as Id on the centre.

    Candidates are +-1 and +-Omega; optionally every basis blade is tried
    as a cross-check (each blade is a Pin element).
    """
    sig = rep.signature
    n = sig.n
    words = [(), tuple(range(1, n + 1))]
    if blade_scan and n <= max_scan_gens:
        words = [w for k in range(n + 1) for w in itertools.combinations(range(1, n + 1), k)]
    found = []
    for w in words:
        if all(x == 1 for x in blade_center_signs(sig, w)):
            # basis blades act by integer signed permutations
            J = rep.product(w)
            found.extend([J, -J])
    return _dedup(found)


def kernel_order(rep: Representation) -> int:
    return len(kernel_intersection(rep))


def predicted_kernel_order(r: int, s: int, isotypic: bool = True) -> Tuple[int, str]:
    """Order of Aut^0 meet P(Pin) as stated by the case split (1a)-(2c)."""
    if r % 2 == 0:
        return 2, "1a"
    if r % 4 == 1:
        return (2, "1b") if s % 4 in (1, 2) else (4, "2a")
    if s % 4 in (1, 2):
        return 4, "2b"
    return (2, "1c") if isotypic else (4, "2c")


def structural_kernel_order(rep: Representation) -> int:
    """2 when r is even or J_Omega = +-Id, else 4.

    For odd r the volume element acts trivially on the centre, so the
    kernel is {+-Id, +-J_Omega}; it collapses to {+-Id} exactly when
    J_Omega is scalar.
    """
    from .representations import volume_action

    if rep.r % 2 == 0:
        return 2
    return 2 if volume_action(rep) in ("PlusId", "MinusId") else 4


# surjectivity ---------------------------------------------------------------------------

def _rational_sqrt(x: Fraction) -> Optional[Fraction]:
    x = abs(Fraction(x))
    a, b = isqrt(x.numerator), isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


def _maybe_normalize(sig: Signature, v: Tuple[Fraction, ...]) -> Tuple[Fraction, ...]:
    root = _rational_sqrt(sig.form(v, v))
    if root is None:
        return v
    return tuple(x / root for x in v)


def is_isometry(sig: Signature, C) -> bool:
    C = object_array(C)
    if C.shape != (sig.n, sig.n):
        return False
    D = object_array(np.diag([sig.q(i) for i in range(1, sig.n + 1)]))
    return not np.any(C.T @ D @ C - D)


def surjectivity_witness(sig: Signature, C) -> PinElement:
    """phi with Ad~_phi = C, by peeling off one basis vector at a time.

    Step i maps the image of e_i back to e_i with the reflection in
    w - e_i, or, when that vector is null, in w + e_i followed by e_i.
    Factors whose norm is a rational square are normalised; the others
    stay unnormalised (Ad~ does not see the scale).
    """
    C = object_array(C)
    if not is_isometry(sig, C):
        raise PinError("C does not preserve the form of signature " + str(sig))
    n = sig.n
    M = C.copy()
    found: List[Tuple[Fraction, ...]] = []

    def reflect_matrix(v):
        qv = sig.form(v, v)
        R = object_array(np.eye(n, dtype=np.int64))
        for j in range(n):
            e = [Fraction(0)] * n
            e[j] = Fraction(1)
            c = 2 * sig.form(e, v) / qv
            for i in range(n):
                R[i, j] = e[i] - c * v[i]
        return R

    for i in range(n):
        w = tuple(Fraction(x) for x in M[:, i])
        e = tuple(Fraction(int(j == i)) for j in range(n))
        if w == e:
            continue
        v = tuple(a - b for a, b in zip(w, e))
        if sig.form(v, v) != 0:
            steps = [v]
        else:
            steps = [tuple(a + b for a, b in zip(w, e)), e]
        for u in steps:
            u = _maybe_normalize(sig, u)
            M = reflect_matrix(u) @ M
            found.append(u)
    if not _is_identity(M):
        raise PinError("reflection reduction did not terminate at the identity")
    try:
        phi = PinElement(sig, tuple(found))
    except CliffordError as exc:
        raise PinError(str(exc)) from None
    if np.any(object_array(twisted_adjoint_matrix(phi)) - C):
        raise PinError("witness does not reproduce C")
    return phi


def lift(rep: Representation, C) -> PinAutomorphism:
    """Automorphism of n_{r,s}(U) whose centre part is +-C."""
    return p_map(rep, surjectivity_witness(rep.signature, C))


def signed_permutation_isometries(sig: Signature, limit: Optional[int] = None):
    """Signed permutations of R^{r,s} that keep positive and negative axes apart."""
    pos = list(range(sig.r))
    neg = list(range(sig.r, sig.n))
    count = 0
    for pp in itertools.permutations(pos):
        for pn in itertools.permutations(neg):
            perm = list(pp) + list(pn)
            for signs in itertools.product((1, -1), repeat=sig.n):
                C = np.zeros((sig.n, sig.n), dtype=np.int64)
                for j, (i, sg) in enumerate(zip(perm, signs)):
                    C[i, j] = sg
                yield C
                count += 1
                if limit is not None and count >= limit:
                    return


def predicted_isotypic_split(r: int, s: int) -> bool:
    """True when isotypic and non-isotypic modules are distinguished by the kernel."""
    return r % 4 == 3 and s % 4 in (0, 3)


__all__ = [
    "PinAutomorphism", "p_map", "kernel_intersection", "kernel_order", "predicted_kernel_order",
    "structural_kernel_order", "surjectivity_witness", "lift", "is_isometry", "form_adjoint",
    "signed_permutation_isometries", "has_two_volume_variants", "build_htype",
]
