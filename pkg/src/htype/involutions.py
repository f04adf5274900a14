"""Commuting involution systems on a concrete module.

Given a :class:`~htype.representations.Representation`, this module turns
blade-level involution sets into matrices, checks them (involution,
symmetric, positive), computes the common 1-eigenspaces E and E*, the cell
decomposition V = sum of E^I, a transfer map G_I: E* -> E^I for each cell,
and the auxiliary structure operators that act on E*.

All involutions here are signed permutations, so joint eigenspaces have
bases of vectors with disjoint supports and everything stays integral.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .clifford import Blade, negative_count
from .linalg import is_signed_permutation
from .pisets import (candidate_blades, has_two_volume_variants, in_basic_region, involution_set,
                     involution_type, is_independent, pairwise_commuting)
from .representations import Representation

CellIndex = Tuple[int, ...]


class InvolutionError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class InvolutionCandidate:
    indices: Blade
    type_tag: int
    matrix: np.ndarray

    def to_json(self) -> dict:
        return {"indices": list(self.indices), "type": self.type_tag}


def candidate_report(rep: Representation, M: np.ndarray) -> Dict[str, bool]:
    """Involution / symmetric / positive checks for a module operator."""
    eye = np.eye(rep.dim, dtype=np.int64)
    eta = rep.eta_matrix()
    involution = np.array_equal(M @ M, eye)
    symmetric = np.array_equal(eta @ M, (eta @ M).T)
    positive = False
    if is_signed_permutation(M):
        # M e_k = +-e_j; positive means eta_j = eta_k for every k
        rows = np.argmax(M != 0, axis=0)
        positive = bool(np.all(rep.eta[rows] == rep.eta))
    return {"involution": involution, "symmetric": symmetric, "positive": positive}


def enumerate_candidates(rep: Representation) -> List[InvolutionCandidate]:
    out = []
    for blade, tag in candidate_blades(rep.signature):
        M = rep.product(blade)
        if all(candidate_report(rep, M).values()):
            out.append(InvolutionCandidate(blade, tag, M))
    return out


@dataclass(eq=False)
class InvolutionSystem:
    signature: object
    all_set: List[InvolutionCandidate]
    reduced_set: List[InvolutionCandidate]
    E_star_basis: Optional[np.ndarray] = None
    E_basis: Optional[np.ndarray] = None
    eplus: Optional[str] = None
    transfers: Dict[CellIndex, Tuple[int, ...]] = field(default_factory=dict)

    @property
    def p_rs(self) -> int:
        return len(self.all_set)

    def e_members(self) -> List[InvolutionCandidate]:
        """Members whose joint 1-eigenspace defines E."""
        if has_two_volume_variants(self.signature) and self.all_set and len(self.all_set[-1].indices) == 3:
            return self.all_set[:-1]
        return list(self.all_set)

    def to_json(self) -> dict:
        return {
            "r": self.signature.r,
            "s": self.signature.s,
            "p_rs": self.p_rs,
            "involutions": [c.to_json() for c in self.all_set],
            "reduced": [list(c.indices) for c in self.reduced_set],
            "E_star_basis": None if self.E_star_basis is None else self.E_star_basis.T.tolist(),
            "eplus": self.eplus,
            "transfers": [{"cell": list(k), "word": list(v)} for k, v in sorted(self.transfers.items())],
        }


def _member(rep: Representation, blade: Blade) -> InvolutionCandidate:
    tag = involution_type(rep.signature, blade)
    if tag is None:
        raise InvolutionError(f"{blade} is not an involution of types (1)-(5) for {rep.signature}")
    M = rep.product(blade)
    bad = [k for k, ok in candidate_report(rep, M).items() if not ok]
    if bad:
        raise InvolutionError(f"J{blade} fails: {', '.join(bad)}")
    return InvolutionCandidate(tuple(blade), tag, M)


def system_from_blades(rep: Representation, blades: Sequence[Blade], minimal: bool = True) -> InvolutionSystem:
    blades = [tuple(b) for b in blades]
    if not pairwise_commuting(blades):
        raise InvolutionError("involutions do not commute")
    if not is_independent(blades):
        raise InvolutionError("one involution is a product of others")
    odd = [i for i, b in enumerate(blades) if len(b) == 3]
    if len(odd) > 1 or (odd and odd[0] != len(blades) - 1):
        raise InvolutionError("at most one odd involution is allowed and it must be last")
    members = [_member(rep, b) for b in blades]
    if minimal and rep.dim != 2 ** (rep.signature.n - len(members)):
        raise InvolutionError(
            f"dim {rep.dim} != 2^({rep.signature.n}-{len(members)}); not a minimal module or not maximal")
    reduced = [c for c in members if c.type_tag in (1, 2, 3)]
    return InvolutionSystem(rep.signature, members, reduced)


def maximal_commuting_set(rep: Representation, blades: Optional[Sequence[Blade]] = None,
                          with_transfers: bool = True) -> InvolutionSystem:
    """PI_{r,s} on a minimal module, with E, E* and (optionally) the transfers filled in."""
    sig = rep.signature
    if blades is None:
        blades = rep.involutions
    if blades is None:
        blades = involution_set(sig.r, sig.s, prefer_shipped=in_basic_region(sig.r, sig.s))
    sys = system_from_blades(rep, blades)
    E_star, E, cls = common_eigenspace(sys, rep)
    sys.E_star_basis, sys.E_basis, sys.eplus = E_star, E, cls
    if with_transfers:
        sys.transfers = transfer_maps(sys, rep)
    return sys


# eigenspaces ------------------------------------------------------------------

def joint_eigenspace(mats: Sequence[np.ndarray], n: int, signs: Optional[Sequence[int]] = None) -> np.ndarray:
    """Columns spanning the joint eigenspace M_i v = signs_i v.

    For commuting signed permutations the columns of prod(I + s_i M_i)
    are either zero or supported on a single orbit, so deduplicating by
    support gives an orthogonal integral basis.
    """
    signs = list(signs) if signs is not None else [1] * len(mats)
    proj = np.eye(n, dtype=np.int64)
    for M, e in zip(mats, signs):
        proj = proj @ (np.eye(n, dtype=np.int64) + e * M)
    cols, seen = [], set()
    for j in range(n):
        c = proj[:, j]
        nz = np.flatnonzero(c)
        if nz.size == 0:
            continue
        key = tuple(nz.tolist())
        if key in seen:
            continue
        seen.add(key)
        c = c // np.gcd.reduce(np.abs(c[nz]))
        if c[nz[0]] < 0:
            c = -c
        cols.append(c)
    if not cols:
        return np.zeros((n, 0), dtype=np.int64)
    return np.stack(cols, axis=1)


def gram(rep: Representation, basis: np.ndarray) -> np.ndarray:
    return basis.T @ rep.eta_matrix() @ basis


def form_class(rep: Representation, basis: np.ndarray) -> str:
    g = gram(rep, basis)
    if basis.shape[1] == 0:
        raise InvolutionError("empty eigenspace")
    if np.count_nonzero(g - np.diag(np.diag(g))):
        raise InvolutionError("eigenspace basis is not orthogonal")
    d = np.diag(g)
    pos, neg = int(np.sum(d > 0)), int(np.sum(d < 0))
    if neg == 0:
        return "posdef"
    if pos == 0:
        return "negdef"
    if pos == neg:
        return "neutral"
    raise InvolutionError(f"eigenspace has signature ({pos},{neg})")


def common_eigenspace(sys: InvolutionSystem, rep: Representation) -> Tuple[np.ndarray, np.ndarray, str]:
    E_star = joint_eigenspace([c.matrix for c in sys.reduced_set], rep.dim)
    E = joint_eigenspace([c.matrix for c in sys.e_members()], rep.dim)
    return E_star, E, form_class(rep, E)


def eplus_class(rep: Representation) -> str:
    """posdef / negdef / neutral class of the scalar product on E."""
    return maximal_commuting_set(rep, with_transfers=False).eplus


# cells and transfers -------------------------------------------------------------

def commutation_signs(word: Sequence[int], members: Sequence[InvolutionCandidate]) -> CellIndex:
    """+1 where the generator word commutes with a member, -1 where it anticommutes."""
    out = []
    for c in members:
        k, shared = len(word), len(set(word) & set(c.indices))
        out.append(1 if (k * len(c.indices) - shared) % 2 == 0 else -1)
    return tuple(out)


def cells(sys: InvolutionSystem, rep: Representation) -> Dict[CellIndex, np.ndarray]:
    mats = [c.matrix for c in sys.reduced_set]
    out = {}
    for signs in itertools.product((1, -1), repeat=len(mats)):
        basis = joint_eigenspace(mats, rep.dim, signs)
        if basis.shape[1]:
            out[tuple(signs)] = basis
    return out


def transfer_maps(sys: InvolutionSystem, rep: Representation) -> Dict[CellIndex, Tuple[int, ...]]:
    """First word (identity, singles, then lexicographic pairs) reaching each cell."""
    n = sys.signature.n
    want = set(itertools.product((1, -1), repeat=len(sys.reduced_set)))
    out: Dict[CellIndex, Tuple[int, ...]] = {}
    words = [()] + [(i,) for i in range(1, n + 1)] + list(itertools.combinations(range(1, n + 1), 2))
    for w in words:
        cell = commutation_signs(w, sys.reduced_set)
        if cell not in out:
            out[cell] = tuple(w)
        if len(out) == len(want):
            break
    missing = want - set(out)
    if missing:
        raise InvolutionError(f"no single or double generator transfer for cells {sorted(missing)}")
    return out


def check_transfers(sys: InvolutionSystem, rep: Representation) -> bool:
    """Each G_I maps E* onto E^I, and the cells tile V orthogonally."""
    cs = cells(sys, rep)
    total = 0
    for cell, basis in cs.items():
        G = rep.product(sys.transfers[cell])
        image = G @ sys.E_star_basis
        if basis.shape[1] != sys.E_star_basis.shape[1]:
            return False
        # image must lie in the cell: P_l image = k_l image
        for c, k in zip(sys.reduced_set, cell):
            if not np.array_equal(c.matrix @ image, k * image):
                return False
        total += basis.shape[1]
    if total != rep.dim:
        return False
    eta = rep.eta_matrix()
    keys = list(cs)
    for a, b in itertools.combinations(keys, 2):
        if np.count_nonzero(cs[a].T @ eta @ cs[b]):
            return False
    return True


# structure operators --------------------------------------------------------------

@dataclass(frozen=True)
class StructureOperators:
    I: Optional[Blade] = None
    J: Optional[Blade] = None
    K: Optional[Tuple[int, Blade]] = None  # (sign, blade) with J_K = sign * J_I J_J
    Q: Optional[Blade] = None
    P: Optional[Blade] = None

    def to_json(self) -> dict:
        return {
            "I": list(self.I) if self.I else None,
            "J": list(self.J) if self.J else None,
            "K": None if self.K is None else {"sign": self.K[0], "blade": list(self.K[1])},
            "Q": list(self.Q) if self.Q else None,
            "P": list(self.P) if self.P else None,
        }


def _commutes_with_all(blade: Sequence[int], members: Sequence[InvolutionCandidate]) -> bool:
    return all(x == 1 for x in commutation_signs(blade, members))


def structure_operators(sys: InvolutionSystem, rep: Representation) -> StructureOperators:
    """Blade operators preserving E*: complex structure, quaternion triple, Q and P.

    Candidates are scanned in a fixed order (shorter blades first, then
    lexicographic), so the result is reproducible.
    """
    from .clifford import blade_product

    sig = sys.signature
    n = sig.n
    eye = np.eye(rep.dim, dtype=np.int64)
    red = sys.reduced_set
    E = sys.E_star_basis if sys.E_star_basis is not None else joint_eigenspace([c.matrix for c in red], rep.dim)
    member_blades = {c.indices for c in sys.all_set}

    def nontrivial_on_E(M: np.ndarray) -> bool:
        # not +-Id on E*
        img = M @ E
        return not (np.array_equal(img, E) or np.array_equal(img, -E))

    even = [b for k in (2, 4) for b in itertools.combinations(range(1, n + 1), k)
            if _commutes_with_all(b, red) and b not in member_blades]
    complex_ops = [b for b in even if np.array_equal(rep.product(b) @ rep.product(b), -eye)
                   and nontrivial_on_E(rep.product(b))]
    I = complex_ops[0] if complex_ops else None
    J = K = None
    if I is not None:
        MI = rep.product(I)
        anti = [b for b in complex_ops if np.array_equal(MI @ rep.product(b), -rep.product(b) @ MI)]
        anti.sort(key=lambda b: (I[0] in b, len(b), b))
        if anti:
            J = anti[0]
            K = blade_product(sig, I, J)
    Q = next((b for b in itertools.combinations(range(1, n + 1), 2)
              if negative_count(sig, b) == 1 and _commutes_with_all(b, red)), None)
    # the odd member of PI (types (4)/(5)) is the natural P; otherwise scan
    odd_members = [c.indices for c in sys.all_set if len(c.indices) % 2]
    if odd_members:
        P = odd_members[0]
    else:
        odd = [b for k in (1, 3) for b in itertools.combinations(range(1, n + 1), k)]
        P = next((b for b in odd if _commutes_with_all(b, red) and b not in member_blades), None)
    return StructureOperators(I, J, K, Q, P)
