"""Admissible Clifford modules as signed-permutation integer matrices.

Minimal modules in the basic region are built as modules induced from a
character of a maximal commuting involution system: the basis is indexed
by coset representatives of generator subsets, every generator acts as a
signed permutation, and the scalar product is diagonal with entry
prod_{i in K} <z_i,z_i> on the basis vector indexed by K.  Everything else
is reached through tensor periodicity and direct sums.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .clifford import Blade, Signature, blade_product
from .linalg import is_signed_permutation
from .pisets import (GF2Span, blade_mask, has_two_volume_variants, in_basic_region,
                     involution_set, mask_blade, product_of_members)

VARIANTS = ("unique", "plus", "minus")
EPLUS = ("posdef", "negdef", "neutral")
PERIODS = ((8, 0), (0, 8), (4, 4))


class RepresentationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Representation:
    signature: Signature
    generators: Tuple[np.ndarray, ...]
    eta: np.ndarray
    variant: str = "unique"
    eplus: str = "neutral"
    # generator index sets of the involution system the module was induced from
    involutions: Optional[Tuple[Blade, ...]] = None

    def __post_init__(self) -> None:
        gens = tuple(np.asarray(g, dtype=np.int64) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "eta", np.asarray(self.eta, dtype=np.int64))
        if len(gens) != self.signature.n:
            raise RepresentationError("generator count does not match signature")
        if self.variant not in VARIANTS or self.eplus not in EPLUS:
            raise RepresentationError("bad variant or eplus tag")

    @property
    def dim(self) -> int:
        return int(self.eta.shape[0])

    @property
    def r(self) -> int:
        return self.signature.r

    @property
    def s(self) -> int:
        return self.signature.s

    def J(self, i: int) -> np.ndarray:
        return self.generators[i - 1]

    def product(self, word: Sequence[int]) -> np.ndarray:
        out = np.eye(self.dim, dtype=np.int64)
        for i in word:
            out = out @ self.J(i)
        return out

    def eta_matrix(self) -> np.ndarray:
        return np.diag(self.eta)

    def with_eta_flipped(self) -> "Representation":
        flip = {"posdef": "negdef", "negdef": "posdef", "neutral": "neutral"}[self.eplus]
        return Representation(self.signature, self.generators, -self.eta, self.variant, flip, self.involutions)

    def with_generators_negated(self) -> "Representation":
        var = {"plus": "minus", "minus": "plus", "unique": "unique"}[self.variant]
        return Representation(self.signature, tuple(-g for g in self.generators), self.eta, var,
                              self.eplus, self.involutions)

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "s": self.s,
            "dim": self.dim,
            "eta": [int(x) for x in self.eta],
            "generators": [g.tolist() for g in self.generators],
            "variant": self.variant,
            "eplus": self.eplus,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, data: dict) -> "Representation":
        sig = Signature(int(data["r"]), int(data["s"]))
        rep = cls(sig, tuple(np.array(g, dtype=np.int64) for g in data["generators"]),
                  np.array(data["eta"], dtype=np.int64), data.get("variant", "unique"),
                  data.get("eplus", "neutral"))
        if rep.dim != int(data["dim"]):
            raise RepresentationError("dim field disagrees with eta length")
        return rep


@dataclass(frozen=True)
class ModuleSpec:
    """p copies of the base minimal module and q copies of its companion.

    The companion is (J, -eta) with flip="metric" or (-J, eta) with
    flip="volume"; both give the same bracket on the direct sum.
    """

    signature: Signature
    p: int = 1
    q: int = 0
    flip: str = "metric"

    def __post_init__(self) -> None:
        if self.p < 0 or self.q < 0 or self.p + self.q < 1:
            raise RepresentationError(f"invalid multiplicities ({self.p},{self.q})")
        if self.flip not in ("metric", "volume"):
            raise RepresentationError(f"unknown flip {self.flip!r}")
        if self.q and not admits_two_flavors(self.signature):
            raise RepresentationError(f"{self.signature} has a single minimal-module flavor; q must be 0")


def eplus_expected(sig: Signature) -> str:
    """Sign-definite/neutral class of E from the residue rule; used as a label only."""
    r, s = sig.r % 4, sig.s % 4
    if r == 3 or s == 0:
        return "definite"
    return "neutral"


def admits_two_flavors(sig: Signature) -> bool:
    return has_two_volume_variants(sig) or eplus_expected(sig) == "definite"


# construction ---------------------------------------------------------------

def induced_module(sig: Signature, blades: Sequence[Blade]) -> Representation:
    """Module induced from the character P_i -> +1 of the involution system."""
    span = GF2Span()
    for i, b in enumerate(blades):
        if not span.add(blade_mask(b), i):
            raise RepresentationError(f"involution set {blades} is not independent")
    m = sig.n
    pivots = set(span.rows)
    reps = [mask for mask in range(1 << m) if not any(mask >> p & 1 for p in pivots)]

    def eps(mask: int) -> int:
        return -1 if sum(1 for i in mask_blade(mask) if i > sig.r) % 2 else 1

    reps.sort(key=lambda k: (eps(k) < 0, bin(k).count("1"), mask_blade(k)))
    index = {k: j for j, k in enumerate(reps)}
    n = len(reps)
    gens = []
    for i in range(1, m + 1):
        mat = np.zeros((n, n), dtype=np.int64)
        for col, K in enumerate(reps):
            s1, kb = blade_product(sig, (i,), mask_blade(K))
            R, combo = span.reduce(blade_mask(kb))
            T = blade_mask(kb) ^ R
            s2, check = blade_product(sig, mask_blade(R), mask_blade(T))
            assert check == kb
            s3, tb = product_of_members(sig, blades, _original_combo(span, blades, T))
            assert tb == mask_blade(T)
            mat[index[R], col] = s1 * s2 * s3
        gens.append(mat)
    eta = np.array([eps(K) for K in reps], dtype=np.int64)
    return Representation(sig, tuple(gens), eta, "unique", "neutral", tuple(tuple(b) for b in blades))


def _original_combo(span: GF2Span, blades: Sequence[Blade], T: int) -> int:
    """Which original members XOR to T (T must lie in the span)."""
    red, combo = span.reduce(T)
    if red:
        raise RepresentationError("mask outside the involution span")
    return combo


def volume_matrix(rep: Representation) -> np.ndarray:
    return rep.product(range(1, rep.signature.n + 1))


def volume_action(rep: Representation) -> str:
    vol = volume_matrix(rep)
    eye = np.eye(rep.dim, dtype=np.int64)
    if np.array_equal(vol, eye):
        return "PlusId"
    if np.array_equal(vol, -eye):
        return "MinusId"
    return "NotScalar"


def _tag_variant(rep: Representation) -> Representation:
    act = volume_action(rep)
    var = {"PlusId": "plus", "MinusId": "minus", "NotScalar": "unique"}[act]
    return Representation(rep.signature, rep.generators, rep.eta, var, rep.eplus, rep.involutions)


def _with_eplus(rep: Representation, eplus: str) -> Representation:
    return Representation(rep.signature, rep.generators, rep.eta, rep.variant, eplus, rep.involutions)


def reduce_to_basic(r: int, s: int) -> List[Tuple[int, int]]:
    """Periods to peel off (r,s) until it lands in the basic region."""
    periods = []
    while not in_basic_region(r, s):
        if s >= 8:
            mu, nu = 0, 8
        elif r >= 8:
            mu, nu = 8, 0
        elif r >= 4 and s >= 4:
            mu, nu = 4, 4
        else:
            raise RepresentationError(f"({r},{s}) is not reachable from the basic region")
        periods.append((mu, nu))
        r, s = r - mu, s - nu
    return periods


def _compute_eplus(rep: Representation) -> str:
    from .involutions import eplus_class

    return eplus_class(rep)


@lru_cache(maxsize=None)
def _minimal_plus(r: int, s: int, route: str) -> Representation:
    sig = Signature(r, s)
    if route == "induced" or (route == "auto" and in_basic_region(r, s)):
        rep = _tag_variant(induced_module(sig, involution_set(r, s, prefer_shipped=in_basic_region(r, s))))
    else:
        periods = reduce_to_basic(r, s)
        mu, nu = periods[0]
        base = _minimal_plus(r - mu, s - nu, "auto")
        rep = tensor_periodic(base, _minimal_plus(mu, nu, "auto"))
    # the period factor can flip the sign of the form on E, so recompute
    rep = _with_eplus(rep, _compute_eplus(rep))
    if rep.variant == "minus":
        rep = rep.with_generators_negated()
    if rep.eplus == "negdef":
        rep = rep.with_eta_flipped()
    return rep


def minimal_module(sig: Signature, variant: Optional[str] = None, route: str = "auto") -> Representation:
    """Minimal admissible module of Cl(r,s).

    variant is "plus"/"minus" (sign of J_Omega) where two inequivalent
    minimal modules exist; otherwise it must be None or "unique".
    route="induced" forces a direct construction outside the basic region.
    """
    if route not in ("auto", "induced"):
        raise RepresentationError(f"unknown route {route!r}")
    rep = _minimal_plus(sig.r, sig.s, route)
    if variant in (None, "plus", "unique"):
        if variant == "unique" and rep.variant != "unique":
            raise RepresentationError(f"{sig} has two variants; choose plus or minus")
        if variant == "plus" and rep.variant == "unique":
            raise RepresentationError(f"{sig} has a single minimal module (no volume variants)")
        return rep
    if variant == "minus":
        if rep.variant == "unique":
            raise RepresentationError(f"{sig} has a single minimal module (no volume variants)")
        return rep.with_generators_negated()
    raise RepresentationError(f"unknown variant {variant!r}")


def tensor_periodic(base: Representation, period: Representation) -> Representation:
    mu, nu = period.r, period.s
    if (mu, nu) not in PERIODS:
        raise RepresentationError(f"period must have signature in {PERIODS}, got ({mu},{nu})")
    vol = volume_matrix(period)
    nb, npd = base.dim, period.dim
    I_b, I_p = np.eye(nb, dtype=np.int64), np.eye(npd, dtype=np.int64)
    bpos = [np.kron(base.J(i), vol) for i in range(1, base.r + 1)]
    bneg = [np.kron(base.J(i), vol) for i in range(base.r + 1, base.signature.n + 1)]
    ppos = [np.kron(I_b, period.J(i)) for i in range(1, mu + 1)]
    pneg = [np.kron(I_b, period.J(i)) for i in range(mu + 1, mu + nu + 1)]
    gens = tuple(bpos + ppos + bneg + pneg)
    eta = np.kron(base.eta, period.eta)
    sig = Signature(base.r + mu, base.s + nu)
    rep = Representation(sig, gens, eta, "unique", base.eplus, _periodic_involutions(base, period))
    return _tag_variant(rep)


def _periodic_involutions(base: Representation, period: Representation) -> Optional[Tuple[Blade, ...]]:
    """Base and period involution sets, reindexed for the tensor generator order."""
    if base.involutions is None or period.involutions is None:
        return None
    r, mu, sb = base.r, period.r, base.s

    def bmap(i: int) -> int:
        return i if i <= r else i + mu

    def pmap(j: int) -> int:
        return r + j if j <= mu else r + sb + j

    even = [tuple(sorted(pmap(j) for j in b)) for b in period.involutions]
    mapped = [tuple(sorted(bmap(i) for i in b)) for b in base.involutions]
    # keep the odd member (if any) last
    return tuple([b for b in mapped if len(b) == 4] + even + [b for b in mapped if len(b) == 3])


def direct_sum_of(reps: Sequence[Representation]) -> Representation:
    sig = reps[0].signature
    if any(r.signature != sig for r in reps):
        raise RepresentationError("direct sum of different signatures")
    n = sum(r.dim for r in reps)
    gens = []
    for i in range(1, sig.n + 1):
        mat = np.zeros((n, n), dtype=np.int64)
        off = 0
        for r in reps:
            mat[off:off + r.dim, off:off + r.dim] = r.J(i)
            off += r.dim
        gens.append(mat)
    eta = np.concatenate([r.eta for r in reps])
    eplus = reps[0].eplus if all(r.eplus == reps[0].eplus for r in reps) else "neutral"
    return _tag_variant(Representation(sig, tuple(gens), eta, "unique", eplus, None))


def direct_sum(spec: ModuleSpec, base: Optional[Representation] = None) -> Representation:
    base = base if base is not None else minimal_module(spec.signature)
    if base.signature != spec.signature:
        raise RepresentationError("base module signature differs from spec")
    other = base.with_eta_flipped() if spec.flip == "metric" else base.with_generators_negated()
    return direct_sum_of([base] * spec.p + [other] * spec.q)


# verification ----------------------------------------------------------------

def verify_representation(rep: Representation) -> Dict[str, bool]:
    sig, n = rep.signature, rep.dim
    eye = np.eye(n, dtype=np.int64)
    eta = rep.eta_matrix()
    clifford = True
    for i in range(1, sig.n + 1):
        for j in range(i, sig.n + 1):
            lhs = rep.J(i) @ rep.J(j) + rep.J(j) @ rep.J(i)
            rhs = -2 * sig.q(i) * eye if i == j else 0 * eye
            if not np.array_equal(lhs, rhs):
                clifford = False
    skew = all(np.array_equal((eta @ g).T, -(eta @ g)) for g in rep.generators)
    square = all(np.array_equal((eta @ g) @ (eta @ g), -eye) for g in rep.generators)
    isometry = all(np.array_equal(g.T @ eta @ g, sig.q(i + 1) * eta) for i, g in enumerate(rep.generators))
    eta_ok = bool(np.all(np.abs(rep.eta) == 1))
    neutral = sig.s == 0 or int(np.sum(rep.eta)) == 0
    return {
        "clifford_relations": clifford,
        "admissible": skew and eta_ok,
        "eta_J_squared": square,
        "isometry_relation": isometry,
        "signed_permutation": integral_basis_check(rep),
        "neutral_if_s_positive": neutral,
    }


def integral_basis_check(rep: Representation) -> bool:
    return all(is_signed_permutation(g) for g in rep.generators)


def all_checks_pass(rep: Representation) -> bool:
    return all(verify_representation(rep).values())
