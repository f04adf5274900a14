"""Blade-level combinatorics of commuting involution systems.

Everything here depends only on the signature: which generator products
are symmetric positive involutions, when two of them commute, and how to
find a maximal independent commuting family.  The module-level checks
live in :mod:`htype.involutions`.
"""

from __future__ import annotations

import itertools
import json
from functools import lru_cache
from importlib import resources
from typing import Dict, List, Optional, Sequence, Tuple

from .clifford import Blade, Signature, blade_product, blades_commute, negative_count

TYPE_TAGS = {(4, 0): 1, (4, 4): 2, (4, 2): 3, (3, 0): 4, (3, 2): 5}


def blade_mask(b: Sequence[int]) -> int:
    m = 0
    for i in b:
        m |= 1 << (i - 1)
    return m


def mask_blade(m: int) -> Blade:
    return tuple(i + 1 for i in range(m.bit_length()) if m >> i & 1)


def involution_type(sig: Signature, blade: Sequence[int]) -> Optional[int]:
    """Type (1)..(5) of the product J_blade, or None if it is not one."""
    return TYPE_TAGS.get((len(blade), negative_count(sig, blade)))


def candidate_blades(sig: Signature) -> List[Tuple[Blade, int]]:
    """All index sets of types (1)-(5): quadruples first, then triples."""
    out = []
    for k in (4, 3):
        for b in itertools.combinations(range(1, sig.n + 1), k):
            t = involution_type(sig, b)
            if t is not None:
                out.append((b, t))
    return out


class GF2Span:
    """Incremental GF(2) row space of bitmasks, reduced echelon form.

    Each basis row remembers which original members were combined into it.
    """

    def __init__(self) -> None:
        self.rows: Dict[int, Tuple[int, int]] = {}  # pivot bit -> (mask, combo)

    def copy(self) -> "GF2Span":
        c = GF2Span()
        c.rows = dict(self.rows)
        return c

    def reduce(self, mask: int) -> Tuple[int, int]:
        combo = 0
        for piv, (row, rc) in self.rows.items():
            if mask >> piv & 1:
                mask ^= row
                combo ^= rc
        return mask, combo

    def add(self, mask: int, member: int) -> bool:
        red, combo = self.reduce(mask)
        if red == 0:
            return False
        combo ^= 1 << member
        piv = red.bit_length() - 1
        for p, (row, rc) in list(self.rows.items()):
            if row >> piv & 1:
                self.rows[p] = (row ^ red, rc ^ combo)
        self.rows[piv] = (red, combo)
        return True

    def __len__(self) -> int:
        return len(self.rows)


def is_independent(blades: Sequence[Sequence[int]]) -> bool:
    span = GF2Span()
    return all(span.add(blade_mask(b), i) for i, b in enumerate(blades))


def pairwise_commuting(blades: Sequence[Sequence[int]]) -> bool:
    return all(blades_commute(a, b) for a, b in itertools.combinations(blades, 2))


def is_valid_system(sig: Signature, blades: Sequence[Sequence[int]]) -> bool:
    odd = [b for b in blades if len(b) == 3]
    if len(odd) > 1 or (odd and len(blades[-1]) != 3):
        return False
    return (all(involution_type(sig, b) is not None for b in blades)
            and pairwise_commuting(blades) and is_independent(blades))


# dimension oracle ----------------------------------------------------------

def irreducible_dim(sig: Signature) -> int:
    """Real dimension of an irreducible Cl(r,s)-module, z^2 = -<z,z>.

    Uses the standard classification by (r - s) mod 8 and is independent
    of the involution machinery.
    """
    m, k = sig.n, (sig.r - sig.s) % 8
    if k in (0, 6):  # R(N)
        return 2 ** (m // 2)
    if k == 7:  # R(N) + R(N)
        return 2 ** ((m - 1) // 2)
    if k in (1, 5):  # C(N)
        return 2 * 2 ** ((m - 1) // 2)
    if k in (2, 4):  # H(N)
        return 4 * 2 ** ((m - 2) // 2)
    return 4 * 2 ** ((m - 3) // 2)  # H(N) + H(N)


def has_two_volume_variants(sig: Signature) -> bool:
    return (sig.r - sig.s) % 4 == 3 and sig.s % 2 == 0


def in_basic_region(r: int, s: int) -> bool:
    if (r, s) in ((8, 0), (0, 8), (4, 4)):
        return True
    if r + s < 1:
        return False
    return (0 <= r <= 7 and 0 <= s <= 3) or (0 <= r <= 3 and 4 <= s <= 7)


# search --------------------------------------------------------------------

def _search(sig: Signature, target: int, max_odd: int = 1) -> Optional[List[Blade]]:
    cands = candidate_blades(sig)
    even = [b for b, _ in cands if len(b) == 4]
    odd = [b for b, _ in cands if len(b) == 3]

    def finish(chosen: List[Blade], span: GF2Span) -> Optional[List[Blade]]:
        if len(chosen) == target:
            return list(chosen)
        if max_odd and len(chosen) == target - 1:
            for b in odd:
                if all(blades_commute(b, c) for c in chosen):
                    if span.copy().add(blade_mask(b), len(chosen)):
                        return chosen + [b]
        return None

    def dfs(start: int, chosen: List[Blade], span: GF2Span) -> Optional[List[Blade]]:
        got = finish(chosen, span)
        if got is not None:
            return got
        if len(chosen) >= target:
            return None
        pool = [b for b in even[start:] if all(blades_commute(b, c) for c in chosen)]
        need = target - len(chosen) - (1 if max_odd else 0)
        if len(pool) < need:
            return None
        for idx in range(start, len(even)):
            b = even[idx]
            if not all(blades_commute(b, c) for c in chosen):
                continue
            sp = span.copy()
            if not sp.add(blade_mask(b), len(chosen)):
                continue
            got = dfs(idx + 1, chosen + [b], sp)
            if got is not None:
                return got
        return None

    return dfs(0, [], GF2Span())


@lru_cache(maxsize=None)
def search_maximal_set(r: int, s: int) -> Tuple[Blade, ...]:
    """Largest commuting independent family, first in lexicographic order.

    The size is bounded by r+s - log2(irreducible dim); the search tries
    that bound and steps down until a family exists.
    """
    sig = Signature(r, s)
    bound = sig.n - (irreducible_dim(sig).bit_length() - 1)
    for target in range(max(bound, 0), -1, -1):
        got = _search(sig, target)
        if got is not None:
            return tuple(got)
    return ()


@lru_cache(maxsize=None)
def shipped_sets() -> Dict[Tuple[int, int], Tuple[Blade, ...]]:
    raw = json.loads(resources.files("htype.data").joinpath("involution_sets.json").read_text())
    out = {}
    for key, sets in raw["sets"].items():
        r, s = (int(x) for x in key.split(","))
        out[(r, s)] = tuple(tuple(b) for b in sets)
    return out


def involution_set(r: int, s: int, prefer_shipped: bool = True) -> Tuple[Blade, ...]:
    if prefer_shipped and (r, s) in shipped_sets():
        return shipped_sets()[(r, s)]
    return search_maximal_set(r, s)


def product_of_members(sig: Signature, blades: Sequence[Blade], combo: int) -> Tuple[int, Blade]:
    """sign, blade of the ordered product of the members selected by combo."""
    sign, acc = 1, ()
    for i, b in enumerate(blades):
        if combo >> i & 1:
            s, acc = blade_product(sig, acc, b)
            sign *= s
    return sign, acc
