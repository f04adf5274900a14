"""Classical groups, the Aut^0 table, and isomorphism predicates.

Table cells are stored as templates such as ``Sp(p,q)`` or
``O*(2p)xO*(2p)``; arguments are linear expressions in the module
multiplicities p and q.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Dict, List, Optional, Tuple

from .representations import admits_two_flavors, reduce_to_basic

FAMILIES = ("GL_R", "GL_H", "O_pq_R", "O_C", "O_star", "U_pq", "Sp_R", "Sp_C", "Sp_pq", "Product")


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class GroupSpec:
    family: str
    params: Tuple[int, ...] = ()
    factors: Tuple["GroupSpec", ...] = ()

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise CatalogError(f"unknown family {self.family!r}")
        if self.family == "Product" and not self.factors:
            raise CatalogError("empty product")
        if any(x < 0 for x in self.params):
            raise CatalogError(f"negative group parameter in {self.params}")

    def __str__(self) -> str:
        if self.family == "Product":
            return "x".join(str(f) for f in self.factors)
        a = self.params
        return {
            "GL_R": lambda: f"GL({a[0]},R)",
            "GL_H": lambda: f"GL({a[0]},H)",
            "O_pq_R": lambda: f"O({a[0]},{a[1]})",
            "O_C": lambda: f"O({a[0]},C)",
            "O_star": lambda: f"O*({a[0]})",
            "U_pq": lambda: f"U({a[0]},{a[1]})",
            "Sp_R": lambda: f"Sp({a[0]},R)",
            "Sp_C": lambda: f"Sp({a[0]},C)",
            "Sp_pq": lambda: f"Sp({a[0]},{a[1]})",
        }[self.family]()

    def to_json(self) -> dict:
        return {"group": str(self), "dimension": real_dimension(self)}


def real_dimension(g: GroupSpec) -> int:
    a = g.params
    f = g.family
    if f == "Product":
        return sum(real_dimension(x) for x in g.factors)
    if f == "GL_R":
        return a[0] ** 2
    if f == "GL_H":
        return 4 * a[0] ** 2
    if f == "O_pq_R":
        n = a[0] + a[1]
        return n * (n - 1) // 2
    if f == "O_C":
        return a[0] * (a[0] - 1)
    if f == "O_star":
        if a[0] % 2:
            raise CatalogError("O*(m) needs even m")
        n = a[0] // 2
        return n * (2 * n - 1)
    if f == "U_pq":
        return (a[0] + a[1]) ** 2
    if f == "Sp_R":
        if a[0] % 2:
            raise CatalogError("Sp(m,R) needs even m")
        n = a[0] // 2
        return n * (2 * n + 1)
    if f == "Sp_C":
        if a[0] % 2:
            raise CatalogError("Sp(m,C) needs even m")
        n = a[0] // 2
        return 2 * n * (2 * n + 1)
    if f == "Sp_pq":
        n = a[0] + a[1]
        return n * (2 * n + 1)
    raise CatalogError(f"no dimension formula for {f}")


# templates -------------------------------------------------------------------

_TERM = re.compile(r"^\s*(\d*)\s*([pq]?)\s*$")
_GROUP = re.compile(r"(GL|O\*|O|U|Sp)\(([^)]*)\)")


def _eval_arg(expr: str, p: int, q: int) -> int:
    m = _TERM.match(expr)
    if not m or (not m.group(1) and not m.group(2)):
        raise CatalogError(f"cannot read group argument {expr!r}")
    coef = int(m.group(1)) if m.group(1) else 1
    var = m.group(2)
    return coef * {"p": p, "q": q, "": 1}[var]


def parse_template(text: str, p: int, q: int) -> GroupSpec:
    parts = [t.strip() for t in text.split("x")]
    specs = []
    for part in parts:
        m = _GROUP.fullmatch(part)
        if not m:
            raise CatalogError(f"cannot parse group {part!r}")
        name, args = m.group(1), [a.strip() for a in m.group(2).split(",")]
        field = args[1] if len(args) == 2 and args[1] in ("R", "C", "H") else None
        if name == "GL":
            fam = {"R": "GL_R", "H": "GL_H"}[field or "R"]
            specs.append(GroupSpec(fam, (_eval_arg(args[0], p, q),)))
        elif name == "O*":
            specs.append(GroupSpec("O_star", (_eval_arg(args[0], p, q),)))
        elif name == "O":
            if field == "C":
                specs.append(GroupSpec("O_C", (_eval_arg(args[0], p, q),)))
            else:
                specs.append(GroupSpec("O_pq_R", (_eval_arg(args[0], p, q), _eval_arg(args[1], p, q))))
        elif name == "U":
            specs.append(GroupSpec("U_pq", (_eval_arg(args[0], p, q), _eval_arg(args[1], p, q))))
        elif name == "Sp":
            if field == "R":
                specs.append(GroupSpec("Sp_R", (_eval_arg(args[0], p, q),)))
            elif field == "C":
                specs.append(GroupSpec("Sp_C", (_eval_arg(args[0], p, q),)))
            else:
                specs.append(GroupSpec("Sp_pq", (_eval_arg(args[0], p, q), _eval_arg(args[1], p, q))))
    if len(specs) == 1:
        return specs[0]
    return GroupSpec("Product", (), tuple(specs))


@lru_cache(maxsize=None)
def table4() -> Dict[Tuple[int, int], Dict[str, str]]:
    raw = json.loads(resources.files("htype.data").joinpath("table4.json").read_text())
    out = {}
    for key, cell in raw["cells"].items():
        r, s = (int(x) for x in key.split(","))
        out[(r, s)] = {"printed": cell["printed"], "group": cell.get("group", cell["printed"])}
    return out


def filled_cells() -> List[Tuple[int, int]]:
    return sorted(table4(), key=lambda rs: (rs[1], rs[0]))


def table_cell(r: int, s: int) -> Tuple[int, int]:
    """The automorphism-table cell governing (r,s), after removing periods."""
    if r < 0 or s < 0 or r + s < 1:
        raise CatalogError(f"invalid signature ({r},{s})")
    try:
        periods = reduce_to_basic(r, s)
    except ValueError as exc:
        raise CatalogError(str(exc)) from None
    for mu, nu in periods:
        r, s = r - mu, s - nu
    if (r, s) not in table4():
        raise CatalogError(f"no automorphism-table entry for ({r},{s})")
    return r, s


def multiplicity_grid(r: int, s: int) -> List[Tuple[int, int]]:
    from .clifford import Signature

    if admits_two_flavors(Signature(r, s)):
        return [(1, 0), (2, 0), (1, 1)]
    return [(1, 0), (2, 0)]


def expected_group(r: int, s: int, p: int = 1, q: int = 0) -> GroupSpec:
    """Table entry for n_{r,s}(U), U = p copies of V_min plus q of its companion.

    Entries whose template has no q are read with p replaced by p+q.
    """
    from .clifford import Signature

    if p < 0 or q < 0 or p + q < 1:
        raise CatalogError(f"invalid multiplicities ({p},{q})")
    if q and not admits_two_flavors(Signature(r, s)):
        raise CatalogError(f"({r},{s}) has a single minimal module flavor; q must be 0")
    cell = table_cell(r, s)
    template = table4()[cell]["group"]
    if "q" not in template:
        p, q = p + q, 0
    return parse_template(template, p, q)


# classification ----------------------------------------------------------------------

VERDICTS = ("Isomorphic", "NotIsomorphic", "DimensionMismatch")


@dataclass(frozen=True)
class AlgebraSpec:
    """n_{r,s}(U) with U = p copies of V^{+}_min and q copies of V^{-}_min."""

    r: int
    s: int
    p: int = 1
    q: int = 0

    @property
    def multiplicity(self) -> int:
        return self.p + self.q

    def module_dim(self) -> int:
        return self.multiplicity * minimal_dim(self.r, self.s)

    def to_json(self) -> dict:
        return {"r": self.r, "s": self.s, "p": self.p, "q": self.q}


@dataclass(frozen=True)
class ClassificationVerdict:
    pair: Tuple[AlgebraSpec, AlgebraSpec]
    verdict: str
    rule: str

    def to_json(self) -> dict:
        return {"pair": [x.to_json() for x in self.pair], "verdict": self.verdict, "rule": self.rule}


@lru_cache(maxsize=None)
def minimal_dim(r: int, s: int) -> int:
    from .clifford import Signature
    from .representations import minimal_module

    return minimal_module(Signature(r, s)).dim


def _same_signature_verdict(a: AlgebraSpec, b: AlgebraSpec) -> ClassificationVerdict:
    r, s = a.r, a.s
    if a.module_dim() != b.module_dim():
        return ClassificationVerdict((a, b), "DimensionMismatch", "module dimensions differ")
    if r % 4 in (0, 1, 2):
        return ClassificationVerdict((a, b), "Isomorphic", "r = 0,1,2 mod 4: equal module dimensions suffice")
    # r = 3 mod 4: the unordered pair {p, q} is the invariant
    same = {a.p, a.q} == {b.p, b.q} and sorted((a.p, a.q)) == sorted((b.p, b.q))
    rule = "r = 3 mod 4: isomorphic iff (p,q) agree up to swapping"
    return ClassificationVerdict((a, b), "Isomorphic" if same else "NotIsomorphic", rule)


def _isotypic_balanced(x: AlgebraSpec) -> bool:
    return x.p == x.q


def _reduce_pair(x: AlgebraSpec, y: AlgebraSpec) -> Tuple[AlgebraSpec, AlgebraSpec]:
    """Strip periods from x and the mirrored periods from y (y has the swapped signature)."""
    r, s = x.r, x.s
    for mu, nu in reduce_to_basic(r, s):
        r, s = r - mu, s - nu
    return AlgebraSpec(r, s, x.p, x.q), AlgebraSpec(s, r, y.p, y.q)


def classify_pair(a: AlgebraSpec, b: AlgebraSpec) -> ClassificationVerdict:
    """Decide whether n_{a} and n_{b} are isomorphic.

    Same signature: the three branches for r mod 4.  Opposite signatures:
    periods are removed from both sides, then the mod 8 rules apply with
    the side whose r is 3 mod 4 (3 mod 8 preferred) deciding.
    """
    if (a.r, a.s) == (b.r, b.s):
        return _same_signature_verdict(a, b)
    if (a.r, a.s) != (b.s, b.r):
        return ClassificationVerdict((a, b), "NotIsomorphic", "centres have different signatures")
    if a.module_dim() != b.module_dim():
        return ClassificationVerdict((a, b), "DimensionMismatch", "module dimensions differ")
    x, y = sorted((a, b), key=lambda t: (t.r % 4 != 3, t.r % 8 != 3, t.r, t.p, t.q))
    x, y = _reduce_pair(x, y)
    r, s = x.r, x.s
    if r % 4 != 3 and s % 4 != 3:
        return ClassificationVerdict((a, b), "Isomorphic", "r, s = 0,1,2 mod 4: equal dimensions suffice")
    if r % 8 == 3 and s % 8 in (1, 2, 7):
        return ClassificationVerdict((a, b), "NotIsomorphic", "r = 3 mod 8, s = 1,2,7 mod 8: never isomorphic")
    if (r % 8 == 3 and s % 8 in (0, 4, 5, 6)) or (r % 8 == 7 and s % 8 in (0, 1, 2)):
        ok = _isotypic_balanced(x)
        rule = ("r = 3 mod 8, s = 0,4,5,6 mod 8 or r = 7 mod 8, s = 0,1,2 mod 8: "
                "isomorphic iff the r = 3 mod 4 side is the balanced sum (p,p)")
        return ClassificationVerdict((a, b), "Isomorphic" if ok else "NotIsomorphic", rule)
    return ClassificationVerdict((a, b), "NotIsomorphic", "no isomorphism rule applies")


def table2_verdict(r: int, s: int) -> str:
    """Minimal-module comparison of n_{r,s} with n_{s,r}: 'iso', 'not', 'd' or 'h'."""
    da, db = minimal_dim(r, s), minimal_dim(s, r)
    if da == 2 * db:
        return "d"
    if 2 * da == db:
        return "h"
    v = classify_pair(AlgebraSpec(r, s), AlgebraSpec(s, r)).verdict
    return "iso" if v == "Isomorphic" else "not"


def explicit_iso_17_71(params=None):
    """Explicit isomorphism n_{1,7}(U) -> n_{7,1}(V+ + V-); see htype.isomorphisms."""
    from .isomorphisms import explicit_iso_17_71 as build

    return build(params)
