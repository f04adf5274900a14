"""Exact blade arithmetic in the real Clifford algebra Cl(r,s).

Generators z_1..z_{r+s} are 1-indexed.  The first r are positive
(<z,z> = 1) and the remaining s negative.  The defining relation is
z*z = -<z,z>, so positive generators square to -1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple

Blade = Tuple[int, ...]
Rational = Fraction


class CliffordError(ValueError):
    pass


@dataclass(frozen=True)
class Signature:
    r: int
    s: int

    def __post_init__(self) -> None:
        if self.r < 0 or self.s < 0 or self.r + self.s < 1:
            raise CliffordError(f"invalid signature ({self.r},{self.s})")

    @property
    def n(self) -> int:
        return self.r + self.s

    def q(self, i: int) -> int:
        """<z_i, z_i> for the 1-indexed generator i."""
        if not 1 <= i <= self.n:
            raise CliffordError(f"generator index {i} out of range for {self}")
        return 1 if i <= self.r else -1

    def form(self, u: Sequence[Rational], w: Sequence[Rational]) -> Fraction:
        return sum((Fraction(a) * b * self.q(i + 1) for i, (a, b) in enumerate(zip(u, w))), Fraction(0))

    def __str__(self) -> str:
        return f"({self.r},{self.s})"


def blade_product(sig: Signature, a: Blade, b: Blade) -> Tuple[int, Blade]:
    """Return (sign, blade) with z_a z_b = sign * z_blade."""
    sign = 1
    # moving each generator of b leftwards past the larger ones of a
    for j in b:
        if sum(1 for i in a if i > j) % 2:
            sign = -sign
    out = []
    ia = ib = 0
    while ia < len(a) and ib < len(b):
        if a[ia] < b[ib]:
            out.append(a[ia])
            ia += 1
        elif a[ia] > b[ib]:
            out.append(b[ib])
            ib += 1
        else:
            sign *= -sig.q(a[ia])
            ia += 1
            ib += 1
    out.extend(a[ia:])
    out.extend(b[ib:])
    return sign, tuple(out)


def blade_square(sig: Signature, a: Blade) -> int:
    return blade_product(sig, a, a)[0]


def blades_commute(a: Iterable[int], b: Iterable[int]) -> bool:
    """True when z_a z_b = z_b z_a (independent of the signature)."""
    sa, sb = set(a), set(b)
    return (len(sa) * len(sb) - len(sa & sb)) % 2 == 0


def negative_count(sig: Signature, a: Iterable[int]) -> int:
    return sum(1 for i in a if i > sig.r)


def canonical_word(sig: Signature, word: Sequence[int]) -> Tuple[int, Blade]:
    """Reduce an ordered product of generators to sign * sorted blade."""
    sign, blade = 1, ()
    for i in word:
        s, blade = blade_product(sig, blade, (i,))
        sign *= s
    return sign, blade


@dataclass(frozen=True)
class CliffordElement:
    signature: Signature
    terms: Mapping[Blade, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean: Dict[Blade, Fraction] = {}
        for blade, c in dict(self.terms).items():
            blade = tuple(blade)
            if list(blade) != sorted(set(blade)):
                raise CliffordError(f"blade {blade} is not canonical")
            if blade and not (1 <= blade[0] and blade[-1] <= self.signature.n):
                raise CliffordError(f"blade {blade} outside {self.signature}")
            c = Fraction(c)
            if c:
                clean[blade] = clean.get(blade, Fraction(0)) + c
        object.__setattr__(self, "terms", {k: v for k, v in clean.items() if v})

    # constructors
    @classmethod
    def scalar(cls, sig: Signature, c=1) -> "CliffordElement":
        return cls(sig, {(): Fraction(c)})

    @classmethod
    def generator(cls, sig: Signature, i: int) -> "CliffordElement":
        sig.q(i)
        return cls(sig, {(i,): Fraction(1)})

    @classmethod
    def blade(cls, sig: Signature, indices: Iterable[int], c=1) -> "CliffordElement":
        sign, b = canonical_word(sig, list(indices))
        return cls(sig, {b: Fraction(c) * sign})

    @classmethod
    def vector(cls, sig: Signature, coords: Sequence) -> "CliffordElement":
        if len(coords) != sig.n:
            raise CliffordError("vector length does not match signature")
        return cls(sig, {(i + 1,): Fraction(c) for i, c in enumerate(coords)})

    # arithmetic
    def _check(self, other: "CliffordElement") -> None:
        if self.signature != other.signature:
            raise CliffordError(f"signature mismatch {self.signature} vs {other.signature}")

    def __add__(self, other: "CliffordElement") -> "CliffordElement":
        self._check(other)
        out = dict(self.terms)
        for b, c in other.terms.items():
            out[b] = out.get(b, Fraction(0)) + c
        return CliffordElement(self.signature, out)

    def __neg__(self) -> "CliffordElement":
        return CliffordElement(self.signature, {b: -c for b, c in self.terms.items()})

    def __sub__(self, other: "CliffordElement") -> "CliffordElement":
        return self + (-other)

    def scale(self, c) -> "CliffordElement":
        c = Fraction(c)
        return CliffordElement(self.signature, {b: v * c for b, v in self.terms.items()})

    def __mul__(self, other: "CliffordElement") -> "CliffordElement":
        return blade_mul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CliffordElement):
            return NotImplemented
        return self.signature == other.signature and dict(self.terms) == dict(other.terms)

    def __hash__(self) -> int:
        return hash((self.signature, tuple(sorted(self.terms.items()))))

    def grade_parts(self) -> Iterator[Tuple[int, Blade, Fraction]]:
        for b, c in sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0])):
            yield len(b), b, c

    def is_scalar(self) -> bool:
        return all(len(b) == 0 for b in self.terms)

    def scalar_part(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def is_vector(self) -> bool:
        return all(len(b) == 1 for b in self.terms)

    def vector_coords(self) -> Tuple[Fraction, ...]:
        if not self.is_vector():
            raise CliffordError("element is not a vector")
        return tuple(self.terms.get((i,), Fraction(0)) for i in range(1, self.signature.n + 1))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for _, b, c in self.grade_parts():
            name = "".join(f"z{i}" for i in b) or "1"
            parts.append(f"{c}*{name}")
        return " + ".join(parts)


def blade_mul(a: CliffordElement, b: CliffordElement) -> CliffordElement:
    a._check(b)
    sig = a.signature
    out: Dict[Blade, Fraction] = {}
    for ba, ca in a.terms.items():
        for bb, cb in b.terms.items():
            sign, blade = blade_product(sig, ba, bb)
            out[blade] = out.get(blade, Fraction(0)) + sign * ca * cb
    return CliffordElement(sig, out)


def alpha(a: CliffordElement) -> CliffordElement:
    return CliffordElement(a.signature, {b: (-c if len(b) % 2 else c) for b, c in a.terms.items()})


def transpose(a: CliffordElement) -> CliffordElement:
    def sgn(k: int) -> int:
        return -1 if (k * (k - 1) // 2) % 2 else 1

    return CliffordElement(a.signature, {b: sgn(len(b)) * c for b, c in a.terms.items()})


def norm(a: CliffordElement) -> CliffordElement:
    return a * alpha(transpose(a))


def volume_form(sig: Signature) -> CliffordElement:
    return CliffordElement(sig, {tuple(range(1, sig.n + 1)): Fraction(1)})


def omega_square(sig: Signature) -> int:
    if sig.n % 4 in (3, 0):
        return (-1) ** sig.s
    return (-1) ** (sig.s + 1)


@dataclass(frozen=True)
class PinElement:
    """Product of non-null vectors kept in factored form.

    Factors with <v,v> = +-1 are genuine Pin elements.  Other non-null
    rational factors stand for v / sqrt|<v,v>|; the square of the omitted
    normalisation is available as ``scale_sq``.
    """

    signature: Signature
    factors: Tuple[Tuple[Fraction, ...], ...] = ()

    def __post_init__(self) -> None:
        fs = []
        for v in self.factors:
            v = tuple(Fraction(x) for x in v)
            if len(v) != self.signature.n:
                raise CliffordError("factor length does not match signature")
            if self.signature.form(v, v) == 0:
                raise CliffordError(f"null factor {v}")
            fs.append(v)
        object.__setattr__(self, "factors", tuple(fs))

    @classmethod
    def from_indices(cls, sig: Signature, indices: Iterable[int]) -> "PinElement":
        fs = []
        for i in indices:
            v = [Fraction(0)] * sig.n
            v[i - 1] = Fraction(1)
            fs.append(tuple(v))
        return cls(sig, tuple(fs))

    def __len__(self) -> int:
        return len(self.factors)

    def __mul__(self, other: "PinElement") -> "PinElement":
        if self.signature != other.signature:
            raise CliffordError("signature mismatch")
        return PinElement(self.signature, self.factors + other.factors)

    def inverse(self) -> "PinElement":
        # v^{-1} is proportional to v, and the scalar drops out of Ad~
        return PinElement(self.signature, tuple(reversed(self.factors)))

    @property
    def factor_norms(self) -> Tuple[Fraction, ...]:
        return tuple(self.signature.form(v, v) for v in self.factors)

    @property
    def is_normalized(self) -> bool:
        return all(abs(q) == 1 for q in self.factor_norms)

    @property
    def scale_sq(self) -> Fraction:
        out = Fraction(1)
        for q in self.factor_norms:
            out *= abs(q)
        return out

    def norm_sign(self) -> int:
        """Sign of N(phi) = prod <v_k, v_k>."""
        neg = sum(1 for q in self.factor_norms if q < 0)
        return -1 if neg % 2 else 1

    def expand(self) -> CliffordElement:
        out = CliffordElement.scalar(self.signature)
        for v in self.factors:
            out = out * CliffordElement.vector(self.signature, v)
        return out


def reflect(sig: Signature, v: Sequence[Fraction], w: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    qv = sig.form(v, v)
    if qv == 0:
        raise CliffordError("reflection in a null vector")
    c = 2 * sig.form(w, v) / qv
    return tuple(Fraction(wi) - c * vi for wi, vi in zip(w, v))


def twisted_adjoint(phi: PinElement, w: Sequence) -> Tuple[Fraction, ...]:
    """alpha(phi) w phi^{-1}, evaluated factor by factor (rightmost first)."""
    w = tuple(Fraction(x) for x in w)
    if len(w) != phi.signature.n:
        raise CliffordError("vector length does not match signature")
    for v in reversed(phi.factors):
        w = reflect(phi.signature, v, w)
    return w


def twisted_adjoint_expanded(phi: PinElement, w: Sequence) -> Tuple[Fraction, ...]:
    """Same map computed in the algebra, used as a cross-check."""
    sig = phi.signature
    x = phi.expand()
    nx = norm(x)
    if not nx.is_scalar() or nx.scalar_part() == 0:
        raise CliffordError("element is not invertible through its norm")
    # phi^{-1} = alpha(phi^T) / N(phi)
    inv = alpha(transpose(x)).scale(1 / nx.scalar_part())
    out = alpha(x) * CliffordElement.vector(sig, w) * inv
    return out.vector_coords()


def twisted_adjoint_matrix(phi: PinElement) -> list:
    n = phi.signature.n
    cols = []
    for i in range(n):
        e = [Fraction(0)] * n
        e[i] = Fraction(1)
        cols.append(twisted_adjoint(phi, e))
    return [[cols[j][i] for j in range(n)] for i in range(n)]
