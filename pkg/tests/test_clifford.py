from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from htype.clifford import (CliffordElement, CliffordError, PinElement, Signature, alpha, blade_mul,
                            blade_product, blades_commute, norm, omega_square, transpose,
                            twisted_adjoint, twisted_adjoint_expanded, volume_form)

S20 = Signature(2, 0)


def gen(sig, i):
    return CliffordElement.generator(sig, i)


def test_generator_squares():
    assert blade_mul(gen(Signature(1, 0), 1), gen(Signature(1, 0), 1)) == CliffordElement.scalar(Signature(1, 0), -1)
    assert gen(Signature(0, 1), 1) * gen(Signature(0, 1), 1) == CliffordElement.scalar(Signature(0, 1), 1)


def test_distinct_generators_give_blade():
    assert gen(S20, 1) * gen(S20, 2) == CliffordElement(S20, {(1, 2): 1})


def test_bivector_squares_to_minus_one():
    e12 = CliffordElement(S20, {(1, 2): 1})
    assert e12 * e12 == CliffordElement.scalar(S20, -1)


def test_signature_mismatch():
    with pytest.raises(CliffordError):
        blade_mul(gen(S20, 1), gen(Signature(1, 1), 1))


def test_alpha_and_transpose_examples():
    s3 = Signature(3, 0)
    assert alpha(gen(s3, 1)) == -gen(s3, 1)
    e12 = CliffordElement(s3, {(1, 2): 1})
    assert alpha(e12) == e12
    x = CliffordElement(s3, {(): 1, (1, 2, 3): 1})
    assert alpha(x) == CliffordElement(s3, {(): 1, (1, 2, 3): -1})
    assert transpose(e12) == -e12
    assert transpose(gen(s3, 1)) == gen(s3, 1)
    assert transpose(volume_form(s3)) == -volume_form(s3)


def test_norm_examples():
    assert norm(gen(Signature(1, 0), 1)) == CliffordElement.scalar(Signature(1, 0), 1)
    assert norm(gen(Signature(0, 1), 1)) == CliffordElement.scalar(Signature(0, 1), -1)
    for r, s in [(1, 0), (2, 1), (0, 3), (3, 2), (4, 4)]:
        sig = Signature(r, s)
        assert norm(volume_form(sig)) == CliffordElement.scalar(sig, (-1) ** s)


@pytest.mark.parametrize("r,s", [(r, s) for r in range(6) for s in range(6) if r + s])
def test_omega_square_matches_product(r, s):
    sig = Signature(r, s)
    w = volume_form(sig)
    assert w * w == CliffordElement.scalar(sig, omega_square(sig))


def test_twisted_adjoint_examples():
    one, zero = Fraction(1), Fraction(0)
    z1 = PinElement.from_indices(S20, [1])
    assert twisted_adjoint(z1, (1, 0)) == (-one, zero)
    assert twisted_adjoint(z1, (0, 1)) == (zero, one)
    z12 = PinElement.from_indices(S20, [1, 2])
    assert twisted_adjoint(z12, (1, 0)) == (-one, zero)


def test_null_factor_rejected():
    with pytest.raises(CliffordError):
        PinElement(Signature(1, 1), ((1, 1),))


sigs = st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(lambda t: sum(t) > 0).map(lambda t: Signature(*t))


@st.composite
def element(draw, sig):
    n = sig.n
    terms = {}
    for _ in range(draw(st.integers(0, 4))):
        mask = draw(st.integers(0, 2 ** n - 1))
        blade = tuple(i + 1 for i in range(n) if mask >> i & 1)
        terms[blade] = Fraction(draw(st.integers(-3, 3)))
    return CliffordElement(sig, terms)


@st.composite
def sig_and_elements(draw, k=3):
    sig = draw(sigs)
    return sig, [draw(element(sig)) for _ in range(k)]


@given(sig_and_elements())
def test_product_is_associative(data):
    _, (a, b, c) = data
    assert (a * b) * c == a * (b * c)


@given(sig_and_elements(2))
def test_alpha_is_automorphism_and_transpose_antiautomorphism(data):
    _, (a, b) = data
    assert alpha(a * b) == alpha(a) * alpha(b)
    assert transpose(a * b) == transpose(b) * transpose(a)


@given(sigs, st.data())
def test_blade_commutation_rule(sig, data):
    n = sig.n
    a = tuple(sorted(data.draw(st.sets(st.integers(1, n)))))
    b = tuple(sorted(data.draw(st.sets(st.integers(1, n)))))
    s1, p1 = blade_product(sig, a, b)
    s2, p2 = blade_product(sig, b, a)
    assert p1 == p2
    assert (s1 == s2) == blades_commute(a, b)


@given(sigs, st.data())
def test_twisted_adjoint_agrees_with_algebra(sig, data):
    n = sig.n
    vec = st.tuples(*[st.integers(-2, 2)] * n).filter(lambda v: sig.form(v, v) != 0)
    phi = PinElement(sig, tuple(data.draw(vec) for _ in range(data.draw(st.integers(1, 3)))))
    w = data.draw(st.tuples(*[st.integers(-3, 3)] * n))
    assert twisted_adjoint(phi, w) == twisted_adjoint_expanded(phi, w)
    out = twisted_adjoint(phi, w)
    assert sig.form(out, out) == sig.form(w, w)
