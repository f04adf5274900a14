import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from htype.algebra import build_htype, verify_automorphism
from htype.automorphisms import (PinError, center_action, form_adjoint, is_automorphism, is_isometry,
                                 kernel_intersection, kernel_order, lift, p_map, structural_kernel_order,
                                 surjectivity_witness, predicted_kernel_order)
from htype.clifford import PinElement, Signature, twisted_adjoint_matrix
from htype.linalg import object_array
from htype.representations import ModuleSpec, direct_sum, minimal_module

S20 = Signature(2, 0)


def eq(a, b):
    return not np.any(object_array(a) - object_array(b))


def test_p_map_examples():
    rep = minimal_module(S20)
    pa = p_map(rep, PinElement.from_indices(S20, [1]))
    assert eq(pa.C_part, [[1, 0], [0, -1]])
    pa = p_map(rep, PinElement(S20, ()))
    assert eq(pa.A_part, np.eye(rep.dim, dtype=np.int64)) and eq(pa.C_part, np.eye(2, dtype=np.int64))
    s30 = Signature(3, 0)
    rep = minimal_module(s30, "plus")
    pa = p_map(rep, PinElement.from_indices(s30, [1, 2, 3]))
    assert eq(pa.C_part, np.eye(3, dtype=np.int64))
    assert eq(pa.A_part, np.eye(4, dtype=np.int64)) or eq(pa.A_part, -np.eye(4, dtype=np.int64))


def test_signature_mismatch():
    with pytest.raises(PinError):
        p_map(minimal_module(S20), PinElement.from_indices(Signature(1, 1), [1]))


def test_kernel_examples():
    assert kernel_order(minimal_module(S20)) == 2
    ker = kernel_intersection(minimal_module(Signature(1, 0)))
    J1 = minimal_module(Signature(1, 0)).J(1)
    assert len(ker) == 4 and any(eq(k, J1) for k in ker)
    rep = direct_sum(ModuleSpec(Signature(3, 0), 1, 1, flip="volume"))
    assert kernel_order(rep) == 4


@pytest.mark.parametrize("rs", [(r, s) for r in range(1, 8) for s in range(0, 4)])
def test_kernel_matches_volume_rule(rs):
    rep = minimal_module(Signature(*rs))
    assert kernel_order(rep) == structural_kernel_order(rep)


@pytest.mark.parametrize("rs", [(2, 0), (1, 0), (5, 1), (3, 0), (7, 2)])
def test_kernel_is_a_group(rs):
    ker = kernel_intersection(minimal_module(Signature(*rs)))
    for a, b in itertools.product(ker, repeat=2):
        assert any(eq(a @ b, c) for c in ker)
    assert any(eq(k, np.eye(ker[0].shape[0], dtype=np.int64)) for k in ker)


def test_predicted_branches_are_labelled():
    assert predicted_kernel_order(2, 5) == (2, "1a")
    assert predicted_kernel_order(1, 0) == (4, "2a")
    assert predicted_kernel_order(5, 1) == (2, "1b")
    assert predicted_kernel_order(3, 1) == (4, "2b")
    assert predicted_kernel_order(3, 0, isotypic=True) == (2, "1c")
    assert predicted_kernel_order(3, 0, isotypic=False) == (4, "2c")


def test_witness_examples():
    phi = surjectivity_witness(S20, np.eye(2, dtype=np.int64))
    assert len(phi) == 0
    phi = surjectivity_witness(Signature(3, 1), np.diag([-1, 1, 1, 1]))
    assert len(phi) == 1 and phi.factors[0] in ((1, 0, 0, 0), (-1, 0, 0, 0))
    swap = np.array([[0, 1], [1, 0]])
    phi = surjectivity_witness(S20, swap)
    assert eq(twisted_adjoint_matrix(phi), swap)
    assert phi.scale_sq == 2


def test_witness_rejects_non_isometry():
    with pytest.raises(PinError):
        surjectivity_witness(Signature(1, 1), np.array([[1, 1], [0, 1]]))


def test_lift_of_swap_is_automorphism():
    rep = minimal_module(S20)
    pa = lift(rep, [[0, 1], [1, 0]])
    assert is_automorphism(build_htype(rep), pa)


small_sigs = st.sampled_from([(2, 0), (1, 1), (0, 3), (3, 0), (2, 2), (3, 1), (1, 4), (4, 1)])


@st.composite
def pin_pair(draw):
    sig = Signature(*draw(small_sigs))
    word = st.lists(st.integers(1, sig.n), max_size=4)
    return sig, PinElement.from_indices(sig, draw(word)), PinElement.from_indices(sig, draw(word))


@given(pin_pair())
def test_p_is_homomorphism(data):
    sig, phi, psi = data
    rep = minimal_module(sig)
    a, b, ab = p_map(rep, phi), p_map(rep, psi), p_map(rep, phi * psi)
    assert eq(ab.A_part, a.A_part @ b.A_part)
    assert eq(ab.C_part, a.C_part @ b.C_part)
    assert is_isometry(sig, ab.C_part)
    assert verify_automorphism(build_htype(rep), ab.candidate())


@given(pin_pair())
def test_inverse_is_form_adjoint(data):
    sig, phi, _ = data
    ad = object_array(twisted_adjoint_matrix(phi))
    inv = object_array(twisted_adjoint_matrix(phi.inverse()))
    assert eq(inv, form_adjoint(sig, ad))


@given(small_sigs, st.data())
def test_general_vectors_give_automorphisms(rs, data):
    sig = Signature(*rs)
    vec = st.tuples(*[st.integers(-2, 2)] * sig.n).filter(lambda v: sig.form(v, v) != 0)
    phi = PinElement(sig, tuple(data.draw(vec) for _ in range(data.draw(st.integers(1, 3)))))
    rep = minimal_module(sig)
    pa = p_map(rep, phi)
    assert is_automorphism(build_htype(rep), pa)


@given(small_sigs, st.data())
def test_witness_reproduces_signed_permutations(rs, data):
    sig = Signature(*rs)
    pos = data.draw(st.permutations(range(sig.r)))
    neg = data.draw(st.permutations(range(sig.r, sig.n)))
    signs = data.draw(st.lists(st.sampled_from([1, -1]), min_size=sig.n, max_size=sig.n))
    C = np.zeros((sig.n, sig.n), dtype=np.int64)
    for j, (i, sg) in enumerate(zip(list(pos) + list(neg), signs)):
        C[i, j] = sg
    phi = surjectivity_witness(sig, C)
    assert eq(twisted_adjoint_matrix(phi), C)
    assert eq(center_action(phi), C * ((-1) ** len(phi) * phi.norm_sign()))


@pytest.mark.parametrize("rs", [(2, 1), (1, 3), (3, 2), (0, 4), (4, 0)])
def test_blade_center_signs_match_center_action(rs):
    from htype.automorphisms import blade_center_signs

    sig = Signature(*rs)
    for k in range(sig.n + 1):
        for w in itertools.combinations(range(1, sig.n + 1), k):
            M = center_action(PinElement.from_indices(sig, w))
            assert eq(M, np.diag(blade_center_signs(sig, w)))
