import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from htype.algebra import (AlgebraError, AutCandidate, aut0_basis, aut0_dimension_report, aut0_lie_dimension,
                           aut0_rows, bracket_surjective, build_htype, cayley, commuting_relations_check,
                           extend_from_Estar, in_group, in_lie_algebra, random_lie_element,
                           restrict_to_estar, verify_automorphism)
from htype.automorphisms import p_map
from htype.clifford import PinElement, Signature
from htype.involutions import maximal_commuting_set
from htype.linalg import object_array
from htype.representations import ModuleSpec, direct_sum, minimal_module


def alg_of(r, s, p=1, q=0):
    return build_htype(direct_sum(ModuleSpec(Signature(r, s), p, q)))


def dense_nullity(alg):
    """Independent oracle: rank of the stacked linear map a -> a^T M_k + M_k a."""
    n = alg.dim_module
    cols = []
    for idx in range(n * n):
        a = sympy.zeros(n, n)
        a[idx // n, idx % n] = 1
        col = []
        for M in alg.metric_forms():
            Ms = sympy.Matrix(M.tolist())
            col.extend(list(a.T * Ms + Ms * a))
        cols.append(col)
    return n * n - sympy.Matrix(cols).T.rank()


def test_bracket_is_antisymmetric_and_matches_forms():
    alg = alg_of(2, 1)
    for c in alg.structure:
        assert np.array_equal(c, -c.T)
    rep = alg.rep
    u = [1, 0, 2, -1, 0, 0, 1, 3]
    v = [0, 1, 0, 2, -1, 1, 0, 0]
    eta = rep.eta_matrix()
    for k, val in enumerate(alg.bracket(u, v), start=1):
        assert val == rep.signature.q(k) * int(np.array(v) @ eta @ rep.J(k) @ np.array(u))


def test_identity_and_dilation():
    alg = alg_of(2, 0)
    assert verify_automorphism(alg, AutCandidate.identity(alg))
    B = np.ones((alg.dim_center, alg.dim_module), dtype=np.int64)
    assert verify_automorphism(alg, AutCandidate.dilation(alg, Fraction(3, 2), B))


def test_pin_candidate_on_20():
    alg = alg_of(2, 0)
    pa = p_map(alg.rep, PinElement.from_indices(alg.rep.signature, [1]))
    assert verify_automorphism(alg, pa.candidate())


def test_shape_mismatch():
    alg = alg_of(1, 0)
    with pytest.raises(AlgebraError):
        verify_automorphism(alg, AutCandidate(np.eye(3, dtype=np.int64), np.eye(1, dtype=np.int64)))


@pytest.mark.parametrize("r,s,p,q,expected", [(1, 0, 1, 0, 3), (8, 0, 1, 0, 1), (3, 0, 1, 0, 3)])
def test_aut0_examples(r, s, p, q, expected):
    alg = alg_of(r, s, p, q)
    for mode in ("graph", "modular", "exact"):
        assert aut0_dimension_report(alg, mode).dimension == expected


@pytest.mark.parametrize("rs", [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1)])
def test_aut0_against_dense_oracle(rs):
    alg = alg_of(*rs)
    assert aut0_lie_dimension(alg, "exact") == dense_nullity(alg)


def test_rows_have_two_unknowns():
    alg = alg_of(3, 1)
    assert all(len(r) <= 2 for r in aut0_rows(alg))


def test_modes_agree_on_larger_module():
    alg = alg_of(5, 1, 2)
    dims = {aut0_dimension_report(alg, m).dimension for m in ("graph", "modular", "exact")}
    assert len(dims) == 1


def test_extend_identity():
    rep = minimal_module(Signature(6, 1))
    sy = maximal_commuting_set(rep)
    k = sy.E_star_basis.shape[1]
    A = extend_from_Estar(sy, rep, np.eye(k, dtype=np.int64))
    assert not np.any(A - object_array(np.eye(rep.dim, dtype=np.int64)))


def test_extend_80_scalar():
    rep = minimal_module(Signature(8, 0))
    sy = maximal_commuting_set(rep)
    lam = Fraction(3)
    A = extend_from_Estar(sy, rep, [[lam]])
    diag = set(A[i, i] for i in range(rep.dim))
    assert diag == {lam, 1 / lam}
    assert not np.any(A - np.diag(np.diag(A)))
    alg = build_htype(rep)
    assert verify_automorphism(alg, AutCandidate(A, np.eye(8, dtype=np.int64)))
    # even transfers carry lam, odd ones its inverse
    for cell, word in sy.transfers.items():
        x = object_array(rep.product(word) @ sy.E_star_basis[:, 0])
        expect = lam if len(word) % 2 == 0 else 1 / lam
        assert not np.any(A @ x - x * expect)


def test_extend_10_symplectic():
    rep = minimal_module(Signature(1, 0))
    sy = maximal_commuting_set(rep)
    a1 = np.array([[1, 1], [0, 1]])
    B = sy.E_star_basis
    # express a1 (given in module coordinates) in E* coordinates
    Binv = np.linalg.inv(B).round().astype(int)
    A = extend_from_Estar(sy, rep, Binv @ a1 @ B)
    assert not np.any(A - object_array(a1))
    assert verify_automorphism(build_htype(rep), AutCandidate(A, np.eye(1, dtype=np.int64)))


def test_extend_rejects_bad_a1():
    rep = minimal_module(Signature(6, 0))
    sy = maximal_commuting_set(rep)
    with pytest.raises(AlgebraError):
        extend_from_Estar(sy, rep, [[1, 1], [0, 1]])


def test_relations_check_identity_and_negative():
    alg = alg_of(3, 1)
    n = alg.dim_module
    assert all(commuting_relations_check(alg, np.eye(n, dtype=np.int64)).values())
    rng = np.random.default_rng(7)
    X = np.eye(n, dtype=np.int64) + np.triu(rng.integers(-2, 3, size=(n, n)), 1)
    report = commuting_relations_check(alg, X)
    assert not all(report.values())
    assert not report["isomorphism_relation"]


EXT = [(1, 0), (2, 0), (3, 0), (1, 1), (0, 3), (4, 0), (6, 0), (7, 0), (8, 0), (5, 1), (0, 5), (2, 2), (3, 1)]


@given(st.sampled_from(EXT), st.integers(0, 2 ** 32 - 1))
@settings(max_examples=40)
def test_extension_round_trip(rs, seed):
    rep = minimal_module(Signature(*rs))
    alg = build_htype(rep)
    sy = maximal_commuting_set(rep)
    a = random_lie_element(alg, random.Random(seed))
    a1 = restrict_to_estar(sy, a)
    A = extend_from_Estar(sy, rep, a1, linearized=True)
    assert not np.any(A - object_array(a))


@given(st.sampled_from(EXT), st.integers(0, 2 ** 32 - 1))
@settings(max_examples=30)
def test_extension_output_satisfies_relations(rs, seed):
    rep = minimal_module(Signature(*rs))
    alg = build_htype(rep)
    sy = maximal_commuting_set(rep)
    a = random_lie_element(alg, random.Random(seed), span=1)
    try:
        g = cayley(a)
    except AlgebraError:
        assume(False)
    assert in_group(alg, g)
    A = extend_from_Estar(sy, rep, restrict_to_estar(sy, g))
    assert not np.any(A - g)
    assert all(commuting_relations_check(alg, A, max_four=40).values())


@given(st.sampled_from(EXT), st.integers(0, 2 ** 32 - 1))
@settings(max_examples=30)
def test_basis_elements_are_in_lie_algebra(rs, seed):
    alg = build_htype(minimal_module(Signature(*rs)))
    assert in_lie_algebra(alg, random_lie_element(alg, random.Random(seed)))
    assert len(aut0_basis(alg)) == aut0_lie_dimension(alg, "graph")


@given(st.tuples(st.integers(0, 8), st.integers(0, 8)).filter(lambda t: 0 < sum(t) <= 10))
def test_bracket_nondegenerate(rs):
    assert bracket_surjective(build_htype(minimal_module(Signature(*rs))))
