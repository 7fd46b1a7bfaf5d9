import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frobsplit.compat import TorusProjection
from frobsplit.hyperalg import Hyperalgebra, RankOne
from frobsplit.modules import (
    WeightModule,
    action_matrix,
    char_product,
    character,
    check_tilting_table,
    contract,
    decompose_character,
    direct_sum,
    frobenius_twist,
    g1_invariants,
    k_invariants,
    nullspace_mod_p,
    reduce_module,
    steinberg,
    tensor,
    tilting_character,
    trivial_module,
    validate_module,
    weyl_character,
    weyl_module,
    zero_module,
)
from frobsplit.rootdata import load_corpus, z_extend


@pytest.fixture(scope="module")
def sl2():
    return RankOne.from_datum(load_corpus("sl2"))


@pytest.fixture(scope="module")
def gl2():
    return RankOne.from_datum(load_corpus("gl2"))


def test_weyl_v1(sl2):
    V = weyl_module(sl2, (1,))
    assert V.dim == 2
    assert list(V.F(1)[:, 0]) == [0, 1]
    assert list(V.E(1)[:, 1]) == [1, 0]


def test_weyl_trivial(sl2):
    V = weyl_module(sl2, (0,))
    assert V.dim == 1 and V.n_max == 0
    assert not V.E(1).any() and not V.F(1).any()


def test_gl2_natural(gl2):
    V = weyl_module(gl2, (1, 0))
    assert V.weights == [(1, 0), (0, 1)]
    assert validate_module(V).passed


def test_non_dominant(sl2):
    with pytest.raises(ValueError, match="dominant"):
        weyl_module(sl2, (-1,))


@pytest.mark.parametrize("p", [None, 2, 3, 5])
@pytest.mark.parametrize("n", [0, 1, 2, 5, 7])
def test_weyl_valid(sl2, p, n):
    V = weyl_module(sl2, (n,), p)
    assert V.dim == n + 1
    assert validate_module(V).passed


def test_corrupted_entry_located(sl2):
    V = weyl_module(sl2, (5,))
    V.opE[1] = V.opE[1].copy()
    V.opE[1][0, 1] += 1
    rep = validate_module(V)
    assert not rep.passed
    ef = [f for f in rep.failures if f["relation"] == "EF"]
    assert ef and {"a", "b", "entry"} <= set(ef[0])


def test_weight_pattern_violation(sl2):
    V = weyl_module(sl2, (2,))
    V.opF[1] = V.opF[1].copy()
    V.opF[1][0, 0] = 1
    assert any(f["relation"] == "F_weight" for f in validate_module(V).failures)


def test_zero_module(sl2):
    Z = zero_module(sl2, 3)
    assert Z.dim == 0 and validate_module(Z).passed
    assert contract(Z).dim == 0


def test_integral_reduction(sl2):
    for n in range(8):
        for p in (2, 3, 5):
            assert reduce_module(weyl_module(sl2, (n,)), p) == weyl_module(sl2, (n,), p)


def test_twist_v1(sl2):
    T = frobenius_twist(weyl_module(sl2, (1,), 2))
    assert T.weights == [(2,), (-2,)]
    assert not T.E(1).any()
    assert np.array_equal(T.E(2), weyl_module(sl2, (1,), 2).E(1))
    assert validate_module(T).passed


def test_twist_trivial(sl2):
    assert frobenius_twist(trivial_module(sl2, 3)) == trivial_module(sl2, 3)


def test_contract_v2(sl2):
    C = contract(weyl_module(sl2, (2,), 2))
    assert C.dim == 3
    assert C.weights == [(1,), (0,), (-1,)]
    # E^(1) on the contraction is E^(2) on V(2): v2 -> v0, v1 -> 0
    assert list(C.E(1)[:, 2]) == [1, 0, 0]
    assert not C.E(1)[:, 1].any() and not C.F(1)[:, 1].any()
    assert validate_module(C).passed


@pytest.mark.parametrize("p", [2, 3, 5])
def test_roundtrip(sl2, p):
    for n in range(9):
        V = weyl_module(sl2, (n,), p)
        assert contract(frobenius_twist(V)) == V


@pytest.mark.parametrize("p", [2, 3])
def test_contract_dimension_counts_divisible_weights(sl2, p):
    for n in range(12):
        V = weyl_module(sl2, (n,), p)
        assert contract(V).dim == sum(1 for w in V.weights if w[0] % p == 0)


def test_contract_additive(sl2):
    p = 3
    A, B = weyl_module(sl2, (4,), p), weyl_module(sl2, (6,), p)
    assert contract(direct_sum(A, B)) == direct_sum(contract(A), contract(B))


def test_tensor_v1v1(sl2):
    V = weyl_module(sl2, (1,))
    W = tensor(V, V)
    assert sorted(W.weights) == [(-2,), (0,), (0,), (2,)]
    assert np.linalg.matrix_rank(W.E(1).astype(float)) == 2
    assert validate_module(W).passed


def test_tensor_trivial(sl2):
    V = weyl_module(sl2, (3,), 2)
    assert tensor(V, trivial_module(sl2, 2)) == V


@given(st.integers(0, 4), st.integers(0, 4), st.sampled_from([None, 2, 3]))
@settings(max_examples=25)
def test_tensor_valid_and_character(m, n, p):
    sl2 = RankOne.from_datum(load_corpus("sl2"))
    A, B = weyl_module(sl2, (m,), p), weyl_module(sl2, (n,), p)
    T = tensor(A, B)
    assert validate_module(T).passed
    assert character(T) == char_product(character(A), character(B))


def test_context_mismatch(sl2, gl2):
    with pytest.raises(ValueError):
        tensor(weyl_module(sl2, (1,)), weyl_module(gl2, (1, 0)))


def brute_kernel_dim(A, p):
    cols = A.shape[1]
    return sum(1 for v in itertools.product(range(p), repeat=cols) if not ((A @ np.array(v)) % p).any())


@given(st.sampled_from([2, 3]), st.integers(1, 3), st.integers(1, 4), st.data())
def test_nullspace_mod_p(p, r, c, data):
    A = np.array([[data.draw(st.integers(0, p - 1)) for _ in range(c)] for _ in range(r)], dtype=np.int64)
    K = nullspace_mod_p(A, p)
    assert not ((A @ K.T) % p).any()
    assert p ** K.shape[0] == brute_kernel_dim(A, p)


def test_g1_trivial(sl2):
    assert g1_invariants(trivial_module(sl2, 3)).shape[0] == 1


def test_g1_st_st_p2(sl2):
    St = steinberg(sl2, 2)
    assert g1_invariants(tensor(St, St)).shape[0] == 1


@pytest.mark.parametrize("p", [2, 3])
def test_g1_invariants_are_invariant(sl2, p):
    St = steinberg(sl2, p)
    M = tensor(tensor(St, St), weyl_module(sl2, (3,), p))
    B = g1_invariants(M)
    for i in range(1, p):
        assert not ((M.E(i) @ B.T) % p).any()
        assert not ((M.F(i) @ B.T) % p).any()


def test_action_matrix_matches_generators(sl2):
    A = Hyperalgebra(load_corpus("sl2"))
    V = weyl_module(sl2, (4,))
    assert np.array_equal(action_matrix(V, A.E(2)), V.E(2))
    assert np.array_equal(action_matrix(V, A.F(1) * A.E(1)), V.F(1).dot(V.E(1)))
    h = action_matrix(V, A.binom_H((1,)))
    assert [h[i, i] for i in range(5)] == [4, 2, 0, -2, -4]


def test_character_weyl(sl2):
    for n in range(8):
        dec = decompose_character(character(weyl_module(sl2, (n,))), sl2)
        assert dec["coefficients"] == {(n,): 1} and dec["nonneg"]
        assert "refute" in dec["note"]


def test_character_not_in_span(sl2):
    with pytest.raises(ValueError):
        decompose_character({(-1,): 1}, sl2)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_tilting_table(sl2, p):
    assert check_tilting_table(sl2, p, 5 * p).passed
    assert tilting_character(sl2, p - 1, p) == weyl_character(sl2, (p - 1,))


def test_tilting_known_values(sl2):
    # p = 2: T(2) = V(1)⊗V(1), T(3) = T(1)⊗T(1)^[1]
    assert tilting_character(sl2, 2, 2) == char_product(weyl_character(sl2, (1,)), weyl_character(sl2, (1,)))
    assert decompose_character(tilting_character(sl2, 3, 2), sl2)["coefficients"] == {(3,): 1}
    # p = 3: T(4) = χ(4) + χ(0)
    assert decompose_character(tilting_character(sl2, 4, 3), sl2)["coefficients"] == {(0,): 1, (4,): 1}


def test_st_st_is_tilting(sl2):
    for p in (2, 3, 5):
        St = steinberg(sl2, p)
        dec = decompose_character(character(tensor(St, St)), sl2, "tilting", p)
        assert dec["nonneg"]


def test_k_invariants_examples(gl2):
    rd = load_corpus("gl2")
    ext, mor = z_extend(rd)
    proj = TorusProjection.from_morphism(mor)
    g_ext = RankOne.from_datum(ext)
    # every weight has killed coordinate 1: nothing survives
    M = weyl_module(g_ext, (1, 1, 0), 2)
    assert k_invariants(M, proj, gl2).dim == 0
    N = weyl_module(g_ext, (0, 2, 0), 2)
    K = k_invariants(N, proj, gl2)
    assert K == weyl_module(gl2, (2, 0), 2)
    with pytest.raises(ValueError, match="context"):
        k_invariants(weyl_module(gl2, (1, 0), 2), proj, gl2)


def test_module_json_roundtrip(sl2, gl2):
    for M in (weyl_module(sl2, (3,)), weyl_module(gl2, (2, 1), 3)):
        assert WeightModule.from_json(M.to_json()) == M
    rd = load_corpus("pgl2")
    ext, _ = z_extend(rd)
    M = weyl_module(RankOne.from_datum(ext), (1, 1), 2)
    assert WeightModule.from_json(M.to_json()) == M
