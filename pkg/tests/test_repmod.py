import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qtilt.presentation import corner, truncated_algebra
from qtilt.field import GF2
from qtilt.repmod import (
    Representation,
    RelationError,
    decompose,
    direct_sum,
    dual,
    hom_basis,
    hom_dim,
    identity,
    injective,
    injective_envelope,
    is_indecomposable,
    is_isomorphic,
    layers,
    loewy_length,
    module_from_dict,
    power,
    projective,
    projective_cover,
    random_module,
    regular,
    simple,
    zero_module,
)
from qtilt.homology import off_corner_module
from qtilt.ttf import core

from conftest import fixture_algebra

FIXTURES = ["ex2.2", "ex4.9", "ex6.9", "ist"]


def kernel_dim(f):
    return sum(k.shape[1] for k in f.kernel_subspaces())


def test_relations_enforced(ex22):
    F = ex22.field
    dims = [0, 0, 1, 1]
    maps = []
    for a in ex22.arrows:
        shape = (dims[a.target], dims[a.source])
        maps.append(F.array([[1]]) if shape == (1, 1) else F.zeros(shape))
    with pytest.raises(RelationError):
        Representation(ex22, dims, maps)


def test_module_file_round_trip(ex22):
    I3 = injective(ex22, "3")
    back = module_from_dict(ex22, I3.to_json())
    assert back.dims == I3.dims and all((a == b).all() for a, b in zip(back.maps, I3.maps))


# ---------------------------------------------------------------------------
# standard modules


@pytest.mark.parametrize("name", FIXTURES)
def test_simple_dimension_vectors(name):
    A = fixture_algebra(name)
    for v in range(A.n):
        assert simple(A, v).dims == tuple(int(w == v) for w in range(A.n))


def test_ex22_injectives(ex22):
    dims = [injective(ex22, v).dims for v in range(4)]
    assert dims == [tuple(r) for r in ex22.cartan.T.tolist()]
    I1 = injective(ex22, "1")
    soc = I1.socle_subspaces()
    assert [u.shape[1] for u in soc] == [1, 0, 0, 0]


def test_ex69_corner_projective_uniserial(ex69):
    C = corner(ex69, ["1", "2", "3"]).algebra
    P1 = projective(C, "1")
    L = layers(P1)
    assert P1.dims == (1, 1, 1)
    assert all(sum(r) == 1 for r in L.radical_layers)


# ---------------------------------------------------------------------------
# hom spaces


@pytest.mark.parametrize("name", FIXTURES)
def test_hom_between_simples(name):
    A = fixture_algebra(name)
    for i in range(A.n):
        for j in range(A.n):
            assert hom_dim(simple(A, i), simple(A, j)) == int(i == j)


@pytest.mark.parametrize("name", FIXTURES)
def test_hom_from_projective_is_vertex_space(name):
    A = fixture_algebra(name)
    rng = np.random.default_rng(1)
    mods = [injective(A, v) for v in range(A.n)] + [random_module(A, rng) for _ in range(10)]
    for M in mods:
        for v in range(A.n):
            assert hom_dim(projective(A, v), M) == M.dims[v]


@pytest.mark.parametrize("name", FIXTURES)
def test_endomorphisms_of_regular_module(name):
    A = fixture_algebra(name)
    R = regular(A).module
    assert hom_dim(R, R) == A.dim


def test_morphisms_intertwine(ex22):
    I3 = injective(ex22, "3")
    for f in hom_basis(projective(ex22, "3"), I3):
        for i, a in enumerate(ex22.arrows):
            lhs = ex22.field.matmul(I3.maps[i], f.mats[a.source])
            rhs = ex22.field.matmul(f.mats[a.target], projective(ex22, "3").maps[i])
            assert (lhs == rhs).all()


# ---------------------------------------------------------------------------
# layers, covers, envelopes


def test_semisimple_single_layer(ex22):
    M = direct_sum([simple(ex22, 0), simple(ex22, 2)], ex22).module
    L = layers(M)
    assert L.loewy_length == 1 and L.top == M.dims


def test_ex22_i3_loewy_length(ex22):
    # three radical layers: tops 3, 2, 2 over 4 over 3
    I3 = injective(ex22, "3")
    L = layers(I3)
    assert L.loewy_length == 3
    assert L.radical_layers == [(0, 2, 1, 0), (0, 0, 0, 1), (0, 0, 1, 0)]


@pytest.mark.parametrize("name", FIXTURES)
def test_top_of_projective_is_simple(name):
    A = fixture_algebra(name)
    for v in range(A.n):
        assert layers(projective(A, v)).top == simple(A, v).dims


@pytest.mark.parametrize("name", FIXTURES)
def test_cover_and_envelope_of_standard_modules(name):
    A = fixture_algebra(name)
    for v in range(A.n):
        P = projective(A, v)
        c = projective_cover(P)
        assert c.source.dims == P.dims and c.is_iso()
        env = injective_envelope(simple(A, v))
        assert is_isomorphic(env.target, injective(A, v))[0]
        I = injective(A, v)
        assert injective_envelope(I).target.dims == I.dims


def test_corner_cover_of_ex22_simple(ex22):
    C = corner(ex22, ["1", "2"]).algebra
    c = projective_cover(simple(C, "2"))
    assert is_isomorphic(c.source, projective(C, "2"))[0]


def test_ex49_corner_cover_of_off_corner_module(ex49):
    X = off_corner_module(ex49, (0, 1))
    c = projective_cover(X)
    assert c.source.dims == (0, 4)
    assert tuple(k.shape[1] for k in c.kernel_subspaces()) == (0, 2)


def test_ex22_envelope_for_localization(ex22):
    from qtilt.ttf import delta, torsionfree_quotient
    I3 = injective(ex22, "3")
    Q = torsionfree_quotient(I3, (0, 1)).target
    E = injective_envelope(Q).target
    assert is_isomorphic(E, direct_sum([injective(ex22, "2")] * 2, ex22).module)[0]


@pytest.mark.parametrize("name", FIXTURES)
@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_cover_kernel_radical_and_envelope_essential(name, seed):
    A = fixture_algebra(name)
    M = random_module(A, np.random.default_rng(seed))
    c = projective_cover(M)
    rad = c.source.radical_subspaces()
    from qtilt import linalg as la
    for r, k in zip(rad, c.kernel_subspaces()):
        assert all(la.contains(A.field, r, k[:, [j]]) for j in range(k.shape[1]))
    env = injective_envelope(M)
    assert env.is_injective()
    assert sum(s.shape[1] for s in env.target.socle_subspaces()) == sum(s.shape[1] for s in M.socle_subspaces())


# ---------------------------------------------------------------------------
# duality


@pytest.mark.parametrize("name", FIXTURES)
def test_dual_of_standard_modules(name):
    A = fixture_algebra(name)
    B = A.opposite()
    for v in range(A.n):
        assert is_isomorphic(dual(simple(A, v)), simple(B, v))[0]
        assert is_isomorphic(dual(projective(A, v)), injective(B, v))[0]


@pytest.mark.parametrize("name", FIXTURES)
@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_double_dual(name, seed):
    A = fixture_algebra(name)
    M = random_module(A, np.random.default_rng(seed))
    D = dual(M)
    assert D.dims == M.dims
    DD = dual(D)
    assert DD.algebra.content_hash() == A.content_hash()
    DD = Representation(A, DD.dims, DD.maps)
    assert is_isomorphic(DD, M)[0]


# ---------------------------------------------------------------------------
# decomposition and isomorphism


@pytest.mark.parametrize("name", FIXTURES)
def test_indecomposable_projectives(name):
    A = fixture_algebra(name)
    for v in range(A.n):
        rep = decompose(projective(A, v))
        assert len(rep.pieces) == 1 and rep.summands[0][1] == 1


def test_core_of_i3(ex22):
    rep = decompose(core(injective(ex22, "3"), (0, 1)))
    assert [(X.dims, m) for X, m in rep.summands] == [((0, 1, 0, 0), 2)]


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 10**6), name=st.sampled_from(FIXTURES))
def test_decompose_recovers_multiplicities(seed, name):
    A = fixture_algebra(name)
    rng = np.random.default_rng(seed)
    X = random_module(A, rng, max_dim=4)
    Y = random_module(A, rng, max_dim=4)
    if not (is_indecomposable(X) and is_indecomposable(Y)):
        return
    M = direct_sum([X, X, Y], A).module
    rep = decompose(M)
    assert sum(m for _, m in rep.summands) == 3
    if is_isomorphic(X, Y)[0]:
        assert [m for _, m in rep.summands] == [3]
    else:
        got = sorted((Z.dims, m) for Z, m in rep.summands)
        want = sorted([(X.dims, 2), (Y.dims, 1)])
        assert got == want
    for Z in rep.pieces:
        assert len(decompose(Z).pieces) == 1


def test_isomorphism_basics(ex22):
    I3, I4 = injective(ex22, "3"), injective(ex22, "4")
    ok, w = is_isomorphic(I3, I3)
    assert ok and w.is_iso()
    assert not is_isomorphic(I3, I4)[0]
    assert is_isomorphic(zero_module(ex22), zero_module(ex22))[0]


def test_identity_and_power(ex22):
    M = injective(ex22, "2")
    assert identity(M).is_iso()
    assert power(M, 3).module.dims == tuple(3 * d for d in M.dims)


def test_decomposition_over_gf2():
    A = truncated_algebra(GF2, ["1", "2"], [("a", "1", "2"), ("b", "2", "1")], 2)
    M = direct_sum([projective(A, 0), simple(A, 1), simple(A, 1)], A).module
    rep = decompose(M)
    assert sorted((X.dims, m) for X, m in rep.summands) == [((0, 1), 2), ((2, 1), 1)]
    assert loewy_length(M) == 3
