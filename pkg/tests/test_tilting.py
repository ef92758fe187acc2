import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qtilt.field import GF2
from qtilt.homology import Finite, pdim
from qtilt.presentation import (
    find_presentation_iso,
    precyclic_vertices,
    presentation_from_dict,
    random_truncated_algebra,
    truncated_algebra,
)
from qtilt.repmod import (
    decompose,
    direct_sum,
    hom_basis,
    identity,
    injective,
    is_isomorphic,
    map_into_sum,
    projective,
    projective_cover,
    random_module,
    simple,
    zero_map,
    zero_module,
)
from qtilt.tilting import (
    CANNOT,
    DROP_FINITE_PDIM,
    DROP_PDIM_LE_1,
    FINDIM_ZERO,
    GLDIM_FINITE,
    PRECYCLIC,
    UNLIMITED,
    CornerStrategy,
    NoStrategyError,
    SettingError,
    TiltingModule,
    corner_strategy,
    endo_presentation,
    hom_into_tilt,
    is_right_minimal,
    iterate,
    maps_isomorphic,
    pfin_approx,
    pfin_approx_corner,
    reduce_idempotents,
    right_minimal_version,
    strong_tilting,
    twosided_strong_check,
    verify_tilting,
)
from qtilt.ttf import (
    classify,
    corner_of,
    delta,
    delta_subspaces,
    pullback,
    restrict,
    restrict_map,
    sigma,
    torsionfree_quotient,
)

from conftest import endo, fixture_algebra, tilt, verified

E = (0, 1)


def pres(vertices, arrows, relations=(), L=1, field="Q"):
    return presentation_from_dict({
        "field": field, "compose": "right-to-left", "vertices": list(vertices),
        "arrows": [{"name": n, "from": s, "to": t} for n, s, t in arrows],
        "relations": [[{"coeff": c, "path": w} for c, w in r] for r in relations],
        "nilpotency_bound": L,
    })


def a3():
    return pres(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")], [[("1", ["b", "a"])]], L=1)


def semisimple():
    return pres(["1", "2"], [])


def no_summand_in_kernel(p):
    """Second route to right minimality: no indecomposable summand of a decomposition is killed."""
    rep = decompose(p.source)
    return all(not (p @ inc).is_zero() for inc in rep.inclusions)


# ---------------------------------------------------------------------------
# corner approximations


def test_corner_gldim_finite_gives_identity():
    A = a3()
    X = injective(A, 1)
    r = pfin_approx_corner(X, CornerStrategy(GLDIM_FINITE))
    assert r.map.is_iso() and r.pdim.is_finite


def test_ex22_corner_approximation_of_simple(ex22):
    C = corner_of(ex22, E).algebra
    r = pfin_approx_corner(simple(C, 1), corner_strategy(ex22, E))
    assert r.strategy == FINDIM_ZERO
    assert is_isomorphic(r.module, projective(C, 1))[0]


def test_ex69_corner_approximation_of_simple(ex69):
    C = corner_of(ex69, (0, 1, 2)).algebra
    r = pfin_approx_corner(simple(C, 2), CornerStrategy(FINDIM_ZERO))
    assert r.module.dims == (0, 2, 1)
    assert maps_isomorphic(r.map, projective_cover(simple(C, 2)))


def test_no_strategy_without_evidence(ex49):
    with pytest.raises(SettingError):
        corner_strategy(ex49, E)
    with pytest.raises(NoStrategyError):
        pfin_approx_corner(simple(ex49, 0), CornerStrategy("nonsense"))


# ---------------------------------------------------------------------------
# approximations over the whole algebra


def test_finite_pdim_module_is_its_own_approximation(ex22):
    for M in (projective(ex22, 2), injective(ex22, 0)):
        assert pdim(M).is_finite
        r = pfin_approx(M, E)
        assert r.map.is_iso()


def test_ex22_approximation_of_i3(ex22):
    I3 = injective(ex22, 2)
    r = pfin_approx(I3, E)
    T3 = r.module
    assert T3.dims == (2, 2, 10, 5)
    assert r.pdim == Finite(2) and r.minimal
    assert no_summand_in_kernel(r.map)
    # the torsion part is preserved
    assert is_isomorphic(delta(T3, E).source, delta(I3, E).source)[0]
    # the torsion part of its socle is S3
    soc = T3.socle_subspaces()
    tors = delta_subspaces(T3, E)
    from qtilt.repmod import intersect_subspaces
    assert tuple(u.shape[1] for u in intersect_subspaces(ex22.field, soc, tors)) == (0, 0, 1, 0)
    # restriction to the corner: pullback of two copies of I1 over S2+S2 against the unit of I3
    I1 = injective(ex22, 0)
    rho = next(f for f in hom_basis(I1, simple(ex22, 1)) if not f.is_zero())
    S22 = direct_sum([simple(ex22, 1)] * 2, ex22)
    I11 = direct_sum([I1, I1], ex22)
    rr = map_into_sum(S22, [rho @ I11.projections[0], rho @ I11.projections[1]], I11.module)
    g = sigma(I3, E)
    ok, w = is_isomorphic(g.module, S22.module)
    pb = pullback(rr, w @ g.unit)
    assert is_isomorphic(restrict(T3, E), restrict(pb.module, E))[0]


def test_approximation_is_right_minimal_and_strips_zero_summands(ex22):
    I3 = injective(ex22, 2)
    p = pfin_approx(I3, E).map
    ds = direct_sum([p.source, projective(ex22, 0)], ex22)
    from qtilt.repmod import map_from_sum
    padded = map_from_sum(ds, [p, zero_map(projective(ex22, 0), I3)], I3)
    assert not is_right_minimal(padded)
    assert not no_summand_in_kernel(padded)
    q, inc = right_minimal_version(padded)
    assert q.source.dims == p.source.dims
    assert maps_isomorphic(q, p)


@pytest.mark.parametrize("v", [0, 1])
def test_torsionfree_and_giraud_preserved(ex22, v):
    r = pfin_approx(injective(ex22, v), E)
    c = classify(r.module, E)
    assert c.in_F and c.in_G


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_restriction_of_approximation_is_corner_approximation(seed):
    A = fixture_algebra("ex2.2")
    M = torsionfree_quotient(random_module(A, np.random.default_rng(seed), max_dim=6), E).target
    r = pfin_approx(M, E)
    assert classify(r.module, E).in_F
    assert is_right_minimal(r.map) and no_summand_in_kernel(r.map)
    corner = pfin_approx_corner(restrict(M, E), corner_strategy(A, E))
    assert maps_isomorphic(restrict_map(r.map, E), corner.map)


# ---------------------------------------------------------------------------
# strong tilting modules


def test_findim_zero_gives_regular_module(ist):
    T = tilt("ist", E)
    assert [k[0] for k in T.kinds] == ["projective", "projective"]
    rep = verified("ist", E)
    # coresolution of length 0: the single term is the regular module itself
    assert rep.passes and rep.coresolution == [(4, 2)]


def test_finite_gldim_gives_injectives():
    A = a3()
    T = strong_tilting(A, (0, 1, 2))
    for k in range(3):
        assert is_isomorphic(T.summands[k], injective(A, k))[0]
    assert verify_tilting(T).passes


def test_ex22_strong_tilting(ex22):
    T = tilt("ex2.2", E)
    assert len(T.summands) == 4
    assert T.describe(0) == "I1" and T.describe(1) == "I2"
    assert [X.dims for X in T.summands[2:]] == [(2, 2, 10, 5), (2, 2, 9, 5)]
    for a in range(4):
        for b in range(a):
            assert not is_isomorphic(T.summands[a], T.summands[b])[0]


def test_ex22_verification_and_negative_control(ex22):
    rep = verified("ex2.2", E)
    assert rep.passes and rep.axiom1 == Finite(2)
    T = tilt("ex2.2", E)
    bad = TiltingModule(ex22, T.e, T.summands[:3], T.labels[:3], T.kinds[:3])
    rep_bad = verify_tilting(bad)
    assert rep_bad.axiom3 is False and not rep_bad.passes


def test_semisimple_tilt_and_endo():
    A = semisimple()
    T = strong_tilting(A, (0, 1))
    L = endo_presentation(T).algebra
    assert L.dim == 2 and not L.arrows
    assert iterate(A, (0, 1)).verdict == UNLIMITED


def test_ist_endo_is_itself(ist):
    assert find_presentation_iso(endo("ist", E).algebra, ist) is not None


def test_ex69_corner_endo_is_itself(ex69):
    C = corner_of(ex69, (0, 1, 2)).algebra
    T = strong_tilting(C, (0, 1, 2))
    assert all(k[0] == "projective" for k in T.kinds)
    assert find_presentation_iso(endo_presentation(T).algebra, C) is not None


@pytest.mark.parametrize("name", ["ist", "ex2.2"])
def test_hom_into_tilt(name):
    A = fixture_algebra(name)
    T, D = tilt(name, E), endo(name, E)
    B = D.algebra.opposite()
    H = hom_into_tilt(T.module, D)
    assert is_isomorphic(H, direct_sum([projective(B, v) for v in range(B.n)], B).module)[0]
    for j in range(A.n):
        if j not in E:
            assert is_isomorphic(hom_into_tilt(simple(A, j), D), simple(B, T.labels.index(j)))[0]
    assert hom_into_tilt(zero_module(A), D).dim == 0


def _sources(A):
    return {v for v in range(A.n) if not any(a.target == v for a in A.arrows)}


def test_twosided_strongness():
    A = a3()
    assert twosided_strong_check(A, (0, 1, 2), strong_tilting(A, (0, 1, 2))) is True
    # a truncated algebra without a precyclic source
    B = truncated_algebra(GF2, ["1", "2"], [("a", "1", "2"), ("b", "2", "1")], 2)
    assert twosided_strong_check(B, (0, 1), strong_tilting(B, (0, 1))) is True


def test_precyclic_source_breaks_twosided_strongness():
    B = random_truncated_algebra(3)
    e = precyclic_vertices(B)
    bad = set(e) & _sources(B)
    assert bad
    T = strong_tilting(B, e)
    assert twosided_strong_check(B, e, T) is False
    # second route: some simple of infinite projective dimension has no nonzero map into T
    lone = [v for v in bad if not isinstance(pdim(simple(B, v)), Finite)
            and all(not hom_basis(simple(B, v), X) for X in T.summands)]
    assert lone


def test_ex69_not_twosided_strong(ex69):
    # vertex 1 is a precyclic source; its simple is injective of infinite projective dimension
    assert 0 in _sources(ex69) and 0 in precyclic_vertices(ex69)
    S1 = simple(ex69, 0)
    assert is_isomorphic(S1, injective(ex69, 0))[0]
    assert not isinstance(pdim(S1), Finite)
    T = tilt("ex6.9", (0, 1, 2))
    assert all(not hom_basis(S1, X) for X in T.summands)
    assert twosided_strong_check(ex69, (0, 1, 2), T) is False


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 200))
def test_truncated_twosided_iff_no_precyclic_source(seed):
    B = random_truncated_algebra(seed)
    e = precyclic_vertices(B)
    want = not (set(e) & _sources(B))
    assert twosided_strong_check(B, e, strong_tilting(B, e)) is want


def test_iterate_ist(ist):
    r = iterate(ist, E)
    assert r.verdict == CANNOT and "right-side" in r.reason
    assert r.corner_identity is True


def test_iterate_setting_failure(ex49):
    r = iterate(ex49, E)
    assert r.verdict == CANNOT and "condition (ii)" in r.reason


# ---------------------------------------------------------------------------
# choosing the idempotent


def test_reduce_idempotents_hereditary():
    A = pres(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")], L=2)
    assert reduce_idempotents(A, DROP_PDIM_LE_1) == ()


def test_reduce_idempotents_ex69(ex69):
    assert reduce_idempotents(ex69, DROP_FINITE_PDIM) == (0, 1, 2)
    assert reduce_idempotents(ex69, DROP_PDIM_LE_1) == (0, 1, 2, 4)
    assert reduce_idempotents(ex69, PRECYCLIC) == (0, 1, 2, 3, 4)


def test_reduce_idempotents_truncated():
    A = truncated_algebra(GF2, ["1", "2", "3"], [("a", "1", "2"), ("b", "2", "2"), ("c", "3", "1")], 2)
    assert reduce_idempotents(A, PRECYCLIC) == (0, 1, 2)
    B = truncated_algebra(GF2, ["1", "2", "3"], [("a", "1", "2"), ("b", "2", "2"), ("c", "2", "3")], 2)
    assert reduce_idempotents(B, PRECYCLIC) == (0, 1)
    with pytest.raises(ValueError):
        reduce_idempotents(B, "sideways")
