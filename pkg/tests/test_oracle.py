import pytest

from qtilt.field import GF2
from qtilt.presentation import precyclic_vertices, presentation_from_dict, random_truncated_algebra, truncated_algebra
from qtilt.repmod import identity, is_isomorphic, projective, projective_cover, simple, zero_map, zero_module
from qtilt.oracle import EnumerationError, agrees, brute_pfin_approx, check_approximation, enumerate_reps
from qtilt.tilting import pfin_approx


def pres(vertices, arrows, relations=(), L=1, field=None):
    return presentation_from_dict({
        "field": field or {"GF": 2}, "compose": "right-to-left", "vertices": list(vertices),
        "arrows": [{"name": n, "from": s, "to": t} for n, s, t in arrows],
        "relations": [[{"coeff": c, "path": w} for c, w in r] for r in relations],
        "nilpotency_bound": L,
    })


def loop():
    return truncated_algebra(GF2, ["1"], [("x", "1", "1")], 1)


def test_loop_catalog():
    cat = enumerate_reps(loop(), 2)
    assert [M.dims for M in cat.modules] == [(1,), (2,)]
    assert len(cat.finite) == 1 and cat.finite[0].dims == (2,)


def test_semisimple_catalog_is_the_simples():
    A = pres(["1", "2", "3"], [])
    cat = enumerate_reps(A, 3)
    assert len(cat) == 3
    assert sorted(M.dims for M in cat.modules) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]


def test_kronecker_catalog_over_gf2():
    # two simples and one (1,1) module per point of the projective line over GF(2)
    A = pres(["1", "2"], [("a", "1", "2"), ("b", "1", "2")])
    cat = enumerate_reps(A, 2)
    assert len(cat) == 5
    assert sorted(M.dims for M in cat.modules).count((1, 1)) == 3


def test_catalog_has_no_duplicates():
    A = random_truncated_algebra(1, max_vertices=3, max_parallel=1, max_L=2, max_dim=8, require_cycle=False)
    mods = enumerate_reps(A, 4).modules
    for i in range(len(mods)):
        for j in range(i):
            assert not (mods[i].dims == mods[j].dims and is_isomorphic(mods[i], mods[j])[0])


def test_enumeration_errors(ex22):
    with pytest.raises(EnumerationError):
        enumerate_reps(ex22, 2)
    with pytest.raises(EnumerationError):
        enumerate_reps(loop(), 9)


def test_catalog_cache_round_trip(tmp_path):
    A = loop()
    a = enumerate_reps(A, 2, cache_dir=str(tmp_path))
    b = enumerate_reps(A, 2, cache_dir=str(tmp_path))
    assert len(list(tmp_path.iterdir())) == 1
    assert [M.dims for M in a.modules] == [M.dims for M in b.modules]


def test_check_approximation():
    A = loop()
    cat = enumerate_reps(A, 2)
    P = projective(A, 0)
    S = simple(A, 0)
    assert check_approximation(identity(P), cat)
    assert not check_approximation(zero_map(zero_module(A), S), cat)
    assert check_approximation(projective_cover(S), cat)


def test_brute_force_on_finite_pdim_module():
    A = loop()
    cat = enumerate_reps(A, 2)
    P = projective(A, 0)
    assert agrees(brute_pfin_approx(P, cat).map, identity(P))
    S = simple(A, 0)
    assert agrees(brute_pfin_approx(S, cat).map, projective_cover(S))


@pytest.mark.parametrize("seed", [0, 2, 5])
def test_brute_force_agrees_with_construction(seed):
    A = random_truncated_algebra(seed, max_vertices=3, max_parallel=1, max_L=2, max_dim=8, require_cycle=False)
    e = precyclic_vertices(A) or tuple(range(A.n))
    cat = enumerate_reps(A, 6)
    for M in cat.modules:
        if M.dim > 3:
            continue
        p = pfin_approx(M, e)
        assert check_approximation(p.map, cat)
        if p.module.dim <= 6:
            assert agrees(p.map, brute_pfin_approx(M, cat).map)
