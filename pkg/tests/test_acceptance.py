"""Acceptance suite: one timed, self-contained check per criterion.

Each criterion loads its algebras afresh so caches from other tests do not
flatter the timings.  Run under pytest, or directly as a script; either way
one PASS/FAIL line is printed per criterion.
"""

import sys
import time

import numpy as np
import pytest

from qtilt.cli import load_algebra
from qtilt.homology import (
    BassZero,
    Finite,
    FiniteGlobalDim,
    InfiniteCertified,
    bass_socle_test,
    off_corner_module,
    pdim,
    setting_check,
    verify_certificate,
)
from qtilt.oracle import agrees, brute_pfin_approx, check_approximation, enumerate_reps
from qtilt.presentation import find_presentation_iso, precyclic_vertices, random_truncated_algebra
from qtilt.repmod import (
    direct_sum,
    injective,
    intersect_subspaces,
    is_isomorphic,
    projective,
    quotient,
    random_module,
    simple,
)
from qtilt.tilting import (
    CANNOT,
    UNLIMITED,
    corner_strategy,
    endo_presentation,
    iterate,
    maps_isomorphic,
    pfin_approx,
    pfin_approx_corner,
    strong_tilting,
    verify_tilting,
)
from qtilt.ttf import core, corner_of, delta, delta_subspaces, induce_module, nabla, restrict, restrict_map, sigma

RESULTS: dict[int, str] = {}


def dims(f):
    return f.source.dims


def torsion_socle(M, e):
    """Dimension vector of Δ(soc M) = soc M ∩ Δ(M)."""
    U = intersect_subspaces(M.field, M.socle_subspaces(), delta_subspaces(M, e))
    return tuple(u.shape[1] for u in U)


def s2_squared(A):
    return direct_sum([simple(A, 1)] * 2, A).module


def criterion_1():
    A = load_algebra("ex2.2")
    e = (0, 1)
    I = [injective(A, v) for v in range(4)]
    yield "Δ(I1) = Δ(I2) = 0", all(delta(M, e).source.dim == 0 for M in I[:2])
    yield "Δ(I3), Δ(I4) dims", [dims(delta(M, e)) for M in I[2:]] == [(0, 0, 2, 1), (0, 0, 1, 1)]
    yield "∇ dims", [dims(nabla(M, e)) for M in I] == [(1, 1, 0, 0), (1, 1, 0, 0), (0, 2, 1, 1), (0, 2, 0, 1)]
    S22 = s2_squared(A)
    yield "core(I3) ≅ core(I4) ≅ S2²", all(is_isomorphic(core(M, e), S22)[0] for M in I[2:])
    yield "σ(I3) ≅ σ(I4) ≅ S2²", all(is_isomorphic(sigma(M, e).module, S22)[0] for M in I[2:])


def criterion_2():
    A = load_algebra("ex2.2")
    e = (0, 1)
    T = strong_tilting(A, e)
    S = T.summands
    yield "4 summands", len(S) == 4
    yield "pairwise non-isomorphic", all(not is_isomorphic(S[a], S[b])[0] for a in range(4) for b in range(a))
    yield "T1 ≅ I1, T2 ≅ I2", all(is_isomorphic(S[v], injective(A, v))[0] for v in (0, 1))
    yield "Δ(soc T3) ≅ S3", torsion_socle(S[2], e) == (0, 0, 1, 0)
    yield "Δ(soc T4) ≅ S4", torsion_socle(S[3], e) == (0, 0, 0, 1)
    U = intersect_subspaces(A.field, S[2].socle_subspaces(), delta_subspaces(S[2], e))
    yield "T4 ≅ T3/S3", is_isomorphic(quotient(S[2], U).target, S[3])[0]
    yield "tilting axioms", verify_tilting(T).passes


def criterion_3():
    A = load_algebra("ex4.9")
    e = (0, 1)
    yield "pdim S3 = 2", pdim(simple(A, "3")) == Finite(2)
    C = corner_of(A, e).algebra
    yield "corner projectives", [projective(C, v).dims for v in range(C.n)] == [(1, 3), (0, 4)]
    r = pdim(off_corner_module(A, e))
    yield "eΛ(1-e) infinite, certified", isinstance(r, InfiniteCertified) and verify_certificate(r)
    yield "Bass: l.findim of the corner is 0", bass_socle_test(C, "right")
    rep = setting_check(A, e)
    yield "setting fails at (ii) only", (rep.failing_gate == "condition (ii)"
                                         and all(x.is_finite for x in rep.simples.values())
                                         and isinstance(rep.evidence, BassZero))


def criterion_4():
    A = load_algebra("ex6.9")
    e = (0, 1, 2)
    yield "pdim S4 = 1, S5 = 3", (pdim(simple(A, "4")), pdim(simple(A, "5"))) == (Finite(1), Finite(3))
    C = corner_of(A, e).algebra
    yield "corner projectives", [projective(C, v).dims for v in range(C.n)] == [(1, 1, 1), (0, 1, 2), (0, 2, 1)]
    yield "Bass: l.findim of the corner is 0", bass_socle_test(C, "right")
    C2 = corner_of(C, ("2", "3")).algebra
    yield "Bass: r.findim of the {2,3} corner is 0", bass_socle_test(C2, "left")
    D = endo_presentation(strong_tilting(C, tuple(range(C.n))))
    yield "strong tilt of the corner ≅ corner", find_presentation_iso(D.algebra, C) is not None
    yield "unlimited iteration", iterate(A, e).verdict == UNLIMITED


def criterion_5():
    A = load_algebra("ist")
    e = (0, 1)
    yield "Bass: l.findim = 0", bass_socle_test(A, "right")
    T = strong_tilting(A, e)
    reg = direct_sum([projective(A, v) for v in range(A.n)], A).module
    yield "T = regular module", is_isomorphic(T.module, reg)[0]
    yield "strong tilt ≅ Λ", find_presentation_iso(endo_presentation(T).algebra, A) is not None
    yield "iteration cannot be certified", iterate(A, e).verdict == CANNOT


def criterion_6(seeds=range(50), samples=20):
    bad = {name: [] for name in ("setting", "restriction", "Δ", "core", "σ", "socle")}
    for seed in seeds:
        A = random_truncated_algebra(seed)
        e = precyclic_vertices(A)
        if not setting_check(A, e).passes:
            bad["setting"].append(seed)
            continue
        strat = corner_strategy(A, e)
        for v in e:
            I = injective(A, v)
            r = pfin_approx(I, e, strat)
            if not maps_isomorphic(restrict_map(r.map, e), pfin_approx_corner(restrict(I, e), strat).map):
                bad["restriction"].append(seed)
        rng = np.random.default_rng(seed)
        for _ in range(samples):
            M = random_module(A, rng, max_dim=6)
            if not is_isomorphic(delta(pfin_approx(M, e, strat).module, e).source, delta(M, e).source)[0]:
                bad["Δ"].append(seed)
            if not is_isomorphic(core(induce_module(restrict(M, e)), e), core(M, e))[0]:
                bad["core"].append(seed)
            if not sigma(sigma(M, e).module, e).unit.is_iso():
                bad["σ"].append(seed)
        T = strong_tilting(A, e, strat)
        if torsion_socle(T.module, e) != tuple(0 if v in e else 1 for v in range(A.n)):
            bad["socle"].append(seed)
    for name, seeds_failed in bad.items():
        yield f"{name} ({sorted(set(seeds_failed)) or 'all seeds'})", not seeds_failed


def oracle_algebras(count=10):
    """The first seeds whose corner carries findim-0 or finite-global-dimension evidence."""
    seed = 0
    while count:
        A = random_truncated_algebra(seed, max_vertices=3, max_parallel=1, max_L=2, max_dim=8, require_cycle=False)
        seed += 1
        if not A.arrows:
            continue
        e = precyclic_vertices(A) or tuple(range(A.n))
        ev = setting_check(A, e).evidence
        if isinstance(ev, (BassZero, FiniteGlobalDim)):
            count -= 1
            yield A, e


def criterion_7():
    for A, e in oracle_algebras():
        cat = enumerate_reps(A, 8)
        targets = [M for M in cat.modules if M.dim <= 5]
        ok = True
        for M in targets:
            p = pfin_approx(M, e).map
            ok &= check_approximation(p, cat) and agrees(p, brute_pfin_approx(M, cat).map)
        yield f"{A.name}: {len(targets)} targets", ok


CRITERIA = {
    1: ("ex2.2 torsion functors", 5, criterion_1),
    2: ("ex2.2 strong tilting module", 30, criterion_2),
    3: ("ex4.9 setting failure", 5, criterion_3),
    4: ("ex6.9 unlimited iteration", 60, criterion_4),
    5: ("ist self-tilting", 5, criterion_5),
    6: ("50 random truncated algebras", 120, criterion_6),
    7: ("oracle equivalence", 120, criterion_7),
}


def evaluate(k):
    title, limit, fn = CRITERIA[k]
    t = time.perf_counter()
    checks = list(fn())
    elapsed = time.perf_counter() - t
    failed = [name for name, ok in checks if not ok]
    passed = not failed and elapsed < limit
    line = f"criterion {k}: {'PASS' if passed else 'FAIL'}  {title}  ({elapsed:.1f}s, limit {limit}s)"
    if failed:
        line += "  failed: " + "; ".join(failed)
    return passed, line


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k):
    passed, line = evaluate(k)
    RESULTS[k] = line
    print(line)
    assert passed, line


if __name__ == "__main__":
    ok = True
    for k in sorted(CRITERIA):
        passed, line = evaluate(k)
        ok &= passed
        print(line, flush=True)
    sys.exit(0 if ok else 1)
