"""Minimal approximations by modules of finite projective dimension, strong tilting.

The approximation of a module ``M`` is assembled from the corner algebra
``eΛe``: approximate ``eM`` there, induce back, pass to the torsionfree
quotient, take the maximal essential Δ-extension of the resulting map, and
finally pull back along ``M -> M/Δ(M)``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import linalg as la
from .homology import (
    BassZero,
    Evidence,
    FiniteGlobalDim,
    PdimResult,
    Reduced,
    Supplied,
    corner_evidence,
    ext_dim,
    ext_dims,
    pdim,
    setting_check,
    simple_pdims,
)
from .matrix_algebra import MatrixAlgebra
from .presentation import AbstractAlgebra, AlgebraPresentation, Path, build_presentation, find_presentation_iso
from .repmod import (
    ModuleMorphism,
    Representation,
    _global_to_subspaces,
    combine,
    decompose,
    direct_sum,
    endomorphism_algebra,
    hom_basis,
    identity,
    injective,
    is_isomorphic,
    map_from_projective,
    map_into_sum,
    projective,
    projective_cover,
    simple,
    submodule,
)
from .ttf import (
    corner_of,
    counit,
    delta_subspaces,
    descend,
    induce,
    induce_map,
    max_delta_extension,
    pullback,
    restrict,
    restrict_map,
    torsionfree_quotient,
    vertex_set,
)


class SettingError(ValueError):
    """The hypotheses needed by the reduction to the corner do not hold."""


class NoStrategyError(ValueError):
    """No evidence-backed way to approximate over the corner."""


# ---------------------------------------------------------------------------
# corner strategies


FINDIM_ZERO = "CornerFindimZero"
GLDIM_FINITE = "CornerGldimFinite"
SUPPLIED = "CornerSupplied"
REDUCED = "CornerReduced"


@dataclass(frozen=True)
class CornerStrategy:
    """How to approximate over a corner algebra.

    ``CornerReduced`` applies the whole reduction once more inside the
    corner, at the sub-idempotent ``vertices`` with strategy ``inner``.
    ``CornerSupplied`` calls ``supplied(X)`` for a candidate map.
    """

    kind: str
    vertices: tuple[int, ...] = ()
    inner: "CornerStrategy | None" = None
    supplied: Callable[[Representation], ModuleMorphism] | None = field(default=None, compare=False)

    def __str__(self) -> str:
        if self.kind == REDUCED:
            return f"{REDUCED}({list(self.vertices)}: {self.inner})"
        return self.kind


def strategy_from_evidence(ev: Evidence, supplied: Callable | None = None) -> CornerStrategy:
    if isinstance(ev, BassZero):
        return CornerStrategy(FINDIM_ZERO)
    if isinstance(ev, FiniteGlobalDim):
        return CornerStrategy(GLDIM_FINITE)
    if isinstance(ev, Supplied):
        if supplied is None:
            raise NoStrategyError("supplied evidence needs a corner approximation map")
        return CornerStrategy(SUPPLIED, supplied=supplied)
    if isinstance(ev, Reduced):
        return CornerStrategy(REDUCED, ev.vertices, strategy_from_evidence(ev.inner, supplied))
    raise NoStrategyError("no evidence that the corner admits approximations")


@dataclass(frozen=True)
class ApproximationResult:
    """A right minimal approximation ``map: module -> target`` by a module of finite pdim."""

    map: ModuleMorphism
    pdim: PdimResult
    strategy: str
    minimal: bool
    corner: "ApproximationResult | None" = None

    @property
    def module(self) -> Representation:
        return self.map.source

    @property
    def target(self) -> Representation:
        return self.map.target


# ---------------------------------------------------------------------------
# right minimality


def kernel_endomorphisms(p: ModuleMorphism, basis: list[ModuleMorphism]) -> np.ndarray:
    """Coordinates (columns) of the endomorphisms ``u`` with ``p ∘ u = 0``."""
    F = p.field
    if not basis:
        return F.zeros((0, 0))
    cols = [np.concatenate([m.reshape(-1) for m in (p @ b).mats]) for b in basis]
    M = np.stack(cols, axis=1)
    if M.shape[0] == 0:
        return F.eye(len(basis))
    return la.nullspace(F, M)


def _kernel_in_radical(p: ModuleMorphism) -> bool:
    """Sufficient for right minimality: a nonzero summand is never inside the radical."""
    F = p.field
    rad = p.source.radical_subspaces()
    return all(la.contains(F, r, k) for r, k in zip(rad, p.kernel_subspaces()) if k.shape[1])


def is_right_minimal(p: ModuleMorphism) -> bool:
    """No nonzero summand of the domain lies in the kernel: ``{u : p u = 0}`` is radical."""
    if _kernel_in_radical(p):
        return True
    basis, E = endomorphism_algebra(p.source)
    L = kernel_endomorphisms(p, basis)
    return L.shape[1] == 0 or la.contains(p.field, E.radical(), L)


def right_minimal_version(p: ModuleMorphism, trials: int = 200, seed: int = 0) -> tuple[ModuleMorphism, ModuleMorphism]:
    """Restriction of ``p`` to a summand of its domain on which it is right minimal.

    Returns ``(p restricted, inclusion of the summand)``.  A non-nilpotent
    ``u`` with ``p u = 0`` splits off the image of a high power of ``u``
    (Fitting); the kernel of that power is kept.
    """
    F = p.field
    rng = np.random.default_rng(seed)
    inc = identity(p.source)
    while p.source.dim and not _kernel_in_radical(p):
        basis, E = endomorphism_algebra(p.source)
        L = kernel_endomorphisms(p, basis)
        if L.shape[1] == 0 or la.contains(F, E.radical(), L):
            break
        u = None
        for t in range(trials):
            c = L[:, t] if t < L.shape[1] else F.matmul(L, F.random_array(rng, (L.shape[1], 1)))[:, 0]
            X = E.element(c)
            if not E.is_nilpotent(X):
                u = X
                break
        if u is None:
            raise AssertionError("kernel endomorphisms are not radical but all samples were nilpotent")
        K = la.matpow(F, u, p.source.dim)
        k = submodule(p.source, _global_to_subspaces(p.source, K))
        p, inc = p @ k, inc @ k
    return p, inc


# ---------------------------------------------------------------------------
# approximations


def pfin_approx_corner(X: Representation, strategy: CornerStrategy, bound: int | None = None) -> ApproximationResult:
    if strategy.kind == FINDIM_ZERO:
        return ApproximationResult(projective_cover(X), pdim(projective_cover(X).source, bound), FINDIM_ZERO, True)
    if strategy.kind == GLDIM_FINITE:
        return ApproximationResult(identity(X), pdim(X, bound), GLDIM_FINITE, True)
    if strategy.kind == REDUCED:
        inner = pfin_approx(X, strategy.vertices, strategy.inner, bound)
        return dataclasses.replace(inner, strategy=str(strategy))
    if strategy.kind == SUPPLIED:
        if strategy.supplied is None:
            raise NoStrategyError("no supplied corner map")
        q = strategy.supplied(X)
        if q.target.dims != X.dims:
            raise NoStrategyError("supplied map has the wrong target")
        q, _ = right_minimal_version(q)
        pd = pdim(q.source, bound)
        if not pd.is_finite:
            raise NoStrategyError("supplied approximation does not have finite projective dimension")
        return ApproximationResult(q, pd, SUPPLIED, True)
    raise NoStrategyError(f"unknown corner strategy {strategy.kind!r}")


def corner_strategy(A: AlgebraPresentation, e: Sequence[int], bound: int | None = None,
                    supplied: Callable | None = None) -> CornerStrategy:
    rep = setting_check(A, e, bound, supplied=supplied is not None)
    if not rep.passes_conditions:
        raise SettingError(f"{rep.failing_gate} fails for e = {[A.vertices[v] for v in rep.e]}")
    return strategy_from_evidence(rep.evidence, supplied)


def pfin_approx(M: Representation, e: Sequence[int | str], strategy: CornerStrategy | None = None,
                bound: int | None = None) -> ApproximationResult:
    """Minimal right approximation of ``M`` by a module of finite projective dimension."""
    A = M.algebra
    e = vertex_set(A, e)
    if strategy is None:
        strategy = corner_strategy(A, e, bound)
    q1 = torsionfree_quotient(M, e)
    Mbar = q1.target
    X = restrict(Mbar, e)
    cres = pfin_approx_corner(X, strategy, bound)
    ind_q = induce(cres.module)
    ind_x = induce(X)
    g = counit(Mbar, e, ind_x) @ induce_map(cres.map, src=ind_q, tgt=ind_x)
    # g kills the torsion of induce(Q'); pass to the torsionfree quotient
    w = torsionfree_quotient(ind_q.module, e)
    g = descend(w, g)
    ext = max_delta_extension(g, e)
    pb = pullback(ext.morphism, q1)
    p, _ = right_minimal_version(pb.second)
    return ApproximationResult(p, pdim(p.source, bound), str(strategy), is_right_minimal(p), cres)


def maps_isomorphic(p1: ModuleMorphism, p2: ModuleMorphism, trials: int = 32, seed: int = 0) -> bool:
    """Whether some isomorphism ``h`` of domains satisfies ``p2 ∘ h = p1``."""
    F = p1.field
    if p1.source.dims != p2.source.dims or p1.target.dims != p2.target.dims:
        return False
    H = hom_basis(p1.source, p2.source)
    if not H:
        return p1.source.dim == 0
    cols = [np.concatenate([m.reshape(-1) for m in (p2 @ h).mats]) for h in H]
    rhs = np.concatenate([m.reshape(-1) for m in p1.mats])
    Mx = np.stack(cols, axis=1)
    if Mx.shape[0] == 0:
        x0, N = F.zeros((len(H), 1)), F.eye(len(H))
    else:
        x0 = la.solve(F, Mx, rhs[:, None])
        if x0 is None:
            return False
        N = la.nullspace(F, Mx)
    rng = np.random.default_rng(seed)
    for t in range(trials):
        c = x0[:, 0] if t == 0 or N.shape[1] == 0 else F.reduce(x0[:, 0] + F.matmul(N, F.random_array(rng, (N.shape[1], 1)))[:, 0])
        if combine(F, H, c, p1.source, p2.source).is_iso():
            return True
        if N.shape[1] == 0:
            break
    return False


# ---------------------------------------------------------------------------
# strong tilting module


@dataclass(frozen=True)
class TiltingModule:
    """Basic strong tilting module ``T = T' ⊕ T''``.

    ``summands[:m]`` form ``T'`` (one per vertex of ``e``, in the order they
    first occur in the approximations of the injectives at ``e``);
    ``summands[m:]`` are the ``T_j`` for ``j`` off ``e`` in vertex order.
    ``labels[k]`` is the vertex attached to summand ``k`` and ``kinds[k]`` is
    ``("projective", v)`` or ``("injective", v)`` when the summand was
    replaced by that standard module, else ``None``.
    """

    algebra: AlgebraPresentation
    e: tuple[int, ...]
    summands: tuple[Representation, ...]
    labels: tuple[int, ...]
    kinds: tuple[tuple[str, int] | None, ...]
    approximations: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def m(self) -> int:
        return len(self.e)

    @property
    def t_prime(self) -> tuple[Representation, ...]:
        return self.summands[: self.m]

    @property
    def t_second(self) -> tuple[Representation, ...]:
        return self.summands[self.m:]

    @property
    def module(self) -> Representation:
        return direct_sum(list(self.summands), self.algebra).module

    def name(self, k: int) -> str:
        return f"T{self.algebra.vertices[self.labels[k]]}"

    def describe(self, k: int) -> str:
        kind = self.kinds[k]
        if kind is None:
            return str(self.summands[k].dims)
        return f"{'P' if kind[0] == 'projective' else 'I'}{self.algebra.vertices[kind[1]]}"

    def to_json(self) -> dict:
        A = self.algebra
        return {
            "e": [A.vertices[v] for v in self.e],
            "summands": [
                {"name": self.name(k), "dims": list(X.dims), "standard": None if self.kinds[k] is None else
                 {"kind": self.kinds[k][0], "vertex": A.vertices[self.kinds[k][1]]},
                 "part": "T'" if k < self.m else "T''"}
                for k, X in enumerate(self.summands)
            ],
        }


class TiltingError(AssertionError):
    """The assembled module violates a guaranteed property (signals a bug)."""


def _canonical(X: Representation) -> tuple[Representation, tuple[str, int] | None]:
    A = X.algebra
    for kind, make in (("projective", projective), ("injective", injective)):
        for v in range(A.n):
            Y = make(A, v)
            if Y.dims == X.dims and is_isomorphic(Y, X)[0]:
                return Y, (kind, v)
    return X, None


def strong_tilting(A: AlgebraPresentation, e: Sequence[int | str], strategy: CornerStrategy | None = None,
                   bound: int | None = None) -> TiltingModule:
    e = vertex_set(A, e)
    rep = setting_check(A, e, bound, supplied=strategy is not None and strategy.kind == SUPPLIED)
    if not rep.passes_conditions:
        raise SettingError(f"{rep.failing_gate} fails")
    if strategy is None:
        strategy = strategy_from_evidence(rep.evidence)
    approx = {v: pfin_approx(injective(A, v), e, strategy, bound) for v in range(A.n)}
    prime: list[Representation] = []

    def known(X) -> bool:
        return any(Y.dims == X.dims and is_isomorphic(Y, X)[0] for Y in prime)

    for v in e:
        for X in decompose(approx[v].module).pieces:
            if not known(X):
                prime.append(X)
    if len(prime) != len(e):
        raise TiltingError(f"expected {len(e)} torsionfree summands, found {len(prime)}")
    second = []
    for j in range(A.n):
        if j in e:
            continue
        tors = []
        for X in decompose(approx[j].module).pieces:
            if any(u.shape[1] for u in delta_subspaces(X, e)):
                tors.append(X)
            elif not known(X):
                raise TiltingError(f"summand of the approximation at {A.vertices[j]} outside add(T')")
        if len(tors) != 1:
            raise TiltingError(f"expected one summand with torsion at {A.vertices[j]}, found {len(tors)}")
        second.append((j, tors[0]))
    summands, kinds = [], []
    for X in prime + [X for _, X in second]:
        Y, kind = _canonical(X)
        summands.append(Y)
        kinds.append(kind)
    labels = tuple(e) + tuple(j for j, _ in second)
    return TiltingModule(A, e, tuple(summands), labels, tuple(kinds), approx)


# ---------------------------------------------------------------------------
# verification


@dataclass
class TiltingReport:
    axiom1: PdimResult
    axiom2: bool | None
    axiom3: bool | None
    strongness_socle: bool
    coresolution: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def passes(self) -> bool:
        return self.axiom1.is_finite and bool(self.axiom2) and bool(self.axiom3) and self.strongness_socle

    def to_json(self) -> dict:
        return {
            "axiom1": self.axiom1.to_json(),
            "axiom2": self.axiom2,
            "axiom3": self.axiom3,
            "strongness_socle": self.strongness_socle,
            "coresolution": [list(d) for d in self.coresolution],
        }


def _flat(f: ModuleMorphism) -> np.ndarray:
    return np.concatenate([m.reshape(-1) for m in f.mats])


def _radical_maps(summands: Sequence[Representation]) -> dict[tuple[int, int], list[ModuleMorphism]]:
    """Bases of the radical of add(T) between summands ``l -> k``."""
    F = summands[0].field
    out = {}
    for l, X in enumerate(summands):
        for k, Y in enumerate(summands):
            if l != k:
                out[(l, k)] = hom_basis(X, Y)
            else:
                basis, E = endomorphism_algebra(X)
                R = E.radical()
                out[(l, k)] = [combine(F, basis, R[:, j], X, X) for j in range(R.shape[1])]
    return out


def radical_generators(summands: Sequence[Representation]) -> dict[tuple[int, int], list[ModuleMorphism]]:
    """Maps ``T_l -> T_k`` spanning rad modulo rad²; every radical map is a sum of ``a ∘ g``."""
    F = summands[0].field
    rad = _radical_maps(summands)
    n = len(summands)
    out = {}
    for l in range(n):
        for k in range(n):
            R = rad[(l, k)]
            if not R:
                out[(l, k)] = []
                continue
            B = np.stack([_flat(r) for r in R], axis=1)
            sq = [_flat(g @ f) for m in range(n) for f in rad[(l, m)] for g in rad[(m, k)]]
            if sq and B.shape[0]:
                S = la.colspace(F, la.solve(F, B, np.stack(sq, axis=1)))
            else:
                S = F.zeros((len(R), 0))
            C = la.complement(F, S, len(R))
            out[(l, k)] = [combine(F, R, C[:, j], summands[l], summands[k]) for j in range(C.shape[1])]
    return out


def left_approximation(X: Representation, summands: Sequence[Representation],
                       gens: dict | None = None) -> ModuleMorphism:
    """Minimal left add(T)-approximation of ``X``.

    The maps ``X -> T_k`` are taken modulo the radical composites, which are
    spanned by ``a ∘ h`` with ``a`` from :func:`radical_generators`.
    """
    F = X.field
    gens = gens if gens is not None else radical_generators(summands)
    H = [hom_basis(X, T) for T in summands]
    chosen_maps, targets = [], []
    for k, T in enumerate(summands):
        if not H[k]:
            continue
        comp = [_flat(a @ h) for l in range(len(summands)) for a in gens[(l, k)] for h in H[l]]
        B = np.stack([_flat(h) for h in H[k]], axis=1)
        if comp and B.shape[0]:
            R = la.colspace(F, la.solve(F, B, np.stack(comp, axis=1)))
        else:
            R = F.zeros((len(H[k]), 0))
        C = la.complement(F, R, len(H[k]))
        for j in range(C.shape[1]):
            chosen_maps.append(combine(F, H[k], C[:, j], X, T))
            targets.append(T)
    ds = direct_sum(targets, X.algebra)
    return map_into_sum(ds, chosen_maps, X)


def coresolve(X: Representation, summands: Sequence[Representation], bound: int,
              gens: dict | None = None) -> tuple[bool | None, list[tuple[int, ...]]]:
    """Iterated minimal left add(T)-approximations of ``X``.

    ``True`` when a cokernel vanishes within ``bound`` steps, ``False`` when an
    approximation fails to be injective, ``None`` otherwise.
    """
    gens = gens if gens is not None else radical_generators(summands)
    steps = []
    for _ in range(bound + 1):
        f = left_approximation(X, summands, gens)
        steps.append(f.target.dims)
        if not f.is_injective():
            return False, steps
        X = f.cokernel().target
        if X.dim == 0:
            return True, steps
    return None, steps


def verify_tilting(T: TiltingModule, bound: int | None = None) -> TiltingReport:
    A = T.algebra
    bound = 2 * A.dim + 2 if bound is None else bound
    pds = [pdim(X, bound) for X in T.summands]
    bad = next((r for r in pds if not r.is_finite), None)
    axiom1 = bad if bad is not None else max(pds, key=lambda r: r.value)
    if axiom1.is_finite:
        axiom2 = all(d == 0 for i in range(1, axiom1.value + 1)
                     for X in T.summands for d in ext_dims(X, T.summands, i))
    else:
        axiom2 = None
    # the regular module is coresolved one indecomposable projective at a time
    gens = radical_generators(T.summands)
    axiom3: bool | None = True
    steps: list[np.ndarray] = []
    for v in range(A.n):
        ok, st = coresolve(projective(A, v), T.summands, bound, gens)
        for k, d in enumerate(st):
            if k == len(steps):
                steps.append(np.zeros(A.n, dtype=int))
            steps[k] = steps[k] + np.array(d)
        if ok is False:
            axiom3 = False
            break
        if ok is None:
            axiom3 = None
    M = T.module
    socle_ok = all(len(hom_basis(simple(A, j), M)) > 0 for j in range(A.n) if j not in T.e)
    return TiltingReport(axiom1, axiom2, axiom3, socle_ok, [tuple(int(x) for x in d) for d in steps])


# ---------------------------------------------------------------------------
# the strong tilt End(T)^op


@dataclass
class EndoPresentation:
    """``Λ̃ = End(T)^op`` with ``ẽ`` and the Hom bases.

    An element of Λ̃ from vertex ``s`` to ``t`` is a map ``T_t -> T_s``;
    ``hom[(s, t)]`` is the basis used for its coordinates.  "x then y" is the
    composite ``x ∘ y``.
    """

    algebra: AlgebraPresentation
    e_tilde: tuple[int, ...]
    hom: dict[tuple[int, int], list[ModuleMorphism]]
    tilting: TiltingModule
    values: dict[Path, np.ndarray]


class _Coords:
    """Coordinates of morphisms in a fixed basis, by a precomputed inverse."""

    def __init__(self, F, basis: list[ModuleMorphism]):
        self.F = F
        self.n = len(basis)
        if basis:
            B = np.stack([np.concatenate([m.reshape(-1) for m in f.mats]) for f in basis], axis=1)
            self.rows = la.independent_columns(F, B.T)
            self.inv = la.inverse(F, B[self.rows])
        else:
            self.rows, self.inv = [], F.zeros((0, 0))

    def __call__(self, f: ModuleMorphism) -> np.ndarray:
        if not self.n:
            return self.F.zeros(0)
        v = np.concatenate([m.reshape(-1) for m in f.mats])
        return self.F.matmul(self.inv, v[self.rows][:, None])[:, 0]


def _path_hom_basis(A: AlgebraPresentation, s: int, t: int) -> list[ModuleMorphism]:
    """Maps ``P_t -> P_s`` sending the trivial path at ``t`` to each normal path from ``s`` to ``t``."""
    F = A.field
    Ps = projective(A, s)
    out = []
    idx = A.pair_basis[(s, t)]
    for k in range(len(idx)):
        vec = F.zeros(len(idx))
        vec[k] = F.one()
        out.append(map_from_projective(A, t, Ps, vec))
    return out


def endo_presentation(T: TiltingModule) -> EndoPresentation:
    A = T.algebra
    F = A.field
    n = len(T.summands)
    X = T.summands
    proj = [k is not None and k[0] == "projective" for k in T.kinds]
    hom = {}
    for s in range(n):
        for t in range(n):
            if proj[s] and proj[t]:
                hom[(s, t)] = _path_hom_basis(A, T.kinds[s][1], T.kinds[t][1])
            else:
                hom[(s, t)] = hom_basis(X[t], X[s])
    coords = {k: _Coords(F, v) for k, v in hom.items()}
    comp = {}
    for s in range(n):
        for m in range(n):
            for t in range(n):
                comp[(s, m, t)] = [[coords[(s, t)](x @ y) for y in hom[(m, t)]] for x in hom[(s, m)]]

    def then(s, m, t, x, y):
        out = F.zeros(len(hom[(s, t)]))
        for i in np.nonzero(x != 0)[0]:
            for j in np.nonzero(y != 0)[0]:
                out = F.reduce(out + F.mul(x[i], y[j]) * comp[(s, m, t)][i][j])
        return out

    def ident(v):
        return coords[(v, v)](identity(X[v]))

    dims = np.array([[len(hom[(s, t)]) for t in range(n)] for s in range(n)])
    alg = AbstractAlgebra(F, [T.name(k) for k in range(n)], dims, then, ident)
    rad = {}
    for s in range(n):
        for t in range(n):
            if s != t:
                rad[(s, t)] = F.eye(len(hom[(s, t)]))
            else:
                mats = [f.global_matrix() for f in hom[(s, s)]]
                rad[(s, s)] = MatrixAlgebra(F, mats).radical()
    powers = alg.radical_powers(rad)
    sq = powers[1] if len(powers) > 1 else {k: F.zeros((v.shape[0], 0)) for k, v in rad.items()}
    arrows = []
    count = 0
    for s in range(n):
        for t in range(n):
            d = len(hom[(s, t)])
            R = rad[(s, t)]
            cur = sq[(s, t)]
            cands = [F.eye(d)[:, k] for k in range(d)] + [R[:, k] for k in range(R.shape[1])]
            for vec in cands:
                if not la.contains(F, R, vec[:, None]):
                    continue
                trial = la.hstack(F, [cur, vec[:, None]], d)
                if la.rank(F, trial) > cur.shape[1]:
                    cur = la.colspace(F, trial)
                    nz = np.nonzero(vec)[0]
                    if proj[s] and proj[t] and len(nz) == 1:
                        p = A.basis[A.pair_basis[(T.kinds[s][1], T.kinds[t][1])][int(nz[0])]]
                        name = ".".join(A.word(p))
                    else:
                        count += 1
                        name = f"x{count}"
                    arrows.append((name, s, t, vec))
                if cur.shape[1] == R.shape[1]:
                    break
    pres, values = build_presentation(alg, arrows, compose=A.compose,
                                      name=None if A.name is None else f"{A.name}~")
    return EndoPresentation(pres, tuple(range(T.m)), hom, T, values)


def hom_into_tilt(M: Representation, endo: EndoPresentation) -> Representation:
    """``Hom(M, T)`` as a left module over the opposite of Λ̃ (a right Λ̃-module)."""
    B = endo.algebra.opposite()
    F = M.field
    X = endo.tilting.summands
    H = [hom_basis(M, T) for T in X]
    coords = [_Coords(F, h) for h in H]
    maps = []
    for a in endo.algebra.arrows:
        s, t = a.source, a.target
        f = combine(F, endo.hom[(s, t)], endo.values[endo.algebra.quiver.arrow_path(endo.algebra.arrows.index(a))],
                    X[t], X[s])
        cols = [coords[s](f @ phi) for phi in H[t]]
        maps.append(np.stack(cols, axis=1) if cols else F.zeros((len(H[s]), 0)))
    return Representation(B, [len(h) for h in H], maps)


# ---------------------------------------------------------------------------
# iteration


def twosided_strong_check(A: AlgebraPresentation, e: Sequence[int | str], T: TiltingModule,
                          bound: int | None = None) -> bool | None:
    """Every simple of infinite projective dimension embeds in T; ``None`` if some pdim is unknown."""
    M = T.module
    verdict: bool | None = True
    for v, r in simple_pdims(A, bound).items():
        if r.is_finite:
            continue
        if r.kind == "unknown":
            verdict = None
            continue
        if not hom_basis(simple(A, v), M):
            return False
    return verdict


UNLIMITED = "UnlimitedIteration"
CANNOT = "CannotCertify"


@dataclass
class IterationReport:
    algebra: AlgebraPresentation
    e: tuple[int, ...]
    verdict: str
    reason: str | None = None
    tilting: TiltingModule | None = None
    endo: EndoPresentation | None = None
    right_conditions: object = None  # SettingReport over the opposite of Λ̃
    right_evidence: Evidence | None = None
    twosided_strong: bool | None = None
    corner_identity: bool | None = None
    consistent: bool = True

    def to_json(self) -> dict:
        A = self.algebra
        out = {
            "e": [A.vertices[v] for v in self.e],
            "verdict": self.verdict,
            "reason": self.reason,
            "consistent": self.consistent,
        }
        if self.tilting is not None:
            out["tilting"] = self.tilting.to_json()
        if self.endo is not None:
            B = self.endo.algebra
            out["strong_tilt"] = {"presentation": B.to_json(), "e_tilde": [B.vertices[v] for v in self.endo.e_tilde]}
        if self.right_conditions is not None:
            out["right_conditions"] = self.right_conditions.to_json()
        if self.right_evidence is not None:
            out["right_evidence"] = self.right_evidence.to_json()
        out["twosided_strong"] = self.twosided_strong
        out["corner_identity"] = self.corner_identity
        return out


def iterate(A: AlgebraPresentation, e: Sequence[int | str], bound: int | None = None,
            supplied_right: bool = False) -> IterationReport:
    """Decide, with evidence, whether strong tilting can be iterated without limit."""
    e = vertex_set(A, e)
    rep = setting_check(A, e, bound)
    if not rep.passes:
        return IterationReport(A, e, CANNOT, f"setting: {rep.failing_gate}")
    T = strong_tilting(A, e, bound=bound)
    endo = endo_presentation(T)
    L = endo.algebra
    B = L.opposite()
    right = setting_check(B, endo.e_tilde, bound, evidence=False)
    report = IterationReport(A, e, CANNOT, None, T, endo, right)
    report.twosided_strong = twosided_strong_check(A, e, T, bound)
    report.corner_identity = _corner_identity(A, e, endo, bound)
    if not right.passes_conditions:
        definite = any(r.kind == "infinite" for r in right.simples.values()) or right.restricted.kind == "infinite"
        report.consistent = not definite
        report.reason = f"right-hand {right.failing_gate}" + (" fails (inconsistent with theory)" if definite else " undecided")
        return report
    right_corner = corner_of(B, endo.e_tilde).algebra
    ev = corner_evidence(right_corner, None, supplied_right)
    report.right_evidence = ev
    if not ev.present:
        report.reason = "right-side corner evidence unavailable"
        return report
    report.verdict = UNLIMITED
    return report


def _corner_identity(A: AlgebraPresentation, e: tuple[int, ...], endo: EndoPresentation,
                     bound: int | None) -> bool | None:
    """``ẽΛ̃ẽ`` against the strong tilt of the corner; ``None`` when no iso is found."""
    C = corner_of(A, e).algebra
    try:
        Tc = strong_tilting(C, tuple(range(C.n)), bound=bound)
    except (SettingError, NoStrategyError):
        return None
    Lc = endo_presentation(Tc).algebra
    tilde_corner = corner_of(endo.algebra, endo.e_tilde).algebra
    return True if find_presentation_iso(tilde_corner, Lc) is not None else None


DROP_PDIM_LE_1 = "drop_pdim_le_1"
DROP_FINITE_PDIM = "drop_finite_pdim"
PRECYCLIC = "precyclic"


def reduce_idempotents(A: AlgebraPresentation, mode: str, bound: int | None = None) -> tuple[int, ...]:
    """Vertices kept after discarding simples of small projective dimension, or the precyclic ones."""
    from .presentation import precyclic_vertices

    if mode == PRECYCLIC:
        return precyclic_vertices(A)
    pd = simple_pdims(A, bound)
    if mode == DROP_PDIM_LE_1:
        return tuple(v for v, r in pd.items() if not (r.is_finite and r.value <= 1))
    if mode == DROP_FINITE_PDIM:
        return tuple(v for v, r in pd.items() if not r.is_finite)
    raise ValueError(f"unknown mode {mode!r}")
