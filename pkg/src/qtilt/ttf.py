"""The torsion theories attached to an idempotent ``e``.

For a set of vertices ``e`` the functors here are:

* ``Δ(M)``: the largest submodule killed by ``e`` (supported off ``e``);
* ``∇(M)``: the submodule generated by the components of ``M`` at ``e``;
* ``core(M) = ∇(M) / Δ(∇(M))``;
* ``restrict(M) = eM`` over the corner algebra and its left adjoint ``induce``;
* the localization ``M -> M_σ`` built from an injective envelope.

Vertex sets are tuples of vertex indices of the ambient algebra.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg as la
from .presentation import AlgebraPresentation, CornerData, Path, corner, parse_idempotent
from .repmod import (
    ModuleMorphism,
    Representation,
    Subspaces,
    _hom_from_generator_images,
    _map_from_projective,
    closure,
    direct_sum,
    hom_basis,
    injective_envelope,
    projective,
    quotient,
    submodule,
    zero_map,
)

_CORNERS: "weakref.WeakKeyDictionary[AlgebraPresentation, dict]" = weakref.WeakKeyDictionary()
_PARENTS: "weakref.WeakKeyDictionary[AlgebraPresentation, CornerData]" = weakref.WeakKeyDictionary()


def vertex_set(A: AlgebraPresentation, e: Sequence[int | str]) -> tuple[int, ...]:
    return parse_idempotent(A, e)


def corner_of(A: AlgebraPresentation, e: Sequence[int | str]) -> CornerData:
    """``corner(A, e)``, cached per algebra and vertex set."""
    verts = vertex_set(A, e)
    cache = _CORNERS.setdefault(A, {})
    if verts not in cache:
        C = corner(A, verts)
        cache[verts] = C
        _PARENTS[C.algebra] = C
    return cache[verts]


def corner_data_of(B: AlgebraPresentation) -> CornerData:
    """The corner data of an algebra produced by :func:`corner_of`."""
    try:
        return _PARENTS[B]
    except KeyError:
        raise ValueError("algebra was not built as a corner") from None


# ---------------------------------------------------------------------------
# Δ, ∇, core


def delta_subspaces(M: Representation, e: Sequence[int]) -> Subspaces:
    """Largest arrow-closed family of subspaces vanishing at the vertices of ``e``."""
    F, A = M.field, M.algebra
    es = set(e)
    cur = [F.zeros((d, 0)) if v in es else F.eye(d) for v, d in enumerate(M.dims)]
    changed = True
    while changed:
        changed = False
        for i, a in enumerate(A.arrows):
            U = cur[a.source]
            if U.shape[1] == 0:
                continue
            img = F.matmul(M.maps[i], U)
            if la.contains(F, cur[a.target], img):
                continue
            keep = la.preimage(F, F.matmul(M.maps[i], U), cur[a.target])
            cur[a.source] = la.colspace(F, F.matmul(U, keep)) if keep.shape[1] else F.zeros((M.dims[a.source], 0))
            changed = True
    return tuple(cur)


def nabla_subspaces(M: Representation, e: Sequence[int]) -> Subspaces:
    F = M.field
    es = set(e)
    gens = tuple(F.eye(d) if v in es else F.zeros((d, 0)) for v, d in enumerate(M.dims))
    return closure(M, gens)


def delta(M: Representation, e: Sequence[int]) -> ModuleMorphism:
    """Inclusion of Δ(M)."""
    return submodule(M, delta_subspaces(M, e))


def nabla(M: Representation, e: Sequence[int]) -> ModuleMorphism:
    """Inclusion of ∇(M)."""
    return submodule(M, nabla_subspaces(M, e))


@dataclass(frozen=True)
class TorsionParts:
    delta: ModuleMorphism  # Δ(M) -> M
    nabla: ModuleMorphism  # ∇(M) -> M
    core_projection: ModuleMorphism  # ∇(M) -> core(M)

    @property
    def core(self) -> Representation:
        return self.core_projection.target


def torsion_parts(M: Representation, e: Sequence[int]) -> TorsionParts:
    e = vertex_set(M.algebra, e)
    d = delta(M, e)
    n = nabla(M, e)
    N = n.source
    return TorsionParts(d, n, quotient(N, delta_subspaces(N, e)))


def core(M: Representation, e: Sequence[int]) -> Representation:
    return torsion_parts(M, e).core


def torsionfree_quotient(M: Representation, e: Sequence[int]) -> ModuleMorphism:
    """Projection ``M -> M / Δ(M)``."""
    return quotient(M, delta_subspaces(M, vertex_set(M.algebra, e)))


# ---------------------------------------------------------------------------
# restriction and induction


def restrict(M: Representation, e: Sequence[int]) -> Representation:
    """``eM`` as a module over the corner algebra."""
    C = corner_of(M.algebra, e)
    dims = [M.dims[v] for v in C.vertices]
    maps = [M.path_matrix(p) for p in C.arrow_paths]
    return Representation(C.algebra, dims, maps, check=False)


def restrict_map(f: ModuleMorphism, e: Sequence[int], source: Representation | None = None,
                 target: Representation | None = None) -> ModuleMorphism:
    C = corner_of(f.source.algebra, e)
    src = source if source is not None else restrict(f.source, e)
    tgt = target if target is not None else restrict(f.target, e)
    return ModuleMorphism(src, tgt, [f.mats[v] for v in C.vertices], check=False)


@dataclass(frozen=True)
class Induced:
    """``induce(X)`` as a quotient of a sum of projectives ``Λe_k``.

    ``projection`` maps the sum onto the induced module; block ``k`` of the
    sum corresponds to the top generator ``k`` of ``X``.
    """

    source: Representation  # the corner module X
    corner: CornerData
    cover: object  # DirectSum of A-projectives
    projection: ModuleMorphism

    @property
    def module(self) -> Representation:
        return self.projection.target


def _embedded_element(C: CornerData, c: int, w: int, coeffs: dict[int, object]) -> np.ndarray:
    """Value in the A-projective at C.vertices[c], vertex C.vertices[w], of a corner combination."""
    A, B = C.parent, C.algebra
    F = A.field
    s, t = C.vertices[c], C.vertices[w]
    pos = {A.basis[b]: k for k, b in enumerate(A.pair_basis[(s, t)])}
    out = F.zeros(len(pos))
    for b, k in coeffs.items():
        if k == 0:
            continue
        for p, d in C.embedding[B.basis[b]].items():
            out[pos[p]] = F.add(out[pos[p]], F.mul(k, d))
    return out


def induce(X: Representation, e: Sequence[int] | None = None) -> Induced:
    """``Λe ⊗ X`` as the cokernel of the induced projective presentation of ``X``.

    ``X`` must be a module over an algebra built by :func:`corner_of`.
    """
    C = corner_data_of(X.algebra)
    if e is not None and vertex_set(C.parent, e) != C.vertices:
        raise ValueError("idempotent does not match the corner of the module")
    A = C.parent
    F = A.field
    gens, pi, cols, sel, rinv, ker = X._cover_data
    ds = direct_sum([projective(A, C.vertices[c]) for c, _ in gens], A)
    P = ds.module
    U = [F.zeros((d, 0)) for d in P.dims]
    for w in range(C.algebra.n):
        K = ker[w]
        t = C.vertices[w]
        for j in range(K.shape[1]):
            vec = F.zeros(P.dims[t])
            per_gen: dict[int, dict[int, object]] = {}
            for r, (k, b) in enumerate(cols[w]):
                if K[r, j] != 0:
                    per_gen.setdefault(k, {})[b] = K[r, j]
            for k, coeffs in per_gen.items():
                piece = _embedded_element(C, gens[k][0], w, coeffs)
                vec = F.reduce(vec + ds.inclusions[k].mats[t] @ piece) if piece.size else vec
            U[t] = np.concatenate([U[t], vec[:, None]], axis=1)
    sub = closure(P, tuple(U))
    return Induced(X, C, ds, quotient(P, sub))


def induce_module(X: Representation, e: Sequence[int] | None = None) -> Representation:
    return induce(X, e).module


def descend(q: ModuleMorphism, phi: ModuleMorphism) -> ModuleMorphism:
    """The map ``ψ`` on ``q.target`` with ``ψ ∘ q = φ`` (``q`` surjective, ``φ`` kills ker q)."""
    F = q.field
    mats = []
    for Q, P in zip(q.mats, phi.mats):
        if Q.shape[0] == 0:
            mats.append(F.zeros((P.shape[0], 0)))
            continue
        R = la.solve(F, Q, F.eye(Q.shape[0]))
        if R is None:
            raise ValueError("map to descend through is not surjective")
        mats.append(F.matmul(P, R))
    out = ModuleMorphism(q.target, phi.target, mats, check=False)
    for Q, P, D in zip(q.mats, phi.mats, out.mats):
        if not np.array_equal(F.matmul(D, Q), P):
            raise ValueError("map does not vanish on the kernel")
    return out


def induce_map(g: ModuleMorphism, e: Sequence[int] | None = None, src: Induced | None = None, tgt: Induced | None = None) -> ModuleMorphism:
    """``induce(g) : induce(X) -> induce(Y)``, obtained by lifting generators."""
    src = src if src is not None else induce(g.source, e)
    tgt = tgt if tgt is not None else induce(g.target, e)
    C = src.corner
    F = g.field
    X, Y = g.source, g.target
    ygens, ypi, ycols, _, _, _ = Y._cover_data
    blocks = []
    for k, (c, x) in enumerate(X.top_generators):
        v = C.vertices[c]
        img = F.matmul(g.mats[c], x[:, None])
        P = ypi[c]
        if P.shape[1] == 0:
            coeffs = F.zeros((0, 1))
        else:
            coeffs = la.solve(F, P, img)
        vec = F.zeros(tgt.cover.module.dims[v])
        per_gen: dict[int, dict[int, object]] = {}
        for r, (l, b) in enumerate(ycols[c]):
            if coeffs[r, 0] != 0:
                per_gen.setdefault(l, {})[b] = coeffs[r, 0]
        for l, cs in per_gen.items():
            piece = _embedded_element(C, ygens[l][0], c, cs)
            vec = F.reduce(vec + F.matmul(tgt.cover.inclusions[l].mats[v], piece[:, None])[:, 0])
        target_vec = F.matmul(tgt.projection.mats[v], vec[:, None])[:, 0]
        blocks.append(_map_from_projective(src.cover.inclusions[k].source, v, tgt.module, target_vec))
    phi = zero_map(src.cover.module, tgt.module)
    for p, b in zip(src.cover.projections, blocks):
        phi = phi + b @ p
    return descend(src.projection, phi)


def _trivial_position(A: AlgebraPresentation, v: int) -> int:
    return A.pair_basis[(v, v)].index(A.index[Path(v, v, ())])


def unit(X: Representation, e: Sequence[int] | None = None, ind: Induced | None = None) -> ModuleMorphism:
    """``X -> restrict(induce(X))``, an isomorphism."""
    ind = ind if ind is not None else induce(X, e)
    C = ind.corner
    R = restrict(ind.module, C.vertices)
    F = X.field
    images = []
    for k, (c, _) in enumerate(X.top_generators):
        v = C.vertices[c]
        vec = ind.cover.inclusions[k].mats[v][:, [_trivial_position(C.parent, v)]]
        images.append(F.matmul(ind.projection.mats[v], vec)[:, 0])
    return _hom_from_generator_images(X, R, images)


def counit(M: Representation, e: Sequence[int], ind: Induced | None = None) -> ModuleMorphism:
    """``induce(restrict(M)) -> M``; its image is ∇(M)."""
    e = vertex_set(M.algebra, e)
    X = restrict(M, e)
    ind = ind if ind is not None else induce(X, e)
    C = ind.corner
    blocks = []
    for k, (c, x) in enumerate(X.top_generators):
        blocks.append(_map_from_projective(ind.cover.inclusions[k].source, C.vertices[c], M, x))
    phi = zero_map(ind.cover.module, M)
    for p, b in zip(ind.cover.projections, blocks):
        phi = phi + b @ p
    return descend(ind.projection, phi)


# ---------------------------------------------------------------------------
# localization


@dataclass(frozen=True)
class GiraudObject:
    """``M_σ`` with the unit ``μ: M -> M_σ`` and ``M_σ`` inside ``E(M/Δ(M))``."""

    unit: ModuleMorphism
    inclusion: ModuleMorphism

    @property
    def module(self) -> Representation:
        return self.unit.target


def sigma(M: Representation, e: Sequence[int]) -> GiraudObject:
    e = vertex_set(M.algebra, e)
    F = M.field
    q = torsionfree_quotient(M, e)
    iota = injective_envelope(q.target)
    c = iota.cokernel()
    D = delta_subspaces(c.target, e)
    pre = tuple(la.preimage(F, cm, d) for cm, d in zip(c.mats, D))
    j = submodule(iota.target, pre)
    base = iota @ q
    mats = []
    for J, B in zip(j.mats, base.mats):
        if J.shape[1] == 0:
            mats.append(F.zeros((0, B.shape[1])))
        else:
            mats.append(la.solve(F, J, B))
    mu = ModuleMorphism(M, j.source, mats, check=False)
    return GiraudObject(mu, j)


@dataclass(frozen=True)
class TTFClass:
    in_C: bool
    in_T: bool
    in_F: bool
    in_G: bool


def classify(M: Representation, e: Sequence[int]) -> TTFClass:
    e = vertex_set(M.algebra, e)
    d = sum(u.shape[1] for u in delta_subspaces(M, e))
    n = sum(u.shape[1] for u in nabla_subspaces(M, e))
    in_G = d == 0 and sigma(M, e).unit.is_iso()
    return TTFClass(n == M.dim, d == M.dim, d == 0, in_G)


# ---------------------------------------------------------------------------
# pullbacks and maximal Δ-extensions


@dataclass(frozen=True)
class Pullback:
    module: Representation
    first: ModuleMorphism  # P -> X
    second: ModuleMorphism  # P -> Y


def pullback(f: ModuleMorphism, g: ModuleMorphism) -> Pullback:
    """Pullback of ``f: X -> Z`` and ``g: Y -> Z``."""
    ds = direct_sum([f.source, g.source])
    h = f @ ds.projections[0] - g @ ds.projections[1]
    k = h.kernel()
    return Pullback(k.source, ds.projections[0] @ k, ds.projections[1] @ k)


def factor_through(f: ModuleMorphism, g: ModuleMorphism) -> ModuleMorphism | None:
    """Some ``h`` with ``g ∘ h = f`` (``f: X -> Z``, ``g: Y -> Z``), or ``None``."""
    F = f.field
    basis = hom_basis(f.source, g.source)
    if not basis:
        return zero_map(f.source, g.source) if f.is_zero() else None
    cols = [np.concatenate([m.reshape(-1) for m in (g @ b).mats]) for b in basis]
    rhs = np.concatenate([m.reshape(-1) for m in f.mats])
    if rhs.size == 0:
        return zero_map(f.source, g.source)
    x = la.solve(F, np.stack(cols, axis=1), rhs[:, None])
    if x is None:
        return None
    out = zero_map(f.source, g.source)
    for c, b in zip(x[:, 0], basis):
        if c != 0:
            out = out + b.scale(c)
    return out


@dataclass(frozen=True)
class DeltaExtension:
    """An essential extension ``embedding: M -> N`` with torsion cokernel and ``morphism: N -> Y``."""

    embedding: ModuleMorphism
    morphism: ModuleMorphism

    @property
    def module(self) -> Representation:
        return self.embedding.target


class TorsionError(ValueError):
    pass


def max_delta_extension(f: ModuleMorphism, e: Sequence[int]) -> DeltaExtension:
    """The largest essential Δ-extension of ``f: M -> Y`` (both torsionfree).

    It is the pullback of ``f_σ: M_σ -> Y_σ`` along the unit ``Y -> Y_σ``.
    """
    e = vertex_set(f.source.algebra, e)
    M, Y = f.source, f.target
    if any(u.shape[1] for u in delta_subspaces(M, e)):
        raise TorsionError("domain has nonzero torsion")
    if any(u.shape[1] for u in delta_subspaces(Y, e)):
        raise TorsionError("target has nonzero torsion")
    sM, sY = sigma(M, e), sigma(Y, e)
    f_sigma = extend_along(sY.unit @ f, sM.unit)
    if f_sigma is None:
        raise AssertionError("map does not extend to the localization")
    pb = pullback(f_sigma, sY.unit)
    P = pb.module
    F = f.field
    # m -> (μ_M m, f m), solved inside P ⊆ M_σ ⊕ Y
    incl = _pullback_inclusion(pb)
    emb_mats = []
    for v in range(M.algebra.n):
        stacked = la.vstack(F, [sM.unit.mats[v], f.mats[v]], M.dims[v])
        if P.dims[v] == 0:
            emb_mats.append(F.zeros((0, M.dims[v])))
            continue
        emb_mats.append(la.solve(F, incl[v], stacked))
    emb = ModuleMorphism(M, P, emb_mats, check=False)
    return DeltaExtension(emb, pb.second)


def _pullback_inclusion(pb: Pullback) -> list[np.ndarray]:
    F = pb.module.field
    return [la.vstack(F, [a, b], a.shape[1]) for a, b in zip(pb.first.mats, pb.second.mats)]


def extend_along(f: ModuleMorphism, mu: ModuleMorphism) -> ModuleMorphism | None:
    """Some ``h`` with ``h ∘ mu = f`` (``mu: M -> N``, ``f: M -> Z``), or ``None``."""
    F = f.field
    basis = hom_basis(mu.target, f.target)
    if not basis:
        return zero_map(mu.target, f.target) if f.is_zero() else None
    cols = [np.concatenate([m.reshape(-1) for m in (b @ mu).mats]) for b in basis]
    rhs = np.concatenate([m.reshape(-1) for m in f.mats])
    if rhs.size == 0:
        return basis[0].scale(0)
    x = la.solve(F, np.stack(cols, axis=1), rhs[:, None])
    if x is None:
        return None
    out = zero_map(mu.target, f.target)
    for c, b in zip(x[:, 0], basis):
        if c != 0:
            out = out + b.scale(c)
    return out


def is_essential(emb: ModuleMorphism) -> bool:
    """Whether the image of an injective map contains the socle of its target."""
    F = emb.field
    soc = emb.target.socle_subspaces()
    return all(la.contains(F, m, s) for m, s in zip(emb.mats, soc))
