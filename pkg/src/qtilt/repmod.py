"""Finite-dimensional left modules as quiver representations.

A representation stores one vector space per vertex (by its dimension) and
one matrix per arrow, of shape ``(dim at target, dim at source)``.  The
action of a path walking ``a1`` then ``a2`` is ``M[a2] @ M[a1]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Any, Iterable, Sequence

import numpy as np

from . import linalg as la
from .field import GroundField
from .matrix_algebra import MatrixAlgebra, factor_polynomial, minimal_polynomial, poly_eval
from .presentation import AlgebraPresentation, Path, PresentationError, Sparse

Subspaces = tuple  # one column-basis matrix per vertex


class RelationError(ValueError):
    pass


class DecompositionError(RuntimeError):
    """Idempotent splitting did not succeed; signals a bug or an unlucky field."""


class Representation:
    """A left module over ``algebra`` given by vertex dimensions and arrow matrices."""

    def __init__(self, algebra: AlgebraPresentation, dims: Sequence[int], maps: Sequence[np.ndarray], check: bool = True):
        self.algebra = algebra
        self.dims = tuple(int(d) for d in dims)
        F = algebra.field
        mats = []
        for i, a in enumerate(algebra.arrows):
            M = np.asarray(maps[i])
            if M.shape != (self.dims[a.target], self.dims[a.source]):
                if M.size == 0:
                    M = F.zeros((self.dims[a.target], self.dims[a.source]))
                else:
                    raise ValueError(f"arrow {a.name}: shape {M.shape} != {(self.dims[a.target], self.dims[a.source])}")
            if M.dtype != np.dtype(F.dtype):
                M = F.array(M.tolist()) if M.size else F.zeros(M.shape)
            mats.append(M)
        self.maps = tuple(mats)
        if len(self.dims) != algebra.n or len(self.maps) != len(algebra.arrows):
            raise ValueError("dimension vector or arrow list has the wrong length")
        if check:
            self.check_relations()

    # basic data ---------------------------------------------------------

    @property
    def field(self) -> GroundField:
        return self.algebra.field

    @property
    def dim(self) -> int:
        return sum(self.dims)

    @property
    def dim_vector(self) -> tuple[int, ...]:
        return self.dims

    def is_zero(self) -> bool:
        return self.dim == 0

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for d in self.dims:
            out.append(acc)
            acc += d
        return tuple(out)

    def path_matrix(self, p: Path) -> np.ndarray:
        F = self.field
        M = F.eye(self.dims[p.source])
        for i in p.arrows:
            M = F.matmul(self.maps[i], M)
        return M

    @cached_property
    def basis_actions(self) -> dict[int, np.ndarray]:
        """Action of every normal basis path of the algebra."""
        A = self.algebra
        out: dict[int, np.ndarray] = {}
        F = self.field
        for k, p in enumerate(A.basis):
            if not p.arrows:
                out[k] = F.eye(self.dims[p.source])
            else:
                prefix = Path(p.source, A.arrows[p.arrows[-1]].source, p.arrows[:-1])
                out[k] = F.matmul(self.maps[p.arrows[-1]], out[A.index[prefix]])
        return out

    def element_matrix(self, s: int, t: int, vec: np.ndarray) -> np.ndarray:
        """Action of an algebra element (coordinates over the normal basis) from s to t."""
        F = self.field
        out = F.zeros((self.dims[t], self.dims[s]))
        for k in self.algebra.pair_basis[(s, t)]:
            if vec[k] != 0:
                out = F.reduce(out + vec[k] * self.basis_actions[k])
        return out

    def sparse_matrix(self, expr: Sparse, s: int, t: int) -> np.ndarray:
        F = self.field
        out = F.zeros((self.dims[t], self.dims[s]))
        for p, c in expr.items():
            out = F.reduce(out + c * self.path_matrix(p))
        return out

    def check_relations(self) -> None:
        for k, rel in enumerate(self.algebra.relations):
            p0 = next(iter(rel))
            if not la.is_zero(self.sparse_matrix(rel, p0.source, p0.target)):
                raise RelationError(f"relation {k} does not act as zero")

    def __repr__(self) -> str:
        return f"<module {self.dims} over {self.algebra.name or 'algebra'}>"

    # structure -------------------------------------------------------------

    def radical_subspaces(self) -> Subspaces:
        F = self.field
        out = []
        for v in range(self.algebra.n):
            imgs = [self.maps[i] for i, a in enumerate(self.algebra.arrows) if a.target == v]
            out.append(la.colspace(F, la.hstack(F, imgs, self.dims[v])))
        return tuple(out)

    def socle_subspaces(self) -> Subspaces:
        F = self.field
        out = []
        for v in range(self.algebra.n):
            outs = [self.maps[i] for i, a in enumerate(self.algebra.arrows) if a.source == v]
            out.append(la.nullspace(F, la.vstack(F, outs, self.dims[v])))
        return tuple(out)

    @cached_property
    def _cover_data(self):
        """Top generators and the surjection from their projective cover, per vertex."""
        F, A = self.field, self.algebra
        rad = self.radical_subspaces()
        gens = []  # (vertex, vector)
        for v in range(A.n):
            C = la.complement(F, rad[v], self.dims[v])
            for j in range(C.shape[1]):
                gens.append((v, C[:, j]))
        pi, cols, sel, rinv, ker = [], [], [], [], []
        for w in range(A.n):
            colw = []
            vecs = []
            for k, (v, g) in enumerate(gens):
                for b in A.pair_basis[(v, w)]:
                    colw.append((k, b))
                    vecs.append(F.matmul(self.basis_actions[b], g[:, None])[:, 0])
            P = np.stack(vecs, axis=1) if vecs else F.zeros((self.dims[w], 0))
            J = la.independent_columns(F, P)
            if len(J) != self.dims[w]:
                raise AssertionError("top generators do not generate")
            pi.append(P)
            cols.append(colw)
            sel.append(J)
            rinv.append(la.inverse(F, P[:, J]) if J else F.zeros((0, 0)))
            ker.append(la.nullspace(F, P) if P.shape[1] else F.zeros((0, 0)))
        return gens, pi, cols, sel, rinv, ker

    @property
    def top_generators(self) -> list[tuple[int, np.ndarray]]:
        return self._cover_data[0]

    def top_vector(self) -> tuple[int, ...]:
        out = [0] * self.algebra.n
        for v, _ in self.top_generators:
            out[v] += 1
        return tuple(out)

    def socle_vector(self) -> tuple[int, ...]:
        return tuple(U.shape[1] for U in self.socle_subspaces())

    # serialization -----------------------------------------------------

    def to_json(self, algebra_path: str | None = None) -> dict:
        A, F = self.algebra, self.field
        return {
            "algebra": algebra_path,
            "dims": {A.vertices[v]: d for v, d in enumerate(self.dims)},
            "maps": {a.name: [[F.format(x) for x in row] for row in self.maps[i].tolist()]
                     for i, a in enumerate(A.arrows)},
        }


def module_from_dict(A: AlgebraPresentation, data: Any) -> Representation:
    if not isinstance(data, dict) or not set(data) <= {"algebra", "dims", "maps"}:
        raise PresentationError("module file needs keys algebra, dims, maps")
    F = A.field
    dims = [0] * A.n
    for name, d in data.get("dims", {}).items():
        if not isinstance(d, int) or d < 0:
            raise PresentationError(f"bad dimension {d!r}", f"dims.{name}")
        dims[A.vertex_index(name)] = d
    maps = []
    given = data.get("maps", {})
    unknown = set(given) - {a.name for a in A.arrows}
    if unknown:
        raise PresentationError(f"unknown arrows {sorted(unknown)}", "maps")
    for a in A.arrows:
        shape = (dims[a.target], dims[a.source])
        rows = given.get(a.name)
        if rows is None or shape[0] * shape[1] == 0:
            maps.append(F.zeros(shape))
            continue
        try:
            M = F.array([[str(x) for x in r] for r in rows])
        except ValueError as exc:
            raise PresentationError(str(exc), f"maps.{a.name}") from None
        if M.shape != shape:
            raise PresentationError(f"shape {M.shape} != {shape}", f"maps.{a.name}")
        maps.append(M)
    try:
        return Representation(A, dims, maps)
    except RelationError as exc:
        raise PresentationError(str(exc), "maps") from None


def module_from_text(A: AlgebraPresentation, text: str) -> Representation:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PresentationError(f"JSON syntax error: {exc.msg}", f"line {exc.lineno} column {exc.colno}") from None
    return module_from_dict(A, data)


# ---------------------------------------------------------------------------
# morphisms


class ModuleMorphism:
    """Vertex-wise linear maps ``source -> target`` commuting with every arrow."""

    def __init__(self, source: Representation, target: Representation, mats: Sequence[np.ndarray], check: bool = True):
        if source.algebra is not target.algebra:
            raise ValueError("morphism between modules over different algebras")
        F = source.field
        self.source = source
        self.target = target
        out = []
        for v, M in enumerate(mats):
            shape = (target.dims[v], source.dims[v])
            M = np.asarray(M)
            if M.shape != shape:
                if M.size == 0:
                    M = F.zeros(shape)
                else:
                    raise ValueError(f"vertex {v}: shape {M.shape} != {shape}")
            out.append(M)
        self.mats = tuple(out)
        if check:
            self.check()

    @property
    def field(self) -> GroundField:
        return self.source.field

    def check(self) -> None:
        F = self.field
        for i, a in enumerate(self.source.algebra.arrows):
            lhs = F.matmul(self.target.maps[i], self.mats[a.source])
            rhs = F.matmul(self.mats[a.target], self.source.maps[i])
            if not np.array_equal(lhs, rhs):
                raise ValueError(f"not a module map: square for arrow {a.name} does not commute")

    def __matmul__(self, other: "ModuleMorphism") -> "ModuleMorphism":
        """``self @ other`` = self after other."""
        if other.target is not self.source and other.target.dims != self.source.dims:
            raise ValueError("morphisms are not composable")
        F = self.field
        return ModuleMorphism(other.source, self.target,
                              [F.matmul(a, b) for a, b in zip(self.mats, other.mats)], check=False)

    def __add__(self, other: "ModuleMorphism") -> "ModuleMorphism":
        F = self.field
        return ModuleMorphism(self.source, self.target,
                              [F.reduce(a + b) for a, b in zip(self.mats, other.mats)], check=False)

    def __sub__(self, other: "ModuleMorphism") -> "ModuleMorphism":
        F = self.field
        return ModuleMorphism(self.source, self.target,
                              [F.reduce(a - b) for a, b in zip(self.mats, other.mats)], check=False)

    def scale(self, c) -> "ModuleMorphism":
        F = self.field
        return ModuleMorphism(self.source, self.target, [F.reduce(c * a) for a in self.mats], check=False)

    def is_zero(self) -> bool:
        return all(la.is_zero(M) for M in self.mats)

    def is_injective(self) -> bool:
        return all(la.rank(self.field, M) == M.shape[1] for M in self.mats)

    def is_surjective(self) -> bool:
        return all(la.rank(self.field, M) == M.shape[0] for M in self.mats)

    def is_iso(self) -> bool:
        return all(M.shape[0] == M.shape[1] and la.rank(self.field, M) == M.shape[0] for M in self.mats)

    def inverse(self) -> "ModuleMorphism":
        F = self.field
        return ModuleMorphism(self.target, self.source, [la.inverse(F, M) for M in self.mats], check=False)

    def global_matrix(self) -> np.ndarray:
        return la.block_diag(self.field, list(self.mats))

    def kernel_subspaces(self) -> Subspaces:
        return tuple(la.nullspace(self.field, M) for M in self.mats)

    def image_subspaces(self) -> Subspaces:
        return tuple(la.colspace(self.field, M) for M in self.mats)

    def kernel(self) -> "ModuleMorphism":
        """Inclusion of the kernel."""
        return submodule(self.source, self.kernel_subspaces())

    def image(self) -> "ModuleMorphism":
        """Inclusion of the image into the target."""
        return submodule(self.target, self.image_subspaces())

    def cokernel(self) -> "ModuleMorphism":
        return quotient(self.target, self.image_subspaces())

    def __repr__(self) -> str:
        return f"<map {self.source.dims} -> {self.target.dims}>"


def identity(M: Representation) -> ModuleMorphism:
    F = M.field
    return ModuleMorphism(M, M, [F.eye(d) for d in M.dims], check=False)


def zero_map(M: Representation, N: Representation) -> ModuleMorphism:
    F = M.field
    return ModuleMorphism(M, N, [F.zeros((N.dims[v], M.dims[v])) for v in range(len(M.dims))], check=False)


def zero_module(A: AlgebraPresentation) -> Representation:
    F = A.field
    return Representation(A, [0] * A.n, [F.zeros((0, 0)) for _ in A.arrows], check=False)


# ---------------------------------------------------------------------------
# sub and quotient modules


def closure(M: Representation, U: Subspaces) -> Subspaces:
    """Smallest submodule containing the given vertex subspaces."""
    F = M.field
    A = M.algebra
    cur = [la.colspace(F, U[v]) if U[v].shape[1] else F.zeros((M.dims[v], 0)) for v in range(A.n)]
    changed = True
    while changed:
        changed = False
        for i, a in enumerate(A.arrows):
            if cur[a.source].shape[1] == 0:
                continue
            img = F.matmul(M.maps[i], cur[a.source])
            if not la.contains(F, cur[a.target], img):
                cur[a.target] = la.colspace(F, la.hstack(F, [cur[a.target], img], M.dims[a.target]))
                changed = True
    return tuple(cur)


def submodule(M: Representation, U: Subspaces) -> ModuleMorphism:
    """Inclusion of the submodule with vertex bases ``U`` (columns, assumed closed)."""
    F = M.field
    A = M.algebra
    U = tuple(la.colspace(F, u) if u.shape[1] else F.zeros((M.dims[v], 0)) for v, u in enumerate(U))
    dims = [u.shape[1] for u in U]
    maps = []
    for i, a in enumerate(A.arrows):
        img = F.matmul(M.maps[i], U[a.source])
        if dims[a.target] == 0 or dims[a.source] == 0:
            if not la.is_zero(img):
                raise ValueError("subspaces are not closed under the arrows")
            maps.append(F.zeros((dims[a.target], dims[a.source])))
            continue
        X = la.solve(F, U[a.target], img)
        if X is None:
            raise ValueError("subspaces are not closed under the arrows")
        maps.append(X)
    N = Representation(A, dims, maps, check=False)
    return ModuleMorphism(N, M, list(U), check=False)


def quotient(M: Representation, U: Subspaces) -> ModuleMorphism:
    """Projection onto M / U."""
    F = M.field
    A = M.algebra
    projs, comps = [], []
    for v in range(A.n):
        u = la.colspace(F, U[v]) if U[v].shape[1] else F.zeros((M.dims[v], 0))
        C = la.complement(F, u, M.dims[v])
        full = la.hstack(F, [u, C], M.dims[v])
        inv = la.inverse(F, full) if M.dims[v] else F.zeros((0, 0))
        projs.append(np.ascontiguousarray(inv[u.shape[1]:, :]))
        comps.append(C)
    dims = [C.shape[1] for C in comps]
    maps = [F.matmul(projs[a.target], F.matmul(M.maps[i], comps[a.source])) for i, a in enumerate(A.arrows)]
    Q = Representation(A, dims, maps, check=False)
    return ModuleMorphism(M, Q, projs, check=False)


def intersect_subspaces(F: GroundField, U: Subspaces, V: Subspaces) -> Subspaces:
    return tuple(la.intersect(F, u, v) for u, v in zip(U, V))


def sum_subspaces(F: GroundField, U: Subspaces, V: Subspaces) -> Subspaces:
    return tuple(la.colspace(F, la.hstack(F, [u, v], u.shape[0])) for u, v in zip(U, V))


def subspace_dims(U: Subspaces) -> tuple[int, ...]:
    return tuple(u.shape[1] for u in U)


def preimage_subspaces(f: ModuleMorphism, U: Subspaces) -> Subspaces:
    F = f.field
    return tuple(la.preimage(F, M, u) for M, u in zip(f.mats, U))


def image_of_subspaces(f: ModuleMorphism, U: Subspaces) -> Subspaces:
    F = f.field
    return tuple(la.colspace(F, F.matmul(M, u)) for M, u in zip(f.mats, U))


# ---------------------------------------------------------------------------
# direct sums


@dataclass
class DirectSum:
    module: Representation
    inclusions: list[ModuleMorphism]
    projections: list[ModuleMorphism]


def direct_sum(mods: Sequence[Representation], A: AlgebraPresentation | None = None) -> DirectSum:
    if not mods:
        if A is None:
            raise ValueError("empty direct sum needs the algebra")
        return DirectSum(zero_module(A), [], [])
    A = mods[0].algebra
    F = A.field
    dims = [sum(M.dims[v] for M in mods) for v in range(A.n)]
    maps = [la.block_diag(F, [M.maps[i] for M in mods]) for i in range(len(A.arrows))]
    S = Representation(A, dims, maps, check=False)
    incs, projs = [], []
    offs = [0] * A.n
    for M in mods:
        inc, proj = [], []
        for v in range(A.n):
            I = F.zeros((dims[v], M.dims[v]))
            for k in range(M.dims[v]):
                I[offs[v] + k, k] = F.one()
            inc.append(I)
            proj.append(np.ascontiguousarray(I.T))
            offs[v] += M.dims[v]
        incs.append(ModuleMorphism(M, S, inc, check=False))
        projs.append(ModuleMorphism(S, M, proj, check=False))
    return DirectSum(S, incs, projs)


def map_from_sum(ds: DirectSum, maps: Sequence[ModuleMorphism], target: Representation) -> ModuleMorphism:
    """The map out of a direct sum with the given components."""
    F = target.field
    out = zero_map(ds.module, target)
    for p, f in zip(ds.projections, maps):
        out = out + f @ p
    return out


def map_into_sum(ds: DirectSum, maps: Sequence[ModuleMorphism], source: Representation) -> ModuleMorphism:
    out = zero_map(source, ds.module)
    for i, f in zip(ds.inclusions, maps):
        out = out + i @ f
    return out


def power(M: Representation, k: int) -> DirectSum:
    return direct_sum([M] * k, M.algebra)


# ---------------------------------------------------------------------------
# standard modules


def simple(A: AlgebraPresentation, v) -> Representation:
    v = A.vertex_index(v)
    F = A.field
    dims = [1 if w == v else 0 for w in range(A.n)]
    return Representation(A, dims, [F.zeros((dims[a.target], dims[a.source])) for a in A.arrows], check=False)


def projective(A: AlgebraPresentation, v) -> Representation:
    v = A.vertex_index(v)
    dims = [len(A.pair_basis[(v, t)]) for t in range(A.n)]
    return Representation(A, dims, A.projective_action(v), check=False)


def injective(A: AlgebraPresentation, v) -> Representation:
    v = A.vertex_index(v)
    return dual(projective(A.opposite(), v))


def standard_module(A: AlgebraPresentation, kind: str, v) -> Representation:
    if kind == "simple":
        return simple(A, v)
    if kind == "projective":
        return projective(A, v)
    if kind == "injective":
        return injective(A, v)
    raise ValueError(f"unknown module kind {kind!r}")


def regular(A: AlgebraPresentation) -> DirectSum:
    return direct_sum([projective(A, v) for v in range(A.n)], A)


def dual(M: Representation) -> Representation:
    """K-dual: a module over the opposite algebra."""
    B = M.algebra.opposite()
    return Representation(B, M.dims, [np.ascontiguousarray(m.T) for m in M.maps], check=False)


def dual_map(f: ModuleMorphism, source: Representation | None = None, target: Representation | None = None) -> ModuleMorphism:
    """Transpose ``f``: dual(target) -> dual(source)."""
    src = source if source is not None else dual(f.target)
    tgt = target if target is not None else dual(f.source)
    return ModuleMorphism(src, tgt, [np.ascontiguousarray(m.T) for m in f.mats], check=False)


# ---------------------------------------------------------------------------
# Hom spaces


def hom_basis(M: Representation, N: Representation) -> list[ModuleMorphism]:
    """A basis of Hom(M, N), found by solving for the images of top generators."""
    if M.algebra is not N.algebra:
        raise ValueError("modules over different algebras")
    F = M.field
    A = M.algebra
    gens, pi, cols, sel, rinv, ker = M._cover_data
    if not gens or N.dim == 0:
        return []
    offs, acc = [], 0
    for v, _ in gens:
        offs.append(acc)
        acc += N.dims[v]
    nunk = acc
    if nunk == 0:
        return []
    blocks = []
    for w in range(A.n):
        K = ker[w]
        if K.shape[1] == 0 or N.dims[w] == 0:
            continue
        # for each kernel vector: sum_k (sum_b kappa_{k,b} N_b) x_k = 0
        acts = [N.basis_actions[b] for _, b in cols[w]]
        for j in range(K.shape[1]):
            row = F.zeros((N.dims[w], nunk))
            for r, (k, b) in enumerate(cols[w]):
                c = K[r, j]
                if c != 0:
                    v = gens[k][0]
                    row[:, offs[k]: offs[k] + N.dims[v]] = F.reduce(
                        row[:, offs[k]: offs[k] + N.dims[v]] + c * acts[r])
            blocks.append(row)
    E = la.vstack(F, blocks, nunk)
    S = la.nullspace(F, E)
    out = []
    for j in range(S.shape[1]):
        x = S[:, j]
        out.append(_hom_from_generator_images(M, N, [x[offs[k]: offs[k] + N.dims[gens[k][0]]] for k in range(len(gens))]))
    return out


def _hom_from_generator_images(M: Representation, N: Representation, images: list[np.ndarray]) -> ModuleMorphism:
    F = M.field
    gens, pi, cols, sel, rinv, ker = M._cover_data
    mats = []
    for w in range(M.algebra.n):
        J = sel[w]
        if not J:
            mats.append(F.zeros((N.dims[w], M.dims[w])))
            continue
        Phi = F.zeros((N.dims[w], len(J)))
        for c, r in enumerate(J):
            k, b = cols[w][r]
            Phi[:, c] = F.matmul(N.basis_actions[b], images[k][:, None])[:, 0]
        mats.append(F.matmul(Phi, rinv[w]))
    return ModuleMorphism(M, N, mats, check=False)


def hom_dim(M: Representation, N: Representation) -> int:
    return len(hom_basis(M, N))


def combine(F: GroundField, maps: Sequence[ModuleMorphism], coeffs: Sequence, source=None, target=None) -> ModuleMorphism:
    out = None
    for c, f in zip(coeffs, maps):
        if c == 0:
            continue
        out = f.scale(c) if out is None else out + f.scale(c)
    if out is None:
        return zero_map(source if source is not None else maps[0].source,
                        target if target is not None else maps[0].target)
    return out


def hom_coordinates(basis: Sequence[ModuleMorphism], f: ModuleMorphism) -> np.ndarray | None:
    """Coordinates of ``f`` in a list of morphisms, or ``None`` outside their span."""
    F = f.field
    if not basis:
        return np.zeros(0, dtype=object) if f.is_zero() else None
    B = np.stack([np.concatenate([m.reshape(-1) for m in g.mats]) for g in basis], axis=1)
    v = np.concatenate([m.reshape(-1) for m in f.mats])[:, None]
    if B.shape[0] == 0:
        return F.zeros(len(basis))
    X = la.solve(F, B, v)
    return None if X is None else X[:, 0]


# ---------------------------------------------------------------------------
# covers, envelopes, layers


def projective_cover(M: Representation) -> ModuleMorphism:
    """Minimal surjection from a projective module onto ``M``."""
    A, F = M.algebra, M.field
    gens = M.top_generators
    ds = direct_sum([projective(A, v) for v, _ in gens], A)
    maps = []
    for (v, g) in gens:
        P = projective(A, v)
        maps.append(_map_from_projective(P, v, M, g))
    return map_from_sum(ds, maps, M) if gens else zero_map(ds.module, M)


def map_from_projective(A: AlgebraPresentation, v: int, M: Representation, vec: np.ndarray) -> ModuleMorphism:
    """The map from the projective at ``v`` sending the trivial path to ``vec``."""
    return _map_from_projective(projective(A, v), v, M, vec)


def _map_from_projective(P: Representation, v: int, M: Representation, g: np.ndarray) -> ModuleMorphism:
    A, F = M.algebra, M.field
    mats = []
    for w in range(A.n):
        idx = A.pair_basis[(v, w)]
        cols = [F.matmul(M.basis_actions[b], g[:, None])[:, 0] for b in idx]
        mats.append(np.stack(cols, axis=1) if cols else F.zeros((M.dims[w], 0)))
    return ModuleMorphism(P, M, mats, check=False)


def injective_envelope(M: Representation) -> ModuleMorphism:
    """Minimal injection of ``M`` into an injective module."""
    pi = projective_cover(dual(M))
    return ModuleMorphism(M, dual(pi.source), [np.ascontiguousarray(m.T) for m in pi.mats], check=False)


def syzygy_inclusion(M: Representation) -> ModuleMorphism:
    return projective_cover(M).kernel()


def radical(M: Representation) -> ModuleMorphism:
    return submodule(M, M.radical_subspaces())


def socle(M: Representation) -> ModuleMorphism:
    return submodule(M, M.socle_subspaces())


@dataclass
class Layers:
    top: tuple[int, ...]
    radical_layers: list[tuple[int, ...]]
    socle_layers: list[tuple[int, ...]]
    loewy_length: int


def layers(M: Representation) -> Layers:
    """Dimension vectors of the radical and socle layers."""
    F, A = M.field, M.algebra
    rad_series = [tuple(F.eye(d) for d in M.dims)]
    while any(u.shape[1] for u in rad_series[-1]):
        cur = rad_series[-1]
        nxt = []
        for v in range(A.n):
            imgs = [F.matmul(M.maps[i], cur[a.source]) for i, a in enumerate(A.arrows) if a.target == v]
            nxt.append(la.colspace(F, la.hstack(F, imgs, M.dims[v])))
        rad_series.append(tuple(nxt))
    rl = [tuple(a.shape[1] - b.shape[1] for a, b in zip(x, y)) for x, y in zip(rad_series, rad_series[1:])]
    soc_series = [tuple(F.zeros((d, 0)) for d in M.dims)]
    while sum(u.shape[1] for u in soc_series[-1]) < M.dim:
        cur = soc_series[-1]
        nxt = []
        for v in range(A.n):
            outs = [(i, a) for i, a in enumerate(A.arrows) if a.source == v]
            # x at v with every arrow image inside the previous layer
            X = F.eye(M.dims[v])
            for i, a in outs:
                X = la.intersect(F, X, la.preimage(F, M.maps[i], cur[a.target])) if X.shape[1] else X
            nxt.append(la.colspace(F, X) if X.shape[1] else X)
        soc_series.append(tuple(nxt))
    sl = [tuple(b.shape[1] - a.shape[1] for a, b in zip(x, y)) for x, y in zip(soc_series, soc_series[1:])]
    return Layers(rl[0] if rl else tuple([0] * A.n), rl, sl, len(rl))


def loewy_length(M: Representation) -> int:
    return layers(M).loewy_length


# ---------------------------------------------------------------------------
# endomorphisms, decomposition, isomorphism


def endomorphism_algebra(M: Representation) -> tuple[list[ModuleMorphism], MatrixAlgebra]:
    basis = hom_basis(M, M)
    mats = [f.global_matrix() for f in basis]
    return basis, MatrixAlgebra(M.field, mats)


def is_indecomposable(M: Representation) -> bool:
    if M.dim == 0:
        return False
    basis, E = endomorphism_algebra(M)
    if E.d == 1:
        return True
    R = E.radical()
    return E.d - R.shape[1] == 1 or _local_by_sampling(M, basis, E, R=R)


def _local_by_sampling(M, basis, E, trials: int = 64, R=None) -> bool:
    try:
        return len(_split_once(M, basis, E, trials, R=R)) == 1
    except DecompositionError:
        return False


def _split_once(M: Representation, basis, E: MatrixAlgebra, trials: int = 64, seed: int = 12345, R=None):
    """Either ``[M]`` when M is local, or two endomorphisms whose kernels split M.

    Candidates are examined through their action on ``End/rad End``, which is
    much smaller than M.  A reducible minimal polynomial there, ``f * g`` with
    coprime factors, gives the Fitting pieces ``ker f(X)^n`` and ``ker g(X)^n``.
    """
    F = M.field
    R = E.radical() if R is None else R
    top = E.d - R.shape[1]
    if top == 1:
        return [M]
    C = la.complement(F, R, E.d)
    Binv = la.inverse(F, la.hstack(F, [R, C], E.d))[R.shape[1]:]
    tops = [E.element(C[:, k]) for k in range(top)]
    rng = np.random.default_rng(seed)
    # basis elements and sparse 0/1 combinations first: over Q a dense
    # element of a matrix block has an irreducible minimal polynomial
    for t in range(trials + E.d):
        if t < E.d:
            c = F.zeros(E.d)
            c[t] = F.one()
        elif t < E.d + trials // 2:
            c = F.array(rng.integers(0, 2, size=E.d).tolist())
        else:
            c = F.random_array(rng, (E.d,), -50, 50)
        X = E.element(c)
        act = np.stack([F.matmul(Binv, E.coords(F.matmul(X, Y))[:, None])[:, 0] for Y in tops], axis=1)
        facs = factor_polynomial(F, minimal_polynomial(F, act))
        if len(facs) >= 2:
            f0 = facs[0][0]
            rest = [F.one()]
            for f, _ in facs[1:]:
                rest = _polymul(F, rest, f)
            n = M.dim
            return [la.matpow(F, poly_eval(F, f0, X), n), la.matpow(F, poly_eval(F, rest, X), n)]
        if len(facs[0][0]) - 1 == top:
            return [M]
    raise DecompositionError(f"no splitting element found in {trials} trials (top dimension {top})")


def _polymul(F, a, b):
    out = [F.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(x, y))
    return out


def _global_to_subspaces(M: Representation, X: np.ndarray) -> Subspaces:
    """Kernel of a block-diagonal endomorphism matrix, per vertex."""
    F = M.field
    out = []
    for v, d in enumerate(M.dims):
        o = M.offsets[v]
        out.append(la.nullspace(F, X[o:o + d, o:o + d]))
    return tuple(out)


@dataclass
class DecompositionReport:
    """Indecomposable summands with witnesses ``M = ⊕ image(inclusions[k])``.

    ``classes`` groups summand indices by isomorphism class; ``summands``
    lists one representative per class with its multiplicity.
    """

    module: Representation
    pieces: list[Representation]
    inclusions: list[ModuleMorphism]
    projections: list[ModuleMorphism]
    classes: list[list[int]] = dc_field(default_factory=list)

    @property
    def summands(self) -> list[tuple[Representation, int]]:
        return [(self.pieces[c[0]], len(c)) for c in self.classes]


def _peel_projective(M: Representation, tries: int = 8, seed: int = 0):
    """A projective summand as ``(inclusion, inclusion of a complement)``, or ``None``.

    A top element ``m`` at ``v`` gives ``P_v -> M``; it is split exactly when a
    retraction exists, which is a linear condition on Hom(M, P_v).  This is
    far cheaper than idempotent splitting when M has many projective summands.
    """
    A, F = M.algebra, M.field
    rng = np.random.default_rng(seed)
    gens = M.top_generators
    for v in sorted({w for w, _ in gens}):
        P = projective(A, v)
        if P.dims[v] > M.dims[v] or any(P.dims[w] > M.dims[w] for w in range(A.n)):
            continue
        H = None
        vecs = [g for w, g in gens if w == v]
        cands = vecs + [F.reduce(sum(F.random_scalar(rng) * g for g in vecs)) for _ in range(tries)]
        for m in cands:
            phi = _map_from_projective(P, v, M, m)
            if not phi.is_injective():
                continue
            if H is None:
                H = hom_basis(M, P)
                if not H:
                    break
            c = hom_coordinates([h @ phi for h in H], identity(P))
            if c is None:
                continue
            r = combine(F, H, c, M, P)
            return phi, r.kernel()
    return None


def _split_pieces(M: Representation, trials: int) -> list[ModuleMorphism]:
    """Inclusions of indecomposable summands of M (recursively)."""
    if M.dim == 0:
        return []
    peeled = _peel_projective(M)
    if peeled is not None:
        phi, rest = peeled
        if rest.source.dim == 0:
            return [phi]
        return [phi] + [rest @ sub for sub in _split_pieces(rest.source, trials)]
    basis, E = endomorphism_algebra(M)
    parts = _split_once(M, basis, E, trials)
    if len(parts) == 1:
        return [identity(M)]
    out = []
    for X in parts:
        inc = submodule(M, _global_to_subspaces(M, X))
        for sub in _split_pieces(inc.source, trials):
            out.append(inc @ sub)
    return out


def decompose(M: Representation, trials: int = 64) -> DecompositionReport:
    incs = _split_pieces(M, trials)
    F = M.field
    # projections: invert the assembled isomorphism
    if incs:
        ds = direct_sum([i.source for i in incs], M.algebra)
        iso = map_from_sum(ds, incs, M)
        inv = iso.inverse()
        projs = [p @ inv for p in ds.projections]
    else:
        projs = []
    pieces = [i.source for i in incs]
    classes: list[list[int]] = []
    for k, X in enumerate(pieces):
        for c in classes:
            if is_isomorphic(pieces[c[0]], X)[0]:
                c.append(k)
                break
        else:
            classes.append([k])
    return DecompositionReport(M, pieces, incs, projs, classes)


def is_isomorphic(M: Representation, N: Representation, seed: int = 0) -> tuple[bool, ModuleMorphism | None]:
    """Whether M ≅ N, with an isomorphism as witness."""
    if M.algebra is not N.algebra:
        raise ValueError("modules over different algebras")
    if M.dims != N.dims:
        return False, None
    if M.dim == 0:
        return True, zero_map(M, N)
    F = M.field
    basis = hom_basis(M, N)
    if not basis:
        return False, None
    rng = np.random.default_rng(seed)
    trials = 32 if F.characteristic else 4
    for _ in range(trials):
        if F.characteristic:
            c = F.random_array(rng, (len(basis),))
        else:
            c = F.array(rng.integers(-10**6, 10**6, size=len(basis)).tolist())
        f = combine(F, basis, c)
        if f.is_iso():
            return True, f
    for f in basis:
        if f.is_iso():
            return True, f
    return _iso_by_decomposition(M, N)


def _iso_by_decomposition(M: Representation, N: Representation) -> tuple[bool, ModuleMorphism | None]:
    dm, dn = decompose(M), decompose(N)
    if len(dm.pieces) != len(dn.pieces):
        return False, None
    used = [False] * len(dn.pieces)
    comps = []
    for k, X in enumerate(dm.pieces):
        for j, Y in enumerate(dn.pieces):
            if used[j] or X.dims != Y.dims:
                continue
            w = next((f for f in hom_basis(X, Y) if f.is_iso()), None)
            if w is not None:
                used[j] = True
                comps.append(dn.inclusions[j] @ w @ dm.projections[k])
                break
        else:
            return False, None
    total = comps[0]
    for c in comps[1:]:
        total = total + c
    return True, total


def random_module(A: AlgebraPresentation, rng: np.random.Generator, max_dim: int = 6) -> Representation:
    """A random quotient of a random sum of projectives, truncated to a manageable size."""
    F = A.field
    for _ in range(20):
        k = int(rng.integers(1, 3))
        verts = [int(rng.integers(A.n)) for _ in range(k)]
        ds = direct_sum([projective(A, v) for v in verts], A)
        P = ds.module
        # random submodule generated by a few random vectors
        U = []
        for v in range(A.n):
            m = int(rng.integers(0, 2)) if P.dims[v] else 0
            U.append(F.random_array(rng, (P.dims[v], m)))
        sub = closure(P, tuple(U))
        q = quotient(P, sub)
        Q = q.target
        while Q.dim > max_dim:
            soc = Q.socle_subspaces()
            v = max(range(A.n), key=lambda w: soc[w].shape[1])
            U = tuple(soc[w][:, :1] if w == v else F.zeros((Q.dims[w], 0)) for w in range(A.n))
            Q = quotient(Q, U).target
        if Q.dim:
            return Q
    return simple(A, 0)
