"""Brute-force cross-checks over small prime fields.

Indecomposables of bounded dimension are enumerated exhaustively; an
approximation is then tested by asking every enumerated module of finite
projective dimension to factor through it.  All claims are relative to the
dimension bound of the catalog.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg as la
from .homology import PdimResult, default_bound, pdim
from .presentation import AlgebraPresentation, Path
from .repmod import (
    ModuleMorphism,
    Representation,
    direct_sum,
    hom_basis,
    is_indecomposable,
    is_isomorphic,
    map_from_sum,
    module_from_dict,
    simple,
    zero_module,
)
from .tilting import ApproximationResult, right_minimal_version

DEFAULT_CAP = 8


class EnumerationError(ValueError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    module: Representation
    pdim: PdimResult


@dataclass(frozen=True)
class EnumerationCatalog:
    """Indecomposables of total dimension at most ``bound``, one per iso class."""

    algebra: AlgebraPresentation
    bound: int
    entries: tuple[CatalogEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def modules(self) -> list[Representation]:
        return [x.module for x in self.entries]

    @property
    def finite(self) -> list[Representation]:
        return [x.module for x in self.entries if x.pdim.is_finite]

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra.content_hash(),
            "bound": self.bound,
            "entries": [{"module": x.module.to_json(), "pdim": x.pdim.to_json()} for x in self.entries],
        }


def _sort_key(M: Representation):
    return (M.dim, M.dims, tuple(tuple(int(v) for v in m.reshape(-1)) for m in M.maps))


def _ideal_generators(A: AlgebraPresentation) -> list[dict[Path, object]]:
    gens = [dict(r) for r in A.relations]
    F = A.field
    for p in A.quiver.all_paths(A.L + 1):
        if len(p.arrows) == A.L + 1:
            gens.append({p: F.one()})
    return gens


def _ext_classes(X: Representation, i: int, gens) -> np.ndarray:
    """Cocycle representatives of a basis of Ext^1(X, S_i), as columns.

    A cocycle is a row ``c_a`` on ``X_{s(a)}`` for each arrow ``a`` ending at
    ``i``, stacked in arrow order; coboundaries are ``h X_a``.
    """
    A, F = X.algebra, X.field
    into = [k for k, a in enumerate(A.arrows) if a.target == i]
    offs, acc = {}, 0
    for k in into:
        offs[k] = acc
        acc += X.dims[A.arrows[k].source]
    nvar = acc
    if nvar == 0:
        return F.zeros((0, 0))
    # relation constraints: sum_p coeff * c_{last(p)} X_{prefix(p)} = 0
    rows = []
    for rel in gens:
        if next(iter(rel)).target != i:
            continue
        s = next(iter(rel)).source
        block = F.zeros((X.dims[s], nvar))
        for p, coeff in rel.items():
            last = p.arrows[-1]
            prefix = Path(p.source, A.arrows[last].source, p.arrows[:-1])
            P = X.path_matrix(prefix)
            o = offs[last]
            d = X.dims[A.arrows[last].source]
            block[:, o:o + d] = F.reduce(block[:, o:o + d] + coeff * P.T)
        rows.append(block)
    Z = la.nullspace(F, np.concatenate(rows, axis=0)) if rows else F.eye(nvar)
    B = F.zeros((nvar, X.dims[i]))
    for k in into:
        o = offs[k]
        B[o:o + X.dims[A.arrows[k].source], :] = X.maps[k].T
    # coboundaries are cocycles; representatives of Z/B span a complement of B in Z
    return _complement_within(F, Z, la.intersect(F, Z, la.colspace(F, B)))


def _row_echelon_bases(F, m: int, e: int):
    """Bases (m x e, reduced row echelon) of the m-dimensional subspaces of F^e."""
    for pivots in itertools.combinations(range(e), m):
        free = [(r, c) for r in range(m) for c in range(pivots[r] + 1, e) if c not in pivots]
        for vals in itertools.product(F.elements(), repeat=len(free)):
            M = F.zeros((m, e))
            for r, c in enumerate(pivots):
                M[r, c] = F.one()
            for (r, c), v in zip(free, vals):
                M[r, c] = v
            yield M


def _extensions(parts: list[Representation], i: int, gens, classes: dict) -> list[Representation]:
    """Extensions ``0 -> S_i -> M -> ⊕ parts -> 0`` that are not split on any summand.

    For each distinct part ``X`` of multiplicity ``m`` the ``m`` copies get a
    basis of an ``m``-dimensional subspace of Ext^1(X, S_i); anything else
    splits off a summand after a change of basis of ``X^m``.
    """
    A, F = parts[0].algebra, parts[0].field
    groups: list[tuple[Representation, int]] = []
    for X in parts:
        if groups and groups[-1][0] is X:
            groups[-1] = (X, groups[-1][1] + 1)
        else:
            groups.append((X, 1))
    choices = []
    for X, m in groups:
        key = (id(X), i)
        if key not in classes:
            classes[key] = (X, _ext_classes(X, i, gens))
        W = classes[key][1]
        if W.shape[1] < m:
            return []
        choices.append([[F.reduce(W @ row) for row in E] for E in _row_echelon_bases(F, m, W.shape[1])])
    N = direct_sum(parts, A).module if len(parts) > 1 else parts[0]
    out = []
    for combo in itertools.product(*choices):
        cocycles = [c for block in combo for c in block]
        out.append(_glue(N, parts, i, cocycles))
    return out


def _complement_within(F, Z: np.ndarray, U: np.ndarray) -> np.ndarray:
    """Columns extending a basis of ``U`` (inside ``Z``) to a basis of ``Z``."""
    cur = U
    out = []
    for j in range(Z.shape[1]):
        trial = la.hstack(F, [cur, Z[:, j:j + 1]], Z.shape[0])
        if la.rank(F, trial) > cur.shape[1]:
            cur = la.colspace(F, trial)
            out.append(Z[:, j])
    return np.stack(out, axis=1) if out else F.zeros((Z.shape[0], 0))


def _glue(N: Representation, parts: list[Representation], i: int, cocycles: list[np.ndarray]) -> Representation:
    """The module ``N ⊕ S_i`` with the part cocycles placed in the row of ``S_i``."""
    A, F = N.algebra, N.field
    dims = list(N.dims)
    dims[i] += 1
    maps = [F.zeros((dims[a.target], dims[a.source])) for a in A.arrows]
    for k, a in enumerate(A.arrows):
        maps[k][: N.dims[a.target], : N.dims[a.source]] = N.maps[k]
    base = [0] * A.n
    for X, c in zip(parts, cocycles):
        o = 0
        for k, a in enumerate(A.arrows):
            if a.target != i:
                continue
            d = X.dims[a.source]
            maps[k][N.dims[i], base[a.source]:base[a.source] + d] = c[o:o + d]
            o += d
        base = [b + d for b, d in zip(base, X.dims)]
    return Representation(A, dims, maps)


def _sums_of_dimension(indec: list[Representation], d: int) -> list[list[Representation]]:
    """Multisets of catalog modules with total dimension ``d`` (non-decreasing index order)."""
    out = []

    def rec(start, left, acc):
        if left == 0:
            out.append(list(acc))
            return
        for k in range(start, len(indec)):
            if indec[k].dim <= left:
                acc.append(indec[k])
                rec(k, left - indec[k].dim, acc)
                acc.pop()

    rec(0, d, [])
    return out


def enumerate_reps(A: AlgebraPresentation, bound: int, cap: int = DEFAULT_CAP, pdim_bound: int | None = None,
                   cache_dir: str | None = None) -> EnumerationCatalog:
    """All indecomposable modules of total dimension at most ``bound``, up to isomorphism."""
    F = A.field
    if not F.is_finite:
        raise EnumerationError("enumeration needs a finite field")
    if bound > cap:
        raise EnumerationError(f"bound {bound} exceeds the cap {cap}")
    path = None
    if cache_dir is not None:
        path = os.path.join(cache_dir, f"catalog-{A.content_hash()[:16]}-{bound}.json")
        if os.path.exists(path):
            return _load(A, bound, path, pdim_bound)
    gens = _ideal_generators(A)
    indec: list[Representation] = [simple(A, v) for v in range(A.n)] if bound >= 1 else []
    classes: dict = {}
    for d in range(2, bound + 1):
        found: list[Representation] = []
        for parts in _sums_of_dimension(indec, d - 1):
            for i in range(A.n):
                for M in _extensions(parts, i, gens, classes):
                    if not is_indecomposable(M):
                        continue
                    if any(X.dims == M.dims and is_isomorphic(X, M)[0] for X in found):
                        continue
                    found.append(M)
        indec.extend(sorted(found, key=_sort_key))
    indec.sort(key=_sort_key)
    pb = default_bound(A) if pdim_bound is None else pdim_bound
    cat = EnumerationCatalog(A, bound, tuple(CatalogEntry(M, pdim(M, pb)) for M in indec))
    if path is not None:
        os.makedirs(cache_dir, exist_ok=True)
        with open(path, "w") as fh:
            json.dump(cat.to_json(), fh, sort_keys=True)
    return cat


def _load(A: AlgebraPresentation, bound: int, path: str, pdim_bound: int | None) -> EnumerationCatalog:
    with open(path) as fh:
        data = json.load(fh)
    if data.get("algebra") != A.content_hash() or data.get("bound") != bound:
        raise EnumerationError(f"cache file {path} belongs to a different algebra or bound")
    pb = default_bound(A) if pdim_bound is None else pdim_bound
    mods = [module_from_dict(A, x["module"]) for x in data["entries"]]
    return EnumerationCatalog(A, bound, tuple(CatalogEntry(M, pdim(M, pb)) for M in mods))


# ---------------------------------------------------------------------------
# factorization tests


def _flat(f: ModuleMorphism) -> np.ndarray:
    return np.concatenate([m.reshape(-1) for m in f.mats])


def _factor_span(F, H: list[ModuleMorphism], maps: list[ModuleMorphism]) -> np.ndarray:
    """Coordinates, in the basis ``H``, of the span of ``maps``."""
    if not H or not maps:
        return F.zeros((len(H), 0))
    B = np.stack([_flat(h) for h in H], axis=1)
    if B.shape[0] == 0:
        return F.zeros((len(H), 0))
    X = la.solve(F, B, np.stack([_flat(m) for m in maps], axis=1))
    return la.colspace(F, X)


def check_approximation(p: ModuleMorphism, catalog: EnumerationCatalog) -> bool:
    """Every map from a catalog module of finite pdim to the target factors through ``p``.

    Sound only relative to the catalog bound.
    """
    if p.target.algebra is not catalog.algebra:
        raise ValueError("catalog over a different algebra")
    F = p.field
    for X in catalog.finite:
        H = hom_basis(X, p.target)
        if not H:
            continue
        img = _factor_span(F, H, [p @ g for g in hom_basis(X, p.source)])
        if img.shape[1] < len(H):
            return False
    return True


def brute_pfin_approx(M: Representation, catalog: EnumerationCatalog) -> ApproximationResult:
    """Right minimal approximation of ``M`` assembled from catalog modules of finite pdim.

    Starts from every map catalog module -> M, drops components greedily
    (largest first) while all factorizations survive, then strips the domain
    to a right minimal version.
    """
    A, F = M.algebra, M.field
    fin = catalog.finite
    comps: list[tuple[int, ModuleMorphism]] = []
    for k, X in enumerate(fin):
        for h in hom_basis(X, M):
            comps.append((k, h))
    if not comps:
        if M.dim:
            raise EnumerationError("no catalog module of finite pdim maps to M")
        Z = zero_module(A)
        return ApproximationResult(ModuleMorphism(Z, M, [F.zeros((M.dims[v], 0)) for v in range(A.n)]),
                                   pdim(Z), f"brute force (relative to bound {catalog.bound})", True)
    # spans V[y][c] of p_c ∘ Hom(Y, X_c) inside Hom(Y, M), per test module Y
    targets = [hom_basis(Y, M) for Y in fin]
    homs = {(y, k): hom_basis(Y, X) for y, Y in enumerate(fin) for k, X in enumerate(fin)}
    V = [[_factor_span(F, targets[y], [h @ g for g in homs[(y, k)]]) if targets[y] else None
          for (k, h) in comps] for y in range(len(fin))]

    def covers(keep: list[int]) -> bool:
        for y in range(len(fin)):
            if not targets[y]:
                continue
            S = la.hstack(F, [V[y][c] for c in keep], len(targets[y])) if keep else F.zeros((len(targets[y]), 0))
            if la.rank(F, S) < len(targets[y]):
                return False
        return True

    keep = list(range(len(comps)))
    for c in sorted(range(len(comps)), key=lambda c: (-fin[comps[c][0]].dim, -c)):
        trial = [x for x in keep if x != c]
        if covers(trial):
            keep = trial
    ds = direct_sum([fin[comps[c][0]] for c in keep], A)
    p = map_from_sum(ds, [comps[c][1] for c in keep], M)
    p, _ = right_minimal_version(p)
    return ApproximationResult(p, pdim(p.source), f"brute force (relative to bound {catalog.bound})", True)


def agrees(p1: ModuleMorphism, p2: ModuleMorphism) -> bool:
    """Two approximations of the same module agree up to an isomorphism of domains."""
    from .tilting import maps_isomorphic

    return maps_isomorphic(p1, p2)
