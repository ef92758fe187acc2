"""Syzygies, projective dimension, Ext, and the hypothesis checks for a corner.

Infinite projective dimension is only ever reported with a certificate: an
indecomposable summand ``X`` of some syzygy of ``M`` that is again a summand
of ``Ω^k(X)`` for some ``k >= 1``, so the minimal resolution never stops.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg as la
from .presentation import AlgebraPresentation
from .repmod import (
    ModuleMorphism,
    Representation,
    decompose,
    direct_sum,
    hom_basis,
    hom_coordinates,
    identity,
    injective,
    is_isomorphic,
    loewy_length,
    projective,
    projective_cover,
    simple,
    zero_module,
)
from .ttf import corner_of, extend_along, restrict, vertex_set


def default_bound(A: AlgebraPresentation) -> int:
    return 2 * A.dim + 2


# ---------------------------------------------------------------------------
# projective dimension


class PdimResult:
    kind = ""

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"


@dataclass(frozen=True)
class Finite(PdimResult):
    value: int
    kind = "finite"

    def __str__(self) -> str:
        return str(self.value)

    def to_json(self) -> dict:
        return {"kind": "finite", "pdim": self.value}


@dataclass(frozen=True)
class InfiniteCertified(PdimResult):
    """A cycle of indecomposable summands of syzygies, reached at syzygy ``i``.

    ``cycle`` lists split monomorphisms ``X_1 -> Ω(X_0)``, ``X_2 -> Ω(X_1)``,
    ..., ``X_0 -> Ω(X_(k-1))``, where ``X_0`` is a summand of ``Ω^i(M)``.
    So ``X_0`` is a summand of ``Ω^k(X_0)`` and ``j = i + k``.
    """

    i: int
    j: int
    cycle: tuple[ModuleMorphism, ...] = field(repr=False, compare=False)
    kind = "infinite"

    @property
    def module(self) -> Representation:
        return self.cycle[-1].source

    def __str__(self) -> str:
        return f"infinite (summand of syzygy {self.i} recurs in syzygy {self.j})"

    def to_json(self) -> dict:
        return {"kind": "infinite", "repeat": [self.i, self.j]}


@dataclass(frozen=True)
class Unknown(PdimResult):
    bound: int
    kind = "unknown"

    def __str__(self) -> str:
        return f"unknown (bound {self.bound})"

    def to_json(self) -> dict:
        return {"kind": "unknown", "bound": self.bound}


def syzygy_map(M: Representation) -> tuple[ModuleMorphism, ModuleMorphism]:
    """Projective cover ``P -> M`` and the inclusion of its kernel."""
    pi = projective_cover(M)
    return pi, pi.kernel()


def syzygy(M: Representation) -> Representation:
    return syzygy_map(M)[1].source


@dataclass(frozen=True)
class ResolutionReport:
    """``P_k -> ... -> P_0 -> M``; ``differentials[0]`` is the cover of M."""

    module: Representation
    projectives: list[Representation]
    differentials: list[ModuleMorphism]
    syzygies: list[Representation]  # syzygies[k] = Ω^k(M)
    minimal: bool

    @property
    def complete(self) -> bool:
        return self.syzygies[-1].dim == 0


def resolution(M: Representation, length: int) -> ResolutionReport:
    """Minimal projective resolution up to ``P_length`` (stops early at zero)."""
    F = M.field
    projs, diffs, syz = [], [], [M]
    incl = None
    minimal = True
    for _ in range(length + 1):
        cur = syz[-1]
        if cur.dim == 0:
            break
        pi, k = syzygy_map(cur)
        d = pi if incl is None else incl @ pi
        if incl is not None:
            # image of the differential lies in the radical of its target
            rad = d.target.radical_subspaces()
            for m, r in zip(d.mats, rad):
                if m.shape[1] and not la.contains(F, r, la.colspace(F, m)):
                    minimal = False
        projs.append(pi.source)
        diffs.append(d)
        syz.append(k.source)
        incl = k
    return ResolutionReport(M, projs, diffs, syz, minimal)


class _SyzygyGraph:
    """Iso classes of indecomposable non-projective summands of syzygies.

    An edge ``X -> Y`` means ``Y`` is a summand of ``Ω(X)``; it is stored with
    a split monomorphism ``Y -> Ω(X)``.
    """

    def __init__(self):
        self.classes: list[Representation] = []
        self.children: dict[int, list[tuple[int, ModuleMorphism]]] = {}

    def class_of(self, X: Representation) -> tuple[int, ModuleMorphism]:
        """Class index and an isomorphism from its representative onto ``X``."""
        for k, Y in enumerate(self.classes):
            if Y.dims == X.dims:
                ok, w = is_isomorphic(Y, X)
                if ok:
                    return k, w
        self.classes.append(X)
        return len(self.classes) - 1, identity(X)

    def summands(self, M: Representation) -> list[tuple[int, ModuleMorphism]]:
        rep = decompose(M)
        out = []
        for X, inc in zip(rep.pieces, rep.inclusions):
            if syzygy(X).dim:
                k, w = self.class_of(X)
                out.append((k, inc @ w))
        return out


def pdim(M: Representation, bound: int | None = None, max_classes: int = 400,
         direct_cap: int = 120) -> PdimResult:
    """Projective dimension, explored through the indecomposable summands of syzygies.

    Infinite dimension is certified by a cycle of summands; the reachable
    part being acyclic gives the exact value.  The plain resolution is tried
    first while syzygies stay below ``direct_cap``.  ``Unknown`` when more than
    ``bound`` syzygy stages or ``max_classes`` classes would be needed.
    """
    bound = default_bound(M.algebra) if bound is None else bound
    if bound < 1:
        raise ValueError("bound must be at least 1")
    if M.dim == 0:
        return Finite(0)
    # plain minimal resolution first; decomposing large syzygies is costly
    X = M
    for k in range(bound + 1):
        X = syzygy(X)
        if X.dim == 0:
            return Finite(k)
        if X.dim > direct_cap:
            break
    G = _SyzygyGraph()
    roots = [k for k, _ in G.summands(M)]
    depth = {r: 0 for r in roots}
    frontier = list(dict.fromkeys(roots))
    while frontier:
        nxt = []
        for x in frontier:
            if x in G.children:
                continue
            G.children[x] = G.summands(syzygy(G.classes[x]))
            for y, _ in G.children[x]:
                if y not in depth:
                    depth[y] = depth[x] + 1
                    if depth[y] > bound or len(G.classes) > max_classes:
                        return Unknown(bound)
                    nxt.append(y)
        cyc = _find_cycle(G.children, roots)
        if cyc is not None:
            return _certify(G, depth, cyc)
        frontier = nxt
    memo: dict[int, int] = {}

    def pd(x: int) -> int:
        if x not in memo:
            memo[x] = 1 + max((pd(y) for y, _ in G.children[x]), default=0)
        return memo[x]

    d = max(pd(r) for r in roots)
    return Finite(d) if d <= bound else Unknown(bound)


def _find_cycle(children: dict, roots: list[int]) -> list[int] | None:
    """A cycle of explored classes reachable from the roots."""
    state: dict[int, int] = {}
    path: list[int] = []

    def visit(x: int) -> list[int] | None:
        state[x] = 1
        path.append(x)
        for y, _ in children.get(x, []):
            if state.get(y) == 1:
                return path[path.index(y):]
            if y not in state:
                c = visit(y)
                if c is not None:
                    return c
        path.pop()
        state[x] = 2
        return None

    for r in roots:
        if r not in state:
            c = visit(r)
            if c is not None:
                return c
    return None


def _certify(G: _SyzygyGraph, depth: dict[int, int], cycle: list[int]) -> InfiniteCertified:
    k = min(range(len(cycle)), key=lambda t: depth[cycle[t]])
    cycle = cycle[k:] + cycle[:k]
    steps = []
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        steps.append(next(m for y, m in G.children[a] if y == b))
    i = depth[cycle[0]]
    return InfiniteCertified(i, i + len(cycle), tuple(steps))


def verify_certificate(r: InfiniteCertified) -> bool:
    """Each step must be a split monomorphism into a module isomorphic to the syzygy of the previous class."""
    prev = r.cycle[-1].source
    for m in r.cycle:
        if not is_isomorphic(m.target, syzygy(prev))[0]:
            return False
        if extend_along(identity(m.source), m) is None:
            return False
        prev = m.source
    return True


def ext_dim(M: Representation, N: Representation, i: int) -> int:
    """dim Ext^i(M, N), from the minimal resolution of M."""
    return ext_dims(M, [N], i)[0]


def ext_dims(M: Representation, Ns: Sequence[Representation], i: int) -> list[int]:
    """dim Ext^i(M, N) for each N, sharing the resolution of M."""
    if i < 0:
        raise ValueError("negative degree")
    if i == 0:
        return [len(hom_basis(M, N)) for N in Ns]
    omega = M
    incl = None
    for _ in range(i):
        pi, incl = syzygy_map(omega)
        omega = incl.source
        if omega.dim == 0:
            return [0] * len(Ns)
    return [_ext_from_syzygy(incl, N) for N in Ns]


def _ext_from_syzygy(incl: ModuleMorphism, N: Representation) -> int:
    F = N.field
    omega = incl.source
    # Ext^i = Hom(Ω^i, N) / (maps extending to P_{i-1})
    H = hom_basis(omega, N)
    if not H:
        return 0
    restricted = []
    for h in hom_basis(incl.target, N):
        c = hom_coordinates(H, h @ incl)
        restricted.append(c)
    if not restricted:
        return len(H)
    R = np.stack(restricted, axis=1)
    return len(H) - la.rank(F, R)


# ---------------------------------------------------------------------------
# socles and Loewy lengths


def bass_socle_test(A: AlgebraPresentation, side: str) -> bool:
    """Whether every simple on ``side`` embeds into the socle of the regular module on that side.

    ``side="right"`` works over the opposite algebra.  A pass on the right
    gives left finitistic dimension zero.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    B = A if side == "left" else A.opposite()
    total = np.zeros(B.n, dtype=int)
    for v in range(B.n):
        total += np.array(projective(B, v).socle_vector(), dtype=int)
    return bool(np.all(total > 0))


def loewy_profile(A: AlgebraPresentation, scope: str = "projectives", side: str = "left") -> list[int]:
    B = A if side == "left" else A.opposite()
    if scope == "projectives":
        return [loewy_length(projective(B, v)) for v in range(B.n)]
    if scope == "injectives":
        return [loewy_length(injective(B, v)) for v in range(B.n)]
    raise ValueError(f"unknown scope {scope!r}")


# ---------------------------------------------------------------------------
# evidence that P^<∞ of a corner is contravariantly finite


class Evidence:
    name = ""

    @property
    def present(self) -> bool:
        return True

    def to_json(self) -> dict:
        return {"kind": self.name}


@dataclass(frozen=True)
class BassZero(Evidence):
    """Every simple right module lies in the right socle: left findim is 0."""

    name = "BassZero"

    def __str__(self) -> str:
        return "findim 0 (socle test)"


@dataclass(frozen=True)
class FiniteGlobalDim(Evidence):
    value: int
    name = "FiniteGlobalDim"

    def __str__(self) -> str:
        return f"global dimension {self.value}"

    def to_json(self) -> dict:
        return {"kind": self.name, "gldim": self.value}


@dataclass(frozen=True)
class Supplied(Evidence):
    name = "Supplied"

    def __str__(self) -> str:
        return "supplied by the user"


@dataclass(frozen=True)
class Reduced(Evidence):
    """Reduction to the smaller corner at ``vertices``, with evidence there."""

    vertices: tuple[int, ...]
    inner: Evidence
    name = "Reduced"

    def __str__(self) -> str:
        return f"reduced to corner {list(self.vertices)}: {self.inner}"

    def to_json(self) -> dict:
        return {"kind": self.name, "vertices": list(self.vertices), "inner": self.inner.to_json()}


@dataclass(frozen=True)
class Unverified(Evidence):
    name = "Unverified"

    @property
    def present(self) -> bool:
        return False

    def __str__(self) -> str:
        return "no evidence"


_CACHE: "weakref.WeakKeyDictionary[AlgebraPresentation, dict]" = weakref.WeakKeyDictionary()


def _cached(A: AlgebraPresentation, key, compute):
    store = _CACHE.setdefault(A, {})
    if key not in store:
        store[key] = compute()
    return store[key]


def simple_pdims(A: AlgebraPresentation, bound: int | None = None,
                 vertices: Sequence[int] | None = None) -> dict[int, PdimResult]:
    vs = range(A.n) if vertices is None else vertices
    return {v: _cached(A, ("simple", v, bound), lambda v=v: pdim(simple(A, v), bound)) for v in vs}


def corner_evidence(C: AlgebraPresentation, bound: int | None = None, supplied: bool = False,
                    depth: int = 2) -> Evidence:
    """Evidence that finite-pdim left ``C``-modules are contravariantly finite."""
    if supplied:
        return Supplied()
    if bass_socle_test(C, "right"):
        return BassZero()
    pd = simple_pdims(C, bound)
    if all(r.is_finite for r in pd.values()):
        return FiniteGlobalDim(max((r.value for r in pd.values()), default=0))
    if depth > 0:
        sub = tuple(v for v, r in pd.items() if not r.is_finite)
        if 0 < len(sub) < C.n:
            rep = setting_check(C, sub, bound, evidence=False)
            if rep.passes_conditions:
                inner = corner_evidence(rep.corner.algebra, None, False, depth - 1)
                if inner.present:
                    return Reduced(sub, inner)
    return Unverified()


# ---------------------------------------------------------------------------
# the hypothesis checks


@dataclass
class SettingReport:
    algebra: AlgebraPresentation
    e: tuple[int, ...]
    simples: dict[int, PdimResult]  # condition (i), vertices off e
    restricted: PdimResult  # condition (ii)
    evidence: Evidence | None  # condition (iii); None when not requested
    corner: object = None  # CornerData

    @property
    def passes_conditions(self) -> bool:
        return all(r.is_finite for r in self.simples.values()) and self.restricted.is_finite

    @property
    def passes(self) -> bool:
        return self.passes_conditions and self.evidence is not None and self.evidence.present

    @property
    def failing_gate(self) -> str | None:
        if not all(r.is_finite for r in self.simples.values()):
            return "condition (i)"
        if not self.restricted.is_finite:
            return "condition (ii)"
        if self.evidence is None or not self.evidence.present:
            return "condition (iii)"
        return None

    def to_json(self) -> dict:
        A = self.algebra
        return {
            "e": [A.vertices[v] for v in self.e],
            "condition_i": {A.vertices[v]: r.to_json() for v, r in self.simples.items()},
            "condition_ii": self.restricted.to_json(),
            "condition_iii": None if self.evidence is None else self.evidence.to_json(),
            "passes_conditions": self.passes_conditions,
            "passes": self.passes,
            "failing_gate": self.failing_gate,
        }


def off_corner_module(A: AlgebraPresentation, e: Sequence[int]) -> Representation:
    """``eΛ(1-e)`` as a left module over the corner: the sum of restricted projectives off e."""
    e = vertex_set(A, e)
    C = corner_of(A, e)
    parts = [restrict(projective(A, j), e) for j in range(A.n) if j not in e]
    if not parts:
        return zero_module(C.algebra)
    return direct_sum(parts, C.algebra).module


def setting_check(A: AlgebraPresentation, e: Sequence[int | str], bound: int | None = None,
                  supplied: bool = False, evidence: bool = True) -> SettingReport:
    e = vertex_set(A, e)
    return _cached(A, ("setting", e, bound, supplied, evidence),
                   lambda: _setting_check(A, e, bound, supplied, evidence))


def _setting_check(A, e, bound, supplied, evidence) -> SettingReport:
    C = corner_of(A, e)
    simples = simple_pdims(A, bound, [v for v in range(A.n) if v not in e])
    restricted = pdim(off_corner_module(A, e), bound if bound is not None else default_bound(C.algebra))
    ev = corner_evidence(C.algebra, None, supplied) if evidence else None
    return SettingReport(A, e, simples, restricted, ev, C)
