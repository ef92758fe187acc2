"""Quiver algebras KQ/I given by generators and admissible relations.

Paths are stored internally in traversal order: ``Path(s, t, (a1, a2, ...))``
walks ``a1`` first.  The algebra product follows the usual convention for
left modules, so ``x * y`` means "first ``y``, then ``x``".  Files may write
words in either order; the ``compose`` tag says which.

The normal basis is computed by linear completion: after checking that every
path of length ``L + 1`` lies in the ideal, the ideal is closed inside
``KQ / J^(L+1)`` under left and right multiplication by arrows, and echelonized
with the length-lex largest path leading.  The non-leading paths form the
normal basis.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable, Iterable, NamedTuple, Sequence

import numpy as np

from . import linalg as la
from .field import GroundField

LEFT_TO_RIGHT = "left-to-right"
RIGHT_TO_LEFT = "right-to-left"


class PresentationError(ValueError):
    """Invalid presentation input; ``where`` locates the offending item."""

    def __init__(self, message: str, where: str | None = None):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


class NilpotencyError(PresentationError):
    def __init__(self, message: str, witness: tuple[str, ...] = ()):
        self.witness = witness
        super().__init__(message, "nilpotency_bound")


class Arrow(NamedTuple):
    name: str
    source: int
    target: int


class Path(NamedTuple):
    source: int
    target: int
    arrows: tuple[int, ...]

    def __len__(self) -> int:  # type: ignore[override]
        return len(self.arrows)

    @property
    def length(self) -> int:
        return len(self.arrows)


def path_key(p: Path) -> tuple:
    """Length-lex order; trivial paths ordered by vertex."""
    return (len(p.arrows), p.arrows, p.source)


def concat(p: Path, q: Path) -> Path | None:
    """``p`` then ``q``, or ``None`` when not composable."""
    if p.target != q.source:
        return None
    return Path(p.source, q.target, p.arrows + q.arrows)


Sparse = dict  # Path -> nonzero field element


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    def vertex_index(self, name: str) -> int:
        try:
            return self.vertices.index(name)
        except ValueError:
            raise PresentationError(f"unknown vertex {name!r}") from None

    def arrow_index(self, name: str) -> int:
        for i, a in enumerate(self.arrows):
            if a.name == name:
                return i
        raise PresentationError(f"unknown arrow {name!r}")

    def out_arrows(self, v: int) -> list[int]:
        return [i for i, a in enumerate(self.arrows) if a.source == v]

    def paths_from(self, v: int, max_len: int) -> list[Path]:
        out = [Path(v, v, ())]
        frontier = out[:]
        for _ in range(max_len):
            nxt = []
            for p in frontier:
                for i in self.out_arrows(p.target):
                    nxt.append(Path(p.source, self.arrows[i].target, p.arrows + (i,)))
            out.extend(nxt)
            frontier = nxt
        return out

    def all_paths(self, max_len: int) -> list[Path]:
        out = [p for v in range(len(self.vertices)) for p in self.paths_from(v, max_len)]
        out.sort(key=path_key)
        return out

    def trivial(self, v: int) -> Path:
        return Path(v, v, ())

    def arrow_path(self, i: int) -> Path:
        a = self.arrows[i]
        return Path(a.source, a.target, (i,))


# ---------------------------------------------------------------------------
# sparse helpers


def _axpy(F: GroundField, v: Sparse, c, w: Sparse) -> None:
    """v += c * w in place."""
    for q, r in w.items():
        x = F.normalize(v.get(q, 0) + c * r)
        if x == 0:
            v.pop(q, None)
        else:
            v[q] = x


class _Echelon:
    """Incremental sparse echelon basis of a space of path combinations."""

    def __init__(self, F: GroundField):
        self.F = F
        self.rows: dict[Path, Sparse] = {}

    def reduce(self, v: Sparse) -> Sparse:
        F = self.F
        v = dict(v)
        while True:
            hits = [p for p in v if p in self.rows]
            if not hits:
                return v
            p = max(hits, key=path_key)
            _axpy(F, v, F.neg(v[p]), self.rows[p])

    def add(self, v: Sparse) -> Sparse | None:
        """Insert ``v``; returns the new (normalized) row or ``None`` if dependent."""
        v = self.reduce(v)
        if not v:
            return None
        lead = max(v, key=path_key)
        inv = self.F.inv(v[lead])
        row = {q: self.F.mul(c, inv) for q, c in v.items()}
        self.rows[lead] = row
        return row


def _mul_path_sparse(v: Sparse, before: Path | None, after: Path | None, max_len: int | None) -> Sparse:
    """``before`` then ``v`` then ``after`` termwise, dropping terms longer than ``max_len``."""
    out: Sparse = {}
    for p, c in v.items():
        q = p
        if before is not None:
            q = concat(before, q)
            if q is None:
                continue
        if after is not None:
            q = concat(q, after)
            if q is None:
                continue
        if max_len is not None and len(q.arrows) > max_len:
            continue
        out[q] = c
    return out


def _ideal_closure(F: GroundField, quiver: Quiver, generators: Sequence[Sparse], max_len: int, truncate: bool) -> _Echelon:
    """Span of the generators closed under multiplication by arrows on both sides.

    With ``truncate`` terms longer than ``max_len`` are dropped (computing in
    KQ/J^(max_len+1)); otherwise products with such terms are skipped.
    """
    ech = _Echelon(F)
    queue: list[Sparse] = []
    for g in generators:
        if truncate:
            g = {p: c for p, c in g.items() if len(p.arrows) <= max_len}
        elif any(len(p.arrows) > max_len for p in g):
            continue
        row = ech.add(g)
        if row is not None:
            queue.append(row)
    arrows = [quiver.arrow_path(i) for i in range(len(quiver.arrows))]
    while queue:
        row = queue.pop()
        longest = max(len(p.arrows) for p in row)
        if not truncate and longest >= max_len:
            continue
        for a in arrows:
            for prod in (_mul_path_sparse(row, a, None, max_len if truncate else None),
                         _mul_path_sparse(row, None, a, max_len if truncate else None)):
                if not prod:
                    continue
                new = ech.add(prod)
                if new is not None:
                    queue.append(new)
    return ech


# ---------------------------------------------------------------------------


class AlgebraPresentation:
    """A basic algebra KQ/I with its normal path basis.

    ``relations`` are sparse combinations of traversal-order paths.
    """

    def __init__(
        self,
        field: GroundField,
        quiver: Quiver,
        relations: Sequence[Sparse],
        nilpotency_bound: int,
        compose: str = LEFT_TO_RIGHT,
        name: str | None = None,
    ):
        if nilpotency_bound < 1:
            raise PresentationError("must be a positive integer", "nilpotency_bound")
        if compose not in (LEFT_TO_RIGHT, RIGHT_TO_LEFT):
            raise PresentationError(f"unknown convention {compose!r}", "compose")
        self.field = field
        self.quiver = quiver
        self.relations = tuple(dict(r) for r in relations)
        self.L = int(nilpotency_bound)
        self.compose = compose
        self.name = name
        self._opposite: AlgebraPresentation | None = None
        self._validate_relations()
        self._complete()

    # construction -----------------------------------------------------

    def _validate_relations(self) -> None:
        for k, rel in enumerate(self.relations):
            where = f"relations[{k}]"
            if not rel:
                raise PresentationError("empty relation", where)
            ends = {(p.source, p.target) for p in rel}
            if len(ends) != 1:
                raise PresentationError("terms are not parallel", where)
            for p, c in rel.items():
                if len(p.arrows) < 2:
                    raise PresentationError(
                        f"term {self.word_text(p)!r} has length {len(p.arrows)} < 2 (not admissible)", where
                    )
                if c == 0:
                    raise PresentationError("zero coefficient", where)

    def _complete(self) -> None:
        F, Q, L = self.field, self.quiver, self.L
        # every path of length L+1 must lie in the ideal
        ech = _ideal_closure(F, Q, self.relations, L + 1, truncate=False)
        for p in Q.all_paths(L + 1):
            if len(p.arrows) == L + 1 and ech.reduce({p: F.one()}):
                raise NilpotencyError(
                    f"path {self.word_text(p)} of length {L + 1} has nonzero normal form",
                    tuple(self.word(p)),
                )
        ech = _ideal_closure(F, Q, self.relations, L, truncate=True)
        self._ech = ech
        paths = Q.all_paths(L)
        self.basis: tuple[Path, ...] = tuple(p for p in paths if p not in ech.rows)
        self.index = {p: i for i, p in enumerate(self.basis)}
        n = len(Q.vertices)
        self.pair_basis: dict[tuple[int, int], list[int]] = {(s, t): [] for s in range(n) for t in range(n)}
        for i, p in enumerate(self.basis):
            self.pair_basis[(p.source, p.target)].append(i)
        self._nf_cache: dict[Path, Sparse] = {}

    # basic data -------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.quiver.vertices)

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.quiver.vertices

    @property
    def arrows(self) -> tuple[Arrow, ...]:
        return self.quiver.arrows

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vertex_index(self, v: str | int) -> int:
        if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
            if 0 <= v < self.n:
                return int(v)
            raise PresentationError(f"vertex index {v} out of range")
        return self.quiver.vertex_index(str(v))

    @cached_property
    def cartan(self) -> np.ndarray:
        """``C[s, t]`` = number of normal paths from ``s`` to ``t``."""
        C = np.zeros((self.n, self.n), dtype=int)
        for (s, t), idx in self.pair_basis.items():
            C[s, t] = len(idx)
        return C

    def word(self, p: Path) -> list[str]:
        """Arrow names in the written order of this presentation."""
        names = [self.arrows[i].name for i in p.arrows]
        return names[::-1] if self.compose == RIGHT_TO_LEFT else names

    def word_text(self, p: Path) -> str:
        if not p.arrows:
            return f"e[{self.vertices[p.source]}]"
        return "*".join(self.word(p))

    def path_from_word(self, names: Sequence[str], where: str | None = None) -> Path:
        if not names:
            raise PresentationError("empty arrow word", where)
        try:
            idx = [self.quiver.arrow_index(a) for a in names]
        except PresentationError as exc:
            raise PresentationError(str(exc), where) from None
        if self.compose == RIGHT_TO_LEFT:
            idx = idx[::-1]
        return _make_path(self.quiver, idx, where)

    # normal forms -----------------------------------------------------

    def normal_form_path(self, p: Path) -> Sparse:
        """Normal form of a single path as a sparse combination of basis paths."""
        if len(p.arrows) > self.L:
            return {}
        hit = self._nf_cache.get(p)
        if hit is None:
            hit = self._ech.reduce({p: self.field.one()})
            self._nf_cache[p] = hit
        return dict(hit)

    def normal_form(self, expr: Sparse) -> Sparse:
        ends = {(p.source, p.target) for p in expr}
        if len(ends) > 1:
            raise ValueError("normal_form: terms are not parallel")
        out: Sparse = {}
        for p, c in expr.items():
            _axpy(self.field, out, c, self.normal_form_path(p))
        return out

    def to_vector(self, expr: Sparse) -> np.ndarray:
        v = self.field.zeros(self.dim)
        for p, c in self.normal_form(expr).items():
            v[self.index[p]] = c
        return v

    def from_vector(self, v: np.ndarray) -> Sparse:
        return {self.basis[i]: v[i] for i in np.nonzero(v != 0)[0]}

    def then_basis(self, i: int, j: int) -> Sparse:
        """Basis path ``i`` followed by basis path ``j`` (normal form)."""
        q = concat(self.basis[i], self.basis[j])
        return {} if q is None else self.normal_form_path(q)

    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Algebra product ``x * y`` ("first y, then x")."""
        F = self.field
        out = F.zeros(self.dim)
        for i in np.nonzero(y != 0)[0]:
            for j in np.nonzero(x != 0)[0]:
                c = F.mul(y[i], x[j])
                for p, d in self.then_basis(int(i), int(j)).items():
                    k = self.index[p]
                    out[k] = F.add(out[k], F.mul(c, d))
        return out

    def reduce_randomly(self, expr: Sparse, rng: np.random.Generator) -> Sparse:
        """Rewrite with randomly chosen rules at random positions until normal.

        The rules are the minimal non-normal words with their normal forms;
        the result must agree with :meth:`normal_form` (confluence).
        """
        F = self.field
        rules = self.obstructions
        v = {p: c for p, c in expr.items() if len(p.arrows) <= self.L}
        while True:
            redexes = []
            for p in v:
                for start in range(len(p.arrows) + 1):
                    for stop in range(start, len(p.arrows) + 1):
                        sub = p.arrows[start:stop]
                        if sub and sub in rules:
                            redexes.append((p, start, stop))
            if not redexes:
                return v
            p, start, stop = redexes[int(rng.integers(len(redexes)))]
            c = v.pop(p)
            before = _make_path(self.quiver, list(p.arrows[:start]), None, p.source)
            after = _make_path(self.quiver, list(p.arrows[stop:]), None, self.arrows[p.arrows[stop - 1]].target)
            tail = _mul_path_sparse(rules[p.arrows[start:stop]], before, after, self.L)
            _axpy(F, v, c, tail)

    @cached_property
    def obstructions(self) -> dict[tuple[int, ...], Sparse]:
        """Minimal non-normal words (every proper subword normal) with their normal forms."""
        normal = {p.arrows for p in self.basis}
        out = {}
        for p in self._ech.rows:
            w = p.arrows
            if w[1:] in normal and w[:-1] in normal:
                out[w] = self.normal_form_path(p)
        for w in self._long_obstructions():
            out[w] = {}
        return out

    def _long_obstructions(self) -> list[tuple[int, ...]]:
        normal = {p.arrows for p in self.basis if p.arrows}
        out = []
        for p in self.basis:
            if len(p.arrows) != self.L:
                continue
            for i in self.quiver.out_arrows(p.target):
                w = p.arrows + (i,)
                if w[1:] in normal:
                    out.append(w)
        return out

    # module data ------------------------------------------------------

    def projective_basis(self, v: int) -> dict[int, list[int]]:
        """Basis of the projective at ``v``: normal paths starting at ``v``, grouped by target."""
        return {t: self.pair_basis[(v, t)] for t in range(self.n)}

    def projective_action(self, v: int) -> list[np.ndarray]:
        """Arrow matrices of the indecomposable projective at ``v`` (left ideal of paths from v)."""
        F = self.field
        mats = []
        for ai, a in enumerate(self.arrows):
            rows = self.pair_basis[(v, a.target)]
            cols = self.pair_basis[(v, a.source)]
            pos = {self.basis[r]: k for k, r in enumerate(rows)}
            M = F.zeros((len(rows), len(cols)))
            arrow = self.quiver.arrow_path(ai)
            for k, c in enumerate(cols):
                q = concat(self.basis[c], arrow)
                for p, d in self.normal_form_path(q).items():
                    M[pos[p], k] = d
            mats.append(M)
        return mats

    # derived algebras -------------------------------------------------

    def opposite(self) -> "AlgebraPresentation":
        if self._opposite is None:
            arrows = tuple(Arrow(a.name, a.target, a.source) for a in self.arrows)
            quiver = Quiver(self.vertices, arrows)
            rels = [{reverse_path(p): c for p, c in r.items()} for r in self.relations]
            opp = AlgebraPresentation(
                self.field, quiver, rels, self.L, self.compose,
                name=None if self.name is None else f"{self.name}^op",
            )
            opp._opposite = self
            self._opposite = opp
        return self._opposite

    # serialization ----------------------------------------------------

    def to_json(self) -> dict:
        F = self.field
        rels = []
        for r in self.relations:
            terms = sorted(r.items(), key=lambda t: path_key(t[0]), reverse=True)
            rels.append([{"coeff": F.format(c), "path": self.word(p)} for p, c in terms])
        return {
            "field": F.to_json(),
            "compose": self.compose,
            "vertices": list(self.vertices),
            "arrows": [{"name": a.name, "from": self.vertices[a.source], "to": self.vertices[a.target]}
                       for a in self.arrows],
            "relations": rels,
            "nilpotency_bound": self.L,
        }

    def content_hash(self) -> str:
        text = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()

    def __repr__(self) -> str:
        label = self.name or "algebra"
        return f"<{label} over {self.field}: {self.n} vertices, {len(self.arrows)} arrows, dim {self.dim}>"


def reverse_path(p: Path) -> Path:
    return Path(p.target, p.source, p.arrows[::-1])


def _make_path(quiver: Quiver, idx: Sequence[int], where: str | None, base: int | None = None) -> Path:
    if not idx:
        if base is None:
            raise PresentationError("empty path", where)
        return Path(base, base, ())
    arrows = quiver.arrows
    for x, y in zip(idx, idx[1:]):
        if arrows[x].target != arrows[y].source:
            raise PresentationError(
                f"arrows {arrows[x].name!r} and {arrows[y].name!r} are not composable", where
            )
    return Path(arrows[idx[0]].source, arrows[idx[-1]].target, tuple(idx))


# ---------------------------------------------------------------------------
# parsing

_TOP_KEYS = {"field", "compose", "vertices", "arrows", "relations", "nilpotency_bound"}


def parse_field(value: Any) -> GroundField:
    if value == "Q":
        return GroundField(0)
    if isinstance(value, dict) and set(value) == {"GF"} and isinstance(value["GF"], int):
        try:
            return GroundField(value["GF"])
        except ValueError as exc:
            raise PresentationError(str(exc), "field") from None
    raise PresentationError(f"expected \"Q\" or {{\"GF\": p}}, got {value!r}", "field")


def presentation_from_dict(data: Any, name: str | None = None) -> AlgebraPresentation:
    if not isinstance(data, dict):
        raise PresentationError("top level must be an object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise PresentationError(f"unknown keys {sorted(unknown)}")
    for key in ("field", "vertices", "arrows", "relations", "nilpotency_bound"):
        if key not in data:
            raise PresentationError(f"missing key {key!r}")
    F = parse_field(data["field"])
    compose = data.get("compose", LEFT_TO_RIGHT)
    if compose not in (LEFT_TO_RIGHT, RIGHT_TO_LEFT):
        raise PresentationError(f"unknown convention {compose!r}", "compose")

    verts = data["vertices"]
    if not isinstance(verts, list) or not all(isinstance(v, str) for v in verts):
        raise PresentationError("must be a list of names", "vertices")
    if len(set(verts)) != len(verts):
        raise PresentationError("duplicate vertex names", "vertices")

    arrows = []
    seen = set()
    if not isinstance(data["arrows"], list):
        raise PresentationError("must be a list", "arrows")
    for k, a in enumerate(data["arrows"]):
        where = f"arrows[{k}]"
        if not isinstance(a, dict) or set(a) != {"name", "from", "to"}:
            raise PresentationError("expected keys name, from, to", where)
        if not isinstance(a["name"], str) or a["name"] in seen:
            raise PresentationError(f"bad or duplicate arrow name {a['name']!r}", where)
        seen.add(a["name"])
        for end in ("from", "to"):
            if a[end] not in verts:
                raise PresentationError(f"unknown vertex {a[end]!r}", where)
        arrows.append(Arrow(a["name"], verts.index(a["from"]), verts.index(a["to"])))
    quiver = Quiver(tuple(verts), tuple(arrows))

    L = data["nilpotency_bound"]
    if not isinstance(L, int) or isinstance(L, bool) or L < 1:
        raise PresentationError("must be an integer >= 1", "nilpotency_bound")

    if not isinstance(data["relations"], list):
        raise PresentationError("must be a list", "relations")
    rels = []
    for k, rel in enumerate(data["relations"]):
        where = f"relations[{k}]"
        if not isinstance(rel, list) or not rel:
            raise PresentationError("must be a nonempty list of terms", where)
        terms: Sparse = {}
        for m, term in enumerate(rel):
            tw = f"{where}[{m}]"
            if not isinstance(term, dict) or set(term) != {"coeff", "path"}:
                raise PresentationError("expected keys coeff, path", tw)
            path = term["path"]
            if isinstance(path, dict):
                raise PresentationError("trivial paths are not allowed in relations", tw)
            if not isinstance(path, list) or not all(isinstance(x, str) for x in path):
                raise PresentationError("path must be a list of arrow names", tw)
            try:
                c = F.parse(str(term["coeff"]))
            except ValueError as exc:
                raise PresentationError(str(exc), tw) from None
            if c == 0:
                raise PresentationError("zero coefficient", tw)
            idx = []
            for x in path:
                try:
                    idx.append(quiver.arrow_index(x))
                except PresentationError:
                    raise PresentationError(f"unknown arrow {x!r}", tw) from None
            if compose == RIGHT_TO_LEFT:
                idx = idx[::-1]
            if not idx:
                raise PresentationError("trivial paths are not allowed in relations", tw)
            p = _make_path(quiver, idx, tw)
            if len(p.arrows) < 2:
                raise PresentationError(f"term of length {len(p.arrows)} < 2 (not admissible)", tw)
            if p in terms:
                raise PresentationError("duplicate path among terms", tw)
            terms[p] = c
        rels.append(terms)
    return AlgebraPresentation(F, quiver, rels, L, compose, name=name)


def parse_presentation(text: str, name: str | None = None) -> AlgebraPresentation:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PresentationError(f"JSON syntax error: {exc.msg}", f"line {exc.lineno} column {exc.colno}") from None
    return presentation_from_dict(data, name=name)


# ---------------------------------------------------------------------------
# graph questions


def precyclic_vertices(A: AlgebraPresentation) -> tuple[int, ...]:
    """Vertices from which some path reaches an oriented cycle (relations ignored)."""
    n = A.n
    succ = [set() for _ in range(n)]
    for a in A.arrows:
        succ[a.source].add(a.target)
    reach = []
    for v in range(n):
        seen, stack = set(), list(succ[v])
        while stack:
            w = stack.pop()
            if w not in seen:
                seen.add(w)
                stack.extend(succ[w])
        reach.append(seen)
    on_cycle = {v for v in range(n) if v in reach[v]}
    return tuple(v for v in range(n) if v in on_cycle or reach[v] & on_cycle)


def parse_idempotent(A: AlgebraPresentation, names: Iterable[str | int]) -> tuple[int, ...]:
    out = []
    for v in names:
        i = A.vertex_index(v)
        if i in out:
            raise PresentationError(f"duplicate vertex {A.vertices[i]!r} in idempotent")
        out.append(i)
    if not out:
        raise PresentationError("idempotent must be nonempty")
    return tuple(out)


# ---------------------------------------------------------------------------
# presentations of abstract algebras


class AbstractAlgebra:
    """A basic algebra given by Peirce components and a composition rule.

    ``dims[s][t]`` is the dimension of the space of elements "from s to t";
    ``then(s, m, t, x, y)`` returns the element "x then y" for x from s to m
    and y from m to t; ``identity(v)`` is the vertex idempotent.
    """

    def __init__(self, field: GroundField, names: Sequence[str], dims: np.ndarray,
                 then: Callable, identity: Callable):
        self.field = field
        self.names = tuple(names)
        self.dims = dims
        self.then = then
        self.identity = identity

    def radical_powers(self, rad: dict[tuple[int, int], np.ndarray]) -> list[dict]:
        """Successive powers of a two-sided ideal given by per-pair column bases."""
        F, n = self.field, len(self.names)
        powers = [rad]
        while True:
            cur = powers[-1]
            nxt = {}
            nonzero = False
            for s in range(n):
                for t in range(n):
                    cols = []
                    for m in range(n):
                        X, Y = cur[(s, m)], rad[(m, t)]
                        for i in range(X.shape[1]):
                            for j in range(Y.shape[1]):
                                cols.append(self.then(s, m, t, X[:, i], Y[:, j]))
                    M = np.stack(cols, axis=1) if cols else F.zeros((int(self.dims[s][t]), 0))
                    nxt[(s, t)] = la.colspace(F, M)
                    nonzero |= nxt[(s, t)].shape[1] > 0
            if not nonzero:
                return powers
            powers.append(nxt)


def build_presentation(
    alg: AbstractAlgebra,
    arrows: Sequence[tuple[str, int, int, np.ndarray]],
    compose: str = LEFT_TO_RIGHT,
    name: str | None = None,
    nilpotency_bound: int | None = None,
) -> tuple[AlgebraPresentation, dict[Path, np.ndarray]]:
    """Presentation of ``alg`` on the given arrow elements.

    Words are enumerated in length-lex order; a word whose value depends on
    the values of earlier normal words yields a relation with that word
    leading.  Returns the presentation and the value of each basis path.
    """
    F = alg.field
    n = len(alg.names)
    quiver = Quiver(alg.names, tuple(Arrow(nm, s, t) for nm, s, t, _ in arrows))
    values: dict[Path, np.ndarray] = {}
    span: dict[tuple[int, int], list] = {}
    for v in range(n):
        values[Path(v, v, ())] = alg.identity(v)
    # per pair: echelon rows as (pivot column, normalized vector, combination over normal words)
    normals: dict[tuple[int, int], list[Path]] = {(s, t): [] for s in range(n) for t in range(n)}
    ech: dict[tuple[int, int], list[tuple[int, np.ndarray, dict]]] = {k: [] for k in normals}

    def reduce(pair, vec):
        vec = vec.copy()
        comb: dict[Path, Any] = {}
        for piv, row, rc in ech[pair]:
            c = vec[piv]
            if c != 0:
                vec = F.reduce(vec - c * row)
                for p, d in rc.items():
                    comb[p] = F.normalize(comb.get(p, 0) + c * d)
        return vec, comb

    def insert(pair, path, vec):
        res, comb = reduce(pair, vec)
        nz = np.nonzero(res != 0)[0]
        if nz.size == 0:
            return False, comb
        piv = int(nz[0])
        inv = F.inv(res[piv])
        row = F.reduce(res * inv)
        rc = {p: F.normalize(-c * inv) for p, c in comb.items() if c != 0}
        rc[path] = inv
        ech[pair].append((piv, row, rc))
        return True, None

    for v in range(n):
        insert((v, v), Path(v, v, ()), values[Path(v, v, ())])
        normals[(v, v)].append(Path(v, v, ()))
    relations: list[Sparse] = []
    frontier = []
    for i, (nm, s, t, val) in enumerate(arrows):
        p = Path(s, t, (i,))
        ok, comb = insert((s, t), p, val)
        if not ok:
            raise ValueError(f"arrow {nm!r} is a combination of shorter words")
        values[p] = val
        normals[(s, t)].append(p)
        frontier.append(p)
    normal_words = {p.arrows for p in frontier}
    max_len = 1 if frontier else 0
    while frontier:
        cands = []
        for p in frontier:
            for i in quiver.out_arrows(p.target):
                w = p.arrows + (i,)
                if w[1:] in normal_words:
                    cands.append(Path(p.source, quiver.arrows[i].target, w))
        cands.sort(key=path_key)
        new = []
        for q in cands:
            head = Path(q.source, quiver.arrows[q.arrows[-1]].source, q.arrows[:-1])
            last = quiver.arrow_path(q.arrows[-1])
            val = alg.then(q.source, head.target, q.target, values[head], values[last])
            ok, comb = insert((q.source, q.target), q, val)
            if ok:
                values[q] = val
                normals[(q.source, q.target)].append(q)
                new.append(q)
            else:
                rel = {q: F.one()}
                for p, c in comb.items():
                    if c != 0:
                        rel[p] = F.neg(c)
                relations.append(rel)
        for q in new:
            normal_words.add(q.arrows)
        if new:
            max_len = len(new[0].arrows)
        frontier = new
    # relations with a trivial-path or arrow term would not be admissible
    for rel in relations:
        if any(len(p.arrows) < 2 for p in rel):
            raise ValueError("generated relation is not admissible; arrows do not span rad/rad^2")
    if nilpotency_bound is not None:
        pres = AlgebraPresentation(F, quiver, relations, nilpotency_bound, compose, name=name)
    else:
        # relations need not be homogeneous: a path longer than every normal
        # word may still be nonzero, so raise the bound until paths vanish
        total = sum(len(v) for v in normals.values())
        L = max(max_len, 1)
        while True:
            try:
                pres = AlgebraPresentation(F, quiver, relations, L, compose, name=name)
                break
            except NilpotencyError:
                if L >= total:
                    raise
                L += 1
    return pres, {p: values[p] for p in pres.basis}


def _pair_columns(F: GroundField, A: AlgebraPresentation, s: int, t: int, idx: list[int]) -> np.ndarray:
    """Columns (in the coordinates of pair (s, t)) of the given basis indices."""
    pos = {b: k for k, b in enumerate(A.pair_basis[(s, t)])}
    M = F.zeros((len(pos), len(idx)))
    for j, b in enumerate(idx):
        M[pos[b], j] = F.one()
    return M


@dataclass
class CornerData:
    """A corner algebra eAe together with how it sits inside A.

    ``vertices[k]`` is the A-vertex of corner vertex ``k``; ``embedding`` maps
    each corner basis path to its value as a sparse combination of A's
    normal paths; ``arrow_paths`` gives each corner arrow as a path of A.
    """

    algebra: AlgebraPresentation
    parent: AlgebraPresentation
    vertices: tuple[int, ...]
    embedding: dict[Path, Sparse]
    arrow_paths: tuple[Path, ...]


def _pair_algebra(A: AlgebraPresentation, verts: Sequence[int]) -> AbstractAlgebra:
    """eAe as an abstract algebra with coordinates in A's pair bases."""
    F = A.field
    m = len(verts)
    dims = np.array([[len(A.pair_basis[(verts[s], verts[t])]) for t in range(m)] for s in range(m)])

    def then(s, mid, t, x, y):
        S, M, T = verts[s], verts[mid], verts[t]
        out = F.zeros(len(A.pair_basis[(S, T)]))
        pos = {b: k for k, b in enumerate(A.pair_basis[(S, T)])}
        bx, by = A.pair_basis[(S, M)], A.pair_basis[(M, T)]
        for i in np.nonzero(x != 0)[0]:
            for j in np.nonzero(y != 0)[0]:
                c = F.mul(x[i], y[j])
                for p, d in A.then_basis(bx[i], by[j]).items():
                    k = pos[A.index[p]]
                    out[k] = F.add(out[k], F.mul(c, d))
        return out

    def identity(v):
        V = verts[v]
        out = F.zeros(len(A.pair_basis[(V, V)]))
        out[A.pair_basis[(V, V)].index(A.index[Path(V, V, ())])] = F.one()
        return out

    return AbstractAlgebra(F, [A.vertices[v] for v in verts], dims, then, identity)


def corner(A: AlgebraPresentation, e: Sequence[int | str]) -> CornerData:
    """The corner algebra eAe for a set of vertices ``e``."""
    verts = parse_idempotent(A, e)
    F = A.field
    alg = _pair_algebra(A, verts)
    m = len(verts)
    # radical of eAe: normal paths of positive length; square computed by products
    rad = {}
    for s in range(m):
        for t in range(m):
            idx = A.pair_basis[(verts[s], verts[t])]
            pos = [k for k, b in enumerate(idx) if A.basis[b].arrows]
            M = F.zeros((len(idx), len(pos)))
            for j, k in enumerate(pos):
                M[k, j] = F.one()
            rad[(s, t)] = M
    sq = {}
    for s in range(m):
        for t in range(m):
            cols = []
            for mid in range(m):
                X, Y = rad[(s, mid)], rad[(mid, t)]
                for i in range(X.shape[1]):
                    for j in range(Y.shape[1]):
                        cols.append(alg.then(s, mid, t, X[:, i], Y[:, j]))
            d = int(alg.dims[s][t])
            sq[(s, t)] = la.colspace(F, np.stack(cols, axis=1)) if cols else F.zeros((d, 0))
    arrows = []
    arrow_paths = []
    for s in range(m):
        for t in range(m):
            idx = A.pair_basis[(verts[s], verts[t])]
            cur = sq[(s, t)]
            r = cur.shape[1]
            for k, b in enumerate(idx):
                p = A.basis[b]
                if not p.arrows:
                    continue
                vec = F.zeros(len(idx))
                vec[k] = F.one()
                trial = la.hstack(F, [cur, vec[:, None]], len(idx))
                if la.rank(F, trial) > r:
                    cur, r = trial, r + 1
                    names = A.word(p)
                    arrows.append((".".join(names), s, t, vec, p))
    arrows.sort(key=lambda a: (path_key(a[4]),))
    pres, values = build_presentation(
        alg, [(nm, s, t, v) for nm, s, t, v, _ in arrows], compose=A.compose,
        name=None if A.name is None else f"{A.name}[{','.join(A.vertices[v] for v in verts)}]",
    )
    embedding = {}
    for p, val in values.items():
        S, T = verts[p.source], verts[p.target]
        embedding[p] = {A.basis[A.pair_basis[(S, T)][k]]: val[k] for k in np.nonzero(val != 0)[0]}
    return CornerData(pres, A, verts, embedding, tuple(a[4] for a in arrows))


# ---------------------------------------------------------------------------
# merging


def merge_quivers(
    Ae: AlgebraPresentation,
    Af: AlgebraPresentation,
    alphas: Sequence[tuple[str, str, str]],
    betas: Sequence[tuple[str, str, str]],
) -> AlgebraPresentation:
    """Join two algebras by new arrows between them.

    ``alphas`` are (name, vertex of Af, vertex of Ae) and ``betas`` are
    (name, vertex of Ae, vertex of Af).  Two families of monomials are added:
    a basis path of ``Ae`` starting where some alpha ends, followed by a beta;
    and a beta, then a basis path of ``Af``, then an alpha.  Then no nonzero
    path between vertices of one side passes through the other side.
    """
    if Ae.field != Af.field:
        raise PresentationError("fields differ")
    if Ae.compose != Af.compose:
        raise PresentationError("composition conventions differ")
    F = Ae.field
    if set(Ae.vertices) & set(Af.vertices):
        raise PresentationError("vertex names must be disjoint")
    names = [a.name for a in Ae.arrows] + [a.name for a in Af.arrows]
    names += [a[0] for a in alphas] + [b[0] for b in betas]
    if len(set(names)) != len(names):
        raise PresentationError("arrow names must be unique")
    verts = Ae.vertices + Af.vertices
    ne = Ae.n
    arrows = list(Ae.arrows) + [Arrow(a.name, a.source + ne, a.target + ne) for a in Af.arrows]
    na, nf = len(Ae.arrows), len(Af.arrows)
    alpha_idx, beta_idx = [], []
    for nm, src, tgt in alphas:
        if src not in Af.vertices or tgt not in Ae.vertices:
            raise PresentationError(f"alpha arrow {nm!r} must go from the second algebra to the first")
        alpha_idx.append(len(arrows))
        arrows.append(Arrow(nm, Af.vertices.index(src) + ne, Ae.vertices.index(tgt)))
    for nm, src, tgt in betas:
        if src not in Ae.vertices or tgt not in Af.vertices:
            raise PresentationError(f"beta arrow {nm!r} must go from the first algebra to the second")
        beta_idx.append(len(arrows))
        arrows.append(Arrow(nm, Ae.vertices.index(src), Af.vertices.index(tgt) + ne))
    for k in alpha_idx:
        for l in beta_idx:
            if arrows[k].target == arrows[l].source:
                raise PresentationError(
                    f"alpha {arrows[k].name!r} ends where beta {arrows[l].name!r} starts"
                )
    quiver = Quiver(verts, tuple(arrows))

    def shift(p: Path, off: int, aoff: int) -> Path:
        return Path(p.source + off, p.target + off, tuple(i + aoff for i in p.arrows))

    rels: list[Sparse] = [{shift(p, 0, 0): c for p, c in r.items()} for r in Ae.relations]
    rels += [{shift(p, ne, na): c for p, c in r.items()} for r in Af.relations]
    # a basis path of Ae from the end of an alpha, then a beta: killed
    for l in beta_idx:
        starts = sorted({arrows[k].target for k in alpha_idx})
        for s in starts:
            for b in Ae.pair_basis[(s, arrows[l].source)]:
                q = Ae.basis[b]
                rels.append({Path(s, arrows[l].target, q.arrows + (l,)): F.one()})
    # beta, then a basis path p of Af, then alpha: killed
    for l in beta_idx:
        for k in alpha_idx:
            s, t = arrows[l].target - ne, arrows[k].source - ne
            for b in Af.pair_basis[(s, t)]:
                p = shift(Af.basis[b], ne, na)
                w = (l,) + p.arrows + (k,)
                rels.append({Path(arrows[l].source, arrows[k].target, w): F.one()})
    L = Ae.L + Af.L + 1
    return AlgebraPresentation(F, quiver, rels, L, Ae.compose)


# ---------------------------------------------------------------------------
# isomorphism of presentations


@dataclass
class PresentationIso:
    """Vertex bijection and arrow images, ``arrow_images[i] = {arrow of B: coefficient}``."""

    vertex_map: tuple[int, ...]
    arrow_images: tuple[dict[int, Any], ...]

    @property
    def arrow_map(self) -> tuple[int, ...] | None:
        """Arrow bijection when every arrow goes to a single arrow with coefficient 1."""
        out = []
        for img in self.arrow_images:
            if len(img) != 1 or next(iter(img.values())) != 1:
                return None
            out.append(next(iter(img)))
        return tuple(out)


def find_presentation_iso(A: AlgebraPresentation, B: AlgebraPresentation, limit: int = 200000,
                          linear: bool = True) -> PresentationIso | None:
    """Search for an isomorphism sending vertices to vertices and arrows to arrows.

    Arrow bijections are tried first; with ``linear`` each group of parallel
    arrows may then also be sent through an invertible matrix with entries in
    {-1, 0, 1}.  A map killing every relation is a surjective homomorphism,
    hence an isomorphism as the dimensions agree.  ``None`` means no such
    isomorphism was found, not that the algebras differ.
    """
    if A.field != B.field or A.n != B.n or A.dim != B.dim or len(A.arrows) != len(B.arrows):
        return None
    n = A.n
    CA, CB = A.cartan, B.cartan

    def arrow_counts(X):
        M = np.zeros((n, n), dtype=int)
        for a in X.arrows:
            M[a.source, a.target] += 1
        return M

    QA, QB = arrow_counts(A), arrow_counts(B)
    perms = [perm for perm in itertools.permutations(range(n))
             if np.array_equal(CA, CB[np.ix_(perm, perm)]) and np.array_equal(QA, QB[np.ix_(perm, perm)])]
    groups: dict[tuple[int, int], list[int]] = {}
    for i, a in enumerate(A.arrows):
        groups.setdefault((a.source, a.target), []).append(i)
    keys = sorted(groups)
    tried = 0
    for stage in ((False, True) if linear else (False,)):
        for perm in perms:
            targets = {k: [j for j, b in enumerate(B.arrows) if b.source == perm[k[0]] and b.target == perm[k[1]]]
                       for k in keys}
            choices = [_group_images(A.field, groups[k], targets[k], stage) for k in keys]
            for combo in itertools.product(*choices):
                tried += 1
                if tried > limit:
                    return None
                images: list[dict] = [{}] * len(A.arrows)
                for part in combo:
                    for i, img in part:
                        images[i] = img
                if _relations_map_to_zero(A, B, perm, images):
                    return PresentationIso(tuple(perm), tuple(images))
    return None


def _group_images(F: GroundField, sources: list[int], targets: list[int], linear: bool) -> list:
    """Candidate images for one group of parallel arrows, as lists of ``(arrow, {target: coeff})``."""
    k = len(sources)
    out = []
    if not linear or k > 3:
        for images in itertools.permutations(targets):
            out.append([(i, {j: F.one()}) for i, j in zip(sources, images)])
        return out
    vals = [F(0), F(1), F(-1)]
    for entries in itertools.product(vals, repeat=k * k):
        M = F.array([list(entries[r * k:(r + 1) * k]) for r in range(k)])
        if la.rank(F, M) < k:
            continue
        out.append([(i, {targets[c]: M[r, c] for c in range(k) if M[r, c] != 0}) for r, i in enumerate(sources)])
    return out


def _path_image(B: AlgebraPresentation, perm, images, p: Path) -> Sparse:
    F = B.field
    terms: dict[tuple[int, ...], Any] = {(): F.one()}
    for i in p.arrows:
        nxt: dict[tuple[int, ...], Any] = {}
        for w, c in terms.items():
            for j, d in images[i].items():
                key = w + (j,)
                nxt[key] = F.normalize(nxt.get(key, 0) + c * d)
        terms = {w: c for w, c in nxt.items() if c != 0}
    out: Sparse = {}
    for w, c in terms.items():
        _axpy(F, out, c, B.normal_form_path(Path(perm[p.source], perm[p.target], w)))
    return out


def _relations_map_to_zero(A, B, perm, images) -> bool:
    for rel in A.relations:
        img = {}
        for p, c in rel.items():
            _axpy(B.field, img, c, _path_image(B, perm, images, p))
        if img:
            return False
    # every path of length L_A + 1 must vanish in B as well
    for p in A.quiver.all_paths(A.L + 1):
        if len(p.arrows) == A.L + 1 and _path_image(B, perm, images, p):
            return False
    return True


def truncated_algebra(field: GroundField, vertices: Sequence[str], arrows: Sequence[tuple[str, str, str]],
                      L: int, compose: str = LEFT_TO_RIGHT, name: str | None = None) -> AlgebraPresentation:
    """KQ / J^(L+1): relations are all paths of length L + 1."""
    verts = tuple(vertices)
    quiver = Quiver(verts, tuple(Arrow(n, verts.index(s), verts.index(t)) for n, s, t in arrows))
    rels = [{p: field.one()} for p in quiver.all_paths(L + 1) if len(p.arrows) == L + 1]
    return AlgebraPresentation(field, quiver, rels, L, compose, name=name)


def random_truncated_algebra(seed: int, field: GroundField | None = None, max_vertices: int = 5,
                             max_parallel: int = 2, max_L: int = 3, max_dim: int = 14,
                             require_cycle: bool = True) -> AlgebraPresentation:
    """A seeded random truncated path algebra ``KQ/J^(L+1)``.

    Quivers are sparse (about one arrow per vertex) with at most
    ``max_parallel`` parallel arrows; draws exceeding ``max_dim`` or, with
    ``require_cycle``, lacking an oriented cycle are rejected and redrawn
    from the same generator.
    """
    F = GroundField(2) if field is None else field
    rng = np.random.default_rng(seed)
    while True:
        n = int(rng.integers(1, max_vertices + 1))
        names = [str(v + 1) for v in range(n)]
        arrows = []
        for s in range(n):
            for t in range(n):
                if rng.random() < 1.2 / (n + 1):
                    k = int(rng.integers(1, max_parallel + 1))
                    for _ in range(k):
                        arrows.append((f"a{len(arrows) + 1}", names[s], names[t]))
        L = int(rng.integers(1, max_L + 1))
        # the dimension is the number of paths of length at most L
        adj = np.zeros((n, n), dtype=np.int64)
        for _, s, t in arrows:
            adj[names.index(s), names.index(t)] += 1
        power, dim = np.eye(n, dtype=np.int64), 0
        for _ in range(L + 1):
            dim += int(power.sum())
            power = power @ adj
        if dim > max_dim:
            continue
        A = truncated_algebra(F, names, arrows, L, name=f"trunc:{seed}")
        if require_cycle and not precyclic_vertices(A):
            continue
        return A
