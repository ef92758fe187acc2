"""Command line front end: ``qtilt check|corner|approx|tilt|iterate|demo``.

Exit status 0 means a verdict was computed (negative verdicts included),
1 means the input was rejected and 2 means an internal consistency check
failed.  JSON reports contain no timings so that reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from importlib import resources
from typing import Any, Sequence

from .homology import (
    bass_socle_test,
    default_bound,
    off_corner_module,
    setting_check,
    simple_pdims,
)
from .oracle import (
    DEFAULT_CAP,
    EnumerationError,
    agrees,
    brute_pfin_approx,
    check_approximation,
    enumerate_reps,
)
from .presentation import (
    AlgebraPresentation,
    PresentationError,
    corner,
    find_presentation_iso,
    merge_quivers,
    parse_idempotent,
    parse_presentation,
    precyclic_vertices,
    presentation_from_dict,
    random_truncated_algebra,
)
from .repmod import decompose, module_from_text, projective_cover, standard_module
from .tilting import (
    FINDIM_ZERO,
    GLDIM_FINITE,
    CornerStrategy,
    NoStrategyError,
    SettingError,
    corner_strategy,
    iterate,
    pfin_approx,
    strong_tilting,
    verify_tilting,
)
from .ttf import corner_of

FIXTURES = ("ex2.2", "ex4.9", "ex6.9", "ist", "merge-demo", "trunc:<seed>")
DEFAULT_E = {"ex2.2": ("1", "2"), "ex4.9": ("1", "2"), "ex6.9": ("1", "2", "3"), "ist": ("1", "2"),
             "merge-demo": ("1", "2")}
STRATEGIES = ("auto", "findim0", "gldim")
ORACLE_FLOOR = 4
_STANDARD = {"S": "simple", "P": "projective", "I": "injective"}


class InputError(ValueError):
    pass


class InconsistencyError(AssertionError):
    pass


# ---------------------------------------------------------------------------
# inputs


def _fixture_text(name: str) -> str:
    return resources.files("qtilt").joinpath("fixtures", f"{name}.json").read_text()


def merge_demo() -> AlgebraPresentation:
    """The ``ist`` algebra on {1, 2} joined to the path algebra of 3 -> 4."""
    A = parse_presentation(_fixture_text("ist"), name="ist")
    B = presentation_from_dict({
        "field": "Q", "compose": A.compose, "vertices": ["3", "4"],
        "arrows": [{"name": "eta", "from": "3", "to": "4"}], "relations": [], "nilpotency_bound": 1,
    }, name="A2")
    M = merge_quivers(A, B, [("alpha0", "3", "1")], [("beta0", "2", "4")])
    M.name = "merge-demo"
    return M


def load_algebra(source: str) -> AlgebraPresentation:
    """A bundled fixture id, ``trunc:<seed>``, or the path of a presentation file."""
    if source in DEFAULT_E and source != "merge-demo":
        return parse_presentation(_fixture_text(source), name=source)
    if source == "merge-demo":
        return merge_demo()
    if source.startswith("trunc:"):
        try:
            seed = int(source[len("trunc:"):])
        except ValueError:
            raise InputError(f"bad seed in {source!r}") from None
        return random_truncated_algebra(seed)
    try:
        with open(source) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror}") from None
    return parse_presentation(text, name=source)


def default_e(source: str, A: AlgebraPresentation) -> tuple[int, ...]:
    if source in DEFAULT_E:
        return parse_idempotent(A, DEFAULT_E[source])
    if source.startswith("trunc:"):
        return precyclic_vertices(A) or tuple(range(A.n))
    raise InputError("--e is required for algebras read from a file")


def load_module(A: AlgebraPresentation, source: str):
    """``S<v>``, ``P<v>``, ``I<v>`` for standard modules, else a module file."""
    if source[:1] in _STANDARD and source[1:] in A.vertices:
        return standard_module(A, _STANDARD[source[0]], source[1:])
    try:
        with open(source) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror}") from None
    return module_from_text(A, text)


def _digest(obj: Any) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


# ---------------------------------------------------------------------------
# stages


def _names(A: AlgebraPresentation, vs) -> list[str]:
    return [A.vertices[v] for v in vs]


def _strategy(A, e, name: str, bound) -> CornerStrategy | None:
    if name == "auto":
        return None
    C = corner_of(A, e).algebra
    if name == "findim0":
        if not bass_socle_test(C, "right"):
            raise InputError("strategy findim0: the corner fails the socle test")
        return CornerStrategy(FINDIM_ZERO)
    pd = simple_pdims(C, bound)
    if not all(r.is_finite for r in pd.values()):
        raise InputError("strategy gldim: a simple corner module has no finite projective dimension")
    return CornerStrategy(GLDIM_FINITE)


def _map_json(p) -> dict:
    F = p.field
    return {"source_dims": list(p.source.dims), "target_dims": list(p.target.dims),
            "components": [[[F.format(x) for x in row] for row in m.tolist()] for m in p.mats]}


def stage_corner(A, e) -> dict:
    C = corner(A, e)
    out = {"presentation": C.algebra.to_json(),
           "projectives": [list(standard_module(C.algebra, "projective", v).dims) for v in range(C.algebra.n)]}
    return out


def stage_approx(A, e, M, strategy, bound, oracle: bool) -> dict:
    res = pfin_approx(M, e, strategy, bound)
    pieces = decompose(res.module).pieces
    out = {
        "target_dims": list(M.dims),
        "domain_dims": list(res.module.dims),
        "domain_summands": [list(X.dims) for X in pieces],
        "pdim": res.pdim.to_json(),
        "strategy": res.strategy,
        "right_minimal": res.minimal,
        "map": _map_json(res.map),
    }
    if res.corner is not None:
        out["corner_domain_dims"] = list(res.corner.module.dims)
    if not res.pdim.is_finite or not res.minimal:
        raise InconsistencyError("approximation lacks finite pdim or right minimality")
    if oracle:
        out["oracle"] = _oracle_check(A, M, res, pieces)
    return out


def _oracle_check(A, M, res, pieces) -> dict:
    bound = min(DEFAULT_CAP, max(ORACLE_FLOOR, M.dim, max((X.dim for X in pieces), default=0)))
    try:
        cat = enumerate_reps(A, bound)
    except EnumerationError as exc:
        return {"status": "unavailable", "reason": str(exc)}
    ok = check_approximation(res.map, cat)
    out = {"catalog_bound": bound, "catalog_size": len(cat), "factorization": ok}
    if not ok:
        raise InconsistencyError("a catalog map does not factor through the approximation")
    if max((X.dim for X in pieces), default=0) > bound or M.dim > bound:
        out["status"] = "inconclusive"
        out["reason"] = "a summand exceeds the catalog cap"
        return out
    brute = brute_pfin_approx(M, cat)
    same = agrees(res.map, brute.map)
    out["status"] = "agrees" if same else "disagrees"
    out["brute_domain_dims"] = list(brute.module.dims)
    if not same:
        raise InconsistencyError("brute-force and pipeline approximations differ")
    return out


def stage_tilt(A, e, strategy, bound, verify: bool = True) -> dict:
    T = strong_tilting(A, e, strategy, bound)
    out = T.to_json()
    out["describe"] = [T.describe(k) for k in range(len(T.summands))]
    if verify:
        rep = verify_tilting(T, bound)
        out["verification"] = rep.to_json()
        if not rep.passes:
            raise InconsistencyError("assembled strong tilting module fails verification")
    return out


def stage_iterate(A, e, bound) -> dict:
    rep = iterate(A, e, bound)
    if not rep.consistent:
        raise InconsistencyError(rep.reason or "inconsistent iteration report")
    return rep.to_json()


def stage_merge(A) -> dict:
    """The corner at the original vertices recovers the first algebra; eΛ(1-e) is projective."""
    first = parse_presentation(_fixture_text("ist"), name="ist")
    C = corner(A, ("1", "2")).algebra
    X = off_corner_module(A, (0, 1))
    proj = projective_cover(X).source.dims == X.dims
    iso = find_presentation_iso(C, first) is not None
    if not (iso and proj):
        raise InconsistencyError("merged algebra does not recover its corner")
    return {"corner_isomorphic_to_first": iso, "off_corner_projective": proj}


# ---------------------------------------------------------------------------
# commands


def _run(args) -> dict:
    A = load_algebra(args.algebra)
    e = parse_idempotent(A, args.e.split(",")) if args.e else default_e(args.algebra, A)
    bound = args.bound
    report: dict = {
        "command": args.argv,
        "inputs": {"algebra": args.algebra, "algebra_hash": A.content_hash()},
        "seed": args.seed,
        "e": _names(A, e),
        "bound": default_bound(A) if bound is None else bound,
    }
    cmd = args.command
    if cmd == "check":
        report["setting"] = setting_check(A, e, bound).to_json()
    elif cmd == "corner":
        report["corner"] = stage_corner(A, e)
        if args.output:
            with open(args.output, "w") as fh:
                json.dump(report["corner"]["presentation"], fh, indent=1)
    elif cmd == "approx":
        M = load_module(A, args.module)
        report["inputs"]["module"] = args.module
        report["inputs"]["module_hash"] = _digest(M.to_json())
        strategy = _strategy(A, e, args.strategy, bound)
        try:
            report["approximation"] = stage_approx(A, e, M, strategy, bound, args.oracle)
        except (SettingError, NoStrategyError) as exc:
            report["approximation"] = None
            report["verdict"] = f"NotApplicable: {exc}"
            report["setting"] = setting_check(A, e, bound).to_json()
    elif cmd == "tilt":
        strategy = _strategy(A, e, args.strategy, bound)
        try:
            report["tilting"] = stage_tilt(A, e, strategy, bound)
        except (SettingError, NoStrategyError) as exc:
            report["tilting"] = None
            report["verdict"] = f"NotApplicable: {exc}"
            report["setting"] = setting_check(A, e, bound).to_json()
    elif cmd == "iterate":
        report["iteration"] = stage_iterate(A, e, bound)
        report["verdict"] = report["iteration"]["verdict"]
    elif cmd == "demo":
        report.update(run_demo(A, e, bound, args.oracle))
    return report


def run_demo(A, e, bound, oracle: bool) -> dict:
    out: dict = {}
    setting = setting_check(A, e, bound)
    out["simple_pdims"] = {A.vertices[v]: r.to_json() for v, r in simple_pdims(A, bound).items()}
    out["corner"] = stage_corner(A, e)
    out["setting"] = setting.to_json()
    if A.name == "merge-demo":
        out["merge"] = stage_merge(A)
    if not setting.passes:
        out["verdict"] = f"SettingFails: {setting.failing_gate}"
        return out
    it = iterate(A, e, bound)
    if not it.consistent:
        raise InconsistencyError(it.reason or "inconsistent iteration report")
    out["iteration"] = it.to_json()
    out["verdict"] = it.verdict
    if oracle:
        strategy = corner_strategy(A, e, bound)
        out["oracle"] = {A.vertices[v]: stage_approx(A, e, standard_module(A, "injective", v), strategy,
                                                      bound, True)["oracle"] for v in range(A.n)}
    return out


# ---------------------------------------------------------------------------
# text output


def render_text(obj: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if _flat(v):
                lines.append(f"{pad}- {_scalar(v)}")
            else:
                lines.append(f"{pad}-")
                lines.extend(render_text(v, indent + 1))
    else:
        lines.append(pad + _scalar(obj))
    return lines


def _flat(v: Any) -> bool:
    if isinstance(v, dict):
        return not v
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and _flat(x)) for x in v)
    return True


def _scalar(v: Any) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if v is None:
        return "-"
    return str(v)


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--bound", type=int, default=None, help="resolution bound (default 2*dim+2)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--oracle", action="store_true", help="cross-check against brute-force enumeration")
    common.add_argument("--e", default=None, help="comma separated vertex names")

    parser = argparse.ArgumentParser(prog="qtilt", description="Corner reduction and strong tilting for quiver algebras")
    sub = parser.add_subparsers(dest="command", required=True)
    alg_help = f"presentation file or fixture id ({', '.join(FIXTURES)})"
    for name, text in (("check", "check the hypotheses of the corner reduction"),
                       ("corner", "presentation of the corner algebra"),
                       ("tilt", "strong tilting module with verification"),
                       ("iterate", "decide unlimited iteration of strong tilting")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("algebra", help=alg_help)
        if name == "corner":
            p.add_argument("--output", "-o", default=None, help="write the corner presentation here")
        if name == "tilt":
            p.add_argument("--strategy", choices=STRATEGIES, default="auto")
    p = sub.add_parser("approx", parents=[common], help="minimal approximation by a module of finite pdim")
    p.add_argument("algebra", help=alg_help)
    p.add_argument("module", help="module file, or S<v>, P<v>, I<v>")
    p.add_argument("--strategy", choices=STRATEGIES, default="auto")
    p = sub.add_parser("demo", parents=[common], help="run the full pipeline on a bundled fixture")
    p.add_argument("algebra", metavar="fixture", help=", ".join(FIXTURES))
    return parser


def execute(argv: Sequence[str]) -> tuple[int, dict | None, str]:
    """Run one command; returns (exit code, report, formatted output)."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return (0 if exc.code == 0 else 1), None, ""
    args.argv = list(argv)
    if args.command == "demo" and args.algebra not in DEFAULT_E and not args.algebra.startswith("trunc:"):
        return 1, None, f"error: unknown fixture {args.algebra!r}; choose from {', '.join(FIXTURES)}\n"
    try:
        report = _run(args)
    except (InputError, PresentationError, ValueError) as exc:
        return 1, None, f"error: {exc}\n"
    except AssertionError as exc:
        return 2, None, f"internal error: {exc}\n"
    if args.format == "json":
        text = json.dumps(report, sort_keys=True, indent=1) + "\n"
    else:
        text = "\n".join(render_text(report)) + "\n"
    return 0, report, text


def main(argv: Sequence[str] | None = None) -> int:
    code, _, text = execute(sys.argv[1:] if argv is None else argv)
    (sys.stdout if code == 0 else sys.stderr).write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
