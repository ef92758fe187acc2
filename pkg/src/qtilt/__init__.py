"""Exact computations with idempotent corners and strong tilting over quiver algebras."""

from .field import GF2, QQ, GroundField
from .presentation import (
    AlgebraPresentation,
    PresentationError,
    corner,
    find_presentation_iso,
    merge_quivers,
    parse_presentation,
    precyclic_vertices,
    random_truncated_algebra,
    truncated_algebra,
)
from .repmod import (
    ModuleMorphism,
    Representation,
    decompose,
    injective,
    is_isomorphic,
    projective,
    simple,
)
from .homology import Finite, InfiniteCertified, Unknown, bass_socle_test, pdim, setting_check
from .ttf import core, delta, nabla, sigma
from .tilting import endo_presentation, iterate, pfin_approx, strong_tilting, verify_tilting

__all__ = [
    "GF2", "QQ", "GroundField",
    "AlgebraPresentation", "PresentationError", "corner", "find_presentation_iso", "merge_quivers",
    "parse_presentation", "precyclic_vertices", "random_truncated_algebra", "truncated_algebra",
    "ModuleMorphism", "Representation", "decompose", "injective", "is_isomorphic", "projective", "simple",
    "Finite", "InfiniteCertified", "Unknown", "bass_socle_test", "pdim", "setting_check",
    "core", "delta", "nabla", "sigma",
    "endo_presentation", "iterate", "pfin_approx", "strong_tilting", "verify_tilting",
]
