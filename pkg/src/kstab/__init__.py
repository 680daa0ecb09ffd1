"""Exact-arithmetic K-stability computations for one-nodal genus 12 Fano threefolds."""

from pathlib import Path

from .errors import KStabError
from .exact import Poly, PiecewisePoly, rat
from .picard import Basis, DivisorClass, IntersectionForm, pair, parse_class
from .delpezzo import SurfaceModel, build_blowup_plane, build_blowup_quadric, enumerate_negative_curves
from .zariski import SurfaceDecomposition, VolumeSweep, decompose, sweep, volume
from .threefold import ChamberSpec1D, RestrictionMap, ThreefoldRing, verify_chambers, volume_poly
from .invariants import beta, s_curve, s_divisor, tau
from .cases import CaseSpecFile, load_case
from .runner import CaseReport, run_case, run_corpus

DEFAULT_CORPUS = Path(__file__).parent / "corpus"

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CORPUS",
    "Basis",
    "CaseReport",
    "CaseSpecFile",
    "ChamberSpec1D",
    "DivisorClass",
    "IntersectionForm",
    "KStabError",
    "PiecewisePoly",
    "Poly",
    "RestrictionMap",
    "SurfaceDecomposition",
    "SurfaceModel",
    "ThreefoldRing",
    "VolumeSweep",
    "beta",
    "build_blowup_plane",
    "build_blowup_quadric",
    "decompose",
    "enumerate_negative_curves",
    "load_case",
    "pair",
    "parse_class",
    "rat",
    "run_case",
    "run_corpus",
    "s_curve",
    "s_divisor",
    "sweep",
    "tau",
    "verify_chambers",
    "volume",
    "volume_poly",
]
