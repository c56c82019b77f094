"""The Kummer-type family X_{t,s} of Klein-form intersections of three quadrics."""

from __future__ import annotations

from .auts import AutReport, ScalarPermutation, automorphism_bruteforce, rho, tau
from .family import BUCHI_PARAMS, FamilyParams, KleinSystem, compare_with_buchi, klein_system
from .fibrations import (
    PI_MINUS,
    PI_PLUS,
    ConicCurve,
    FiberDescriptor,
    Fibration,
    PlaneCurve,
    check_conic,
    conic_c1,
    conic_c2,
    conics,
    curve_catalog,
    fiber_decomposition,
    fibration,
    intersection_length,
    intersection_number,
    partition_L,
    sections_o_q,
    singular_fibers,
)
from .lines import FamilyLine, LineGraph, all_lines, line_graph, lines, parse_label
from .locus import BB_PARAMS, BREMNER_PARAMS, Genus2Data, LocusReport, genus2_data, locus_classify
from .quadrics import Rank4Analysis, rank4_analysis

__all__ = [
    "AutReport",
    "BB_PARAMS",
    "BREMNER_PARAMS",
    "BUCHI_PARAMS",
    "ConicCurve",
    "FamilyLine",
    "FamilyParams",
    "FiberDescriptor",
    "Fibration",
    "Genus2Data",
    "KleinSystem",
    "LineGraph",
    "LocusReport",
    "PI_MINUS",
    "PI_PLUS",
    "PlaneCurve",
    "Rank4Analysis",
    "ScalarPermutation",
    "all_lines",
    "automorphism_bruteforce",
    "check_conic",
    "compare_with_buchi",
    "conic_c1",
    "conic_c2",
    "conics",
    "curve_catalog",
    "fiber_decomposition",
    "fibration",
    "genus2_data",
    "intersection_length",
    "intersection_number",
    "klein_system",
    "line_graph",
    "lines",
    "locus_classify",
    "parse_label",
    "partition_L",
    "rank4_analysis",
    "rho",
    "sections_o_q",
    "singular_fibers",
    "tau",
]
