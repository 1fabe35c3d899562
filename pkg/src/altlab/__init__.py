"""Toolkit for agent-alternating and agent-nonrepeating epistemic logic."""
from .formula import Formula, normalize, occurrence_tree, parse, render, modal_depth
from .fragments import classify, classify_c
from .kripke import FrameClass, KripkeModel, PointedModel, frame_properties, model_check
from .bisim import bounded_family, greatest_family, verify_family
from .transform import alt_unravel, nr_partition
from .zoo import zoo

__version__ = "0.1.0"

__all__ = [
    "Formula", "FrameClass", "KripkeModel", "PointedModel", "alt_unravel", "bounded_family",
    "classify", "classify_c", "frame_properties", "greatest_family", "modal_depth", "model_check",
    "normalize", "nr_partition", "occurrence_tree", "parse", "render", "verify_family", "zoo",
]
