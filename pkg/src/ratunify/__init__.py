"""Rational-tree unification over equation systems, with a small relational engine."""

from .engine import Engine, run
from .eqsystem import BACKENDS, EqSystem, empty
from .image import answer, image_to_depth, mu_image
from .minimize import bisimilar, minimize, to_canonical
from .occurs import POLICIES, OccursPolicy, has_cycle
from .syntax import format_term, parse_problem, parse_term
from .terms import (CUT, App, Ctor, FreshSource, Mu, Var, app, expand_to_depth, mu_equal,
                    substitute, unfold_step, well_formed)
from .unify import Unified, unify, unify_many

__all__ = [
    "App", "BACKENDS", "CUT", "Ctor", "Engine", "EqSystem", "FreshSource", "Mu", "OccursPolicy",
    "POLICIES", "Unified", "Var", "answer", "app", "bisimilar", "empty", "expand_to_depth",
    "format_term", "has_cycle", "image_to_depth", "minimize", "mu_equal", "mu_image",
    "parse_problem", "parse_term", "run", "substitute", "to_canonical", "unfold_step", "unify",
    "unify_many", "well_formed",
]
