"""Independence-friendly logic workbench."""
from .encodings import builtin_sentence, encode_instance, oracle_solve
from .patterns import classify, detect_patterns, extends
from .rewrite import apply_rule, prenex, strong_regularize
from .skolem import skolemize, truth_by_skolem, truth_value_by_skolem
from .syntax import complete, parse_formula, parse_tree, prefix_tree, render_formula
from .teams import Structure, Team, Truth, neg_satisfies, satisfies, truth_value

__version__ = "0.1.0"

__all__ = [
    "Structure", "Team", "Truth", "apply_rule", "builtin_sentence", "classify", "complete",
    "detect_patterns", "encode_instance", "extends", "neg_satisfies", "oracle_solve", "parse_formula",
    "parse_tree", "prefix_tree", "prenex", "render_formula", "satisfies", "skolemize",
    "strong_regularize", "truth_by_skolem", "truth_value", "truth_value_by_skolem",
]
