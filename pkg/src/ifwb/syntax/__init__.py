from .formulas import (
    And, Atom, Const, Eq, Gap, Neg, Or, Quant, Term,
    all_names, bound_vars, children, constants_of, drop_vacuous_slashes, dual, exists, forall,
    free_vars, gaps, is_literal, is_nnf, is_regular, node_at, pretty, quantifier_free,
    regularity, relation_arities, render_formula, replace_at, slash_all, slash_nonempty,
    subst, var_sets, walk, with_children,
)
from .parser import ParseError, parse_any, parse_formula, parse_tree, tokenize
from .trees import (
    CompletionFlags, Path, PathStep, PrefixTree, TreeError,
    complete, completion_flags, paths, prefix_tree, renumber_gaps, tree_regularity,
)

__all__ = [
    "And", "Atom", "Const", "Eq", "Gap", "Neg", "Or", "Quant", "Term",
    "all_names", "bound_vars", "children", "constants_of", "drop_vacuous_slashes", "dual", "exists",
    "forall", "free_vars", "gaps", "is_literal", "is_nnf", "is_regular", "node_at", "pretty",
    "quantifier_free", "regularity", "relation_arities", "render_formula", "replace_at",
    "slash_all", "slash_nonempty", "subst", "var_sets", "walk", "with_children",
    "ParseError", "parse_any", "parse_formula", "parse_tree", "tokenize",
    "CompletionFlags", "Path", "PathStep", "PrefixTree", "TreeError",
    "complete", "completion_flags", "paths", "prefix_tree", "renumber_gaps", "tree_regularity",
]
