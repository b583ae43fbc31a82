"""First-order model checking over finite structures with an accounted
space model, plus reachability algorithms and the translations between the
two problem families."""

from .core import (And, Apply, Assignment, Classification, Const, Eq, Exists,
                   Forall, Formula, Not, Or, Rel, Structure, Term, Var,
                   Vocabulary, classify, eval_atom, free_vars, nnf,
                   num_variables, structure_size, subformula_count,
                   substitute_const, width)
from .digraph import Digraph
from .engines import (EvalReport, SpaceMeter, build_guarded, eval_bottom_up,
                      eval_brute, eval_dnc_sigma1, eval_sigma_t, evaluate,
                      split_subformula)
from .errors import (AssignmentError, BudgetExceeded, ModelCheckError,
                     ParseError, PreconditionError, StructureError,
                     UnsupportedFeatureError, VocabularyError)
from .reach import ReachReport, bfs_reach, ck_reach, diag_reach, savitch_reach
from .reductions import (ConfigVertex, StconInstance, chain_sentence,
                         eliminate_functions, extend_structure, mc_to_stcon,
                         stcon_to_mc, tuple_formula, value_exists,
                         value_forall)
from .textio import (parse_digraph, parse_formula, parse_structure,
                     print_digraph, print_formula, print_report,
                     print_structure)

__all__ = [name for name in dir() if not name.startswith("_")]
