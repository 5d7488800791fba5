"""contab: a clausal connection tableaux prover for first-order logic.

The package provides a TPTP FOF front end, clausification, an
iterative-deepening connection tableaux search engine with a configurable
family of backtracking cuts, an independent proof checker, and a benchmark
harness for comparing cut strategies over a problem corpus.
"""

from .clausify import PreprocessOptions, problem_to_matrix
from .errors import (ContabError, InputError, ProverInternalError,
                     TptpSyntaxError, UnsupportedInputError)
from .logic import Clause, Literal, Matrix, Substitution
from .proof import (CheckResult, Proof, check, parse_machine, proof_digest,
                    render_machine, render_text)
from .search import (STRATEGIES, CutConfig, ExtCut, Outcome, SearchOptions,
                     prove, search_at_limit)
from .tptp import parse_problem, parse_problem_file

__version__ = "0.1.0"

__all__ = [
    "CheckResult",
    "Clause",
    "ContabError",
    "CutConfig",
    "ExtCut",
    "InputError",
    "Literal",
    "Matrix",
    "Outcome",
    "PreprocessOptions",
    "Proof",
    "ProverInternalError",
    "STRATEGIES",
    "SearchOptions",
    "Substitution",
    "TptpSyntaxError",
    "UnsupportedInputError",
    "check",
    "parse_machine",
    "parse_problem",
    "parse_problem_file",
    "problem_to_matrix",
    "proof_digest",
    "prove",
    "render_machine",
    "render_text",
    "search_at_limit",
    "__version__",
]
