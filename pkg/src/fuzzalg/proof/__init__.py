from .checker import DerivationError, RuleMismatch, SideDataError, UnknownAxiom, check_derivation
from .deduction import ContainsSub, NotAPremise, deduction_merge, deduction_split
from .derivation import (RULES, A, Axiom, Cong, Cut, Derivation, Exp, Fun, Inf, Mon, Refl, Sub,
                         Sup, Sym, Trans, Weak, format_path, rule_name)
from .saturate import (BudgetExhausted, Closure, Proven, Unknown, UniverseTooLarge, derives,
                       ground_terms, saturate)
from .rewrite import RewriteError, in_context, rewrite, rewrite_chain
