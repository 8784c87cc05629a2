from .syntax import (
    LType, Unit, OmegaT, Ground, Power, ProductT, ExpT,
    Star, Var, App, TupleT, Proj, Compr, Eq, Mem, NameRef,
    Top, Bot, And, Or, Implies, Not, Forall, Exists,
    Subseteq, Union, Inter, EmptySet, FullSet,
    expand, substitute, free_vars,
)
from .parser import parse_formula, FormulaSyntaxError
from .typecheck import typecheck, TypeMismatch, UnknownSymbol
from .denote import Signature, denote, holds, TruthValue
from .forcing import force_sentence, forcing_truth

__all__ = [
    "LType", "Unit", "OmegaT", "Ground", "Power", "ProductT", "ExpT",
    "Star", "Var", "App", "TupleT", "Proj", "Compr", "Eq", "Mem", "NameRef",
    "Top", "Bot", "And", "Or", "Implies", "Not", "Forall", "Exists",
    "Subseteq", "Union", "Inter", "EmptySet", "FullSet",
    "expand", "substitute", "free_vars",
    "parse_formula", "FormulaSyntaxError",
    "typecheck", "TypeMismatch", "UnknownSymbol",
    "Signature", "denote", "holds", "TruthValue",
    "force_sentence", "forcing_truth",
]
