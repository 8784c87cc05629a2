"""Abstract syntax of the local typed language, with the standard
abbreviation expansions.

Core term formers: Star, Var, App, TupleT, Proj, Compr, Eq, Mem. Everything
else (truth constants, connectives, quantifiers, set algebra) is a derived
form that expands to core syntax before denotation:

    true            star = star
    phi /\\ psi      (phi, psi) = (true, true)
    phi => psi      (phi /\\ psi) = phi
    forall x:A. phi {x:A | phi} = {x:A | true}
    false           forall w:Omega. w
    ~phi            phi => false
    exists x:A. phi forall w:Omega. ((forall x:A. (phi => w)) => w)
    phi \\/ psi      forall w:Omega. (((phi => w) /\\ (psi => w)) => w)
    X subseteq Y    forall x:A. (x in X => x in Y)
    X union Y       {x:A | x in X \\/ x in Y}
    X inter Y       {x:A | x in X /\\ x in Y}
    empty(A)        {x:A | false}
    A  (type name)  {x:A | true}
"""

from dataclasses import dataclass, field, replace
import itertools


# ---------------------------------------------------------------- types

class LType:
    pass


@dataclass(frozen=True)
class Unit(LType):
    def __str__(self):
        return "1"


@dataclass(frozen=True)
class OmegaT(LType):
    def __str__(self):
        return "Omega"


@dataclass(frozen=True)
class Ground(LType):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Power(LType):
    of: LType

    def __str__(self):
        return f"P {self.of}"


@dataclass(frozen=True)
class ProductT(LType):
    factors: tuple

    def __str__(self):
        return "(" + " * ".join(str(f) for f in self.factors) + ")"


@dataclass(frozen=True)
class ExpT(LType):
    dom: LType
    cod: LType

    def __str__(self):
        return f"({self.dom} -> {self.cod})"


# ---------------------------------------------------------------- terms

@dataclass
class LTerm:
    ltype: LType = field(default=None, kw_only=True, compare=False)
    pos: tuple = field(default=None, kw_only=True, compare=False, repr=False)


@dataclass
class Star(LTerm):
    pass


@dataclass
class Var(LTerm):
    name: str = ""


@dataclass
class NameRef(LTerm):
    """Bare identifier: resolved at typecheck into a Var, a constant
    application, or the full set-term of a ground type."""
    name: str = ""


@dataclass
class App(LTerm):
    sym: str = ""
    arg: LTerm = None


@dataclass
class TupleT(LTerm):
    items: tuple = ()


@dataclass
class Proj(LTerm):
    i: int = 1
    arg: LTerm = None


@dataclass
class Compr(LTerm):
    var: str = ""
    vartype: LType = None
    body: LTerm = None


@dataclass
class Eq(LTerm):
    lhs: LTerm = None
    rhs: LTerm = None


@dataclass
class Mem(LTerm):
    elem: LTerm = None
    setterm: LTerm = None


@dataclass
class Top(LTerm):
    pass


@dataclass
class Bot(LTerm):
    pass


@dataclass
class And(LTerm):
    lhs: LTerm = None
    rhs: LTerm = None


@dataclass
class Or(LTerm):
    lhs: LTerm = None
    rhs: LTerm = None


@dataclass
class Implies(LTerm):
    lhs: LTerm = None
    rhs: LTerm = None


@dataclass
class Not(LTerm):
    arg: LTerm = None


@dataclass
class Forall(LTerm):
    var: str = ""
    vartype: LType = None
    body: LTerm = None


@dataclass
class Exists(LTerm):
    var: str = ""
    vartype: LType = None
    body: LTerm = None


@dataclass
class Subseteq(LTerm):
    lhs: LTerm = None
    rhs: LTerm = None


@dataclass
class Union(LTerm):
    lhs: LTerm = None
    rhs: LTerm = None


@dataclass
class Inter(LTerm):
    lhs: LTerm = None
    rhs: LTerm = None


@dataclass
class EmptySet(LTerm):
    of: LType = None


@dataclass
class FullSet(LTerm):
    of: LType = None


_fresh_counter = itertools.count(1)


def _fresh(prefix, avoid):
    while True:
        name = f"_{prefix}{next(_fresh_counter)}"
        if name not in avoid:
            return name


def free_vars(t):
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, (Star, Top, Bot, EmptySet, FullSet, NameRef)):
        return set()
    if isinstance(t, App):
        return free_vars(t.arg)
    if isinstance(t, TupleT):
        out = set()
        for it in t.items:
            out |= free_vars(it)
        return out
    if isinstance(t, Proj):
        return free_vars(t.arg)
    if isinstance(t, Compr):
        return free_vars(t.body) - {t.var}
    if isinstance(t, (Forall, Exists)):
        return free_vars(t.body) - {t.var}
    if isinstance(t, (Eq, And, Or, Implies, Subseteq, Union, Inter)):
        return free_vars(t.lhs) | free_vars(t.rhs)
    if isinstance(t, Mem):
        return free_vars(t.elem) | free_vars(t.setterm)
    if isinstance(t, Not):
        return free_vars(t.arg)
    raise TypeError(f"unknown term {t!r}")


def substitute(t, name, value):
    """Capture-avoiding substitution of a closed term for a free variable."""
    if isinstance(t, Var):
        return value if t.name == name else t
    if isinstance(t, (Star, Top, Bot, EmptySet, FullSet, NameRef)):
        return t
    if isinstance(t, App):
        return replace(t, arg=substitute(t.arg, name, value))
    if isinstance(t, TupleT):
        return replace(t, items=tuple(substitute(i, name, value) for i in t.items))
    if isinstance(t, Proj):
        return replace(t, arg=substitute(t.arg, name, value))
    if isinstance(t, (Compr, Forall, Exists)):
        if t.var == name:
            return t
        return replace(t, body=substitute(t.body, name, value))
    if isinstance(t, (Eq, And, Or, Implies, Subseteq, Union, Inter)):
        return replace(t, lhs=substitute(t.lhs, name, value),
                       rhs=substitute(t.rhs, name, value))
    if isinstance(t, Mem):
        return replace(t, elem=substitute(t.elem, name, value),
                       setterm=substitute(t.setterm, name, value))
    if isinstance(t, Not):
        return replace(t, arg=substitute(t.arg, name, value))
    raise TypeError(f"unknown term {t!r}")


def expand(t):
    """Rewrite derived forms into core syntax; requires a typechecked tree
    (set-algebra expansions read element types off annotations).

    Repeated occurrences introduced by the abbreviations (an implication
    denotes its antecedent twice, for instance) are shared as one node, so
    downstream evaluation can memoize on identity instead of re-walking an
    exponentially duplicated tree.
    """
    memo = {}

    def top_node():
        return Eq(lhs=Star(ltype=Unit()), rhs=Star(ltype=Unit()), ltype=OmegaT())

    def go(t):
        got = memo.get(id(t))
        if got is not None:
            return got
        out = build(t)
        memo[id(t)] = out
        return out

    def eq_and(l, r):
        pair = ProductT((OmegaT(), OmegaT()))
        return Eq(lhs=TupleT(items=(l, r), ltype=pair),
                  rhs=TupleT(items=(top_node(), top_node()), ltype=pair),
                  ltype=OmegaT())

    def eq_implies(l, r):
        return Eq(lhs=eq_and(l, r), rhs=l, ltype=OmegaT())

    def eq_forall(var, vartype, body):
        pa = Power(vartype)
        return Eq(lhs=Compr(var=var, vartype=vartype, body=body, ltype=pa),
                  rhs=Compr(var=var, vartype=vartype, body=top_node(), ltype=pa),
                  ltype=OmegaT())

    def build(t):
        if isinstance(t, (Star, Var)):
            return t
        if isinstance(t, App):
            return replace(t, arg=go(t.arg))
        if isinstance(t, TupleT):
            return replace(t, items=tuple(go(i) for i in t.items))
        if isinstance(t, Proj):
            return replace(t, arg=go(t.arg))
        if isinstance(t, Compr):
            return replace(t, body=go(t.body))
        if isinstance(t, Eq):
            return replace(t, lhs=go(t.lhs), rhs=go(t.rhs))
        if isinstance(t, Mem):
            return replace(t, elem=go(t.elem), setterm=go(t.setterm))
        if isinstance(t, Top):
            return top_node()
        if isinstance(t, And):
            return eq_and(go(t.lhs), go(t.rhs))
        if isinstance(t, Implies):
            return eq_implies(go(t.lhs), go(t.rhs))
        if isinstance(t, Forall):
            return eq_forall(t.var, t.vartype, go(t.body))
        if isinstance(t, Bot):
            w = _fresh("w", set())
            return eq_forall(w, OmegaT(), Var(name=w, ltype=OmegaT()))
        if isinstance(t, Not):
            return eq_implies(go(t.arg), go(Bot(ltype=OmegaT())))
        if isinstance(t, Exists):
            w = _fresh("w", free_vars(t.body))
            wv = Var(name=w, ltype=OmegaT())
            inner = eq_forall(t.var, t.vartype, eq_implies(go(t.body), wv))
            return eq_forall(w, OmegaT(), eq_implies(inner, wv))
        if isinstance(t, Or):
            w = _fresh("w", free_vars(t.lhs) | free_vars(t.rhs))
            wv = Var(name=w, ltype=OmegaT())
            prem = eq_and(eq_implies(go(t.lhs), wv), eq_implies(go(t.rhs), wv))
            return eq_forall(w, OmegaT(), eq_implies(prem, wv))
        if isinstance(t, Subseteq):
            elem_t = t.lhs.ltype.of
            x = _fresh("x", free_vars(t.lhs) | free_vars(t.rhs))
            xv = Var(name=x, ltype=elem_t)
            return eq_forall(x, elem_t,
                             eq_implies(Mem(elem=xv, setterm=go(t.lhs), ltype=OmegaT()),
                                        Mem(elem=xv, setterm=go(t.rhs), ltype=OmegaT())))
        if isinstance(t, (Union, Inter)):
            elem_t = t.lhs.ltype.of
            x = _fresh("x", free_vars(t.lhs) | free_vars(t.rhs))
            xv = Var(name=x, ltype=elem_t)
            l = Mem(elem=xv, setterm=go(t.lhs), ltype=OmegaT())
            r = Mem(elem=xv, setterm=go(t.rhs), ltype=OmegaT())
            op = Or if isinstance(t, Union) else And
            body = go(op(lhs=l, rhs=r, ltype=OmegaT()))
            return Compr(var=x, vartype=elem_t, body=body, ltype=Power(elem_t))
        if isinstance(t, EmptySet):
            x = _fresh("x", set())
            return Compr(var=x, vartype=t.of, body=go(Bot(ltype=OmegaT())),
                         ltype=Power(t.of))
        if isinstance(t, FullSet):
            x = _fresh("x", set())
            return Compr(var=x, vartype=t.of, body=top_node(), ltype=Power(t.of))
        if isinstance(t, NameRef):
            raise TypeError("NameRef must be resolved by typecheck before expansion")
        raise TypeError(f"unknown term {t!r}")

    return go(t)
