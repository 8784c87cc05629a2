"""Type annotation per the term-formation rules: Mem needs (A, P A), Eq needs
equal types, comprehension over A gives P A. NameRef nodes resolve to bound
variables, constants (nullary symbols applied to star), or the full set-term
of a ground type."""

from dataclasses import replace

from .syntax import (
    And, App, Bot, Compr, EmptySet, Eq, Exists, Forall, FullSet, Ground,
    Implies, Inter, Mem, NameRef, Not, OmegaT, Or, Power, ProductT, Proj,
    Star, Subseteq, Top, TupleT, Union, Unit, Var,
)


class TypeMismatch(Exception):
    pass


class UnknownSymbol(Exception):
    pass


def _where(t):
    if getattr(t, "pos", None):
        return f" at line {t.pos[0]}, column {t.pos[1]}"
    return ""


def typecheck(t, sig, context=()):
    """Return a copy of t with every subterm annotated with its type.

    context: ordered (name, LType) pairs for free variables; inner binders
    shadow outer ones and the signature.
    """
    env = dict(context)
    return _check(t, sig, env)


def _check(t, sig, env):
    if isinstance(t, Star):
        return replace(t, ltype=Unit())
    if isinstance(t, Var):
        if t.name not in env:
            raise UnknownSymbol(f"unbound variable {t.name!r}{_where(t)}")
        return replace(t, ltype=env[t.name])
    if isinstance(t, NameRef):
        if t.name in env:
            return Var(name=t.name, ltype=env[t.name], pos=t.pos)
        if sig.has_ground(t.name):
            return FullSet(of=Ground(t.name), ltype=Power(Ground(t.name)), pos=t.pos)
        if sig.has_symbol(t.name):
            dom, cod = sig.symbol_signature(t.name)
            if dom != Unit():
                raise TypeMismatch(
                    f"symbol {t.name!r} of type {dom} -> {cod} used without argument{_where(t)}")
            return App(sym=t.name, arg=Star(ltype=Unit()), ltype=cod, pos=t.pos)
        raise UnknownSymbol(f"unknown name {t.name!r}{_where(t)}")
    if isinstance(t, App):
        if not sig.has_symbol(t.sym):
            raise UnknownSymbol(f"unknown function symbol {t.sym!r}{_where(t)}")
        dom, cod = sig.symbol_signature(t.sym)
        arg = _check(t.arg, sig, env)
        if arg.ltype != dom:
            raise TypeMismatch(
                f"{t.sym} expects {dom}, got {arg.ltype}{_where(t)}")
        return replace(t, arg=arg, ltype=cod)
    if isinstance(t, TupleT):
        items = tuple(_check(i, sig, env) for i in t.items)
        if not items:
            return Star(ltype=Unit(), pos=t.pos)
        return replace(t, items=items, ltype=ProductT(tuple(i.ltype for i in items)))
    if isinstance(t, Proj):
        arg = _check(t.arg, sig, env)
        if not isinstance(arg.ltype, ProductT):
            raise TypeMismatch(f"pi{t.i} applied to non-product {arg.ltype}{_where(t)}")
        if not (1 <= t.i <= len(arg.ltype.factors)):
            raise TypeMismatch(f"pi{t.i} out of range for {arg.ltype}{_where(t)}")
        return replace(t, arg=arg, ltype=arg.ltype.factors[t.i - 1])
    if isinstance(t, Compr):
        body = _check(t.body, sig, {**env, t.var: t.vartype})
        if body.ltype != OmegaT():
            raise TypeMismatch(f"comprehension body is {body.ltype}, not Omega{_where(t)}")
        return replace(t, body=body, ltype=Power(t.vartype))
    if isinstance(t, Eq):
        l = _check(t.lhs, sig, env)
        r = _check(t.rhs, sig, env)
        if l.ltype != r.ltype:
            raise TypeMismatch(f"= between {l.ltype} and {r.ltype}{_where(t)}")
        return replace(t, lhs=l, rhs=r, ltype=OmegaT())
    if isinstance(t, Mem):
        e = _check(t.elem, sig, env)
        s = _check(t.setterm, sig, env)
        if s.ltype != Power(e.ltype):
            raise TypeMismatch(
                f"in between {e.ltype} and {s.ltype} (need P {e.ltype}){_where(t)}")
        return replace(t, elem=e, setterm=s, ltype=OmegaT())
    if isinstance(t, (Top, Bot)):
        return replace(t, ltype=OmegaT())
    if isinstance(t, (And, Or, Implies)):
        l = _check(t.lhs, sig, env)
        r = _check(t.rhs, sig, env)
        for side in (l, r):
            if side.ltype != OmegaT():
                raise TypeMismatch(f"connective applied to {side.ltype}{_where(t)}")
        return replace(t, lhs=l, rhs=r, ltype=OmegaT())
    if isinstance(t, Not):
        a = _check(t.arg, sig, env)
        if a.ltype != OmegaT():
            raise TypeMismatch(f"~ applied to {a.ltype}{_where(t)}")
        return replace(t, arg=a, ltype=OmegaT())
    if isinstance(t, (Forall, Exists)):
        body = _check(t.body, sig, {**env, t.var: t.vartype})
        if body.ltype != OmegaT():
            raise TypeMismatch(f"quantifier body is {body.ltype}, not Omega{_where(t)}")
        return replace(t, body=body, ltype=OmegaT())
    if isinstance(t, Subseteq):
        l = _check(t.lhs, sig, env)
        r = _check(t.rhs, sig, env)
        if l.ltype != r.ltype or not isinstance(l.ltype, Power):
            raise TypeMismatch(f"subseteq between {l.ltype} and {r.ltype}{_where(t)}")
        return replace(t, lhs=l, rhs=r, ltype=OmegaT())
    if isinstance(t, (Union, Inter)):
        l = _check(t.lhs, sig, env)
        r = _check(t.rhs, sig, env)
        if l.ltype != r.ltype or not isinstance(l.ltype, Power):
            raise TypeMismatch(f"set operation between {l.ltype} and {r.ltype}{_where(t)}")
        return replace(t, lhs=l, rhs=r, ltype=l.ltype)
    if isinstance(t, EmptySet):
        return replace(t, ltype=Power(t.of))
    if isinstance(t, FullSet):
        return replace(t, ltype=Power(t.of))
    raise TypeMismatch(f"cannot type {t!r}")
