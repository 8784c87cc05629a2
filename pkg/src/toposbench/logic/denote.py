"""Denotational semantics: typed terms to natural transformations.

A term in context (x1:A1, ..., xn:An) denotes a map from the product of the
context's denotations into the denotation of its type. Equality denotes the
characteristic map of the diagonal, membership the evaluation of Omega^A,
comprehension the exponential transpose. Quantifiers and connectives reach
this module only through their abbreviation expansions, which keeps one
semantic path of record.
"""

from dataclasses import dataclass

from ..errors import BaseMismatch, ModelFormatError
from ..limits import STAR, product_list, terminal
from ..presheaf import ExplicitPresheaf, NatTrans
from .syntax import (
    App, Compr, Eq, ExpT, Ground, Mem, OmegaT, Power, ProductT, Proj, Star,
    TupleT, Unit, Var, expand,
)
from .typecheck import typecheck


class UnboundGround(Exception):
    pass


class Signature:
    """Ground-type and function-symbol bindings for one topos."""

    def __init__(self, topos, grounds=None, symbols=None):
        self.topos = topos
        self.grounds = dict(grounds or {})
        self.symbols = {}
        self._type_cache = {}
        for name, (dom, cod, nat) in (symbols or {}).items():
            self.bind_symbol(name, dom, cod, nat)

    def bind_ground(self, name, presheaf):
        if presheaf.base is not self.topos.base:
            raise BaseMismatch(f"ground {name} lives over a different base")
        self.grounds[name] = presheaf

    def bind_symbol(self, name, dom, cod, nat):
        self.symbols[name] = (dom, cod, nat)

    def has_ground(self, name):
        return name in self.grounds

    def has_symbol(self, name):
        return name in self.symbols

    def symbol_signature(self, name):
        dom, cod, _ = self.symbols[name]
        return dom, cod

    def symbol_nat(self, name):
        return self.symbols[name][2]

    def type_den(self, t):
        key = t
        if key in self._type_cache:
            return self._type_cache[key]
        if isinstance(t, Unit):
            den = self.topos.terminal
        elif isinstance(t, OmegaT):
            den = self.topos.omega.omega
        elif isinstance(t, Ground):
            if t.name not in self.grounds:
                raise UnboundGround(f"ground type {t.name!r} not bound")
            den = self.grounds[t.name]
        elif isinstance(t, Power):
            den = self.topos.power(self.type_den(t.of))
        elif isinstance(t, ProductT):
            den, _ = product_list([self.type_den(f) for f in t.factors],
                                  name=str(t))
        elif isinstance(t, ExpT):
            den = self.topos.exponential(self.type_den(t.dom), self.type_den(t.cod))
        else:
            raise ModelFormatError(f"unknown type {t!r}")
        self._type_cache[key] = den
        return den


class _NilContext(ExplicitPresheaf):
    """Product of the empty context: one empty tuple per stage."""

    def __init__(self, base):
        carriers = {c: ((),) for c in base.objects}
        actions = {a.name: {(): ()} for a in base.arrows if not base.is_identity(a.name)}
        super().__init__(base, carriers, actions, name="()", check=False)


def context_presheaf(sig, context):
    if not context:
        return _NilContext(sig.topos.base)
    P, _ = product_list([sig.type_den(ty) for (_n, ty) in context],
                        name="ctx(" + ",".join(n for n, _t in context) + ")")
    return P


def denote(t, sig, context=()):
    """Denote a typed term; expands derived forms first.

    context: ordered (name, LType) pairs. Returns a NatTrans from the context
    product to the denotation of the term's type.
    """
    if t.ltype is None:
        t = typecheck(t, sig, context)
    core = expand(t)
    return _Denoter(sig).den(core, tuple(context))


class _Denoter:
    """One denotation run: shares context products and memoizes subterm
    denotations on node identity (expansion shares repeated subtrees)."""

    def __init__(self, sig):
        self.sig = sig
        self._ctx_cache = {}
        self._memo = {}

    def ctx_src(self, ctx):
        key = tuple(ctx)
        if key not in self._ctx_cache:
            self._ctx_cache[key] = context_presheaf(self.sig, list(ctx))
        return self._ctx_cache[key]

    def den(self, t, ctx):
        key = (id(t), ctx)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._den(t, ctx, self.ctx_src(ctx))
            self._memo[key] = hit
        return hit

    def _den(self, t, ctx, src):
        sig = self.sig
        base = sig.topos.base
        if isinstance(t, Star):
            tgt = sig.type_den(Unit())
            comps = {c: {g: STAR for g in src.stage(c)} for c in base.objects}
            return NatTrans(src, tgt, comps, name="star")
        if isinstance(t, Var):
            i = _var_index(ctx, t.name)
            tgt = sig.type_den(t.ltype)
            comps = {c: {g: g[i] for g in src.stage(c)} for c in base.objects}
            return NatTrans(src, tgt, comps, name=t.name)
        if isinstance(t, App):
            arg = self.den(t.arg, ctx)
            f = sig.symbol_nat(t.sym)
            comps = {c: {g: f.components[c][arg.components[c][g]] for g in src.stage(c)}
                     for c in base.objects}
            return NatTrans(src, f.target, comps, name=t.sym)
        if isinstance(t, TupleT):
            parts = [self.den(i, ctx) for i in t.items]
            tgt = sig.type_den(t.ltype)
            comps = {c: {g: tuple(p.components[c][g] for p in parts) for g in src.stage(c)}
                     for c in base.objects}
            return NatTrans(src, tgt, comps, name="tuple")
        if isinstance(t, Proj):
            arg = self.den(t.arg, ctx)
            tgt = sig.type_den(t.ltype)
            comps = {c: {g: arg.components[c][g][t.i - 1] for g in src.stage(c)}
                     for c in base.objects}
            return NatTrans(src, tgt, comps, name=f"pi{t.i}")
        if isinstance(t, Eq):
            l = self.den(t.lhs, ctx)
            r = self.den(t.rhs, ctx)
            Y = sig.type_den(t.lhs.ltype)
            om = sig.topos.omega.omega
            comps = {}
            for c in base.objects:
                d = {}
                for g in src.stage(c):
                    u = l.components[c][g]
                    v = r.components[c][g]
                    enc = []
                    for dd in base.objects:
                        names = tuple(k.name for k in base.arrows_from(c)
                                      if k.cod == dd and Y.act(k.name, u) == Y.act(k.name, v))
                        enc.append((dd, names))
                    d[g] = tuple(enc)
                comps[c] = d
            return NatTrans(src, om, comps, name="eq")
        if isinstance(t, Mem):
            e = self.den(t.elem, ctx)
            s = self.den(t.setterm, ctx)
            E = sig.type_den(t.setterm.ltype)
            om = sig.topos.omega.omega
            comps = {c: {g: E.ev(c, s.components[c][g], e.components[c][g])
                         for g in src.stage(c)}
                     for c in base.objects}
            return NatTrans(src, om, comps, name="mem")
        if isinstance(t, Compr):
            inner_ctx = ctx + ((t.var, t.vartype),)
            body = self.den(t.body, inner_ctx)
            E = sig.type_den(t.ltype)
            if not ctx:
                def fn_for(g, c):
                    def fn(e, h, a):
                        return body.components[e][(a,)]
                    return fn
            else:
                def fn_for(g, c):
                    def fn(e, h, a):
                        return body.components[e][src.act(h, g) + (a,)]
                    return fn
            comps = {}
            for c in base.objects:
                d = {}
                for g in src.stage(c):
                    d[g] = E.transpose_element(c, fn_for(g, c))
                comps[c] = d
            return NatTrans(src, E, comps, name="{|}")
        raise ModelFormatError(f"cannot denote {t!r} (unexpanded derived form?)")


def _var_index(ctx, name):
    for i in range(len(ctx) - 1, -1, -1):
        if ctx[i][0] == name:
            return i
    raise UnboundGround(f"variable {name!r} missing from context")


@dataclass
class TruthValue:
    """A global truth value: a map 1 -> Omega, with stage components."""

    structure: object
    nat: NatTrans

    def is_top(self):
        return self.structure.is_true(self.nat)

    def component(self, c):
        return self.nat.components[c][STAR]

    def table(self):
        return {c: self.component(c) for c in self.nat.source.base.objects}

    def __eq__(self, other):
        if not isinstance(other, TruthValue):
            return NotImplemented
        return self.table() == other.table()


def holds(sentence, sig, context=()):
    """Denote a closed sentence and compare with top.

    Returns (bool, TruthValue); the raw value matters because truth here is
    generally intermediate, not two-valued.
    """
    if getattr(sentence, "ltype", None) is None:
        sentence = typecheck(sentence, sig, context)
    if sentence.ltype != OmegaT():
        raise ModelFormatError(f"not a formula: type {sentence.ltype}")
    den = denote(sentence, sig, context)
    if context:
        raise ModelFormatError("holds needs a closed sentence")
    om = sig.topos.omega
    vals = {c: den.components[c][()] for c in sig.topos.base.objects}
    tv = TruthValue(om, om.truth(vals))
    return tv.is_top(), tv
