"""Stage-wise forcing evaluator.

Evaluates formulas by the standard clauses over a finite base category
(restriction means acting along an arrow out of the current stage):

    c |- s = t        iff  for all k: c -> d, s.k == t.k
    c |- s in S       iff  the evaluation of S at s equals top at c
    c |- phi /\\ psi   iff  c |- phi and c |- psi
    c |- phi => psi   iff  for all k: c -> d, d |- phi.k implies d |- psi.k
    c |- phi \\/ psi   iff  for all k: c -> d, d |- phi.k or d |- psi.k
    c |- ~phi         iff  for all k: c -> d, not d |- phi.k
    c |- forall x. p  iff  for all k: c -> d, all x in X(d): d |- p
    c |- exists x. p  iff  for all k: c -> d, exists x in X(d): d |- p

The abbreviation route in denote() is the semantics of record; this module is
the fast path and is cross-checked against it in the test suite. Quantifying
over a type still materializes that type's carrier, but contexts never turn
into product carriers, which is the entire point.
"""

from ..limits import STAR
from .syntax import (
    And, App, Bot, Compr, Eq, Exists, Forall, Implies, Mem, Not, OmegaT, Or,
    Power, Proj, Star, Top, TupleT, Union, Inter, Subseteq, EmptySet, FullSet,
    Var,
)
from .typecheck import typecheck
from .denote import TruthValue


class _Forcer:
    def __init__(self, sig):
        self.sig = sig
        self.base = sig.topos.base
        self.om = sig.topos.omega.omega
        self._memo = {}

    def ctx_act(self, ctx_types, k, gamma):
        return tuple(P.act(k, x) for P, x in zip(ctx_types, gamma))

    def eval_term(self, t, c, ctx, ctx_dens, gamma):
        """Element-level evaluation of a term at stage c under assignment gamma."""
        if isinstance(t, Star):
            return STAR
        if isinstance(t, Var):
            for i in range(len(ctx) - 1, -1, -1):
                if ctx[i][0] == t.name:
                    return gamma[i]
            raise KeyError(t.name)
        if isinstance(t, App):
            a = self.eval_term(t.arg, c, ctx, ctx_dens, gamma)
            return self.sig.symbol_nat(t.sym).components[c][a]
        if isinstance(t, TupleT):
            return tuple(self.eval_term(i, c, ctx, ctx_dens, gamma) for i in t.items)
        if isinstance(t, Proj):
            return self.eval_term(t.arg, c, ctx, ctx_dens, gamma)[t.i - 1]
        if isinstance(t, Compr):
            E = self.sig.type_den(t.ltype)
            X = self.sig.type_den(t.vartype)
            ctx2 = ctx + [(t.var, t.vartype)]
            dens2 = ctx_dens + [X]

            def fn(e, h, a):
                moved = self.ctx_act(ctx_dens, h, gamma)
                return self.value(t.body, e, ctx2, dens2, moved + (a,))

            return E.transpose_element(c, fn)
        if isinstance(t, (EmptySet, FullSet)):
            E = self.sig.type_den(t.ltype)
            fixed = (self.om.bot_at if isinstance(t, EmptySet) else self.om.top_at)
            return E.transpose_element(c, lambda e, h, a: fixed(e))
        if t.ltype == OmegaT():
            return self.value(t, c, ctx, ctx_dens, gamma)
        raise TypeError(f"cannot evaluate {t!r}")

    def value(self, t, c, ctx, ctx_dens, gamma):
        """The Omega(c)-element of a formula at (c, gamma)."""
        enc = []
        for dd in self.base.objects:
            names = tuple(k.name for k in self.base.arrows_from(c)
                          if k.cod == dd and
                          self.force(t, dd, ctx, ctx_dens,
                                     self.ctx_act(ctx_dens, k.name, gamma)))
            enc.append((dd, names))
        return tuple(enc)

    def force(self, t, c, ctx, ctx_dens, gamma):
        key = (id(t), c, gamma)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        out = self._force(t, c, ctx, ctx_dens, gamma)
        self._memo[key] = out
        return out

    def _force(self, t, c, ctx, ctx_dens, gamma):
        base = self.base
        if isinstance(t, Top):
            return True
        if isinstance(t, Bot):
            return False
        if isinstance(t, And):
            return (self.force(t.lhs, c, ctx, ctx_dens, gamma)
                    and self.force(t.rhs, c, ctx, ctx_dens, gamma))
        if isinstance(t, Implies):
            for k in base.arrows_from(c):
                g2 = self.ctx_act(ctx_dens, k.name, gamma)
                if (self.force(t.lhs, k.cod, ctx, ctx_dens, g2)
                        and not self.force(t.rhs, k.cod, ctx, ctx_dens, g2)):
                    return False
            return True
        if isinstance(t, Or):
            for k in base.arrows_from(c):
                g2 = self.ctx_act(ctx_dens, k.name, gamma)
                if not (self.force(t.lhs, k.cod, ctx, ctx_dens, g2)
                        or self.force(t.rhs, k.cod, ctx, ctx_dens, g2)):
                    return False
            return True
        if isinstance(t, Not):
            for k in base.arrows_from(c):
                g2 = self.ctx_act(ctx_dens, k.name, gamma)
                if self.force(t.arg, k.cod, ctx, ctx_dens, g2):
                    return False
            return True
        if isinstance(t, Forall):
            X = self.sig.type_den(t.vartype)
            ctx2 = ctx + [(t.var, t.vartype)]
            dens2 = ctx_dens + [X]
            for k in base.arrows_from(c):
                g2 = self.ctx_act(ctx_dens, k.name, gamma)
                for x in X.stage(k.cod):
                    if not self.force(t.body, k.cod, ctx2, dens2, g2 + (x,)):
                        return False
            return True
        if isinstance(t, Exists):
            X = self.sig.type_den(t.vartype)
            ctx2 = ctx + [(t.var, t.vartype)]
            dens2 = ctx_dens + [X]
            for k in base.arrows_from(c):
                g2 = self.ctx_act(ctx_dens, k.name, gamma)
                if not any(self.force(t.body, k.cod, ctx2, dens2, g2 + (x,))
                           for x in X.stage(k.cod)):
                    return False
            return True
        if isinstance(t, Subseteq):
            inner = Forall(var="_s", vartype=t.lhs.ltype.of,
                           body=Implies(
                               lhs=Mem(elem=Var(name="_s", ltype=t.lhs.ltype.of),
                                       setterm=t.lhs, ltype=OmegaT()),
                               rhs=Mem(elem=Var(name="_s", ltype=t.lhs.ltype.of),
                                       setterm=t.rhs, ltype=OmegaT()),
                               ltype=OmegaT()),
                           ltype=OmegaT())
            return self.force(inner, c, ctx, ctx_dens, gamma)
        if isinstance(t, Eq):
            # the identity arrow is among the restrictions, so forcing the
            # equality is plain equality at the current stage
            u = self.eval_term(t.lhs, c, ctx, ctx_dens, gamma)
            v = self.eval_term(t.rhs, c, ctx, ctx_dens, gamma)
            return u == v
        if isinstance(t, Mem):
            E = self.sig.type_den(t.setterm.ltype)
            a = self.eval_term(t.elem, c, ctx, ctx_dens, gamma)
            s = self.eval_term(t.setterm, c, ctx, ctx_dens, gamma)
            return self.om.is_top(c, E.ev(c, s, a))
        if t.ltype == OmegaT():
            val = self.eval_term(t, c, ctx, ctx_dens, gamma)
            return self.om.is_top(c, val)
        raise TypeError(f"cannot force {t!r}")


def force_sentence(sentence, sig):
    """Forcing verdict per stage for a closed sentence; returns dict obj->bool."""
    if getattr(sentence, "ltype", None) is None:
        sentence = typecheck(sentence, sig)
    f = _Forcer(sig)
    return {c: f.force(sentence, c, [], [], ()) for c in sig.topos.base.objects}


def forcing_truth(sentence, sig):
    """(bool, TruthValue) computed by forcing; comparable with holds()."""
    if getattr(sentence, "ltype", None) is None:
        sentence = typecheck(sentence, sig)
    f = _Forcer(sig)
    om = sig.topos.omega
    vals = {c: f.value(sentence, c, [], [], ()) for c in sig.topos.base.objects}
    tv = TruthValue(om, om.truth(vals))
    return tv.is_top(), tv
