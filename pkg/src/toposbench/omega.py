"""The subobject classifier of Sets^C and the Heyting structure it carries.

Omega(c) is the set of subfunctors of the representable Hom(c,-), encoded as
nested tuples (one tuple of arrow names per object, in canonical order). The
arrow action is restriction: S.f = {h | h o f in S}. Top picks the full
representable. classify() sends a subfunctor to its characteristic map; the
defining pullback property is certified by the suites, not assumed.
"""

from dataclasses import dataclass

from .errors import check_budget
from .limits import STAR, pullback, terminal
from .presheaf import (
    ExplicitPresheaf,
    NatTrans,
    Subfunctor,
    all_subfunctors,
    representable,
)


def _encode(base, sub):
    return tuple((d, tuple(sub.part[d])) for d in base.objects)


def _decode(enc):
    return {d: set(names) for d, names in enc}


class OmegaPresheaf(ExplicitPresheaf):
    def __init__(self, base):
        reps = {c: representable(base, c) for c in base.objects}
        carriers = {}
        for c in base.objects:
            subs = all_subfunctors(reps[c])
            check_budget(f"Omega stage {c}", len(subs))
            carriers[c] = tuple(_encode(base, s) for s in subs)
        actions = {}
        for a in base.arrows:
            if base.is_identity(a.name):
                continue
            act = {}
            for enc in carriers[a.dom]:
                S = _decode(enc)
                moved = {}
                for d in base.objects:
                    moved[d] = tuple(
                        h.name for h in base.arrows_from(a.cod)
                        if h.cod == d and base.compose(h.name, a.name) in S[d])
                act[enc] = tuple((d, moved[d]) for d in base.objects)
            actions[a.name] = act
        super().__init__(base, carriers, actions, name="Omega", check=False)
        self._top = {c: _encode(base, Subfunctor(
            reps[c], {d: reps[c].stage(d) for d in base.objects}, check=False))
            for c in base.objects}
        self._bot = {c: tuple((d, ()) for d in base.objects) for c in base.objects}

    def top_at(self, c):
        return self._top[c]

    def bot_at(self, c):
        return self._bot[c]

    def is_top(self, c, elem):
        return elem == self._top[c]

    def meet(self, c, u, v):
        du, dv = dict(u), dict(v)
        return tuple((d, tuple(h for h in du[d] if h in set(dv[d]))) for d, _ in u)

    def join(self, c, u, v):
        du, dv = dict(u), dict(v)
        out = []
        for d, _ in u:
            merged = list(du[d]) + [h for h in dv[d] if h not in set(du[d])]
            out.append((d, tuple(sorted(merged, key=self._arrow_order(c, d)))))
        return tuple(out)

    def _arrow_order(self, c, d):
        order = {h.name: i for i, h in enumerate(self.base.arrows_from(c)) if h.cod == d}
        return order.__getitem__

    def impl(self, c, u, v):
        """Heyting implication inside the representable at c."""
        base = self.base
        du, dv = _decode(u), _decode(v)
        out = []
        for d in base.objects:
            keep = []
            for h in base.arrows_from(c):
                if h.cod != d:
                    continue
                ok = True
                for k in base.arrows_from(d):
                    kh = base.compose(k.name, h.name)
                    if kh in du[k.cod] and kh not in dv[k.cod]:
                        ok = False
                        break
                if ok:
                    keep.append(h.name)
            out.append((d, tuple(keep)))
        return tuple(out)

    def neg(self, c, u):
        return self.impl(c, u, self._bot[c])


@dataclass
class OmegaStructure:
    omega: OmegaPresheaf
    top: NatTrans

    def classify(self, sub):
        """Characteristic map chi_S: host -> Omega of a subfunctor."""
        host = sub.host
        base = host.base
        part = {c: set(sub.part[c]) for c in base.objects}
        comps = {}
        for c in base.objects:
            d = {}
            for x in host.stage(c):
                enc = []
                for dd in base.objects:
                    names = tuple(h.name for h in base.arrows_from(c)
                                  if h.cod == dd and host.act(h.name, x) in part[dd])
                    enc.append((dd, names))
                d[x] = tuple(enc)
            comps[c] = d
        return NatTrans(host, self.omega, comps, name=f"chi", check=False)

    def subobject_of(self, chi):
        """The subfunctor classified by chi: F -> Omega (pullback of top)."""
        F = chi.source
        part = {c: tuple(x for x in F.stage(c)
                         if self.omega.is_top(c, chi.components[c][x]))
                for c in F.base.objects}
        return Subfunctor(F, part, check=False)

    def truth(self, stage_values):
        """Package per-stage Omega elements as a map 1 -> Omega."""
        one = terminal(self.omega.base)
        comps = {c: {STAR: stage_values[c]} for c in self.omega.base.objects}
        return NatTrans(one, self.omega, comps, name="tv", check=False)

    def top_truth(self):
        return self.truth({c: self.omega.top_at(c) for c in self.omega.base.objects})

    def is_true(self, tv):
        return all(self.omega.is_top(c, tv.components[c][STAR])
                   for c in self.omega.base.objects)


def omega_structure(base):
    om = OmegaPresheaf(base)
    one = terminal(base)
    top = NatTrans(one, om, {c: {STAR: om.top_at(c)} for c in base.objects},
                   name="true", check=False)
    return OmegaStructure(om, top)


def subobject_lattice(F):
    """All subfunctors of F with stage-wise Heyting operations.

    meet/join are stage-wise intersection/union; implication is computed with
    the arrow actions so the adjunction a ^ b <= c iff a <= (b => c) holds.
    """
    return all_subfunctors(F)


def sub_meet(s, t):
    F = s.host
    return Subfunctor(F, {c: tuple(x for x in s.part[c] if x in set(t.part[c]))
                          for c in F.base.objects}, check=False)


def sub_join(s, t):
    F = s.host
    return Subfunctor(F, {c: tuple(dict.fromkeys(tuple(s.part[c]) + tuple(t.part[c])))
                          for c in F.base.objects}, check=False)


def sub_impl(s, t):
    F = s.host
    base = F.base
    spart = {c: set(s.part[c]) for c in base.objects}
    tpart = {c: set(t.part[c]) for c in base.objects}
    part = {}
    for c in base.objects:
        keep = []
        for x in F.stage(c):
            ok = True
            for a in base.arrows_from(c):
                y = F.act(a.name, x)
                if y in spart[a.cod] and y not in tpart[a.cod]:
                    ok = False
                    break
            if ok:
                keep.append(x)
        part[c] = tuple(keep)
    return Subfunctor(F, part, check=False)


def sub_neg(s):
    F = s.host
    empty = Subfunctor(F, {c: () for c in F.base.objects}, check=False)
    return sub_impl(s, empty)


def sub_top(F):
    return Subfunctor(F, {c: F.stage(c) for c in F.base.objects}, check=False)


def sub_bottom(F):
    return Subfunctor(F, {c: () for c in F.base.objects}, check=False)


def is_complemented(s):
    return sub_join(s, sub_neg(s)) == sub_top(s.host)


def certify_classifier(structure, F, subs=None):
    """Check the defining property of Omega on F by enumeration.

    For every subfunctor S of F: the pullback of top along classify(S) is S,
    and classify(S) is the unique map F -> Omega with that pullback. Returns
    the number of subobjects checked; raises AssertionError on any failure.
    """
    from .presheaf import enumerate_nat_trans

    subs = all_subfunctors(F) if subs is None else subs
    all_chis = enumerate_nat_trans(F, structure.omega, "all")
    if len(all_chis) != len(subs):
        raise AssertionError(
            f"classify is not a bijection on {F.name}: "
            f"{len(subs)} subfunctors vs {len(all_chis)} maps to Omega")
    for S in subs:
        chi = structure.classify(S)
        P, p1, _p2 = pullback(chi, structure.top)
        got = {c: set(x for (x, _star) in P.stage(c)) for c in F.base.objects}
        want = {c: set(S.part[c]) for c in F.base.objects}
        if got != want:
            raise AssertionError(f"pullback of top along chi != S on {F.name}")
        matches = [t for t in all_chis
                   if structure.subobject_of(t) == S]
        if len(matches) != 1:
            raise AssertionError(
                f"classifying map not unique for a subobject of {F.name}: {len(matches)}")
    return len(subs)
