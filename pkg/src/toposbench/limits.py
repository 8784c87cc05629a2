"""Stage-wise (co)limits in Sets^C with their structural morphisms.

All constructions return explicit presheaves whose carriers are built in
canonical (lexicographic construction) order; universal properties are
certified separately by enumeration (see suites).
"""

import itertools

from .errors import BaseMismatch, check_budget
from .presheaf import ExplicitPresheaf, NatTrans, Subfunctor

STAR = "*"


def terminal(base):
    carriers = {c: (STAR,) for c in base.objects}
    actions = {a.name: {STAR: STAR} for a in base.arrows if not base.is_identity(a.name)}
    return ExplicitPresheaf(base, carriers, actions, name="1", check=False)


def initial(base):
    carriers = {c: () for c in base.objects}
    actions = {a.name: {} for a in base.arrows if not base.is_identity(a.name)}
    return ExplicitPresheaf(base, carriers, actions, name="0", check=False)


def bang(F):
    """The unique map F -> 1."""
    one = terminal(F.base)
    comps = {c: {x: STAR for x in F.stage(c)} for c in F.base.objects}
    return NatTrans(F, one, comps, name="!", check=False)


def from_initial(F):
    zero = initial(F.base)
    comps = {c: {} for c in F.base.objects}
    return NatTrans(zero, F, comps, name="0->", check=False)


def product_list(factors, name=None):
    """n-ary product with flat tuple elements; returns (P, [projections])."""
    if not factors:
        raise ValueError("empty product: use terminal() explicitly")
    base = factors[0].base
    for f in factors[1:]:
        if f.base is not base:
            raise BaseMismatch("product factors over different bases")
    carriers = {}
    for c in base.objects:
        size = 1
        for f in factors:
            size *= len(f.stage(c))
        check_budget(f"product stage {c}", size)
        carriers[c] = tuple(itertools.product(*(f.stage(c) for f in factors)))
    actions = {}
    for a in base.arrows:
        if base.is_identity(a.name):
            continue
        actions[a.name] = {
            xs: tuple(f.act(a.name, x) for f, x in zip(factors, xs))
            for xs in carriers[a.dom]
        }
    P = ExplicitPresheaf(base, carriers, actions,
                         name=name or "(" + " x ".join(f.name for f in factors) + ")",
                         check=False)
    projs = []
    for i, f in enumerate(factors):
        comps = {c: {xs: xs[i] for xs in carriers[c]} for c in base.objects}
        projs.append(NatTrans(P, f, comps, name=f"pi{i + 1}", check=False))
    return P, projs


def product(F, G):
    P, projs = product_list([F, G])
    return P, projs[0], projs[1]


def pairing(P, maps):
    """Mediating map X -> product from maps X -> factor_i; P from product_list."""
    X = maps[0].source
    comps = {c: {x: tuple(m.components[c][x] for m in maps) for x in X.stage(c)}
             for c in X.base.objects}
    return NatTrans(X, P, comps, name="<" + ",".join(m.name for m in maps) + ">",
                    check=False)


def coproduct(F, G):
    base = F.base
    if G.base is not base:
        raise BaseMismatch("coproduct over different bases")
    carriers = {c: tuple(("inl", x) for x in F.stage(c)) + tuple(("inr", y) for y in G.stage(c))
                for c in base.objects}
    actions = {}
    for a in base.arrows:
        if base.is_identity(a.name):
            continue
        act = {}
        for x in F.stage(a.dom):
            act[("inl", x)] = ("inl", F.act(a.name, x))
        for y in G.stage(a.dom):
            act[("inr", y)] = ("inr", G.act(a.name, y))
        actions[a.name] = act
    P = ExplicitPresheaf(base, carriers, actions, name=f"({F.name} + {G.name})", check=False)
    inl = NatTrans(F, P, {c: {x: ("inl", x) for x in F.stage(c)} for c in base.objects},
                   name="inl", check=False)
    inr = NatTrans(G, P, {c: {y: ("inr", y) for y in G.stage(c)} for c in base.objects},
                   name="inr", check=False)
    return P, inl, inr


def copairing(P, f, g):
    """Mediating map out of a coproduct built by coproduct()."""
    base = f.source.base
    comps = {}
    for c in base.objects:
        d = {}
        for x in f.source.stage(c):
            d[("inl", x)] = f.components[c][x]
        for y in g.source.stage(c):
            d[("inr", y)] = g.components[c][y]
        comps[c] = d
    return NatTrans(P, f.target, comps, name=f"[{f.name},{g.name}]", check=False)


def equalizer(f, g):
    """The subfunctor of f.source where f and g agree, with its inclusion."""
    if f.source is not g.source or f.target is not g.target:
        raise BaseMismatch("equalizer needs a parallel pair")
    F = f.source
    part = {c: tuple(x for x in F.stage(c)
                     if f.components[c][x] == g.components[c][x])
            for c in F.base.objects}
    return Subfunctor(F, part, check=False)


def pullback(f, g):
    """Pullback of f: F -> H, g: G -> H; returns (P, p1: P->F, p2: P->G)."""
    if f.target is not g.target:
        raise BaseMismatch("pullback needs a cospan")
    F, G = f.source, g.source
    base = F.base
    carriers = {}
    for c in base.objects:
        carriers[c] = tuple((x, y)
                            for x in F.stage(c) for y in G.stage(c)
                            if f.components[c][x] == g.components[c][y])
    actions = {}
    for a in base.arrows:
        if base.is_identity(a.name):
            continue
        actions[a.name] = {(x, y): (F.act(a.name, x), G.act(a.name, y))
                           for (x, y) in carriers[a.dom]}
    P = ExplicitPresheaf(base, carriers, actions,
                         name=f"pb({f.name},{g.name})", check=False)
    p1 = NatTrans(P, F, {c: {xy: xy[0] for xy in carriers[c]} for c in base.objects},
                  name="p1", check=False)
    p2 = NatTrans(P, G, {c: {xy: xy[1] for xy in carriers[c]} for c in base.objects},
                  name="p2", check=False)
    return P, p1, p2


def image_subfunctor(f):
    """Stage-wise image of f as a subfunctor of its target."""
    part = {c: tuple(dict.fromkeys(f.components[c][x] for x in f.source.stage(c)))
            for c in f.source.base.objects}
    return Subfunctor(f.target, part, check=False)


def global_elements(F):
    """All maps 1 -> F in canonical order; for M-sets these are the joint
    fixed points of every action."""
    from .presheaf import enumerate_nat_trans
    return enumerate_nat_trans(terminal(F.base), F, "all")
