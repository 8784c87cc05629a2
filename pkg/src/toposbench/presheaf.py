"""Presheaves (covariant set-valued functors on a finite category),
natural transformations, subfunctors, and exhaustive enumeration.

Carriers are ordered tuples: canonical order is declaration order for user
objects and construction order for composites, and every enumeration emits in
canonical order. Empty carriers are legal at any stage and never special-cased.
"""

import itertools

from .errors import (
    BaseMismatch,
    FunctorLawViolation,
    ModelFormatError,
    NaturalityViolation,
)


class Presheaf:
    """Base class; concrete subclasses provide stages and element actions."""

    base = None
    name = "?"

    def stage(self, obj):
        raise NotImplementedError

    def act(self, arrow_name, elem):
        raise NotImplementedError

    def index(self, obj, elem):
        """Position of elem in the canonical order of stage(obj)."""
        raise NotImplementedError

    def total_size(self):
        return sum(len(self.stage(c)) for c in self.base.objects)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


class ExplicitPresheaf(Presheaf):
    def __init__(self, base, carriers, actions, name="F", check=True):
        """carriers: obj -> sequence; actions: arrow name -> dict elem -> elem.

        Identity-arrow actions are implied. Functor laws are certified here.
        """
        self.base = base
        self.name = name
        self._carriers = {}
        for c in base.objects:
            elems = tuple(carriers.get(c, ()))
            if len(set(elems)) != len(elems):
                raise ModelFormatError(f"{name}: duplicate elements at stage {c}")
            self._carriers[c] = elems
        self._index = {c: {x: i for i, x in enumerate(self._carriers[c])}
                       for c in base.objects}
        self._actions = {}
        for a in base.arrows:
            if base.is_identity(a.name):
                self._actions[a.name] = {x: x for x in self._carriers[a.dom]}
            else:
                if a.name not in actions:
                    raise ModelFormatError(f"{name}: no action for arrow {a.name}")
                self._actions[a.name] = dict(actions[a.name])
        if check:
            self._check_functor_laws()

    def _check_functor_laws(self):
        base = self.base
        for a in base.arrows:
            fn = self._actions[a.name]
            dom_c, cod_c = self._carriers[a.dom], self._carriers[a.cod]
            for x in dom_c:
                if x not in fn:
                    raise FunctorLawViolation(f"{self.name}: action {a.name} undefined on {x!r}")
                if fn[x] not in self._index[a.cod]:
                    raise FunctorLawViolation(
                        f"{self.name}: action {a.name} sends {x!r} outside stage {a.cod}")
            for x in fn:
                if x not in self._index[a.dom]:
                    raise FunctorLawViolation(
                        f"{self.name}: action {a.name} defined on foreign element {x!r}")
        for f in base.arrows:
            for g in base.arrows:
                if g.dom != f.cod:
                    continue
                h = base.compose(g.name, f.name)
                for x in self._carriers[f.dom]:
                    if self._actions[h][x] != self._actions[g.name][self._actions[f.name][x]]:
                        raise FunctorLawViolation(
                            f"{self.name}: act({h}) != act({g.name}) o act({f.name}) at {x!r}")

    def stage(self, obj):
        return self._carriers[obj]

    def act(self, arrow_name, elem):
        return self._actions[arrow_name][elem]

    def index(self, obj, elem):
        return self._index[obj][elem]


def representable(base, c, name=None):
    """The covariant hom functor Hom(c, -); stage d carries the arrows c -> d."""
    carriers = {d: [a.name for a in base.arrows_from(c) if a.cod == d] for d in base.objects}
    actions = {}
    for f in base.arrows:
        if base.is_identity(f.name):
            continue
        actions[f.name] = {h: base.compose(f.name, h) for h in carriers[f.dom]}
    return ExplicitPresheaf(base, carriers, actions,
                            name=name or f"Hom({c},-)", check=False)


class NatTrans:
    """A stage-indexed family of functions; naturality is certified on build."""

    def __init__(self, source, target, components, name="", check=True):
        if source.base is not target.base:
            raise BaseMismatch("source and target live over different bases")
        self.source = source
        self.target = target
        self.name = name
        self.components = {c: dict(components.get(c, {})) for c in source.base.objects}
        if check:
            self._check_naturality()

    def _check_naturality(self):
        base = self.source.base
        for c in base.objects:
            comp = self.components[c]
            for x in self.source.stage(c):
                if x not in comp:
                    raise NaturalityViolation(f"{self.name or 'map'}: undefined on {x!r} at {c}")
        for a in base.arrows:
            if base.is_identity(a.name):
                continue
            for x in self.source.stage(a.dom):
                lhs = self.components[a.cod][self.source.act(a.name, x)]
                rhs = self.target.act(a.name, self.components[a.dom][x])
                if lhs != rhs:
                    raise NaturalityViolation(
                        f"{self.name or 'map'}: square for arrow {a.name} fails at {x!r}")

    def __call__(self, obj, elem):
        return self.components[obj][elem]

    def then(self, other):
        """other after self."""
        if other.source is not self.target:
            raise BaseMismatch("composition targets do not match")
        comps = {c: {x: other.components[c][y] for x, y in self.components[c].items()}
                 for c in self.source.base.objects}
        return NatTrans(self.source, other.target, comps,
                        name=f"{other.name}o{self.name}", check=False)

    def is_mono(self):
        for c in self.source.base.objects:
            vals = list(self.components[c].values())
            if len(set(vals)) != len(vals):
                return False
        return True

    def is_epi(self):
        for c in self.source.base.objects:
            if set(self.components[c].values()) != set(self.target.stage(c)):
                return False
        return True

    def is_iso(self):
        return self.is_mono() and self.is_epi()

    def same_components(self, other):
        return self.components == other.components

    def __eq__(self, other):
        if not isinstance(other, NatTrans):
            return NotImplemented
        return (self.source is other.source and self.target is other.target
                and self.components == other.components)

    def __hash__(self):
        return hash(tuple(sorted(
            (c, tuple(sorted(d.items(), key=repr))) for c, d in self.components.items())))

    def __repr__(self):
        return f"<NatTrans {self.name or '?'}: {self.source.name} => {self.target.name}>"


def identity_nat(F):
    comps = {c: {x: x for x in F.stage(c)} for c in F.base.objects}
    return NatTrans(F, F, comps, name=f"id_{F.name}", check=False)


def enumerate_nat_trans(F, G, which="all", limit=None, limit_what=None):
    """All natural transformations F => G in canonical order.

    which: 'all' | 'mono' | 'epi' | 'iso'; mono/epi are pointwise
    injective/surjective, iso is pointwise bijective. Backtracking with
    forward propagation of naturality constraints keeps this exact but fast.
    limit, if given, aborts with SizeBudgetExceeded once exceeded.
    """
    if F.base is not G.base:
        raise BaseMismatch("presheaves over different bases")
    base = F.base
    cells = [(c, x) for c in base.objects for x in F.stage(c)]
    cell_pos = {cx: i for i, cx in enumerate(cells)}
    succ = []  # per cell: list of (target cell position, arrow name)
    for (c, x) in cells:
        row = []
        for a in base.arrows_from(c):
            if base.is_identity(a.name):
                continue
            row.append((cell_pos[(a.cod, F.act(a.name, x))], a.name))
        succ.append(row)
    gstages = {c: G.stage(c) for c in base.objects}
    mono = which in ("mono", "iso")
    results = []
    n = len(cells)
    assign = [None] * n

    def propagate(i, val, trail):
        stack = [(i, val)]
        while stack:
            j, v = stack.pop()
            cur = assign[j]
            if cur is not None:
                if cur != v:
                    return False
                continue
            assign[j] = v
            trail.append(j)
            for (k, arrow) in succ[j]:
                stack.append((k, G.act(arrow, v)))
        return True

    def rec(i):
        while i < n and assign[i] is not None:
            i += 1
        if i == n:
            comps = {c: {} for c in base.objects}
            for (c, x), v in zip(cells, assign):
                comps[c][x] = v
            results.append(NatTrans(F, G, comps, check=False))
            if limit is not None and len(results) > limit:
                from .errors import SizeBudgetExceeded
                raise SizeBudgetExceeded(limit_what or "nat-trans enumeration",
                                         len(results), limit)
            return
        c, _x = cells[i]
        used = set()
        if mono:
            for j, (cj, _xj) in enumerate(cells):
                if cj == c and assign[j] is not None:
                    used.add(assign[j])
        for v in gstages[c]:
            if mono and v in used:
                continue
            trail = []
            if propagate(i, v, trail):
                rec(i + 1)
            for j in trail:
                assign[j] = None

    rec(0)
    if which == "epi":
        results = [t for t in results if t.is_epi()]
    elif which == "iso":
        results = [t for t in results if t.is_epi()]
    elif which == "mono":
        results = [t for t in results if t.is_mono()]
    return results


class Subfunctor:
    """An action-closed stage-wise subset of a host presheaf."""

    def __init__(self, host, part, check=True):
        self.host = host
        self.part = {}
        for c in host.base.objects:
            got = part.get(c, ())
            stage = host.stage(c)
            sel = tuple(x for x in stage if x in set(got))
            if check and len(set(got)) != len(sel):
                raise ModelFormatError(f"subfunctor part at {c} has foreign elements")
            self.part[c] = sel
        if check:
            self._check_closed()

    def _check_closed(self):
        base = self.host.base
        for a in base.arrows:
            if base.is_identity(a.name):
                continue
            tgt = set(self.part[a.cod])
            for x in self.part[a.dom]:
                if self.host.act(a.name, x) not in tgt:
                    raise NaturalityViolation(
                        f"subfunctor not closed under {a.name} at {x!r}")

    def key(self):
        """Canonical sort key: stage-wise element index vectors."""
        return tuple(tuple(self.host.index(c, x) for x in self.part[c])
                     for c in self.host.base.objects)

    def contains(self, other):
        return all(set(other.part[c]) <= set(self.part[c])
                   for c in self.host.base.objects)

    def __eq__(self, other):
        if not isinstance(other, Subfunctor):
            return NotImplemented
        return self.host is other.host and self.part == other.part

    def __hash__(self):
        return hash(self.key())

    def as_presheaf(self, name=None):
        carriers = {c: self.part[c] for c in self.host.base.objects}
        actions = {}
        for a in self.host.base.arrows:
            if self.host.base.is_identity(a.name):
                continue
            actions[a.name] = {x: self.host.act(a.name, x) for x in self.part[a.dom]}
        return ExplicitPresheaf(self.host.base, carriers, actions,
                                name=name or f"sub({self.host.name})", check=False)

    def inclusion(self):
        sub = self.as_presheaf()
        comps = {c: {x: x for x in self.part[c]} for c in self.host.base.objects}
        return NatTrans(sub, self.host, comps, name="incl", check=False)

    def __repr__(self):
        sizes = ",".join(str(len(self.part[c])) for c in self.host.base.objects)
        return f"<Subfunctor of {self.host.name} sizes ({sizes})>"


def principal_subfunctor(F, c, x):
    """Least subfunctor of F containing x at stage c."""
    part = {d: set() for d in F.base.objects}
    part[c].add(x)
    frontier = [(c, x)]
    while frontier:
        d, y = frontier.pop()
        for a in F.base.arrows_from(d):
            if F.base.is_identity(a.name):
                continue
            z = F.act(a.name, y)
            if z not in part[a.cod]:
                part[a.cod].add(z)
                frontier.append((a.cod, z))
    return Subfunctor(F, part, check=False)


def all_subfunctors(F):
    """Every subfunctor of F, in canonical order.

    Generated as the union closure of the principal subfunctors (every
    subfunctor is the union of the principals of its elements).
    """
    principals = []
    seen = set()
    for c in F.base.objects:
        for x in F.stage(c):
            s = principal_subfunctor(F, c, x)
            if s.key() not in seen:
                seen.add(s.key())
                principals.append(s)
    empty = Subfunctor(F, {c: () for c in F.base.objects}, check=False)
    found = {empty.key(): empty}
    frontier = [empty]
    while frontier:
        s = frontier.pop()
        for p in principals:
            u = _union(F, s, p)
            if u.key() not in found:
                found[u.key()] = u
                frontier.append(u)
    return sorted(found.values(), key=Subfunctor.key)


def _union(F, s, t):
    return Subfunctor(F, {c: set(s.part[c]) | set(t.part[c])
                          for c in F.base.objects}, check=False)
