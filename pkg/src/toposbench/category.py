"""Finite categories and finite monoids, validated exhaustively.

A category is stored as explicit object/arrow/composition tables. Identity
arrows are synthesized automatically (named ``id:<obj>``) and never appear in
user-supplied compose tables. All laws (identity, totality of composition on
composable pairs, associativity) are checked at construction time.

Composition order: ``compose(g, f)`` is "g after f" (f: a -> b, g: b -> c).
A monoid becomes a one-object category via :func:`monoid_to_category` with
``compose(n, m) = m * n``, so that a functor action satisfies
``act(m * n) = act(n) o act(m)``, i.e. presheaves over the category realize
right monoid actions and automaton transition tables transcribe verbatim.
"""

from dataclasses import dataclass
import itertools

from .errors import (
    AssociativityViolation,
    IdentityViolation,
    MissingComposite,
    ModelFormatError,
)


@dataclass(frozen=True)
class Arrow:
    name: str
    dom: str
    cod: str


class FinCategory:
    def __init__(self, objects, arrows, compose, name="C"):
        """Build and certify a finite category.

        objects: iterable of object names.
        arrows: iterable of (name, dom, cod) for the non-identity arrows.
        compose: dict (g_name, f_name) -> name for composable non-identity
            pairs; identity composites are implied.
        """
        self.name = name
        self.objects = tuple(objects)
        if len(set(self.objects)) != len(self.objects):
            raise ModelFormatError("duplicate object names")
        self.identity = {c: f"id:{c}" for c in self.objects}
        arrs = [Arrow(self.identity[c], c, c) for c in self.objects]
        for (nm, d, c) in arrows:
            if d not in self.objects or c not in self.objects:
                raise ModelFormatError(f"arrow {nm}: undeclared object {d if d not in self.objects else c}")
            arrs.append(Arrow(nm, d, c))
        names = [a.name for a in arrs]
        if len(set(names)) != len(names):
            raise ModelFormatError("duplicate arrow names")
        self.arrows = tuple(arrs)
        self._by_name = {a.name: a for a in self.arrows}
        self._ids = set(self.identity.values())

        table = {}
        for (g, f), h in compose.items():
            for nm in (g, f, h):
                if nm not in self._by_name:
                    raise ModelFormatError(f"compose table references unknown arrow {nm!r}")
            if g in self._ids or f in self._ids:
                raise ModelFormatError("compose table must not include identity pairs")
            table[(g, f)] = h
        self._table = table
        self._check_laws()
        self._hom = {}
        for a in self.arrows:
            self._hom.setdefault((a.dom, a.cod), []).append(a)
        self._out = {c: tuple(a for a in self.arrows if a.dom == c) for c in self.objects}

    def arrow(self, name):
        return self._by_name[name]

    def dom(self, name):
        return self._by_name[name].dom

    def cod(self, name):
        return self._by_name[name].cod

    def is_identity(self, name):
        return name in self._ids

    def hom(self, a, b):
        """Arrows a -> b in declaration order (identities first)."""
        return tuple(self._hom.get((a, b), ()))

    def arrows_from(self, c):
        """All arrows with domain c, identities first, declaration order."""
        return self._out[c]

    def compose(self, g, f):
        """g after f, by name; raises MissingComposite off the table."""
        fa, ga = self._by_name[f], self._by_name[g]
        if fa.cod != ga.dom:
            raise MissingComposite(f"{g} o {f}: not composable ({fa.cod} vs {ga.dom})")
        if f in self._ids:
            return g
        if g in self._ids:
            return f
        try:
            return self._table[(g, f)]
        except KeyError:
            raise MissingComposite(f"composite {g} o {f} missing from table") from None

    def _check_laws(self):
        for f in self.arrows:
            for g in self.arrows:
                if f.cod != g.dom:
                    continue
                h = self.compose(g.name, f.name)
                ha = self._by_name.get(h)
                if ha is None or ha.dom != f.dom or ha.cod != g.cod:
                    raise MissingComposite(
                        f"composite {g.name} o {f.name} = {h} has wrong typing")
        for f in self.arrows:
            if self.compose(f.name, self.identity[f.dom]) != f.name:
                raise IdentityViolation(f"{f.name} o id != {f.name}")
            if self.compose(self.identity[f.cod], f.name) != f.name:
                raise IdentityViolation(f"id o {f.name} != {f.name}")
        for f in self.arrows:
            for g in self.arrows:
                if g.dom != f.cod:
                    continue
                gf = self.compose(g.name, f.name)
                for h in self.arrows:
                    if h.dom != g.cod:
                        continue
                    hg = self.compose(h.name, g.name)
                    if self.compose(h.name, gf) != self.compose(hg, f.name):
                        raise AssociativityViolation(
                            f"({h.name} o {g.name}) o {f.name} != {h.name} o ({g.name} o {f.name})")

    def __repr__(self):
        return f"FinCategory({self.name}, {len(self.objects)} objects, {len(self.arrows)} arrows)"


def validate_category(objects, arrows, compose, name="C"):
    """Certify raw tables as a category; raises the first violated law."""
    return FinCategory(objects, arrows, compose, name=name)


class FinMonoid:
    def __init__(self, elements, unit, table, name="M"):
        """elements: names; unit: name; table: dict (m, n) -> m*n (unit rows implied)."""
        self.name = name
        self.elements = tuple(elements)
        if unit not in self.elements:
            raise ModelFormatError(f"unit {unit!r} not among elements")
        if len(set(self.elements)) != len(self.elements):
            raise ModelFormatError("duplicate element names")
        self.unit = unit
        self._table = {}
        for m in self.elements:
            self._table[(self.unit, m)] = m
            self._table[(m, self.unit)] = m
        for (m, n), v in table.items():
            for x in (m, n, v):
                if x not in self.elements:
                    raise ModelFormatError(f"monoid table references unknown element {x!r}")
            prev = self._table.get((m, n))
            if prev is not None and prev != v:
                raise ModelFormatError(f"conflicting products for {m}*{n}")
            self._table[(m, n)] = v
        for m in self.elements:
            for n in self.elements:
                if (m, n) not in self._table:
                    raise MissingComposite(f"product {m}*{n} missing")
        for m in self.elements:
            for n in self.elements:
                for k in self.elements:
                    if self.mul(self.mul(m, n), k) != self.mul(m, self.mul(n, k)):
                        raise AssociativityViolation(f"({m}*{n})*{k} != {m}*({n}*{k})")

    def mul(self, m, n):
        return self._table[(m, n)]

    def __repr__(self):
        return f"FinMonoid({self.name}, {len(self.elements)} elements)"


def monoid_to_category(monoid, obj="*"):
    """One-object category realizing right actions of the monoid.

    The monoid unit becomes the identity arrow; every other element becomes a
    loop. compose(n, m) = m*n, so act(m*n) = act(n) o act(m) for functors.
    """
    arrows = [(m, obj, obj) for m in monoid.elements if m != monoid.unit]
    compose = {}
    for m in monoid.elements:
        if m == monoid.unit:
            continue
        for n in monoid.elements:
            if n == monoid.unit:
                continue
            prod = monoid.mul(m, n)
            key = prod if prod != monoid.unit else f"id:{obj}"
            compose[(n, m)] = key
    cat = FinCategory([obj], arrows, compose, name=monoid.name)
    return cat


def trivial_category():
    """The one-object one-arrow category; Sets^(this) is Sets."""
    return FinCategory(["*"], [], {}, name="Sets")


def arrow_category():
    """The two-object chain 0 -> 1; Sets^(this) is the Sierpinski topos."""
    return FinCategory(["0", "1"], [("u", "0", "1")], {}, name="0->1")


def chain_join_monoid(p):
    """The monoid <{1..p}, max, 1>."""
    elems = [str(i) for i in range(1, p + 1)]
    table = {(m, n): str(max(int(m), int(n))) for m in elems for n in elems}
    return FinMonoid(elems, "1", table, name=f"chain{p}")


def enumerate_monoids(n):
    """All monoids on n elements up to isomorphism, unit first.

    Brute force over multiplication tables with a fixed unit, deduplicated by
    unit-preserving permutations. Element names are e0 (the unit), e1, ...
    """
    names = [f"e{i}" for i in range(n)]
    idx = list(range(n))
    cells = [(i, j) for i in idx for j in idx if i != 0 and j != 0]
    seen = set()
    out = []
    for vals in itertools.product(idx, repeat=len(cells)):
        t = {}
        for i in idx:
            t[(0, i)] = i
            t[(i, 0)] = i
        for cell, v in zip(cells, vals):
            t[cell] = v
        if not all(t[(t[(i, j)], k)] == t[(i, t[(j, k)])]
                   for i in idx for j in idx for k in idx):
            continue
        canon = min(
            tuple(sorted((p[i], p[j], p[t[(i, j)]]) for i in idx for j in idx))
            for p in _unit_fixing_perms(n)
        )
        if canon in seen:
            continue
        seen.add(canon)
        table = {(names[i], names[j]): names[t[(i, j)]] for i in idx for j in idx}
        out.append(FinMonoid(names, "e0", table, name=f"M{n}.{len(out)}"))
    return out


def _unit_fixing_perms(n):
    for perm in itertools.permutations(range(1, n)):
        p = {0: 0}
        p.update({i + 1: perm[i] for i in range(n - 1)})
        yield p
