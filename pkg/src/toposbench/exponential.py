"""Exponential objects B^A computed by natural-family enumeration.

Stage c of B^A carries the natural families Hom(c,-) x A => B. An element is
stored extensionally as a tuple of B-values indexed by the canonical cell list
[(e, h: c->e, a in A(e))]. Carriers are enumerated lazily and budget-checked;
the arrow action, evaluation, and transposition work element-wise without ever
materializing a carrier, which keeps internal equality at exponential types
cheap even when the exponential itself is enormous.
"""

import itertools

from .errors import check_budget, stage_budget
from .presheaf import ExplicitPresheaf, NatTrans, Presheaf, enumerate_nat_trans, representable
from .limits import product_list


class ExpPresheaf(Presheaf):
    def __init__(self, A, B, name=None):
        self.base = A.base
        self.A = A
        self.B = B
        self.name = name or f"{B.name}^{A.name}"
        base = self.base
        self._cells = {}
        self._cell_index = {}
        for c in base.objects:
            cells = []
            for e in base.objects:
                for h in base.arrows_from(c):
                    if h.cod != e:
                        continue
                    for a in A.stage(e):
                        cells.append((e, h.name, a))
            self._cells[c] = tuple(cells)
            self._cell_index[c] = {cell: i for i, cell in enumerate(cells)}
        self._stages = {}
        self._indexes = {}
        # reindexing maps for the action: arrow -> list of source cell positions
        self._act_maps = {}
        for f in base.arrows:
            if base.is_identity(f.name):
                continue
            src_idx = self._cell_index[f.dom]
            self._act_maps[f.name] = tuple(
                src_idx[(e, base.compose(h, f.name), a)]
                for (e, h, a) in self._cells[f.cod])

    def cells(self, c):
        return self._cells[c]

    def stage(self, c):
        if c not in self._stages:
            rep = representable(self.base, c)
            dom, _ = product_list([rep, self.A], name=f"(Hom({c},-) x {self.A.name})")
            fams = enumerate_nat_trans(dom, self.B, "all", limit=stage_budget(),
                                       limit_what=f"{self.name} stage {c}")
            elems = []
            for t in fams:
                elems.append(tuple(t.components[e][(h, a)] for (e, h, a) in self._cells[c]))
            check_budget(f"{self.name} stage {c}", len(elems))
            self._stages[c] = tuple(elems)
            self._indexes[c] = {x: i for i, x in enumerate(elems)}
        return self._stages[c]

    def index(self, c, elem):
        self.stage(c)
        return self._indexes[c][elem]

    def act(self, arrow_name, elem):
        if self.base.is_identity(arrow_name):
            return elem
        return tuple(elem[i] for i in self._act_maps[arrow_name])

    def value(self, c, elem, e, h, a):
        """Component of the family elem at cell (e, h: c->e, a)."""
        return elem[self._cell_index[c][(e, h, a)]]

    def ev(self, c, elem, a):
        """Evaluate the family at the identity cell: ev(c, theta, a) in B(c)."""
        return elem[self._cell_index[c][(c, self.base.identity[c], a)]]

    def transpose_element(self, c, fn):
        """Build a stage-c element from a callback fn(e, h, a) -> B(e)."""
        return tuple(fn(e, h, a) for (e, h, a) in self._cells[c])


def exponential(A, B, name=None):
    return ExpPresheaf(A, B, name=name)


def evaluation(E):
    """The evaluation map A x B^A -> B as an explicit NatTrans."""
    A, B = E.A, E.B
    dom, _ = product_list([A, E], name=f"({A.name} x {E.name})")
    comps = {}
    for c in A.base.objects:
        comps[c] = {(a, th): E.ev(c, th, a) for (a, th) in dom.stage(c)}
    return NatTrans(dom, B, comps, name="ev", check=False), dom


def transpose(E, h, X):
    """Currying: from h: X x A -> B (domain built by product_list) to X -> B^A."""
    base = X.base
    comps = {}
    for c in base.objects:
        d = {}
        for x in X.stage(c):
            d[x] = E.transpose_element(
                c, lambda e, k, a, x=x: h.components[e][(X.act(k, x), a)])
        comps[c] = d
    return NatTrans(X, E, comps, name=f"curry({h.name})", check=False)


def untranspose(E, g, X):
    """Uncurrying: from g: X -> B^A to X x A -> B; returns (map, domain)."""
    dom, _ = product_list([X, E.A], name=f"({X.name} x {E.A.name})")
    comps = {}
    for c in X.base.objects:
        comps[c] = {(x, a): E.ev(c, g.components[c][x], a)
                    for (x, a) in dom.stage(c)}
    return NatTrans(dom, E.B, comps, name=f"uncurry({g.name})", check=False), dom


def identity_element(E, c):
    """The stage-c element of A^A representing the identity."""
    if E.A is not E.B:
        raise ValueError("identity element needs an endo-exponential")
    return E.transpose_element(c, lambda e, h, a: a)


def compose_elements(E, c, u, v):
    """Internal composition in A^A at stage c: (u o v)(h, a) = u(h, v(h, a))."""
    return E.transpose_element(
        c, lambda e, h, a: E.value(c, u, e, h, E.value(c, v, e, h, a)))


def name_of_subobject(E, sub):
    """The global element 1 -> Omega^A naming a subfunctor of A (A = E.A)."""
    from .limits import STAR, terminal

    base = E.base
    part = {c: set(sub.part[c]) for c in base.objects}

    def val(e, h, a):
        enc = []
        for dd in base.objects:
            names = tuple(k.name for k in base.arrows_from(e)
                          if k.cod == dd and E.A.act(k.name, a) in part[dd])
            enc.append((dd, names))
        return tuple(enc)

    comps = {c: {STAR: E.transpose_element(c, val)} for c in base.objects}
    return NatTrans(terminal(base), E, comps, name="name", check=False)


def singleton_map(E):
    """The internal singleton A -> Omega^A (a |-> {a})."""
    A = E.A
    base = A.base
    comps = {}
    for c in base.objects:
        d = {}
        for x in A.stage(c):
            def val(e, h, a, x=x):
                enc = []
                for dd in base.objects:
                    names = tuple(
                        k.name for k in base.arrows_from(e)
                        if k.cod == dd and
                        A.act(k.name, a) == A.act(base.compose(k.name, h), x))
                    enc.append((dd, names))
                return tuple(enc)
            d[x] = E.transpose_element(c, val)
        comps[c] = d
    return NatTrans(A, E, comps, name="sing", check=False)


def union_on(E, structure):
    """Element-wise internal union on Omega^A (pointwise join in Omega)."""
    om = structure.omega

    def join_elems(c, u, v):
        cells = E.cells(c)
        return tuple(om.join(e, uu, vv)
                     for (e, _h, _a), uu, vv in zip(cells, u, v))

    return join_elems
