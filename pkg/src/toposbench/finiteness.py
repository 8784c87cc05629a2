"""Deciders for Dedekind, Kuratowski, and L_p finiteness, internal and
external, built on closure computations inside Omega^A.

Internal Dedekind evaluates the sentence

    forall f:(A->A). Mono(f) => Iso(f)
    Mono(f) := forall h,g:(A->A). comp(f,h) = comp(f,g) => h = g
    Iso(f)  := exists h:(A->A). comp(f,h) = idA /\\ comp(h,f) = idA

When the exponential is small this goes through the abbreviation route
(holds(), the semantics of record). Large instances use the unfolded forcing
of the same sentence: Mono is forced at f iff post-composition by every
restriction of f is injective on the stage carrier, Iso iff every restriction
is two-sided invertible; the two paths are cross-checked in the tests.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import SizeBudgetExceeded, check_budget
from .exponential import (
    compose_elements,
    identity_element,
    name_of_subobject,
    singleton_map,
    union_on,
)
from .limits import STAR, product_list, terminal
from .logic.denote import Signature, TruthValue, denote, holds
from .logic.forcing import _Forcer
from .logic.syntax import (
    And, Eq, Exists, ExpT, Forall, Ground, Implies, Mem, Or, Power, ProductT,
    TupleT, Var,
)
from .logic.typecheck import typecheck
from .omega import is_complemented, sub_join
from .presheaf import NatTrans, Subfunctor, enumerate_nat_trans
from .topos import Topos


@dataclass(frozen=True)
class FinitenessNotion:
    tag: str  # "dedekind" | "kuratowski" | "lp"
    mode: str = "external"  # "internal" | "external"
    p: int = 1

    def __post_init__(self):
        if self.tag not in ("dedekind", "kuratowski", "lp"):
            raise ValueError(f"unknown finiteness notion {self.tag!r}")
        if self.p < 1:
            raise ValueError("p must be >= 1")

    @staticmethod
    def parse(text, mode="external"):
        if text.startswith("lp:"):
            return FinitenessNotion("lp", mode, int(text.split(":", 1)[1]))
        return FinitenessNotion(text, mode)

    def __str__(self):
        n = f"lp:{self.p}" if self.tag == "lp" else self.tag
        return f"{n}/{self.mode}"


class ElementBinOp:
    """A binary operation on a presheaf given element-wise; can be certified
    as a natural transformation host x host -> host on demand."""

    def __init__(self, host, fn, name="op"):
        self.host = host
        self.fn = fn
        self.name = name

    def apply(self, c, u, v):
        return self.fn(c, u, v)

    def as_nat_trans(self):
        P, _ = product_list([self.host, self.host])
        comps = {c: {(u, v): self.fn(c, u, v) for (u, v) in P.stage(c)}
                 for c in self.host.base.objects}
        return NatTrans(P, self.host, comps, name=self.name)


@dataclass
class ClosureSpec:
    host: object
    generators: Subfunctor
    operations: list = field(default_factory=list)


def closure_subobject(spec):
    """Least subfunctor of the host containing the generators and closed
    stage-wise under every operation and under all arrow actions."""
    host = spec.host
    base = host.base
    sets = {c: dict.fromkeys(spec.generators.part[c]) for c in base.objects}
    total = sum(len(s) for s in sets.values())
    check_budget("closure", total)
    dirty = True
    while dirty:
        dirty = False
        for c in base.objects:
            for a in base.arrows_from(c):
                if base.is_identity(a.name):
                    continue
                tgt = sets[a.cod]
                for x in list(sets[c]):
                    y = host.act(a.name, x)
                    if y not in tgt:
                        tgt[y] = None
                        dirty = True
            for op in spec.operations:
                cur = list(sets[c])
                for i, u in enumerate(cur):
                    for v in cur[i:]:
                        w = op.apply(c, u, v)
                        if w not in sets[c]:
                            sets[c][w] = None
                            dirty = True
        check_budget("closure", sum(len(s) for s in sets.values()))
    part = {c: tuple(sorted(sets[c], key=lambda x: host.index(c, x)))
            for c in base.objects}
    return Subfunctor(host, part, check=False)


# ------------------------------------------------------------- Dedekind

@dataclass
class DedekindResult:
    verdict: bool
    mode: str
    truth_value: TruthValue = None
    path: str = ""
    monos_checked: int = 0


# Largest materialized quantifier-context (product carrier) the abbreviation
# route is asked to build before evaluation switches to the forcing fast
# path. The two paths are cross-checked in the test suite.
RECORD_ROUTE_CUTOFF = 50_000


def _dedekind_sentence(E_type):
    from .logic.syntax import App, Star

    def comp(a, b):
        return App(sym="comp", arg=TupleT(items=(a, b)))

    def ident():
        return App(sym="idA", arg=Star())

    mono = Forall(var="h", vartype=E_type, body=Forall(
        var="g", vartype=E_type,
        body=Implies(lhs=Eq(lhs=comp(Var(name="f"), Var(name="h")),
                            rhs=comp(Var(name="f"), Var(name="g"))),
                     rhs=Eq(lhs=Var(name="h"), rhs=Var(name="g")))))
    iso = Exists(var="h", vartype=E_type, body=And(
        lhs=Eq(lhs=comp(Var(name="f"), Var(name="h")), rhs=ident()),
        rhs=Eq(lhs=comp(Var(name="h"), Var(name="f")), rhs=ident())))
    return Forall(var="f", vartype=E_type, body=Implies(lhs=mono, rhs=iso))


def _dedekind_signature(topos, F, E):
    from .logic.syntax import Unit

    sig = Signature(topos, grounds={"A": F})
    E_type = ExpT(Ground("A"), Ground("A"))
    P, _ = product_list([E, E])
    comp_comps = {c: {(u, v): compose_elements(E, c, u, v) for (u, v) in P.stage(c)}
                  for c in topos.base.objects}
    comp_nat = NatTrans(P, E, comp_comps, name="comp", check=False)
    one = topos.terminal
    id_comps = {c: {STAR: identity_element(E, c)} for c in topos.base.objects}
    id_nat = NatTrans(one, E, id_comps, name="idA", check=False)
    sig.bind_symbol("comp", ProductT((E_type, E_type)), E_type, comp_nat)
    sig.bind_symbol("idA", Unit(), E_type, id_nat)
    return sig, E_type


def dedekind_internal_record(F, topos=None):
    """Internal Dedekind by the abbreviation route (semantics of record).

    Materializes context products of exponential carriers, so this is only
    viable when A^A is small; raises SizeBudgetExceeded otherwise.
    """
    topos = topos or Topos(F.base)
    E = topos.exponential(F, F)
    for c in topos.base.objects:
        size = len(E.stage(c))
        check_budget(f"A^A cubed at {c}", size ** 3, limit=RECORD_ROUTE_CUTOFF)
    sig, E_type = _dedekind_signature(topos, F, E)
    sentence = _dedekind_sentence(E_type)
    verdict, tv = holds(sentence, sig)
    return DedekindResult(verdict, "internal", truth_value=tv, path="record")


def _stage_tables(E, d):
    """Numpy value-index matrix plus composition lookup for one stage."""
    elems = E.stage(d)
    cells = E.cells(d)
    a_index = {}
    for (e, _h, a) in cells:
        a_index.setdefault(e, {})
    for e in a_index:
        a_index[e] = {a: i for i, a in enumerate(E.A.stage(e))}
    n_cells = len(cells)
    V = np.empty((len(elems), n_cells), dtype=np.int32)
    for i, th in enumerate(elems):
        V[i] = [a_index[e][val] for (e, _h, _a), val in zip(cells, th)]
    # LOOKUP[cell, value-index] = cell index of (e, h, that value)
    max_width = max((len(E.A.stage(e)) for e in E.base.objects), default=0)
    LOOKUP = np.zeros((n_cells, max(max_width, 1)), dtype=np.int32)
    cell_idx = {cell: i for i, cell in enumerate(cells)}
    for ci, (e, h, _a) in enumerate(cells):
        for a, ai in a_index[e].items():
            LOOKUP[ci, ai] = cell_idx[(e, h, a)]
    row_index = {tuple(map(int, V[i])): i for i in range(len(elems))}
    return elems, V, LOOKUP, row_index


def _dedekind_internal_forcing(F, topos):
    """Forcing evaluation of the same sentence, unfolded per stage."""
    base = topos.base
    E = topos.exponential(F, F)
    injective = {}
    invertible = {}
    elem_index = {}
    for d in base.objects:
        elems, V, LOOKUP, _rows = _stage_tables(E, d)
        elem_index[d] = {th: i for i, th in enumerate(elems)}
        n = len(elems)
        inj = np.zeros(n, dtype=bool)
        inv = np.zeros(n, dtype=bool)
        n_cells = V.shape[1]
        if n and n_cells == 0:
            inj[:] = inv[:] = True
        elif n:
            cell_ar = np.arange(n_cells)
            id_vec = np.asarray(_val_idx(E, d, identity_element(E, d)),
                                dtype=np.int32)
            idb = id_vec.tobytes()
            # G[j, ci] = cell index of (e_ci, h_ci, value of v_j at ci)
            G = LOOKUP[cell_ar[None, :], V]
            for i in range(n):
                u = V[i]
                W = u[G]  # W[j] = comp(u, v_j)
                rows = {W[j].tobytes() for j in range(n)}
                inj[i] = len(rows) == n
                Gu = LOOKUP[cell_ar, u]
                ok = False
                for j in range(n):
                    if W[j].tobytes() == idb and np.array_equal(V[j][Gu], id_vec):
                        ok = True
                        break
                inv[i] = ok
        injective[d] = inj
        invertible[d] = inv

    mono_ok = {}
    iso_ok = {}
    for e in base.objects:
        elems = E.stage(e)
        m = np.zeros(len(elems), dtype=bool)
        s = np.zeros(len(elems), dtype=bool)
        for i, f in enumerate(elems):
            m[i] = all(injective[k.cod][elem_index[k.cod][E.act(k.name, f)]]
                       for k in base.arrows_from(e))
            s[i] = all(invertible[k.cod][elem_index[k.cod][E.act(k.name, f)]]
                       for k in base.arrows_from(e))
        mono_ok[e] = m
        iso_ok[e] = s
    stage_ok = {e: bool(np.all(~mono_ok[e] | iso_ok[e])) for e in base.objects}
    forced = {c: all(stage_ok[k.cod] for k in base.arrows_from(c))
              for c in base.objects}
    om = topos.omega
    vals = {}
    for c in base.objects:
        enc = []
        for dd in base.objects:
            enc.append((dd, tuple(k.name for k in base.arrows_from(c)
                                  if k.cod == dd and forced[dd])))
        vals[c] = tuple(enc)
    tv = TruthValue(om, om.truth(vals))
    return DedekindResult(all(forced.values()), "internal", truth_value=tv,
                          path="forcing")


def _val_idx(E, d, elem):
    cells = E.cells(d)
    idx = []
    for (e, _h, _a), val in zip(cells, elem):
        idx.append(E.A.stage(e).index(val))
    return idx


def dedekind(F, mode="external", topos=None):
    """Decide Dedekind finiteness of F.

    internal: the local-language sentence, record route when A^A context
    products fit the budget, forcing unfolding otherwise.
    external: every pointwise-injective equivariant endomorphism is an iso.
    """
    topos = topos or Topos(F.base)
    if mode == "external":
        monos = enumerate_nat_trans(F, F, "mono")
        verdict = all(t.is_iso() for t in monos)
        return DedekindResult(verdict, "external", monos_checked=len(monos))
    if mode != "internal":
        raise ValueError(f"unknown mode {mode!r}")
    try:
        return dedekind_internal_record(F, topos)
    except SizeBudgetExceeded:
        return _dedekind_internal_forcing(F, topos)


# ------------------------------------------------------------ Kuratowski

@dataclass
class KuratowskiResult:
    verdict: bool
    witness: Subfunctor = None


def _bot_element(E, topos, c):
    om = topos.omega.omega
    return E.transpose_element(c, lambda e, h, a: om.bot_at(e))


def _top_element(E, topos, c):
    om = topos.omega.omega
    return E.transpose_element(c, lambda e, h, a: om.top_at(e))


def kuratowski(F, topos=None):
    """K-finiteness: the name of the top subobject must lie, at every stage,
    in the closure of the empty name and the singleton image under internal
    union inside Omega^F."""
    topos = topos or Topos(F.base)
    base = topos.base
    E = topos.power(F)
    sing = singleton_map(E)
    gens = {}
    for c in base.objects:
        items = [_bot_element(E, topos, c)]
        for x in F.stage(c):
            e = sing.components[c][x]
            if e not in items:
                items.append(e)
        gens[c] = tuple(dict.fromkeys(items))
    union = ElementBinOp(E, union_on(E, topos.omega), name="cup")
    spec = ClosureSpec(E, Subfunctor(E, gens, check=False), [union])
    K = closure_subobject(spec)
    verdict = all(_top_element(E, topos, c) in set(K.part[c]) for c in base.objects)
    return KuratowskiResult(verdict, K)


def subobject_in_K(K, E, sub):
    """Whether a subobject's name factors through the K-subfunctor."""
    nm = name_of_subobject(E, sub)
    return all(nm.components[c][STAR] in set(K.part[c])
               for c in E.base.objects)


def kuratowski_sentence(ground="A"):
    """The direct finiteness sentence over Omega^(Omega^A); cross-check only,
    viable for carriers of total size <= 2."""
    from .logic.parser import parse_formula

    return parse_formula(
        f"forall z:P P {ground}."
        f" (empty({ground}) in z"
        f" /\\ (forall a:{ground}. {{x:{ground} | x = a}} in z)"
        f" /\\ (forall y:P {ground}. forall y2:P {ground}."
        f"      ((y in z /\\ y2 in z) => (y union y2) in z)))"
        f" => {ground} in z")


def kuratowski_direct(F, topos=None):
    """Evaluate the Def-style sentence itself; returns (bool, TruthValue)."""
    topos = topos or Topos(F.base)
    sig = Signature(topos, grounds={"A": F})
    return holds(kuratowski_sentence("A"), sig)


# ----------------------------------------------------------------- Squire

@dataclass
class SquireResult:
    verdict: bool
    p: int
    witness: Subfunctor = None
    stagewise_vs_global_agree: bool = True
    path: str = ""


def phi_p(p, ground="A", strict=False):
    """There are at most p things in S, witnesses ranging over the ambient
    type; with strict=True the witnesses must lie in S."""
    A = Ground(ground)
    S = Var(name="S")
    y = Var(name="y")
    disj = Eq(lhs=y, rhs=Var(name="x1"))
    for i in range(2, p + 1):
        disj = Or(lhs=disj, rhs=Eq(lhs=y, rhs=Var(name=f"x{i}")))
    body = Forall(var="y", vartype=A,
                  body=Implies(lhs=Mem(elem=y, setterm=S), rhs=disj))
    if strict:
        for i in range(1, p + 1):
            body = And(lhs=Mem(elem=Var(name=f"x{i}"), setterm=S), rhs=body)
    for i in range(p, 0, -1):
        body = Exists(var=f"x{i}", vartype=A, body=body)
    return body


def _phi_values(F, topos, p, strict):
    """Stage -> set of Omega^F elements satisfying phi_p, plus the path used."""
    base = topos.base
    E = topos.power(F)
    sig = Signature(topos, grounds={"A": F})
    ctx = (("S", Power(Ground("A"))),)
    formula = phi_p(p, "A", strict)
    om = topos.omega.omega
    # deepest expanded context: [S, w1, x1, ..., wp, xp, y]
    est = max((len(E.stage(c))
               * (len(om.stage(c)) * max(len(F.stage(c)), 1)) ** p
               * max(len(F.stage(c)), 1))
              for c in base.objects)
    if est <= RECORD_ROUTE_CUTOFF:
        den = denote(formula, sig, ctx)
        sats = {c: set(th for th in E.stage(c)
                       if om.is_top(c, den.components[c][(th,)]))
                for c in base.objects}
        return sats, "record"
    checked = typecheck(formula, sig, ctx)
    forcer = _Forcer(sig)
    ctx_list = list(ctx)
    dens = [sig.type_den(t) for _n, t in ctx_list]
    sats = {c: set(th for th in E.stage(c)
                   if forcer.force(checked, c, ctx_list, dens, (th,)))
            for c in base.objects}
    return sats, "forcing"


def squire_lp(F, p, strict_witnesses=False, topos=None):
    """L_p finiteness: the name of id_A must factor through the upper
    semilattice generated by the stage-wise phi_p-satisfying elements of
    Omega^F (the empty name is always included as the empty join)."""
    topos = topos or Topos(F.base)
    base = topos.base
    E = topos.power(F)
    sats, path = _phi_values(F, topos, p, strict_witnesses)
    union = ElementBinOp(E, union_on(E, topos.omega), name="cup")

    def close(stage_sets):
        gens = {c: tuple(th for th in E.stage(c) if th in stage_sets[c])
                for c in base.objects}
        for c in base.objects:
            gens[c] = tuple(dict.fromkeys(gens[c] + (_bot_element(E, topos, c),)))
        spec = ClosureSpec(E, Subfunctor(E, gens, check=False), [union])
        return closure_subobject(spec)

    L = close(sats)
    verdict = all(_top_element(E, topos, c) in set(L.part[c]) for c in base.objects)

    # global-subobject generator variant, for the stage-wise/global comparison
    from .presheaf import all_subfunctors
    om = topos.omega.omega
    globals_sat = {c: set() for c in base.objects}
    for S in all_subfunctors(F):
        nm = name_of_subobject(E, S)
        if all(nm.components[c][STAR] in sats[c] for c in base.objects):
            for c in base.objects:
                globals_sat[c].add(nm.components[c][STAR])
    Lg = close(globals_sat)
    verdict_g = all(_top_element(E, topos, c) in set(Lg.part[c]) for c in base.objects)

    return SquireResult(verdict, p, witness=L,
                        stagewise_vs_global_agree=(verdict == verdict_g),
                        path=path)


# ------------------------------------------------------ property suite

@dataclass
class KPropertyReport:
    checked: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    union_converse_counterexamples: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations


def k_properties_suite(samples, topos=None, max_pairs=6):
    """Check the K-finiteness closure properties on a sample of presheaves.

    Hard properties: 0 and 1 are K-finite; epi images of K-finite objects are
    K-finite; names in K(A) are closed under internal union; B+C and B x C of
    K-finite objects are K-finite; complemented subobjects of K-finite objects
    are K-finite. The converse of the union property fails in non-classical
    toposes; counterexamples are reported, not treated as violations.
    """
    from .limits import coproduct, initial, product
    from .presheaf import all_subfunctors

    if not samples:
        return KPropertyReport()
    topos = topos or Topos(samples[0].base)
    rep = KPropertyReport()

    rep.checked["zero_one"] = 2
    if not kuratowski(initial(topos.base), topos).verdict:
        rep.violations.append(("zero_one", "initial object not K-finite"))
    if not kuratowski(terminal(topos.base), topos).verdict:
        rep.violations.append(("zero_one", "terminal object not K-finite"))

    kfin = {id(F): kuratowski(F, topos).verdict for F in samples}

    n_epi = 0
    for F in samples:
        if not kfin[id(F)]:
            continue
        for G in samples[:max_pairs]:
            epis = enumerate_nat_trans(F, G, "epi")
            if epis:
                n_epi += 1
                if not kfin[id(G)]:
                    rep.violations.append(
                        ("epi_image", f"epi {F.name}->{G.name} breaks K-finiteness"))
    rep.checked["epi_image"] = n_epi

    n_union = 0
    for F in samples:
        subs = all_subfunctors(F)
        if len(subs) > 16:
            subs = subs[:16]
        E = topos.power(F)
        K = kuratowski(F, topos).witness
        for i, B in enumerate(subs):
            for C in subs[i:]:
                n_union += 1
                bk = subobject_in_K(K, E, B)
                ck = subobject_in_K(K, E, C)
                uk = subobject_in_K(K, E, sub_join(B, C))
                if bk and ck and not uk:
                    rep.violations.append(
                        ("union", f"union of K-members leaves K({F.name})"))
                if uk and not (bk and ck):
                    rep.union_converse_counterexamples.append(
                        (F.name, B.key(), C.key()))
    rep.checked["union"] = n_union

    n_prod = 0
    kfins = [F for F in samples if kfin[id(F)]]
    for i, F in enumerate(kfins[:max_pairs]):
        for G in kfins[i:max_pairs]:
            n_prod += 1
            P, _, _ = coproduct(F, G)
            if not kuratowski(P, topos).verdict:
                rep.violations.append(("sum", f"{F.name}+{G.name} not K-finite"))
            Q, _, _ = product(F, G)
            if not kuratowski(Q, topos).verdict:
                rep.violations.append(("product", f"{F.name}x{G.name} not K-finite"))
    rep.checked["sum_product"] = n_prod

    n_comp = 0
    for F in samples:
        if not kfin[id(F)]:
            continue
        for S in all_subfunctors(F):
            if not is_complemented(S):
                continue
            n_comp += 1
            if not kuratowski(S.as_presheaf(), topos).verdict:
                rep.violations.append(
                    ("complemented", f"complemented subobject of {F.name} not K-finite"))
    rep.checked["complemented"] = n_comp
    return rep
