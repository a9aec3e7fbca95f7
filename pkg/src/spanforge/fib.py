"""Discrete fibrations of convolution elements and free-module endomorphisms.

The base category is always a finite, explicitly listed sub-slice: a set
of slice objects together with a set of slice cells closed under
composition and containing all identities.  Unique-lift statements are
local per base arrow, so verifying them over such sub-slices is sound
evidence at any size.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import MalformedTables, NotInternalFunctor, NotLex
from .finset import FinMap, FinSet, all_maps, compose, identity
from .internal import (
    FiniteCategory,
    InternalCategory,
    InternalFunctor,
    LexFunctorData,
    apply_lex_functor,
)
from .feistel import (
    ConvElement,
    KleisliEndo,
    conv_base_change,
    conv_element,
    conv_fibre,
    endo_base_change,
    extend,
    free_module,
    kleisli_endo,
    retrieve,
)
from .report import Report, ReportBuilder
from .span import SliceObject, TwoCell


@dataclass(frozen=True)
class SubSlice:
    """A finite subcategory of the slice over the category's base object."""

    ic: InternalCategory
    objects: tuple[SliceObject, ...]
    arrows: tuple[TwoCell, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        if len(set(self.objects)) != len(self.objects):
            raise MalformedTables("sub-slice objects must be distinct")
        spans = {obj.span: i for i, obj in enumerate(self.objects)}
        for obj in self.objects:
            if obj.o != self.ic.o:
                raise MalformedTables("sub-slice object over the wrong base")
        if len(set(self.arrows)) != len(self.arrows):
            raise MalformedTables("sub-slice arrows must be distinct")
        for cell in self.arrows:
            if cell.src not in spans or cell.dst not in spans:
                raise MalformedTables("sub-slice arrow endpoints must be listed objects")
        arrow_set = set(self.arrows)
        for obj in self.objects:
            ident = TwoCell(obj.span, obj.span, identity(obj.a))
            if ident not in arrow_set:
                raise MalformedTables(f"identity missing for object with |A|={obj.a.size}")
        for t1 in self.arrows:
            for t2 in self.arrows:
                if t1.dst != t2.src:
                    continue
                comp = TwoCell(t1.src, t2.dst, compose(t2.map, t1.map))
                if comp not in arrow_set:
                    raise MalformedTables("sub-slice not closed under composition")

    @cached_property
    def span_index(self) -> dict:
        return {obj.span: i for i, obj in enumerate(self.objects)}

    def arrow_endpoints(self, k: int) -> tuple[int, int]:
        cell = self.arrows[k]
        return self.span_index[cell.src], self.span_index[cell.dst]

    @cached_property
    def base_category(self) -> FiniteCategory:
        objects = tuple(range(len(self.objects)))
        arrows = tuple(range(len(self.arrows)))
        src = {k: self.arrow_endpoints(k)[0] for k in arrows}
        dst = {k: self.arrow_endpoints(k)[1] for k in arrows}
        cell_index = {cell: k for k, cell in enumerate(self.arrows)}
        ident = {}
        for i, obj in enumerate(self.objects):
            ident[i] = cell_index[TwoCell(obj.span, obj.span, identity(obj.a))]
        comp = {}
        for k1, t1 in enumerate(self.arrows):
            for k2, t2 in enumerate(self.arrows):
                if t1.dst != t2.src:
                    continue
                comp[(k1, k2)] = cell_index[TwoCell(t1.src, t2.dst, compose(t2.map, t1.map))]
        return FiniteCategory(objects, arrows, src, dst, ident, comp)


def full_subslice(ic: InternalCategory, objects) -> SubSlice:
    """The full sub-slice on the given objects: every slice cell between them."""
    objects = tuple(objects)
    arrows = []
    for src in objects:
        for dst in objects:
            for phi in all_maps(src.a, dst.a):
                if compose(dst.f, phi) == src.f:
                    arrows.append(TwoCell(src.span, dst.span, phi))
    return SubSlice(ic, objects, tuple(arrows))


def default_subslice(ic: InternalCategory) -> SubSlice:
    """A small canonical sub-slice: the empty object, the points, one pair."""
    empty = SliceObject(FinSet(0), FinMap(FinSet(0), ic.o, ()))
    points = [
        SliceObject(FinSet(1), FinMap(FinSet(1), ic.o, (v,))) for v in range(ic.o.size)
    ]
    two = FinSet(2)
    pair_table = (0, 1 % ic.o.size) if ic.o.size else None
    objects = [empty, *points]
    if pair_table is not None:
        objects.append(SliceObject(two, FinMap(two, ic.o, pair_table)))
    return full_subslice(ic, objects)


@dataclass
class FunctorData:
    """Tabular functor between finite categories: object and arrow tables."""

    source: FiniteCategory
    target: FiniteCategory
    object_map: dict
    arrow_map: dict


def check_functor(fd: FunctorData) -> Report:
    rb = ReportBuilder()
    for x in fd.source.objects:
        if not rb.require(x in fd.object_map, "object-map-total", x):
            continue
        rb.require(fd.object_map[x] in set(fd.target.objects), "object-map-lands", x)
    for a in fd.source.arrows:
        if not rb.require(a in fd.arrow_map, "arrow-map-total", a):
            continue
        fa = fd.arrow_map[a]
        if not rb.require(fa in set(fd.target.arrows), "arrow-map-lands", a):
            continue
        rb.require(
            fd.target.src[fa] == fd.object_map[fd.source.src[a]]
            and fd.target.dst[fa] == fd.object_map[fd.source.dst[a]],
            "endpoints-preserved",
            a,
        )
    for x in fd.source.objects:
        if x in fd.object_map and fd.source.ident[x] in fd.arrow_map:
            rb.require(
                fd.arrow_map[fd.source.ident[x]] == fd.target.ident[fd.object_map[x]],
                "identities-preserved",
                x,
            )
    for (f, g), h in fd.source.comp.items():
        if f in fd.arrow_map and g in fd.arrow_map and h in fd.arrow_map:
            rb.require(
                fd.target.comp[(fd.arrow_map[f], fd.arrow_map[g])] == fd.arrow_map[h],
                "composition-preserved",
                (f, g),
            )
    return rb.report()


@dataclass
class FibrationInstance:
    """A functor presented by tables, meant to be a discrete fibration."""

    total: FiniteCategory
    base: FiniteCategory
    proj: FunctorData

    def __post_init__(self) -> None:
        result = check_functor(self.proj)
        if not result.passed:
            raise MalformedTables(f"projection is not a functor: {result.summary()}")


def check_discrete_fibration(fi: FibrationInstance) -> Report:
    """Unique lifting: one arrow over each base arrow into each fibre object."""
    rb = ReportBuilder()
    lifts: dict[tuple, int] = {}
    for a in fi.total.arrows:
        key = (fi.proj.arrow_map[a], fi.total.dst[a])
        lifts[key] = lifts.get(key, 0) + 1
    for t in fi.total.objects:
        over = fi.proj.object_map[t]
        for k in fi.base.arrows:
            if fi.base.dst[k] != over:
                continue
            count = lifts.get((k, t), 0)
            rb.require(
                count == 1,
                "unique-lift",
                f"base arrow {k!r}, fibre object {t!r}, lifts {count}",
            )
    return rb.report()


def _conv_key(elem: ConvElement) -> tuple:
    return elem.map.table


def _endo_key(endo: KleisliEndo) -> tuple:
    return endo.cell.map.table


def build_conv_fibration(ss: SubSlice, cap: int | None = None) -> FibrationInstance:
    """Category of convolution elements over the sub-slice, with its projection.

    Objects are pairs (slice object, element); an arrow over a base cell
    phi runs from the pullback of an element along phi to that element.
    """
    base = ss.base_category
    fibres = [conv_fibre(obj, ss.ic, cap) for obj in ss.objects]
    fibre_keys = [{_conv_key(e) for e in fibre} for fibre in fibres]
    objects = tuple((i, _conv_key(e)) for i, fibre in enumerate(fibres) for e in fibre)
    arrows = []
    src, dst = {}, {}
    for k, cell in enumerate(ss.arrows):
        i, j = ss.arrow_endpoints(k)
        phi = cell.map.table
        for beta in fibres[j]:
            beta_key = _conv_key(beta)
            pulled = tuple(beta.map.table[v] for v in phi)
            if pulled not in fibre_keys[i]:
                continue
            key = (k, pulled, beta_key)
            arrows.append(key)
            src[key] = (i, pulled)
            dst[key] = (j, beta_key)
    arrows = tuple(arrows)
    ident = {}
    for i, fibre in enumerate(fibres):
        id_k = base.ident[i]
        for e in fibre:
            ident[(i, _conv_key(e))] = (id_k, _conv_key(e), _conv_key(e))
    comp = _composition_over_base(base, arrows, src, dst)
    total = FiniteCategory(objects, arrows, src, dst, ident, comp)
    proj = FunctorData(total, base, {t: t[0] for t in objects}, {a: a[0] for a in arrows})
    return FibrationInstance(total, base, proj)


def _composition_over_base(base: FiniteCategory, arrows, src, dst) -> dict:
    """Composites of lifted arrows: compose the base arrows, keep the ends."""
    by_src: dict = {}
    for a in arrows:
        by_src.setdefault(src[a], []).append(a)
    comp = {}
    for a1 in arrows:
        for a2 in by_src.get(dst[a1], ()):
            comp[(a1, a2)] = (base.comp[(a1[0], a2[0])], a1[1], a2[2])
    return comp


def build_endo_fibration(ss: SubSlice, cap: int | None = None) -> FibrationInstance:
    """Category of simply presented endomorphisms over the sub-slice.

    An arrow over a base cell sigma is a pair of endomorphisms whose
    square (sigma tensored with the arrow span) commutes; the equal
    components of such a morphism make a single cell suffice.
    """
    from .finset import _pair_index
    from .span import tensor_pullback

    base = ss.base_category
    sp_fibres = [
        [extend(alpha) for alpha in conv_fibre(obj, ss.ic, cap)] for obj in ss.objects
    ]
    pbs = [tensor_pullback(obj.span, ss.ic.mor_span) for obj in ss.objects]
    objects = tuple((i, _endo_key(u)) for i, fibre in enumerate(sp_fibres) for u in fibre)
    arrows = []
    src, dst = {}, {}
    for k, cell in enumerate(ss.arrows):
        i, j = ss.arrow_endpoints(k)
        sig = cell.map.table
        src_elems = pbs[i].elems
        dst_index = _pair_index(pbs[j])
        src_tables = [(u, u.cell.map.table) for u in sp_fibres[i]]
        dst_tables = [(v, v.cell.map.table) for v in sp_fibres[j]]
        for u, u_table in src_tables:
            for v, v_table in dst_tables:
                # the endomorphism square for (sigma, sigma), elementwise
                ok = True
                for a, slot in enumerate(u_table):
                    x, m = src_elems[slot]
                    moved = dst_index.get((sig[x], m))
                    if moved is None or moved != v_table[sig[a]]:
                        ok = False
                        break
                if not ok:
                    continue
                key = (k, u_table, v_table)
                arrows.append(key)
                src[key] = (i, u_table)
                dst[key] = (j, v_table)
    arrows = tuple(arrows)
    ident = {}
    for i, fibre in enumerate(sp_fibres):
        id_k = base.ident[i]
        for u in fibre:
            ident[(i, _endo_key(u))] = (id_k, _endo_key(u), _endo_key(u))
    comp = _composition_over_base(base, arrows, src, dst)
    total = FiniteCategory(objects, arrows, src, dst, ident, comp)
    proj = FunctorData(total, base, {t: t[0] for t in objects}, {a: a[0] for a in arrows})
    return FibrationInstance(total, base, proj)


@dataclass
class CartesianIso:
    forward: FunctorData
    backward: FunctorData
    report: Report
    conv: FibrationInstance
    endo: FibrationInstance


def cartesian_iso(ss: SubSlice, cap: int | None = None) -> CartesianIso:
    """The extension/retrieval pair as mutually inverse functors over the base.

    Checks functoriality of both directions, mutual inversion, commutation
    with both projections, and fibrewise naturality of the family.
    """
    conv = build_conv_fibration(ss, cap)
    endo = build_endo_fibration(ss, cap)
    rb = ReportBuilder()

    def as_conv(key) -> ConvElement:
        i, table = key
        return conv_element(ss.objects[i], ss.ic, FinMap(ss.objects[i].a, ss.ic.m, table))

    def as_endo(key) -> KleisliEndo:
        i, table = key
        fa = ss.objects[i]
        apex = free_module(fa, ss.ic).span.apex
        return kleisli_endo(fa, ss.ic, FinMap(fa.a, apex, table))

    endo_objects = set(endo.total.objects)
    conv_objects = set(conv.total.objects)
    fwd_obj = {}
    for key in conv.total.objects:
        image = (key[0], _endo_key(extend(as_conv(key))))
        rb.require(image in endo_objects, "forward-welldefined", key)
        fwd_obj[key] = image
    bwd_obj = {}
    for key in endo.total.objects:
        image = (key[0], _conv_key(retrieve(as_endo(key))))
        rb.require(image in conv_objects, "backward-welldefined", key)
        bwd_obj[key] = image
    endo_arrows = set(endo.total.arrows)
    conv_arrows = set(conv.total.arrows)
    fwd_arr = {}
    for (k, at, bt) in conv.total.arrows:
        i, j = ss.arrow_endpoints(k)
        image = (
            k,
            fwd_obj[(i, at)][1],
            fwd_obj[(j, bt)][1],
        )
        rb.require(image in endo_arrows, "forward-welldefined", (k, at, bt))
        fwd_arr[(k, at, bt)] = image
    bwd_arr = {}
    for (k, ut, vt) in endo.total.arrows:
        i, j = ss.arrow_endpoints(k)
        image = (k, bwd_obj[(i, ut)][1], bwd_obj[(j, vt)][1])
        rb.require(image in conv_arrows, "backward-welldefined", (k, ut, vt))
        bwd_arr[(k, ut, vt)] = image
    forward = FunctorData(conv.total, endo.total, fwd_obj, fwd_arr)
    backward = FunctorData(endo.total, conv.total, bwd_obj, bwd_arr)
    rb.merge(check_functor(forward), "forward-")
    rb.merge(check_functor(backward), "backward-")
    for key in conv.total.objects:
        rb.require(bwd_obj[fwd_obj[key]] == key, "mutual-inverse-objects", key)
    for key in endo.total.objects:
        rb.require(fwd_obj[bwd_obj[key]] == key, "mutual-inverse-objects", key)
    for key in conv.total.arrows:
        rb.require(bwd_arr[fwd_arr[key]] == key, "mutual-inverse-arrows", key)
    for key in endo.total.arrows:
        rb.require(fwd_arr[bwd_arr[key]] == key, "mutual-inverse-arrows", key)
    for key in conv.total.objects:
        rb.require(
            endo.proj.object_map[fwd_obj[key]] == conv.proj.object_map[key],
            "projection-triangle",
            key,
        )
    for key in conv.total.arrows:
        rb.require(
            endo.proj.arrow_map[fwd_arr[key]] == conv.proj.arrow_map[key],
            "projection-triangle",
            key,
        )
    for key in endo.total.objects:
        rb.require(
            conv.proj.object_map[bwd_obj[key]] == endo.proj.object_map[key],
            "projection-triangle",
            key,
        )
    for key in endo.total.arrows:
        rb.require(
            conv.proj.arrow_map[bwd_arr[key]] == endo.proj.arrow_map[key],
            "projection-triangle",
            key,
        )
    for k, cell in enumerate(ss.arrows):
        i, j = ss.arrow_endpoints(k)
        for beta in conv_fibre(ss.objects[j], ss.ic, cap):
            pulled_then_extended = extend(
                conv_base_change(ss.objects[i], cell.map, beta)
            )
            extended_then_pulled = endo_base_change(ss.objects[i], cell.map, extend(beta))
            rb.require(
                _endo_key(pulled_then_extended) == _endo_key(extended_then_pulled),
                "fibrewise-naturality",
                (k, _conv_key(beta)),
            )
    return CartesianIso(forward, backward, rb.report(), conv, endo)


def transported_subslice(
    k: LexFunctorData, functor: InternalFunctor, ss: SubSlice
) -> SubSlice:
    """Image of a sub-slice under a lex functor followed by an internal functor."""
    try:
        objects = tuple(
            SliceObject(k.obj(obj.a), compose(functor.fo, k.arr(obj.f)))
            for obj in ss.objects
        )
        arrows = []
        for cell in ss.arrows:
            src = objects[ss.span_index[cell.src]]
            dst = objects[ss.span_index[cell.dst]]
            arrows.append(TwoCell(src.span, dst.span, k.arr(cell.map)))
        return SubSlice(functor.dst, objects, tuple(arrows))
    except MalformedTables as exc:
        raise NotLex(f"functor fragment does not transport the sub-slice: {exc}") from exc


@dataclass
class TransportResult:
    """Everything the transport of a sub-slice produces, plus its report."""

    report: Report
    transported: SubSlice
    conv_map: FunctorData
    endo_map: FunctorData


def transport_conv(
    k: LexFunctorData,
    functor: InternalFunctor,
    ss: SubSlice,
    cap: int | None = None,
) -> TransportResult:
    """Transport both fibrations along (lex functor, internal functor).

    Builds the image sub-slice, maps every convolution element by
    "arrow map after K", every simply presented endomorphism through its
    arrow component, and checks: both transports are functors, both
    projection squares commute, and the extension family intertwines the
    two transports.
    """
    transported = apply_lex_functor(k, ss.ic)
    if functor.src != transported:
        raise NotInternalFunctor("internal functor must start at the transported category")
    ss2 = transported_subslice(k, functor, ss)
    conv1 = build_conv_fibration(ss, cap)
    conv2 = build_conv_fibration(ss2, cap)
    endo1 = build_endo_fibration(ss, cap)
    endo2 = build_endo_fibration(ss2, cap)
    rb = ReportBuilder()

    def move_conv_table(i: int, table: tuple) -> tuple:
        alpha = FinMap(ss.objects[i].a, ss.ic.m, table)
        return compose(functor.fm, k.arr(alpha)).table

    conv_objects2 = set(conv2.total.objects)
    conv_obj_map = {}
    for (i, table) in conv1.total.objects:
        image = (i, move_conv_table(i, table))
        rb.require(image in conv_objects2, "conv-transport-welldefined", (i, table))
        conv_obj_map[(i, table)] = image
    conv_arrows2 = set(conv2.total.arrows)
    conv_arr_map = {}
    for (arrow_k, at, bt) in conv1.total.arrows:
        i, j = ss.arrow_endpoints(arrow_k)
        image = (arrow_k, move_conv_table(i, at), move_conv_table(j, bt))
        rb.require(image in conv_arrows2, "conv-transport-welldefined", (arrow_k, at, bt))
        conv_arr_map[(arrow_k, at, bt)] = image
    conv_map = FunctorData(conv1.total, conv2.total, conv_obj_map, conv_arr_map)
    rb.merge(check_functor(conv_map), "conv-transport-")
    for key in conv1.total.objects:
        rb.require(
            conv2.proj.object_map[conv_obj_map[key]] == conv1.proj.object_map[key],
            "p-square-objects",
            key,
        )
    for key in conv1.total.arrows:
        rb.require(
            conv2.proj.arrow_map[conv_arr_map[key]] == conv1.proj.arrow_map[key],
            "p-square-arrows",
            key,
        )

    def move_endo_key(i: int, table: tuple) -> tuple:
        fa = ss.objects[i]
        apex = free_module(fa, ss.ic).span.apex
        u = kleisli_endo(fa, ss.ic, FinMap(fa.a, apex, table))
        moved_bar = compose(functor.fm, k.arr(u.bar))
        return _endo_key(extend(conv_element(ss2.objects[i], ss2.ic, moved_bar)))

    endo_objects2 = set(endo2.total.objects)
    endo_obj_map = {}
    for (i, table) in endo1.total.objects:
        image = (i, move_endo_key(i, table))
        rb.require(image in endo_objects2, "endo-transport-welldefined", (i, table))
        endo_obj_map[(i, table)] = image
    endo_arrows2 = set(endo2.total.arrows)
    endo_arr_map = {}
    for (arrow_k, ut, vt) in endo1.total.arrows:
        i, j = ss.arrow_endpoints(arrow_k)
        image = (arrow_k, move_endo_key(i, ut), move_endo_key(j, vt))
        rb.require(image in endo_arrows2, "endo-transport-welldefined", (arrow_k, ut, vt))
        endo_arr_map[(arrow_k, ut, vt)] = image
    endo_map = FunctorData(endo1.total, endo2.total, endo_obj_map, endo_arr_map)
    rb.merge(check_functor(endo_map), "endo-transport-")
    for key in endo1.total.objects:
        rb.require(
            endo2.proj.object_map[endo_obj_map[key]] == endo1.proj.object_map[key],
            "q-square-objects",
            key,
        )
    for key in endo1.total.arrows:
        rb.require(
            endo2.proj.arrow_map[endo_arr_map[key]] == endo1.proj.arrow_map[key],
            "q-square-arrows",
            key,
        )
    for (i, table) in conv1.total.objects:
        elem = conv_element(ss.objects[i], ss.ic, FinMap(ss.objects[i].a, ss.ic.m, table))
        extended_key = (i, _endo_key(extend(elem)))
        lhs = endo_obj_map[extended_key]
        moved = conv_obj_map[(i, table)]
        rhs = (
            i,
            _endo_key(
                extend(conv_element(ss2.objects[i], ss2.ic, FinMap(ss2.objects[i].a, ss2.ic.m, moved[1])))
            ),
        )
        rb.require(lhs == rhs, "intertwine-objects", (i, table))
    for key in conv1.total.arrows:
        arrow_k, at, bt = key
        i, j = ss.arrow_endpoints(arrow_k)
        lhs = endo_arr_map[
            (
                arrow_k,
                _endo_key(extend(conv_element(ss.objects[i], ss.ic, FinMap(ss.objects[i].a, ss.ic.m, at)))),
                _endo_key(extend(conv_element(ss.objects[j], ss.ic, FinMap(ss.objects[j].a, ss.ic.m, bt)))),
            )
        ]
        moved = conv_arr_map[key]
        rhs = (
            arrow_k,
            _endo_key(extend(conv_element(ss2.objects[i], ss2.ic, FinMap(ss2.objects[i].a, ss2.ic.m, moved[1])))),
            _endo_key(extend(conv_element(ss2.objects[j], ss2.ic, FinMap(ss2.objects[j].a, ss2.ic.m, moved[2])))),
        )
        rb.require(lhs == rhs, "intertwine-arrows", key)
    return TransportResult(rb.report(), ss2, conv_map, endo_map)


def compose_intcat_morphisms(
    k1: LexFunctorData,
    functor1: InternalFunctor,
    k2: LexFunctorData,
    functor2: InternalFunctor,
    ic: InternalCategory,
) -> tuple[LexFunctorData, InternalFunctor]:
    """Compose two (lex functor, internal functor) morphisms of internal categories.

    The composite lex data is k2 after k1, tabulated wherever k2 covers the
    k1 image (both fragments are partial, so is the composite); the
    composite internal functor is functor2 after the k2-image of functor1,
    starting at the composite transport of ic.
    """
    objects = {x: k2.objects[y] for x, y in k1.objects.items() if y in k2.objects}
    arrows = {f: k2.arrows[g] for f, g in k1.arrows.items() if g in k2.arrows}
    composite = LexFunctorData(
        objects, arrows, k1.pullback_witnesses, k1.terminal_witness
    )
    src = apply_lex_functor(composite, ic)
    fo = compose(functor2.fo, k2.arr(functor1.fo))
    fm = compose(functor2.fm, k2.arr(functor1.fm))
    return composite, InternalFunctor(src, functor2.dst, fo, fm)
