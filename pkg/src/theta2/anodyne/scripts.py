"""Replay scripts: each one re-enacts a gluing decomposition step by step.

A script fixes an ambient cellular set, an initial subobject, an ordered
list of attachments with their predicted attachment loci, and a target.
The runner executes the list, verifies every square, and compares the
final union against the target up to the certified dimension.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from ..boxprod import (
    BoxCellSet,
    boundary,
    equiv_horiz,
    horn_h,
    horn_v,
    horn_h_alt,
    lambda_subobject,
    sigma_subobject,
    spine_subobject,
    theta_corner,
    upsilon_subobject,
    vertical_extension_ambient,
    psi_contains,
    theta_corner_contains,
)
from ..cellset import Cell, Subobject, representable
from ..delta import SimplicialOperator, all_monos, shuffle_leq, shuffles
from ..sset import DIAMOND, FILLED, J, standard_simplex
from ..theta import (
    CellularOperator,
    HyperfaceLabel,
    ThetaError,
    ThetaShape,
    faces_between,
    horizontal_face_0,
    horizontal_face_n,
    hyperface_operator,
    identity_cellular,
    is_mono_vertebral,
    op_dual_shape,
    outer_hyperface_order,
    shapes_upto,
    vertical_hyperface,
)
from .admissible import is_admissible, shuffle_slice
from .gluing import GluingStep, verify_gluing_square


@dataclass
class StepSpec:
    kind: str  # "attach" | "attach_map" | "check"
    label: str
    cell: Optional[Cell] = None
    expected_w: Optional[Subobject] = None
    horn: Optional[dict] = None
    source: object = None
    map_fn: Optional[Callable] = None
    check_fn: Optional[Callable] = None
    # attachments at the truncation bound are executed but not certified:
    # their attachment loci may miss cells whose parents exceed the bound
    tail: bool = False
    # margin attachments above the bound are pure coverage, never checked
    verify: bool = True
    # optional dimension cap for the pullback comparison of map steps
    compare_dim: object = None


@dataclass
class Fork:
    name: str
    steps: list
    target: Subobject
    certified_dim: int


@dataclass
class ReplayScript:
    name: str
    params: dict
    ambient: object
    initial: Subobject
    steps: list
    target: Optional[Subobject]
    certified_dim: int
    forks: list = field(default_factory=list)
    trivial: bool = False
    notes: list = field(default_factory=list)


def _run_steps(ambient, y, steps, out_steps):
    """Run the step list, aborting at the first failed certified check."""
    ok = True
    for idx, spec in enumerate(steps):
        if spec.kind == "check":
            good, detail = spec.check_fn(y)
            out_steps.append(
                {
                    "index": idx,
                    "cell": None,
                    "shape": None,
                    "horn": None,
                    "checks": {"stage": bool(good)},
                    "label": spec.label,
                    "detail": detail,
                }
            )
            if not good:
                out_steps[-1]["aborted"] = True
                return False, y
            continue
        if not spec.verify:
            from .gluing import image_subobject

            step = GluingStep(
                ambient=ambient,
                before=y,
                expected_w=spec.expected_w,
                cell=spec.cell,
                source=spec.source,
                map_fn=spec.map_fn,
                horn=spec.horn,
                label=spec.label,
            )
            y = y.union(image_subobject(step))
            out_steps.append(
                {"index": idx, "label": spec.label, "margin_only": True}
            )
            continue
        step = GluingStep(
            ambient=ambient,
            before=y,
            expected_w=spec.expected_w,
            cell=spec.cell,
            source=spec.source,
            map_fn=spec.map_fn,
            horn=spec.horn,
            label=spec.label,
            compare_dim=spec.compare_dim,
        )
        report, y = verify_gluing_square(step)
        report["index"] = idx
        if spec.tail:
            report["uncertified_tail"] = True
        out_steps.append(report)
        if not spec.tail and not report["ok"]:
            report["aborted"] = True
            return False, y
    return ok, y


def replay(script):
    """Execute a script; returns a machine-readable report."""
    report = {
        "script": script.name,
        "params": script.params,
        "bound": script.ambient.bound if script.ambient is not None else None,
        "trivial": script.trivial,
        "steps": [],
        "notes": list(script.notes),
    }
    if script.trivial and not script.steps and not script.forks:
        report["final"] = {"equals_target": True, "certified_dim": script.certified_dim}
        report["ok"] = True
        return report

    ok, y = _run_steps(script.ambient, script.initial, script.steps, report["steps"])

    if script.forks:
        report["forks"] = {}
        for fork in script.forks:
            fsteps = []
            if ok:
                fok, fy = _run_steps(script.ambient, y, fork.steps, fsteps)
                equals = fy.equals_up_to(fork.target, fork.certified_dim)
            else:
                fok, equals = False, False
            report["forks"][fork.name] = {
                "steps": fsteps,
                "final": {
                    "equals_target": equals,
                    "certified_dim": fork.certified_dim,
                },
            }
            ok = ok and fok and equals
        report["final"] = {"equals_target": ok, "certified_dim": script.certified_dim}
    else:
        equals = y.equals_up_to(script.target, script.certified_dim)
        report["final"] = {
            "equals_target": equals,
            "certified_dim": script.certified_dim,
        }
        ok = ok and equals
    report["ok"] = ok
    return report


# -- helpers ------------------------------------------------------------------


def _hyperface_cell(shape, label):
    op = hyperface_operator(shape, label)
    return Cell(op.src, op)


def _face_cell(op):
    return Cell(op.src, op)


def _closure_with(shape, base, extra_ops):
    sub = base
    if extra_ops:
        extra = Subobject.generated(
            representable(shape), [Cell(op.src, op) for op in extra_ops]
        )
        sub = sub.union(extra)
    return sub


def _vlabel(k, i):
    return HyperfaceLabel(HyperfaceLabel.V, k=k, i=i)


def _hlabel(k, shf):
    return HyperfaceLabel(HyperfaceLabel.HK, k=k, shuffle=shf)


def _horn_meta(family, shape, k=None, i=None, shf=None):
    meta = {"family": family, "shape": str(shape)}
    if k is not None:
        meta["k"] = k
    if i is not None:
        meta["i"] = i
    if shf is not None:
        meta["shuffle"] = str(shf)
    return meta


# -- spine decomposition -------------------------------------------------------


def spine_anodyne(shape):
    """Stagewise decomposition of the spine inclusion into horn gluings."""
    params = {"shape": str(shape)}
    if is_mono_vertebral(shape):
        amb = representable(shape)
        return ReplayScript(
            name="spine_anodyne",
            params=params,
            ambient=amb,
            initial=Subobject.full(amb),
            steps=[],
            target=Subobject.full(amb),
            certified_dim=shape.dim,
            trivial=True,
            notes=["mono-vertebral shape: spine inclusion is the identity"],
        )
    amb = representable(shape)
    steps = []
    n = shape.n
    if n == 1:
        q = shape.q(1)
        top = vertical_hyperface(shape, 1, q)
        steps.append(
            StepSpec(
                kind="attach",
                label="glue dv^{1;q} along lower spine",
                cell=_face_cell(top),
                expected_w=spine_subobject(top.src),
            )
        )
        bottom = vertical_hyperface(shape, 1, 0)
        steps.append(
            StepSpec(
                kind="attach",
                label="glue dv^{1;0} along dagger stage",
                cell=_face_cell(bottom),
                expected_w=sigma_subobject(bottom.src, frozenset([_vlabel(1, q - 1)])),
            )
        )
        for p in range(2, q + 1):
            src = ThetaShape((p,))
            for alpha in all_monos(p, q):
                if {0, 1, q} <= set(alpha.values):
                    cell_op = vertical_face(shape, alpha)
                    steps.append(
                        StepSpec(
                            kind="attach",
                            label=f"glue [id;{alpha.short()}] along horn-v^(1;1)",
                            cell=_face_cell(cell_op),
                            expected_w=horn_v(src, 1, 1).domain,
                            horn=_horn_meta("horn-v", src, k=1, i=1),
                        )
                    )
    else:
        dh_n = horizontal_face_n(shape)
        steps.append(
            StepSpec(
                kind="attach",
                label="glue dh^n face along lower spine",
                cell=_face_cell(dh_n),
                expected_w=spine_subobject(dh_n.src),
            )
        )
        dh_0 = horizontal_face_0(shape)
        prime_src = dh_0.src
        prime = _closure_with(
            prime_src,
            spine_subobject(prime_src),
            [horizontal_face_n(prime_src)] if prime_src.n >= 1 else [],
        )
        steps.append(
            StepSpec(
                kind="attach",
                label="glue dh^0 face along primed stage",
                cell=_face_cell(dh_0),
                expected_w=prime,
            )
        )
        pending = []
        for src in shapes_upto(shape.dim):
            for f in faces_between(src, shape):
                im = set(f.horizontal.values)
                if {0, 1, n} <= im:
                    pending.append(f)
        pending.sort(key=lambda f: (f.src.dim, f))
        for f in pending:
            steps.append(
                StepSpec(
                    kind="attach",
                    label=f"glue {f} along horn-h^1",
                    cell=_face_cell(f),
                    expected_w=horn_h(f.src, 1).domain,
                    horn=_horn_meta("horn-h", f.src, k=1),
                )
            )
    return ReplayScript(
        name="spine_anodyne",
        params=params,
        ambient=amb,
        initial=spine_subobject(shape),
        steps=steps,
        target=Subobject.full(amb),
        certified_dim=shape.dim,
    )


def vertical_face(shape, alpha):
    """The vertical face [id; alpha] into a one-object-row shape."""
    if shape.n != 1:
        raise ThetaError("vertical_face expects a shape [1;q]")
    src = ThetaShape((alpha.src,))
    return CellularOperator(src, shape, SimplicialOperator([0, 1], 1), (alpha,))


# -- outer-hyperface stage -----------------------------------------------------


def _sigma_case_t(shape, label, before_labels):
    """The predicted locus for attaching one outer hyperface to a sigma stage.

    Returns (source shape, T labels) following the outer case analysis.
    """
    n = shape.n
    op = hyperface_operator(shape, label)
    src = op.src

    def p(l):
        return src.q(l)

    t = set()
    if label.variant == HyperfaceLabel.V and label.i == 0:
        k = label.k
        t = {_vlabel(l, 0) for l in range(1, k) if p(l) >= 1}
    elif label.variant == HyperfaceLabel.H0:
        t = {_vlabel(k, 0) for k in range(1, n) if p(k) >= 1}
    elif label.variant == HyperfaceLabel.HN:
        t = {_vlabel(k, 0) for k in range(1, n) if p(k) >= 1}
        if src.n >= 1 and p(1) == 0:
            t.add(HyperfaceLabel(HyperfaceLabel.H0))
    else:
        k = label.k
        q_k = shape.q(k)
        if q_k >= 2:
            t = {_vlabel(l, 0) for l in range(1, n + 1) if p(l) >= 1}
            t |= {_vlabel(l, p(l)) for l in range(1, k) if p(l) >= 1}
            if p(1) == 0:
                t.add(HyperfaceLabel(HyperfaceLabel.H0))
            if p(n) == 0:
                t.add(HyperfaceLabel(HyperfaceLabel.HN, k=n))
        elif k == 1:
            t = {_vlabel(l, 0) for l in range(1, n + 1) if p(l) >= 1}
            t.add(HyperfaceLabel(HyperfaceLabel.H0))
            if p(n) == 0:
                t.add(HyperfaceLabel(HyperfaceLabel.HN, k=n))
        elif k == n:
            t = {_vlabel(l, 0) for l in range(1, n + 1) if p(l) >= 1}
            t |= {_vlabel(l, p(l)) for l in range(1, n) if p(l) >= 1}
            if p(1) == 0:
                t.add(HyperfaceLabel(HyperfaceLabel.H0))
            t.add(HyperfaceLabel(HyperfaceLabel.HN, k=n))
        else:
            t = {_vlabel(l, 0) for l in range(1, n + 1) if l != k and p(l) >= 1}
            t |= {_vlabel(l, p(l)) for l in range(1, k) if p(l) >= 1}
            if p(1) == 0:
                t.add(HyperfaceLabel(HyperfaceLabel.H0))
            if p(n) == 0:
                t.add(HyperfaceLabel(HyperfaceLabel.HN, k=n))
    return src, frozenset(t)


def sigma_s(shape, labels):
    """Attach a downward-closed set of outer hyperfaces onto the spine."""
    chain = outer_hyperface_order(shape)
    labels = list(labels)
    if labels != list(chain[: len(labels)]):
        raise ThetaError("sigma_s needs a downward-closed prefix of the outer order")
    amb = representable(shape)
    steps = []
    notes = []
    for idx, label in enumerate(labels):
        src, t = _sigma_case_t(shape, label, labels[:idx])
        order = outer_hyperface_order(src)
        positions = [order.index(l) for l in t]
        if sorted(positions) != list(range(len(t))):
            notes.append(f"T at {label} is not downward closed")
        if len(t) > idx:
            notes.append(f"|T| > |S'| at {label}")
        steps.append(
            StepSpec(
                kind="attach",
                label=f"glue outer {label}",
                cell=_hyperface_cell(shape, label),
                expected_w=sigma_subobject(src, t),
            )
        )
    return ReplayScript(
        name="sigma_s",
        params={"shape": str(shape), "labels": [str(l) for l in labels]},
        ambient=amb,
        initial=spine_subobject(shape),
        steps=steps,
        target=sigma_subobject(shape, frozenset(labels)),
        certified_dim=shape.dim,
        notes=notes,
    )


# -- inner-hyperface stages ----------------------------------------------------


def _vertical_pullback_labels(before, k, i):
    t = set()
    for lbl in before:
        if lbl.k == k and lbl.i > i:
            t.add(_vlabel(k, lbl.i - 1))
        else:
            t.add(_vlabel(lbl.k, lbl.i))
    return frozenset(t)


def upsilon_vertical(shape, labels):
    """Attach admissible inner vertical hyperfaces onto the outer stage."""
    labels = sorted(set(labels), key=lambda l: (l.k, l.i))
    for l in labels:
        if l.variant != HyperfaceLabel.V:
            raise ThetaError("upsilon_vertical expects vertical labels only")
    ok, _ = is_admissible(shape, labels)
    if not ok:
        raise ThetaError(f"set is not admissible for {shape}")
    amb = representable(shape)
    steps = []
    notes = []
    attached = []
    for label in labels:
        op = hyperface_operator(shape, label)
        t = _vertical_pullback_labels(attached, label.k, label.i)
        t_ok, _ = is_admissible(op.src, t)
        if not t_ok:
            notes.append(f"T at {label} is not admissible")
        if len(t) != len(attached):
            notes.append(f"|T| != |S'| at {label}")
        steps.append(
            StepSpec(
                kind="attach",
                label=f"glue inner vertical {label}",
                cell=_face_cell(op),
                expected_w=upsilon_subobject(op.src, t),
            )
        )
        attached.append(label)
    return ReplayScript(
        name="upsilon_vertical",
        params={"shape": str(shape), "labels": [str(l) for l in labels]},
        ambient=amb,
        initial=upsilon_subobject(shape, frozenset()),
        steps=steps,
        target=upsilon_subobject(shape, frozenset(labels)),
        certified_dim=shape.dim,
        notes=notes,
    )


def _merged_shape(shape, k):
    qs = shape.qs[: k - 1] + (shape.q(k) + shape.q(k + 1),) + shape.qs[k + 1 :]
    return ThetaShape(qs)


def _horizontal_stage_t(shape, k, shf, stage_labels):
    """The seven-piece locus for attaching one horizontal hyperface.

    ``stage_labels`` is the stage set including the current face.
    """
    n = shape.n
    src = _merged_shape(shape, k)
    before = set(stage_labels) - {_hlabel(k, shf)}
    t = set()
    # T1: fully-attached lower horizontal levels transfer wholesale
    for ell in range(1, k):
        if shuffle_slice(stage_labels, ell) == set(shuffles(shape.q(ell), shape.q(ell + 1))):
            for g in shuffles(src.q(ell), src.q(ell + 1)):
                t.add(_hlabel(ell, g))
    for ell in range(k + 1, n):
        if shuffle_slice(stage_labels, ell) == set(shuffles(shape.q(ell), shape.q(ell + 1))):
            for g in shuffles(src.q(ell - 1), src.q(ell)):
                t.add(_hlabel(ell - 1, g))
    # T2: lower corners of the attached shuffle
    from ..delta import shuffle_corners

    lower, _ = shuffle_corners(shf)
    for j in lower:
        t.add(_vlabel(k, j))
    # T3 and its shift
    for lbl in before:
        if lbl.variant != HyperfaceLabel.V:
            continue
        if lbl.k < k:
            t.add(_vlabel(lbl.k, lbl.i))
        elif lbl.k > k + 1:
            t.add(_vlabel(lbl.k - 1, lbl.i))
    # T4/T4': singleton preimages of attached verticals at k and k+1
    alpha = shf.alpha.values
    alpha_p = shf.alpha_prime.values
    for lbl in before:
        if lbl.variant != HyperfaceLabel.V:
            continue
        if lbl.k == k:
            pre = [j for j, v in enumerate(alpha) if v == lbl.i]
            if len(pre) == 1:
                t.add(_vlabel(k, pre[0]))
        if lbl.k == k + 1:
            pre = [j for j, v in enumerate(alpha_p) if v == lbl.i]
            if len(pre) == 1:
                t.add(_vlabel(k, pre[0]))
    return src, frozenset(t)


def _horizontal_attach_order(shape, labels):
    """Groups of horizontal labels: full levels ascending, partial level last."""
    horiz = [l for l in labels if l.variant == HyperfaceLabel.HK]
    ks = sorted({l.k for l in horiz})
    partial = []
    full = []
    for k in ks:
        sl = shuffle_slice(horiz, k)
        if sl == set(shuffles(shape.q(k), shape.q(k + 1))):
            full.append(k)
        else:
            partial.append(k)
    order = []
    for k in full + partial:
        group = sorted(
            (l for l in horiz if l.k == k), key=lambda l: l.shuffle.alpha.values
        )
        order.extend(group)
    return order


def upsilon_full(shape, labels):
    """Attach an admissible mixed set of inner hyperfaces onto the outer stage."""
    labels = set(labels)
    ok, _ = is_admissible(shape, labels)
    if not ok:
        raise ThetaError(f"set is not admissible for {shape}")
    amb = representable(shape)
    verticals = sorted(
        (l for l in labels if l.variant == HyperfaceLabel.V), key=lambda l: (l.k, l.i)
    )
    horizontals = _horizontal_attach_order(shape, labels)
    steps = []
    notes = []
    attached = []
    for label in verticals:
        op = hyperface_operator(shape, label)
        t = _vertical_pullback_labels(attached, label.k, label.i)
        steps.append(
            StepSpec(
                kind="attach",
                label=f"glue inner vertical {label}",
                cell=_face_cell(op),
                expected_w=upsilon_subobject(op.src, t),
            )
        )
        attached.append(label)
    for label in horizontals:
        stage = set(attached) | {label}
        src, t = _horizontal_stage_t(shape, label.k, label.shuffle, stage)
        t_ok, _ = is_admissible(src, t)
        if not t_ok:
            notes.append(f"T at {label} is not admissible")
        steps.append(
            StepSpec(
                kind="attach",
                label=f"glue inner horizontal {label}",
                cell=_hyperface_cell(shape, label),
                expected_w=upsilon_subobject(src, t),
            )
        )
        attached.append(label)
    return ReplayScript(
        name="upsilon_full",
        params={"shape": str(shape), "labels": sorted(str(l) for l in labels)},
        ambient=amb,
        initial=upsilon_subobject(shape, frozenset()),
        steps=steps,
        target=upsilon_subobject(shape, frozenset(labels)),
        certified_dim=shape.dim,
        notes=notes,
    )


# -- alternative horns ---------------------------------------------------------


def oury_from_alt(shape, labels):
    """Decompose a multi-hyperface horn into elementary (alternative) horns."""
    labels = set(labels)
    if not labels:
        raise ThetaError("oury_from_alt needs a non-empty excluded set")
    variants = {l.variant for l in labels}
    amb = representable(shape)
    steps = []
    notes = []
    if variants == {HyperfaceLabel.V}:
        ks = {l.k for l in labels}
        if len(ks) != 1:
            raise ThetaError("vertical excluded set must sit at a single hom")
        k = ks.pop()
        remaining = sorted(l.i for l in labels)
        for l in labels:
            if not 1 <= l.i <= shape.q(k) - 1:
                raise ThetaError("excluded verticals must be inner")
        while len(remaining) >= 2:
            i = remaining[-1]
            op = hyperface_operator(shape, _vlabel(k, i))
            t = {_vlabel(k, j) for j in remaining if j < i}
            t |= {_vlabel(k, j - 1) for j in remaining if j > i}
            steps.append(
                StepSpec(
                    kind="attach",
                    label=f"glue dv^({k};{i})",
                    cell=_face_cell(op),
                    expected_w=lambda_subobject(op.src, frozenset(t)),
                )
            )
            remaining = remaining[:-1]
        i0 = remaining[0]
        steps.append(
            StepSpec(
                kind="attach",
                label=f"fill elementary horn-v^({k};{i0})",
                cell=Cell(shape, identity_cellular(shape)),
                expected_w=horn_v(shape, k, i0).domain,
                horn=_horn_meta("horn-v", shape, k=k, i=i0),
            )
        )
    elif variants == {HyperfaceLabel.HK}:
        ks = {l.k for l in labels}
        if len(ks) != 1:
            raise ThetaError("horizontal excluded set must sit at a single level")
        k = ks.pop()
        shfs = {l.shuffle for l in labels}
        pool = shuffles(shape.q(k), shape.q(k + 1))
        upward = all(
            (t in shfs) or not shuffle_leq(s, t) for s in shfs for t in pool
        )
        if not upward:
            raise ThetaError("horizontal excluded set must be upward closed")
        remaining = sorted(shfs, key=lambda s: s.alpha.values)
        from ..delta import shuffle_corners

        while len(remaining) >= 2:
            shf = remaining[0]
            op = hyperface_operator(shape, _hlabel(k, shf))
            _, upper = shuffle_corners(shf)
            t = {_vlabel(k, j) for j in upper}
            steps.append(
                StepSpec(
                    kind="attach",
                    label=f"glue dh^({k};{shf})",
                    cell=_face_cell(op),
                    expected_w=lambda_subobject(op.src, frozenset(t)),
                )
            )
            remaining = remaining[1:]
        last = remaining[0]
        steps.append(
            StepSpec(
                kind="attach",
                label=f"fill elementary alt horn at {last}",
                cell=Cell(shape, identity_cellular(shape)),
                expected_w=horn_h_alt(shape, k, last).domain,
                horn=_horn_meta("horn-h-alt", shape, k=k, shf=last),
            )
        )
    else:
        raise ThetaError("excluded set must be all-vertical or all-horizontal")
    return ReplayScript(
        name="oury_from_alt",
        params={"shape": str(shape), "labels": sorted(str(l) for l in labels)},
        ambient=amb,
        initial=lambda_subobject(shape, frozenset(labels)),
        steps=steps,
        target=Subobject.full(amb),
        certified_dim=shape.dim,
        notes=notes,
    )


def _alt_stage_t(shape, k, base, shf):
    """The six-piece locus for the upward-closed alternative-horn lemma."""
    from ..delta import shuffle_corners

    src = _merged_shape(shape, k)
    t = set()
    for ell in range(1, src.n):
        for g in shuffles(src.q(ell), src.q(ell + 1)):
            t.add(_hlabel(ell, g))
    lower, upper = shuffle_corners(shf)
    for j in upper:
        t.add(_vlabel(k, j))
    for m in range(1, src.n + 1):
        if m == k:
            continue
        for j in range(1, src.q(m)):
            t.add(_vlabel(m, j))
    alpha = shf.alpha.values
    alpha_p = shf.alpha_prime.values
    for i in range(1, shape.q(k)):
        pre = [j for j, v in enumerate(alpha) if v == i]
        if len(pre) == 1:
            t.add(_vlabel(k, pre[0]))
    for i in range(1, shape.q(k + 1)):
        pre = [j for j, v in enumerate(alpha_p) if v == i]
        if len(pre) == 1:
            t.add(_vlabel(k, pre[0]))
    for j in lower:
        if shf.alpha.values[j] == base.alpha.values[j]:
            t.add(_vlabel(k, j))
    return src, frozenset(t)


def alt_trivial(shape, k, base_shf, i_set):
    """Upward-closed alternative-horn decomposition above a fixed shuffle."""
    pool = shuffles(shape.q(k), shape.q(k + 1))
    up = [s for s in pool if shuffle_leq(base_shf, s)]
    i_set = set(i_set)
    if not i_set or not i_set <= set(up):
        raise ThetaError("index set must be a non-empty subset of the up-set")
    for s in i_set:
        for t in up:
            if shuffle_leq(t, s) and t not in i_set:
                raise ThetaError("index set must be downward closed in the up-set")
    amb = representable(shape)
    all_labels = frozenset(_hlabel(k, s) for s in up)
    stilde = frozenset(
        l for l in __inner_labels(shape) if l not in all_labels
    )

    def base_check(y):
        want = upsilon_subobject(shape, stilde)
        return y.same_cells(want), "lambda over the up-set equals the upsilon form"

    steps = [StepSpec(kind="check", label="base identity", check_fn=base_check)]
    notes = []
    to_attach = sorted(
        (s for s in up if s not in i_set), key=lambda s: s.alpha.values, reverse=True
    )
    for shf in to_attach:
        src, t = _alt_stage_t(shape, k, base_shf, shf)
        t_ok, _ = is_admissible(src, t)
        if not t_ok:
            notes.append(f"T at {shf} is not admissible")
        op = hyperface_operator(shape, _hlabel(k, shf))
        steps.append(
            StepSpec(
                kind="attach",
                label=f"glue dh^({k};{shf})",
                cell=_face_cell(op),
                expected_w=upsilon_subobject(src, t),
            )
        )
    return ReplayScript(
        name="alt_trivial",
        params={
            "shape": str(shape),
            "k": k,
            "base": str(base_shf),
            "i_set": sorted(str(s) for s in i_set),
        },
        ambient=amb,
        initial=lambda_subobject(shape, all_labels),
        steps=steps,
        target=lambda_subobject(shape, frozenset(_hlabel(k, s) for s in i_set)),
        certified_dim=shape.dim,
        notes=notes,
    )


def __inner_labels(shape):
    from ..theta import inner_hyperface_labels

    return inner_hyperface_labels(shape)


# -- vertical equivalence extensions -------------------------------------------


def _slot_comp(payload, slot):
    x, comps = payload
    if x[0] < slot <= x[-1]:
        return comps[slot - x[0] - 1]
    return None


def _has_filled(payload, k):
    y = _slot_comp(payload, k)
    return y is not None and FILLED in y


def _is_identity_comp(payload, slot, q):
    y = _slot_comp(payload, slot)
    return y == tuple(range(q + 1))


def _surjective_comp(y, q):
    return y is not None and set(y) == set(range(q + 1))


def vert_equiv(shape, k, bound):
    """Stagewise replay of the vertical equivalence extension."""
    n = shape.n
    if not (1 <= k <= n and shape.q(k) == 0):
        raise ThetaError(f"vertical extension needs q_{k} = 0 in {shape}")
    params = {"shape": str(shape), "k": k, "bound": bound}
    if n == 1:
        phi = vertical_extension_ambient(shape, 1, bound)
        psi_nd = {}
        for sh in phi.shapes():
            hits = {c for c in phi.nd_cells(sh) if psi_contains(c, shape, 1)}
            if hits:
                psi_nd[sh] = hits
        psi = Subobject(phi, psi_nd)
        corner = theta_corner(phi, shape, 1)

        def corner_check(y):
            return psi.same_cells(corner), "domain is the representable corner"

        return ReplayScript(
            name="vert_equiv",
            params=params,
            ambient=phi,
            initial=corner,
            steps=[StepSpec(kind="check", label="interval base case", check_fn=corner_check)],
            target=None,
            certified_dim=bound - 1,
            forks=[Fork(name="psi", steps=[], target=psi, certified_dim=bound - 1)],
            notes=["base case: the whole inclusion is the elementary extension"],
        )
    if k == n:
        dual = vert_equiv(op_dual_shape(shape), 1, bound)
        dual.params = params | {"via_op_dual": True}
        dual.notes.append("replayed on the reversed shape via the 1-cell duality")
        return dual

    # cells up to bound-1 certify; the two extra levels exist only so that
    # their closures cover the certified region (deep parents)
    work = bound + 2
    phi = vertical_extension_ambient(shape, k, work)
    psi_nd = {}
    for sh in phi.shapes():
        hits = {c for c in phi.nd_cells(sh) if psi_contains(c, shape, k)}
        if hits:
            psi_nd[sh] = hits
    psi = Subobject(phi, psi_nd)
    corner = theta_corner(phi, shape, k)

    edge = BoxCellSet(1, standard_simplex(1), [J], work)

    def edge_map(cell):
        x, comps = cell.payload
        nx = tuple(v + k - 1 for v in x)
        return Cell(cell.shape, (nx, comps))

    edge_corner_nd = {}
    for sh in edge.shapes():
        hits = {c for c in edge.nd_cells(sh) if all(FILLED not in y for y in c[1])}
        if hits:
            edge_corner_nd[sh] = hits
    edge_corner = Subobject(edge, edge_corner_nd)

    steps = [
        StepSpec(
            kind="attach_map",
            label="glue the interval edge at hom k",
            source=edge,
            map_fn=edge_map,
            expected_w=edge_corner,
        )
    ]

    def x0_check(y):
        want = _predicate_subobject(
            phi,
            lambda c: theta_corner_contains(c, k) or set(c[0]) <= {k - 1, k},
        )
        return y.same_cells(want), "stage 0 equals corner plus edge image"

    steps.append(StepSpec(kind="check", label="stage 0 content", check_fn=x0_check))

    def stage1_pred(payload):
        x = payload[0]
        return x[0] < k - 1 and x[-1] == k and _has_filled(payload, k)

    def stage1_attach(payload):
        x = payload[0]
        return stage1_pred(payload) and len(x) >= 2 and x[-2] == k - 1

    stage1 = _collect(phi, stage1_attach)
    for cell in stage1:
        m = cell.shape.n
        steps.append(
            StepSpec(
                kind="attach",
                label=f"stage 1 glue {cell.payload}",
                cell=cell,
                expected_w=horn_h(cell.shape, m - 1).domain,
                horn=_horn_meta("horn-h", cell.shape, k=m - 1),
                tail=cell.shape.dim >= bound,
                verify=cell.shape.dim <= bound,
            )
        )
    steps.append(
        _stage_check(phi, "stage 1 content", lambda c: stage1_pred(c), bound, base_pred=lambda c: theta_corner_contains(c, k) or set(c[0]) <= {k - 1, k})
    )

    def stage2_pred(payload):
        x = payload[0]
        if not (x[0] <= k - 1 and x[-1] > k and _has_filled(payload, k)):
            return False
        id_vals = tuple(range(n + 1))
        delta_vals = tuple(v for v in range(n + 1) if v != k)
        return x != id_vals and x != delta_vals

    def stage2_attach(payload):
        x = payload[0]
        return stage2_pred(payload) and any(v == k for v in x[1:-1])

    stage2 = _collect(phi, stage2_attach)
    for cell in stage2:
        x = cell.payload[0]
        ell = next(i for i in range(1, len(x) - 1) if x[i] == k)
        steps.append(
            StepSpec(
                kind="attach",
                label=f"stage 2 glue {cell.payload}",
                cell=cell,
                expected_w=horn_h(cell.shape, ell).domain,
                horn=_horn_meta("horn-h", cell.shape, k=ell),
                tail=cell.shape.dim >= bound,
                verify=cell.shape.dim <= bound,
            )
        )
    prev_preds = [
        lambda c: theta_corner_contains(c, k) or set(c[0]) <= {k - 1, k},
        stage1_pred,
    ]
    steps.append(_stage_check(phi, "stage 2 content", stage2_pred, bound, base_preds=prev_preds))

    def stage3_pred(payload):
        x = payload[0]
        id_vals = tuple(range(n + 1))
        delta_vals = tuple(v for v in range(n + 1) if v != k)
        if x not in (id_vals, delta_vals) or not _has_filled(payload, k):
            return False
        for slot in range(x[0] + 1, x[-1] + 1):
            if slot == k:
                continue
            if not _surjective_comp(_slot_comp(payload, slot), shape.q(slot)):
                return True
        return False

    def stage3_attach(payload):
        return stage3_pred(payload) and payload[0] == tuple(range(n + 1))

    stage3 = _collect(phi, stage3_attach)
    for cell in stage3:
        steps.append(
            StepSpec(
                kind="attach",
                label=f"stage 3 glue {cell.payload}",
                cell=cell,
                expected_w=horn_h(cell.shape, k).domain,
                horn=_horn_meta("horn-h", cell.shape, k=k),
                tail=cell.shape.dim >= bound,
                verify=cell.shape.dim <= bound,
            )
        )
    prev_preds = prev_preds + [stage2_pred]
    steps.append(_stage_check(phi, "stage 3 content", stage3_pred, bound, base_preds=prev_preds))

    psi_fork_steps = []
    if shape.q(k + 1) >= 1:
        def stage4_data(payload):
            x = payload[0]
            delta_vals = tuple(v for v in range(n + 1) if v != k)
            if x != delta_vals:
                return None
            ak = _slot_comp(payload, k)
            ak1 = _slot_comp(payload, k + 1)
            if ak is None or FILLED not in ak:
                return None
            if not _surjective_comp(ak1, shape.q(k + 1)):
                return None
            for slot in range(x[0] + 1, x[-1] + 1):
                if slot in (k, k + 1):
                    continue
                if not _is_identity_comp(payload, slot, shape.q(slot)):
                    return None
            pairs = tuple(zip(ak, ak1))
            if any(pairs[i] == pairs[i + 1] for i in range(len(pairs) - 1)):
                return None
            i_a = ak1[max(j for j, v in enumerate(ak) if v == FILLED)]
            if i_a >= 1:
                j_a = min(j for j, v in enumerate(ak1) if v == i_a)
            else:
                j_a = max(j for j, v in enumerate(ak1) if v == 0)
            return i_a, j_a

        def stage4_attach(payload):
            data = stage4_data(payload)
            if data is None:
                return False
            _, j_a = data
            ak = _slot_comp(payload, k)
            return ak[j_a] == DIAMOND

        stage4 = _collect(
            phi,
            stage4_attach,
            key=lambda cell: (
                cell.shape.dim,
                sum(1 for v in _slot_comp(cell.payload, k) if v == FILLED),
                cell.payload,
            ),
        )
        for cell in stage4:
            _, j_a = stage4_data(cell.payload)
            psi_fork_steps.append(
                StepSpec(
                    kind="attach",
                    label=f"stage 4 glue {cell.payload}",
                    cell=cell,
                    expected_w=horn_v(cell.shape, k, j_a).domain,
                    horn=_horn_meta("horn-v", cell.shape, k=k, i=j_a),
                    tail=cell.shape.dim >= bound,
                    verify=cell.shape.dim <= bound,
                )
            )
    else:
        sub_shape = ThetaShape(shape.qs[:k] + shape.qs[k + 1 :])
        sub_phi = vertical_extension_ambient(sub_shape, k, work)
        sub_psi_nd = {}
        for sh in sub_phi.shapes():
            hits = {c for c in sub_phi.nd_cells(sh) if psi_contains(c, sub_shape, k)}
            if hits:
                sub_psi_nd[sh] = hits
        sub_psi = Subobject(sub_phi, sub_psi_nd)

        def face_map(cell):
            x, comps = cell.payload
            nx = tuple(v if v < k else v + 1 for v in x)
            ncomps = []
            for j in range(nx[0] + 1, nx[-1] + 1):
                i = next(
                    i for i in range(1, len(nx)) if nx[i - 1] < j <= nx[i]
                )
                if j == k + 1:
                    ncomps.append((0,) * (cell.shape.q(i) + 1))
                elif j <= k:
                    ncomps.append(comps[j - x[0] - 1])
                else:
                    ncomps.append(comps[j - 1 - x[0] - 1])
            return Cell(cell.shape, (nx, tuple(ncomps)))

        psi_fork_steps.append(
            StepSpec(
                kind="attach_map",
                label="glue the lower extension along its own domain",
                source=sub_phi,
                map_fn=face_map,
                expected_w=sub_psi,
                compare_dim=bound,
            )
        )

    return ReplayScript(
        name="vert_equiv",
        params=params,
        ambient=phi,
        initial=corner,
        steps=steps,
        target=None,
        certified_dim=bound - 1,
        forks=[
            Fork(name="psi", steps=psi_fork_steps, target=psi, certified_dim=bound - 1)
        ],
        notes=[
            "the ambient side of the extension is meta-level (right cancellation)"
        ],
    )


def _collect(ambient, pred, key=None):
    cells = []
    for sh in ambient.shapes():
        for c in ambient.nd_cells(sh):
            if pred(c):
                cells.append(Cell(sh, c))
    cells.sort(key=key or (lambda cell: (cell.shape.dim, cell.shape, cell.payload)))
    return cells


def _predicate_subobject(ambient, pred):
    nd = {}
    for sh in ambient.shapes():
        hits = {c for c in ambient.nd_cells(sh) if pred(c)}
        if hits:
            nd[sh] = hits
    return Subobject(ambient, nd)


def _stage_check(ambient, label, pred, bound, base_pred=None, base_preds=None):
    """Soundness check for a stage: nothing outside the stage was attached.

    Full stage content is only reachable through parents of unbounded
    dimension, so coverage is reported as the largest certified level
    rather than asserted at the truncation bound.
    """
    preds = list(base_preds or ([] if base_pred is None else [base_pred]))
    preds.append(pred)

    def check(y):
        gens = []
        for sh in ambient.shapes():
            for c in ambient.nd_cells(sh):
                if any(p(c) for p in preds):
                    gens.append(Cell(sh, c))
        want = Subobject.generated(ambient, gens)
        sound = all(
            set(y.nd_at(sh)) <= set(want.nd_at(sh)) for sh in ambient.shapes()
        )
        covered = -1
        for d in range(bound):
            if y.equals_up_to(want, d):
                covered = d
            else:
                break
        return sound, f"stage coverage certified through dim {covered}"

    return StepSpec(kind="check", label=label, check_fn=check)


# -- horizontal equivalence extensions ------------------------------------------


def horiz_equiv(shape, bound):
    """Stagewise replay of the interval-times-boundary extension."""
    if shape.n == 0:
        raise ThetaError("the terminal shape has its own one-line argument")
    inc = equiv_horiz(shape, bound)
    amb = inc.codomain
    n = shape.n

    def has_top_filled(payload):
        u, f = payload
        return any(
            u[v] == FILLED and f.horizontal.values[v] == n for v in range(len(u))
        )

    def in_x(payload):
        u, f = payload
        if all(v == DIAMOND for v in u):
            return True
        return boundary(shape).domain.contains(Cell(f.src, f))

    def k_phi_one(payload):
        u, _ = payload
        return 1 + max(v for v in range(len(u)) if u[v] == FILLED)

    def stage1_pred(payload):
        return not in_x(payload) and not has_top_filled(payload)

    def stage1_attach(payload):
        if not stage1_pred(payload):
            return False
        u, f = payload
        kp = k_phi_one(payload)
        vals = f.horizontal.values
        return vals[kp] == vals[kp - 1]

    steps = []
    stage1 = _collect(
        amb,
        stage1_attach,
        key=lambda cell: (
            cell.shape.dim,
            sum(1 for v in cell.payload[0] if v == FILLED),
            cell.payload,
        ),
    )
    for cell in stage1:
        kp = k_phi_one(cell.payload)
        steps.append(
            StepSpec(
                kind="attach",
                label=f"stage 1 glue {cell.payload}",
                cell=cell,
                expected_w=horn_h(cell.shape, kp).domain,
                horn=_horn_meta("horn-h", cell.shape, k=kp),
                tail=cell.shape.dim >= bound,
            )
        )
    steps.append(_stage_check(amb, "stage 1 content", stage1_pred, bound, base_pred=in_x))

    def k_phi_two(payload):
        _, f = payload
        vals = f.horizontal.values
        return min(v for v in range(len(vals)) if vals[v] == n)

    def stage2_attach(payload):
        if in_x(payload) or not has_top_filled(payload):
            return False
        u, _ = payload
        return u[k_phi_two(payload)] == DIAMOND

    stage2 = _collect(amb, stage2_attach)
    for cell in stage2:
        kp = k_phi_two(cell.payload)
        steps.append(
            StepSpec(
                kind="attach",
                label=f"stage 2 glue {cell.payload}",
                cell=cell,
                expected_w=horn_h(cell.shape, kp).domain,
                horn=_horn_meta("horn-h", cell.shape, k=kp),
                tail=cell.shape.dim >= bound,
            )
        )
    return ReplayScript(
        name="horiz_equiv",
        params={"shape": str(shape), "bound": bound},
        ambient=amb,
        initial=inc.domain,
        steps=steps,
        target=Subobject.full(amb),
        certified_dim=bound - 1,
    )
