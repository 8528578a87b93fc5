"""Gluing-square verification.

A gluing step attaches either a single representable cell or a whole
cellular-set map onto a running subobject.  The square is certified by
three checks: the brute-force pullback of the running subobject equals
the expected attachment locus, the attachment map is injective outside
that locus, and the union afterwards is exactly the old part plus the
image.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from ..cellset import Cell, Subobject, representable
from ..theta import faces_between, shapes_upto


@dataclass
class GluingStep:
    ambient: object
    before: Subobject
    expected_w: Subobject
    cell: Optional[Cell] = None
    source: object = None
    map_fn: Optional[Callable] = None
    horn: Optional[dict] = None
    label: str = ""
    # restrict the pullback comparison to shapes of dimension <= this;
    # margin levels above a truncation bound are not certified material
    compare_dim: Optional[int] = None

    def __post_init__(self):
        if (self.cell is None) == (self.source is None):
            raise ValueError("a gluing step attaches either a cell or a map")


def _source_pullback(step):
    """The attachment locus computed by brute force."""
    if step.cell is not None:
        return step.before.pullback_along(step.cell)
    nd = {}
    for shape in step.source.shapes():
        hits = {
            c
            for c in step.source.nd_cells(shape)
            if step.before.contains(step.map_fn(Cell(shape, c)))
        }
        if hits:
            nd[shape] = hits
    return Subobject(step.source, nd)


def _outside_images(step):
    """Images of the nondegenerate source cells outside the expected locus."""
    out = []
    if step.cell is not None:
        amb = representable(step.cell.shape)
        for src in shapes_upto(step.cell.shape.dim):
            for f in faces_between(src, step.cell.shape):
                if not step.expected_w.contains(Cell(src, f)):
                    out.append((Cell(src, f), step.ambient.act(step.cell, f)))
    else:
        for shape in step.source.shapes():
            for c in step.source.nd_cells(shape):
                cell = Cell(shape, c)
                if not step.expected_w.contains(cell):
                    out.append((cell, step.map_fn(cell)))
    return out


def image_subobject(step):
    if step.cell is not None:
        return Subobject.generated(step.ambient, [step.cell])
    cells = []
    for shape in step.source.shapes():
        for c in step.source.nd_cells(shape):
            cells.append(step.map_fn(Cell(shape, c)))
    return Subobject.generated(step.ambient, cells)


def verify_gluing_square(step):
    """Run the three checks; returns a report dict with an ``ok`` verdict."""
    report = {
        "label": step.label,
        "horn": step.horn,
        "checks": {},
    }
    if step.cell is not None:
        report["cell"] = str(step.cell.payload)
        report["shape"] = str(step.cell.shape)
        trivial = step.before.contains(step.cell)
    else:
        report["cell"] = "(map)"
        report["shape"] = None
        trivial = False
    report["trivial"] = trivial

    w = _source_pullback(step)
    if step.compare_dim is None:
        report["checks"]["pullback"] = w.same_cells(step.expected_w)
    else:
        report["checks"]["pullback"] = w.equals_up_to(
            step.expected_w, step.compare_dim
        )
        report["compare_dim"] = step.compare_dim

    outside = _outside_images(step)
    injective = True
    seen = {}
    for src_cell, img in outside:
        if not step.ambient.is_nondegenerate(img):
            injective = False
            report.setdefault("violations", []).append(
                f"degenerate image of {src_cell.payload}"
            )
            break
        key = (img.shape, img.payload)
        if key in seen:
            injective = False
            report.setdefault("violations", []).append(
                f"collision {src_cell.payload} vs {seen[key]}"
            )
            break
        if step.before.contains(img):
            injective = False
            report.setdefault("violations", []).append(
                f"image of outside cell {src_cell.payload} already present"
            )
            break
        seen[key] = src_cell.payload
    report["checks"]["injective"] = injective

    image = image_subobject(step)
    after = step.before.union(image)
    merged = {s: set(step.before.nd_at(s)) | set(image.nd_at(s)) for s in after.nd}
    cover = all(set(after.nd_at(s)) == merged[s] for s in after.nd)
    report["checks"]["cover"] = cover
    report["new_nd"] = after.nd_count() - step.before.nd_count()

    report["ok"] = all(report["checks"].values())
    return report, after
