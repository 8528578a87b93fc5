"""Box products over a base simplex, the Leibniz construction, and the
named inclusion families: boundaries, horns, spines, and the equivalence
extensions built from the chaotic-nerve interval.

A box cell at [m;p] is a pair (x, comps): x is an m-simplex of the base
(a value tuple over [n]) and comps has one p_i-simplex of the fiber S_j
for every covered index x(0) < j <= x(m), where i is the interval index
of j.  Operators act by reindexing the base and restricting components.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .cellset import (
    Cell,
    ProductCellSet,
    Subobject,
    TruncatedCellularSet,
    from_simplicial,
    representable,
)
from .delta import SimplicialOperator
from .sset import (
    DIAMOND,
    FILLED,
    J,
    boundary_sset,
    horn_sset,
    standard_simplex,
)
from .theta import (
    HyperfaceLabel,
    ThetaError,
    hyperface_operator,
    hyperfaces,
    vertebrae,
)


def _interval_of(x, j):
    # unique i with x[i-1] < j <= x[i]
    for i in range(1, len(x)):
        if x[i - 1] < j <= x[i]:
            return i
    raise ThetaError(f"index {j} not covered by base simplex {x}")


class BoxCellSet(TruncatedCellularSet):
    """Realization of a base over Delta[n] with n fiber simplicial sets."""

    def __init__(self, n, base, fibers, bound):
        if len(fibers) != n:
            raise ThetaError(f"expected {n} fibers, got {len(fibers)}")
        super().__init__(bound)
        self.n = n
        self.base = base
        self.fibers = tuple(fibers)

    def fiber(self, j):
        return self.fibers[j - 1]

    def _compute_cells(self, shape):
        import itertools

        out = []
        for x in self.base.level(shape.n):
            covered = range(x[0] + 1, x[-1] + 1)
            pools = [self.fiber(j).level(shape.q(_interval_of(x, j))) for j in covered]
            for comps in itertools.product(*pools):
                out.append((x, comps))
        return out

    def _act(self, cell, op):
        x, comps = cell.payload
        beta = op.horizontal
        nx = tuple(x[v] for v in beta.values)
        ncomps = []
        for j in range(nx[0] + 1, nx[-1] + 1):
            l = _interval_of(x, j)
            y = comps[j - x[0] - 1]
            ncomps.append(self.fiber(j).act(y, op.component_at(l)))
        return Cell(op.src, (nx, tuple(ncomps)))

    def __repr__(self):
        fibs = ",".join(f.name for f in self.fibers)
        return f"BoxCellSet(n={self.n}, base={self.base.name}, fibers=[{fibs}], bound={self.bound})"


def box_n(n, base, fibers, bound):
    """The box of a simplicial set over Delta[n] with the given fibers."""
    return BoxCellSet(n, base, fibers, bound)


def box_representable(shape, bound=None):
    """box(id; Delta[q1],...,Delta[qn]), isomorphic to the representable."""
    if bound is None:
        bound = shape.dim
    return BoxCellSet(
        shape.n,
        standard_simplex(shape.n),
        [standard_simplex(q) for q in shape.qs],
        bound,
    )


def box_cell_to_operator(box, cell, shape_codomain):
    """Transport a cell of box(id; Delta[q*]) to an operator into [n;q]."""
    x, comps = cell.payload
    alpha = SimplicialOperator(x, shape_codomain.n)
    from .theta import CellularOperator

    comp_ops = tuple(
        SimplicialOperator(comps[j - x[0] - 1], shape_codomain.q(j))
        for j in range(x[0] + 1, x[-1] + 1)
    )
    return CellularOperator(cell.shape, shape_codomain, alpha, comp_ops)


def operator_to_box_cell(f):
    """Inverse transport: an operator into [n;q] as a box cell payload."""
    x = f.horizontal.values
    comps = tuple(c.values for c in f.components)
    return Cell(f.src, (x, comps))


# -- Leibniz construction ---------------------------------------------------


@dataclass(frozen=True)
class Inclusion:
    """A cellular subset inclusion with bookkeeping for reports."""

    domain: Subobject
    name: str = "inclusion"
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def codomain(self):
        return self.domain.ambient

    def is_identity(self):
        return self.domain.is_full()


def leibniz_box(n, base_pair, fiber_pairs, bound):
    """Leibniz box of monomorphisms: (A c W over Delta[n]; B_j c S_j).

    The codomain is the box of the big arguments; the domain is the union
    of the non-terminal corner boxes, i.e. the cells that restrict into at
    least one small argument.
    """
    sub_base, big_base = base_pair
    codomain = BoxCellSet(n, big_base, [big for _, big in fiber_pairs], bound)

    def in_domain(payload):
        # union of the non-terminal corners: the cell must restrict into at
        # least one small argument; an uncovered fiber slot restricts vacuously
        x, comps = payload
        if sub_base.contains(x):
            return True
        for j in range(1, n + 1):
            small = fiber_pairs[j - 1][0]
            if small is None:
                continue
            if x[0] < j <= x[-1]:
                if small.contains(comps[j - x[0] - 1]):
                    return True
            else:
                return True
        return False

    nd = {}
    for shape in codomain.shapes():
        hits = {c for c in codomain.nd_cells(shape) if in_domain(c)}
        if hits:
            nd[shape] = hits
    return Inclusion(Subobject(codomain, nd), name="leibniz-box", meta={"bound": bound})


def boundary_leibniz(shape, bound=None):
    if bound is None:
        bound = shape.dim
    pairs = [(boundary_sset(q), standard_simplex(q)) for q in shape.qs]
    inc = leibniz_box(
        shape.n, (boundary_sset(shape.n), standard_simplex(shape.n)), pairs, bound
    )
    return Inclusion(inc.domain, name=f"leibniz-boundary{shape}", meta=inc.meta)


def horn_h_leibniz(shape, k, bound=None):
    if not 0 <= k <= shape.n:
        raise ThetaError(f"horizontal horn index {k} out of range for {shape}")
    if bound is None:
        bound = shape.dim
    pairs = [(boundary_sset(q), standard_simplex(q)) for q in shape.qs]
    inc = leibniz_box(
        shape.n, (horn_sset(shape.n, k), standard_simplex(shape.n)), pairs, bound
    )
    return Inclusion(inc.domain, name=f"leibniz-horn-h^{k}{shape}", meta=inc.meta)


def horn_v_leibniz(shape, k, i, bound=None):
    if not (1 <= k <= shape.n and shape.q(k) >= 1 and 0 <= i <= shape.q(k)):
        raise ThetaError(f"vertical horn ({k};{i}) out of range for {shape}")
    if bound is None:
        bound = shape.dim
    pairs = []
    for j, q in enumerate(shape.qs, start=1):
        if j == k:
            pairs.append((horn_sset(q, i), standard_simplex(q)))
        else:
            pairs.append((boundary_sset(q), standard_simplex(q)))
    inc = leibniz_box(
        shape.n, (boundary_sset(shape.n), standard_simplex(shape.n)), pairs, bound
    )
    return Inclusion(inc.domain, name=f"leibniz-horn-v^{{{k};{i}}}{shape}", meta=inc.meta)


# -- named subobjects of representables --------------------------------------


def _closure_of_labels(shape, labels):
    amb = representable(shape)
    cells = []
    for lbl in labels:
        op = hyperface_operator(shape, lbl)
        cells.append(Cell(op.src, op))
    return Subobject.generated(amb, cells)


def _closure_of_faces(shape, ops):
    amb = representable(shape)
    return Subobject.generated(amb, [Cell(op.src, op) for op in ops])


@lru_cache(maxsize=None)
def boundary(shape):
    """All hyperfaces; equivalently everything of lower dimension."""
    return Inclusion(
        _closure_of_faces(shape, [op for _, op in hyperfaces(shape)]),
        name=f"boundary{shape}",
    )


@lru_cache(maxsize=None)
def horn_h(shape, k):
    """All hyperfaces except the k-th horizontal ones; inner iff 1<=k<=n-1."""
    if not 0 <= k <= shape.n:
        raise ThetaError(f"horizontal horn index {k} out of range for {shape}")
    keep = [
        op
        for lbl, op in hyperfaces(shape)
        if not (
            (lbl.variant == HyperfaceLabel.HK and lbl.k == k)
            or (lbl.variant == HyperfaceLabel.H0 and k == 0)
            or (lbl.variant == HyperfaceLabel.HN and k == shape.n)
        )
    ]
    return Inclusion(
        _closure_of_faces(shape, keep),
        name=f"horn-h^{k}{shape}",
        meta={"inner": 1 <= k <= shape.n - 1, "k": k},
    )


@lru_cache(maxsize=None)
def horn_v(shape, k, i):
    """All hyperfaces except the (k;i)-th vertical one."""
    if not (1 <= k <= shape.n and shape.q(k) >= 1 and 0 <= i <= shape.q(k)):
        raise ThetaError(f"vertical horn ({k};{i}) out of range for {shape}")
    skip = HyperfaceLabel(HyperfaceLabel.V, k=k, i=i)
    keep = [op for lbl, op in hyperfaces(shape) if lbl != skip]
    return Inclusion(
        _closure_of_faces(shape, keep),
        name=f"horn-v^{{{k};{i}}}{shape}",
        meta={"inner": 1 <= i <= shape.q(k) - 1, "k": k, "i": i},
    )


@lru_cache(maxsize=None)
def horn_h_alt(shape, k, shf):
    """All hyperfaces except the single k-th horizontal one at the shuffle."""
    skip = HyperfaceLabel(HyperfaceLabel.HK, k=k, shuffle=shf)
    if skip not in {lbl for lbl, _ in hyperfaces(shape)}:
        raise ThetaError(f"{skip} is not a hyperface of {shape}")
    keep = [op for lbl, op in hyperfaces(shape) if lbl != skip]
    return Inclusion(
        _closure_of_faces(shape, keep),
        name=f"horn-h-alt^{{{k};{shf}}}{shape}",
        meta={"k": k, "shuffle": str(shf)},
    )


@lru_cache(maxsize=None)
def spine_subobject(shape):
    return _closure_of_faces(shape, vertebrae(shape))


def spine(shape):
    return Inclusion(spine_subobject(shape), name=f"spine{shape}")


def sigma_subobject(shape, labels):
    """Spine together with a set of hyperfaces (given by labels)."""
    sub = spine_subobject(shape)
    if labels:
        sub = sub.union(_closure_of_labels(shape, labels))
    return sub


def spine_s(shape, labels):
    return Inclusion(
        sigma_subobject(shape, frozenset(labels)),
        name=f"spine^S{shape}",
        meta={"labels": sorted(str(l) for l in labels)},
    )


def upsilon_subobject(shape, labels):
    """All outer hyperfaces together with the labelled faces."""
    outer = [op for lbl, op in hyperfaces(shape) if not lbl.is_inner(shape)]
    extra = [hyperface_operator(shape, lbl) for lbl in labels]
    return _closure_of_faces(shape, outer + extra)


def upsilon_s(shape, labels):
    return Inclusion(
        upsilon_subobject(shape, frozenset(labels)),
        name=f"upsilon^S{shape}",
        meta={"labels": sorted(str(l) for l in labels)},
    )


def lambda_subobject(shape, labels):
    """All hyperfaces except those in the labelled set."""
    labels = set(labels)
    keep = [op for lbl, op in hyperfaces(shape) if lbl not in labels]
    return _closure_of_faces(shape, keep)


def lambda_s(shape, labels):
    return Inclusion(
        lambda_subobject(shape, frozenset(labels)),
        name=f"lambda^S{shape}",
        meta={"labels": sorted(str(l) for l in labels)},
    )


# -- equivalence extensions ---------------------------------------------------


def vertical_extension_ambient(shape, k, bound):
    """The box with the interval in hom slot k (which must have q_k = 0)."""
    if not (1 <= k <= shape.n and shape.q(k) == 0):
        raise ThetaError(f"vertical extension needs q_{k} = 0 in {shape}")
    fibers = [J if j == k else standard_simplex(q) for j, q in enumerate(shape.qs, 1)]
    return BoxCellSet(shape.n, standard_simplex(shape.n), fibers, bound)


def _slot_components(payload, slot):
    x, comps = payload
    if x[0] < slot <= x[-1]:
        return (comps[slot - x[0] - 1],)
    return ()


def psi_contains(payload, shape, k):
    """Leibniz-domain membership for the vertical equivalence extension.

    A cell lies outside exactly when the base and all non-k components are
    surjective and some k-component contains the filled vertex.
    """
    x, comps = payload
    if set(x) != set(range(shape.n + 1)):
        return True
    for j in range(x[0] + 1, x[-1] + 1):
        y = comps[j - x[0] - 1]
        if j == k:
            continue
        if set(y) != set(range(shape.q(j) + 1)):
            return True
    return all(FILLED not in y for y in _slot_components(payload, k))


def theta_corner_contains(payload, k):
    """Membership in the representable corner (no filled vertex in slot k)."""
    return all(FILLED not in y for y in _slot_components(payload, k))


def equiv_vert(shape, k, bound):
    """The vertical equivalence extension (Psi^k, Phi^k, inclusion)."""
    phi = vertical_extension_ambient(shape, k, bound)
    nd = {}
    for sh in phi.shapes():
        hits = {c for c in phi.nd_cells(sh) if psi_contains(c, shape, k)}
        if hits:
            nd[sh] = hits
    psi = Subobject(phi, nd)
    return psi, phi, Inclusion(
        psi, name=f"equiv-v^{k}{shape}", meta={"bound": bound, "k": k}
    )


def theta_corner(phi, shape, k):
    """The representable sitting inside Phi^k at the diamond corner."""
    nd = {}
    for sh in phi.shapes():
        hits = {c for c in phi.nd_cells(sh) if theta_corner_contains(c, k)}
        if hits:
            nd[sh] = hits
    return Subobject(phi, nd)


def equiv_horiz(shape, bound):
    """Leibniz product of the interval endpoint with the boundary inclusion.

    Codomain J x cell[n;q]; domain (diamond x cell[n;q]) u (J x boundary).
    """
    amb = ProductCellSet(
        from_simplicial(J, bound), representable(shape, bound), bound
    )
    bd = boundary(shape).domain

    def in_domain(payload):
        u, f = payload
        if all(v == DIAMOND for v in u):
            return True
        return bd.contains(Cell(f.src, f))

    nd = {}
    for sh in amb.shapes():
        hits = {c for c in amb.nd_cells(sh) if in_domain(c)}
        if hits:
            nd[sh] = hits
    return Inclusion(
        Subobject(amb, nd), name=f"equiv-h{shape}", meta={"bound": bound}
    )
