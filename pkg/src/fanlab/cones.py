"""Rational polyhedral cones in ``Z^r``.

A :class:`Cone` is built from integer generators. Facets are found by the
double description method run on the polar cone inside the linear span of
the generators. Everything is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

from .linalg import (
    adjugate_int,
    echelon_int,
    kernel_basis_q,
    null_vector_int,
    primitive_integer,
    rank_q,
    smith_normal_form,
    transpose,
)


class ConeError(ValueError):
    pass


def primitivize(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries."""
    g = 0
    for x in v:
        if isinstance(x, bool) or int(x) != x:
            raise ConeError(f"non-integer coordinate {x!r}")
        g = gcd(g, int(x))
    if g == 0:
        raise ConeError("zero ray")
    return tuple(int(x) // g for x in v)


def is_primitive(v: Sequence[int]) -> bool:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g == 1


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def _independent_subset(vectors: Sequence[Sequence[int]], d: int) -> list[int]:
    """Indices of the greedy maximal independent subset, in order."""
    chosen: list[int] = []
    echelon: list[tuple[int, list[int]]] = []
    for i, v in enumerate(vectors):
        w = list(v)
        for c, row in echelon:
            if w[c]:
                a, b = row[c], w[c]
                w = [a * x - b * y for x, y in zip(w, row)]
        c = next((j for j, x in enumerate(w) if x), None)
        if c is None:
            continue
        chosen.append(i)
        echelon.append((c, w))
        if len(chosen) == d:
            break
    return chosen


def _polar_rays(gens: Sequence[Sequence[Fraction]], d: int) -> list[tuple[int, ...]]:
    """Extreme rays of ``{x in Q^d : g.x >= 0 for all g}``.

    ``gens`` must span ``Q^d`` so the polar is pointed. These rays are the
    facet normals of ``cone(gens)``. Incremental double description with the
    combinatorial adjacency test.
    """
    basis_idx = _independent_subset(gens, d)
    if len(basis_idx) < d:
        raise ConeError("generators do not span the ambient space")

    # scaled columns of the inverse of the basis matrix: g_j . ray_k = 0 for j != k
    rays: list[tuple[int, ...]] = []
    zeros: list[frozenset[int]] = []
    for k in range(d):
        others = [gens[basis_idx[j]] for j in range(d) if j != k]
        v = null_vector_int(others, d) if d > 1 else (1,)
        if _dot(gens[basis_idx[k]], v) < 0:
            v = tuple(-x for x in v)
        rays.append(v)
        zeros.append(frozenset(basis_idx[j] for j in range(d) if j != k))

    for gi, g in enumerate(gens):
        if gi in basis_idx:
            continue
        vals = [_dot(g, r) for r in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        zer = [k for k, v in enumerate(vals) if v == 0]
        new_rays = [rays[k] for k in pos]
        new_zeros = [zeros[k] for k in pos]
        for k in zer:
            new_rays.append(rays[k])
            new_zeros.append(zeros[k] | {gi})
        for p in pos:
            for n in neg:
                common = zeros[p] & zeros[n]
                if len(common) < d - 2:
                    continue
                if any(common <= zeros[q] for q in range(len(rays)) if q != p and q != n):
                    continue
                vp, vn = vals[p], vals[n]
                comb = [vp * x - vn * y for x, y in zip(rays[n], rays[p])]
                new_rays.append(primitive_integer(comb))
                new_zeros.append(common | {gi})
        rays, zeros = new_rays, new_zeros
    return sorted(set(rays))


@dataclass(frozen=True)
class DualDescription:
    """Halfspace description ``{x : h.x >= 0, e.x = 0}`` of a cone.

    ``inequalities`` are the facet normals, each taken inside the linear span
    of the cone (so they are unique up to scale) and scaled to primitive
    integer covectors. ``equations`` is a primitive integer basis of the
    orthogonal complement of the span.
    """

    inequalities: tuple[tuple[int, ...], ...]
    equations: tuple[tuple[int, ...], ...]
    strongly_convex: bool

    @property
    def normals(self) -> tuple[tuple[int, ...], ...]:
        """Every covector of the description as an inequality (equations in both signs)."""
        eqs = []
        for e in self.equations:
            eqs.append(e)
            eqs.append(tuple(-x for x in e))
        return tuple(sorted(set(self.inequalities) | set(eqs)))


class _SpanChart:
    """Coordinates on the linear span of a set of integer vectors."""

    def __init__(self, vectors: Sequence[Sequence[int]], ambient_rank: int):
        self.ambient_rank = ambient_rank
        self.basis, self.pivots = echelon_int(vectors, ambient_rank) if vectors else ([], [])
        self.dim = len(self.pivots)
        self._adj = None

    def local(self, v: Sequence[int]) -> tuple[int, ...]:
        # projection to pivot coordinates is injective on the span
        return tuple(v[p] for p in self.pivots)

    def equations(self) -> tuple[tuple[int, ...], ...]:
        r = self.ambient_rank
        if self.dim == 0:
            return tuple(tuple(int(i == j) for j in range(r)) for i in range(r))
        if self.dim == r:
            return ()
        if self.dim == r - 1:
            v = null_vector_int(self.basis, r)
            # same sign convention as the reduced echelon kernel basis
            if next(x for x in v if x) < 0:
                v = tuple(-x for x in v)
            return (v,)
        return tuple(sorted(primitive_integer(v) for v in kernel_basis_q(self.basis, r)))

    def lift_covector(self, h: Sequence[int]) -> tuple[int, ...]:
        """Ambient covector agreeing with ``h`` on the span and lying in the span."""
        if self.dim == self.ambient_rank:
            return primitive_integer(h)
        b = self.basis
        if self._adj is None:
            self._adj = adjugate_int([[_dot(u, v) for v in b] for u in b])
        # values of h on the basis, then the Gram solve up to the positive factor det
        c = [sum(x * u[p] for x, p in zip(h, self.pivots)) for u in b]
        y = [_dot(row, c) for row in self._adj]
        proj = [sum(y[k] * b[k][j] for k in range(len(b))) for j in range(self.ambient_rank)]
        return primitive_integer(proj)


def dual_description(generators: Sequence[Sequence[int]], ambient_rank: int | None = None) -> DualDescription:
    """Facet normals and defining equations of ``cone(generators)``."""
    gens = [tuple(int(x) for x in g) for g in generators]
    if ambient_rank is None:
        if not gens:
            raise ConeError("ambient rank needed for an empty generator list")
        ambient_rank = len(gens[0])
    chart = _SpanChart(gens, ambient_rank)
    eqs = chart.equations()
    if chart.dim == 0:
        return DualDescription((), eqs, True)
    local = [chart.local(g) for g in gens if any(g)]
    normals_local = _polar_rays(local, chart.dim)
    strongly_convex = rank_q(normals_local, chart.dim) == chart.dim
    ineqs = tuple(sorted(chart.lift_covector(h) for h in normals_local))
    return DualDescription(ineqs, eqs, strongly_convex)


class Cone:
    """A rational polyhedral cone given by integer generators.

    ``generators`` keeps only the extreme rays (primitive, in input order);
    :attr:`input_rays` and :attr:`extreme_input` remember what was passed in.
    The zero cone has no generators and dimension 0.
    """

    def __init__(self, generators: Iterable[Sequence[int]], ambient_rank: int | None = None):
        rays = [primitivize(g) for g in generators]
        if ambient_rank is None:
            if not rays:
                raise ConeError("ambient rank needed for the zero cone")
            ambient_rank = len(rays[0])
        if any(len(g) != ambient_rank for g in rays):
            raise ConeError("generator length does not match ambient rank")
        self.ambient_rank = ambient_rank
        self.input_rays = tuple(rays)
        dd = dual_description(rays, ambient_rank)
        self.facet_normals = dd.inequalities
        self.equations = dd.equations
        self.strongly_convex = dd.strongly_convex
        self.dim = rank_q(rays, ambient_rank) if rays else 0

        extreme = []
        seen = set()
        for i, g in enumerate(rays):
            if g in seen:
                continue
            if self.strongly_convex:
                tight = [h for h in self.facet_normals if _dot(h, g) == 0]
                if (rank_q(tight, ambient_rank) if tight else 0) != self.dim - 1:
                    continue
            seen.add(g)
            extreme.append(i)
        self.extreme_input = tuple(extreme)
        self.generators = tuple(rays[i] for i in extreme)

    def __repr__(self):
        return f"Cone({list(self.generators)!r}, ambient_rank={self.ambient_rank})"

    def __eq__(self, other):
        if not isinstance(other, Cone):
            return NotImplemented
        return self.ambient_rank == other.ambient_rank and set(self.generators) == set(other.generators)

    def __hash__(self):
        return hash((self.ambient_rank, frozenset(self.generators)))

    @property
    def nrays(self) -> int:
        return len(self.generators)

    def contains(self, v: Sequence) -> bool:
        return all(_dot(e, v) == 0 for e in self.equations) and all(_dot(h, v) >= 0 for h in self.facet_normals)

    def relative_interior_contains(self, v: Sequence) -> bool:
        return all(_dot(e, v) == 0 for e in self.equations) and all(_dot(h, v) > 0 for h in self.facet_normals)

    @cached_property
    def face_list(self) -> tuple[tuple[int, tuple[int, ...]], ...]:
        return tuple(faces(self))


def faces(c: Cone) -> list[tuple[int, tuple[int, ...]]]:
    """All faces of ``c`` as ``(dim, indices into c.generators)``.

    Faces are the intersections of facets, plus ``c`` itself; the zero face
    is the empty index tuple. Sorted by dimension, then index tuple.
    """
    if not c.strongly_convex:
        raise ConeError("face enumeration needs a strongly convex cone")
    everything = frozenset(range(c.nrays))
    family = {everything}
    frontier = [frozenset(i for i, g in enumerate(c.generators) if _dot(h, g) == 0) for h in c.facet_normals]
    family.update(frontier)
    while frontier:
        nxt = []
        for a in frontier:
            for b in list(family):
                x = a & b
                if x not in family:
                    family.add(x)
                    nxt.append(x)
        frontier = nxt
    out = []
    for s in family:
        idx = tuple(sorted(s))
        dim = rank_q([c.generators[i] for i in idx], c.ambient_rank) if idx else 0
        out.append((dim, idx))
    out.sort()
    return out


def intersect(a: Cone, b: Cone) -> Cone:
    """The cone ``a ∩ b``, with extreme rays recomputed."""
    if a.ambient_rank != b.ambient_rank:
        raise ConeError("ambient ranks differ")
    r = a.ambient_rank
    eqs = list(a.equations) + list(b.equations)
    ineqs = list(a.facet_normals) + list(b.facet_normals)
    if eqs:
        kernel = [primitive_integer(v) for v in kernel_basis_q(eqs, r)]
    else:
        kernel = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    if not kernel:
        return Cone([], r)
    k = len(kernel)
    kmat = transpose(kernel, r)  # r x k
    # constraints on t where x = K t
    rows = [tuple(sum(h[i] * kmat[i][j] for i in range(r)) for j in range(k)) for h in ineqs]
    rows = [row for row in rows if any(row)]
    if rank_q(rows, k) < k if rows else True:
        raise ConeError("intersection is not strongly convex")
    rays_t = _polar_rays(rows, k)
    rays = [primitive_integer([sum(kmat[i][j] * t[j] for j in range(k)) for i in range(r)]) for t in rays_t]
    return Cone(sorted(rays), r)


@dataclass(frozen=True)
class ConeClass:
    dim: int
    strongly_convex: bool
    simplicial: bool
    smooth: bool


def classify(c: Cone) -> ConeClass:
    """Dimension, strong convexity, simpliciality and smoothness of ``c``."""
    simplicial = c.strongly_convex and c.nrays == c.dim
    smooth = False
    if simplicial:
        if c.nrays == 0:
            smooth = True
        else:
            diag = smith_normal_form(transpose(c.generators)).diag
            smooth = all(d == 1 for d in diag)
    return ConeClass(c.dim, c.strongly_convex, simplicial, smooth)
