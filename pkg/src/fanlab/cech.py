"""Cech cohomology of the support-function sheaf and the derived invariants.

The cover is the set of maximal cones in input order. On a cone ``tau`` the
rational support functions are the linear forms on the span of ``tau``; a
form is stored by its values on the reduced-echelon basis of that span.
Restriction to a face is then a change of basis, read off at pivot columns.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .fan import Fan, fan_stats
from .linalg import (
    AbelianGroup,
    cokernel_structure,
    integer_kernel_basis,
    kernel_basis_q,
    primitive_integer,
    rank_q,
    rref,
    solve_q,
    transpose,
)


@dataclass(frozen=True)
class NerveCell:
    cones: tuple[int, ...]  # increasing maximal-cone indices
    rays: tuple[int, ...]  # rays of the intersection cone
    dim: int


@dataclass(frozen=True)
class CechComplex:
    """Cochains and coboundaries of the support-function sheaf.

    ``nerve[p]`` lists the p-cells whose intersection cone has positive
    dimension; cells meeting only in the zero cone carry no cochains and are
    left out. ``differentials[p]`` maps ``C^p`` to ``C^{p+1}`` and has shape
    ``cochain_dims[p+1] x cochain_dims[p]``.
    """

    nerve: tuple[tuple[NerveCell, ...], ...]
    cochain_dims: tuple[int, ...]
    differentials: tuple[tuple[tuple[Fraction, ...], ...], ...]
    span_bases: dict = field(repr=False, compare=False)

    @property
    def euler(self) -> int:
        return sum((-1) ** p * c for p, c in enumerate(self.cochain_dims))


def _span_basis(f: Fan, rays: tuple[int, ...]):
    if not rays:
        return [], []
    return rref([f.rays[k] for k in rays], f.ambient_rank)


def _enumerate_nerve(f: Fan) -> list[list[NerveCell]]:
    # in a valid fan the intersection of cones is the face spanned by common rays
    m = len(f.maximal_cones)
    ray_sets = [set(c) for c in f.maximal_cones]
    levels: list[list[NerveCell]] = []
    current = []
    for i in range(m):
        rays = tuple(sorted(ray_sets[i]))
        current.append(NerveCell((i,), rays, f.cone_dim(rays)))
    current = [c for c in current if c.dim > 0]
    while current:
        levels.append(current)
        nxt = []
        for cell in current:
            for j in range(cell.cones[-1] + 1, m):
                rays = tuple(sorted(set(cell.rays) & ray_sets[j]))
                if not rays:
                    continue
                d = f.cone_dim(rays)
                if d:
                    nxt.append(NerveCell(cell.cones + (j,), rays, d))
        current = nxt
    if not levels:
        levels.append([])
    return levels


def build_cech(f: Fan) -> CechComplex:
    """Cech complex of the support-function sheaf over the maximal-cone cover."""
    levels = _enumerate_nerve(f)
    bases = {}
    for level in levels:
        for cell in level:
            if cell.rays not in bases:
                bases[cell.rays] = _span_basis(f, cell.rays)

    offsets = []
    dims = []
    for level in levels:
        off = {}
        total = 0
        for cell in level:
            off[cell.cones] = total
            total += cell.dim
        offsets.append(off)
        dims.append(total)

    diffs = []
    for p in range(len(levels) - 1):
        mat = [[Fraction(0)] * dims[p] for _ in range(dims[p + 1])]
        for cell in levels[p + 1]:
            row0 = offsets[p + 1][cell.cones]
            sub_basis, _ = bases[cell.rays]
            for k in range(len(cell.cones)):
                face = cell.cones[:k] + cell.cones[k + 1:]
                col0 = offsets[p].get(face)
                if col0 is None:
                    continue
                sign = -1 if k % 2 else 1
                face_rays = next(c.rays for c in levels[p] if c.cones == face)
                _, pivots = bases[face_rays]
                # sub-basis vector b' = sum_j b'[pivot_j] * b_j
                for a, vec in enumerate(sub_basis):
                    for j, piv in enumerate(pivots):
                        if vec[piv]:
                            mat[row0 + a][col0 + j] += sign * vec[piv]
        diffs.append(tuple(tuple(r) for r in mat))
    return CechComplex(
        nerve=tuple(tuple(level) for level in levels),
        cochain_dims=tuple(dims),
        differentials=tuple(diffs),
        span_bases=bases,
    )


def kappa(c: CechComplex) -> tuple[int, ...]:
    """Ranks of Cech cohomology, one entry per cochain degree."""
    n = len(c.cochain_dims)
    ranks = []
    for p in range(n):
        if p < len(c.differentials):
            ranks.append(rank_q(c.differentials[p], c.cochain_dims[p]))
        else:
            ranks.append(0)
    out = []
    for p in range(n):
        incoming = ranks[p - 1] if p else 0
        out.append(c.cochain_dims[p] - ranks[p] - incoming)
    return tuple(out)


@dataclass(frozen=True)
class ClassGroupPresentation:
    """Pairing of the rays with a lattice basis of the dual of ``N0 = N ∩ span``."""

    m0_rank: int
    pairing: tuple[tuple[int, ...], ...]  # rows: rays, columns: basis of M0


def class_group_presentation(f: Fan) -> ClassGroupPresentation:
    r = f.ambient_rank
    if not f.rays:
        return ClassGroupPresentation(0, ())
    perp = [primitive_integer(v) for v in kernel_basis_q(f.rays, r)]
    n0 = integer_kernel_basis(perp, r)  # Z-basis of the saturated sublattice
    basis_cols = transpose(n0, r)  # r x s
    pairing = []
    for v in f.rays:
        coords = solve_q(basis_cols, v, len(n0))
        if coords is None or any(x.denominator != 1 for x in coords):
            raise ArithmeticError("ray outside the saturated lattice")
        pairing.append(tuple(int(x) for x in coords))
    return ClassGroupPresentation(len(n0), tuple(pairing))


def class_group(f: Fan) -> tuple[AbelianGroup, int]:
    """Class group of the toric variety and its rational rank."""
    pres = class_group_presentation(f)
    group = cokernel_structure([list(row) for row in pres.pairing], nrows=f.n_rays, ncols=pres.m0_rank)
    return group, group.free_rank


def phi_kernel_dim(f: Fan) -> int:
    """Dimension of the space of ray values that are linear on every maximal cone.

    For each maximal cone the values on its rays must lie in the image of the
    dual lattice; the linear relations among the cone's rays cut this image
    out. Stacking those relations over all cones gives a matrix whose kernel
    is the space of rational support functions.
    """
    n = f.n_rays
    rows = []
    for idx in f.maximal_cones:
        if not idx:
            continue
        vecs = [f.rays[k] for k in idx]
        for rel in kernel_basis_q(transpose(vecs, f.ambient_rank), len(vecs)):
            row = [Fraction(0)] * n
            for k, x in zip(idx, rel):
                row[k] = x
            rows.append(row)
    return n - (rank_q(rows, n) if rows else 0)


@dataclass(frozen=True)
class InvariantReport:
    r: int
    s: int
    n_rays: int
    counts: tuple[int, ...]
    top_dim: int
    complete: bool
    simplicial: bool
    rho0: int
    rho1: int
    rho1_prime: int
    rho2: int
    kappa: tuple[int, ...]
    cech_dims: tuple[int, ...]
    euler_kappa: int
    euler_c: int
    class_group: AbelianGroup
    nonprojective_certificate: bool


def invariant_report(f: Fan) -> InvariantReport:
    stats = fan_stats(f)
    cx = build_cech(f)
    k = kappa(cx)
    group, rho1p = class_group(f)
    k0 = k[0] if k else 0
    k1 = k[1] if len(k) > 1 else 0
    return InvariantReport(
        r=stats.r,
        s=stats.s,
        n_rays=f.n_rays,
        counts=stats.counts,
        top_dim=stats.top_dim,
        complete=stats.complete,
        simplicial=stats.simplicial,
        rho0=stats.r - stats.s,
        rho1=k0 - stats.s,
        rho1_prime=rho1p,
        rho2=k1,
        kappa=k,
        cech_dims=cx.cochain_dims,
        euler_kappa=sum((-1) ** p * x for p, x in enumerate(k)),
        euler_c=cx.euler,
        class_group=group,
        # rank-zero Picard group on a complete fan; torsion is not checked
        nonprojective_certificate=stats.complete and k0 == stats.s,
    )


@dataclass(frozen=True)
class RankIdentityCheck:
    applicable: bool
    lhs: int | None = None
    rhs: int | None = None


def rank_identity(f: Fan, report: InvariantReport | None = None) -> RankIdentityCheck:
    """Both sides of the Picard/degree-two rank identity for fans whose maximal cones meet simplicially.

    ``rho1 + s + sum(#rays(sigma_i) - dim sigma_i) == rho2 + #rays``.
    """
    for i, j in combinations(range(len(f.maximal_cones)), 2):
        common = tuple(sorted(set(f.maximal_cones[i]) & set(f.maximal_cones[j])))
        if len(common) != f.cone_dim(common):
            return RankIdentityCheck(False)
    rep = report or invariant_report(f)
    excess = sum(len(idx) - f.cone_dim(idx) for idx in f.maximal_cones)
    return RankIdentityCheck(True, rep.rho1 + rep.s + excess, rep.rho2 + f.n_rays)
