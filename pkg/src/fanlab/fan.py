"""Fans, their face posets and combinatorial statistics."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Sequence

from .cones import Cone, ConeError, classify, faces, intersect, is_primitive, primitivize
from .linalg import rank_q


class FanError(ValueError):
    """Raised by :func:`build_fan`; ``errors`` lists every problem found."""

    def __init__(self, errors: Sequence[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class FacePoset:
    """Faces of a fan as ray-index tuples, ordered by inclusion.

    In a fan a cone is determined by its rays, and ``tau <= sigma`` exactly
    when the rays of ``tau`` are among those of ``sigma``.
    """

    faces: tuple[tuple[int, tuple[int, ...]], ...]

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {rays: i for i, (_, rays) in enumerate(self.faces)}

    @cached_property
    def strata(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for i, (d, _) in enumerate(self.faces):
            out.setdefault(d, []).append(i)
        return {d: tuple(v) for d, v in sorted(out.items())}

    def stratum(self, dim: int) -> tuple[tuple[int, ...], ...]:
        return tuple(self.faces[i][1] for i in self.strata.get(dim, ()))

    def leq(self, i: int, j: int) -> bool:
        return set(self.faces[i][1]) <= set(self.faces[j][1])

    def counts(self) -> tuple[int, ...]:
        top = max(self.strata) if self.strata else 0
        return tuple(len(self.strata.get(d, ())) for d in range(top + 1))

    def __len__(self):
        return len(self.faces)


class Fan:
    """A validated finite rational fan; build one with :func:`build_fan`."""

    def __init__(self, ambient_rank, rays, maximal_cones, cones, name=None):
        self.ambient_rank = ambient_rank
        self.rays = rays
        self.maximal_cones = maximal_cones
        self.cones = cones
        self.name = name

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<Fan{label} r={self.ambient_rank} rays={len(self.rays)} maximal={len(self.maximal_cones)}>"

    def __eq__(self, other):
        if not isinstance(other, Fan):
            return NotImplemented
        return (
            self.ambient_rank == other.ambient_rank
            and self.rays == other.rays
            and self.maximal_cones == other.maximal_cones
        )

    def __hash__(self):
        return hash((self.ambient_rank, self.rays, self.maximal_cones))

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    def cone_rays(self, i: int) -> list[tuple[int, ...]]:
        return [self.rays[k] for k in self.maximal_cones[i]]

    def cone_dim(self, ray_indices: Sequence[int]) -> int:
        if not ray_indices:
            return 0
        return rank_q([self.rays[k] for k in ray_indices], self.ambient_rank)

    @cached_property
    def face_poset(self) -> FacePoset:
        return face_poset(self)

    def to_json(self) -> dict:
        out = {
            "ambient_rank": self.ambient_rank,
            "rays": [list(v) for v in self.rays],
            # the fan {0} is written with no cones
            "maximal_cones": [list(c) for c in self.maximal_cones if c],
        }
        if self.name is not None:
            out["name"] = self.name
        return out


def build_fan(
    ambient_rank: int,
    rays: Sequence[Sequence[int]],
    maximal_cones: Sequence[Sequence[int]],
    name: str | None = None,
    normalize: bool = False,
) -> Fan:
    """Validate fan data and return a :class:`Fan`.

    Only the maximal cones are listed; their faces are implied. An empty cone
    list, or a single empty cone, is the fan ``{0}``. With ``normalize`` set,
    non-primitive rays are divided by their content instead of rejected.
    Raises :class:`FanError` with every problem found.
    """
    errors: list[str] = []
    if isinstance(ambient_rank, bool) or not isinstance(ambient_rank, int) or ambient_rank < 0:
        raise FanError([f"bad ambient rank {ambient_rank!r}"])
    r = ambient_rank

    clean_rays: list[tuple[int, ...]] = []
    for i, v in enumerate(rays):
        v = tuple(v)
        if len(v) != r:
            errors.append(f"ray {i} has length {len(v)}, expected {r}")
            clean_rays.append(v)
            continue
        if any(isinstance(x, bool) or not isinstance(x, int) for x in v):
            errors.append(f"ray {i} has non-integer entries")
            clean_rays.append(v)
            continue
        if not any(v):
            errors.append(f"ray {i} is zero")
            clean_rays.append(v)
            continue
        if not is_primitive(v):
            if normalize:
                v = primitivize(v)
            else:
                errors.append(f"ray {i} not primitive")
        clean_rays.append(v)
    first_seen: dict[tuple[int, ...], int] = {}
    for i, v in enumerate(clean_rays):
        if v in first_seen and any(v):
            errors.append(f"duplicate ray {i} (same as ray {first_seen[v]})")
        first_seen.setdefault(v, i)

    cones_idx: list[tuple[int, ...]] = []
    for ci, c in enumerate(maximal_cones):
        idx = list(c)
        if any(isinstance(k, bool) or not isinstance(k, int) or not 0 <= k < len(clean_rays) for k in idx):
            errors.append(f"cone {ci} has a ray index out of range")
            continue
        if len(set(idx)) != len(idx):
            errors.append(f"cone {ci} repeats a ray index")
        cones_idx.append(tuple(sorted(set(idx))))
    if not cones_idx and not errors:
        cones_idx = [()]
    if errors:
        raise FanError(errors)

    used = set(k for c in cones_idx for k in c)
    for k in range(len(clean_rays)):
        if k not in used:
            errors.append(f"ray {k} not in any cone")

    cones: list[Cone | None] = []
    for ci, idx in enumerate(cones_idx):
        try:
            cone = Cone([clean_rays[k] for k in idx], r)
        except ConeError as exc:
            errors.append(f"cone {ci}: {exc}")
            cones.append(None)
            continue
        if not cone.strongly_convex:
            errors.append(f"cone {ci} not strongly convex")
            cones.append(None)
            continue
        extreme = set(cone.extreme_input)
        bad = [idx[p] for p in range(len(idx)) if p not in extreme]
        for k in bad:
            errors.append(f"listed ray {k} not extreme in cone {ci}")
        cones.append(None if bad else cone)

    for i, j in combinations(range(len(cones_idx)), 2):
        a, b = set(cones_idx[i]), set(cones_idx[j])
        if a <= b:
            errors.append(f"cone {i} is a face of cone {j}")
        elif b <= a:
            errors.append(f"cone {j} is a face of cone {i}")
    if errors:
        raise FanError(errors)

    for i, j in combinations(range(len(cones_idx)), 2):
        if not _meets_in_common_face(cones[i], cones_idx[i], cones[j], cones_idx[j], clean_rays):
            errors.append(f"intersection not a face ({i}, {j})")
    if errors:
        raise FanError(errors)

    return Fan(r, tuple(clean_rays), tuple(cones_idx), tuple(cones), name)


def _meets_in_common_face(ca: Cone, ia, cb: Cone, ib, rays) -> bool:
    meet = intersect(ca, cb)
    for cone, idx in ((ca, ia), (cb, ib)):
        inside = tuple(p for p, k in enumerate(idx) if meet.contains(rays[k]))
        if inside not in {f for _, f in cone.face_list}:
            return False
        if set(meet.generators) != {rays[idx[p]] for p in inside}:
            return False
    return True


def face_poset(f: Fan) -> FacePoset:
    """Every cone of ``f`` (maximal cones closed under faces), sorted by (dim, rays)."""
    seen: dict[tuple[int, ...], int] = {}
    for idx, cone in zip(f.maximal_cones, f.cones):
        # all listed rays are extreme, so cone.generators[p] is ray idx[p]
        for dim, local in cone.face_list:
            seen[tuple(idx[p] for p in local)] = dim
    return FacePoset(tuple(sorted((d, rays) for rays, d in seen.items())))


@dataclass(frozen=True)
class FanStats:
    r: int
    s: int
    counts: tuple[int, ...]
    top_dim: int
    complete: bool
    simplicial: bool


def support_dim(f: Fan) -> int:
    return rank_q(f.rays, f.ambient_rank) if f.rays else 0


def is_complete(f: Fan) -> bool:
    """Top-dimensional cones exist and each codimension-one face of one lies in exactly two."""
    r = f.ambient_rank
    top = [set(c) for c in f.maximal_cones if f.cone_dim(c) == r]
    if not top:
        return False
    poset = f.face_poset
    for c in top:
        for walls in poset.stratum(r - 1):
            if set(walls) <= c:
                if sum(1 for other in top if set(walls) <= other) != 2:
                    return False
    return True


def fan_stats(f: Fan) -> FanStats:
    counts = f.face_poset.counts()
    simplicial = all(classify(c).simplicial for c in f.cones)
    return FanStats(
        r=f.ambient_rank,
        s=support_dim(f),
        counts=counts,
        top_dim=len(counts) - 1,
        complete=is_complete(f),
        simplicial=simplicial,
    )


def _ray_colors(f: Fan) -> list[tuple]:
    poset = f.face_poset
    base = []
    for k in range(f.n_rays):
        base.append(tuple(sorted(Counter(d for d, rays in poset.faces if k in rays).items())))
    colors = base
    # one round of neighbour refinement through 2-faces
    for _ in range(2):
        nxt = []
        for k in range(f.n_rays):
            nbrs = sorted(colors[j] for rays in poset.stratum(2) if k in rays for j in rays if j != k)
            nxt.append((colors[k], tuple(nbrs)))
        colors = nxt
    return colors


def poset_isomorphic(a: Fan, b: Fan) -> tuple[bool, dict[int, int] | None]:
    """Decide whether the face posets of ``a`` and ``b`` are isomorphic.

    An isomorphism is determined by where it sends the rays, so the search
    backtracks over ray bijections, pruned by per-ray colour refinement.
    Returns ``(True, witness)`` with ``witness`` mapping face positions of
    ``a.face_poset`` to those of ``b.face_poset``, or ``(False, None)``.
    """
    pa, pb = a.face_poset, b.face_poset
    if pa.counts() != pb.counts():
        return False, None
    ca, cb = _ray_colors(a), _ray_colors(b)
    if sorted(ca) != sorted(cb):
        return False, None
    family_b = set(rays for _, rays in pb.faces)
    faces_by_ray: dict[int, list[tuple[int, ...]]] = {k: [] for k in range(a.n_rays)}
    for _, rays in pa.faces:
        for k in rays:
            faces_by_ray[k].append(rays)
    order = sorted(range(a.n_rays), key=lambda k: (sum(1 for c in ca if c == ca[k]), k))
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def consistent(k: int) -> bool:
        for rays in faces_by_ray[k]:
            if all(x in mapping for x in rays):
                if tuple(sorted(mapping[x] for x in rays)) not in family_b:
                    return False
        return True

    def search(pos: int) -> bool:
        if pos == len(order):
            return True
        k = order[pos]
        for cand in range(b.n_rays):
            if cand in used or cb[cand] != ca[k]:
                continue
            mapping[k] = cand
            used.add(cand)
            if consistent(k) and search(pos + 1):
                return True
            del mapping[k]
            used.discard(cand)
        return False

    if not search(0):
        return False, None
    witness = {}
    for i, (_, rays) in enumerate(pa.faces):
        witness[i] = pb.index[tuple(sorted(mapping[x] for x in rays))]
    return True, witness


def relabel(f: Fan, ray_perm: Sequence[int], cone_perm: Sequence[int] | None = None) -> Fan:
    """Copy of ``f`` with ray ``k`` moved to position ``ray_perm[k]`` and cones reordered."""
    rays = [None] * f.n_rays
    for k, new in enumerate(ray_perm):
        rays[new] = f.rays[k]
    cones = [[ray_perm[k] for k in c] for c in f.maximal_cones]
    if cone_perm is not None:
        cones = [cones[i] for i in cone_perm]
    return build_fan(f.ambient_rank, rays, cones, name=f.name)
