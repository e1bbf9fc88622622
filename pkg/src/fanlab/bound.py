"""Greedy upper bound for the dimension of the space of support functions.

The rays are split into a set G, whose values determine every support
function, and a set R of rays whose values are then forced. ``|G|`` bounds
kappa_0 from above. Cones are visited starting from one cone and branching
outward; all ties go to the lowest cone index and the lowest ray index.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .fan import Fan
from .linalg import rank_q


@dataclass(frozen=True)
class Step:
    label: int  # 1: forced cone, 2: adjacent cone, 3: fresh start
    cone: int
    to_g: tuple[int, ...]
    to_r: tuple[int, ...]


@dataclass(frozen=True)
class BoundTrace:
    g_set: tuple[int, ...]
    r_set: tuple[int, ...]
    steps: tuple[Step, ...]
    bound: int
    start: int


def _rank(f: Fan, rays) -> int:
    return rank_q([f.rays[k] for k in rays], f.ambient_rank) if rays else 0


def _extend(f: Fan, chosen: list[int], candidates, target: int) -> list[int]:
    """Greedily add candidates (in order) that raise the rank until it reaches ``target``."""
    picked = []
    cur = list(chosen)
    rank = _rank(f, cur)
    for k in candidates:
        if rank == target:
            break
        if _rank(f, cur + [k]) > rank:
            cur.append(k)
            picked.append(k)
            rank += 1
    return picked


def kappa0_upper_bound(f: Fan, start: int | None = None) -> BoundTrace:
    """Run the greedy partition; ``start`` overrides the first fresh-start cone."""
    remaining = list(range(len(f.maximal_cones)))
    dims = [f.cone_dim(c) for c in f.maximal_cones]
    G: list[int] = []
    R: list[int] = []
    steps: list[Step] = []
    first = True
    first_cone = None

    while True:
        # Step 1: cones whose known rays already span them
        progress = True
        while progress:
            progress = False
            for i in remaining:
                known = [k for k in f.maximal_cones[i] if k in G or k in R]
                if _rank(f, known) == dims[i]:
                    new_r = [k for k in f.maximal_cones[i] if k not in G and k not in R]
                    R.extend(new_r)
                    remaining.remove(i)
                    steps.append(Step(1, i, (), tuple(new_r)))
                    progress = True
                    break

        # Step 2: a cone touching the known rays, most constrained first
        touching = []
        for i in remaining:
            known = [k for k in f.maximal_cones[i] if k in G or k in R]
            if known:
                touching.append((-_rank(f, known), -dims[i], i, known))
        if touching:
            touching.sort()
            _, _, i, known = touching[0]
            base = _extend(f, [], known, len(known))
            fresh = [k for k in f.maximal_cones[i] if k not in G and k not in R]
            new_g = _extend(f, base, fresh, dims[i])
            new_r = [k for k in fresh if k not in new_g]
            G.extend(new_g)
            R.extend(new_r)
            remaining.remove(i)
            steps.append(Step(2, i, tuple(new_g), tuple(new_r)))
            continue

        # Step 3: start afresh from a cone of maximal dimension
        if remaining:
            if first and start is not None:
                i = start
            else:
                i = min(remaining, key=lambda j: (-dims[j], j))
            if first_cone is None:
                first_cone = i
            first = False
            rays = list(f.maximal_cones[i])
            new_g = _extend(f, [], rays, dims[i])
            new_r = [k for k in rays if k not in new_g and k not in G and k not in R]
            G.extend(k for k in new_g if k not in G)
            R.extend(new_r)
            remaining.remove(i)
            steps.append(Step(3, i, tuple(new_g), tuple(new_r)))
            continue
        break

    return BoundTrace(
        g_set=tuple(sorted(G)),
        r_set=tuple(sorted(R)),
        steps=tuple(steps),
        bound=len(G),
        start=first_cone if first_cone is not None else -1,
    )


def exhaustive_bound(f: Fan, workers: int | None = None) -> BoundTrace:
    """Best bound over every choice of starting cone (lowest start index wins ties)."""
    starts = list(range(len(f.maximal_cones))) or [None]
    if workers is None:
        workers = int(os.environ.get("FANLAB_THREADS", "1") or 1)
    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            traces = list(pool.map(lambda s: kappa0_upper_bound(f, s), starts))
    else:
        traces = [kappa0_upper_bound(f, s) for s in starts]
    return min(traces, key=lambda t: (t.bound, t.start))
