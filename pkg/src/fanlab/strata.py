"""Sampling fans near a given fan and stratifying them by kappa_0.

A neighbour is obtained by moving each ray by a rational offset on the grid
``(1/D) Z^r``, bounded componentwise by ``radius * max|ray|``, and then
rescaling to a primitive integer vector. The neighbour is kept only if the
same cone index sets still form a fan with the identical ray-labelled face
poset.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Mapping, Sequence

import numpy as np

from .cech import build_cech, kappa
from .cones import classify, primitivize
from .fan import Fan, FanError, build_fan, fan_stats


@dataclass(frozen=True)
class NeighborhoodSpec:
    denominator_bound: int = 100
    radius: Fraction = Fraction(1, 10)
    frozen_rays: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "radius", Fraction(self.radius))
        object.__setattr__(self, "frozen_rays", frozenset(self.frozen_rays))
        if self.denominator_bound < 1:
            raise ValueError("denominator bound must be at least 1")
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")


@dataclass(frozen=True)
class Perturbation:
    accepted: bool
    fan: Fan | None
    rays: tuple[tuple[int, ...], ...]
    reason: str = ""


def with_rays(f: Fan, new_rays: Sequence[Sequence[int]]) -> Perturbation:
    """Rebuild ``f`` on ``new_rays`` and test that the labelled face poset is unchanged."""
    rays = tuple(primitivize(v) for v in new_rays)
    try:
        g = build_fan(f.ambient_rank, rays, f.maximal_cones, name=f.name)
    except FanError as exc:
        return Perturbation(False, None, rays, str(exc))
    if g.face_poset.faces != f.face_poset.faces:
        return Perturbation(False, None, rays, "face poset changed")
    return Perturbation(True, g, rays)


def replace_rays(f: Fan, moves: Mapping[int, Sequence[int]]) -> Perturbation:
    rays = [moves.get(k, v) for k, v in enumerate(f.rays)]
    return with_rays(f, rays)


def _offset_rays(f: Fan, spec: NeighborhoodSpec, rng: np.random.Generator) -> list[tuple[int, ...]]:
    D = spec.denominator_bound
    out = []
    for k, v in enumerate(f.rays):
        if k in spec.frozen_rays:
            out.append(v)
            continue
        size = max(abs(x) for x in v)
        steps = floor(spec.radius * size * D)
        offs = rng.integers(-steps, steps, size=len(v), endpoint=True) if steps else [0] * len(v)
        moved = [D * x + int(o) for x, o in zip(v, offs)]
        if not any(moved):
            moved = [D * x for x in v]
        out.append(tuple(moved))
    return out


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for sample ``index``, independent of evaluation order."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def perturb(f: Fan, spec: NeighborhoodSpec, seed: int, index: int = 0) -> Perturbation:
    return with_rays(f, _offset_rays(f, spec, sample_rng(seed, index)))


def kappa0(f: Fan) -> int:
    k = kappa(build_cech(f))
    return k[0] if k else 0


@dataclass(frozen=True)
class StrataSample:
    samples_requested: int
    samples_accepted: int
    rejected_combinatorics: int
    histogram: dict[int, int]
    witnesses: dict[int, tuple[tuple[int, ...], ...]]
    seed: int
    rejection_reasons: dict[str, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "samples_requested": self.samples_requested,
            "samples_accepted": self.samples_accepted,
            "rejected_combinatorics": self.rejected_combinatorics,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "witnesses": {str(k): [list(v) for v in w] for k, w in sorted(self.witnesses.items())},
            "seed": self.seed,
            "rejection_reasons": dict(sorted(self.rejection_reasons.items())),
        }


def _one(args):
    f, spec, seed, i = args
    p = perturb(f, spec, seed, i)
    if not p.accepted:
        return i, None, p.rays, p.reason
    return i, kappa0(p.fan), p.rays, ""


def _workers(workers: int | None) -> int:
    if workers is not None:
        return max(1, workers)
    env = os.environ.get("FANLAB_THREADS")
    return max(1, int(env)) if env else 1


def sample_strata(f: Fan, spec: NeighborhoodSpec, n: int, seed: int, workers: int | None = None) -> StrataSample:
    """Draw ``n`` neighbours of ``f`` and histogram kappa_0 over the accepted ones.

    Results depend only on ``(f, spec, n, seed)``; ``workers`` (default from
    ``FANLAB_THREADS``, else 1) only changes how the work is spread.
    """
    jobs = [(f, spec, seed, i) for i in range(n)]
    nw = _workers(workers)
    if nw > 1 and n > 1:
        with ProcessPoolExecutor(max_workers=nw) as pool:
            results = list(pool.map(_one, jobs, chunksize=max(1, n // (4 * nw))))
    else:
        results = [_one(j) for j in jobs]

    hist: dict[int, int] = {}
    witnesses: dict[int, tuple[int, tuple]] = {}
    reasons: dict[str, int] = {}
    accepted = 0
    for i, k0, rays, reason in sorted(results, key=lambda t: t[0]):
        if k0 is None:
            key = reason.split(";")[0]
            reasons[key] = reasons.get(key, 0) + 1
            continue
        accepted += 1
        hist[k0] = hist.get(k0, 0) + 1
        if k0 not in witnesses:
            witnesses[k0] = (i, rays)
    return StrataSample(
        samples_requested=n,
        samples_accepted=accepted,
        rejected_combinatorics=n - accepted,
        histogram=dict(sorted(hist.items())),
        witnesses={k: w[1] for k, w in sorted(witnesses.items())},
        seed=seed,
        rejection_reasons=reasons,
    )


@dataclass(frozen=True)
class GenericityReport:
    applicable: bool
    fraction_kappa0_eq_3: Fraction | None = None
    histogram: dict[int, int] | None = None
    sample: StrataSample | None = None

    def to_json(self) -> dict:
        out = {"applicable": self.applicable}
        if self.applicable:
            frac = self.fraction_kappa0_eq_3
            out["fraction_kappa0_eq_3"] = None if frac is None else [frac.numerator, frac.denominator]
            out["histogram"] = {str(k): v for k, v in self.histogram.items()}
        return out


def genericity_applies(f: Fan) -> bool:
    """Complete fan in rank 3 whose maximal cones are all nonsimplicial."""
    if f.ambient_rank != 3 or not fan_stats(f).complete:
        return False
    return all(not classify(c).simplicial for c in f.cones)


def genericity_report(f: Fan, spec: NeighborhoodSpec, n: int, seed: int, workers: int | None = None) -> GenericityReport:
    if not genericity_applies(f):
        return GenericityReport(False)
    sample = sample_strata(f, spec, n, seed, workers)
    frac = Fraction(sample.histogram.get(3, 0), sample.samples_accepted) if sample.samples_accepted else None
    return GenericityReport(True, frac, sample.histogram, sample)
