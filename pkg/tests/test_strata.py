from fractions import Fraction

import pytest

from fanlab import fixtures
from fanlab.cech import invariant_report, phi_kernel_dim
from fanlab.strata import (
    NeighborhoodSpec,
    genericity_report,
    kappa0,
    perturb,
    replace_rays,
    sample_strata,
)


def test_zero_radius_is_identity():
    f = fixtures.load("ex1-delta")
    p = perturb(f, NeighborhoodSpec(100, Fraction(0)), seed=3)
    assert p.accepted and p.fan.rays == f.rays


def test_moves_from_the_cube():
    cube = fixtures.load("cube")
    moved = replace_rays(cube, {0: (2, 1, 1)})
    assert moved.accepted
    assert moved.fan == fixtures.load("cube-prime")
    inside = replace_rays(cube, {0: (0, 0, 1)})
    assert not inside.accepted
    assert "listed ray 0 not extreme in cone 0" in inside.reason


def test_spec_validation():
    with pytest.raises(ValueError):
        NeighborhoodSpec(0)
    with pytest.raises(ValueError):
        NeighborhoodSpec(10, Fraction(-1, 2))


def test_accepted_samples_keep_labels_and_oracles():
    f = fixtures.load("ex1-delta")
    spec = NeighborhoodSpec(50, Fraction(1, 8))
    for i in range(15):
        p = perturb(f, spec, seed=11, index=i)
        if not p.accepted:
            continue
        assert p.fan.face_poset.faces == f.face_poset.faces
        rep = invariant_report(p.fan)
        assert rep.euler_kappa == rep.euler_c
        assert phi_kernel_dim(p.fan) == rep.kappa[0]


def test_sample_bookkeeping():
    s = sample_strata(fixtures.load("cube"), NeighborhoodSpec(), 30, seed=5)
    assert s.samples_accepted + s.rejected_combinatorics == s.samples_requested == 30
    assert sum(s.histogram.values()) == s.samples_accepted
    assert set(s.witnesses) == set(s.histogram)


def test_deterministic_and_parallel_safe():
    f = fixtures.load("fig2a")
    spec = NeighborhoodSpec(100, Fraction(1, 10))
    a = sample_strata(f, spec, 24, seed=9, workers=1)
    b = sample_strata(f, spec, 24, seed=9, workers=1)
    c = sample_strata(f, spec, 24, seed=9, workers=2)
    assert a == b == c
    assert a.to_json() == c.to_json()


def test_env_worker_count(monkeypatch):
    monkeypatch.setenv("FANLAB_THREADS", "2")
    f = fixtures.load("p2")
    assert sample_strata(f, NeighborhoodSpec(), 8, seed=1) == sample_strata(f, NeighborhoodSpec(), 8, seed=1, workers=1)


def test_simplicial_single_stratum():
    f = fixtures.load("p2")
    s = sample_strata(f, NeighborhoodSpec(), 40, seed=2)
    assert set(s.histogram) == {f.n_rays}


def test_genericity_report():
    rep = genericity_report(fixtures.load("cube"), NeighborhoodSpec(), 20, seed=4)
    assert rep.applicable
    assert rep.fraction_kappa0_eq_3 is not None
    assert not genericity_report(fixtures.load("p2"), NeighborhoodSpec(), 5, seed=4).applicable
    assert not genericity_report(fixtures.load("ex1-delta"), NeighborhoodSpec(), 5, seed=4).applicable
    assert rep.to_json()["applicable"] is True


def test_unperturbed_kappa0():
    assert kappa0(fixtures.load("cube")) == 4
    assert kappa0(fixtures.load("ex1-delta")) == 4
