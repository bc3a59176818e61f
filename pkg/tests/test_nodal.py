"""Extraction engine tests: domains, components, nesting, antipodal audit."""

import math

import numpy as np
import pytest

from nodaltopo import harmonics as H
from nodaltopo import nodal as N


class ConstantField:
    parity = 1

    def __call__(self, theta, phi):
        return np.ones_like(np.asarray(theta, dtype=float))


class ProductOfCircles:
    """Planar field vanishing on prescribed circles: prod((x-cx)^2+(y-cy)^2-r^2)."""

    def __init__(self, circles, radius):
        self.circles = circles
        self.radius = radius

    def __call__(self, x, y):
        acc = np.ones_like(np.asarray(x, dtype=float))
        for cx, cy, r in self.circles:
            acc = acc * ((x - cx) ** 2 + (y - cy) ** 2 - r * r)
        return acc


def test_constant_field_has_no_crossings():
    grid = N.sample(ConstantField(), "sphere", 64)
    assert len(N._segments(grid)) == 0
    count, signs = N.count_domains(grid)
    assert count == 1 and signs == [1]


def test_single_great_circle():
    grid = N.sample(H.basis_harmonic(1, 1), "sphere", 128)
    topo = N.extract_topology(grid)
    assert topo.domains == 2
    assert topo.components == 1
    assert topo.odd_count == 1 and topo.pair_count == 0
    assert topo.euler_ok


def test_equator_harmonic():
    grid = N.sample(H.basis_harmonic(1, 0, phase="cos"), "sphere", 128)
    topo = N.extract_topology(grid)
    assert topo.components == 1
    assert topo.domains == 2
    assert topo.odd_count == 1


def test_sector_harmonics():
    # sign pattern of sin(n phi): 2n sectors
    for n in (2, 3, 4, 5):
        grid = N.sample(H.basis_harmonic(n, n), "sphere", 128)
        count, signs = N.count_domains(grid)
        assert count == 2 * n
        assert signs.count(1) == n and signs.count(-1) == n


def test_checkerboard_of_unperturbed_base():
    # parallels x meridians cut the sphere into (2k+3)(4k+2) cells for the
    # degree-7 base; crossings are point contacts, counted in split mode
    grid = N.sample(H.basis_harmonic(7, 3), "sphere", 512)
    count, _ = N.count_domains(grid, saddle_mode="split")
    assert count == 30


def test_refinement_stability_example():
    t1 = N.extract_topology(N.sample(H.basis_harmonic(3, 2), "sphere", 256))
    t2 = N.extract_topology(N.sample(H.basis_harmonic(3, 2), "sphere", 512))
    assert (t1.components, t1.domains) == (t2.components, t2.domains)


def test_stable_at_first_doubling():
    topo = N.refine_until_stable(H.basis_harmonic(2, 1), "sphere", 128)
    assert topo.stable
    assert topo.resolution == 256


def test_capped_refinement_reports_instability():
    topo = N.refine_until_stable(H.basis_harmonic(2, 1), "sphere", 128, max_resolution=128)
    assert not topo.stable


def test_sample_validation():
    with pytest.raises(ValueError):
        N.sample(H.basis_harmonic(1, 1), "sphere", 32)
    with pytest.raises(ValueError):
        N.sample(H.basis_harmonic(1, 1), "sphere", 130)
    with pytest.raises(ValueError):
        N.sample(ConstantField(), "torus", 128)


def test_ovals_construction_small():
    spec = H.ovals_spec(3)
    topo = N.refine_until_stable(spec, "sphere", 128, 1024)
    assert topo.stable
    assert topo.components == 3
    assert topo.domains == 4
    assert topo.odd_count == 1 and topo.pair_count == 1


def test_figure_tree_for_degree_seven():
    spec = H.ovals_spec(7)
    topo = N.refine_until_stable(spec, "sphere", 256, 2048)
    assert topo.components == 13
    # hand-built region tree: a long oval separates two hemispheres, each
    # holding six small ovals
    adj = {"N": ["S"] + [f"u{i}" for i in range(6)], "S": ["N"] + [f"l{i}" for i in range(6)]}
    for i in range(6):
        adj[f"u{i}"] = ["N"]
        adj[f"l{i}"] = ["S"]
    assert topo.nesting_code == N.canonical_tree_code(adj)


def test_antipodal_classification_of_constructions():
    topo6 = N.refine_until_stable(H.ovals_spec(6), "sphere", 256, 2048)
    assert (topo6.odd_count, topo6.pair_count) == (0, 6)
    topo7 = N.refine_until_stable(H.ovals_spec(7), "sphere", 256, 2048)
    assert (topo7.odd_count, topo7.pair_count) == (1, 6)


def test_euler_and_parity_small_battery():
    rng = np.random.default_rng(5)
    for n in (2, 3, 4, 5):
        spec = H.SphericalHarmonicSpec(
            n,
            (
                H.HarmonicTerm(float(rng.normal()), n, "sin", H.random_rotation(rng)),
                H.HarmonicTerm(float(rng.normal()), max(1, n - 1), "cos", H.random_rotation(rng)),
            ),
        )
        topo = N.refine_until_stable(spec, "sphere", 128, 2048)
        if not topo.stable:
            continue
        assert topo.domains == topo.components + 1
        assert topo.components % 2 == n % 2
        assert topo.odd_count == n % 2
        assert topo.components == topo.odd_count + 2 * topo.pair_count


def test_third_refinement_agrees_after_stability():
    spec = H.ovals_spec(6)
    topo = N.refine_until_stable(spec, "sphere", 128, 1024)
    assert topo.stable
    finer = N.extract_topology(N.sample(spec, "sphere", topo.resolution * 2))
    assert (finer.components, finer.domains, finer.nesting_code) == (
        topo.components,
        topo.domains,
        topo.nesting_code,
    )


# ---------------------------------------------------------------------------
# disc

def test_disc_two_disjoint_circles():
    fld = ProductOfCircles([(-2.0, 0.0, 1.0), (2.0, 0.0, 1.0)], radius=5.0)
    topo = N.extract_topology(N.sample(fld, "disc", 256))
    assert topo.components == 2
    assert topo.domains == 3
    assert topo.nesting_code == "()()"


def test_disc_nested_circles():
    fld = ProductOfCircles([(0.0, 0.0, 1.0), (0.0, 0.0, 2.5)], radius=5.0)
    topo = N.extract_topology(N.sample(fld, "disc", 256))
    assert topo.components == 2
    assert topo.domains == 3
    assert topo.nesting_code == "(())"


def test_planar_two_domain_construction():
    fld = H.PlanarField(H.PlanarEigenSpec(radius=10.0), "h")
    topo = N.refine_until_stable(fld, "disc", 256, 2048)
    assert topo.stable
    assert topo.domains == 2


def test_unperturbed_planar_count_grows_with_radius():
    counts = []
    for radius in (6.0, 10.0):
        fld = H.PlanarField(H.PlanarEigenSpec(radius=radius, epsilon=0.0), "h")
        topo = N.refine_until_stable(fld, "disc", 256, 1024)
        counts.append(topo.domains)
    assert counts[0] < counts[1]


def test_topology_report_schema():
    topo = N.extract_topology(N.sample(H.basis_harmonic(1, 1), "sphere", 64))
    report = topo.report()
    for key in ("components", "domains", "nesting", "odd_count", "pairs", "stable", "resolution"):
        assert key in report
    assert report["schema"] == 1


def test_topologies_equal_modes():
    a = N.extract_topology(N.sample(H.basis_harmonic(1, 1), "sphere", 64))
    b = N.extract_topology(N.sample(H.basis_harmonic(1, 1, rotation=H.rotation_z(0.3)), "sphere", 64))
    assert N.topologies_equal(a, b)
    assert N.topologies_equal(a, b, antipodal_aware=True)
