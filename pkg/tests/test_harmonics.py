"""Eigenfunction constructor tests: parity, eigen-residuals, sign patterns."""

import json
import math

import numpy as np
import pytest

from nodaltopo import harmonics as H
from nodaltopo import specfun as sf


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)


# ---------------------------------------------------------------------------
# basis evaluation

def test_sin_phase_vanishes_at_zero_longitude():
    spec = H.basis_harmonic(3, 1)
    assert spec(math.pi / 2, 0.0) == 0.0


def test_positive_order_vanishes_at_pole():
    for m in (1, 2, 5):
        spec = H.basis_harmonic(6, m)
        assert spec(0.0, 1.3) == 0.0


def test_antipodal_parity_random_points(rng):
    for n in range(1, 9):
        spec = H.SphericalHarmonicSpec(
            n,
            (
                H.HarmonicTerm(0.8, min(1, n), "sin", H.random_rotation(rng)),
                H.HarmonicTerm(-0.3, n, "cos"),
                H.HarmonicTerm(0.1, 0, "cos"),
            ),
        )
        th = rng.uniform(0.01, math.pi - 0.01, 100)
        ph = rng.uniform(0.0, 2.0 * math.pi, 100)
        a = spec(th, ph)
        b = spec(math.pi - th, ph + math.pi)
        scale = np.maximum(np.abs(a), 1e-9)
        assert np.max(np.abs(b - spec.parity * a) / scale) < 1e-9


def test_spherical_eigen_residual(rng):
    for n in (3, 5, 6):
        spec = H.SphericalHarmonicSpec(
            n,
            (
                H.HarmonicTerm(1.0, n // 2, "sin"),
                H.HarmonicTerm(0.5, n, "cos", H.random_rotation(rng)),
            ),
        )
        scale = float(np.max(np.abs(spec(rng.uniform(0.3, 2.8, 400), rng.uniform(0, 6.28, 400)))))
        pts_t, pts_p = [], []
        while len(pts_t) < 50:
            th, ph = rng.uniform(0.3, math.pi - 0.3), rng.uniform(0, 2 * math.pi)
            if abs(float(spec(th, ph))) > 0.05 * scale:
                pts_t.append(th)
                pts_p.append(ph)
        res = H.spherical_laplacian_residual(spec, spec.eigenvalue, np.array(pts_t), np.array(pts_p))
        assert np.max(res) < 1e-3


def test_spec_validation():
    with pytest.raises(ValueError):
        H.SphericalHarmonicSpec(3, ())
    with pytest.raises(ValueError):
        H.basis_harmonic(3, 4)
    with pytest.raises(ValueError):
        H.basis_harmonic(3, 1, weight=0.0)
    with pytest.raises(ValueError):
        H.HarmonicTerm(1.0, 1, "sin", np.eye(3) * 2.0)
    rot = np.eye(3)
    rot[2, 2] = -1.0
    with pytest.raises(ValueError):
        H.HarmonicTerm(1.0, 1, "sin", rot)


# ---------------------------------------------------------------------------
# polynomial lifts

def test_lift_single_chord_on_equator(rng):
    spec = H.LewyLiftSpec(1, (0.0 + 0.0j,), 1.0)
    ph = rng.uniform(0.0, 2.0 * math.pi, 16)
    assert np.allclose(spec(np.full(16, math.pi / 2), ph), np.cos(ph), atol=1e-12)


def test_lift_north_pole_value():
    spec = H.LewyLiftSpec(3, (0.5 + 0.2j, -1.0 + 0j, 0j), 0.3)
    assert spec(0.0, 0.0) == pytest.approx(0.5 * 0.3**3, rel=1e-12)


def test_lift_antipodal_parity(rng):
    spec = H.LewyLiftSpec(3, (0.1 + 0.3j, -1.0 + 0j, 0.2 + 0j), 0.2)
    th = rng.uniform(0.01, math.pi - 0.01, 200)
    ph = rng.uniform(0.0, 2.0 * math.pi, 200)
    a = spec(th, ph)
    b = spec(math.pi - th, ph + math.pi)
    assert np.max(np.abs(b - spec.parity * a) / np.maximum(np.abs(a), 1e-9)) < 1e-9


def test_rescaled_limit_at_origin():
    spec = H.LewyLiftSpec(2, (0.7 - 0.1j, 0.3 + 0j), 1e-6)
    assert H.rescaled_lewy(spec, 0.0 + 0.0j) == pytest.approx(0.7, rel=1e-9)


def test_rescaled_chart_consistency(rng):
    # scale 1 on the unit circle agrees with the equator values; sqrt(1-r^2)
    # amplifies last-ulp noise in |z| to ~1e-8, which bounds the comparison
    spec = H.LewyLiftSpec(2, (0.4 + 0.2j, -0.8 + 0j), 1.0)
    for phi in rng.uniform(0.0, 2.0 * math.pi, 8):
        z = complex(math.cos(phi), math.sin(phi))
        assert H.rescaled_lewy(spec, z) == pytest.approx(float(spec(math.pi / 2, phi)), abs=5e-8)


def test_rescaled_domain_error():
    spec = H.LewyLiftSpec(2, (0j, 0j), 0.7)
    with pytest.raises(sf.DomainError):
        H.rescaled_lewy(spec, 2.0 + 0.0j)


def test_rescaled_convergence_battery(rng):
    batteries = [
        (2, (-1.0 + 0j, 0j)),
        (2, (1.0 + 0j, 0j)),
        (3, (0j, -1.0 + 0j, 0j)),
        (3, (1.0 + 0j, 0j, 0j)),
        (4, (-4.0 + 0j, 0j, -3.0 + 0j, 0j)),
    ]
    zz = rng.uniform(-2, 2, 500) + 1j * rng.uniform(-2, 2, 500)
    zz = zz[np.abs(zz) <= 2.0]
    for n, coeffs in batteries:
        def re_p(z):
            acc = np.ones_like(z)
            for a in reversed(coeffs):
                acc = acc * z + a
            return acc.real

        sups = []
        for t in (0.2, 0.1, 0.05, 0.025):
            spec = H.LewyLiftSpec(n, coeffs, t)
            sups.append(float(np.max(np.abs(H.rescaled_lewy(spec, zz) - re_p(zz)))))
        assert all(a > b for a, b in zip(sups, sups[1:])), (n, sups)


# ---------------------------------------------------------------------------
# crossings and sign patterns

def test_crossing_counts():
    c7 = H.sphere_crossings(7)
    assert sum(1 for c in c7 if c.kind == "upper") == 12
    assert sum(1 for c in c7 if c.kind == "lower") == 12
    assert sum(1 for c in c7 if c.kind.startswith("pole")) == 2
    assert sum(1 for c in c7 if c.kind == "equator") == 0

    c5 = H.sphere_crossings(5)
    # base parallels: one per hemisphere, four meridians
    assert sum(1 for c in c5 if c.kind in ("upper", "lower")) == 8
    assert sum(1 for c in c5 if c.kind == "equator") == 4

    c3 = H.sphere_crossings(3)
    assert sum(1 for c in c3 if c.kind in ("upper", "lower")) == 4

    c6 = H.sphere_crossings(6)
    assert sum(1 for c in c6 if not c.kind.startswith("pole")) == 18


def test_sign_pattern_case_i():
    spec = H.ovals_spec(7)
    report = H.verify_perturber_signs(spec, H.sphere_crossings(7))
    assert report.ok
    for theta, phi, kind, value in report.values:
        if kind == "upper":
            assert value < 0
        if kind == "lower":
            assert value > 0


def test_unrotated_perturber_is_degenerate():
    # without the meridian offset the perturber vanishes on shared meridians
    spec = H.SphericalHarmonicSpec(
        7,
        (H.HarmonicTerm(1.0, 3, "sin"), H.HarmonicTerm(1.0, 6, "sin")),
    )
    with pytest.raises(H.DegenerateRotationError):
        H.verify_perturber_signs(spec, H.sphere_crossings(7))


def test_sign_pattern_case_iii_constant():
    spec = H.ovals_spec(6)
    report = H.verify_perturber_signs(spec, H.sphere_crossings(6))
    assert report.ok
    signs = {v > 0 for _, _, kind, v in report.values}
    assert len(signs) == 1


def test_sign_check_invariant_under_epsilon():
    spec = H.ovals_spec(7)
    small = H.SphericalHarmonicSpec(
        7,
        (spec.terms[0], H.HarmonicTerm(spec.terms[1].weight / 64.0, 6, "sin", spec.terms[1].rotation)),
    )
    a = H.verify_perturber_signs(spec, H.sphere_crossings(7))
    b = H.verify_perturber_signs(small, H.sphere_crossings(7))
    assert a.values == b.values


# ---------------------------------------------------------------------------
# planar family

def test_planar_f_vanishes_on_axis():
    spec = H.PlanarEigenSpec()
    for x in (-7.0, 0.0, 3.3):
        assert H.eval_planar(spec, x, 0.0, "f") == 0.0


def test_planar_f_vanishes_on_circles():
    spec = H.PlanarEigenSpec()
    j1 = sf.bessel_zeros(1, 1).zeros[0]
    assert abs(H.eval_planar(spec, 0.0, j1, "f")) < 1e-9


def test_g_alternates_at_circle_crossings():
    spec = H.PlanarEigenSpec(radius=30.0)
    zeros = sf.bessel_zeros(1, 8).zeros
    signs = [math.copysign(1.0, H.eval_planar(spec, z, 0.0, "g")) for z in zeros]
    assert all(a == -b for a, b in zip(signs, signs[1:]))
    signs_neg = [math.copysign(1.0, H.eval_planar(spec, -z, 0.0, "g")) for z in zeros]
    assert all(a == -b for a, b in zip(signs_neg, signs_neg[1:]))
    # opposite points carry opposite signs at each index
    assert all(a == -b for a, b in zip(signs, signs_neg))


def test_planar_eigen_constant(rng):
    spec = H.PlanarEigenSpec(radius=10.0)
    fld = H.PlanarField(spec, "h")
    pts = []
    while len(pts) < 50:
        x, y = rng.uniform(-8.0, 8.0, 2)
        if abs(fld(x, y)) > 0.02:
            pts.append((x, y))
    xs, ys = np.array(pts).T
    ratios = H.planar_laplacian_ratio(fld, xs, ys)
    c = float(np.median(ratios))
    assert abs(abs(c) - 1.0) < 1e-3
    assert np.max(np.abs(ratios - c)) < 1e-3 * abs(c)


def test_planar_spec_validation():
    with pytest.raises(ValueError):
        H.PlanarEigenSpec(delta1=0.25, delta2=0.5)
    with pytest.raises(ValueError):
        H.PlanarEigenSpec(delta1=1.8, delta2=0.5)
    with pytest.raises(ValueError):
        H.PlanarEigenSpec(epsilon=-1.0)
    with pytest.raises(sf.DomainError):
        H.eval_planar(H.PlanarEigenSpec(radius=10.0), 20.0, 20.0, "f")


# ---------------------------------------------------------------------------
# serialization

def test_json_round_trip_values(rng):
    specs = [
        H.SphericalHarmonicSpec(
            5,
            (
                H.HarmonicTerm(0.37, 2, "sin", H.random_rotation(rng)),
                H.HarmonicTerm(-1.2, 5, "cos"),
            ),
        ),
        H.LewyLiftSpec(3, (0.1 + 0.2j, -1.0 + 0j, 0.05 - 0.4j), 0.125),
        H.PlanarEigenSpec(0.5, 0.25, 3e-3, 12.0),
    ]
    th = rng.uniform(0.05, math.pi - 0.05, 50)
    ph = rng.uniform(0.0, 2.0 * math.pi, 50)
    for spec in specs:
        clone = H.spec_from_json(H.spec_to_json(spec))
        if isinstance(spec, H.PlanarEigenSpec):
            assert clone == spec
            continue
        a, b = spec(th, ph), clone(th, ph)
        assert np.max(np.abs(a - b)) <= 1e-15 * np.max(np.abs(a))


def test_json_documents_are_versioned(rng):
    doc = json.loads(H.spec_to_json(H.basis_harmonic(4, 2)))
    assert doc["schema"] == 1
    assert doc["eigenvalue"] == 20
