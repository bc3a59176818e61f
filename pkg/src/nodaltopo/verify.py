"""Randomized verification sweeps over the package's invariants.

Each check returns {"name", "ok", "detail"}; run_suite collects them and is
what the command-line `verify` subcommand executes.  A named fault can be
injected to exercise the failure-reporting path.
"""

from __future__ import annotations

import math

import numpy as np

from . import bounds, harmonics, nodal, specfun


def random_mixture(n: int, rng: np.random.Generator) -> harmonics.SphericalHarmonicSpec:
    """Generic degree-n mixture: random orders, phases, weights, rotations."""
    terms = []
    for _ in range(int(rng.integers(2, 4))):
        order = int(rng.integers(0, n + 1))
        # sin-phase with order 0 is identically zero
        phase = "cos" if order == 0 or rng.random() < 0.5 else "sin"
        rot = harmonics.random_rotation(rng)
        terms.append(harmonics.HarmonicTerm(float(rng.normal()), order, phase, rot))
    return harmonics.SphericalHarmonicSpec(n, tuple(terms))


def check_specfun_invariants(rng: np.random.Generator, quick: bool = False) -> dict:
    """Derivative/value consistency, parity, exact normalization."""
    failures = []
    n_cases = 40 if quick else 200
    xs = rng.uniform(-1.0, 1.0, n_cases)
    for n in range(0, 11):
        ref = specfun.legendre_eval(n, xs)
        via_deriv = specfun.legendre_deriv(n, 0, xs)
        if np.max(np.abs(ref - via_deriv)) > 1e-12:
            failures.append(f"legendre {n}: eval vs 0th derivative mismatch")
        for k in range(0, n + 1):
            plus = specfun.assoc_normalized(n, k, xs)
            minus = specfun.assoc_normalized(n, k, -xs)
            if np.max(np.abs(minus - (-1.0) ** (n - k) * plus)) > 1e-9 * np.max(np.abs(plus) + 1):
                failures.append(f"parity failed for (n={n}, k={k})")
            if specfun.assoc_normalized(n, k, 1.0) != 1.0:
                failures.append(f"normalization at 1 not exact for (n={n}, k={k})")
    return {"name": "specfun_invariants", "ok": not failures, "detail": failures[:5]}


def check_bessel_tables(quick: bool = False) -> dict:
    """Zero residuals, gap floor, interlacing of J0/J1 zeros."""
    count = 20 if quick else 50
    failures = []
    t0 = specfun.bessel_zeros(0, count)
    t1 = specfun.bessel_zeros(1, count)
    for table, order in ((t0, 0), (t1, 1)):
        for z in table.zeros:
            if abs(specfun.bessel_j(order, z)) >= 1e-9:
                failures.append(f"J{order} zero residual too large at {z}")
            if specfun.bessel_j(order, z - 1e-6) * specfun.bessel_j(order, z + 1e-6) >= 0:
                failures.append(f"J{order} no sign change around {z}")
    gaps1 = np.diff(t1.zeros)
    if np.min(gaps1) <= specfun.ZERO_GAP_FLOOR:
        failures.append("J1 zero gap at or below floor")
    inter = [np.sum((np.array(t0.zeros) > a) & (np.array(t0.zeros) < b)) for a, b in zip(t1.zeros, t1.zeros[1:])]
    if any(v != 1 for v in inter):
        failures.append("J0/J1 zeros do not interlace")
    return {"name": "bessel_tables", "ok": not failures, "detail": failures[:5]}


def check_bounds_monotone() -> dict:
    failures = []
    for n in range(2, 65):
        if bounds.karpushkin_bound(n) > bounds.courant_bound(n):
            failures.append(f"karpushkin > courant at n={n}")
    for n in range(3, 65):
        pred = bounds.predicted_ovals(n)
        value = pred.get("exact", pred.get("at_least"))
        if value > bounds.karpushkin_bound(n):
            failures.append(f"prediction beats upper bound at n={n}")
    return {"name": "bounds_monotone", "ok": not failures, "detail": failures[:5]}


def harmonic_sweep(
    rng: np.random.Generator,
    cases: int = 100,
    degrees: tuple[int, int] = (2, 10),
    start_resolution: int = 128,
    max_resolution: int = 2048,
    fault: str | None = None,
) -> dict:
    """Random mixtures: Euler identity, parity, bounds, antipodal audit."""
    failures = []
    unstable = 0
    reports = []
    for case in range(cases):
        n = int(rng.integers(degrees[0], degrees[1] + 1))
        spec = random_mixture(n, rng)
        topo = nodal.refine_until_stable(spec, "sphere", start_resolution, max_resolution)
        if not topo.stable:
            unstable += 1
            continue
        components, domains = topo.components, topo.domains
        if fault == "euler":
            components += 1
        if fault == "parity":
            components += 1
            domains += 1
        if domains != components + 1:
            failures.append(f"case {case} (n={n}): domains != components + 1")
        if components % 2 != n % 2:
            failures.append(f"case {case} (n={n}): component parity violated")
        rep = bounds.bound_report(n, components, domains)
        reports.append(rep)
        if not rep.courant_ok:
            failures.append(f"case {case} (n={n}): courant bound violated")
        if not rep.karpushkin_ok:
            failures.append(f"case {case} (n={n}): karpushkin bound violated")
        if topo.odd_count is None or topo.odd_count > 1:
            failures.append(f"case {case} (n={n}): odd component count {topo.odd_count}")
        elif topo.odd_count != n % 2:
            failures.append(f"case {case} (n={n}): odd count != degree parity")
    return {
        "name": "harmonic_sweep",
        "ok": not failures,
        "detail": failures[:5],
        "cases": cases,
        "unstable": unstable,
        "reports": [r.as_dict() for r in reports],
    }


def check_planar_eigen(rng: np.random.Generator) -> dict:
    """The planar family solves (Laplacian = c * function) for one constant c."""
    spec = harmonics.PlanarEigenSpec(radius=10.0)
    fld = harmonics.PlanarField(spec, "h")
    pts = []
    while len(pts) < 50:
        x, y = rng.uniform(-8.0, 8.0, 2)
        if abs(fld(x, y)) > 0.02:
            pts.append((x, y))
    xs, ys = np.array(pts).T
    ratios = harmonics.planar_laplacian_ratio(fld, xs, ys)
    c = float(np.median(ratios))
    ok = np.max(np.abs(ratios - c)) <= 1e-3 * abs(c) and (abs(c - 1.0) < 1e-3 or abs(c + 1.0) < 1e-3)
    return {
        "name": "planar_eigen_constant",
        "ok": bool(ok),
        "detail": {"constant": c, "max_dev": float(np.max(np.abs(ratios - c)))},
    }


def check_spherical_eigen(rng: np.random.Generator) -> dict:
    """Finite-difference Laplace-Beltrami residuals for random mixtures."""
    failures = []
    for n in (3, 5, 6, 8):
        spec = random_mixture(n, rng)
        scale = None
        pts_t, pts_p = [], []
        while len(pts_t) < 50:
            th = float(rng.uniform(0.3, math.pi - 0.3))
            ph = float(rng.uniform(0.0, 2.0 * math.pi))
            if scale is None:
                tt = rng.uniform(0.3, math.pi - 0.3, 256)
                pp = rng.uniform(0.0, 2.0 * math.pi, 256)
                scale = float(np.max(np.abs(spec(tt, pp))))
            if abs(float(spec(th, ph))) > 0.05 * scale:
                pts_t.append(th)
                pts_p.append(ph)
        res = harmonics.spherical_laplacian_residual(spec, spec.eigenvalue, np.array(pts_t), np.array(pts_p))
        if np.max(res) > 1e-3:
            failures.append(f"degree {n}: residual {np.max(res):.2e}")
    return {"name": "spherical_eigen_residual", "ok": not failures, "detail": failures}


def check_lewy_convergence(rng: np.random.Generator) -> dict:
    """Rescaled lifts approach the plane polynomial as the scale shrinks."""
    batteries = [
        (2, (-1.0 + 0j, 0j)),
        (2, (1.0 + 0j, 0j)),
        (3, (0j, -1.0 + 0j, 0j)),
        (3, (1.0 + 0j, 0j, 0j)),
        (4, (-4.0 + 0j, 0j, -3.0 + 0j, 0j)),
    ]
    zz = rng.uniform(-2, 2, 500) + 1j * rng.uniform(-2, 2, 500)
    zz = zz[np.abs(zz) <= 2.0]
    failures = []
    for n, coeffs in batteries:
        def re_p(z):
            acc = np.ones_like(z)
            for a in reversed(coeffs):
                acc = acc * z + a
            return acc.real

        sups = []
        for t in (0.2, 0.1, 0.05, 0.025):
            spec = harmonics.LewyLiftSpec(n, coeffs, t)
            sups.append(float(np.max(np.abs(harmonics.rescaled_lewy(spec, zz) - re_p(zz)))))
        if not all(a > b for a, b in zip(sups, sups[1:])):
            failures.append(f"degree {n}: sup distances not decreasing: {sups}")
    return {"name": "lewy_convergence", "ok": not failures, "detail": failures}


def run_suite(seed: int = 0, quick: bool = False, fault: str | None = None) -> dict:
    """Full randomized verification battery; deterministic for a fixed seed."""
    rng = np.random.default_rng(seed)
    checks = [
        check_specfun_invariants(rng, quick=quick),
        check_bessel_tables(quick=quick),
        check_bounds_monotone(),
        check_spherical_eigen(rng),
        check_lewy_convergence(rng),
        check_planar_eigen(rng),
        harmonic_sweep(
            rng,
            cases=20 if quick else 100,
            fault=fault,
        ),
    ]
    slim = []
    for c in checks:
        slim.append({k: v for k, v in c.items() if k != "reports"})
    return {
        "schema": 1,
        "seed": seed,
        "quick": quick,
        "fault": fault,
        "ok": all(c["ok"] for c in checks),
        "checks": slim,
        "failed": [c["name"] for c in checks if not c["ok"]],
    }
