"""Eigenfunction constructors: harmonic mixtures, polynomial lifts, planar family.

Every constructed object is an immutable spec that doubles as a vectorized
scalar field: spherical specs are called as f(theta, phi), planar specs as
f(x, y).  Rotations act on evaluation points (pullback), never through
coefficient re-expansion, so composing with a rotation is exact.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import specfun
from .specfun import DomainError

_ROTATION_TOL = 1e-12
_CROSSING_TOL = 1e-12


class AdaptiveSearchError(RuntimeError):
    """An adaptive parameter search exhausted its budget; carries diagnostics."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class DegenerateRotationError(RuntimeError):
    """The perturbing harmonic vanishes at a structural point; retilt and retry."""


# ---------------------------------------------------------------------------
# rotations

def rotation_z(psi: float) -> np.ndarray:
    c, s = math.cos(psi), math.sin(psi)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rotation_about_axis(axis: np.ndarray, angle: float) -> np.ndarray:
    """Rodrigues rotation matrix about a unit axis."""
    u = np.asarray(axis, dtype=float)
    u = u / np.linalg.norm(u)
    c, s = math.cos(angle), math.sin(angle)
    ux, uy, uz = u
    k = np.array([[0.0, -uz, uy], [uz, 0.0, -ux], [-uy, ux, 0.0]])
    return c * np.eye(3) + s * k + (1.0 - c) * np.outer(u, u)


def tilt_rotation(azimuth: float, angle: float) -> np.ndarray:
    """Small rotation about the horizontal axis (cos a, sin a, 0)."""
    return rotation_about_axis(np.array([math.cos(azimuth), math.sin(azimuth), 0.0]), angle)


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q @ np.diag(np.sign(np.diag(r)))
    if np.linalg.det(q) < 0:
        q[:, 2] = -q[:, 2]
    return q


def _check_rotation(rot: np.ndarray) -> None:
    if rot.shape != (3, 3):
        raise ValueError("rotation must be a 3x3 matrix")
    if np.max(np.abs(rot @ rot.T - np.eye(3))) > _ROTATION_TOL:
        raise ValueError("rotation must be orthogonal to 1e-12")
    if abs(np.linalg.det(rot) - 1.0) > _ROTATION_TOL:
        raise ValueError("rotation must have determinant +1")


def _unit_coords(theta, phi):
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    s = np.sin(theta)
    return s * np.cos(phi), s * np.sin(phi), np.cos(theta)


def _complex_pow(w: np.ndarray, m: int) -> np.ndarray:
    """w**m by binary powering (deterministic, exact at w = 0)."""
    out = np.ones_like(w)
    base = w
    e = m
    while e > 0:
        if e & 1:
            out = out * base
        base = base * base
        e >>= 1
    return out


# ---------------------------------------------------------------------------
# spherical harmonic mixtures

@dataclass(frozen=True, eq=False)
class HarmonicTerm:
    """One weighted basis term: sin^m(theta) F_n^m(cos theta) trig(m phi), rotated."""

    weight: float
    order: int
    phase: str = "sin"  # "sin" | "cos"
    rotation: np.ndarray | None = None

    def __post_init__(self):
        if self.phase not in ("sin", "cos"):
            raise ValueError("phase must be 'sin' or 'cos'")
        if self.rotation is not None:
            _check_rotation(np.asarray(self.rotation, dtype=float))


@dataclass(frozen=True, eq=False)
class SphericalHarmonicSpec:
    """Degree-n eigenfunction given as a weighted sum of rotated basis terms."""

    degree: int
    terms: tuple[HarmonicTerm, ...]

    def __post_init__(self):
        if not (0 <= self.degree <= specfun.MAX_DEGREE):
            raise ValueError(f"degree outside [0, {specfun.MAX_DEGREE}]")
        if not self.terms:
            raise ValueError("spec needs at least one term")
        for t in self.terms:
            if not (0 <= t.order <= self.degree):
                raise ValueError("term order outside [0, degree]")
        if all(t.weight == 0.0 for t in self.terms):
            raise ValueError("at least one term must have nonzero weight")

    @property
    def eigenvalue(self) -> int:
        return self.degree * (self.degree + 1)

    @property
    def parity(self) -> int:
        return -1 if self.degree % 2 else 1

    def __call__(self, theta, phi) -> np.ndarray:
        x, y, z = _unit_coords(theta, phi)
        total = np.zeros_like(x)
        for t in self.terms:
            if t.weight == 0.0:
                continue
            if t.rotation is not None:
                r = t.rotation
                xr = r[0, 0] * x + r[0, 1] * y + r[0, 2] * z
                yr = r[1, 0] * x + r[1, 1] * y + r[1, 2] * z
                zr = r[2, 0] * x + r[2, 1] * y + r[2, 2] * z
            else:
                xr, yr, zr = x, y, z
            w = _complex_pow(xr + 1j * yr, t.order)
            radial = specfun.assoc_normalized(self.degree, t.order, np.clip(zr, -1.0, 1.0))
            trig = w.imag if t.phase == "sin" else w.real
            total = total + t.weight * radial * trig
        return total


def basis_harmonic(n: int, m: int, phase: str = "sin", rotation=None, weight: float = 1.0) -> SphericalHarmonicSpec:
    """Single-term spec for the standard basis harmonic of degree n, order m."""
    return SphericalHarmonicSpec(n, (HarmonicTerm(weight, m, phase, rotation),))


def eval_sph(spec: SphericalHarmonicSpec, theta, phi):
    return spec(theta, phi)


# ---------------------------------------------------------------------------
# lifts of planar harmonic polynomials

@dataclass(frozen=True, eq=False)
class LewyLiftSpec:
    """One-parameter eigenfunction family built from a monic polynomial.

    With p(z) = a_0 + ... + a_{n-1} z^{n-1} + z^n, the field is
        Re sum_k F_n^k(cos theta) t^(n-k) a_k (sin theta e^{i phi})^k,
    whose small-t nodal set in the open upper hemisphere reproduces the
    zero set of Re p in the plane.
    """

    degree: int
    coefficients: tuple[complex, ...]  # a_0 .. a_{n-1}; leading a_n = 1 implicit
    scale: float

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("degree must be >= 1")
        if len(self.coefficients) != self.degree:
            raise ValueError("need exactly degree coefficients a_0..a_{n-1}")
        if not (self.scale > 0.0):
            raise ValueError("scale t must be positive")

    @property
    def eigenvalue(self) -> int:
        return self.degree * (self.degree + 1)

    @property
    def parity(self) -> int:
        return -1 if self.degree % 2 else 1

    def _full_coeffs(self) -> list[complex]:
        return list(self.coefficients) + [1.0 + 0.0j]

    def __call__(self, theta, phi) -> np.ndarray:
        x, y, z = _unit_coords(theta, phi)
        zc = np.clip(z, -1.0, 1.0)
        w = x + 1j * y
        n, t = self.degree, self.scale
        total = np.zeros_like(x)
        wk = np.ones_like(w)
        for k, a in enumerate(self._full_coeffs()):
            if a != 0:
                radial = specfun.assoc_normalized(n, k, zc)
                total = total + (t ** (n - k)) * radial * (a * wk).real
            if k < n:
                wk = wk * w
        return total


def eval_lewy(spec: LewyLiftSpec, theta, phi):
    return spec(theta, phi)


def rescaled_lewy(spec: LewyLiftSpec, z):
    """t^{-n} f_t(t z) on the projected chart; converges to Re p as t -> 0."""
    zc = np.asarray(z, dtype=complex)
    scalar = zc.ndim == 0
    zc = np.atleast_1d(zc)
    t, n = spec.scale, spec.degree
    r = np.abs(zc)
    if np.any(t * r > 1.0 + 1e-12):
        raise DomainError("rescaled evaluation needs |t z| <= 1")
    height = np.sqrt(np.clip(1.0 - (t * r) ** 2, 0.0, 1.0))
    total = np.zeros(zc.shape)
    wk = np.ones_like(zc)
    for k, a in enumerate(spec._full_coeffs()):
        if a != 0:
            radial = specfun.assoc_normalized(n, k, height)
            total = total + radial * (a * wk).real
        if k < n:
            wk = wk * zc
    return float(total[0]) if scalar else total


# ---------------------------------------------------------------------------
# planar eigenfunctions (two nodal domains construction)

@dataclass(frozen=True)
class PlanarEigenSpec:
    """Shifted-superposition planar eigenfunction h = f + eps * g.

    f = J1(r) sin(theta) in polar coordinates; g is f translated by
    (delta1, delta2); the shifts must satisfy 0 < delta2 < delta1 < 1.5
    (half the verified floor for J1 zero gaps).
    """

    delta1: float = 0.5
    delta2: float = 0.25
    epsilon: float = 1e-2
    radius: float = 15.0

    def __post_init__(self):
        if not (0.0 < self.delta2 < self.delta1 < specfun.ZERO_GAP_FLOOR / 2.0):
            raise ValueError("shifts must satisfy 0 < delta2 < delta1 < 1.5")
        if self.epsilon < 0.0:
            raise ValueError("epsilon must be >= 0")
        if self.radius <= 0.0:
            raise ValueError("window radius must be positive")


def _planar_f(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    r = np.hypot(x, y)
    jv = specfun.bessel_j(1, r)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(r > 0.0, jv * y / np.where(r > 0.0, r, 1.0), 0.0)
    return out


def eval_planar(spec: PlanarEigenSpec, x, y, which: str = "h"):
    """Evaluate f, g, or h = f + eps*g at (x, y); valid for r <= radius + 5."""
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    scalar = xa.ndim == 0 and ya.ndim == 0
    xa, ya = np.atleast_1d(xa), np.atleast_1d(ya)
    if np.any(xa * xa + ya * ya > (spec.radius + 5.0) ** 2 + 1e-9):
        raise DomainError("evaluation point outside the supported window")
    if which == "f":
        out = _planar_f(xa, ya)
    elif which == "g":
        out = _planar_f(xa - spec.delta1, ya - spec.delta2)
    elif which == "h":
        out = _planar_f(xa, ya) + spec.epsilon * _planar_f(xa - spec.delta1, ya - spec.delta2)
    else:
        raise ValueError("which must be 'f', 'g', or 'h'")
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class PlanarField:
    """Callable (x, y) view of one component of a PlanarEigenSpec."""

    spec: PlanarEigenSpec
    which: str = "h"

    @property
    def radius(self) -> float:
        return self.spec.radius

    def __call__(self, x, y):
        return eval_planar(self.spec, x, y, self.which)


# ---------------------------------------------------------------------------
# the many-ovals perturbation construction

def _oval_case(n: int) -> dict:
    """Case data for the degree-n perturbation: orders, meridians, prediction kind."""
    if n < 3:
        raise ValueError("construction needs degree >= 3")
    if n % 2 == 1:
        k = (n - 3) // 4 if n % 4 == 3 else (n - 1) // 4
        if n % 4 == 3:
            return dict(case="i", k=k, base_order=2 * k + 1, pert_order=4 * k + 2)
        return dict(case="ii", k=k, base_order=2 * k, pert_order=4 * k)
    m = n // 2
    return dict(case="iii", m=m, base_order=m, pert_order=2 * m)


@dataclass(frozen=True)
class Crossing:
    theta: float
    phi: float
    kind: str  # upper | lower | equator | pole_north | pole_south


def sphere_crossings(n: int) -> list[Crossing]:
    """Intersection points of the base harmonic's nodal parallels and meridians.

    Includes the poles and, for the cases whose base vanishes on the equator,
    the equatorial crossings.
    """
    info = _oval_case(n)
    base = info["base_order"]
    meridians = 2 * base if info["case"] != "iii" else 2 * info["m"]
    upper_thetas = specfun.assoc_zeros(n, base)
    phis = [math.pi * j / base for j in range(meridians)] if base > 0 else []
    pts: list[Crossing] = []
    for th in upper_thetas:
        for ph in phis:
            pts.append(Crossing(th, ph, "upper"))
            pts.append(Crossing(math.pi - th, ph, "lower"))
    # odd base-degree parity puts a nodal parallel on the equator itself
    if (n - base) % 2 == 1:
        for ph in phis:
            pts.append(Crossing(math.pi / 2, ph, "equator"))
    pts.append(Crossing(0.0, 0.0, "pole_north"))
    pts.append(Crossing(math.pi, 0.0, "pole_south"))
    return pts


@dataclass(frozen=True)
class SignReport:
    ok: bool
    case: str
    values: tuple[tuple[float, float, str, float], ...]  # theta, phi, kind, value
    failures: tuple[str, ...]


def verify_perturber_signs(spec: SphericalHarmonicSpec, crossings: list[Crossing]) -> SignReport:
    """Check the case-specific sign pattern of the unscaled perturbing harmonic.

    case i/ii: negative at upper crossings, positive at lower, negative at the
    north pole, positive at the south (case ii additionally: positive at
    equatorial crossings with 0 < phi <= pi, negative otherwise).
    case iii: one constant sign at every crossing including the poles.

    A value below 1e-12 at a non-pole crossing means the rotation is
    degenerate; pole values are legitimately tiny (they scale like a high
    power of the tilt), so there only exact zero is degenerate.
    """
    if len(spec.terms) < 2:
        raise ValueError("spec must carry a base term and a perturbing term")
    pert = spec.terms[1]
    probe = SphericalHarmonicSpec(spec.degree, (HarmonicTerm(1.0, pert.order, pert.phase, pert.rotation),))
    info = _oval_case(spec.degree)
    theta = np.array([c.theta for c in crossings])
    phi = np.array([c.phi for c in crossings])
    vals = probe(theta, phi)
    failures: list[str] = []
    for c, v in zip(crossings, vals):
        at_pole = c.kind.startswith("pole")
        if (not at_pole and abs(v) < _CROSSING_TOL) or (at_pole and v == 0.0):
            raise DegenerateRotationError(
                f"perturber vanishes at {c.kind} crossing (theta={c.theta:.6f}, phi={c.phi:.6f})"
            )
    if info["case"] in ("i", "ii"):
        for c, v in zip(crossings, vals):
            if c.kind == "upper" and not v < 0:
                failures.append(f"upper crossing phi={c.phi:.4f} not negative")
            elif c.kind == "lower" and not v > 0:
                failures.append(f"lower crossing phi={c.phi:.4f} not positive")
            elif c.kind == "pole_north" and not v < 0:
                failures.append("north pole not negative")
            elif c.kind == "pole_south" and not v > 0:
                failures.append("south pole not positive")
            elif c.kind == "equator":
                want_positive = 0.0 < c.phi <= math.pi
                if want_positive and not v > 0:
                    failures.append(f"equator crossing phi={c.phi:.4f} not positive")
                if not want_positive and not v < 0:
                    failures.append(f"equator crossing phi={c.phi:.4f} not negative")
    else:
        ref = 1.0 if vals[0] > 0 else -1.0
        for c, v in zip(crossings, vals):
            if v * ref <= 0:
                failures.append(f"{c.kind} crossing phi={c.phi:.4f} breaks constant sign")
    report = SignReport(
        ok=not failures,
        case=info["case"],
        values=tuple((c.theta, c.phi, c.kind, float(v)) for c, v in zip(crossings, vals)),
        failures=tuple(failures),
    )
    return report


def _find_perturber_rotation(n: int, tilt_start: float, tilt_attempts: int) -> tuple[np.ndarray, dict]:
    """Search tilt magnitude and azimuth until the sign pattern verifies."""
    info = _oval_case(n)
    order = info["pert_order"]
    psi = -math.pi / (2.0 * order)  # midpoint of the allowed meridian offset
    crossings = sphere_crossings(n)
    azimuth_count = 16 * order
    attempts = []
    tau = tilt_start
    for _ in range(tilt_attempts):
        for j in range(azimuth_count):
            alpha = 2.0 * math.pi * j / azimuth_count
            rot = rotation_z(psi) @ tilt_rotation(alpha, tau)
            spec = SphericalHarmonicSpec(
                n,
                (
                    HarmonicTerm(1.0, info["base_order"], "sin"),
                    HarmonicTerm(1.0, order, "sin", rot),
                ),
            )
            try:
                report = verify_perturber_signs(spec, crossings)
            except DegenerateRotationError as exc:
                attempts.append((tau, alpha, f"degenerate: {exc}"))
                continue
            if report.ok:
                return rot, dict(psi=psi, tilt=tau, azimuth=alpha)
            attempts.append((tau, alpha, report.failures[0]))
        tau /= 10.0
    raise AdaptiveSearchError(
        f"no tilt satisfied the sign pattern for degree {n}",
        dict(attempts=attempts[-10:], psi=psi),
    )


def ovals_spec(
    n: int,
    eps_start: float = 1e-2,
    eps_floor: float = 1e-8,
    tilt_start: float = 1e-3,
    tilt_attempts: int = 5,
    start_resolution: int = 256,
    max_resolution: int = 2048,
) -> SphericalHarmonicSpec:
    """Perturbed harmonic of degree n whose nodal set splits into ~n^2/4 ovals.

    Builds base + eps * (perturber o R): the meridian offset is the midpoint
    of its allowed window, the tilt is searched over magnitude and azimuth
    until the crossing sign pattern verifies, and eps is halved from
    eps_start until the extracted topology is stable under grid refinement.
    """
    from . import nodal  # deferred: nodal does not import harmonics

    info = _oval_case(n)
    rot, rot_info = _find_perturber_rotation(n, tilt_start, tilt_attempts)
    eps = eps_start
    tried = []
    while eps >= eps_floor:
        spec = SphericalHarmonicSpec(
            n,
            (
                HarmonicTerm(1.0, info["base_order"], "sin"),
                HarmonicTerm(eps, info["pert_order"], "sin", rot),
            ),
        )
        topo = nodal.refine_until_stable(spec, "sphere", start_resolution, max_resolution)
        if topo.stable:
            return spec
        tried.append((eps, topo.resolution, topo.components, topo.domains))
        eps /= 2.0
    raise AdaptiveSearchError(
        f"no epsilon in [{eps_floor}, {eps_start}] gave a refinement-stable topology",
        dict(rotation=rot_info, tried=tried),
    )


# ---------------------------------------------------------------------------
# finite-difference eigenfunction checks

def spherical_laplacian_residual(field, eigenvalue: float, theta, phi, h: float = 1e-3):
    """Relative residual of (Laplace-Beltrami f) + eigenvalue * f at given points."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    f0 = field(theta, phi)
    ftp = field(theta + h, phi)
    ftm = field(theta - h, phi)
    fpp = field(theta, phi + h)
    fpm = field(theta, phi - h)
    d2t = (ftp - 2.0 * f0 + ftm) / h**2
    d1t = (ftp - ftm) / (2.0 * h)
    d2p = (fpp - 2.0 * f0 + fpm) / h**2
    lap = d2t + d1t / np.tan(theta) + d2p / np.sin(theta) ** 2
    return np.abs(lap + eigenvalue * f0) / (eigenvalue * np.maximum(np.abs(f0), 1e-12))


def planar_laplacian_ratio(field, x, y, h: float = 1e-3):
    """Flat-Laplacian to value ratio at given points (constant for eigenfunctions)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    f0 = field(x, y)
    lap = (
        field(x + h, y) + field(x - h, y) + field(x, y + h) + field(x, y - h) - 4.0 * f0
    ) / h**2
    return lap / f0


# ---------------------------------------------------------------------------
# JSON serialization

def spec_to_json(spec) -> str:
    if isinstance(spec, SphericalHarmonicSpec):
        doc = {
            "schema": 1,
            "kind": "spherical_harmonic",
            "degree": spec.degree,
            "eigenvalue": spec.eigenvalue,
            "terms": [
                {
                    "weight": t.weight,
                    "order": t.order,
                    "phase": t.phase,
                    "rotation": None
                    if t.rotation is None
                    else [float(v) for v in np.asarray(t.rotation).reshape(9)],
                }
                for t in spec.terms
            ],
        }
    elif isinstance(spec, LewyLiftSpec):
        doc = {
            "schema": 1,
            "kind": "lewy_lift",
            "degree": spec.degree,
            "scale": spec.scale,
            "coefficients": [[c.real, c.imag] for c in map(complex, spec.coefficients)],
        }
    elif isinstance(spec, PlanarEigenSpec):
        doc = {
            "schema": 1,
            "kind": "planar",
            "delta1": spec.delta1,
            "delta2": spec.delta2,
            "epsilon": spec.epsilon,
            "radius": spec.radius,
        }
    else:
        raise TypeError(f"cannot serialize {type(spec).__name__}")
    return json.dumps(doc, indent=2, sort_keys=True)


def spec_from_json(text: str):
    doc = json.loads(text)
    kind = doc.get("kind")
    if kind == "spherical_harmonic":
        terms = tuple(
            HarmonicTerm(
                t["weight"],
                t["order"],
                t["phase"],
                None if t["rotation"] is None else np.array(t["rotation"]).reshape(3, 3),
            )
            for t in doc["terms"]
        )
        return SphericalHarmonicSpec(doc["degree"], terms)
    if kind == "lewy_lift":
        coeffs = tuple(complex(re, im) for re, im in doc["coefficients"])
        return LewyLiftSpec(doc["degree"], coeffs, doc["scale"])
    if kind == "planar":
        return PlanarEigenSpec(doc["delta1"], doc["delta2"], doc["epsilon"], doc["radius"])
    raise ValueError(f"unknown spec kind {kind!r}")
