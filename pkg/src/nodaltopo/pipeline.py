"""End-to-end consistency: planar diagram -> glued prediction -> sphere lift.

The small-t lift of a monic polynomial reproduces the polynomial's planar
zero set in the upper hemisphere; gluing the extracted chord diagram with
its antipodal copy therefore predicts the full sphere topology, which is
checked against an independent grid extraction of the lifted field.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import combinat, harmonics, nodal


@dataclass(frozen=True)
class LiftReport:
    ok: bool
    planar: combinat.PlanarDiagram
    glued: combinat.GluedCurveSystem
    scale: float | None
    components: int | None
    nesting_code: str | None
    attempts: tuple[tuple[float, int | None, bool], ...]  # (t, components, stable)


def lewy_lift_check(
    coeffs,
    t_start: float | None = None,
    start_resolution: int = 256,
    max_resolution: int = 2048,
    max_halvings: int = 6,
) -> LiftReport:
    """Lift with adaptive scale until the sphere topology matches the gluing."""
    planar = combinat.planar_zero_topology(coeffs)
    glued = combinat.glue_antipodal(planar.diagram)
    n = len(planar.diagram.pairing) // 2
    t0 = t_start if t_start is not None else 0.5 / planar.window_radius
    attempts = []
    t = t0
    for _ in range(max_halvings):
        spec = harmonics.LewyLiftSpec(n, tuple(coeffs), t)
        topo = nodal.refine_until_stable(spec, "sphere", start_resolution, max_resolution)
        attempts.append((t, topo.components, topo.stable))
        if (
            topo.stable
            and topo.components == glued.components
            and topo.nesting_code == glued.region_tree_code
        ):
            return LiftReport(
                True, planar, glued, t, topo.components, topo.nesting_code, tuple(attempts)
            )
        t /= 2.0
    return LiftReport(False, planar, glued, None, None, None, tuple(attempts))
