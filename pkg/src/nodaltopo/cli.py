"""Command-line surface: reproducible construction + extraction + verification runs.

Exit codes: 0 success, 1 verification failure, 2 usage/config error.
Reports are JSON (or flat CSV) without timestamps, so identical config and
seed produce byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import bounds, combinat, harmonics, nodal, pipeline, specfun, svgout, verify

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


@dataclass
class RunConfig:
    resolution: int = 256
    max_resolution: int = 2048
    seed: int = 0
    eps_start: float = 1e-2
    eps_floor: float = 1e-8
    t_start: float = 0.0  # 0 = choose from the window radius
    budget: int = 10_000
    out: str = "."
    format: str = "json"
    svg: bool = True
    quick: bool = False

    def validate(self) -> None:
        if self.resolution < nodal.MIN_RESOLUTION or self.max_resolution > nodal.MAX_RESOLUTION:
            raise ValueError("resolution outside the supported range")
        if self.resolution > self.max_resolution:
            raise ValueError("resolution exceeds max-resolution")
        if self.eps_floor <= 0 or self.eps_start <= 0:
            raise ValueError("epsilon schedule bounds must be positive")
        if self.budget < 1:
            raise ValueError("budget must be positive")
        if self.format not in ("json", "csv"):
            raise ValueError("format must be json or csv")


def load_config_file(path: str) -> dict:
    """Flat key=value text; '#' starts a comment."""
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"bad config line: {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key] = value
    return out


def config_from_args(args) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        file_values = load_config_file(args.config)
        for f in fields(RunConfig):
            if f.name in file_values:
                raw = file_values.pop(f.name)
                if f.type == "bool":
                    setattr(cfg, f.name, raw.lower() in ("1", "true", "yes"))
                else:
                    setattr(cfg, f.name, type(getattr(cfg, f.name))(raw))
        if file_values:
            raise ValueError(f"unknown config keys: {sorted(file_values)}")
    for f in fields(RunConfig):
        arg = getattr(args, f.name, None)
        if arg is not None:
            setattr(cfg, f.name, arg)
    cfg.validate()
    return cfg


def print_config(cfg: RunConfig) -> None:
    for f in fields(RunConfig):
        print(f"{f.name}={getattr(cfg, f.name)}")


def _flatten(prefix: str, obj, rows: list[tuple[str, str]]) -> None:
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], rows)
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, json.dumps(obj)))


def write_report(report: dict, cfg: RunConfig, stem: str) -> Path:
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    if cfg.format == "json":
        path = out_dir / f"{stem}.json"
        path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    else:
        path = out_dir / f"{stem}.csv"
        rows: list[tuple[str, str]] = []
        _flatten("", report, rows)
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["key", "value"])
        writer.writerows(rows)
        path.write_text(buf.getvalue())
    return path


def _base_report(command: str, cfg: RunConfig) -> dict:
    return {"schema": 1, "command": command, "config": asdict(cfg)}


# ---------------------------------------------------------------------------
# subcommands

def cmd_ovals(args) -> int:
    cfg = config_from_args(args)
    n = args.degree
    if not (3 <= n <= 20):
        print("error: degree must be between 3 and 20", file=sys.stderr)
        return EXIT_USAGE
    report = _base_report("ovals", cfg)
    report["degree"] = n
    prediction = bounds.predicted_ovals(n)
    report["prediction"] = prediction
    try:
        spec = harmonics.ovals_spec(
            n,
            eps_start=cfg.eps_start,
            eps_floor=cfg.eps_floor,
            start_resolution=cfg.resolution,
            max_resolution=cfg.max_resolution,
        )
    except harmonics.AdaptiveSearchError as exc:
        report["status"] = "adaptive-search-failed"
        report["diagnostics"] = str(exc)
        write_report(report, cfg, f"ovals_{n}")
        print(f"ovals {n}: adaptive search failed: {exc}")
        return EXIT_FAIL
    crossings = harmonics.sphere_crossings(n)
    signs = harmonics.verify_perturber_signs(spec, crossings)
    topo = nodal.refine_until_stable(spec, "sphere", cfg.resolution, cfg.max_resolution)
    brep = bounds.bound_report(n, topo.components, topo.domains)
    observed = topo.components
    if "exact" in prediction:
        count_ok = observed == prediction["exact"]
    else:
        count_ok = observed >= prediction["at_least"]
    ok = count_ok and topo.stable and signs.ok and brep.parity_ok and brep.courant_ok and brep.karpushkin_ok
    report.update(
        {
            "epsilon": spec.terms[1].weight,
            "sign_check": {"ok": signs.ok, "case": signs.case, "failures": list(signs.failures)},
            "topology": topo.report(),
            "bounds": brep.as_dict(),
            "count_ok": count_ok,
            "status": "ok" if ok else "fail",
            "spec": json.loads(harmonics.spec_to_json(spec)),
        }
    )
    write_report(report, cfg, f"ovals_{n}")
    if cfg.svg:
        markers = [(t, p, v) for (t, p, kind, v) in signs.values if not kind.startswith("pole")]
        (Path(cfg.out) / f"ovals_{n}.svg").write_text(svgout.sphere_svg(topo, markers))
    print(
        f"ovals {n}: components={observed} domains={topo.domains} "
        f"predicted={prediction} stable={topo.stable} -> {report['status']}"
    )
    return EXIT_OK if ok else EXIT_FAIL


def cmd_planar(args) -> int:
    cfg = config_from_args(args)
    try:
        spec = harmonics.PlanarEigenSpec(args.delta1, args.delta2, args.eps if args.eps is not None else 0.0, args.radius)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = _base_report("planar", cfg)
    adaptive = args.eps is None
    eps = cfg.eps_start if adaptive else args.eps
    topo = None
    while True:
        spec = harmonics.PlanarEigenSpec(args.delta1, args.delta2, eps, args.radius)
        fld = harmonics.PlanarField(spec, "h")
        topo = nodal.refine_until_stable(fld, "disc", cfg.resolution, cfg.max_resolution)
        if topo.stable or not adaptive or eps / 2.0 < cfg.eps_floor:
            break
        eps /= 2.0
    ok = topo.domains == 2 and topo.stable
    report.update(
        {
            "spec": json.loads(harmonics.spec_to_json(spec)),
            "adaptive_epsilon": adaptive,
            "topology": topo.report(),
            "status": "ok" if ok else "fail",
        }
    )
    write_report(report, cfg, "planar")
    if cfg.svg:
        zero_table = specfun.bessel_zeros(1, max(1, int(args.radius / 3.0)))
        dashed = [svgout.circle_polyline(z) for z in zero_table.zeros if z < args.radius]
        dashed.append([(-args.radius, 0.0), (args.radius, 0.0)])
        markers = []
        for k, z in enumerate(zero_table.zeros):
            if z < args.radius:
                markers.append((z, 0.0, harmonics.eval_planar(spec, z, 0.0, "g")))
                markers.append((-z, 0.0, harmonics.eval_planar(spec, -z, 0.0, "g")))
        (Path(cfg.out) / "planar.svg").write_text(svgout.disc_svg(topo, dashed, markers))
    print(
        f"planar R={args.radius}: domains={topo.domains} components={topo.components} "
        f"stable={topo.stable} eps={eps} -> {report['status']}"
    )
    return EXIT_OK if ok else EXIT_FAIL


def read_polynomial(path: str) -> tuple[complex, ...]:
    """One coefficient per line, 're im', ascending powers, monic leading 1."""
    values = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"bad coefficient line: {raw!r}")
        values.append(complex(float(parts[0]), float(parts[1])))
    if len(values) < 2:
        raise ValueError("polynomial file needs at least two coefficient lines")
    if values[-1] != 1.0 + 0.0j:
        raise ValueError("polynomial must be monic: last line must be '1 0'")
    return tuple(values[:-1])


def cmd_lewy(args) -> int:
    cfg = config_from_args(args)
    try:
        coeffs = read_polynomial(args.polyfile)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = _base_report("lewy", cfg)
    report["coefficients"] = [[c.real, c.imag] for c in coeffs]
    try:
        lift = pipeline.lewy_lift_check(
            coeffs,
            t_start=cfg.t_start or None,
            start_resolution=cfg.resolution,
            max_resolution=cfg.max_resolution,
        )
    except (combinat.SingularZeroSetError, combinat.WindowError) as exc:
        report["status"] = "singular"
        report["diagnostics"] = str(exc)
        write_report(report, cfg, "lewy")
        print(f"lewy: zero set rejected as singular: {exc}")
        return EXIT_FAIL
    report.update(
        {
            "diagram": lift.planar.diagram.text(),
            "window_radius": lift.planar.window_radius,
            "glued_components": lift.glued.components,
            "lift_scale": lift.scale,
            "sphere_components": lift.components,
            "match": lift.ok,
            "attempts": [list(a) for a in lift.attempts],
            "status": "ok" if lift.ok else "fail",
        }
    )
    write_report(report, cfg, "lewy")
    if cfg.svg:
        n = len(coeffs)
        fld = combinat._RePoly(coeffs, lift.planar.window_radius)
        disc_topo = nodal.extract_topology(
            nodal.sample(fld, "disc", min(512, cfg.max_resolution), radius=lift.planar.window_radius)
        )
        (Path(cfg.out) / "lewy_plane.svg").write_text(svgout.disc_svg(disc_topo))
        if lift.ok:
            sph = nodal.refine_until_stable(
                harmonics.LewyLiftSpec(n, coeffs, lift.scale), "sphere", cfg.resolution, cfg.max_resolution
            )
            (Path(cfg.out) / "lewy_sphere.svg").write_text(svgout.sphere_svg(sph))
    print(
        f"lewy: diagram {lift.planar.diagram.text()} glued={lift.glued.components} "
        f"sphere={lift.components} -> {report['status']}"
    )
    return EXIT_OK if lift.ok else EXIT_FAIL


def cmd_diagrams(args) -> int:
    cfg = config_from_args(args)
    n = args.n
    if not (1 <= n <= 8):
        print("error: n must be between 1 and 8", file=sys.stderr)
        return EXIT_USAGE
    if args.realize and n > 5:
        print("error: realization search supports n <= 5", file=sys.stderr)
        return EXIT_USAGE
    report = _base_report("diagrams", cfg)
    diagrams = combinat.enumerate_diagrams(n)
    rows = []
    all_ok = True
    for idx, diag in enumerate(diagrams):
        glued = combinat.glue_antipodal(diag)
        parity_ok = glued.components % 2 == n % 2
        all_ok &= parity_ok
        row = {
            "diagram": diag.text(),
            "components": glued.components,
            "parity_ok": parity_ok,
            "region_tree": glued.region_tree_code,
        }
        if args.realize:
            result = combinat.realize_diagram_search(diag, budget=cfg.budget, seed=cfg.seed + idx)
            row["realized"] = result.found
            row["trials"] = result.trials
            row["seed"] = result.seed
            if result.found:
                row["roots"] = [[r.real, r.imag] for r in result.roots]
            all_ok &= result.found
        rows.append(row)
    report.update(
        {
            "n": n,
            "count": len(diagrams),
            "catalan_ok": len(diagrams) == math.comb(2 * n, n) // (n + 1),
            "rows": rows,
            "status": "ok" if all_ok and report.get("catalan_ok", True) else "fail",
        }
    )
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / f"diagrams_{n}.txt").write_text(
        "\n".join(combinat.ChordDiagram(d.canonical()).text() for d in diagrams) + "\n"
    )
    write_report(report, cfg, f"diagrams_{n}")
    print(f"diagrams n={n}: {len(diagrams)} diagrams -> {report['status']}")
    return EXIT_OK if report["status"] == "ok" else EXIT_FAIL


def cmd_verify(args) -> int:
    cfg = config_from_args(args)
    result = verify.run_suite(seed=cfg.seed, quick=cfg.quick, fault=args.inject_fault)
    report = _base_report("verify", cfg)
    report.update(result)
    write_report(report, cfg, "verify")
    print(f"verify: {'pass' if result['ok'] else 'FAIL ' + str(result['failed'])}")
    return EXIT_OK if result["ok"] else EXIT_FAIL


def cmd_dump_zeros(args) -> int:
    cfg = config_from_args(args)
    order = {"j0": 0, "j1": 1}.get(args.function)
    if order is None:
        print("error: function must be j0 or j1", file=sys.stderr)
        return EXIT_USAGE
    try:
        table = specfun.bessel_zeros(order, args.count)
    except specfun.DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"zeros_{args.function}.csv"
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["index", "zero"])
    for idx, z in enumerate(table.zeros, start=1):
        writer.writerow([idx, repr(z)])
    path.write_text(buf.getvalue())
    print(f"dump-zeros: wrote {path}")
    return EXIT_OK


# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--resolution", type=int, default=None, help="starting grid resolution")
    p.add_argument("--max-resolution", dest="max_resolution", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--eps-start", dest="eps_start", type=float, default=None)
    p.add_argument("--t-start", dest="t_start", type=float, default=None)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--out", type=str, default=None, help="output directory")
    p.add_argument("--format", choices=("json", "csv"), default=None)
    svg = p.add_mutually_exclusive_group()
    svg.add_argument("--svg", dest="svg", action="store_true", default=None)
    svg.add_argument("--no-svg", dest="svg", action="store_false", default=None)
    p.add_argument("--quick", action="store_true", default=None)
    p.add_argument("--config", type=str, default=None, help="flat key=value config file")
    p.add_argument("--print-config", action="store_true", help="print effective config and exit")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nodaltopo",
        description="Construct eigenfunctions with prescribed nodal topology and verify the counts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ovals", help="perturbed harmonic with ~n^2/4 nodal ovals")
    p.add_argument("degree", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_ovals)

    p = sub.add_parser("planar", help="planar eigenfunction with two nodal domains")
    p.add_argument("--delta1", type=float, default=0.5)
    p.add_argument("--delta2", type=float, default=0.25)
    p.add_argument("--eps", type=float, default=None, help="fixed epsilon (default: adaptive)")
    p.add_argument("--radius", type=float, default=15.0)
    _add_common(p)
    p.set_defaults(func=cmd_planar)

    p = sub.add_parser("lewy", help="lift a planar polynomial zero set to the sphere")
    p.add_argument("polyfile", type=str)
    _add_common(p)
    p.set_defaults(func=cmd_lewy)

    p = sub.add_parser("diagrams", help="enumerate chord diagrams, glue, optionally realize")
    p.add_argument("n", type=int)
    p.add_argument("--realize", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_diagrams)

    p = sub.add_parser("verify", help="run the randomized invariant suite")
    p.add_argument("--inject-fault", dest="inject_fault", type=str, default=None,
                   help="testing hook: force a named invariant to fail")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dump-zeros", help="write a Bessel zero table as CSV")
    p.add_argument("--function", choices=("j0", "j1"), required=True)
    p.add_argument("--count", type=int, default=50)
    _add_common(p)
    p.set_defaults(func=cmd_dump_zeros)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "print_config", False):
        try:
            print_config(config_from_args(args))
        except (ValueError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        return EXIT_OK
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
