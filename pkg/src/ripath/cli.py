"""Command-line frontend.

Commands wire priors, realisticity models, generators, the solver and
the diagnostics into reproducible file-based runs:

- ``sample-prior``: draw prior samples to CSV.
- ``interpolate``: optimize a path between endpoints; writes the linear
  and optimized paths (JSON), the trace (CSV), a paired report (JSON
  plus per-path CSV) and figures.
- ``ri-eval``: index values for points read from CSV.
- ``project``: endpoint-plane projection of a stored path.
- ``compare``: paired report for two stored paths.

Configuration is a JSON document; flags override config fields, and
--seed overrides every seed in the document. Exit codes: 0 success,
2 config error, 3 numeric failure, 4 I/O error.

Config schema::

    {
      "prior": {...density document...} | {"file": "prior.json"},
      "ri": {"backend": "gaussian_exact" | "gaussian_erf" | "uniform" | "kde",
             "alpha": 1.0, "floor_eps": 1e-9, "kde_n": 5000, "kde_seed": 0},
      "generator": {"builtin": "identity" | "swirl2d" | "blowup",
                    "params": {...}} | {"file": "weights.json"},
      "endpoints": {"x": [...], "y": [...]} | {"sample": true, "seed": 0},
      "solver": {"k": 50, "learning_rate": 0.1, "max_iters": 2000,
                 "grad_tol": 1e-5, "segment_norm_mode": "decoded",
                 "optimizer": "plain_gd", "seed": 0},
      "n": 1000,
      "seed": 0,
      "out": "ripath_out",
      "figures": true
    }

When no "ri" backend is named, one is chosen from the prior type:
gaussian_exact for standard_normal, uniform for uniform_box, kde
otherwise. The generator defaults to the identity warp.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import figures
from .analysis import compare, project_to_endpoint_plane
from .csvio import write_csv
from .errors import (
    ConfigError,
    DegenerateProjection,
    DegenerateSample,
    DimensionMismatch,
    NonInjectiveGenerator,
    NumericFailure,
    RipathError,
    WeightFormatError,
)
from .generators import AnalyticWarp, load_generator
from .priors import StandardNormal, UniformBox, density_from_json
from .realisticity import (
    GaussianErfApprox,
    GaussianExact,
    Kde,
    RealisticityModel,
    UniformIndicator,
    kde_fit,
)
from .solver import (
    SolverConfig,
    linear_init,
    optimize,
    path_from_json_file,
    path_to_json_file,
    write_trace_csv,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

_CONFIG_ERRORS = (
    ConfigError,
    DimensionMismatch,
    WeightFormatError,
    NonInjectiveGenerator,
    DegenerateSample,
    DegenerateProjection,
)


def _load_json(path, what: str):
    """Read a referenced JSON input; a missing file is a config error."""
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"{what} file does not exist: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{what} file is not valid JSON: {exc}") from exc


def _build_density(doc: dict):
    sect = doc.get("prior")
    if sect is None:
        raise ConfigError("config needs a 'prior' section")
    if "file" in sect:
        sect = _load_json(sect["file"], "prior")
    return density_from_json(sect)


def _build_generator(doc: dict, dim: int):
    sect = doc.get("generator", {"builtin": "identity"})
    if "file" in sect:
        if not os.path.exists(sect["file"]):
            raise ConfigError(f"generator file does not exist: {sect['file']}")
        gen = load_generator(sect["file"])
    elif "builtin" in sect:
        gen = AnalyticWarp(sect["builtin"], dim, **sect.get("params", {}))
    else:
        raise ConfigError("generator section needs 'builtin' or 'file'")
    if gen.in_dim != dim:
        raise ConfigError(
            f"generator input dimension {gen.in_dim} does not match prior dimension {dim}"
        )
    return gen


def _build_model(doc: dict, density, seed_override) -> RealisticityModel:
    sect = doc.get("ri", {})
    backend_name = sect.get("backend")
    if backend_name is None:
        if isinstance(density, StandardNormal):
            backend_name = "gaussian_exact"
        elif isinstance(density, UniformBox):
            backend_name = "uniform"
        else:
            backend_name = "kde"
    if backend_name == "gaussian_exact":
        if not isinstance(density, StandardNormal):
            raise ConfigError("backend 'gaussian_exact' requires a standard_normal prior")
        backend = GaussianExact(density.dim)
    elif backend_name == "gaussian_erf":
        if not isinstance(density, StandardNormal):
            raise ConfigError("backend 'gaussian_erf' requires a standard_normal prior")
        backend = GaussianErfApprox(density.dim)
    elif backend_name == "uniform":
        if not isinstance(density, UniformBox):
            raise ConfigError("backend 'uniform' requires a uniform_box prior")
        backend = UniformIndicator(density)
    elif backend_name == "kde":
        n = int(sect.get("kde_n", 5000))
        seed = seed_override if seed_override is not None else int(sect.get("kde_seed", 0))
        backend = Kde(kde_fit(density, n, seed), density)
    else:
        raise ConfigError(f"unknown ri backend {backend_name!r}")
    return RealisticityModel(
        backend,
        alpha=float(sect.get("alpha", 1.0)),
        floor_eps=float(sect.get("floor_eps", 1e-9)),
    )


def _build_solver_config(doc: dict) -> SolverConfig:
    sect = dict(doc.get("solver", {}))
    ri_sect = doc.get("ri", {})
    sect.setdefault("alpha", float(ri_sect.get("alpha", 1.0)))
    sect.setdefault("floor_eps", float(ri_sect.get("floor_eps", 1e-9)))
    extra = set(sect) - set(SolverConfig.__dataclass_fields__)
    if extra:
        raise ConfigError(f"unknown solver fields {sorted(extra)}")
    return SolverConfig(**sect)


def _resolve_endpoints(doc: dict, density, seed_override):
    sect = doc.get("endpoints")
    if sect is None:
        raise ConfigError("config needs an 'endpoints' section")
    if "x" in sect and "y" in sect:
        x = np.asarray(sect["x"], dtype=float)
        y = np.asarray(sect["y"], dtype=float)
    elif sect.get("sample"):
        seed = seed_override if seed_override is not None else int(sect.get("seed", 0))
        pts = density.sample(2, seed)
        x, y = pts[0], pts[1]
    else:
        raise ConfigError("endpoints section needs 'x' and 'y', or 'sample': true")
    if x.shape != (density.dim,) or y.shape != (density.dim,):
        raise ConfigError(
            f"endpoints must have the prior dimension {density.dim}, "
            f"got shapes {x.shape} and {y.shape}"
        )
    return x, y


def _out_dir(doc: dict) -> str:
    out = doc.get("out", "ripath_out")
    os.makedirs(out, exist_ok=True)
    return out


def _read_points_csv(path, dim: int) -> np.ndarray:
    try:
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except FileNotFoundError as exc:
        raise ConfigError(f"points file does not exist: {path}") from exc
    if not lines:
        raise ConfigError(f"points file is empty: {path}")
    rows = []
    for idx, line in enumerate(lines):
        cells = line.split(",")
        try:
            rows.append([float(c) for c in cells])
        except ValueError:
            if idx == 0:
                continue  # header row
            raise ConfigError(f"points file line {idx + 1} is not numeric: {line!r}")
    if not rows:
        raise ConfigError(f"points file has no numeric rows: {path}")
    pts = np.asarray(rows, dtype=float)
    if pts.shape[1] != dim:
        raise DimensionMismatch(f"points have dimension {pts.shape[1]}, expected {dim}")
    return pts


def cmd_sample_prior(doc: dict, seed_override) -> int:
    density = _build_density(doc)
    n = doc.get("n")
    if n is None or int(n) < 1:
        raise ConfigError(f"sample-prior needs a positive 'n', got {n!r}")
    seed = seed_override if seed_override is not None else int(doc.get("seed", 0))
    samples = density.sample(int(n), seed)
    out = _out_dir(doc)
    target = os.path.join(out, "samples.csv")
    write_csv(target, tuple(f"z{j}" for j in range(density.dim)), samples)
    print(f"wrote {target}")
    return EXIT_OK


def cmd_ri_eval(doc: dict, points_path, seed_override) -> int:
    density = _build_density(doc)
    model = _build_model(doc, density, seed_override)
    pts = _read_points_csv(points_path, model.dim)
    values = np.atleast_1d(model.ri(pts))
    out = _out_dir(doc)
    target = os.path.join(out, "ri_values.csv")
    write_csv(target, ("index", "ri"), list(enumerate(values)))
    print(f"wrote {target}")
    return EXIT_OK


def cmd_interpolate(doc: dict, seed_override) -> int:
    density = _build_density(doc)
    model = _build_model(doc, density, seed_override)
    generator = _build_generator(doc, density.dim)
    x, y = _resolve_endpoints(doc, density, seed_override)
    config = _build_solver_config(doc)

    linear = linear_init(x, y, config.k)
    optimized, trace = optimize(linear, model, generator, config)
    report = compare(linear, optimized, model, generator, config)

    out = _out_dir(doc)
    written = []
    for name, obj in (("path_linear.json", linear), ("path_optimized.json", optimized)):
        target = os.path.join(out, name)
        path_to_json_file(obj, target)
        written.append(target)
    target = os.path.join(out, "trace.csv")
    write_trace_csv(trace, target)
    written.append(target)
    target = os.path.join(out, "report.json")
    with open(target, "w") as fh:
        json.dump(report.to_json(), fh)
    written.append(target)
    pairs = (("report_linear.csv", report.first), ("report_optimized.csv", report.second))
    for name, rep in pairs:
        target = os.path.join(out, name)
        rep.write_csv(target)
        written.append(target)
    if doc.get("figures", True):
        written.extend(
            figures.render_run_figures(
                out, [("linear", report.first), ("optimized", report.second)], trace
            )
        )

    print(
        f"initial energy {trace.initial_energy:.6g}, "
        f"final energy {report.second.energy:.6g}, "
        f"converged {trace.converged} after {trace.iterations_run} iterations"
    )
    print(
        f"curve_ri linear {report.first.curve_ri:.6g}, "
        f"optimized {report.second.curve_ri:.6g}"
    )
    for target in written:
        print(f"wrote {target}")
    return EXIT_OK


def cmd_project(doc: dict, path_file) -> int:
    if not os.path.exists(path_file):
        raise ConfigError(f"path file does not exist: {path_file}")
    path = path_from_json_file(path_file)
    proj = project_to_endpoint_plane(path)
    out = _out_dir(doc)
    target = os.path.join(out, "projection.csv")
    write_csv(
        target,
        ("index", "proj_x", "proj_y"),
        [(i, proj[i, 0], proj[i, 1]) for i in range(len(proj))],
    )
    print(f"wrote {target}")
    return EXIT_OK


def cmd_compare(doc: dict, first_file, second_file, seed_override) -> int:
    for f in (first_file, second_file):
        if not os.path.exists(f):
            raise ConfigError(f"path file does not exist: {f}")
    first = path_from_json_file(first_file)
    second = path_from_json_file(second_file)
    density = _build_density(doc)
    model = _build_model(doc, density, seed_override)
    generator = _build_generator(doc, density.dim)
    config = _build_solver_config(doc)
    report = compare(first, second, model, generator, config)

    out = _out_dir(doc)
    written = []
    target = os.path.join(out, "report.json")
    with open(target, "w") as fh:
        json.dump(report.to_json(), fh)
    written.append(target)
    for name, rep in (("report_first.csv", report.first), ("report_second.csv", report.second)):
        target = os.path.join(out, name)
        rep.write_csv(target)
        written.append(target)
    if doc.get("figures", True):
        written.extend(
            figures.render_run_figures(out, [("first", report.first), ("second", report.second)])
        )
    print(f"curve_ri first {report.first.curve_ri:.6g}, second {report.second.curve_ri:.6g}")
    for target in written:
        print(f"wrote {target}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ripath",
        description="Realisticity index of latent points and curves, and "
        "index-maximizing interpolation paths.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--out", help="output directory (default ripath_out)")
        p.add_argument("--seed", type=int, help="override every seed in the config")
        p.add_argument("--k", type=int, help="override the segment count")
        p.add_argument("--alpha", type=float, help="override the rescaling factor")
        p.add_argument(
            "--norm-mode",
            choices=("decoded", "latent"),
            help="override the segment norm mode",
        )
        p.add_argument("--no-figures", action="store_true", help="skip figure rendering")

    p = sub.add_parser("sample-prior", help="draw prior samples to CSV")
    add_common(p)
    p.add_argument("--n", type=int, help="number of samples")

    p = sub.add_parser("interpolate", help="optimize a path between endpoints")
    add_common(p)

    p = sub.add_parser("ri-eval", help="index values for points from CSV")
    add_common(p)
    p.add_argument("--points", required=True, help="CSV file of points, one per row")

    p = sub.add_parser("project", help="endpoint-plane projection of a stored path")
    add_common(p)
    p.add_argument("--path", required=True, help="path JSON file")

    p = sub.add_parser("compare", help="paired report for two stored paths")
    add_common(p)
    p.add_argument("--first", required=True, help="first path JSON file")
    p.add_argument("--second", required=True, help="second path JSON file")

    return parser


def _apply_overrides(doc: dict, args) -> dict:
    if args.out is not None:
        doc["out"] = args.out
    if args.k is not None:
        doc.setdefault("solver", {})["k"] = args.k
    if args.alpha is not None:
        doc.setdefault("ri", {})["alpha"] = args.alpha
    if args.norm_mode is not None:
        doc.setdefault("solver", {})["segment_norm_mode"] = args.norm_mode
    if args.no_figures:
        doc["figures"] = False
    if getattr(args, "n", None) is not None:
        doc["n"] = args.n
    return doc


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = {} if args.config is None else _load_json(args.config, "config")
        if not isinstance(doc, dict):
            raise ConfigError("config file must contain a JSON object")
        doc = _apply_overrides(doc, args)
        seed_override = args.seed
        if args.command == "sample-prior":
            return cmd_sample_prior(doc, seed_override)
        if args.command == "interpolate":
            return cmd_interpolate(doc, seed_override)
        if args.command == "ri-eval":
            return cmd_ri_eval(doc, args.points, seed_override)
        if args.command == "project":
            return cmd_project(doc, args.path)
        return cmd_compare(doc, args.first, args.second, seed_override)
    except _CONFIG_ERRORS as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericFailure as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except RipathError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
