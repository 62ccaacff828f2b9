"""Batch command-line front end.

Subcommands evaluate the geometry at points (metric, embed), run
geodesics and means (geodesic, connect, distance, mean, diagonal),
scan curvature over grids (curvature-grid), reproduce the survey
figures as SVG/CSV pairs (figures), and run the cross-module
validation suite (validate).

Configuration is one flat JSON object (RunConfig).  A config file via
--config supplies defaults and individual flags override it; unknown
top-level keys and unknown per-command parameters are rejected so a
config that parses always round-trips losslessly.  Identical configs
produce byte-identical artifacts: CSV with a header row and floats at
17 significant digits, JSON, and SVG via the in-house emitter.

Exit codes: 0 success, 1 validation failures, 2 bad usage or config,
3 numerical failure (a JSON error record goes to stderr).
"""

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .curvature import curvature_grid, principal_curvatures
from .embedding import embed, normal
from .errors import NumericalError
from .families import family
from .frechet import frechet_mean, frechet_objective
from .geodesics import (
    diagonal_geodesic,
    exp_map,
    geodesic_ivp,
    log_map,
)
from .geometry import as_point, christoffel, dirichlet_pdf, metric, metric_inverse, norm
from .svgplot import HeatMap, Series, emit_svg
from .validate import FAIL, PASS, run_validation

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

_FAMILIES = ("trigamma", "rational")

# Per-command parameter allowlists with the canonical type of each entry.
# from_dict coerces values to these types, so a parsed config serializes
# back to the exact dict it came from.
_PARAM_KINDS = {
    "metric": {"point": "floats", "quantity": "choice:metric,inverse,christoffel"},
    "geodesic": {
        "point": "floats",
        "velocity": "floats",
        "time": "float",
        "samples": "int",
    },
    "connect": {"src": "floats", "dst": "floats", "samples": "int"},
    "distance": {"src": "floats", "dst": "floats"},
    "mean": {"points": "pointlist", "weights": "floats", "tol": "float"},
    "curvature-grid": {
        "lo": "float",
        "hi": "float",
        "res": "int",
        "z": "float",
        "log": "bool",
    },
    "embed": {"point": "floats"},
    "diagonal": {"x0": "float", "xdot0": "float", "time": "float", "samples": "int"},
    "validate": {"quick": "bool"},
    "figures": {
        "which": "choice:2,3,4,all",
        "center": "floats",
        "radii": "floats",
        "res": "int",
        "z": "float",
    },
}

# Formats each command can emit; the first entry is the default.
_FORMATS = {
    "metric": ("json", "csv"),
    "geodesic": ("csv", "json"),
    "connect": ("csv", "json", "svg"),
    "distance": ("json", "csv"),
    "mean": ("json", "csv"),
    "curvature-grid": ("csv", "json", "svg"),
    "embed": ("json", "csv"),
    "diagonal": ("csv", "json"),
    "validate": ("json",),
    "figures": ("svg",),
}

_TOP_KEYS = ("command", "family", "dimension", "params", "output", "format", "seed")


class ConfigError(ValueError):
    """A config dict or flag combination that cannot form a RunConfig."""


def _coerce(command, name, value):
    """Normalize one parameter value to its canonical type."""
    kind = _PARAM_KINDS[command][name]
    label = f"{command} parameter {name!r}"
    if kind == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{label} must be a number, got {value!r}")
        v = float(value)
        if not math.isfinite(v):
            raise ConfigError(f"{label} must be finite")
        return v
    if kind == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{label} must be an integer, got {value!r}")
        return int(value)
    if kind == "bool":
        if not isinstance(value, bool):
            raise ConfigError(f"{label} must be true or false, got {value!r}")
        return bool(value)
    if kind == "floats":
        if not isinstance(value, (list, tuple)) or not value:
            raise ConfigError(f"{label} must be a non-empty list of numbers")
        try:
            out = [_coerce_number(v) for v in value]
        except ConfigError:
            raise ConfigError(f"{label} must contain only finite numbers") from None
        return out
    if kind == "pointlist":
        if not isinstance(value, (list, tuple)) or not value:
            raise ConfigError(f"{label} must be a non-empty list of points")
        out = []
        for row in value:
            if not isinstance(row, (list, tuple)) or not row:
                raise ConfigError(f"{label} entries must be lists of numbers")
            try:
                out.append([_coerce_number(v) for v in row])
            except ConfigError:
                raise ConfigError(f"{label} must contain only finite numbers") from None
        return out
    if kind.startswith("choice:"):
        allowed = kind.split(":", 1)[1].split(",")
        if value not in allowed:
            raise ConfigError(f"{label} must be one of {allowed}, got {value!r}")
        return str(value)
    raise AssertionError(f"unhandled parameter kind {kind!r}")


def _coerce_number(v):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError("not a number")
    f = float(v)
    if not math.isfinite(f):
        raise ConfigError("not finite")
    return f


def _infer_dimension(command, params):
    """Ambient dimension implied by the parameters, or None."""
    for key in ("point", "src"):
        if key in params:
            return len(params[key])
    if "points" in params:
        return len(params["points"][0])
    if command in ("curvature-grid", "diagonal", "figures"):
        return 2
    return None


@dataclass(frozen=True)
class RunConfig:
    """One fully resolved invocation: command, family, parameters, output.

    Instances are only built through ``from_dict``, which rejects unknown
    keys at both levels and normalizes every value, so ``to_dict`` is a
    lossless inverse.
    """

    command: str
    family: str = "trigamma"
    dimension: int = 2
    params: dict = field(default_factory=dict)
    output: str = None
    format: str = "json"
    seed: int = 0

    @classmethod
    def from_dict(cls, raw):
        if not isinstance(raw, dict):
            raise ConfigError(f"config must be a JSON object, got {type(raw).__name__}")
        unknown = sorted(set(raw) - set(_TOP_KEYS))
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")

        command = raw.get("command")
        if command not in _PARAM_KINDS:
            raise ConfigError(
                f"command must be one of {sorted(_PARAM_KINDS)}, got {command!r}"
            )
        family_name = raw.get("family", "trigamma")
        if family_name not in _FAMILIES:
            raise ConfigError(f"family must be one of {_FAMILIES}, got {family_name!r}")

        params_raw = raw.get("params", {})
        if not isinstance(params_raw, dict):
            raise ConfigError("params must be an object")
        allowed = _PARAM_KINDS[command]
        bad = sorted(set(params_raw) - set(allowed))
        if bad:
            raise ConfigError(
                f"unknown parameters for {command}: {', '.join(bad)} "
                f"(allowed: {', '.join(sorted(allowed))})"
            )
        params = {k: _coerce(command, k, v) for k, v in params_raw.items()}

        if "src" in params and "dst" in params:
            if len(params["src"]) != len(params["dst"]):
                raise ConfigError("src and dst must have the same dimension")
        if "points" in params:
            lens = {len(row) for row in params["points"]}
            if len(lens) > 1:
                raise ConfigError("all points must have the same dimension")

        inferred = _infer_dimension(command, params)
        if "dimension" in raw:
            dim = raw["dimension"]
            if isinstance(dim, bool) or not isinstance(dim, int):
                raise ConfigError(f"dimension must be an integer, got {dim!r}")
            if inferred is not None and dim != inferred:
                raise ConfigError(
                    f"dimension {dim} contradicts parameters (imply {inferred})"
                )
        else:
            dim = inferred if inferred is not None else 2

        fmt = raw.get("format", _FORMATS[command][0])
        if fmt not in _FORMATS[command]:
            raise ConfigError(
                f"format for {command} must be one of {_FORMATS[command]}, got {fmt!r}"
            )

        output = raw.get("output")
        if output is not None and not isinstance(output, str):
            raise ConfigError(f"output must be a path string, got {output!r}")

        seed = raw.get("seed", 0)
        if isinstance(seed, bool) or not isinstance(seed, int):
            raise ConfigError(f"seed must be an integer, got {seed!r}")

        return cls(
            command=command,
            family=family_name,
            dimension=int(dim),
            params=params,
            output=output,
            format=fmt,
            seed=int(seed),
        )

    def to_dict(self):
        return {
            "command": self.command,
            "family": self.family,
            "dimension": self.dimension,
            "params": dict(self.params),
            "output": self.output,
            "format": self.format,
            "seed": self.seed,
        }


# ---------------------------------------------------------------------------
# argument parsing


def _floats_arg(text):
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not values or not all(math.isfinite(v) for v in values):
        raise argparse.ArgumentTypeError(f"expected finite numbers, got {text!r}")
    return values


def _range_arg(text):
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI numbers, got {text!r}")
    return lo, hi


def build_parser():
    ap = argparse.ArgumentParser(
        prog="dirgeo",
        description="Fisher-Rao geometry of Dirichlet parameter space: "
        "metrics, geodesics, means, curvature scans, figures.",
    )
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--family", choices=_FAMILIES, help="metric-generating family")
        p.add_argument("--config", metavar="FILE", help="JSON config supplying defaults")
        p.add_argument("-o", "--output", metavar="PATH", help="artifact path (default stdout)")
        p.add_argument("--format", choices=("csv", "json", "svg"))
        p.add_argument("--seed", type=int, help="seed for randomized scans")
        return p

    p = add("metric", "evaluate the metric tensor at a point")
    p.add_argument("--point", type=_floats_arg, metavar="X1,..,XN")
    p.add_argument("--quantity", choices=("metric", "inverse", "christoffel"))

    p = add("geodesic", "integrate a geodesic from a point and velocity")
    p.add_argument("--point", type=_floats_arg, metavar="X1,..,XN")
    p.add_argument("--velocity", type=_floats_arg, metavar="V1,..,VN")
    p.add_argument("--time", type=float, metavar="T")
    p.add_argument("--samples", type=int)

    p = add("connect", "solve the geodesic between two points")
    p.add_argument("--from", dest="src", type=_floats_arg, metavar="X1,..,XN")
    p.add_argument("--to", dest="dst", type=_floats_arg, metavar="X1,..,XN")
    p.add_argument("--samples", type=int)

    p = add("distance", "geodesic distance between two points")
    p.add_argument("--from", dest="src", type=_floats_arg, metavar="X1,..,XN")
    p.add_argument("--to", dest="dst", type=_floats_arg, metavar="X1,..,XN")

    p = add("mean", "Fréchet mean of a set of points")
    p.add_argument(
        "--point",
        dest="points",
        action="append",
        type=_floats_arg,
        metavar="X1,..,XN",
        help="repeat once per input point",
    )
    p.add_argument("--weights", type=_floats_arg, metavar="W1,..,WK")
    p.add_argument("--tol", type=float)

    p = add("curvature-grid", "Gaussian curvature over a 2-D grid")
    p.add_argument("--range", dest="grid_range", type=_range_arg, metavar="LO:HI")
    p.add_argument("--res", type=int, help="grid points per axis")
    p.add_argument("--z", type=float, help="report K3(x,y,z) - K2(x,y) instead of K2")
    p.add_argument("--spacing", choices=("log", "linear"))

    p = add("embed", "isometric coordinates in Minkowski space")
    p.add_argument("--point", type=_floats_arg, metavar="X1,..,XN")

    p = add("diagonal", "diagonal geodesic by quadrature")
    p.add_argument("--x0", type=float)
    p.add_argument("--xdot0", type=float)
    p.add_argument("--time", type=float, metavar="T")
    p.add_argument("--samples", type=int)

    p = add("validate", "run the cross-module validation suite")
    p.add_argument("--quick", action="store_const", const=True, help="smaller scan sizes")

    p = add("figures", "write the survey figures as SVG/CSV pairs")
    p.add_argument("--which", choices=("2", "3", "4", "all"))
    p.add_argument("--center", type=_floats_arg, metavar="X,Y", help="ball center (figure 2)")
    p.add_argument("--radii", type=_floats_arg, metavar="R1,..,RK", help="ball radii (figure 2)")
    p.add_argument("--res", type=int, help="heatmap resolution (figures 2 and 4)")
    p.add_argument("--z", type=float, help="third coordinate for the gap map (figure 4)")

    return ap


def _config_from_args(args):
    """Merge config-file defaults with flag overrides into a RunConfig."""
    merged = {}
    if args.config is not None:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}")
        try:
            merged = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}")
        if not isinstance(merged, dict):
            raise ConfigError("config file must hold a JSON object")
        if "command" in merged and merged["command"] != args.command:
            raise ConfigError(
                f"config file is for {merged['command']!r}, invoked as {args.command!r}"
            )

    merged["command"] = args.command
    for key in ("family", "output", "format", "seed"):
        value = getattr(args, key)
        if value is not None:
            merged[key] = value

    params = dict(merged.get("params", {}) or {})
    for name in _PARAM_KINDS[args.command]:
        if name in ("lo", "hi", "log"):
            continue  # set through --range / --spacing below
        value = getattr(args, name, None)
        if value is not None:
            params[name] = value
    if getattr(args, "grid_range", None) is not None:
        params["lo"], params["hi"] = args.grid_range
    if getattr(args, "spacing", None) is not None:
        params["log"] = args.spacing == "log"
    merged["params"] = params

    return RunConfig.from_dict(merged)


# ---------------------------------------------------------------------------
# artifact writers


def _fmt(v):
    return f"{float(v):.17g}"


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, str) else _fmt(v) for v in row])
    return buf.getvalue()


def _json_text(payload):
    return json.dumps(payload, indent=2) + "\n"


def _write(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, newline="\n")
        print(f"wrote {path}", file=sys.stderr)


def _listify(a):
    return np.asarray(a, dtype=np.float64).tolist()


def _path_rows(path):
    for k in range(path.times.size):
        yield [path.times[k], *path.points[k], *path.velocities[k]]


def _path_header(n):
    return ["t", *[f"x{i + 1}" for i in range(n)], *[f"v{i + 1}" for i in range(n)]]


def _path_payload(cfg, path, extra=None):
    payload = {
        "config": cfg.to_dict(),
        "times": _listify(path.times),
        "points": _listify(path.points),
        "velocities": _listify(path.velocities),
        "energy": float(path.energy),
    }
    if extra:
        payload.update(extra)
    return payload


# ---------------------------------------------------------------------------
# commands


def _cmd_metric(cfg, mf):
    params = cfg.params
    if "point" not in params:
        raise ConfigError("metric requires --point")
    x = as_point(params["point"])
    quantity = params.get("quantity", "metric")
    if quantity == "metric":
        values = metric(mf, x)
    elif quantity == "inverse":
        values = metric_inverse(mf, x)
    else:
        values = christoffel(mf, x)

    if cfg.format == "json":
        _write(
            cfg.output,
            _json_text(
                {"config": cfg.to_dict(), "quantity": quantity, "values": _listify(values)}
            ),
        )
    else:
        if values.ndim == 2:
            header = ["i", "j", "value"]
            rows = [
                [str(i), str(j), values[i, j]]
                for i in range(values.shape[0])
                for j in range(values.shape[1])
            ]
        else:
            header = ["k", "i", "j", "value"]
            rows = [
                [str(k), str(i), str(j), values[k, i, j]]
                for k in range(values.shape[0])
                for i in range(values.shape[1])
                for j in range(values.shape[2])
            ]
        _write(cfg.output, _csv_text(header, rows))
    return EXIT_OK


def _cmd_geodesic(cfg, mf):
    params = cfg.params
    if "point" not in params or "velocity" not in params:
        raise ConfigError("geodesic requires --point and --velocity")
    x = as_point(params["point"])
    v = np.asarray(params["velocity"], dtype=np.float64)
    T = params.get("time", 1.0)
    samples = params.get("samples", 101)
    path = geodesic_ivp(mf, x, v, T, samples=samples)
    if cfg.format == "json":
        _write(cfg.output, _json_text(_path_payload(cfg, path)))
    else:
        _write(cfg.output, _csv_text(_path_header(x.size), _path_rows(path)))
    return EXIT_OK


def _beta_density_series(label, p, grid, dashed=False):
    dens = np.array([dirichlet_pdf(p, (u, 1.0 - u)) for u in grid])
    return Series(label, grid, dens, dashed=dashed)


def _connect_svg(path):
    """Beta densities interpolated along a 2-D connecting geodesic."""
    grid = np.linspace(0.002, 0.998, 499)
    m = path.times.size
    picks = np.linspace(0, m - 1, 7).round().astype(int)
    curves = []
    for k in picks:
        t = path.times[k]
        interior = 0 < k < m - 1
        curves.append(
            _beta_density_series(f"t = {t:.2f}", path.points[k], grid, dashed=interior)
        )
    return emit_svg(
        curves,
        title="beta densities along the connecting geodesic",
        xlabel="u",
        ylabel="density",
    )


def _cmd_connect(cfg, mf):
    params = cfg.params
    if "src" not in params or "dst" not in params:
        raise ConfigError("connect requires --from and --to")
    src = as_point(params["src"])
    dst = as_point(params["dst"])
    samples = params.get("samples", 101)
    if cfg.format == "svg" and src.size != 2:
        raise ConfigError("connect --format svg needs 2-D points (beta densities)")

    shot = log_map(mf, src, dst)
    v = shot.initial_velocity.components
    path = geodesic_ivp(mf, src, v, 1.0, samples=samples)
    dist = math.sqrt(path.energy)

    if cfg.format == "svg":
        _write(cfg.output, _connect_svg(path))
        return EXIT_OK
    if cfg.format == "json":
        extra = {
            "distance": dist,
            "initial_velocity": _listify(v),
            "iterations": shot.iterations,
            "residual": shot.residual,
        }
        _write(cfg.output, _json_text(_path_payload(cfg, path, extra)))
        return EXIT_OK

    _write(cfg.output, _csv_text(_path_header(src.size), _path_rows(path)))
    # The CSV form of a 2-D solve also drops the density figure alongside.
    if src.size == 2 and cfg.output is not None:
        _write(str(Path(cfg.output).with_suffix(".svg")), _connect_svg(path))
    return EXIT_OK


def _cmd_distance(cfg, mf):
    params = cfg.params
    if "src" not in params or "dst" not in params:
        raise ConfigError("distance requires --from and --to")
    src = as_point(params["src"])
    dst = as_point(params["dst"])
    shot = log_map(mf, src, dst)
    v = shot.initial_velocity.components
    dist = norm(metric(mf, src), v)
    record = {
        "distance": float(dist),
        "initial_velocity": _listify(v),
        "iterations": shot.iterations,
        "residual": float(shot.residual),
    }
    if cfg.format == "json":
        _write(cfg.output, _json_text({"config": cfg.to_dict(), **record}))
    else:
        header = ["distance", "iterations", "residual"]
        _write(cfg.output, _csv_text(header, [[dist, str(shot.iterations), shot.residual]]))
    return EXIT_OK


def _cmd_mean(cfg, mf):
    params = cfg.params
    if "points" not in params:
        raise ConfigError("mean requires at least one --point")
    points = [as_point(row) for row in params["points"]]
    weights = params.get("weights")
    if weights is not None and len(weights) != len(points):
        raise ConfigError("weights must match the number of points")
    tol = params.get("tol", 1e-8)
    result = frechet_mean(mf, points, weights=weights, tol=tol)
    record = {
        "mean": _listify(result.mean),
        "iterations": result.iterations,
        "final_gradient_norm": float(result.final_gradient_norm),
        "variance": float(result.variance),
    }
    if cfg.format == "json":
        _write(cfg.output, _json_text({"config": cfg.to_dict(), **record}))
    else:
        n = result.mean.size
        header = [*[f"mean{i + 1}" for i in range(n)], "iterations", "gradient_norm", "variance"]
        row = [*result.mean, str(result.iterations), result.final_gradient_norm, result.variance]
        _write(cfg.output, _csv_text(header, [row]))
    return EXIT_OK


def _grid_csv(axis, values):
    rows = (
        [axis[j], axis[i], values[i, j]]
        for i in range(axis.size)
        for j in range(axis.size)
    )
    return _csv_text(["x", "y", "value"], rows)


def _cmd_curvature_grid(cfg, mf):
    params = cfg.params
    lo = params.get("lo", 1e-3)
    hi = params.get("hi", 1e3)
    res = params.get("res", 200)
    z = params.get("z")
    log_spacing = params.get("log", True)
    axis, values = curvature_grid(mf, lo, hi, res, log_spacing=log_spacing, z=z)

    kmin = float(values.min())
    imin = np.unravel_index(int(values.argmin()), values.shape)
    print(
        f"grid minimum {_fmt(kmin)} at (x={_fmt(axis[imin[1]])}, y={_fmt(axis[imin[0]])})",
        file=sys.stderr,
    )

    if cfg.format == "json":
        payload = {
            "config": cfg.to_dict(),
            "axis": _listify(axis),
            "values": _listify(values),
            "min": kmin,
        }
        _write(cfg.output, _json_text(payload))
    elif cfg.format == "svg":
        name = "K3 - K2" if z is not None else "Gaussian curvature"
        svg = emit_svg(
            heatmap=HeatMap(axis, axis, values),
            title=name,
            xlabel="x",
            ylabel="y",
            xlog=log_spacing,
            ylog=log_spacing,
        )
        _write(cfg.output, svg)
    else:
        _write(cfg.output, _grid_csv(axis, values))
    return EXIT_OK


def _cmd_embed(cfg, mf):
    params = cfg.params
    if "point" not in params:
        raise ConfigError("embed requires --point")
    x = as_point(params["point"])
    y = embed(mf, x)
    nu = normal(mf, x)
    pcs = principal_curvatures(mf, x)
    if cfg.format == "json":
        payload = {
            "config": cfg.to_dict(),
            "coordinates": _listify(y),
            "normal": _listify(nu),
            "principal_curvatures": _listify(pcs),
        }
        _write(cfg.output, _json_text(payload))
    else:
        rows = []
        for name, vec in (("coordinate", y), ("normal", nu), ("principal_curvature", pcs)):
            rows += [[name, str(i), vec[i]] for i in range(len(vec))]
        _write(cfg.output, _csv_text(["quantity", "index", "value"], rows))
    return EXIT_OK


def _cmd_diagonal(cfg, mf):
    params = cfg.params
    if "x0" not in params or "xdot0" not in params:
        raise ConfigError("diagonal requires --x0 and --xdot0")
    T = params.get("time", 1.0)
    samples = params.get("samples", 101)
    path = diagonal_geodesic(mf, params["x0"], params["xdot0"], T, samples=samples)
    if cfg.format == "json":
        _write(cfg.output, _json_text(_path_payload(cfg, path)))
    else:
        _write(cfg.output, _csv_text(_path_header(2), _path_rows(path)))
    return EXIT_OK


def _cmd_validate(cfg, mf):
    results = run_validation(seed=cfg.seed, quick=cfg.params.get("quick", False))
    width = max(len(r.name) for r in results)
    for r in results:
        print(f"{r.name:<{width}}  {r.status:<6}  {r.detail}")
    n_fail = sum(1 for r in results if r.status == FAIL)
    n_pass = sum(1 for r in results if r.status == PASS)
    print(f"{n_pass} passed, {n_fail} failed, {len(results) - n_pass - n_fail} reported")
    if cfg.output is not None:
        payload = {
            "config": cfg.to_dict(),
            "results": [
                {"name": r.name, "status": r.status, "detail": r.detail} for r in results
            ],
        }
        _write(cfg.output, _json_text(payload))
    return EXIT_VALIDATION if n_fail else EXIT_OK


# ---------------------------------------------------------------------------
# figures


def _metric_unit(mf, x, w):
    g = metric(mf, x)
    return w / norm(g, w)


def _figure_balls(mf, center, radii, n_dirs=64):
    """Geodesic circles around a common center, one curve per radius."""
    c = as_point(center)
    thetas = np.linspace(0.0, 2.0 * np.pi, n_dirs, endpoint=False)
    curves = []
    rows = []
    for r in radii:
        pts = np.empty((n_dirs + 1, 2))
        for k, th in enumerate(thetas):
            u = _metric_unit(mf, c, np.array([math.cos(th), math.sin(th)]))
            pts[k] = exp_map(mf, c, r * u)
            rows.append([r, th, pts[k, 0], pts[k, 1]])
        pts[-1] = pts[0]  # close the loop
        curves.append(Series(f"r = {r:g}", pts[:, 0], pts[:, 1]))
    svg = emit_svg(
        curves,
        title=f"geodesic balls around ({c[0]:g}, {c[1]:g})",
        xlabel="x",
        ylabel="y",
    )
    return svg, _csv_text(["radius", "theta", "x", "y"], rows)


def _figure_curvature(mf, lo, hi, res):
    axis, values = curvature_grid(mf, lo, hi, res, log_spacing=True)
    svg = emit_svg(
        heatmap=HeatMap(axis, axis, values),
        title="Gaussian curvature",
        xlabel="x",
        ylabel="y",
        xlog=True,
        ylog=True,
    )
    return svg, _grid_csv(axis, values)


def _figure_interpolation(mf):
    src = as_point([2.0, 5.0])
    dst = as_point([2.0, 2.0])
    shot = log_map(mf, src, dst)
    path = geodesic_ivp(mf, src, shot.initial_velocity.components, 1.0, samples=101)
    svg = _connect_svg(path)

    grid = np.linspace(0.002, 0.998, 499)
    picks = np.linspace(0, path.times.size - 1, 7).round().astype(int)
    rows = []
    for k in picks:
        t = path.times[k]
        for u in grid:
            rows.append([t, u, dirichlet_pdf(path.points[k], (u, 1.0 - u))])
    return svg, _csv_text(["t", "u", "density"], rows)


def _figure_means(mf):
    inputs = [as_point(p) for p in ([2.0, 5.0], [2.0, 2.0], [5.0, 1.0])]
    result = frechet_mean(mf, inputs, tol=1e-9)
    euclid = np.mean(inputs, axis=0)

    grid = np.linspace(0.002, 0.998, 499)
    curves = [
        _beta_density_series(f"({p[0]:g}, {p[1]:g})", p, grid, dashed=True) for p in inputs
    ]
    curves.append(_beta_density_series("Fréchet mean", result.mean, grid))
    curves.append(_beta_density_series("Euclidean mean", euclid, grid, dashed=True))
    svg = emit_svg(
        curves,
        title="mean of three beta distributions",
        xlabel="u",
        ylabel="density",
    )

    rows = []
    for label, p in [(f"input ({q[0]:g}, {q[1]:g})", q) for q in inputs] + [
        ("frechet", result.mean),
        ("euclidean", euclid),
    ]:
        for u in grid:
            rows.append([label, u, dirichlet_pdf(p, (u, 1.0 - u))])
    return svg, _csv_text(["curve", "u", "density"], rows)


def _figure_gap(mf, res, z):
    axis, diff = curvature_grid(mf, 0.005, 0.1, res, log_spacing=False, z=z)
    svg = emit_svg(
        heatmap=HeatMap(axis, axis, diff),
        title=f"K3(x, y, {z:g}) - K2(x, y)",
        xlabel="x",
        ylabel="y",
    )
    return svg, _grid_csv(axis, diff)


def _cmd_figures(cfg, mf):
    params = cfg.params
    which = params.get("which", "all")
    outdir = Path(cfg.output) if cfg.output is not None else Path("figures")
    outdir.mkdir(parents=True, exist_ok=True)

    def emit(stem, svg, csv_text):
        for suffix, text in ((".svg", svg), (".csv", csv_text)):
            p = outdir / (stem + suffix)
            p.write_text(text, newline="\n")
            print(f"wrote {p}", file=sys.stderr)

    if which in ("2", "all"):
        center = params.get("center", [1.0, 1.0])
        radii = params.get("radii", [0.5, 1.0, 1.5, 2.0])
        emit("balls", *_figure_balls(mf, center, radii))
        emit("curvature", *_figure_curvature(mf, 1e-3, 1e3, params.get("res", 200)))
    if which in ("3", "all"):
        emit("interpolation", *_figure_interpolation(mf))
        emit("means", *_figure_means(mf))
    if which in ("4", "all"):
        emit(
            "dimension_gap",
            *_figure_gap(mf, params.get("res", 60), params.get("z", 0.01)),
        )
    return EXIT_OK


_COMMANDS = {
    "metric": _cmd_metric,
    "geodesic": _cmd_geodesic,
    "connect": _cmd_connect,
    "distance": _cmd_distance,
    "mean": _cmd_mean,
    "curvature-grid": _cmd_curvature_grid,
    "embed": _cmd_embed,
    "diagonal": _cmd_diagonal,
    "validate": _cmd_validate,
    "figures": _cmd_figures,
}


def run(cfg):
    """Execute a resolved RunConfig; returns the process exit code."""
    mf = family(cfg.family)
    return _COMMANDS[cfg.command](cfg, mf)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return run(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, TypeError) as exc:
        # Domain violations in parameters are config mistakes, not numerics.
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        record = {"error": type(exc).__name__, "message": str(exc)}
        for attr in ("reason", "t", "iterations", "residual"):
            if hasattr(exc, attr):
                value = getattr(exc, attr)
                record[attr] = float(value) if isinstance(value, float) else value
        print(json.dumps(record), file=sys.stderr)
        return EXIT_NUMERICAL
