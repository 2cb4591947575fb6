"""Command-line driver: JSON config in, CSV/JSON artifacts and a manifest out.

    siciak-support COMMAND [--config PATH] [--out DIR] [--threads N] [--seed N]

Exit codes: 0 success, 2 configuration error, 64 usage error, 70 stage failure.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import platform
import sys
import time
from contextlib import contextmanager
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .entire import (CoefficientSequence, estimate_order, estimate_type,
                     levin_comparison_coefficients)
from .extension import exponential_line_data, extend, read_line_csv, LineSeriesData
from .extremal import (SolverConfig, WeightedDirectionSet, arc_directions, capacity_homog,
                       complex_sphere_directions, complex_sphere_points, psi_grid,
                       real_sphere_directions, results_to_json, write_grid_csv)
from .fields import ScalarField
from .localize import body_to_json, direction_grid, helgason_pipeline, write_polygon_csv
from .norms import ab_decompose, cross_norm_euclidean, cross_norm_via_real_parts, dist_to_CRn
from .radon import (ProfileGrid, detect_support, fourier_slice_check, radon_profile,
                    write_sinogram_csv)

EXIT_OK, EXIT_CONFIG, EXIT_USAGE, EXIT_STAGE = 0, 2, 64, 70
COMMANDS = ("cross-norm", "psi", "capacity", "extend", "order-type", "radon", "locate")


class ConfigError(ValueError):
    pass


class StageError(RuntimeError):
    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        super().__init__(f"stage {stage!r} failed: {type(cause).__name__}: {cause}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    settings: dict
    out: Path
    threads: int = 1
    seed: int = 0
    config_path: Path | None = None


@dataclass
class Run:
    cfg: RunConfig
    files: list[Path] = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    summary: list[str] = field(default_factory=list)

    @contextmanager
    def stage(self, name: str):
        t0 = time.perf_counter()
        try:
            yield
        except (ConfigError, StageError):
            raise
        except Exception as exc:
            raise StageError(name, exc) from exc
        finally:
            self.timings[name] = round(time.perf_counter() - t0, 6)

    def write_text(self, name: str, text: str) -> Path:
        path = self.cfg.out / name
        path.write_text(text, encoding="utf-8")
        self.files.append(path)
        return path

    def write_json(self, name: str, obj) -> Path:
        return self.write_text(name, json.dumps(obj, indent=2, sort_keys=True, default=_jsonable)
                               + "\n")

    def register(self, path: Path) -> Path:
        self.files.append(Path(path))
        return Path(path)

    def say(self, line: str):
        self.summary.append(line)
        print(line)


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    if isinstance(x, complex):
        return [x.real, x.imag]
    raise TypeError(f"cannot serialize {type(x).__name__}")


# -- config parsing ------------------------------------------------------------

def parse_complex(v) -> complex:
    """A number, a [re, im] pair, or a string such as "2-1.5i"."""
    if isinstance(v, bool):
        raise ConfigError(f"not a complex number: {v!r}")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
        return complex(v[0], v[1])
    if isinstance(v, str):
        s = v.strip().replace(" ", "").replace("i", "j")
        if s in ("j", "+j", "-j"):
            s = s.replace("j", "1j")
        try:
            return complex(s)
        except ValueError:
            pass
    raise ConfigError(f"not a complex number: {v!r}")


def parse_point(v) -> np.ndarray:
    if not isinstance(v, (list, tuple)) or not v:
        raise ConfigError(f"a point must be a non-empty list of coordinates, got {v!r}")
    return np.array([parse_complex(x) for x in v], dtype=complex)


def _get(d: dict, key: str, kind=None, default=...):
    if key not in d:
        if default is ...:
            raise ConfigError(f"missing required key {key!r}")
        return default
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        raise ConfigError(f"key {key!r} has the wrong type ({type(v).__name__})")
    return v


def parse_solver(d: dict | None) -> SolverConfig:
    d = d or {}
    allowed = {f.name for f in fields(SolverConfig)}
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"unknown solver keys: {sorted(unknown)}")
    try:
        return SolverConfig(**d)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"solver: {exc}") from exc


def parse_E(d: dict) -> WeightedDirectionSet:
    """E specification: arc, real sphere, complex sphere or an explicit list."""
    if not isinstance(d, dict):
        raise ConfigError("E must be an object")
    kind = _get(d, "type", str)
    w = d.get("weight", 1.0)
    try:
        if kind == "arc":
            return arc_directions(float(_get(d, "start")), float(_get(d, "stop")),
                                  int(_get(d, "count")), w)
        if kind == "sphere":
            return real_sphere_directions(int(d.get("n", 2)), int(_get(d, "count")), w)
        if kind == "complex-sphere":
            return complex_sphere_directions(int(d.get("n", 2)), int(_get(d, "count")),
                                             int(d.get("circle_copies", 4)), w)
        if kind == "explicit":
            pts = np.array([parse_point(p) for p in _get(d, "points", list)])
            return WeightedDirectionSet(pts, d.get("weights", w), label="explicit")
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"E: {exc}") from exc
    raise ConfigError(f"unknown E type {kind!r}")


def parse_field(d: dict) -> ScalarField:
    try:
        return ScalarField.from_dict(d)
    except KeyError as exc:
        raise ConfigError(f"field: missing key {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"field: {exc}") from exc


def parse_directions(d, n: int) -> np.ndarray:
    """Real unit directions from an explicit list or an arc or sphere description."""
    if isinstance(d, list):
        arr = np.asarray(d, dtype=float)
        return arr / np.linalg.norm(arr, axis=1)[:, None]
    E = parse_E(d)
    if np.any(E.points.imag):
        raise ConfigError("Radon directions must be real")
    if E.dimension != n:
        raise ConfigError(f"directions live in R^{E.dimension}, the field in R^{n}")
    return E.points.real.copy()


def _grid_points(d: dict, n: int, seed: int) -> np.ndarray:
    if "points" in d:
        return np.array([parse_point(p) for p in d["points"]])
    if "random" in d:
        rng = np.random.default_rng(seed)
        m = int(d["random"])
        z = rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n))
        r = rng.uniform(0.0, float(d.get("radius", 1.0)), size=m)
        return z / np.linalg.norm(z, axis=1)[:, None] * r[:, None]
    if "sphere" in d:
        return complex_sphere_points(n, int(d["sphere"]), seed)
    raise ConfigError("grid needs 'points', 'random' or 'sphere'")


# -- commands --------------------------------------------------------------------

def cmd_cross_norm(run: Run):
    s = run.cfg.settings
    with run.stage("parse"):
        pts = [parse_point(p) for p in _get(s, "points", list)]
    out = []
    with run.stage("cross_norm"):
        for z in pts:
            ab = ab_decompose(z)
            out.append({"point": [[v.real, v.imag] for v in z],
                        "cross_norm": cross_norm_euclidean(z),
                        "cross_norm_real_parts": cross_norm_via_real_parts(z),
                        "euclidean_norm": float(np.linalg.norm(z)),
                        "dist_to_CRn": dist_to_CRn(z),
                        "theta": ab.theta, "a": ab.a, "b": ab.b})
    run.write_json("cross_norm.json", out)
    for r in out:
        run.say(f"cross-norm {r['cross_norm']:.12g}")


def cmd_psi(run: Run):
    s = run.cfg.settings
    E = parse_E(_get(s, "E", dict))
    cfg = parse_solver(s.get("solver"))
    pts = _grid_points(_get(s, "grid", dict), E.dimension, run.cfg.seed)
    with run.stage("psi_grid"):
        res = psi_grid(E, pts, cfg, threads=run.cfg.threads)
    write_grid_csv(res, run.cfg.out / "psi_grid.csv")
    run.register(run.cfg.out / "psi_grid.csv")
    run.write_text("psi_grid.json", results_to_json(res) + "\n")
    run.say(f"psi: {len(res)} points, max {max(r.value for r in res):.6g}")


def cmd_capacity(run: Run):
    s = run.cfg.settings
    E = parse_E(_get(s, "E", dict))
    cfg = parse_solver(s.get("solver"))
    with run.stage("capacity"):
        est = capacity_homog(E, cfg, int(s.get("sphere_samples", 64)), run.cfg.seed,
                             run.cfg.threads)
    run.write_json("capacity.json", est.to_dict())
    if est.zero_flag:
        run.say("capacity: zero (solver failures, see capacity.json)")
    else:
        run.say(f"capacity {est.value:.6f}")


def _line_data(s: dict) -> LineSeriesData:
    if "line_data" in s:
        path = Path(_get(s, "line_data", str))
        if not path.exists():
            raise ConfigError(f"line data file not found: {path}")
        try:
            if path.suffix == ".csv":
                return read_line_csv(path, float(s.get("rho", 1.0)), float(s.get("C", 1.0)))
            return LineSeriesData.from_dict(json.loads(path.read_text(encoding="utf-8")))
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"line data {path}: {exc}") from exc
    if "exponential" in s:
        e = _get(s, "exponential", dict)
        E = parse_E(_get(e, "E", dict))
        return exponential_line_data(parse_point(_get(e, "a", list)), E.points, int(_get(e, "K")))
    raise ConfigError("extend needs 'line_data' (path) or 'exponential'")


def cmd_extend(run: Run):
    s = run.cfg.settings
    data = _line_data(s)
    probes = [parse_point(p) for p in s.get("probes", [])]
    cfg = parse_solver(s.get("solver")) if "solver" in s else None
    with run.stage("extend"):
        ext = extend(data, float(s.get("tol", 1e-8)), probes, cfg)
    run.write_json("extension.json", ext.to_dict())
    ok = all(b.passed for b in ext.bound_checks)
    run.say(f"extend: K={ext.max_degree}, max residual {max(ext.residuals):.3e}, "
            f"bound check {'PASS' if ok else 'FAIL'}")


def cmd_order_type(run: Run):
    s = run.cfg.settings
    with run.stage("parse"):
        if "coefficients" in s:
            seq = CoefficientSequence.from_coefficients(
                [parse_complex(c) for c in _get(s, "coefficients", list)])
        elif "log_abs" in s:
            seq = CoefficientSequence(np.asarray(_get(s, "log_abs", list), dtype=float))
        elif "comparison" in s:
            c = _get(s, "comparison", dict)
            seq = levin_comparison_coefficients(float(_get(c, "sigma")), float(_get(c, "rho")),
                                                int(_get(c, "K")))
        else:
            raise ConfigError("order-type needs 'coefficients', 'log_abs' or 'comparison'")
    window = s.get("window", "top-half")
    with run.stage("estimate"):
        order = estimate_order(seq, window)
        rho = float(s.get("rho", order.value))
        typ = estimate_type(seq, rho, window) if math.isfinite(rho) and rho > 0 else None
    run.write_json("order_type.json", {"order": order.to_dict(),
                                       "type": None if typ is None else typ.to_dict()})
    run.say(f"order {order.value:.6g} ({order.flag})"
            + ("" if typ is None else f", type {typ.value:.6g} w.r.t. rho={rho:.6g}"))


def cmd_radon(run: Run):
    s = run.cfg.settings
    fld = parse_field(_get(s, "field", dict))
    dirs = parse_directions(_get(s, "directions"), fld.dimension)
    g = s.get("grid", {})
    grid = ProfileGrid(float(g.get("h", 0.005)), g.get("p_max"))
    eps_list = s.get("eps_rel", [1e-6])
    tail = bool(s.get("extend_tail", False))
    with run.stage("radon_profile"):
        profiles = [radon_profile(fld, om, grid) for om in dirs]
    write_sinogram_csv(profiles, run.cfg.out / "sinogram.csv")
    run.register(run.cfg.out / "sinogram.csv")
    with run.stage("detect_support"):
        supports = [{"eps_rel": eps, "intervals": [
            {"omega": om.tolist(), **vars(detect_support(p, eps, tail))}
            for om, p in zip(dirs, profiles)]} for eps in eps_list]
    run.write_json("supports.json", supports)
    checks = []
    with run.stage("fourier_slice"):
        for c in s.get("slice_checks", []):
            om = np.asarray(_get(c, "omega", list), dtype=float)
            r = fourier_slice_check(fld, om / np.linalg.norm(om), float(_get(c, "s")))
            checks.append({"omega": om.tolist(), "s": c["s"], "lhs": r.lhs, "rhs": r.rhs,
                           "discrepancy": r.discrepancy})
    if checks:
        run.write_json("fourier_slice.json", checks)
    run.say(f"radon: {len(profiles)} profiles, {len(eps_list)} thresholds"
            + (f", max slice discrepancy {max(c['discrepancy'] for c in checks):.2e}"
               if checks else ""))


def cmd_locate(run: Run):
    s = run.cfg.settings
    fld = parse_field(_get(s, "field", dict))
    dirs = parse_directions(_get(s, "E"), fld.dimension)
    cfg = parse_solver(s.get("solver"))
    g = s.get("grid", {})
    grid = ProfileGrid(float(g.get("h", 0.005)), g.get("p_max"))
    count = s.get("direction_grid")
    theta = None
    if count is not None:
        theta = direction_grid(fld.dimension, int(count))
    with run.stage("helgason_pipeline"):
        rep = helgason_pipeline(fld, dirs, tuple(s.get("thresholds", [1e-6])), cfg, theta,
                                grid, refine=bool(s.get("refine", True)),
                                samples=int(s.get("samples", 500)), seed=run.cfg.seed,
                                threads=run.cfg.threads,
                                extend_tail=bool(s.get("extend_tail", False)))
    run.write_json("locate_report.json", rep.to_dict())
    for i, r in enumerate(rep.runs):
        run.write_text(f"body_{i}.json", body_to_json(r.body) + "\n")
        if r.body.polygon is not None:
            write_polygon_csv(r.body, run.cfg.out / f"polygon_{i}.csv")
            run.register(run.cfg.out / f"polygon_{i}.csv")
        if r.refined is not None:
            run.write_text(f"body_refined_{i}.json", body_to_json(r.refined) + "\n")
        run.say(f"eps_rel={r.eps_rel:g}: contained {100 * r.contained:.1f}%, "
                f"margin {r.margin:.3e}")
    run.say(f"containment verdict {rep.verdict}")


HANDLERS = {"cross-norm": cmd_cross_norm, "psi": cmd_psi, "capacity": cmd_capacity,
            "extend": cmd_extend, "order-type": cmd_order_type, "radon": cmd_radon,
            "locate": cmd_locate}


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_manifest(run: Run) -> Path:
    manifest = {
        "command": run.cfg.command,
        "config": run.cfg.settings,
        "config_path": None if run.cfg.config_path is None else str(run.cfg.config_path),
        "seed": run.cfg.seed,
        "threads": run.cfg.threads,
        "versions": {"siciak_support": __version__, "python": platform.python_version(),
                     "numpy": np.__version__, "scipy": scipy.__version__},
        "timings": run.timings,
        "summary": run.summary,
        "files": [{"path": p.name, "sha256": _sha256(p)} for p in run.files],
    }
    path = run.cfg.out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True, default=_jsonable) + "\n",
                    encoding="utf-8")
    return path


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="siciak-support",
                description="Homogeneous extremal functions, entire extension and "
                            "Radon support localization.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", type=Path, help="JSON run configuration")
    p.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--point", nargs="+", metavar="Z",
                   help="cross-norm only: coordinates such as 2 i 1-0.5i")
    return p


def load_config(args) -> RunConfig:
    if args.threads < 1:
        raise ConfigError("--threads must be >= 1")
    if args.config is not None:
        if not args.config.exists():
            raise ConfigError(f"config file not found: {args.config}")
        try:
            settings = json.loads(args.config.read_text(encoding="utf-8"))
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise ConfigError(f"malformed JSON in {args.config}: {exc}") from exc
        if not isinstance(settings, dict):
            raise ConfigError("the configuration must be a JSON object")
    else:
        settings = {}
    if args.point:
        if args.command != "cross-norm":
            raise ConfigError("--point is only accepted by cross-norm")
        settings = {**settings, "points": [list(args.point)]}
    if not settings:
        raise ConfigError("no configuration given (use --config)")
    return RunConfig(args.command, settings, args.out, args.threads, args.seed, args.config)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        cfg.out.mkdir(parents=True, exist_ok=True)
        run = Run(cfg)
        HANDLERS[cfg.command](run)
        write_manifest(run)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except StageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_STAGE
    except Exception as exc:  # anything escaping a stage is still a run failure
        print(f"internal failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_STAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
