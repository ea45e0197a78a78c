"""Command line front end: ``paraslant analyze|validate <config.toml>``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from collections import Counter
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .config import AnalysisConfig, ConfigError, ModelSpec, load_config
from .errors import GeometryError
from .expr import ExprError, ScalarField
from .models import (
    Model,
    block_sum_model,
    build_example1,
    build_example2,
    build_flat_standard,
    leaf_surface,
)
from .para_structures import StructureField, integrability_report, validate_structure
from .slant_analysis import (
    CaseTag,
    ImmersedSurface,
    analyze_point,
    conformal_rescale,
    lagrangian_residual,
)

CSV_COLUMNS = [
    "u1", "u2", "x1", "x2", "x3", "x4", "lambda", "epsilon", "case", "a0",
    "res_slant", "res_gAA", "res_phiA", "res_phi_reconstruct", "res_lagrangian", "error_code",
]
# error codes that are findings rather than faults
SOFT_CODES = {"", "NOT_SLANT"}


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    v = float(v) + 0.0
    return f"{v:.12g}"


def _jsonable(v):
    if v is None or isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return int(v)
    return float(f"{float(v) + 0.0:.12g}")


@dataclass
class AnalysisResult:
    records: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    columns: list[str] = field(default_factory=lambda: list(CSV_COLUMNS))

    @property
    def hard_errors(self) -> int:
        n = sum(1 for r in self.records if r.get("error_code", "") not in SOFT_CODES)
        return n + (1 if self.summary.get("error_code") else 0)


def build_model(spec: ModelSpec) -> Model:
    if spec.name == "flat_standard":
        model = build_flat_standard()
    elif spec.name == "example1":
        lam = 2.0 if spec.lam is None else float(spec.lam)
        model = build_example1(lam, spec.case, spec.epsilon, spec.a0)
    elif spec.name == "example2":
        kwargs = {} if spec.lam is None else {"lambda_field": spec.lam}
        model = build_example2(case=spec.case, chart=_chart(spec.chart), **kwargs)
    else:
        model = block_sum_model(build_model(spec.blocks[0]), build_model(spec.blocks[1]))
    if spec.phi is not None or spec.metric is not None:
        s = model.structure
        phi = np.asarray(spec.phi, dtype=float) if spec.phi is not None else None
        g = np.asarray(spec.metric, dtype=float) if spec.metric is not None else None
        for m in (phi, g):
            if m is not None and m.shape != (s.dim, s.dim):
                raise ConfigError(f"override matrix has shape {m.shape}, expected {(s.dim, s.dim)}")
        new = StructureField(
            s.dim,
            (lambda x: g.copy()) if g is not None else s.metric_at,
            (lambda x: phi.copy()) if phi is not None else s.phi_at,
            (lambda x: np.zeros((s.dim,) * 3)) if phi is not None else s.phi_deriv_at,
            s.h, s.domain, s.name,
        )
        model = Model(model.name, new, model.surface, model.case, model.lam, model.epsilon, model.a0,
                      model.frame_fields, model.chart)
    return model


def _chart(chart):
    if chart is None:
        return None
    arr = np.asarray(chart, dtype=float)
    return arr[:, 0], arr[:, 1]


def build_surface(cfg: AnalysisConfig, model: Model) -> ImmersedSurface:
    spec = cfg.surface
    if spec is None:
        if model.surface is None:
            raise ConfigError("model has no default surface; add a [surface] section")
        return model.surface
    if spec.map is None:
        phi_t = spec.inner_phi if spec.inner_phi is not None else [[0.0, 1.0], [1.0, 0.0]]
        return leaf_surface(spec.leaf, phi_t)
    dim = model.structure.dim
    if len(spec.map) != dim:
        raise ConfigError(f"surface map needs {dim} components")
    comps = [ScalarField(src, dim=2, prefix="u") for src in spec.map]
    inner_phi = None
    if spec.inner_phi is not None:
        phi_t = np.asarray(spec.inner_phi, dtype=float)
        inner_phi = lambda u: phi_t.copy()  # noqa: E731
    return ImmersedSurface(
        2,
        lambda u: np.array([c(u) for c in comps]),
        lambda u: np.array([c.gradient(u) for c in comps]),
        None,
        inner_phi,
        "explicit",
    )


def _axis(spec) -> np.ndarray:
    lo, hi, n = spec
    return np.array([lo]) if n == 1 else np.linspace(lo, hi, n)


def grid_points(grid: dict, names: list[str]) -> list[np.ndarray]:
    axes = [_axis(grid.get(n, (0.0, 0.0, 1))) for n in names]
    return [np.array(p) for p in product(*axes)]


def _setup(cfg: AnalysisConfig):
    model = build_model(cfg.model)
    ambient = model.structure
    surf = build_surface(cfg, model) if cfg.surface is not None or model.surface is not None else None
    if cfg.conformal_factor is not None:
        factor = ScalarField(cfg.conformal_factor, dim=ambient.dim)
        ambient, surf = conformal_rescale(ambient, surf, factor)
    if cfg.tolerances.h != ambient.h:
        ambient = StructureField(ambient.dim, ambient.metric_at, ambient.phi_at, ambient.phi_deriv_at,
                                 cfg.tolerances.h, ambient.domain, ambient.name)
    return model, ambient, surf


def run_analysis(cfg: AnalysisConfig, seed: int = 0) -> AnalysisResult:
    """One record per grid point plus a summary block."""
    result = AnalysisResult()
    tol = cfg.tolerances
    try:
        model, ambient, surf = _setup(cfg)
        if ambient.dim != 4:
            raise ConfigError("analyze supports 4-dimensional ambient spaces only")
        if surf is None:
            raise ConfigError("analyze needs a surface")
    except (GeometryError, ExprError, ConfigError) as exc:
        result.summary = {"error_code": getattr(exc, "code", "CONFIG"), "error": str(exc), "verdict": "error"}
        return result

    mapped = []
    for u in grid_points(cfg.grid, ["u1", "u2"]):
        rec = dict.fromkeys(CSV_COLUMNS)
        rec["u1"], rec["u2"] = u
        rec["error_code"] = ""
        try:
            x = np.asarray(surf.map_at(u), dtype=float)
            rec.update({f"x{i + 1}": x[i] for i in range(4)})
            mapped.append(x)
            r = analyze_point(ambient, surf, u, tol.slant, tol.unit, tol.zero)
            rec["lambda"] = r.lam
            rec["epsilon"] = r.epsilon
            rec["case"] = r.case_tag.value
            rec["a0"] = r.a0
            res = r.residuals
            rec["res_slant"] = res.get("slant")
            rec["res_gAA"] = res.get("gAA")
            rec["res_phiA"] = res.get("phiA")
            rec["res_phi_reconstruct"] = res.get("phi_reconstruct")
            rec["res_lagrangian"] = lagrangian_residual(ambient, surf, u)
            if r.case_tag is CaseTag.NOT_SLANT:
                rec["error_code"] = "NOT_SLANT"
        except GeometryError as exc:
            rec["error_code"] = exc.code
        except ExprError:
            rec["error_code"] = "EVAL_ERROR"
        result.records.append(rec)
    result.summary = _summary(result.records, ambient, mapped, cfg, seed, model.name)
    return result


def _summary(records, ambient, points, cfg, seed, name) -> dict:
    slant = [r for r in records if r["error_code"] == ""]
    lams = np.array([r["lambda"] for r in slant], dtype=float)
    hist = Counter(r["case"] for r in records if r["case"])
    res_cols = ["res_slant", "res_gAA", "res_phiA", "res_phi_reconstruct"]
    max_res = max((r[c] for r in slant for c in res_cols if r[c] is not None), default=0.0)
    summary = {
        "model": name,
        "n_points": len(records),
        "n_slant": len(slant),
        "lambda_min": float(lams.min()) if lams.size else None,
        "lambda_max": float(lams.max()) if lams.size else None,
        "lambda_mean": float(lams.mean()) if lams.size else None,
        "case_histogram": {tag.value: hist[tag.value] for tag in CaseTag if hist[tag.value]},
        "max_residual": max_res,
        "error_codes": dict(sorted(Counter(r["error_code"] for r in records if r["error_code"]).items())),
    }
    try:
        rep = integrability_report(ambient, points, random_pairs=cfg.random_pairs, seed=seed,
                                   tau_zero=cfg.tolerances.zero)
        summary["integrability"] = rep.as_dict()
    except GeometryError as exc:
        summary["integrability"] = {"error_code": exc.code, "error": str(exc)}
    summary["verdict"] = "slant everywhere" if records and len(slant) == len(records) else "not slant everywhere"
    return summary


def run_validate(cfg: AnalysisConfig, seed: int = 0) -> AnalysisResult:
    """Structure validation and integrability over an ambient point grid."""
    result = AnalysisResult()
    try:
        model, ambient, surf = _setup(cfg)
    except (GeometryError, ExprError, ConfigError) as exc:
        result.summary = {"error_code": getattr(exc, "code", "CONFIG"), "error": str(exc), "verdict": "error"}
        return result
    names = [f"x{i + 1}" for i in range(ambient.dim)]
    result.columns = names + ["res_phi_squared", "res_eigen_rank", "res_compatibility", "passed", "error_code"]
    if any(n in cfg.grid for n in names) or surf is None or surf.param_dim != 2:
        points = grid_points(cfg.grid, names)
    else:
        points = [np.asarray(surf.map_at(u), dtype=float) for u in grid_points(cfg.grid, ["u1", "u2"])]
    good = []
    failing: set[str] = set()
    for x in points:
        rec = dict.fromkeys(result.columns)
        rec.update({n: x[i] for i, n in enumerate(names)})
        rec["error_code"] = ""
        try:
            rep = validate_structure(ambient, x, cfg.tolerances.struct)
            for k, v in rep.residuals.items():
                rec[f"res_{k}"] = v
            rec["passed"] = "true" if rep.passed else "false"
            if rep.passed:
                good.append(x)
            else:
                failing.update(rep.failing())
                rec["error_code"] = "INVALID_STRUCTURE"
        except GeometryError as exc:
            rec["passed"] = "false"
            rec["error_code"] = exc.code
        except ExprError:
            rec["passed"] = "false"
            rec["error_code"] = "EVAL_ERROR"
        result.records.append(rec)
    summary = {
        "model": model.name,
        "n_points": len(points),
        "n_passed": len(good),
        "failing_residuals": sorted(failing),
    }
    for k in ("res_phi_squared", "res_eigen_rank", "res_compatibility"):
        vals = [r[k] for r in result.records if r[k] is not None]
        summary[f"max_{k[4:]}"] = max(vals) if vals else None
    try:
        rep = integrability_report(ambient, good, random_pairs=cfg.random_pairs, seed=seed,
                                   tau_zero=cfg.tolerances.zero)
        summary["integrability"] = rep.as_dict()
    except GeometryError as exc:
        summary["integrability"] = {"error_code": exc.code, "error": str(exc)}
    summary["verdict"] = "valid" if len(good) == len(points) else "invalid"
    result.summary = summary
    return result


def render(result: AnalysisResult, fmt_name: str) -> str:
    if fmt_name == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(result.columns)
        for r in result.records:
            w.writerow([fmt(r.get(c)) for c in result.columns])
        return buf.getvalue()
    doc = {
        "records": [{c: _jsonable(r.get(c)) for c in result.columns} for r in result.records],
        "summary": _json_tree(result.summary),
    }
    return json.dumps(doc, indent=2) + "\n"


def _json_tree(v):
    if isinstance(v, dict):
        return {k: _json_tree(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_tree(x) for x in v]
    return _jsonable(v)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="paraslant", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (("analyze", "pointwise slant analysis over a surface grid"),
                            ("validate", "structure validation and integrability over a grid")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config")
        p.add_argument("--out", help="output path (default: config value or stdout)")
        p.add_argument("--format", choices=["csv", "json"])
        p.add_argument("--seed", type=int, default=0, help="seed for randomized vector-pair sampling")
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
    except (OSError, ConfigError, ExprError) as exc:
        print(f"paraslant: {exc}", file=sys.stderr)
        return 2
    runner = run_analysis if args.command == "analyze" else run_validate
    result = runner(cfg, seed=args.seed)
    text = render(result, args.format or cfg.output.format)
    path = args.out or cfg.output.path
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    summary = result.summary
    if "error" in summary:
        print(f"paraslant: {summary['error_code']}: {summary['error']}", file=sys.stderr)
        return 2
    print(f"paraslant: {summary['verdict']} ({summary['n_points']} points)", file=sys.stderr)
    if args.command == "validate":
        return 0 if summary["verdict"] == "valid" else 1
    return 1 if result.hard_errors else 0


if __name__ == "__main__":
    sys.exit(main())
