"""TOML analysis configuration.

Example::

    [model]
    name = "example2"          # flat_standard | example1 | example2 | block_sum
    case = "phi1"
    lambda = "2 + 0.5*sin(x1)" # number, or expression in x1..x4 for example2;
                               # omitted: 2 for example1, 2 + 0.5*sin(x1) for example2
    epsilon = 1                # example1, case phi3
    a0 = 0.0                   # example1, case phi3
    chart = [[-1, 1], [-1, 1], [-1, 1], [-1, 1]]
    # phi = [[...]]            # optional constant phi override (validation experiments)
    # blocks = [{name = "flat_standard"}, {name = "example1", lambda = 2}]   # block_sum

    [surface]
    leaf = [0.0, 0.0]          # the plane x3 = c3, x4 = c4
    # map = ["u1", "u2", "0.1*u1^2", "0"]   # explicit parametrization instead of a leaf
    # inner_phi = [[0, 1], [1, 0]]          # omitted with `map`: induced from phi

    [grid]
    u1 = [-1.0, 1.0, 9]        # lo, hi, count
    u2 = [-1.0, 1.0, 9]
    # x1 = [-1.0, 1.0, 3]      # ambient axes, used by `validate`

    [tolerances]
    struct = 1e-8
    slant = 1e-6
    zero = 1e-9
    unit = 1e-6
    h = 1e-5

    [conformal]
    factor = "exp(x1)"         # optional metric multiplier, must stay positive

    [integrability]
    random_pairs = 4

    [output]
    format = "csv"             # csv | json
    path = "report.csv"        # omitted: stdout
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ModelSpec:
    name: str = "flat_standard"
    case: str = "phi1"
    lam: float | str | None = None
    epsilon: int = 1
    a0: float = 0.0
    chart: list[list[float]] | None = None
    phi: list[list[float]] | None = None
    metric: list[list[float]] | None = None
    blocks: list["ModelSpec"] = field(default_factory=list)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ModelSpec":
        d = dict(d)
        known = {"name", "case", "lambda", "epsilon", "a0", "chart", "phi", "metric", "blocks"}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown model keys: {sorted(extra)}")
        blocks = [cls.from_dict(b) for b in d.pop("blocks", [])]
        lam = d.pop("lambda", None)
        name = d.pop("name", "flat_standard")
        if name not in ("flat_standard", "example1", "example2", "block_sum"):
            raise ConfigError(f"unknown model {name!r}")
        if name == "block_sum" and len(blocks) != 2:
            raise ConfigError("block_sum needs exactly two blocks")
        return cls(name=name, lam=lam, blocks=blocks, **d)


@dataclass(frozen=True)
class SurfaceSpec:
    leaf: tuple[float, float] = (0.0, 0.0)
    map: list[str] | None = None
    inner_phi: list[list[float]] | None = None


@dataclass(frozen=True)
class Tolerances:
    struct: float = 1e-8
    slant: float = 1e-6
    zero: float = 1e-9
    unit: float = 1e-6
    h: float = 1e-5


@dataclass(frozen=True)
class OutputSpec:
    format: str = "csv"
    path: str | None = None


@dataclass(frozen=True)
class AnalysisConfig:
    model: ModelSpec = field(default_factory=ModelSpec)
    surface: SurfaceSpec | None = field(default_factory=SurfaceSpec)
    grid: dict[str, tuple[float, float, int]] = field(default_factory=dict)
    tolerances: Tolerances = field(default_factory=Tolerances)
    output: OutputSpec = field(default_factory=OutputSpec)
    conformal_factor: str | None = None
    random_pairs: int = 4


def _grid(d: dict) -> dict[str, tuple[float, float, int]]:
    out = {}
    for name, spec in d.items():
        if not (isinstance(spec, list) and len(spec) == 3):
            raise ConfigError(f"grid axis {name!r} must be [lo, hi, count]")
        lo, hi, count = spec
        if int(count) != count or count < 1:
            raise ConfigError(f"grid axis {name!r}: count must be an integer >= 1")
        out[name] = (float(lo), float(hi), int(count))
    return out


def config_from_dict(d: dict[str, Any]) -> AnalysisConfig:
    unknown = set(d) - {"model", "surface", "grid", "tolerances", "output", "conformal", "integrability"}
    if unknown:
        raise ConfigError(f"unknown sections: {sorted(unknown)}")
    try:
        model = ModelSpec.from_dict(d.get("model", {}))
        surface = None
        if "surface" in d or model.name != "block_sum":
            s = d.get("surface", {})
            surface = SurfaceSpec(tuple(float(c) for c in s.get("leaf", (0.0, 0.0))), s.get("map"),
                                  s.get("inner_phi"))
        tol = Tolerances(**{k: float(v) for k, v in d.get("tolerances", {}).items()})
        out = OutputSpec(**d.get("output", {}))
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    if any(v <= 0 for v in vars(tol).values()):
        raise ConfigError("tolerances must be positive")
    if out.format not in ("csv", "json"):
        raise ConfigError(f"unknown output format {out.format!r}")
    return AnalysisConfig(
        model=model,
        surface=surface,
        grid=_grid(d.get("grid", {})),
        tolerances=tol,
        output=out,
        conformal_factor=d.get("conformal", {}).get("factor"),
        random_pairs=int(d.get("integrability", {}).get("random_pairs", 4)),
    )


def load_config(path: str | Path) -> AnalysisConfig:
    with open(path, "rb") as fh:
        try:
            data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
    return config_from_dict(data)
