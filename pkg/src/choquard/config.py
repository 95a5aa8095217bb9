"""JSON run configuration and sweep specification.

Run config::

    {
      "problem": {"dim": 1, "alpha": 0.5, "p": 2.0, "q": 2.5, "L": 40.0, "n": 256,
                  "potentialA": {"type": "Constant", "value": 1.0},
                  "potentialB": {"type": "Constant", "value": 1.0},
                  "zero_mode_policy": "truncated"},
      "solver": {"tol_residual": 1e-6, ...},
      "mode": "free",
      "seed": 0,
      "output_dir": "out",
      "init": "default",
      "starts": 1
    }

Sweep spec::

    {"axis": "q", "values": [1.8, 2.0, 2.2], "base": {...run config...} | "base.json"}
"""
import copy
import json
import os
from dataclasses import dataclass, field, fields

from . import potentials as pots
from .energy import check_admissible, make_problem
from .errors import ChoquardError, ConfigError
from .grid import GridSpec
from .riesz import normalize_policy
from .solver import SolverConfig

MODES = ("theorem-1.1", "theorem-1.2", "free")
INITS = ("default", "symmetric", "random")
SWEEP_AXES = ("p", "q", "alpha", "amplitude")

_SOLVER_FIELDS = {f.name for f in fields(SolverConfig)}


@dataclass
class RunConfig:
    problem: dict
    solver: SolverConfig = field(default_factory=SolverConfig)
    mode: str = "free"
    seed: int = 0
    output_dir: str = "out"
    init: str = "default"
    starts: int = 1

    def grid(self):
        pr = self.problem
        return GridSpec(int(pr["dim"]), int(pr["n"]), float(pr["L"]))

    def potential_specs(self):
        return pots.from_json(self.problem["potentialA"]), pots.from_json(self.problem["potentialB"])

    def build_problem(self):
        pr = self.problem
        grid = self.grid()
        specA, specB = self.potential_specs()
        try:
            return make_problem(
                grid,
                float(pr["alpha"]),
                float(pr["p"]),
                float(pr["q"]),
                pots.sample_potential(specA, grid),
                pots.sample_potential(specB, grid),
                pr.get("zero_mode_policy", "truncated"),
            )
        except ChoquardError as exc:
            raise ConfigError(str(exc)) from exc

    def to_json(self):
        return {
            "problem": copy.deepcopy(self.problem),
            "solver": {f: getattr(self.solver, f) for f in _SOLVER_FIELDS},
            "mode": self.mode,
            "seed": self.seed,
            "output_dir": self.output_dir,
            "init": self.init,
            "starts": self.starts,
        }


def _require(obj, key, where):
    if key not in obj:
        raise ConfigError(f"missing key {key!r} in {where}")
    return obj[key]


def parse_run_config(obj):
    if not isinstance(obj, dict):
        raise ConfigError("run config must be a JSON object")
    problem = _require(obj, "problem", "config")
    if not isinstance(problem, dict):
        raise ConfigError("'problem' must be an object")
    for key in ("dim", "alpha", "p", "q", "L", "n", "potentialA", "potentialB"):
        _require(problem, key, "problem")
    solver_raw = obj.get("solver", {}) or {}
    unknown = set(solver_raw) - _SOLVER_FIELDS
    if unknown:
        raise ConfigError(f"unknown solver settings: {sorted(unknown)}")
    mode = obj.get("mode", "free")
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}, got {mode!r}")
    init = obj.get("init", "default")
    if init not in INITS:
        raise ConfigError(f"init must be one of {INITS}, got {init!r}")
    try:
        solver = SolverConfig(**solver_raw)
        cfg = RunConfig(
            problem=dict(problem),
            solver=solver,
            mode=mode,
            seed=int(obj.get("seed", 0)),
            output_dir=str(obj.get("output_dir", "out")),
            init=init,
            starts=int(obj.get("starts", 1)),
        )
        cfg.grid()
        normalize_policy(problem.get("zero_mode_policy", "truncated"))
        specA, specB = cfg.potential_specs()
        check_admissible(int(problem["dim"]), float(problem["alpha"]), float(problem["p"]), float(problem["q"]))
    except ConfigError:
        raise
    except (ChoquardError, TypeError, ValueError, KeyError) as exc:
        raise ConfigError(str(exc)) from exc
    if cfg.starts < 1:
        raise ConfigError("starts must be >= 1")
    _check_mode(mode, specA, specB)
    return cfg


def _check_mode(mode, specA, specB):
    if mode == "theorem-1.1":
        if not isinstance(specB, pots.Constant):
            raise ConfigError("theorem-1.1 mode requires potentialB of type Constant")
        if not isinstance(specA, (pots.Constant, pots.BoundedLimit)):
            raise ConfigError("theorem-1.1 mode requires potentialA of type Constant or BoundedLimit")
    elif mode == "theorem-1.2":
        for name, spec in (("potentialA", specA), ("potentialB", specB)):
            if not isinstance(spec, (pots.Constant, pots.Periodic)):
                raise ConfigError(f"theorem-1.2 mode requires {name} of type Constant or Periodic")


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def load_run_config(path):
    return parse_run_config(read_json(path))


@dataclass
class SweepSpec:
    axis: str
    values: list
    base: dict  # raw run-config JSON; every point is re-validated

    def point_config(self, value):
        raw = copy.deepcopy(self.base)
        pr = raw["problem"]
        if self.axis in ("p", "q", "alpha"):
            pr[self.axis] = value
        else:
            pa = pr["potentialA"]
            if pa.get("type") == "Periodic":
                pa["amplitude"] = value
            elif pa.get("type") == "BoundedLimit":
                pa["well_depth"] = value
            else:
                raise ConfigError("amplitude sweeps need a Periodic or BoundedLimit potentialA")
        return parse_run_config(raw)


def load_sweep(path):
    obj = read_json(path)
    if not isinstance(obj, dict):
        raise ConfigError("sweep spec must be a JSON object")
    axis = _require(obj, "axis", "sweep")
    if axis not in SWEEP_AXES:
        raise ConfigError(f"sweep axis must be one of {SWEEP_AXES}, got {axis!r}")
    values = _require(obj, "values", "sweep")
    if not isinstance(values, list) or not values:
        raise ConfigError("sweep 'values' must be a non-empty list")
    try:
        values = [float(v) for v in values]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"sweep values must be numbers: {exc}") from exc
    base = _require(obj, "base", "sweep")
    if isinstance(base, str):
        base_path = base if os.path.isabs(base) else os.path.join(os.path.dirname(os.path.abspath(path)), base)
        base = read_json(base_path)
    parse_run_config(base)
    return SweepSpec(axis, values, base)


def default_config(**overrides):
    """The 1D reference setup used by ``verify`` when nothing else is given."""
    raw = {
        "problem": {
            "dim": 1,
            "alpha": 0.5,
            "p": 2.0,
            "q": 2.5,
            "L": 40.0,
            "n": 256,
            "potentialA": {"type": "Constant", "value": 1.0},
            "potentialB": {"type": "Constant", "value": 1.0},
            "zero_mode_policy": "truncated",
        },
        "mode": "free",
        "seed": 0,
    }
    raw.update(overrides)
    return parse_run_config(raw)


__all__ = ["RunConfig", "SweepSpec", "load_run_config", "load_sweep", "parse_run_config", "default_config"]
