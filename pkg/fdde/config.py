#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Experiment configurations: loading, validation and figure presets."""

import json
import logging
import math
import re
from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Iterator, List, NamedTuple, Optional, Tuple, Union

import jsonlines

from .errors import ConfigError, UsageError
from .forcing import (
    ConstantForcing,
    CosineForcing,
    Forcing,
    SineForcing,
    ZeroForcing,
    load_forcing_csv,
)
from .history import ConstantHistory, History, RampHistory, load_history_csv
from .problem import LinearProblem, LinearRhs, LogisticRhs, NonlinearProblem, OperatorKind, Rhs_T
from .solvers import Mode, Scheme, SolverConfig

# Figure presets shipped with the package
PRESETS_PATH = Path(__file__).parent / "data" / "figures.jsonl"

# Commands a figure preset may run
PRESET_COMMANDS = ("exact", "compare", "pair")

NUMBER = r"\s*([-+]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+]?\d+)?)\s*"
CONST_RE = re.compile(rf"^const\({NUMBER}\)$")
SINUSOID_RE = re.compile(rf"^(cos|sin)\({NUMBER},{NUMBER}\)$")
LOGISTIC_RE = re.compile(rf"^logistic\({NUMBER},{NUMBER}\)$")

# JSON key -> (field name, accepted types, required)
SCHEMA: Dict[str, Tuple[str, tuple, bool]] = {
    "alpha": ("alpha", (int, float), True),
    "lambda": ("lam", (int, float), False),
    "tau": ("tau", (int, float), True),
    "y0": ("y0", (int, float), False),
    "history": ("history", (str,), False),
    "forcing": ("forcing", (str,), False),
    "rhs": ("rhs", (str,), False),
    "operator": ("operator", (str,), False),
    "mode": ("mode", (str,), False),
    "h": ("h", (int, float), True),
    "T": ("T", (int, float), True),
    "steps": ("steps", (list,), False),
    "output": ("output", (str,), False),
    "id": ("id", (str,), False),
}


def parse_forcing(spec: str) -> Tuple[str, Tuple[float, ...]]:
    """Split a forcing string into its kind and parameters.

    Anything that isn't "zero", "const(c)", "cos(A,w)" or "sin(A,w)" is taken
    to be the path of a sampled forcing.
    """
    if spec == "zero":
        return "zero", ()
    match = CONST_RE.match(spec)
    if match:
        return "const", (float(match.group(1)),)
    match = SINUSOID_RE.match(spec)
    if match:
        return match.group(1), (float(match.group(2)), float(match.group(3)))
    if re.match(r"^\w+\(", spec):
        raise ConfigError(f"malformed forcing: {spec}")
    return "csv", ()


def parse_rhs(spec: str) -> Tuple[str, Tuple[float, ...]]:
    """Split a right-hand side string into its kind and parameters."""
    if spec == "linear":
        return "linear", ()
    match = LOGISTIC_RE.match(spec)
    if match:
        return "logistic", (float(match.group(1)), float(match.group(2)))
    raise ConfigError(f"unknown right-hand side: {spec}")


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: problem data, operator, grid and output path.

    Relative CSV paths for the history or forcing are resolved against
    `base`, the directory of the file the config came from.
    """

    alpha: float
    tau: float
    h: float
    T: float
    y0: Optional[float] = None
    lam: Optional[float] = None
    history: str = "constant"
    forcing: str = "zero"
    rhs: str = "linear"
    operator: OperatorKind = OperatorKind.CAPUTO
    mode: Mode = Mode.EXPLICIT
    steps: Tuple[float, ...] = ()
    output: Optional[str] = None
    id: str = "experiment"
    base: Path = field(default=Path("."), compare=False)

    def __post_init__(self) -> None:
        if not 0 < self.alpha < 1:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not (self.tau > 0 and math.isfinite(self.tau)):
            raise ConfigError(f"tau must be positive, got {self.tau}")
        if not (self.h > 0 and math.isfinite(self.h)):
            raise ConfigError(f"h must be positive, got {self.h}")
        if not (self.T >= 0 and math.isfinite(self.T)):
            raise ConfigError(f"T must be non-negative, got {self.T}")
        if any(not (h > 0 and math.isfinite(h)) for h in self.steps):
            raise ConfigError(f"steps must be positive, got {list(self.steps)}")
        if self.history in ("constant", "ramp") and self.y0 is None:
            raise ConfigError(f"a {self.history} history needs y0")

        rhs, _ = parse_rhs(self.rhs)
        forcing, _ = parse_forcing(self.forcing)
        if rhs == "linear" and self.lam is None:
            raise ConfigError("a linear right-hand side needs lambda")
        if rhs == "logistic" and forcing != "zero":
            raise ConfigError("a logistic right-hand side takes no forcing")
        if self.mode is Mode.FIXED_POINT and self.operator is not OperatorKind.PHITAU:
            raise ConfigError("fixed-point mode needs operator phitau")

    @classmethod
    def from_dict(cls, data: Dict[str, Any], base: Path = Path(".")) -> "ExperimentConfig":
        """Validate a JSON object against the schema and build a config."""
        if not isinstance(data, dict):
            raise ConfigError(f"expected a JSON object, got {type(data).__name__}")
        unknown = sorted(set(data) - set(SCHEMA))
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")

        kwargs: Dict[str, Any] = {"base": Path(base)}
        for key, (name, types, required) in SCHEMA.items():
            if key not in data:
                if required:
                    raise ConfigError(f"missing required config key: {key}")
                continue
            value = data[key]
            if isinstance(value, bool) or not isinstance(value, types):
                raise ConfigError(f"{key} has the wrong type: {value!r}")
            kwargs[name] = value

        if "steps" in kwargs:
            steps = kwargs["steps"]
            if not all(isinstance(h, (int, float)) and not isinstance(h, bool) for h in steps):
                raise ConfigError(f"steps must be a list of numbers, got {steps!r}")
            kwargs["steps"] = tuple(float(h) for h in steps)
        for name in ("alpha", "lam", "tau", "y0", "h", "T"):
            if name in kwargs:
                kwargs[name] = float(kwargs[name])
        if "operator" in kwargs:
            kwargs["operator"] = _enum(OperatorKind, kwargs["operator"], "operator")
        if "mode" in kwargs:
            kwargs["mode"] = _enum(Mode, kwargs["mode"], "mode")
        return cls(**kwargs)

    def as_dict(self) -> Dict[str, Any]:
        """The config as its JSON object."""
        data = asdict(self)
        data.pop("base")
        data["lambda"] = data.pop("lam")
        data["operator"] = self.operator.value
        data["mode"] = self.mode.value
        data["steps"] = list(self.steps)
        return {k: v for k, v in data.items() if v is not None and v != []}

    def override(self, **changes: Any) -> "ExperimentConfig":
        """A copy with command-line values replacing the file's."""
        changes = {k: v for k, v in changes.items() if v is not None}
        if "operator" in changes and isinstance(changes["operator"], str):
            changes["operator"] = _enum(OperatorKind, changes["operator"], "operator")
        for name in ("alpha", "h", "T"):
            if name in changes:
                try:
                    changes[name] = float(changes[name])
                except ValueError as err:
                    raise ConfigError(f"--{name} must be a number") from err
        if changes:
            logging.debug(f"overriding {', '.join(changes)} of {self.id}")
        return replace(self, **changes)

    def _resolve(self, path: str) -> Path:
        resolved = Path(path)
        if not resolved.is_absolute():
            resolved = self.base / resolved
        if not resolved.is_file():
            raise ConfigError(f"no such file: {resolved}")
        return resolved

    def build_history(self) -> History:
        if self.history == "constant":
            return ConstantHistory(self.y0, self.tau)
        if self.history == "ramp":
            return RampHistory(self.y0, self.tau)
        history = load_history_csv(self._resolve(self.history), self.tau)
        if self.y0 is not None and not math.isclose(history.y0, self.y0, rel_tol=1e-12):
            raise ConfigError(f"y0={self.y0} does not match φ(0)={history.y0} of {self.history}")
        return history

    def build_forcing(self) -> Forcing:
        kind, params = parse_forcing(self.forcing)
        if kind == "zero":
            return ZeroForcing()
        if kind == "const":
            return ConstantForcing(*params)
        if kind == "cos":
            return CosineForcing(*params)
        if kind == "sin":
            return SineForcing(*params)
        return load_forcing_csv(self._resolve(self.forcing))

    def build_rhs(self) -> Rhs_T:
        kind, params = parse_rhs(self.rhs)
        if kind == "logistic":
            return LogisticRhs(*params)
        return LinearRhs(self.lam, self.build_forcing())

    @property
    def is_linear(self) -> bool:
        return parse_rhs(self.rhs)[0] == "linear"

    def linear_problem(self) -> LinearProblem:
        if not self.is_linear:
            raise UsageError(f"{self.id} has a nonlinear right-hand side {self.rhs}")
        return LinearProblem(
            self.alpha, self.lam, self.tau, self.build_history(), self.build_forcing()
        )

    def nonlinear_problem(self) -> NonlinearProblem:
        if self.is_linear:
            return self.linear_problem().as_nonlinear()
        return NonlinearProblem(self.alpha, self.tau, self.build_history(), self.build_rhs())

    def solver_config(self, operator: Optional[OperatorKind] = None) -> SolverConfig:
        """Solver settings for an operator, by default the configured one."""
        operator = operator or self.operator
        scheme = Scheme.GL_PHITAU if operator is OperatorKind.PHITAU else Scheme.PI_RECT
        mode = self.mode if scheme is Scheme.GL_PHITAU else Mode.EXPLICIT
        return SolverConfig(scheme, self.h, self.T, mode)


def _enum(kind, value: str, key: str):
    try:
        return kind(value)
    except ValueError as err:
        choices = ", ".join(member.value for member in kind)
        raise ConfigError(f"{key} must be one of {choices}, got {value!r}") from err


class ConfigLoader(ABC):
    """Abstract base class; loads experiment configs from a file."""

    filetype: str

    @abstractmethod
    def __call__(self, path: Path) -> Iterator[ExperimentConfig]:
        raise NotImplementedError

    def _check(self, path: Path) -> Path:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"no such config file: {path}")
        if path.suffix != self.filetype:
            raise ConfigError(f"{path} is not a {self.filetype} file")
        return path


class JsonConfigLoader(ConfigLoader):
    """Loads a single experiment from a JSON object."""

    filetype = ".json"

    def __call__(self, path: Path) -> Iterator[ExperimentConfig]:
        path = self._check(path)
        try:
            data = json.loads(path.read_text(encoding="utf8"))
        except json.JSONDecodeError as err:
            raise ConfigError(f"{path}: invalid JSON: {err}") from err
        if isinstance(data, dict):
            data.setdefault("id", path.stem)
        yield ExperimentConfig.from_dict(data, base=path.parent)


class JsonLinesConfigLoader(ConfigLoader):
    """Loads one experiment per line of a JSON lines file."""

    filetype = ".jsonl"

    def __call__(self, path: Path) -> Iterator[ExperimentConfig]:
        path = self._check(path)
        with jsonlines.open(path) as reader:
            try:
                for i, data in enumerate(reader, start=1):
                    if isinstance(data, dict):
                        data.setdefault("id", f"{path.stem}_{i}")
                    yield ExperimentConfig.from_dict(data, base=path.parent)
            except jsonlines.InvalidLineError as err:
                raise ConfigError(f"{path}: {err}") from err


def load_configs(path: Union[str, Path]) -> List[ExperimentConfig]:
    """Load and validate every experiment in a .json or .jsonl file."""
    path = Path(path)
    loader: ConfigLoader
    if path.suffix == ".jsonl":
        loader = JsonLinesConfigLoader()
    else:
        loader = JsonConfigLoader()
    configs = list(loader(path))
    logging.info(f"loaded {len(configs)} experiment configs from {path}")
    return configs


class FigurePreset(NamedTuple):
    """One output file of a figure: the command to run and its config."""

    figure: int
    id: str
    command: str
    config: ExperimentConfig

    @property
    def filename(self) -> str:
        return f"fig{self.figure}_{self.id}.csv"


def load_presets(figure: int, path: Path = PRESETS_PATH) -> List[FigurePreset]:
    """All presets of one figure, in file order."""
    presets = []
    with jsonlines.open(path) as reader:
        for line in reader:
            if line["figure"] != figure:
                continue
            if line["command"] not in PRESET_COMMANDS:
                raise ConfigError(f"unknown preset command: {line['command']}")
            config = ExperimentConfig.from_dict({"id": line["id"], **line["config"]})
            presets.append(FigurePreset(figure, line["id"], line["command"], config))
    if not presets:
        raise ConfigError(f"no presets for figure {figure}")
    return presets
