"""Experiment configuration shared by the command-line driver and scripts."""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from .grid import DyadicGrid, WeightFamilySpec

SWEEP_FAMILIES = ("two_valued", "power")
DEFAULT_T_GRID = tuple(2.0 ** k for k in range(1, 17))
DEFAULT_ALPHA_GRID = (-0.9, -0.8, -0.7, -0.6, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75)


@dataclass(frozen=True)
class ExperimentConfig:
    depth: int = 8
    weight: WeightFamilySpec | None = None
    shift: dict = field(default_factory=lambda: {"kind": "petermichl", "m": 0, "n": 1})
    p: float = 2.0
    theorems: tuple = ()
    sweep_family: str = "two_valued"
    sweep_values: tuple = ()
    seed: int = 42
    budget: int = 0
    tau: float | None = None
    fmt: str = "json"
    stability: float = 0.2

    def __post_init__(self):
        DyadicGrid(self.depth)
        if self.sweep_family not in SWEEP_FAMILIES:
            raise ValueError(f"sweep family must be one of {SWEEP_FAMILIES}")
        if self.fmt not in ("json", "csv"):
            raise ValueError("format must be json or csv")
        if not self.p > 1:
            raise ValueError("p must exceed 1")
        if self.weight is not None:
            self.weight.validate(DyadicGrid(self.depth))

    @property
    def grid(self) -> DyadicGrid:
        return DyadicGrid(self.depth)

    def sweep_grid(self) -> tuple:
        if self.sweep_values:
            return tuple(self.sweep_values)
        return DEFAULT_T_GRID if self.sweep_family == "two_valued" else DEFAULT_ALPHA_GRID

    def with_overrides(self, **kwargs) -> "ExperimentConfig":
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


def load_config(path: str | Path | None) -> ExperimentConfig:
    """Read a JSON experiment file.

    Recognized keys: ``depth``, ``weight`` (weight-spec object), ``shift``
    (shift-spec object), ``p``, ``theorems``, ``sweep`` (``{"family",
    "values"}``), ``seed``, ``budget``, ``tau``, ``tolerances``
    (``{"stability"}``).
    """
    if path is None:
        return ExperimentConfig()
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ValueError("config must be a JSON object")
    kwargs = {}
    if "depth" in raw:
        kwargs["depth"] = int(raw["depth"])
    if "weight" in raw:
        kwargs["weight"] = WeightFamilySpec.from_dict(raw["weight"])
    if "shift" in raw:
        kwargs["shift"] = dict(raw["shift"])
    for key in ("p", "tau"):
        if key in raw:
            kwargs[key] = float(raw[key])
    for key in ("seed", "budget"):
        if key in raw:
            kwargs[key] = int(raw[key])
    if "theorems" in raw:
        kwargs["theorems"] = tuple(raw["theorems"])
    if "sweep" in raw:
        kwargs["sweep_family"] = raw["sweep"].get("family", "two_valued")
        kwargs["sweep_values"] = tuple(float(v) for v in raw["sweep"].get("values", ()))
    if "tolerances" in raw:
        kwargs["stability"] = float(raw["tolerances"].get("stability", 0.2))
    try:
        return ExperimentConfig(**kwargs)
    except (TypeError, KeyError) as exc:
        raise ValueError(f"malformed config: {exc}") from exc
