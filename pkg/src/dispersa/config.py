"""Experiment configuration: a small YAML schema, parsing, validation.

Schema (all sections optional unless a command requires them):

.. code-block:: yaml

    command: verify-identities        # optional; must match the CLI command
    grid: {n: 1024, length: 100.0}
    datum: {kind: gaussian, amplitude: 1.0, width: 1.0, center: 0.0}
    solver: {k: 2, dt: 0.00390625, T: 0.25, n_picard: 25,
             picard_tol: 1.0e-10, c0: 3.9, dealias: true, T_cap: 100.0}
    scans:
      t: [0.1, 0.5, 1.0]
      alpha: [0.25, 0.5, 0.75]
      beta: [0.125, 0.25]
      sr: [[1.0, 0.25], [1.0, 0.5]]
    experiment:
      T: 1.0
      t_window: [5.0, 10.0, 20.0]
      n_times: 801
    output: {format: csv}
    seed: 0
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace

import yaml

from .errors import ValidationError
from .solver import SolverConfig
from .spectral import Grid1D, PresetDatum

COMMANDS = ("verify-identities", "solve", "persistence",
            "phi-scan", "strichartz", "calibrate")

_DATUM_KEYS = ("kind", "amplitude", "width", "center", "scale", "speed", "mode")
_SOLVER_KEYS = ("k", "dt", "T", "n_picard", "picard_tol", "c0", "dealias",
                "T_cap", "blowup_ceiling")


@dataclass(frozen=True)
class ExperimentConfig:
    command: str | None = None
    grid_n: int = 1024
    grid_length: float = 100.0
    datum: PresetDatum = field(default_factory=lambda: PresetDatum("gaussian"))
    solver: SolverConfig = field(default_factory=SolverConfig)
    t_scan: tuple = ()
    alpha_scan: tuple = ()
    beta_scan: tuple = ()
    sr_pairs: tuple = ()              # tuples (s, r) with r >= 0
    experiment_T: float = 1.0
    t_windows: tuple = (5.0, 10.0, 20.0)
    n_times: int = 801
    output_format: str = "csv"
    seed: int = 0

    def grid(self) -> Grid1D:
        return Grid1D(self.grid_n, self.grid_length)

    # -- validation --------------------------------------------------------
    def validate(self, command: str) -> None:
        if command not in COMMANDS:
            raise ValidationError(f"command unknown: {command!r}")
        if self.command is not None and self.command != command:
            raise ValidationError(
                f"config.command = {self.command!r} does not match {command!r}")
        if self.output_format not in ("csv", "json"):
            raise ValidationError(
                f"output.format must be csv|json, got {self.output_format!r}")
        self.grid()  # raises with the offending key baked in
        self.datum.validate(self.grid())
        for s, r in self.sr_pairs:
            if r < 0:
                raise ValidationError(f"scans.sr: weight power r must be >= 0, got {r}")
        if command in ("verify-identities", "phi-scan"):
            if not self.t_scan:
                raise ValidationError(f"scans.t must be nonempty for {command}")
            if not self.alpha_scan:
                raise ValidationError(f"scans.alpha must be nonempty for {command}")
        if command == "persistence" and not self.sr_pairs:
            raise ValidationError("scans.sr must be nonempty for persistence")
        if command == "strichartz":
            if not self.t_windows:
                raise ValidationError("experiment.t_window must be nonempty for strichartz")
            if self.n_times < 2:
                raise ValidationError("experiment.n_times must be >= 2")
        if command == "calibrate" and not self.t_scan:
            raise ValidationError("scans.t must be nonempty for calibrate")

    # -- serialization -----------------------------------------------------
    def to_dict(self) -> dict:
        out = {
            "grid": {"n": self.grid_n, "length": self.grid_length},
            "datum": {k: v for k, v in asdict(self.datum).items()},
            "solver": {k: v for k, v in asdict(self.solver).items()},
            "scans": {
                "t": list(self.t_scan),
                "alpha": list(self.alpha_scan),
                "beta": list(self.beta_scan),
                "sr": [list(p) for p in self.sr_pairs],
            },
            "experiment": {
                "T": self.experiment_T,
                "t_window": list(self.t_windows),
                "n_times": self.n_times,
            },
            "output": {"format": self.output_format},
            "seed": self.seed,
        }
        if self.command is not None:
            out["command"] = self.command
        return out


def _require_mapping(value, key):
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise ValidationError(f"config section {key!r} must be a mapping")
    return value


def _reject_unknown(mapping: dict, allowed, section: str) -> None:
    unknown = sorted(set(mapping) - set(allowed))
    if unknown:
        raise ValidationError(f"unknown key(s) in {section}: {', '.join(unknown)}")


def parse_config(text: str) -> ExperimentConfig:
    """Parse the YAML schema above into an ExperimentConfig.

    Unknown keys are rejected so typos surface as validation errors (exit
    code 2) rather than silently ignored settings.
    """
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ValidationError(f"config is not valid YAML: {exc}") from exc
    raw = _require_mapping(raw, "<root>")
    _reject_unknown(raw, ("command", "grid", "datum", "solver", "scans",
                          "experiment", "output", "seed"), "<root>")

    grid = _require_mapping(raw.get("grid"), "grid")
    _reject_unknown(grid, ("n", "length"), "grid")
    datum_raw = _require_mapping(raw.get("datum"), "datum")
    _reject_unknown(datum_raw, _DATUM_KEYS, "datum")
    solver_raw = _require_mapping(raw.get("solver"), "solver")
    _reject_unknown(solver_raw, _SOLVER_KEYS, "solver")
    scans = _require_mapping(raw.get("scans"), "scans")
    _reject_unknown(scans, ("t", "alpha", "beta", "sr"), "scans")
    experiment = _require_mapping(raw.get("experiment"), "experiment")
    _reject_unknown(experiment, ("T", "t_window", "n_times"), "experiment")
    output = _require_mapping(raw.get("output"), "output")
    _reject_unknown(output, ("format", "path"), "output")

    try:
        datum = PresetDatum(**{**{"kind": "gaussian"}, **datum_raw})
        solver = SolverConfig(**solver_raw)
    except TypeError as exc:
        raise ValidationError(f"bad datum/solver section: {exc}") from exc

    sr_raw = scans.get("sr") or ()
    try:
        sr_pairs = tuple((float(s), float(r)) for s, r in sr_raw)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"scans.sr must be a list of [s, r] pairs: {exc}") from exc

    command = raw.get("command")
    if command is not None and command not in COMMANDS:
        raise ValidationError(f"config.command unknown: {command!r}")

    return ExperimentConfig(
        command=command,
        grid_n=int(grid.get("n", 1024)),
        grid_length=float(grid.get("length", 100.0)),
        datum=datum,
        solver=solver,
        t_scan=tuple(float(t) for t in scans.get("t") or ()),
        alpha_scan=tuple(float(a) for a in scans.get("alpha") or ()),
        beta_scan=tuple(float(b) for b in scans.get("beta") or ()),
        sr_pairs=sr_pairs,
        experiment_T=float(experiment.get("T", 1.0)),
        t_windows=tuple(float(w) for w in experiment.get("t_window") or (5.0, 10.0, 20.0)),
        n_times=int(experiment.get("n_times", 801)),
        output_format=str(output.get("format", "csv")),
        seed=int(raw.get("seed", 0)),
    )


def serialize_config(cfg: ExperimentConfig) -> str:
    """Canonical YAML text; parse/serialize round trips are idempotent."""
    return yaml.safe_dump(cfg.to_dict(), sort_keys=True, default_flow_style=None)
