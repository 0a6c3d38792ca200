"""Run configuration: strict JSON parsing with round-trip serialization.

Unknown keys are rejected with the offending key named in the error, so a
typo never silently falls back to a default.  ``inf`` exponents are written
as the string ``"inf"``.  Fields left out of the file stay ``None`` where a
command-line flag may fill them in (seed, output directory); everything else
gets the documented default.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .domain import SHAPES, DomainSpec
from .errors import ConfigError

KNOWN_EXPERIMENTS = (
    "check-partition",
    "scan-bernstein",
    "scan-gradient",
    "scan-bilinear",
    "scan-bilinear-inhomogeneous",
    "probe-appendix-a",
    "scan-schrodinger",
)

DEFAULT_S_GRID = (0.5, 1.0, 1.5, 2.5, 3.5)
DEFAULT_P_TUPLE = (1.0, 2.0, 2.0, 2.0, 2.0)
DEFAULT_ALPHA_GRID = (0.0, 1.0)
DEFAULT_P_GRID = (1.0, 2.0, np.inf)
DEFAULT_T_EXPONENTS = tuple(range(-12, 5))


def _expect_keys(mapping, allowed, path):
    for key in mapping:
        if key not in allowed:
            raise ConfigError(f"unknown key '{path}.{key}'" if path
                              else f"unknown key '{key}'")


def _parse_exponent(value, path):
    if value == "inf":
        return np.inf
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"'{path}' must be a number >= 1 or \"inf\", got {value!r}")
    v = float(value)
    if not v >= 1.0:  # also rejects nan
        raise ConfigError(f"'{path}' must be >= 1, got {value!r}")
    return v


def _dump_exponent(value):
    if value == np.inf:
        return "inf"
    return float(value)


@dataclass(frozen=True)
class PotentialConfig:
    kind: str = "none"          # none | constant | well
    amplitude: float = 0.0

    def sampler(self, extents):
        """Pointwise sampler for the configured potential, or None."""
        if self.kind == "none":
            return None
        amp = float(self.amplitude)
        if self.kind == "constant":
            return lambda pts: np.full(np.atleast_2d(pts).shape[0], amp)
        if self.kind == "well":
            centers = [0.5 * L for L in extents]
            halves = [0.25 * L for L in extents]

            def well(pts):
                pts2 = np.atleast_2d(pts)
                inside = np.ones(pts2.shape[0], dtype=bool)
                for d, (c, hw) in enumerate(zip(centers, halves)):
                    inside &= np.abs(pts2[:, d] - c) <= hw
                return np.where(inside, amp, 0.0)

            return well
        raise ConfigError(f"unknown potential kind {self.kind!r}")

    @staticmethod
    def from_dict(d, path):
        _expect_keys(d, ("kind", "amplitude"), path)
        kind = d.get("kind", "none")
        if kind not in ("none", "constant", "well"):
            raise ConfigError(f"'{path}.kind' must be none, constant or well, got {kind!r}")
        return PotentialConfig(kind=kind, amplitude=float(d.get("amplitude", 0.0)))

    def to_dict(self):
        return {"kind": self.kind, "amplitude": self.amplitude}


@dataclass(frozen=True)
class DomainConfig:
    shape: str = "interval"
    extents: tuple[float, ...] = (math.pi,)
    resolution: tuple[int, ...] = (63,)
    potential: PotentialConfig = field(default_factory=PotentialConfig)

    def spec(self) -> DomainSpec:
        return DomainSpec(shape=self.shape, extents=self.extents,
                          resolution=self.resolution,
                          potential=self.potential.sampler(self.extents))

    def free_spec(self) -> DomainSpec:
        return DomainSpec(shape=self.shape, extents=self.extents,
                          resolution=self.resolution, potential=None)

    @staticmethod
    def from_dict(d, path="domain"):
        _expect_keys(d, ("shape", "extents", "resolution", "potential"), path)
        shape = d.get("shape", "interval")
        if shape not in SHAPES:
            raise ConfigError(f"'{path}.shape' must be one of {SHAPES}, got {shape!r}")
        extents = d.get("extents", [math.pi])
        if isinstance(extents, (int, float)):
            extents = [extents]
        resolution = d.get("resolution", [63])
        if isinstance(resolution, int):
            resolution = [resolution]
        potential = PotentialConfig.from_dict(d.get("potential", {}),
                                              f"{path}.potential")
        return DomainConfig(shape=shape, extents=tuple(float(e) for e in extents),
                            resolution=tuple(int(n) for n in resolution),
                            potential=potential)

    def to_dict(self):
        return {"shape": self.shape, "extents": list(self.extents),
                "resolution": list(self.resolution),
                "potential": self.potential.to_dict()}


@dataclass(frozen=True)
class SchrodingerConfig:
    s: float = 0.5
    p: float = 2.0
    q: float = 2.0

    @staticmethod
    def from_dict(d, path):
        _expect_keys(d, ("s", "p", "q"), path)
        return SchrodingerConfig(s=float(d.get("s", 0.5)),
                                 p=_parse_exponent(d.get("p", 2.0), f"{path}.p"),
                                 q=_parse_exponent(d.get("q", 2.0), f"{path}.q"))

    def to_dict(self):
        return {"s": self.s, "p": _dump_exponent(self.p), "q": _dump_exponent(self.q)}


@dataclass(frozen=True)
class ScanParameters:
    s_grid: tuple[float, ...] = DEFAULT_S_GRID
    q: float = 2.0
    p_tuple: tuple[float, ...] = DEFAULT_P_TUPLE
    alpha_grid: tuple[float, ...] = DEFAULT_ALPHA_GRID
    p_grid: tuple[float, ...] = DEFAULT_P_GRID
    t_exponents: tuple[int, ...] = DEFAULT_T_EXPONENTS
    epsilon: float = 0.5
    schrodinger: SchrodingerConfig = field(default_factory=SchrodingerConfig)

    @staticmethod
    def from_dict(d, path="parameters"):
        _expect_keys(d, ("s_grid", "q", "p_tuple", "alpha_grid", "p_grid",
                         "t_exponents", "epsilon", "schrodinger"), path)
        return ScanParameters(
            s_grid=tuple(float(s) for s in d.get("s_grid", DEFAULT_S_GRID)),
            q=_parse_exponent(d.get("q", 2.0), f"{path}.q"),
            p_tuple=tuple(_parse_exponent(p, f"{path}.p_tuple")
                          for p in d.get("p_tuple", DEFAULT_P_TUPLE)),
            alpha_grid=tuple(float(a) for a in d.get("alpha_grid", DEFAULT_ALPHA_GRID)),
            p_grid=tuple(_parse_exponent(p, f"{path}.p_grid")
                         for p in d.get("p_grid", DEFAULT_P_GRID)),
            t_exponents=tuple(int(k) for k in d.get("t_exponents", DEFAULT_T_EXPONENTS)),
            epsilon=float(d.get("epsilon", 0.5)),
            schrodinger=SchrodingerConfig.from_dict(d.get("schrodinger", {}),
                                                    f"{path}.schrodinger"),
        )

    def to_dict(self):
        return {
            "s_grid": list(self.s_grid),
            "q": _dump_exponent(self.q),
            "p_tuple": [_dump_exponent(p) for p in self.p_tuple],
            "alpha_grid": list(self.alpha_grid),
            "p_grid": [_dump_exponent(p) for p in self.p_grid],
            "t_exponents": list(self.t_exponents),
            "epsilon": self.epsilon,
            "schrodinger": self.schrodinger.to_dict(),
        }


@dataclass(frozen=True)
class EnsembleConfig:
    seed: int | None = None
    count: int | None = None

    @staticmethod
    def from_dict(d, path="ensemble"):
        _expect_keys(d, ("seed", "count"), path)
        seed = d.get("seed")
        count = d.get("count")
        return EnsembleConfig(seed=None if seed is None else int(seed),
                              count=None if count is None else int(count))

    def to_dict(self):
        out = {}
        if self.seed is not None:
            out["seed"] = self.seed
        if self.count is not None:
            out["count"] = self.count
        return out


@dataclass(frozen=True)
class RunConfig:
    """Domain, experiment selection, parameter grids, ensemble and output."""

    domain: DomainConfig = field(default_factory=DomainConfig)
    experiments: tuple[str, ...] = ()
    parameters: ScanParameters = field(default_factory=ScanParameters)
    ensemble: EnsembleConfig = field(default_factory=EnsembleConfig)
    output_dir: str | None = None

    @staticmethod
    def from_dict(d) -> "RunConfig":
        _expect_keys(d, ("domain", "experiments", "parameters", "ensemble",
                         "output_dir"), "")
        experiments = tuple(d.get("experiments", ()))
        for name in experiments:
            if name not in KNOWN_EXPERIMENTS:
                raise ConfigError(f"unknown experiment '{name}' in 'experiments'; "
                                  f"known: {', '.join(KNOWN_EXPERIMENTS)}")
        out_dir = d.get("output_dir")
        if out_dir is not None and not isinstance(out_dir, str):
            raise ConfigError(f"'output_dir' must be a string, got {out_dir!r}")
        return RunConfig(
            domain=DomainConfig.from_dict(d.get("domain", {})),
            experiments=experiments,
            parameters=ScanParameters.from_dict(d.get("parameters", {})),
            ensemble=EnsembleConfig.from_dict(d.get("ensemble", {})),
            output_dir=out_dir,
        )

    def to_dict(self) -> dict:
        out = {
            "domain": self.domain.to_dict(),
            "experiments": list(self.experiments),
            "parameters": self.parameters.to_dict(),
            "ensemble": self.ensemble.to_dict(),
        }
        if self.output_dir is not None:
            out["output_dir"] = self.output_dir
        return out


def load_config(path) -> RunConfig:
    """Parse a JSON run configuration file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config root must be an object, got {type(raw).__name__}")
    return RunConfig.from_dict(raw)


def dump_config(config: RunConfig) -> str:
    return json.dumps(config.to_dict(), indent=2, sort_keys=True) + "\n"
