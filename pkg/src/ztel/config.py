"""Experiment configuration: TOML fixtures driving the whole pipeline."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

try:
    import tomllib  # py311+
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from .algebra import Automorphism
from .errors import ConfigError
from .nullity import Family


@dataclass
class ExperimentConfig:
    matrix: tuple[tuple[int, ...], ...]
    mode: str = "standard"
    domain_step: float = 0.25
    eta_kmax: int = 80
    seed: int = 0
    output_dir: str = "out"
    spearman_max: float = -0.9
    group_radius: int = 10
    families: list[Family] = field(default_factory=list)

    def automorphism(self) -> Automorphism:
        return Automorphism(self.matrix)

    def validate(self) -> None:
        if not 0.0 < self.domain_step <= 1.0:
            raise ConfigError("domain_step must lie in (0, 1]")
        if self.eta_kmax < 0:
            raise ConfigError("eta_kmax must be >= 0")
        if self.mode not in ("standard", "exponential"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        self.automorphism()  # raises NotUnimodular for bad matrices


def _families_from_table(table: dict) -> list[Family]:
    families = []
    for name, body in table.items():
        try:
            families.append(
                Family(
                    name=name,
                    kind=body["kind"],
                    scales=tuple(float(v) for v in body["scales"]),
                    axis=int(body.get("axis", 2)),
                    t_power=int(body.get("t_power", 0)),
                    t_scales=tuple(int(v) for v in body.get("t_scales", ())),
                    final_delta_max=float(body.get("final_delta_max", math.inf)),
                )
            )
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"family {name!r}: {exc}") from exc
    return families


def parse_config(text: str) -> ExperimentConfig:
    data = tomllib.loads(text)
    try:
        matrix = tuple(tuple(int(v) for v in row) for row in data["automorphism"]["matrix"])
    except KeyError as exc:
        raise ConfigError(f"missing required key: {exc}") from exc
    comp = data.get("compactification", {})
    exp = data.get("experiment", {})
    verdict = data.get("verdict", {})
    cfg = ExperimentConfig(
        matrix=matrix,
        mode=comp.get("mode", "standard"),
        domain_step=float(comp.get("domain_step", 0.25)),
        eta_kmax=int(comp.get("eta_kmax", 80)),
        seed=int(exp.get("seed", 0)),
        output_dir=str(exp.get("output_dir", "out")),
        spearman_max=float(verdict.get("spearman_max", -0.9)),
        group_radius=int(data.get("group", {}).get("radius", 10)),
        families=_families_from_table(data.get("families", {})),
    )
    cfg.validate()
    return cfg


def load_config(path_or_name: str) -> ExperimentConfig:
    """Load from a filesystem path, falling back to a packaged fixture name."""
    path = Path(path_or_name)
    if path.exists():
        return parse_config(path.read_text())
    name = path_or_name.removesuffix(".toml")
    pkg_file = resources.files("ztel").joinpath("configs", f"{name}.toml")
    if pkg_file.is_file():
        return parse_config(pkg_file.read_text())
    raise ConfigError(f"no such config file or packaged fixture: {path_or_name}")


def packaged_fixture_names() -> list[str]:
    return sorted(
        p.name.removesuffix(".toml")
        for p in resources.files("ztel").joinpath("configs").iterdir()
        if p.name.endswith(".toml")
    )
