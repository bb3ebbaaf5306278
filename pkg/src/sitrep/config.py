"""Declarative pipeline configuration (YAML file, CLI-overridable)."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import yaml

from .errors import ConfigError
from .providers import CAPABILITIES, SamplingParams

DETAIL_LEVEL_NAMES = ("less_detailed", "normal", "more_detailed")
DATE_STYLES = ("paper_colon", "dash")


@dataclass(frozen=True)
class ProviderConfig:
    backend: str = "mock"  # mock | remote
    endpoint: str | None = None
    model: str | None = None
    api_key_env: str = "SITREP_API_KEY"
    max_in_flight: int = 4
    capabilities: dict = field(default_factory=dict)  # capability -> override block

    def validate(self) -> None:
        if self.backend not in ("mock", "remote"):
            raise ConfigError(f"unknown provider backend: {self.backend}")
        if self.backend == "remote" and not self.endpoint:
            raise ConfigError("remote provider requires an endpoint")
        unknown = set(self.capabilities) - set(CAPABILITIES)
        if unknown:
            raise ConfigError(f"unknown capability overrides: {sorted(unknown)}")


@dataclass(frozen=True)
class PipelineConfig:
    corpus: str = ""
    expanded: str | None = None
    bias_csv: str | None = None
    scenario: str = "Situation Report"
    weeks: int = 2
    cluster_threshold: float = 0.8
    n_sets: int = 3
    dedup_threshold: float = 0.5
    snippet_size: int = 5
    top_k: int = 5
    seed: int = 0
    date_style: str = "paper_colon"
    generated_at: str | None = None  # pin for reproducible builds; default: now
    detail_levels: tuple[str, ...] = DETAIL_LEVEL_NAMES
    sampling: SamplingParams = field(default_factory=SamplingParams)
    provider: ProviderConfig = field(default_factory=ProviderConfig)
    prompt_files: dict = field(default_factory=dict)  # template name -> path

    def validate(self) -> None:
        if not self.corpus:
            raise ConfigError("config must name a corpus file")
        if self.weeks < 1:
            raise ConfigError("weeks must be >= 1")
        if not 0.0 <= self.cluster_threshold <= 2.0:
            raise ConfigError("cluster_threshold must be in [0, 2]")
        if not 0.0 <= self.dedup_threshold <= 1.0:
            raise ConfigError("dedup_threshold must be in [0, 1]")
        if self.n_sets < 1 or self.snippet_size < 1 or self.top_k < 1:
            raise ConfigError("n_sets, snippet_size, and top_k must be >= 1")
        if self.date_style not in DATE_STYLES:
            raise ConfigError(f"unknown date_style: {self.date_style}")
        bad_levels = [l for l in self.detail_levels if l not in DETAIL_LEVEL_NAMES]
        if bad_levels or not self.detail_levels:
            raise ConfigError(f"detail_levels must be drawn from {DETAIL_LEVEL_NAMES}")
        self.provider.validate()

    def to_dict(self) -> dict:
        d = asdict(self)
        d["detail_levels"] = list(self.detail_levels)
        return d


def config_from_dict(data: dict) -> PipelineConfig:
    data = dict(data)
    try:
        if "sampling" in data and isinstance(data["sampling"], dict):
            data["sampling"] = SamplingParams(**data["sampling"])
        if "provider" in data and isinstance(data["provider"], dict):
            data["provider"] = ProviderConfig(**data["provider"])
        if "detail_levels" in data:
            data["detail_levels"] = tuple(data["detail_levels"])
        cfg = PipelineConfig(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad config: {exc}") from exc
    cfg.validate()
    return cfg


def load_config(path: str | Path) -> PipelineConfig:
    """Read a YAML config; relative paths resolve against the config's directory."""
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"config is not valid YAML: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a YAML mapping")
    cfg = config_from_dict(data)
    base = path.parent
    resolved = replace(
        cfg,
        corpus=str((base / cfg.corpus).resolve()) if cfg.corpus else cfg.corpus,
        expanded=str((base / cfg.expanded).resolve()) if cfg.expanded else None,
        bias_csv=str((base / cfg.bias_csv).resolve()) if cfg.bias_csv else None,
        prompt_files={k: str((base / v).resolve()) for k, v in cfg.prompt_files.items()},
    )
    return resolved


def dump_config(cfg: PipelineConfig) -> str:
    return yaml.safe_dump(cfg.to_dict(), sort_keys=True)
