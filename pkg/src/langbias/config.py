"""Run configuration: a TOML file plus command-line overrides (flags win).

Example::

    seed = 7
    model = "both"            # nb | svm | both
    train_fraction = 0.8
    eor_variant = "min"       # paper | min
    out = "runs/music"

    [preprocess]
    lowercase = true
    stopwords = "default"     # default | none
    min_term_length = 1

    [svm]
    tolerance = 1e-4
    max_iterations = 1000

    [[data]]
    language = "en"
    domain = "music"
    path = "cls-acl10-processed/en/music/unlabeled.processed"
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field, fields

from .corpus import Language
from .metrics import EorVariant

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

MODELS = ("nb", "svm")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class DataSource:
    language: Language
    domain: str
    path: str

    @classmethod
    def parse(cls, spec: str) -> "DataSource":
        """``LANG:DOMAIN:PATH``, e.g. ``fr:music:fr/music/unlabeled.processed``."""
        parts = spec.split(":", 2)
        if len(parts) != 3:
            raise ConfigError(f"data source must be LANG:DOMAIN:PATH, got {spec!r}")
        try:
            return cls(Language.parse(parts[0]), parts[1], parts[2])
        except ValueError as exc:
            raise ConfigError(str(exc)) from None


@dataclass
class RunConfig:
    data: list[DataSource] = field(default_factory=list)
    seed: int = 0
    model: str = "both"
    alpha: float = 1.0
    c: float = 1.0
    train_fraction: float = 0.8
    eor_variant: str = EorVariant.MIN_COMPONENT.value
    out: str = "langbias-out"
    lowercase: bool = True
    stopwords: str = "default"
    stopwords_en: str | None = None
    stopwords_fr: str | None = None
    min_term_length: int = 1
    svm_tolerance: float = 1e-4
    svm_max_iterations: int = 1000
    trials: int = 25
    folds: int = 5

    @property
    def models(self) -> tuple[str, ...]:
        return MODELS if self.model == "both" else (self.model,)

    @property
    def domains(self) -> list[str]:
        seen = []
        for src in self.data:
            if src.domain not in seen:
                seen.append(src.domain)
        return seen

    def validate(self, check_paths: bool = True) -> "RunConfig":
        if self.model not in (*MODELS, "both"):
            raise ConfigError(f"model must be nb, svm or both, got {self.model!r}")
        if not 0 < self.train_fraction < 1:
            raise ConfigError("train_fraction must lie in (0, 1)")
        if self.alpha <= 0 or self.c <= 0:
            raise ConfigError("alpha and c must be positive")
        try:
            EorVariant(self.eor_variant)
        except ValueError:
            raise ConfigError(f"eor_variant must be paper or min, got {self.eor_variant!r}") from None
        if self.stopwords not in ("default", "none"):
            raise ConfigError("stopwords must be 'default' or 'none'")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError("seed must be a non-negative integer")
        if check_paths:
            for p in [s.path for s in self.data] + [p for p in (self.stopwords_en, self.stopwords_fr) if p]:
                if not os.path.isfile(p):
                    raise ConfigError(f"no such file: {p}")
        return self

    def to_items(self, include_out: bool = False) -> list[tuple[str, str]]:
        """Flattened ``config.*`` entries; the output directory is left out unless asked for."""
        items = []
        for f in fields(self):
            if f.name == "data" or (f.name == "out" and not include_out):
                continue
            items.append((f"config.{f.name}", _render(getattr(self, f.name))))
        for i, src in enumerate(self.data):
            items.append((f"config.data.{i}", f"{src.language.code}:{src.domain}:{src.path}"))
        return items


def _render(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return repr(v)
    return str(v)


_SECTIONS = {
    "preprocess": {"lowercase": "lowercase", "stopwords": "stopwords", "stopwords_en": "stopwords_en",
                   "stopwords_fr": "stopwords_fr", "min_term_length": "min_term_length"},
    "svm": {"tolerance": "svm_tolerance", "max_iterations": "svm_max_iterations", "c": "c"},
    "nb": {"alpha": "alpha"},
    "tune": {"trials": "trials", "folds": "folds"},
}


def _flatten(raw: dict, base_dir: str) -> dict:
    flat = {}
    names = {f.name for f in fields(RunConfig)}
    for key, value in raw.items():
        if key == "data":
            flat["data"] = []
            for entry in value:
                path = entry["path"]
                if not os.path.isabs(path):
                    path = os.path.normpath(os.path.join(base_dir, path))
                flat["data"].append(DataSource(Language.parse(entry["language"]), entry["domain"], path))
        elif key in _SECTIONS:
            for sub, sub_value in value.items():
                if sub not in _SECTIONS[key]:
                    raise ConfigError(f"unknown key [{key}].{sub}")
                target = _SECTIONS[key][sub]
                if target in ("stopwords_en", "stopwords_fr") and not os.path.isabs(sub_value):
                    sub_value = os.path.normpath(os.path.join(base_dir, sub_value))
                flat[target] = sub_value
        elif key in names:
            flat[key] = value
        else:
            raise ConfigError(f"unknown config key {key!r}")
    return flat


def read_config_file(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return _flatten(raw, os.path.dirname(os.path.abspath(path)))


def build_config(files: list[str] = (), overrides: dict | None = None) -> RunConfig:
    """Merge config files in order, then non-None ``overrides``."""
    merged: dict = {}
    for path in files:
        merged.update(read_config_file(path))
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value
    float_keys = ("alpha", "c", "train_fraction", "svm_tolerance")
    for k in float_keys:
        if k in merged:
            merged[k] = float(merged[k])
    return RunConfig(**merged)
